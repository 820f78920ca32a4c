//! Delay-Doppler signal processing for Zak-OTFS.
//!
//! The crate models one frame of `M * N` samples three ways: as time
//! samples, as frequency bins and as a quasi-periodic delay-Doppler grid,
//! connected by unitary discrete Zak transforms ([`zak`]). On top of that
//! sit pulsone synthesis ([`pulsone`]), doubly-spread channels
//! ([`channel`]), twisted convolution ([`twisted`]), TDM/FDM/OTFS
//! transceivers ([`modem`]) and the fading/predictability/aliasing metrics
//! in [`analysis`].
//!
//! Indices `[k, l]` always mean (delay bin, Doppler bin).

pub mod analysis;
pub mod channel;
pub mod crystal;
pub mod dft;
pub mod error;
pub mod filter;
pub mod modem;
pub mod params;
pub mod pulsone;
pub mod selftest;
pub mod signal;
pub mod twisted;
pub mod zak;

#[cfg(test)]
mod testutil;

pub use channel::{apply_channel, fig7_channel, ChannelMode, ChannelPath, ChannelSpec};
pub use crystal::{validate_crystallization, Crystallization};
pub use error::{Error, Result};
pub use filter::{DDFilter, PulseFilter};
pub use num_complex::Complex64;
pub use params::FrameParams;
pub use signal::{DDSignal, FreqSignal, SymbolGrid, TimeSignal};
