//! Doubly-spread channels given as a finite list of (gain, delay, Doppler)
//! paths, and their action on time-domain frames.
//!
//! Two modes:
//!
//! * `Cyclic` treats the frame as one period of an `MN`-periodic sequence.
//!   Delays must be whole samples and Dopplers whole bins of `1/T`, so every
//!   path maps a periodic sequence to a periodic sequence and the DD picture
//!   is exact.
//! * `Framed` allows any delay and Doppler. Fractional delays use the
//!   periodic-sinc (band-limited) interpolant of the frame, and the Doppler
//!   phase is evaluated at the actual sample times `n / B`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dft::{cis_ratio, fft_unitary, ifft_unitary};
use crate::error::{Error, Result};
use crate::params::FrameParams;
use crate::signal::TimeSignal;

/// Tolerance, in bins, for treating a path parameter as on the lattice.
pub const GRID_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPath {
    pub gain: Complex64,
    /// Seconds, non-negative.
    pub delay: f64,
    /// Hz, signed.
    pub doppler: f64,
}

impl ChannelPath {
    pub fn new(gain: Complex64, delay: f64, doppler: f64) -> Self {
        Self {
            gain,
            delay,
            doppler,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelMode {
    Cyclic,
    Framed,
}

impl std::str::FromStr for ChannelMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclic" => Ok(Self::Cyclic),
            "framed" => Ok(Self::Framed),
            other => Err(Error::Invalid(format!(
                "unknown channel mode {other:?}, expected cyclic or framed"
            ))),
        }
    }
}

/// A sparse delay-Doppler spreading function.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    paths: Vec<ChannelPath>,
    mode: ChannelMode,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathJson {
    gain: [f64; 2],
    delay_s: f64,
    doppler_hz: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelJson {
    mode: ChannelMode,
    paths: Vec<PathJson>,
}

impl ChannelSpec {
    pub fn new(paths: Vec<ChannelPath>, mode: ChannelMode) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::EmptyChannel);
        }
        for (index, p) in paths.iter().enumerate() {
            if !(p.gain.re.is_finite() && p.gain.im.is_finite()) {
                return Err(Error::InvalidPath {
                    index,
                    reason: "gain must be finite".into(),
                });
            }
            if !(p.delay.is_finite() && p.delay >= 0.0) {
                return Err(Error::InvalidPath {
                    index,
                    reason: format!("delay_s must be finite and >= 0, got {}", p.delay),
                });
            }
            if !p.doppler.is_finite() {
                return Err(Error::InvalidPath {
                    index,
                    reason: format!("doppler_hz must be finite, got {}", p.doppler),
                });
            }
        }
        Ok(Self { paths, mode })
    }

    /// A single on-grid path expressed in lattice units of `fp`.
    pub fn on_grid(fp: &FrameParams, taps: &[(Complex64, i64, i64)]) -> Result<Self> {
        let paths = taps
            .iter()
            .map(|&(g, d, l)| {
                ChannelPath::new(
                    g,
                    d as f64 * fp.sample_period(),
                    l as f64 * fp.doppler_bin(),
                )
            })
            .collect();
        Self::new(paths, ChannelMode::Cyclic)
    }

    pub fn identity(mode: ChannelMode) -> Self {
        Self {
            paths: vec![ChannelPath::new(Complex64::new(1.0, 0.0), 0.0, 0.0)],
            mode,
        }
    }

    pub fn paths(&self) -> &[ChannelPath] {
        &self.paths
    }

    pub fn mode(&self) -> ChannelMode {
        self.mode
    }

    pub fn with_mode(&self, mode: ChannelMode) -> Self {
        Self {
            paths: self.paths.clone(),
            mode,
        }
    }

    pub fn delay_spread(&self) -> f64 {
        spread(self.paths.iter().map(|p| p.delay))
    }

    pub fn doppler_spread(&self) -> f64 {
        spread(self.paths.iter().map(|p| p.doppler))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ChannelJson = serde_json::from_str(text)?;
        let paths = raw
            .paths
            .into_iter()
            .map(|p| {
                ChannelPath::new(
                    Complex64::new(p.gain[0], p.gain[1]),
                    p.delay_s,
                    p.doppler_hz,
                )
            })
            .collect();
        Self::new(paths, raw.mode)
    }

    pub fn to_json(&self) -> String {
        let raw = ChannelJson {
            mode: self.mode,
            paths: self
                .paths
                .iter()
                .map(|p| PathJson {
                    gain: [p.gain.re, p.gain.im],
                    delay_s: p.delay,
                    doppler_hz: p.doppler,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }

    /// Integer (delay bin, Doppler bin) of every path, or the first path that
    /// is off the lattice of `fp`.
    pub fn lattice_taps(&self, fp: &FrameParams) -> Result<Vec<(Complex64, i64, i64)>> {
        self.paths
            .iter()
            .enumerate()
            .map(|(index, p)| {
                let d = fp.delay_bins(p.delay);
                let l = fp.doppler_bins(p.doppler);
                let (dr, lr) = (d.round(), l.round());
                if (d - dr).abs() > GRID_TOL {
                    return Err(Error::OffGridPath {
                        index,
                        field: "delay_s",
                        value: p.delay,
                        bins: d,
                    });
                }
                if (l - lr).abs() > GRID_TOL {
                    return Err(Error::OffGridPath {
                        index,
                        field: "doppler_hz",
                        value: p.doppler,
                        bins: l,
                    });
                }
                Ok((p.gain, dr as i64, lr as i64))
            })
            .collect()
    }
}

fn spread(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    let min = values.fold(f64::INFINITY, f64::min);
    max - min
}

/// Delays of the four-path example channel, seconds.
pub const FIG7_DELAYS: [f64; 4] = [2e-6, 2e-6, 3e-6, 4e-6];
/// Dopplers of the four-path example channel, Hz.
pub const FIG7_DOPPLERS: [f64; 4] = [0.0, -950.0, 0.0, 750.0];

/// The four-path example channel: delays (2, 2, 3, 4) us and Dopplers
/// (0, -950, 0, +750) Hz, in framed mode, with caller-supplied gains.
pub fn fig7_channel(gains: [Complex64; 4]) -> ChannelSpec {
    let paths = (0..4)
        .map(|i| ChannelPath::new(gains[i], FIG7_DELAYS[i], FIG7_DOPPLERS[i]))
        .collect();
    ChannelSpec::new(paths, ChannelMode::Framed).expect("constant paths are valid")
}

/// Received frame `y[n] = sum_i h_i x(n/B - tau_i) e^{j 2 pi nu_i (n/B - tau_i)}`.
pub fn apply_channel(chan: &ChannelSpec, x: &TimeSignal) -> Result<TimeSignal> {
    let fp = *x.params();
    let mut y = vec![Complex64::new(0.0, 0.0); fp.len()];
    match chan.mode {
        ChannelMode::Cyclic => {
            let taps = chan.lattice_taps(&fp)?;
            for (h, d, l) in taps {
                add_cyclic_path(&mut y, x.samples(), h, d, l);
            }
        }
        ChannelMode::Framed => {
            for p in &chan.paths {
                add_framed_path(&mut y, x.samples(), &fp, p);
            }
        }
    }
    TimeSignal::new(fp, y)
}

fn add_cyclic_path(y: &mut [Complex64], x: &[Complex64], h: Complex64, d: i64, l: i64) {
    let len = x.len() as i64;
    for (n, out) in y.iter_mut().enumerate() {
        let shifted = n as i64 - d;
        *out += h * x[shifted.rem_euclid(len) as usize] * cis_ratio(l * shifted, len);
    }
}

fn add_framed_path(y: &mut [Complex64], x: &[Complex64], fp: &FrameParams, p: &ChannelPath) {
    let delayed = fractional_delay(x, fp.delay_bins(p.delay));
    let dt = fp.sample_period();
    for (n, (out, v)) in y.iter_mut().zip(delayed).enumerate() {
        let t = n as f64 * dt - p.delay;
        let phase = 2.0 * std::f64::consts::PI * p.doppler * t;
        *out += p.gain * v * Complex64::from_polar(1.0, phase);
    }
}

/// Periodic band-limited delay of `x` by `shift` samples (not necessarily
/// an integer). Integer shifts reduce to cyclic shifts.
pub fn fractional_delay(x: &[Complex64], shift: f64) -> Vec<Complex64> {
    let len = x.len();
    if shift.fract() == 0.0 {
        let s = (shift as i64).rem_euclid(len as i64) as usize;
        return (0..len).map(|n| x[(n + len - s) % len]).collect();
    }
    let mut spec = x.to_vec();
    fft_unitary(&mut spec);
    for (q, v) in spec.iter_mut().enumerate() {
        // centered frequency index; the Nyquist bin of an even-length frame
        // is split evenly between +L/2 and -L/2, giving a real cosine factor
        if 2 * q == len {
            *v *= (std::f64::consts::PI * shift).cos();
            continue;
        }
        let f = if 2 * q < len {
            q as f64
        } else {
            q as f64 - len as f64
        };
        *v *= Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * f * shift / len as f64);
    }
    ifft_unitary(&mut spec);
    spec
}

/// Adds circularly-symmetric complex Gaussian noise of per-sample power
/// `noise_power`. Deterministic for a fixed `seed`.
pub fn add_awgn(x: &TimeSignal, noise_power: f64, seed: u64) -> Result<TimeSignal> {
    if !(noise_power.is_finite() && noise_power >= 0.0) {
        return Err(Error::NegativeNoisePower(noise_power));
    }
    if noise_power == 0.0 {
        return Ok(x.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, (noise_power / 2.0).sqrt()).expect("finite std");
    let samples = x
        .samples()
        .iter()
        .map(|v| v + Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng)))
        .collect();
    TimeSignal::new(*x.params(), samples)
}

/// `count` i.i.d. unit-power circularly-symmetric Gaussian symbols.
pub fn gaussian_symbols(count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("finite std");
    (0..count)
        .map(|_| Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng)))
        .collect()
}
