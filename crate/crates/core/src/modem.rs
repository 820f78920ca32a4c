//! TDM, FDM and OTFS transceivers over a common frame of `M * N` symbols.
//!
//! Each pipeline is linear in the symbols and has no equalizer; the
//! demodulator output is the raw sampled modulation-domain signal.

use num_complex::Complex64;

use crate::channel::{apply_channel, ChannelSpec};
use crate::dft::{dft, idft};
use crate::error::{Error, Result};
use crate::filter::{DDFilter, PulseFilter};
use crate::params::FrameParams;
use crate::signal::{DDSignal, SymbolGrid, TimeSignal};
use crate::twisted::twisted_conv;
use crate::zak::{dzt, idzt, quasi_extend};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModemKind {
    Tdm,
    Fdm,
    Otfs,
}

impl ModemKind {
    pub const ALL: [ModemKind; 3] = [ModemKind::Tdm, ModemKind::Fdm, ModemKind::Otfs];

    pub fn name(self) -> &'static str {
        match self {
            ModemKind::Tdm => "tdm",
            ModemKind::Fdm => "fdm",
            ModemKind::Otfs => "otfs",
        }
    }
}

impl std::str::FromStr for ModemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tdm" => Ok(Self::Tdm),
            "fdm" => Ok(Self::Fdm),
            "otfs" => Ok(Self::Otfs),
            other => Err(Error::Invalid(format!(
                "unknown modem {other:?}, expected tdm, fdm or otfs"
            ))),
        }
    }
}

impl std::fmt::Display for ModemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Transmit/receive pulse shaping shared by all three modems.
///
/// `RootRaisedCosine` uses the delay roll-off for TDM, the Doppler roll-off
/// for FDM and both (separably) for OTFS. The receive filter uses the same
/// taps as the transmit filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterChoice {
    Delta,
    RootRaisedCosine {
        delay_rolloff: f64,
        doppler_rolloff: f64,
        span: usize,
    },
}

impl FilterChoice {
    pub const DEFAULT_SPAN: usize = 1;

    pub fn dd(&self, fp: FrameParams) -> Result<DDFilter> {
        match *self {
            FilterChoice::Delta => Ok(DDFilter::delta(fp)),
            FilterChoice::RootRaisedCosine {
                delay_rolloff,
                doppler_rolloff,
                span,
            } => DDFilter::root_raised_cosine(fp, delay_rolloff, doppler_rolloff, span),
        }
    }

    pub fn time(&self) -> Result<PulseFilter> {
        match *self {
            FilterChoice::Delta => Ok(PulseFilter::delta()),
            FilterChoice::RootRaisedCosine {
                delay_rolloff,
                span,
                ..
            } => PulseFilter::root_raised_cosine(delay_rolloff, span),
        }
    }

    pub fn freq(&self) -> Result<PulseFilter> {
        match *self {
            FilterChoice::Delta => Ok(PulseFilter::delta()),
            FilterChoice::RootRaisedCosine {
                doppler_rolloff,
                span,
                ..
            } => PulseFilter::root_raised_cosine(doppler_rolloff, span),
        }
    }
}

impl std::str::FromStr for FilterChoice {
    type Err = Error;

    /// `delta`, `rc:<a>,<b>` or `rc:<a>,<b>,<span>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "delta" {
            return Ok(Self::Delta);
        }
        let bad = || {
            Error::Invalid(format!(
                "bad filter {s:?}, expected delta or rc:<delay rolloff>,<doppler rolloff>[,<span>]"
            ))
        };
        let rest = s.strip_prefix("rc:").ok_or_else(bad)?;
        let parts: Vec<&str> = rest.split(',').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(bad());
        }
        let delay_rolloff: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let doppler_rolloff: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let span = match parts.get(2) {
            Some(p) => p.trim().parse().map_err(|_| bad())?,
            None => Self::DEFAULT_SPAN,
        };
        for r in [delay_rolloff, doppler_rolloff] {
            if !(0.0..=1.0).contains(&r) {
                return Err(bad());
            }
        }
        Ok(Self::RootRaisedCosine {
            delay_rolloff,
            doppler_rolloff,
            span,
        })
    }
}

/// Quasi-periodic DD signal from the symbols, transmit filter, inverse Zak.
pub fn otfs_modulate(x: &SymbolGrid, w_tx: &DDFilter) -> Result<TimeSignal> {
    let shaped = if w_tx.is_delta() {
        x.to_dd()
    } else {
        twisted_conv(w_tx, &x.to_dd())?
    };
    Ok(idzt(&shaped))
}

/// Zak transform, receive filter, sampling on the information grid.
pub fn otfs_demodulate(r: &TimeSignal, w_rx: &DDFilter) -> Result<DDSignal> {
    let y = dzt(r);
    if w_rx.is_delta() {
        Ok(y)
    } else {
        twisted_conv(w_rx, &y)
    }
}

fn check_symbols(fp: &FrameParams, x: &[Complex64]) -> Result<()> {
    if x.len() == fp.len() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected: fp.len(),
            got: x.len(),
        })
    }
}

/// Symbols on the time grid `k / B`, shaped by `w_tx`.
pub fn tdm_modulate(fp: FrameParams, x: &[Complex64], w_tx: &PulseFilter) -> Result<TimeSignal> {
    check_symbols(&fp, x)?;
    TimeSignal::new(fp, w_tx.apply(x))
}

/// Receive filter, then sample at `k / B`.
pub fn tdm_demodulate(r: &TimeSignal, w_rx: &PulseFilter) -> Vec<Complex64> {
    w_rx.apply(r.samples())
}

/// Symbols on the frequency grid `q / T`, shaped by `w_tx`, inverse DFT.
pub fn fdm_modulate(fp: FrameParams, x: &[Complex64], w_tx: &PulseFilter) -> Result<TimeSignal> {
    check_symbols(&fp, x)?;
    TimeSignal::new(fp, idft(&w_tx.apply(x)))
}

/// DFT, receive filter, sample at `q / T`.
pub fn fdm_demodulate(r: &TimeSignal, w_rx: &PulseFilter) -> Vec<Complex64> {
    w_rx.apply(&dft(r.samples()))
}

/// A configured transceiver. Symbols are addressed by a linear index; for
/// OTFS index `k * N + l` is the cell `[k, l]`.
#[derive(Debug, Clone)]
pub struct Modem {
    kind: ModemKind,
    fp: FrameParams,
    shaping: Shaping,
}

#[derive(Debug, Clone)]
enum Shaping {
    Pulse(PulseFilter),
    Dd(DDFilter),
}

impl Modem {
    pub fn new(kind: ModemKind, fp: FrameParams, filters: &FilterChoice) -> Result<Self> {
        let shaping = match kind {
            ModemKind::Tdm => Shaping::Pulse(filters.time()?),
            ModemKind::Fdm => Shaping::Pulse(filters.freq()?),
            ModemKind::Otfs => Shaping::Dd(filters.dd(fp)?),
        };
        Ok(Self { kind, fp, shaping })
    }

    pub fn kind(&self) -> ModemKind {
        self.kind
    }

    pub fn params(&self) -> &FrameParams {
        &self.fp
    }

    pub fn dd_filter(&self) -> Option<&DDFilter> {
        match &self.shaping {
            Shaping::Dd(w) => Some(w),
            Shaping::Pulse(_) => None,
        }
    }

    pub fn transmit(&self, x: &[Complex64]) -> Result<TimeSignal> {
        check_symbols(&self.fp, x)?;
        match (&self.shaping, self.kind) {
            (Shaping::Dd(w), _) => otfs_modulate(&SymbolGrid::new(self.fp, x.to_vec())?, w),
            (Shaping::Pulse(w), ModemKind::Tdm) => tdm_modulate(self.fp, x, w),
            (Shaping::Pulse(w), _) => fdm_modulate(self.fp, x, w),
        }
    }

    pub fn receive(&self, r: &TimeSignal) -> Result<Vec<Complex64>> {
        self.fp.check_same(r.params())?;
        match (&self.shaping, self.kind) {
            (Shaping::Dd(w), _) => Ok(otfs_demodulate(r, w)?.into_vec()),
            (Shaping::Pulse(w), ModemKind::Tdm) => Ok(tdm_demodulate(r, w)),
            (Shaping::Pulse(w), _) => Ok(fdm_demodulate(r, w)),
        }
    }

    /// transmit, channel, receive
    pub fn run(&self, chan: &ChannelSpec, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let s = self.transmit(x)?;
        let r = apply_channel(chan, &s)?;
        self.receive(&r)
    }

    /// Output for a single unit symbol at linear index `k`.
    pub fn unit_response(&self, chan: &ChannelSpec, k: usize) -> Result<Vec<Complex64>> {
        if k >= self.fp.len() {
            return Err(Error::Invalid(format!(
                "symbol index {k} outside frame of {}",
                self.fp.len()
            )));
        }
        let mut x = vec![Complex64::new(0.0, 0.0); self.fp.len()];
        x[k] = Complex64::new(1.0, 0.0);
        self.run(chan, &x)
    }
}

/// Where an OTFS probe window starts, relative to the transmitted cell.
///
/// The window is one period long along each axis and starts at the
/// smallest delay and Doppler offset the channel and both filters can
/// produce, so a channel whose spreads fit inside the periods maps each
/// path to exactly one window cell.
pub fn probe_origin(
    chan: &ChannelSpec,
    fp: &FrameParams,
    filters: &FilterChoice,
) -> Result<(i64, i64)> {
    let w = filters.dd(*fp)?;
    let ((wk, _), (wl, _)) = w.extent();
    let dmin = chan
        .paths()
        .iter()
        .map(|p| fp.delay_bins(p.delay))
        .fold(f64::INFINITY, f64::min);
    let lmin = chan
        .paths()
        .iter()
        .map(|p| fp.doppler_bins(p.doppler))
        .fold(f64::INFINITY, f64::min);
    Ok((
        (dmin + crate::channel::GRID_TOL).floor() as i64 + 2 * wk,
        (lmin + crate::channel::GRID_TOL).floor() as i64 + 2 * wl,
    ))
}

/// Effective response of the pipeline to the symbol at linear index `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResponse {
    /// Offset of entry 0 relative to the transmitted symbol, (delay, Doppler)
    /// for OTFS; `(0, 0)` for TDM and FDM.
    pub origin: (i64, i64),
    /// TDM/FDM: entry `n` multiplies `x[k]` at output `k + n` (cyclic).
    /// OTFS: entry `a * N + b` is the response at offset
    /// `origin + (a, b)` with the transmitted cell's twisted phase
    /// `e^{j 2 pi k0 (b + origin.1) / (MN)}` removed, so an on-grid
    /// crystalline channel gives the same values for every cell.
    pub values: Vec<Complex64>,
}

pub fn effective_filter_probe(
    kind: ModemKind,
    chan: &ChannelSpec,
    fp: &FrameParams,
    filters: &FilterChoice,
    k: usize,
) -> Result<ProbeResponse> {
    let modem = Modem::new(kind, *fp, filters)?;
    let y = modem.unit_response(chan, k)?;
    let len = fp.len();
    match kind {
        ModemKind::Tdm | ModemKind::Fdm => Ok(ProbeResponse {
            origin: (0, 0),
            values: (0..len).map(|n| y[(k + n) % len]).collect(),
        }),
        ModemKind::Otfs => {
            let origin = probe_origin(chan, fp, filters)?;
            let grid = DDSignal::new(*fp, y)?;
            let (k0, l0) = ((k / fp.n()) as i64, (k % fp.n()) as i64);
            Ok(ProbeResponse {
                origin,
                values: relative_response(&grid, k0, l0, origin),
            })
        }
    }
}

/// Reads the quasi-periodic output around a transmitted cell `(k0, l0)`.
pub(crate) fn relative_response(
    grid: &DDSignal,
    k0: i64,
    l0: i64,
    origin: (i64, i64),
) -> Vec<Complex64> {
    let fp = grid.params();
    let (m, n) = (fp.m() as i64, fp.n() as i64);
    let mut out = Vec::with_capacity(fp.len());
    for a in 0..m {
        for b in 0..n {
            let (dk, dl) = (origin.0 + a, origin.1 + b);
            let v = quasi_extend(grid, k0 + dk, l0 + dl);
            out.push(v * crate::dft::cis_ratio(-k0 * dl, m * n));
        }
    }
    out
}
