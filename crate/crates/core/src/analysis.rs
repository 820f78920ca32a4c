//! Fading, predictability and aliasing metrics for the three modems.

use num_complex::Complex64;
use serde::Serialize;

use crate::channel::ChannelSpec;
use crate::crystal::validate_crystallization;
use crate::dft::cis_ratio;
use crate::error::{Error, Result};
use crate::modem::{probe_origin, relative_response, FilterChoice, Modem, ModemKind};
use crate::params::FrameParams;
use crate::signal::DDSignal;

/// Cells below this fraction of the strongest response cell are treated as
/// numerical dust when identifying taps.
pub const SIGNIFICANT_FRACTION: f64 = 1e-6;

/// Average received power per output index under i.i.d. unit-power symbols:
/// `P[k'] = sum_k |c(k -> k')|^2`, from probing every unit symbol.
pub fn power_profile(
    kind: ModemKind,
    chan: &ChannelSpec,
    fp: &FrameParams,
    filters: &FilterChoice,
) -> Result<Vec<f64>> {
    let modem = Modem::new(kind, *fp, filters)?;
    let responses = map_indices(fp.len(), |k| modem.unit_response(chan, k))?;
    let mut power = vec![0.0; fp.len()];
    for y in responses {
        for (p, v) in power.iter_mut().zip(y) {
            *p += v.norm_sqr();
        }
    }
    Ok(power)
}

fn map_indices<T: Send>(
    count: usize,
    f: impl Fn(usize) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Flatness {
    pub max_over_min: f64,
    /// Standard deviation over mean.
    pub normalized_std: f64,
}

/// `max_over_min` is infinite when some entry is exactly zero.
pub fn flatness(profile: &[f64]) -> Result<Flatness> {
    if profile.is_empty() || profile.iter().all(|&p| p == 0.0) {
        return Err(Error::ZeroProfile);
    }
    if profile.iter().any(|&p| p < 0.0 || !p.is_finite()) {
        return Err(Error::Invalid(
            "power profile must be finite and non-negative".into(),
        ));
    }
    let max = profile.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = profile.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean = profile.iter().sum::<f64>() / profile.len() as f64;
    let var = profile.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / profile.len() as f64;
    Ok(Flatness {
        max_over_min: if min > 0.0 { max / min } else { f64::INFINITY },
        normalized_std: var.sqrt() / mean,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub tau_p: f64,
    pub nu_p: f64,
    pub delay_ok: bool,
    pub doppler_ok: bool,
    pub flatness: Flatness,
    pub profile: Vec<f64>,
}

/// OTFS power profile and crystallization status for each frame in
/// `fp_list`. All frames must share `M` and `N`.
pub fn crystallization_sweep(
    chan: &ChannelSpec,
    fp_list: &[FrameParams],
    filters: &FilterChoice,
) -> Result<Vec<SweepRow>> {
    if let Some(first) = fp_list.first() {
        if let Some(odd) = fp_list
            .iter()
            .find(|f| f.m() != first.m() || f.n() != first.n())
        {
            return Err(Error::Invalid(format!(
                "sweep frames must share M and N: {first} vs {odd}"
            )));
        }
    }
    let row = |i: usize| -> Result<SweepRow> {
        let fp = fp_list[i];
        let crystal = validate_crystallization(chan, &fp);
        let profile = power_profile(ModemKind::Otfs, chan, &fp, filters)?;
        Ok(SweepRow {
            tau_p: fp.tau_p(),
            nu_p: fp.nu_p(),
            delay_ok: crystal.delay_ok,
            doppler_ok: crystal.doppler_ok,
            flatness: flatness(&profile)?,
            profile,
        })
    };
    map_indices(fp_list.len(), row)
}

/// `count` log-spaced delay periods between `lo` and `hi` inclusive.
pub fn log_spaced_periods(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}

fn l2_residual(predicted: &[Complex64], actual: &[Complex64]) -> Result<f64> {
    let norm = actual.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroResponse);
    }
    let diff = predicted
        .iter()
        .zip(actual)
        .map(|(p, a)| (p - a).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(diff / norm)
}

/// Predicts the OTFS response to a DD pulse at `b` from the response to a
/// pulse at `a` and returns `||predicted - actual|| / ||actual||`.
///
/// Every significant cell of the a-response, read in the probe window, is
/// taken as one path at lattice offset `(dk, dl)`. Its gain moves to
/// `b + (dk, dl)` and picks up `e^{j 2 pi dl (kb - ka) / (MN)}`, the
/// discrete form of `e^{j 2 pi nu_i (tau_b - tau_a)}`.
pub fn predictability_residual(
    chan: &ChannelSpec,
    fp: &FrameParams,
    a: (usize, usize),
    b: (usize, usize),
    filters: &FilterChoice,
) -> Result<f64> {
    let n = fp.n();
    for &(k, l) in &[a, b] {
        if k >= fp.m() || l >= n {
            return Err(Error::IndexOutOfRange {
                k: k as i64,
                l: l as i64,
                m: fp.m(),
                n,
            });
        }
    }
    let modem = Modem::new(ModemKind::Otfs, *fp, filters)?;
    let actual = modem.unit_response(chan, b.0 * n + b.1)?;
    if a == b {
        l2_residual(&actual, &actual)?;
        return Ok(0.0);
    }
    let resp_a = DDSignal::new(*fp, modem.unit_response(chan, a.0 * n + a.1)?)?;
    let origin = probe_origin(chan, fp, filters)?;
    let (ka, la) = (a.0 as i64, a.1 as i64);
    let (kb, lb) = (b.0 as i64, b.1 as i64);
    // undo the a-cell twisted phase, keeping raw extended values
    let window = relative_response(&resp_a, 0, 0, (origin.0 + ka, origin.1 + la));
    let peak = window.iter().map(|v| v.norm()).fold(0.0, f64::max);

    let (m, nn) = (fp.m() as i64, n as i64);
    let mut predicted = DDSignal::zeros(*fp);
    for (idx, &va) in window.iter().enumerate() {
        if va.norm() < SIGNIFICANT_FRACTION * peak || va.norm() == 0.0 {
            continue;
        }
        let (dk, dl) = (origin.0 + idx as i64 / nn, origin.1 + idx as i64 % nn);
        let vb = va * cis_ratio(dl * (kb - ka), m * nn);
        // store the extended value at b + (dk, dl) back into the period
        let (kt, lt) = (kb + dk, lb + dl);
        let (wraps, ks) = (kt.div_euclid(m), kt.rem_euclid(m));
        let ls = lt.rem_euclid(nn);
        let cell = (ks * nn + ls) as usize;
        predicted.as_mut_slice()[cell] += vb * cis_ratio(-wraps * ls, nn);
    }
    l2_residual(predicted.as_slice(), &actual)
}

/// TDM/FDM counterpart of [`predictability_residual`]: predicts the response
/// to symbol `b` as the response to symbol `a` shifted by `b - a`, which is
/// exact whenever the effective filter does not depend on the symbol index.
pub fn stationary_residual(
    kind: ModemKind,
    chan: &ChannelSpec,
    fp: &FrameParams,
    a: usize,
    b: usize,
    filters: &FilterChoice,
) -> Result<f64> {
    if kind == ModemKind::Otfs {
        return Err(Error::Invalid(
            "stationary prediction applies to tdm and fdm; use predictability_residual for otfs"
                .into(),
        ));
    }
    let modem = Modem::new(kind, *fp, filters)?;
    let ya = modem.unit_response(chan, a)?;
    let yb = modem.unit_response(chan, b)?;
    let len = fp.len();
    let shift = (b + len - a % len) % len;
    let predicted: Vec<Complex64> = (0..len).map(|i| ya[(i + len - shift) % len]).collect();
    l2_residual(&predicted, &yb)
}

/// A DD cell that receives more than one path of an on-grid channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub cell: (usize, usize),
    pub paths: Vec<usize>,
}

/// Cells, as offsets modulo the periods, hit by two or more paths.
pub fn aliasing_map(chan: &ChannelSpec, fp: &FrameParams) -> Result<Vec<Collision>> {
    let taps = chan.lattice_taps(fp)?;
    let (m, n) = (fp.m() as i64, fp.n() as i64);
    let mut cells: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
    for (i, &(_, d, l)) in taps.iter().enumerate() {
        let cell = (d.rem_euclid(m) as usize, l.rem_euclid(n) as usize);
        cells.entry(cell).or_default().push(i);
    }
    Ok(cells
        .into_iter()
        .filter(|(_, paths)| paths.len() > 1)
        .map(|(cell, paths)| Collision { cell, paths })
        .collect())
}
