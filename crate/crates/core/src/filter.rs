use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::FrameParams;

/// A finite set of DD taps `(k, l, value)` acting by twisted convolution.
/// Offsets are lattice offsets in Z^2 and are never wrapped.
#[derive(Debug, Clone, PartialEq)]
pub struct DDFilter {
    params: FrameParams,
    // sorted by (k, l), unique keys
    taps: Vec<(i64, i64, Complex64)>,
}

impl DDFilter {
    pub fn new(params: FrameParams, mut taps: Vec<(i64, i64, Complex64)>) -> Result<Self> {
        taps.sort_by_key(|&(k, l, _)| (k, l));
        if let Some(w) = taps
            .windows(2)
            .find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
        {
            return Err(Error::DuplicateTap(w[0].0, w[0].1));
        }
        Ok(Self { params, taps })
    }

    /// Builds a filter by summing contributions that may share an offset.
    /// Taps that cancel exactly are dropped.
    pub fn accumulate(
        params: FrameParams,
        entries: impl IntoIterator<Item = (i64, i64, Complex64)>,
    ) -> Self {
        let mut map = std::collections::BTreeMap::new();
        for (k, l, v) in entries {
            *map.entry((k, l)).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        let taps = map
            .into_iter()
            .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
            .map(|((k, l), v)| (k, l, v))
            .collect();
        Self { params, taps }
    }

    /// The twisted-convolution identity.
    pub fn delta(params: FrameParams) -> Self {
        Self {
            params,
            taps: vec![(0, 0, Complex64::new(1.0, 0.0))],
        }
    }

    /// Separable root-raised-cosine taps, `span` bins either side of the
    /// origin along each axis, unit energy.
    pub fn root_raised_cosine(
        params: FrameParams,
        delay_rolloff: f64,
        doppler_rolloff: f64,
        span: usize,
    ) -> Result<Self> {
        let along_delay = rrc_taps(delay_rolloff, span)?;
        let along_doppler = rrc_taps(doppler_rolloff, span)?;
        let s = span as i64;
        let mut taps = Vec::with_capacity(along_delay.len() * along_doppler.len());
        for (i, a) in along_delay.iter().enumerate() {
            for (j, b) in along_doppler.iter().enumerate() {
                taps.push((i as i64 - s, j as i64 - s, Complex64::new(a * b, 0.0)));
            }
        }
        Self::new(params, taps)
    }

    pub fn params(&self) -> &FrameParams {
        &self.params
    }

    pub fn taps(&self) -> &[(i64, i64, Complex64)] {
        &self.taps
    }

    pub fn get(&self, k: i64, l: i64) -> Complex64 {
        self.taps
            .binary_search_by_key(&(k, l), |&(a, b, _)| (a, b))
            .map(|i| self.taps[i].2)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_delta(&self) -> bool {
        self.taps.len() == 1 && self.taps[0] == (0, 0, Complex64::new(1.0, 0.0))
    }

    /// Smallest and largest (delay, Doppler) offsets carrying a tap.
    pub fn extent(&self) -> ((i64, i64), (i64, i64)) {
        let kmin = self.taps.iter().map(|t| t.0).min().unwrap_or(0);
        let kmax = self.taps.iter().map(|t| t.0).max().unwrap_or(0);
        let lmin = self.taps.iter().map(|t| t.1).min().unwrap_or(0);
        let lmax = self.taps.iter().map(|t| t.1).max().unwrap_or(0);
        ((kmin, kmax), (lmin, lmax))
    }
}

/// One-dimensional taps for the TDM and FDM pipelines, applied by cyclic
/// convolution over the frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseFilter {
    taps: Vec<(i64, Complex64)>,
}

impl PulseFilter {
    pub fn delta() -> Self {
        Self {
            taps: vec![(0, Complex64::new(1.0, 0.0))],
        }
    }

    pub fn root_raised_cosine(rolloff: f64, span: usize) -> Result<Self> {
        let s = span as i64;
        let taps = rrc_taps(rolloff, span)?
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i as i64 - s, Complex64::new(v, 0.0)))
            .collect();
        Ok(Self { taps })
    }

    pub fn taps(&self) -> &[(i64, Complex64)] {
        &self.taps
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let len = x.len() as i64;
        let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
        for &(d, w) in &self.taps {
            for (n, o) in out.iter_mut().enumerate() {
                *o += w * x[(n as i64 - d).rem_euclid(len) as usize];
            }
        }
        out
    }
}

/// Root-raised-cosine impulse response at unit symbol spacing.
pub fn rrc(t: f64, beta: f64) -> f64 {
    use std::f64::consts::PI;
    if beta == 0.0 {
        return if t == 0.0 {
            1.0
        } else {
            (PI * t).sin() / (PI * t)
        };
    }
    if t == 0.0 {
        return 1.0 - beta + 4.0 * beta / PI;
    }
    if (4.0 * beta * t).abs() == 1.0 {
        return beta / 2f64.sqrt()
            * ((1.0 + 2.0 / PI) * (PI / (4.0 * beta)).sin()
                + (1.0 - 2.0 / PI) * (PI / (4.0 * beta)).cos());
    }
    let num = (PI * t * (1.0 - beta)).sin() + 4.0 * beta * t * (PI * t * (1.0 + beta)).cos();
    let den = PI * t * (1.0 - (4.0 * beta * t).powi(2));
    num / den
}

fn rrc_taps(beta: f64, span: usize) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Invalid(format!(
            "roll-off must lie in [0, 1], got {beta}"
        )));
    }
    let s = span as i64;
    let raw: Vec<f64> = (-s..=s).map(|i| rrc(i as f64, beta)).collect();
    let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(raw.into_iter().map(|v| v / norm).collect())
}
