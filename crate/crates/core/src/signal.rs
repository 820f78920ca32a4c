use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::FrameParams;

/// Sum of squared magnitudes.
pub fn energy(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm_sqr()).sum()
}

/// Largest magnitude in `values`, 0 for an empty slice.
pub fn max_abs(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Max-norm of `a - b` divided by the max-norm of `reference`.
///
/// Falls back to the absolute max-norm difference when the reference is
/// identically zero.
pub fn rel_max_err(a: &[Complex64], b: &[Complex64], reference: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let diff = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    let scale = max_abs(reference);
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

fn check_len(fp: &FrameParams, got: usize) -> Result<()> {
    if got == fp.len() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected: fp.len(),
            got,
        })
    }
}

/// `M*N` time samples, sample `n` taken at `t = n / B`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSignal {
    params: FrameParams,
    samples: Vec<Complex64>,
}

impl TimeSignal {
    pub fn new(params: FrameParams, samples: Vec<Complex64>) -> Result<Self> {
        check_len(&params, samples.len())?;
        Ok(Self { params, samples })
    }

    pub fn zeros(params: FrameParams) -> Self {
        Self {
            params,
            samples: vec![Complex64::new(0.0, 0.0); params.len()],
        }
    }

    pub fn params(&self) -> &FrameParams {
        &self.params
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn energy(&self) -> f64 {
        energy(&self.samples)
    }
}

/// `M*N` frequency bins, bin `q` at `f = q / T`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqSignal {
    params: FrameParams,
    bins: Vec<Complex64>,
}

impl FreqSignal {
    pub fn new(params: FrameParams, bins: Vec<Complex64>) -> Result<Self> {
        check_len(&params, bins.len())?;
        Ok(Self { params, bins })
    }

    pub fn params(&self) -> &FrameParams {
        &self.params
    }

    pub fn bins(&self) -> &[Complex64] {
        &self.bins
    }

    pub fn into_bins(self) -> Vec<Complex64> {
        self.bins
    }

    pub fn energy(&self) -> f64 {
        energy(&self.bins)
    }
}

/// A quasi-periodic delay-Doppler signal, stored on the fundamental period
/// only. Cell `[k, l]` sits at `(k tau_p / M, l nu_p / N)`; values anywhere
/// else come from [`DDSignal::extended`].
#[derive(Debug, Clone, PartialEq)]
pub struct DDSignal {
    params: FrameParams,
    // row-major, [k, l] at k * N + l
    grid: Vec<Complex64>,
}

impl DDSignal {
    pub fn new(params: FrameParams, grid: Vec<Complex64>) -> Result<Self> {
        check_len(&params, grid.len())?;
        Ok(Self { params, grid })
    }

    pub fn zeros(params: FrameParams) -> Self {
        Self {
            params,
            grid: vec![Complex64::new(0.0, 0.0); params.len()],
        }
    }

    pub fn from_fn(params: FrameParams, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let n = params.n();
        let grid = (0..params.len()).map(|i| f(i / n, i % n)).collect();
        Self { params, grid }
    }

    pub fn params(&self) -> &FrameParams {
        &self.params
    }

    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        self.grid[k * self.params.n() + l]
    }

    pub fn set(&mut self, k: usize, l: usize, value: Complex64) {
        let n = self.params.n();
        self.grid[k * n + l] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.grid
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.grid
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.grid
    }

    pub fn energy(&self) -> f64 {
        energy(&self.grid)
    }

    /// Value at any lattice point `(k, l)` under the quasi-periodic extension.
    pub fn extended(&self, k: i64, l: i64) -> Complex64 {
        crate::zak::quasi_extend(self, k, l)
    }
}

/// The 2-D information symbols `x[k, l]`, `k < M`, `l < N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGrid {
    params: FrameParams,
    symbols: Vec<Complex64>,
}

impl SymbolGrid {
    pub fn new(params: FrameParams, symbols: Vec<Complex64>) -> Result<Self> {
        check_len(&params, symbols.len())?;
        Ok(Self { params, symbols })
    }

    pub fn zeros(params: FrameParams) -> Self {
        Self {
            params,
            symbols: vec![Complex64::new(0.0, 0.0); params.len()],
        }
    }

    /// A single unit symbol at `[k, l]`.
    pub fn unit(params: FrameParams, k: usize, l: usize) -> Result<Self> {
        if k >= params.m() || l >= params.n() {
            return Err(Error::IndexOutOfRange {
                k: k as i64,
                l: l as i64,
                m: params.m(),
                n: params.n(),
            });
        }
        let mut grid = Self::zeros(params);
        grid.symbols[k * params.n() + l] = Complex64::new(1.0, 0.0);
        Ok(grid)
    }

    pub fn params(&self) -> &FrameParams {
        &self.params
    }

    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        self.symbols[k * self.params.n() + l]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.symbols
    }

    /// The symbols read as a DD signal; the quasi-periodic extension of the
    /// result is exactly the infinite discrete information signal.
    pub fn to_dd(&self) -> DDSignal {
        DDSignal {
            params: self.params,
            grid: self.symbols.clone(),
        }
    }
}
