use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The discretization lattice of a frame.
///
/// `m` delay bins and `n` Doppler bins per period, with delay period
/// `tau_p`. The Doppler period is `1 / tau_p`, the bandwidth is `m / tau_p`
/// and the frame lasts `n * tau_p`, so a frame always holds exactly
/// `m * n = B * T` samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameParams {
    m: usize,
    n: usize,
    tau_p: f64,
}

impl FrameParams {
    pub fn new(m: usize, n: usize, tau_p: f64) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParams(format!(
                "M and N must be positive, got M={m}, N={n}"
            )));
        }
        if !(tau_p.is_finite() && tau_p > 0.0) {
            return Err(Error::InvalidParams(format!(
                "delay period must be positive and finite, got {tau_p}"
            )));
        }
        Ok(Self { m, n, tau_p })
    }

    /// Delay bins per period.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Doppler bins per period.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Samples per frame, `M * N`.
    pub fn len(&self) -> usize {
        self.m * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tau_p(&self) -> f64 {
        self.tau_p
    }

    pub fn nu_p(&self) -> f64 {
        1.0 / self.tau_p
    }

    pub fn bandwidth(&self) -> f64 {
        self.m as f64 / self.tau_p
    }

    pub fn duration(&self) -> f64 {
        self.n as f64 * self.tau_p
    }

    /// Sample period `1 / B`, also the delay bin width.
    pub fn sample_period(&self) -> f64 {
        self.tau_p / self.m as f64
    }

    /// Doppler bin width `1 / T`, also the frequency bin width.
    pub fn doppler_bin(&self) -> f64 {
        1.0 / self.duration()
    }

    /// Delay in units of sample periods.
    pub fn delay_bins(&self, delay: f64) -> f64 {
        delay * self.bandwidth()
    }

    /// Doppler shift in units of Doppler bins.
    pub fn doppler_bins(&self, doppler: f64) -> f64 {
        doppler * self.duration()
    }

    pub fn check_same(&self, other: &FrameParams) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ParamMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl std::fmt::Display for FrameParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "M={} N={} tau_p={:e}s", self.m, self.n, self.tau_p)
    }
}
