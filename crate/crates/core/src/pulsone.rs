//! Pulsones: time and frequency realizations of a single DD pulse.
//!
//! A pulse at `[k0, l0]` realizes in time as a train of `N` samples spaced
//! one delay period apart, starting at sample `k0` and modulated by the tone
//! `l0 / T`. In frequency it is a comb of `M` bins spaced one Doppler period
//! apart, starting at bin `l0` and modulated by the frequency-domain tone
//! set by `k0`. `N = 1` degenerates to a single TDM sample and `M = 1` to a
//! single FDM bin.

use num_complex::Complex64;

use crate::dft::cis_ratio;
use crate::error::{Error, Result};
use crate::params::FrameParams;
use crate::signal::{DDSignal, FreqSignal, TimeSignal};
use crate::zak::{freq_realize, idzt};

fn check_index(fp: &FrameParams, k0: usize, l0: usize) -> Result<()> {
    if k0 < fp.m() && l0 < fp.n() {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            k: k0 as i64,
            l: l0 as i64,
            m: fp.m(),
            n: fp.n(),
        })
    }
}

/// Unit DD pulse at `[k0, l0]`.
pub fn dd_pulse(fp: FrameParams, k0: usize, l0: usize) -> Result<DDSignal> {
    check_index(&fp, k0, l0)?;
    let mut x = DDSignal::zeros(fp);
    x.set(k0, l0, Complex64::new(1.0, 0.0));
    Ok(x)
}

/// Time-domain pulsone, computed through the inverse Zak transform.
pub fn pulsone_td(fp: FrameParams, k0: usize, l0: usize) -> Result<TimeSignal> {
    let x = idzt(&dd_pulse(fp, k0, l0)?);
    debug_assert!(
        crate::signal::rel_max_err(
            x.samples(),
            pulsone_td_closed_form(fp, k0, l0)?.samples(),
            x.samples()
        ) < 1e-12
    );
    Ok(x)
}

/// `samples[k0 + nM] = N^-1/2 e^{j 2 pi n l0 / N}`, zero elsewhere.
pub fn pulsone_td_closed_form(fp: FrameParams, k0: usize, l0: usize) -> Result<TimeSignal> {
    check_index(&fp, k0, l0)?;
    let (m, n) = (fp.m(), fp.n());
    let amp = 1.0 / (n as f64).sqrt();
    let mut samples = vec![Complex64::new(0.0, 0.0); fp.len()];
    for i in 0..n {
        samples[k0 + i * m] = cis_ratio((i * l0) as i64, n as i64) * amp;
    }
    TimeSignal::new(fp, samples)
}

/// Frequency-domain pulsone, computed through the frequency realization.
pub fn pulsone_fd(fp: FrameParams, k0: usize, l0: usize) -> Result<FreqSignal> {
    let x = freq_realize(&dd_pulse(fp, k0, l0)?);
    debug_assert!(
        crate::signal::rel_max_err(
            x.bins(),
            pulsone_fd_closed_form(fp, k0, l0)?.bins(),
            x.bins()
        ) < 1e-12
    );
    Ok(x)
}

/// `bins[l0 + mN] = M^-1/2 e^{-j 2 pi (l0 + mN) k0 / (MN)}`, zero elsewhere.
pub fn pulsone_fd_closed_form(fp: FrameParams, k0: usize, l0: usize) -> Result<FreqSignal> {
    check_index(&fp, k0, l0)?;
    let (m, n) = (fp.m(), fp.n());
    let amp = 1.0 / (m as f64).sqrt();
    let mut bins = vec![Complex64::new(0.0, 0.0); fp.len()];
    for i in 0..m {
        let q = l0 + i * n;
        bins[q] = cis_ratio(-((q * k0) as i64), fp.len() as i64) * amp;
    }
    FreqSignal::new(fp, bins)
}

/// Gram matrix of all `M*N` time-domain pulsones, row-major with carrier
/// `(k, l)` at index `k * N + l`.
pub fn pulsone_gram(fp: FrameParams) -> Vec<Complex64> {
    let (m, n) = (fp.m(), fp.n());
    let size = fp.len();
    let carriers: Vec<TimeSignal> = (0..size)
        .map(|i| pulsone_td(fp, i / n, i % n).expect("index in range"))
        .collect();
    debug_assert_eq!(carriers.len(), m * n);

    let row = |i: usize| -> Vec<Complex64> {
        let a = carriers[i].samples();
        carriers
            .iter()
            .map(|b| {
                b.samples()
                    .iter()
                    .zip(a)
                    .map(|(bv, av)| av * bv.conj())
                    .sum()
            })
            .collect()
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<Complex64>> = {
        use rayon::prelude::*;
        (0..size).into_par_iter().map(row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<Complex64>> = (0..size).map(row).collect();

    rows.into_iter().flatten().collect()
}
