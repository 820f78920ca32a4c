//! Unitary DFT helpers shared by the transform and modem code.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

/// `exp(j 2 pi num / den)`, with the ratio reduced modulo one in integer
/// arithmetic first so large indices keep full precision.
pub fn cis_ratio(num: i64, den: i64) -> Complex64 {
    debug_assert!(den > 0);
    let r = num.rem_euclid(den);
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / den as f64)
}

fn run(values: &mut [Complex64], direction: FftDirection) {
    if values.len() <= 1 {
        return;
    }
    let fft = FftPlanner::new().plan_fft(values.len(), direction);
    fft.process(values);
    let scale = 1.0 / (values.len() as f64).sqrt();
    for v in values.iter_mut() {
        *v *= scale;
    }
}

/// In-place unitary forward DFT, `X[q] = L^-1/2 sum x[n] e^{-j 2 pi q n / L}`.
pub fn fft_unitary(values: &mut [Complex64]) {
    run(values, FftDirection::Forward)
}

/// In-place unitary inverse DFT.
pub fn ifft_unitary(values: &mut [Complex64]) {
    run(values, FftDirection::Inverse)
}

pub fn dft(values: &[Complex64]) -> Vec<Complex64> {
    let mut out = values.to_vec();
    fft_unitary(&mut out);
    out
}

pub fn idft(values: &[Complex64]) -> Vec<Complex64> {
    let mut out = values.to_vec();
    ifft_unitary(&mut out);
    out
}

/// O(L^2) unitary DFT evaluated straight from the definition.
pub fn dft_direct(values: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let len = values.len() as i64;
    let sign = if inverse { 1 } else { -1 };
    let scale = 1.0 / (len as f64).sqrt();
    (0..len)
        .map(|q| {
            values
                .iter()
                .enumerate()
                .map(|(n, &x)| x * cis_ratio(sign * q * n as i64, len))
                .sum::<Complex64>()
                * scale
        })
        .collect()
}
