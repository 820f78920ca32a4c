//! Discrete Zak transforms between the time, frequency and delay-Doppler
//! realizations of a frame.
//!
//! All maps are unitary. With `X = dzt(x)`:
//!
//! ```text
//! X[k, l]    = N^-1/2 sum_n x[k + nM] e^{-j 2 pi n l / N}
//! bins[q]    = M^-1/2 sum_k X[k, q mod N] e^{-j 2 pi q k / (MN)}
//! ```
//!
//! so `freq_realize(dzt(x))` is the unitary DFT of `x`. The fast paths run
//! one length-N FFT per delay bin (time side) or one length-M FFT per
//! Doppler bin (frequency side); [`reference`] holds direct-sum versions.

use num_complex::Complex64;

use crate::dft::{cis_ratio, fft_unitary, ifft_unitary};
use crate::signal::{DDSignal, FreqSignal, TimeSignal};

/// Time-domain samples to the DD domain.
pub fn dzt(x: &TimeSignal) -> DDSignal {
    let fp = *x.params();
    let (m, n) = (fp.m(), fp.n());
    let samples = x.samples();
    let mut out = DDSignal::zeros(fp);
    let grid = out.as_mut_slice();
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..m {
        for (i, v) in row.iter_mut().enumerate() {
            *v = samples[k + i * m];
        }
        fft_unitary(&mut row);
        grid[k * n..(k + 1) * n].copy_from_slice(&row);
    }
    out
}

/// DD signal to its time-domain realization; exact inverse of [`dzt`].
pub fn idzt(x: &DDSignal) -> TimeSignal {
    let fp = *x.params();
    let (m, n) = (fp.m(), fp.n());
    let grid = x.as_slice();
    let mut samples = vec![Complex64::new(0.0, 0.0); fp.len()];
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..m {
        row.copy_from_slice(&grid[k * n..(k + 1) * n]);
        ifft_unitary(&mut row);
        for (i, v) in row.iter().enumerate() {
            samples[k + i * m] = *v;
        }
    }
    TimeSignal::new(fp, samples).expect("length preserved")
}

/// DD signal to its frequency-domain realization.
pub fn freq_realize(x: &DDSignal) -> FreqSignal {
    let fp = *x.params();
    let (m, n) = (fp.m(), fp.n());
    let mn = fp.len() as i64;
    let mut bins = vec![Complex64::new(0.0, 0.0); fp.len()];
    let mut col = vec![Complex64::new(0.0, 0.0); m];
    for l in 0..n {
        for (k, v) in col.iter_mut().enumerate() {
            *v = x.get(k, l) * cis_ratio(-((l * k) as i64), mn);
        }
        fft_unitary(&mut col);
        for (i, v) in col.iter().enumerate() {
            bins[l + i * n] = *v;
        }
    }
    FreqSignal::new(fp, bins).expect("length preserved")
}

/// Frequency bins back to the DD domain; exact inverse of [`freq_realize`].
pub fn freq_invert(x: &FreqSignal) -> DDSignal {
    let fp = *x.params();
    let (m, n) = (fp.m(), fp.n());
    let mn = fp.len() as i64;
    let bins = x.bins();
    let mut out = DDSignal::zeros(fp);
    let mut col = vec![Complex64::new(0.0, 0.0); m];
    for l in 0..n {
        for (i, v) in col.iter_mut().enumerate() {
            *v = bins[l + i * n];
        }
        ifft_unitary(&mut col);
        for (k, v) in col.iter().enumerate() {
            out.set(k, l, *v * cis_ratio((l * k) as i64, mn));
        }
    }
    out
}

/// Value of the quasi-periodic extension of `x` at lattice point `(k, l)`.
///
/// With `k = k0 + nM` and `l = l0 + mN` this is
/// `e^{j 2 pi n l0 / N} x[k0, l0]`: a delay-period wrap picks up a phase set
/// by the Doppler coordinate, a Doppler-period wrap picks up nothing.
pub fn quasi_extend(x: &DDSignal, k: i64, l: i64) -> Complex64 {
    let fp = x.params();
    let (m, n) = (fp.m() as i64, fp.n() as i64);
    let (wraps, k0) = (k.div_euclid(m), k.rem_euclid(m));
    let l0 = l.rem_euclid(n);
    let value = x.get(k0 as usize, l0 as usize);
    if wraps == 0 {
        value
    } else {
        value * cis_ratio(wraps.rem_euclid(n) * l0, n)
    }
}

/// Direct-sum evaluations of the transforms, used as the in-repo oracle for
/// the FFT paths.
pub mod reference {
    use super::*;

    pub fn dzt(x: &TimeSignal) -> DDSignal {
        let fp = *x.params();
        let (m, n) = (fp.m(), fp.n());
        let s = x.samples();
        let scale = 1.0 / (n as f64).sqrt();
        DDSignal::from_fn(fp, |k, l| {
            (0..n)
                .map(|i| s[k + i * m] * cis_ratio(-((i * l) as i64), n as i64))
                .sum::<Complex64>()
                * scale
        })
    }

    pub fn idzt(x: &DDSignal) -> TimeSignal {
        let fp = *x.params();
        let (m, n) = (fp.m(), fp.n());
        let scale = 1.0 / (n as f64).sqrt();
        let samples = (0..fp.len())
            .map(|idx| {
                let (k, i) = (idx % m, idx / m);
                (0..n)
                    .map(|l| x.get(k, l) * cis_ratio((i * l) as i64, n as i64))
                    .sum::<Complex64>()
                    * scale
            })
            .collect();
        TimeSignal::new(fp, samples).unwrap()
    }

    pub fn freq_realize(x: &DDSignal) -> FreqSignal {
        let fp = *x.params();
        let (m, n) = (fp.m(), fp.n());
        let mn = fp.len() as i64;
        let scale = 1.0 / (m as f64).sqrt();
        let bins = (0..fp.len())
            .map(|q| {
                (0..m)
                    .map(|k| x.get(k, q % n) * cis_ratio(-((q * k) as i64), mn))
                    .sum::<Complex64>()
                    * scale
            })
            .collect();
        FreqSignal::new(fp, bins).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dft::dft;
    use crate::params::FrameParams;
    use crate::signal::rel_max_err;
    use crate::testutil::{c, random_dd, random_time, time_signal};

    fn fp(m: usize, n: usize) -> FrameParams {
        FrameParams::new(m, n, 1e-6 * m as f64).unwrap()
    }

    #[test]
    fn size_one_is_identity() {
        let x = time_signal(fp(1, 1), vec![c(0.3, -1.2)]);
        let d = dzt(&x);
        assert_eq!(d.as_slice(), &[c(0.3, -1.2)]);
        assert_eq!(idzt(&d), x);
        assert_eq!(freq_realize(&d).bins(), &[c(0.3, -1.2)]);
        assert_eq!(freq_invert(&freq_realize(&d)), d);
    }

    #[test]
    fn impulse_at_origin() {
        let x = time_signal(
            fp(2, 2),
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        );
        let d = dzt(&x);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((d.get(0, 0) - c(h, 0.0)).norm() < 1e-15);
        assert!((d.get(0, 1) - c(h, 0.0)).norm() < 1e-15);
        assert_eq!(d.get(1, 0), c(0.0, 0.0));
        assert_eq!(d.get(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn delta_at_delay_one_is_impulse_train() {
        let mut d = DDSignal::zeros(fp(2, 2));
        d.set(1, 0, c(1.0, 0.0));
        let x = idzt(&d);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [c(0.0, 0.0), c(h, 0.0), c(0.0, 0.0), c(h, 0.0)];
        assert!(rel_max_err(x.samples(), &expected, &expected) < 1e-15);
    }

    #[test]
    fn fast_paths_match_direct_sums() {
        for &(m, n) in &[(4, 8), (3, 5), (8, 1), (1, 8)] {
            let x = random_time(fp(m, n), 11 + m as u64);
            let fast = dzt(&x);
            let slow = reference::dzt(&x);
            assert!(rel_max_err(fast.as_slice(), slow.as_slice(), slow.as_slice()) < 1e-9);

            let d = random_dd(fp(m, n), 5);
            let fast = idzt(&d);
            let slow = reference::idzt(&d);
            assert!(rel_max_err(fast.samples(), slow.samples(), slow.samples()) < 1e-9);

            let fast = freq_realize(&d);
            let slow = reference::freq_realize(&d);
            assert!(rel_max_err(fast.bins(), slow.bins(), slow.bins()) < 1e-9);
        }
    }

    #[test]
    fn dd_delta_is_fd_comb() {
        let f = fp(4, 3);
        let mut d = DDSignal::zeros(f);
        d.set(0, 2, c(1.0, 0.0));
        let bins = freq_realize(&d);
        for (q, b) in bins.bins().iter().enumerate() {
            let want = if q % 3 == 2 { 0.5 } else { 0.0 };
            assert!((b.norm() - want).abs() < 1e-12, "q={q}");
        }
    }

    #[test]
    fn m_equal_one_collapses_delay_axis() {
        let d = random_dd(fp(1, 6), 9);
        let bins = freq_realize(&d);
        for q in 0..6 {
            assert!((bins.bins()[q] - d.get(0, q)).norm() < 1e-15);
        }
    }

    #[test]
    fn zak_triangle_commutes() {
        let x = random_time(fp(4, 4), 3);
        let via_zak = freq_realize(&dzt(&x));
        let direct = dft(x.samples());
        assert!(rel_max_err(via_zak.bins(), &direct, &direct) < 1e-9);

        let f = FreqSignal::new(fp(4, 4), direct).unwrap();
        let d1 = freq_invert(&f);
        let d2 = dzt(&x);
        assert!(rel_max_err(d1.as_slice(), d2.as_slice(), d2.as_slice()) < 1e-9);
    }

    #[test]
    fn quasi_extend_identities() {
        let f = fp(4, 5);
        let x = random_dd(f, 21);
        for k in 0..4i64 {
            for l in 0..5i64 {
                let v = x.get(k as usize, l as usize);
                assert_eq!(quasi_extend(&x, k, l), v);
                let want = v * cis_ratio(l, 5);
                assert!((quasi_extend(&x, k + 4, l) - want).norm() < 1e-15);
                assert_eq!(quasi_extend(&x, k, l + 5), v);
                assert_eq!(quasi_extend(&x, k, l - 10), v);
                let want = v * cis_ratio(-3 * l, 5);
                assert!((quasi_extend(&x, k - 12, l) - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn extension_agrees_with_periodic_time_signal() {
        // The time signal is MN-periodic, so a DZT evaluated at a delay index
        // past the period must agree with the quasi-periodic extension.
        let f = fp(3, 4);
        let x = random_time(f, 8);
        let d = dzt(&x);
        let s = x.samples();
        for k in 0..9i64 {
            for l in 0..4i64 {
                let direct: Complex64 = (0..4i64)
                    .map(|i| s[((k + 3 * i) as usize) % 12] * cis_ratio(-i * l, 4))
                    .sum::<Complex64>()
                    * 0.5;
                assert!((direct - quasi_extend(&d, k, l)).norm() < 1e-12);
            }
        }
    }
}
