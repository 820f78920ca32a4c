//! Embedded oracle suite behind `zakdd selftest`.
//!
//! Every check compares a fast path against an independent evaluation
//! (direct sums, explicit lattice extension, time-domain simulation) on
//! fixed-seed inputs, so the report is byte-identical between runs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{aliasing_map, flatness, power_profile, predictability_residual};
use crate::channel::{apply_channel, fig7_channel, ChannelSpec};
use crate::crystal::validate_crystallization;
use crate::dft::{dft, dft_direct};
use crate::filter::DDFilter;
use crate::modem::{FilterChoice, Modem, ModemKind};
use crate::params::FrameParams;
use crate::pulsone::pulsone_gram;
use crate::signal::{rel_max_err, DDSignal, TimeSignal};
use crate::twisted::{effective_dd_filter, twisted_conv, twisted_conv_scatter};
use crate::zak::{self, dzt, freq_invert, freq_realize, idzt, quasi_extend};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Worst observed error (or metric) for the check.
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn check(name: &'static str, value: f64, tolerance: f64) -> Check {
    Check {
        name,
        value,
        tolerance,
        passed: value <= tolerance,
    }
}

fn random(len: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn grid(m: usize, n: usize) -> FrameParams {
    FrameParams::new(m, n, 10e-6).expect("positive sizes")
}

pub fn run() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();

    let sizes = [1usize, 2, 4, 8];
    let (mut e_dzt, mut e_unit, mut e_round, mut e_dft, mut e_freq) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &m in &sizes {
        for &n in &sizes {
            let fp = grid(m, n);
            let x = TimeSignal::new(fp, random(fp.len(), &mut rng)).unwrap();
            let d = dzt(&x);
            let r = zak::reference::dzt(&x);
            e_dzt = e_dzt.max(rel_max_err(d.as_slice(), r.as_slice(), r.as_slice()));
            e_unit = e_unit.max((d.energy() - x.energy()).abs() / x.energy());
            let back = idzt(&d);
            e_round = e_round.max(rel_max_err(back.samples(), x.samples(), x.samples()));
            let spectrum = dft_direct(x.samples(), false);
            let via = freq_realize(&d);
            e_dft = e_dft.max(rel_max_err(via.bins(), &spectrum, &spectrum));
            let again = freq_invert(&via);
            e_freq = e_freq.max(rel_max_err(again.as_slice(), d.as_slice(), d.as_slice()));
        }
    }
    out.push(check("dzt_matches_direct_sum", e_dzt, 1e-9));
    out.push(check("dzt_preserves_energy", e_unit, 1e-9));
    out.push(check("idzt_inverts_dzt", e_round, 1e-9));
    out.push(check("freq_realize_of_dzt_is_dft", e_dft, 1e-9));
    out.push(check("freq_invert_inverts_freq_realize", e_freq, 1e-9));

    let fp = grid(4, 8);
    let x = DDSignal::new(fp, random(fp.len(), &mut rng)).unwrap();
    let mut e_qp = 0.0f64;
    for k in 0..4i64 {
        for l in 0..8i64 {
            let v = x.get(k as usize, l as usize);
            let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * l as f64 / 8.0);
            e_qp = e_qp
                .max((quasi_extend(&x, k, l) - v).norm())
                .max((quasi_extend(&x, k + 4, l) - v * phase).norm())
                .max((quasi_extend(&x, k, l + 8) - v).norm());
        }
    }
    out.push(check("quasi_periodic_extension", e_qp, 1e-12));

    let mut e_gram = 0.0f64;
    for &(m, n) in &[(2, 2), (4, 4), (8, 4)] {
        let g = pulsone_gram(grid(m, n));
        let size = m * n;
        for (i, v) in g.iter().enumerate() {
            let want = if i / size == i % size { 1.0 } else { 0.0 };
            e_gram = e_gram.max((v - Complex64::new(want, 0.0)).norm());
        }
    }
    out.push(check("pulsones_are_orthonormal", e_gram, 1e-12));

    let fp = grid(4, 4);
    let taps = random(4, &mut rng);
    let w = DDFilter::new(
        fp,
        vec![
            (0, 0, taps[0]),
            (1, -2, taps[1]),
            (5, 3, taps[2]),
            (-2, 1, taps[3]),
        ],
    )
    .unwrap();
    let x = DDSignal::new(fp, random(fp.len(), &mut rng)).unwrap();
    let g = twisted_conv(&w, &x).unwrap();
    let s = twisted_conv_scatter(&w, &x).unwrap();
    out.push(check(
        "twisted_gather_equals_scatter",
        rel_max_err(g.as_slice(), s.as_slice(), g.as_slice()),
        1e-12,
    ));

    let mut e_io = 0.0f64;
    for &(m, n) in &[(2, 2), (4, 4), (4, 8)] {
        let fp = grid(m, n);
        let paths: Vec<(Complex64, i64, i64)> = random(3, &mut rng)
            .into_iter()
            .map(|g| {
                (
                    g,
                    rng.gen_range(0..m as i64),
                    rng.gen_range(-(n as i64)..n as i64),
                )
            })
            .collect();
        let chan = ChannelSpec::on_grid(&fp, &paths).unwrap();
        let h = effective_dd_filter(&chan, &DDFilter::delta(fp), &DDFilter::delta(fp)).unwrap();
        let x = DDSignal::new(fp, random(fp.len(), &mut rng)).unwrap();
        let via_time = dzt(&apply_channel(&chan, &idzt(&x)).unwrap());
        let via_dd = twisted_conv(&h, &x).unwrap();
        e_io = e_io.max(rel_max_err(
            via_dd.as_slice(),
            via_time.as_slice(),
            via_time.as_slice(),
        ));
    }
    out.push(check("otfs_io_is_twisted_convolution", e_io, 1e-8));

    let symbols = random(8, &mut rng);
    let mut e_limit = 0.0f64;
    for (fp, other) in [(grid(8, 1), ModemKind::Tdm), (grid(1, 8), ModemKind::Fdm)] {
        let a = Modem::new(ModemKind::Otfs, fp, &FilterChoice::Delta).unwrap();
        let b = Modem::new(other, fp, &FilterChoice::Delta).unwrap();
        let sa = a.transmit(&symbols).unwrap();
        let sb = b.transmit(&symbols).unwrap();
        e_limit = e_limit.max(rel_max_err(sa.samples(), sb.samples(), sb.samples()));
    }
    out.push(check("otfs_limits_are_tdm_and_fdm", e_limit, 1e-12));

    let fp = grid(4, 4);
    let one = Complex64::new(1.0, 0.0);
    let crystalline = ChannelSpec::on_grid(&fp, &[(one, 0, 0), (one, 1, 1), (one, 2, -1)]).unwrap();
    let p = power_profile(ModemKind::Otfs, &crystalline, &fp, &FilterChoice::Delta).unwrap();
    out.push(check(
        "otfs_crystalline_profile_flat",
        flatness(&p).unwrap().max_over_min - 1.0,
        1e-6,
    ));
    let r =
        predictability_residual(&crystalline, &fp, (0, 0), (3, 2), &FilterChoice::Delta).unwrap();
    out.push(check("otfs_crystalline_predictable", r, 1e-8));
    out.push(check(
        "crystalline_has_no_aliasing",
        aliasing_map(&crystalline, &fp).unwrap().len() as f64,
        0.0,
    ));

    let fig7 = fig7_channel([one; 4]);
    let inside = validate_crystallization(&fig7, &FrameParams::new(4, 4, 20e-6).unwrap());
    let below = validate_crystallization(&fig7, &FrameParams::new(4, 4, 1e-6).unwrap());
    let above = validate_crystallization(&fig7, &FrameParams::new(4, 4, 1e-3).unwrap());
    let wrong = [inside.holds(), !below.delay_ok, !above.doppler_ok]
        .iter()
        .filter(|ok| !**ok)
        .count();
    out.push(check("fig7_crystalline_interval", wrong as f64, 0.0));

    let x = random(16, &mut rng);
    let a = dft(&x);
    let b = dft_direct(&x, false);
    out.push(check(
        "fft_matches_direct_dft",
        rel_max_err(&a, &b, &b),
        1e-12,
    ));

    out
}
