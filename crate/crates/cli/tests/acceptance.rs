//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zakdd::analysis::{
    aliasing_map, crystallization_sweep, flatness, log_spaced_periods, power_profile,
    predictability_residual, stationary_residual,
};
use zakdd::channel::{fig7_channel, ChannelMode};
use zakdd::crystal::check_spreads;
use zakdd::dft::dft_direct;
use zakdd::modem::{FilterChoice, Modem, ModemKind};
use zakdd::pulsone::pulsone_gram;
use zakdd::signal::rel_max_err;
use zakdd::twisted::{channel_taps, twisted_conv};
use zakdd::zak::{dzt, freq_realize, idzt, quasi_extend};
use zakdd::{
    validate_crystallization, ChannelSpec, Complex64, FrameParams, SymbolGrid, TimeSignal,
};

const FLAT: f64 = 1.0 + 1e-6;
/// Smallest max/min over the fading cells of the fixed matrix channels,
/// frozen from a reference run and rounded down.
const NON_FLAT_BOUND: f64 = 1.7;

type Taps = Vec<(Complex64, i64, i64)>;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn random(len: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn frame(m: usize, n: usize, tau_p: f64) -> FrameParams {
    FrameParams::new(m, n, tau_p).unwrap()
}

fn unit(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, phase)
}

fn transform_identities() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut unitary, mut inverse, mut dft) = (0.0f64, 0.0f64, 0.0f64);
    let sizes = [1usize, 2, 4, 8];
    for &m in &sizes {
        for &n in &sizes {
            let fp = frame(m, n, 1e-5);
            for _ in 0..100 {
                let x = TimeSignal::new(fp, random(fp.len(), &mut rng)).unwrap();
                let z = dzt(&x);
                unitary = unitary.max((z.energy() - x.energy()).abs() / x.energy());
                inverse = inverse.max(rel_max_err(idzt(&z).samples(), x.samples(), x.samples()));
                let want = dft_direct(x.samples(), false);
                dft = dft.max(rel_max_err(freq_realize(&z).bins(), &want, &want));
            }
        }
    }
    let elapsed = start.elapsed();
    let worst = unitary.max(inverse).max(dft);
    outcome(
        worst < 1e-9 && elapsed < Duration::from_secs(5),
        format!("unitarity {unitary:.1e}, idzt {inverse:.1e}, dft {dft:.1e} (< 1e-9); {elapsed:.2?} (< 5 s)"),
    )
}

fn quasi_periodicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fp = frame(4, 8, 1e-5);
    let (m, n) = (4i64, 8i64);
    let mut mismatches = 0usize;
    let mut oracle = 0.0f64;
    for _ in 0..100 {
        let x = TimeSignal::new(fp, random(fp.len(), &mut rng)).unwrap();
        let z = dzt(&x);
        for k in 0..m {
            for l in 0..n {
                let v = z.get(k as usize, l as usize);
                for wrap in -2i64..=2 {
                    let phase = if (wrap * l).rem_euclid(n) == 0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        unit(2.0 * PI * (wrap * l).rem_euclid(n) as f64 / n as f64)
                    };
                    let doppler = quasi_extend(&z, k, l + wrap * n) == v;
                    let delay = quasi_extend(&z, k + wrap * m, l) == v * phase;
                    let both = quasi_extend(&z, k + wrap * m, l - wrap * n) == v * phase;
                    mismatches += [doppler, delay, both].iter().filter(|ok| !**ok).count();
                    // direct sum of the transform at the extended index
                    let ke = k + wrap * m;
                    let direct: Complex64 = (0..n)
                        .map(|j| {
                            let idx = (ke + j * m).rem_euclid(m * n) as usize;
                            x.samples()[idx] * unit(-2.0 * PI * (j * l) as f64 / n as f64)
                        })
                        .sum::<Complex64>()
                        / (n as f64).sqrt();
                    oracle = oracle.max((quasi_extend(&z, ke, l) - direct).norm());
                }
            }
        }
    }
    outcome(
        mismatches == 0 && oracle < 1e-12,
        format!("{mismatches} inexact extensions; direct-sum deviation {oracle:.1e}"),
    )
}

fn pulsone_orthonormality() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = Vec::new();
    for &(m, n) in &[(2usize, 2usize), (4, 4), (8, 4)] {
        let g = pulsone_gram(frame(m, n, 1e-5));
        let size = m * n;
        for (i, v) in g.iter().enumerate() {
            let want = if i / size == i % size { 1.0 } else { 0.0 };
            worst = worst.max((v - want).norm());
        }
        count.push(format!("{m}x{n}: {size}"));
    }
    outcome(
        worst < 1e-12,
        format!(
            "max |G - I| = {worst:.1e} (< 1e-12); carriers {}",
            count.join(", ")
        ),
    )
}

fn limiting_cases() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for &len in &[4usize, 8, 16, 64] {
        for (fp, other) in [
            (frame(len, 1, 1e-5), ModemKind::Tdm),
            (frame(1, len, 1e-5), ModemKind::Fdm),
        ] {
            let taps: Taps = (0..3)
                .map(|i| (random(1, &mut rng)[0], i, rng.gen_range(-1..2)))
                .collect();
            let chan = ChannelSpec::on_grid(&fp, &taps).unwrap();
            let otfs = Modem::new(ModemKind::Otfs, fp, &FilterChoice::Delta).unwrap();
            let base = Modem::new(other, fp, &FilterChoice::Delta).unwrap();
            let x = random(len, &mut rng);
            let (ta, tb) = (otfs.transmit(&x).unwrap(), base.transmit(&x).unwrap());
            worst = worst.max(rel_max_err(ta.samples(), tb.samples(), tb.samples()));
            let (ya, yb) = (otfs.run(&chan, &x).unwrap(), base.run(&chan, &x).unwrap());
            worst = worst.max(rel_max_err(&ya, &yb, &yb));
        }
    }
    outcome(
        worst < 1e-12,
        format!("max deviation {worst:.1e} (< 1e-12)"),
    )
}

fn io_law() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    let mut runs = 0;
    for &(m, n) in &[(4usize, 4usize), (4, 8), (8, 8)] {
        let fp = frame(m, n, 1e-5);
        for _ in 0..20 {
            let count = rng.gen_range(1..=4);
            let mut offsets: Vec<(i64, i64)> = Vec::new();
            while offsets.len() < count {
                let o = (
                    rng.gen_range(0..2 * m as i64),
                    rng.gen_range(-(n as i64)..n as i64),
                );
                if !offsets.contains(&o) {
                    offsets.push(o);
                }
            }
            let taps: Taps = offsets
                .into_iter()
                .map(|(d, l)| (random(1, &mut rng)[0], d, l))
                .collect();
            let chan = ChannelSpec::on_grid(&fp, &taps).unwrap();
            let x = SymbolGrid::new(fp, random(fp.len(), &mut rng)).unwrap();
            let modem = Modem::new(ModemKind::Otfs, fp, &FilterChoice::Delta).unwrap();
            let y = modem.run(&chan, x.as_slice()).unwrap();
            let want = twisted_conv(&channel_taps(&chan, &fp).unwrap(), &x.to_dd()).unwrap();
            worst = worst.max(rel_max_err(&y, want.as_slice(), want.as_slice()));
            runs += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-8 && elapsed < Duration::from_secs(10),
        format!("{runs} channels, max deviation {worst:.1e} (< 1e-8); {elapsed:.2?} (< 10 s)"),
    )
}

struct Cell {
    kind: ModemKind,
    channel: &'static str,
    expect_ok: bool,
    max_over_min: f64,
    residual: f64,
}

/// Worst-case residual over every target symbol for a fixed reference.
fn worst_residual(kind: ModemKind, chan: &ChannelSpec, fp: &FrameParams) -> f64 {
    let f = FilterChoice::Delta;
    (0..fp.len())
        .map(|b| match kind {
            ModemKind::Otfs => {
                predictability_residual(chan, fp, (0, 0), (b / fp.n(), b % fp.n()), &f).unwrap()
            }
            _ => stationary_residual(kind, chan, fp, 0, b, &f).unwrap(),
        })
        .fold(0.0, f64::max)
}

fn table_matrix() -> Outcome {
    let fp = frame(4, 4, 20e-6);
    let channels: [(&'static str, Taps); 3] = [
        ("delay-only", vec![(unit(0.0), 0, 0), (unit(0.5), 1, 0)]),
        ("doppler-only", vec![(unit(0.0), 0, 0), (unit(0.5), 0, 1)]),
        (
            "doubly-spread",
            vec![
                (unit(0.0), 0, 0),
                (unit(0.5), 0, 1),
                (unit(-1.1), 1, 0),
                (unit(2.0), 1, 1),
            ],
        ),
    ];
    let mut cells = Vec::new();
    for (name, taps) in &channels {
        let chan = ChannelSpec::on_grid(&fp, taps).unwrap();
        for kind in ModemKind::ALL {
            let p = power_profile(kind, &chan, &fp, &FilterChoice::Delta).unwrap();
            let expect_ok = match kind {
                ModemKind::Otfs => true,
                ModemKind::Tdm => *name == "delay-only",
                ModemKind::Fdm => *name == "doppler-only",
            };
            cells.push(Cell {
                kind,
                channel: name,
                expect_ok,
                max_over_min: flatness(&p).unwrap().max_over_min,
                residual: worst_residual(kind, &chan, &fp),
            });
        }
    }
    let mut wrong = Vec::new();
    let mut fading_min = f64::INFINITY;
    for c in &cells {
        let ok = if c.expect_ok {
            c.max_over_min < FLAT && c.residual < 1e-8
        } else {
            fading_min = fading_min.min(c.max_over_min);
            c.max_over_min > NON_FLAT_BOUND && c.residual > 0.1
        };
        if !ok {
            wrong.push(format!(
                "{} {} (max/min {:.6}, residual {:.2e})",
                c.kind, c.channel, c.max_over_min, c.residual
            ));
        }
    }
    outcome(
        wrong.is_empty(),
        format!(
            "{} of 9 cells match; smallest fading max/min {fading_min:.6} (> {NON_FLAT_BOUND}){}{}",
            9 - wrong.len(),
            if wrong.is_empty() {
                ""
            } else {
                "; mismatched: "
            },
            wrong.join(", ")
        ),
    )
}

fn crystallization_interval() -> Outcome {
    let start = Instant::now();
    let chan = fig7_channel([Complex64::new(1.0, 0.0); 4]);
    let periods = log_spaced_periods(0.2e-6, 10.0 / 1700.0, 50);
    let frames: Vec<FrameParams> = periods.iter().map(|&t| frame(4, 4, t)).collect();
    let mut status_wrong = 0;
    for fp in &frames {
        let inside = fp.tau_p() > 2e-6 && fp.tau_p() < 1.0 / 1700.0;
        if validate_crystallization(&chan, fp).holds() != inside {
            status_wrong += 1;
        }
    }
    let filter: FilterChoice = "rc:0.5,0.5".parse().unwrap();
    let rows = crystallization_sweep(&chan, &frames, &filter).unwrap();
    let (mut worst_in, mut best_out) = ((0.0f64, 0.0), (f64::INFINITY, 0.0));
    let mut inside_count = 0;
    for r in &rows {
        let v = r.flatness.max_over_min;
        if r.delay_ok && r.doppler_ok {
            inside_count += 1;
            if v > worst_in.0 {
                worst_in = (v, r.tau_p);
            }
        } else if v < best_out.0 {
            best_out = (v, r.tau_p);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        status_wrong == 0 && worst_in.0 < best_out.0 && elapsed < Duration::from_secs(60),
        format!(
            "{status_wrong} misclassified of 50 ({inside_count} crystalline); worst crystalline max/min {:.6} at {:.3e} s vs best non-crystalline {:.6} at {:.3e} s (needs <); {elapsed:.2?} (< 60 s)",
            worst_in.0, worst_in.1, best_out.0, best_out.1
        ),
    )
}

fn aliasing() -> Outcome {
    // physical channel: 1 us delay bins and 62.5 kHz Doppler bins in both frames
    let aliased = frame(4, 4, 4e-6);
    let crystal = frame(8, 2, 8e-6);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut worst_aliased, mut worst_crystal) = (f64::INFINITY, 0.0f64);
    let mut collisions = (usize::MAX, 0usize);
    for _ in 0..10 {
        // equal-power paths with random phases
        let g: Vec<Complex64> = (0..3).map(|_| unit(rng.gen_range(0.0..2.0 * PI))).collect();
        let chan =
            ChannelSpec::on_grid(&aliased, &[(g[0], 0, 1), (g[1], 1, 0), (g[2], 5, 0)]).unwrap();
        assert!(chan.delay_spread() > aliased.tau_p());
        let f = FilterChoice::Delta;
        collisions.0 = collisions
            .0
            .min(aliasing_map(&chan, &aliased).unwrap().len());
        collisions.1 = collisions
            .1
            .max(aliasing_map(&chan, &crystal).unwrap().len());
        worst_aliased = worst_aliased
            .min(predictability_residual(&chan, &aliased, (0, 0), (2, 2), &f).unwrap());
        worst_crystal = worst_crystal
            .max(predictability_residual(&chan, &crystal, (0, 0), (5, 1), &f).unwrap());
    }
    outcome(
        collisions.0 > 0 && worst_aliased > 0.1 && collisions.1 == 0 && worst_crystal < 1e-8,
        format!(
            "aliased: min collisions {}, min residual {worst_aliased:.3} (> 0.1); crystalline: max collisions {}, max residual {worst_crystal:.1e} (< 1e-8)",
            collisions.0, collisions.1
        ),
    )
}

fn spread_product() -> Outcome {
    let chan = fig7_channel([Complex64::new(1.0, 0.0); 4]).with_mode(ChannelMode::Framed);
    let fig7 = validate_crystallization(&chan, &frame(4, 4, 20e-6)).spread_product;
    let worked = check_spreads(5e-6, 1000.0, &frame(4, 4, 20e-6)).spread_product;
    let ok = ((fig7 - 3.4e-3) / 3.4e-3).abs() < 1e-15 && ((worked - 5e-3) / 5e-3).abs() < 1e-15;
    outcome(
        ok,
        format!("fig7 {fig7:e} (3.4e-3), worked example {worked:e} (5e-3)"),
    )
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_zakdd");
    let channels = concat!(env!("CARGO_MANIFEST_DIR"), "/../../channels");
    let invocations: Vec<Vec<String>> = vec![
        vec!["selftest".into()],
        format!("simulate --channel {channels}/ongrid.json --modem otfs --noise-power 0.1 --seed 7 --probe 0,5")
            .split(' ')
            .map(str::to_owned)
            .collect(),
        format!("sweep --channel {channels}/fig7.json --tau-min 1e-6 --tau-max 1e-3 --points 8 --filter rc:0.5,0.5")
            .split(' ')
            .map(str::to_owned)
            .collect(),
    ];
    let mut differing = Vec::new();
    for args in &invocations {
        let run = |threads: Option<&str>| {
            let mut cmd = Command::new(bin);
            cmd.args(args);
            if let Some(t) = threads {
                cmd.env("ZAKDD_THREADS", t);
            }
            let out = cmd.output().expect("binary runs");
            (out.status.code(), out.stdout)
        };
        let first = run(None);
        if first.0 != Some(0) || first != run(None) || first != run(Some("1")) {
            differing.push(args[0].clone());
        }
    }
    outcome(
        differing.is_empty(),
        format!(
            "{} invocations byte-identical across runs and thread counts{}{}",
            invocations.len() - differing.len(),
            if differing.is_empty() {
                ""
            } else {
                "; differing: "
            },
            differing.join(", ")
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("transform identities", transform_identities),
        ("quasi-periodicity", quasi_periodicity),
        ("pulsone orthonormality", pulsone_orthonormality),
        ("limiting cases", limiting_cases),
        ("OTFS I/O law", io_law),
        ("fading/predictability matrix", table_matrix),
        ("crystallization interval", crystallization_interval),
        ("DD aliasing", aliasing),
        ("spread product", spread_product),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {}",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
