use proptest::prelude::*;
use zakdd::analysis::{flatness, power_profile};
use zakdd::channel::ChannelMode;
use zakdd::dft::dft;
use zakdd::modem::{FilterChoice, ModemKind};
use zakdd::signal::rel_max_err;
use zakdd::twisted::{twisted_compose, twisted_conv};
use zakdd::zak::{dzt, freq_invert, freq_realize, idzt};
use zakdd::{ChannelPath, ChannelSpec, Complex64, DDFilter, DDSignal, FrameParams, TimeSignal};

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=6, 1usize..=6)
}

fn samples(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_map(|v| {
        v.into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect()
    })
}

fn frame_and_signal() -> impl Strategy<Value = (FrameParams, Vec<Complex64>)> {
    dims().prop_flat_map(|(m, n)| {
        let fp = FrameParams::new(m, n, 1e-5).unwrap();
        (Just(fp), samples(m * n))
    })
}

fn filter(fp: FrameParams) -> impl Strategy<Value = DDFilter> {
    prop::collection::vec((-6i64..6, -6i64..6, -1.0f64..1.0, -1.0f64..1.0), 1..4).prop_map(
        move |taps| {
            DDFilter::accumulate(
                fp,
                taps.into_iter()
                    .map(|(k, l, re, im)| (k, l, Complex64::new(re, im))),
            )
        },
    )
}

proptest! {
    #[test]
    fn dzt_is_linear((fp, x) in frame_and_signal(), y in samples(36), a in -2.0f64..2.0) {
        let y = &y[..fp.len()];
        let mix: Vec<Complex64> = x.iter().zip(y).map(|(p, q)| p * a + q).collect();
        let lhs = dzt(&TimeSignal::new(fp, mix).unwrap());
        let dx = dzt(&TimeSignal::new(fp, x.clone()).unwrap());
        let dy = dzt(&TimeSignal::new(fp, y.to_vec()).unwrap());
        let rhs: Vec<Complex64> = dx.as_slice().iter().zip(dy.as_slice()).map(|(p, q)| p * a + q).collect();
        prop_assert!(rel_max_err(lhs.as_slice(), &rhs, &rhs) < 1e-12 || rhs.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn dzt_round_trip_and_energy((fp, x) in frame_and_signal()) {
        let t = TimeSignal::new(fp, x).unwrap();
        let d = dzt(&t);
        prop_assert!((d.energy() - t.energy()).abs() <= 1e-12 * t.energy().max(1.0));
        prop_assert!(rel_max_err(idzt(&d).samples(), t.samples(), t.samples()) < 1e-12);
    }

    #[test]
    fn frequency_realization_is_dft((fp, x) in frame_and_signal()) {
        let t = TimeSignal::new(fp, x).unwrap();
        let want = dft(t.samples());
        let f = freq_realize(&dzt(&t));
        prop_assert!(rel_max_err(f.bins(), &want, &want) < 1e-11);
        let back = freq_invert(&f);
        prop_assert!(rel_max_err(back.as_slice(), dzt(&t).as_slice(), back.as_slice()) < 1e-11);
    }

    #[test]
    fn twisted_convolution_composes(
        (fp, x, a, b) in frame_and_signal()
            .prop_flat_map(|(fp, x)| (Just(fp), Just(x), filter(fp), filter(fp))),
    ) {
        let x = DDSignal::new(fp, x).unwrap();
        let lhs = twisted_conv(&a, &twisted_conv(&b, &x).unwrap()).unwrap();
        let rhs = twisted_conv(&twisted_compose(&a, &b).unwrap(), &x).unwrap();
        prop_assert!(rel_max_err(lhs.as_slice(), rhs.as_slice(), rhs.as_slice()) < 1e-11
            || rhs.as_slice().iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn channel_json_round_trips(
        paths in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.0f64..1e-5, -2e3f64..2e3), 1..5),
        framed in any::<bool>(),
    ) {
        let mode = if framed { ChannelMode::Framed } else { ChannelMode::Cyclic };
        let paths = paths
            .into_iter()
            .map(|(re, im, d, f)| ChannelPath::new(Complex64::new(re, im), d, f))
            .collect();
        let chan = ChannelSpec::new(paths, mode).unwrap();
        prop_assert_eq!(ChannelSpec::from_json(&chan.to_json()).unwrap(), chan);
    }

    #[test]
    fn otfs_is_flat_on_crystalline_single_path(
        k in 0i64..4, l in -3i64..4, re in 0.1f64..1.0, im in -1.0f64..1.0,
    ) {
        let fp = FrameParams::new(4, 4, 1e-5).unwrap();
        let chan = ChannelSpec::on_grid(&fp, &[(Complex64::new(re, im), k, l)]).unwrap();
        let p = power_profile(ModemKind::Otfs, &chan, &fp, &FilterChoice::Delta).unwrap();
        prop_assert!(flatness(&p).unwrap().max_over_min < 1.0 + 1e-9);
    }
}
