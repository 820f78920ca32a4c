use serde::Serialize;

use crate::channel::ChannelSpec;
use crate::params::FrameParams;

/// Outcome of checking the periods of `fp` against a channel's spreads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crystallization {
    pub delay_ok: bool,
    pub doppler_ok: bool,
    pub spread_product: f64,
}

impl Crystallization {
    pub fn holds(&self) -> bool {
        self.delay_ok && self.doppler_ok
    }
}

/// Delay period must exceed the delay spread and Doppler period the Doppler
/// spread, both strictly.
pub fn validate_crystallization(chan: &ChannelSpec, fp: &FrameParams) -> Crystallization {
    check_spreads(chan.delay_spread(), chan.doppler_spread(), fp)
}

pub fn check_spreads(delay_spread: f64, doppler_spread: f64, fp: &FrameParams) -> Crystallization {
    Crystallization {
        delay_ok: fp.tau_p() > delay_spread,
        doppler_ok: fp.nu_p() > doppler_spread,
        spread_product: delay_spread * doppler_spread,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{fig7_channel, ChannelMode, ChannelPath};
    use num_complex::Complex64;

    #[test]
    fn fig7_at_twenty_microseconds() {
        let ch = fig7_channel([Complex64::new(1.0, 0.0); 4]);
        let r = validate_crystallization(&ch, &FrameParams::new(4, 4, 20e-6).unwrap());
        assert!(r.delay_ok && r.doppler_ok);
        assert!((r.spread_product - 3.4e-3).abs() < 1e-15);
    }

    #[test]
    fn cellular_example_product() {
        let fp = FrameParams::new(4, 4, 20e-6).unwrap();
        assert_eq!(
            check_spreads(5e-6, 1000.0, &fp).spread_product,
            5e-6 * 1000.0
        );
        assert!((check_spreads(5e-6, 1000.0, &fp).spread_product - 5e-3).abs() < 1e-17);
    }

    #[test]
    fn single_path_always_ok() {
        let ch = ChannelSpec::new(
            vec![ChannelPath::new(Complex64::new(0.3, 0.1), 7e-6, -400.0)],
            ChannelMode::Framed,
        )
        .unwrap();
        for tau in [1e-9, 1e-6, 1.0, 1e3] {
            let r = validate_crystallization(&ch, &FrameParams::new(2, 3, tau).unwrap());
            assert!(r.holds());
            assert_eq!(r.spread_product, 0.0);
        }
    }

    #[test]
    fn boundaries_are_strict() {
        let ch = fig7_channel([Complex64::new(1.0, 0.0); 4]);
        let r = validate_crystallization(&ch, &FrameParams::new(4, 4, 2e-6).unwrap());
        assert!(!r.delay_ok && r.doppler_ok);
        let r = validate_crystallization(&ch, &FrameParams::new(4, 4, 1.0 / 1700.0).unwrap());
        assert!(r.delay_ok);
        assert!(!r.doppler_ok || FrameParams::new(4, 4, 1.0 / 1700.0).unwrap().nu_p() > 1700.0);
    }
}
