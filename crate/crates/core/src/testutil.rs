use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::params::FrameParams;
use crate::signal::{DDSignal, SymbolGrid, TimeSignal};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_vec(len: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn random_time(fp: FrameParams, seed: u64) -> TimeSignal {
    TimeSignal::new(fp, random_vec(fp.len(), seed)).unwrap()
}

pub fn random_dd(fp: FrameParams, seed: u64) -> DDSignal {
    DDSignal::new(fp, random_vec(fp.len(), seed)).unwrap()
}

pub fn random_symbols(fp: FrameParams, seed: u64) -> SymbolGrid {
    SymbolGrid::new(fp, random_vec(fp.len(), seed)).unwrap()
}

pub fn time_signal(fp: FrameParams, samples: Vec<Complex64>) -> TimeSignal {
    TimeSignal::new(fp, samples).unwrap()
}
