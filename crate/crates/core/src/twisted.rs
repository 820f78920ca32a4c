//! Discrete twisted convolution on quasi-periodic DD signals.
//!
//! ```text
//! (a *s X)[k', l'] = sum_{(k,l)} a[k, l] X~[k' - k, l' - l] e^{j 2 pi (k' - k) l / (MN)}
//! ```
//!
//! where `X~` is the quasi-periodic extension. The operation is associative
//! but not commutative; composing filters first and then convolving gives
//! the same result as convolving one filter at a time.

use num_complex::Complex64;

use crate::channel::ChannelSpec;
use crate::dft::cis_ratio;
use crate::error::Result;
use crate::filter::DDFilter;
use crate::signal::DDSignal;
use crate::zak::quasi_extend;

/// Gathers every output cell from the taps (filter-major form).
pub fn twisted_conv(a: &DDFilter, x: &DDSignal) -> Result<DDSignal> {
    a.params().check_same(x.params())?;
    let fp = *x.params();
    let mn = fp.len() as i64;
    let cell = |kp: usize, lp: usize| {
        a.taps()
            .iter()
            .map(|&(k, l, v)| {
                let dk = kp as i64 - k;
                v * quasi_extend(x, dk, lp as i64 - l) * cis_ratio(dk * l, mn)
            })
            .sum()
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let n = fp.n();
        let grid: Vec<Complex64> = (0..fp.len())
            .into_par_iter()
            .map(|i| cell(i / n, i % n))
            .collect();
        DDSignal::new(fp, grid)
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(DDSignal::from_fn(fp, cell))
    }
}

/// Scatters every stored input cell through every tap and folds the
/// landing point back into the fundamental period (signal-major form).
/// Produces the same result as [`twisted_conv`].
pub fn twisted_conv_scatter(a: &DDFilter, x: &DDSignal) -> Result<DDSignal> {
    a.params().check_same(x.params())?;
    let fp = *x.params();
    let (m, n) = (fp.m() as i64, fp.n() as i64);
    let mn = m * n;
    let mut out = DDSignal::zeros(fp);
    for k0 in 0..m {
        for l0 in 0..n {
            let value = x.get(k0 as usize, l0 as usize);
            if value == Complex64::new(0.0, 0.0) {
                continue;
            }
            for &(dk, dl, v) in a.taps() {
                let (kt, lt) = (k0 + dk, l0 + dl);
                let (wraps, ks) = (kt.div_euclid(m), kt.rem_euclid(m));
                let ls = lt.rem_euclid(n);
                let c = v * value * cis_ratio(dl * k0, mn) * cis_ratio(-wraps * ls, n);
                let idx = (ks * n + ls) as usize;
                out.as_mut_slice()[idx] += c;
            }
        }
    }
    Ok(out)
}

/// `a *s b` as a filter; tap offsets add.
pub fn twisted_compose(a: &DDFilter, b: &DDFilter) -> Result<DDFilter> {
    a.params().check_same(b.params())?;
    let mn = a.params().len() as i64;
    let entries = a.taps().iter().flat_map(|&(k1, l1, va)| {
        b.taps()
            .iter()
            .map(move |&(k2, l2, vb)| (k1 + k2, l1 + l2, va * vb * cis_ratio(l1 * k2, mn)))
    });
    Ok(DDFilter::accumulate(*a.params(), entries))
}

/// The channel as DD taps on the lattice of `fp`.
///
/// A cyclic path `y[n] = h x[n - d] e^{j 2 pi l (n - d) / (MN)}` seen
/// through the DZT: writing `x[k - d + iM]` through the inverse transform of
/// the quasi-periodic `X~` and splitting the modulation as
/// `e^{j 2 pi l (k - d) / (MN)} e^{j 2 pi l i / N}` shifts Doppler by `l`
/// and leaves
///
/// ```text
/// Y[k, l'] = h X~[k - d, l' - l] e^{j 2 pi (k - d) l / (MN)}
/// ```
///
/// which is exactly a single twisted-convolution tap of value `h` at
/// `(d, l)`: no extra lattice phase.
pub fn channel_taps(chan: &ChannelSpec, fp: &crate::params::FrameParams) -> Result<DDFilter> {
    let taps = chan.lattice_taps(fp)?;
    Ok(DDFilter::accumulate(
        *fp,
        taps.into_iter().map(|(h, d, l)| (d, l, h)),
    ))
}

/// `w_rx *s h *s w_tx` for an on-grid channel.
pub fn effective_dd_filter(
    chan: &ChannelSpec,
    w_tx: &DDFilter,
    w_rx: &DDFilter,
) -> Result<DDFilter> {
    w_tx.params().check_same(w_rx.params())?;
    let h = channel_taps(chan, w_tx.params())?;
    twisted_compose(w_rx, &twisted_compose(&h, w_tx)?)
}
