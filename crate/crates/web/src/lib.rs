//! Browser bindings for the demo page. Every export takes plain numbers and
//! strings and returns a JSON document; errors surface as JS exceptions.
//!
//! The `*_json` functions are the host-testable cores of the exports.

use serde::Serialize;
use wasm_bindgen::prelude::*;
use zakdd::analysis::{
    aliasing_map, crystallization_sweep, flatness, log_spaced_periods, power_profile, Collision,
};
use zakdd::modem::{FilterChoice, ModemKind};
use zakdd::pulsone::{pulsone_fd, pulsone_td};
use zakdd::{validate_crystallization, ChannelSpec, Complex64, FrameParams};

type Result<T> = std::result::Result<T, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn to_json(v: &impl Serialize) -> Result<String> {
    serde_json::to_string(v).map_err(err)
}

#[derive(Serialize)]
struct Samples {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<&[Complex64]> for Samples {
    fn from(v: &[Complex64]) -> Self {
        Self {
            re: v.iter().map(|c| c.re).collect(),
            im: v.iter().map(|c| c.im).collect(),
        }
    }
}

#[derive(Serialize)]
struct PulsoneView {
    time: Samples,
    freq: Samples,
}

/// Time and frequency realizations of the pulsone at `(k0, l0)`.
pub fn pulsone_json(m: usize, n: usize, tau_p: f64, k0: usize, l0: usize) -> Result<String> {
    let fp = FrameParams::new(m, n, tau_p).map_err(err)?;
    let td = pulsone_td(fp, k0, l0).map_err(err)?;
    let fd = pulsone_fd(fp, k0, l0).map_err(err)?;
    to_json(&PulsoneView {
        time: td.samples().into(),
        freq: fd.bins().into(),
    })
}

#[derive(Serialize)]
struct ProfileView {
    profile: Vec<f64>,
    max_over_min: f64,
    normalized_std: f64,
    delay_ok: bool,
    doppler_ok: bool,
    /// Only for on-grid channels; `null` when a path is off the lattice.
    collisions: Option<Vec<Collision>>,
}

/// Received power per output index for one modem and channel.
pub fn profile_json(
    modem: &str,
    channel: &str,
    m: usize,
    n: usize,
    tau_p: f64,
    filter: &str,
) -> Result<String> {
    let kind: ModemKind = modem.parse().map_err(err)?;
    let chan = ChannelSpec::from_json(channel).map_err(err)?;
    let filter: FilterChoice = filter.parse().map_err(err)?;
    let fp = FrameParams::new(m, n, tau_p).map_err(err)?;
    let profile = power_profile(kind, &chan, &fp, &filter).map_err(err)?;
    let flat = flatness(&profile).map_err(err)?;
    let crystal = validate_crystallization(&chan, &fp);
    to_json(&ProfileView {
        max_over_min: flat.max_over_min,
        normalized_std: flat.normalized_std,
        delay_ok: crystal.delay_ok,
        doppler_ok: crystal.doppler_ok,
        collisions: aliasing_map(&chan, &fp).ok(),
        profile,
    })
}

/// OTFS crystallization sweep over `points` log-spaced delay periods.
pub fn sweep_json(
    channel: &str,
    m: usize,
    n: usize,
    tau_min: f64,
    tau_max: f64,
    points: usize,
    filter: &str,
) -> Result<String> {
    let chan = ChannelSpec::from_json(channel).map_err(err)?;
    let filter: FilterChoice = filter.parse().map_err(err)?;
    let frames = log_spaced_periods(tau_min, tau_max, points)
        .into_iter()
        .map(|t| FrameParams::new(m, n, t))
        .collect::<zakdd::Result<Vec<_>>>()
        .map_err(err)?;
    to_json(&crystallization_sweep(&chan, &frames, &filter).map_err(err)?)
}

#[wasm_bindgen]
pub fn pulsone(
    m: usize,
    n: usize,
    tau_p: f64,
    k0: usize,
    l0: usize,
) -> std::result::Result<String, JsError> {
    pulsone_json(m, n, tau_p, k0, l0).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn profile(
    modem: &str,
    channel: &str,
    m: usize,
    n: usize,
    tau_p: f64,
    filter: &str,
) -> std::result::Result<String, JsError> {
    profile_json(modem, channel, m, n, tau_p, filter).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sweep(
    channel: &str,
    m: usize,
    n: usize,
    tau_min: f64,
    tau_max: f64,
    points: usize,
    filter: &str,
) -> std::result::Result<String, JsError> {
    sweep_json(channel, m, n, tau_min, tau_max, points, filter).map_err(|e| JsError::new(&e))
}
