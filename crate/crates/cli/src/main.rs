//! `zakdd` command-line front end. Exit status: 0 ok, 1 runtime error,
//! 2 usage error.

mod table;

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use zakdd::analysis::{crystallization_sweep, log_spaced_periods};
use zakdd::channel::{add_awgn, gaussian_symbols};
use zakdd::modem::{effective_filter_probe, FilterChoice, Modem, ModemKind};
use zakdd::{pulsone, selftest, zak};
use zakdd::{ChannelMode, ChannelSpec, DDSignal, FrameParams, FreqSignal, TimeSignal};

use table::{float, read_grid, read_samples, write_grid, write_samples, Table};

const THREADS_VAR: &str = "ZAKDD_THREADS";

#[derive(Parser)]
#[command(
    name = "zakdd",
    version,
    about = "Delay-Doppler signal processing and OTFS/TDM/FDM simulation"
)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Frame {
    /// Delay bins per period.
    #[arg(long = "M", default_value_t = 4)]
    m: usize,
    /// Doppler bins per period.
    #[arg(long = "N", default_value_t = 4)]
    n: usize,
    /// Delay period in seconds; the Doppler period is its reciprocal.
    #[arg(long = "tau-p", default_value_t = 20e-6)]
    tau_p: f64,
}

impl Frame {
    fn params(&self) -> Result<FrameParams> {
        Ok(FrameParams::new(self.m, self.n, self.tau_p)?)
    }
}

#[derive(Args)]
struct ChannelArgs {
    /// Channel JSON file.
    #[arg(long)]
    channel: PathBuf,
    /// Override the channel file's mode.
    #[arg(long)]
    mode: Option<ChannelMode>,
}

impl ChannelArgs {
    fn load(&self) -> Result<ChannelSpec> {
        let text = std::fs::read_to_string(&self.channel)
            .with_context(|| format!("reading channel file {}", self.channel.display()))?;
        let chan = ChannelSpec::from_json(&text)
            .with_context(|| format!("parsing channel file {}", self.channel.display()))?;
        Ok(match self.mode {
            Some(mode) => chan.with_mode(mode),
            None => chan,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    /// Time samples to delay-Doppler grid.
    Dzt,
    /// Delay-Doppler grid to time samples.
    Idzt,
    /// Delay-Doppler grid to frequency bins.
    Freq,
    /// Frequency bins to delay-Doppler grid.
    FreqInvert,
}

#[derive(Clone, Copy, ValueEnum)]
enum Domain {
    Td,
    Fd,
    Dd,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a Zak-domain transform to a CSV signal.
    Transform {
        #[command(flatten)]
        frame: Frame,
        #[arg(long, value_enum)]
        direction: Direction,
        /// Input CSV (`index,re,im` or `k,l,re,im`); stdin when absent.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Synthesize the pulsone for DD cell (k0, l0).
    Pulsone {
        #[command(flatten)]
        frame: Frame,
        #[arg(long, default_value_t = 0)]
        k0: usize,
        #[arg(long, default_value_t = 0)]
        l0: usize,
        #[arg(long, value_enum, default_value = "td")]
        domain: Domain,
    },
    /// Pass an `index,re,im` time signal through a channel.
    Channel {
        #[command(flatten)]
        frame: Frame,
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        noise_power: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run one frame through a modem and channel; also emits probe responses.
    Simulate {
        #[command(flatten)]
        frame: Frame,
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long, default_value = "otfs")]
        modem: ModemKind,
        /// `delta` or `rc:<delay rolloff>,<doppler rolloff>[,<span>]`.
        #[arg(long, default_value = "delta")]
        filter: FilterChoice,
        #[arg(long, default_value_t = 0.0)]
        noise_power: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Symbols as `index,re,im`; unit-power Gaussian from --seed when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Linear symbol indices to probe.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        probe: Vec<usize>,
    },
    /// Crystallization sweep of the OTFS power profile over delay periods.
    Sweep {
        #[arg(long = "M", default_value_t = 4)]
        m: usize,
        #[arg(long = "N", default_value_t = 4)]
        n: usize,
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long, default_value = "delta")]
        filter: FilterChoice,
        /// Explicit delay periods in seconds.
        #[arg(
            long,
            value_delimiter = ',',
            required_unless_present = "tau_min",
            conflicts_with_all = ["tau_min", "tau_max", "points"]
        )]
        tau_p_list: Vec<f64>,
        #[arg(long, requires_all = ["tau_max", "points"])]
        tau_min: Option<f64>,
        #[arg(long, requires_all = ["tau_min", "points"])]
        tau_max: Option<f64>,
        /// Number of log-spaced periods between --tau-min and --tau-max.
        #[arg(long, requires_all = ["tau_min", "tau_max"])]
        points: Option<usize>,
        /// Also write every row's power profile as JSON.
        #[arg(long)]
        profile_out: Option<PathBuf>,
    },
    /// Run the embedded oracle suite.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {}", describe(&err));
            ExitCode::from(1)
        }
    }
}

/// Joins the error chain, skipping causes already quoted by their parent.
fn describe(err: &anyhow::Error) -> String {
    let mut text = String::new();
    let mut last = String::new();
    for cause in err.chain() {
        let msg = cause.to_string();
        if !last.ends_with(&msg) {
            if !text.is_empty() {
                text.push_str(": ");
            }
            text.push_str(&msg);
        }
        last = msg;
    }
    text
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn open_input(path: Option<&Path>) -> Result<Box<dyn Read>> {
    Ok(match path {
        Some(p) => Box::new(File::open(p).with_context(|| format!("opening {}", p.display()))?),
        None => Box::new(io::stdin().lock()),
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

/// Returns `Ok(false)` when the command ran but reported a failure.
fn run(cli: Cli) -> Result<bool> {
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let ok = match cli.command {
        Command::Transform {
            frame,
            direction,
            input,
        } => {
            let fp = frame.params()?;
            let input = open_input(input.as_deref())?;
            match direction {
                Direction::Dzt => {
                    let x = TimeSignal::new(fp, read_samples(input)?)?;
                    write_grid(&mut out, fp.n(), zak::dzt(&x).as_slice())?;
                }
                Direction::Idzt => {
                    let x = DDSignal::new(fp, read_grid(input, fp.n())?)?;
                    write_samples(&mut out, zak::idzt(&x).samples())?;
                }
                Direction::Freq => {
                    let x = DDSignal::new(fp, read_grid(input, fp.n())?)?;
                    write_samples(&mut out, zak::freq_realize(&x).bins())?;
                }
                Direction::FreqInvert => {
                    let x = FreqSignal::new(fp, read_samples(input)?)?;
                    write_grid(&mut out, fp.n(), zak::freq_invert(&x).as_slice())?;
                }
            }
            true
        }
        Command::Pulsone {
            frame,
            k0,
            l0,
            domain,
        } => {
            let fp = frame.params()?;
            match domain {
                Domain::Td => write_samples(&mut out, pulsone::pulsone_td(fp, k0, l0)?.samples())?,
                Domain::Fd => write_samples(&mut out, pulsone::pulsone_fd(fp, k0, l0)?.bins())?,
                Domain::Dd => {
                    write_grid(&mut out, fp.n(), pulsone::dd_pulse(fp, k0, l0)?.as_slice())?
                }
            }
            true
        }
        Command::Channel {
            frame,
            channel,
            input,
            noise_power,
            seed,
        } => {
            let fp = frame.params()?;
            let chan = channel.load()?;
            let x = TimeSignal::new(fp, read_samples(open_input(input.as_deref())?)?)?;
            let y = add_awgn(&zakdd::apply_channel(&chan, &x)?, noise_power, seed)?;
            write_samples(&mut out, y.samples())?;
            true
        }
        Command::Simulate {
            frame,
            channel,
            modem,
            filter,
            noise_power,
            seed,
            input,
            probe,
        } => {
            simulate(
                &mut out,
                frame.params()?,
                &channel.load()?,
                modem,
                &filter,
                noise_power,
                seed,
                input.as_deref(),
                &probe,
            )?;
            true
        }
        Command::Sweep {
            m,
            n,
            channel,
            filter,
            tau_p_list,
            tau_min,
            tau_max,
            points,
            profile_out,
        } => {
            let periods = match (tau_min, tau_max, points) {
                (Some(lo), Some(hi), Some(count)) => log_spaced_periods(lo, hi, count),
                _ => tau_p_list,
            };
            let frames = periods
                .iter()
                .map(|&t| FrameParams::new(m, n, t))
                .collect::<zakdd::Result<Vec<_>>>()?;
            sweep(
                &mut out,
                &channel.load()?,
                &frames,
                &filter,
                profile_out.as_deref(),
            )?;
            true
        }
        Command::Selftest => {
            let checks = selftest::run();
            let mut t = Table::new(&mut out, &["check", "value", "tolerance", "passed"])?;
            for c in &checks {
                t.row(&[
                    c.name.to_string(),
                    float(c.value),
                    float(c.tolerance),
                    c.passed.to_string(),
                ])?;
            }
            t.finish()?;
            checks.iter().all(|c| c.passed)
        }
    };
    out.flush()?;
    Ok(ok)
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    out: &mut dyn Write,
    fp: FrameParams,
    chan: &ChannelSpec,
    kind: ModemKind,
    filter: &FilterChoice,
    noise_power: f64,
    seed: u64,
    input: Option<&Path>,
    probes: &[usize],
) -> Result<()> {
    let symbols = match input {
        Some(p) => read_samples(open_input(Some(p))?)?,
        None => gaussian_symbols(fp.len(), seed),
    };
    let modem = Modem::new(kind, fp, filter)?;
    let tx = modem.transmit(&symbols)?;
    // distinct stream from the symbol generator
    let noise_seed = seed ^ 0x9e37_79b9_7f4a_7c15;
    let rx = add_awgn(&zakdd::apply_channel(chan, &tx)?, noise_power, noise_seed)?;
    let y = modem.receive(&rx)?;

    let mut t = Table::new(
        out,
        &["record", "symbol", "offset_k", "offset_l", "re", "im"],
    )?;
    for (record, values) in [("tx", &symbols), ("rx", &y)] {
        for (k, v) in values.iter().enumerate() {
            t.row(&[
                record.into(),
                k.to_string(),
                "0".into(),
                "0".into(),
                float(v.re),
                float(v.im),
            ])?;
        }
    }
    for &k in probes {
        let resp = effective_filter_probe(kind, chan, &fp, filter, k)?;
        let n = fp.n() as i64;
        for (i, v) in resp.values.iter().enumerate() {
            let (dk, dl) = match kind {
                ModemKind::Otfs => (resp.origin.0 + i as i64 / n, resp.origin.1 + i as i64 % n),
                _ => (i as i64, 0),
            };
            t.row(&[
                "probe".into(),
                k.to_string(),
                dk.to_string(),
                dl.to_string(),
                float(v.re),
                float(v.im),
            ])?;
        }
    }
    t.finish()
}

#[derive(Serialize)]
struct ProfileRow<'a> {
    tau_p_s: f64,
    nu_p_hz: f64,
    profile: &'a [f64],
}

fn sweep(
    out: &mut dyn Write,
    chan: &ChannelSpec,
    frames: &[FrameParams],
    filter: &FilterChoice,
    profile_out: Option<&Path>,
) -> Result<()> {
    let rows = crystallization_sweep(chan, frames, filter)?;
    let mut t = Table::new(
        out,
        &[
            "tau_p_s",
            "nu_p_hz",
            "delay_ok",
            "doppler_ok",
            "max_over_min",
            "normalized_std",
        ],
    )?;
    for r in &rows {
        t.row(&[
            float(r.tau_p),
            float(r.nu_p),
            r.delay_ok.to_string(),
            r.doppler_ok.to_string(),
            float(r.flatness.max_over_min),
            float(r.flatness.normalized_std),
        ])?;
    }
    t.finish()?;
    if let Some(path) = profile_out {
        let json: Vec<ProfileRow> = rows
            .iter()
            .map(|r| ProfileRow {
                tau_p_s: r.tau_p,
                nu_p_hz: r.nu_p,
                profile: &r.profile,
            })
            .collect();
        let mut f = create(path)?;
        serde_json::to_writer_pretty(&mut f, &json)?;
        writeln!(f)?;
        f.flush()?;
    }
    Ok(())
}
