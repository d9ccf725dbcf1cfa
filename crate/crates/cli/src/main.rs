use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use modlat_cli::curves::{Curve, CurveRequest, RateGrid, RateUnit};
use modlat_cli::geometry::geometry_report;
use modlat_cli::sim::load_config;
use modlat_core::lattice::{lattice_figures_with, FigureOptions, Lattice};
use modlat_core::simulator::simulate;
use modlat_core::validation::{all_passed, run_with, Level};
use modlat_core::{ChannelSpec, Decoder, Ensemble, RateNats, SimConfig};

#[derive(Parser)]
#[command(name = "modlat", version, about = "Error exponents and typical error events for AWGN and mod-lattice channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate exponent curves over a rate grid (CSV, or JSON with --json).
    Exponents(ExponentsArgs),
    /// Report the typical error event and optimal scalings at one rate.
    Geometry(GeometryArgs),
    /// Estimate second moment, normalised second moment and radii of a lattice.
    Lattice(LatticeArgs),
    /// Run a Monte Carlo error-probability simulation.
    Simulate(SimulateArgs),
    /// Run the built-in numerical checks; exits 1 if any fails.
    Validate(ValidateArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SnrArgs {
    /// Signal-to-noise ratio in dB.
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<f64>,
    /// Linear signal-to-noise ratio.
    #[arg(long)]
    snr: Option<f64>,
}

impl SnrArgs {
    fn spec(&self) -> Result<ChannelSpec> {
        Ok(match (self.snr_db, self.snr) {
            (Some(db), _) => ChannelSpec::from_db(db)?,
            (_, Some(s)) => ChannelSpec::new(s)?,
            _ => unreachable!("clap enforces one of --snr-db/--snr"),
        })
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct RateArgs {
    #[arg(long)]
    rate_nats: Option<f64>,
    #[arg(long)]
    rate_bits: Option<f64>,
}

impl RateArgs {
    fn rate(&self) -> Result<RateNats> {
        Ok(match (self.rate_nats, self.rate_bits) {
            (Some(r), _) => RateNats::new(r)?,
            (_, Some(b)) => RateNats::from_bits(b)?,
            _ => unreachable!("clap enforces one of --rate-nats/--rate-bits"),
        })
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum UnitArg {
    Nats,
    Bits,
}

#[derive(Args)]
struct ExponentsArgs {
    #[command(flatten)]
    snr: SnrArgs,
    /// Rate grid `min:max:points`; `max` may be `C`.
    #[arg(long, default_value = "0:C:101")]
    grid: RateGrid,
    /// Unit of the grid bounds.
    #[arg(long, value_enum, default_value = "nats")]
    units: UnitArg,
    /// Comma-separated curves (E_sp, E_r, E_x, E_awgn, E_modlambda).
    #[arg(long, value_delimiter = ',', default_value = "E_sp,E_r,E_x,E_awgn,E_modlambda")]
    curves: Vec<Curve>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GeometryArgs {
    #[command(flatten)]
    snr: SnrArgs,
    #[command(flatten)]
    rate: RateArgs,
}

#[derive(Args)]
struct LatticeArgs {
    /// Built-in name (z<n>, d4, e8) or a basis file.
    #[arg(long)]
    lattice: String,
    #[arg(long, default_value_t = FigureOptions::default().samples)]
    samples: usize,
    #[arg(long, default_value_t = FigureOptions::default().probes)]
    probes: usize,
    #[arg(long, default_value_t = FigureOptions::default().seed)]
    seed: u64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum EnsembleArg {
    Spherical,
    Expurgated,
    Coset,
}

#[derive(Copy, Clone, ValueEnum)]
enum DecoderArg {
    Ml,
    EuclideanExtended,
    ClosestCoset,
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON config; overrides every other flag.
    #[arg(long, conflicts_with_all = ["n", "snr_db", "snr", "rate_nats", "rate_bits"])]
    config: Option<PathBuf>,
    #[arg(long, required_unless_present = "config")]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<f64>,
    #[arg(long)]
    snr: Option<f64>,
    #[arg(long)]
    rate_nats: Option<f64>,
    #[arg(long)]
    rate_bits: Option<f64>,
    #[arg(long, value_enum, default_value = "spherical")]
    ensemble: EnsembleArg,
    /// Minimum distance (normalised) for the expurgated ensemble.
    #[arg(long)]
    d_min: Option<f64>,
    /// Lattice for the coset ensemble.
    #[arg(long, default_value = "e8")]
    lattice: String,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_enum)]
    decoder: Option<DecoderArg>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    fixed_codebook: bool,
    #[arg(long)]
    noiseless: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SimulateArgs {
    fn config(&self) -> Result<SimConfig> {
        if let Some(path) = &self.config {
            return load_config(path);
        }
        let spec = match (self.snr_db, self.snr) {
            (Some(db), None) => ChannelSpec::from_db(db)?,
            (None, Some(s)) => ChannelSpec::new(s)?,
            _ => anyhow::bail!("give exactly one of --snr-db, --snr"),
        };
        let rate = match (self.rate_nats, self.rate_bits) {
            (Some(r), None) => RateNats::new(r)?,
            (None, Some(b)) => RateNats::from_bits(b)?,
            _ => anyhow::bail!("give exactly one of --rate-nats, --rate-bits"),
        };
        let ensemble = match self.ensemble {
            EnsembleArg::Spherical => Ensemble::Spherical,
            EnsembleArg::Expurgated => Ensemble::SphericalExpurgated {
                d_min: self.d_min.unwrap_or_else(|| modlat_core::awgn_exponents::d_min(rate.value())),
            },
            EnsembleArg::Coset => {
                let lat = Lattice::resolve(&self.lattice)?;
                Ensemble::LatticeCoset { lattice: lattice_figures_with(&lat, FigureOptions::default())? }
            }
        };
        let decoder = match (self.decoder, self.ensemble) {
            (Some(DecoderArg::Ml), _) => Decoder::Ml,
            (Some(DecoderArg::EuclideanExtended), _) => Decoder::EuclideanExtended,
            (Some(DecoderArg::ClosestCoset), _) => Decoder::ClosestCoset,
            (None, EnsembleArg::Coset) => Decoder::ClosestCoset,
            (None, _) => Decoder::Ml,
        };
        let cfg = SimConfig {
            n: self.n.context("--n is required")?,
            spec,
            rate,
            ensemble,
            alpha: self.alpha,
            decoder,
            trials: self.trials,
            seed: self.seed,
            fixed_codebook: self.fixed_codebook,
            noiseless: self.noiseless,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(value_enum, default_value = "fast")]
    level: LevelArg,
    /// Emit the check lines as a JSON array.
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: serde::Serialize>(path: Option<&PathBuf>, value: &T) -> Result<()> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// `Ok(true)` when everything succeeded, `Ok(false)` when a check failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Exponents(a) => {
            let mut grid = a.grid;
            grid.unit = match a.units {
                UnitArg::Nats => RateUnit::Nats,
                UnitArg::Bits => RateUnit::Bits,
            };
            let req = CurveRequest { spec: a.snr.spec()?, grid, curves: a.curves };
            if a.json {
                write_json(a.out.as_ref(), &req.to_json()?)?;
            } else {
                req.write_csv(output(a.out.as_ref())?)?;
            }
        }
        Command::Geometry(a) => {
            write_json(None, &geometry_report(a.rate.rate()?, &a.snr.spec()?)?)?;
        }
        Command::Lattice(a) => {
            let lat = Lattice::resolve(&a.lattice)?;
            let opts = FigureOptions { samples: a.samples, probes: a.probes, seed: a.seed };
            write_json(None, &lattice_figures_with(&lat, opts)?)?;
        }
        Command::Simulate(a) => {
            let cfg = a.config()?;
            write_json(a.out.as_ref(), &simulate(&cfg)?)?;
        }
        Command::Validate(a) => {
            let level = match a.level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            };
            let lines = if a.json {
                let lines = run_with(level, &mut |_| {});
                write_json(None, &lines)?;
                lines
            } else {
                run_with(level, &mut |l| println!("{l}"))
            };
            return Ok(all_passed(&lines));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
