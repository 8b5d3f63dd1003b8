use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use std::f64::consts::PI;
use std::path::PathBuf;

use breathing_trap::breathing::QuadraticDriveForm;
use breathing_trap::cli::{
    execute, replay, CommandParams, InitKind, LatticeFloquetParams, LatticeGaugeCheckParams,
    LatticePropagateParams, LatticeVarianceMapParams, WellEffectiveParams, WellFloquetParams,
    WellVarianceMapParams,
};
use breathing_trap::{Error, Result};

/// Floquet analysis and beam propagation for harmonically breathing traps.
///
/// Subcommands emit CSV artifacts plus a `.manifest.json` sidecar; `replay`
/// re-runs a manifest and reproduces the outputs byte-for-byte on the same
/// build.
#[derive(Parser)]
#[command(name = "breathing-trap", version, about)]
struct Cli {
    /// Worker threads used for grid sweeps (default: all cores). The
    /// output bytes do not depend on this.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Particle between breathing impenetrable walls (spectral solver).
    Well {
        #[command(subcommand)]
        cmd: WellCmd,
    },
    /// Breathing nearest-neighbor waveguide lattice.
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Re-run a command from its manifest sidecar.
    Replay {
        /// Path to a `.manifest.json` produced by an earlier run.
        manifest: PathBuf,
        /// Redirect the output prefix (defaults to the recorded one).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum WellCmd {
    /// Lowest-variance Floquet state vs the effective-trap ground state.
    Floquet(WellFloquetArgs),
    /// Minimum Floquet variance over an (ω, ε) grid.
    VarianceMap(WellVarianceMapArgs),
    /// Ground state of the effective static trap diag(E) + ½Ω²X2.
    Effective(WellEffectiveArgs),
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Beam propagation through the breathing lattice.
    Propagate(LatticePropagateArgs),
    /// Discrete Floquet states, most localized first.
    Floquet(LatticeFloquetArgs),
    /// Minimum Floquet variance over an (ω, ε) grid.
    VarianceMap(LatticeVarianceMapArgs),
    /// Gauge-equivalence check for a uniform on-site energy.
    GaugeCheck(LatticeGaugeCheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Debug)]
#[serde(rename_all = "kebab-case")]
enum DriveArg {
    /// Drive coefficient −½αα̈ from the dilation transformation (default).
    Dilation,
    /// Drive coefficient f = ½αα̈ + α̇² (sensitivity studies).
    DriveF,
}

impl From<DriveArg> for QuadraticDriveForm {
    fn from(d: DriveArg) -> Self {
        match d {
            DriveArg::Dilation => QuadraticDriveForm::Dilation,
            DriveArg::DriveF => QuadraticDriveForm::DriveF,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Debug)]
#[serde(rename_all = "kebab-case")]
enum InitArg {
    Gaussian,
    Site,
}

impl From<InitArg> for InitKind {
    fn from(i: InitArg) -> Self {
        match i {
            InitArg::Gaussian => InitKind::Gaussian,
            InitArg::Site => InitKind::Site,
        }
    }
}

// Shared flag plumbing: every field is optional on the command line and in
// the optional JSON config file; flags win over the config, which wins over
// the built-in default.

fn pick<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}

fn require<T>(flag: Option<T>, config: Option<T>, name: &str) -> Result<T> {
    flag.or(config)
        .ok_or_else(|| Error::InvalidParameter(format!("missing required parameter --{name}")))
}

fn load_config<T: DeserializeOwned + Default>(path: &Option<PathBuf>) -> Result<T> {
    match path {
        Some(p) => Ok(serde_json::from_str(&std::fs::read_to_string(p)?)?),
        None => Ok(T::default()),
    }
}

/// Resolves the two accepted frequency conventions: raw angular ω, or ω in
/// units of π² (the natural unit of the well spectrum).
fn resolve_omega(omega: Option<f64>, omega_pi2: Option<f64>) -> Result<f64> {
    match (omega, omega_pi2) {
        (Some(_), Some(_)) => Err(Error::InvalidParameter(
            "--omega and --omega-pi2 are mutually exclusive".into(),
        )),
        (Some(w), None) => Ok(w),
        (None, Some(m)) => Ok(m * PI * PI),
        (None, None) => Err(Error::InvalidParameter(
            "one of --omega or --omega-pi2 is required".into(),
        )),
    }
}

#[derive(Args, Deserialize, Default, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
struct WellFloquetArgs {
    /// Breathing angular frequency (raw units).
    #[arg(long)]
    omega: Option<f64>,
    /// Breathing frequency in units of π².
    #[arg(long)]
    omega_pi2: Option<f64>,
    /// Breathing amplitude ε, |ε| < 1.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Basis truncation (static well modes).
    #[arg(long)]
    n_modes: Option<usize>,
    #[arg(long)]
    steps_per_period: Option<usize>,
    /// Quadratic drive form.
    #[arg(long, value_enum)]
    drive: Option<DriveArg>,
    /// Number of x samples in the density profile CSV.
    #[arg(long)]
    x_samples: Option<usize>,
    /// Output prefix (files get .csv/.summary.json/.manifest.json suffixes).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file mirroring these flags.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

impl WellFloquetArgs {
    fn resolve(self) -> Result<WellFloquetParams> {
        let cfg: WellFloquetArgs = load_config(&self.config)?;
        Ok(WellFloquetParams {
            omega: resolve_omega(self.omega.or(cfg.omega), self.omega_pi2.or(cfg.omega_pi2))?,
            epsilon: require(self.epsilon, cfg.epsilon, "epsilon")?,
            n_modes: pick(self.n_modes, cfg.n_modes, 30),
            steps_per_period: pick(self.steps_per_period, cfg.steps_per_period, 4096),
            drive: pick(self.drive, cfg.drive, DriveArg::Dilation).into(),
            x_samples: pick(self.x_samples, cfg.x_samples, 201),
            out: require(self.out, cfg.out, "out")?,
        })
    }
}

#[derive(Args, Deserialize, Default, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
struct WellVarianceMapArgs {
    #[arg(long)]
    omega_min: Option<f64>,
    #[arg(long)]
    omega_max: Option<f64>,
    #[arg(long)]
    omega_count: Option<usize>,
    #[arg(long)]
    epsilon_min: Option<f64>,
    #[arg(long)]
    epsilon_max: Option<f64>,
    #[arg(long)]
    epsilon_count: Option<usize>,
    /// Interpret --omega-min/--omega-max in units of π².
    #[arg(long)]
    pi2_units: bool,
    #[arg(long)]
    n_modes: Option<usize>,
    #[arg(long)]
    steps_per_period: Option<usize>,
    #[arg(long, value_enum)]
    drive: Option<DriveArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

impl WellVarianceMapArgs {
    fn resolve(self) -> Result<WellVarianceMapParams> {
        let cfg: WellVarianceMapArgs = load_config(&self.config)?;
        let scale = if self.pi2_units || cfg.pi2_units {
            PI * PI
        } else {
            1.0
        };
        Ok(WellVarianceMapParams {
            omega_min: require(self.omega_min, cfg.omega_min, "omega-min")? * scale,
            omega_max: require(self.omega_max, cfg.omega_max, "omega-max")? * scale,
            omega_count: pick(self.omega_count, cfg.omega_count, 20),
            epsilon_min: require(self.epsilon_min, cfg.epsilon_min, "epsilon-min")?,
            epsilon_max: require(self.epsilon_max, cfg.epsilon_max, "epsilon-max")?,
            epsilon_count: pick(self.epsilon_count, cfg.epsilon_count, 20),
            n_modes: pick(self.n_modes, cfg.n_modes, 30),
            steps_per_period: pick(self.steps_per_period, cfg.steps_per_period, 1024),
            drive: pick(self.drive, cfg.drive, DriveArg::Dilation).into(),
            out: require(self.out, cfg.out, "out")?,
        })
    }
}

#[derive(Args, Deserialize, Default, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
struct WellEffectiveArgs {
    /// Effective trap frequency Ω directly.
    #[arg(long)]
    omega_eff: Option<f64>,
    /// Derive Ω = εω/√2 from a breathing drive (with --epsilon).
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    omega_pi2: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    n_modes: Option<usize>,
    #[arg(long)]
    x_samples: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

impl WellEffectiveArgs {
    fn resolve(self) -> Result<WellEffectiveParams> {
        let cfg: WellEffectiveArgs = load_config(&self.config)?;
        let omega_eff = match self.omega_eff.or(cfg.omega_eff) {
            Some(w) => w,
            None => {
                let omega =
                    resolve_omega(self.omega.or(cfg.omega), self.omega_pi2.or(cfg.omega_pi2))?;
                let epsilon = require(self.epsilon, cfg.epsilon, "epsilon")?;
                epsilon.abs() * omega / 2f64.sqrt()
            }
        };
        Ok(WellEffectiveParams {
            omega_eff,
            n_modes: pick(self.n_modes, cfg.n_modes, 30),
            x_samples: pick(self.x_samples, cfg.x_samples, 201),
            out: require(self.out, cfg.out, "out")?,
        })
    }
}

#[derive(Args, Deserialize, Default, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
struct LatticeCommonArgs {
    /// Breathing amplitude ε, |ε| < 1.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Breathing angular frequency (units of the coupling k).
    #[arg(long)]
    omega: Option<f64>,
    /// Number of waveguides (odd).
    #[arg(long)]
    sites: Option<usize>,
    /// Coupling constant k.
    #[arg(long)]
    coupling: Option<f64>,
    /// Dimensionless on-site strength g.
    #[arg(long = "g")]
    #[serde(rename = "g")]
    onsite_g: Option<f64>,
    /// Trapping site n₀.
    #[arg(long)]
    trap_center: Option<i64>,
    #[arg(long, value_enum)]
    drive: Option<DriveArg>,
    /// Use i α̇/(2α) instead of i α̇/α (sensitivity study).
    #[arg(long)]
    halved_breathing_rate: bool,
    #[arg(long)]
    steps_per_period: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file mirroring these flags.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

struct LatticeCommon {
    epsilon: f64,
    omega: f64,
    sites: usize,
    coupling: f64,
    onsite_g: f64,
    trap_center: i64,
    drive: QuadraticDriveForm,
    halved_breathing_rate: bool,
    steps_per_period: usize,
    out: PathBuf,
}

impl LatticeCommonArgs {
    fn resolve(self) -> Result<LatticeCommon> {
        let cfg: LatticeCommonArgs = load_config(&self.config)?;
        Ok(LatticeCommon {
            epsilon: require(self.epsilon, cfg.epsilon, "epsilon")?,
            omega: require(self.omega, cfg.omega, "omega")?,
            sites: pick(self.sites, cfg.sites, 161),
            coupling: pick(self.coupling, cfg.coupling, 1.0),
            onsite_g: pick(self.onsite_g, cfg.onsite_g, 1.0),
            trap_center: pick(self.trap_center, cfg.trap_center, 0),
            drive: pick(self.drive, cfg.drive, DriveArg::Dilation).into(),
            halved_breathing_rate: self.halved_breathing_rate || cfg.halved_breathing_rate,
            steps_per_period: pick(self.steps_per_period, cfg.steps_per_period, 4096),
            out: require(self.out, cfg.out, "out")?,
        })
    }
}

#[derive(Args, Deserialize, Default, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
struct LatticePropagateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: LatticeCommonArgs,
    /// Initial profile.
    #[arg(long, value_enum)]
    init: Option<InitArg>,
    /// Propagation distance (units of 1/k).
    #[arg(long)]
    z_end: Option<f64>,
    /// Approximate number of recorded snapshots.
    #[arg(long)]
    snapshots: Option<usize>,
}

impl LatticePropagateArgs {
    fn resolve(self) -> Result<LatticePropagateParams> {
        let init = self.init;
        let z_end = self.z_end;
        let snapshots = self.snapshots;
        let common = self.common.resolve()?;
        Ok(LatticePropagateParams {
            epsilon: common.epsilon,
            omega: common.omega,
            sites: common.sites,
            coupling: common.coupling,
            onsite_g: common.onsite_g,
            trap_center: common.trap_center,
            drive: common.drive,
            halved_breathing_rate: common.halved_breathing_rate,
            init: init.unwrap_or(InitArg::Gaussian).into(),
            z_end: z_end.unwrap_or(30.0),
            snapshots: snapshots.unwrap_or(128),
            steps_per_period: common.steps_per_period,
            out: common.out,
        })
    }
}

#[derive(Args, Deserialize, Default, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
struct LatticeFloquetArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: LatticeCommonArgs,
    /// Number of most-localized states to emit.
    #[arg(long)]
    n_states: Option<usize>,
}

impl LatticeFloquetArgs {
    fn resolve(self) -> Result<LatticeFloquetParams> {
        let n_states = self.n_states;
        let common = self.common.resolve()?;
        Ok(LatticeFloquetParams {
            epsilon: common.epsilon,
            omega: common.omega,
            sites: common.sites,
            coupling: common.coupling,
            onsite_g: common.onsite_g,
            trap_center: common.trap_center,
            drive: common.drive,
            halved_breathing_rate: common.halved_breathing_rate,
            n_states: n_states.unwrap_or(2),
            steps_per_period: common.steps_per_period,
            out: common.out,
        })
    }
}

#[derive(Args, Deserialize, Default, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
struct LatticeVarianceMapArgs {
    #[arg(long)]
    omega_min: Option<f64>,
    #[arg(long)]
    omega_max: Option<f64>,
    #[arg(long)]
    omega_count: Option<usize>,
    #[arg(long)]
    epsilon_min: Option<f64>,
    #[arg(long)]
    epsilon_max: Option<f64>,
    #[arg(long)]
    epsilon_count: Option<usize>,
    #[arg(long)]
    sites: Option<usize>,
    #[arg(long)]
    coupling: Option<f64>,
    #[arg(long = "g")]
    #[serde(rename = "g")]
    onsite_g: Option<f64>,
    #[arg(long)]
    trap_center: Option<i64>,
    #[arg(long, value_enum)]
    drive: Option<DriveArg>,
    #[arg(long)]
    halved_breathing_rate: bool,
    #[arg(long)]
    steps_per_period: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

impl LatticeVarianceMapArgs {
    fn resolve(self) -> Result<LatticeVarianceMapParams> {
        let cfg: LatticeVarianceMapArgs = load_config(&self.config)?;
        Ok(LatticeVarianceMapParams {
            omega_min: require(self.omega_min, cfg.omega_min, "omega-min")?,
            omega_max: require(self.omega_max, cfg.omega_max, "omega-max")?,
            omega_count: pick(self.omega_count, cfg.omega_count, 20),
            epsilon_min: require(self.epsilon_min, cfg.epsilon_min, "epsilon-min")?,
            epsilon_max: require(self.epsilon_max, cfg.epsilon_max, "epsilon-max")?,
            epsilon_count: pick(self.epsilon_count, cfg.epsilon_count, 20),
            sites: pick(self.sites, cfg.sites, 161),
            coupling: pick(self.coupling, cfg.coupling, 1.0),
            onsite_g: pick(self.onsite_g, cfg.onsite_g, 1.0),
            trap_center: pick(self.trap_center, cfg.trap_center, 0),
            drive: pick(self.drive, cfg.drive, DriveArg::Dilation).into(),
            halved_breathing_rate: self.halved_breathing_rate || cfg.halved_breathing_rate,
            steps_per_period: pick(self.steps_per_period, cfg.steps_per_period, 1024),
            out: require(self.out, cfg.out, "out")?,
        })
    }
}

#[derive(Args, Deserialize, Default, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
struct LatticeGaugeCheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: LatticeCommonArgs,
    /// Uniform on-site energy e removed by the canonical transformation.
    #[arg(long)]
    onsite_energy: Option<f64>,
    #[arg(long, value_enum)]
    init: Option<InitArg>,
    /// Propagation distance (default: one breathing period).
    #[arg(long)]
    z_end: Option<f64>,
}

impl LatticeGaugeCheckArgs {
    fn resolve(self) -> Result<LatticeGaugeCheckParams> {
        let onsite_energy = self.onsite_energy;
        let init = self.init;
        let z_end = self.z_end;
        let common = self.common.resolve()?;
        Ok(LatticeGaugeCheckParams {
            epsilon: common.epsilon,
            omega: common.omega,
            sites: common.sites,
            coupling: common.coupling,
            onsite_g: common.onsite_g,
            trap_center: common.trap_center,
            drive: common.drive,
            halved_breathing_rate: common.halved_breathing_rate,
            onsite_energy: onsite_energy.unwrap_or(0.7),
            init: init.unwrap_or(InitArg::Gaussian).into(),
            z_end: z_end.unwrap_or(2.0 * PI / common.omega),
            steps_per_period: common.steps_per_period,
            out: common.out,
        })
    }
}

fn dispatch(command: Command) -> Result<()> {
    let written = match command {
        Command::Well { cmd } => {
            let params = match cmd {
                WellCmd::Floquet(a) => CommandParams::WellFloquet(a.resolve()?),
                WellCmd::VarianceMap(a) => CommandParams::WellVarianceMap(a.resolve()?),
                WellCmd::Effective(a) => CommandParams::WellEffective(a.resolve()?),
            };
            execute(&params)?
        }
        Command::Lattice { cmd } => {
            let params = match cmd {
                LatticeCmd::Propagate(a) => CommandParams::LatticePropagate(a.resolve()?),
                LatticeCmd::Floquet(a) => CommandParams::LatticeFloquet(a.resolve()?),
                LatticeCmd::VarianceMap(a) => CommandParams::LatticeVarianceMap(a.resolve()?),
                LatticeCmd::GaugeCheck(a) => CommandParams::LatticeGaugeCheck(a.resolve()?),
            };
            execute(&params)?
        }
        Command::Replay { manifest, out } => replay(&manifest, out)?,
    };
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.workers {
        Some(workers) => rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))
            .and_then(|pool| pool.install(|| dispatch(cli.command))),
        None => dispatch(cli.command),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
