//! Command implementations behind the `breathing-trap` binary: resolved
//! parameter sets, deterministic CSV/JSON artifact emission, and manifest
//! sidecars that allow any run to be replayed byte-for-byte.
//!
//! Every command writes its outputs next to a `<out>.manifest.json`
//! recording the fully resolved parameters and the tool version;
//! `replay` re-executes a manifest. All numeric CSV fields use 17
//! significant digits so values round-trip exactly.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::breathing::{BreathingSchedule, QuadraticDriveForm};
use crate::lattice::{
    gauge_check, gaussian_profile, lattice_floquet, lattice_variance_map, propagate,
    single_site_input, LatticeConfig,
};
use crate::numerics::{CVec, IntegratorConfig};
use crate::well::{
    effective_ground_state, fidelity, floquet_spectrum, variance_x, ModeState, WellBasis,
};
use crate::{Error, Result};

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn format_sig(x: f64) -> String {
    format!("{x:.16e}")
}

/// Initial beam profile for lattice propagation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitKind {
    /// exp(−(n−n₀)²/5), the Gaussian launch profile.
    Gaussian,
    /// A single-site excitation at the trap center.
    Site,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct WellFloquetParams {
    pub omega: f64,
    pub epsilon: f64,
    pub n_modes: usize,
    pub steps_per_period: usize,
    pub drive: QuadraticDriveForm,
    pub x_samples: usize,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct WellVarianceMapParams {
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_count: usize,
    pub epsilon_min: f64,
    pub epsilon_max: f64,
    pub epsilon_count: usize,
    pub n_modes: usize,
    pub steps_per_period: usize,
    pub drive: QuadraticDriveForm,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct WellEffectiveParams {
    /// Effective trap frequency Ω (εω/√2 when derived from a drive).
    pub omega_eff: f64,
    pub n_modes: usize,
    pub x_samples: usize,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct LatticePropagateParams {
    pub epsilon: f64,
    pub omega: f64,
    pub sites: usize,
    pub coupling: f64,
    pub onsite_g: f64,
    pub trap_center: i64,
    pub drive: QuadraticDriveForm,
    pub halved_breathing_rate: bool,
    pub init: InitKind,
    pub z_end: f64,
    pub snapshots: usize,
    pub steps_per_period: usize,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct LatticeFloquetParams {
    pub epsilon: f64,
    pub omega: f64,
    pub sites: usize,
    pub coupling: f64,
    pub onsite_g: f64,
    pub trap_center: i64,
    pub drive: QuadraticDriveForm,
    pub halved_breathing_rate: bool,
    pub n_states: usize,
    pub steps_per_period: usize,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct LatticeVarianceMapParams {
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_count: usize,
    pub epsilon_min: f64,
    pub epsilon_max: f64,
    pub epsilon_count: usize,
    pub sites: usize,
    pub coupling: f64,
    pub onsite_g: f64,
    pub trap_center: i64,
    pub drive: QuadraticDriveForm,
    pub halved_breathing_rate: bool,
    pub steps_per_period: usize,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct LatticeGaugeCheckParams {
    pub epsilon: f64,
    pub omega: f64,
    pub sites: usize,
    pub coupling: f64,
    pub onsite_g: f64,
    pub trap_center: i64,
    pub drive: QuadraticDriveForm,
    pub halved_breathing_rate: bool,
    pub onsite_energy: f64,
    pub init: InitKind,
    pub z_end: f64,
    pub steps_per_period: usize,
    pub out: PathBuf,
}

/// A fully resolved command, as recorded in the manifest sidecar.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum CommandParams {
    WellFloquet(WellFloquetParams),
    WellVarianceMap(WellVarianceMapParams),
    WellEffective(WellEffectiveParams),
    LatticePropagate(LatticePropagateParams),
    LatticeFloquet(LatticeFloquetParams),
    LatticeVarianceMap(LatticeVarianceMapParams),
    LatticeGaugeCheck(LatticeGaugeCheckParams),
}

impl CommandParams {
    pub fn out(&self) -> &Path {
        match self {
            CommandParams::WellFloquet(p) => &p.out,
            CommandParams::WellVarianceMap(p) => &p.out,
            CommandParams::WellEffective(p) => &p.out,
            CommandParams::LatticePropagate(p) => &p.out,
            CommandParams::LatticeFloquet(p) => &p.out,
            CommandParams::LatticeVarianceMap(p) => &p.out,
            CommandParams::LatticeGaugeCheck(p) => &p.out,
        }
    }

    fn set_out(&mut self, out: PathBuf) {
        match self {
            CommandParams::WellFloquet(p) => p.out = out,
            CommandParams::WellVarianceMap(p) => p.out = out,
            CommandParams::WellEffective(p) => p.out = out,
            CommandParams::LatticePropagate(p) => p.out = out,
            CommandParams::LatticeFloquet(p) => p.out = out,
            CommandParams::LatticeVarianceMap(p) => p.out = out,
            CommandParams::LatticeGaugeCheck(p) => p.out = out,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(flatten)]
    pub command: CommandParams,
    pub version: String,
    pub duration_seconds: f64,
}

/// One produced artifact: a file-name suffix appended to the output
/// prefix, plus its full content.
struct Artifact {
    suffix: &'static str,
    content: String,
}

/// Runs a command and writes its artifacts and manifest. Returns the
/// paths written. All content is computed before anything is written, so
/// failures leave no partial files behind.
pub fn execute(params: &CommandParams) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let artifacts = match params {
        CommandParams::WellFloquet(p) => run_well_floquet(p)?,
        CommandParams::WellVarianceMap(p) => run_well_variance_map(p)?,
        CommandParams::WellEffective(p) => run_well_effective(p)?,
        CommandParams::LatticePropagate(p) => run_lattice_propagate(p)?,
        CommandParams::LatticeFloquet(p) => run_lattice_floquet(p)?,
        CommandParams::LatticeVarianceMap(p) => run_lattice_variance_map(p)?,
        CommandParams::LatticeGaugeCheck(p) => run_lattice_gauge_check(p)?,
    };
    let manifest = Manifest {
        command: params.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        duration_seconds: started.elapsed().as_secs_f64(),
    };

    let base = params.out();
    if let Some(parent) = base.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut written = Vec::new();
    for artifact in &artifacts {
        let path = with_suffix(base, artifact.suffix);
        std::fs::write(&path, &artifact.content)?;
        written.push(path);
    }
    let manifest_path = with_suffix(base, ".manifest.json");
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)?)?;
    written.push(manifest_path);
    Ok(written)
}

/// Reads a manifest and re-runs its command, optionally redirecting the
/// output prefix. On the same build this reproduces every artifact
/// byte-for-byte.
pub fn replay(manifest_path: &Path, out_override: Option<PathBuf>) -> Result<Vec<PathBuf>> {
    let text = std::fs::read_to_string(manifest_path)?;
    let manifest: Manifest = serde_json::from_str(&text)?;
    let mut params = manifest.command;
    if let Some(out) = out_override {
        params.set_out(out);
    }
    execute(&params)
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut name = base.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    base.with_file_name(name)
}

fn linspace(a: f64, b: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidParameter(
            "grid needs at least one point".into(),
        ));
    }
    if count == 1 {
        return Ok(vec![a]);
    }
    let step = (b - a) / (count - 1) as f64;
    Ok((0..count).map(|i| a + i as f64 * step).collect())
}

fn density_profile(basis: &WellBasis, state: &ModeState, xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let amp: num_complex::Complex64 = state
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, a)| a * basis.eigenfunction(i + 1, x))
                .sum();
            amp.norm_sqr()
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn lattice_config(
    sites: usize,
    coupling: f64,
    onsite_g: f64,
    epsilon: f64,
    omega: f64,
    trap_center: i64,
    drive: QuadraticDriveForm,
    halved: bool,
) -> Result<LatticeConfig> {
    let schedule = BreathingSchedule::new(epsilon, omega)?;
    Ok(
        LatticeConfig::new(sites, coupling, onsite_g, schedule, trap_center)?
            .with_drive(drive)
            .with_halved_breathing_rate(halved),
    )
}

fn initial_state(kind: InitKind, sites: usize, trap_center: i64) -> Result<CVec> {
    match kind {
        InitKind::Gaussian => Ok(gaussian_profile(sites, trap_center)),
        InitKind::Site => single_site_input(sites, trap_center),
    }
}

#[derive(Serialize)]
struct WellFloquetSummary {
    fidelity: f64,
    variance_floquet: f64,
    variance_effective: f64,
    quasi_energy: f64,
    omega_eff: f64,
}

fn run_well_floquet(p: &WellFloquetParams) -> Result<Vec<Artifact>> {
    let basis = WellBasis::new(1.0, p.n_modes)?;
    let schedule = BreathingSchedule::new(p.epsilon, p.omega)?;
    let cfg = IntegratorConfig::new(p.steps_per_period)?;
    let states = floquet_spectrum(&basis, &schedule, p.drive, &cfg)?;
    let lowest = &states[0];

    let omega_eff = p.epsilon.abs() * p.omega / 2f64.sqrt();
    let (_, effective) = effective_ground_state(&basis, omega_eff)?;
    let summary = WellFloquetSummary {
        fidelity: fidelity(&lowest.state, &effective)?,
        variance_floquet: lowest.variance,
        variance_effective: variance_x(&basis, &effective)?,
        quasi_energy: lowest.quasi_energy,
        omega_eff,
    };

    let xs = linspace(-0.5, 0.5, p.x_samples)?;
    let floq = density_profile(&basis, &lowest.state, &xs);
    let eff = density_profile(&basis, &effective, &xs);
    let mut csv = String::from("x,floquet_density,effective_density\n");
    for ((x, f), e) in xs.iter().zip(floq.iter()).zip(eff.iter()) {
        csv.push_str(&format!(
            "{},{},{}\n",
            format_sig(*x),
            format_sig(*f),
            format_sig(*e)
        ));
    }

    Ok(vec![
        Artifact {
            suffix: ".csv",
            content: csv,
        },
        Artifact {
            suffix: ".summary.json",
            content: serde_json::to_string_pretty(&summary)?,
        },
    ])
}

fn matrix_csv(omegas: &[f64], epsilons: &[f64], map: &ndarray::Array2<f64>) -> String {
    let mut csv = String::from("omega");
    for e in epsilons {
        csv.push(',');
        csv.push_str(&format_sig(*e));
    }
    csv.push('\n');
    for (i, w) in omegas.iter().enumerate() {
        csv.push_str(&format_sig(*w));
        for j in 0..epsilons.len() {
            csv.push(',');
            csv.push_str(&format_sig(map[(i, j)]));
        }
        csv.push('\n');
    }
    csv
}

fn run_well_variance_map(p: &WellVarianceMapParams) -> Result<Vec<Artifact>> {
    let basis = WellBasis::new(1.0, p.n_modes)?;
    let cfg = IntegratorConfig::new(p.steps_per_period)?;
    let omegas = linspace(p.omega_min, p.omega_max, p.omega_count)?;
    let epsilons = linspace(p.epsilon_min, p.epsilon_max, p.epsilon_count)?;
    let map = crate::well::variance_map(&basis, &omegas, &epsilons, p.drive, &cfg)?;
    Ok(vec![Artifact {
        suffix: ".csv",
        content: matrix_csv(&omegas, &epsilons, &map),
    }])
}

#[derive(Serialize)]
struct WellEffectiveSummary {
    energy: f64,
    omega_eff: f64,
    variance: f64,
}

fn run_well_effective(p: &WellEffectiveParams) -> Result<Vec<Artifact>> {
    let basis = WellBasis::new(1.0, p.n_modes)?;
    let (energy, state) = effective_ground_state(&basis, p.omega_eff)?;
    let summary = WellEffectiveSummary {
        energy,
        omega_eff: p.omega_eff,
        variance: variance_x(&basis, &state)?,
    };
    let xs = linspace(-0.5, 0.5, p.x_samples)?;
    let dens = density_profile(&basis, &state, &xs);
    let mut csv = String::from("x,effective_density\n");
    for (x, d) in xs.iter().zip(dens.iter()) {
        csv.push_str(&format!("{},{}\n", format_sig(*x), format_sig(*d)));
    }
    Ok(vec![
        Artifact {
            suffix: ".csv",
            content: csv,
        },
        Artifact {
            suffix: ".summary.json",
            content: serde_json::to_string_pretty(&summary)?,
        },
    ])
}

#[derive(Serialize)]
struct PropagateSummary {
    sigma_initial: f64,
    sigma_max: f64,
    sigma_final: f64,
    norm_initial: f64,
    norm_final: f64,
}

fn run_lattice_propagate(p: &LatticePropagateParams) -> Result<Vec<Artifact>> {
    let cfg = lattice_config(
        p.sites,
        p.coupling,
        p.onsite_g,
        p.epsilon,
        p.omega,
        p.trap_center,
        p.drive,
        p.halved_breathing_rate,
    )?;
    let icfg = IntegratorConfig::new(p.steps_per_period)?;
    let c0 = initial_state(p.init, p.sites, p.trap_center)?;
    let total_steps = icfg.steps_for(cfg.schedule.period(), p.z_end);
    let stride = (total_steps / p.snapshots.max(1)).max(1);
    let res = propagate(&cfg, &c0, p.z_end, stride, &icfg)?;

    let half = (p.sites as i64 - 1) / 2;
    let mut snapshots_csv = String::from("z");
    for n in -half..=half {
        snapshots_csv.push_str(&format!(",n={n}"));
    }
    snapshots_csv.push('\n');
    for (z, snap) in res.z_samples.iter().zip(res.snapshots.iter()) {
        snapshots_csv.push_str(&format_sig(*z));
        for v in snap {
            snapshots_csv.push(',');
            snapshots_csv.push_str(&format_sig(*v));
        }
        snapshots_csv.push('\n');
    }

    let mut series_csv = String::from("z,sigma_sq,norm\n");
    for ((z, v), n) in res
        .z_samples
        .iter()
        .zip(res.variance_series.iter())
        .zip(res.norm_series.iter())
    {
        series_csv.push_str(&format!(
            "{},{},{}\n",
            format_sig(*z),
            format_sig(*v),
            format_sig(*n)
        ));
    }

    let sigmas: Vec<f64> = res.variance_series.iter().map(|v| v.sqrt()).collect();
    let summary = PropagateSummary {
        sigma_initial: sigmas[0],
        sigma_max: sigmas.iter().copied().fold(0.0, f64::max),
        sigma_final: *sigmas.last().unwrap(),
        norm_initial: res.norm_series[0],
        norm_final: *res.norm_series.last().unwrap(),
    };

    Ok(vec![
        Artifact {
            suffix: ".snapshots.csv",
            content: snapshots_csv,
        },
        Artifact {
            suffix: ".series.csv",
            content: series_csv,
        },
        Artifact {
            suffix: ".summary.json",
            content: serde_json::to_string_pretty(&summary)?,
        },
    ])
}

#[derive(Serialize)]
struct LatticeFloquetStateSummary {
    quasi_energy: f64,
    variance: f64,
    gaussian_fidelity: f64,
}

#[derive(Serialize)]
struct LatticeFloquetSummary {
    states: Vec<LatticeFloquetStateSummary>,
    top_gaussian_fidelity: f64,
}

fn run_lattice_floquet(p: &LatticeFloquetParams) -> Result<Vec<Artifact>> {
    if p.n_states == 0 {
        return Err(Error::InvalidParameter("need at least one state".into()));
    }
    let cfg = lattice_config(
        p.sites,
        p.coupling,
        p.onsite_g,
        p.epsilon,
        p.omega,
        p.trap_center,
        p.drive,
        p.halved_breathing_rate,
    )?;
    let icfg = IntegratorConfig::new(p.steps_per_period)?;
    let states = lattice_floquet(&cfg, &icfg)?;
    let keep = p.n_states.min(states.len());

    // amplitude overlap with the normalized Gaussian launch profile
    let gauss = gaussian_profile(p.sites, p.trap_center);
    let gauss_norm = gauss.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let gaussian_fidelity = |c: &CVec| -> f64 {
        let overlap: num_complex::Complex64 = c
            .iter()
            .zip(gauss.iter())
            .map(|(a, g)| a.conj() * g / gauss_norm)
            .sum();
        overlap.norm_sqr()
    };

    let mut summary = LatticeFloquetSummary {
        states: Vec::new(),
        top_gaussian_fidelity: 0.0,
    };
    for st in states.iter().take(keep) {
        let fid = gaussian_fidelity(&st.amplitudes);
        summary.top_gaussian_fidelity = summary.top_gaussian_fidelity.max(fid);
        summary.states.push(LatticeFloquetStateSummary {
            quasi_energy: st.quasi_energy,
            variance: st.variance,
            gaussian_fidelity: fid,
        });
    }

    let mut csv = String::from("site");
    for k in 1..=keep {
        csv.push_str(&format!(",intensity_{k},re_{k},im_{k}"));
    }
    csv.push('\n');
    let half = (p.sites as i64 - 1) / 2;
    for i in 0..p.sites {
        csv.push_str(&format!("{}", i as i64 - half));
        for st in states.iter().take(keep) {
            let a = st.amplitudes[i];
            csv.push_str(&format!(
                ",{},{},{}",
                format_sig(a.norm_sqr()),
                format_sig(a.re),
                format_sig(a.im)
            ));
        }
        csv.push('\n');
    }

    Ok(vec![
        Artifact {
            suffix: ".csv",
            content: csv,
        },
        Artifact {
            suffix: ".summary.json",
            content: serde_json::to_string_pretty(&summary)?,
        },
    ])
}

fn run_lattice_variance_map(p: &LatticeVarianceMapParams) -> Result<Vec<Artifact>> {
    let template = lattice_config(
        p.sites,
        p.coupling,
        p.onsite_g,
        0.0,
        1.0,
        p.trap_center,
        p.drive,
        p.halved_breathing_rate,
    )?;
    let icfg = IntegratorConfig::new(p.steps_per_period)?;
    let omegas = linspace(p.omega_min, p.omega_max, p.omega_count)?;
    let epsilons = linspace(p.epsilon_min, p.epsilon_max, p.epsilon_count)?;
    let map = lattice_variance_map(&template, &omegas, &epsilons, &icfg)?;
    Ok(vec![Artifact {
        suffix: ".csv",
        content: matrix_csv(&omegas, &epsilons, &map),
    }])
}

#[derive(Serialize)]
struct GaugeCheckSummary {
    onsite_energy: f64,
    max_intensity_deviation: f64,
}

fn run_lattice_gauge_check(p: &LatticeGaugeCheckParams) -> Result<Vec<Artifact>> {
    let cfg = lattice_config(
        p.sites,
        p.coupling,
        p.onsite_g,
        p.epsilon,
        p.omega,
        p.trap_center,
        p.drive,
        p.halved_breathing_rate,
    )?;
    let icfg = IntegratorConfig::new(p.steps_per_period)?;
    let c0 = initial_state(p.init, p.sites, p.trap_center)?;
    let deviation = gauge_check(&cfg, p.onsite_energy, &c0, p.z_end, &icfg)?;
    let summary = GaugeCheckSummary {
        onsite_energy: p.onsite_energy,
        max_intensity_deviation: deviation,
    };
    Ok(vec![Artifact {
        suffix: ".summary.json",
        content: serde_json::to_string_pretty(&summary)?,
    }])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_sig_round_trips() {
        for x in [
            0.1,
            1.0 / 3.0,
            2.5e-17,
            -1.0 / 12.0 + 1.0 / (2.0 * std::f64::consts::PI),
        ] {
            let s = format_sig(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn suffix_is_appended_to_file_name() {
        let p = with_suffix(Path::new("results/run1"), ".summary.json");
        assert_eq!(p, Path::new("results/run1.summary.json"));
    }

    #[test]
    fn linspace_endpoints_are_exact() {
        let g = linspace(-1.0, 2.0, 7).unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], -1.0);
        assert!((g[6] - 2.0).abs() < 1e-15);
        assert!(linspace(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn manifest_round_trips_through_json() {
        let params = CommandParams::WellFloquet(WellFloquetParams {
            omega: 246.74,
            epsilon: 0.05,
            n_modes: 30,
            steps_per_period: 4096,
            drive: QuadraticDriveForm::Dilation,
            x_samples: 201,
            out: PathBuf::from("/tmp/x"),
        });
        let manifest = Manifest {
            command: params,
            version: "0.1.0".into(),
            duration_seconds: 1.5,
        };
        let text = serde_json::to_string_pretty(&manifest).unwrap();
        assert!(text.contains("\"command\": \"well-floquet\""));
        let back: Manifest = serde_json::from_str(&text).unwrap();
        match back.command {
            CommandParams::WellFloquet(p) => assert_eq!(p.omega, 246.74),
            _ => panic!("wrong command"),
        }
    }
}
