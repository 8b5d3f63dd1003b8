//! Breathing nearest-neighbor waveguide lattice: beam propagation,
//! discrete Floquet states, variance maps, and the gauge-equivalence
//! check for a uniform on-site energy.
//!
//! The coupled-mode equation is
//!
//! ```text
//! i ċ_n = -(k/α)(c_{n+1} + c_{n-1}) + i (α̇/α) c_n − q(t)·(g/k)·(n−n₀)² c_n ,
//! ```
//!
//! with the quadratic drive coefficient q(t) selected by a
//! [`QuadraticDriveForm`] (dilation form by default, the f = ½αα̈ + α̇²
//! combination available for sensitivity studies), dimensionless on-site
//! strength `g`, open (hard-edge) boundaries, and the propagation distance
//! measured in units of 1/k. The `i α̇/α` term makes the generator
//! non-Hermitian and forces the exact norm law
//! ‖c(z)‖ = (α(z)/α(0)) ‖c(0)‖; over whole periods the propagator is
//! therefore norm-preserving and its eigenvalues lie on the unit circle.
//! A halved breathing-rate variant `i α̇/(2α)` can be enabled to probe the
//! factor-of-two sensitivity of that term.
//!
//! As in the well solver, the one-period propagator is integrated in the
//! interaction picture of the diagonal part (on-site phases and the α̇/α
//! scaling absorb exactly), which keeps all monodromy eigenvalues on the
//! unit circle to ~1e-12 even though the quadratic on-site profile grows
//! like n² toward the lattice edges.

use ndarray::{ArrayView1, ArrayView2, ArrayViewMut1, ArrayViewMut2};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::breathing::{BreathingSchedule, QuadraticDriveForm};
use crate::numerics::{
    eig_normal, integrate_observed, monodromy, principal_phase, CMat, CVec, IntegratorConfig,
    LinearRhs,
};
use crate::{Error, Result};

/// Parameters of the breathing waveguide array.
#[derive(Debug, Clone, Copy)]
pub struct LatticeConfig {
    /// Number of waveguides; odd, so sites run −(n_sites−1)/2 ..= +(n_sites−1)/2.
    pub n_sites: usize,
    /// Coupling constant k between adjacent waveguides (sets the length unit).
    pub coupling: f64,
    /// Dimensionless on-site strength g = n_s a² k / ƛ.
    pub onsite_g: f64,
    pub schedule: BreathingSchedule,
    /// Trapping site n₀: the quadratic on-site profile is (n − n₀)².
    pub trap_center: i64,
    /// Quadratic drive coefficient form.
    pub drive: QuadraticDriveForm,
    /// Use i α̇/(2α) instead of i α̇/α (sensitivity study; changes the norm
    /// law exponent accordingly).
    pub halved_breathing_rate: bool,
}

impl LatticeConfig {
    pub fn new(
        n_sites: usize,
        coupling: f64,
        onsite_g: f64,
        schedule: BreathingSchedule,
        trap_center: i64,
    ) -> Result<Self> {
        if n_sites < 3 || n_sites % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "lattice needs an odd site count of at least 3, got {n_sites}"
            )));
        }
        if !(coupling > 0.0) || !coupling.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coupling constant must be positive, got {coupling}"
            )));
        }
        if !(onsite_g > 0.0) || !onsite_g.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "on-site strength must be positive, got {onsite_g}"
            )));
        }
        let half = (n_sites as i64 - 1) / 2;
        if trap_center.abs() >= half {
            return Err(Error::InvalidParameter(format!(
                "trap center {trap_center} must satisfy |n₀| < {half}"
            )));
        }
        Ok(Self {
            n_sites,
            coupling,
            onsite_g,
            schedule,
            trap_center,
            drive: QuadraticDriveForm::default(),
            halved_breathing_rate: false,
        })
    }

    pub fn with_drive(mut self, drive: QuadraticDriveForm) -> Self {
        self.drive = drive;
        self
    }

    pub fn with_halved_breathing_rate(mut self, halved: bool) -> Self {
        self.halved_breathing_rate = halved;
        self
    }

    fn breathing_rate_factor(&self) -> f64 {
        if self.halved_breathing_rate {
            0.5
        } else {
            1.0
        }
    }

    pub fn half_width(&self) -> i64 {
        (self.n_sites as i64 - 1) / 2
    }

    /// Site index of vector slot `i`.
    pub fn site(&self, i: usize) -> i64 {
        i as i64 - self.half_width()
    }

    /// Vector slot of site `n`, if it is on the lattice.
    pub fn slot(&self, n: i64) -> Option<usize> {
        let i = n + self.half_width();
        (0..self.n_sites as i64).contains(&i).then_some(i as usize)
    }
}

/// Sampled propagation record: intensities, site variance and total norm
/// along z.
#[derive(Debug, Clone)]
pub struct PropagationResult {
    pub z_samples: Vec<f64>,
    /// Intensities |c_n(z)|² per sample, one vector per z.
    pub snapshots: Vec<Vec<f64>>,
    pub variance_series: Vec<f64>,
    pub norm_series: Vec<f64>,
}

/// A discrete Floquet eigenstate, normalized at z = 0.
#[derive(Debug, Clone)]
pub struct LatticeFloquetState {
    pub amplitudes: CVec,
    pub quasi_energy: f64,
    pub variance: f64,
}

/// Direct action of the coupled-mode generator, optionally including a
/// uniform on-site energy term +(e/α) c_n (the Appendix form the canonical
/// transformation removes).
pub struct LatticeRhs<'a> {
    cfg: &'a LatticeConfig,
    onsite_energy: f64,
}

impl<'a> LatticeRhs<'a> {
    pub fn new(cfg: &'a LatticeConfig) -> Self {
        Self {
            cfg,
            onsite_energy: 0.0,
        }
    }

    pub fn with_onsite_energy(cfg: &'a LatticeConfig, onsite_energy: f64) -> Self {
        Self { cfg, onsite_energy }
    }
}

impl LinearRhs for LatticeRhs<'_> {
    fn dim(&self) -> usize {
        self.cfg.n_sites
    }

    fn apply(&self, t: f64, y: ArrayView1<C64>, mut out: ArrayViewMut1<C64>) {
        let cfg = self.cfg;
        let s = cfg.schedule.eval(t);
        let drive_q = cfg.drive.coefficient(&s);
        let coupling = -cfg.coupling / s.alpha;
        let g_over_k = cfg.onsite_g / cfg.coupling;
        let breathing_rate = cfg.breathing_rate_factor() * s.alpha_dot / s.alpha;
        let uniform = self.onsite_energy / s.alpha;
        let n = cfg.n_sites;
        for i in 0..n {
            let q = (cfg.site(i) - cfg.trap_center) as f64;
            let diag = C64::new(uniform - drive_q * g_over_k * q * q, breathing_rate);
            let mut acc = diag * y[i];
            if i + 1 < n {
                acc += coupling * y[i + 1];
            }
            if i > 0 {
                acc += coupling * y[i - 1];
            }
            out[i] = acc;
        }
    }
}

/// Materializes the coupled-mode generator A(t) with i ċ = A(t) c:
/// tridiagonal coupling −k/α plus the complex diagonal.
pub fn lattice_generator(cfg: &LatticeConfig, t: f64) -> CMat {
    LatticeRhs::new(cfg).matrix(t)
}

/// Interaction picture of the lattice: on-site phases
/// θ_n(z) = −(g/k)(n−n₀)² ∫₀ᶻ q and the exact amplitude factor α(z)/α(0)
/// are split off, leaving a Hermitian tridiagonal coupling with
/// oscillating phases.
pub struct LatticeInteractionRhs<'a> {
    cfg: &'a LatticeConfig,
}

impl<'a> LatticeInteractionRhs<'a> {
    pub fn new(cfg: &'a LatticeConfig) -> Self {
        Self { cfg }
    }

    fn phases(&self, t: f64) -> Vec<f64> {
        let cfg = self.cfg;
        let q_int = cfg.drive.integral(&cfg.schedule, t);
        let g_over_k = cfg.onsite_g / cfg.coupling;
        (0..cfg.n_sites)
            .map(|i| {
                let q = (cfg.site(i) - cfg.trap_center) as f64;
                -g_over_k * q * q * q_int
            })
            .collect()
    }
}

impl LinearRhs for LatticeInteractionRhs<'_> {
    fn dim(&self) -> usize {
        self.cfg.n_sites
    }

    fn apply(&self, t: f64, y: ArrayView1<C64>, out: ArrayViewMut1<C64>) {
        let col = y.into_shape_with_order((y.len(), 1)).expect("column view");
        let mut o = out;
        let out2 = o
            .view_mut()
            .into_shape_with_order((col.nrows(), 1))
            .expect("column view");
        self.apply_columns(t, col, out2);
    }

    fn apply_columns(&self, t: f64, y: ArrayView2<C64>, mut out: ArrayViewMut2<C64>) {
        let cfg = self.cfg;
        let s = cfg.schedule.eval(t);
        let coupling = -cfg.coupling / s.alpha;
        let phases = self.phases(t);
        let n = cfg.n_sites;
        // up[i] = e^{i(θ_i − θ_{i+1})}; the down factor is its conjugate
        let up: Vec<C64> = (0..n - 1)
            .map(|i| C64::from_polar(1.0, phases[i] - phases[i + 1]))
            .collect();
        for (yc, mut oc) in y.columns().into_iter().zip(out.columns_mut().into_iter()) {
            for i in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                if i + 1 < n {
                    acc += up[i] * yc[i + 1];
                }
                if i > 0 {
                    acc += up[i - 1].conj() * yc[i - 1];
                }
                oc[i] = coupling * acc;
            }
        }
    }
}

/// One-period propagator of the breathing lattice at drive phase z = 0.
pub fn floquet_monodromy(cfg: &LatticeConfig, icfg: &IntegratorConfig) -> Result<CMat> {
    let rhs = LatticeInteractionRhs::new(cfg);
    let period = cfg.schedule.period();
    let mut m = monodromy(&rhs, period, icfg)?;
    let phases = rhs.phases(period);
    // α is T-periodic, so the amplitude factor α(T)/α(0) is exactly one
    for (i, p) in phases.iter().enumerate() {
        let factor = C64::from_polar(1.0, -p);
        for j in 0..cfg.n_sites {
            m[(i, j)] *= factor;
        }
    }
    Ok(m)
}

/// Discrete Floquet eigenstates sorted by ascending site variance
/// (ties by ascending quasi-energy).
pub fn lattice_floquet(
    cfg: &LatticeConfig,
    icfg: &IntegratorConfig,
) -> Result<Vec<LatticeFloquetState>> {
    let period = cfg.schedule.period();
    let m = floquet_monodromy(cfg, icfg)?;
    let pairs = eig_normal(&m)?;
    let mut states = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let variance = variance_n(&pair.vector, cfg.trap_center)?;
        states.push(LatticeFloquetState {
            amplitudes: pair.vector,
            quasi_energy: principal_phase(pair.value) / period,
            variance,
        });
    }
    states.sort_by(|a, b| {
        a.variance
            .total_cmp(&b.variance)
            .then(a.quasi_energy.total_cmp(&b.quasi_energy))
    });
    Ok(states)
}

/// Site variance σ_n² = Σ (n−n₀)² |c_n|² / Σ |c_n|², invariant under global
/// phase and scaling.
pub fn variance_n(amplitudes: &CVec, center: i64) -> Result<f64> {
    let len = amplitudes.len();
    if len == 0 || len % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "site amplitudes must have odd length, got {len}"
        )));
    }
    let half = (len as i64 - 1) / 2;
    let mut total = 0.0;
    let mut weighted = 0.0;
    for (i, c) in amplitudes.iter().enumerate() {
        let w = c.norm_sqr();
        let d = (i as i64 - half - center) as f64;
        total += w;
        weighted += d * d * w;
    }
    if total <= 0.0 || !total.is_finite() {
        return Err(Error::ZeroState);
    }
    Ok(weighted / total)
}

/// Integrates the coupled-mode equation from z = 0 to `z_end`, recording
/// intensities, site variance and norm every `sample_every` steps (the
/// initial state and the final step are always included).
pub fn propagate(
    cfg: &LatticeConfig,
    c0: &CVec,
    z_end: f64,
    sample_every: usize,
    icfg: &IntegratorConfig,
) -> Result<PropagationResult> {
    if c0.len() != cfg.n_sites {
        return Err(Error::DimensionMismatch(format!(
            "initial state has {} sites, lattice has {}",
            c0.len(),
            cfg.n_sites
        )));
    }
    if !(z_end > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "propagation distance must be positive, got {z_end}"
        )));
    }
    let stride = sample_every.max(1);
    let period = cfg.schedule.period();
    let n_steps = icfg.steps_for(period, z_end);

    let rhs = LatticeRhs::new(cfg);
    let y0 = c0
        .view()
        .into_shape_with_order((cfg.n_sites, 1))
        .expect("column")
        .to_owned();

    let mut z_samples = Vec::new();
    let mut snapshots = Vec::new();
    let mut variance_series = Vec::new();
    let mut norm_series = Vec::new();
    let mut observe_err = None;
    integrate_observed(&rhs, &y0, 0.0, z_end, period, icfg, |step, z, y| {
        if step % stride == 0 || step == n_steps {
            let c = y.column(0);
            let intensities: Vec<f64> = c.iter().map(|v| v.norm_sqr()).collect();
            let norm = intensities.iter().sum::<f64>().sqrt();
            match variance_n(&c.to_owned(), cfg.trap_center) {
                Ok(var) => {
                    z_samples.push(z);
                    snapshots.push(intensities);
                    variance_series.push(var);
                    norm_series.push(norm);
                }
                Err(e) => observe_err = Some(e),
            }
        }
    })?;
    if let Some(e) = observe_err {
        return Err(e);
    }
    Ok(PropagationResult {
        z_samples,
        snapshots,
        variance_series,
        norm_series,
    })
}

/// Minimum Floquet variance over an (ω, ε) grid for the lattice described
/// by `template` (its schedule is replaced point by point). Entry (i, j)
/// belongs to (omegas[i], epsilons[j]).
pub fn lattice_variance_map(
    template: &LatticeConfig,
    omegas: &[f64],
    epsilons: &[f64],
    icfg: &IntegratorConfig,
) -> Result<ndarray::Array2<f64>> {
    if omegas.is_empty() || epsilons.is_empty() {
        return Err(Error::InvalidParameter(
            "variance map needs nonempty grids".into(),
        ));
    }
    let n_eps = epsilons.len();
    let entries: Result<Vec<f64>> = (0..omegas.len() * n_eps)
        .into_par_iter()
        .map(|idx| {
            let schedule = BreathingSchedule::new(epsilons[idx % n_eps], omegas[idx / n_eps])?;
            let cfg = LatticeConfig {
                schedule,
                ..*template
            };
            let states = lattice_floquet(&cfg, icfg)?;
            Ok(states[0].variance)
        })
        .collect();
    Ok(ndarray::Array2::from_shape_vec((omegas.len(), n_eps), entries?).expect("grid shape"))
}

/// Evolves the coupled-mode equation including a uniform on-site term
/// +(e/α) c_n alongside the plain equation and returns the maximum
/// absolute intensity deviation over all sites and recorded steps. The
/// canonical transformation c'_n = c_n exp(+ie ∫₀ᶻ dz'/α) maps solutions
/// of the former onto solutions of the latter; being a global phase it
/// cancels in the intensities, so gauge equivalence means the returned
/// deviation is at integrator-noise level.
pub fn gauge_check(
    cfg: &LatticeConfig,
    onsite_energy: f64,
    c0: &CVec,
    z_end: f64,
    icfg: &IntegratorConfig,
) -> Result<f64> {
    if c0.len() != cfg.n_sites {
        return Err(Error::DimensionMismatch(format!(
            "initial state has {} sites, lattice has {}",
            c0.len(),
            cfg.n_sites
        )));
    }
    if !(z_end > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "propagation distance must be positive, got {z_end}"
        )));
    }
    let period = cfg.schedule.period();
    let y0 = c0
        .view()
        .into_shape_with_order((cfg.n_sites, 1))
        .expect("column")
        .to_owned();

    let plain = LatticeRhs::new(cfg);
    let mut reference: Vec<Vec<f64>> = Vec::new();
    integrate_observed(&plain, &y0, 0.0, z_end, period, icfg, |_, _, y| {
        reference.push(y.column(0).iter().map(|v| v.norm_sqr()).collect());
    })?;

    let shifted = LatticeRhs::with_onsite_energy(cfg, onsite_energy);
    let mut max_dev: f64 = 0.0;
    let mut idx = 0usize;
    integrate_observed(&shifted, &y0, 0.0, z_end, period, icfg, |_, _, y| {
        for (c, r) in y.column(0).iter().zip(reference[idx].iter()) {
            max_dev = max_dev.max((c.norm_sqr() - r).abs());
        }
        idx += 1;
    })?;
    Ok(max_dev)
}

/// The Gaussian launch profile exp(−(n−center)²/5) used for beam
/// propagation (unnormalized, matching the launch condition itself).
pub fn gaussian_profile(n_sites: usize, center: i64) -> CVec {
    let half = (n_sites as i64 - 1) / 2;
    (0..n_sites)
        .map(|i| {
            let d = (i as i64 - half - center) as f64;
            C64::new((-d * d / 5.0).exp(), 0.0)
        })
        .collect()
}

/// A single-site excitation at `site`.
pub fn single_site_input(n_sites: usize, site: i64) -> Result<CVec> {
    let half = (n_sites as i64 - 1) / 2;
    let idx = site + half;
    if !(0..n_sites as i64).contains(&idx) {
        return Err(Error::InvalidParameter(format!(
            "site {site} outside the lattice of half-width {half}"
        )));
    }
    let mut c = CVec::zeros(n_sites);
    c[idx as usize] = C64::new(1.0, 0.0);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn schedule(eps: f64, omega: f64) -> BreathingSchedule {
        BreathingSchedule::new(eps, omega).unwrap()
    }

    fn config(n_sites: usize, eps: f64, omega: f64) -> LatticeConfig {
        LatticeConfig::new(n_sites, 1.0, 1.0, schedule(eps, omega), 0).unwrap()
    }

    #[test]
    fn config_validation() {
        let s = schedule(0.1, 1.0);
        assert!(LatticeConfig::new(4, 1.0, 1.0, s, 0).is_err()); // even
        assert!(LatticeConfig::new(1, 1.0, 1.0, s, 0).is_err()); // too small
        assert!(LatticeConfig::new(9, 0.0, 1.0, s, 0).is_err()); // k = 0
        assert!(LatticeConfig::new(9, 1.0, -1.0, s, 0).is_err()); // g < 0
        assert!(LatticeConfig::new(9, 1.0, 1.0, s, 4).is_err()); // n0 at edge
        assert!(LatticeConfig::new(9, 1.0, 1.0, s, 3).is_ok());
    }

    #[test]
    fn static_generator_is_bare_tight_binding() {
        let cfg = config(7, 0.0, 1.0);
        let a = lattice_generator(&cfg, 0.4);
        for i in 0..7usize {
            for j in 0..7usize {
                let expected = if i.abs_diff(j) == 1 {
                    C64::new(-1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                assert!((a[(i, j)] - expected).norm() < 1e-15, "entry ({i},{j})");
            }
        }
        // end-site rows have exactly one coupling entry
        let nonzero_first = (0..7).filter(|&j| a[(0, j)].norm() > 0.0).count();
        assert_eq!(nonzero_first, 1);
    }

    #[test]
    fn generator_diagonal_at_quarter_period() {
        // at ωt = π/2: α = 1, α̇ = -εω, and with the f-form drive the
        // diagonal picks up both i(α̇/α) and the real ε²ω²(g/k)(n-n₀)² part
        let cfg = config(5, 0.1, 2.0).with_drive(QuadraticDriveForm::DriveF);
        let t = PI / 4.0; // ωt = π/2 at ω = 2
        let a = lattice_generator(&cfg, t);
        let eps_om_sq = (0.1f64 * 2.0).powi(2);
        for i in 0..5 {
            let n = i as f64 - 2.0;
            let expected = C64::new(-eps_om_sq * n * n, -0.1 * 2.0);
            assert!(
                (a[(i, i)] - expected).norm() < 1e-12,
                "site {n}: {} vs {expected}",
                a[(i, i)]
            );
        }
        // dilation drive has no real on-site part at this phase (α̈ = 0)
        let cfg_d = config(5, 0.1, 2.0);
        let ad = lattice_generator(&cfg_d, t);
        assert!(ad[(0, 0)].re.abs() < 1e-12);
        assert!((ad[(0, 0)].im + 0.2).abs() < 1e-12);
    }

    #[test]
    fn variance_of_point_and_pair_states() {
        let mut c = CVec::zeros(5);
        c[2] = C64::new(1.0, 0.0);
        assert_eq!(variance_n(&c, 0).unwrap(), 0.0);

        let mut pair = CVec::zeros(5);
        pair[1] = C64::new(0.5, 0.0);
        pair[3] = C64::new(0.0, -0.5);
        assert!((variance_n(&pair, 0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn variance_of_gaussian_matches_direct_summation() {
        let c = gaussian_profile(161, 0);
        let v = variance_n(&c, 0).unwrap();
        let mut num = 0.0;
        let mut den = 0.0;
        for n in -80i64..=80 {
            let w = (-2.0 * (n * n) as f64 / 5.0).exp();
            num += (n * n) as f64 * w;
            den += w;
        }
        assert!((v - num / den).abs() < 1e-14);
        assert!((v - 1.25).abs() < 0.01, "σ² = {v}");
    }

    #[test]
    fn symmetric_state_has_zero_first_moment() {
        let c = gaussian_profile(41, 0);
        let half = 20i64;
        let first: f64 = c
            .iter()
            .enumerate()
            .map(|(i, v)| (i as i64 - half) as f64 * v.norm_sqr())
            .sum();
        assert!(first.abs() < 1e-15);
    }

    #[test]
    fn variance_is_invariant_under_phase_and_scale() {
        let c = gaussian_profile(41, 3);
        let v = variance_n(&c, 3).unwrap();
        let scaled: CVec = c.mapv(|z| z * C64::from_polar(2.7, 1.1));
        assert!((variance_n(&scaled, 3).unwrap() - v).abs() < 1e-13);
        let zero = CVec::zeros(41);
        assert!(matches!(variance_n(&zero, 0), Err(Error::ZeroState)));
    }

    #[test]
    fn norm_law_follows_alpha() {
        let cfg = config(41, 0.1, 1.0);
        let c0 = gaussian_profile(41, 0);
        let res = propagate(
            &cfg,
            &c0,
            2.0 * cfg.schedule.period(),
            128,
            &IntegratorConfig::default(),
        )
        .unwrap();
        let n0 = res.norm_series[0];
        let alpha0 = cfg.schedule.eval(0.0).alpha;
        for (&z, &n) in res.z_samples.iter().zip(res.norm_series.iter()) {
            let expected = cfg.schedule.eval(z).alpha / alpha0 * n0;
            assert!(
                ((n - expected) / expected).abs() < 1e-8,
                "z = {z}: norm {n} vs law {expected}"
            );
        }
        // α is T-periodic, so ‖c(T)‖ = ‖c(0)‖
        let at_period = res
            .z_samples
            .iter()
            .position(|&z| (z - cfg.schedule.period()).abs() < 1e-9)
            .expect("period sample");
        assert!((res.norm_series[at_period] - n0).abs() < 1e-8 * n0);
    }

    #[test]
    fn interaction_picture_matches_direct_integration() {
        let cfg = config(21, 0.1, 1.0);
        let icfg = IntegratorConfig::default();
        let m_ip = floquet_monodromy(&cfg, &icfg).unwrap();
        let direct = LatticeRhs::new(&cfg);
        let m_direct = monodromy(&direct, cfg.schedule.period(), &icfg).unwrap();
        let max_dev = m_ip
            .iter()
            .zip(m_direct.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(max_dev < 1e-6, "IP vs direct deviation {max_dev:.3e}");
    }

    #[test]
    fn monodromy_eigenvalues_lie_on_unit_circle() {
        let cfg = config(41, 0.1, 2.0 * PI);
        let m = floquet_monodromy(&cfg, &IntegratorConfig::default()).unwrap();
        let pairs = eig_normal(&m).unwrap();
        let max_dev = pairs
            .iter()
            .map(|p| (p.value.norm() - 1.0).abs())
            .fold(0.0f64, f64::max);
        assert!(max_dev < 1e-6, "unit-circle deviation {max_dev:.3e}");
    }

    #[test]
    fn static_floquet_states_match_open_chain_diagonalization() {
        let n = 15usize;
        let cfg = config(n, 0.0, 3.0);
        let states = lattice_floquet(&cfg, &IntegratorConfig::default()).unwrap();
        let period = cfg.schedule.period();
        let fold = |e: f64| -> f64 {
            let mut ph = (e * period).rem_euclid(std::f64::consts::TAU);
            if ph > PI {
                ph -= std::f64::consts::TAU;
            }
            ph / period
        };
        // analytic open-chain eigenpairs: E_q = -2k cos(qπ/(n+1)),
        // v_q(i) ∝ sin(qπ(i+1)/(n+1))
        for q in 1..=n {
            let e_q = -2.0 * (q as f64 * PI / (n + 1) as f64).cos();
            let mu_q = fold(e_q);
            let matched = states
                .iter()
                .min_by(|a, b| {
                    (a.quasi_energy - mu_q)
                        .abs()
                        .total_cmp(&(b.quasi_energy - mu_q).abs())
                })
                .unwrap();
            assert!(
                (matched.quasi_energy - mu_q).abs() < 1e-7,
                "q = {q}: μ {} vs folded E {}",
                matched.quasi_energy,
                mu_q
            );
            let overlap: C64 = (0..n)
                .map(|i| {
                    let v = (q as f64 * PI * (i + 1) as f64 / (n + 1) as f64).sin();
                    matched.amplitudes[i].conj() * v
                })
                .sum();
            let norm_sq: f64 = (0..n)
                .map(|i| {
                    (q as f64 * PI * (i + 1) as f64 / (n + 1) as f64)
                        .sin()
                        .powi(2)
                })
                .sum();
            assert!(
                overlap.norm_sqr() / norm_sq > 1.0 - 1e-8,
                "q = {q}: eigenvector mismatch"
            );
        }
    }

    #[test]
    fn two_most_localized_states_are_orthogonal() {
        let cfg = config(41, 0.1, 2.0 * PI);
        let states = lattice_floquet(&cfg, &IntegratorConfig::default()).unwrap();
        let overlap: C64 = states[0]
            .amplitudes
            .iter()
            .zip(states[1].amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!(overlap.norm() < 1e-6);
    }

    #[test]
    fn gauge_equivalence_of_uniform_onsite_energy() {
        let cfg = config(41, 0.1, 1.0);
        let c0 = gaussian_profile(41, 0);
        let icfg = IntegratorConfig::default();
        let period = cfg.schedule.period();

        let zero = gauge_check(&cfg, 0.0, &c0, period, &icfg).unwrap();
        assert_eq!(zero, 0.0);

        let dev = gauge_check(&cfg, 0.7, &c0, period, &icfg).unwrap();
        assert!(dev < 1e-10, "gauge deviation {dev:.3e}");

        // ε = 0 with e = 1: the phase is exactly e^{-iez}; intensities identical
        let static_cfg = config(41, 0.0, 1.0);
        let dev0 = gauge_check(&static_cfg, 1.0, &c0, 3.0, &icfg).unwrap();
        assert!(dev0 < 1e-12, "static gauge deviation {dev0:.3e}");
    }

    #[test]
    fn canonical_phase_restores_amplitudes() {
        // evolve with and without the uniform on-site term and undo the
        // phase exp(-ie∫dz/α) explicitly at the final plane
        let cfg = config(21, 0.1, 1.0);
        let c0 = gaussian_profile(21, 0);
        let icfg = IntegratorConfig::default();
        let z_end = 1.3 * cfg.schedule.period();
        let y0 = c0.view().into_shape_with_order((21, 1)).unwrap().to_owned();
        let plain = crate::numerics::integrate_matrix(
            &LatticeRhs::new(&cfg),
            &y0,
            0.0,
            z_end,
            cfg.schedule.period(),
            &icfg,
        )
        .unwrap();
        let shifted = crate::numerics::integrate_matrix(
            &LatticeRhs::with_onsite_energy(&cfg, 0.7),
            &y0,
            0.0,
            z_end,
            cfg.schedule.period(),
            &icfg,
        )
        .unwrap();
        let phase = C64::from_polar(1.0, 0.7 * cfg.schedule.inv_alpha_integral(z_end));
        let max_dev = shifted
            .iter()
            .zip(plain.iter())
            .map(|(s, p)| (s * phase - p).norm())
            .fold(0.0f64, f64::max);
        assert!(max_dev < 1e-8, "amplitude gauge deviation {max_dev:.3e}");
    }

    #[test]
    fn trap_center_shift_covariance() {
        let shift = 4i64;
        let base = config(61, 0.1, 1.0);
        let shifted_cfg = LatticeConfig::new(61, 1.0, 1.0, base.schedule, shift).unwrap();
        let icfg = IntegratorConfig::default();
        let z_end = 2.0 * base.schedule.period();
        let r0 = propagate(&base, &gaussian_profile(61, 0), z_end, 256, &icfg).unwrap();
        let rs = propagate(
            &shifted_cfg,
            &gaussian_profile(61, shift),
            z_end,
            256,
            &icfg,
        )
        .unwrap();
        let mut max_dev = 0.0f64;
        for (s0, ss) in r0.snapshots.iter().zip(rs.snapshots.iter()) {
            for i in 20..(61 - 20 - shift as usize) {
                max_dev = max_dev.max((ss[i + shift as usize] - s0[i]).abs());
            }
        }
        assert!(max_dev < 1e-6, "shift covariance deviation {max_dev:.3e}");
    }

    #[test]
    fn single_site_input_bounds() {
        assert!(single_site_input(9, 5).is_err());
        assert!(single_site_input(9, -5).is_err());
        let c = single_site_input(9, -4).unwrap();
        assert_eq!(c[0], C64::new(1.0, 0.0));
    }

    #[test]
    fn propagate_rejects_bad_input() {
        let cfg = config(9, 0.1, 1.0);
        let c0 = gaussian_profile(7, 0);
        assert!(matches!(
            propagate(&cfg, &c0, 1.0, 1, &IntegratorConfig::default()),
            Err(Error::DimensionMismatch(_))
        ));
        let c0 = gaussian_profile(9, 0);
        assert!(propagate(&cfg, &c0, -1.0, 1, &IntegratorConfig::default()).is_err());
    }

    #[test]
    fn variance_map_trapping_beats_static_lattice() {
        let template = config(41, 0.0, 2.0 * PI);
        let map = lattice_variance_map(
            &template,
            &[2.0 * PI],
            &[0.0, 0.1],
            &IntegratorConfig::new(1024).unwrap(),
        )
        .unwrap();
        // static column: most-localized open-chain eigenvector, found by
        // direct enumeration of the analytic eigenvectors
        let n = 41usize;
        let mut best = f64::INFINITY;
        for q in 1..=n {
            let v: CVec = (0..n)
                .map(|i| C64::new((q as f64 * PI * (i + 1) as f64 / (n + 1) as f64).sin(), 0.0))
                .collect();
            best = best.min(variance_n(&v, 0).unwrap());
        }
        assert!(
            (map[(0, 0)] - best).abs() < 1e-6 * best.max(1.0),
            "{} vs {}",
            map[(0, 0)],
            best
        );
        assert!(map[(0, 1)].is_finite());
        assert!(
            map[(0, 1)] * 10.0 < map[(0, 0)],
            "{} vs {}",
            map[(0, 1)],
            map[(0, 0)]
        );
    }
}
