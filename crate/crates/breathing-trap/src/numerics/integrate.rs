//! Fixed-step classical RK4 for `i ẏ = A(t) y` and the one-period
//! propagator built from it.

use ndarray::Zip;
use num_complex::Complex64 as C64;

use super::{CMat, CVec, IntegratorConfig, LinearRhs};
use crate::{Error, Result};

/// Evolves the columns of `y0` from `t0` to `t1`, invoking `observe` with
/// the initial state (step 0) and after every accepted step.
///
/// The step size is uniform, `h = (t1 - t0) / n_steps` with `n_steps`
/// chosen via [`IntegratorConfig::steps_for`] against `period`, so the
/// time grid of a one-period integration always lands exactly on the
/// period. Global error is O(h⁴) for smooth generators.
pub fn integrate_observed<R, F>(
    rhs: &R,
    y0: &CMat,
    t0: f64,
    t1: f64,
    period: f64,
    cfg: &IntegratorConfig,
    mut observe: F,
) -> Result<CMat>
where
    R: LinearRhs + ?Sized,
    F: FnMut(usize, f64, &CMat),
{
    let dim = rhs.dim();
    if y0.nrows() != dim {
        return Err(Error::DimensionMismatch(format!(
            "state has {} rows, generator dimension is {}",
            y0.nrows(),
            dim
        )));
    }
    if !(t1 > t0) {
        return Err(Error::InvalidParameter(format!(
            "integration span must be positive, got [{t0}, {t1}]"
        )));
    }
    if !(period > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "reference period must be positive, got {period}"
        )));
    }

    let n_steps = cfg.steps_for(period, t1 - t0);
    let h = (t1 - t0) / n_steps as f64;

    let shape = y0.raw_dim();
    let mut y = y0.clone();
    let mut k1 = CMat::zeros(shape);
    let mut k2 = CMat::zeros(shape);
    let mut k3 = CMat::zeros(shape);
    let mut k4 = CMat::zeros(shape);
    let mut stage = CMat::zeros(shape);

    // i ẏ = A y  ⇔  ẏ = -i A y; the -i is folded into the step weights.
    let c_half = C64::new(0.0, -0.5 * h);
    let c_full = C64::new(0.0, -h);
    let c_sixth = C64::new(0.0, -h / 6.0);

    observe(0, t0, &y);
    for step in 0..n_steps {
        let t = t0 + step as f64 * h;
        let t_mid = t + 0.5 * h;
        let t_end = t + h;

        rhs.apply_columns(t, y.view(), k1.view_mut());
        Zip::from(&mut stage)
            .and(&y)
            .and(&k1)
            .for_each(|s, &yv, &kv| {
                *s = yv + c_half * kv;
            });
        rhs.apply_columns(t_mid, stage.view(), k2.view_mut());
        Zip::from(&mut stage)
            .and(&y)
            .and(&k2)
            .for_each(|s, &yv, &kv| {
                *s = yv + c_half * kv;
            });
        rhs.apply_columns(t_mid, stage.view(), k3.view_mut());
        Zip::from(&mut stage)
            .and(&y)
            .and(&k3)
            .for_each(|s, &yv, &kv| {
                *s = yv + c_full * kv;
            });
        rhs.apply_columns(t_end, stage.view(), k4.view_mut());

        Zip::from(&mut y)
            .and(&k1)
            .and(&k2)
            .and(&k3)
            .and(&k4)
            .for_each(|yv, &a, &b, &c, &d| {
                *yv += c_sixth * (a + (b + c) * 2.0 + d);
            });

        if !y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite(format!(
                "integration diverged at t = {t_end:.6e} (step {step})"
            )));
        }
        observe(step + 1, t_end, &y);
    }
    Ok(y)
}

/// Evolves a single state vector of `i ẏ = A(t) y` from `t0` to `t1`.
pub fn integrate_linear<R>(
    rhs: &R,
    y0: &CVec,
    t0: f64,
    t1: f64,
    period: f64,
    cfg: &IntegratorConfig,
) -> Result<CVec>
where
    R: LinearRhs + ?Sized,
{
    let col = y0
        .view()
        .into_shape_with_order((y0.len(), 1))
        .map_err(|e| Error::DimensionMismatch(e.to_string()))?
        .to_owned();
    let out = integrate_matrix(rhs, &col, t0, t1, period, cfg)?;
    Ok(out.column(0).to_owned())
}

/// Evolves all columns of `y0` at once on the shared time grid.
pub fn integrate_matrix<R>(
    rhs: &R,
    y0: &CMat,
    t0: f64,
    t1: f64,
    period: f64,
    cfg: &IntegratorConfig,
) -> Result<CMat>
where
    R: LinearRhs + ?Sized,
{
    integrate_observed(rhs, y0, t0, t1, period, cfg, |_, _, _| {})
}

/// One-period propagator of a `period`-periodic generator: column `j` is
/// the state `e_j` evolved over `[0, period]`. For a Hermitian generator
/// the result is unitary up to the integration tolerance, and its
/// eigenpairs are the Floquet states of the drive.
pub fn monodromy<R>(rhs: &R, period: f64, cfg: &IntegratorConfig) -> Result<CMat>
where
    R: LinearRhs + ?Sized,
{
    let id = CMat::eye(rhs.dim());
    integrate_matrix(rhs, &id, 0.0, period, period, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{quadrature, FnRhs};
    use ndarray::array;

    const TAU: f64 = std::f64::consts::TAU;

    fn norm(v: &CVec) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn constant_diagonal_generator_matches_analytic_phase() {
        let energies = [1.25, -0.5, 3.0];
        let rhs = FnRhs::new(3, move |_| {
            CMat::from_diag(&energies.iter().map(|&e| C64::new(e, 0.0)).collect::<CVec>())
        });
        let y0: CVec = array![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        let cfg = IntegratorConfig::default();
        let t1 = 0.8;
        let y = integrate_linear(&rhs, &y0, 0.0, t1, t1, &cfg).unwrap();
        let expected = C64::from_polar(1.0, -energies[0] * t1);
        assert!((y[0] - expected).norm() < 1e-10);
        assert!(y[1].norm() < 1e-14 && y[2].norm() < 1e-14);
    }

    #[test]
    fn zero_generator_is_identity() {
        let rhs = FnRhs::new(2, |_| CMat::zeros((2, 2)));
        let y0: CVec = array![C64::new(0.3, -0.1), C64::new(0.7, 0.2)];
        let y = integrate_linear(&rhs, &y0, 0.0, 1.0, 1.0, &IntegratorConfig::default()).unwrap();
        assert_eq!(y, y0);
    }

    fn driven_two_level(t: f64) -> CMat {
        let d = (TAU * t).cos();
        array![
            [C64::new(d, 0.0), C64::new(0.4, 0.1)],
            [C64::new(0.4, -0.1), C64::new(-1.3 * d, 0.0)]
        ]
    }

    #[test]
    fn rk4_self_convergence_order_is_four() {
        let rhs = FnRhs::new(2, driven_two_level);
        let y0: CVec = array![C64::new(0.8, 0.0), C64::new(0.0, 0.6)];
        let run = |steps: usize| {
            let cfg = IntegratorConfig::new(steps).unwrap();
            integrate_linear(&rhs, &y0, 0.0, 1.0, 1.0, &cfg).unwrap()
        };
        let reference = run(64 * 16);
        let err_coarse = norm(&(run(64) - &reference));
        let err_fine = norm(&(run(128) - &reference));
        let order = (err_coarse / err_fine).log2();
        assert!(
            (3.8..=4.2).contains(&order),
            "measured order {order}, coarse {err_coarse:.3e}, fine {err_fine:.3e}"
        );
    }

    #[test]
    fn hermitian_generator_conserves_norm() {
        let rhs = FnRhs::new(2, driven_two_level);
        let y0: CVec = array![C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let y = integrate_linear(&rhs, &y0, 0.0, 1.0, 1.0, &IntegratorConfig::default()).unwrap();
        assert!((norm(&y) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn monodromy_of_constant_diagonal_is_analytic() {
        let energies = [0.7, -2.1];
        let rhs = FnRhs::new(2, move |_| {
            CMat::from_diag(&energies.iter().map(|&e| C64::new(e, 0.0)).collect::<CVec>())
        });
        let period = 1.7;
        let m = monodromy(&rhs, period, &IntegratorConfig::default()).unwrap();
        for (i, &e) in energies.iter().enumerate() {
            let expected = C64::from_polar(1.0, -e * period);
            assert!((m[(i, i)] - expected).norm() < 1e-10);
        }
        assert!(m[(0, 1)].norm() < 1e-14 && m[(1, 0)].norm() < 1e-14);
    }

    #[test]
    fn monodromy_of_hermitian_generator_is_unitary() {
        let rhs = FnRhs::new(2, driven_two_level);
        let m = monodromy(&rhs, 1.0, &IntegratorConfig::default()).unwrap();
        let mh = m.t().mapv(|z| z.conj());
        let prod = mh.dot(&m);
        let mut max_dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                max_dev = max_dev.max((prod[(i, j)] - target).norm());
            }
        }
        assert!(max_dev < 1e-8, "unitarity deviation {max_dev:.3e}");
    }

    #[test]
    fn scalar_monodromy_matches_quadrature_phase() {
        let f = |t: f64| 0.7 + 0.3 * (TAU * t).cos() - 0.2 * (2.0 * TAU * t).sin();
        let rhs = FnRhs::new(1, move |t| array![[C64::new(f(t), 0.0)]]);
        let m = monodromy(&rhs, 1.0, &IntegratorConfig::default()).unwrap();
        let phase = quadrature(f, 0.0, 1.0, 64).unwrap();
        let expected = C64::from_polar(1.0, -phase);
        assert!((m[(0, 0)] - expected).norm() < 1e-10);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let rhs = FnRhs::new(3, |_| CMat::zeros((3, 3)));
        let y0: CVec = array![C64::new(1.0, 0.0)];
        let err = integrate_linear(&rhs, &y0, 0.0, 1.0, 1.0, &IntegratorConfig::default());
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn divergence_is_detected_as_non_finite() {
        let rhs = FnRhs::new(1, |_| array![[C64::new(1e200, 0.0)]]);
        let y0: CVec = array![C64::new(1.0, 0.0)];
        let cfg = IntegratorConfig::new(16).unwrap();
        let err = integrate_linear(&rhs, &y0, 0.0, 1.0, 1.0, &cfg);
        assert!(matches!(err, Err(Error::NonFinite(_))));
    }

    #[test]
    fn identical_inputs_give_identical_bits() {
        let rhs = FnRhs::new(2, driven_two_level);
        let y0: CVec = array![C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let cfg = IntegratorConfig::default();
        let a = integrate_linear(&rhs, &y0, 0.0, 2.0, 1.0, &cfg).unwrap();
        let b = integrate_linear(&rhs, &y0, 0.0, 2.0, 1.0, &cfg).unwrap();
        assert_eq!(a, b);
    }
}
