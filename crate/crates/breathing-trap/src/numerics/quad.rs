//! Composite Gauss–Legendre quadrature.

use crate::{Error, Result};

// 10-point Gauss–Legendre rule on [-1, 1], positive abscissas and weights.
const GL_NODES: [f64; 5] = [
    0.148_874_338_981_631_21,
    0.433_395_394_129_247_19,
    0.679_409_568_299_024_41,
    0.865_063_366_688_984_51,
    0.973_906_528_517_171_72,
];
const GL_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_87,
    0.269_266_719_309_996_36,
    0.219_086_362_515_982_04,
    0.149_451_349_150_580_59,
    0.066_671_344_308_688_14,
];

/// Integrates `f` over `[a, b]` with a composite 10-point Gauss–Legendre
/// rule on `panels` equal subintervals. On the smooth trig-polynomial
/// integrands used as matrix-element oracles, doubling `panels` changes
/// the value by less than 1e-12.
pub fn quadrature<F>(f: F, a: f64, b: f64, panels: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if panels == 0 {
        return Err(Error::InvalidParameter(
            "quadrature needs at least one panel".into(),
        ));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "non-finite bounds [{a}, {b}]"
        )));
    }
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        let mut acc = 0.0;
        for (&x, &w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
            let f_hi = f(mid + half * x);
            let f_lo = f(mid - half * x);
            if !f_hi.is_finite() || !f_lo.is_finite() {
                return Err(Error::NonFinite(format!(
                    "integrand non-finite near x = {:.6e}",
                    mid + half * x
                )));
            }
            acc += w * (f_hi + f_lo);
        }
        total += acc * half;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sin_squared_over_half_period() {
        let v = quadrature(|x| x.sin().powi(2), 0.0, PI, 8).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn odd_integrand_vanishes() {
        let v = quadrature(|x| x, -0.5, 0.5, 4).unwrap();
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn ground_mode_second_moment_of_centered_well() {
        // ∫ x² · 2 sin²(π(x + 1/2)) dx over [-1/2, 1/2] = 1/12 - 1/(2π²),
        // cross-checked against a high-resolution Riemann sum.
        let f = |x: f64| x * x * 2.0 * (PI * (x + 0.5)).sin().powi(2);
        let v = quadrature(f, -0.5, 0.5, 16).unwrap();
        let expected = 1.0 / 12.0 - 1.0 / (2.0 * PI * PI);

        let n = 2_000_000usize;
        let h = 1.0 / n as f64;
        let riemann: f64 = (0..n).map(|i| f(-0.5 + (i as f64 + 0.5) * h) * h).sum();

        assert!(
            (v - expected).abs() < 1e-12,
            "gl vs analytic: {:.3e}",
            v - expected
        );
        assert!((riemann - expected).abs() < 1e-10);
    }

    #[test]
    fn doubling_panels_is_converged() {
        let f = |x: f64| (3.0 * x).cos().powi(2) * (x).sin().powi(2);
        let v1 = quadrature(f, 0.0, 2.0 * PI, 16).unwrap();
        let v2 = quadrature(f, 0.0, 2.0 * PI, 32).unwrap();
        assert!((v1 - v2).abs() < 1e-12);
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let err = quadrature(|x| 1.0 / x, 0.0, 1.0, 1);
        // 1/x is finite at the Gauss nodes; force an actual NaN instead.
        assert!(err.is_ok());
        let err = quadrature(|x| (x - 0.3).ln(), 0.0, 1.0, 4);
        assert!(matches!(err, Err(Error::NonFinite(_))));
    }
}
