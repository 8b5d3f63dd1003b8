//! Shared numerical machinery: complex linear-ODE integration on a fixed
//! grid, monodromy (one-period propagator) construction, eigendecomposition
//! of near-normal matrices, and Gauss–Legendre quadrature.
//!
//! Everything here is a pure function of its inputs and bit-deterministic
//! for a fixed build: same inputs and step counts give identical floats.

mod eig;
mod integrate;
mod quad;

pub use eig::{eig_normal, principal_phase, EigenPair};
pub use integrate::{integrate_linear, integrate_matrix, integrate_observed, monodromy};
pub use quad::quadrature;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, ArrayViewMut1, ArrayViewMut2};
use num_complex::Complex64 as C64;

use crate::{Error, Result};

pub type CVec = Array1<C64>;
pub type CMat = Array2<C64>;

/// Fixed-step integrator configuration. The scheme is the classical
/// fourth-order Runge–Kutta method; `steps_per_period` sets the grid so
/// that the step size divides the drive period exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegratorConfig {
    pub steps_per_period: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            steps_per_period: 4096,
        }
    }
}

impl IntegratorConfig {
    pub fn new(steps_per_period: usize) -> Result<Self> {
        if steps_per_period < 16 {
            return Err(Error::InvalidParameter(format!(
                "steps_per_period must be at least 16, got {steps_per_period}"
            )));
        }
        Ok(Self { steps_per_period })
    }

    /// Number of uniform steps used to cover `span`, sized so that one
    /// period corresponds to exactly `steps_per_period` steps.
    pub fn steps_for(&self, period: f64, span: f64) -> usize {
        let raw = span / (period / self.steps_per_period as f64);
        let snapped = raw.round();
        let n = if (raw - snapped).abs() < 1e-9 * raw.max(1.0) {
            snapped
        } else {
            raw.ceil()
        };
        (n as usize).max(1)
    }
}

/// The right-hand side of `i ẏ = A(t) y`, presented as the action of the
/// (generally time-dependent) matrix `A(t)`.
///
/// Implementors provide `apply`; dense callers can recover the matrix
/// itself through [`LinearRhs::matrix`]. `apply_columns` exists so that
/// structured generators (tridiagonal lattices, phase-conjugated mode
/// couplings) can hoist per-time work out of the per-column loop when a
/// whole propagator is being evolved.
pub trait LinearRhs {
    fn dim(&self) -> usize;

    /// Writes `A(t) · y` into `out`.
    fn apply(&self, t: f64, y: ArrayView1<C64>, out: ArrayViewMut1<C64>);

    fn apply_columns(&self, t: f64, y: ArrayView2<C64>, mut out: ArrayViewMut2<C64>) {
        for (yc, oc) in y.columns().into_iter().zip(out.columns_mut().into_iter()) {
            self.apply(t, yc, oc);
        }
    }

    /// Materializes `A(t)` by applying it to the standard basis.
    fn matrix(&self, t: f64) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros((n, n));
        let mut e = CVec::zeros(n);
        for j in 0..n {
            e[j] = C64::new(1.0, 0.0);
            self.apply(t, e.view(), m.column_mut(j));
            e[j] = C64::new(0.0, 0.0);
        }
        m
    }
}

/// A dense generator given as a closure `t ↦ A(t)`. Convenient for tests
/// and small systems; rebuilds the matrix at every stage evaluation.
pub struct FnRhs<F>
where
    F: Fn(f64) -> CMat,
{
    dim: usize,
    f: F,
}

impl<F> FnRhs<F>
where
    F: Fn(f64) -> CMat,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> LinearRhs for FnRhs<F>
where
    F: Fn(f64) -> CMat,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, t: f64, y: ArrayView1<C64>, mut out: ArrayViewMut1<C64>) {
        let a = (self.f)(t);
        debug_assert_eq!(a.nrows(), self.dim);
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (j, yj) in y.iter().enumerate() {
                acc += a[(i, j)] * yj;
            }
            *o = acc;
        }
    }
}
