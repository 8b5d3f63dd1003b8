//! The breathing drive α(t) = 1 + ε cos(ωt), its derivatives, and the
//! coefficient f(t) = ½ α α̈ + α̇² that multiplies the quadratic term
//! generated by the transformation to the non-breathing frame.
//!
//! Time and paraxial propagation distance play the same role throughout
//! (the evolution variable is dimensionless), so a single parameter `t`
//! serves both pictures.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::{Error, Result};

/// One evaluation of the drive and its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaSample {
    pub alpha: f64,
    pub alpha_dot: f64,
    pub alpha_ddot: f64,
    /// The drive coefficient f(t) = ½ α α̈ + α̇².
    pub drive_f: f64,
}

/// Harmonic breathing schedule with amplitude ε and angular frequency ω.
/// `|ε| < 1` keeps the dilation away from zero (no singularities), and the
/// phase is fixed so that α(0) = 1 + ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreathingSchedule {
    epsilon: f64,
    omega: f64,
}

impl BreathingSchedule {
    pub fn new(epsilon: f64, omega: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon.abs() >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "breathing amplitude must satisfy |epsilon| < 1, got {epsilon}"
            )));
        }
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "breathing frequency must be positive, got {omega}"
            )));
        }
        Ok(Self { epsilon, omega })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    pub fn eval(&self, t: f64) -> AlphaSample {
        let (s, c) = (self.omega * t).sin_cos();
        let alpha = 1.0 + self.epsilon * c;
        let alpha_dot = -self.epsilon * self.omega * s;
        let alpha_ddot = -self.epsilon * self.omega * self.omega * c;
        AlphaSample {
            alpha,
            alpha_dot,
            alpha_ddot,
            drive_f: 0.5 * alpha * alpha_ddot + alpha_dot * alpha_dot,
        }
    }

    /// Closed form of F(t) = ∫₀ᵗ f(u) du. Integrating ½αα̈ by parts gives
    /// F(t) = ½ α α̇ + ½ ∫₀ᵗ α̇² du, and the remaining integral is
    /// elementary. Over one period F(T) = ¼ ε²ω²T.
    pub fn drive_f_integral(&self, t: f64) -> f64 {
        let a = self.eval(t);
        let w = self.omega;
        let sq =
            0.5 * self.epsilon * self.epsilon * w * w * (0.5 * t - (2.0 * w * t).sin() / (4.0 * w));
        0.5 * a.alpha * a.alpha_dot + sq
    }

    /// Closed form of ∫₀ᵗ du / α(u): the canonical-transformation phase
    /// that removes a uniform on-site energy from the lattice equation.
    pub fn inv_alpha_integral(&self, t: f64) -> f64 {
        let e = self.epsilon;
        let root = (1.0 - e * e).sqrt();
        periodic_atan_primitive(self.omega * t, e) * 2.0 / (root * self.omega)
    }

    /// Closed form of ∫₀ᵗ du / α(u)²: the accumulated phase per unit
    /// static energy in the non-breathing frame.
    pub fn inv_alpha_sq_integral(&self, t: f64) -> f64 {
        let e = self.epsilon;
        let one_minus = 1.0 - e * e;
        let root = one_minus.sqrt();
        let theta = self.omega * t;
        let g = periodic_atan_primitive(theta, e) * 2.0 / root;
        let (s, c) = theta.sin_cos();
        (g - e * s / (1.0 + e * c)) / (one_minus * self.omega)
    }
}

/// Which coefficient multiplies the quadratic confinement term −q(t)·x'²
/// (or its lattice analog −q(t)·(g/k)(n−n₀)²) generated by the breathing
/// drive in the non-breathing frame.
///
/// The two forms differ by the total derivative d(αα̇)/dt, whose integral
/// vanishes over a period but which changes the Floquet states at a fixed
/// drive phase. `Dilation` is the coefficient the dilation transformation
/// x' = x/α actually produces, and it is the form whose Floquet states
/// reproduce the effective static-trap limit Ω = εω/√2 at high frequency;
/// `DriveF` uses the combination f(t) = ½αα̈ + α̇² and is retained for
/// sensitivity studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadraticDriveForm {
    /// q(t) = −½ α α̈ (equivalently, a drive term +½ α α̈ · x'² in the
    /// Hamiltonian).
    #[default]
    Dilation,
    /// q(t) = f(t) = ½ α α̈ + α̇².
    DriveF,
}

impl QuadraticDriveForm {
    /// The coefficient q(t) at one drive sample.
    pub fn coefficient(&self, s: &AlphaSample) -> f64 {
        match self {
            QuadraticDriveForm::Dilation => -0.5 * s.alpha * s.alpha_ddot,
            QuadraticDriveForm::DriveF => s.drive_f,
        }
    }

    /// Closed form of ∫₀ᵗ q(u) du (used to absorb diagonal phases exactly).
    pub fn integral(&self, schedule: &BreathingSchedule, t: f64) -> f64 {
        match self {
            QuadraticDriveForm::Dilation => {
                let s = schedule.eval(t);
                schedule.drive_f_integral(t) - s.alpha * s.alpha_dot
            }
            QuadraticDriveForm::DriveF => schedule.drive_f_integral(t),
        }
    }
}

/// Continuous antiderivative value Φ(θ) with Φ' = ½·√(1-ε²)/(1+ε cos θ),
/// i.e. ∫₀^θ dφ/(1+ε cos φ) = 2 Φ(θ)/√(1-ε²). The arctangent primitive is
/// unwrapped across half-period branch cuts by splitting off whole periods.
fn periodic_atan_primitive(theta: f64, epsilon: f64) -> f64 {
    let k = ((1.0 - epsilon) / (1.0 + epsilon)).sqrt();
    let n = (theta / TAU).round();
    let r = (theta - n * TAU).clamp(-PI, PI);
    (k * (0.5 * r).tan()).atan() + n * PI
}
