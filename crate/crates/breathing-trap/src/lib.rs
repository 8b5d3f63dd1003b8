//! Dynamical trapping by harmonically breathing potentials.
//!
//! A breathing potential is a potential rescaled in space as `V(x/α)/α²`
//! with a periodic dilation factor `α(t) = 1 + ε cos(ωt)`. In the frame
//! where the potential is static the drive reappears as a time-dependent
//! quadratic term, and at high frequency the time average of that term is
//! a harmonic trap with effective frequency `Ω = εω/√2`. This crate
//! computes the Floquet (quasi-energy) eigenstates of two such systems:
//!
//! * a quantum particle between two breathing impenetrable walls, solved
//!   spectrally in the static-well eigenbasis ([`well`]);
//! * a breathing nearest-neighbor waveguide lattice, solved site by site
//!   ([`lattice`]).
//!
//! The [`numerics`] module supplies the shared machinery: a fixed-step
//! complex RK4 integrator, one-period (monodromy) propagators, the
//! eigendecomposition used on them, and the quadrature rule that serves
//! as the matrix-element oracle in the test suites. [`breathing`] holds
//! the drive itself, and [`cli`] the command implementations behind the
//! `breathing-trap` binary.

pub mod breathing;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod numerics;
pub mod well;

pub use error::{Error, Result};
