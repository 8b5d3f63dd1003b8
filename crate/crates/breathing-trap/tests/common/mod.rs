//! Shared oracles and helpers for the integration and acceptance suites.
#![allow(dead_code)] // each test binary uses its own subset

use std::f64::consts::{PI, TAU};
use std::path::Path;

/// Bessel function of the first kind, integer order, via the integral
/// representation J_n(x) = (1/2π) ∫₀^{2π} cos(nθ − x sin θ) dθ evaluated
/// with the trapezoidal rule, which converges spectrally for smooth
/// periodic integrands. Independent of every code path under test.
pub fn bessel_j(order: i64, x: f64) -> f64 {
    let samples = 4096usize;
    let h = TAU / samples as f64;
    let mut acc = 0.0;
    for k in 0..samples {
        let theta = k as f64 * h;
        acc += (order as f64 * theta - x * theta.sin()).cos();
    }
    acc / samples as f64
}

/// Folds an energy to the principal quasi-energy branch (−π/T, π/T].
pub fn fold_quasi_energy(energy: f64, period: f64) -> f64 {
    let mut phase = (energy * period).rem_euclid(TAU);
    if phase > PI {
        phase -= TAU;
    }
    phase / period
}

pub fn read_bytes(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

/// Panics unless the two files are byte-identical.
pub fn assert_same_bytes(a: &Path, b: &Path) {
    let ba = read_bytes(a);
    let bb = read_bytes(b);
    assert!(
        ba == bb,
        "{} and {} differ ({} vs {} bytes)",
        a.display(),
        b.display(),
        ba.len(),
        bb.len()
    );
}

/// A scratch directory unique to one test, cleaned up on drop.
pub struct ScratchDir {
    pub path: std::path::PathBuf,
}

impl ScratchDir {
    pub fn new(tag: &str) -> Self {
        let path =
            std::env::temp_dir().join(format!("breathing-trap-test-{tag}-{}", std::process::id()));
        if path.exists() {
            let _ = std::fs::remove_dir_all(&path);
        }
        std::fs::create_dir_all(&path).expect("create scratch dir");
        Self { path }
    }

    pub fn file(&self, name: &str) -> std::path::PathBuf {
        self.path.join(name)
    }
}

impl Drop for ScratchDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.path);
    }
}
