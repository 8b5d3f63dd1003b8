//! Cross-cutting physics invariants that exceed unit-test scale.

use std::f64::consts::PI;

use breathing_trap::breathing::{BreathingSchedule, QuadraticDriveForm};
use breathing_trap::numerics::IntegratorConfig;
use breathing_trap::well::{floquet_spectrum, WellBasis};

#[test]
fn minimum_variance_is_robust_to_doubling_the_truncation() {
    let schedule = BreathingSchedule::new(0.05, 25.0 * PI * PI).unwrap();
    let cfg = IntegratorConfig::default();
    let drive = QuadraticDriveForm::default();

    let b30 = WellBasis::new(1.0, 30).unwrap();
    let b60 = WellBasis::new(1.0, 60).unwrap();
    let v30 = floquet_spectrum(&b30, &schedule, drive, &cfg).unwrap()[0].variance;
    let v60 = floquet_spectrum(&b60, &schedule, drive, &cfg).unwrap()[0].variance;
    let rel = ((v30 - v60) / v30).abs();
    assert!(
        rel < 0.01,
        "minimum variance changed by {rel:.3e} when doubling N (v30 {v30:.6e}, v60 {v60:.6e})"
    );
}
