//! C ABI for the breathing-trap library.
//!
//! Handles are opaque pointers created by `bt_*_new` functions and released
//! by the matching `bt_*_free`; every fallible call returns a [`BtStatus`]
//! and writes results through out-pointers. Panics are caught at the
//! boundary and reported as [`BtStatus::Panic`]. The companion header
//! `include/breathing_trap.h` is generated by cbindgen at build time.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use breathing_trap::breathing::{AlphaSample, BreathingSchedule, QuadraticDriveForm};
use breathing_trap::lattice::{
    gauge_check, gaussian_profile, lattice_floquet, propagate, single_site_input, LatticeConfig,
    LatticeFloquetState, PropagationResult,
};
use breathing_trap::numerics::{CVec, IntegratorConfig};
use breathing_trap::well::{
    effective_ground_state, fidelity, floquet_spectrum, FloquetState, ModeState, WellBasis,
};
use breathing_trap::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BtStatus {
    Ok = 0,
    /// A parameter violated its documented range, or a buffer length did
    /// not match the object.
    InvalidArgument = 1,
    /// The computation produced non-finite values or an eigensolver failed.
    Numerical = 2,
    NullPointer = 3,
    /// A panic was caught at the FFI boundary.
    Panic = 4,
}

fn status_of(err: &Error) -> BtStatus {
    match err {
        Error::NonFinite(_) | Error::Eigensolver(_) => BtStatus::Numerical,
        _ => BtStatus::InvalidArgument,
    }
}

/// Which coefficient multiplies the quadratic confinement term.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BtDriveForm {
    /// −½ α α̈, the dilation-transformation form (default).
    Dilation = 0,
    /// f = ½ α α̈ + α̇² (sensitivity studies).
    DriveF = 1,
}

impl From<BtDriveForm> for QuadraticDriveForm {
    fn from(d: BtDriveForm) -> Self {
        match d {
            BtDriveForm::Dilation => QuadraticDriveForm::Dilation,
            BtDriveForm::DriveF => QuadraticDriveForm::DriveF,
        }
    }
}

/// Initial beam profile for lattice propagation.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BtInitKind {
    /// exp(−(n−n₀)²/5) centered on the trap site.
    Gaussian = 0,
    /// A single-site excitation at the trap site.
    Site = 1,
}

/// One sample of the breathing drive α(t) = 1 + ε cos(ωt).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BtAlphaSample {
    pub alpha: f64,
    pub alpha_dot: f64,
    pub alpha_ddot: f64,
    /// ½ α α̈ + α̇², the drive coefficient of the quadratic term.
    pub drive_f: f64,
}

/// Static infinite-well eigenbasis (opaque).
pub struct BtWellBasis {
    inner: WellBasis,
}

/// Floquet states of the breathing well, sorted by ascending variance
/// (opaque).
pub struct BtWellFloquet {
    states: Vec<FloquetState>,
    n_modes: usize,
}

/// Floquet states of the breathing lattice, sorted by ascending site
/// variance (opaque).
pub struct BtLatticeFloquet {
    states: Vec<LatticeFloquetState>,
    n_sites: usize,
}

/// Sampled lattice propagation record (opaque).
pub struct BtPropagation {
    result: PropagationResult,
    n_sites: usize,
}

fn guard<F: FnOnce() -> BtStatus>(f: F) -> BtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => BtStatus::Panic,
    }
}

/// Version string of the underlying library; static storage, do not free.
#[no_mangle]
pub extern "C" fn bt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Evaluates the breathing drive and its derivatives at time `t`.
///
/// # Safety
/// `out` must point to a writable [`BtAlphaSample`].
#[no_mangle]
pub unsafe extern "C" fn bt_alpha_eval(
    epsilon: f64,
    omega: f64,
    t: f64,
    out: *mut BtAlphaSample,
) -> BtStatus {
    if out.is_null() {
        return BtStatus::NullPointer;
    }
    guard(|| match BreathingSchedule::new(epsilon, omega) {
        Ok(schedule) => {
            let AlphaSample {
                alpha,
                alpha_dot,
                alpha_ddot,
                drive_f,
            } = schedule.eval(t);
            unsafe {
                *out = BtAlphaSample {
                    alpha,
                    alpha_dot,
                    alpha_ddot,
                    drive_f,
                };
            }
            BtStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Builds the static well basis: `n_modes` eigenstates of a well of width
/// `length` centered at the origin.
///
/// # Safety
/// `out` must point to a writable pointer slot. On success it receives a
/// handle that must be released with [`bt_well_basis_free`].
#[no_mangle]
pub unsafe extern "C" fn bt_well_basis_new(
    length: f64,
    n_modes: usize,
    out: *mut *mut BtWellBasis,
) -> BtStatus {
    if out.is_null() {
        return BtStatus::NullPointer;
    }
    guard(|| match WellBasis::new(length, n_modes) {
        Ok(inner) => {
            let handle = Box::new(BtWellBasis { inner });
            unsafe { *out = Box::into_raw(handle) };
            BtStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// # Safety
/// `basis` must be a pointer returned by [`bt_well_basis_new`] that has not
/// been freed; passing null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn bt_well_basis_free(basis: *mut BtWellBasis) {
    if !basis.is_null() {
        drop(unsafe { Box::from_raw(basis) });
    }
}

/// Number of modes in the basis (zero for null).
///
/// # Safety
/// `basis` must be null or a live handle from [`bt_well_basis_new`].
#[no_mangle]
pub unsafe extern "C" fn bt_well_basis_n_modes(basis: *const BtWellBasis) -> usize {
    if basis.is_null() {
        return 0;
    }
    unsafe { &*basis }.inner.n_modes()
}

/// Static level energy E_n for a 1-based mode index.
///
/// # Safety
/// `basis` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bt_well_basis_energy(
    basis: *const BtWellBasis,
    mode: usize,
    out: *mut f64,
) -> BtStatus {
    if basis.is_null() || out.is_null() {
        return BtStatus::NullPointer;
    }
    let basis = unsafe { &*basis };
    if mode == 0 || mode > basis.inner.n_modes() {
        return BtStatus::InvalidArgument;
    }
    unsafe { *out = basis.inner.energies()[mode - 1] };
    BtStatus::Ok
}

/// Computes the Floquet spectrum of the breathing well, sorted by
/// ascending position variance.
///
/// # Safety
/// `basis` must be a live handle; `out` must point to a writable pointer
/// slot. On success it receives a handle to free with
/// [`bt_well_floquet_free`].
#[no_mangle]
pub unsafe extern "C" fn bt_well_floquet_new(
    basis: *const BtWellBasis,
    epsilon: f64,
    omega: f64,
    drive: BtDriveForm,
    steps_per_period: usize,
    out: *mut *mut BtWellFloquet,
) -> BtStatus {
    if basis.is_null() || out.is_null() {
        return BtStatus::NullPointer;
    }
    let basis = unsafe { &*basis };
    guard(|| {
        let run = || -> breathing_trap::Result<Vec<FloquetState>> {
            let schedule = BreathingSchedule::new(epsilon, omega)?;
            let cfg = IntegratorConfig::new(steps_per_period)?;
            floquet_spectrum(&basis.inner, &schedule, drive.into(), &cfg)
        };
        match run() {
            Ok(states) => {
                let handle = Box::new(BtWellFloquet {
                    n_modes: basis.inner.n_modes(),
                    states,
                });
                unsafe { *out = Box::into_raw(handle) };
                BtStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `handle` must be null or a live handle from [`bt_well_floquet_new`].
#[no_mangle]
pub unsafe extern "C" fn bt_well_floquet_free(handle: *mut BtWellFloquet) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Number of Floquet states held by the handle (zero for null).
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bt_well_floquet_len(handle: *const BtWellFloquet) -> usize {
    if handle.is_null() {
        return 0;
    }
    unsafe { &*handle }.states.len()
}

/// # Safety
/// `handle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bt_well_floquet_quasi_energy(
    handle: *const BtWellFloquet,
    index: usize,
    out: *mut f64,
) -> BtStatus {
    if handle.is_null() || out.is_null() {
        return BtStatus::NullPointer;
    }
    let handle = unsafe { &*handle };
    match handle.states.get(index) {
        Some(st) => {
            unsafe { *out = st.quasi_energy };
            BtStatus::Ok
        }
        None => BtStatus::InvalidArgument,
    }
}

/// # Safety
/// `handle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bt_well_floquet_variance(
    handle: *const BtWellFloquet,
    index: usize,
    out: *mut f64,
) -> BtStatus {
    if handle.is_null() || out.is_null() {
        return BtStatus::NullPointer;
    }
    let handle = unsafe { &*handle };
    match handle.states.get(index) {
        Some(st) => {
            unsafe { *out = st.variance };
            BtStatus::Ok
        }
        None => BtStatus::InvalidArgument,
    }
}

/// Copies the mode coefficients of one Floquet state into separate
/// real/imaginary buffers of length `len` (which must equal the basis
/// size).
///
/// # Safety
/// `handle` must be a live handle; `re` and `im` must point to `len`
/// writable doubles each.
#[no_mangle]
pub unsafe extern "C" fn bt_well_floquet_coefficients(
    handle: *const BtWellFloquet,
    index: usize,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> BtStatus {
    if handle.is_null() || re.is_null() || im.is_null() {
        return BtStatus::NullPointer;
    }
    let handle = unsafe { &*handle };
    if len != handle.n_modes {
        return BtStatus::InvalidArgument;
    }
    match handle.states.get(index) {
        Some(st) => {
            let re = unsafe { std::slice::from_raw_parts_mut(re, len) };
            let im = unsafe { std::slice::from_raw_parts_mut(im, len) };
            for (k, c) in st.state.coeffs().iter().enumerate() {
                re[k] = c.re;
                im[k] = c.im;
            }
            BtStatus::Ok
        }
        None => BtStatus::InvalidArgument,
    }
}

/// Ground state of the effective static trap diag(E) + ½Ω²X2. Writes the
/// energy and the (real) mode coefficients into `coefficients`.
///
/// # Safety
/// `basis` must be a live handle; `energy` must be writable;
/// `coefficients` must point to `len` writable doubles with `len` equal to
/// the basis size.
#[no_mangle]
pub unsafe extern "C" fn bt_well_effective_ground(
    basis: *const BtWellBasis,
    omega_eff: f64,
    energy: *mut f64,
    coefficients: *mut f64,
    len: usize,
) -> BtStatus {
    if basis.is_null() || energy.is_null() || coefficients.is_null() {
        return BtStatus::NullPointer;
    }
    let basis = unsafe { &*basis };
    if len != basis.inner.n_modes() {
        return BtStatus::InvalidArgument;
    }
    guard(|| match effective_ground_state(&basis.inner, omega_eff) {
        Ok((e, state)) => {
            unsafe { *energy = e };
            let buf = unsafe { std::slice::from_raw_parts_mut(coefficients, len) };
            for (k, c) in state.coeffs().iter().enumerate() {
                buf[k] = c.re;
            }
            BtStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Overlap probability |⟨s1|s2⟩|² of two normalized coefficient vectors
/// given as split real/imaginary buffers of length `len`.
///
/// # Safety
/// All four data pointers must point to `len` readable doubles; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn bt_well_fidelity(
    re1: *const f64,
    im1: *const f64,
    re2: *const f64,
    im2: *const f64,
    len: usize,
    out: *mut f64,
) -> BtStatus {
    if re1.is_null() || im1.is_null() || re2.is_null() || im2.is_null() || out.is_null() {
        return BtStatus::NullPointer;
    }
    guard(|| {
        let build = |re: *const f64, im: *const f64| -> breathing_trap::Result<ModeState> {
            let re = unsafe { std::slice::from_raw_parts(re, len) };
            let im = unsafe { std::slice::from_raw_parts(im, len) };
            let coeffs: CVec = re
                .iter()
                .zip(im.iter())
                .map(|(&r, &i)| num_complex::Complex64::new(r, i))
                .collect();
            ModeState::new(coeffs)
        };
        let run = || -> breathing_trap::Result<f64> {
            let s1 = build(re1, im1)?;
            let s2 = build(re2, im2)?;
            fidelity(&s1, &s2)
        };
        match run() {
            Ok(f) => {
                unsafe { *out = f };
                BtStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn build_lattice_config(
    epsilon: f64,
    omega: f64,
    n_sites: usize,
    coupling: f64,
    onsite_g: f64,
    trap_center: i64,
    drive: BtDriveForm,
    halved_breathing_rate: bool,
) -> breathing_trap::Result<LatticeConfig> {
    let schedule = BreathingSchedule::new(epsilon, omega)?;
    Ok(
        LatticeConfig::new(n_sites, coupling, onsite_g, schedule, trap_center)?
            .with_drive(drive.into())
            .with_halved_breathing_rate(halved_breathing_rate),
    )
}

fn build_initial(
    kind: BtInitKind,
    n_sites: usize,
    trap_center: i64,
) -> breathing_trap::Result<CVec> {
    match kind {
        BtInitKind::Gaussian => Ok(gaussian_profile(n_sites, trap_center)),
        BtInitKind::Site => single_site_input(n_sites, trap_center),
    }
}

/// Propagates a beam through the breathing lattice, recording every
/// `sample_every`-th step.
///
/// # Safety
/// `out` must point to a writable pointer slot. On success it receives a
/// handle to free with [`bt_propagation_free`].
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn bt_lattice_propagate(
    epsilon: f64,
    omega: f64,
    n_sites: usize,
    coupling: f64,
    onsite_g: f64,
    trap_center: i64,
    drive: BtDriveForm,
    halved_breathing_rate: bool,
    init: BtInitKind,
    z_end: f64,
    sample_every: usize,
    steps_per_period: usize,
    out: *mut *mut BtPropagation,
) -> BtStatus {
    if out.is_null() {
        return BtStatus::NullPointer;
    }
    guard(|| {
        let run = || -> breathing_trap::Result<PropagationResult> {
            let cfg = build_lattice_config(
                epsilon,
                omega,
                n_sites,
                coupling,
                onsite_g,
                trap_center,
                drive,
                halved_breathing_rate,
            )?;
            let c0 = build_initial(init, n_sites, trap_center)?;
            let icfg = IntegratorConfig::new(steps_per_period)?;
            propagate(&cfg, &c0, z_end, sample_every, &icfg)
        };
        match run() {
            Ok(result) => {
                let handle = Box::new(BtPropagation { result, n_sites });
                unsafe { *out = Box::into_raw(handle) };
                BtStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `handle` must be null or a live handle from [`bt_lattice_propagate`].
#[no_mangle]
pub unsafe extern "C" fn bt_propagation_free(handle: *mut BtPropagation) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Number of recorded samples (zero for null).
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bt_propagation_len(handle: *const BtPropagation) -> usize {
    if handle.is_null() {
        return 0;
    }
    unsafe { &*handle }.result.z_samples.len()
}

/// Number of lattice sites per snapshot (zero for null).
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bt_propagation_sites(handle: *const BtPropagation) -> usize {
    if handle.is_null() {
        return 0;
    }
    unsafe { &*handle }.n_sites
}

/// Reads (z, site variance, total norm) of one recorded sample.
///
/// # Safety
/// `handle` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bt_propagation_sample(
    handle: *const BtPropagation,
    index: usize,
    z: *mut f64,
    variance: *mut f64,
    norm: *mut f64,
) -> BtStatus {
    if handle.is_null() || z.is_null() || variance.is_null() || norm.is_null() {
        return BtStatus::NullPointer;
    }
    let handle = unsafe { &*handle };
    if index >= handle.result.z_samples.len() {
        return BtStatus::InvalidArgument;
    }
    unsafe {
        *z = handle.result.z_samples[index];
        *variance = handle.result.variance_series[index];
        *norm = handle.result.norm_series[index];
    }
    BtStatus::Ok
}

/// Copies the intensities |c_n|² of one recorded snapshot into a buffer of
/// length `len` (which must equal the site count).
///
/// # Safety
/// `handle` must be a live handle; `intensities` must point to `len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn bt_propagation_snapshot(
    handle: *const BtPropagation,
    index: usize,
    intensities: *mut f64,
    len: usize,
) -> BtStatus {
    if handle.is_null() || intensities.is_null() {
        return BtStatus::NullPointer;
    }
    let handle = unsafe { &*handle };
    if len != handle.n_sites || index >= handle.result.snapshots.len() {
        return BtStatus::InvalidArgument;
    }
    let buf = unsafe { std::slice::from_raw_parts_mut(intensities, len) };
    buf.copy_from_slice(&handle.result.snapshots[index]);
    BtStatus::Ok
}

/// Computes the discrete Floquet states of the breathing lattice, sorted
/// by ascending site variance.
///
/// # Safety
/// `out` must point to a writable pointer slot. On success it receives a
/// handle to free with [`bt_lattice_floquet_free`].
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn bt_lattice_floquet_new(
    epsilon: f64,
    omega: f64,
    n_sites: usize,
    coupling: f64,
    onsite_g: f64,
    trap_center: i64,
    drive: BtDriveForm,
    halved_breathing_rate: bool,
    steps_per_period: usize,
    out: *mut *mut BtLatticeFloquet,
) -> BtStatus {
    if out.is_null() {
        return BtStatus::NullPointer;
    }
    guard(|| {
        let run = || -> breathing_trap::Result<Vec<LatticeFloquetState>> {
            let cfg = build_lattice_config(
                epsilon,
                omega,
                n_sites,
                coupling,
                onsite_g,
                trap_center,
                drive,
                halved_breathing_rate,
            )?;
            let icfg = IntegratorConfig::new(steps_per_period)?;
            lattice_floquet(&cfg, &icfg)
        };
        match run() {
            Ok(states) => {
                let handle = Box::new(BtLatticeFloquet { states, n_sites });
                unsafe { *out = Box::into_raw(handle) };
                BtStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `handle` must be null or a live handle from [`bt_lattice_floquet_new`].
#[no_mangle]
pub unsafe extern "C" fn bt_lattice_floquet_free(handle: *mut BtLatticeFloquet) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Number of Floquet states (zero for null).
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bt_lattice_floquet_len(handle: *const BtLatticeFloquet) -> usize {
    if handle.is_null() {
        return 0;
    }
    unsafe { &*handle }.states.len()
}

/// Reads the quasi-energy and site variance of one lattice Floquet state.
///
/// # Safety
/// `handle` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bt_lattice_floquet_info(
    handle: *const BtLatticeFloquet,
    index: usize,
    quasi_energy: *mut f64,
    variance: *mut f64,
) -> BtStatus {
    if handle.is_null() || quasi_energy.is_null() || variance.is_null() {
        return BtStatus::NullPointer;
    }
    let handle = unsafe { &*handle };
    match handle.states.get(index) {
        Some(st) => {
            unsafe {
                *quasi_energy = st.quasi_energy;
                *variance = st.variance;
            }
            BtStatus::Ok
        }
        None => BtStatus::InvalidArgument,
    }
}

/// Copies the site amplitudes of one lattice Floquet state into split
/// real/imaginary buffers of length `len` (which must equal the site
/// count).
///
/// # Safety
/// `handle` must be a live handle; `re` and `im` must point to `len`
/// writable doubles each.
#[no_mangle]
pub unsafe extern "C" fn bt_lattice_floquet_amplitudes(
    handle: *const BtLatticeFloquet,
    index: usize,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> BtStatus {
    if handle.is_null() || re.is_null() || im.is_null() {
        return BtStatus::NullPointer;
    }
    let handle = unsafe { &*handle };
    if len != handle.n_sites {
        return BtStatus::InvalidArgument;
    }
    match handle.states.get(index) {
        Some(st) => {
            let re = unsafe { std::slice::from_raw_parts_mut(re, len) };
            let im = unsafe { std::slice::from_raw_parts_mut(im, len) };
            for (k, c) in st.amplitudes.iter().enumerate() {
                re[k] = c.re;
                im[k] = c.im;
            }
            BtStatus::Ok
        }
        None => BtStatus::InvalidArgument,
    }
}

/// Evolves the lattice equation with and without a uniform on-site energy
/// and writes the maximum absolute intensity deviation (gauge equivalence
/// of the canonical phase transformation).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn bt_lattice_gauge_check(
    epsilon: f64,
    omega: f64,
    n_sites: usize,
    coupling: f64,
    onsite_g: f64,
    trap_center: i64,
    drive: BtDriveForm,
    halved_breathing_rate: bool,
    onsite_energy: f64,
    init: BtInitKind,
    z_end: f64,
    steps_per_period: usize,
    out: *mut f64,
) -> BtStatus {
    if out.is_null() {
        return BtStatus::NullPointer;
    }
    guard(|| {
        let run = || -> breathing_trap::Result<f64> {
            let cfg = build_lattice_config(
                epsilon,
                omega,
                n_sites,
                coupling,
                onsite_g,
                trap_center,
                drive,
                halved_breathing_rate,
            )?;
            let c0 = build_initial(init, n_sites, trap_center)?;
            let icfg = IntegratorConfig::new(steps_per_period)?;
            gauge_check(&cfg, onsite_energy, &c0, z_end, &icfg)
        };
        match run() {
            Ok(dev) => {
                unsafe { *out = dev };
                BtStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}
