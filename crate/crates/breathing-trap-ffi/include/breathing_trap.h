#ifndef BREATHING_TRAP_H
#define BREATHING_TRAP_H

/* Generated by cbindgen from breathing-trap-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum BtStatus {
  BT_STATUS_OK = 0,
  /**
   * A parameter violated its documented range, or a buffer length did
   * not match the object.
   */
  BT_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The computation produced non-finite values or an eigensolver failed.
   */
  BT_STATUS_NUMERICAL = 2,
  BT_STATUS_NULL_POINTER = 3,
  /**
   * A panic was caught at the FFI boundary.
   */
  BT_STATUS_PANIC = 4,
} BtStatus;

/**
 * Which coefficient multiplies the quadratic confinement term.
 */
typedef enum BtDriveForm {
  /**
   * −½ α α̈, the dilation-transformation form (default).
   */
  BT_DRIVE_FORM_DILATION = 0,
  /**
   * f = ½ α α̈ + α̇² (sensitivity studies).
   */
  BT_DRIVE_FORM_DRIVE_F = 1,
} BtDriveForm;

/**
 * Initial beam profile for lattice propagation.
 */
typedef enum BtInitKind {
  /**
   * exp(−(n−n₀)²/5) centered on the trap site.
   */
  BT_INIT_KIND_GAUSSIAN = 0,
  /**
   * A single-site excitation at the trap site.
   */
  BT_INIT_KIND_SITE = 1,
} BtInitKind;

/**
 * Floquet states of the breathing lattice, sorted by ascending site
 * variance (opaque).
 */
typedef struct BtLatticeFloquet BtLatticeFloquet;

/**
 * Sampled lattice propagation record (opaque).
 */
typedef struct BtPropagation BtPropagation;

/**
 * Static infinite-well eigenbasis (opaque).
 */
typedef struct BtWellBasis BtWellBasis;

/**
 * Floquet states of the breathing well, sorted by ascending variance
 * (opaque).
 */
typedef struct BtWellFloquet BtWellFloquet;

/**
 * One sample of the breathing drive α(t) = 1 + ε cos(ωt).
 */
typedef struct BtAlphaSample {
  double alpha;
  double alpha_dot;
  double alpha_ddot;
  /**
   * ½ α α̈ + α̇², the drive coefficient of the quadratic term.
   */
  double drive_f;
} BtAlphaSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version string of the underlying library; static storage, do not free.
 */
const char *bt_version(void);

/**
 * Evaluates the breathing drive and its derivatives at time `t`.
 *
 * # Safety
 * `out` must point to a writable [`BtAlphaSample`].
 */
enum BtStatus bt_alpha_eval(double epsilon, double omega, double t, struct BtAlphaSample *out);

/**
 * Builds the static well basis: `n_modes` eigenstates of a well of width
 * `length` centered at the origin.
 *
 * # Safety
 * `out` must point to a writable pointer slot. On success it receives a
 * handle that must be released with [`bt_well_basis_free`].
 */
enum BtStatus bt_well_basis_new(double length, size_t n_modes, struct BtWellBasis **out);

/**
 * # Safety
 * `basis` must be a pointer returned by [`bt_well_basis_new`] that has not
 * been freed; passing null is a no-op.
 */
void bt_well_basis_free(struct BtWellBasis *basis);

/**
 * Number of modes in the basis (zero for null).
 *
 * # Safety
 * `basis` must be null or a live handle from [`bt_well_basis_new`].
 */
size_t bt_well_basis_n_modes(const struct BtWellBasis *basis);

/**
 * Static level energy E_n for a 1-based mode index.
 *
 * # Safety
 * `basis` must be a live handle; `out` must be writable.
 */
enum BtStatus bt_well_basis_energy(const struct BtWellBasis *basis, size_t mode, double *out);

/**
 * Computes the Floquet spectrum of the breathing well, sorted by
 * ascending position variance.
 *
 * # Safety
 * `basis` must be a live handle; `out` must point to a writable pointer
 * slot. On success it receives a handle to free with
 * [`bt_well_floquet_free`].
 */
enum BtStatus bt_well_floquet_new(const struct BtWellBasis *basis,
                                  double epsilon,
                                  double omega,
                                  enum BtDriveForm drive,
                                  size_t steps_per_period,
                                  struct BtWellFloquet **out);

/**
 * # Safety
 * `handle` must be null or a live handle from [`bt_well_floquet_new`].
 */
void bt_well_floquet_free(struct BtWellFloquet *handle);

/**
 * Number of Floquet states held by the handle (zero for null).
 *
 * # Safety
 * `handle` must be null or a live handle.
 */
size_t bt_well_floquet_len(const struct BtWellFloquet *handle);

/**
 * # Safety
 * `handle` must be a live handle; `out` must be writable.
 */
enum BtStatus bt_well_floquet_quasi_energy(const struct BtWellFloquet *handle,
                                           size_t index,
                                           double *out);

/**
 * # Safety
 * `handle` must be a live handle; `out` must be writable.
 */
enum BtStatus bt_well_floquet_variance(const struct BtWellFloquet *handle,
                                       size_t index,
                                       double *out);

/**
 * Copies the mode coefficients of one Floquet state into separate
 * real/imaginary buffers of length `len` (which must equal the basis
 * size).
 *
 * # Safety
 * `handle` must be a live handle; `re` and `im` must point to `len`
 * writable doubles each.
 */
enum BtStatus bt_well_floquet_coefficients(const struct BtWellFloquet *handle,
                                           size_t index,
                                           double *re,
                                           double *im,
                                           size_t len);

/**
 * Ground state of the effective static trap diag(E) + ½Ω²X2. Writes the
 * energy and the (real) mode coefficients into `coefficients`.
 *
 * # Safety
 * `basis` must be a live handle; `energy` must be writable;
 * `coefficients` must point to `len` writable doubles with `len` equal to
 * the basis size.
 */
enum BtStatus bt_well_effective_ground(const struct BtWellBasis *basis,
                                       double omega_eff,
                                       double *energy,
                                       double *coefficients,
                                       size_t len);

/**
 * Overlap probability |⟨s1|s2⟩|² of two normalized coefficient vectors
 * given as split real/imaginary buffers of length `len`.
 *
 * # Safety
 * All four data pointers must point to `len` readable doubles; `out`
 * must be writable.
 */
enum BtStatus bt_well_fidelity(const double *re1,
                               const double *im1,
                               const double *re2,
                               const double *im2,
                               size_t len,
                               double *out);

/**
 * Propagates a beam through the breathing lattice, recording every
 * `sample_every`-th step.
 *
 * # Safety
 * `out` must point to a writable pointer slot. On success it receives a
 * handle to free with [`bt_propagation_free`].
 */
enum BtStatus bt_lattice_propagate(double epsilon,
                                   double omega,
                                   size_t n_sites,
                                   double coupling,
                                   double onsite_g,
                                   int64_t trap_center,
                                   enum BtDriveForm drive,
                                   bool halved_breathing_rate,
                                   enum BtInitKind init,
                                   double z_end,
                                   size_t sample_every,
                                   size_t steps_per_period,
                                   struct BtPropagation **out);

/**
 * # Safety
 * `handle` must be null or a live handle from [`bt_lattice_propagate`].
 */
void bt_propagation_free(struct BtPropagation *handle);

/**
 * Number of recorded samples (zero for null).
 *
 * # Safety
 * `handle` must be null or a live handle.
 */
size_t bt_propagation_len(const struct BtPropagation *handle);

/**
 * Number of lattice sites per snapshot (zero for null).
 *
 * # Safety
 * `handle` must be null or a live handle.
 */
size_t bt_propagation_sites(const struct BtPropagation *handle);

/**
 * Reads (z, site variance, total norm) of one recorded sample.
 *
 * # Safety
 * `handle` must be a live handle; the out-pointers must be writable.
 */
enum BtStatus bt_propagation_sample(const struct BtPropagation *handle,
                                    size_t index,
                                    double *z,
                                    double *variance,
                                    double *norm);

/**
 * Copies the intensities |c_n|² of one recorded snapshot into a buffer of
 * length `len` (which must equal the site count).
 *
 * # Safety
 * `handle` must be a live handle; `intensities` must point to `len`
 * writable doubles.
 */
enum BtStatus bt_propagation_snapshot(const struct BtPropagation *handle,
                                      size_t index,
                                      double *intensities,
                                      size_t len);

/**
 * Computes the discrete Floquet states of the breathing lattice, sorted
 * by ascending site variance.
 *
 * # Safety
 * `out` must point to a writable pointer slot. On success it receives a
 * handle to free with [`bt_lattice_floquet_free`].
 */
enum BtStatus bt_lattice_floquet_new(double epsilon,
                                     double omega,
                                     size_t n_sites,
                                     double coupling,
                                     double onsite_g,
                                     int64_t trap_center,
                                     enum BtDriveForm drive,
                                     bool halved_breathing_rate,
                                     size_t steps_per_period,
                                     struct BtLatticeFloquet **out);

/**
 * # Safety
 * `handle` must be null or a live handle from [`bt_lattice_floquet_new`].
 */
void bt_lattice_floquet_free(struct BtLatticeFloquet *handle);

/**
 * Number of Floquet states (zero for null).
 *
 * # Safety
 * `handle` must be null or a live handle.
 */
size_t bt_lattice_floquet_len(const struct BtLatticeFloquet *handle);

/**
 * Reads the quasi-energy and site variance of one lattice Floquet state.
 *
 * # Safety
 * `handle` must be a live handle; the out-pointers must be writable.
 */
enum BtStatus bt_lattice_floquet_info(const struct BtLatticeFloquet *handle,
                                      size_t index,
                                      double *quasi_energy,
                                      double *variance);

/**
 * Copies the site amplitudes of one lattice Floquet state into split
 * real/imaginary buffers of length `len` (which must equal the site
 * count).
 *
 * # Safety
 * `handle` must be a live handle; `re` and `im` must point to `len`
 * writable doubles each.
 */
enum BtStatus bt_lattice_floquet_amplitudes(const struct BtLatticeFloquet *handle,
                                            size_t index,
                                            double *re,
                                            double *im,
                                            size_t len);

/**
 * Evolves the lattice equation with and without a uniform on-site energy
 * and writes the maximum absolute intensity deviation (gauge equivalence
 * of the canonical phase transformation).
 *
 * # Safety
 * `out` must be writable.
 */
enum BtStatus bt_lattice_gauge_check(double epsilon,
                                     double omega,
                                     size_t n_sites,
                                     double coupling,
                                     double onsite_g,
                                     int64_t trap_center,
                                     enum BtDriveForm drive,
                                     bool halved_breathing_rate,
                                     double onsite_energy,
                                     enum BtInitKind init,
                                     double z_end,
                                     size_t steps_per_period,
                                     double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BREATHING_TRAP_H */
