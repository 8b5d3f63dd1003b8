//! Eigendecomposition of (near-)normal complex matrices, as produced by
//! monodromy construction for Hermitian generators.

use faer::Mat;
use num_complex::Complex64 as C64;

use super::{CMat, CVec};
use crate::{Error, Result};

/// Residual bound enforced on every returned pair: ‖M v − λ v‖ < RESIDUAL_TOL · ‖v‖.
const RESIDUAL_TOL: f64 = 1e-8;
/// Eigenvalues closer than this are treated as one degenerate cluster and
/// their eigenvectors orthonormalized, so state ordering stays reproducible
/// in exactly degenerate situations (e.g. an undriven system).
const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: C64,
    pub vector: CVec,
}

/// Phase angle θ ∈ (−π, π] such that λ = |λ| e^{−iθ}. Quasi-energies are
/// this phase divided by the period, which places them on the principal
/// branch (−π/T, π/T].
pub fn principal_phase(value: C64) -> f64 {
    let mut p = -value.arg();
    if p <= -std::f64::consts::PI {
        p += std::f64::consts::TAU;
    }
    p
}

/// Full eigendecomposition of a square (near-)normal matrix.
///
/// Pairs are sorted by ascending principal phase; within numerically
/// degenerate clusters the eigenvectors are orthonormalized. Fails when
/// the underlying solver does not converge or when the residual contract
/// cannot be met, which signals a strongly non-normal input.
pub fn eig_normal(m: &CMat) -> Result<Vec<EigenPair>> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "eig_normal needs a nonempty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }

    let fm = Mat::<faer::c64>::from_fn(n, n, |i, j| m[(i, j)]);
    let evd = fm
        .eigen()
        .map_err(|e| Error::Eigensolver(format!("complex eigendecomposition failed: {e:?}")))?;
    let values = evd.S();
    let vectors = evd.U();

    let mut pairs: Vec<EigenPair> = (0..n)
        .map(|k| {
            let mut v: CVec = CVec::from_iter((0..n).map(|i| vectors[(i, k)]));
            let norm = vec_norm(&v);
            if norm > 0.0 {
                v.mapv_inplace(|z| z / norm);
            }
            EigenPair {
                value: values[k],
                vector: v,
            }
        })
        .collect();

    pairs.sort_by(|a, b| {
        principal_phase(a.value)
            .total_cmp(&principal_phase(b.value))
            .then_with(|| a.value.re.total_cmp(&b.value.re))
    });

    orthonormalize_clusters(&mut pairs)?;

    for pair in &pairs {
        let residual = residual_norm(m, pair);
        if residual >= RESIDUAL_TOL {
            return Err(Error::Eigensolver(format!(
                "residual {residual:.3e} exceeds {RESIDUAL_TOL:.1e} for eigenvalue {}",
                pair.value
            )));
        }
    }
    Ok(pairs)
}

fn vec_norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn residual_norm(m: &CMat, pair: &EigenPair) -> f64 {
    let mv = m.dot(&pair.vector);
    let mut acc = 0.0;
    for (a, b) in mv.iter().zip(pair.vector.iter()) {
        acc += (a - pair.value * b).norm_sqr();
    }
    acc.sqrt()
}

/// Modified Gram–Schmidt within runs of eigenvalues closer than
/// [`DEGENERACY_TOL`] (pairs are already phase-sorted, so clusters are
/// contiguous).
fn orthonormalize_clusters(pairs: &mut [EigenPair]) -> Result<()> {
    let n = pairs.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (pairs[end].value - pairs[end - 1].value).norm() < DEGENERACY_TOL {
            end += 1;
        }
        for k in start + 1..end {
            for j in start..k {
                let overlap: C64 = pairs[j]
                    .vector
                    .iter()
                    .zip(pairs[k].vector.iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let prev = pairs[j].vector.clone();
                for (vk, pj) in pairs[k].vector.iter_mut().zip(prev.iter()) {
                    *vk -= overlap * pj;
                }
            }
            let norm = vec_norm(&pairs[k].vector);
            if norm < 1e-12 {
                return Err(Error::Eigensolver(
                    "degenerate cluster could not be orthonormalized".into(),
                ));
            }
            pairs[k].vector.mapv_inplace(|z| z / norm);
        }
        start = end;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn identity(n: usize) -> CMat {
        CMat::eye(n)
    }

    #[test]
    fn identity_matrix_gives_unit_eigenvalues_and_orthonormal_basis() {
        let pairs = eig_normal(&identity(4)).unwrap();
        assert_eq!(pairs.len(), 4);
        for p in &pairs {
            assert!((p.value - C64::new(1.0, 0.0)).norm() < 1e-14);
            assert!((vec_norm(&p.vector) - 1.0).abs() < 1e-12);
        }
        for i in 0..4 {
            for j in 0..i {
                let overlap: C64 = pairs[i]
                    .vector
                    .iter()
                    .zip(pairs[j].vector.iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                assert!(overlap.norm() < 1e-10, "pair ({i},{j}) overlap {overlap}");
            }
        }
    }

    #[test]
    fn diagonal_unitary_matrix_recovers_each_phase() {
        let thetas = [0.4, -1.1];
        let m: CMat = CMat::from_diag(&array![
            C64::from_polar(1.0, -thetas[0]),
            C64::from_polar(1.0, -thetas[1]),
        ]);
        let pairs = eig_normal(&m).unwrap();
        // sorted by ascending principal phase: -1.1 then 0.4
        assert!((principal_phase(pairs[0].value) - (-1.1)).abs() < 1e-14);
        assert!((principal_phase(pairs[1].value) - 0.4).abs() < 1e-14);
        assert!(pairs[1].vector[0].norm() > 0.999);
        assert!(pairs[0].vector[1].norm() > 0.999);
    }

    fn splitmix64(state: &mut u64) -> f64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64
    }

    fn random_unitary_from_givens(n: usize, seed: u64) -> CMat {
        let mut state = seed;
        let mut u = CMat::eye(n);
        for i in 0..n {
            for j in i + 1..n {
                let theta = std::f64::consts::PI * splitmix64(&mut state);
                let phi = std::f64::consts::TAU * splitmix64(&mut state);
                let (s, c) = theta.sin_cos();
                let e = C64::from_polar(1.0, phi);
                // rotate rows i and j of u in place
                for col in 0..n {
                    let a = u[(i, col)];
                    let b = u[(j, col)];
                    u[(i, col)] = c * a + s * e * b;
                    u[(j, col)] = -s * e.conj() * a + c * b;
                }
            }
        }
        u
    }

    #[test]
    fn random_unitary_is_reconstructed_from_its_eigenpairs() {
        for seed in [3u64, 17, 101] {
            let m = random_unitary_from_givens(6, seed);
            let pairs = eig_normal(&m).unwrap();
            let mut rebuilt = CMat::zeros((6, 6));
            for p in &pairs {
                for i in 0..6 {
                    for j in 0..6 {
                        rebuilt[(i, j)] += p.value * p.vector[i] * p.vector[j].conj();
                    }
                }
            }
            let max_dev = rebuilt
                .iter()
                .zip(m.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(
                max_dev < 1e-8,
                "seed {seed}: reconstruction deviation {max_dev:.3e}"
            );
        }
    }

    #[test]
    fn principal_phase_lands_in_half_open_interval() {
        assert!((principal_phase(C64::new(-1.0, 0.0)) - std::f64::consts::PI).abs() < 1e-15);
        assert!((principal_phase(C64::new(1.0, 0.0))).abs() < 1e-15);
        let just_below = C64::from_polar(1.0, std::f64::consts::PI - 1e-12);
        assert!(principal_phase(just_below) < 0.0 || principal_phase(just_below) > 3.0);
    }

    #[test]
    fn non_square_input_is_rejected() {
        let m = CMat::zeros((2, 3));
        assert!(matches!(eig_normal(&m), Err(Error::DimensionMismatch(_))));
    }
}
