//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.

use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{EgfError, Result};

/// Off-diagonal Frobenius norm below which the iteration stops.
pub const OFF_DIAGONAL_THRESHOLD: f64 = 1e-13;
/// Maximum number of full cyclic sweeps.
pub const MAX_SWEEPS: usize = 100;
/// Largest tolerated entrywise deviation from Hermiticity.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Eigenvalues in descending order with matching unit eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// The input is symmetrized as `(M + M†)/2` after the Hermiticity check, so
/// rounding noise in the lower triangle never leaks into the result.
pub fn hermitian_eigen(m: &CMatrix) -> Result<HermitianEigen> {
    let deviation = m.hermiticity_defect();
    if deviation > HERMITIAN_TOLERANCE {
        return Err(EgfError::NonHermitian { deviation });
    }
    let n = m.dim();
    let mut a = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        }
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
    }
    let mut v = CMatrix::identity(n);

    let mut converged = n < 2;
    let mut sweeps = 0;
    while !converged {
        if off_diagonal_norm(&a) < OFF_DIAGONAL_THRESHOLD {
            converged = true;
            break;
        }
        if sweeps == MAX_SWEEPS {
            break;
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(EgfError::NoConvergence {
            sweeps,
            off_norm: off_diagonal_norm(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = order
        .iter()
        .map(|&col| (0..n).map(|row| v[(row, col)]).collect())
        .collect();
    Ok(HermitianEigen { values, vectors })
}

/// One unitary rotation in the (p, q) plane that annihilates `a[p][q]`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let phase = apq / r;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = [[c, s e], [-s conj(e), c]] restricted to (p, q)
    let j_pp = Complex64::new(c, 0.0);
    let j_pq = phase * s;
    let j_qp = -phase.conj() * s;
    let j_qq = Complex64::new(c, 0.0);

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_input_is_sorted_descending() {
        let m = CMatrix::from_diagonal(&[0.1, 0.6, 0.3]);
        let e = hermitian_eigen(&m).unwrap();
        assert_eq!(e.values, vec![0.6, 0.3, 0.1]);
    }

    #[test]
    fn two_by_two_complex_closed_form() {
        // [[2, 1-i], [1+i, 3]] has eigenvalues (5 ± 3)/2
        let m = CMatrix::from_rows(2, vec![c(2.0, 0.0), c(1.0, -1.0), c(1.0, 1.0), c(3.0, 0.0)]);
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.values[0] - 4.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        for (val, vec) in e.values.iter().zip(&e.vectors) {
            let mv = m.mul_vec(vec);
            for (x, y) in mv.iter().zip(vec) {
                assert!((x - y * val).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn eigenvectors_reconstruct_random_hermitian() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 8;
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
            m[(i, i)] = c(m[(i, i)].re, 0.0);
        }
        let e = hermitian_eigen(&m).unwrap();
        let mut rebuilt = CMatrix::zeros(n);
        for (val, vec) in e.values.iter().zip(&e.vectors) {
            rebuilt.add_scaled(&CMatrix::projector(vec), *val);
        }
        assert!(rebuilt.max_abs_diff(&m) < 1e-12);
        let sum: f64 = e.values.iter().sum();
        assert!((sum - m.trace().re).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_rows(2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(hermitian_eigen(&m), Err(EgfError::NonHermitian { .. })));
    }
}
