//! Two-qubit entanglement of formation.
//!
//! Pure states go through the single-qubit polarization vector; mixed states
//! are handled either at a fixed decomposition ([`ef_ensemble`]) or exactly
//! through the two-qubit concurrence ([`wootters_ef_mixed`]), which is the
//! reference the closed-form decompositions are audited against.

use num_complex::Complex64;

use crate::error::{EgfError, Result};
use crate::multiparty::Ensemble;
use crate::qlinalg::entropy::binary_entropy_clamped;
use crate::qlinalg::{hermitian_eigen, CMatrix, DensityMatrix, PureState};

/// Eigenvalues of `rho` below this are treated as outside its support.
pub const SUPPORT_THRESHOLD: f64 = 1e-14;

/// Bloch vector `xi` of a single-qubit state, `rho = (I + xi . sigma) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationVector {
    pub components: [f64; 3],
    pub norm: f64,
}

impl PolarizationVector {
    /// Eigenvalues `(1 + |xi|)/2` and `(1 - |xi|)/2`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        ((1.0 + self.norm) / 2.0, (1.0 - self.norm) / 2.0)
    }
}

/// `xi_i = Tr(rho sigma_i)` for a one-qubit density matrix.
pub fn polarization(rho: &DensityMatrix) -> Result<PolarizationVector> {
    if rho.n() != 1 {
        return Err(EgfError::Dimension {
            expected: "single-qubit density matrix".into(),
            found: format!("{} qubits", rho.n()),
        });
    }
    let m = rho.matrix();
    let off = m[(0, 1)];
    let components = [2.0 * off.re, -2.0 * off.im, m[(0, 0)].re - m[(1, 1)].re];
    let norm = components.iter().map(|c| c * c).sum::<f64>().sqrt();
    Ok(PolarizationVector { components, norm })
}

/// Closed-form summary of a two-qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartitePureAnalysis {
    /// Shared polarization norm of either one-qubit reduction.
    pub xi: f64,
    pub ef: f64,
    /// `sqrt(1 - xi^2)`.
    pub concurrence: f64,
}

/// Entanglement of formation of a two-qubit pure state, `H((1 - xi)/2)`.
pub fn ef_pure_2qubit(psi: &PureState) -> Result<BipartitePureAnalysis> {
    if psi.n() != 2 {
        return Err(EgfError::Dimension {
            expected: "2-qubit state".into(),
            found: format!("{}-qubit state", psi.n()),
        });
    }
    let xi = polarization(&psi.reduced(&[0])?)?.norm.min(1.0);
    Ok(BipartitePureAnalysis {
        xi,
        ef: binary_entropy_clamped((1.0 - xi) / 2.0),
        concurrence: (1.0 - xi * xi).max(0.0).sqrt(),
    })
}

/// Ensemble-averaged entanglement of formation at a fixed decomposition.
/// This is an upper bound on the entanglement of formation of the average.
pub fn ef_ensemble(ens: &Ensemble) -> Result<f64> {
    let mut total = 0.0;
    for (w, s) in ens.significant() {
        total += w * ef_pure_2qubit(s)?.ef;
    }
    Ok(total)
}

/// `E_F` as a function of the concurrence: `H((1 + sqrt(1 - C^2))/2)`.
pub fn ef_from_concurrence(concurrence: f64) -> f64 {
    let c2 = (concurrence * concurrence).clamp(0.0, 1.0);
    // (1 - sqrt(1 - C^2))/2 without cancellation
    binary_entropy_clamped(c2 / (2.0 * (1.0 + (1.0 - c2).sqrt())))
}

/// Two-qubit concurrence `max(0, mu_1 - mu_2 - mu_3 - mu_4)`.
///
/// The `mu_i` are the singular values of `T_jk = w_j^T (Y⊗Y) w_k` where
/// `w_k = sqrt(lambda_k) v_k` runs over the support of `rho`. These coincide
/// with the square roots of the eigenvalues of `rho (Y⊗Y) rho* (Y⊗Y)`, but
/// working in the support avoids taking square roots of rounding noise.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.n() != 2 {
        return Err(EgfError::Dimension {
            expected: "2-qubit density matrix".into(),
            found: format!("{} qubits", rho.n()),
        });
    }
    let eig = hermitian_eigen(rho.matrix())?;
    let support: Vec<Vec<Complex64>> = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .filter(|(&val, _)| val > SUPPORT_THRESHOLD)
        .map(|(&val, vec)| vec.iter().map(|z| z * val.sqrt()).collect())
        .collect();
    let r = support.len();
    if r == 0 {
        return Err(EgfError::Degenerate("density matrix with empty support".into()));
    }
    let flip = |u: &[Complex64], v: &[Complex64]| u[1] * v[2] + u[2] * v[1] - u[0] * v[3] - u[3] * v[0];
    let mut t = CMatrix::zeros(r);
    for j in 0..r {
        for k in 0..r {
            t[(j, k)] = flip(&support[j], &support[k]);
        }
    }
    let mut sv = singular_values(&t)?;
    sv.sort_by(|a, b| b.total_cmp(a));
    let c = sv[0] - sv[1..].iter().sum::<f64>();
    Ok(c.clamp(0.0, 1.0))
}

/// Exact two-qubit entanglement of formation via the concurrence.
pub fn wootters_ef_mixed(rho: &DensityMatrix) -> Result<f64> {
    Ok(ef_from_concurrence(wootters_concurrence(rho)?))
}

fn singular_values(t: &CMatrix) -> Result<Vec<f64>> {
    match t.dim() {
        1 => Ok(vec![t[(0, 0)].norm()]),
        2 => {
            let frob: f64 = t.as_slice().iter().map(|z| z.norm_sqr()).sum();
            let det = (t[(0, 0)] * t[(1, 1)] - t[(0, 1)] * t[(1, 0)]).norm();
            let disc = (frob * frob - 4.0 * det * det).max(0.0).sqrt();
            let s1 = ((frob + disc) / 2.0).sqrt();
            let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
            Ok(vec![s1, s2])
        }
        _ => {
            let gram = &t.adjoint() * t;
            Ok(hermitian_eigen(&gram)?
                .values
                .into_iter()
                .map(|v| v.max(0.0).sqrt())
                .collect())
        }
    }
}
