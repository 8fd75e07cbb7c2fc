use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::density::{DensityMatrix, QubitLayout};
use super::matrix::CMatrix;
use crate::error::{EgfError, Result};

pub const MAX_QUBITS: usize = 10;

/// Norm deviations up to this size are silently renormalized.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-6;

/// Unit-tolerance for unitarity checks on single-qubit gates.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// A normalized pure state of `n` qubits.
///
/// Amplitudes are indexed by the basis integer with qubit 0 (party A) as the
/// most significant bit, so for three qubits `amps[0b011]` is the coefficient
/// of `|011>`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Validates and (if needed) renormalizes an amplitude vector.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(EgfError::Dimension {
                expected: "2^n amplitudes with n >= 1".into(),
                found: format!("{len} amplitudes"),
            });
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(EgfError::Dimension {
                expected: format!("at most {MAX_QUBITS} qubits"),
                found: format!("{n} qubits"),
            });
        }
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > RENORMALIZE_TOLERANCE {
            return Err(EgfError::Normalization { norm_sq });
        }
        let amps = if (norm_sq - 1.0).abs() > 4.0 * f64::EPSILON {
            let s = norm_sq.sqrt().recip();
            amps.into_iter().map(|z| z * s).collect()
        } else {
            amps
        };
        Ok(PureState { n, amps })
    }

    /// Like [`PureState::new`] but normalizes any nonzero vector.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(EgfError::Normalization { norm_sq });
        }
        let s = norm_sq.sqrt().recip();
        Self::new(amps.into_iter().map(|z| z * s).collect())
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index>` on `n` qubits.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS || index >= 1 << n {
            return Err(EgfError::Dimension {
                expected: format!("basis index below 2^{n} with 1 <= n <= {MAX_QUBITS}"),
                found: format!("index {index}"),
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(PureState { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `|self> ⊗ |other>`, with `self` supplying the leading qubits.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        PureState::new(amps)
    }

    /// Relabels qubits: qubit `j` of the result is qubit `perm[j]` of `self`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<PureState> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true)) {
            return Err(EgfError::LabelMismatch(format!(
                "{perm:?} is not a permutation of {} qubits",
                self.n
            )));
        }
        let n = self.n;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (old, amp) in self.amps.iter().enumerate() {
            let mut new = 0;
            for (j, &p) in perm.iter().enumerate() {
                let bit = (old >> (n - 1 - p)) & 1;
                new |= bit << (n - 1 - j);
            }
            amps[new] = *amp;
        }
        Ok(PureState { n, amps })
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|psi><psi|` over all qubits.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_parts_unchecked((0..self.n).collect(), CMatrix::projector(&self.amps))
    }

    /// Reduced density matrix on the qubits in `keep` (listed in ascending
    /// label order in the result), computed directly from the amplitudes.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let layout = QubitLayout::new(self.n, keep)?;
        let kd = layout.kept_dim();
        let td = layout.traced_dim();
        let mut block = vec![Complex64::new(0.0, 0.0); kd * td];
        for (idx, amp) in self.amps.iter().enumerate() {
            let (k, t) = layout.split(idx);
            block[k * td + t] = *amp;
        }
        let mut mat = CMatrix::zeros(kd);
        for i in 0..kd {
            for j in i..kd {
                let z: Complex64 = (0..td)
                    .map(|t| block[i * td + t] * block[j * td + t].conj())
                    .sum();
                mat[(i, j)] = z;
                mat[(j, i)] = z.conj();
            }
        }
        Ok(DensityMatrix::from_parts_unchecked(layout.kept().to_vec(), mat))
    }

    /// Unnormalized conditional states of the kept qubits, one per
    /// computational basis state of the traced qubits: `<t|_traced |psi>`.
    pub fn conditional_branches(&self, keep: &[usize]) -> Result<Vec<Vec<Complex64>>> {
        let layout = QubitLayout::new(self.n, keep)?;
        let mut branches = vec![vec![Complex64::new(0.0, 0.0); layout.kept_dim()]; layout.traced_dim()];
        for (idx, amp) in self.amps.iter().enumerate() {
            let (k, t) = layout.split(idx);
            branches[t][k] = *amp;
        }
        Ok(branches)
    }
}

/// Applies a single-qubit unitary to qubit `target`.
pub fn apply_local_unitary(psi: &PureState, target: usize, u: &CMatrix) -> Result<PureState> {
    if u.dim() != 2 {
        return Err(EgfError::Dimension {
            expected: "2x2 unitary".into(),
            found: format!("{0}x{0}", u.dim()),
        });
    }
    if target >= psi.n() {
        return Err(EgfError::LabelMismatch(format!(
            "qubit {target} not present in a {}-qubit state",
            psi.n()
        )));
    }
    let deviation = u.unitarity_defect();
    if deviation > UNITARY_TOLERANCE {
        return Err(EgfError::NonUnitary { deviation });
    }
    let shift = psi.n() - 1 - target;
    let mask = 1usize << shift;
    let mut amps = psi.amps().to_vec();
    for idx in 0..psi.dim() {
        if idx & mask != 0 {
            continue;
        }
        let lo = psi.amps()[idx];
        let hi = psi.amps()[idx | mask];
        amps[idx] = u[(0, 0)] * lo + u[(0, 1)] * hi;
        amps[idx | mask] = u[(1, 0)] * lo + u[(1, 1)] * hi;
    }
    Ok(PureState { n: psi.n(), amps })
}

fn gaussian_amplitudes(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect()
}

/// Haar-distributed pure state from normalized complex Gaussians; deterministic per seed.
///
/// Panics if `n` is not in `1..=MAX_QUBITS`.
pub fn random_pure_state(n: usize, seed: u64) -> PureState {
    assert!((1..=MAX_QUBITS).contains(&n), "qubit count {n} out of range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = gaussian_amplitudes(&mut rng, 1 << n);
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    PureState {
        n,
        amps: amps.into_iter().map(|z| z / norm).collect(),
    }
}

/// Tensor product of `n` independent random single-qubit states.
pub fn random_product_state(n: usize, seed: u64) -> PureState {
    assert!((1..=MAX_QUBITS).contains(&n), "qubit count {n} out of range");
    let mut state = random_pure_state(1, seed.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    for q in 1..n {
        let factor = random_pure_state(1, seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(q as u64));
        state = state.tensor(&factor).expect("product of normalized states is normalized");
    }
    state
}

/// Haar-random 2x2 unitary (Gram-Schmidt on a complex Gaussian matrix).
pub fn random_unitary_2x2(seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_amplitudes(&mut rng, 4);
    let n0 = (g[0].norm_sqr() + g[2].norm_sqr()).sqrt();
    let (c00, c10) = (g[0] / n0, g[2] / n0);
    let proj = c00.conj() * g[1] + c10.conj() * g[3];
    let (r01, r11) = (g[1] - c00 * proj, g[3] - c10 * proj);
    let n1 = (r01.norm_sqr() + r11.norm_sqr()).sqrt();
    CMatrix::from_rows(2, vec![c00, r01 / n1, c10, r11 / n1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::matrix::pauli;

    #[test]
    fn renormalizes_small_drift_and_rejects_large() {
        let s = PureState::from_real(&[1.0 + 1e-7, 0.0]).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert!(matches!(
            PureState::from_real(&[1.1, 0.0]),
            Err(EgfError::Normalization { .. })
        ));
        assert!(matches!(PureState::from_real(&[1.0, 0.0, 0.0]), Err(EgfError::Dimension { .. })));
    }

    #[test]
    fn identity_gate_is_noop() {
        let psi = random_pure_state(3, 11);
        let out = apply_local_unitary(&psi, 1, &CMatrix::identity(2)).unwrap();
        assert_eq!(out, psi);
    }

    #[test]
    fn x_on_last_qubit_flips_000_to_001() {
        let psi = PureState::basis(3, 0).unwrap();
        let out = apply_local_unitary(&psi, 2, &pauli::x()).unwrap();
        assert_eq!(out, PureState::basis(3, 0b001).unwrap());
    }

    #[test]
    fn non_unitary_gate_rejected() {
        let psi = PureState::basis(1, 0).unwrap();
        let bad = CMatrix::from_diagonal(&[1.0, 0.5]);
        assert!(matches!(apply_local_unitary(&psi, 0, &bad), Err(EgfError::NonUnitary { .. })));
    }

    #[test]
    fn random_state_is_deterministic_and_normalized() {
        let a = random_pure_state(3, 42);
        let b = random_pure_state(3, 42);
        assert_eq!(a, b);
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        assert_ne!(a, random_pure_state(3, 43));
    }

    #[test]
    fn random_unitaries_are_unitary() {
        for seed in 0..50 {
            assert!(random_unitary_2x2(seed).unitarity_defect() < 1e-13);
        }
    }

    #[test]
    fn permutation_moves_bits() {
        // |011> with qubits reordered (C, A, B) becomes |101>
        let psi = PureState::basis(3, 0b011).unwrap();
        let out = psi.permute_qubits(&[2, 0, 1]).unwrap();
        assert_eq!(out, PureState::basis(3, 0b101).unwrap());
        assert!(psi.permute_qubits(&[0, 0, 1]).is_err());
    }
}
