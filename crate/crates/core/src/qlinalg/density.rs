use super::eigen::{hermitian_eigen, HermitianEigen, HERMITIAN_TOLERANCE};
use super::matrix::CMatrix;
use crate::error::{EgfError, Result};

pub const TRACE_TOLERANCE: f64 = 1e-9;
/// Eigenvalues within this distance outside [0, 1] are clamped; larger
/// violations are errors.
pub const SPECTRUM_CLAMP: f64 = 1e-10;

/// Splits basis indices of an `n`-qubit register into kept and traced parts.
/// Position 0 is the most significant bit.
#[derive(Debug, Clone)]
pub(crate) struct QubitLayout {
    n: usize,
    kept: Vec<usize>,
    traced: Vec<usize>,
}

impl QubitLayout {
    pub(crate) fn new(n: usize, keep: &[usize]) -> Result<Self> {
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.len() != keep.len() || kept.iter().any(|&q| q >= n) || kept.is_empty() {
            return Err(EgfError::LabelMismatch(format!(
                "cannot keep positions {keep:?} of a {n}-qubit register"
            )));
        }
        let traced = (0..n).filter(|q| !kept.contains(q)).collect();
        Ok(QubitLayout { n, kept, traced })
    }

    pub(crate) fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub(crate) fn kept_dim(&self) -> usize {
        1 << self.kept.len()
    }

    pub(crate) fn traced_dim(&self) -> usize {
        1 << self.traced.len()
    }

    fn gather(&self, idx: usize, positions: &[usize]) -> usize {
        positions
            .iter()
            .fold(0, |acc, &q| (acc << 1) | ((idx >> (self.n - 1 - q)) & 1))
    }

    pub(crate) fn split(&self, idx: usize) -> (usize, usize) {
        (self.gather(idx, &self.kept), self.gather(idx, &self.traced))
    }
}

/// Hermitian, unit-trace matrix over an ordered list of qubit labels.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    qubits: Vec<usize>,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates shape, label uniqueness, Hermiticity and trace.
    /// Positivity is checked when the spectrum is computed.
    pub fn new(qubits: Vec<usize>, mat: CMatrix) -> Result<Self> {
        if qubits.is_empty() || mat.dim() != 1 << qubits.len() {
            return Err(EgfError::Dimension {
                expected: format!("{0}x{0} matrix for {1} labels", 1usize << qubits.len(), qubits.len()),
                found: format!("{0}x{0}", mat.dim()),
            });
        }
        let mut sorted = qubits.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qubits.len() {
            return Err(EgfError::LabelMismatch(format!("duplicate labels in {qubits:?}")));
        }
        let deviation = mat.hermiticity_defect();
        if deviation > HERMITIAN_TOLERANCE {
            return Err(EgfError::NonHermitian { deviation });
        }
        let trace = mat.trace().re;
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(EgfError::Trace { trace });
        }
        Ok(DensityMatrix { qubits, mat })
    }

    pub(crate) fn from_parts_unchecked(qubits: Vec<usize>, mat: CMatrix) -> Self {
        DensityMatrix { qubits, mat }
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn n(&self) -> usize {
        self.qubits.len()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Traces out the qubits whose labels appear in `drop`.
    pub fn partial_trace(&self, drop: &[usize]) -> Result<DensityMatrix> {
        if drop.is_empty() {
            return Err(EgfError::LabelMismatch("nothing to trace out".into()));
        }
        let mut drop_positions = Vec::with_capacity(drop.len());
        for label in drop {
            match self.qubits.iter().position(|q| q == label) {
                Some(p) if !drop_positions.contains(&p) => drop_positions.push(p),
                Some(_) => {
                    return Err(EgfError::LabelMismatch(format!("label {label} listed twice")))
                }
                None => {
                    return Err(EgfError::LabelMismatch(format!(
                        "label {label} not among {:?}",
                        self.qubits
                    )))
                }
            }
        }
        if drop_positions.len() == self.qubits.len() {
            return Err(EgfError::LabelMismatch("cannot trace out every qubit".into()));
        }
        let keep: Vec<usize> = (0..self.n()).filter(|p| !drop_positions.contains(p)).collect();
        let layout = QubitLayout::new(self.n(), &keep)?;
        let dim = self.mat.dim();
        let mut out = CMatrix::zeros(layout.kept_dim());
        for i in 0..dim {
            let (ki, ti) = layout.split(i);
            for j in 0..dim {
                let (kj, tj) = layout.split(j);
                if ti == tj {
                    out[(ki, kj)] += self.mat[(i, j)];
                }
            }
        }
        let labels = keep.iter().map(|&p| self.qubits[p]).collect();
        Ok(DensityMatrix { qubits: labels, mat: out })
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        hermitian_eigen(&self.mat)
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::from_raw(self.eigen()?.values)
    }

    /// Number of eigenvalues above `threshold`.
    pub fn rank(&self, threshold: f64) -> Result<usize> {
        Ok(self.spectrum()?.values().iter().filter(|&&v| v > threshold).count())
    }
}

/// Descending eigenvalues of a density matrix, clamped to [0, 1] and summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Clamps and renormalizes raw eigenvalues.
    pub fn from_raw(mut values: Vec<f64>) -> Result<Self> {
        for v in values.iter_mut() {
            if *v < -SPECTRUM_CLAMP || *v > 1.0 + SPECTRUM_CLAMP || !v.is_finite() {
                return Err(EgfError::InvalidSpectrum { value: *v });
            }
            *v = v.clamp(0.0, 1.0);
        }
        values.sort_by(|a, b| b.total_cmp(a));
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > TRACE_TOLERANCE {
            return Err(EgfError::Trace { trace: sum });
        }
        if sum != 1.0 {
            values.iter_mut().for_each(|v| *v /= sum);
        }
        Ok(Spectrum { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest eigenvalue.
    pub fn leading(&self) -> f64 {
        self.values[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::state::{random_pure_state, PureState};

    fn ghz() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::from_real(&[s, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, s]).unwrap()
    }

    #[test]
    fn product_state_reduces_to_pure() {
        // |0>_A |1>_B
        let psi = PureState::basis(2, 0b01).unwrap();
        let rho_a = psi.density().partial_trace(&[1]).unwrap();
        assert_eq!(rho_a.qubits(), &[0]);
        assert!(rho_a.matrix().max_abs_diff(&CMatrix::from_diagonal(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn ghz_trace_c_is_classical_mixture() {
        let rho_ab = ghz().density().partial_trace(&[2]).unwrap();
        let expected = CMatrix::from_diagonal(&[0.5, 0.0, 0.0, 0.5]);
        assert!(rho_ab.matrix().max_abs_diff(&expected) < 1e-15);
        let eig = rho_ab.spectrum().unwrap();
        assert!((eig.values()[0] - 0.5).abs() < 1e-15);
        assert!((eig.values()[1] - 0.5).abs() < 1e-15);
        assert!(eig.values()[2].abs() < 1e-15);
    }

    #[test]
    fn direct_reduction_matches_partial_trace() {
        let psi = random_pure_state(4, 3);
        let full = psi.density();
        let via_trace = full.partial_trace(&[1, 3]).unwrap();
        let direct = psi.reduced(&[0, 2]).unwrap();
        assert_eq!(direct.qubits(), via_trace.qubits());
        assert!(direct.matrix().max_abs_diff(via_trace.matrix()) < 1e-14);
    }

    #[test]
    fn partial_trace_composes() {
        let rho = random_pure_state(3, 8).density();
        let stepwise = rho.partial_trace(&[1]).unwrap().partial_trace(&[2]).unwrap();
        let joint = rho.partial_trace(&[1, 2]).unwrap();
        assert!(stepwise.matrix().max_abs_diff(joint.matrix()) < 1e-12);
    }

    #[test]
    fn label_errors() {
        let rho = ghz().density();
        assert!(matches!(rho.partial_trace(&[]), Err(EgfError::LabelMismatch(_))));
        assert!(matches!(rho.partial_trace(&[5]), Err(EgfError::LabelMismatch(_))));
        assert!(matches!(rho.partial_trace(&[0, 1, 2]), Err(EgfError::LabelMismatch(_))));
        let rho_ac = rho.partial_trace(&[1]).unwrap();
        assert_eq!(rho_ac.qubits(), &[0, 2]);
        assert!(matches!(rho_ac.partial_trace(&[1]), Err(EgfError::LabelMismatch(_))));
        assert!(rho_ac.partial_trace(&[2]).is_ok());
    }

    #[test]
    fn spectrum_clamps_tiny_negatives_and_rejects_large() {
        let s = Spectrum::from_raw(vec![1.0 + 5e-11, -5e-11]).unwrap();
        assert_eq!(s.values(), &[1.0, 0.0]);
        assert!(Spectrum::from_raw(vec![1.1, -0.1]).is_err());
    }

    #[test]
    fn constructor_validates() {
        assert!(matches!(
            DensityMatrix::new(vec![0], CMatrix::from_diagonal(&[0.7, 0.7])),
            Err(EgfError::Trace { .. })
        ));
        assert!(matches!(
            DensityMatrix::new(vec![0, 1], CMatrix::from_diagonal(&[0.5, 0.5])),
            Err(EgfError::Dimension { .. })
        ));
        assert!(DensityMatrix::new(vec![3], CMatrix::from_diagonal(&[0.5, 0.5])).is_ok());
    }
}
