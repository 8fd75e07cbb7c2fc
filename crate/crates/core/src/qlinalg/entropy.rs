use std::f64::consts::LN_2;

use super::density::DensityMatrix;
use crate::error::{EgfError, Result};

/// Inputs this far outside [0, 1] are clamped rather than rejected.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// `H(x) = -x log2 x - (1-x) log2 (1-x)` with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) {
        return Err(EgfError::Domain {
            value: x,
            domain: "[0, 1]",
        });
    }
    Ok(binary_entropy_clamped(x))
}

/// Binary entropy for arguments already known to be (nearly) in [0, 1].
pub(crate) fn binary_entropy_clamped(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    // evaluate on the smaller side so ln_1p keeps full precision
    let p = x.min(1.0 - x);
    if p <= 0.0 {
        return 0.0;
    }
    -(p * p.ln() + (1.0 - p) * (-p).ln_1p()) / LN_2
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// `S(rho) = -Tr(rho log2 rho)` from the clamped spectrum.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(shannon_entropy(rho.spectrum()?.values()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::matrix::CMatrix;

    #[test]
    fn fixed_points() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
    }

    #[test]
    fn quarter_matches_reference() {
        // -0.25 log2 0.25 - 0.75 log2 0.75 = 0.5 + 0.75 log2(4/3), evaluated in 50-digit arithmetic
        let expected = 0.811_278_124_459_132_8;
        assert!((binary_entropy(0.25).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn domain_edges() {
        assert_eq!(binary_entropy(-1e-13).unwrap(), 0.0);
        assert!(matches!(binary_entropy(-1e-6), Err(EgfError::Domain { .. })));
        assert!(matches!(binary_entropy(1.5), Err(EgfError::Domain { .. })));
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn maximally_mixed_entropy_equals_qubit_count() {
        for n in 1..=4 {
            let d = 1usize << n;
            let rho = DensityMatrix::new((0..n).collect(), CMatrix::from_diagonal(&vec![1.0 / d as f64; d])).unwrap();
            assert!((von_neumann_entropy(&rho).unwrap() - n as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn pure_projector_has_zero_entropy() {
        let rho = DensityMatrix::new(vec![0], CMatrix::from_diagonal(&[1.0, 0.0])).unwrap();
        assert_eq!(von_neumann_entropy(&rho).unwrap(), 0.0);
    }
}
