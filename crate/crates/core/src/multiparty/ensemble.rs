use crate::error::{EgfError, Result};
use crate::qlinalg::{CMatrix, DensityMatrix, PureState};

pub const WEIGHT_TOLERANCE: f64 = 1e-9;
/// Components lighter than this contribute nothing to ensemble averages.
pub const NEGLIGIBLE_WEIGHT: f64 = 1e-12;

/// A pure-state decomposition `{(p_i, |psi_i>)}` of some density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    components: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(components: Vec<(f64, PureState)>) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(EgfError::Degenerate("empty ensemble".into()));
        };
        let n = first.n();
        if let Some((_, s)) = components.iter().find(|(_, s)| s.n() != n) {
            return Err(EgfError::Dimension {
                expected: format!("{n}-qubit components"),
                found: format!("{}-qubit component", s.n()),
            });
        }
        if let Some(&(w, _)) = components.iter().find(|(w, _)| *w < 0.0 || !w.is_finite()) {
            return Err(EgfError::WeightNormalization { sum: w });
        }
        let sum: f64 = components.iter().map(|(w, _)| w).sum();
        if (sum - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(EgfError::WeightNormalization { sum });
        }
        Ok(Ensemble { components })
    }

    /// Single-component ensemble.
    pub fn pure(state: PureState) -> Self {
        Ensemble {
            components: vec![(1.0, state)],
        }
    }

    pub fn n(&self) -> usize {
        self.components[0].1.n()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[(f64, PureState)] {
        &self.components
    }

    pub fn iter(&self) -> impl Iterator<Item = &(f64, PureState)> {
        self.components.iter()
    }

    /// Components whose weight is not negligible.
    pub fn significant(&self) -> impl Iterator<Item = &(f64, PureState)> {
        self.components.iter().filter(|(w, _)| *w >= NEGLIGIBLE_WEIGHT)
    }

    /// `sum_i p_i |psi_i><psi_i|`.
    pub fn average(&self) -> DensityMatrix {
        let n = self.n();
        let mut mat = CMatrix::zeros(1 << n);
        for (w, s) in &self.components {
            mat.add_scaled(&CMatrix::projector(s.amps()), *w);
        }
        DensityMatrix::from_parts_unchecked((0..n).collect(), mat)
    }
}

/// The density matrix realized by an ensemble.
pub fn decomposition_average(ens: &Ensemble) -> DensityMatrix {
    ens.average()
}
