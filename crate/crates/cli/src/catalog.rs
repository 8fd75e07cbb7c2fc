//! Named benchmark states with their expected E_GF.

use std::f64::consts::FRAC_1_SQRT_2;

use egf_core::{PureState, Result};

/// A catalog entry.
#[derive(Debug, Clone)]
pub struct KnownState {
    pub id: String,
    pub expected: f64,
    pub state: PureState,
}

const BASIS_LABELS: [&str; 8] = ["000", "001", "010", "011", "100", "101", "110", "111"];

fn signed_pair(n: usize, i: usize, j: usize, sign: f64) -> Result<PureState> {
    let mut amps = vec![0.0; 1 << n];
    amps[i] = FRAC_1_SQRT_2;
    amps[j] = sign * FRAC_1_SQRT_2;
    PureState::from_real(&amps)
}

fn bell_pairs() -> Result<Vec<(&'static str, PureState)>> {
    Ok(vec![
        ("phi+", signed_pair(2, 0b00, 0b11, 1.0)?),
        ("phi-", signed_pair(2, 0b00, 0b11, -1.0)?),
        ("psi+", signed_pair(2, 0b01, 0b10, 1.0)?),
        ("psi-", signed_pair(2, 0b01, 0b10, -1.0)?),
    ])
}

/// The default single-qubit factor of the extended Bell states, `|0>`.
pub fn default_chi() -> PureState {
    PureState::basis(1, 0).expect("valid basis state")
}

/// Eight GHZ cats, twelve extended Bell states built around `chi`, and the
/// eight computational product states, in that order.
pub fn catalog(chi: &PureState) -> Result<Vec<KnownState>> {
    let mut out = Vec::with_capacity(28);
    for (base, label) in BASIS_LABELS.iter().take(4).enumerate() {
        for (sign, tag) in [(1.0, '+'), (-1.0, '-')] {
            out.push(KnownState {
                id: format!("ghz-{label}{tag}"),
                expected: 1.0,
                state: signed_pair(3, base, 7 - base, sign)?,
            });
        }
    }
    for (name, bell) in bell_pairs()? {
        // A and C entangled around B: build (A, C) ⊗ B, then reorder to A, B, C
        let ac = bell.tensor(chi)?.permute_qubits(&[0, 2, 1])?;
        for (pair, state) in [("ab", bell.tensor(chi)?), ("ac", ac), ("bc", chi.tensor(&bell)?)] {
            out.push(KnownState {
                id: format!("eb-{pair}-{name}"),
                expected: 5.0 / 6.0,
                state,
            });
        }
    }
    for (idx, label) in BASIS_LABELS.iter().enumerate() {
        out.push(KnownState {
            id: format!("prod-{label}"),
            expected: 0.0,
            state: PureState::basis(3, idx)?,
        });
    }
    Ok(out)
}
