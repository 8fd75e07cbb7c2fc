//! Three-qubit pure states.
//!
//! Amplitudes follow `a|000> + b|001> + c|010> + d|011> + e|100> + f|101> +
//! g|110> + h|111>` with qubit A leftmost. [`egf_theorem1`] evaluates the
//! closed form term by term; [`egf_definition1`] recomputes the same measure
//! from reduced density matrices and an eigensolver, which is what the closed
//! form is validated against.

use num_complex::Complex64;

use crate::bipartite::{ef_ensemble, wootters_ef_mixed};
use crate::error::{EgfError, Result};
use crate::multiparty::ensemble::NEGLIGIBLE_WEIGHT;
use crate::multiparty::Ensemble;
use crate::qlinalg::entropy::binary_entropy_clamped;
use crate::qlinalg::{von_neumann_entropy, PureState};

/// Radicands this far outside [0, 1] indicate a bug rather than rounding.
pub const RADICAND_ERROR: f64 = 1e-8;
/// Radicands below this are snapped to zero. The entropy terms are flat
/// there, so the snap moves results by less than 1e-14.
pub const RADICAND_FLOOR: f64 = 1e-14;

/// Two-party subsystem obtained by tracing out the third qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pair {
    AB,
    AC,
    BC,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::AB, Pair::AC, Pair::BC];

    /// Label of the qubit traced out.
    pub fn traced(self) -> usize {
        match self {
            Pair::AB => 2,
            Pair::AC => 1,
            Pair::BC => 0,
        }
    }

    pub fn kept(self) -> [usize; 2] {
        match self {
            Pair::AB => [0, 1],
            Pair::AC => [0, 2],
            Pair::BC => [1, 2],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pair::AB => "ab",
            Pair::AC => "ac",
            Pair::BC => "bc",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Amplitudes `a..h` of `|000>..|111>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripartiteAmplitudes {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub e: Complex64,
    pub f: Complex64,
    pub g: Complex64,
    pub h: Complex64,
}

impl TripartiteAmplitudes {
    pub fn from_state(psi: &PureState) -> Result<Self> {
        if psi.n() != 3 {
            return Err(EgfError::Dimension {
                expected: "3-qubit state".into(),
                found: format!("{}-qubit state", psi.n()),
            });
        }
        let x = psi.amps();
        Ok(TripartiteAmplitudes {
            a: x[0],
            b: x[1],
            c: x[2],
            d: x[3],
            e: x[4],
            f: x[5],
            g: x[6],
            h: x[7],
        })
    }

    pub fn to_array(&self) -> [Complex64; 8] {
        [self.a, self.b, self.c, self.d, self.e, self.f, self.g, self.h]
    }

    pub fn to_state(&self) -> Result<PureState> {
        PureState::new(self.to_array().to_vec())
    }
}

impl TryFrom<&PureState> for TripartiteAmplitudes {
    type Error = EgfError;

    fn try_from(psi: &PureState) -> Result<Self> {
        Self::from_state(psi)
    }
}

/// Every intermediate quantity of the three-qubit closed form. Arrays over
/// pairs are ordered AB, AC, BC; arrays over single qubits A, B, C.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TripartiteReport {
    /// `p[pair][i]`: weight of the i-th conditional branch.
    pub p: [[f64; 2]; 3],
    /// `xi_pair[pair][i]`: polarization norm of the i-th branch.
    pub xi_pair: [[f64; 2]; 3],
    /// Smaller nonzero eigenvalue of each reduced pair.
    pub lambda: [f64; 3],
    pub xi_single: [f64; 3],
    /// `sum_i p_i H((1 - xi_i)/2)` per pair.
    pub ef_pair: [f64; 3],
    /// `H(lambda)` per pair.
    pub s_pair: [f64; 3],
    /// `H((1 - xi_X)/2)` per qubit.
    pub s_single: [f64; 3],
    pub egf: f64,
}

impl TripartiteReport {
    /// Flattened `(name, value)` view used for diagnostics and CSV columns.
    pub fn fields(&self) -> Vec<(String, f64)> {
        let mut out = Vec::with_capacity(28);
        for pair in Pair::ALL {
            for i in 0..2 {
                out.push((format!("p_{}{}", pair.name(), i + 1), self.p[pair.index()][i]));
            }
        }
        for pair in Pair::ALL {
            for i in 0..2 {
                out.push((format!("xi_{}{}", pair.name(), i + 1), self.xi_pair[pair.index()][i]));
            }
        }
        for pair in Pair::ALL {
            out.push((format!("lambda_{}", pair.name()), self.lambda[pair.index()]));
        }
        for (q, name) in ["a", "b", "c"].iter().enumerate() {
            out.push((format!("xi_{name}"), self.xi_single[q]));
        }
        for pair in Pair::ALL {
            out.push((format!("ef_{}", pair.name()), self.ef_pair[pair.index()]));
        }
        for pair in Pair::ALL {
            out.push((format!("s_{}", pair.name()), self.s_pair[pair.index()]));
        }
        for (q, name) in ["a", "b", "c"].iter().enumerate() {
            out.push((format!("s_{name}"), self.s_single[q]));
        }
        out.push(("egf".into(), self.egf));
        out
    }

    /// Names of [`TripartiteReport::fields`], in the same order.
    pub fn field_names() -> Vec<String> {
        Self::default().fields().into_iter().map(|(name, _)| name).collect()
    }
}

/// A quantity of the form `(1 ± sqrt(1 - 4D))/2` kept in a numerically
/// stable shape.
#[derive(Debug, Clone, Copy)]
struct TwoLevel {
    /// `sqrt(1 - 4D)`.
    xi: f64,
    /// `(1 - xi)/2`, computed as `2D/(1 + xi)`.
    lower: f64,
}

fn two_level(det: f64, what: &str) -> Result<TwoLevel> {
    let radicand = 1.0 - 4.0 * det;
    if !(-RADICAND_ERROR..=1.0 + RADICAND_ERROR).contains(&radicand) || !radicand.is_finite() {
        return Err(EgfError::InternalConsistency(format!(
            "radicand {radicand:e} for {what} outside [0, 1]"
        )));
    }
    if radicand < RADICAND_FLOOR {
        return Ok(TwoLevel { xi: 0.0, lower: 0.5 });
    }
    let radicand = radicand.min(1.0);
    let det = det.clamp(0.0, 0.25);
    let xi = radicand.sqrt();
    Ok(TwoLevel {
        xi,
        lower: (2.0 * det / (1.0 + xi)).min(0.5),
    })
}

fn abs2(z: Complex64) -> f64 {
    z.norm_sqr()
}

/// Branch weights `p^(1)` and `p^(2)` for AB, AC and BC.
///
/// `p^(2)` equals `1 - p^(1)` for a normalized state but is summed from its
/// own four amplitudes, so that a tiny second branch keeps full relative
/// precision when it later divides the branch minor.
pub fn pair_weights(amps: &TripartiteAmplitudes) -> [[f64; 2]; 3] {
    let &TripartiteAmplitudes { a, b, c, d, e, f, g, h } = amps;
    let n = abs2;
    [
        [n(a) + n(c) + n(e) + n(g), n(b) + n(d) + n(f) + n(h)],
        [n(a) + n(b) + n(e) + n(f), n(c) + n(d) + n(g) + n(h)],
        [n(a) + n(b) + n(c) + n(d), n(e) + n(f) + n(g) + n(h)],
    ]
}

/// The 2x2 minors `(m^(1), m^(2))` whose moduli set the branch concurrences.
fn pair_minors(amps: &TripartiteAmplitudes, pair: Pair) -> [Complex64; 2] {
    let &TripartiteAmplitudes { a, b, c, d, e, f, g, h } = amps;
    match pair {
        Pair::AB => [a * g - c * e, b * h - d * f],
        Pair::AC => [a * f - b * e, c * h - d * g],
        Pair::BC => [a * d - b * c, e * h - f * g],
    }
}

fn pair_two_levels(amps: &TripartiteAmplitudes) -> Result<[[Option<TwoLevel>; 2]; 3]> {
    let p = pair_weights(amps);
    let mut out = [[None; 2]; 3];
    for pair in Pair::ALL {
        let minors = pair_minors(amps, pair);
        for i in 0..2 {
            let w = p[pair.index()][i];
            if w < NEGLIGIBLE_WEIGHT {
                continue;
            }
            let det = abs2(minors[i]) / (w * w);
            out[pair.index()][i] = Some(two_level(det, &format!("xi_{}{}", pair.name(), i + 1))?);
        }
    }
    Ok(out)
}

/// Polarization norms `xi^(i)` of the conditional branches; zero for
/// branches of vanishing weight.
pub fn pair_xi(amps: &TripartiteAmplitudes) -> Result<[[f64; 2]; 3]> {
    let levels = pair_two_levels(amps)?;
    Ok(levels.map(|row| row.map(|lv| lv.map_or(0.0, |t| t.xi))))
}

/// The bracketed sums inside the pair-eigenvalue formulas, as printed: the
/// cross terms regroup two of the minors but are algebraically equal to the
/// plain sum of all six squared 2x2 minors of the traced-out split.
fn pair_lambda_dets(amps: &TripartiteAmplitudes) -> [f64; 3] {
    let &TripartiteAmplitudes { a, b, c, d, e, f, g, h } = amps;
    let cross = |x: Complex64, y: Complex64| (x * y.conj() + x.conj() * y).re;

    // |ad-bc|^2 + |af-ah|^2 + |be-bg|^2 + |cf-de|^2 + |ch-dg|^2 + |eh-fg|^2
    //   + (af-bg)(a*h*-b*e*) + (a*f*-b*g*)(ah-be)
    let ab = abs2(a * d - b * c)
        + abs2(a * f - a * h)
        + abs2(b * e - b * g)
        + abs2(c * f - d * e)
        + abs2(c * h - d * g)
        + abs2(e * h - f * g)
        + cross(a * f - b * g, a * h - b * e);

    // |ad-bc|^2 + |ag-ce|^2 + |ah-bg|^2 + |bh-df|^2 + |cf-de|^2 + |eh-fg|^2
    //   + (ah-de)(b*g*-c*f*) + (a*h*-d*e*)(bg-cf)
    let ac = abs2(a * d - b * c)
        + abs2(a * g - c * e)
        + abs2(a * h - b * g)
        + abs2(b * h - d * f)
        + abs2(c * f - d * e)
        + abs2(e * h - f * g)
        + cross(a * h - d * e, b * g - c * f);

    // |af-be|^2 + |ag-ce|^2 + |ah-bg|^2 + |bh-df|^2 + |cf-de|^2 + |ch-dg|^2
    //   + (ah-cf)(b*g*-d*e*) + (a*h*-c*f*)(bg-de)
    let bc = abs2(a * f - b * e)
        + abs2(a * g - c * e)
        + abs2(a * h - b * g)
        + abs2(b * h - d * f)
        + abs2(c * f - d * e)
        + abs2(c * h - d * g)
        + cross(a * h - c * f, b * g - d * e);

    [ab, ac, bc]
}

fn pair_lambda_levels(amps: &TripartiteAmplitudes) -> Result<[TwoLevel; 3]> {
    let dets = pair_lambda_dets(amps);
    Ok([
        two_level(dets[0], "lambda_ab")?,
        two_level(dets[1], "lambda_ac")?,
        two_level(dets[2], "lambda_bc")?,
    ])
}

/// Smaller nonzero eigenvalue `lambda_XY[1] <= 1/2` of each reduced pair;
/// the other is `1 - lambda_XY[1]`.
pub fn pair_lambda(amps: &TripartiteAmplitudes) -> Result<[f64; 3]> {
    Ok(pair_lambda_levels(amps)?.map(|t| t.lower))
}

fn single_dets(amps: &TripartiteAmplitudes) -> [f64; 3] {
    let &TripartiteAmplitudes { a, b, c, d, e, f, g, h } = amps;
    let n = abs2;
    let det_a = (n(a) + n(b) + n(c) + n(d)) * (n(e) + n(f) + n(g) + n(h))
        - ((e * a.conj() + f * b.conj() + g * c.conj() + h * d.conj())
            * (a * e.conj() + b * f.conj() + c * g.conj() + d * h.conj()))
        .re;
    let det_b = (n(a) + n(b) + n(e) + n(f)) * (n(c) + n(d) + n(g) + n(h))
        - ((c * a.conj() + d * b.conj() + g * e.conj() + h * f.conj())
            * (a * c.conj() + b * d.conj() + e * g.conj() + f * h.conj()))
        .re;
    let det_c = (n(a) + n(c) + n(e) + n(g)) * (n(b) + n(d) + n(f) + n(h))
        - ((b * a.conj() + d * c.conj() + f * e.conj() + h * g.conj())
            * (a * b.conj() + c * d.conj() + e * f.conj() + g * h.conj()))
        .re;
    [det_a, det_b, det_c]
}

fn single_levels(amps: &TripartiteAmplitudes) -> Result<[TwoLevel; 3]> {
    let dets = single_dets(amps);
    Ok([
        two_level(dets[0], "xi_a")?,
        two_level(dets[1], "xi_b")?,
        two_level(dets[2], "xi_c")?,
    ])
}

/// Polarization norms of the one-qubit reductions of A, B and C. The square
/// root covers the whole `1 - 4[...]` expression so that the reduced
/// eigenvalues are `(1 ± xi)/2`.
pub fn single_xi(amps: &TripartiteAmplitudes) -> Result<[f64; 3]> {
    Ok(single_levels(amps)?.map(|t| t.xi))
}

/// Closed-form E_GF of a three-qubit pure state with all intermediates.
pub fn egf_theorem1(amps: &TripartiteAmplitudes) -> Result<TripartiteReport> {
    let p = pair_weights(amps);
    let branch = pair_two_levels(amps)?;
    let lambda = pair_lambda_levels(amps)?;
    let single = single_levels(amps)?;

    let mut ef_pair = [0.0; 3];
    for pair in 0..3 {
        for i in 0..2 {
            if let Some(t) = branch[pair][i] {
                ef_pair[pair] += p[pair][i] * binary_entropy_clamped(t.lower);
            }
        }
    }
    let s_pair = lambda.map(|t| binary_entropy_clamped(t.lower));
    let s_single = single.map(|t| binary_entropy_clamped(t.lower));
    let egf = (ef_pair.iter().sum::<f64>() + s_pair.iter().sum::<f64>() + s_single.iter().sum::<f64>()) / 6.0;

    Ok(TripartiteReport {
        p,
        xi_pair: branch.map(|row| row.map(|lv| lv.map_or(0.0, |t| t.xi))),
        lambda: lambda.map(|t| t.lower),
        xi_single: single.map(|t| t.xi),
        ef_pair,
        s_pair,
        s_single,
        egf,
    })
}

/// Closed-form E_GF of a three-qubit [`PureState`].
pub fn egf_pure_3qubit(psi: &PureState) -> Result<f64> {
    Ok(egf_theorem1(&TripartiteAmplitudes::from_state(psi)?)?.egf)
}

/// The decomposition of a reduced pair into the two conditional branches of
/// the traced qubit (`<0|` and `<1|` on it), with branches of negligible
/// weight dropped.
pub fn traced_pair_decomposition(amps: &TripartiteAmplitudes, pair: Pair) -> Result<Ensemble> {
    let psi = amps.to_state()?;
    let branches = psi.conditional_branches(&pair.kept())?;
    let mut components = Vec::with_capacity(2);
    for branch in branches {
        let w: f64 = branch.iter().map(|z| z.norm_sqr()).sum();
        if w < NEGLIGIBLE_WEIGHT {
            continue;
        }
        components.push((w, PureState::normalized(branch)?));
    }
    if components.is_empty() {
        return Err(EgfError::Degenerate(format!(
            "both branches of pair {} vanish",
            pair.name()
        )));
    }
    Ensemble::new(components)
}

/// How the pair entanglement of formation is evaluated on the brute-force path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairEfMode {
    /// Average over the conditional-branch decomposition of the traced qubit.
    #[default]
    BranchDecomposition,
    /// Exact two-qubit convex roof via the concurrence.
    WoottersOracle,
}

/// Per-pair pieces of the brute-force evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Definition1Terms {
    pub ef_pair: [f64; 3],
    pub s_pair: [f64; 3],
    pub s_single: [f64; 3],
}

impl Definition1Terms {
    pub fn egf(&self) -> f64 {
        (self.ef_pair.iter().sum::<f64>() + self.s_pair.iter().sum::<f64>() + self.s_single.iter().sum::<f64>()) / 6.0
    }
}

/// Brute-force terms: partial traces, eigensolver entropies and pair E_F.
pub fn definition1_terms(psi: &PureState, mode: PairEfMode) -> Result<Definition1Terms> {
    let amps = TripartiteAmplitudes::from_state(psi)?;
    let mut ef_pair = [0.0; 3];
    let mut s_pair = [0.0; 3];
    for pair in Pair::ALL {
        let rho = psi.reduced(&pair.kept())?;
        s_pair[pair.index()] = von_neumann_entropy(&rho)?;
        ef_pair[pair.index()] = match mode {
            PairEfMode::BranchDecomposition => ef_ensemble(&traced_pair_decomposition(&amps, pair)?)?,
            PairEfMode::WoottersOracle => wootters_ef_mixed(&rho)?,
        };
    }
    let mut s_single = [0.0; 3];
    for (q, s) in s_single.iter_mut().enumerate() {
        *s = von_neumann_entropy(&psi.reduced(&[q])?)?;
    }
    Ok(Definition1Terms {
        ef_pair,
        s_pair,
        s_single,
    })
}

/// E_GF from the defining combination of six reduced-matrix terms.
pub fn egf_definition1(psi: &PureState, mode: PairEfMode) -> Result<f64> {
    Ok(definition1_terms(psi, mode)?.egf())
}

/// Averaged correlation index of a three-qubit pure state, using the exact
/// pair entanglement of formation. Equals twice the E_GF in oracle mode.
pub fn correlation_index(psi: &PureState) -> Result<f64> {
    let terms = definition1_terms(psi, PairEfMode::WoottersOracle)?;
    let s_total = von_neumann_entropy(&psi.density())?;
    Ok(terms.s_single.iter().sum::<f64>() / 3.0
        + terms.s_pair.iter().sum::<f64>() / 3.0
        + terms.ef_pair.iter().sum::<f64>() / 3.0
        - s_total)
}
