//! n-party E_GF for pure states and convex-roof E_GF for mixed states.
//!
//! The pure-state measure averages, over all `2^n - 2` proper nonempty
//! trace-outs, the E_GF of the reduced state plus its von Neumann entropy.
//! A reduced state is generally mixed, so its E_GF is itself a minimum over
//! pure-state decompositions; [`ReductionRoof`] selects how that inner term
//! is evaluated.

pub mod ensemble;
mod optimizer;

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

pub use ensemble::{decomposition_average, Ensemble};
pub use optimizer::{OptimizerResult, RANK_THRESHOLD};

use crate::bipartite::{ef_pure_2qubit, wootters_ef_mixed};
use crate::error::{EgfError, Result};
use crate::qlinalg::{party_name, von_neumann_entropy, DensityMatrix, PureState, MAX_QUBITS};
use crate::tripartite::{egf_definition1, egf_pure_3qubit, PairEfMode};

/// How the E_GF of a mixed reduced state is evaluated inside the n-party sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReductionRoof {
    /// Decompose into the conditional states of the traced qubits'
    /// computational basis. For three qubits this is exactly the closed form
    /// of [`crate::tripartite::egf_theorem1`].
    #[default]
    TracedBasis,
    /// Minimize over all decompositions: the exact concurrence formula for
    /// two-qubit reductions and [`egf_mixed`] for larger ones.
    ConvexRoof,
}

/// Knobs for the convex-roof search and the n-party recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Number of starting points (at least the identity start and every seed).
    pub restarts: usize,
    /// Objective evaluations allowed per restart.
    pub max_evals: usize,
    pub seed: u64,
    /// Number of decomposition components; `None` means `rank^2`.
    pub cardinality_cap: Option<usize>,
    /// A sweep gaining less than this halves the step.
    pub tolerance: f64,
    pub initial_step: f64,
    /// Step size at which a restart counts as converged.
    pub min_step: f64,
    pub roof: ReductionRoof,
    /// Restarts used for optimizations nested inside the n-party sum.
    pub nested_restarts: usize,
    /// Share entropies of complementary reductions of a pure state.
    pub memoize: bool,
    /// Cap on total objective evaluations for one top-level call.
    pub eval_budget: Option<u64>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 32,
            max_evals: 2000,
            seed: 0,
            cardinality_cap: None,
            tolerance: 1e-8,
            initial_step: 0.25,
            min_step: 1e-7,
            roof: ReductionRoof::TracedBasis,
            nested_restarts: 8,
            memoize: true,
            eval_budget: None,
        }
    }
}

impl OptimizerConfig {
    fn nested(&self) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.nested_restarts,
            ..self.clone()
        }
    }
}

/// Shared evaluation counter for one top-level computation.
#[derive(Debug, Default)]
pub(crate) struct Budget {
    limit: Option<u64>,
    used: AtomicU64,
    nested_runs: AtomicU64,
    nonconverged: AtomicU64,
}

impl Budget {
    fn new(limit: Option<u64>) -> Self {
        Budget {
            limit,
            ..Default::default()
        }
    }

    pub(crate) fn charge(&self, evals: u64) -> Result<()> {
        let used = self.used.fetch_add(evals, Ordering::Relaxed) + evals;
        match self.limit {
            Some(limit) if used > limit => Err(EgfError::BudgetExceeded { budget: limit }),
            _ => Ok(()),
        }
    }
}

/// A proper nonempty subset of the parties, stored as a bit mask with
/// label `q` at bit `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetKey {
    n: u8,
    mask: u16,
}

impl SubsetKey {
    pub fn new(n: usize, labels: &[usize]) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&n) {
            return Err(EgfError::Dimension {
                expected: format!("1..={MAX_QUBITS} parties"),
                found: format!("{n} parties"),
            });
        }
        let mut mask = 0u16;
        for &q in labels {
            if q >= n || mask & (1 << q) != 0 {
                return Err(EgfError::LabelMismatch(format!("bad subset {labels:?} of {n} parties")));
            }
            mask |= 1 << q;
        }
        if mask == 0 || mask.count_ones() as usize == n {
            return Err(EgfError::LabelMismatch(format!(
                "subset {labels:?} is empty or covers all {n} parties"
            )));
        }
        Ok(SubsetKey { n: n as u8, mask })
    }

    pub fn labels(&self) -> Vec<usize> {
        (0..self.n as usize).filter(|q| self.mask & (1 << q) != 0).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn complement(&self) -> SubsetKey {
        SubsetKey {
            n: self.n,
            mask: !self.mask & ((1u16 << self.n) - 1),
        }
    }

    /// The same key for a subset and its complement.
    fn unordered_cut(&self) -> SubsetKey {
        std::cmp::min(*self, self.complement())
    }
}

impl fmt::Display for SubsetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in self.labels() {
            write!(f, "{}", party_name(q))?;
        }
        Ok(())
    }
}

/// All proper nonempty subsets of `n` parties, by cardinality and then
/// lexicographically by label: `2^n - 2` keys in total.
pub fn enumerate_reductions(n: usize) -> Result<Vec<SubsetKey>> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(EgfError::Dimension {
            expected: format!("2..={MAX_QUBITS} parties"),
            found: format!("{n} parties"),
        });
    }
    let mut keys: Vec<(usize, Vec<usize>, SubsetKey)> = (1u16..(1 << n) - 1)
        .map(|mask| {
            let key = SubsetKey { n: n as u8, mask };
            (key.len(), key.labels(), key)
        })
        .collect();
    keys.sort();
    Ok(keys.into_iter().map(|(_, _, k)| k).collect())
}

/// E_GF of a pure state, using closed forms where they exist.
pub(crate) fn pure_egf(psi: &PureState, config: &OptimizerConfig, budget: &Budget) -> Result<f64> {
    budget.charge(1)?;
    match psi.n() {
        1 => Ok(0.0),
        2 => Ok(ef_pure_2qubit(psi)?.ef),
        3 => match config.roof {
            ReductionRoof::TracedBasis => egf_pure_3qubit(psi),
            ReductionRoof::ConvexRoof => egf_definition1(psi, PairEfMode::WoottersOracle),
        },
        _ => Ok(nparty(psi, config, budget)?.value),
    }
}

/// E_GF of a mixed reduced state of dimension at least two qubits.
fn mixed_egf(
    psi: &PureState,
    keep: &[usize],
    config: &OptimizerConfig,
    budget: &Budget,
) -> Result<f64> {
    match config.roof {
        ReductionRoof::TracedBasis => {
            let mut total = 0.0;
            for branch in psi.conditional_branches(keep)? {
                let w: f64 = branch.iter().map(|z| z.norm_sqr()).sum();
                if w < ensemble::NEGLIGIBLE_WEIGHT {
                    continue;
                }
                total += w * pure_egf(&PureState::normalized(branch)?, config, budget)?;
            }
            Ok(total)
        }
        ReductionRoof::ConvexRoof => {
            let rho = psi.reduced(keep)?;
            let rho = relabel(rho);
            if keep.len() == 2 {
                budget.charge(1)?;
                return wootters_ef_mixed(&rho);
            }
            let result = optimizer::minimize(&rho, &[], &config.nested(), budget)?;
            budget.nested_runs.fetch_add(1, Ordering::Relaxed);
            if !result.converged {
                budget.nonconverged.fetch_add(1, Ordering::Relaxed);
            }
            Ok(result.best_value)
        }
    }
}

/// Reduced matrices keep their original labels; the inner problems are
/// posed on a fresh register `0..k`.
fn relabel(rho: DensityMatrix) -> DensityMatrix {
    let n = rho.n();
    let mat = rho.matrix().clone();
    DensityMatrix::from_parts_unchecked((0..n).collect(), mat)
}

/// One term of the n-party sum.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTerm {
    /// Parties traced out.
    pub traced: SubsetKey,
    /// E_GF of the reduced state (0 for a single remaining party).
    pub egf: f64,
    /// Von Neumann entropy of the reduced state.
    pub entropy: f64,
}

/// Breakdown of an n-party pure-state evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct NpartyReport {
    pub value: f64,
    pub terms: Vec<ReductionTerm>,
    /// Mixed-state optimizations run inside the sum.
    pub nested_optimizations: u64,
    /// How many of those stopped on budget rather than on step size.
    pub nonconverged_nests: u64,
    pub evaluations: u64,
}

fn nparty(psi: &PureState, config: &OptimizerConfig, budget: &Budget) -> Result<NpartyReport> {
    let n = psi.n();
    let keys = enumerate_reductions(n)?;
    let mut entropy_cache: HashMap<SubsetKey, f64> = HashMap::new();
    let mut terms = Vec::with_capacity(keys.len());
    let mut sum = 0.0;
    for traced in keys {
        let kept = traced.complement();
        let keep = kept.labels();
        let entropy = if config.memoize {
            let cut = traced.unordered_cut();
            match entropy_cache.get(&cut) {
                Some(&s) => s,
                None => {
                    // S(rho_K) = S(rho_K^c) for pure states: diagonalize the smaller side
                    let side = if kept.len() <= traced.len() { kept } else { traced };
                    let s = von_neumann_entropy(&psi.reduced(&side.labels())?)?;
                    entropy_cache.insert(cut, s);
                    s
                }
            }
        } else {
            von_neumann_entropy(&psi.reduced(&keep)?)?
        };
        let egf = if keep.len() == 1 {
            0.0
        } else {
            mixed_egf(psi, &keep, config, budget)?
        };
        sum += egf + entropy;
        terms.push(ReductionTerm { traced, egf, entropy });
    }
    let value = sum / ((1u64 << n) - 2) as f64;
    Ok(NpartyReport {
        value,
        terms,
        nested_optimizations: budget.nested_runs.load(Ordering::Relaxed),
        nonconverged_nests: budget.nonconverged.load(Ordering::Relaxed),
        evaluations: budget.used.load(Ordering::Relaxed),
    })
}

/// n-party E_GF of a pure state with per-reduction diagnostics.
pub fn egf_pure_nparty_report(psi: &PureState, config: &OptimizerConfig) -> Result<NpartyReport> {
    if psi.n() < 2 {
        return Err(EgfError::Dimension {
            expected: "at least 2 parties".into(),
            found: format!("{} party", psi.n()),
        });
    }
    nparty(psi, config, &Budget::new(config.eval_budget))
}

/// n-party E_GF of a pure state.
pub fn egf_pure_nparty(psi: &PureState, config: &OptimizerConfig) -> Result<f64> {
    Ok(egf_pure_nparty_report(psi, config)?.value)
}

/// E_GF of a pure state of any size: closed forms up to three qubits, the
/// n-party recursion beyond.
pub fn egf_pure(psi: &PureState, config: &OptimizerConfig) -> Result<f64> {
    pure_egf(psi, config, &Budget::new(config.eval_budget))
}

/// Average pure-state E_GF of a fixed decomposition (no minimization).
pub fn ensemble_egf(ens: &Ensemble, config: &OptimizerConfig) -> Result<f64> {
    let budget = Budget::new(config.eval_budget);
    let mut total = 0.0;
    for (w, s) in ens.significant() {
        total += w * pure_egf(s, config, &budget)?;
    }
    Ok(total)
}

/// Convex-roof E_GF of a mixed state: the smallest ensemble average found.
pub fn egf_mixed(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<OptimizerResult> {
    egf_mixed_with_seeds(rho, &[], config)
}

/// Like [`egf_mixed`], additionally starting the search from each of `seeds`.
/// The result never exceeds the average E_GF of any seed that decomposes `rho`.
pub fn egf_mixed_with_seeds(
    rho: &DensityMatrix,
    seeds: &[Ensemble],
    config: &OptimizerConfig,
) -> Result<OptimizerResult> {
    let rho = relabel(rho.clone());
    optimizer::minimize(&rho, seeds, config, &Budget::new(config.eval_budget))
}

/// Convex-roof E_GF of the state an ensemble averages to, using the
/// ensemble itself as one of the starting points.
pub fn egf_mixed_ensemble(ens: &Ensemble, config: &OptimizerConfig) -> Result<OptimizerResult> {
    egf_mixed_with_seeds(&ens.average(), std::slice::from_ref(ens), config)
}
