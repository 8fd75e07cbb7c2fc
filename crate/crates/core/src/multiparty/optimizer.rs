//! Convex-roof minimization over pure-state decompositions.
//!
//! Every decomposition of a rank-`r` density matrix `rho = sum_j l_j |v_j><v_j|`
//! into `k >= r` pure states has the form
//! `|psi_i> = sum_j U_ij sqrt(l_j) |v_j>` with `U` a `k x r` matrix of
//! orthonormal columns. The search runs a compass (coordinate pattern)
//! descent on the real and imaginary parts of `U`, re-orthonormalizing the
//! columns after each accepted step, from several deterministic starts.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::ensemble::{Ensemble, NEGLIGIBLE_WEIGHT};
use super::{pure_egf, Budget, OptimizerConfig};
use crate::error::{EgfError, Result};
use crate::qlinalg::{DensityMatrix, PureState};

/// Eigenvalues of the input below this are dropped from its support.
pub const RANK_THRESHOLD: f64 = 1e-12;
/// Column norms below this make a mixing matrix unusable.
const COLUMN_COLLAPSE: f64 = 1e-10;

/// Outcome of a convex-roof search. `best_value` is an upper bound on the
/// true minimum.
#[derive(Debug, Clone)]
pub struct OptimizerResult {
    pub best_value: f64,
    pub best_ensemble: Ensemble,
    pub restarts_used: usize,
    /// Objective evaluations summed over all restarts.
    pub iterations: usize,
    /// Whether the winning restart met the step-size criterion within budget.
    pub converged: bool,
    /// Best value after each sweep, one list per restart.
    pub value_history: Vec<Vec<f64>>,
}

impl OptimizerResult {
    /// Final value of each restart, in restart order.
    pub fn restart_values(&self) -> Vec<f64> {
        self.value_history
            .iter()
            .map(|h| *h.last().expect("history holds the starting value"))
            .collect()
    }
}

/// Support of a density matrix: eigenpairs with non-negligible weight.
struct Support {
    n: usize,
    weights: Vec<f64>,
    vectors: Vec<Vec<Complex64>>,
}

impl Support {
    fn of(rho: &DensityMatrix) -> Result<Self> {
        let eig = rho.eigen()?;
        let mut weights = Vec::new();
        let mut vectors = Vec::new();
        for (val, vec) in eig.values.into_iter().zip(eig.vectors) {
            if val > RANK_THRESHOLD {
                weights.push(val);
                vectors.push(vec);
            }
        }
        if weights.is_empty() {
            return Err(EgfError::Degenerate("density matrix with empty support".into()));
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(Support {
            n: rho.n(),
            weights,
            vectors,
        })
    }

    fn rank(&self) -> usize {
        self.weights.len()
    }

    fn dim(&self) -> usize {
        1 << self.n
    }

    /// Unnormalized decomposition vectors for a `k x r` mixing matrix.
    fn components(&self, mixing: &[Complex64], k: usize) -> Vec<(f64, Vec<Complex64>)> {
        let r = self.rank();
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let mut psi = vec![Complex64::new(0.0, 0.0); self.dim()];
            for j in 0..r {
                let coef = mixing[i * r + j] * self.weights[j].sqrt();
                if coef == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (p, v) in psi.iter_mut().zip(&self.vectors[j]) {
                    *p += coef * v;
                }
            }
            let w: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            out.push((w, psi));
        }
        out
    }

    fn ensemble(&self, mixing: &[Complex64], k: usize) -> Result<Ensemble> {
        let mut comps = Vec::new();
        for (w, psi) in self.components(mixing, k) {
            if w < NEGLIGIBLE_WEIGHT {
                continue;
            }
            comps.push((w, PureState::normalized(psi)?));
        }
        let total: f64 = comps.iter().map(|(w, _)| w).sum();
        comps.iter_mut().for_each(|(w, _)| *w /= total);
        Ensemble::new(comps)
    }

    /// Mixing matrix that reproduces `ens` (exactly, when `ens` decomposes
    /// this matrix), padded with zero rows up to `k`.
    fn mixing_for(&self, ens: &Ensemble, k: usize) -> Vec<Complex64> {
        let r = self.rank();
        let mut u = vec![Complex64::new(0.0, 0.0); k * r];
        for (i, (p, phi)) in ens.iter().enumerate() {
            for j in 0..r {
                let overlap: Complex64 = self.vectors[j]
                    .iter()
                    .zip(phi.amps())
                    .map(|(v, x)| v.conj() * x)
                    .sum();
                u[i * r + j] = overlap * (p / self.weights[j]).sqrt();
            }
        }
        u
    }
}

/// Modified Gram-Schmidt on the `r` columns of a `k x r` row-major matrix.
fn orthonormalize(u: &mut [Complex64], k: usize, r: usize) -> bool {
    for j in 0..r {
        for prev in 0..j {
            let proj: Complex64 = (0..k).map(|i| u[i * r + prev].conj() * u[i * r + j]).sum();
            for i in 0..k {
                let sub = u[i * r + prev] * proj;
                u[i * r + j] -= sub;
            }
        }
        let norm = (0..k).map(|i| u[i * r + j].norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= COLUMN_COLLAPSE {
            return false;
        }
        for i in 0..k {
            u[i * r + j] /= norm;
        }
    }
    true
}

fn to_params(u: &[Complex64]) -> Vec<f64> {
    u.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn from_params(x: &[f64]) -> Vec<Complex64> {
    x.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

struct Objective<'a> {
    support: &'a Support,
    k: usize,
    config: &'a OptimizerConfig,
    budget: &'a Budget,
}

impl Objective<'_> {
    /// Average pure-state E_GF for an orthonormal mixing matrix.
    fn value(&self, mixing: &[Complex64]) -> Result<f64> {
        let mut total = 0.0;
        for (w, psi) in self.support.components(mixing, self.k) {
            if w < NEGLIGIBLE_WEIGHT {
                continue;
            }
            let state = PureState::normalized(psi)?;
            total += w * pure_egf(&state, self.config, self.budget)?;
        }
        Ok(total)
    }

    /// Orthonormalizes raw parameters and evaluates; `None` when a column collapses.
    fn eval(&self, params: &[f64]) -> Result<Option<(f64, Vec<Complex64>)>> {
        let r = self.support.rank();
        let mut u = from_params(params);
        if !orthonormalize(&mut u, self.k, r) {
            return Ok(None);
        }
        Ok(Some((self.value(&u)?, u)))
    }
}

struct RestartOutcome {
    value: f64,
    mixing: Vec<Complex64>,
    evals: usize,
    converged: bool,
    history: Vec<f64>,
}

fn compass_descent(obj: &Objective<'_>, start: Vec<Complex64>) -> Result<RestartOutcome> {
    let cfg = obj.config;
    let Some((mut fx, mut best)) = obj.eval(&to_params(&start))? else {
        return Err(EgfError::Degenerate("starting mixing matrix has dependent columns".into()));
    };
    let mut x = to_params(&best);
    let mut evals = 1;
    let mut step = cfg.initial_step;
    let mut history = vec![fx];
    let mut converged = false;

    'outer: while evals < cfg.max_evals {
        let sweep_start = fx;
        for coord in 0..x.len() {
            for dir in [1.0, -1.0] {
                if evals >= cfg.max_evals {
                    history.push(fx);
                    break 'outer;
                }
                let mut trial = x.clone();
                trial[coord] += dir * step;
                evals += 1;
                if let Some((ft, u)) = obj.eval(&trial)? {
                    if ft < fx {
                        fx = ft;
                        x = to_params(&u);
                        best = u;
                        break;
                    }
                }
            }
        }
        history.push(fx);
        if sweep_start - fx <= cfg.tolerance {
            step *= 0.5;
            if step < cfg.min_step {
                converged = true;
                break;
            }
        }
    }
    Ok(RestartOutcome {
        value: fx,
        mixing: best,
        evals,
        converged,
        history,
    })
}

fn random_mixing(k: usize, r: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k * r)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect()
}

fn identity_mixing(k: usize, r: usize) -> Vec<Complex64> {
    let mut u = vec![Complex64::new(0.0, 0.0); k * r];
    for j in 0..r {
        u[j * r + j] = Complex64::new(1.0, 0.0);
    }
    u
}

pub(crate) fn minimize(
    rho: &DensityMatrix,
    seeds: &[Ensemble],
    config: &OptimizerConfig,
    budget: &Budget,
) -> Result<OptimizerResult> {
    if rho.n() < 2 {
        return Err(EgfError::Dimension {
            expected: "at least 2 qubits".into(),
            found: format!("{} qubit", rho.n()),
        });
    }
    if let Some(s) = seeds.iter().find(|s| s.n() != rho.n()) {
        return Err(EgfError::Dimension {
            expected: format!("{}-qubit seed ensembles", rho.n()),
            found: format!("{}-qubit ensemble", s.n()),
        });
    }
    let support = Support::of(rho)?;
    let r = support.rank();

    if r == 1 {
        let state = PureState::normalized(support.vectors[0].clone())?;
        let value = pure_egf(&state, config, budget)?;
        return Ok(OptimizerResult {
            best_value: value,
            best_ensemble: Ensemble::pure(state),
            restarts_used: 0,
            iterations: 1,
            converged: true,
            value_history: vec![vec![value]],
        });
    }

    let k = seeds
        .iter()
        .map(Ensemble::len)
        .chain([r, config.cardinality_cap.unwrap_or(r * r)])
        .max()
        .unwrap_or(r);
    let mut starts = vec![identity_mixing(k, r)];
    starts.extend(seeds.iter().map(|s| support.mixing_for(s, k)));
    let total = config.restarts.max(starts.len());
    for idx in starts.len()..total {
        let seed = config
            .seed
            .wrapping_mul(0x2545_F491_4F6C_DD1D)
            .wrapping_add(idx as u64);
        starts.push(random_mixing(k, r, seed));
    }

    let objective = Objective {
        support: &support,
        k,
        config,
        budget,
    };
    let outcomes: Vec<RestartOutcome> = starts
        .into_par_iter()
        .map(|start| compass_descent(&objective, start))
        .collect::<Result<_>>()?;

    let (best_idx, _) = outcomes
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, o)| if o.value < bv { (i, o.value) } else { (bi, bv) });
    let iterations: usize = outcomes.iter().map(|o| o.evals).sum();
    budget.charge(iterations as u64)?;

    let best = &outcomes[best_idx];
    let best_ensemble = support.ensemble(&best.mixing, k)?;
    let mut best_value = 0.0;
    for (w, s) in best_ensemble.iter() {
        best_value += w * pure_egf(s, config, budget)?;
    }
    Ok(OptimizerResult {
        best_value,
        best_ensemble,
        restarts_used: outcomes.len(),
        iterations,
        converged: best.converged,
        value_history: outcomes.into_iter().map(|o| o.history).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::random_pure_state;

    #[test]
    fn gram_schmidt_produces_orthonormal_columns() {
        let (k, r) = (4, 2);
        let mut u = random_mixing(k, r, 9);
        assert!(orthonormalize(&mut u, k, r));
        for a in 0..r {
            for b in 0..r {
                let dot: Complex64 = (0..k).map(|i| u[i * r + a].conj() * u[i * r + b]).sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expected).norm() < 1e-14);
            }
        }
        let mut dependent = vec![Complex64::new(1.0, 0.0); 4];
        assert!(!orthonormalize(&mut dependent, 2, 2));
    }

    #[test]
    fn any_mixing_reproduces_the_density_matrix() {
        let ens = Ensemble::new(vec![
            (0.6, random_pure_state(2, 1)),
            (0.4, random_pure_state(2, 2)),
        ])
        .unwrap();
        let rho = ens.average();
        let support = Support::of(&rho).unwrap();
        let (k, r) = (4, support.rank());
        let mut u = random_mixing(k, r, 3);
        orthonormalize(&mut u, k, r);
        let rebuilt = support.ensemble(&u, k).unwrap().average();
        assert!(rebuilt.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn seed_ensemble_round_trips_through_mixing_matrix() {
        let ens = Ensemble::new(vec![
            (0.3, random_pure_state(2, 4)),
            (0.7, random_pure_state(2, 5)),
        ])
        .unwrap();
        let support = Support::of(&ens.average()).unwrap();
        let mut u = support.mixing_for(&ens, 2);
        assert!(orthonormalize(&mut u, 2, support.rank()));
        let back = support.ensemble(&u, 2).unwrap();
        for ((w0, s0), (w1, s1)) in ens.iter().zip(back.iter()) {
            assert!((w0 - w1).abs() < 1e-12);
            assert!((s0.inner(s1).norm() - 1.0).abs() < 1e-12);
        }
    }
}
