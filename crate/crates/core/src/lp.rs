//! Truncated linear programs certifying density bounds.
//!
//! The density of a distance-avoiding set is bounded by an infinite pair of
//! dual linear programs: a primal over nonnegative spectral weights `f_k`
//! summing to one with zero mass at the forbidden distances, and a dual over
//! `z_0, …, z_N` whose every degree-`k` constraint
//! `z_0 + Σ_i z_i P_k(cos d_i) ≥ [k = 0]` makes `z_0` an upper bound by weak
//! duality.  This module truncates the primal at a degree cap `K`, solves it
//! with a dense simplex method, and checks dual feasibility far beyond the
//! cap by re-evaluating the polynomials degree by degree.
//!
//! The truncated primal only restricts the feasible set, so its value is a
//! lower estimate of the true relaxation; dual certificates checked here are
//! upper bounds regardless of `K`.  The infinite constraint tail cannot be
//! scanned exhaustively — feasibility reports carry a heuristic
//! `tail_margin` and an honest [`Verdict`].

use crate::error::{Error, Result};
use crate::jacobi::JacobiParams;

/// Reduced-cost threshold for entering-variable selection.
const REDUCED_COST_TOL: f64 = 1e-9;
/// Smallest pivot magnitude accepted in the ratio test and drive-out step.
const PIVOT_TOL: f64 = 1e-9;
/// Phase-I artificial mass below this counts as feasible.
const FEASIBILITY_TOL: f64 = 1e-9;
/// Rebuild the basis inverse from scratch this often to curb drift.
const REFACTOR_PERIOD: usize = 64;
/// Hard cap on simplex pivots per phase.
const ITERATION_LIMIT: usize = 10_000;

/// A degree-`K` truncation of the primal/dual pair for a fixed distance set.
///
/// Stores the evaluated matrix `P_k(cos d_i)` for `0 ≤ k ≤ K` and
/// `1 ≤ i ≤ N` so that both the simplex solve and low-degree feasibility
/// checks read cached values.
#[derive(Debug, Clone)]
pub struct TruncatedLp {
    params: JacobiParams,
    distances: Vec<f64>,
    degree_cap: u32,
    /// Row-major by degree: entry `k * N + (i - 1)` is `P_k(cos d_i)`.
    cosines: Vec<f64>,
}

/// Outcome of a simplex solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SolveStatus {
    /// An optimal basic solution was found; the solution fields are valid.
    Optimal,
    /// The truncated constraints admit no nonnegative solution.
    Infeasible,
    /// The objective is unbounded over the feasible set (cannot happen for
    /// the density LP, whose objective is a probability mass).
    Unbounded,
    /// The pivot limit was exhausted before termination.
    IterationLimit,
}

/// Solution of a truncated primal together with the simplex dual vector.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct LpSolution {
    /// Optimal value of the truncated primal (`NaN` unless `Optimal`).
    pub primal_value: f64,
    /// Nonzero primal weights as `(degree, weight)` pairs, sorted by degree.
    pub primal_f: Vec<(u32, f64)>,
    /// Dual multipliers `(z_0, …, z_N)` from the final basis (empty unless
    /// `Optimal`).
    pub dual_z: Vec<f64>,
    /// Termination status.
    pub status: SolveStatus,
}

/// Verdict of a dual-feasibility scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Verdict {
    /// No violation up to the cap and the tail heuristic is positive.
    Feasible,
    /// Some constraint is violated beyond tolerance.
    Violated,
    /// No violation up to the cap, but the tail heuristic cannot vouch for
    /// the remaining degrees.
    FeasibleUpToCap,
}

/// Result of scanning the dual constraints up to a degree cap.
///
/// The normalization constraint `z_0 + … + z_N ≥ 1` enters the scan as the
/// degree-0 row (its slack is `Σ z − 1`), so `min_slack < -tol` is
/// equivalent to the `Violated` verdict with no side conditions.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FeasibilityReport {
    /// Smallest slack seen over degrees `0 ..= checked_up_to`.
    pub min_slack: f64,
    /// Degree attaining `min_slack` (0 means the normalization row).
    pub argmin_degree: u32,
    /// Last degree scanned.
    pub checked_up_to: u32,
    /// `z_0 - (Σ_i |z_i|) · max |P_k(cos d_i)|` over the last tenth of the
    /// scanned degrees — positive values support (but do not prove)
    /// feasibility of the unscanned tail.
    pub tail_margin: f64,
    /// Overall verdict.
    pub verdict: Verdict,
}

impl TruncatedLp {
    /// Builds the truncation, evaluating and caching `P_k(cos d_i)` for all
    /// degrees up to `degree_cap`.
    ///
    /// Distances must be strictly decreasing and lie in the open interval
    /// `(0, π)`; the list may be empty, in which case the primal is the
    /// degenerate problem with only the mass constraint.
    pub fn build(params: JacobiParams, distances: &[f64], degree_cap: u32) -> Result<Self> {
        for pair in distances.windows(2) {
            if !(pair[1] < pair[0]) {
                return Err(Error::domain(format!(
                    "distances must be strictly decreasing, got {} before {}",
                    pair[0], pair[1]
                )));
            }
        }
        for &d in distances {
            if !d.is_finite() || d <= 0.0 || d >= std::f64::consts::PI {
                return Err(Error::domain(format!(
                    "distance {d} lies outside the open interval (0, pi)"
                )));
            }
        }
        let n = distances.len();
        let rows = degree_cap as usize + 1;
        let mut cosines = vec![0.0; rows * n];
        for (i, &d) in distances.iter().enumerate() {
            let mut sweep = params.sweep(d.cos())?;
            for k in 0..rows {
                cosines[k * n + i] = sweep.next().expect("sweep is infinite");
            }
        }
        Ok(TruncatedLp {
            params,
            distances: distances.to_vec(),
            degree_cap,
            cosines,
        })
    }

    /// Jacobi parameters of the underlying space.
    pub fn params(&self) -> JacobiParams {
        self.params
    }

    /// The forbidden distances, strictly decreasing.
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    /// Truncation degree `K`.
    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    /// Number of distances `N`.
    pub fn num_distances(&self) -> usize {
        self.distances.len()
    }

    /// Cached value `P_k(cos d_i)` with `i` zero-based.
    pub fn cosine(&self, k: u32, i: usize) -> f64 {
        self.cosines[k as usize * self.distances.len() + i]
    }

    /// Entry `(r, j)` of the constraint matrix: row 0 is the mass
    /// constraint, row `r ≥ 1` the zero-average constraint at distance
    /// `d_r`; columns `0 ..= K` are the weights `f_k` and columns beyond
    /// them the phase-I artificials.
    fn matrix_entry(&self, r: usize, j: usize) -> f64 {
        let n_structural = self.degree_cap as usize + 1;
        if j < n_structural {
            if r == 0 {
                1.0
            } else {
                self.cosines[j * self.distances.len() + (r - 1)]
            }
        } else if j - n_structural == r {
            1.0
        } else {
            0.0
        }
    }

    /// Solves the truncated primal: maximize `f_0` subject to `Σ f_k = 1`,
    /// `Σ_k f_k P_k(cos d_i) = 0` for every distance, and `f ≥ 0`.
    ///
    /// Uses a dense revised simplex with Bland's rule (smallest-index
    /// entering and leaving choices), a phase-I artificial start, and
    /// periodic refactorization of the basis inverse.  On success the dual
    /// multipliers of the final basis are returned as `dual_z`; they satisfy
    /// the degree-`k` dual constraints for all `k ≤ K` up to tolerance.
    pub fn solve_primal(&self) -> LpSolution {
        let m = self.distances.len() + 1;
        let n_structural = self.degree_cap as usize + 1;
        let total = n_structural + m;

        let failed = |status: SolveStatus| LpSolution {
            primal_value: f64::NAN,
            primal_f: Vec::new(),
            dual_z: Vec::new(),
            status,
        };

        // Right-hand side: unit mass, zero averages.
        let mut b = vec![0.0; m];
        b[0] = 1.0;

        let mut state = SimplexState {
            basis: (n_structural..total).collect(),
            in_basis: {
                let mut flags = vec![false; total];
                flags[n_structural..].fill(true);
                flags
            },
            b_inv: identity(m),
            x_b: b.clone(),
            b,
            pivots: 0,
        };

        // Phase I: drive the artificial mass to zero.
        let mut cost = vec![0.0; total];
        cost[n_structural..].fill(-1.0);
        match self.run_phase(&mut state, &cost, n_structural) {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => return failed(SolveStatus::Unbounded),
            PhaseEnd::IterationLimit => return failed(SolveStatus::IterationLimit),
        }
        let artificial_mass: f64 = state
            .basis
            .iter()
            .zip(&state.x_b)
            .filter(|(&j, _)| j >= n_structural)
            .map(|(_, &x)| x.max(0.0))
            .sum();
        if artificial_mass > FEASIBILITY_TOL {
            return failed(SolveStatus::Infeasible);
        }
        self.drive_out_artificials(&mut state, n_structural);

        // Phase II: maximize the degree-0 weight.
        let mut cost = vec![0.0; total];
        cost[0] = 1.0;
        match self.run_phase(&mut state, &cost, n_structural) {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => return failed(SolveStatus::Unbounded),
            PhaseEnd::IterationLimit => return failed(SolveStatus::IterationLimit),
        }

        let dual_z = state.dual_multipliers(&cost);
        let mut primal_f: Vec<(u32, f64)> = state
            .basis
            .iter()
            .zip(&state.x_b)
            .filter(|(&j, &x)| j < n_structural && x > 1e-12)
            .map(|(&j, &x)| (j as u32, x))
            .collect();
        primal_f.sort_unstable_by_key(|&(k, _)| k);
        let primal_value = state
            .basis
            .iter()
            .position(|&j| j == 0)
            .map_or(0.0, |r| state.x_b[r].max(0.0));

        LpSolution {
            primal_value,
            primal_f,
            dual_z,
            status: SolveStatus::Optimal,
        }
    }

    /// Runs Bland-rule pivots until no entering column improves `cost`.
    /// Only structural columns (`j < n_structural`) may enter; artificials
    /// start basic and never return once they leave.
    fn run_phase(
        &self,
        state: &mut SimplexState,
        cost: &[f64],
        n_structural: usize,
    ) -> PhaseEnd {
        let m = state.basis.len();
        for _ in 0..ITERATION_LIMIT {
            let y = state.row_prices(cost);
            let mut entering = None;
            for j in 0..n_structural {
                if state.in_basis[j] {
                    continue;
                }
                let mut reduced = cost[j];
                for r in 0..m {
                    reduced -= y[r] * self.matrix_entry(r, j);
                }
                if reduced > REDUCED_COST_TOL {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return PhaseEnd::Optimal;
            };

            let w = state.direction(|r| self.matrix_entry(r, j));
            let mut leaving: Option<(usize, f64)> = None;
            for r in 0..m {
                if w[r] > PIVOT_TOL {
                    let ratio = state.x_b[r].max(0.0) / w[r];
                    let better = match leaving {
                        None => true,
                        Some((best_r, best_ratio)) => {
                            ratio < best_ratio - 1e-12
                                || (ratio < best_ratio + 1e-12
                                    && state.basis[r] < state.basis[best_r])
                        }
                    };
                    if better {
                        leaving = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = leaving else {
                return PhaseEnd::Unbounded;
            };
            state.pivot(r, j, &w);
            if state.pivots % REFACTOR_PERIOD == 0 {
                state.refactor(|r, j| self.matrix_entry(r, j));
            }
        }
        PhaseEnd::IterationLimit
    }

    /// Replaces zero-valued basic artificials by structural columns where a
    /// nonzero pivot exists.  Rows that admit none are linearly dependent;
    /// their artificials stay basic at zero and — having zero direction
    /// components in every structural column — can never change value.
    fn drive_out_artificials(&self, state: &mut SimplexState, n_structural: usize) {
        let m = state.basis.len();
        for r in 0..m {
            if state.basis[r] < n_structural {
                continue;
            }
            for j in 0..n_structural {
                if state.in_basis[j] {
                    continue;
                }
                let w = state.direction(|rr| self.matrix_entry(rr, j));
                if w[r].abs() > PIVOT_TOL {
                    state.pivot(r, j, &w);
                    break;
                }
            }
        }
    }

    /// Scans the dual constraints `z_0 + Σ_i z_i P_k(cos d_i) ≥ [k = 0]`
    /// for all degrees `k ≤ k_verify`, re-evaluating the polynomials
    /// (the scan is independent of the cached truncation and may run far
    /// beyond `degree_cap`).
    ///
    /// The report folds the normalization constraint in as the degree-0 row
    /// and adds the heuristic `tail_margin`; see [`FeasibilityReport`].
    pub fn verify_dual(&self, z: &[f64], k_verify: u32, tol: f64) -> Result<FeasibilityReport> {
        if z.len() != self.distances.len() + 1 {
            return Err(Error::invalid_state(format!(
                "certificate has {} entries but the instance needs {}",
                z.len(),
                self.distances.len() + 1
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
        }
        let mut sweeps = Vec::with_capacity(self.distances.len());
        for &d in &self.distances {
            sweeps.push(self.params.sweep(d.cos())?);
        }
        let tail_start = k_verify - k_verify / 10;
        let mut min_slack = f64::INFINITY;
        let mut argmin_degree = 0;
        let mut tail_max_abs: f64 = 0.0;
        for k in 0..=k_verify {
            let mut slack = z[0];
            let mut row_abs: f64 = 0.0;
            for (i, sweep) in sweeps.iter_mut().enumerate() {
                let p = sweep.next().expect("sweep is infinite");
                slack += z[i + 1] * p;
                row_abs = row_abs.max(p.abs());
            }
            if k == 0 {
                slack -= 1.0;
            }
            if slack < min_slack {
                min_slack = slack;
                argmin_degree = k;
            }
            if k >= tail_start {
                tail_max_abs = tail_max_abs.max(row_abs);
            }
        }
        let certificate_mass: f64 = z[1..].iter().map(|v| v.abs()).sum();
        let tail_margin = z[0] - certificate_mass * tail_max_abs;
        let verdict = if min_slack < -tol {
            Verdict::Violated
        } else if tail_margin > 0.0 {
            Verdict::Feasible
        } else {
            Verdict::FeasibleUpToCap
        };
        Ok(FeasibilityReport {
            min_slack,
            argmin_degree,
            checked_up_to: k_verify,
            tail_margin,
            verdict,
        })
    }
}

/// Difference between the dual objective `z_0` and the primal value of an
/// optimal solve.  Strong duality holds for the finite truncation, so the
/// gap should be zero up to roundoff; callers assert the magnitude.
pub fn weak_duality_gap(solution: &LpSolution) -> Result<f64> {
    if solution.status != SolveStatus::Optimal {
        return Err(Error::invalid_state(format!(
            "duality gap needs an optimal solution, got {:?}",
            solution.status
        )));
    }
    Ok(solution.dual_z[0] - solution.primal_value)
}

enum PhaseEnd {
    Optimal,
    Unbounded,
    IterationLimit,
}

/// Mutable simplex workspace: the current basis, its inverse, and the basic
/// solution, kept in lockstep by `pivot` and `refactor`.
struct SimplexState {
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    b_inv: Vec<Vec<f64>>,
    x_b: Vec<f64>,
    b: Vec<f64>,
    pivots: usize,
}

impl SimplexState {
    /// Simplex multipliers `y = c_B B^{-1}` for the given cost vector.
    fn row_prices(&self, cost: &[f64]) -> Vec<f64> {
        let m = self.basis.len();
        let mut y = vec![0.0; m];
        for r in 0..m {
            let c = cost[self.basis[r]];
            if c != 0.0 {
                for (value, row_entry) in y.iter_mut().zip(&self.b_inv[r]) {
                    *value += c * row_entry;
                }
            }
        }
        y
    }

    /// The direction `B^{-1} A_j` for an entering column given elementwise.
    fn direction(&self, column: impl Fn(usize) -> f64) -> Vec<f64> {
        let m = self.basis.len();
        let col: Vec<f64> = (0..m).map(column).collect();
        self.b_inv
            .iter()
            .map(|row| row.iter().zip(&col).map(|(a, c)| a * c).sum())
            .collect()
    }

    /// Elementary basis change: column `j` enters at row `r`.
    fn pivot(&mut self, r: usize, j: usize, w: &[f64]) {
        let m = self.basis.len();
        let pivot = w[r];
        for value in &mut self.b_inv[r] {
            *value /= pivot;
        }
        self.x_b[r] /= pivot;
        for rr in 0..m {
            if rr == r || w[rr] == 0.0 {
                continue;
            }
            let factor = w[rr];
            let (pivot_row, other_row) = if rr < r {
                let (head, tail) = self.b_inv.split_at_mut(r);
                (&tail[0], &mut head[rr])
            } else {
                let (head, tail) = self.b_inv.split_at_mut(rr);
                (&head[r], &mut tail[0])
            };
            for (value, pivot_entry) in other_row.iter_mut().zip(pivot_row) {
                *value -= factor * pivot_entry;
            }
            self.x_b[rr] -= factor * self.x_b[r];
        }
        self.in_basis[self.basis[r]] = false;
        self.in_basis[j] = true;
        self.basis[r] = j;
        self.pivots += 1;
    }

    /// Rebuilds `B^{-1}` and the basic solution from the basis columns by
    /// Gauss-Jordan elimination with partial pivoting.
    fn refactor(&mut self, entry: impl Fn(usize, usize) -> f64) {
        let m = self.basis.len();
        let mut work: Vec<Vec<f64>> = (0..m)
            .map(|r| {
                let mut row: Vec<f64> = self.basis.iter().map(|&j| entry(r, j)).collect();
                row.extend((0..m).map(|c| if c == r { 1.0 } else { 0.0 }));
                row
            })
            .collect();
        for col in 0..m {
            let pivot_row = (col..m)
                .max_by(|&a, &b| work[a][col].abs().total_cmp(&work[b][col].abs()))
                .expect("nonempty range");
            if work[pivot_row][col].abs() < 1e-14 {
                // Numerically singular basis; keep the incrementally
                // updated inverse rather than replace it with garbage.
                return;
            }
            work.swap(col, pivot_row);
            let pivot = work[col][col];
            for value in &mut work[col] {
                *value /= pivot;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let factor = work[r][col];
                if factor == 0.0 {
                    continue;
                }
                let (pivot_row, other_row) = if r < col {
                    let (head, tail) = work.split_at_mut(col);
                    (&tail[0], &mut head[r])
                } else {
                    let (head, tail) = work.split_at_mut(r);
                    (&head[col], &mut tail[0])
                };
                for (value, pivot_entry) in other_row.iter_mut().zip(pivot_row) {
                    *value -= factor * pivot_entry;
                }
            }
        }
        for r in 0..m {
            self.b_inv[r] = work[r][m..].to_vec();
        }
        self.x_b = (0..m)
            .map(|r| self.b_inv[r].iter().zip(&self.b).map(|(a, b)| a * b).sum())
            .collect();
    }

    /// Dual multipliers of the current basis for the phase-II cost.
    fn dual_multipliers(&self, cost: &[f64]) -> Vec<f64> {
        self.row_prices(cost)
    }
}

fn identity(m: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|r| (0..m).map(|c| if c == r { 1.0 } else { 0.0 }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn legendre() -> JacobiParams {
        JacobiParams::new(0.0, 0.0).unwrap()
    }

    #[test]
    fn truncation_caches_legendre_values_at_half_pi() {
        let lp = TruncatedLp::build(legendre(), &[FRAC_PI_2], 4).unwrap();
        let expected = [1.0, 0.0, -0.5, 0.0, 0.375];
        for (k, want) in expected.iter().enumerate() {
            assert!(
                (lp.cosine(k as u32, 0) - want).abs() < 1e-14,
                "degree {k}: got {}, want {want}",
                lp.cosine(k as u32, 0)
            );
        }
    }

    #[test]
    fn truncation_has_expected_shape() {
        let lp = TruncatedLp::build(legendre(), &[PI / 3.0, PI / 7.0], 50).unwrap();
        assert_eq!(lp.degree_cap(), 50);
        assert_eq!(lp.num_distances(), 2);
        assert_eq!(lp.cosines.len(), 51 * 2);
        for i in 0..2 {
            assert_eq!(lp.cosine(0, i), 1.0);
        }
    }

    #[test]
    fn truncation_rejects_bad_distance_lists() {
        let p = legendre();
        assert!(TruncatedLp::build(p, &[0.5, 0.5], 3).is_err());
        assert!(TruncatedLp::build(p, &[0.5, 0.7], 3).is_err());
        assert!(TruncatedLp::build(p, &[PI], 3).is_err());
        assert!(TruncatedLp::build(p, &[0.0], 3).is_err());
        assert!(TruncatedLp::build(p, &[-0.25], 3).is_err());
        assert!(TruncatedLp::build(p, &[f64::NAN], 3).is_err());
    }

    #[test]
    fn no_distances_puts_all_mass_at_degree_zero() {
        let lp = TruncatedLp::build(legendre(), &[], 2).unwrap();
        let solution = lp.solve_primal();
        assert_eq!(solution.status, SolveStatus::Optimal);
        assert!((solution.primal_value - 1.0).abs() < 1e-12);
        assert_eq!(solution.primal_f.len(), 1);
        assert_eq!(solution.primal_f[0].0, 0);
        assert!((solution.primal_f[0].1 - 1.0).abs() < 1e-12);
        assert!(weak_duality_gap(&solution).unwrap().abs() < 1e-12);
    }

    #[test]
    fn half_pi_at_cap_two_gives_one_third() {
        let lp = TruncatedLp::build(legendre(), &[FRAC_PI_2], 2).unwrap();
        let solution = lp.solve_primal();
        assert_eq!(solution.status, SolveStatus::Optimal);
        assert!((solution.primal_value - 1.0 / 3.0).abs() < 1e-9);
        let f: std::collections::BTreeMap<u32, f64> = solution.primal_f.iter().copied().collect();
        assert!((f[&0] - 1.0 / 3.0).abs() < 1e-9);
        assert!((f[&2] - 2.0 / 3.0).abs() < 1e-9);
        assert!(!f.contains_key(&1));
        assert!(weak_duality_gap(&solution).unwrap().abs() < 1e-9);
        assert!((solution.dual_z[0] - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn half_pi_at_cap_one_is_forced_to_zero() {
        let lp = TruncatedLp::build(legendre(), &[FRAC_PI_2], 1).unwrap();
        let solution = lp.solve_primal();
        assert_eq!(solution.status, SolveStatus::Optimal);
        assert!(solution.primal_value.abs() < 1e-12);
        let f: std::collections::BTreeMap<u32, f64> = solution.primal_f.iter().copied().collect();
        assert!((f[&1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn primal_solution_satisfies_its_constraints() {
        let lp = TruncatedLp::build(legendre(), &[1.1, 0.4], 30).unwrap();
        let solution = lp.solve_primal();
        assert_eq!(solution.status, SolveStatus::Optimal);
        let mass: f64 = solution.primal_f.iter().map(|&(_, w)| w).sum();
        assert!((mass - 1.0).abs() < 1e-9);
        for i in 0..lp.num_distances() {
            let average: f64 = solution
                .primal_f
                .iter()
                .map(|&(k, w)| w * lp.cosine(k, i))
                .sum();
            assert!(average.abs() < 1e-8, "distance {i}: average {average}");
        }
        for &(_, w) in &solution.primal_f {
            assert!(w >= 0.0);
        }
        let gap = weak_duality_gap(&solution).unwrap();
        assert!((-1e-7..=1e-6).contains(&gap), "gap {gap}");
    }

    #[test]
    fn value_is_nondecreasing_in_the_cap() {
        // A larger cap only adds primal columns, so feasibility and the
        // optimal value are both monotone in K (small caps may be
        // infeasible: two zero-average constraints need enough degrees).
        let mut previous: Option<f64> = None;
        for cap in 2..=40 {
            let lp = TruncatedLp::build(legendre(), &[1.1, 0.4], cap).unwrap();
            let solution = lp.solve_primal();
            match solution.status {
                SolveStatus::Optimal => {
                    if let Some(prev) = previous {
                        assert!(
                            solution.primal_value >= prev - 1e-9,
                            "cap {cap}: value {} dropped below {prev}",
                            solution.primal_value
                        );
                    }
                    previous = Some(solution.primal_value);
                }
                SolveStatus::Infeasible => {
                    assert!(previous.is_none(), "cap {cap} lost feasibility");
                }
                other => panic!("cap {cap}: unexpected status {other:?}"),
            }
        }
        assert!(previous.is_some(), "no cap in range was feasible");
    }

    #[test]
    fn infeasible_truncation_is_reported() {
        // f_0 + f_1 = 1 and f_0 + 0.5 f_1 = 0 force f_0 = -1.
        let lp = TruncatedLp::build(legendre(), &[PI / 3.0], 1).unwrap();
        let solution = lp.solve_primal();
        assert_eq!(solution.status, SolveStatus::Infeasible);
        assert!(solution.primal_value.is_nan());
        assert!(matches!(
            weak_duality_gap(&solution),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn constant_certificate_is_feasible() {
        let lp = TruncatedLp::build(legendre(), &[1.0, 0.5], 10).unwrap();
        let report = lp.verify_dual(&[1.0, 0.0, 0.0], 500, 1e-9).unwrap();
        assert_eq!(report.verdict, Verdict::Feasible);
        // The normalization row is tight (sum is exactly one); every
        // degree-k row has slack one.
        assert_eq!(report.argmin_degree, 0);
        assert!(report.min_slack.abs() < 1e-15);
        assert!(report.tail_margin > 0.5);
        assert_eq!(report.checked_up_to, 500);
    }

    #[test]
    fn paper_pair_for_one_distance_is_feasible() {
        let lp = TruncatedLp::build(legendre(), &[0.4], 10).unwrap();
        let report = lp.verify_dual(&[0.5, 1.0], 2000, 1e-9).unwrap();
        assert_eq!(report.verdict, Verdict::Feasible);
        assert!(report.min_slack >= 0.0);
    }

    #[test]
    fn negative_z0_is_violated_at_moderate_degree() {
        let lp = TruncatedLp::build(legendre(), &[PI / 3.0], 10).unwrap();
        let report = lp.verify_dual(&[-0.01, 1.2], 500, 1e-9).unwrap();
        assert_eq!(report.verdict, Verdict::Violated);
        assert!(report.min_slack < -1e-9);
        assert!(report.argmin_degree >= 1);
    }

    #[test]
    fn short_scan_with_slow_decay_cannot_vouch_for_the_tail() {
        let lp = TruncatedLp::build(legendre(), &[0.1], 10).unwrap();
        let report = lp.verify_dual(&[0.001, 1.0], 10, 1e-9).unwrap();
        assert_eq!(report.verdict, Verdict::FeasibleUpToCap);
        assert!(report.min_slack >= 0.0);
        assert!(report.tail_margin < 0.0);
    }

    #[test]
    fn verify_dual_rejects_mismatched_certificates() {
        let lp = TruncatedLp::build(legendre(), &[0.4], 10).unwrap();
        assert!(matches!(
            lp.verify_dual(&[0.5], 100, 1e-9),
            Err(Error::InvalidState(_))
        ));
        assert!(matches!(
            lp.verify_dual(&[0.5, 1.0], 100, 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn dual_certificate_dominates_primal_value() {
        let lp = TruncatedLp::build(legendre(), &[1.2, 0.7, 0.3], 25).unwrap();
        let solution = lp.solve_primal();
        assert_eq!(solution.status, SolveStatus::Optimal);
        let report = lp
            .verify_dual(&solution.dual_z, lp.degree_cap(), 1e-8)
            .unwrap();
        assert!(
            report.min_slack >= -1e-8,
            "simplex duals violate truncated constraints: {report:?}"
        );
        assert!(solution.primal_value <= solution.dual_z[0] + 1e-7);
    }
}
