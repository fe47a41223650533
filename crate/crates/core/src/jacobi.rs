//! Jacobi polynomials normalized so that `P_k(1) = 1`.
//!
//! Everything downstream — the truncated linear programs, the spacing lemma,
//! and the explicit certificates — works with the normalized family
//! `P_k^{(α,β)}(t) = P̂_k^{(α,β)}(t) / binom(k+α, k)`, where `P̂_k` is the
//! classical (standard-normalization) Jacobi polynomial.  Under this scaling
//! the polynomials form the spherical functions of the compact rank-one
//! symmetric spaces: they are `1` at `t = 1`, bounded by `1` in absolute
//! value on `[-1, 1]` whenever `α ≥ β ≥ -1/2`, and converge after the
//! substitution `t = cos(s/k)` to the Bessel profile `Ω_α`.
//!
//! Evaluation runs the classical three-term recurrence.  The one-off
//! [`JacobiParams::eval`] computes the standard value and divides by the
//! binomial factor obtained from log-Gamma, exactly as stated; the sweeping
//! evaluators fold the same factor into the recurrence coefficients
//! (algebraically identical, and better suited to scanning every degree up
//! to a cap).  Consistency of the two routes is pinned by tests.

use crate::bessel::ln_gamma;
use crate::error::{Error, Result};

/// The parameter pair `(α, β)` of a Jacobi family, both `> -1`.
///
/// The geometric catalog only produces `α ≥ β ≥ -1/2`, but the evaluators
/// accept the full classical range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

/// A single evaluated polynomial value tagged with the degree and argument that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyValue {
    /// The degree `k` of the polynomial.
    pub degree: u32,
    /// The evaluation point `t ∈ [-1, 1]`.
    pub argument: f64,
    /// `P_k^{(α,β)}(argument)` in the `P_k(1) = 1` normalization.
    pub value: f64,
}

/// The minimum of `P_k(t)` over all degrees `k` up to a cap, at a fixed `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfimumResult {
    /// The minimizing value; never exceeds `1` (degree zero contributes `1`).
    pub value: f64,
    /// The degree at which the minimum is attained.
    pub attained_degree: u32,
    /// The cap the scan ran to; the true infimum over all degrees may be
    /// lower if the minimizing degree lies beyond it.
    pub degree_cap: u32,
}

/// One step of the classical three-term recurrence in standard
/// normalization, valid for `k ≥ 2` and any `α, β > -1`:
///
/// `2k(k+α+β)(2k+α+β-2) P̂_k =
///    (2k+α+β-1)[(2k+α+β)(2k+α+β-2) t + α²-β²] P̂_{k-1}
///    - 2(k+α-1)(k+β-1)(2k+α+β) P̂_{k-2}`.
#[inline]
fn standard_step(alpha: f64, beta: f64, k: u32, t: f64, cur: f64, prev: f64) -> f64 {
    let kf = k as f64;
    let s = 2.0 * kf + alpha + beta;
    let c1 = 2.0 * kf * (kf + alpha + beta) * (s - 2.0);
    let c2 = (s - 1.0) * (s * (s - 2.0) * t + alpha * alpha - beta * beta);
    let c3 = 2.0 * (kf + alpha - 1.0) * (kf + beta - 1.0) * s;
    (c2 * cur - c3 * prev) / c1
}

/// Infinite iterator over normalized values `P_0(t), P_1(t), P_2(t), …` at a
/// fixed argument, produced by the recurrence with the binomial
/// normalization folded in incrementally.  Memory use is constant, so scans
/// to very high degree (tens of millions) are cheap.
#[derive(Debug, Clone)]
pub struct NormalizedSweep {
    alpha: f64,
    beta: f64,
    t: f64,
    next_degree: u32,
    /// Normalized values at degrees `next_degree - 1` and `next_degree - 2`.
    cur: f64,
    prev: f64,
}

impl Iterator for NormalizedSweep {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let k = self.next_degree;
        let value = match k {
            0 => 1.0,
            1 => {
                ((self.alpha + self.beta + 2.0) * self.t + self.alpha - self.beta)
                    / (2.0 * (self.alpha + 1.0))
            }
            _ => {
                let kf = k as f64;
                let s = 2.0 * kf + self.alpha + self.beta;
                let c1 = 2.0 * kf * (kf + self.alpha + self.beta) * (s - 2.0);
                // Ratios of consecutive binomial factors keep the values in
                // the P_k(1) = 1 scaling without ever forming binom(k+α, k).
                let r1 = kf / (kf + self.alpha);
                let r2 = r1 * (kf - 1.0) / (kf - 1.0 + self.alpha);
                let c2 = (s - 1.0) * (s * (s - 2.0) * self.t + (self.alpha - self.beta) * (self.alpha + self.beta));
                let c3 = 2.0 * (kf + self.alpha - 1.0) * (kf + self.beta - 1.0) * s;
                (c2 * r1 * self.cur - c3 * r2 * self.prev) / c1
            }
        };
        self.prev = self.cur;
        self.cur = value;
        self.next_degree = k + 1;
        Some(value)
    }
}

/// Precomputed normalized-recurrence coefficients for degrees `2..=k_max`,
/// so that a scan over all degrees at one argument costs three
/// multiplications and two additions per degree.  Used by the interval
/// sup-norm sweeps, where the same degree range is evaluated at thousands of
/// grid points.
#[derive(Debug, Clone)]
pub(crate) struct RecurrenceTable {
    alpha: f64,
    beta: f64,
    k_max: u32,
    /// Multiplier of `t · P_{k-1}` for degree `k = 2 + index`.
    t_coef: Vec<f64>,
    /// Constant multiplier of `P_{k-1}`.
    one_coef: Vec<f64>,
    /// Multiplier of `P_{k-2}`.
    prev_coef: Vec<f64>,
}

impl RecurrenceTable {
    pub(crate) fn new(params: JacobiParams, k_max: u32) -> Self {
        let (alpha, beta) = (params.alpha, params.beta);
        let len = (k_max as usize).saturating_sub(1);
        let mut t_coef = Vec::with_capacity(len);
        let mut one_coef = Vec::with_capacity(len);
        let mut prev_coef = Vec::with_capacity(len);
        for k in 2..=k_max {
            let kf = k as f64;
            let s = 2.0 * kf + alpha + beta;
            let c1 = 2.0 * kf * (kf + alpha + beta) * (s - 2.0);
            let r1 = kf / (kf + alpha);
            let r2 = r1 * (kf - 1.0) / (kf - 1.0 + alpha);
            t_coef.push((s - 1.0) * s * (s - 2.0) * r1 / c1);
            one_coef.push((s - 1.0) * (alpha - beta) * (alpha + beta) * r1 / c1);
            prev_coef.push(2.0 * (kf + alpha - 1.0) * (kf + beta - 1.0) * s * r2 / c1);
        }
        RecurrenceTable {
            alpha,
            beta,
            k_max,
            t_coef,
            one_coef,
            prev_coef,
        }
    }

    pub(crate) fn k_max(&self) -> u32 {
        self.k_max
    }

    /// Visits `(k, P_k(t))` for every `k = 0..=k_max` in increasing order.
    pub(crate) fn scan(&self, t: f64, mut visit: impl FnMut(u32, f64)) {
        let mut prev = 1.0;
        visit(0, prev);
        if self.k_max == 0 {
            return;
        }
        let mut cur =
            ((self.alpha + self.beta + 2.0) * t + self.alpha - self.beta) / (2.0 * (self.alpha + 1.0));
        visit(1, cur);
        for (i, ((&a, &b), &c)) in self
            .t_coef
            .iter()
            .zip(&self.one_coef)
            .zip(&self.prev_coef)
            .enumerate()
        {
            let next = (a * t + b) * cur - c * prev;
            prev = cur;
            cur = next;
            visit(i as u32 + 2, cur);
        }
    }
}

impl JacobiParams {
    /// Creates a parameter pair, requiring `α > -1` and `β > -1`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() || alpha <= -1.0 || beta <= -1.0 {
            return Err(Error::domain(format!(
                "Jacobi parameters must be finite and > -1; got α = {alpha}, β = {beta}"
            )));
        }
        Ok(JacobiParams { alpha, beta })
    }

    /// The parameter `α`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The parameter `β`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The parameter pair `(α+1, β+1)`, whose degree-`k-1` member carries
    /// the derivative and the extrema of degree `k`.
    pub fn raised(&self) -> JacobiParams {
        JacobiParams {
            alpha: self.alpha + 1.0,
            beta: self.beta + 1.0,
        }
    }

    fn check_argument(&self, t: f64) -> Result<()> {
        if !t.is_finite() || !(-1.0..=1.0).contains(&t) {
            return Err(Error::domain(format!(
                "evaluation point {t} lies outside [-1, 1]"
            )));
        }
        Ok(())
    }

    /// Evaluates `P_k^{(α,β)}(t)` in the `P_k(1) = 1` normalization.
    ///
    /// Runs the classical recurrence in standard normalization and divides
    /// by `binom(k+α, k) = exp(lnΓ(k+α+1) - lnΓ(α+1) - lnΓ(k+1))`.  The
    /// result is `1` at `t = 1` to machine precision for every degree.
    pub fn eval(&self, k: u32, t: f64) -> Result<f64> {
        self.check_argument(t)?;
        if k == 0 {
            return Ok(1.0);
        }
        let mut prev = 1.0;
        let mut cur = 0.5 * ((self.alpha + self.beta + 2.0) * t + self.alpha - self.beta);
        for j in 2..=k {
            let next = standard_step(self.alpha, self.beta, j, t, cur, prev);
            prev = cur;
            cur = next;
        }
        let kf = k as f64;
        let ln_binom = ln_gamma(kf + self.alpha + 1.0) - ln_gamma(self.alpha + 1.0) - ln_gamma(kf + 1.0);
        Ok(cur * (-ln_binom).exp())
    }

    /// Like [`eval`](Self::eval) but packages the result with its inputs.
    pub fn eval_point(&self, k: u32, t: f64) -> Result<PolyValue> {
        Ok(PolyValue {
            degree: k,
            argument: t,
            value: self.eval(k, t)?,
        })
    }

    /// Derivative `d/dt P_k^{(α,β)}(t)` in the same normalization, via the
    /// identity `P_k'^{(α,β)} = k(k+α+β+1)/(2(α+1)) · P_{k-1}^{(α+1,β+1)}`
    /// (both sides normalized to be `1`-at-`1` families).
    pub fn eval_derivative(&self, k: u32, t: f64) -> Result<f64> {
        self.check_argument(t)?;
        if k == 0 {
            return Ok(0.0);
        }
        let kf = k as f64;
        let scale = kf * (kf + self.alpha + self.beta + 1.0) / (2.0 * (self.alpha + 1.0));
        Ok(scale * self.raised().eval(k - 1, t)?)
    }

    /// An endless degree sweep `P_0(t), P_1(t), …` at a fixed argument.
    pub fn sweep(&self, t: f64) -> Result<NormalizedSweep> {
        self.check_argument(t)?;
        Ok(NormalizedSweep {
            alpha: self.alpha,
            beta: self.beta,
            t,
            next_degree: 0,
            cur: 0.0,
            prev: 0.0,
        })
    }

    /// The largest zero `t_{k,k}` of `P_k^{(α,β)}`, to absolute accuracy
    /// `1e-12`.
    ///
    /// Walks the interlacing chain: the largest zero of degree `j` lies
    /// strictly between the largest zero of degree `j-1` and `1`, and the
    /// polynomial changes sign across it (negative at the left bracket end,
    /// `1` at `t = 1`).  Each degree is resolved by bisection followed by a
    /// few bracket-guarded Newton steps.
    pub fn largest_zero(&self, k: u32) -> Result<f64> {
        if k == 0 {
            return Err(Error::domain(
                "degree-zero polynomial is constant and has no zero".to_string(),
            ));
        }
        let mut zero = (self.beta - self.alpha) / (self.alpha + self.beta + 2.0);
        for j in 2..=k {
            zero = self.next_largest_zero(j, zero)?;
        }
        Ok(zero)
    }

    /// Refines the largest zero of degree `j` from the largest zero of
    /// degree `j-1`.
    fn next_largest_zero(&self, j: u32, prev_zero: f64) -> Result<f64> {
        let mut lo = prev_zero;
        let mut hi = 1.0;
        let f_lo = self.eval(j, lo)?;
        if f_lo >= 0.0 {
            return Err(Error::numeric(format!(
                "interlacing bracket failed at degree {j}: P_{j}({lo}) = {f_lo} is not negative"
            )));
        }
        // Bisection to a modest width, keeping P_j(lo) < 0 < P_j(hi).
        for _ in 0..30 {
            let mid = 0.5 * (lo + hi);
            if self.eval(j, mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // Newton polish inside the bracket; quadratic once close.
        let mut x = 0.5 * (lo + hi);
        for _ in 0..12 {
            let f = self.eval(j, x)?;
            let df = self.eval_derivative(j, x)?;
            if df == 0.0 {
                break;
            }
            let step = f / df;
            let next = x - step;
            if !(lo..=hi).contains(&next) {
                break;
            }
            x = next;
            if step.abs() < 1e-14 {
                return Ok(x);
            }
            if f < 0.0 {
                lo = x.max(lo);
            } else {
                hi = x.min(hi);
            }
        }
        // Fall back to pure bisection for the remaining width.
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if self.eval(j, mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The pointwise infimum `l^{(α,β)}(t) = inf_k P_k(t)` truncated at
    /// `degree_cap`, together with the minimizing degree.
    ///
    /// The scan is an exact minimum over `k = 0..=degree_cap`; the cap is
    /// recorded because the true infimum over all degrees can sit beyond it
    /// when `t` is very close to `1`.
    pub fn l_inf(&self, t: f64, degree_cap: u32) -> Result<InfimumResult> {
        let mut best = f64::INFINITY;
        let mut best_degree = 0;
        let sweep = self.sweep(t)?;
        for (k, value) in sweep.take(degree_cap as usize + 1).enumerate() {
            if value < best {
                best = value;
                best_degree = k as u32;
            }
        }
        Ok(InfimumResult {
            value: best,
            attained_degree: best_degree,
            degree_cap,
        })
    }

    /// The maximum of `|P_k|` over `[a, b]`, estimated on a uniform grid of
    /// `grid_size` cells and sharpened by golden-section search around the
    /// grid argmax.
    ///
    /// The caller chooses `grid_size`; resolving every oscillation of degree
    /// `k` takes a grid comfortably finer than `k` cells (the sweeps in the
    /// spacing pipeline use angle-space grids sized to the top degree).
    pub fn sup_abs_on_interval(&self, k: u32, a: f64, b: f64, grid_size: u32) -> Result<f64> {
        self.check_argument(a)?;
        self.check_argument(b)?;
        if a >= b {
            return Err(Error::domain(format!(
                "interval [{a}, {b}] is empty or reversed"
            )));
        }
        if grid_size == 0 {
            return Err(Error::domain("grid_size must be positive".to_string()));
        }
        let h = (b - a) / grid_size as f64;
        let mut best = 0.0_f64;
        let mut best_idx = 0;
        for i in 0..=grid_size {
            let t = if i == grid_size { b } else { a + h * i as f64 };
            let v = self.eval(k, t)?.abs();
            if v > best {
                best = v;
                best_idx = i;
            }
        }
        // Refine on the two cells flanking the grid argmax.
        let lo = a + h * best_idx.saturating_sub(1) as f64;
        let hi = (a + h * (best_idx + 1) as f64).min(b);
        let refined = self.golden_max_abs(k, lo, hi)?;
        Ok(best.max(refined))
    }

    /// Golden-section maximization of `|P_k|` on `[lo, hi]`.
    fn golden_max_abs(&self, k: u32, mut lo: f64, mut hi: f64) -> Result<f64> {
        const INV_PHI: f64 = 0.618_033_988_749_894_8;
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let mut f1 = self.eval(k, x1)?.abs();
        let mut f2 = self.eval(k, x2)?.abs();
        for _ in 0..60 {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + INV_PHI * (hi - lo);
                f2 = self.eval(k, x2)?.abs();
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - INV_PHI * (hi - lo);
                f1 = self.eval(k, x1)?.abs();
            }
            if hi - lo < 1e-13 {
                break;
            }
        }
        Ok(f1.max(f2))
    }
}
