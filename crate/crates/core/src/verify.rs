//! Independent checks on computed solutions.
//!
//! Nothing here reuses the solver's recurrence: the limit-quotient derivative
//! works on plain closures, the classical oracle has its own root finder and
//! coefficient loop over powers of `t = (x - x0)^alpha / alpha`, and the
//! Wronskian check compares against the closed-form Abel weight.

use crate::error::{Error, Result};
use crate::frobenius::{equation_terms, ProblemSpec};
use crate::series::{FracSeries, LogSolution, STEP_TOL};

/// Forward difference quotient from the limit definition of the left
/// conformable derivative:
/// `(f(x + eps (x - x0)^(1 - alpha)) - f(x)) / eps`.
pub fn numeric_talpha<F>(f: F, x: f64, x0: f64, alpha: f64, eps: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let t = x - x0;
    if !(t > 0.0) {
        return Err(Error::Domain { x, x0 });
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidProblem(format!("eps must be positive, got {eps}")));
    }
    Ok((f(x + eps * t.powf(1.0 - alpha)) - f(x)) / eps)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualOptions {
    pub abs_tol: f64,
    pub tail_factor: f64,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            tail_factor: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub points: Vec<f64>,
    pub residuals: Vec<f64>,
    pub tail_bounds: Vec<f64>,
    pub pass: bool,
}

impl ResidualReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Absolute left-hand side of the equation for `y` at each point.
pub fn residual(prob: &ProblemSpec, y: &LogSolution, points: &[f64]) -> Result<ResidualReport> {
    residual_with(prob, y, points, ResidualOptions::default())
}

pub fn residual_with(
    prob: &ProblemSpec,
    y: &LogSolution,
    points: &[f64],
    opts: ResidualOptions,
) -> Result<ResidualReport> {
    let alpha = prob.alpha;
    let dy = y.conformable_deriv()?;
    let ddy = dy.conformable_deriv()?;
    let radius = solution_radius(prob, y);

    let mut residuals = Vec::with_capacity(points.len());
    let mut tail_bounds = Vec::with_capacity(points.len());
    let mut pass = true;
    for &x in points {
        let t = x - prob.x0;
        if !(t > 0.0) {
            return Err(Error::Domain { x, x0: prob.x0 });
        }
        let u = t.powf(alpha);
        let lhs = u * u * ddy.eval_at_offset(t)
            + u * prob.p_at(x)? * dy.eval_at_offset(t)
            + prob.q_at(x)? * y.eval_at_offset(t);
        let tail = tail_bound(prob, y, t, radius).ok_or(Error::Domain { x, x0: prob.x0 })?;
        pass &= lhs.abs() <= opts.abs_tol.max(opts.tail_factor * tail);
        residuals.push(lhs.abs());
        tail_bounds.push(tail);
    }
    Ok(ResidualReport {
        points: points.to_vec(),
        residuals,
        tail_bounds,
        pass,
    })
}

fn solution_radius(prob: &ProblemSpec, y: &LogSolution) -> Option<f64> {
    let main = if y.has_log() { &y.log_part } else { &y.power_part };
    let est = match radius_estimate(main) {
        RadiusEstimate::Finite(r) => Some(r),
        RadiusEstimate::Unbounded { .. } => None,
    };
    match (prob.radius_hint, est) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

/// Size estimate of the residual contributed by the discarded terms of `y`
/// at offset `t = x - x0`. `None` when `t` is outside the radius.
fn tail_bound(prob: &ProblemSpec, y: &LogSolution, t: f64, radius: Option<f64>) -> Option<f64> {
    let alpha = prob.alpha;
    let geometric = match radius {
        Some(r) => {
            let ratio = (t / r).powf(alpha);
            if ratio >= 1.0 {
                return None;
            }
            1.0 / (1.0 - ratio)
        }
        None => 1.0,
    };
    // coefficients past the end of p, q do not reach the tail
    let reach = prob.p.len().max(prob.q.len()).max(2);
    let part_tail = |s: &FracSeries, weight: f64| -> f64 {
        let n = s.len();
        let lead = (n.saturating_sub(reach)..n)
            .map(|j| s.coeffs()[j].abs() * t.powf(alpha * (j as f64 + s.base())))
            .fold(0.0, f64::max);
        let k = n as f64;
        let coef: f64 = 1.0
            + prob
                .p
                .iter()
                .map(|p| p.abs() * alpha * (k + 1.0 + s.base().abs()))
                .chain(prob.q.iter().map(|q| q.abs()))
                .sum::<f64>();
        weight * lead * coef
    };
    let mut tail = part_tail(&y.power_part, 1.0);
    if y.has_log() {
        tail = tail.max(part_tail(&y.log_part, y.log_coeff.abs() * (1.0 + t.ln().abs())));
    }
    let reach_factor = t.powf(alpha * reach as f64).max(1.0);
    Some(tail * geometric * reach_factor)
}

/// Maximum relative size of the residual coefficients of `y` through its
/// truncation order, measured against the same computation carried out on
/// absolute values.
pub fn cancellation_error(prob: &ProblemSpec, y: &LogSolution) -> Result<f64> {
    let terms = equation_terms(prob, y)?;
    let abs_prob = ProblemSpec {
        p: prob.p.iter().map(|c| c.abs()).collect(),
        q: prob.q.iter().map(|c| c.abs()).collect(),
        ..prob.clone()
    };
    let y_abs = abs_solution(y);
    let dy_abs = abs_solution(&y_abs.conformable_deriv()?);
    let ddy_abs = abs_solution(&dy_abs.conformable_deriv()?);
    let len = y.log_part.len().max(y.power_part.len());
    let scale = ddy_abs
        .shift(2.0)
        .checked_add(&dy_abs.mul_series(&abs_prob.p_series(len))?.shift(1.0))?
        .checked_add(&y_abs.mul_series(&abs_prob.q_series(len))?)?;
    let [a, b, c] = terms;
    let res = a.checked_add(&b)?.checked_add(&c)?;

    let top = [&y.log_part, &y.power_part]
        .iter()
        .filter(|s| !s.is_empty())
        .filter_map(|s| s.top_step())
        .fold(f64::INFINITY, f64::min);
    let part_err = |r: &FracSeries, s: &FracSeries| -> f64 {
        r.coeffs()
            .iter()
            .enumerate()
            .filter(|(k, _)| r.base() + *k as f64 <= top + STEP_TOL)
            .map(|(k, &v)| {
                let sc = s.coeff_at_step(r.base() + k as f64);
                if v == 0.0 {
                    0.0
                } else if sc == 0.0 {
                    f64::INFINITY
                } else {
                    v.abs() / sc
                }
            })
            .fold(0.0, f64::max)
    };
    let mut err = part_err(&res.power_part, &scale.power_part);
    if y.has_log() {
        err = err.max(part_err(&res.log_part, &scale.log_part));
    }
    Ok(err)
}

fn abs_solution(y: &LogSolution) -> LogSolution {
    LogSolution {
        log_coeff: y.log_coeff.abs(),
        log_part: y.log_part.abs_coeffs(),
        power_part: y.power_part.abs_coeffs(),
    }
}

/// Conformable Wronskian `y1 T y2 - y2 T y1` at `x`.
pub fn wronskian(y1: &LogSolution, y2: &LogSolution, x: f64) -> Result<f64> {
    let (w, _) = wronskian_parts(y1, y2, x)?;
    Ok(w)
}

fn wronskian_parts(y1: &LogSolution, y2: &LogSolution, x: f64) -> Result<(f64, f64)> {
    let a = y1.eval(x)? * y2.conformable_deriv()?.eval(x)?;
    let b = y2.eval(x)? * y1.conformable_deriv()?.eval(x)?;
    Ok((a - b, a.abs() + b.abs()))
}

/// `exp(-I P)` at `x`: `(x - x0)^-p0 exp(-sum_{k>=1} p_k u^k / (k alpha))`.
pub fn abel_weight(prob: &ProblemSpec, x: f64) -> Result<f64> {
    let t = x - prob.x0;
    if !(t > 0.0) {
        return Err(Error::Domain { x, x0: prob.x0 });
    }
    let u = t.powf(prob.alpha);
    let exponent: f64 = prob
        .p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, pk)| pk * u.powi(k as i32) / (k as f64 * prob.alpha))
        .sum();
    Ok(t.powf(-prob.p_coeff(0)) * (-exponent).exp())
}

/// Largest relative deviation of `W(x) / W(x_ref)` from the Abel prediction
/// `exp(-I P)(x) / exp(-I P)(x_ref)` over `points`.
pub fn wronskian_abel(
    prob: &ProblemSpec,
    y1: &LogSolution,
    y2: &LogSolution,
    x_ref: f64,
    points: &[f64],
) -> Result<f64> {
    let (w_ref, scale) = wronskian_parts(y1, y2, x_ref)?;
    if !(w_ref.abs() > 1e-12 * scale) {
        return Err(Error::DegenerateWronskian(w_ref));
    }
    let a_ref = abel_weight(prob, x_ref)?;
    let mut worst: f64 = 0.0;
    for &x in points {
        let predicted = abel_weight(prob, x)? / a_ref;
        let observed = wronskian(y1, y2, x)? / w_ref;
        worst = worst.max((observed - predicted).abs() / predicted.abs());
    }
    Ok(worst)
}

/// Classical series at one indicial root, compared against the conformable
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleBranch {
    pub conformable_root: f64,
    pub classical_root: f64,
    /// `c^_k` of `Y(t) = sum c^_k t^(k + r)`, seeded with `c^_0 = alpha^r`.
    pub classical: Vec<f64>,
    /// `max_k |c^_k - c_k alpha^(k + s)|` relative to the larger magnitude.
    pub coeff_deviation: f64,
    pub root_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub branches: Vec<OracleBranch>,
}

impl OracleReport {
    pub fn max_deviation(&self) -> f64 {
        self.branches
            .iter()
            .map(|b| b.coeff_deviation.max(b.root_deviation))
            .fold(0.0, f64::max)
    }
}

/// Runs a classical Frobenius recurrence on the problem rewritten in
/// `t = (x - x0)^alpha / alpha`, where the conformable derivative is `d/dt`
/// and the equation becomes
/// `t^2 Y'' + t p~(t) Y' + q~(t) Y = 0` with `p~_k = p_k alpha^(k-1)` and
/// `q~_k = q_k alpha^(k-2)`.
///
/// Compares at the larger root always, and at the smaller root when the
/// plain series exists there (non-integer gap).
pub fn substitution_oracle(prob: &ProblemSpec, order: usize) -> Result<OracleReport> {
    let alpha = prob.alpha;
    let pt: Vec<f64> = prob
        .p
        .iter()
        .enumerate()
        .map(|(k, c)| c * alpha.powi(k as i32 - 1))
        .collect();
    let qt: Vec<f64> = prob
        .q
        .iter()
        .enumerate()
        .map(|(k, c)| c * alpha.powi(k as i32 - 2))
        .collect();
    let get = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
    let (p0, q0) = (get(&pt, 0), get(&qt, 0));

    // r^2 + (p0 - 1) r + q0 = 0
    let bq = p0 - 1.0;
    let disc = bq * bq - 4.0 * q0;
    if disc < -1e-12 * (bq * bq + 4.0 * q0.abs()).max(f64::MIN_POSITIVE) {
        return Err(Error::ComplexRoots(disc));
    }
    let sq = disc.max(0.0).sqrt();
    let r_hi = (-bq + sq) / 2.0;
    let r_lo = (-bq - sq) / 2.0;
    let gap = r_hi - r_lo;
    let integral = (gap - gap.round()).abs() < 1e-9;

    let roots = crate::frobenius::indicial(prob.p_coeff(0), prob.q_coeff(0), alpha)?;
    let mut pairs = vec![(roots.s1, r_hi)];
    if !integral {
        pairs.push((roots.s2, r_lo));
    }

    let indicial_t = |rho: f64| rho * (rho - 1.0) + p0 * rho + q0;
    let mut branches = Vec::new();
    for (s, r) in pairs {
        let mut c = vec![alpha.powf(r)];
        for k in 1..=order {
            let mut acc = 0.0;
            for (j, cj) in c.iter().enumerate() {
                let m = k - j;
                acc += cj * (get(&pt, m) * (j as f64 + r) + get(&qt, m));
            }
            c.push(-acc / indicial_t(k as f64 + r));
        }
        let conf = crate::frobenius::recurrence(prob, s, order)?;
        let coeff_deviation = c
            .iter()
            .zip(conf.coeffs())
            .enumerate()
            .map(|(k, (&hat, &ck))| relative_gap(hat, ck * alpha.powf(k as f64 + s)))
            .fold(0.0, f64::max);
        branches.push(OracleBranch {
            conformable_root: s,
            classical_root: r,
            classical: c,
            coeff_deviation,
            root_deviation: relative_gap(s, r),
        });
    }
    Ok(OracleReport { branches })
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusEstimate {
    /// Estimated radius in `x - x0`.
    Finite(f64),
    Unbounded { low_confidence: bool },
}

/// Ratio-test estimate of the convergence radius of `series` in `x - x0`.
///
/// Uses the median of the last quarter of per-step root ratios
/// `|c_i / c_j|^(1 / (j - i))` over consecutive nonzero coefficients. Fewer
/// than 8 nonzero coefficients, or ratios still growing by more than 25%
/// between the last two quarters, give `Unbounded`.
pub fn radius_estimate(series: &FracSeries) -> RadiusEstimate {
    let nz: Vec<(usize, f64)> = series
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(k, c)| (k, c.abs()))
        .collect();
    if nz.len() < 8 {
        return RadiusEstimate::Unbounded {
            low_confidence: true,
        };
    }
    let ratios: Vec<f64> = nz
        .windows(2)
        .map(|w| {
            let steps = (w[1].0 - w[0].0) as f64;
            (w[0].1 / w[1].1).powf(1.0 / steps)
        })
        .collect();
    let quarter = (ratios.len() / 4).max(1);
    let last = median(&ratios[ratios.len() - quarter..]);
    let prev = median(&ratios[ratios.len() - 2 * quarter..ratios.len() - quarter]);
    if last > 1.25 * prev {
        return RadiusEstimate::Unbounded {
            low_confidence: false,
        };
    }
    RadiusEstimate::Finite(last.powf(1.0 / series.alpha()))
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}
