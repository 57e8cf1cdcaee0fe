//! Series solutions of
//!
//! ```text
//! (x - x0)^(2a) T T y + (x - x0)^a p(x) T y + q(x) y = 0
//! ```
//!
//! around a regular alpha-singular point `x0`, where `T` is the left
//! conformable derivative of order `a` and `p`, `q` are given as power series
//! in `u = (x - x0)^a`.
//!
//! The first solution always comes from the coefficient recurrence at the
//! larger indicial root. The second comes from the recurrence at the smaller
//! root when the roots do not differ by an integer, and otherwise from
//! reduction of order through the Abel weight `exp(-I P) / y1^2`, which is
//! where the `ln(x - x0)` term appears.

use std::fmt;

use crate::error::{Error, Result};
use crate::series::{check_alpha, nearest_integer, FracSeries, LogSolution, STEP_TOL};
use crate::wide::{self, WideFloat};

pub const DEFAULT_TERMS: usize = 30;

/// Relative tolerance on `|I0(k + s)|` (scaled by `alpha^2 k^2`) below which
/// the recurrence reports a resonance.
pub const RESONANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub x0: f64,
    pub alpha: f64,
    /// Coefficients of `p` in powers of `u`.
    pub p: Vec<f64>,
    /// Coefficients of `q` in powers of `u`.
    pub q: Vec<f64>,
    /// Truncation order `K` of the returned solutions.
    pub terms: usize,
    /// Convergence radius of `p` and `q`, when known.
    pub radius_hint: Option<f64>,
}

impl ProblemSpec {
    pub fn new(alpha: f64, x0: f64, p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        let prob = Self {
            x0,
            alpha,
            p,
            q,
            terms: DEFAULT_TERMS,
            radius_hint: None,
        };
        prob.validate()?;
        Ok(prob)
    }

    pub fn with_terms(mut self, terms: usize) -> Result<Self> {
        self.terms = terms;
        self.validate()?;
        Ok(self)
    }

    pub fn with_radius_hint(mut self, radius: f64) -> Result<Self> {
        self.radius_hint = Some(radius);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if !self.x0.is_finite() {
            return Err(Error::InvalidProblem(format!("x0 = {} is not finite", self.x0)));
        }
        if let Some(c) = self.p.iter().chain(&self.q).find(|c| !c.is_finite()) {
            return Err(Error::InvalidProblem(format!("non-finite coefficient {c}")));
        }
        if self.terms < 1 {
            return Err(Error::InvalidProblem("terms must be at least 1".into()));
        }
        if let Some(r) = self.radius_hint {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidProblem(format!(
                    "radius_hint must be positive, got {r}"
                )));
            }
        }
        Ok(())
    }

    pub fn p_coeff(&self, m: usize) -> f64 {
        self.p.get(m).copied().unwrap_or(0.0)
    }

    pub fn q_coeff(&self, m: usize) -> f64 {
        self.q.get(m).copied().unwrap_or(0.0)
    }

    /// `p` as a base-0 series with exactly `len` coefficients.
    pub fn p_series(&self, len: usize) -> FracSeries {
        self.coefficient_series(&self.p, len)
    }

    /// `q` as a base-0 series with exactly `len` coefficients.
    pub fn q_series(&self, len: usize) -> FracSeries {
        self.coefficient_series(&self.q, len)
    }

    fn coefficient_series(&self, list: &[f64], len: usize) -> FracSeries {
        let coeffs = (0..len).map(|k| list.get(k).copied().unwrap_or(0.0)).collect();
        FracSeries::empty(self.x0, self.alpha, 0.0).with_coeffs(0.0, coeffs)
    }

    /// `p(x)`, summing the listed coefficients exactly.
    pub fn p_at(&self, x: f64) -> Result<f64> {
        self.p_series(self.p.len()).eval(x)
    }

    /// `q(x)`, summing the listed coefficients exactly.
    pub fn q_at(&self, x: f64) -> Result<f64> {
        self.q_series(self.q.len()).eval(x)
    }

    /// `I0(s) = alpha^2 s (s - 1) + alpha s p0 + q0`.
    pub fn indicial_poly(&self, s: f64) -> f64 {
        let a = self.alpha;
        a * a * s * (s - 1.0) + a * s * self.p_coeff(0) + self.q_coeff(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootCase {
    DistinctNonIntegerGap,
    EqualRoots,
    /// `s1 - s2 = N` for a positive integer `N`.
    IntegerGap(usize),
}

impl RootCase {
    /// Integer gap `N`, zero for equal roots.
    pub fn integer_gap(self) -> Option<usize> {
        match self {
            RootCase::DistinctNonIntegerGap => None,
            RootCase::EqualRoots => Some(0),
            RootCase::IntegerGap(n) => Some(n),
        }
    }
}

impl fmt::Display for RootCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootCase::DistinctNonIntegerGap => f.write_str("distinct-non-integer-gap"),
            RootCase::EqualRoots => f.write_str("equal-roots"),
            RootCase::IntegerGap(n) => write!(f, "integer-gap({n})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicialData {
    pub s1: f64,
    pub s2: f64,
    pub case: RootCase,
    pub discriminant: f64,
}

impl IndicialData {
    pub fn gap(&self) -> f64 {
        self.s1 - self.s2
    }
}

/// Real roots of `I0(s) = alpha^2 s^2 + (alpha p0 - alpha^2) s + q0`.
pub fn indicial(p0: f64, q0: f64, alpha: f64) -> Result<IndicialData> {
    check_alpha(alpha)?;
    let a = alpha * alpha;
    let b = alpha * p0 - a;
    let c = q0;
    let disc = b * b - 4.0 * a * c;
    let scale = (b * b + (4.0 * a * c).abs()).max(f64::MIN_POSITIVE);
    if disc < -1e-12 * scale {
        return Err(Error::ComplexRoots(disc));
    }
    let (mut s1, mut s2) = if disc <= 0.0 {
        let s = -b / (2.0 * a);
        (s, s)
    } else {
        // cancellation-free pair
        let h = -0.5 * (b + b.signum() * disc.sqrt());
        let h = if b == 0.0 { 0.5 * disc.sqrt() } else { h };
        let (r1, r2) = (h / a, c / h);
        (r1.max(r2), r1.min(r2))
    };
    // for a whole-number gap N the roots are (sum +- N) / 2 with
    // sum = 1 - p0 / alpha; rebuilding them this way keeps the gap exact
    let sum = 1.0 - p0 / alpha;
    let case = match nearest_integer(s1 - s2) {
        Some(0) => {
            s1 = 0.5 * sum;
            s2 = s1;
            RootCase::EqualRoots
        }
        Some(n) => {
            s1 = 0.5 * (sum + n as f64);
            s2 = s1 - n as f64;
            RootCase::IntegerGap(n as usize)
        }
        None => RootCase::DistinctNonIntegerGap,
    };
    Ok(IndicialData {
        // + 0.0 turns a -0.0 root into 0.0
        s1: s1 + 0.0,
        s2: s2 + 0.0,
        case,
        discriminant: disc,
    })
}

/// `I_m(s) = p_m alpha s + q_m` for `m >= 1`.
pub fn shifted_poly(m: usize, s: f64, prob: &ProblemSpec) -> f64 {
    prob.p_coeff(m) * prob.alpha * s + prob.q_coeff(m)
}

/// Coefficients `c_0 = 1, c_1, ..., c_K` of the solution with leading
/// exponent `s`:
///
/// `c_k = -(sum_{j<k} c_j I_{k-j}(j + s)) / I0(k + s)`.
pub fn recurrence(prob: &ProblemSpec, s: f64, order: usize) -> Result<FracSeries> {
    let alpha = prob.alpha;
    // I_m vanishes for m past both coefficient lists
    let reach = prob.p.len().max(prob.q.len());
    let mut c = Vec::with_capacity(order + 1);
    c.push(1.0);
    for k in 1..=order {
        let denom = prob.indicial_poly(k as f64 + s);
        let kf = k as f64;
        if denom.abs() < RESONANCE_TOL * alpha * alpha * kf * kf {
            return Err(Error::Resonance(k));
        }
        let lo = k.saturating_sub(reach.saturating_sub(1)).min(k);
        let num: f64 = (lo..k)
            .map(|j| c[j] * shifted_poly(k - j, j as f64 + s, prob))
            .sum();
        c.push(-num / denom + 0.0);
    }
    FracSeries::new(prob.x0, alpha, s, c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusResult {
    pub roots: IndicialData,
    /// Solution at the larger root, `c_0 = 1`.
    pub y1: FracSeries,
    pub y2: LogSolution,
}

/// Two independent series solutions around `prob.x0`.
pub fn solve(prob: &ProblemSpec) -> Result<FrobeniusResult> {
    prob.validate()?;
    let roots = indicial(prob.p_coeff(0), prob.q_coeff(0), prob.alpha)?;
    let y1 = recurrence(prob, roots.s1, prob.terms)?;
    let y2 = match roots.case {
        RootCase::DistinctNonIntegerGap => {
            LogSolution::plain(recurrence(prob, roots.s2, prob.terms)?)
        }
        RootCase::EqualRoots | RootCase::IntegerGap(_) => reduction_of_order(prob, &y1)?,
    };
    Ok(FrobeniusResult { roots, y1, y2 })
}

/// Second solution `y2 = y1 * I( exp(-I P) / y1^2 )` with `P = p / u`.
///
/// `y1` must have `c_0 = 1`. Its base and order fix the result: the parts of
/// the returned value end at the same top exponent as `y1`. The quotient is
/// formed at a higher internal order so that every returned coefficient is
/// exact up to rounding.
///
/// When the quotient has a `u^-1` term its coefficient becomes `log_coeff`
/// and `log_part` is `y1`. For equal roots that coefficient is exactly 1 and
/// the power part starts one step above `y1`; for an integer gap `N` the
/// power part starts at the smaller root with `b_0 = -1 / (N alpha)`.
pub fn reduction_of_order(prob: &ProblemSpec, y1: &FracSeries) -> Result<LogSolution> {
    let order = y1.order().ok_or(Error::ZeroLeadingCoefficient)?;
    if y1.coeffs()[0] != 1.0 {
        return Err(Error::InvalidProblem(format!(
            "first solution must have c_0 = 1, got {}",
            y1.coeffs()[0]
        )));
    }
    let alpha = prob.alpha;
    let s1 = y1.base();
    let p0 = prob.p_coeff(0);

    // exp(-I P) y1^-2 starts at u^(-p0/alpha - 2 s1); -1 - N for an integer gap N
    let lead = -p0 / alpha - 2.0 * s1;
    let lead = nearest_integer(lead).map_or(lead, |n| n as f64);
    let extra = (-1.0 - lead).ceil().max(0.0) as usize;
    let inner = order + extra + 2;

    // check resonance (and fail early) on the cheap path first
    recurrence(prob, s1, inner)?;

    // y1 * I(...) cancels heavily in the logarithmic cases, so the quotient
    // and product run in wide arithmetic until two precisions agree in f64
    let mut prec = WIDE_START_BITS;
    let mut result = quotient_product(prob, s1, lead, inner, prec);
    while prec < WIDE_MAX_BITS {
        prec *= 2;
        let next = quotient_product(prob, s1, lead, inner, prec);
        let settled = agree(&result.0, &next.0) && agree(&[result.1], &[next.1]);
        result = next;
        if settled {
            break;
        }
    }
    let (power_coeffs, log_coeff) = result;

    let mut power = FracSeries::new(prob.x0, alpha, s1 + lead + 1.0, power_coeffs)?;
    if (power.base() - s1).abs() < STEP_TOL && power.coeffs().first() == Some(&0.0) {
        // equal roots: the u^0 slot of v was the logarithm
        power = power.with_coeffs(s1 + 1.0, power.coeffs()[1..].to_vec());
    }
    let top = s1 + order as f64;
    let keep = ((top - power.base()) + STEP_TOL).floor().max(-1.0) as i64 + 1;
    let power = power.truncate(keep as usize);

    let log_part = if log_coeff == 0.0 {
        FracSeries::empty(prob.x0, alpha, s1)
    } else {
        y1.clone()
    };
    LogSolution::new(log_coeff, log_part, power)
}

const WIDE_START_BITS: u64 = 128;
const WIDE_MAX_BITS: u64 = 4096;

fn agree(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= 4.0 * f64::EPSILON * x.abs().max(y.abs()))
}

/// Coefficients of `y1 * I(exp(-I P) / y1^2)` on the lattice starting at
/// `s1 + lead + 1`, plus the logarithm's coefficient, computed at `prec` bits.
fn quotient_product(
    prob: &ProblemSpec,
    s1: f64,
    lead: f64,
    inner: usize,
    prec: u64,
) -> (Vec<f64>, f64) {
    let w = |v: f64| WideFloat::from_f64(v, prec);
    let alpha = w(prob.alpha);
    let alpha2 = alpha.mul(&alpha);
    let p: Vec<WideFloat> = (0..=inner).map(|m| w(prob.p_coeff(m))).collect();
    let mut q: Vec<WideFloat> = (0..=inner).map(|m| w(prob.q_coeff(m))).collect();
    let reach = prob.p.len().max(prob.q.len());

    // first solution, same recurrence as `recurrence`, at the root itself
    // rather than its f64 rounding when the gap N = -1 - lead is whole
    let s = match nearest_integer(lead) {
        Some(l) if l <= -1 => {
            let n = w((-1 - l) as f64);
            w(1.0).sub(&p[0].div(&alpha)).add(&n).mul(&w(0.5))
        }
        _ => w(s1),
    };
    if nearest_integer(lead).is_some() {
        // an f64 q0 only approximates the resonant value; solve the problem
        // whose indicial roots are exactly s and s - N, which differs from
        // the given one below f64 resolution
        q[0] = alpha2.mul(&s).mul(&s.sub(&w(1.0))).add(&alpha.mul(&s).mul(&p[0])).neg();
    }
    let mut c = vec![w(1.0)];
    for k in 1..=inner {
        let ks = w(k as f64).add(&s);
        let denom = alpha2
            .mul(&ks)
            .mul(&ks.sub(&w(1.0)))
            .add(&alpha.mul(&ks).mul(&p[0]))
            .add(&q[0]);
        let lo = k.saturating_sub(reach.saturating_sub(1)).min(k);
        let mut num = WideFloat::zero(prec);
        for j in lo..k {
            let js = w(j as f64).add(&s);
            let shifted = p[k - j].mul(&alpha).mul(&js).add(&q[k - j]);
            num = num.add(&c[j].mul(&shifted));
        }
        c.push(num.neg().div(&denom));
    }

    // exp(-I P): n e_n = sum_j (-p_j / alpha) e_{n-j}
    let g: Vec<WideFloat> = p.iter().map(|pj| pj.neg().div(&alpha)).collect();
    let mut e = vec![w(1.0)];
    for n in 1..=inner {
        let mut acc = WideFloat::zero(prec);
        for j in 1..=n {
            if !g[j].is_zero() {
                acc = acc.add(&g[j].mul(&e[n - j]));
            }
        }
        e.push(acc.div(&w(n as f64)));
    }

    let inv_sq = wide::reciprocal(&wide::cauchy(&c, &c, prec), prec);
    let integrand = wide::cauchy(&e, &inv_sq, prec);

    let mut log_coeff = WideFloat::zero(prec);
    let v: Vec<WideFloat> = integrand
        .iter()
        .enumerate()
        .map(|(k, wk)| {
            let ex = k as f64 + lead + 1.0;
            if ex.abs() < STEP_TOL {
                log_coeff = wk.clone();
                WideFloat::zero(prec)
            } else {
                wk.div(&w(ex).mul(&alpha))
            }
        })
        .collect();
    let power = wide::cauchy(&c, &v, prec);
    (
        power.iter().map(WideFloat::to_f64).collect(),
        log_coeff.to_f64(),
    )
}

/// Which per-term factor bounds `|I_m(j + s1)| r^(m alpha) / M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundFactor {
    /// `alpha (j + |s1|) + 1`, valid for every `alpha` in (0, 1].
    #[default]
    Certified,
    /// `alpha (j + 1 + |s1|)`, smaller than the certified factor when
    /// `alpha < 1`.
    Printed,
}

impl BoundFactor {
    fn weight(self, alpha: f64, j: usize, abs_s1: f64) -> f64 {
        match self {
            BoundFactor::Certified => alpha * (j as f64 + abs_s1) + 1.0,
            BoundFactor::Printed => alpha * (j as f64 + 1.0 + abs_s1),
        }
    }
}

/// Majorant sequence `C_k` for the coefficients of the first solution.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorantTrace {
    pub r: f64,
    pub m: f64,
    /// Smallest integer with `N - 1 <= |s1 - s2| < N`.
    pub n: usize,
    pub factor: BoundFactor,
    /// `|c_k(s1)|`.
    pub abs_c: Vec<f64>,
    /// `C_k`.
    pub bounds: Vec<f64>,
}

impl MajorantTrace {
    /// `true` when `|c_k| <= C_k` for every computed `k`.
    pub fn dominates(&self) -> bool {
        self.abs_c.iter().zip(&self.bounds).all(|(c, b)| c <= b)
    }

    /// `C_k / C_{k-1}` for `k >= 1` (`None` where `C_{k-1} = 0`).
    pub fn ratios(&self) -> Vec<Option<f64>> {
        self.bounds
            .windows(2)
            .map(|w| (w[0] > 0.0).then(|| w[1] / w[0]))
            .collect()
    }
}

pub fn majorant(
    prob: &ProblemSpec,
    roots: &IndicialData,
    r: f64,
    order: usize,
) -> Result<MajorantTrace> {
    majorant_with_factor(prob, roots, r, order, BoundFactor::Certified)
}

pub fn majorant_with_factor(
    prob: &ProblemSpec,
    roots: &IndicialData,
    r: f64,
    order: usize,
    factor: BoundFactor,
) -> Result<MajorantTrace> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidRadius(r));
    }
    if let Some(rho) = prob.radius_hint {
        if r >= rho {
            return Err(Error::InvalidRadius(r));
        }
    }
    let alpha = prob.alpha;
    let ra = r.powf(alpha);
    let m = prob
        .p
        .iter()
        .chain(&prob.q)
        .enumerate()
        .map(|(i, c)| {
            let j = if i < prob.p.len() { i } else { i - prob.p.len() };
            c.abs() * ra.powi(j as i32)
        })
        .fold(1e-300_f64, f64::max);

    let gap = roots.gap().abs();
    let n = gap.floor() as usize + 1;
    let abs_c: Vec<f64> = recurrence(prob, roots.s1, order)?
        .coeffs()
        .iter()
        .map(|c| c.abs())
        .collect();

    let abs_s1 = roots.s1.abs();
    let mut bounds = Vec::with_capacity(order + 1);
    // running sum of weight_j r^(j alpha) C_j
    let mut acc = 0.0;
    for k in 0..=order {
        let ck = if k < n {
            abs_c[k]
        } else {
            let kf = k as f64;
            m * acc / (ra.powi(k as i32) * alpha * alpha * kf * (kf - gap))
        };
        acc += factor.weight(alpha, k, abs_s1) * ra.powi(k as i32) * ck;
        bounds.push(ck);
    }
    Ok(MajorantTrace {
        r,
        m,
        n,
        factor,
        abs_c,
        bounds,
    })
}

/// The three terms `u^2 T T y`, `u p T y` and `q y` of the equation, as
/// log-aware series.
pub fn equation_terms(prob: &ProblemSpec, y: &LogSolution) -> Result<[LogSolution; 3]> {
    let len = y.log_part.len().max(y.power_part.len());
    let dy = y.conformable_deriv()?;
    let ddy = dy.conformable_deriv()?;
    let second = ddy.shift(2.0);
    let first = dy.mul_series(&prob.p_series(len))?.shift(1.0);
    let zeroth = y.mul_series(&prob.q_series(len))?;
    Ok([second, first, zeroth])
}

/// Left-hand side of the equation applied to `y`, through the truncation
/// order of `y`.
pub fn equation_residual(prob: &ProblemSpec, y: &LogSolution) -> Result<LogSolution> {
    let [a, b, c] = equation_terms(prob, y)?;
    a.checked_add(&b)?.checked_add(&c)
}
