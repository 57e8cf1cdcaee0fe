//! Truncated fractional power series in `u = (x - x0)^alpha`.
//!
//! A [`FracSeries`] stores `sum_k c_k u^(k + base)` for `k = 0..=K`. The base
//! is an arbitrary real, so the same type holds solution ansatzes with a
//! non-integer leading exponent, the coefficient functions `p` and `q`, and
//! the intermediate quotients of the reduction-of-order construction.
//!
//! Every value is immutable; operations return new series. Products,
//! reciprocals and exponentials truncate to the shortest valid order instead
//! of failing.

use crate::error::{Error, Result};

/// Two exponents (in alpha-steps) closer than this are treated as equal, and
/// a base offset this close to an integer is treated as integral.
pub const STEP_TOL: f64 = 1e-9;

pub(crate) fn nearest_integer(v: f64) -> Option<i64> {
    let r = v.round();
    if (v - r).abs() < STEP_TOL {
        Some(r as i64)
    } else {
        None
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidProblem(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FracSeries {
    x0: f64,
    alpha: f64,
    base: f64,
    coeffs: Vec<f64>,
}

impl FracSeries {
    pub fn new(x0: f64, alpha: f64, base: f64, coeffs: Vec<f64>) -> Result<Self> {
        check_alpha(alpha)?;
        if !x0.is_finite() || !base.is_finite() {
            return Err(Error::InvalidProblem(format!(
                "non-finite expansion point or base ({x0}, {base})"
            )));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidProblem(format!(
                "non-finite coefficient {bad}"
            )));
        }
        Ok(Self {
            x0,
            alpha,
            base,
            coeffs,
        })
    }

    /// The series with no retained terms. Acts as an exact zero: the identity
    /// for addition and absorbing for multiplication.
    pub fn empty(x0: f64, alpha: f64, base: f64) -> Self {
        Self {
            x0,
            alpha,
            base,
            coeffs: Vec::new(),
        }
    }

    /// `order + 1` zero coefficients starting at `base`.
    pub fn zero(x0: f64, alpha: f64, base: f64, order: usize) -> Self {
        Self {
            x0,
            alpha,
            base,
            coeffs: vec![0.0; order + 1],
        }
    }

    /// Reuses `x0` and `alpha` of `self` for a new coefficient list.
    pub fn with_coeffs(&self, base: f64, coeffs: Vec<f64>) -> Self {
        Self {
            x0: self.x0,
            alpha: self.alpha,
            base,
            coeffs,
        }
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Truncation order `K` (index of the last retained coefficient).
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Exponent, in alpha-steps, of the last retained term.
    pub fn top_step(&self) -> Option<f64> {
        self.order().map(|k| self.base + k as f64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// `c_0 != 0`.
    pub fn is_normalized(&self) -> bool {
        self.coeffs.first().is_some_and(|&c| c != 0.0)
    }

    /// Coefficient of `u^step`, zero when `step` is off the lattice or outside
    /// the retained range.
    pub fn coeff_at_step(&self, step: f64) -> f64 {
        match nearest_integer(step - self.base) {
            Some(k) if k >= 0 && (k as usize) < self.coeffs.len() => self.coeffs[k as usize],
            _ => 0.0,
        }
    }

    pub fn is_compatible(&self, other: &Self) -> bool {
        self.x0 == other.x0 && self.alpha == other.alpha
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.is_compatible(other) {
            Ok(())
        } else {
            Err(Error::IncompatibleSeries(format!(
                "(x0, alpha) = ({}, {}) vs ({}, {})",
                self.x0, self.alpha, other.x0, other.alpha
            )))
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.with_coeffs(self.base, self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Same coefficients at a new base.
    pub fn with_base(mut self, base: f64) -> Self {
        self.base = base;
        self
    }

    /// Multiplication by `u^steps`.
    pub fn shift(&self, steps: f64) -> Self {
        self.with_coeffs(self.base + steps, self.coeffs.clone())
    }

    /// Keeps at most `len` leading coefficients.
    pub fn truncate(&self, len: usize) -> Self {
        let n = len.min(self.coeffs.len());
        self.with_coeffs(self.base, self.coeffs[..n].to_vec())
    }

    /// Drops leading zero coefficients, moving the base up accordingly.
    pub fn trim_leading_zeros(&self) -> Self {
        let skip = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        if skip == self.coeffs.len() {
            return self.clone();
        }
        self.with_coeffs(self.base + skip as f64, self.coeffs[skip..].to_vec())
    }

    /// Coefficientwise absolute value.
    pub fn abs_coeffs(&self) -> Self {
        self.with_coeffs(self.base, self.coeffs.iter().map(|c| c.abs()).collect())
    }

    /// Sum of two series whose bases differ by a whole number of steps.
    ///
    /// The result starts at the lower base and runs to the higher of the two
    /// top exponents; a missing coefficient is read as zero.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if other.is_empty() {
            return Ok(self.clone());
        }
        if self.is_empty() {
            return Ok(other.clone());
        }
        let offset = nearest_integer(other.base - self.base).ok_or_else(|| {
            Error::IncompatibleSeries(format!(
                "bases {} and {} differ by a non-integer number of steps",
                self.base, other.base
            ))
        })?;
        let (lo, hi, off) = if offset >= 0 {
            (self, other, offset as usize)
        } else {
            (other, self, (-offset) as usize)
        };
        let len = lo.coeffs.len().max(off + hi.coeffs.len());
        let mut out = vec![0.0; len];
        for (o, c) in out.iter_mut().zip(&lo.coeffs) {
            *o += c;
        }
        for (o, c) in out[off..].iter_mut().zip(&hi.coeffs) {
            *o += c;
        }
        Ok(lo.with_coeffs(lo.base, out))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(-1.0))
    }

    /// Cauchy product truncated to the shorter operand.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let base = self.base + other.base;
        let len = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![0.0; len];
        for (k, o) in out.iter_mut().enumerate() {
            *o = (0..=k).map(|j| self.coeffs[j] * other.coeffs[k - j]).sum();
        }
        Ok(self.with_coeffs(base, out))
    }

    /// Multiplicative inverse through the same order, base negated.
    pub fn reciprocal(&self) -> Result<Self> {
        let f0 = match self.coeffs.first() {
            Some(&c) if c != 0.0 => c,
            _ => return Err(Error::ZeroLeadingCoefficient),
        };
        let n = self.coeffs.len();
        let mut g = Vec::with_capacity(n);
        g.push(1.0 / f0);
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| self.coeffs[j] * g[k - j]).sum();
            g.push(-s / f0);
        }
        Ok(self.with_coeffs(-self.base, g))
    }

    /// Termwise conformable derivative: `T u^e = e * alpha * u^(e - 1)`.
    pub fn conformable_deriv(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let e = k as f64 + self.base;
                if e.abs() < STEP_TOL {
                    0.0
                } else {
                    e * self.alpha * c
                }
            })
            .collect();
        self.with_coeffs(self.base - 1.0, coeffs)
    }

    /// Termwise conformable antiderivative with zero integration constant.
    ///
    /// The `u^-1` term has no power antiderivative; it is zeroed in the
    /// returned series and its coefficient is returned separately as the
    /// multiplier of `ln(x - x0)`.
    pub fn conformable_antideriv(&self) -> (Self, f64) {
        let mut log_coeff = 0.0;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let e = k as f64 + self.base + 1.0;
                if e.abs() < STEP_TOL {
                    log_coeff = c;
                    0.0
                } else {
                    c / (e * self.alpha)
                }
            })
            .collect();
        (self.with_coeffs(self.base + 1.0, coeffs), log_coeff)
    }

    /// `exp(self)` as a base-0 series with `order + 1` coefficients.
    ///
    /// `self` must carry only strictly positive powers (leading terms below
    /// step 1 may be present but must be exactly zero) and is read as exact:
    /// coefficients past its end count as zero.
    pub fn exp(&self, order: usize) -> Result<Self> {
        // g_n for n = 0..=order, on the integer lattice starting at 0
        let mut g = vec![0.0; order + 1];
        if !self.is_empty() {
            let start = nearest_integer(self.base)
                .ok_or(Error::NonPositiveLeadingPower(self.base))?;
            for (k, &c) in self.coeffs.iter().enumerate() {
                let n = start + k as i64;
                if n < 1 {
                    if c != 0.0 {
                        return Err(Error::NonPositiveLeadingPower(n as f64));
                    }
                    continue;
                }
                if (n as usize) <= order {
                    g[n as usize] = c;
                }
            }
        }
        // T E = (T g) E  =>  n e_n = sum_{j=1..n} j g_j e_{n-j}
        let mut e = vec![0.0; order + 1];
        e[0] = 1.0;
        for n in 1..=order {
            let s: f64 = (1..=n).map(|j| j as f64 * g[j] * e[n - j]).sum();
            e[n] = s / n as f64;
        }
        Ok(self.with_coeffs(0.0, e))
    }

    /// Value at `x > x0`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let t = x - self.x0;
        if !(t > 0.0) {
            return Err(Error::Domain { x, x0: self.x0 });
        }
        Ok(self.eval_at_offset(t))
    }

    pub(crate) fn eval_at_offset(&self, t: f64) -> f64 {
        if self.coeffs.is_empty() {
            return 0.0;
        }
        let u = t.powf(self.alpha);
        let poly = self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c);
        if self.base == 0.0 {
            poly
        } else {
            poly * t.powf(self.alpha * self.base)
        }
    }
}

/// `C * ln(x - x0) * log_part(x) + power_part(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogSolution {
    pub log_coeff: f64,
    pub log_part: FracSeries,
    pub power_part: FracSeries,
}

impl LogSolution {
    pub fn new(log_coeff: f64, log_part: FracSeries, power_part: FracSeries) -> Result<Self> {
        log_part.check_compatible(&power_part)?;
        if !log_coeff.is_finite() {
            return Err(Error::InvalidProblem(format!(
                "non-finite log coefficient {log_coeff}"
            )));
        }
        Ok(Self {
            log_coeff,
            log_part,
            power_part,
        })
    }

    /// A plain series with no logarithmic term.
    pub fn plain(series: FracSeries) -> Self {
        let log_part = FracSeries::empty(series.x0, series.alpha, series.base);
        Self {
            log_coeff: 0.0,
            log_part,
            power_part: series,
        }
    }

    pub fn x0(&self) -> f64 {
        self.power_part.x0
    }

    pub fn alpha(&self) -> f64 {
        self.power_part.alpha
    }

    pub fn has_log(&self) -> bool {
        self.log_coeff != 0.0 && !self.log_part.is_empty()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            log_coeff: self.log_coeff,
            log_part: self.log_part.scale(factor),
            power_part: self.power_part.scale(factor),
        }
    }

    pub fn shift(&self, steps: f64) -> Self {
        Self {
            log_coeff: self.log_coeff,
            log_part: self.log_part.shift(steps),
            power_part: self.power_part.shift(steps),
        }
    }

    /// Product with a plain series.
    pub fn mul_series(&self, h: &FracSeries) -> Result<Self> {
        Ok(Self {
            log_coeff: self.log_coeff,
            log_part: self.log_part.checked_mul(h)?,
            power_part: self.power_part.checked_mul(h)?,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let power_part = self.power_part.checked_add(&other.power_part)?;
        let (log_coeff, log_part) = if !other.has_log() {
            (self.log_coeff, self.log_part.clone())
        } else if !self.has_log() {
            (other.log_coeff, other.log_part.clone())
        } else if self.log_coeff == other.log_coeff {
            (
                self.log_coeff,
                self.log_part.checked_add(&other.log_part)?,
            )
        } else {
            let merged = self
                .log_part
                .scale(self.log_coeff)
                .checked_add(&other.log_part.scale(other.log_coeff))?;
            (1.0, merged)
        };
        Self::new(log_coeff, log_part, power_part)
    }

    /// `T(C ln f + g) = C ln T f + (C u^-1 f + T g)`.
    pub fn conformable_deriv(&self) -> Result<Self> {
        let mut power_part = self.power_part.conformable_deriv();
        if !self.has_log() {
            return Ok(Self {
                log_coeff: self.log_coeff,
                log_part: self.log_part.clone(),
                power_part,
            });
        }
        let from_log = self.log_part.shift(-1.0).scale(self.log_coeff);
        power_part = if self.power_part.is_empty() {
            from_log
        } else {
            power_part.checked_add(&from_log)?
        };
        Ok(Self {
            log_coeff: self.log_coeff,
            log_part: self.log_part.conformable_deriv(),
            power_part,
        })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let t = x - self.x0();
        if !(t > 0.0) {
            return Err(Error::Domain { x, x0: self.x0() });
        }
        Ok(self.eval_at_offset(t))
    }

    pub(crate) fn eval_at_offset(&self, t: f64) -> f64 {
        let mut v = self.power_part.eval_at_offset(t);
        if self.has_log() {
            v += self.log_coeff * t.ln() * self.log_part.eval_at_offset(t);
        }
        v
    }
}
