//! Ordinary / regular-singular / essential-singular classification of a point.

use std::fmt;

use crate::error::{Error, Result};
use crate::frobenius::ProblemSpec;

/// `sum_i c_i u^(min_step + i)` with `u = (x - x0)^alpha`. Leading zeros are
/// stripped on construction, so `coeffs[0] != 0` unless the series is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentAlphaSeries {
    x0: f64,
    alpha: f64,
    min_step: i64,
    coeffs: Vec<f64>,
}

impl LaurentAlphaSeries {
    pub fn new(x0: f64, alpha: f64, min_step: i64, coeffs: Vec<f64>) -> Result<Self> {
        crate::series::check_alpha(alpha)?;
        let skip = coeffs.iter().take_while(|&&c| c == 0.0).count();
        let coeffs = coeffs[skip..].to_vec();
        let min_step = if coeffs.is_empty() { 0 } else { min_step + skip as i64 };
        Ok(Self {
            x0,
            alpha,
            min_step,
            coeffs,
        })
    }

    pub fn zero(x0: f64, alpha: f64) -> Self {
        Self {
            x0,
            alpha,
            min_step: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn min_step(&self) -> i64 {
        self.min_step
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplication by `u^steps`.
    pub fn shift(&self, steps: i64) -> Self {
        let mut out = self.clone();
        if !out.coeffs.is_empty() {
            out.min_step += steps;
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        if factor == 0.0 {
            return Self::zero(self.x0, self.alpha);
        }
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= factor);
        out
    }

    /// Order of the pole at `x0`; 0 when the series is alpha-analytic.
    pub fn pole_order(&self) -> u32 {
        if self.coeffs.is_empty() {
            0
        } else {
            (-self.min_step).max(0) as u32
        }
    }
}

/// Kind of point `x0` is for the equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointClass {
    AlphaOrdinary,
    RegularAlphaSingular,
    EssentialAlphaSingular,
}

impl PointClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PointClass::AlphaOrdinary => "alpha-ordinary",
            PointClass::RegularAlphaSingular => "regular-alpha-singular",
            PointClass::EssentialAlphaSingular => "essential-alpha-singular",
        }
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies `x0` for `T^n y + a_{n-1} T^{n-1} y + ... + a_0 y = 0`, where
/// `coeffs[k]` is `a_k` and `n = coeffs.len()`.
///
/// Ordinary when every `a_k` is alpha-analytic; regular singular when not
/// ordinary and each `a_k` has a pole of order at most `n - k`. A single
/// non-analytic coefficient suffices to make the point singular.
pub fn classify_monic(coeffs: &[LaurentAlphaSeries]) -> Result<PointClass> {
    if let Some(first) = coeffs.first() {
        if let Some(bad) = coeffs
            .iter()
            .find(|c| c.x0 != first.x0 || c.alpha != first.alpha)
        {
            return Err(Error::IncompatibleSeries(format!(
                "(x0, alpha) = ({}, {}) vs ({}, {})",
                first.x0, first.alpha, bad.x0, bad.alpha
            )));
        }
    }
    let n = coeffs.len() as u32;
    let orders: Vec<u32> = coeffs.iter().map(LaurentAlphaSeries::pole_order).collect();
    if orders.iter().all(|&o| o == 0) {
        return Ok(PointClass::AlphaOrdinary);
    }
    let regular = orders
        .iter()
        .enumerate()
        .all(|(k, &o)| o <= n - k as u32);
    Ok(if regular {
        PointClass::RegularAlphaSingular
    } else {
        PointClass::EssentialAlphaSingular
    })
}

/// Classifies `x0` for `T T y + P T y + Q y = 0`.
pub fn classify_point(p: &LaurentAlphaSeries, q: &LaurentAlphaSeries) -> Result<PointClass> {
    classify_monic(&[q.clone(), p.clone()])
}

/// `P = p / u` and `Q = q / u^2` for the problem's coefficient lists.
pub fn to_monic(prob: &ProblemSpec) -> (LaurentAlphaSeries, LaurentAlphaSeries) {
    let p = LaurentAlphaSeries::new(prob.x0, prob.alpha, -1, prob.p.clone())
        .expect("ProblemSpec alpha is validated");
    let q = LaurentAlphaSeries::new(prob.x0, prob.alpha, -2, prob.q.clone())
        .expect("ProblemSpec alpha is validated");
    (p, q)
}
