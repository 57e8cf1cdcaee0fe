//! Binary floating point with a caller-chosen mantissa width.
//!
//! Only what the coefficient kernels need: the four operations and exact
//! conversion from `f64`. Values carry their own precision; binary operations
//! round to the wider of the two operands.

use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};

/// `mant * 2^exp`, with `|mant| < 2^prec`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct WideFloat {
    mant: BigInt,
    exp: i64,
    prec: u64,
}

impl WideFloat {
    pub(crate) fn zero(prec: u64) -> Self {
        Self {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub(crate) fn from_f64(v: f64, prec: u64) -> Self {
        assert!(v.is_finite(), "WideFloat::from_f64 on {v}");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        Self::normalized(BigInt::from_biguint(sign, m.into()), e, prec)
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    fn normalized(mant: BigInt, exp: i64, prec: u64) -> Self {
        let bits = mant.bits();
        if bits <= prec {
            return Self { mant, exp, prec };
        }
        let shift = bits - prec;
        let (sign, mag) = mant.into_parts();
        let half = num_bigint::BigUint::from(1u8) << (shift - 1);
        let mag = (mag + half) >> shift;
        Self {
            mant: BigInt::from_biguint(sign, mag),
            exp: exp + shift as i64,
            prec,
        }
    }

    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    pub(crate) fn add(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if other.is_zero() {
            return Self::normalized(self.mant.clone(), self.exp, prec);
        }
        if self.is_zero() {
            return Self::normalized(other.mant.clone(), other.exp, prec);
        }
        // an addend entirely below the rounding position cannot change the sum
        let guard = prec as i64 + 4;
        if self.top() - other.top() > guard {
            return Self::normalized(self.mant.clone(), self.exp, prec);
        }
        if other.top() - self.top() > guard {
            return Self::normalized(other.mant.clone(), other.exp, prec);
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Self::normalized(a + b, e, prec)
    }

    pub(crate) fn neg(&self) -> Self {
        Self {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub(crate) fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub(crate) fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        Self::normalized(&self.mant * &other.mant, self.exp + other.exp, prec)
    }

    /// Panics on division by zero.
    pub(crate) fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "WideFloat division by zero");
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return Self::zero(prec);
        }
        let shift = (prec + 2 + other.mant.bits()).saturating_sub(self.mant.bits());
        let num = &self.mant << shift as usize;
        let q = num / &other.mant;
        Self::normalized(q, self.exp - shift as i64 - other.exp, prec)
    }

    pub(crate) fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (sign, mag) = self.mant.clone().into_parts();
        let bits = mag.bits();
        let (mag, exp) = if bits > 64 {
            let s = bits - 64;
            (mag >> s, self.exp + s as i64)
        } else {
            (mag, self.exp)
        };
        let m = mag.to_u64().expect("at most 64 bits") as f64;
        let v = ldexp(m, exp);
        if sign == Sign::Minus {
            -v
        } else {
            v
        }
    }
}

/// Cauchy product of two coefficient lists, truncated to the shorter one.
pub(crate) fn cauchy(a: &[WideFloat], b: &[WideFloat], prec: u64) -> Vec<WideFloat> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|k| {
            (0..=k).fold(WideFloat::zero(prec), |acc, j| {
                if a[j].is_zero() || b[k - j].is_zero() {
                    acc
                } else {
                    acc.add(&a[j].mul(&b[k - j]))
                }
            })
        })
        .collect()
}

/// Inverse of a power series with nonzero constant term, same length.
pub(crate) fn reciprocal(f: &[WideFloat], prec: u64) -> Vec<WideFloat> {
    let mut g: Vec<WideFloat> = Vec::with_capacity(f.len());
    if f.is_empty() {
        return g;
    }
    let f0 = &f[0];
    g.push(WideFloat::from_f64(1.0, prec).div(f0));
    for k in 1..f.len() {
        let s = (1..=k).fold(WideFloat::zero(prec), |acc, j| {
            if f[j].is_zero() {
                acc
            } else {
                acc.add(&f[j].mul(&g[k - j]))
            }
        });
        g.push(s.neg().div(f0));
    }
    g
}

fn ldexp(mut v: f64, mut exp: i64) -> f64 {
    while exp > 1000 {
        v *= 2f64.powi(1000);
        exp -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while exp < -1000 {
        v *= 2f64.powi(-1000);
        exp += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(exp as i32)
}
