//! Exact arithmetic in `Z[q^{±1/2}]`.
//!
//! Elements are Laurent polynomials in a single variable `v` with `v² = q`,
//! so every half-integer power of `q` is an integer power of `v` and all
//! coefficient arithmetic stays inside the integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `Z[v^{±1}]`, `v = q^{1/2}`, keyed by `v`-exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QCoeff {
    terms: BTreeMap<i64, BigInt>,
}

impl QCoeff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::v_pow(0)
    }

    /// `v^k = q^{k/2}`.
    pub fn v_pow(k: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(k, BigInt::one());
        Self { terms }
    }

    /// `q^k = v^{2k}`.
    pub fn q_pow(k: i64) -> Self {
        Self::v_pow(2 * k)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial<T: Into<BigInt>>(v_exp: i64, c: T) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(v_exp, c);
        }
        Self { terms }
    }

    /// Builds from `(v-exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I, T>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i64, T)>,
        T: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (e, c) in iter {
            out.add_term(e, c.into());
        }
        out
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(v-exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, v_exp: i64) -> BigInt {
        self.terms.get(&v_exp).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn has_odd_powers(&self) -> bool {
        self.terms.keys().any(|e| e.rem_euclid(2) == 1)
    }

    /// If this is `±v^k`, returns `(sign, k)`.
    pub fn as_unit(&self) -> Option<(i8, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        if c.is_one() {
            Some((1, *e))
        } else if (-c).is_one() {
            Some((-1, *e))
        } else {
            None
        }
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// The bar involution `v ↦ v^{-1}`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.bar() == *self
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / divisor` in `Z[v^{±1}]`, or `None`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (lo_b, hi_b) = (divisor.min_exp()?, divisor.max_exp()?);
        let lo_q = self.min_exp()? - lo_b;
        let lead_b = divisor.terms[&hi_b].clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(hi_r) = rem.max_exp() {
            let e = hi_r - hi_b;
            if e < lo_q {
                return None;
            }
            let (c, r) = rem.terms[&hi_r].div_rem(&lead_b);
            if !r.is_zero() {
                return None;
            }
            let term = Self::monomial(e, c);
            rem -= &(&term * divisor);
            quot += &term;
        }
        Some(quot)
    }

    /// Substitute `q = q0` exactly. Odd powers of `v` need `q0` to be a rational square.
    pub fn eval_at(&self, q0: &BigRational) -> Result<BigRational> {
        if !q0.is_positive() {
            return Err(Error::OddPowerAtNonSquare(q0.to_string()));
        }
        let v = if self.has_odd_powers() {
            Some(rational_sqrt(q0).ok_or_else(|| Error::OddPowerAtNonSquare(q0.to_string()))?)
        } else {
            None
        };
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let val = match &v {
                Some(v) => pow_rat(v, *e),
                None => pow_rat(q0, e / 2),
            };
            acc += val * BigRational::from_integer(c.clone());
        }
        Ok(acc)
    }

    /// Substitute `v = √q0` into `Q(√q0)`; never fails.
    pub fn eval_sqrt(&self, q0: &BigRational) -> QuadRat {
        let mut acc = QuadRat::zero(q0.clone());
        for (e, c) in &self.terms {
            let half = e.div_euclid(2);
            let base = pow_rat(q0, half) * BigRational::from_integer(c.clone());
            if e.rem_euclid(2) == 0 {
                acc.rational += base;
            } else {
                acc.irrational += base;
            }
        }
        acc
    }
}

fn pow_rat(x: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| BigRational::new(n, d))
}

/// `a + b·√r` with rational `a, b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadRat {
    pub rational: BigRational,
    pub irrational: BigRational,
    pub radicand: BigRational,
}

impl QuadRat {
    pub fn zero(radicand: BigRational) -> Self {
        Self {
            rational: BigRational::zero(),
            irrational: BigRational::zero(),
            radicand,
        }
    }

    pub fn is_zero(&self) -> bool {
        match rational_sqrt(&self.radicand) {
            Some(s) => (&self.rational + &self.irrational * s).is_zero(),
            None => self.rational.is_zero() && self.irrational.is_zero(),
        }
    }
}

/// Balanced quantum binomial `[n k]_t` with `t = v^scale`.
///
/// `scale = 2` gives the `q`-binomial `(q^n − q^{−n})⋯ / (q^k − q^{−k})⋯`;
/// `scale = d` gives the `q^{d/2}` variant used by seed mutation.
pub fn qbinom(n: u32, k: u32, scale: u32) -> QCoeff {
    assert!(k <= n, "qbinom requires k <= n");
    let s = scale as i64;
    let bracket = |j: i64| QCoeff::from_terms([(s * j, 1), (-s * j, -1)]);
    let mut num = QCoeff::one();
    let mut den = QCoeff::one();
    for i in 0..k as i64 {
        num = &num * &bracket(n as i64 - i);
        den = &den * &bracket(i + 1);
    }
    num.div_exact(&den)
        .expect("quantum binomial numerator must be divisible by its denominator")
}

impl Neg for &QCoeff {
    type Output = QCoeff;
    fn neg(self) -> QCoeff {
        QCoeff {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for QCoeff {
    type Output = QCoeff;
    fn neg(self) -> QCoeff {
        -&self
    }
}

impl AddAssign<&QCoeff> for QCoeff {
    fn add_assign(&mut self, rhs: &QCoeff) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&QCoeff> for QCoeff {
    fn sub_assign(&mut self, rhs: &QCoeff) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl Add for &QCoeff {
    type Output = QCoeff;
    fn add(self, rhs: &QCoeff) -> QCoeff {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &QCoeff {
    type Output = QCoeff;
    fn sub(self, rhs: &QCoeff) -> QCoeff {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &QCoeff {
    type Output = QCoeff;
    fn mul(self, rhs: &QCoeff) -> QCoeff {
        let mut out = QCoeff::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for QCoeff {
            type Output = QCoeff;
            fn $m(self, rhs: QCoeff) -> QCoeff {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl fmt::Display for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let power = match (*e, e.rem_euclid(2)) {
                (0, _) => String::new(),
                (2, _) => "q".to_string(),
                (e, 0) => format!("q^{}", e / 2),
                (e, _) => format!("q^({}/2)", e),
            };
            match (power.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{power}")?,
                (false, false) => write!(f, "{mag}*{power}")?,
            }
        }
        Ok(())
    }
}

/// Integers serialize as JSON numbers when they fit in `i64`, else as decimal strings.
pub(crate) fn bigint_to_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(i) => serde_json::Value::from(i),
        None => serde_json::Value::from(c.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for QCoeff {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            seq.serialize_element(&(e, bigint_to_json(c)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for QCoeff {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<(i64, serde_json::Value)> = Vec::deserialize(deserializer)?;
        let mut out = QCoeff::zero();
        for (e, c) in pairs {
            let c = bigint_from_json(&c).ok_or_else(|| de::Error::custom("bad coefficient"))?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}

/// An integer polynomial in `q` (ascending coefficients), as produced by
/// interpolating finite-field counts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QPoly {
    pub coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        let mut p = Self { coeffs: vec![c.into()] };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `q^k ↦ v^{2k}`.
    pub fn to_qcoeff(&self) -> QCoeff {
        QCoeff::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (2 * k as i64, c.clone())),
        )
    }

    /// Lagrange-interpolates the first `degree_bound + 1` samples and checks
    /// the remaining ones. `None` if the fit has non-integer coefficients or
    /// misses a check sample.
    pub fn interpolate(samples: &[(u64, BigInt)], degree_bound: usize) -> Option<Self> {
        let fit = &samples[..(degree_bound + 1).min(samples.len())];
        let n = fit.len();
        let mut acc = vec![BigRational::zero(); n];
        for (i, (xi, yi)) in fit.iter().enumerate() {
            // basis polynomial prod_{j != i} (x - xj) / (xi - xj)
            let mut basis = vec![BigRational::one()];
            let mut denom = BigRational::one();
            for (j, (xj, _)) in fit.iter().enumerate() {
                if i == j {
                    continue;
                }
                let xj = BigRational::from_integer(BigInt::from(*xj));
                let mut next = vec![BigRational::zero(); basis.len() + 1];
                for (k, b) in basis.iter().enumerate() {
                    next[k + 1] += b;
                    next[k] -= b * &xj;
                }
                basis = next;
                denom *= BigRational::from_integer(BigInt::from(*xi)) - xj;
            }
            let scale = BigRational::from_integer(yi.clone()) / denom;
            for (k, b) in basis.iter().enumerate() {
                acc[k] += b * &scale;
            }
        }
        let mut coeffs = Vec::with_capacity(n);
        for c in acc {
            if !c.is_integer() {
                return None;
            }
            coeffs.push(c.to_integer());
        }
        let mut poly = Self { coeffs };
        poly.trim();
        samples[n..]
            .iter()
            .all(|(x, y)| poly.eval(&BigInt::from(*x)) == *y)
            .then_some(poly)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_qcoeff())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(k: i64) -> QCoeff {
        QCoeff::v_pow(k)
    }

    #[test]
    fn ring_examples() {
        assert!((&v(1) + &(-v(1))).is_zero());
        let s = &v(1) + &v(-1);
        assert_eq!(&s * &s, QCoeff::from_terms([(2, 1), (0, 2), (-2, 1)]));
        assert!((&v(1) * &v(-1)).is_one());
    }

    #[test]
    fn bar_examples() {
        assert_eq!(QCoeff::q_pow(1).bar(), QCoeff::q_pow(-1));
        let x = &QCoeff::q_pow(1) + &QCoeff::constant(2);
        assert_eq!(x.bar(), &QCoeff::q_pow(-1) + &QCoeff::constant(2));
        assert!(qbinom(4, 2, 2).is_bar_invariant());
    }

    #[test]
    fn qbinom_examples() {
        assert_eq!(qbinom(2, 1, 2), QCoeff::from_terms([(2, 1), (-2, 1)]));
        assert!(qbinom(7, 0, 2).is_one());
        assert_eq!(
            qbinom(4, 2, 2),
            QCoeff::from_terms([(8, 1), (4, 1), (0, 2), (-4, 1), (-8, 1)])
        );
        // t = q^{1/2}
        assert_eq!(qbinom(2, 1, 1), QCoeff::from_terms([(1, 1), (-1, 1)]));
    }

    #[test]
    fn eval_examples() {
        let four = BigRational::from_integer(4.into());
        let q_plus_1 = &QCoeff::q_pow(1) + &QCoeff::one();
        assert_eq!(q_plus_1.eval_at(&four).unwrap(), BigRational::from_integer(5.into()));
        assert_eq!(v(1).eval_at(&four).unwrap(), BigRational::from_integer(2.into()));
        let nine = BigRational::from_integer(9.into());
        assert_eq!(
            qbinom(2, 1, 2).eval_at(&nine).unwrap(),
            BigRational::new(82.into(), 9.into())
        );
        assert_eq!(
            qbinom(2, 1, 1).eval_at(&nine).unwrap(),
            BigRational::new(10.into(), 3.into())
        );
        let two = BigRational::from_integer(2.into());
        assert!(matches!(v(1).eval_at(&two), Err(Error::OddPowerAtNonSquare(_))));
        // v^3 - 2v at q=2 is 2√2 - 2√2 = 0
        let z = QCoeff::from_terms([(3, 1), (1, -2)]);
        assert!(z.eval_sqrt(&two).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = &(&v(2) + &v(-2)) * &(&v(3) - &QCoeff::constant(7));
        assert_eq!(a.div_exact(&(&v(2) + &v(-2))).unwrap(), &v(3) - &QCoeff::constant(7));
        assert!(QCoeff::from_terms([(2, 1), (0, 1)])
            .div_exact(&QCoeff::from_terms([(1, 1), (0, 1)]))
            .is_none());
        assert!(QCoeff::constant(3).div_exact(&QCoeff::constant(2)).is_none());
    }

    #[test]
    fn interpolation() {
        let samples: Vec<(u64, BigInt)> = [2u64, 3, 4, 5]
            .iter()
            .map(|&q| (q, BigInt::from(q * q + 1)))
            .collect();
        let p = QPoly::interpolate(&samples, 2).unwrap();
        assert_eq!(p.coeffs, vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]);
        assert!(QPoly::interpolate(&samples, 1).is_none());
        let odd: Vec<(u64, BigInt)> = vec![(2, 1.into()), (3, 2.into()), (4, 4.into())];
        assert!(QPoly::interpolate(&odd, 1).is_none());
    }

    #[test]
    fn serde_roundtrip() {
        let x = QCoeff::from_terms([(-3, BigInt::from(5)), (4, BigInt::from(10).pow(30))]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[[-3,5],[4,\"1000000000000000000000000000000\"]]");
        assert_eq!(serde_json::from_str::<QCoeff>(&s).unwrap(), x);
    }
}
