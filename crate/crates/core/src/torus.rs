//! The based quantum torus over a skew-symmetric form.
//!
//! Elements are stored in the normalized monomial basis `M(c)`, with
//! `M(c)·M(d) = q^{Λ(c,d)/2} M(c+d)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qring::QCoeff;

/// A skew-symmetric integer matrix `Λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct SkewForm {
    matrix: Vec<Vec<i64>>,
}

impl SkewForm {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let m = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != m {
                return Err(Error::ShapeMismatch(format!("row {i} of Λ has length {}", row.len())));
            }
            for (j, x) in row.iter().enumerate() {
                if *x != -matrix[j][i] {
                    return Err(Error::ShapeMismatch(format!("Λ is not skew-symmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self { matrix })
    }

    /// `[[0, 1], [-1, 0]]`, the rank-2 form.
    pub fn standard_rank2() -> Self {
        Self { matrix: vec![vec![0, 1], vec![-1, 0]] }
    }

    pub fn zero(rank: usize) -> Self {
        Self { matrix: vec![vec![0; rank]; rank] }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    /// `Λ(c, d) = cᵀ Λ d`.
    pub fn eval(&self, c: &[i64], d: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, ci) in c.iter().enumerate() {
            if *ci == 0 {
                continue;
            }
            for (j, dj) in d.iter().enumerate() {
                acc += ci * self.matrix[i][j] * dj;
            }
        }
        acc
    }
}

impl TryFrom<Vec<Vec<i64>>> for SkewForm {
    type Error = Error;
    fn try_from(m: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(m)
    }
}

impl From<SkewForm> for Vec<Vec<i64>> {
    fn from(s: SkewForm) -> Self {
        s.matrix
    }
}

/// Outcome of a minimal-exponent query under the componentwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Minimal {
    Unique(Vec<i64>),
    NotUnique(Vec<Vec<i64>>),
}

/// Componentwise `a ⪯ b`.
pub fn componentwise_leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// A finite `Z[q^{±1/2}]`-combination of normalized monomials `M(c)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusElement {
    ctx: Arc<SkewForm>,
    terms: BTreeMap<Vec<i64>, QCoeff>,
}

impl TorusElement {
    pub fn zero(ctx: &Arc<SkewForm>) -> Self {
        Self { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<SkewForm>) -> Self {
        Self::term(ctx, vec![0; ctx.rank()], QCoeff::one())
    }

    /// The basis element `M(c)`.
    pub fn monomial(ctx: &Arc<SkewForm>, c: &[i64]) -> Result<Self> {
        check_len(ctx, c)?;
        Ok(Self::term(ctx, c.to_vec(), QCoeff::one()))
    }

    /// `X_i = M(e_i)`, zero-based `i`.
    pub fn generator(ctx: &Arc<SkewForm>, i: usize) -> Self {
        let mut c = vec![0; ctx.rank()];
        c[i] = 1;
        Self::term(ctx, c, QCoeff::one())
    }

    pub(crate) fn term(ctx: &Arc<SkewForm>, c: Vec<i64>, coeff: QCoeff) -> Self {
        let mut out = Self::zero(ctx);
        out.add_term(c, coeff);
        out
    }

    pub fn from_terms<I>(ctx: &Arc<SkewForm>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, QCoeff)>,
    {
        let mut out = Self::zero(ctx);
        for (c, k) in terms {
            check_len(ctx, &c)?;
            out.add_term(c, k);
        }
        Ok(out)
    }

    /// The ordered product `X_1^{c_1} ⋯ X_m^{c_m}`.
    pub fn ordered_word(ctx: &Arc<SkewForm>, c: &[i64]) -> Result<Self> {
        check_len(ctx, c)?;
        let mut twist = 0;
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                twist += c[i] * c[j] * ctx.entry(j, i);
            }
        }
        Ok(Self::term(ctx, c.to_vec(), QCoeff::v_pow(-twist)))
    }

    fn add_term(&mut self, c: Vec<i64>, k: QCoeff) {
        if k.is_zero() {
            return;
        }
        match self.terms.get_mut(&c) {
            Some(slot) => {
                *slot += &k;
                if slot.is_zero() {
                    self.terms.remove(&c);
                }
            }
            None => {
                self.terms.insert(c, k);
            }
        }
    }

    pub fn context(&self) -> &Arc<SkewForm> {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.ctx.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &QCoeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, c: &[i64]) -> QCoeff {
        self.terms.get(c).cloned().unwrap_or_default()
    }

    pub fn exponents(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.terms.keys()
    }

    fn same_ctx(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        let mut out = self.clone();
        for (c, k) in &other.terms {
            out.add_term(c.clone(), k.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        let mut out = Self::zero(&self.ctx);
        for (c, a) in &self.terms {
            for (d, b) in &other.terms {
                let twist = self.ctx.eval(c, d);
                let sum: Vec<i64> = c.iter().zip(d).map(|(x, y)| x + y).collect();
                out.add_term(sum, (a * b).shift(twist));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &QCoeff) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (c, a) in &self.terms {
            out.add_term(c.clone(), a * k);
        }
        out
    }

    /// Multiply every coefficient by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(c, a)| (c.clone(), a.shift(k))).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Applies the bar involution to every coefficient (basis fixed).
    pub fn bar_coeffs(&self) -> Self {
        Self {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(c, a)| (c.clone(), a.bar())).collect(),
        }
    }

    /// The `⪯`-minimal exponents among the terms.
    pub fn min_exponent(&self) -> Result<Minimal> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let minimal: Vec<Vec<i64>> = self
            .terms
            .keys()
            .filter(|c| {
                !self
                    .terms
                    .keys()
                    .any(|d| d != *c && componentwise_leq(d, c))
            })
            .cloned()
            .collect();
        Ok(if minimal.len() == 1 {
            Minimal::Unique(minimal.into_iter().next().unwrap())
        } else {
            Minimal::NotUnique(minimal)
        })
    }

    fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let m = self.rank();
        let mut lo = vec![i64::MAX; m];
        let mut hi = vec![i64::MIN; m];
        for c in self.terms.keys() {
            for k in 0..m {
                lo[k] = lo[k].min(c[k]);
                hi[k] = hi[k].max(c[k]);
            }
        }
        (lo, hi)
    }

    /// Solves `divisor · Q = self` exactly.
    pub fn div_left(&self, divisor: &Self) -> Result<Self> {
        self.divide(divisor, true)
    }

    /// Solves `Q · divisor = self` exactly.
    pub fn div_right(&self, divisor: &Self) -> Result<Self> {
        self.divide(divisor, false)
    }

    // Term-by-term against the lexicographically least term of the divisor.
    // The quotient's exponents must lie in the box difference of the two
    // supports, which bounds the loop.
    fn divide(&self, divisor: &Self, left: bool) -> Result<Self> {
        self.same_ctx(divisor)?;
        if divisor.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut quot = Self::zero(&self.ctx);
        if self.is_zero() {
            return Ok(quot);
        }
        let (plo, phi) = self.bounding_box();
        let (dlo, dhi) = divisor.bounding_box();
        let (dmin, dcoef) = divisor.terms.iter().next().map(|(c, a)| (c.clone(), a.clone())).unwrap();
        let mut rem = self.clone();
        while let Some((rmin, rcoef)) = rem.terms.iter().next().map(|(c, a)| (c.clone(), a.clone())) {
            let e: Vec<i64> = rmin.iter().zip(&dmin).map(|(r, d)| r - d).collect();
            let inside = (0..e.len()).all(|k| e[k] >= plo[k] - dlo[k] && e[k] <= phi[k] - dhi[k]);
            if !inside {
                return Err(Error::NonExactDivision);
            }
            let twist = if left { self.ctx.eval(&dmin, &e) } else { self.ctx.eval(&e, &dmin) };
            let c = rcoef
                .div_exact(&dcoef.shift(twist))
                .ok_or(Error::NonExactDivision)?;
            let piece = Self::term(&self.ctx, e, c);
            let prod = if left { divisor * &piece } else { &piece * divisor };
            rem = &rem - &prod;
            quot = &quot + &piece;
        }
        Ok(quot)
    }
}

fn check_len(ctx: &SkewForm, c: &[i64]) -> Result<()> {
    if c.len() != ctx.rank() {
        return Err(Error::DimensionMismatch { expected: ctx.rank(), found: c.len() });
    }
    Ok(())
}

// Operator forms panic on context mismatch; use the `try_*` methods when
// the operands may come from different forms.
impl Add for &TorusElement {
    type Output = TorusElement;
    fn add(self, rhs: &TorusElement) -> TorusElement {
        self.try_add(rhs).expect("torus context mismatch")
    }
}

impl Sub for &TorusElement {
    type Output = TorusElement;
    fn sub(self, rhs: &TorusElement) -> TorusElement {
        self.try_sub(rhs).expect("torus context mismatch")
    }
}

impl Mul for &TorusElement {
    type Output = TorusElement;
    fn mul(self, rhs: &TorusElement) -> TorusElement {
        self.try_mul(rhs).expect("torus context mismatch")
    }
}

impl Neg for &TorusElement {
    type Output = TorusElement;
    fn neg(self) -> TorusElement {
        TorusElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(c, a)| (c.clone(), -a)).collect(),
        }
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (c, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let exp = c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            if a.is_one() {
                write!(f, "M({exp})")?;
            } else {
                write!(f, "({a})M({exp})")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<i64>,
    coeff: QCoeff,
}

#[derive(Serialize, Deserialize)]
struct TorusRepr {
    rank: usize,
    lambda: SkewForm,
    terms: Vec<TermRepr>,
}

impl Serialize for TorusElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TorusRepr {
            rank: self.rank(),
            lambda: (*self.ctx).clone(),
            terms: self
                .terms
                .iter()
                .map(|(c, a)| TermRepr { exp: c.clone(), coeff: a.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = TorusRepr::deserialize(d)?;
        if repr.rank != repr.lambda.rank() {
            return Err(serde::de::Error::custom("rank does not match Λ"));
        }
        let ctx = Arc::new(repr.lambda);
        TorusElement::from_terms(&ctx, repr.terms.into_iter().map(|t| (t.exp, t.coeff)))
            .map_err(serde::de::Error::custom)
    }
}
