//! Rank-2 bases: the family `d ↦ X_d`, standard-monomial expansions and the
//! basis check.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use serde::Serialize;

use crate::ccmap::{CcContext, Counts};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::qring::{qbinom, QCoeff};
use crate::repbrute::descr::Descriptor;
use crate::repbrute::hom::ext_dim;
use crate::repbrute::sub::sub_dims;
use crate::seedkit::rank2_vars;
use crate::speckit::rank2;
use crate::torus::{componentwise_leq, Minimal, TorusElement};

/// Outcome of comparing two vectors componentwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum POrder {
    Equal,
    Less,
    Greater,
    Incomparable,
}

/// `r ⪯ s` when `r_i ≤ s_i` for both coordinates.
pub fn porder(r: &[i64], s: &[i64]) -> POrder {
    match (componentwise_leq(r, s), componentwise_leq(s, r)) {
        (true, true) => POrder::Equal,
        (true, false) => POrder::Less,
        (false, true) => POrder::Greater,
        (false, false) => POrder::Incomparable,
    }
}

/// `d = d⁺ − d⁻` with disjoint supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ZVector2(pub [i64; 2]);

impl ZVector2 {
    pub fn plus(&self) -> [i64; 2] {
        self.0.map(|x| x.max(0))
    }

    pub fn minus(&self) -> [i64; 2] {
        self.0.map(|x| (-x).max(0))
    }

    /// Every vector with `|d_i| ≤ r`.
    pub fn range(r: i64) -> Vec<ZVector2> {
        (-r..=r).flat_map(|a| (-r..=r).map(move |b| ZVector2([a, b]))).collect()
    }
}

/// Which module of dimension `d⁺` carries the positive part.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Policy {
    /// The module without self-extensions.
    #[default]
    Generic,
    /// `S₁^{d₁} ⊕ S₂^{d₂}`.
    SplitSemisimple,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisElement {
    pub d: ZVector2,
    pub object: String,
    pub value: TorusElement,
}

/// Positive real roots with entries at most `cap`, from the orbit of the
/// simple roots under the simple reflections.
pub fn real_roots(b: i64, c: i64, cap: i64) -> Vec<[i64; 2]> {
    // symmetrized form (x, y) = ⟨x,y⟩ + ⟨y,x⟩ with ⟨x,y⟩ = c x1y1 − cb x1y2 + b x2y2
    let d = [c, b];
    let sym = |x: [i64; 2], y: [i64; 2]| 2 * c * x[0] * y[0] - c * b * (x[0] * y[1] + x[1] * y[0]) + 2 * b * x[1] * y[1];
    let reflect = |x: [i64; 2], i: usize| {
        let mut e = [0; 2];
        e[i] = 1;
        let k = sym(x, e) / d[i];
        let mut y = x;
        y[i] -= k;
        y
    };
    let mut seen = BTreeSet::new();
    let mut stack: Vec<[i64; 2]> = vec![[1, 0], [0, 1]];
    while let Some(x) = stack.pop() {
        if x.iter().any(|v| v.abs() > cap) || !seen.insert(x) {
            continue;
        }
        stack.push(reflect(x, 0));
        stack.push(reflect(x, 1));
    }
    seen.into_iter().filter(|x| x[0] >= 0 && x[1] >= 0).collect()
}

/// The rank-2 family for one valuation `(b, c)`.
pub struct Rank2Family {
    b: i64,
    c: i64,
    ctx: CcContext,
    roots: Vec<[i64; 2]>,
    chars: Mutex<BTreeMap<[i64; 2], TorusElement>>,
    orthogonal: BTreeMap<([i64; 2], [i64; 2]), bool>,
}

const ROOT_CAP: i64 = 6;

fn descriptor(x: [i64; 2]) -> Descriptor {
    Descriptor::rigid(x.iter().map(|v| *v as usize).collect())
}

impl Rank2Family {
    pub fn new(b: i64, c: i64, exec: Exec) -> Result<Self> {
        let ctx = CcContext::from_preset(&rank2(b, c)?, exec)?;
        let sp = ctx.species(2)?;
        let mut roots = Vec::new();
        let mut reps = Vec::new();
        for x in real_roots(b, c, ROOT_CAP) {
            if let Ok(r) = descriptor(x).realize(&sp) {
                roots.push(x);
                reps.push(r);
            }
        }
        let mut orthogonal = BTreeMap::new();
        for (i, x) in roots.iter().enumerate() {
            for (j, y) in roots.iter().enumerate() {
                let ok = ext_dim(&sp, &reps[i], &reps[j]) == 0 && ext_dim(&sp, &reps[j], &reps[i]) == 0;
                orthogonal.insert((*x, *y), ok);
            }
        }
        Ok(Self { b, c, ctx, roots, chars: Mutex::default(), orthogonal })
    }

    pub fn context(&self) -> &CcContext {
        &self.ctx
    }

    pub fn valuation(&self) -> (i64, i64) {
        (self.b, self.c)
    }

    pub fn roots(&self) -> &[[i64; 2]] {
        &self.roots
    }

    /// `X` of the rigid indecomposable of dimension `x`.
    pub fn root_character(&self, x: [i64; 2]) -> Result<TorusElement> {
        if let Some(v) = self.chars.lock().expect("char lock").get(&x) {
            return Ok(v.clone());
        }
        let v = self.ctx.cc_module(&descriptor(x))?.value;
        self.chars.lock().expect("char lock").insert(x, v.clone());
        Ok(v)
    }

    /// Pairwise ext-orthogonal roots summing to `d`.
    pub fn decompose(&self, d: [i64; 2]) -> Option<Vec<[i64; 2]>> {
        fn rec(
            fam: &Rank2Family,
            rest: [i64; 2],
            start: usize,
            cur: &mut Vec<[i64; 2]>,
        ) -> bool {
            if rest == [0, 0] {
                return true;
            }
            for k in start..fam.roots.len() {
                let x = fam.roots[k];
                if x[0] > rest[0] || x[1] > rest[1] {
                    continue;
                }
                if !cur.iter().chain([&x]).all(|y| fam.orthogonal[&(x, *y)]) {
                    continue;
                }
                cur.push(x);
                if rec(fam, [rest[0] - x[0], rest[1] - x[1]], k, cur) {
                    return true;
                }
                cur.pop();
            }
            false
        }
        let mut cur = Vec::new();
        rec(self, d, 0, &mut cur).then_some(cur)
    }

    fn twist(&self, a: [i64; 2], b: [i64; 2]) -> Result<i64> {
        let q = self.ctx.quiver();
        Ok(self.ctx.torus().eval(&q.i_minus_r_prime(&a)?, &q.i_minus_r_prime(&b)?))
    }

    /// `X_M` for the generic module: `X_{A⊕B} = q^{−½Λ((Ĩ−R̃′)a,(Ĩ−R̃′)b)} X_A X_B`
    /// for ext-orthogonal summands.
    fn generic(&self, d: [i64; 2]) -> Result<(String, TorusElement)> {
        let parts = self.decompose(d).ok_or_else(|| Error::UnsupportedDimension(d.to_vec()))?;
        let mut acc = TorusElement::one(self.ctx.torus());
        let mut dim = [0, 0];
        for x in &parts {
            let t = self.twist(dim, *x)?;
            acc = acc.try_mul(&self.root_character(*x)?)?.shift(-t);
            dim = [dim[0] + x[0], dim[1] + x[1]];
        }
        let name = parts.iter().map(|x| format!("M({},{})", x[0], x[1])).collect::<Vec<_>>().join("+");
        Ok((if parts.is_empty() { "0".into() } else { name }, acc))
    }

    /// `X_{S₁^{d₁} ⊕ S₂^{d₂}}` from Gaussian binomials in `q^{d_i}`.
    fn semisimple(&self, d: [i64; 2]) -> Result<(String, TorusElement)> {
        let vd = self.ctx.quiver().valuations().to_vec();
        let dim = [d[0] as usize, d[1] as usize];
        let gauss = |n: usize, k: usize, di: i64| {
            let s = di as u32;
            qbinom(n as u32, k as u32, s).shift(di * (k * (n - k)) as i64)
        };
        let gr: BTreeMap<Vec<usize>, QCoeff> = sub_dims(&dim)
            .into_iter()
            .map(|e| {
                let c = &gauss(dim[0], e[0], vd[0]) * &gauss(dim[1], e[1], vd[1]);
                (e, c)
            })
            .collect();
        let x = self.ctx.character(&dim, &Counts::Coeff(gr), None)?;
        Ok((format!("S1^{}+S2^{}", d[0], d[1]), x))
    }

    /// `X_d = X_{M ⊕ I[−1]}` with `dim M = d⁺` and `dim soc I = d⁻`.
    pub fn make_xd(&self, d: ZVector2, policy: Policy) -> Result<BasisElement> {
        let (plus, minus) = (d.plus(), d.minus());
        let (name, xm) = match policy {
            Policy::Generic => self.generic(plus)?,
            Policy::SplitSemisimple => self.semisimple(plus)?,
        };
        // Hom(M, I) = 0 for disjoint supports, so X_{M⊕I[−1]} is a twisted product
        let soc = minus.to_vec();
        let t = self.ctx.torus().eval(&self.ctx.quiver().i_minus_r_prime(&plus)?, &soc);
        let shift = TorusElement::monomial(self.ctx.torus(), &soc)?;
        let value = xm.try_mul(&shift)?.shift(t);
        let object = if minus == [0, 0] { name } else { format!("{name} + I(soc {minus:?})[-1]") };
        Ok(BasisElement { d, object, value })
    }
}

impl std::fmt::Debug for Rank2Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Rank2Family").field("b", &self.b).field("c", &self.c).field("roots", &self.roots).finish()
    }
}

/// Coefficients of an element over the standard monomials
/// `X₁^{l₁⁻}X₂^{l₂⁻}X_{S₁}^{l₁⁺}X_{S₂}^{l₂⁺}`, indexed by `l`.
#[derive(Clone, Debug, Serialize)]
pub struct StandardExpansion {
    pub terms: Vec<([i64; 2], QCoeff)>,
    /// Minimal exponents that were not unique, one entry per occurrence.
    pub ties: Vec<Vec<Vec<i64>>>,
}

impl StandardExpansion {
    pub fn leading(&self) -> Option<&([i64; 2], QCoeff)> {
        self.terms.first()
    }
}

const MAX_STEPS: usize = 10_000;

fn pick_minimal(x: &TorusElement, ties: &mut Vec<Vec<Vec<i64>>>) -> Result<Vec<i64>> {
    Ok(match x.min_exponent()? {
        Minimal::Unique(c) => c,
        Minimal::NotUnique(mut all) => {
            all.sort();
            ties.push(all.clone());
            all.swap_remove(0)
        }
    })
}

impl Rank2Family {
    /// `X₁^{l₁⁻}X₂^{l₂⁻}X_{S₁}^{l₁⁺}X_{S₂}^{l₂⁺}`.
    pub fn standard_monomial(&self, l: [i64; 2]) -> Result<TorusElement> {
        let ctx = self.ctx.torus();
        let lm = ZVector2(l).minus();
        let lp = ZVector2(l).plus();
        let xs1 = self.make_xd(ZVector2([1, 0]), Policy::Generic)?.value;
        let xs2 = self.make_xd(ZVector2([0, 1]), Policy::Generic)?.value;
        let x1 = TorusElement::generator(ctx, 0).pow(lm[0] as u32);
        let x2 = TorusElement::generator(ctx, 1).pow(lm[1] as u32);
        x1.try_mul(&x2)?.try_mul(&xs1.pow(lp[0] as u32))?.try_mul(&xs2.pow(lp[1] as u32))
    }

    /// Triangular elimination: repeatedly removes the `⪯`-minimal term `c`
    /// with the standard monomial `l = −c`. Fails when `|l_i|` exceeds `bound`.
    pub fn expand_standard(&self, elem: &TorusElement, bound: i64) -> Result<StandardExpansion> {
        let mut residual = elem.clone();
        let mut terms = Vec::new();
        let mut ties = Vec::new();
        let mut cache: BTreeMap<[i64; 2], TorusElement> = BTreeMap::new();
        for _ in 0..MAX_STEPS {
            if residual.is_zero() {
                return Ok(StandardExpansion { terms, ties });
            }
            let c = pick_minimal(&residual, &mut ties)?;
            let l = [-c[0], -c[1]];
            if l.iter().any(|x| x.abs() > bound) {
                return Err(Error::NotInSpan(format!("standard monomial {l:?} beyond bound {bound}")));
            }
            let s = match cache.entry(l) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => e.insert(self.standard_monomial(l)?),
            };
            let lead = s.coeff(&c);
            let coeff = residual
                .coeff(&c)
                .div_exact(&lead)
                .ok_or_else(|| Error::NotInSpan(format!("non-unit pivot at {c:?}")))?;
            residual = residual.try_sub(&s.scale(&coeff))?;
            terms.push((l, coeff));
        }
        Err(Error::NotInSpan("elimination did not terminate".into()))
    }
}

/// Per-`d` record of the basis check.
#[derive(Clone, Debug, Serialize)]
pub struct BasisRecord {
    pub d: ZVector2,
    pub object: String,
    pub min_exponent: Option<Vec<i64>>,
    /// Whether the minimal exponent is `−d`.
    pub min_is_minus_d: bool,
    pub leading: Option<String>,
    pub leading_is_unit: bool,
    pub expansion_len: usize,
    pub ties: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisReport {
    pub b: i64,
    pub c: i64,
    pub radius: i64,
    pub policy: Policy,
    pub records: Vec<BasisRecord>,
    pub distinct_min_exponents: bool,
    pub triangular_unit: bool,
    /// `(cluster variable index, in span, equals some X_d up to a unit)`.
    pub cluster_variables: Vec<(i64, bool, bool)>,
    pub passed: bool,
}

/// Range of recursion indices scanned for cluster variables.
const VAR_RANGE: (i64, i64) = (-12, 14);

impl Rank2Family {
    fn elements(&self, radius: i64, policy: Policy) -> Result<BTreeMap<ZVector2, BasisElement>> {
        // root characters first, so the parallel pass only reads the cache
        for x in self.roots.clone() {
            if x[0] <= radius && x[1] <= radius {
                self.root_character(x)?;
            }
        }
        let ds = ZVector2::range(radius);
        let out = self.ctx.exec().map(ds, |d| self.make_xd(d, policy).map(|e| (d, e)));
        out.into_iter().collect()
    }

    /// Expands `x` over `{X_d}` by removing minimal terms; `None` if some
    /// minimal exponent has no matching `X_d`.
    fn in_span(&self, x: &TorusElement, elems: &BTreeMap<ZVector2, BasisElement>) -> Result<bool> {
        let mut residual = x.clone();
        let mut ties = Vec::new();
        for _ in 0..MAX_STEPS {
            if residual.is_zero() {
                return Ok(true);
            }
            let c = pick_minimal(&residual, &mut ties)?;
            let Some(e) = elems.get(&ZVector2([-c[0], -c[1]])) else {
                return Ok(false);
            };
            let Some(coeff) = residual.coeff(&c).div_exact(&e.value.coeff(&c)) else {
                return Ok(false);
            };
            residual = residual.try_sub(&e.value.scale(&coeff))?;
        }
        Ok(false)
    }

    pub fn basis_check(&self, radius: i64, policy: Policy) -> Result<BasisReport> {
        let elems = self.elements(radius, policy)?;
        let bound = 4 * radius + 4;
        let records = self.ctx.exec().map(elems.values().cloned().collect(), |e| -> Result<BasisRecord> {
            let min = match e.value.min_exponent()? {
                Minimal::Unique(c) => Some(c),
                Minimal::NotUnique(_) => None,
            };
            let exp = self.expand_standard(&e.value, bound)?;
            let lead = exp.leading().cloned();
            let minus_d = vec![-e.d.0[0], -e.d.0[1]];
            Ok(BasisRecord {
                d: e.d,
                object: e.object.clone(),
                min_is_minus_d: min.as_ref() == Some(&minus_d),
                min_exponent: min,
                leading: lead.as_ref().map(|(_, c)| c.to_string()),
                leading_is_unit: lead.as_ref().is_some_and(|(l, c)| *l == e.d.0 && c.as_unit().is_some()),
                expansion_len: exp.terms.len(),
                ties: exp.ties.len(),
            })
        });
        let records: Vec<BasisRecord> = records.into_iter().collect::<Result<_>>()?;
        let mins: Vec<&Vec<i64>> = records.iter().filter_map(|r| r.min_exponent.as_ref()).collect();
        let distinct = mins.len() == records.len() && mins.iter().collect::<BTreeSet<_>>().len() == mins.len();
        let triangular_unit = records.iter().all(|r| r.leading_is_unit);
        let mut cluster_variables = Vec::new();
        let mut seen = BTreeSet::new();
        for (k, x) in rank2_vars(self.b as u32, self.c as u32, VAR_RANGE.0, VAR_RANGE.1)? {
            let inside = x.exponents().all(|c| c.iter().all(|v| v.abs() <= radius));
            if !inside || !seen.insert(x.clone()) {
                continue;
            }
            let span = self.in_span(&x, &elems)?;
            let occurs = elems.values().any(|e| {
                e.value.len() == x.len()
                    && e.value.terms().all(|(c, a)| {
                        let b = x.coeff(c);
                        !b.is_zero() && a.div_exact(&b).and_then(|u| u.as_unit()).is_some()
                    })
                    && {
                        let (c0, a0) = e.value.terms().next().expect("nonzero");
                        let u = a0.div_exact(&x.coeff(c0)).expect("checked");
                        e.value == x.scale(&u)
                    }
            });
            cluster_variables.push((k, span, occurs));
        }
        let passed = distinct && triangular_unit && cluster_variables.iter().all(|(_, s, _)| *s);
        Ok(BasisReport {
            b: self.b,
            c: self.c,
            radius,
            policy,
            records,
            distinct_min_exponents: distinct,
            triangular_unit,
            cluster_variables,
            passed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_order() {
        assert_eq!(porder(&[0, 0], &[1, 1]), POrder::Less);
        assert_eq!(porder(&[1, 0], &[0, 1]), POrder::Incomparable);
        assert_eq!(porder(&[2, 3], &[2, 3]), POrder::Equal);
        assert_eq!(porder(&[2, 3], &[2, 1]), POrder::Greater);
    }

    #[test]
    fn roots() {
        assert_eq!(real_roots(1, 1, 6), vec![[0, 1], [1, 0], [1, 1]]);
        assert_eq!(real_roots(1, 2, 6).len(), 4);
        assert_eq!(real_roots(1, 3, 6).len(), 6);
    }

    #[test]
    fn a2_elements() {
        let f = Rank2Family::new(1, 1, Exec::Sequential).unwrap();
        let t = f.context().torus().clone();
        let m = |c: &[i64]| TorusElement::monomial(&t, c).unwrap();
        assert_eq!(f.make_xd(ZVector2([-1, 0]), Policy::Generic).unwrap().value, m(&[1, 0]));
        assert_eq!(f.make_xd(ZVector2([1, 0]), Policy::Generic).unwrap().value, &m(&[-1, 1]) + &m(&[-1, 0]));
        assert_eq!(f.make_xd(ZVector2([0, 0]), Policy::Generic).unwrap().value, TorusElement::one(&t));
        let x11 = f.make_xd(ZVector2([1, 1]), Policy::Generic).unwrap();
        assert_eq!(x11.value.len(), 3);
        let e = f.expand_standard(&x11.value, 8).unwrap();
        assert_eq!(e.leading().unwrap().0, [1, 1]);
        assert!(e.leading().unwrap().1.as_unit().is_some());
        let vars = rank2_vars(1, 1, 1, 3).unwrap();
        let x3 = &vars.iter().find(|(k, _)| *k == 3).unwrap().1;
        assert_eq!(*x3, f.make_xd(ZVector2([1, 0]), Policy::Generic).unwrap().value);
    }

    #[test]
    fn a2_basis_radius_one() {
        let f = Rank2Family::new(1, 1, Exec::Parallel).unwrap();
        let r = f.basis_check(1, Policy::Generic).unwrap();
        assert_eq!(r.records.len(), 9);
        assert!(r.passed, "{r:#?}");
    }
}
