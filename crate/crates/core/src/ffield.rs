//! Finite fields as towers `F_p[s]/(g)` and `F_q[t]/(f)`.
//!
//! Elements are `u32` indices whose digits in base `|base|` are the
//! coordinates in the power basis `1, t, t², …`. The modulus of each layer
//! is the smallest monic irreducible by coefficient index, so every build
//! is reproducible.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

const ADD_TABLE_LIMIT: u32 = 1024;
const MAX_ORDER: u64 = 1 << 20;

#[derive(Debug)]
pub struct Field {
    order: u32,
    characteristic: u32,
    degree: u32,
    base: Option<Arc<Field>>,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.degree == other.degree
            && self.modulus == other.modulus
            && self.base.as_ref().map(|b| b.order) == other.base.as_ref().map(|b| b.order)
    }
}

impl Eq for Field {}

/// `(p, k)` with `q = p^k`, or `None`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p as u32, k))
}

/// Prime powers in increasing order: 2, 3, 4, 5, 7, 8, 9, 11, …
pub fn prime_powers() -> impl Iterator<Item = u32> {
    (2u32..).filter(|&q| prime_power(q as u64).is_some())
}

type Cache = Mutex<HashMap<(u32, u32), Arc<Field>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl Field {
    /// The field with `q` elements.
    pub fn new(q: u64) -> Result<Arc<Field>> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(Error::BoundExceeded(format!("field of order {q}")));
        }
        let prime = Self::cached(p, 1, || Ok(Self::prime(p)))?;
        if k == 1 {
            Ok(prime)
        } else {
            Self::cached(q as u32, 1, || Self::build_extension(&prime, k))
        }
    }

    /// The degree-`d` extension of `base`, presented over `base`.
    pub fn extension(base: &Arc<Field>, d: u32) -> Result<Arc<Field>> {
        if d == 1 {
            return Ok(base.clone());
        }
        let order = (base.order as u64).checked_pow(d).filter(|o| *o <= MAX_ORDER);
        if order.is_none() {
            return Err(Error::BoundExceeded(format!("extension of degree {d} over F_{}", base.order)));
        }
        Self::cached(base.order, d, || Self::build_extension(base, d))
    }

    fn cached(key_q: u32, d: u32, build: impl FnOnce() -> Result<Field>) -> Result<Arc<Field>> {
        if let Some(f) = cache().lock().unwrap().get(&(key_q, d)) {
            return Ok(f.clone());
        }
        let f = Arc::new(build()?);
        Ok(cache().lock().unwrap().entry((key_q, d)).or_insert(f).clone())
    }

    fn prime(p: u32) -> Field {
        let mut f = Field {
            order: p,
            characteristic: p,
            degree: 1,
            base: None,
            modulus: vec![0, 1],
            exp: Vec::new(),
            log: Vec::new(),
            add: Vec::new(),
        };
        let g = (1..p)
            .find(|&g| {
                let mut x = g;
                let mut ord = 1;
                while x != 1 {
                    x = ((x as u64 * g as u64) % p as u64) as u32;
                    ord += 1;
                }
                ord == p - 1
            })
            .unwrap_or(1);
        f.fill_log_tables(g, |a, b| ((a as u64 * b as u64) % p as u64) as u32);
        f
    }

    fn build_extension(base: &Arc<Field>, d: u32) -> Result<Field> {
        let s = base.order;
        let order = s.pow(d);
        let modulus = (0..s.pow(d))
            .map(|idx| {
                let mut c = digits(idx, s, d as usize);
                c.push(1);
                c
            })
            .find(|c| is_irreducible(base, c))
            .ok_or_else(|| Error::BoundExceeded("no irreducible polynomial found".into()))?;
        let mut f = Field {
            order,
            characteristic: base.characteristic,
            degree: d,
            base: Some(base.clone()),
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add: Vec::new(),
        };
        let slow = |a: u32, b: u32| f.slow_mul(a, b);
        let g = (2..order)
            .find(|&g| {
                let mut x = g;
                let mut ord = 1u32;
                while x != 1 {
                    x = slow(x, g);
                    ord += 1;
                    if ord > order {
                        return false;
                    }
                }
                ord == order - 1
            })
            .unwrap_or(1);
        let (exp, log) = log_tables(order, g, slow);
        f.exp = exp;
        f.log = log;
        if order <= ADD_TABLE_LIMIT {
            let mut add = vec![0; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    add[(a * order + b) as usize] = f.digit_add(a, b);
                }
            }
            f.add = add;
        }
        Ok(f)
    }

    fn fill_log_tables(&mut self, g: u32, mul: impl Fn(u32, u32) -> u32) {
        let (exp, log) = log_tables(self.order, g, mul);
        self.exp = exp;
        self.log = log;
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let base = self.base.as_ref().expect("extension field");
        let s = base.order;
        let d = self.degree as usize;
        let (x, y) = (digits(a, s, d), digits(b, s, d));
        let mut prod = vec![0u32; 2 * d];
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                prod[i + j] = base.add(prod[i + j], base.mul(*xi, *yj));
            }
        }
        for top in (d..2 * d).rev() {
            let c = prod[top];
            if c != 0 {
                for (j, mj) in self.modulus[..d].iter().enumerate() {
                    prod[top - d + j] = base.sub(prod[top - d + j], base.mul(c, *mj));
                }
                prod[top] = 0;
            }
        }
        undigits(&prod[..d], s)
    }

    fn digit_add(&self, a: u32, b: u32) -> u32 {
        let base = self.base.as_ref().expect("extension field");
        let s = base.order;
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.degree {
            out += base.add(a % s, b % s) * place;
            a /= s;
            b /= s;
            place *= s;
        }
        out
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    /// Degree over the field this one is presented over.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn base(&self) -> Option<&Arc<Field>> {
        self.base.as_ref()
    }

    /// Monic modulus over the base, lowest coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element used for the log tables.
    pub fn generator(&self) -> u32 {
        if self.order == 2 {
            1
        } else {
            self.exp[1]
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.base.is_none() {
            let s = a + b;
            if s >= self.order {
                s - self.order
            } else {
                s
            }
        } else if !self.add.is_empty() {
            self.add[(a * self.order + b) as usize]
        } else {
            self.digit_add(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match &self.base {
            None => {
                if a == 0 {
                    0
                } else {
                    self.order - a
                }
            }
            Some(base) => {
                let s = base.order;
                let (mut a, mut out, mut place) = (a, 0, 1);
                for _ in 0..self.degree {
                    out += base.neg(a % s) * place;
                    a /= s;
                    place *= s;
                }
                out
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.order - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.order - 1;
        let l = self.log[a as usize];
        Some(self.exp[((n - l) % n) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.order - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Coordinates over the base field in the basis `1, t, …, t^{d-1}`.
    pub fn coords(&self, a: u32) -> Vec<u32> {
        let s = self.base.as_ref().map_or(self.order, |b| b.order);
        if self.base.is_none() {
            return vec![a];
        }
        digits(a, s, self.degree as usize)
    }

    pub fn from_coords(&self, c: &[u32]) -> u32 {
        match &self.base {
            None => c[0],
            Some(b) => undigits(c, b.order),
        }
    }

    /// Matrix of multiplication by `a` over the base: column `j` holds the
    /// coordinates of `a·t^j`.
    pub fn mul_matrix(&self, a: u32) -> Vec<Vec<u32>> {
        let d = self.degree as usize;
        let mut m = vec![vec![0; d]; d];
        let mut basis = 1u32;
        let t = self.base.as_ref().map_or(1, |b| b.order);
        for j in 0..d {
            let col = self.coords(self.mul(a, basis));
            for i in 0..d {
                m[i][j] = col[i];
            }
            basis = if self.base.is_some() { self.mul(basis, t) } else { basis };
        }
        m
    }
}

fn log_tables(order: u32, g: u32, mul: impl Fn(u32, u32) -> u32) -> (Vec<u32>, Vec<u32>) {
    let n = (order - 1) as usize;
    let mut exp = vec![0u32; n.max(1)];
    let mut log = vec![0u32; order as usize];
    let mut x = 1u32;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = x;
        log[x as usize] = i as u32;
        x = mul(x, g);
    }
    (exp, log)
}

fn digits(mut x: u32, base: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let r = x % base;
            x /= base;
            r
        })
        .collect()
}

fn undigits(c: &[u32], base: u32) -> u32 {
    c.iter().rev().fold(0, |acc, d| acc * base + d)
}

/// Remainder of `a` modulo the monic `m` over `f`.
fn poly_rem(f: &Field, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (j, mj) in m.iter().enumerate() {
                r[shift + j] = f.sub(r[shift + j], f.mul(c, *mj));
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(f: &Field, poly: &[u32]) -> bool {
    let d = poly.len() - 1;
    if d <= 1 {
        return true;
    }
    let s = f.order;
    for k in 1..=d / 2 {
        for idx in 0..s.pow(k as u32) {
            let mut factor = digits(idx, s, k);
            factor.push(1);
            if poly_rem(f, poly, &factor).iter().all(|c| *c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &Field) {
        let q = f.order();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            assert_eq!(f.mul(a, 1), a);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in [0, 1, q - 1, q / 2] {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        let first: Vec<u32> = prime_powers().take(9).collect();
        assert_eq!(first, vec![2, 3, 4, 5, 7, 8, 9, 11, 13]);
        assert!(matches!(Field::new(12), Err(Error::NotPrimePower(12))));
    }

    #[test]
    fn axioms_hold() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25] {
            check_axioms(&Field::new(q).unwrap());
        }
        let f3 = Field::new(3).unwrap();
        check_axioms(&Field::extension(&f3, 2).unwrap());
        let f4 = Field::new(4).unwrap();
        check_axioms(&Field::extension(&f4, 3).unwrap());
    }

    #[test]
    fn extension_contains_base() {
        let f4 = Field::new(4).unwrap();
        let f16 = Field::extension(&f4, 2).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(f16.mul(a, b), f4.mul(a, b));
                assert_eq!(f16.add(a, b), f4.add(a, b));
            }
        }
    }

    #[test]
    fn multiplication_matrix_is_a_representation() {
        let f3 = Field::new(3).unwrap();
        let f9 = Field::extension(&f3, 2).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                let (ma, mb, mab) = (f9.mul_matrix(a), f9.mul_matrix(b), f9.mul_matrix(f9.mul(a, b)));
                for i in 0..2 {
                    for j in 0..2 {
                        let s = (0..2).fold(0, |acc, k| f3.add(acc, f3.mul(ma[i][k], mb[k][j])));
                        assert_eq!(s, mab[i][j]);
                    }
                }
            }
        }
    }
}
