//! Compatible pairs, matrix and quantum seed mutation, and the rank-2
//! cluster-variable recursion.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qring::qbinom;
use crate::torus::{SkewForm, TorusElement};

pub type IntMatrix = Vec<Vec<i64>>;

/// The diagonal `D` of a compatible pair together with the column of
/// `B̃ᵀΛ` holding each diagonal entry (the identity for `(D|0)` itself).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Compatibility {
    pub d: Vec<i64>,
    pub columns: Vec<usize>,
}

fn shape(b: &[Vec<i64>]) -> Result<(usize, usize)> {
    let m = b.len();
    let n = b.first().map_or(0, |r| r.len());
    if b.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeMismatch("ragged exchange matrix".into()));
    }
    Ok((m, n))
}

/// Checks `B̃ᵀΛ = (D|0)` up to a permutation of columns.
pub fn check_compatible(lambda: &SkewForm, b: &[Vec<i64>]) -> Result<Compatibility> {
    let (m, n) = shape(b)?;
    if m != lambda.rank() || n > m {
        return Err(Error::ShapeMismatch(format!(
            "B̃ is {m}×{n} but Λ has rank {}",
            lambda.rank()
        )));
    }
    let mut d = Vec::with_capacity(n);
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        // row j of B̃ᵀΛ
        let row: Vec<i64> = (0..m)
            .map(|l| (0..m).map(|i| b[i][j] * lambda.entry(i, l)).sum())
            .collect();
        let nonzero: Vec<usize> = (0..m).filter(|&l| row[l] != 0).collect();
        match nonzero.as_slice() {
            [l] if row[*l] > 0 && !columns.contains(l) => {
                d.push(row[*l]);
                columns.push(*l);
            }
            _ => {
                return Err(Error::Incompatible(format!(
                    "row {} of B̃ᵀΛ is {row:?}",
                    j + 1
                )))
            }
        }
    }
    Ok(Compatibility { d, columns })
}

/// Matrix mutation in direction `k` (one-based).
pub fn mutate_matrix(b: &[Vec<i64>], k: usize) -> Result<IntMatrix> {
    let (m, n) = shape(b)?;
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { index: k, len: n });
    }
    let k = k - 1;
    let mut out = b.to_vec();
    for i in 0..m {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else {
                b[i][j] + (b[i][k].abs() * b[k][j] + b[i][k] * b[k][j].abs()) / 2
            };
        }
    }
    Ok(out)
}

/// The `m×m` matrix `E` of a mutation in direction `k` (zero-based).
fn mutation_e(b: &[Vec<i64>], k: usize) -> IntMatrix {
    let m = b.len();
    let mut e = vec![vec![0; m]; m];
    for (i, row) in e.iter_mut().enumerate() {
        if i == k {
            row[k] = -1;
        } else {
            row[i] = 1;
            row[k] = (-b[i][k]).max(0);
        }
    }
    e
}

/// A quantum seed: current form `Λ_M`, exchange matrix `B̃` and the current
/// cluster variables and coefficients, written in the initial torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumSeed {
    torus: Arc<SkewForm>,
    lambda: SkewForm,
    b: IntMatrix,
    vars: Vec<TorusElement>,
    compat: Compatibility,
}

impl QuantumSeed {
    pub fn initial(lambda: SkewForm, b: IntMatrix) -> Result<Self> {
        let compat = check_compatible(&lambda, &b)?;
        let torus = Arc::new(lambda.clone());
        let vars = (0..lambda.rank())
            .map(|i| TorusElement::generator(&torus, i))
            .collect();
        Ok(Self { torus, lambda, b, vars, compat })
    }

    pub fn torus(&self) -> &Arc<SkewForm> {
        &self.torus
    }

    pub fn lambda(&self) -> &SkewForm {
        &self.lambda
    }

    pub fn exchange_matrix(&self) -> &IntMatrix {
        &self.b
    }

    pub fn vars(&self) -> &[TorusElement] {
        &self.vars
    }

    pub fn compatibility(&self) -> &Compatibility {
        &self.compat
    }

    pub fn n(&self) -> usize {
        self.b.first().map_or(0, |r| r.len())
    }

    /// Cluster variables (the first `n` entries).
    pub fn cluster(&self) -> &[TorusElement] {
        &self.vars[..self.n()]
    }

    /// Frame element `M(c)` for `c ≥ 0`: the normalized ordered product of
    /// the current variables.
    pub fn frame(&self, c: &[i64]) -> Result<TorusElement> {
        let m = self.lambda.rank();
        if c.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: c.len() });
        }
        if c.iter().any(|x| *x < 0) {
            return Err(Error::ShapeMismatch("frame() takes nonnegative exponents".into()));
        }
        let mut twist = 0;
        for i in 0..m {
            for j in i + 1..m {
                twist += c[i] * c[j] * self.lambda.entry(j, i);
            }
        }
        let mut acc = TorusElement::one(&self.torus).shift(twist);
        for (x, ci) in self.vars.iter().zip(c) {
            acc = &acc * &x.pow(*ci as u32);
        }
        Ok(acc)
    }

    fn diag_entry(&self, k: usize) -> i64 {
        self.compat.d[k]
    }

    /// The mutated frame `M'(c)` for `c ≥ 0`, expanded with quantum binomials.
    /// `k` is one-based.
    pub fn mutated_frame(&self, k: usize, c: &[i64]) -> Result<TorusElement> {
        let n = self.n();
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange { index: k, len: n });
        }
        let k = k - 1;
        let m = self.lambda.rank();
        if c.len() != m || c.iter().any(|x| *x < 0) {
            return Err(Error::ShapeMismatch("mutated_frame takes a nonnegative m-vector".into()));
        }
        let e = mutation_e(&self.b, k);
        let ck = c[k];
        let ec: Vec<i64> = (0..m).map(|i| (0..m).map(|j| e[i][j] * c[j]).sum()).collect();
        let mut ek_scaled = vec![0; m];
        ek_scaled[k] = ck;
        let scale = self.diag_entry(k) as u32;
        let mut sum = TorusElement::zero(&self.torus);
        for p in 0..=ck {
            // M(Ec + p b^k) = q^{Λ(c_k e_k, c')/2} X_k^{-c_k} M(c') with c'_k = 0
            let mut rest: Vec<i64> = (0..m).map(|i| ec[i] + p * self.b[i][k]).collect();
            debug_assert_eq!(rest[k], -ck);
            rest[k] = 0;
            let twist = self.lambda.eval(&ek_scaled, &rest);
            let coeff = qbinom(ck as u32, p as u32, scale).shift(twist);
            sum = &sum + &self.frame(&rest)?.scale(&coeff);
        }
        sum.div_left(&self.vars[k].pow(ck as u32))
    }

    /// Quantum seed mutation in direction `k` (one-based).
    pub fn mutate(&self, k: usize) -> Result<Self> {
        let n = self.n();
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange { index: k, len: n });
        }
        let m = self.lambda.rank();
        let mut ek = vec![0; m];
        ek[k - 1] = 1;
        let fresh = self.mutated_frame(k, &ek)?;
        let e = mutation_e(&self.b, k - 1);
        let lam: IntMatrix = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let mut s = 0;
                        for a in 0..m {
                            for c in 0..m {
                                s += e[a][i] * self.lambda.entry(a, c) * e[c][j];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let lambda = SkewForm::new(lam)?;
        let b = mutate_matrix(&self.b, k)?;
        let compat = check_compatible(&lambda, &b)?;
        let mut vars = self.vars.clone();
        vars[k - 1] = fresh;
        Ok(Self { torus: self.torus.clone(), lambda, b, vars, compat })
    }

    /// Mutates along a sequence of one-based directions.
    pub fn mutate_along(&self, dirs: &[usize]) -> Result<Self> {
        let mut s = self.clone();
        for &k in dirs {
            s = s.mutate(k)?;
        }
        Ok(s)
    }
}

#[derive(Serialize)]
struct SeedRepr<'a> {
    lambda: &'a SkewForm,
    b: &'a IntMatrix,
    d: &'a [i64],
    vars: &'a [TorusElement],
}

impl Serialize for QuantumSeed {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeedRepr { lambda: &self.lambda, b: &self.b, d: &self.compat.d, vars: &self.vars }
            .serialize(s)
    }
}

/// All cluster variables reachable from `seed`, explored breadth-first over
/// at most `max_seeds` distinct clusters. Output is sorted.
pub fn cluster_variables(seed: &QuantumSeed, max_seeds: usize) -> Result<Vec<TorusElement>> {
    let key = |s: &QuantumSeed| s.cluster().iter().cloned().collect::<BTreeSet<_>>();
    let mut seen = BTreeSet::new();
    let mut vars = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(key(seed));
    queue.push_back(seed.clone());
    while let Some(s) = queue.pop_front() {
        vars.extend(s.cluster().iter().cloned());
        for k in 1..=s.n() {
            let t = s.mutate(k)?;
            if seen.insert(key(&t)) {
                if seen.len() > max_seeds {
                    return Err(Error::BoundExceeded(format!("more than {max_seeds} clusters")));
                }
                queue.push_back(t);
            }
        }
    }
    Ok(vars.into_iter().collect())
}

/// The rank-2 cluster variables `X_lo..=X_hi` for `Λ = [[0,1],[-1,0]]`:
/// `X_{m-1} X_{m+1} = q^{b/2} X_m^b + 1` for odd `m`, `q^{c/2} X_m^c + 1` for even `m`.
pub fn rank2_vars(b: u32, c: u32, lo: i64, hi: i64) -> Result<Vec<(i64, TorusElement)>> {
    if lo > 1 || hi < 2 {
        return Err(Error::ShapeMismatch("range must contain X_1 and X_2".into()));
    }
    let ctx = Arc::new(SkewForm::standard_rank2());
    let exchange = |m: i64, x: &TorusElement| {
        let e = if m.rem_euclid(2) == 1 { b } else { c };
        &x.pow(e).shift(e as i64) + &TorusElement::one(&ctx)
    };
    let mut fwd = vec![TorusElement::generator(&ctx, 0), TorusElement::generator(&ctx, 1)];
    for m in 2..hi {
        let i = (m - 1) as usize;
        let next = exchange(m, &fwd[i]).div_left(&fwd[i - 1])?;
        fwd.push(next);
    }
    // back[j] = X_{1-j}
    let mut back = vec![fwd[0].clone()];
    let mut m = 1;
    while m > lo {
        let j = (1 - m) as usize;
        let x_prev = exchange(m, &back[j]).div_right(if j == 0 { &fwd[1] } else { &back[j - 1] })?;
        back.push(x_prev);
        m -= 1;
    }
    let get = |m: i64| -> TorusElement {
        if m >= 1 {
            fwd[(m - 1) as usize].clone()
        } else {
            back[(1 - m) as usize].clone()
        }
    };
    Ok((lo..=hi).map(|m| (m, get(m))).collect())
}
