//! Field-independent descriptions of modules, realized over each `F_q`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::hom::ext_dim;
use super::species::{Rep, Species};

/// A module named independently of the field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Descriptor {
    /// Structure matrices with entries in `{0, 1}`, meaningful over every field.
    Template { name: String, dim: Vec<usize>, entries: Vec<Vec<Vec<u32>>> },
    /// The module without self-extensions of this dimension.
    Rigid { dim: Vec<usize> },
    Sum(Vec<Descriptor>),
}

const RIGID_TRIES: usize = 400;

fn is_rigid(sp: &Species, rep: &Rep) -> bool {
    ext_dim(sp, rep, rep) == 0
}

/// Searches for a rigid module, first randomly and then exhaustively.
pub fn find_rigid(sp: &Species, dim: &[usize]) -> Result<Rep> {
    let len = sp.coord_len(dim, dim);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ dim.iter().fold(0, |a, d| a * 31 + *d as u64));
    for _ in 0..RIGID_TRIES {
        let coords: Vec<u32> = (0..len).map(|_| rng.gen_range(0..sp.q())).collect();
        let rep = sp.rep_from_coords(dim, &coords);
        if is_rigid(sp, &rep) {
            return Ok(rep);
        }
    }
    let total = sp.space_size(dim).filter(|t| *t <= 1 << 18);
    if let Some(total) = total {
        for idx in 0..total {
            let rep = sp.rep_from_index(dim, idx);
            if is_rigid(sp, &rep) {
                return Ok(rep);
            }
        }
    }
    Err(Error::NoRigidModule(dim.to_vec()))
}

impl Descriptor {
    pub fn template(name: &str, dim: Vec<usize>, entries: Vec<Vec<Vec<u32>>>) -> Self {
        Self::Template { name: name.into(), dim, entries }
    }

    pub fn rigid(dim: Vec<usize>) -> Self {
        Self::Rigid { dim }
    }

    /// Sum of the parts, flattening nested sums and sorting summands.
    pub fn sum(parts: Vec<Descriptor>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Self::Sum(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        flat.sort();
        if flat.len() == 1 {
            flat.pop().expect("one summand")
        } else {
            Self::Sum(flat)
        }
    }

    pub fn zero() -> Self {
        Self::Sum(Vec::new())
    }

    pub fn dim(&self, vertices: usize) -> Vec<usize> {
        match self {
            Self::Template { dim, .. } | Self::Rigid { dim } => dim.clone(),
            Self::Sum(parts) => parts.iter().fold(vec![0; vertices], |acc, p| {
                acc.iter().zip(p.dim(vertices)).map(|(a, b)| a + b).collect()
            }),
        }
    }

    pub fn realize(&self, sp: &Species) -> Result<Rep> {
        match self {
            Self::Template { dim, entries, .. } => sp.rep_from_entries(dim.clone(), entries),
            Self::Rigid { dim } => find_rigid(sp, dim),
            Self::Sum(parts) => {
                let mut acc = sp.zero_rep(&vec![0; sp.vertices()]);
                for p in parts {
                    acc = acc.direct_sum(&p.realize(sp)?);
                }
                Ok(acc)
            }
        }
    }

    pub fn summands(&self) -> Vec<Descriptor> {
        match self {
            Self::Sum(parts) => parts.clone(),
            other => vec![other.clone()],
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims = |d: &[usize]| d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Self::Template { name, .. } => write!(f, "{name}"),
            Self::Rigid { dim } => write!(f, "M({})", dims(dim)),
            Self::Sum(parts) if parts.is_empty() => write!(f, "0"),
            Self::Sum(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", s.join("+"))
            }
        }
    }
}

/// Indecomposable descriptors for the built-in quivers: every indecomposable
/// in finite type, and for the Kronecker quiver those of dimension at most
/// `(2,2)` with regular parameter in `{0, 1, ∞}`.
pub fn indecomposables(preset: &str) -> Result<Vec<Descriptor>> {
    let rigid = |dims: &[[usize; 2]]| dims.iter().map(|d| Descriptor::rigid(d.to_vec())).collect();
    match preset {
        "a2" => Ok(rigid(&[[1, 0], [0, 1], [1, 1]])),
        "b2" => Ok(rigid(&[[1, 0], [0, 1], [1, 1], [1, 2]])),
        "g2" => Ok(rigid(&[[1, 0], [0, 1], [1, 1], [1, 2], [1, 3], [2, 3]])),
        "kronecker" => Ok(kronecker_indecomposables()),
        other => Err(Error::Parse(format!("no indecomposable list for {other}"))),
    }
}

fn kronecker_indecomposables() -> Vec<Descriptor> {
    let t = Descriptor::template;
    vec![
        t("S1", vec![1, 0], vec![vec![], vec![]]),
        t("S2", vec![0, 1], vec![vec![], vec![]]),
        t("P1", vec![1, 2], vec![vec![vec![1], vec![0]], vec![vec![0], vec![1]]]),
        t("I2", vec![2, 1], vec![vec![vec![1, 0]], vec![vec![0, 1]]]),
        t("R0", vec![1, 1], vec![vec![vec![1]], vec![vec![0]]]),
        t("R1", vec![1, 1], vec![vec![vec![1]], vec![vec![1]]]),
        t("Rinf", vec![1, 1], vec![vec![vec![0]], vec![vec![1]]]),
        t("R0[2]", vec![2, 2], vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]]),
        t("R1[2]", vec![2, 2], vec![vec![vec![1, 0], vec![0, 1]], vec![vec![1, 1], vec![0, 1]]]),
        t("Rinf[2]", vec![2, 2], vec![vec![vec![0, 1], vec![0, 0]], vec![vec![1, 0], vec![0, 1]]]),
    ]
}

/// All direct sums of the given indecomposables with dimension `≤ dmax`,
/// including the zero module, in a canonical order.
pub fn modules_up_to(indec: &[Descriptor], dmax: &[usize]) -> Vec<Descriptor> {
    let n = dmax.len();
    let mut out = Vec::new();
    fn rec(
        indec: &[Descriptor],
        start: usize,
        cur: &mut Vec<Descriptor>,
        dim: Vec<usize>,
        dmax: &[usize],
        out: &mut Vec<Descriptor>,
    ) {
        out.push(Descriptor::sum(cur.clone()));
        for k in start..indec.len() {
            let d = indec[k].dim(dmax.len());
            let next: Vec<usize> = dim.iter().zip(&d).map(|(a, b)| a + b).collect();
            if next.iter().zip(dmax).all(|(a, b)| a <= b) {
                cur.push(indec[k].clone());
                rec(indec, k, cur, next, dmax, out);
                cur.pop();
            }
        }
    }
    rec(indec, 0, &mut Vec::new(), vec![0; n], dmax, &mut out);
    out.sort_by_key(|d| (d.dim(n), d.clone()));
    out
}

/// An indecomposable injective for the principal species: the rigid module
/// whose socle is the simple at `vertex`, found among `indec`.
pub fn injective(sp: &Species, indec: &[Descriptor], vertex: usize) -> Result<Descriptor> {
    for d in indec {
        let rep = d.realize(sp)?;
        let soc = super::hom::socle_dim(sp, &rep);
        let simple_soc = soc.iter().enumerate().all(|(i, s)| *s == usize::from(i == vertex));
        if simple_soc && super::hom::is_injective(sp, &rep) {
            return Ok(d.clone());
        }
    }
    Err(Error::NotInjective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repbrute::hom::hom_dim;
    use crate::repbrute::sub::gr_count;
    use crate::speckit::{a2, b2, kronecker, rank2};

    #[test]
    fn rigid_modules_exist_for_roots() {
        for q in [2, 3] {
            let sp = Species::new(&a2().quiver, q).unwrap();
            for d in indecomposables("a2").unwrap() {
                let r = d.realize(&sp).unwrap();
                assert_eq!(hom_dim(&sp, &r, &r), 1);
            }
            let sp = Species::new(&b2().quiver, q).unwrap();
            for d in indecomposables("b2").unwrap() {
                let r = d.realize(&sp).unwrap();
                assert_eq!(ext_dim(&sp, &r, &r), 0, "{d}");
            }
            let sp = Species::new(&rank2(1, 3).unwrap().quiver, q).unwrap();
            for d in indecomposables("g2").unwrap() {
                let r = d.realize(&sp).unwrap();
                assert_eq!(ext_dim(&sp, &r, &r), 0, "{d}");
            }
        }
    }

    #[test]
    fn kronecker_regular_modules_have_no_rigid_form() {
        let sp = Species::new(&kronecker().quiver, 2).unwrap();
        assert!(find_rigid(&sp, &[1, 1]).is_err());
        let r = kronecker_indecomposables()[7].realize(&sp).unwrap();
        assert_eq!(gr_count(&sp, &r, &[1, 1]), 1);
    }

    #[test]
    fn module_lists() {
        let a = modules_up_to(&indecomposables("a2").unwrap(), &[1, 1]);
        // 0, S1, S2, S1+S2, P1
        assert_eq!(a.len(), 5);
        assert_eq!(a[0], Descriptor::zero());
        let sp = Species::new(&a2().quiver, 2).unwrap();
        let i2 = injective(&sp, &indecomposables("a2").unwrap(), 1).unwrap();
        assert_eq!(i2.dim(2), vec![1, 1]);
        let k = Species::new(&kronecker().quiver, 2).unwrap();
        let i = injective(&k, &kronecker_indecomposables(), 1).unwrap();
        assert_eq!(i.dim(2), vec![2, 1]);
    }
}
