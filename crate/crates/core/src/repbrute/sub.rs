//! Subspaces over the vertex fields, submodules, sub- and quotient
//! representations.

use crate::ffield::Field;
use crate::linalg::Mat;

use super::species::{Rep, Species};

/// Every `e`-dimensional subspace of `F^n`, as a reduced echelon basis
/// (rows of field elements).
pub fn subspaces(f: &Field, n: usize, e: usize) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    if e > n {
        return out;
    }
    let q = f.order() as u64;
    let mut pivots: Vec<usize> = (0..e).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..e)
            .flat_map(|r| {
                let p = &pivots;
                (p[r] + 1..n).filter(move |c| !p.contains(c)).map(move |c| (r, c))
            })
            .collect();
        for idx in 0..q.pow(free.len() as u32) {
            let mut rows = vec![vec![0u32; n]; e];
            for (r, p) in pivots.iter().enumerate() {
                rows[r][*p] = 1;
            }
            let mut x = idx;
            for (r, c) in &free {
                rows[*r][*c] = (x % q) as u32;
                x /= q;
            }
            out.push(rows);
        }
        // next combination
        let mut k = e;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if pivots[k] < n - e + k {
                pivots[k] += 1;
                for j in k + 1..e {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
        if e == 0 {
            return out;
        }
    }
}

/// A subspace at one vertex: generators over the vertex field and the
/// matching `F_q`-basis (columns `t^j w` for each generator `w`).
#[derive(Clone, Debug)]
pub struct VertexSub {
    pub gens: Vec<Vec<u32>>,
    pub basis: Mat,
}

impl VertexSub {
    pub fn new(sp: &Species, i: usize, gens: Vec<Vec<u32>>, ambient: usize) -> Self {
        let d = sp.d(i);
        let f = sp.vfield(i);
        let mut basis = Mat::zeros(ambient * d, gens.len() * d);
        for (g, w) in gens.iter().enumerate() {
            let mut tw = w.clone();
            for j in 0..d {
                let col = sp.vec_to_fq(i, &tw);
                for (r, v) in col.into_iter().enumerate() {
                    basis.set(r, g * d + j, v);
                }
                tw = tw.iter().map(|x| f.mul(*x, sp.t(i))).collect();
            }
        }
        Self { gens, basis }
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }
}

/// Candidate subspaces at one vertex, with the annihilator used for the
/// containment test.
struct Candidate {
    sub: VertexSub,
    annihilator: Mat,
}

fn candidates(sp: &Species, i: usize, n: usize, e: usize) -> Vec<Candidate> {
    subspaces(sp.vfield(i), n, e)
        .into_iter()
        .map(|gens| {
            let sub = VertexSub::new(sp, i, gens, n);
            let annihilator = sub.basis.transpose().nullspace(sp.field()).transpose();
            Candidate { sub, annihilator }
        })
        .collect()
}

/// Calls `visit` with every submodule of dimension `e`; stops early when
/// `visit` returns `false`.
pub fn for_each_submodule(
    sp: &Species,
    rep: &Rep,
    e: &[usize],
    mut visit: impl FnMut(&[VertexSub]) -> bool,
) {
    let nv = sp.vertices();
    if e.iter().zip(rep.dim()).any(|(a, b)| a > b) {
        return;
    }
    let cands: Vec<Vec<Candidate>> =
        (0..nv).map(|i| candidates(sp, i, rep.dim()[i], e[i])).collect();
    let mut choice = vec![0usize; nv];
    let mut images: Vec<Vec<Mat>> = vec![Vec::new(); nv];
    let f = sp.field();

    fn fits(
        sp: &Species,
        rep: &Rep,
        cands: &[Vec<Candidate>],
        choice: &[usize],
        images: &mut [Vec<Mat>],
        level: usize,
    ) -> bool {
        let f = sp.field();
        let mine = &cands[level][choice[level]];
        images[level] = sp
            .comps()
            .iter()
            .enumerate()
            .map(|(c, comp)| {
                if comp.from == level {
                    rep.maps()[c].mul(f, &mine.sub.basis)
                } else {
                    Mat::zeros(0, 0)
                }
            })
            .collect();
        for (c, comp) in sp.comps().iter().enumerate() {
            let (a, b) = (comp.from, comp.to);
            if a > level || b > level || (a != level && b != level) {
                continue;
            }
            let ann = &cands[b][choice[b]].annihilator;
            if ann.rows() > 0 && !ann.mul(f, &images[a][c]).is_zero() {
                return false;
            }
        }
        true
    }

    let _ = f;
    let mut level = 0;
    if nv == 0 {
        visit(&[]);
        return;
    }
    if cands.iter().any(|c| c.is_empty()) {
        return;
    }
    choice[0] = 0;
    loop {
        if fits(sp, rep, &cands, &choice, &mut images, level) {
            if level + 1 == nv {
                let subs: Vec<VertexSub> =
                    (0..nv).map(|i| cands[i][choice[i]].sub.clone()).collect();
                if !visit(&subs) {
                    return;
                }
            } else {
                level += 1;
                choice[level] = 0;
                continue;
            }
        }
        // advance
        loop {
            choice[level] += 1;
            if choice[level] < cands[level].len() {
                break;
            }
            if level == 0 {
                return;
            }
            level -= 1;
        }
    }
}

/// `|Gr_e(M)|`.
pub fn gr_count(sp: &Species, rep: &Rep, e: &[usize]) -> u64 {
    let mut n = 0u64;
    for_each_submodule(sp, rep, e, |_| {
        n += 1;
        true
    });
    n
}

/// All dimension vectors `e ≤ dim`.
pub fn sub_dims(dim: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &d in dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=d).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Sub-representation on the given vertex subspaces.
pub fn restrict(sp: &Species, rep: &Rep, sub: &[VertexSub]) -> Rep {
    let f = sp.field();
    let dim: Vec<usize> = sub.iter().map(|s| s.dim()).collect();
    let maps = sp
        .comps()
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            let image = rep.maps()[c].mul(f, &sub[comp.from].basis);
            let target = &sub[comp.to].basis;
            let mut out = Mat::zeros(target.cols(), image.cols());
            for k in 0..image.cols() {
                let col: Vec<u32> = (0..image.rows()).map(|r| image.get(r, k)).collect();
                let x = target.solve(f, &col).expect("subspace is invariant");
                for (r, v) in x.into_iter().enumerate() {
                    out.set(r, k, v);
                }
            }
            out
        })
        .collect();
    Rep::from_parts(dim, maps)
}

/// Unit vectors (over the vertex field) completing `sub` to a basis.
fn complement_gens(sp: &Species, i: usize, sub: &VertexSub, n: usize) -> Vec<Vec<u32>> {
    let f = sp.field();
    let mut span = sub.basis.clone();
    let mut rank = span.rank(f);
    let mut out = Vec::new();
    for r in 0..n {
        let mut w = vec![0; n];
        w[r] = 1;
        let cand = VertexSub::new(sp, i, vec![w.clone()], n);
        let joined = span.hstack(&cand.basis);
        let new_rank = joined.rank(f);
        if new_rank > rank {
            span = joined;
            rank = new_rank;
            out.push(w);
        }
    }
    out
}

/// Quotient representation `M / U`.
pub fn quotient(sp: &Species, rep: &Rep, sub: &[VertexSub]) -> Rep {
    let f = sp.field();
    let nv = sp.vertices();
    let comps: Vec<VertexSub> = (0..nv)
        .map(|i| {
            let gens = complement_gens(sp, i, &sub[i], rep.dim()[i]);
            VertexSub::new(sp, i, gens, rep.dim()[i])
        })
        .collect();
    let inverses: Vec<Mat> = (0..nv)
        .map(|i| sub[i].basis.hstack(&comps[i].basis).inverse(f).expect("basis"))
        .collect();
    let dim: Vec<usize> = comps.iter().map(|s| s.dim()).collect();
    let maps = sp
        .comps()
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            let image = rep.maps()[c].mul(f, &comps[comp.from].basis);
            let coords = inverses[comp.to].mul(f, &image);
            let skip = sub[comp.to].basis.cols();
            coords.block(skip, 0, coords.rows() - skip, coords.cols())
        })
        .collect();
    Rep::from_parts(dim, maps)
}

/// Generators over the vertex field of an `F_{q^d}`-stable subspace given by
/// `F_q`-columns.
pub fn field_gens(sp: &Species, i: usize, cols: &Mat) -> Vec<Vec<u32>> {
    let f = sp.field();
    let n = cols.rows() / sp.d(i);
    let mut span = Mat::zeros(cols.rows(), 0);
    let mut rank = 0;
    let mut out = Vec::new();
    for k in 0..cols.cols() {
        let v: Vec<u32> = (0..cols.rows()).map(|r| cols.get(r, k)).collect();
        let w = sp.vec_from_fq(i, &v);
        let cand = VertexSub::new(sp, i, vec![w.clone()], n);
        let joined = span.hstack(&cand.basis);
        let new_rank = joined.rank(f);
        if new_rank > rank {
            span = joined;
            rank = new_rank;
            out.push(w);
        }
    }
    out
}

/// Submodule given by `F_q`-column bases that are stable under the vertex
/// fields (kernels, images).
pub fn sub_from_columns(sp: &Species, rep: &Rep, cols: &[Mat]) -> Vec<VertexSub> {
    cols.iter()
        .enumerate()
        .map(|(i, c)| VertexSub::new(sp, i, field_gens(sp, i, c), rep.dim()[i]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::speckit::{a2, b2, kronecker};

    #[test]
    fn subspace_counts_are_gaussian() {
        let f = Field::new(3).unwrap();
        assert_eq!(subspaces(&f, 3, 1).len(), 13);
        assert_eq!(subspaces(&f, 4, 2).len(), 130);
        assert_eq!(subspaces(&f, 2, 0).len(), 1);
        assert_eq!(subspaces(&f, 2, 2).len(), 1);
        assert_eq!(subspaces(&f, 1, 2).len(), 0);
    }

    #[test]
    fn grassmannians_of_small_modules() {
        let sp = Species::new(&a2().quiver, 2).unwrap();
        let p1 = sp.rep_from_entries(vec![1, 1], &[vec![vec![1]]]).unwrap();
        assert_eq!(gr_count(&sp, &p1, &[0, 1]), 1);
        assert_eq!(gr_count(&sp, &p1, &[1, 0]), 0);
        assert_eq!(gr_count(&sp, &p1, &[1, 1]), 1);
        assert_eq!(gr_count(&sp, &p1, &[0, 0]), 1);
        for q in [2, 3] {
            let k = Species::new(&kronecker().quiver, q).unwrap();
            let p = k
                .rep_from_entries(vec![1, 2], &[vec![vec![1], vec![0]], vec![vec![0], vec![1]]])
                .unwrap();
            assert_eq!(gr_count(&k, &p, &[0, 1]), q as u64 + 1);
            assert_eq!(gr_count(&k, &p, &[1, 1]), 0);
        }
        let b = Species::new(&b2().quiver, 3).unwrap();
        let s = b.simple(0).direct_sum(&b.simple(0));
        assert_eq!(gr_count(&b, &s, &[1, 0]), 9 + 1);
    }

    #[test]
    fn restrict_and_quotient_dims() {
        let sp = Species::new(&a2().quiver, 3).unwrap();
        let p1 = sp.rep_from_entries(vec![1, 1], &[vec![vec![1]]]).unwrap();
        let mut found = Vec::new();
        for_each_submodule(&sp, &p1, &[0, 1], |s| {
            found.push((restrict(&sp, &p1, s), quotient(&sp, &p1, s)));
            true
        });
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].0, sp.simple(1));
        assert_eq!(found[0].1, sp.simple(0));
    }
}
