//! Species over `F_q` and their representations as explicit matrices.
//!
//! Vertex `i` carries `F_{q^{d_i}}^{n_i}`, stored as `F_q^{d_i n_i}` with
//! coordinate `r·d_i + j` holding the `t^j`-coefficient of entry `r`.
//! Each valued arrow becomes one or more components:
//!
//! * `d_i = d_j = d`, valuation `(a, a)`: `a` maps that are
//!   `F_{q^d}`-linear ([`CompKind::Linear`]);
//! * one of `d_i, d_j` equal to 1 and the other equal to `t = d_i a_ij`:
//!   one unconstrained `F_q`-linear map ([`CompKind::Plain`]).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::Field;
use crate::linalg::Mat;
use crate::speckit::ValuedQuiver;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CompKind {
    Linear,
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub from: usize,
    pub to: usize,
    pub kind: CompKind,
}

#[derive(Debug)]
pub struct Species {
    quiver: ValuedQuiver,
    q: u32,
    field: Arc<Field>,
    vfields: Vec<Arc<Field>>,
    comps: Vec<Component>,
}

/// A representation: dimension vector over the vertex fields and one
/// `F_q`-matrix per component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rep {
    dim: Vec<usize>,
    maps: Vec<Mat>,
}

impl Species {
    /// The species of the principal part of `quiver` over `F_q`.
    pub fn new(quiver: &ValuedQuiver, q: u32) -> Result<Arc<Self>> {
        let field = Field::new(q as u64)?;
        let n = quiver.n();
        let d = quiver.valuations();
        let vfields = (0..n)
            .map(|i| Field::extension(&field, d[i] as u32))
            .collect::<Result<Vec<_>>>()?;
        let mut comps = Vec::new();
        for a in quiver.principal_arrows() {
            let (di, dj) = (d[a.from], d[a.to]);
            let t = di * a.a_from;
            if di == dj && a.a_from == a.a_to {
                for _ in 0..a.a_from {
                    comps.push(Component { from: a.from, to: a.to, kind: CompKind::Linear });
                }
            } else if (di == 1 && dj == t) || (dj == 1 && di == t) {
                comps.push(Component { from: a.from, to: a.to, kind: CompKind::Plain });
            } else {
                return Err(Error::UnsupportedValuation(format!(
                    "{} -> {} ({}, {}) with d = ({di}, {dj})",
                    a.from + 1,
                    a.to + 1,
                    a.a_from,
                    a.a_to
                )));
            }
        }
        Ok(Arc::new(Self { quiver: quiver.clone(), q, field, vfields, comps }))
    }

    pub fn quiver(&self) -> &ValuedQuiver {
        &self.quiver
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn vfield(&self, i: usize) -> &Arc<Field> {
        &self.vfields[i]
    }

    pub fn vertices(&self) -> usize {
        self.vfields.len()
    }

    pub fn d(&self, i: usize) -> usize {
        self.quiver.valuations()[i] as usize
    }

    pub fn comps(&self) -> &[Component] {
        &self.comps
    }

    /// `F_q`-dimension of vertex `i` for a module of dimension `dim`.
    pub fn vdim(&self, i: usize, dim: &[usize]) -> usize {
        self.d(i) * dim[i]
    }

    /// `F_q`-dimension of the whole module, `Σ d_i n_i`.
    pub fn total_dim(&self, dim: &[usize]) -> usize {
        (0..self.vertices()).map(|i| self.vdim(i, dim)).sum()
    }

    /// `d×d` matrix over `F_q` of multiplication by `x ∈ F_{q^{d_i}}`.
    pub fn lift(&self, i: usize, x: u32) -> Mat {
        if self.d(i) == 1 {
            return Mat::from_vec(1, 1, vec![x]);
        }
        Mat::from_rows(&self.vfields[i].mul_matrix(x))
    }

    /// The generator `t` of `F_{q^{d_i}}` over `F_q`.
    pub fn t(&self, i: usize) -> u32 {
        if self.d(i) == 1 {
            1
        } else {
            self.q
        }
    }

    /// Expands an `F_{q^{d_i}}`-matrix (rows of field elements) to `F_q`.
    pub fn expand(&self, i: usize, x: &[Vec<u32>]) -> Mat {
        let d = self.d(i);
        let rows = x.len();
        let cols = x.first().map_or(0, |r| r.len());
        let mut out = Mat::zeros(rows * d, cols * d);
        for (r, row) in x.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if *v != 0 {
                    out.paste(r * d, c * d, &self.lift(i, *v));
                }
            }
        }
        out
    }

    /// `F_q` coordinates of a vector of `F_{q^{d_i}}` elements.
    pub fn vec_to_fq(&self, i: usize, w: &[u32]) -> Vec<u32> {
        if self.d(i) == 1 {
            return w.to_vec();
        }
        let f = &self.vfields[i];
        w.iter().flat_map(|x| f.coords(*x)).collect()
    }

    /// Inverse of [`Species::vec_to_fq`].
    pub fn vec_from_fq(&self, i: usize, v: &[u32]) -> Vec<u32> {
        if self.d(i) == 1 {
            return v.to_vec();
        }
        let f = &self.vfields[i];
        v.chunks(self.d(i)).map(|c| f.from_coords(c)).collect()
    }

    /// Shape `(rows, cols)` of component `c` for maps from a module of
    /// dimension `from` to one of dimension `to`.
    pub fn comp_shape(&self, c: usize, from: &[usize], to: &[usize]) -> (usize, usize) {
        let comp = self.comps[c];
        (self.vdim(comp.to, to), self.vdim(comp.from, from))
    }

    /// Number of `F_q` coordinates of the component space between modules
    /// of dimensions `from` and `to`.
    pub fn coord_len(&self, from: &[usize], to: &[usize]) -> usize {
        (0..self.comps.len())
            .map(|c| {
                let (r, k) = self.comp_shape(c, from, to);
                match self.comps[c].kind {
                    CompKind::Plain => r * k,
                    CompKind::Linear => r * k / self.d(self.comps[c].from),
                }
            })
            .sum()
    }

    /// Coordinates of a tuple of component maps: for linear components the
    /// first column of each `d×d` block, otherwise every entry (row-major).
    pub fn encode_maps(&self, maps: &[Mat]) -> Vec<u32> {
        let mut out = Vec::new();
        for (c, m) in maps.iter().enumerate() {
            match self.comps[c].kind {
                CompKind::Plain => out.extend_from_slice(m.data()),
                CompKind::Linear => {
                    let d = self.d(self.comps[c].from);
                    for br in 0..m.rows() / d {
                        for bc in 0..m.cols() / d {
                            for j in 0..d {
                                out.push(m.get(br * d + j, bc * d));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Inverse of [`Species::encode_maps`].
    pub fn decode_maps(&self, from: &[usize], to: &[usize], coords: &[u32]) -> Vec<Mat> {
        let mut pos = 0;
        let mut maps = Vec::with_capacity(self.comps.len());
        for c in 0..self.comps.len() {
            let (r, k) = self.comp_shape(c, from, to);
            let comp = self.comps[c];
            match comp.kind {
                CompKind::Plain => {
                    maps.push(Mat::from_vec(r, k, coords[pos..pos + r * k].to_vec()));
                    pos += r * k;
                }
                CompKind::Linear => {
                    let d = self.d(comp.from);
                    let mut m = Mat::zeros(r, k);
                    for br in 0..r / d {
                        for bc in 0..k / d {
                            let x = self.vec_from_fq(comp.from, &coords[pos..pos + d])[0];
                            pos += d;
                            if x != 0 {
                                m.paste(br * d, bc * d, &self.lift(comp.from, x));
                            }
                        }
                    }
                    maps.push(m);
                }
            }
        }
        debug_assert_eq!(pos, coords.len());
        maps
    }

    /// Number of points of the representation space, if it fits in `u64`.
    pub fn space_size(&self, dim: &[usize]) -> Option<u64> {
        (self.q as u64).checked_pow(self.coord_len(dim, dim) as u32)
    }

    pub fn index_of(&self, coords: &[u32]) -> u64 {
        coords.iter().rev().fold(0u64, |acc, d| acc * self.q as u64 + *d as u64)
    }

    pub fn coords_of(&self, len: usize, mut index: u64) -> Vec<u32> {
        (0..len)
            .map(|_| {
                let r = (index % self.q as u64) as u32;
                index /= self.q as u64;
                r
            })
            .collect()
    }

    /// The representation with the given coordinates (see [`Species::coord_len`]).
    pub fn rep_from_coords(&self, dim: &[usize], coords: &[u32]) -> Rep {
        Rep { dim: dim.to_vec(), maps: self.decode_maps(dim, dim, coords) }
    }

    pub fn rep_from_index(&self, dim: &[usize], index: u64) -> Rep {
        let len = self.coord_len(dim, dim);
        Rep { dim: dim.to_vec(), maps: self.decode_maps(dim, dim, &self.coords_of(len, index)) }
    }

    pub fn rep_index(&self, rep: &Rep) -> u64 {
        self.index_of(&self.encode_maps(&rep.maps))
    }

    /// Builds a representation, checking shapes and `F_{q^d}`-linearity.
    pub fn rep(&self, dim: Vec<usize>, maps: Vec<Mat>) -> Result<Rep> {
        if dim.len() != self.vertices() || maps.len() != self.comps.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} vertices / {} components expected",
                self.vertices(),
                self.comps.len()
            )));
        }
        for (c, m) in maps.iter().enumerate() {
            if (m.rows(), m.cols()) != self.comp_shape(c, &dim, &dim) {
                return Err(Error::ShapeMismatch(format!("component {c} has the wrong shape")));
            }
        }
        let rep = Rep { dim, maps };
        let round = self.decode_maps(&rep.dim, &rep.dim, &self.encode_maps(&rep.maps));
        if round != rep.maps {
            return Err(Error::ShapeMismatch("map is not linear over the vertex field".into()));
        }
        Ok(rep)
    }

    /// Representation from per-component matrices with entries in the
    /// vertex field (linear components) or `F_q` (plain components).
    pub fn rep_from_entries(&self, dim: Vec<usize>, entries: &[Vec<Vec<u32>>]) -> Result<Rep> {
        if entries.len() != self.comps.len() {
            return Err(Error::ShapeMismatch("one matrix per component expected".into()));
        }
        let maps = entries
            .iter()
            .enumerate()
            .map(|(c, x)| {
                let comp = self.comps[c];
                let (r, k) = self.comp_shape(c, &dim, &dim);
                let m = match comp.kind {
                    CompKind::Linear => self.expand(comp.from, x),
                    CompKind::Plain => {
                        if x.is_empty() {
                            Mat::zeros(0, k)
                        } else {
                            Mat::from_rows(x)
                        }
                    }
                };
                if (m.rows(), m.cols()) != (r, k) {
                    if r == 0 || k == 0 {
                        return Ok(Mat::zeros(r, k));
                    }
                    return Err(Error::ShapeMismatch(format!("component {c} has the wrong shape")));
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        self.rep(dim, maps)
    }

    pub fn zero_rep(&self, dim: &[usize]) -> Rep {
        let maps = (0..self.comps.len())
            .map(|c| {
                let (r, k) = self.comp_shape(c, dim, dim);
                Mat::zeros(r, k)
            })
            .collect();
        Rep { dim: dim.to_vec(), maps }
    }

    pub fn simple(&self, i: usize) -> Rep {
        let mut dim = vec![0; self.vertices()];
        dim[i] = 1;
        self.zero_rep(&dim)
    }
}

impl Rep {
    pub fn dim(&self) -> &[usize] {
        &self.dim
    }

    pub fn dim_i64(&self) -> Vec<i64> {
        self.dim.iter().map(|x| *x as i64).collect()
    }

    pub fn maps(&self) -> &[Mat] {
        &self.maps
    }

    pub fn is_zero(&self) -> bool {
        self.dim.iter().all(|x| *x == 0)
    }

    pub(crate) fn from_parts(dim: Vec<usize>, maps: Vec<Mat>) -> Self {
        Self { dim, maps }
    }

    pub fn direct_sum(&self, other: &Rep) -> Rep {
        let dim = self.dim.iter().zip(&other.dim).map(|(a, b)| a + b).collect();
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.direct_sum(b)).collect();
        Rep { dim, maps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::speckit::{b2, kronecker};

    #[test]
    fn components_follow_valuations() {
        let k = Species::new(&kronecker().quiver, 3).unwrap();
        assert_eq!(k.comps().len(), 2);
        assert!(k.comps().iter().all(|c| c.kind == CompKind::Linear));
        let b = Species::new(&b2().quiver, 2).unwrap();
        assert_eq!(b.comps().len(), 1);
        assert_eq!(b.comps()[0].kind, CompKind::Plain);
        assert_eq!(b.d(0), 2);
    }

    #[test]
    fn encode_decode_round_trip() {
        let quiver = crate::speckit::rank2(2, 2).unwrap().quiver;
        let sp = Species::new(&quiver, 2).unwrap();
        let dim = vec![1, 2];
        let len = sp.coord_len(&dim, &dim);
        assert_eq!(len, 2 * 2 * 2);
        for idx in [0, 1, 77, 255] {
            let rep = sp.rep_from_index(&dim, idx);
            assert_eq!(sp.rep_index(&rep), idx);
            assert!(sp.rep(rep.dim().to_vec(), rep.maps().to_vec()).is_ok());
        }
    }
}
