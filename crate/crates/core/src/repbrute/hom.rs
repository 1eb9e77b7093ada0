//! Homomorphisms, extensions and socles.

use crate::linalg::Mat;

use super::species::{Rep, Species};

/// Basis of the `F_{q^{d_i}}`-linear maps `F_{q^{d_i}}^{from} → F_{q^{d_i}}^{to}`
/// as `F_q`-matrices.
pub fn vertex_hom_basis(sp: &Species, i: usize, from: usize, to: usize) -> Vec<Mat> {
    let d = sp.d(i);
    let f = sp.vfield(i);
    let powers: Vec<Mat> = (0..d as u64).map(|j| sp.lift(i, f.pow(sp.t(i), j))).collect();
    let mut out = Vec::with_capacity(from * to * d);
    for br in 0..to {
        for bc in 0..from {
            for p in &powers {
                let mut m = Mat::zeros(to * d, from * d);
                m.paste(br * d, bc * d, p);
                out.push(m);
            }
        }
    }
    out
}

/// The coboundary `δ(h) = (φ^N_α h_i − h_j φ^M_α)_α` on a basis of vertex maps.
pub struct HomData {
    /// `(vertex, map)` for each parameter.
    pub params: Vec<(usize, Mat)>,
    /// Columns: coordinates of `δ` applied to each parameter.
    pub delta: Mat,
    /// Length of the coordinate space `⊕_α Hom_α(M_i, N_j)`.
    pub coord_len: usize,
}

fn delta_of(sp: &Species, m: &Rep, n: &Rep, vertex: usize, h: &Mat) -> Vec<Mat> {
    sp.comps()
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            let (rows, cols) = sp.comp_shape(c, m.dim(), n.dim());
            let mut out = Mat::zeros(rows, cols);
            let f = sp.field();
            if comp.from == vertex {
                out = out.add(f, &n.maps()[c].mul(f, h));
            }
            if comp.to == vertex {
                out = out.sub(f, &h.mul(f, &m.maps()[c]));
            }
            out
        })
        .collect()
}

pub fn hom_data(sp: &Species, m: &Rep, n: &Rep) -> HomData {
    let mut params = Vec::new();
    for i in 0..sp.vertices() {
        for h in vertex_hom_basis(sp, i, m.dim()[i], n.dim()[i]) {
            params.push((i, h));
        }
    }
    let coord_len = sp.coord_len(m.dim(), n.dim());
    let mut delta = Mat::zeros(coord_len, params.len());
    for (k, (i, h)) in params.iter().enumerate() {
        let col = sp.encode_maps(&delta_of(sp, m, n, *i, h));
        for (r, v) in col.into_iter().enumerate() {
            delta.set(r, k, v);
        }
    }
    HomData { params, delta, coord_len }
}

/// A basis of `Hom(M, N)`, each element given by its vertex maps.
pub fn hom_basis(sp: &Species, m: &Rep, n: &Rep) -> Vec<Vec<Mat>> {
    let data = hom_data(sp, m, n);
    let ns = data.delta.nullspace(sp.field());
    let f = sp.field();
    (0..ns.cols())
        .map(|k| {
            let mut maps: Vec<Mat> = (0..sp.vertices())
                .map(|i| Mat::zeros(sp.vdim(i, n.dim()), sp.vdim(i, m.dim())))
                .collect();
            for (p, (i, h)) in data.params.iter().enumerate() {
                let a = ns.get(p, k);
                if a != 0 {
                    maps[*i] = maps[*i].add(f, &h.scale(f, a));
                }
            }
            maps
        })
        .collect()
}

/// `[M, N] = dim_k Hom(M, N)`.
pub fn hom_dim(sp: &Species, m: &Rep, n: &Rep) -> usize {
    let data = hom_data(sp, m, n);
    data.params.len() - data.delta.rank(sp.field())
}

/// `Ext¹(M, N)` as a complement of the coboundaries in the component space.
#[derive(Clone, Debug)]
pub struct ExtData {
    pub hom_dim: usize,
    pub ext_dim: usize,
    pub boundary_rank: usize,
    pub coord_len: usize,
    /// Coordinates whose unit vectors span a complement of the coboundaries.
    pub free: Vec<usize>,
}

pub fn ext_data(sp: &Species, m: &Rep, n: &Rep) -> ExtData {
    let data = hom_data(sp, m, n);
    let mut rows = data.delta.transpose();
    let pivots = rows.rref(sp.field());
    let free: Vec<usize> = (0..data.coord_len).filter(|c| !pivots.contains(c)).collect();
    ExtData {
        hom_dim: data.params.len() - pivots.len(),
        ext_dim: free.len(),
        boundary_rank: pivots.len(),
        coord_len: data.coord_len,
        free,
    }
}

/// `[M, N]¹ = dim_k Ext¹(M, N)`.
pub fn ext_dim(sp: &Species, m: &Rep, n: &Rep) -> usize {
    ext_data(sp, m, n).ext_dim
}

/// The middle term of `0 → N → E → M → 0` for the cocycle `ξ` (component
/// maps `M_i → N_j`).
pub fn extension(sp: &Species, m: &Rep, n: &Rep, xi: &[Mat]) -> Rep {
    let dim: Vec<usize> = n.dim().iter().zip(m.dim()).map(|(a, b)| a + b).collect();
    let maps = sp
        .comps()
        .iter()
        .enumerate()
        .map(|(c, _)| {
            let phi_n = &n.maps()[c];
            let phi_m = &m.maps()[c];
            let mut out = Mat::zeros(phi_n.rows() + phi_m.rows(), phi_n.cols() + phi_m.cols());
            out.paste(0, 0, phi_n);
            out.paste(0, phi_n.cols(), &xi[c]);
            out.paste(phi_n.rows(), phi_n.cols(), phi_m);
            out
        })
        .collect();
    Rep::from_parts(dim, maps)
}

/// Cocycle with the given values on the free coordinates of `data`.
pub fn ext_class(sp: &Species, m: &Rep, n: &Rep, data: &ExtData, values: &[u32]) -> Vec<Mat> {
    let mut coords = vec![0; data.coord_len];
    for (pos, v) in data.free.iter().zip(values) {
        coords[*pos] = *v;
    }
    sp.decode_maps(m.dim(), n.dim(), &coords)
}

/// `F_q`-basis (columns) of the socle at each vertex: the common kernel of
/// the outgoing components.
pub fn socle(sp: &Species, rep: &Rep) -> Vec<Mat> {
    let f = sp.field();
    (0..sp.vertices())
        .map(|i| {
            let vd = sp.vdim(i, rep.dim());
            let mut stacked = Mat::zeros(0, vd);
            for (c, comp) in sp.comps().iter().enumerate() {
                if comp.from == i {
                    stacked = stacked.vstack(&rep.maps()[c]);
                }
            }
            stacked.nullspace(f)
        })
        .collect()
}

/// Dimension vector (over the vertex fields) of the socle.
pub fn socle_dim(sp: &Species, rep: &Rep) -> Vec<usize> {
    socle(sp, rep)
        .iter()
        .enumerate()
        .map(|(i, s)| s.cols() / sp.d(i))
        .collect()
}

/// `Ext¹(S_k, I) = 0` for every simple `S_k`.
pub fn is_injective(sp: &Species, rep: &Rep) -> bool {
    (0..sp.vertices()).all(|k| ext_dim(sp, &sp.simple(k), rep) == 0)
}

/// `Ext¹(P, S_k) = 0` for every simple `S_k`.
pub fn is_projective(sp: &Species, rep: &Rep) -> bool {
    (0..sp.vertices()).all(|k| ext_dim(sp, rep, &sp.simple(k)) == 0)
}

/// All elements of `Hom(M, N)`, enumerated in a fixed order.
pub fn hom_elements(sp: &Species, basis: &[Vec<Mat>], m: &Rep, n: &Rep) -> Vec<Vec<Mat>> {
    let f = sp.field();
    let q = sp.q() as u64;
    let total = q.pow(basis.len() as u32);
    (0..total)
        .map(|idx| {
            let coeffs = sp.coords_of(basis.len(), idx);
            (0..sp.vertices())
                .map(|i| {
                    let mut acc = Mat::zeros(sp.vdim(i, n.dim()), sp.vdim(i, m.dim()));
                    for (b, a) in basis.iter().zip(&coeffs) {
                        if *a != 0 {
                            acc = acc.add(f, &b[i].scale(f, *a));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}
