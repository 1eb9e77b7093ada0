//! Isomorphism classes by orbit labelling of the whole representation space.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::par::Exec;

use super::species::{Rep, Species};
use super::sub::{for_each_submodule, quotient, restrict, sub_dims};

/// Largest representation space that is labelled point by point.
pub const MAX_POINTS: u64 = 1 << 24;

const UNSEEN: u32 = u32::MAX;

/// An isomorphism class within one dimension vector.
#[derive(Clone, Debug)]
pub struct IsoClass {
    /// Smallest point index of the orbit.
    pub index: u64,
    pub rep: Rep,
    pub orbit: u64,
    pub aut: BigUint,
}

/// Class identifier across dimension vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId {
    pub dim: Vec<usize>,
    pub id: u32,
}

impl std::fmt::Display for ClassId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d: Vec<String> = self.dim.iter().map(|x| x.to_string()).collect();
        write!(f, "({})#{}", d.join(","), self.id)
    }
}

/// All isomorphism classes of a fixed dimension vector.
#[derive(Debug)]
pub struct IsoTable {
    dim: Vec<usize>,
    labels: Vec<u32>,
    classes: Vec<IsoClass>,
}

/// `|GL_n(F_Q)|`.
pub fn gl_order(n: usize, big_q: u64) -> BigUint {
    let qn = BigUint::from(big_q).pow(n as u32);
    (0..n).map(|k| &qn - BigUint::from(big_q).pow(k as u32)).product()
}

/// Generators of `GL_n(F)` as rows of field elements.
fn gl_generators(f: &crate::ffield::Field, n: usize) -> Vec<Vec<Vec<u32>>> {
    let id = |n: usize| -> Vec<Vec<u32>> {
        (0..n).map(|r| (0..n).map(|c| u32::from(r == c)).collect()).collect()
    };
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    if f.order() > 2 {
        let mut g = id(n);
        g[0][0] = f.generator();
        out.push(g);
    }
    if n >= 2 {
        let mut g = id(n);
        g[0][1] = 1;
        out.push(g);
        let mut cycle = vec![vec![0; n]; n];
        for r in 0..n {
            cycle[(r + 1) % n][r] = 1;
        }
        out.push(cycle);
        if n > 2 {
            let mut swap = id(n);
            swap[0][0] = 0;
            swap[1][1] = 0;
            swap[0][1] = 1;
            swap[1][0] = 1;
            out.push(swap);
        }
    }
    out
}

/// Transforms `φ_α ↦ g_j φ_α g_i^{-1}` for a change of basis at one vertex.
fn act(sp: &Species, maps: &[Mat], vertex: usize, g: &Mat, g_inv: &Mat) -> Vec<Mat> {
    let f = sp.field();
    sp.comps()
        .iter()
        .zip(maps)
        .map(|(comp, m)| {
            let mut out = m.clone();
            if comp.to == vertex {
                out = g.mul(f, &out);
            }
            if comp.from == vertex {
                out = out.mul(f, g_inv);
            }
            out
        })
        .collect()
}

impl IsoTable {
    pub fn build(sp: &Species, dim: &[usize]) -> Result<Self> {
        let len = sp.coord_len(dim, dim);
        let points = sp
            .space_size(dim)
            .filter(|p| *p <= MAX_POINTS)
            .ok_or_else(|| Error::BoundExceeded(format!("representation space of {dim:?}")))?;
        let f = sp.field();
        // generator actions as column lists over F_q
        let mut gens: Vec<Vec<Vec<u32>>> = Vec::new();
        for i in 0..sp.vertices() {
            for g in gl_generators(sp.vfield(i), dim[i]) {
                let gm = sp.expand(i, &g);
                let gi = gm.inverse(f).expect("invertible generator");
                let cols = (0..len)
                    .map(|k| {
                        let mut unit = vec![0; len];
                        unit[k] = 1;
                        let maps = sp.decode_maps(dim, dim, &unit);
                        sp.encode_maps(&act(sp, &maps, i, &gm, &gi))
                    })
                    .collect();
                gens.push(cols);
            }
        }
        let group: BigUint = (0..sp.vertices())
            .map(|i| gl_order(dim[i], (sp.q() as u64).pow(sp.d(i) as u32)))
            .product();
        let mut labels = vec![UNSEEN; points as usize];
        let mut classes = Vec::new();
        let mut stack = Vec::new();
        let mut image = vec![0u32; len];
        for start in 0..points {
            if labels[start as usize] != UNSEEN {
                continue;
            }
            let id = classes.len() as u32;
            labels[start as usize] = id;
            stack.push(start);
            let mut orbit = 0u64;
            while let Some(p) = stack.pop() {
                orbit += 1;
                let x = sp.coords_of(len, p);
                for cols in &gens {
                    image.iter_mut().for_each(|v| *v = 0);
                    for (xk, col) in x.iter().zip(cols) {
                        if *xk == 0 {
                            continue;
                        }
                        for (v, c) in image.iter_mut().zip(col) {
                            if *c != 0 {
                                *v = f.add(*v, f.mul(*xk, *c));
                            }
                        }
                    }
                    let idx = sp.index_of(&image) as usize;
                    if labels[idx] == UNSEEN {
                        labels[idx] = id;
                        stack.push(idx as u64);
                    }
                }
            }
            let aut = &group / BigUint::from(orbit);
            classes.push(IsoClass { index: start, rep: sp.rep_from_index(dim, start), orbit, aut });
        }
        Ok(Self { dim: dim.to_vec(), labels, classes })
    }

    pub fn dim(&self) -> &[usize] {
        &self.dim
    }

    pub fn classes(&self) -> &[IsoClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classify(&self, sp: &Species, rep: &Rep) -> u32 {
        self.labels[sp.rep_index(rep) as usize]
    }
}

/// Submodule counts of one module: `F^E_{AB}` keyed by (quotient, sub) and
/// `|Gr_e|` keyed by `e`.
#[derive(Clone, Debug, Default)]
pub struct Census {
    pub hall: BTreeMap<(ClassId, ClassId), u64>,
    pub gr: BTreeMap<Vec<usize>, u64>,
}

/// Lazily built iso tables and submodule censuses over one species.
#[derive(Debug)]
pub struct HallTable {
    species: Arc<Species>,
    exec: Exec,
    tables: Mutex<HashMap<Vec<usize>, Arc<IsoTable>>>,
    census: Mutex<HashMap<ClassId, Arc<Census>>>,
}

impl HallTable {
    pub fn new(species: Arc<Species>, exec: Exec) -> Self {
        Self { species, exec, tables: Mutex::default(), census: Mutex::default() }
    }

    pub fn species(&self) -> &Arc<Species> {
        &self.species
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    pub fn table(&self, dim: &[usize]) -> Result<Arc<IsoTable>> {
        if let Some(t) = self.tables.lock().expect("table lock").get(dim) {
            return Ok(t.clone());
        }
        let t = Arc::new(IsoTable::build(&self.species, dim)?);
        self.tables.lock().expect("table lock").insert(dim.to_vec(), t.clone());
        Ok(t)
    }

    pub fn classify(&self, rep: &Rep) -> Result<ClassId> {
        let t = self.table(rep.dim())?;
        Ok(ClassId { dim: rep.dim().to_vec(), id: t.classify(&self.species, rep) })
    }

    pub fn class(&self, id: &ClassId) -> Result<IsoClass> {
        Ok(self.table(&id.dim)?.classes()[id.id as usize].clone())
    }

    pub fn rep(&self, id: &ClassId) -> Result<Rep> {
        Ok(self.class(id)?.rep)
    }

    pub fn aut(&self, id: &ClassId) -> Result<BigUint> {
        Ok(self.class(id)?.aut)
    }

    /// Class ids of every module of dimension `dim`.
    pub fn ids(&self, dim: &[usize]) -> Result<Vec<ClassId>> {
        let t = self.table(dim)?;
        Ok((0..t.len() as u32).map(|id| ClassId { dim: dim.to_vec(), id }).collect())
    }

    pub fn census(&self, id: &ClassId) -> Result<Arc<Census>> {
        if let Some(c) = self.census.lock().expect("census lock").get(id) {
            return Ok(c.clone());
        }
        let rep = self.rep(id)?;
        let sp = &self.species;
        // tables for every sub and quotient dimension up front
        for e in sub_dims(rep.dim()) {
            self.table(&e)?;
        }
        let parts = self.exec.map(sub_dims(rep.dim()), |e| -> Result<Census> {
            let mut local = Census::default();
            let mut count = 0u64;
            let mut err = None;
            for_each_submodule(sp, &rep, &e, |s| {
                count += 1;
                let key = self
                    .classify(&quotient(sp, &rep, s))
                    .and_then(|a| Ok((a, self.classify(&restrict(sp, &rep, s))?)));
                match key {
                    Ok(k) => *local.hall.entry(k).or_default() += 1,
                    Err(x) => {
                        err = Some(x);
                        return false;
                    }
                }
                true
            });
            if let Some(x) = err {
                return Err(x);
            }
            local.gr.insert(e, count);
            Ok(local)
        });
        let mut census = Census::default();
        for p in parts {
            let p = p?;
            census.hall.extend(p.hall);
            census.gr.extend(p.gr);
        }
        let census = Arc::new(census);
        self.census.lock().expect("census lock").insert(id.clone(), census.clone());
        Ok(census)
    }

    /// `F^E_{AB}`: submodules of `E` isomorphic to `B` with quotient `A`.
    pub fn hall_number(&self, e: &ClassId, a: &ClassId, b: &ClassId) -> Result<u64> {
        Ok(self.census(e)?.hall.get(&(a.clone(), b.clone())).copied().unwrap_or(0))
    }

    pub fn gr(&self, e: &ClassId, sub: &[usize]) -> Result<u64> {
        Ok(self.census(e)?.gr.get(sub).copied().unwrap_or(0))
    }
}
