//! Finite balls in the building and their JSON export.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::chain::Simplex;
use crate::error::{BuildingError, Result};
use crate::lattice::{Lattice, VertexKey};
use crate::matrix::QpMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallOptions {
    /// Maximum number of vertices.
    pub budget: usize,
    /// Permit `N > 3`.
    pub allow_large_n: bool,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions { budget: 200_000, allow_large_n: false }
    }
}

#[derive(Clone, Debug)]
pub struct PatchVertex {
    /// Representative with `shift = 0`.
    pub lattice: Lattice,
    pub dist: usize,
}

/// All simplices whose vertices lie within distance `radius` of the base simplex.
#[derive(Clone, Debug)]
pub struct BuildingPatch {
    pub p: u32,
    pub n: usize,
    pub radius: usize,
    pub base: Vec<usize>,
    pub vertices: Vec<PatchVertex>,
    pub index: HashMap<VertexKey, usize>,
    pub adjacency: Vec<Vec<usize>>,
    /// `simplices[d]`: sorted vertex-index lists of the `d`-simplices, lexicographic.
    pub simplices: Vec<Vec<Vec<usize>>>,
}

pub fn enumerate_ball(base: &Simplex, radius: usize, opts: BallOptions) -> Result<BuildingPatch> {
    let n = base.chain.n();
    let p = base.chain.p();
    if n > 3 && !opts.allow_large_n {
        return Err(BuildingError::Unsupported(format!("ball enumeration for N = {n} > 3 is disabled by default")));
    }
    let mut found: HashMap<VertexKey, (Lattice, usize)> = HashMap::new();
    let mut nbrs: HashMap<VertexKey, Vec<VertexKey>> = HashMap::new();
    let mut queue = VecDeque::new();
    for l in &base.chain.lattices {
        let l0 = l.scaled(-l.shift);
        found.insert(l0.key.clone(), (l0.clone(), 0));
        queue.push_back(l0);
    }
    while let Some(l) = queue.pop_front() {
        let d = found[&l.key].1;
        let mut list = Vec::new();
        for m in l.neighbours()? {
            let m = m.scaled(-m.shift);
            list.push(m.key.clone());
            if d < radius && !found.contains_key(&m.key) {
                found.insert(m.key.clone(), (m.clone(), d + 1));
                if found.len() > opts.budget {
                    return Err(BuildingError::BudgetExceeded { reached: found.len(), budget: opts.budget });
                }
                queue.push_back(m);
            }
        }
        nbrs.insert(l.key.clone(), list);
    }
    let mut verts: Vec<(usize, VertexKey, Lattice)> = found.into_iter().map(|(k, (l, d))| (d, k, l)).collect();
    verts.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let index: HashMap<VertexKey, usize> = verts.iter().enumerate().map(|(i, v)| (v.1.clone(), i)).collect();
    let adjacency: Vec<Vec<usize>> = verts
        .iter()
        .map(|v| {
            let mut a: Vec<usize> = nbrs[&v.1].iter().filter_map(|k| index.get(k).copied()).collect();
            a.sort();
            a.dedup();
            a
        })
        .collect();
    let mut simplices: Vec<Vec<Vec<usize>>> = vec![(0..verts.len()).map(|i| vec![i]).collect()];
    for d in 1..n {
        let mut next = Vec::new();
        for s in &simplices[d - 1] {
            let last = *s.last().unwrap();
            for &w in &adjacency[last] {
                if w > last && s.iter().all(|&u| adjacency[u].binary_search(&w).is_ok()) {
                    let mut t = s.clone();
                    t.push(w);
                    next.push(t);
                }
            }
        }
        next.sort();
        simplices.push(next);
    }
    let mut base_idx: Vec<usize> = base.vertices.iter().map(|k| index[k]).collect();
    base_idx.sort();
    Ok(BuildingPatch {
        p,
        n,
        radius,
        base: base_idx,
        vertices: verts.into_iter().map(|(d, _, l)| PatchVertex { lattice: l, dist: d }).collect(),
        index,
        adjacency,
        simplices,
    })
}

impl BuildingPatch {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices.get(dim).map(|s| s.len()).unwrap_or(0)
    }

    pub fn key(&self, i: usize) -> &VertexKey {
        &self.vertices[i].lattice.key
    }

    pub fn simplex(&self, verts: &[usize]) -> Result<Simplex> {
        let lats: Vec<Lattice> = verts.iter().map(|&i| self.vertices[i].lattice.clone()).collect();
        Simplex::from_lattices(&lats)
    }

    /// Patch indices of the vertices of a simplex, if all lie in the patch.
    pub fn locate(&self, s: &Simplex) -> Option<Vec<usize>> {
        let mut v: Option<Vec<usize>> = s.vertices.iter().map(|k| self.index.get(k).copied()).collect();
        if let Some(v) = v.as_mut() {
            v.sort();
        }
        v
    }

    /// Index of the simplex within `simplices[dim]`.
    pub fn simplex_index(&self, verts: &[usize]) -> Option<usize> {
        self.simplices.get(verts.len() - 1)?.binary_search_by(|s| s.as_slice().cmp(verts)).ok()
    }

    /// Image of a vertex under `g`, if it stays inside the patch.
    pub fn act_on_vertex(&self, g: &QpMatrix, i: usize) -> Result<Option<usize>> {
        let img = self.vertices[i].lattice.apply(g)?;
        Ok(self.index.get(&img.key).copied())
    }

    /// Maximum distance from the base over a set of vertices.
    pub fn reach(&self, verts: &[usize]) -> usize {
        verts.iter().map(|&i| self.vertices[i].dist).max().unwrap_or(0)
    }

    pub fn export(&self) -> PatchExport {
        let base = &self.vertices[self.base[0]].lattice;
        let vertices = self
            .vertices
            .iter()
            .map(|v| VertexExport {
                key: v.lattice.key.label(),
                diag: v.lattice.key.diag.clone(),
                distance: v.dist,
                invariants: base.relative_invariants(&v.lattice).ok(),
            })
            .collect();
        let mut faces = BTreeMap::new();
        for d in 1..self.simplices.len() {
            let rel: Vec<Vec<usize>> = self.simplices[d]
                .iter()
                .map(|s| {
                    (0..s.len())
                        .map(|drop| {
                            let f: Vec<usize> = s.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, &v)| v).collect();
                            self.simplex_index(&f).expect("faces of patch simplices lie in the patch")
                        })
                        .collect()
                })
                .collect();
            faces.insert(d.to_string(), rel);
        }
        PatchExport {
            p: self.p,
            n: self.n,
            radius: self.radius,
            base: self.base.clone(),
            counts: self.simplices.iter().map(|s| s.len()).collect(),
            vertices,
            simplices: self.simplices.clone(),
            faces,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexExport {
    pub key: String,
    pub diag: Vec<u32>,
    pub distance: usize,
    /// Elementary divisors relative to the base vertex (`N ≤ 3`).
    pub invariants: Option<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PatchExport {
    pub p: u32,
    pub n: usize,
    pub radius: usize,
    pub base: Vec<usize>,
    pub counts: Vec<usize>,
    pub vertices: Vec<VertexExport>,
    pub simplices: Vec<Vec<Vec<usize>>>,
    /// For each dimension `d ≥ 1`, the indices of the facets of every `d`-simplex.
    pub faces: BTreeMap<String, Vec<Vec<usize>>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_balls() {
        let v = Simplex::standard(2, 12, &[2]).unwrap();
        let b = enumerate_ball(&v, 1, BallOptions::default()).unwrap();
        assert_eq!((b.vertex_count(), b.count(1)), (4, 3));
        let b = enumerate_ball(&v, 2, BallOptions::default()).unwrap();
        assert_eq!((b.vertex_count(), b.count(1)), (10, 9));
    }

    #[test]
    fn budget_is_enforced() {
        let v = Simplex::standard(3, 12, &[2]).unwrap();
        let r = enumerate_ball(&v, 3, BallOptions { budget: 10, allow_large_n: false });
        assert!(matches!(r, Err(BuildingError::BudgetExceeded { .. })));
    }
}
