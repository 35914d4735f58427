//! Periodic lattice chains and the simplices they define.

use crate::error::{BuildingError, Result};
use crate::fplin::{self, FpVec};
use crate::lattice::{Lattice, VertexKey};
use crate::matrix::{pow_q, q, QpMatrix};

/// `L_0 ⊋ L_1 ⊋ … ⊋ L_{e-1} ⊋ p·L_0`, extended periodically by `L_{i+e} = p·L_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeChain {
    pub lattices: Vec<Lattice>,
}

impl LatticeChain {
    pub fn new(lattices: Vec<Lattice>) -> Result<Self> {
        let e = lattices.len();
        let Some(first) = lattices.first() else {
            return Err(BuildingError::MalformedChain("empty chain".into()));
        };
        let n = first.n();
        if e > n {
            return Err(BuildingError::MalformedChain(format!("period {e} exceeds dimension {n}")));
        }
        let pl0 = first.scaled(1);
        for i in 0..e {
            let next = if i + 1 < e { &lattices[i + 1] } else { &pl0 };
            if lattices[i].n() != n || lattices[i] == *next || !lattices[i].contains(next) {
                return Err(BuildingError::MalformedChain(format!("member {i} does not strictly contain its successor")));
            }
        }
        Ok(LatticeChain { lattices })
    }

    pub fn period(&self) -> usize {
        self.lattices.len()
    }

    pub fn n(&self) -> usize {
        self.lattices[0].n()
    }

    pub fn p(&self) -> u32 {
        self.lattices[0].p
    }

    pub fn k(&self) -> u32 {
        self.lattices[0].k
    }

    /// `L_i` for any integer `i`.
    pub fn member(&self, i: i64) -> Lattice {
        let e = self.period() as i64;
        let (d, r) = (i.div_euclid(e), i.rem_euclid(e));
        self.lattices[r as usize].scaled(d)
    }

    /// Block sizes `m_i = dim_{k_F} L_i / L_{i+1}`.
    pub fn composition(&self) -> Vec<usize> {
        (0..self.period() as i64).map(|i| (self.member(i + 1).det_val() - self.member(i).det_val()) as usize).collect()
    }

    /// The same chain started at `L_r`.
    pub fn rotate(&self, r: usize) -> LatticeChain {
        LatticeChain { lattices: (0..self.period()).map(|i| self.member((r + i) as i64)).collect() }
    }

    pub fn scaled(&self, t: i64) -> LatticeChain {
        LatticeChain { lattices: self.lattices.iter().map(|l| l.scaled(t)).collect() }
    }

    pub fn apply(&self, g: &QpMatrix) -> Result<LatticeChain> {
        Ok(LatticeChain { lattices: self.lattices.iter().map(|l| l.apply(g)).collect::<Result<_>>()? })
    }

    pub fn vertex_keys(&self) -> Vec<VertexKey> {
        let mut k: Vec<VertexKey> = self.lattices.iter().map(|l| l.key.clone()).collect();
        k.sort();
        k
    }

    /// The standard chain `Λ_i = p·o^{s_i} ⊕ o^{N - s_i}` with `s_i = m_0 + … + m_{i-1}`.
    pub fn standard(p: u32, k: u32, comp: &[usize]) -> Result<LatticeChain> {
        let n: usize = comp.iter().sum();
        let mut lats = Vec::new();
        let mut s = 0;
        for &m in comp {
            if m == 0 {
                return Err(BuildingError::MalformedChain("zero block".into()));
            }
            let d = QpMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    if i < s {
                        q(p as i64)
                    } else {
                        q(1)
                    }
                } else {
                    q(0)
                }
            });
            lats.push(Lattice::from_generators(p, k, &d)?);
            s += m;
        }
        LatticeChain::new(lats)
    }

    /// A matrix `g` with `g·Λ_i = L_i` for the standard chain of the same composition.
    pub fn adapted_basis(&self) -> Result<QpMatrix> {
        let p = self.p();
        let n = self.n();
        let e = self.period();
        let b0 = self.lattices[0].basis();
        let b0inv = b0.inverse()?;
        // images W_i of L_i in L_0/pL_0, as spanning sets
        let images: Vec<Vec<FpVec>> = (0..e)
            .map(|i| {
                let c = b0inv.mul(&self.lattices[i].basis());
                (0..n).map(|j| c.col(j).iter().map(|x| crate::matrix::reduce_q(x, p as u64) as u32).collect()).collect()
            })
            .collect();
        // basis of W_{e-1}, extended through W_{e-2}, …, W_0 = F_p^n
        let mut acc: Vec<FpVec> = Vec::new();
        let mut groups: Vec<Vec<FpVec>> = vec![Vec::new(); e];
        for i in (0..e).rev() {
            let added = fplin::extend_basis(p, &acc, &images[i]);
            acc.extend(added.iter().cloned());
            groups[i] = added;
        }
        if acc.len() != n {
            return Err(BuildingError::MalformedChain("chain images do not span L_0/pL_0".into()));
        }
        let cols: Vec<FpVec> = groups.into_iter().flatten().collect();
        let c = QpMatrix::from_fn(n, n, |i, j| q(cols[j][i] as i64));
        Ok(b0.mul(&c))
    }

    pub fn contains_lattice_class(&self, key: &VertexKey) -> bool {
        self.lattices.iter().any(|l| &l.key == key)
    }

    /// `g·L_i = L_i` for every member.
    pub fn stabilized_by(&self, g: &QpMatrix) -> Result<bool> {
        for l in &self.lattices {
            if l.apply(g)? != *l {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `(g - 1)·L_i ⊆ L_{i+1}` for every member.
    pub fn pro_unipotent_contains(&self, g: &QpMatrix) -> Result<bool> {
        if !self.stabilized_by(g)? {
            return Ok(false);
        }
        let h = g.sub(&QpMatrix::identity(self.n()));
        for i in 0..self.period() {
            let img = h.mul(&self.lattices[i].basis());
            let next = self.member(i as i64 + 1);
            if !(0..img.cols).all(|j| next.contains_vec(&img.col(j))) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// If `g` permutes the vertex classes of the chain, the shift `r` with
    /// `g·L_i = L_{i+r}` (as lattices, `r` any integer).
    pub fn normalizer_shift(&self, g: &QpMatrix) -> Result<Option<i64>> {
        let img = self.lattices[0].apply(g)?;
        let e = self.period() as i64;
        let Some(r) = self.lattices.iter().position(|l| l.key == img.key) else {
            return Ok(None);
        };
        let r = r as i64 + e * (img.shift - self.lattices[r].shift);
        for i in 0..e {
            if self.member(i).apply(g)? != self.member(i + r) {
                return Ok(None);
            }
        }
        Ok(Some(r))
    }
}

/// A simplex of the building: a set of pairwise adjacent vertex classes, carried with
/// one representative chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Simplex {
    pub vertices: Vec<VertexKey>,
    pub chain: LatticeChain,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn from_chain(chain: LatticeChain) -> Simplex {
        Simplex { vertices: chain.vertex_keys(), chain }.canonical()
    }

    /// Builds the chain from representatives of pairwise adjacent classes.
    pub fn from_lattices(lats: &[Lattice]) -> Result<Simplex> {
        let Some(l0) = lats.iter().min_by(|a, b| a.key.cmp(&b.key)) else {
            return Err(BuildingError::MalformedChain("empty simplex".into()));
        };
        let mut reps: Vec<Lattice> = Vec::new();
        for l in lats {
            if reps.iter().any(|r| r.key == l.key) {
                continue;
            }
            // least t with p^t·l ⊆ l0
            let (t, _) = l0.relative_extremes(l);
            let r = l.scaled(t);
            if !r.contains(&l0.scaled(1)) {
                return Err(BuildingError::MalformedChain("vertices are not pairwise adjacent".into()));
            }
            reps.push(r);
        }
        reps.sort_by_key(|r| r.det_val());
        Ok(Simplex::from_chain(LatticeChain::new(reps)?))
    }

    /// Rotate the chain to start at the least vertex key, normalized with that
    /// member's shift zero.
    fn canonical(self) -> Simplex {
        let e = self.chain.period();
        let r = (0..e).min_by(|&a, &b| self.chain.lattices[a].key.cmp(&self.chain.lattices[b].key)).unwrap();
        let c = self.chain.rotate(r);
        let t = -c.lattices[0].shift;
        Simplex { vertices: self.vertices, chain: c.scaled(t) }
    }

    pub fn apply(&self, g: &QpMatrix) -> Result<Simplex> {
        Ok(Simplex::from_chain(self.chain.apply(g)?))
    }

    pub fn is_face_of(&self, o: &Simplex) -> bool {
        self.vertices.iter().all(|v| o.vertices.contains(v))
    }

    /// Chain of the face spanned by a subset of vertex indices of this simplex.
    pub fn face(&self, keep: &[usize]) -> Result<Simplex> {
        let lats: Vec<Lattice> =
            self.chain.lattices.iter().filter(|l| keep.iter().any(|&i| self.vertices[i] == l.key)).cloned().collect();
        Simplex::from_lattices(&lats)
    }

    /// The standard simplex of a composition, with unit shift normalization.
    pub fn standard(p: u32, k: u32, comp: &[usize]) -> Result<Simplex> {
        Ok(Simplex::from_chain(LatticeChain::standard(p, k, comp)?))
    }
}

/// `p^s` as a scalar matrix.
pub fn p_power(p: u32, n: usize, s: i64) -> QpMatrix {
    QpMatrix::scalar(n, pow_q(p, s))
}
