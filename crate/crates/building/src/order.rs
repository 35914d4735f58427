//! Hereditary orders, the order/simplex bijection and parahoric quotients.

use serde::{Deserialize, Serialize};

use crate::chain::{LatticeChain, Simplex};
use crate::error::{BuildingError, Result};
use crate::fplin;
use crate::lattice::{Lattice, VertexKey};
use crate::matrix::{q, reduce_q, val_q, QpMatrix};

/// Canonical identity of an order: its Hermite key as a lattice in `M(N, Q_p) ≅ Q_p^{N²}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrderKey {
    pub shift: i64,
    pub key: VertexKey,
}

#[derive(Clone, Debug)]
pub struct HereditaryOrder {
    pub chain: LatticeChain,
    /// `g` with `g·Λ_i = L_i` for the standard chain of `composition`.
    pub adapted: QpMatrix,
    pub composition: Vec<usize>,
    pub ring: Lattice,
    pub radical: Lattice,
}

fn block_of(comp: &[usize]) -> Vec<usize> {
    comp.iter().enumerate().flat_map(|(b, &m)| std::iter::repeat_n(b, m)).collect()
}

fn order_lattice(g: &QpMatrix, ginv: &QpMatrix, blocks: &[usize], strict: bool, p: u32, k: u32) -> Result<Lattice> {
    let n = g.rows;
    let mut gens = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let bump = if strict { blocks[a] <= blocks[b] } else { blocks[a] < blocks[b] };
            let s = if bump { q(p as i64) } else { q(1) };
            // g E_ab g^{-1} = (column a of g)(row b of g^{-1})
            let x = QpMatrix::from_fn(n, n, |i, j| g.get(i, a) * ginv.get(b, j) * s);
            gens.push(x.vec());
        }
    }
    Lattice::from_generators(p, k, &QpMatrix::from_columns(&gens))
}

impl HereditaryOrder {
    pub fn from_chain(chain: &LatticeChain) -> Result<HereditaryOrder> {
        let chain = Simplex::from_chain(chain.clone()).chain;
        let comp = chain.composition();
        let g = chain.adapted_basis()?;
        let ginv = g.inverse()?;
        let blocks = block_of(&comp);
        let (p, k) = (chain.p(), chain.k());
        let ring = order_lattice(&g, &ginv, &blocks, false, p, k)?;
        let radical = order_lattice(&g, &ginv, &blocks, true, p, k)?;
        Ok(HereditaryOrder { chain, adapted: g, composition: comp, ring, radical })
    }

    pub fn n(&self) -> usize {
        self.chain.n()
    }

    pub fn p(&self) -> u32 {
        self.chain.p()
    }

    pub fn period(&self) -> usize {
        self.composition.len()
    }

    pub fn is_maximal(&self) -> bool {
        self.period() == 1
    }

    pub fn is_iwahori(&self) -> bool {
        self.period() == self.n()
    }

    pub fn key(&self) -> OrderKey {
        OrderKey { shift: self.ring.shift, key: self.ring.key.clone() }
    }

    pub fn contains(&self, x: &QpMatrix) -> bool {
        self.ring.contains_vec(&x.vec())
    }

    pub fn radical_contains(&self, x: &QpMatrix) -> bool {
        self.radical.contains_vec(&x.vec())
    }

    /// `x ∈ U(𝔄)`.
    pub fn is_unit(&self, x: &QpMatrix) -> Result<bool> {
        if !self.contains(x) {
            return Ok(false);
        }
        match x.inverse() {
            Ok(y) => Ok(self.contains(&y)),
            Err(BuildingError::Singular) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// `x ∈ U¹(𝔄) = 1 + 𝔓_𝔄`.
    pub fn is_principal_unit(&self, x: &QpMatrix) -> bool {
        self.radical_contains(&x.sub(&QpMatrix::identity(self.n())))
    }

    /// `self ⊆ other` as lattices in `M(N, Q_p)`.
    pub fn is_subset_of(&self, other: &HereditaryOrder) -> bool {
        other.ring.contains(&self.ring)
    }

    /// An o-basis of the order as matrices.
    pub fn ring_basis(&self) -> Vec<QpMatrix> {
        let b = self.ring.basis();
        (0..b.cols).map(|j| QpMatrix::unvec(self.n(), &b.col(j))).collect()
    }

    pub fn parahoric_quotient(&self) -> ParahoricQuotient {
        ParahoricQuotient { p: self.p(), blocks: self.composition.clone(), adapted: self.adapted.clone(), order: self.clone() }
    }
}

/// `order_of_simplex`.
pub fn order_of_simplex(s: &Simplex) -> Result<HereditaryOrder> {
    HereditaryOrder::from_chain(&s.chain)
}

/// `simplex_of_order`, computed from the ring alone: the classes of lattices stable
/// under the order, found among `pL_0 ⊆ L ⊆ L_0` for the stable lattice `L_0 = 𝔄·o^N`.
pub fn simplex_of_order(a: &HereditaryOrder) -> Result<Simplex> {
    let n = a.n();
    let p = a.p();
    let k = a.ring.k;
    let basis = a.ring_basis();
    let all_cols: Vec<Vec<_>> = basis.iter().flat_map(|x| (0..n).map(move |j| x.col(j))).collect();
    let l0 = Lattice::from_generators(p, k, &QpMatrix::from_columns(&all_cols))?;
    let b0 = l0.basis();
    let b0inv = b0.inverse()?;
    let reduced: Vec<Vec<u32>> = basis
        .iter()
        .map(|x| {
            let y = b0inv.mul(x).mul(&b0);
            y.a.iter()
                .map(|e| {
                    debug_assert!(val_q(p, e).is_none_or(|v| v >= 0));
                    reduce_q(e, p as u64) as u32
                })
                .collect()
        })
        .collect();
    let mut lats = vec![l0.clone()];
    for w in fplin::proper_subspaces(p, n) {
        let stable = reduced.iter().all(|m| w.iter().all(|v| fplin::in_span(p, &w, &fplin::apply(p, m, v))));
        if stable {
            let pb = b0.scale(q(p as i64));
            let extra = QpMatrix::from_fn(n, w.len(), |i, j| q(w[j][i] as i64));
            lats.push(Lattice::from_generators(p, k, &pb.hconcat(&b0.mul(&extra)))?);
        }
    }
    Simplex::from_lattices(&lats)
}

/// `U(𝔄)/U¹(𝔄) ≅ ∏ GL(m_i, q)`, with the reduction map.
#[derive(Clone, Debug)]
pub struct ParahoricQuotient {
    pub p: u32,
    pub blocks: Vec<usize>,
    adapted: QpMatrix,
    order: HereditaryOrder,
}

/// A square matrix over F_p, row-major.
pub type FpMatrix = Vec<Vec<u32>>;

impl ParahoricQuotient {
    pub fn group_order(&self) -> u64 {
        self.blocks.iter().map(|&m| gl_order(m, self.p as u64)).product()
    }

    /// Image of `x ∈ U(𝔄)` in the product of the diagonal blocks.
    pub fn reduce(&self, x: &QpMatrix) -> Result<Vec<FpMatrix>> {
        if !self.order.is_unit(x)? {
            return Err(BuildingError::ElementNotInParahoric);
        }
        let y = self.adapted.inverse()?.mul(x).mul(&self.adapted);
        let mut out = Vec::new();
        let mut off = 0;
        for &m in &self.blocks {
            let blk: FpMatrix =
                (0..m).map(|i| (0..m).map(|j| reduce_q(&y.get(off + i, off + j), self.p as u64) as u32).collect()).collect();
            out.push(blk);
            off += m;
        }
        Ok(out)
    }
}

pub fn gl_order(n: usize, q: u64) -> u64 {
    let qn = q.pow(n as u32);
    (0..n as u32).map(|i| qn - q.pow(i)).product()
}
