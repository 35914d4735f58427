//! The embedding `j_E : X_E → X_F` for a monogenic field `E ⊂ M(N, F)`.
//!
//! `V = E^m` is identified with `F^N`, `N = d·m`, through the basis `x^i·ε_j`. An
//! `o_E`-lattice function `Λ` viewed over F is `t ↦ Λ(e(E/F)·t)`, so a point with
//! barycentric weights `w_i` on the members `B_i` of an `o_E`-chain maps to the point
//! with weight `w_i / e(E/F)` on each class `[π_E^j B_i]`, `0 ≤ j < e(E/F)`.

use std::collections::BTreeMap;

use btchar_padic::{ExtensionShape, LocalFieldDesc};
use num_rational::Ratio;

use crate::chain::{LatticeChain, Simplex};
use crate::error::{BuildingError, Result};
use crate::lattice::{Lattice, VertexKey};
use crate::matrix::{q, QpMatrix, Q};
use crate::order::{simplex_of_order, HereditaryOrder};

/// A point of the building as barycentric weights on vertex classes of one simplex.
pub type Point = BTreeMap<VertexKey, Ratio<i64>>;

pub fn isobarycenter(s: &Simplex) -> Point {
    let w = Ratio::new(1, s.vertices.len() as i64);
    s.vertices.iter().map(|k| (k.clone(), w)).collect()
}

pub fn act_on_point(p: u32, k: u32, g: &QpMatrix, x: &Point) -> Result<Point> {
    let mut out = Point::new();
    for (key, w) in x {
        let l = Lattice { p, k, shift: 0, key: key.clone() }.apply(g)?;
        *out.entry(l.key).or_insert(Ratio::new(0, 1)) += *w;
    }
    Ok(out)
}

/// `E = F[x]/(g)` acting on `V = E^m`.
#[derive(Clone, Debug)]
pub struct EStructure {
    pub p: u32,
    pub k: u32,
    pub d: usize,
    pub m: usize,
    pub e: usize,
    pub f: usize,
    pub minpoly: Vec<i64>,
    /// The generator `x` acting on `F^N`.
    pub x: QpMatrix,
    /// A uniformizer of E acting on `F^N`.
    pub uniformizer: QpMatrix,
}

impl EStructure {
    /// `minpoly` monic, low degree first; degree 1 gives `E = F`.
    pub fn new(p: u32, k: u32, minpoly: &[i64], m: usize) -> Result<EStructure> {
        let d = minpoly.len() - 1;
        if d == 0 || m == 0 || minpoly[d] != 1 {
            return Err(BuildingError::Unsupported("extension polynomial must be monic of positive degree".into()));
        }
        let (e, f) = if d == 1 {
            (1, 1)
        } else {
            let desc = LocalFieldDesc::new(p, k.min(btchar_padic::precision_cap(p)), Some(minpoly))?;
            match desc.extension.as_ref().map(|x| &x.1) {
                Some(ExtensionShape::Eisenstein { e }) => (*e as usize, 1),
                Some(ExtensionShape::Unramified { f, .. }) => (1, *f as usize),
                None => (1, 1),
            }
        };
        let comp = QpMatrix::companion(&minpoly.iter().map(|&c| q(c)).collect::<Vec<_>>());
        let x = QpMatrix::block_diag(&vec![comp; m]);
        let n = d * m;
        let uniformizer = if e > 1 { x.clone() } else { QpMatrix::scalar(n, q(p as i64)) };
        Ok(EStructure { p, k, d, m, e, f, minpoly: minpoly.to_vec(), x, uniformizer })
    }

    pub fn n(&self) -> usize {
        self.d * self.m
    }

    /// The element `Σ a_i x^i` of E acting on V.
    pub fn elem(&self, a: &[Q]) -> QpMatrix {
        let n = self.n();
        let mut acc = QpMatrix::zeros(n, n);
        let mut xp = QpMatrix::identity(n);
        for c in a.iter().take(self.d) {
            acc = acc.add(&xp.scale(*c));
            xp = xp.mul(&self.x);
        }
        acc
    }

    /// The element `Σ a_i x^i` acting on one copy of E (a `d × d` block).
    pub fn elem_block(&self, a: &[Q]) -> QpMatrix {
        let comp = QpMatrix::companion(&self.minpoly.iter().map(|&c| q(c)).collect::<Vec<_>>());
        let mut acc = QpMatrix::zeros(self.d, self.d);
        let mut xp = QpMatrix::identity(self.d);
        for coef in a.iter().take(self.d) {
            acc = acc.add(&xp.scale(*coef));
            xp = xp.mul(&comp);
        }
        acc
    }

    /// Assemble `d × d` blocks (an `m × m` matrix over E) into a matrix on V.
    pub fn from_blocks(&self, blocks: &[Vec<QpMatrix>]) -> QpMatrix {
        let (d, n) = (self.d, self.n());
        let mut g = QpMatrix::zeros(n, n);
        for (r, row) in blocks.iter().enumerate() {
            for (c, blk) in row.iter().enumerate() {
                for i in 0..d {
                    for j in 0..d {
                        g.set(r * d + i, c * d + j, blk.get(i, j));
                    }
                }
            }
        }
        g
    }

    /// An `m × m` matrix over E (entries as coefficient vectors) acting on V.
    pub fn ge_matrix(&self, entries: &[Vec<Vec<Q>>]) -> QpMatrix {
        let blocks: Vec<Vec<QpMatrix>> = entries.iter().map(|row| row.iter().map(|a| self.elem_block(a)).collect()).collect();
        self.from_blocks(&blocks)
    }

    /// `g ∈ G_E`: commutes with the action of E.
    pub fn centralizes(&self, g: &QpMatrix) -> bool {
        g.commutes_with(&self.x)
    }

    pub fn is_oe_stable(&self, l: &Lattice) -> bool {
        let img = self.x.mul(&l.basis());
        (0..img.cols).all(|j| l.contains_vec(&img.col(j)))
    }

    /// The `o_E`-lattice generated by vectors of `F^N`.
    pub fn oe_lattice(&self, gens: &[Vec<Q>]) -> Result<Lattice> {
        let mut cols = Vec::new();
        for v in gens {
            let mut w = v.clone();
            for _ in 0..self.d {
                cols.push(w.clone());
                w = self.x.mul_vec(&w);
            }
        }
        Lattice::from_generators(self.p, self.k, &QpMatrix::from_columns(&cols))
    }
}

/// `B_0 ⊋ B_1 ⊋ … ⊋ B_{r-1} ⊋ π_E·B_0` of `o_E`-lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OEChain {
    pub lattices: Vec<Lattice>,
}

impl OEChain {
    pub fn new(es: &EStructure, lattices: Vec<Lattice>) -> Result<OEChain> {
        if lattices.is_empty() || lattices.len() > es.m {
            return Err(BuildingError::NotAnOEChain(format!("period {} outside 1..={}", lattices.len(), es.m)));
        }
        for (i, l) in lattices.iter().enumerate() {
            if !es.is_oe_stable(l) {
                return Err(BuildingError::NotAnOEChain(format!("member {i} is not an o_E-lattice")));
            }
        }
        let pib0 = lattices[0].apply(&es.uniformizer)?;
        for i in 0..lattices.len() {
            let next = if i + 1 < lattices.len() { &lattices[i + 1] } else { &pib0 };
            if lattices[i] == *next || !lattices[i].contains(next) {
                return Err(BuildingError::NotAnOEChain(format!("member {i} does not strictly contain its successor")));
            }
        }
        Ok(OEChain { lattices })
    }

    pub fn period(&self) -> usize {
        self.lattices.len()
    }

    /// `B_i` for `0 ≤ i ≤ r`, with `B_r = π_E·B_0`.
    pub fn member(&self, es: &EStructure, i: usize) -> Result<Lattice> {
        if i < self.period() {
            Ok(self.lattices[i].clone())
        } else {
            self.lattices[i - self.period()].apply(&es.uniformizer)
        }
    }

    /// The same chain as an o_F-chain: all `π_E^j B_i`, `0 ≤ j < e(E/F)`.
    pub fn f_chain(&self, es: &EStructure) -> Result<LatticeChain> {
        let mut lats = Vec::new();
        let mut cur = self.lattices.clone();
        for _ in 0..es.e {
            lats.extend(cur.iter().cloned());
            cur = cur.iter().map(|l| l.apply(&es.uniformizer)).collect::<Result<_>>()?;
        }
        LatticeChain::new(lats)
    }

    pub fn apply(&self, es: &EStructure, g: &QpMatrix) -> Result<OEChain> {
        OEChain::new(es, self.lattices.iter().map(|l| l.apply(g)).collect::<Result<_>>()?)
    }

    pub fn face(&self, es: &EStructure, keep: &[usize]) -> Result<OEChain> {
        OEChain::new(es, keep.iter().map(|&i| self.lattices[i].clone()).collect())
    }

    /// `g ∈ U(𝔅)`: `g ∈ G_E` and `g·B_i = B_i`.
    pub fn unit_group_contains(&self, es: &EStructure, g: &QpMatrix) -> Result<bool> {
        if !es.centralizes(g) {
            return Ok(false);
        }
        for l in &self.lattices {
            if l.apply(g)? != *l {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `g ∈ U¹(𝔅)`: `g ∈ U(𝔅)` and `(g - 1)·B_i ⊆ B_{i+1}`.
    pub fn principal_units_contain(&self, es: &EStructure, g: &QpMatrix) -> Result<bool> {
        if !self.unit_group_contains(es, g)? {
            return Ok(false);
        }
        let h = g.sub(&QpMatrix::identity(es.n()));
        for i in 0..self.period() {
            let img = h.mul(&self.lattices[i].basis());
            let next = self.member(es, i + 1)?;
            if !(0..img.cols).all(|j| next.contains_vec(&img.col(j))) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `𝔄(𝔅)`: the hereditary o_F-order of the chain.
pub fn order_of_oe_chain(es: &EStructure, b: &OEChain) -> Result<HereditaryOrder> {
    HereditaryOrder::from_chain(&b.f_chain(es)?)
}

/// `j_E` through lattice functions; `weights` are barycentric on `B_0, …, B_{r-1}`.
pub fn embed_j(es: &EStructure, b: &OEChain, weights: &[Ratio<i64>]) -> Result<Point> {
    check_weights(b, weights)?;
    let e = Ratio::new(es.e as i64, 1);
    let mut out = Point::new();
    let mut cur = b.lattices.clone();
    for _ in 0..es.e {
        for (l, w) in cur.iter().zip(weights) {
            if *w.numer() != 0 {
                *out.entry(l.key.clone()).or_insert(Ratio::new(0, 1)) += *w / e;
            }
        }
        cur = cur.iter().map(|l| l.apply(&es.uniformizer)).collect::<Result<_>>()?;
    }
    Ok(out)
}

/// `j_E` as the affine extension, over the first barycentric subdivision of `σ_𝔅`, of
/// `barycenter(τ) ↦ isobarycenter(σ_{𝔄(τ)})` for faces `τ`, with `σ_{𝔄(τ)}` computed
/// from the order alone.
pub fn embed_j_subdivision(es: &EStructure, b: &OEChain, weights: &[Ratio<i64>]) -> Result<Point> {
    check_weights(b, weights)?;
    let mut idx: Vec<usize> = (0..b.period()).collect();
    idx.sort_by(|&i, &j| weights[j].cmp(&weights[i]).then(i.cmp(&j)));
    let mut out = Point::new();
    for kk in 1..=idx.len() {
        let t_k = weights[idx[kk - 1]];
        let t_next = if kk < idx.len() { weights[idx[kk]] } else { Ratio::new(0, 1) };
        let lambda = Ratio::new(kk as i64, 1) * (t_k - t_next);
        if *lambda.numer() == 0 {
            continue;
        }
        let mut face: Vec<usize> = idx[..kk].to_vec();
        face.sort();
        let tau = b.face(es, &face)?;
        let sigma = simplex_of_order(&order_of_oe_chain(es, &tau)?)?;
        for (key, w) in isobarycenter(&sigma) {
            *out.entry(key).or_insert(Ratio::new(0, 1)) += lambda * w;
        }
    }
    Ok(out)
}

/// Outcome of the bounded conjugacy search behind the desk form of "G-conjugate
/// simplices of X_E are G_E-conjugate".
#[derive(Clone, Debug, PartialEq)]
pub enum ConjugacyVerdict {
    /// A conjugator in `G_E` was found.
    Confirmed(QpMatrix),
    /// The F-simplices are not G-conjugate; nothing to check.
    NotGConjugate,
    /// No conjugator within the search bounds; never a counterexample.
    Indeterminate,
}

fn cyclic_type(c: &LatticeChain) -> Vec<usize> {
    let comp = c.composition();
    (0..comp.len()).map(|r| comp[r..].iter().chain(&comp[..r]).copied().collect::<Vec<_>>()).min().unwrap_or_default()
}

/// Searches `g ∈ GL_m(E)` with entries `0` or `r·π_E^j` (`r` a nonzero residue
/// representative, `|j| ≤ depth`) for `g·σ_𝔅₁ = σ_𝔅₂`, trying at most `budget` matrices.
pub fn chain_conjugacy_search(
    es: &EStructure,
    b1: &OEChain,
    b2: &OEChain,
    depth: i64,
    budget: usize,
) -> Result<ConjugacyVerdict> {
    let c1 = b1.f_chain(es)?;
    let c2 = b2.f_chain(es)?;
    if cyclic_type(&c1) != cyclic_type(&c2) {
        return Ok(ConjugacyVerdict::NotGConjugate);
    }
    let target = c2.vertex_keys();
    let p = es.p as i64;
    // residue representatives: polynomials in x of degree < f with digits in [0, p)
    let mut residues: Vec<Vec<Q>> = Vec::new();
    for code in 1..(p.pow(es.f as u32)) {
        let mut c = code;
        let mut v = vec![q(0); es.d];
        for slot in v.iter_mut().take(es.f) {
            *slot = q(c % p);
            c /= p;
        }
        residues.push(v);
    }
    let pi_d = if es.e > 1 {
        QpMatrix::companion(&es.minpoly.iter().map(|&c| q(c)).collect::<Vec<_>>())
    } else {
        QpMatrix::scalar(es.d, q(es.p as i64))
    };
    let mut entries: Vec<QpMatrix> = vec![QpMatrix::zeros(es.d, es.d)];
    for r in &residues {
        let rm = es.elem_block(r);
        for j in -depth..=depth {
            entries.push(rm.mul(&pi_d.pow(j)?));
        }
    }
    let m = es.m;
    let total = entries.len().checked_pow((m * m) as u32).unwrap_or(usize::MAX);
    let mut tried = 0usize;
    let mut digits = vec![0usize; m * m];
    for _ in 0..total {
        if tried >= budget {
            break;
        }
        tried += 1;
        let blocks: Vec<Vec<QpMatrix>> = (0..m).map(|r| (0..m).map(|c| entries[digits[r * m + c]].clone()).collect()).collect();
        let g = es.from_blocks(&blocks);
        for slot in digits.iter_mut() {
            *slot += 1;
            if *slot < entries.len() {
                break;
            }
            *slot = 0;
        }
        if *g.det().numer() == 0 {
            continue;
        }
        if c1.apply(&g)?.vertex_keys() == target {
            return Ok(ConjugacyVerdict::Confirmed(g));
        }
    }
    Ok(ConjugacyVerdict::Indeterminate)
}

fn check_weights(b: &OEChain, weights: &[Ratio<i64>]) -> Result<()> {
    if weights.len() != b.period() {
        return Err(BuildingError::DimensionMismatch("one weight per chain member".into()));
    }
    if weights.iter().any(|w| *w.numer() < 0) || weights.iter().sum::<Ratio<i64>>() != Ratio::new(1, 1) {
        return Err(BuildingError::DimensionMismatch("weights must be nonnegative and sum to 1".into()));
    }
    Ok(())
}
