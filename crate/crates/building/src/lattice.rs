//! Full-rank o-lattices in Q_p^n in canonical Hermite form.
//!
//! A lattice is `p^shift * M` where `M ⊆ o^n`, `M ⊄ p·o^n`, and `M` is given by its
//! upper-triangular column Hermite basis: column `j` has `p^{a_j}` on the diagonal,
//! zeros below, and entry `i < j` reduced into `[0, p^{a_i})`. That basis, the
//! [`VertexKey`], is unique per homothety class.
//!
//! Arithmetic is exact over Q; reduction modulo `p^k` is used only where the lattice
//! is certified to contain `p^k·o^n`: every elementary divisor of `L + p^k·o^n` is
//! below `p^k`, so `p^k·o^n ⊆ p·(L + p^k·o^n)` and Nakayama gives `L = L + p^k·o^n`.

use serde::{Deserialize, Serialize};

use btchar_padic::{mod_inverse, pow_u64, precision_cap};

use crate::error::{BuildingError, Result};
use crate::fplin;
use crate::matrix::{pow_q, q, reduce_q, val_q, QpMatrix, Q};

/// Canonical Hermite basis of a normalized lattice; the key of its homothety class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexKey {
    pub diag: Vec<u32>,
    /// Column-major `n × n` entries.
    pub entries: Vec<u64>,
}

impl VertexKey {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn label(&self) -> String {
        let n = self.n();
        let rows: Vec<String> = (0..n)
            .map(|i| {
                let r: Vec<String> = (0..n).map(|j| self.entries[j * n + i].to_string()).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

/// `k` is the working precision at which the Hermite form was certified; it plays no
/// part in equality.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub p: u32,
    pub k: u32,
    pub shift: i64,
    pub key: VertexKey,
}

impl PartialEq for Lattice {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.shift == o.shift && self.key == o.key
    }
}

impl Eq for Lattice {}

impl std::hash::Hash for Lattice {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.p.hash(h);
        self.shift.hash(h);
        self.key.hash(h);
    }
}

fn val_u(p: u32, mut x: u64, k: u32) -> u32 {
    if x == 0 {
        return k;
    }
    let mut v = 0;
    while x.is_multiple_of(p as u64) {
        x /= p as u64;
        v += 1;
    }
    v
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// Largest elementary divisor exponent of the span of `cols` modulo `p^k` (`k` if
/// some divisor vanishes), by Smith elimination over `Z/p^k`.
fn max_elementary_divisor(p: u32, k: u32, cols: &[Vec<u64>]) -> u32 {
    let m = pow_u64(p, k);
    let mut a: Vec<Vec<u64>> = cols.to_vec();
    let mut best = 0;
    while !a.is_empty() {
        let mut pick: Option<(u32, usize, usize)> = None;
        for (j, c) in a.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                let v = val_u(p, x, k);
                if pick.is_none_or(|(w, _, _)| v < w) {
                    pick = Some((v, j, i));
                }
            }
        }
        let Some((v, j, i)) = pick else { break };
        if v >= k {
            return k;
        }
        best = best.max(v);
        let c = a.swap_remove(j);
        let pv = pow_u64(p, v);
        let uinv = mod_inverse(c[i] / pv, m).expect("unit");
        for o in a.iter_mut() {
            let t = mulmod(o[i] / pv, uinv, m);
            for r in 0..o.len() {
                o[r] = (o[r] + m - mulmod(t, c[r], m)) % m;
            }
        }
        for o in a.iter_mut() {
            o.remove(i);
        }
    }
    best
}

/// Upper-triangular column Hermite form of the span of `cols` plus `p^k·o^n`.
fn hermite(p: u32, k: u32, n: usize, mut cols: Vec<Vec<u64>>) -> Result<VertexKey> {
    let m = pow_u64(p, k);
    let mut piv: Vec<Vec<u64>> = vec![Vec::new(); n];
    let mut diag = vec![0u32; n];
    for r in (0..n).rev() {
        let best = cols.iter().enumerate().map(|(i, c)| (val_u(p, c[r], k), i)).min();
        let Some((a, idx)) = best.filter(|(a, _)| *a < k) else {
            return Err(BuildingError::PrecisionInsufficient(format!(
                "lattice is not certified to contain p^{k} o^{n}; raise the precision"
            )));
        };
        let mut c = cols.swap_remove(idx);
        let pa = pow_u64(p, a);
        let unit = c[r] / pa;
        let uinv = mod_inverse(unit, m).expect("unit");
        for x in c.iter_mut() {
            *x = mulmod(*x, uinv, m);
        }
        for o in cols.iter_mut() {
            if o[r] != 0 {
                let t = o[r] / pa;
                for i in 0..n {
                    o[i] = (o[i] + m - mulmod(t, c[i], m)) % m;
                }
            }
        }
        cols.retain(|o| o.iter().any(|&x| x != 0));
        piv[r] = c;
        diag[r] = a;
    }
    if max_elementary_divisor(p, k, &piv) >= k {
        return Err(BuildingError::PrecisionInsufficient(format!(
            "lattice is not certified to contain p^{k} o^{n}; raise the precision"
        )));
    }
    for j in 0..n {
        for i in (0..j).rev() {
            let pa = pow_u64(p, diag[i]);
            let t = piv[j][i] / pa;
            if t != 0 {
                let ci = piv[i].clone();
                for r in 0..=i {
                    piv[j][r] = (piv[j][r] + m - mulmod(t, ci[r], m)) % m;
                }
            }
        }
    }
    let mut entries = Vec::with_capacity(n * n);
    for c in &piv {
        entries.extend_from_slice(c);
    }
    Ok(VertexKey { diag, entries })
}

impl Lattice {
    pub fn standard(p: u32, k: u32, n: usize) -> Lattice {
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Lattice { p, k, shift: 0, key: VertexKey { diag: vec![0; n], entries } }
    }

    /// The lattice spanned by the columns of `gens` (which must have full row rank).
    ///
    /// Starts at precision `k` and raises it until the Hermite form is certified, up
    /// to the cap for `p`.
    pub fn from_generators(p: u32, k: u32, gens: &QpMatrix) -> Result<Lattice> {
        let cap = precision_cap(p);
        if k == 0 || k > cap {
            return Err(BuildingError::PrecisionInsufficient(format!("precision {k} outside 1..={cap}")));
        }
        let mut k = k;
        loop {
            match Self::from_generators_at(p, k, gens) {
                Err(BuildingError::PrecisionInsufficient(_)) if k < cap => k = (k + 6).min(cap),
                r => return r,
            }
        }
    }

    /// As [`Lattice::from_generators`] at exactly precision `k`.
    pub fn from_generators_at(p: u32, k: u32, gens: &QpMatrix) -> Result<Lattice> {
        let s = gens.min_val(p).ok_or(BuildingError::Singular)?;
        let m = pow_u64(p, k);
        let scale = pow_q(p, -s);
        let cols: Vec<Vec<u64>> = (0..gens.cols)
            .map(|j| (0..gens.rows).map(|i| reduce_q(&(gens.get(i, j) * scale), m)).collect())
            .filter(|c: &Vec<u64>| c.iter().any(|&x| x != 0))
            .collect();
        let key = hermite(p, k, gens.rows, cols)?;
        Ok(Lattice { p, k, shift: s, key })
    }

    pub fn n(&self) -> usize {
        self.key.n()
    }

    pub fn max_diag(&self) -> u32 {
        self.key.diag.iter().copied().max().unwrap_or(0)
    }

    /// Exact basis `p^shift * H` as columns.
    pub fn basis(&self) -> QpMatrix {
        let n = self.n();
        let s = pow_q(self.p, self.shift);
        QpMatrix::from_fn(n, n, |i, j| Q::from_integer(self.key.entries[j * n + i] as i128) * s)
    }

    /// `v_p(det)` of any basis.
    pub fn det_val(&self) -> i64 {
        self.key.diag.iter().map(|&a| a as i64).sum::<i64>() + self.n() as i64 * self.shift
    }

    pub fn scaled(&self, t: i64) -> Lattice {
        Lattice { shift: self.shift + t, ..self.clone() }
    }

    pub fn same_class(&self, o: &Lattice) -> bool {
        self.key == o.key
    }

    pub fn contains_vec(&self, v: &[Q]) -> bool {
        let n = self.n();
        let scale = pow_q(self.p, -self.shift);
        let mut w = Vec::with_capacity(n);
        let m = pow_u64(self.p, self.k);
        for x in v {
            let y = x * scale;
            match val_q(self.p, &y) {
                Some(vy) if vy < 0 => return false,
                _ => w.push(reduce_q(&y, m)),
            }
        }
        for r in (0..n).rev() {
            if w[r] == 0 {
                continue;
            }
            let a = self.key.diag[r];
            if val_u(self.p, w[r], self.k) < a {
                return false;
            }
            let t = w[r] / pow_u64(self.p, a);
            for i in 0..=r {
                w[i] = (w[i] + m - mulmod(t, self.key.entries[r * n + i], m)) % m;
            }
        }
        true
    }

    pub fn contains(&self, o: &Lattice) -> bool {
        let b = o.basis();
        (0..b.cols).all(|j| self.contains_vec(&b.col(j)))
    }

    pub fn apply(&self, g: &QpMatrix) -> Result<Lattice> {
        Lattice::from_generators(self.p, self.k, &g.mul(&self.basis()))
    }

    /// Combinatorial distance between the homothety classes (`a_max - a_min` of the
    /// relative elementary divisors).
    pub fn distance(&self, o: &Lattice) -> i64 {
        let (t, u) = self.relative_extremes(o);
        t - u
    }

    /// `(t_min, u_max)`: least `t` with `p^t·o ⊆ self`, greatest `u` with `self ⊆ p^u·o`.
    pub fn relative_extremes(&self, o: &Lattice) -> (i64, i64) {
        let base = self.shift - o.shift;
        let mut t = base;
        while !self.contains(&o.scaled(t)) {
            t += 1;
        }
        let mut u = base;
        while !o.scaled(u).contains(self) {
            u -= 1;
        }
        (t, u)
    }

    /// Relative elementary divisors of `o` with respect to `self`, increasing, for `n ≤ 3`.
    pub fn relative_invariants(&self, o: &Lattice) -> Result<Vec<i64>> {
        let (t, u) = self.relative_extremes(o);
        let (lo, hi) = (-t, -u);
        match self.n() {
            1 => Ok(vec![o.det_val() - self.det_val()]),
            2 => Ok(vec![lo, hi]),
            3 => Ok(vec![lo, o.det_val() - self.det_val() - lo - hi, hi]),
            n => Err(BuildingError::Unsupported(format!("relative invariants for n = {n}"))),
        }
    }

    /// Lattices `L'` with `pL ⊊ L' ⊊ L`, one per nonzero proper subspace of `L/pL`.
    pub fn neighbours(&self) -> Result<Vec<Lattice>> {
        let n = self.n();
        let b = self.basis();
        let pb = b.scale(q(self.p as i64));
        let mut out = Vec::new();
        for w in fplin::proper_subspaces(self.p, n) {
            let extra = QpMatrix::from_fn(n, w.len(), |i, j| q(w[j][i] as i64));
            let gens = pb.hconcat(&b.mul(&extra));
            out.push(Lattice::from_generators(self.p, self.k, &gens)?);
        }
        Ok(out)
    }

    /// Coordinates of `v ∈ self` in the basis, reduced mod p.
    pub fn coords_mod_p(&self, v: &[Q]) -> Result<Vec<u32>> {
        let inv = self.basis().inverse()?;
        let c = inv.mul_vec(v);
        c.iter()
            .map(|x| match val_q(self.p, x) {
                Some(vx) if vx < 0 => Err(BuildingError::DimensionMismatch("vector not in lattice".into())),
                _ => Ok(reduce_q(x, self.p as u64) as u32),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(p: u32, rows: &[Vec<i64>]) -> Lattice {
        Lattice::from_generators(p, 12, &QpMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn canonical_form_is_unique() {
        let a = lat(3, &[vec![1, 0], vec![0, 3]]);
        let b = lat(3, &[vec![1, 3], vec![3, 3]]);
        let c = lat(3, &[vec![2, 0], vec![0, 6]]);
        assert_eq!(a.key, c.key);
        assert_eq!(a.shift, 0);
        assert_eq!(a.key, b.key);
        assert_eq!(a.key, lat(3, &[vec![5, 1], vec![0, 3]]).key);
        assert_ne!(a.key, lat(3, &[vec![3, 0], vec![0, 1]]).key);
    }

    #[test]
    fn homothety_normalization() {
        let a = lat(2, &[vec![4, 0], vec![0, 8]]);
        assert_eq!(a.shift, 2);
        assert_eq!(a.key.diag, vec![0, 1]);
        assert_eq!(a.det_val(), 5);
    }

    #[test]
    fn inclusion_and_distance() {
        let o = Lattice::standard(2, 12, 2);
        let l = lat(2, &[vec![1, 0], vec![0, 4]]);
        assert!(o.contains(&l));
        assert!(!l.contains(&o));
        assert_eq!(o.distance(&l), 2);
        assert_eq!(o.relative_invariants(&l).unwrap(), vec![0, 2]);
        assert_eq!(o.neighbours().unwrap().len(), 3);
    }

    #[test]
    fn uncertified_lattice_is_rejected() {
        let g = QpMatrix::from_i64(&[vec![1, 0], vec![0, 32]]);
        let r = Lattice::from_generators_at(2, 4, &g);
        assert!(matches!(r, Err(BuildingError::PrecisionInsufficient(_))));
        let raised = Lattice::from_generators(2, 4, &g).unwrap();
        assert_eq!(raised.key.diag, vec![0, 5]);
        assert!(raised.k > 5);
    }
}
