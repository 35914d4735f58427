//! GL(n, q) by explicit enumeration, with conjugacy classes.

use btchar_padic::Gf;
use serde::{Deserialize, Serialize};

use crate::error::{FglError, Result};

/// `|GL(n, q)| = ∏ (q^n − q^i)`.
pub fn gl_order(n: usize, q: u64) -> u64 {
    let qn = q.pow(n as u32);
    (0..n as u32).map(|i| qn - q.pow(i)).product()
}

/// Default bound on `|GL(n, q)|`; it admits `(1, q ≤ 256)`, `(2, q ≤ 5)` and `(3, 2)`.
pub const DEFAULT_BUDGET: u64 = 2000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    /// Representative, row-major, entries as field indices.
    pub rep: Vec<u8>,
    pub size: u64,
    pub elem_order: u32,
}

/// The elements of GL(n, q) and its conjugacy classes.
///
/// Classes are ordered by element order, then by the least code in the class, so
/// the identity comes first.
#[derive(Clone, Debug)]
pub struct GlGroup {
    pub n: usize,
    pub q: u32,
    pub gf: Gf,
    neg: Vec<u8>,
    /// Row-major entries of element `i` at `mats[i*n*n..(i+1)*n*n]`.
    mats: Vec<u8>,
    /// Element index of a code, `u32::MAX` for singular matrices.
    index: Vec<u32>,
    inverse: Vec<u32>,
    pub class_of: Vec<u16>,
    pub classes: Vec<ClassInfo>,
    /// `power_class[k][l]`: class of `g_k^l` for `0 ≤ l < exponent`.
    pub power_class: Vec<Vec<u16>>,
    pub exponent: u32,
}

impl GlGroup {
    pub fn new(n: usize, q: u32, budget: u64) -> Result<GlGroup> {
        let gf = Gf::new(q).ok_or(FglError::NotPrimePower(q))?;
        let order = gl_order(n, q as u64);
        if order > budget {
            return Err(FglError::BudgetExceeded { order, budget });
        }
        let neg: Vec<u8> = (0..q as u8).map(|a| gf.neg(a)).collect();
        let nn = n * n;
        let total = (q as usize).pow(nn as u32);
        let mut index = vec![u32::MAX; total];
        let mut mats = Vec::with_capacity(order as usize * nn);
        let mut m = vec![0u8; nn];
        let mut count = 0u32;
        for code in 0..total {
            let mut c = code;
            for x in m.iter_mut() {
                *x = (c % q as usize) as u8;
                c /= q as usize;
            }
            if det(&gf, &neg, n, &m) != 0 {
                index[code] = count;
                mats.extend_from_slice(&m);
                count += 1;
            }
        }
        debug_assert_eq!(count as u64, order);
        let mut g = GlGroup {
            n,
            q,
            gf,
            neg,
            mats,
            index,
            inverse: Vec::new(),
            class_of: Vec::new(),
            classes: Vec::new(),
            power_class: Vec::new(),
            exponent: 1,
        };
        g.inverse = (0..g.order()).map(|i| g.find_inverse(i)).collect();
        g.build_classes();
        Ok(g)
    }

    pub fn order(&self) -> u32 {
        (self.mats.len() / (self.n * self.n)) as u32
    }

    pub fn mat(&self, i: u32) -> &[u8] {
        let nn = self.n * self.n;
        &self.mats[i as usize * nn..(i as usize + 1) * nn]
    }

    pub fn code(&self, m: &[u8]) -> usize {
        m.iter().rev().fold(0usize, |acc, &x| acc * self.q as usize + x as usize)
    }

    /// Element index of a matrix (`None` if singular or malformed).
    pub fn index_of(&self, m: &[u8]) -> Option<u32> {
        if m.len() != self.n * self.n || m.iter().any(|&x| x as u32 >= self.q) {
            return None;
        }
        let i = self.index[self.code(m)];
        (i != u32::MAX).then_some(i)
    }

    pub fn mul_mats(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let n = self.n;
        let mut c = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0u8;
                for k in 0..n {
                    s = self.gf.add(s, self.gf.mul(a[i * n + k], b[k * n + j]));
                }
                c[i * n + j] = s;
            }
        }
        c
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.index[self.code(&self.mul_mats(self.mat(a), self.mat(b)))]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn identity(&self) -> u32 {
        let n = self.n;
        let mut m = vec![0u8; n * n];
        for i in 0..n {
            m[i * n + i] = 1;
        }
        self.index_of(&m).unwrap()
    }

    /// `x g x⁻¹`.
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn elem_order(&self, g: u32) -> u32 {
        let id = self.identity();
        let mut x = g;
        let mut k = 1;
        while x != id {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn class_of_mat(&self, m: &[u8]) -> Option<usize> {
        self.index_of(m).map(|i| self.class_of[i as usize] as usize)
    }

    pub fn det_of(&self, m: &[u8]) -> u8 {
        det(&self.gf, &self.neg, self.n, m)
    }

    fn find_inverse(&self, a: u32) -> u32 {
        // solve by the adjugate-free route: a^{ord-1}
        let id = self.identity();
        let mut x = a;
        let mut prev = id;
        while x != id {
            prev = x;
            x = self.mul(x, a);
        }
        prev
    }

    fn build_classes(&mut self) {
        let ord = self.order();
        let mut class_of = vec![u16::MAX; ord as usize];
        let mut raw: Vec<(u32, usize, Vec<u32>)> = Vec::new();
        for g in 0..ord {
            if class_of[g as usize] != u16::MAX {
                continue;
            }
            let mut members: Vec<u32> = (0..ord).map(|x| self.conj(x, g)).collect();
            members.sort();
            members.dedup();
            let tag = raw.len() as u16;
            for &m in &members {
                class_of[m as usize] = tag;
            }
            let least = members.iter().map(|&m| self.code(self.mat(m))).min().unwrap();
            raw.push((self.elem_order(g), least, members));
        }
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by_key(|&i| (raw[i].0, raw[i].1));
        let mut relabel = vec![0u16; raw.len()];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new as u16;
        }
        self.class_of = class_of.iter().map(|&c| relabel[c as usize]).collect();
        self.classes = order
            .iter()
            .map(|&old| {
                let (eo, least, members) = &raw[old];
                let rep = members.iter().copied().find(|&m| self.code(self.mat(m)) == *least).unwrap();
                ClassInfo { rep: self.mat(rep).to_vec(), size: members.len() as u64, elem_order: *eo }
            })
            .collect();
        self.exponent = self.classes.iter().fold(1, |acc, c| lcm(acc, c.elem_order));
        let e = self.exponent;
        self.power_class = self
            .classes
            .iter()
            .map(|c| {
                let g = self.index_of(&c.rep).unwrap();
                let mut x = self.identity();
                (0..e)
                    .map(|_| {
                        let k = self.class_of[x as usize];
                        x = self.mul(x, g);
                        k
                    })
                    .collect()
            })
            .collect();
    }

    /// Class of the inverse of the class representative.
    pub fn inverse_class(&self, k: usize) -> usize {
        let e = self.exponent as usize;
        self.power_class[k][e - 1] as usize
    }
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a / crate::cyclo::gcd(a, b) * b
}

fn det(gf: &Gf, neg: &[u8], n: usize, m: &[u8]) -> u8 {
    let mut a = m.to_vec();
    let mut d = 1u8;
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| a[r * n + c] != 0) else {
            return 0;
        };
        if r != c {
            for j in 0..n {
                a.swap(r * n + j, c * n + j);
            }
            d = neg[d as usize];
        }
        let piv = a[c * n + c];
        d = gf.mul(d, piv);
        let pinv = gf.inv(piv).unwrap();
        for r2 in c + 1..n {
            let f = gf.mul(a[r2 * n + c], pinv);
            if f != 0 {
                for j in c..n {
                    let t = gf.mul(f, a[c * n + j]);
                    a[r2 * n + j] = gf.add(a[r2 * n + j], neg[t as usize]);
                }
            }
        }
    }
    d
}
