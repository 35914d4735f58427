//! Polynomials over F_p and small finite fields F_q.

use serde::{Deserialize, Serialize};

/// Dense polynomial over F_p, coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoly {
    pub p: u32,
    pub coeffs: Vec<u32>,
}

impl FpPoly {
    pub fn new(p: u32, coeffs: Vec<u32>) -> Self {
        let mut c: Vec<u32> = coeffs.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, coeffs: c }
    }

    pub fn monomial(p: u32, deg: usize) -> Self {
        let mut c = vec![0; deg + 1];
        c[deg] = 1;
        FpPoly { p, coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let p = self.p as u64;
        self.coeffs.iter().rev().fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p) as u32
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeffs.get(i).unwrap_or(&0) + o.coeffs.get(i).unwrap_or(&0)).collect();
        FpPoly::new(self.p, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeffs.get(i).unwrap_or(&0) + self.p - o.coeffs.get(i).unwrap_or(&0)).collect();
        FpPoly::new(self.p, c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly::new(self.p, vec![]);
        }
        let p = self.p as u64;
        let mut c = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a as u64 * b as u64) % p;
            }
        }
        FpPoly::new(self.p, c.into_iter().map(|x| x as u32).collect())
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let p = self.p as u64;
        let dd = d.degree().expect("division by zero polynomial");
        let inv = inv_mod(d.lead(), self.p) as u64;
        let mut r: Vec<u64> = self.coeffs.iter().map(|&x| x as u64).collect();
        if r.len() <= dd {
            return (FpPoly::new(self.p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i] * inv % p;
            q[i - dd] = c;
            if c != 0 {
                for (j, &dc) in d.coeffs.iter().enumerate() {
                    let idx = i - dd + j;
                    r[idx] = (r[idx] + p * p - c * dc as u64 % p) % p;
                }
            }
        }
        r.truncate(dd);
        (
            FpPoly::new(self.p, q.into_iter().map(|x| x as u32).collect()),
            FpPoly::new(self.p, r.into_iter().map(|x| x as u32).collect()),
        )
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.p) as u64;
        FpPoly::new(self.p, self.coeffs.iter().map(|&c| (c as u64 * inv % self.p as u64) as u32).collect())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// All monic polynomials of the given degree, in lexicographic order of coefficients.
    pub fn all_monic(p: u32, deg: usize) -> impl Iterator<Item = FpPoly> {
        let count = (p as u64).pow(deg as u32);
        (0..count).map(move |mut idx| {
            let mut c = Vec::with_capacity(deg + 1);
            for _ in 0..deg {
                c.push((idx % p as u64) as u32);
                idx /= p as u64;
            }
            c.push(1);
            FpPoly::new(p, c)
        })
    }

    /// Trial-division irreducibility test; fine for the small degrees used here.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        for d in 1..=n / 2 {
            for g in FpPoly::all_monic(self.p, d) {
                if self.rem(&g).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Factorization of a monic polynomial into (monic irreducible, multiplicity), sorted.
    pub fn factor(&self) -> Vec<(FpPoly, usize)> {
        let mut f = self.monic();
        let mut out = Vec::new();
        let mut d = 1;
        while f.degree().unwrap_or(0) > 0 {
            let fd = f.degree().unwrap();
            if d * 2 > fd {
                out.push((f.clone(), 1));
                break;
            }
            for g in FpPoly::all_monic(self.p, d) {
                if !g.is_irreducible() {
                    continue;
                }
                let mut m = 0;
                loop {
                    let (q, r) = f.divrem(&g);
                    if !r.is_zero() {
                        break;
                    }
                    f = q;
                    m += 1;
                }
                if m > 0 {
                    out.push((g, m));
                }
            }
            d += 1;
        }
        // merge a trailing factor equal to one found earlier
        out.sort();
        let mut merged: Vec<(FpPoly, usize)> = Vec::new();
        for (g, m) in out {
            match merged.last_mut() {
                Some((h, k)) if *h == g => *k += m,
                _ => merged.push((g, m)),
            }
        }
        merged
    }

    pub fn roots(&self) -> Vec<u32> {
        (0..self.p).filter(|&x| self.eval(x) == 0).collect()
    }
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    crate::scalar::mod_inverse(a as u64, p as u64).expect("not invertible mod p") as u32
}

/// The lexicographically first monic irreducible polynomial of degree `f` over F_p.
pub fn conway_like_modulus(p: u32, f: usize) -> FpPoly {
    FpPoly::all_monic(p, f).find(|g| g.is_irreducible()).expect("irreducible polynomials exist in every degree")
}

/// A finite field F_q, q = p^f small, with element indices `0..q` and full tables.
///
/// Element `i` is the polynomial whose base-p digits are the coefficients of `i`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Gf {
    pub p: u32,
    pub f: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    inv: Vec<u8>,
}

impl Gf {
    pub fn new(q: u32) -> Option<Gf> {
        let (p, f) = prime_power(q)?;
        if q > 256 {
            return None;
        }
        let modulus = if f == 1 { FpPoly::new(p, vec![0, 1]) } else { conway_like_modulus(p, f as usize) };
        Some(Self::with_modulus(p, f, modulus))
    }

    pub fn with_modulus(p: u32, f: u32, modulus: FpPoly) -> Gf {
        let q = p.pow(f);
        let to_poly = |i: u32| {
            let mut c = Vec::new();
            let mut x = i;
            for _ in 0..f {
                c.push(x % p);
                x /= p;
            }
            FpPoly::new(p, c)
        };
        let to_idx = |g: &FpPoly| {
            let mut idx = 0u32;
            for (k, &c) in g.coeffs.iter().enumerate() {
                idx += c * p.pow(k as u32);
            }
            idx
        };
        let polys: Vec<FpPoly> = (0..q).map(to_poly).collect();
        let mut add = vec![0u8; (q * q) as usize];
        let mut mul = vec![0u8; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                let s = polys[a as usize].add(&polys[b as usize]);
                add[(a * q + b) as usize] = to_idx(&s) as u8;
                let m = if f == 1 {
                    FpPoly::new(p, vec![(a * b) % p])
                } else {
                    polys[a as usize].mul(&polys[b as usize]).rem(&modulus)
                };
                mul[(a * q + b) as usize] = to_idx(&m) as u8;
            }
        }
        let mut inv = vec![0u8; q as usize];
        for a in 1..q {
            for b in 1..q {
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u8;
                }
            }
        }
        Gf { p, f, q, modulus: modulus.coeffs, add, mul, inv }
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }
    pub fn neg(&self, a: u8) -> u8 {
        (0..self.q as u8).find(|&b| self.add(a, b) == 0).unwrap()
    }
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }
    pub fn inv(&self, a: u8) -> Option<u8> {
        if a == 0 {
            None
        } else {
            Some(self.inv[a as usize])
        }
    }
    pub fn pow(&self, a: u8, e: u64) -> u8 {
        let mut r = 1u8;
        for _ in 0..e {
            r = self.mul(r, a);
        }
        r
    }
    /// Absolute trace F_q -> F_p, returned as an integer in `0..p`.
    pub fn trace(&self, a: u8) -> u32 {
        let mut t = 0u8;
        let mut x = a;
        for _ in 0..self.f {
            t = self.add(t, x);
            x = self.pow(x, self.p as u64);
        }
        t as u32
    }
    pub fn from_int(&self, n: i64) -> u8 {
        n.rem_euclid(self.p as i64) as u8
    }
    /// A generator of the multiplicative group, smallest index first.
    pub fn primitive_element(&self) -> u8 {
        (1..self.q as u8)
            .find(|&g| {
                let mut x = g;
                let mut ord = 1;
                while x != 1 {
                    x = self.mul(x, g);
                    ord += 1;
                }
                ord == self.q - 1
            })
            .unwrap()
    }
}

pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut f = 0;
    let mut x = q;
    while x.is_multiple_of(p) {
        x /= p;
        f += 1;
    }
    if x == 1 {
        Some((p, f))
    } else {
        None
    }
}
