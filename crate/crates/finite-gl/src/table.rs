//! Character tables by the Dixon–Schneider method.
//!
//! The class algebra is diagonalized over a prime field `F_P` with `P ≡ 1 mod e`
//! (`e` the group exponent, `P > |G|`); each character is then recovered exactly from
//! its values on powers of the class representatives, as `χ(g) = Σ m_j ζ_e^j` with
//! `m_j` the multiplicity of the eigenvalue `ζ_e^j`.

use serde::{Deserialize, Serialize};

use crate::cyclo::Cyclo;
use crate::error::{FglError, Result};
use crate::group::{ClassInfo, GlGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGLCharacter {
    pub label: String,
    pub degree: u64,
    /// One value per conjugacy class, in `Z[ζ_m]` with `m` the group exponent.
    pub values: Vec<Cyclo>,
    pub irreducible: bool,
    pub cuspidal: bool,
    pub generic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub n: usize,
    pub q: u32,
    pub order: u64,
    /// Cyclotomic modulus of all values (the group exponent).
    pub modulus: u32,
    pub classes: Vec<ClassInfo>,
    pub characters: Vec<FiniteGLCharacter>,
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Smallest prime `P ≡ 1 mod e` with `P > bound`.
pub fn dixon_prime(e: u32, bound: u64) -> u64 {
    let e = e as u64;
    let mut p = (bound / e + 1) * e + 1;
    while !is_prime(p) {
        p += e;
    }
    p
}

fn primitive_root(p: u64) -> u64 {
    let phi = p - 1;
    let mut factors = Vec::new();
    let mut m = phi;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p).find(|&g| factors.iter().all(|&f| pow_mod(g, phi / f, p) != 1)).unwrap()
}

/// Null space of a matrix over `F_P` (rows of `a`), as basis vectors.
fn nullspace(a: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(r) = (row..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(row, r);
        let inv = inv_mod(m[row][c], p);
        for x in m[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r2 in 0..m.len() {
            if r2 != row && m[r2][c] != 0 {
                let f = m[r2][c];
                for j in 0..cols {
                    m[r2][j] = (m[r2][j] + p - f * m[row][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][f]) % p;
            }
            v
        })
        .collect()
}

/// Coordinates of `v` in the column basis `b` (which must contain it).
fn solve_in_basis(b: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    let dim = b.len();
    let len = v.len();
    // augmented system: rows are coordinates, columns basis vectors + rhs
    let rows: Vec<Vec<u64>> = (0..len).map(|i| b.iter().map(|bv| bv[i]).chain([(p - v[i]) % p]).collect()).collect();
    let ns = nullspace(&rows, dim + 1, p);
    let sol = ns.iter().find(|s| s[dim] != 0).expect("vector lies in the span");
    let inv = inv_mod(sol[dim], p);
    (0..dim).map(|i| sol[i] * inv % p).collect()
}

/// Class algebra structure constants `a[i][j][k] = #{x ∈ C_i : x⁻¹ g_k ∈ C_j}`.
fn structure_constants(g: &GlGroup) -> Vec<Vec<Vec<u64>>> {
    let r = g.classes.len();
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    for (k, c) in g.classes.iter().enumerate() {
        let gk = g.index_of(&c.rep).unwrap();
        for x in 0..g.order() {
            let i = g.class_of[x as usize] as usize;
            let j = g.class_of[g.mul(g.inv(x), gk) as usize] as usize;
            a[i][j][k] += 1;
        }
    }
    a
}

/// Common eigenvectors of the class matrices, each normalized to 1 at the identity.
fn class_eigenvectors(g: &GlGroup, p: u64) -> Result<Vec<Vec<u64>>> {
    let r = g.classes.len();
    let a = structure_constants(g);
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r).map(|i| (0..r).map(|j| (i == j) as u64).collect()).collect()];
    for ai in &a {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let d = basis.len();
            // restriction R with A_i B = B R
            let images: Vec<Vec<u64>> =
                basis.iter().map(|v| (0..r).map(|j| (0..r).map(|k| ai[j][k] * v[k] % p).sum::<u64>() % p).collect()).collect();
            let rmat: Vec<Vec<u64>> = images.iter().map(|w| solve_in_basis(&basis, w, p)).collect();
            // rmat[c] = coordinates of A_i b_c; as a matrix R[row][c]
            let mut found = 0;
            for lambda in 0..p {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|row| (0..d).map(|c| (rmat[c][row] + if row == c { p - lambda } else { 0 }) % p).collect())
                    .collect();
                let ns = nullspace(&shifted, d, p);
                if ns.is_empty() {
                    continue;
                }
                found += ns.len();
                next.push(
                    ns.iter()
                        .map(|coef| (0..r).map(|k| (0..d).map(|c| coef[c] * basis[c][k] % p).sum::<u64>() % p).collect())
                        .collect(),
                );
                if found == d {
                    break;
                }
            }
            if found != d {
                return Err(FglError::DixonFailed("class matrix not diagonalizable over the chosen prime".into()));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(FglError::DixonFailed("class algebra did not split into lines".into()));
    }
    Ok(spaces
        .into_iter()
        .map(|s| {
            let v = &s[0];
            let inv = inv_mod(v[0], p);
            v.iter().map(|x| x * inv % p).collect()
        })
        .collect())
}

/// The complete character table of `g`.
pub fn compute_table(g: &GlGroup) -> Result<CharacterTable> {
    let order = g.order() as u64;
    let e = g.exponent;
    let p = dixon_prime(e, order);
    let z = pow_mod(primitive_root(p), (p - 1) / e as u64, p);
    let zinv = inv_mod(z, p);
    let sizes: Vec<u64> = g.classes.iter().map(|c| c.size).collect();
    let mut chars = Vec::new();
    for omega in class_eigenvectors(g, p)? {
        // χ(1)² = |G| / Σ_k ω_k ω_{k*} / |C_k|
        let s =
            (0..sizes.len()).map(|k| omega[k] * omega[g.inverse_class(k)] % p * inv_mod(sizes[k] % p, p) % p).sum::<u64>() % p;
        let d2 = order % p * inv_mod(s, p) % p;
        let d = (1..)
            .take_while(|d| d * d <= order)
            .find(|d| d * d % p == d2)
            .ok_or_else(|| FglError::DixonFailed("degree is not recovered".into()))?;
        let modp: Vec<u64> = (0..sizes.len()).map(|k| omega[k] * d % p * inv_mod(sizes[k] % p, p) % p).collect();
        let einv = inv_mod(e as u64, p);
        let mut values = Vec::with_capacity(sizes.len());
        for k in 0..sizes.len() {
            let mut mult = vec![0i64; e as usize];
            for (j, slot) in mult.iter_mut().enumerate() {
                let mut acc = 0u64;
                for l in 0..e as u64 {
                    let zl = pow_mod(zinv, (j as u64 * l) % e as u64, p);
                    acc = (acc + modp[g.power_class[k][l as usize] as usize] * zl) % p;
                }
                let m = acc * einv % p;
                if m > d {
                    return Err(FglError::DixonFailed(format!("eigenvalue multiplicity {m} exceeds degree {d}")));
                }
                *slot = m as i64;
            }
            values.push(Cyclo::from_exponents(e, &mult));
        }
        chars.push(FiniteGLCharacter {
            label: String::new(),
            degree: d,
            values,
            irreducible: true,
            cuspidal: false,
            generic: false,
        });
    }
    chars.sort_by(|a, b| (a.degree, &a.values).cmp(&(b.degree, &b.values)));
    for (i, c) in chars.iter_mut().enumerate() {
        c.label = format!("chi{i}");
    }
    let mut t = CharacterTable { n: g.n, q: g.q, order, modulus: e, classes: g.classes.clone(), characters: chars };
    crate::induce::annotate(g, &mut t)?;
    Ok(t)
}

impl CharacterTable {
    /// `Σ_g a(g)·conj(b(g))`.
    pub fn pairing_sum(&self, a: &[Cyclo], b: &[Cyclo]) -> Cyclo {
        let mut acc = Cyclo::zero(self.modulus);
        for (k, c) in self.classes.iter().enumerate() {
            acc = acc.add(&a[k].mul(&b[k].conj()).scale(c.size as i64));
        }
        acc
    }

    /// `⟨a, b⟩` when it is a rational integer.
    pub fn inner(&self, a: &[Cyclo], b: &[Cyclo]) -> Option<i64> {
        let s = self.pairing_sum(a, b).as_integer()?;
        (s % self.order as i64 == 0).then_some(s / self.order as i64)
    }

    /// Multiplicities of the irreducibles in a class function.
    pub fn decompose(&self, f: &[Cyclo]) -> Result<Vec<i64>> {
        self.characters
            .iter()
            .map(|c| self.inner(f, &c.values).ok_or_else(|| FglError::DixonFailed("non-integral multiplicity".into())))
            .collect()
    }

    pub fn by_label(&self, label: &str) -> Option<&FiniteGLCharacter> {
        self.characters.iter().find(|c| c.label == label)
    }

    pub fn cuspidals(&self) -> Vec<&FiniteGLCharacter> {
        self.characters.iter().filter(|c| c.cuspidal).collect()
    }
}
