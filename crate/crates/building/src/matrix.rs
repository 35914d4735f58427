//! Exact rational matrices, viewed inside M(N, Q_p).

use std::fmt;

use btchar_padic::mod_inverse;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{BuildingError, Result};

pub type Q = Ratio<i128>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n as i128)
}

/// p-adic valuation of a rational, `None` for zero.
pub fn val_q(p: u32, x: &Q) -> Option<i64> {
    if *x.numer() == 0 {
        return None;
    }
    Some(val_int(p, *x.numer()) - val_int(p, *x.denom()))
}

pub fn val_int(p: u32, mut n: i128) -> i64 {
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Residue of a p-integral rational modulo `m = p^k`.
pub fn reduce_q(x: &Q, m: u64) -> u64 {
    let mm = m as i128;
    let num = x.numer().rem_euclid(mm) as u64;
    let den = x.denom().rem_euclid(mm) as u64;
    let inv = mod_inverse(den, m).expect("denominator is a p-adic unit");
    ((num as u128 * inv as u128) % m as u128) as u64
}

pub fn pow_q(p: u32, e: i64) -> Q {
    if e >= 0 {
        Q::from_integer((p as i128).pow(e as u32))
    } else {
        Q::new(1, (p as i128).pow((-e) as u32))
    }
}

/// Dense matrix with exact rational entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QpMatrix {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Q>,
}

impl QpMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QpMatrix { rows, cols, a: vec![Q::from_integer(0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.a[i * n + i] = Q::from_integer(1);
        }
        m
    }

    pub fn scalar(n: usize, x: Q) -> Self {
        Self::identity(n).scale(x)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Q) -> Self {
        let mut a = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                a.push(f(i, j));
            }
        }
        QpMatrix { rows, cols, a }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        Self::from_fn(r, c, |i, j| q(rows[i][j]))
    }

    pub fn from_columns(cols: &[Vec<Q>]) -> Self {
        let r = cols.first().map(|c| c.len()).unwrap_or(0);
        Self::from_fn(r, cols.len(), |i, j| cols[j][i])
    }

    /// Companion matrix of a monic polynomial given low degree first.
    pub fn companion(coeffs: &[Q]) -> Self {
        let d = coeffs.len() - 1;
        let mut m = Self::zeros(d, d);
        for i in 1..d {
            m.set(i, i - 1, Q::from_integer(1));
        }
        for i in 0..d {
            m.set(i, d - 1, -coeffs[i] / coeffs[d]);
        }
        m
    }

    pub fn block_diag(blocks: &[QpMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.a[i * self.cols + j] = x;
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, o: &QpMatrix) -> QpMatrix {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if *x.numer() == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let y = o.get(k, j);
                    if *y.numer() != 0 {
                        m.a[i * o.cols + j] += x * y;
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn add(&self, o: &QpMatrix) -> QpMatrix {
        QpMatrix { rows: self.rows, cols: self.cols, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, o: &QpMatrix) -> QpMatrix {
        QpMatrix { rows: self.rows, cols: self.cols, a: self.a.iter().zip(&o.a).map(|(x, y)| x - y).collect() }
    }

    pub fn scale(&self, x: Q) -> QpMatrix {
        QpMatrix { rows: self.rows, cols: self.cols, a: self.a.iter().map(|y| y * x).collect() }
    }

    pub fn transpose(&self) -> QpMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn hconcat(&self, o: &QpMatrix) -> QpMatrix {
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| if j < self.cols { self.get(i, j) } else { o.get(i, j - self.cols) })
    }

    pub fn det(&self) -> Q {
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Q::from_integer(1);
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| *m.get(r, c).numer() != 0) else {
                return Q::from_integer(0);
            };
            if piv != c {
                for j in 0..n {
                    m.a.swap(piv * n + j, c * n + j);
                }
                det = -det;
            }
            let d = m.get(c, c);
            det *= d;
            for r in c + 1..n {
                let f = m.get(r, c) / d;
                if *f.numer() != 0 {
                    for j in c..n {
                        let v = m.get(r, j) - f * m.get(c, j);
                        m.set(r, j, v);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<QpMatrix> {
        let n = self.rows;
        if !self.is_square() {
            return Err(BuildingError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let piv = (c..n).find(|&r| *m.get(r, c).numer() != 0).ok_or(BuildingError::Singular)?;
            if piv != c {
                for j in 0..n {
                    m.a.swap(piv * n + j, c * n + j);
                    inv.a.swap(piv * n + j, c * n + j);
                }
            }
            let d = m.get(c, c);
            for j in 0..n {
                m.set(c, j, m.get(c, j) / d);
                inv.set(c, j, inv.get(c, j) / d);
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = m.get(r, c);
                if *f.numer() != 0 {
                    for j in 0..n {
                        m.set(r, j, m.get(r, j) - f * m.get(c, j));
                        inv.set(r, j, inv.get(r, j) - f * inv.get(c, j));
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, e: i64) -> Result<QpMatrix> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::identity(self.rows);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        Ok(acc)
    }

    /// `g * self * g^{-1}`.
    pub fn conjugate_by(&self, g: &QpMatrix) -> Result<QpMatrix> {
        Ok(g.mul(self).mul(&g.inverse()?))
    }

    /// Smallest p-adic valuation of an entry (`None` for the zero matrix).
    pub fn min_val(&self, p: u32) -> Option<i64> {
        self.a.iter().filter_map(|x| val_q(p, x)).min()
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| *x.numer() == 0)
    }

    pub fn det_val(&self, p: u32) -> Result<i64> {
        val_q(p, &self.det()).ok_or(BuildingError::Singular)
    }

    pub fn commutes_with(&self, o: &QpMatrix) -> bool {
        self.mul(o) == o.mul(self)
    }

    /// Characteristic polynomial `det(x - self)`, low degree first, by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> Vec<Q> {
        let n = self.rows;
        let mut c = vec![Q::from_integer(0); n + 1];
        c[n] = Q::from_integer(1);
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            m = self.mul(&m).add(&Self::identity(n).scale(c[n + 1 - k]));
            let am = self.mul(&m);
            let tr: Q = (0..n).map(|i| am.get(i, i)).sum();
            c[n - k] = -tr / Q::from_integer(k as i128);
        }
        c
    }

    /// Vectorization, row-major, as a column in Q^{rows * cols}.
    pub fn vec(&self) -> Vec<Q> {
        self.a.clone()
    }

    pub fn unvec(n: usize, v: &[Q]) -> QpMatrix {
        QpMatrix { rows: n, cols: v.len() / n, a: v.to_vec() }
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| fmt_q(&self.get(i, j))).collect()).collect()
    }
}

pub fn fmt_q(x: &Q) -> String {
    if *x.denom() == 1 {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `"a"`, `"a/b"` or `"padic(d0 d1 ...)"` / `"padic(d0,d1,...)"` (digits, lowest first).
pub fn parse_entry(s: &str, p: u32) -> std::result::Result<Q, String> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix("padic(").and_then(|r| r.strip_suffix(')')) {
        let mut acc: i128 = 0;
        let mut pk: i128 = 1;
        for d in inner.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let d: i128 = d.parse().map_err(|_| format!("bad digit {d:?} in {s:?}"))?;
            if d < 0 || d >= p as i128 {
                return Err(format!("digit {d} out of range for p = {p}"));
            }
            acc = acc.checked_add(d.checked_mul(pk).ok_or("padic digits overflow")?).ok_or("padic digits overflow")?;
            pk = pk.checked_mul(p as i128).ok_or("padic digits overflow")?;
        }
        return Ok(Q::from_integer(acc));
    }
    if let Some((a, b)) = s.split_once('/') {
        let a: i128 = a.trim().parse().map_err(|_| format!("bad rational {s:?}"))?;
        let b: i128 = b.trim().parse().map_err(|_| format!("bad rational {s:?}"))?;
        if b == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Q::new(a, b));
    }
    s.parse::<i128>().map(Q::from_integer).map_err(|_| format!("bad entry {s:?}"))
}

impl fmt::Debug for QpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_strings())
    }
}

impl Serialize for QpMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QpMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let n = rows.len();
        let m = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != m) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        let mut a = Vec::with_capacity(n * m);
        for r in &rows {
            for e in r {
                let v = e
                    .split_once('/')
                    .map(|(x, y)| (x.trim().parse::<i128>(), y.trim().parse::<i128>()))
                    .map(|(x, y)| match (x, y) {
                        (Ok(x), Ok(y)) if y != 0 => Ok(Q::new(x, y)),
                        _ => Err(serde::de::Error::custom(format!("bad entry {e:?}"))),
                    })
                    .unwrap_or_else(|| {
                        e.trim()
                            .parse::<i128>()
                            .map(Q::from_integer)
                            .map_err(|_| serde::de::Error::custom(format!("bad entry {e:?}")))
                    })?;
                a.push(v);
            }
        }
        Ok(QpMatrix { rows: n, cols: m, a })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let m = QpMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.det(), q(1));
        assert_eq!(m.mul(&m.inverse().unwrap()), QpMatrix::identity(2));
        assert_eq!(m.pow(-2).unwrap().mul(&m.pow(2).unwrap()), QpMatrix::identity(2));
    }

    #[test]
    fn charpoly_of_companion() {
        let c = QpMatrix::companion(&[q(-3), q(0), q(1)]);
        assert_eq!(c.charpoly(), vec![q(-3), q(0), q(1)]);
        let c3 = QpMatrix::companion(&[q(-5), q(-25), q(0), q(1)]);
        assert_eq!(c3.charpoly(), vec![q(-5), q(-25), q(0), q(1)]);
    }

    #[test]
    fn valuations_and_residues() {
        assert_eq!(val_q(3, &Q::new(9, 2)), Some(2));
        assert_eq!(val_q(3, &Q::new(2, 27)), Some(-3));
        assert_eq!(reduce_q(&Q::new(1, 2), 9), 5);
    }

    #[test]
    fn entries_parse() {
        assert_eq!(parse_entry("padic(1 0 2)", 3), Ok(q(19)));
        assert_eq!(parse_entry("-3/4", 3), Ok(Q::new(-3, 4)));
        assert!(parse_entry("padic(3)", 3).is_err());
    }
}
