//! Exact arithmetic in the cyclotomic ring `Z[ζ_m]`.

use serde::{Deserialize, Serialize};

/// `Σ c_i ζ_m^i` with `0 ≤ i < φ(m)`, reduced modulo the cyclotomic polynomial `Φ_m`;
/// this representation is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cyclo {
    pub m: u32,
    pub c: Vec<i64>,
}

/// `Φ_m`, low degree first.
pub fn cyclotomic_poly(m: u32) -> Vec<i64> {
    // x^m - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = exact_div(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut quo = vec![0i64; a.len() - db];
    for i in (0..quo.len()).rev() {
        let t = r[i + db];
        quo[i] = t;
        for j in 0..=db {
            r[i + j] -= t * b[j];
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    quo
}

pub fn euler_phi(m: u32) -> u32 {
    (1..=m).filter(|&k| gcd(k, m) == 1).count() as u32
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn reduce(m: u32, mut v: Vec<i64>) -> Vec<i64> {
    let phi = cyclotomic_poly(m);
    let d = phi.len() - 1;
    for i in (d..v.len()).rev() {
        let t = v[i];
        if t != 0 {
            for j in 0..=d {
                v[i - d + j] -= t * phi[j];
            }
        }
    }
    v.truncate(d);
    v.resize(d, 0);
    v
}

impl Cyclo {
    pub fn zero(m: u32) -> Cyclo {
        Cyclo { m, c: vec![0; euler_phi(m) as usize] }
    }

    pub fn from_int(m: u32, n: i64) -> Cyclo {
        let mut z = Cyclo::zero(m);
        z.c[0] = n;
        z
    }

    /// `ζ_m^k`.
    pub fn zeta(m: u32, k: i64) -> Cyclo {
        let mut v = vec![0i64; m as usize];
        v[k.rem_euclid(m as i64) as usize] = 1;
        Cyclo { m, c: reduce(m, v) }
    }

    /// `Σ_k a_k ζ_m^k` for a vector indexed by exponents `0..m`.
    pub fn from_exponents(m: u32, a: &[i64]) -> Cyclo {
        let mut v = vec![0i64; m as usize];
        for (k, &x) in a.iter().enumerate() {
            v[k % m as usize] += x;
        }
        Cyclo { m, c: reduce(m, v) }
    }

    pub fn add(&self, o: &Cyclo) -> Cyclo {
        debug_assert_eq!(self.m, o.m);
        Cyclo { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Cyclo) -> Cyclo {
        debug_assert_eq!(self.m, o.m);
        Cyclo { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, k: i64) -> Cyclo {
        Cyclo { m: self.m, c: self.c.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, o: &Cyclo) -> Cyclo {
        debug_assert_eq!(self.m, o.m);
        let d = self.c.len();
        let mut v = vec![0i64; 2 * d];
        for (i, &a) in self.c.iter().enumerate() {
            if a != 0 {
                for (j, &b) in o.c.iter().enumerate() {
                    v[i + j] += a * b;
                }
            }
        }
        Cyclo { m: self.m, c: reduce(self.m, v) }
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Cyclo {
        let m = self.m as usize;
        let mut v = vec![0i64; m];
        for (i, &a) in self.c.iter().enumerate() {
            v[(m - i) % m] += a;
        }
        Cyclo { m: self.m, c: reduce(self.m, v) }
    }

    /// The Galois conjugate `ζ ↦ ζ^k`, `gcd(k, m) = 1`.
    pub fn galois(&self, k: u32) -> Cyclo {
        let m = self.m as usize;
        let mut v = vec![0i64; m];
        for (i, &a) in self.c.iter().enumerate() {
            v[(i * k as usize) % m] += a;
        }
        Cyclo { m: self.m, c: reduce(self.m, v) }
    }

    /// The same number in `Z[ζ_M]`, `m | M`.
    pub fn embed(&self, big: u32) -> Cyclo {
        assert_eq!(big % self.m, 0, "cyclotomic embedding needs m | M");
        let s = (big / self.m) as usize;
        let mut v = vec![0i64; big as usize];
        for (i, &a) in self.c.iter().enumerate() {
            v[i * s] += a;
        }
        Cyclo { m: big, c: reduce(big, v) }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    /// The rational integer this equals, if any.
    pub fn as_integer(&self) -> Option<i64> {
        if self.c.iter().skip(1).all(|&x| x == 0) {
            Some(self.c[0])
        } else {
            None
        }
    }

    /// Complex value with `ζ_m = exp(2πi/m)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, &a) in self.c.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * i as f64 / self.m as f64;
            re += a as f64 * t.cos();
            im += a as f64 * t.sin();
        }
        (re, im)
    }

    /// Decimal rendering `a+bi` with 6 fractional digits; negative zero is printed as 0.
    pub fn render(&self) -> String {
        let (re, im) = self.to_complex();
        let fix = |x: f64| if x.abs() < 5e-7 { 0.0 } else { x };
        let (re, im) = (fix(re), fix(im));
        if im == 0.0 {
            format!("{re:.6}")
        } else if im < 0.0 {
            format!("{re:.6}-{:.6}i", -im)
        } else {
            format!("{re:.6}+{im:.6}i")
        }
    }
}
