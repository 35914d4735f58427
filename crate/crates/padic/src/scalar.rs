//! Capped relative-precision elements of Q_p.
//!
//! A nonzero element is stored as `p^val * unit` where `unit` is known modulo
//! `p^prec`. An element whose digits have all been lost to cancellation is an
//! inexact zero `O(p^val)`; the exact zero is kept apart so that integer input
//! never degrades.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{PadicError, Result};

const EXACT_ZERO_VAL: i64 = i64::MAX;

/// Largest relative precision for which `p^prec` fits comfortably below 2^62.
pub fn precision_cap(p: u32) -> u32 {
    let mut k = 0u32;
    let mut m: u128 = 1;
    while m * p as u128 <= 1u128 << 62 {
        m *= p as u128;
        k += 1;
    }
    k
}

pub fn pow_u64(p: u32, e: u32) -> u64 {
    (p as u64).pow(e)
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Padic {
    p: u32,
    val: i64,
    unit: u64,
    prec: u32,
}

impl Padic {
    pub fn zero(p: u32) -> Self {
        Padic { p, val: EXACT_ZERO_VAL, unit: 0, prec: 0 }
    }

    /// The inexact zero `O(p^abs)`.
    pub fn big_o(p: u32, abs: i64) -> Self {
        Padic { p, val: abs, unit: 0, prec: 0 }
    }

    pub fn one(p: u32) -> Self {
        Self::from_i128(p, 1, precision_cap(p))
    }

    pub fn from_i64(p: u32, n: i64, prec: u32) -> Self {
        Self::from_i128(p, n as i128, prec)
    }

    pub fn from_i128(p: u32, n: i128, prec: u32) -> Self {
        if n == 0 {
            return Self::zero(p);
        }
        let prec = prec.min(precision_cap(p)).max(1);
        let mut n = n;
        let mut v = 0i64;
        while n % p as i128 == 0 {
            n /= p as i128;
            v += 1;
        }
        let m = pow_u64(p, prec) as i128;
        Padic { p, val: v, unit: n.rem_euclid(m) as u64, prec }
    }

    /// `num / den` embedded in Q_p.
    pub fn from_rational(p: u32, num: i128, den: i128, prec: u32) -> Result<Self> {
        if den == 0 {
            return Err(PadicError::DivisionByZero);
        }
        let a = Self::from_i128(p, num, prec);
        let b = Self::from_i128(p, den, prec);
        a.div(&b)
    }

    /// `p^v * unit` with the unit known to `prec` digits.
    pub fn from_parts(p: u32, val: i64, unit: u64, prec: u32) -> Self {
        if prec == 0 {
            return Self::big_o(p, val);
        }
        let prec = prec.min(precision_cap(p));
        let m = pow_u64(p, prec);
        let u = unit % m;
        if u == 0 {
            return Self::big_o(p, val + prec as i64);
        }
        Self::normalized(p, val, u, prec)
    }

    fn normalized(p: u32, val: i64, mut u: u64, mut prec: u32) -> Self {
        let mut v = val;
        while prec > 0 && u.is_multiple_of(p as u64) {
            u /= p as u64;
            prec -= 1;
            v += 1;
        }
        if prec == 0 {
            return Self::big_o(p, v);
        }
        Padic { p, val: v, unit: u, prec }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec == 0 && self.val == EXACT_ZERO_VAL
    }

    /// True when the element is known to be nonzero.
    pub fn is_certified_nonzero(&self) -> bool {
        self.prec > 0
    }

    /// No known digit: either the exact zero or `O(p^n)`.
    pub fn is_zero_at_precision(&self) -> bool {
        self.prec == 0
    }

    /// Certified valuation, `None` for zero at the available precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.prec > 0 {
            Some(self.val)
        } else {
            None
        }
    }

    /// Lower bound for the valuation (the absolute precision for an inexact zero).
    pub fn valuation_lower_bound(&self) -> i64 {
        self.val
    }

    /// Absolute precision: the element is known modulo `p^abs_prec`.
    pub fn abs_prec(&self) -> i64 {
        if self.is_exact_zero() {
            EXACT_ZERO_VAL
        } else {
            self.val + self.prec as i64
        }
    }

    pub fn rel_prec(&self) -> u32 {
        self.prec
    }

    pub fn unit_part(&self) -> u64 {
        self.unit
    }

    /// Integer representative in `[0, p^a)` of `self mod p^a`; requires `self` integral
    /// and known to absolute precision at least `a`.
    pub fn residue_mod_pa(&self, a: u32) -> Result<u64> {
        if a == 0 {
            return Ok(0);
        }
        if self.is_exact_zero() {
            return Ok(0);
        }
        if self.val < 0 && self.prec > 0 {
            return Err(PadicError::NegativeValuation);
        }
        if self.abs_prec() < a as i64 {
            return Err(PadicError::PrecisionInsufficient(format!("need {} digits, have {}", a, self.abs_prec())));
        }
        if self.prec == 0 || self.val >= a as i64 {
            return Ok(0);
        }
        let keep = a - self.val as u32;
        let m = pow_u64(self.p, keep);
        Ok((self.unit % m) * pow_u64(self.p, self.val as u32))
    }

    /// Residue in F_p of an integral element.
    pub fn residue(&self) -> Result<u32> {
        Ok(self.residue_mod_pa(1)? as u32)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.prec == 0 {
            return Err(PadicError::DivisionByZero);
        }
        let m = pow_u64(self.p, self.prec);
        let u = mod_inverse(self.unit, m).ok_or(PadicError::DivisionByZero)?;
        Ok(Padic { p: self.p, val: -self.val, unit: u, prec: self.prec })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(*self * other.inv()?)
    }

    /// Multiply by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_exact_zero() {
            return *self;
        }
        Padic { val: self.val + k, ..*self }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Padic::one(self.p);
        for _ in 0..e {
            acc = acc * *self;
        }
        acc
    }

    /// Drop digits beyond relative precision `prec`.
    pub fn truncate_rel(&self, prec: u32) -> Self {
        if self.prec <= prec {
            return *self;
        }
        Self::from_parts(self.p, self.val, self.unit, prec)
    }

    /// Rational rendering `n/p^s` (for display and tests).
    pub fn to_rational_repr(&self) -> Option<(i128, u32)> {
        if self.prec == 0 {
            return if self.is_exact_zero() { Some((0, 0)) } else { None };
        }
        let m = pow_u64(self.p, self.prec) as i128;
        let mut u = self.unit as i128;
        if u > m / 2 {
            u -= m;
        }
        if self.val >= 0 {
            Some((u * (self.p as i128).pow(self.val as u32), 0))
        } else {
            Some((u, (-self.val) as u32))
        }
    }

    /// Equality up to the common absolute precision.
    pub fn eq_at_prec(&self, other: &Self) -> bool {
        !(*self - *other).is_certified_nonzero()
    }

    fn check_prime(&self, other: &Self) {
        debug_assert_eq!(self.p, other.p, "mixing p-adic numbers with distinct primes");
    }
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            write!(f, "0")
        } else if self.prec == 0 {
            write!(f, "O({}^{})", self.p, self.val)
        } else {
            write!(f, "{}*{}^{}+O({}^{})", self.unit, self.p, self.val, self.p, self.abs_prec())
        }
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational_repr() {
            Some((n, 0)) => write!(f, "{n}"),
            Some((n, s)) => write!(f, "{n}/{}^{s}", self.p),
            None => write!(f, "O({}^{})", self.p, self.val),
        }
    }
}

impl Add for Padic {
    type Output = Padic;
    fn add(self, rhs: Padic) -> Padic {
        self.check_prime(&rhs);
        let p = self.p;
        if self.is_exact_zero() {
            return rhs;
        }
        if rhs.is_exact_zero() {
            return self;
        }
        let abs = self.abs_prec().min(rhs.abs_prec());
        let (x, y) = if self.val <= rhs.val { (self, rhs) } else { (rhs, self) };
        if x.prec == 0 {
            return Padic::big_o(p, abs);
        }
        if y.val >= abs {
            return x.truncate_abs(abs);
        }
        let m_digits = (abs - x.val) as u32;
        let m = pow_u64(p, m_digits) as u128;
        let d = (y.val - x.val) as u32;
        let y_part = if y.prec == 0 { 0 } else { (y.unit as u128 * pow_u64(p, d) as u128) % m };
        let z = ((x.unit as u128 % m) + y_part) % m;
        if z == 0 {
            return Padic::big_o(p, abs);
        }
        Padic::normalized(p, x.val, z as u64, m_digits)
    }
}

impl Padic {
    fn truncate_abs(&self, abs: i64) -> Padic {
        if self.abs_prec() <= abs {
            return *self;
        }
        if self.prec == 0 {
            return *self;
        }
        if abs <= self.val {
            return Padic::big_o(self.p, abs);
        }
        Self::from_parts(self.p, self.val, self.unit, (abs - self.val) as u32)
    }
}

impl Neg for Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        if self.prec == 0 {
            return self;
        }
        let m = pow_u64(self.p, self.prec);
        Padic { unit: (m - self.unit) % m, ..self }
    }
}

impl Sub for Padic {
    type Output = Padic;
    fn sub(self, rhs: Padic) -> Padic {
        self + (-rhs)
    }
}

impl Mul for Padic {
    type Output = Padic;
    fn mul(self, rhs: Padic) -> Padic {
        self.check_prime(&rhs);
        let p = self.p;
        if self.is_exact_zero() || rhs.is_exact_zero() {
            return Padic::zero(p);
        }
        match (self.prec, rhs.prec) {
            (0, 0) => Padic::big_o(p, self.val + rhs.val),
            (0, _) => Padic::big_o(p, self.val + rhs.val),
            (_, 0) => Padic::big_o(p, self.val + rhs.val),
            (a, b) => {
                let prec = a.min(b);
                let m = pow_u64(p, prec) as u128;
                let u = (self.unit as u128 % m) * (rhs.unit as u128 % m) % m;
                Padic { p, val: self.val + rhs.val, unit: u as u64, prec }
            }
        }
    }
}

impl<'a> Mul<&'a Padic> for &'a Padic {
    type Output = Padic;
    fn mul(self, rhs: &Padic) -> Padic {
        *self * *rhs
    }
}

/// Orders by certified valuation; inexact zeros compare by their lower bound.
pub fn cmp_valuation(a: &Padic, b: &Padic) -> Ordering {
    a.valuation_lower_bound().cmp(&b.valuation_lower_bound())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_roundtrip() {
        let x = Padic::from_i64(5, -250, 10);
        assert_eq!(x.valuation(), Some(3));
        assert_eq!(x.to_rational_repr(), Some((-250, 0)));
    }

    #[test]
    fn cancellation_loses_digits() {
        let a = Padic::from_i64(2, 1, 8);
        let b = Padic::from_i64(2, 1 + 64, 8);
        let d = b - a;
        assert_eq!(d.valuation(), Some(6));
        assert_eq!(d.rel_prec(), 2);
        let z = a - a;
        assert!(z.is_zero_at_precision());
        assert!(!z.is_exact_zero());
        assert_eq!(z.abs_prec(), 8);
    }

    #[test]
    fn rational_and_inverse() {
        let x = Padic::from_rational(3, 2, 9, 12).unwrap();
        assert_eq!(x.valuation(), Some(-2));
        let y = x * Padic::from_i64(3, 9, 12);
        assert!(y.eq_at_prec(&Padic::from_i64(3, 2, 12)));
        assert!(Padic::zero(3).inv().is_err());
    }

    #[test]
    fn residues() {
        let x = Padic::from_i64(7, 1 + 343, 6);
        assert_eq!(x.residue().unwrap(), 1);
        assert_eq!(Padic::from_i64(7, 7, 6).residue().unwrap(), 0);
        assert_eq!(Padic::from_i64(7, 100, 6).residue_mod_pa(2).unwrap(), 2);
        let neg = Padic::from_rational(7, 1, 7, 6).unwrap();
        assert_eq!(neg.residue(), Err(PadicError::NegativeValuation));
    }

    #[test]
    fn cap_fits() {
        for p in [2u32, 3, 5, 7] {
            let k = precision_cap(p);
            assert!((p as u128).pow(k) <= 1 << 62);
            assert!((p as u128).pow(k + 1) > 1 << 62);
        }
    }
}
