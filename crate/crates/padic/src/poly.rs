//! Polynomials over Q_p, Newton polygons and certified ramification data.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{PadicError, Result};
use crate::fp::FpPoly;
use crate::scalar::Padic;

/// Polynomial over Q_p, coefficients low degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct QpPoly {
    pub p: u32,
    pub coeffs: Vec<Padic>,
}

impl QpPoly {
    pub fn new(p: u32, coeffs: Vec<Padic>) -> Self {
        QpPoly { p, coeffs }
    }

    pub fn from_ints(p: u32, ints: &[i64], prec: u32) -> Self {
        QpPoly { p, coeffs: ints.iter().map(|&c| Padic::from_i64(p, c, prec)).collect() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map(|c| c.eq_at_prec(&Padic::one(self.p))).unwrap_or(false)
    }

    pub fn eval(&self, x: &Padic) -> Padic {
        self.coeffs.iter().rev().fold(Padic::zero(self.p), |acc, c| acc * *x + *c)
    }

    /// `f(x + c)` by Horner-style Taylor shift.
    pub fn translate(&self, c: &Padic) -> QpPoly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = a[j + 1] * *c;
                a[j] = a[j] + t;
            }
        }
        QpPoly { p: self.p, coeffs: a }
    }

    /// `p^{-n s} f(p^s y)` for a monic f of degree n, again monic.
    pub fn scale_variable(&self, s: i64) -> QpPoly {
        let n = self.degree() as i64;
        let coeffs = self.coeffs.iter().enumerate().map(|(i, c)| c.shift(s * i as i64 - n * s)).collect();
        QpPoly { p: self.p, coeffs }
    }

    /// Reduction modulo p of an integral polynomial.
    pub fn reduce(&self) -> Result<FpPoly> {
        let c = self.coeffs.iter().map(|c| c.residue()).collect::<Result<Vec<_>>>()?;
        Ok(FpPoly::new(self.p, c))
    }

    /// Integral normalization of a monic polynomial: the least `t >= 0` such that
    /// `p^{n t} f(y / p^t)` is integral, together with that polynomial.
    pub fn integral_normalization(&self) -> Result<(QpPoly, i64)> {
        let n = self.degree() as i64;
        let mut t = 0i64;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() || i as i64 == n {
                continue;
            }
            let v = c.valuation().ok_or_else(|| PadicError::PrecisionInsufficient(format!("coefficient {i} not certified")))?;
            // need v + (n - i) t >= 0
            if v < 0 {
                let k = n - i as i64;
                t = t.max((-v + k - 1) / k);
            }
        }
        Ok((self.scale_variable(-t), t))
    }
}

/// Newton polygon segments, each `(slope, length)` where slope is the common
/// valuation of the roots on that segment; slopes strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub segments: Vec<(Ratio<i64>, usize)>,
}

impl NewtonPolygon {
    pub fn degree(&self) -> usize {
        self.segments.iter().map(|s| s.1).sum()
    }
}

/// Lower convex hull of the points `(i, v(a_i))`.
pub fn newton_polygon(poly: &QpPoly) -> Result<NewtonPolygon> {
    if !poly.is_monic() {
        return Err(PadicError::NotMonic);
    }
    let mut pts: Vec<(i64, i64)> = Vec::new();
    let mut unknown: Vec<(i64, i64)> = Vec::new();
    for (i, c) in poly.coeffs.iter().enumerate() {
        if c.is_exact_zero() {
            continue;
        }
        match c.valuation() {
            Some(v) => pts.push((i as i64, v)),
            None => unknown.push((i as i64, c.valuation_lower_bound())),
        }
    }
    if pts[0].0 != 0 {
        if unknown.first().map(|u| u.0) == Some(0) {
            return Err(PadicError::PrecisionInsufficient("constant term not certified".into()));
        }
        // zero constant term: x divides f
        return Err(PadicError::NotIrreducible);
    }
    let hull = lower_hull(&pts);
    // an uncertified coefficient is harmless when its lower bound lies on or above the hull
    for &(i, lb) in &unknown {
        let k = hull.windows(2).position(|w| w[0].0 <= i && i <= w[1].0).unwrap_or(0);
        let (x0, y0) = hull[k];
        let (x1, y1) = hull[k + 1];
        if lb * (x1 - x0) < y0 * (x1 - x0) + (y1 - y0) * (i - x0) {
            return Err(PadicError::PrecisionInsufficient(format!(
                "valuation of coefficient {i} not certified (known to O(p^{lb}))"
            )));
        }
    }
    let mut segs: Vec<(Ratio<i64>, usize)> = Vec::new();
    for w in hull.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        let slope = Ratio::new(y0 - y1, x1 - x0);
        segs.push((slope, (x1 - x0) as usize));
    }
    // hull slopes increase left to right, so root valuations decrease; list increasing
    segs.reverse();
    Ok(NewtonPolygon { segments: segs })
}

/// Monotone-chain lower hull with collinear interior points removed.
pub fn lower_hull(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in pts {
        while hull.len() >= 2 {
            let (ax, ay) = hull[hull.len() - 2];
            let (bx, by) = hull[hull.len() - 1];
            let cross = (bx - ax) * (pt.1 - ay) - (by - ay) * (pt.0 - ax);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

/// Ramification index and residue degree of the field generated by a root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfInvariants {
    pub e: u32,
    pub f: u32,
}

const MAX_TRANSLATIONS: usize = 64;

/// Certified `(e, f)` of `F[x]/(minpoly)`.
///
/// Accepts a single Newton slope whose denominator equals the degree (totally
/// ramified), or an integral slope whose rescaled residual polynomial is
/// irreducible (unramified), translating by residual roots when the residual
/// polynomial is a pure power of a linear factor.
pub fn ef_invariants(minpoly: &QpPoly) -> Result<EfInvariants> {
    let n = minpoly.degree();
    if n == 0 {
        return Err(PadicError::UnsupportedShape("constant polynomial".into()));
    }
    if n == 1 {
        return Ok(EfInvariants { e: 1, f: 1 });
    }
    let mut g = minpoly.clone();
    for _ in 0..MAX_TRANSLATIONS {
        let np = newton_polygon(&g)?;
        if np.segments.len() > 1 {
            return Err(PadicError::NotIrreducible);
        }
        let slope = np.segments[0].0;
        let den = *slope.denom() as usize;
        if den == n {
            return Ok(EfInvariants { e: n as u32, f: 1 });
        }
        if den != 1 {
            return Err(PadicError::UnsupportedShape(format!("single slope {slope} with 1 < denominator < degree {n}")));
        }
        let scaled = g.scale_variable(*slope.numer());
        let residual = scaled.reduce()?;
        let factors = residual.factor();
        if factors.len() > 1 {
            // coprime residual factors lift by Hensel's lemma
            return Err(PadicError::NotIrreducible);
        }
        let (h, m) = &factors[0];
        if *m == 1 {
            return Ok(EfInvariants { e: 1, f: n as u32 });
        }
        if h.degree() != Some(1) {
            return Err(PadicError::UnsupportedShape(format!(
                "residual is a power of an irreducible of degree {:?}",
                h.degree()
            )));
        }
        let root = (g.p - h.coeffs[0]) % g.p;
        let c = Padic::from_i64(g.p, root as i64, crate::scalar::precision_cap(g.p));
        g = scaled.translate(&c);
    }
    Err(PadicError::PrecisionInsufficient("translation depth exhausted".into()))
}

/// Three-valued irreducibility over Q_p: `Ok(true)`/`Ok(false)` are certified,
/// `Err(Indeterminate)` means the precision cannot decide.
pub fn certified_irreducible(poly: &QpPoly) -> Result<bool> {
    if !poly.is_monic() {
        return Err(PadicError::NotMonic);
    }
    let (normal, _t) = poly.integral_normalization().map_err(|_| PadicError::Indeterminate)?;
    match ef_invariants(&normal) {
        Ok(_) => Ok(true),
        Err(PadicError::NotIrreducible) => Ok(false),
        Err(PadicError::PrecisionInsufficient(_)) => Err(PadicError::Indeterminate),
        Err(PadicError::UnsupportedShape(_)) if normal.degree() == 2 => quadratic_by_discriminant(&normal),
        Err(PadicError::UnsupportedShape(_)) => Err(PadicError::Indeterminate),
        Err(e) => Err(e),
    }
}

/// A monic quadratic is irreducible iff its discriminant is a nonsquare.
fn quadratic_by_discriminant(f: &QpPoly) -> Result<bool> {
    let p = f.p;
    let b = f.coeffs[1];
    let c = f.coeffs[0];
    let d = b * b - Padic::from_i64(p, 4, crate::scalar::precision_cap(p)) * c;
    Ok(!is_square(&d)?)
}

/// Certified square test in Q_p.
pub fn is_square(x: &Padic) -> Result<bool> {
    if x.is_exact_zero() {
        return Ok(true);
    }
    let v = x.valuation().ok_or(PadicError::Indeterminate)?;
    if v % 2 != 0 {
        return Ok(false);
    }
    let u = x.unit_part();
    let p = x.prime();
    if p == 2 {
        if x.rel_prec() < 3 {
            return Err(PadicError::Indeterminate);
        }
        Ok(u % 8 == 1)
    } else {
        let r = (u % p as u64) as u32;
        Ok((1..p).any(|y| (y * y) % p == r))
    }
}
