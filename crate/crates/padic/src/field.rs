//! Field descriptors for Q_p and monogenic extensions, elements of the extension,
//! and reduction to the residue field.

use serde::{Deserialize, Serialize};

use crate::error::{PadicError, Result};
use crate::fp::FpPoly;
use crate::poly::{ef_invariants, newton_polygon, QpPoly};
use crate::scalar::{is_prime, precision_cap, Padic};

pub const DEFAULT_PRECISION: u32 = 12;

/// `{ p, precision, extension_poly }` as it appears in scenario files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldBlock {
    pub p: u32,
    #[serde(default)]
    pub precision: Option<u32>,
    #[serde(default)]
    pub extension_poly: Option<Vec<i64>>,
}

/// How the ring of integers of the extension is generated by the root `x` of `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtensionShape {
    /// `g` reduces to an irreducible polynomial: `o_E = Z_p[x]`, `k_E = F_p[t]/(g mod p)`.
    Unramified { f: u32, residual: Vec<u32> },
    /// `g` is Eisenstein: `x` is a uniformizer, `k_E = F_p`.
    Eisenstein { e: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalFieldDesc {
    pub p: u32,
    pub precision: u32,
    pub extension: Option<(QpPoly, ExtensionShape)>,
}

impl LocalFieldDesc {
    pub fn base(p: u32) -> Result<Self> {
        Self::new(p, DEFAULT_PRECISION, None)
    }

    pub fn new(p: u32, precision: u32, extension_poly: Option<&[i64]>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(PadicError::InvalidField(format!("{p} is not prime")));
        }
        if precision == 0 {
            return Err(PadicError::InvalidField("precision must be at least 1".into()));
        }
        if precision > precision_cap(p) {
            return Err(PadicError::InvalidField(format!(
                "precision {precision} exceeds the cap {} for p = {p}",
                precision_cap(p)
            )));
        }
        let extension = match extension_poly {
            None => None,
            Some(c) => {
                if c.last() != Some(&1) {
                    return Err(PadicError::NotMonic);
                }
                let g = QpPoly::from_ints(p, c, precision);
                let shape = classify_extension(&g)?;
                Some((g, shape))
            }
        };
        Ok(LocalFieldDesc { p, precision, extension })
    }

    pub fn from_block(b: &FieldBlock) -> Result<Self> {
        Self::new(b.p, b.precision.unwrap_or(DEFAULT_PRECISION), b.extension_poly.as_deref())
    }

    pub fn degree(&self) -> usize {
        self.extension.as_ref().map(|(g, _)| g.degree()).unwrap_or(1)
    }

    /// `(e, f)` of the extension over the base.
    pub fn ef(&self) -> (u32, u32) {
        match &self.extension {
            None => (1, 1),
            Some((_, ExtensionShape::Unramified { f, .. })) => (1, *f),
            Some((_, ExtensionShape::Eisenstein { e })) => (*e, 1),
        }
    }

    pub fn residue_field_size(&self) -> u64 {
        (self.p as u64).pow(self.ef().1)
    }

    pub fn element(&self, coeffs: &[i64]) -> PAdicScalar {
        let n = self.degree();
        let mut c: Vec<Padic> = coeffs.iter().map(|&x| Padic::from_i64(self.p, x, self.precision)).collect();
        c.resize(n, Padic::zero(self.p));
        PAdicScalar { coeffs: c }
    }

    /// Valuation normalized on the extension (`v_E(uniformizer) = 1`); `certified` is false
    /// when the minimum could be attained by a digit lost to truncation.
    pub fn valuation(&self, x: &PAdicScalar) -> (Option<i64>, bool) {
        let weight = |i: usize, v: i64| match &self.extension {
            Some((_, ExtensionShape::Eisenstein { e })) => *e as i64 * v + i as i64,
            _ => v,
        };
        let mut best: Option<i64> = None;
        let mut uncertain_floor: Option<i64> = None;
        for (i, c) in x.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            match c.valuation() {
                Some(v) => {
                    let w = weight(i, v);
                    best = Some(best.map_or(w, |b: i64| b.min(w)));
                }
                None => {
                    let w = weight(i, c.valuation_lower_bound());
                    uncertain_floor = Some(uncertain_floor.map_or(w, |b: i64| b.min(w)));
                }
            }
        }
        match (best, uncertain_floor) {
            (Some(b), Some(u)) => (Some(b), b < u),
            (Some(b), None) => (Some(b), true),
            (None, _) => (None, false),
        }
    }

    pub fn mul(&self, a: &PAdicScalar, b: &PAdicScalar) -> PAdicScalar {
        let Some((g, _)) = &self.extension else {
            return PAdicScalar { coeffs: vec![a.coeffs[0] * b.coeffs[0]] };
        };
        let n = g.degree();
        let mut prod = vec![Padic::zero(self.p); 2 * n - 1];
        for i in 0..n {
            for j in 0..n {
                prod[i + j] = prod[i + j] + a.coeffs[i] * b.coeffs[j];
            }
        }
        // reduce by the monic g
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            for i in 0..n {
                prod[k - n + i] = prod[k - n + i] - c * g.coeffs[i];
            }
        }
        prod.truncate(n);
        PAdicScalar { coeffs: prod }
    }

    pub fn add(&self, a: &PAdicScalar, b: &PAdicScalar) -> PAdicScalar {
        PAdicScalar { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| *x + *y).collect() }
    }

    /// Reduction `o_E -> k_E`; the result is a polynomial in the residue generator.
    pub fn residue_image(&self, x: &PAdicScalar) -> Result<FpPoly> {
        let (v, certified) = self.valuation(x);
        match v {
            Some(v) if v < 0 && certified => return Err(PadicError::NegativeValuation),
            Some(v) if v < 0 => return Err(PadicError::PrecisionInsufficient("valuation not certified".into())),
            _ => {}
        }
        match &self.extension {
            None => Ok(FpPoly::new(self.p, vec![x.coeffs[0].residue()?])),
            Some((_, ExtensionShape::Unramified { .. })) => {
                let c = x.coeffs.iter().map(|c| c.residue()).collect::<Result<Vec<_>>>()?;
                Ok(FpPoly::new(self.p, c))
            }
            Some((_, ExtensionShape::Eisenstein { .. })) => Ok(FpPoly::new(self.p, vec![x.coeffs[0].residue()?])),
        }
    }

    /// Residue field multiplication, for checking the homomorphism property.
    pub fn residue_mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        match &self.extension {
            Some((_, ExtensionShape::Unramified { residual, .. })) => a.mul(b).rem(&FpPoly::new(self.p, residual.clone())),
            _ => a.mul(b),
        }
    }
}

fn classify_extension(g: &QpPoly) -> Result<ExtensionShape> {
    let n = g.degree() as u32;
    let residual = g.reduce()?;
    if residual.is_irreducible() && residual.degree() == Some(n as usize) {
        return Ok(ExtensionShape::Unramified { f: n, residual: residual.coeffs });
    }
    let np = newton_polygon(g)?;
    let ef = ef_invariants(g)?;
    if ef.e == n && np.segments.len() == 1 && *np.segments[0].0.numer() == 1 && g.coeffs[0].valuation() == Some(1) {
        return Ok(ExtensionShape::Eisenstein { e: n });
    }
    Err(PadicError::UnsupportedShape("extension polynomial must reduce to an irreducible or be Eisenstein".into()))
}

/// Element of `E = F[x]/(g)` as a coefficient vector over the base.
#[derive(Clone, Debug, PartialEq)]
pub struct PAdicScalar {
    pub coeffs: Vec<Padic>,
}
