//! Field invariants of `F[γ]`, minimality, and the constructive normalized order.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use btchar_building::{
    fmt_q, isobarycenter, order_of_simplex, pow_q, reduce_q, val_q, HereditaryOrder, Lattice, LatticeChain, Point, QpMatrix,
    Simplex, Q,
};
use btchar_padic::{certified_irreducible, ef_invariants, is_square, precision_cap, FpPoly, Padic, PadicError, QpPoly};

use crate::error::{EllipticError, Result};

/// Everything known about `γ` after analysis; optional fields are absent when `γ` is
/// not elliptic regular (or not minimal, for the order and point).
#[derive(Clone, Debug)]
pub struct EllipticReport {
    pub p: u32,
    pub precision: u32,
    pub gamma: QpMatrix,
    /// Characteristic polynomial, low degree first, monic.
    pub charpoly: Vec<Q>,
    pub elliptic_regular: bool,
    pub e_gamma: Option<u32>,
    pub f_gamma: Option<u32>,
    /// `v_K(γ)` for `K = F[γ]`.
    pub v_gamma: Option<i64>,
    pub minimal_over_f: Option<bool>,
    pub order_a_gamma: Option<HereditaryOrder>,
    pub sigma_gamma: Option<Simplex>,
    pub x_gamma: Option<Point>,
}

impl EllipticReport {
    pub fn n(&self) -> usize {
        self.gamma.rows
    }

    pub fn export(&self) -> EllipticExport {
        EllipticExport {
            p: self.p,
            n: self.n(),
            gamma: self.gamma.to_strings(),
            charpoly: self.charpoly.iter().map(fmt_q).collect(),
            elliptic_regular: self.elliptic_regular,
            e_gamma: self.e_gamma,
            f_gamma: self.f_gamma,
            v_gamma: self.v_gamma,
            minimal_over_f: self.minimal_over_f,
            order_a_gamma: self.order_a_gamma.as_ref().map(|a| OrderExport {
                composition: a.composition.clone(),
                vertices: self.sigma_gamma.as_ref().map(|s| s.vertices.iter().map(|k| k.label()).collect()).unwrap_or_default(),
            }),
            x_gamma: self
                .x_gamma
                .as_ref()
                .map(|x| x.iter().map(|(k, w)| (k.label(), format!("{}/{}", w.numer(), w.denom()))).collect()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderExport {
    pub composition: Vec<usize>,
    pub vertices: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EllipticExport {
    pub p: u32,
    pub n: usize,
    pub gamma: Vec<Vec<String>>,
    pub charpoly: Vec<String>,
    pub elliptic_regular: bool,
    pub e_gamma: Option<u32>,
    pub f_gamma: Option<u32>,
    pub v_gamma: Option<i64>,
    pub minimal_over_f: Option<bool>,
    pub order_a_gamma: Option<OrderExport>,
    pub x_gamma: Option<BTreeMap<String, String>>,
}

fn to_qp_poly(p: u32, coeffs: &[Q], prec: u32) -> Result<QpPoly> {
    let cs = coeffs
        .iter()
        .map(|c| Padic::from_rational(p, *c.numer(), *c.denom(), prec))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(QpPoly::new(p, cs))
}

/// Repeats `f` with precision raised in steps of 6 while it reports `Indeterminate`.
fn with_raising<T>(p: u32, start: u32, mut f: impl FnMut(u32) -> Result<T>) -> Result<T> {
    let cap = precision_cap(p);
    let mut k = start.clamp(1, cap);
    loop {
        match f(k) {
            Err(EllipticError::Indeterminate)
            | Err(EllipticError::Padic(PadicError::Indeterminate))
            | Err(EllipticError::Padic(PadicError::PrecisionInsufficient(_)))
                if k < cap =>
            {
                k = (k + 6).min(cap)
            }
            Err(EllipticError::Padic(PadicError::Indeterminate))
            | Err(EllipticError::Padic(PadicError::PrecisionInsufficient(_))) => return Err(EllipticError::Indeterminate),
            r => return r,
        }
    }
}

/// `(e, f)` of a monic quadratic known to be irreducible, from its discriminant.
fn quadratic_ef(p: u32, cp: &[Q]) -> (u32, u32) {
    let disc = cp[1] * cp[1] - Q::from_integer(4) * cp[0];
    let v = val_q(p, &disc).expect("irreducible quadratic has nonzero discriminant");
    if v % 2 != 0 {
        return (2, 1);
    }
    let u = disc * pow_q(p, -v);
    let unramified = if p == 2 { reduce_q(&u, 8) == 5 } else { true };
    if unramified {
        (1, 2)
    } else {
        (2, 1)
    }
}

fn field_invariants(p: u32, cp: &[Q], prec: u32) -> Result<Option<(u32, u32)>> {
    let n = cp.len() - 1;
    if n == 1 {
        return Ok(Some((1, 1)));
    }
    if n == 2 {
        // irreducible iff the discriminant is a nonsquare
        let disc = cp[1] * cp[1] - Q::from_integer(4) * cp[0];
        if *disc.numer() == 0 {
            return Ok(None);
        }
        let square = with_raising(p, prec, |k| Ok(is_square(&Padic::from_rational(p, *disc.numer(), *disc.denom(), k)?)?))?;
        return Ok(if square { None } else { Some(quadratic_ef(p, cp)) });
    }
    with_raising(p, prec, |k| {
        let poly = to_qp_poly(p, cp, k)?;
        if !certified_irreducible(&poly)? {
            return Ok(None);
        }
        let (normal, _) = poly.integral_normalization()?;
        match ef_invariants(&normal) {
            Ok(ef) => Ok(Some((ef.e, ef.f))),
            Err(PadicError::UnsupportedShape(_)) => Err(EllipticError::Indeterminate),
            Err(e) => Err(e.into()),
        }
    })
}

/// Residue polynomial of a matrix whose characteristic polynomial is p-integral.
fn reduced_charpoly(p: u32, y: &QpMatrix) -> Result<FpPoly> {
    let cp = y.charpoly();
    if cp.iter().any(|c| val_q(p, c).is_some_and(|v| v < 0)) {
        return Err(EllipticError::OracleDisagreement("normalized power is not integral".into()));
    }
    Ok(FpPoly::new(p, cp.iter().map(|c| reduce_q(c, p as u64) as u32).collect()))
}

/// `γ^e·p^{-v_K(γ)}`, a unit of `o_K`.
fn normalized_power(p: u32, gamma: &QpMatrix, e: u32, v: i64) -> Result<QpMatrix> {
    Ok(gamma.pow(e as i64)?.scale(pow_q(p, -v)))
}

/// Minimality: `gcd(v_K(γ), e) = 1` and the
/// residue of `γ^e·p^{-v_K(γ)}` generates `k_K` over `k_F`, i.e. its characteristic
/// polynomial reduces to `m^e` with `m` irreducible of degree `f`.
fn minimal(p: u32, gamma: &QpMatrix, e: u32, f: u32, v: i64) -> Result<bool> {
    if v.gcd(&(e as i64)) != 1 {
        return Ok(false);
    }
    let y = normalized_power(p, gamma, e, v)?;
    let factors = reduced_charpoly(p, &y)?.factor();
    Ok(factors.len() == 1 && factors[0].0.degree() == Some(f as usize) && factors[0].1 == e as usize)
}

/// The constructive `𝔄_γ`: with `π_K = γ^a·p^b` (`a·v + b·e = 1`) and `y` the
/// normalized power, `L_0 = Σ o·y^i π_K^j e_1` is an `o_K`-lattice and `𝔄_γ` is the
/// order of the chain `{π_K^j L_0}`.
pub fn constructive_order(
    p: u32,
    precision: u32,
    gamma: &QpMatrix,
    e: u32,
    f: u32,
    v: i64,
) -> Result<(HereditaryOrder, Simplex)> {
    let n = gamma.rows;
    let ext = v.extended_gcd(&(e as i64));
    let (a, b) = if ext.gcd == 1 { (ext.x, ext.y) } else { (-ext.x, -ext.y) };
    let pi = gamma.pow(a)?.scale(pow_q(p, b));
    let y = normalized_power(p, gamma, e, v)?;
    let mut e1 = vec![Q::from_integer(0); n];
    e1[0] = Q::from_integer(1);
    let mut gens = Vec::new();
    let mut yi = e1;
    for _ in 0..f {
        let mut w = yi.clone();
        for _ in 0..e {
            gens.push(w.clone());
            w = pi.mul_vec(&w);
        }
        yi = y.mul_vec(&yi);
    }
    let l0 = Lattice::from_generators(p, precision, &QpMatrix::from_columns(&gens))?;
    let mut lats = vec![l0];
    for _ in 1..e {
        let next = lats.last().unwrap().apply(&pi)?;
        lats.push(next);
    }
    let simplex = Simplex::from_chain(LatticeChain::new(lats)?);
    Ok((order_of_simplex(&simplex)?, simplex))
}

/// Analyzes `γ ∈ GL_N(F)`, `F = Q_p`.
pub fn analyze_elliptic(gamma: &QpMatrix, p: u32, precision: u32) -> Result<EllipticReport> {
    if !gamma.is_square() || *gamma.det().numer() == 0 {
        return Err(EllipticError::NotInvertible);
    }
    let charpoly = gamma.charpoly();
    let mut report = EllipticReport {
        p,
        precision,
        gamma: gamma.clone(),
        charpoly: charpoly.clone(),
        elliptic_regular: false,
        e_gamma: None,
        f_gamma: None,
        v_gamma: None,
        minimal_over_f: None,
        order_a_gamma: None,
        sigma_gamma: None,
        x_gamma: None,
    };
    let Some((e, f)) = field_invariants(p, &charpoly, precision)? else {
        return Ok(report);
    };
    let dv = val_q(p, &gamma.det()).expect("invertible");
    if dv % f as i64 != 0 {
        return Err(EllipticError::OracleDisagreement(format!("v(det γ) = {dv} is not divisible by f = {f}")));
    }
    let v = dv / f as i64;
    report.elliptic_regular = true;
    report.e_gamma = Some(e);
    report.f_gamma = Some(f);
    report.v_gamma = Some(v);
    let is_min = minimal(p, gamma, e, f, v)?;
    report.minimal_over_f = Some(is_min);
    if is_min {
        let (order, simplex) = constructive_order(p, precision, gamma, e, f, v)?;
        report.x_gamma = Some(isobarycenter(&simplex));
        report.order_a_gamma = Some(order);
        report.sigma_gamma = Some(simplex);
    }
    Ok(report)
}

/// The certified minimality verdict of an analyzed element.
pub fn is_minimal(report: &EllipticReport) -> Result<bool> {
    if !report.elliptic_regular {
        return Err(EllipticError::NotElliptic);
    }
    report.minimal_over_f.ok_or(EllipticError::Indeterminate)
}

/// `e(L/F)` and `f(L/F)` of the field attached to a discrete-series datum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GateData {
    pub e_l: u32,
    pub f_l: u32,
}

/// `f(L/F) | f(F[γ]/F)` and `e(L/F) | e(F[γ]/F)`.
pub fn divisibility_gate(gate: GateData, report: &EllipticReport) -> Result<bool> {
    match (report.elliptic_regular, report.e_gamma, report.f_gamma) {
        (true, Some(e), Some(f)) => Ok(e % gate.e_l == 0 && f % gate.f_l == 0),
        _ => Err(EllipticError::NotElliptic),
    }
}
