#![allow(dead_code)]

use btchar_building::{
    enumerate_ball, pow_q, q, reduce_q, val_q, BallOptions, BuildingPatch, QpMatrix, Simplex, DEFAULT_PRECISION, Q,
};
use btchar_charformula::{CoefficientSystem, DiscreteSeriesSpec, ExtendedAction};
use btchar_finite_gl::{load_or_compute, Cyclo, DEFAULT_BUDGET};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const K: u32 = DEFAULT_PRECISION;

/// The matrix of multiplication by `x` on `Q_p[x]/(x² + c1·x + c0)`.
pub fn companion(c0: i64, c1: i64) -> QpMatrix {
    QpMatrix::from_i64(&[vec![0, -c0], vec![1, -c1]])
}

pub fn vertex_ball(p: u32, n: usize, radius: usize) -> BuildingPatch {
    enumerate_ball(&Simplex::standard(p, K, &[n]).unwrap(), radius, BallOptions::default()).unwrap()
}

pub fn chamber_ball(p: u32, radius: usize) -> BuildingPatch {
    enumerate_ball(&Simplex::standard(p, K, &[1, 1]).unwrap(), radius, BallOptions::default()).unwrap()
}

pub fn random_integral_unit(rng: &mut ChaCha8Rng, p: u32, n: usize) -> QpMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let g = QpMatrix::from_i64(&rows);
        if g.det_val(p) == Ok(0) {
            return g;
        }
    }
}

/// A minimal element of a quadratic extension, conjugated by a unit times at most one
/// step of displacement and scaled by a power of `p`.
pub fn minimal_quadratic(rng: &mut ChaCha8Rng, p: u32, ramified: bool) -> QpMatrix {
    let pz = p as i64;
    let theta = match (p, ramified) {
        (_, true) => companion(-pz, 0),
        (2, false) => companion(1, 1),
        _ => companion(1, 0),
    };
    let (a, b) = if ramified {
        let b = rng.gen_range(1..pz) * if rng.gen_bool(0.3) { pz } else { 1 };
        (pz * b * rng.gen_range(0..3), b)
    } else {
        (rng.gen_range(0..2 * pz), rng.gen_range(1..pz) + pz * rng.gen_range(0..2))
    };
    let x = QpMatrix::identity(2).scale(q(a)).add(&theta.scale(q(b)));
    let h =
        random_integral_unit(rng, p, 2).mul(&QpMatrix::from_i64(&[vec![1, 0], vec![0, if rng.gen_bool(0.5) { pz } else { 1 }]]));
    x.conjugate_by(&h).unwrap().scale(Q::new(1, (pz as i128).pow(rng.gen_range(0..2))))
}

/// `x³ − 2` (totally ramified) and `x³ + x + 1` (unramified) over `Q_2`.
pub fn rank_three_minimal() -> Vec<QpMatrix> {
    vec![
        QpMatrix::from_i64(&[vec![0, 0, 2], vec![1, 0, 0], vec![0, 1, 0]]),
        QpMatrix::from_i64(&[vec![0, 0, -1], vec![1, 0, -1], vec![0, 1, 0]]),
    ]
}

/// Every cuspidal label of `GL(m, p)`.
pub fn cuspidal_labels(m: usize, p: u32) -> Vec<String> {
    let d = load_or_compute(m, p, DEFAULT_BUDGET, None).unwrap();
    d.table.cuspidals().iter().map(|c| c.label.clone()).collect()
}

/// Supercuspidal and Steinberg-type data for `GL(n, Q_p)`, under both extensions.
pub fn all_specs(n: usize, p: u32) -> Vec<DiscreteSeriesSpec> {
    let mut out: Vec<DiscreteSeriesSpec> = cuspidal_labels(n, p).iter().map(|c| DiscreteSeriesSpec::new(n, 1, p, c)).collect();
    for c in cuspidal_labels(1, p) {
        for x in [ExtendedAction::Monomial, ExtendedAction::Signed] {
            out.push(DiscreteSeriesSpec::new(n, n, p, &c).with_extension(x));
        }
    }
    out
}

/// `(−1)^{N−1} χ(det γ)` with `χ(p) = ζ_t`, `χ|_{o^×} = ρ₀`: the character of the twisted
/// Steinberg representation on elliptic regular elements.
pub fn steinberg_value(cs: &CoefficientSystem, gamma: &QpMatrix) -> Cyclo {
    let p = cs.p();
    let det = gamma.det();
    let v = val_q(p, &det).unwrap();
    let unit = det * pow_q(p, -v);
    let (data, chi) = cs.rho0();
    let r = data.value(chi, &[reduce_q(&unit, p as u64) as u8]).unwrap().embed(cs.modulus);
    let t = &cs.spec.twist;
    let m = cs.modulus as i64;
    let tw = Cyclo::zeta(cs.modulus, t.exponent * (m / t.order as i64) * v);
    let sign = if cs.n().is_multiple_of(2) { -1 } else { 1 };
    r.mul(&tw).scale(sign)
}
