//! The Euler–Poincaré function and its orbital integrals over growing patches.
//!
//! Haar measure on `G/Z` gives `K·Z/Z` volume 1, `K = GL_N(o)`. The stabilizer of the
//! standard simplex of composition `c` contains `P_c·Z` with index `ρ_c` (the
//! rotations fixing `c`), so its volume is `ρ_c / [K : P_c]`.

use std::collections::BTreeMap;

use btchar_building::{BuildingPatch, LatticeChain, QpMatrix};
use btchar_elliptic::{fixed_point_set, vertex_images};
use btchar_finite_gl::{gl_order, Cyclo};
use num_rational::Ratio;
use serde::Serialize;

use crate::coeffsys::{canonical_composition, CoefficientSystem};
use crate::error::{CharError, Result};
use crate::value::{CharacterValue, QCyclo, Route};

/// One orbit of simplices `σ ∈ ℱ_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EPTerm {
    pub composition: Vec<usize>,
    /// `q = dim σ`.
    pub degree: usize,
    pub rotations: usize,
    /// `[K : P_c]`, the number of simplices of the orbit through the standard vertex
    /// that start there with the canonical composition.
    pub parahoric_index: u64,
    /// `μ(G_σ/Z)⁻¹ = [K : P_c] / ρ_c`.
    pub weight: Ratio<i64>,
    pub dim: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EPFunction {
    pub terms: Vec<EPTerm>,
}

/// `[GL_N(q) : P_c(q)]` for a composition.
pub fn parabolic_index(n: usize, q: u64, comp: &[usize]) -> u64 {
    let levi: u64 = comp.iter().map(|&m| gl_order(m, q)).product();
    // |P_c| = |Levi|·|unipotent radical|
    let unip: u32 = {
        let total = (n * n - comp.iter().map(|m| m * m).sum::<usize>()) / 2;
        total as u32
    };
    gl_order(n, q) / (levi * q.pow(unip))
}

/// Sign of the rotation `i ↦ i + r` of `e` points.
fn rotation_sign(e: usize, r: i64) -> i64 {
    let g = num_integer::gcd(e as i64, r.rem_euclid(e as i64).max(0));
    let g = if g == 0 { e as i64 } else { g };
    if (e as i64 - g) % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn ep_function(cs: &CoefficientSystem) -> Result<EPFunction> {
    let q = cs.p() as u64;
    let n = cs.n();
    let terms = cs
        .support_types()
        .into_iter()
        .map(|c| {
            let d = cs.datum(&c);
            let idx = parabolic_index(n, q, &c);
            EPTerm {
                degree: c.len() - 1,
                rotations: d.rotations,
                parahoric_index: idx,
                weight: Ratio::new(idx as i64, d.rotations as i64),
                dim: d.dim,
                composition: c,
            }
        })
        .collect();
    Ok(EPFunction { terms })
}

impl EPFunction {
    pub fn term(&self, canon: &[usize]) -> Option<&EPTerm> {
        self.terms.iter().find(|t| t.composition == canon)
    }

    /// `(−1)^q ε_σ(h) τ̄_σ(h)` on the standard simplex of a term, with
    /// `τ̄_σ(h) = conj Tr(h, 𝒱_σ)`; `None` off the stabilizer.
    pub fn evaluate_term(&self, cs: &CoefficientSystem, t: &EPTerm, h: &QpMatrix, precision: u32) -> Result<Option<Cyclo>> {
        let std = LatticeChain::standard(cs.p(), precision, &t.composition)?;
        let Some(r) = std.normalizer_shift(h)? else {
            return Ok(None);
        };
        let tr = cs.trace_standard(&t.composition, h, r)?.conj();
        let sign = rotation_sign(t.composition.len(), r) * if t.degree.is_multiple_of(2) { 1 } else { -1 };
        Ok(Some(tr.scale(sign)))
    }

    /// `f_EP(h) = Σ_σ (−1)^q μ(G_σ/Z)⁻¹ ε_σ(h) τ̄_σ(h)` over the standard
    /// representatives.
    pub fn evaluate(&self, cs: &CoefficientSystem, h: &QpMatrix, precision: u32) -> Result<QCyclo> {
        let mut acc = QCyclo::zero(cs.modulus);
        for t in &self.terms {
            if let Some(v) = self.evaluate_term(cs, t, h, precision)? {
                acc = acc.add(&QCyclo::from_cyclo(v).mul_ratio(t.weight));
            }
        }
        Ok(acc)
    }
}

/// Partial orbital integrals of `f_EP` at `γ⁻¹` over the cosets `gK·Z` with `g v₀`
/// within each radius.
#[derive(Clone, Debug, Serialize)]
pub struct Stabilization {
    pub radii: Vec<usize>,
    pub profile: Vec<QCyclo>,
    /// Largest distance of a vertex lying on a simplex stabilized by `γ`.
    pub reach: Option<usize>,
    pub stabilized_from: Option<usize>,
    pub value: Option<Cyclo>,
    pub certified: bool,
}

impl Stabilization {
    pub fn profile_string(&self) -> String {
        self.radii.iter().zip(&self.profile).map(|(r, v)| format!("R={r}: {}", v.render())).collect::<Vec<_>>().join("; ")
    }
}

/// Evaluates `∫_{G/Z} f_EP(g⁻¹γ⁻¹g) dg` restricted to `d(g v₀, base) ≤ R` for each
/// radius. For `g v₀ = v` the inner integral over `K` runs through the simplices through
/// `v` that start at `v` with a canonical composition, each weighted by
/// `μ(G_σ/Z)⁻¹ / [K : P_c]`.
///
/// The patch must have radius at least `max R + 1`. Stabilization requires at least
/// two radii at or beyond the reach with equal values.
pub fn orbital_integral_stabilization(
    cs: &CoefficientSystem,
    ep: &EPFunction,
    gamma: &QpMatrix,
    patch: &BuildingPatch,
    radii: &[usize],
) -> Result<Stabilization> {
    let Some(&rmax) = radii.last() else {
        return Err(CharError::InvalidSpec("no radii given".into()));
    };
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CharError::InvalidSpec("radii must increase strictly".into()));
    }
    if patch.radius < rmax + 1 {
        return Err(CharError::BoundaryContamination {
            radius: patch.radius,
            reason: format!("orbital sums up to radius {rmax} need a patch of radius {}", rmax + 1),
        });
    }
    let precision = patch.vertices[0].lattice.k;
    let ginv = gamma.inverse()?;
    let img = vertex_images(gamma, patch)?;
    let mut through: Vec<Vec<(usize, usize)>> = vec![Vec::new(); patch.vertex_count()];
    for (d, layer) in patch.simplices.iter().enumerate() {
        for (i, s) in layer.iter().enumerate() {
            for &v in s {
                through[v].push((d, i));
            }
        }
    }
    let mut per_vertex: BTreeMap<usize, QCyclo> = BTreeMap::new();
    let mut reach: Option<usize> = None;
    for (v, pv) in patch.vertices.iter().enumerate() {
        for &(d, i) in &through[v] {
            let s = &patch.simplices[d][i];
            let mut image: Vec<usize> = match s.iter().map(|&u| img[u]).collect::<Option<Vec<_>>>() {
                Some(x) => x,
                None => continue,
            };
            image.sort();
            if image != *s {
                continue;
            }
            // the reach is taken over the whole patch so that radii short of the fixed set are rejected
            reach = reach.max(Some(pv.dist));
            if pv.dist > rmax {
                continue;
            }
            let simplex = patch.simplex(s)?;
            let start = simplex.chain.lattices.iter().position(|l| l.key == pv.lattice.key).expect("vertex of the simplex");
            let chain = simplex.chain.rotate(start);
            let comp = chain.composition();
            if canonical_composition(&comp).0 != comp {
                continue;
            }
            let Some(t) = ep.term(&comp) else { continue };
            let x = chain.adapted_basis()?;
            let h = x.inverse()?.mul(&ginv).mul(&x);
            let Some(val) = ep.evaluate_term(cs, t, &h, precision)? else {
                return Err(CharError::Disagreement("a stabilized simplex is not stabilized in adapted coordinates".into()));
            };
            let w = t.weight / Ratio::from_integer(t.parahoric_index as i64);
            let e = per_vertex.entry(pv.dist).or_insert_with(|| QCyclo::zero(cs.modulus));
            *e = e.add(&QCyclo::from_cyclo(val).mul_ratio(w));
        }
    }
    let profile: Vec<QCyclo> =
        radii.iter().map(|&r| per_vertex.range(..=r).fold(QCyclo::zero(cs.modulus), |acc, (_, x)| acc.add(x))).collect();
    let mut st = Stabilization { radii: radii.to_vec(), profile, reach, stabilized_from: None, value: None, certified: false };
    let Some(from) = reach else {
        return Err(CharError::BoundaryContamination {
            radius: patch.radius,
            reason: "no simplex of the patch is stabilized by γ".into(),
        });
    };
    let tail: Vec<usize> = (0..radii.len()).filter(|&i| radii[i] >= from).collect();
    if tail.len() < 2 || tail.iter().any(|&i| st.profile[i] != st.profile[tail[0]]) {
        return Err(CharError::NotStabilized(st.profile_string()));
    }
    let v = st.profile[tail[0]].as_cyclo().ok_or_else(|| {
        CharError::Disagreement(format!("stabilized orbital value {} is not integral", st.profile[tail[0]].render()))
    })?;
    st.stabilized_from = Some(radii[tail[0]]);
    st.value = Some(v);
    let fixed_inside = fixed_point_set(gamma, patch).map(|f| f.complete).unwrap_or(false);
    st.certified = reach.is_some_and(|r| r < rmax) && fixed_inside;
    Ok(st)
}

/// The stabilized orbital value as a character value.
pub fn char_orbital(
    cs: &CoefficientSystem,
    gamma: &QpMatrix,
    patch: &BuildingPatch,
    radii: &[usize],
) -> Result<(CharacterValue, Stabilization)> {
    let ep = ep_function(cs)?;
    let st = orbital_integral_stabilization(cs, &ep, gamma, patch, radii)?;
    let value = st.value.clone().expect("stabilized");
    let terms = st.profile.last().map(|x| usize::from(!x.is_zero())).unwrap_or(0);
    Ok((
        CharacterValue {
            value,
            route: Route::Orbital,
            extension: cs.spec.extension,
            radius: Some(patch.radius),
            certified: st.certified,
            gate: None,
            terms,
        },
        st,
    ))
}
