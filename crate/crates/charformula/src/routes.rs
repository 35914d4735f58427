//! Character values by the simple formula, the fixed-simplex sum and, for `e = 1`,
//! the Frobenius formula for a compactly induced representation.

use btchar_building::{pow_q, BuildingPatch, QpMatrix};
use btchar_elliptic::{analyze_elliptic, divisibility_gate, fixed_point_set, EllipticError, EllipticReport};
use btchar_finite_gl::Cyclo;

use crate::coeffsys::{canonical_composition, residue_matrix, CoefficientSystem};
use crate::error::{CharError, Result};
use crate::value::{CharacterValue, Route};

fn patch_precision(patch: &BuildingPatch) -> u32 {
    patch.vertices[0].lattice.k
}

fn check_shape(cs: &CoefficientSystem, p: u32, n: usize) -> Result<()> {
    if p != cs.p() || n != cs.n() {
        return Err(CharError::InvalidSpec(format!("element of GL({n}, Q_{p}) for a datum of GL({}, Q_{})", cs.n(), cs.p())));
    }
    Ok(())
}

fn require_elliptic(cs: &CoefficientSystem, gamma: &QpMatrix, precision: u32) -> Result<EllipticReport> {
    check_shape(cs, cs.p(), gamma.rows)?;
    let report = analyze_elliptic(gamma, cs.p(), precision)?;
    if !report.elliptic_regular {
        return Err(CharError::NotElliptic);
    }
    Ok(report)
}

/// `χ(γ) = Tr(γ, λ_{σ_γ})` when the divisibility gate passes, else 0; `γ` must be
/// elliptic regular and minimal over `F`.
pub fn char_simple(cs: &CoefficientSystem, report: &EllipticReport) -> Result<CharacterValue> {
    check_shape(cs, report.p, report.n())?;
    if !report.elliptic_regular {
        return Err(CharError::NotElliptic);
    }
    match report.minimal_over_f {
        None => return Err(EllipticError::Indeterminate.into()),
        Some(false) => return Err(CharError::MinimalityRequired),
        Some(true) => {}
    }
    let gate = divisibility_gate(cs.spec.gate_data(), report)?;
    let value = if gate {
        let sigma = report.sigma_gamma.as_ref().ok_or(EllipticError::Indeterminate)?;
        cs.trace(&report.gamma, sigma)?
    } else {
        Cyclo::zero(cs.modulus)
    };
    Ok(CharacterValue {
        terms: usize::from(!value.is_zero()),
        value,
        route: Route::Simple,
        extension: cs.spec.extension,
        radius: None,
        certified: true,
        gate: Some(gate),
    })
}

/// `Σ (−1)^{dim σ(γ)} Tr(γ, λ_σ)` over the simplices `σ` stabilized by `γ`, with
/// `σ(γ)` the fixed part of `σ`.
pub fn char_fixed_sum(cs: &CoefficientSystem, gamma: &QpMatrix, patch: &BuildingPatch) -> Result<CharacterValue> {
    check_shape(cs, patch.p, patch.n)?;
    require_elliptic(cs, gamma, patch_precision(patch))?;
    let fixed = fixed_point_set(gamma, patch)?.require_complete()?;
    let mut acc = Cyclo::zero(cs.modulus);
    let mut terms = 0;
    for cell in &fixed.cells {
        let s = patch.simplex(&cell.vertices)?;
        let (canon, _, _) = canonical_composition(&s.chain.composition());
        if !cs.in_support(&canon) {
            continue;
        }
        let t = cs.trace(gamma, &s)?;
        if !t.is_zero() {
            terms += 1;
        }
        acc = if cell.fixed_dim % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    Ok(CharacterValue {
        value: acc,
        route: Route::FixedSum,
        extension: cs.spec.extension,
        radius: Some(patch.radius),
        certified: fixed.complete,
        gate: None,
        terms,
    })
}

/// For `e = 1`: `Σ_v ρ̃_v(γ)` over the vertices `v` with `γ ∈ K_v·Z`, where
/// `ρ̃_v(γ) = χ_t(det γ)·ρ₀(B_v⁻¹ γ B_v p^{−a} mod p)` for a basis `B_v` of the lattice
/// at `v` and `γ L_v = p^a L_v`.
pub fn char_supercuspidal_oracle(cs: &CoefficientSystem, gamma: &QpMatrix, patch: &BuildingPatch) -> Result<CharacterValue> {
    if cs.spec.e != 1 {
        return Err(CharError::UnsupportedShape("the Frobenius oracle needs e = 1".into()));
    }
    check_shape(cs, patch.p, patch.n)?;
    require_elliptic(cs, gamma, patch_precision(patch))?;
    let fixed = fixed_point_set(gamma, patch)?.require_complete()?;
    let p = cs.p();
    let (data, chi) = cs.rho0();
    let twist = cs.twist_power(gamma.det_val(p)?);
    let mut acc = Cyclo::zero(cs.modulus);
    let mut terms = 0;
    for v in &patch.vertices {
        let img = v.lattice.apply(gamma)?;
        if img.key != v.lattice.key {
            continue;
        }
        let a = img.shift - v.lattice.shift;
        let b = v.lattice.basis();
        let y = b.inverse()?.mul(gamma).mul(&b).scale(pow_q(p, -a));
        let val = data.value(chi, &residue_matrix(&y, p)?)?.embed(cs.modulus).mul(&twist);
        if !val.is_zero() {
            terms += 1;
        }
        acc = acc.add(&val);
    }
    Ok(CharacterValue {
        value: acc,
        route: Route::FrobeniusOracle,
        extension: cs.spec.extension,
        radius: Some(patch.radius),
        certified: fixed.complete,
        gate: None,
        terms,
    })
}
