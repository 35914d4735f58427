mod common;

use btchar_building::{pow_q, q, reduce_q, QpMatrix};
use btchar_charformula::*;
use btchar_elliptic::{analyze_elliptic, EllipticError};
use btchar_finite_gl::Cyclo;
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn resolve(spec: &DiscreteSeriesSpec) -> CoefficientSystem {
    CoefficientSystem::resolve(spec, &TableOptions::default()).unwrap()
}

/// Runs every applicable route and asserts that they agree; returns the common value.
fn agreed_value(cs: &CoefficientSystem, gamma: &QpMatrix, patch: &btchar_building::BuildingPatch, radii: &[usize]) -> Cyclo {
    let report = analyze_elliptic(gamma, cs.p(), K).unwrap();
    let fixed = char_fixed_sum(cs, gamma, patch).unwrap();
    assert!(fixed.certified);
    let (orbital, st) = char_orbital(cs, gamma, patch, radii).unwrap();
    assert!(st.certified, "orbital profile {}", st.profile_string());
    assert_eq!(orbital.value, fixed.value);
    if report.minimal_over_f == Some(true) {
        assert_eq!(char_simple(cs, &report).unwrap().value, fixed.value);
    }
    if cs.spec.e == 1 {
        assert_eq!(char_supercuspidal_oracle(cs, gamma, patch).unwrap().value, fixed.value);
    }
    fixed.value
}

#[test]
fn rank_two_routes_agree_on_minimal_elements() {
    let mut pairs = 0;
    for p in [2u32, 3] {
        let patch = vertex_ball(p, 2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
        let gammas: Vec<QpMatrix> =
            (0..3).flat_map(|_| [minimal_quadratic(&mut rng, p, false), minimal_quadratic(&mut rng, p, true)]).collect();
        for spec in all_specs(2, p) {
            let cs = resolve(&spec);
            for g in &gammas {
                let v = agreed_value(&cs, g, &patch, &[2, 3]);
                if spec.extension == ExtendedAction::Signed {
                    assert_eq!(v, steinberg_value(&cs, g));
                }
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 12);
}

#[test]
fn rank_three_routes_agree_on_minimal_elements() {
    let patch = vertex_ball(2, 3, 3);
    for spec in all_specs(3, 2) {
        let cs = resolve(&spec);
        for g in rank_three_minimal() {
            let v = agreed_value(&cs, &g, &patch, &[1, 2]);
            if spec.e == 3 {
                assert_eq!(v, steinberg_value(&cs, &g));
            }
        }
    }
}

#[test]
fn monomial_extension_differs_from_signed_by_an_unramified_sign() {
    // for N = 2 the signed factor is −ρ₀(−1), so the monomial value carries it once per
    // unit of det valuation
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [2u32, 3] {
        let patch = vertex_ball(p, 2, 3);
        for rho in cuspidal_labels(1, p) {
            let base = DiscreteSeriesSpec::new(2, 2, p, &rho).with_twist(4, 1);
            let mono = resolve(&base.clone().with_extension(ExtendedAction::Monomial));
            let signed = resolve(&base.with_extension(ExtendedAction::Signed));
            let s = signed.signed_factor().clone();
            for ramified in [false, true] {
                let g = minimal_quadratic(&mut rng, p, ramified);
                let v = g.det_val(p).unwrap();
                let m = char_fixed_sum(&mono, &g, &patch).unwrap().value;
                let st = char_fixed_sum(&signed, &g, &patch).unwrap().value;
                let corr = if v.rem_euclid(2) == 1 { s.clone() } else { Cyclo::from_int(s.m, 1) };
                assert_eq!(m.mul(&corr), st);
            }
        }
    }
}

#[test]
fn non_minimal_elements_need_the_fixed_point_sum() {
    for p in [2u32, 3] {
        let patch = vertex_ball(p, 2, 4);
        let pz = p as i64;
        // 1 + p²θ with θ unramified: F[γ] is unramified but γ − 1 has positive valuation
        let theta = if p == 2 { companion(1, 1) } else { companion(1, 0) };
        let g = QpMatrix::identity(2).add(&theta.scale(q(pz * pz)));
        let report = analyze_elliptic(&g, p, K).unwrap();
        assert_eq!(report.minimal_over_f, Some(false));
        let fixed = fixed_point_set_len(&g, &patch);
        assert!(fixed > 1, "a non-minimal element fixes more than one cell");
        for spec in all_specs(2, p) {
            let cs = resolve(&spec);
            assert!(matches!(char_simple(&cs, &report), Err(CharError::MinimalityRequired)));
            agreed_value(&cs, &g, &patch, &[2, 3]);
        }
        for rho in cuspidal_labels(1, p) {
            let cs = resolve(&DiscreteSeriesSpec::new(2, 2, p, &rho).with_extension(ExtendedAction::Signed));
            assert_eq!(char_fixed_sum(&cs, &g, &patch).unwrap().value, steinberg_value(&cs, &g));
        }
    }
}

fn fixed_point_set_len(g: &QpMatrix, patch: &btchar_building::BuildingPatch) -> usize {
    btchar_elliptic::fixed_point_set(g, patch).unwrap().cells.len()
}

#[test]
fn ramified_elements_vanish_on_depth_zero_supercuspidals() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in [2u32, 3] {
        for rho in cuspidal_labels(2, p) {
            let cs = resolve(&DiscreteSeriesSpec::new(2, 1, p, &rho));
            for _ in 0..4 {
                let g = minimal_quadratic(&mut rng, p, true);
                let v = char_simple(&cs, &analyze_elliptic(&g, p, K).unwrap()).unwrap();
                assert_eq!(v.gate, Some(false));
                assert!(v.value.is_zero());
            }
        }
    }
    let cs = resolve(&DiscreteSeriesSpec::new(3, 1, 2, &cuspidal_labels(3, 2)[0]));
    let v = char_simple(&cs, &analyze_elliptic(&rank_three_minimal()[0], 2, K).unwrap()).unwrap();
    assert_eq!(v.gate, Some(false));
    assert!(v.value.is_zero());
}

#[test]
fn primitive_unramified_residues_recover_the_finite_character() {
    for p in [2u32, 3] {
        let pz = p as i64;
        // x² − x − 1 for p = 3 and x² + x + 1 for p = 2 have residues generating F_{q²}^×
        let g0 = if p == 2 { companion(1, 1) } else { companion(-1, -1) };
        for k in 0..3i64 {
            let g = g0.scale(pow_q(p, k));
            for rho in cuspidal_labels(2, p) {
                let cs = resolve(&DiscreteSeriesSpec::new(2, 1, p, &rho).with_twist(3, 1));
                let v = char_simple(&cs, &analyze_elliptic(&g, p, K).unwrap()).unwrap();
                assert_eq!(v.gate, Some(true));
                let (data, chi) = cs.rho0();
                let residue: Vec<u8> = [0, -(if p == 2 { 1 } else { -1 }), 1, -(if p == 2 { 1 } else { -1 })]
                    .iter()
                    .map(|&x: &i64| reduce_q(&q(x), pz as u64) as u8)
                    .collect();
                let table = data.value(chi, &residue).unwrap().embed(cs.modulus);
                assert_eq!(v.value, table.mul(&cs.twist_power(2 * k)));
            }
        }
    }
}

#[test]
fn central_elements_act_by_the_central_character() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for p in [2u32, 3] {
        let patch = vertex_ball(p, 2, 3);
        for spec in all_specs(2, p) {
            let spec = spec.with_twist(6, 1);
            let cs = resolve(&spec);
            let ramified = rng_bool(&mut rng);
            let g = minimal_quadratic(&mut rng, p, ramified);
            let base = char_fixed_sum(&cs, &g, &patch).unwrap().value;
            for z in [q(p as i64), q(-1), q(p as i64 + 2) * pow_q(p, -2)] {
                let zg = g.scale(z);
                let v = char_fixed_sum(&cs, &zg, &patch).unwrap().value;
                assert_eq!(v, base.mul(&cs.central_character(&z).unwrap()));
            }
        }
    }
}

fn rng_bool(rng: &mut ChaCha8Rng) -> bool {
    use rand::Rng;
    rng.gen_bool(0.5)
}

#[test]
fn conjugation_by_integral_units_preserves_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for p in [2u32, 3] {
        let patch = vertex_ball(p, 2, 4);
        for spec in all_specs(2, p) {
            let cs = resolve(&spec);
            let ramified = rng_bool(&mut rng);
            let g = minimal_quadratic(&mut rng, p, ramified);
            let base = char_fixed_sum(&cs, &g, &patch).unwrap().value;
            for _ in 0..2 {
                let h = random_integral_unit(&mut rng, p, 2);
                let hg = g.conjugate_by(&h).unwrap();
                assert_eq!(char_fixed_sum(&cs, &hg, &patch).unwrap().value, base);
                assert_eq!(char_orbital(&cs, &hg, &patch, &[2, 3]).unwrap().0.value, base);
            }
        }
    }
}

#[test]
fn elements_fixing_nothing_nearby_are_reported() {
    let p = 3;
    let patch = vertex_ball(p, 2, 3);
    let cs = resolve(&DiscreteSeriesSpec::new(2, 1, p, &cuspidal_labels(2, p)[0]));
    let far = QpMatrix::from_i64(&[vec![1, 0], vec![0, 3i64.pow(6)]]);
    let g = companion(1, 0).conjugate_by(&far).unwrap();
    assert!(char_fixed_sum(&cs, &g, &patch).is_err());
    assert!(matches!(char_orbital(&cs, &g, &patch, &[1, 2]), Err(CharError::BoundaryContamination { .. })));
    // fixed inside the patch but beyond every radius: the profile is zero and must not count as stable
    let near = QpMatrix::from_i64(&[vec![1, 0], vec![0, 3i64.pow(4)]]);
    let g = companion(1, 0).conjugate_by(&near).unwrap();
    let big = vertex_ball(p, 2, 6);
    assert!(matches!(char_orbital(&cs, &g, &big, &[1, 2]), Err(CharError::NotStabilized(_))));
    let (v, st) = char_orbital(&cs, &g, &big, &[4, 5]).unwrap();
    assert_eq!(st.reach, Some(4));
    assert_eq!(v.value, char_fixed_sum(&cs, &g, &big).unwrap().value);
}

#[test]
fn invalid_inputs_are_rejected() {
    let p = 3;
    let patch = vertex_ball(p, 2, 2);
    let rho1 = &cuspidal_labels(1, p)[0];
    let ramified = companion(-3, 0);

    let unset = resolve(&DiscreteSeriesSpec::new(2, 2, p, rho1).with_extension(ExtendedAction::Unset));
    let report = analyze_elliptic(&ramified, p, K).unwrap();
    assert!(matches!(char_simple(&unset, &report), Err(CharError::ExtendedActionNeeded)));
    assert!(char_simple(&unset, &analyze_elliptic(&companion(1, 0), p, K).unwrap()).is_ok());

    let cs = resolve(&DiscreteSeriesSpec::new(2, 2, p, rho1));
    let split = QpMatrix::from_i64(&[vec![1, 0], vec![0, 2]]);
    assert!(matches!(char_fixed_sum(&cs, &split, &patch), Err(CharError::NotElliptic)));
    assert!(matches!(char_fixed_sum(&cs, &QpMatrix::identity(2), &patch), Err(CharError::NotElliptic)));

    let trivial_gl2 = "chi0";
    let err = CoefficientSystem::resolve(&DiscreteSeriesSpec::new(2, 1, p, trivial_gl2), &TableOptions::default());
    assert!(matches!(err, Err(CharError::NotCuspidal(_))));

    for bad in [
        DiscreteSeriesSpec::new(4, 2, 2, "chi0"),
        DiscreteSeriesSpec::new(2, 3, 2, "chi0"),
        DiscreteSeriesSpec::new(2, 1, 4, "chi0"),
    ] {
        assert!(CoefficientSystem::resolve(&bad, &TableOptions::default()).is_err());
    }
    let tiny = TableOptions { budget: 5, cache_dir: None };
    assert!(CoefficientSystem::resolve(&DiscreteSeriesSpec::new(2, 1, 3, "chi2"), &tiny).is_err());

    let mut leveled = DiscreteSeriesSpec::new(2, 1, p, &cuspidal_labels(2, p)[0]);
    leveled.level = 1;
    let cs = resolve(&leveled);
    let report = analyze_elliptic(&companion(1, 0), p, K).unwrap();
    assert!(matches!(char_simple(&cs, &report), Err(CharError::UnsupportedLevel(1))));

    let coarse = analyze_elliptic(&companion(1, 0).scale(pow_q(p, 9)), p, 2);
    if let Ok(r) = coarse {
        if r.minimal_over_f.is_none() {
            let cs = resolve(&DiscreteSeriesSpec::new(2, 1, p, &cuspidal_labels(2, p)[0]));
            assert!(matches!(char_simple(&cs, &r), Err(CharError::Elliptic(EllipticError::Indeterminate))));
        }
    }
}

struct Doubling;

impl TraceFactorization for Doubling {
    fn kappa_trace(&self, _gamma: &QpMatrix, _composition: &[usize], modulus: u32) -> Result<Cyclo> {
        Ok(Cyclo::from_int(modulus, 2))
    }
}

#[test]
fn positive_level_uses_the_supplied_factorization() {
    let p = 3;
    let mut spec = DiscreteSeriesSpec::new(2, 1, p, &cuspidal_labels(2, p)[0]);
    let g = companion(-1, -1);
    let level_zero = char_simple(&resolve(&spec), &analyze_elliptic(&g, p, K).unwrap()).unwrap().value;
    spec.level = 1;
    let cs = resolve(&spec).with_hook(std::sync::Arc::new(Doubling));
    let v = char_simple(&cs, &analyze_elliptic(&g, p, K).unwrap()).unwrap().value;
    assert_eq!(v, level_zero.scale(2));
}
