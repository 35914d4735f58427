use btchar_padic::{
    certified_irreducible, ef_invariants, newton_polygon, EfInvariants, FpPoly, LocalFieldDesc, Padic, PadicError, QpPoly,
};
use num_rational::Ratio;
use proptest::prelude::*;

fn vp(p: u32, mut n: i64) -> Option<i64> {
    if n == 0 {
        return None;
    }
    let mut v = 0;
    while n % p as i64 == 0 {
        n /= p as i64;
        v += 1;
    }
    Some(v)
}

/// Lower hull by brute force: a segment between two points is an edge when every
/// other point lies on or above its supporting line, and no point strictly between
/// its endpoints lies on it. Returns root valuations with multiplicities, sorted.
fn brute_hull_slopes(p: u32, coeffs: &[i64]) -> Vec<(Ratio<i64>, usize)> {
    let pts: Vec<(i64, i64)> = coeffs.iter().enumerate().filter_map(|(i, &c)| vp(p, c).map(|v| (i as i64, v))).collect();
    let mut edges = Vec::new();
    for a in &pts {
        for b in &pts {
            if b.0 <= a.0 {
                continue;
            }
            let supporting = pts.iter().all(|c| (c.1 - a.1) * (b.0 - a.0) >= (b.1 - a.1) * (c.0 - a.0));
            let maximal = pts.iter().all(|c| {
                let on = (c.1 - a.1) * (b.0 - a.0) == (b.1 - a.1) * (c.0 - a.0);
                !on || (a.0 <= c.0 && c.0 <= b.0)
            });
            if supporting && maximal {
                edges.push((Ratio::new(a.1 - b.1, b.0 - a.0), (b.0 - a.0) as usize));
            }
        }
    }
    edges.sort();
    edges
}

#[test]
fn cubic_over_q5_matches_hull_oracle() {
    let c = [-5, -25, 0, 1];
    let np = newton_polygon(&QpPoly::from_ints(5, &c, 12)).unwrap();
    assert_eq!(np.segments, brute_hull_slopes(5, &c));
    assert_eq!(np.segments, vec![(Ratio::new(1, 3), 3)]);
}

/// Eisenstein criterion, checked directly on integer coefficients.
fn eisenstein(p: u32, c: &[i64]) -> bool {
    let n = c.len() - 1;
    c[n] == 1 && c[..n].iter().all(|&a| a % p as i64 == 0) && c[0] % (p as i64 * p as i64) != 0
}

#[test]
fn quartic_over_q2_totally_ramified() {
    for u in [1i64, 3, 5, 7, 9, 11, 13, 15, -1, -3] {
        let c = [2 * u, 0, 2, 0, 1];
        assert!(eisenstein(2, &c));
        let got = ef_invariants(&QpPoly::from_ints(2, &c, 20)).unwrap();
        assert_eq!(got, EfInvariants { e: 4, f: 1 }, "u = {u}");
    }
}

#[test]
fn quadratic_unit_over_q5_matches_residue_squares() {
    let squares: Vec<i64> = (1..5).map(|y| y * y % 5).collect();
    for u in [1i64, 2, 3, 4, 6, 7, 8, 9, 11, 12, 13, 14, 19, 21, 22, 23, 24, 26, 57, 123] {
        let f = QpPoly::from_ints(5, &[-u, 0, 1], 12);
        let expected = !squares.contains(&(u % 5));
        assert_eq!(certified_irreducible(&f), Ok(expected), "u = {u}");
    }
}

#[test]
fn examples_from_small_cases() {
    let p = 7;
    assert_eq!(ef_invariants(&QpPoly::from_ints(p, &[-7, 0, 1], 12)).unwrap(), EfInvariants { e: 2, f: 1 });
    assert_eq!(certified_irreducible(&QpPoly::from_ints(3, &[-1, 0, 1], 12)), Ok(false));
    let f = LocalFieldDesc::base(5).unwrap();
    assert_eq!(f.residue_image(&f.element(&[1 + 125])).unwrap(), FpPoly::new(5, vec![1]));
}

#[test]
fn uncertified_constant_is_reported() {
    let f = QpPoly::new(3, vec![Padic::big_o(3, 4), Padic::zero(3), Padic::one(3)]);
    assert!(matches!(newton_polygon(&f), Err(PadicError::PrecisionInsufficient(_))));
}

fn small_poly() -> impl Strategy<Value = (u32, Vec<i64>)> {
    (prop::sample::select(vec![2u32, 3, 5]), 1usize..=4)
        .prop_flat_map(|(p, n)| (Just(p), prop::collection::vec(-300i64..300, n)))
        .prop_filter("nonzero constant", |(_, c)| c[0] != 0)
        .prop_map(|(p, mut c)| {
            c.push(1);
            (p, c)
        })
}

proptest! {
    #[test]
    fn hull_dominates_every_point((p, c) in small_poly()) {
        let np = newton_polygon(&QpPoly::from_ints(p, &c, 20)).unwrap();
        prop_assert_eq!(np.degree(), c.len() - 1);
        prop_assert_eq!(&np.segments, &brute_hull_slopes(p, &c));
        for w in np.segments.windows(2) {
            prop_assert!(w[0].0 < w[1].0);
        }
    }

    #[test]
    fn certified_ef_multiplies_to_degree((p, c) in small_poly()) {
        if let Ok(ef) = ef_invariants(&QpPoly::from_ints(p, &c, 20)) {
            prop_assert_eq!((ef.e * ef.f) as usize, c.len() - 1);
        }
    }

    #[test]
    fn raising_precision_keeps_certified_answers((p, c) in small_poly(), k in 4u32..10) {
        let lo = QpPoly::from_ints(p, &c, k);
        let hi = QpPoly::from_ints(p, &c, k + 8);
        if let Ok(b) = certified_irreducible(&lo) {
            prop_assert_eq!(certified_irreducible(&hi), Ok(b));
        }
        if let Ok(ef) = ef_invariants(&lo) {
            prop_assert_eq!(ef_invariants(&hi), Ok(ef));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn residue_map_is_multiplicative(a in prop::collection::vec(-1000i64..1000, 2), b in prop::collection::vec(-1000i64..1000, 2)) {
        let e = LocalFieldDesc::new(2, 12, Some(&[1, 1, 1])).unwrap();
        let (x, y) = (e.element(&a), e.element(&b));
        let lhs = e.residue_image(&e.mul(&x, &y)).unwrap();
        let rhs = e.residue_mul(&e.residue_image(&x).unwrap(), &e.residue_image(&y).unwrap());
        prop_assert_eq!(lhs, rhs);

        let f = LocalFieldDesc::base(5).unwrap();
        let (u, v) = (f.element(&a[..1]), f.element(&b[..1]));
        let lhs = f.residue_image(&f.mul(&u, &v)).unwrap();
        let rhs = f.residue_mul(&f.residue_image(&u).unwrap(), &f.residue_image(&v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
