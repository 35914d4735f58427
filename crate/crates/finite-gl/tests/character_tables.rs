use btchar_finite_gl::*;

fn table(n: usize, q: u32) -> GlData {
    load_or_compute(n, q, DEFAULT_BUDGET, None).unwrap()
}

fn is_prime_power(q: u32) -> bool {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    r == 1
}

#[test]
fn orthogonality_and_degree_sum() {
    for (n, q) in [(1, 4), (1, 5), (2, 2), (2, 3), (2, 4), (3, 2)] {
        let d = table(n, q);
        let t = &d.table;
        assert_eq!(t.characters.len(), t.classes.len());
        assert_eq!(t.characters.iter().map(|c| c.degree * c.degree).sum::<u64>(), t.order);
        for (i, a) in t.characters.iter().enumerate() {
            for (j, b) in t.characters.iter().enumerate() {
                assert_eq!(t.inner(&a.values, &b.values), Some((i == j) as i64), "GL({n},{q}) {i} {j}");
            }
        }
        // column orthogonality: Σ_χ |χ(g)|² = |C_G(g)|
        for (k, c) in t.classes.iter().enumerate() {
            let s = t.characters.iter().fold(Cyclo::zero(t.modulus), |acc, x| acc.add(&x.values[k].mul(&x.values[k].conj())));
            assert_eq!(s.as_integer(), Some((t.order / c.size) as i64));
        }
    }
}

#[test]
fn gl2_degrees_follow_the_series() {
    for q in [2u64, 3, 4, 5] {
        let t = table(2, q as u32).table;
        let count = |d: u64| t.characters.iter().filter(|c| c.degree == d).count() as u64;
        if q == 2 {
            // degrees q−1 and 1 coincide
            assert_eq!(count(1), 2);
            assert_eq!(count(2), 1);
            continue;
        }
        assert_eq!(count(1), q - 1);
        assert_eq!(count(q), q - 1);
        assert_eq!(count(q + 1), (q - 1) * (q - 2) / 2);
        assert_eq!(count(q - 1), (q * q - q) / 2);
    }
}

#[test]
fn gl22_is_the_symmetric_group_on_three_letters() {
    let t = table(2, 2).table;
    // classes ordered by element order: identity, transpositions, 3-cycles
    assert_eq!(t.classes.iter().map(|c| (c.elem_order, c.size)).collect::<Vec<_>>(), vec![(1, 1), (2, 3), (3, 2)]);
    let mut rows: Vec<Vec<i64>> =
        t.characters.iter().map(|c| c.values.iter().map(|v| v.as_integer().unwrap()).collect()).collect();
    rows.sort();
    assert_eq!(rows, vec![vec![1, -1, 1], vec![1, 1, 1], vec![2, 0, -1]]);
}

#[test]
fn permutation_character_on_lines_decomposes() {
    // GL(n, q) acting on the points of P^{n-1}(F_q): 1 + (St-type constituents)
    for (n, q) in [(2usize, 3u32), (2, 4), (3, 2)] {
        let d = table(n, q);
        let g = &d.group;
        let qn = (q as usize).pow(n as u32);
        let perm: Vec<Cyclo> = d
            .table
            .classes
            .iter()
            .map(|c| {
                let fixed = (1..qn)
                    .filter(|&v| {
                        let vec: Vec<u8> = (0..n).map(|i| ((v / (q as usize).pow(i as u32)) % q as usize) as u8).collect();
                        let img: Vec<u8> =
                            (0..n).map(|i| (0..n).fold(0u8, |s, j| g.gf.add(s, g.gf.mul(c.rep[i * n + j], vec[j])))).collect();
                        (1..q as u8).any(|a| img.iter().zip(&vec).all(|(&x, &y)| x == g.gf.mul(a, y)))
                    })
                    .count();
                Cyclo::from_int(d.table.modulus, (fixed / (q as usize - 1)) as i64)
            })
            .collect();
        let mult = d.table.decompose(&perm).unwrap();
        assert!(mult.iter().all(|&m| m >= 0));
        assert_eq!(mult.iter().sum::<i64>(), 2);
        let one = d.table.characters.iter().position(|c| c.values.iter().all(|v| v.as_integer() == Some(1))).unwrap();
        assert_eq!(mult[one], 1);
    }
}

#[test]
fn cuspidal_counts() {
    for q in [2u32, 3, 4, 5] {
        let t = table(2, q).table;
        let q = q as u64;
        assert_eq!(t.cuspidals().len() as u64, (q * q - q) / 2);
        assert!(t.cuspidals().iter().all(|c| c.degree == q - 1 && c.generic));
        assert_eq!(regular_orbit_count(2, q), (q * q - q) / 2);
    }
    let t = table(3, 2).table;
    assert_eq!(t.cuspidals().len() as u64, regular_orbit_count(3, 2));
    assert!(t.cuspidals().iter().all(|c| c.degree == 3));
    for (q, n) in [(4u32, 1usize), (5, 1)] {
        assert_eq!(table(n, q).table.cuspidals().len() as u64, q as u64 - 1);
    }
    assert!(is_prime_power(4) && !is_prime_power(6));
    assert!(matches!(GlGroup::new(2, 6, DEFAULT_BUDGET), Err(FglError::NotPrimePower(6))));
}

#[test]
fn generic_characters_match_the_gelfand_graev_decomposition() {
    for (n, q) in [(2usize, 2u32), (2, 3), (3, 2)] {
        let d = table(n, q);
        let gg = gelfand_graev(&d.group).unwrap();
        let mult = d.table.decompose(&gg).unwrap();
        assert!(mult.iter().all(|&m| m == 0 || m == 1));
        let generic: Vec<bool> = d.table.characters.iter().map(|c| c.generic).collect();
        assert_eq!(mult.iter().map(|&m| m == 1).collect::<Vec<_>>(), generic);
        let deg_gg = gg[0].as_integer().unwrap() as u64;
        assert_eq!(deg_gg * (q as u64).pow((n * (n - 1) / 2) as u32), d.table.order);
    }
}
