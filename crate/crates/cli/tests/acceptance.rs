//! Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use btchar_building::{
    act_on_point, embed_j, enumerate_ball, isobarycenter, order_of_oe_chain, order_of_simplex, pow_q, q, reduce_q,
    simplex_of_order, BallOptions, BuildingPatch, EStructure, HereditaryOrder, LatticeChain, OEChain, QpMatrix, Simplex,
    DEFAULT_PRECISION, Q,
};
use btchar_charformula::{
    apartment_isotypic_check, char_fixed_sum, char_simple, CoefficientSystem, DiscreteSeriesSpec, TableOptions,
};
use btchar_elliptic::{analyze_elliptic, fixed_point_set, is_minimal, order_normalized_by};
use btchar_finite_gl::{
    cache_file, gelfand_graev, generalized_steinberg, load_or_compute, regular_orbit_count, Cyclo, DEFAULT_BUDGET,
};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const K: u32 = DEFAULT_PRECISION;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<String, String> {
    let t = start.elapsed();
    check(t <= limit, || format!("{what} took {:.1}s, limit {}s", t.as_secs_f64(), limit.as_secs()))?;
    Ok(format!("{:.1}s", t.as_secs_f64()))
}

fn companion(c0: i64, c1: i64) -> QpMatrix {
    QpMatrix::from_i64(&[vec![0, -c0], vec![1, -c1]])
}

fn vertex_ball(p: u32, n: usize, radius: usize) -> BuildingPatch {
    enumerate_ball(&Simplex::standard(p, K, &[n]).unwrap(), radius, BallOptions::default()).unwrap()
}

fn resolve(spec: &DiscreteSeriesSpec) -> CoefficientSystem {
    CoefficientSystem::resolve(spec, &TableOptions::default()).unwrap()
}

fn labels(m: usize, p: u32, cuspidal_only: bool) -> Vec<String> {
    let d = load_or_compute(m, p, DEFAULT_BUDGET, None).unwrap();
    d.table.characters.iter().filter(|c| c.cuspidal || !cuspidal_only).map(|c| c.label.clone()).collect()
}

// ---- building ----

fn random_gl(rng: &mut ChaCha8Rng, n: usize, p: u32) -> QpMatrix {
    loop {
        let rows: Vec<Vec<i64>> =
            (0..n).map(|_| (0..n).map(|_| rng.gen_range(-(p as i64) * 2..=(p as i64) * 2)).collect()).collect();
        let g = QpMatrix::from_i64(&rows);
        if *g.det().numer() != 0 {
            return g;
        }
    }
}

fn random_simplex(rng: &mut ChaCha8Rng) -> Simplex {
    let n = rng.gen_range(1..=3);
    let p = [2u32, 3][rng.gen_range(0..2)];
    let mut comp = Vec::new();
    let mut left = n;
    while left > 0 {
        let m = rng.gen_range(1..=left);
        comp.push(m);
        left -= m;
    }
    let g = random_gl(rng, n, p);
    Simplex::from_chain(LatticeChain::standard(p, K, &comp).unwrap().apply(&g).unwrap())
}

fn brute_inclusion(a: &HereditaryOrder, b: &HereditaryOrder) -> bool {
    a.ring_basis().iter().all(|x| {
        b.chain.lattices.iter().all(|l| {
            let img = x.mul(&l.basis());
            (0..img.cols).all(|j| l.contains_vec(&img.col(j)))
        })
    })
}

/// `(p, minimal polynomial of the generator of E, m)` with `N = m·[E:F]`.
const STRUCTURES: &[(u32, &[i64], usize)] = &[
    (2, &[1, 1, 1], 1),
    (2, &[-2, 0, 1], 1),
    (3, &[-3, 0, 1], 1),
    (3, &[1, 0, 1], 1),
    (2, &[1, 1, 1], 2),
    (3, &[-3, 0, 1], 2),
    (2, &[0, 1], 2),
    (3, &[0, 1], 3),
];

fn random_ge(rng: &mut ChaCha8Rng, es: &EStructure, spread: i64) -> QpMatrix {
    loop {
        let entries: Vec<Vec<Vec<Q>>> = (0..es.m)
            .map(|_| (0..es.m).map(|_| (0..es.d).map(|_| q(rng.gen_range(-spread..=spread))).collect()).collect())
            .collect();
        let g = es.ge_matrix(&entries);
        if *g.det().numer() != 0 {
            return g;
        }
    }
}

fn standard_oe_chain(es: &EStructure, r: usize) -> OEChain {
    let n = es.n();
    let lats = (0..r)
        .map(|i| {
            let cols: Vec<Vec<Q>> = (0..es.m)
                .map(|blk| {
                    let mut v = vec![q(0); n];
                    v[blk * es.d] = q(1);
                    if blk < i {
                        es.uniformizer.mul_vec(&v)
                    } else {
                        v
                    }
                })
                .collect();
            es.oe_lattice(&cols).unwrap()
        })
        .collect();
    OEChain::new(es, lats).unwrap()
}

fn random_oe_chain(rng: &mut ChaCha8Rng, es: &EStructure) -> (OEChain, QpMatrix) {
    let r = rng.gen_range(1..=es.m);
    let h = random_ge(rng, es, 2);
    (standard_oe_chain(es, r).apply(es, &h).unwrap(), h)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for i in 0..1000 {
        let s = random_simplex(&mut rng);
        let a = order_of_simplex(&s).map_err(|e| e.to_string())?;
        let back = simplex_of_order(&a).map_err(|e| e.to_string())?;
        check(back.vertices == s.vertices && a.period() == s.dim() + 1, || format!("round trip failed on chain {i}"))?;
    }
    let mut pairs = 0;
    for _ in 0..400 {
        let s = random_simplex(&mut rng);
        let a = order_of_simplex(&s).unwrap();
        let keep: Vec<usize> = (0..=s.dim()).filter(|_| rng.gen_bool(0.5)).collect();
        let mut others = vec![random_simplex(&mut rng)];
        if !keep.is_empty() {
            others.push(s.face(&keep).unwrap());
        }
        for t in others.into_iter().filter(|t| t.chain.n() == s.chain.n() && t.chain.p() == s.chain.p()) {
            let b = order_of_simplex(&t).unwrap();
            let ordered = a.is_subset_of(&b);
            check(ordered == brute_inclusion(&a, &b), || "order inclusion disagrees with the brute-force test".into())?;
            check(ordered == t.is_face_of(&s) && b.is_subset_of(&a) == s.is_face_of(&t), || "inclusion is not reversed".into())?;
            pairs += 1;
        }
    }
    let mut samples = 0;
    for &(p, poly, m) in STRUCTURES {
        let es = EStructure::new(p, K, poly, m).unwrap();
        let one = QpMatrix::identity(es.n());
        for _ in 0..5 {
            let (b, h) = random_oe_chain(&mut rng, &es);
            let a = order_of_oe_chain(&es, &b).unwrap();
            for _ in 0..4 {
                let g0 = match rng.gen_range(0..3) {
                    0 => random_ge(&mut rng, &es, 1),
                    1 => one.add(&es.uniformizer.mul(&random_ge(&mut rng, &es, 1))),
                    _ => one.add(&random_ge(&mut rng, &es, 1).scale(q(p as i64))),
                };
                let g = g0.conjugate_by(&h).unwrap();
                let u = b.unit_group_contains(&es, &g).unwrap();
                check(a.is_unit(&g).unwrap() == u, || format!("U(A) ∩ G_E ≠ U(B) for p = {p}, m = {m}"))?;
                samples += 1;
            }
        }
    }
    check(samples >= 100, || format!("only {samples} parahoric samples"))?;
    let t = within(start, Duration::from_secs(120), "building checks")?;
    Ok(format!("1000 round trips, {pairs} inclusion pairs, {samples} parahoric samples in {t}"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let (mut iso, mut commuting) = (0, 0);
    for &(p, poly, m) in STRUCTURES {
        let es = EStructure::new(p, K, poly, m).unwrap();
        for _ in 0..8 {
            let (b, _) = random_oe_chain(&mut rng, &es);
            let r = b.period();
            let bary = vec![Ratio::new(1, r as i64); r];
            let x = embed_j(&es, &b, &bary).map_err(|e| e.to_string())?;
            let sigma = simplex_of_order(&order_of_oe_chain(&es, &b).unwrap()).unwrap();
            check(x == isobarycenter(&sigma), || format!("isobarycenter not preserved for p = {p}, m = {m}"))?;
            iso += 1;
            let raw: Vec<i64> = (0..r).map(|_| rng.gen_range(1..4)).collect();
            let total: i64 = raw.iter().sum();
            let w: Vec<Ratio<i64>> = raw.iter().map(|&x| Ratio::new(x, total)).collect();
            let g = random_ge(&mut rng, &es, 3);
            let lhs = embed_j(&es, &b.apply(&es, &g).unwrap(), &w).unwrap();
            let rhs = act_on_point(p, K, &g, &embed_j(&es, &b, &w).unwrap()).unwrap();
            check(lhs == rhs, || format!("j(gy) ≠ g·j(y) for p = {p}, m = {m}"))?;
            commuting += 1;
        }
    }
    check(commuting >= 50, || format!("only {commuting} G_E samples"))?;
    Ok(format!("{iso} isobarycenters, {commuting} G_E elements"))
}

// ---- elliptic elements ----

fn random_integral_unit(rng: &mut ChaCha8Rng, p: u32) -> QpMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..2).map(|_| (0..2).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let g = QpMatrix::from_i64(&rows);
        if g.det_val(p) == Ok(0) {
            return g;
        }
    }
}

fn minimal_quadratic(rng: &mut ChaCha8Rng, p: u32, ramified: bool) -> QpMatrix {
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
    let h = random_integral_unit(rng, p).mul(&QpMatrix::from_i64(&[vec![1, 0], vec![0, if rng.gen_bool(0.5) { pz } else { 1 }]]));
    x.conjugate_by(&h).unwrap().scale(Q::new(1, (pz as i128).pow(rng.gen_range(0..2))))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut count = 0;
    for p in [2u32, 3] {
        let patch = vertex_ball(p, 2, 5);
        for ramified in [true, false] {
            for _ in 0..6 {
                let g = minimal_quadratic(&mut rng, p, ramified);
                let r = analyze_elliptic(&g, p, K).map_err(|e| e.to_string())?;
                check(is_minimal(&r) == Ok(true), || format!("generated element is not minimal: {g:?}"))?;
                let fixed = fixed_point_set(&g, &patch).map_err(|e| e.to_string())?;
                check(fixed.complete && fixed.cells.len() == 1, || format!("{} fixed cells for {g:?}", fixed.cells.len()))?;
                check(Some(fixed.cells[0].vertices.clone()) == patch.locate(r.sigma_gamma.as_ref().unwrap()), || {
                    format!("fixed cell is not σ(A_γ) for {g:?}")
                })?;
                // exhaustive search over the patch must find exactly the constructive order
                order_normalized_by(&r, &patch).map_err(|e| e.to_string())?;
                count += 1;
            }
        }
    }
    check(count >= 20, || format!("only {count} elements"))?;
    Ok(format!("{count} minimal elements, p ∈ {{2, 3}}, ramified and unramified"))
}

// ---- corpus ----

fn run_corpus(out: &Path, cache: &Path) -> Result<(), String> {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let run = Command::new(env!("CARGO_BIN_EXE_btchar"))
        .args(["run", "--scenario"])
        .arg(&corpus)
        .arg("--output")
        .arg(out)
        .arg("--cache-dir")
        .arg(cache)
        .output()
        .map_err(|e| e.to_string())?;
    check(run.status.success(), || format!("corpus run exited with {}: {}", run.status, String::from_utf8_lossy(&run.stderr)))
}

fn value_of(route: &Value) -> Option<(&Value, &Value)> {
    (route["status"] == "ok").then(|| (&route["value"]["coefficients"], &route["value"]["modulus"]))
}

fn criterion_4(out: &Path) -> Outcome {
    let mut pairs = 0;
    let mut coverage = BTreeSet::new();
    let mut names: Vec<_> = std::fs::read_dir(out).map_err(|e| e.to_string())?.filter_map(|e| e.ok()).map(|e| e.path()).collect();
    names.sort();
    for path in names.iter().filter(|p| p.extension().is_some_and(|x| x == "json")) {
        let rep: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).map_err(|e| e.to_string())?;
        if rep["command"] != "char-eval" {
            continue;
        }
        let spec = &rep["parameters"]["spec"];
        let (n, e, p) = (spec["n"].as_u64().unwrap(), spec["e"].as_u64().unwrap(), spec["p"].as_u64().unwrap());
        for res in rep["results"].as_array().unwrap().iter().filter(|r| r["minimal"] == true) {
            let routes = res["routes"].as_array().unwrap();
            let get = |name: &str| routes.iter().find(|r| r["route"] == name).and_then(value_of);
            let mut needed = vec!["simple", "fixed_sum", "orbital"];
            if e == 1 {
                needed.push("frobenius_oracle");
            }
            let values: Vec<_> = needed.iter().map(|r| get(r)).collect();
            let label = format!("{} / {}", path.file_name().unwrap().to_string_lossy(), res["gamma"]);
            check(values.iter().all(Option::is_some), || format!("{label}: a required route did not produce a value"))?;
            check(values.windows(2).all(|w| w[0] == w[1]), || format!("{label}: routes disagree"))?;
            pairs += 1;
            coverage.insert((
                if e == 1 {
                    "e=1"
                } else if e == n {
                    "e=N"
                } else {
                    "other"
                },
                p,
            ));
        }
    }
    let wanted: BTreeSet<_> = [("e=1", 2), ("e=1", 3), ("e=N", 2), ("e=N", 3)].into_iter().collect();
    check(pairs >= 12, || format!("only {pairs} minimal pairs in the corpus"))?;
    check(wanted.is_subset(&coverage), || format!("coverage {coverage:?} misses part of e ∈ {{1, N}} × q ∈ {{2, 3}}"))?;
    Ok(format!("{pairs} minimal pairs agree across routes"))
}

fn criterion_5() -> Outcome {
    let mut ramified = 0;
    let mut roots = Vec::new();
    let mut vanishing = Vec::new();
    for p in [2u32, 3] {
        let pz = p as i64;
        // x² + x + 1 over F_2 and x² − x − 1 over F_3 have roots generating F_{q²}^×
        let (c0, c1) = if p == 2 { (1, 1) } else { (-1, -1) };
        let g0 = companion(c0, c1);
        let residue: Vec<u8> = [0, -c0, 1, -c1].iter().map(|&x| reduce_q(&q(x), p as u64) as u8).collect();
        let patch = vertex_ball(p, 2, 4);
        for rho in labels(2, p, true) {
            let cs = resolve(&DiscreteSeriesSpec::new(2, 1, p, &rho).with_twist(3, 1));
            for k in 0..3i64 {
                let g = g0.scale(pow_q(p, k));
                let v = char_simple(&cs, &analyze_elliptic(&g, p, K).unwrap()).map_err(|e| e.to_string())?;
                let (data, chi) = cs.rho0();
                let finite = data.value(chi, &residue).unwrap().embed(cs.modulus);
                let root = cs.twist_power(2 * k);
                check(v.gate == Some(true), || format!("gate closed on an unramified element, p = {p}"))?;
                check(v.value == finite.mul(&root), || format!("p = {p}, {rho}: value ≠ finite value × root"))?;
                if k == 1 {
                    if finite.is_zero() {
                        vanishing.push(format!("p={p} {rho}"));
                    } else {
                        roots.push(format!("p={p} {rho} t^2={}", root.render()));
                    }
                }
                let r = companion(-pz, 0).scale(pow_q(p, k));
                let w = char_simple(&cs, &analyze_elliptic(&r, p, K).unwrap()).map_err(|e| e.to_string())?;
                let f = char_fixed_sum(&cs, &r, &patch).map_err(|e| e.to_string())?;
                check(w.gate == Some(false) && w.value.is_zero() && f.value.is_zero(), || {
                    format!("ramified element gives a nonzero value, p = {p}, {rho}")
                })?;
                ramified += 1;
            }
        }
    }
    check(roots.iter().any(|r| r.starts_with("p=2")) && roots.iter().any(|r| r.starts_with("p=3")), || {
        "no cuspidal with a nonzero value on the primitive residue".into()
    })?;
    // a cuspidal whose character of F_{q²}^× has order q+1 vanishes there in the finite table too
    let skipped =
        if vanishing.is_empty() { String::new() } else { format!("; zero in the finite table: {}", vanishing.join(", ")) };
    Ok(format!("{ramified} ramified zeros; {}{skipped}", roots.join(", ")))
}

fn criterion_6() -> Outcome {
    let mut done = Vec::new();
    for p in [2u32, 3] {
        let patch = enumerate_ball(&Simplex::standard(p, K, &[1, 1]).unwrap(), 5, BallOptions::default()).unwrap();
        for rho in labels(1, p, true) {
            let cs = resolve(&DiscreteSeriesSpec::new(2, 2, p, &rho));
            let r = apartment_isotypic_check(&cs, &patch, 4).map_err(|e| e.to_string())?;
            for w in &r.windows {
                let apt: Vec<i64> = w.apartment_cells.iter().map(|&c| c as i64 * r.coefficient_dim).collect();
                check(w.isotypic_dims == apt, || format!("p = {p}, {rho}, R = {}: {:?} ≠ {apt:?}", w.window, w.isotypic_dims))?;
                check(w.homology.get(1) == Some(&0), || format!("p = {p}, {rho}, R = {}: H1 = {:?}", w.window, w.homology))?;
            }
            done.push(format!("p={p} {rho}"));
        }
    }
    Ok(format!("windows 4 and 3 for {}", done.join(", ")))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let cache = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (n, qq) in [(2usize, 2u32), (2, 3), (3, 2)] {
        check(!cache_file(cache.path(), n, qq).exists(), || "cache is not cold".into())?;
        let d = load_or_compute(n, qq, DEFAULT_BUDGET, Some(cache.path())).map_err(|e| e.to_string())?;
        let t = &d.table;
        for (i, a) in t.characters.iter().enumerate() {
            for (j, b) in t.characters.iter().enumerate() {
                check(t.inner(&a.values, &b.values) == Some((i == j) as i64), || format!("GL({n},{qq}): rows {i}, {j}"))?;
            }
        }
        for (k, c) in t.classes.iter().enumerate() {
            let s = t.characters.iter().fold(Cyclo::zero(t.modulus), |acc, x| acc.add(&x.values[k].mul(&x.values[k].conj())));
            check(s.as_integer() == Some((t.order / c.size) as i64), || format!("GL({n},{qq}): column {k}"))?;
        }
        let deg2: u64 = t.characters.iter().map(|c| c.degree * c.degree).sum();
        check(deg2 == t.order, || format!("GL({n},{qq}): Σ deg² = {deg2}"))?;
        let q64 = qq as u64;
        let expected = if n == 2 { (q64 * q64 - q64) / 2 } else { regular_orbit_count(n as u32, q64) };
        check(t.cuspidals().len() as u64 == expected, || format!("GL({n},{qq}): {} cuspidals", t.cuspidals().len()))?;
        let small = load_or_compute(1, qq, DEFAULT_BUDGET, Some(cache.path())).unwrap();
        let gg = gelfand_graev(&d.group).unwrap();
        for rho in &small.table.characters {
            let st = generalized_steinberg(&d, n, &small, rho).map_err(|e| e.to_string())?;
            check(t.inner(&st.values, &gg) == Some(1), || format!("GL({n},{qq}): St({}) is not generic", rho.label))?;
        }
        check(cache_file(cache.path(), n, qq).exists(), || "table was not cached".into())?;
    }
    let t = within(start, Duration::from_secs(300), "finite tables")?;
    Ok(format!("GL(2,2), GL(2,3), GL(3,2) from a cold cache in {t}"))
}

fn criterion_8(a: &Path, b: &Path) -> Outcome {
    let list = |d: &Path| -> Vec<String> {
        let mut v: Vec<String> =
            std::fs::read_dir(d).unwrap().filter_map(|e| e.ok()).map(|e| e.file_name().to_string_lossy().into_owned()).collect();
        v.sort();
        v
    };
    let (la, lb) = (list(a), list(b));
    check(la == lb && !la.is_empty(), || "the two runs wrote different file sets".into())?;
    for f in &la {
        let same = std::fs::read(a.join(f)).unwrap() == std::fs::read(b.join(f)).unwrap();
        check(same, || format!("{f} differs between runs"))?;
    }
    Ok(format!("{} report files byte-identical", la.len()))
}

fn guarded(f: impl FnOnce() -> Outcome + std::panic::UnwindSafe) -> Outcome {
    std::panic::catch_unwind(f).unwrap_or_else(|e| {
        Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    })
}

fn main() {
    let tmp = tempfile::tempdir().expect("temporary directory");
    let (out1, out2) = (tmp.path().join("run1"), tmp.path().join("run2"));
    let (cache1, cache2) = (tmp.path().join("cache1"), tmp.path().join("cache2"));

    let corpus_start = Instant::now();
    let first = run_corpus(&out1, &cache1);
    let corpus_time = corpus_start.elapsed();
    let second = run_corpus(&out2, &cache2);

    let results: Vec<(u32, Outcome)> = vec![
        (1, guarded(criterion_1)),
        (2, guarded(criterion_2)),
        (3, guarded(criterion_3)),
        (
            4,
            first.clone().and_then(|_| {
                let msg = guarded(|| criterion_4(&out1))?;
                check(corpus_time <= Duration::from_secs(600), || format!("corpus took {:.1}s", corpus_time.as_secs_f64()))?;
                Ok(format!("{msg} in {:.1}s", corpus_time.as_secs_f64()))
            }),
        ),
        (5, guarded(criterion_5)),
        (6, guarded(criterion_6)),
        (7, guarded(criterion_7)),
        (8, first.and(second).and_then(|_| guarded(|| criterion_8(&out1, &out2)))),
    ];
    let mut failed = 0;
    for (k, r) in &results {
        match r {
            Ok(msg) => println!("criterion {k}: PASS ({msg})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {k}: FAIL ({msg})");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
