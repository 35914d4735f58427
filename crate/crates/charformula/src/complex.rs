//! Oriented chain complexes of the coefficient system on a patch, and the comparison
//! of their isotypic parts with the standard apartment.

use std::collections::{BTreeMap, HashMap, VecDeque};

use btchar_building::{BuildingPatch, QpMatrix, Simplex};
use btchar_finite_gl::Cyclo;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::coeffsys::{canonical_composition, CoefficientSystem};
use crate::error::{CharError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainComplexReport {
    pub radius: usize,
    /// Cells are counted when every vertex lies within this distance of the base.
    pub window: usize,
    /// Simplices with nonzero coefficients, per degree.
    pub cells: Vec<usize>,
    /// `dim C_q = Σ dim 𝒱_σ`, each dimension read off as the trace of the identity.
    pub dims: Vec<u64>,
    pub euler: i64,
    /// `Σ_q (−1)^q Σ_orbits (#cells in the orbit)·dim`, from the orbit data.
    pub euler_from_orbits: i64,
    /// `ends` when the boundary is realized on coefficient spaces, `simplicial` when it
    /// is checked with constant coefficients.
    pub boundary_model: String,
    pub boundary_squared_zero: bool,
    /// `ε ∘ ∂ = 0` for the augmentation to functions on the outer sphere.
    pub augmentation_vanishes: Option<bool>,
}

fn in_window(patch: &BuildingPatch, s: &[usize], window: usize) -> bool {
    s.iter().all(|&v| patch.vertices[v].dist <= window)
}

/// Tree distances from `v` inside the patch.
fn bfs(patch: &BuildingPatch, v: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; patch.vertex_count()];
    d[v] = 0;
    let mut q = VecDeque::from([v]);
    while let Some(u) = q.pop_front() {
        for &w in &patch.adjacency[u] {
            if d[w] == usize::MAX {
                d[w] = d[u] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

/// The chain complex on the cells within `window` of the base; the patch radius
/// must exceed the window.
///
/// For `N = 2`, `e = 2` the complex is realized in the model of locally constant
/// functions on the ends of the tree modulo constants: `𝒱_v` is spanned by the
/// indicators `(v→w)` of the ends seen through the neighbours `w`, subject to
/// `Σ_w (v→w) = 0`, and the edge `{v, w}` carries `E = [v, w]⊗(v→w)`, independent of
/// the orientation, with `∂E = −(w→v)_w − (v→w)_v`. The augmentation sends `(v→w)` to
/// the indicator of the outer sphere seen through `w`.
pub fn chain_complex(cs: &CoefficientSystem, patch: &BuildingPatch, window: usize) -> Result<ChainComplexReport> {
    if window >= patch.radius {
        return Err(CharError::BoundaryContamination {
            radius: patch.radius,
            reason: format!("window {window} reaches the boundary"),
        });
    }
    let n = cs.n();
    let one = QpMatrix::identity(n);
    let mut cells = vec![0usize; n];
    let mut dims = vec![0u64; n];
    let mut per_type: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (d, layer) in patch.simplices.iter().enumerate() {
        for s in layer.iter().filter(|s| in_window(patch, s, window)) {
            let simplex = patch.simplex(s)?;
            let canon = canonical_composition(&simplex.chain.composition()).0;
            if !cs.in_support(&canon) {
                continue;
            }
            let tr = cs.trace(&one, &simplex)?;
            let dim = tr
                .as_integer()
                .filter(|&x| x > 0)
                .ok_or_else(|| CharError::Disagreement("trace of the identity is not a positive integer".into()))?;
            cells[d] += 1;
            dims[d] += dim as u64;
            *per_type.entry(canon).or_default() += 1;
        }
    }
    let euler: i64 = dims.iter().enumerate().map(|(d, &x)| if d % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
    let euler_from_orbits: i64 = per_type
        .iter()
        .map(|(c, &k)| {
            let x = cs.datum(c).dim as i64 * k as i64;
            if (c.len() - 1) % 2 == 0 {
                x
            } else {
                -x
            }
        })
        .sum();
    let (model, squared, aug) = if n == 2 && cs.spec.e == 2 {
        ("ends", true, Some(ends_augmentation_vanishes(patch, window)))
    } else {
        ("simplicial", simplicial_boundary_squared_zero(patch, window), None)
    };
    Ok(ChainComplexReport {
        radius: patch.radius,
        window,
        cells,
        dims,
        euler,
        euler_from_orbits,
        boundary_model: model.into(),
        boundary_squared_zero: squared,
        augmentation_vanishes: aug,
    })
}

/// `∂∂ = 0` on oriented cells within the window, orientation from the vertex order.
fn simplicial_boundary_squared_zero(patch: &BuildingPatch, window: usize) -> bool {
    for layer in patch.simplices.iter().skip(2) {
        for s in layer.iter().filter(|s| in_window(patch, s, window)) {
            let mut acc: HashMap<Vec<usize>, i64> = HashMap::new();
            for i in 0..s.len() {
                let f: Vec<usize> = s.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect();
                for j in 0..f.len() {
                    let g: Vec<usize> = f.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect();
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    *acc.entry(g).or_default() += sign;
                }
            }
            if acc.values().any(|&c| c != 0) {
                return false;
            }
        }
    }
    true
}

/// `ε(∂E)` is constant on the outer sphere for every edge in the window.
fn ends_augmentation_vanishes(patch: &BuildingPatch, window: usize) -> bool {
    let sphere: Vec<usize> = (0..patch.vertex_count()).filter(|&u| patch.vertices[u].dist == patch.radius).collect();
    let mut dist: HashMap<usize, Vec<usize>> = HashMap::new();
    for s in patch.simplices[1].iter().filter(|s| in_window(patch, s, window)) {
        for &v in s {
            dist.entry(v).or_insert_with(|| bfs(patch, v));
        }
        let (v, w) = (s[0], s[1]);
        let (dv, dw) = (&dist[&v], &dist[&w]);
        // −1 on the ends through w seen from v, −1 on those through v seen from w
        let image: Vec<i64> = sphere.iter().map(|&u| -((dw[u] < dv[u]) as i64) - ((dv[u] < dw[u]) as i64)).collect();
        if image.iter().any(|&x| x != image[0]) {
            return false;
        }
    }
    true
}

/// Dimensions and homology of one window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub window: usize,
    /// `λ_max`-isotypic dimension per degree.
    pub isotypic_dims: Vec<i64>,
    /// Cells of the truncated standard apartment per degree.
    pub apartment_cells: Vec<usize>,
    pub homology: Vec<i64>,
    pub expected_homology: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApartmentReport {
    pub radius: usize,
    pub windows: Vec<WindowReport>,
    /// Dimension of `𝒱^{λ_max}`, the constant coefficient on the apartment.
    pub coefficient_dim: i64,
    pub dims_match: bool,
    pub exact: bool,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let nx = parent[y];
        parent[y] = r;
        y = nx;
    }
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Rank over Q.
pub fn rank_q(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let piv = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &piv;
                for k in c..cols {
                    let t = &f * &m[rank][k];
                    m[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Least generator of `Z_p^×` modulo `p²`, with `−1` added for `p = 2`.
fn unit_generators(p: u32) -> Vec<i64> {
    if p == 2 {
        return vec![-1, 5];
    }
    let m = (p * p) as u64;
    let order = |g: u64| (1..=m).find(|&k| (0..k).fold(1u64, |acc, _| acc * g % m) == 1).unwrap();
    vec![(2..m).find(|&g| g % p as u64 != 0 && order(g) == (p * (p - 1)) as u64).unwrap() as i64]
}

fn union_find_orbits(
    items: &[(usize, usize)],
    gens: &[Vec<usize>],
    key: impl Fn(usize, usize) -> (usize, usize),
) -> Option<(Vec<usize>, usize)> {
    let index: HashMap<(usize, usize), usize> = items.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut parent: Vec<usize> = (0..items.len()).collect();
    for img in gens {
        for (i, &(a, b)) in items.iter().enumerate() {
            let j = *index.get(&key(img[a], img[b]))?;
            union(&mut parent, i, j);
        }
    }
    let roots: Vec<usize> = (0..items.len()).map(|i| find(&mut parent, i)).collect();
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in &roots {
        let next = ids.len();
        ids.entry(r).or_insert(next);
    }
    Some((roots.iter().map(|r| ids[r]).collect(), ids.len()))
}

fn generator_images(patch: &BuildingPatch, gens: &[QpMatrix], limit: usize) -> Result<Vec<Vec<usize>>> {
    gens.iter()
        .map(|g| {
            (0..patch.vertex_count())
                .map(|v| {
                    if patch.vertices[v].dist > limit {
                        return Ok(usize::MAX);
                    }
                    match patch.act_on_vertex(g, v)? {
                        Some(w) if patch.vertices[w].dist == patch.vertices[v].dist => Ok(w),
                        _ => Err(CharError::BoundaryContamination {
                            radius: patch.radius,
                            reason: "a generator of the stabilizer leaves the patch".into(),
                        }),
                    }
                })
                .collect()
        })
        .collect()
}

fn is_diagonal(patch: &BuildingPatch, v: usize) -> bool {
    let k = patch.key(v);
    let n = k.n();
    (0..n).all(|i| (0..n).all(|j| i == j || k.entries[j * n + i] == 0))
}

fn apartment_cells(patch: &BuildingPatch, window: usize) -> Vec<usize> {
    patch
        .simplices
        .iter()
        .map(|layer| layer.iter().filter(|s| in_window(patch, s, window) && s.iter().all(|&v| is_diagonal(patch, v))).count())
        .collect()
}

/// Compares the `λ_max`-isotypic part of the chain complex with the chain complex of the
/// truncated standard apartment with constant coefficients, on the windows `R` and
/// `R − 1`, and checks exactness by exact rank computations. Implemented for `N = 2`.
///
/// For `e = 2` the patch must be centred on the standard chamber: `λ_max` is `ρ₀^{⊗2}`
/// on its Iwahori subgroup `I`, and after untwisting by `ρ₀∘det` the isotypic part is the
/// `I`-invariant part, spanned by orbit sums. For `e = 1` the patch must be centred on the
/// standard vertex; the degree-0 isotypic part is `Σ_v ⟨ρ₀, 𝒱_v⟩_{K∩K_v}` over the
/// `K`-orbits of vertices.
pub fn apartment_isotypic_check(cs: &CoefficientSystem, patch: &BuildingPatch, radius: usize) -> Result<ApartmentReport> {
    if cs.n() != 2 {
        return Err(CharError::UnsupportedShape(format!("apartment check for N = {}", cs.n())));
    }
    if radius < 1 || patch.radius < radius + 1 {
        return Err(CharError::BoundaryContamination {
            radius: patch.radius,
            reason: format!("window {radius} needs radius ≥ 1 and a patch of radius {}", radius + 1),
        });
    }
    let p = cs.p();
    let k = patch.vertices[0].lattice.k;
    let base = if cs.spec.e == 2 { vec![1, 1] } else { vec![2] };
    let std = Simplex::standard(p, k, &base)?;
    if patch.locate(&std).as_deref() != Some(patch.base.as_slice()) {
        return Err(CharError::InvalidSpec(format!("patch must be centred on the standard simplex of type {base:?}")));
    }
    let windows: Vec<usize> = if radius >= 2 { vec![radius, radius - 1] } else { vec![radius] };
    let mut reports = Vec::new();
    for &w in &windows {
        reports.push(if cs.spec.e == 2 { iwahori_window(patch, p, w)? } else { vertex_window(cs, patch, w)? });
    }
    let dims_match = reports.iter().all(|r| r.isotypic_dims.iter().zip(&r.apartment_cells).all(|(&a, &b)| a == b as i64));
    let exact = reports.iter().all(|r| r.homology == r.expected_homology);
    Ok(ApartmentReport { radius, windows: reports, coefficient_dim: 1, dims_match, exact })
}

fn iwahori_window(patch: &BuildingPatch, p: u32, window: usize) -> Result<WindowReport> {
    let q = |x: i64| btchar_building::q(x);
    let mut gens = vec![
        QpMatrix::from_fn(2, 2, |i, j| if i == j || (i, j) == (1, 0) { q(1) } else { q(0) }),
        QpMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                q(1)
            } else if (i, j) == (0, 1) {
                q(p as i64)
            } else {
                q(0)
            }
        }),
    ];
    for r in unit_generators(p) {
        gens.push(QpMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                if i == 0 {
                    q(r)
                } else {
                    q(1)
                }
            } else {
                q(0)
            }
        }));
        gens.push(QpMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                if i == 1 {
                    q(r)
                } else {
                    q(1)
                }
            } else {
                q(0)
            }
        }));
    }
    let imgs = generator_images(patch, &gens, window + 1)?;
    let dist = |v: usize| patch.vertices[v].dist;
    let verts: Vec<(usize, usize)> = (0..patch.vertex_count()).filter(|&v| dist(v) <= window).map(|v| (v, v)).collect();
    let oriented: Vec<(usize, usize)> =
        verts.iter().flat_map(|&(v, _)| patch.adjacency[v].iter().map(move |&w| (v, w))).collect();
    let edges: Vec<(usize, usize)> =
        patch.simplices[1].iter().filter(|s| in_window(patch, s, window)).map(|s| (s[0], s[1])).collect();
    let contaminated = || CharError::BoundaryContamination { radius: patch.radius, reason: "orbit leaves the window".into() };
    let (_, nv) = union_find_orbits(&verts, &imgs, |a, b| (a, b)).ok_or_else(contaminated)?;
    let (oe_orbit, noe) = union_find_orbits(&oriented, &imgs, |a, b| (a, b)).ok_or_else(contaminated)?;
    let (e_orbit, ne) = union_find_orbits(&edges, &imgs, |a, b| (a.min(b), a.max(b))).ok_or_else(contaminated)?;
    let oe_index: HashMap<(usize, usize), usize> = oriented.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // relation orbit sums, and boundary orbit sums, in orbit-sum coordinates
    let coords = |full: &HashMap<usize, i64>| -> Result<Vec<i64>> {
        let mut row = vec![None; noe];
        for (i, &o) in oe_orbit.iter().enumerate() {
            let c = full.get(&i).copied().unwrap_or(0);
            match row[o] {
                None => row[o] = Some(c),
                Some(x) if x != c => return Err(CharError::Disagreement("orbit sum is not invariant".into())),
                _ => {}
            }
        }
        Ok(row.into_iter().map(|x| x.unwrap_or(0)).collect())
    };
    let mut vert_orbit_sums: Vec<HashMap<usize, i64>> = vec![HashMap::new(); nv];
    let (v_orbit, _) = union_find_orbits(&verts, &imgs, |a, b| (a, b)).ok_or_else(contaminated)?;
    for (i, &(v, _)) in verts.iter().enumerate() {
        for &w in &patch.adjacency[v] {
            *vert_orbit_sums[v_orbit[i]].entry(oe_index[&(v, w)]).or_default() += 1;
        }
    }
    let mut edge_orbit_sums: Vec<HashMap<usize, i64>> = vec![HashMap::new(); ne];
    for (i, &(v, w)) in edges.iter().enumerate() {
        let s = &mut edge_orbit_sums[e_orbit[i]];
        *s.entry(oe_index[&(w, v)]).or_default() -= 1;
        *s.entry(oe_index[&(v, w)]).or_default() -= 1;
    }
    let rel: Vec<Vec<i64>> = vert_orbit_sums.iter().map(&coords).collect::<Result<_>>()?;
    let bd: Vec<Vec<i64>> = edge_orbit_sums.iter().map(&coords).collect::<Result<_>>()?;
    let rank_rel = rank_q(&rel);
    let all: Vec<Vec<i64>> = rel.iter().chain(&bd).cloned().collect();
    let rank_bd = rank_q(&all) - rank_rel;
    let d0 = (noe - rank_rel) as i64;
    let d1 = ne as i64;
    let apt = apartment_cells(patch, window);
    Ok(WindowReport {
        window,
        isotypic_dims: vec![d0, d1],
        apartment_cells: apt,
        homology: vec![d0 - rank_bd as i64, d1 - rank_bd as i64],
        expected_homology: vec![1, 0],
    })
}

fn vertex_window(cs: &CoefficientSystem, patch: &BuildingPatch, window: usize) -> Result<WindowReport> {
    let p = cs.p();
    let q = |x: i64| btchar_building::q(x);
    // K = GL_2(o) is generated by its Iwahori subgroup and the Weyl element
    let mut gens = vec![
        QpMatrix::from_fn(2, 2, |i, j| if i != j { q(1) } else { q(0) }),
        QpMatrix::from_fn(2, 2, |i, j| if i == j || (i, j) == (1, 0) { q(1) } else { q(0) }),
    ];
    for r in unit_generators(p) {
        gens.push(QpMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                if i == 0 {
                    q(r)
                } else {
                    q(1)
                }
            } else {
                q(0)
            }
        }));
    }
    let imgs = generator_images(patch, &gens, window)?;
    let verts: Vec<(usize, usize)> =
        (0..patch.vertex_count()).filter(|&v| patch.vertices[v].dist <= window).map(|v| (v, v)).collect();
    let contaminated = || CharError::BoundaryContamination { radius: patch.radius, reason: "orbit leaves the window".into() };
    let (_, nv) = union_find_orbits(&verts, &imgs, |a, b| (a, b)).ok_or_else(contaminated)?;
    if nv != window + 1 {
        return Err(CharError::Disagreement(format!("{nv} vertex orbits of K within distance {window}")));
    }
    // ⟨ρ₀ at diag(p^d, 1)·v₀, ρ₀⟩ over the image {(a, d, b, c)} of K ∩ K_v, d ≥ 1
    let (data, chi) = cs.rho0();
    let m = data.table.modulus;
    let mut sum = Cyclo::zero(m);
    let pu = p as u8;
    for a in 1..pu {
        for d in 1..pu {
            for b in 0..pu {
                for c in 0..pu {
                    let x = data.value(chi, &[a, b, 0, d])?;
                    let y = data.value(chi, &[a, 0, c, d])?;
                    sum = sum.add(&x.mul(&y.conj()));
                }
            }
        }
    }
    let h = ((p - 1) * (p - 1) * p * p) as i64;
    let mult = sum
        .as_integer()
        .filter(|s| s % h == 0)
        .map(|s| s / h)
        .ok_or_else(|| CharError::Disagreement("non-integral multiplicity".into()))?;
    let d0 = 1 + mult * window as i64;
    Ok(WindowReport {
        window,
        isotypic_dims: vec![d0, 0],
        apartment_cells: vec![1, 0],
        homology: vec![d0, 0],
        expected_homology: vec![1, 0],
    })
}
