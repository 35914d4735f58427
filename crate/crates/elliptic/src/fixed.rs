//! Fixed-point subcomplexes of an element in a finite building patch.

use num_rational::Ratio;
use serde::Serialize;

use btchar_building::{order_of_simplex, BuildingPatch, HereditaryOrder, Lattice, Point, QpMatrix, Simplex};

use crate::analyze::EllipticReport;
use crate::error::{EllipticError, Result};

/// A simplex `σ` with `γσ = σ`, and the fixed part `σ(γ)`: the convex hull of the
/// barycenters of the `γ`-orbits on the vertices of `σ`.
#[derive(Clone, Debug, Serialize)]
pub struct FixedCell {
    /// Patch indices, sorted.
    pub vertices: Vec<usize>,
    /// Vertex orbits of `γ`, each sorted, ordered by least element.
    pub orbits: Vec<Vec<usize>>,
    /// `dim σ(γ) = #orbits − 1`.
    pub fixed_dim: usize,
    #[serde(skip)]
    pub orbit_barycenters: Vec<Point>,
}

impl FixedCell {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedComplex {
    pub radius: usize,
    /// Largest distance from the base reached by a fixed cell.
    pub reach: usize,
    /// The fixed cells lie strictly inside radius `R − 1`.
    pub complete: bool,
    /// Ordered by dimension, then by vertex list.
    pub cells: Vec<FixedCell>,
}

impl FixedComplex {
    pub fn count(&self, dim: usize) -> usize {
        self.cells.iter().filter(|c| c.dim() == dim).count()
    }

    pub fn require_complete(self) -> Result<Self> {
        if self.complete {
            Ok(self)
        } else {
            Err(EllipticError::PatchTooSmall { reach: self.reach, radius: self.radius })
        }
    }
}

/// Images of the patch vertices under `g` (`None` when the image leaves the patch).
pub fn vertex_images(g: &QpMatrix, patch: &BuildingPatch) -> Result<Vec<Option<usize>>> {
    (0..patch.vertex_count()).map(|i| Ok(patch.act_on_vertex(g, i)?)).collect()
}

fn orbits(img: &[Option<usize>], verts: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; verts.len()];
    let mut out = Vec::new();
    for s in 0..verts.len() {
        if seen[s] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut cur = verts[s];
        loop {
            let pos = verts.iter().position(|&v| v == cur).expect("orbit stays in the simplex");
            if seen[pos] {
                break;
            }
            seen[pos] = true;
            orbit.push(cur);
            cur = img[cur].expect("fixed simplex maps into the patch");
        }
        orbit.sort();
        out.push(orbit);
    }
    out.sort();
    out
}

/// All simplices of the patch globally stabilized by `γ` (tested as a permutation of
/// their vertex classes, which is equivalent to `γ` normalizing their order).
///
/// Fails with `PatchTooSmall` when the fixed cells touch the boundary of the patch or
/// none is found.
pub fn fixed_point_set(gamma: &QpMatrix, patch: &BuildingPatch) -> Result<FixedComplex> {
    let img = vertex_images(gamma, patch)?;
    let mut cells = Vec::new();
    for layer in &patch.simplices {
        for s in layer {
            let mut image: Vec<usize> = match s.iter().map(|&v| img[v]).collect::<Option<Vec<_>>>() {
                Some(v) => v,
                None => continue,
            };
            image.sort();
            if image != *s {
                continue;
            }
            let orbits = orbits(&img, s);
            let orbit_barycenters = orbits
                .iter()
                .map(|o| o.iter().map(|&v| (patch.key(v).clone(), Ratio::new(1, o.len() as i64))).collect())
                .collect();
            cells.push(FixedCell { vertices: s.clone(), fixed_dim: orbits.len() - 1, orbits, orbit_barycenters });
        }
    }
    let reach = cells.iter().map(|c| patch.reach(&c.vertices)).max();
    match reach {
        None => Err(EllipticError::PatchTooSmall { reach: patch.radius, radius: patch.radius }),
        Some(r) if r >= patch.radius => Err(EllipticError::PatchTooSmall { reach: r, radius: patch.radius }),
        Some(r) => Ok(FixedComplex { radius: patch.radius, reach: r, complete: r + 1 < patch.radius, cells }),
    }
}

/// `γ𝔄γ⁻¹ = 𝔄`, decided on the order itself.
pub fn normalizes(gamma: &QpMatrix, a: &HereditaryOrder) -> Result<bool> {
    let ginv = gamma.inverse()?;
    let cols: Vec<_> = a.ring_basis().iter().map(|x| gamma.mul(x).mul(&ginv).vec()).collect();
    let conj = Lattice::from_generators(a.p(), a.ring.k, &QpMatrix::from_columns(&cols))?;
    Ok(conj == a.ring)
}

/// Simplices of the patch whose hereditary order is normalized by `γ`, by exhaustive
/// search over the patch.
pub fn brute_force_normalized(gamma: &QpMatrix, patch: &BuildingPatch) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for layer in &patch.simplices {
        for s in layer {
            if normalizes(gamma, &order_of_simplex(&patch.simplex(s)?)?)? {
                out.push(s.clone());
            }
        }
    }
    Ok(out)
}

/// `𝔄_γ` and `x_γ`, confirmed by two routes.
#[derive(Clone, Debug)]
pub struct NormalizedOrder {
    pub order: HereditaryOrder,
    pub simplex: Simplex,
    pub x_gamma: Point,
}

/// The constructive `𝔄_γ` of the report, checked against the unique simplex of the
/// patch whose order `γ` normalizes.
pub fn order_normalized_by(report: &EllipticReport, patch: &BuildingPatch) -> Result<NormalizedOrder> {
    if !report.elliptic_regular {
        return Err(EllipticError::NotElliptic);
    }
    if report.minimal_over_f != Some(true) {
        return Err(EllipticError::NotMinimal);
    }
    let (order, simplex, x) = match (&report.order_a_gamma, &report.sigma_gamma, &report.x_gamma) {
        (Some(a), Some(s), Some(x)) => (a.clone(), s.clone(), x.clone()),
        _ => return Err(EllipticError::Indeterminate),
    };
    let found = brute_force_normalized(&report.gamma, patch)?;
    let reach = found.iter().map(|s| patch.reach(s)).max();
    match reach {
        None => return Err(EllipticError::PatchTooSmall { reach: patch.radius, radius: patch.radius }),
        Some(r) if r >= patch.radius => return Err(EllipticError::PatchTooSmall { reach: r, radius: patch.radius }),
        _ => {}
    }
    if found.len() != 1 {
        return Err(EllipticError::OracleDisagreement(format!(
            "{} normalized simplices in the patch for a minimal element",
            found.len()
        )));
    }
    let brute = order_of_simplex(&patch.simplex(&found[0])?)?;
    if brute.key() != order.key() {
        return Err(EllipticError::OracleDisagreement("constructive and exhaustive normalized orders differ".into()));
    }
    Ok(NormalizedOrder { order, simplex, x_gamma: x })
}
