//! The level-zero coefficient system `σ ↦ 𝒱_σ`: one datum per `G`-orbit of simplices,
//! transported to individual simplices by adapted bases.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use btchar_building::{pow_q, reduce_q, val_q, BuildingPatch, LatticeChain, QpMatrix, Simplex, Q};
use btchar_finite_gl::{generalized_steinberg, gl_order, load_or_compute, Cyclo, FiniteGLCharacter, GlData, DEFAULT_BUDGET};
use serde::Serialize;

use crate::error::{CharError, Result};
use crate::spec::{DiscreteSeriesSpec, ExtendedAction};

/// Where finite character tables come from.
#[derive(Clone, Debug)]
pub struct TableOptions {
    /// Bound on `|GL(m, q)|` for every table needed.
    pub budget: u64,
    pub cache_dir: Option<PathBuf>,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { budget: DEFAULT_BUDGET, cache_dir: None }
    }
}

/// Externally supplied traces of the `κ`-part for positive level, evaluated on `γ`
/// written in the adapted coordinates of a simplex of the given composition.
pub trait TraceFactorization: Send + Sync {
    fn kappa_trace(&self, gamma: &QpMatrix, composition: &[usize], modulus: u32) -> Result<Cyclo>;
}

/// Least rotation of a composition, the least offset reaching it, and the number of
/// rotations fixing it.
pub fn canonical_composition(comp: &[usize]) -> (Vec<usize>, usize, usize) {
    let e = comp.len();
    let rot = |r: usize| -> Vec<usize> { (0..e).map(|i| comp[(i + r) % e]).collect() };
    let (best, off) = (0..e).map(|r| (rot(r), r)).min().expect("nonempty composition");
    let sym = (0..e).filter(|&r| rot(r) == comp).count();
    (best, off, sym)
}

/// All compositions of `n` in canonical (least-rotation) form, ordered.
pub fn composition_types(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for m in 1..=rest {
            cur.push(m);
            rec(rest - m, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    rec(n, &mut Vec::new(), &mut all);
    let mut out: Vec<Vec<usize>> = all.iter().map(|c| canonical_composition(c).0).collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out.dedup();
    out
}

/// Residues of a p-integral matrix, row-major, as field indices of `F_p`.
pub fn residue_matrix(m: &QpMatrix, p: u32) -> Result<Vec<u8>> {
    m.a.iter()
        .map(|x| match val_q(p, x) {
            Some(v) if v < 0 => Err(CharError::Disagreement("matrix is not p-integral".into())),
            _ => Ok(reduce_q(x, p as u64) as u8),
        })
        .collect()
}

/// `Π` for the standard chain with `N/m` blocks of size `m`: `Π e_j = e_{j+m}`, wrapping
/// with a factor `p`, so `Π Λ_i = Λ_{i+1}` and `Π^{N/m} = p`.
pub fn principal_uniformizer(p: u32, n: usize, m: usize) -> QpMatrix {
    QpMatrix::from_fn(n, n, |i, j| {
        if j + m < n {
            Q::from_integer((i == j + m) as i128)
        } else if i + n == j + m {
            Q::from_integer(p as i128)
        } else {
            Q::from_integer(0)
        }
    })
}

/// The datum on one orbit of simplices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientDatum {
    /// Canonical composition of the orbit.
    pub composition: Vec<usize>,
    pub simplex_dim: usize,
    /// Rotations of the composition onto itself.
    pub rotations: usize,
    /// `|∏ GL(m_i, q)|`, the order of the reductive quotient of the stabilizer.
    pub quotient_order: u64,
    /// Labels of the block characters `λ_{m_i}`.
    pub labels: Vec<String>,
    pub dim: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitDatum {
    #[serde(flatten)]
    pub datum: CoefficientDatum,
    /// Simplices of this orbit in the patch.
    pub count: usize,
}

#[derive(Clone)]
struct Block {
    data: GlData,
    chi: FiniteGLCharacter,
}

/// A resolved discrete-series datum together with its coefficient system.
#[derive(Clone)]
pub struct CoefficientSystem {
    pub spec: DiscreteSeriesSpec,
    /// Cyclotomic modulus of every value produced.
    pub modulus: u32,
    twist: Cyclo,
    sign: Cyclo,
    rho0: Block,
    blocks: BTreeMap<usize, Block>,
    hook: Option<Arc<dyn TraceFactorization>>,
    /// Orbit data over the patch the system was built on.
    pub orbits: Vec<OrbitDatum>,
    pub radius: Option<usize>,
}

impl fmt::Debug for CoefficientSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientSystem")
            .field("spec", &self.spec)
            .field("modulus", &self.modulus)
            .field("orbits", &self.orbits)
            .field("radius", &self.radius)
            .finish()
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / num_integer::gcd(a, b) * b
}

/// `build_coefficient_system`: the resolved system together with its orbit data on
/// the patch.
pub fn build_coefficient_system(
    spec: &DiscreteSeriesSpec,
    patch: &BuildingPatch,
    opts: &TableOptions,
) -> Result<CoefficientSystem> {
    let mut cs = CoefficientSystem::resolve(spec, opts)?;
    cs.orbits = cs.orbit_data(patch)?;
    cs.radius = Some(patch.radius);
    Ok(cs)
}

impl CoefficientSystem {
    /// Loads the finite tables and fixes the block characters.
    pub fn resolve(spec: &DiscreteSeriesSpec, opts: &TableOptions) -> Result<CoefficientSystem> {
        spec.validate()?;
        let cache = opts.cache_dir.as_deref();
        let small = load_or_compute(spec.block(), spec.p, opts.budget, cache)?;
        let chi = small.character(&spec.rho0)?.clone();
        if !chi.cuspidal {
            return Err(CharError::NotCuspidal(spec.rho0.clone()));
        }
        let rho0 = Block { data: small, chi };
        let mut blocks = BTreeMap::new();
        if spec.e == 1 {
            blocks.insert(spec.n, rho0.clone());
        } else {
            for m in 1..=spec.n {
                let data = load_or_compute(m, spec.p, opts.budget, cache)?;
                let chi = generalized_steinberg(&data, m, &rho0.data, &rho0.chi)?;
                let expected = (spec.p as u64).pow((m * (m - 1) / 2) as u32);
                if chi.degree != expected {
                    return Err(CharError::Disagreement(format!(
                        "generalized Steinberg of GL({m}) has degree {}, expected {expected}",
                        chi.degree
                    )));
                }
                blocks.insert(m, Block { data, chi });
            }
        }
        let mut modulus = lcm(2, spec.twist.order);
        for b in blocks.values().chain([&rho0]) {
            modulus = lcm(modulus, b.data.table.modulus);
        }
        let twist = Cyclo::zeta(modulus, spec.twist.exponent * (modulus / spec.twist.order) as i64);
        let sign = if spec.e == spec.n && spec.n.is_multiple_of(2) {
            let minus_one = vec![(spec.p - 1) as u8];
            rho0.data.value(&rho0.chi, &minus_one)?.embed(modulus).scale(-1)
        } else {
            Cyclo::from_int(modulus, 1)
        };
        Ok(CoefficientSystem {
            spec: spec.clone(),
            modulus,
            twist,
            sign,
            rho0,
            blocks,
            hook: None,
            orbits: Vec::new(),
            radius: None,
        })
    }

    pub fn with_hook(mut self, hook: Arc<dyn TraceFactorization>) -> Self {
        self.hook = Some(hook);
        self
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// `ζ` with `χ_t(p) = ζ`.
    pub fn twist_value(&self) -> &Cyclo {
        &self.twist
    }

    /// The scalar by which `Π` acts under the signed extension.
    pub fn signed_factor(&self) -> &Cyclo {
        &self.sign
    }

    /// The cuspidal `ρ₀` and its table.
    pub fn rho0(&self) -> (&GlData, &FiniteGLCharacter) {
        (&self.rho0.data, &self.rho0.chi)
    }

    /// `λ_m`, the block character on `GL(m, q)`.
    pub fn block_character(&self, m: usize) -> Option<(&GlData, &FiniteGLCharacter)> {
        self.blocks.get(&m).map(|b| (&b.data, &b.chi))
    }

    /// Orbits of simplices with nonzero coefficients: the vertices for `e = 1`, every
    /// orbit for `e = N`.
    pub fn in_support(&self, canonical: &[usize]) -> bool {
        canonical.iter().all(|m| self.blocks.contains_key(m))
    }

    pub fn support_types(&self) -> Vec<Vec<usize>> {
        composition_types(self.n()).into_iter().filter(|c| self.in_support(c)).collect()
    }

    /// The datum of an orbit given by its canonical composition.
    pub fn datum(&self, canonical: &[usize]) -> CoefficientDatum {
        let q = self.p() as u64;
        let (_, _, rotations) = canonical_composition(canonical);
        let support = self.in_support(canonical);
        CoefficientDatum {
            composition: canonical.to_vec(),
            simplex_dim: canonical.len() - 1,
            rotations,
            quotient_order: canonical.iter().map(|&m| gl_order(m, q)).product(),
            labels: if support { canonical.iter().map(|m| self.blocks[m].chi.label.clone()).collect() } else { Vec::new() },
            dim: if support { canonical.iter().map(|m| self.blocks[m].chi.degree).product() } else { 0 },
        }
    }

    /// Orbit data counted over a patch.
    pub fn orbit_data(&self, patch: &BuildingPatch) -> Result<Vec<OrbitDatum>> {
        let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for layer in &patch.simplices {
            for s in layer {
                let comp = patch.simplex(s)?.chain.composition();
                *counts.entry(canonical_composition(&comp).0).or_default() += 1;
            }
        }
        Ok(composition_types(self.n())
            .into_iter()
            .map(|c| OrbitDatum { count: counts.get(&c).copied().unwrap_or(0), datum: self.datum(&c) })
            .collect())
    }

    /// The canonical composition of a simplex and an adapted basis `x` carrying the
    /// standard chain of that composition onto the simplex's chain.
    pub fn transporter(&self, s: &Simplex) -> Result<(Vec<usize>, QpMatrix)> {
        let (canon, off, _) = canonical_composition(&s.chain.composition());
        let x = s.chain.rotate(off).adapted_basis()?;
        Ok((canon, x))
    }

    /// `Tr(γ, 𝒱_σ)` for `γ` in the stabilizer of `σ`; zero off the support.
    pub fn trace(&self, gamma: &QpMatrix, s: &Simplex) -> Result<Cyclo> {
        let (canon, x) = self.transporter(s)?;
        if !self.in_support(&canon) {
            return Ok(Cyclo::zero(self.modulus));
        }
        let y = x.inverse()?.mul(gamma).mul(&x);
        let r = LatticeChain::standard(self.p(), s.chain.k(), &canon)?.normalizer_shift(&y)?.ok_or(CharError::NotFixed)?;
        self.trace_standard(&canon, &y, r)
    }

    /// `Tr(y, 𝒱)` on the standard simplex of a canonical composition, for `y` with
    /// `y Λ_i = Λ_{i+r}`.
    pub fn trace_standard(&self, canon: &[usize], y: &QpMatrix, r: i64) -> Result<Cyclo> {
        let p = self.p();
        let n = self.n();
        let ec = canon.len() as i64;
        if !self.in_support(canon) {
            return Ok(Cyclo::zero(self.modulus));
        }
        let uniform = canon.iter().all(|&m| m == canon[0]);
        let w = if r.rem_euclid(ec) == 0 {
            y.scale(pow_q(p, -r.div_euclid(ec)))
        } else if uniform {
            principal_uniformizer(p, n, canon[0]).pow(-r)?.mul(y)
        } else {
            return Err(CharError::Disagreement(format!("shift {r} is incompatible with the composition {canon:?}")));
        };
        let res = residue_matrix(&w, p)?;
        let mut val = Cyclo::from_int(self.modulus, 1);
        let mut off = 0;
        for &m in canon {
            let blk: Vec<u8> =
                (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| res[(off + i) * n + off + j]).collect();
            let b = &self.blocks[&m];
            val = val.mul(&b.data.value(&b.chi, &blk)?.embed(self.modulus));
            off += m;
        }
        if r.rem_euclid(ec) != 0 {
            let dim: u64 = canon.iter().map(|m| self.blocks[m].chi.degree).product();
            if dim != 1 {
                return Err(CharError::UnsupportedShape(format!("rotation on a coefficient space of dimension {dim}")));
            }
            match self.spec.extension {
                ExtendedAction::Unset => return Err(CharError::ExtendedActionNeeded),
                ExtendedAction::Monomial => {}
                ExtendedAction::Signed => {
                    if r.rem_euclid(2) == 1 {
                        val = val.mul(&self.sign);
                    }
                }
            }
        }
        let dv = y.det_val(p)?;
        val = val.mul(&self.twist_power(dv));
        if self.spec.level > 0 {
            let hook = self.hook.as_ref().ok_or(CharError::UnsupportedLevel(self.spec.level))?;
            val = val.mul(&hook.kappa_trace(y, canon, self.modulus)?);
        }
        Ok(val)
    }

    /// `χ_t(p)^k`.
    pub fn twist_power(&self, k: i64) -> Cyclo {
        let m = self.modulus as i64;
        let step = self.spec.twist.exponent * (m / self.spec.twist.order as i64);
        Cyclo::zeta(self.modulus, (step * k).rem_euclid(m))
    }

    /// The central character at the scalar `z`.
    pub fn central_character(&self, z: &Q) -> Result<Cyclo> {
        let p = self.p();
        let a = val_q(p, z).ok_or_else(|| CharError::InvalidSpec("central element must be nonzero".into()))?;
        let u = z * pow_q(p, -a);
        let ubar = reduce_q(&u, p as u64) as u8;
        let (data, chi) = self.rho0();
        let b = self.spec.block();
        let mut scalar = vec![0u8; b * b];
        for i in 0..b {
            scalar[i * b + i] = ubar;
        }
        let v = data.value(chi, &scalar)?.embed(self.modulus);
        let omega = if self.spec.e == 1 {
            let d = chi.degree as i64;
            if v.c.iter().any(|x| x % d != 0) {
                return Err(CharError::Disagreement("ρ₀ is not scalar on the center".into()));
            }
            Cyclo { m: v.m, c: v.c.iter().map(|x| x / d).collect() }
        } else {
            (0..self.n()).fold(Cyclo::from_int(self.modulus, 1), |acc, _| acc.mul(&v))
        };
        Ok(omega.mul(&self.twist_power(a * self.n() as i64)))
    }
}
