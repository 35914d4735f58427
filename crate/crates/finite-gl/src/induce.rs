//! Parabolic induction, the Gelfand–Graev character, cuspidality and generalized
//! Steinberg characters.

use crate::cyclo::Cyclo;
use crate::error::{FglError, Result};
use crate::group::GlGroup;
use crate::table::{CharacterTable, FiniteGLCharacter};

/// A group together with its character table.
#[derive(Clone, Debug)]
pub struct GlData {
    pub group: GlGroup,
    pub table: CharacterTable,
}

impl GlData {
    pub fn character(&self, label: &str) -> Result<&FiniteGLCharacter> {
        self.table.by_label(label).ok_or_else(|| FglError::UnknownCharacter(label.to_string()))
    }

    /// `χ(m)` for a matrix over F_q given row-major by field indices.
    pub fn value(&self, chi: &FiniteGLCharacter, m: &[u8]) -> Result<Cyclo> {
        let k = self
            .group
            .class_of_mat(m)
            .ok_or_else(|| FglError::InvalidParabolic("matrix is not an element of the group".into()))?;
        Ok(chi.values[k].clone())
    }
}

/// Class function `(|G| / (|H|·|C_k|))·Σ_{h ∈ H ∩ C_k} φ(h)`, the induction of `φ` from a
/// subgroup `H` given by its members.
fn induce_from(g: &GlGroup, members: &[u32], phi: impl Fn(u32) -> Cyclo) -> Result<Vec<Cyclo>> {
    let m = g.exponent;
    let mut sums = vec![Cyclo::zero(m); g.classes.len()];
    for &h in members {
        let k = g.class_of[h as usize] as usize;
        sums[k] = sums[k].add(&phi(h));
    }
    let idx = g.order() as i64 / members.len() as i64;
    sums.into_iter()
        .zip(&g.classes)
        .map(|(s, c)| {
            let t = s.scale(idx);
            if t.c.iter().any(|x| x % c.size as i64 != 0) {
                return Err(FglError::DixonFailed("induced value is not an algebraic integer".into()));
            }
            Ok(Cyclo { m, c: t.c.iter().map(|x| x / c.size as i64).collect() })
        })
        .collect()
}

fn block_starts(comp: &[usize]) -> Vec<usize> {
    let mut s = vec![0];
    for &m in comp {
        s.push(s.last().unwrap() + m);
    }
    s
}

fn block_of(comp: &[usize], i: usize) -> usize {
    let starts = block_starts(comp);
    (0..comp.len()).find(|&b| i < starts[b + 1]).unwrap()
}

/// Elements of the standard parabolic of a composition (block upper triangular).
pub fn parabolic_members(g: &GlGroup, comp: &[usize]) -> Vec<u32> {
    let n = g.n;
    (0..g.order())
        .filter(|&x| {
            let m = g.mat(x);
            (0..n).all(|i| (0..n).all(|j| block_of(comp, i) <= block_of(comp, j) || m[i * n + j] == 0))
        })
        .collect()
}

/// Elements of the unipotent radical of a standard parabolic.
pub fn unipotent_members(g: &GlGroup, comp: &[usize]) -> Vec<u32> {
    let n = g.n;
    parabolic_members(g, comp)
        .into_iter()
        .filter(|&x| {
            let m = g.mat(x);
            (0..n).all(|i| (0..n).all(|j| block_of(comp, i) != block_of(comp, j) || m[i * n + j] == (i == j) as u8))
        })
        .collect()
}

fn diagonal_block(g: &GlGroup, m: &[u8], start: usize, size: usize) -> Vec<u8> {
    let n = g.n;
    (0..size).flat_map(|i| (0..size).map(move |j| m[(start + i) * n + start + j])).collect()
}

/// Result of a parabolic induction.
#[derive(Clone, Debug)]
pub struct Induced {
    pub character: FiniteGLCharacter,
    /// Multiplicity of each irreducible of the table.
    pub decomposition: Vec<i64>,
    /// Set when some inducing character is not cuspidal (advisory only).
    pub not_cuspidal_input: bool,
}

/// `ind_P^G(ρ_1 ⊗ … ⊗ ρ_r)` for the standard parabolic of `comp`, with each `ρ_i` a
/// character of `levi[i] = GL(n_i, q)` inflated trivially over the unipotent radical.
pub fn parabolic_induced_character(big: &GlData, comp: &[usize], levi: &[(&GlData, &FiniteGLCharacter)]) -> Result<Induced> {
    let g = &big.group;
    if comp.iter().sum::<usize>() != g.n || comp.len() != levi.len() || comp.contains(&0) {
        return Err(FglError::InvalidParabolic(format!("composition {comp:?} of {}", g.n)));
    }
    for (&m, (d, _)) in comp.iter().zip(levi) {
        if d.group.n != m || d.group.q != g.q {
            return Err(FglError::InvalidParabolic(format!(
                "Levi factor GL({}, {}) for a block of size {m}",
                d.group.n, d.group.q
            )));
        }
    }
    let starts = block_starts(comp);
    let members = parabolic_members(g, comp);
    let values = induce_from(g, &members, |h| {
        let m = g.mat(h);
        levi.iter().enumerate().fold(Cyclo::from_int(g.exponent, 1), |acc, (b, (d, chi))| {
            let blk = diagonal_block(g, m, starts[b], comp[b]);
            let k = d.group.class_of_mat(&blk).expect("Levi block is invertible");
            acc.mul(&chi.values[k].embed(g.exponent))
        })
    })?;
    let decomposition = big.table.decompose(&values)?;
    let degree = values[0].as_integer().unwrap_or(0) as u64;
    let irreducible = decomposition.iter().map(|m| m * m).sum::<i64>() == 1;
    let generic_mult: i64 = decomposition.iter().zip(&big.table.characters).filter(|(_, c)| c.generic).map(|(m, _)| *m).sum();
    let label = format!(
        "ind[{}]({})",
        comp.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","),
        levi.iter().map(|(_, c)| c.label.clone()).collect::<Vec<_>>().join(",")
    );
    Ok(Induced {
        character: FiniteGLCharacter { label, degree, values, irreducible, cuspidal: false, generic: generic_mult > 0 },
        decomposition,
        not_cuspidal_input: levi.iter().any(|(_, c)| !c.cuspidal),
    })
}

/// The Gelfand–Graev character `ind_U^G ψ`, `ψ(u) = ζ_p^{Tr(Σ u_{i,i+1})}`.
pub fn gelfand_graev(g: &GlGroup) -> Result<Vec<Cyclo>> {
    let n = g.n;
    let p = g.gf.p;
    let m = g.exponent;
    let members = unipotent_members(g, &vec![1; n]);
    induce_from(g, &members, |u| {
        let mat = g.mat(u);
        let mut s = 0u8;
        for i in 0..n.saturating_sub(1) {
            s = g.gf.add(s, mat[i * n + i + 1]);
        }
        let t = g.gf.trace(s) as i64;
        Cyclo::zeta(m, t * (m / p) as i64)
    })
}

/// Marks cuspidal and generic irreducibles.
///
/// Cuspidal: no nonzero vectors fixed by the unipotent radical of any maximal proper
/// standard parabolic, i.e. `Σ_{u ∈ U} χ(u) = 0`. Generic: `⟨χ, Γ⟩ = 1` for the
/// Gelfand–Graev character `Γ`.
pub fn annotate(g: &GlGroup, t: &mut CharacterTable) -> Result<()> {
    let n = g.n;
    let radicals: Vec<Vec<usize>> =
        (1..n).map(|k| unipotent_members(g, &[k, n - k]).iter().map(|&u| g.class_of[u as usize] as usize).collect()).collect();
    let gg = gelfand_graev(g)?;
    let mut flags = Vec::new();
    for c in &t.characters {
        let cusp =
            radicals.iter().all(|classes| classes.iter().fold(Cyclo::zero(t.modulus), |acc, &k| acc.add(&c.values[k])).is_zero());
        let mult =
            t.inner(&c.values, &gg).ok_or_else(|| FglError::DixonFailed("non-integral Gelfand–Graev multiplicity".into()))?;
        if mult > 1 {
            return Err(FglError::DixonFailed(format!("Gelfand–Graev multiplicity {mult} for {}", c.label)));
        }
        flags.push((cusp, mult == 1));
    }
    for (c, (cusp, generic)) in t.characters.iter_mut().zip(flags) {
        c.cuspidal = cusp;
        c.generic = generic;
    }
    Ok(())
}

pub fn cuspidal_list(t: &CharacterTable) -> Vec<FiniteGLCharacter> {
    t.characters.iter().filter(|c| c.cuspidal).cloned().collect()
}

/// Number of Galois orbits of characters of `F_{q^n}^×` not factoring through a norm
/// to a proper subfield: `(1/n)·Σ_{d | n} μ(d)(q^{n/d} − 1)`.
pub fn regular_orbit_count(n: u32, q: u64) -> u64 {
    let mobius = |mut d: u32| -> i64 {
        let mut r = 1;
        let mut f = 2;
        while f * f <= d {
            if d.is_multiple_of(f) {
                d /= f;
                if d.is_multiple_of(f) {
                    return 0;
                }
                r = -r;
            }
            f += 1;
        }
        if d > 1 {
            r = -r;
        }
        r
    };
    let s: i64 = (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| mobius(d) * (q.pow(n / d) as i64 - 1)).sum();
    (s / n as i64) as u64
}

/// The generalized Steinberg character `St(ρ₀, e)`: the unique generic constituent of
/// `ind_P^G ρ₀^{⊗e}`, `P` the standard parabolic with `e` blocks of size `n/e`.
pub fn generalized_steinberg(big: &GlData, e: usize, small: &GlData, rho0: &FiniteGLCharacter) -> Result<FiniteGLCharacter> {
    let n = big.group.n;
    if e == 0 || !n.is_multiple_of(e) || small.group.n != n / e {
        return Err(FglError::InvalidParabolic(format!("e = {e} with a cuspidal of GL({})", small.group.n)));
    }
    if e == 1 {
        return Ok(rho0.clone());
    }
    let comp = vec![n / e; e];
    let levi: Vec<(&GlData, &FiniteGLCharacter)> = (0..e).map(|_| (small, rho0)).collect();
    let ind = parabolic_induced_character(big, &comp, &levi)?;
    let generic: Vec<usize> = ind
        .decomposition
        .iter()
        .enumerate()
        .filter(|(i, &m)| m > 0 && big.table.characters[*i].generic)
        .map(|(i, _)| i)
        .collect();
    if generic.len() != 1 || ind.decomposition[generic[0]] != 1 {
        return Err(FglError::GenericityAmbiguous(generic.len()));
    }
    Ok(big.table.characters[generic[0]].clone())
}
