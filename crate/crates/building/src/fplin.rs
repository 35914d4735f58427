//! Linear algebra over F_p on small vectors.

use btchar_padic::mod_inverse;

pub type FpVec = Vec<u32>;

/// Row-reduced echelon basis of the span.
pub fn rref(p: u32, vecs: &[FpVec]) -> Vec<FpVec> {
    let Some(n) = vecs.first().map(|v| v.len()) else {
        return Vec::new();
    };
    let mut rows: Vec<FpVec> = vecs.iter().map(|v| v.iter().map(|x| x % p).collect()).collect();
    let mut out: Vec<FpVec> = Vec::new();
    let mut col = 0;
    while col < n && !rows.is_empty() {
        if let Some(i) = rows.iter().position(|r| r[col] != 0) {
            let mut piv = rows.swap_remove(i);
            let inv = mod_inverse(piv[col] as u64, p as u64).unwrap() as u32;
            for x in piv.iter_mut() {
                *x = (*x as u64 * inv as u64 % p as u64) as u32;
            }
            for r in rows.iter_mut().chain(out.iter_mut()) {
                let f = r[col];
                if f != 0 {
                    for j in 0..n {
                        r[j] = (r[j] + p - (f as u64 * piv[j] as u64 % p as u64) as u32) % p;
                    }
                }
            }
            out.push(piv);
            rows.retain(|r| r.iter().any(|&x| x != 0));
        }
        col += 1;
    }
    out.sort_by_key(|r| r.iter().position(|&x| x != 0));
    out
}

pub fn rank(p: u32, vecs: &[FpVec]) -> usize {
    rref(p, vecs).len()
}

pub fn in_span(p: u32, basis: &[FpVec], v: &FpVec) -> bool {
    let mut all = basis.to_vec();
    all.push(v.clone());
    rank(p, &all) == rank(p, basis)
}

/// Extend `base` (independent) by vectors from `pool` to a basis of `span(base ∪ pool)`;
/// returns only the added vectors.
pub fn extend_basis(p: u32, base: &[FpVec], pool: &[FpVec]) -> Vec<FpVec> {
    let mut cur = base.to_vec();
    let mut added = Vec::new();
    for v in pool {
        if !in_span(p, &cur, v) {
            cur.push(v.clone());
            added.push(v.clone());
        }
    }
    added
}

/// All subspaces of F_p^n of dimension `d`, each as an echelon basis.
pub fn subspaces_of_dim(p: u32, n: usize, d: usize) -> Vec<Vec<FpVec>> {
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    choose(n, d, 0, &mut pivots, &mut |piv: &[usize]| {
        // free positions: row i, column j > piv[i], j not a pivot
        let free: Vec<(usize, usize)> =
            (0..d).flat_map(|i| ((piv[i] + 1)..n).filter(|j| !piv.contains(j)).map(move |j| (i, j))).collect();
        let total = (p as u64).pow(free.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![0u32; n]; d];
            for (i, &c) in piv.iter().enumerate() {
                rows[i][c] = 1;
            }
            let mut c = code;
            for &(i, j) in &free {
                rows[i][j] = (c % p as u64) as u32;
                c /= p as u64;
            }
            out.push(rows);
        }
    });
    out
}

/// All nonzero proper subspaces of F_p^n.
pub fn proper_subspaces(p: u32, n: usize) -> Vec<Vec<FpVec>> {
    (1..n).flat_map(|d| subspaces_of_dim(p, n, d)).collect()
}

fn choose(n: usize, d: usize, start: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if acc.len() == d {
        f(acc);
        return;
    }
    for i in start..n {
        acc.push(i);
        choose(n, d, i + 1, acc, f);
        acc.pop();
    }
}

/// Apply an n×n matrix over F_p (row-major) to a vector.
pub fn apply(p: u32, m: &[u32], v: &FpVec) -> FpVec {
    let n = v.len();
    (0..n).map(|i| ((0..n).map(|j| m[i * n + j] as u64 * v[j] as u64).sum::<u64>() % p as u64) as u32).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_counts() {
        // Gaussian binomials: [3 choose 1]_2 = 7, [3 choose 2]_3 = 13, [2 choose 1]_5 = 6
        assert_eq!(subspaces_of_dim(2, 3, 1).len(), 7);
        assert_eq!(subspaces_of_dim(3, 3, 2).len(), 13);
        assert_eq!(subspaces_of_dim(5, 2, 1).len(), 6);
        assert_eq!(proper_subspaces(2, 3).len(), 14);
    }

    #[test]
    fn rank_and_span() {
        let v = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        assert_eq!(rank(2, &v), 2);
        assert_eq!(rank(3, &v), 3);
        assert!(in_span(2, &v[..2], &v[2]));
    }
}
