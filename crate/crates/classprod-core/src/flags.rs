//! Complete flags and triangularizability.
//!
//! Two notions live here. `common_flag_exists` asks for a complete flag over
//! the ground field stabilized by every given matrix — a Borel over GF(q).
//! `triangularizable_over_closure` asks the weaker (and geometrically right)
//! question of whether x and y have a common complete flag over the algebraic
//! closure; by Lie-Kolchin-type reasoning this holds iff the ideal generated
//! by xy - yx inside the enveloping algebra of <x, y> is nilpotent, which is a
//! finite linear-algebra computation over GF(q) itself.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::gf;
use crate::matrix::Mat;

/// A complete flag, presented as one new echelon basis row per dimension:
/// subspace i is the span of rows 0..=i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    pub p: u8,
    pub n: usize,
    pub rows: Vec<Vec<u8>>,
}

/// Reduce `v` against an echelon basis; returns None if it reduces to zero.
fn reduce(p: u8, basis: &[Vec<u8>], v: &[u8]) -> Option<Vec<u8>> {
    let mut v = v.to_vec();
    for b in basis {
        let lead = b.iter().position(|&x| x != 0).unwrap();
        if v[lead] != 0 {
            let f = gf::mul(p, v[lead], gf::inv(p, b[lead]));
            for (vi, &bi) in v.iter_mut().zip(b) {
                *vi = gf::sub(p, *vi, gf::mul(p, f, bi));
            }
        }
    }
    if v.iter().all(|&x| x == 0) {
        None
    } else {
        Some(v)
    }
}

fn normalize_lead(p: u8, v: &[u8]) -> Vec<u8> {
    let lead = v.iter().position(|&x| x != 0).unwrap();
    let inv = gf::inv(p, v[lead]);
    v.iter().map(|&x| gf::mul(p, x, inv)).collect()
}

fn all_nonzero_vectors(p: u8, n: usize) -> Vec<Vec<u8>> {
    let total = (p as usize).pow(n as u32);
    (1..total)
        .map(|mut code| {
            let mut v = vec![0u8; n];
            for slot in v.iter_mut().rev() {
                *slot = (code % p as usize) as u8;
                code /= p as usize;
            }
            v
        })
        .collect()
}

/// All complete flags of GF(p)^n. Sizes grow as the q-factorial: 21 for
/// (n,p) = (3,2), 2080 for (4,3) — fine for the small cases this serves.
pub fn all_flags(p: u8, n: usize) -> Vec<Flag> {
    let vectors = all_nonzero_vectors(p, n);
    // each partial flag carries a canonical key: the reduced echelon basis of
    // every prefix subspace, so two chains collide exactly when every
    // subspace in them agrees
    let mut partial: Vec<(Vec<Vec<u8>>, Vec<Vec<u8>>)> = vec![(Vec::new(), Vec::new())];
    for _dim in 1..n {
        let mut next = Vec::new();
        let mut seen: HashSet<Vec<Vec<u8>>> = HashSet::new();
        for (basis, key) in &partial {
            for v in &vectors {
                if let Some(r) = reduce(p, basis, v) {
                    let mut nb = basis.clone();
                    nb.push(normalize_lead(p, &r));
                    let mut nkey = key.clone();
                    nkey.extend(rref(p, &nb));
                    if seen.insert(nkey.clone()) {
                        next.push((nb, nkey));
                    }
                }
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|(rows, _)| Flag { p, n, rows })
        .collect()
}

/// Canonical reduced row echelon basis of the span of `rows`.
fn rref(p: u8, rows: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = Vec::with_capacity(rows.len());
    for r in rows {
        if let Some(reduced) = reduce(p, &out, r) {
            out.push(normalize_lead(p, &reduced));
        }
    }
    out.sort_by_key(|r| r.iter().position(|&x| x != 0).unwrap());
    for i in (0..out.len()).rev() {
        let lead = out[i].iter().position(|&x| x != 0).unwrap();
        for j in 0..i {
            if out[j][lead] != 0 {
                let f = out[j][lead];
                let (head, tail) = out.split_at_mut(i);
                let (oj, oi) = (&mut head[j], &tail[0]);
                for (a, &b) in oj.iter_mut().zip(oi) {
                    *a = gf::sub(p, *a, gf::mul(p, f, b));
                }
            }
        }
    }
    out
}

impl Flag {
    /// Does `g` map every subspace of the flag into itself?
    pub fn stabilized_by(&self, g: &Mat) -> bool {
        for (i, row) in self.rows.iter().enumerate() {
            let image = g.apply_row(row);
            // image must reduce to zero against the first i+1 rows
            if reduce(self.p, &self.rows[..=i], &image).is_some() {
                return false;
            }
        }
        true
    }
}

/// First complete flag over GF(p) stabilized by every matrix, if any.
pub fn common_flag_exists(mats: &[Mat]) -> Option<Flag> {
    assert!(!mats.is_empty());
    let p = mats[0].p;
    let n = mats[0].n;
    all_flags(p, n)
        .into_iter()
        .find(|fl| mats.iter().all(|m| fl.stabilized_by(m)))
}

fn flat(m: &Mat) -> Vec<u8> {
    m.entries().to_vec()
}

fn span_insert(p: u8, basis: &mut Vec<Vec<u8>>, v: &[u8]) -> bool {
    match reduce(p, basis, v) {
        Some(r) => {
            basis.push(normalize_lead(p, &r));
            true
        }
        None => false,
    }
}

/// Basis of the unital algebra generated by the given matrices, as echelon
/// rows of flattened n^2-vectors paired with matrix representatives.
fn algebra_basis(gens: &[Mat]) -> Vec<Mat> {
    let p = gens[0].p;
    let n = gens[0].n;
    let mut basis: Vec<Vec<u8>> = Vec::new();
    let mut reps: Vec<Mat> = Vec::new();
    let mut frontier: Vec<Mat> = Vec::new();
    for m in core::iter::once(Mat::identity(p, n)).chain(gens.iter().cloned()) {
        if span_insert(p, &mut basis, &flat(&m)) {
            reps.push(m.clone());
            frontier.push(m);
        }
    }
    while let Some(m) = frontier.pop() {
        for g in gens {
            for prod in [m.mul(g), g.mul(&m)] {
                if span_insert(p, &mut basis, &flat(&prod)) {
                    reps.push(prod.clone());
                    frontier.push(prod);
                }
            }
        }
    }
    reps
}

/// Do x and y share a complete flag over the algebraic closure of GF(p)?
/// Equivalently: is the two-sided ideal generated by [x, y] = xy - yx in the
/// algebra <x, y> nilpotent?
pub fn triangularizable_over_closure(x: &Mat, y: &Mat) -> bool {
    let p = x.p;
    let n = x.n;
    let algebra = algebra_basis(&[x.clone(), y.clone()]);
    let c = x.mul(y).sub(&y.mul(x));
    if c.entries().iter().all(|&e| e == 0) {
        // commuting pair: over the closure a common eigenvector chain always
        // exists for two commuting matrices
        return true;
    }
    // ideal I = span{ a c b : a, b in A }
    let mut ibasis: Vec<Vec<u8>> = Vec::new();
    let mut ireps: Vec<Mat> = Vec::new();
    for a in &algebra {
        for b in &algebra {
            let m = a.mul(&c).mul(b);
            if span_insert(p, &mut ibasis, &flat(&m)) {
                ireps.push(m);
            }
        }
    }
    // I nilpotent iff the iterated span powers reach zero within n steps
    let mut cur = ireps.clone();
    for _ in 0..=n {
        let mut next_basis: Vec<Vec<u8>> = Vec::new();
        let mut next_reps: Vec<Mat> = Vec::new();
        for a in &cur {
            for b in &ireps {
                let m = a.mul(b);
                if span_insert(p, &mut next_basis, &flat(&m)) {
                    next_reps.push(m);
                }
            }
        }
        if next_reps.is_empty() {
            return true;
        }
        cur = next_reps;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::sl_gens;

    #[test]
    fn flag_counts_are_q_factorials() {
        // number of complete flags = prod_{i=2..n} (1 + q + ... + q^{i-1})
        assert_eq!(all_flags(2, 3).len(), 21); // 3 * 7
        assert_eq!(all_flags(3, 3).len(), 52); // 4 * 13
        assert_eq!(all_flags(2, 4).len(), 315); // 3 * 7 * 15
        assert_eq!(all_flags(3, 4).len(), 2080); // 4 * 13 * 40
    }

    #[test]
    fn upper_triangular_pair_has_common_flag() {
        let gens = sl_gens(2, 3);
        // both upper unitriangular transvections stabilize the standard flag
        let fl = common_flag_exists(&[gens[0].clone(), gens[0].pow(2)]).unwrap();
        assert!(fl.stabilized_by(&gens[0]));
    }

    #[test]
    fn full_sl_has_no_common_flag() {
        let gens = sl_gens(2, 3);
        assert!(common_flag_exists(&gens).is_none());
    }

    #[test]
    fn commuting_matrices_triangularizable() {
        let x = sl_gens(3, 2)[0].clone();
        assert!(triangularizable_over_closure(&x, &x.pow(2)));
        assert!(triangularizable_over_closure(&x, &Mat::identity(3, 2)));
    }

    #[test]
    fn irreducible_pair_not_triangularizable() {
        // this pair generates an irreducible subgroup of SL3(2)
        let g = sl_gens(2, 3);
        let x = g[0].mul(&g[2]);
        assert!(!triangularizable_over_closure(&x, &g[3]));
    }

    #[test]
    fn flag_over_gf_implies_closure_triangularizable() {
        let g = sl_gens(2, 4);
        // two upper unitriangular elements
        let x = g[0].clone();
        let y = g[2].clone();
        assert!(common_flag_exists(&[x.clone(), y.clone()]).is_some());
        assert!(triangularizable_over_closure(&x, &y));
    }
}
