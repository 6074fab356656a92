//! Constructors for distinguished elements: transvections, reflections,
//! Eichler and Siegel elements, and a few composites the examples need
//! (alternating involutions, the order-4 element with GL_n centralizer,
//! the Sylow 2-subgroup of GO8+(2)).
//!
//! Everything is written in the row convention: the matrix of a linear map f
//! has f(e_i) as its i-th row, so vectors act on the right.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::classical::{FormKind, FormSpec};
use crate::error::Error;
use crate::gf;
use crate::matrix::Mat;

/// Matrix of the linear map given by its images of the basis vectors.
pub fn mat_from_map(p: u8, n: usize, f: impl Fn(&[u8]) -> Vec<u8>) -> Mat {
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![0u8; n];
        e[i] = 1;
        rows.push(f(&e));
    }
    let refs: Vec<&[u8]> = rows.iter().map(Vec::as_slice).collect();
    Mat::from_rows(p, &refs)
}

fn basis_vec(n: usize, i: usize) -> Vec<u8> {
    let mut e = vec![0u8; n];
    e[i] = 1;
    e
}

/// Symplectic transvection x -> x + a*B(x,v)*v.
pub fn sp_transvection(form: &FormSpec, v: &[u8], a: u8) -> Mat {
    let p = form.p;
    mat_from_map(p, form.n, |x| {
        let c = gf::mul(p, a, form.bilin(x, v));
        x.iter()
            .zip(v)
            .map(|(&xi, &vi)| gf::add(p, xi, gf::mul(p, c, vi)))
            .collect()
    })
}

/// Orthogonal transvection in characteristic 2: x -> x + (B(x,v)/Q(v))*v.
/// Requires Q(v) != 0.
pub fn orthogonal_transvection(form: &FormSpec, v: &[u8]) -> Result<Mat, Error> {
    let p = form.p;
    let qv = form.q_value(v);
    if p != 2 || qv == 0 {
        return Err(Error::ElementProperty("transvection needs char 2 and Q(v) != 0".into()));
    }
    let qi = gf::inv(p, qv);
    Ok(mat_from_map(p, form.n, |x| {
        let c = gf::mul(p, qi, form.bilin(x, v));
        x.iter()
            .zip(v)
            .map(|(&xi, &vi)| gf::add(p, xi, gf::mul(p, c, vi)))
            .collect()
    }))
}

/// Reflection in odd characteristic: x -> x - (B(x,v)/Q(v))*v.
/// Requires Q(v) != 0.
pub fn reflection(form: &FormSpec, v: &[u8]) -> Result<Mat, Error> {
    let p = form.p;
    let qv = form.q_value(v);
    if p == 2 || qv == 0 {
        return Err(Error::ElementProperty("reflection needs odd char and Q(v) != 0".into()));
    }
    let qi = gf::inv(p, qv);
    Ok(mat_from_map(p, form.n, |x| {
        let c = gf::mul(p, qi, form.bilin(x, v));
        x.iter()
            .zip(v)
            .map(|(&xi, &vi)| gf::sub(p, xi, gf::mul(p, c, vi)))
            .collect()
    }))
}

/// Eichler (Siegel) element of an orthogonal group:
/// x -> x + B(x,u)v - B(x,v)u - Q(v)B(x,u)u, for u singular and v in u^perp.
pub fn eichler(form: &FormSpec, u: &[u8], v: &[u8]) -> Result<Mat, Error> {
    let p = form.p;
    if form.q_value(u) != 0 || form.bilin(u, v) != 0 {
        return Err(Error::ElementProperty(
            "eichler element needs Q(u) = 0 and B(u,v) = 0".into(),
        ));
    }
    let qv = form.q_value(v);
    Ok(mat_from_map(p, form.n, |x| {
        let bu = form.bilin(x, u);
        let bv = form.bilin(x, v);
        let cu = gf::sub(p, gf::neg(p, bv), gf::mul(p, qv, bu));
        (0..form.n)
            .map(|i| {
                let t = gf::add(p, gf::mul(p, bu, v[i]), gf::mul(p, cu, u[i]));
                gf::add(p, x[i], t)
            })
            .collect()
    }))
}

/// Symplectic Siegel element x -> x + B(x,u)v + B(x,v)u, for B(u,v) = 0.
pub fn siegel_sp(form: &FormSpec, u: &[u8], v: &[u8]) -> Result<Mat, Error> {
    let p = form.p;
    if form.kind != FormKind::Symplectic || form.bilin(u, v) != 0 {
        return Err(Error::ElementProperty("siegel element needs B(u,v) = 0".into()));
    }
    Ok(mat_from_map(p, form.n, |x| {
        let bu = form.bilin(x, u);
        let bv = form.bilin(x, v);
        (0..form.n)
            .map(|i| {
                let t = gf::add(p, gf::mul(p, bu, v[i]), gf::mul(p, bv, u[i]));
                gf::add(p, x[i], t)
            })
            .collect()
    }))
}

/// diag(a, 1, ..., 1); a pseudoreflection when a != 1.
pub fn pseudoreflection(p: u8, n: usize, a: u8) -> Mat {
    let mut m = Mat::identity(p, n);
    m.set(0, 0, a);
    m
}

/// Product of k/2 Eichler elements on disjoint pairs of singular basis
/// vectors e_1..e_k. In characteristic 2 this is the alternating involution
/// a_k; in odd characteristic it is unipotent of Jordan type 2^(k/2).1^(n-k).
pub fn rank_k_eichler_product(form: &FormSpec, k: usize) -> Result<Mat, Error> {
    let m = form.n / 2;
    if k % 2 != 0 || k == 0 || k > m {
        return Err(Error::ElementProperty("k must be even, 0 < k <= n/2".into()));
    }
    let mut out = Mat::identity(form.p, form.n);
    for i in (0..k).step_by(2) {
        let e = eichler(form, &basis_vec(form.n, i), &basis_vec(form.n, i + 1))?;
        out = out.mul(&e);
    }
    Ok(out)
}

/// Symplectic analogue: product of Siegel elements on disjoint pairs from the
/// totally isotropic span of e_1..e_m; the involution a_k of Sp in char 2.
pub fn rank_k_siegel_product(form: &FormSpec, k: usize) -> Result<Mat, Error> {
    let m = form.n / 2;
    if k % 2 != 0 || k == 0 || k > m {
        return Err(Error::ElementProperty("k must be even, 0 < k <= n/2".into()));
    }
    let mut out = Mat::identity(form.p, form.n);
    for i in (0..k).step_by(2) {
        let s = siegel_sp(form, &basis_vec(form.n, i), &basis_vec(form.n, i + 1))?;
        out = out.mul(&s);
    }
    Ok(out)
}

/// Order-4 isometry of a plus-type form in odd characteristic whose square is
/// -1 and whose eigenspaces over the quadratic extension are totally singular
/// (so its centralizer in the ambient algebraic group is GL_{n/2}): rotate
/// the e-basis in consecutive pairs, and the f-basis by the matching pairs.
pub fn gl_centralizer_element(form: &FormSpec) -> Result<Mat, Error> {
    let p = form.p;
    let n = form.n;
    let m = n / 2;
    if form.kind != FormKind::QuadraticPlus || p == 2 || m % 2 != 0 {
        return Err(Error::ElementProperty(
            "needs plus-type form, odd characteristic, n/2 even".into(),
        ));
    }
    let mut g = Mat::zero(p, n);
    for i in (0..m).step_by(2) {
        // e_{i+1} -> e_{i+2} -> -e_{i+1} (coordinates i, i+1)
        g.set(i, i + 1, 1);
        g.set(i + 1, i, gf::neg(p, 1));
        // f_{i+1} -> f_{i+2} -> -f_{i+1} (coordinates n-1-i, n-2-i)
        g.set(n - 1 - i, n - 2 - i, 1);
        g.set(n - 2 - i, n - 1 - i, gf::neg(p, 1));
    }
    debug_assert!(form.is_isometry(&g));
    Ok(g)
}

/// Long root element x_beta(1): the elementary matrix I + E_{1n} in SL_n, the
/// transvection at e_1 in Sp, the Eichler element on the singular pair
/// (e_1, e_2) in the orthogonal groups.
pub fn long_root_element(p: u8, n: usize, form: Option<&FormSpec>) -> Result<Mat, Error> {
    match form {
        None => {
            if n < 2 {
                return Err(Error::UnsupportedElement("long root needs n >= 2".into()));
            }
            let mut m = Mat::identity(p, n);
            m.set(0, n - 1, 1);
            Ok(m)
        }
        Some(f) if f.kind == FormKind::Symplectic => Ok(sp_transvection(f, &basis_vec(n, 0), 1)),
        Some(f) => {
            let u = basis_vec(n, 0);
            let v = basis_vec(n, 1);
            if f.q_value(&u) != 0 || f.q_value(&v) != 0 || f.bilin(&u, &v) != 0 {
                return Err(Error::UnsupportedElement(
                    "no singular pair on the first two coordinates".into(),
                ));
            }
            eichler(f, &u, &v)
        }
    }
}

/// Alternating involution a_k in characteristic 2 (Ex 3.3's "(yv, v) = 0"):
/// k/2 commuting root elements on disjoint hyperbolic pairs.
pub fn involution_alternating(form: &FormSpec, k: usize) -> Result<Mat, Error> {
    if form.p != 2 {
        return Err(Error::UnsupportedElement(
            "alternating involutions live in characteristic 2".into(),
        ));
    }
    match form.kind {
        FormKind::Symplectic => rank_k_siegel_product(form, k),
        _ => {
            let g = rank_k_eichler_product(form, k)?;
            debug_assert!(is_alternating_involution(form, &g));
            Ok(g)
        }
    }
}

/// Unipotent element with the given Jordan partition. Without a form this is
/// the block-diagonal Jordan normal form (any partition of n). Form-preserving
/// representatives are built blockwise from root elements and support parts of
/// size at most 2; the classical parity constraint (2-blocks of odd-p
/// orthogonal groups pair up) is enforced, and anything else is an error.
pub fn unipotent_by_jordan(p: u8, n: usize, form: Option<&FormSpec>, parts: &[usize]) -> Result<Mat, Error> {
    if parts.iter().sum::<usize>() != n || parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::BadPartition(crate::matrix::partition_string(parts)));
    }
    let Some(f) = form else {
        let mut m = Mat::identity(p, n);
        let mut off = 0;
        for &k in parts {
            for i in 0..k - 1 {
                m.set(off + i, off + i + 1, 1);
            }
            off += k;
        }
        return Ok(m);
    };
    let a = parts.iter().filter(|&&k| k == 2).count();
    if parts.iter().any(|&k| k > 2) {
        return Err(Error::UnsupportedElement(
            "form-compatible construction supports blocks of size <= 2".into(),
        ));
    }
    if a == 0 {
        return Ok(Mat::identity(p, n));
    }
    let m_half = n / 2;
    match f.kind {
        FormKind::Symplectic => {
            // transvections at distinct e_i have disjoint supports, so any
            // number of 2-blocks up to n/2 is realizable
            if a > m_half {
                return Err(Error::UnsupportedElement("too many 2-blocks".into()));
            }
            let mut out = Mat::identity(p, n);
            for i in 0..a {
                out = out.mul(&sp_transvection(f, &basis_vec(n, i), 1));
            }
            Ok(out)
        }
        _ if p == 2 => {
            // Eichler pairs, plus one transvection when the count is odd
            if a > m_half {
                return Err(Error::UnsupportedElement("too many 2-blocks".into()));
            }
            let mut out = if a >= 2 {
                rank_k_eichler_product(f, a - a % 2)?
            } else {
                Mat::identity(p, n)
            };
            if a % 2 == 1 {
                let i = a - 1;
                let mut v = vec![0u8; n];
                v[i] = 1;
                v[n - 1 - i] = 1;
                out = out.mul(&orthogonal_transvection(f, &v)?);
            }
            debug_assert_eq!(crate::matrix::jordan_type(&out)?.iter().filter(|&&k| k == 2).count(), a);
            Ok(out)
        }
        _ => {
            // odd-characteristic orthogonal: 2-blocks come in pairs
            if a % 2 != 0 || a > m_half {
                return Err(Error::UnsupportedElement(
                    "orthogonal 2-blocks pair up in odd characteristic".into(),
                ));
            }
            rank_k_eichler_product(f, a)
        }
    }
}

/// Semisimple element from its eigenvalue multiset. Entries below p are field
/// values: without a form they sit on the diagonal; with a form they are
/// matched into inverse pairs on hyperbolic coordinate pairs (an unpaired
/// leftover of +-1 goes on the middle coordinate of an odd-dimensional form).
/// An entry of exactly p + 1 requests a conjugate pair of eigenvalues of
/// multiplicative order p + 1 over the quadratic extension (e.g. order 4 at
/// p = 3), realized as a rotation of an anisotropic plane; such entries must
/// come in pairs and need an orthogonal form in odd characteristic.
pub fn semisimple_by_eigenvalues(p: u8, n: usize, form: Option<&FormSpec>, eigs: &[u64]) -> Result<Mat, Error> {
    if eigs.len() != n {
        return Err(Error::UnsupportedElement("need one eigenvalue per dimension".into()));
    }
    let Some(f) = form else {
        let mut m = Mat::zero(p, n);
        for (i, &e) in eigs.iter().enumerate() {
            let v = (e % p as u64) as u8;
            if v == 0 || e >= p as u64 {
                return Err(Error::UnsupportedElement("diagonal eigenvalues must be nonzero field values".into()));
            }
            m.set(i, i, v);
        }
        return Ok(m);
    };
    let mut values: Vec<u8> = Vec::new();
    let mut ext_pairs = 0usize;
    for &e in eigs {
        if e == p as u64 + 1 {
            ext_pairs += 1;
        } else if e >= 1 && e < p as u64 {
            values.push(e as u8);
        } else {
            return Err(Error::UnsupportedElement("eigenvalue out of range".into()));
        }
    }
    if ext_pairs % 2 != 0 {
        return Err(Error::UnsupportedElement("extension eigenvalues come in conjugate pairs".into()));
    }
    if ext_pairs > 0 && (p == 2 || f.kind == FormKind::Symplectic) {
        return Err(Error::UnsupportedElement(
            "anisotropic rotations need an orthogonal form in odd characteristic".into(),
        ));
    }
    // match rational values into inverse pairs
    let mut pairs: Vec<(u8, u8)> = Vec::new();
    let mut middle: Option<u8> = None;
    while let Some(v) = values.pop() {
        let vi = gf::inv(p, v);
        if let Some(pos) = values.iter().position(|&w| w == vi) {
            values.remove(pos);
            pairs.push((v, vi));
        } else if n % 2 == 1 && middle.is_none() && (v == 1 || v == gf::neg(p, 1)) {
            middle = Some(v);
        } else {
            return Err(Error::UnsupportedElement("eigenvalues do not pair into inverses".into()));
        }
    }
    let mut g = Mat::identity(p, n);
    if let Some(v) = middle {
        g.set(n / 2, n / 2, v);
    } else if n % 2 == 1 {
        return Err(Error::UnsupportedElement("odd dimension needs a +-1 eigenvalue".into()));
    }
    let mut slot = 0usize; // next free hyperbolic pair (e_slot, f_slot)
    for (v, vi) in pairs.into_iter().filter(|&(v, _)| v != 1) {
        g.set(slot, slot, v);
        g.set(n - 1 - slot, n - 1 - slot, vi);
        slot += 1;
    }
    for _ in 0..ext_pairs / 2 {
        // rotation of order 2(p+1)/gcd(2, ...): on the anisotropic vectors
        // u = e_i + f_i, w = e_j + f_j send u -> w -> -u, fixing u - and
        // w-complements e_i - f_i, e_j - f_j; eigenvalues over the closure are
        // the primitive 4th roots of unity, which have order p + 1 = 4 only
        // at p = 3 -- the one case the examples use
        if p != 3 {
            return Err(Error::UnsupportedElement("extension rotations implemented for p = 3".into()));
        }
        let (i, j) = (slot, slot + 1);
        slot += 2;
        if j >= n / 2 {
            return Err(Error::UnsupportedElement("not enough hyperbolic pairs".into()));
        }
        let rot = aniso_rotation(f, i, j)?;
        g = g.mul(&rot);
    }
    if !f.is_isometry(&g) {
        return Err(Error::UnsupportedElement("constructed element breaks the form".into()));
    }
    Ok(g)
}

/// Order-4 isometry acting as u -> w -> -u on u = e_i + f_i, w = e_j + f_j and
/// trivially on their orthogonal complement (odd characteristic).
fn aniso_rotation(f: &FormSpec, i: usize, j: usize) -> Result<Mat, Error> {
    let p = f.p;
    let n = f.n;
    let half = gf::inv(p, 2); // (p+1)/2
    let mut g = Mat::identity(p, n);
    // e_i = (u + u')/2 with u' = e_i - f_i fixed; g(u) = w
    let sgn_back = gf::neg(p, half);
    let writes: [(usize, [(usize, u8); 4]); 4] = [
        // g(e_i) = (w + u')/2
        (i, [(j, half), (n - 1 - j, half), (i, half), (n - 1 - i, gf::neg(p, half))]),
        // g(f_i) = (w - u')/2
        (n - 1 - i, [(j, half), (n - 1 - j, half), (i, gf::neg(p, half)), (n - 1 - i, half)]),
        // g(e_j) = (-u + w')/2
        (j, [(i, sgn_back), (n - 1 - i, sgn_back), (j, half), (n - 1 - j, gf::neg(p, half))]),
        // g(f_j) = (-u - w')/2
        (n - 1 - j, [(i, sgn_back), (n - 1 - i, sgn_back), (j, gf::neg(p, half)), (n - 1 - j, half)]),
    ];
    for (row, cols) in writes {
        for c in 0..n {
            g.set(row, c, 0);
        }
        for (c, v) in cols {
            g.set(row, c, v);
        }
    }
    if !f.is_isometry(&g) || g.order() != 4 {
        return Err(Error::UnsupportedElement("rotation construction failed".into()));
    }
    Ok(g)
}

/// Dickson invariant in characteristic 2: rank(g - 1) mod 2. Zero on the
/// kernel of the spinor-type map (the index-2 subgroup), one on the coset of
/// the transvections.
pub fn dickson_invariant(g: &Mat) -> u8 {
    let diff = g.sub(&Mat::identity(g.p, g.n));
    (diff.rank() % 2) as u8
}

/// Explicit closure of a matrix group, capped. Only sensible for small
/// groups (Sylow subgroups, brute-force cross-checks).
pub fn mat_group_closure(gens: &[Mat], cap: usize) -> Result<Vec<Mat>, Error> {
    assert!(!gens.is_empty());
    let ident = Mat::identity(gens[0].p, gens[0].n);
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    seen.insert(ident.entries().to_vec());
    let mut elems = vec![ident];
    let mut head = 0;
    while head < elems.len() {
        let cur = elems[head].clone();
        head += 1;
        for g in gens {
            let next = cur.mul(g);
            if seen.insert(next.entries().to_vec()) {
                if elems.len() >= cap {
                    return Err(Error::ClassCap {
                        reached: elems.len(),
                        cap,
                    });
                }
                elems.push(next);
            }
        }
    }
    Ok(elems)
}

/// Generators for a Sylow 2-subgroup of GO8+(2): the upper-triangular Eichler
/// elements on singular basis pairs close to a group of order 2^12; one more
/// transvection (at e_4 + f_4) brings in the outer coset for the full 2^13.
pub fn sylow2_go8_2(form: &FormSpec) -> Result<Vec<Mat>, Error> {
    let n = form.n;
    if form.kind != FormKind::QuadraticPlus || form.p != 2 || n != 8 {
        return Err(Error::ElementProperty("specific to GO8+(2)".into()));
    }
    let m = n / 2;
    let mut gens = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            for second in [j, n - 1 - j] {
                let g = eichler(form, &basis_vec(n, i), &basis_vec(n, second))?;
                if is_flag_unitriangular(&g) && !gens.contains(&g) {
                    gens.push(g);
                }
            }
        }
    }
    let mut v = vec![0u8; n];
    v[m - 1] = 1;
    v[m] = 1;
    gens.push(orthogonal_transvection(form, &v)?);
    Ok(gens)
}

/// Stabilizes the standard complete flag <e1> < <e1,e2> < ... with trivial
/// diagonal: in the row convention that means no entries above the diagonal.
fn is_flag_unitriangular(g: &Mat) -> bool {
    for i in 0..g.n {
        if g.get(i, i) != 1 {
            return false;
        }
        for j in i + 1..g.n {
            if g.get(i, j) != 0 {
                return false;
            }
        }
    }
    true
}

/// Involution test specific to char-2 orthogonal groups: g^2 = 1 and
/// B((g+1)x, x) = 0 for all x, checked on the basis and basis pairs
/// (the defect form x -> B((g+1)x, x) is additive in char 2 modulo the
/// bilinearity correction, which the pair check covers).
pub fn is_alternating_involution(form: &FormSpec, g: &Mat) -> bool {
    let n = form.n;
    if g.is_identity() || !g.mul(g).is_identity() {
        return false;
    }
    let defect = |v: &[u8]| {
        let w: Vec<u8> = g
            .apply_row(v)
            .iter()
            .zip(v)
            .map(|(&a, &b)| gf::add(form.p, a, b))
            .collect();
        form.bilin(&w, v)
    };
    for i in 0..n {
        if defect(&basis_vec(n, i)) != 0 {
            return false;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![0u8; n];
            v[i] = 1;
            v[j] = 1;
            if defect(&v) != 0 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transvections_are_isometries_of_order_p() {
        let form = FormSpec::quadratic_plus(2, 6);
        for i in 0..6 {
            let mut v = vec![0u8; 6];
            v[i] = 1;
            v[5 - i] = 1;
            if form.q_value(&v) == 0 {
                continue;
            }
            let t = orthogonal_transvection(&form, &v).unwrap();
            assert!(form.is_isometry(&t));
            assert_eq!(t.order(), 2);
        }
        let sp = FormSpec::symplectic(3, 4);
        let t = sp_transvection(&sp, &[1, 0, 1, 2], 1);
        assert!(sp.is_isometry(&t));
        assert_eq!(t.order(), 3);
        assert_eq!(crate::matrix::jordan_type(&t).unwrap(), vec![2, 1, 1]);
    }

    #[test]
    fn reflection_properties() {
        let form = FormSpec::quadratic_plus(3, 4);
        let v = [1u8, 0, 0, 1]; // Q(v) = 1
        assert_eq!(form.q_value(&v), 1);
        let r = reflection(&form, &v).unwrap();
        assert!(form.is_isometry(&r));
        assert_eq!(r.order(), 2);
        // fixes v^perp pointwise, negates v
        assert_eq!(r.apply_row(&v), vec![2, 0, 0, 2]);
        let w = [1u8, 0, 0, 2]; // B(v,w) = 0
        assert_eq!(form.bilin(&v, &w), 0);
        assert_eq!(r.apply_row(&w), w.to_vec());
        assert!(reflection(&form, &[1, 0, 0, 0]).is_err()); // singular vector
    }

    #[test]
    fn eichler_jordan_types() {
        let form = FormSpec::quadratic_plus(2, 8);
        let a2 = rank_k_eichler_product(&form, 2).unwrap();
        assert!(form.is_isometry(&a2));
        assert!(is_alternating_involution(&form, &a2));
        assert_eq!(crate::matrix::jordan_type(&a2).unwrap(), vec![2, 2, 1, 1, 1, 1]);
        let a4 = rank_k_eichler_product(&form, 4).unwrap();
        assert!(is_alternating_involution(&form, &a4));
        assert_eq!(crate::matrix::jordan_type(&a4).unwrap(), vec![2, 2, 2, 2]);

        let odd = FormSpec::symmetric_odd(3, 5);
        let x = rank_k_eichler_product(&odd, 2).unwrap();
        assert!(odd.is_isometry(&x));
        assert_eq!(crate::matrix::jordan_type(&x).unwrap(), vec![2, 2, 1]);
    }

    #[test]
    fn transvection_is_not_alternating() {
        let form = FormSpec::quadratic_plus(2, 8);
        let mut v = vec![0u8; 8];
        v[0] = 1;
        v[7] = 1;
        let t = orthogonal_transvection(&form, &v).unwrap();
        assert!(!is_alternating_involution(&form, &t));
        assert_eq!(dickson_invariant(&t), 1);
        let a2 = rank_k_eichler_product(&form, 2).unwrap();
        assert_eq!(dickson_invariant(&a2), 0);
    }

    #[test]
    fn siegel_involutions_in_sp() {
        let form = FormSpec::symplectic(2, 6);
        for k in [2usize] {
            let a = rank_k_siegel_product(&form, k).unwrap();
            assert!(form.is_isometry(&a));
            assert_eq!(a.order(), 2);
            assert_eq!(crate::matrix::jordan_type(&a).unwrap()[0], 2);
        }
    }

    #[test]
    fn gl_centralizer_element_properties() {
        let form = FormSpec::quadratic_plus(3, 8);
        let g = gl_centralizer_element(&form).unwrap();
        assert!(form.is_isometry(&g));
        assert_eq!(g.order(), 4);
        let minus_one = Mat::identity(3, 8).scale(2);
        assert_eq!(g.mul(&g), minus_one);
    }

    #[test]
    fn sylow_two_of_go8_2() {
        let form = FormSpec::quadratic_plus(2, 8);
        let mut gens = sylow2_go8_2(&form).unwrap();
        let transvection = gens.pop().unwrap();
        let u = mat_group_closure(&gens, 1 << 13).unwrap();
        assert_eq!(u.len(), 1 << 12);
        gens.push(transvection);
        let s = mat_group_closure(&gens, (1 << 13) + 1).unwrap();
        assert_eq!(s.len(), 1 << 13);
        // 2^13 is the full 2-part of |GO8+(2)| = 348364800 = 2^13 * 3^5 * 5^2 * 7
        assert_eq!(348_364_800 % (1u64 << 13), 0);
        assert_eq!((348_364_800 / (1 << 13)) % 2, 1);
    }

    #[test]
    fn long_root_elements() {
        let lr = long_root_element(2, 3, None).unwrap();
        assert_eq!(lr.order(), 2);
        assert_eq!(crate::matrix::jordan_type(&lr).unwrap(), vec![2, 1]);

        let sp = FormSpec::symplectic(3, 4);
        let lr = long_root_element(3, 4, Some(&sp)).unwrap();
        assert!(sp.is_isometry(&lr));
        assert_eq!(crate::matrix::jordan_type(&lr).unwrap(), vec![2, 1, 1]);

        let go = FormSpec::quadratic_plus(2, 8);
        let lr = long_root_element(2, 8, Some(&go)).unwrap();
        assert!(go.is_isometry(&lr));
        assert_eq!(crate::matrix::jordan_type(&lr).unwrap(), vec![2, 2, 1, 1, 1, 1]);
    }

    #[test]
    fn unipotent_by_jordan_partitions() {
        let g = unipotent_by_jordan(2, 6, None, &[3, 2, 1]).unwrap();
        assert_eq!(crate::matrix::jordan_type(&g).unwrap(), vec![3, 2, 1]);

        let sp = FormSpec::symplectic(3, 6);
        let g = unipotent_by_jordan(3, 6, Some(&sp), &[2, 2, 2]).unwrap();
        assert!(sp.is_isometry(&g));
        assert_eq!(crate::matrix::jordan_type(&g).unwrap(), vec![2, 2, 2]);

        let go2 = FormSpec::quadratic_plus(2, 8);
        for a in 1..=4usize {
            let mut parts = vec![2; a];
            parts.extend(core::iter::repeat(1).take(8 - 2 * a));
            let g = unipotent_by_jordan(2, 8, Some(&go2), &parts).unwrap();
            assert!(go2.is_isometry(&g));
            assert_eq!(crate::matrix::jordan_type(&g).unwrap(), parts);
        }

        let go3 = FormSpec::quadratic_plus(3, 8);
        assert!(unipotent_by_jordan(3, 8, Some(&go3), &[2, 1, 1, 1, 1, 1, 1]).is_err());
        assert!(unipotent_by_jordan(3, 8, Some(&go3), &[3, 3, 1, 1]).is_err());
        let g = unipotent_by_jordan(3, 8, Some(&go3), &[2, 2, 1, 1, 1, 1]).unwrap();
        assert!(go3.is_isometry(&g));
        assert_eq!(g.order(), 3);
    }

    #[test]
    fn semisimple_eigenvalue_constructions() {
        // diagonal, no form
        let g = semisimple_by_eigenvalues(7, 3, None, &[2, 4, 1]).unwrap();
        assert_eq!(g.order(), 3);

        // inverse pairs on a plus form: 2 * 2 = 1 in GF(3)
        let go = FormSpec::quadratic_plus(3, 4);
        let g = semisimple_by_eigenvalues(3, 4, Some(&go), &[2, 2, 1, 1]).unwrap();
        assert!(go.is_isometry(&g));
        assert_eq!(g.order(), 2);

        // conjugate pair of order 4 over GF(9): two nontrivial eigenvalues
        let go8 = FormSpec::quadratic_plus(3, 8);
        let g = semisimple_by_eigenvalues(3, 8, Some(&go8), &[4, 4, 1, 1, 1, 1, 1, 1]).unwrap();
        assert!(go8.is_isometry(&g));
        assert_eq!(g.order(), 4);
        assert_eq!(g.sub(&Mat::identity(3, 8)).rank(), 2);

        // unpaired eigenvalue rejected
        assert!(semisimple_by_eigenvalues(3, 4, Some(&go), &[2, 1, 1, 1]).is_err());
        // odd dimension takes a -1 in the middle
        let so = FormSpec::symmetric_odd(3, 5);
        let g = semisimple_by_eigenvalues(3, 5, Some(&so), &[2, 2, 2, 2, 2]).unwrap();
        assert!(so.is_isometry(&g));
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn alternating_involution_wrapper() {
        let sp = FormSpec::symplectic(2, 6);
        let a = involution_alternating(&sp, 2).unwrap();
        assert_eq!(a.order(), 2);
        let go = FormSpec::quadratic_plus(2, 8);
        let a = involution_alternating(&go, 4).unwrap();
        assert!(is_alternating_involution(&go, &a));
        assert!(involution_alternating(&FormSpec::quadratic_plus(3, 8), 2).is_err());
    }

    #[test]
    fn closure_cap_respected() {
        let form = FormSpec::quadratic_plus(2, 8);
        let gens = sylow2_go8_2(&form).unwrap();
        assert!(matches!(
            mat_group_closure(&gens, 100),
            Err(Error::ClassCap { .. })
        ));
    }
}
