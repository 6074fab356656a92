//! Bilinear/quadratic forms, the classical group constructors, and the
//! numbering tables that turn matrix groups into permutation groups.
//!
//! Forms are fixed constants of the module (split bases), so every example is
//! reproducible bit for bit:
//! * plus type on 2m coordinates: Q(x) = sum_{i<m} x_i x_{2m-1-i};
//! * odd dimension: the same hyperbolic sum plus x_m^2;
//! * minus type: hyperbolic sum on the outer pairs plus an irreducible
//!   binary form on the two middle coordinates;
//! * symplectic Gram: B(e_i, f_i) = 1 with f_i at coordinate 2m-1-i.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::bsgs::BsgsGroup;
use crate::error::Error;
use crate::gf;
use crate::matrix::Mat;
use crate::perm::Perm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    SL,
    Sp,
    GOPlus,
    GOMinus,
    SOOdd,
    /// PGL_n(q).2 acting on points and hyperplanes of projective space, the
    /// graph (inverse-transpose) extension. Coincides with SL_n(q).2 whenever
    /// gcd(n, q-1) = 1.
    SLDualExt,
    /// SL_2(q) wr 2: block pairs plus the block swap, as 4x4 matrices.
    WreathSL2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    VectorsNonzero,
    PointsProjective,
    PointsNonsingular,
    PointsSingular,
    VectorsPlusCovectors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub family: Family,
    pub n: usize,
    pub q: u8,
    pub action: Action,
}

impl GroupSpec {
    pub fn new(family: Family, n: usize, q: u8, action: Action) -> Self {
        GroupSpec {
            family,
            n,
            q,
            action,
        }
    }

    pub fn describe(&self) -> String {
        format!("{:?}:{}:{}:{:?}", self.family, self.n, self.q, self.action)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Symplectic,
    QuadraticPlus,
    QuadraticMinus,
    SymmetricOdd,
}

/// A fixed form on GF(p)^n. Quadratic kinds carry an upper-triangular
/// coefficient matrix `quad` with Q(v) = v * quad * v^T; the Gram matrix of
/// the polarization B(u,v) = Q(u+v) - Q(u) - Q(v) is precomputed. The
/// symplectic kind carries only the Gram matrix.
#[derive(Debug, Clone)]
pub struct FormSpec {
    pub kind: FormKind,
    pub p: u8,
    pub n: usize,
    quad: Option<Mat>,
    gram: Mat,
}

impl FormSpec {
    pub fn symplectic(p: u8, n: usize) -> Self {
        assert!(n % 2 == 0);
        let m = n / 2;
        let mut gram = Mat::zero(p, n);
        for i in 0..m {
            gram.set(i, n - 1 - i, 1);
            gram.set(n - 1 - i, i, gf::neg(p, 1));
        }
        FormSpec {
            kind: FormKind::Symplectic,
            p,
            n,
            quad: None,
            gram,
        }
    }

    pub fn quadratic_plus(p: u8, n: usize) -> Self {
        assert!(n % 2 == 0);
        let m = n / 2;
        let mut quad = Mat::zero(p, n);
        for i in 0..m {
            quad.set(i, n - 1 - i, 1);
        }
        Self::from_quad(FormKind::QuadraticPlus, quad)
    }

    pub fn quadratic_minus(p: u8, n: usize) -> Self {
        assert!(n % 2 == 0 && n >= 2);
        let m = n / 2;
        let mut quad = Mat::zero(p, n);
        for i in 0..m - 1 {
            quad.set(i, n - 1 - i, 1);
        }
        // irreducible x^2 + xy + a*y^2 on the middle pair
        let a = (1..p)
            .find(|&a| (0..p).all(|t| gf::add(p, gf::add(p, gf::mul(p, t, t), t), a) != 0))
            .expect("irreducible binary quadratic exists over every prime field");
        quad.set(m - 1, m - 1, 1);
        quad.set(m - 1, m, 1);
        quad.set(m, m, a);
        Self::from_quad(FormKind::QuadraticMinus, quad)
    }

    pub fn symmetric_odd(p: u8, n: usize) -> Self {
        assert!(n % 2 == 1 && p % 2 == 1);
        let m = n / 2;
        let mut quad = Mat::zero(p, n);
        for i in 0..m {
            quad.set(i, n - 1 - i, 1);
        }
        quad.set(m, m, 1);
        Self::from_quad(FormKind::SymmetricOdd, quad)
    }

    fn from_quad(kind: FormKind, quad: Mat) -> Self {
        let p = quad.p;
        let n = quad.n;
        // gram = quad + quad^T (polarization)
        let gram = quad.add(&quad.transpose());
        FormSpec {
            kind,
            p,
            n,
            quad: Some(quad),
            gram,
        }
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn q_value(&self, v: &[u8]) -> u8 {
        let quad = self.quad.as_ref().expect("quadratic kinds only");
        let p = self.p;
        let mut acc = 0u8;
        for i in 0..self.n {
            if v[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                let c = quad.get(i, j);
                if c != 0 {
                    acc = gf::add(p, acc, gf::mul(p, gf::mul(p, v[i], v[j]), c));
                }
            }
        }
        acc
    }

    pub fn bilin(&self, u: &[u8], v: &[u8]) -> u8 {
        let p = self.p;
        let mut acc = 0u8;
        for i in 0..self.n {
            if u[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                let g = self.gram.get(i, j);
                if g != 0 {
                    acc = gf::add(p, acc, gf::mul(p, gf::mul(p, u[i], v[j]), g));
                }
            }
        }
        acc
    }

    /// Exact isometry test. For quadratic kinds this checks Q(vM) = Q(v) as
    /// forms (diagonal and symmetrized off-diagonal of M*quad*M^T - quad);
    /// for the symplectic kind it checks M*gram*M^T = gram.
    pub fn is_isometry(&self, m: &Mat) -> bool {
        match &self.quad {
            Some(quad) => {
                let s = m.mul(quad).mul(&m.transpose()).sub(quad);
                for i in 0..self.n {
                    if s.get(i, i) != 0 {
                        return false;
                    }
                    for j in i + 1..self.n {
                        if gf::add(self.p, s.get(i, j), s.get(j, i)) != 0 {
                            return false;
                        }
                    }
                }
                true
            }
            None => m.mul(&self.gram).mul(&m.transpose()) == self.gram,
        }
    }
}

/// Numbering table: the acted-on set as explicit vectors, in a deterministic
/// (lexicographic) order, with a reverse index.
pub struct ActionTable {
    pub p: u8,
    pub dim: usize,
    pub kind: Action,
    /// representative vector per point; for `VectorsPlusCovectors` these are
    /// projective point representatives and the degree is twice their count
    pub vectors: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, u32>,
    pub degree: usize,
}

fn all_nonzero_vectors(p: u8, dim: usize) -> Vec<Vec<u8>> {
    let total = (p as usize).pow(dim as u32);
    let mut out = Vec::with_capacity(total - 1);
    for mut code in 1..total {
        let mut v = vec![0u8; dim];
        for slot in v.iter_mut().rev() {
            *slot = (code % p as usize) as u8;
            code /= p as usize;
        }
        out.push(v);
    }
    out
}

pub fn normalize_projective(p: u8, v: &[u8]) -> Vec<u8> {
    let lead = v.iter().position(|&x| x != 0).expect("nonzero vector");
    let inv = gf::inv(p, v[lead]);
    v.iter().map(|&x| gf::mul(p, x, inv)).collect()
}

impl ActionTable {
    pub fn new(p: u8, dim: usize, kind: Action, form: Option<&FormSpec>) -> Self {
        let all = all_nonzero_vectors(p, dim);
        let vectors: Vec<Vec<u8>> = match kind {
            Action::VectorsNonzero => all,
            Action::PointsProjective | Action::VectorsPlusCovectors => all
                .into_iter()
                .filter(|v| normalize_projective(p, v) == *v)
                .collect(),
            Action::PointsNonsingular | Action::PointsSingular => {
                let form = form.expect("orthogonal action needs a form");
                let want_singular = kind == Action::PointsSingular;
                let base: Vec<Vec<u8>> = if p == 2 {
                    all
                } else {
                    all.into_iter()
                        .filter(|v| normalize_projective(p, v) == *v)
                        .collect()
                };
                base.into_iter()
                    .filter(|v| (form.q_value(v) == 0) == want_singular)
                    .collect()
            }
        };
        let index = vectors
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as u32))
            .collect();
        let degree = match kind {
            Action::VectorsPlusCovectors => 2 * vectors.len(),
            _ => vectors.len(),
        };
        ActionTable {
            p,
            dim,
            kind,
            vectors,
            index,
            degree,
        }
    }

    pub fn index_of(&self, v: &[u8]) -> Option<u32> {
        self.index.get(v).copied()
    }

    /// Permutation induced by an invertible matrix (row vectors act on the
    /// right). Projective kinds normalize; the dual action moves hyperplane
    /// normals by the inverse transpose.
    pub fn perm_of(&self, m: &Mat) -> Result<Perm, Error> {
        let p = self.p;
        let normalized = |w: Vec<u8>| -> Vec<u8> {
            match self.kind {
                Action::VectorsNonzero => w,
                Action::PointsNonsingular | Action::PointsSingular if p == 2 => w,
                _ => normalize_projective(p, &w),
            }
        };
        match self.kind {
            Action::VectorsPlusCovectors => {
                let n_pts = self.vectors.len();
                let mit = m.inverse()?.transpose();
                let mut img = vec![0u16; 2 * n_pts];
                for (i, v) in self.vectors.iter().enumerate() {
                    let w = normalize_projective(p, &m.apply_row(v));
                    img[i] = self.index[&w] as u16;
                    let w = normalize_projective(p, &mit.apply_row(v));
                    img[n_pts + i] = (n_pts + self.index[&w] as usize) as u16;
                }
                Perm::from_images(img)
            }
            _ => {
                let mut img = vec![0u16; self.vectors.len()];
                for (i, v) in self.vectors.iter().enumerate() {
                    let w = normalized(m.apply_row(v));
                    let idx = self.index.get(&w).ok_or(Error::EscapesSet(i))?;
                    img[i] = *idx as u16;
                }
                Perm::from_images(img)
            }
        }
    }

    /// Duality swap for `VectorsPlusCovectors`: point [v] -> hyperplane with
    /// normal [vJ], hyperplane [w] -> point [w J^-T].
    pub fn duality_perm(&self, j: &Mat) -> Result<Perm, Error> {
        assert_eq!(self.kind, Action::VectorsPlusCovectors);
        let p = self.p;
        let n_pts = self.vectors.len();
        let jti = j.inverse()?.transpose();
        let mut img = vec![0u16; 2 * n_pts];
        for (i, v) in self.vectors.iter().enumerate() {
            let w = normalize_projective(p, &j.apply_row(v));
            img[i] = (n_pts + self.index[&w] as usize) as u16;
            let w = normalize_projective(p, &jti.apply_row(v));
            img[n_pts + i] = self.index[&w] as u16;
        }
        Perm::from_images(img)
    }

    /// For odd p vector actions: map each vector index to the index of the
    /// canonical (projectively normalized) representative of its 1-space.
    pub fn one_space_projection(&self) -> Vec<u32> {
        assert_eq!(self.kind, Action::VectorsNonzero);
        self.vectors
            .iter()
            .map(|v| self.index[&normalize_projective(self.p, v)])
            .collect()
    }
}

/// Orbit lengths of the induced action on 1-spaces, for a vector action in
/// odd characteristic. `proj` maps each vector index to the index of the
/// canonical representative of its line (see `ActionTable::one_space_projection`),
/// and `set` lists the canonical representatives to partition.
pub fn orbit_lengths_projective(gens: &[Perm], proj: &[u32], set: &[u32]) -> Vec<usize> {
    let mut seen: hashbrown::HashSet<u32> = hashbrown::HashSet::new();
    let mut out = Vec::new();
    for &start in set {
        if !seen.insert(start) {
            continue;
        }
        let mut frontier = vec![start];
        let mut count = 1usize;
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = proj[g.apply(x as u16) as usize];
                if seen.insert(y) {
                    count += 1;
                    frontier.push(y);
                }
            }
        }
        out.push(count);
    }
    out.sort_unstable();
    out
}

/// Exact order of the constructed matrix group (not a simple quotient).
pub fn group_order_formula(spec: &GroupSpec) -> Result<u128, Error> {
    let q = spec.q as u128;
    let n = spec.n as u32;
    let qp = |e: u32| q.pow(e);
    Ok(match spec.family {
        Family::SL => order_sl(spec.n, q),
        Family::Sp => {
            if spec.n % 2 != 0 {
                return Err(Error::UnsupportedSpec(spec.describe()));
            }
            let m = n / 2;
            let mut o = qp(m * m);
            for i in 1..=m {
                o *= qp(2 * i) - 1;
            }
            o
        }
        Family::GOPlus | Family::GOMinus => {
            if spec.n % 2 != 0 || spec.n < 4 {
                return Err(Error::UnsupportedSpec(spec.describe()));
            }
            let m = n / 2;
            let eps: i128 = if spec.family == Family::GOPlus { 1 } else { -1 };
            let mut o = 2 * qp(m * (m - 1)) as i128 * (qp(m) as i128 - eps);
            for i in 1..m {
                o *= qp(2 * i) as i128 - 1;
            }
            o as u128
        }
        Family::SOOdd => {
            if spec.n % 2 != 1 || spec.q % 2 != 1 {
                return Err(Error::UnsupportedSpec(spec.describe()));
            }
            let m = n / 2;
            let mut o = qp(m * m);
            for i in 1..=m {
                o *= qp(2 * i) - 1;
            }
            o
        }
        Family::SLDualExt => {
            if spec.n < 3 {
                return Err(Error::UnsupportedSpec(spec.describe()));
            }
            // 2 * |PGL_n(q)| = 2 * |GL_n(q)| / (q-1)
            2 * order_sl(spec.n, q) * (q - 1) / (q - 1)
        }
        Family::WreathSL2 => 2 * order_sl(2, q) * order_sl(2, q),
    })
}

fn order_sl(n: usize, q: u128) -> u128 {
    let n = n as u32;
    let mut o = q.pow(n * (n - 1) / 2);
    for i in 2..=n {
        o *= q.pow(i) - 1;
    }
    o
}

/// A constructed classical group: matrices, form, numbering table, and the
/// verified permutation group.
pub struct ClassicalGroup {
    pub spec: GroupSpec,
    pub form: Option<FormSpec>,
    /// the defining matrix generators (possibly many; e.g. all transvections)
    pub mat_gens: Vec<Mat>,
    pub table: ActionTable,
    pub group: BsgsGroup,
    /// outer coset representative for the dual extension
    pub outer_rep: Option<Perm>,
    /// J matrix of the duality, when one exists
    pub duality: Option<Mat>,
}

impl ClassicalGroup {
    pub fn build(spec: GroupSpec, seed: u64) -> Result<Self, Error> {
        Self::build_capped(spec, seed, crate::bsgs::DEFAULT_MEMORY_CAP)
    }

    pub fn build_capped(spec: GroupSpec, seed: u64, memory_cap: usize) -> Result<Self, Error> {
        Self::build_inner(spec, seed, memory_cap, None)
    }

    /// Rebuild from previously computed (cached) permutation generators of the
    /// full group. The cached set is verified before use: the strong
    /// generating set it produces must reach the known order, and every
    /// defining generator must sift through it.
    pub fn build_from_cached_gens(
        spec: GroupSpec,
        seed: u64,
        memory_cap: usize,
        cached: &[Perm],
    ) -> Result<Self, Error> {
        Self::build_inner(spec, seed, memory_cap, Some(cached))
    }

    fn build_inner(
        spec: GroupSpec,
        seed: u64,
        memory_cap: usize,
        cached: Option<&[Perm]>,
    ) -> Result<Self, Error> {
        let p = spec.q;
        if !gf::SUPPORTED_PRIMES.contains(&p) {
            return Err(Error::UnsupportedSpec(spec.describe()));
        }
        let known = group_order_formula(&spec)?;
        let dim = match spec.family {
            Family::WreathSL2 => 4,
            _ => spec.n,
        };
        let (form, mat_gens, duality): (Option<FormSpec>, Vec<Mat>, Option<Mat>) =
            match spec.family {
                Family::SL => (None, sl_gens(p, spec.n), None),
                Family::Sp => {
                    let form = FormSpec::symplectic(p, spec.n);
                    let gens = sp_transvection_gens(&form);
                    (Some(form), gens, None)
                }
                Family::GOPlus | Family::GOMinus => {
                    let form = if spec.family == Family::GOPlus {
                        FormSpec::quadratic_plus(p, spec.n)
                    } else {
                        FormSpec::quadratic_minus(p, spec.n)
                    };
                    let gens = go_gens(&form)?;
                    (Some(form), gens, None)
                }
                Family::SOOdd => {
                    let form = FormSpec::symmetric_odd(p, spec.n);
                    let gens = so_odd_gens(&form);
                    (Some(form), gens, None)
                }
                Family::SLDualExt => {
                    if spec.action != Action::VectorsPlusCovectors {
                        return Err(Error::UnsupportedSpec(spec.describe()));
                    }
                    let j = duality_matrix(p, spec.n);
                    (None, gl_gens(p, spec.n), Some(j))
                }
                Family::WreathSL2 => {
                    let mut gens: Vec<Mat> = Vec::new();
                    for g in sl_gens(p, 2) {
                        gens.push(embed_block(&g, 0));
                        gens.push(embed_block(&g, 2));
                    }
                    gens.push(block_swap(p));
                    (None, gens, None)
                }
            };
        for (gi, g) in mat_gens.iter().enumerate() {
            if let Some(f) = &form {
                if !f.is_isometry(g) {
                    return Err(Error::ElementProperty(format!(
                        "generator {gi} does not preserve the form"
                    )));
                }
            }
            if !g.is_invertible() {
                return Err(Error::Singular);
            }
        }
        let table = ActionTable::new(p, dim, spec.action, form.as_ref());
        let mut perm_gens: Vec<Perm> = mat_gens
            .iter()
            .map(|m| table.perm_of(m))
            .collect::<Result<_, _>>()?;
        let mut outer_rep = None;
        if spec.family == Family::SLDualExt {
            let r = table.duality_perm(duality.as_ref().unwrap())?;
            perm_gens.push(r.clone());
            outer_rep = Some(r);
        }
        // verify the full generating set, then shrink to a small random set
        // (class enumeration walks every generator per element, so a handful
        // of verified generators beats hundreds of transvections)
        let group = match cached {
            None => {
                let full = BsgsGroup::build_capped(&perm_gens, Some(known), seed, memory_cap)?;
                shrink_generators(&full, seed, memory_cap)?
            }
            Some(gens) => {
                let g = BsgsGroup::build_capped(gens, Some(known), seed, memory_cap)?;
                if !perm_gens.iter().all(|h| g.contains(h)) {
                    return Err(Error::NotInGroup);
                }
                g
            }
        };
        Ok(ClassicalGroup {
            spec,
            form,
            mat_gens,
            table,
            group,
            outer_rep,
            duality,
        })
    }

    pub fn perm_of(&self, m: &Mat) -> Result<Perm, Error> {
        self.table.perm_of(m)
    }

    pub fn order(&self) -> u128 {
        self.group.order()
    }

    /// The conformal extension CO = <GO, s> where s is the similitude scaling
    /// the second hyperbolic half by a non-square. Over the algebraic closure
    /// all similitudes are scalar multiples of isometries, so orbit statements
    /// about C_G(x) on 1-spaces descend to this group rather than to GO(q)
    /// itself; rationally it is an index-2 overgroup for odd q (and equals GO
    /// at q = 2, where 1 is the only multiplier).
    pub fn conformal_extension(&self, seed: u64) -> Result<BsgsGroup, Error> {
        if !matches!(self.spec.family, Family::GOPlus) {
            return Err(Error::UnsupportedSpec(self.spec.describe()));
        }
        let p = self.spec.q;
        if p == 2 {
            return BsgsGroup::build(self.group.generators(), Some(self.group.order()), seed);
        }
        let s = similitude_plus(p, self.spec.n, nonsquare(p));
        let mut gens = self.group.generators().to_vec();
        gens.push(self.table.perm_of(&s)?);
        BsgsGroup::build(&gens, Some(2 * self.group.order()), seed)
    }
}

/// diag(1..1, c..c) multiplying the plus-type quadratic form by c.
pub fn similitude_plus(p: u8, n: usize, c: u8) -> Mat {
    let m = n / 2;
    let mut s = Mat::zero(p, n);
    for i in 0..n {
        s.set(i, i, if i < m { 1 } else { c });
    }
    s
}

fn nonsquare(p: u8) -> u8 {
    (2..p)
        .find(|&c| (1..p).all(|t| gf::mul(p, t, t) != c))
        .expect("odd prime fields have non-squares")
}

fn shrink_generators(full: &BsgsGroup, seed: u64, memory_cap: usize) -> Result<BsgsGroup, Error> {
    let order = full.order();
    if full.generators().len() <= 4 || order == 1 {
        let gens = full.generators().to_vec();
        return BsgsGroup::build_capped(&gens, Some(order), seed, memory_cap);
    }
    for k in 2..=5u64 {
        let gens: Vec<Perm> = (0..=k).map(|i| full.random_element(seed ^ (i << 32))).collect();
        if let Ok(g) = BsgsGroup::build_capped(&gens, Some(order), seed, memory_cap) {
            return Ok(g);
        }
    }
    let gens = full.generators().to_vec();
    BsgsGroup::build_capped(&gens, Some(order), seed, memory_cap)
}

pub fn sl_gens(p: u8, n: usize) -> Vec<Mat> {
    let mut gens = Vec::new();
    for i in 0..n - 1 {
        for (a, b) in [(i, i + 1), (i + 1, i)] {
            let mut m = Mat::identity(p, n);
            m.set(a, b, 1);
            gens.push(m);
        }
    }
    gens
}

pub fn gl_gens(p: u8, n: usize) -> Vec<Mat> {
    let mut gens = sl_gens(p, n);
    if p > 2 {
        let prim = match p {
            3 | 5 => 2,
            7 => 3,
            _ => unreachable!(),
        };
        let mut m = Mat::identity(p, n);
        m.set(0, 0, prim);
        gens.push(m);
    }
    gens
}

fn sp_transvection_gens(form: &FormSpec) -> Vec<Mat> {
    all_nonzero_vectors(form.p, form.n)
        .iter()
        .map(|v| crate::elements::sp_transvection(form, v, 1))
        .collect()
}

fn go_gens(form: &FormSpec) -> Result<Vec<Mat>, Error> {
    let p = form.p;
    let n = form.n;
    let mut gens = Vec::new();
    if p == 2 {
        for v in all_nonzero_vectors(p, n) {
            if form.q_value(&v) != 0 {
                gens.push(crate::elements::orthogonal_transvection(form, &v)?);
            }
        }
        if form.kind == FormKind::QuadraticPlus {
            // hyperbolic-plane swap (e1 f1) <-> (e2 f2); needed at n=4 where
            // the transvections alone generate a proper subgroup, harmless
            // (and order-verified) elsewhere
            let mut m = Mat::zero(p, n);
            let mut target: Vec<usize> = (0..n).collect();
            target.swap(0, 1);
            target.swap(n - 1, n - 2);
            for (i, &t) in target.iter().enumerate() {
                m.set(i, t, 1);
            }
            if !form.is_isometry(&m) {
                return Err(Error::ElementProperty("plane swap not an isometry".into()));
            }
            gens.push(m);
        }
    } else {
        for v in all_nonzero_vectors(p, n) {
            if normalize_projective(p, &v) == v && form.q_value(&v) != 0 {
                gens.push(crate::elements::reflection(form, &v)?);
            }
        }
    }
    Ok(gens)
}

fn so_odd_gens(form: &FormSpec) -> Vec<Mat> {
    let p = form.p;
    let reflections: Vec<Mat> = all_nonzero_vectors(p, form.n)
        .iter()
        .filter(|v| normalize_projective(p, v) == **v && form.q_value(v) != 0)
        .map(|v| crate::elements::reflection(form, v).expect("nondegenerate"))
        .collect();
    let r0 = reflections[0].clone();
    reflections[1..].iter().map(|r| r0.mul(r)).collect()
}

/// Fixed duality matrix: alternating for even n (so the graph involution has
/// symplectic centralizer), the identity for odd n.
pub fn duality_matrix(p: u8, n: usize) -> Mat {
    if n % 2 == 1 {
        return Mat::identity(p, n);
    }
    let mut j = Mat::zero(p, n);
    for i in (0..n).step_by(2) {
        j.set(i, i + 1, 1);
        j.set(i + 1, i, gf::neg(p, 1));
    }
    j
}

pub fn embed_block(g: &Mat, offset: usize) -> Mat {
    let mut m = Mat::identity(g.p, 4);
    for i in 0..2 {
        for j in 0..2 {
            m.set(offset + i, offset + j, g.get(i, j));
        }
    }
    m
}

pub fn block_swap(p: u8) -> Mat {
    let mut m = Mat::zero(p, 4);
    for i in 0..2 {
        m.set(i, i + 2, 1);
        m.set(i + 2, i, 1);
    }
    m
}
