//! Base / strong-generating-set machinery: randomized Schreier-Sims with an
//! order oracle when one is available, deterministic Schreier verification
//! otherwise. Transversals are stored explicitly (together with inverses) so
//! that elements can be rebuilt and evaluated from their base images cheaply.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::perm::Perm;

/// Images of the base under a group element. Given a fixed stabilizer chain
/// this determines the element uniquely.
pub type ElementKey = Vec<u16>;

pub const DEFAULT_MEMORY_CAP: usize = 4 << 30;

struct Level {
    beta: u16,
    gens: Vec<Perm>,
    /// orbit point -> index into `trans`
    orbit: HashMap<u16, u32>,
    trans: Vec<Perm>,
    trans_inv: Vec<Perm>,
}

impl Level {
    fn new(beta: u16, degree: usize) -> Self {
        let mut level = Level {
            beta,
            gens: Vec::new(),
            orbit: HashMap::new(),
            trans: Vec::new(),
            trans_inv: Vec::new(),
        };
        level.orbit.insert(beta, 0);
        level.trans.push(Perm::identity(degree));
        level.trans_inv.push(Perm::identity(degree));
        level
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        self.orbit.clear();
        self.trans.clear();
        self.trans_inv.clear();
        self.orbit.insert(self.beta, 0);
        self.trans.push(Perm::identity(degree));
        self.trans_inv.push(Perm::identity(degree));
        let mut head = 0;
        while head < self.trans.len() {
            let x = self.trans[head].apply(self.beta);
            let ux = self.trans[head].clone();
            head += 1;
            for g in &self.gens {
                let y = g.apply(x);
                if !self.orbit.contains_key(&y) {
                    let uy = ux.compose(g);
                    self.orbit.insert(y, self.trans.len() as u32);
                    self.trans_inv.push(uy.inverse());
                    self.trans.push(uy);
                }
            }
        }
    }

    fn bytes(&self, degree: usize) -> usize {
        (self.trans.len() * 2 + self.gens.len()) * degree * 2
    }
}

/// Incremental stabilizer chain: sift-and-insert generator stream, explicit
/// order tracking, optional deterministic Schreier verification.
pub struct ChainBuilder {
    degree: usize,
    memory_cap: usize,
    levels: Vec<Level>,
}

impl ChainBuilder {
    pub fn new(degree: usize, memory_cap: usize) -> Self {
        ChainBuilder {
            degree,
            memory_cap,
            levels: Vec::new(),
        }
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.trans.len() as u128).product()
    }

    /// Sift `g`; insert the residue as a new strong generator if nontrivial.
    /// Returns whether the chain grew.
    pub fn add(&mut self, g: &Perm) -> Result<bool, Error> {
        let (r, lv) = self.sift_from(g, 0);
        if r.is_identity() {
            return Ok(false);
        }
        self.insert(r, lv)?;
        Ok(true)
    }

    fn insert(&mut self, g: Perm, level: usize) -> Result<(), Error> {
        if level == self.levels.len() {
            let beta = (0..self.degree as u16)
                .find(|&i| g.apply(i) != i)
                .expect("non-identity residue");
            self.levels.push(Level::new(beta, self.degree));
        }
        // g fixes beta_0..beta_{level-1}, so it is a generator of every
        // stabilizer down to `level` and may extend any of those orbits
        for j in 0..=level {
            self.levels[j].gens.push(g.clone());
            self.levels[j].rebuild_orbit(self.degree);
        }
        let used: usize = self.levels.iter().map(|l| l.bytes(self.degree)).sum();
        if used > self.memory_cap {
            return Err(Error::MemoryCap {
                used,
                cap: self.memory_cap,
            });
        }
        Ok(())
    }

    fn sift_from(&self, g: &Perm, start: usize) -> (Perm, usize) {
        let mut g = g.clone();
        for (i, l) in self.levels.iter().enumerate().skip(start) {
            let x = g.apply(l.beta);
            match l.orbit.get(&x) {
                Some(&idx) => g = g.compose(&l.trans_inv[idx as usize]),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    /// Deterministic verification: every Schreier generator of every level
    /// must sift to the identity below that level. Failures are inserted and
    /// the scan restarts, so on return `order()` is exactly the order of the
    /// group generated by the strong generators.
    pub fn verify_schreier(&mut self) -> Result<(), Error> {
        'restart: loop {
            for li in 0..self.levels.len() {
                let mut pts: Vec<u16> = self.levels[li].orbit.keys().copied().collect();
                pts.sort_unstable();
                for pt in pts {
                    let u = self.levels[li].trans[self.levels[li].orbit[&pt] as usize].clone();
                    for gi in 0..self.levels[li].gens.len() {
                        let g = self.levels[li].gens[gi].clone();
                        let y = g.apply(pt);
                        let uy_inv =
                            self.levels[li].trans_inv[self.levels[li].orbit[&y] as usize].clone();
                        let schreier = u.compose(&g).compose(&uy_inv);
                        let (r, lv) = self.sift_from(&schreier, li + 1);
                        if !r.is_identity() {
                            self.insert(r, lv)?;
                            continue 'restart;
                        }
                    }
                }
            }
            return Ok(());
        }
    }

    fn finish(self, gens: Vec<Perm>) -> BsgsGroup {
        let order = self.order();
        BsgsGroup {
            degree: self.degree,
            gens,
            levels: self.levels,
            order,
        }
    }
}

pub struct BsgsGroup {
    degree: usize,
    gens: Vec<Perm>,
    levels: Vec<Level>,
    order: u128,
}

impl BsgsGroup {
    pub fn build(gens: &[Perm], known_order: Option<u128>, seed: u64) -> Result<Self, Error> {
        Self::build_capped(gens, known_order, seed, DEFAULT_MEMORY_CAP)
    }

    pub fn build_capped(
        gens: &[Perm],
        known_order: Option<u128>,
        seed: u64,
        memory_cap: usize,
    ) -> Result<Self, Error> {
        assert!(!gens.is_empty(), "need at least one generator");
        let degree = gens[0].degree();
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let mut chain = ChainBuilder::new(degree, memory_cap);
        let nontrivial: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        for g in &nontrivial {
            chain.add(g)?;
        }
        if nontrivial.is_empty() {
            if let Some(want) = known_order {
                if want != 1 {
                    return Err(Error::OrderMismatch { got: 1, want });
                }
            }
            return Ok(chain.finish(gens.to_vec()));
        }

        // product-replacement walk, sifting every visited element
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = nontrivial.clone();
        while state.len() < 6 {
            state.push(Perm::identity(degree));
        }
        let mut quiet = 0usize;
        let mut steps = 0usize;
        loop {
            match known_order {
                Some(want) => {
                    let got = chain.order();
                    if got == want {
                        break;
                    }
                    if got > want || steps > 400_000 {
                        return Err(Error::OrderMismatch { got, want });
                    }
                }
                None => {
                    if quiet >= 64 {
                        break;
                    }
                }
            }
            steps += 1;
            let i = (rng.next_u32() as usize) % state.len();
            let j = (rng.next_u32() as usize) % state.len();
            if i == j {
                continue;
            }
            let rhs = if rng.next_u32() & 1 == 0 {
                state[j].clone()
            } else {
                state[j].inverse()
            };
            state[i] = state[i].compose(&rhs);
            if chain.add(&state[i])? {
                quiet = 0;
            } else {
                quiet += 1;
            }
        }
        if known_order.is_none() {
            chain.verify_schreier()?;
        }
        Ok(chain.finish(gens.to_vec()))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn base(&self) -> Vec<u16> {
        self.levels.iter().map(|l| l.beta).collect()
    }

    pub fn base_len(&self) -> usize {
        self.levels.len()
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.trans.len()).collect()
    }

    /// All strong generators (for persistence; feeding these back through
    /// `build` with any seed reproduces the same order).
    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out = Vec::new();
        for l in &self.levels {
            out.extend(l.gens.iter().cloned());
        }
        out
    }

    /// Sift `g`; returns the residue and the level where sifting stopped.
    pub fn sift(&self, g: &Perm) -> (Perm, usize) {
        let mut g = g.clone();
        for (i, l) in self.levels.iter().enumerate() {
            let x = g.apply(l.beta);
            match l.orbit.get(&x) {
                Some(&idx) => g = g.compose(&l.trans_inv[idx as usize]),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (r, _) = self.sift(g);
        r.is_identity()
    }

    pub fn canonical_key(&self, g: &Perm) -> Result<ElementKey, Error> {
        if !self.contains(g) {
            return Err(Error::NotInGroup);
        }
        Ok(self.key_of(g))
    }

    /// Base images of `g` (membership not rechecked).
    pub fn key_of(&self, g: &Perm) -> ElementKey {
        self.levels.iter().map(|l| g.apply(l.beta)).collect()
    }

    /// Decompose a key into its transversal chain: the element acts as
    /// `x -> u_0(u_1(...u_{L-1}(x)))`.
    fn key_chain(&self, key: &[u16]) -> Result<Vec<&Perm>, Error> {
        if key.len() != self.levels.len() {
            return Err(Error::UnrealizableKey);
        }
        let mut imgs: Vec<u16> = key.to_vec();
        let mut ups = Vec::with_capacity(key.len());
        for (i, l) in self.levels.iter().enumerate() {
            let idx = *l.orbit.get(&imgs[i]).ok_or(Error::UnrealizableKey)? as usize;
            let u_inv = &l.trans_inv[idx];
            for img in imgs.iter_mut().skip(i + 1) {
                *img = u_inv.apply(*img);
            }
            ups.push(&l.trans[idx]);
        }
        Ok(ups)
    }

    pub fn element_from_key(&self, key: &[u16]) -> Result<Perm, Error> {
        let ups = self.key_chain(key)?;
        let mut g = Perm::identity(self.degree);
        for u in ups.iter().rev() {
            g = g.compose(u);
        }
        Ok(g)
    }

    /// Evaluate the element with the given key at selected points without
    /// materializing the full permutation.
    pub fn eval_key(&self, key: &[u16], points: &[u16], out: &mut Vec<u16>) -> Result<(), Error> {
        let ups = self.key_chain(key)?;
        out.clear();
        for &pt in points {
            let mut x = pt;
            for u in ups.iter().rev() {
                x = u.apply(x);
            }
            out.push(x);
        }
        Ok(())
    }

    /// Key of `s^-1 g s` where `g` is given by `key`; `s_inv` must be the
    /// inverse of `s`.
    pub fn conjugate_key(&self, key: &[u16], s: &Perm, s_inv: &Perm) -> Result<ElementKey, Error> {
        let ups = self.key_chain(key)?;
        let mut out = Vec::with_capacity(self.levels.len());
        for l in &self.levels {
            let mut x = s_inv.apply(l.beta);
            for u in ups.iter().rev() {
                x = u.apply(x);
            }
            out.push(s.apply(x));
        }
        Ok(out)
    }

    /// Seeded uniform random element: one transversal representative per level.
    pub fn random_element(&self, seed: u64) -> Perm {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Perm::identity(self.degree);
        for l in self.levels.iter().rev() {
            let idx = (rng.next_u64() as usize) % l.trans.len();
            g = g.compose(&l.trans[idx]);
        }
        g
    }

    /// Orbit of a point under the full group, with a transversal witness per
    /// orbit point.
    pub fn orbit(&self, point: u16) -> (Vec<u16>, Vec<Perm>) {
        orbit_with_transversal(&self.gens, point, self.degree)
    }
}

pub fn orbit_with_transversal(gens: &[Perm], point: u16, degree: usize) -> (Vec<u16>, Vec<Perm>) {
    let mut index: HashMap<u16, u32> = HashMap::new();
    let mut pts = vec![point];
    let mut trans = vec![Perm::identity(degree)];
    index.insert(point, 0);
    let mut head = 0;
    while head < pts.len() {
        let x = pts[head];
        let ux = trans[head].clone();
        head += 1;
        for g in gens {
            let y = g.apply(x);
            if !index.contains_key(&y) {
                index.insert(y, pts.len() as u32);
                pts.push(y);
                trans.push(ux.compose(g));
            }
        }
    }
    (pts, trans)
}

/// Orbits of a generator set on an arbitrary point set; errors if a generator
/// leaves the set. Returns sorted orbit lengths.
pub fn orbit_lengths_on_set(gens: &[Perm], set: &[u16]) -> Result<Vec<usize>, Error> {
    let mut member: HashMap<u16, bool> = set.iter().map(|&x| (x, false)).collect();
    let mut lengths = Vec::new();
    for &start in set {
        if member[&start] {
            continue;
        }
        let mut frontier = vec![start];
        *member.get_mut(&start).unwrap() = true;
        let mut size = 0usize;
        while let Some(x) = frontier.pop() {
            size += 1;
            for g in gens {
                let y = g.apply(x);
                match member.get_mut(&y) {
                    Some(seen) => {
                        if !*seen {
                            *seen = true;
                            frontier.push(y);
                        }
                    }
                    None => return Err(Error::EscapesSet(y as usize)),
                }
            }
        }
        lengths.push(size);
    }
    lengths.sort_unstable();
    Ok(lengths)
}
