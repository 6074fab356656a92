//! Conjugacy classes by breadth-first search over element keys.
//!
//! A class is stored as the set of base-image keys of its elements, never as
//! full permutations: conjugating a key by a generator costs O(L^2) transversal
//! lookups for a chain of length L, so a class of a few million elements in a
//! degree-6560 action stays within a few hundred megabytes. Each key carries a
//! backpointer to the BFS edge that discovered it, which doubles as a witness
//! factory (conjugators to the representative) and as the Schreier-generator
//! stream for the centralizer.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::bsgs::{BsgsGroup, ChainBuilder, ElementKey, DEFAULT_MEMORY_CAP};
use crate::error::Error;
use crate::perm::Perm;

const NO_PARENT: u16 = u16::MAX;

/// Cheap conjugation invariant used to bucket classes before exact tests.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub order: u64,
    /// sorted (cycle length, multiplicity) pairs
    pub cycle_type: Vec<(u16, u32)>,
}

pub fn fingerprint(g: &Perm) -> Fingerprint {
    Fingerprint {
        order: g.order(),
        cycle_type: g.cycle_type(),
    }
}

pub fn is_p_element(g: &Perm, p: u8) -> bool {
    let mut o = g.order();
    while o % p as u64 == 0 {
        o /= p as u64;
    }
    o == 1
}

/// p'-part of g: the power of g whose order is coprime to p.
pub fn semisimple_part(g: &Perm, p: u8) -> Perm {
    let o = g.order();
    let mut pk: u64 = 1;
    let mut rest = o;
    while rest % p as u64 == 0 {
        rest /= p as u64;
        pk *= p as u64;
    }
    if pk == 1 {
        return g.clone();
    }
    if rest == 1 {
        return Perm::identity(g.degree());
    }
    // exponent e with e = 0 mod pk, e = 1 mod rest, reduced mod the order
    let inv = mod_inverse(pk % rest, rest);
    let e = ((pk as u128 * inv as u128) % o as u128) as u64;
    g.pow(e)
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    // extended Euclid; gcd(a, m) = 1 by construction
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m as i128) as u64
}

/// An enumerated conjugacy class together with its centralizer.
pub struct ClassHandle {
    pub rep: Perm,
    pub keys: Vec<ElementKey>,
    index: HashMap<ElementKey, u32>,
    /// (parent position, generator index) of the discovering BFS edge
    parents: Vec<(u32, u16)>,
    pub centralizer: BsgsGroup,
    pub fingerprint: Fingerprint,
}

impl ClassHandle {
    pub fn size(&self) -> usize {
        self.keys.len()
    }

    pub fn centralizer_order(&self) -> u128 {
        self.centralizer.order()
    }

    pub fn contains_key(&self, key: &[u16]) -> bool {
        self.index.contains_key(key)
    }

    pub fn contains(&self, group: &BsgsGroup, g: &Perm) -> bool {
        group.contains(g) && self.index.contains_key(group.key_of(g).as_slice())
    }

    pub fn element_at(&self, group: &BsgsGroup, i: usize) -> Result<Perm, Error> {
        group.element_from_key(&self.keys[i])
    }

    /// Conjugator from the representative to the element at key position `i`:
    /// the product of generators along the BFS tree path.
    pub fn conjugator_at(&self, group: &BsgsGroup, i: usize) -> Perm {
        let gens = group.generators();
        let mut path = Vec::new();
        let mut cur = i as u32;
        while self.parents[cur as usize].1 != NO_PARENT {
            let (parent, gi) = self.parents[cur as usize];
            path.push(gi);
            cur = parent;
        }
        let mut t = Perm::identity(group.degree());
        for &gi in path.iter().rev() {
            t = t.compose(&gens[gi as usize]);
        }
        t
    }

    /// Witness that `g` is conjugate to the representative: some `t` with
    /// `rep^t = g`, or None if `g` is not in the class.
    pub fn conjugator_to(&self, group: &BsgsGroup, g: &Perm) -> Option<Perm> {
        if !group.contains(g) {
            return None;
        }
        let i = *self.index.get(group.key_of(g).as_slice())? as usize;
        Some(self.conjugator_at(group, i))
    }

    /// Orbit sizes of the centralizer of the representative acting by
    /// conjugation on another class. One orbit means the ambient group is
    /// transitive on pairs (x, y') with x in this class, y' in `other`.
    pub fn centralizer_orbits_on(
        &self,
        group: &BsgsGroup,
        other: &ClassHandle,
    ) -> Result<Vec<usize>, Error> {
        let mut acting: Vec<(Perm, Perm)> = Vec::new();
        for s in self.centralizer.generators() {
            acting.push((s.clone(), s.inverse()));
        }
        let mut seen = vec![false; other.size()];
        let mut sizes = Vec::new();
        for start in 0..other.size() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut frontier = vec![start as u32];
            let mut count = 1usize;
            while let Some(i) = frontier.pop() {
                for (s, si) in &acting {
                    let k2 = group.conjugate_key(&other.keys[i as usize], s, si)?;
                    let j = *other
                        .index
                        .get(k2.as_slice())
                        .ok_or(Error::NotInGroup)? as usize;
                    if !seen[j] {
                        seen[j] = true;
                        count += 1;
                        frontier.push(j as u32);
                    }
                }
            }
            sizes.push(count);
        }
        sizes.sort_unstable();
        Ok(sizes)
    }
}

/// Enumerate the conjugacy class of `rep` in `group`, harvesting the
/// centralizer from the Schreier generators of the conjugation action.
pub fn enumerate_class(
    group: &BsgsGroup,
    rep: &Perm,
    cap: usize,
    seed: u64,
) -> Result<ClassHandle, Error> {
    let gens = group.generators();
    let gens_inv: Vec<Perm> = gens.iter().map(Perm::inverse).collect();
    let rep_key = group.canonical_key(rep)?;

    let mut keys: Vec<ElementKey> = vec![rep_key.clone()];
    let mut index: HashMap<ElementKey, u32> = HashMap::new();
    index.insert(rep_key, 0);
    let mut parents: Vec<(u32, u16)> = vec![(0, NO_PARENT)];

    let mut head = 0usize;
    while head < keys.len() {
        for (gi, (s, si)) in gens.iter().zip(&gens_inv).enumerate() {
            let k2 = group.conjugate_key(&keys[head], s, si)?;
            if !index.contains_key(k2.as_slice()) {
                if keys.len() >= cap {
                    return Err(Error::ClassCap {
                        reached: keys.len(),
                        cap,
                    });
                }
                index.insert(k2.clone(), keys.len() as u32);
                keys.push(k2);
                parents.push((head as u32, gi as u16));
            }
        }
        head += 1;
    }

    let size = keys.len() as u128;
    if group.order() % size != 0 {
        return Err(Error::CentralizerVerify {
            want: 0,
            got: size,
        });
    }
    let target = group.order() / size;
    let handle = ClassHandle {
        rep: rep.clone(),
        keys,
        index,
        parents,
        centralizer: BsgsGroup::build(&[Perm::identity(group.degree())], Some(1), seed)?,
        fingerprint: fingerprint(rep),
    };
    let centralizer = harvest_centralizer(group, &handle, target, seed)?;
    Ok(ClassHandle {
        centralizer,
        ..handle
    })
}

/// Centralizer of the class representative via Schreier generators of the BFS
/// tree: for the edge (k, s) landing on a known key k', the element
/// t(k) s t(k')^-1 centralizes the representative. Edges are replayed in BFS
/// order until the incremental chain reaches the known order |G| / |class|.
fn harvest_centralizer(
    group: &BsgsGroup,
    class: &ClassHandle,
    target: u128,
    seed: u64,
) -> Result<BsgsGroup, Error> {
    let gens = group.generators();
    let gens_inv: Vec<Perm> = gens.iter().map(Perm::inverse).collect();
    let mut builder = ChainBuilder::new(group.degree(), DEFAULT_MEMORY_CAP);
    let mut harvested: Vec<Perm> = Vec::new();

    if target == 1 {
        return BsgsGroup::build(&[Perm::identity(group.degree())], Some(1), seed);
    }

    'replay: for head in 0..class.size() {
        let t_head = class.conjugator_at(group, head);
        for (gi, (s, si)) in gens.iter().zip(&gens_inv).enumerate() {
            let k2 = group.conjugate_key(&class.keys[head], s, si)?;
            let j = class.index[k2.as_slice()] as usize;
            if class.parents[j] == (head as u32, gi as u16) {
                continue; // tree edge, trivial Schreier generator
            }
            let z = t_head
                .compose(s)
                .compose(&class.conjugator_at(group, j).inverse());
            debug_assert_eq!(class.rep.conjugate_by(&z), class.rep);
            if !z.is_identity() {
                harvested.push(z.clone());
                builder.add(&z)?;
                if builder.order() == target {
                    break 'replay;
                }
            }
        }
    }

    if builder.order() != target {
        // the incremental chain can undercount the generated subgroup; a
        // Schreier verification pass completes it
        builder.verify_schreier()?;
    }
    if builder.order() != target {
        return Err(Error::CentralizerVerify {
            want: target,
            got: builder.order(),
        });
    }
    if harvested.is_empty() {
        harvested.push(Perm::identity(group.degree()));
    }
    BsgsGroup::build(&harvested, Some(target), seed)
}

/// One met class in a product or commutator decomposition.
pub struct DecompRow {
    pub fingerprint: Fingerprint,
    pub rep: Perm,
    pub class_size: usize,
    /// m_E = #{y in D : x*y in E} for the fixed x
    pub multiplicity: usize,
    /// a y realizing the row: x*y (resp. [x,y]) is conjugate to `rep`
    pub witness: Perm,
}

pub struct Decomposition {
    pub rows: Vec<DecompRow>,
    /// |D|; equals the multiplicity sum by construction
    pub total: usize,
}

impl Decomposition {
    /// rows sorted by (class size, element order, fingerprint)
    pub fn sorted_rows(&self) -> Vec<&DecompRow> {
        let mut rows: Vec<&DecompRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| {
            (a.class_size, a.fingerprint.order, &a.fingerprint)
                .cmp(&(b.class_size, b.fingerprint.order, &b.fingerprint))
        });
        rows
    }
}

/// Decompose {x * y : y in D} (for the fixed x = rep of C) into classes. The
/// class decomposition of the full product set CD is the same, since
/// CD = union over g of (xD)^g. Met classes are identified exactly: products
/// are bucketed by fingerprint and tested for key membership against every
/// registered class with that fingerprint, enumerating a new class on a miss.
pub fn class_product_decompose(
    group: &BsgsGroup,
    c: &ClassHandle,
    d: &ClassHandle,
    cap_class: usize,
    cap_total: usize,
    seed: u64,
) -> Result<Decomposition, Error> {
    decompose_map(group, d, cap_class, cap_total, seed, |y| c.rep.compose(y))
}

/// Same for the commutator set {[x, y] : y in D}, x fixed in C; justified by
/// [x^g, y'] = [x, y'^(g^-1)]^g.
pub fn commutator_decompose(
    group: &BsgsGroup,
    c: &ClassHandle,
    d: &ClassHandle,
    cap_class: usize,
    cap_total: usize,
    seed: u64,
) -> Result<Decomposition, Error> {
    let x_inv = c.rep.inverse();
    decompose_map(group, d, cap_class, cap_total, seed, |y| {
        x_inv.compose(&y.inverse()).compose(&c.rep).compose(y)
    })
}

fn decompose_map(
    group: &BsgsGroup,
    d: &ClassHandle,
    cap_class: usize,
    cap_total: usize,
    seed: u64,
    f: impl Fn(&Perm) -> Perm,
) -> Result<Decomposition, Error> {
    // registered classes bucketed by fingerprint; indices into `rows`
    let mut buckets: HashMap<Fingerprint, Vec<usize>> = HashMap::new();
    let mut classes: Vec<ClassHandle> = Vec::new();
    let mut rows: Vec<DecompRow> = Vec::new();
    let mut enumerated_total = 0usize;
    for i in 0..d.size() {
        let y = d.element_at(group, i)?;
        let prod = f(&y);
        let fp = fingerprint(&prod);
        let key = group.key_of(&prod);
        let bucket = buckets.entry(fp.clone()).or_default();
        let mut hit = None;
        for &ci in bucket.iter() {
            if classes[ci].contains_key(key.as_slice()) {
                hit = Some(ci);
                break;
            }
        }
        let ci = match hit {
            Some(ci) => ci,
            None => {
                let handle = enumerate_class(group, &prod, cap_class, seed)?;
                enumerated_total += handle.size();
                if enumerated_total > cap_total {
                    return Err(Error::TotalCap {
                        reached: enumerated_total,
                        cap: cap_total,
                    });
                }
                rows.push(DecompRow {
                    fingerprint: fp,
                    rep: prod.clone(),
                    class_size: handle.size(),
                    multiplicity: 0,
                    witness: y.clone(),
                });
                classes.push(handle);
                bucket.push(classes.len() - 1);
                classes.len() - 1
            }
        };
        rows[ci].multiplicity += 1;
    }
    Ok(Decomposition {
        rows,
        total: d.size(),
    })
}

/// Exact conjugacy with witness: Some(t) with a^t = b iff conjugate.
pub fn are_conjugate(
    group: &BsgsGroup,
    a: &Perm,
    b: &Perm,
    cap: usize,
    seed: u64,
) -> Result<Option<Perm>, Error> {
    if fingerprint(a) != fingerprint(b) {
        return Ok(None);
    }
    let class = enumerate_class(group, a, cap, seed)?;
    Ok(class.conjugator_to(group, b))
}

/// Jordan decomposition at finite level: (s, u) with su = us = g, s of order
/// prime to p and u of p-power order, both powers of g.
pub fn semisimple_unipotent_parts(g: &Perm, p: u8) -> (Perm, Perm) {
    let s = semisimple_part(g, p);
    let u = g.compose(&s.inverse());
    debug_assert!(is_p_element(&u, p));
    debug_assert_eq!(s.compose(&u), u.compose(&s));
    (s, u)
}

/// All elements of a small permutation group, by explicit closure.
pub fn perm_group_elements(gens: &[Perm], cap: usize) -> Result<Vec<Perm>, Error> {
    assert!(!gens.is_empty());
    let ident = Perm::identity(gens[0].degree());
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(ident.clone());
    let mut elems = vec![ident];
    let mut head = 0;
    while head < elems.len() {
        let cur = elems[head].clone();
        head += 1;
        for g in gens {
            let next = cur.compose(g);
            if !seen.contains(&next) {
                if elems.len() >= cap {
                    return Err(Error::TotalCap {
                        reached: elems.len(),
                        cap,
                    });
                }
                seen.insert(next.clone());
                elems.push(next);
            }
        }
    }
    Ok(elems)
}

/// Conjugacy classes of a small group by brute force: (representative, size)
/// per class, in the enumeration order of `perm_group_elements`.
pub fn all_classes_brute(gens: &[Perm], cap: usize) -> Result<Vec<(Perm, usize)>, Error> {
    let elems = perm_group_elements(gens, cap)?;
    let mut remaining: HashSet<Perm> = elems.iter().cloned().collect();
    let mut out = Vec::new();
    for g in &elems {
        if !remaining.contains(g) {
            continue;
        }
        let class = conj_closure(gens, g);
        for c in &class {
            remaining.remove(c);
        }
        out.push((g.clone(), class.len()));
    }
    Ok(out)
}

fn conj_closure(gens: &[Perm], x: &Perm) -> Vec<Perm> {
    let gens_inv: Vec<Perm> = gens.iter().map(Perm::inverse).collect();
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(x.clone());
    let mut elems = vec![x.clone()];
    let mut head = 0;
    while head < elems.len() {
        let cur = elems[head].clone();
        head += 1;
        for (g, gi) in gens.iter().zip(&gens_inv) {
            let next = gi.compose(&cur).compose(g);
            if seen.insert(next.clone()) {
                elems.push(next);
            }
        }
    }
    elems
}

/// Decomposition of a product set into conjugacy classes. `products` must be
/// closed under conjugation by the group (any product of class elements is).
/// Returns (class representative, class size) pairs summing to the set size.
pub fn decompose_into_classes(
    gens: &[Perm],
    products: &HashSet<Perm>,
) -> Vec<(Perm, usize)> {
    let mut remaining: HashSet<Perm> = products.clone();
    let mut out = Vec::new();
    while let Some(start) = remaining.iter().min_by_key(|g| g.images().to_vec()) {
        let class = conj_closure(gens, &start.clone());
        for c in &class {
            remaining.remove(c);
        }
        out.push((class[0].clone(), class.len()));
    }
    out
}

/// All pairwise products x * y for x in `xs`, y in `ys`, capped.
pub fn product_set(xs: &[Perm], ys: &[Perm], cap: usize) -> Result<HashSet<Perm>, Error> {
    let mut out = HashSet::new();
    for x in xs {
        for y in ys {
            out.insert(x.compose(y));
            if out.len() > cap {
                return Err(Error::TotalCap {
                    reached: out.len(),
                    cap,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;
    use alloc::vec;

    fn s_n_gens(n: u16) -> Vec<Perm> {
        let transposition: Vec<u16> = core::iter::once(1)
            .chain(core::iter::once(0))
            .chain(2..n)
            .collect();
        let cycle: Vec<u16> = (1..n).chain(core::iter::once(0)).collect();
        vec![
            Perm::from_images(transposition).unwrap(),
            Perm::from_images(cycle).unwrap(),
        ]
    }

    #[test]
    fn s5_class_sizes_and_centralizers() {
        let gens = s_n_gens(5);
        let group = BsgsGroup::build(&gens, Some(120), 1).unwrap();
        // transposition class: size 10, centralizer order 12
        let t = Perm::from_images(vec![1, 0, 2, 3, 4]).unwrap();
        let c = enumerate_class(&group, &t, 10_000, 1).unwrap();
        assert_eq!(c.size(), 10);
        assert_eq!(c.centralizer_order(), 12);
        for z in c.centralizer.generators() {
            assert_eq!(t.conjugate_by(z), t);
        }
        // 5-cycle class: size 24, centralizer order 5
        let five = Perm::from_images(vec![1, 2, 3, 4, 0]).unwrap();
        let c5 = enumerate_class(&group, &five, 10_000, 1).unwrap();
        assert_eq!(c5.size(), 24);
        assert_eq!(c5.centralizer_order(), 5);
    }

    #[test]
    fn conjugator_witnesses_are_valid() {
        let gens = s_n_gens(6);
        let group = BsgsGroup::build(&gens, Some(720), 1).unwrap();
        let t = Perm::from_images(vec![1, 0, 3, 2, 4, 5]).unwrap();
        let c = enumerate_class(&group, &t, 10_000, 1).unwrap();
        assert_eq!(c.size(), 45);
        for i in (0..c.size()).step_by(7) {
            let elt = c.element_at(&group, i).unwrap();
            let w = c.conjugator_to(&group, &elt).unwrap();
            assert_eq!(c.rep.conjugate_by(&w), elt);
        }
        // not in the class
        let three = Perm::from_images(vec![1, 2, 0, 3, 4, 5]).unwrap();
        assert!(c.conjugator_to(&group, &three).is_none());
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        let gens = s_n_gens(5);
        let group = BsgsGroup::build(&gens, Some(120), 1).unwrap();
        let classes = all_classes_brute(&gens, 1000).unwrap();
        assert_eq!(classes.len(), 7);
        let total: usize = classes.iter().map(|(_, s)| s).sum();
        assert_eq!(total, 120);
        // cross-check each against the key-BFS enumeration
        for (rep, size) in &classes {
            let c = enumerate_class(&group, rep, 1000, 1).unwrap();
            assert_eq!(c.size(), *size);
            assert_eq!(
                c.centralizer_order() * (*size as u128),
                group.order()
            );
        }
    }

    #[test]
    fn semisimple_part_properties() {
        // order 6 element in S5: s-part for p=2 is the 3-cycle, for p=3 the
        // transposition
        let g = Perm::from_images(vec![1, 0, 3, 4, 2]).unwrap();
        assert_eq!(g.order(), 6);
        let s2 = semisimple_part(&g, 2);
        assert_eq!(s2.order(), 3);
        let s3 = semisimple_part(&g, 3);
        assert_eq!(s3.order(), 2);
        assert_eq!(s2.compose(&s3), g.compose(&Perm::identity(5)));
        assert!(is_p_element(&s3, 2));
        assert!(!is_p_element(&g, 2));
        assert!(is_p_element(&Perm::identity(5), 2));
    }

    #[test]
    fn centralizer_orbits_detect_transitivity() {
        // S5: transposition class (10), centralizer of a transposition is
        // S2 x S3 (order 12); orbits on the transposition class itself:
        // itself (1), disjoint (3), meeting in one point (6)
        let gens = s_n_gens(5);
        let group = BsgsGroup::build(&gens, Some(120), 1).unwrap();
        let t = Perm::from_images(vec![1, 0, 2, 3, 4]).unwrap();
        let c = enumerate_class(&group, &t, 1000, 1).unwrap();
        let orbits = c.centralizer_orbits_on(&group, &c).unwrap();
        assert_eq!(orbits, vec![1, 3, 6]);
    }

    #[test]
    fn product_set_decomposition() {
        // transpositions * transpositions in S4: identity, double
        // transpositions, 3-cycles
        let gens = s_n_gens(4);
        let t = Perm::from_images(vec![1, 0, 2, 3]).unwrap();
        let transpositions = conj_closure(&gens, &t);
        assert_eq!(transpositions.len(), 6);
        let prods = product_set(&transpositions, &transpositions, 1000).unwrap();
        let classes = decompose_into_classes(&gens, &prods);
        let mut sizes: Vec<usize> = classes.iter().map(|(_, s)| *s).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3, 8]);
        let total: usize = sizes.iter().sum();
        assert_eq!(total, prods.len());
    }

    #[test]
    fn class_cap_enforced() {
        let gens = s_n_gens(6);
        let group = BsgsGroup::build(&gens, Some(720), 1).unwrap();
        let t = Perm::from_images(vec![1, 0, 2, 3, 4, 5]).unwrap();
        assert!(matches!(
            enumerate_class(&group, &t, 3, 1),
            Err(Error::ClassCap { .. })
        ));
    }
}
