use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// A permutation of `{0..degree-1}`, stored as its image array.
///
/// Composition is left-to-right throughout the crate:
/// `a.compose(&b)` maps `i` to `b(a(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    img: Vec<u16>,
}

impl core::fmt::Debug for Perm {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Perm{:?}", self.img)
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            img: (0..degree as u16).collect(),
        }
    }

    pub fn from_images(img: Vec<u16>) -> Result<Self, Error> {
        let n = img.len();
        let mut seen = vec![false; n];
        for &v in &img {
            if (v as usize) >= n || seen[v as usize] {
                return Err(Error::NotBijective(v as usize));
            }
            seen[v as usize] = true;
        }
        Ok(Perm { img })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.img.len()
    }

    #[inline]
    pub fn apply(&self, i: u16) -> u16 {
        self.img[i as usize]
    }

    pub fn images(&self) -> &[u16] {
        &self.img
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &v)| i as u16 == v)
    }

    /// Left-to-right composition: result maps `i` to `other(self(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        let img = self.img.iter().map(|&v| other.img[v as usize]).collect();
        Perm { img }
    }

    pub fn compose_checked(&self, other: &Perm) -> Result<Perm, Error> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose(other))
    }

    pub fn inverse(&self) -> Perm {
        let mut img = vec![0u16; self.img.len()];
        for (i, &v) in self.img.iter().enumerate() {
            img[v as usize] = i as u16;
        }
        Perm { img }
    }

    /// `s^-1 * self * s` (left-to-right products).
    pub fn conjugate_by(&self, s: &Perm) -> Perm {
        let sinv = s.inverse();
        sinv.compose(self).compose(s)
    }

    /// `self^-1 * other^-1 * self * other`.
    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse()
            .compose(&other.inverse())
            .compose(self)
            .compose(other)
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Cycle lengths with multiplicities, sorted by length.
    pub fn cycle_type(&self) -> Vec<(u16, u32)> {
        let n = self.img.len();
        let mut seen = vec![false; n];
        let mut counts: Vec<(u16, u32)> = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut len = 0u16;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = self.img[j] as usize;
                len += 1;
            }
            match counts.iter_mut().find(|(l, _)| *l == len) {
                Some((_, c)) => *c += 1,
                None => counts.push((len, 1)),
            }
        }
        counts.sort_unstable();
        counts
    }

    pub fn order(&self) -> u64 {
        let mut ord = 1u64;
        for (len, _) in self.cycle_type() {
            ord = lcm(ord, len as u64);
        }
        ord
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Order of the product `a*b` without materializing it.
pub fn product_order(a: &Perm, b: &Perm) -> u64 {
    let n = a.degree();
    let mut seen = vec![false; n];
    let mut ord = 1u64;
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let mut len = 0u64;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = b.apply(a.apply(j as u16)) as usize;
            len += 1;
        }
        ord = lcm(ord, len);
    }
    ord
}

pub fn is_p_power(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}
