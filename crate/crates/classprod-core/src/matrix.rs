use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::gf;
use crate::perm::{is_p_power, lcm};

/// Square matrix over GF(p), row-major. Vectors are rows and act by `v * M`,
/// so matrix products compose left-to-right with the permutation convention.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub p: u8,
    pub n: usize,
    a: Vec<u8>,
}

impl core::fmt::Debug for Mat {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Mat(p={},[", self.p)?;
        for i in 0..self.n {
            write!(f, "{:?}", &self.a[i * self.n..(i + 1) * self.n])?;
        }
        write!(f, "])")
    }
}

impl Mat {
    pub fn zero(p: u8, n: usize) -> Self {
        Mat {
            p,
            n,
            a: vec![0; n * n],
        }
    }

    pub fn identity(p: u8, n: usize) -> Self {
        let mut m = Mat::zero(p, n);
        for i in 0..n {
            m.a[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(p: u8, rows: &[&[u8]]) -> Self {
        let n = rows.len();
        let mut m = Mat::zero(p, n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n);
            for (j, &v) in r.iter().enumerate() {
                m.a[i * n + j] = v % p;
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.a[i * self.n + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[u8] {
        &self.a
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.p, self.n)
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.n, other.n);
        debug_assert_eq!(self.p, other.p);
        let n = self.n;
        let p = self.p as u16;
        let mut out = Mat::zero(self.p, n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.a[i * n + k] as u16;
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.a[i * n + j] as u16 + aik * other.a[k * n + j] as u16;
                    out.a[i * n + j] = (v % p) as u8;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        let mut out = self.clone();
        for (x, &y) in out.a.iter_mut().zip(other.a.iter()) {
            *x = gf::add(self.p, *x, y);
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        let mut out = self.clone();
        for (x, &y) in out.a.iter_mut().zip(other.a.iter()) {
            *x = gf::sub(self.p, *x, y);
        }
        out
    }

    pub fn scale(&self, c: u8) -> Mat {
        let mut out = self.clone();
        for x in out.a.iter_mut() {
            *x = gf::mul(self.p, *x, c);
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.p, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.a[j * self.n + i] = self.a[i * self.n + j];
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[u8]) -> Vec<u8> {
        debug_assert_eq!(v.len(), self.n);
        let n = self.n;
        let p = self.p as u16;
        let mut out = vec![0u8; n];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for j in 0..n {
                let t = out[j] as u16 + vi as u16 * self.a[i * n + j] as u16;
                out[j] = (t % p) as u8;
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut m = self.a.clone();
        let n = self.n;
        let p = self.p;
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..n).find(|&r| m[r * n + col] != 0);
            let Some(pr) = pivot else { continue };
            m.swap_range(pr * n, rank * n, n);
            let inv = gf::inv(p, m[rank * n + col]);
            for j in 0..n {
                m[rank * n + j] = gf::mul(p, m[rank * n + j], inv);
            }
            for r in 0..n {
                if r != rank && m[r * n + col] != 0 {
                    let f = m[r * n + col];
                    for j in 0..n {
                        let t = gf::mul(p, f, m[rank * n + j]);
                        m[r * n + j] = gf::sub(p, m[r * n + j], t);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn inverse(&self) -> Result<Mat, Error> {
        let n = self.n;
        let p = self.p;
        // Gauss-Jordan on [self | I]
        let mut m = vec![0u8; n * 2 * n];
        for i in 0..n {
            m[i * 2 * n..i * 2 * n + n].copy_from_slice(self.row(i));
            m[i * 2 * n + n + i] = 1;
        }
        let w = 2 * n;
        for col in 0..n {
            let pivot = (col..n).find(|&r| m[r * w + col] != 0).ok_or(Error::Singular)?;
            m.swap_range(pivot * w, col * w, w);
            let inv = gf::inv(p, m[col * w + col]);
            for j in 0..w {
                m[col * w + j] = gf::mul(p, m[col * w + j], inv);
            }
            for r in 0..n {
                if r != col && m[r * w + col] != 0 {
                    let f = m[r * w + col];
                    for j in 0..w {
                        let t = gf::mul(p, f, m[col * w + j]);
                        m[r * w + j] = gf::sub(p, m[r * w + j], t);
                    }
                }
            }
        }
        let mut out = Mat::zero(p, n);
        for i in 0..n {
            out.a[i * n..(i + 1) * n].copy_from_slice(&m[i * w + n..i * w + 2 * n]);
        }
        Ok(out)
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    pub fn pow(&self, mut e: u128) -> Mat {
        let mut base = self.clone();
        let mut acc = Mat::identity(self.p, self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order; only sane for invertible matrices over tiny fields.
    pub fn order(&self) -> u64 {
        let mut ord = 1u64;
        let mut m = self.clone();
        let id = Mat::identity(self.p, self.n);
        while m != id {
            m = m.mul(self);
            ord += 1;
            assert!(ord < 1 << 24, "runaway matrix order");
        }
        ord
    }
}

trait SwapRange {
    fn swap_range(&mut self, a: usize, b: usize, len: usize);
}

impl SwapRange for Vec<u8> {
    fn swap_range(&mut self, a: usize, b: usize, len: usize) {
        if a == b {
            return;
        }
        for k in 0..len {
            self.swap(a + k, b + k);
        }
    }
}

/// Jordan partition of a unipotent matrix, from the ranks of `(g-1)^k`.
/// Returns block sizes in descending order.
pub fn jordan_type(g: &Mat) -> Result<Vec<usize>, Error> {
    let p = g.p;
    let n = g.n;
    let ord = g.order();
    if !is_p_power(ord, p as u64) {
        return Err(Error::NotUnipotent(ord, p));
    }
    let d = g.sub(&Mat::identity(p, n));
    let mut ranks = vec![n];
    let mut m = Mat::identity(p, n);
    loop {
        m = m.mul(&d);
        let r = m.rank();
        ranks.push(r);
        if r == 0 {
            break;
        }
    }
    // number of blocks of size >= k is rank((g-1)^(k-1)) - rank((g-1)^k)
    let mut parts = Vec::new();
    for k in 1..ranks.len() {
        let geq_k = ranks[k - 1] - ranks[k];
        let geq_k1 = if k + 1 < ranks.len() {
            ranks[k] - ranks[k + 1]
        } else {
            0
        };
        for _ in 0..geq_k.saturating_sub(geq_k1) {
            parts.push(k);
        }
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    debug_assert_eq!(parts.iter().sum::<usize>(), n);
    Ok(parts)
}

/// Render a partition in "4.2^2.1" style (descending blocks, `^` multiplicity).
pub fn partition_string(parts: &[usize]) -> alloc::string::String {
    use core::fmt::Write;
    let mut out = alloc::string::String::new();
    let mut i = 0;
    while i < parts.len() {
        let v = parts[i];
        let mut cnt = 0;
        while i < parts.len() && parts[i] == v {
            cnt += 1;
            i += 1;
        }
        if !out.is_empty() {
            out.push('.');
        }
        if cnt == 1 {
            let _ = write!(out, "{v}");
        } else {
            let _ = write!(out, "{v}^{cnt}");
        }
    }
    out
}

/// Parse "4.2^2.1" back into a descending partition.
pub fn parse_partition(s: &str) -> Result<Vec<usize>, Error> {
    let mut parts = Vec::new();
    for piece in s.split('.') {
        let (v, cnt) = match piece.split_once('^') {
            Some((a, b)) => (
                a.parse::<usize>().map_err(|_| Error::BadPartition(s.into()))?,
                b.parse::<usize>().map_err(|_| Error::BadPartition(s.into()))?,
            ),
            None => (
                piece
                    .parse::<usize>()
                    .map_err(|_| Error::BadPartition(s.into()))?,
                1,
            ),
        };
        if v == 0 || cnt == 0 {
            return Err(Error::BadPartition(s.into()));
        }
        for _ in 0..cnt {
            parts.push(v);
        }
    }
    for w in parts.windows(2) {
        if w[0] < w[1] {
            return Err(Error::BadPartition(s.into()));
        }
    }
    Ok(parts)
}

/// Jordan decomposition g = s*u = u*s with u a p-element and s of order prime
/// to p, via CRT powers of g.
pub fn semisimple_unipotent_parts(g: &Mat) -> (Mat, Mat) {
    let p = g.p as u64;
    let ord = g.order();
    let mut pk = 1u64;
    let mut rest = ord;
    while rest % p == 0 {
        rest /= p;
        pk *= p;
    }
    // s = g^(pk * a) with pk*a = 1 mod rest, u = g^(rest * b) with rest*b = 1 mod pk
    let s = if rest == 1 {
        Mat::identity(g.p, g.n)
    } else {
        let a = mod_inverse(pk % rest, rest);
        g.pow(pk as u128 * a as u128)
    };
    let u = if pk == 1 {
        Mat::identity(g.p, g.n)
    } else {
        let b = mod_inverse(rest % pk, pk);
        g.pow(rest as u128 * b as u128)
    };
    debug_assert_eq!(ord, lcm(s.order(), u.order()));
    debug_assert_eq!(s.mul(&u), u.mul(&s));
    debug_assert_eq!(s.mul(&u), *g);
    (s, u)
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    // extended Euclid; m tiny
    let (mut t, mut newt) = (0i128, 1i128);
    let (mut r, mut newr) = (m as i128, (a % m) as i128);
    while newr != 0 {
        let q = r / newr;
        (t, newt) = (newt, t - q * newt);
        (r, newr) = (newr, r - q * newr);
    }
    assert_eq!(r, 1, "not invertible");
    t.rem_euclid(m as i128) as u64
}
