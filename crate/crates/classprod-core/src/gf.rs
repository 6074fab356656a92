//! Arithmetic in GF(p) for the small primes this crate cares about.
//! Elements are `u8` values in `0..p`; everything is table-free.

pub const SUPPORTED_PRIMES: [u8; 4] = [2, 3, 5, 7];

#[inline]
pub fn add(p: u8, a: u8, b: u8) -> u8 {
    let s = a as u16 + b as u16;
    (s % p as u16) as u8
}

#[inline]
pub fn sub(p: u8, a: u8, b: u8) -> u8 {
    let s = a as i16 - b as i16;
    s.rem_euclid(p as i16) as u8
}

#[inline]
pub fn neg(p: u8, a: u8) -> u8 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(p: u8, a: u8, b: u8) -> u8 {
    ((a as u16 * b as u16) % p as u16) as u8
}

/// Multiplicative inverse; panics on zero (callers check).
#[inline]
pub fn inv(p: u8, a: u8) -> u8 {
    debug_assert!(a != 0, "inverse of zero");
    // p <= 7, so a^(p-2) by a couple of multiplications is fine
    let mut acc = 1u8;
    for _ in 0..p - 2 {
        acc = mul(p, acc, a);
    }
    acc
}

#[inline]
pub fn is_square(p: u8, a: u8) -> bool {
    (0..p).any(|x| mul(p, x, x) == a)
}
