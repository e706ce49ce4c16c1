//! Prime fields `F_p` with `p < 2^63`.
//!
//! Elements are plain residues; the modulus lives in a [`Field`] descriptor
//! that every container (polynomial, matrix, form) carries alongside its
//! coefficients.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 2^61 - 1, the default working prime.
pub const MERSENNE_61: u64 = (1 << 61) - 1;
/// 2^62 - 57, the second working prime used for two-prime agreement.
pub const SECOND_PRIME: u64 = (1 << 62) - 57;
/// 2^20 - 3, small enough for full point enumeration.
pub const MEDIUM_PRIME: u64 = (1 << 20) - 3;

/// A residue modulo the ambient prime, always in `[0, p)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub(crate) u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Reduction {
    Mersenne61,
    Small,
    Wide,
}

/// The field descriptor. Cheap to copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u64,
    reduction: Reduction,
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.p)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        Field::new(p).map_err(serde::de::Error::custom)
    }
}

impl Field {
    /// Builds `F_p`, rejecting anything that is not an odd prime below 2^63.
    pub fn new(p: u64) -> Result<Field> {
        if p < 3 || p >= 1 << 63 || !is_prime_u64(p) {
            return Err(Error::InvalidModulus(p));
        }
        let reduction = if p == MERSENNE_61 {
            Reduction::Mersenne61
        } else if p < 1 << 32 {
            Reduction::Small
        } else {
            Reduction::Wide
        };
        Ok(Field { p, reduction })
    }

    pub fn default_primes() -> [Field; 2] {
        [
            Field::new(MERSENNE_61).expect("2^61-1 is prime"),
            Field::new(SECOND_PRIME).expect("2^62-57 is prime"),
        ]
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    #[inline]
    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    #[inline]
    pub fn elem(&self, x: u64) -> Fe {
        Fe(x % self.p)
    }

    pub fn from_i64(&self, x: i64) -> Fe {
        let r = (x as i128).rem_euclid(self.p as i128);
        Fe(r as u64)
    }

    /// Parses a decimal residue; values must already be reduced.
    pub fn parse(&self, s: &str) -> Result<Fe> {
        let x: u64 = s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))?;
        if x >= self.p {
            return Err(Error::Parse(format!("{x} is not reduced modulo {}", self.p)));
        }
        Ok(Fe(x))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let s = a.0 + b.0;
        Fe(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        Fe(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match self.reduction {
            Reduction::Mersenne61 => {
                let x = a.0 as u128 * b.0 as u128;
                let lo = (x as u64) & MERSENNE_61;
                let hi = (x >> 61) as u64;
                let mut r = lo + hi;
                r = (r & MERSENNE_61) + (r >> 61);
                Fe(if r >= MERSENNE_61 { r - MERSENNE_61 } else { r })
            }
            Reduction::Small => Fe(a.0 * b.0 % self.p),
            Reduction::Wide => Fe((a.0 as u128 * b.0 as u128 % self.p as u128) as u64),
        }
    }

    pub fn pow(&self, mut base: Fe, mut exp: u64) -> Fe {
        let mut acc = Fe::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero: callers must never invert zero.
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero in F_{}", self.p);
        let (mut r0, mut r1) = (self.p as i128, a.0 as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Fe(t0.rem_euclid(self.p as i128) as u64)
    }

    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    /// Euler criterion; zero counts as a square.
    pub fn is_square(&self, a: Fe) -> bool {
        a.is_zero() || self.pow(a, (self.p - 1) / 2) == Fe::ONE
    }

    /// Square root by Tonelli-Shanks, `None` for non-residues.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return Some(Fe::ZERO);
        }
        if !self.is_square(a) {
            return None;
        }
        let p = self.p;
        if p % 4 == 3 {
            return Some(self.pow(a, (p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = Fe(2);
        while self.is_square(z) {
            z = Fe(z.0 + 1);
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != Fe::ONE {
            let mut i = 0;
            let mut t2 = t;
            while t2 != Fe::ONE {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// `C(n, k)` reduced modulo `p`.
    pub fn binomial(&self, n: u64, k: u64) -> Fe {
        if k > n {
            return Fe::ZERO;
        }
        let k = k.min(n - k);
        let mut num = Fe::ONE;
        let mut den = Fe::ONE;
        for i in 0..k {
            num = self.mul(num, self.elem(n - i));
            den = self.mul(den, self.elem(i + 1));
        }
        self.div(num, den)
    }

    pub fn dot(&self, a: &[Fe], b: &[Fe]) -> Fe {
        a.iter().zip(b).fold(Fe::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
