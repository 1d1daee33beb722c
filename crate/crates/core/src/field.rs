//! Arithmetic in the prime field GF(p).
//!
//! Bulk data (matrices, coordinate vectors) stores raw residues as `u32`
//! together with the modulus; [`Fp`] is the self-describing scalar used at
//! API boundaries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero in GF({0})")]
    DivisionByZero(u32),
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u64),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Accepts `p` only if it is an odd prime small enough for `u32` residues.
pub fn check_modulus(p: u64) -> Result<u32, FieldError> {
    if p == 2 || !is_prime(p) || p > u32::MAX as u64 / 2 {
        return Err(FieldError::NotAnOddPrime(p));
    }
    Ok(p as u32)
}

#[inline]
pub fn reduce(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

#[inline]
pub fn add(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow(mut base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse by Fermat; `a` must be nonzero mod `p`.
pub fn inv(a: u32, p: u32) -> Result<u32, FieldError> {
    if a % p == 0 {
        return Err(FieldError::DivisionByZero(p));
    }
    Ok(pow(a, (p - 2) as u64, p))
}

/// `(-1)^e` as a residue.
#[inline]
pub fn sign(e: usize, p: u32) -> u32 {
    if e % 2 == 0 {
        1
    } else {
        p - 1
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    pub fn new(value: i64, modulus: u32) -> Self {
        Fp {
            value: reduce(value, modulus),
            modulus,
        }
    }

    pub fn zero(modulus: u32) -> Self {
        Fp { value: 0, modulus }
    }

    pub fn one(modulus: u32) -> Self {
        Fp { value: 1, modulus }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, e: u64) -> Self {
        Fp {
            value: pow(self.value, e, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inv(self) -> Result<Self, FieldError> {
        Ok(Fp {
            value: inv(self.value, self.modulus)?,
            modulus: self.modulus,
        })
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        assert_eq!(self.modulus, rhs.modulus);
        Fp {
            value: add(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        assert_eq!(self.modulus, rhs.modulus);
        Fp {
            value: sub(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        assert_eq!(self.modulus, rhs.modulus);
        Fp {
            value: mul(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: neg(self.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

pub fn field_inv(a: Fp) -> Result<Fp, FieldError> {
    a.inv()
}

/// C(j, k) mod p via Pascal's rule; zero when `k > j`.
pub fn binomial_mod_p(j: usize, k: usize, p: u32) -> Fp {
    if k > j {
        return Fp::zero(p);
    }
    let mut row = vec![0u32; j + 1];
    row[0] = 1 % p;
    for n in 1..=j {
        for i in (1..=n).rev() {
            row[i] = add(row[i], row[i - 1], p);
        }
    }
    Fp {
        value: row[k],
        modulus: p,
    }
}
