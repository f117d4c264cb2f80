//! Arithmetic in the prime field GF(p).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exclusive upper bound on the modulus; residues multiply in `u64` without overflow.
pub const MODULUS_LIMIT: u64 = 1 << 31;

/// A prime modulus `p` with `2 <= p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldPrime(u64);

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldPrime {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MODULUS_LIMIT || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldPrime(p))
    }

    #[inline]
    pub fn p(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.0
    }

    pub fn from_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(self, a: u64) -> Option<u64> {
        let a = self.reduce(a);
        (a != 0).then(|| self.pow(a, self.0 - 2))
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(self) -> u64 {
        if self.0 == 2 {
            return 1;
        }
        let order = self.0 - 1;
        let mut factors = Vec::new();
        let mut m = order;
        let mut d = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                factors.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (2..self.0)
            .find(|&g| factors.iter().all(|&q| self.pow(g, order / q) != 1))
            .expect("every prime field has a primitive root")
    }

    /// `acc += c * v`, coordinatewise.
    pub fn add_scaled(self, acc: &mut [u64], v: &[u64], c: u64) {
        if c == 0 {
            return;
        }
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = self.add(*a, self.mul(c, x));
        }
    }

    pub fn scale(self, v: &mut [u64], c: u64) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }
}

impl TryFrom<u64> for FieldPrime {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        FieldPrime::new(p)
    }
}

impl From<FieldPrime> for u64 {
    fn from(f: FieldPrime) -> u64 {
        f.0
    }
}

impl std::fmt::Display for FieldPrime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.0)
    }
}
