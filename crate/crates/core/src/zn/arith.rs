//! Integer helpers for arithmetic in Z/n.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b)`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Reduces a signed value into `[0, m)`.
pub fn reduce(x: i128, m: u64) -> u64 {
    let m = m as i128;
    (((x % m) + m) % m) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of a unit modulo `m`, or `None` when `a` is not a unit.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, s, _) = ext_gcd(a as i128, m as i128);
    (g == 1).then(|| reduce(s, m))
}

/// A unit `u` of Z/n with `u*a ≡ gcd(a, n) (mod n)`.
pub fn normalizing_unit(a: u64, n: u64) -> u64 {
    let a = a % n;
    if a == 0 {
        return 1;
    }
    let g = gcd(a, n);
    let (a1, n1) = (a / g, n / g);
    let u0 = if n1 == 1 { 0 } else { inv_mod(a1 % n1, n1).expect("coprime by construction") };
    let mut u = u0;
    while gcd(u, n) != 1 {
        u += n1;
    }
    u % n
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The coefficient ring Z/n, with its prime factorization cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus {
    n: u64,
    primes: Vec<(u64, u32)>,
}

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n));
        }
        if n > u32::MAX as u64 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Self { n, primes: factorize(n) })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn primes(&self) -> &[(u64, u32)] {
        &self.primes
    }

    /// All positive divisors of n in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut ds = vec![1u64];
        for &(p, e) in &self.primes {
            let mut next = Vec::with_capacity(ds.len() * (e as usize + 1));
            for &d in &ds {
                let mut q = 1;
                for _ in 0..=e {
                    next.push(d * q);
                    q *= p;
                }
            }
            ds = next;
        }
        ds.sort_unstable();
        ds
    }

    /// The largest power of `p` dividing n.
    pub fn prime_power(&self, p: u64) -> u64 {
        self.primes.iter().find(|(q, _)| *q == p).map(|&(q, e)| q.pow(e)).unwrap_or(1)
    }

    pub fn is_squarefree(&self) -> bool {
        self.primes.iter().all(|&(_, e)| e == 1)
    }
}

impl TryFrom<u64> for Modulus {
    type Error = Error;
    fn try_from(n: u64) -> Result<Self> {
        Modulus::new(n)
    }
}

impl From<Modulus> for u64 {
    fn from(m: Modulus) -> u64 {
        m.n
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Z/{}", self.n)
    }
}
