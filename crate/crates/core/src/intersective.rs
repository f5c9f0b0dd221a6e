//! Integer polynomials and their roots modulo integers.
//!
//! A family of integer polynomials is jointly intersective when for every
//! modulus `m` the polynomials share a root modulo `m`. By the Chinese remainder
//! theorem it suffices to look at prime powers, and the least failing modulus
//! is always a prime power.

use rug::Integer;
use serde::{Serialize, Serializer};
use std::fmt;

/// Integer polynomial, `coeffs[d]` multiplying `t^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<Integer>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&x| Integer::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial at `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::default();
        }
        let mut c = vec![Integer::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += Integer::from(a * b);
            }
        }
        IntPoly::new(c)
    }

    pub fn eval_i(&self, x: i64) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Coefficients reduced into `[0, m)`.
    pub fn reduce(&self, m: u64) -> Vec<u64> {
        self.coeffs
            .iter()
            .map(|c| {
                let r = Integer::from(c % m);
                let r = if r < 0 { r + m } else { r };
                r.to_u64().unwrap()
            })
            .collect()
    }

    pub fn eval_mod(&self, x: u64, m: u64) -> u64 {
        eval_reduced(&self.reduce(m), x, m)
    }
}

fn eval_reduced(c: &[u64], x: u64, m: u64) -> u64 {
    let (x, m128) = ((x % m) as u128, m as u128);
    let mut acc: u128 = 0;
    for &a in c.iter().rev() {
        acc = (acc * x + a as u128) % m128;
    }
    acc as u64
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let a = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (d, a == 1) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{a}*t")?,
                (_, true) => write!(f, "t^{d}")?,
                (_, false) => write!(f, "{a}*t^{d}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Prime factorisation by trial division.
pub fn factor(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Roots modulo `p^k`, lifting roots mod `p^j` one power at a time.
///
/// Each lift tries the `p` candidates `r + s p^j`; simple roots lift uniquely
/// and singular roots are handled by the same exhaustive step.
fn roots_prime_power(poly: &IntPoly, p: u64, k: u32) -> Vec<u64> {
    let c = poly.reduce(p);
    let mut roots: Vec<u64> = (0..p).filter(|&x| eval_reduced(&c, x, p) == 0).collect();
    let mut pj = p;
    for _ in 1..k {
        let next = pj * p;
        let cn = poly.reduce(next);
        let mut lifted = Vec::new();
        for &r in &roots {
            for s in 0..p {
                let x = r + s * pj;
                if eval_reduced(&cn, x, next) == 0 {
                    lifted.push(x);
                }
            }
        }
        roots = lifted;
        pj = next;
        if roots.is_empty() {
            break;
        }
    }
    roots.sort_unstable();
    roots
}

fn crt_combine(a: &[u64], ma: u64, b: &[u64], mb: u64) -> Vec<u64> {
    // x ≡ r (mod ma), x ≡ s (mod mb), coprime moduli
    let m = ma as u128 * mb as u128;
    let inv = Integer::from(ma).invert(&Integer::from(mb)).expect("coprime moduli").to_u64().unwrap() as u128;
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &r in a {
        for &s in b {
            let diff = (s as u128 + mb as u128 - (r as u128 % mb as u128)) % mb as u128;
            let t = diff * inv % mb as u128;
            out.push(((r as u128 + ma as u128 * t) % m) as u64);
        }
    }
    out.sort_unstable();
    out
}

/// All roots of `poly` modulo `m`, sorted.
pub fn roots_mod(poly: &IntPoly, m: u64) -> Vec<u64> {
    assert!(m >= 1);
    if m == 1 {
        return vec![0];
    }
    let mut acc = vec![0u64];
    let mut modulus = 1u64;
    for (p, k) in factor(m) {
        let pk = p.pow(k);
        let r = roots_prime_power(poly, p, k);
        if r.is_empty() {
            return Vec::new();
        }
        acc = crt_combine(&acc, modulus, &r, pk);
        modulus *= pk;
    }
    acc
}

/// Result of screening moduli up to a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Screening {
    /// every modulus up to the bound admits a (common) root
    AllPass(u64),
    /// least modulus without a (common) root
    NoWitness(u64),
}

fn prime_powers_up_to(bound: u64) -> Vec<(u64, u64, u32)> {
    let mut sieve = vec![true; bound as usize + 1];
    let mut out = Vec::new();
    for p in 2..=bound {
        if !sieve[p as usize] {
            continue;
        }
        let mut q = p * p;
        while q <= bound {
            sieve[q as usize] = false;
            q += p;
        }
        let (mut pk, mut k) = (p, 1);
        loop {
            out.push((pk, p, k));
            match pk.checked_mul(p) {
                Some(n) if n <= bound => {
                    pk = n;
                    k += 1;
                }
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn is_intersective_up_to(poly: &IntPoly, bound: u64) -> Screening {
    jointly_intersective_up_to(std::slice::from_ref(poly), bound)
}

/// Common roots modulo every prime power up to `bound`.
pub fn jointly_intersective_up_to(polys: &[IntPoly], bound: u64) -> Screening {
    for (q, p, k) in prime_powers_up_to(bound) {
        let mut common: Option<Vec<u64>> = None;
        for poly in polys {
            let r = roots_prime_power(poly, p, k);
            common = Some(match common {
                None => r,
                Some(c) => c.into_iter().filter(|x| r.binary_search(x).is_ok()).collect(),
            });
            if common.as_ref().is_some_and(|c| c.is_empty()) {
                break;
            }
        }
        if common.is_some_and(|c| c.is_empty()) {
            return Screening::NoWitness(q);
        }
    }
    Screening::AllPass(bound)
}
