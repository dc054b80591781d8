//! Primes, factorization, and divisor-function tables.

use crate::error::{domain, Error, Result};

/// Primes up to and including `n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Prime factorization `[(p, e)]` by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// τ_k(n) for 1 ≤ n ≤ N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorTable {
    k: u32,
    values: Vec<u64>,
}

impl DivisorTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// τ_k(n); errors past the table limit.
    pub fn get(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(domain("divisor table index", n, "n >= 1"));
        }
        self.values
            .get(n as usize)
            .copied()
            .ok_or(Error::TableTooShort {
                have: self.limit(),
                need: n,
            })
    }

    /// Values indexed by n; entry 0 is unused and zero.
    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

/// τ_k by k−1 Dirichlet convolutions of 1 with itself.
pub fn tau_sieve(k: u32, n: u64) -> Result<DivisorTable> {
    if k == 0 {
        return Err(domain("k", k, "k >= 1"));
    }
    if n == 0 {
        return Err(domain("N", n, "N >= 1"));
    }
    if n > 200_000_000 {
        return Err(Error::Capacity("tau_sieve table size"));
    }
    let n = n as usize;
    let mut cur = vec![1u64; n + 1];
    cur[0] = 0;
    for _ in 1..k {
        let mut next = vec![0u64; n + 1];
        for d in 1..=n {
            let v = cur[d];
            let mut m = d;
            while m <= n {
                next[m] = next[m].checked_add(v).ok_or(Error::Capacity("tau_sieve"))?;
                m += d;
            }
        }
        cur = next;
    }
    Ok(DivisorTable { k, values: cur })
}
