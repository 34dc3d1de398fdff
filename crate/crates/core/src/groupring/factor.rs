//! Integer factorization and the small number-theoretic helpers built on it.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `m = p_1^{a_1} ... p_r^{a_r}` with `p_1 < ... < p_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub m: usize,
    pub primes: Vec<usize>,
    pub exponents: Vec<u32>,
}

impl Factorization {
    /// Number of distinct primes.
    pub fn r(&self) -> usize {
        self.primes.len()
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> usize {
        self.primes.iter().product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.exponents.iter().all(|&a| a == 1)
    }

    pub fn totient(&self) -> usize {
        self.primes
            .iter()
            .zip(&self.exponents)
            .map(|(&p, &a)| (p - 1) * p.pow(a - 1))
            .product()
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<usize> {
        let mut divs = vec![1usize];
        for (&p, &a) in self.primes.iter().zip(&self.exponents) {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..a {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Smallest odd prime divisor, if any.
    pub fn smallest_odd_prime(&self) -> Option<usize> {
        self.primes.iter().copied().find(|&p| p % 2 == 1)
    }
}

/// Trial-division factorization. Desk-scale moduli only.
pub fn factorize(m: usize) -> Result<Factorization> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut primes = Vec::new();
    let mut exponents = Vec::new();
    let mut n = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut a = 0;
            while n.is_multiple_of(p) {
                n /= p;
                a += 1;
            }
            primes.push(p);
            exponents.push(a);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        primes.push(n);
        exponents.push(1);
    }
    Ok(Factorization { m, primes, exponents })
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && factorize(n).map(|f| f.primes == [n]).unwrap_or(false)
}

pub fn radical(m: usize) -> Result<usize> {
    Ok(factorize(m)?.radical())
}

pub fn totient(m: usize) -> Result<usize> {
    Ok(factorize(m)?.totient())
}

/// Inverse of `a` modulo `n`, when `gcd(a, n) = 1`.
pub fn mod_inverse(a: usize, n: usize) -> Option<usize> {
    if n == 1 {
        return Some(0);
    }
    let e = (a as i64).extended_gcd(&(n as i64));
    (e.gcd == 1).then(|| e.x.rem_euclid(n as i64) as usize)
}
