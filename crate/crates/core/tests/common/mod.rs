//! Independent reference implementations used as test oracles.
//!
//! Nothing here calls into the library's cyclotomic or census code: the
//! cyclotomic polynomial comes from the Möbius product, vanishing is decided by
//! polynomial remainder, minimality by a full sub-multiset scan and
//! canonical forms by comparing all rotations.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Dense polynomial product.
pub fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact quotient by a monic divisor; panics on a nonzero remainder.
pub fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let d = den.len() - 1;
    assert_eq!(den[d], 1);
    let mut q = vec![0; num.len() - d];
    for k in (d..rem.len()).rev() {
        let c = rem[k];
        q[k - d] = c;
        for (j, &v) in den.iter().enumerate() {
            rem[k - d + j] -= c * v;
        }
    }
    assert!(rem.iter().all(|&v| v == 0), "division was not exact");
    q
}

pub fn mobius(n: usize) -> i32 {
    let mut n = n;
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn x_pow_minus_one(d: usize) -> Vec<i128> {
    let mut v = vec![0; d + 1];
    v[0] = -1;
    v[d] = 1;
    v
}

/// `Φ_m = Π_{d | m} (X^d - 1)^{μ(m/d)}`.
pub fn cyclotomic_mobius(m: usize) -> Vec<i128> {
    let divisors: Vec<usize> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
    let mut num = vec![1i128];
    let mut den = vec![1i128];
    for &d in &divisors {
        match mobius(m / d) {
            1 => num = poly_mul(&num, &x_pow_minus_one(d)),
            -1 => den = poly_mul(&den, &x_pow_minus_one(d)),
            _ => {}
        }
    }
    poly_div_exact(&num, &den)
}

/// Decides `Σ c_k ζ_m^k = 0` through the remainder modulo `Φ_m`.
pub struct VanishingTest {
    phi: Vec<i128>,
}

impl VanishingTest {
    pub fn new(m: usize) -> Self {
        Self {
            phi: cyclotomic_mobius(m),
        }
    }

    pub fn vanishes(&self, coeffs: &[i64]) -> bool {
        let mut rem: Vec<i128> = coeffs.iter().map(|&c| c as i128).collect();
        let d = self.phi.len() - 1;
        for k in (d..rem.len()).rev() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            for (j, &v) in self.phi.iter().enumerate() {
                rem[k - d + j] -= c * v;
            }
        }
        rem.iter().all(|&v| v == 0)
    }
}

/// Lexicographically greatest rotation, by trying all of them.
pub fn brute_canon(coeffs: &[i64]) -> Vec<i64> {
    let m = coeffs.len();
    (0..m)
        .map(|s| (0..m).map(|i| coeffs[(i + m - s) % m]).collect::<Vec<_>>())
        .max()
        .unwrap()
}

/// True iff no proper nonzero sub-multiset vanishes, by listing every one.
pub fn brute_minimal(t: &VanishingTest, coeffs: &[i64]) -> bool {
    let support: Vec<usize> = (0..coeffs.len()).filter(|&k| coeffs[k] > 0).collect();
    let total: i64 = coeffs.iter().sum();
    let mut take = vec![0i64; coeffs.len()];
    loop {
        // odometer over 0..=coeffs[k] on the support
        let mut i = 0;
        loop {
            if i == support.len() {
                return true;
            }
            let k = support[i];
            if take[k] < coeffs[k] {
                take[k] += 1;
                break;
            }
            take[k] = 0;
            i += 1;
        }
        let taken: i64 = take.iter().sum();
        if taken < total && t.vanishes(&take) {
            return false;
        }
    }
}

/// Canonical forms of all minimal vanishing multisets of size at most
/// `max_weight` over `m`, with no pruning and no anchoring.
pub fn naive_minimal_classes(m: usize, max_weight: usize) -> BTreeSet<Vec<i64>> {
    let t = VanishingTest::new(m);
    let mut out = BTreeSet::new();
    let mut counts = vec![0i64; m];

    fn go(t: &VanishingTest, m: usize, left: usize, start: usize, counts: &mut Vec<i64>, out: &mut BTreeSet<Vec<i64>>) {
        for e in start..m {
            counts[e] += 1;
            if t.vanishes(counts) && brute_minimal(t, counts) {
                out.insert(brute_canon(counts));
            }
            if left > 1 {
                go(t, m, left - 1, e, counts, out);
            }
            counts[e] -= 1;
        }
    }

    if max_weight > 0 {
        go(&t, m, max_weight, 0, &mut counts, &mut out);
    }
    out
}

pub fn primes_of(m: usize) -> Vec<usize> {
    (2..=m)
        .filter(|&p| m.is_multiple_of(p) && (2..p).all(|q| p % q != 0))
        .collect()
}

/// `Σ_{k<d} z^{(m/d)k}` as a dense vector.
pub fn subgroup_sum(m: usize, d: usize) -> Vec<i64> {
    (0..m).map(|k| i64::from(k % (m / d) == 0)).collect()
}

/// Cyclic convolution.
pub fn convolve(a: &[i64], b: &[i64]) -> Vec<i64> {
    let m = a.len();
    let mut out = vec![0; m];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[(i + j) % m] += x * y;
        }
    }
    out
}
