//! The usual map `φ: ZG → Z[ζ_m]`, `z ↦ ζ_m`, and everything built on its
//! kernel: cyclotomic polynomials, kernel membership, kernel certificates and
//! the nonnegative decompositions of `NG ∩ ker(φ)`.

mod decompose;
mod hnf;
mod numeric;
mod poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

pub use decompose::{
    constrained_decompose, coset_split, kernel_decompose, squarefree_reduce, two_prime_decompose, ConstrainedOutcome,
    CosetPart, KernelCertificate, SquarefreeReduction, TwoPrimeDecomposition,
};
pub use numeric::{check_oracle_agreement, complex_eval, root_table_f64, ComplexApprox, OracleReport};
pub use poly::IntPolynomial;

use crate::error::{Error, Result};
use crate::groupring::{factorize, GroupRingElement};

fn poly_cache() -> &'static Mutex<HashMap<usize, IntPolynomial>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, IntPolynomial>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The `m`-th cyclotomic polynomial `Φ_m`.
///
/// Computed as `X^m - 1` divided exactly by `Φ_d` for every proper divisor
/// `d | m`. Results are cached.
///
/// # Panics
///
/// If `m == 0`.
pub fn cyclotomic_poly(m: usize) -> IntPolynomial {
    assert!(m > 0, "cyclotomic_poly: m must be positive");
    if let Some(p) = poly_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    let mut p = IntPolynomial::x_pow_minus_one(m);
    for d in factorize(m).expect("m > 0").divisors() {
        if d < m {
            p = p
                .div_exact_monic(&cyclotomic_poly(d))
                .expect("Φ_d divides X^m - 1 for d | m");
        }
    }
    poly_cache().lock().unwrap().insert(m, p.clone());
    p
}

/// An element of `Z[ζ_m]` in the power basis `1, ζ, ..., ζ^{φ(m)-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclotomicInteger {
    pub m: usize,
    pub coords: Vec<i64>,
}

impl CyclotomicInteger {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for CyclotomicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        IntPolynomial::fmt_with_var(&self.coords, "ζ", f)
    }
}

/// Reduction data for `Z[ζ_m]`: `Φ_m` and the power basis coordinates of
/// every `ζ^k`, `0 <= k < m`.
#[derive(Debug)]
pub struct CyclotomicRing {
    m: usize,
    phi: IntPolynomial,
    powers: Vec<Vec<i64>>,
}

impl CyclotomicRing {
    fn build(m: usize) -> Self {
        let phi = cyclotomic_poly(m);
        let deg = phi.degree().expect("Φ_m is nonzero");
        let mut powers = Vec::with_capacity(m);
        let mut cur = vec![0i64; deg];
        cur[0] = 1;
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by X and reduce by the monic Φ_m
            let lead = cur[deg - 1];
            for j in (1..deg).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            for (j, c) in cur.iter_mut().enumerate() {
                *c = c
                    .checked_sub(lead.checked_mul(phi.coeffs()[j]).expect("overflow"))
                    .expect("overflow reducing a power of ζ");
            }
        }
        Self { m, phi, powers }
    }

    /// Shared, cached instance for modulus `m`.
    pub fn get(m: usize) -> Result<Arc<Self>> {
        if m == 0 {
            return Err(Error::ZeroModulus);
        }
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CyclotomicRing>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(r) = cache.lock().unwrap().get(&m) {
            return Ok(r.clone());
        }
        let ring = Arc::new(Self::build(m));
        cache.lock().unwrap().insert(m, ring.clone());
        Ok(ring)
    }

    pub fn modulus(&self) -> usize {
        self.m
    }

    pub fn phi(&self) -> &IntPolynomial {
        &self.phi
    }

    /// `φ(m)`, the rank of `Z[ζ_m]`.
    pub fn degree(&self) -> usize {
        self.powers[0].len()
    }

    /// Coordinates of `ζ^k`, `k` taken mod `m`.
    pub fn power(&self, k: usize) -> &[i64] {
        &self.powers[k % self.m]
    }

    /// Image of the group-ring element given by its coefficient slice.
    pub fn image(&self, coeffs: &[i64]) -> Result<Vec<i64>> {
        let mut acc = vec![0i128; self.degree()];
        for (k, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (a, &p) in acc.iter_mut().zip(&self.powers[k]) {
                *a += c as i128 * p as i128;
            }
        }
        acc.into_iter()
            .map(|v| i64::try_from(v).map_err(|_| Error::Overflow("phi_map")))
            .collect()
    }
}

/// `φ(x)` in the power basis of `Z[ζ_m]`.
pub fn phi_map(x: &GroupRingElement) -> Result<CyclotomicInteger> {
    let ring = CyclotomicRing::get(x.modulus())?;
    Ok(CyclotomicInteger {
        m: x.modulus(),
        coords: ring.image(x.coeffs())?,
    })
}

/// True iff `Σ x_k ζ^k = 0`.
pub fn in_kernel(x: &GroupRingElement) -> Result<bool> {
    Ok(phi_map(x)?.is_zero())
}

/// Nonzero `φ(x)` as an error witness, or `Ok(())` when `x ∈ ker(φ)`.
pub(crate) fn require_kernel(x: &GroupRingElement) -> Result<()> {
    let witness = phi_map(x)?;
    if witness.is_zero() {
        Ok(())
    } else {
        Err(Error::NotInKernel { witness })
    }
}
