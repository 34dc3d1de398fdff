//! Numeric oracle: `Σ x_k exp(2πik/m)` in binary fixed point with a rigorous
//! error bound. Used for cross-checks and search pruning, never for exact
//! answers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::in_kernel;
use crate::error::{Error, Result};
use crate::groupring::{factorize, sigma_subgroup, GroupRingElement};

const GUARD_BITS: u32 = 32;

/// `v · 2^-bits` with `|true - v · 2^-bits| <= err · 2^-bits`.
#[derive(Debug, Clone)]
struct Fixed {
    v: BigInt,
    err: u128,
}

/// `⌈|v| · 2^-bits⌉`, saturating.
fn units_ceil(v: &BigInt, bits: u32) -> u128 {
    let one = BigInt::one() << bits;
    let (q, r) = v.abs().div_rem(&one);
    let q = q.to_u128().unwrap_or(u128::MAX);
    if r.is_zero() {
        q
    } else {
        q.saturating_add(1)
    }
}

impl Fixed {
    fn exact(v: BigInt) -> Self {
        Self { v, err: 0 }
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            v: &self.v + &o.v,
            err: self.err.saturating_add(o.err),
        }
    }

    fn neg(&self) -> Self {
        Self {
            v: -&self.v,
            err: self.err,
        }
    }

    fn mul(&self, o: &Self, bits: u32) -> Self {
        let v = (&self.v * &o.v) >> bits;
        let a = units_ceil(&self.v, bits);
        let b = units_ceil(&o.v, bits);
        let cross = (self.err.saturating_mul(o.err) >> bits.min(127)) + 1;
        let err = a
            .saturating_mul(o.err)
            .saturating_add(b.saturating_mul(self.err))
            .saturating_add(cross)
            .saturating_add(2);
        Self { v, err }
    }

    fn mul_int(&self, k: i64) -> Self {
        Self {
            v: &self.v * k,
            err: self.err.saturating_mul(k.unsigned_abs() as u128),
        }
    }

    /// Division by a positive integer, truncating.
    fn div_int(&self, n: u64) -> Self {
        Self {
            v: &self.v / n,
            err: self.err.div_ceil(n as u128) + 1,
        }
    }
}

/// `atan(1/n)` by its alternating series.
fn atan_inv(n: u64, bits: u32) -> Fixed {
    let n2 = BigInt::from(n) * n;
    let mut power = (BigInt::one() << bits) / n; // 2^bits / n^{2k+1}
    let mut sum = BigInt::zero();
    let mut err: u128 = 1;
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        err += 2;
        k += 1;
    }
    // alternating tail is below the first omitted term, which is < 1 ulp
    Fixed { v: sum, err: err + 1 }
}

fn pi(bits: u32) -> Fixed {
    static CACHE: OnceLock<Mutex<HashMap<u32, Fixed>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&bits) {
        return p.clone();
    }
    let p = atan_inv(5, bits).mul_int(16).add(&atan_inv(239, bits).mul_int(4).neg());
    cache.lock().unwrap().insert(bits, p.clone());
    p
}

/// `(cos θ, sin θ)` for `|θ| <= π` (plus error) by Taylor series.
fn cos_sin(theta: &Fixed, bits: u32) -> (Fixed, Fixed) {
    let one = Fixed::exact(BigInt::one() << bits);
    let t2 = theta.mul(theta, bits);
    let series = |first: Fixed, start: u64| {
        let mut sum = first.clone();
        let mut term = first;
        let mut n = start;
        loop {
            term = term.mul(&t2, bits).neg().div_int((n + 1) * (n + 2));
            n += 2;
            sum = sum.add(&term);
            // from here on consecutive terms shrink by more than half
            if term.v.is_zero() && n >= 6 {
                sum.err = sum.err.saturating_add(2 * (term.err + 1));
                return sum;
            }
        }
    };
    (series(one, 0), series(theta.clone(), 1))
}

/// `exp(2πik/m)` for every `k < m` at `bits` fractional bits.
fn root_table(m: usize, bits: u32) -> Arc<Vec<(Fixed, Fixed)>> {
    type Table = Arc<Vec<(Fixed, Fixed)>>;
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Table>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(m, bits)) {
        return t.clone();
    }
    let pi = pi(bits);
    let table: Vec<_> = (0..m)
        .map(|k| {
            // reduce to θ = 2πk'/m with |k'| <= m/2
            let k = k as i64;
            let k = if 2 * k <= m as i64 { k } else { k - m as i64 };
            let theta = pi.mul_int(2 * k).div_int(m as u64);
            cos_sin(&theta, bits)
        })
        .collect();
    let table = Arc::new(table);
    cache.lock().unwrap().insert((m, bits), table.clone());
    table
}

type FloatTable = Arc<Vec<(f64, f64)>>;

/// `exp(2πik/m)` in `f64`, for pruning heuristics that carry their own margin.
pub fn root_table_f64(m: usize) -> FloatTable {
    static CACHE: OnceLock<Mutex<HashMap<usize, FloatTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&m) {
        return t.clone();
    }
    let table: Arc<Vec<_>> = Arc::new(
        (0..m)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / m as f64;
                (theta.cos(), theta.sin())
            })
            .collect(),
    );
    cache.lock().unwrap().insert(m, table.clone());
    table
}

/// `(re + i·im) · 2^-frac_bits`, within complex distance `err · 2^-frac_bits`
/// of the true value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexApprox {
    pub re: BigInt,
    pub im: BigInt,
    pub frac_bits: u32,
    pub err: u128,
}

impl ComplexApprox {
    /// `|value| <= factor · err`, decided exactly on the fixed-point numbers.
    pub fn within(&self, factor: u128) -> bool {
        let bound = BigInt::from(self.err) * factor;
        &self.re * &self.re + &self.im * &self.im <= &bound * &bound
    }

    /// Consistent with the true value being zero.
    pub fn may_be_zero(&self) -> bool {
        self.within(1)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let scale = (-(self.frac_bits as f64)).exp2();
        let f = |v: &BigInt| {
            // keep 60 significant bits before converting
            let shift = v.bits().saturating_sub(60);
            (v >> shift).to_f64().unwrap_or(0.0) * (shift as f64).exp2() * scale
        };
        (f(&self.re), f(&self.im))
    }

    pub fn error_bound(&self) -> f64 {
        self.err as f64 * (-(self.frac_bits as f64)).exp2()
    }
}

/// `Σ_k x_k exp(2πik/m)` with `precision_bits + 32` fractional bits and a
/// rigorous bound on the accumulated error.
pub fn complex_eval(x: &GroupRingElement, precision_bits: u32) -> Result<ComplexApprox> {
    if precision_bits < 64 {
        return Err(Error::InvalidInput(format!(
            "precision must be at least 64 bits, got {precision_bits}"
        )));
    }
    let bits = precision_bits + GUARD_BITS;
    let table = root_table(x.modulus(), bits);
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    let mut err: u128 = 0;
    for (k, c) in x.terms() {
        let (cos, sin) = &table[k];
        re += &cos.v * c;
        im += &sin.v * c;
        err = err.saturating_add((cos.err + sin.err).saturating_mul(c.unsigned_abs() as u128));
    }
    Ok(ComplexApprox {
        re,
        im,
        frac_bits: bits,
        err,
    })
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct OracleReport {
    pub samples: usize,
    pub kernel_samples: usize,
    /// Elements where the exact test and the numeric threshold disagree.
    pub disagreements: Vec<GroupRingElement>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

fn random_sparse(rng: &mut ChaCha8Rng, m: usize) -> Result<GroupRingElement> {
    let support = rng.random_range(1..=12.min(m));
    let terms: Vec<_> = (0..support)
        .map(|_| {
            let c = rng.random_range(1..=10) * if rng.random_bool(0.5) { 1 } else { -1 };
            (rng.random_range(0..m), c)
        })
        .collect();
    let x = GroupRingElement::from_terms(m, &terms)?;
    Ok(clamp_or(x, m))
}

/// Repeated exponents may push a coefficient past 10; fall back to `z^0`.
fn clamp_or(x: GroupRingElement, m: usize) -> GroupRingElement {
    if x.coeffs().iter().all(|c| c.abs() <= 10) {
        x
    } else {
        GroupRingElement::one(m).expect("m > 0")
    }
}

fn random_kernel(rng: &mut ChaCha8Rng, m: usize) -> Result<GroupRingElement> {
    let primes = factorize(m)?.primes;
    loop {
        let mut x = GroupRingElement::zero(m)?;
        for _ in 0..rng.random_range(1..=3) {
            let p = primes[rng.random_range(0..primes.len())];
            let c = rng.random_range(-3..=3);
            let z = GroupRingElement::monomial(m, rng.random_range(0..m), c)?;
            x = x.add(&z.mul(&sigma_subgroup(m, p)?)?)?;
        }
        if x.coeffs().iter().all(|c| c.abs() <= 10) {
            return Ok(x);
        }
    }
}

/// Compares [`in_kernel`] with the 128-bit threshold test on seeded random
/// elements with `|x_k| <= 10` over `2 <= m <= max_m`: exact zeros must satisfy
/// `|value| <= err` and nonzeros `|value| > 2·err`.
///
/// A third of the samples are sparse random elements, a third are random
/// combinations of the `σ(P_i)`, and a third are such combinations with one
/// coefficient perturbed by one.
pub fn check_oracle_agreement(samples: usize, max_m: usize, seed: u64) -> Result<OracleReport> {
    if max_m < 2 {
        return Err(Error::ModulusTooSmall { m: max_m, min: 2 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OracleReport {
        samples,
        ..Default::default()
    };
    for i in 0..samples {
        let m = rng.random_range(2..=max_m);
        let x = match i % 3 {
            0 => random_sparse(&mut rng, m)?,
            1 => random_kernel(&mut rng, m)?,
            _ => {
                let k = rng.random_range(0..m);
                let d = if rng.random_bool(0.5) { 1 } else { -1 };
                let x = random_kernel(&mut rng, m)?.add(&GroupRingElement::monomial(m, k, d)?)?;
                clamp_or(x, m)
            }
        };
        let exact = in_kernel(&x)?;
        let approx = complex_eval(&x, 128)?;
        let agrees = if exact {
            report.kernel_samples += 1;
            approx.within(1)
        } else {
            !approx.within(2)
        };
        if !agrees {
            report.disagreements.push(x);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = pi(128);
        let approx = ComplexApprox {
            re: p.v,
            im: BigInt::zero(),
            frac_bits: 128,
            err: p.err,
        };
        assert!((approx.to_f64().0 - std::f64::consts::PI).abs() < 1e-15);
        assert!(p.err < 1 << 12);
    }

    #[test]
    fn examples() {
        let x = sigma_subgroup(6, 2).unwrap();
        assert!(complex_eval(&x, 128).unwrap().may_be_zero());
        let one = GroupRingElement::one(7).unwrap();
        let v = complex_eval(&one, 128).unwrap();
        let (re, im) = v.to_f64();
        assert!((re - 1.0).abs() < 1e-15 && im.abs() < 1e-15);
        assert!(!v.within(2));
        let xg = GroupRingElement::from_terms(30, &[(5, 1), (6, 1), (12, 1), (18, 1), (24, 1), (25, 1)]).unwrap();
        let v = complex_eval(&xg, 128).unwrap();
        assert!(v.may_be_zero());
        assert!(v.error_bound() < 1e-30);
    }

    #[test]
    fn matches_f64_roots() {
        for m in [3, 7, 12, 60] {
            let exact = root_table(m, 96);
            for (k, (c, s)) in root_table_f64(m).iter().enumerate() {
                let approx = ComplexApprox {
                    re: exact[k].0.v.clone(),
                    im: exact[k].1.v.clone(),
                    frac_bits: 96,
                    err: 0,
                };
                let (re, im) = approx.to_f64();
                assert!((re - c).abs() < 1e-14 && (im - s).abs() < 1e-14, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn rejects_low_precision() {
        assert!(complex_eval(&GroupRingElement::one(3).unwrap(), 32).is_err());
    }

    #[test]
    fn oracle_agreement_small_run() {
        let report = check_oracle_agreement(600, 60, 7).unwrap();
        assert!(report.passed(), "{:?}", report.disagreements);
        assert!(report.kernel_samples > 150);
    }
}
