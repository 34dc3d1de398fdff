//! Constructive descriptions of `ker(φ)` and `NG ∩ ker(φ)`.
//!
//! Every decomposition returned here is checked by exact recombination before
//! it leaves the module.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::hnf::ColumnHnf;
use super::{in_kernel, require_kernel};
use crate::error::{Error, Result};
use crate::groupring::{factorize, mod_inverse, sigma_subgroup, Factorization, GroupRingElement};

/// Witness for `x ∈ Σ ZG·σ(P_i)`: `x = Σ parts[i]·σ(P_i)` where `P_i` is the
/// subgroup of order `primes[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelCertificate {
    m: usize,
    primes: Vec<usize>,
    parts: Vec<GroupRingElement>,
}

impl KernelCertificate {
    pub fn new(m: usize, primes: Vec<usize>, parts: Vec<GroupRingElement>) -> Result<Self> {
        if primes.len() != parts.len() {
            return Err(Error::InvalidInput("one part per prime is required".to_string()));
        }
        for (p, z) in primes.iter().zip(&parts) {
            if z.modulus() != m {
                return Err(Error::ModulusMismatch {
                    left: m,
                    right: z.modulus(),
                });
            }
            if !m.is_multiple_of(*p) {
                return Err(Error::NotADivisor { d: *p, m });
            }
        }
        Ok(Self { m, primes, parts })
    }

    pub fn modulus(&self) -> usize {
        self.m
    }

    pub fn primes(&self) -> &[usize] {
        &self.primes
    }

    pub fn parts(&self) -> &[GroupRingElement] {
        &self.parts
    }

    /// `Σ parts[i]·σ(P_i)`.
    pub fn recombine(&self) -> Result<GroupRingElement> {
        let mut acc = GroupRingElement::zero(self.m)?;
        for (&p, z) in self.primes.iter().zip(&self.parts) {
            acc = acc.add(&z.mul(&sigma_subgroup(self.m, p)?)?)?;
        }
        Ok(acc)
    }

    pub fn certifies(&self, x: &GroupRingElement) -> bool {
        self.recombine().map(|y| &y == x).unwrap_or(false)
    }

    /// `ε(z_i)` for every part.
    pub fn augmentations(&self) -> Vec<i64> {
        self.parts.iter().map(GroupRingElement::augmentation).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateEntry {
    prime: usize,
    element: GroupRingElement,
}

impl Serialize for KernelCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<_> = self
            .primes
            .iter()
            .zip(&self.parts)
            .map(|(&prime, element)| CertificateEntry {
                prime,
                element: element.clone(),
            })
            .collect();
        entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for KernelCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let entries = Vec::<CertificateEntry>::deserialize(d)?;
        let m = entries
            .first()
            .map(|e| e.element.modulus())
            .ok_or_else(|| D::Error::custom("empty certificate"))?;
        let (primes, parts) = entries.into_iter().map(|e| (e.prime, e.element)).unzip();
        KernelCertificate::new(m, primes, parts).map_err(D::Error::custom)
    }
}

/// The integer matrix whose columns are `z^j·σ(P_i)`, one column per coset
/// `z^j P_i` (`0 <= j < m/p_i`), with its Hermite normal form.
///
/// Using one representative per coset loses nothing: `g·σ(P_i) = σ(P_i)` for
/// `g ∈ P_i`, so `z·σ(P_i)` only depends on the coset of `z`.
#[derive(Debug)]
struct GeneratorSystem {
    m: usize,
    primes: Vec<usize>,
    offsets: Vec<usize>,
    hnf: ColumnHnf,
}

impl GeneratorSystem {
    fn build(fact: &Factorization) -> Self {
        let m = fact.m;
        let mut columns = Vec::new();
        let mut offsets = Vec::new();
        for &p in &fact.primes {
            offsets.push(columns.len());
            let step = m / p;
            for j in 0..step {
                let mut col = vec![BigInt::zero(); m];
                for k in 0..p {
                    col[j + k * step] = BigInt::from(1);
                }
                columns.push(col);
            }
        }
        Self {
            m,
            primes: fact.primes.clone(),
            offsets,
            hnf: ColumnHnf::new(m, columns),
        }
    }

    fn get(m: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GeneratorSystem>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(s) = cache.lock().unwrap().get(&m) {
            return Ok(s.clone());
        }
        let fact = factorize(m)?;
        if fact.r() == 0 {
            return Err(Error::ModulusTooSmall { m, min: 2 });
        }
        let sys = Arc::new(Self::build(&fact));
        cache.lock().unwrap().insert(m, sys.clone());
        Ok(sys)
    }

    fn block(&self, i: usize) -> std::ops::Range<usize> {
        let start = self.offsets[i];
        start..start + self.m / self.primes[i]
    }

    fn columns(&self) -> usize {
        self.offsets
            .last()
            .map_or(0, |&o| o + self.m / self.primes[self.primes.len() - 1])
    }

    fn solve(&self, x: &GroupRingElement) -> Option<Vec<BigInt>> {
        let b: Vec<BigInt> = x.coeffs().iter().map(|&c| BigInt::from(c)).collect();
        self.hnf.solve(&b)
    }

    /// Regroups a solution vector into the parts `z_i`.
    fn certificate(&self, c: &[BigInt]) -> Result<KernelCertificate> {
        let mut parts = Vec::with_capacity(self.primes.len());
        for i in 0..self.primes.len() {
            let block = self.block(i);
            let start = block.start;
            let mut coeffs = vec![0i64; self.m];
            for col in block {
                coeffs[col - start] = c[col].to_i64().ok_or(Error::Overflow("kernel certificate"))?;
            }
            parts.push(GroupRingElement::from_coeffs(coeffs)?);
        }
        KernelCertificate::new(self.m, self.primes.clone(), parts)
    }

    /// `ε` of each block of a coefficient vector.
    fn block_sums(&self, c: &[BigInt]) -> Vec<BigInt> {
        (0..self.primes.len())
            .map(|i| self.block(i).map(|col| &c[col]).sum())
            .collect()
    }
}

/// Writes `x ∈ ker(φ)` as `Σ z_i σ(P_i)` with `z_i ∈ ZG`.
///
/// The system `x = M·c` over the columns `z^j σ(P_i)` is solved through a
/// cached Hermite normal form of `M`. Certificates are not unique.
pub fn kernel_decompose(x: &GroupRingElement) -> Result<KernelCertificate> {
    if x.modulus() < 2 {
        return Err(Error::ModulusTooSmall { m: x.modulus(), min: 2 });
    }
    require_kernel(x)?;
    let sys = GeneratorSystem::get(x.modulus())?;
    let c = sys
        .solve(x)
        .expect("every kernel element is a ZG-combination of the σ(P_i)");
    let cert = sys.certificate(&c)?;
    debug_assert!(cert.certifies(x));
    if !cert.certifies(x) {
        return Err(Error::InvalidInput("certificate failed recombination".into()));
    }
    Ok(cert)
}

fn require_nonnegative_kernel(x: &GroupRingElement) -> Result<()> {
    if !x.is_nonnegative() {
        return Err(Error::NotNonnegative);
    }
    require_kernel(x)
}

/// The part of `x ∈ NG ∩ ker(φ)` living on one coset `z^j G_0`, rotated back
/// onto `G_0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetPart {
    pub coset: usize,
    pub part: GroupRingElement,
}

/// Splits `x ∈ NG ∩ ker(φ)` along the cosets of `G_0`, the subgroup of order
/// `rad(m)`: `x = Σ_j z^j · part_j` with each `part_j ∈ NG_0 ∩ ker(φ)`.
///
/// Cosets are represented by `z^j`, `0 <= j < m / rad(m)`; only cosets that
/// meet the support of `x` are returned, ordered by `j`.
pub fn coset_split(x: &GroupRingElement) -> Result<Vec<CosetPart>> {
    require_nonnegative_kernel(x)?;
    let m = x.modulus();
    let index = m / factorize(m)?.radical();
    let mut parts: Vec<Option<Vec<i64>>> = vec![None; index];
    for (k, c) in x.terms() {
        let j = k % index;
        parts[j].get_or_insert_with(|| vec![0; m])[k - j] = c;
    }
    parts
        .into_iter()
        .enumerate()
        .filter_map(|(j, p)| p.map(|p| (j, p)))
        .map(|(coset, coeffs)| {
            let part = GroupRingElement::from_coeffs(coeffs)?;
            if !in_kernel(&part)? {
                return Err(Error::InvalidInput(format!("coset part {coset} is not in the kernel")));
            }
            Ok(CosetPart { coset, part })
        })
        .collect()
}

/// A minimal element moved onto `G_0` and re-expressed over `m_0 = rad(m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeReduction {
    pub shift: usize,
    pub reduced: GroupRingElement,
}

/// Rotates a minimal `x ∈ NG ∩ ker(φ)` onto `G_0` and restricts it along
/// `z^{k·m/m_0} ↦ w^k` to the group of order `m_0 = rad(m)`.
///
/// Only the single-coset consequence of minimality is checked here; elements
/// spread over several cosets are rejected.
pub fn squarefree_reduce(x: &GroupRingElement) -> Result<SquarefreeReduction> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let parts = coset_split(x)?;
    if parts.len() != 1 {
        return Err(Error::NotMinimal(format!(
            "support meets {} cosets of G_0",
            parts.len()
        )));
    }
    let m = x.modulus();
    let m0 = factorize(m)?.radical();
    let CosetPart { coset, part } = parts.into_iter().next().expect("one part");
    let reduced = part.restrict(m0)?;
    debug_assert!(in_kernel(&reduced)?);
    Ok(SquarefreeReduction {
        shift: (m - coset) % m,
        reduced,
    })
}

/// `x = a·σ(P_2) + b·σ(P_1)` (or `x = a·σ(P_1)` when `m` is a prime power).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoPrimeDecomposition {
    pub a: GroupRingElement,
    pub b: GroupRingElement,
}

impl TwoPrimeDecomposition {
    pub fn recombine(&self) -> Result<GroupRingElement> {
        let m = self.a.modulus();
        let fact = factorize(m)?;
        match fact.primes.as_slice() {
            [p] => self.a.mul(&sigma_subgroup(m, *p)?),
            [p1, p2] => self
                .a
                .mul(&sigma_subgroup(m, *p2)?)?
                .add(&self.b.mul(&sigma_subgroup(m, *p1)?)?),
            _ => Err(Error::PrimeCount {
                m,
                r: fact.r(),
                needed: "expected one or two primes",
            }),
        }
    }
}

/// Square-free core of [`two_prime_decompose`] for `m = q·p`, `q < p`.
///
/// Writes `x = Σ_i x_i g^i` with `g` generating `P_2` and `x_i ∈ NP_1`; the
/// `x_i` agree under `φ`, so with `x_s` of least augmentation every
/// `x_i - x_s` is a nonnegative multiple `c_i σ(P_1)`. Then
/// `x = x_s σ(P_2) + (Σ c_i g^i) σ(P_1)`.
fn two_prime_squarefree(x: &GroupRingElement, q: usize, p: usize) -> Result<(GroupRingElement, GroupRingElement)> {
    let m = q * p;
    let q_inv = mod_inverse(q, p).expect("distinct primes");
    let p_inv = mod_inverse(p, q).expect("distinct primes");
    // rows[i][a] = coefficient of z^{a·p} g^i in x
    let mut rows = vec![vec![0i64; q]; p];
    for (k, c) in x.terms() {
        let i = (k * q_inv) % p;
        let a = (k * p_inv) % q;
        rows[i][a] = c;
    }
    let aug: Vec<i64> = rows.iter().map(|r| r.iter().sum()).collect();
    let s = (0..p).min_by_key(|&i| aug[i]).expect("p >= 2");
    let mut b_terms = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let c = row[0] - rows[s][0];
        if row.iter().zip(&rows[s]).any(|(u, v)| u - v != c) || c < 0 {
            return Err(Error::InvalidInput(
                "slices along P_2 do not differ by multiples of σ(P_1)".into(),
            ));
        }
        b_terms.push((i * q, c));
    }
    let a_terms: Vec<_> = rows[s].iter().enumerate().map(|(a, &c)| (a * p, c)).collect();
    Ok((
        GroupRingElement::from_terms(m, &a_terms)?,
        GroupRingElement::from_terms(m, &b_terms)?,
    ))
}

/// Nonnegative decomposition of `x ∈ NG ∩ ker(φ)` when `m` has at most two
/// prime divisors.
///
/// For square-free `m = p_1 p_2` the result has `a ∈ NP_1` and `b ∈ NP_2`.
/// In general `x` is first split along the cosets `z^j G_0` and each piece is
/// decomposed on `G_0`, so `a` and `b` are supported on `⋃_j z^j P_1` and
/// `⋃_j z^j P_2`. For a prime power `p^e`, `a` is constant-per-coset data with
/// `x = a·σ(P_1)` and `b = 0`.
pub fn two_prime_decompose(x: &GroupRingElement) -> Result<TwoPrimeDecomposition> {
    let m = x.modulus();
    let fact = factorize(m)?;
    if fact.r() == 0 {
        return Err(Error::ModulusTooSmall { m, min: 2 });
    }
    if fact.r() > 2 {
        return Err(Error::PrimeCount {
            m,
            r: fact.r(),
            needed: "at most two primes are supported",
        });
    }
    require_nonnegative_kernel(x)?;

    let out = if let [p] = fact.primes.as_slice() {
        let step = m / p;
        let mut a = vec![0i64; m];
        for (j, slot) in a.iter_mut().enumerate().take(step) {
            *slot = x.coeff(j);
        }
        TwoPrimeDecomposition {
            a: GroupRingElement::from_coeffs(a)?,
            b: GroupRingElement::zero(m)?,
        }
    } else {
        let (q, p) = (fact.primes[0], fact.primes[1]);
        let m0 = q * p;
        let mut a = GroupRingElement::zero(m)?;
        let mut b = GroupRingElement::zero(m)?;
        for CosetPart { coset, part } in coset_split(x)? {
            let (a0, b0) = two_prime_squarefree(&part.restrict(m0)?, q, p)?;
            a = a.add(&a0.embed(m)?.rotate(coset as i64))?;
            b = b.add(&b0.embed(m)?.rotate(coset as i64))?;
        }
        TwoPrimeDecomposition { a, b }
    };
    if &out.recombine()? != x {
        return Err(Error::InvalidInput("decomposition failed recombination".into()));
    }
    Ok(out)
}

/// Result of searching for `x = Σ z_i σ(P_i)` with every `ε(z_i) >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstrainedOutcome {
    Feasible(KernelCertificate),
    /// No certificate exists; `candidates` augmentation vectors were ruled out.
    Infeasible {
        candidates: usize,
    },
}

impl ConstrainedOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible(_))
    }
}

/// All `e ∈ N^r` with `Σ p_i e_i = n`, in lexicographic order.
fn augmentation_vectors(primes: &[usize], n: i64) -> Vec<Vec<i64>> {
    fn go(primes: &[usize], left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        match primes.split_first() {
            None => {
                if left == 0 {
                    out.push(cur.clone());
                }
            }
            Some((&p, rest)) => {
                for e in 0..=left / p as i64 {
                    cur.push(e);
                    go(rest, left - e * p as i64, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(primes, n, &mut Vec::new(), &mut out);
    out
}

/// Decides whether `x ∈ NG ∩ ker(φ)` admits `x = Σ z_i σ(P_i)` with all
/// `ε(z_i) >= 0`, returning such a certificate when it does.
///
/// Reducing each `z_i` to coset representatives of `P_i` does not change
/// `z_i σ(P_i)` or `ε(z_i)`, so the certificates form the affine lattice
/// `c_0 + ker(M)` of the coset system. Its image under the block
/// augmentations is an affine sublattice of `Z^r`, and `ε(x) = Σ p_i ε(z_i)`
/// leaves finitely many nonnegative candidates; each is tested exactly.
pub fn constrained_decompose(x: &GroupRingElement) -> Result<ConstrainedOutcome> {
    let m = x.modulus();
    if m < 2 {
        return Err(Error::ModulusTooSmall { m, min: 2 });
    }
    require_nonnegative_kernel(x)?;
    let sys = GeneratorSystem::get(m)?;
    let c0 = sys
        .solve(x)
        .expect("every kernel element is a ZG-combination of the σ(P_i)");
    let e0 = sys.block_sums(&c0);
    let r = sys.primes.len();

    let kernel = sys.hnf.kernel_basis();
    let aug_columns: Vec<Vec<BigInt>> = kernel.iter().map(|k| sys.block_sums(k)).collect();
    let aug_hnf = ColumnHnf::new(r, aug_columns);

    let candidates = augmentation_vectors(&sys.primes, x.augmentation());
    for e in &candidates {
        let target: Vec<BigInt> = e.iter().zip(&e0).map(|(&ei, e0i)| BigInt::from(ei) - e0i).collect();
        let Some(t) = aug_hnf.solve(&target) else {
            continue;
        };
        let mut c = c0.clone();
        for (tk, k) in t.iter().zip(kernel) {
            if tk.is_zero() {
                continue;
            }
            for (ci, kj) in c.iter_mut().zip(k) {
                *ci += tk * kj;
            }
        }
        debug_assert_eq!(c.len(), sys.columns());
        let cert = sys.certificate(&c)?;
        if !cert.certifies(x) || cert.augmentations().iter().any(|&a| a < 0) {
            return Err(Error::InvalidInput(
                "constrained certificate failed verification".into(),
            ));
        }
        return Ok(ConstrainedOutcome::Feasible(cert));
    }
    Ok(ConstrainedOutcome::Infeasible {
        candidates: candidates.len(),
    })
}
