//! Machine checks of the structure results against exact data: the transfer
//! dichotomy, the lower bound on asymmetric elements, and the uniqueness of
//! the extremal asymmetric class.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::constructions::{asymmetric_seed, weight_plus_one_form, weight_plus_one_form_with};
use super::search::{enumerate_minimal_with, CensusOptions};
use super::CensusRecord;
use crate::cyclotomic::{in_kernel, phi_map};
use crate::error::{Error, Result};
use crate::groupring::{factorize, sigma_subgroup, sigma_subgroup_star, GroupRingElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferCase {
    /// `y >= x`.
    A,
    /// `ε_0(y) > (p_1 - ε_0(x))(p_2 - 1)`.
    B,
    /// `ε_0(y) = (p_1 - ε_0(x))(p_2 - 1)` and not `y >= x`.
    BEquality,
    /// Neither disjunct holds.
    Violated,
}

/// `z^shift · x = c·σ(X)` and `z^shift · y = c·σ(X')σ(P_2*)` with
/// `X ⊂ P_1` given by its exponents and `X' = P_1 \ X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferStructure {
    pub shift: usize,
    pub c: i64,
    pub x_exponents: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub case: TransferCase,
    /// `(p_1 - ε_0(x))(p_2 - 1)`, when `ε_0(x) <= p_1 - 1`.
    pub support_bound: Option<usize>,
    /// The same dichotomy with `ε` in place of `ε_0`; `None` when
    /// `ε(x) > p_1 - 1`.
    pub augmentation_variant: Option<bool>,
    /// Searched only in the equality case.
    pub structure: Option<TransferStructure>,
}

impl TransferReport {
    pub fn holds(&self) -> bool {
        self.case != TransferCase::Violated && self.augmentation_variant != Some(false)
    }
}

fn find_structure(
    x: &GroupRingElement,
    y: &GroupRingElement,
    p1: usize,
    p2: usize,
) -> Result<Option<TransferStructure>> {
    let m = x.modulus();
    let step = m / p1;
    let p2_star = sigma_subgroup_star(m, p2)?;
    for shift in 0..m {
        let xr = x.rotate(shift as i64);
        let Some((_, c)) = xr.terms().next() else {
            return Ok(None);
        };
        if xr.terms().any(|(k, v)| k % step != 0 || v != c) {
            continue;
        }
        let x_exponents: Vec<usize> = xr.support().collect();
        let complement: Vec<usize> = (0..p1).map(|j| j * step).filter(|k| !x_exponents.contains(k)).collect();
        let candidate = GroupRingElement::from_exponents(m, &complement)?
            .mul(&p2_star)?
            .scale(c)?;
        if candidate == y.rotate(shift as i64) {
            return Ok(Some(TransferStructure { shift, c, x_exponents }));
        }
    }
    Ok(None)
}

/// For `x, y ∈ NG` with `φ(x) = φ(y)` over square-free `m` with at least two
/// primes: either `y >= x`, or `ε_0(y) >= (p_1 - ε_0(x))(p_2 - 1)`.
///
/// Case A is reported whenever `y >= x`. Otherwise `ε_0(x) <= p_1 - 1` is
/// required. In the equality case the report carries the rotation that puts
/// `x = c·σ(X)` and `y = c·σ(X')σ(P_2*)`, if one exists.
pub fn check_transfer(x: &GroupRingElement, y: &GroupRingElement) -> Result<TransferReport> {
    let m = x.modulus();
    if y.modulus() != m {
        return Err(Error::ModulusMismatch {
            left: m,
            right: y.modulus(),
        });
    }
    let fact = factorize(m)?;
    if !fact.is_squarefree() || fact.r() < 2 {
        return Err(Error::InvalidInput(format!(
            "{m} must be square-free with at least two primes"
        )));
    }
    if !x.is_nonnegative() || !y.is_nonnegative() {
        return Err(Error::NotNonnegative);
    }
    if phi_map(x)? != phi_map(y)? {
        return Err(Error::InvalidInput("φ(x) and φ(y) differ".into()));
    }
    let (p1, p2) = (fact.primes[0], fact.primes[1]);
    let dominated = y.geq(x)?;

    let augmentation_variant = usize::try_from(x.augmentation())
        .ok()
        .filter(|&e| e < p1)
        .map(|e| dominated || y.augmentation() as usize >= (p1 - e) * (p2 - 1));

    if dominated {
        return Ok(TransferReport {
            case: TransferCase::A,
            support_bound: (x.support_size() < p1).then(|| (p1 - x.support_size()) * (p2 - 1)),
            augmentation_variant,
            structure: None,
        });
    }
    if x.support_size() >= p1 {
        return Err(Error::InvalidInput(format!(
            "ε_0(x) = {} must be at most p_1 - 1 = {}",
            x.support_size(),
            p1 - 1
        )));
    }
    let bound = (p1 - x.support_size()) * (p2 - 1);
    let support = y.support_size();
    let (case, structure) = match support.cmp(&bound) {
        std::cmp::Ordering::Greater => (TransferCase::B, None),
        std::cmp::Ordering::Equal => (TransferCase::BEquality, find_structure(x, y, p1, p2)?),
        std::cmp::Ordering::Less => (TransferCase::Violated, None),
    };
    Ok(TransferReport {
        case,
        support_bound: Some(bound),
        augmentation_variant,
        structure,
    })
}

/// Writes `u ∈ NG` as a sum of translates `z^k σ(P)` of prime-order subgroup
/// sums, returned as `(p, k)` pairs, or `None` when impossible.
///
/// The translate covering the smallest exponent of the support must be
/// `z^k σ(P)` for that exponent `k` and some prime `p`; the search branches on
/// `p` and recurses.
pub fn decompose_symmetric(u: &GroupRingElement) -> Result<Option<Vec<(usize, usize)>>> {
    if !u.is_nonnegative() {
        return Err(Error::NotNonnegative);
    }
    let m = u.modulus();
    let primes = factorize(m)?.primes;
    let pieces: Vec<GroupRingElement> = primes.iter().map(|&p| sigma_subgroup(m, p)).collect::<Result<_>>()?;

    fn go(
        u: &GroupRingElement,
        primes: &[usize],
        pieces: &[GroupRingElement],
        out: &mut Vec<(usize, usize)>,
    ) -> Result<bool> {
        let Some(k) = u.support().next() else {
            return Ok(true);
        };
        for (&p, piece) in primes.iter().zip(pieces) {
            let translate = piece.rotate(k as i64);
            if !u.geq(&translate)? {
                continue;
            }
            out.push((p, k % (u.modulus() / p)));
            if go(&u.sub(&translate)?, primes, pieces, out)? {
                return Ok(true);
            }
            out.pop();
        }
        Ok(false)
    }

    let mut out = Vec::new();
    Ok(go(u, &primes, &pieces, &mut out)?.then_some(out))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub workers: usize,
    pub seed: u64,
    /// Random kernel elements tested for a symmetric decomposition.
    pub samples: usize,
    pub node_limit: Option<u64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            workers: 0,
            seed: 0,
            samples: 200,
            node_limit: None,
        }
    }
}

impl VerifyOptions {
    fn census(&self, max_weight: usize) -> CensusOptions {
        CensusOptions {
            workers: self.workers,
            node_limit: self.node_limit,
            allow_large: true,
            ..CensusOptions::new(max_weight)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBoundReport {
    pub m: usize,
    pub max_weight: usize,
    /// `(p_1 - 1)(p_2 - 1) + (p_3 - 1)`; `None` for fewer than three primes.
    pub bound: Option<usize>,
    pub records: usize,
    pub asymmetric: usize,
    pub asymmetric_weights: Vec<usize>,
    pub min_asymmetric_support: Option<usize>,
    pub decomposition_samples: usize,
    pub failures: Vec<String>,
}

impl LowerBoundReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Random sums of rotated census records whose support stays below `cap`.
fn small_kernel_samples(
    records: &[CensusRecord],
    cap: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<GroupRingElement>> {
    let mut out = Vec::new();
    if records.is_empty() {
        return Ok(out);
    }
    let m = records[0].modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    while out.len() < samples && attempts < samples * 50 {
        attempts += 1;
        let mut u = GroupRingElement::zero(m)?;
        for _ in 0..rng.random_range(1..=4) {
            let r = &records[rng.random_range(0..records.len())];
            u = u.add(&r.canon.rotate(rng.random_range(0..m as i64)))?;
        }
        if u.support_size() < cap {
            out.push(u);
        }
    }
    Ok(out)
}

/// Runs the census and checks that every asymmetric class has support at
/// least `(p_1 - 1)(p_2 - 1) + (p_3 - 1)` (and none exist for fewer than three
/// primes), and that random kernel elements of smaller support split into
/// translates of the `σ(P_i)`.
pub fn verify_lower_bound(m: usize, max_weight: usize, opts: &VerifyOptions) -> Result<LowerBoundReport> {
    let fact = factorize(m)?;
    let records = enumerate_minimal_with(m, &opts.census(max_weight))?;
    let bound = match fact.primes.as_slice() {
        [p1, p2, p3, ..] => Some((p1 - 1) * (p2 - 1) + (p3 - 1)),
        _ => None,
    };
    let mut failures = Vec::new();
    let asym: Vec<&CensusRecord> = records.iter().filter(|r| r.is_asymmetric()).collect();
    for r in &asym {
        match bound {
            None => failures.push(format!("asymmetric class with fewer than three primes: {}", r.canon)),
            Some(b) => {
                if r.support < b {
                    failures.push(format!("support {} below {b}: {}", r.support, r.canon));
                }
                if r.support <= fact.primes[2] {
                    failures.push(format!("support {} not above p_3: {}", r.support, r.canon));
                }
            }
        }
        if r.weight < r.support {
            failures.push(format!("weight below support: {}", r.canon));
        }
    }

    let cap = bound.unwrap_or(2 * max_weight.max(1));
    let samples = small_kernel_samples(&records, cap, opts.samples, opts.seed)?;
    for u in &samples {
        debug_assert!(in_kernel(u)?);
        if decompose_symmetric(u)?.is_none() {
            failures.push(format!("no symmetric decomposition: {u}"));
        }
    }

    let asymmetric_weights: BTreeSet<usize> = asym.iter().map(|r| r.weight).collect();
    Ok(LowerBoundReport {
        m,
        max_weight,
        bound,
        records: records.len(),
        asymmetric: asym.len(),
        asymmetric_weights: asymmetric_weights.into_iter().collect(),
        min_asymmetric_support: asym.iter().map(|r| r.support).min(),
        decomposition_samples: samples.len(),
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub m: usize,
    pub bound: usize,
    pub seed_canon: GroupRingElement,
    /// Asymmetric classes of weight `bound`.
    pub bound_classes: Vec<GroupRingElement>,
    /// Asymmetric classes of weight `bound + 1`.
    pub next_classes: Vec<GroupRingElement>,
    /// Whether the `d = g^2` form is among `next_classes`; `None` if `6 ∤ m`.
    pub example_present: Option<bool>,
    /// Set when the census did not finish within the node budget.
    pub skipped: Option<String>,
    pub failures: Vec<String>,
}

impl UniquenessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks, for `m` with at least three primes, that the only asymmetric class
/// of weight `b = (p_1 - 1)(p_2 - 1) + (p_3 - 1)` is that of `x(G)`, and that
/// every asymmetric class of weight `b + 1` is a rotation of
/// `t(h + h^2)(1 + d) + d^2 + ... + d^{p_3 - 1}` for some generator `d` of
/// `P_3` (so there are none unless `6 | m`).
///
/// If the census exceeds `opts.node_limit` the report is marked skipped and
/// passes vacuously.
pub fn verify_uniqueness(m: usize, opts: &VerifyOptions) -> Result<UniquenessReport> {
    let seed = asymmetric_seed(m)?;
    let primes = factorize(m)?.primes;
    let (p1, p2, p3) = (primes[0], primes[1], primes[2]);
    let bound = (p1 - 1) * (p2 - 1) + (p3 - 1);
    let seed_canon = seed.canonical_rotation().1;
    let mut report = UniquenessReport {
        m,
        bound,
        seed_canon: seed_canon.clone(),
        bound_classes: Vec::new(),
        next_classes: Vec::new(),
        example_present: None,
        skipped: None,
        failures: Vec::new(),
    };
    let records = match enumerate_minimal_with(m, &opts.census(bound + 1)) {
        Ok(r) => r,
        Err(Error::BudgetExhausted(n)) => {
            report.skipped = Some(format!(
                "census of m = {m} up to weight {} exceeded {n} search nodes; skipped",
                bound + 1
            ));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    for r in records.iter().filter(|r| r.is_asymmetric()) {
        if r.weight < bound {
            report
                .failures
                .push(format!("asymmetric class below weight {bound}: {}", r.canon));
        } else if r.weight == bound {
            report.bound_classes.push(r.canon.clone());
        } else {
            report.next_classes.push(r.canon.clone());
        }
    }
    if report.bound_classes != [seed_canon] {
        report.failures.push(format!(
            "expected exactly the class of x(G) at weight {bound}, found {}",
            report.bound_classes.len()
        ));
    }

    let templates: Vec<GroupRingElement> = if p1 == 2 && p2 == 3 {
        let example = weight_plus_one_form(m)?.canonical_rotation().1;
        report.example_present = Some(report.next_classes.contains(&example));
        if report.example_present == Some(false) {
            report
                .failures
                .push(format!("weight {} example form missing", bound + 1));
        }
        (1..p3)
            .map(|k| Ok(weight_plus_one_form_with(m, k)?.canonical_rotation().1))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    for c in &report.next_classes {
        if !templates.contains(c) {
            report
                .failures
                .push(format!("weight {} class matches no template: {c}", bound + 1));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(m: usize, terms: &[(usize, i64)]) -> GroupRingElement {
        GroupRingElement::from_terms(m, terms).unwrap()
    }

    #[test]
    fn transfer_examples() {
        let y = sigma_subgroup_star(15, 3)
            .unwrap()
            .mul(&sigma_subgroup_star(15, 5).unwrap())
            .unwrap();
        let r = check_transfer(&GroupRingElement::one(15).unwrap(), &y).unwrap();
        assert_eq!(r.case, TransferCase::BEquality);
        assert_eq!(r.support_bound, Some(8));
        assert_eq!(r.augmentation_variant, Some(true));
        assert_eq!(
            r.structure,
            Some(TransferStructure {
                shift: 0,
                c: 1,
                x_exponents: vec![0]
            })
        );

        let s = sigma_subgroup(15, 3).unwrap();
        assert_eq!(check_transfer(&s, &s).unwrap().case, TransferCase::A);

        let r = check_transfer(&el(15, &[(0, 2)]), &y.scale(2).unwrap()).unwrap();
        assert_eq!(r.case, TransferCase::BEquality);
        assert_eq!(r.structure.unwrap().c, 2);
    }

    #[test]
    fn transfer_case_b_and_errors() {
        // φ(z^0) = -σ(P_1*)
        let x = el(15, &[(0, 1)]);
        let y = sigma_subgroup_star(15, 3)
            .unwrap()
            .mul(&sigma_subgroup_star(15, 5).unwrap())
            .unwrap();
        let bigger = y.add(&sigma_subgroup(15, 5).unwrap().rotate(1)).unwrap();
        let r = check_transfer(&x, &bigger).unwrap();
        assert_eq!(r.case, TransferCase::B);
        assert!(r.structure.is_none());
        assert!(check_transfer(&x, &el(15, &[(1, 1)])).is_err());
        assert!(check_transfer(&el(12, &[(0, 1)]), &el(12, &[(0, 1)])).is_err());
    }

    #[test]
    fn symmetric_decompositions() {
        let u = sigma_subgroup(30, 2)
            .unwrap()
            .rotate(4)
            .add(&sigma_subgroup(30, 3).unwrap().rotate(7))
            .unwrap();
        let parts = decompose_symmetric(&u).unwrap().unwrap();
        let mut acc = GroupRingElement::zero(30).unwrap();
        for (p, k) in parts {
            acc = acc.add(&sigma_subgroup(30, p).unwrap().rotate(k as i64)).unwrap();
        }
        assert_eq!(acc, u);
        assert!(decompose_symmetric(&asymmetric_seed(30).unwrap()).unwrap().is_none());
    }

    #[test]
    fn lower_bound_small() {
        let r = verify_lower_bound(12, 12, &VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.asymmetric, 0);
        let r = verify_lower_bound(30, 7, &VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.asymmetric_weights, vec![6, 7]);
        assert_eq!(r.min_asymmetric_support, Some(6));
    }

    #[test]
    fn uniqueness_m30() {
        let r = verify_uniqueness(30, &VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.example_present, Some(true));
        assert!(r.skipped.is_none());
    }

    #[test]
    fn uniqueness_budget_skip() {
        let opts = VerifyOptions {
            node_limit: Some(1000),
            ..VerifyOptions::default()
        };
        let r = verify_uniqueness(105, &opts).unwrap();
        assert!(r.skipped.is_some());
        assert!(r.passed());
    }
}
