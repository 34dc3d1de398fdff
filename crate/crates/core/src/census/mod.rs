//! Minimal elements of `NG ∩ ker(φ)`: minimality tests, the symmetric /
//! asymmetric split, exhaustive enumeration up to rotation, the extremal
//! constructions and the checks that tie them together.

mod constructions;
mod search;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use constructions::{asymmetric_seed, weight_plus_one_form, weight_plus_one_form_with};
pub use search::{enumerate_minimal, enumerate_minimal_with, CensusOptions, DEFAULT_WEIGHT_GUARD};
pub use verify::{
    check_transfer, decompose_symmetric, verify_lower_bound, verify_uniqueness, LowerBoundReport, TransferCase,
    TransferReport, TransferStructure, UniquenessReport, VerifyOptions,
};

use crate::cyclotomic::{require_kernel, CyclotomicRing};
use crate::error::{Error, Result};
use crate::groupring::{factorize, sigma_subgroup, GroupRingElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Symmetric,
    Asymmetric,
}

/// One rotation class of minimal elements, represented by its canonical
/// rotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRecord {
    pub canon: GroupRingElement,
    pub weight: usize,
    pub support: usize,
    pub class: Classification,
    pub minimality_checked: bool,
}

impl CensusRecord {
    pub fn modulus(&self) -> usize {
        self.canon.modulus()
    }

    pub fn is_symmetric(&self) -> bool {
        self.class == Classification::Symmetric
    }

    pub fn is_asymmetric(&self) -> bool {
        self.class == Classification::Asymmetric
    }

    /// One JSON object, as used in census JSON-lines output.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    m: usize,
    weight: usize,
    support: usize,
    class: Classification,
    coeffs: BTreeMap<usize, i64>,
}

impl Serialize for CensusRecord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RecordJson {
            m: self.modulus(),
            weight: self.weight,
            support: self.support,
            class: self.class,
            coeffs: self.canon.terms().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CensusRecord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RecordJson::deserialize(d)?;
        if raw.m == 0 || raw.coeffs.keys().any(|&k| k >= raw.m) {
            return Err(D::Error::custom("exponent out of range"));
        }
        let terms: Vec<_> = raw.coeffs.into_iter().collect();
        let canon = GroupRingElement::from_terms(raw.m, &terms).map_err(D::Error::custom)?;
        if canon.augmentation() != raw.weight as i64 || canon.support_size() != raw.support {
            return Err(D::Error::custom("weight or support does not match coeffs"));
        }
        Ok(Self {
            canon,
            weight: raw.weight,
            support: raw.support,
            class: raw.class,
            minimality_checked: false,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MinimalityVerdict {
    Minimal,
    Decomposable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityWitness {
    pub verdict: MinimalityVerdict,
    /// A proper nonzero `y <= x` with `φ(y) = 0`, when decomposable.
    pub subsum: Option<GroupRingElement>,
}

impl MinimalityWitness {
    pub fn is_minimal(&self) -> bool {
        self.verdict == MinimalityVerdict::Minimal
    }
}

/// First proper nonzero `y` with `0 <= y <= x` and `φ(y) = 0`, scanning
/// sub-multisets of `x` depth first with exact incremental images.
pub(crate) fn vanishing_subsum(ring: &CyclotomicRing, x: &GroupRingElement) -> Option<GroupRingElement> {
    let terms: Vec<(usize, i64)> = x.terms().collect();
    let total: i64 = terms.iter().map(|t| t.1).sum();
    let mut take = vec![0i64; terms.len()];
    let mut coords = vec![0i64; ring.degree()];

    fn go(
        ring: &CyclotomicRing,
        terms: &[(usize, i64)],
        i: usize,
        taken: i64,
        total: i64,
        take: &mut [i64],
        coords: &mut [i64],
    ) -> bool {
        if i == terms.len() {
            return taken > 0 && taken < total && coords.iter().all(|&c| c == 0);
        }
        let (k, c) = terms[i];
        let p = ring.power(k);
        for t in 0..=c {
            if t > 0 {
                coords.iter_mut().zip(p).for_each(|(a, b)| *a += b);
            }
            take[i] = t;
            if go(ring, terms, i + 1, taken + t, total, take, coords) {
                return true;
            }
        }
        coords.iter_mut().zip(p).for_each(|(a, b)| *a -= c * b);
        take[i] = 0;
        false
    }

    if go(ring, &terms, 0, 0, total, &mut take, &mut coords) {
        let sub: Vec<_> = terms.iter().zip(&take).map(|(&(k, _), &t)| (k, t)).collect();
        Some(GroupRingElement::from_terms(x.modulus(), &sub).expect("valid exponents"))
    } else {
        None
    }
}

fn require_nonzero_nonnegative_kernel(x: &GroupRingElement) -> Result<()> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !x.is_nonnegative() {
        return Err(Error::NotNonnegative);
    }
    require_kernel(x)
}

/// Decides whether `x ∈ NG ∩ ker(φ)` has a proper nonzero vanishing subsum.
pub fn is_minimal(x: &GroupRingElement) -> Result<MinimalityWitness> {
    require_nonzero_nonnegative_kernel(x)?;
    let ring = CyclotomicRing::get(x.modulus())?;
    Ok(match vanishing_subsum(&ring, x) {
        Some(y) => MinimalityWitness {
            verdict: MinimalityVerdict::Decomposable,
            subsum: Some(y),
        },
        None => MinimalityWitness {
            verdict: MinimalityVerdict::Minimal,
            subsum: None,
        },
    })
}

/// Canonical rotations of the `σ(P_i)`.
pub(crate) fn symmetric_canons(m: usize) -> Result<Vec<GroupRingElement>> {
    factorize(m)?
        .primes
        .iter()
        .map(|&p| Ok(sigma_subgroup(m, p)?.canonical_rotation().1))
        .collect()
}

/// Symmetric iff `x` is a rotation of some `σ(P_i)`, assuming minimality.
pub(crate) fn classify_unchecked(x: &GroupRingElement) -> Result<Classification> {
    let canon = x.canonical_rotation().1;
    Ok(if symmetric_canons(x.modulus())?.contains(&canon) {
        Classification::Symmetric
    } else {
        Classification::Asymmetric
    })
}

/// Symmetric or asymmetric, for a minimal `x`.
pub fn classify(x: &GroupRingElement) -> Result<Classification> {
    let w = is_minimal(x)?;
    if let Some(y) = w.subsum {
        return Err(Error::NotMinimal(format!("vanishing subsum {y}")));
    }
    classify_unchecked(x)
}
