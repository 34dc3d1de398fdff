//! The integral group ring `ZG` of a cyclic group `G = <z>` of order `m`.
//!
//! Elements are dense coefficient vectors: `coeffs[k]` is the coefficient of
//! `z^k`. Coefficients are `i64` and every arithmetic operation is
//! overflow-checked, so results are either exact or an [`Error::Overflow`].

mod factor;
mod text;

use std::cmp::Ordering;

pub use factor::{factorize, is_prime, mod_inverse, radical, totient, Factorization};
pub use text::parse_element;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    m: usize,
    coeffs: Vec<i64>,
}

fn check_modulus(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::ZeroModulus)
    } else {
        Ok(())
    }
}

impl GroupRingElement {
    pub fn zero(m: usize) -> Result<Self> {
        check_modulus(m)?;
        Ok(Self { m, coeffs: vec![0; m] })
    }

    pub fn one(m: usize) -> Result<Self> {
        Self::monomial(m, 0, 1)
    }

    /// `c * z^k`, with `k` taken mod `m`.
    pub fn monomial(m: usize, k: usize, c: i64) -> Result<Self> {
        let mut x = Self::zero(m)?;
        x.coeffs[k % m] = c;
        Ok(x)
    }

    /// Builds an element whose modulus is the length of `coeffs`.
    pub fn from_coeffs(coeffs: Vec<i64>) -> Result<Self> {
        check_modulus(coeffs.len())?;
        Ok(Self {
            m: coeffs.len(),
            coeffs,
        })
    }

    /// Sum of `c * z^k` over `terms`; exponents are reduced mod `m`.
    pub fn from_terms(m: usize, terms: &[(usize, i64)]) -> Result<Self> {
        let mut x = Self::zero(m)?;
        for &(k, c) in terms {
            let slot = &mut x.coeffs[k % m];
            *slot = slot.checked_add(c).ok_or(Error::Overflow("from_terms"))?;
        }
        Ok(x)
    }

    /// The element `z^{e_1} + ... + z^{e_n}` of a multiset of exponents.
    pub fn from_exponents(m: usize, exponents: &[usize]) -> Result<Self> {
        let terms: Vec<_> = exponents.iter().map(|&e| (e, 1)).collect();
        Self::from_terms(m, &terms)
    }

    pub fn modulus(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs[k % self.m]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Exponents with a nonzero coefficient, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, _)| k)
    }

    /// `(exponent, coefficient)` for every nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (k, c))
    }

    fn same_modulus(&self, other: &Self) -> Result<()> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(Error::ModulusMismatch {
                left: self.m,
                right: other.m,
            })
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("add")))
            .collect::<Result<_>>()?;
        Ok(Self { m: self.m, coeffs })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_sub(*b).ok_or(Error::Overflow("sub")))
            .collect::<Result<_>>()?;
        Ok(Self { m: self.m, coeffs })
    }

    pub fn scale(&self, c: i64) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.checked_mul(c).ok_or(Error::Overflow("scale")))
            .collect::<Result<_>>()?;
        Ok(Self { m: self.m, coeffs })
    }

    /// Group-ring product: cyclic convolution of the coefficient sequences.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        let m = self.m;
        let mut acc = vec![0i128; m];
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                let k = (i + j) % m;
                acc[k] = acc[k]
                    .checked_add(a as i128 * b as i128)
                    .ok_or(Error::Overflow("mul"))?;
            }
        }
        let coeffs = acc
            .into_iter()
            .map(|c| i64::try_from(c).map_err(|_| Error::Overflow("mul")))
            .collect::<Result<_>>()?;
        Ok(Self { m, coeffs })
    }

    /// The augmentation `ε(x)`: sum of all coefficients.
    ///
    /// Panics if the sum leaves the `i64` range.
    pub fn augmentation(&self) -> i64 {
        let s: i128 = self.coeffs.iter().map(|&c| c as i128).sum();
        i64::try_from(s).expect("augmentation overflows i64")
    }

    /// `ε₀(x)`: number of nonzero coefficients.
    pub fn support_size(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// `x · z^k`; `k` may be negative and is taken mod `m`.
    pub fn rotate(&self, k: i64) -> Self {
        let m = self.m;
        let shift = k.rem_euclid(m as i64) as usize;
        let mut coeffs = vec![0; m];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[(i + shift) % m] = c;
        }
        Self { m, coeffs }
    }

    /// Partial order: `self >= other` iff every coefficient of `self - other` is `>= 0`.
    pub fn geq(&self, other: &Self) -> Result<bool> {
        self.same_modulus(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a >= b))
    }

    /// Membership in the semi-ring `NG`.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    /// The rotation representative used for classification.
    ///
    /// Among the `m` rotations of `x`, picks the one whose coefficient
    /// sequence `(c_0, c_1, ..., c_{m-1})` is lexicographically greatest.
    /// For a nonzero element of `NG` this puts the largest coefficient at
    /// exponent 0. Returns `(shift, canon)` with `canon == x.rotate(shift)`;
    /// for periodic sequences the smallest such shift is returned.
    pub fn canonical_rotation(&self) -> (usize, Self) {
        let start = greatest_rotation_start(&self.coeffs);
        let shift = (self.m - start) % self.m;
        (shift, self.rotate(shift as i64))
    }

    /// True iff `other` is a rotation of `self`.
    pub fn is_rotation_of(&self, other: &Self) -> bool {
        self.m == other.m && self.canonical_rotation().1 == other.canonical_rotation().1
    }

    /// Pushes the element into the cyclic group of order `big_m` (a multiple of
    /// `m`) along `z^k ↦ z^{k · big_m / m}`.
    pub fn embed(&self, big_m: usize) -> Result<Self> {
        if big_m == 0 || !big_m.is_multiple_of(self.m) {
            return Err(Error::NotADivisor { d: self.m, m: big_m });
        }
        let step = big_m / self.m;
        let mut coeffs = vec![0; big_m];
        for (k, c) in self.terms() {
            coeffs[k * step] = c;
        }
        Ok(Self { m: big_m, coeffs })
    }

    /// Inverse of [`embed`](Self::embed): requires the support to lie in the
    /// subgroup of order `small_m`.
    pub fn restrict(&self, small_m: usize) -> Result<Self> {
        if small_m == 0 || !self.m.is_multiple_of(small_m) {
            return Err(Error::NotADivisor { d: small_m, m: self.m });
        }
        let step = self.m / small_m;
        let mut coeffs = vec![0; small_m];
        for (k, c) in self.terms() {
            if k % step != 0 {
                return Err(Error::InvalidInput(format!(
                    "exponent {k} is outside the subgroup of order {small_m}"
                )));
            }
            coeffs[k / step] = c;
        }
        Ok(Self { m: small_m, coeffs })
    }
}

/// Start index of the lexicographically greatest rotation (two-pointer
/// least-rotation scan with the comparison reversed).
fn greatest_rotation_start(s: &[i64]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        match a.cmp(&b) {
            Ordering::Equal => k += 1,
            Ordering::Less => {
                i += k + 1;
                if i == j {
                    i += 1;
                }
                k = 0;
            }
            Ordering::Greater => {
                j += k + 1;
                if i == j {
                    j += 1;
                }
                k = 0;
            }
        }
    }
    i.min(j)
}

/// `σ(H)` for the unique subgroup `H` of order `d`: `Σ_{k<d} z^{(m/d)k}`.
pub fn sigma_subgroup(m: usize, d: usize) -> Result<GroupRingElement> {
    check_modulus(m)?;
    if d == 0 || !m.is_multiple_of(d) {
        return Err(Error::NotADivisor { d, m });
    }
    let step = m / d;
    let exps: Vec<usize> = (0..d).map(|k| k * step).collect();
    GroupRingElement::from_exponents(m, &exps)
}

/// `σ(H*) = σ(H) - 1`, the sum over the non-identity elements of `H`.
pub fn sigma_subgroup_star(m: usize, d: usize) -> Result<GroupRingElement> {
    sigma_subgroup(m, d)?.sub(&GroupRingElement::one(m)?)
}
