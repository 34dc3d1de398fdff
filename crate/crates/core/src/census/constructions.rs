//! Explicit asymmetric minimal elements.

use crate::error::{Error, Result};
use crate::groupring::{factorize, sigma_subgroup_star, GroupRingElement};

fn three_primes(m: usize) -> Result<[usize; 3]> {
    let fact = factorize(m)?;
    match fact.primes.as_slice() {
        [p1, p2, p3, ..] => Ok([*p1, *p2, *p3]),
        _ => Err(Error::PrimeCount {
            m,
            r: fact.r(),
            needed: "at least three primes are required",
        }),
    }
}

/// `x(G) = σ(P_1*)σ(P_2*) + σ(P_3*)` over the three smallest primes of `m`.
///
/// Minimal and asymmetric, of weight and support
/// `(p_1 - 1)(p_2 - 1) + (p_3 - 1)`.
pub fn asymmetric_seed(m: usize) -> Result<GroupRingElement> {
    let [p1, p2, p3] = three_primes(m)?;
    sigma_subgroup_star(m, p1)?
        .mul(&sigma_subgroup_star(m, p2)?)?
        .add(&sigma_subgroup_star(m, p3)?)
}

/// [`weight_plus_one_form_with`] for `d = g^2`.
pub fn weight_plus_one_form(m: usize) -> Result<GroupRingElement> {
    weight_plus_one_form_with(m, 2)
}

/// `t(h + h^2)(1 + d) + d^2 + d^3 + ... + d^{p_3 - 1}` where `t`, `h`, `g`
/// are the standard generators `z^{m/2}`, `z^{m/3}`, `z^{m/p_3}` and
/// `d = g^k`.
///
/// Requires `6 | m`, at least three primes and `p_3 ∤ k`. The result is a
/// minimal asymmetric element of weight `2 + p_3`.
pub fn weight_plus_one_form_with(m: usize, k: usize) -> Result<GroupRingElement> {
    let [p1, p2, p3] = three_primes(m)?;
    if (p1, p2) != (2, 3) {
        return Err(Error::InvalidInput(format!("{m} is not divisible by 6")));
    }
    if k.is_multiple_of(p3) {
        return Err(Error::InvalidInput(format!(
            "g^{k} does not generate the subgroup of order {p3}"
        )));
    }
    let monomial = |e: usize| GroupRingElement::monomial(m, e % m, 1);
    let t = monomial(m / 2)?;
    let h_sum = sigma_subgroup_star(m, 3)?;
    let step = (m / p3) * (k % p3);
    let one_plus_d = GroupRingElement::one(m)?.add(&monomial(step)?)?;
    let mut x = t.mul(&h_sum)?.mul(&one_plus_d)?;
    for j in 2..p3 {
        x = x.add(&monomial(j * step)?)?;
    }
    Ok(x)
}
