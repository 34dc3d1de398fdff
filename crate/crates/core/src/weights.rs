//! Weight sets `W(m) = Np_1 + ... + Np_r` and the character-value check built
//! on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupring::factorize;

/// The numerical semigroup generated by the distinct primes of `m`.
///
/// For a prime power the set is `pN`; it has no conductor and `conductor` and
/// `gaps` are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSet {
    pub m: usize,
    pub primes: Vec<usize>,
    pub conductor: Option<usize>,
    pub gaps: Option<Vec<usize>>,
}

/// `reachable[n]` for `n <= limit`, and for each reachable `n > 0` the index
/// of a prime that can be removed while staying reachable.
fn reachability(primes: &[usize], limit: usize) -> Vec<Option<usize>> {
    let mut last = vec![None; limit + 1];
    // usize::MAX marks 0, reachable with nothing removed
    last[0] = Some(usize::MAX);
    for n in 1..=limit {
        last[n] = primes.iter().position(|&p| p <= n && last[n - p].is_some());
    }
    last
}

impl WeightSet {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::ModulusTooSmall { m, min: 2 });
        }
        let primes = factorize(m)?.primes;
        if primes.len() == 1 {
            return Ok(Self {
                m,
                primes,
                conductor: None,
                gaps: None,
            });
        }
        // Np_1 + Np_2 already contains every n >= (p_1 - 1)(p_2 - 1)
        let ceiling = (primes[0] - 1) * (primes[1] - 1);
        let reach = reachability(&primes, ceiling);
        let gaps: Vec<usize> = (0..=ceiling).filter(|&n| reach[n].is_none()).collect();
        let conductor = gaps.last().map_or(0, |g| g + 1);
        Ok(Self {
            m,
            primes,
            conductor: Some(conductor),
            gaps: Some(gaps),
        })
    }

    pub fn contains(&self, n: usize) -> bool {
        match (&self.conductor, &self.gaps) {
            (Some(c), Some(gaps)) => n >= *c || gaps.binary_search(&n).is_err(),
            _ => n.is_multiple_of(self.primes[0]),
        }
    }

    /// Multiplicities `k_i` with `Σ k_i p_i = n`, or `None` for a non-member.
    pub fn representation(&self, n: usize) -> Option<Vec<usize>> {
        if !self.contains(n) {
            return None;
        }
        let mut counts = vec![0; self.primes.len()];
        let p1 = self.primes[0];
        // slide large n down by p_1 into the tabulated range
        let floor = self.conductor.unwrap_or(0);
        let mut rest = n;
        if rest > floor + p1 {
            let k = (rest - floor) / p1;
            counts[0] += k;
            rest -= k * p1;
        }
        let reach = reachability(&self.primes, rest);
        while rest > 0 {
            let i = reach[rest].expect("members stay reachable");
            counts[i] += 1;
            rest -= self.primes[i];
        }
        Some(counts)
    }

    /// Members in `0..=limit`, ascending.
    pub fn members_up_to(&self, limit: usize) -> Vec<usize> {
        (0..=limit).filter(|&n| self.contains(n)).collect()
    }
}

pub fn weight_set(m: usize) -> Result<WeightSet> {
    WeightSet::new(m)
}

/// Whether some vanishing sum of `n` roots of unity of order dividing `m` exists.
pub fn is_weight(m: usize, n: usize) -> Result<bool> {
    Ok(WeightSet::new(m)?.contains(n))
}

/// `(p - 1)(q - 1)`: every `n` at or above it lies in `Np + Nq`.
pub fn frobenius_bound(p: u64, q: u64) -> Result<u64> {
    if p == 0 || q == 0 || num_integer::gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    Ok((p - 1) * (q - 1))
}

/// `p_1`, the least positive weight.
pub fn smallest_positive_weight(m: usize) -> Result<usize> {
    if m < 2 {
        return Err(Error::ModulusTooSmall { m, min: 2 });
    }
    Ok(factorize(m)?.primes[0])
}

/// Character data `χ(1)`, `χ(g)` for an element `g` of order `order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharCheckInput {
    pub degree: u64,
    pub value: i64,
    pub order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharRule {
    /// `χ(g) <= 0`: `t` must lie in `Σ Np_i`.
    WeightMembership,
    /// `χ(g) > 0` and `t` odd: the order needs an odd prime `ℓ <= t`.
    OddBound { ell: Option<usize> },
    /// `χ(g) > 0` and `t` even: nothing is asserted.
    NoConstraint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharCheckVerdict {
    pub pass: bool,
    pub t: u64,
    pub rule: CharRule,
}

fn in_semigroup(primes: &[usize], n: u64) -> bool {
    let n = n as usize;
    reachability(primes, n)[n].is_some()
}

/// Necessary conditions on a character value of an element of order `m`,
/// with `t = χ(1) + |χ(g)|`:
/// `t ∈ Σ Np_i` when `χ(g) <= 0`, and `t >= ℓ` (the least odd prime of `m`)
/// when `χ(g) > 0` and `t` is odd. Characteristic zero only.
pub fn char_constraint_check(input: &CharCheckInput) -> Result<CharCheckVerdict> {
    let CharCheckInput { degree, value, order } = *input;
    if degree == 0 {
        return Err(Error::InvalidInput("character degree must be positive".into()));
    }
    if order == 0 {
        return Err(Error::InvalidInput("element order must be positive".into()));
    }
    if value.unsigned_abs() > degree {
        return Err(Error::InvalidInput(format!(
            "|χ(g)| = {} exceeds χ(1) = {degree}",
            value.unsigned_abs()
        )));
    }
    let t = degree + value.unsigned_abs();
    let fact = factorize(order)?;
    let verdict = if value <= 0 {
        CharCheckVerdict {
            pass: in_semigroup(&fact.primes, t),
            t,
            rule: CharRule::WeightMembership,
        }
    } else if t % 2 == 1 {
        let ell = fact.smallest_odd_prime();
        CharCheckVerdict {
            pass: ell.is_some_and(|l| t >= l as u64),
            t,
            rule: CharRule::OddBound { ell },
        }
    } else {
        CharCheckVerdict {
            pass: true,
            t,
            rule: CharRule::NoConstraint,
        }
    };
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let w = weight_set(13).unwrap();
        assert_eq!(w.members_up_to(40), vec![0, 13, 26, 39]);
        assert_eq!(w.conductor, None);

        let w = weight_set(14).unwrap();
        assert_eq!(w.conductor, Some(6));
        assert_eq!(w.gaps.as_deref(), Some(&[1, 3, 5][..]));
        assert_eq!(w.members_up_to(10), vec![0, 2, 4, 6, 7, 8, 9, 10]);

        let w = weight_set(15).unwrap();
        assert_eq!(w.conductor, Some(8));
        assert_eq!(w.gaps.as_deref(), Some(&[1, 2, 4, 7][..]));

        assert!(weight_set(1).is_err());
    }

    #[test]
    fn json_shape() {
        let w = weight_set(14).unwrap();
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"{"m":14,"primes":[2,7],"conductor":6,"gaps":[1,3,5]}"#
        );
        let w = weight_set(8).unwrap();
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"{"m":8,"primes":[2],"conductor":null,"gaps":null}"#
        );
    }

    #[test]
    fn even_moduli() {
        for m in [6usize, 10, 14, 22, 20, 44, 70] {
            let p = factorize(m).unwrap().smallest_odd_prime().unwrap();
            let w = weight_set(m).unwrap();
            for n in 0..3 * p {
                let expected = n % 2 == 0 || n >= p;
                assert_eq!(w.contains(n), expected, "m={m} n={n}");
            }
        }
        assert_eq!(weight_set(32).unwrap().members_up_to(7), vec![0, 2, 4, 6]);
    }

    #[test]
    fn membership_queries() {
        assert!(!is_weight(30, 1).unwrap());
        assert!(is_weight(30, 6).unwrap());
        assert!(!is_weight(15, 7).unwrap());
        assert_eq!(smallest_positive_weight(30).unwrap(), 2);
        assert_eq!(smallest_positive_weight(15).unwrap(), 3);
        assert_eq!(smallest_positive_weight(13).unwrap(), 13);
    }

    #[test]
    fn representations() {
        let w = weight_set(105).unwrap();
        for n in 0..200 {
            match w.representation(n) {
                Some(k) => {
                    assert!(w.contains(n));
                    let sum: usize = k.iter().zip(&w.primes).map(|(a, p)| a * p).sum();
                    assert_eq!(sum, n);
                }
                None => assert!(!w.contains(n)),
            }
        }
        assert_eq!(weight_set(13).unwrap().representation(39), Some(vec![3]));
        assert_eq!(
            weight_set(13).unwrap().representation(1_000_001 * 13).unwrap()[0],
            1_000_001
        );
    }

    #[test]
    fn frobenius() {
        assert_eq!(frobenius_bound(2, 5).unwrap(), 4);
        assert_eq!(frobenius_bound(3, 5).unwrap(), 8);
        assert_eq!(frobenius_bound(2, 3).unwrap(), 2);
        assert_eq!(frobenius_bound(4, 6), Err(Error::NotCoprime { p: 4, q: 6 }));
    }

    #[test]
    fn char_checks() {
        let check = |degree, value, order| char_constraint_check(&CharCheckInput { degree, value, order }).unwrap();
        let v = check(7, 0, 10);
        assert!(v.pass && v.t == 7 && v.rule == CharRule::WeightMembership);
        assert!(check(7, -1, 15).pass);
        let v = check(6, 1, 14);
        assert!(v.pass);
        assert_eq!(v.rule, CharRule::OddBound { ell: Some(7) });
        assert!(!check(3, 0, 4).pass);
        assert!(!check(4, 1, 14).pass);
        assert!(!check(2, 1, 8).pass);
        assert_eq!(check(3, 1, 4).rule, CharRule::NoConstraint);
        let bad = CharCheckInput {
            degree: 2,
            value: 3,
            order: 5,
        };
        assert!(char_constraint_check(&bad).is_err());
    }
}
