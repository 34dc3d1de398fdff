//! Exhaustive enumeration of minimal elements up to rotation.
//!
//! The search runs over `m_0 = rad(m)`: a minimal element lives on a single
//! coset of the subgroup of order `m_0`, so rotating it onto that subgroup and
//! restricting gives a bijection between rotation classes over `m` and over
//! `m_0`. Over `m_0` it walks exponent multisets `0 = e_1 <= e_2 <= ...` depth
//! first, keeping the exact image in `Z[ζ]` up to date.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use super::{classify_unchecked, vanishing_subsum, CensusRecord};
use crate::cyclotomic::{root_table_f64, CyclotomicRing};
use crate::error::{Error, Result};
use crate::groupring::{factorize, GroupRingElement};

/// Largest `max_weight` accepted without `allow_large`.
pub const DEFAULT_WEIGHT_GUARD: usize = 14;

/// Slack added to the numeric prune; far above the `f64` rounding of a few
/// dozen unit vectors.
const PRUNE_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusOptions {
    pub max_weight: usize,
    /// Threads for the depth-one split; `0` means one per available core.
    pub workers: usize,
    /// Numeric prune on Galois conjugates. Never changes the output.
    pub prune: bool,
    pub allow_large: bool,
    /// Abort with [`Error::BudgetExhausted`] after this many search nodes.
    pub node_limit: Option<u64>,
}

impl CensusOptions {
    pub fn new(max_weight: usize) -> Self {
        Self {
            max_weight,
            workers: 0,
            prune: true,
            allow_large: false,
            node_limit: None,
        }
    }
}

struct Shared {
    m0: usize,
    max_weight: usize,
    ring: Arc<CyclotomicRing>,
    /// Units `a` with `a <= m_0 - a`; the conjugate `ζ ↦ ζ^a` covers the rest
    /// up to complex conjugation.
    conjugates: Vec<usize>,
    roots: Arc<Vec<(f64, f64)>>,
    prune: bool,
    nodes: AtomicU64,
    limit: Option<u64>,
    aborted: AtomicBool,
}

struct Walker<'a> {
    s: &'a Shared,
    counts: Vec<i64>,
    coords: Vec<i64>,
    sums: Vec<(f64, f64)>,
    size: usize,
    found: Vec<GroupRingElement>,
}

impl<'a> Walker<'a> {
    fn new(s: &'a Shared) -> Self {
        Self {
            s,
            counts: vec![0; s.m0],
            coords: vec![0; s.ring.degree()],
            sums: vec![(0.0, 0.0); s.conjugates.len()],
            size: 0,
            found: Vec::new(),
        }
    }

    fn push(&mut self, e: usize) {
        self.counts[e] += 1;
        self.size += 1;
        for (c, p) in self.coords.iter_mut().zip(self.s.ring.power(e)) {
            *c += p;
        }
        for (sum, &a) in self.sums.iter_mut().zip(&self.s.conjugates) {
            let (re, im) = self.s.roots[(a * e) % self.s.m0];
            sum.0 += re;
            sum.1 += im;
        }
    }

    fn pop(&mut self, e: usize) {
        self.counts[e] -= 1;
        self.size -= 1;
        for (c, p) in self.coords.iter_mut().zip(self.s.ring.power(e)) {
            *c -= p;
        }
        for (sum, &a) in self.sums.iter_mut().zip(&self.s.conjugates) {
            let (re, im) = self.s.roots[(a * e) % self.s.m0];
            sum.0 -= re;
            sum.1 -= im;
        }
    }

    /// Every conjugate of the partial sum can still be cancelled by the
    /// remaining unit vectors.
    fn reachable(&self) -> bool {
        let rest = (self.s.max_weight - self.size) as f64 + PRUNE_MARGIN;
        let rest2 = rest * rest;
        self.sums.iter().all(|&(re, im)| re * re + im * im <= rest2)
    }

    fn visit(&mut self, last: usize) -> Result<()> {
        let n = self.s.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.s.limit.is_some_and(|l| n > l) || self.s.aborted.load(Ordering::Relaxed) {
            self.s.aborted.store(true, Ordering::Relaxed);
            return Err(Error::BudgetExhausted(self.s.limit.unwrap_or(0)));
        }
        if self.coords.iter().all(|&c| c == 0) {
            // extensions of a vanishing partial sum are never minimal
            let x = GroupRingElement::from_coeffs(self.counts.clone())?;
            if vanishing_subsum(&self.s.ring, &x).is_none() {
                self.found.push(x.canonical_rotation().1);
            }
            return Ok(());
        }
        if self.size == self.s.max_weight || (self.s.prune && !self.reachable()) {
            return Ok(());
        }
        for e in last..self.s.m0 {
            // the lexicographically greatest rotation carries its largest
            // coefficient at exponent 0
            if e > 0 && self.counts[e] >= self.counts[0] {
                continue;
            }
            self.push(e);
            let r = self.visit(e);
            self.pop(e);
            r?;
        }
        Ok(())
    }
}

fn search_radical(m0: usize, opts: &CensusOptions) -> Result<HashSet<GroupRingElement>> {
    let shared = Shared {
        m0,
        max_weight: opts.max_weight,
        ring: CyclotomicRing::get(m0)?,
        conjugates: (1..m0)
            .filter(|&a| num_integer::gcd(a, m0) == 1 && a <= m0 - a)
            .collect(),
        roots: root_table_f64(m0),
        prune: opts.prune,
        nodes: AtomicU64::new(0),
        limit: opts.node_limit,
        aborted: AtomicBool::new(false),
    };
    let task = |second: Option<usize>| -> Result<Vec<GroupRingElement>> {
        let mut w = Walker::new(&shared);
        w.push(0);
        match second {
            None => {
                // the single-term multiset {0}; never vanishes for m_0 > 1
                debug_assert!(w.coords.iter().any(|&c| c != 0));
            }
            Some(e) => {
                w.push(e);
                w.visit(e)?;
            }
        }
        Ok(w.found)
    };

    let mut seconds = vec![None];
    if opts.max_weight >= 2 {
        seconds.extend((0..m0).map(Some));
    }
    let workers = if opts.workers == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        opts.workers
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let parts: Vec<Vec<GroupRingElement>> =
        pool.install(|| seconds.into_par_iter().map(task).collect::<Result<_>>())?;
    Ok(parts.into_iter().flatten().collect())
}

/// Every rotation class of minimal elements of `NG ∩ ker(φ)` with weight at
/// most `max_weight`, sorted by (weight, support, coefficients).
pub fn enumerate_minimal(m: usize, max_weight: usize) -> Result<Vec<CensusRecord>> {
    enumerate_minimal_with(m, &CensusOptions::new(max_weight))
}

pub fn enumerate_minimal_with(m: usize, opts: &CensusOptions) -> Result<Vec<CensusRecord>> {
    if m < 2 {
        return Err(Error::ModulusTooSmall { m, min: 2 });
    }
    if opts.max_weight > DEFAULT_WEIGHT_GUARD && !opts.allow_large {
        return Err(Error::WeightGuard {
            requested: opts.max_weight,
            guard: DEFAULT_WEIGHT_GUARD,
        });
    }
    let m0 = factorize(m)?.radical();
    let found = if opts.max_weight == 0 {
        HashSet::new()
    } else {
        search_radical(m0, opts)?
    };
    let mut records = found
        .into_iter()
        .map(|y| {
            let canon = y.embed(m)?.canonical_rotation().1;
            let class = if m == m0 {
                classify_unchecked(&canon)?
            } else {
                // classes correspond along the embedding, and so do the σ(P_i)
                classify_unchecked(&y)?
            };
            Ok(CensusRecord {
                weight: canon.augmentation() as usize,
                support: canon.support_size(),
                class,
                minimality_checked: true,
                canon,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| (a.weight, a.support, a.canon.coeffs()).cmp(&(b.weight, b.support, b.canon.coeffs())));
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::sigma_subgroup;

    #[test]
    fn m12() {
        let recs = enumerate_minimal(12, 12).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].canon, sigma_subgroup(12, 2).unwrap());
        assert_eq!(recs[1].canon, sigma_subgroup(12, 3).unwrap());
        assert!(recs.iter().all(|r| r.is_symmetric() && r.minimality_checked));
    }

    #[test]
    fn m2_and_primes() {
        let recs = enumerate_minimal(2, 12).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].canon.coeffs(), &[1, 1]);
        let recs = enumerate_minimal(7, 12).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].weight, 7);
        assert!(enumerate_minimal(7, 6).unwrap().is_empty());
    }

    #[test]
    fn m30_weight_6() {
        let recs = enumerate_minimal(30, 6).unwrap();
        assert_eq!(recs.len(), 4);
        let asym: Vec<_> = recs.iter().filter(|r| r.is_asymmetric()).collect();
        assert_eq!(asym.len(), 1);
        assert_eq!((asym[0].weight, asym[0].support), (6, 6));
    }

    #[test]
    fn prune_and_workers_do_not_change_output() {
        for m in [10, 15, 30] {
            let base = enumerate_minimal(m, 6).unwrap();
            let mut opts = CensusOptions::new(6);
            opts.prune = false;
            opts.workers = 1;
            assert_eq!(enumerate_minimal_with(m, &opts).unwrap(), base);
            opts.workers = 3;
            opts.prune = true;
            assert_eq!(enumerate_minimal_with(m, &opts).unwrap(), base);
        }
    }

    #[test]
    fn guard_and_budget() {
        assert!(matches!(enumerate_minimal(30, 15), Err(Error::WeightGuard { .. })));
        let mut opts = CensusOptions::new(10);
        opts.node_limit = Some(100);
        assert!(matches!(
            enumerate_minimal_with(30, &opts),
            Err(Error::BudgetExhausted(100))
        ));
        assert!(enumerate_minimal(1, 3).is_err());
        assert!(enumerate_minimal(6, 0).unwrap().is_empty());
    }
}
