mod common;

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;

use rootsum_core::census::{
    check_transfer, enumerate_minimal, enumerate_minimal_with, is_minimal, CensusOptions, CensusRecord, TransferCase,
};
use rootsum_core::cyclotomic::{in_kernel, squarefree_reduce};
use rootsum_core::groupring::{factorize, radical};
use rootsum_core::weights::is_weight;
use rootsum_core::{sigma_subgroup_star, GroupRingElement};

const GOLDEN: [(usize, usize); 4] = [(6, 12), (12, 12), (30, 12), (42, 10)];

fn golden_path(m: usize) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/census_{m}.jsonl"))
}

fn read_golden(m: usize) -> Vec<serde_json::Value> {
    std::fs::read_to_string(golden_path(m))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn golden_coeffs(v: &serde_json::Value) -> Vec<i64> {
    let m = v["m"].as_u64().unwrap() as usize;
    let mut out = vec![0; m];
    for (k, c) in v["coeffs"].as_object().unwrap() {
        out[k.parse::<usize>().unwrap()] = c.as_i64().unwrap();
    }
    out
}

#[test]
fn matches_naive_enumerator_beyond_acceptance_range() {
    for (m, w) in [(18, 8), (20, 7), (21, 7), (30, 6)] {
        let got: BTreeSet<Vec<i64>> = enumerate_minimal(m, w)
            .unwrap()
            .into_iter()
            .map(|r| r.canon.into_coeffs())
            .collect();
        assert_eq!(got, common::naive_minimal_classes(m, w), "m = {m}");
    }
}

fn check_record(rec: &CensusRecord, seen: &mut HashSet<GroupRingElement>) {
    let x = &rec.canon;
    let m = x.modulus();
    assert!(in_kernel(x).unwrap() && x.is_nonnegative());
    assert!(is_minimal(x).unwrap().is_minimal());
    assert_eq!(x.canonical_rotation().1, *x);
    assert_eq!(common::brute_canon(x.coeffs()), x.coeffs());
    assert_eq!((rec.weight, rec.support), (x.augmentation() as usize, x.support_size()));
    assert!(is_weight(m, rec.weight).unwrap());
    assert!(seen.insert(x.clone()), "duplicate {x}");
    let oracle = common::VanishingTest::new(m);
    assert!(oracle.vanishes(x.coeffs()));
    assert!(common::brute_minimal(&oracle, x.coeffs()));
}

#[test]
fn records_satisfy_invariants() {
    for (m, w) in [(6, 12), (12, 12), (30, 10), (42, 9), (60, 8), (70, 8)] {
        let recs = enumerate_minimal(m, w).unwrap();
        let mut seen = HashSet::new();
        for rec in &recs {
            check_record(rec, &mut seen);
        }
        let fact = factorize(m).unwrap();
        for rec in recs.iter().filter(|r| r.is_asymmetric()) {
            assert!(fact.r() >= 3);
            let [p1, p2, p3] = [fact.primes[0], fact.primes[1], fact.primes[2]];
            assert!(rec.support >= (p1 - 1) * (p2 - 1) + (p3 - 1));
            assert!(rec.support > p3);
        }
        assert!(recs.windows(2).all(|w| {
            (w[0].weight, w[0].support, w[0].canon.coeffs()) < (w[1].weight, w[1].support, w[1].canon.coeffs())
        }));
    }
}

#[test]
fn records_over_non_squarefree_moduli_reduce_into_the_radical_census() {
    for (m, w) in [(12, 8), (18, 8), (20, 8), (36, 7), (60, 7), (90, 6)] {
        let m0 = radical(m).unwrap();
        let base: HashSet<GroupRingElement> = enumerate_minimal(m0, w).unwrap().into_iter().map(|r| r.canon).collect();
        let recs = enumerate_minimal(m, w).unwrap();
        assert_eq!(recs.len(), base.len(), "m = {m}");
        for rec in recs {
            let red = squarefree_reduce(&rec.canon).unwrap();
            assert!(
                base.contains(&red.reduced.canonical_rotation().1),
                "{} over {m}",
                rec.canon
            );
        }
    }
}

#[test]
fn pruning_and_workers_never_change_output() {
    for (m, w) in [(30, 9), (42, 8), (66, 7)] {
        let base = enumerate_minimal(m, w).unwrap();
        for (prune, workers) in [(false, 1), (true, 1), (false, 4)] {
            let opts = CensusOptions {
                prune,
                workers,
                ..CensusOptions::new(w)
            };
            assert_eq!(enumerate_minimal_with(m, &opts).unwrap(), base, "m = {m}");
        }
    }
}

#[test]
fn golden_files_match() {
    for (m, w) in GOLDEN {
        let recs = enumerate_minimal(m, w).unwrap();
        let lines: Vec<String> = recs.iter().map(|r| r.to_json_line()).collect();
        let expected = std::fs::read_to_string(golden_path(m)).unwrap();
        assert_eq!(lines.join("\n") + "\n", expected, "census_{m}.jsonl");
    }
}

#[test]
fn golden_files_are_independently_valid() {
    for (m, _) in GOLDEN {
        let rows = read_golden(m);
        let oracle = common::VanishingTest::new(m);
        let mut seen = HashSet::new();
        for row in &rows {
            assert_eq!(row["m"].as_u64(), Some(m as u64));
            let c = golden_coeffs(row);
            assert!(c.iter().all(|&v| v >= 0));
            assert!(oracle.vanishes(&c) && common::brute_minimal(&oracle, &c));
            assert_eq!(common::brute_canon(&c), c);
            assert_eq!(row["weight"].as_i64(), Some(c.iter().sum::<i64>()));
            assert_eq!(
                row["support"].as_u64(),
                Some(c.iter().filter(|&&v| v > 0).count() as u64)
            );
            assert!(seen.insert(c));
        }
    }
    // the naive enumerator is cheap enough for the small files
    for (m, w) in [(6, 8), (12, 8)] {
        let small: BTreeSet<Vec<i64>> = read_golden(m)
            .iter()
            .filter(|r| r["weight"].as_u64().unwrap() <= w as u64)
            .map(golden_coeffs)
            .collect();
        assert_eq!(small, common::naive_minimal_classes(m, w));
    }
}

#[test]
fn transfer_dichotomy_on_census_pairs() {
    // x = σ(X) for X ⊂ P_1; y runs over nonnegative elements with φ(y) = φ(x)
    for m in [15, 21, 30] {
        let fact = factorize(m).unwrap();
        let (p1, p2) = (fact.primes[0], fact.primes[1]);
        let p2_star = sigma_subgroup_star(m, p2).unwrap();
        let recs = enumerate_minimal(m, 8).unwrap();
        let step = m / p1;
        for size in 1..p1 {
            let x = GroupRingElement::from_exponents(m, &(0..size).map(|i| i * step).collect::<Vec<_>>()).unwrap();
            let rest = GroupRingElement::from_exponents(m, &(size..p1).map(|i| i * step).collect::<Vec<_>>()).unwrap();
            let tight = rest.mul(&p2_star).unwrap();
            let rep = check_transfer(&x, &tight).unwrap();
            assert_eq!(rep.case, TransferCase::BEquality, "x = {x}");
            assert_eq!(rep.support_bound, Some(tight.support_size()));
            assert!(rep.structure.is_some());
            for rec in &recs {
                for shift in 0..m as i64 {
                    let u = rec.canon.rotate(shift);
                    for y in [x.add(&u).unwrap(), tight.add(&u).unwrap()] {
                        let rep = check_transfer(&x, &y).unwrap();
                        assert!(rep.holds(), "x = {x}, y = {y}: {rep:?}");
                    }
                }
            }
        }
    }
}
