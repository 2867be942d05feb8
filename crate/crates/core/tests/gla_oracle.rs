mod oracle;

use std::collections::BTreeSet;

use oracle::{naive_gla, sorted_sites, Board};
use rfpm_core::field::{FieldConvention, FieldRealization};
use rfpm_core::gla::{estimate_mean_gla, exact_gla, greedy_gla, AnnealSchedule, Scorer};
use rfpm_core::lattice::{enumerate_animals, is_simply_connected, BoxSpec, Site};
use rfpm_core::{Optimizer, WeightMode};

fn unit_field(n: u32, q: usize, seed: u64) -> FieldRealization {
    FieldRealization::sample(BoxSpec::new(n), q, 1.0, seed, FieldConvention::UnitVariance).unwrap()
}

fn enumerated(n: u32, max_size: usize) -> BTreeSet<Vec<Site>> {
    enumerate_animals(BoxSpec::new(n), max_size)
        .map(|a| a.sites().to_vec())
        .collect()
}

fn oracle_set(n: u32, max_size: usize) -> BTreeSet<Vec<Site>> {
    let b = Board::new(n);
    b.animals(max_size).into_iter().map(|m| sorted_sites(b.sites_of(m))).collect()
}

#[test]
fn bitboard_agrees_with_library_predicates() {
    let b = Board::new(2);
    let sets = [&[(0, 0), (1, 0), (1, 1), (0, 1)][..], &[(0, 0), (1, 1)], &[(-1, 0), (0, 1), (1, 0), (0, -1), (0, 0)]];
    for pts in sets {
        let sites: Vec<Site> = pts.iter().map(|&(x, y)| Site::new(x, y)).collect();
        let m = sites.iter().fold(0u128, |m, &s| m | b.bit(s));
        assert_eq!(b.simply_connected(m), is_simply_connected(&sites), "{pts:?}");
    }
    let ring: Vec<Site> = (-1..=1).flat_map(|y| (-1..=1).map(move |x| Site::new(x, y))).filter(|s| *s != Site::ORIGIN).collect();
    let m = ring.iter().fold(0u128, |m, &s| m | b.bit(s));
    assert!(b.connected(m) && !b.simply_connected(m));
    assert_eq!(b.edge_boundary(b.bit(Site::ORIGIN)), 4);
}

#[test]
fn enumeration_count_on_small_box() {
    assert_eq!(oracle_set(2, 3).len(), 23);
    assert_eq!(enumerated(2, 3), oracle_set(2, 3));
}

#[test]
fn enumeration_matches_oracle_on_lambda3() {
    let lib = enumerated(3, 6);
    let brute = oracle_set(3, 6);
    assert_eq!(lib.len(), brute.len());
    assert_eq!(lib, brute);
}

#[test]
fn enumeration_is_rotation_symmetric() {
    let base = enumerated(3, 6);
    let rotated: BTreeSet<Vec<Site>> = base
        .iter()
        .map(|a| sorted_sites(a.iter().map(|s| s.rotate90()).collect()))
        .collect();
    assert_eq!(base, rotated);
    assert_eq!(enumerated(3, 6).into_iter().collect::<Vec<_>>(), base.into_iter().collect::<Vec<_>>());
}

#[test]
fn exact_matches_oracle_n2_q3_seed1() {
    let b = Board::new(2);
    let animals = b.animals(8);
    let field = unit_field(2, 3, 1);
    let (score, sites) = naive_gla(&field, &b, &animals);
    let r = exact_gla(&field, 8, None).unwrap();
    assert_eq!(r.score, score);
    assert_eq!(r.animal.sites(), &sites[..]);
    assert_eq!(r.evaluations, animals.len() as u64);
}

#[test]
fn exact_mean_matches_oracle_mean() {
    let b = Board::new(2);
    let animals = b.animals(8);
    let opt = Optimizer::Exact { max_size: 8 };
    let est = estimate_mean_gla(BoxSpec::new(2), 2, 1.0, FieldConvention::UnitVariance, 200, &opt, 0).unwrap();
    let naive: Vec<f64> = (0..200).map(|s| naive_gla(&unit_field(2, 2, s), &b, &animals).0).collect();
    for (rec, &n) in est.records.iter().zip(&naive) {
        assert_eq!(rec.score, n, "seed {}", rec.seed);
    }
    let naive_mean = naive.iter().sum::<f64>() / naive.len() as f64;
    assert!((est.mean - naive_mean).abs() <= 3.0 * est.stderr);
}

#[test]
fn greedy_regression_anchor() {
    let field = unit_field(2, 3, 1);
    let g = greedy_gla(&field, Site::ORIGIN, usize::MAX).unwrap();
    let exact = exact_gla(&field, 25, None).unwrap();
    assert!(g.score <= exact.score);
    assert!(g.animal.contains_origin());
    assert_eq!(g.score, GREEDY_ANCHOR);
}

/// Greedy score on the N=2, q=3, seed-1 field, frozen after the first run.
const GREEDY_ANCHOR: f64 = 0.12942770852943694;

#[test]
fn heuristics_never_beat_exact() {
    let b = Board::new(2);
    let animals = b.animals(25);
    let schedule = AnnealSchedule {
        sweeps: 20,
        restarts: 2,
        ..AnnealSchedule::default()
    };
    for seed in 0..50 {
        let field = unit_field(2, 2, seed);
        let best = naive_gla(&field, &b, &animals).0;
        let scorer = Scorer::new(&field, WeightMode::AllColors);
        let a = scorer.anneal(schedule, seed).unwrap();
        let g = scorer.greedy(Site::ORIGIN, usize::MAX).unwrap();
        assert!(a.score <= best + 1e-12, "seed {seed}: anneal {} > {best}", a.score);
        assert!(g.score <= best + 1e-12, "seed {seed}: greedy {} > {best}", g.score);
    }
}
