use rug::ops::Pow;

use subrank_core::combinatorics::binomial;
use subrank_core::exact_bounds::{
    max_restricted_pair_count, scan_conjecture, verify_rank_inequality, ScanCache, ScanOptions, VerifyPolicy,
};
use subrank_core::gf2::{
    macwilliams, pair_count_by_syndrome, pair_count_quadratic, restricted_pair_count, unrestricted_pair_count,
};
use subrank_core::hypergraph::{kronecker_power, subrank, type_graph, Partition, DEFAULT_BUDGET};
use subrank_core::sampling::{instance_rng, random_subspace};
use subrank_core::spectral::{pair_count_fourier, pair_count_fourier_weight};

const LIMIT: u64 = 1 << 20;

// Three independent routes to the same pair count.
#[test]
fn pair_counts_agree_across_methods() {
    let mut rng = instance_rng(11, "pair-counts");
    for _ in 0..60 {
        let n = 3 + (rand::Rng::random_range(&mut rng, 0..8usize));
        let v = random_subspace(n, 0, n, &mut rng).unwrap();
        for w in 0..=n {
            let q = pair_count_quadratic(n, w, &v).unwrap();
            assert_eq!(pair_count_by_syndrome(n, w, &v).unwrap(), q);
            assert_eq!(pair_count_fourier_weight(n, w, &v, LIMIT).unwrap(), q, "n={n} w={w}");
        }
        if n % 2 == 1 {
            let k = n + 1;
            let restricted = restricted_pair_count(k, &v).unwrap();
            assert_eq!(restricted, pair_count_quadratic(n, k / 2, &v).unwrap());
            assert_eq!(pair_count_fourier(n, &v, LIMIT).unwrap(), restricted);
            let embedded = v.extend(1).unwrap();
            assert_eq!(
                unrestricted_pair_count(k, &v).unwrap(),
                pair_count_quadratic(k, k / 2, &embedded).unwrap()
            );
        }
    }
}

#[test]
fn macwilliams_round_trip() {
    let mut rng = instance_rng(12, "macwilliams");
    for _ in 0..40 {
        let v = random_subspace(10, 0, 10, &mut rng).unwrap();
        let dual = v.orthogonal_complement();
        let wd = v.weight_distribution(LIMIT).unwrap();
        let dual_wd = dual.weight_distribution(LIMIT).unwrap();
        assert_eq!(macwilliams(&dual_wd, &dual.size()).unwrap(), wd);
        assert_eq!(macwilliams(&wd, &v.size()).unwrap(), dual_wd);
    }
}

// For small k the extremal subspace is found by enumeration; the certified
// cell must agree with the inequality evaluated on it directly.
#[test]
fn certified_cells_match_extremal_subspaces() {
    for k in [4u32, 6, 8] {
        let b = binomial(i64::from(k - 1), i64::from(k / 2));
        for r in 0..=k - 2 {
            let cert = verify_rank_inequality(k, r, &VerifyPolicy::default()).unwrap();
            assert!(cert.verified, "k={k} r={r}");
            let (max, witness) = max_restricted_pair_count(k, r).unwrap();
            assert_eq!(witness.dim(), r as usize);
            assert!(witness.is_even_weight());
            assert_eq!(restricted_pair_count(k as usize, &witness).unwrap(), max);
            assert!(max >= b);
            assert!(max.clone().pow(k - 2) <= b.clone().pow(r + k - 2));
        }
    }
}

#[test]
fn scan_is_independent_of_jobs_and_cache() {
    let mut opts = ScanOptions::new(40);
    opts.record_timing = false;
    let serial = scan_conjecture(&opts, None).unwrap();
    opts.jobs = 4;
    assert_eq!(scan_conjecture(&opts, None).unwrap(), serial);
    let dir = tempfile::tempdir().unwrap();
    let cache = ScanCache::open(dir.path().join("cells.jsonl")).unwrap();
    let cold = scan_conjecture(&opts, Some(&cache)).unwrap();
    let cache = ScanCache::open(dir.path().join("cells.jsonl")).unwrap();
    assert!(!cache.is_empty());
    let warm = scan_conjecture(&opts, Some(&cache)).unwrap();
    assert_eq!(cold.rows, serial.rows);
    assert_eq!(warm.rows, serial.rows);
    assert!(warm.summary.cached_cells > 0);
    assert!(serial.all_verified());
}

#[test]
fn type_graph_powers_are_supermultiplicative() {
    let phi = type_graph(&Partition::new(vec![1, 1]).unwrap());
    let q1 = subrank(&phi, DEFAULT_BUDGET);
    let q2 = subrank(&kronecker_power(&phi, 2).unwrap(), DEFAULT_BUDGET);
    assert!(q1.exact && q2.exact);
    assert!(q2.value >= q1.value * q1.value);
}
