mod common;

use common::{for_each_partition, grid_symmetries, naive_optimal, partition_cost};
use cvtq_core::dquant::{
    distortion_discrete, is_discrete_cvt, lloyd_discrete, mean, optimal_nmeans_exact, optimal_nmeans_exact_with,
    preset,
};
use cvtq_core::{DiscreteUniform, Point, Quantizer};
use proptest::prelude::*;

/// Small point sets on a coarse lattice, so that ties between partitions are common.
fn lattice_set(max: usize) -> impl Strategy<Value = DiscreteUniform> {
    prop::collection::btree_set((0i32..5, 0i32..4), 1..=max).prop_map(|s| {
        DiscreteUniform::new(s.into_iter().map(|(x, y)| Point::new(x as f64, y as f64)).collect()).unwrap()
    })
}

fn scattered_set(max: usize) -> impl Strategy<Value = DiscreteUniform> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 1..=max).prop_filter_map("duplicates", |v| {
        DiscreteUniform::new(v.into_iter().map(|(x, y)| Point::new(x, y)).collect()).ok()
    })
}

fn point_set(max: usize) -> impl Strategy<Value = DiscreteUniform> {
    prop_oneof![lattice_set(max), scattered_set(max)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn branch_and_bound_matches_enumeration(d in point_set(8)) {
        for n in 1..=d.len() {
            let exact = optimal_nmeans_exact(&d, n).unwrap();
            let (vn, sets) = naive_optimal(d.points(), n, 1e-9);
            prop_assert!((exact.vn - vn).abs() <= 1e-12 * vn.max(1.0), "n={n}: {} vs {vn}", exact.vn);
            prop_assert_eq!(exact.optimal_sets.len(), sets.len(), "n={}", n);
            for (a, b) in exact.optimal_sets.iter().zip(&sets) {
                prop_assert!(a.approx_eq(b, 1e-9), "n={n}: {a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn lloyd_never_beats_the_optimum(d in point_set(10), seed in any::<u64>()) {
        let n = 1 + (seed as usize) % d.len().min(5);
        let vn = optimal_nmeans_exact(&d, n).unwrap().vn;
        // Start from n distinct data points picked by the seed.
        let mut idx: Vec<usize> = (0..d.len()).collect();
        idx.rotate_left((seed >> 8) as usize % d.len());
        let init = Quantizer::new(idx[..n].iter().map(|&i| d.points()[i]).collect()).unwrap();
        let c = lloyd_discrete(&d, &init, 1_000).unwrap();
        prop_assert!(c.sse >= vn - 1e-12, "{} < {vn}", c.sse);
        prop_assert!(is_discrete_cvt(&d, &c.centers, 1e-9));
    }

    #[test]
    fn optimal_sets_are_fixed_points(d in point_set(9)) {
        for n in 1..=d.len().min(4) {
            let r = optimal_nmeans_exact(&d, n).unwrap();
            for q in &r.optimal_sets {
                prop_assert!((distortion_discrete(&d, q) - r.vn).abs() <= 1e-9);
                prop_assert!(is_discrete_cvt(&d, q, 1e-9), "n={n}: {q:?}");
                let c = lloyd_discrete(&d, q, 10).unwrap();
                prop_assert!(c.centers.approx_eq(q, 1e-9));
            }
        }
    }

    #[test]
    fn vn_decreases_to_zero(d in point_set(9)) {
        let mut prev = f64::INFINITY;
        for n in 1..=d.len() {
            let vn = optimal_nmeans_exact(&d, n).unwrap().vn;
            prop_assert!(vn <= prev + 1e-12);
            prev = vn;
        }
        prop_assert!(prev.abs() < 1e-15);
    }

    #[test]
    fn variance_decomposes_over_clusters(d in scattered_set(12), labels_seed in any::<u64>()) {
        let m = d.len();
        let n = 1 + (labels_seed as usize) % m;
        // First n points open the clusters, the rest are spread by the seed.
        let labels: Vec<usize> = (0..m)
            .map(|i| if i < n { i } else { (labels_seed.rotate_left(i as u32) as usize) % n })
            .collect();
        let (means, within) = partition_cost(d.points(), &labels, n);
        let g = mean(&d);
        let total = d.points().iter().map(|&p| (p - g).norm_sq()).sum::<f64>() / m as f64;
        let between = labels.iter().map(|&l| (means[l] - g).norm_sq()).sum::<f64>() / m as f64;
        prop_assert!((total - within - between).abs() < 1e-10, "{total} vs {}", within + between);
    }

    #[test]
    fn optimum_is_similarity_equivariant(d in scattered_set(7), s in 0.25..4.0f64, angle in 0.0..std::f64::consts::TAU) {
        let moved = DiscreteUniform::new(
            d.points().iter().map(|p| p.rotate(angle) * s + Point::new(1.0, -2.0)).collect(),
        ).unwrap();
        for n in 1..=d.len().min(3) {
            let a = optimal_nmeans_exact(&d, n).unwrap().vn;
            let b = optimal_nmeans_exact(&moved, n).unwrap().vn;
            prop_assert!((b - s * s * a).abs() <= 1e-9 * (1.0 + b));
        }
    }
}

#[test]
fn partition_counts_are_stirling_numbers() {
    let mut count = 0;
    for_each_partition(6, 3, &mut |_| count += 1);
    assert_eq!(count, 90);
}

#[test]
fn grid_optimal_sets_are_closed_under_symmetry() {
    let g = preset("grid4").unwrap();
    for n in 1..=8 {
        let sets = optimal_nmeans_exact(&g, n).unwrap().optimal_sets;
        for f in grid_symmetries() {
            for q in &sets {
                let image = Quantizer::new(q.centers().iter().map(|&c| f(c)).collect()).unwrap();
                assert!(sets.iter().any(|s| s.same_set(&image, 1e-9)), "n={n}: image of {q:?} missing");
            }
        }
    }
}

#[test]
fn parallel_search_is_schedule_independent() {
    let g = preset("grid4").unwrap();
    for n in [3, 5, 6] {
        let a = optimal_nmeans_exact_with(&g, n, false).unwrap();
        let b = optimal_nmeans_exact_with(&g, n, true).unwrap();
        assert_eq!(a.vn, b.vn);
        assert_eq!(a.optimal_sets, b.optimal_sets);
    }
}
