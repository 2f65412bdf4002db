use dephasing_core::sampling::random_vectors;
use dephasing_core::{
    barycenter_purity, bloch_volume, cayley_menger_volume, channel_bloch_vectors,
    channel_from_vectors, choi_purity, gram_volume_oracle, max_subvolume, mcmq_channel,
    random_channel, squared_distances, stream_rng, tetrahedral_angle, SquaredDistanceMatrix,
};
use proptest::prelude::*;

fn mcmq_volume(alpha: f64) -> f64 {
    3f64.sqrt() / 4.0 * alpha.sin().powi(2) * (1.0 - alpha.cos())
}

// Lexicographic k-subsets of 0..n.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cayley_menger_matches_gram_oracle(seed in any::<u64>(), r in 2usize..4) {
        let n = r * r;
        let d = random_channel(n, r, &mut stream_rng(seed, 0)).unwrap();
        let points = channel_bloch_vectors(&d).unwrap();
        let oracle = gram_volume_oracle(&points);
        prop_assert!((bloch_volume(&d) - oracle).abs() < 1e-10);
        let from_points = cayley_menger_volume(&SquaredDistanceMatrix::from_points(&points));
        prop_assert!((from_points - oracle).abs() < 1e-10);
    }

    #[test]
    fn distance_and_overlap_identities(seed in any::<u64>(), n in 2usize..7, r in 2usize..5) {
        let d = random_channel(n, r, &mut stream_rng(seed, 0)).unwrap();
        let r = d.rank();
        let b = channel_bloch_vectors(&d).unwrap();
        let s = squared_distances(&d);
        for i in 0..n {
            for j in 0..n {
                let dij = d.entry(i, j).norm_sqr();
                let diff: f64 = b[i].coords().iter().zip(b[j].coords()).map(|(x, y)| (x - y).powi(2)).sum();
                prop_assert!((s.entries()[(i, j)] - 4.0 * (1.0 - dij)).abs() < 1e-10);
                prop_assert!((s.entries()[(i, j)] - diff).abs() < 1e-10);
                prop_assert!((dij - (1.0 / r as f64 + 0.5 * b[i].dot(&b[j]))).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn purity_is_barycenter_length(seed in any::<u64>(), n in 2usize..7, r in 2usize..4) {
        let d = random_channel(n, r, &mut stream_rng(seed, 0)).unwrap();
        let p = barycenter_purity(&channel_bloch_vectors(&d).unwrap()).unwrap();
        prop_assert!((p - choi_purity(&d)).abs() < 1e-12);
    }

    #[test]
    fn volume_is_invariant_under_phases_and_relabeling(
        seed in any::<u64>(),
        phases in proptest::collection::vec(-3.2f64..3.2, 4),
        perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
    ) {
        let d = random_channel(4, 2, &mut stream_rng(seed, 0)).unwrap();
        let v = bloch_volume(&d);
        prop_assert!((bloch_volume(&d.phase_conjugated(&phases).unwrap()) - v).abs() < 1e-12);
        prop_assert!((bloch_volume(&d.permuted(&perm).unwrap()) - v).abs() < 1e-12);
    }

    #[test]
    fn volume_is_invariant_under_common_rotation(seed in any::<u64>()) {
        let mut rng = stream_rng(seed, 0);
        let v = random_vectors(4, 2, &mut rng).unwrap();
        let u = dephasing_core::random_unitary(2, &mut rng);
        let a = bloch_volume(&channel_from_vectors(&v));
        let b = bloch_volume(&channel_from_vectors(&v.rotated(&u).unwrap()));
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn sub_matrix_search_matches_brute_force(seed in any::<u64>(), n in 5usize..7) {
        let d = random_channel(n, 2, &mut stream_rng(seed, 0)).unwrap();
        let s = squared_distances(&d);
        let mut best = (f64::NEG_INFINITY, Vec::new());
        for idx in subsets(n, 4) {
            let v = cayley_menger_volume(&s.select(&idx));
            if v > best.0 {
                best = (v, idx);
            }
        }
        let found = max_subvolume(&d).unwrap();
        prop_assert_eq!(found.volume, best.0);
        prop_assert_eq!(found.indices, best.1);
    }
}

#[test]
fn mcmq_volume_follows_closed_form_and_grows() {
    let top = tetrahedral_angle();
    let mut last = -1.0;
    for i in 0..=200 {
        let alpha = top * i as f64 / 200.0;
        let v = bloch_volume(&mcmq_channel(alpha).unwrap());
        assert!((v - mcmq_volume(alpha)).abs() < 1e-10, "alpha {alpha}");
        assert!(v >= last - 1e-15);
        last = v;
    }
    assert!((last - 8.0 * 3f64.sqrt() / 27.0).abs() < 1e-10);
}

#[test]
fn mcmq_purity_follows_closed_form() {
    for i in 0..=40 {
        let alpha = tetrahedral_angle() * i as f64 / 40.0;
        let c = (1.0 + 3.0 * alpha.cos()) / 4.0;
        let p = choi_purity(&mcmq_channel(alpha).unwrap());
        assert!((p - 0.5 * (1.0 + c * c)).abs() < 1e-12);
    }
}
