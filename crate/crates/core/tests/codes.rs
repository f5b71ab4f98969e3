mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankmetric::families::{c1, c5, c5_delta, d1, d5, gabidulin, search_delta_c1, twisted};
use rankmetric::linalg;
use rankmetric::{Exec, MrdStatus, RdCode, Scalars, Search};

use common::{ctx, Transform};

fn gauss(n: u32, r: u32, q: i128) -> i128 {
    let mut num = 1i128;
    let mut den = 1i128;
    for i in 0..r {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// Rank distribution of an `n × n` MRD code with minimum distance `d`.
fn mrd_weights(n: u32, d: u32, q: i128) -> Vec<i128> {
    let mut a = vec![0i128; n as usize + 1];
    a[0] = 1;
    for r in d..=n {
        let mut s = 0i128;
        for j in 0..=(r - d) {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            s += sign
                * q.pow(j * (j.max(1) - 1) / 2)
                * gauss(r, j, q)
                * (q.pow(n * (r - d - j + 1)) - 1);
        }
        a[r as usize] = gauss(n, r, q) * s;
    }
    a
}

#[test]
fn mrd_rank_distributions_match_closed_form() {
    let cases = [
        (ctx(2, 1, 4), gabidulin(&ctx(2, 1, 4), 2, 1).unwrap()),
        (ctx(2, 1, 5), gabidulin(&ctx(2, 1, 5), 3, 2).unwrap()),
        (ctx(3, 1, 4), gabidulin(&ctx(3, 1, 4), 2, 3).unwrap()),
        (ctx(2, 2, 3), gabidulin(&ctx(2, 2, 3), 2, 1).unwrap()),
    ];
    for (c, code) in cases {
        let q = c.q() as i128;
        let n = c.n() as u32;
        let d = code.singleton_distance().unwrap() as u32;
        let got: Vec<i128> = code
            .rank_distribution(u64::MAX)
            .unwrap()
            .counts
            .iter()
            .map(|&x| x as i128)
            .collect();
        assert_eq!(got, mrd_weights(n, d, q), "q={q} n={n}");
    }
    let c35 = ctx(3, 1, 5);
    let h = twisted(&c35, 2, 1, c35.gen_pow(1), 0).unwrap();
    let got: Vec<i128> = h.rank_distribution(u64::MAX).unwrap().counts.iter().map(|&x| x as i128).collect();
    assert_eq!(got, mrd_weights(5, 4, 3));
}

#[test]
fn scan_ranks_match_matrix_ranks() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for c in [ctx(2, 1, 4), ctx(3, 1, 3), ctx(5, 1, 2), ctx(2, 2, 2)] {
        for scalars in [Scalars::Fqn, Scalars::Fq] {
            let code = RdCode::random_code(&c, 2, scalars, rng.gen()).unwrap();
            let mut counts = vec![0u128; c.n() + 1];
            for f in code.codewords(false, u64::MAX).unwrap() {
                counts[linalg::rank(&c, &f.matrix_of())] += 1;
            }
            assert_eq!(code.rank_distribution(u64::MAX).unwrap().counts, counts);
        }
    }
}

#[test]
fn exec_modes_agree_on_sampling_and_search() {
    let c = ctx(3, 1, 6);
    let code = gabidulin(&c, 3, 1).unwrap();
    let seq = Search {
        exec: Exec::Sequential,
        budget: 10,
        ..Search::default()
    };
    let par = Search {
        exec: Exec::Parallel,
        ..seq
    };
    assert_eq!(code.is_mrd_in(&seq).label(), code.is_mrd_in(&par).label());
    assert_eq!(
        code.sampled_rank_profile(2000, 4).unwrap(),
        code.sampled_rank_profile(2000, 4).unwrap()
    );
    let small = gabidulin(&ctx(2, 1, 6), 3, 1).unwrap();
    let (s1, p1) = (Search { budget: u64::MAX, ..seq }, Search { budget: u64::MAX, ..par });
    assert_eq!(small.min_distance_in(&s1).unwrap(), small.min_distance_in(&p1).unwrap());
    assert_eq!(
        small.rank_distribution_in(&s1).unwrap(),
        small.rank_distribution_in(&p1).unwrap()
    );
}

#[test]
fn sampling_finds_low_rank_words_in_non_mrd_codes() {
    let c = ctx(2, 1, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut refuted = 0;
    for _ in 0..10 {
        let code = RdCode::random_code(&c, 3, Scalars::Fqn, rng.gen()).unwrap();
        let exact = code.is_mrd(u64::MAX);
        let sampled = code.is_mrd_in(&Search {
            budget: 1,
            samples: 20_000,
            ..Search::default()
        });
        if let MrdStatus::VerifiedFalse { witness: Some(w) } = &sampled {
            refuted += 1;
            assert!(exact.is_verified_false());
            assert!(code.contains(w).unwrap());
            assert!(w.rank() < code.singleton_distance().unwrap());
        }
    }
    assert!(refuted > 0);
}

#[test]
fn sporadic_duals_fit_their_partners() {
    let c6 = ctx(5, 1, 6);
    let delta = search_delta_c1(&c6, 10_000_000).unwrap();
    let pairs = [
        (c1(&c6, delta).unwrap(), d1(&c6, delta).unwrap()),
        (c5(&c6, c5_delta(&c6).unwrap()).unwrap(), d5(&c6, c5_delta(&c6).unwrap()).unwrap()),
    ];
    for (c, d) in pairs {
        let dual = c.delsarte_dual();
        assert_eq!(dual.dim(), d.dim());
        assert_eq!(dual.delsarte_dual(), c);
        assert_eq!(dual, c.delsarte_dual_trace());
        assert!(c.is_mrd(10_000_000).is_verified_true());
    }
}

#[test]
fn minimum_distance_is_equivalence_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let c = ctx(3, 1, 4);
    let code = RdCode::random_code(&c, 2, Scalars::Fqn, 5).unwrap();
    let d = code.min_distance(u64::MAX).unwrap();
    for _ in 0..5 {
        let t = Transform::general(&c, &mut rng);
        assert_eq!(t.apply(&code).min_distance(u64::MAX).unwrap(), d);
    }
}

#[test]
fn json_round_trip_preserves_codes() {
    let c = ctx(2, 2, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for scalars in [Scalars::Fqn, Scalars::Fq] {
        let code = RdCode::random_code(&c, 2, scalars, rng.gen()).unwrap();
        let text = serde_json::to_string(&code.to_json()).unwrap();
        let back = RdCode::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, code);
    }
}
