mod common;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankmetric::arith::gcd;
use rankmetric::families::{c3, c4, d3, gabidulin, twisted, twisted_unchecked};
use rankmetric::invariants::{
    gabidulin_index, h_invariant, is_equiv_gabidulin, is_equiv_gabidulin_with,
    is_equiv_twisted_with, left_idealiser, right_idealiser, verify_index_witness, IndexStatus,
    TwistedStep,
};
use rankmetric::{FieldContext, Gf, LinearizedPoly, MrdStatus, RdCode, Scalars, Search};

use common::{ctx, nonzero, Transform};

/// Every `m`-dimensional subspace of `F^k`, as coefficient rows in RREF.
fn subspaces(ctx: &FieldContext, k: usize, m: usize) -> Vec<Vec<Vec<Gf>>> {
    fn pivots(k: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for p in start..k {
            cur.push(p);
            pivots(k, m, p + 1, cur, out);
            cur.pop();
        }
    }
    let mut sets = Vec::new();
    pivots(k, m, 0, &mut Vec::new(), &mut sets);
    let size = ctx.size();
    let mut out = Vec::new();
    for piv in sets {
        // free positions: right of the row's pivot, not another pivot
        let free: Vec<(usize, usize)> = (0..m)
            .flat_map(|r| (piv[r] + 1..k).filter(|c| !piv.contains(c)).map(move |c| (r, c)))
            .collect();
        let total = (size as u64).pow(free.len() as u32);
        for mut idx in 0..total {
            let mut rows = vec![vec![Gf::ZERO; k]; m];
            for (r, &p) in piv.iter().enumerate() {
                rows[r][p] = Gf::ONE;
            }
            for &(r, c) in &free {
                rows[r][c] = ctx.from_int((idx % size as u64) as u32);
                idx /= size as u64;
            }
            out.push(rows);
        }
    }
    out
}

/// Largest `m` such that some `m`-dimensional `F_{q^n}`-subcode is
/// Gabidulin-like: an invertible generator for `m = 1`, otherwise
/// exhaustively MRD with `dim(D ∩ D^{[s]}) = m − 1` for an admissible `s`.
fn brute_force_index(code: &RdCode) -> usize {
    let ctx = code.ctx();
    let basis = code.basis();
    let n = code.n();
    for m in (1..=code.dim().min(n - 1)).rev() {
        for rows in subspaces(ctx, basis.len(), m) {
            let gens: Vec<LinearizedPoly> = rows
                .iter()
                .map(|r| {
                    r.iter().zip(&basis).fold(LinearizedPoly::zero(ctx), |acc, (&c, f)| {
                        acc.add(&f.scale(c)).unwrap()
                    })
                })
                .collect();
            let d = RdCode::from_span_fqn(ctx, &gens).unwrap();
            let found = if m == 1 {
                gens[0].is_invertible()
            } else {
                d.is_mrd(u64::MAX).is_verified_true()
                    && (1..n as i64).any(|s| {
                        gcd(s as u64, n as u64) == 1
                            && d.intersect(&d.shift_code(s)).unwrap().dim() == m - 1
                    })
            };
            if found {
                return m;
            }
        }
    }
    0
}

#[test]
fn index_matches_subspace_enumeration() {
    let search = Search::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases: Vec<RdCode> = Vec::new();
    let c24 = ctx(2, 1, 4);
    let c34 = ctx(3, 1, 4);
    let c25 = ctx(2, 1, 5);
    cases.push(gabidulin(&c24, 3, 1).unwrap());
    cases.push(gabidulin(&c25, 2, 2).unwrap());
    cases.push(twisted(&c34, 2, 1, c34.gen_pow(1), 0).unwrap());
    cases.push(twisted_unchecked(&c25, 3, 1, c25.gen_pow(3), 0).unwrap());
    for _ in 0..6 {
        let k = rng.gen_range(1..=3);
        cases.push(RdCode::random_code(&c24, k, Scalars::Fqn, rng.gen()).unwrap());
    }
    for _ in 0..3 {
        cases.push(RdCode::random_code(&c34, 2, Scalars::Fqn, rng.gen()).unwrap());
    }
    for code in &cases {
        let r = gabidulin_index(code, &search).unwrap();
        assert_eq!(r.status, IndexStatus::Certified, "{code:?}");
        assert_eq!(r.lower, brute_force_index(code), "{code:?}");
        if let Some(w) = &r.witness {
            assert!(verify_index_witness(code, w, &search).unwrap());
        }
    }
}

#[test]
fn twisted_index_is_k_minus_one() {
    let search = Search::default();
    let c = ctx(3, 1, 5);
    for k in 2..=3 {
        for s in [1, 2] {
            let code = twisted(&c, k, s, c.gen_pow(1 + k as u64 % 2), 0).unwrap();
            let r = gabidulin_index(&code, &search).unwrap();
            assert_eq!((r.lower, r.upper), (k - 1, k - 1), "k={k} s={s}");
        }
    }
}

#[test]
fn gabidulin_recognition_agrees_with_h() {
    let search = Search::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, n) in [(2, 4), (2, 5), (3, 4)] {
        let c = ctx(p, 1, n);
        for _ in 0..25 {
            let k = rng.gen_range(2..n as usize);
            let code = if rng.gen_bool(0.5) {
                Transform::semilinear(&c, &mut rng).apply(&gabidulin(&c, k, 1).unwrap())
            } else {
                RdCode::random_code(&c, k, Scalars::Fqn, rng.gen()).unwrap()
            };
            let mrd = code.is_mrd_in(&search);
            if !mrd.is_verified_true() {
                continue;
            }
            let gab = is_equiv_gabidulin(&code, &search).unwrap().s.is_some();
            assert_eq!(gab, h_invariant(&code).value == k - 1);
        }
    }
}

#[test]
fn twisted_witness_survives_equivalence() {
    let search = Search::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, n, k) in [(3u64, 5u32, 3usize), (3, 6, 3), (3, 6, 4)] {
        let c = ctx(p, 1, n);
        let bad = c.minus_one_pow(n as u64 * k as u64);
        for _ in 0..4 {
            let eta = loop {
                let e = nonzero(&c, &mut rng);
                if c.rel_norm(e) != bad {
                    break e;
                }
            };
            let code = twisted(&c, k, 1, eta, 0).unwrap();
            let image = Transform::semilinear(&c, &mut rng).apply(&code);
            let res = is_equiv_twisted_with(&image, image.is_mrd_in(&search)).unwrap();
            let w = res.witness.expect("witness");
            let sum = w.p.add(&w.p.frobenius_shift(w.s * k as i64).scale(w.eta)).unwrap();
            assert!(image.contains(&sum).unwrap());
            assert!(!image.contains(&w.p).unwrap() || k == 1);
            assert!(image.contains(&w.q_complement).unwrap());
            assert_ne!(c.rel_norm(w.eta), bad);
        }
    }
}

#[test]
fn twisted_norm_is_independent_of_scaling() {
    // replacing p by λp turns η into η·λ^{1 - q^{sk}}, which has the same norm
    let c = ctx(3, 1, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let code = twisted(&c, 3, 1, c.gen_pow(2), 0).unwrap();
    let w = is_equiv_twisted_with(&code, MrdStatus::VerifiedTrue).unwrap().witness.unwrap();
    let shift = w.s * 3;
    for _ in 0..50 {
        let lambda = nonzero(&c, &mut rng);
        let p = w.p.scale(lambda);
        let lifted = c.frobenius(lambda, shift);
        let eta = c.mul(w.eta, c.div(lambda, lifted).unwrap());
        let sum = p.add(&p.frobenius_shift(shift).scale(eta)).unwrap();
        assert!(code.contains(&sum).unwrap());
        assert_eq!(c.rel_norm(eta), c.rel_norm(w.eta));
    }
}

#[test]
fn sporadic_codes_fail_twisted_recognition() {
    let c3c = ctx(3, 1, 7);
    let code = c3(&c3c, 1).unwrap();
    let res = is_equiv_twisted_with(&code, MrdStatus::VerifiedTrue).unwrap();
    assert!(res.witness.is_none());
    assert_eq!(res.rejected.len(), 6);
    let c4c = ctx(2, 2, 8);
    let code = c4(&c4c, 1).unwrap();
    let res = is_equiv_twisted_with(&code, MrdStatus::SampledConsistent { samples: 0 }).unwrap();
    assert!(res.witness.is_none());
    // the failing steps are data; at least one s gets past the first intersection
    let deep = res.rejected.iter().filter(|(_, st)| *st != TwistedStep::Intersection).count();
    assert!(deep > 0, "{:?}", res.rejected);
}

#[test]
fn idealisers_are_equivalence_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let c = ctx(3, 1, 7);
    let code = d3(&c, 1).unwrap();
    let (l, r) = (left_idealiser(&code), right_idealiser(&code));
    for _ in 0..3 {
        let image = Transform::general(&c, &mut rng).apply(&code);
        assert_eq!(left_idealiser(&image).order_exponent, l.order_exponent);
        assert_eq!(right_idealiser(&image).order_exponent, r.order_exponent);
    }
}

#[test]
fn h_counts_fq_dimensions_for_fq_codes() {
    let c = ctx(2, 1, 5);
    let g = gabidulin(&c, 2, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    // a general equivalence usually destroys left F_{q^n}-linearity
    let image = loop {
        let im = Transform::general(&c, &mut rng).apply(&g);
        if im.k_fqn().is_none() {
            break im;
        }
    };
    let h = h_invariant(&image);
    assert!(!h.over_fqn);
    assert!(h.value <= image.dim_fq());
    assert!(is_equiv_gabidulin_with(&image, MrdStatus::VerifiedTrue).is_err());
}

#[test]
fn index_requires_fqn_linearity() {
    let c: Arc<FieldContext> = ctx(2, 1, 4);
    let code = gabidulin(&c, 2, 1).unwrap().to_fq();
    assert!(gabidulin_index(&code, &Search::default()).is_err());
}
