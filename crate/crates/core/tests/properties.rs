use std::sync::Arc;

use num_bigint::BigUint;
use parallel_mrd::bounds::{johnson_upper, lifted_mrd_size, parallel_bound, two_block_bound};
use parallel_mrd::cdc::{assemble_parallel_with_budget, canonicalize, lift, ParallelParams, Side, SubspaceCode};
use parallel_mrd::combinatorics::{delsarte_rank_distribution, truncated_rank_sum};
use parallel_mrd::finite_field::{linearized_eval, Elem, Extension, Field, Matrix};
use parallel_mrd::mrd::{
    empirical_rank_distribution, gabidulin_enumerate, sq_filter, GabidulinEncoder, RankCodeSpec,
};
use parallel_mrd::verify::{min_distance_exhaustive, subspace_distance};
use proptest::prelude::*;

const ALPHABETS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

fn field(q: u32) -> Arc<Field> {
    Field::with_order(q).unwrap()
}

fn matrix(q: u32, rows: usize, cols: usize, seed: &[u32]) -> Matrix {
    let raw: Vec<Vec<u32>> = (0..rows)
        .map(|r| (0..cols).map(|c| seed[(r * cols + c) % seed.len()] % q).collect())
        .collect();
    Matrix::from_rows(field(q), &raw).unwrap()
}

fn entries() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(any::<u32>(), 64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent(qi in 0..7usize, rows in 1..5usize, cols in 1..7usize, seed in entries()) {
        let m = matrix(ALPHABETS[qi], rows, cols, &seed);
        let r = m.rref();
        prop_assert!(r.is_rref());
        prop_assert_eq!(r.rref(), r.clone());
        prop_assert_eq!(r.rows(), m.rank());
    }

    #[test]
    fn rank_is_transpose_invariant(qi in 0..7usize, rows in 1..6usize, cols in 1..6usize, seed in entries()) {
        let m = matrix(ALPHABETS[qi], rows, cols, &seed);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert!(m.rank() <= rows.min(cols));
    }

    #[test]
    fn canonical_form_ignores_change_of_generator(
        qi in 0..7usize, k in 1..4usize, extra in 0..4usize, seed in entries(), pseed in entries()
    ) {
        let q = ALPHABETS[qi];
        let g = matrix(q, k, k + extra, &seed);
        let p = matrix(q, k, k, &pseed);
        prop_assume!(g.rank() == k && p.rank() == k);
        let a = canonicalize(&g).unwrap();
        let b = canonicalize(&p.mul(&g).unwrap()).unwrap();
        prop_assert_eq!(subspace_distance(&a, &b).unwrap(), 0);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn linearized_polynomials_are_additive(
        qi in 0..4usize, m in 1..4u32, coeffs in prop::collection::vec(any::<u32>(), 1..4),
        x in any::<u32>(), y in any::<u32>(), c in any::<u32>()
    ) {
        let q = [2u32, 3, 4, 5][qi];
        let ext = Extension::new(q, m).unwrap();
        let big = ext.big();
        let order = big.order();
        let el = |v: u32| big.elem(v % order).unwrap();
        let f: Vec<Elem> = coeffs.iter().map(|&v| el(v)).collect();
        let (x, y) = (el(x), el(y));
        let lam = ext.embed(ext.base().elem(c % q).unwrap());
        let eval = |z| linearized_eval(big, &f, z, q).unwrap();
        prop_assert_eq!(eval(big.add(x, y)), big.add(eval(x), eval(y)));
        prop_assert_eq!(eval(big.mul(lam, x)), big.mul(lam, eval(x)));
    }

    #[test]
    fn rank_survives_change_of_basis(
        qi in 0..3usize, n in 2..5usize, basis in prop::collection::vec(any::<u32>(), 4), msg in entries()
    ) {
        let q = [2u32, 3, 4][qi];
        let k = n;
        let std = GabidulinEncoder::new(q, n, k, 2).unwrap();
        let big = std.extension().big().clone();
        let basis: Vec<Elem> = basis[..n].iter().map(|&v| big.elem(v % big.order()).unwrap()).collect();
        let custom = Extension::with_custom_basis(q, n as u32, basis);
        prop_assume!(custom.is_ok());
        let alt = GabidulinEncoder::with_extension(RankCodeSpec::new(q, n, k, 2).unwrap(), custom.unwrap());
        let message: Vec<Elem> = (0..std.message_len())
            .map(|i| big.elem(msg[i] % big.order()).unwrap())
            .collect();
        let a = std.encode(&message);
        let b = alt.encode(&message);
        prop_assert_eq!(a.rank(), b.rank());
        prop_assert!(a.is_zero() || a.rank() >= 2);
    }
}

#[test]
fn parallel_bound_grows_with_s() {
    for q in [2, 3, 4] {
        for (n, k, d) in [(2, 2, 2), (4, 4, 4), (5, 5, 4), (6, 6, 6), (5, 4, 2)] {
            let mut prev = parallel_bound(q, n, k, d, 0).unwrap().value;
            for s in 1..=4 {
                let next = parallel_bound(q, n, k, d, s).unwrap().value;
                assert!(next > prev, "q={q} n={n} k={k} d={d} s={s}");
                prev = next;
            }
        }
    }
}

#[test]
fn bounds_on_the_grid() {
    for q in [2, 3] {
        for d in [2, 4] {
            for k in d..=6 {
                for n in k..=6 {
                    let t2 = two_block_bound(q, n, k, d).unwrap();
                    assert_eq!(parallel_bound(q, n, k, d, 0).unwrap().value, t2.value);
                    assert!(t2.value > lifted_mrd_size(q, n, k, d / 2).unwrap());
                    for s in 0..=2 {
                        let lower = parallel_bound(q, n, k, d, s).unwrap();
                        let upper = johnson_upper(q, lower.params.ambient, k, d / 2).unwrap();
                        assert!(lower.value <= upper.value, "q={q} n={n} k={k} d={d} s={s}");
                    }
                }
            }
        }
    }
}

#[test]
fn gabidulin_matches_delsarte_on_small_codes() {
    for (q, n, k, delta) in [(2, 2, 2, 1), (2, 3, 2, 2), (2, 3, 3, 2), (2, 4, 3, 2), (3, 2, 2, 2), (3, 3, 2, 1), (4, 2, 2, 1)] {
        let code = gabidulin_enumerate(q, n, k, delta).unwrap();
        let empirical = empirical_rank_distribution(&code);
        let formula = delsarte_rank_distribution(q as u64, n as u64, k as u64, delta as u64).unwrap();
        assert_eq!(empirical.values().sum::<u64>(), code.len() as u64);
        for r in 0..=k {
            let got = empirical.get(&r).copied().unwrap_or(0);
            assert_eq!(BigUint::from(got), formula.get(r as u64), "q={q} n={n} k={k} delta={delta} r={r}");
        }
        for max_rank in delta..=k {
            let sq = sq_filter(&code, max_rank, false);
            let expect = truncated_rank_sum(q as u64, n as u64, k as u64, delta as u64, delta as u64, max_rank as u64).unwrap();
            assert_eq!(BigUint::from(sq.len()), expect);
        }
    }
}

#[test]
fn lifted_codes_have_distance_twice_the_rank_distance() {
    for (q, n, k, delta) in [(2, 2, 2, 1), (2, 3, 2, 2), (2, 3, 3, 2), (3, 2, 2, 2), (2, 4, 4, 3)] {
        let code = gabidulin_enumerate(q, n, k, delta).unwrap();
        let members = code.codewords().iter().map(|a| lift(a, Side::Left)).collect();
        let cdc = parallel_mrd::cdc::Cdc::new(q, n + k, k, 2 * delta, members).unwrap();
        let out = min_distance_exhaustive(&cdc, 1 << 28).unwrap();
        assert_eq!(out.min_distance, Some(2 * delta), "q={q} n={n} k={k} delta={delta}");
    }
}

#[test]
fn two_block_cross_pairs_keep_the_distance() {
    let code = assemble_parallel_with_budget(2, 4, 4, 4, 0, 1 << 24).unwrap();
    let blocks = code.blocks();
    let (b0, b1) = (&blocks[0], &blocks[1]);
    for i in (b0.start..b0.end).step_by(97) {
        let u = code.member(i);
        for j in b1.clone() {
            let w = code.member(j);
            let stacked = Matrix::vstack(&[u.generator(), w.generator()]).unwrap();
            assert!(stacked.rank() >= 4 + 2);
        }
    }
}

#[test]
fn assembled_sizes_match_the_formula() {
    for (n, k, d) in [(2, 2, 2), (3, 2, 2), (3, 3, 2), (4, 4, 2), (4, 4, 4)] {
        for s in [0, 1] {
            let p = ParallelParams::new(2, n, k, d, s).unwrap();
            let code = assemble_parallel_with_budget(2, n, k, d, s, 1 << 24).unwrap();
            let predicted = parallel_bound(2, n as u64, k as u64, d as u64, s as u64).unwrap().value;
            assert_eq!(BigUint::from(code.size()), predicted, "{p:?}");
            assert_eq!(code.ambient(), p.ambient());
            let total: u64 = code.blocks().iter().map(|b| b.end - b.start).sum();
            assert_eq!(BigUint::from(total), predicted);
        }
    }
}
