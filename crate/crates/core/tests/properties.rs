use frs_listrec::frs::tau_frs;
use frs_listrec::prune::{fprune, trace_length_bound, PruneParams};
use frs_listrec::stream_rng;
use frs_listrec::verify::{planted_lists_in, random_subspace};
use frs_listrec::{reduce, AffineSpace, FrsCode, Rational};
use proptest::prelude::*;

fn small_code() -> FrsCode {
    FrsCode::new(13, 6, 5, 2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn encoding_is_linear(a in prop::collection::vec(0u32..13, 5), b in prop::collection::vec(0u32..13, 5), c in 0u32..13) {
        let code = small_code();
        let mix: Vec<u32> = a.iter().zip(&b).map(|(x, y)| (c * x + y) % 13).collect();
        let lhs = code.encode_flat(&mix).unwrap();
        let ea = code.encode_flat(&a).unwrap();
        let eb = code.encode_flat(&b).unwrap();
        let rhs: Vec<u32> = ea.iter().zip(&eb).map(|(x, y)| (c * x + y) % 13).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn nonzero_codewords_vanish_on_fewer_than_k_over_s_symbols(msg in prop::collection::vec(0u32..13, 5)) {
        prop_assume!(msg.iter().any(|&x| x != 0));
        let word = small_code().encode(&msg).unwrap();
        let zeros = word.symbols.iter().filter(|sym| sym.iter().all(|&x| x == 0)).count();
        prop_assert!(zeros * 2 < 5);
    }

    #[test]
    fn tau_is_non_decreasing(s in 1usize..12, k in 1usize..40, n in 1usize..12) {
        prop_assume!(k <= s * n);
        let rate = Rational::new(k as i64, (s * n) as i64).unwrap();
        for r in 1..s + 2 {
            prop_assert!(tau_frs(s, &rate, r) <= tau_frs(s, &rate, r + 1));
            prop_assert!(tau_frs(s, &rate, r) <= Rational::one());
        }
    }

    #[test]
    fn fprune_traces_respect_the_length_bound(seed in any::<u64>(), dim in 1usize..=4, ep in 1i64..4) {
        let code = small_code();
        let mut rng = stream_rng(seed, 0);
        let h = random_subspace(&code, dim, &mut rng).unwrap();
        let params = PruneParams::new(Rational::new(1, 4).unwrap(), Rational::new(ep, 8).unwrap()).unwrap();
        let trace = fprune(&h, &params, &mut rng);
        if !trace.failed {
            prop_assert!(trace.pinned.len() <= trace_length_bound(dim, params.eta_prime()));
            prop_assert!(h.zero_on(&trace.pinned).is_zero());
        }
    }

    #[test]
    fn reduce_contains_every_agreeing_element(seed in any::<u64>(), dim in 1usize..=3, ell in 1usize..=3) {
        let code = small_code();
        let shape = code.shape();
        let mut rng = stream_rng(seed, 1);
        let h = random_subspace(&code, dim, &mut rng).unwrap();
        let lists = planted_lists_in(&code, &h, ell, 2, &mut rng).unwrap();
        let pinned: Vec<usize> = (0..shape.n).collect();
        let (p, _) = reduce(&h, &pinned, &lists).unwrap();
        prop_assert!(p.summands().iter().all(|a| a.len() <= ell));
        let members = p.enumerate(1_000_000).unwrap();
        for c in AffineSpace::linear(h.clone()).elements(1_000_000).unwrap() {
            if (0..shape.n).all(|t| lists.contains(t, shape.symbol(&c, t))) {
                prop_assert!(members.binary_search(&c).is_ok());
            }
        }
    }

    #[test]
    fn distance_counts_list_misses(msg in prop::collection::vec(0u32..13, 5), miss in prop::collection::btree_set(0usize..6, 0..6)) {
        let code = small_code();
        let word = code.encode_flat(&msg).unwrap();
        let mut other = word.clone();
        for &i in &miss {
            other[2 * i] = (other[2 * i] + 1) % 13;
        }
        let inst = frs_listrec::ListRecoveryInstance::from_word(2, &other, Rational::zero()).unwrap();
        let d = inst.distance(&word);
        prop_assert_eq!(d, Rational::new(miss.len() as i64, 6).unwrap());
    }
}
