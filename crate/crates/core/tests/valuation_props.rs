use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rootval::root_system::{CartanType, RootFunction, RootSystem};
use rootval::valuation_functions::{
    check_k0prep, check_rprime, is_non_archimedean, is_root_valuation_function, r_m, sample_rvf,
    summing_pairs,
};
use rootval::valuation_lattices::{
    big_lattice, check_rvl_conditions, check_rvl_conditions_half, condition_two,
    condition_two_asymmetric, is_rvl_via_normalizer, two_k0, RvlSpec,
};

fn systems() -> Vec<RootSystem> {
    use CartanType::*;
    [(A, 1), (A, 2), (A, 3), (B, 2), (B, 3), (C, 3), (D, 4), (G, 2)]
        .iter()
        .map(|&(t, n)| RootSystem::build(t, n).unwrap())
        .collect()
}

fn for_all_symmetric(rs: &RootSystem, hi: i64, mut f: impl FnMut(RootFunction)) {
    let reps: Vec<usize> = (0..rs.num_roots()).filter(|&a| a < rs.neg(a)).collect();
    let base = (hi + 1) as u64;
    for mut code in 0..base.pow(reps.len() as u32) {
        let mut v = vec![0; rs.num_roots()];
        for &a in &reps {
            v[a] = (code % base) as i64;
            v[rs.neg(a)] = v[a];
            code /= base;
        }
        f(RootFunction::new(v));
    }
}

#[test]
fn strict_inequality_forces_minimum() {
    for (t, n) in [(CartanType::A, 2), (CartanType::B, 2), (CartanType::G, 2)] {
        let rs = RootSystem::build(t, n).unwrap();
        let hi = if t == CartanType::G { 2 } else { 3 };
        for_all_symmetric(&rs, hi, |r| {
            if !is_non_archimedean(&rs, &r) {
                return;
            }
            for (a, b, c) in summing_pairs(&rs) {
                if r[a] != r[b] {
                    assert_eq!(r[c], r[a].min(r[b]), "{} {:?}", rs.name(), r.values());
                }
            }
        });
    }
}

#[test]
fn root_valuation_functions_are_non_archimedean_exhaustive() {
    for (t, n) in [(CartanType::A, 2), (CartanType::B, 2)] {
        let rs = RootSystem::build(t, n).unwrap();
        for_all_symmetric(&rs, 3, |r| {
            if is_root_valuation_function(&rs, &r) {
                assert!(is_non_archimedean(&rs, &r));
                assert!(check_rprime(&rs, &r).unwrap().passed());
            }
        });
    }
}

#[test]
fn k0_is_half_integral_solution() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for rs in systems() {
        for _ in 0..50 {
            let r = sample_rvf(&rs, &mut rng, 4);
            assert!(check_rvl_conditions_half(&rs, &r, &two_k0(&rs, &r)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sampled_functions_satisfy_lemmas(sys in 0usize..8, seed in any::<u64>()) {
        let rs = &systems()[sys];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = sample_rvf(rs, &mut rng, 4);
        prop_assert!(is_root_valuation_function(rs, &r));
        prop_assert!(is_non_archimedean(rs, &r));
        prop_assert!(check_rprime(rs, &r).unwrap().passed());
        for (a, b, c) in summing_pairs(rs) {
            prop_assert!(check_k0prep(rs, &r, a, b, c).unwrap().iter().all(|&x| x));
        }
    }

    #[test]
    fn r_m_is_weyl_equivariant(sys in 0usize..8, seed in any::<u64>(), pick in any::<usize>()) {
        let rs = &systems()[sys];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = sample_rvf(rs, &mut rng, 4);
        let ws = rs.weyl_elements(500).unwrap();
        let w = &ws[pick % ws.len()];
        prop_assert_eq!(r_m(rs, &rs.act_function(w, &r)), rs.act_function(w, &r_m(rs, &r)));
    }

    #[test]
    fn verdicts_are_shift_invariant(sys in 0usize..8, seed in any::<u64>(), bump in prop::collection::vec(-1i64..=2, 24), n in -3i64..=3) {
        let rs = &systems()[sys];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = sample_rvf(rs, &mut rng, 4);
        let big = big_lattice(rs, &r);
        let k = RootFunction::from_fn(rs, |a| (big.k[a] + bump[a % bump.len()]).max(0));
        let spec = RvlSpec::new(r.clone(), r.add(&k));
        let c = check_rvl_conditions(rs, &spec);
        prop_assert_eq!(c, check_rvl_conditions(rs, &spec.shift(n)));
        prop_assert_eq!(is_rvl_via_normalizer(rs, &spec), is_rvl_via_normalizer(rs, &spec.shift(n)));
        prop_assert_eq!(c, is_rvl_via_normalizer(rs, &spec));
        prop_assert_eq!(condition_two(rs, &spec), condition_two_asymmetric(rs, &spec));
    }

    #[test]
    fn big_lattice_within_one_of_bound(sys in 0usize..8, seed in any::<u64>()) {
        let rs = &systems()[sys];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = sample_rvf(rs, &mut rng, 4);
        let spec = big_lattice(rs, &r);
        prop_assert!(check_rvl_conditions(rs, &spec));
        let m = r_m(rs, &r);
        for a in 0..rs.num_roots() {
            let excess = spec.k[a] + spec.k[rs.neg(a)] - (m[a] - r[a]);
            prop_assert!((0..=1).contains(&excess));
        }
    }
}
