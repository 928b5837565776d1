use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rootval::gmo_sets::{
    associated_gm_set, comes_from_m, is_positive_gm_orthogonal, is_positive_orthogonal,
    random_induced, random_positive, Chambers, GAOrthSet,
};
use rootval::root_system::{CartanType, RootSystem};

fn system(k: usize) -> RootSystem {
    use CartanType::*;
    let (t, n) = [(A, 2), (B, 2), (A, 3), (G, 2)][k];
    RootSystem::build(t, n).unwrap()
}

fn sample<R: Rng>(ch: &Chambers, rng: &mut R) -> GAOrthSet {
    if rng.gen_bool(0.5) {
        random_positive(ch, rng.gen_range(0..=2), rng)
    } else {
        random_induced(ch, &ch.rs.levi_subsets(), rng)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn negation_preserves_verdicts(k in 0usize..4, seed in any::<u64>()) {
        let rs = system(k);
        let ch = Chambers::new(&rs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample(&ch, &mut rng);
        for m in rs.levi_subsets() {
            let a = comes_from_m(&ch, &x, m).unwrap();
            let b = comes_from_m(&ch, &x.neg(), m).unwrap();
            prop_assert!(b.consistent());
            prop_assert_eq!(a.conditions, b.conditions);
        }
    }

    #[test]
    fn sums_of_positive_sets(k in 0usize..4, seed in any::<u64>()) {
        let rs = system(k);
        let ch = Chambers::new(&rs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (sample(&ch, &mut rng), sample(&ch, &mut rng));
        let s = x.add(&y);
        prop_assert!(is_positive_orthogonal(&ch, &s));
        for m in rs.levi_subsets() {
            let both = comes_from_m(&ch, &x, m).unwrap().conditions[0]
                && comes_from_m(&ch, &y, m).unwrap().conditions[0];
            let v = comes_from_m(&ch, &s, m).unwrap();
            prop_assert!(v.consistent());
            if both {
                prop_assert!(v.conditions[0]);
            }
        }
    }

    #[test]
    fn associated_families_are_positive(k in 0usize..4, seed in any::<u64>()) {
        let rs = system(k);
        let ch = Chambers::new(&rs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample(&ch, &mut rng);
        for m in rs.levi_subsets() {
            let y = associated_gm_set(&ch, &x, m).unwrap();
            prop_assert!(is_positive_gm_orthogonal(&ch, &y, m));
        }
    }
}
