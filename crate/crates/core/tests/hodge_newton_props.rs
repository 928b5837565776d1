mod common;

use common::{invertible, matrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rootval::base_field::{ExtRat, RatFunc};
use rootval::hodge_newton::{
    hodge_point, hodge_point_minors, hodge_point_snf, mazur_check, newton_point, MatrixLattice,
};

fn total(v: &[ExtRat]) -> ExtRat {
    v.iter().fold(ExtRat::zero(), |a, b| &a + b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn newton_point_is_conjugation_invariant(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = matrix(&mut rng, n, 2, 4);
        let g = invertible(&mut rng, n, -2, 2);
        let c = g.mul(&t).mul(&g.inverse().unwrap());
        prop_assert_eq!(newton_point(&c), newton_point(&t));
    }

    #[test]
    fn hodge_point_transport(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = matrix(&mut rng, n, 2, 4);
        let l = MatrixLattice::new(invertible(&mut rng, n, -1, 1)).unwrap();
        let g = invertible(&mut rng, n, -2, 2);
        let moved = hodge_point(&t, &l.transform(&g)).unwrap();
        let pulled = g.inverse().unwrap().mul(&t).mul(&g);
        prop_assert_eq!(moved, hodge_point(&pulled, &l).unwrap());
    }

    #[test]
    fn minors_and_smith_agree(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = matrix(&mut rng, n, 2, 3);
        if n > 1 && rng.gen_bool(0.2) {
            for j in 0..n {
                t[(n - 1, j)] = t[(0, j)].clone();
            }
        }
        let l = MatrixLattice::new(invertible(&mut rng, n, -2, 2)).unwrap();
        prop_assert_eq!(hodge_point_minors(&t, &l).unwrap(), hodge_point_snf(&t, &l).unwrap());
    }

    #[test]
    fn determinant_paths_agree(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = matrix(&mut rng, n, 2, 3);
        let g = invertible(&mut rng, n, -1, 1);
        let c = g.mul(&t).mul(&g.inverse().unwrap());
        prop_assert_eq!(c.det(), c.det_elimination());
        prop_assert_eq!(t.det(), t.det_elimination());
    }

    #[test]
    fn totals_match_determinant(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = matrix(&mut rng, n, 2, 3);
        let l = MatrixLattice::new(invertible(&mut rng, n, -2, 2)).unwrap();
        let mu = hodge_point(&t, &l).unwrap();
        let nu = newton_point(&t);
        let det = l.matrix_of(&t).unwrap().det().val();
        prop_assert_eq!(total(mu.entries()), det.clone());
        prop_assert_eq!(total(nu.entries()), det);
        prop_assert!(mazur_check(&t, &l).unwrap());
    }
}

#[test]
fn singular_totals_are_infinite() {
    let t = rootval::linalg::LaurentMatrix::from_rows(vec![
        vec![RatFunc::eps_pow(1), RatFunc::one()],
        vec![RatFunc::eps_pow(2), RatFunc::eps_pow(1)],
    ])
    .unwrap();
    let l = MatrixLattice::standard(2);
    assert_eq!(total(hodge_point(&t, &l).unwrap().entries()), ExtRat::Inf);
    assert_eq!(total(newton_point(&t).entries()), ExtRat::Inf);
    assert!(mazur_check(&t, &l).unwrap());
}
