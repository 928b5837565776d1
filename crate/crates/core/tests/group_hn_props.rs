mod common;

use std::collections::HashSet;

use common::invertible;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rootval::base_field::RatFunc;
use rootval::group_hn::{
    cartan, enumerate_lattices, fiber_x_mu, iwasawa, leq_p, mazur_group_check, retraction_rb,
    BorelChoice, Orientation,
};
use rootval::hodge_newton::{hodge_point, MatrixLattice};
use rootval::linalg::LaurentMatrix;

/// Number of `F_2[t]`-submodules of `(F_2[t]/t^k)^n`, by closing subsets.
/// Elements are bit vectors, `k` bits per coordinate.
fn submodule_count(n: usize, k: usize) -> usize {
    let mask = (1u32 << k) - 1;
    let times_t = |x: u32| -> u32 {
        (0..n).fold(0, |acc, i| acc | ((((x >> (i * k)) & mask) << 1) & mask) << (i * k))
    };
    let add_cyclic = |s: &Vec<u32>, g: u32| -> Vec<u32> {
        let mut out = s.clone();
        let mut h = g;
        while h != 0 {
            if !out.contains(&h) {
                let shifted: Vec<u32> = out.iter().map(|x| x ^ h).collect();
                out.extend(shifted);
            }
            h = times_t(h);
        }
        out.sort();
        out.dedup();
        out
    };
    let size = 1u32 << (n * k);
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue = vec![vec![0u32]];
    seen.insert(vec![0]);
    while let Some(s) = queue.pop() {
        for g in 0..size {
            if s.binary_search(&g).is_err() {
                let t = add_cyclic(&s, g);
                if seen.insert(t.clone()) {
                    queue.push(t);
                }
            }
        }
    }
    seen.len()
}

/// `b - a` in the monoid generated by `e_i - e_j`, `i > j` (or `i < j` for
/// the opposite radical), searched inside a box.
fn cone_contains(a: &[i64], b: &[i64], opposite: bool) -> bool {
    let n = a.len();
    let target: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let gens: Vec<Vec<i64>> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| if opposite { i < j } else { i > j })
        .map(|(i, j)| {
            let mut v = vec![0; n];
            v[i] += 1;
            v[j] -= 1;
            v
        })
        .collect();
    let mut seen = HashSet::new();
    let mut stack = vec![vec![0i64; n]];
    seen.insert(stack[0].clone());
    while let Some(v) = stack.pop() {
        if v == target {
            return true;
        }
        for g in &gens {
            let w: Vec<i64> = v.iter().zip(g).map(|(x, y)| x + y).collect();
            if w.iter().all(|x| x.abs() <= 8) && seen.insert(w.clone()) {
                stack.push(w);
            }
        }
    }
    false
}

#[test]
fn enumeration_matches_submodule_count() {
    for (n, window) in [(1, 1), (1, 3), (2, 1), (2, 2), (3, 1)] {
        let lattices = enumerate_lattices(n, window).unwrap();
        assert_eq!(lattices.len(), submodule_count(n, 2 * window as usize), "n = {}, window = {}", n, window);
    }
}

#[test]
fn enumerated_lattices_are_distinct() {
    let l = enumerate_lattices(2, 1).unwrap();
    for i in 0..l.len() {
        for j in 0..i {
            assert!(!l[i].same_as(&l[j]));
        }
    }
}

#[test]
fn nonempty_fibers_satisfy_mazur() {
    let e = RatFunc::eps_pow;
    let rot = LaurentMatrix::from_rows(vec![vec![RatFunc::zero(), e(1)], vec![RatFunc::one(), RatFunc::zero()]]).unwrap();
    let mut gammas: Vec<(LaurentMatrix, i64)> = vec![(rot, 2)];
    for a in [[0, 0], [0, 1], [0, 2], [1, 1], [-1, 1], [2, 0]] {
        gammas.push((LaurentMatrix::eps_diag(&a), 2));
    }
    for a in [[0, 0, 1], [0, 1, 2], [1, 1, 0], [-1, 0, 1]] {
        gammas.push((LaurentMatrix::eps_diag(&a), 1));
    }
    let mut nonempty = 0;
    for (g, window) in gammas {
        let n = g.rows();
        let total = g.det().val_i64().unwrap();
        let mut mus = vec![vec![]];
        for _ in 0..n {
            mus = mus
                .into_iter()
                .flat_map(|m: Vec<i64>| {
                    let lo = m.last().copied().unwrap_or(-3);
                    (lo..=3).map(move |x| [m.clone(), vec![x]].concat())
                })
                .collect();
        }
        for mu in mus.into_iter().filter(|m| m.iter().sum::<i64>() == total) {
            if !fiber_x_mu(&g, &mu, window).unwrap().is_empty() {
                nonempty += 1;
                assert!(mazur_group_check(&g, &mu).unwrap(), "{:?} {:?}", g, mu);
            }
        }
    }
    assert!(nonempty > 10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cartan_is_hodge_point_of_standard_lattice(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = invertible(&mut rng, n, -3, 3);
        let c = cartan(&g).unwrap();
        let h = hodge_point(&g, &MatrixLattice::standard(n)).unwrap();
        prop_assert_eq!(h.entries().iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>(), c.clone());
        prop_assert_eq!(c.iter().sum::<i64>(), g.det().val_i64().unwrap());
    }

    #[test]
    fn iwasawa_factorizations_verify(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = invertible(&mut rng, n, -3, 3);
        for o in [Orientation::Upper, Orientation::Lower] {
            let f = iwasawa(&g, o).unwrap();
            prop_assert!(f.verify(&g, o));
            prop_assert_eq!(f.mu.iter().sum::<i64>(), g.det().val_i64().unwrap());
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let mu = retraction_rb(&g, &BorelChoice { orientation: o, perm }).unwrap();
            prop_assert_eq!(mu.iter().sum::<i64>(), g.det().val_i64().unwrap());
        }
    }

    #[test]
    fn leq_p_matches_cone_search(a in prop::collection::vec(-2i64..=2, 3), moves in prop::collection::vec((0usize..3, 0usize..3), 0..4), opposite in any::<bool>()) {
        let mut b = a.clone();
        for (i, j) in moves {
            b[i] += 1;
            b[j] -= 1;
        }
        prop_assert_eq!(leq_p(&a, &b, opposite), cone_contains(&a, &b, opposite));
    }
}
