use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rootval::base_field::{dominance_geq, parse_ratfunc, ExtRat, QTuple, RatFunc};

fn laurent() -> impl Strategy<Value = RatFunc> {
    (-3i64..3, prop::collection::vec(-4i64..=4, 1..4)).prop_map(|(lo, cs)| {
        let terms: Vec<(i64, BigRational)> = cs
            .iter()
            .enumerate()
            .map(|(i, &c)| (lo + i as i64, BigRational::from_integer(BigInt::from(c))))
            .collect();
        RatFunc::laurent(&terms)
    })
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (laurent(), laurent()).prop_map(|(a, b)| if b.is_zero() { a } else { &a / &b })
}

fn tuple(n: usize) -> impl Strategy<Value = QTuple> {
    prop::collection::vec(-3i64..=3, n).prop_map(|v| QTuple::from_ints(&v))
}

/// Triples with a common total, so that comparisons are not vacuous.
fn same_total(n: usize) -> impl Strategy<Value = (QTuple, QTuple, QTuple)> {
    (prop::collection::vec(-3i64..=3, n), prop::collection::vec(0..n, 0..4), prop::collection::vec(0..n, 0..4))
        .prop_map(move |(base, moves_b, moves_c)| {
            let shift = |moves: &[usize]| {
                let mut v = base.clone();
                for (k, &i) in moves.iter().enumerate() {
                    v[i] += 1;
                    v[(i + 1 + k) % n] -= 1;
                }
                QTuple::from_ints(&v)
            };
            (QTuple::from_ints(&base), shift(&moves_b), shift(&moves_c))
        })
}

proptest! {
    #[test]
    fn val_is_multiplicative(f in ratfunc(), g in ratfunc()) {
        prop_assert_eq!((&f * &g).val(), &f.val() + &g.val());
    }

    #[test]
    fn val_ultrametric(f in ratfunc(), g in ratfunc()) {
        let s = (&f + &g).val();
        let m = f.val().min(g.val());
        prop_assert!(s >= m);
        if f.val() != g.val() {
            prop_assert_eq!(s, m);
        }
    }

    #[test]
    fn canonical_form_is_path_independent(f in ratfunc(), g in ratfunc(), h in ratfunc()) {
        prop_assert_eq!(&(&f + &g) - &g, f.clone());
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        if !g.is_zero() {
            prop_assert_eq!(&(&f * &g) / &g, f.clone());
        }
    }

    #[test]
    fn display_parses_back(f in ratfunc()) {
        prop_assert_eq!(parse_ratfunc(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn dominance_reflexive(a in tuple(4)) {
        prop_assert!(dominance_geq(&a, &a).unwrap());
    }

    #[test]
    fn dominance_antisymmetric_and_transitive((a, b, c) in same_total(4)) {
        let ab = dominance_geq(&a, &b).unwrap();
        let ba = dominance_geq(&b, &a).unwrap();
        let bc = dominance_geq(&b, &c).unwrap();
        let ac = dominance_geq(&a, &c).unwrap();
        if ab && ba {
            prop_assert_eq!(&a, &b);
        }
        if ab && bc {
            prop_assert!(ac);
        }
    }
}

#[test]
fn infinite_tail_totals() {
    let a = QTuple::sorted(vec![ExtRat::from_int(0), ExtRat::Inf]);
    let b = QTuple::sorted(vec![ExtRat::from_int(1), ExtRat::Inf]);
    assert!(dominance_geq(&a, &b).unwrap());
    assert!(!dominance_geq(&b, &a).unwrap());
}
