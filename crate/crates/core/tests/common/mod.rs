#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rootval::base_field::RatFunc;
use rootval::linalg::LaurentMatrix;

pub fn poly<R: Rng>(rng: &mut R, deg: i64, c: i64) -> RatFunc {
    let terms: Vec<(i64, BigRational)> = (0..=deg)
        .map(|i| (i, BigRational::from_integer(BigInt::from(rng.gen_range(-c..=c)))))
        .collect();
    RatFunc::laurent(&terms)
}

pub fn matrix<R: Rng>(rng: &mut R, n: usize, deg: i64, c: i64) -> LaurentMatrix {
    LaurentMatrix::from_rows((0..n).map(|_| (0..n).map(|_| poly(rng, deg, c)).collect()).collect()).unwrap()
}

/// Random element of `GL_n(O)`: elementary operations over `Z[ε]`, a row
/// swap now and then, and a unit `1 + ε` on the diagonal.
pub fn unimodular<R: Rng>(rng: &mut R, n: usize) -> LaurentMatrix {
    let mut m = LaurentMatrix::identity(n);
    if n > 1 {
        for _ in 0..n + 1 {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            m.add_row_multiple(i, j, &poly(rng, 1, 2));
            if rng.gen_bool(0.3) {
                m.swap_rows(i, j);
            }
        }
    }
    if rng.gen_bool(0.3) {
        let i = rng.gen_range(0..n);
        m.scale_row(i, &(&RatFunc::one() + &RatFunc::eps_pow(1)));
    }
    m
}

pub fn invertible<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> LaurentMatrix {
    let e: Vec<i64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    unimodular(rng, n).mul(&LaurentMatrix::eps_diag(&e)).mul(&unimodular(rng, n))
}
