//! Root valuation functions, non-archimedean functions and `r_m`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{qvec_from_ints, QSubspace, QVec};
use crate::root_system::{RootFunction, RootSet, RootSystem};

pub fn is_symmetric(rs: &RootSystem, r: &RootFunction) -> bool {
    (0..rs.num_roots()).all(|a| r[a] == r[rs.neg(a)])
}

/// `r(-α) = r(α)` and every super-level set `R_n` is Q-closed. `R_n` only
/// changes at attained values, so thresholds in `[min r, max r + 1]` suffice.
pub fn is_root_valuation_function(rs: &RootSystem, r: &RootFunction) -> bool {
    if r.len() != rs.num_roots() || !is_symmetric(rs, r) {
        return false;
    }
    (r.min()..=r.max() + 1).all(|n| rs.is_q_closed(r.level_set(n)))
}

pub fn is_non_archimedean(rs: &RootSystem, r: &RootFunction) -> bool {
    if r.len() != rs.num_roots() || !is_symmetric(rs, r) {
        return false;
    }
    summing_pairs(rs).all(|(a, b, c)| r[c] >= r[a].min(r[b]))
}

/// All `(α, β, α+β)` with `α + β` a root.
pub fn summing_pairs(rs: &RootSystem) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
    let n = rs.num_roots();
    (0..n).flat_map(move |a| (0..n).filter_map(move |b| rs.sum(a, b).map(|c| (a, b, c))))
}

pub fn r_m(rs: &RootSystem, r: &RootFunction) -> RootFunction {
    RootFunction::from_fn(rs, |a| {
        (0..rs.num_roots())
            .filter(|&b| !rs.strongly_orthogonal(a, b))
            .map(|b| r[b])
            .max()
            .expect("a root is not strongly orthogonal to itself")
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdCheck {
    pub n: i64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RPrimeReport {
    pub r_prime: Vec<i64>,
    pub thresholds: Vec<ThresholdCheck>,
    pub non_archimedean: bool,
}

impl RPrimeReport {
    pub fn passed(&self) -> bool {
        self.non_archimedean && self.thresholds.iter().all(|t| t.passed)
    }
}

/// Compares `R'_n` with `(R_{1-n})^⊥` for `r' = -r_m`, over every threshold
/// at which either side can change.
pub fn check_rprime(rs: &RootSystem, r: &RootFunction) -> Result<RPrimeReport> {
    if !is_non_archimedean(rs, r) {
        return Err(Error::Precondition("r is not non-archimedean".into()));
    }
    let rp = r_m(rs, r).neg();
    let thresholds = (rp.min() - 1..=rp.max() + 1)
        .map(|n| ThresholdCheck {
            n,
            passed: rp.level_set(n) == rs.perp(r.level_set(1 - n)),
        })
        .collect();
    Ok(RPrimeReport {
        non_archimedean: is_non_archimedean(rs, &rp),
        r_prime: rp.values().to_vec(),
        thresholds,
    })
}

/// The four conclusions for a triple in which one root is the sum of the
/// other two.
pub fn check_k0prep(
    rs: &RootSystem,
    r: &RootFunction,
    a: usize,
    b: usize,
    c: usize,
) -> Result<[bool; 4]> {
    let is_sum = |x: usize, y: usize, z: usize| rs.sum(y, z) == Some(x);
    if !(is_sum(a, b, c) || is_sum(b, a, c) || is_sum(c, a, b)) {
        return Err(Error::Precondition(
            "no root of the triple is the sum of the other two".into(),
        ));
    }
    if !is_non_archimedean(rs, r) {
        return Err(Error::Precondition("r is not non-archimedean".into()));
    }
    let m = r_m(rs, r);
    let (ra, rb, rc) = (r[a], r[b], r[c]);
    let (ma, mb, mc) = (m[a], m[b], m[c]);
    let rmax = ra.max(rb).max(rc);
    let mmin = ma.min(mb).min(mc);
    Ok([
        !rs.strongly_orthogonal(a, b)
            && !rs.strongly_orthogonal(a, c)
            && !rs.strongly_orthogonal(b, c),
        ra + rb - rc <= rmax,
        rmax <= mmin,
        mmin <= ma + mb - mc,
    ])
}

/// Uniform symmetric function with values in `[lo, hi]`.
pub fn random_symmetric<R: Rng>(rs: &RootSystem, rng: &mut R, lo: i64, hi: i64) -> RootFunction {
    let mut v = vec![0i64; rs.num_roots()];
    for a in 0..rs.num_roots() {
        let b = rs.neg(a);
        if a < b {
            let x = rng.gen_range(lo..=hi);
            v[a] = x;
            v[b] = x;
        }
    }
    RootFunction::new(v)
}

/// `min(val α(u), cap)` for `u = Σ ε^i v_i`, `i < cap`.
pub fn valuation_pattern(rs: &RootSystem, levels: &[QVec], cap: i64) -> RootFunction {
    RootFunction::from_fn(rs, |a| {
        levels
            .iter()
            .take(cap as usize)
            .position(|v| !rs.eval_root(a, v).is_zero())
            .map_or(cap, |i| i as i64)
    })
}

/// Random Cartan levels whose valuation pattern has interesting super-level
/// sets: each level is a random vector in the common kernel of a few
/// random roots.
pub fn random_levels<R: Rng>(rs: &RootSystem, rng: &mut R, count: usize) -> Vec<QVec> {
    let dim = rs.ambient_dim();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        if rng.gen_bool(0.25) {
            out.push(vec![BigRational::zero(); dim]);
            continue;
        }
        let count = rng.gen_range(0..=rs.rank());
        let killed: Vec<QVec> = (0..count)
            .map(|_| qvec_from_ints(rs.root(rng.gen_range(0..rs.num_roots()))))
            .collect();
        let k = QSubspace::kernel(&killed, dim);
        let mut v = vec![BigRational::zero(); dim];
        for b in k.basis() {
            let c = BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)));
            for (x, y) in v.iter_mut().zip(b) {
                *x += &c * y;
            }
        }
        out.push(v);
    }
    out
}

/// A root valuation function with values in `[0, max_value]`. A few
/// uniform symmetric draws are tried first; when none is valid the function
/// is read off as the valuation pattern of a random Cartan element.
pub fn sample_rvf<R: Rng>(rs: &RootSystem, rng: &mut R, max_value: i64) -> RootFunction {
    for _ in 0..4 {
        let r = random_symmetric(rs, rng, 0, max_value);
        if is_root_valuation_function(rs, &r) {
            return r;
        }
    }
    let levels = random_levels(rs, rng, max_value as usize);
    let r = valuation_pattern(rs, &levels, max_value);
    debug_assert!(is_root_valuation_function(rs, &r));
    r
}

/// Roots listed as a set of indices with a given value of `f`.
pub fn level_exact(f: &RootFunction, n: i64) -> RootSet {
    RootSet::from_indices((0..f.len()).filter(|&i| f[i] == n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::CartanType;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a2() -> (RootSystem, usize, usize, usize) {
        let rs = RootSystem::build(CartanType::A, 2).unwrap();
        let a = rs.root_index(&[1, -1, 0]).unwrap();
        let b = rs.root_index(&[0, 1, -1]).unwrap();
        let ab = rs.root_index(&[1, 0, -1]).unwrap();
        (rs, a, b, ab)
    }

    fn on_lines(rs: &RootSystem, vals: &[(usize, i64)], default: i64) -> RootFunction {
        RootFunction::from_fn(rs, |i| {
            vals.iter()
                .find(|(j, _)| *j == i || rs.neg(*j) == i)
                .map_or(default, |p| p.1)
        })
    }

    #[test]
    fn rvf_examples() {
        let (rs, a, b, ab) = a2();
        let good = on_lines(&rs, &[(a, 2)], 1);
        assert!(is_root_valuation_function(&rs, &good));
        let bad = on_lines(&rs, &[(a, 1), (ab, 1), (b, 0)], 0);
        assert!(!is_root_valuation_function(&rs, &bad));
        assert!(!is_non_archimedean(&rs, &bad));
        assert!(is_root_valuation_function(&rs, &RootFunction::constant(&rs, 3)));
    }

    #[test]
    fn r_m_examples() {
        let (rs, a, _, _) = a2();
        let r = on_lines(&rs, &[(a, 2)], 1);
        assert_eq!(r_m(&rs, &r), RootFunction::constant(&rs, 2));

        let b2 = RootSystem::build(CartanType::B, 2).unwrap();
        let long = b2.root_index(&[1, 1]).unwrap();
        let other = b2.root_index(&[1, -1]).unwrap();
        let r = on_lines(&b2, &[(long, 2)], 0);
        let m = r_m(&b2, &r);
        for i in 0..b2.num_roots() {
            let expect = if i == other || i == b2.neg(other) { 0 } else { 2 };
            assert_eq!(m[i], expect, "root {:?}", b2.root(i));
        }
        assert!(check_rprime(&b2, &r).unwrap().passed());
    }

    #[test]
    fn k0prep_examples() {
        let (rs, a, b, ab) = a2();
        let r0 = RootFunction::constant(&rs, 0);
        assert_eq!(check_k0prep(&rs, &r0, a, b, ab).unwrap(), [true; 4]);
        let r = on_lines(&rs, &[(a, 2)], 1);
        assert_eq!(check_k0prep(&rs, &r, a, b, ab).unwrap(), [true; 4]);
        assert!(check_k0prep(&rs, &r, a, a, b).is_err());
    }

    #[test]
    fn sampler_output_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (t, n) in [(CartanType::B, 3), (CartanType::D, 4), (CartanType::G, 2)] {
            let rs = RootSystem::build(t, n).unwrap();
            let mut nonconstant = 0;
            for _ in 0..50 {
                let r = sample_rvf(&rs, &mut rng, 4);
                assert!(is_root_valuation_function(&rs, &r));
                assert!(r.min() >= 0 && r.max() <= 4);
                if r.min() != r.max() {
                    nonconstant += 1;
                }
            }
            assert!(nonconstant > 10);
        }
    }
}
