//! Positive `(G,A)`-orthogonal sets and recognition of those that come from
//! a Levi subgroup `M`.
//!
//! Chambers `B = wB₀` are indexed by Weyl elements; points live in the
//! ambient space of the root system, where coroots are `2α/(α,α)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{qadd, qdot, qscale, qsub, QVec};
use crate::root_system::{is_zero_vec, RootSet, RootSystem, WeylElement, WEYL_CAP};

/// The chambers of the apartment with their adjacency.
#[derive(Clone, Debug)]
pub struct Chambers<'a> {
    pub rs: &'a RootSystem,
    pub elements: Vec<WeylElement>,
    /// `neighbors[k][i]` is the index of `w_k s_i`.
    pub neighbors: Vec<Vec<usize>>,
    /// `w(R⁺)`.
    pub positive: Vec<RootSet>,
}

impl<'a> Chambers<'a> {
    pub fn new(rs: &'a RootSystem) -> Result<Self> {
        let elements = rs.weyl_elements(WEYL_CAP)?;
        let index: HashMap<&[u8], usize> = elements
            .iter()
            .enumerate()
            .map(|(k, w)| (w.perm.as_slice(), k))
            .collect();
        let simple: Vec<&WeylElement> = (0..rs.rank())
            .map(|i| elements.iter().find(|w| w.word == [i]).expect("simple reflection"))
            .collect();
        let neighbors = elements
            .iter()
            .map(|w| {
                simple
                    .iter()
                    .map(|s| {
                        let p: Vec<u8> = s.perm.iter().map(|&j| w.perm[j as usize]).collect();
                        index[p.as_slice()]
                    })
                    .collect()
            })
            .collect();
        let pos = rs.positive_roots();
        let positive = elements.iter().map(|w| rs.act_set(w, pos)).collect();
        Ok(Chambers { rs, elements, neighbors, positive })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The root `wα_i` separating chamber `k` from its `i`-th neighbor,
    /// positive for chamber `k`.
    pub fn wall_root(&self, k: usize, i: usize) -> usize {
        self.elements[k].apply(self.rs.simple_roots()[i])
    }

    pub fn index_of_word(&self, word: &[usize]) -> Option<usize> {
        let mut k = 0;
        for &i in word {
            k = *self.neighbors[k].get(i)?;
        }
        Some(k)
    }
}

/// A family of points, one per chamber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAOrthSet {
    pub points: Vec<QVec>,
}

impl GAOrthSet {
    pub fn constant(ch: &Chambers, v: &[BigRational]) -> Self {
        GAOrthSet { points: vec![v.to_vec(); ch.len()] }
    }

    pub fn add(&self, other: &GAOrthSet) -> GAOrthSet {
        GAOrthSet {
            points: self.points.iter().zip(&other.points).map(|(a, b)| qadd(a, b)).collect(),
        }
    }

    pub fn neg(&self) -> GAOrthSet {
        let m1 = BigRational::from_integer(BigInt::from(-1));
        GAOrthSet { points: self.points.iter().map(|a| qscale(a, &m1)).collect() }
    }
}

/// `r` with `d = r c`, if `d` lies on the line through `c ≠ 0`.
fn coefficient_on_line(d: &[BigRational], c: &[BigRational]) -> Option<BigRational> {
    let r = qdot(d, c) / qdot(c, c);
    is_zero_vec(&qsub(d, &qscale(c, &r))).then_some(r)
}

/// `(k, i, r)` with `x_k - x_{k s_i} = r (w_k α_i)^∨`, or a diagnostic for
/// the first non-collinear difference.
pub fn adjacency_coefficients(ch: &Chambers, x: &GAOrthSet) -> std::result::Result<Vec<(usize, usize, BigRational)>, String> {
    if x.points.len() != ch.len() {
        return Err(format!("{} points for {} chambers", x.points.len(), ch.len()));
    }
    let mut out = Vec::new();
    for k in 0..ch.len() {
        for (i, &k2) in ch.neighbors[k].iter().enumerate() {
            let beta = ch.rs.coroot(ch.wall_root(k, i));
            let d = qsub(&x.points[k], &x.points[k2]);
            match coefficient_on_line(&d, beta) {
                Some(r) => out.push((k, i, r)),
                None => {
                    return Err(format!(
                        "difference across the wall {} of chamber {:?} is not a multiple of its coroot",
                        ch.rs.root_string(ch.wall_root(k, i)),
                        ch.elements[k].word
                    ))
                }
            }
        }
    }
    Ok(out)
}

pub fn is_positive_orthogonal(ch: &Chambers, x: &GAOrthSet) -> bool {
    adjacency_coefficients(ch, x).is_ok_and(|c| c.iter().all(|(_, _, r)| !r.is_negative()))
}

/// `p_M`: reduction modulo the span of the coroots of `R_M`.
pub fn p_m(rs: &RootSystem, r_m: RootSet, v: &[BigRational]) -> QVec {
    rs.span(r_m).reduce(v)
}

fn check_levi(rs: &RootSystem, r_m: RootSet) -> Result<()> {
    if rs.is_q_closed(r_m) && rs.is_symmetric(r_m) {
        Ok(())
    } else {
        Err(Error::Precondition("R_M is not a Q-closed symmetric set".into()))
    }
}

/// The parabolics in `P(M)`, as the distinct sets `R_N(B) = w(R⁺) \ R_M`
/// for chambers `B` lying in a parabolic with Levi `M` (both `R_N` and
/// `R_M ∪ R_N` closed), sorted, with the chambers in each.
pub fn parabolic_types(ch: &Chambers, r_m: RootSet) -> Result<Vec<(RootSet, Vec<usize>)>> {
    check_levi(ch.rs, r_m)?;
    let mut groups: BTreeMap<RootSet, Vec<usize>> = BTreeMap::new();
    for (k, p) in ch.positive.iter().enumerate() {
        let n = RootSet(p.0 & !r_m.0);
        if ch.rs.is_z_closed(n) && ch.rs.is_z_closed(n.union(r_m)) {
            groups.entry(n).or_default().push(k);
        }
    }
    Ok(groups.into_iter().collect())
}

/// `y_P = p_M(x_B)` for `B ⊂ P`, checking that the choice of `B` does not
/// matter.
pub fn associated_gm_set(ch: &Chambers, x: &GAOrthSet, r_m: RootSet) -> Result<Vec<(RootSet, QVec)>> {
    let sp = ch.rs.span(r_m);
    parabolic_types(ch, r_m)?
        .into_iter()
        .map(|(n, ks)| {
            let y = sp.reduce(&x.points[ks[0]]);
            if ks.iter().any(|&k| sp.reduce(&x.points[k]) != y) {
                return Err(Error::IllDefined(format!(
                    "chambers in the parabolic {:?} have different images",
                    n.iter().collect::<Vec<_>>()
                )));
            }
            Ok((n, y))
        })
        .collect()
}

/// Whether the associated family is `(G,M)`-orthogonal and positive: for
/// parabolics whose `R_N` differ by the roots `S` (all in `R_N(P)`), the
/// difference `y_P - y_{P'}` is a non-negative multiple of the image of
/// the coroot of some root in `S`, and all images of coroots in `S` are
/// positively proportional.
pub fn is_positive_gm_orthogonal(ch: &Chambers, y: &[(RootSet, QVec)], r_m: RootSet) -> bool {
    let sp = ch.rs.span(r_m);
    for (n1, y1) in y {
        for (n2, y2) in y {
            let s = RootSet(n1.0 & !n2.0);
            if s.is_empty() {
                continue;
            }
            let images: Vec<QVec> = s.iter().map(|a| sp.reduce(ch.rs.coroot(a))).collect();
            let base = &images[0];
            if images
                .iter()
                .any(|v| coefficient_on_line(v, base).is_none_or(|c| !c.is_positive()))
            {
                // not adjacent
                continue;
            }
            match coefficient_on_line(&qsub(y1, y2), base) {
                Some(c) if !c.is_negative() => {}
                _ => return false,
            }
        }
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct GmoVerdict {
    pub conditions: [bool; 5],
    /// Condition (4) for every opposite pair, in parabolic order.
    pub opposite_pairs: Vec<bool>,
}

impl GmoVerdict {
    pub fn consistent(&self) -> bool {
        let c = self.conditions;
        c.iter().all(|&b| b == c[0]) && self.opposite_pairs.iter().all(|&b| b == c[0])
    }
}

/// The five conditions for `x` to come from `M`, each evaluated directly.
/// Negative orthogonal sets are accepted too; positivity in (1) is then
/// read with the opposite sign.
pub fn comes_from_m(ch: &Chambers, x: &GAOrthSet, r_m: RootSet) -> Result<GmoVerdict> {
    let negative = if is_positive_orthogonal(ch, x) {
        false
    } else if is_positive_orthogonal(ch, &x.neg()) {
        true
    } else {
        return Err(Error::Precondition("x is neither a positive nor a negative orthogonal set".into()));
    };
    let rs = ch.rs;
    let sp = rs.span(r_m);

    // (1): chambers with the same B ∩ M carry the same point, and the
    // induced family on M-chambers is positive.
    let mut z: BTreeMap<RootSet, QVec> = BTreeMap::new();
    let mut c1 = true;
    for (k, p) in ch.positive.iter().enumerate() {
        let key = RootSet(p.0 & r_m.0);
        match z.get(&key) {
            Some(v) => c1 &= *v == x.points[k],
            None => {
                z.insert(key, x.points[k].clone());
            }
        }
    }
    if c1 {
        for (p1, z1) in &z {
            for (p2, z2) in &z {
                let s = RootSet(p1.0 & !p2.0);
                if s.len() != 1 {
                    continue;
                }
                let g = s.iter().next().unwrap();
                c1 &= coefficient_on_line(&qsub(z1, z2), rs.coroot(g))
                    .is_some_and(|r| if negative { !r.is_positive() } else { !r.is_negative() });
            }
        }
    }

    // (2)
    let first = sp.reduce(&x.points[0]);
    let c2 = x.points.iter().all(|v| sp.reduce(v) == first);

    // (3), (4)
    let y = associated_gm_set(ch, x, r_m)?;
    let c3 = y.iter().all(|(_, v)| *v == y[0].1);
    let opposite = |n: RootSet| {
        let m = rs.negate_set(n);
        y.iter().find(|(n2, _)| *n2 == m).map(|(_, v)| v)
    };
    let opposite_pairs: Vec<bool> = y
        .iter()
        .map(|(n, v)| opposite(*n).is_some_and(|w| w == v))
        .collect();
    let c4 = opposite_pairs[0];

    // (5)
    let mut c5 = true;
    for k in 0..ch.len() {
        for (i, &k2) in ch.neighbors[k].iter().enumerate() {
            if !r_m.contains(ch.wall_root(k, i)) {
                c5 &= x.points[k] == x.points[k2];
            }
        }
    }
    Ok(GmoVerdict { conditions: [c1, c2, c3, c4, c5], opposite_pairs })
}

/// Moves `v` into the closed chamber of the positive system `pos` by
/// reflections in roots of `pos` pairing negatively with it.
fn fold(rs: &RootSystem, pos: RootSet, v: &[BigRational]) -> QVec {
    let mut v = v.to_vec();
    loop {
        let bad = pos.iter().find(|&a| {
            let a_vec: QVec = rs.root(a).iter().map(|&c| BigRational::from_integer(c.into())).collect();
            qdot(&v, &a_vec).is_negative()
        });
        match bad {
            None => return v,
            Some(a) => {
                let c = qdot(&v, rs.coroot(a));
                let a_vec: QVec = rs.root(a).iter().map(|&c| BigRational::from_integer(c.into())).collect();
                v = qsub(&v, &qscale(&a_vec, &c));
            }
        }
    }
}

/// `x_B = z_{B∩M}` where `z_{B_M}` is the representative of `W_M μ` in the
/// closed chamber of `B_M`. With `R_M = R` this is the orbit family `wμ`
/// for dominant `μ`.
pub fn levi_family(ch: &Chambers, r_m: RootSet, mu: &[BigRational]) -> GAOrthSet {
    GAOrthSet {
        points: ch
            .positive
            .iter()
            .map(|p| fold(ch.rs, RootSet(p.0 & r_m.0), mu))
            .collect(),
    }
}

fn random_vector<R: Rng>(dim: usize, rng: &mut R) -> QVec {
    (0..dim)
        .map(|_| {
            BigRational::new(BigInt::from(rng.gen_range(-4i64..=4)), BigInt::from(rng.gen_range(1i64..=3)))
        })
        .collect()
}

/// A constant plus `num_orbits` orbit families of random dominant vectors.
pub fn random_positive<R: Rng>(ch: &Chambers, num_orbits: usize, rng: &mut R) -> GAOrthSet {
    let dim = ch.rs.ambient_dim();
    let mut x = GAOrthSet::constant(ch, &random_vector(dim, rng));
    for _ in 0..num_orbits {
        let mu = random_vector(dim, rng);
        x = x.add(&levi_family(ch, ch.rs.all_roots(), &mu));
    }
    debug_assert!(is_positive_orthogonal(ch, &x));
    x
}

/// A constant plus a family induced from a random Levi of `levis`, with a
/// random vector that may be singular.
pub fn random_induced<R: Rng>(ch: &Chambers, levis: &[RootSet], rng: &mut R) -> GAOrthSet {
    let dim = ch.rs.ambient_dim();
    let r_m = levis[rng.gen_range(0..levis.len())];
    let mut mu = random_vector(dim, rng);
    if rng.gen_bool(0.3) {
        // push onto a wall of the fundamental chamber
        let a = ch.rs.simple_roots()[rng.gen_range(0..ch.rs.rank())];
        let a_vec: QVec = ch.rs.root(a).iter().map(|&c| BigRational::from_integer(c.into())).collect();
        let c = qdot(&mu, ch.rs.coroot(a)) / BigRational::from_integer(BigInt::from(2));
        mu = qsub(&mu, &qscale(&a_vec, &c));
    }
    let base = GAOrthSet::constant(ch, &random_vector(dim, rng));
    base.add(&levi_family(ch, r_m, &mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::CartanType;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qv(v: &[i64]) -> QVec {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn constant_and_rank_one() {
        let rs = RootSystem::build(CartanType::A, 1).unwrap();
        let ch = Chambers::new(&rs).unwrap();
        assert_eq!(ch.len(), 2);
        let c = GAOrthSet::constant(&ch, &qv(&[3, 1]));
        assert!(is_positive_orthogonal(&ch, &c));
        let v = comes_from_m(&ch, &c, RootSet::EMPTY).unwrap();
        assert_eq!(v.conditions, [true; 5]);
        // x_{B₀} - x_{s B₀} = c α^∨
        for (cc, ok) in [(2, true), (0, true), (-1, false)] {
            let x = GAOrthSet { points: vec![qv(&[cc, -cc]), qv(&[0, 0])] };
            assert_eq!(is_positive_orthogonal(&ch, &x), ok);
        }
        let skew = GAOrthSet { points: vec![qv(&[1, 0]), qv(&[0, 0])] };
        assert!(adjacency_coefficients(&ch, &skew).is_err());
    }

    #[test]
    fn orbit_family_is_positive() {
        for (t, n) in [(CartanType::A, 2), (CartanType::B, 2), (CartanType::G, 2)] {
            let rs = RootSystem::build(t, n).unwrap();
            let ch = Chambers::new(&rs).unwrap();
            let mu = fold(&rs, rs.positive_roots(), &qv(&[5, -2, 1][..rs.ambient_dim()]));
            let x = levi_family(&ch, rs.all_roots(), &mu);
            assert!(is_positive_orthogonal(&ch, &x));
        }
    }

    #[test]
    fn parabolic_examples() {
        let rs = RootSystem::build(CartanType::A, 2).unwrap();
        let ch = Chambers::new(&rs).unwrap();
        assert_eq!(parabolic_types(&ch, RootSet::EMPTY).unwrap().len(), 6);
        assert_eq!(parabolic_types(&ch, rs.all_roots()).unwrap().len(), 1);
        let a = rs.root_index(&[1, -1, 0]).unwrap();
        let m = RootSet::from_indices([a, rs.neg(a)]);
        assert_eq!(parabolic_types(&ch, m).unwrap().len(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random_positive(&ch, 2, &mut rng);
        assert_eq!(associated_gm_set(&ch, &x, RootSet::EMPTY).unwrap().len(), 6);
    }

    #[test]
    fn gmo_examples() {
        let rs = RootSystem::build(CartanType::A, 2).unwrap();
        let ch = Chambers::new(&rs).unwrap();
        let a = rs.root_index(&[1, -1, 0]).unwrap();
        let m = RootSet::from_indices([a, rs.neg(a)]);
        let induced = levi_family(&ch, m, &qv(&[2, -2, 0]));
        let v = comes_from_m(&ch, &induced, m).unwrap();
        assert_eq!(v.conditions, [true; 5]);
        let generic = levi_family(&ch, rs.all_roots(), &qv(&[3, 1, -4]));
        let v = comes_from_m(&ch, &generic, m).unwrap();
        assert_eq!(v.conditions, [false; 5]);
        assert!(v.consistent());
    }

    #[test]
    fn random_positive_examples() {
        let rs = RootSystem::build(CartanType::B, 2).unwrap();
        let ch = Chambers::new(&rs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x0 = random_positive(&ch, 0, &mut rng);
        assert!(x0.points.iter().all(|p| *p == x0.points[0]));
        let a = random_positive(&ch, 3, &mut ChaCha8Rng::seed_from_u64(9));
        let b = random_positive(&ch, 3, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        let regular = levi_family(&ch, rs.all_roots(), &qv(&[3, 1]));
        let coeffs = adjacency_coefficients(&ch, &regular).unwrap();
        assert!(coeffs.iter().all(|(_, _, r)| r.is_positive()));
    }
}
