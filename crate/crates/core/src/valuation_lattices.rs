//! Root valuation lattices `Λ_{r,λ} = 𝔞(F)_{≥r} ⊕ ⊕ P_α^{λ(α)}`, their
//! normalizer exponents and the big-lattice construction.
//!
//! Cartan elements are written in the basis of simple coroots, so a vector
//! `v` evaluates on a root as `α(v) = Σ_j v_j ⟨α, α_j^∨⟩`. Elements of the
//! whole Lie algebra are coordinate vectors: the Cartan coordinates first,
//! then one coordinate per root in root-index order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::base_field::RatFunc;
use crate::error::{Error, Result};
use crate::faults::{self, Fault};
use crate::hodge_newton::MatrixLattice;
use crate::linalg::{qvec_from_ints, LaurentMatrix, QSubspace, QVec};
use crate::root_system::{RootFunction, RootSystem};
use crate::valuation_functions::{r_m, summing_pairs};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RvlSpec {
    pub r: RootFunction,
    pub lambda: RootFunction,
    pub k: RootFunction,
}

impl RvlSpec {
    pub fn new(r: RootFunction, lambda: RootFunction) -> Self {
        let k = lambda.sub(&r);
        RvlSpec { r, lambda, k }
    }

    pub fn shift(&self, n: i64) -> Self {
        RvlSpec::new(self.r.shift(n), self.lambda.shift(n))
    }
}

/// Condition (1): `k(α) + k(-α) ≥ r_m(α) - r(α)`.
pub fn condition_one(rs: &RootSystem, spec: &RvlSpec) -> bool {
    let m = r_m(rs, &spec.r);
    let (r, k) = (&spec.r, &spec.k);
    (0..rs.num_roots()).all(|a| k[a] + k[rs.neg(a)] >= m[a] - r[a])
}

/// Condition (2): `k(α) + k(β) - k(α+β) ≥ r(α+β) - min(r(α), r(β))`.
pub fn condition_two(rs: &RootSystem, spec: &RvlSpec) -> bool {
    let (r, k) = (&spec.r, &spec.k);
    summing_pairs(rs).all(|(a, b, c)| k[a] + k[b] - k[c] >= r[c] - r[a].min(r[b]))
}

/// Condition (2) in the form `k(α) + k(β) - k(α+β) ≥ r(α+β) - r(α)`, over
/// ordered pairs, so both orderings are covered.
pub fn condition_two_asymmetric(rs: &RootSystem, spec: &RvlSpec) -> bool {
    let (r, k) = (&spec.r, &spec.k);
    summing_pairs(rs).all(|(a, b, c)| k[a] + k[b] - k[c] >= r[c] - r[a])
}

pub fn check_rvl_conditions(rs: &RootSystem, spec: &RvlSpec) -> bool {
    condition_one(rs, spec) && condition_two(rs, spec)
}

/// Both conditions for a half-integral `k`, given as `2k`.
pub fn check_rvl_conditions_half(rs: &RootSystem, r: &RootFunction, two_k: &RootFunction) -> bool {
    let m = r_m(rs, r);
    let one = (0..rs.num_roots()).all(|a| two_k[a] + two_k[rs.neg(a)] >= 2 * (m[a] - r[a]));
    let two = summing_pairs(rs)
        .all(|(a, b, c)| two_k[a] + two_k[b] - two_k[c] >= 2 * (r[c] - r[a].min(r[b])));
    one && two
}

/// `l(α) = max(S_1 ∪ S_2 ∪ S_3)`, the root-line exponents of the normalizer.
pub fn normalizer_exponents(rs: &RootSystem, spec: &RvlSpec) -> RootFunction {
    let (r, k) = (&spec.r, &spec.k);
    let n = rs.num_roots();
    RootFunction::from_fn(rs, |a| {
        let s1 = k[a];
        let s2 = (0..n)
            .filter(|&b| !rs.orthogonal(a, b))
            .map(|b| r[b] - r[a] - k[rs.neg(a)]);
        let s3 = (0..n).filter_map(|b| rs.sum(a, b).map(|c| k[c] + r[c] - k[b] - r[b]));
        s2.chain(s3).fold(s1, i64::max)
    })
}

pub fn is_rvl_via_normalizer(rs: &RootSystem, spec: &RvlSpec) -> bool {
    normalizer_exponents(rs, spec) == spec.k
}

/// `2 k_0 = r_m - r`.
pub fn two_k0(rs: &RootSystem, r: &RootFunction) -> RootFunction {
    r_m(rs, r).sub(r)
}

/// `λ = r + ⌈(r_m - r)/2⌉`.
pub fn big_lattice(rs: &RootSystem, r: &RootFunction) -> RvlSpec {
    let t = two_k0(rs, r);
    let round_down = faults::active(Fault::K1OffByOne);
    let k1 = RootFunction::from_fn(rs, |a| {
        if round_down {
            t[a].div_euclid(2)
        } else {
            (t[a] + 1).div_euclid(2)
        }
    });
    RvlSpec::new(r.clone(), r.add(&k1))
}

/// Nested subspaces `V_i` of the Cartan, in simple-coroot coordinates:
/// `V_i = 0` below `start`, `V_i = spaces[i - start]` in range, and the
/// last space (always the whole Cartan) beyond.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanChain {
    start: i64,
    spaces: Vec<QSubspace>,
}

impl CartanChain {
    pub fn new(start: i64, mut spaces: Vec<QSubspace>, rank: usize) -> Result<Self> {
        if spaces.is_empty() || !spaces.last().unwrap().is_full() {
            return Err(Error::IllDefined("Cartan chain must end with the full space".into()));
        }
        if spaces.windows(2).any(|w| !w[0].is_subspace_of(&w[1])) {
            return Err(Error::IllDefined("Cartan chain is not increasing".into()));
        }
        let mut start = start;
        while spaces.len() > 1 && spaces[0].dim() == 0 {
            spaces.remove(0);
            start += 1;
        }
        while spaces.len() > 1 && spaces[spaces.len() - 2].is_full() {
            spaces.pop();
        }
        debug_assert!(spaces.iter().all(|s| s.ambient() == rank));
        Ok(CartanChain { start, spaces })
    }

    /// `V_i = 0` for `i < n`, everything for `i ≥ n`.
    pub fn integral(rank: usize, n: i64) -> Self {
        CartanChain {
            start: n,
            spaces: vec![QSubspace::full(rank)],
        }
    }

    pub fn rank(&self) -> usize {
        self.spaces[0].ambient()
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// First index from which `V_i` is everything.
    pub fn top(&self) -> i64 {
        self.start + self.spaces.len() as i64 - 1
    }

    pub fn at(&self, i: i64) -> QSubspace {
        if i < self.start {
            QSubspace::zero(self.rank())
        } else if i > self.top() {
            self.spaces.last().unwrap().clone()
        } else {
            self.spaces[(i - self.start) as usize].clone()
        }
    }

    pub fn shift(&self, n: i64) -> Self {
        CartanChain {
            start: self.start + n,
            spaces: self.spaces.clone(),
        }
    }

    /// Exponents `d_j` and vectors `b_j` with `Λ_A = ⊕ O ε^{d_j} b_j`.
    pub fn adapted_basis(&self) -> Vec<(i64, QVec)> {
        let mut out: Vec<(i64, QVec)> = Vec::new();
        let mut current = QSubspace::zero(self.rank());
        for (j, s) in self.spaces.iter().enumerate() {
            for b in s.basis() {
                if !current.contains(b) {
                    current = current.join(&QSubspace::span(std::slice::from_ref(b), self.rank()));
                    out.push((self.start + j as i64, b.clone()));
                }
            }
        }
        out
    }
}

/// `α(v)` for `v` in simple-coroot coordinates.
pub fn root_functional(rs: &RootSystem, a: usize) -> QVec {
    let v: Vec<i64> = rs.simple_roots().iter().map(|&s| rs.pairing(a, s)).collect();
    qvec_from_ints(&v)
}

/// An `A(O)`-stable lattice `Λ_A ⊕ ⊕ P_α^{λ(α)}`.
#[derive(Clone, Debug)]
pub struct GradedLattice<'a> {
    pub rs: &'a RootSystem,
    pub lambda: RootFunction,
    pub cartan: CartanChain,
}

/// `V_i = {v : α(v) = 0 whenever r(α) ≥ i + 1}`.
pub fn cartan_chain_for(rs: &RootSystem, r: &RootFunction) -> CartanChain {
    let rank = rs.rank();
    let spaces = (r.min()..=r.max())
        .map(|i| {
            let f: Vec<QVec> = (0..rs.num_roots())
                .filter(|&a| r[a] > i)
                .map(|a| root_functional(rs, a))
                .collect();
            QSubspace::kernel(&f, rank)
        })
        .collect();
    CartanChain::new(r.min(), spaces, rank).expect("valid chain")
}

impl<'a> GradedLattice<'a> {
    /// `Λ_{r,λ}` with the Cartan part `𝔞(F)_{≥r}`.
    pub fn assemble(rs: &'a RootSystem, spec: &RvlSpec) -> Self {
        GradedLattice {
            rs,
            lambda: spec.lambda.clone(),
            cartan: cartan_chain_for(rs, &spec.r),
        }
    }

    /// `𝔞(O) ⊕ ⊕ P_α^{λ(α)}`.
    pub fn with_integral_cartan(rs: &'a RootSystem, lambda: RootFunction) -> Self {
        GradedLattice {
            rs,
            lambda,
            cartan: CartanChain::integral(rs.rank(), 0),
        }
    }

    /// `ε^n Λ`.
    pub fn shift(&self, n: i64) -> Self {
        GradedLattice {
            rs: self.rs,
            lambda: self.lambda.shift(n),
            cartan: self.cartan.shift(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.rs.rank() + self.rs.num_roots()
    }

    pub fn is_contained_in(&self, other: &GradedLattice) -> bool {
        let lam = (0..self.rs.num_roots()).all(|a| self.lambda[a] >= other.lambda[a]);
        let lo = self.cartan.start().min(other.cartan.start());
        let hi = self.cartan.top().max(other.cartan.top());
        lam && (lo..=hi).all(|i| self.cartan.at(i).is_subspace_of(&other.cartan.at(i)))
    }

    /// Codimension in a graded lattice containing this one.
    pub fn codimension(&self, reference: &GradedLattice) -> Result<u64> {
        if !self.is_contained_in(reference) {
            return Err(Error::Containment("lattice is not contained in the reference".into()));
        }
        let roots: i64 = (0..self.rs.num_roots())
            .map(|a| self.lambda[a] - reference.lambda[a])
            .sum();
        let lo = self.cartan.start().min(reference.cartan.start());
        let hi = self.cartan.top().max(reference.cartan.top());
        let cartan: i64 = (lo..=hi)
            .map(|i| reference.cartan.at(i).dim() as i64 - self.cartan.at(i).dim() as i64)
            .sum();
        Ok((roots + cartan) as u64)
    }

    /// Membership of a coordinate vector, read off exponents and the Cartan
    /// chain.
    pub fn contains(&self, coords: &[RatFunc]) -> bool {
        let rank = self.rs.rank();
        if coords.len() != self.dim() {
            return false;
        }
        let roots_ok = (0..self.rs.num_roots())
            .all(|a| coords[rank + a].val_at_least(self.lambda[a]));
        if !roots_ok {
            return false;
        }
        let h = &coords[..rank];
        if !h.iter().all(|x| x.val_at_least(self.cartan.start())) {
            return false;
        }
        (self.cartan.start()..self.cartan.top()).all(|i| {
            let v: QVec = h.iter().map(|x| x.coeff(i)).collect();
            self.cartan.at(i).contains(&v)
        })
    }

    /// O-basis in coordinates: adapted Cartan vectors, then `ε^{λ(α)} e_α`.
    pub fn to_matrix_lattice(&self) -> MatrixLattice {
        let rank = self.rs.rank();
        let d = self.dim();
        let mut cols = Vec::with_capacity(d);
        for (e, b) in self.cartan.adapted_basis() {
            let mut c = vec![RatFunc::zero(); d];
            for (j, x) in b.iter().enumerate() {
                if !x.is_zero() {
                    c[j] = RatFunc::monomial(x.clone(), e);
                }
            }
            cols.push(c);
        }
        for a in 0..self.rs.num_roots() {
            let mut c = vec![RatFunc::zero(); d];
            c[rank + a] = RatFunc::eps_pow(self.lambda[a]);
            cols.push(c);
        }
        MatrixLattice::new(LaurentMatrix::from_columns(&cols).expect("square"))
            .expect("independent basis")
    }

    /// A seeded element with integer coefficients in `[-coeff_bound,
    /// coeff_bound]` in every graded slot up to degree `degree_cap`.
    pub fn sample_element<R: Rng>(&self, degree_cap: i64, coeff_bound: i64, rng: &mut R) -> Result<Vec<RatFunc>> {
        if degree_cap < self.lambda.max() || degree_cap < self.cartan.top() {
            return Err(Error::Precondition("degree cap below the lattice exponents".into()));
        }
        let rank = self.rs.rank();
        let coef = |rng: &mut R| BigRational::from_integer(BigInt::from(rng.gen_range(-coeff_bound..=coeff_bound)));
        let mut h: Vec<Vec<(i64, BigRational)>> = vec![Vec::new(); rank];
        for i in self.cartan.start()..=degree_cap {
            let v = self.cartan.at(i);
            let mut u = vec![BigRational::zero(); rank];
            for b in v.basis() {
                let c = coef(rng);
                for (x, y) in u.iter_mut().zip(b) {
                    *x += &c * y;
                }
            }
            for (j, x) in u.into_iter().enumerate() {
                h[j].push((i, x));
            }
        }
        let mut out: Vec<RatFunc> = h.iter().map(|t| RatFunc::laurent(t)).collect();
        for a in 0..self.rs.num_roots() {
            let terms: Vec<(i64, BigRational)> =
                (self.lambda[a]..=degree_cap).map(|i| (i, coef(rng))).collect();
            out.push(RatFunc::laurent(&terms));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::CartanType;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn iwahori(rs: &RootSystem, n: i64) -> RootFunction {
        RootFunction::from_fn(rs, |a| if rs.is_positive(a) { n } else { n + 1 })
    }

    fn b2_example() -> (RootSystem, RootFunction) {
        let rs = RootSystem::build(CartanType::B, 2).unwrap();
        let l = rs.root_index(&[1, 1]).unwrap();
        let r = RootFunction::from_fn(&rs, |a| if a == l || a == rs.neg(l) { 2 } else { 0 });
        (rs, r)
    }

    #[test]
    fn condition_examples() {
        let rs = RootSystem::build(CartanType::A, 2).unwrap();
        for n in [0, 1, 3] {
            let r = RootFunction::constant(&rs, n);
            let iw = RvlSpec::new(r.clone(), iwahori(&rs, n));
            assert!(check_rvl_conditions(&rs, &iw));
            assert!(is_rvl_via_normalizer(&rs, &iw));
            let flat = RvlSpec::new(r.clone(), r.clone());
            assert!(check_rvl_conditions(&rs, &flat));
            assert!(is_rvl_via_normalizer(&rs, &flat));
        }
        let (b2, r) = b2_example();
        let spec = RvlSpec::new(r.clone(), r.clone());
        assert!(!check_rvl_conditions(&b2, &spec));
        assert!(!is_rvl_via_normalizer(&b2, &spec));
    }

    #[test]
    fn normalizer_examples() {
        let rs = RootSystem::build(CartanType::A, 2).unwrap();
        let zero = RootFunction::constant(&rs, 0);
        let spec = RvlSpec::new(zero.clone(), zero.clone());
        assert_eq!(normalizer_exponents(&rs, &spec), zero);
        let one = RootFunction::constant(&rs, 1);
        let spec = RvlSpec::new(one, iwahori(&rs, 1));
        assert_eq!(normalizer_exponents(&rs, &spec), iwahori(&rs, 0));
    }

    #[test]
    fn big_lattice_examples() {
        let (b2, r) = b2_example();
        let spec = big_lattice(&b2, &r);
        for a in 0..b2.num_roots() {
            let v = b2.root(a);
            let long = v[0] != 0 && v[1] != 0;
            let k1 = if long { 0 } else { 1 };
            assert_eq!(spec.k[a], k1, "{:?}", v);
            let lam = if v == [1, 1] || v == [-1, -1] { 2 } else if long { 0 } else { 1 };
            assert_eq!(spec.lambda[a], lam, "{:?}", v);
        }
        assert!(check_rvl_conditions(&b2, &spec));
        assert_eq!(normalizer_exponents(&b2, &spec), spec.k);
        // condition (2) is tight at (e1, e2)
        let (e1, e2) = (b2.root_index(&[1, 0]).unwrap(), b2.root_index(&[0, 1]).unwrap());
        let c = b2.sum(e1, e2).unwrap();
        assert_eq!(spec.k[e1] + spec.k[e2] - spec.k[c], r[c] - r[e1].min(r[e2]));

        let a2 = RootSystem::build(CartanType::A, 2).unwrap();
        let a = a2.root_index(&[1, -1, 0]).unwrap();
        let r = RootFunction::from_fn(&a2, |i| if i == a || i == a2.neg(a) { 2 } else { 1 });
        assert_eq!(r_m(&a2, &r), RootFunction::constant(&a2, 2));
        let spec = big_lattice(&a2, &r);
        for i in 0..6 {
            let expect = if i == a || i == a2.neg(a) { 0 } else { 1 };
            assert_eq!(spec.k[i], expect);
        }
        let c = RootFunction::constant(&a2, 3);
        assert_eq!(big_lattice(&a2, &c).lambda, c);
    }

    #[test]
    fn codimensions() {
        let rs = RootSystem::build(CartanType::A, 1).unwrap();
        let go = GradedLattice::with_integral_cartan(&rs, RootFunction::constant(&rs, 0));
        let eps_go = go.shift(1);
        assert_eq!(eps_go.codimension(&go).unwrap(), 3);
        assert_eq!(go.codimension(&go).unwrap(), 0);
        let eps_iw = GradedLattice::with_integral_cartan(&rs, iwahori(&rs, 0)).shift(1);
        assert_eq!(eps_iw.codimension(&eps_go).unwrap(), 1);
        assert!(go.codimension(&eps_go).is_err());
    }

    #[test]
    fn cartan_chain_of_stratum() {
        let rs = RootSystem::build(CartanType::A, 2).unwrap();
        let a = rs.root_index(&[1, -1, 0]).unwrap();
        let r = RootFunction::from_fn(&rs, |i| if i == a || i == rs.neg(a) { 2 } else { 1 });
        let l = GradedLattice::assemble(&rs, &RvlSpec::new(r.clone(), r.clone()));
        assert_eq!(l.cartan.at(0).dim(), 0);
        assert_eq!(l.cartan.at(1).dim(), 1);
        assert_eq!(l.cartan.at(2).dim(), 2);
        let basis = l.cartan.adapted_basis();
        assert_eq!(basis.iter().map(|b| b.0).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn samples_are_members_and_deterministic() {
        let rs = RootSystem::build(CartanType::A, 2).unwrap();
        let r = RootFunction::from_fn(&rs, |i| if i == 0 || i == rs.neg(0) { 2 } else { 1 });
        let spec = big_lattice(&rs, &r);
        let l = GradedLattice::assemble(&rs, &spec);
        let s1 = l.sample_element(4, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let s2 = l.sample_element(4, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(s1, s2);
        assert!(l.contains(&s1));
        assert!(l.to_matrix_lattice().contains(&s1));

        let a1 = RootSystem::build(CartanType::A, 1).unwrap();
        let eps_g = GradedLattice::with_integral_cartan(&a1, RootFunction::constant(&a1, 0)).shift(1);
        for seed in 0..5 {
            let s = eps_g.sample_element(3, 3, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert!(s.iter().all(|x| x.val_at_least(1)));
        }
    }
}
