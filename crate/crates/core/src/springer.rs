//! `sl_n` in its Chevalley basis, generalized affine Springer fiber
//! membership, compatibility with the split torus, and the stratum sampler.
//!
//! Coordinates follow the convention of the graded lattices: the simple
//! coroots `H_j` first, then `E_α` in root-index order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::base_field::{dominance_geq, ExtRat, QTuple, RatFunc};
use crate::error::{Error, Result};
use crate::hodge_newton::{
    direct_sum_equal_many, hodge_point_snf, intersect_subspace, newton_point, MatrixLattice,
    Subspace,
};
use crate::linalg::{LaurentMatrix, QVec};
use crate::root_system::{CartanType, RootFunction, RootSystem};
use crate::valuation_lattices::{cartan_chain_for, root_functional, GradedLattice};

/// Coordinates of an element of `sl_n(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChevalleyElement(Vec<RatFunc>);

impl ChevalleyElement {
    pub fn coords(&self) -> &[RatFunc] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<RatFunc> {
        self.0
    }
}

/// A point of the apartment in fundamental-coweight coordinates, so that
/// `α_j(x) = x_j` for the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApartmentPoint(#[serde(serialize_with = "ser_rationals")] pub Vec<BigRational>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    EpsDiag(Vec<i64>),
    /// `e_j ↦ e_{perm[j]}`.
    Perm(Vec<usize>),
    /// `1 + t E_{ij}`, `i ≠ j`.
    Unipotent { i: usize, j: usize, t: RatFunc },
}

/// A product of generators, read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupWord(pub Vec<Generator>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    pub fn then(mut self, g: Generator) -> Self {
        self.0.push(g);
        self
    }

    pub fn matrix(&self, n: usize) -> Result<LaurentMatrix> {
        let mut m = LaurentMatrix::identity(n);
        for g in &self.0 {
            let f = match g {
                Generator::EpsDiag(mu) if mu.len() == n => LaurentMatrix::eps_diag(mu),
                Generator::Perm(p) if is_permutation(p, n) => {
                    let mut x = LaurentMatrix::zeros(n, n);
                    for (j, &i) in p.iter().enumerate() {
                        x[(i, j)] = RatFunc::one();
                    }
                    x
                }
                Generator::Unipotent { i, j, t } if i != j && *i < n && *j < n => {
                    let mut x = LaurentMatrix::identity(n);
                    x[(*i, *j)] = t.clone();
                    x
                }
                _ => return Err(Error::Precondition(format!("bad generator {:?}", g))),
            };
            m = m.mul(&f);
        }
        Ok(m)
    }
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `sl_n` with its root system of type `A_{n-1}`.
#[derive(Clone, Debug)]
pub struct SlN {
    n: usize,
    rs: RootSystem,
    /// `E_α = E_{ij}`.
    positions: Vec<(usize, usize)>,
}

impl SlN {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=4).contains(&n) {
            return Err(Error::UnsupportedRootSystem(format!("sl_{}", n)));
        }
        let rs = RootSystem::build(CartanType::A, n - 1)?;
        let positions = rs
            .roots()
            .iter()
            .map(|v| {
                let i = v.iter().position(|&x| x == 1).unwrap();
                let j = v.iter().position(|&x| x == -1).unwrap();
                (i, j)
            })
            .collect();
        Ok(SlN { n, rs, positions })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn dim(&self) -> usize {
        self.n * self.n - 1
    }

    pub fn rank(&self) -> usize {
        self.n - 1
    }

    pub fn element(&self, coords: Vec<RatFunc>) -> Result<ChevalleyElement> {
        if coords.len() != self.dim() {
            return Err(Error::LengthMismatch { expected: self.dim(), found: coords.len() });
        }
        Ok(ChevalleyElement(coords))
    }

    pub fn zero(&self) -> ChevalleyElement {
        ChevalleyElement(vec![RatFunc::zero(); self.dim()])
    }

    /// `Σ h_j H_j`.
    pub fn cartan_element(&self, h: &[RatFunc]) -> Result<ChevalleyElement> {
        if h.len() != self.rank() {
            return Err(Error::LengthMismatch { expected: self.rank(), found: h.len() });
        }
        let mut c = h.to_vec();
        c.extend(std::iter::repeat_n(RatFunc::zero(), self.rs.num_roots()));
        Ok(ChevalleyElement(c))
    }

    pub fn root_vector(&self, a: usize, t: RatFunc) -> ChevalleyElement {
        let mut c = vec![RatFunc::zero(); self.dim()];
        c[self.rank() + a] = t;
        ChevalleyElement(c)
    }

    pub fn to_matrix(&self, u: &ChevalleyElement) -> LaurentMatrix {
        let mut m = LaurentMatrix::zeros(self.n, self.n);
        for (j, &s) in self.rs.simple_roots().iter().enumerate() {
            let h = &u.0[j];
            if h.is_zero() {
                continue;
            }
            for (i, &x) in self.rs.root(s).iter().enumerate() {
                if x != 0 {
                    m[(i, i)] = &m[(i, i)] + &(h * &RatFunc::from_int(x));
                }
            }
        }
        for (a, &(i, j)) in self.positions.iter().enumerate() {
            m[(i, j)] = u.0[self.rank() + a].clone();
        }
        m
    }

    pub fn from_matrix(&self, x: &LaurentMatrix) -> Result<ChevalleyElement> {
        if x.rows() != self.n || !x.is_square() {
            return Err(Error::Dimension("expected an n x n matrix".into()));
        }
        if !x.trace().is_zero() {
            return Err(Error::Precondition("matrix is not trace-free".into()));
        }
        let cols: Vec<Vec<RatFunc>> = self
            .rs
            .simple_roots()
            .iter()
            .map(|&s| self.rs.root(s).iter().map(|&v| RatFunc::from_int(v)).collect())
            .collect();
        let s = LaurentMatrix::from_columns(&cols)?;
        let d: Vec<RatFunc> = (0..self.n).map(|i| x[(i, i)].clone()).collect();
        let mut c = s.solve(&d).ok_or(Error::Singular)?;
        for &(i, j) in &self.positions {
            c.push(x[(i, j)].clone());
        }
        Ok(ChevalleyElement(c))
    }

    pub fn bracket(&self, u: &ChevalleyElement, v: &ChevalleyElement) -> ChevalleyElement {
        let (a, b) = (self.to_matrix(u), self.to_matrix(v));
        self.from_matrix(&a.mul(&b).sub(&b.mul(&a))).expect("commutators are trace-free")
    }

    fn basis_vector(&self, k: usize) -> ChevalleyElement {
        let mut c = vec![RatFunc::zero(); self.dim()];
        c[k] = RatFunc::one();
        ChevalleyElement(c)
    }

    /// Matrix of `ad(u)` in the Chevalley basis.
    pub fn ad_matrix(&self, u: &ChevalleyElement) -> LaurentMatrix {
        let cols: Vec<Vec<RatFunc>> = (0..self.dim())
            .map(|k| self.bracket(u, &self.basis_vector(k)).0)
            .collect();
        LaurentMatrix::from_columns(&cols).expect("square")
    }

    /// `α(x)` for an apartment point.
    pub fn eval_point(&self, a: usize, x: &ApartmentPoint) -> BigRational {
        self.rs
            .simple_coefficients(a)
            .iter()
            .zip(&x.0)
            .map(|(&c, y)| q(c) * y)
            .sum()
    }

    /// `λ(α) = ⌈α(x)⌉`.
    pub fn parahoric_exponents(&self, x: &ApartmentPoint) -> Result<RootFunction> {
        if x.0.len() != self.rank() {
            return Err(Error::LengthMismatch { expected: self.rank(), found: x.0.len() });
        }
        let vals: Vec<i64> = (0..self.rs.num_roots())
            .map(|a| {
                let c = self.eval_point(a, x).ceil().to_integer();
                i64::try_from(c).expect("small apartment point")
            })
            .collect();
        Ok(RootFunction::new(vals))
    }

    /// `𝔨_x = 𝔞(O) ⊕ ⊕ P_α^{⌈α(x)⌉}`.
    pub fn parahoric_lattice(&self, x: &ApartmentPoint) -> Result<GradedLattice<'_>> {
        Ok(GradedLattice::with_integral_cartan(&self.rs, self.parahoric_exponents(x)?))
    }

    /// The barycenter of the fundamental alcove.
    pub fn barycenter(&self) -> ApartmentPoint {
        let n = self.n as i64;
        ApartmentPoint(vec![BigRational::new(BigInt::one(), BigInt::from(n)); self.rank()])
    }

    pub fn conjugate(&self, g: &LaurentMatrix, u: &ChevalleyElement) -> Result<ChevalleyElement> {
        self.from_matrix(&g.mul(&self.to_matrix(u)).mul(&g.inverse()?))
    }

    /// `g L g⁻¹` in Chevalley coordinates.
    pub fn conjugate_lattice(&self, g: &GroupWord, l: &MatrixLattice) -> Result<MatrixLattice> {
        let gm = g.matrix(self.n)?;
        let gi = gm.inverse()?;
        let cols = l
            .basis()
            .columns()
            .into_iter()
            .map(|c| {
                let x = self.to_matrix(&ChevalleyElement(c));
                Ok(self.from_matrix(&gm.mul(&x).mul(&gi))?.0)
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixLattice::new(LaurentMatrix::from_columns(&cols)?)
    }

    /// `L = (L ∩ 𝔞(F)) ⊕ ⊕_α (L ∩ 𝔤_α(F))`.
    pub fn compatible_with_a(&self, l: &MatrixLattice) -> Result<bool> {
        let d = self.dim();
        let unit = |k: usize| {
            let mut v = vec![RatFunc::zero(); d];
            v[k] = RatFunc::one();
            v
        };
        let mut spaces = vec![Subspace::from_columns(
            &(0..self.rank()).map(unit).collect::<Vec<_>>(),
        )?];
        for a in 0..self.rs.num_roots() {
            spaces.push(Subspace::from_columns(&[unit(self.rank() + a)])?);
        }
        let parts = spaces
            .iter()
            .map(|s| intersect_subspace(l, s))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&MatrixLattice> = parts.iter().collect();
        Ok(direct_sum_equal_many(l, &refs))
    }

    /// `α(u)` for a Cartan element.
    pub fn root_value(&self, a: usize, u: &ChevalleyElement) -> RatFunc {
        let f = root_functional(&self.rs, a);
        let mut acc = RatFunc::zero();
        for (c, h) in f.iter().zip(&u.0[..self.rank()]) {
            if !c.is_zero() {
                acc = &acc + &(&RatFunc::from_rational(c.clone()) * h);
            }
        }
        acc
    }

    pub fn is_cartan(&self, u: &ChevalleyElement) -> bool {
        u.0[self.rank()..].iter().all(|x| x.is_zero())
    }

    /// `α ↦ val α(u)` for a regular Cartan element.
    pub fn valuation_function(&self, u: &ChevalleyElement) -> Result<RootFunction> {
        if !self.is_cartan(u) {
            return Err(Error::Precondition("element is not in the Cartan".into()));
        }
        let vals = (0..self.rs.num_roots())
            .map(|a| {
                self.root_value(a, u)
                    .val_i64()
                    .ok_or_else(|| Error::Precondition("element is not regular".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RootFunction::new(vals))
    }

    /// Cartan element with `val α(u) = r(α)` exactly: `u = Σ ε^i u_i` with
    /// `u_i` a random small-integer vector in `V_i`.
    pub fn stratum_sample<R: Rng>(&self, r: &RootFunction, rng: &mut R) -> Result<ChevalleyElement> {
        let chain = cartan_chain_for(&self.rs, r);
        for _ in 0..100 {
            let mut h: Vec<Vec<(i64, BigRational)>> = vec![Vec::new(); self.rank()];
            for i in chain.start()..=chain.top() {
                let mut v: QVec = vec![BigRational::zero(); self.rank()];
                for b in chain.at(i).basis() {
                    let c = q(rng.gen_range(-3..=3));
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += &c * y;
                    }
                }
                for (j, x) in v.into_iter().enumerate() {
                    h[j].push((i, x));
                }
            }
            let h: Vec<RatFunc> = h.iter().map(|t| RatFunc::laurent(t)).collect();
            let u = self.cartan_element(&h)?;
            if self.valuation_function(&u).is_ok_and(|f| &f == r) {
                return Ok(u);
            }
        }
        Err(Error::SamplingFailed(100))
    }
}

/// Sorted values of `r` followed by `rank` copies of `∞`.
pub fn r_tilde(rs: &RootSystem, r: &RootFunction) -> QTuple {
    let mut v: Vec<ExtRat> = r.values().iter().map(|&x| ExtRat::from_int(x)).collect();
    v.extend(std::iter::repeat_n(ExtRat::Inf, rs.rank()));
    QTuple::sorted(v)
}

/// `μ(ad u, L) ≤ r̃`.
pub fn springer_member(sl: &SlN, u: &ChevalleyElement, l: &MatrixLattice, r: &RootFunction) -> Result<bool> {
    let mu = hodge_point_snf(&sl.ad_matrix(u), l)?;
    dominance_geq(&r_tilde(sl.root_system(), r), &mu)
}

/// The same test in the form `s_i(μ) ≥ r_1 + ... + r_i` for `i ≤ |R|`.
pub fn springer_member_partial_sums(sl: &SlN, u: &ChevalleyElement, l: &MatrixLattice, r: &RootFunction) -> Result<bool> {
    let mu = hodge_point_snf(&sl.ad_matrix(u), l)?;
    let s = mu.partial_sums();
    let t = r_tilde(sl.root_system(), r).partial_sums();
    Ok((1..=r.len()).all(|i| s[i] >= t[i]))
}

/// Finite part of the Newton point of `ad u`.
pub fn nu_finite(sl: &SlN, u: &ChevalleyElement) -> Vec<BigRational> {
    newton_point(&sl.ad_matrix(u))
        .entries()
        .iter()
        .filter_map(|e| e.finite().cloned())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ApartmentTrial {
    pub translation: Vec<i64>,
    pub permutation: Vec<usize>,
    pub member: bool,
    pub termwise_equal: bool,
    pub compatible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OffApartmentTrial {
    pub translation: Vec<i64>,
    pub permutation: Vec<usize>,
    pub root: usize,
    pub valuation: i64,
    pub member: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FibersReport {
    pub seed: u64,
    pub r_prime: Vec<i64>,
    pub bound: i64,
    pub apartment: Vec<ApartmentTrial>,
    pub off_apartment: Vec<OffApartmentTrial>,
    /// Perturbations rejected because the conjugate stayed compatible.
    pub uncertified: usize,
}

impl FibersReport {
    pub fn apartment_members(&self) -> usize {
        self.apartment.iter().filter(|t| t.member).count()
    }

    pub fn off_nonmembers(&self) -> usize {
        self.off_apartment.iter().filter(|t| !t.member).count()
    }

    /// Membership without compatibility contradicts the theorem's
    /// converse direction.
    pub fn companion_failures(&self) -> usize {
        self.apartment.iter().filter(|t| t.member && !t.compatible).count()
    }

    pub fn passed(&self) -> bool {
        self.apartment_members() == self.apartment.len()
            && self.apartment.iter().all(|t| t.termwise_equal)
            && self.off_nonmembers() == self.off_apartment.len()
            && self.companion_failures() == 0
    }
}

fn translations(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0i64; n]];
    for k in 0..n - 1 {
        out = out
            .into_iter()
            .flat_map(|t| {
                (-bound..=bound).map(move |a| {
                    let mut t = t.clone();
                    t[k] = a;
                    t
                })
            })
            .collect();
    }
    out
}

/// Runs both directions of the fiber description for `u ∈ 𝔞(F)_{r'}` with
/// `r̃' = r̃`: every `ε^μ w` with `μ_n = 0`, `|μ|∞ ≤ bound` gives a member,
/// and `trials` certified off-apartment conjugates give non-members.
pub fn fibers_experiment(
    sl: &SlN,
    r: &RootFunction,
    x: &ApartmentPoint,
    u: &ChevalleyElement,
    bound: i64,
    trials: usize,
    seed: u64,
) -> Result<FibersReport> {
    let rs = sl.root_system();
    let r_prime = sl.valuation_function(u)?;
    if r_tilde(rs, &r_prime) != r_tilde(rs, r) {
        return Err(Error::Precondition("u is not in a stratum weakly equivalent to r".into()));
    }
    let kx = sl.parahoric_lattice(x)?.to_matrix_lattice();
    let expected = r_tilde(rs, r);
    let ad = sl.ad_matrix(u);
    let perms = permutations(sl.n());
    let trans = translations(sl.n(), bound);

    let mut apartment = Vec::new();
    for t in &trans {
        for p in &perms {
            let g = GroupWord::identity()
                .then(Generator::EpsDiag(t.clone()))
                .then(Generator::Perm(p.clone()));
            let l = sl.conjugate_lattice(&g, &kx)?;
            let mu = hodge_point_snf(&ad, &l)?;
            apartment.push(ApartmentTrial {
                translation: t.clone(),
                permutation: p.clone(),
                member: dominance_geq(&expected, &mu)?,
                termwise_equal: mu == expected,
                compatible: sl.compatible_with_a(&l)?,
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut off_apartment = Vec::new();
    let mut uncertified = 0;
    while off_apartment.len() < trials {
        if uncertified > 10 * trials.max(1) {
            return Err(Error::SamplingFailed(uncertified));
        }
        let t = trans.choose(&mut rng).unwrap().clone();
        let p = perms.choose(&mut rng).unwrap().clone();
        let a = rng.gen_range(0..rs.num_roots());
        let rep = GroupWord::identity()
            .then(Generator::EpsDiag(t.clone()))
            .then(Generator::Perm(p.clone()));
        // exponent of the root line of the apartment lattice rep·𝔨_x
        let ly = sl.conjugate_lattice(&rep, &kx)?;
        let row = sl.rank() + a;
        let lam = (0..ly.rank())
            .filter_map(|j| ly.basis()[(row, j)].val_i64())
            .min()
            .expect("every root line meets the lattice");
        let v = lam - 1 - rng.gen_range(0..=1);
        let c = *[-3i64, -2, -1, 1, 2, 3].choose(&mut rng).unwrap();
        let (i, j) = sl.positions[a];
        let g = GroupWord::identity()
            .then(Generator::Unipotent { i, j, t: &RatFunc::eps_pow(v) * &RatFunc::from_int(c) })
            .then(Generator::EpsDiag(t.clone()))
            .then(Generator::Perm(p.clone()));
        let l = sl.conjugate_lattice(&g, &kx)?;
        if sl.compatible_with_a(&l)? {
            uncertified += 1;
            continue;
        }
        let mu = hodge_point_snf(&ad, &l)?;
        off_apartment.push(OffApartmentTrial {
            translation: t,
            permutation: p,
            root: a,
            valuation: v,
            member: dominance_geq(&expected, &mu)?,
        });
    }
    Ok(FibersReport {
        seed,
        r_prime: r_prime.values().to_vec(),
        bound,
        apartment,
        off_apartment,
        uncertified,
    })
}
