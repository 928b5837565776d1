//! Root data for the classical types and G2, with Weyl groups and the
//! closure and orthogonality predicates on root subsets.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{qvec_from_ints, rref_rows, QSubspace, QVec};

pub const WEYL_CAP: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    G,
}

impl CartanType {
    pub fn parse(s: &str) -> Result<CartanType> {
        match s.trim() {
            "A" | "a" => Ok(CartanType::A),
            "B" | "b" => Ok(CartanType::B),
            "C" | "c" => Ok(CartanType::C),
            "D" | "d" => Ok(CartanType::D),
            "G" | "g" => Ok(CartanType::G),
            other => Err(Error::UnsupportedRootSystem(other.to_string())),
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            CartanType::A => 'A',
            CartanType::B => 'B',
            CartanType::C => 'C',
            CartanType::D => 'D',
            CartanType::G => 'G',
        };
        write!(f, "{}", c)
    }
}

/// A set of roots of one root system, as a bitmask over root indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSet(pub u128);

impl RootSet {
    pub const EMPTY: RootSet = RootSet(0);

    pub fn full(n: usize) -> RootSet {
        if n == 128 {
            RootSet(u128::MAX)
        } else {
            RootSet((1u128 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> RootSet {
        let mut s = RootSet::EMPTY;
        for i in it {
            s.insert(i);
        }
        s
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: RootSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: RootSet) -> RootSet {
        RootSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..128).filter(move |&i| bits >> i & 1 == 1)
    }
}

/// An integer-valued function on the roots, indexed like `RootSystem::roots`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootFunction {
    values: Vec<i64>,
}

impl RootFunction {
    pub fn new(values: Vec<i64>) -> Self {
        RootFunction { values }
    }

    pub fn constant(rs: &RootSystem, n: i64) -> Self {
        RootFunction {
            values: vec![n; rs.num_roots()],
        }
    }

    pub fn from_fn(rs: &RootSystem, f: impl FnMut(usize) -> i64) -> Self {
        RootFunction {
            values: (0..rs.num_roots()).map(f).collect(),
        }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> i64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn min(&self) -> i64 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    pub fn shift(&self, n: i64) -> Self {
        RootFunction {
            values: self.values.iter().map(|v| v + n).collect(),
        }
    }

    pub fn add(&self, other: &RootFunction) -> Self {
        RootFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RootFunction) -> Self {
        RootFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        RootFunction {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// Super-level set `{α : f(α) ≥ n}`.
    pub fn level_set(&self, n: i64) -> RootSet {
        RootSet::from_indices((0..self.values.len()).filter(|&i| self.values[i] >= n))
    }
}

impl std::ops::Index<usize> for RootFunction {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.values[i]
    }
}

/// A Weyl group element, stored as the permutation it induces on root
/// indices (`perm[j]` is the index of `w(root j)`) and a reduced word
/// `s_{i1} ⋯ s_{ik}` in the simple reflections.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub perm: Vec<u8>,
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn apply(&self, root: usize) -> usize {
        self.perm[root] as usize
    }

    pub fn inverse_perm(&self) -> Vec<u8> {
        let mut inv = vec![0u8; self.perm.len()];
        for (j, &p) in self.perm.iter().enumerate() {
            inv[p as usize] = j as u8;
        }
        inv
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan_type: CartanType,
    rank: usize,
    ambient_dim: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<QVec>,
    norms: Vec<i64>,
    simple: Vec<usize>,
    neg: Vec<usize>,
    pairing: Vec<Vec<i64>>,
    sum_table: Vec<Vec<Option<usize>>>,
    simple_coeffs: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

fn unit(n: usize, i: usize, c: i64) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = c;
    v
}

fn add_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn classical_roots(ty: CartanType, n: usize) -> (usize, Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut roots = Vec::new();
    let mut simple = Vec::new();
    match ty {
        CartanType::A => {
            let m = n + 1;
            for i in 0..m {
                for j in 0..m {
                    if i != j {
                        roots.push(add_vec(&unit(m, i, 1), &unit(m, j, -1)));
                    }
                }
            }
            for i in 0..n {
                simple.push(add_vec(&unit(m, i, 1), &unit(m, i + 1, -1)));
            }
            (m, roots, simple)
        }
        CartanType::B | CartanType::C | CartanType::D => {
            for i in 0..n {
                for j in i + 1..n {
                    for (a, b) in [(1, -1), (-1, 1), (1, 1), (-1, -1)] {
                        roots.push(add_vec(&unit(n, i, a), &unit(n, j, b)));
                    }
                }
            }
            let short = match ty {
                CartanType::B => 1,
                CartanType::C => 2,
                _ => 0,
            };
            if short != 0 {
                for i in 0..n {
                    roots.push(unit(n, i, short));
                    roots.push(unit(n, i, -short));
                }
            }
            for i in 0..n - 1 {
                simple.push(add_vec(&unit(n, i, 1), &unit(n, i + 1, -1)));
            }
            if short != 0 {
                simple.push(unit(n, n - 1, short));
            } else {
                simple.push(add_vec(&unit(n, n - 2, 1), &unit(n, n - 1, 1)));
            }
            (n, roots, simple)
        }
        CartanType::G => {
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        roots.push(add_vec(&unit(3, i, 1), &unit(3, j, -1)));
                    }
                }
            }
            for i in 0..3 {
                let mut v = vec![-1; 3];
                v[i] = 2;
                roots.push(v.clone());
                roots.push(v.iter().map(|x| -x).collect());
            }
            simple.push(vec![1, -1, 0]);
            simple.push(vec![-2, 1, 1]);
            (3, roots, simple)
        }
    }
}

impl RootSystem {
    pub fn build(ty: CartanType, rank: usize) -> Result<RootSystem> {
        let ok = match ty {
            CartanType::A => (1..=6).contains(&rank),
            CartanType::B | CartanType::C => (2..=4).contains(&rank),
            CartanType::D => rank == 4,
            CartanType::G => rank == 2,
        };
        if !ok {
            return Err(Error::UnsupportedRootSystem(format!("{}{}", ty, rank)));
        }
        let (ambient_dim, roots, simple_vecs) = classical_roots(ty, rank);
        let index: HashMap<Vec<i64>, usize> =
            roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        let simple = simple_vecs.iter().map(|s| index[s]).collect();
        let norms: Vec<i64> = roots.iter().map(|r| dot(r, r)).collect();
        let coroots = roots
            .iter()
            .zip(&norms)
            .map(|(r, &nn)| {
                r.iter()
                    .map(|&x| BigRational::new(BigInt::from(2 * x), BigInt::from(nn)))
                    .collect()
            })
            .collect();
        let neg = roots
            .iter()
            .map(|r| index[&r.iter().map(|x| -x).collect::<Vec<_>>()])
            .collect();
        let pairing = roots
            .iter()
            .map(|b| {
                roots
                    .iter()
                    .zip(&norms)
                    .map(|(a, &nn)| 2 * dot(b, a) / nn)
                    .collect()
            })
            .collect();
        let sum_table = roots
            .iter()
            .map(|a| roots.iter().map(|b| index.get(&add_vec(a, b)).copied()).collect())
            .collect();
        let mut rs = RootSystem {
            cartan_type: ty,
            rank,
            ambient_dim,
            roots,
            coroots,
            norms,
            simple,
            neg,
            pairing,
            sum_table,
            simple_coeffs: Vec::new(),
            index,
        };
        rs.simple_coeffs = (0..rs.roots.len()).map(|i| rs.solve_simple(i)).collect();
        Ok(rs)
    }

    fn solve_simple(&self, i: usize) -> Vec<i64> {
        let k = self.rank;
        let mut rows: Vec<QVec> = (0..self.ambient_dim)
            .map(|c| {
                let mut row: Vec<i64> = self.simple.iter().map(|&s| self.roots[s][c]).collect();
                row.push(self.roots[i][c]);
                qvec_from_ints(&row)
            })
            .collect();
        let pivots = rref_rows(&mut rows, k + 1);
        assert!(pivots.len() == k && pivots.iter().all(|&p| p < k));
        rows.iter()
            .map(|r| {
                let c = &r[k];
                assert!(c.is_integer());
                i64::try_from(c.to_integer()).expect("small coefficient")
            })
            .collect()
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.cartan_type, self.rank)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    pub fn coroot(&self, i: usize) -> &[BigRational] {
        &self.coroots[i]
    }

    pub fn norm(&self, i: usize) -> i64 {
        self.norms[i]
    }

    pub fn simple_roots(&self) -> &[usize] {
        &self.simple
    }

    pub fn neg(&self, i: usize) -> usize {
        self.neg[i]
    }

    /// `⟨β, α^∨⟩` for root indices `b`, `a`.
    pub fn pairing(&self, b: usize, a: usize) -> i64 {
        self.pairing[b][a]
    }

    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        self.sum_table[a][b]
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn simple_coefficients(&self, i: usize) -> &[i64] {
        &self.simple_coeffs[i]
    }

    pub fn is_positive(&self, i: usize) -> bool {
        self.simple_coeffs[i].iter().all(|&c| c >= 0)
    }

    pub fn positive_roots(&self) -> RootSet {
        RootSet::from_indices((0..self.num_roots()).filter(|&i| self.is_positive(i)))
    }

    pub fn all_roots(&self) -> RootSet {
        RootSet::full(self.num_roots())
    }

    /// Neither `a + b` nor `a - b` lies in `R ∪ {0}`.
    pub fn strongly_orthogonal(&self, a: usize, b: usize) -> bool {
        a != b
            && self.neg[a] != b
            && self.sum_table[a][b].is_none()
            && self.sum_table[a][self.neg[b]].is_none()
    }

    /// `⟨β, α^∨⟩ = 0`.
    pub fn orthogonal(&self, a: usize, b: usize) -> bool {
        self.pairing[b][a] == 0
    }

    pub fn perp(&self, s: RootSet) -> RootSet {
        RootSet::from_indices(
            (0..self.num_roots()).filter(|&b| s.iter().all(|a| self.strongly_orthogonal(a, b))),
        )
    }

    pub fn is_z_closed(&self, s: RootSet) -> bool {
        s.iter().all(|a| {
            s.iter()
                .all(|b| self.sum_table[a][b].is_none_or(|c| s.contains(c)))
        })
    }

    pub fn span(&self, s: RootSet) -> QSubspace {
        let vecs: Vec<QVec> = s.iter().map(|i| qvec_from_ints(&self.roots[i])).collect();
        QSubspace::span(&vecs, self.ambient_dim)
    }

    /// `R ∩ span_Q(S) = S`.
    pub fn is_q_closed(&self, s: RootSet) -> bool {
        let sp = self.span(s);
        (0..self.num_roots()).all(|i| sp.contains(&qvec_from_ints(&self.roots[i])) == s.contains(i))
    }

    pub fn negate_set(&self, s: RootSet) -> RootSet {
        RootSet::from_indices(s.iter().map(|i| self.neg[i]))
    }

    pub fn is_symmetric(&self, s: RootSet) -> bool {
        self.negate_set(s) == s
    }

    /// All Q-closed symmetric subsets (root systems of standard and
    /// non-standard Levi subgroups containing the torus).
    pub fn levi_subsets(&self) -> Vec<RootSet> {
        let mut seen = std::collections::BTreeSet::new();
        let mut frontier = vec![RootSet::EMPTY];
        seen.insert(RootSet::EMPTY);
        while let Some(s) = frontier.pop() {
            for i in 0..self.num_roots() {
                if s.contains(i) {
                    continue;
                }
                let sp = self.span(s.union(RootSet::from_indices([i])));
                let t = RootSet::from_indices(
                    (0..self.num_roots()).filter(|&j| sp.contains(&qvec_from_ints(&self.roots[j]))),
                );
                if seen.insert(t) {
                    frontier.push(t);
                }
            }
        }
        seen.into_iter().collect()
    }

    fn reflection_perm(&self, a: usize) -> Vec<u8> {
        (0..self.num_roots())
            .map(|b| {
                let c = self.pairing[b][a];
                let v: Vec<i64> = self.roots[b]
                    .iter()
                    .zip(&self.roots[a])
                    .map(|(x, y)| x - c * y)
                    .collect();
                self.index[&v] as u8
            })
            .collect()
    }

    /// Breadth-first enumeration of the Weyl group; words are reduced.
    pub fn weyl_elements(&self, cap: usize) -> Result<Vec<WeylElement>> {
        let gens: Vec<Vec<u8>> = self.simple.iter().map(|&s| self.reflection_perm(s)).collect();
        let id = WeylElement {
            perm: (0..self.num_roots() as u8).collect(),
            word: Vec::new(),
        };
        let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut out = vec![id.clone()];
        seen.insert(id.perm.clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for (i, g) in gens.iter().enumerate() {
                let w = &out[k];
                let perm: Vec<u8> = g.iter().map(|&j| w.perm[j as usize]).collect();
                if seen.contains_key(&perm) {
                    continue;
                }
                if out.len() >= cap {
                    return Err(Error::WeylCapExceeded(cap));
                }
                let mut word = w.word.clone();
                word.push(i);
                seen.insert(perm.clone(), out.len());
                out.push(WeylElement { perm, word });
                queue.push_back(out.len() - 1);
            }
        }
        Ok(out)
    }

    pub fn reflect_simple(&self, i: usize, v: &[BigRational]) -> QVec {
        let a = self.simple[i];
        let c: BigRational = v
            .iter()
            .zip(&self.coroots[a])
            .map(|(x, y)| x * y)
            .sum();
        v.iter()
            .zip(&self.roots[a])
            .map(|(x, &y)| x - &c * BigRational::from_integer(y.into()))
            .collect()
    }

    /// `w(v)` for a vector of the ambient space.
    pub fn act_vector(&self, w: &WeylElement, v: &[BigRational]) -> QVec {
        let mut out = v.to_vec();
        for &i in w.word.iter().rev() {
            out = self.reflect_simple(i, &out);
        }
        out
    }

    /// `(wf)(α) = f(w⁻¹α)`.
    pub fn act_function(&self, w: &WeylElement, f: &RootFunction) -> RootFunction {
        let mut values = vec![0; f.len()];
        for (j, &p) in w.perm.iter().enumerate() {
            values[p as usize] = f[j];
        }
        RootFunction::new(values)
    }

    pub fn act_set(&self, w: &WeylElement, s: RootSet) -> RootSet {
        RootSet::from_indices(s.iter().map(|i| w.apply(i)))
    }

    /// `⟨α, v⟩` for an ambient vector `v`, as a rational.
    pub fn eval_root(&self, a: usize, v: &[BigRational]) -> BigRational {
        self.roots[a]
            .iter()
            .zip(v)
            .filter(|(x, _)| **x != 0)
            .map(|(&x, y)| BigRational::from_integer(x.into()) * y)
            .sum()
    }

    /// Projection of an ambient vector onto the span of the roots.
    pub fn project_to_span(&self, v: &[BigRational]) -> QVec {
        match self.cartan_type {
            CartanType::A | CartanType::G => {
                let n = BigRational::from_integer(BigInt::from(v.len() as i64));
                let mean: BigRational = v.iter().sum::<BigRational>() / n;
                v.iter().map(|x| x - &mean).collect()
            }
            _ => v.to_vec(),
        }
    }

    pub fn root_string(&self, i: usize) -> String {
        format!("{:?}", self.roots[i])
    }
}

/// True when every coordinate is non-negative.
pub fn is_nonneg(v: &[BigRational]) -> bool {
    v.iter().all(|x| !x.is_negative())
}

pub fn is_zero_vec(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_zero())
}
