//! Newton and Hodge points of endomorphisms of F^d, the Mazur inequality and
//! the linear Hodge-Newton decomposition, with the lattice algebra they use.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::base_field::{dominance_geq, ExtRat, QTuple, RatFunc};
use crate::error::{Error, Result};
use crate::faults::{self, Fault};
use crate::linalg::{combinations, smith_valuations, LaurentMatrix};

/// Largest dimension for which Hodge points are computed from minors.
pub const MINOR_LIMIT: usize = 8;

/// Coefficients `a_0, ..., a_d` of `det(x - T)`, by Faddeev-LeVerrier.
pub fn char_poly(t: &LaurentMatrix) -> Vec<RatFunc> {
    assert!(t.is_square());
    let n = t.rows();
    let mut coeffs = vec![RatFunc::zero(); n + 1];
    coeffs[n] = RatFunc::one();
    let mut m = LaurentMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = t.mul(&m);
        for i in 0..n {
            next[(i, i)] = &next[(i, i)] + &coeffs[n - k + 1];
        }
        m = next;
        let tr = t.mul(&m).trace();
        coeffs[n - k] = -(&tr * &RatFunc::from_rational(BigRational::new(
            BigInt::from(1),
            BigInt::from(k as i64),
        )));
    }
    coeffs
}

/// Root valuations of a polynomial `Σ a_i x^i` read off its Newton polygon,
/// sorted. Roots at zero contribute `INFINITY`.
pub fn newton_slopes(coeffs: &[RatFunc]) -> QTuple {
    let d = coeffs.len() - 1;
    let m = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
    let pts: Vec<(i64, BigRational)> = (m..=d)
        .filter_map(|i| {
            coeffs[i]
                .val_i64()
                .map(|v| (i as i64, BigRational::from_integer(BigInt::from(v))))
        })
        .collect();
    // lower convex hull, left to right
    let mut hull: Vec<(i64, BigRational)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (x1, y1) = &hull[hull.len() - 2];
            let (x2, y2) = &hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            let lhs = (y2 - y1) * BigInt::from(p.0 - x1);
            let rhs = (&p.1 - y1) * BigInt::from(x2 - x1);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = vec![ExtRat::Inf; m];
    for w in hull.windows(2) {
        let (x1, y1) = &w[0];
        let (x2, y2) = &w[1];
        let slope = (y2 - y1) / BigInt::from(x2 - x1);
        for _ in 0..(x2 - x1) {
            out.push(ExtRat::Fin(-slope.clone()));
        }
    }
    QTuple::sorted(out)
}

pub fn newton_point(t: &LaurentMatrix) -> QTuple {
    if t.rows() == 0 {
        return QTuple::sorted(Vec::new());
    }
    newton_slopes(&char_poly(t))
}

/// A lattice in F^d: the O-span of the columns of a full-column-rank basis.
#[derive(Clone, Debug)]
pub struct MatrixLattice {
    basis: LaurentMatrix,
}

impl MatrixLattice {
    pub fn new(basis: LaurentMatrix) -> Result<Self> {
        if basis.rank() != basis.cols() {
            return Err(Error::Singular);
        }
        Ok(MatrixLattice { basis })
    }

    pub fn standard(d: usize) -> Self {
        MatrixLattice {
            basis: LaurentMatrix::identity(d),
        }
    }

    pub fn basis(&self) -> &LaurentMatrix {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_full(&self) -> bool {
        self.basis.is_square()
    }

    /// Coordinates of `v` in the basis, when `v` lies in the F-span.
    pub fn coordinates(&self, v: &[RatFunc]) -> Option<Vec<RatFunc>> {
        self.basis.solve(v)
    }

    pub fn contains(&self, v: &[RatFunc]) -> bool {
        self.coordinates(v)
            .is_some_and(|c| c.iter().all(|x| x.is_integral()))
    }

    pub fn contains_lattice(&self, other: &MatrixLattice) -> bool {
        other.basis.columns().iter().all(|c| self.contains(c))
    }

    pub fn same_as(&self, other: &MatrixLattice) -> bool {
        self.rank() == other.rank() && self.contains_lattice(other) && other.contains_lattice(self)
    }

    /// `gL`.
    pub fn transform(&self, g: &LaurentMatrix) -> MatrixLattice {
        MatrixLattice {
            basis: g.mul(&self.basis),
        }
    }

    /// The matrix of `t` in the basis of a full lattice.
    pub fn matrix_of(&self, t: &LaurentMatrix) -> Result<LaurentMatrix> {
        let inv = self.basis.inverse()?;
        Ok(inv.mul(t).mul(&self.basis))
    }
}

/// An F-subspace of F^d, stored with the reduced column echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: LaurentMatrix,
}

impl Subspace {
    pub fn span(vectors: &LaurentMatrix) -> Subspace {
        let (r, piv) = vectors.transpose().rref();
        let rows: Vec<usize> = (0..piv.len()).collect();
        let cols: Vec<usize> = (0..vectors.rows()).collect();
        Subspace {
            basis: r.submatrix(&rows, &cols).transpose(),
        }
    }

    pub fn from_columns(cols: &[Vec<RatFunc>]) -> Result<Subspace> {
        Ok(Subspace::span(&LaurentMatrix::from_columns(cols)?))
    }

    pub fn basis(&self) -> &LaurentMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn contains(&self, v: &[RatFunc]) -> bool {
        if self.dim() == 0 {
            return v.iter().all(|x| x.is_zero());
        }
        self.basis.solve(v).is_some()
    }

    /// Matrix of `t` restricted to this subspace, when it is `t`-stable.
    pub fn restrict(&self, t: &LaurentMatrix) -> Option<LaurentMatrix> {
        if self.dim() == 0 {
            return Some(LaurentMatrix::zeros(0, 0));
        }
        self.basis.solve_matrix(&t.mul(&self.basis))
    }
}

/// Minimal valuations of the `i × i` minors, `i = 0..=d`.
pub fn minor_valuations(m: &LaurentMatrix) -> Vec<ExtRat> {
    // unit row scalings leave every minor valuation unchanged
    let m = &m.clear_denominators().0;
    let n = m.rows().min(m.cols());
    let mut s = vec![ExtRat::zero()];
    for i in 1..=n {
        let rows = combinations(m.rows(), i);
        let cols = combinations(m.cols(), i);
        let mut best = ExtRat::Inf;
        for r in &rows {
            for c in &cols {
                let v = m.submatrix(r, c).det().val();
                if v < best {
                    best = v;
                }
            }
        }
        s.push(best);
    }
    if faults::active(Fault::MinorPartialSums) && n > 0 {
        s[1] = &s[1] + &ExtRat::from_int(1);
    }
    s
}

fn differences(s: &[ExtRat]) -> QTuple {
    let mut out = Vec::with_capacity(s.len() - 1);
    for w in s.windows(2) {
        out.push(match (&w[0], &w[1]) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => ExtRat::Fin(b - a),
            _ => ExtRat::Inf,
        });
    }
    // a faulted partial-sum table need not be convex
    QTuple::new(out.clone()).unwrap_or_else(|_| QTuple::sorted(out))
}

/// Hodge point from minor valuations of the matrix of `t` in a basis of `l`.
pub fn hodge_point_minors(t: &LaurentMatrix, l: &MatrixLattice) -> Result<QTuple> {
    let m = l.matrix_of(t)?;
    Ok(differences(&minor_valuations(&m)))
}

/// Hodge point from the elementary divisors over O.
pub fn hodge_point_snf(t: &LaurentMatrix, l: &MatrixLattice) -> Result<QTuple> {
    let m = l.matrix_of(t)?;
    Ok(smith_valuations(&m))
}

/// `μ(T, Λ)`: minors up to dimension `MINOR_LIMIT`, elementary divisors
/// beyond.
pub fn hodge_point(t: &LaurentMatrix, l: &MatrixLattice) -> Result<QTuple> {
    if t.rows() <= MINOR_LIMIT {
        hodge_point_minors(t, l)
    } else {
        hodge_point_snf(t, l)
    }
}

/// `ν(T) ≤ μ(T, Λ)`.
pub fn mazur_check(t: &LaurentMatrix, l: &MatrixLattice) -> Result<bool> {
    dominance_geq(&hodge_point(t, l)?, &newton_point(t))
}

pub fn lattice_member(v: &[RatFunc], l: &MatrixLattice) -> bool {
    l.contains(v)
}

/// `Λ ∩ U` for a full lattice `Λ`. The coordinates of `U` in the basis of
/// `Λ` are brought to the shape `[I; 0]` by row operations over O and
/// column operations over F; the accumulated column operations then give an
/// O-basis of the intersection.
pub fn intersect_subspace(l: &MatrixLattice, u: &Subspace) -> Result<MatrixLattice> {
    if !l.is_full() {
        return Err(Error::Dimension("intersection needs a full lattice".into()));
    }
    let m = u.dim();
    if m == 0 {
        return Ok(MatrixLattice {
            basis: LaurentMatrix::zeros(l.ambient_dim(), 0),
        });
    }
    let mut c = l.basis().inverse()?.mul(u.basis());
    let d = c.rows();
    let mut q = LaurentMatrix::identity(m);
    for k in 0..m {
        for i in 0..k {
            if !c[(i, k)].is_zero() {
                let f = -c[(i, k)].clone();
                c.add_col_multiple(k, i, &f);
                q.add_col_multiple(k, i, &f);
            }
        }
        let mut best: Option<(i64, usize)> = None;
        for i in k..d {
            if let Some(v) = c[(i, k)].val_i64() {
                if best.is_none_or(|(bv, _)| v < bv) {
                    best = Some((v, i));
                }
            }
        }
        let (_, p) = best.ok_or(Error::Singular)?;
        c.swap_rows(k, p);
        let inv = c[(k, k)].inv();
        c.scale_col(k, &inv);
        q.scale_col(k, &inv);
        for i in k + 1..d {
            if !c[(i, k)].is_zero() {
                let f = -c[(i, k)].clone();
                c.add_row_multiple(i, k, &f);
            }
        }
    }
    MatrixLattice::new(u.basis().mul(&q))
}

/// `Λ = L_1 ⊕ ... ⊕ L_k`: ranks add up to rank Λ, the sum is direct, and
/// the two lattices contain each other.
pub fn direct_sum_equal_many(l: &MatrixLattice, parts: &[&MatrixLattice]) -> bool {
    let total: usize = parts.iter().map(|p| p.rank()).sum();
    if total != l.rank() {
        return false;
    }
    let mut cols = Vec::with_capacity(total);
    for p in parts {
        cols.extend(p.basis().columns());
    }
    let Ok(b) = LaurentMatrix::from_columns(&cols) else {
        return false;
    };
    let Ok(sum) = MatrixLattice::new(b) else {
        return false;
    };
    sum.contains_lattice(l) && l.contains_lattice(&sum)
}

pub fn direct_sum_equal(l: &MatrixLattice, l1: &MatrixLattice, l2: &MatrixLattice) -> bool {
    direct_sum_equal_many(l, &[l1, l2])
}

/// Verifies every hypothesis of the linear Hodge-Newton decomposition.
pub fn hn_hypotheses(
    t: &LaurentMatrix,
    l: &MatrixLattice,
    u: &Subspace,
    w: &Subspace,
) -> Result<()> {
    let d = t.rows();
    let fail = |m: &str| Err(Error::Precondition(m.to_string()));
    if u.dim() + w.dim() != d || u.basis().hcat(w.basis()).rank() != d {
        return fail("U and W are not complementary");
    }
    let (Some(tu), Some(tw)) = (u.restrict(t), w.restrict(t)) else {
        return fail("U or W is not T-stable");
    };
    let nu_u = newton_point(&tu);
    let nu_w = newton_point(&tw);
    if let (Some(a), Some(b)) = (nu_u.entries().last(), nu_w.entries().first()) {
        if a >= b {
            return fail("slopes on U are not all below the slopes on W");
        }
    }
    let r = u.dim();
    let mu = hodge_point(t, l)?.partial_sums();
    let nu = newton_point(t).partial_sums();
    if mu[r] != nu[r] {
        return fail(&format!(
            "Hodge and Newton partial sums differ at r = {}: {} vs {}",
            r, mu[r], nu[r]
        ));
    }
    Ok(())
}

/// `Λ = (Λ ∩ U) ⊕ (Λ ∩ W)`, after the hypotheses have been verified.
pub fn hn_decompose_check(
    t: &LaurentMatrix,
    l: &MatrixLattice,
    u: &Subspace,
    w: &Subspace,
) -> Result<bool> {
    hn_hypotheses(t, l, u, w)?;
    splits(l, u, w)
}

/// `Λ = (Λ ∩ U) ⊕ (Λ ∩ W)`, without hypotheses.
pub fn splits(l: &MatrixLattice, u: &Subspace, w: &Subspace) -> Result<bool> {
    let lu = intersect_subspace(l, u)?;
    let lw = intersect_subspace(l, w)?;
    Ok(direct_sum_equal(l, &lu, &lw))
}

/// `(1 - T)Λ = Λ` for `TΛ ⊆ Λ` with all slopes positive.
pub fn one_minus_t_check(t: &LaurentMatrix, l: &MatrixLattice) -> Result<bool> {
    let m = l.matrix_of(t)?;
    if !m.is_integral() {
        return Err(Error::Precondition("T does not preserve the lattice".into()));
    }
    if newton_point(t).entries().iter().any(|s| *s <= ExtRat::zero()) {
        return Err(Error::Precondition("T has a slope <= 0".into()));
    }
    let a = LaurentMatrix::identity(t.rows()).sub(&m);
    let Ok(ainv) = a.inverse() else {
        return Ok(false);
    };
    Ok(a.is_integral() && ainv.is_integral())
}

/// The first `i` Hodge partial sums of `T + cI` agree with those of `T` for
/// `c = (k+1) ε^(N+k)`, `k < trials`, with `N` past every finite slope
/// involved.
pub fn perturbation_stability(
    t: &LaurentMatrix,
    l: &MatrixLattice,
    i: usize,
    trials: usize,
) -> Result<bool> {
    let m = l.matrix_of(t)?;
    let s = minor_valuations(&m);
    if i >= s.len() || !s[i].is_finite() {
        return Err(Error::Precondition(format!("partial sum {} is infinite", i)));
    }
    let bound = |e: &ExtRat| e.to_i64().map_or(0, |v| v.abs());
    let mu = differences(&s);
    let n = 1 + s[..=i].iter().map(bound).max().unwrap_or(0)
        + mu.entries()[..i].iter().map(bound).max().unwrap_or(0);
    for k in 0..trials {
        let c = &RatFunc::eps_pow(n + k as i64) * &RatFunc::from_int(k as i64 + 1);
        let mut tp = t.clone();
        for j in 0..t.rows() {
            tp[(j, j)] = &tp[(j, j)] + &c;
        }
        let sp = minor_valuations(&l.matrix_of(&tp)?);
        if sp[..=i] != s[..=i] {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_field::parse_ratfunc;

    fn m(rows: &[&[&str]]) -> LaurentMatrix {
        LaurentMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| parse_ratfunc(s).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn q(v: &[Option<(i64, i64)>]) -> QTuple {
        QTuple::new(
            v.iter()
                .map(|x| x.map_or(ExtRat::Inf, |(p, q)| ExtRat::from_frac(p, q)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn newton_examples() {
        assert_eq!(newton_point(&m(&[&["e", "0"], &["0", "e^2"]])), QTuple::from_ints(&[1, 2]));
        assert_eq!(newton_point(&m(&[&["0", "1"], &["0", "0"]])), q(&[None, None]));
        assert_eq!(
            newton_point(&m(&[&["0", "e"], &["1", "0"]])),
            q(&[Some((1, 2)), Some((1, 2))])
        );
    }

    #[test]
    fn hodge_examples() {
        let o2 = MatrixLattice::standard(2);
        let t = m(&[&["e^2", "0"], &["0", "e^-1"]]);
        assert_eq!(hodge_point(&t, &o2).unwrap(), QTuple::from_ints(&[-1, 2]));
        let n = m(&[&["0", "1"], &["0", "0"]]);
        assert_eq!(hodge_point(&n, &o2).unwrap(), q(&[Some((0, 1)), None]));
        let l = MatrixLattice::new(m(&[&["1", "1"], &["0", "e^-1"]])).unwrap();
        let t = m(&[&["e", "0"], &["0", "e^3"]]);
        assert_eq!(hodge_point_minors(&t, &l).unwrap(), QTuple::from_ints(&[1, 3]));
        assert_eq!(hodge_point_snf(&t, &l).unwrap(), QTuple::from_ints(&[1, 3]));
        assert!(mazur_check(&t, &l).unwrap());
        assert!(mazur_check(&n, &o2).unwrap());
    }

    #[test]
    fn membership_and_intersection() {
        let o2 = MatrixLattice::standard(2);
        let one = parse_ratfunc("1").unwrap();
        let zero = RatFunc::zero();
        assert!(lattice_member(&[one.clone(), zero.clone()], &o2));
        assert!(!lattice_member(&[RatFunc::eps_pow(-1), zero.clone()], &o2));
        let l = MatrixLattice::new(m(&[&["1", "1"], &["0", "e^-1"]])).unwrap();
        let u = Subspace::from_columns(&[vec![one.clone(), zero.clone()]]).unwrap();
        let lu = intersect_subspace(&l, &u).unwrap();
        let expect = MatrixLattice::new(m(&[&["1"], &["0"]])).unwrap();
        assert!(lu.same_as(&expect));
    }

    #[test]
    fn decomposition_examples() {
        let one = RatFunc::one();
        let zero = RatFunc::zero();
        let u = Subspace::from_columns(&[vec![one.clone(), zero.clone()]]).unwrap();
        let w = Subspace::from_columns(&[vec![zero.clone(), one.clone()]]).unwrap();
        let t = m(&[&["e", "0"], &["0", "e^3"]]);
        let good = MatrixLattice::new(m(&[&["1", "1"], &["0", "e^-1"]])).unwrap();
        assert!(hn_decompose_check(&t, &good, &u, &w).unwrap());
        let bad = MatrixLattice::new(m(&[&["1", "e^-1"], &["0", "1"]])).unwrap();
        assert!(matches!(
            hn_decompose_check(&t, &bad, &u, &w),
            Err(Error::Precondition(_))
        ));
        assert!(!splits(&bad, &u, &w).unwrap());
    }

    #[test]
    fn one_minus_t_examples() {
        let o2 = MatrixLattice::standard(2);
        assert!(one_minus_t_check(&m(&[&["e", "0"], &["0", "e^2"]]), &o2).unwrap());
        assert!(one_minus_t_check(&m(&[&["1", "0"], &["0", "e"]]), &o2).is_err());
        let o3 = MatrixLattice::standard(3);
        let t = m(&[&["e", "2*e", "0"], &["-e", "0", "3*e"], &["e", "e", "e"]]);
        assert!(one_minus_t_check(&t, &o3).unwrap());
    }

    #[test]
    fn perturbation_examples() {
        let o2 = MatrixLattice::standard(2);
        assert!(perturbation_stability(&m(&[&["e", "0"], &["0", "e^-2"]]), &o2, 2, 3).unwrap());
        assert!(perturbation_stability(&m(&[&["0", "1"], &["0", "0"]]), &o2, 1, 3).unwrap());
        assert!(perturbation_stability(&LaurentMatrix::zeros(2, 2), &o2, 1, 3).is_err());
    }
}
