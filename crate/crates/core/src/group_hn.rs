//! The group-theoretic Hodge-Newton decomposition for GL_n.
//!
//! The standard Borel subgroup is lower triangular, so non-decreasing
//! coweights are dominant. A standard parabolic `P = MN` is block lower
//! triangular for an ordered block decomposition; `M` is block diagonal and
//! `N` is the block strictly lower part.

use serde::Serialize;

use crate::base_field::{dominance_geq, ExtRat, QTuple, RatFunc};
use crate::error::{Error, Result};
use crate::hodge_newton::{
    direct_sum_equal_many, intersect_subspace, newton_point, MatrixLattice, Subspace,
};
use crate::linalg::{smith_valuations, LaurentMatrix};

pub type Coweight = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockLevi {
    sizes: Vec<usize>,
}

impl BlockLevi {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Precondition("block sizes must be positive".into()));
        }
        Ok(BlockLevi { sizes })
    }

    pub fn torus(n: usize) -> Self {
        BlockLevi { sizes: vec![1; n] }
    }

    pub fn whole(n: usize) -> Self {
        BlockLevi { sizes: vec![n] }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn range(&self, block: usize) -> std::ops::Range<usize> {
        let start: usize = self.sizes[..block].iter().sum();
        start..start + self.sizes[block]
    }

    pub fn block_of(&self, i: usize) -> usize {
        let mut acc = 0;
        for (b, s) in self.sizes.iter().enumerate() {
            acc += s;
            if i < acc {
                return b;
            }
        }
        panic!("index {} outside the block decomposition", i)
    }

    pub fn is_block_diagonal(&self, g: &LaurentMatrix) -> bool {
        (0..g.rows()).all(|i| {
            (0..g.cols()).all(|j| self.block_of(i) == self.block_of(j) || g[(i, j)].is_zero())
        })
    }

    pub fn block(&self, g: &LaurentMatrix, i: usize, j: usize) -> LaurentMatrix {
        let r: Vec<usize> = self.range(i).collect();
        let c: Vec<usize> = self.range(j).collect();
        g.submatrix(&r, &c)
    }

    /// Coordinate subspace spanned by the basis vectors of one block.
    pub fn block_subspace(&self, block: usize) -> Subspace {
        let n = self.n();
        let cols: Vec<Vec<RatFunc>> = self
            .range(block)
            .map(|i| {
                let mut v = vec![RatFunc::zero(); n];
                v[i] = RatFunc::one();
                v
            })
            .collect();
        Subspace::from_columns(&cols).expect("nonempty block")
    }
}

fn ints(t: &QTuple) -> Result<Coweight> {
    t.entries()
        .iter()
        .map(|e| e.to_i64().ok_or(Error::Singular))
        .collect()
}

/// Invariant factors of `g` relative to `O^n`, non-decreasing.
pub fn cartan(g: &LaurentMatrix) -> Result<Coweight> {
    if !g.is_square() {
        return Err(Error::Dimension("cartan of non-square matrix".into()));
    }
    ints(&smith_valuations(g))
}

/// Which unipotent radical the Iwasawa decomposition uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Upper,
    Lower,
}

/// A Borel subgroup `wBw⁻¹` with `B` the upper or lower triangular Borel;
/// `perm[j]` is the image of `e_j` under `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorelChoice {
    pub orientation: Orientation,
    pub perm: Vec<usize>,
}

impl BorelChoice {
    pub fn standard(n: usize, orientation: Orientation) -> Self {
        BorelChoice {
            orientation,
            perm: (0..n).collect(),
        }
    }

    pub fn matrix(&self) -> LaurentMatrix {
        let n = self.perm.len();
        let mut m = LaurentMatrix::zeros(n, n);
        for (j, &p) in self.perm.iter().enumerate() {
            m[(p, j)] = RatFunc::one();
        }
        m
    }
}

/// `g = k · ε^μ · u` with `k ∈ GL_n(O)` and `u` unipotent of the given
/// orientation.
#[derive(Clone, Debug)]
pub struct Iwasawa {
    pub k: LaurentMatrix,
    pub mu: Coweight,
    pub u: LaurentMatrix,
}

impl Iwasawa {
    /// Multiplies back and checks each factor.
    pub fn verify(&self, g: &LaurentMatrix, orientation: Orientation) -> bool {
        let n = g.rows();
        let unipotent = (0..n).all(|i| {
            (0..n).all(|j| {
                let x = &self.u[(i, j)];
                if i == j {
                    x.is_one()
                } else if (i < j) == (orientation == Orientation::Upper) {
                    true
                } else {
                    x.is_zero()
                }
            })
        });
        let k_ok = self.k.is_integral()
            && self.k.inverse().is_ok_and(|ki| ki.is_integral());
        let prod = self.k.mul(&LaurentMatrix::eps_diag(&self.mu)).mul(&self.u);
        unipotent && k_ok && prod.sub(g).is_zero()
    }
}

/// Row reduction over O to triangular shape; the diagonal valuations are
/// the retraction.
pub fn iwasawa(g: &LaurentMatrix, orientation: Orientation) -> Result<Iwasawa> {
    let n = g.rows();
    if !g.is_square() {
        return Err(Error::Dimension("non-square matrix".into()));
    }
    let mut r = g.clone();
    let order: Vec<usize> = match orientation {
        Orientation::Upper => (0..n).collect(),
        Orientation::Lower => (0..n).rev().collect(),
    };
    for (step, &c) in order.iter().enumerate() {
        let free: Vec<usize> = order[step..].to_vec();
        let mut best: Option<(i64, usize)> = None;
        for &i in &free {
            if let Some(v) = r[(i, c)].val_i64() {
                if best.is_none_or(|(bv, bi)| (v, i) < (bv, bi)) {
                    best = Some((v, i));
                }
            }
        }
        let (_, p) = best.ok_or(Error::Singular)?;
        r.swap_rows(c, p);
        let inv = r[(c, c)].inv();
        for &i in &free[1..] {
            if !r[(i, c)].is_zero() {
                let f = -(&r[(i, c)] * &inv);
                r.add_row_multiple(i, c, &f);
            }
        }
    }
    let mu: Coweight = (0..n).map(|i| r[(i, i)].val_i64().unwrap()).collect();
    // R = D u with D = diag(ε^μ); the unit parts of the diagonal go into u's
    // row scaling, i.e. into k
    let mut u = r.clone();
    for i in 0..n {
        let d = r[(i, i)].inv();
        u.scale_row(i, &d);
    }
    let dinv = LaurentMatrix::eps_diag(&mu.iter().map(|m| -m).collect::<Vec<_>>());
    let k = g.mul(&u.inverse()?).mul(&dinv);
    Ok(Iwasawa { k, mu, u })
}

/// `r_B(g)`: the coweight `μ` with `g ∈ K ε^μ U(F)` for the chosen Borel.
/// The factorization is verified by multiplying back.
pub fn retraction_rb(g: &LaurentMatrix, borel: &BorelChoice) -> Result<Coweight> {
    let w = borel.matrix();
    let gw = g.mul(&w);
    let iw = iwasawa(&gw, borel.orientation)?;
    if !iw.verify(&gw, borel.orientation) {
        return Err(Error::IllDefined("Iwasawa factorization failed to verify".into()));
    }
    let mut mu = vec![0; iw.mu.len()];
    for (j, &p) in borel.perm.iter().enumerate() {
        mu[p] = iw.mu[j];
    }
    Ok(mu)
}

/// Per-block valuations of determinants of a block-diagonal `g`.
pub fn w_m(g: &LaurentMatrix, m: &BlockLevi) -> Result<Vec<i64>> {
    if g.rows() != m.n() || !m.is_block_diagonal(g) {
        return Err(Error::Precondition("element is not in M(F)".into()));
    }
    (0..m.num_blocks())
        .map(|b| m.block(g, b, b).det().val_i64().ok_or(Error::Singular))
        .collect()
}

pub fn p_m(mu: &[i64], m: &BlockLevi) -> Vec<i64> {
    (0..m.num_blocks())
        .map(|b| m.range(b).map(|i| mu[i]).sum())
        .collect()
}

/// `a ≤_P b`: `b - a` is a non-negative integral combination of the images
/// `e_I - e_J` (`I > J`) of the coroots in `N`. With `opposite`, `N` is
/// replaced by the opposite unipotent radical.
pub fn leq_p(a: &[i64], b: &[i64], opposite: bool) -> bool {
    if a.len() != b.len() || a.iter().sum::<i64>() != b.iter().sum::<i64>() {
        return false;
    }
    let (mut sa, mut sb) = (0, 0);
    for k in 0..a.len() {
        sa += a[k];
        sb += b[k];
        if (!opposite && sb > sa) || (opposite && sb < sa) {
            return false;
        }
    }
    true
}

/// Newton point of `X ↦ γ X γ⁻¹` on `Lie N`.
pub fn ad_newton_on_n(gamma: &LaurentMatrix, m: &BlockLevi) -> Result<QTuple> {
    let mut slopes = Vec::new();
    for i in 0..m.num_blocks() {
        for j in 0..i {
            let gi = m.block(gamma, i, i);
            let gj_inv_t = m.block(gamma, j, j).inverse()?.transpose();
            slopes.extend(newton_point(&gj_inv_t.kron(&gi)).entries().iter().cloned());
        }
    }
    Ok(QTuple::sorted(slopes))
}

pub fn positive_slopes_on_n(gamma: &LaurentMatrix, m: &BlockLevi) -> Result<bool> {
    Ok(ad_newton_on_n(gamma, m)?
        .entries()
        .iter()
        .all(|s| *s > ExtRat::zero()))
}

pub const COEFFICIENTS: [i64; 2] = [0, 1];

/// Lattices `ε^w O^n ⊆ L ⊆ ε^{-w} O^n` in lower-triangular canonical form:
/// column `j` is `ε^{a_j} e_j` plus entries below the diagonal that are
/// Laurent polynomials with exponents in `[-w, a_i - 1]` and coefficients
/// from `coeffs`.
pub fn enumerate_lattices_with(n: usize, window: i64, coeffs: &[i64]) -> Result<Vec<MatrixLattice>> {
    if n == 0 || n > 3 || !(0..=3).contains(&window) {
        return Err(Error::Guard(format!("n = {}, window = {}", n, window)));
    }
    let mut out = Vec::new();
    let mut diag = vec![-window; n];
    loop {
        // free slots: (i, j, exponent) for i > j
        let mut slots = Vec::new();
        for j in 0..n {
            for i in j + 1..n {
                for e in -window..diag[i] {
                    slots.push((i, j, e));
                }
            }
        }
        let mut choice = vec![0usize; slots.len()];
        loop {
            let mut b = LaurentMatrix::eps_diag(&diag);
            for (s, &(i, j, e)) in slots.iter().enumerate() {
                let c = coeffs[choice[s]];
                if c != 0 {
                    b[(i, j)] = &b[(i, j)] + &(&RatFunc::eps_pow(e) * &RatFunc::from_int(c));
                }
            }
            let inv = b.inverse()?;
            if inv.entries().iter().all(|x| x.val_at_least(-window)) {
                out.push(MatrixLattice::new(b)?);
            }
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < coeffs.len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
        let mut k = 0;
        while k < n {
            diag[k] += 1;
            if diag[k] <= window {
                break;
            }
            diag[k] = -window;
            k += 1;
        }
        if k == n {
            return Ok(out);
        }
    }
}

pub fn enumerate_lattices(n: usize, window: i64) -> Result<Vec<MatrixLattice>> {
    enumerate_lattices_with(n, window, &COEFFICIENTS)
}

/// `cartan(B⁻¹ γ B)` for a lattice with basis `B`.
pub fn relative_position(gamma: &LaurentMatrix, l: &MatrixLattice) -> Result<Coweight> {
    cartan(&l.matrix_of(gamma)?)
}

pub fn fiber_x_mu(gamma: &LaurentMatrix, mu: &[i64], window: i64) -> Result<Vec<MatrixLattice>> {
    if gamma.det().is_zero() {
        return Err(Error::Singular);
    }
    let mut out = Vec::new();
    for l in enumerate_lattices(gamma.rows(), window)? {
        if relative_position(gamma, &l)? == mu {
            out.push(l);
        }
    }
    Ok(out)
}

/// `L = ⊕_I (L ∩ V_I)` for the block coordinate subspaces `V_I`.
pub fn block_decomposes(l: &MatrixLattice, m: &BlockLevi) -> Result<bool> {
    let parts: Vec<MatrixLattice> = (0..m.num_blocks())
        .map(|b| intersect_subspace(l, &m.block_subspace(b)))
        .collect::<Result<_>>()?;
    let refs: Vec<&MatrixLattice> = parts.iter().collect();
    Ok(direct_sum_equal_many(l, &refs))
}

/// Membership in the image of `X^M_μ(γ)`: block-decomposed, with each block
/// in the prescribed relative position.
pub fn in_levi_fiber(gamma: &LaurentMatrix, mu: &[i64], m: &BlockLevi, l: &MatrixLattice) -> Result<bool> {
    if !block_decomposes(l, m)? {
        return Ok(false);
    }
    for b in 0..m.num_blocks() {
        let part = intersect_subspace(l, &m.block_subspace(b))?;
        let rows: Vec<usize> = m.range(b).collect();
        let cols: Vec<usize> = (0..part.rank()).collect();
        let basis = MatrixLattice::new(part.basis().submatrix(&rows, &cols))?;
        let g = m.block(gamma, b, b);
        let mut want: Vec<i64> = rows.iter().map(|&i| mu[i]).collect();
        want.sort();
        if relative_position(&g, &basis)? != want {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub enum PartTwo {
    HypothesisSkip(String),
    Checked { g_members: usize, m_members: usize, mismatches: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct LinHnReport {
    pub window: i64,
    pub lattices_scanned: usize,
    pub fiber_size: usize,
    pub w_m: Vec<i64>,
    pub p_m: Vec<i64>,
    pub part_one_holds: bool,
    pub part_two: PartTwo,
    pub violations: Vec<String>,
}

impl LinHnReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check of both parts of the theorem inside the window. Part
/// (2) is checked as equality of the `G`-fiber with the set of
/// block-decomposed lattices in the `M`-fiber, so both injectivity and
/// surjectivity are visible within the window.
pub fn verify_lin_hn(gamma: &LaurentMatrix, mu: &[i64], m: &BlockLevi, window: i64) -> Result<LinHnReport> {
    if mu.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition("mu is not dominant".into()));
    }
    let wm = w_m(gamma, m)?;
    let pm = p_m(mu, m);
    let all = enumerate_lattices(gamma.rows(), window)?;
    let mut g_members = Vec::with_capacity(all.len());
    for l in &all {
        g_members.push(relative_position(gamma, l)? == mu);
    }
    let fiber_size = g_members.iter().filter(|&&b| b).count();
    let part_one_holds = leq_p(&wm, &pm, false);
    let mut violations = Vec::new();
    if fiber_size > 0 && !part_one_holds {
        violations.push(format!("w_M = {:?} is not <=_P p_M(mu) = {:?}", wm, pm));
    }
    let part_two = if wm != pm {
        PartTwo::HypothesisSkip("w_M(gamma) != p_M(mu)".into())
    } else if !positive_slopes_on_n(gamma, m)? {
        PartTwo::HypothesisSkip("a slope of Ad(gamma) on Lie N is not positive".into())
    } else {
        let mut m_members = 0;
        let mut mismatches = 0;
        for (l, &g) in all.iter().zip(&g_members) {
            let in_m = in_levi_fiber(gamma, mu, m, l)?;
            if in_m {
                m_members += 1;
            }
            if in_m != g {
                mismatches += 1;
                violations.push(format!(
                    "lattice {:?}: G-member {}, M-member {}",
                    l.basis().to_rows(),
                    g,
                    in_m
                ));
            }
        }
        PartTwo::Checked { g_members: fiber_size, m_members, mismatches }
    };
    Ok(LinHnReport {
        window,
        lattices_scanned: all.len(),
        fiber_size,
        w_m: wm,
        p_m: pm,
        part_one_holds,
        part_two,
        violations,
    })
}

/// `[ν_γ] ≤ μ` and `val det γ = Σ μ_i`.
pub fn mazur_group_check(gamma: &LaurentMatrix, mu: &[i64]) -> Result<bool> {
    let nu = newton_point(gamma);
    let mu_t = QTuple::new(mu.iter().map(|&x| ExtRat::from_int(x)).collect())?;
    let det = gamma.det().val_i64().ok_or(Error::Singular)?;
    Ok(dominance_geq(&mu_t, &nu)? && det == mu.iter().sum::<i64>())
}

fn is_in_n(x: &LaurentMatrix, m: &BlockLevi) -> bool {
    (0..x.rows()).all(|i| {
        (0..x.cols()).all(|j| {
            let (bi, bj) = (m.block_of(i), m.block_of(j));
            let e = &x[(i, j)];
            if bi > bj {
                true
            } else if i == j {
                e.is_one()
            } else {
                e.is_zero()
            }
        })
    })
}

/// If `n⁻¹ γ n γ⁻¹ ∈ N(O)` then `n ∈ N(O)`, under the hypotheses on `γ`.
pub fn unipotent_descent_check(gamma: &LaurentMatrix, n_elt: &LaurentMatrix, m: &BlockLevi) -> Result<bool> {
    let fail = |s: &str| Err(Error::Precondition(s.to_string()));
    if !is_in_n(n_elt, m) {
        return fail("n is not in N(F)");
    }
    if !m.is_block_diagonal(gamma) {
        return fail("gamma is not in M(F)");
    }
    let comm = n_elt.inverse()?.mul(gamma).mul(n_elt).mul(&gamma.inverse()?);
    if !is_in_n(&comm, m) || !comm.is_integral() {
        return fail("n^-1 gamma n gamma^-1 is not in N(O)");
    }
    let mut mu = Vec::new();
    for b in 0..m.num_blocks() {
        mu.extend(cartan(&m.block(gamma, b, b))?);
    }
    if mu.windows(2).any(|w| w[0] > w[1]) {
        return fail("gamma is not in M(O) mu M(O) for a dominant mu");
    }
    if !positive_slopes_on_n(gamma, m)? {
        return fail("a slope of Ad(gamma) on Lie N is not positive");
    }
    Ok(n_elt.is_integral())
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

    #[test]
    fn cartan_examples() {
        assert_eq!(cartan(&m(&[&["e^2", "0"], &["0", "e^-1"]])).unwrap(), vec![-1, 2]);
        assert_eq!(cartan(&m(&[&["1", "e"], &["2", "1"]])).unwrap(), vec![0, 0]);
        assert_eq!(cartan(&m(&[&["1", "0"], &["e^-1", "1"]])).unwrap(), vec![-1, 1]);
        assert!(cartan(&m(&[&["1", "1"], &["1", "1"]])).is_err());
    }

    #[test]
    fn retraction_examples() {
        let up = BorelChoice::standard(2, Orientation::Upper);
        let g = m(&[&["1", "e^-3"], &["0", "1"]]);
        assert_eq!(retraction_rb(&g, &up).unwrap(), vec![0, 0]);
        let g = m(&[&["1", "0"], &["e^-1", "1"]]);
        assert_eq!(retraction_rb(&g, &up).unwrap(), vec![-1, 1]);
        let lo = BorelChoice::standard(2, Orientation::Lower);
        assert_eq!(retraction_rb(&g, &lo).unwrap(), vec![0, 0]);
        let d = LaurentMatrix::eps_diag(&[3, -1, 2]);
        for o in [Orientation::Upper, Orientation::Lower] {
            let b = BorelChoice { orientation: o, perm: vec![2, 0, 1] };
            assert_eq!(retraction_rb(&d, &b).unwrap(), vec![3, -1, 2]);
        }
    }

    #[test]
    fn levi_maps() {
        let t = BlockLevi::torus(2);
        assert_eq!(w_m(&LaurentMatrix::eps_diag(&[2, -1]), &t).unwrap(), vec![2, -1]);
        assert_eq!(p_m(&[-1, 2], &BlockLevi::whole(2)), vec![1]);
        assert!(leq_p(&[1, 0], &[0, 1], false));
        assert!(!leq_p(&[0, 1], &[1, 0], false));
        assert!(leq_p(&[0, 1], &[1, 0], true));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_lattices(1, 1).unwrap().len(), 3);
        assert_eq!(enumerate_lattices(2, 0).unwrap().len(), 1);
        assert!(enumerate_lattices(4, 1).is_err());
    }

    #[test]
    fn fiber_examples() {
        let g = LaurentMatrix::eps_diag(&[0, 2]);
        let f = fiber_x_mu(&g, &[0, 2], 1).unwrap();
        assert!(f.iter().any(|l| l.same_as(&MatrixLattice::standard(2))));
        // a scalar γ is in position (1, 1) relative to every lattice
        let g = LaurentMatrix::eps_diag(&[1, 1]);
        assert!(fiber_x_mu(&g, &[0, 2], 2).unwrap().is_empty());
        assert_eq!(fiber_x_mu(&g, &[1, 1], 1).unwrap().len(), enumerate_lattices(2, 1).unwrap().len());
        let g = LaurentMatrix::eps_diag(&[0, 1]);
        assert!(fiber_x_mu(&g, &[1, 1], 2).unwrap().is_empty());
    }

    #[test]
    fn lin_hn_canonical_case() {
        let g = LaurentMatrix::eps_diag(&[0, 2]);
        let rep = verify_lin_hn(&g, &[0, 2], &BlockLevi::torus(2), 2).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
        assert!(matches!(rep.part_two, PartTwo::Checked { mismatches: 0, .. }));
        let rep = verify_lin_hn(&g, &[1, 1], &BlockLevi::torus(2), 1).unwrap();
        assert!(matches!(rep.part_two, PartTwo::HypothesisSkip(_)));
    }

    #[test]
    fn mazur_group_examples() {
        assert!(mazur_group_check(&LaurentMatrix::eps_diag(&[0, 3]), &[0, 3]).unwrap());
        assert!(mazur_group_check(&m(&[&["0", "e"], &["1", "0"]]), &[0, 1]).unwrap());
    }

    #[test]
    fn descent_examples() {
        let lev = BlockLevi::torus(2);
        let g = LaurentMatrix::eps_diag(&[0, 2]);
        let n_ok = m(&[&["1", "0"], &["3*e", "1"]]);
        assert!(unipotent_descent_check(&g, &n_ok, &lev).unwrap());
        let n_bad = m(&[&["1", "0"], &["e^-1", "1"]]);
        assert!(unipotent_descent_check(&g, &n_bad, &lev).is_err());
        let g2 = LaurentMatrix::eps_diag(&[2, 0]);
        assert!(unipotent_descent_check(&g2, &n_ok, &lev).is_err());
    }
}
