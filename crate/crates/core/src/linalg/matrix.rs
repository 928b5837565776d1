use std::fmt;
use std::ops::{Index, IndexMut};

use crate::base_field::{ExtRat, Poly, RatFunc};
use crate::error::{Error, Result};

/// Dense matrix over Q(e), row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

impl LaurentMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LaurentMatrix {
            rows,
            cols,
            data: vec![RatFunc::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = LaurentMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = RatFunc::one();
        }
        m
    }

    pub fn diag(entries: &[RatFunc]) -> Self {
        let n = entries.len();
        let mut m = LaurentMatrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// `diag(e^k_1, ..., e^k_n)`
    pub fn eps_diag(exps: &[i64]) -> Self {
        let v: Vec<RatFunc> = exps.iter().map(|&k| RatFunc::eps_pow(k)).collect();
        LaurentMatrix::diag(&v)
    }

    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(LaurentMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_columns(cols: &[Vec<RatFunc>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        if cols.iter().any(|x| x.len() != r) {
            return Err(Error::Dimension("ragged matrix columns".into()));
        }
        let mut m = LaurentMatrix::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    /// Integer matrix, convenient in tests.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        LaurentMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| RatFunc::from_int(x)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<RatFunc> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<RatFunc>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> &[RatFunc] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<RatFunc>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = LaurentMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = LaurentMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = RatFunc::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &RatFunc) -> LaurentMatrix {
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// All entries in O.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integral())
    }

    /// Minimum entry valuation (`INFINITY` for the zero matrix).
    pub fn min_val(&self) -> ExtRat {
        self.data.iter().map(|x| x.val()).min().unwrap_or(ExtRat::Inf)
    }

    pub fn trace(&self) -> RatFunc {
        let mut acc = RatFunc::zero();
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + &self[(i, i)];
        }
        acc
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> LaurentMatrix {
        let mut m = LaurentMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = LaurentMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c * row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self[(src, j)];
            if !s.is_zero() {
                let v = &self[(dst, j)] + &(c * s);
                self[(dst, j)] = v;
            }
        }
    }

    /// `col[dst] += c * col[src]`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self[(i, src)];
            if !s.is_zero() {
                let v = &self[(i, dst)] + &(c * s);
                self[(i, dst)] = v;
            }
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &RatFunc) {
        for j in 0..self.cols {
            let v = &self[(i, j)] * c;
            self[(i, j)] = v;
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &RatFunc) {
        for i in 0..self.rows {
            let v = &self[(i, j)] * c;
            self[(i, j)] = v;
        }
    }

    /// Determinant. Laurent-polynomial matrices use fraction-free Bareiss
    /// elimination over Q[e]; anything else uses fraction-field elimination.
    pub fn det(&self) -> RatFunc {
        assert!(self.is_square(), "determinant of non-square matrix");
        if self.data.iter().all(RatFunc::is_laurent_poly) {
            return self.det_bareiss();
        }
        let (cleared, scale) = self.clear_denominators();
        &cleared.det_bareiss() / &scale
    }

    /// Scales each row by the product of the distinct denominators in it.
    /// Denominators are normalized to constant term 1, so the factors are
    /// units of O and the result has Laurent-polynomial entries. Returns the
    /// product of all factors as well.
    pub fn clear_denominators(&self) -> (LaurentMatrix, RatFunc) {
        let mut out = self.clone();
        let mut total = RatFunc::one();
        for i in 0..self.rows {
            let mut dens: Vec<&Poly> = Vec::new();
            for x in self.row(i) {
                if !x.is_laurent_poly() && !dens.contains(&x.denominator()) {
                    dens.push(x.denominator());
                }
            }
            if dens.is_empty() {
                continue;
            }
            let unit = RatFunc::from_poly(dens.iter().fold(Poly::one(), |acc, d| acc.mul(d)));
            out.scale_row(i, &unit);
            total = &total * &unit;
        }
        (out, total)
    }

    /// Determinant by fraction-field elimination.
    pub fn det_elimination(&self) -> RatFunc {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = RatFunc::one();
        for k in 0..n {
            let Some(p) = pick_pivot(&m, k, k) else {
                return RatFunc::zero();
            };
            if p != k {
                m.swap_rows(p, k);
                det = -det;
            }
            let pivot = m[(k, k)].clone();
            det = &det * &pivot;
            let inv = pivot.inv();
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let c = -(&m[(i, k)] * &inv);
                for j in k..n {
                    let s = &m[(k, j)];
                    if !s.is_zero() {
                        let v = &m[(i, j)] + &(&c * s);
                        m[(i, j)] = v;
                    }
                }
            }
        }
        det
    }

    fn det_bareiss(&self) -> RatFunc {
        let n = self.rows;
        let mut shift = 0;
        let mut a: Vec<Vec<Poly>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.row(i);
            let Some(lo) = row.iter().filter_map(RatFunc::val_i64).min() else {
                return RatFunc::zero();
            };
            shift += lo;
            a.push(
                row.iter()
                    .map(|x| match x.val_i64() {
                        Some(v) => x.numerator().shift_up((v - lo) as usize),
                        None => Poly::zero(),
                    })
                    .collect(),
            );
        }
        let mut negate = false;
        let mut prev = Poly::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return RatFunc::zero();
            };
            if p != k {
                a.swap(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = v.div_exact(&prev);
                }
            }
            prev = a[k][k].clone();
        }
        let d = if n == 0 { Poly::one() } else { a[n - 1][n - 1].clone() };
        let d = if negate { d.neg() } else { d };
        RatFunc::from_parts(shift, d, Poly::one())
    }

    /// Reduced row echelon form over Q(e); returns the pivot columns.
    pub fn rref(&self) -> (LaurentMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = pick_pivot(&m, r, c) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].inv();
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = -m[(i, c)].clone();
                    m.add_row_multiple(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Result<LaurentMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hcat(&LaurentMatrix::identity(n));
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let idx: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(r.submatrix(&idx, &cols))
    }

    /// Solves `self * x = v` when `self` has full column rank; `None` when
    /// `v` is outside the column span.
    pub fn solve(&self, v: &[RatFunc]) -> Option<Vec<RatFunc>> {
        assert_eq!(v.len(), self.rows);
        let vcol = LaurentMatrix::from_columns(&[v.to_vec()]).unwrap();
        let aug = self.hcat(&vcol);
        let (r, piv) = aug.rref();
        if piv.contains(&self.cols) {
            return None;
        }
        if piv.len() != self.cols {
            panic!("solve: coefficient matrix is not of full column rank");
        }
        Some((0..self.cols).map(|i| r[(i, self.cols)].clone()).collect())
    }

    /// Solves `self * X = rhs` column by column.
    pub fn solve_matrix(&self, rhs: &LaurentMatrix) -> Option<LaurentMatrix> {
        let cols: Option<Vec<Vec<RatFunc>>> =
            rhs.columns().iter().map(|c| self.solve(c)).collect();
        cols.map(|c| {
            if c.is_empty() {
                LaurentMatrix::zeros(self.cols, 0)
            } else {
                LaurentMatrix::from_columns(&c).unwrap()
            }
        })
    }

    /// Kronecker product.
    pub fn kron(&self, other: &LaurentMatrix) -> LaurentMatrix {
        let mut m = LaurentMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * &other[(k, l)];
                    }
                }
            }
        }
        m
    }
}

/// Nonzero pivot in column `c` at or below row `r`, preferring the simplest
/// entry so that intermediate expressions stay small.
fn pick_pivot(m: &LaurentMatrix, r: usize, c: usize) -> Option<usize> {
    (r..m.rows)
        .filter(|&i| !m[(i, c)].is_zero())
        .min_by_key(|&i| {
            let x = &m[(i, c)];
            x.numerator().degree().unwrap_or(0) + x.denominator().degree().unwrap_or(0)
        })
}

impl Index<(usize, usize)> for LaurentMatrix {
    type Output = RatFunc;
    fn index(&self, (i, j): (usize, usize)) -> &RatFunc {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for LaurentMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RatFunc {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", x)?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
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
    fn det_and_inverse() {
        let a = m(&[&["e", "1"], &["1/e", "e^2"]]);
        assert_eq!(a.det(), parse_ratfunc("e^3 - 1/e").unwrap());
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), LaurentMatrix::identity(2));
    }

    #[test]
    fn singular_inverse_fails() {
        let a = m(&[&["e", "1"], &["e^2", "e"]]);
        assert!(a.det().is_zero());
        assert_eq!(a.inverse(), Err(Error::Singular));
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(4, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn solve_outside_span() {
        let b = m(&[&["1"], &["0"]]);
        assert!(b.solve(&[RatFunc::zero(), RatFunc::one()]).is_none());
        assert_eq!(
            b.solve(&[RatFunc::eps_pow(2), RatFunc::zero()]).unwrap(),
            vec![RatFunc::eps_pow(2)]
        );
    }
}
