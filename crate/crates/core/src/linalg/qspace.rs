use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type QVec = Vec<BigRational>;

pub fn qvec_from_ints(v: &[i64]) -> QVec {
    v.iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect()
}

pub fn qdot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn qsub(a: &[BigRational], b: &[BigRational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn qadd(a: &[BigRational], b: &[BigRational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn qscale(a: &[BigRational], c: &BigRational) -> QVec {
    a.iter().map(|x| x * c).collect()
}

/// In-place reduced row echelon form; returns pivot columns.
pub fn rref_rows(rows: &mut Vec<QVec>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// A subspace of Q^n with a reduced row echelon basis, so that equal
/// subspaces have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSubspace {
    ambient: usize,
    basis: Vec<QVec>,
    pivots: Vec<usize>,
}

impl QSubspace {
    pub fn zero(ambient: usize) -> Self {
        QSubspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![BigRational::zero(); ambient];
                v[i] = BigRational::one();
                v
            })
            .collect();
        QSubspace {
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(vectors: &[QVec], ambient: usize) -> Self {
        let mut rows: Vec<QVec> = vectors.to_vec();
        let pivots = rref_rows(&mut rows, ambient);
        QSubspace {
            ambient,
            basis: rows,
            pivots,
        }
    }

    /// `{v : f(v) = 0 for every row f}`
    pub fn kernel(functionals: &[QVec], ambient: usize) -> Self {
        let mut rows = functionals.to_vec();
        let pivots = rref_rows(&mut rows, ambient);
        let free: Vec<usize> = (0..ambient).filter(|c| !pivots.contains(c)).collect();
        let vecs: Vec<QVec> = free
            .iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); ambient];
                v[f] = BigRational::one();
                for (row, &p) in rows.iter().zip(&pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect();
        QSubspace::span(&vecs, ambient)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QVec] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical representative of `v` modulo this subspace.
    pub fn reduce(&self, v: &[BigRational]) -> QVec {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !out[p].is_zero() {
                let f = out[p].clone();
                for (x, y) in out.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn is_subspace_of(&self, other: &QSubspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn join(&self, other: &QSubspace) -> QSubspace {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        QSubspace::span(&v, self.ambient)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_span_agree() {
        // kernel of x + y + z in Q^3 is 2-dimensional and contains (1,-1,0)
        let k = QSubspace::kernel(&[qvec_from_ints(&[1, 1, 1])], 3);
        assert_eq!(k.dim(), 2);
        assert!(k.contains(&qvec_from_ints(&[1, -1, 0])));
        assert!(!k.contains(&qvec_from_ints(&[1, 0, 0])));
        let s = QSubspace::span(
            &[qvec_from_ints(&[0, 1, -1]), qvec_from_ints(&[2, -1, -1])],
            3,
        );
        assert_eq!(s, k);
    }

    #[test]
    fn reduce_is_canonical_mod_subspace() {
        let s = QSubspace::span(&[qvec_from_ints(&[1, 1])], 2);
        let a = s.reduce(&qvec_from_ints(&[3, 0]));
        let b = s.reduce(&qvec_from_ints(&[0, -3]));
        assert_eq!(a, b);
    }
}
