use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::faults::{self, Fault};

/// An element of Q ∪ {∞}. `Inf` is the greatest element and absorbs addition.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExtRat {
    Fin(BigRational),
    Inf,
}

impl ExtRat {
    pub fn from_int(v: i64) -> Self {
        ExtRat::Fin(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_frac(p: i64, q: i64) -> Self {
        ExtRat::Fin(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn zero() -> Self {
        ExtRat::Fin(BigRational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Fin(_))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtRat::Fin(q) => Some(q),
            ExtRat::Inf => None,
        }
    }

    /// Integer value when finite and integral.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            ExtRat::Fin(q) if q.is_integer() => i64::try_from(q.to_integer()).ok(),
            _ => None,
        }
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Inf, ExtRat::Inf) => Ordering::Equal,
            (ExtRat::Inf, _) => Ordering::Greater,
            (_, ExtRat::Inf) => Ordering::Less,
            (ExtRat::Fin(a), ExtRat::Fin(b)) => a.cmp(b),
        }
    }
}

impl Add<&ExtRat> for &ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: &ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => ExtRat::Fin(a + b),
            _ => ExtRat::Inf,
        }
    }
}

impl Add for ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: ExtRat) -> ExtRat {
        &self + &rhs
    }
}

impl From<i64> for ExtRat {
    fn from(v: i64) -> Self {
        ExtRat::from_int(v)
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Fin(q) => write!(f, "{}", q),
            ExtRat::Inf => write!(f, "inf"),
        }
    }
}

/// A non-decreasing tuple in (Q ∪ {∞})^n.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QTuple(Vec<ExtRat>);

impl QTuple {
    /// Checks monotonicity.
    pub fn new(entries: Vec<ExtRat>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::NotSorted);
        }
        Ok(QTuple(entries))
    }

    pub fn sorted(mut entries: Vec<ExtRat>) -> Self {
        entries.sort();
        QTuple(entries)
    }

    pub fn from_ints(v: &[i64]) -> Self {
        QTuple::sorted(v.iter().map(|&x| ExtRat::from_int(x)).collect())
    }

    pub fn entries(&self) -> &[ExtRat] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `s[i] = entries[0] + ... + entries[i-1]`, with `s[0] = 0`.
    pub fn partial_sums(&self) -> Vec<ExtRat> {
        let mut out = Vec::with_capacity(self.0.len() + 1);
        let mut acc = ExtRat::zero();
        out.push(acc.clone());
        for e in &self.0 {
            acc = &acc + e;
            out.push(acc.clone());
        }
        out
    }

    pub fn finite_count(&self) -> usize {
        self.0.iter().filter(|e| e.is_finite()).count()
    }
}

impl fmt::Display for QTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}

/// Dominance `mu >= nu` for the non-decreasing convention: every proper
/// partial sum of `mu` is at most that of `nu`, and the totals agree.
pub fn dominance_geq(mu: &QTuple, nu: &QTuple) -> Result<bool> {
    if mu.len() != nu.len() {
        return Err(Error::LengthMismatch {
            expected: mu.len(),
            found: nu.len(),
        });
    }
    let n = mu.len();
    let a = mu.partial_sums();
    let b = nu.partial_sums();
    let slack = if faults::active(Fault::Dominance) {
        ExtRat::from_int(1)
    } else {
        ExtRat::zero()
    };
    for i in 1..n {
        if &a[i] + &slack > b[i] {
            return Ok(false);
        }
    }
    Ok(a[n] == b[n])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[Option<i64>]) -> QTuple {
        QTuple::new(
            v.iter()
                .map(|x| x.map(ExtRat::from_int).unwrap_or(ExtRat::Inf))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn extrat_examples() {
        assert_eq!(&ExtRat::from_int(2) + &ExtRat::Inf, ExtRat::Inf);
        assert!(ExtRat::Inf > ExtRat::from_int(1_000_000_000));
        assert_eq!(
            &ExtRat::from_frac(1, 2) + &ExtRat::from_frac(1, 3),
            ExtRat::from_frac(5, 6)
        );
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_geq(&q(&[Some(-1), Some(1)]), &q(&[Some(0), Some(0)])).unwrap());
        assert!(dominance_geq(&q(&[Some(0), Some(0)]), &q(&[Some(0), Some(0)])).unwrap());
        assert!(dominance_geq(&q(&[Some(0), None]), &q(&[None, None])).unwrap());
        assert!(!dominance_geq(&q(&[Some(0), Some(0)]), &q(&[Some(-1), Some(1)])).unwrap());
        assert!(dominance_geq(&q(&[Some(0)]), &q(&[Some(0), Some(0)])).is_err());
    }

    #[test]
    fn rejects_unsorted() {
        assert!(QTuple::new(vec![ExtRat::Inf, ExtRat::zero()]).is_err());
    }
}
