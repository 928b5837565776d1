//! Elementary divisors over the valuation ring O = Q(e) ∩ Q[[e]].

use crate::base_field::{ExtRat, QTuple, RatFunc};

use super::LaurentMatrix;

/// Sorted elementary-divisor valuations of `m` over O. Zero diagonal slots
/// are reported as `INFINITY`; the result has `min(rows, cols)` entries.
///
/// Rows are first scaled by units of O so that every entry is a Laurent
/// polynomial. Each step takes a pivot of minimal valuation `e^v u` and
/// replaces row `i` by `u row_i - (a_ik / e^v) row_k`, which keeps entries
/// Laurent polynomials and changes the lattice only by units. The pivot row
/// can then be cleared by column operations over O, which touch nothing else.
pub fn smith_valuations(m: &LaurentMatrix) -> QTuple {
    let mut a: Vec<Vec<RatFunc>> = m.clear_denominators().0.to_rows();
    let n = m.rows().min(m.cols());
    let mut vals = Vec::with_capacity(n);
    while vals.len() < n {
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, row) in a.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if let Some(v) = x.val_i64() {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            vals.extend(std::iter::repeat_n(ExtRat::Inf, n - vals.len()));
            break;
        };
        let pivot = a.swap_remove(pi);
        let u = pivot[pj].shift(-v);
        for row in a.iter_mut() {
            let c = row[pj].shift(-v);
            if c.is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x = &(&u * &*x) - &(&c * p);
            }
        }
        for row in a.iter_mut() {
            row.swap_remove(pj);
        }
        vals.push(ExtRat::from_int(v));
    }
    QTuple::sorted(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_field::parse_ratfunc;

    #[test]
    fn lower_unipotent_with_pole() {
        let m = LaurentMatrix::from_rows(vec![
            vec![parse_ratfunc("1").unwrap(), parse_ratfunc("0").unwrap()],
            vec![parse_ratfunc("e^-1").unwrap(), parse_ratfunc("1").unwrap()],
        ])
        .unwrap();
        assert_eq!(smith_valuations(&m), QTuple::from_ints(&[-1, 1]));
    }

    #[test]
    fn rank_deficient() {
        let m = LaurentMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        let s = smith_valuations(&m);
        assert_eq!(s.entries(), &[ExtRat::from_int(0), ExtRat::Inf]);
    }
}
