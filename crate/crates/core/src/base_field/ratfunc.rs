use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExtRat, Poly};

/// An exact element of Q(e), viewed inside the Laurent series field Q((e)).
///
/// Stored as `e^order * num / den` where `num` and `den` both have nonzero
/// constant term, `den(0) = 1`, and `gcd(num, den) = 1`. This normal form is
/// unique, so derived equality and hashing are value equality. Zero is the
/// only value with an empty numerator and has `order == 0`, `den == 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    order: i64,
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            order: 0,
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from_rational(BigRational::one())
    }

    pub fn from_int(c: i64) -> Self {
        RatFunc::from_rational(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            order: 0,
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    /// `e^k`
    pub fn eps_pow(k: i64) -> Self {
        RatFunc {
            order: k,
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    /// `c * e^k`
    pub fn monomial(c: BigRational, k: i64) -> Self {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            order: k,
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    /// Laurent polynomial from `(exponent, coefficient)` terms.
    pub fn laurent(terms: &[(i64, BigRational)]) -> Self {
        let Some(lo) = terms.iter().filter(|(_, c)| !c.is_zero()).map(|t| t.0).min() else {
            return RatFunc::zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            if *e >= lo {
                coeffs[(e - lo) as usize] += c;
            }
        }
        RatFunc::from_parts(lo, Poly::from_coeffs(coeffs), Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc::from_parts(0, p, Poly::one())
    }

    /// Builds `e^order * num / den` and reduces to normal form.
    pub fn from_parts(order: i64, num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let Some(nk) = num.order() else {
            return RatFunc::zero();
        };
        let dk = den.order().unwrap();
        let mut num = num.shift_down(nk);
        let mut den = den.shift_down(dk);
        let order = order + nk as i64 - dk as i64;
        if den.degree() != Some(0) {
            let g = num.gcd(&den);
            if g.degree() != Some(0) {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
        }
        let d0 = den.coeff(0);
        if !d0.is_one() {
            let inv = d0.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { order, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.order == 0 && self.num.is_one() && self.den.is_one()
    }

    /// Order of vanishing at `e = 0`; `INFINITY` for zero.
    pub fn val(&self) -> ExtRat {
        match self.val_i64() {
            Some(v) => ExtRat::from_int(v),
            None => ExtRat::Inf,
        }
    }

    /// Valuation as an integer, `None` for zero.
    pub fn val_i64(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.order)
        }
    }

    /// True when `val >= k` (zero is in every power of the maximal ideal).
    pub fn val_at_least(&self, k: i64) -> bool {
        self.is_zero() || self.order >= k
    }

    /// In the valuation ring O.
    pub fn is_integral(&self) -> bool {
        self.val_at_least(0)
    }

    /// Unit of O.
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.order == 0
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_laurent_poly(&self) -> bool {
        self.den.is_one()
    }

    /// Leading Laurent coefficient (the coefficient of `e^val`).
    pub fn leading_coeff(&self) -> BigRational {
        self.num.coeff(0)
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero");
        let n0 = self.num.coeff(0).recip();
        RatFunc {
            order: -self.order,
            num: self.den.scale(&n0),
            den: self.num.scale(&n0),
        }
    }

    pub fn pow(&self, k: i64) -> RatFunc {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Multiply by `e^k`.
    pub fn shift(&self, k: i64) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            order: self.order + k,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    /// Laurent coefficients of the exponents `val .. val + terms`.
    pub fn series(&self, terms: usize) -> Vec<BigRational> {
        if self.is_zero() {
            return vec![BigRational::zero(); terms];
        }
        self.num.series_div(&self.den, terms)
    }

    /// Coefficient of `e^k` in the Laurent expansion.
    pub fn coeff(&self, k: i64) -> BigRational {
        if self.is_zero() || k < self.order {
            return BigRational::zero();
        }
        let idx = (k - self.order) as usize;
        if self.den.is_one() {
            return self.num.coeff(idx);
        }
        self.series(idx + 1).pop().unwrap()
    }

    /// The terms of exponent `< k` of the Laurent expansion, as a Laurent
    /// polynomial. `f - f.truncate_below(k)` lies in `e^k O`.
    pub fn truncate_below(&self, k: i64) -> RatFunc {
        if self.is_zero() || self.order >= k {
            return RatFunc::zero();
        }
        let terms = (k - self.order) as usize;
        let coeffs = self.series(terms);
        RatFunc::from_parts(self.order, Poly::from_coeffs(coeffs), Poly::one())
    }

    /// Negative-exponent part of the Laurent expansion.
    pub fn polar_part(&self) -> RatFunc {
        self.truncate_below(0)
    }

    /// Evaluate at a rational point (must not be a pole).
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        let pow = if self.order >= 0 {
            num_traits::pow(x.clone(), self.order as usize)
        } else {
            if x.is_zero() {
                return None;
            }
            num_traits::pow(x.recip(), (-self.order) as usize)
        };
        Some(self.num.eval(x) * pow / d)
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.order.min(rhs.order);
        let a = self.num.shift_up((self.order - lo) as usize);
        let b = rhs.num.shift_up((rhs.order - lo) as usize);
        if self.den == rhs.den {
            RatFunc::from_parts(lo, a.add(&b), self.den.clone())
        } else {
            let num = a.mul(&rhs.den).add(&b.mul(&self.den));
            RatFunc::from_parts(lo, num, self.den.mul(&rhs.den))
        }
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        let order = self.order + rhs.order;
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc {
                order,
                num: self.num.mul(&rhs.num),
                den: Poly::one(),
            };
        }
        // Cross-cancel before multiplying; the result is then reduced.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (n1, d2) = if g1.degree() == Some(0) {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.div_exact(&g1), rhs.den.div_exact(&g1))
        };
        let (n2, d1) = if g2.degree() == Some(0) {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.div_exact(&g2), self.den.div_exact(&g2))
        };
        let mut num = n1.mul(&n2);
        let mut den = d1.mul(&d2);
        let d0 = den.coeff(0);
        if !d0.is_one() {
            let inv = d0.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { order, num, den }
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.inv()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            order: self.order,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<i64> for RatFunc {
    fn from(c: i64) -> Self {
        RatFunc::from_int(c)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.den.is_one() {
            return self.num.fmt_in(f, self.order);
        }
        let (ns, ds) = if self.order >= 0 {
            (self.order, 0)
        } else {
            (0, -self.order)
        };
        write!(f, "(")?;
        self.num.fmt_in(f, ns)?;
        write!(f, ")/(")?;
        self.den.fmt_in(f, ds)?;
        write!(f, ")")
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_field::parse_ratfunc;

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn val_examples() {
        assert_eq!(rf("e^3").val(), ExtRat::from_int(3));
        assert_eq!(RatFunc::zero().val(), ExtRat::Inf);
        let f = rf("(e^2 + e^3)/e^5");
        assert_eq!(f.val(), ExtRat::from_int(-3));
    }

    #[test]
    fn quotient_series_oracle() {
        // (e^2 + e^3)/e^5 expands as e^-3 + e^-2 exactly.
        let f = rf("(e^2 + e^3)/e^5");
        let s = f.series(5);
        assert_eq!(s[0], BigRational::one());
        assert_eq!(s[1], BigRational::one());
        assert!(s[2..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn canonical_form_independent_of_path() {
        let a = rf("(1 - e^2)/(1 + e)");
        let b = rf("1 - e");
        assert_eq!(a, b);
        let c = &(&rf("1/(1+e)") + &rf("e/(1+e)")) * &RatFunc::one();
        assert_eq!(c, RatFunc::one());
    }

    #[test]
    fn truncation_leaves_integral_tail() {
        let f = rf("(2 + e)/(e^2 - e^3)");
        let p = f.polar_part();
        assert!((&f - &p).is_integral());
        assert_eq!(p.val_i64(), Some(-2));
    }

    #[test]
    fn display_reparses() {
        for s in ["(1 + 3/2*e^2)/(e - e^3)", "-e^-2 + 7", "5/3*e", "0"] {
            let f = rf(s);
            assert_eq!(rf(&f.to_string()), f, "{}", s);
        }
    }
}
