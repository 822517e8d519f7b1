//! Unreduced quotients of polynomials.
//!
//! No gcd is ever taken: equality is cross-multiplication of the parts, and
//! evaluation divides the two exact values. This keeps every identity check
//! exact without multivariate gcd machinery.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rat::Rat;
use crate::roots::Root;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalExpr {
    num: Polynomial,
    den: Polynomial,
}

impl RationalExpr {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<RationalExpr> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalExpr { num, den })
    }

    pub fn from_poly(num: Polynomial) -> RationalExpr {
        RationalExpr {
            num,
            den: Polynomial::one(),
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// Equality as rational functions: n1*d2 = n2*d1 exactly.
    pub fn expr_eq(&self, other: &RationalExpr) -> bool {
        (&self.num * &other.den) == (&other.num * &self.den)
    }

    /// Exact value; None when the denominator vanishes at the point.
    pub fn evaluate(&self, values: &BTreeMap<Root, Rat>) -> Result<Option<Rat>> {
        let den = self.den.evaluate(values)?;
        if den.is_zero() {
            return Ok(None);
        }
        let num = self.num.evaluate(values)?;
        Ok(Some(num / den))
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::r;

    fn x(i: u32, j: u32) -> Polynomial {
        Polynomial::var(r(i, j))
    }

    #[test]
    fn common_factor_is_equal() {
        let a = RationalExpr::new(x(2, 3), Polynomial::one()).unwrap();
        let b = RationalExpr::new(&x(2, 3) * &x(3, 4), x(3, 4)).unwrap();
        assert!(a.expr_eq(&b));
    }

    #[test]
    fn swapped_quotient_differs() {
        let a = RationalExpr::new(x(2, 3), x(3, 4)).unwrap();
        let b = RationalExpr::new(x(3, 4), x(2, 3)).unwrap();
        assert!(!a.expr_eq(&b));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalExpr::new(x(1, 2), Polynomial::zero()).is_err());
    }
}
