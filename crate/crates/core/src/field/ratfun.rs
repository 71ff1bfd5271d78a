//! Rational functions in `b_1..b_n` over a prime field.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::poly::Poly;
use crate::field::scalar::Scalar;

/// `num / den` with coprime parts and a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFun::zero(num.nvars(), num.characteristic()));
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).expect("gcd divides");
        let den = den.exact_div(&g).expect("gcd divides");
        let lc = den.leading_scalar().inv().expect("nonzero");
        Ok(RatFun {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn from_poly(p: Poly) -> RatFun {
        let one = Poly::one(p.nvars(), p.characteristic());
        RatFun { num: p, den: one }
    }

    pub fn zero(nvars: usize, p: u64) -> RatFun {
        RatFun::from_poly(Poly::zero(nvars, p))
    }

    pub fn one(nvars: usize, p: u64) -> RatFun {
        RatFun::from_poly(Poly::one(nvars, p))
    }

    pub fn constant(c: Scalar, nvars: usize) -> RatFun {
        RatFun::from_poly(Poly::constant(c, nvars))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num == self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn characteristic(&self) -> u64 {
        self.num.characteristic()
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        if self.den == other.den {
            return RatFun::new(self.num.add(&other.num), self.den.clone()).expect("nonzero den");
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RatFun::new(num, self.den.mul(&other.den)).expect("nonzero den")
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        if self.is_zero() || other.is_zero() {
            return RatFun::zero(self.nvars(), self.characteristic());
        }
        RatFun::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero den")
    }

    pub fn scale(&self, c: &Scalar) -> RatFun {
        RatFun::new(self.num.scale(c), self.den.clone()).expect("nonzero den")
    }

    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> RatFun {
        (0..e).fold(
            RatFun::one(self.nvars(), self.characteristic()),
            |acc, _| acc.mul(self),
        )
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.den.is_constant() {
            self.num.as_constant()
        } else {
            None
        }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb() -> impl Strategy<Value = RatFun> {
        let poly = || {
            proptest::collection::vec((proptest::collection::vec(0u32..2, 2), -2i64..3), 0..3)
                .prop_map(|ts| {
                    Poly::from_terms(
                        2,
                        0,
                        ts.into_iter().map(|(e, c)| (e, Scalar::from_i64(c, 0))),
                    )
                })
        };
        (poly(), poly()).prop_filter_map("nonzero denominator", |(n, d)| RatFun::new(n, d).ok())
    }

    #[test]
    fn canonical_form() {
        let x = Poly::var(0, 2, 0);
        let y = Poly::var(1, 2, 0);
        let two = Scalar::from_i64(2, 0);
        let r = RatFun::new(x.mul(&y).scale(&two), y.scale(&two).scale(&two)).unwrap();
        assert_eq!(
            r,
            RatFun::new(x.clone(), Poly::constant(two.clone(), 2)).unwrap()
        );
        assert_eq!(r.den(), &Poly::one(2, 0));
        assert!(RatFun::from_poly(x.clone())
            .div(&RatFun::from_poly(x))
            .unwrap()
            .is_one());
        assert_eq!(RatFun::zero(2, 0).inv(), Err(Error::DivisionByZero));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn field_laws(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            if !a.is_zero() {
                prop_assert!(a.mul(&a.inv().unwrap()).is_one());
            }
        }
    }
}
