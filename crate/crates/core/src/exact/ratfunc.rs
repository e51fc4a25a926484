//! Rational functions over Q: elements of the function field Q(t).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::exact::poly::Poly;

/// A reduced rational function: gcd(num, den) = 1 and den monic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let lc = den.leading_coeff();
        Ok(RatFunc {
            num: num.scale(&lc.recip()),
            den: den.monic(),
        })
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn from_rational(r: BigRational) -> RatFunc {
        RatFunc::from_poly(Poly::constant(r))
    }

    pub fn from_int(n: i64) -> RatFunc {
        RatFunc::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var() -> RatFunc {
        RatFunc::from_poly(Poly::var())
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_poly(Poly::zero())
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(Poly::one())
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

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_constant() {
            Some(self.num.coeff(0) / self.den.coeff(0))
        } else {
            None
        }
    }

    pub fn recip(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Value at t = x, or None at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    /// num * den: a polynomial with the same sign as `self` away from its
    /// zeros and poles.
    pub fn sign_poly(&self) -> Poly {
        &self.num * &self.den
    }

    /// Order of vanishing at the finite rational point `a` (negative at a pole).
    pub fn order_at(&self, a: &BigRational) -> i64 {
        assert!(!self.is_zero());
        self.num.root_multiplicity(a) as i64 - self.den.root_multiplicity(a) as i64
    }

    /// Order of vanishing at infinity, uniformizer 1/t.
    pub fn order_at_infinity(&self) -> i64 {
        assert!(!self.is_zero());
        self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64
    }

    /// Order of vanishing at the monic irreducible place polynomial `q`.
    pub fn order_at_place_poly(&self, q: &Poly) -> i64 {
        assert!(!self.is_zero());
        self.num.valuation_at(q) as i64 - self.den.valuation_at(q) as i64
    }

    /// The unit part at t = a: self / (t-a)^n with n = order_at(a),
    /// evaluated at a.
    pub fn unit_value_at(&self, a: &BigRational) -> BigRational {
        let lin = Poly::linear(a);
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        while num.eval(a).is_zero() {
            num = num.exact_div(&lin).expect("root divides");
        }
        while den.eval(a).is_zero() {
            den = den.exact_div(&lin).expect("root divides");
        }
        num.eval(a) / den.eval(a)
    }

    /// The unit part at infinity: ratio of leading coefficients.
    pub fn unit_value_at_infinity(&self) -> BigRational {
        self.num.leading_coeff() / self.den.leading_coeff()
    }
}

impl<'a> Add for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &'a RatFunc) -> RatFunc {
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero denominators")
    }
}

impl<'a> Sub for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &'a RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &'a RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.coeff(0).is_one() {
            if self.num.is_constant() || self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1 {
                write!(f, "{}", self.num)
            } else {
                write!(f, "({})", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
