//! Exact arithmetic foundation: rationals, polynomials over Q, rational
//! functions, and real root isolation.

pub mod algebraic;
pub mod poly;
pub mod ratfunc;

pub use algebraic::{isolate_real_roots, sign_at_point, AlgebraicReal};
pub use poly::{rational_roots, squarefree_factor, Poly};
pub use ratfunc::RatFunc;

use num::BigRational;

/// Scalars of the base field Q.
pub type Rat = BigRational;

/// Sign of a rational as -1/0/+1.
pub use algebraic::sgn;

/// Reduce a nonzero rational to its square class: sign times the squarefree
/// part of numerator times denominator.
pub fn square_class(r: &Rat) -> Rat {
    use num::{BigInt, One, Signed, Zero};
    assert!(!r.is_zero());
    let n = r.numer() * r.denom();
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut n = n.abs();
    let mut out = BigInt::one();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut e = 0u32;
        while (&n % &d).is_zero() {
            n = &n / &d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &d;
        }
        d += 1;
    }
    out *= n; // leftover prime
    BigRational::from_integer(out * BigInt::from(sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    #[test]
    fn square_class_reduction() {
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(square_class(&q(4, 1)), q(1, 1));
        assert_eq!(square_class(&q(-18, 1)), q(-2, 1));
        assert_eq!(square_class(&q(1, 2)), q(2, 1));
        assert_eq!(square_class(&q(12, 5)), q(15, 1));
    }
}
