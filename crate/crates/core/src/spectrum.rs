//! The real spectrum of the supported fields as an explicit point set, and
//! step functions as sections of the constant sheaves 2^j Z over it.
//!
//! For the function fields the orderings are the two infinite points plus a
//! left and a right cut at every real algebraic number. Free transcendental
//! cuts are excluded: every sign function arising from a form is determined
//! by finitely many polynomial sign conditions, so algebraic cuts suffice.

use std::fmt;

use num::{BigInt, BigRational, Integer, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{sgn, AlgebraicReal, Poly, Rat, RatFunc};

/// A point of the real spectrum of a supported base field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderingPt {
    /// The unique ordering of Q.
    BaseQ,
    MinusInf,
    Left(AlgebraicReal),
    Right(AlgebraicReal),
    PlusInf,
}

impl fmt::Display for OrderingPt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingPt::BaseQ => write!(f, "Q"),
            OrderingPt::MinusInf => write!(f, "-inf"),
            OrderingPt::Left(a) => write!(f, "left({a})"),
            OrderingPt::Right(a) => write!(f, "right({a})"),
            OrderingPt::PlusInf => write!(f, "+inf"),
        }
    }
}

/// sgn_P(f) for a nonzero rational function at an ordering of the function
/// field: the sign of f on a small interval on the chosen side of the cut.
pub fn sign_at_ordering_pt(f: &RatFunc, pt: &OrderingPt) -> Result<i32> {
    if f.is_zero() {
        return Err(Error::ZeroEntry);
    }
    let p = f.sign_poly();
    let s = match pt {
        OrderingPt::BaseQ => {
            let c = f
                .as_rational()
                .ok_or_else(|| Error::InvalidPlace("Q ordering needs a constant".into()))?;
            sgn(&c)
        }
        OrderingPt::PlusInf => sgn(&p.leading_coeff()),
        OrderingPt::MinusInf => {
            let s = sgn(&p.leading_coeff());
            if p.degree().unwrap() % 2 == 1 {
                -s
            } else {
                s
            }
        }
        OrderingPt::Left(alpha) => sign_beside(&p, alpha, false),
        OrderingPt::Right(alpha) => sign_beside(&p, alpha, true),
    };
    Ok(s)
}

/// Sign of a nonzero polynomial immediately to one side of `alpha`, by exact
/// sampling: isolate all roots, pick a rational strictly between alpha and
/// its neighbor.
fn sign_beside(p: &Poly, alpha: &AlgebraicReal, right: bool) -> i32 {
    let roots = crate::exact::isolate_real_roots(p).expect("nonzero");
    // position of alpha among the roots
    let mut a = alpha.clone();
    // refine away from every distinct root
    for r in &roots {
        if r == alpha {
            continue;
        }
        let mut r2 = r.clone();
        while r2.upper() > a.lower() && r2.lower() < a.upper() {
            let (lo, hi) = r2.interval();
            let eps = (hi - lo) / BigRational::from_integer(BigInt::from(2));
            r2 = r2.refined_below(&eps);
            let (lo, hi) = a.interval();
            let eps = (hi - lo) / BigRational::from_integer(BigInt::from(2));
            a = a.refined_below(&eps);
        }
    }
    // a's interval now meets no other root; the adjacent root region on the
    // chosen side is outside of it, so the interval endpoint is a valid sample
    // unless it hits alpha itself being a root of p
    let sample = if right { a.upper() } else { a.lower() };
    let v = p.eval(&sample);
    if !v.is_zero() {
        sgn(&v)
    } else {
        // endpoint coincided with a root (possible only for rational alpha);
        // nudge inward
        let (lo, hi) = a.interval();
        let w = (hi - lo) / BigRational::from_integer(BigInt::from(4096));
        let sample = if right { a.upper() - w } else { a.lower() + w };
        sgn(&p.eval(&sample))
    }
}

/// A discrete valuation of a supported field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    /// Finite rational point t = a with uniformizer t - a.
    RationalPoint(Rat),
    /// Finite irrational real algebraic point (RalgT only).
    AlgebraicPoint(AlgebraicReal),
    /// Complex-residue place: a monic irreducible quadratic with negative
    /// discriminant (RalgT only).
    QuadraticPoint(Poly),
    /// The infinite place, uniformizer 1/t.
    Infinity,
    /// A prime of Q.
    Prime(BigInt),
}

impl Place {
    pub fn is_real(&self) -> bool {
        matches!(
            self,
            Place::RationalPoint(_) | Place::AlgebraicPoint(_) | Place::Infinity
        )
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::RationalPoint(a) => {
                if a.is_negative() || a.is_zero() {
                    write!(f, "t+{}", fmt_rat(&-a.clone()))
                } else {
                    write!(f, "t-{}", fmt_rat(a))
                }
            }
            Place::AlgebraicPoint(a) => write!(f, "alg:{a}"),
            Place::QuadraticPoint(q) => write!(f, "quad:{q}"),
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "p:{p}"),
        }
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An open subset of the (affine or projective) line over the real closure:
/// the whole line minus finitely many removed places.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenSet {
    pub projective: bool,
    pub removed: Vec<Place>,
}

impl OpenSet {
    pub fn affine_line() -> OpenSet {
        OpenSet { projective: false, removed: vec![] }
    }

    pub fn projective_line() -> OpenSet {
        OpenSet { projective: true, removed: vec![] }
    }

    pub fn affine_minus(removed: Vec<Place>) -> OpenSet {
        OpenSet { projective: false, removed }
    }

    /// Whether the place belongs to this open set.
    pub fn contains(&self, v: &Place) -> bool {
        if let Place::Infinity = v {
            if !self.projective {
                return false;
            }
        }
        !self.removed.contains(v)
    }
}

/// A section of the constant sheaf 2^j Z over the real spectrum of the
/// function field: finitely many breakpoints with integer values on the open
/// intervals between them (left to right, length = breakpoints + 1).
///
/// Values "at" a breakpoint are not stored; breakpoints are not orderings of
/// the function field, only their two sides are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFn {
    level: u32,
    breakpoints: Vec<AlgebraicReal>,
    values: Vec<BigInt>,
}

impl StepFn {
    /// Canonicalize: breakpoints sorted strictly increasing (enforced),
    /// adjacent equal values merged, level = min 2-adic valuation of the
    /// values (at least `level_hint`).
    pub fn new(
        level_hint: u32,
        breakpoints: Vec<AlgebraicReal>,
        values: Vec<BigInt>,
    ) -> Result<StepFn> {
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::Other(
                "step function needs breakpoints+1 values".into(),
            ));
        }
        for w in breakpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Other("breakpoints must be strictly increasing".into()));
            }
        }
        let mut bs = vec![];
        let mut vs = vec![values[0].clone()];
        for (b, v) in breakpoints.into_iter().zip(values.into_iter().skip(1)) {
            if &v == vs.last().unwrap() {
                continue;
            }
            bs.push(b);
            vs.push(v);
        }
        let level = step_level(level_hint, &vs);
        Ok(StepFn { level, breakpoints: bs, values: vs })
    }

    pub fn constant(level_hint: u32, v: BigInt) -> StepFn {
        let level = step_level(level_hint, std::slice::from_ref(&v));
        StepFn { level, breakpoints: vec![], values: vec![v] }
    }

    pub fn zero() -> StepFn {
        StepFn::constant(0, BigInt::zero())
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn breakpoints(&self) -> &[AlgebraicReal] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn is_constant(&self) -> bool {
        self.breakpoints.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.values[0].is_zero()
    }

    /// The interval value containing the ordering point. Left/Right at a
    /// breakpoint select the adjacent interval on the corresponding side.
    pub fn eval(&self, pt: &OrderingPt) -> BigInt {
        let idx = match pt {
            OrderingPt::BaseQ => 0, // constant sections over Q
            OrderingPt::MinusInf => 0,
            OrderingPt::PlusInf => self.values.len() - 1,
            OrderingPt::Right(a) => self.breakpoints.iter().filter(|b| *b <= a).count(),
            OrderingPt::Left(a) => self.breakpoints.iter().filter(|b| *b < a).count(),
        };
        self.values[idx].clone()
    }

    /// Pointwise combination of two step functions.
    fn zip_with(&self, other: &StepFn, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> StepFn {
        let mut bs: Vec<AlgebraicReal> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .cloned()
            .collect();
        bs.sort();
        bs.dedup();
        let mut values = vec![f(&self.values[0], &other.values[0])];
        for b in &bs {
            let pt = OrderingPt::Right(b.clone());
            values.push(f(&self.eval(&pt), &other.eval(&pt)));
        }
        StepFn::new(0, bs, values).expect("canonical inputs")
    }

    pub fn add(&self, other: &StepFn) -> StepFn {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &StepFn) -> StepFn {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &StepFn) -> StepFn {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, k: &BigInt) -> StepFn {
        let values = self.values.iter().map(|v| v * k).collect();
        StepFn::new(0, self.breakpoints.clone(), values).expect("canonical")
    }

    /// The jump s(right) - s(left) across a point.
    pub fn jump_at(&self, a: &AlgebraicReal) -> BigInt {
        self.eval(&OrderingPt::Right(a.clone())) - self.eval(&OrderingPt::Left(a.clone()))
    }
}

fn step_level(hint: u32, values: &[BigInt]) -> u32 {
    let mut min: Option<u32> = None;
    for v in values {
        if v.is_zero() {
            continue;
        }
        let mut x = v.abs();
        let mut e = 0u32;
        while x.is_even() {
            x /= 2;
            e += 1;
        }
        min = Some(min.map_or(e, |m| m.min(e)));
    }
    match min {
        None => hint, // identically zero: lies in every 2^j Z
        Some(m) => m,
    }
}

/// JSON-facing representation of a step function. Breakpoints are rational
/// literals (as strings "p/q") or exact interval pairs with the defining
/// polynomial for irrational points.
#[derive(Debug, Serialize, Deserialize)]
pub struct StepFnJson {
    pub level: u32,
    pub breakpoints: Vec<serde_json::Value>,
    pub values: Vec<String>,
}

impl StepFn {
    pub fn to_json(&self) -> StepFnJson {
        let breakpoints = self
            .breakpoints
            .iter()
            .map(|b| match b.as_rational() {
                Some(r) => serde_json::Value::String(fmt_rat(r)),
                None => {
                    let (lo, hi) = b.interval();
                    serde_json::json!({
                        "poly": b.min_poly().to_string(),
                        "interval": [fmt_rat(lo), fmt_rat(hi)],
                    })
                }
            })
            .collect();
        StepFnJson {
            level: self.level,
            breakpoints,
            values: self.values.iter().map(|v| v.to_string()).collect(),
        }
    }
}

/// The residue map on sign functions determined by a uniformizer: the
/// difference of the section values at the two orderings extending the
/// residue ordering, the positive-uniformizer side first. At a
/// complex-residue place the residue real spectrum is empty and the map is
/// zero.
pub fn beta(s: &StepFn, v: &Place) -> Result<BigInt> {
    match v {
        Place::RationalPoint(a) => {
            let alpha = AlgebraicReal::from_rational(a.clone());
            Ok(s.jump_at(&alpha))
        }
        Place::AlgebraicPoint(alpha) => Ok(s.jump_at(alpha)),
        // uniformizer 1/t is positive at +inf
        Place::Infinity => Ok(s.eval(&OrderingPt::PlusInf) - s.eval(&OrderingPt::MinusInf)),
        Place::QuadraticPoint(_) => Ok(BigInt::zero()),
        Place::Prime(p) => Err(Error::InvalidPlace(format!("p:{p} has no real residue"))),
    }
}

/// Membership of a step function in the sections of 2^j Z over an open subset
/// of the line: beta vanishes at every retained real place and the values lie
/// in 2^j Z.
pub fn supp_section_member(s: &StepFn, u: &OpenSet, j: u32) -> bool {
    let two_j = BigInt::from(1) << j;
    if !s.values().iter().all(|v| (v % &two_j).is_zero()) {
        return false;
    }
    for b in s.breakpoints() {
        let place = match b.as_rational() {
            Some(r) => Place::RationalPoint(r.clone()),
            None => Place::AlgebraicPoint(b.clone()),
        };
        if u.contains(&place) && !s.jump_at(b).is_zero() {
            return false;
        }
    }
    if u.projective && u.contains(&Place::Infinity) {
        if !(s.eval(&OrderingPt::PlusInf) - s.eval(&OrderingPt::MinusInf)).is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    fn step(level: u32, bps: &[i64], vals: &[i64]) -> StepFn {
        StepFn::new(
            level,
            bps.iter().map(|&b| AlgebraicReal::from_int(b)).collect(),
            vals.iter().map(|&v| BigInt::from(v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn constant_eval() {
        let s = StepFn::constant(0, BigInt::from(5));
        for pt in [
            OrderingPt::MinusInf,
            OrderingPt::PlusInf,
            OrderingPt::Left(AlgebraicReal::from_int(3)),
            OrderingPt::Right(AlgebraicReal::from_int(-7)),
        ] {
            assert_eq!(s.eval(&pt), BigInt::from(5));
        }
    }

    #[test]
    fn sides_at_breakpoint() {
        let s = step(0, &[0], &[0, 2]);
        assert_eq!(s.eval(&OrderingPt::Right(AlgebraicReal::from_int(0))), BigInt::from(2));
        assert_eq!(s.eval(&OrderingPt::Left(AlgebraicReal::from_int(0))), BigInt::from(0));
        assert_eq!(s.level(), 1);
    }

    #[test]
    fn merge_adjacent_equal_values() {
        let s = step(0, &[0, 1], &[4, 4, 0]);
        assert_eq!(s.breakpoints().len(), 1);
        assert_eq!(s.values(), &[BigInt::from(4), BigInt::from(0)]);
        assert_eq!(s.level(), 2);
    }

    #[test]
    fn beta_of_constant_is_zero() {
        let s = StepFn::constant(0, BigInt::from(7));
        for v in [
            Place::RationalPoint(q(0)),
            Place::Infinity,
            Place::QuadraticPoint(Poly::from_coeffs(vec![q(1), q(0), q(1)])),
        ] {
            assert_eq!(beta(&s, &v).unwrap(), BigInt::zero());
        }
    }

    #[test]
    fn beta_detects_jump() {
        let s = step(0, &[0], &[-1, 1]);
        assert_eq!(beta(&s, &Place::RationalPoint(q(0))).unwrap(), BigInt::from(2));
        assert_eq!(beta(&s, &Place::RationalPoint(q(1))).unwrap(), BigInt::zero());
        // at infinity: s(+inf) - s(-inf) = 1 - (-1) = 2
        assert_eq!(beta(&s, &Place::Infinity).unwrap(), BigInt::from(2));
    }

    #[test]
    fn section_membership() {
        let s = step(0, &[0], &[0, 2]);
        let u_minus0 = OpenSet::affine_minus(vec![Place::RationalPoint(q(0))]);
        assert!(supp_section_member(&s, &u_minus0, 0));
        assert!(supp_section_member(&s, &u_minus0, 1));
        assert!(!supp_section_member(&s, &u_minus0, 2)); // 2 not in 4Z
        assert!(!supp_section_member(&s, &OpenSet::affine_line(), 0));
        // level-2 example: 4*indicator(t<1) over line minus {1}
        let s2 = step(0, &[1], &[4, 0]);
        let u_minus1 = OpenSet::affine_minus(vec![Place::RationalPoint(q(1))]);
        assert!(supp_section_member(&s2, &u_minus1, 2));
    }

    #[test]
    fn projective_sections_are_constant() {
        // nonconstant step over the full projective line is never a section
        let s = step(0, &[0], &[0, 2]);
        assert!(!supp_section_member(&s, &OpenSet::projective_line(), 0));
        let c = StepFn::constant(0, BigInt::from(6));
        assert!(supp_section_member(&c, &OpenSet::projective_line(), 0));
    }

    #[test]
    fn sign_of_rational_functions_at_cuts() {
        let t = RatFunc::var();
        assert_eq!(
            sign_at_ordering_pt(&t, &OrderingPt::Right(AlgebraicReal::from_int(0))).unwrap(),
            1
        );
        assert_eq!(sign_at_ordering_pt(&t, &OrderingPt::MinusInf).unwrap(), -1);
        // (t-1)/(t+1) just left of 1: negative
        let f = RatFunc::new(Poly::linear(&q(1)), Poly::linear(&q(-1))).unwrap();
        assert_eq!(
            sign_at_ordering_pt(&f, &OrderingPt::Left(AlgebraicReal::from_int(1))).unwrap(),
            -1
        );
        assert_eq!(
            sign_at_ordering_pt(&f, &OrderingPt::Right(AlgebraicReal::from_int(1))).unwrap(),
            1
        );
        assert!(sign_at_ordering_pt(&RatFunc::zero(), &OrderingPt::PlusInf).is_err());
    }
}
