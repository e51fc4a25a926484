//! Real algebraic numbers via Sturm's theorem.
//!
//! A point is a squarefree polynomial together with an open rational interval
//! isolating exactly one of its real roots. These points are only ever used
//! for sign queries and step-function breakpoints; there is no field
//! arithmetic on them.

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::poly::{squarefree_factor, Poly};

/// Sign of a rational as -1/0/+1.
pub fn sgn(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// The Sturm chain of `p` (with p squarefree this counts distinct roots).
pub fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero");
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

fn sign_variations(chain: &[Poly], x: &BigRational) -> usize {
    let mut last = 0i32;
    let mut v = 0;
    for p in chain {
        let s = sgn(&p.eval(x));
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

fn sign_variations_at_inf(chain: &[Poly], plus: bool) -> usize {
    let mut last = 0i32;
    let mut v = 0;
    for p in chain {
        if p.is_zero() {
            continue;
        }
        let mut s = sgn(&p.leading_coeff());
        if !plus && p.degree().unwrap() % 2 == 1 {
            s = -s;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Number of distinct real roots of squarefree `p` in the half-open interval (a, b].
pub fn count_roots_in(chain: &[Poly], a: &BigRational, b: &BigRational) -> usize {
    sign_variations(chain, a) - sign_variations(chain, b)
}

/// A real algebraic number: one root of a squarefree polynomial isolated by
/// an open interval whose endpoints are not roots.
#[derive(Debug, Clone)]
pub struct AlgebraicReal {
    min_poly: Poly,
    lo: BigRational,
    hi: BigRational,
    /// Cached exact value for degree-one minimal polynomials.
    rational: Option<BigRational>,
}

impl AlgebraicReal {
    pub fn from_rational(r: BigRational) -> Self {
        let lo = &r - BigRational::one();
        let hi = &r + BigRational::one();
        AlgebraicReal {
            min_poly: Poly::linear(&r),
            lo,
            hi,
            rational: Some(r),
        }
    }

    pub fn from_int(n: i64) -> Self {
        AlgebraicReal::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Build from a squarefree polynomial and an isolating interval.
    /// The caller guarantees exactly one root in (lo, hi); this is checked.
    pub fn new(min_poly: Poly, lo: BigRational, hi: BigRational) -> Result<Self> {
        if min_poly.is_zero() || min_poly.is_constant() {
            return Err(Error::ZeroPolynomial);
        }
        if !min_poly.eval(&lo).is_zero() && !min_poly.eval(&hi).is_zero() {
            let chain = sturm_chain(&min_poly);
            if count_roots_in(&chain, &lo, &hi) != 1 {
                return Err(Error::Other("interval does not isolate one root".into()));
            }
        } else {
            return Err(Error::Other("interval endpoint is a root".into()));
        }
        // detect a rational root inside the interval
        let mut rational = None;
        if min_poly.degree() == Some(1) {
            rational = Some(-min_poly.coeff(0) / min_poly.coeff(1));
        } else {
            for r in crate::exact::poly::rational_roots(&min_poly) {
                if r > lo && r < hi {
                    rational = Some(r);
                    break;
                }
            }
        }
        Ok(AlgebraicReal {
            min_poly,
            lo,
            hi,
            rational,
        })
    }

    pub fn min_poly(&self) -> &Poly {
        &self.min_poly
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.rational.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.rational.is_some()
    }

    /// Halve the isolating interval once. Pure: returns a refined copy.
    fn refined(&self) -> AlgebraicReal {
        if let Some(r) = &self.rational {
            let w = (&self.hi - &self.lo) / BigRational::from_integer(BigInt::from(4));
            return AlgebraicReal {
                min_poly: self.min_poly.clone(),
                lo: r - &w,
                hi: r + &w,
                rational: self.rational.clone(),
            };
        }
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2));
        let vm = self.min_poly.eval(&mid);
        if vm.is_zero() {
            // squarefree mid root: the number is exactly mid (rational)
            return AlgebraicReal::from_rational(mid);
        }
        let slo = sgn(&self.min_poly.eval(&self.lo));
        if slo != sgn(&vm) {
            AlgebraicReal {
                min_poly: self.min_poly.clone(),
                lo: self.lo.clone(),
                hi: mid,
                rational: None,
            }
        } else {
            AlgebraicReal {
                min_poly: self.min_poly.clone(),
                lo: mid,
                hi: self.hi.clone(),
                rational: None,
            }
        }
    }

    /// A copy whose interval width is below `eps`.
    pub fn refined_below(&self, eps: &BigRational) -> AlgebraicReal {
        let mut a = self.clone();
        while &(&a.hi - &a.lo) >= eps {
            a = a.refined();
        }
        a
    }

    /// A rational strictly greater than the number, as close as the current
    /// refinement makes it.
    pub fn upper(&self) -> BigRational {
        self.hi.clone()
    }

    pub fn lower(&self) -> BigRational {
        self.lo.clone()
    }
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for AlgebraicReal {}

impl PartialOrd for AlgebraicReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.rational, &other.rational) {
            (Some(a), Some(b)) => return a.cmp(b),
            (Some(a), None) => return cmp_rational_algebraic(a, other).reverse(),
            (None, Some(b)) => return cmp_rational_algebraic(b, self),
            (None, None) => {}
        }
        // equal iff the gcd of the defining polynomials has a root in the
        // intersection of the isolating intervals
        let g = self.min_poly.gcd(&other.min_poly);
        if !g.is_constant() {
            let lo = self.lo.clone().max(other.lo.clone());
            let hi = self.hi.clone().min(other.hi.clone());
            if lo < hi {
                let chain = sturm_chain(&g);
                if count_roots_in(&chain, &lo, &hi) >= 1 {
                    return Ordering::Equal;
                }
            }
        }
        // distinct: refine until the intervals separate
        let mut a = self.clone();
        let mut b = other.clone();
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            a = a.refined();
            b = b.refined();
        }
    }
}

fn cmp_rational_algebraic(r: &BigRational, alpha: &AlgebraicReal) -> Ordering {
    // compares alpha with r (result: alpha vs r)
    if alpha.min_poly.eval(r).is_zero() {
        // r is a root of alpha's polynomial; it is alpha iff it lies inside
        if *r > alpha.lo && *r < alpha.hi {
            return Ordering::Equal;
        }
    }
    let mut a = alpha.clone();
    loop {
        if &a.hi <= r {
            return Ordering::Less;
        }
        if &a.lo >= r {
            return Ordering::Greater;
        }
        a = a.refined();
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rational {
            Some(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            None => write!(f, "root of {} in ({}, {})", self.min_poly, self.lo, self.hi),
        }
    }
}

/// Isolate all distinct real roots of `p`, sorted.
pub fn isolate_real_roots(p: &Poly) -> Result<Vec<AlgebraicReal>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(vec![]);
    }
    let (_, factors) = squarefree_factor(p)?;
    let mut out: Vec<AlgebraicReal> = vec![];
    for (f, _) in factors {
        out.extend(isolate_squarefree(&f)?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn isolate_squarefree(f: &Poly) -> Result<Vec<AlgebraicReal>> {
    if f.degree() == Some(1) {
        let r = -f.coeff(0) / f.coeff(1);
        return Ok(vec![AlgebraicReal::from_rational(r)]);
    }
    let chain = sturm_chain(f);
    let total = sign_variations_at_inf(&chain, false) - sign_variations_at_inf(&chain, true);
    if total == 0 {
        return Ok(vec![]);
    }
    let bound = f.root_bound();
    // nudge the bound off any root
    let mut lo = -&bound - BigRational::one();
    let mut hi = &bound + BigRational::one();
    while f.eval(&lo).is_zero() {
        lo -= BigRational::one();
    }
    while f.eval(&hi).is_zero() {
        hi += BigRational::one();
    }
    let mut out = vec![];
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        let n = count_roots_in(&chain, &a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 && !f.eval(&b).is_zero() {
            out.push(AlgebraicReal::new(f.clone(), a, b)?);
            continue;
        }
        let mut mid = (&a + &b) / BigRational::from_integer(BigInt::from(2));
        if f.eval(&mid).is_zero() {
            // shift the cut point off the root
            let w = (&b - &a) / BigRational::from_integer(BigInt::from(64));
            mid += w;
        }
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort();
    Ok(out)
}

/// Exact sign of `g` at the real algebraic point `alpha`.
pub fn sign_at_point(g: &Poly, alpha: &AlgebraicReal) -> i32 {
    if g.is_zero() {
        return 0;
    }
    if let Some(r) = alpha.as_rational() {
        return sgn(&g.eval(r));
    }
    // zero iff alpha is a common root of g and its defining polynomial
    let h = g.gcd(alpha.min_poly());
    if !h.is_constant() {
        let chain = sturm_chain(&h);
        let (lo, hi) = alpha.interval();
        if count_roots_in(&chain, lo, hi) >= 1 {
            return 0;
        }
    }
    // refine alpha's interval until it excludes every root of g, then any
    // sample point in it carries the sign
    let roots = isolate_real_roots(g).expect("nonzero");
    let mut a = alpha.clone();
    for r in &roots {
        let mut r2 = r.clone();
        while r2.upper() > a.lower() && r2.lower() < a.upper() {
            a = a.refined();
            r2 = r2.refined();
        }
    }
    let mid = (a.lower() + a.upper()) / BigRational::from_integer(BigInt::from(2));
    sgn(&g.eval(&mid))
}
