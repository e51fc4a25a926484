//! Univariate polynomials over Q, dense representation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// A polynomial in `t` with rational coefficients, stored by ascending degree.
/// The zero polynomial has an empty coefficient vector; otherwise the leading
/// coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    /// The variable `t`.
    pub fn var() -> Self {
        Poly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    /// `t - a`.
    pub fn linear(a: &BigRational) -> Self {
        Poly::from_coeffs(vec![-a.clone(), BigRational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading_coeff();
        self.scale(&lc.recip())
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division: returns (quotient, remainder).
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let dd = d.degree().unwrap();
        let dlc = d.leading_coeff();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let q = rem.last().unwrap() / &dlc;
            if !q.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    let v = &rem[k + i] - c * &q;
                    rem[k + i] = v;
                }
            }
            quot[k] = q;
            rem.pop();
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Other(format!("inexact polynomial division by {d}")));
        }
        Ok(q)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of `a` as a root (0 if not a root).
    pub fn root_multiplicity(&self, a: &BigRational) -> usize {
        if self.is_zero() {
            return 0;
        }
        let lin = Poly::linear(a);
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() && p.eval(a).is_zero() {
            p = p.exact_div(&lin).expect("root divides");
            m += 1;
        }
        m
    }

    /// Valuation of `self` at the monic irreducible `q`: the largest k with q^k | self.
    pub fn valuation_at(&self, q: &Poly) -> usize {
        assert!(!self.is_zero() && !q.is_zero() && !q.is_constant());
        let mut p = self.clone();
        let mut v = 0;
        loop {
            let (quot, rem) = p.div_rem(q).expect("nonzero divisor");
            if rem.is_zero() {
                v += 1;
                p = quot;
                if p.is_zero() {
                    break;
                }
            } else {
                break;
            }
        }
        v
    }

    /// Cauchy bound: every real root lies in (-M, M).
    pub fn root_bound(&self) -> BigRational {
        let lc = self.leading_coeff();
        assert!(!lc.is_zero());
        let mut maxabs = BigRational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let a = (c / &lc).abs();
            if a > maxabs {
                maxabs = a;
            }
        }
        maxabs + BigRational::one()
    }
}

impl<'a> Add for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        Poly::from_coeffs(out)
    }
}

impl<'a> Sub for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        Poly::from_coeffs(out)
    }
}

impl<'a> Mul for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let v = &out[i + j] + a * b;
                out[i + j] = v;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

fn fmt_coeff(c: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    /// Canonical text: descending powers, reduced rationals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if i == 0 {
                fmt_coeff(&a, f)?;
            } else {
                if !a.is_one() {
                    fmt_coeff(&a, f)?;
                    write!(f, "*")?;
                }
                if i == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{i}")?;
                }
            }
        }
        Ok(())
    }
}

/// Squarefree factorization by Yun's algorithm, refined by rational-root
/// extraction so that linear factors split off whenever they exist.
///
/// Returns `(constant, factors)` with each factor monic and squarefree,
/// pairwise coprime, and `constant * prod f_i^{m_i} == p`.
pub fn squarefree_factor(p: &Poly) -> Result<(BigRational, Vec<(Poly, usize)>)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let constant = p.leading_coeff();
    let f = p.monic();
    let mut factors: Vec<(Poly, usize)> = vec![];
    if f.is_constant() {
        return Ok((constant, factors));
    }
    // Yun
    let df = f.derivative();
    let a = f.gcd(&df);
    let mut b = f.exact_div(&a)?;
    let mut c = df.exact_div(&a)?;
    let mut i = 1usize;
    loop {
        let d = &c - &b.derivative();
        if b.is_constant() && d.is_zero() {
            break;
        }
        let g = b.gcd(&d);
        if !g.is_constant() {
            factors.push((g.clone(), i));
        }
        b = b.exact_div(&g)?;
        c = d.exact_div(&g)?;
        i += 1;
        if b.is_constant() {
            break;
        }
    }
    // refine squarefree parts by splitting off rational roots
    let mut refined = vec![];
    for (g, m) in factors {
        for piece in split_rational_roots(&g)? {
            refined.push((piece, m));
        }
    }
    refined.sort_by(|x, y| cmp_poly(&x.0, &y.0));
    Ok((constant, refined))
}

fn cmp_poly(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| {
            for i in (0..a.coeffs().len()).rev() {
                let o = a.coeff(i).cmp(&b.coeff(i));
                if o != std::cmp::Ordering::Equal {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        })
}

/// Split a monic squarefree polynomial into linear factors for each rational
/// root plus the rootless remainder (if nonconstant).
fn split_rational_roots(g: &Poly) -> Result<Vec<Poly>> {
    let mut out = vec![];
    let mut rest = g.clone();
    for r in rational_roots(g) {
        out.push(Poly::linear(&r));
        rest = rest.exact_div(&Poly::linear(&r))?;
    }
    if !rest.is_constant() {
        out.push(rest);
    }
    Ok(out)
}

/// All rational roots of a nonzero polynomial, sorted.
pub fn rational_roots(p: &Poly) -> Vec<BigRational> {
    assert!(!p.is_zero());
    if p.is_constant() {
        return vec![];
    }
    // clear denominators to an integer polynomial
    let mut denlcm = BigInt::one();
    for c in p.coeffs() {
        denlcm = num::integer::lcm(denlcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&denlcm / c.denom()))
        .collect();
    // strip t^k
    let k = ints.iter().position(|c| !c.is_zero()).unwrap();
    let mut roots = std::collections::BTreeSet::new();
    if k > 0 {
        roots.insert(BigRational::zero());
    }
    let ints = &ints[k..];
    if ints.len() > 1 {
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        for p0 in divisors(&a0) {
            for q0 in divisors(&an) {
                for sign in [1i32, -1] {
                    let cand = BigRational::new(&p0 * BigInt::from(sign), q0.clone());
                    if p.eval(&cand).is_zero() {
                        roots.insert(cand);
                    }
                }
            }
        }
    }
    roots.into_iter().collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut out = vec![];
    let mut d = BigInt::one();
    loop {
        if (&d * &d) > *n {
            break;
        }
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn poly(cs: &[i64]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|&c| q(c)).collect())
    }

    /// Oracle for squarefree factorization: re-expand the product and
    /// compare coefficients with the input.
    fn expand(constant: &BigRational, factors: &[(Poly, usize)]) -> Poly {
        let mut acc = Poly::constant(constant.clone());
        for (f, m) in factors {
            acc = &acc * &f.pow(*m as u32);
        }
        acc
    }

    #[test]
    fn squarefree_double_root() {
        // t^2 - 2t + 1 = (t-1)^2
        let p = poly(&[1, -2, 1]);
        let (c, fs) = squarefree_factor(&p).unwrap();
        assert_eq!(c, q(1));
        assert_eq!(fs, vec![(poly(&[-1, 1]), 2)]);
        assert_eq!(expand(&c, &fs), p);
    }

    #[test]
    fn squarefree_of_t() {
        let p = Poly::var();
        let (c, fs) = squarefree_factor(&p).unwrap();
        assert_eq!(c, q(1));
        assert_eq!(fs, vec![(Poly::var(), 1)]);
    }

    #[test]
    fn squarefree_full_split() {
        // t^3 - t = t(t-1)(t+1)
        let p = poly(&[0, -1, 0, 1]);
        let (c, fs) = squarefree_factor(&p).unwrap();
        assert_eq!(fs.len(), 3);
        for (f, m) in &fs {
            assert_eq!(*m, 1);
            assert_eq!(f.degree(), Some(1));
        }
        assert_eq!(expand(&c, &fs), p);
    }

    #[test]
    fn squarefree_mixed_multiplicities() {
        // (t-1)^2 (t+2)^3 t
        let p = &(&poly(&[-1, 1]).pow(2) * &poly(&[2, 1]).pow(3)) * &Poly::var();
        let (c, fs) = squarefree_factor(&p).unwrap();
        assert_eq!(expand(&c, &fs), p);
        // pairwise coprime
        for i in 0..fs.len() {
            for j in i + 1..fs.len() {
                assert!(fs[i].0.gcd(&fs[j].0).is_constant());
            }
        }
    }

    #[test]
    fn squarefree_rejects_zero() {
        assert_eq!(squarefree_factor(&Poly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = poly(&[3, 1, 4, 1, 5]);
        let b = poly(&[2, 7, 1]);
        let (quot, rem) = a.div_rem(&b).unwrap();
        assert_eq!(&(&quot * &b) + &rem, a);
        assert!(rem.degree() < b.degree());
    }

    #[test]
    fn display_descending() {
        let p = poly(&[1, 0, -2]);
        assert_eq!(p.to_string(), "-2*t^2 + 1");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::linear(&q(1)).to_string(), "t - 1");
    }

    #[test]
    fn rational_roots_found() {
        // roots 1/2 and -3
        let p = &poly(&[-1, 2]) * &poly(&[3, 1]);
        let roots = rational_roots(&p);
        assert_eq!(roots, vec![q(-3), BigRational::new(BigInt::from(1), BigInt::from(2))]);
    }
}
