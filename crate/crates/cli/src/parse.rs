//! Text grammars for forms, places, and ordering points.
//!
//! Field elements are expressions in `t` over the rationals with `+ - * / ^`
//! and parentheses.  Forms are `+`-joined sums of `<e1,...,en>` literals,
//! `pf(a1,...,an)` Pfister constructors, `H` for the hyperbolic plane, and
//! `k*<...>` multiples.  The printed (canonical) text of any form or
//! polynomial re-parses to the same value.

use num::{BigInt, BigRational, One};
use witt_core::exact::{AlgebraicReal, Poly, RatFunc};
use witt_core::forms::{pfister, DiagForm, FieldTag};
use witt_core::spectrum::{OrderingPt, Place};

/// A parse failure, with the byte offset where it happened.
#[derive(Debug, Clone)]
pub struct SyntaxError {
    pub pos: usize,
    pub msg: String,
}

impl std::fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "syntax error at position {}: {}", self.pos, self.msg)
    }
}

/// What the CLI parser can report: bad text, or a value the library rejects.
#[derive(Debug)]
pub enum CliParseError {
    Syntax(SyntaxError),
    Domain(witt_core::Error),
}

impl From<witt_core::Error> for CliParseError {
    fn from(e: witt_core::Error) -> Self {
        CliParseError::Domain(e)
    }
}

impl std::fmt::Display for CliParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliParseError::Syntax(e) => write!(f, "{e}"),
            CliParseError::Domain(e) => write!(f, "{e}"),
        }
    }
}

type PResult<T> = Result<T, CliParseError>;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    i: usize,
    len: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> PResult<T> {
    Err(CliParseError::Syntax(SyntaxError {
        pos,
        msg: msg.into(),
    }))
}

impl Lexer {
    fn new(text: &str) -> PResult<Lexer> {
        let bytes: Vec<char> = text.chars().collect();
        let mut toks = vec![];
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                toks.push((start, Tok::Int(s.parse().unwrap())));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                toks.push((start, Tok::Ident(bytes[start..i].iter().collect())));
            } else if "+-*/^()<>,:".contains(c) {
                toks.push((i, Tok::Sym(c)));
                i += 1;
            } else {
                return err(i, format!("unexpected character '{c}'"));
            }
        }
        Ok(Lexer {
            len: text.len(),
            toks,
            i: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(_, t)| t.clone());
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            err(self.pos(), format!("expected '{c}'"))
        }
    }

    fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn expect_end(&self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            err(self.pos(), "trailing input")
        }
    }
}

// ---------------------------------------------------------------------------
// field-element expressions

fn expr(lx: &mut Lexer) -> PResult<RatFunc> {
    let mut acc = term(lx)?;
    loop {
        if lx.eat_sym('+') {
            acc = &acc + &term(lx)?;
        } else if lx.eat_sym('-') {
            acc = &acc - &term(lx)?;
        } else {
            break;
        }
    }
    Ok(acc)
}

fn term(lx: &mut Lexer) -> PResult<RatFunc> {
    let mut acc = factor(lx)?;
    loop {
        if lx.eat_sym('*') {
            acc = &acc * &factor(lx)?;
        } else if lx.eat_sym('/') {
            let pos = lx.pos();
            let d = factor(lx)?;
            let inv = d
                .recip()
                .map_err(|_| syntax(pos, "division by zero"))?;
            acc = &acc * &inv;
        } else {
            break;
        }
    }
    Ok(acc)
}

fn syntax(pos: usize, msg: &str) -> CliParseError {
    CliParseError::Syntax(SyntaxError {
        pos,
        msg: msg.into(),
    })
}

fn factor(lx: &mut Lexer) -> PResult<RatFunc> {
    if lx.eat_sym('-') {
        return Ok(-&factor(lx)?);
    }
    if lx.eat_sym('+') {
        return factor(lx);
    }
    let base = atom(lx)?;
    if lx.eat_sym('^') {
        let pos = lx.pos();
        match lx.next() {
            Some(Tok::Int(n)) => {
                let n: u32 = n
                    .try_into()
                    .map_err(|_| syntax(pos, "exponent too large"))?;
                let mut acc = RatFunc::one();
                for _ in 0..n {
                    acc = &acc * &base;
                }
                Ok(acc)
            }
            _ => err(pos, "expected a nonnegative integer exponent"),
        }
    } else {
        Ok(base)
    }
}

fn atom(lx: &mut Lexer) -> PResult<RatFunc> {
    let pos = lx.pos();
    match lx.next() {
        Some(Tok::Int(n)) => Ok(RatFunc::from_rational(BigRational::from_integer(n))),
        Some(Tok::Ident(id)) if id == "t" => Ok(RatFunc::var()),
        Some(Tok::Sym('(')) => {
            let e = expr(lx)?;
            lx.expect_sym(')')?;
            Ok(e)
        }
        _ => err(pos, "expected a number, 't', or '('"),
    }
}

/// Parse a field element of Q(t).
pub fn parse_element(text: &str) -> PResult<RatFunc> {
    let mut lx = Lexer::new(text)?;
    let e = expr(&mut lx)?;
    lx.expect_end()?;
    Ok(e)
}

/// Parse a polynomial in t (an element with trivial denominator).
pub fn parse_poly(text: &str) -> PResult<Poly> {
    let e = parse_element(text)?;
    if e.den().is_constant() && e.den().coeff(0).is_one() {
        Ok(e.num().clone())
    } else {
        err(0, "expected a polynomial, found a denominator")
    }
}

// ---------------------------------------------------------------------------
// forms

fn form_primary(lx: &mut Lexer, tag: FieldTag) -> PResult<DiagForm> {
    let pos = lx.pos();
    match lx.peek().cloned() {
        Some(Tok::Sym('<')) => {
            lx.next();
            if lx.eat_sym('>') {
                return Ok(DiagForm::empty(tag));
            }
            let mut entries = vec![expr(lx)?];
            while lx.eat_sym(',') {
                entries.push(expr(lx)?);
            }
            lx.expect_sym('>')?;
            Ok(DiagForm::new(tag, entries)?)
        }
        Some(Tok::Ident(id)) if id == "pf" => {
            lx.next();
            lx.expect_sym('(')?;
            let mut slots = vec![expr(lx)?];
            while lx.eat_sym(',') {
                slots.push(expr(lx)?);
            }
            lx.expect_sym(')')?;
            Ok(pfister(tag, &slots)?)
        }
        Some(Tok::Ident(id)) if id == "H" => {
            lx.next();
            Ok(DiagForm::hyperbolic(tag))
        }
        Some(Tok::Int(k)) => {
            lx.next();
            lx.expect_sym('*')?;
            let k: i64 = k
                .try_into()
                .map_err(|_| syntax(pos, "multiplier too large"))?;
            let f = form_primary(lx, tag)?;
            Ok(f.multiple(k))
        }
        _ => err(pos, "expected '<', 'pf', 'H', or 'k*'"),
    }
}

/// Parse a diagonal form literal over the given field.
pub fn parse_form(text: &str, tag: FieldTag) -> PResult<DiagForm> {
    let mut lx = Lexer::new(text)?;
    let mut acc = form_primary(&mut lx, tag)?;
    while lx.eat_sym('+') {
        let next = form_primary(&mut lx, tag)?;
        acc = acc.orth_sum(&next)?;
    }
    lx.expect_end()?;
    Ok(acc)
}

// ---------------------------------------------------------------------------
// places and ordering points

/// Parse a place literal: a linear polynomial such as `t-2` or `t+1/3` for a
/// rational point, `inf` for the infinite place, `quad:t^2+1` for a
/// complex-residue quadratic place, or `p:5` for a prime of Q.
pub fn parse_place(text: &str) -> PResult<Place> {
    let trimmed = text.trim();
    if trimmed == "inf" {
        return Ok(Place::Infinity);
    }
    if let Some(rest) = trimmed.strip_prefix("p:") {
        let mut lx = Lexer::new(rest)?;
        let neg = lx.eat_sym('-');
        match lx.next() {
            Some(Tok::Int(n)) if !neg => {
                lx.expect_end()?;
                return Ok(Place::Prime(n));
            }
            _ => return err(0, "expected a prime after 'p:'"),
        }
    }
    if let Some(rest) = trimmed.strip_prefix("quad:") {
        let p = parse_poly(rest)?;
        if p.degree() != Some(2) {
            return err(0, "expected a quadratic polynomial after 'quad:'");
        }
        return Ok(Place::QuadraticPoint(p.monic()));
    }
    let p = parse_poly(trimmed)?;
    if p.degree() != Some(1) {
        return err(0, "expected a linear polynomial, 'inf', 'quad:', or 'p:'");
    }
    let a = -(p.coeff(0) / p.coeff(1));
    Ok(Place::RationalPoint(a))
}

fn parse_rational(text: &str) -> PResult<BigRational> {
    let e = parse_element(text)?;
    match e.as_rational() {
        Some(r) => Ok(r),
        None => err(0, "expected a rational number"),
    }
}

/// Parse an ordering point: `Q`, `-inf`, `+inf`, `left(a)`, or `right(a)`
/// with a rational cut value.
pub fn parse_ordering_pt(text: &str) -> PResult<OrderingPt> {
    let trimmed = text.trim();
    match trimmed {
        "Q" => return Ok(OrderingPt::BaseQ),
        "-inf" => return Ok(OrderingPt::MinusInf),
        "+inf" | "inf" => return Ok(OrderingPt::PlusInf),
        _ => {}
    }
    for (prefix, left) in [("left(", true), ("right(", false)] {
        if let Some(rest) = trimmed.strip_prefix(prefix) {
            let Some(inner) = rest.strip_suffix(')') else {
                return err(trimmed.len(), "expected ')'");
            };
            let a = AlgebraicReal::from_rational(parse_rational(inner)?);
            return Ok(if left {
                OrderingPt::Left(a)
            } else {
                OrderingPt::Right(a)
            });
        }
    }
    err(0, "expected 'Q', '-inf', '+inf', 'left(a)', or 'right(a)'")
}

/// Parse a comma-separated list of places.
pub fn parse_places(text: &str) -> PResult<Vec<Place>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_place)
        .collect()
}

/// Parse the field flag.
pub fn parse_field(text: &str) -> PResult<FieldTag> {
    match text {
        "Q" => Ok(FieldTag::Q),
        "Qt" | "Q(t)" => Ok(FieldTag::Qt),
        "RalgT" | "R_alg(t)" => Ok(FieldTag::RalgT),
        _ => err(0, "expected field Q, Qt, or RalgT"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qt(text: &str) -> DiagForm {
        parse_form(text, FieldTag::Qt).unwrap()
    }

    #[test]
    fn literal_form() {
        let f = qt("<1,-t,t^2-4>");
        assert_eq!(f.rank(), 3);
        assert_eq!(f.to_string(), "<1,-t,(t^2 - 4)>");
    }

    #[test]
    fn pfister_expands() {
        let f = parse_form("pf(-1,-1,-1)", FieldTag::Q).unwrap();
        let direct = pfister(
            FieldTag::Q,
            &[RatFunc::from_int(-1), RatFunc::from_int(-1), RatFunc::from_int(-1)],
        )
        .unwrap();
        assert_eq!(f, direct);
        assert_eq!(f.rank(), 8);
    }

    #[test]
    fn hyperbolic_and_multiples() {
        assert_eq!(qt("H"), DiagForm::hyperbolic(FieldTag::Qt));
        assert_eq!(qt("3*<t>").rank(), 3);
        assert_eq!(qt("H + <1>").rank(), 3);
        assert_eq!(qt("2*pf(t)").rank(), 4);
    }

    #[test]
    fn zero_entry_is_a_domain_error() {
        match parse_form("<1,0>", FieldTag::Qt) {
            Err(CliParseError::Domain(witt_core::Error::ZeroEntry)) => {}
            other => panic!("expected zero-entry error, got {other:?}"),
        }
    }

    #[test]
    fn rational_function_entries() {
        let f = qt("<(t^2-4)/(t+1), 3/4*t>");
        assert_eq!(f.rank(), 2);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_form("<1,,2>", FieldTag::Qt) {
            Err(CliParseError::Syntax(e)) => assert_eq!(e.pos, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse_form("<1", FieldTag::Qt).is_err());
        assert!(parse_form("", FieldTag::Qt).is_err());
        assert!(parse_form("<1> junk", FieldTag::Qt).is_err());
    }

    // round trip: print then parse is the identity, on random forms
    #[test]
    fn print_parse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(1..=4);
            let mut entries = vec![];
            for _ in 0..n {
                // random nonzero polynomial entry of degree <= 2
                loop {
                    let coeffs: Vec<i64> =
                        (0..=rng.gen_range(0..=2)).map(|_| rng.gen_range(-5..=5)).collect();
                    if coeffs.iter().any(|&c| c != 0) {
                        let p = Poly::from_coeffs(
                            coeffs
                                .into_iter()
                                .map(|c| BigRational::from_integer(BigInt::from(c)))
                                .collect(),
                        );
                        entries.push(RatFunc::from_poly(p));
                        break;
                    }
                }
            }
            let f = DiagForm::new(FieldTag::Qt, entries).unwrap();
            let text = f.to_string();
            assert_eq!(parse_form(&text, FieldTag::Qt).unwrap(), f, "text: {text}");
        }
    }

    #[test]
    fn places() {
        assert_eq!(
            parse_place("t-0").unwrap(),
            Place::RationalPoint(BigRational::from_integer(BigInt::from(0)))
        );
        assert_eq!(
            parse_place("t+1/2").unwrap(),
            Place::RationalPoint(BigRational::new(BigInt::from(-1), BigInt::from(2)))
        );
        assert_eq!(
            parse_place("2*t-1").unwrap(),
            Place::RationalPoint(BigRational::new(BigInt::from(1), BigInt::from(2)))
        );
        assert_eq!(parse_place("inf").unwrap(), Place::Infinity);
        assert_eq!(parse_place("p:5").unwrap(), Place::Prime(BigInt::from(5)));
        let quad = parse_place("quad:t^2+1").unwrap();
        assert_eq!(
            quad,
            Place::QuadraticPoint(parse_poly("t^2+1").unwrap())
        );
        assert!(parse_place("t^2-1").is_err());
        assert!(parse_place("p:x").is_err());
    }

    #[test]
    fn ordering_pts() {
        assert_eq!(parse_ordering_pt("Q").unwrap(), OrderingPt::BaseQ);
        assert_eq!(parse_ordering_pt("-inf").unwrap(), OrderingPt::MinusInf);
        assert_eq!(parse_ordering_pt("+inf").unwrap(), OrderingPt::PlusInf);
        match parse_ordering_pt("right(1/2)").unwrap() {
            OrderingPt::Right(a) => {
                assert_eq!(
                    a.as_rational(),
                    Some(&BigRational::new(BigInt::from(1), BigInt::from(2)))
                );
            }
            other => panic!("got {other:?}"),
        }
        assert!(parse_ordering_pt("middle(1)").is_err());
    }
}
