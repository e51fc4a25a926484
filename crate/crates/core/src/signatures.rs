//! Pointwise and total signatures of diagonal forms, and the 2-multiplication
//! ladder between fundamental-ideal powers over Q in the stable range.

use num::BigInt;

use crate::error::{Error, Result};
use crate::exact::AlgebraicReal;
use crate::forms::{fundamental_generator_q, in_fundamental_power_q, invariants_q, DiagForm, FieldTag};
use crate::spectrum::{sign_at_ordering_pt, OrderingPt, StepFn};

/// Signature of a form at one ordering point: the sum of the entry signs,
/// i.e. n_+ - n_-.
pub fn sign_at(form: &DiagForm, pt: &OrderingPt) -> Result<i64> {
    let mut total = 0i64;
    for e in form.entries() {
        total += sign_at_ordering_pt(e, pt)? as i64;
    }
    Ok(total)
}

/// The total signature of a form over a function field, as an exact step
/// function on the real spectrum. Breakpoints are the real roots and poles
/// of the entries; the value on each interval (and at +/-infinity) is the
/// pointwise signature there.
///
/// `j_hint` is a caller-supplied certificate that the form lies in I^j; the
/// returned level is at least the hint even if every value happens to be
/// divisible by a higher power of two (e.g. the zero function).
pub fn total_signature(form: &DiagForm, j_hint: u32) -> Result<StepFn> {
    let mut breakpoints: Vec<AlgebraicReal> = vec![];
    for e in form.entries() {
        for root in crate::exact::isolate_real_roots(&e.sign_poly())? {
            breakpoints.push(root);
        }
    }
    breakpoints.sort();
    breakpoints.dedup();

    let mut values = Vec::with_capacity(breakpoints.len() + 1);
    values.push(BigInt::from(sign_at(form, &OrderingPt::MinusInf)?));
    for b in &breakpoints {
        values.push(BigInt::from(sign_at(form, &OrderingPt::Right(b.clone()))?));
    }
    StepFn::new(j_hint, breakpoints, values)
}

/// Constructive halving in the colimit ladder over Q: given a form certified
/// in I^j with j >= 4, return psi in I^{j-1} with psi + psi Witt-equal to the
/// input. In the stable range the signature is a complete invariant, so psi
/// is the signature-matched multiple of the I^{j-1} generator.
pub fn halve_in_colimit(form: &DiagForm, j: u32) -> Result<DiagForm> {
    if j < 4 {
        return Err(Error::BelowStableRange(j));
    }
    if form.tag() != FieldTag::Q || !in_fundamental_power_q(form, j)? {
        return Err(Error::NotInFundamentalPower(j));
    }
    let sig = invariants_q(form)?.signature;
    let two_j = 1i64 << j;
    debug_assert_eq!(sig % two_j, 0);
    let generator = fundamental_generator_q(j - 1)?;
    Ok(generator.multiple(sig / two_j))
}
