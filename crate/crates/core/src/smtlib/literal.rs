//! Floating-point literal forms.

use super::sexpr::{Atom, SExpr};
use super::{FrontendError, Pos, Sort};
use crate::fp::{FpValue, Width};

/// A bitvector literal: value and bit width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct BitVec {
    pub value: u64,
    pub width: u32,
}

pub(crate) fn bitvec(e: &SExpr) -> Option<Result<BitVec, FrontendError>> {
    let (digits, radix, per) = match e {
        SExpr::Atom(Atom::Hex(h), _) => (h.as_str(), 16, 4),
        SExpr::Atom(Atom::Binary(b), _) => (b.as_str(), 2, 1),
        _ => return None,
    };
    let width = digits.len() as u32 * per;
    if width > 64 {
        return Some(Err(FrontendError::UnsupportedSort {
            pos: e.pos(),
            sort: format!("(_ BitVec {width})"),
        }));
    }
    let value = u64::from_str_radix(digits, radix).expect("validated by reader");
    Some(Ok(BitVec { value, width }))
}

pub(crate) fn parse_index(e: &SExpr) -> Result<u32, FrontendError> {
    match e {
        SExpr::Atom(Atom::Numeral(n), _) => n.parse().map_err(|_| FrontendError::Syntax {
            pos: e.pos(),
            msg: format!("index '{n}' out of range"),
        }),
        _ => Err(FrontendError::Syntax {
            pos: e.pos(),
            msg: format!("expected numeral index, found '{e}'"),
        }),
    }
}

pub(crate) fn width_of(pos: Pos, eb: u32, sb: u32) -> Result<Width, FrontendError> {
    Width::from_eb_sb(eb, sb).ok_or_else(|| FrontendError::UnsupportedSort {
        pos,
        sort: format!("(_ FloatingPoint {eb} {sb})"),
    })
}

pub(crate) fn is_rne_symbol(s: &str) -> bool {
    s == "RNE" || s == "roundNearestTiesToEven"
}

pub(crate) fn is_rounding_mode_symbol(s: &str) -> bool {
    matches!(
        s,
        "RNE"
            | "RNA"
            | "RTP"
            | "RTN"
            | "RTZ"
            | "roundNearestTiesToEven"
            | "roundNearestTiesToAway"
            | "roundTowardPositive"
            | "roundTowardNegative"
            | "roundTowardZero"
    )
}

/// `(fp s e m)` with three bitvector literals.
pub(crate) fn decode_fp_triple(items: &[SExpr], pos: Pos) -> Result<FpValue, FrontendError> {
    if items.len() != 4 {
        return Err(FrontendError::Syntax {
            pos,
            msg: "fp expects three bitvector arguments".into(),
        });
    }
    let mut parts = [BitVec { value: 0, width: 0 }; 3];
    for (slot, e) in parts.iter_mut().zip(&items[1..]) {
        *slot = match bitvec(e) {
            Some(r) => r?,
            None => {
                return Err(FrontendError::UnsupportedOperation {
                    pos: e.pos(),
                    op: format!("fp with non-literal argument '{e}'"),
                })
            }
        };
    }
    let [s, e, m] = parts;
    if s.width != 1 {
        return Err(FrontendError::WidthMismatch {
            pos: items[1].pos(),
            msg: format!("sign field has {} bits, expected 1", s.width),
        });
    }
    let width = width_of(pos, e.width, m.width + 1)?;
    Ok(FpValue::from_fields(width, s.value == 1, e.value, m.value))
}

/// Rounds a decimal or integer literal, optionally negated, to `width` with RNE.
pub(crate) fn decode_real(e: &SExpr, width: Width) -> Result<FpValue, FrontendError> {
    let (text, negate) = match e {
        SExpr::Atom(Atom::Decimal(s) | Atom::Numeral(s), _) => (s.clone(), false),
        SExpr::List(items, _)
            if items.len() == 2
                && items[0].as_symbol() == Some("-")
                && matches!(items[1], SExpr::Atom(Atom::Decimal(_) | Atom::Numeral(_), _)) =>
        {
            (items[1].to_string(), true)
        }
        _ => {
            return Err(FrontendError::UnsupportedOperation {
                pos: e.pos(),
                op: format!("to_fp of non-literal real '{e}'"),
            })
        }
    };
    // std float parsing is correctly rounded (ties to even)
    let value = match width {
        Width::Binary32 => {
            let v: f32 = text.parse().expect("decimal literal");
            FpValue::from_f32(if negate { -v } else { v })
        }
        Width::Binary64 => {
            let v: f64 = text.parse().expect("decimal literal");
            FpValue::from_f64(if negate { -v } else { v })
        }
    };
    Ok(value)
}

pub(crate) fn special_constant(name: &str, width: Width) -> Option<FpValue> {
    let v = match (name, width) {
        ("+zero", Width::Binary32) => FpValue::from_f32(0.0),
        ("-zero", Width::Binary32) => FpValue::from_f32(-0.0),
        ("+oo", Width::Binary32) => FpValue::from_f32(f32::INFINITY),
        ("-oo", Width::Binary32) => FpValue::from_f32(f32::NEG_INFINITY),
        ("NaN", Width::Binary32) => FpValue::from_bits(Width::Binary32, 0x7fc0_0000),
        ("+zero", Width::Binary64) => FpValue::from_f64(0.0),
        ("-zero", Width::Binary64) => FpValue::from_f64(-0.0),
        ("+oo", Width::Binary64) => FpValue::from_f64(f64::INFINITY),
        ("-oo", Width::Binary64) => FpValue::from_f64(f64::NEG_INFINITY),
        ("NaN", Width::Binary64) => FpValue::from_bits(Width::Binary64, 0x7ff8_0000_0000_0000),
        _ => return None,
    };
    Some(v)
}

/// Decodes a closed FP literal form and checks it against `target`.
///
/// Accepted forms: `(fp s e m)`, `((_ to_fp eb sb) #x…)` / `#b…`
/// (bit reinterpretation), `((_ to_fp eb sb) RNE <decimal>)`, and the
/// indexed constants `(_ +zero eb sb)` and friends.
pub fn decode_fp_literal(form: &SExpr, target: Sort) -> Result<FpValue, FrontendError> {
    let pos = form.pos();
    let target = match target {
        Sort::Fp(w) => w,
        other => {
            return Err(FrontendError::SortError {
                pos,
                msg: format!("literal target sort {other} is not a floating-point sort"),
            })
        }
    };
    let value = decode_closed(form)?.ok_or_else(|| FrontendError::Syntax {
        pos,
        msg: format!("'{form}' is not a floating-point literal"),
    })?;
    if value.width() != target {
        return Err(FrontendError::WidthMismatch {
            pos,
            msg: format!("literal has sort {} but {} was expected", value.width(), target),
        });
    }
    Ok(value)
}

/// Returns `Ok(None)` when `form` is not a literal shape at all.
pub(crate) fn decode_closed(form: &SExpr) -> Result<Option<FpValue>, FrontendError> {
    let pos = form.pos();
    let Some(items) = form.as_list() else {
        return Ok(None);
    };
    if items.first().and_then(SExpr::as_symbol) == Some("fp") {
        return decode_fp_triple(items, pos).map(Some);
    }
    if items.first().and_then(SExpr::as_symbol) == Some("_") && items.len() == 4 {
        let name = items[1].as_symbol().unwrap_or_default();
        if matches!(name, "+zero" | "-zero" | "+oo" | "-oo" | "NaN") {
            let width = width_of(pos, parse_index(&items[2])?, parse_index(&items[3])?)?;
            return Ok(special_constant(name, width));
        }
        return Ok(None);
    }
    let Some(head) = items.first().and_then(SExpr::as_list) else {
        return Ok(None);
    };
    if head.len() != 4 || head[0].as_symbol() != Some("_") || head[1].as_symbol() != Some("to_fp") {
        return Ok(None);
    }
    let width = width_of(pos, parse_index(&head[2])?, parse_index(&head[3])?)?;
    match &items[1..] {
        [bv] => match bitvec(bv) {
            Some(bv) => {
                let bv = bv?;
                if bv.width != width.bits() {
                    return Err(FrontendError::WidthMismatch {
                        pos: items[1].pos(),
                        msg: format!(
                            "bitvector of width {} cannot be reinterpreted as {}",
                            bv.width, width
                        ),
                    });
                }
                Ok(Some(FpValue::from_bits(width, bv.value)))
            }
            None => Ok(None),
        },
        [rm, real] => {
            let real_shaped = matches!(real, SExpr::Atom(Atom::Decimal(_) | Atom::Numeral(_), _))
                || real.as_list().is_some_and(|l| l.first().and_then(SExpr::as_symbol) == Some("-"));
            if !real_shaped {
                return Ok(None);
            }
            match rm.as_symbol() {
                Some(s) if is_rne_symbol(s) => decode_real(real, width).map(Some),
                Some(s) if is_rounding_mode_symbol(s) => Err(FrontendError::UnsupportedRoundingMode {
                    pos: rm.pos(),
                    mode: s.to_string(),
                }),
                _ => Ok(None),
            }
        }
        _ => Ok(None),
    }
}
