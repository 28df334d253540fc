//! Distance encodings of comparison atoms.

use crate::fp::{ordered_bits32, ordered_bits64, FpValue, Width};
use crate::smtlib::CmpOp;

/// Bit distance between two values of `width`, given widened to binary64.
///
/// 1 when either operand is NaN, 0 when they compare IEEE-equal, otherwise
/// the gap between their positions on the ordered integer line.
#[inline]
pub fn theta_at(width: Width, a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        return 1.0;
    }
    if a == b {
        return 0.0;
    }
    match width {
        Width::Binary32 => (ordered_bits32(a as f32) - ordered_bits32(b as f32)).abs() as f64,
        Width::Binary64 => (ordered_bits64(a) - ordered_bits64(b)).abs() as f64,
    }
}

/// [`theta_at`] on exact encodings.
///
/// # Panics
/// If the operands have different widths.
pub fn theta(a: FpValue, b: FpValue) -> f64 {
    assert_eq!(a.width(), b.width(), "theta over mixed widths");
    theta_at(a.width(), a.to_f64(), b.to_f64())
}

/// Distance of the atom `a op b`, or of its negation when `negated` is set.
/// Zero exactly when the (possibly negated) IEEE comparison holds.
#[inline]
pub fn atom_distance_at(op: CmpOp, negated: bool, width: Width, a: f64, b: f64) -> f64 {
    let nan = a.is_nan() || b.is_nan();
    let strict = |holds: bool| if holds { 0.0 } else { theta_at(width, a, b) + 1.0 };
    let loose = |holds: bool| if holds { 0.0 } else { theta_at(width, a, b) };
    match (op, negated) {
        (CmpOp::Eq, false) | (CmpOp::Neq, true) => theta_at(width, a, b),
        (CmpOp::Neq, false) | (CmpOp::Eq, true) => {
            if a != b {
                0.0
            } else {
                1.0
            }
        }
        (CmpOp::Lt, false) => strict(a < b),
        (CmpOp::Gt, false) => strict(a > b),
        (CmpOp::Leq, false) => loose(a <= b),
        (CmpOp::Geq, false) => loose(a >= b),
        // A negated relation holds whenever an operand is NaN.
        _ if nan => 0.0,
        (CmpOp::Lt, true) => loose(a >= b),
        (CmpOp::Leq, true) => strict(a > b),
        (CmpOp::Gt, true) => loose(a <= b),
        (CmpOp::Geq, true) => strict(a < b),
    }
}

/// [`atom_distance_at`] on exact encodings.
///
/// # Panics
/// If the operands have different widths.
pub fn atom_distance(op: CmpOp, negated: bool, a: FpValue, b: FpValue) -> f64 {
    assert_eq!(a.width(), b.width(), "atom over mixed widths");
    atom_distance_at(op, negated, a.width(), a.to_f64(), b.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f32v(v: f32) -> FpValue {
        FpValue::from_f32(v)
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(f32v(1.0), f32v(1.0)), 0.0);
        assert_eq!(theta(FpValue::from_f64(f64::NAN), FpValue::from_f64(1.0)), 1.0);
        assert_eq!(theta(f32v(0.0), f32v(-0.0)), 0.0);
        let next = f32::from_bits(1.0f32.to_bits() + 1);
        assert_eq!(theta(f32v(1.0), f32v(next)), 1.0);
    }

    #[test]
    fn theta_across_zero_counts_both_sides() {
        let tiny = f32::from_bits(1);
        assert_eq!(theta(f32v(-tiny), f32v(tiny)), 2.0);
        assert_eq!(theta(f32v(-0.0), f32v(tiny)), 1.0);
    }

    #[test]
    fn atom_examples() {
        assert_eq!(atom_distance(CmpOp::Lt, false, f32v(1.0), f32v(2.0)), 0.0);
        assert_eq!(atom_distance(CmpOp::Geq, true, f32v(f32::NAN), f32v(5.0)), 0.0);
        assert_eq!(atom_distance(CmpOp::Eq, false, f32v(1.0), f32v(2.0)), 8388608.0);
        assert_eq!(atom_distance(CmpOp::Gt, false, f32v(1.0), f32v(1.0)), 1.0);
    }

    #[test]
    fn negation_is_not_operator_flipping() {
        // not(a < NaN) holds while (a >= NaN) does not
        let nan = FpValue::from_f64(f64::NAN);
        let one = FpValue::from_f64(1.0);
        assert_eq!(atom_distance(CmpOp::Lt, true, one, nan), 0.0);
        assert!(atom_distance(CmpOp::Geq, false, one, nan) > 0.0);
    }
}
