//! IEEE 754 values at the two supported widths.

use std::fmt;

/// Supported floating-point formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Width {
    Binary32,
    Binary64,
}

impl Width {
    /// Exponent bits.
    pub fn eb(self) -> u32 {
        match self {
            Width::Binary32 => 8,
            Width::Binary64 => 11,
        }
    }

    /// Significand bits including the hidden bit.
    pub fn sb(self) -> u32 {
        match self {
            Width::Binary32 => 24,
            Width::Binary64 => 53,
        }
    }

    pub fn bits(self) -> u32 {
        self.eb() + self.sb()
    }

    pub fn from_eb_sb(eb: u32, sb: u32) -> Option<Width> {
        match (eb, sb) {
            (8, 24) => Some(Width::Binary32),
            (11, 53) => Some(Width::Binary64),
            _ => None,
        }
    }

    /// Rounds a binary64 value to this width (RNE). Identity for binary64.
    #[inline]
    pub fn narrow(self, v: f64) -> f64 {
        match self {
            Width::Binary32 => v as f32 as f64,
            Width::Binary64 => v,
        }
    }
}

impl fmt::Display for Width {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(_ FloatingPoint {} {})", self.eb(), self.sb())
    }
}

/// An exact IEEE 754 encoding. NaN payloads are kept as written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpValue {
    width: Width,
    bits: u64,
}

impl FpValue {
    /// Builds a value from raw bits; bits above the width are masked off.
    pub fn from_bits(width: Width, bits: u64) -> FpValue {
        let bits = match width {
            Width::Binary32 => bits & 0xffff_ffff,
            Width::Binary64 => bits,
        };
        FpValue { width, bits }
    }

    pub fn from_f32(v: f32) -> FpValue {
        FpValue::from_bits(Width::Binary32, v.to_bits() as u64)
    }

    pub fn from_f64(v: f64) -> FpValue {
        FpValue::from_bits(Width::Binary64, v.to_bits())
    }

    /// Rounds `v` to `width` with RNE.
    pub fn from_f64_rounded(width: Width, v: f64) -> FpValue {
        match width {
            Width::Binary32 => FpValue::from_f32(v as f32),
            Width::Binary64 => FpValue::from_f64(v),
        }
    }

    pub fn width(self) -> Width {
        self.width
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    /// The value widened to binary64 (exact for binary32 non-NaN values).
    pub fn to_f64(self) -> f64 {
        match self.width {
            Width::Binary32 => f32::from_bits(self.bits as u32) as f64,
            Width::Binary64 => f64::from_bits(self.bits),
        }
    }

    pub fn is_nan(self) -> bool {
        self.to_f64().is_nan()
    }

    pub fn sign_bit(self) -> bool {
        (self.bits >> (self.width.bits() - 1)) & 1 == 1
    }

    /// Biased exponent field.
    pub fn exponent_field(self) -> u64 {
        let sig = self.width.sb() - 1;
        (self.bits >> sig) & ((1u64 << self.width.eb()) - 1)
    }

    /// Trailing significand field (without the hidden bit).
    pub fn significand_field(self) -> u64 {
        self.bits & ((1u64 << (self.width.sb() - 1)) - 1)
    }

    /// Assembles a value from the three fields of the `(fp s e m)` form.
    pub fn from_fields(width: Width, sign: bool, exponent: u64, significand: u64) -> FpValue {
        let sig = width.sb() - 1;
        let bits = ((sign as u64) << (width.bits() - 1)) | (exponent << sig) | significand;
        FpValue::from_bits(width, bits)
    }

    /// `#x…` bitvector literal of the encoding.
    pub fn hex_literal(self) -> String {
        match self.width {
            Width::Binary32 => format!("#x{:08x}", self.bits),
            Width::Binary64 => format!("#x{:016x}", self.bits),
        }
    }

    /// SMT-LIB term denoting exactly this encoding.
    pub fn to_smtlib(self) -> String {
        format!(
            "((_ to_fp {} {}) {})",
            self.width.eb(),
            self.width.sb(),
            self.hex_literal()
        )
    }
}

impl fmt::Display for FpValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.width {
            Width::Binary32 => write!(f, "{:?}f32", f32::from_bits(self.bits as u32)),
            Width::Binary64 => write!(f, "{:?}", f64::from_bits(self.bits)),
        }
    }
}

/// Maps a binary32 encoding onto a signed integer line whose order matches
/// numeric order. Both zeros map to 0.
#[inline]
pub fn ordered_bits32(v: f32) -> i64 {
    let b = v.to_bits();
    let mag = (b & 0x7fff_ffff) as i64;
    if b >> 31 == 1 {
        -mag
    } else {
        mag
    }
}

/// Binary64 counterpart of [`ordered_bits32`].
#[inline]
pub fn ordered_bits64(v: f64) -> i128 {
    let b = v.to_bits();
    let mag = (b & 0x7fff_ffff_ffff_ffff) as i128;
    if b >> 63 == 1 {
        -mag
    } else {
        mag
    }
}
