//! Bit-exact hexadecimal text for [`PackedFloat`] values.
//!
//! Normal values print as `0x1.<frac>p<exp>`, subnormals as `0x0.<frac>p<emin>`,
//! with trailing zero digits dropped. NaNs print their payload as
//! `nan(0x<payload>)` so that every bit pattern round-trips.

use crate::error::HexFloatError;
use crate::softfp::{FloatClass, FloatFormat, PackedFloat};

pub fn format_hex(x: PackedFloat) -> String {
    let f = x.format();
    let sign = if x.is_negative() { "-" } else { "" };
    let u = x.unpack();
    match u.class {
        FloatClass::Nan => format!("{sign}nan(0x{:x})", u.significand),
        FloatClass::Infinity => format!("{sign}inf"),
        FloatClass::Zero => format!("{sign}0x0p+0"),
        FloatClass::Normal | FloatClass::Subnormal => {
            let lead = if u.class == FloatClass::Normal { 1 } else { 0 };
            let frac_bits = f.frac_bits();
            let digits = frac_bits.div_ceil(4);
            let frac = (u.significand & ((1u64 << frac_bits) - 1)) << (digits * 4 - frac_bits);
            let mut hex = format!("{:0width$x}", frac, width = digits as usize);
            while hex.ends_with('0') {
                hex.pop();
            }
            let dot = if hex.is_empty() { String::new() } else { format!(".{hex}") };
            format!("{sign}0x{lead}{dot}p{:+}", u.exponent)
        }
    }
}

/// Parses the text produced by [`format_hex`] (and any other hexadecimal float
/// whose value is exactly representable in `format`).
pub fn parse_hex(text: &str, format: FloatFormat) -> Result<PackedFloat, HexFloatError> {
    let bad = || HexFloatError::Malformed(text.to_string());
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    if body == "inf" {
        return Ok(PackedFloat::infinity(format, negative));
    }
    if let Some(payload) = body.strip_prefix("nan(0x").and_then(|s| s.strip_suffix(')')) {
        let payload = u64::from_str_radix(payload, 16).map_err(|_| bad())?;
        let frac_mask = (1u64 << format.frac_bits()) - 1;
        if payload == 0 || payload & !frac_mask != 0 {
            return Err(bad());
        }
        let exp_field = ((1u64 << format.exp_bits()) - 1) << format.frac_bits();
        let sign = if negative { 1u64 << (format.width() - 1) } else { 0 };
        return PackedFloat::new(format, sign | exp_field | payload).map_err(|_| bad());
    }
    let body = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")).ok_or_else(bad)?;
    let (mantissa, exp) = body.split_once(['p', 'P']).ok_or_else(bad)?;
    let exp: i64 = exp.parse().map_err(|_| bad())?;
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let mut sig: u128 = 0;
    for c in int_part.chars().chain(frac_part.chars()) {
        let d = c.to_digit(16).ok_or_else(bad)? as u128;
        if sig.leading_zeros() < 4 {
            return Err(bad());
        }
        sig = (sig << 4) | d;
    }
    let lsb_exp = exp - 4 * frac_part.len() as i64;
    PackedFloat::from_exact(format, negative, lsb_exp, sig)
        .ok_or_else(|| HexFloatError::Inexact { text: text.to_string(), format: format.name() })
}
