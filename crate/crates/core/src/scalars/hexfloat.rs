use astro_float::{BigFloat, Sign};

/// C99 `%a`-style rendering of a double, e.g. `0x1.8p+1`.
pub fn hex_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if exp_bits == 0 { (0, -1022) } else { (1, exp_bits - 1023) };
    let mut digits = format!("{frac:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    let dot = if digits.is_empty() { String::new() } else { format!(".{digits}") };
    format!("{sign}0x{lead}{dot}p{exp:+}")
}

/// Hex rendering of an arbitrary-precision float, `0x1.<hex>p<exp>`.
pub fn hex_bigfloat(x: &BigFloat) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_inf() {
        return if x.is_inf_pos() { "inf".into() } else { "-inf".into() };
    }
    let (words, _, sign, exp, _) = x.as_raw_parts().expect("finite value");
    if words.iter().all(|w| *w == 0) {
        return "0x0p+0".into();
    }
    let sign = if sign == Sign::Neg { "-" } else { "" };
    let mut bits = Vec::with_capacity(words.len() * 64);
    for w in words.iter().rev() {
        for b in (0..64).rev() {
            bits.push((w >> b) & 1 == 1);
        }
    }
    // value = 0.m * 2^exp; skip leading zeros (subnormal) to the first one bit
    let first = bits.iter().position(|b| *b).expect("nonzero mantissa");
    let e = exp as i64 - first as i64 - 1;
    let frac = &bits[first + 1..];
    let mut digits = String::new();
    for chunk in frac.chunks(4) {
        let mut v = 0u8;
        for i in 0..4 {
            v = (v << 1) | u8::from(chunk.get(i).copied().unwrap_or(false));
        }
        digits.push(char::from_digit(v as u32, 16).unwrap());
    }
    while digits.ends_with('0') {
        digits.pop();
    }
    let dot = if digits.is_empty() { String::new() } else { format!(".{digits}") };
    format!("{sign}0x1{dot}p{e:+}")
}

/// Parses the output of [`hex_f64`] (and generally `[-]0x<h>[.<h>]p<exp>`).
pub fn parse_hex_f64(s: &str) -> Option<f64> {
    match s {
        "nan" => return Some(f64::NAN),
        "inf" => return Some(f64::INFINITY),
        "-inf" => return Some(f64::NEG_INFINITY),
        _ => {}
    }
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let rest = rest.strip_prefix("0x")?;
    let (mant, exp) = rest.split_once('p')?;
    let exp: i32 = exp.parse().ok()?;
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let mut v = u64::from_str_radix(int, 16).ok()? as f64;
    let mut scale = 1.0 / 16.0;
    for c in frac.chars() {
        v += c.to_digit(16)? as f64 * scale;
        scale /= 16.0;
    }
    let r = v * 2f64.powi(exp);
    Some(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use astro_float::RoundingMode;

    #[test]
    fn doubles() {
        assert_eq!(hex_f64(3.0), "0x1.8p+1");
        assert_eq!(hex_f64(1.0), "0x1p+0");
        assert_eq!(hex_f64(-0.75), "-0x1.8p-1");
        assert_eq!(hex_f64(0.0), "0x0p+0");
        for x in [std::f64::consts::PI, -1e-300, 5e-324, 123456.789] {
            assert_eq!(parse_hex_f64(&hex_f64(x)), Some(x));
        }
    }

    #[test]
    fn bigfloats_match_doubles() {
        for x in [3.0, 1.0, -0.75, std::f64::consts::PI, 1e-10] {
            let b = BigFloat::from_f64(x, 128);
            assert_eq!(hex_bigfloat(&b), hex_f64(x));
        }
        let third = BigFloat::from_f64(1.0, 128).div(&BigFloat::from_f64(3.0, 128), 128, RoundingMode::ToEven);
        let s = hex_bigfloat(&third);
        assert!(s.starts_with("0x1.5555555555555555555555555555"));
        assert!(s.ends_with("p-2"));
    }
}
