//! Exact rational helpers: parsing and rendering of `p/q` literals, and
//! high-precision decimal evaluation (rational powers, exponentials) built on
//! arbitrary-precision integer arithmetic.
//!
//! All values flowing through the solver are `BigRational`s kept in lowest
//! terms by construction.  Where an operation leaves the rational field
//! (`c^(p/q)` with `q > 1`, `exp`), results are *approximations with a stated
//! significant-digit count*, represented as rationals of the form
//! `N / 10^k` so that downstream arithmetic stays exact.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatioError {
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("exponent out of supported range")]
    ExponentRange,
    #[error("argument out of supported range")]
    ArgumentRange,
}

/// Convenience constructor for small rationals.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `p/q`, or a plain decimal such as `0.0064` into an exact rational.
pub fn parse_ratio(s: &str) -> Result<BigRational, RatioError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(RatioError::Malformed(s.to_string()));
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| RatioError::Malformed(s.to_string()))?;
        let d: BigInt = den.trim().parse().map_err(|_| RatioError::Malformed(s.to_string()))?;
        if d.is_zero() {
            return Err(RatioError::ZeroDenominator(s.to_string()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let digits = format!("{}{}", int_part, frac_part);
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(RatioError::Malformed(s.to_string()));
        }
        let n: BigInt = digits.parse().map_err(|_| RatioError::Malformed(s.to_string()))?;
        let d = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = t.parse().map_err(|_| RatioError::Malformed(s.to_string()))?;
    Ok(BigRational::from(n))
}

/// Renders a rational as `num/den`, denominator always present (`2/1`).
pub fn render_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `floor(log10(x))` for `x > 0`, computed exactly.
pub fn floor_log10(x: &BigRational) -> i64 {
    assert!(x.is_positive(), "floor_log10 needs a positive argument");
    // Initial guess from decimal digit counts, then correct by comparison.
    let dn = x.numer().to_string().trim_start_matches('-').len() as i64;
    let dd = x.denom().to_string().len() as i64;
    let mut g = dn - dd;
    let ten = BigRational::from(BigInt::from(10u32));
    let pow10 = |e: i64| -> BigRational {
        let p = BigRational::from(BigInt::from(10u32).pow(e.unsigned_abs() as u32));
        if e >= 0 {
            p
        } else {
            p.recip()
        }
    };
    while pow10(g) > *x {
        g -= 1;
    }
    while pow10(g + 1) <= *x {
        g += 1;
    }
    debug_assert!(pow10(g) <= *x && *x < pow10(g) * ten);
    g
}

/// Rounds `x` to `sig` significant decimal digits (nearest, half away from
/// zero).  The result is a rational `N / 10^k`; zero stays zero.
pub fn round_sig(x: &BigRational, sig: u32) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let neg = x.is_negative();
    let ax = x.abs();
    let e = floor_log10(&ax);
    // Scale so the value has `sig` digits before the point, then round.
    let shift = sig as i64 - 1 - e;
    let scaled = if shift >= 0 {
        &ax * BigRational::from(BigInt::from(10u32).pow(shift as u32))
    } else {
        &ax / BigRational::from(BigInt::from(10u32).pow((-shift) as u32))
    };
    let rounded = (&scaled + rat(1, 2)).floor();
    let back = if shift >= 0 {
        rounded / BigRational::from(BigInt::from(10u32).pow(shift as u32))
    } else {
        rounded * BigRational::from(BigInt::from(10u32).pow((-shift) as u32))
    };
    if neg {
        -back
    } else {
        back
    }
}

/// `c^mu` for `c in (0,1]` and rational `mu`, to `digits` significant
/// decimal digits.  Exact when `mu` is an integer; otherwise the q-th root is
/// taken by integer root extraction at a scale chosen from the magnitude of
/// the true value, so the *relative* error stays below `10^-digits` even for
/// very small results.  Negative exponents go through the reciprocal, which
/// preserves relative accuracy.
pub fn pow_decimal(c: &BigRational, mu: &BigRational, digits: u32) -> Result<BigRational, RatioError> {
    if !c.is_positive() || *c > BigRational::one() {
        return Err(RatioError::ArgumentRange);
    }
    if mu.is_negative() {
        let inv = pow_decimal(c, &-mu.clone(), digits)?;
        return Ok(round_sig(&(BigRational::one() / inv), digits + 2));
    }
    if mu.is_zero() {
        return Ok(BigRational::one());
    }
    let p = mu
        .numer()
        .to_u32()
        .filter(|p| *p <= 100_000)
        .ok_or(RatioError::ExponentRange)?;
    let q = mu
        .denom()
        .to_u32()
        .filter(|q| *q <= 100_000)
        .ok_or(RatioError::ExponentRange)?;
    let cp = pow_ratio(c, p);
    if q == 1 {
        return Ok(cp);
    }
    // cp^(1/q): root magnitude is 10^(floor(l/q)) where l = floor(log10 cp).
    let l = floor_log10(&cp);
    let t = digits as i64 + 5;
    let e = t - 1 - l.div_euclid(q as i64); // decimal shift: root * 10^e ~ 10^(t-1)
    debug_assert!(e > 0);
    let scaled_num = cp.numer() * BigInt::from(10u32).pow((q as i64 * e) as u32);
    let m = scaled_num.div_floor(cp.denom());
    let r = m.nth_root(q);
    Ok(BigRational::new(r, BigInt::from(10u32).pow(e as u32)))
}

fn pow_ratio(x: &BigRational, p: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut base = x.clone();
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// `e` (Euler's number) to `digits` significant decimal digits.
fn euler(digits: u32) -> BigRational {
    let mut sum = BigRational::one();
    let mut term = BigRational::one();
    let limit = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits + 3));
    let mut n = 1u32;
    while term > limit {
        term /= BigRational::from(BigInt::from(n));
        sum += &term;
        n += 1;
    }
    round_sig(&sum, digits + 2)
}

/// `exp(x)` to `digits` significant decimal digits, for rational `x` with
/// `|x| <= 600` (enough for any exponent this crate produces; beyond that the
/// call is rejected rather than silently degraded).
pub fn exp_decimal(x: &BigRational, digits: u32) -> Result<BigRational, RatioError> {
    if x.abs() > BigRational::from(BigInt::from(600)) {
        return Err(RatioError::ArgumentRange);
    }
    if x.is_zero() {
        return Ok(BigRational::one());
    }
    let work = digits + 12;
    let xr = round_sig(x, work);
    // Split x = k + f with integer k and |f| <= 1/2.
    let k = (&xr + rat(1, 2)).floor();
    let f = &xr - &k;
    let ki = k
        .numer()
        .to_i64()
        .ok_or(RatioError::ArgumentRange)?;
    // e^k with enough guard digits that raising to |k| keeps `work` digits.
    let guard = (ki.unsigned_abs() as f64).log10().max(0.0).ceil() as u32 + 3;
    let e1 = euler(work + guard);
    let ek_abs = pow_ratio(&e1, ki.unsigned_abs() as u32);
    let ek = if ki >= 0 { ek_abs } else { ek_abs.recip() };
    let ek = round_sig(&ek, work + 4);
    // e^f by Taylor series; |f| <= 1/2 so terms shrink by >= 2 each step.
    let mut sum = BigRational::one();
    let mut term = BigRational::one();
    let limit = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(work + 4));
    let mut n = 1u32;
    while term.abs() > limit {
        term = round_sig(&(&term * &f / BigRational::from(BigInt::from(n))), work + 6);
        sum += &term;
        n += 1;
        if n > 500 {
            break;
        }
    }
    Ok(round_sig(&(ek * sum), digits))
}

/// Renders an approximation `x` as a decimal string with `digits` significant
/// digits: plain positional notation for moderate magnitudes, otherwise
/// `d.dddde-7` scientific form.  Deterministic for identical inputs.
pub fn decimal_string(x: &BigRational, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let ax = x.abs();
    let l = floor_log10(&ax);
    let mantissa = {
        let shift = digits as i64 - 1 - l;
        let scaled = if shift >= 0 {
            &ax * BigRational::from(BigInt::from(10u32).pow(shift as u32))
        } else {
            &ax / BigRational::from(BigInt::from(10u32).pow((-shift) as u32))
        };
        (&scaled + rat(1, 2)).floor().numer().clone()
    };
    let mut digits_str = mantissa.to_string();
    // Rounding can carry over to an extra digit (e.g. 999.96 -> 1000).
    let l = if digits_str.len() as i64 > digits as i64 {
        digits_str.truncate(digits as usize);
        l + 1
    } else {
        l
    };
    let sign = if neg { "-" } else { "" };
    let body = if l >= 0 && l < digits as i64 {
        let (int_part, frac_part) = digits_str.split_at((l + 1) as usize);
        let frac = frac_part.trim_end_matches('0');
        if frac.is_empty() {
            int_part.to_string()
        } else {
            format!("{}.{}", int_part, frac)
        }
    } else if l < 0 && l >= -4 {
        let zeros = "0".repeat((-l - 1) as usize);
        let frac = format!("{}{}", zeros, digits_str);
        let frac = frac.trim_end_matches('0');
        format!("0.{}", frac)
    } else {
        let (head, tail) = digits_str.split_at(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{}e{}", head, l)
        } else {
            format!("{}.{}e{}", head, tail, l)
        }
    };
    format!("{}{}", sign, body)
}

/// Exact conversion of a rational to `f64` via integer division at full
/// precision (avoids overflow in `numer as f64 / denom as f64`).
pub fn to_f64(x: &BigRational) -> f64 {
    // Scale to ~19 significant digits, convert the integer, then undo.
    if x.is_zero() {
        return 0.0;
    }
    let l = floor_log10(&x.abs());
    let shift = 18 - l;
    let scaled = if shift >= 0 {
        x * BigRational::from(BigInt::from(10u32).pow(shift as u32))
    } else {
        x / BigRational::from(BigInt::from(10u32).pow((-shift) as u32))
    };
    let int = scaled.to_integer();
    let v = int.to_f64().unwrap_or(f64::NAN);
    v * 10f64.powi(-shift as i32)
}

/// Sign-aware decimal digit count of a `BigInt` (0 has one digit).
pub fn digit_count(n: &BigInt) -> usize {
    match n.sign() {
        Sign::NoSign => 1,
        _ => n.to_string().trim_start_matches('-').len(),
    }
}
