//! Fixed-point arbitrary-precision reals: a value is `mantissa / 2^prec`.
//!
//! Addition and subtraction are exact once operands share a precision;
//! multiplication, division and the transcendental routines round to the
//! working precision. Binary operations align both sides to the *larger*
//! precision, so combining values never silently downgrades accuracy.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Default number of fractional bits when the caller does not pin one.
pub const DEFAULT_PRECISION: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("cannot parse `{0}` as a decimal number")]
    ParseDecimal(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of a non-positive value")]
    LogNonPositive,
    #[error("square root of a negative value")]
    SqrtNegative,
}

/// Arbitrary-precision real number in fixed-point form.
///
/// `precision_bits` is the number of fractional bits; the represented value
/// is `mantissa · 2^-precision_bits`. The integer part is unbounded.
#[derive(Clone, PartialEq, Eq)]
pub struct BigFloat {
    mantissa: BigInt,
    prec: u32,
}

/// `a / b` rounded to the nearest integer, ties away from zero.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(!b.is_zero());
    let (q, r) = a.div_rem(b);
    if (&r * 2i32).abs() >= b.abs() {
        if a.sign() == b.sign() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

impl BigFloat {
    pub fn from_mantissa(mantissa: BigInt, precision_bits: u32) -> Self {
        BigFloat { mantissa, prec: precision_bits }
    }

    pub fn zero(precision_bits: u32) -> Self {
        BigFloat { mantissa: BigInt::zero(), prec: precision_bits }
    }

    pub fn from_bigint(n: &BigInt, precision_bits: u32) -> Self {
        BigFloat { mantissa: n << precision_bits, prec: precision_bits }
    }

    pub fn from_i64(n: i64, precision_bits: u32) -> Self {
        Self::from_bigint(&BigInt::from(n), precision_bits)
    }

    /// Nearest fixed-point approximation of an exact rational.
    pub fn from_rational(r: &BigRational, precision_bits: u32) -> Self {
        let num = r.numer() << precision_bits;
        BigFloat { mantissa: round_div(&num, r.denom()), prec: precision_bits }
    }

    /// Parses `[+-]digits[.digits][e[+-]digits]` to the nearest representable
    /// value at the requested precision.
    pub fn parse_decimal(s: &str, precision_bits: u32) -> Result<Self, NumericError> {
        let err = || NumericError::ParseDecimal(s.to_owned());
        let t = s.trim();
        let (t, sign) = match t.strip_prefix('-') {
            Some(rest) => (rest, -1),
            None => (t.strip_prefix('+').unwrap_or(t), 1),
        };
        let (body, exp10) = match t.find(['e', 'E']) {
            Some(pos) => {
                let e: i64 = t[pos + 1..].parse().map_err(|_| err())?;
                (&t[..pos], e)
            }
            None => (t, 0),
        };
        let (int_part, frac_part) = match body.find('.') {
            Some(pos) => (&body[..pos], &body[pos + 1..]),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(err());
        }
        let digits: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| err())?;
        let shift = exp10 - frac_part.len() as i64;
        // value = digits · 10^shift
        let scaled = &digits << precision_bits;
        let mantissa = if shift >= 0 {
            scaled * BigInt::from(10u32).pow(shift as u32)
        } else {
            round_div(&scaled, &BigInt::from(10u32).pow((-shift) as u32))
        };
        Ok(BigFloat { mantissa: mantissa * sign, prec: precision_bits })
    }

    pub fn precision_bits(&self) -> u32 {
        self.prec
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Re-rounds to a different precision (exact when upgrading).
    pub fn with_precision(&self, precision_bits: u32) -> Self {
        if precision_bits >= self.prec {
            BigFloat {
                mantissa: &self.mantissa << (precision_bits - self.prec),
                prec: precision_bits,
            }
        } else {
            let down = self.prec - precision_bits;
            BigFloat {
                mantissa: round_div(&self.mantissa, &(BigInt::one() << down)),
                prec: precision_bits,
            }
        }
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        let p = self.prec.max(other.prec);
        let a = &self.mantissa << (p - self.prec);
        let b = &other.mantissa << (p - other.prec);
        (a, b, p)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, p) = self.aligned(other);
        BigFloat { mantissa: a + b, prec: p }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b, p) = self.aligned(other);
        BigFloat { mantissa: a - b, prec: p }
    }

    pub fn neg(&self) -> Self {
        BigFloat { mantissa: -&self.mantissa, prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mantissa: self.mantissa.abs(), prec: self.prec }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b, p) = self.aligned(other);
        BigFloat { mantissa: round_div(&(a * b), &(BigInt::one() << p)), prec: p }
    }

    /// Multiplies by an exact rational without changing precision.
    pub fn mul_rational(&self, r: &BigRational) -> Self {
        BigFloat {
            mantissa: round_div(&(&self.mantissa * r.numer()), r.denom()),
            prec: self.prec,
        }
    }

    pub fn mul_bigint(&self, n: &BigInt) -> Self {
        BigFloat { mantissa: &self.mantissa * n, prec: self.prec }
    }

    pub fn div(&self, other: &Self) -> Result<Self, NumericError> {
        if other.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        let (a, b, p) = self.aligned(other);
        Ok(BigFloat { mantissa: round_div(&(a << p), &b), prec: p })
    }

    pub fn shl(&self, bits: u32) -> Self {
        BigFloat { mantissa: &self.mantissa << bits, prec: self.prec }
    }

    pub fn shr(&self, bits: u32) -> Self {
        BigFloat { mantissa: round_div(&self.mantissa, &(BigInt::one() << bits)), prec: self.prec }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }

    /// `|self| < 2^exp`, with `exp` allowed to be negative.
    pub fn abs_lt_pow2(&self, exp: i64) -> bool {
        let shifted = exp + self.prec as i64;
        if shifted <= 0 {
            // threshold below one ulp: only zero qualifies
            return self.mantissa.is_zero();
        }
        self.mantissa.abs() < (BigInt::one() << (shifted as u64))
    }

    /// Nearest integer to the represented value.
    pub fn round_to_bigint(&self) -> BigInt {
        round_div(&self.mantissa, &(BigInt::one() << self.prec))
    }

    pub fn to_f64(&self) -> f64 {
        // split to avoid overflowing f64 range on the shift
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 80).max(0) as u32;
        let head = round_div(&self.mantissa, &(BigInt::one() << drop));
        head.to_f64().unwrap_or(f64::NAN) * 2f64.powi(drop as i32 - self.prec as i32)
    }

    /// Floor square root at the operand's precision.
    pub fn sqrt(&self) -> Result<Self, NumericError> {
        if self.mantissa.is_negative() {
            return Err(NumericError::SqrtNegative);
        }
        let m = &self.mantissa << self.prec;
        Ok(BigFloat { mantissa: m.sqrt(), prec: self.prec })
    }

    /// Natural logarithm, accurate to within a few ulps at the operand's
    /// precision. Argument reduction `x = 2^e · u`, `u ∈ [1,2)`, then
    /// `ln u = 2·atanh((u-1)/(u+1))` by series.
    pub fn ln(&self) -> Result<Self, NumericError> {
        if self.mantissa.is_negative() || self.mantissa.is_zero() {
            return Err(NumericError::LogNonPositive);
        }
        let prec = self.prec;
        let work = prec + 64;
        let x = self.with_precision(work);
        // e = floor(log2 x): bits of mantissa relative to the fixed point
        let e = x.mantissa.bits() as i64 - 1 - work as i64;
        // u = x / 2^e ∈ [1, 2)
        let u = if e >= 0 { x.shr(e as u32) } else { x.shl((-e) as u32) };
        let one = BigFloat::from_i64(1, work);
        let num = u.sub(&one);
        let den = u.add(&one);
        let z = num.div(&den).expect("u + 1 > 0");
        let atanh = atanh_series(&z);
        let ln_u = atanh.shl(1);
        let result = if e == 0 {
            ln_u
        } else {
            ln_u.add(&ln2(work).mul_bigint(&BigInt::from(e)))
        };
        Ok(result.with_precision(prec))
    }

    /// Decimal rendering with `digits` significant fractional digits,
    /// rounded to nearest.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let scaled = &self.mantissa * BigInt::from(10u32).pow(digits);
        let n = round_div(&scaled, &(BigInt::one() << self.prec));
        let neg = n.is_negative();
        let s = n.abs().to_string();
        let s = if s.len() <= digits as usize {
            format!("0.{}{}", "0".repeat(digits as usize - s.len()), s)
        } else {
            let split = s.len() - digits as usize;
            format!("{}.{}", &s[..split], &s[split..])
        };
        if neg {
            format!("-{s}")
        } else {
            s
        }
    }

    /// Decimal rendering at roughly the full precision of the value.
    pub fn to_decimal_string_full(&self) -> String {
        // 2^-prec ≈ 10^-(prec · log10 2)
        let digits = (self.prec as f64 * std::f64::consts::LOG10_2).floor() as u32;
        self.to_decimal_string(digits.max(1))
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({} @ {} bits)", self.to_f64(), self.prec)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string_full())
    }
}

/// `atanh(z)` for `|z| < 1/2` by the odd power series, at z's precision.
fn atanh_series(z: &BigFloat) -> BigFloat {
    let prec = z.precision_bits();
    let zsq = z.mul(z);
    let mut term = z.clone();
    let mut sum = z.clone();
    let mut j = 3u64;
    loop {
        term = term.mul(&zsq);
        if term.is_zero() {
            break;
        }
        sum = sum.add(&BigFloat {
            mantissa: round_div(term.mantissa(), &BigInt::from(j)),
            prec,
        });
        j += 2;
        if j > 4 * prec as u64 {
            break; // series must have converged long before this
        }
    }
    sum
}

/// `ln 2 = 2·atanh(1/3)` at the requested precision.
pub fn ln2(precision_bits: u32) -> BigFloat {
    let work = precision_bits + 32;
    let third = BigFloat {
        mantissa: round_div(&(BigInt::one() << work), &BigInt::from(3)),
        prec: work,
    };
    atanh_series(&third).shl(1).with_precision(precision_bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath, 100 significant digits
    const LN2: &str = "0.6931471805599453094172321214581765680755001343602552541206800094933936219696947156058633269964186875";
    const LN3: &str = "1.098612288668109691395245236922525704647490557822749451734694333637494293218608966873615754813732089";
    const SQRT2: &str = "1.414213562373095048801688724209698078569671875376948073176679737990732478462107038850387534327641573";

    fn assert_close(a: &BigFloat, b: &BigFloat, bits: i64) {
        let d = a.sub(b);
        assert!(d.abs_lt_pow2(-bits), "difference {:?} above 2^-{}", d, bits);
    }

    #[test]
    fn parse_and_render_round_trip() {
        for s in ["0.5", "-3.25", "12", "0.1", "1e3", "2.5e-2", "+7.25"] {
            let x = BigFloat::parse_decimal(s, 128).unwrap();
            let back = BigFloat::parse_decimal(&x.to_decimal_string(45), 128).unwrap();
            assert_close(&x, &back, 120);
        }
        assert!(BigFloat::parse_decimal("abc", 64).is_err());
        assert!(BigFloat::parse_decimal("1.2.3", 64).is_err());
        assert!(BigFloat::parse_decimal("", 64).is_err());
    }

    #[test]
    fn exact_halves_parse_exactly() {
        let x = BigFloat::parse_decimal("0.5", 64).unwrap();
        assert_eq!(x.mantissa(), &(BigInt::one() << 63));
    }

    #[test]
    fn ln2_matches_reference_value() {
        let reference = BigFloat::parse_decimal(LN2, 320).unwrap();
        let computed = ln2(256);
        assert_close(&computed.with_precision(320), &reference, 250);
    }

    #[test]
    fn ln2_matches_independent_series() {
        // ln 2 = Σ_{k≥1} 1/(k·2^k), a different series from the atanh route
        let prec = 128u32;
        let work = prec + 32;
        let mut sum = BigInt::zero();
        for k in 1..=(work as u64 + 8) {
            sum += round_div(&(BigInt::one() << work), &(BigInt::from(k) << k));
        }
        let series = BigFloat::from_mantissa(sum, work).with_precision(prec);
        assert_close(&ln2(prec), &series, 120);
    }

    #[test]
    fn ln_agrees_with_reference_values() {
        let three = BigFloat::from_i64(3, 256);
        let reference = BigFloat::parse_decimal(LN3, 256).unwrap();
        assert_close(&three.ln().unwrap(), &reference, 250);

        // ln(8) = 3 ln 2 exercises the power-of-two reduction
        let eight = BigFloat::from_i64(8, 192);
        let triple = ln2(192).mul_bigint(&BigInt::from(3));
        assert_close(&eight.ln().unwrap(), &triple, 186);

        // ln of a value below 1 (negative exponent path)
        let quarter = BigFloat::parse_decimal("0.25", 192).unwrap();
        let expect = ln2(192).mul_bigint(&BigInt::from(-2));
        assert_close(&quarter.ln().unwrap(), &expect, 186);

        assert_eq!(BigFloat::zero(64).ln(), Err(NumericError::LogNonPositive));
        assert_eq!(BigFloat::from_i64(-1, 64).ln(), Err(NumericError::LogNonPositive));
    }

    #[test]
    fn sqrt_agrees_with_reference_value() {
        let two = BigFloat::from_i64(2, 256);
        let reference = BigFloat::parse_decimal(SQRT2, 256).unwrap();
        assert_close(&two.sqrt().unwrap(), &reference, 250);
        assert_eq!(BigFloat::from_i64(-2, 64).sqrt(), Err(NumericError::SqrtNegative));
    }

    #[test]
    fn arithmetic_aligns_to_larger_precision() {
        let a = BigFloat::parse_decimal("0.1", 64).unwrap();
        let b = BigFloat::parse_decimal("0.2", 192).unwrap();
        assert_eq!(a.add(&b).precision_bits(), 192);
        assert_eq!(b.mul(&a).precision_bits(), 192);
        let c = a.add(&b).sub(&b);
        assert_close(&c, &a.with_precision(192), 62);
    }

    #[test]
    fn division_round_trips() {
        let a = BigFloat::parse_decimal("3.7", 128).unwrap();
        let b = BigFloat::parse_decimal("-1.3", 128).unwrap();
        let q = a.div(&b).unwrap();
        assert_close(&q.mul(&b), &a, 120);
        assert_eq!(a.div(&BigFloat::zero(128)), Err(NumericError::DivisionByZero));
    }

    #[test]
    fn threshold_test_matches_definition() {
        let x = BigFloat::parse_decimal("0.125", 64).unwrap();
        assert!(x.abs_lt_pow2(-2));
        assert!(!x.abs_lt_pow2(-3)); // equality is not `<`
        assert!(BigFloat::zero(64).abs_lt_pow2(-200));
    }
}
