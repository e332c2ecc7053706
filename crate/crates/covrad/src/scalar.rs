//! Arbitrary-precision rational scalars and conversion helpers.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact arithmetic backbone for LP rows, binomial sums, and moment checks.
pub type Rational = num_rational::BigRational;

/// `n choose k` as a big integer (0 when `k > n`).
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `2^n` as a big integer.
pub fn pow2(n: u64) -> BigInt {
    BigInt::one() << usize::try_from(n).expect("exponent fits usize")
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rational {
    Rational::from(BigInt::from(v))
}

/// Natural log of a positive big integer, accurate to f64 precision even when
/// the integer itself overflows f64.
pub fn bigint_ln(v: &BigInt) -> f64 {
    assert!(v.sign() == Sign::Plus, "bigint_ln needs a positive argument");
    let bits = v.bits();
    if bits <= 53 {
        return v.to_f64().unwrap().ln();
    }
    // Keep the top 64 bits as mantissa and track the discarded exponent.
    let shift = bits - 53;
    let top = (v >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational, via numerator/denominator bit tricks.
pub fn rational_ln(v: &Rational) -> f64 {
    assert!(v.is_positive(), "rational_ln needs a positive argument");
    bigint_ln(v.numer()) - bigint_ln(v.denom())
}

/// Rational to f64, falling back to the log representation when the parts
/// overflow (|result| may round to 0 or infinity only when truly warranted).
pub fn rational_to_f64(v: &Rational) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    if let Some(x) = v.to_f64() {
        if x.is_finite() && (x != 0.0) {
            return x;
        }
    }
    let sign = if v.is_negative() { -1.0 } else { 1.0 };
    sign * rational_ln(&v.abs()).exp()
}

/// Exact rational from a finite f64.
pub fn rational_from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(10, 0), BigInt::one());
        assert_eq!(binomial(4, 7), BigInt::zero());
        assert_eq!(binomial(52, 5), BigInt::from(2_598_960u64));
    }

    #[test]
    fn ln_of_huge_integers() {
        // ln C(2000, 1000) computed via bits vs. lgamma-style reference value.
        let c = binomial(2000, 1000);
        let ln = bigint_ln(&c);
        // reference: sum of ln(i) terms
        let mut reference = 0.0;
        for i in 1..=1000u64 {
            reference += ((1000 + i) as f64).ln() - (i as f64).ln();
        }
        assert!((ln - reference).abs() < 1e-9, "{ln} vs {reference}");
    }

    #[test]
    fn rational_to_f64_handles_tiny_values() {
        let tiny = Rational::new(BigInt::one(), pow2(1100));
        let x = rational_to_f64(&tiny);
        assert!(x == 0.0 || x.is_finite());
        let ln = rational_ln(&tiny);
        assert!((ln + 1100.0 * std::f64::consts::LN_2).abs() < 1e-6);
    }
}
