//! Univariate polynomials in the three bases the pipeline needs: plain
//! monomials, Krawtchouk polynomials `K_t` for a fixed ambient dimension `n`,
//! and Chebyshev polynomials of the first kind.
//!
//! Krawtchouk values are computed by the defining alternating sum over exact
//! big-integer binomials; the LP layer depends on those rows being exact.

use crate::scalar::{binomial, pow2, rational_to_f64, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("argument {arg} out of range [0:{n}]")]
    OutOfRange { arg: u64, n: u64 },
    #[error("Krawtchouk order {t} exceeds dimension {n}")]
    OrderTooLarge { t: u64, n: u64 },
    #[error("operation requires the monomial basis, got {0:?}")]
    UnsupportedBasis(Basis),
    #[error("exact Krawtchouk evaluation needs an integer point in [0:n], got {0}")]
    NonIntegerPoint(String),
    #[error("basis dimension {basis_n} does not match requested n = {n}")]
    DimensionMismatch { basis_n: u64, n: u64 },
    #[error("coefficient list must be non-empty")]
    EmptyCoefficients,
}

/// Basis tag for [`SymbolicPoly`]. The Krawtchouk basis carries the ambient
/// dimension: index `t` refers to `K_t^{(n)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Basis {
    Monomial,
    Krawtchouk(u64),
    ChebyshevT,
}

/// `K_t^{(n)}(w) = Σ_{i=0}^{t} (-1)^i C(w,i) C(n-w,t-i)`, exactly.
pub fn krawtchouk(n: u64, t: u64, w: u64) -> Result<Rational, PolyError> {
    if t > n {
        return Err(PolyError::OrderTooLarge { t, n });
    }
    if w > n {
        return Err(PolyError::OutOfRange { arg: w, n });
    }
    Ok(Rational::from(krawtchouk_int(n, t, w)))
}

fn krawtchouk_int(n: u64, t: u64, w: u64) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..=t {
        let term = binomial(w, i) * binomial(n - w, t - i);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Checks the symmetry `C(n,t) K_w(t) = C(n,w) K_t(w)` exactly.
/// Always true; exported as a test hook.
pub fn krawtchouk_reciprocity_holds(n: u64, t: u64, w: u64) -> Result<bool, PolyError> {
    if t > n {
        return Err(PolyError::OrderTooLarge { t, n });
    }
    if w > n {
        return Err(PolyError::OutOfRange { arg: w, n });
    }
    let lhs = binomial(n, t) * krawtchouk_int(n, w, t);
    let rhs = binomial(n, w) * krawtchouk_int(n, t, w);
    Ok(lhs == rhs)
}

/// Krawtchouk polynomial at a real point, via falling factorials in the
/// binomial coefficients. Agrees with [`krawtchouk`] at integer points.
pub fn krawtchouk_f64(n: u64, t: u64, x: f64) -> f64 {
    let nf = n as f64;
    let mut acc = 0.0;
    for i in 0..=t {
        let a = falling_binomial(x, i);
        let b = falling_binomial(nf - x, t - i);
        let term = a * b;
        acc += if i % 2 == 0 { term } else { -term };
    }
    acc
}

fn falling_binomial(x: f64, k: u64) -> f64 {
    let mut acc = 1.0;
    for j in 0..k {
        acc *= (x - j as f64) / (j as f64 + 1.0);
    }
    acc
}

/// `T_k(x)`: trigonometric form inside `[-1,1]`, closed form
/// `((|x|+√(x²-1))^k + (|x|-√(x²-1))^k)/2` (with the parity sign) outside.
/// The split avoids complex intermediates and cancellation at `|x| ≥ 1`.
pub fn chebyshev(k: u32, x: f64) -> f64 {
    if x.abs() <= 1.0 {
        return (k as f64 * x.acos()).cos();
    }
    let ax = x.abs();
    let s = (ax * ax - 1.0).sqrt();
    let value = 0.5 * ((ax + s).powi(k as i32) + (ax - s).powi(k as i32));
    if x < 0.0 && k % 2 == 1 {
        -value
    } else {
        value
    }
}

/// Univariate polynomial with a basis tag; `coeffs[i]` multiplies the basis
/// element of index `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicPoly {
    basis: Basis,
    coeffs: Vec<Rational>,
}

impl SymbolicPoly {
    pub fn new(basis: Basis, coeffs: Vec<Rational>) -> Result<Self, PolyError> {
        if coeffs.is_empty() {
            return Err(PolyError::EmptyCoefficients);
        }
        if let Basis::Krawtchouk(n) = basis {
            let top = coeffs.len() as u64 - 1;
            if top > n {
                return Err(PolyError::OrderTooLarge { t: top, n });
            }
        }
        Ok(Self { basis, coeffs })
    }

    pub fn monomial(coeffs: Vec<Rational>) -> Result<Self, PolyError> {
        Self::new(Basis::Monomial, coeffs)
    }

    pub fn zero() -> Self {
        Self {
            basis: Basis::Monomial,
            coeffs: vec![Rational::zero()],
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Index of the last nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// Exact evaluation. Krawtchouk basis requires an integer point in `[0:n]`.
    pub fn eval(&self, x: &Rational) -> Result<Rational, PolyError> {
        match self.basis {
            Basis::Monomial => Ok(horner(&self.coeffs, x)),
            Basis::ChebyshevT => Ok(chebyshev_clenshaw_exact(&self.coeffs, x)),
            Basis::Krawtchouk(n) => {
                if !x.is_integer() || x.is_negative() {
                    return Err(PolyError::NonIntegerPoint(x.to_string()));
                }
                let w = x
                    .to_integer()
                    .to_u64()
                    .ok_or_else(|| PolyError::NonIntegerPoint(x.to_string()))?;
                if w > n {
                    return Err(PolyError::OutOfRange { arg: w, n });
                }
                let mut acc = Rational::zero();
                for (t, c) in self.coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        acc += c * krawtchouk(n, t as u64, w)?;
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Floating evaluation at a real point (any basis).
    pub fn eval_f64(&self, x: f64) -> f64 {
        match self.basis {
            Basis::Monomial => {
                let mut acc = 0.0;
                for c in self.coeffs.iter().rev() {
                    acc = acc * x + rational_to_f64(c);
                }
                acc
            }
            Basis::ChebyshevT => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| rational_to_f64(c) * chebyshev(k as u32, x))
                .sum(),
            Basis::Krawtchouk(n) => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(t, c)| rational_to_f64(c) * krawtchouk_f64(n, t as u64, x))
                .sum(),
        }
    }

    /// Coefficient-wise derivative; monomial basis only.
    pub fn derivative(&self) -> Result<Self, PolyError> {
        if self.basis != Basis::Monomial {
            return Err(PolyError::UnsupportedBasis(self.basis));
        }
        if self.coeffs.len() == 1 {
            return Ok(Self::zero());
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from(BigInt::from(i)))
            .collect();
        Self::monomial(coeffs)
    }
}

fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn chebyshev_clenshaw_exact(coeffs: &[Rational], x: &Rational) -> Rational {
    // T_j satisfies the same three-term recurrence over rationals.
    let mut acc = Rational::zero();
    let mut t_prev = Rational::one();
    let mut t_cur = x.clone();
    for (j, c) in coeffs.iter().enumerate() {
        let tj = match j {
            0 => Rational::one(),
            1 => x.clone(),
            _ => {
                let next = Rational::from(BigInt::from(2)) * x * &t_cur - &t_prev;
                t_prev = std::mem::replace(&mut t_cur, next);
                t_cur.clone()
            }
        };
        acc += c * tj;
    }
    acc
}

/// `E_{B_n} p = Σ_w B_n(w) p(w)`, exactly. In the Krawtchouk basis this equals
/// the constant coefficient, since `E_{B_n} K_t = 0` for `t ≥ 1`.
pub fn binomial_expectation(p: &SymbolicPoly, n: u64) -> Result<Rational, PolyError> {
    if let Basis::Krawtchouk(basis_n) = p.basis() {
        if basis_n != n {
            return Err(PolyError::DimensionMismatch { basis_n, n });
        }
        return Ok(p.coeffs()[0].clone());
    }
    let mut acc = Rational::zero();
    for w in 0..=n {
        let pw = p.eval(&Rational::from(BigInt::from(w)))?;
        acc += pw * Rational::from(binomial(n, w));
    }
    Ok(acc / Rational::from(pow2(n)))
}

/// Exact Lagrange interpolation through `(xs[i], ys[i])`, returned in the
/// monomial basis. Used to convert Krawtchouk-basis polynomials by evaluating
/// on `[0:n]`; symbolic expansion of `K_t` is never needed.
pub fn lagrange_interpolate(xs: &[Rational], ys: &[Rational]) -> Result<SymbolicPoly, PolyError> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(PolyError::EmptyCoefficients);
    }
    let m = xs.len();
    let mut acc = vec![Rational::zero(); m];
    for i in 0..m {
        // basis numerator Π_{j≠i} (v - x_j), expanded incrementally
        let mut num = vec![Rational::zero(); m];
        num[0] = Rational::one();
        let mut len = 1;
        let mut denom = Rational::one();
        for j in 0..m {
            if i == j {
                continue;
            }
            for idx in (0..len).rev() {
                let c = num[idx].clone();
                num[idx + 1] += &c;
                num[idx] = -&xs[j] * &c;
            }
            len += 1;
            denom *= &xs[i] - &xs[j];
        }
        let scale = &ys[i] / denom;
        for (a, c) in acc.iter_mut().zip(num.iter()) {
            *a += &scale * c;
        }
    }
    SymbolicPoly::monomial(acc)
}

/// Evaluate a Krawtchouk-basis polynomial on `[0:n]` and interpolate back to
/// the monomial basis, exactly.
pub fn krawtchouk_to_monomial(p: &SymbolicPoly) -> Result<SymbolicPoly, PolyError> {
    let n = match p.basis() {
        Basis::Krawtchouk(n) => n,
        other => return Err(PolyError::UnsupportedBasis(other)),
    };
    let deg = (p.degree() as u64).min(n);
    let xs: Vec<Rational> = (0..=deg).map(|w| Rational::from(BigInt::from(w))).collect();
    let ys = xs
        .iter()
        .map(|x| p.eval(x))
        .collect::<Result<Vec<_>, _>>()?;
    lagrange_interpolate(&xs, &ys)
}
