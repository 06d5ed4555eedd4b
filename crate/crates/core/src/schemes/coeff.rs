use std::fmt;

use crate::fmt::f64_17;
use crate::ncalg::{rational_to_f64, Poly, Rational};

/// Real root of a rational polynomial, with its defining polynomial kept for
/// exact reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicConstant {
    pub name: String,
    /// Coefficients of the defining polynomial, low degree first.
    pub defining: Vec<Rational>,
    /// The selected real root.
    pub value: f64,
}

impl AlgebraicConstant {
    /// Refines `guess` to a root of `defining` by Newton iteration in `f64`.
    pub fn from_root(name: impl Into<String>, defining: Vec<Rational>, guess: f64) -> Self {
        let value = polish_root(&defining, guess);
        AlgebraicConstant {
            name: name.into(),
            defining,
            value,
        }
    }

    pub fn defining_poly(&self) -> Poly {
        Poly::univariate(&self.name, &self.defining)
    }
}

/// Newton iteration on a univariate rational polynomial, stopping once the
/// step no longer shrinks, then a few steps with the value evaluated exactly
/// at the current float.
pub(crate) fn polish_root(coeffs: &[Rational], guess: f64) -> f64 {
    let c: Vec<f64> = coeffs.iter().map(rational_to_f64).collect();
    let eval = |x: f64| {
        let mut v = 0.0;
        let mut d = 0.0;
        for &a in c.iter().rev() {
            d = d * x + v;
            v = v * x + a;
        }
        (v, d)
    };
    let mut x = guess;
    let mut last_step = f64::INFINITY;
    for _ in 0..100 {
        let (v, d) = eval(x);
        if d == 0.0 {
            break;
        }
        let step = v / d;
        if !(step.abs() < last_step) && step.abs() < 1e-12 * x.abs().max(1.0) {
            break;
        }
        x -= step;
        last_step = step.abs();
        if step == 0.0 {
            break;
        }
    }
    for _ in 0..3 {
        let Some(exact) = num_rational::BigRational::from_float(x) else { break };
        let v = coeffs
            .iter()
            .rev()
            .fold(Rational::from_integer(0.into()), |acc, a| acc * &exact + a);
        let (_, d) = eval(x);
        let next = x - rational_to_f64(&v) / d;
        if next == x || !next.is_finite() {
            break;
        }
        x = next;
    }
    x
}

/// Coefficient of one stage: an exact polynomial in the scheme's algebraic
/// constants when available (a plain rational when it has no variables),
/// always accompanied by its floating-point value.
#[derive(Clone, Debug, PartialEq)]
pub struct StageCoeff {
    exact: Option<Poly>,
    value: f64,
}

impl StageCoeff {
    pub fn rational(r: Rational) -> Self {
        StageCoeff {
            value: rational_to_f64(&r),
            exact: Some(Poly::constant(r)),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(Rational::new(num.into(), den.into()))
    }

    pub fn int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    /// A coefficient known only numerically.
    pub fn float(value: f64) -> Self {
        StageCoeff { exact: None, value }
    }

    /// Polynomial in algebraic constants, evaluated at their values.
    pub fn algebraic(p: Poly, constants: &[AlgebraicConstant]) -> Self {
        let value = p.eval_f64(&|name| {
            constants
                .iter()
                .find(|c| c.name == name)
                .map(|c| c.value)
                .unwrap_or(f64::NAN)
        });
        StageCoeff {
            exact: Some(p),
            value,
        }
    }

    /// Exact form with an explicitly given value (used when parsing).
    pub fn with_value(exact: Option<Poly>, value: f64) -> Self {
        StageCoeff { exact, value }
    }

    /// Recomputes the value of a non-rational exact form from the constants'
    /// values; other coefficients are returned unchanged.
    pub fn revalued(&self, constants: &[AlgebraicConstant]) -> Self {
        match &self.exact {
            Some(p) if p.as_constant().is_none() && p.variables().iter().all(|v| constants.iter().any(|c| &c.name == v)) => {
                Self::algebraic(p.clone(), constants)
            }
            _ => self.clone(),
        }
    }

    pub fn exact(&self) -> Option<&Poly> {
        self.exact.as_ref()
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.exact.as_ref().and_then(Poly::as_constant)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact.as_ref().is_some_and(Poly::is_zero)
    }

    // Rational results take their value from the exact form so that rounding
    // does not accumulate through compositions.
    fn settle(exact: Option<Poly>, value: f64) -> Self {
        let value = match exact.as_ref().and_then(Poly::as_constant) {
            Some(r) => rational_to_f64(&r),
            None => value,
        };
        StageCoeff { exact, value }
    }

    pub fn add(&self, other: &Self) -> Self {
        let exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some(a.add(b)),
            _ => None,
        };
        Self::settle(exact, self.value + other.value)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some(a.mul(b)),
            _ => None,
        };
        Self::settle(exact, self.value * other.value)
    }

    pub fn neg(&self) -> Self {
        StageCoeff {
            exact: self.exact.as_ref().map(Poly::neg),
            value: -self.value,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        Self::settle(self.exact.as_ref().map(|p| p.pow(k)), self.value.powi(k as i32))
    }

    /// Equality used for palindrome checks: exact when both sides are exact,
    /// otherwise agreement of the values to rounding.
    pub fn same_value(&self, other: &Self) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => (self.value - other.value).abs() <= 1e-15 * self.value.abs().max(1.0),
        }
    }
}

impl fmt::Display for StageCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{}", r),
            None => write!(f, "{}", f64_17(self.value)),
        }
    }
}
