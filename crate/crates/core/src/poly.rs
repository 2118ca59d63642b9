//! Univariate polynomials in the formal variable `q` with exact rational
//! coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A counting polynomial; coefficient `i` multiplies `q^i`.
///
/// Always canonical: no trailing zero coefficients, so the zero polynomial
/// has an empty coefficient list and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CountPolynomial {
    coeffs: Vec<BigRational>,
}

impl CountPolynomial {
    pub fn zero() -> Self {
        CountPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs(vec![BigRational::from_integer(c.into())])
    }

    /// `q^deg`.
    pub fn monomial(deg: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        coeffs[deg] = BigRational::one();
        CountPolynomial { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = CountPolynomial { coeffs };
        p.trim();
        p
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Integer coefficients if every coefficient is integral and fits in `i64`.
    pub fn to_i64_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    /// Horner evaluation at an integer.
    pub fn eval(&self, x: &BigInt) -> BigRational {
        let x = BigRational::from_integer(x.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    pub fn eval_at_integer(&self, x: i64) -> BigRational {
        self.eval(&BigInt::from(x))
    }

    /// Evaluation at an integer, requiring an integral result.
    pub fn eval_integer(&self, x: i64) -> Result<BigInt> {
        let v = self.eval_at_integer(x);
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(Error::TheoremViolation(format!(
                "{self} takes the non-integral value {v} at q = {x}"
            )))
        }
    }

    /// Polynomial long division; returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &CountPolynomial) -> Result<(CountPolynomial, CountPolynomial)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::Domain("division by the zero polynomial".into()));
        };
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Exact division. A nonzero remainder is a [`Error::TheoremViolation`]:
    /// every division the counting recursion performs is forced by theory.
    pub fn div_exact(&self, divisor: &CountPolynomial) -> Result<CountPolynomial> {
        let (quot, rem) = self.div_rem(divisor)?;
        if !rem.is_zero() {
            return Err(Error::TheoremViolation(format!(
                "({self}) / ({divisor}) leaves remainder {rem}"
            )));
        }
        Ok(quot)
    }

    pub fn pow(&self, n: u32) -> CountPolynomial {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Ascending space-separated coefficients: `"c0 c1 c2"`, rationals as `a/b`.
    pub fn coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for CountPolynomial {
    /// Pretty form, highest degree first: `q^2 + q + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let a = c.abs();
            let var = match deg {
                0 => String::new(),
                1 => "q".into(),
                _ => format!("q^{deg}"),
            };
            if deg == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{var}")?;
            } else if a.is_integer() {
                write!(f, "{a}{var}")?;
            } else {
                write!(f, "({a}){var}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CountPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CountPolynomial({self})")
    }
}

impl Add for &CountPolynomial {
    type Output = CountPolynomial;
    fn add(self, rhs: &CountPolynomial) -> CountPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CountPolynomial::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &CountPolynomial {
    type Output = CountPolynomial;
    fn sub(self, rhs: &CountPolynomial) -> CountPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CountPolynomial::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &CountPolynomial {
    type Output = CountPolynomial;
    fn mul(self, rhs: &CountPolynomial) -> CountPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return CountPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CountPolynomial::from_coeffs(out)
    }
}

impl Neg for &CountPolynomial {
    type Output = CountPolynomial;
    fn neg(self) -> CountPolynomial {
        CountPolynomial::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CountPolynomial {
            type Output = CountPolynomial;
            fn $m(self, rhs: CountPolynomial) -> CountPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
