//! Quivers, dimension vectors, stability characters and slopes.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::poly::CountPolynomial;

/// A finite directed graph. Loops and parallel arrows are allowed; the order
/// of `arrows` is the canonical order used everywhere (matrix lists, indices).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Shape("a quiver needs at least one vertex".into()));
        }
        if let Some(&(s, t)) = arrows
            .iter()
            .find(|&&(s, t)| s >= vertex_count || t >= vertex_count)
        {
            return Err(Error::Shape(format!(
                "arrow {s} -> {t} has an endpoint outside 0..{vertex_count}"
            )));
        }
        Ok(Quiver { vertex_count, arrows })
    }

    /// The `m`-Kronecker quiver: two vertices, `m` arrows `0 -> 1`.
    pub fn kronecker(m: usize) -> Self {
        Quiver {
            vertex_count: 2,
            arrows: vec![(0, 1); m],
        }
    }

    /// `A_n` with arrows `i -> i+1`.
    pub fn linear(n: usize) -> Self {
        Quiver {
            vertex_count: n,
            arrows: (1..n).map(|i| (i - 1, i)).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    /// Affine dimension of `R(Q, d)`: the sum of `d_s * d_t` over arrows `s -> t`.
    pub fn rep_space_dim(&self, d: &DimVector) -> usize {
        self.arrow_pairing(d, d)
    }

    /// `sum over arrows s -> t of a_s * b_t`.
    pub fn arrow_pairing(&self, a: &DimVector, b: &DimVector) -> usize {
        self.arrows.iter().map(|&(s, t)| a[s] * b[t]).sum()
    }

    pub fn check_dims(&self, d: &DimVector) -> Result<()> {
        if d.len() != self.vertex_count {
            return Err(Error::Shape(format!(
                "dimension vector has {} entries, quiver has {} vertices",
                d.len(),
                self.vertex_count
            )));
        }
        Ok(())
    }

    pub fn check_theta(&self, theta: &Character) -> Result<()> {
        if theta.len() != self.vertex_count {
            return Err(Error::Shape(format!(
                "character has {} entries, quiver has {} vertices",
                theta.len(),
                self.vertex_count
            )));
        }
        Ok(())
    }
}

/// A dimension vector, one nonnegative entry per vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector(Vec<usize>);

impl DimVector {
    pub fn new(coords: Vec<usize>) -> Self {
        DimVector(coords)
    }

    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `dim(d)`, the sum of the entries.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn scale(&self, k: usize) -> DimVector {
        DimVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Every `e` with `0 <= e <= self` componentwise, in lexicographic order.
    pub fn sub_vectors(&self) -> Vec<DimVector> {
        let mut out = vec![Vec::with_capacity(self.0.len())];
        for &bound in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    (0..=bound).map(move |x| {
                        let mut v = prefix.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(DimVector).collect()
    }
}

impl std::ops::Index<usize> for DimVector {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl Add for &DimVector {
    type Output = DimVector;
    fn add(self, rhs: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DimVector {
    type Output = DimVector;
    /// Panics if `rhs` is not componentwise below `self`.
    fn sub(self, rhs: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl From<Vec<usize>> for DimVector {
    fn from(v: Vec<usize>) -> Self {
        DimVector(v)
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The linear function `Theta(d) = sum theta_i d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character(Vec<i64>);

impl Character {
    pub fn new(theta: Vec<i64>) -> Self {
        Character(theta)
    }

    pub fn trivial(n: usize) -> Self {
        Character(vec![0; n])
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&t| t == 0)
    }

    pub fn eval(&self, d: &DimVector) -> i64 {
        self.0.iter().zip(d.coords()).map(|(&t, &x)| t * x as i64).sum()
    }

    /// `mu(d) = Theta(d) / dim(d)`.
    pub fn slope(&self, d: &DimVector) -> Result<Slope> {
        let total = d.total();
        if total == 0 {
            return Err(Error::Domain("slope of the zero dimension vector".into()));
        }
        Ok(Slope(Ratio::new(self.eval(d), total as i64)))
    }

    /// Exponents `m_i = Theta(d) - dim(d) * theta_i` of the determinant
    /// character on `PG(Q, d)`; they always satisfy `sum m_i d_i = 0`.
    pub fn character_exponents(&self, d: &DimVector) -> Vec<i64> {
        let td = self.eval(d);
        let dim = d.total() as i64;
        self.0.iter().map(|&t| td - dim * t).collect()
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// An exact slope, kept in lowest terms with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope(Ratio<i64>);

impl Slope {
    pub fn new(num: i64, den: i64) -> Self {
        Slope(Ratio::new(num, den))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `|GL_n(F_q)| = prod_{k<n} (q^n - q^k)`. Panics on `u128` overflow.
pub fn gl_order(n: usize, q: u64) -> u128 {
    let q = q as u128;
    let qn = q.checked_pow(n as u32).expect("gl_order overflow");
    (0..n as u32).fold(1u128, |acc, k| {
        acc.checked_mul(qn - q.pow(k)).expect("gl_order overflow")
    })
}

/// `|GL_n|` as a polynomial in `q`.
pub fn gl_order_poly(n: usize) -> CountPolynomial {
    (0..n).fold(CountPolynomial::one(), |acc, k| {
        &acc * &(&CountPolynomial::monomial(n) - &CountPolynomial::monomial(k))
    })
}

/// `|G(Q, d)| = prod_i |GL_{d_i}|` as a polynomial in `q`.
pub fn group_order_poly(d: &DimVector) -> CountPolynomial {
    d.coords()
        .iter()
        .fold(CountPolynomial::one(), |acc, &n| &acc * &gl_order_poly(n))
}
