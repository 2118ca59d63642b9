//! Closed-form stratum counts and the HN recursion for semistable loci and
//! moduli of stables, as polynomials in `q`.
//!
//! A point of the stratum `S_beta` is a flag of type `beta` (there are
//! `|G| / |P_beta|` of them) together with arrow maps preserving the flag
//! whose graded pieces are semistable. In a basis adapted to the flag, the
//! block of an arrow `s -> t` from piece `k` to piece `l` may be nonzero only
//! for `l <= k`; the strictly upper blocks are free, contributing
//! `q^{f(beta)}` with `f(beta) = sum_{s->t} sum_{l<k} d^k_s d^l_t`.
//! The parabolic is upper block triangular in the same sense.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffield::FieldTable;
use crate::poly::CountPolynomial;
use crate::quiver::{gl_order_poly, group_order_poly, Character, DimVector, Quiver};
use crate::rep::{enumerate_reps, Budgets, SubspaceCatalog};
use crate::stability::Analyzer;
use crate::strata::{enumerate_hn_types, HnType};

/// `q^{dim R(Q, d)}`.
pub fn rep_count_poly(quiver: &Quiver, d: &DimVector) -> CountPolynomial {
    CountPolynomial::monomial(quiver.rep_space_dim(d))
}

/// Exponent of the free off-diagonal arrow blocks for a flag of type `beta`.
pub fn fiber_exponent(quiver: &Quiver, beta: &HnType) -> usize {
    let p = beta.pieces();
    (0..p.len())
        .flat_map(|k| (0..k).map(move |l| (k, l)))
        .map(|(k, l)| quiver.arrow_pairing(&p[k], &p[l]))
        .sum()
}

/// `|P_beta| = prod_i q^{sum_{l<k} d^k_i d^l_i} prod_k |GL_{d^k_i}|`.
pub fn parabolic_order_poly(beta: &HnType) -> CountPolynomial {
    let p = beta.pieces();
    let unipotent: usize = (0..p.len())
        .flat_map(|k| (0..k).map(move |l| (k, l)))
        .map(|(k, l)| {
            p[k].coords()
                .iter()
                .zip(p[l].coords())
                .map(|(a, b)| a * b)
                .sum::<usize>()
        })
        .sum();
    p.iter().fold(CountPolynomial::monomial(unipotent), |acc, piece| {
        piece
            .coords()
            .iter()
            .fold(acc, |acc, &n| &acc * &gl_order_poly(n))
    })
}

/// The ingredients of `|S_beta|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumFormula {
    pub beta: HnType,
    /// `|G_d| / |P_beta|`, the number of flags of type `beta`.
    pub flag_factor: CountPolynomial,
    pub fiber_exponent: usize,
    /// `|R^ss_{d^k}|` for each piece, in order.
    pub ss_factors: Vec<CountPolynomial>,
}

impl StratumFormula {
    pub fn new(
        quiver: &Quiver,
        beta: &HnType,
        ss_counts: &HashMap<DimVector, CountPolynomial>,
    ) -> Result<Self> {
        let d = beta.ambient();
        let flag_factor = group_order_poly(&d).div_exact(&parabolic_order_poly(beta))?;
        let ss_factors = beta
            .pieces()
            .iter()
            .map(|p| {
                ss_counts.get(p).cloned().ok_or_else(|| {
                    Error::Domain(format!("no semistable count supplied for {p}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StratumFormula {
            beta: beta.clone(),
            flag_factor,
            fiber_exponent: fiber_exponent(quiver, beta),
            ss_factors,
        })
    }

    pub fn poly(&self) -> CountPolynomial {
        self.ss_factors.iter().fold(
            &self.flag_factor * &CountPolynomial::monomial(self.fiber_exponent),
            |acc, f| &acc * f,
        )
    }
}

/// `|S_beta| = (|G_d| / |P_beta|) q^{f(beta)} prod_k |R^ss_{d^k}|`.
pub fn stratum_count_poly(
    quiver: &Quiver,
    beta: &HnType,
    ss_counts: &HashMap<DimVector, CountPolynomial>,
) -> Result<CountPolynomial> {
    Ok(StratumFormula::new(quiver, beta, ss_counts)?.poly())
}

/// Memoized HN recursion: `|R^ss_d| = q^{dim R(d)} - sum_{beta nontrivial} |S_beta|`.
#[derive(Debug, Clone)]
pub struct SemistableCounter<'a> {
    quiver: &'a Quiver,
    theta: &'a Character,
    memo: HashMap<DimVector, CountPolynomial>,
}

impl<'a> SemistableCounter<'a> {
    pub fn new(quiver: &'a Quiver, theta: &'a Character) -> Self {
        SemistableCounter {
            quiver,
            theta,
            memo: HashMap::new(),
        }
    }

    /// Semistable counts computed so far, keyed by dimension vector.
    pub fn known(&self) -> &HashMap<DimVector, CountPolynomial> {
        &self.memo
    }

    pub fn count(&mut self, d: &DimVector) -> Result<CountPolynomial> {
        self.quiver.check_dims(d)?;
        self.quiver.check_theta(self.theta)?;
        if d.is_zero() {
            return Err(Error::Domain("semistable count of the zero vector".into()));
        }
        // smaller vectors first, so every piece is already known
        let mut todo: Vec<DimVector> = d.sub_vectors().into_iter().filter(|e| !e.is_zero()).collect();
        todo.sort_by_key(|e| e.total());
        for e in todo {
            if self.memo.contains_key(&e) {
                continue;
            }
            let mut ss = rep_count_poly(self.quiver, &e);
            for beta in enumerate_hn_types(self.quiver, &e, self.theta)? {
                if !beta.is_trivial() {
                    ss = &ss - &stratum_count_poly(self.quiver, &beta, &self.memo)?;
                }
            }
            self.memo.insert(e, ss);
        }
        Ok(self.memo[d].clone())
    }

    /// Every stratum formula of `d`, trivial type first.
    pub fn stratum_formulas(&mut self, d: &DimVector) -> Result<Vec<StratumFormula>> {
        self.count(d)?;
        enumerate_hn_types(self.quiver, d, self.theta)?
            .iter()
            .map(|beta| StratumFormula::new(self.quiver, beta, &self.memo))
            .collect()
    }
}

/// `|R^{Theta-ss}(Q, d)(F_q)|` as a polynomial in `q`.
pub fn semistable_count_poly(
    quiver: &Quiver,
    d: &DimVector,
    theta: &Character,
) -> Result<CountPolynomial> {
    SemistableCounter::new(quiver, theta).count(d)
}

/// No nonzero `e < d` (componentwise, `e != d`) has the slope of `d`.
pub fn is_coprime(d: &DimVector, theta: &Character) -> bool {
    let Ok(mu) = theta.slope(d) else {
        return false;
    };
    d.sub_vectors()
        .iter()
        .filter(|e| !e.is_zero() && *e != d)
        .all(|e| theta.slope(e).is_ok_and(|s| s != mu))
}

fn require_coprime(d: &DimVector, theta: &Character) -> Result<()> {
    if is_coprime(d, theta) {
        Ok(())
    } else {
        Err(Error::NotCoprime {
            dims: d.to_string(),
            theta: theta.to_string(),
        })
    }
}

/// `|PG(Q, d)| = |G_d| / (q - 1)`.
pub fn projective_group_order_poly(d: &DimVector) -> Result<CountPolynomial> {
    group_order_poly(d).div_exact(&CountPolynomial::from_ints(&[-1, 1]))
}

/// Point count of the moduli space of stables for coprime `(d, theta)`:
/// the stable locus is a `PG`-torsor over it, so the count is
/// `(q - 1) |R^ss_d| / |G_d|`. The division must be exact with integer
/// coefficients.
pub fn moduli_count_poly(quiver: &Quiver, d: &DimVector, theta: &Character) -> Result<CountPolynomial> {
    quiver.check_dims(d)?;
    quiver.check_theta(theta)?;
    require_coprime(d, theta)?;
    let ss = semistable_count_poly(quiver, d, theta)?;
    let moduli = (&ss * &CountPolynomial::from_ints(&[-1, 1])).div_exact(&group_order_poly(d))?;
    if !moduli.has_integer_coeffs() {
        return Err(Error::TheoremViolation(format!(
            "moduli count {moduli} has non-integer coefficients"
        )));
    }
    Ok(moduli)
}

/// Brute-force torsor count over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsorCount {
    pub q: u64,
    pub stable: u64,
    pub projective_group_order: u64,
    pub orbits: u64,
}

/// Counts stable points by enumeration and divides by `|PG(F_q)|`.
pub fn torsor_orbit_count(
    quiver: &Quiver,
    d: &DimVector,
    theta: &Character,
    field: &FieldTable,
    budgets: &Budgets,
) -> Result<TorsorCount> {
    quiver.check_theta(theta)?;
    require_coprime(d, theta)?;
    let space = enumerate_reps(quiver, d, field, budgets)?;
    let catalog = SubspaceCatalog::for_dims(field, d, budgets)?;
    let analyzer = Analyzer::new(field, theta, &catalog, *budgets);
    const CHUNK: u64 = 1 << 12;
    let stable: u64 = (0..space.len().div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| -> Result<u64> {
            let mut n = 0;
            for m in space.range(c * CHUNK..(c + 1) * CHUNK) {
                if analyzer.is_stable(&m)?.is_stable() {
                    n += 1;
                }
            }
            Ok(n)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let q = field.q() as u64;
    let pg = projective_group_order_poly(d)?
        .eval_integer(q as i64)?
        .to_u64()
        .ok_or_else(|| Error::Domain("projective group order overflows u64".into()))?;
    if !stable.is_multiple_of(pg) {
        return Err(Error::TheoremViolation(format!(
            "{stable} stable points over F_{q} are not divisible by |PG| = {pg}"
        )));
    }
    Ok(TorsorCount {
        q,
        stable,
        projective_group_order: pg,
        orbits: stable / pg,
    })
}

/// Evaluates a polynomial expected to take a nonnegative integer value.
pub fn eval_count(poly: &CountPolynomial, q: u64) -> Result<BigInt> {
    poly.eval_integer(q as i64)
}
