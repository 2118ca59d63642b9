//! Counting-function signatures: does `n -> |X(F_{q^n})|` look like one
//! integer polynomial in `q^n`, or like a periodic family of them?
//!
//! Verdicts only describe finite sample sets. A failed fit is reported as
//! inconclusive, never as a refutation.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::CountPolynomial;

/// Point counts `|X(F_{q^n})|` over extensions of a base field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSamples {
    base_q: u64,
    samples: Vec<(u32, BigInt)>,
}

impl CountSamples {
    /// Sorts by `n`; rejects repeated `n`, `n = 0` and negative counts.
    pub fn new(base_q: u64, mut samples: Vec<(u32, BigInt)>) -> Result<Self> {
        if base_q < 2 {
            return Err(Error::Domain(format!("base field size {base_q} < 2")));
        }
        samples.sort_by_key(|s| s.0);
        if samples.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("repeated extension degree in samples".into()));
        }
        if samples.iter().any(|(n, c)| *n == 0 || c.is_negative()) {
            return Err(Error::Domain("samples need n >= 1 and nonnegative counts".into()));
        }
        Ok(CountSamples { base_q, samples })
    }

    /// Parses `base_q <q>` followed by `n count` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut base_q = None;
        let mut samples = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Domain(format!("line {}: {what}", idx + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["base_q", q] => {
                    if base_q.is_some() {
                        return Err(bad("duplicate base_q"));
                    }
                    base_q = Some(q.parse::<u64>().map_err(|_| bad("bad base_q"))?);
                }
                [n, count] => {
                    let n = n.parse::<u32>().map_err(|_| bad("bad extension degree"))?;
                    let count = count.parse::<BigInt>().map_err(|_| bad("bad count"))?;
                    samples.push((n, count));
                }
                _ => return Err(bad("expected `base_q <q>` or `<n> <count>`")),
            }
        }
        let base_q = base_q.ok_or_else(|| Error::Domain("missing base_q header".into()))?;
        Self::new(base_q, samples)
    }

    pub fn base_q(&self) -> u64 {
        self.base_q
    }

    pub fn samples(&self) -> &[(u32, BigInt)] {
        &self.samples
    }

    fn point(&self, n: u32) -> BigInt {
        BigInt::from(self.base_q).pow(n)
    }
}

/// Exact interpolation through the first `degree_bound + 1` points; the fit
/// succeeds only if every remaining point is reproduced exactly.
///
/// `Ok(None)` is a failed fit. Errors are reserved for malformed input:
/// repeated x values or fewer than `degree_bound + 1` points.
pub fn interpolate_poly(
    points: &[(BigInt, BigInt)],
    degree_bound: usize,
) -> Result<Option<CountPolynomial>> {
    if points.len() < degree_bound + 1 {
        return Err(Error::Domain(format!(
            "{} points cannot determine a polynomial of degree {degree_bound}",
            points.len()
        )));
    }
    for (i, a) in points.iter().enumerate() {
        if points[i + 1..].iter().any(|b| b.0 == a.0) {
            return Err(Error::Domain(format!("repeated abscissa {}", a.0)));
        }
    }
    let used = &points[..degree_bound + 1];
    let fit = newton(used);
    let ok = points[degree_bound + 1..]
        .iter()
        .all(|(x, y)| fit.eval(x) == BigRational::from_integer(y.clone()));
    Ok(ok.then_some(fit))
}

fn newton(points: &[(BigInt, BigInt)]) -> CountPolynomial {
    let xs: Vec<BigRational> = points.iter().map(|p| BigRational::from_integer(p.0.clone())).collect();
    let mut coef: Vec<BigRational> = points.iter().map(|p| BigRational::from_integer(p.1.clone())).collect();
    let n = xs.len();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    // expand c_0 + c_1 (x - x_0) + c_2 (x - x_0)(x - x_1) + ...
    let mut poly = CountPolynomial::zero();
    for i in (0..n).rev() {
        let shift = CountPolynomial::from_coeffs(vec![-xs[i].clone(), BigRational::from_integer(1.into())]);
        poly = &(&poly * &shift) + &CountPolynomial::from_coeffs(vec![coef[i].clone()]);
    }
    poly
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// One integer polynomial `P` with `P(q^n) = count(n)` for every sample.
    StrongPolynomial(CountPolynomial),
    /// `count(n) = P_r(q^n)` whenever `n = r (mod period)`.
    PeriodicPolynomial {
        period: u32,
        polys: Vec<CountPolynomial>,
    },
    Inconclusive,
}

/// Fit of one residue class (the whole sample set for strong checks).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFit {
    pub residue: u32,
    /// Polynomial through the first `degree_bound + 1` samples of the class.
    pub fitted: CountPolynomial,
    /// `(n, observed - fitted(q^n))` for every sample of the class.
    pub residuals: Vec<(u32, BigRational)>,
    /// Whether more samples than unknowns were available.
    pub overdetermined: bool,
    pub integral: bool,
}

impl ClassFit {
    fn succeeded(&self) -> bool {
        self.integral && self.residuals.iter().all(|(_, r)| r.is_zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurityReport {
    pub verdict: Verdict,
    pub details: Vec<ClassFit>,
}

fn fit_class(
    samples: &CountSamples,
    residue: u32,
    class: &[(u32, BigInt)],
    degree_bound: usize,
) -> Result<ClassFit> {
    let points: Vec<(BigInt, BigInt)> = class
        .iter()
        .map(|(n, c)| (samples.point(*n), c.clone()))
        .collect();
    if points.len() < degree_bound + 1 {
        return Err(Error::Domain(format!(
            "residue class {residue} has {} samples, need at least {}",
            points.len(),
            degree_bound + 1
        )));
    }
    let fitted = newton(&points[..degree_bound + 1]);
    let residuals = class
        .iter()
        .zip(&points)
        .map(|((n, _), (x, y))| (*n, BigRational::from_integer(y.clone()) - fitted.eval(x)))
        .collect();
    Ok(ClassFit {
        residue,
        integral: fitted.has_integer_coeffs(),
        fitted,
        residuals,
        overdetermined: points.len() > degree_bound + 1,
    })
}

/// Strong signature: all samples interpolate, in the variable `q^n`, to a
/// single polynomial with integer coefficients.
pub fn strong_purity_check(samples: &CountSamples, degree_bound: usize) -> Result<PurityReport> {
    let fit = fit_class(samples, 0, &samples.samples, degree_bound)?;
    let verdict = if fit.succeeded() {
        Verdict::StrongPolynomial(fit.fitted.clone())
    } else {
        Verdict::Inconclusive
    };
    Ok(PurityReport {
        verdict,
        details: vec![fit],
    })
}

/// Weak signature: each residue class of `n` modulo `period` interpolates
/// to its own integer polynomial in `q^n`.
pub fn weak_purity_periodic_fit(
    samples: &CountSamples,
    period: u32,
    degree_bound: usize,
) -> Result<PurityReport> {
    if period == 0 {
        return Err(Error::Domain("period must be positive".into()));
    }
    let details = (0..period)
        .map(|r| {
            let class: Vec<(u32, BigInt)> = samples
                .samples
                .iter()
                .filter(|(n, _)| n % period == r)
                .cloned()
                .collect();
            fit_class(samples, r, &class, degree_bound)
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = if details.iter().all(ClassFit::succeeded) {
        Verdict::PeriodicPolynomial {
            period,
            polys: details.iter().map(|d| d.fitted.clone()).collect(),
        }
    } else {
        Verdict::Inconclusive
    };
    Ok(PurityReport { verdict, details })
}

impl fmt::Display for PurityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::StrongPolynomial(p) => writeln!(f, "verdict: strong-polynomial {p}")?,
            Verdict::PeriodicPolynomial { period, polys } => {
                writeln!(f, "verdict: periodic-polynomial period {period}")?;
                for (r, p) in polys.iter().enumerate() {
                    writeln!(f, "  P_{r}(t) = {}", p.to_string().replace('q', "t"))?;
                }
            }
            Verdict::Inconclusive => writeln!(f, "verdict: inconclusive")?,
        }
        for d in &self.details {
            write!(
                f,
                "class {}: fitted {} integral {} overdetermined {} residuals",
                d.residue,
                d.fitted.to_string().replace('q', "t"),
                d.integral,
                d.overdetermined
            )?;
            for (n, r) in &d.residuals {
                write!(f, " {n}:{r}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(v: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        v.iter().map(|&(x, y)| (x.into(), y.into())).collect()
    }

    fn samples(q: u64, counts: &[i64]) -> CountSamples {
        CountSamples::new(
            q,
            counts
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as u32 + 1, c.into()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn interpolation_examples() {
        let p = |c: &[i64]| CountPolynomial::from_ints(c);
        assert_eq!(interpolate_poly(&pts(&[(2, 3), (3, 4), (4, 5), (5, 6)]), 1).unwrap(), Some(p(&[1, 1])));
        assert_eq!(interpolate_poly(&pts(&[(2, 4), (3, 9), (4, 16), (5, 25)]), 2).unwrap(), Some(p(&[0, 0, 1])));
        assert_eq!(interpolate_poly(&pts(&[(2, 3), (3, 4), (4, 5), (5, 7)]), 1).unwrap(), None);
        assert!(interpolate_poly(&pts(&[(2, 3), (2, 4)]), 0).is_err());
        assert!(interpolate_poly(&pts(&[(2, 3)]), 1).is_err());
    }

    #[test]
    fn multiplicative_group_is_strong() {
        let s = samples(2, &[1, 3, 7, 15]);
        let r = strong_purity_check(&s, 1).unwrap();
        assert_eq!(r.verdict, Verdict::StrongPolynomial(CountPolynomial::from_ints(&[-1, 1])));
        assert!(r.details[0].overdetermined);
    }

    #[test]
    fn norm_one_torus_is_periodic_not_strong() {
        // q^n - (-1)^n at q = 2
        let s = samples(2, &[3, 3, 9, 15]);
        assert_eq!(strong_purity_check(&s, 1).unwrap().verdict, Verdict::Inconclusive);
        let r = weak_purity_periodic_fit(&s, 2, 1).unwrap();
        assert_eq!(
            r.verdict,
            Verdict::PeriodicPolynomial {
                period: 2,
                polys: vec![CountPolynomial::from_ints(&[-1, 1]), CountPolynomial::from_ints(&[1, 1])],
            }
        );
        assert!(weak_purity_periodic_fit(&s, 3, 1).is_err());
        assert!(weak_purity_periodic_fit(&s, 0, 1).is_err());
    }

    #[test]
    fn powers_of_two_fit_t() {
        let r = weak_purity_periodic_fit(&samples(2, &[2, 4, 8, 16]), 1, 1).unwrap();
        assert_eq!(
            r.verdict,
            Verdict::PeriodicPolynomial { period: 1, polys: vec![CountPolynomial::monomial(1)] }
        );
    }

    #[test]
    fn non_integral_fit_is_inconclusive() {
        // t/2 fits (2,1),(4,2) exactly but is not integral
        let s = CountSamples::new(2, vec![(1, 1.into()), (2, 2.into())]).unwrap();
        assert_eq!(strong_purity_check(&s, 1).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn sample_file_parsing() {
        let s = CountSamples::parse("# torus\nbase_q 2\n2 3\n1 3 # n=1\n\n3 9\n").unwrap();
        assert_eq!(s.base_q(), 2);
        assert_eq!(s.samples().iter().map(|x| x.0).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(CountSamples::parse("1 3\n").is_err());
        assert!(CountSamples::parse("base_q 2\n1 3\n1 4\n").is_err());
        assert!(CountSamples::parse("base_q 2\n1 x\n").is_err());
        assert!(CountSamples::parse("base_q 2\n1 -3\n").is_err());
    }

    proptest! {
        #[test]
        fn strong_implies_weak_with_period_one(c in prop::collection::vec(0i64..6, 1..4), extra in 1usize..3) {
            let poly = CountPolynomial::from_ints(&c);
            let deg = c.len() - 1;
            let counts: Vec<(u32, BigInt)> = (1..=(deg + 1 + extra) as u32)
                .map(|n| (n, poly.eval(&BigInt::from(3u64).pow(n)).to_integer()))
                .collect();
            let s = CountSamples::new(3, counts).unwrap();
            let strong = strong_purity_check(&s, deg).unwrap();
            prop_assert_eq!(&strong.verdict, &Verdict::StrongPolynomial(poly.clone()));
            let weak = weak_purity_periodic_fit(&s, 1, deg).unwrap();
            prop_assert_eq!(weak.verdict, Verdict::PeriodicPolynomial { period: 1, polys: vec![poly] });
        }

        #[test]
        fn reports_ignore_sample_order(seed in any::<u64>()) {
            let mut counts: Vec<(u32, BigInt)> = [3i64, 3, 9, 15, 33, 63]
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as u32 + 1, c.into()))
                .collect();
            let sorted = CountSamples::new(2, counts.clone()).unwrap();
            let k = (seed % counts.len() as u64) as usize;
            counts.rotate_left(k);
            let last = counts.len() - 1;
            counts.swap(0, last);
            let shuffled = CountSamples::new(2, counts).unwrap();
            prop_assert_eq!(weak_purity_periodic_fit(&sorted, 2, 1).unwrap(), weak_purity_periodic_fit(&shuffled, 2, 1).unwrap());
            prop_assert_eq!(strong_purity_check(&sorted, 1).unwrap(), strong_purity_check(&shuffled, 1).unwrap());
        }
    }
}
