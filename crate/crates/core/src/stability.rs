//! Slope (semi)stability via King's criterion, maximal destabilizing
//! subrepresentations and Harder-Narasimhan filtrations.
//!
//! Every quantifier over subrepresentations is realized by exhaustive
//! enumeration through a shared [`SubspaceCatalog`].

use crate::error::{Error, Result};
use crate::ffield::FieldTable;
use crate::quiver::{Character, Slope};
use crate::rep::{
    enumerate_subreps, preimage, quotient_rep, Budgets, Filtration, Representation,
    SubspaceCatalog, SubspaceTuple,
};
use crate::strata::HnType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityStatus {
    Stable,
    SemistableNotStable,
    Unstable,
}

/// Three-way verdict. `Unstable` carries a subrepresentation of larger
/// slope, `SemistableNotStable` a proper nonzero one of equal slope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    pub witness: Option<SubspaceTuple>,
}

impl StabilityVerdict {
    pub fn is_semistable(&self) -> bool {
        self.status != StabilityStatus::Unstable
    }

    pub fn is_stable(&self) -> bool {
        self.status == StabilityStatus::Stable
    }
}

/// Two-way verdict of [`Analyzer::is_semistable`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Semistability {
    Semistable,
    Unstable { witness: SubspaceTuple },
}

impl Semistability {
    pub fn is_semistable(&self) -> bool {
        matches!(self, Semistability::Semistable)
    }
}

/// Stability computations for a fixed character over a fixed field.
#[derive(Debug, Clone)]
pub struct Analyzer<'c> {
    field: &'c FieldTable,
    theta: &'c Character,
    catalog: &'c SubspaceCatalog,
    budgets: Budgets,
}

impl<'c> Analyzer<'c> {
    pub fn new(
        field: &'c FieldTable,
        theta: &'c Character,
        catalog: &'c SubspaceCatalog,
        budgets: Budgets,
    ) -> Self {
        Analyzer {
            field,
            theta,
            catalog,
            budgets,
        }
    }

    pub fn theta(&self) -> &Character {
        self.theta
    }

    fn check(&self, m: &Representation<'_>) -> Result<Slope> {
        m.quiver().check_theta(self.theta)?;
        self.theta.slope(m.dims())
    }

    fn subreps(&self, m: &Representation<'_>) -> Result<Vec<SubspaceTuple>> {
        enumerate_subreps(m, self.catalog, &self.budgets)
    }

    fn slope_of(&self, s: &SubspaceTuple) -> Slope {
        self.theta.slope(&s.dims()).expect("nonzero subrepresentation")
    }

    /// Unstable iff some nonzero subrepresentation has slope above `mu(m)`.
    pub fn is_semistable(&self, m: &Representation<'_>) -> Result<Semistability> {
        let mu = self.check(m)?;
        let best = self
            .subreps(m)?
            .into_iter()
            .filter(|s| !s.is_zero())
            .map(|s| (self.slope_of(&s), s))
            .filter(|(slope, _)| *slope > mu)
            .max_by(|a, b| a.0.cmp(&b.0).then(a.1.total_dim().cmp(&b.1.total_dim())));
        Ok(match best {
            Some((_, witness)) => Semistability::Unstable { witness },
            None => Semistability::Semistable,
        })
    }

    pub fn is_stable(&self, m: &Representation<'_>) -> Result<StabilityVerdict> {
        let mu = self.check(m)?;
        let mut equal = None;
        let mut above: Option<(Slope, SubspaceTuple)> = None;
        for s in self.subreps(m)? {
            if s.is_zero() {
                continue;
            }
            let slope = self.slope_of(&s);
            if slope > mu {
                if above.as_ref().is_none_or(|(b, _)| slope > *b) {
                    above = Some((slope, s));
                }
            } else if slope == mu && !s.is_full() && equal.is_none() {
                equal = Some(s);
            }
        }
        Ok(match (above, equal) {
            (Some((_, w)), _) => StabilityVerdict {
                status: StabilityStatus::Unstable,
                witness: Some(w),
            },
            (None, Some(w)) => StabilityVerdict {
                status: StabilityStatus::SemistableNotStable,
                witness: Some(w),
            },
            (None, None) => StabilityVerdict {
                status: StabilityStatus::Stable,
                witness: None,
            },
        })
    }

    /// The largest subrepresentation among those of maximal slope.
    ///
    /// For semistable `m` this is `m` itself. The maximal-slope
    /// subrepresentations must all sit inside the chosen one; anything else
    /// contradicts uniqueness and is reported as a theorem violation.
    pub fn maximal_destabilizing(&self, m: &Representation<'_>) -> Result<SubspaceTuple> {
        self.check(m)?;
        let mut best: Option<Slope> = None;
        let mut maximizers: Vec<SubspaceTuple> = Vec::new();
        for s in self.subreps(m)? {
            if s.is_zero() {
                continue;
            }
            let slope = self.slope_of(&s);
            match best {
                Some(b) if slope < b => {}
                Some(b) if slope == b => maximizers.push(s),
                _ => {
                    best = Some(slope);
                    maximizers.clear();
                    maximizers.push(s);
                }
            }
        }
        let top = maximizers
            .iter()
            .max_by_key(|s| s.total_dim())
            .expect("the full tuple is a nonzero subrepresentation")
            .clone();
        if let Some(rogue) = maximizers
            .iter()
            .find(|s| !s.is_contained_in(self.field, &top))
        {
            return Err(Error::TheoremViolation(format!(
                "maximal-slope subrepresentations {:?} and {:?} are incomparable",
                top.dims(),
                rogue.dims()
            )));
        }
        Ok(top)
    }

    /// Harder-Narasimhan filtration: repeatedly take the maximal
    /// destabilizing subrepresentation of the current quotient and pull it
    /// back to `m`.
    pub fn hn_filtration(&self, m: &Representation<'_>) -> Result<(Filtration, HnType)> {
        self.check(m)?;
        let d = m.dims().clone();
        let mut current = SubspaceTuple::zero(&d);
        let mut steps = vec![current.clone()];
        while !current.is_full() {
            let quot = quotient_rep(m, &current)?;
            let top = self.maximal_destabilizing(&quot)?;
            current = preimage(self.field, &current, &top);
            steps.push(current.clone());
        }
        let filtration = Filtration::new(self.field, steps)?;
        let ty = HnType::new(filtration.piece_dims(), self.theta, &d).map_err(|e| {
            Error::TheoremViolation(format!("HN procedure produced an invalid type: {e}"))
        })?;
        Ok((filtration, ty))
    }
}
