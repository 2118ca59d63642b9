//! Instability types, HN polygons and their dominance order, and exhaustive
//! classification of `R(Q, d)(F_q)` into HN strata.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffield::FieldTable;
use crate::quiver::{Character, DimVector, Quiver, Slope};
use crate::rep::{enumerate_reps, Budgets, SubspaceCatalog};
use crate::stability::Analyzer;

/// Upper limit on the number of instability types [`enumerate_hn_types`]
/// will produce.
pub const MAX_HN_TYPES: usize = 1 << 20;

/// An instability type: the dimension vectors `d^1, ..., d^n` of the HN
/// subquotients. Slopes are derived from a character on demand.
///
/// Ordered graded-lexicographically: by length, then piecewise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HnType {
    pieces: Vec<DimVector>,
}

impl HnType {
    /// Validates: at least one piece, no zero piece, pieces sum to `ambient`,
    /// slopes strictly decreasing.
    pub fn new(pieces: Vec<DimVector>, theta: &Character, ambient: &DimVector) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Domain("an instability type needs at least one piece".into()));
        }
        if pieces.iter().any(|p| p.is_zero() || p.len() != ambient.len()) {
            return Err(Error::Domain("instability type pieces must be nonzero".into()));
        }
        let sum = pieces
            .iter()
            .fold(DimVector::zero(ambient.len()), |acc, p| &acc + p);
        if &sum != ambient {
            return Err(Error::Domain(format!(
                "pieces sum to {sum}, expected {ambient}"
            )));
        }
        let ty = HnType { pieces };
        let slopes = ty.slopes(theta);
        if slopes.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Domain(format!(
                "slopes of {ty} do not strictly decrease"
            )));
        }
        Ok(ty)
    }

    pub fn trivial(d: &DimVector) -> Self {
        HnType {
            pieces: vec![d.clone()],
        }
    }

    pub fn pieces(&self) -> &[DimVector] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.pieces.len() == 1
    }

    pub fn ambient(&self) -> DimVector {
        let n = self.pieces[0].len();
        self.pieces.iter().fold(DimVector::zero(n), |acc, p| &acc + p)
    }

    pub fn slopes(&self, theta: &Character) -> Vec<Slope> {
        self.pieces
            .iter()
            .map(|p| theta.slope(p).expect("pieces are nonzero"))
            .collect()
    }

    pub fn polygon(&self, theta: &Character) -> HnPolygon {
        let mut vertices = vec![(0i64, 0i64)];
        let (mut x, mut y) = (0i64, 0i64);
        for p in &self.pieces {
            x += p.total() as i64;
            y += theta.eval(p);
            vertices.push((x, y));
        }
        HnPolygon { vertices }
    }

    /// Parses the `1,0;0,1` form produced by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let pieces = text
            .split(';')
            .map(|piece| {
                piece
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Domain(format!("bad dimension entry {x:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(DimVector::new)
            })
            .collect::<Result<Vec<_>>>()?;
        if pieces.is_empty() || pieces.iter().any(|p| p.len() != pieces[0].len()) {
            return Err(Error::Domain(format!("malformed instability type {text:?}")));
        }
        Ok(HnType { pieces })
    }
}

impl Ord for HnType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.pieces
            .len()
            .cmp(&other.pieces.len())
            .then_with(|| self.pieces.cmp(&other.pieces))
    }
}

impl PartialOrd for HnType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dimension vectors as comma-separated tuples, pieces separated by `;`.
impl fmt::Display for HnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.pieces.iter().enumerate() {
            if k > 0 {
                write!(f, ";")?;
            }
            for (i, x) in p.coords().iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HnType[{self}]")
    }
}

/// Lattice path through `(sum_{i<=k} dim d^i, sum_{i<=k} Theta(d^i))`,
/// starting at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnPolygon {
    vertices: Vec<(i64, i64)>,
}

impl HnPolygon {
    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }

    /// Height of the path above `x`, for `0 <= x <= last x`.
    pub fn height_at(&self, x: i64) -> Ratio<i64> {
        let seg = self
            .vertices
            .windows(2)
            .find(|w| w[0].0 <= x && x <= w[1].0)
            .expect("x within the polygon's range");
        let ((x0, y0), (x1, y1)) = (seg[0], seg[1]);
        Ratio::from_integer(y0) + Ratio::new((y1 - y0) * (x - x0), x1 - x0)
    }
}

/// All instability types of `d` for `theta`: ordered decompositions into
/// nonzero dimension vectors with strictly decreasing slopes, graded
/// lexicographic order, trivial type first.
pub fn enumerate_hn_types(quiver: &Quiver, d: &DimVector, theta: &Character) -> Result<Vec<HnType>> {
    quiver.check_dims(d)?;
    quiver.check_theta(theta)?;
    if d.is_zero() {
        return Err(Error::Domain("no instability types for the zero vector".into()));
    }
    fn rec(
        rem: &DimVector,
        bound: Option<Slope>,
        theta: &Character,
        prefix: &mut Vec<DimVector>,
        out: &mut Vec<HnType>,
    ) -> Result<()> {
        for e in rem.sub_vectors() {
            if e.is_zero() {
                continue;
            }
            let mu = theta.slope(&e)?;
            if bound.is_some_and(|b| mu >= b) {
                continue;
            }
            prefix.push(e.clone());
            if &e == rem {
                if out.len() >= MAX_HN_TYPES {
                    return Err(Error::BudgetExceeded {
                        what: "instability type",
                        needed: out.len() as u128 + 1,
                        limit: MAX_HN_TYPES as u64,
                    });
                }
                out.push(HnType {
                    pieces: prefix.clone(),
                });
            } else {
                rec(&(rem - &e), Some(mu), theta, prefix, out)?;
            }
            prefix.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    rec(d, None, theta, &mut Vec::new(), &mut out)?;
    out.sort();
    Ok(out)
}

/// Whether the polygon of `gamma` lies on or above that of `beta` everywhere.
///
/// Both paths are concave and piecewise linear with shared endpoints, so
/// comparing heights at the union of their breakpoints is exact.
pub fn dominates(gamma: &HnType, beta: &HnType, theta: &Character) -> Result<bool> {
    if gamma.ambient() != beta.ambient() {
        return Err(Error::Domain(format!(
            "types {gamma} and {beta} live over different dimension vectors"
        )));
    }
    let (pg, pb) = (gamma.polygon(theta), beta.polygon(theta));
    let xs: BTreeSet<i64> = pg
        .vertices
        .iter()
        .chain(&pb.vertices)
        .map(|v| v.0)
        .collect();
    Ok(xs.into_iter().all(|x| pg.height_at(x) >= pb.height_at(x)))
}

/// Exact point counts per HN stratum over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumTable {
    q: u64,
    rep_space_dim: usize,
    counts: BTreeMap<HnType, u64>,
}

impl StratumTable {
    pub fn new(q: u64, rep_space_dim: usize, counts: BTreeMap<HnType, u64>) -> Self {
        StratumTable {
            q,
            rep_space_dim,
            counts,
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rep_space_dim(&self) -> usize {
        self.rep_space_dim
    }

    pub fn counts(&self) -> &BTreeMap<HnType, u64> {
        &self.counts
    }

    pub fn count(&self, ty: &HnType) -> u64 {
        self.counts.get(ty).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.counts.values().map(|&c| c as u128).sum()
    }

    /// `q^{dim R(Q, d)}`.
    pub fn expected_total(&self) -> u128 {
        (self.q as u128).pow(self.rep_space_dim as u32)
    }

    pub fn nonempty(&self) -> impl Iterator<Item = (&HnType, u64)> {
        self.counts.iter().filter(|(_, &c)| c > 0).map(|(t, &c)| (t, c))
    }

    /// One line per type: `<type> <count>`, e.g. `1,0;0,1 1`.
    pub fn to_lines(&self) -> String {
        self.counts
            .iter()
            .map(|(t, c)| format!("{t} {c}\n"))
            .collect()
    }
}

/// Assigns every `F_q`-point of `R(Q, d)` to its HN type.
///
/// The table lists every enumerated type, including empty strata. A point
/// whose computed type is not among them, or a total different from
/// `q^{dim R}`, is a theorem violation.
pub fn classify_representations(
    quiver: &Quiver,
    d: &DimVector,
    theta: &Character,
    field: &FieldTable,
    budgets: &Budgets,
) -> Result<StratumTable> {
    let space = enumerate_reps(quiver, d, field, budgets)?;
    let catalog = SubspaceCatalog::for_dims(field, d, budgets)?;
    let analyzer = Analyzer::new(field, theta, &catalog, *budgets);
    let types = enumerate_hn_types(quiver, d, theta)?;

    const CHUNK: u64 = 1 << 12;
    let chunks = space.len().div_ceil(CHUNK);
    let partials = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<BTreeMap<HnType, u64>> {
            let mut local = BTreeMap::new();
            for m in space.range(c * CHUNK..(c + 1) * CHUNK) {
                let (_, ty) = analyzer.hn_filtration(&m)?;
                *local.entry(ty).or_insert(0) += 1;
            }
            Ok(local)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut counts: BTreeMap<HnType, u64> = types.into_iter().map(|t| (t, 0)).collect();
    for part in partials {
        for (ty, c) in part {
            match counts.get_mut(&ty) {
                Some(slot) => *slot += c,
                None => {
                    return Err(Error::TheoremViolation(format!(
                        "HN type {ty} is not an admissible instability type"
                    )))
                }
            }
        }
    }
    let table = StratumTable::new(field.q() as u64, quiver.rep_space_dim(d), counts);
    if table.total() != table.expected_total() {
        return Err(Error::TheoremViolation(format!(
            "strata hold {} points, R(Q,d)(F_{}) has {}",
            table.total(),
            field.q(),
            table.expected_total()
        )));
    }
    Ok(table)
}

/// Dominance structure over the types of a stratum table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    /// Covering relations `(upper, lower)`: `upper` strictly dominates
    /// `lower` with nothing strictly between.
    pub edges: Vec<(HnType, HnType)>,
    pub acyclic: bool,
    /// Nonempty types dominating no other nonempty type. The open stratum is
    /// dominated by every nonempty stratum, so exactly one is expected.
    pub minimal_nonempty: Vec<HnType>,
    pub flags: Vec<String>,
}

/// Counting-level diagnostics for the closure relation: strata closures only
/// meet strata with dominating polygons, so the dense stratum must be the
/// unique dominance-minimal nonempty one. Diagnostic only.
pub fn closure_consistency(table: &StratumTable, theta: &Character) -> Result<ClosureReport> {
    let types: Vec<&HnType> = table.counts.keys().collect();
    let n = types.len();
    let mut dom = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            dom[i][j] = dominates(types[i], types[j], theta)?;
        }
    }
    let mut flags = Vec::new();
    let mut acyclic = true;
    for i in 0..n {
        for j in i + 1..n {
            if dom[i][j] && dom[j][i] {
                acyclic = false;
                flags.push(format!("types {} and {} have identical polygons", types[i], types[j]));
            }
        }
    }
    let strict = |i: usize, j: usize| i != j && dom[i][j] && !dom[j][i];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if strict(i, j) && !(0..n).any(|k| strict(i, k) && strict(k, j)) {
                edges.push((types[i].clone(), types[j].clone()));
            }
        }
    }
    let nonempty: Vec<usize> = (0..n).filter(|&i| table.count(types[i]) > 0).collect();
    let minimal_nonempty: Vec<HnType> = nonempty
        .iter()
        .filter(|&&i| !nonempty.iter().any(|&j| strict(i, j)))
        .map(|&i| types[i].clone())
        .collect();
    if minimal_nonempty.len() != 1 {
        flags.push(format!(
            "{} dominance-minimal nonempty strata, expected exactly one",
            minimal_nonempty.len()
        ));
    }
    Ok(ClosureReport {
        edges,
        acyclic,
        minimal_nonempty,
        flags,
    })
}
