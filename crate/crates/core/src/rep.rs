//! Concrete representations over `F_q`, their subrepresentations, quotients
//! and associated graded pieces.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::ffield::{Elem, FieldTable};
use crate::linalg::{enumerate_subspaces, Matrix, Subspace};
use crate::quiver::{DimVector, Quiver};

/// Enumeration limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Maximum number of points of `R(Q, d)(F_q)` to enumerate.
    pub reps: u64,
    /// Maximum number of candidate subspace tuples per representation.
    pub subspace_tuples: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            reps: 1 << 24,
            subspace_tuples: 1 << 20,
        }
    }
}

/// A point of `R(Q, d)(F_q)`: one `d_t x d_s` matrix per arrow `s -> t`.
#[derive(Clone, PartialEq, Eq)]
pub struct Representation<'a> {
    quiver: &'a Quiver,
    field: &'a FieldTable,
    dims: DimVector,
    mats: Vec<Matrix>,
}

impl<'a> Representation<'a> {
    pub fn new(
        quiver: &'a Quiver,
        field: &'a FieldTable,
        dims: DimVector,
        mats: Vec<Matrix>,
    ) -> Result<Self> {
        quiver.check_dims(&dims)?;
        if mats.len() != quiver.arrows().len() {
            return Err(Error::Shape(format!(
                "{} matrices given for {} arrows",
                mats.len(),
                quiver.arrows().len()
            )));
        }
        for (k, (&(s, t), m)) in quiver.arrows().iter().zip(&mats).enumerate() {
            if m.rows() != dims[t] || m.cols() != dims[s] {
                return Err(Error::Shape(format!(
                    "arrow {k} ({s} -> {t}) needs a {}x{} matrix, got {}x{}",
                    dims[t],
                    dims[s],
                    m.rows(),
                    m.cols()
                )));
            }
            if m.entries().iter().any(|&x| x as usize >= field.q()) {
                return Err(Error::Shape(format!("arrow {k} has an entry outside F_{}", field.q())));
            }
        }
        Ok(Representation {
            quiver,
            field,
            dims,
            mats,
        })
    }

    /// Builds a representation from row-major entry lists, one per arrow.
    pub fn from_entries(
        quiver: &'a Quiver,
        field: &'a FieldTable,
        dims: DimVector,
        entries: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        quiver.check_dims(&dims)?;
        if entries.len() != quiver.arrows().len() {
            return Err(Error::Shape(format!(
                "{} matrices given for {} arrows",
                entries.len(),
                quiver.arrows().len()
            )));
        }
        let mats = quiver
            .arrows()
            .iter()
            .zip(entries)
            .map(|(&(s, t), e)| Matrix::from_rows(dims[t], dims[s], e))
            .collect::<Result<Vec<_>>>()?;
        Self::new(quiver, field, dims, mats)
    }

    pub fn zero(quiver: &'a Quiver, field: &'a FieldTable, dims: DimVector) -> Self {
        let mats = quiver
            .arrows()
            .iter()
            .map(|&(s, t)| Matrix::zeros(dims[t], dims[s]))
            .collect();
        Representation {
            quiver,
            field,
            dims,
            mats,
        }
    }

    pub fn quiver(&self) -> &'a Quiver {
        self.quiver
    }

    pub fn field(&self) -> &'a FieldTable {
        self.field
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn mats(&self) -> &[Matrix] {
        &self.mats
    }

    /// Block-diagonal sum `self (+) other`.
    pub fn direct_sum(&self, other: &Representation<'a>) -> Representation<'a> {
        let dims = &self.dims + &other.dims;
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        m.set(r, c, a.get(r, c));
                    }
                }
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        m.set(a.rows() + r, a.cols() + c, b.get(r, c));
                    }
                }
                m
            })
            .collect();
        Representation {
            quiver: self.quiver,
            field: self.field,
            dims,
            mats,
        }
    }

    /// Row-major entries of each arrow matrix, one line per arrow; empty
    /// matrices print as `-`.
    pub fn to_literal(&self) -> String {
        self.mats
            .iter()
            .map(|m| {
                if m.entries().is_empty() {
                    "-".to_string()
                } else {
                    m.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
                }
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Debug for Representation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("dims", &self.dims)
            .field("mats", &self.mats)
            .finish()
    }
}

/// The finite set `R(Q, d)(F_q)`, addressable by index.
///
/// Index `i` decodes to the entry sequence (arrows in order, each matrix
/// row-major) whose base-`q` digits spell `i`, first entry most significant.
/// Disjoint index ranges can be consumed independently.
#[derive(Debug, Clone)]
pub struct RepSpace<'a> {
    quiver: &'a Quiver,
    field: &'a FieldTable,
    dims: DimVector,
    entry_count: usize,
    len: u64,
}

pub fn enumerate_reps<'a>(
    quiver: &'a Quiver,
    dims: &DimVector,
    field: &'a FieldTable,
    budgets: &Budgets,
) -> Result<RepSpace<'a>> {
    quiver.check_dims(dims)?;
    let entry_count = quiver.rep_space_dim(dims);
    let needed = (field.q() as u128)
        .checked_pow(entry_count as u32)
        .unwrap_or(u128::MAX);
    if needed > budgets.reps as u128 {
        return Err(Error::BudgetExceeded {
            what: "representation",
            needed,
            limit: budgets.reps,
        });
    }
    Ok(RepSpace {
        quiver,
        field,
        dims: dims.clone(),
        entry_count,
        len: needed as u64,
    })
}

impl<'a> RepSpace<'a> {
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn get(&self, index: u64) -> Representation<'a> {
        assert!(index < self.len, "representation index out of range");
        let q = self.field.q() as u64;
        let mut entries = vec![0 as Elem; self.entry_count];
        let mut code = index;
        for e in entries.iter_mut().rev() {
            *e = (code % q) as Elem;
            code /= q;
        }
        let mut mats = Vec::with_capacity(self.quiver.arrows().len());
        let mut offset = 0;
        for &(s, t) in self.quiver.arrows() {
            let n = self.dims[s] * self.dims[t];
            let m = Matrix::from_rows(self.dims[t], self.dims[s], entries[offset..offset + n].to_vec())
                .expect("shape computed from dims");
            offset += n;
            mats.push(m);
        }
        Representation {
            quiver: self.quiver,
            field: self.field,
            dims: self.dims.clone(),
            mats,
        }
    }

    pub fn range(&self, range: Range<u64>) -> impl Iterator<Item = Representation<'a>> + '_ {
        let end = range.end.min(self.len);
        (range.start..end).map(move |i| self.get(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = Representation<'a>> + '_ {
        self.range(0..self.len)
    }
}

/// A subspace `S_i` of `F_q^{d_i}` at every vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubspaceTuple {
    spaces: Vec<Subspace>,
}

impl SubspaceTuple {
    pub fn new(spaces: Vec<Subspace>) -> Self {
        SubspaceTuple { spaces }
    }

    pub fn zero(d: &DimVector) -> Self {
        SubspaceTuple {
            spaces: d.coords().iter().map(|&n| Subspace::zero(n)).collect(),
        }
    }

    pub fn full(d: &DimVector) -> Self {
        SubspaceTuple {
            spaces: d.coords().iter().map(|&n| Subspace::full(n)).collect(),
        }
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn dims(&self) -> DimVector {
        DimVector::new(self.spaces.iter().map(|s| s.rank()).collect())
    }

    pub fn ambient_dims(&self) -> DimVector {
        DimVector::new(self.spaces.iter().map(|s| s.ambient()).collect())
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(|s| s.rank()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.spaces.iter().all(|s| s.rank() == 0)
    }

    pub fn is_full(&self) -> bool {
        self.spaces.iter().all(|s| s.rank() == s.ambient())
    }

    pub fn is_contained_in(&self, f: &FieldTable, other: &SubspaceTuple) -> bool {
        self.spaces.len() == other.spaces.len()
            && self
                .spaces
                .iter()
                .zip(&other.spaces)
                .all(|(a, b)| a.is_subspace_of(f, b))
    }
}

impl fmt::Debug for SubspaceTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.spaces).finish()
    }
}

/// All subspaces of `F_q^n` for every `n` up to a bound, computed once.
#[derive(Debug, Clone)]
pub struct SubspaceCatalog {
    q: usize,
    by_ambient: Vec<Vec<Subspace>>,
}

impl SubspaceCatalog {
    /// Catalog covering every ambient dimension `<= max_ambient`.
    pub fn new(field: &FieldTable, max_ambient: usize, budgets: &Budgets) -> Result<Self> {
        let mut by_ambient = Vec::with_capacity(max_ambient + 1);
        for n in 0..=max_ambient {
            let total: u128 = (0..=n)
                .map(|k| crate::linalg::gaussian_binomial(n, k, field.q() as u64))
                .sum();
            if total > budgets.subspace_tuples as u128 {
                return Err(Error::BudgetExceeded {
                    what: "subspace",
                    needed: total,
                    limit: budgets.subspace_tuples,
                });
            }
            let mut all = Vec::with_capacity(total as usize);
            for k in 0..=n {
                all.extend(enumerate_subspaces(field, n, k)?);
            }
            by_ambient.push(all);
        }
        Ok(SubspaceCatalog {
            q: field.q(),
            by_ambient,
        })
    }

    /// Catalog large enough for every vertex of `dims`.
    pub fn for_dims(field: &FieldTable, dims: &DimVector, budgets: &Budgets) -> Result<Self> {
        Self::new(field, dims.coords().iter().copied().max().unwrap_or(0), budgets)
    }

    pub fn max_ambient(&self) -> usize {
        self.by_ambient.len() - 1
    }

    /// All subspaces of `F_q^n`, by increasing rank.
    pub fn subspaces(&self, n: usize) -> &[Subspace] {
        &self.by_ambient[n]
    }
}

/// Whether `s` is closed under every arrow map of `m`.
pub fn is_subrep(m: &Representation<'_>, s: &SubspaceTuple) -> bool {
    if s.ambient_dims() != m.dims {
        return false;
    }
    let f = m.field;
    let mut img = Vec::new();
    m.quiver.arrows().iter().zip(&m.mats).all(|(&(src, tgt), mat)| {
        s.spaces[src].basis_rows().all(|v| {
            mat.apply(f, v, &mut img);
            s.spaces[tgt].contains(f, &img)
        })
    })
}

/// Every subrepresentation of `m`, including the zero and full tuples.
///
/// Vertices are assigned in index order; an arrow is checked as soon as both
/// of its endpoints have been assigned.
pub fn enumerate_subreps(
    m: &Representation<'_>,
    catalog: &SubspaceCatalog,
    budgets: &Budgets,
) -> Result<Vec<SubspaceTuple>> {
    let f = m.field;
    if catalog.q != f.q() {
        return Err(Error::Shape("subspace catalog built over a different field".into()));
    }
    let n = m.dims.len();
    if m.dims.coords().iter().any(|&x| x > catalog.max_ambient()) {
        return Err(Error::Shape("subspace catalog too small for dimension vector".into()));
    }
    let candidates: u128 = m
        .dims
        .coords()
        .iter()
        .map(|&x| catalog.subspaces(x).len() as u128)
        .product();
    if candidates > budgets.subspace_tuples as u128 {
        return Err(Error::BudgetExceeded {
            what: "subspace tuple",
            needed: candidates,
            limit: budgets.subspace_tuples,
        });
    }
    // arrows whose later endpoint is vertex v
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, &(s, t)) in m.quiver.arrows().iter().enumerate() {
        checks[s.max(t)].push(k);
    }

    struct Search<'r, 'a> {
        m: &'r Representation<'a>,
        catalog: &'r SubspaceCatalog,
        checks: Vec<Vec<usize>>,
        chosen: Vec<&'r Subspace>,
        img: Vec<Elem>,
        out: Vec<SubspaceTuple>,
    }

    impl<'r> Search<'r, '_> {
        fn closed(&mut self, arrow: usize) -> bool {
            let f = self.m.field;
            let (s, t) = self.m.quiver.arrows()[arrow];
            let mat = &self.m.mats[arrow];
            let (src, tgt) = (self.chosen[s], self.chosen[t]);
            for v in src.basis_rows() {
                mat.apply(f, v, &mut self.img);
                if !tgt.contains(f, &self.img) {
                    return false;
                }
            }
            true
        }

        fn run(&mut self, v: usize) {
            if v == self.m.dims.len() {
                self.out.push(SubspaceTuple {
                    spaces: self.chosen.iter().map(|&s| s.clone()).collect(),
                });
                return;
            }
            let f = self.m.field;
            // arrows into v from earlier vertices force S_v to contain their images
            let mut forced = Vec::new();
            let mut later = Vec::new();
            for &a in &self.checks[v] {
                let (s, t) = self.m.quiver.arrows()[a];
                if t == v && s != v {
                    for row in self.chosen[s].basis_rows() {
                        self.m.mats[a].apply(f, row, &mut self.img);
                        forced.extend_from_slice(&self.img);
                    }
                } else {
                    later.push(a);
                }
            }
            let n = self.m.dims[v];
            let floor = Subspace::span(f, n, forced.chunks(n.max(1)));
            let catalog = self.catalog;
            for cand in catalog.subspaces(n) {
                if cand.rank() < floor.rank() || !floor.is_subspace_of(f, cand) {
                    continue;
                }
                self.chosen.push(cand);
                if later.iter().all(|&a| self.closed(a)) {
                    self.run(v + 1);
                }
                self.chosen.pop();
            }
        }
    }

    let mut search = Search {
        m,
        catalog,
        checks,
        chosen: Vec::with_capacity(n),
        img: Vec::new(),
        out: Vec::new(),
    };
    search.run(0);
    Ok(search.out)
}

/// Subrepresentation `S` of `m` written in the RREF coordinates of each `S_i`.
pub fn restrict_rep<'a>(m: &Representation<'a>, s: &SubspaceTuple) -> Result<Representation<'a>> {
    if !is_subrep(m, s) {
        return Err(Error::Domain("tuple is not a subrepresentation".into()));
    }
    let f = m.field;
    let mut img = Vec::new();
    let mats = m
        .quiver
        .arrows()
        .iter()
        .zip(&m.mats)
        .map(|(&(src, tgt), mat)| {
            let (ss, st) = (&s.spaces[src], &s.spaces[tgt]);
            let mut out = Matrix::zeros(st.rank(), ss.rank());
            for (c, v) in ss.basis_rows().enumerate() {
                mat.apply(f, v, &mut img);
                for (r, x) in st.coordinates(&img).into_iter().enumerate() {
                    out.set(r, c, x);
                }
            }
            out
        })
        .collect();
    Ok(Representation {
        quiver: m.quiver,
        field: m.field,
        dims: s.dims(),
        mats,
    })
}

/// `m / S`, in the coordinates given by the non-pivot columns of each `S_i`.
pub fn quotient_rep<'a>(m: &Representation<'a>, s: &SubspaceTuple) -> Result<Representation<'a>> {
    if !is_subrep(m, s) {
        return Err(Error::Domain("tuple is not a subrepresentation".into()));
    }
    let f = m.field;
    let comps: Vec<Vec<usize>> = s.spaces.iter().map(|x| x.non_pivots()).collect();
    let mut img = Vec::new();
    let mut e = Vec::new();
    let mats = m
        .quiver
        .arrows()
        .iter()
        .zip(&m.mats)
        .map(|(&(src, tgt), mat)| {
            let mut out = Matrix::zeros(comps[tgt].len(), comps[src].len());
            for (c, &col) in comps[src].iter().enumerate() {
                e.clear();
                e.resize(mat.cols(), 0);
                e[col] = 1;
                mat.apply(f, &e, &mut img);
                s.spaces[tgt].reduce(f, &mut img);
                for (r, &row) in comps[tgt].iter().enumerate() {
                    out.set(r, c, img[row]);
                }
            }
            out
        })
        .collect();
    Ok(Representation {
        quiver: m.quiver,
        field: m.field,
        dims: &m.dims - &s.dims(),
        mats,
    })
}

/// Preimage of a subrepresentation of `m / S` (in [`quotient_rep`]
/// coordinates) under the projection `m -> m / S`.
pub fn preimage(f: &FieldTable, s: &SubspaceTuple, sub_of_quotient: &SubspaceTuple) -> SubspaceTuple {
    let spaces = s
        .spaces
        .iter()
        .zip(&sub_of_quotient.spaces)
        .map(|(base, upper)| {
            let n = base.ambient();
            let comp = base.non_pivots();
            let lifted: Vec<Vec<Elem>> = upper
                .basis_rows()
                .map(|row| {
                    let mut v = vec![0; n];
                    for (&c, &x) in comp.iter().zip(row) {
                        v[c] = x;
                    }
                    v
                })
                .collect();
            Subspace::span(
                f,
                n,
                base.basis_rows().chain(lifted.iter().map(|v| v.as_slice())),
            )
        })
        .collect();
    SubspaceTuple { spaces }
}

/// A chain `0 = S^0 < S^1 < ... < S^n = full` of subspace tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Filtration {
    steps: Vec<SubspaceTuple>,
}

impl Filtration {
    pub fn new(f: &FieldTable, steps: Vec<SubspaceTuple>) -> Result<Self> {
        let (Some(first), Some(last)) = (steps.first(), steps.last()) else {
            return Err(Error::Domain("empty filtration".into()));
        };
        if !first.is_zero() || !last.is_full() || steps.len() < 2 {
            return Err(Error::Domain("a filtration runs from the zero tuple to the full tuple".into()));
        }
        for w in steps.windows(2) {
            if !w[0].is_contained_in(f, &w[1]) || w[0].total_dim() >= w[1].total_dim() {
                return Err(Error::Domain("filtration steps must strictly increase".into()));
            }
        }
        Ok(Filtration { steps })
    }

    /// `0 < full`.
    pub fn trivial(d: &DimVector) -> Self {
        Filtration {
            steps: vec![SubspaceTuple::zero(d), SubspaceTuple::full(d)],
        }
    }

    /// All steps including the zero and full tuples.
    pub fn steps(&self) -> &[SubspaceTuple] {
        &self.steps
    }

    /// Number of subquotients.
    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Dimension vectors of the subquotients `S^k / S^{k-1}`.
    pub fn piece_dims(&self) -> Vec<DimVector> {
        self.steps
            .windows(2)
            .map(|w| &w[1].dims() - &w[0].dims())
            .collect()
    }
}

/// The subquotients `S^k / S^{k-1}` of a filtration by subrepresentations.
/// Their direct sum is the limit of `m` under the one-parameter subgroup
/// adapted to the filtration.
pub fn associated_graded<'a>(
    m: &Representation<'a>,
    filtration: &Filtration,
) -> Result<Vec<Representation<'a>>> {
    let f = m.field;
    if filtration.steps[0].ambient_dims() != m.dims {
        return Err(Error::Shape("filtration lives in a different ambient space".into()));
    }
    filtration
        .steps
        .windows(2)
        .map(|w| {
            let upper = restrict_rep(m, &w[1])?;
            let lower = SubspaceTuple {
                spaces: w[0]
                    .spaces
                    .iter()
                    .zip(&w[1].spaces)
                    .map(|(lo, hi)| {
                        let coords: Vec<Vec<Elem>> =
                            lo.basis_rows().map(|row| hi.coordinates(row)).collect();
                        Subspace::span(f, hi.rank(), coords.iter().map(|v| v.as_slice()))
                    })
                    .collect(),
            };
            quotient_rep(&upper, &lower)
        })
        .collect()
}
