//! Exact point counting for quiver representation spaces over small finite
//! fields: slope stability, Harder-Narasimhan filtrations and strata, and the
//! stratification recursion for semistable loci and moduli of stables.

pub mod counting;
pub mod error;
pub mod ffield;
pub mod linalg;
pub mod poly;
pub mod purity;
pub mod quiver;
pub mod rep;
pub mod stability;
pub mod strata;

pub use error::{Error, Result};
pub use ffield::{make_field, Elem, FieldTable, PrimePower};
pub use linalg::{Matrix, Subspace};
pub use poly::CountPolynomial;
pub use quiver::{Character, DimVector, Quiver, Slope};
pub use rep::{Budgets, Filtration, Representation, SubspaceCatalog, SubspaceTuple};
pub use stability::{Analyzer, Semistability, StabilityStatus, StabilityVerdict};
pub use strata::{HnPolygon, HnType, StratumTable};
pub use counting::{SemistableCounter, StratumFormula, TorsorCount};
pub use purity::{CountSamples, PurityReport, Verdict};
