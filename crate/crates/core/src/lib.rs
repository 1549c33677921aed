//! Classification of (n,1) conic-line arrangements.
//!
//! * [`model`]: the combinatorial description of an arrangement and its
//!   per-point characteristic triples.
//! * [`equivalence`]: line relabelings, canonical keys, equivalence witnesses.
//! * [`generator`]: inductive enumeration of all classes, plus a brute-force
//!   oracle for small line counts.
//! * [`minimality`]: line removal and the filters that rule out candidates
//!   for minimal Zariski pairs.
//! * [`realization`]: numerical realizations over the complex projective
//!   plane and projective equivalence testing.

pub mod equivalence;
pub mod fixtures;
pub mod generator;
pub mod minimality;
pub mod model;
pub mod realization;

pub use equivalence::{are_equivalent, canonical_key, relabel, weak_numerical_type, CanonicalKey, WeakNumericalType};
pub use generator::{enumerate_classes, extensions, ClassCatalog, ClassEntry, ExtensionChoice};
pub use minimality::{analyze, candidate_report, remove_line};
pub use model::{Arrangement, CharTriple, LineId, ModelError, PointRecord};
