//! Exact computations with minimal Sullivan algebras over ℚ.
//!
//! The crate computes rational cohomology of Sullivan models degree by
//! degree with exact sparse linear algebra, sorts models into structural
//! classes (pure, two-stage, hyperelliptic, fibration-built) and checks the
//! Hilali inequality `dim H(ΛW, d) ≥ dim W` together with the numeric bounds
//! and split Wang/Gysin sequence identities that support it.

pub mod algebra;
pub mod classify;
pub mod cohomology;
pub mod corpus;
pub mod derivation;
pub mod error;
pub mod hilali;
pub mod linalg;
pub mod model;
pub mod sequences;
pub mod text;

pub use algebra::{FreeAlgebra, Generator, Monomial, Polynomial, Sign, Q};
pub use classify::{classify, ClassificationReport};
pub use cohomology::{betti, BettiOptions, BettiTable, EllipticStatus, EllipticityCertificate};
pub use corpus::{builtin, CorpusEntry};
pub use derivation::Derivation;
pub use error::{
    AlgebraError, ClassifyError, CohomologyError, LinalgError, ModelError, SequenceError,
};
pub use hilali::{verify_hilali, HilaliReport, Triple};
pub use linalg::QMatrix;
pub use model::{
    PureModel, StageDecomposition, SullivanModel, ValidationOptions, ValidationReport,
};
pub use text::{parse_model, print_model, TextError};
