//! Geometrically continuous spline spaces over G^r-domains, in exact
//! arithmetic: transition maps, the bounded-degree spline chain complex,
//! dimensions, homology and explicit bases.

pub mod chain;
pub mod complex;
pub mod error;
pub mod formulas;
pub mod groebner;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod spline;

pub use chain::{build_complex, TruncatedChainComplex};
pub use complex::{CellComplex, GluingData, GrDomain, TransitionMap};
pub use error::{Error, Result};
pub use groebner::{buchberger, ideal_membership, normal_form, GroebnerBasis};
pub use linalg::RationalMatrix;
pub use poly::{Grading, GradingKind, Monomial, MonomialOrder, Polynomial, Rational, VariableSpace};
pub use spline::{basis_algorithm1, dimension, Spline, SplineBasis};
