//! Herbrand provability at desk scale: canonical Skolemization of first-order
//! theories, ground Skolem instances over finite term sets, evaluations as
//! partial propositional models with equality congruence, quotient term
//! models, and a size-measured coding of syntax with iterated-exponential
//! bound checks.

pub mod budget;
pub mod coding;
pub mod corpus;
pub mod engine;
pub mod error;
pub mod eval;
pub mod instance;
pub mod normalize;
pub mod sat;
pub mod skolem;
pub mod syntax;

pub use budget::Budget;
pub use error::{Error, Result};
