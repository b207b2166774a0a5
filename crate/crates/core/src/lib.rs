//! Continuous-domain LULU smoothers on exact piecewise-linear functions,
//! the discrete sequence operators, moduli of nonmonotonicity and a grid
//! oracle for cross-checks.

pub mod discrete;
pub mod envelopes;
pub mod error;
pub mod funcrep;
pub mod lulu;
pub mod monotonicity;
pub mod oracle;
pub mod properties;
pub mod random;

pub use error::{LuluError, Result};
pub use funcrep::{PLFunction, Window};
