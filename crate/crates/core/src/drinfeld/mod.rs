//! Twisted polynomials and Drinfeld modules.

pub mod module;
pub mod spec;
pub mod twisted;

pub use module::{DrinfeldModule, FiniteModule, GenericModule};
pub use spec::ModuleSpec;
pub use twisted::{tw_add, tw_eval, tw_mul, TwistedPoly};
