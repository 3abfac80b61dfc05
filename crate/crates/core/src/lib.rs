//! Finite monoids, split extensions of monoids and their classification by
//! admissible quotients of `N × H` equipped with compatible actions.
//!
//! Monoids are Cayley tables over `0..order` with the identity at `0`.

pub mod action;
pub mod bounds;
pub mod constructions;
pub mod formats;
pub mod monoid;
pub mod oracle;
mod par;
pub mod quotient;
pub mod split;
pub mod union_find;
pub mod wact;

pub use action::{ActionClass, ActionError, ActionViolation, PreAction};
pub use bounds::Bounds;
pub use constructions::ConstructionError;
pub use formats::FormatError;
pub use monoid::{FiniteMonoid, MonoidError, MonoidHom};
pub use oracle::OracleError;
pub use quotient::{AdmissibleQuotient, QuotientError};
pub use split::{SplitExtError, SplitExtension};
pub use wact::{WActError, WActObject};

/// Any error raised by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    ActionViolation(#[from] ActionViolation),
    #[error(transparent)]
    Split(#[from] SplitExtError),
    #[error(transparent)]
    WAct(#[from] WActError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Format(#[from] FormatError),
}
