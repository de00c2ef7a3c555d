//! Concrete effect signatures, their handlers, and the example programs.

pub mod fixtures;
pub mod state;
pub mod sum;
pub mod web;

pub use state::{StateCell, StateEffect};
pub use sum::{combine_handlers, Injection, SumEffect};
pub use web::{PostRecord, WebBackendScript, WebServiceEffect};
