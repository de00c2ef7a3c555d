//! Reified ("freer") arrows over user-defined effect signatures, and a
//! choreographic programming layer built on them.
//!
//! A freer arrow is a program represented as data: a chain of effect
//! stages joined by pure routing functions. Unlike a freer monad, no stage
//! depends on a runtime value to decide which stage comes next, so a
//! program can be inspected without running it. The crate provides:
//!
//! - [`arrow`]: the category / pre-arrow / arrow / choice-arrow traits and
//!   three backends (pure functions, state, host effects).
//! - [`freer`]: [`FreerPreArrow`](freer::FreerPreArrow),
//!   [`FreerArrow`](freer::FreerArrow) and
//!   [`FreerChoiceArrow`](freer::FreerChoiceArrow), their interpreters and
//!   monoid-based static analysis.
//! - [`effects`]: state and web-service signatures, sums of signatures,
//!   and the example programs.
//! - [`elgot`]: reified unbounded loops.
//! - [`choreo`]: global choreographies with located values.
//! - [`network`]: endpoint projection, endpoint analysis, and execution
//!   over in-memory or TCP transports.
//!
//! ```
//! use freer_arrows::prelude::*;
//! use freer_arrows::effects::state::{get, put, state_handler};
//!
//! // read the state, add one, write it back
//! let p = get::<(), i64>().map(|n: i64| n + 1).then(put());
//! assert_eq!(p.count(), 2);
//!
//! let run = p.interp::<State<i64>>(state_handler::<i64>);
//! assert_eq!(run.run((), 41), (42, 42));
//! ```

pub mod arrow;
pub mod choreo;
pub mod effects;
pub mod either;
pub mod elgot;
pub mod error;
pub mod freer;
pub mod location;
pub mod network;

pub use either::Either;
pub use error::{Error, Result};
pub use location::{loc, Located, Location};

/// Common imports.
pub mod prelude {
    pub use crate::arrow::{
        Arrow, ArrowChoice, ArrowIterate, Category, Func, FuncArrow, Host, HostArrow, HostEnv,
        PreArrow, State, StateArrow,
    };
    pub use crate::either::Either;
    pub use crate::freer::{
        FreerArrow, FreerChoiceArrow, FreerPreArrow, MonoidSpec, Op, Reified, Val,
    };
    pub use crate::location::{loc, Located, Location};
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/programs.md")]
    mod programs {}
    #[doc = include_str!("../../../book/src/interpreters.md")]
    mod interpreters {}
    #[doc = include_str!("../../../book/src/effects.md")]
    mod effects {}
    #[doc = include_str!("../../../book/src/loops.md")]
    mod loops {}
    #[doc = include_str!("../../../book/src/choreographies.md")]
    mod choreographies {}
    #[doc = include_str!("../../../book/src/running.md")]
    mod running {}
}
