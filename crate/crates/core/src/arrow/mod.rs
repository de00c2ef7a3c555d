//! The arrow hierarchy: category, pre-arrow, arrow, choice arrow.
//!
//! Each trait is implemented by a zero-sized *family* type whose generic
//! associated type [`Category::Arrow`] names the concrete computation from
//! `X` to `Y`. Three backends ship here ([`Func`], [`State`], [`Host`]);
//! the reified structures in [`crate::freer`] are further families, so a
//! freer program can be interpreted into another freer program.
//!
//! The product and sum combinators (`second`, `parallel`, `fanout`,
//! `right`, `plus`, `fanin`) are provided methods written only in terms of
//! `first`, `left`, `arr` and composition.

mod func;
mod host;
mod state;

pub use func::{Func, FuncArrow};
pub use host::{Host, HostArrow, HostEnv, StoreSnapshot};
pub use state::{run_state, State, StateArrow};

use crate::either::Either;
use crate::error::Error;

/// Bound shared by every value that flows through an arrow.
pub trait Payload: Send + 'static {}

impl<T: Send + 'static> Payload for T {}

/// Identity and sequential composition.
pub trait Category: Sized + 'static {
    type Arrow<X: Payload, Y: Payload>: Clone + Send + Sync + 'static;

    fn identity<X: Payload>() -> Self::Arrow<X, X>;

    /// `f >>> g`: run `f`, then feed its output to `g`.
    fn compose<A: Payload, B: Payload, C: Payload>(
        f: Self::Arrow<A, B>,
        g: Self::Arrow<B, C>,
    ) -> Self::Arrow<A, C>;
}

/// A category that can lift pure functions.
pub trait PreArrow: Category {
    fn arr<X: Payload, Y: Payload>(f: impl Fn(X) -> Y + Send + Sync + 'static)
        -> Self::Arrow<X, Y>;
}

/// A pre-arrow with strength over products.
pub trait Arrow: PreArrow {
    fn first<B: Payload, C: Payload, D: Payload>(
        f: Self::Arrow<B, C>,
    ) -> Self::Arrow<(B, D), (C, D)>;

    fn second<B: Payload, C: Payload, D: Payload>(
        f: Self::Arrow<B, C>,
    ) -> Self::Arrow<(D, B), (D, C)> {
        Self::parallel(Self::identity(), f)
    }

    /// `f *** g`: `first f`, swap, `first g`, swap.
    fn parallel<B: Payload, C: Payload, D: Payload, E: Payload>(
        f: Self::Arrow<B, C>,
        g: Self::Arrow<D, E>,
    ) -> Self::Arrow<(B, D), (C, E)> {
        let f = Self::first::<B, C, D>(f);
        let g = Self::first::<D, E, C>(g);
        Self::compose(
            Self::compose(Self::compose(f, Self::arr(swap::<C, D>)), g),
            Self::arr(swap::<E, C>),
        )
    }

    /// `f &&& g`: duplicate the input, then `f *** g`. The left arrow's
    /// effects happen before the right arrow's.
    fn fanout<B: Payload + Clone, C: Payload, C2: Payload>(
        f: Self::Arrow<B, C>,
        g: Self::Arrow<B, C2>,
    ) -> Self::Arrow<B, (C, C2)> {
        Self::compose(Self::arr(|b: B| (b.clone(), b)), Self::parallel(f, g))
    }
}

/// An arrow that can branch on a sum.
pub trait ArrowChoice: Arrow {
    /// Runs `f` on `Left` inputs; `Right` inputs pass through without
    /// performing any of `f`'s effects.
    fn left<B: Payload, C: Payload, D: Payload>(
        f: Self::Arrow<B, C>,
    ) -> Self::Arrow<Either<B, D>, Either<C, D>>;

    fn right<B: Payload, C: Payload, D: Payload>(
        f: Self::Arrow<B, C>,
    ) -> Self::Arrow<Either<D, B>, Either<D, C>> {
        Self::plus(Self::identity(), f)
    }

    /// `f +++ g`: `left f`, mirror, `left g`, mirror.
    fn plus<B: Payload, C: Payload, B2: Payload, C2: Payload>(
        f: Self::Arrow<B, C>,
        g: Self::Arrow<B2, C2>,
    ) -> Self::Arrow<Either<B, B2>, Either<C, C2>> {
        let f = Self::left::<B, C, B2>(f);
        let g = Self::left::<B2, C2, C>(g);
        Self::compose(
            Self::compose(Self::compose(f, Self::arr(Either::<C, B2>::mirror)), g),
            Self::arr(Either::<C2, C>::mirror),
        )
    }

    /// `f ||| g`: `f +++ g`, then forget the tag.
    fn fanin<B: Payload, B2: Payload, D: Payload>(
        f: Self::Arrow<B, D>,
        g: Self::Arrow<B2, D>,
    ) -> Self::Arrow<Either<B, B2>, D> {
        Self::compose(Self::plus(f, g), Self::arr(Either::<D, D>::untag))
    }
}

/// Backends that can run an Elgot loop with constant stack.
///
/// `iterate(body, cap)` feeds `Right` outputs back into `body` and stops at
/// the first `Left`. When `cap` is set and `body` has run `cap` times
/// without exiting, the result is [`Error::IterationCap`].
pub trait ArrowIterate: ArrowChoice {
    fn iterate<X: Payload, Z: Payload>(
        body: Self::Arrow<X, Either<Z, X>>,
        cap: Option<usize>,
    ) -> Self::Arrow<X, Result<Z, Error>>;
}

pub(crate) fn swap<A, B>((a, b): (A, B)) -> (B, A) {
    (b, a)
}
