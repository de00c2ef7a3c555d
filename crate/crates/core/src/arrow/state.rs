use std::marker::PhantomData;
use std::sync::Arc;

use super::{Arrow, ArrowChoice, ArrowIterate, Category, Payload, PreArrow};
use crate::either::Either;
use crate::error::Error;

/// The state arrow family over state type `S`.
pub struct State<S>(PhantomData<fn() -> S>);

/// A computation `(X, S) -> (Y, S)`.
///
/// `arr f` applies `f` to the value and leaves the state alone; `first`
/// threads the state through the wrapped computation while carrying the
/// second component untouched.
pub struct StateArrow<S, X, Y>(Arc<dyn Fn(X, S) -> (Y, S) + Send + Sync>);

impl<S, X, Y> Clone for StateArrow<S, X, Y> {
    fn clone(&self) -> Self {
        StateArrow(Arc::clone(&self.0))
    }
}

impl<S: Payload, X: Payload, Y: Payload> StateArrow<S, X, Y> {
    pub fn new(f: impl Fn(X, S) -> (Y, S) + Send + Sync + 'static) -> Self {
        StateArrow(Arc::new(f))
    }

    /// Evaluates at `(input, s0)`, returning the output and final state.
    pub fn run(&self, input: X, s0: S) -> (Y, S) {
        (self.0)(input, s0)
    }

    pub fn then<Z: Payload>(self, g: StateArrow<S, Y, Z>) -> StateArrow<S, X, Z> {
        State::compose(self, g)
    }
}

/// Free-standing form of [`StateArrow::run`].
pub fn run_state<S: Payload, X: Payload, Y: Payload>(
    p: &StateArrow<S, X, Y>,
    input: X,
    s0: S,
) -> (Y, S) {
    p.run(input, s0)
}

impl<S: Payload> Category for State<S> {
    type Arrow<X: Payload, Y: Payload> = StateArrow<S, X, Y>;

    fn identity<X: Payload>() -> StateArrow<S, X, X> {
        StateArrow::new(|x, s| (x, s))
    }

    fn compose<A: Payload, B: Payload, C: Payload>(
        f: StateArrow<S, A, B>,
        g: StateArrow<S, B, C>,
    ) -> StateArrow<S, A, C> {
        StateArrow::new(move |a, s| {
            let (b, s) = f.run(a, s);
            g.run(b, s)
        })
    }
}

impl<S: Payload> PreArrow for State<S> {
    fn arr<X: Payload, Y: Payload>(
        f: impl Fn(X) -> Y + Send + Sync + 'static,
    ) -> StateArrow<S, X, Y> {
        StateArrow::new(move |x, s| (f(x), s))
    }
}

impl<S: Payload> Arrow for State<S> {
    fn first<B: Payload, C: Payload, D: Payload>(
        f: StateArrow<S, B, C>,
    ) -> StateArrow<S, (B, D), (C, D)> {
        StateArrow::new(move |(b, d), s| {
            let (c, s) = f.run(b, s);
            ((c, d), s)
        })
    }
}

impl<S: Payload> ArrowChoice for State<S> {
    fn left<B: Payload, C: Payload, D: Payload>(
        f: StateArrow<S, B, C>,
    ) -> StateArrow<S, Either<B, D>, Either<C, D>> {
        StateArrow::new(move |e, s| match e {
            Either::Left(b) => {
                let (c, s) = f.run(b, s);
                (Either::Left(c), s)
            }
            Either::Right(d) => (Either::Right(d), s),
        })
    }
}

impl<S: Payload> ArrowIterate for State<S> {
    fn iterate<X: Payload, Z: Payload>(
        body: StateArrow<S, X, Either<Z, X>>,
        cap: Option<usize>,
    ) -> StateArrow<S, X, Result<Z, Error>> {
        StateArrow::new(move |mut x, mut s| {
            let mut passes = 0usize;
            loop {
                if cap.is_some_and(|c| passes >= c) {
                    return (Err(Error::IterationCap(passes)), s);
                }
                passes += 1;
                let (out, s2) = body.run(x, s);
                s = s2;
                match out {
                    Either::Left(z) => return (Ok(z), s),
                    Either::Right(next) => x = next,
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type St = State<i64>;

    fn get() -> StateArrow<i64, (), i64> {
        StateArrow::new(|_, s| (s, s))
    }

    fn put() -> StateArrow<i64, i64, i64> {
        StateArrow::new(|x, _| (x, x))
    }

    #[test]
    fn get_then_put_successor() {
        let p = get().then(St::arr(|n: i64| n + 1)).then(put());
        assert_eq!(p.run((), 41), (42, 42));
    }

    #[test]
    fn arr_preserves_state() {
        let p: StateArrow<&str, i64, i64> = State::arr(|x: i64| x + 1);
        assert_eq!(p.run(3, "s"), (4, "s"));
        assert_eq!(run_state(&State::<i64>::arr(|x: i64| x), 1, 99), (1, 99));
        assert_eq!(run_state(&get(), (), 7), (7, 7));
        assert_eq!(run_state(&put(), 5, 0), (5, 5));
    }

    #[test]
    fn first_threads_state() {
        let p = St::first::<_, _, &str>(put());
        assert_eq!(p.run((10, "tag"), 0), ((10, "tag"), 10));
    }

    #[test]
    fn left_bypass_leaves_state_untouched() {
        let p = St::left::<_, _, i64>(put());
        assert_eq!(p.run(Either::Right(9), 0), (Either::Right(9), 0));
        assert_eq!(p.run(Either::Left(9), 0), (Either::Left(9), 9));
    }
}
