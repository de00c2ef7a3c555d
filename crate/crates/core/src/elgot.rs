//! Reified unbounded loops.
//!
//! An [`ElgotLoop`] pairs a loop body, whose `Right` outputs re-enter the
//! body and whose `Left` output exits, with a continuation run on the exit
//! value. Both parts are ordinary freer choice arrows, so each can still be
//! analyzed on its own; the loop as a whole cannot.

use crate::arrow::{ArrowIterate, Payload};
use crate::effects::state::{get, put, StateEffect};
use crate::either::Either;
use crate::error::Error;
use crate::freer::{from_val, into_val, Effect, FreerChoiceArrow, Val};

pub struct ElgotLoop<E, X, Y> {
    body: FreerChoiceArrow<E, X, Either<Val, X>>,
    continuation: FreerChoiceArrow<E, Val, Y>,
}

impl<E, X, Y> Clone for ElgotLoop<E, X, Y> {
    fn clone(&self) -> Self {
        ElgotLoop {
            body: self.body.clone(),
            continuation: self.continuation.clone(),
        }
    }
}

impl<E: Effect, X: Payload, Y: Payload> ElgotLoop<E, X, Y> {
    pub fn new<Z: Payload>(
        body: FreerChoiceArrow<E, X, Either<Z, X>>,
        continuation: FreerChoiceArrow<E, Z, Y>,
    ) -> Self {
        ElgotLoop {
            body: body.map(|e: Either<Z, X>| e.map_left(into_val)),
            continuation: continuation.lmap(from_val::<Z>),
        }
    }

    /// The body, with the exit value erased.
    pub fn body(&self) -> &FreerChoiceArrow<E, X, Either<Val, X>> {
        &self.body
    }

    pub fn continuation(&self) -> &FreerChoiceArrow<E, Val, Y> {
        &self.continuation
    }
}

/// Runs the body until it exits, then the continuation. Evaluation uses
/// constant stack. With `cap = Some(n)`, a loop still running after `n`
/// body passes ends in [`Error::IterationCap`] without running the
/// continuation.
pub fn interp_elgot<F, E, X, Y>(
    handler: impl Fn(&E) -> F::Arrow<Val, Val>,
    l: &ElgotLoop<E, X, Y>,
    cap: Option<usize>,
) -> F::Arrow<X, Result<Y, Error>>
where
    F: ArrowIterate,
    E: Effect,
    X: Payload,
    Y: Payload,
{
    let body = l.body.interp::<F>(&handler);
    let k = l.continuation.interp::<F>(&handler);
    let looped = F::iterate::<X, Val>(body, cap);
    let to_sum = F::arr(|r: Result<Val, Error>| match r {
        Ok(z) => Either::Left(z),
        Err(e) => Either::Right(e),
    });
    let back = F::arr(|e: Either<Y, Error>| match e {
        Either::Left(y) => Ok(y),
        Either::Right(err) => Err(err),
    });
    F::compose(
        F::compose(looped, to_sum),
        F::compose(F::left::<Val, Y, Error>(k), back),
    )
}

/// Decrements the state to zero, one `PutS` per step, and returns 0.
pub fn countdown_fixture() -> ElgotLoop<StateEffect<i64>, i64, i64> {
    let body = get::<i64, i64>()
        .map(|n: i64| {
            if n == 0 {
                Either::Left(n)
            } else {
                Either::Right(n)
            }
        })
        .then(put::<i64>().lmap(|x: i64| x - 1).right::<i64>());
    ElgotLoop::new(body, FreerChoiceArrow::identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrow::{Func, PreArrow, State};
    use crate::effects::state::state_handler;
    use crate::freer::{traced, EffectLog, Reified};

    #[test]
    fn immediate_exit_is_identity() {
        let l: ElgotLoop<(), i64, i64> = ElgotLoop::new(
            FreerChoiceArrow::hom(Either::<i64, i64>::Left),
            FreerChoiceArrow::identity(),
        );
        let run = interp_elgot::<Func, _, _, _>(|_: &()| Func::arr(|v: Val| v), &l, Some(1));
        assert_eq!(run.apply(9), Ok(9));
    }

    #[test]
    fn countdown_traces() {
        let l = countdown_fixture();
        assert_eq!(l.body().count(), 2);
        assert_eq!(l.continuation().count(), 0);
        for n in [0i64, 1, 3] {
            let log = EffectLog::new();
            let h = traced::<State<i64>, _, _>(state_handler::<i64>, log.clone());
            let (out, s) = interp_elgot::<State<i64>, _, _, _>(h, &l, None).run(0, n);
            assert_eq!((out, s), (Ok(0), 0));
            assert_eq!(log.count_of("GetS"), n as usize + 1);
            assert_eq!(log.count_of("PutS"), n as usize);
        }
    }

    #[test]
    fn negative_start_hits_cap() {
        let run = interp_elgot::<State<i64>, _, _, _>(
            state_handler::<i64>,
            &countdown_fixture(),
            Some(10),
        );
        let (out, s) = run.run(0, -1);
        assert_eq!(out, Err(Error::IterationCap(10)));
        assert_eq!(s, -11);
    }

    #[test]
    fn long_loop_uses_constant_stack() {
        let run =
            interp_elgot::<State<i64>, _, _, _>(state_handler::<i64>, &countdown_fixture(), None);
        assert_eq!(run.run(0, 200_000), (Ok(0), 0));
    }
}
