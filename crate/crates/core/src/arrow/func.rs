use std::sync::Arc;

use super::{Arrow, ArrowChoice, ArrowIterate, Category, Payload, PreArrow};
use crate::either::Either;
use crate::error::Error;

/// The function arrow family.
#[derive(Debug, Clone, Copy, Default)]
pub struct Func;

/// A pure function `X -> Y`.
pub struct FuncArrow<X, Y>(Arc<dyn Fn(X) -> Y + Send + Sync>);

impl<X, Y> Clone for FuncArrow<X, Y> {
    fn clone(&self) -> Self {
        FuncArrow(Arc::clone(&self.0))
    }
}

impl<X: Payload, Y: Payload> FuncArrow<X, Y> {
    pub fn new(f: impl Fn(X) -> Y + Send + Sync + 'static) -> Self {
        FuncArrow(Arc::new(f))
    }

    pub fn apply(&self, x: X) -> Y {
        (self.0)(x)
    }

    pub fn then<Z: Payload>(self, g: FuncArrow<Y, Z>) -> FuncArrow<X, Z> {
        Func::compose(self, g)
    }
}

impl Category for Func {
    type Arrow<X: Payload, Y: Payload> = FuncArrow<X, Y>;

    fn identity<X: Payload>() -> FuncArrow<X, X> {
        FuncArrow::new(|x| x)
    }

    fn compose<A: Payload, B: Payload, C: Payload>(
        f: FuncArrow<A, B>,
        g: FuncArrow<B, C>,
    ) -> FuncArrow<A, C> {
        FuncArrow::new(move |a| g.apply(f.apply(a)))
    }
}

impl PreArrow for Func {
    fn arr<X: Payload, Y: Payload>(f: impl Fn(X) -> Y + Send + Sync + 'static) -> FuncArrow<X, Y> {
        FuncArrow::new(f)
    }
}

impl Arrow for Func {
    fn first<B: Payload, C: Payload, D: Payload>(f: FuncArrow<B, C>) -> FuncArrow<(B, D), (C, D)> {
        FuncArrow::new(move |(b, d)| (f.apply(b), d))
    }
}

impl ArrowChoice for Func {
    fn left<B: Payload, C: Payload, D: Payload>(
        f: FuncArrow<B, C>,
    ) -> FuncArrow<Either<B, D>, Either<C, D>> {
        FuncArrow::new(move |e: Either<B, D>| e.map_left(|b| f.apply(b)))
    }
}

impl ArrowIterate for Func {
    fn iterate<X: Payload, Z: Payload>(
        body: FuncArrow<X, Either<Z, X>>,
        cap: Option<usize>,
    ) -> FuncArrow<X, Result<Z, Error>> {
        FuncArrow::new(move |mut x| {
            let mut passes = 0usize;
            loop {
                if cap.is_some_and(|c| passes >= c) {
                    return Err(Error::IterationCap(passes));
                }
                passes += 1;
                match body.apply(x) {
                    Either::Left(z) => return Ok(z),
                    Either::Right(next) => x = next,
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_composition() {
        assert_eq!(Func::identity::<i64>().apply(7), 7);
        assert_eq!(Func::identity::<(&str, i32)>().apply(("a", 3)), ("a", 3));
        let f = Func::arr(|x: i64| x + 1).then(Func::arr(|x: i64| x * 2));
        assert_eq!(f.apply(3), 8);
    }

    #[test]
    fn first_and_left() {
        let inc = Func::arr(|x: i64| x + 1);
        assert_eq!(
            Func::first::<_, _, &str>(inc.clone()).apply((3, "k")),
            (4, "k")
        );
        let l = Func::left::<_, _, &str>(inc);
        assert_eq!(l.apply(Either::Left(3)), Either::Left(4));
        assert_eq!(l.apply(Either::Right("skip")), Either::Right("skip"));
    }

    #[test]
    fn iterate_runs_to_exit_with_constant_stack() {
        let body = Func::arr(|n: u64| {
            if n == 0 {
                Either::Left(n)
            } else {
                Either::Right(n - 1)
            }
        });
        let looped = Func::iterate(body.clone(), None);
        assert_eq!(looped.apply(1_000_000), Ok(0));
        let capped = Func::iterate(body, Some(3));
        assert_eq!(capped.apply(2), Ok(0));
        assert_eq!(capped.apply(3), Err(Error::IterationCap(3)));
    }
}
