use std::marker::PhantomData;
use std::sync::Arc;

use super::erased::{from_val, into_val, lift, pair, sum, unit, unpair, unsum, ErasedFn, Val};
use super::{routing, spine, Effect, Op, Reified};
use crate::arrow::{Arrow, ArrowChoice, Category, Payload, PreArrow};
use crate::either::Either;

type Router = Arc<dyn Fn(Val) -> Either<(Val, Val), Val> + Send + Sync>;

impl spine::Route for Router {
    fn precompose(self, f: ErasedFn) -> Self {
        Arc::new(move |v| self(f(v)))
    }
}

type Chain<E> = spine::Chain<Router, E>;

/// Strength on an erased chain whose input is `pair(x, d)`.
fn first<E>(chain: &Chain<E>) -> Chain<E> {
    // Each stage becomes `first pre >>> distr >>> left assoc`; the next
    // one is entered through `left unassoc >>> undistr`.
    let route = |pre: Router| -> Router {
        Arc::new(move |v| {
            let (x, d) = unpair(v);
            match routing::distr((pre(x), d)) {
                Either::Left(acd) => {
                    let (a, (c, d)) = routing::assoc(acd);
                    Either::Left((a, pair(c, d)))
                }
                Either::Right((w, d)) => Either::Right(pair(w, d)),
            }
        })
    };
    let back: ErasedFn = Arc::new(|v| {
        let routed = match unsum(v) {
            Either::Left(b_cd) => {
                let (b, cd) = unpair(b_cd);
                Either::Left(routing::unassoc((b, unpair(cd))))
            }
            Either::Right(wd) => Either::Right(unpair(wd)),
        };
        let (inner, d) = routing::undistr(routed);
        pair(sum(inner.map_left(|(b, c)| pair(b, c))), d)
    });
    spine::lift(chain, route, back, |f| {
        Arc::new(move |v| {
            let (b, d) = unpair(v);
            pair(f(b), d)
        })
    })
}

/// Choice on an erased chain whose input is `sum(Either<x, d>)`.
fn left<E>(chain: &Chain<E>) -> Chain<E> {
    // Each stage becomes `left pre >>> assocsum`; the next one is entered
    // through `unassocsum`.
    let route = |pre: Router| -> Router {
        Arc::new(move |v| {
            let nested = unsum(v).map_left(|x| pre(x));
            routing::assocsum(nested).map_right(sum)
        })
    };
    let back: ErasedFn = Arc::new(|v| {
        let flat = unsum(v).map_left(unpair).map_right(unsum);
        let nested = routing::unassocsum(flat);
        sum(nested.map_left(|inner| sum(inner.map_left(|(b, c)| pair(b, c)))))
    });
    spine::lift(chain, route, back, |f| {
        Arc::new(move |v| sum(unsum(v).map_left(|b| f(b))))
    })
}

/// A reified choice arrow: each stage routes its input either to the
/// effect (with a carried value) or around it as a bypass value, so that
/// branches of a program can skip effects.
pub struct FreerChoiceArrow<E, X, Y> {
    chain: Chain<E>,
    _t: PhantomData<fn(X) -> Y>,
}

impl<E, X, Y> Clone for FreerChoiceArrow<E, X, Y> {
    fn clone(&self) -> Self {
        FreerChoiceArrow {
            chain: self.chain.clone(),
            _t: PhantomData,
        }
    }
}

impl<E: Effect, X: Payload, Y: Payload> FreerChoiceArrow<E, X, Y> {
    fn from_chain(chain: Chain<E>) -> Self {
        FreerChoiceArrow {
            chain,
            _t: PhantomData,
        }
    }

    pub fn hom(f: impl Fn(X) -> Y + Send + Sync + 'static) -> Self {
        Self::from_chain(spine::hom(lift(f)))
    }

    /// `Comp (Left . (,())) op (arr (fst ||| id))`.
    pub fn embed(op: Op<E, X, Y>) -> Self {
        Self::from_chain(spine::stage(
            Arc::new(|x| Either::Left((x, unit()))),
            op.into_effect(),
            Arc::new(|v| match unsum(v) {
                Either::Left(bc) => unpair(bc).0,
                Either::Right(w) => w,
            }),
        ))
    }

    pub fn then<Z: Payload>(self, g: FreerChoiceArrow<E, Y, Z>) -> FreerChoiceArrow<E, X, Z> {
        FreerChoiceArrow::from_chain(spine::compose(&self.chain, &g.chain))
    }

    /// Pre-composes a pure function.
    pub fn lmap<W: Payload>(
        self,
        f: impl Fn(W) -> X + Send + Sync + 'static,
    ) -> FreerChoiceArrow<E, W, Y> {
        FreerChoiceArrow::hom(f).then(self)
    }

    /// Post-composes a pure function.
    pub fn map<Z: Payload>(
        self,
        f: impl Fn(Y) -> Z + Send + Sync + 'static,
    ) -> FreerChoiceArrow<E, X, Z> {
        self.then(FreerChoiceArrow::hom(f))
    }

    pub fn first<D: Payload>(self) -> FreerChoiceArrow<E, (X, D), (Y, D)> {
        let split = spine::hom(Arc::new(|v| {
            let (x, d) = from_val::<(X, D)>(v);
            pair(into_val(x), into_val(d))
        }));
        let join = spine::hom(Arc::new(|v| {
            let (y, d) = unpair(v);
            into_val((from_val::<Y>(y), from_val::<D>(d)))
        }));
        FreerChoiceArrow::from_chain(spine::compose(
            &spine::compose(&split, &first(&self.chain)),
            &join,
        ))
    }

    pub fn left<D: Payload>(self) -> FreerChoiceArrow<E, Either<X, D>, Either<Y, D>> {
        let split = spine::hom(Arc::new(|v| {
            let e = from_val::<Either<X, D>>(v);
            sum(e.map_left(into_val).map_right(into_val))
        }));
        let join = spine::hom(Arc::new(|v| {
            into_val(unsum(v).map_left(from_val::<Y>).map_right(from_val::<D>))
        }));
        FreerChoiceArrow::from_chain(spine::compose(
            &spine::compose(&split, &left(&self.chain)),
            &join,
        ))
    }

    pub fn second<D: Payload>(self) -> FreerChoiceArrow<E, (D, X), (D, Y)> {
        FreerChoice::second(self)
    }

    pub fn parallel<X2: Payload, Y2: Payload>(
        self,
        g: FreerChoiceArrow<E, X2, Y2>,
    ) -> FreerChoiceArrow<E, (X, X2), (Y, Y2)> {
        FreerChoice::parallel(self, g)
    }

    pub fn fanout<Y2: Payload>(
        self,
        g: FreerChoiceArrow<E, X, Y2>,
    ) -> FreerChoiceArrow<E, X, (Y, Y2)>
    where
        X: Clone,
    {
        FreerChoice::fanout(self, g)
    }

    pub fn right<D: Payload>(self) -> FreerChoiceArrow<E, Either<D, X>, Either<D, Y>> {
        FreerChoice::right(self)
    }

    pub fn plus<X2: Payload, Y2: Payload>(
        self,
        g: FreerChoiceArrow<E, X2, Y2>,
    ) -> FreerChoiceArrow<E, Either<X, X2>, Either<Y, Y2>> {
        FreerChoice::plus(self, g)
    }

    pub fn fanin<X2: Payload>(
        self,
        g: FreerChoiceArrow<E, X2, Y>,
    ) -> FreerChoiceArrow<E, Either<X, X2>, Y> {
        FreerChoice::fanin(self, g)
    }

    pub fn interp<F: ArrowChoice>(
        &self,
        handler: impl Fn(&E) -> F::Arrow<Val, Val>,
    ) -> F::Arrow<X, Y> {
        let body = spine::interp::<F, _, _>(&self.chain, |pre: Router, e| {
            let fire =
                F::left::<(Val, Val), (Val, Val), Val>(F::first::<Val, Val, Val>(handler(e)));
            F::compose(
                F::compose(F::arr(move |v| pre(v)), fire),
                F::arr(|e: Either<(Val, Val), Val>| sum(e.map_left(|(b, c)| pair(b, c)))),
            )
        });
        F::compose(
            F::compose(F::arr(into_val::<X>), body),
            F::arr(from_val::<Y>),
        )
    }

    /// Forgets the input and output types, for storing a program inside an
    /// effect value. The result expects a `Val` holding an `X` and yields a
    /// `Val` holding a `Y`.
    pub fn erase(self) -> FreerChoiceArrow<E, Val, Val> {
        self.lmap(from_val::<X>).map(into_val::<Y>)
    }
}

impl<E: Effect, X: Payload> FreerChoiceArrow<E, X, X> {
    pub fn identity() -> Self {
        Self::hom(|x| x)
    }
}

impl<E, X, Y> Reified for FreerChoiceArrow<E, X, Y> {
    type Effect = E;

    fn effects(&self) -> Vec<&E> {
        spine::effects(&self.chain)
    }

    fn validate(&self) -> Result<usize, String> {
        Ok(spine::length(&self.chain))
    }
}

/// The freer choice arrow family over signature `E`.
pub struct FreerChoice<E>(PhantomData<fn() -> E>);

impl<E: Effect> Category for FreerChoice<E> {
    type Arrow<X: Payload, Y: Payload> = FreerChoiceArrow<E, X, Y>;

    fn identity<X: Payload>() -> FreerChoiceArrow<E, X, X> {
        FreerChoiceArrow::identity()
    }

    fn compose<A: Payload, B: Payload, C: Payload>(
        f: FreerChoiceArrow<E, A, B>,
        g: FreerChoiceArrow<E, B, C>,
    ) -> FreerChoiceArrow<E, A, C> {
        f.then(g)
    }
}

impl<E: Effect> PreArrow for FreerChoice<E> {
    fn arr<X: Payload, Y: Payload>(
        f: impl Fn(X) -> Y + Send + Sync + 'static,
    ) -> FreerChoiceArrow<E, X, Y> {
        FreerChoiceArrow::hom(f)
    }
}

impl<E: Effect> Arrow for FreerChoice<E> {
    fn first<B: Payload, C: Payload, D: Payload>(
        f: FreerChoiceArrow<E, B, C>,
    ) -> FreerChoiceArrow<E, (B, D), (C, D)> {
        f.first()
    }
}

impl<E: Effect> ArrowChoice for FreerChoice<E> {
    fn left<B: Payload, C: Payload, D: Payload>(
        f: FreerChoiceArrow<E, B, C>,
    ) -> FreerChoiceArrow<E, Either<B, D>, Either<C, D>> {
        f.left()
    }
}
