use std::marker::PhantomData;
use std::sync::Arc;

use super::erased::{from_val, into_val, lift, pair, unit, unpair, ErasedFn, Val};
use super::{routing, spine, Effect, Op, Reified};
use crate::arrow::{Arrow, Category, Payload, PreArrow};

type Router = Arc<dyn Fn(Val) -> (Val, Val) + Send + Sync>;

impl spine::Route for Router {
    fn precompose(self, f: ErasedFn) -> Self {
        Arc::new(move |v| self(f(v)))
    }
}

type Chain<E> = spine::Chain<Router, E>;

/// Strength on an erased chain whose input is `pair(x, d)`.
fn first<E>(chain: &Chain<E>) -> Chain<E> {
    // Each stage becomes `first pre >>> assoc`; the next one is entered
    // through `unassoc`.
    let route = |pre: Router| -> Router {
        Arc::new(move |v| {
            let (x, d) = unpair(v);
            let (a, (c, d)) = routing::assoc((pre(x), d));
            (a, pair(c, d))
        })
    };
    let unassoc: ErasedFn = Arc::new(|v| {
        let (b, cd) = unpair(v);
        let ((b, c), d) = routing::unassoc((b, unpair(cd)));
        pair(pair(b, c), d)
    });
    spine::lift(chain, route, unassoc, |f| {
        Arc::new(move |v| {
            let (b, d) = unpair(v);
            pair(f(b), d)
        })
    })
}

/// A reified arrow: each stage routes its input to the effect's input plus
/// a carried value that skips the effect and rejoins its output.
pub struct FreerArrow<E, X, Y> {
    chain: Chain<E>,
    _t: PhantomData<fn(X) -> Y>,
}

impl<E, X, Y> Clone for FreerArrow<E, X, Y> {
    fn clone(&self) -> Self {
        FreerArrow {
            chain: self.chain.clone(),
            _t: PhantomData,
        }
    }
}

impl<E: Effect, X: Payload, Y: Payload> FreerArrow<E, X, Y> {
    fn from_chain(chain: Chain<E>) -> Self {
        FreerArrow {
            chain,
            _t: PhantomData,
        }
    }

    pub fn hom(f: impl Fn(X) -> Y + Send + Sync + 'static) -> Self {
        Self::from_chain(spine::hom(lift(f)))
    }

    /// `Comp (,()) op (arr fst)`.
    pub fn embed(op: Op<E, X, Y>) -> Self {
        Self::from_chain(spine::stage(
            Arc::new(|x| (x, unit())),
            op.into_effect(),
            Arc::new(|v| unpair(v).0),
        ))
    }

    pub fn then<Z: Payload>(self, g: FreerArrow<E, Y, Z>) -> FreerArrow<E, X, Z> {
        FreerArrow::from_chain(spine::compose(&self.chain, &g.chain))
    }

    /// Pre-composes a pure function.
    pub fn lmap<W: Payload>(
        self,
        f: impl Fn(W) -> X + Send + Sync + 'static,
    ) -> FreerArrow<E, W, Y> {
        FreerArrow::hom(f).then(self)
    }

    /// Post-composes a pure function.
    pub fn map<Z: Payload>(
        self,
        f: impl Fn(Y) -> Z + Send + Sync + 'static,
    ) -> FreerArrow<E, X, Z> {
        self.then(FreerArrow::hom(f))
    }

    pub fn first<D: Payload>(self) -> FreerArrow<E, (X, D), (Y, D)> {
        let split = spine::hom(Arc::new(|v| {
            let (x, d) = from_val::<(X, D)>(v);
            pair(into_val(x), into_val(d))
        }));
        let join = spine::hom(Arc::new(|v| {
            let (y, d) = unpair(v);
            into_val((from_val::<Y>(y), from_val::<D>(d)))
        }));
        FreerArrow::from_chain(spine::compose(
            &spine::compose(&split, &first(&self.chain)),
            &join,
        ))
    }

    pub fn second<D: Payload>(self) -> FreerArrow<E, (D, X), (D, Y)> {
        Freer::second(self)
    }

    pub fn parallel<X2: Payload, Y2: Payload>(
        self,
        g: FreerArrow<E, X2, Y2>,
    ) -> FreerArrow<E, (X, X2), (Y, Y2)> {
        Freer::parallel(self, g)
    }

    pub fn fanout<Y2: Payload>(self, g: FreerArrow<E, X, Y2>) -> FreerArrow<E, X, (Y, Y2)>
    where
        X: Clone,
    {
        Freer::fanout(self, g)
    }

    pub fn interp<F: Arrow>(&self, handler: impl Fn(&E) -> F::Arrow<Val, Val>) -> F::Arrow<X, Y> {
        let body = spine::interp::<F, _, _>(&self.chain, |pre: Router, e| {
            F::compose(
                F::compose(
                    F::arr(move |v| pre(v)),
                    F::first::<Val, Val, Val>(handler(e)),
                ),
                F::arr(|(b, c): (Val, Val)| pair(b, c)),
            )
        });
        F::compose(
            F::compose(F::arr(into_val::<X>), body),
            F::arr(from_val::<Y>),
        )
    }
}

impl<E: Effect, X: Payload> FreerArrow<E, X, X> {
    pub fn identity() -> Self {
        Self::hom(|x| x)
    }
}

impl<E, X, Y> Reified for FreerArrow<E, X, Y> {
    type Effect = E;

    fn effects(&self) -> Vec<&E> {
        spine::effects(&self.chain)
    }

    fn validate(&self) -> Result<usize, String> {
        Ok(spine::length(&self.chain))
    }
}

/// The freer arrow family over signature `E`.
pub struct Freer<E>(PhantomData<fn() -> E>);

impl<E: Effect> Category for Freer<E> {
    type Arrow<X: Payload, Y: Payload> = FreerArrow<E, X, Y>;

    fn identity<X: Payload>() -> FreerArrow<E, X, X> {
        FreerArrow::identity()
    }

    fn compose<A: Payload, B: Payload, C: Payload>(
        f: FreerArrow<E, A, B>,
        g: FreerArrow<E, B, C>,
    ) -> FreerArrow<E, A, C> {
        f.then(g)
    }
}

impl<E: Effect> PreArrow for Freer<E> {
    fn arr<X: Payload, Y: Payload>(
        f: impl Fn(X) -> Y + Send + Sync + 'static,
    ) -> FreerArrow<E, X, Y> {
        FreerArrow::hom(f)
    }
}

impl<E: Effect> Arrow for Freer<E> {
    fn first<B: Payload, C: Payload, D: Payload>(
        f: FreerArrow<E, B, C>,
    ) -> FreerArrow<E, (B, D), (C, D)> {
        f.first()
    }
}
