use std::marker::PhantomData;
use std::sync::Arc;

use super::erased::{from_val, into_val, lift, ErasedFn, Val};
use super::{spine, Effect, Op, Reified};
use crate::arrow::{Category, Payload, PreArrow};

type Chain<E> = spine::Chain<ErasedFn, E>;

/// A reified pre-arrow: a chain of `pre-function, effect` stages ending in
/// a pure function. Supports composition and pure lifting only.
pub struct FreerPreArrow<E, X, Y> {
    chain: Chain<E>,
    _t: PhantomData<fn(X) -> Y>,
}

impl<E, X, Y> Clone for FreerPreArrow<E, X, Y> {
    fn clone(&self) -> Self {
        FreerPreArrow {
            chain: self.chain.clone(),
            _t: PhantomData,
        }
    }
}

impl<E: Effect, X: Payload, Y: Payload> FreerPreArrow<E, X, Y> {
    fn from_chain(chain: Chain<E>) -> Self {
        FreerPreArrow {
            chain,
            _t: PhantomData,
        }
    }

    pub fn hom(f: impl Fn(X) -> Y + Send + Sync + 'static) -> Self {
        Self::from_chain(spine::hom(lift(f)))
    }

    /// A single stage whose meaning under a handler `h` is exactly `h(op)`.
    pub fn embed(op: Op<E, X, Y>) -> Self {
        Self::from_chain(spine::stage(
            Arc::new(|v| v),
            op.into_effect(),
            Arc::new(|v| v),
        ))
    }

    pub fn then<Z: Payload>(self, g: FreerPreArrow<E, Y, Z>) -> FreerPreArrow<E, X, Z> {
        FreerPreArrow::from_chain(spine::compose(&self.chain, &g.chain))
    }

    /// Translates the program into backend `F`, one handler call per stage.
    pub fn interp<F: PreArrow>(
        &self,
        handler: impl Fn(&E) -> F::Arrow<Val, Val>,
    ) -> F::Arrow<X, Y> {
        let body = spine::interp::<F, _, _>(&self.chain, |pre: ErasedFn, e| {
            F::compose(F::arr(move |v| pre(v)), handler(e))
        });
        F::compose(
            F::compose(F::arr(into_val::<X>), body),
            F::arr(from_val::<Y>),
        )
    }
}

impl<E: Effect, X: Payload> FreerPreArrow<E, X, X> {
    pub fn identity() -> Self {
        Self::hom(|x| x)
    }
}

impl<E, X, Y> Reified for FreerPreArrow<E, X, Y> {
    type Effect = E;

    fn effects(&self) -> Vec<&E> {
        spine::effects(&self.chain)
    }

    fn validate(&self) -> Result<usize, String> {
        Ok(spine::length(&self.chain))
    }
}

/// The freer pre-arrow family over signature `E`.
pub struct FreerPre<E>(PhantomData<fn() -> E>);

impl<E: Effect> Category for FreerPre<E> {
    type Arrow<X: Payload, Y: Payload> = FreerPreArrow<E, X, Y>;

    fn identity<X: Payload>() -> FreerPreArrow<E, X, X> {
        FreerPreArrow::identity()
    }

    fn compose<A: Payload, B: Payload, C: Payload>(
        f: FreerPreArrow<E, A, B>,
        g: FreerPreArrow<E, B, C>,
    ) -> FreerPreArrow<E, A, C> {
        f.then(g)
    }
}

impl<E: Effect> PreArrow for FreerPre<E> {
    fn arr<X: Payload, Y: Payload>(
        f: impl Fn(X) -> Y + Send + Sync + 'static,
    ) -> FreerPreArrow<E, X, Y> {
        FreerPreArrow::hom(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrow::{Func, FuncArrow};
    use crate::freer::erase;

    #[derive(Debug)]
    enum Arith {
        Add(i64),
        Mul(i64),
    }

    fn add(k: i64) -> FreerPreArrow<Arith, i64, i64> {
        FreerPreArrow::embed(Op::declare(Arith::Add(k)))
    }

    fn mul(k: i64) -> FreerPreArrow<Arith, i64, i64> {
        FreerPreArrow::embed(Op::declare(Arith::Mul(k)))
    }

    fn pure(e: &Arith) -> FuncArrow<Val, Val> {
        match *e {
            Arith::Add(k) => erase::<Func, i64, i64>(FuncArrow::new(move |x| x + k)),
            Arith::Mul(k) => erase::<Func, i64, i64>(FuncArrow::new(move |x| x * k)),
        }
    }

    #[test]
    fn hom_has_no_stages_and_interprets_to_arr() {
        let p: FreerPreArrow<Arith, i64, i64> = FreerPreArrow::hom(|x| x * 3);
        assert_eq!(p.count(), 0);
        assert_eq!(p.interp::<Func>(pure).apply(5), 15);
        let q = p.then(FreerPreArrow::hom(|x| x + 1));
        assert_eq!(q.count(), 0);
        assert_eq!(q.interp::<Func>(pure).apply(5), 16);
    }

    #[test]
    fn composition_fuses_pure_steps() {
        let p = add(1).then(FreerPreArrow::hom(|x: i64| x - 4)).then(mul(2));
        assert_eq!(p.count(), 2);
        assert_eq!(p.validate(), Ok(2));
        assert_eq!(p.interp::<Func>(pure).apply(3), 0);
        assert_eq!(p.render(), "Stage0: Add(1)\nStage1: Mul(2)\nTerminal");
    }
}
