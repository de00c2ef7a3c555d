//! Sums of effect signatures and injections into them.

use std::fmt;
use std::sync::Arc;

use super::state::StateEffect;
use super::web::WebServiceEffect;
use crate::arrow::Payload;
use crate::freer::{Effect, FreerChoiceArrow, Op};

/// An effect drawn from either `L` or `R`.
#[derive(Clone, PartialEq, Eq)]
pub enum SumEffect<L, R> {
    InLeft(L),
    InRight(R),
}

impl<L: fmt::Debug, R: fmt::Debug> fmt::Debug for SumEffect<L, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SumEffect::InLeft(l) => write!(f, "InLeft({l:?})"),
            SumEffect::InRight(r) => write!(f, "InRight({r:?})"),
        }
    }
}

/// Evidence that every effect of `Sub` is also an effect of `Super`.
///
/// Witnesses are built explicitly: [`Injection::identity`] for `Sub` into
/// itself, [`Injection::left`] into the left of a sum, and
/// [`Injection::right`] to step into the right of a sum. A signature nested
/// as `SumEffect<A, SumEffect<B, C>>` reaches `B` with
/// `Injection::right(Injection::left())`.
pub struct Injection<Sub, Super> {
    inject: Arc<dyn Fn(Sub) -> Super + Send + Sync>,
}

impl<Sub, Super> Clone for Injection<Sub, Super> {
    fn clone(&self) -> Self {
        Injection {
            inject: Arc::clone(&self.inject),
        }
    }
}

impl<Sub: 'static> Injection<Sub, Sub> {
    pub fn identity() -> Self {
        Injection {
            inject: Arc::new(|e| e),
        }
    }
}

impl<L: 'static, R: 'static> Injection<L, SumEffect<L, R>> {
    pub fn left() -> Self {
        Injection {
            inject: Arc::new(SumEffect::InLeft),
        }
    }
}

impl<Sub: 'static, L: 'static, R: 'static> Injection<Sub, SumEffect<L, R>> {
    pub fn right(inner: Injection<Sub, R>) -> Self {
        Injection {
            inject: Arc::new(move |e| SumEffect::InRight((inner.inject)(e))),
        }
    }
}

impl<Sub, Super> Injection<Sub, Super> {
    pub fn inject(&self, e: Sub) -> Super {
        (self.inject)(e)
    }

    pub fn inject_op<A, B>(&self, op: Op<Sub, A, B>) -> Op<Super, A, B> {
        op.map_effect(|e| self.inject(e))
    }
}

/// Dispatches on the sum tag. Both handlers must target the same backend.
pub fn combine_handlers<L, R, Out>(
    hl: impl Fn(&L) -> Out,
    hr: impl Fn(&R) -> Out,
) -> impl Fn(&SumEffect<L, R>) -> Out {
    move |e| match e {
        SumEffect::InLeft(l) => hl(l),
        SumEffect::InRight(r) => hr(r),
    }
}

pub fn get_state<Sig: Effect, A: Payload, S: Payload>(
    w: &Injection<StateEffect<S>, Sig>,
) -> FreerChoiceArrow<Sig, A, S> {
    FreerChoiceArrow::embed(w.inject_op(StateEffect::get()))
}

pub fn put_state<Sig: Effect, S: Payload>(
    w: &Injection<StateEffect<S>, Sig>,
) -> FreerChoiceArrow<Sig, S, S> {
    FreerChoiceArrow::embed(w.inject_op(StateEffect::put()))
}

pub fn ws_get<Sig: Effect>(
    w: &Injection<WebServiceEffect, Sig>,
    url: &str,
    params: &[&str],
) -> FreerChoiceArrow<Sig, (), String> {
    FreerChoiceArrow::embed(w.inject_op(WebServiceEffect::get(url, params)))
}

pub fn ws_post<Sig: Effect>(
    w: &Injection<WebServiceEffect, Sig>,
    url: &str,
    params: &[&str],
) -> FreerChoiceArrow<Sig, String, ()> {
    FreerChoiceArrow::embed(w.inject_op(WebServiceEffect::post(url, params)))
}
