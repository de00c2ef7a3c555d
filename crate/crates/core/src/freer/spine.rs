//! The stage list shared by the three reified structures.
//!
//! A chain is a singly linked list of `(router, effect)` stages ending in a
//! pure function. Every walk over it is a loop, so chain length is bounded
//! by memory rather than stack depth.

use std::sync::Arc;

use super::erased::{after, ErasedFn, Val};
use crate::arrow::PreArrow;

/// A stage's routing function.
pub(crate) trait Route: Clone {
    /// `f` then `self`.
    fn precompose(self, f: ErasedFn) -> Self;
}

impl Route for ErasedFn {
    fn precompose(self, f: ErasedFn) -> Self {
        after(f, self)
    }
}

pub(crate) enum Node<R, E> {
    Hom(ErasedFn),
    Comp {
        pre: R,
        effect: Arc<E>,
        rest: Chain<R, E>,
    },
}

pub(crate) type Chain<R, E> = Arc<Node<R, E>>;

fn placeholder<R, E>() -> Chain<R, E> {
    Arc::new(Node::Hom(Arc::new(|v| v)))
}

impl<R, E> Drop for Node<R, E> {
    fn drop(&mut self) {
        let Node::Comp { rest, .. } = self else {
            return;
        };
        let mut next = std::mem::replace(rest, placeholder());
        while let Some(mut node) = Arc::into_inner(next) {
            match &mut node {
                Node::Comp { rest, .. } => next = std::mem::replace(rest, placeholder()),
                Node::Hom(_) => break,
            }
        }
    }
}

pub(crate) fn hom<R, E>(f: ErasedFn) -> Chain<R, E> {
    Arc::new(Node::Hom(f))
}

pub(crate) fn stage<R, E>(pre: R, effect: E, rest: ErasedFn) -> Chain<R, E> {
    Arc::new(Node::Comp {
        pre,
        effect: Arc::new(effect),
        rest: hom(rest),
    })
}

fn unspine<R: Clone, E>(chain: &Chain<R, E>) -> (Vec<(R, Arc<E>)>, ErasedFn) {
    let mut stages = Vec::new();
    let mut cur = chain;
    loop {
        match &**cur {
            Node::Hom(f) => return (stages, f.clone()),
            Node::Comp { pre, effect, rest } => {
                stages.push((pre.clone(), effect.clone()));
                cur = rest;
            }
        }
    }
}

fn respine<R, E>(stages: Vec<(R, Arc<E>)>, mut tail: Chain<R, E>) -> Chain<R, E> {
    for (pre, effect) in stages.into_iter().rev() {
        tail = Arc::new(Node::Comp {
            pre,
            effect,
            rest: tail,
        });
    }
    tail
}

/// Appends `g` after `f`, fusing `f`'s terminal into `g`'s first stage.
/// Shares `g`'s tail; copies `f`'s stages.
pub(crate) fn compose<R: Route, E>(f: &Chain<R, E>, g: &Chain<R, E>) -> Chain<R, E> {
    let (stages, t) = unspine(f);
    let tail = match &**g {
        Node::Hom(b) => hom(after(t, b.clone())),
        Node::Comp { pre, effect, rest } => Arc::new(Node::Comp {
            pre: pre.clone().precompose(t),
            effect: effect.clone(),
            rest: rest.clone(),
        }),
    };
    respine(stages, tail)
}

/// Rebuilds a chain stage by stage: each router becomes `route(pre)`, every
/// stage after the first and the terminal are prefixed with `back`, and the
/// terminal function becomes `terminal(t)`. This is how strength and choice
/// push a context value through every stage.
pub(crate) fn lift<R: Route, E>(
    chain: &Chain<R, E>,
    route: impl Fn(R) -> R,
    back: ErasedFn,
    terminal: impl FnOnce(ErasedFn) -> ErasedFn,
) -> Chain<R, E> {
    let (stages, t) = unspine(chain);
    let any = !stages.is_empty();
    let lifted: Vec<_> = stages
        .into_iter()
        .enumerate()
        .map(|(i, (pre, e))| {
            let r = route(pre);
            (
                if i == 0 {
                    r
                } else {
                    r.precompose(back.clone())
                },
                e,
            )
        })
        .collect();
    let t = terminal(t);
    respine(lifted, hom(if any { after(back, t) } else { t }))
}

pub(crate) fn effects<R, E>(chain: &Chain<R, E>) -> Vec<&E> {
    let mut out = Vec::new();
    let mut cur = chain;
    while let Node::Comp { effect, rest, .. } = &**cur {
        out.push(&**effect);
        cur = rest;
    }
    out
}

/// Walks to the terminal, counting stages.
pub(crate) fn length<R, E>(chain: &Chain<R, E>) -> usize {
    let mut n = 0;
    let mut cur = chain;
    loop {
        match &**cur {
            Node::Hom(_) => return n,
            Node::Comp { rest, .. } => {
                n += 1;
                cur = rest;
            }
        }
    }
}

/// Composes `interp_stage` of every stage, then the terminal function.
pub(crate) fn interp<F: PreArrow, R: Clone, E>(
    chain: &Chain<R, E>,
    interp_stage: impl Fn(R, &E) -> F::Arrow<Val, Val>,
) -> F::Arrow<Val, Val> {
    let (stages, t) = unspine(chain);
    let mut acc: Option<F::Arrow<Val, Val>> = None;
    for (pre, e) in stages {
        let s = interp_stage(pre, &e);
        acc = Some(match acc {
            None => s,
            Some(a) => F::compose(a, s),
        });
    }
    let t = F::arr(move |v| t(v));
    match acc {
        None => t,
        Some(a) => F::compose(a, t),
    }
}
