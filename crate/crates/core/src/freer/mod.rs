//! Reified arrows over an effect signature.
//!
//! Three structures of increasing power, all normalized chains of effect
//! stages that end in a pure function:
//!
//! | structure            | stage routing                   | supports            |
//! |----------------------|---------------------------------|---------------------|
//! | [`FreerPreArrow`]    | `x -> a`                        | `>>>`, `arr`        |
//! | [`FreerArrow`]       | `x -> (a, c)`                   | + `first`           |
//! | [`FreerChoiceArrow`] | `x -> Either<(a, c), w>`        | + `first`, `left`   |
//!
//! `c` is a value carried around the stage's effect, and `w` a value that
//! bypasses the stage without firing it. Because the structure is data,
//! a program can be folded into a monoid without running it
//! ([`Reified::approximate`]), or translated into any backend with a
//! handler (`interp`).

mod arrow;
mod choice;
pub mod erased;
mod pre;
pub mod routing;
mod spine;

use std::collections::BTreeSet;
use std::fmt::{self, Debug, Write as _};
use std::marker::PhantomData;
use std::sync::{Arc, Mutex};

pub use arrow::{Freer, FreerArrow};
pub use choice::{FreerChoice, FreerChoiceArrow};
pub use erased::{from_val, into_val, Val};
pub use pre::{FreerPre, FreerPreArrow};

use crate::arrow::{Payload, PreArrow};

/// Bound on effect signature types. Effect values are stored in shared,
/// immutable chains.
pub trait Effect: Send + Sync + 'static {}

impl<T: Send + Sync + 'static> Effect for T {}

/// An effect of signature `E` whose input type is `A` and output type `B`.
///
/// Signature types are plain enums; `Op` attaches the input and output
/// types so that [`FreerChoiceArrow::embed`] and friends stay statically
/// typed. A handler for `E` receives the effect's input as a [`Val`]
/// holding an `A` and must produce a `Val` holding a `B`.
pub struct Op<E, A, B> {
    effect: E,
    _io: PhantomData<fn(A) -> B>,
}

impl<E, A, B> Op<E, A, B> {
    /// Declares that `effect` consumes `A` and produces `B`. Signature
    /// modules wrap this in typed smart constructors; handlers rely on the
    /// declaration being truthful.
    pub fn declare(effect: E) -> Self {
        Op {
            effect,
            _io: PhantomData,
        }
    }

    pub fn effect(&self) -> &E {
        &self.effect
    }

    pub fn into_effect(self) -> E {
        self.effect
    }

    /// Re-tags the effect into a larger signature.
    pub fn map_effect<E2>(self, f: impl FnOnce(E) -> E2) -> Op<E2, A, B> {
        Op::declare(f(self.effect))
    }
}

impl<E: Debug, A, B> Debug for Op<E, A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.effect.fmt(f)
    }
}

/// A monoid given as an explicit value.
pub struct MonoidSpec<M> {
    empty: M,
    combine: Arc<dyn Fn(M, M) -> M + Send + Sync>,
}

impl<M: Clone> MonoidSpec<M> {
    pub fn new(empty: M, combine: impl Fn(M, M) -> M + Send + Sync + 'static) -> Self {
        MonoidSpec {
            empty,
            combine: Arc::new(combine),
        }
    }

    pub fn empty(&self) -> M {
        self.empty.clone()
    }

    pub fn combine(&self, a: M, b: M) -> M {
        (self.combine)(a, b)
    }
}

impl MonoidSpec<usize> {
    pub fn sum() -> Self {
        MonoidSpec::new(0, |a, b| a + b)
    }
}

impl<T: Clone> MonoidSpec<Vec<T>> {
    pub fn list() -> Self {
        MonoidSpec::new(Vec::new(), |mut a, b| {
            a.extend(b);
            a
        })
    }
}

impl<T: Clone + Ord> MonoidSpec<BTreeSet<T>> {
    pub fn set_union() -> Self {
        MonoidSpec::new(BTreeSet::new(), |mut a, b| {
            a.extend(b);
            a
        })
    }
}

/// Static analysis shared by the three reified structures.
pub trait Reified {
    type Effect;

    /// The effects of every stage, in program order.
    fn effects(&self) -> Vec<&Self::Effect>;

    /// Folds a per-effect summary over the stages in program order; the
    /// terminal function contributes `empty`. For choice arrows this
    /// assumes every stage fires, so the result over-approximates any
    /// single run.
    fn approximate<M: Clone>(&self, f: impl Fn(&Self::Effect) -> M, m: &MonoidSpec<M>) -> M {
        let parts: Vec<M> = self.effects().into_iter().map(f).collect();
        parts
            .into_iter()
            .rev()
            .fold(m.empty(), |acc, x| m.combine(x, acc))
    }

    /// Number of effect stages.
    fn count(&self) -> usize {
        self.approximate(|_| 1usize, &MonoidSpec::sum())
    }

    /// One line per stage, `Stage<i>: <effect>`, then `Terminal`.
    fn render(&self) -> String
    where
        Self::Effect: Debug,
    {
        let mut out = String::new();
        for (i, e) in self.effects().into_iter().enumerate() {
            let _ = writeln!(out, "Stage{i}: {e:?}");
        }
        out.push_str("Terminal");
        out
    }

    /// Walks the chain and checks that it is a finite sequence of stages
    /// ending in exactly one terminal function; returns the stage count.
    fn validate(&self) -> Result<usize, String>;
}

/// Shared log of fired effects, filled by [`traced`] handlers.
#[derive(Clone, Default)]
pub struct EffectLog(Arc<Mutex<Vec<String>>>);

impl EffectLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&self, entry: String) {
        self.0.lock().unwrap().push(entry);
    }

    pub fn entries(&self) -> Vec<String> {
        self.0.lock().unwrap().clone()
    }

    pub fn len(&self) -> usize {
        self.0.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.0.lock().unwrap().clear();
    }

    pub fn count_of(&self, entry: &str) -> usize {
        self.0
            .lock()
            .unwrap()
            .iter()
            .filter(|e| *e == entry)
            .count()
    }
}

/// Wraps `handler` so that each time a stage's effect actually fires, the
/// effect's debug rendering is appended to `log`.
pub fn traced<F, E, H>(handler: H, log: EffectLog) -> impl Fn(&E) -> F::Arrow<Val, Val>
where
    F: PreArrow,
    E: Debug,
    H: Fn(&E) -> F::Arrow<Val, Val>,
{
    move |e: &E| {
        let line = format!("{e:?}");
        let log = log.clone();
        let mark = F::arr(move |v: Val| {
            log.push(line.clone());
            v
        });
        F::compose(mark, handler(e))
    }
}

/// Lifts a typed backend arrow to the erased form handlers return.
pub fn erase<F: PreArrow, A: Payload, B: Payload>(a: F::Arrow<A, B>) -> F::Arrow<Val, Val> {
    F::compose(F::compose(F::arr(from_val::<A>), a), F::arr(into_val::<B>))
}
