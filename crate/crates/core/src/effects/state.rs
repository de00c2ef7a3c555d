//! Mutable state as an effect: `GetS` reads, `PutS` writes and echoes.

use std::fmt;
use std::marker::PhantomData;
use std::sync::{Arc, Mutex};

use crate::arrow::{HostArrow, Payload, StateArrow};
use crate::freer::{from_val, into_val, FreerChoiceArrow, Op, Val};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateOp {
    Get,
    Put,
}

/// Effects over a state of type `S`. `Get` ignores its input and yields
/// the state; `Put` replaces the state with its input and yields it.
pub struct StateEffect<S> {
    op: StateOp,
    _s: PhantomData<fn() -> S>,
}

impl<S> StateEffect<S> {
    pub fn op(&self) -> StateOp {
        self.op
    }
}

impl<S: Payload> StateEffect<S> {
    /// `GetS`, accepting any input type.
    pub fn get<A>() -> Op<Self, A, S> {
        Op::declare(StateEffect {
            op: StateOp::Get,
            _s: PhantomData,
        })
    }

    pub fn put() -> Op<Self, S, S> {
        Op::declare(StateEffect {
            op: StateOp::Put,
            _s: PhantomData,
        })
    }
}

impl<S> Clone for StateEffect<S> {
    fn clone(&self) -> Self {
        StateEffect {
            op: self.op,
            _s: PhantomData,
        }
    }
}

impl<S> fmt::Debug for StateEffect<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.op {
            StateOp::Get => "GetS",
            StateOp::Put => "PutS",
        })
    }
}

pub fn get<A: Payload, S: Payload>() -> FreerChoiceArrow<StateEffect<S>, A, S> {
    FreerChoiceArrow::embed(StateEffect::get())
}

pub fn put<S: Payload>() -> FreerChoiceArrow<StateEffect<S>, S, S> {
    FreerChoiceArrow::embed(StateEffect::put())
}

/// Interprets state effects into the state arrow.
pub fn state_handler<S: Payload + Clone>(e: &StateEffect<S>) -> StateArrow<S, Val, Val> {
    match e.op {
        StateOp::Get => StateArrow::new(|_ignored: Val, s: S| (into_val(s.clone()), s)),
        StateOp::Put => StateArrow::new(|v: Val, _old: S| {
            let s = from_val::<S>(v);
            (into_val(s.clone()), s)
        }),
    }
}

/// A shared state cell, the host-backend stand-in for threaded state.
#[derive(Debug, Default)]
pub struct StateCell<S>(Arc<Mutex<S>>);

impl<S> Clone for StateCell<S> {
    fn clone(&self) -> Self {
        StateCell(Arc::clone(&self.0))
    }
}

impl<S: Clone> StateCell<S> {
    pub fn new(s: S) -> Self {
        StateCell(Arc::new(Mutex::new(s)))
    }

    pub fn get(&self) -> S {
        self.0.lock().unwrap().clone()
    }

    pub fn set(&self, s: S) {
        *self.0.lock().unwrap() = s;
    }
}

/// Interprets state effects into host arrows that read and write `cell`.
pub fn state_cell_handler<S: Payload + Clone>(
    cell: StateCell<S>,
) -> impl Fn(&StateEffect<S>) -> HostArrow<Val, Val> + Clone + Send + Sync {
    move |e: &StateEffect<S>| {
        let cell = cell.clone();
        match e.op {
            StateOp::Get => HostArrow::new(move |_: Val, _| Ok(into_val(cell.get()))),
            StateOp::Put => HostArrow::new(move |v: Val, _| {
                let s = from_val::<S>(v);
                cell.set(s.clone());
                Ok(into_val(s))
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrow::State;
    use crate::freer::Reified;

    #[test]
    fn handler_semantics() {
        let g = state_handler(&StateEffect::<i64>::get::<()>().into_effect());
        let (out, s) = g.run(into_val(()), 7);
        assert_eq!((from_val::<i64>(out), s), (7, 7));
        let p = state_handler(&StateEffect::<i64>::put().into_effect());
        let (out, s) = p.run(into_val(5i64), 0);
        assert_eq!((from_val::<i64>(out), s), (5, 5));
    }

    #[test]
    fn get_then_put_writes_back() {
        let p = get::<(), i64>().then(put());
        assert_eq!(p.count(), 2);
        let run = p.interp::<State<i64>>(state_handler::<i64>);
        assert_eq!(run.run((), 13), (13, 13));
    }

    #[test]
    fn get_succ_put_from_41() {
        let p = get::<(), i64>().map(|n| n + 1).then(put());
        let run = p.interp::<State<i64>>(state_handler::<i64>);
        assert_eq!(run.run((), 41), (42, 42));
    }

    #[test]
    fn cell_handler_matches_state_handler() {
        use crate::arrow::{Host, HostEnv};
        use crate::location::loc;
        let cell = StateCell::new(41i64);
        let p = get::<(), i64>().map(|n| n + 1).then(put());
        let run = p.interp::<Host>(state_cell_handler(cell.clone()));
        assert_eq!(run.run((), &HostEnv::new(loc("a"))), Ok(42));
        assert_eq!(cell.get(), 42);
    }
}
