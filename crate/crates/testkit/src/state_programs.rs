//! Random state programs as syntax trees, with a reference interpreter
//! that runs the tree directly against a mutable integer.

use freer_arrows::effects::state::{get, put, StateEffect};
use freer_arrows::freer::FreerChoiceArrow;
use freer_arrows::Either;
use rand::Rng as _;

use crate::arith::Affine;
use crate::Rng;

#[derive(Debug, Clone)]
pub enum StateAst {
    Get,
    Put,
    Map(Affine),
    Seq(Vec<StateAst>),
    /// Even values take the first branch, odd values the second.
    Branch(Box<StateAst>, Box<StateAst>),
    /// Runs both on the same value, first then second, and adds the results.
    Fan(Box<StateAst>, Box<StateAst>),
}

pub type StateProgram = FreerChoiceArrow<StateEffect<i64>, i64, i64>;

impl StateAst {
    pub fn random(rng: &mut Rng, depth: usize) -> StateAst {
        let leaf = depth <= 1 || rng.gen_bool(0.35);
        if leaf {
            return match rng.gen_range(0..3) {
                0 => StateAst::Get,
                1 => StateAst::Put,
                _ => StateAst::Map(Affine::random(rng)),
            };
        }
        let sub = |rng: &mut Rng| Box::new(StateAst::random(rng, depth - 1));
        match rng.gen_range(0..3) {
            0 => {
                let n = rng.gen_range(2..=4);
                StateAst::Seq((0..n).map(|_| *sub(rng)).collect())
            }
            1 => StateAst::Branch(sub(rng), sub(rng)),
            _ => StateAst::Fan(sub(rng), sub(rng)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            StateAst::Get | StateAst::Put | StateAst::Map(_) => 1,
            StateAst::Seq(xs) => 1 + xs.iter().map(StateAst::depth).max().unwrap_or(0),
            StateAst::Branch(a, b) | StateAst::Fan(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Number of effect occurrences in the tree.
    pub fn effects(&self) -> usize {
        match self {
            StateAst::Get | StateAst::Put => 1,
            StateAst::Map(_) => 0,
            StateAst::Seq(xs) => xs.iter().map(StateAst::effects).sum(),
            StateAst::Branch(a, b) | StateAst::Fan(a, b) => a.effects() + b.effects(),
        }
    }

    pub fn build(&self) -> StateProgram {
        match self {
            StateAst::Get => get::<i64, i64>(),
            StateAst::Put => put(),
            StateAst::Map(f) => FreerChoiceArrow::hom(f.func()),
            StateAst::Seq(xs) => xs
                .iter()
                .fold(FreerChoiceArrow::identity(), |p, x| p.then(x.build())),
            StateAst::Branch(a, b) => FreerChoiceArrow::hom(|x: i64| {
                if x.rem_euclid(2) == 0 {
                    Either::Left(x)
                } else {
                    Either::Right(x)
                }
            })
            .then(a.build().fanin(b.build())),
            StateAst::Fan(a, b) => a
                .build()
                .fanout(b.build())
                .map(|(x, y): (i64, i64)| x.wrapping_add(y)),
        }
    }

    /// Runs the tree on `x`, updating `state`; returns the output and the
    /// number of effects performed.
    pub fn eval(&self, x: i64, state: &mut i64) -> (i64, usize) {
        match self {
            StateAst::Get => (*state, 1),
            StateAst::Put => {
                *state = x;
                (x, 1)
            }
            StateAst::Map(f) => (f.apply(x), 0),
            StateAst::Seq(xs) => {
                let (mut v, mut n) = (x, 0);
                for step in xs {
                    let (v2, k) = step.eval(v, state);
                    v = v2;
                    n += k;
                }
                (v, n)
            }
            StateAst::Branch(a, b) => {
                if x.rem_euclid(2) == 0 {
                    a.eval(x, state)
                } else {
                    b.eval(x, state)
                }
            }
            StateAst::Fan(a, b) => {
                let (p, n) = a.eval(x, state);
                let (q, m) = b.eval(x, state);
                (p.wrapping_add(q), n + m)
            }
        }
    }
}
