//! A toy effect over integers with a pure and a stateful meaning, and
//! random programs over it for each freer family.

use freer_arrows::arrow::{
    Arrow, ArrowChoice, Func, FuncArrow, Payload, PreArrow, State, StateArrow,
};
use freer_arrows::freer::{erase, Freer, FreerChoice, FreerPre, Op, Reified, Val};
use freer_arrows::Either;
use rand::Rng as _;

use crate::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arith {
    Add(i64),
    Mul(i64),
}

pub fn pure_meaning(op: Arith, x: i64) -> i64 {
    match op {
        Arith::Add(k) => x.wrapping_add(k),
        Arith::Mul(k) => x.wrapping_mul(k),
    }
}

/// Stateful meaning: both the output and the next state depend on the
/// state, so reordering or skipping a stage is observable.
pub fn state_meaning(op: Arith, x: i64, s: i64) -> (i64, i64) {
    match op {
        Arith::Add(k) => (x.wrapping_add(k).wrapping_add(s), s.wrapping_add(1)),
        Arith::Mul(k) => (x.wrapping_mul(k), s.wrapping_mul(k).wrapping_add(x)),
    }
}

pub fn func_handler(e: &Arith) -> FuncArrow<Val, Val> {
    let op = *e;
    erase::<Func, i64, i64>(Func::arr(move |x| pure_meaning(op, x)))
}

pub fn state_handler(e: &Arith) -> StateArrow<i64, Val, Val> {
    let op = *e;
    erase::<State<i64>, i64, i64>(StateArrow::new(move |x, s| state_meaning(op, x, s)))
}

/// `x -> a * x + b`, wrapping.
#[derive(Debug, Clone, Copy)]
pub struct Affine(pub i64, pub i64);

impl Affine {
    pub fn random(rng: &mut Rng) -> Self {
        Affine(rng.gen_range(-3..=3), rng.gen_range(-10..=10))
    }

    pub fn apply(self, x: i64) -> i64 {
        self.0.wrapping_mul(x).wrapping_add(self.1)
    }

    pub fn func(self) -> impl Fn(i64) -> i64 + Clone + Send + Sync + 'static {
        move |x| self.apply(x)
    }
}

/// A freer family over [`Arith`] together with its two interpretations.
pub trait Family: PreArrow {
    const NAME: &'static str;

    fn embed(op: Arith) -> Self::Arrow<i64, i64>;
    fn on_func<X: Payload, Y: Payload>(a: &Self::Arrow<X, Y>) -> FuncArrow<X, Y>;
    fn on_state<X: Payload, Y: Payload>(a: &Self::Arrow<X, Y>) -> StateArrow<i64, X, Y>;
    fn count<X: Payload, Y: Payload>(a: &Self::Arrow<X, Y>) -> usize;
    fn validate<X: Payload, Y: Payload>(a: &Self::Arrow<X, Y>) -> Result<usize, String>;
}

macro_rules! family {
    ($fam:ident, $name:literal, $ty:ident) => {
        impl Family for $fam<Arith> {
            const NAME: &'static str = $name;

            fn embed(op: Arith) -> Self::Arrow<i64, i64> {
                freer_arrows::freer::$ty::embed(Op::declare(op))
            }

            fn on_func<X: Payload, Y: Payload>(a: &Self::Arrow<X, Y>) -> FuncArrow<X, Y> {
                a.interp::<Func>(func_handler)
            }

            fn on_state<X: Payload, Y: Payload>(a: &Self::Arrow<X, Y>) -> StateArrow<i64, X, Y> {
                a.interp::<State<i64>>(state_handler)
            }

            fn count<X: Payload, Y: Payload>(a: &Self::Arrow<X, Y>) -> usize {
                a.count()
            }

            fn validate<X: Payload, Y: Payload>(a: &Self::Arrow<X, Y>) -> Result<usize, String> {
                a.validate()
            }
        }
    };
}

family!(FreerPre, "pre-arrow", FreerPreArrow);
family!(Freer, "arrow", FreerArrow);
family!(FreerChoice, "choice arrow", FreerChoiceArrow);

fn random_op(rng: &mut Rng) -> Arith {
    if rng.gen_bool(0.5) {
        Arith::Add(rng.gen_range(-5..=5))
    } else {
        Arith::Mul(rng.gen_range(-3..=3))
    }
}

/// A random straight-line program of at most `size` steps, each a pure map
/// or an effect. Returns the program and its number of effect stages.
pub fn straight<P: Family>(rng: &mut Rng, size: usize) -> (P::Arrow<i64, i64>, usize) {
    let mut p = P::identity::<i64>();
    let mut stages = 0;
    for _ in 0..rng.gen_range(1..=size.max(1)) {
        let step = if rng.gen_bool(0.6) {
            stages += 1;
            P::embed(random_op(rng))
        } else {
            P::arr(Affine::random(rng).func())
        };
        p = P::compose(p, step);
    }
    (p, stages)
}

/// Like [`straight`], but steps may also split the value, run two
/// sub-programs left then right, and recombine.
pub fn with_products<P: Family + Arrow>(rng: &mut Rng, size: usize) -> (P::Arrow<i64, i64>, usize) {
    if size < 3 || rng.gen_bool(0.4) {
        return straight::<P>(rng, size);
    }
    let (l, nl) = with_products::<P>(rng, size / 2);
    let (r, nr) = with_products::<P>(rng, size / 2);
    let (pre, npre) = straight::<P>(rng, 2);
    let join = P::arr(|(a, b): (i64, i64)| a.wrapping_sub(b));
    (
        P::compose(pre, P::compose(P::fanout(l, r), join)),
        npre + nl + nr,
    )
}

/// Like [`with_products`], but steps may also branch on the parity of the
/// value.
pub fn with_choice<P: Family + ArrowChoice>(
    rng: &mut Rng,
    size: usize,
) -> (P::Arrow<i64, i64>, usize) {
    if size < 3 || rng.gen_bool(0.3) {
        return with_products::<P>(rng, size);
    }
    let (l, nl) = with_choice::<P>(rng, size / 2);
    let (r, nr) = with_choice::<P>(rng, size / 2);
    let route = P::arr(|x: i64| {
        if x.rem_euclid(2) == 0 {
            Either::Left(x)
        } else {
            Either::Right(x)
        }
    });
    (P::compose(route, P::fanin(l, r)), nl + nr)
}
