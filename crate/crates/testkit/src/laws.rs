//! Extensional law checks: two arrows are equal when they agree, output
//! and final state, on sampled inputs under both interpretations.

use std::fmt::Debug;

use freer_arrows::arrow::{
    Arrow, ArrowChoice, Category, Func, FuncArrow, Payload, PreArrow, State, StateArrow,
};
use freer_arrows::Either;
use rand::Rng as _;

use crate::arith::{Affine, Family};
use crate::Rng;

pub const PROGRAMS_PER_LAW: usize = 20;
pub const INPUTS_PER_PROGRAM: usize = 8;

#[derive(Debug, Clone)]
pub struct LawReport {
    pub law: String,
    pub samples: usize,
    pub failure: Option<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub type Gen<P> = fn(&mut Rng, usize) -> (<P as Category>::Arrow<i64, i64>, usize);

fn int(rng: &mut Rng) -> i64 {
    rng.gen_range(-50..=50)
}

fn state(rng: &mut Rng) -> i64 {
    rng.gen_range(-20..=20)
}

fn pair(rng: &mut Rng) -> (i64, i64) {
    (int(rng), int(rng))
}

fn either(rng: &mut Rng) -> Either<i64, i64> {
    if rng.gen_bool(0.5) {
        Either::Left(int(rng))
    } else {
        Either::Right(int(rng))
    }
}

/// Compares a pair of backend arrows on `inputs`; returns the number of
/// inputs checked.
pub fn agree_backends<X, Y>(
    f: (&FuncArrow<X, Y>, &StateArrow<i64, X, Y>),
    g: (&FuncArrow<X, Y>, &StateArrow<i64, X, Y>),
    inputs: &[(X, i64)],
) -> Result<usize, String>
where
    X: Payload + Clone + Debug,
    Y: Payload + PartialEq + Debug,
{
    for (x, s) in inputs {
        let (a, b) = (f.0.apply(x.clone()), g.0.apply(x.clone()));
        if a != b {
            return Err(format!("pure backend, input {x:?}: {a:?} != {b:?}"));
        }
        let (a, b) = (f.1.run(x.clone(), *s), g.1.run(x.clone(), *s));
        if a != b {
            return Err(format!(
                "state backend, input {x:?}, state {s}: {a:?} != {b:?}"
            ));
        }
    }
    Ok(inputs.len())
}

fn agree<P: Family, X, Y>(
    a: &P::Arrow<X, Y>,
    b: &P::Arrow<X, Y>,
    inputs: &[(X, i64)],
) -> Result<usize, String>
where
    X: Payload + Clone + Debug,
    Y: Payload + PartialEq + Debug,
{
    for p in [a, b] {
        P::validate(p).map_err(|e| format!("malformed chain: {e}"))?;
    }
    agree_backends(
        (&P::on_func(a), &P::on_state(a)),
        (&P::on_func(b), &P::on_state(b)),
        inputs,
    )
}

fn check(law: String, mut body: impl FnMut() -> Result<usize, String>) -> LawReport {
    let mut samples = 0;
    for _ in 0..PROGRAMS_PER_LAW {
        match body() {
            Ok(n) => samples += n,
            Err(e) => {
                return LawReport {
                    law,
                    samples,
                    failure: Some(e),
                }
            }
        }
    }
    LawReport {
        law,
        samples,
        failure: None,
    }
}

fn sample<X>(rng: &mut Rng, mut x: impl FnMut(&mut Rng) -> X) -> Vec<(X, i64)> {
    (0..INPUTS_PER_PROGRAM)
        .map(|_| (x(rng), state(rng)))
        .collect()
}

pub fn category_laws<P: Family>(rng: &mut Rng, gen: Gen<P>) -> Vec<LawReport> {
    let name = |l: &str| format!("{} {l}", P::NAME);
    vec![
        check(name("associativity"), || {
            let (f, g, h) = (gen(rng, 6).0, gen(rng, 6).0, gen(rng, 6).0);
            let lhs = P::compose(P::compose(f.clone(), g.clone()), h.clone());
            let rhs = P::compose(f, P::compose(g, h));
            agree::<P, _, _>(&lhs, &rhs, &sample(rng, int))
        }),
        check(name("left identity"), || {
            let f = gen(rng, 6).0;
            agree::<P, _, _>(&P::compose(P::identity(), f.clone()), &f, &sample(rng, int))
        }),
        check(name("right identity"), || {
            let f = gen(rng, 6).0;
            agree::<P, _, _>(&P::compose(f.clone(), P::identity()), &f, &sample(rng, int))
        }),
        check(name("arr composition"), || {
            let (f, g) = (Affine::random(rng), Affine::random(rng));
            let fused = P::arr(move |x| g.apply(f.apply(x)));
            agree::<P, _, _>(
                &fused,
                &P::compose(P::arr(f.func()), P::arr(g.func())),
                &sample(rng, int),
            )
        }),
    ]
}

pub fn arrow_laws<P: Family + Arrow>(rng: &mut Rng, gen: Gen<P>) -> Vec<LawReport> {
    let name = |l: &str| format!("{} {l}", P::NAME);
    vec![
        check(name("first of arr"), || {
            let f = Affine::random(rng);
            let lhs = P::first::<i64, i64, i64>(P::arr(f.func()));
            let rhs = P::arr(move |(x, d): (i64, i64)| (f.apply(x), d));
            agree::<P, _, _>(&lhs, &rhs, &sample(rng, pair))
        }),
        check(name("first distributes over composition"), || {
            let (f, g) = (gen(rng, 6).0, gen(rng, 6).0);
            let lhs = P::first::<i64, i64, i64>(P::compose(f.clone(), g.clone()));
            let rhs = P::compose(P::first::<i64, i64, i64>(f), P::first::<i64, i64, i64>(g));
            agree::<P, _, _>(&lhs, &rhs, &sample(rng, pair))
        }),
        check(name("first then fst"), || {
            let f = gen(rng, 6).0;
            let lhs = P::compose(
                P::first::<i64, i64, i64>(f.clone()),
                P::arr(|(c, _): (i64, i64)| c),
            );
            let rhs = P::compose(P::arr(|(x, _): (i64, i64)| x), f);
            agree::<P, _, _>(&lhs, &rhs, &sample(rng, pair))
        }),
    ]
}

pub fn choice_laws<P: Family + ArrowChoice>(rng: &mut Rng, gen: Gen<P>) -> Vec<LawReport> {
    let name = |l: &str| format!("{} {l}", P::NAME);
    vec![
        check(name("left of arr"), || {
            let f = Affine::random(rng);
            let lhs = P::left::<i64, i64, i64>(P::arr(f.func()));
            let rhs = P::arr(move |e: Either<i64, i64>| e.map_left(|x| f.apply(x)));
            agree::<P, _, _>(&lhs, &rhs, &sample(rng, either))
        }),
        check(name("left distributes over composition"), || {
            let (f, g) = (gen(rng, 6).0, gen(rng, 6).0);
            let lhs = P::left::<i64, i64, i64>(P::compose(f.clone(), g.clone()));
            let rhs = P::compose(P::left::<i64, i64, i64>(f), P::left::<i64, i64, i64>(g));
            agree::<P, _, _>(&lhs, &rhs, &sample(rng, either))
        }),
        check(name("left commutes with injection"), || {
            let f = gen(rng, 6).0;
            let lhs = P::compose(f.clone(), P::arr(Either::<i64, i64>::Left));
            let rhs = P::compose(
                P::arr(Either::<i64, i64>::Left),
                P::left::<i64, i64, i64>(f),
            );
            agree::<P, _, _>(&lhs, &rhs, &sample(rng, int))
        }),
    ]
}

/// `interp` commutes with composition, and with `first` / `left` where the
/// family has them: the freer operation followed by `interp` equals
/// `interp` followed by the backend operation.
pub fn homomorphism_laws<P: Family + ArrowChoice>(rng: &mut Rng, gen: Gen<P>) -> Vec<LawReport> {
    let name = |l: &str| format!("{} interp {l}", P::NAME);
    vec![
        check(name("of composition"), || {
            let (f, g) = (gen(rng, 6).0, gen(rng, 6).0);
            let fg = P::compose(f.clone(), g.clone());
            let ff = Func::compose(P::on_func(&f), P::on_func(&g));
            let ss = State::compose(P::on_state(&f), P::on_state(&g));
            agree_backends(
                (&P::on_func(&fg), &P::on_state(&fg)),
                (&ff, &ss),
                &sample(rng, int),
            )
        }),
        check(name("of first"), || {
            let f = gen(rng, 6).0;
            let lifted = P::first::<i64, i64, i64>(f.clone());
            let ff = Func::first::<i64, i64, i64>(P::on_func(&f));
            let ss = State::first::<i64, i64, i64>(P::on_state(&f));
            agree_backends(
                (&P::on_func(&lifted), &P::on_state(&lifted)),
                (&ff, &ss),
                &sample(rng, pair),
            )
        }),
        check(name("of left"), || {
            let f = gen(rng, 6).0;
            let lifted = P::left::<i64, i64, i64>(f.clone());
            let ff = Func::left::<i64, i64, i64>(P::on_func(&f));
            let ss = State::left::<i64, i64, i64>(P::on_state(&f));
            agree_backends(
                (&P::on_func(&lifted), &P::on_state(&lifted)),
                (&ff, &ss),
                &sample(rng, either),
            )
        }),
    ]
}

/// Every law for all three families.
pub fn all_freer_laws(rng: &mut Rng) -> Vec<LawReport> {
    use crate::arith::{straight, with_choice, with_products, Arith};
    use freer_arrows::freer::{Freer, FreerChoice, FreerPre};
    let mut out = category_laws::<FreerPre<Arith>>(rng, straight::<FreerPre<Arith>>);
    out.extend(category_laws::<Freer<Arith>>(
        rng,
        with_products::<Freer<Arith>>,
    ));
    out.extend(arrow_laws::<Freer<Arith>>(
        rng,
        with_products::<Freer<Arith>>,
    ));
    out.extend(category_laws::<FreerChoice<Arith>>(
        rng,
        with_choice::<FreerChoice<Arith>>,
    ));
    out.extend(arrow_laws::<FreerChoice<Arith>>(
        rng,
        with_choice::<FreerChoice<Arith>>,
    ));
    out.extend(choice_laws::<FreerChoice<Arith>>(
        rng,
        with_choice::<FreerChoice<Arith>>,
    ));
    out.extend(homomorphism_laws::<FreerChoice<Arith>>(
        rng,
        with_choice::<FreerChoice<Arith>>,
    ));
    out
}

type Both<X, Y> = (FuncArrow<X, Y>, StateArrow<i64, X, Y>);

/// The same random straight-line program built directly in the pure and
/// the state backend.
fn backend_program(rng: &mut Rng) -> Both<i64, i64> {
    use crate::arith::{pure_meaning, state_meaning, Arith};
    let mut f = Func::identity::<i64>();
    let mut s = State::<i64>::identity::<i64>();
    for _ in 0..rng.gen_range(1..=5) {
        if rng.gen_bool(0.5) {
            let op = if rng.gen_bool(0.5) {
                Arith::Add(rng.gen_range(-5..=5))
            } else {
                Arith::Mul(rng.gen_range(-3..=3))
            };
            f = Func::compose(f, Func::arr(move |x| pure_meaning(op, x)));
            s = State::compose(s, StateArrow::new(move |x, st| state_meaning(op, x, st)));
        } else {
            let a = Affine::random(rng);
            f = Func::compose(f, Func::arr(a.func()));
            s = State::compose(s, State::arr(a.func()));
        }
    }
    (f, s)
}

fn both<X, Y>(p: &Both<X, Y>) -> (&FuncArrow<X, Y>, &StateArrow<i64, X, Y>) {
    (&p.0, &p.1)
}

/// Category, arrow and choice laws for the pure and state backends
/// themselves, plus bypass: `left f` on a `Right` input leaves the state
/// untouched.
pub fn backend_laws(rng: &mut Rng) -> Vec<LawReport> {
    vec![
        check("backend associativity".into(), || {
            let (f, g, h) = (
                backend_program(rng),
                backend_program(rng),
                backend_program(rng),
            );
            let lhs = (
                Func::compose(Func::compose(f.0.clone(), g.0.clone()), h.0.clone()),
                State::compose(State::compose(f.1.clone(), g.1.clone()), h.1.clone()),
            );
            let rhs = (
                Func::compose(f.0, Func::compose(g.0, h.0)),
                State::compose(f.1, State::compose(g.1, h.1)),
            );
            agree_backends(both(&lhs), both(&rhs), &sample(rng, int))
        }),
        check("backend identity".into(), || {
            let f = backend_program(rng);
            let l = (
                Func::compose(Func::identity(), f.0.clone()),
                State::compose(State::identity(), f.1.clone()),
            );
            let r = (
                Func::compose(f.0.clone(), Func::identity()),
                State::compose(f.1.clone(), State::identity()),
            );
            let inputs = sample(rng, int);
            agree_backends(both(&l), both(&f), &inputs)?;
            agree_backends(both(&r), both(&f), &inputs)
        }),
        check("backend first distributes over composition".into(), || {
            let (f, g) = (backend_program(rng), backend_program(rng));
            let lhs = (
                Func::first::<i64, i64, i64>(Func::compose(f.0.clone(), g.0.clone())),
                State::first::<i64, i64, i64>(State::compose(f.1.clone(), g.1.clone())),
            );
            let rhs = (
                Func::compose(Func::first(f.0), Func::first(g.0)),
                State::compose(State::first(f.1), State::first(g.1)),
            );
            agree_backends(both(&lhs), both(&rhs), &sample(rng, pair))
        }),
        check("backend first then fst".into(), || {
            let f = backend_program(rng);
            let fst = |(c, _): (i64, i64)| c;
            let lhs = (
                Func::compose(Func::first::<i64, i64, i64>(f.0.clone()), Func::arr(fst)),
                State::compose(State::first::<i64, i64, i64>(f.1.clone()), State::arr(fst)),
            );
            let rhs = (
                Func::compose(Func::arr(fst), f.0),
                State::compose(State::arr(fst), f.1),
            );
            agree_backends(both(&lhs), both(&rhs), &sample(rng, pair))
        }),
        check("backend left distributes over composition".into(), || {
            let (f, g) = (backend_program(rng), backend_program(rng));
            let lhs = (
                Func::left::<i64, i64, i64>(Func::compose(f.0.clone(), g.0.clone())),
                State::left::<i64, i64, i64>(State::compose(f.1.clone(), g.1.clone())),
            );
            let rhs = (
                Func::compose(Func::left(f.0), Func::left(g.0)),
                State::compose(State::left(f.1), State::left(g.1)),
            );
            agree_backends(both(&lhs), both(&rhs), &sample(rng, either))
        }),
        check("backend left bypass keeps state".into(), || {
            let f = backend_program(rng);
            let lifted = State::left::<i64, i64, i64>(f.1);
            for _ in 0..INPUTS_PER_PROGRAM {
                let (x, s) = (int(rng), state(rng));
                let out = lifted.run(Either::Right(x), s);
                if out != (Either::Right(x), s) {
                    return Err(format!("Right({x}) at state {s} gave {out:?}"));
                }
            }
            Ok(INPUTS_PER_PROGRAM)
        }),
    ]
}
