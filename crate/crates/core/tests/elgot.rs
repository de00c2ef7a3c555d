use freer_arrows::arrow::{Host, HostEnv, State};
use freer_arrows::effects::state::{get, put, state_cell_handler, state_handler};
use freer_arrows::effects::{StateCell, StateEffect};
use freer_arrows::elgot::{countdown_fixture, interp_elgot, ElgotLoop};
use freer_arrows::freer::{traced, EffectLog, FreerChoiceArrow, Reified};
use freer_arrows::{loc, Either, Error};

#[test]
fn countdown_performs_one_put_per_step() {
    let l = countdown_fixture();
    for n in [0i64, 1, 2, 5, 17] {
        let log = EffectLog::new();
        let h = traced::<State<i64>, _, _>(state_handler::<i64>, log.clone());
        let (out, s) = interp_elgot::<State<i64>, _, _, _>(h, &l, None).run(0, n);
        assert_eq!((out, s), (Ok(0), 0), "start {n}");
        assert_eq!(log.count_of("PutS"), n as usize);
        assert_eq!(log.count_of("GetS"), n as usize + 1);
        // Exactly the body's effects repeat: GetS, PutS, ..., GetS.
        let expected: Vec<&str> = (0..n)
            .flat_map(|_| ["GetS", "PutS"])
            .chain(["GetS"])
            .collect();
        assert_eq!(log.entries(), expected);
    }
}

#[test]
fn countdown_on_the_host_backend() {
    let env = HostEnv::new(loc("a"));
    for n in [0i64, 1, 2, 5, 17] {
        let cell = StateCell::new(n);
        let run = interp_elgot::<Host, _, _, _>(
            state_cell_handler(cell.clone()),
            &countdown_fixture(),
            None,
        );
        assert_eq!(run.run(0, &env), Ok(Ok(0)));
        assert_eq!(cell.get(), 0);
    }
}

#[test]
fn cap_stops_runaway_loops() {
    let cell = StateCell::new(-1i64);
    let run = interp_elgot::<Host, _, _, _>(
        state_cell_handler(cell.clone()),
        &countdown_fixture(),
        Some(10),
    );
    assert_eq!(
        run.run(0, &HostEnv::new(loc("a"))),
        Ok(Err(Error::IterationCap(10)))
    );
    assert_eq!(cell.get(), -11);
    // A cap that is not reached changes nothing.
    let run =
        interp_elgot::<State<i64>, _, _, _>(state_handler::<i64>, &countdown_fixture(), Some(6));
    assert_eq!(run.run(0, 5), (Ok(0), 0));
}

/// Adds `x, x-1, ..., 1` into the state, then returns the state doubled.
fn triangle() -> ElgotLoop<StateEffect<i64>, i64, i64> {
    let step = FreerChoiceArrow::identity()
        .fanout(get::<i64, i64>())
        .map(|(x, s): (i64, i64)| (x, s + x))
        .then(put::<i64>().second::<i64>().map(|(x, _): (i64, i64)| x - 1));
    let body = FreerChoiceArrow::hom(|x: i64| {
        if x == 0 {
            Either::Left(())
        } else {
            Either::Right(x)
        }
    })
    .then(FreerChoiceArrow::identity().plus(step));
    let exit = get::<(), i64>().map(|s| 2 * s);
    ElgotLoop::new(body, exit)
}

#[test]
fn loop_with_continuation_matches_closed_form() {
    let l = triangle();
    assert_eq!(l.body().count(), 2);
    assert_eq!(l.continuation().count(), 1);
    for n in [0i64, 1, 2, 5, 17, 300] {
        let (out, s) =
            interp_elgot::<State<i64>, _, _, _>(state_handler::<i64>, &l, None).run(n, 4);
        let s_end = 4 + n * (n + 1) / 2;
        assert_eq!((out, s), (Ok(2 * s_end), s_end), "n = {n}");
    }
}
