use freer_arrows::arrow::{Host, HostEnv, State};
use freer_arrows::effects::state::{state_cell_handler, state_handler};
use freer_arrows::effects::StateCell;
use freer_arrows::freer::{traced, EffectLog, Reified};
use freer_arrows::loc;
use freer_testkit::rng;
use freer_testkit::state_programs::StateAst;
use rand::Rng as _;

#[test]
fn random_state_programs_match_the_oracle() {
    let mut r = rng(20);
    for i in 0..200 {
        let ast = StateAst::random(&mut r, 1 + i % 4);
        let p = ast.build();
        assert_eq!(p.count(), ast.effects(), "{ast:?}");
        let run = p.interp::<State<i64>>(state_handler::<i64>);
        for _ in 0..5 {
            let (x, s0) = (r.gen_range(-30..30), r.gen_range(-30..30));
            let mut s = s0;
            let (want, fired) = ast.eval(x, &mut s);
            assert_eq!(run.run(x, s0), (want, s), "{ast:?} on ({x}, {s0})");
            assert!(fired <= p.count());
        }
    }
}

#[test]
fn fired_effects_match_the_oracle() {
    let mut r = rng(21);
    for _ in 0..100 {
        let ast = StateAst::random(&mut r, 3);
        let log = EffectLog::new();
        let run = ast.build().interp::<State<i64>>(traced::<State<i64>, _, _>(
            state_handler::<i64>,
            log.clone(),
        ));
        let (x, s0) = (r.gen_range(-30..30), r.gen_range(-30..30));
        run.run(x, s0);
        let (_, fired) = ast.eval(x, &mut s0.clone());
        assert_eq!(log.len(), fired, "{ast:?}");
    }
}

#[test]
fn host_cell_agrees_with_threaded_state() {
    let mut r = rng(22);
    let env = HostEnv::new(loc("a"));
    for _ in 0..100 {
        let ast = StateAst::random(&mut r, 3);
        let (x, s0) = (r.gen_range(-30..30), r.gen_range(-30..30));
        let cell = StateCell::new(s0);
        let out = ast
            .build()
            .interp::<Host>(state_cell_handler(cell.clone()))
            .run(x, &env)
            .unwrap();
        let (want, s) = ast
            .build()
            .interp::<State<i64>>(state_handler::<i64>)
            .run(x, s0);
        assert_eq!((out, cell.get()), (want, s));
    }
}

#[test]
fn get_put_fixtures() {
    use freer_arrows::effects::state::{get, put};
    let p = get::<(), i64>().map(|n| n + 1).then(put());
    assert_eq!(p.render(), "Stage0: GetS\nStage1: PutS\nTerminal");
    assert_eq!(
        p.interp::<State<i64>>(state_handler::<i64>).run((), 41),
        (42, 42)
    );
    // Put alone returns what it stored.
    assert_eq!(
        put::<i64>()
            .interp::<State<i64>>(state_handler::<i64>)
            .run(5, 0),
        (5, 5)
    );
}
