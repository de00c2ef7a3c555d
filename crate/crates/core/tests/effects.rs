use std::sync::Arc;

use freer_arrows::arrow::{Host, HostEnv};
use freer_arrows::effects::fixtures::{echo_ws, forward, forward_if};
use freer_arrows::effects::state::state_cell_handler;
use freer_arrows::effects::sum::{get_state, put_state, ws_get, ws_post};
use freer_arrows::effects::web::web_handler;
use freer_arrows::effects::{
    combine_handlers, Injection, PostRecord, StateCell, StateEffect, SumEffect, WebBackendScript,
    WebServiceEffect,
};
use freer_arrows::freer::{traced, EffectLog, Reified};
use freer_arrows::{loc, Error};
use freer_testkit::mixed::Mixed;
use freer_testkit::rng;

fn env() -> HostEnv {
    HostEnv::new(loc("web"))
}

fn post(url: &str, body: &str) -> PostRecord {
    PostRecord {
        url: url.into(),
        params: vec![],
        body: body.into(),
    }
}

fn run_forward_if(body: &str) -> (Result<(), Error>, Vec<PostRecord>, EffectLog) {
    let script = Arc::new(WebBackendScript::new().respond("u1", &[], body));
    let log = EffectLog::new();
    let h = traced::<Host, _, _>(web_handler(script.clone()), log.clone());
    let p = forward_if("u1", "u2", "u3", &[], "m1", "m2");
    let out = p.interp::<Host>(h).run((), &env()).unwrap();
    (out, script.post_log(), log)
}

#[test]
fn forward_if_takes_exactly_one_branch() {
    for (body, url, msg) in [
        ("-3", "u3", "m2"),
        ("0", "u3", "m2"),
        ("1", "u2", "m1"),
        ("42", "u2", "m1"),
    ] {
        let (out, posts, log) = run_forward_if(body);
        assert_eq!(out, Ok(()));
        assert_eq!(posts, vec![post(url, msg)], "input {body}");
        assert_eq!(log.len(), 2);
        assert_eq!(log.count_of("WsGet(u1, [])"), 1);
    }
}

#[test]
fn forward_if_rejects_non_integers_without_posting() {
    for body in ["abc", "", "4.5", "1 2"] {
        let (out, posts, log) = run_forward_if(body);
        assert!(
            matches!(out, Err(Error::Parse { .. })),
            "{body:?} gave {out:?}"
        );
        assert!(posts.is_empty());
        assert_eq!(log.entries(), ["WsGet(u1, [])"]);
    }
    let (out, posts, _) = run_forward_if(" 7\n");
    assert_eq!((out, posts), (Ok(()), vec![post("u2", "m1")]));
}

#[test]
fn echo_and_forward_post_the_fetched_body() {
    let script = Arc::new(WebBackendScript::new().respond("u1", &[], "body"));
    echo_ws("u1", "u2", &[])
        .interp::<Host>(web_handler(script.clone()))
        .run((), &env())
        .unwrap();
    assert_eq!(script.post_log(), vec![post("u2", "body")]);
    let script = Arc::new(WebBackendScript::new().respond("u1", &[], "b"));
    forward("u1", "u2", "u3", &[])
        .interp::<Host>(web_handler(script.clone()))
        .run((), &env())
        .unwrap();
    assert_eq!(script.post_log(), vec![post("u2", "b"), post("u3", "b")]);
}

#[test]
fn missing_response_is_an_error() {
    let script = Arc::new(WebBackendScript::new());
    let err = echo_ws("u1", "u2", &[])
        .interp::<Host>(web_handler(script.clone()))
        .run((), &env());
    assert_eq!(err, Err(Error::NoScriptedResponse { url: "u1".into() }));
    assert!(script.post_log().is_empty());
}

#[test]
fn combined_handlers_match_per_effect_semantics() {
    freer_testkit::mixed::check(&mut rng(30), 300).unwrap();
}

#[test]
fn nested_sums_dispatch_to_the_right_handler() {
    type Three = SumEffect<StateEffect<i64>, SumEffect<WebServiceEffect, StateEffect<String>>>;
    let ints: Injection<StateEffect<i64>, Three> = Injection::left();
    let web: Injection<WebServiceEffect, Three> = Injection::right(Injection::left());
    let text: Injection<StateEffect<String>, Three> =
        Injection::right(Injection::right(Injection::identity()));
    let p = ws_get(&web, "u", &[])
        .then(put_state(&text))
        .map(|s: String| s.len() as i64)
        .then(put_state(&ints))
        .then(get_state::<Three, i64, String>(&text))
        .then(ws_post(&web, "v", &[]));
    assert_eq!(
        p.render(),
        "Stage0: InRight(InLeft(WsGet(u, [])))\nStage1: InRight(InRight(PutS))\nStage2: InLeft(PutS)\n\
         Stage3: InRight(InRight(GetS))\nStage4: InRight(InLeft(WsPost(v, [])))\nTerminal"
    );
    let script = Arc::new(WebBackendScript::new().respond("u", &[], "hello"));
    let (n, s) = (StateCell::new(0i64), StateCell::new(String::new()));
    let h = combine_handlers(
        state_cell_handler(n.clone()),
        combine_handlers(web_handler(script.clone()), state_cell_handler(s.clone())),
    );
    p.interp::<Host>(h).run((), &env()).unwrap();
    assert_eq!((n.get(), s.get()), (5, "hello".to_string()));
    assert_eq!(script.post_log(), vec![post("v", "hello")]);
}

#[test]
fn injection_preserves_effect_order() {
    let st: Injection<StateEffect<i64>, Mixed> = Injection::left();
    let ws: Injection<WebServiceEffect, Mixed> = Injection::right(Injection::identity());
    let p = get_state::<Mixed, (), i64>(&st)
        .map(|n: i64| n.to_string())
        .then(ws_post(&ws, "u", &[]));
    let tags: Vec<bool> = p
        .effects()
        .iter()
        .map(|e| matches!(e, SumEffect::InLeft(_)))
        .collect();
    assert_eq!(tags, [true, false]);
}
