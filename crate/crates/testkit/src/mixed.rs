//! Random programs over the sum of state and web effects, with a direct
//! sequential interpreter to compare against.

use std::collections::BTreeMap;
use std::sync::Arc;

use freer_arrows::arrow::{Host, HostEnv};
use freer_arrows::effects::state::state_cell_handler;
use freer_arrows::effects::sum::{get_state, put_state, ws_get, ws_post};
use freer_arrows::effects::web::web_handler;
use freer_arrows::effects::{
    combine_handlers, Injection, PostRecord, StateCell, StateEffect, SumEffect, WebBackendScript,
    WebServiceEffect,
};
use freer_arrows::freer::{FreerChoiceArrow, Reified};
use freer_arrows::loc;
use rand::Rng as _;

use crate::Rng;

pub type Mixed = SumEffect<StateEffect<i64>, WebServiceEffect>;

pub const URLS: [&str; 3] = ["a", "b", "c"];

#[derive(Debug, Clone, Copy)]
pub enum Step {
    /// Replace the value with the state.
    Get,
    /// Store the value.
    Put,
    /// Add the number served at a url.
    Fetch(usize),
    /// Post the value to a url, keeping it.
    Send(usize),
}

pub fn random_steps(rng: &mut Rng) -> Vec<Step> {
    (0..rng.gen_range(1..10))
        .map(|_| match rng.gen_range(0..4) {
            0 => Step::Get,
            1 => Step::Put,
            2 => Step::Fetch(rng.gen_range(0..URLS.len())),
            _ => Step::Send(rng.gen_range(0..URLS.len())),
        })
        .collect()
}

pub fn build(steps: &[Step]) -> FreerChoiceArrow<Mixed, i64, i64> {
    let st: Injection<StateEffect<i64>, Mixed> = Injection::left();
    let ws: Injection<WebServiceEffect, Mixed> = Injection::right(Injection::identity());
    steps.iter().fold(FreerChoiceArrow::identity(), |p, step| {
        let next = match *step {
            Step::Get => get_state::<Mixed, i64, i64>(&st),
            Step::Put => put_state(&st),
            Step::Fetch(u) => FreerChoiceArrow::identity()
                .fanout(ws_get(&ws, URLS[u], &[]).lmap(|_: i64| ()))
                .map(|(x, body): (i64, String)| {
                    x.wrapping_add(body.parse::<i64>().expect("scripted number"))
                }),
            Step::Send(u) => FreerChoiceArrow::identity()
                .fanout(ws_post(&ws, URLS[u], &[]).lmap(|x: i64| x.to_string()))
                .map(|(x, ()): (i64, ())| x),
        };
        p.then(next)
    })
}

/// Output, final state and posts, running each step directly.
pub fn oracle(
    steps: &[Step],
    x: i64,
    s: i64,
    responses: &BTreeMap<&str, i64>,
) -> (i64, i64, Vec<PostRecord>) {
    let (mut x, mut s, mut posts) = (x, s, vec![]);
    for step in steps {
        match *step {
            Step::Get => x = s,
            Step::Put => s = x,
            Step::Fetch(u) => x = x.wrapping_add(responses[URLS[u]]),
            Step::Send(u) => posts.push(PostRecord {
                url: URLS[u].into(),
                params: vec![],
                body: x.to_string(),
            }),
        }
    }
    (x, s, posts)
}

/// Runs `cases` random programs through `combine_handlers` on the host
/// backend and compares each with [`oracle`].
pub fn check(rng: &mut Rng, cases: usize) -> Result<(), String> {
    let env = HostEnv::new(loc("web"));
    for _ in 0..cases {
        let steps = random_steps(rng);
        let responses: BTreeMap<&str, i64> =
            URLS.iter().map(|u| (*u, rng.gen_range(-9..9))).collect();
        let script = responses.iter().fold(WebBackendScript::new(), |s, (u, v)| {
            s.respond(u, &[], &v.to_string())
        });
        let script = Arc::new(script);
        let (x, s0) = (rng.gen_range(-20..20), rng.gen_range(-20..20));
        let cell = StateCell::new(s0);
        let p = build(&steps);
        if p.count() != steps.len() {
            return Err(format!("{steps:?}: {} stages", p.count()));
        }
        let h = combine_handlers(
            state_cell_handler(cell.clone()),
            web_handler(script.clone()),
        );
        let out = p
            .interp::<Host>(h)
            .run(x, &env)
            .map_err(|e| format!("{steps:?}: {e}"))?;
        let got = (out, cell.get(), script.post_log());
        let want = oracle(&steps, x, s0, &responses);
        if got != want {
            return Err(format!(
                "{steps:?} from ({x}, {s0}): got {got:?}, expected {want:?}"
            ));
        }
    }
    Ok(())
}
