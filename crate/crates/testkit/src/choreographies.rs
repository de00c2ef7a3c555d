//! Random small choreographies and the differential check between the
//! global interpreter and projected execution.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::time::Duration;

use freer_arrows::arrow::{Host, HostArrow, Payload, PreArrow, StoreSnapshot};
use freer_arrows::choreo::{comm, cond_prime, discard, locally, locally0, wrap, Choreography};
use freer_arrows::freer::FreerChoiceArrow;
use freer_arrows::network::{global_interp, Cluster, Envs, TraceEntry};
use freer_arrows::{loc, Either, Located, Location};
use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::Rng;

pub const LOCATIONS: [&str; 3] = ["a", "b", "c"];
pub const LOG_STORE: &str = "log";

pub struct RandomChoreography {
    pub choreography: Choreography<(), Located<i64>>,
    pub description: String,
    pub locations: Vec<Location>,
    /// Top-level steps, counting the initial local step.
    pub steps: usize,
}

/// A local step that records its result under `key` in the location's log
/// store.
fn logged(key: String, k: i64) -> HostArrow<i64, i64> {
    HostArrow::new(move |x: i64, env| {
        let y = x.wrapping_mul(3).wrapping_add(k).rem_euclid(1000);
        env.store_put(LOG_STORE, &key, &y.to_string())?;
        Ok(y)
    })
}

fn other(rng: &mut Rng, locs: &[Location], not: &Location) -> Location {
    locs.iter()
        .filter(|l| *l != not)
        .collect::<Vec<_>>()
        .choose(rng)
        .map(|l| (*l).clone())
        .expect("two locations")
}

/// A branch body: the scrutinee is re-wrapped at `owner`, then up to two
/// local or communication steps run, and the result is dropped.
fn branch(
    rng: &mut Rng,
    locs: &[Location],
    owner: &Location,
    tag: &str,
    desc: &mut Vec<String>,
) -> Choreography<i64, ()> {
    let mut cur = owner.clone();
    let mut c = FreerChoiceArrow::hom(wrap::<i64>(owner.clone()));
    for j in 0..rng.gen_range(0..=2) {
        if rng.gen_bool(0.5) {
            let k = rng.gen_range(0..10);
            desc.push(format!("{cur}:local{k}"));
            c = c.then(locally(cur.clone(), logged(format!("{tag}{j}"), k)));
        } else {
            let dst = other(rng, locs, &cur);
            desc.push(format!("{cur}->{dst}"));
            c = c.then(comm(cur.clone(), dst.clone()).expect("distinct"));
            cur = dst;
        }
    }
    c.then(discard())
}

/// At most `max_steps` top-level steps over two or three locations; each
/// step is a local computation, a communication, or a conditional whose
/// branches are straight-line and return unit.
pub fn random_choreography(rng: &mut Rng, max_steps: usize) -> RandomChoreography {
    let locs: Vec<Location> = LOCATIONS[..rng.gen_range(2..=3)]
        .iter()
        .map(|n| loc(n))
        .collect();
    let mut cur = locs.choose(rng).expect("nonempty").clone();
    let seed = rng.gen_range(0..100);
    let mut desc = vec![format!("{cur}:start{seed}")];
    let start_key = "s0".to_owned();
    let mut c = locally0(
        cur.clone(),
        HostArrow::new(move |(), env| {
            env.store_put(LOG_STORE, &start_key, &seed.to_string())?;
            Ok(seed)
        }),
    );
    let steps = rng.gen_range(1..=max_steps.max(1));
    for i in 1..steps {
        match rng.gen_range(0..3) {
            0 => {
                let k = rng.gen_range(0..10);
                desc.push(format!("{cur}:local{k}"));
                c = c.then(locally(cur.clone(), logged(format!("s{i}"), k)));
            }
            1 => {
                let dst = other(rng, &locs, &cur);
                desc.push(format!("{cur}->{dst}"));
                c = c.then(comm(cur.clone(), dst.clone()).expect("distinct"));
                cur = dst;
            }
            _ => {
                let mut left = vec![];
                let mut right = vec![];
                let l = branch(rng, &locs, &cur, &format!("s{i}L"), &mut left);
                let r = branch(rng, &locs, &cur, &format!("s{i}R"), &mut right);
                desc.push(format!(
                    "{cur}:cond[{} | {}]",
                    left.join(" "),
                    right.join(" ")
                ));
                let scrutinee = Host::arr(|x: i64| {
                    if x % 2 == 0 {
                        Either::Left(x)
                    } else {
                        Either::Right(x)
                    }
                });
                let cond = cond_prime(cur.clone(), scrutinee, l.fanin(r));
                c = c
                    .then(FreerChoiceArrow::identity().fanout(cond))
                    .then(FreerChoiceArrow::hom(|(v, ()): (Located<i64>, ())| v));
            }
        }
    }
    RandomChoreography {
        choreography: c,
        description: desc.join(" "),
        locations: locs,
        steps,
    }
}

/// What one differential run observed.
#[derive(Debug)]
pub struct Observed<T> {
    pub outputs: Vec<Located<T>>,
    pub stores: BTreeMap<Location, StoreSnapshot>,
    pub traces: BTreeMap<Location, Vec<TraceEntry>>,
}

/// Runs `c` for `rounds` rounds both through the global interpreter and
/// as concurrently executing projected endpoints, each on fresh
/// environments from `envs`, and checks that they agree: each round's
/// output is present at the same owner with the same value and absent
/// everywhere else, and every location ends with the same stores.
pub fn differential<T>(
    c: &Choreography<(), Located<T>>,
    envs: impl Fn() -> Envs,
    rounds: usize,
    timeout: Duration,
) -> Result<Observed<T>, String>
where
    T: Payload + Clone + PartialEq + Debug + Sync,
{
    let global_envs = envs();
    let cluster = Cluster::new(c, envs(), timeout).map_err(|e| e.to_string())?;
    let mut outputs = vec![];
    for round in 0..rounds {
        let g =
            global_interp(c, &global_envs, ()).map_err(|e| format!("global run failed: {e}"))?;
        let outs = cluster
            .round(())
            .map_err(|e| format!("projected run failed in round {round}: {e}"))?;
        for (l, out) in &outs {
            if l == g.owner() {
                if out != &g {
                    return Err(format!(
                        "round {round}: {l} produced {out:?}, global gave {g:?}"
                    ));
                }
            } else if out.is_present() {
                return Err(format!("round {round}: non-owner {l} holds {out:?}"));
            }
        }
        outputs.push(g);
    }
    let global_stores: BTreeMap<Location, StoreSnapshot> = global_envs
        .iter()
        .map(|(l, e)| (l.clone(), e.stores()))
        .collect();
    let stores = cluster.stores();
    if stores != global_stores {
        return Err(format!(
            "stores differ: projected {stores:?}, global {global_stores:?}"
        ));
    }
    if cluster.transport().pending() != 0 {
        return Err(format!(
            "{} messages left undelivered",
            cluster.transport().pending()
        ));
    }
    Ok(Observed {
        outputs,
        stores,
        traces: cluster.traces(),
    })
}

/// The echo choreography, except that the client's input step reads from
/// `env` (normally a poisoned one) instead of its own environment. Any
/// attempt to run that step is recorded as a fault on `env`.
pub fn echo_reading(
    env: std::sync::Arc<freer_arrows::arrow::HostEnv>,
) -> Choreography<(), Located<String>> {
    let (client, server) = (loc("client"), loc("server"));
    locally0(
        client.clone(),
        HostArrow::new(move |(), _| env.next_input()),
    )
    .then(comm(client.clone(), server.clone()).expect("distinct"))
    .then(comm(server, client).expect("distinct"))
}
