//! Endpoint programs: projection from choreographies, static analysis of
//! the projected programs, and their execution over a transport.
//!
//! [`epp`] translates a choreography into the program one location runs.
//! It is an ordinary `interp` into [`FreerChoice<NetworkOp>`], so it never
//! runs a host effect; [`collect`] and [`partners`] then read off what the
//! endpoint will do.

mod codec;
mod config;
mod runtime;
pub mod transport;

use std::collections::BTreeSet;
use std::fmt;

pub use codec::Codec;
pub use config::EndpointConfig;
pub use runtime::{
    envs_with_scripts, global_interp, run_endpoint, Cluster, Endpoint, Envs, TraceEntry,
    DEFAULT_TIMEOUT,
};
pub use transport::{InMemoryTransport, Message, MessageKind, TcpTransport, Transport};

use crate::arrow::{HostArrow, Payload};
use crate::choreo::{ChoreoOp, Choreography, Decoder, Encoder, Splitter};
use crate::freer::{FreerChoice, FreerChoiceArrow, MonoidSpec, Op, Reified, Val};
use crate::location::Location;

/// The endpoint effect signature.
pub enum NetworkOp {
    /// A local step.
    Run(HostArrow<Val, Val>),
    Send {
        dst: Location,
        encode: Encoder,
    },
    Recv {
        src: Location,
        kind: MessageKind,
        decode: Decoder,
    },
    /// Sends the unwrapped scrutinee of a conditional to each target, in
    /// location order, and keeps it locally.
    BCast {
        targets: BTreeSet<Location>,
        split: Splitter,
    },
}

pub type NetworkProgram<B, A> = FreerChoiceArrow<NetworkOp, B, A>;

/// What one endpoint stage does, as seen by static analysis.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Event {
    LocalStep,
    Sent(Location),
    Received(Location),
    Broadcast(BTreeSet<Location>),
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::LocalStep => f.write_str("LocalStep"),
            Event::Sent(l) => write!(f, "Sent({l})"),
            Event::Received(l) => write!(f, "Received({l})"),
            Event::Broadcast(ls) => write!(f, "Broadcast({ls:?})"),
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Event {
    pub fn locations(&self) -> BTreeSet<Location> {
        match self {
            Event::LocalStep => BTreeSet::new(),
            Event::Sent(l) | Event::Received(l) => BTreeSet::from([l.clone()]),
            Event::Broadcast(ls) => ls.clone(),
        }
    }
}

impl NetworkOp {
    pub fn event(&self) -> Event {
        match self {
            NetworkOp::Run(_) => Event::LocalStep,
            NetworkOp::Send { dst, .. } => Event::Sent(dst.clone()),
            NetworkOp::Recv { src, .. } => Event::Received(src.clone()),
            NetworkOp::BCast { targets, .. } => Event::Broadcast(targets.clone()),
        }
    }
}

impl fmt::Debug for NetworkOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkOp::Run(_) => f.write_str("Run"),
            NetworkOp::Send { dst, .. } => write!(f, "Send({dst})"),
            NetworkOp::Recv { src, kind, .. } => write!(f, "Recv({src}, {kind})"),
            NetworkOp::BCast { targets, .. } => write!(f, "BCast({targets:?})"),
        }
    }
}

fn stage(op: NetworkOp) -> NetworkProgram<Val, Val> {
    FreerChoiceArrow::embed(Op::declare(op))
}

fn pure(f: impl Fn() -> Val + Send + Sync + 'static) -> NetworkProgram<Val, Val> {
    FreerChoiceArrow::hom(move |_| f())
}

fn project(op: &ChoreoOp, role: &Location) -> NetworkProgram<Val, Val> {
    match op {
        ChoreoOp::Local(op) if &op.loc == role => stage(NetworkOp::Run(op.run.clone())),
        ChoreoOp::Local(op) => {
            let absent = op.absent.clone();
            pure(move || absent())
        }
        ChoreoOp::Comm(op) if &op.src == role => {
            // the send unwraps its own input, so no separate local step
            let absent = op.absent.clone();
            stage(NetworkOp::Send {
                dst: op.dst.clone(),
                encode: op.encode.clone(),
            })
            .then(pure(move || absent()))
        }
        ChoreoOp::Comm(op) if &op.dst == role => stage(NetworkOp::Recv {
            src: op.src.clone(),
            kind: MessageKind::Data,
            decode: op.decode.clone(),
        }),
        ChoreoOp::Comm(op) => {
            let absent = op.absent.clone();
            pure(move || absent())
        }
        ChoreoOp::Cond(op) if op.participants.contains(role) => {
            let sub = epp(&op.sub, role);
            let head = if &op.loc == role {
                let targets: BTreeSet<Location> = op
                    .participants
                    .iter()
                    .filter(|l| *l != role)
                    .cloned()
                    .collect();
                if targets.is_empty() {
                    let unwrap = op.unwrap.clone();
                    stage(NetworkOp::Run(HostArrow::new(move |v: Val, env| {
                        unwrap(v, env.location())
                    })))
                } else {
                    stage(NetworkOp::BCast {
                        targets,
                        split: op.split.clone(),
                    })
                }
            } else {
                stage(NetworkOp::Recv {
                    src: op.loc.clone(),
                    kind: MessageKind::Choice,
                    decode: op.decode.clone(),
                })
            };
            head.then(sub)
        }
        ChoreoOp::Cond(op) => {
            let outside = op.outside.clone();
            pure(move || outside())
        }
    }
}

/// Endpoint projection: the program `role` runs for its part of `c`.
pub fn epp<B: Payload, A: Payload>(
    c: &Choreography<B, A>,
    role: &Location,
) -> NetworkProgram<B, A> {
    c.interp::<FreerChoice<NetworkOp>>(|op: &ChoreoOp| project(op, role))
}

/// The events of every stage in program order. Stages inside either arm
/// of a branch are all listed.
pub fn collect<B, A>(p: &NetworkProgram<B, A>) -> Vec<Event> {
    p.approximate(|op: &NetworkOp| vec![op.event()], &MonoidSpec::list())
}

/// Every location the endpoint may exchange messages with.
pub fn partners<B, A>(p: &NetworkProgram<B, A>) -> BTreeSet<Location> {
    collect(p).iter().flat_map(Event::locations).collect()
}

/// Target sets of the endpoint's broadcasts, in program order.
pub fn broadcast_targets<B, A>(p: &NetworkProgram<B, A>) -> Vec<BTreeSet<Location>> {
    collect(p)
        .into_iter()
        .filter_map(|e| match e {
            Event::Broadcast(ts) => Some(ts),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;
    use std::time::Duration;

    use super::*;
    use crate::arrow::HostEnv;
    use crate::choreo::{echo_choreo, kvs_choreo, KV_STORE};
    use crate::error::Error;
    use crate::location::{loc, Located};

    fn envs(names: &[&str], scripts: &[(&str, &[&str])]) -> Envs {
        let scripts: BTreeMap<Location, Vec<String>> = scripts
            .iter()
            .map(|(l, lines)| (loc(l), lines.iter().map(|s| s.to_string()).collect()))
            .collect();
        envs_with_scripts(names.iter().map(|n| loc(n)), &scripts)
    }

    #[test]
    fn echo_projections() {
        use Event::*;
        let c = echo_choreo();
        let client = epp(&c, &loc("client"));
        assert_eq!(
            collect(&client),
            vec![LocalStep, Sent(loc("server")), Received(loc("server"))]
        );
        assert_eq!(collect(&client).len(), client.count());
        assert_eq!(partners(&client), BTreeSet::from([loc("server")]));
        let server = epp(&c, &loc("server"));
        assert_eq!(
            collect(&server),
            vec![Received(loc("client")), Sent(loc("client"))]
        );
        assert!(collect(&epp(&c, &loc("bystander"))).is_empty());
    }

    #[test]
    fn kvs_projections() {
        let c = kvs_choreo();
        let primary = epp(&c, &loc("primary"));
        assert_eq!(
            broadcast_targets(&primary),
            vec![BTreeSet::from([loc("backup")])]
        );
        let events = collect(&primary);
        let bcast = events
            .iter()
            .position(|e| matches!(e, Event::Broadcast(_)))
            .unwrap();
        let to_client = events
            .iter()
            .position(|e| e == &Event::Sent(loc("client")))
            .unwrap();
        assert_eq!(to_client, events.len() - 1);
        assert!(bcast < to_client);
        assert_eq!(
            partners(&epp(&c, &loc("client"))),
            BTreeSet::from([loc("primary")])
        );
        assert!(broadcast_targets(&epp(&c, &loc("backup"))).is_empty());
    }

    #[test]
    fn echo_round() {
        let e = envs(&["client", "server"], &[("client", &["hello"])]);
        let cluster = Cluster::new(&echo_choreo(), e, DEFAULT_TIMEOUT).unwrap();
        let out = cluster.round(()).unwrap();
        assert_eq!(
            out[&loc("client")],
            Located::present(loc("client"), "hello".to_string())
        );
        assert!(!out[&loc("server")].is_present());
        let g = envs(&["client", "server"], &[("client", &["hello"])]);
        assert_eq!(
            global_interp(&echo_choreo(), &g, ()).unwrap(),
            out[&loc("client")]
        );
    }

    #[test]
    fn kvs_rounds_replicate() {
        let e = envs(
            &["client", "primary", "backup"],
            &[("client", &["Put k v", "Get k"])],
        );
        let cluster = Cluster::new(&kvs_choreo(), e, DEFAULT_TIMEOUT).unwrap();
        let client = loc("client");
        let mut responses = vec![];
        for round in 1..=2 {
            let out = cluster.round(()).unwrap();
            responses.push(out[&client].clone().unwrap_at(&client).unwrap());
            assert_eq!(cluster.transport().delivered_to(&client), round);
        }
        assert_eq!(responses, ["Ack", "v"]);
        let stores = cluster.stores();
        let kv = BTreeMap::from([("k".to_string(), "v".to_string())]);
        assert_eq!(stores[&loc("primary")][KV_STORE], kv);
        assert_eq!(stores[&loc("backup")][KV_STORE], kv);
        assert!(stores[&client].is_empty());
    }

    #[test]
    fn projection_runs_no_effects() {
        use crate::choreo::{comm, cond_prime, locally, locally0};
        let env = Arc::new(HostEnv::poisoned(loc("a")));
        let touch = |env: &Arc<HostEnv>| {
            let env = env.clone();
            HostArrow::new(move |x: i64, _| env.next_input().map(|_| x))
        };
        let sub = FreerChoiceArrow::hom(crate::choreo::wrap::<i64>(loc("a")))
            .then(locally(loc("a"), touch(&env)))
            .then(comm(loc("a"), loc("b")).unwrap())
            .then(FreerChoiceArrow::hom(|_| ()));
        let c = locally0(
            loc("a"),
            HostArrow::new({
                let env = env.clone();
                move |(), _| env.next_input().map(|_| 1i64)
            }),
        )
        .then(cond_prime(loc("a"), touch(&env), sub));
        for role in ["a", "b", "c"] {
            let p = epp(&c, &loc(role));
            let _ = (p.render(), collect(&p), partners(&p));
        }
        assert_eq!(env.fault_count(), 0);
        assert!(touch(&env).run(1, &HostEnv::new(loc("a"))).is_err());
        assert_eq!(env.fault_count(), 1);
    }

    #[test]
    fn decode_failure_names_source() {
        let t: Arc<dyn Transport> =
            Arc::new(InMemoryTransport::new([loc("client"), loc("server")]));
        let ep = Endpoint::new(loc("server"), t.clone()).unwrap();
        t.send(Message {
            src: loc("client"),
            dst: loc("server"),
            seq: 0,
            kind: MessageKind::Data,
            payload: "x".into(),
        })
        .unwrap();
        let c = crate::choreo::comm::<i64>(loc("client"), loc("server")).unwrap();
        let p = epp(&c, &loc("server"));
        let err = run_endpoint(
            &p,
            &ep,
            &HostEnv::new(loc("server")),
            Located::absent(loc("client")),
        );
        assert!(matches!(err, Err(Error::Decode { src, seq: 0, .. }) if src == loc("client")));
    }

    #[test]
    fn failed_round_stops_the_other_endpoints() {
        // No client input: the client fails at once and the server, which
        // would otherwise wait for the full timeout, is stopped.
        let cluster = Cluster::new(
            &echo_choreo(),
            envs(&["client", "server"], &[]),
            Duration::from_secs(30),
        )
        .unwrap();
        let start = std::time::Instant::now();
        assert_eq!(
            cluster.round(()),
            Err(Error::ScriptExhausted(loc("client")))
        );
        assert!(start.elapsed() < Duration::from_secs(5));
    }
}
