//! Running endpoint programs, and the sequential reference interpreter.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use super::{
    epp, Event, InMemoryTransport, Message, MessageKind, NetworkOp, NetworkProgram, Transport,
};
use crate::arrow::{Host, HostArrow, HostEnv, Payload, StoreSnapshot};
use crate::choreo::{participants, ChoreoOp, Choreography};
use crate::error::{Error, Result};
use crate::freer::{from_val, into_val, Val};
use crate::location::{loc, Location};

/// Host environments by location.
pub type Envs = BTreeMap<Location, Arc<HostEnv>>;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(5);

/// An executed endpoint stage. `seqs` lists the sequence numbers of the
/// messages it sent or received, one per target for a broadcast.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub event: Event,
    pub seqs: Vec<u64>,
}

/// A location's view of the network: its sequence counters and the trace
/// of what it has executed. Counters persist across runs, so one endpoint
/// can serve several rounds over the same transport.
#[derive(Clone)]
pub struct Endpoint {
    inner: Arc<Inner>,
}

struct Inner {
    role: Location,
    transport: Arc<dyn Transport>,
    sent: Mutex<BTreeMap<Location, u64>>,
    received: Mutex<BTreeMap<Location, u64>>,
    trace: Mutex<Vec<TraceEntry>>,
}

impl Endpoint {
    pub fn new(role: Location, transport: Arc<dyn Transport>) -> Result<Self> {
        transport.register(&role)?;
        Ok(Endpoint {
            inner: Arc::new(Inner {
                role,
                transport,
                sent: Mutex::default(),
                received: Mutex::default(),
                trace: Mutex::default(),
            }),
        })
    }

    pub fn role(&self) -> &Location {
        &self.inner.role
    }

    pub fn trace(&self) -> Vec<TraceEntry> {
        self.inner.trace.lock().unwrap().clone()
    }

    fn log(&self, event: Event, seqs: Vec<u64>) {
        self.inner
            .trace
            .lock()
            .unwrap()
            .push(TraceEntry { event, seqs });
    }

    fn send(&self, dst: &Location, kind: MessageKind, payload: String) -> Result<u64> {
        let seq = {
            let mut sent = self.inner.sent.lock().unwrap();
            let n = sent.entry(dst.clone()).or_insert(0);
            let seq = *n;
            *n += 1;
            seq
        };
        self.inner.transport.send(Message {
            src: self.inner.role.clone(),
            dst: dst.clone(),
            seq,
            kind,
            payload,
        })?;
        Ok(seq)
    }

    fn recv(&self, src: &Location, kind: MessageKind) -> Result<(u64, String)> {
        let msg = self.inner.transport.recv(&self.inner.role, src)?;
        let mut received = self.inner.received.lock().unwrap();
        let expected = received.entry(src.clone()).or_insert(0);
        if msg.seq != *expected {
            return Err(Error::Sequence {
                src: src.clone(),
                expected: *expected,
                got: msg.seq,
            });
        }
        if msg.kind != kind {
            return Err(Error::MessageKind {
                src: src.clone(),
                expected: kind.to_string(),
                got: msg.kind.to_string(),
            });
        }
        *expected += 1;
        Ok((msg.seq, msg.payload))
    }

    // Network ops are declared with erased input and output, so the values
    // reaching these arrows carry one more box than the op's real types.
    fn handle(&self, op: &NetworkOp) -> HostArrow<Val, Val> {
        let ep = self.clone();
        match op {
            NetworkOp::Run(inner) => {
                let inner = inner.clone();
                HostArrow::new(move |v: Val, env| {
                    let out = inner.run(from_val::<Val>(v), env)?;
                    ep.log(Event::LocalStep, vec![]);
                    Ok(into_val(out))
                })
            }
            NetworkOp::Send { dst, encode } => {
                let (dst, encode) = (dst.clone(), encode.clone());
                HostArrow::new(move |v: Val, _| {
                    let payload = encode(from_val::<Val>(v), ep.role())?;
                    let seq = ep.send(&dst, MessageKind::Data, payload)?;
                    ep.log(Event::Sent(dst.clone()), vec![seq]);
                    Ok(into_val(into_val(())))
                })
            }
            NetworkOp::Recv { src, kind, decode } => {
                let (src, kind, decode) = (src.clone(), *kind, decode.clone());
                HostArrow::new(move |_: Val, _| {
                    let (seq, payload) = ep.recv(&src, kind)?;
                    let v = decode(&payload).map_err(|reason| Error::Decode {
                        src: src.clone(),
                        seq,
                        reason,
                    })?;
                    ep.log(Event::Received(src.clone()), vec![seq]);
                    Ok(into_val(v))
                })
            }
            NetworkOp::BCast { targets, split } => {
                let (targets, split) = (targets.clone(), split.clone());
                HostArrow::new(move |v: Val, _| {
                    let (payload, local) = split(from_val::<Val>(v), ep.role())?;
                    let seqs = targets
                        .iter()
                        .map(|t| ep.send(t, MessageKind::Choice, payload.clone()))
                        .collect::<Result<Vec<_>>>()?;
                    ep.log(Event::Broadcast(targets.clone()), seqs);
                    Ok(into_val(local))
                })
            }
        }
    }
}

/// Runs `p` as `endpoint`'s role. `env` must belong to the same location.
pub fn run_endpoint<B: Payload, A: Payload>(
    p: &NetworkProgram<B, A>,
    endpoint: &Endpoint,
    env: &HostEnv,
    input: B,
) -> Result<A> {
    if env.location() != endpoint.role() {
        return Err(Error::WrongLocation {
            owner: endpoint.role().clone(),
            at: env.location().clone(),
        });
    }
    let ep = endpoint.clone();
    p.interp::<Host>(move |op: &NetworkOp| ep.handle(op))
        .run(input, env)
}

fn global_op(op: &ChoreoOp, envs: &Arc<Envs>) -> HostArrow<Val, Val> {
    let env_of = |l: &Location| {
        envs.get(l)
            .cloned()
            .ok_or_else(|| Error::UnknownLocation(l.clone()))
    };
    match op {
        ChoreoOp::Local(op) => {
            let env = env_of(&op.loc);
            let run = op.run.clone();
            HostArrow::new(move |v, _| run.run(v, env.as_ref().map_err(Clone::clone)?))
        }
        ChoreoOp::Comm(op) => {
            let (src, encode, decode) = (op.src.clone(), op.encode.clone(), op.decode.clone());
            HostArrow::new(move |v, _| {
                let text = encode(v, &src)?;
                decode(&text).map_err(|reason| Error::Decode {
                    src: src.clone(),
                    seq: 0,
                    reason,
                })
            })
        }
        ChoreoOp::Cond(op) => {
            let inner = envs.clone();
            let sub = op
                .sub
                .interp::<Host>(move |o: &ChoreoOp| global_op(o, &inner));
            let (owner, unwrap) = (op.loc.clone(), op.unwrap.clone());
            HostArrow::new(move |v, env| sub.run(unwrap(v, &owner)?, env))
        }
    }
}

/// Runs a choreography directly, one step at a time, with no transport.
/// Local steps use the environment of their location in `envs`;
/// communicated values still go through their codec.
pub fn global_interp<B: Payload, A: Payload>(
    c: &Choreography<B, A>,
    envs: &Envs,
    input: B,
) -> Result<A> {
    let envs = Arc::new(envs.clone());
    let arrow = c.interp::<Host>(move |op: &ChoreoOp| global_op(op, &envs));
    // every effect resolves its own location, so this env is never touched
    arrow.run(input, &HostEnv::poisoned(loc("global")))
}

/// Every location of a choreography, each on its own thread, over one
/// in-memory transport.
pub struct Cluster<B, A> {
    transport: Arc<InMemoryTransport>,
    endpoints: BTreeMap<Location, Endpoint>,
    programs: BTreeMap<Location, NetworkProgram<B, A>>,
    envs: Envs,
}

impl<B: Payload + Clone + Sync, A: Payload> Cluster<B, A> {
    /// Projects `c` for every location in `envs`, which must cover all of
    /// the choreography's participants. A receive that waits longer than
    /// `timeout` fails the round.
    pub fn new(c: &Choreography<B, A>, envs: Envs, timeout: Duration) -> Result<Self> {
        if let Some(missing) = participants(c).into_iter().find(|l| !envs.contains_key(l)) {
            return Err(Error::UnknownLocation(missing));
        }
        let transport =
            Arc::new(InMemoryTransport::new(envs.keys().cloned()).with_timeout(timeout));
        let mut endpoints = BTreeMap::new();
        let mut programs = BTreeMap::new();
        for l in envs.keys() {
            endpoints.insert(l.clone(), Endpoint::new(l.clone(), transport.clone())?);
            programs.insert(l.clone(), epp(c, l));
        }
        Ok(Cluster {
            transport,
            endpoints,
            programs,
            envs,
        })
    }

    /// Runs every endpoint once on `input` and returns each one's output.
    /// If any endpoint fails, the others are stopped and the error of the
    /// first location (in name order) that failed on its own, rather than
    /// by timing out or being stopped, is returned. A cluster that failed a
    /// round cannot run another.
    pub fn round(&self, input: B) -> Result<BTreeMap<Location, A>> {
        let results: Vec<(Location, Result<A>)> = thread::scope(|s| {
            let handles: Vec<_> = self
                .programs
                .iter()
                .map(|(l, p)| {
                    let (ep, env, x) = (&self.endpoints[l], &self.envs[l], input.clone());
                    let transport = &self.transport;
                    let run = move || {
                        let r = run_endpoint(p, ep, env, x);
                        if r.is_err() {
                            transport.abort();
                        }
                        r
                    };
                    (l.clone(), s.spawn(run))
                })
                .collect();
            handles
                .into_iter()
                .map(|(l, h)| {
                    let r = h
                        .join()
                        .unwrap_or_else(|_| Err(Error::EndpointFailed(l.clone())));
                    (l, r)
                })
                .collect()
        });
        let mut outputs = BTreeMap::new();
        let mut errors = Vec::new();
        for (l, r) in results {
            match r {
                Ok(a) => {
                    outputs.insert(l, a);
                }
                Err(e) => errors.push(e),
            }
        }
        if errors.is_empty() {
            return Ok(outputs);
        }
        let i = errors
            .iter()
            .position(|e| !matches!(e, Error::Timeout { .. } | Error::Aborted { .. }))
            .unwrap_or(0);
        Err(errors.swap_remove(i))
    }

    pub fn envs(&self) -> &Envs {
        &self.envs
    }

    pub fn stores(&self) -> BTreeMap<Location, StoreSnapshot> {
        self.envs
            .iter()
            .map(|(l, e)| (l.clone(), e.stores()))
            .collect()
    }

    pub fn traces(&self) -> BTreeMap<Location, Vec<TraceEntry>> {
        self.endpoints
            .iter()
            .map(|(l, e)| (l.clone(), e.trace()))
            .collect()
    }

    pub fn program(&self, l: &Location) -> Option<&NetworkProgram<B, A>> {
        self.programs.get(l)
    }

    pub fn transport(&self) -> &InMemoryTransport {
        &self.transport
    }
}

/// Fresh environments for `locations`, with input scripts from `scripts`.
pub fn envs_with_scripts<'a>(
    locations: impl IntoIterator<Item = Location>,
    scripts: impl IntoIterator<Item = (&'a Location, &'a Vec<String>)>,
) -> Envs {
    let mut envs: Envs = locations
        .into_iter()
        .map(|l| (l.clone(), Arc::new(HostEnv::new(l))))
        .collect();
    for (l, lines) in scripts {
        envs.entry(l.clone())
            .or_insert_with(|| Arc::new(HostEnv::new(l.clone())))
            .push_script(lines.iter().cloned());
    }
    envs
}
