use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

use super::{Message, Transport};
use crate::error::{Error, Result};
use crate::location::Location;

/// Queues in shared memory, one per directed pair.
#[derive(Default)]
pub struct InMemoryTransport {
    state: Mutex<State>,
    arrived: Condvar,
    timeout: Option<Duration>,
}

#[derive(Default)]
struct State {
    registered: BTreeSet<Location>,
    queues: BTreeMap<(Location, Location), VecDeque<Message>>,
    delivered: BTreeMap<Location, usize>,
    aborted: bool,
}

impl InMemoryTransport {
    pub fn new<I: IntoIterator<Item = Location>>(locations: I) -> Self {
        let t = InMemoryTransport::default();
        t.state.lock().unwrap().registered.extend(locations);
        t
    }

    /// Makes `recv` fail with [`Error::Timeout`] instead of waiting longer
    /// than `timeout`.
    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = Some(timeout);
        self
    }

    /// Messages handed to `at` by `recv` so far.
    pub fn delivered_to(&self, at: &Location) -> usize {
        self.state
            .lock()
            .unwrap()
            .delivered
            .get(at)
            .copied()
            .unwrap_or(0)
    }

    /// Messages sent but not yet received.
    pub fn pending(&self) -> usize {
        self.state
            .lock()
            .unwrap()
            .queues
            .values()
            .map(VecDeque::len)
            .sum()
    }

    /// Makes every waiting and future `recv` that finds its queue empty
    /// fail with [`Error::Aborted`]. Used to stop the other endpoints once
    /// one has failed.
    pub fn abort(&self) {
        self.state.lock().unwrap().aborted = true;
        self.arrived.notify_all();
    }

    fn known(state: &State, l: &Location) -> Result<()> {
        if state.registered.contains(l) {
            Ok(())
        } else {
            Err(Error::UnknownLocation(l.clone()))
        }
    }
}

impl Transport for InMemoryTransport {
    fn register(&self, loc: &Location) -> Result<()> {
        self.state.lock().unwrap().registered.insert(loc.clone());
        Ok(())
    }

    fn send(&self, msg: Message) -> Result<()> {
        let mut state = self.state.lock().unwrap();
        Self::known(&state, &msg.src)?;
        Self::known(&state, &msg.dst)?;
        state
            .queues
            .entry((msg.src.clone(), msg.dst.clone()))
            .or_default()
            .push_back(msg);
        drop(state);
        self.arrived.notify_all();
        Ok(())
    }

    fn recv(&self, at: &Location, from: &Location) -> Result<Message> {
        let deadline = self.timeout.map(|t| Instant::now() + t);
        let mut state = self.state.lock().unwrap();
        Self::known(&state, at)?;
        Self::known(&state, from)?;
        let key = (from.clone(), at.clone());
        loop {
            if let Some(msg) = state.queues.get_mut(&key).and_then(VecDeque::pop_front) {
                *state.delivered.entry(at.clone()).or_default() += 1;
                return Ok(msg);
            }
            if state.aborted {
                return Err(Error::Aborted { at: at.clone() });
            }
            state = match deadline {
                None => self.arrived.wait(state).unwrap(),
                Some(d) => {
                    let now = Instant::now();
                    if now >= d {
                        return Err(Error::Timeout {
                            src: from.clone(),
                            at: at.clone(),
                        });
                    }
                    self.arrived.wait_timeout(state, d - now).unwrap().0
                }
            };
        }
    }
}
