use std::collections::{BTreeMap, VecDeque};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use super::{Arrow, ArrowChoice, ArrowIterate, Category, Payload, PreArrow};
use crate::either::Either;
use crate::error::{Error, Result};
use crate::location::Location;

/// The host-effect arrow family.
#[derive(Debug, Clone, Copy, Default)]
pub struct Host;

/// A procedure `X -> Y` that may read or write the capabilities of the
/// [`HostEnv`] it is evaluated against, and may fail.
pub struct HostArrow<X, Y>(Arc<dyn Fn(X, &HostEnv) -> Result<Y> + Send + Sync>);

impl<X, Y> Clone for HostArrow<X, Y> {
    fn clone(&self) -> Self {
        HostArrow(Arc::clone(&self.0))
    }
}

impl<X: Payload, Y: Payload> HostArrow<X, Y> {
    pub fn new(f: impl Fn(X, &HostEnv) -> Result<Y> + Send + Sync + 'static) -> Self {
        HostArrow(Arc::new(f))
    }

    pub fn run(&self, x: X, env: &HostEnv) -> Result<Y> {
        (self.0)(x, env)
    }

    pub fn then<Z: Payload>(self, g: HostArrow<Y, Z>) -> HostArrow<X, Z> {
        Host::compose(self, g)
    }
}

impl HostArrow<(), String> {
    /// Reads the next line of the location's input script.
    pub fn read_input() -> Self {
        HostArrow::new(|(), env: &HostEnv| env.next_input())
    }
}

impl Category for Host {
    type Arrow<X: Payload, Y: Payload> = HostArrow<X, Y>;

    fn identity<X: Payload>() -> HostArrow<X, X> {
        HostArrow::new(|x, _| Ok(x))
    }

    fn compose<A: Payload, B: Payload, C: Payload>(
        f: HostArrow<A, B>,
        g: HostArrow<B, C>,
    ) -> HostArrow<A, C> {
        HostArrow::new(move |a, env| g.run(f.run(a, env)?, env))
    }
}

impl PreArrow for Host {
    fn arr<X: Payload, Y: Payload>(f: impl Fn(X) -> Y + Send + Sync + 'static) -> HostArrow<X, Y> {
        HostArrow::new(move |x, _| Ok(f(x)))
    }
}

impl Arrow for Host {
    fn first<B: Payload, C: Payload, D: Payload>(f: HostArrow<B, C>) -> HostArrow<(B, D), (C, D)> {
        HostArrow::new(move |(b, d), env| Ok((f.run(b, env)?, d)))
    }
}

impl ArrowChoice for Host {
    fn left<B: Payload, C: Payload, D: Payload>(
        f: HostArrow<B, C>,
    ) -> HostArrow<Either<B, D>, Either<C, D>> {
        HostArrow::new(move |e, env| match e {
            Either::Left(b) => Ok(Either::Left(f.run(b, env)?)),
            Either::Right(d) => Ok(Either::Right(d)),
        })
    }
}

impl ArrowIterate for Host {
    fn iterate<X: Payload, Z: Payload>(
        body: HostArrow<X, Either<Z, X>>,
        cap: Option<usize>,
    ) -> HostArrow<X, std::result::Result<Z, Error>> {
        HostArrow::new(move |mut x, env| {
            let mut passes = 0usize;
            loop {
                if cap.is_some_and(|c| passes >= c) {
                    return Ok(Err(Error::IterationCap(passes)));
                }
                passes += 1;
                match body.run(x, env)? {
                    Either::Left(z) => return Ok(Ok(z)),
                    Either::Right(next) => x = next,
                }
            }
        })
    }
}

/// Capabilities available to host arrows running at one location: a
/// scripted input queue and named string-to-string stores.
///
/// A poisoned environment refuses every capability access and counts the
/// attempts, which lets tests prove that a transformation never evaluated
/// any host effect.
#[derive(Debug)]
pub struct HostEnv {
    location: Location,
    script: Mutex<VecDeque<String>>,
    stores: Mutex<BTreeMap<String, BTreeMap<String, String>>>,
    poisoned: bool,
    faults: AtomicUsize,
}

/// Snapshot of every named store of one environment.
pub type StoreSnapshot = BTreeMap<String, BTreeMap<String, String>>;

impl HostEnv {
    pub fn new(location: Location) -> Self {
        HostEnv {
            location,
            script: Mutex::new(VecDeque::new()),
            stores: Mutex::new(BTreeMap::new()),
            poisoned: false,
            faults: AtomicUsize::new(0),
        }
    }

    pub fn poisoned(location: Location) -> Self {
        HostEnv {
            poisoned: true,
            ..HostEnv::new(location)
        }
    }

    pub fn with_script<I, S>(self, lines: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.push_script(lines);
        self
    }

    pub fn push_script<I, S>(&self, lines: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut q = self.script.lock().unwrap();
        q.extend(lines.into_iter().map(Into::into));
    }

    pub fn location(&self) -> &Location {
        &self.location
    }

    /// Number of capability accesses refused because the env is poisoned.
    pub fn fault_count(&self) -> usize {
        self.faults.load(Ordering::SeqCst)
    }

    fn guard(&self, what: &str) -> Result<()> {
        if self.poisoned {
            self.faults.fetch_add(1, Ordering::SeqCst);
            return Err(Error::Poisoned(format!("{what} at {}", self.location)));
        }
        Ok(())
    }

    pub fn next_input(&self) -> Result<String> {
        self.guard("input read")?;
        self.script
            .lock()
            .unwrap()
            .pop_front()
            .ok_or_else(|| Error::ScriptExhausted(self.location.clone()))
    }

    pub fn remaining_input(&self) -> usize {
        self.script.lock().unwrap().len()
    }

    pub fn store_put(&self, store: &str, key: &str, value: &str) -> Result<()> {
        self.guard("store write")?;
        self.stores
            .lock()
            .unwrap()
            .entry(store.to_owned())
            .or_default()
            .insert(key.to_owned(), value.to_owned());
        Ok(())
    }

    pub fn store_get(&self, store: &str, key: &str) -> Result<Option<String>> {
        self.guard("store read")?;
        Ok(self
            .stores
            .lock()
            .unwrap()
            .get(store)
            .and_then(|m| m.get(key).cloned()))
    }

    pub fn stores(&self) -> StoreSnapshot {
        self.stores.lock().unwrap().clone()
    }
}
