//! The echo and key-value store choreographies.

use std::fmt;

use super::{comm, cond_prime, discard, locally, locally0, wrap, Choreography};
use crate::arrow::{Host, HostArrow, PreArrow};
use crate::either::Either;
use crate::error::Error;
use crate::freer::FreerChoiceArrow;
use crate::location::{loc, Located};
use crate::network::Codec;

/// Store name used by [`handle_request`].
pub const KV_STORE: &str = "kv";

pub const CHOREOGRAPHIES: [&str; 2] = ["echo", "kvs"];

/// A key-value request: `Put <key> <value>` or `Get <key>`.
#[derive(Clone, PartialEq, Eq)]
pub enum Request {
    Put(String, String),
    Get(String),
}

impl fmt::Debug for Request {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl Codec for Request {
    fn encode(&self) -> String {
        match self {
            Request::Put(k, v) => format!("Put {k} {v}"),
            Request::Get(k) => format!("Get {k}"),
        }
    }

    fn decode(text: &str) -> Result<Self, String> {
        let word = |s: &str| !s.is_empty() && !s.contains(char::is_whitespace);
        match text.splitn(3, ' ').collect::<Vec<_>>().as_slice() {
            ["Put", k, v] if word(k) && !v.is_empty() => Ok(Request::Put((*k).into(), (*v).into())),
            ["Get", k] if word(k) => Ok(Request::Get((*k).into())),
            _ => Err(format!(
                "expected `Put <key> <value>` or `Get <key>`, got {text:?}"
            )),
        }
    }
}

/// Reads the next scripted line.
pub fn get_input() -> HostArrow<(), String> {
    HostArrow::read_input()
}

/// Reads and parses the next scripted line.
pub fn get_request() -> HostArrow<(), Request> {
    HostArrow::new(|(), env| {
        let line = env.next_input()?;
        Request::decode(&line).map_err(|reason| Error::Parse {
            input: line,
            reason,
        })
    })
}

/// Applies a request to the local `kv` store. Responds `Ack` to a put, and
/// the value or `NotFound` to a get.
pub fn handle_request() -> HostArrow<Request, String> {
    HostArrow::new(|r, env| match r {
        Request::Put(k, v) => {
            env.store_put(KV_STORE, &k, &v)?;
            Ok("Ack".to_owned())
        }
        Request::Get(k) => Ok(env
            .store_get(KV_STORE, &k)?
            .unwrap_or_else(|| "NotFound".to_owned())),
    })
}

pub fn as_put(r: Request) -> Either<Request, ()> {
    match r {
        Request::Put(..) => Either::Left(r),
        Request::Get(_) => Either::Right(()),
    }
}

/// The client reads a line, sends it to the server, and the server sends
/// it back.
pub fn echo_choreo() -> Choreography<(), Located<String>> {
    let (client, server) = (loc("client"), loc("server"));
    locally0(client.clone(), get_input())
        .then(comm(client.clone(), server.clone()).expect("distinct"))
        .then(comm(server, client).expect("distinct"))
}

/// A client sends a request to a primary server, which applies it and, for
/// puts, replicates it to a backup before responding.
pub fn kvs_choreo() -> Choreography<(), Located<String>> {
    let (client, primary, backup) = (loc("client"), loc("primary"), loc("backup"));
    let replicate = FreerChoiceArrow::hom(wrap::<Request>(primary.clone()))
        .then(comm(primary.clone(), backup.clone()).expect("distinct"))
        .then(locally(backup, handle_request()))
        .then(discard());
    let branch = replicate.fanin(discard());
    locally0(client.clone(), get_request())
        .then(comm(client.clone(), primary.clone()).expect("distinct"))
        .then(
            locally(primary.clone(), handle_request()).fanout(cond_prime(
                primary.clone(),
                Host::arr(as_put),
                branch,
            )),
        )
        .then(FreerChoiceArrow::hom(|(r, ()): (Located<String>, ())| r))
        .then(comm(primary, client).expect("distinct"))
}

/// Looks a choreography up by name.
pub fn by_name(name: &str) -> Option<Choreography<(), Located<String>>> {
    match name {
        "echo" => Some(echo_choreo()),
        "kvs" => Some(kvs_choreo()),
        _ => None,
    }
}
