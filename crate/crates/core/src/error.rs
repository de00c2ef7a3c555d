use crate::location::Location;

/// Errors raised while building or evaluating programs.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid location name {0:?}")]
    InvalidLocation(String),
    #[error("a location cannot communicate with itself ({0})")]
    SelfCommunication(Location),
    #[error("branch result owner {owner} does not take part in the conditional")]
    NonParticipantOwner { owner: Location },

    #[error("input script exhausted at {0}")]
    ScriptExhausted(Location),
    #[error("value owned by {owner} unwrapped at {at}")]
    WrongLocation { owner: Location, at: Location },
    #[error("value at {owner} has no payload")]
    AbsentPayload { owner: Location },
    #[error("no scripted response for {url}")]
    NoScriptedResponse { url: String },
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("environment is poisoned; attempted {0}")]
    Poisoned(String),
    #[error("iteration cap of {0} body passes exceeded")]
    IterationCap(usize),

    #[error("decode failure on message from {src} (seq {seq}): {reason}")]
    Decode {
        src: Location,
        seq: u64,
        reason: String,
    },
    #[error("out-of-order message from {src}: expected seq {expected}, got {got}")]
    Sequence {
        src: Location,
        expected: u64,
        got: u64,
    },
    #[error("expected a {expected} message from {src}, got {got}")]
    MessageKind {
        src: Location,
        expected: String,
        got: String,
    },
    #[error("unknown location {0}")]
    UnknownLocation(Location),
    #[error("timed out waiting for a message from {src} at {at}")]
    Timeout { src: Location, at: Location },
    #[error("connection to {peer} failed: {reason}")]
    Connection { peer: Location, reason: String },
    #[error("malformed frame: {0}")]
    MalformedFrame(String),
    #[error("endpoint config: {0}")]
    Config(String),
    #[error("{at} stopped because another endpoint failed")]
    Aborted { at: Location },
    #[error("endpoint {0} did not finish")]
    EndpointFailed(Location),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
