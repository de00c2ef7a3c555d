//! Reliable, per-directed-pair FIFO message channels.

mod memory;
mod tcp;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use memory::InMemoryTransport;
pub use tcp::TcpTransport;

use crate::error::Result;
use crate::location::Location;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MessageKind {
    /// A communicated value.
    Data,
    /// A branch scrutinee shared by a conditional.
    Choice,
}

impl fmt::Display for MessageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MessageKind::Data => "data",
            MessageKind::Choice => "choice",
        })
    }
}

/// One frame. `seq` counts messages per `(src, dst)` pair from 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub src: Location,
    pub dst: Location,
    pub seq: u64,
    pub kind: MessageKind,
    pub payload: String,
}

pub trait Transport: Send + Sync {
    fn register(&self, loc: &Location) -> Result<()>;

    fn send(&self, msg: Message) -> Result<()>;

    /// Blocks until the next message from `from` to `at` arrives.
    fn recv(&self, at: &Location, from: &Location) -> Result<Message>;
}
