use std::collections::{BTreeMap, VecDeque};
use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::{Arc, Condvar, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use super::{Message, Transport};
use crate::error::{Error, Result};
use crate::location::Location;
use crate::network::EndpointConfig;

/// One listening socket per endpoint; frames are single JSON lines.
///
/// Outbound connections are opened on first use and kept. While a peer is
/// not yet listening, connecting is retried until the connect timeout.
pub struct TcpTransport {
    me: Location,
    config: EndpointConfig,
    inbox: Arc<Inbox>,
    outbound: Mutex<BTreeMap<Location, TcpStream>>,
    recv_timeout: Option<Duration>,
    connect_timeout: Duration,
}

#[derive(Default)]
struct Inbox {
    state: Mutex<InboxState>,
    arrived: Condvar,
}

#[derive(Default)]
struct InboxState {
    queues: BTreeMap<Location, VecDeque<Message>>,
    faults: Vec<Error>,
}

impl Inbox {
    fn push(&self, item: Result<Message>) {
        let mut s = self.state.lock().unwrap();
        match item {
            Ok(m) => s.queues.entry(m.src.clone()).or_default().push_back(m),
            Err(e) => s.faults.push(e),
        }
        drop(s);
        self.arrived.notify_all();
    }
}

impl TcpTransport {
    /// Binds `me`'s address from `config` and starts accepting peers.
    pub fn bind(config: EndpointConfig, me: Location) -> Result<Self> {
        let addr = config.address(&me)?.to_owned();
        let listener = TcpListener::bind(&addr).map_err(|e| Error::Connection {
            peer: me.clone(),
            reason: format!("bind {addr}: {e}"),
        })?;
        let inbox = Arc::new(Inbox::default());
        let acceptor_inbox = inbox.clone();
        let owner = me.clone();
        thread::spawn(move || {
            for stream in listener.incoming().flatten() {
                let inbox = acceptor_inbox.clone();
                let owner = owner.clone();
                thread::spawn(move || read_frames(stream, &owner, &inbox));
            }
        });
        Ok(TcpTransport {
            me,
            config,
            inbox,
            outbound: Mutex::new(BTreeMap::new()),
            recv_timeout: None,
            connect_timeout: Duration::from_secs(5),
        })
    }

    pub fn with_recv_timeout(mut self, t: Duration) -> Self {
        self.recv_timeout = Some(t);
        self
    }

    pub fn with_connect_timeout(mut self, t: Duration) -> Self {
        self.connect_timeout = t;
        self
    }

    fn connect(&self, peer: &Location) -> Result<TcpStream> {
        let addr = self.config.address(peer)?;
        let deadline = Instant::now() + self.connect_timeout;
        loop {
            match TcpStream::connect(addr) {
                Ok(s) => {
                    let _ = s.set_nodelay(true);
                    return Ok(s);
                }
                Err(e) if Instant::now() >= deadline => {
                    return Err(Error::Connection {
                        peer: peer.clone(),
                        reason: e.to_string(),
                    })
                }
                Err(_) => thread::sleep(Duration::from_millis(25)),
            }
        }
    }
}

fn read_frames(stream: TcpStream, me: &Location, inbox: &Inbox) {
    for line in BufReader::new(stream).lines() {
        let Ok(line) = line else { return };
        if line.is_empty() {
            continue;
        }
        let item = match serde_json::from_str::<Message>(&line) {
            Ok(m) if &m.dst == me => Ok(m),
            Ok(m) => Err(Error::MalformedFrame(format!(
                "frame for {} arrived at {me}",
                m.dst
            ))),
            Err(e) => Err(Error::MalformedFrame(format!("{e} in {line:?}"))),
        };
        inbox.push(item);
    }
}

impl Transport for TcpTransport {
    fn register(&self, loc: &Location) -> Result<()> {
        self.config.address(loc).map(|_| ())
    }

    fn send(&self, msg: Message) -> Result<()> {
        let peer = msg.dst.clone();
        let mut line = serde_json::to_string(&msg).expect("frames serialize");
        line.push('\n');
        let mut out = self.outbound.lock().unwrap();
        if !out.contains_key(&peer) {
            let s = self.connect(&peer)?;
            out.insert(peer.clone(), s);
        }
        let stream = out.get_mut(&peer).expect("inserted above");
        stream
            .write_all(line.as_bytes())
            .and_then(|()| stream.flush())
            .map_err(|e| Error::Connection {
                peer: peer.clone(),
                reason: e.to_string(),
            })
    }

    fn recv(&self, at: &Location, from: &Location) -> Result<Message> {
        if at != &self.me {
            return Err(Error::UnknownLocation(at.clone()));
        }
        self.config.address(from)?;
        let deadline = self.recv_timeout.map(|t| Instant::now() + t);
        let mut s = self.inbox.state.lock().unwrap();
        loop {
            if let Some(e) = s.faults.first() {
                return Err(e.clone());
            }
            if let Some(m) = s.queues.get_mut(from).and_then(VecDeque::pop_front) {
                return Ok(m);
            }
            s = match deadline {
                None => self.inbox.arrived.wait(s).unwrap(),
                Some(d) => {
                    let now = Instant::now();
                    if now >= d {
                        return Err(Error::Timeout {
                            src: from.clone(),
                            at: at.clone(),
                        });
                    }
                    self.inbox.arrived.wait_timeout(s, d - now).unwrap().0
                }
            };
        }
    }
}
