//! Newline-delimited JSON protocol over TCP.
//!
//! Requests:
//! - `{"type":"init","session":..,"model":..,"kind":"ssco","algorithm":{"alg":..},"samples":16,"seed":0,"prefix":[..]}`
//! - `{"type":"step","session":..,"load":[..],"predictions":[[[..]]]}`
//!
//! Replies are `{"type":"result",..}` or `{"type":"error","error":code,"message":..}`.
//! Sessions outlive the connection that created them.

use super::session::{CostSoFar, StreamSession};
use crate::error::{Result, SocoError};
use crate::model::{DataCenterModel, InstanceKind, LoadProfile, OnlineInput, DEFAULT_PROFILE_SAMPLES};
use crate::online::OnlineSpec;
use crate::problem::Config;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::{Arc, Mutex};

/// Environment variable holding the default bind address.
pub const BIND_ENV: &str = "SOCO_BIND";
pub const DEFAULT_BIND: &str = "127.0.0.1:7878";

fn default_samples() -> usize {
    DEFAULT_PROFILE_SAMPLES
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Request {
    Init {
        session: String,
        model: DataCenterModel,
        kind: InstanceKind,
        algorithm: OnlineSpec,
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default)]
        seed: u64,
        /// Recorded inputs streamed before the first live step.
        #[serde(default)]
        prefix: Vec<OnlineInput>,
    },
    Step {
        session: String,
        load: LoadProfile,
        #[serde(default)]
        predictions: Vec<Vec<Vec<f64>>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Reply {
    Result {
        session: String,
        /// Last streamed slot (0 before the first step).
        slot: usize,
        config: Option<Config>,
        cost: CostSoFar,
    },
    Error {
        error: String,
        message: String,
    },
}

impl Reply {
    fn error(e: &SocoError) -> Self {
        Reply::Error { error: e.code().to_string(), message: e.to_string() }
    }
}

type Sessions = Arc<Mutex<HashMap<String, Arc<Mutex<StreamSession>>>>>;

/// Session registry shared by all connections.
#[derive(Clone, Default)]
pub struct Server {
    sessions: Sessions,
}

impl Server {
    pub fn new() -> Self {
        Self::default()
    }

    /// Answers one request line.
    pub fn handle_line(&self, line: &str) -> Reply {
        let request: Request = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => return Reply::error(&SocoError::Protocol(format!("malformed request: {e}"))),
        };
        self.handle(request).unwrap_or_else(|e| Reply::error(&e))
    }

    pub fn handle(&self, request: Request) -> Result<Reply> {
        match request {
            Request::Init { session, model, kind, algorithm, samples, seed, prefix } => {
                let mut s = StreamSession::new(model, kind, algorithm, samples, seed)?;
                let last = s.replay(prefix)?;
                let reply = Reply::Result {
                    session: session.clone(),
                    slot: s.next_slot() - 1,
                    config: last.map(|o| o.config),
                    cost: s.cost(),
                };
                self.lock_registry().insert(session, Arc::new(Mutex::new(s)));
                log::info!("session initialized");
                Ok(reply)
            }
            Request::Step { session, load, predictions } => {
                let handle = self
                    .lock_registry()
                    .get(&session)
                    .cloned()
                    .ok_or_else(|| SocoError::UnknownSession(session.clone()))?;
                // Steps of one session are serialized by its own lock; other sessions proceed.
                let mut s = handle.lock().map_err(|_| SocoError::Protocol("session state is poisoned".into()))?;
                let out = s.step(load, predictions)?;
                Ok(Reply::Result { session, slot: out.slot, config: Some(out.config), cost: out.cost })
            }
        }
    }

    fn lock_registry(&self) -> std::sync::MutexGuard<'_, HashMap<String, Arc<Mutex<StreamSession>>>> {
        self.sessions.lock().unwrap_or_else(|p| p.into_inner())
    }

    /// Serves one connection until the peer closes it.
    pub fn handle_connection(&self, stream: TcpStream) -> Result<()> {
        let peer = stream.peer_addr().ok();
        let mut writer = stream.try_clone().map_err(|e| SocoError::Io(e.to_string()))?;
        for line in BufReader::new(stream).lines() {
            let line = line.map_err(|e| SocoError::Io(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let reply = self.handle_line(&line);
            let mut text = serde_json::to_string(&reply).map_err(|e| SocoError::Io(e.to_string()))?;
            text.push('\n');
            writer.write_all(text.as_bytes()).map_err(|e| SocoError::Io(e.to_string()))?;
        }
        log::debug!("connection {peer:?} closed");
        Ok(())
    }

    /// Accepts connections forever, one thread per connection.
    pub fn run(&self, listener: TcpListener) -> Result<()> {
        for stream in listener.incoming() {
            let stream = stream.map_err(|e| SocoError::Io(e.to_string()))?;
            let server = self.clone();
            std::thread::spawn(move || {
                if let Err(e) = server.handle_connection(stream) {
                    log::warn!("connection failed: {e}");
                }
            });
        }
        Ok(())
    }
}

/// Bind address from the argument, the environment or the default.
pub fn bind_address(arg: Option<&str>) -> String {
    arg.map(str::to_string)
        .or_else(|| std::env::var(BIND_ENV).ok())
        .unwrap_or_else(|| DEFAULT_BIND.to_string())
}

pub fn bind(addr: &str) -> Result<(TcpListener, SocketAddr)> {
    let listener = TcpListener::bind(addr).map_err(|e| SocoError::Io(format!("{addr}: {e}")))?;
    let local = listener.local_addr().map_err(|e| SocoError::Io(e.to_string()))?;
    Ok((listener, local))
}

pub fn serve(addr: &str) -> Result<()> {
    let (listener, local) = bind(addr)?;
    log::info!("listening on {local}");
    Server::new().run(listener)
}
