//! Accept loop. Each connection gets its own thread and [`Session`]; raw
//! TCP clients send JSON lines, browsers upgrade to WebSocket on the same
//! port, and other HTTP GETs are answered from the optional static directory.

use super::session::{Session, SessionOptions};
use super::{Envelope, ErrorCode};
use std::io::{self, BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::path::{Component, Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};
use tungstenite::Message;

/// Frames longer than this close the connection.
const MAX_FRAME: usize = 64 << 20;
const MAX_HTTP_HEAD: usize = 16 << 10;

#[derive(Debug, thiserror::Error)]
pub enum ServerError {
    #[error("cannot bind {addr}: {source}")]
    Bind { addr: String, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Debug, Default)]
pub struct ServerOptions {
    pub session: SessionOptions,
    /// Directory served to plain HTTP GET requests (the play client).
    pub static_dir: Option<PathBuf>,
}

pub struct Server {
    listener: TcpListener,
    options: Arc<ServerOptions>,
    next_id: AtomicU64,
}

impl Server {
    pub fn bind(addr: impl ToSocketAddrs + std::fmt::Display, options: ServerOptions) -> Result<Server, ServerError> {
        let listener = TcpListener::bind(&addr).map_err(|source| ServerError::Bind { addr: addr.to_string(), source })?;
        Ok(Server { listener, options: Arc::new(options), next_id: AtomicU64::new(1) })
    }

    pub fn local_addr(&self) -> io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    /// Serves until the listener fails.
    pub fn run(self) -> Result<(), ServerError> {
        for stream in self.listener.incoming() {
            let stream = match stream {
                Ok(s) => s,
                Err(e) => {
                    log::warn!("accept failed: {e}");
                    continue;
                }
            };
            let id = self.next_id.fetch_add(1, Ordering::Relaxed);
            let options = Arc::clone(&self.options);
            thread::spawn(move || {
                let peer = stream.peer_addr().map(|a| a.to_string()).unwrap_or_default();
                log::info!("session {id} opened from {peer}");
                if let Err(e) = connection(stream, id, &options) {
                    log::debug!("session {id}: {e}");
                }
                log::info!("session {id} closed");
            });
        }
        Ok(())
    }

    /// Runs the accept loop on a background thread.
    pub fn spawn(self) -> thread::JoinHandle<Result<(), ServerError>> {
        thread::spawn(move || self.run())
    }
}

/// Binds `addr` and serves forever.
pub fn serve(addr: &str, options: ServerOptions) -> Result<(), ServerError> {
    let server = Server::bind(addr, options)?;
    log::info!("listening on {}", server.local_addr()?);
    server.run()
}

fn connection(stream: TcpStream, id: u64, options: &ServerOptions) -> io::Result<()> {
    stream.set_nodelay(true)?;
    let mut first = [0u8; 4];
    let n = peek_prefix(&stream, &mut first)?;
    let session = Session::new(id, options.session.clone());
    if &first[..n] == b"GET " {
        http(stream, session, options)
    } else {
        lines(stream, session)
    }
}

/// Peeks until `buf` is full, the peer stops sending, or it sends something
/// that cannot start an HTTP GET.
fn peek_prefix(stream: &TcpStream, buf: &mut [u8]) -> io::Result<usize> {
    let deadline = Instant::now() + Duration::from_secs(2);
    loop {
        let n = stream.peek(buf)?;
        if n == 0 || n == buf.len() || !b"GET ".starts_with(&buf[..n]) || Instant::now() > deadline {
            return Ok(n);
        }
        thread::sleep(Duration::from_millis(2));
    }
}

fn is_timeout(e: &io::Error) -> bool {
    matches!(e.kind(), io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut)
}

/// Time left until the next stream frame is due; `None` when not streaming.
fn until_due(session: &Session, last: Instant) -> Option<Duration> {
    session.stream_interval().map(|i| i.saturating_sub(last.elapsed()).max(Duration::from_millis(1)))
}

fn lines(stream: TcpStream, mut session: Session) -> io::Result<()> {
    let mut writer = stream.try_clone()?;
    let mut reader = BufReader::new(stream);
    let mut buf = Vec::new();
    let mut last_frame = Instant::now();
    loop {
        reader.get_ref().set_read_timeout(until_due(&session, last_frame))?;
        match reader.read_until(b'\n', &mut buf) {
            Ok(0) => return Ok(()),
            Ok(_) if buf.last() == Some(&b'\n') => {
                let text = String::from_utf8_lossy(&buf);
                let text = text.trim();
                if !text.is_empty() {
                    writeln!(writer, "{}", session.handle(text).to_line())?;
                }
                buf.clear();
            }
            Ok(_) => return Ok(()),
            Err(e) if is_timeout(&e) => {}
            Err(e) => return Err(e),
        }
        if buf.len() > MAX_FRAME {
            writeln!(writer, "{}", Envelope::error(None, ErrorCode::BadFrame, "frame too long").to_line())?;
            return Ok(());
        }
        if session.stream_interval().is_some_and(|i| last_frame.elapsed() >= i) {
            last_frame = Instant::now();
            if let Some(frame) = session.state_frame() {
                writeln!(writer, "{}", frame.to_line())?;
            }
        }
    }
}

/// A stream that first yields bytes already read from it.
struct Replay {
    prefix: Vec<u8>,
    pos: usize,
    inner: TcpStream,
}

impl Read for Replay {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        if self.pos < self.prefix.len() {
            let n = buf.len().min(self.prefix.len() - self.pos);
            buf[..n].copy_from_slice(&self.prefix[self.pos..self.pos + n]);
            self.pos += n;
            return Ok(n);
        }
        self.inner.read(buf)
    }
}

impl Write for Replay {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.inner.write(buf)
    }
    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

fn http(mut stream: TcpStream, session: Session, options: &ServerOptions) -> io::Result<()> {
    let mut head = Vec::new();
    let mut chunk = [0u8; 1024];
    stream.set_read_timeout(Some(Duration::from_secs(10)))?;
    while !head.windows(4).any(|w| w == b"\r\n\r\n") {
        let n = stream.read(&mut chunk)?;
        if n == 0 || head.len() > MAX_HTTP_HEAD {
            return Ok(());
        }
        head.extend_from_slice(&chunk[..n]);
    }
    stream.set_read_timeout(None)?;
    let text = String::from_utf8_lossy(&head).to_string();
    let upgrade = text.lines().any(|l| {
        let l = l.to_ascii_lowercase();
        l.starts_with("upgrade:") && l.contains("websocket")
    });
    if upgrade {
        let control = stream.try_clone()?;
        let ws = tungstenite::accept(Replay { prefix: head, pos: 0, inner: stream }).map_err(|e| io::Error::other(e.to_string()))?;
        return websocket(ws, control, session);
    }
    let path = text.split_whitespace().nth(1).unwrap_or("/");
    let (status, kind, body) = match options.static_dir.as_deref().and_then(|dir| static_file(dir, path)) {
        Some((kind, body)) => ("200 OK", kind, body),
        None => ("404 Not Found", "text/plain", b"not found\n".to_vec()),
    };
    write!(stream, "HTTP/1.1 {status}\r\nContent-Type: {kind}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n", body.len())?;
    stream.write_all(&body)?;
    stream.flush()
}

fn static_file(dir: &Path, url: &str) -> Option<(&'static str, Vec<u8>)> {
    let path = url.split(['?', '#']).next().unwrap_or("/");
    let rel = Path::new(path.trim_start_matches('/'));
    if rel.components().any(|c| !matches!(c, Component::Normal(_))) {
        return None;
    }
    let mut full = dir.join(rel);
    if full.is_dir() {
        full = full.join("index.html");
    }
    let kind = match full.extension().and_then(|e| e.to_str()).unwrap_or("") {
        "html" => "text/html; charset=utf-8",
        "js" | "mjs" => "text/javascript",
        "css" => "text/css",
        "json" => "application/json",
        "png" => "image/png",
        "svg" => "image/svg+xml",
        "csv" => "text/csv",
        _ => "application/octet-stream",
    };
    std::fs::read(full).ok().map(|b| (kind, b))
}

fn websocket(mut ws: tungstenite::WebSocket<Replay>, control: TcpStream, mut session: Session) -> io::Result<()> {
    let other = |e: tungstenite::Error| io::Error::other(e.to_string());
    let mut last_frame = Instant::now();
    loop {
        control.set_read_timeout(until_due(&session, last_frame))?;
        match ws.read() {
            Ok(Message::Text(text)) => {
                let reply = session.handle(text.as_str()).to_line();
                ws.send(Message::text(reply)).map_err(other)?;
            }
            Ok(Message::Binary(_)) => {
                let reply = Envelope::error(None, ErrorCode::BadFrame, "binary frames are not supported").to_line();
                ws.send(Message::text(reply)).map_err(other)?;
            }
            Ok(Message::Close(_)) => {
                let _ = ws.flush();
                return Ok(());
            }
            Ok(_) => {}
            Err(tungstenite::Error::Io(e)) if is_timeout(&e) => {}
            Err(tungstenite::Error::ConnectionClosed | tungstenite::Error::AlreadyClosed) => return Ok(()),
            Err(e) => return Err(other(e)),
        }
        if session.stream_interval().is_some_and(|i| last_frame.elapsed() >= i) {
            last_frame = Instant::now();
            if let Some(frame) = session.state_frame() {
                ws.send(Message::text(frame.to_line())).map_err(other)?;
            }
        }
    }
}
