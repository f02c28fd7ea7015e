//! Minimal blocking line client, used by tests and tools.

use super::{Envelope, PROTOCOL_VERSION};
use serde_json::{json, Value};
use std::io::{self, BufRead, BufReader, Write};
use std::net::{TcpStream, ToSocketAddrs};

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("malformed message from server: {0}")]
    Decode(#[from] serde_json::Error),
    #[error("connection closed")]
    Closed,
}

pub struct Client {
    reader: BufReader<TcpStream>,
    writer: TcpStream,
    next_seq: u64,
}

impl Client {
    pub fn connect(addr: impl ToSocketAddrs) -> Result<Client, ClientError> {
        let stream = TcpStream::connect(addr)?;
        stream.set_nodelay(true)?;
        Ok(Client { writer: stream.try_clone()?, reader: BufReader::new(stream), next_seq: 1 })
    }

    /// Connects and completes the `hello` handshake.
    pub fn open(addr: impl ToSocketAddrs) -> Result<(Client, Envelope), ClientError> {
        let mut c = Client::connect(addr)?;
        let hello = c.request("hello", json!({ "version": PROTOCOL_VERSION }))?;
        Ok((c, hello))
    }

    pub fn send_raw(&mut self, line: &str) -> Result<(), ClientError> {
        self.writer.write_all(line.as_bytes())?;
        self.writer.write_all(b"\n")?;
        Ok(())
    }

    /// Next message from the server, response or stream frame.
    pub fn receive(&mut self) -> Result<Envelope, ClientError> {
        let mut line = String::new();
        if self.reader.read_line(&mut line)? == 0 {
            return Err(ClientError::Closed);
        }
        Ok(serde_json::from_str(&line)?)
    }

    /// Sends a request and returns its response, skipping stream frames.
    pub fn request(&mut self, kind: &str, payload: Value) -> Result<Envelope, ClientError> {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.send_raw(&Envelope::new(Some(seq), kind, payload).to_line())?;
        loop {
            let m = self.receive()?;
            if m.seq == Some(seq) && m.kind != "state_frame" {
                return Ok(m);
            }
        }
    }
}
