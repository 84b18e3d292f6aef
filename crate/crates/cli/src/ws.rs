//! The websocket session server. Each connection owns one session, and
//! each text message is one protocol request answered by one text message.

use std::net::SocketAddr;

use anyhow::Context;
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::Response;
use axum::routing::get;
use axum::Router;
use panto_propagate::SchedulerConfig;
use panto_session::Session;
use tokio::net::TcpListener;

/// The server's routes: the websocket endpoint at `/ws`.
pub fn router(cfg: SchedulerConfig) -> Router {
    Router::new().route("/ws", get(upgrade)).with_state(cfg)
}

async fn upgrade(ws: WebSocketUpgrade, State(cfg): State<SchedulerConfig>) -> Response {
    ws.on_upgrade(move |socket| connection(socket, cfg))
}

async fn connection(mut socket: WebSocket, cfg: SchedulerConfig) {
    let mut session = Session::new(cfg);
    while let Some(Ok(message)) = socket.recv().await {
        let reply = match message {
            Message::Text(text) => session.handle_line(text.as_str()),
            Message::Binary(bytes) => match std::str::from_utf8(&bytes) {
                Ok(text) => session.handle_line(text),
                Err(_) => session.handle_line(""),
            },
            Message::Close(_) => break,
            _ => continue,
        };
        if socket.send(Message::Text(reply.into())).await.is_err() {
            break;
        }
    }
}

/// Serves on `127.0.0.1:port` until the process ends. The bound address is
/// announced on standard error; port 0 picks a free port.
pub async fn serve(port: u16, cfg: SchedulerConfig) -> anyhow::Result<()> {
    let listener = TcpListener::bind(SocketAddr::from(([127, 0, 0, 1], port)))
        .await
        .with_context(|| format!("cannot listen on port {port}"))?;
    let addr = listener.local_addr()?;
    eprintln!("listening on ws://{addr}/ws");
    axum::serve(listener, router(cfg)).await.context("server failed")
}

/// [`serve`] on a fresh runtime.
pub fn serve_blocking(port: u16, cfg: SchedulerConfig) -> anyhow::Result<()> {
    tokio::runtime::Runtime::new()?.block_on(serve(port, cfg))
}
