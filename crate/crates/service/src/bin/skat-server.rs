use std::net::SocketAddr;

use skat_service::{serve, AppState, ServiceConfig};

#[tokio::main]
async fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let port: u16 = std::env::var("PORT").ok().and_then(|p| p.parse().ok()).unwrap_or(8080);
    let state = match AppState::from_config(&ServiceConfig::from_env()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("skat-server: {e}");
            std::process::exit(1);
        }
    };
    let addr = SocketAddr::from(([0, 0, 0, 0], port));
    let listener = tokio::net::TcpListener::bind(addr).await.expect("bind");
    log::info!("listening on {addr}");
    if let Err(e) = serve(listener, state).await {
        eprintln!("skat-server: {e}");
        std::process::exit(2);
    }
}
