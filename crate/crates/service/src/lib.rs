//! HTTP/JSON front end of the skat engine.
//!
//! All operations are stateless over one read-only [`Engine`]; heavy work
//! runs on the blocking pool. Malformed bodies and hands get 400, requests
//! that parse but make no sense in context get 422.

mod advise;
mod error;
mod ops;

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::{json, Value};
use tokio::net::TcpListener;

use skat_api::*;
use skat_core::probmodel::ProbTables;
use skat_core::skatselect::{Engine, SelectConfig};

pub use advise::{advise, request_hand};
pub use error::ApiError;

pub const TABLES_ENV: &str = "SKAT_TABLES";
pub const CONFIG_ENV: &str = "SKAT_CONFIG";
pub const BUDGET_ENV: &str = "SKAT_ADVISE_BUDGET_MS";
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(1);

#[derive(Clone, Debug, Default)]
pub struct ServiceConfig {
    pub tables: Option<PathBuf>,
    pub config: Option<PathBuf>,
    pub advise_budget: Option<Duration>,
}

impl ServiceConfig {
    /// Paths and budget from `SKAT_TABLES`, `SKAT_CONFIG` and
    /// `SKAT_ADVISE_BUDGET_MS`.
    pub fn from_env() -> ServiceConfig {
        let path = |k| std::env::var_os(k).map(PathBuf::from);
        ServiceConfig {
            tables: path(TABLES_ENV),
            config: path(CONFIG_ENV),
            advise_budget: std::env::var(BUDGET_ENV).ok().and_then(|v| v.parse().ok()).map(Duration::from_millis),
        }
    }
}

/// Tables from `tables` (empty tables when absent) and the selection config
/// from `config` (built-in defaults when absent).
pub fn load_engine(tables: Option<&Path>, config: Option<&Path>) -> skat_core::Result<Engine> {
    let tables = match tables {
        Some(dir) => ProbTables::load(dir)?,
        None => {
            log::warn!("no probability tables given; every lookup falls back to its prior");
            ProbTables::default()
        }
    };
    let config = match config {
        Some(p) => std::fs::read_to_string(p)?.parse()?,
        None => SelectConfig::default(),
    };
    Ok(Engine::new(tables, config))
}

#[derive(Clone)]
pub struct AppState {
    pub engine: Arc<Engine>,
    pub advise_budget: Duration,
}

impl AppState {
    pub fn new(engine: Engine) -> AppState {
        AppState {
            engine: Arc::new(engine),
            advise_budget: DEFAULT_BUDGET,
        }
    }

    pub fn from_config(cfg: &ServiceConfig) -> skat_core::Result<AppState> {
        let mut state = AppState::new(load_engine(cfg.tables.as_deref(), cfg.config.as_deref())?);
        if let Some(b) = cfg.advise_budget {
            state.advise_budget = b;
        }
        Ok(state)
    }
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    payload.map(|Json(t)| t).map_err(|e| ApiError::BadRequest(e.body_text()))
}

async fn blocking<T, F>(f: F) -> Result<Json<T>, ApiError>
where
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::Internal(format!("worker failed: {e}")))?
        .map(Json)
}

async fn advise_handler(
    State(s): State<AppState>,
    payload: Result<Json<AdviseRequest>, JsonRejection>,
) -> Result<Json<AdviseResponse>, ApiError> {
    let req = body(payload)?;
    let engine = s.engine.clone();
    let budget = s.advise_budget;
    tokio::time::timeout(budget, blocking(move || advise(&engine, &req)))
        .await
        .map_err(|_| ApiError::Timeout(budget.as_millis() as u64))?
}

macro_rules! handler {
    ($name:ident, $req:ty, $resp:ty, |$engine:ident, $r:ident| $body:expr) => {
        async fn $name(
            State(s): State<AppState>,
            payload: Result<Json<$req>, JsonRejection>,
        ) -> Result<Json<$resp>, ApiError> {
            let $r = body(payload)?;
            let $engine = s.engine.clone();
            blocking(move || $body).await
        }
    };
}

handler!(deal_handler, DealRequest, DealResponse, |_e, r| ops::deal(&r));
handler!(select_handler, SelectRequest, SelectResponse, |e, r| ops::select(&e, &r));
handler!(auction_handler, AuctionRequest, AuctionResponse, |e, r| ops::auction(&e, &r));
handler!(solve_handler, SolveRequest, SolveResponse, |_e, r| ops::solve(&r));
handler!(table_build_handler, TableBuildRequest, TableBuildResponse, |e, r| ops::table_build(&e, &r));
handler!(bench_handler, BenchRequest, BenchResponse, |e, r| ops::bench(&e, &r));
handler!(replay_handler, ReplayRequest, ReplayResponse, |e, r| ops::replay_file(&e, &r));

async fn health(State(s): State<AppState>) -> Json<Value> {
    Json(json!({
        "status": "ok",
        "grand_keys": s.engine.tables.grand.len(),
        "suit_keys": s.engine.tables.suit.len(),
    }))
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route(HEALTH_PATH, get(health))
        .route(ADVISE_PATH, post(advise_handler))
        .route(DEAL_PATH, post(deal_handler))
        .route(SELECT_PATH, post(select_handler))
        .route(AUCTION_PATH, post(auction_handler))
        .route(SOLVE_PATH, post(solve_handler))
        .route(TABLE_BUILD_PATH, post(table_build_handler))
        .route(BENCH_PATH, post(bench_handler))
        .route(REPLAY_PATH, post(replay_handler))
        .with_state(state)
}

pub async fn serve(listener: TcpListener, state: AppState) -> std::io::Result<()> {
    axum::serve(listener, router(state)).await
}

/// Binds `addr` and serves in a background task; returns the bound address.
pub async fn spawn(addr: SocketAddr, state: AppState) -> std::io::Result<SocketAddr> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    tokio::spawn(async move {
        if let Err(e) = serve(listener, state).await {
            log::error!("server stopped: {e}");
        }
    });
    Ok(local)
}
