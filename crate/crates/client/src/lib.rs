//! Typed calls to the skat service.

use serde::de::DeserializeOwned;
use serde::Serialize;

use skat_api::*;

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    /// The service answered with an error status.
    #[error("{status}: {message}")]
    Status { status: u16, message: String },
    #[error("transport: {0}")]
    Transport(#[from] reqwest::Error),
}

impl ClientError {
    /// 4xx: the request itself was at fault.
    pub fn is_input_error(&self) -> bool {
        matches!(self, ClientError::Status { status, .. } if (400..500).contains(status))
    }
}

#[derive(Clone, Debug)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    /// `base` like `http://127.0.0.1:8080`.
    pub fn new(base: impl Into<String>) -> Client {
        Client {
            base: base.into().trim_end_matches('/').to_string(),
            http: reqwest::Client::new(),
        }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    async fn post<Q: Serialize, R: DeserializeOwned>(&self, path: &str, body: &Q) -> Result<R, ClientError> {
        let resp = self.http.post(format!("{}{path}", self.base)).json(body).send().await?;
        let status = resp.status();
        if status.is_success() {
            return Ok(resp.json().await?);
        }
        let text = resp.text().await.unwrap_or_default();
        let message = serde_json::from_str::<ErrorBody>(&text).map(|e| e.error).unwrap_or(text);
        Err(ClientError::Status {
            status: status.as_u16(),
            message,
        })
    }

    pub async fn health(&self) -> Result<(), ClientError> {
        self.http.get(format!("{}{HEALTH_PATH}", self.base)).send().await?.error_for_status()?;
        Ok(())
    }

    pub async fn advise(&self, req: &AdviseRequest) -> Result<AdviseResponse, ClientError> {
        self.post(ADVISE_PATH, req).await
    }

    pub async fn deal(&self, req: &DealRequest) -> Result<DealResponse, ClientError> {
        self.post(DEAL_PATH, req).await
    }

    pub async fn select(&self, req: &SelectRequest) -> Result<SelectResponse, ClientError> {
        self.post(SELECT_PATH, req).await
    }

    pub async fn auction(&self, req: &AuctionRequest) -> Result<AuctionResponse, ClientError> {
        self.post(AUCTION_PATH, req).await
    }

    pub async fn solve(&self, req: &SolveRequest) -> Result<SolveResponse, ClientError> {
        self.post(SOLVE_PATH, req).await
    }

    pub async fn table_build(&self, req: &TableBuildRequest) -> Result<TableBuildResponse, ClientError> {
        self.post(TABLE_BUILD_PATH, req).await
    }

    pub async fn bench(&self, req: &BenchRequest) -> Result<BenchResponse, ClientError> {
        self.post(BENCH_PATH, req).await
    }

    pub async fn replay(&self, req: &ReplayRequest) -> Result<ReplayResponse, ClientError> {
        self.post(REPLAY_PATH, req).await
    }
}
