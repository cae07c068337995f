use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use skat_api::ErrorBody;

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    /// Unreadable body or malformed hand: 400.
    #[error("{0}")]
    BadRequest(String),
    /// Well-formed request in an impossible context: 422.
    #[error("{0}")]
    Unprocessable(String),
    #[error("advice budget of {0} ms exceeded")]
    Timeout(u64),
    #[error("{0}")]
    Internal(String),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::Unprocessable(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Timeout(_) => StatusCode::SERVICE_UNAVAILABLE,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl From<skat_core::Error> for ApiError {
    fn from(e: skat_core::Error) -> Self {
        use skat_core::Error as E;
        match e {
            E::Parse { .. } | E::Record(_) | E::TableFormat(_) | E::Json(_) => ApiError::BadRequest(e.to_string()),
            E::Domain(_) | E::Overbid { .. } => ApiError::Unprocessable(e.to_string()),
            E::Io(_) => ApiError::BadRequest(e.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = self.status();
        if status.is_server_error() {
            log::error!("{self}");
        }
        (status, Json(ErrorBody { error: self.to_string() })).into_response()
    }
}
