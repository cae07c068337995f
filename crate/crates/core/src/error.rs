use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse {what} from {token:?}")]
    Parse { what: &'static str, token: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("table file: {0}")]
    TableFormat(String),

    #[error("record: {0}")]
    Record(String),

    #[error("no legal game at bid {bid}")]
    Overbid { bid: u32 },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(what: &'static str, token: impl Into<String>) -> Self {
        Error::Parse {
            what,
            token: token.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
