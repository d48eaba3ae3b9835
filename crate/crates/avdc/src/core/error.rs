use thiserror::Error;

#[derive(Debug, Error)]
pub enum AvdcError {
    #[error("unknown {kind} id {id}")]
    UnknownId { kind: &'static str, id: u32 },
    #[error("ill-formed path: {0}")]
    BadPath(String),
    #[error("frame invariant violated: {0}")]
    BadFrame(String),
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("invalid cell: {0}")]
    InvalidCell(String),
    #[error("ill-formed pasting diagram at node {path:?}: {detail}")]
    BadDiagram { path: Vec<usize>, detail: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("load error: {0}")]
    Load(String),
    #[error("instance too large for the given bounds: {0}")]
    TooLarge(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, AvdcError>;
