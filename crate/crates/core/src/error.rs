use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{what}: size {size} exceeds the supported maximum {max}")]
    TooLarge {
        what: &'static str,
        size: usize,
        max: usize,
    },
    #[error("bipartite parts differ in size ({left} vs {right})")]
    Unbalanced { left: usize, right: usize },
    #[error("k = {k} is outside 0..={n}")]
    BadK { k: usize, n: usize },
    #[error("not a perfect matching: {0}")]
    NotPerfectMatching(String),
    #[error("not a permutation on the graph: {0}")]
    NotOnGraph(String),
    #[error("not a derangement: {0}")]
    NotDerangement(String),
    #[error("not a Hamilton cycle: {0}")]
    NotHamilton(String),
    #[error("permutation is not in the image of the injection: {0}")]
    NotInImage(String),
    #[error("uniqueness violated: {0}")]
    UniquenessViolation(String),
    #[error("graph is a directed cycle")]
    IsDirectedCycle,
    #[error("counterexample: {0}")]
    Counterexample(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn too_large(what: &'static str, size: usize, max: usize) -> Result<()> {
    if size > max {
        Err(Error::TooLarge { what, size, max })
    } else {
        Ok(())
    }
}
