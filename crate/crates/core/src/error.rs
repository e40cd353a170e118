use thiserror::Error;

use crate::diagram::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank {0} is out of range (expected 1..=26)")]
    RankOutOfRange(usize),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("generator {letter} is out of range for rank {rank}")]
    GeneratorOutOfRange { letter: char, rank: usize },
    #[error("expected {expected} words, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("search guard exceeded: {0} (pass the override flag to run anyway)")]
    GuardExceeded(String),
    #[error("no catalogued automorphisms of certified degree {0}")]
    EmptyCatalogue(usize),
    #[error("unknown sphere label {0}")]
    UnknownLabel(usize),
    #[error("invalid diagram: {}", .0.iter().map(|v| v.code.as_str()).collect::<Vec<_>>().join(", "))]
    InvalidDiagram(Vec<Violation>),
    #[error(transparent)]
    Parse(#[from] crate::textio::ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_rank(rank: usize) -> Result<()> {
    if (1..=crate::word::MAX_RANK).contains(&rank) {
        Ok(())
    } else {
        Err(Error::RankOutOfRange(rank))
    }
}
