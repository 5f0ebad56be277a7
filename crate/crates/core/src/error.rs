use thiserror::Error;

use crate::ga::GaError;
use crate::grading::GradingError;
use crate::harness::HarnessError;
use crate::queueing::QueueError;
use crate::topology::TopologyError;

/// Any failure surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Queue(#[from] QueueError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Ga(#[from] GaError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
}
