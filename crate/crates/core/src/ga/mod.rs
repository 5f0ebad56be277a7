//! Level-2 path search: a genetic algorithm over loop-free
//! source-to-destination paths, with fitness driven by bottleneck bandwidth.

mod chromosome;
mod evolve;
mod fitness;
mod operators;
mod paths;
mod selection;

use thiserror::Error;

use crate::topology::NodeId;

pub use self::chromosome::{Chromosome, Population};
pub use self::evolve::{compare_routes, evolve, Evolution, GaConfig, GenerationStats};
pub use self::fitness::{evaluate_fitness, FitnessReport};
pub use self::operators::{
    common_node_crossover, insertion_mutation, pmx_crossover, repair, single_point_crossover,
    Repair,
};
pub use self::paths::enumerate_paths;
pub use self::selection::{roulette_index, roulette_select, Wheel};

#[derive(Debug, Error, PartialEq)]
pub enum GaError {
    #[error("no route from source to destination")]
    NoRoute,
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("bottleneck bandwidth {0} is not positive")]
    DegenerateBandwidth(f64),
    #[error("empty population")]
    EmptyPopulation,
    #[error("cut point {point} outside 1..{limit}")]
    BadCutPoint { point: usize, limit: usize },
    #[error("cut points ({a}, {b}) invalid for length {len}")]
    BadCutPoints { a: usize, b: usize, len: usize },
    #[error("parents are not permutations of the same gene set")]
    NotPermutation,
    #[error("node {0} already on the path")]
    DuplicateNode(NodeId),
    #[error("mutation rejected: {0}")]
    MutationRejected(String),
    #[error("invalid GA configuration: {0}")]
    InvalidConfig(String),
}
