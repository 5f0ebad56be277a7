use serde::{Deserialize, Serialize};

use super::{GaError, Population};
use crate::topology::Topology;

/// Fitness of every population member.
///
/// `selection_weights` are the bottleneck shares B_j / Σ B_i used by the
/// roulette wheel. `report_fitness` is B_j / max B_k, a best-relative score
/// that drives the elite threshold and reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitnessReport {
    pub selection_weights: Vec<f64>,
    pub report_fitness: Vec<f64>,
    pub bottlenecks: Vec<f64>,
}

impl FitnessReport {
    pub fn from_bottlenecks(bottlenecks: Vec<f64>) -> Result<Self, GaError> {
        if bottlenecks.is_empty() {
            return Err(GaError::EmptyPopulation);
        }
        if let Some(&b) = bottlenecks.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
            return Err(GaError::DegenerateBandwidth(b));
        }
        let total: f64 = bottlenecks.iter().sum();
        let best = bottlenecks.iter().copied().fold(f64::MIN, f64::max);
        Ok(Self {
            selection_weights: bottlenecks.iter().map(|b| b / total).collect(),
            report_fitness: bottlenecks.iter().map(|b| b / best).collect(),
            bottlenecks,
        })
    }

    pub fn len(&self) -> usize {
        self.bottlenecks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bottlenecks.is_empty()
    }

    pub fn max_bottleneck(&self) -> f64 {
        self.bottlenecks.iter().copied().fold(f64::MIN, f64::max)
    }
}

pub fn evaluate_fitness(
    population: &Population,
    topology: &Topology,
) -> Result<FitnessReport, GaError> {
    FitnessReport::from_bottlenecks(
        population.members.iter().map(|c| c.bottleneck(topology)).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_bottleneck_shares() {
        let r = FitnessReport::from_bottlenecks(vec![30.0, 50.0, 20.0]).unwrap();
        let expected = [0.3, 0.5, 0.2];
        for (w, e) in r.selection_weights.iter().zip(expected) {
            assert!((w - e).abs() < 1e-15);
        }
        assert_eq!(r.report_fitness, vec![0.6, 1.0, 0.4]);
    }

    #[test]
    fn single_and_equal_members() {
        let r = FitnessReport::from_bottlenecks(vec![42.0]).unwrap();
        assert_eq!((r.selection_weights[0], r.report_fitness[0]), (1.0, 1.0));
        let r = FitnessReport::from_bottlenecks(vec![7.0; 4]).unwrap();
        assert!(r.selection_weights.iter().all(|&w| w == 0.25));
        assert!(r.report_fitness.iter().all(|&f| f == 1.0));
    }

    #[test]
    fn degenerate_bandwidth() {
        assert_eq!(
            FitnessReport::from_bottlenecks(vec![3.0, 0.0]),
            Err(GaError::DegenerateBandwidth(0.0))
        );
        assert_eq!(FitnessReport::from_bottlenecks(vec![]), Err(GaError::EmptyPopulation));
    }
}
