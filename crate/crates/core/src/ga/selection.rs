use rand::Rng;

use super::FitnessReport;

/// Invert the cumulative weight sum at `u` in `[0, 1)`.
pub fn roulette_index(weights: &[f64], u: f64) -> usize {
    let mut cumulative = 0.0;
    for (i, w) in weights.iter().enumerate() {
        cumulative += w;
        if u < cumulative {
            return i;
        }
    }
    // rounding can leave the total a hair below 1
    weights.len() - 1
}

/// Cumulative weights built once per generation so each spin is a binary
/// search. Spins agree with [`roulette_index`] on the same `u`.
#[derive(Debug, Clone)]
pub struct Wheel {
    cumulative: Vec<f64>,
}

impl Wheel {
    pub fn new(weights: &[f64]) -> Self {
        let cumulative = weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        Self { cumulative }
    }

    pub fn index(&self, u: f64) -> usize {
        self.cumulative.partition_point(|&c| c <= u).min(self.cumulative.len() - 1)
    }

    pub fn spin<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.index(rng.gen::<f64>())
    }
}

/// Spin the wheel once.
pub fn roulette_select<R: Rng + ?Sized>(report: &FitnessReport, rng: &mut R) -> usize {
    roulette_index(&report.selection_weights, rng.gen::<f64>())
}
