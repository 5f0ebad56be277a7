//! M/M/1 queue statistics, the Kleinrock network delay sum and the
//! congestion indicator.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::topology::{NodeMetrics, Topology};

#[derive(Debug, Error, PartialEq)]
pub enum QueueError {
    #[error("traffic intensity {rho} outside [0, 1)")]
    Unstable { rho: f64 },
    #[error("channel {channel} unstable: service {service} <= flow {flow}")]
    UnstableChannel { channel: usize, flow: f64, service: f64 },
    #[error("arrival rate must be > 0, got {0}")]
    InvalidRate(f64),
    #[error("total external traffic must be > 0, got {0}")]
    InvalidGamma(f64),
    #[error("{flows} channel flows but {capacities} capacities")]
    LengthMismatch { flows: usize, capacities: usize },
    #[error("invalid channel {channel}: flow {flow}, capacity {capacity}")]
    InvalidChannel { channel: usize, flow: f64, capacity: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueueParams {
    /// Traffic intensity ρ.
    pub rho: f64,
    /// Mean arrival rate λ, messages per second.
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mm1Mean {
    /// ρ/(1−ρ), the mean number of jobs in the system.
    pub mean_jobs: f64,
    /// ρ/(1−ρ)·1/λ as the formula is usually printed; by Little's law this
    /// is the mean time in system.
    pub printed_formula_value: f64,
}

pub fn mm1_mean(params: QueueParams) -> Result<Mm1Mean, QueueError> {
    let QueueParams { rho, lambda } = params;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(QueueError::InvalidRate(lambda));
    }
    if !(0.0..1.0).contains(&rho) {
        return Err(QueueError::Unstable { rho });
    }
    let mean_jobs = rho / (1.0 - rho);
    Ok(Mm1Mean { mean_jobs, printed_formula_value: mean_jobs * (1.0 / lambda) })
}

/// Channel flows λ_i, capacities C_i, service constant μ and total external
/// traffic γ for the delay sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowModel {
    pub channel_flows: Vec<f64>,
    pub channel_capacities: Vec<f64>,
    pub mu: f64,
    pub gamma: f64,
}

impl FlowModel {
    pub fn channel_count(&self) -> usize {
        self.channel_flows.len()
    }
}

/// T = Σ (λ_i/γ) · 1/(μ·C_i − λ_i) over all channels.
pub fn network_delay(model: &FlowModel) -> Result<f64, QueueError> {
    if model.channel_flows.len() != model.channel_capacities.len() {
        return Err(QueueError::LengthMismatch {
            flows: model.channel_flows.len(),
            capacities: model.channel_capacities.len(),
        });
    }
    if !(model.gamma > 0.0 && model.gamma.is_finite()) {
        return Err(QueueError::InvalidGamma(model.gamma));
    }
    if !(model.mu > 0.0 && model.mu.is_finite()) {
        return Err(QueueError::InvalidRate(model.mu));
    }
    let mut total = 0.0;
    for (channel, (&flow, &capacity)) in
        model.channel_flows.iter().zip(&model.channel_capacities).enumerate()
    {
        if !(flow >= 0.0 && flow.is_finite() && capacity > 0.0 && capacity.is_finite()) {
            return Err(QueueError::InvalidChannel { channel, flow, capacity });
        }
        let service = model.mu * capacity;
        if service <= flow {
            return Err(QueueError::UnstableChannel { channel, flow, service });
        }
        total += (flow / model.gamma) * (1.0 / (service - flow));
    }
    Ok(total)
}

/// Strict: a node loaded exactly at the threshold is not congested.
pub fn congestion_exists(metrics: &NodeMetrics, threshold_fraction: f64) -> bool {
    metrics.traffic_load > threshold_fraction * metrics.bandwidth
}

/// Per-node delay: the node's outgoing-channel terms of the network delay sum.
///
/// Each node's traffic load is split evenly across its out-edges to give the
/// channel flows; γ is the total load over all nodes. With no traffic at all
/// every delay is zero.
pub fn node_delays(topology: &Topology, service_rate: f64) -> Result<Vec<f64>, QueueError> {
    let gamma: f64 = topology.nodes.iter().map(|n| n.metrics.traffic_load).sum();
    if gamma == 0.0 {
        return Ok(vec![0.0; topology.node_count()]);
    }
    topology
        .nodes
        .iter()
        .map(|node| {
            let capacities: Vec<f64> = topology.out_edges(node.id).map(|e| e.capacity).collect();
            if capacities.is_empty() {
                return Ok(0.0);
            }
            let flow = node.metrics.traffic_load / capacities.len() as f64;
            network_delay(&FlowModel {
                channel_flows: vec![flow; capacities.len()],
                channel_capacities: capacities,
                mu: service_rate,
                gamma,
            })
        })
        .collect()
}
