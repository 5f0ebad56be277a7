use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Topology, TopologyError};
use crate::queueing;
use crate::rng::seeded_rng;

/// Ranges and rates used to populate [`super::NodeMetrics`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AttributeRanges {
    pub bandwidth: (f64, f64),
    /// Lifetimes are whole numbers drawn uniformly from this inclusive range.
    pub lifetime: (f64, f64),
    pub resource_probability: f64,
    /// Service-rate constant μ of the delay model.
    pub service_rate: f64,
}

impl Default for AttributeRanges {
    fn default() -> Self {
        Self {
            bandwidth: (10.0, 100.0),
            lifetime: (0.0, 10.0),
            resource_probability: 0.8,
            service_rate: 1.0,
        }
    }
}

impl AttributeRanges {
    fn validate(&self) -> Result<(), TopologyError> {
        let bad = |m: String| Err(TopologyError::InvalidConfig(m));
        let (blo, bhi) = self.bandwidth;
        if !(blo > 0.0 && blo < bhi && bhi.is_finite()) {
            return bad(format!("bandwidth range ({blo}, {bhi}) must satisfy 0 < min < max"));
        }
        let (llo, lhi) = self.lifetime;
        if !(llo >= 0.0 && llo < lhi && lhi.is_finite()) {
            return bad(format!("lifetime range ({llo}, {lhi}) must satisfy 0 <= min < max"));
        }
        if llo.ceil() > lhi.floor() {
            return bad(format!("lifetime range ({llo}, {lhi}) contains no whole number"));
        }
        if !(0.0..=1.0).contains(&self.resource_probability) {
            return bad(format!(
                "resource_probability {} outside [0, 1]",
                self.resource_probability
            ));
        }
        if !(self.service_rate > 0.0 && self.service_rate.is_finite()) {
            return bad(format!("service_rate {} must be > 0", self.service_rate));
        }
        Ok(())
    }
}

/// Populate node metrics with default resource probability and service rate.
pub fn assign_attributes(
    topology: Topology,
    seed: u64,
    bandwidth_range: (f64, f64),
    lifetime_range: (f64, f64),
) -> Result<Topology, TopologyError> {
    let ranges = AttributeRanges {
        bandwidth: bandwidth_range,
        lifetime: lifetime_range,
        ..AttributeRanges::default()
    };
    assign_attributes_with(topology, seed, &ranges)
}

/// Draw bandwidth, lifetime, resource flag and traffic for every node in id
/// order, then derive in-degree and queueing delay.
///
/// Traffic is a uniform fraction of the node's carrying limit, the smaller of
/// its bandwidth and what its outgoing channels can serve. Every channel
/// therefore stays inside the queue's stability region and delays are finite.
pub fn assign_attributes_with(
    mut topology: Topology,
    seed: u64,
    ranges: &AttributeRanges,
) -> Result<Topology, TopologyError> {
    ranges.validate()?;
    let mut rng = seeded_rng(seed);
    let degrees = topology.in_degrees();
    let limits: Vec<(usize, f64)> = topology
        .nodes
        .iter()
        .map(|n| {
            topology.out_edges(n.id).fold((0, f64::INFINITY), |(k, cap), e| {
                (k + 1, cap.min(e.capacity))
            })
        })
        .collect();

    let (blo, bhi) = ranges.bandwidth;
    let (llo, lhi) = ranges.lifetime;
    let (llo, lhi) = (llo.ceil() as u64, lhi.floor() as u64);
    for ((node, deg), (out_degree, min_cap)) in
        topology.nodes.iter_mut().zip(degrees).zip(limits)
    {
        let m = &mut node.metrics;
        m.bandwidth = rng.gen_range(blo..=bhi);
        m.network_lifetime = rng.gen_range(llo..=lhi) as f64;
        m.resource_allocated = rng.gen_bool(ranges.resource_probability);
        let carry = if out_degree == 0 {
            m.bandwidth
        } else {
            m.bandwidth.min(out_degree as f64 * ranges.service_rate * min_cap)
        };
        m.traffic_load = rng.gen::<f64>() * carry;
        m.node_density = deg;
    }

    let delays = queueing::node_delays(&topology, ranges.service_rate)
        .map_err(|e| TopologyError::InvalidConfig(format!("delay model: {e}")))?;
    for (node, d) in topology.nodes.iter_mut().zip(delays) {
        node.metrics.delay = d;
    }
    Ok(topology)
}
