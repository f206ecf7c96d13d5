use serde::Serialize;

use super::{distortion_lower_bound, min_distortion_heuristic, ExactValue, LowerBoundOptions};
use crate::error::{Error, Result};
use crate::recgraph::{Family, GenerateOptions, MetricGraph, Normalization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GrowthOptions {
    pub iterations: u64,
    pub seed: u64,
    pub lower: LowerBoundOptions,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions {
            iterations: 20_000,
            seed: 0,
            lower: LowerBoundOptions {
                subset_size: 3,
                samples: 16,
                budget: 100_000_000,
                seed: 0,
            },
        }
    }
}

/// One source/target pair of the table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub n: u32,
    pub target_level: u32,
    pub source_vertices: usize,
    pub target_vertices: usize,
    /// Best distortion found by local search.
    pub upper: ExactValue,
    /// Largest subset optimum.
    pub lower: ExactValue,
}

/// Tabulates upper and lower distortion bounds for `L_n` into `D_m`, for
/// `n = 1..=n_max` and each `m` in `target_levels`. The table is a record
/// of what was found; it asserts nothing about growth.
pub fn growth_experiment(
    n_max: u32,
    target_levels: &[u32],
    options: &GrowthOptions,
    generate: &GenerateOptions,
) -> Result<Vec<GrowthRow>> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let source =
            MetricGraph::generate_with(Family::Laakso, n, Normalization::Unweighted, generate)?;
        for &m in target_levels {
            let target = MetricGraph::generate_with(
                Family::Diamond,
                m,
                Normalization::Unweighted,
                generate,
            )?;
            let upper =
                min_distortion_heuristic(&source, &target, options.seed, options.iterations)?.value;
            let lower = distortion_lower_bound(&source, &target, &options.lower)?.value;
            if lower > upper {
                return Err(Error::Contract(format!(
                    "lower bound {lower} exceeds upper bound {upper} for L_{n} into D_{m}"
                )));
            }
            rows.push(GrowthRow {
                n,
                target_level: m,
                source_vertices: source.vertex_count(),
                target_vertices: target.vertex_count(),
                upper,
                lower,
            });
        }
    }
    Ok(rows)
}
