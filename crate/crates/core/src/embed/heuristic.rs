use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::exact::{SourceMetric, TargetIndex};
use super::{
    require_connected_source, value_lt, EmbeddingMap, ExactValue, Frac, SolverResult, SolverStatus,
};
use crate::error::{Error, Result};
use crate::metric::UNREACHABLE;
use crate::recgraph::{MetricGraph, Vertex};

pub const DEFAULT_ITERATIONS: u64 = 100_000;

fn random_start(rng: &mut ChaCha8Rng, k: usize, t: usize) -> Vec<Vertex> {
    if k <= t {
        let mut pool: Vec<Vertex> = (0..t as Vertex).collect();
        pool.shuffle(rng);
        pool.truncate(k);
        pool
    } else {
        (0..k).map(|_| rng.gen_range(0..t as Vertex)).collect()
    }
}

/// Distortion of `image`, plus how many pairs attain it (or collapse, when
/// it is infinite). The count breaks ties so that flat stretches of the
/// distortion landscape still have a downhill direction.
#[derive(Debug, Clone, Copy)]
struct Score {
    value: Option<Frac>,
    tight: u32,
}

impl Score {
    fn lt(self, other: Score) -> bool {
        if value_lt(self.value, other.value) {
            return true;
        }
        !value_lt(other.value, self.value) && self.tight < other.tight
    }
}

fn score(src: &SourceMetric, tgt: &TargetIndex, image: &[Vertex]) -> Score {
    let mut e = Frac::new(0, 1);
    let mut c = Frac::new(0, 1);
    let (mut e_tight, mut c_tight, mut collapsed) = (0u32, 0u32, 0u32);
    for u in 0..src.k {
        for v in u + 1..src.k {
            let dy = tgt.dist.get(image[u], image[v]);
            if dy == 0 || dy == UNREACHABLE {
                collapsed += 1;
                continue;
            }
            let (dx, dy) = (u64::from(src.get(u, v)), u64::from(dy));
            for (best, count, r) in [
                (&mut e, &mut e_tight, Frac::new(dy, dx)),
                (&mut c, &mut c_tight, Frac::new(dx, dy)),
            ] {
                if best.lt(r) {
                    *best = r;
                    *count = 1;
                } else if !r.lt(*best) {
                    *count += 1;
                }
            }
        }
    }
    if collapsed > 0 {
        Score {
            value: None,
            tight: collapsed,
        }
    } else {
        Score {
            value: Some(e.mul(c)),
            tight: e_tight + c_tight,
        }
    }
}

/// Local search for a low-distortion map. A move sends one source vertex to
/// a random target vertex, swapping with whichever source vertex sat there.
/// Only strict improvements are kept, where a map also improves by lowering
/// the number of pairs at the extreme ratios without raising the distortion; after a long run without one the
/// search restarts from a fresh random injective map. Each proposal counts
/// as one iteration. The result depends only on `seed` and `iterations`.
pub fn min_distortion_heuristic<'a>(
    source: &'a MetricGraph,
    target: &'a MetricGraph,
    seed: u64,
    iterations: u64,
) -> Result<SolverResult<'a>> {
    if iterations == 0 {
        return Err(Error::Domain("iterations must be at least 1".into()));
    }
    require_connected_source(source)?;
    let src = SourceMetric::from_graph(source);
    let tgt = TargetIndex::new(target, false)?;
    let (k, t) = (source.vertex_count(), target.vertex_count());
    let stall_limit = 50 + 25 * k as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut image = random_start(&mut rng, k, t);
    let mut value = score(&src, &tgt, &image);
    let mut best: (Score, Vec<Vertex>) = (value, image.clone());
    let mut holder: Vec<Option<usize>> = vec![None; t];
    let reset_holder = |holder: &mut Vec<Option<usize>>, image: &[Vertex]| {
        holder.iter_mut().for_each(|h| *h = None);
        for (v, &w) in image.iter().enumerate() {
            holder[w as usize] = Some(v);
        }
    };
    reset_holder(&mut holder, &image);
    let mut stall = 0u64;
    for _ in 0..iterations {
        if stall >= stall_limit {
            image = random_start(&mut rng, k, t);
            value = score(&src, &tgt, &image);
            reset_holder(&mut holder, &image);
            stall = 0;
            if value.lt(best.0) {
                best = (value, image.clone());
            }
        }
        let v = rng.gen_range(0..k);
        let w = rng.gen_range(0..t as Vertex);
        let old = image[v];
        if w == old {
            stall += 1;
            continue;
        }
        let other = holder[w as usize].filter(|&u| u != v);
        image[v] = w;
        if let Some(u) = other {
            image[u] = old;
        }
        let proposed = score(&src, &tgt, &image);
        if proposed.lt(value) {
            value = proposed;
            reset_holder(&mut holder, &image);
            stall = 0;
            if value.lt(best.0) {
                best = (value, image.clone());
            }
        } else {
            image[v] = old;
            if let Some(u) = other {
                image[u] = w;
            }
            stall += 1;
        }
    }
    Ok(SolverResult {
        status: SolverStatus::UpperBoundOnly,
        value: ExactValue::from_frac(best.0.value),
        witness: Some(EmbeddingMap::new(source, target, best.1)?),
        nodes_explored: iterations,
        certificate: None,
    })
}
