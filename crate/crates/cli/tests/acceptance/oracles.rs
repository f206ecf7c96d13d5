//! Reference computations written against nothing but the edge list of a
//! graph. They are slow and obvious on purpose.

use std::collections::VecDeque;

use mfl_core::embed::ExactValue;
use mfl_core::MetricGraph;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const FAR: u32 = u32::MAX;

pub fn adjacency(g: &MetricGraph) -> Vec<Vec<usize>> {
    adjacency_of(
        g.vertex_count(),
        g.edges().iter().map(|&[u, v]| (u as usize, v as usize)),
    )
}

pub fn adjacency_of(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

pub fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<u32> {
    let mut dist = vec![FAR; adj.len()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if dist[y] == FAR {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

pub fn all_pairs(adj: &[Vec<usize>]) -> Vec<Vec<u32>> {
    (0..adj.len()).map(|s| bfs(adj, s)).collect()
}

/// Edge masks of all simple cycles: walk the cycle space in Gray-code order
/// and keep the elements whose edges form one connected 2-regular piece.
pub fn cycle_space_cycles(g: &MetricGraph) -> Vec<u64> {
    let edges = g.edges();
    assert!(edges.len() <= 64, "masks are 64 bits");
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for (i, &[u, v]) in edges.iter().enumerate() {
        adj[u as usize].push((v as usize, i));
        adj[v as usize].push((u as usize, i));
    }
    let mut to_root = vec![None::<u64>; n];
    let mut tree = 0u64;
    to_root[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &(y, e) in &adj[x] {
            if to_root[y].is_none() {
                to_root[y] = Some(to_root[x].unwrap() | 1 << e);
                tree |= 1 << e;
                queue.push_back(y);
            }
        }
    }
    let basis: Vec<u64> = edges
        .iter()
        .enumerate()
        .filter(|(e, _)| tree & (1 << e) == 0)
        .map(|(e, &[u, v])| to_root[u as usize].unwrap() ^ to_root[v as usize].unwrap() ^ (1 << e))
        .collect();

    let simple = |mask: u64| {
        let mut degree = vec![0u8; n];
        for (e, &[u, v]) in edges.iter().enumerate() {
            if mask & (1 << e) != 0 {
                degree[u as usize] += 1;
                degree[v as usize] += 1;
            }
        }
        if degree.iter().any(|&d| d != 0 && d != 2) {
            return false;
        }
        let start = degree.iter().position(|&d| d == 2).unwrap();
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &(y, e) in &adj[x] {
                if mask & (1 << e) != 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..n).all(|v| degree[v] == 0 || seen[v])
    };

    let mut out = Vec::new();
    let mut mask = 0u64;
    for i in 1u64..1 << basis.len() {
        mask ^= basis[i.trailing_zeros() as usize];
        if simple(mask) {
            out.push(mask);
        }
    }
    out.sort_unstable();
    out
}

/// Edge mask of a closed vertex sequence.
pub fn cycle_mask(g: &MetricGraph, seq: &[u32]) -> u64 {
    let mut mask = 0;
    for i in 0..seq.len() {
        let (a, b) = (seq[i], seq[(i + 1) % seq.len()]);
        let e = g
            .edges()
            .iter()
            .position(|&[u, v]| (u, v) == (a, b) || (u, v) == (b, a))
            .expect("consecutive cycle vertices are adjacent");
        mask |= 1 << e;
    }
    mask
}

/// Whether `seq` is a simple closed walk of length at least 3.
pub fn is_simple_cycle(adj: &[Vec<usize>], seq: &[u32]) -> bool {
    let mut sorted: Vec<u32> = seq.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    seq.len() >= 3
        && sorted.len() == seq.len()
        && (0..seq.len())
            .all(|i| adj[seq[i] as usize].contains(&(seq[(i + 1) % seq.len()] as usize)))
}

/// Minimum distortion over every map, by trying all of them. `None` means
/// no injective map exists.
pub fn brute_force_distortion(src: &[Vec<u32>], tgt: &[Vec<u32>]) -> Option<(u64, u64)> {
    let (k, t) = (src.len(), tgt.len());
    let mut image = vec![0usize; k];
    let mut best: Option<(u64, u64)> = None;
    let less = |a: (u64, u64), b: (u64, u64)| {
        u128::from(a.0) * u128::from(b.1) < u128::from(b.0) * u128::from(a.1)
    };
    loop {
        let mut injective = true;
        let (mut e, mut c) = ((0u64, 1u64), (0u64, 1u64));
        'pairs: for u in 0..k {
            for v in u + 1..k {
                let dy = tgt[image[u]][image[v]];
                if dy == 0 || dy == FAR {
                    injective = false;
                    break 'pairs;
                }
                let dx = src[u][v];
                if less(e, (u64::from(dy), u64::from(dx))) {
                    e = (u64::from(dy), u64::from(dx));
                }
                if less(c, (u64::from(dx), u64::from(dy))) {
                    c = (u64::from(dx), u64::from(dy));
                }
            }
        }
        if injective {
            let d = if k < 2 {
                (1, 1)
            } else {
                (e.0 * c.0, e.1 * c.1)
            };
            if best.is_none_or(|b| less(d, b)) {
                best = Some(d);
            }
        }
        // next assignment in base t
        let mut i = 0;
        loop {
            if i == k {
                return best;
            }
            image[i] += 1;
            if image[i] < t {
                break;
            }
            image[i] = 0;
            i += 1;
        }
    }
}

pub fn exact_value(v: Option<(u64, u64)>) -> ExactValue {
    match v {
        Some((num, den)) => {
            ExactValue::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
        }
        None => ExactValue::Infinite,
    }
}

/// A connected graph on `n` vertices: a random tree plus random chords.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, chord_prob: f64) -> Vec<[u32; 2]> {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push([rng.gen_range(0..v) as u32, v as u32]);
    }
    for u in 0..n {
        for v in u + 1..n {
            let present = edges.iter().any(|&[a, b]| {
                (a as usize, b as usize) == (u, v) || (b as usize, a as usize) == (u, v)
            });
            if !present && rng.gen_bool(chord_prob) {
                edges.push([u as u32, v as u32]);
            }
        }
    }
    edges
}

pub fn cycle_edges(n: usize) -> Vec<[u32; 2]> {
    (0..n).map(|i| [i as u32, ((i + 1) % n) as u32]).collect()
}

/// Graph isomorphism by backtracking, pruned by degree and by the sorted
/// distance profile of each vertex.
pub fn isomorphic(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    let edges = |g: &[Vec<usize>]| g.iter().map(Vec::len).sum::<usize>();
    if edges(a) != edges(b) {
        return false;
    }
    let profile = |g: &[Vec<usize>]| -> Vec<Vec<u32>> {
        all_pairs(g)
            .into_iter()
            .map(|mut row| {
                row.sort_unstable();
                row
            })
            .collect()
    };
    let (pa, pb) = (profile(a), profile(b));
    let matrix = |g: &[Vec<usize>]| {
        let mut m = vec![vec![false; n]; n];
        for (u, ns) in g.iter().enumerate() {
            for &v in ns {
                m[u][v] = true;
            }
        }
        m
    };
    let (ma, mb) = (matrix(a), matrix(b));
    // visit a in BFS order so each new vertex has a mapped neighbour
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in &a[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }

    type Fits<'a> = &'a dyn Fn(usize, usize, &[Option<usize>]) -> bool;

    fn extend(
        i: usize,
        order: &[usize],
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        ok: Fits,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let x = order[i];
        for y in 0..used.len() {
            if used[y] || !ok(x, y, map) {
                continue;
            }
            map[x] = Some(y);
            used[y] = true;
            if extend(i + 1, order, map, used, ok) {
                return true;
            }
            map[x] = None;
            used[y] = false;
        }
        false
    }

    let ok = |x: usize, y: usize, map: &[Option<usize>]| {
        pa[x] == pb[y]
            && map
                .iter()
                .enumerate()
                .all(|(u, m)| m.is_none_or(|w| ma[x][u] == mb[y][w]))
    };
    extend(0, &order, &mut vec![None; n], &mut vec![false; n], &ok)
}
