//! Shared brute-force oracles for the integration tests. Everything here
//! is deliberately naive — plain odometer loops and pairwise checks — so it
//! shares no code path with the search engine it cross-checks.

#![allow(dead_code)]

use std::collections::BTreeMap;

use hamendo::GraphParams;

/// Every self-map of the vertex set that preserves all edges, by scanning
/// all `N^N` image assignments.
pub fn brute_force_endomorphisms(params: &GraphParams) -> Vec<Vec<usize>> {
    let n = params.vertex_count();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if params.adjacent(a, b).unwrap() {
                edges.push((a, b));
            }
        }
    }
    let mut f = vec![0usize; n];
    let mut out = Vec::new();
    'scan: loop {
        if edges
            .iter()
            .all(|&(a, b)| params.adjacent(f[a], f[b]).unwrap())
        {
            out.push(f.clone());
        }
        let mut i = n;
        while i > 0 {
            i -= 1;
            f[i] += 1;
            if f[i] < n {
                continue 'scan;
            }
            f[i] = 0;
        }
        return out;
    }
}

/// The non-bijective maps among [`brute_force_endomorphisms`].
pub fn brute_force_singular(params: &GraphParams) -> Vec<Vec<usize>> {
    brute_force_endomorphisms(params)
        .into_iter()
        .filter(|f| rank_of(f) < f.len())
        .collect()
}

/// Number of distinct images.
pub fn rank_of(map: &[usize]) -> usize {
    let mut seen = vec![false; map.len()];
    for &w in map {
        seen[w] = true;
    }
    seen.iter().filter(|&&s| s).count()
}

/// Class size -> number of preimage classes of that size.
pub fn kernel_sizes_of(map: &[usize]) -> BTreeMap<usize, usize> {
    let mut by_image: BTreeMap<usize, usize> = BTreeMap::new();
    for &w in map {
        *by_image.entry(w).or_insert(0) += 1;
    }
    let mut sizes = BTreeMap::new();
    for (_, count) in by_image {
        *sizes.entry(count).or_insert(0) += 1;
    }
    sizes
}

pub fn is_uniform(map: &[usize]) -> bool {
    kernel_sizes_of(map).len() == 1
}
