//! Counting partitions of the vertex set into lines or diagonal cliques.
//!
//! Two families are counted, both via exact cover over the vertex set:
//!
//! - **P1(m, n)**: partitions of the `S = {1}` graph's vertex set into
//!   1-layers (axis-aligned lines). Mixed directions are allowed, which is
//!   what makes the count grow: closed forms are known for `m = 2` (always
//!   2) and `m = 3` (`3 * (2^n - 1)`).
//! - **P2(m, n)**: partitions arising as kernels of the singular
//!   endomorphisms of the `S = {1..m-1}` graph, whose classes are cliques
//!   of the all-different graph `S = {m}`. For `n >= 3` these are exactly
//!   the partitions into *maximal* cliques (size-`n` diagonals), counted as
//!   exact covers. For `n = 2` the `S = {m}` graph is a perfect matching of
//!   antipodal pairs, and the kernel classes may be pairs or singletons
//!   with at least one pair: every nonempty subset of the `2^(m-1)` pairs
//!   (completed by singletons) qualifies, giving `2^(2^(m-1)) - 1`. The
//!   counter extends the option set accordingly and subtracts the discrete
//!   partition, keeping one code path for both cases.

use num_bigint::BigUint;
use serde::Serialize;

use crate::cliques::{maximal_cliques, Clique, CliqueLimits};
use crate::cover::{count_exact_covers, enumerate_exact_covers, CoverLimits, CoverProblem};
use crate::error::{Error, Result};
use crate::graph::{self, GraphParams};

/// Which partition family a count refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum PartitionKind {
    /// Partitions into 1-layers of the `S = {1}` graph.
    P1,
    /// Kernel partitions into cliques of the `S = {m}` graph.
    P2,
}

/// An exact partition count with its search cost.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionCount {
    pub kind: PartitionKind,
    pub m: usize,
    pub n: u16,
    /// Decimal string form is used in JSON output.
    #[serde(serialize_with = "crate::formulas::serialize_biguint")]
    pub value: BigUint,
    pub nodes: u64,
}

fn check_args(m: usize, n: u16) -> Result<()> {
    if m < 2 {
        return Err(Error::BadParameter(format!(
            "partition counts need m >= 2, got {m}"
        )));
    }
    if n < 2 {
        return Err(Error::BadParameter(format!(
            "partition counts need n >= 2, got {n}"
        )));
    }
    Ok(())
}

/// Count partitions of the `n^m` tuples into axis-aligned lines.
pub fn count_p1(m: usize, n: u16, limits: &CoverLimits) -> Result<PartitionCount> {
    check_args(m, n)?;
    let params = GraphParams::hamming(m, n)?;
    let options: Vec<Vec<usize>> = graph::enumerate_layers(&params, 1)?
        .map(|layer| layer.vertices(&params))
        .collect::<Result<_>>()?;
    let problem = CoverProblem::new(params.vertex_count(), options)?;
    let stats = count_exact_covers(&problem, limits)?;
    Ok(PartitionCount {
        kind: PartitionKind::P1,
        m,
        n,
        value: stats.solutions,
        nodes: stats.nodes,
    })
}

/// Closed forms for P1: `m = 2` gives 2, `m = 3` gives `3 * (2^n - 1)`.
/// Returns `None` for other `m`.
pub fn p1_closed_form(m: usize, n: u16) -> Option<BigUint> {
    match m {
        2 => Some(BigUint::from(2u32)),
        3 => {
            let pow = BigUint::from(2u32).pow(n as u32);
            Some(BigUint::from(3u32) * (pow - 1u32))
        }
        _ => None,
    }
}

/// The diagonal cliques of the `S = {m}` graph on `n^m` tuples, via the
/// general enumerator.
fn diagonal_clique_options(m: usize, n: u16) -> Result<(GraphParams, Vec<Clique>)> {
    let params = GraphParams::equal_sided(m, n, [m])?;
    let cliques = maximal_cliques(&params, &CliqueLimits::default())?;
    Ok((params, cliques))
}

/// Count kernel partitions into cliques of the `S = {m}` graph (see the
/// module docs for the exact family, including the `n = 2` convention).
pub fn count_p2(m: usize, n: u16, limits: &CoverLimits) -> Result<PartitionCount> {
    check_args(m, n)?;
    let (params, cliques) = diagonal_clique_options(m, n)?;
    let vertex_count = params.vertex_count();
    let mut options: Vec<Vec<usize>> = cliques.iter().map(|c| c.vertices().to_vec()).collect();
    let singletons_added = n == 2;
    if singletons_added {
        options.extend((0..vertex_count).map(|v| vec![v]));
    }
    let problem = CoverProblem::new(vertex_count, options)?;
    let stats = count_exact_covers(&problem, limits)?;
    let value = if singletons_added {
        // Exclude the all-singleton (discrete) partition.
        stats.solutions - 1u32
    } else {
        stats.solutions
    };
    Ok(PartitionCount {
        kind: PartitionKind::P2,
        m,
        n,
        value,
        nodes: stats.nodes,
    })
}

/// Enumerate the P2 partitions themselves as lists of cliques. Restricted
/// to `n >= 3`, where every part is a maximal clique; fails past
/// `max_results`.
pub fn p2_partitions(
    m: usize,
    n: u16,
    limits: &CoverLimits,
    max_results: usize,
) -> Result<Vec<Vec<Clique>>> {
    check_args(m, n)?;
    if n < 3 {
        return Err(Error::BadParameter(
            "partition enumeration needs n >= 3 (parts are maximal cliques)".into(),
        ));
    }
    let (params, cliques) = diagonal_clique_options(m, n)?;
    let options: Vec<Vec<usize>> = cliques.iter().map(|c| c.vertices().to_vec()).collect();
    let problem = CoverProblem::new(params.vertex_count(), options)?;
    let covers = enumerate_exact_covers(&problem, limits, max_results)?;
    Ok(covers
        .into_iter()
        .map(|option_indices| {
            option_indices
                .into_iter()
                .map(|oi| cliques[oi].clone())
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value_u64(count: &PartitionCount) -> u64 {
        let digits = count.value.to_u64_digits();
        match digits.len() {
            0 => 0,
            1 => digits[0],
            _ => panic!("value too large for test helper"),
        }
    }

    #[test]
    fn p1_squares_always_two() {
        for n in [2u16, 3, 4] {
            let count = count_p1(2, n, &CoverLimits::default()).unwrap();
            assert_eq!(value_u64(&count), 2, "n = {n}");
            assert_eq!(count.value, p1_closed_form(2, n).unwrap());
        }
    }

    #[test]
    fn p1_cubes_match_closed_form() {
        for n in [2u16, 3] {
            let count = count_p1(3, n, &CoverLimits::default()).unwrap();
            assert_eq!(count.value, p1_closed_form(3, n).unwrap(), "n = {n}");
        }
        assert_eq!(
            p1_closed_form(3, 2).unwrap(),
            BigUint::from(9u32)
        );
        assert_eq!(p1_closed_form(4, 2), None);
    }

    #[test]
    fn p2_small_values() {
        let limits = CoverLimits::default();
        assert_eq!(value_u64(&count_p2(2, 2, &limits).unwrap()), 3);
        assert_eq!(value_u64(&count_p2(2, 3, &limits).unwrap()), 2);
        assert_eq!(value_u64(&count_p2(3, 2, &limits).unwrap()), 15);
    }

    #[test]
    fn p2_n2_matches_matching_subset_count() {
        // For n = 2 the count must be 2^(2^(m-1)) - 1.
        let limits = CoverLimits::default();
        for m in [2usize, 3, 4] {
            let expected = BigUint::from(2u32).pow(2u32.pow((m - 1) as u32)) - 1u32;
            assert_eq!(count_p2(m, 2, &limits).unwrap().value, expected, "m = {m}");
        }
    }

    #[test]
    fn p2_partition_enumeration_is_consistent_with_count() {
        let limits = CoverLimits::default();
        let partitions = p2_partitions(2, 3, &limits, 100).unwrap();
        assert_eq!(partitions.len(), 2);
        for parts in &partitions {
            let mut seen = vec![false; 9];
            for part in parts {
                assert_eq!(part.len(), 3);
                for &v in part.vertices() {
                    assert!(!std::mem::replace(&mut seen[v], true));
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
        assert!(p2_partitions(3, 2, &limits, 100).is_err());
    }

    #[test]
    fn arguments_are_checked() {
        let limits = CoverLimits::default();
        assert!(count_p1(1, 3, &limits).is_err());
        assert!(count_p1(2, 1, &limits).is_err());
        assert!(count_p2(0, 2, &limits).is_err());
    }

    #[test]
    fn budgets_propagate() {
        let limits = CoverLimits { max_nodes: Some(5) };
        assert!(matches!(
            count_p1(3, 3, &limits),
            Err(Error::NodeBudget { limit: 5 })
        ));
    }
}
