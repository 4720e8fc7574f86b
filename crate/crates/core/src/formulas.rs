//! Closed-form counting and formula-vs-search cross-checking.
//!
//! The central count: singular endomorphisms of the equal-sided distance-1
//! graph with image a fixed `k`-layer are built from a set partition of the
//! `m` coordinates into `k` blocks, a class-1 Latin hypercube per block,
//! and a matching of blocks to free coordinates. Summing over layers gives
//!
//! ```text
//! count(rank n^k) = C(m, k) * n^(m-k) * k! * sum over partitions of
//!                   {1..m} into k blocks of the product of per-block
//!                   hypercube counts
//! ```
//!
//! Hypercube counts enter as data ([`CubeCounts`]) so they can come from
//! enumeration or from a caller-provided table. [`crosscheck`] recomputes a
//! quantity from its formula and, optionally, from the exhaustive search
//! engine, and reports whether the two agree.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::cover::CoverLimits;
use crate::endo::{count_endomorphisms, SearchOptions};
use crate::error::{Error, Result};
use crate::graph::GraphParams;
use crate::latin::{count_cuboids, count_table, EnumLimits};
use crate::partitions::{count_p1, count_p2};

/// Serialize a [`BigUint`] as a decimal string (for `serialize_with`).
pub fn serialize_biguint<S: serde::Serializer>(
    value: &BigUint,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&value.to_string())
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigUint {
    let mut out = BigUint::from(1u32);
    for i in 2..=n {
        out *= BigUint::from(i);
    }
    out
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut out = BigUint::from(1u32);
    for i in 0..k {
        out = out * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    out
}

/// Stirling number of the second kind: partitions of an `m`-set into `k`
/// nonempty blocks.
pub fn stirling2(m: usize, k: usize) -> BigUint {
    if k > m {
        return BigUint::ZERO;
    }
    // row[j] = S(i, j); update j descending so row[j - 1] still holds
    // S(i - 1, j - 1) when it is read.
    let mut row = vec![BigUint::ZERO; k + 1];
    row[0] = BigUint::from(1u32);
    for _ in 1..=m {
        for j in (1..=k).rev() {
            row[j] = &row[j] * BigUint::from(j) + &row[j - 1];
        }
        row[0] = BigUint::ZERO;
    }
    row.pop().expect("row is nonempty")
}

/// All partitions of `{0..m}` into exactly `k` nonempty blocks, in
/// restricted-growth order. Blocks are internally ascending and ordered by
/// their smallest element.
pub fn set_partitions(m: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    if k == 0 || k > m {
        return out;
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn go(m: usize, k: usize, next: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if next == m {
            if blocks.len() == k {
                out.push(blocks.clone());
            }
            return;
        }
        // Elements left must still be able to open the missing blocks.
        let missing = k.saturating_sub(blocks.len());
        if m - next < missing {
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(next);
            go(m, k, next + 1, blocks, out);
            blocks[b].pop();
        }
        if blocks.len() < k {
            blocks.push(vec![next]);
            go(m, k, next + 1, blocks, out);
            blocks.pop();
        }
    }
    go(m, k, 0, &mut blocks, &mut out);
    out
}

/// Where a hypercube count came from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountSource {
    Enumerated,
    Provided,
}

/// Class-1 Latin hypercube counts of one order, by dimension.
#[derive(Clone, Debug)]
pub struct CubeCounts {
    order: u16,
    counts: BTreeMap<usize, (BigUint, CountSource)>,
}

impl CubeCounts {
    pub fn new(order: u16) -> Self {
        CubeCounts {
            order,
            counts: BTreeMap::new(),
        }
    }

    /// Fill dimensions `1..=max_dim` by exhaustive enumeration.
    pub fn enumerated(order: u16, max_dim: usize, limits: &EnumLimits) -> Result<Self> {
        let mut counts = CubeCounts::new(order);
        for (dim, count) in count_table(max_dim, order, 1, limits)? {
            counts
                .counts
                .insert(dim, (BigUint::from(count), CountSource::Enumerated));
        }
        Ok(counts)
    }

    pub fn order(&self) -> u16 {
        self.order
    }

    /// Record an externally known count (overwrites).
    pub fn insert(&mut self, dim: usize, count: BigUint) {
        self.counts.insert(dim, (count, CountSource::Provided));
    }

    pub fn get(&self, dim: usize) -> Result<&BigUint> {
        self.counts
            .get(&dim)
            .map(|(c, _)| c)
            .ok_or(Error::MissingCubeCount { d: dim })
    }

    pub fn source(&self, dim: usize) -> Option<CountSource> {
        self.counts.get(&dim).map(|&(_, s)| s)
    }

    /// Dimensions with a known count, ascending.
    pub fn dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts.keys().copied()
    }
}

fn check_mn(m: usize, n: u16) -> Result<()> {
    if m < 2 {
        return Err(Error::BadParameter(format!("need m >= 2, got {m}")));
    }
    if n < 2 {
        return Err(Error::BadParameter(format!("need n >= 2, got {n}")));
    }
    Ok(())
}

fn pow_biguint(base: usize, exp: usize) -> BigUint {
    let base = BigUint::from(base);
    let mut out = BigUint::from(1u32);
    for _ in 0..exp {
        out *= &base;
    }
    out
}

/// Singular endomorphisms of the equal-sided distance-1 graph with rank
/// exactly `n^k`, from the layer/partition/hypercube formula. Needs cube
/// counts for every dimension up to `m - k + 1` (the largest block size).
pub fn singular_rank_count(m: usize, n: u16, k: usize, cubes: &CubeCounts) -> Result<BigUint> {
    check_mn(m, n)?;
    if k == 0 || k >= m {
        return Err(Error::BadParameter(format!(
            "rank exponent {k} must lie in 1..={}",
            m - 1
        )));
    }
    if cubes.order() != n {
        return Err(Error::BadParameter(format!(
            "cube table has order {}, expected {n}",
            cubes.order()
        )));
    }
    let mut sum = BigUint::ZERO;
    for parts in set_partitions(m, k) {
        let mut product = BigUint::from(1u32);
        for block in &parts {
            product *= cubes.get(block.len())?;
        }
        sum += product;
    }
    let layers = binomial(m, k) * pow_biguint(n as usize, m - k);
    Ok(layers * factorial(k) * sum)
}

/// Total singular endomorphisms of the equal-sided distance-1 graph:
/// the rank formula summed over `k = 1..m-1`.
pub fn singular_total(m: usize, n: u16, cubes: &CubeCounts) -> Result<BigUint> {
    check_mn(m, n)?;
    let mut total = BigUint::ZERO;
    for k in 1..m {
        total += singular_rank_count(m, n, k, cubes)?;
    }
    Ok(total)
}

/// Two-coordinate distance-1 case in closed form: `2 n * latin_squares`.
pub fn two_coord_grid_count(n: u16, latin_squares: &BigUint) -> BigUint {
    BigUint::from(2u32) * BigUint::from(n) * latin_squares
}

/// Two-coordinate distance-2 case (tensor square of a complete graph):
/// `2 (n!)^2` singular endomorphisms.
pub fn two_coord_product_count(n: u16) -> BigUint {
    let f = factorial(n as usize);
    BigUint::from(2u32) * &f * &f
}

/// Singular endomorphisms of the equal-sided graph with distances
/// `{2..m}`: `p1 * cubes(m-1) * (n^(m-1))!` where `p1` counts partitions
/// into lines and `cube_count` is the class-1 count in dimension `m - 1`.
pub fn complement_hamming_count(
    m: usize,
    n: u16,
    p1: &BigUint,
    cube_count: &BigUint,
) -> Result<BigUint> {
    check_mn(m, n)?;
    let image_size = pow_usize_checked(n as usize, m - 1)?;
    Ok(p1 * cube_count * factorial(image_size))
}

/// Singular endomorphisms of the equal-sided graph with distances
/// `{1..m-1}`: `p2 * m n * (n^(m-1))!` where `p2` counts partitions into
/// maximum cliques of the distance-`m` graph.
pub fn complement_product_count(m: usize, n: u16, p2: &BigUint) -> Result<BigUint> {
    check_mn(m, n)?;
    let image_size = pow_usize_checked(n as usize, m - 1)?;
    Ok(p2 * BigUint::from(m) * BigUint::from(n) * factorial(image_size))
}

/// Singular endomorphisms of the two-coordinate cuboid with sides
/// `n1 > n2 >= 2` and distance set `{1}`: every one has rank `n1`, image a
/// side-`n1` line (`n2` of them), and per line one Latin cuboid of type
/// `(n1, n2)`, so the count is `n2 * #cuboids(n1, n2)` (the cuboid count is
/// obtained by enumeration).
pub fn rectangle_count(n1: u16, n2: u16, limits: &EnumLimits) -> Result<BigUint> {
    if !(n1 > n2 && n2 >= 2) {
        return Err(Error::BadParameter(format!(
            "rectangle counts need n1 > n2 >= 2, got {n1}, {n2}"
        )));
    }
    let cuboids = count_cuboids(&[n1, n2], 1, limits)?;
    Ok(BigUint::from(n2) * BigUint::from(cuboids))
}

fn pow_usize_checked(base: usize, exp: usize) -> Result<usize> {
    let mut out = 1usize;
    for _ in 0..exp {
        out = out
            .checked_mul(base)
            .ok_or(Error::Overflow("vertex count exceeds usize"))?;
    }
    Ok(out)
}

/// How a reported count was obtained.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Formula,
    Exhaustive,
    Both,
}

/// A countable quantity with a closed-form side and a searchable side.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "quantity", rename_all = "kebab-case")]
pub enum Quantity {
    /// Rank-`n^k` singular endomorphisms of the distance-1 graph.
    SingularRank { m: usize, n: u16, k: usize },
    /// All singular endomorphisms of the distance-1 graph.
    SingularTotal { m: usize, n: u16 },
    /// Singular endomorphisms of the distances-`{2..m}` graph.
    ComplementOfHamming { m: usize, n: u16 },
    /// Singular endomorphisms of the distances-`{1..m-1}` graph.
    ComplementOfProduct { m: usize, n: u16 },
    /// Singular endomorphisms of the two-coordinate distance-2 graph.
    TwoCoordProduct { n: u16 },
    /// Singular endomorphisms of the `n1 x n2` cuboid, `n1 > n2`.
    Rectangle { n1: u16, n2: u16 },
}

impl Quantity {
    /// The graph whose singular endomorphisms the quantity counts.
    pub fn graph(&self) -> Result<GraphParams> {
        match *self {
            Quantity::SingularRank { m, n, .. } | Quantity::SingularTotal { m, n } => {
                GraphParams::hamming(m, n)
            }
            Quantity::ComplementOfHamming { m, n } => GraphParams::equal_sided(m, n, 2..=m),
            Quantity::ComplementOfProduct { m, n } => GraphParams::equal_sided(m, n, 1..=m - 1),
            Quantity::TwoCoordProduct { n } => GraphParams::equal_sided(2, n, [2]),
            Quantity::Rectangle { n1, n2 } => GraphParams::new(vec![n1, n2], [1]),
        }
    }

    /// Evaluate the closed-form side, enumerating whatever auxiliary
    /// counts (hypercubes, partitions) it needs.
    pub fn formula_value(&self, limits: &EnumLimits) -> Result<BigUint> {
        let cover = CoverLimits {
            max_nodes: limits.max_nodes,
        };
        match *self {
            Quantity::SingularRank { m, n, k } => {
                check_mn(m, n)?;
                if k == 0 || k >= m {
                    return Err(Error::BadParameter(format!(
                        "rank exponent {k} must lie in 1..={}",
                        m - 1
                    )));
                }
                let cubes = CubeCounts::enumerated(n, m - k + 1, limits)?;
                singular_rank_count(m, n, k, &cubes)
            }
            Quantity::SingularTotal { m, n } => {
                check_mn(m, n)?;
                let cubes = CubeCounts::enumerated(n, m, limits)?;
                singular_total(m, n, &cubes)
            }
            Quantity::ComplementOfHamming { m, n } => {
                let p1 = count_p1(m, n, &cover)?;
                let cubes = CubeCounts::enumerated(n, m - 1, limits)?;
                complement_hamming_count(m, n, &p1.value, cubes.get(m - 1)?)
            }
            Quantity::ComplementOfProduct { m, n } => {
                let p2 = count_p2(m, n, &cover)?;
                complement_product_count(m, n, &p2.value)
            }
            Quantity::TwoCoordProduct { n } => {
                check_mn(2, n)?;
                Ok(two_coord_product_count(n))
            }
            Quantity::Rectangle { n1, n2 } => rectangle_count(n1, n2, limits),
        }
    }
}

/// One formula-vs-search comparison. Big values are carried as decimal
/// strings.
#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    #[serde(flatten)]
    pub quantity: Quantity,
    pub graph: GraphParams,
    pub formula: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched: Option<bool>,
    pub provenance: Provenance,
}

/// Evaluate a quantity's formula and, when search options are given, also
/// count by exhaustive search and compare. A mismatch is reported, not an
/// error; budget exhaustion in either side is an error.
pub fn crosscheck(
    quantity: &Quantity,
    limits: &EnumLimits,
    search: Option<&SearchOptions>,
) -> Result<CountReport> {
    let graph = quantity.graph()?;
    let formula = quantity.formula_value(limits)?;
    let mut search_value = None;
    if let Some(base) = search {
        let mut opts = base.clone();
        opts.singular_only = true;
        if let Quantity::SingularRank { m: _, n, k } = *quantity {
            let rank = pow_usize_checked(n as usize, k)?;
            opts.rank_filter = Some([rank].into_iter().collect());
        }
        let summary = count_endomorphisms(&graph, &opts)?;
        search_value = Some(BigUint::from(summary.total));
    }
    let matched = search_value.as_ref().map(|s| *s == formula);
    Ok(CountReport {
        quantity: quantity.clone(),
        graph,
        formula: formula.to_string(),
        search: search_value.map(|s| s.to_string()),
        matched,
        provenance: if matched.is_some() {
            Provenance::Both
        } else {
            Provenance::Formula
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(0), BigUint::from(1u32));
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(10, 0), BigUint::from(1u32));
        assert_eq!(binomial(3, 5), BigUint::ZERO);
        assert_eq!(binomial(20, 10), BigUint::from(184756u32));
    }

    #[test]
    fn stirling_matches_partition_enumeration() {
        for m in 1..=6 {
            for k in 1..=m {
                let listed = set_partitions(m, k);
                assert_eq!(
                    BigUint::from(listed.len()),
                    stirling2(m, k),
                    "S({m},{k})"
                );
                for parts in &listed {
                    let mut all: Vec<usize> = parts.iter().flatten().copied().collect();
                    all.sort_unstable();
                    assert_eq!(all, (0..m).collect::<Vec<_>>());
                    for w in parts.windows(2) {
                        assert!(w[0][0] < w[1][0], "blocks ordered by minimum");
                    }
                }
            }
        }
        assert_eq!(stirling2(4, 2), BigUint::from(7u32));
        assert_eq!(stirling2(5, 3), BigUint::from(25u32));
        assert!(set_partitions(3, 0).is_empty());
        assert!(set_partitions(2, 3).is_empty());
    }

    #[test]
    fn cube_count_table_for_order_three() {
        let cubes = CubeCounts::enumerated(3, 4, &EnumLimits::default()).unwrap();
        assert_eq!(cubes.get(1).unwrap(), &BigUint::from(6u32));
        assert_eq!(cubes.get(2).unwrap(), &BigUint::from(12u32));
        assert_eq!(cubes.get(3).unwrap(), &BigUint::from(24u32));
        assert_eq!(cubes.get(4).unwrap(), &BigUint::from(48u32));
        assert!(matches!(
            cubes.get(5),
            Err(Error::MissingCubeCount { d: 5 })
        ));
        assert_eq!(cubes.source(2), Some(CountSource::Enumerated));
        let mut cubes = cubes;
        cubes.insert(5, BigUint::from(96u32));
        assert_eq!(cubes.source(5), Some(CountSource::Provided));
        assert_eq!(cubes.dims().collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn rank_counts_for_small_grids() {
        let limits = EnumLimits::default();
        let cubes = CubeCounts::enumerated(3, 4, &limits).unwrap();
        assert_eq!(
            singular_rank_count(2, 3, 1, &cubes).unwrap(),
            BigUint::from(72u32)
        );
        assert_eq!(
            singular_rank_count(3, 3, 1, &cubes).unwrap(),
            BigUint::from(648u32)
        );
        assert_eq!(
            singular_rank_count(3, 3, 2, &cubes).unwrap(),
            BigUint::from(3888u32)
        );
        assert_eq!(
            singular_total(3, 3, &cubes).unwrap(),
            BigUint::from(4536u32)
        );
        assert_eq!(
            singular_rank_count(4, 3, 1, &cubes).unwrap(),
            BigUint::from(5184u32)
        );
        assert_eq!(
            singular_rank_count(4, 3, 2, &cubes).unwrap(),
            BigUint::from(108864u32)
        );
        assert_eq!(
            singular_rank_count(4, 3, 3, &cubes).unwrap(),
            BigUint::from(186624u32)
        );
        assert_eq!(
            singular_total(4, 3, &cubes).unwrap(),
            BigUint::from(300672u32)
        );
        // Bad arguments.
        assert!(singular_rank_count(3, 3, 0, &cubes).is_err());
        assert!(singular_rank_count(3, 3, 3, &cubes).is_err());
        assert!(singular_rank_count(1, 3, 1, &cubes).is_err());
        // Missing dimensions surface as errors, not zeros.
        let empty = CubeCounts::new(3);
        assert!(matches!(
            singular_rank_count(2, 3, 1, &empty),
            Err(Error::MissingCubeCount { d: 2 })
        ));
    }

    #[test]
    fn closed_forms_for_two_coordinates() {
        assert_eq!(
            two_coord_grid_count(3, &BigUint::from(12u32)),
            BigUint::from(72u32)
        );
        assert_eq!(
            two_coord_grid_count(4, &BigUint::from(576u32)),
            BigUint::from(4608u32)
        );
        assert_eq!(two_coord_product_count(3), BigUint::from(72u32));
        assert_eq!(two_coord_product_count(4), BigUint::from(1152u32));
    }

    #[test]
    fn complement_counts() {
        // Distances {2,3} on three coordinates of side 3:
        // 21 line partitions * 12 squares * 9! relabelings.
        let v = complement_hamming_count(3, 3, &BigUint::from(21u32), &BigUint::from(12u32))
            .unwrap();
        assert_eq!(v, BigUint::from(91_445_760u64));
        // Distances {1,2}: 40 clique partitions * 9 * 9!.
        let v = complement_product_count(3, 3, &BigUint::from(40u32)).unwrap();
        assert_eq!(v, BigUint::from(130_636_800u64));
    }

    #[test]
    fn rectangle_counts() {
        let limits = EnumLimits::default();
        assert_eq!(
            rectangle_count(3, 2, &limits).unwrap(),
            BigUint::from(24u32)
        );
        assert_eq!(
            rectangle_count(4, 2, &limits).unwrap(),
            BigUint::from(432u32)
        );
        assert!(rectangle_count(3, 3, &limits).is_err());
        assert!(rectangle_count(2, 3, &limits).is_err());
    }

    #[test]
    fn crosscheck_formula_only() {
        let q = Quantity::SingularTotal { m: 3, n: 3 };
        let report = crosscheck(&q, &EnumLimits::default(), None).unwrap();
        assert_eq!(report.formula, "4536");
        assert_eq!(report.search, None);
        assert_eq!(report.matched, None);
        assert_eq!(report.provenance, Provenance::Formula);
    }

    #[test]
    fn crosscheck_against_search() {
        let limits = EnumLimits::default();
        let opts = SearchOptions::default();
        let q = Quantity::SingularRank { m: 2, n: 3, k: 1 };
        let report = crosscheck(&q, &limits, Some(&opts)).unwrap();
        assert_eq!(report.formula, "72");
        assert_eq!(report.search.as_deref(), Some("72"));
        assert_eq!(report.matched, Some(true));
        assert_eq!(report.provenance, Provenance::Both);

        let q = Quantity::TwoCoordProduct { n: 3 };
        let report = crosscheck(&q, &limits, Some(&opts)).unwrap();
        assert_eq!(report.matched, Some(true));

        let q = Quantity::Rectangle { n1: 3, n2: 2 };
        let report = crosscheck(&q, &limits, Some(&opts)).unwrap();
        assert_eq!(report.formula, "24");
        assert_eq!(report.matched, Some(true));
    }

    #[test]
    fn quantity_graphs() {
        assert_eq!(
            Quantity::ComplementOfHamming { m: 3, n: 3 }.graph().unwrap(),
            GraphParams::equal_sided(3, 3, [2, 3]).unwrap()
        );
        assert_eq!(
            Quantity::ComplementOfProduct { m: 3, n: 3 }.graph().unwrap(),
            GraphParams::equal_sided(3, 3, [1, 2]).unwrap()
        );
        assert_eq!(
            Quantity::Rectangle { n1: 3, n2: 2 }.graph().unwrap(),
            GraphParams::new(vec![3, 2], [1]).unwrap()
        );
    }
}
