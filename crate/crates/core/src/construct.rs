//! Building singular endomorphisms from layers and Latin hypercubes.
//!
//! A construction spec packages: the image layer, a partition of the domain
//! coordinates into one block per free coordinate of the layer, a class-1
//! Latin hypercube per block, and the matching that says which block feeds
//! which free coordinate. Building evaluates each block's hypercube on the
//! block's coordinates and writes the symbol into the matched coordinate;
//! the fixed coordinates of the layer are copied as-is.
//!
//! On an equal-sided graph with distance set `{1}` every spec builds to a
//! singular endomorphism, distinct specs give distinct maps, and every
//! singular endomorphism arises this way (see [`crate::endo::decompose`]
//! for the inverse direction). [`build_endomorphism`] still re-checks the
//! edge-preservation and singularity of its output, so feeding it layers of
//! other equal-sided graphs fails loudly instead of returning a non-map.

use itertools::Itertools;
use rand::Rng;
use serde_json::{json, Value};

use crate::endo::{check_endomorphism, EndoMap};
use crate::error::{Error, Result};
use crate::formulas::set_partitions;
use crate::graph::{enumerate_layers, GraphParams, Layer};
use crate::latin::{enumerate_cubes, EnumLimits, LatinHypercube};

/// The data of one layer/hypercube construction, held in canonical form:
/// blocks sorted internally and ordered by their smallest coordinate, with
/// cubes and matching carried along.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstructionSpec {
    layer: Layer,
    parts: Vec<Vec<usize>>,
    cubes: Vec<LatinHypercube>,
    matching: Vec<usize>,
}

impl ConstructionSpec {
    /// Validate and canonicalize a spec for the given graph. `parts[j]`
    /// lists the domain coordinates feeding `cubes[j]`, whose symbol lands
    /// in image coordinate `matching[j]` (a free coordinate of `layer`).
    pub fn new(
        params: &GraphParams,
        layer: Layer,
        parts: Vec<Vec<usize>>,
        cubes: Vec<LatinHypercube>,
        matching: Vec<usize>,
    ) -> Result<Self> {
        let mut parts = parts;
        for part in &mut parts {
            part.sort_unstable();
        }
        let k = parts.len();
        let mut idx: Vec<usize> = (0..k).collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(Error::BadSpec("empty coordinate block".into()));
        }
        idx.sort_by_key(|&j| parts[j][0]);
        let reorder_ok = idx.len() == cubes.len() && idx.len() == matching.len();
        if !reorder_ok {
            return Err(Error::BadSpec(format!(
                "{} blocks, {} cubes, {} matched coordinates; counts must agree",
                parts.len(),
                cubes.len(),
                matching.len()
            )));
        }
        let parts: Vec<Vec<usize>> = idx.iter().map(|&j| parts[j].clone()).collect();
        let cubes: Vec<LatinHypercube> = idx.iter().map(|&j| cubes[j].clone()).collect();
        let matching: Vec<usize> = idx.iter().map(|&j| matching[j]).collect();
        let spec = ConstructionSpec {
            layer,
            parts,
            cubes,
            matching,
        };
        spec.validate_against(params)?;
        Ok(spec)
    }

    /// The image layer.
    pub fn layer(&self) -> &Layer {
        &self.layer
    }

    /// The coordinate blocks, each sorted, ordered by smallest coordinate.
    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// One class-1 hypercube per block, aligned with [`Self::parts`].
    pub fn cubes(&self) -> &[LatinHypercube] {
        &self.cubes
    }

    /// `matching[j]` is the free coordinate of the layer fed by block `j`.
    pub fn matching(&self) -> &[usize] {
        &self.matching
    }

    /// Full validation against a graph: layer shape, block partition,
    /// cube shapes and Latin property, and the matching permutation.
    pub fn validate_against(&self, params: &GraphParams) -> Result<()> {
        let n = params.equal_side().ok_or_else(|| {
            Error::UnsupportedFamily(format!("construction requires equal sides, got {params}"))
        })?;
        let m = params.m();
        self.layer.validate_for(params)?;
        let k = self.layer.dim();
        if k == 0 || k >= m {
            return Err(Error::BadSpec(format!(
                "image layer dimension {k} must lie in 1..={}",
                m - 1
            )));
        }
        if self.parts.len() != k || self.cubes.len() != k || self.matching.len() != k {
            return Err(Error::BadSpec(format!(
                "layer has {k} free coordinates but the spec carries {} blocks, {} cubes, {} matches",
                self.parts.len(),
                self.cubes.len(),
                self.matching.len()
            )));
        }
        let mut covered: Vec<usize> = self.parts.iter().flatten().copied().collect();
        covered.sort_unstable();
        if covered != (0..m).collect::<Vec<_>>() {
            return Err(Error::BadSpec(
                "blocks must partition the domain coordinates".into(),
            ));
        }
        for (part, cube) in self.parts.iter().zip(&self.cubes) {
            if cube.class() != 1 {
                return Err(Error::BadSpec(format!(
                    "block cube has class {}, expected 1",
                    cube.class()
                )));
            }
            if cube.order() != n {
                return Err(Error::BadSpec(format!(
                    "block cube has order {}, expected {n}",
                    cube.order()
                )));
            }
            if cube.dim() != part.len() {
                return Err(Error::BadSpec(format!(
                    "block {{{}}} has {} coordinates but its cube has dimension {}",
                    part.iter().map(|&i| (i + 1).to_string()).collect::<Vec<_>>().join(","),
                    part.len(),
                    cube.dim()
                )));
            }
            if let Err(violation) = cube.validate() {
                return Err(Error::BadSpec(format!("block cube is not Latin: {violation}")));
            }
        }
        let mut matched = self.matching.clone();
        matched.sort_unstable();
        if matched != self.layer.free() {
            return Err(Error::BadSpec(
                "matching must be a permutation of the layer's free coordinates".into(),
            ));
        }
        Ok(())
    }

    /// JSON form: layer, blocks and matching 1-indexed, cubes as cell
    /// arrays.
    pub fn to_json(&self) -> Value {
        json!({
            "layer": serde_json::to_value(&self.layer).expect("layer serializes"),
            "parts": self
                .parts
                .iter()
                .map(|p| p.iter().map(|&i| i + 1).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "cubes": self.cubes.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "matching": self.matching.iter().map(|&i| i + 1).collect::<Vec<_>>(),
        })
    }
}

/// Evaluate a spec into a concrete map and check the result is a singular
/// endomorphism of `params`.
pub fn build_endomorphism(params: &GraphParams, spec: &ConstructionSpec) -> Result<EndoMap> {
    spec.validate_against(params)?;
    let m = params.m();
    let count = params.vertex_count();
    let mut images = Vec::with_capacity(count);
    let mut t = vec![0u16; m];
    let mut img = vec![0u16; m];
    for &(coord, value) in spec.layer.fixed() {
        img[coord] = value;
    }
    let mut pos_bufs: Vec<Vec<u16>> = spec.parts.iter().map(|p| vec![0u16; p.len()]).collect();
    for v in 0..count {
        params.decode_into(v, &mut t);
        for (j, part) in spec.parts.iter().enumerate() {
            for (slot, &coord) in pos_bufs[j].iter_mut().zip(part) {
                *slot = t[coord];
            }
            img[spec.matching[j]] = spec.cubes[j].get(&pos_bufs[j]) as u16;
        }
        images.push(params.encode(&img)?);
    }
    let map = EndoMap::new(images)?;
    check_endomorphism(params, &map)?;
    if !map.is_singular() {
        return Err(Error::NotSingular);
    }
    Ok(map)
}

/// Enumerate every construction spec of an equal-sided graph with distance
/// set `{1}`, in a fixed deterministic order: by image-layer dimension,
/// then layer, then coordinate partition, then matching, then cube choice.
/// Fails with [`Error::CapExceeded`] when more than `max_results` exist and
/// propagates node budgets from the hypercube enumerations.
pub fn enumerate_construction_specs(
    params: &GraphParams,
    limits: &EnumLimits,
    max_results: usize,
) -> Result<Vec<ConstructionSpec>> {
    let n = params.equal_side().ok_or_else(|| {
        Error::UnsupportedFamily(format!("construction requires equal sides, got {params}"))
    })?;
    if params.distances().iter().copied().collect::<Vec<_>>() != vec![1] {
        return Err(Error::UnsupportedFamily(format!(
            "spec enumeration covers S = {{1}} graphs, got {params}"
        )));
    }
    let m = params.m();
    // Hypercubes by dimension; dimension d appears when some block has d
    // coordinates, so 1..=m covers everything.
    let mut cubes_by_dim: Vec<Vec<LatinHypercube>> = vec![Vec::new()];
    for d in 1..=m {
        cubes_by_dim.push(enumerate_cubes(d, n, 1, limits, max_results.max(1))?);
    }
    let mut out = Vec::new();
    for k in 1..m {
        for layer in enumerate_layers(params, k)? {
            for parts in set_partitions(m, k) {
                let free = layer.free().to_vec();
                for matching in free.iter().copied().permutations(k) {
                    let choices = parts
                        .iter()
                        .map(|p| 0..cubes_by_dim[p.len()].len())
                        .multi_cartesian_product();
                    for choice in choices {
                        let cubes: Vec<LatinHypercube> = choice
                            .iter()
                            .zip(&parts)
                            .map(|(&c, p)| cubes_by_dim[p.len()][c].clone())
                            .collect();
                        if out.len() == max_results {
                            return Err(Error::CapExceeded {
                                cap: max_results as u64,
                            });
                        }
                        out.push(ConstructionSpec::new(
                            params,
                            layer.clone(),
                            parts.clone(),
                            cubes,
                            matching.clone(),
                        )?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Draw `count` distinct specs uniformly without replacement, returned in
/// enumeration order. Deterministic for a fixed RNG state.
pub fn sample_construction_specs(
    params: &GraphParams,
    count: usize,
    rng: &mut impl Rng,
    limits: &EnumLimits,
    enum_cap: usize,
) -> Result<Vec<ConstructionSpec>> {
    let all = enumerate_construction_specs(params, limits, enum_cap)?;
    if count >= all.len() {
        return Ok(all);
    }
    let mut picks: Vec<usize> = rand::seq::index::sample(rng, all.len(), count).into_vec();
    picks.sort_unstable();
    Ok(picks.into_iter().map(|i| all[i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn h(m: usize, n: u16) -> GraphParams {
        GraphParams::hamming(m, n).unwrap()
    }

    fn addition_square() -> LatinHypercube {
        LatinHypercube::new(2, 3, 1, vec![0, 1, 2, 1, 2, 0, 2, 0, 1]).unwrap()
    }

    fn line_layer(params: &GraphParams) -> Layer {
        // free = {1}, fixed coordinate 0 at value 0.
        Layer::new(params, vec![1], vec![(0, 0)]).unwrap()
    }

    #[test]
    fn build_addition_fold_on_h23() {
        let p = h(2, 3);
        let spec = ConstructionSpec::new(
            &p,
            line_layer(&p),
            vec![vec![0, 1]],
            vec![addition_square()],
            vec![1],
        )
        .unwrap();
        let map = build_endomorphism(&p, &spec).unwrap();
        // (a, b) -> (0, a + b mod 3); with v = 3a + b the image id is
        // (a + b) mod 3.
        let expected: Vec<usize> = (0..9).map(|v| (v / 3 + v % 3) % 3).collect();
        assert_eq!(map.to_vec(), expected);
    }

    #[test]
    fn blocks_are_canonicalized() {
        let p = h(3, 3);
        let layer = Layer::new(&p, vec![0, 2], vec![(1, 1)]).unwrap();
        let cube1 = LatinHypercube::new(1, 3, 1, vec![2, 0, 1]).unwrap();
        let square = addition_square();
        // Pass blocks out of order and unsorted inside.
        let spec = ConstructionSpec::new(
            &p,
            layer,
            vec![vec![1], vec![2, 0]],
            vec![cube1.clone(), square.clone()],
            vec![2, 0],
        )
        .unwrap();
        assert_eq!(spec.parts(), &[vec![0, 2], vec![1]]);
        assert_eq!(spec.matching(), &[0, 2]);
        assert_eq!(spec.cubes()[0], square);
        assert_eq!(spec.cubes()[1], cube1);
    }

    #[test]
    fn bad_specs_are_rejected() {
        let p = h(2, 3);
        let layer = line_layer(&p);
        let square = addition_square();
        // Matching is not a permutation of the free coordinates.
        assert!(matches!(
            ConstructionSpec::new(&p, layer.clone(), vec![vec![0, 1]], vec![square.clone()], vec![0]),
            Err(Error::BadSpec(_))
        ));
        // Blocks do not cover every coordinate.
        assert!(matches!(
            ConstructionSpec::new(
                &p,
                layer.clone(),
                vec![vec![0]],
                vec![LatinHypercube::new(1, 3, 1, vec![0, 1, 2]).unwrap()],
                vec![1]
            ),
            Err(Error::BadSpec(_))
        ));
        // Cube dimension disagrees with the block size.
        assert!(matches!(
            ConstructionSpec::new(
                &p,
                layer.clone(),
                vec![vec![0, 1]],
                vec![LatinHypercube::new(1, 3, 1, vec![0, 1, 2]).unwrap()],
                vec![1]
            ),
            Err(Error::BadSpec(_))
        ));
        // Cells that are not Latin.
        assert!(matches!(
            ConstructionSpec::new(
                &p,
                layer.clone(),
                vec![vec![0, 1]],
                vec![LatinHypercube::new(2, 3, 1, vec![0; 9]).unwrap()],
                vec![1]
            ),
            Err(Error::BadSpec(_))
        ));
        // The full layer is not a singular image.
        let full = Layer::new(&p, vec![0, 1], vec![]).unwrap();
        assert!(matches!(
            ConstructionSpec::new(
                &p,
                full,
                vec![vec![0], vec![1]],
                vec![
                    LatinHypercube::new(1, 3, 1, vec![0, 1, 2]).unwrap(),
                    LatinHypercube::new(1, 3, 1, vec![0, 1, 2]).unwrap()
                ],
                vec![0, 1]
            ),
            Err(Error::BadSpec(_))
        ));
    }

    #[test]
    fn spec_counts_match_known_totals() {
        let limits = EnumLimits::default();
        let specs = enumerate_construction_specs(&h(2, 3), &limits, 1 << 20).unwrap();
        assert_eq!(specs.len(), 72);
        let specs = enumerate_construction_specs(&h(3, 3), &limits, 1 << 20).unwrap();
        assert_eq!(specs.len(), 4536);
        // Tight caps fail loudly.
        assert!(matches!(
            enumerate_construction_specs(&h(2, 3), &limits, 10),
            Err(Error::CapExceeded { cap: 10 })
        ));
    }

    #[test]
    fn every_h23_spec_builds_a_distinct_singular_endomorphism() {
        let p = h(2, 3);
        let specs = enumerate_construction_specs(&p, &EnumLimits::default(), 1 << 20).unwrap();
        let mut maps = std::collections::BTreeSet::new();
        for spec in &specs {
            let map = build_endomorphism(&p, spec).unwrap();
            assert!(map.is_singular());
            maps.insert(map.to_vec());
        }
        assert_eq!(maps.len(), 72);
    }

    #[test]
    fn sampling_is_seeded_and_without_replacement() {
        let p = h(3, 3);
        let limits = EnumLimits::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let picked = sample_construction_specs(&p, 25, &mut rng, &limits, 1 << 20).unwrap();
        assert_eq!(picked.len(), 25);
        let mut rng2 = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let again = sample_construction_specs(&p, 25, &mut rng2, &limits, 1 << 20).unwrap();
        assert_eq!(picked, again);
        let distinct: std::collections::BTreeSet<_> =
            picked.iter().map(|s| format!("{s:?}")).collect();
        assert_eq!(distinct.len(), 25);
        // Asking for more than exist returns everything.
        let p23 = h(2, 3);
        let all = sample_construction_specs(&p23, 1000, &mut rng, &limits, 1 << 20).unwrap();
        assert_eq!(all.len(), 72);
    }

    #[test]
    fn spec_json_shape() {
        let p = h(2, 3);
        let spec = ConstructionSpec::new(
            &p,
            line_layer(&p),
            vec![vec![0, 1]],
            vec![addition_square()],
            vec![1],
        )
        .unwrap();
        let v = spec.to_json();
        assert_eq!(v["parts"], json!([[1, 2]]));
        assert_eq!(v["matching"], json!([2]));
        assert_eq!(v["layer"]["free"], json!([2]));
        assert_eq!(v["cubes"][0]["class"], json!(1));
    }
}
