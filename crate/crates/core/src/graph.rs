//! Graph parameters, the vertex codec, Hamming distance, and layer machinery.
//!
//! A graph is described by a list of side lengths `n_1, ..., n_m` and a set
//! `S` of distances: vertices are the tuples with coordinate `i` ranging over
//! `0..n_i`, and two tuples are adjacent exactly when their Hamming distance
//! (the number of coordinates where they differ) lies in `S`.
//!
//! Vertices are addressed by a [`VertexId`] in mixed-radix order with
//! coordinate 0 most significant, so id arithmetic and tuple arithmetic can
//! be interchanged cheaply through [`GraphParams::encode`] and
//! [`GraphParams::decode`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};

/// Index of a vertex in the fixed mixed-radix order (coordinate 0 most
/// significant). Ids run over `0..vertex_count()`.
pub type VertexId = usize;

/// Side lengths plus distance set; the complete description of a graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GraphParams {
    sides: Vec<u16>,
    distances: BTreeSet<usize>,
}

impl GraphParams {
    /// Build parameters from explicit side lengths and a distance set.
    ///
    /// Requires at least one coordinate, every side at least 2, and a
    /// nonempty distance set contained in `1..=m`.
    pub fn new(sides: Vec<u16>, distances: impl IntoIterator<Item = usize>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::EmptySides);
        }
        for (coord, &side) in sides.iter().enumerate() {
            if side < 2 {
                return Err(Error::SideTooSmall { coord, side });
            }
        }
        let m = sides.len();
        let distances: BTreeSet<usize> = distances.into_iter().collect();
        if distances.is_empty() || distances.iter().any(|&d| d == 0 || d > m) {
            return Err(Error::BadDistanceSet {
                m,
                got: distances.into_iter().collect(),
            });
        }
        let params = GraphParams { sides, distances };
        // Reject sizes that do not even fit in a usize; callers with real
        // budgets apply far smaller limits on top of this.
        params.checked_vertex_count()?;
        Ok(params)
    }

    /// The graph on `m` coordinates of side `n` where adjacency means
    /// "differ in exactly one coordinate".
    pub fn hamming(m: usize, n: u16) -> Result<Self> {
        Self::new(vec![n; m], [1])
    }

    /// Equal-sided graph with an arbitrary distance set.
    pub fn equal_sided(m: usize, n: u16, distances: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(vec![n; m], distances)
    }

    /// Number of coordinates.
    pub fn m(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[u16] {
        &self.sides
    }

    pub fn side(&self, coord: usize) -> u16 {
        self.sides[coord]
    }

    pub fn distances(&self) -> &BTreeSet<usize> {
        &self.distances
    }

    /// The common side length, if all sides are equal.
    pub fn equal_side(&self) -> Option<u16> {
        let first = self.sides[0];
        self.sides.iter().all(|&s| s == first).then_some(first)
    }

    fn checked_vertex_count(&self) -> Result<usize> {
        self.sides
            .iter()
            .try_fold(1usize, |acc, &s| acc.checked_mul(s as usize))
            .ok_or(Error::Overflow("vertex count"))
    }

    /// Total number of vertices, `n_1 * ... * n_m`.
    pub fn vertex_count(&self) -> usize {
        self.checked_vertex_count()
            .expect("checked at construction")
    }

    /// Same vertex set, complemented distance set `{1..m} \ S`.
    ///
    /// Fails when `S` already contains every distance (the complement would
    /// have no edges and is not a valid parameter set here).
    pub fn complement(&self) -> Result<Self> {
        let m = self.m();
        let rest: Vec<usize> = (1..=m).filter(|d| !self.distances.contains(d)).collect();
        if rest.is_empty() {
            return Err(Error::BadDistanceSet { m, got: rest });
        }
        Self::new(self.sides.clone(), rest)
    }

    /// Degree of every vertex: the count of tuples at distance `d` from a
    /// fixed tuple summed over `d` in `S`. The count is independent of the
    /// chosen tuple, so all these graphs are regular.
    pub fn degree(&self) -> usize {
        let m = self.m();
        self.distances
            .iter()
            .map(|&d| {
                (0..m)
                    .combinations(d)
                    .map(|coords| {
                        coords
                            .iter()
                            .map(|&i| self.sides[i] as usize - 1)
                            .product::<usize>()
                    })
                    .sum::<usize>()
            })
            .sum()
    }

    /// Sides sorted into nonincreasing order. Returns the sorted parameters
    /// together with the permutation `perm`, where new coordinate `j` holds
    /// what old coordinate `perm[j]` held.
    pub fn normalized(&self) -> (Self, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.m()).collect();
        perm.sort_by_key(|&i| (std::cmp::Reverse(self.sides[i]), i));
        let sides = perm.iter().map(|&i| self.sides[i]).collect();
        (
            GraphParams {
                sides,
                distances: self.distances.clone(),
            },
            perm,
        )
    }

    /// Validate that `t` is a vertex tuple of this graph.
    pub fn check_tuple(&self, t: &[u16]) -> Result<()> {
        if t.len() != self.m() {
            return Err(Error::LengthMismatch {
                expected: self.m(),
                got: t.len(),
            });
        }
        for (coord, (&value, &side)) in t.iter().zip(&self.sides).enumerate() {
            if value >= side {
                return Err(Error::CoordOutOfRange { coord, value, side });
            }
        }
        Ok(())
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        let count = self.vertex_count();
        if v >= count {
            return Err(Error::VertexOutOfRange { id: v, count });
        }
        Ok(())
    }

    /// Mixed-radix rank of a tuple, coordinate 0 most significant.
    pub fn encode(&self, t: &[u16]) -> Result<VertexId> {
        self.check_tuple(t)?;
        let mut id = 0usize;
        for (&value, &side) in t.iter().zip(&self.sides) {
            id = id * side as usize + value as usize;
        }
        Ok(id)
    }

    /// Inverse of [`encode`](Self::encode).
    pub fn decode(&self, v: VertexId) -> Result<Vec<u16>> {
        self.check_vertex(v)?;
        let mut t = vec![0u16; self.m()];
        self.decode_into(v, &mut t);
        Ok(t)
    }

    /// Decode into a caller-provided buffer of length `m`. The id must be in
    /// range; use [`decode`](Self::decode) for checked conversion.
    pub fn decode_into(&self, v: VertexId, out: &mut [u16]) {
        debug_assert_eq!(out.len(), self.m());
        debug_assert!(v < self.vertex_count());
        let mut rest = v;
        for i in (0..self.m()).rev() {
            let side = self.sides[i] as usize;
            out[i] = (rest % side) as u16;
            rest /= side;
        }
    }

    /// Whether the vertices `a` and `b` are adjacent, i.e. their Hamming
    /// distance lies in the distance set.
    pub fn adjacent(&self, a: VertexId, b: VertexId) -> Result<bool> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        let mut ra = a;
        let mut rb = b;
        let mut diff = 0usize;
        for i in (0..self.m()).rev() {
            let side = self.sides[i] as usize;
            if ra % side != rb % side {
                diff += 1;
            }
            ra /= side;
            rb /= side;
        }
        Ok(self.distances.contains(&diff))
    }

    /// Tuple-level adjacency test.
    pub fn adjacent_tuples(&self, a: &[u16], b: &[u16]) -> Result<bool> {
        self.check_tuple(a)?;
        self.check_tuple(b)?;
        Ok(self.distances.contains(&hamming_distance(a, b)?))
    }
}

impl fmt::Display for GraphParams {
    /// Text form `"3x3x3:S=1,2"`: sides joined by `x`, then the distance set.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:S={}",
            self.sides.iter().join("x"),
            self.distances.iter().join(",")
        )
    }
}

impl fmt::Debug for GraphParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GraphParams({self})")
    }
}

impl FromStr for GraphParams {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let parse_err = |reason: &str| Error::Parse {
            input: text.to_owned(),
            reason: reason.to_owned(),
        };
        let (sides_part, dist_part) = text
            .split_once(':')
            .ok_or_else(|| parse_err("expected `<sides>:S=<distances>`"))?;
        let sides: Vec<u16> = sides_part
            .split('x')
            .map(|s| s.trim().parse::<u16>())
            .try_collect()
            .map_err(|e| parse_err(&format!("bad side length: {e}")))?;
        let dist_part = dist_part
            .trim()
            .strip_prefix("S=")
            .ok_or_else(|| parse_err("distance set must start with `S=`"))?;
        let distances: Vec<usize> = dist_part
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .try_collect()
            .map_err(|e| parse_err(&format!("bad distance: {e}")))?;
        GraphParams::new(sides, distances)
    }
}

impl Serialize for GraphParams {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GraphParams {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(de)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of coordinates where `a` and `b` differ.
pub fn hamming_distance(a: &[u16], b: &[u16]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

/// An axis-aligned sublattice: a set of coordinates left free, all others
/// pinned to fixed values. A layer with `k` free coordinates is called a
/// `k`-layer; a 0-layer is a single vertex and an `m`-layer is everything.
///
/// The JSON form uses 1-based coordinate numbers:
/// `{"free": [3], "fixed": {"1": 0, "2": 2}}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Layer {
    free: Vec<usize>,
    fixed: Vec<(usize, u16)>,
}

impl Layer {
    /// Build a layer, validating that `free` and the fixed coordinates
    /// together partition `0..m` and that fixed values are in range.
    pub fn new(
        params: &GraphParams,
        free: impl IntoIterator<Item = usize>,
        fixed: impl IntoIterator<Item = (usize, u16)>,
    ) -> Result<Self> {
        let m = params.m();
        let mut free: Vec<usize> = free.into_iter().collect();
        free.sort_unstable();
        let mut fixed: Vec<(usize, u16)> = fixed.into_iter().collect();
        fixed.sort_unstable();
        let mut seen = vec![false; m];
        for &c in &free {
            if c >= m {
                return Err(Error::InvalidLayer(format!(
                    "free coordinate {c} out of range for dimension {m}"
                )));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidLayer(format!("coordinate {c} repeated")));
            }
        }
        for &(c, value) in &fixed {
            if c >= m {
                return Err(Error::InvalidLayer(format!(
                    "fixed coordinate {c} out of range for dimension {m}"
                )));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidLayer(format!("coordinate {c} repeated")));
            }
            let side = params.side(c);
            if value >= side {
                return Err(Error::CoordOutOfRange {
                    coord: c,
                    value,
                    side,
                });
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidLayer(format!(
                "coordinate {missing} neither free nor fixed"
            )));
        }
        Ok(Layer { free, fixed })
    }

    /// The 0-layer holding exactly the tuple `t`.
    pub fn point(params: &GraphParams, t: &[u16]) -> Result<Self> {
        params.check_tuple(t)?;
        Ok(Layer {
            free: Vec::new(),
            fixed: t.iter().copied().enumerate().collect(),
        })
    }

    /// The `m`-layer containing every vertex.
    pub fn full(params: &GraphParams) -> Self {
        Layer {
            free: (0..params.m()).collect(),
            fixed: Vec::new(),
        }
    }

    /// Number of free coordinates.
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Total number of coordinates of the ambient graph.
    pub fn m(&self) -> usize {
        self.free.len() + self.fixed.len()
    }

    /// Free coordinates in ascending order.
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    /// Fixed `(coordinate, value)` pairs in ascending coordinate order.
    pub fn fixed(&self) -> &[(usize, u16)] {
        &self.fixed
    }

    /// The pinned value at `coord`, or `None` if that coordinate is free.
    pub fn fixed_value(&self, coord: usize) -> Option<u16> {
        self.fixed
            .binary_search_by_key(&coord, |&(c, _)| c)
            .ok()
            .map(|i| self.fixed[i].1)
    }

    /// Whether tuple `t` lies in this layer.
    pub fn contains(&self, t: &[u16]) -> bool {
        debug_assert_eq!(t.len(), self.m());
        self.fixed.iter().all(|&(c, value)| t[c] == value)
    }

    /// Number of vertices in the layer: the product of the free sides.
    pub fn size(&self, params: &GraphParams) -> usize {
        self.free
            .iter()
            .map(|&c| params.side(c) as usize)
            .product()
    }

    /// All vertices of the layer in ascending id order.
    pub fn vertices(&self, params: &GraphParams) -> Result<Vec<VertexId>> {
        self.check_shape(params)?;
        let mut base = vec![0u16; self.m()];
        for &(c, value) in &self.fixed {
            base[c] = value;
        }
        let mut out = Vec::with_capacity(self.size(params));
        for assignment in value_assignments(params, &self.free) {
            for (&c, &value) in self.free.iter().zip(&assignment) {
                base[c] = value;
            }
            out.push(params.encode(&base)?);
        }
        Ok(out)
    }

    /// The family of all layers parallel to this one (same free set, all
    /// possible fixed values). The members partition the vertex set.
    pub fn system(&self, params: &GraphParams) -> Result<LayerSystem> {
        self.check_shape(params)?;
        let fixed_coords: Vec<usize> = self.fixed.iter().map(|&(c, _)| c).collect();
        let members = value_assignments(params, &fixed_coords)
            .map(|values| Layer {
                free: self.free.clone(),
                fixed: fixed_coords.iter().copied().zip(values).collect(),
            })
            .collect();
        Ok(LayerSystem {
            free: self.free.clone(),
            members,
        })
    }

    fn check_shape(&self, params: &GraphParams) -> Result<()> {
        if self.m() != params.m() {
            return Err(Error::LengthMismatch {
                expected: params.m(),
                got: self.m(),
            });
        }
        // Re-validate against these params; a deserialized layer may carry
        // out-of-range values or a garbled coordinate split.
        Layer::new(params, self.free.clone(), self.fixed.clone()).map(|_| ())
    }

    /// Validate this layer against `params` (coordinate split and ranges).
    pub fn validate_for(&self, params: &GraphParams) -> Result<()> {
        self.check_shape(params)
    }
}

impl fmt::Display for Layer {
    /// Human-readable 1-based form, e.g. `free={3} fixed={1:0, 2:2}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "free={{{}}} fixed={{{}}}",
            self.free.iter().map(|c| c + 1).join(","),
            self.fixed
                .iter()
                .map(|&(c, value)| format!("{}:{}", c + 1, value))
                .join(", ")
        )
    }
}

impl fmt::Debug for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Layer({self})")
    }
}

/// Serde mirror of [`Layer`] with 1-based coordinates.
#[derive(Serialize, Deserialize)]
struct LayerRepr {
    free: Vec<usize>,
    fixed: BTreeMap<String, u16>,
}

impl Serialize for Layer {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        LayerRepr {
            free: self.free.iter().map(|&c| c + 1).collect(),
            fixed: self
                .fixed
                .iter()
                .map(|&(c, value)| ((c + 1).to_string(), value))
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Layer {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = LayerRepr::deserialize(de)?;
        let mut free = Vec::with_capacity(repr.free.len());
        for c in repr.free {
            if c == 0 {
                return Err(D::Error::custom("coordinates are 1-based; got 0"));
            }
            free.push(c - 1);
        }
        let mut fixed = Vec::with_capacity(repr.fixed.len());
        for (key, value) in repr.fixed {
            let c: usize = key
                .parse()
                .map_err(|e| D::Error::custom(format!("bad coordinate key {key:?}: {e}")))?;
            if c == 0 {
                return Err(D::Error::custom("coordinates are 1-based; got 0"));
            }
            fixed.push((c - 1, value));
        }
        free.sort_unstable();
        fixed.sort_unstable();
        let layer = Layer { free, fixed };
        let m = layer.m();
        let mut seen = vec![false; m];
        for c in layer
            .free
            .iter()
            .copied()
            .chain(layer.fixed.iter().map(|&(c, _)| c))
        {
            if c >= m || std::mem::replace(&mut seen[c], true) {
                return Err(D::Error::custom(
                    "free and fixed coordinates must partition 1..=m",
                ));
            }
        }
        Ok(layer)
    }
}

/// A maximal family of pairwise parallel layers; partitions the vertex set.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LayerSystem {
    free: Vec<usize>,
    members: Vec<Layer>,
}

impl LayerSystem {
    /// The free coordinate set shared by every member.
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn members(&self) -> &[Layer] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Iterate over all value assignments for the given coordinates in
/// mixed-radix order (first listed coordinate most significant). Yields a
/// single empty assignment when `coords` is empty.
fn value_assignments<'a>(
    params: &'a GraphParams,
    coords: &'a [usize],
) -> Box<dyn Iterator<Item = Vec<u16>> + 'a> {
    if coords.is_empty() {
        return Box::new(std::iter::once(Vec::new()));
    }
    Box::new(
        coords
            .iter()
            .map(|&c| 0..params.side(c))
            .multi_cartesian_product(),
    )
}

/// All `k`-layers of the graph, ordered by free coordinate set (ascending
/// combinations) and then by fixed values in mixed-radix order.
pub fn enumerate_layers(
    params: &GraphParams,
    k: usize,
) -> Result<impl Iterator<Item = Layer> + '_> {
    let m = params.m();
    if k > m {
        return Err(Error::LayerDimOutOfRange { k, m });
    }
    Ok((0..m).combinations(k).flat_map(move |free| {
        let fixed_coords: Vec<usize> = (0..m).filter(|c| !free.contains(c)).collect();
        let assignments: Vec<Vec<u16>> = value_assignments(params, &fixed_coords).collect();
        assignments
            .into_iter()
            .map(|values| Layer {
                free: free.clone(),
                fixed: fixed_coords.iter().copied().zip(values).collect(),
            })
            .collect_vec()
    }))
}

/// Number of `k`-layers: the sum over free sets `F` of size `k` of the
/// product of the sides *outside* `F`. For equal sides this is
/// `C(m,k) * n^(m-k)`.
pub fn layer_count(params: &GraphParams, k: usize) -> Result<usize> {
    let m = params.m();
    if k > m {
        return Err(Error::LayerDimOutOfRange { k, m });
    }
    let mut total = 0usize;
    for free in (0..m).combinations(k) {
        let outside: usize = (0..m)
            .filter(|c| !free.contains(c))
            .map(|c| params.side(c) as usize)
            .product();
        total = total
            .checked_add(outside)
            .ok_or(Error::Overflow("layer count"))?;
    }
    Ok(total)
}

/// The smallest layer containing every vertex in `vs`: free coordinates are
/// exactly those where the vertices disagree.
pub fn minimal_layer_containing(params: &GraphParams, vs: &[VertexId]) -> Result<Layer> {
    if vs.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let base = params.decode(vs[0])?;
    let mut varies = vec![false; params.m()];
    let mut t = vec![0u16; params.m()];
    for &v in &vs[1..] {
        params.decode(v)?;
        params.decode_into(v, &mut t);
        for (i, (&a, &b)) in t.iter().zip(&base).enumerate() {
            if a != b {
                varies[i] = true;
            }
        }
    }
    let free: Vec<usize> = (0..params.m()).filter(|&i| varies[i]).collect();
    let fixed: Vec<(usize, u16)> = (0..params.m())
        .filter(|&i| !varies[i])
        .map(|i| (i, base[i]))
        .collect();
    Ok(Layer { free, fixed })
}

/// If the set `vs` is exactly the vertex set of some layer, return that
/// layer; otherwise `None`. Duplicate ids are tolerated.
pub fn as_layer(params: &GraphParams, vs: &[VertexId]) -> Result<Option<Layer>> {
    let minimal = minimal_layer_containing(params, vs)?;
    let mut unique: Vec<VertexId> = vs.to_vec();
    unique.sort_unstable();
    unique.dedup();
    // Every vertex lies in the minimal layer, so set equality is a size check.
    Ok((minimal.size(params) == unique.len()).then_some(minimal))
}

/// Bitset variant of [`as_layer`] used by the search engine's hot path;
/// `words` is a vertex bitset over the full id range.
pub(crate) fn layer_of_bits(params: &GraphParams, words: &[u64]) -> Option<Layer> {
    let mut ones = bits::iter_ones(words);
    let first = ones.next()?;
    let mut base = vec![0u16; params.m()];
    params.decode_into(first, &mut base);
    let mut varies = vec![false; params.m()];
    let mut t = vec![0u16; params.m()];
    let mut count = 1usize;
    for v in ones {
        params.decode_into(v, &mut t);
        for (i, (&a, &b)) in t.iter().zip(&base).enumerate() {
            if a != b {
                varies[i] = true;
            }
        }
        count += 1;
    }
    let size: usize = (0..params.m())
        .filter(|&i| varies[i])
        .map(|i| params.side(i) as usize)
        .product();
    if size != count {
        return None;
    }
    Some(Layer {
        free: (0..params.m()).filter(|&i| varies[i]).collect(),
        fixed: (0..params.m())
            .filter(|&i| !varies[i])
            .map(|i| (i, base[i]))
            .collect(),
    })
}

/// The layer system (parallel class) that `layer` belongs to.
pub fn layer_system_of(params: &GraphParams, layer: &Layer) -> Result<LayerSystem> {
    layer.system(params)
}

/// Dense adjacency view: one bitset row per vertex plus cached tuples.
///
/// Rows are materialized once so the search engines can test adjacency with
/// a single word load; the rows agree bit-for-bit with
/// [`GraphParams::adjacent`], which the test suite checks directly.
pub struct GraphView {
    params: GraphParams,
    n: usize,
    words: usize,
    rows: Vec<u64>,
    tuples: Vec<u16>,
}

impl GraphView {
    /// Materialize the adjacency of `params`, refusing graphs larger than
    /// `max_vertices`.
    pub fn build(params: &GraphParams, max_vertices: usize) -> Result<Self> {
        let n = params.vertex_count();
        if n > max_vertices {
            return Err(Error::TooManyVertices {
                vertices: n,
                limit: max_vertices,
            });
        }
        let m = params.m();
        let words = bits::words_for(n);
        let mut tuples = vec![0u16; n * m];
        for v in 0..n {
            params.decode_into(v, &mut tuples[v * m..(v + 1) * m]);
        }
        let mut rows = vec![0u64; n * words];
        for a in 0..n {
            let ta = &tuples[a * m..(a + 1) * m];
            for b in (a + 1)..n {
                let tb = &tuples[b * m..(b + 1) * m];
                let d = ta.iter().zip(tb).filter(|(x, y)| x != y).count();
                if params.distances().contains(&d) {
                    bits::set_bit(&mut rows[a * words..(a + 1) * words], b);
                    bits::set_bit(&mut rows[b * words..(b + 1) * words], a);
                }
            }
        }
        Ok(GraphView {
            params: params.clone(),
            n,
            words,
            rows,
            tuples,
        })
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Words per adjacency row.
    pub fn words(&self) -> usize {
        self.words
    }

    /// Adjacency row of `v` as a bitset.
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    /// Cached decoded tuple of `v`.
    pub fn tuple(&self, v: usize) -> &[u16] {
        let m = self.params.m();
        &self.tuples[v * m..(v + 1) * m]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        bits::test_bit(self.row(a), b)
    }

    pub fn degree(&self, v: usize) -> usize {
        bits::count_ones(self.row(v))
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits::iter_ones(self.row(v))
    }
}
