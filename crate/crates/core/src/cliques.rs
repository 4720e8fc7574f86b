//! Maximal clique enumeration and clique classification.
//!
//! The general enumerator is Bron-Kerbosch with pivoting over bitsets. For
//! specific distance sets the maximal cliques have closed descriptions
//! (layers when `S = {1..k}`, permutation diagonals when `S = {m}`), which
//! are generated directly and cross-checked against the general enumerator
//! in the tests.

use itertools::Itertools;
use serde::Serialize;

use crate::bits;
use crate::error::{Error, Result};
use crate::graph::{self, GraphParams, GraphView, Layer, VertexId};
use crate::latin::LatinHypercube;

/// A clique, stored as its sorted vertex list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Clique {
    vertices: Vec<VertexId>,
}

impl Clique {
    /// Wrap a vertex set after checking pairwise adjacency (vertices are
    /// sorted and deduplicated; a single vertex is a valid clique).
    pub fn new(params: &GraphParams, vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let mut vertices = vertices;
        vertices.sort_unstable();
        vertices.dedup();
        for (i, &a) in vertices.iter().enumerate() {
            for &b in &vertices[i + 1..] {
                if !params.adjacent(a, b)? {
                    return Err(Error::NotClique { a, b });
                }
            }
        }
        Ok(Clique { vertices })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Whether `vertices` (deduplicated) are pairwise adjacent.
pub fn is_clique(params: &GraphParams, vertices: &[VertexId]) -> Result<bool> {
    let mut vs = vertices.to_vec();
    vs.sort_unstable();
    vs.dedup();
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            if !params.adjacent(a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `vertices` form a clique no vertex can be added to.
pub fn is_maximal_clique(params: &GraphParams, vertices: &[VertexId]) -> Result<bool> {
    if vertices.is_empty() || !is_clique(params, vertices)? {
        return Ok(false);
    }
    let mut vs = vertices.to_vec();
    vs.sort_unstable();
    vs.dedup();
    'outer: for w in 0..params.vertex_count() {
        if vs.binary_search(&w).is_ok() {
            continue;
        }
        for &a in &vs {
            if !params.adjacent(a, w)? {
                continue 'outer;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Limits for clique enumeration.
#[derive(Clone, Copy, Debug)]
pub struct CliqueLimits {
    /// Refuse graphs with more vertices than this.
    pub max_vertices: usize,
    /// Fail with [`Error::CapExceeded`] past this many cliques (collection).
    pub max_cliques: Option<u64>,
    /// Abort with [`Error::NodeBudget`] after this many branch extensions.
    pub max_nodes: Option<u64>,
}

impl Default for CliqueLimits {
    fn default() -> Self {
        CliqueLimits {
            max_vertices: 10_000,
            max_cliques: None,
            max_nodes: None,
        }
    }
}

/// Statistics from a clique enumeration walk.
#[derive(Clone, Copy, Debug)]
pub struct CliqueStats {
    pub cliques: u64,
    pub nodes: u64,
    pub stopped: bool,
}

struct Bk<'a, F> {
    view: &'a GraphView,
    current: Vec<VertexId>,
    nodes: u64,
    max_nodes: Option<u64>,
    cliques: u64,
    emit: F,
}

impl<F: FnMut(&Clique) -> bool> Bk<'_, F> {
    /// Pivoting Bron-Kerbosch. `p` holds candidates, `x` holds excluded
    /// vertices; both shrink going down. Returns false to stop the walk.
    fn expand(&mut self, p: &[u64], x: &[u64]) -> Result<bool> {
        if bits::is_empty(p) && bits::is_empty(x) {
            self.cliques += 1;
            let mut vertices = self.current.clone();
            vertices.sort_unstable();
            return Ok((self.emit)(&Clique { vertices }));
        }
        // Pivot: a vertex of P union X with the most neighbors in P, chosen
        // by a fixed scan order so the walk is deterministic.
        let mut pivot = usize::MAX;
        let mut pivot_deg = usize::MAX;
        for u in bits::iter_ones(p).chain(bits::iter_ones(x)) {
            let deg = self
                .view
                .row(u)
                .iter()
                .zip(p)
                .map(|(r, pw)| (r & pw).count_ones() as usize)
                .sum::<usize>();
            if pivot == usize::MAX || deg > pivot_deg {
                pivot = u;
                pivot_deg = deg;
            }
        }
        // Branch on P minus N(pivot), ascending.
        let mut branch = p.to_vec();
        if pivot != usize::MAX {
            for (b, r) in branch.iter_mut().zip(self.view.row(pivot)) {
                *b &= !r;
            }
        }
        let mut p = p.to_vec();
        let mut x = x.to_vec();
        for v in bits::iter_ones(&branch).collect_vec() {
            self.nodes += 1;
            if let Some(limit) = self.max_nodes {
                if self.nodes > limit {
                    return Err(Error::NodeBudget { limit });
                }
            }
            let row = self.view.row(v);
            let sub_p: Vec<u64> = p.iter().zip(row).map(|(a, b)| a & b).collect();
            let sub_x: Vec<u64> = x.iter().zip(row).map(|(a, b)| a & b).collect();
            self.current.push(v);
            let keep_going = self.expand(&sub_p, &sub_x)?;
            self.current.pop();
            if !keep_going {
                return Ok(false);
            }
            bits::clear_bit(&mut p, v);
            bits::set_bit(&mut x, v);
        }
        Ok(true)
    }
}

/// Visit every maximal clique of the graph. The visitor returns `false` to
/// stop early. Deterministic: cliques arrive in a fixed depth-first order
/// with sorted vertex lists.
pub fn for_each_maximal_clique(
    params: &GraphParams,
    limits: &CliqueLimits,
    emit: impl FnMut(&Clique) -> bool,
) -> Result<CliqueStats> {
    let view = GraphView::build(params, limits.max_vertices)?;
    let n = view.n();
    let words = view.words();
    let mut bk = Bk {
        view: &view,
        current: Vec::new(),
        nodes: 0,
        max_nodes: limits.max_nodes,
        cliques: 0,
        emit,
    };
    let p = bits::full(n);
    let x = vec![0u64; words];
    let finished = bk.expand(&p, &x)?;
    Ok(CliqueStats {
        cliques: bk.cliques,
        nodes: bk.nodes,
        stopped: !finished,
    })
}

/// Collect every maximal clique, sorted lexicographically by vertex list.
pub fn maximal_cliques(params: &GraphParams, limits: &CliqueLimits) -> Result<Vec<Clique>> {
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_maximal_clique(params, limits, |c| {
        if let Some(cap) = limits.max_cliques {
            if out.len() as u64 == cap {
                overflow = true;
                return false;
            }
        }
        out.push(c.clone());
        true
    })?;
    if overflow {
        return Err(Error::CapExceeded {
            cap: limits.max_cliques.unwrap_or(0),
        });
    }
    out.sort_unstable();
    Ok(out)
}

/// Direct generator for the `S = {1..k}` family, where the maximal cliques
/// are exactly the `k`-layers: every pair inside a `k`-layer is at distance
/// `1..=k`, and nothing outside extends it.
pub fn layer_cliques(params: &GraphParams, k: usize) -> Result<Vec<Clique>> {
    let expected: Vec<usize> = (1..=k).collect();
    let actual: Vec<usize> = params.distances().iter().copied().collect();
    if expected != actual {
        return Err(Error::UnsupportedFamily(format!(
            "layer cliques require S = {{1..{k}}}, got {params}"
        )));
    }
    let mut out = Vec::new();
    for layer in graph::enumerate_layers(params, k)? {
        out.push(Clique {
            vertices: layer.vertices(params)?,
        });
    }
    out.sort_unstable();
    Ok(out)
}

/// Direct generator for the `S = {m}` family with equal sides, where the
/// maximal cliques are the diagonals
/// `{(g_1(i), ..., g_(m-1)(i), i) : i in 0..n}` over all tuples of
/// permutations `g_j`. There are `(n!)^(m-1)` of them.
pub fn diagonal_cliques(params: &GraphParams) -> Result<Vec<Clique>> {
    let m = params.m();
    let n = params
        .equal_side()
        .ok_or_else(|| Error::UnsupportedFamily(format!("diagonals require equal sides, got {params}")))?;
    if params.distances().iter().copied().collect_vec() != vec![m] {
        return Err(Error::UnsupportedFamily(format!(
            "diagonals require S = {{{m}}}, got {params}"
        )));
    }
    if m == 1 {
        // The complete graph: its one maximal clique is everything.
        return Ok(vec![Clique {
            vertices: (0..n as usize).collect(),
        }]);
    }
    let perms: Vec<Vec<u16>> = (0..n).permutations(n as usize).collect();
    let total = perms
        .len()
        .checked_pow((m - 1) as u32)
        .filter(|&t| t <= 10_000_000)
        .ok_or_else(|| Error::BadParameter("too many diagonals to enumerate".into()))?;
    let mut out = Vec::with_capacity(total);
    let mut tuple = vec![0u16; m];
    for combo in (0..m - 1).map(|_| 0..perms.len()).multi_cartesian_product() {
        let mut vertices = Vec::with_capacity(n as usize);
        for i in 0..n {
            for (j, &pi) in combo.iter().enumerate() {
                tuple[j] = perms[pi][i as usize];
            }
            tuple[m - 1] = i;
            vertices.push(params.encode(&tuple)?);
        }
        vertices.sort_unstable();
        out.push(Clique { vertices });
    }
    out.sort_unstable();
    Ok(out)
}

/// What shape a clique has.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum CliqueClass {
    /// The vertex set of a layer.
    Layer(Layer),
    /// A diagonal `{(g_1(i), ..., g_(m-1)(i), i)}`; the payload holds the
    /// permutations `g_1, ..., g_(m-1)` (the last coordinate is the index).
    PermutationDiagonal(Vec<Vec<u16>>),
    /// In bijection with a Latin hypercube of dimension `m-1` and class 1:
    /// the first `m-1` coordinates enumerate positions, the last is the
    /// symbol.
    LatinCube(LatinHypercube),
    /// None of the recognized shapes.
    Other,
}

/// Classify a clique by shape. The input must be a clique (checked); it
/// does not have to be maximal. Unrecognized shapes come back as
/// [`CliqueClass::Other`], never an error.
pub fn classify_clique(params: &GraphParams, clique: &Clique) -> Result<CliqueClass> {
    for (i, &a) in clique.vertices.iter().enumerate() {
        for &b in &clique.vertices[i + 1..] {
            if !params.adjacent(a, b)? {
                return Err(Error::NotClique { a, b });
            }
        }
    }
    if let Some(layer) = graph::as_layer(params, &clique.vertices)? {
        return Ok(CliqueClass::Layer(layer));
    }
    if let Some(perms) = diagonal_form(params, &clique.vertices)? {
        return Ok(CliqueClass::PermutationDiagonal(perms));
    }
    if let Some(cube) = hypercube_form(params, &clique.vertices)? {
        return Ok(CliqueClass::LatinCube(cube));
    }
    Ok(CliqueClass::Other)
}

/// If the set is `{(g_1(i), ..., g_(m-1)(i), i)}` for permutations `g_j`
/// (after sorting by last coordinate), return the permutations.
fn diagonal_form(params: &GraphParams, vertices: &[VertexId]) -> Result<Option<Vec<Vec<u16>>>> {
    let m = params.m();
    let Some(n) = params.equal_side() else {
        return Ok(None);
    };
    if vertices.len() != n as usize {
        return Ok(None);
    }
    let tuples: Vec<Vec<u16>> = vertices.iter().map(|&v| params.decode(v)).try_collect()?;
    // Every coordinate must take each value exactly once.
    for j in 0..m {
        let mut seen = vec![false; n as usize];
        for t in &tuples {
            if std::mem::replace(&mut seen[t[j] as usize], true) {
                return Ok(None);
            }
        }
    }
    let mut by_last = tuples;
    by_last.sort_by_key(|t| t[m - 1]);
    let perms = (0..m - 1)
        .map(|j| by_last.iter().map(|t| t[j]).collect())
        .collect();
    Ok(Some(perms))
}

/// If the set covers each assignment of the first `m-1` coordinates exactly
/// once, read it as cells of an array (position = first `m-1` coordinates,
/// symbol = last) and return it when that array is a Latin hypercube.
fn hypercube_form(params: &GraphParams, vertices: &[VertexId]) -> Result<Option<LatinHypercube>> {
    let m = params.m();
    let Some(n) = params.equal_side() else {
        return Ok(None);
    };
    if m < 2 || vertices.len() != (n as usize).pow((m - 1) as u32) {
        return Ok(None);
    }
    match cells_by_position(params, vertices)? {
        Some(cells) => {
            let cube = LatinHypercube::new(m - 1, n, 1, cells)?;
            Ok(cube.is_valid().then_some(cube))
        }
        None => Ok(None),
    }
}

/// Cell array indexed by the first `m-1` coordinates with the last
/// coordinate as symbol; `None` when two vertices share a position.
fn cells_by_position(params: &GraphParams, vertices: &[VertexId]) -> Result<Option<Vec<u32>>> {
    let m = params.m();
    let n = params.equal_side().expect("caller checked equal sides");
    let count = (n as usize).pow((m - 1) as u32);
    let mut cells = vec![u32::MAX; count];
    for &v in vertices {
        let t = params.decode(v)?;
        let mut pos = 0usize;
        for &c in &t[..m - 1] {
            pos = pos * n as usize + c as usize;
        }
        if cells[pos] != u32::MAX {
            return Ok(None);
        }
        cells[pos] = t[m - 1] as u32;
    }
    Ok(cells.iter().all(|&c| c != u32::MAX).then_some(cells))
}

/// Interpret a clique of the `S = {2..m}` graph as a Latin hypercube of
/// dimension `m-1`, class 1. Fails when the distance set is not `{2..m}`,
/// the set is not a clique, or the shape is wrong.
pub fn clique_to_hypercube(params: &GraphParams, clique: &Clique) -> Result<LatinHypercube> {
    let m = params.m();
    let expected: Vec<usize> = (2..=m).collect();
    if m < 2 || params.distances().iter().copied().collect_vec() != expected {
        return Err(Error::UnsupportedFamily(format!(
            "hypercube reading requires S = {{2..{m}}}, got {params}"
        )));
    }
    let n = params.equal_side().ok_or_else(|| {
        Error::UnsupportedFamily(format!("hypercube reading requires equal sides, got {params}"))
    })?;
    for (i, &a) in clique.vertices.iter().enumerate() {
        for &b in &clique.vertices[i + 1..] {
            if !params.adjacent(a, b)? {
                return Err(Error::NotClique { a, b });
            }
        }
    }
    if clique.len() != (n as usize).pow((m - 1) as u32) {
        return Err(Error::NotHypercubeForm(format!(
            "expected {} vertices, got {}",
            (n as usize).pow((m - 1) as u32),
            clique.len()
        )));
    }
    let cells = cells_by_position(params, &clique.vertices)?.ok_or_else(|| {
        Error::NotHypercubeForm("two vertices share the same position coordinates".into())
    })?;
    let cube = LatinHypercube::new(m - 1, n, 1, cells)?;
    if let Err(violation) = cube.validate() {
        return Err(Error::NotHypercubeForm(violation.to_string()));
    }
    Ok(cube)
}

/// Parameters of a clique read as a code: block length `m`, size, and
/// minimum pairwise Hamming distance, plus whether those meet the
/// Singleton-bound-with-equality shape `(m, n^(m-k), k+1)` implied by the
/// distance set `S = {k+1..m}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CodeParams {
    pub length: usize,
    pub alphabet: u16,
    pub size: usize,
    pub min_distance: usize,
    pub mds: bool,
}

/// Compute [`CodeParams`] for a vertex set of an `S = {k+1..m}` graph.
/// Needs at least two vertices (minimum distance is pairwise); the set does
/// not have to be a clique, though non-cliques will not be MDS.
pub fn mds_parameters(params: &GraphParams, clique: &Clique) -> Result<CodeParams> {
    let m = params.m();
    let n = params.equal_side().ok_or_else(|| {
        Error::UnsupportedFamily(format!("code reading requires equal sides, got {params}"))
    })?;
    let ds: Vec<usize> = params.distances().iter().copied().collect();
    let lo = ds[0];
    let expected: Vec<usize> = (lo..=m).collect();
    if ds != expected {
        return Err(Error::BadDistanceShape { got: ds });
    }
    let k = lo - 1;
    if clique.len() < 2 {
        return Err(Error::BadParameter(
            "minimum distance needs at least two vertices".into(),
        ));
    }
    let tuples: Vec<Vec<u16>> = clique
        .vertices
        .iter()
        .map(|&v| params.decode(v))
        .try_collect()?;
    let mut min_distance = m;
    for (i, a) in tuples.iter().enumerate() {
        for b in &tuples[i + 1..] {
            min_distance = min_distance.min(graph::hamming_distance(a, b)?);
        }
    }
    let size = clique.len();
    let mds = size == (n as usize).pow((m - k) as u32) && min_distance == k + 1;
    Ok(CodeParams {
        length: m,
        alphabet: n,
        size,
        min_distance,
        mds,
    })
}
