//! Endomorphism representation, exhaustive search, decomposition into the
//! layer/hypercube construction, and family-level structure verification.
//!
//! The search engine enumerates edge-preserving self-maps by depth-first
//! assignment over a fixed vertex order (greedy max-back-degree), keeping a
//! candidate-image bitset per vertex. Assigning an image intersects the
//! candidate sets of later neighbors with the image's adjacency row
//! (forward checking with a trail for undo), so every leaf is an
//! endomorphism by construction. Rank and kernel-uniformity are maintained
//! incrementally, making per-leaf classification O(1).
//!
//! Counting and verification can split the root branches over threads;
//! enumeration is always sequential so emission order stays canonical.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering::Relaxed};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::bits;
use crate::construct::{self, ConstructionSpec};
use crate::error::{Error, Result};
use crate::graph::{self, GraphParams, GraphView, Layer, VertexId};
use crate::latin::LatinHypercube;

/// A self-map of the vertex set `0..len`, stored as the image of each
/// vertex. Serializes as a plain JSON array of image ids.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EndoMap {
    images: Vec<u32>,
}

impl EndoMap {
    /// Wrap an image list, checking that it is a self-map.
    pub fn new(images: Vec<VertexId>) -> Result<Self> {
        let len = images.len();
        if len == 0 {
            return Err(Error::EmptyVertexSet);
        }
        let mut out = Vec::with_capacity(len);
        for &img in &images {
            if img >= len {
                return Err(Error::VertexOutOfRange {
                    id: img,
                    count: len,
                });
            }
            out.push(img as u32);
        }
        Ok(EndoMap { images: out })
    }

    /// Engine-internal constructor for already-validated image arrays.
    pub(crate) fn from_u32(images: Vec<u32>) -> Self {
        EndoMap { images }
    }

    /// Domain size.
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.images[v] as usize
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.images.iter().map(|&w| w as usize).collect()
    }

    /// Number of distinct images.
    pub fn rank(&self) -> usize {
        let mut seen = vec![false; self.images.len()];
        let mut distinct = 0;
        for &w in &self.images {
            if !std::mem::replace(&mut seen[w as usize], true) {
                distinct += 1;
            }
        }
        distinct
    }

    /// A map is singular when it is not a bijection.
    pub fn is_singular(&self) -> bool {
        self.rank() < self.len()
    }

    /// Distinct image vertices in ascending order.
    pub fn image_vertices(&self) -> Vec<VertexId> {
        let mut seen = vec![false; self.images.len()];
        for &w in &self.images {
            seen[w as usize] = true;
        }
        seen.iter()
            .enumerate()
            .filter_map(|(v, &s)| s.then_some(v))
            .collect()
    }

    /// Group vertices by their image.
    pub fn kernel(&self) -> KernelPartition {
        let mut classes: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for (v, &w) in self.images.iter().enumerate() {
            classes.entry(w as usize).or_default().push(v);
        }
        KernelPartition {
            classes: classes.into_iter().collect(),
        }
    }
}

impl Serialize for EndoMap {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(self.images.iter())
    }
}

/// The partition of the domain into preimage classes.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct KernelPartition {
    /// `(image vertex, sorted preimage class)`, ordered by image vertex.
    classes: Vec<(VertexId, Vec<VertexId>)>,
}

impl KernelPartition {
    pub fn classes(&self) -> &[(VertexId, Vec<VertexId>)] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class size -> number of classes of that size.
    pub fn class_sizes(&self) -> BTreeMap<usize, usize> {
        let mut sizes = BTreeMap::new();
        for (_, class) in &self.classes {
            *sizes.entry(class.len()).or_insert(0) += 1;
        }
        sizes
    }

    /// Whether all classes have the same size.
    pub fn is_uniform(&self) -> bool {
        self.class_sizes().len() == 1
    }
}

/// Check that `map` preserves every edge, reporting the first failing edge.
pub fn check_endomorphism(params: &GraphParams, map: &EndoMap) -> Result<()> {
    let count = params.vertex_count();
    if map.len() != count {
        return Err(Error::LengthMismatch {
            expected: count,
            got: map.len(),
        });
    }
    for a in 0..count {
        for b in (a + 1)..count {
            if params.adjacent(a, b)? {
                let fa = map.apply(a);
                let fb = map.apply(b);
                if !params.adjacent(fa, fb)? {
                    return Err(Error::NotEndomorphism { a, b, fa, fb });
                }
            }
        }
    }
    Ok(())
}

/// Whether `map` is an endomorphism of the graph.
pub fn is_endomorphism(params: &GraphParams, map: &EndoMap) -> Result<bool> {
    match check_endomorphism(params, map) {
        Ok(()) => Ok(true),
        Err(Error::NotEndomorphism { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Structural facts about one endomorphism.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EndoAnalysis {
    pub rank: usize,
    pub singular: bool,
    /// All kernel classes have equal size.
    pub uniform: bool,
    /// Class size -> number of classes of that size.
    pub class_sizes: BTreeMap<usize, usize>,
    /// The image as a layer, when it is one.
    pub image_layer: Option<Layer>,
}

/// Analyze an endomorphism (the map is checked first).
pub fn analyze(params: &GraphParams, map: &EndoMap) -> Result<EndoAnalysis> {
    check_endomorphism(params, map)?;
    let kernel = map.kernel();
    let image = map.image_vertices();
    Ok(EndoAnalysis {
        rank: image.len(),
        singular: image.len() < map.len(),
        uniform: kernel.is_uniform(),
        class_sizes: kernel.class_sizes(),
        image_layer: graph::as_layer(params, &image)?,
    })
}

/// Options steering the exhaustive search.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Skip bijections (automorphisms). Default true.
    pub singular_only: bool,
    /// Keep only maps whose rank lies in this set (filters counting and
    /// emission; ranks above the maximum are also pruned during search).
    pub rank_filter: Option<BTreeSet<usize>>,
    /// Abort with [`Error::NodeBudget`] after this many search nodes.
    pub max_nodes: Option<u64>,
    /// Abort with [`Error::TimeBudget`] past this wall-clock budget.
    pub budget: Option<Duration>,
    /// Stop after this many emitted/verified maps; the run is then partial.
    pub cap: Option<u64>,
    /// Worker threads for counting/verification. 1 = sequential
    /// (deterministic), 0 = one per core. Enumeration ignores this and is
    /// always sequential.
    pub jobs: usize,
    /// Refuse graphs with more vertices than this (engine hard limit 1024).
    pub max_vertices: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            singular_only: true,
            rank_filter: None,
            max_nodes: None,
            budget: None,
            cap: None,
            jobs: 1,
            max_vertices: ENGINE_MAX_VERTICES,
        }
    }
}

/// Hard ceiling on the number of vertices the search engine accepts.
pub const ENGINE_MAX_VERTICES: usize = 1024;

/// Outcome of a counting or enumeration run.
#[derive(Clone, Debug, Serialize)]
pub struct SearchSummary {
    pub graph: GraphParams,
    pub singular_only: bool,
    /// Maps counted (after filters; for enumeration, maps emitted).
    pub total: u64,
    /// Rank -> count, over the counted maps.
    pub by_rank: BTreeMap<usize, u64>,
    /// Search nodes visited.
    pub nodes: u64,
    /// True when a cap cut the run short.
    pub capped: bool,
}

/// One emitted endomorphism with its precomputed classification.
#[derive(Clone, Debug)]
pub struct Emitted {
    pub map: EndoMap,
    pub rank: usize,
    pub uniform: bool,
    pub image_layer: Option<Layer>,
}

// ---------------------------------------------------------------------------
// Engine internals
// ---------------------------------------------------------------------------

const NODE_CHECK_INTERVAL: u64 = 8192;

/// Immutable per-search data: vertex order and later-neighbor lists.
struct Prep {
    view: GraphView,
    /// position -> vertex id.
    order: Vec<u32>,
    /// position -> positions (later in the order) of neighbors.
    later: Vec<Vec<u32>>,
}

fn prepare(params: &GraphParams, max_vertices: usize) -> Result<Prep> {
    let view = GraphView::build(params, max_vertices.min(ENGINE_MAX_VERTICES))?;
    let n = view.n();
    // Greedy order: start at vertex 0, then repeatedly take the vertex with
    // the most already-ordered neighbors (ties to the smallest id). This
    // keeps candidate sets tight early, which is what forward checking
    // feeds on.
    let mut order = Vec::with_capacity(n);
    let mut chosen = vec![false; n];
    let mut back = vec![0u32; n];
    order.push(0u32);
    chosen[0] = true;
    for u in view.neighbors(0) {
        back[u] += 1;
    }
    for _ in 1..n {
        let mut best = usize::MAX;
        let mut best_deg = 0u32;
        for v in 0..n {
            if !chosen[v] && (best == usize::MAX || back[v] > best_deg) {
                best = v;
                best_deg = back[v];
            }
        }
        order.push(best as u32);
        chosen[best] = true;
        for u in view.neighbors(best) {
            back[u] += 1;
        }
    }
    let mut pos_of = vec![0u32; n];
    for (p, &v) in order.iter().enumerate() {
        pos_of[v as usize] = p as u32;
    }
    let mut later = vec![Vec::new(); n];
    for (p, &v) in order.iter().enumerate() {
        for u in view.neighbors(v as usize) {
            let q = pos_of[u];
            if q as usize > p {
                later[p].push(q);
            }
        }
    }
    Ok(Prep { view, order, later })
}

/// Shared cancellation / budget state.
struct Budget {
    node_limit: u64,
    nodes: AtomicU64,
    deadline: Option<Instant>,
    budget_seconds: f64,
    /// Emission cap; `u64::MAX` means unlimited.
    cap: u64,
    emitted: AtomicU64,
    stop: AtomicBool,
}

impl Budget {
    fn new(opts: &SearchOptions) -> Self {
        Budget {
            node_limit: opts.max_nodes.unwrap_or(u64::MAX),
            nodes: AtomicU64::new(0),
            deadline: opts.budget.map(|d| Instant::now() + d),
            budget_seconds: opts.budget.map(|d| d.as_secs_f64()).unwrap_or(0.0),
            cap: opts.cap.unwrap_or(u64::MAX),
            emitted: AtomicU64::new(0),
            stop: AtomicBool::new(false),
        }
    }

    /// True when a cap was configured and the emission counter passed it.
    fn capped(&self) -> bool {
        self.cap != u64::MAX && self.emitted.load(Relaxed) > self.cap
    }
}

/// Filter table and prune data derived from the options.
struct EngineCfg {
    /// keep_rank[r]: count/emit a leaf of rank r.
    keep_rank: Box<[bool]>,
    /// Candidates introducing a rank beyond this are pruned mid-search.
    rank_ceiling: usize,
}

impl EngineCfg {
    fn new(n: usize, opts: &SearchOptions) -> Self {
        let mut keep_rank = vec![true; n + 1];
        if let Some(filter) = &opts.rank_filter {
            for (r, keep) in keep_rank.iter_mut().enumerate() {
                *keep = filter.contains(&r);
            }
        }
        if opts.singular_only {
            keep_rank[n] = false;
        }
        let rank_ceiling = match &opts.rank_filter {
            Some(filter) => filter.iter().next_back().copied().unwrap_or(0),
            None => {
                if opts.singular_only {
                    n - 1
                } else {
                    n
                }
            }
        };
        EngineCfg {
            keep_rank: keep_rank.into_boxed_slice(),
            rank_ceiling,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
}

/// What a sink sees at each accepted leaf.
struct LeafCtx<'a> {
    images: &'a [u32],
    /// Bitset of image vertices.
    used: &'a [u64],
    rank: usize,
    uniform: bool,
}

trait LeafSink {
    fn leaf(&mut self, ctx: LeafCtx<'_>) -> Flow;
}

/// Sinks that can run per-root-branch and be recombined.
trait ForkSink: LeafSink + Send + Sync {
    fn fork(&self) -> Self
    where
        Self: Sized;
    fn join(&mut self, other: Self)
    where
        Self: Sized;
}

/// Rank histogram shared by all sinks.
#[derive(Clone, Default)]
struct Tally {
    total: u64,
    by_rank: BTreeMap<usize, u64>,
}

impl Tally {
    fn add(&mut self, rank: usize) {
        self.total += 1;
        *self.by_rank.entry(rank).or_insert(0) += 1;
    }

    fn join(&mut self, other: Tally) {
        self.total += other.total;
        for (rank, count) in other.by_rank {
            *self.by_rank.entry(rank).or_insert(0) += count;
        }
    }
}

struct Worker<'a, const W: usize> {
    rows: &'a [u64],
    later: &'a [Vec<u32>],
    order: &'a [u32],
    n: usize,
    keep_rank: &'a [bool],
    rank_ceiling: usize,
    budget: &'a Budget,
    masks: Vec<[u64; W]>,
    trail: Vec<(u32, [u64; W])>,
    images: Vec<u32>,
    use_count: Vec<u32>,
    used: [u64; W],
    used_distinct: u32,
    /// hist[c] = number of image vertices used exactly c times (c >= 1).
    hist: Vec<u32>,
    /// Number of distinct multiplicities present; 1 means uniform.
    hist_levels: u32,
    nodes: u64,
    nodes_published: u64,
    next_check: u64,
}

impl<'a, const W: usize> Worker<'a, W> {
    fn new(prep: &'a Prep, rows: &'a [u64], cfg: &'a EngineCfg, budget: &'a Budget) -> Self {
        let n = prep.view.n();
        let mut full = [0u64; W];
        for (i, word) in bits::full(n).into_iter().enumerate() {
            full[i] = word;
        }
        Worker {
            rows,
            later: &prep.later,
            order: &prep.order,
            n,
            keep_rank: &cfg.keep_rank,
            rank_ceiling: cfg.rank_ceiling,
            budget,
            masks: vec![full; n],
            trail: Vec::with_capacity(4 * n),
            images: vec![u32::MAX; n],
            use_count: vec![0; n],
            used: [0u64; W],
            used_distinct: 0,
            hist: vec![0; n + 2],
            hist_levels: 0,
            nodes: 0,
            nodes_published: 0,
            next_check: NODE_CHECK_INTERVAL,
        }
    }

    #[inline]
    fn assign(&mut self, v: usize, w: usize) {
        self.images[v] = w as u32;
        let c = self.use_count[w];
        self.use_count[w] = c + 1;
        if c == 0 {
            self.used_distinct += 1;
            self.used[w / 64] |= 1u64 << (w % 64);
        } else {
            let hc = &mut self.hist[c as usize];
            *hc -= 1;
            if *hc == 0 {
                self.hist_levels -= 1;
            }
        }
        let hc1 = &mut self.hist[(c + 1) as usize];
        *hc1 += 1;
        if *hc1 == 1 {
            self.hist_levels += 1;
        }
    }

    #[inline]
    fn unassign(&mut self, v: usize, w: usize) {
        let c = self.use_count[w];
        self.use_count[w] = c - 1;
        let hc = &mut self.hist[c as usize];
        *hc -= 1;
        if *hc == 0 {
            self.hist_levels -= 1;
        }
        if c == 1 {
            self.used_distinct -= 1;
            self.used[w / 64] &= !(1u64 << (w % 64));
        } else {
            let hc1 = &mut self.hist[(c - 1) as usize];
            *hc1 += 1;
            if *hc1 == 1 {
                self.hist_levels += 1;
            }
        }
        self.images[v] = u32::MAX;
    }

    /// Assign `order[pos] -> w` and forward-check later neighbors. Returns
    /// the trail mark for undo and whether some candidate set died.
    #[inline]
    fn enter(&mut self, pos: usize, w: usize) -> (usize, bool) {
        let v = self.order[pos] as usize;
        self.assign(v, w);
        let mark = self.trail.len();
        let rows = self.rows;
        let later = self.later;
        let base = w * W;
        let mut dead = false;
        for &q in &later[pos] {
            let q = q as usize;
            let old = self.masks[q];
            let mut new = [0u64; W];
            let mut any = 0u64;
            for k in 0..W {
                new[k] = old[k] & rows[base + k];
                any |= new[k];
            }
            if new != old {
                self.trail.push((q as u32, old));
                self.masks[q] = new;
            }
            if any == 0 {
                dead = true;
                break;
            }
        }
        (mark, dead)
    }

    #[inline]
    fn exit(&mut self, pos: usize, w: usize, mark: usize) {
        while self.trail.len() > mark {
            let (q, old) = self.trail.pop().expect("trail above mark");
            self.masks[q as usize] = old;
        }
        let v = self.order[pos] as usize;
        self.unassign(v, w);
    }

    #[cold]
    fn sync_budget(&mut self) -> Result<()> {
        let delta = self.nodes - self.nodes_published;
        self.nodes_published = self.nodes;
        self.next_check = self.nodes + NODE_CHECK_INTERVAL;
        let total = self.budget.nodes.fetch_add(delta, Relaxed) + delta;
        if total > self.budget.node_limit {
            self.budget.stop.store(true, Relaxed);
            return Err(Error::NodeBudget {
                limit: self.budget.node_limit,
            });
        }
        if let Some(deadline) = self.budget.deadline {
            if Instant::now() > deadline {
                self.budget.stop.store(true, Relaxed);
                return Err(Error::TimeBudget {
                    seconds: self.budget.budget_seconds,
                });
            }
        }
        Ok(())
    }

    fn flush_nodes(&mut self) {
        let delta = self.nodes - self.nodes_published;
        self.nodes_published = self.nodes;
        self.budget.nodes.fetch_add(delta, Relaxed);
    }

    #[inline]
    fn leaf<S: LeafSink>(&mut self, sink: &mut S) -> Flow {
        let rank = self.used_distinct as usize;
        if !self.keep_rank[rank] {
            return Flow::Continue;
        }
        if self.budget.cap != u64::MAX {
            let ticket = self.budget.emitted.fetch_add(1, Relaxed);
            if ticket >= self.budget.cap {
                return Flow::Stop;
            }
        }
        sink.leaf(LeafCtx {
            images: &self.images,
            used: &self.used,
            rank,
            uniform: self.hist_levels == 1,
        })
    }

    fn dfs<S: LeafSink>(&mut self, sink: &mut S, pos: usize) -> Result<Flow> {
        if pos == self.n {
            return Ok(self.leaf(sink));
        }
        let mask = self.masks[pos];
        for (wi, &mask_word) in mask.iter().enumerate() {
            let mut word = mask_word;
            while word != 0 {
                let w = wi * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                self.nodes += 1;
                if self.nodes >= self.next_check {
                    self.sync_budget()?;
                    if self.budget.stop.load(Relaxed) {
                        return Ok(Flow::Stop);
                    }
                }
                // A candidate that would mint a new image past the ceiling
                // cannot lead to a kept leaf: rank never shrinks.
                if self.use_count[w] == 0 && self.used_distinct as usize >= self.rank_ceiling {
                    continue;
                }
                let (mark, dead) = self.enter(pos, w);
                let flow = if dead {
                    Flow::Continue
                } else {
                    self.dfs(sink, pos + 1)?
                };
                self.exit(pos, w, mark);
                if flow == Flow::Stop {
                    return Ok(Flow::Stop);
                }
            }
        }
        Ok(Flow::Continue)
    }
}

/// Pad adjacency rows of `view` out to `W` words per vertex.
fn pad_rows<const W: usize>(view: &GraphView) -> Vec<u64> {
    let n = view.n();
    let words = view.words();
    debug_assert!(words <= W);
    let mut rows = vec![0u64; n * W];
    for v in 0..n {
        rows[v * W..v * W + words].copy_from_slice(view.row(v));
    }
    rows
}

fn run_seq<const W: usize, S: LeafSink>(
    prep: &Prep,
    cfg: &EngineCfg,
    budget: &Budget,
    sink: &mut S,
) -> Result<u64> {
    let rows = pad_rows::<W>(&prep.view);
    let mut worker = Worker::<W>::new(prep, &rows, cfg, budget);
    let outcome = worker.dfs(sink, 0);
    worker.flush_nodes();
    outcome?;
    Ok(budget.nodes.load(Relaxed))
}

fn run_par<const W: usize, S: ForkSink>(
    prep: &Prep,
    cfg: &EngineCfg,
    budget: &Budget,
    sink: &mut S,
    jobs: usize,
) -> Result<u64> {
    let rows = pad_rows::<W>(&prep.view);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::BadParameter(format!("could not build thread pool: {e}")))?;
    let n = prep.view.n();
    // Split on the images of the first ordered vertex: the subtrees are
    // disjoint and cover everything, and counts merge additively.
    let results: Vec<Result<S>> = pool.install(|| {
        (0..n)
            .into_par_iter()
            .map(|w| {
                let mut worker = Worker::<W>::new(prep, &rows, cfg, budget);
                let mut local = sink.fork();
                let outcome = (|| -> Result<()> {
                    if cfg.rank_ceiling == 0 {
                        return Ok(());
                    }
                    let (_, dead) = worker.enter(0, w);
                    if !dead {
                        worker.dfs(&mut local, 1)?;
                    }
                    Ok(())
                })();
                worker.flush_nodes();
                outcome.map(|()| local)
            })
            .collect()
    });
    let mut first_err = None;
    for r in results {
        match r {
            Ok(local) => sink.join(local),
            Err(e) => first_err = first_err.or(Some(e)),
        }
    }
    if let Some(e) = first_err {
        return Err(e);
    }
    Ok(budget.nodes.load(Relaxed))
}

/// Pick the word width and run sequentially.
fn dispatch_seq<S: LeafSink>(
    prep: &Prep,
    cfg: &EngineCfg,
    budget: &Budget,
    sink: &mut S,
) -> Result<u64> {
    match prep.view.words() {
        1 => run_seq::<1, S>(prep, cfg, budget, sink),
        2 => run_seq::<2, S>(prep, cfg, budget, sink),
        3 | 4 => run_seq::<4, S>(prep, cfg, budget, sink),
        5..=8 => run_seq::<8, S>(prep, cfg, budget, sink),
        _ => run_seq::<16, S>(prep, cfg, budget, sink),
    }
}

/// Pick the word width and run with `jobs` workers (1 = sequential).
fn dispatch_par<S: ForkSink>(
    prep: &Prep,
    cfg: &EngineCfg,
    budget: &Budget,
    sink: &mut S,
    jobs: usize,
) -> Result<u64> {
    if jobs == 1 {
        return dispatch_seq(prep, cfg, budget, sink);
    }
    match prep.view.words() {
        1 => run_par::<1, S>(prep, cfg, budget, sink, jobs),
        2 => run_par::<2, S>(prep, cfg, budget, sink, jobs),
        3 | 4 => run_par::<4, S>(prep, cfg, budget, sink, jobs),
        5..=8 => run_par::<8, S>(prep, cfg, budget, sink, jobs),
        _ => run_par::<16, S>(prep, cfg, budget, sink, jobs),
    }
}

// ---------------------------------------------------------------------------
// Sinks
// ---------------------------------------------------------------------------

struct CountSink {
    tally: Tally,
}

impl LeafSink for CountSink {
    fn leaf(&mut self, ctx: LeafCtx<'_>) -> Flow {
        self.tally.add(ctx.rank);
        Flow::Continue
    }
}

impl ForkSink for CountSink {
    fn fork(&self) -> Self {
        CountSink {
            tally: Tally::default(),
        }
    }

    fn join(&mut self, other: Self) {
        self.tally.join(other.tally);
    }
}

struct EnumSink<'f> {
    params: &'f GraphParams,
    tally: Tally,
    f: &'f mut dyn FnMut(&Emitted) -> bool,
}

impl LeafSink for EnumSink<'_> {
    fn leaf(&mut self, ctx: LeafCtx<'_>) -> Flow {
        self.tally.add(ctx.rank);
        let emitted = Emitted {
            map: EndoMap::from_u32(ctx.images.to_vec()),
            rank: ctx.rank,
            uniform: ctx.uniform,
            image_layer: graph::layer_of_bits(self.params, ctx.used),
        };
        if (self.f)(&emitted) {
            Flow::Continue
        } else {
            Flow::Stop
        }
    }
}

/// Count endomorphisms by rank without materializing them.
pub fn count_endomorphisms(params: &GraphParams, opts: &SearchOptions) -> Result<SearchSummary> {
    let prep = prepare(params, opts.max_vertices)?;
    let cfg = EngineCfg::new(prep.view.n(), opts);
    let budget = Budget::new(opts);
    let mut sink = CountSink {
        tally: Tally::default(),
    };
    let nodes = dispatch_par(&prep, &cfg, &budget, &mut sink, opts.jobs)?;
    Ok(SearchSummary {
        graph: params.clone(),
        singular_only: opts.singular_only,
        total: sink.tally.total,
        by_rank: sink.tally.by_rank,
        nodes,
        capped: budget.capped(),
    })
}

/// Stream endomorphisms in the engine's canonical depth-first order. The
/// callback returns `false` to stop early; `opts.cap` bounds the number of
/// emissions (the summary is then marked partial). Always sequential.
pub fn enumerate_endomorphisms(
    params: &GraphParams,
    opts: &SearchOptions,
    mut f: impl FnMut(&Emitted) -> bool,
) -> Result<SearchSummary> {
    let prep = prepare(params, opts.max_vertices)?;
    let cfg = EngineCfg::new(prep.view.n(), opts);
    let budget = Budget::new(opts);
    let mut sink = EnumSink {
        params,
        tally: Tally::default(),
        f: &mut f,
    };
    let nodes = dispatch_seq(&prep, &cfg, &budget, &mut sink)?;
    Ok(SearchSummary {
        graph: params.clone(),
        singular_only: opts.singular_only,
        total: sink.tally.total,
        by_rank: sink.tally.by_rank,
        nodes,
        capped: budget.capped(),
    })
}

// ---------------------------------------------------------------------------
// Family classification and verification
// ---------------------------------------------------------------------------

/// The graph families with known singular-endomorphism structure.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyKind {
    /// Equal sides, `S = {1..k}`.
    ConsecutiveDistances { k: usize },
    /// Equal sides, `S = {m}`.
    CategoricalProduct,
    /// Equal sides, `S = {2..m}`.
    ComplementOfHamming,
    /// Mixed sides, `S = {1}`.
    CuboidalHamming,
}

/// Classify the parameter set into a verifiable family. Priority when sets
/// coincide (e.g. `m = 2`, `S = {2}`): consecutive, then categorical
/// product, then complement.
pub fn family_of(params: &GraphParams) -> Option<FamilyKind> {
    let m = params.m();
    let ds: Vec<usize> = params.distances().iter().copied().collect();
    let consecutive = ds.iter().copied().eq(1..=ds.len());
    if params.equal_side().is_some() {
        if consecutive {
            return Some(FamilyKind::ConsecutiveDistances { k: ds.len() });
        }
        if ds == [m] {
            return Some(FamilyKind::CategoricalProduct);
        }
        if ds.iter().copied().eq(2..=m) {
            return Some(FamilyKind::ComplementOfHamming);
        }
        None
    } else if ds == [1] {
        Some(FamilyKind::CuboidalHamming)
    } else {
        None
    }
}

/// The ranks singular endomorphisms may take in each family.
pub fn expected_ranks(params: &GraphParams, family: FamilyKind) -> BTreeSet<usize> {
    let m = params.m();
    match family {
        FamilyKind::ConsecutiveDistances { k } => {
            let n = params.equal_side().expect("family implies equal sides") as usize;
            (k..m).map(|d| n.pow(d as u32)).collect()
        }
        FamilyKind::CategoricalProduct => {
            let n = params.equal_side().expect("family implies equal sides") as usize;
            (1..m).map(|d| n.pow(d as u32)).collect()
        }
        FamilyKind::ComplementOfHamming => {
            let n = params.equal_side().expect("family implies equal sides") as usize;
            [n.pow((m - 1) as u32)].into_iter().collect()
        }
        FamilyKind::CuboidalHamming => {
            let (sorted, _) = params.normalized();
            let sides = sorted.sides();
            let t = m - 1;
            let mut ranks = BTreeSet::new();
            for mask in 0..(1u64 << t) {
                if mask == (1u64 << t) - 1 {
                    continue; // the full product is the bijective rank
                }
                let mut rank = sides[0] as usize;
                for (i, &side) in sides[1..].iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        rank *= side as usize;
                    }
                }
                ranks.insert(rank);
            }
            ranks
        }
    }
}

/// A map that broke a family claim, with the reason.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub map: Vec<VertexId>,
    pub reason: String,
}

/// Outcome of sweeping every singular endomorphism against the family's
/// structural claims.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub graph: GraphParams,
    pub family: FamilyKind,
    pub expected_ranks: Vec<usize>,
    /// Singular maps checked.
    pub checked: u64,
    pub by_rank: BTreeMap<usize, u64>,
    pub violation_count: u64,
    /// At most [`VIOLATION_SAMPLE`] examples.
    pub violations: Vec<Violation>,
    /// True when a cap cut the sweep short.
    pub partial: bool,
    pub nodes: u64,
}

/// How many violating maps are kept verbatim in a report.
pub const VIOLATION_SAMPLE: usize = 16;

struct VerifySink<'a> {
    view: &'a GraphView,
    /// expected_rank[r] set for admissible ranks.
    expected_rank: &'a [bool],
    /// Image must be a layer with dimension in this range.
    layer_dims: Option<(usize, usize)>,
    /// Image must be pairwise adjacent.
    clique_image: bool,
    tally: Tally,
    violation_count: u64,
    violations: Vec<Violation>,
}

impl VerifySink<'_> {
    fn violation(&mut self, ctx: &LeafCtx<'_>, reason: String) {
        self.violation_count += 1;
        if self.violations.len() < VIOLATION_SAMPLE {
            self.violations.push(Violation {
                map: ctx.images.iter().map(|&w| w as usize).collect(),
                reason,
            });
        }
    }

    /// Allocation-free layer test over the image bitset: free coordinates
    /// are those where image tuples disagree; the image is a layer iff its
    /// size equals the product of the free sides.
    fn image_layer_dim(&self, used: &[u64], rank: usize) -> Option<usize> {
        let params = self.view.params();
        let m = params.m();
        let mut first = usize::MAX;
        let mut varies = [false; 32];
        debug_assert!(m <= 32);
        for v in bits::iter_ones(used) {
            if first == usize::MAX {
                first = v;
                continue;
            }
            let t = self.view.tuple(v);
            let base = self.view.tuple(first);
            for i in 0..m {
                if t[i] != base[i] {
                    varies[i] = true;
                }
            }
        }
        let mut size = 1usize;
        let mut dim = 0usize;
        for i in 0..m {
            if varies[i] {
                size *= params.side(i) as usize;
                dim += 1;
            }
        }
        (size == rank).then_some(dim)
    }
}

impl LeafSink for VerifySink<'_> {
    fn leaf(&mut self, ctx: LeafCtx<'_>) -> Flow {
        self.tally.add(ctx.rank);
        if !ctx.uniform {
            self.violation(&ctx, format!("kernel classes not uniform at rank {}", ctx.rank));
        }
        if ctx.rank >= self.expected_rank.len() || !self.expected_rank[ctx.rank] {
            self.violation(&ctx, format!("rank {} outside the expected set", ctx.rank));
        } else {
            if let Some((lo, hi)) = self.layer_dims {
                match self.image_layer_dim(ctx.used, ctx.rank) {
                    Some(dim) if dim >= lo && dim <= hi => {}
                    Some(dim) => self.violation(
                        &ctx,
                        format!("image is a {dim}-layer, outside dimensions {lo}..={hi}"),
                    ),
                    None => self.violation(&ctx, "image is not a layer".into()),
                }
            }
            if self.clique_image {
                let members: Vec<usize> = bits::iter_ones(ctx.used).collect();
                'pairs: for (i, &a) in members.iter().enumerate() {
                    for &b in &members[i + 1..] {
                        if !self.view.adjacent(a, b) {
                            self.violation(&ctx, "image is not a clique".into());
                            break 'pairs;
                        }
                    }
                }
            }
        }
        Flow::Continue
    }
}

impl ForkSink for VerifySink<'_> {
    fn fork(&self) -> Self {
        VerifySink {
            view: self.view,
            expected_rank: self.expected_rank,
            layer_dims: self.layer_dims,
            clique_image: self.clique_image,
            tally: Tally::default(),
            violation_count: 0,
            violations: Vec::new(),
        }
    }

    fn join(&mut self, other: Self) {
        self.tally.join(other.tally);
        self.violation_count += other.violation_count;
        for v in other.violations {
            if self.violations.len() < VIOLATION_SAMPLE {
                self.violations.push(v);
            }
        }
    }
}

/// Exhaustively check every singular endomorphism against the structural
/// claims of the graph's family: uniform kernel, admissible rank, and the
/// image shape the family prescribes (a layer of admissible dimension for
/// consecutive distance sets, a clique for the complement family).
/// `opts.cap` turns this into a partial sweep over a prefix of the search.
pub fn verify_family(params: &GraphParams, opts: &SearchOptions) -> Result<VerifyReport> {
    let family = family_of(params)
        .ok_or_else(|| Error::UnsupportedFamily(params.to_string()))?;
    let expected = expected_ranks(params, family);
    let mut opts = opts.clone();
    opts.singular_only = true;
    let prep = prepare(params, opts.max_vertices)?;
    let n = prep.view.n();
    let cfg = EngineCfg::new(n, &opts);
    let budget = Budget::new(&opts);
    let mut expected_rank = vec![false; n + 1];
    for &r in &expected {
        if r <= n {
            expected_rank[r] = true;
        }
    }
    let layer_dims = match family {
        FamilyKind::ConsecutiveDistances { k } => Some((k, params.m().saturating_sub(1))),
        _ => None,
    };
    let clique_image = family == FamilyKind::ComplementOfHamming;
    let mut sink = VerifySink {
        view: &prep.view,
        expected_rank: &expected_rank,
        layer_dims,
        clique_image,
        tally: Tally::default(),
        violation_count: 0,
        violations: Vec::new(),
    };
    let nodes = dispatch_par(&prep, &cfg, &budget, &mut sink, opts.jobs)?;
    Ok(VerifyReport {
        graph: params.clone(),
        family,
        expected_ranks: expected.into_iter().collect(),
        checked: sink.tally.total,
        by_rank: sink.tally.by_rank,
        violation_count: sink.violation_count,
        violations: sink.violations,
        partial: budget.capped(),
        nodes,
    })
}

// ---------------------------------------------------------------------------
// Decomposition
// ---------------------------------------------------------------------------

/// Decompose a singular endomorphism of an equal-sided `S = {1}` graph into
/// its construction data: the image layer, the partition of the domain
/// coordinates into dependency blocks (one per free coordinate of the image
/// layer), the Latin hypercube each block induces, and the block-to-
/// coordinate matching. Any structural failure (image not a layer, blocks
/// not partitioning, a block table failing the Latin property, or the
/// rebuilt map disagreeing) is reported as [`Error::StructureViolation`].
pub fn decompose(params: &GraphParams, map: &EndoMap) -> Result<ConstructionSpec> {
    let n = params.equal_side().ok_or_else(|| {
        Error::UnsupportedFamily(format!("decomposition requires equal sides, got {params}"))
    })?;
    if params.distances().iter().copied().collect::<Vec<_>>() != vec![1] {
        return Err(Error::UnsupportedFamily(format!(
            "decomposition requires S = {{1}}, got {params}"
        )));
    }
    check_endomorphism(params, map)?;
    if !map.is_singular() {
        return Err(Error::NotSingular);
    }
    let m = params.m();
    let count = params.vertex_count();
    let image = map.image_vertices();
    let layer = graph::as_layer(params, &image)?.ok_or_else(|| {
        Error::StructureViolation("image is not a layer".into())
    })?;
    let k = layer.dim();
    // Image coordinate functions: phi[j][v] = coordinate free[j] of f(v).
    let mut tuples = vec![0u16; count * m];
    for v in 0..count {
        params.decode_into(v, &mut tuples[v * m..(v + 1) * m]);
    }
    let free = layer.free().to_vec();
    let phi: Vec<Vec<u16>> = free
        .iter()
        .map(|&c| {
            (0..count)
                .map(|v| tuples[map.apply(v) * m + c])
                .collect()
        })
        .collect();
    // Strides for coordinate surgery on vertex ids.
    let mut stride = vec![1usize; m];
    for i in (0..m - 1).rev() {
        stride[i] = stride[i + 1] * params.side(i + 1) as usize;
    }
    // Dependency block of each image coordinate: the domain coordinates
    // that influence it.
    let mut parts: Vec<Vec<usize>> = Vec::with_capacity(k);
    for phi_j in &phi {
        let mut block = Vec::new();
        for i in 0..m {
            let mut depends = false;
            for v in 0..count {
                let vi = tuples[v * m + i] as usize;
                if vi != 0 && phi_j[v] != phi_j[v - vi * stride[i]] {
                    depends = true;
                    break;
                }
            }
            if depends {
                block.push(i);
            }
        }
        parts.push(block);
    }
    // The blocks must partition the domain coordinates.
    let mut owner = vec![usize::MAX; m];
    for (j, block) in parts.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::StructureViolation(format!(
                "image coordinate {} depends on nothing",
                free[j] + 1
            )));
        }
        for &i in block {
            if owner[i] != usize::MAX {
                return Err(Error::StructureViolation(format!(
                    "domain coordinate {} feeds two image coordinates",
                    i + 1
                )));
            }
            owner[i] = j;
        }
    }
    if let Some(orphan) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::StructureViolation(format!(
            "domain coordinate {} influences no image coordinate",
            orphan + 1
        )));
    }
    // Extract the per-block tables; all non-block coordinates are pinned to
    // zero, which is representative because the block is exactly the
    // dependency set.
    let mut cubes = Vec::with_capacity(k);
    for (j, block) in parts.iter().enumerate() {
        let d = block.len();
        let cells_count = (n as usize).pow(d as u32);
        let mut cells = Vec::with_capacity(cells_count);
        let mut pos = vec![0u16; d];
        for _ in 0..cells_count {
            let v: usize = pos
                .iter()
                .zip(block)
                .map(|(&value, &coord)| value as usize * stride[coord])
                .sum();
            cells.push(phi[j][v] as u32);
            // Mixed-radix advance over the block coordinates.
            for slot in (0..d).rev() {
                pos[slot] += 1;
                if pos[slot] < n {
                    break;
                }
                pos[slot] = 0;
            }
        }
        let cube = LatinHypercube::new(d, n, 1, cells)?;
        if let Err(violation) = cube.validate() {
            return Err(Error::StructureViolation(format!(
                "block {{{}}} is not a Latin hypercube: {violation}",
                block.iter().map(|&i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
            )));
        }
        cubes.push(cube);
    }
    let spec = ConstructionSpec::new(params, layer, parts, cubes, free)?;
    let rebuilt = construct::build_endomorphism(params, &spec)?;
    if rebuilt != *map {
        return Err(Error::StructureViolation(
            "rebuilt map disagrees with the original".into(),
        ));
    }
    Ok(spec)
}
