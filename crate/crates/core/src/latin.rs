//! Latin hypercubes and hypercuboids: validation, exhaustive enumeration,
//! and count tables.
//!
//! A *Latin hypercube* of dimension `d`, order `n`, and class `k`
//! (`1 <= k <= d`) assigns one of `n^k` symbols to every cell of the
//! `n x ... x n` array so that within every `k`-layer (fix all but `k`
//! coordinates) each symbol appears exactly once. Each symbol then appears
//! `n^(d-k)` times overall. Class `d` is the trivial class: every cell of
//! the single `d`-layer gets a distinct symbol.
//!
//! A *Latin hypercuboid* generalizes the sides to a nonincreasing list
//! `n_1 >= ... >= n_d >= 2` with `n_1 * ... * n_k` symbols: `k`-layers of
//! full size `n_1 * ... * n_k` must contain every symbol exactly once, and
//! smaller `k`-layers must not repeat a symbol.

use itertools::Itertools;

use crate::error::{Error, Result};

/// Search limits shared by the enumeration routines in this crate.
#[derive(Clone, Copy, Debug, Default)]
pub struct EnumLimits {
    /// Abort with [`Error::NodeBudget`] after this many search nodes.
    pub max_nodes: Option<u64>,
}

/// Outcome statistics of an enumeration walk.
#[derive(Clone, Copy, Debug)]
pub struct EnumStats {
    /// Search nodes visited (one per candidate symbol tried at a cell).
    pub nodes: u64,
    /// True when the visitor stopped the walk early.
    pub stopped: bool,
}

/// Where a violation was found and what went wrong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellViolation {
    /// Free coordinates of the offending layer (0-based).
    pub free: Vec<usize>,
    /// Fixed coordinates and values of the offending layer (0-based).
    pub fixed: Vec<(usize, u16)>,
    /// The symbol at fault.
    pub symbol: u32,
    pub kind: ViolationKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// Symbol appears more than once in a layer where repeats are forbidden.
    RepeatedInLayer,
    /// Symbol missing from a layer that must contain every symbol.
    MissingFromLayer,
}

impl std::fmt::Display for CellViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let what = match self.kind {
            ViolationKind::RepeatedInLayer => "repeated in",
            ViolationKind::MissingFromLayer => "missing from",
        };
        write!(
            f,
            "symbol {} {} layer free={{{}}} fixed={{{}}}",
            self.symbol,
            what,
            self.free.iter().map(|c| c + 1).join(","),
            self.fixed
                .iter()
                .map(|&(c, v)| format!("{}:{}", c + 1, v))
                .join(", ")
        )
    }
}

/// Row-major cell array over sides `sides`, coordinate 0 most significant.
fn cell_index(sides: &[u16], pos: &[u16]) -> usize {
    let mut idx = 0usize;
    for (&p, &s) in pos.iter().zip(sides) {
        idx = idx * s as usize + p as usize;
    }
    idx
}

fn checked_cell_count(sides: &[u16]) -> Result<usize> {
    sides
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s as usize))
        .ok_or(Error::Overflow("cell count"))
}

/// A filled `d`-dimensional array with equal sides, checked for shape at
/// construction; [`validate`](Self::validate) checks the Latin property.
///
/// The JSON form is `{"dim":2,"order":3,"class":1,"cells":[[...],[...]]}`
/// with cells as nested arrays, outermost index = coordinate 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LatinHypercube {
    dim: usize,
    order: u16,
    class: usize,
    cells: Vec<u32>,
}

impl LatinHypercube {
    /// Wrap a row-major cell array. Checks dimensions, the class range
    /// `1 <= k <= d`, the cell count, and the symbol range `0..n^k`; does
    /// *not* check the Latin property (see [`validate`](Self::validate)).
    pub fn new(dim: usize, order: u16, class: usize, cells: Vec<u32>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::MalformedArray("dimension must be at least 1".into()));
        }
        if order == 0 {
            return Err(Error::MalformedArray("order must be at least 1".into()));
        }
        if class == 0 || class > dim {
            return Err(Error::MalformedArray(format!(
                "class {class} out of range 1..={dim}"
            )));
        }
        let expected = checked_cell_count(&vec![order; dim])?;
        if cells.len() != expected {
            return Err(Error::MalformedArray(format!(
                "expected {expected} cells, got {}",
                cells.len()
            )));
        }
        let symbols = (order as u64).pow(class as u32);
        if let Some(&bad) = cells.iter().find(|&&s| s as u64 >= symbols) {
            return Err(Error::MalformedArray(format!(
                "symbol {bad} out of range 0..{symbols}"
            )));
        }
        Ok(LatinHypercube {
            dim,
            order,
            class,
            cells,
        })
    }

    /// Build from a function of the cell position.
    pub fn from_fn(
        dim: usize,
        order: u16,
        class: usize,
        f: impl Fn(&[u16]) -> u32,
    ) -> Result<Self> {
        let sides = vec![order; dim];
        let count = checked_cell_count(&sides)?;
        let mut cells = Vec::with_capacity(count);
        let mut pos = vec![0u16; dim];
        for _ in 0..count {
            cells.push(f(&pos));
            advance(&mut pos, &sides);
        }
        Self::new(dim, order, class, cells)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u16 {
        self.order
    }

    pub fn class(&self) -> usize {
        self.class
    }

    /// Number of distinct symbols, `n^k`.
    pub fn symbol_count(&self) -> usize {
        (self.order as usize).pow(self.class as u32)
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    /// Symbol at a position tuple.
    pub fn get(&self, pos: &[u16]) -> u32 {
        debug_assert_eq!(pos.len(), self.dim);
        debug_assert!(pos.iter().all(|&p| p < self.order));
        self.cells[cell_index(&vec![self.order; self.dim], pos)]
    }

    /// Check the Latin property: every symbol exactly once in every
    /// `k`-layer. Returns the first violation found, scanning layers by
    /// free-set then fixed values.
    pub fn validate(&self) -> std::result::Result<(), CellViolation> {
        let sides = vec![self.order; self.dim];
        validate_array(&sides, self.class, self.symbol_count(), &self.cells)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Nested-array JSON form.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
            "order": self.order,
            "class": self.class,
            "cells": nest(&vec![self.order; self.dim], &self.cells),
        })
    }

    /// Parse the JSON form produced by [`to_json`](Self::to_json).
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let bad = |msg: &str| Error::MalformedArray(msg.to_owned());
        let obj = value.as_object().ok_or_else(|| bad("expected an object"))?;
        let dim = obj
            .get("dim")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| bad("missing integer field `dim`"))? as usize;
        let order = obj
            .get("order")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| bad("missing integer field `order`"))?;
        let order = u16::try_from(order)
            .map_err(|_| bad("field `order` does not fit in 16 bits"))?;
        let class = obj
            .get("class")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| bad("missing integer field `class`"))? as usize;
        let cells_json = obj.get("cells").ok_or_else(|| bad("missing field `cells`"))?;
        let mut cells = Vec::new();
        unnest(&vec![order; dim], cells_json, &mut cells)?;
        Self::new(dim, order, class, cells)
    }
}

impl serde::Serialize for LatinHypercube {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(ser)
    }
}

/// A filled array with (nonincreasing) mixed sides; symbols `0..n_1*...*n_k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LatinHypercuboid {
    sides: Vec<u16>,
    class: usize,
    cells: Vec<u32>,
}

impl LatinHypercuboid {
    /// Wrap a row-major cell array. Sides must already be nonincreasing and
    /// at least 2 (see [`normalize_type`] for sorting a raw side list).
    pub fn new(sides: Vec<u16>, class: usize, cells: Vec<u32>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::MalformedArray("need at least one side".into()));
        }
        if sides.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::MalformedArray(format!(
                "sides {sides:?} are not nonincreasing"
            )));
        }
        if let Some(&bad) = sides.iter().find(|&&s| s < 2) {
            return Err(Error::MalformedArray(format!(
                "side {bad} is below the minimum of 2"
            )));
        }
        let d = sides.len();
        if class == 0 || class > d {
            return Err(Error::MalformedArray(format!(
                "class {class} out of range 1..={d}"
            )));
        }
        let expected = checked_cell_count(&sides)?;
        if cells.len() != expected {
            return Err(Error::MalformedArray(format!(
                "expected {expected} cells, got {}",
                cells.len()
            )));
        }
        let symbols: u64 = sides[..class].iter().map(|&s| s as u64).product();
        if let Some(&bad) = cells.iter().find(|&&s| s as u64 >= symbols) {
            return Err(Error::MalformedArray(format!(
                "symbol {bad} out of range 0..{symbols}"
            )));
        }
        Ok(LatinHypercuboid {
            sides,
            class,
            cells,
        })
    }

    pub fn sides(&self) -> &[u16] {
        &self.sides
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn class(&self) -> usize {
        self.class
    }

    /// Number of distinct symbols, the product of the first `k` sides.
    pub fn symbol_count(&self) -> usize {
        self.sides[..self.class]
            .iter()
            .map(|&s| s as usize)
            .product()
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn get(&self, pos: &[u16]) -> u32 {
        debug_assert_eq!(pos.len(), self.dim());
        self.cells[cell_index(&self.sides, pos)]
    }

    /// Check the Latin property: symbols appear exactly once in full-size
    /// `k`-layers and at most once in smaller ones.
    pub fn validate(&self) -> std::result::Result<(), CellViolation> {
        validate_array(&self.sides, self.class, self.symbol_count(), &self.cells)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Reorder the axes by `perm` (new axis `j` = old axis `perm[j]`). The
    /// permuted sides must still be nonincreasing.
    pub fn axes_permuted(&self, perm: &[usize]) -> Result<Self> {
        let d = self.dim();
        if perm.len() != d {
            return Err(Error::LengthMismatch {
                expected: d,
                got: perm.len(),
            });
        }
        let mut seen = vec![false; d];
        for &p in perm {
            if p >= d || std::mem::replace(&mut seen[p], true) {
                return Err(Error::BadParameter(format!(
                    "{perm:?} is not a permutation of 0..{d}"
                )));
            }
        }
        let new_sides: Vec<u16> = perm.iter().map(|&p| self.sides[p]).collect();
        let count = self.cells.len();
        let mut new_cells = vec![0u32; count];
        let mut pos = vec![0u16; d];
        let mut old_pos = vec![0u16; d];
        for cell in new_cells.iter_mut() {
            for (j, &p) in perm.iter().enumerate() {
                old_pos[p] = pos[j];
            }
            *cell = self.cells[cell_index(&self.sides, &old_pos)];
            advance(&mut pos, &new_sides);
        }
        Self::new(new_sides, self.class, new_cells)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "sides": self.sides,
            "class": self.class,
            "cells": nest(&self.sides, &self.cells),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let bad = |msg: &str| Error::MalformedArray(msg.to_owned());
        let obj = value.as_object().ok_or_else(|| bad("expected an object"))?;
        let sides_json = obj
            .get("sides")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("missing array field `sides`"))?;
        let sides: Vec<u16> = sides_json
            .iter()
            .map(|v| {
                v.as_u64()
                    .and_then(|s| u16::try_from(s).ok())
                    .ok_or_else(|| bad("sides must be small nonnegative integers"))
            })
            .try_collect()?;
        let class = obj
            .get("class")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| bad("missing integer field `class`"))? as usize;
        let cells_json = obj.get("cells").ok_or_else(|| bad("missing field `cells`"))?;
        let mut cells = Vec::new();
        unnest(&sides, cells_json, &mut cells)?;
        Self::new(sides, class, cells)
    }
}

impl serde::Serialize for LatinHypercuboid {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(ser)
    }
}

/// Sort a raw side list into the canonical nonincreasing order. Returns the
/// sorted sides and the permutation `perm` with new axis `j` = old axis
/// `perm[j]`.
pub fn normalize_type(sides: &[u16]) -> (Vec<u16>, Vec<usize>) {
    let mut perm: Vec<usize> = (0..sides.len()).collect();
    perm.sort_by_key(|&i| (std::cmp::Reverse(sides[i]), i));
    (perm.iter().map(|&i| sides[i]).collect(), perm)
}

/// Mixed-radix increment of a position tuple; wraps to all zeros at the end.
fn advance(pos: &mut [u16], sides: &[u16]) {
    for i in (0..pos.len()).rev() {
        pos[i] += 1;
        if pos[i] < sides[i] {
            return;
        }
        pos[i] = 0;
    }
}

/// Shared validation walk: for every `k`-subset of the axes and every layer,
/// the symbols in a layer of size `symbols` must hit everything exactly
/// once; smaller layers must have no repeats.
fn validate_array(
    sides: &[u16],
    class: usize,
    symbols: usize,
    cells: &[u32],
) -> std::result::Result<(), CellViolation> {
    let d = sides.len();
    let mut counts = vec![0u32; symbols];
    for free in (0..d).combinations(class) {
        let fixed_coords: Vec<usize> = (0..d).filter(|c| !free.contains(c)).collect();
        let layer_size: usize = free.iter().map(|&c| sides[c] as usize).product();
        let full = layer_size == symbols;
        let mut fixed_pos = vec![0u16; fixed_coords.len()];
        let fixed_sides: Vec<u16> = fixed_coords.iter().map(|&c| sides[c]).collect();
        let layer_total: usize = fixed_sides.iter().map(|&s| s as usize).product();
        let mut pos = vec![0u16; d];
        for _ in 0..layer_total.max(1) {
            counts.iter_mut().for_each(|c| *c = 0);
            for (&c, &v) in fixed_coords.iter().zip(&fixed_pos) {
                pos[c] = v;
            }
            let mut free_pos = vec![0u16; class];
            let free_sides: Vec<u16> = free.iter().map(|&c| sides[c]).collect();
            for _ in 0..layer_size {
                for (&c, &v) in free.iter().zip(&free_pos) {
                    pos[c] = v;
                }
                let sym = cells[cell_index(sides, &pos)] as usize;
                counts[sym] += 1;
                if counts[sym] > 1 {
                    return Err(CellViolation {
                        free: free.clone(),
                        fixed: fixed_coords.iter().copied().zip(fixed_pos.clone()).collect(),
                        symbol: sym as u32,
                        kind: ViolationKind::RepeatedInLayer,
                    });
                }
                advance(&mut free_pos, &free_sides);
            }
            if full {
                if let Some(missing) = counts.iter().position(|&c| c == 0) {
                    return Err(CellViolation {
                        free: free.clone(),
                        fixed: fixed_coords.iter().copied().zip(fixed_pos.clone()).collect(),
                        symbol: missing as u32,
                        kind: ViolationKind::MissingFromLayer,
                    });
                }
            }
            advance(&mut fixed_pos, &fixed_sides);
        }
    }
    Ok(())
}

/// Nest a row-major cell array into JSON arrays, outermost = coordinate 0.
fn nest(sides: &[u16], cells: &[u32]) -> serde_json::Value {
    if sides.is_empty() {
        return serde_json::json!(cells[0]);
    }
    let chunk = cells.len() / sides[0] as usize;
    serde_json::Value::Array(
        (0..sides[0] as usize)
            .map(|i| nest(&sides[1..], &cells[i * chunk..(i + 1) * chunk]))
            .collect(),
    )
}

/// Flatten nested JSON arrays back into row-major order, checking shape.
fn unnest(sides: &[u16], value: &serde_json::Value, out: &mut Vec<u32>) -> Result<()> {
    if sides.is_empty() {
        let sym = value
            .as_u64()
            .and_then(|s| u32::try_from(s).ok())
            .ok_or_else(|| Error::MalformedArray(format!("bad cell value {value}")))?;
        out.push(sym);
        return Ok(());
    }
    let arr = value.as_array().ok_or_else(|| {
        Error::MalformedArray(format!("expected a nesting of depth {}", sides.len()))
    })?;
    if arr.len() != sides[0] as usize {
        return Err(Error::MalformedArray(format!(
            "expected {} entries at this depth, got {}",
            sides[0],
            arr.len()
        )));
    }
    for v in arr {
        unnest(&sides[1..], v, out)?;
    }
    Ok(())
}

/// Backtracking enumerator shared by cubes and cuboids.
///
/// Cells are filled in row-major order; for each class (`k`-subset of axes)
/// and each layer within it a used-symbol mask enforces "at most once". When
/// every cell is filled, full-size layers automatically hold every symbol
/// exactly once (distinct symbols in `symbols` cells), so leaves are valid
/// arrays and enumeration order is lexicographic in the cell array.
struct ArrayDfs<'a> {
    sides: &'a [u16],
    symbols: usize,
    cells: Vec<u32>,
    /// For each class, the layer id of every cell in that class.
    layer_of_cell: Vec<Vec<u32>>,
    /// For each class, one u64 used-mask per layer.
    used: Vec<Vec<u64>>,
    nodes: u64,
    max_nodes: Option<u64>,
}

impl<'a> ArrayDfs<'a> {
    fn build(sides: &'a [u16], class: usize, symbols: usize, limits: &EnumLimits) -> Result<Self> {
        if symbols > 64 {
            return Err(Error::BadParameter(format!(
                "enumeration supports at most 64 symbols, got {symbols}"
            )));
        }
        let d = sides.len();
        let count = checked_cell_count(sides)?;
        let mut layer_of_cell = Vec::new();
        let mut used = Vec::new();
        for free in (0..d).combinations(class) {
            let fixed_coords: Vec<usize> = (0..d).filter(|c| !free.contains(c)).collect();
            let mut ids = vec![0u32; count];
            let mut pos = vec![0u16; d];
            let mut layer_total = 1usize;
            for &c in &fixed_coords {
                layer_total *= sides[c] as usize;
            }
            for id in ids.iter_mut() {
                let mut lid = 0u32;
                for &c in &fixed_coords {
                    lid = lid * sides[c] as u32 + pos[c] as u32;
                }
                *id = lid;
                advance(&mut pos, sides);
            }
            layer_of_cell.push(ids);
            used.push(vec![0u64; layer_total.max(1)]);
        }
        Ok(ArrayDfs {
            sides,
            symbols,
            cells: vec![0u32; count],
            layer_of_cell,
            used,
            nodes: 0,
            max_nodes: limits.max_nodes,
        })
    }

    /// Symbols still allowed at `cell` across every class constraint.
    fn allowed(&self, cell: usize) -> u64 {
        let mut used_any = 0u64;
        for (ids, masks) in self.layer_of_cell.iter().zip(&self.used) {
            used_any |= masks[ids[cell] as usize];
        }
        !used_any & full_mask(self.symbols)
    }

    fn place(&mut self, cell: usize, sym: u32) {
        self.cells[cell] = sym;
        for (ids, masks) in self.layer_of_cell.iter().zip(self.used.iter_mut()) {
            masks[ids[cell] as usize] |= 1u64 << sym;
        }
    }

    fn remove(&mut self, cell: usize, sym: u32) {
        for (ids, masks) in self.layer_of_cell.iter().zip(self.used.iter_mut()) {
            masks[ids[cell] as usize] &= !(1u64 << sym);
        }
    }

    fn walk(&mut self, cell: usize, f: &mut dyn FnMut(&[u16], &[u32]) -> bool) -> Result<bool> {
        if cell == self.cells.len() {
            return Ok(f(self.sides, &self.cells));
        }
        let mut candidates = self.allowed(cell);
        while candidates != 0 {
            let sym = candidates.trailing_zeros();
            candidates &= candidates - 1;
            self.nodes += 1;
            if let Some(limit) = self.max_nodes {
                if self.nodes > limit {
                    return Err(Error::NodeBudget { limit });
                }
            }
            self.place(cell, sym);
            let keep_going = self.walk(cell + 1, f)?;
            self.remove(cell, sym);
            if !keep_going {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn full_mask(n: usize) -> u64 {
    debug_assert!(n <= 64 && n > 0);
    if n == 64 {
        !0
    } else {
        (1u64 << n) - 1
    }
}

/// Visit every Latin hypercube of the given shape in lexicographic cell
/// order. The visitor returns `false` to stop early.
pub fn for_each_cube(
    dim: usize,
    order: u16,
    class: usize,
    limits: &EnumLimits,
    mut f: impl FnMut(&LatinHypercube) -> bool,
) -> Result<EnumStats> {
    // Validate shape/class through the type's own constructor.
    LatinHypercube::new(dim, order, class, vec![0; checked_cell_count(&vec![order; dim])?])?;
    let sides = vec![order; dim];
    let symbols = (order as usize).pow(class as u32);
    let mut dfs = ArrayDfs::build(&sides, class, symbols, limits)?;
    let mut wrapped = |_: &[u16], cells: &[u32]| {
        let cube = LatinHypercube {
            dim,
            order,
            class,
            cells: cells.to_vec(),
        };
        debug_assert!(cube.is_valid());
        f(&cube)
    };
    let finished = dfs.walk(0, &mut wrapped)?;
    Ok(EnumStats {
        nodes: dfs.nodes,
        stopped: !finished,
    })
}

/// Count Latin hypercubes of the given shape.
pub fn count_cubes(dim: usize, order: u16, class: usize, limits: &EnumLimits) -> Result<u64> {
    let mut count = 0u64;
    for_each_cube(dim, order, class, limits, |_| {
        count += 1;
        true
    })?;
    Ok(count)
}

/// Collect Latin hypercubes in lexicographic order, failing once more than
/// `max_results` exist.
pub fn enumerate_cubes(
    dim: usize,
    order: u16,
    class: usize,
    limits: &EnumLimits,
    max_results: usize,
) -> Result<Vec<LatinHypercube>> {
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_cube(dim, order, class, limits, |cube| {
        if out.len() == max_results {
            overflow = true;
            return false;
        }
        out.push(cube.clone());
        true
    })?;
    if overflow {
        return Err(Error::CapExceeded {
            cap: max_results as u64,
        });
    }
    Ok(out)
}

/// Visit every Latin hypercuboid of the given type (sides are normalized to
/// nonincreasing order first).
pub fn for_each_cuboid(
    sides: &[u16],
    class: usize,
    limits: &EnumLimits,
    mut f: impl FnMut(&LatinHypercuboid) -> bool,
) -> Result<EnumStats> {
    let (sides, _) = normalize_type(sides);
    LatinHypercuboid::new(sides.clone(), class, vec![0; checked_cell_count(&sides)?])?;
    let symbols: usize = sides[..class].iter().map(|&s| s as usize).product();
    let mut dfs = ArrayDfs::build(&sides, class, symbols, limits)?;
    let mut wrapped = |sides: &[u16], cells: &[u32]| {
        let cuboid = LatinHypercuboid {
            sides: sides.to_vec(),
            class,
            cells: cells.to_vec(),
        };
        debug_assert!(cuboid.is_valid());
        f(&cuboid)
    };
    let finished = dfs.walk(0, &mut wrapped)?;
    Ok(EnumStats {
        nodes: dfs.nodes,
        stopped: !finished,
    })
}

/// Count Latin hypercuboids of the given type.
pub fn count_cuboids(sides: &[u16], class: usize, limits: &EnumLimits) -> Result<u64> {
    let mut count = 0u64;
    for_each_cuboid(sides, class, limits, |_| {
        count += 1;
        true
    })?;
    Ok(count)
}

/// Collect Latin hypercuboids, failing past `max_results`.
pub fn enumerate_cuboids(
    sides: &[u16],
    class: usize,
    limits: &EnumLimits,
    max_results: usize,
) -> Result<Vec<LatinHypercuboid>> {
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_cuboid(sides, class, limits, |cuboid| {
        if out.len() == max_results {
            overflow = true;
            return false;
        }
        out.push(cuboid.clone());
        true
    })?;
    if overflow {
        return Err(Error::CapExceeded {
            cap: max_results as u64,
        });
    }
    Ok(out)
}

/// Cube counts for `d` from `class` up to `d_max` at fixed order and class:
/// `[(d, count), ...]`. An empty range yields an empty table.
pub fn count_table(
    d_max: usize,
    order: u16,
    class: usize,
    limits: &EnumLimits,
) -> Result<Vec<(usize, u64)>> {
    let mut table = Vec::new();
    for d in class..=d_max {
        table.push((d, count_cubes(d, order, class, limits)?));
    }
    Ok(table)
}
