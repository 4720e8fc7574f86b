//! Exact-cover counting and enumeration via dancing links.
//!
//! An instance consists of `item_count` items `0..item_count` and a list of
//! options, each a set of items. An exact cover is a set of options that
//! together contain every item exactly once. The solver is Knuth's dancing
//! links formulation of Algorithm X: doubly linked sparse matrix, always
//! branching on an item covered by the fewest remaining options.
//!
//! Counts are exact big integers; the partition counters in
//! [`crate::partitions`] sit on top of this module.

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// An exact-cover instance over items `0..item_count`.
#[derive(Clone, Debug)]
pub struct CoverProblem {
    item_count: usize,
    options: Vec<Vec<usize>>,
}

impl CoverProblem {
    /// Build an instance. Options must be nonempty and may not repeat an
    /// item internally; items they mention must be in range.
    pub fn new(item_count: usize, options: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![usize::MAX; item_count];
        for (oi, option) in options.iter().enumerate() {
            if option.is_empty() {
                return Err(Error::BadParameter(format!(
                    "option {oi} is empty; exact covers would be ill-defined"
                )));
            }
            for &item in option {
                if item >= item_count {
                    return Err(Error::BadParameter(format!(
                        "option {oi} mentions item {item}, outside 0..{item_count}"
                    )));
                }
                if std::mem::replace(&mut seen[item], oi) == oi {
                    return Err(Error::BadParameter(format!(
                        "option {oi} repeats item {item}"
                    )));
                }
            }
        }
        Ok(CoverProblem {
            item_count,
            options,
        })
    }

    pub fn item_count(&self) -> usize {
        self.item_count
    }

    pub fn options(&self) -> &[Vec<usize>] {
        &self.options
    }
}

/// Limits for a cover search.
#[derive(Clone, Copy, Debug, Default)]
pub struct CoverLimits {
    /// Abort with [`Error::NodeBudget`] after this many option placements.
    pub max_nodes: Option<u64>,
}

/// Result of a counting run.
#[derive(Clone, Debug)]
pub struct CoverStats {
    pub solutions: BigUint,
    /// Option placements tried.
    pub nodes: u64,
}

/// Node-arena dancing-links matrix. Indices `1..=item_count` are column
/// headers, 0 is the root; body nodes follow.
struct Dlx {
    left: Vec<u32>,
    right: Vec<u32>,
    up: Vec<u32>,
    down: Vec<u32>,
    /// Column header of each body node; unused for headers.
    col: Vec<u32>,
    /// Remaining option count per column (indexed by header).
    size: Vec<u32>,
    /// Option index of each body node; unused for headers.
    option_of: Vec<u32>,
}

impl Dlx {
    fn build(problem: &CoverProblem) -> Self {
        let cols = problem.item_count;
        let body: usize = problem.options.iter().map(|o| o.len()).sum();
        let total = 1 + cols + body;
        let mut dlx = Dlx {
            left: vec![0; total],
            right: vec![0; total],
            up: vec![0; total],
            down: vec![0; total],
            col: vec![0; total],
            size: vec![0; 1 + cols],
            option_of: vec![0; total],
        };
        // Header ring: root <-> 1 <-> 2 <-> ... <-> cols <-> root.
        for h in 0..=cols {
            dlx.left[h] = if h == 0 { cols as u32 } else { (h - 1) as u32 };
            dlx.right[h] = if h == cols { 0 } else { (h + 1) as u32 };
            dlx.up[h] = h as u32;
            dlx.down[h] = h as u32;
        }
        let mut next = 1 + cols;
        for (oi, option) in problem.options.iter().enumerate() {
            let first = next;
            for &item in option {
                let node = next;
                next += 1;
                let header = 1 + item;
                // Insert at the bottom of the column.
                dlx.up[node] = dlx.up[header];
                dlx.down[node] = header as u32;
                dlx.down[dlx.up[header] as usize] = node as u32;
                dlx.up[header] = node as u32;
                dlx.col[node] = header as u32;
                dlx.option_of[node] = oi as u32;
                dlx.size[header] += 1;
                // Row ring.
                if node == first {
                    dlx.left[node] = node as u32;
                    dlx.right[node] = node as u32;
                } else {
                    dlx.left[node] = (node - 1) as u32;
                    dlx.right[node] = first as u32;
                    dlx.right[node - 1] = node as u32;
                    dlx.left[first] = node as u32;
                }
            }
        }
        dlx
    }

    fn cover(&mut self, header: usize) {
        let l = self.left[header] as usize;
        let r = self.right[header] as usize;
        self.right[l] = r as u32;
        self.left[r] = l as u32;
        let mut i = self.down[header] as usize;
        while i != header {
            let mut j = self.right[i] as usize;
            while j != i {
                let u = self.up[j] as usize;
                let d = self.down[j] as usize;
                self.down[u] = d as u32;
                self.up[d] = u as u32;
                self.size[self.col[j] as usize] -= 1;
                j = self.right[j] as usize;
            }
            i = self.down[i] as usize;
        }
    }

    fn uncover(&mut self, header: usize) {
        let mut i = self.up[header] as usize;
        while i != header {
            let mut j = self.left[i] as usize;
            while j != i {
                let u = self.up[j] as usize;
                let d = self.down[j] as usize;
                self.down[u] = j as u32;
                self.up[d] = j as u32;
                self.size[self.col[j] as usize] += 1;
                j = self.left[j] as usize;
            }
            i = self.up[i] as usize;
        }
        let l = self.left[header] as usize;
        let r = self.right[header] as usize;
        self.right[l] = header as u32;
        self.left[r] = header as u32;
    }

    /// Column with the fewest remaining options; ties go to the leftmost.
    fn best_column(&self) -> Option<usize> {
        let mut best = None;
        let mut best_size = u32::MAX;
        let mut h = self.right[0] as usize;
        while h != 0 {
            if self.size[h] < best_size {
                best_size = self.size[h];
                best = Some(h);
            }
            h = self.right[h] as usize;
        }
        best
    }

    fn search(
        &mut self,
        chosen: &mut Vec<u32>,
        nodes: &mut u64,
        limits: &CoverLimits,
        emit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> Result<bool> {
        let Some(header) = self.best_column() else {
            return Ok(emit(chosen));
        };
        if self.size[header] == 0 {
            return Ok(true);
        }
        self.cover(header);
        let mut r = self.down[header] as usize;
        while r != header {
            *nodes += 1;
            if let Some(limit) = limits.max_nodes {
                if *nodes > limit {
                    self.uncover(header);
                    return Err(Error::NodeBudget { limit });
                }
            }
            chosen.push(self.option_of[r]);
            let mut j = self.right[r] as usize;
            while j != r {
                self.cover(self.col[j] as usize);
                j = self.right[j] as usize;
            }
            let keep_going = self.search(chosen, nodes, limits, emit);
            let mut j = self.left[r] as usize;
            while j != r {
                self.uncover(self.col[j] as usize);
                j = self.left[j] as usize;
            }
            chosen.pop();
            match keep_going {
                Ok(true) => {}
                other => {
                    self.uncover(header);
                    return other;
                }
            }
            r = self.down[r] as usize;
        }
        self.uncover(header);
        Ok(true)
    }
}

/// Count the exact covers of `problem`.
pub fn count_exact_covers(problem: &CoverProblem, limits: &CoverLimits) -> Result<CoverStats> {
    let mut solutions = BigUint::ZERO;
    let mut dlx = Dlx::build(problem);
    let mut nodes = 0u64;
    let mut chosen = Vec::new();
    dlx.search(&mut chosen, &mut nodes, limits, &mut |_| {
        solutions += 1u32;
        true
    })?;
    Ok(CoverStats { solutions, nodes })
}

/// Collect every exact cover as a sorted list of option indices, failing
/// once more than `max_solutions` exist. Emission order is the solver's
/// deterministic search order.
pub fn enumerate_exact_covers(
    problem: &CoverProblem,
    limits: &CoverLimits,
    max_solutions: usize,
) -> Result<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut overflow = false;
    let mut dlx = Dlx::build(problem);
    let mut nodes = 0u64;
    let mut chosen = Vec::new();
    dlx.search(&mut chosen, &mut nodes, limits, &mut |options| {
        if out.len() == max_solutions {
            overflow = true;
            return false;
        }
        let mut sorted: Vec<usize> = options.iter().map(|&o| o as usize).collect();
        sorted.sort_unstable();
        out.push(sorted);
        true
    })?;
    if overflow {
        return Err(Error::CapExceeded {
            cap: max_solutions as u64,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(items: usize, options: &[&[usize]]) -> CoverProblem {
        CoverProblem::new(items, options.iter().map(|o| o.to_vec()).collect()).unwrap()
    }

    fn count(problem: &CoverProblem) -> u64 {
        let stats = count_exact_covers(problem, &CoverLimits::default()).unwrap();
        let digits = stats.solutions.to_u64_digits();
        match digits.len() {
            0 => 0,
            1 => digits[0],
            _ => panic!("count too large for the test helper"),
        }
    }

    /// Exponential-time reference: try all subsets of options.
    fn brute_force(problem: &CoverProblem) -> u64 {
        let k = problem.options().len();
        assert!(k <= 20);
        let mut total = 0;
        'subsets: for mask in 0u32..1 << k {
            let mut covered = vec![false; problem.item_count()];
            for (oi, option) in problem.options().iter().enumerate() {
                if mask >> oi & 1 == 0 {
                    continue;
                }
                for &item in option {
                    if std::mem::replace(&mut covered[item], true) {
                        continue 'subsets;
                    }
                }
            }
            if covered.iter().all(|&c| c) {
                total += 1;
            }
        }
        total
    }

    #[test]
    fn knuth_toy_instance() {
        // Knuth's classic 7-item exact-cover instance; one solution.
        let p = problem(
            7,
            &[
                &[2, 4, 5],
                &[0, 3, 6],
                &[1, 2, 5],
                &[0, 3],
                &[1, 6],
                &[3, 4, 6],
            ],
        );
        assert_eq!(count(&p), 1);
        let solutions = enumerate_exact_covers(&p, &CoverLimits::default(), 10).unwrap();
        assert_eq!(solutions, vec![vec![0, 3, 4]]);
    }

    #[test]
    fn multiple_solutions_enumerated_once_each() {
        let p = problem(3, &[&[0, 1], &[2], &[0], &[1], &[1, 2], &[0, 1, 2]]);
        let mut solutions = enumerate_exact_covers(&p, &CoverLimits::default(), 10).unwrap();
        solutions.sort();
        assert_eq!(solutions, vec![vec![0, 1], vec![1, 2, 3], vec![2, 4], vec![5]]);
        assert_eq!(count(&p), 4);
        assert_eq!(brute_force(&p), 4);
    }

    #[test]
    fn uncoverable_item_means_zero() {
        let p = problem(3, &[&[0], &[1]]);
        assert_eq!(count(&p), 0);
        assert_eq!(brute_force(&p), 0);
    }

    #[test]
    fn empty_problem_has_exactly_the_empty_cover() {
        let p = CoverProblem::new(0, vec![]).unwrap();
        assert_eq!(count(&p), 1);
        assert_eq!(
            enumerate_exact_covers(&p, &CoverLimits::default(), 10).unwrap(),
            vec![Vec::<usize>::new()]
        );
    }

    #[test]
    fn construction_rejects_malformed_options() {
        assert!(CoverProblem::new(2, vec![vec![]]).is_err());
        assert!(CoverProblem::new(2, vec![vec![0, 0]]).is_err());
        assert!(CoverProblem::new(2, vec![vec![2]]).is_err());
    }

    #[test]
    fn option_order_does_not_change_the_count() {
        let base: Vec<Vec<usize>> = vec![
            vec![0, 1],
            vec![2, 3],
            vec![0, 2],
            vec![1, 3],
            vec![0, 3],
            vec![1, 2],
            vec![0],
            vec![1],
            vec![2],
            vec![3],
        ];
        let p = CoverProblem::new(4, base.clone()).unwrap();
        let expected = count(&p);
        assert_eq!(expected, brute_force(&p));
        let mut reversed = base;
        reversed.reverse();
        let q = CoverProblem::new(4, reversed).unwrap();
        assert_eq!(count(&q), expected);
    }

    #[test]
    fn random_instances_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let items = rng.gen_range(1..=6);
            let option_count = rng.gen_range(1..=10);
            let mut options = Vec::new();
            for _ in 0..option_count {
                let mut option: Vec<usize> =
                    (0..items).filter(|_| rng.gen_bool(0.4)).collect();
                if option.is_empty() {
                    option.push(rng.gen_range(0..items));
                }
                options.push(option);
            }
            let p = CoverProblem::new(items, options).unwrap();
            assert_eq!(count(&p), brute_force(&p), "instance {p:?}");
        }
    }

    #[test]
    fn node_budget_is_enforced() {
        let p = problem(4, &[&[0], &[1], &[2], &[3], &[0, 1], &[2, 3], &[0, 1, 2, 3]]);
        let limits = CoverLimits { max_nodes: Some(3) };
        assert!(matches!(
            count_exact_covers(&p, &limits),
            Err(Error::NodeBudget { limit: 3 })
        ));
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let p = problem(2, &[&[0], &[1], &[0, 1]]);
        assert!(matches!(
            enumerate_exact_covers(&p, &CoverLimits::default(), 1),
            Err(Error::CapExceeded { cap: 1 })
        ));
    }
}
