//! Exact k-coloring of the extended graph, enumerated as partitions into
//! independent color classes (colorings up to relabeling).
//!
//! Search order: a seed k-clique is colored first, one class per member,
//! which fixes the color symmetry. Remaining vertices are picked by
//! saturation degree (DSATUR order). A vertex either joins an existing
//! class or opens the next one, so every partition is produced exactly once.

use std::collections::{BTreeSet, HashSet};
use std::ops::ControlFlow;

use serde::Serialize;

use crate::nngraph::ExtendedGraph;

pub const DEFAULT_COLORING_LIMIT: usize = 10_000;

/// Partition of the node set into color classes. Classes are sorted
/// internally and ordered by their smallest member; class `θ` is the
/// abstract color with index `θ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Coloring {
    classes: Vec<Vec<usize>>,
}

impl Coloring {
    /// Canonicalizes the given classes. Empty classes are kept at the end.
    pub fn from_classes(mut classes: Vec<Vec<usize>>) -> Self {
        for c in classes.iter_mut() {
            c.sort_unstable();
        }
        classes.sort_by_key(|c| c.first().copied().unwrap_or(usize::MAX));
        Coloring { classes }
    }

    /// Builds the partition induced by a color-per-node vector.
    pub fn from_colors(colors: &[usize], k: usize) -> Self {
        let mut classes = vec![Vec::new(); k];
        for (v, &c) in colors.iter().enumerate() {
            classes[c].push(v);
        }
        Self::from_classes(classes)
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn node_count(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    /// `σ(v)`, the class index of each node.
    pub fn color_of(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.node_count()];
        for (c, class) in self.classes.iter().enumerate() {
            for &v in class {
                out[v] = c;
            }
        }
        out
    }

    /// Canonical key: sorted classes of sorted node indices.
    pub fn key(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Checks that classes cover `0..n` exactly once, are independent in
    /// `h`, and that there are exactly `k` non-empty classes.
    pub fn verify(&self, h: &ExtendedGraph, k: usize) -> bool {
        let n = h.node_count();
        let mut seen = vec![false; n];
        for class in &self.classes {
            for &v in class {
                if v >= n || seen[v] {
                    return false;
                }
                seen[v] = true;
            }
            if !h.is_independent(class) {
                return false;
            }
        }
        seen.iter().all(|&s| s) && self.classes.iter().filter(|c| !c.is_empty()).count() == k
    }
}

impl ExtendedGraph {
    /// True iff no two of `nodes` are adjacent.
    pub fn is_independent(&self, nodes: &[usize]) -> bool {
        nodes
            .iter()
            .enumerate()
            .all(|(i, &a)| nodes[i + 1..].iter().all(|&b| !self.has_edge(a, b)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Infeasibility {
    /// A clique with more than `k` vertices.
    Clique { nodes: Vec<usize> },
    /// The exhaustive search found no coloring.
    Exhausted,
}

#[derive(Debug, Clone)]
pub struct ColoringEnumeration {
    pub colorings: Vec<Coloring>,
    pub truncated: bool,
}

struct Search<'a> {
    h: &'a ExtendedGraph,
    k: usize,
    color: Vec<Option<usize>>,
    /// `neighbor_colors[v][c]` counts colored neighbors of `v` with color `c`.
    neighbor_colors: Vec<Vec<u32>>,
    opened: usize,
    uncolored: usize,
}

impl<'a> Search<'a> {
    fn new(h: &'a ExtendedGraph, k: usize) -> Self {
        let n = h.node_count();
        Search {
            h,
            k,
            color: vec![None; n],
            neighbor_colors: vec![vec![0; k]; n],
            opened: 0,
            uncolored: n,
        }
    }

    fn can_take(&self, v: usize, c: usize) -> bool {
        self.neighbor_colors[v][c] == 0
    }

    fn saturation(&self, v: usize) -> usize {
        self.neighbor_colors[v][..self.opened]
            .iter()
            .filter(|&&x| x > 0)
            .count()
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = Some(c);
        self.uncolored -= 1;
        for &u in self.h.neighbors(v) {
            self.neighbor_colors[u][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.color[v] = None;
        self.uncolored += 1;
        for &u in self.h.neighbors(v) {
            self.neighbor_colors[u][c] -= 1;
        }
    }

    /// Next vertex: highest saturation, then highest degree, then lowest index.
    fn pick(&self) -> Option<usize> {
        (0..self.h.node_count())
            .filter(|&v| self.color[v].is_none())
            .max_by(|&a, &b| {
                self.saturation(a)
                    .cmp(&self.saturation(b))
                    .then(self.h.degree(a).cmp(&self.h.degree(b)))
                    .then(b.cmp(&a))
            })
    }

    fn dead_end(&self) -> bool {
        if self.uncolored < self.k - self.opened {
            return true;
        }
        // forward check: an uncolored vertex that sees all k colors
        (0..self.h.node_count())
            .any(|v| self.color[v].is_none() && self.neighbor_colors[v].iter().all(|&x| x > 0))
    }

    fn snapshot(&self) -> Coloring {
        let colors: Vec<usize> = self.color.iter().map(|c| c.expect("complete")).collect();
        Coloring::from_colors(&colors, self.k)
    }

    fn run<F>(&mut self, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(Coloring) -> ControlFlow<()>,
    {
        if self.dead_end() {
            return ControlFlow::Continue(());
        }
        let Some(v) = self.pick() else {
            return if self.opened == self.k {
                visit(self.snapshot())
            } else {
                ControlFlow::Continue(())
            };
        };
        for c in 0..self.opened {
            if self.can_take(v, c) {
                self.assign(v, c);
                let flow = self.run(visit);
                self.unassign(v, c);
                flow?;
            }
        }
        if self.opened < self.k {
            let c = self.opened;
            self.opened += 1;
            self.assign(v, c);
            let flow = self.run(visit);
            self.unassign(v, c);
            self.opened -= 1;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// A clique to color first: a known `Γ⁻(v)` clique of size `k` if the graph
/// carries one, otherwise a greedy clique grown from high-degree vertices.
fn seed_clique(h: &ExtendedGraph, k: usize) -> Vec<usize> {
    if let Some(c) = h.cliques().iter().find(|c| c.len() == k && h.is_clique(c)) {
        return c.clone();
    }
    let mut order: Vec<usize> = (0..h.node_count()).collect();
    order.sort_by(|&a, &b| h.degree(b).cmp(&h.degree(a)).then(a.cmp(&b)));
    let mut best: Vec<usize> = Vec::new();
    for &start in &order {
        let mut clique = vec![start];
        for &u in &order {
            if u != start && clique.iter().all(|&w| h.has_edge(u, w)) {
                clique.push(u);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.truncate(k);
    best
}

/// Visits every partition of `h` into exactly `k` independent classes, in a
/// deterministic order, until `visit` breaks.
pub fn for_each_coloring<F>(h: &ExtendedGraph, k: usize, mut visit: F)
where
    F: FnMut(Coloring) -> ControlFlow<()>,
{
    let n = h.node_count();
    if k == 0 || n < k {
        return;
    }
    let seed = seed_clique(h, k);
    let mut search = Search::new(h, k);
    for (c, &v) in seed.iter().enumerate() {
        search.assign(v, c);
    }
    search.opened = seed.len();
    let _ = search.run(&mut visit);
}

/// All partitions into `k` independent classes, sorted by canonical key,
/// at most `limit` of them.
pub fn enumerate_colorings(h: &ExtendedGraph, k: usize, limit: usize) -> ColoringEnumeration {
    let mut colorings = Vec::new();
    let mut seen = HashSet::new();
    let mut truncated = false;
    for_each_coloring(h, k, |c| {
        if !seen.insert(c.clone()) {
            return ControlFlow::Continue(());
        }
        if colorings.len() == limit {
            truncated = true;
            return ControlFlow::Break(());
        }
        colorings.push(c);
        ControlFlow::Continue(())
    });
    colorings.sort();
    ColoringEnumeration {
        colorings,
        truncated,
    }
}

/// A proper coloring with exactly `k` classes, or a certificate that none exists.
pub fn find_coloring(h: &ExtendedGraph, k: usize) -> Result<Coloring, Infeasibility> {
    let mut found = None;
    for_each_coloring(h, k, |c| {
        found = Some(c);
        ControlFlow::Break(())
    });
    match found {
        Some(c) => Ok(c),
        None => Err(match find_clique(h, k + 1) {
            Some(nodes) => Infeasibility::Clique { nodes },
            None => Infeasibility::Exhausted,
        }),
    }
}

/// Some clique of exactly `size` vertices, if one exists.
pub fn find_clique(h: &ExtendedGraph, size: usize) -> Option<Vec<usize>> {
    fn extend(
        h: &ExtendedGraph,
        size: usize,
        current: &mut Vec<usize>,
        candidates: &BTreeSet<usize>,
    ) -> bool {
        if current.len() == size {
            return true;
        }
        if current.len() + candidates.len() < size {
            return false;
        }
        for &v in candidates {
            let next: BTreeSet<usize> = candidates
                .iter()
                .copied()
                .filter(|&u| u > v && h.has_edge(u, v))
                .collect();
            current.push(v);
            if extend(h, size, current, &next) {
                return true;
            }
            current.pop();
        }
        false
    }
    if size == 0 {
        return Some(Vec::new());
    }
    let all: BTreeSet<usize> = (0..h.node_count()).collect();
    let mut current = Vec::new();
    extend(h, size, &mut current, &all).then_some(current)
}
