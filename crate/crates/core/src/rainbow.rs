//! Exact rainbow matching search in edge-colored complete graphs.
//!
//! A rainbow matching is a set of pairwise-disjoint edges with pairwise
//! distinct colors. The solver is a depth-first branch and bound over color
//! classes in ascending size order (singletons first): at each node the next
//! class with a usable edge is either skipped outright or contributes exactly
//! one of its usable edges. Pruning uses the remaining-class count, the free
//! vertex count, and a family of partition bounds: for each small `t`, a
//! rainbow matching takes at most one edge from each of the `t` largest
//! remaining classes, and the rest of it is an ordinary matching inside the
//! union of the other classes, so `t` plus that matching number is an upper
//! bound (computed exactly by the blossom engine).
//!
//! The `t = 1` instance is what closes near-extremal instances at the root: a
//! coloring made of many tiny classes plus one large one cannot beat
//! `1 + nu(union of the tiny classes)` no matter how large the graph is.
//!
//! Budgets are expressed in search nodes (deterministic) with an optional
//! wall-clock cap; exceeding either yields an explicit inconclusive outcome,
//! never a wrong answer.

use crate::bits::Bits;
use crate::graph::{ColoredGraph, Graph, Matching};
use crate::matching;
use crate::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

/// A verified rainbow matching: disjoint edges, distinct colors, colors taken
/// from the host coloring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RainbowCertificate {
    edges: Vec<(usize, usize)>,
    colors: Vec<u64>,
}

impl RainbowCertificate {
    /// Validates `edges` against `h` and records their colors.
    pub fn new(h: &ColoredGraph, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, Error> {
        let m = Matching::new(edges)?;
        let edges: Vec<(usize, usize)> = m.edges().to_vec();
        let colors: Vec<u64> = edges.iter().map(|&(u, v)| h.color(u, v)).collect();
        let mut sorted = colors.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(crate::invalid("matching repeats a color"));
        }
        Ok(RainbowCertificate { edges, colors })
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by `(u, v)`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Colors aligned with [`Self::edges`].
    pub fn colors(&self) -> &[u64] {
        &self.colors
    }

    /// Keeps the first `k` edges; any subset of a rainbow matching is rainbow.
    pub fn truncated(mut self, k: usize) -> Self {
        self.edges.truncate(k);
        self.colors.truncate(k);
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "size": self.size(),
            "edges": self.edges.iter().map(|&(u, v)| vec![u, v]).collect::<Vec<_>>(),
            "colors": self.colors,
        })
    }
}

/// How [`representative_subgraph`] picks one edge per color class.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RepresentativePolicy {
    /// Smallest `(u, v)` in each class.
    Lexicographic,
    /// Uniform pick per class from a seeded generator; the substream for a
    /// class is derived from its color value, so choices are reproducible and
    /// independent of enumeration order.
    Seeded(u64),
}

/// One edge chosen from every color class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RepresentativeSubgraph {
    pub graph: Graph,
    pub chosen: BTreeMap<u64, (usize, usize)>,
}

/// Any matching in the representative subgraph is rainbow, which makes it a
/// cheap lower-bound generator for the solver.
pub fn representative_subgraph(h: &ColoredGraph, policy: RepresentativePolicy) -> RepresentativeSubgraph {
    let mut chosen = BTreeMap::new();
    for (color, edges) in h.classes() {
        let pick = match policy {
            RepresentativePolicy::Lexicographic => edges[0],
            RepresentativePolicy::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(color);
                edges[rng.gen_range(0..edges.len())]
            }
        };
        chosen.insert(color, pick);
    }
    let graph = Graph::from_edges(h.n(), chosen.values().copied());
    RepresentativeSubgraph { graph, chosen }
}

/// Search budget. Node budgets are deterministic; the wall-clock cap is a
/// safety net for interactive use.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_millis: Option<u64>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget {
        max_nodes: None,
        max_millis: None,
    };

    pub fn nodes(max_nodes: u64) -> Budget {
        Budget {
            max_nodes: Some(max_nodes),
            ..Budget::default()
        }
    }

    pub fn millis(max_millis: u64) -> Budget {
        Budget {
            max_millis: Some(max_millis),
            ..Budget::default()
        }
    }
}

/// Result of a maximum search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MaxOutcome {
    /// The certificate attains the true maximum.
    Exact(RainbowCertificate),
    /// Budget ran out; the certificate is the best found and is only a lower
    /// bound.
    Inconclusive(RainbowCertificate),
}

impl MaxOutcome {
    pub fn certificate(&self) -> &RainbowCertificate {
        match self {
            MaxOutcome::Exact(c) | MaxOutcome::Inconclusive(c) => c,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, MaxOutcome::Exact(_))
    }
}

/// Result of a size-`k` decision query.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Decision {
    Found(RainbowCertificate),
    Absent,
    Inconclusive,
}

impl Decision {
    pub fn found(&self) -> Option<&RainbowCertificate> {
        match self {
            Decision::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// Exact maximum rainbow matching, with certificate.
pub fn max_rainbow_matching(h: &ColoredGraph, budget: &Budget) -> MaxOutcome {
    let mut s = Solver::new(h, None, budget);
    s.run();
    let cert = s.best_certificate(h);
    if s.out_of_budget {
        MaxOutcome::Inconclusive(cert)
    } else {
        MaxOutcome::Exact(cert)
    }
}

/// Does a rainbow matching of size `k` exist? Shares the solver with the
/// maximum search; the target only adds an early cutoff.
pub fn has_rainbow_matching(h: &ColoredGraph, k: usize, budget: &Budget) -> Decision {
    if k == 0 {
        return Decision::Found(RainbowCertificate::new(h, []).expect("empty certificate"));
    }
    if k > h.n() / 2 || k > h.distinct_colors() {
        return Decision::Absent;
    }
    let mut s = Solver::new(h, Some(k), budget);
    s.run();
    if s.best.len() >= k {
        return Decision::Found(s.best_certificate(h).truncated(k));
    }
    if s.out_of_budget {
        Decision::Inconclusive
    } else {
        Decision::Absent
    }
}

struct Class {
    color: u64,
    edges: Vec<(usize, usize)>,
}

struct Solver {
    n: usize,
    classes: Vec<Class>,
    target: Option<usize>,
    best: Vec<(usize, usize, u64)>,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    out_of_budget: bool,
    done: bool,
}

impl Solver {
    fn new(h: &ColoredGraph, target: Option<usize>, budget: &Budget) -> Self {
        let mut classes: Vec<Class> = h
            .classes()
            .into_iter()
            .map(|(color, edges)| Class { color, edges })
            .collect();
        // Ascending class size, singletons first; ties by color for determinism.
        classes.sort_by_key(|c| (c.edges.len(), c.color));
        // Warm start: a maximum matching of one representative per class is
        // rainbow by construction.
        let rep = representative_subgraph(h, RepresentativePolicy::Lexicographic);
        let warm = matching::max_matching(&rep.graph);
        let best = warm
            .edges()
            .iter()
            .map(|&(u, v)| (u, v, h.color(u, v)))
            .collect();
        Solver {
            n: h.n(),
            classes,
            target,
            best,
            nodes: 0,
            max_nodes: budget.max_nodes.unwrap_or(u64::MAX),
            deadline: budget.max_millis.map(|ms| Instant::now() + Duration::from_millis(ms)),
            out_of_budget: false,
            done: false,
        }
    }

    fn run(&mut self) {
        if self.target.is_some_and(|t| self.best.len() >= t) {
            self.done = true;
            return;
        }
        let mut used = Bits::new(self.n);
        let mut cur = Vec::new();
        self.dfs(0, &mut used, &mut cur);
    }

    fn best_certificate(&self, h: &ColoredGraph) -> RainbowCertificate {
        RainbowCertificate::new(h, self.best.iter().map(|&(u, v, _)| (u, v)))
            .expect("search invariant: best is a rainbow matching")
    }

    fn dfs(&mut self, idx: usize, used: &mut Bits, cur: &mut Vec<(usize, usize, u64)>) {
        if self.done || self.out_of_budget {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.out_of_budget = true;
            return;
        }
        if let Some(deadline) = self.deadline {
            if self.nodes.is_multiple_of(1024) && Instant::now() >= deadline {
                self.out_of_budget = true;
                return;
            }
        }
        if cur.len() > self.best.len() {
            self.best = cur.clone();
        }
        if let Some(t) = self.target {
            if self.best.len() >= t {
                self.done = true;
                return;
            }
        }
        if idx >= self.classes.len() {
            return;
        }
        // How many more edges this subtree must contribute to matter.
        let need = match self.target {
            Some(t) => t - cur.len(),
            None => self.best.len() + 1 - cur.len(),
        };
        let free = self.n - 2 * cur.len();
        if self.classes.len() - idx < need || free / 2 < need {
            return;
        }

        // Usable edges of the remaining classes.
        let mut first_usable: Option<(usize, Vec<(usize, usize)>)> = None;
        let mut usable: Vec<Vec<(usize, usize)>> = Vec::new();
        for (ci, class) in self.classes.iter().enumerate().skip(idx) {
            let mut edges: Vec<(usize, usize)> = Vec::new();
            for &(u, v) in &class.edges {
                if !used.get(u) && !used.get(v) {
                    edges.push((u, v));
                }
            }
            if edges.is_empty() {
                continue;
            }
            if first_usable.is_none() {
                first_usable = Some((ci, edges.clone()));
            }
            usable.push(edges);
        }
        let Some((branch_idx, branch_edges)) = first_usable else {
            return;
        };
        if usable.len() < need {
            return;
        }
        // Partition bounds: for any t, a rainbow matching takes at most one
        // edge from each of the t largest classes and the rest of it is a
        // plain matching inside the union of the remaining classes, so
        // t + nu(union of all but the t largest) is an upper bound. t = 0 is
        // the plain matching bound; small positive t is what collapses
        // near-extremal colorings (one huge class plus many tiny ones) at the
        // root.
        usable.sort_by_key(|edges| std::cmp::Reverse(edges.len()));
        let cap = usable.len().min(6);
        let mut suffix: Vec<(usize, usize)> = usable
            .iter()
            .skip(cap)
            .flat_map(|edges| edges.iter().copied())
            .collect();
        let mut t = cap;
        loop {
            if t < need {
                let held = matching::nu(&Graph::from_edges(self.n, suffix.iter().copied()));
                if t + held < need {
                    return;
                }
            }
            if t == 0 {
                break;
            }
            t -= 1;
            suffix.extend_from_slice(&usable[t]);
        }

        let color = self.classes[branch_idx].color;
        for (u, v) in branch_edges {
            used.set(u);
            used.set(v);
            cur.push((u, v, color));
            self.dfs(branch_idx + 1, used, cur);
            cur.pop();
            used.clear(u);
            used.clear(v);
            if self.done || self.out_of_budget {
                return;
            }
        }
        self.dfs(branch_idx + 1, used, cur);
    }
}
