//! Maximum matchings in general graphs and the deficiency machinery built on
//! them.
//!
//! [`max_matching`] is an array-based blossom search (O(V³)). Everything else
//! reduces to it: factor-criticality tests, the Gallai-Edmonds partition via
//! the avoidable-vertex characterization (`ν(G−v) = ν(G)`), and Berge
//! deficiency witnesses. [`brute_force_nu`] is an independent small-case
//! oracle (subset DP, n ≤ 14) used to cross-check the blossom code.

use crate::bits::Bits;
use crate::graph::{Graph, Matching};
use crate::Error;
use serde_json::json;
use std::collections::VecDeque;

/// Maximum matching, exact on any simple graph.
pub fn max_matching(g: &Graph) -> Matching {
    let n = g.n();
    let mut mate: Vec<Option<usize>> = vec![None; n];
    // Greedy seed; the search below only pays for augmentation phases.
    for u in 0..n {
        if mate[u].is_none() {
            for v in g.neighbors(u) {
                if mate[v].is_none() {
                    mate[u] = Some(v);
                    mate[v] = Some(u);
                    break;
                }
            }
        }
    }
    for root in 0..n {
        if mate[root].is_none() {
            augment_from(g, &mut mate, root);
        }
    }
    let edges = (0..n).filter_map(|v| match mate[v] {
        Some(u) if v < u => Some((v, u)),
        _ => None,
    });
    Matching::new(edges).expect("mate array is an involution")
}

/// ν(G).
pub fn nu(g: &Graph) -> usize {
    max_matching(g).len()
}

const NIL: usize = usize::MAX;

/// One phase of the blossom search: grow an alternating tree from `root`,
/// contracting odd cycles, and flip the augmenting path if one is found.
fn augment_from(g: &Graph, mate: &mut [Option<usize>], root: usize) -> bool {
    let n = g.n();
    let mut parent = vec![NIL; n];
    let mut base: Vec<usize> = (0..n).collect();
    let mut in_tree = vec![false; n];
    let mut queue = VecDeque::new();
    in_tree[root] = true;
    queue.push_back(root);
    let mut finish = NIL;
    'grow: while let Some(v) = queue.pop_front() {
        for to in g.neighbors(v) {
            if base[v] == base[to] || mate[v] == Some(to) {
                continue;
            }
            if to == root || mate[to].is_some_and(|m| parent[m] != NIL) {
                // Even vertex on both sides: the edge closes an odd cycle.
                let cur_base = blossom_base(mate, &parent, &base, v, to);
                let mut in_blossom = vec![false; n];
                mark_path(mate, &mut parent, &base, &mut in_blossom, v, cur_base, to);
                mark_path(mate, &mut parent, &base, &mut in_blossom, to, cur_base, v);
                for i in 0..n {
                    if in_blossom[base[i]] {
                        base[i] = cur_base;
                        if !in_tree[i] {
                            in_tree[i] = true;
                            queue.push_back(i);
                        }
                    }
                }
            } else if parent[to] == NIL {
                parent[to] = v;
                match mate[to] {
                    None => {
                        finish = to;
                        break 'grow;
                    }
                    Some(m) => {
                        if !in_tree[m] {
                            in_tree[m] = true;
                            queue.push_back(m);
                        }
                    }
                }
            }
        }
    }
    if finish == NIL {
        return false;
    }
    let mut v = finish;
    loop {
        let pv = parent[v];
        let prev = mate[pv];
        mate[v] = Some(pv);
        mate[pv] = Some(v);
        match prev {
            Some(next) => v = next,
            None => break,
        }
    }
    true
}

/// Nearest common ancestor of the bases of `a` and `b` in the alternating tree.
fn blossom_base(
    mate: &[Option<usize>],
    parent: &[usize],
    base: &[usize],
    a: usize,
    b: usize,
) -> usize {
    let mut seen = vec![false; base.len()];
    let mut x = base[a];
    loop {
        seen[x] = true;
        match mate[x] {
            None => break,
            Some(m) => x = base[parent[m]],
        }
    }
    let mut y = base[b];
    loop {
        if seen[y] {
            return y;
        }
        y = base[parent[mate[y].expect("tree vertex below root is matched")]];
    }
}

/// Walks from `v` down to the blossom base `b`, recording the cycle vertices
/// and rethreading parent pointers through `child`.
fn mark_path(
    mate: &[Option<usize>],
    parent: &mut [usize],
    base: &[usize],
    in_blossom: &mut [bool],
    mut v: usize,
    b: usize,
    mut child: usize,
) {
    while base[v] != b {
        let m = mate[v].expect("non-base blossom vertex is matched");
        in_blossom[base[v]] = true;
        in_blossom[base[m]] = true;
        parent[v] = child;
        child = m;
        v = parent[m];
    }
}

/// ν by exhaustive subset DP. Independent of the blossom code; `n ≤ 14`.
pub fn brute_force_nu(g: &Graph) -> Result<usize, Error> {
    let n = g.n();
    if n > 14 {
        return Err(Error::TooLarge {
            what: "brute-force matching number",
            limit: 14,
            got: n,
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let adj: Vec<u16> = (0..n)
        .map(|v| g.neighbors(v).fold(0u16, |m, u| m | 1 << u))
        .collect();
    // best[mask] = ν of the subgraph induced on the vertex set `mask`
    let mut best = vec![0u8; 1 << n];
    for mask in 1u32..1 << n {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut b = best[rest as usize];
        let mut cand = adj[v] as u32 & rest;
        while cand != 0 {
            let u = cand.trailing_zeros();
            cand &= cand - 1;
            b = b.max(1 + best[(rest & !(1 << u)) as usize]);
        }
        best[mask as usize] = b;
    }
    Ok(best[(1usize << n) - 1] as usize)
}

/// True iff deleting any one vertex leaves a perfectly matchable graph.
pub fn is_factor_critical(g: &Graph) -> bool {
    let n = g.n();
    if n.is_multiple_of(2) {
        return false;
    }
    if n == 1 {
        return true;
    }
    let all: Vec<usize> = (0..n).collect();
    (0..n).all(|v| {
        let rest: Vec<usize> = all.iter().copied().filter(|&u| u != v).collect();
        let (sub, _) = g.induced(&rest).expect("nonempty subset");
        nu(&sub) == (n - 1) / 2
    })
}

/// The canonical partition of a graph by maximum matchings:
/// `d` is missed by some maximum matching, `a` is the neighborhood of `d`
/// outside it, `c` is the rest.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GEDecomposition {
    pub d: Vec<usize>,
    pub a: Vec<usize>,
    pub c: Vec<usize>,
    /// Connected components of the subgraph induced on `d`, each
    /// factor-critical, ordered by smallest member.
    pub components_of_d: Vec<Vec<usize>>,
    pub nu: usize,
}

/// Computes the decomposition by n+1 matching computations and certifies the
/// structure theorem on the result before returning.
pub fn gallai_edmonds(g: &Graph) -> GEDecomposition {
    let n = g.n();
    let nu_g = nu(g);
    let all: Vec<usize> = (0..n).collect();
    let in_d: Vec<bool> = (0..n)
        .map(|v| {
            let rest: Vec<usize> = all.iter().copied().filter(|&u| u != v).collect();
            let nu_minus = if rest.is_empty() {
                0
            } else {
                let (sub, _) = g.induced(&rest).expect("nonempty subset");
                nu(&sub)
            };
            nu_minus == nu_g
        })
        .collect();
    let d: Vec<usize> = (0..n).filter(|&v| in_d[v]).collect();
    let in_a: Vec<bool> = (0..n)
        .map(|v| !in_d[v] && g.neighbors(v).any(|u| in_d[u]))
        .collect();
    let a: Vec<usize> = (0..n).filter(|&v| in_a[v]).collect();
    let c: Vec<usize> = (0..n).filter(|&v| !in_d[v] && !in_a[v]).collect();
    let components_of_d = if d.is_empty() {
        Vec::new()
    } else {
        let (sub, map) = g.induced(&d).expect("nonempty subset");
        sub.components()
            .into_iter()
            .map(|comp| comp.into_iter().map(|i| map[i]).collect())
            .collect()
    };
    let ge = GEDecomposition {
        d,
        a,
        c,
        components_of_d,
        nu: nu_g,
    };
    certify(g, &ge);
    ge
}

/// Panics unless the decomposition satisfies the structure theorem.
fn certify(g: &Graph, ge: &GEDecomposition) {
    for comp in &ge.components_of_d {
        let (sub, _) = g.induced(comp).expect("nonempty component");
        assert!(
            is_factor_critical(&sub),
            "component {comp:?} of the avoidable set is not factor-critical"
        );
    }
    if !ge.c.is_empty() {
        let (sub, _) = g.induced(&ge.c).expect("nonempty subset");
        assert_eq!(
            nu(&sub) * 2,
            ge.c.len(),
            "the unavoidable remainder is not perfectly matchable"
        );
    }
    let (odd, _) = odd_components_without(g, &ge.a);
    assert_eq!(
        2 * ge.nu,
        g.n() + ge.a.len() - odd,
        "deficiency equality fails for the neighborhood set"
    );
}

/// Deletes `t` and returns (number of odd components, the odd components
/// themselves ordered by size descending, ties by smallest member).
fn odd_components_without(g: &Graph, t: &[usize]) -> (usize, Vec<Vec<usize>>) {
    let mut drop = Bits::new(g.n());
    for &v in t {
        drop.set(v);
    }
    let keep: Vec<usize> = (0..g.n()).filter(|&v| !drop.get(v)).collect();
    if keep.is_empty() {
        return (0, Vec::new());
    }
    let (sub, map) = g.induced(&keep).expect("nonempty subset");
    let mut odd: Vec<Vec<usize>> = sub
        .components()
        .into_iter()
        .filter(|comp| comp.len() % 2 == 1)
        .map(|comp| comp.into_iter().map(|i| map[i]).collect())
        .collect();
    odd.sort_by(|x, y| y.len().cmp(&x.len()).then(x[0].cmp(&y[0])));
    (odd.len(), odd)
}

/// A set `t` attaining the deficiency maximum, with the odd components of
/// `G − t` listed largest first (ties by smallest vertex id). Every listed
/// component is factor-critical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BergeWitness {
    pub t: Vec<usize>,
    pub odd_components: Vec<Vec<usize>>,
    pub nu: usize,
}

impl BergeWitness {
    pub fn q(&self) -> usize {
        self.odd_components.len()
    }

    /// Component sizes `2k_i + 1`, largest first.
    pub fn component_sizes(&self) -> Vec<usize> {
        self.odd_components.iter().map(|c| c.len()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "T": self.t,
            "odd_components": self.odd_components,
            "nu": self.nu,
        })
    }
}

/// Extracts the deficiency witness `T = A` from the Gallai-Edmonds partition
/// and verifies the deficiency equality on it.
pub fn berge_witness(g: &Graph) -> BergeWitness {
    let ge = gallai_edmonds(g);
    let (count, odd_components) = odd_components_without(g, &ge.a);
    assert_eq!(
        2 * ge.nu,
        g.n() + ge.a.len() - count,
        "witness does not attain the deficiency"
    );
    for comp in &odd_components {
        let (sub, _) = g.induced(comp).expect("nonempty component");
        assert!(is_factor_critical(&sub));
    }
    BergeWitness {
        t: ge.a,
        odd_components,
        nu: ge.nu,
    }
}

impl GEDecomposition {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "D": self.d,
            "A": self.a,
            "C": self.c,
            "components_of_D": self.components_of_d,
            "nu": self.nu,
        })
    }
}

/// One-sided bipartite instance: `a` left vertices, `b` right vertices,
/// `adj[i]` the sorted right-neighborhood of left vertex `i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BipartiteInstance {
    a: usize,
    b: usize,
    adj: Vec<Vec<usize>>,
}

/// Outcome of [`BipartiteInstance::hall_matching`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum HallOutcome {
    /// `assign[i]` is the right partner of left vertex `i`.
    Covering(Vec<usize>),
    /// A left set whose neighborhood is strictly smaller than it.
    Violator(Vec<usize>),
}

impl BipartiteInstance {
    pub fn new(a: usize, b: usize, adj: Vec<Vec<usize>>) -> Result<Self, Error> {
        if adj.len() != a {
            return Err(crate::invalid(format!(
                "adjacency has {} rows for {a} left vertices",
                adj.len()
            )));
        }
        let mut adj = adj;
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
            if row.last().is_some_and(|&v| v >= b) {
                return Err(crate::invalid(format!(
                    "right vertex {} out of range for b = {b}",
                    row.last().unwrap()
                )));
            }
        }
        Ok(BipartiteInstance { a, b, adj })
    }

    pub fn left_len(&self) -> usize {
        self.a
    }

    pub fn right_len(&self) -> usize {
        self.b
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// True iff left vertex `i` (1-indexed position `i+1`) has degree at least
    /// `i+1` for every `i`; such instances always admit a covering matching.
    pub fn staircase_check(&self) -> bool {
        self.adj.iter().enumerate().all(|(i, row)| row.len() > i)
    }

    /// Left-perfect matching if one exists, otherwise a Hall violator found by
    /// alternating reachability from the smallest uncovered left vertex.
    pub fn hall_matching(&self) -> HallOutcome {
        let mut right_mate = vec![NIL; self.b];
        let mut left_mate = vec![NIL; self.a];
        for i in 0..self.a {
            let mut visited = vec![false; self.b];
            kuhn_augment(&self.adj, i, &mut visited, &mut right_mate, &mut left_mate);
        }
        match (0..self.a).find(|&i| left_mate[i] == NIL) {
            None => HallOutcome::Covering(left_mate),
            Some(start) => {
                // Alternating BFS: free edges left→right, matched edges
                // right→left. Every reached right vertex is matched, so the
                // reached left set exceeds its neighborhood by one.
                let mut left_seen = vec![false; self.a];
                let mut right_seen = vec![false; self.b];
                left_seen[start] = true;
                let mut queue = VecDeque::from([start]);
                while let Some(i) = queue.pop_front() {
                    for &j in &self.adj[i] {
                        if !right_seen[j] {
                            right_seen[j] = true;
                            let m = right_mate[j];
                            assert_ne!(m, NIL, "unmatched right vertex reachable from an uncovered left vertex");
                            if !left_seen[m] {
                                left_seen[m] = true;
                                queue.push_back(m);
                            }
                        }
                    }
                }
                let violator: Vec<usize> = (0..self.a).filter(|&i| left_seen[i]).collect();
                let neighborhood = (0..self.b).filter(|&j| right_seen[j]).count();
                assert!(neighborhood < violator.len());
                HallOutcome::Violator(violator)
            }
        }
    }
}

fn kuhn_augment(
    adj: &[Vec<usize>],
    i: usize,
    visited: &mut [bool],
    right_mate: &mut [usize],
    left_mate: &mut [usize],
) -> bool {
    for &j in &adj[i] {
        if !visited[j] {
            visited[j] = true;
            if right_mate[j] == NIL
                || kuhn_augment(adj, right_mate[j], visited, right_mate, left_mate)
            {
                right_mate[j] = i;
                left_mate[i] = j;
                return true;
            }
        }
    }
    false
}
