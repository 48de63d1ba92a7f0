//! Detectors for the monochromatic structures that near-extremal colorings
//! must contain, plus the combined stability verdict.
//!
//! Two structures are searched for, always in ascending color order so the
//! result is deterministic:
//!
//! * a clique on `q` vertices whose edges all carry one color, and
//! * a "join" witness: a core of `n - 2s - 1` vertices whose every incident
//!   edge (to anywhere in the graph) carries one color. The core together
//!   with the remaining `2s + 1` vertices forms a monochromatic complete
//!   split graph.
//!
//! The clique search peels the color class to its `(q-1)`-core first. Inside
//! the core every vertex misses at most `core_size - q` neighbors, so finding
//! a `q`-clique is a bounded vertex cover problem on the complement with
//! budget `core_size - q`; a two-way branch (cover the max-degree vertex, or
//! cover its whole neighborhood) settles it quickly.

use crate::bits::Bits;
use crate::extremal;
use crate::graph::{ColoredGraph, Graph};
use crate::invalid;
use crate::rainbow::{self, Budget, Decision};
use crate::Error;
use serde_json::json;
use std::collections::BTreeMap;

/// A monochromatic complete subgraph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonoClique {
    pub color: u64,
    /// Sorted ascending; all pairs carry `color`.
    pub vertices: Vec<usize>,
}

impl MonoClique {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "found": true,
            "kind": "clique",
            "color": self.color,
            "vertices": self.vertices,
        })
    }
}

/// A monochromatic complete split graph: every edge meeting `core` has the
/// one color; `independent` is the complementary vertex set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonoJoin {
    pub color: u64,
    pub core: Vec<usize>,
    pub independent: Vec<usize>,
}

impl MonoJoin {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "found": true,
            "kind": "join",
            "color": self.color,
            "core": self.core,
            "independent": self.independent,
        })
    }
}

/// JSON for a detector that found nothing.
pub fn none_json() -> serde_json::Value {
    json!({ "found": false })
}

/// Finds a monochromatic clique on `q` vertices, scanning colors in
/// ascending order. Within the winning color the returned vertices are the
/// `q` smallest members of the clique located by the search.
pub fn find_mono_clique(h: &ColoredGraph, q: usize) -> Option<MonoClique> {
    assert!(q >= 2, "clique size below 2 carries no color information");
    let need_edges = q * (q - 1) / 2;
    for (color, count) in h.census().iter() {
        if count < need_edges {
            continue;
        }
        let class = h.class_graph(color);
        if let Some(vertices) = clique_of_size(&class, q) {
            return Some(MonoClique { color, vertices });
        }
    }
    None
}

fn clique_of_size(g: &Graph, q: usize) -> Option<Vec<usize>> {
    let n = g.n();
    // Peel to the (q-1)-core; a q-clique survives peeling intact.
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut stack: Vec<usize> = Vec::new();
    for v in 0..n {
        if deg[v] + 1 < q {
            alive[v] = false;
            stack.push(v);
        }
    }
    while let Some(v) = stack.pop() {
        for u in g.neighbors(v) {
            if alive[u] {
                deg[u] -= 1;
                if deg[u] + 1 < q {
                    alive[u] = false;
                    stack.push(u);
                }
            }
        }
    }
    let core: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let m = core.len();
    if m < q {
        return None;
    }
    if m == q {
        // Everyone kept degree >= q-1 among q vertices: already complete.
        return Some(core);
    }
    // Complement graph on the core, indices 0..m.
    let mut comp: Vec<Bits> = (0..m).map(|_| Bits::new(m)).collect();
    for i in 0..m {
        for j in i + 1..m {
            if !g.has_edge(core[i], core[j]) {
                comp[i].set(j);
                comp[j].set(i);
            }
        }
    }
    let mut removed = Bits::new(m);
    let mut cover: Vec<usize> = Vec::new();
    if !cover_within(&comp, &mut removed, m - q, &mut cover) {
        return None;
    }
    cover.sort_unstable();
    let vertices: Vec<usize> = (0..m)
        .filter(|&i| cover.binary_search(&i).is_err())
        .map(|i| core[i])
        .take(q)
        .collect();
    debug_assert_eq!(vertices.len(), q);
    Some(vertices)
}

/// Bounded-budget vertex cover on the complement. Branches on a maximum
/// degree vertex: either it enters the cover, or all of its neighbors do
/// (impossible when its degree exceeds the budget, which forces branch one).
fn cover_within(comp: &[Bits], removed: &mut Bits, k: usize, cover: &mut Vec<usize>) -> bool {
    let mut pick = None;
    let mut pick_deg = 0usize;
    for (v, row) in comp.iter().enumerate() {
        if removed.get(v) {
            continue;
        }
        let d = row.count() - row.intersection_count(removed);
        if d > pick_deg {
            pick_deg = d;
            pick = Some(v);
        }
    }
    let Some(v) = pick else {
        return true; // no complement edges left
    };
    if k == 0 {
        return false;
    }
    removed.set(v);
    cover.push(v);
    if cover_within(comp, removed, k - 1, cover) {
        return true;
    }
    cover.pop();
    removed.clear(v);
    if pick_deg <= k {
        let nbrs: Vec<usize> = comp[v].iter().filter(|&u| !removed.get(u)).collect();
        for &u in &nbrs {
            removed.set(u);
            cover.push(u);
        }
        removed.set(v);
        if cover_within(comp, removed, k - nbrs.len(), cover) {
            return true;
        }
        removed.clear(v);
        for &u in &nbrs {
            removed.clear(u);
            cover.pop();
        }
    }
    false
}

/// Finds a monochromatic complete split graph with core size `n - 2s - 1`.
///
/// A vertex can sit in the core only if every one of its `n - 1` incident
/// edges carries the same color; collecting those uniform vertices per color
/// and checking the size bound is a complete test. The core returned is the
/// set of smallest qualifying ids.
pub fn find_mono_join(h: &ColoredGraph, s: usize) -> Result<Option<MonoJoin>, Error> {
    let n = h.n();
    if s == 0 {
        return Err(invalid("join detector needs s >= 1"));
    }
    if n < 2 * s + 2 {
        return Err(invalid(format!(
            "join detector needs n >= 2s + 2 = {}, got n = {n}",
            2 * s + 2
        )));
    }
    let core_size = n - 2 * s - 1;
    let mut uniform: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    'vertices: for v in 0..n {
        let mut seen: Option<u64> = None;
        for u in 0..n {
            if u == v {
                continue;
            }
            let c = h.color(u, v);
            match seen {
                None => seen = Some(c),
                Some(c0) if c0 != c => continue 'vertices,
                _ => {}
            }
        }
        if let Some(c) = seen {
            uniform.entry(c).or_default().push(v);
        }
    }
    for (color, vertices) in uniform {
        if vertices.len() >= core_size {
            let core: Vec<usize> = vertices[..core_size].to_vec();
            let independent: Vec<usize> = (0..n)
                .filter(|&v| core.binary_search(&v).is_err())
                .collect();
            return Ok(Some(MonoJoin {
                color,
                core,
                independent,
            }));
        }
    }
    Ok(None)
}

/// Parameter regime for [`theorem_verdict`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VerdictMode {
    /// `s >= 2` and `n >= max(2s + 5, 40)`: the range where the stability
    /// statement is asserted.
    Strict,
    /// `s >= 1` and `n >= 2s + 2`: runs the same machinery outside the
    /// guaranteed range, for exploration. Mechanical "counterexamples" here
    /// are unsurprising; with `n < 2s + 4` the no-rainbow hypothesis is even
    /// vacuous.
    Permissive,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    /// Fewer colors than the threshold, or a rainbow matching of size `s + 2`
    /// exists: nothing is asserted.
    HypothesisFails,
    /// Hypothesis confirmed and one of the two structures was found.
    ConclusionHolds,
    /// Hypothesis confirmed, both detectors came up empty.
    Counterexample,
    /// The rainbow search ran out of budget; no claim either way.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::HypothesisFails => "hypothesis-fails",
            Verdict::ConclusionHolds => "conclusion-holds",
            Verdict::Counterexample => "counterexample",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerdictReport {
    pub n: usize,
    pub s: usize,
    pub color_count: usize,
    pub required_colors: i128,
    /// Size of the rainbow matching the hypothesis forbids: `s + 2`.
    pub rainbow_target: usize,
    /// `None` when the color count already fails the threshold.
    pub rainbow: Option<Decision>,
    pub clique: Option<MonoClique>,
    pub join: Option<MonoJoin>,
    pub verdict: Verdict,
}

impl VerdictReport {
    pub fn to_json(&self) -> serde_json::Value {
        let rainbow = match &self.rainbow {
            None => json!(null),
            Some(Decision::Found(cert)) => json!({"status": "found", "witness": cert.to_json()}),
            Some(Decision::Absent) => json!({"status": "absent"}),
            Some(Decision::Inconclusive) => json!({"status": "inconclusive"}),
        };
        json!({
            "n": self.n,
            "s": self.s,
            "colors": self.color_count,
            "required_colors": self.required_colors,
            "rainbow_target": self.rainbow_target,
            "rainbow": rainbow,
            "clique": self.clique.as_ref().map(|c| c.to_json()).unwrap_or(json!(null)),
            "join": self.join.as_ref().map(|j| j.to_json()).unwrap_or(json!(null)),
            "verdict": self.verdict.as_str(),
        })
    }
}

/// Checks one coloring against the stability statement: with at least
/// `g(n, s)` colors and no rainbow matching of size `s + 2`, the coloring
/// must contain a monochromatic clique on `n - s` vertices or a
/// monochromatic complete split graph with core `n - 2s - 1`.
pub fn theorem_verdict(
    h: &ColoredGraph,
    s: usize,
    mode: VerdictMode,
    budget: &Budget,
) -> Result<VerdictReport, Error> {
    let n = h.n();
    let (min_s, min_n) = match mode {
        VerdictMode::Strict => (2, (2 * s + 5).max(40)),
        VerdictMode::Permissive => (1, 2 * s + 2),
    };
    if s < min_s {
        return Err(invalid(format!("this mode needs s >= {min_s}, got {s}")));
    }
    if n < min_n {
        return Err(invalid(format!("this mode needs n >= {min_n}, got {n}")));
    }
    let required = extremal::threshold_g(n, s).g;
    let color_count = h.distinct_colors();
    let mut report = VerdictReport {
        n,
        s,
        color_count,
        required_colors: required,
        rainbow_target: s + 2,
        rainbow: None,
        clique: None,
        join: None,
        verdict: Verdict::HypothesisFails,
    };
    if (color_count as i128) < required {
        return Ok(report);
    }
    let decision = rainbow::has_rainbow_matching(h, s + 2, budget);
    report.rainbow = Some(decision.clone());
    match decision {
        Decision::Found(_) => {
            report.verdict = Verdict::HypothesisFails;
        }
        Decision::Inconclusive => {
            report.verdict = Verdict::Inconclusive;
        }
        Decision::Absent => {
            report.clique = find_mono_clique(h, n - s);
            report.join = find_mono_join(h, s)?;
            report.verdict = if report.clique.is_some() || report.join.is_some() {
                Verdict::ConclusionHolds
            } else {
                Verdict::Counterexample
            };
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::pair_rank;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn distinct_base(n: usize) -> ColoredGraph {
        // colors 1.. leave 0 free for planting structures
        ColoredGraph::from_fn(n, |u, v| pair_rank(u, v) as u64 + 1)
    }

    fn assert_clique_valid(h: &ColoredGraph, q: usize, found: &MonoClique) {
        assert_eq!(found.vertices.len(), q);
        assert!(found.vertices.windows(2).all(|w| w[0] < w[1]));
        for i in 0..q {
            for j in i + 1..q {
                assert_eq!(h.color(found.vertices[i], found.vertices[j]), found.color);
            }
        }
    }

    /// Reference search: first color (ascending) owning any monochromatic
    /// q-subset. Subset scan over bitmasks, so keep n small.
    fn brute_mono_clique_color(h: &ColoredGraph, q: usize) -> Option<u64> {
        let n = h.n();
        assert!(n <= 16);
        let colors: Vec<u64> = h.census().iter().map(|(c, _)| c).collect();
        for &color in &colors {
            for mask in 0u32..1 << n {
                if mask.count_ones() as usize != q {
                    continue;
                }
                let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                let mono = verts
                    .iter()
                    .enumerate()
                    .all(|(i, &u)| verts[i + 1..].iter().all(|&v| h.color(u, v) == color));
                if mono {
                    return Some(color);
                }
            }
        }
        None
    }

    #[test]
    fn clique_whole_graph() {
        let h = ColoredGraph::monochromatic(5, 7);
        let found = find_mono_clique(&h, 5).unwrap();
        assert_eq!(found.color, 7);
        assert_eq!(found.vertices, vec![0, 1, 2, 3, 4]);
        assert!(find_mono_clique(&h, 6).is_none());
    }

    #[test]
    fn planted_clique_is_found() {
        let mut h = distinct_base(8);
        let plant = [1usize, 3, 5, 7];
        for i in 0..4 {
            for j in i + 1..4 {
                h.set_color(plant[i], plant[j], 0);
            }
        }
        let found = find_mono_clique(&h, 4).unwrap();
        assert_eq!(found.color, 0);
        assert_eq!(found.vertices, vec![1, 3, 5, 7]);
        assert_clique_valid(&h, 4, &found);
        assert!(find_mono_clique(&h, 5).is_none());
    }

    #[test]
    fn triangle_free_class_passes_prefilter_but_fails() {
        // Color 0 forms a 6-cycle: six edges (enough for a K_4 by count) but
        // not even a triangle; the only K_3s live in color 1.
        let mut h = distinct_base(9);
        let cycle = [0usize, 1, 2, 3, 4, 5];
        for i in 0..6 {
            h.set_color(cycle[i], cycle[(i + 1) % 6], 0);
        }
        for i in 6..9 {
            for j in i + 1..9 {
                h.set_color(i, j, 1);
            }
        }
        assert!(find_mono_clique(&h, 4).is_none());
        let tri = find_mono_clique(&h, 3).unwrap();
        assert_eq!(tri.color, 1);
        assert_eq!(tri.vertices, vec![6, 7, 8]);
    }

    #[test]
    fn smallest_color_wins() {
        let mut h = distinct_base(9);
        for &(a, b, c, col) in &[(0usize, 1usize, 2usize, 9u64), (3, 4, 5, 2)] {
            h.set_color(a, b, col);
            h.set_color(a, c, col);
            h.set_color(b, c, col);
        }
        let found = find_mono_clique(&h, 3).unwrap();
        assert_eq!(found.color, 2);
        assert_eq!(found.vertices, vec![3, 4, 5]);
    }

    #[test]
    fn random_cliques_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..60 {
            let n = 6 + (trial % 4);
            let palette = 2 + trial % 3;
            let mut h = ColoredGraph::monochromatic(n, 0);
            for v in 1..n {
                for u in 0..v {
                    h.set_color(u, v, rng.gen_range(0..palette) as u64);
                }
            }
            for q in 3..=5 {
                let mine = find_mono_clique(&h, q);
                let brute = brute_mono_clique_color(&h, q);
                match (&mine, brute) {
                    (Some(found), Some(color)) => {
                        assert_eq!(found.color, color, "n={n} q={q} trial={trial}");
                        assert_clique_valid(&h, q, found);
                    }
                    (None, None) => {}
                    other => panic!("disagreement at n={n} q={q} trial={trial}: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn join_detection() {
        // n = 9, s = 3: core size 2. Vertices 0 and 1 see only color 5.
        let mut h = distinct_base(9);
        for v in 0..2 {
            for u in 0..9 {
                if u != v {
                    h.set_color(u, v, 5);
                }
            }
        }
        let found = find_mono_join(&h, 3).unwrap().unwrap();
        assert_eq!(found.color, 5);
        assert_eq!(found.core, vec![0, 1]);
        assert_eq!(found.independent, vec![2, 3, 4, 5, 6, 7, 8]);

        // Breaking a single incident edge shrinks the uniform set below the bar.
        h.set_color(0, 2, 77);
        assert!(find_mono_join(&h, 3).unwrap().is_none());
    }

    #[test]
    fn join_needs_room() {
        let h = ColoredGraph::monochromatic(6, 0);
        assert!(find_mono_join(&h, 3).is_err());
        // s = 2 fits: core size 1, and every vertex of a monochromatic graph
        // is uniform.
        let found = find_mono_join(&h, 2).unwrap().unwrap();
        assert_eq!(found.core, vec![0]);
    }

    #[test]
    fn verdict_conclusion_holds_on_hub_coloring() {
        // Hub graph K_10 joined to 30 isolated vertices, rainbow colored,
        // all remaining pairs color 0: enough colors, no rainbow matching of
        // size 12, and the color-0 class is a K_30.
        let h = ColoredGraph::from_fn(40, |u, v| {
            if u >= 10 && v >= 10 {
                0
            } else {
                pair_rank(u, v) as u64 + 1
            }
        });
        let report = theorem_verdict(&h, 10, VerdictMode::Strict, &Budget::UNLIMITED).unwrap();
        assert_eq!(report.required_colors, 320);
        assert_eq!(report.color_count, 346);
        assert!(matches!(report.rainbow, Some(Decision::Absent)));
        let clique = report.clique.as_ref().expect("color 0 contains K_30");
        assert_eq!(clique.color, 0);
        assert_eq!(clique.vertices, (10..40).collect::<Vec<_>>());
        assert_eq!(report.verdict, Verdict::ConclusionHolds);
    }

    #[test]
    fn verdict_hypothesis_fails_without_colors() {
        let h = ColoredGraph::from_fn(40, |u, v| ((u + v) % 50) as u64);
        let report = theorem_verdict(&h, 10, VerdictMode::Strict, &Budget::UNLIMITED).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisFails);
        assert!(report.rainbow.is_none(), "search skipped when colors fall short");
    }

    #[test]
    fn verdict_inconclusive_on_empty_budget() {
        let h = ColoredGraph::from_fn(40, |u, v| {
            if u >= 10 && v >= 10 {
                0
            } else {
                pair_rank(u, v) as u64 + 1
            }
        });
        let report = theorem_verdict(&h, 10, VerdictMode::Strict, &Budget::nodes(0)).unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn verdict_mode_bounds() {
        let h = ColoredGraph::monochromatic(12, 0);
        assert!(theorem_verdict(&h, 3, VerdictMode::Strict, &Budget::UNLIMITED).is_err());
        assert!(theorem_verdict(&h, 3, VerdictMode::Permissive, &Budget::UNLIMITED).is_ok());
        assert!(theorem_verdict(&h, 6, VerdictMode::Permissive, &Budget::UNLIMITED).is_err());
    }

    #[test]
    fn permissive_counterexamples_outside_range() {
        // K_5 with all edges distinct, s = 1: ten colors clear the threshold
        // of six, a rainbow matching of size 3 cannot fit in five vertices,
        // and neither structure exists. The mechanical verdict is a
        // counterexample, which is exactly why the full statement carries the
        // n >= max(2s + 5, 40) requirement.
        let h = ColoredGraph::from_fn(5, |u, v| pair_rank(u, v) as u64);
        let report = theorem_verdict(&h, 1, VerdictMode::Permissive, &Budget::UNLIMITED).unwrap();
        assert_eq!(report.required_colors, 6);
        assert!(matches!(report.rainbow, Some(Decision::Absent)));
        assert_eq!(report.verdict, Verdict::Counterexample);
    }

    #[test]
    fn verdict_json_shape() {
        let h = ColoredGraph::from_fn(40, |u, v| ((u + v) % 50) as u64);
        let report = theorem_verdict(&h, 10, VerdictMode::Strict, &Budget::UNLIMITED).unwrap();
        let j = report.to_json();
        assert_eq!(j["verdict"], "hypothesis-fails");
        assert_eq!(j["required_colors"], 320);
        assert!(j["rainbow"].is_null());
        assert_eq!(none_json(), json!({"found": false}));
    }
}
