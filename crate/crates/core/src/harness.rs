//! Self-checking instruments: brute-force oracles for tiny parameters,
//! boundary recoloring sweeps around the near-extremal colorings, and a
//! seeded random walk through the hypothesis class.
//!
//! Everything here is deterministic. Randomized pieces draw from per-trial
//! ChaCha substreams keyed by `(seed, trial)`, searches run under node
//! budgets, and report structs serialize with fixed field order, so a report
//! digest is reproducible across runs and machines.

use crate::detect::{self, Verdict, VerdictMode};
use crate::extremal::{self, threshold_g};
use crate::graph::{pair_count, pair_unrank, ColoredGraph};
use crate::invalid;
use crate::rainbow::{self, Budget, Decision};
use crate::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Exact maximum edge count with no matching of size `k`, by exhaustive
/// search over subgraphs of the complete graph. Limited to `n <= 7`.
pub fn oracle_turan(n: usize, k: usize) -> Result<i128, Error> {
    if n > 7 {
        return Err(Error::TooLarge {
            what: "edge-subset oracle vertex count",
            limit: 7,
            got: n,
        });
    }
    if k == 0 {
        return Err(invalid("every graph contains the empty matching"));
    }
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    let mut best = 0usize;
    let mut adj = [0u8; 7];
    dfs_turan(&pairs, 0, &mut adj, n, k, 0, &mut best);
    Ok(best as i128)
}

fn dfs_turan(
    pairs: &[(usize, usize)],
    i: usize,
    adj: &mut [u8; 7],
    n: usize,
    k: usize,
    count: usize,
    best: &mut usize,
) {
    if count + (pairs.len() - i) <= *best {
        return;
    }
    if i == pairs.len() {
        *best = count;
        return;
    }
    let (u, v) = pairs[i];
    adj[u] |= 1 << v;
    adj[v] |= 1 << u;
    if nu_small(adj, n, 0) < k {
        dfs_turan(pairs, i + 1, adj, n, k, count + 1, best);
    }
    adj[u] &= !(1 << v);
    adj[v] &= !(1 << u);
    dfs_turan(pairs, i + 1, adj, n, k, count, best);
}

/// Matching number of a graph on at most 7 vertices given as adjacency masks.
fn nu_small(adj: &[u8; 7], n: usize, used: u8) -> usize {
    let pick = (0..n).find(|&v| used & (1 << v) == 0 && adj[v] & !used != 0);
    let Some(v) = pick else { return 0 };
    // v stays unmatched, or takes one of its free neighbors
    let mut result = nu_small(adj, n, used | 1 << v);
    let mut nb = adj[v] & !used;
    while nb != 0 {
        let u = nb.trailing_zeros() as usize;
        nb &= nb - 1;
        result = result.max(1 + nu_small(adj, n, used | 1 << v | 1 << u));
    }
    result
}

/// Exact minimum number of colors that forces a rainbow matching of size `s`,
/// by enumerating every partition of the edge set of the complete graph into
/// exactly `c` color classes. Limited to `n <= 5` (at most 10 edges).
///
/// Merging two classes of a rainbow-free coloring keeps it rainbow-free, so
/// feasible class counts form a prefix and the first infeasible `c` is the
/// answer.
pub fn oracle_anti_ramsey(n: usize, s: usize) -> Result<i128, Error> {
    if n > 5 {
        return Err(Error::TooLarge {
            what: "partition oracle vertex count",
            limit: 5,
            got: n,
        });
    }
    if s == 0 {
        return Err(invalid("the empty matching is rainbow in every coloring"));
    }
    if n < 2 * s {
        return Err(invalid(format!(
            "no matching of size {s} fits in {n} vertices"
        )));
    }
    let m = pair_count(n);
    // matchings of size s as sorted lists of pair ranks, grouped by last rank
    let mut matchings: Vec<Vec<usize>> = Vec::new();
    collect_matchings(n, s, 0, 0, &mut Vec::new(), &mut matchings);
    let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (idx, mat) in matchings.iter().enumerate() {
        by_last[*mat.last().expect("s >= 1")].push(idx);
    }
    for c in 1..=m {
        let mut assign = vec![usize::MAX; m];
        if !norainbow_partition_exists(&matchings, &by_last, &mut assign, 0, 0, c) {
            return Ok(c as i128);
        }
    }
    unreachable!("the all-distinct coloring contains a rainbow matching");
}

fn collect_matchings(
    n: usize,
    s: usize,
    from_rank: usize,
    used: u32,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if cur.len() == s {
        out.push(cur.clone());
        return;
    }
    for rank in from_rank..pair_count(n) {
        let (u, v) = pair_unrank(rank);
        if used & (1 << u) == 0 && used & (1 << v) == 0 {
            cur.push(rank);
            collect_matchings(n, s, rank + 1, used | 1 << u | 1 << v, cur, out);
            cur.pop();
        }
    }
}

/// Does some partition of edges `i..` into blocks (exactly `c` in total,
/// `used` opened so far) extend `assign` to a rainbow-free coloring?
fn norainbow_partition_exists(
    matchings: &[Vec<usize>],
    by_last: &[Vec<usize>],
    assign: &mut [usize],
    i: usize,
    used: usize,
    c: usize,
) -> bool {
    let m = assign.len();
    if used + (m - i) < c {
        return false; // cannot open enough blocks anymore
    }
    if i == m {
        return used == c;
    }
    let top = (used + 1).min(c);
    for b in 0..top {
        assign[i] = b;
        // a matching whose final edge this is must not have become rainbow
        let fresh_rainbow = by_last[i].iter().any(|&idx| {
            let mat = &matchings[idx];
            let mut blocks: Vec<usize> = mat.iter().map(|&r| assign[r]).collect();
            blocks.sort_unstable();
            blocks.windows(2).all(|w| w[0] != w[1])
        });
        if !fresh_rainbow
            && norainbow_partition_exists(
                matchings,
                by_last,
                assign,
                i + 1,
                used.max(b + 1),
                c,
            )
        {
            assign[i] = usize::MAX;
            return true;
        }
    }
    assign[i] = usize::MAX;
    false
}

/// Exact maximum rainbow matching by enumerating all matchings. `n <= 10`.
pub fn oracle_max_rainbow(h: &ColoredGraph) -> Result<usize, Error> {
    let n = h.n();
    if n > 10 {
        return Err(Error::TooLarge {
            what: "matching-enumeration oracle vertex count",
            limit: 10,
            got: n,
        });
    }
    Ok(enumerate_rainbow(h, 0, 0, &mut Vec::new()))
}

fn enumerate_rainbow(h: &ColoredGraph, from: usize, used: u32, colors: &mut Vec<u64>) -> usize {
    let n = h.n();
    let mut v = from;
    while v < n && used & (1 << v) != 0 {
        v += 1;
    }
    if v >= n {
        return 0;
    }
    // leave v uncovered
    let mut best = enumerate_rainbow(h, v + 1, used | 1 << v, colors);
    for u in v + 1..n {
        if used & (1 << u) != 0 {
            continue;
        }
        let c = h.color(v, u);
        if colors.contains(&c) {
            continue;
        }
        colors.push(c);
        best = best.max(1 + enumerate_rainbow(h, v + 1, used | 1 << v | 1 << u, colors));
        colors.pop();
    }
    best
}

/// Which near-extremal coloring a probe starts from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Family {
    H1,
    H2,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::H1 => "h1",
            Family::H2 => "h2",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryProbeReport {
    pub family: &'static str,
    pub n: usize,
    pub s: usize,
    pub threshold: i128,
    pub base_colors: usize,
    pub base_rainbow_absent: bool,
    pub base_detectors_empty: bool,
    pub trials: usize,
    pub rainbow_found: usize,
    pub conclusion_holds: usize,
    pub counterexamples: Vec<(usize, usize)>,
    pub inconclusive: Vec<(usize, usize)>,
}

impl BoundaryProbeReport {
    pub fn clean(&self) -> bool {
        self.base_rainbow_absent
            && self.base_detectors_empty
            && self.counterexamples.is_empty()
            && self.inconclusive.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Walks the boundary of the hypothesis class: starting from a near-extremal
/// coloring one color short of the threshold, gives each color-0 edge in turn
/// a fresh color (reaching exactly the threshold count) and records the
/// verdict at each step.
pub fn recolor_boundary_probe(
    n: usize,
    s: usize,
    family: Family,
    budget: &Budget,
) -> Result<BoundaryProbeReport, Error> {
    let base = match family {
        Family::H1 => extremal::construct_h1(n, s)?,
        Family::H2 => extremal::construct_h2(n, s)?,
    };
    let th = threshold_g(n, s);
    let base_rainbow_absent = matches!(
        rainbow::has_rainbow_matching(&base, s + 2, budget),
        Decision::Absent
    );
    let base_detectors_empty = detect::find_mono_clique(&base, n - s).is_none()
        && detect::find_mono_join(&base, s)?.is_none();
    let mode = if s >= 2 && n >= (2 * s + 5).max(40) {
        VerdictMode::Strict
    } else {
        VerdictMode::Permissive
    };
    let zero_edges: Vec<(usize, usize)> = base.classes().remove(&0).unwrap_or_default();
    let fresh = fresh_color(&base);
    let mut report = BoundaryProbeReport {
        family: family.as_str(),
        n,
        s,
        threshold: th.g,
        base_colors: base.distinct_colors(),
        base_rainbow_absent,
        base_detectors_empty,
        trials: zero_edges.len(),
        rainbow_found: 0,
        conclusion_holds: 0,
        counterexamples: Vec::new(),
        inconclusive: Vec::new(),
    };
    for &(u, v) in &zero_edges {
        let mut h = base.clone();
        h.set_color(u, v, fresh);
        let verdict = detect::theorem_verdict(&h, s, mode, budget)?;
        match verdict.verdict {
            Verdict::HypothesisFails => {
                if matches!(verdict.rainbow, Some(Decision::Found(_))) {
                    report.rainbow_found += 1;
                } else {
                    // color count cannot have dropped; treat defensively
                    report.inconclusive.push((u, v));
                }
            }
            Verdict::ConclusionHolds => report.conclusion_holds += 1,
            Verdict::Counterexample => report.counterexamples.push((u, v)),
            Verdict::Inconclusive => report.inconclusive.push((u, v)),
        }
    }
    Ok(report)
}

fn fresh_color(h: &ColoredGraph) -> u64 {
    h.census().iter().map(|(c, _)| c).max().expect("nonempty") + 1
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub n: usize,
    pub s: usize,
    pub samples: usize,
    pub seed: u64,
    pub budget_nodes: u64,
    pub threshold: i128,
    pub accepted: usize,
    pub rejected_rainbow: usize,
    pub rejected_inconclusive: usize,
    pub noop_mutations: usize,
    pub verdicts_run: usize,
    pub conclusion_holds: usize,
    pub verdict_inconclusive: Vec<usize>,
    pub counterexamples: Vec<usize>,
    pub final_colors: [usize; 2],
}

impl StabilityReport {
    pub fn clean(&self) -> bool {
        self.counterexamples.is_empty() && self.verdict_inconclusive.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// FNV-1a digest of the canonical JSON form; equal digests mean equal
    /// reports.
    pub fn digest(&self) -> String {
        let text = serde_json::to_string(self).expect("report serializes");
        format!("{:016x}", fnv1a64(text.as_bytes()))
    }
}

/// Random walk through rainbow-free colorings. Two persistent walks run side
/// by side, seeded from the two known boundary families: the dominant
/// near-extremal coloring, and the hub graph colored rainbow with one shared
/// leftover color. Odd trials mutate one walk, even trials the other.
///
/// A mutation (merge two classes, split an edge off a class, recolor an edge
/// to an existing color, recolor an edge to a fresh color) is kept only when
/// the mutated coloring provably has no rainbow matching of size `s + 2`
/// within the node budget. Whenever an accepted coloring has at least the
/// threshold count of colors, the full verdict runs; any mechanical
/// counterexample or budget blowout is recorded by trial id, so a nonempty
/// list always reproduces from `(seed, trial)`.
pub fn random_stability_search(
    n: usize,
    s: usize,
    samples: usize,
    seed: u64,
    budget_nodes: u64,
) -> Result<StabilityReport, Error> {
    if s < 2 || n < 2 * s + 5 {
        return Err(invalid("stability search needs s >= 2 and n >= 2s + 5"));
    }
    let budget = Budget::nodes(budget_nodes);
    let th = threshold_g(n, s);
    let near_extremal = if extremal::in_h1_regime(n, s) {
        extremal::construct_h1(n, s)?
    } else {
        extremal::construct_h2(n, s)?
    };
    let hub_plus_one = extremal::rainbow_plus_one(&extremal::construct_turan_graph(n, s)?);
    let mut walks = [near_extremal, hub_plus_one];
    for w in &walks {
        if !matches!(
            rainbow::has_rainbow_matching(w, s + 2, &budget),
            Decision::Absent
        ) {
            return Err(invalid("base walk must be provably rainbow-free"));
        }
    }
    let mode = if n >= (2 * s + 5).max(40) {
        VerdictMode::Strict
    } else {
        VerdictMode::Permissive
    };
    let mut report = StabilityReport {
        n,
        s,
        samples,
        seed,
        budget_nodes,
        threshold: th.g,
        accepted: 0,
        rejected_rainbow: 0,
        rejected_inconclusive: 0,
        noop_mutations: 0,
        verdicts_run: 0,
        conclusion_holds: 0,
        verdict_inconclusive: Vec::new(),
        counterexamples: Vec::new(),
        final_colors: [0, 0],
    };
    for trial in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64 + 1);
        let w = trial % 2;
        let Some(candidate) = propose_mutation(&walks[w], &mut rng) else {
            report.noop_mutations += 1;
            continue;
        };
        match rainbow::has_rainbow_matching(&candidate, s + 2, &budget) {
            Decision::Found(_) => report.rejected_rainbow += 1,
            Decision::Inconclusive => report.rejected_inconclusive += 1,
            Decision::Absent => {
                walks[w] = candidate;
                report.accepted += 1;
                if (walks[w].distinct_colors() as i128) >= th.g {
                    report.verdicts_run += 1;
                    let verdict = detect::theorem_verdict(&walks[w], s, mode, &budget)?;
                    match verdict.verdict {
                        Verdict::ConclusionHolds => report.conclusion_holds += 1,
                        Verdict::Counterexample => report.counterexamples.push(trial),
                        Verdict::Inconclusive => report.verdict_inconclusive.push(trial),
                        Verdict::HypothesisFails => {
                            unreachable!("rainbow freeness was just certified with this budget")
                        }
                    }
                }
            }
        }
    }
    report.final_colors = [walks[0].distinct_colors(), walks[1].distinct_colors()];
    Ok(report)
}

fn propose_mutation(h: &ColoredGraph, rng: &mut ChaCha8Rng) -> Option<ColoredGraph> {
    let census = h.census();
    let colors: Vec<u64> = census.iter().map(|(c, _)| c).collect();
    match rng.gen_range(0..4u32) {
        0 => {
            // merge: move one whole class onto another
            if colors.len() < 2 {
                return None;
            }
            let i = rng.gen_range(0..colors.len());
            let j = pick_other(rng, colors.len(), i);
            let (target, source) = (colors[i], colors[j]);
            let mut out = h.clone();
            for &(u, v) in &h.classes()[&source] {
                out.set_color(u, v, target);
            }
            Some(out)
        }
        1 => {
            // split: one edge of a fat class gets a fresh color
            let fat: Vec<u64> = census
                .iter()
                .filter(|&(_, count)| count >= 2)
                .map(|(c, _)| c)
                .collect();
            if fat.is_empty() {
                return None;
            }
            let c = fat[rng.gen_range(0..fat.len())];
            let edges = &h.classes()[&c];
            let (u, v) = edges[rng.gen_range(0..edges.len())];
            let mut out = h.clone();
            out.set_color(u, v, fresh_color(h));
            Some(out)
        }
        2 => {
            // recolor one edge to a different existing color
            if colors.len() < 2 {
                return None;
            }
            let (u, v) = pair_unrank(rng.gen_range(0..pair_count(h.n())));
            let current = h.color(u, v);
            let pos = colors.binary_search(&current).expect("color present");
            let j = pick_other(rng, colors.len(), pos);
            let mut out = h.clone();
            out.set_color(u, v, colors[j]);
            Some(out)
        }
        _ => {
            let (u, v) = pair_unrank(rng.gen_range(0..pair_count(h.n())));
            let mut out = h.clone();
            out.set_color(u, v, fresh_color(h));
            Some(out)
        }
    }
}

fn pick_other(rng: &mut ChaCha8Rng, len: usize, not: usize) -> usize {
    let j = rng.gen_range(0..len - 1);
    if j >= not {
        j + 1
    } else {
        j
    }
}

/// FNV-1a, 64 bit.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}
