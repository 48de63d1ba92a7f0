//! Closed-form extremal quantities for forbidden matchings, the two
//! near-extremal colorings, and an exact audit of every counting inequality
//! the stability argument rests on.
//!
//! All arithmetic is exact `i128`; nothing here searches, so the audit can
//! sweep tens of thousands of parameter cells in well under a second.

use crate::graph::{ColoredGraph, Graph};
use crate::invalid;
use crate::Error;
use rayon::prelude::*;
use serde::Serialize;

/// `x (x - 1) / 2`, clamped to zero below `x = 2`.
pub fn choose2(x: i128) -> i128 {
    if x < 2 {
        0
    } else {
        x * (x - 1) / 2
    }
}

/// Maximum edge count of an `n`-vertex graph with no matching of size `k`.
///
/// For `n >= 2k` this is the larger of the hub construction
/// `K_{k-1} + (k-1)(n-k+1)` edges and the clique `K_{2k-1}`; below `2k`
/// vertices no such matching fits at all and the complete graph qualifies.
pub fn turan_matching(n: usize, k: usize) -> Result<i128, Error> {
    if k == 0 {
        return Err(invalid("every graph contains the empty matching"));
    }
    let (ni, ki) = (n as i128, k as i128);
    if n < 2 * k {
        return Ok(choose2(ni));
    }
    let hub = choose2(ki - 1) + (ki - 1) * (ni - ki + 1);
    let clique = choose2(2 * ki - 1);
    Ok(hub.max(clique))
}

/// Minimum number of colors that forces a rainbow matching of size `s` in
/// every edge coloring of the complete graph on `n` vertices.
pub fn anti_ramsey_matching(n: usize, s: usize) -> Result<i128, Error> {
    if s == 0 {
        return Err(invalid("the empty matching is rainbow in every coloring"));
    }
    if n < 2 * s {
        return Err(invalid(format!(
            "no matching of size {s} fits in {n} vertices"
        )));
    }
    if s == 1 {
        return Ok(1); // any colored edge is a rainbow matching of size one
    }
    if (n, s) == (4, 2) {
        return Ok(4);
    }
    let base = turan_matching(n, s - 1)?;
    Ok(base + if n == 2 * s && s >= 7 { 3 } else { 2 })
}

/// Which of the two color thresholds dominates.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Regime {
    G1,
    G2,
    Tie,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::G1 => "g1",
            Regime::G2 => "g2",
            Regime::Tie => "tie",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct ThresholdValues {
    pub g1: i128,
    pub g2: i128,
    pub g: i128,
    pub regime: Regime,
}

/// The color threshold of the stability statement:
/// `g1 = C(n,2) - C(n-s+1,2) + 5`, `g2 = C(2s-1,2) + n + 1`, `g = max`.
pub fn threshold_g(n: usize, s: usize) -> ThresholdValues {
    assert!(s >= 1 && n >= s, "threshold is meaningful for 1 <= s <= n");
    let (ni, si) = (n as i128, s as i128);
    let g1 = choose2(ni) - choose2(ni - si + 1) + 5;
    let g2 = choose2(2 * si - 1) + ni + 1;
    let regime = match g1.cmp(&g2) {
        std::cmp::Ordering::Greater => Regime::G1,
        std::cmp::Ordering::Less => Regime::G2,
        std::cmp::Ordering::Equal => Regime::Tie,
    };
    ThresholdValues {
        g1,
        g2,
        g: g1.max(g2),
        regime,
    }
}

/// `g1 >= g2` holds exactly when `2n >= 5s + 3`.
pub fn in_h1_regime(n: usize, s: usize) -> bool {
    2 * n >= 5 * s + 3
}

/// The complementary regime, within the supported parameter range.
pub fn in_h2_regime(n: usize, s: usize) -> bool {
    n >= 2 * s + 5 && 2 * n <= 5 * s + 3
}

/// `K_s` joined to `n - s` isolated vertices: the hub-form extremal graph
/// whose matchings never exceed `s` once `n >= 2s`.
pub fn construct_turan_graph(n: usize, s: usize) -> Result<Graph, Error> {
    if s > n {
        return Err(invalid(format!("hub size {s} exceeds n = {n}")));
    }
    let mut g = Graph::new(n);
    for u in 0..s {
        for v in u + 1..n {
            g.add_edge(u, v);
        }
    }
    Ok(g)
}

/// Colors the base graph rainbow (colors `1..` in lexicographic edge order)
/// and every remaining pair with color `0`. Needs `n >= 2`.
pub fn rainbow_plus_one(base: &Graph) -> ColoredGraph {
    let mut h = ColoredGraph::monochromatic(base.n(), 0);
    for (next, (u, v)) in (1u64..).zip(base.edges()) {
        h.set_color(u, v, next);
    }
    h
}

/// First near-extremal coloring: rainbow copy of
/// `K_{s-1} joined to (K_3 plus an independent set)`, color 0 elsewhere.
/// Layout: hub `0..s-1`, triangle `s-1..s+2`, independent rest.
/// Uses `g1 - 1` colors in total and its largest rainbow matching has size
/// `s + 1`.
pub fn construct_h1(n: usize, s: usize) -> Result<ColoredGraph, Error> {
    if s == 0 {
        return Err(invalid("s must be at least 1"));
    }
    if n < s + 2 {
        return Err(invalid(format!("need n >= s + 2 = {}, got {n}", s + 2)));
    }
    let hub = s - 1;
    let mut base = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if u < hub || v < hub + 3 {
                base.add_edge(u, v);
            }
        }
    }
    Ok(rainbow_plus_one(&base))
}

/// Second near-extremal coloring: rainbow copy of
/// `K_1 joined to (K_{2s-1} plus an independent set)`, color 0 elsewhere.
/// Layout: hub `0`, clique `1..2s`, independent rest. Uses `g2 - 1` colors
/// and its largest rainbow matching has size `s + 1`.
pub fn construct_h2(n: usize, s: usize) -> Result<ColoredGraph, Error> {
    if s == 0 {
        return Err(invalid("s must be at least 1"));
    }
    if n < 2 * s {
        return Err(invalid(format!("need n >= 2s = {}, got {n}", 2 * s)));
    }
    let mut base = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if u == 0 || v < 2 * s {
                base.add_edge(u, v);
            }
        }
    }
    Ok(rainbow_plus_one(&base))
}

// ---------------------------------------------------------------------------
// Counting bounds used by the case analysis. Names track the audit check ids.
// ---------------------------------------------------------------------------

/// `C(n,2) - C(n-t,2) + C(2s+3-2t,2)`: colors visible from a `t`-vertex hub
/// plus a clique on the rest.
pub fn bound_f(n: usize, s: usize, t: usize) -> i128 {
    let (ni, si, ti) = (n as i128, s as i128, t as i128);
    choose2(ni) - choose2(ni - ti) + choose2(2 * si + 3 - 2 * ti)
}

pub fn bound_h1(n: usize, s: usize, j: usize) -> i128 {
    let (ni, si, ji) = (n as i128, s as i128, j as i128);
    choose2(si - 1) + (si - 1 - ji) * (ni - si + 1) + ji * (ji + 6) + 10
}

pub fn bound_h2(n: usize, s: usize, j: usize) -> i128 {
    let (ni, si, ji) = (n as i128, s as i128, j as i128);
    choose2(si + 1) + (si + 1 - ji) * (ni - si - 1) + ji * (ji + 2) + 3
}

pub fn bound_h3(n: usize, s: usize, j: usize) -> i128 {
    let (ni, si, ji) = (n as i128, s as i128, j as i128);
    choose2(si) + (si - ji) * (ni - si) + ji * (ji + 4) + 3
}

pub fn bound_p1(n: usize, s: usize, t: usize) -> i128 {
    let (ni, si, ti) = (n as i128, s as i128, t as i128);
    let inner = choose2(2 * si - 2 * ti + 1).max((si - ti) * (si - ti + 3) + choose2(si - ti));
    inner + (ti + 1) + ti * (ni - ti) + choose2(ti)
}

pub fn bound_p2(n: usize, s: usize, t: usize) -> i128 {
    let (ni, si, ti) = (n as i128, s as i128, t as i128);
    choose2(2 * si - 2 * ti + 3) + (ti - 1) * (ni - ti + 1) + choose2(ti - 1) + 1
}

/// One audited inequality at one parameter cell.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: &'static str,
    pub n: usize,
    pub s: usize,
    /// The `t` or `j` the check concerns; 0 when not applicable.
    pub param: i64,
    pub lhs: i128,
    pub rhs: i128,
    /// Identity checks require `lhs == rhs`; the rest require `lhs < rhs`.
    pub equality: bool,
    pub pass: bool,
}

impl CheckRecord {
    pub fn margin(&self) -> i128 {
        self.rhs - self.lhs
    }
}

#[allow(clippy::too_many_arguments)]
fn rec(
    out: &mut Vec<CheckRecord>,
    id: &'static str,
    equality: bool,
    n: usize,
    s: usize,
    param: i64,
    lhs: i128,
    rhs: i128,
) {
    let pass = if equality { lhs == rhs } else { lhs < rhs };
    out.push(CheckRecord {
        id,
        n,
        s,
        param,
        lhs,
        rhs,
        equality,
        pass,
    });
}

/// Worst (largest) value of `f` over an inclusive range, with its argument.
fn range_max(
    range: std::ops::RangeInclusive<usize>,
    f: impl Fn(usize) -> i128,
) -> Option<(usize, i128)> {
    range.map(|x| (x, f(x))).max_by_key(|&(x, v)| (v, x))
}

/// Evaluates every applicable counting claim at one cell of the grid
/// `s >= 2`, `n >= max(2s + 5, 40)`. Checks whose hypotheses mention a
/// sub-case that only exists for larger `s` are skipped below that `s`; the
/// skip conditions come from the ranges the claims quantify over
/// (for example `t` in `[4, s - 2]` needs `s >= 6`).
pub fn audit_cell(n: usize, s: usize) -> Vec<CheckRecord> {
    assert!(
        s >= 2 && n >= (2 * s + 5).max(40),
        "audit cells live in the guaranteed range"
    );
    let th = threshold_g(n, s);
    let (g1, g2, g) = (th.g1, th.g2, th.g);
    let (ni, si) = (n as i128, s as i128);
    let mut out = Vec::new();

    // The threshold strictly exceeds the forcing count one matching size up,
    // so the hypothesis class is nonempty territory.
    let ar = anti_ramsey_matching(n, s + 1).expect("cells satisfy n >= 2s + 5");
    rec(&mut out, "g-vs-ar", false, n, s, 0, ar, g);

    if s >= 6 {
        let (t, worst) = range_max(4..=s - 2, |t| bound_f(n, s, t)).unwrap();
        rec(&mut out, "f-max", false, n, s, t as i64, worst, g);
    }

    let (j, worst) = range_max(1..=s - 1, |j| bound_h1(n, s, j)).unwrap();
    rec(&mut out, "h1-max", false, n, s, j as i64, worst, g);
    rec(&mut out, "h1-left", false, n, s, 1, bound_h1(n, s, 1), g1);
    rec(&mut out, "h1-right", false, n, s, (s - 1) as i64, bound_h1(n, s, s - 1), g2);

    let (j, worst) = range_max(3..=s + 1, |j| bound_h2(n, s, j)).unwrap();
    rec(&mut out, "h2-max", false, n, s, j as i64, worst, g);
    rec(&mut out, "h2-left", false, n, s, 3, bound_h2(n, s, 3), g1);
    rec(&mut out, "h2-right", false, n, s, (s + 1) as i64, bound_h2(n, s, s + 1), g2);

    let (j, worst) = range_max(2..=s, |j| bound_h3(n, s, j)).unwrap();
    rec(&mut out, "h3-max", false, n, s, j as i64, worst, g);
    rec(&mut out, "h3-left", false, n, s, 2, bound_h3(n, s, 2), g1);
    rec(&mut out, "h3-right", false, n, s, s as i64, bound_h3(n, s, s), g2);

    if s >= 4 {
        let rhs = if s == 4 { g1 } else { g };
        rec(&mut out, "p1-t2", false, n, s, 2, bound_p1(n, s, 2), rhs);
    }
    if s >= 5 {
        let rhs = if s == 5 { g1 } else { g };
        rec(&mut out, "p1-t3", false, n, s, 3, bound_p1(n, s, 3), rhs);
    }

    rec(&mut out, "p2-t2", true, n, s, 2, bound_p2(n, s, 2), g2 - 1);
    if s >= 5 {
        rec(&mut out, "p2-t3", false, n, s, 3, bound_p2(n, s, 3), g);
    }

    if s >= 4 {
        rec(&mut out, "claim3-t1", false, n, s, 1, choose2(2 * si - 3) + ni + 9, g2);
        rec(&mut out, "claim3-t2", false, n, s, 2, 2 * ni + 2 * si * si - 7 * si + 6, g);
    }
    if s >= 5 {
        rec(&mut out, "claim3-t3", false, n, s, 3, 3 * ni + 2 * si * si - 11 * si + 12, g);
    }

    rec(&mut out, "case1-count", false, n, s, 0, choose2(2 * si - 1), 2 * si * si - si + 2);
    if n == 2 * s + 5 {
        rec(&mut out, "case1-2s5", true, n, s, 0, choose2(2 * si) + 6, choose2(2 * si - 1) + ni);
    }
    rec(
        &mut out,
        "case3-five",
        true,
        n,
        s,
        0,
        g1 - choose2(si - 1) - (si - 1) * (ni - si + 1),
        5,
    );
    rec(&mut out, "case5-claim7", true, n, s, 0, ni + 2 * si * si - 3 * si + 2, g2);

    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub id: &'static str,
    pub evaluated: usize,
    pub violations: usize,
    pub min_margin: i128,
    pub min_margin_n: usize,
    pub min_margin_s: usize,
    pub min_margin_param: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub s_min: usize,
    pub s_max: usize,
    pub n_cap: usize,
    pub cells: usize,
    pub records: usize,
    pub summaries: Vec<CheckSummary>,
    pub violations: Vec<CheckRecord>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Sweeps the whole grid `s in [s_min, s_max]`, `n in [max(2s+5, 40), n_cap]`
/// and re-verifies every counting claim with exact arithmetic. Work is
/// parallel over `s`; the merged report is independent of thread count.
pub fn audit_proof_inequalities(s_min: usize, s_max: usize, n_cap: usize) -> Result<AuditReport, Error> {
    if s_min < 2 || s_min > s_max {
        return Err(invalid("need 2 <= s_min <= s_max"));
    }
    let svals: Vec<usize> = (s_min..=s_max).collect();
    let per_s: Vec<(usize, Vec<CheckRecord>)> = svals
        .par_iter()
        .map(|&s| {
            let lo = (2 * s + 5).max(40);
            let mut records = Vec::new();
            let mut cells = 0usize;
            for n in lo..=n_cap {
                records.extend(audit_cell(n, s));
                cells += 1;
            }
            (cells, records)
        })
        .collect();

    let mut cells = 0usize;
    let mut records = 0usize;
    let mut violations = Vec::new();
    let mut by_id: std::collections::BTreeMap<&'static str, CheckSummary> = Default::default();
    for (c, recs) in per_s {
        cells += c;
        for r in recs {
            records += 1;
            let entry = by_id.entry(r.id).or_insert_with(|| CheckSummary {
                id: r.id,
                evaluated: 0,
                violations: 0,
                min_margin: i128::MAX,
                min_margin_n: 0,
                min_margin_s: 0,
                min_margin_param: 0,
            });
            entry.evaluated += 1;
            let margin = r.margin();
            if margin < entry.min_margin {
                entry.min_margin = margin;
                entry.min_margin_n = r.n;
                entry.min_margin_s = r.s;
                entry.min_margin_param = r.param;
            }
            if !r.pass {
                entry.violations += 1;
                violations.push(r);
            }
        }
    }
    Ok(AuditReport {
        s_min,
        s_max,
        n_cap,
        cells,
        records,
        summaries: by_id.into_values().collect(),
        violations,
    })
}
