//! Plain graphs, complete edge-colored graphs, and their file formats.
//!
//! Vertices are dense `0..n`. A [`ColoredGraph`] is always a *complete* graph;
//! colors are arbitrary `u64` values and "number of colors" always means the
//! number of distinct values present. Colors live in a flat triangular array
//! indexed by pair rank, so lookup is O(1) and memory is exactly one word per
//! pair.
//!
//! Two line-oriented document formats, both with `#` comment lines:
//!
//! ```text
//! cg 1            g 1
//! n 4             n 4
//! e 0 1 7         e 0 1
//! e 0 2 0         e 2 3
//! ...             (only present edges)
//! (all 6 pairs, each with a color)
//! ```
//!
//! Canonical serialization lists pairs sorted by `(u, v)`.

use crate::bits::Bits;
use crate::{Error, ParseError};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Rank of the pair `{u, v}` (`u < v`) in the triangular layout.
#[inline]
pub fn pair_rank(u: usize, v: usize) -> usize {
    debug_assert!(u < v);
    v * (v - 1) / 2 + u
}

/// `C(n, 2)` as a `usize`.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Inverse of [`pair_rank`]: the pair `(u, v)` with `u < v` at this rank.
pub fn pair_unrank(rank: usize) -> (usize, usize) {
    let mut v = (1 + 8 * rank).isqrt().div_ceil(2);
    while v * (v - 1) / 2 > rank {
        v -= 1;
    }
    while (v + 1) * v / 2 <= rank {
        v += 1;
    }
    (rank - v * (v - 1) / 2, v)
}

/// Undirected simple graph on `0..n` with per-vertex bitset adjacency.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<Bits>,
    edge_count: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Bits::new(n); n],
            edge_count: 0,
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Complete graph.
    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            for u in 0..v {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Adds `{u, v}`. Self-loops are rejected; re-adding an edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loop ({u}, {u})");
        assert!(u < self.n && v < self.n, "vertex out of range");
        if !self.adj[u].get(v) {
            self.adj[u].set(v);
            self.adj[v].set(u);
            self.edge_count += 1;
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u].get(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter()
    }

    /// Edges in `(u, v)` lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Induced subgraph on a set of vertices. Returns the subgraph and the
    /// sorted map from new ids to old ids.
    pub fn induced(&self, vertices: &[usize]) -> Result<(Graph, Vec<usize>), Error> {
        let map = check_subset(vertices, self.n)?;
        let mut g = Graph::new(map.len());
        for (i, &u) in map.iter().enumerate() {
            for (j, &v) in map.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        Ok((g, map))
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = Bits::new(self.n);
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen.get(start) {
                continue;
            }
            let mut comp = vec![start];
            seen.set(start);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for w in self.adj[v].iter() {
                    if !seen.get(w) {
                        seen.set(w);
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Reads the `g 1` plain-graph format.
    pub fn parse(text: &str) -> Result<Graph, Error> {
        let mut doc = DocReader::new(text);
        doc.expect_magic("g")?;
        let n = doc.read_n()?;
        let mut g = Graph::new(n);
        let mut seen = vec![false; pair_count(n)];
        while let Some((line_no, toks)) = doc.next_line()? {
            let (u, v) = read_edge_pair(line_no, &toks, 3, n)?;
            let r = pair_rank(u, v);
            if seen[r] {
                return Err(ParseError::DuplicatePair { line: line_no, u, v }.into());
            }
            seen[r] = true;
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Canonical `g 1` document: edges sorted by `(u, v)`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str("g 1\n");
        let _ = writeln!(out, "n {}", self.n);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {u} {v}");
        }
        out
    }
}

/// Complete graph on `0..n` with a color per pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColoredGraph {
    n: usize,
    colors: Vec<u64>,
}

impl ColoredGraph {
    /// All pairs colored `color`. Requires `n ≥ 2`.
    pub fn monochromatic(n: usize, color: u64) -> Self {
        assert!(n >= 2, "a colored graph needs at least one edge");
        ColoredGraph {
            n,
            colors: vec![color; pair_count(n)],
        }
    }

    /// Colors every pair by `f(u, v)` with `u < v`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> u64) -> Self {
        let mut h = ColoredGraph::monochromatic(n, 0);
        for v in 1..n {
            for u in 0..v {
                h.colors[pair_rank(u, v)] = f(u, v);
            }
        }
        h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        pair_count(self.n)
    }

    pub fn color(&self, u: usize, v: usize) -> u64 {
        assert!(u != v && u < self.n && v < self.n, "bad pair ({u}, {v})");
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.colors[pair_rank(a, b)]
    }

    pub fn set_color(&mut self, u: usize, v: usize, color: u64) {
        assert!(u != v && u < self.n && v < self.n, "bad pair ({u}, {v})");
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.colors[pair_rank(a, b)] = color;
    }

    /// Edges in `(u, v)` lexicographic order with their colors.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n).map(move |v| (u, v, self.colors[pair_rank(u, v)]))
        })
    }

    /// Color frequency table.
    pub fn census(&self) -> ColorCensus {
        let mut counts = BTreeMap::new();
        for &c in &self.colors {
            *counts.entry(c).or_insert(0usize) += 1;
        }
        ColorCensus { counts }
    }

    /// Number of distinct colors present.
    pub fn distinct_colors(&self) -> usize {
        self.census().distinct()
    }

    /// Color classes in ascending color order; edges within a class are in
    /// `(u, v)` lexicographic order.
    pub fn classes(&self) -> BTreeMap<u64, Vec<(usize, usize)>> {
        let mut map: BTreeMap<u64, Vec<(usize, usize)>> = BTreeMap::new();
        for (u, v, c) in self.edges() {
            map.entry(c).or_default().push((u, v));
        }
        map
    }

    /// The subgraph formed by one color class.
    pub fn class_graph(&self, color: u64) -> Graph {
        let mut g = Graph::new(self.n);
        for (u, v, c) in self.edges() {
            if c == color {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Induced coloring on a set of vertices (still complete). Returns the
    /// restricted graph and the sorted map from new ids to old ids.
    pub fn induced(&self, vertices: &[usize]) -> Result<(ColoredGraph, Vec<usize>), Error> {
        let map = check_subset(vertices, self.n)?;
        if map.len() < 2 {
            return Err(crate::invalid(
                "induced coloring needs at least two vertices",
            ));
        }
        let h = ColoredGraph::from_fn(map.len(), |i, j| self.color(map[i], map[j]));
        Ok((h, map))
    }

    /// Reads the `cg 1` format; every pair must appear exactly once.
    pub fn parse(text: &str) -> Result<ColoredGraph, Error> {
        let mut doc = DocReader::new(text);
        doc.expect_magic("cg")?;
        let n = doc.read_n()?;
        if n < 2 {
            return Err(crate::invalid("a colored graph needs n >= 2"));
        }
        let expected = pair_count(n);
        let mut colors = vec![0u64; expected];
        let mut seen = vec![false; expected];
        let mut found = 0usize;
        while let Some((line_no, toks)) = doc.next_line()? {
            let (u, v) = read_edge_pair(line_no, &toks, 4, n)?;
            let color = parse_num(line_no, &toks[3], "color")?;
            let r = pair_rank(u, v);
            if seen[r] {
                return Err(ParseError::DuplicatePair { line: line_no, u, v }.into());
            }
            seen[r] = true;
            colors[r] = color;
            found += 1;
        }
        if found != expected {
            return Err(ParseError::Incomplete {
                missing: expected - found,
                expected,
            }
            .into());
        }
        Ok(ColoredGraph { n, colors })
    }

    /// Canonical `cg 1` document: all pairs sorted by `(u, v)`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str("cg 1\n");
        let _ = writeln!(out, "n {}", self.n);
        for (u, v, c) in self.edges() {
            let _ = writeln!(out, "e {u} {v} {c}");
        }
        out
    }
}

/// Frequency table of colors in a [`ColoredGraph`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColorCensus {
    counts: BTreeMap<u64, usize>,
}

impl ColorCensus {
    /// Number of distinct colors.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Total edges counted.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn count(&self, color: u64) -> usize {
        self.counts.get(&color).copied().unwrap_or(0)
    }

    /// `(color, count)` in ascending color order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, usize)> + '_ {
        self.counts.iter().map(|(&c, &k)| (c, k))
    }
}

/// A set of pairwise-disjoint edges.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
}

impl Matching {
    /// Validates disjointness; edges are normalized to `u < v` and sorted.
    pub fn new(edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Matching, Error> {
        let mut norm: Vec<(usize, usize)> = Vec::new();
        let mut used: Vec<usize> = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(crate::invalid(format!("self-loop ({u}, {u}) in matching")));
            }
            norm.push((u.min(v), u.max(v)));
            used.push(u);
            used.push(v);
        }
        used.sort_unstable();
        if used.windows(2).any(|w| w[0] == w[1]) {
            return Err(crate::invalid("matching edges are not disjoint"));
        }
        norm.sort_unstable();
        Ok(Matching { edges: norm })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// True if every edge is present in `g`.
    pub fn is_in(&self, g: &Graph) -> bool {
        self.edges.iter().all(|&(u, v)| g.has_edge(u, v))
    }
}

fn check_subset(vertices: &[usize], n: usize) -> Result<Vec<usize>, Error> {
    if vertices.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut map = vertices.to_vec();
    map.sort_unstable();
    if map.windows(2).any(|w| w[0] == w[1]) {
        return Err(crate::invalid("vertex subset has duplicates"));
    }
    if *map.last().unwrap() >= n {
        return Err(crate::invalid(format!(
            "vertex {} out of range for n = {n}",
            map.last().unwrap()
        )));
    }
    Ok(map)
}

/// Line reader shared by the two formats: skips blank and `#` lines, splits
/// into tokens with 1-based column positions.
struct DocReader<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

type Toks<'a> = Vec<(&'a str, usize)>;

impl<'a> DocReader<'a> {
    fn new(text: &'a str) -> Self {
        DocReader {
            lines: text.lines().enumerate(),
        }
    }

    /// Next content line as `(line_no, tokens)`; `None` at end of input.
    fn next_content(&mut self) -> Option<(usize, Toks<'a>)> {
        for (idx, raw) in self.lines.by_ref() {
            let trimmed = raw.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut toks = Vec::new();
            let mut col = 0;
            for tok in raw.split_whitespace() {
                let at = raw[col..].find(tok).unwrap() + col;
                toks.push((tok, at + 1));
                col = at + tok.len();
            }
            return Some((idx + 1, toks));
        }
        None
    }

    fn expect_magic(&mut self, magic: &str) -> Result<(), Error> {
        match self.next_content() {
            Some((line, toks)) if toks.len() == 2 && toks[0].0 == magic && toks[1].0 == "1" => {
                let _ = line;
                Ok(())
            }
            Some((line, toks)) => Err(syntax(
                line,
                toks.first().map_or(1, |t| t.1),
                format!("expected header `{magic} 1`"),
            )),
            None => Err(syntax(1, 1, format!("empty document, expected `{magic} 1`"))),
        }
    }

    fn read_n(&mut self) -> Result<usize, Error> {
        match self.next_content() {
            Some((line, toks)) if toks.len() == 2 && toks[0].0 == "n" => {
                parse_num::<usize>(line, &toks[1], "vertex count")
            }
            Some((line, toks)) => Err(syntax(
                line,
                toks.first().map_or(1, |t| t.1),
                "expected `n <count>`".to_string(),
            )),
            None => Err(syntax(1, 1, "missing `n <count>` line".to_string())),
        }
    }

    /// Next `e`-line, or `None` at end of input.
    fn next_line(&mut self) -> Result<Option<(usize, Toks<'a>)>, Error> {
        match self.next_content() {
            None => Ok(None),
            Some((line, toks)) => {
                if toks[0].0 != "e" {
                    return Err(syntax(line, toks[0].1, "expected `e` line".to_string()));
                }
                Ok(Some((line, toks)))
            }
        }
    }
}

fn syntax(line: usize, col: usize, msg: String) -> Error {
    ParseError::Syntax { line, col, msg }.into()
}

fn parse_num<T: std::str::FromStr>(
    line: usize,
    tok: &(&str, usize),
    what: &str,
) -> Result<T, Error> {
    tok.0
        .parse()
        .map_err(|_| syntax(line, tok.1, format!("bad {what} `{}`", tok.0)))
}

/// Validates an `e`-line with `arity` tokens and returns the pair, which must
/// satisfy `u < v < n`.
fn read_edge_pair(
    line: usize,
    toks: &Toks<'_>,
    arity: usize,
    n: usize,
) -> Result<(usize, usize), Error> {
    if toks.len() != arity {
        return Err(syntax(
            line,
            toks[0].1,
            format!("expected {arity} tokens on `e` line, got {}", toks.len()),
        ));
    }
    let u: usize = parse_num(line, &toks[1], "vertex id")?;
    let v: usize = parse_num(line, &toks[2], "vertex id")?;
    for id in [u, v] {
        if id >= n {
            return Err(ParseError::VertexOutOfRange { line, id, n }.into());
        }
    }
    if u >= v {
        return Err(syntax(
            line,
            toks[1].1,
            format!("pair must satisfy u < v, got ({u}, {v})"),
        ));
    }
    Ok((u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ParseError;

    #[test]
    fn pair_rank_layout() {
        // (0,1) (0,2) (1,2) (0,3) (1,3) (2,3) ...
        assert_eq!(pair_rank(0, 1), 0);
        assert_eq!(pair_rank(0, 2), 1);
        assert_eq!(pair_rank(1, 2), 2);
        assert_eq!(pair_rank(2, 3), 5);
        let n = 9;
        let mut seen = vec![false; pair_count(n)];
        for v in 1..n {
            for u in 0..v {
                let r = pair_rank(u, v);
                assert!(!seen[r]);
                seen[r] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn graph_basics() {
        let mut g = Graph::new(5);
        g.add_edge(0, 1);
        g.add_edge(3, 2);
        g.add_edge(0, 1);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(0, 2));
        assert_eq!(g.edges(), vec![(0, 1), (2, 3)]);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert_eq!(g.degree(0), 1);
    }

    #[test]
    fn graph_induced() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 5), (3, 4)]);
        let (sub, map) = g.induced(&[5, 1, 2]).unwrap();
        assert_eq!(map, vec![1, 2, 5]);
        assert_eq!(sub.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(g.induced(&[]), Err(Error::EmptySubset));
        assert!(g.induced(&[0, 6]).is_err());
        assert!(g.induced(&[2, 2]).is_err());
    }

    #[test]
    fn colored_round_trip() {
        let h = ColoredGraph::from_fn(5, |u, v| (u * 7 + v * 3) as u64 % 4);
        let text = h.serialize();
        let back = ColoredGraph::parse(&text).unwrap();
        assert_eq!(h, back);
        assert_eq!(text, back.serialize());
    }

    #[test]
    fn colored_parse_accepts_comments_and_any_order() {
        let text = "# demo\ncg 1\n\nn 3\ne 1 2 9\n# middle\ne 0 2 8\ne 0 1 7\n";
        let h = ColoredGraph::parse(text).unwrap();
        assert_eq!(h.color(0, 1), 7);
        assert_eq!(h.color(2, 1), 9);
    }

    #[test]
    fn colored_parse_errors() {
        let bad_header = ColoredGraph::parse("cg 2\nn 3\n");
        assert!(matches!(
            bad_header,
            Err(Error::Parse(ParseError::Syntax { line: 1, .. }))
        ));

        let dup = "cg 1\nn 3\ne 0 1 1\ne 0 1 2\ne 0 2 0\ne 1 2 0\n";
        assert_eq!(
            ColoredGraph::parse(dup),
            Err(ParseError::DuplicatePair { line: 4, u: 0, v: 1 }.into())
        );

        let incomplete = "cg 1\nn 4\ne 0 1 1\n";
        assert_eq!(
            ColoredGraph::parse(incomplete),
            Err(ParseError::Incomplete {
                missing: 5,
                expected: 6
            }
            .into())
        );

        let out_of_range = "cg 1\nn 3\ne 0 3 1\n";
        assert_eq!(
            ColoredGraph::parse(out_of_range),
            Err(ParseError::VertexOutOfRange {
                line: 3,
                id: 3,
                n: 3
            }
            .into())
        );

        let reversed = "cg 1\nn 3\ne 1 0 1\n";
        assert!(matches!(
            ColoredGraph::parse(reversed),
            Err(Error::Parse(ParseError::Syntax { line: 3, .. }))
        ));
    }

    #[test]
    fn census_counts() {
        let h = ColoredGraph::from_fn(4, |u, _| u as u64);
        // color 0: (0,1) (0,2) (0,3); color 1: (1,2) (1,3); color 2: (2,3)
        let census = h.census();
        assert_eq!(census.distinct(), 3);
        assert_eq!(census.total(), 6);
        assert_eq!(census.count(0), 3);
        assert_eq!(census.count(1), 2);
        assert_eq!(census.count(2), 1);
        assert_eq!(census.count(9), 0);
    }

    #[test]
    fn classes_are_lex_sorted() {
        let h = ColoredGraph::from_fn(4, |u, v| ((u + v) % 2) as u64);
        let classes = h.classes();
        for edges in classes.values() {
            let mut sorted = edges.clone();
            sorted.sort_unstable();
            assert_eq!(*edges, sorted);
        }
        assert_eq!(
            classes.keys().copied().collect::<Vec<_>>(),
            vec![0, 1],
            "ascending color order"
        );
    }

    #[test]
    fn induced_coloring() {
        let h = ColoredGraph::from_fn(6, |u, v| pair_rank(u, v) as u64);
        let (sub, map) = h.induced(&[4, 0, 2]).unwrap();
        assert_eq!(map, vec![0, 2, 4]);
        assert_eq!(sub.color(0, 1), h.color(0, 2));
        assert_eq!(sub.color(1, 2), h.color(2, 4));
        assert!(h.induced(&[3]).is_err());
    }

    #[test]
    fn matching_validation() {
        let m = Matching::new([(3, 2), (0, 1)]).unwrap();
        assert_eq!(m.edges(), &[(0, 1), (2, 3)]);
        assert!(Matching::new([(0, 1), (1, 2)]).is_err());
        assert!(Matching::new([(2, 2)]).is_err());
        assert!(Matching::new([]).unwrap().is_empty());
    }

    #[test]
    fn plain_graph_round_trip() {
        let g = Graph::from_edges(5, [(0, 4), (1, 2)]);
        let text = g.serialize();
        assert_eq!(Graph::parse(&text).unwrap(), g);
        assert!(Graph::parse("g 1\nn 3\ne 0 1\ne 0 1\n").is_err());
    }
}
