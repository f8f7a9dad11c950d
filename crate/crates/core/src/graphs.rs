//! Naturally labeled unit interval graphs, stored as interval sequences.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest graph the text grammar will build. Everything downstream is
/// super-exponential long before this.
pub const MAX_SPEC_VERTICES: usize = 64;

/// The graph on `[n]` with an edge `{i,j}` whenever some interval `[a_k, k]`
/// contains both endpoints.
///
/// The sequence is kept in closure form `a_j = min_{k ≥ j} a_k` (so it is
/// nondecreasing); different raw sequences with the same edge set compare equal,
/// and `a_n` is the true left end of vertex `n`'s neighbourhood.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitIntervalGraph {
    a: Vec<usize>,
}

impl UnitIntervalGraph {
    /// From raw left endpoints `a_1..a_n` (1-based), `1 ≤ a_k ≤ k`.
    pub fn from_intervals(a: &[usize]) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        for (i, &ak) in a.iter().enumerate() {
            if ak == 0 || ak > i + 1 {
                return Err(Error::InvalidGraph(format!("a_{} = {ak} not in [1,{}]", i + 1, i + 1)));
            }
        }
        let mut a = a.to_vec();
        for i in (0..a.len() - 1).rev() {
            a[i] = a[i].min(a[i + 1]);
        }
        Ok(UnitIntervalGraph { a })
    }

    /// `P_{n,k}`: an edge between `i < j` iff `j − i ≤ k`.
    pub fn pnk(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k > n - 1 {
            return Err(Error::InvalidGraph(format!("pnk needs n ≥ 1 and k ≤ n−1, got n={n}, k={k}")));
        }
        Ok(UnitIntervalGraph { a: (1..=n).map(|j| j.saturating_sub(k).max(1)).collect() })
    }

    /// Triangular ladder `P_{n,2}`; for `n ≤ 2` this is `K_n`.
    pub fn tl(n: usize) -> Result<Self> {
        Self::pnk(n, 2.min(n.saturating_sub(1)))
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::pnk(n, n.saturating_sub(1))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::pnk(n, 1.min(n.saturating_sub(1)))
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Left endpoints `a_1..a_n`, 1-based values.
    pub fn intervals(&self) -> &[usize] {
        &self.a
    }

    /// `a_j` for 1-based `j`.
    pub fn left(&self, j: usize) -> usize {
        self.a[j - 1]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i != j && i >= 1 && j <= self.n() && self.a[j - 1] <= i
    }

    /// Edges `(i, j)` with `i < j`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.n() {
            for j in i + 1..=self.n() {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// `G·H` on `n + m − 1` vertices sharing `G`'s last vertex with `H`'s first.
    pub fn concat(&self, h: &UnitIntervalGraph) -> UnitIntervalGraph {
        let shift = self.n() - 1;
        let mut a = self.a.clone();
        a.extend(h.a[1..].iter().map(|&x| x + shift));
        UnitIntervalGraph::from_intervals(&a).expect("concatenation of valid graphs")
    }

    pub fn remove_last(&self) -> Result<UnitIntervalGraph> {
        if self.n() < 2 {
            return Err(Error::InvalidGraph("cannot remove the only vertex".into()));
        }
        Ok(UnitIntervalGraph { a: self.a[..self.n() - 1].to_vec() })
    }

    pub fn is_triangular_ladder(&self) -> bool {
        Self::tl(self.n()).map(|t| t == *self).unwrap_or(false)
    }

    /// Number of proper colorings with `k` colors, by backtracking over vertices in order.
    pub fn count_colorings(&self, k: usize) -> u64 {
        fn go(g: &UnitIntervalGraph, k: usize, colors: &mut Vec<usize>) -> u64 {
            let v = colors.len() + 1;
            if v > g.n() {
                return 1;
            }
            let mut total = 0;
            for c in 0..k {
                if (g.left(v)..v).all(|u| colors[u - 1] != c) {
                    colors.push(c);
                    total += go(g, k, colors);
                    colors.pop();
                }
            }
            total
        }
        go(self, k, &mut Vec::with_capacity(self.n()))
    }

    /// The graph-spec string `intervals:…` that reproduces this graph.
    pub fn to_spec(&self) -> String {
        let parts: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        format!("intervals:{}", parts.join(","))
    }
}

impl fmt::Debug for UnitIntervalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UIG{:?}", self.a)
    }
}

impl fmt::Display for UnitIntervalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_spec())
    }
}

/// Every unit interval graph on `[n]` (distinct edge sets), in sorted order.
pub fn all_graphs(n: usize) -> Vec<UnitIntervalGraph> {
    // closure-form sequences are exactly the nondecreasing ones with a_k ≤ k
    fn go(n: usize, a: &mut Vec<usize>, out: &mut Vec<UnitIntervalGraph>) {
        let j = a.len() + 1;
        if j > n {
            out.push(UnitIntervalGraph { a: a.clone() });
            return;
        }
        let lo = a.last().copied().unwrap_or(1);
        for v in lo..=j {
            a.push(v);
            go(n, a, out);
            a.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, &mut Vec::new(), &mut out);
    }
    let set: BTreeSet<_> = out.into_iter().collect();
    set.into_iter().collect()
}

/// Parses the graph grammar
/// `tl:N | k:N | path:N | pnk:N:K | intervals:a1,…,an | concat:(SPEC,SPEC,…)`.
pub fn parse_graph(spec: &str) -> Result<UnitIntervalGraph> {
    let mut p = SpecParser { s: spec.as_bytes(), pos: 0, depth: 0 };
    let g = p.graph()?;
    if p.pos != p.s.len() {
        return Err(Error::parse(p.pos, "trailing input"));
    }
    Ok(g)
}

impl FromStr for UnitIntervalGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_graph(s)
    }
}

struct SpecParser<'a> {
    s: &'a [u8],
    pos: usize,
    depth: usize,
}

impl SpecParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn word(&mut self) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_lowercase()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("")
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a number"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        match text.parse::<usize>() {
            Ok(v) if v <= MAX_SPEC_VERTICES => Ok(v),
            _ => Err(Error::parse(start, format!("number exceeds {MAX_SPEC_VERTICES}"))),
        }
    }

    fn vertices(&mut self, start: usize) -> Result<usize> {
        let n = self.number()?;
        if n == 0 {
            return Err(Error::parse(start, "need at least one vertex"));
        }
        Ok(n)
    }

    fn graph(&mut self) -> Result<UnitIntervalGraph> {
        let start = self.pos;
        let name = self.word().to_string();
        self.expect(b':')?;
        let at = |e: Error| match e {
            Error::InvalidGraph(msg) => Error::parse(start, msg),
            other => other,
        };
        match name.as_str() {
            "tl" => {
                let n = self.vertices(start)?;
                UnitIntervalGraph::tl(n).map_err(at)
            }
            "k" => {
                let n = self.vertices(start)?;
                UnitIntervalGraph::complete(n).map_err(at)
            }
            "path" => {
                let n = self.vertices(start)?;
                UnitIntervalGraph::path(n).map_err(at)
            }
            "pnk" => {
                let n = self.vertices(start)?;
                self.expect(b':')?;
                let k = self.number()?;
                UnitIntervalGraph::pnk(n, k).map_err(at)
            }
            "intervals" => {
                let mut a = vec![self.number()?];
                // a comma followed by a digit continues the list; otherwise it
                // belongs to an enclosing concat
                while self.peek() == Some(b',') && self.s.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                    a.push(self.number()?);
                    if a.len() > MAX_SPEC_VERTICES {
                        return Err(Error::parse(self.pos, format!("more than {MAX_SPEC_VERTICES} vertices")));
                    }
                }
                UnitIntervalGraph::from_intervals(&a).map_err(at)
            }
            "concat" => {
                if self.depth >= 16 {
                    return Err(Error::parse(start, "concat nested too deeply"));
                }
                self.depth += 1;
                self.expect(b'(')?;
                let mut g = self.graph()?;
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    let h = self.graph()?;
                    if g.n() + h.n() - 1 > MAX_SPEC_VERTICES {
                        return Err(Error::parse(self.pos, format!("more than {MAX_SPEC_VERTICES} vertices")));
                    }
                    g = g.concat(&h);
                }
                self.expect(b')')?;
                self.depth -= 1;
                Ok(g)
            }
            _ => Err(Error::parse(start, format!("unknown graph family {name:?}"))),
        }
    }
}
