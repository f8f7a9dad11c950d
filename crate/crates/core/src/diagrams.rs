//! Arc diagrams, their tic-marked and labeled/starred refinements, the IL/IC
//! decomposition for triangular ladders, and the fixed-point predicates.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::UnitIntervalGraph;
use crate::partitions::SetPartition;

/// Largest diagram the text and JSON readers accept.
pub const MAX_DIAGRAM_VERTICES: usize = 64;

/// `n` dots where vertex `v` has at most one left arc `(i, v)`, `i < v`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ArcDiagram {
    // left[v-1] is the source of v's left arc, or v itself when there is none
    left: Vec<usize>,
}

impl ArcDiagram {
    /// From per-vertex sources `i_v ∈ [1, v]` (`i_v = v` means no arc).
    pub fn new(left: Vec<usize>) -> Result<Self> {
        if left.is_empty() {
            return Err(Error::InvalidDiagram("no vertices".into()));
        }
        for (k, &i) in left.iter().enumerate() {
            if i == 0 || i > k + 1 {
                return Err(Error::InvalidDiagram(format!("left end {i} of vertex {} out of range", k + 1)));
            }
        }
        Ok(ArcDiagram { left })
    }

    pub fn empty(n: usize) -> Self {
        ArcDiagram { left: (1..=n).collect() }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDiagram("no vertices".into()));
        }
        let mut left: Vec<usize> = (1..=n).collect();
        for &(i, j) in arcs {
            if !(1 <= i && i < j && j <= n) {
                return Err(Error::InvalidDiagram(format!("bad arc ({i},{j})")));
            }
            if left[j - 1] != j {
                return Err(Error::InvalidDiagram(format!("vertex {j} has two left arcs")));
            }
            left[j - 1] = i;
        }
        Ok(ArcDiagram { left })
    }

    pub fn n(&self) -> usize {
        self.left.len()
    }

    pub fn left_arc(&self, v: usize) -> Option<usize> {
        let i = self.left[v - 1];
        (i != v).then_some(i)
    }

    pub(crate) fn sources(&self) -> &[usize] {
        &self.left
    }

    /// Arcs `(i, j)` ordered by right endpoint.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (1..=self.n()).filter_map(|v| self.left_arc(v).map(|i| (i, v))).collect()
    }

    pub fn num_arcs(&self) -> usize {
        (1..=self.n()).filter(|&v| self.left_arc(v).is_some()).count()
    }

    /// Whether every arc lies inside one interval of `g`.
    pub fn fits(&self, g: &UnitIntervalGraph) -> bool {
        self.n() == g.n() && self.arcs().iter().all(|&(i, j)| g.left(j) <= i)
    }

    /// Connected components as a set partition.
    pub fn pi(&self) -> SetPartition {
        let comp = components(&self.left);
        SetPartition::from_tags(&comp)
    }

    /// IL/IC factorization; needs every arc to have length 1 or 2.
    pub fn decompose(&self) -> Result<Decomposition> {
        let n = self.n();
        let len = |v: usize| self.left_arc(v).map(|i| v - i);
        if let Some((i, j)) = self.arcs().into_iter().find(|&(i, j)| j - i > 2) {
            return Err(Error::InvalidDiagram(format!("arc ({i},{j}) is longer than 2")));
        }
        let mut factors = Vec::new();
        let mut r = n;
        while r > 1 {
            let mut j = r;
            while len(j) == Some(2) {
                j -= 1;
            }
            let kind = if len(j) == Some(1) { FactorKind::C } else { FactorKind::L };
            factors.push(Factor { kind, start: j - 1, len: r - j + 1 });
            r = j - 1;
        }
        factors.reverse();
        Ok(Decomposition { n, factors })
    }

    pub fn from_decomposition(d: &Decomposition) -> ArcDiagram {
        let mut left: Vec<usize> = (1..=d.n).collect();
        for f in &d.factors {
            if f.kind == FactorKind::C {
                left[f.start] = f.start;
            }
            for v in f.start + 2..=f.end() {
                left[v - 1] = v - 2;
            }
        }
        ArcDiagram { left }
    }
}

/// Every arc diagram of `g`, sources chosen lexicographically.
pub fn enumerate_arcs(g: &UnitIntervalGraph) -> Vec<ArcDiagram> {
    let mut out = vec![Vec::with_capacity(g.n())];
    for j in 1..=g.n() {
        out = out
            .into_iter()
            .flat_map(|left| {
                (g.left(j)..=j).map(move |i| {
                    let mut l = left.clone();
                    l.push(i);
                    l
                })
            })
            .collect();
    }
    out.into_iter().map(|left| ArcDiagram { left }).collect()
}

/// Component id (its least vertex, 0-based) per vertex.
pub(crate) fn components(left: &[usize]) -> Vec<usize> {
    let mut comp = Vec::with_capacity(left.len());
    for (k, &i) in left.iter().enumerate() {
        comp.push(if i == k + 1 { k } else { comp[i - 1] });
    }
    comp
}

/// Piece ids (0-based, numbered by first vertex) per vertex: a tic on the left arc
/// of `j` separates `j` and everything after it in the component from what precedes.
pub(crate) fn pieces(left: &[usize], tics: &[bool]) -> Vec<usize> {
    let n = left.len();
    let comp = components(left);
    let mut cuts = vec![0usize; n];
    let mut keys = Vec::with_capacity(n);
    for v in 0..n {
        if tics[v] {
            cuts[comp[v]] += 1;
        }
        keys.push((comp[v], cuts[comp[v]]));
    }
    let mut ids = Vec::with_capacity(n);
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for key in keys {
        let id = match seen.iter().position(|k| *k == key) {
            Some(p) => p,
            None => {
                seen.push(key);
                seen.len() - 1
            }
        };
        ids.push(id);
    }
    ids
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    /// interlacing: arcs `(i, i+2)` only
    L,
    /// interconnecting: an IL diagram plus the arc `(1, 2)`
    C,
}

/// One factor on vertices `start ..= start + len` (shared endpoints with neighbours).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub kind: FactorKind,
    pub start: usize,
    pub len: usize,
}

impl Factor {
    pub fn end(&self) -> usize {
        self.start + self.len
    }

    pub fn is_l(&self) -> bool {
        self.kind == FactorKind::L
    }

    pub fn is_c(&self) -> bool {
        self.kind == FactorKind::C
    }

    pub fn is_odd(&self) -> bool {
        self.len % 2 == 1
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.is_l() { 'L' } else { 'C' };
        write!(f, "{c}{}", self.len)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub n: usize,
    pub factors: Vec<Factor>,
}

impl Decomposition {
    pub fn length(&self) -> usize {
        self.n - 1
    }

    /// Runs of factors between `L_1`s; may be empty at either end or between two `L_1`s.
    pub fn sections(&self) -> Vec<&[Factor]> {
        self.factors.split(|f| f.is_l() && f.len == 1).collect()
    }

    /// Position of factor `k` inside its section.
    pub fn index_in_section(&self, k: usize) -> usize {
        self.factors[..k].iter().rev().take_while(|f| !(f.is_l() && f.len == 1)).count()
    }

    pub fn last(&self) -> Option<&Factor> {
        self.factors.last()
    }
}

/// A section starts with two IC factors.
pub fn ic_condition(section: &[Factor]) -> bool {
    section.len() >= 2 && section[0].is_c() && section[1].is_c()
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("-");
        }
        for (k, x) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str("·")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// An arc diagram with tic marks, a permutation labeling increasing on every piece,
/// and one star per connected component inside its right-most piece.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledDiagram {
    left: Vec<usize>,
    tics: Vec<bool>,
    labels: Vec<usize>,
    stars: Vec<bool>,
}

impl LabeledDiagram {
    /// Checked constructor: `tics[v-1]` marks the left arc of `v`, `labels[v-1]` is `δ(v)`.
    pub fn new(arcs: ArcDiagram, tics: Vec<bool>, labels: Vec<usize>, stars: Vec<bool>) -> Result<Self> {
        let d = LabeledDiagram { left: arcs.left, tics, labels, stars };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn from_raw(left: Vec<usize>, tics: Vec<bool>, labels: Vec<usize>, stars: Vec<bool>) -> Result<Self> {
        let d = LabeledDiagram { left, tics, labels, stars };
        d.validate()?;
        Ok(d)
    }

    /// The only diagram on one vertex.
    pub fn single() -> Self {
        LabeledDiagram { left: vec![1], tics: vec![false], labels: vec![1], stars: vec![true] }
    }

    fn validate(&self) -> Result<()> {
        let n = self.left.len();
        let bad = |m: String| Err(Error::InvalidDiagram(m));
        if n == 0 {
            return bad("no vertices".into());
        }
        if self.tics.len() != n || self.labels.len() != n || self.stars.len() != n {
            return bad("field lengths differ".into());
        }
        for (k, &i) in self.left.iter().enumerate() {
            if i == 0 || i > k + 1 {
                return bad(format!("left end {i} of vertex {} out of range", k + 1));
            }
            if self.tics[k] && i == k + 1 {
                return bad(format!("tic on vertex {} without a left arc", k + 1));
            }
        }
        let mut seen = vec![false; n];
        for &l in &self.labels {
            if l == 0 || l > n || seen[l - 1] {
                return bad("labels are not a permutation".into());
            }
            seen[l - 1] = true;
        }
        let piece = pieces(&self.left, &self.tics);
        let comp = components(&self.left);
        let mut last_label = vec![0usize; n];
        for v in 0..n {
            if self.labels[v] < last_label[piece[v]] {
                return bad(format!("labels decrease inside the piece of vertex {}", v + 1));
            }
            last_label[piece[v]] = self.labels[v];
        }
        let mut right_piece = vec![usize::MAX; n];
        for v in 0..n {
            right_piece[comp[v]] = piece[v];
        }
        let mut star_count = vec![0usize; n];
        for v in 0..n {
            if self.stars[v] {
                if piece[v] != right_piece[comp[v]] {
                    return bad(format!("star on vertex {} is not in its component's right-most piece", v + 1));
                }
                star_count[comp[v]] += 1;
            }
        }
        for v in 0..n {
            if comp[v] == v && star_count[v] != 1 {
                return bad(format!("component of vertex {} has {} stars", v + 1, star_count[v]));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.left.len()
    }

    pub fn arc_diagram(&self) -> ArcDiagram {
        ArcDiagram { left: self.left.clone() }
    }

    pub fn left_arc(&self, v: usize) -> Option<usize> {
        let i = self.left[v - 1];
        (i != v).then_some(i)
    }

    pub fn is_ticked(&self, v: usize) -> bool {
        self.tics[v - 1]
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v - 1]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn is_starred(&self, v: usize) -> bool {
        self.stars[v - 1]
    }

    pub(crate) fn raw(&self) -> (&[usize], &[bool], &[usize], &[bool]) {
        (&self.left, &self.tics, &self.labels, &self.stars)
    }

    /// Number of tic marks.
    pub fn t(&self) -> usize {
        self.tics.iter().filter(|&&x| x).count()
    }

    /// Tic marks on left arcs of vertices in `lo ..= hi`.
    pub fn tics_between(&self, lo: usize, hi: usize) -> usize {
        (lo..=hi).filter(|&v| self.tics[v - 1]).count()
    }

    /// Component id per vertex (least member, 1-based).
    pub fn component_of(&self, v: usize) -> usize {
        components(&self.left)[v - 1] + 1
    }

    /// Vertices of the component containing `v`, ascending.
    pub fn component_vertices(&self, v: usize) -> Vec<usize> {
        let comp = components(&self.left);
        let c = comp[v - 1];
        (1..=self.n()).filter(|&u| comp[u - 1] == c).collect()
    }

    /// Vertices of the piece containing `v`, ascending.
    pub fn piece_vertices(&self, v: usize) -> Vec<usize> {
        let piece = pieces(&self.left, &self.tics);
        let p = piece[v - 1];
        (1..=self.n()).filter(|&u| piece[u - 1] == p).collect()
    }

    /// The pieces, as a set partition.
    pub fn pi(&self) -> SetPartition {
        SetPartition::from_tags(&pieces(&self.left, &self.tics))
    }

    /// `s`: rank from the right of the star within the component of `v`.
    pub fn star_pos(&self, v: usize) -> Option<usize> {
        let vs = self.component_vertices(v);
        vs.iter().rev().position(|&u| self.stars[u - 1]).map(|p| p + 1)
    }

    pub fn decompose(&self) -> Result<Decomposition> {
        self.arc_diagram().decompose()
    }

    /// `s(L)` for an IL factor: the star rank of the component ending at the factor's
    /// second-to-last vertex.
    pub fn s_of(&self, f: &Factor) -> Option<usize> {
        self.star_pos(f.end() - 1)
    }

    /// The prefix on vertices `1..=r` with labels standardized to `1..=r`; when the
    /// component of `r` has its star further right, `r` itself is starred.
    pub fn prefix(&self, r: usize) -> LabeledDiagram {
        let mut sorted: Vec<usize> = self.labels[..r].to_vec();
        sorted.sort_unstable();
        let labels = self.labels[..r].iter().map(|l| sorted.binary_search(l).unwrap() + 1).collect();
        let mut stars = self.stars[..r].to_vec();
        let comp = components(&self.left);
        let c = comp[r - 1];
        if !(0..r).any(|u| comp[u] == c && self.stars[u]) {
            stars[r - 1] = true;
        }
        LabeledDiagram { left: self.left[..r].to_vec(), tics: self.tics[..r].to_vec(), labels, stars }
    }
}

/// Tic-free and FP1–FP5.
pub fn is_fixed_point(d: &LabeledDiagram) -> bool {
    if d.t() > 0 {
        return false;
    }
    let Ok(dec) = d.decompose() else { return false };
    fixed_point_conditions(d, &dec)
}

fn fixed_point_conditions(d: &LabeledDiagram, dec: &Decomposition) -> bool {
    let n = d.n();
    let s = |f: &Factor| d.s_of(f).unwrap_or(0);
    // FP1
    let secs = dec.sections();
    let (last, rest) = secs.split_last().expect("split yields at least one slice");
    if !rest.iter().all(|sec| ic_condition(sec)) {
        return false;
    }
    if !(last.is_empty() || ic_condition(last) || (last.len() == 1 && last[0].is_c())) {
        return false;
    }
    let fs = &dec.factors;
    for (k, f) in fs.iter().enumerate() {
        if !f.is_l() {
            continue;
        }
        // FP2
        if f.is_odd() && f.end() < n && s(f) == 1 {
            return false;
        }
        // FP3
        if fs.get(k + 1).is_some_and(|g| g.is_l()) && s(f) == 1 {
            return false;
        }
        // FP4
        if f.is_odd() && s(f) == 2 {
            return false;
        }
        // FP5
        if f.is_odd() && k >= 1 && fs[k - 1].is_c() && s(f) == 3 {
            let excused_by_l = k >= 2 && fs[k - 2].is_l() && s(&fs[k - 2]) == 1;
            let early = dec.index_in_section(k - 1) < 2;
            if !(excused_by_l || early) {
                return false;
            }
        }
    }
    true
}

/// Fixed point of positive length whose sections all satisfy the IC-condition and
/// whose trailing IL factor, if any, has length ≥ 2 and `s ≠ 1`.
pub fn star_cond(p: &LabeledDiagram) -> bool {
    if p.n() < 2 || !is_fixed_point(p) {
        return false;
    }
    let dec = p.decompose().expect("fixed points decompose");
    if !dec.sections().iter().all(|sec| ic_condition(sec)) {
        return false;
    }
    match dec.last() {
        Some(f) if f.is_l() => f.len >= 2 && p.s_of(f) != Some(1),
        _ => true,
    }
}

/// `*`-condition, ending in an IC factor that is not among the first two of its
/// section, and not directly after an IL factor with `s = 1`.
pub fn starstar_cond(p: &LabeledDiagram) -> bool {
    if !star_cond(p) {
        return false;
    }
    let dec = p.decompose().expect("fixed points decompose");
    let k = dec.factors.len() - 1;
    let last = &dec.factors[k];
    if !last.is_c() || dec.index_in_section(k) < 2 {
        return false;
    }
    !(k >= 1 && dec.factors[k - 1].is_l() && p.s_of(&dec.factors[k - 1]) == Some(1))
}

/// Which rule of the involution applies to a diagram over `TL_n`, `n ≥ 2`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    Inductive,
    C1a,
    C1b,
    Fix1,
    C3a,
    C4a,
    Fix2,
    C6a,
    C7b,
    C8b,
    C4b,
    C3b,
    Fix3,
    C6b,
    C7a,
    C8a,
    Fix4,
    Fix5,
    Fix6,
}

impl CaseId {
    pub const ALL: [CaseId; 19] = [
        CaseId::Inductive,
        CaseId::C1a,
        CaseId::C1b,
        CaseId::Fix1,
        CaseId::C3a,
        CaseId::C4a,
        CaseId::Fix2,
        CaseId::C6a,
        CaseId::C7b,
        CaseId::C8b,
        CaseId::C4b,
        CaseId::C3b,
        CaseId::Fix3,
        CaseId::C6b,
        CaseId::C7a,
        CaseId::C8a,
        CaseId::Fix4,
        CaseId::Fix5,
        CaseId::Fix6,
    ];

    pub fn is_fixed(self) -> bool {
        matches!(self, CaseId::Fix1 | CaseId::Fix2 | CaseId::Fix3 | CaseId::Fix4 | CaseId::Fix5 | CaseId::Fix6)
    }

    /// The case the involution sends this one to.
    pub fn partner(self) -> CaseId {
        use CaseId::*;
        match self {
            C1a => C1b,
            C1b => C1a,
            C3a => C3b,
            C3b => C3a,
            C4a => C4b,
            C4b => C4a,
            C6a => C6b,
            C6b => C6a,
            C7a => C7b,
            C7b => C7a,
            C8a => C8b,
            C8b => C8a,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        use CaseId::*;
        match self {
            Inductive => "inductive",
            C1a => "1a",
            C1b => "1b",
            Fix1 => "fix1",
            C3a => "3a",
            C4a => "4a",
            Fix2 => "fix2",
            C6a => "6a",
            C7b => "7b",
            C8b => "8b",
            C4b => "4b",
            C3b => "3b",
            Fix3 => "fix3",
            C6b => "6b",
            C7a => "7a",
            C8a => "8a",
            Fix4 => "fix4",
            Fix5 => "fix5",
            Fix6 => "fix6",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let key = key.strip_prefix('c').filter(|k| k.starts_with(|c: char| c.is_ascii_digit())).unwrap_or(&key);
        CaseId::ALL.into_iter().find(|c| c.name() == key).ok_or_else(|| Error::parse(0, format!("unknown case {s:?}")))
    }
}

/// The pieces of the last factor `Q = C_k` counted inside `Q` (its `k + 1` vertices).
pub(crate) fn pieces_within(d: &LabeledDiagram, q: &Factor) -> Vec<usize> {
    let mut sizes = vec![1];
    for v in q.start + 1..=q.end() {
        if d.is_ticked(v) {
            sizes.push(1);
        } else {
            *sizes.last_mut().unwrap() += 1;
        }
    }
    sizes
}

/// Splits `d = P·Q` at the last factor and picks the matching table row.
pub fn classify_case(d: &LabeledDiagram) -> Result<CaseId> {
    use CaseId::*;
    if d.n() < 2 {
        return Err(Error::Unclassified("a single vertex has no last factor".into()));
    }
    let dec = d.decompose()?;
    let q = *dec.last().expect("n ≥ 2");
    let r = q.start;
    let p = d.prefix(r);
    if !is_fixed_point(&p) {
        return Ok(Inductive);
    }
    let pdec = p.decompose()?;
    let tq = d.tics_between(r + 1, d.n());
    let p2 = pdec.last().copied();

    let group_a = match p2 {
        None => true,
        Some(f) if f.is_l() => f.len == 1 && p.s_of(&f) != Some(1),
        Some(_) => !ic_condition(pdec.sections().last().unwrap()),
    };
    if group_a {
        return Ok(match (q.kind, tq) {
            (FactorKind::C, 0) => Fix1,
            (FactorKind::C, _) => C1a,
            (FactorKind::L, _) => C1b,
        });
    }
    let p2 = p2.unwrap();
    if p2.is_l() && p.s_of(&p2) == Some(1) {
        return Ok(match (q.kind, tq) {
            (FactorKind::C, 0) if p2.is_odd() => C4a,
            (FactorKind::C, 0) => Fix2,
            (FactorKind::C, _) => C3a,
            (FactorKind::L, _) => C6a,
        });
    }
    if !star_cond(&p) {
        return Err(Error::Unclassified(format!("{d}: fixed prefix fails every table row")));
    }
    Ok(match q.kind {
        FactorKind::C => match tq {
            0 => Fix3,
            1 => {
                let a = pieces_within(d, &q);
                match a[0].cmp(&a[1]) {
                    std::cmp::Ordering::Equal => C7b,
                    std::cmp::Ordering::Greater => C8b,
                    std::cmp::Ordering::Less => C4b,
                }
            }
            _ => C3b,
        },
        FactorKind::L if tq > 0 => C6b,
        FactorKind::L if !q.is_odd() => Fix6,
        FactorKind::L => match d.s_of(&q) {
            Some(2) => C7a,
            Some(3) if starstar_cond(&p) => C8a,
            Some(3) => Fix4,
            _ => Fix5,
        },
    })
}

/// Visits every labeled, starred, tic-marked refinement of `arcs` in a fixed order:
/// tic subsets by bitmask over arcs (ordered by right endpoint), then label
/// assignments (label 1's piece first, lexicographically), then stars left to right.
pub fn for_each_labeled(arcs: &ArcDiagram, mut f: impl FnMut(&LabeledDiagram)) {
    let n = arcs.n();
    let arc_heads: Vec<usize> = arcs.arcs().iter().map(|&(_, j)| j).collect();
    let comp = components(&arcs.left);
    for mask in 0u64..(1u64 << arc_heads.len()) {
        let mut tics = vec![false; n];
        for (b, &j) in arc_heads.iter().enumerate() {
            tics[j - 1] = mask >> b & 1 == 1;
        }
        let piece = pieces(&arcs.left, &tics);
        let num_pieces = piece.iter().max().map_or(0, |m| m + 1);
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); num_pieces];
        for v in 0..n {
            members[piece[v]].push(v);
        }
        // star candidates: vertices of each component's right-most piece
        let mut right_piece = vec![usize::MAX; n];
        for v in 0..n {
            right_piece[comp[v]] = piece[v];
        }
        let star_slots: Vec<Vec<usize>> =
            (0..n).filter(|&v| comp[v] == v).map(|c| members[right_piece[c]].clone()).collect();

        let mut labels = vec![0usize; n];
        let mut fill = vec![0usize; num_pieces];
        let mut d =
            LabeledDiagram { left: arcs.left.clone(), tics: tics.clone(), labels: vec![0; n], stars: vec![false; n] };
        assign_labels(1, n, &members, &mut fill, &mut labels, &mut |labels| {
            d.labels.copy_from_slice(labels);
            for_each_star(&star_slots, 0, &mut d, &mut f);
        });
    }
}

fn assign_labels(
    label: usize,
    n: usize,
    members: &[Vec<usize>],
    fill: &mut [usize],
    labels: &mut [usize],
    f: &mut dyn FnMut(&[usize]),
) {
    if label > n {
        f(labels);
        return;
    }
    for p in 0..members.len() {
        if fill[p] < members[p].len() {
            labels[members[p][fill[p]]] = label;
            fill[p] += 1;
            assign_labels(label + 1, n, members, fill, labels, f);
            fill[p] -= 1;
        }
    }
}

fn for_each_star(slots: &[Vec<usize>], k: usize, d: &mut LabeledDiagram, f: &mut impl FnMut(&LabeledDiagram)) {
    if k == slots.len() {
        f(d);
        return;
    }
    for &v in &slots[k] {
        d.stars[v] = true;
        for_each_star(slots, k + 1, d, f);
        d.stars[v] = false;
    }
}

/// All of `𝒜′_L(g)` in the order of [`enumerate_arcs`] then [`for_each_labeled`].
pub fn enumerate_labeled(g: &UnitIntervalGraph) -> Vec<LabeledDiagram> {
    let mut out = Vec::new();
    for arcs in enumerate_arcs(g) {
        for_each_labeled(&arcs, |d| out.push(d.clone()));
    }
    out
}

impl fmt::Display for LabeledDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.stars {
            f.write_str(if s { "*" } else { "." })?;
        }
        f.write_str(" | ")?;
        let arcs: Vec<String> = (1..=self.n())
            .filter_map(|v| self.left_arc(v).map(|i| format!("({i},{v}){}", if self.tics[v - 1] { "!" } else { "" })))
            .collect();
        if arcs.is_empty() {
            f.write_str("-")?;
        } else {
            f.write_str(&arcs.join(" "))?;
        }
        f.write_str(" | ")?;
        let sep = if self.n() > 9 { "," } else { "" };
        let labels: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        f.write_str(&labels.join(sep))
    }
}

impl fmt::Debug for LabeledDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledDiagram({self})")
    }
}

impl FromStr for LabeledDiagram {
    type Err = Error;

    /// Reads `..*.* | (1,2) (1,3)! | 21345`; `-` for no arcs; comma-separated labels
    /// are accepted (and required once labels exceed 9).
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('|').collect();
        if parts.len() != 3 {
            return Err(Error::parse(0, "expected three '|'-separated fields"));
        }
        let offset = |p: &str| p.as_ptr() as usize - s.as_ptr() as usize;
        let star_field = parts[0].trim();
        let n = star_field.chars().count();
        if n == 0 || n > MAX_DIAGRAM_VERTICES {
            return Err(Error::parse(0, format!("need 1..={MAX_DIAGRAM_VERTICES} vertices")));
        }
        let mut stars = Vec::with_capacity(n);
        for (k, c) in star_field.chars().enumerate() {
            match c {
                '.' => stars.push(false),
                '*' => stars.push(true),
                _ => return Err(Error::parse(offset(parts[0]) + k, format!("unexpected {c:?} in vertex marks"))),
            }
        }

        let mut left: Vec<usize> = (1..=n).collect();
        let mut tics = vec![false; n];
        let arc_field = parts[1].trim();
        let arc_pos = offset(parts[1]);
        if arc_field != "-" {
            for tok in arc_field.split_whitespace() {
                let (body, tic) = match tok.strip_suffix('!') {
                    Some(b) => (b, true),
                    None => (tok, false),
                };
                let inner = body
                    .strip_prefix('(')
                    .and_then(|b| b.strip_suffix(')'))
                    .ok_or_else(|| Error::parse(arc_pos, format!("bad arc {tok:?}")))?;
                let (a, b) = inner.split_once(',').ok_or_else(|| Error::parse(arc_pos, format!("bad arc {tok:?}")))?;
                let num =
                    |x: &str| x.trim().parse::<usize>().map_err(|_| Error::parse(arc_pos, format!("bad arc {tok:?}")));
                let (i, j) = (num(a)?, num(b)?);
                if !(1 <= i && i < j && j <= n) {
                    return Err(Error::parse(arc_pos, format!("arc {tok:?} out of range")));
                }
                if left[j - 1] != j {
                    return Err(Error::parse(arc_pos, format!("vertex {j} has two left arcs")));
                }
                left[j - 1] = i;
                tics[j - 1] = tic;
            }
        }

        let label_field = parts[2].trim();
        let label_pos = offset(parts[2]);
        let labels: Vec<usize> = if label_field.contains(',') {
            label_field
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| Error::parse(label_pos, format!("bad label {x:?}"))))
                .collect::<Result<_>>()?
        } else {
            label_field
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::parse(label_pos, format!("bad label {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        if labels.len() != n {
            return Err(Error::parse(label_pos, format!("{} labels for {n} vertices", labels.len())));
        }
        LabeledDiagram::from_raw(left, tics, labels, stars).map_err(|e| match e {
            Error::InvalidDiagram(m) => Error::parse(0, m),
            other => other,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramWire {
    n: usize,
    arcs: Vec<[usize; 2]>,
    tics: Vec<[usize; 2]>,
    labels: Vec<usize>,
    stars: Vec<usize>,
}

impl Serialize for LabeledDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let arcs: Vec<[usize; 2]> = self.arc_diagram().arcs().iter().map(|&(i, j)| [i, j]).collect();
        DiagramWire {
            n: self.n(),
            tics: arcs.iter().copied().filter(|a| self.tics[a[1] - 1]).collect(),
            arcs,
            labels: self.labels.clone(),
            stars: (1..=self.n()).filter(|&v| self.stars[v - 1]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = DiagramWire::deserialize(d)?;
        LabeledDiagram::try_from(w).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<DiagramWire> for LabeledDiagram {
    type Error = Error;

    fn try_from(w: DiagramWire) -> Result<Self> {
        if w.n == 0 || w.n > MAX_DIAGRAM_VERTICES {
            return Err(Error::InvalidDiagram(format!("need 1..={MAX_DIAGRAM_VERTICES} vertices")));
        }
        let arcs: Vec<(usize, usize)> = w.arcs.iter().map(|a| (a[0], a[1])).collect();
        let ad = ArcDiagram::from_arcs(w.n, &arcs)?;
        let mut tics = vec![false; w.n];
        for t in &w.tics {
            if !arcs.contains(&(t[0], t[1])) {
                return Err(Error::InvalidDiagram(format!("tic on missing arc ({},{})", t[0], t[1])));
            }
            tics[t[1] - 1] = true;
        }
        let mut stars = vec![false; w.n];
        for &v in &w.stars {
            if v == 0 || v > w.n {
                return Err(Error::InvalidDiagram(format!("star on missing vertex {v}")));
            }
            stars[v - 1] = true;
        }
        LabeledDiagram::new(ad, tics, w.labels, stars)
    }
}

impl LabeledDiagram {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::parse(e.column(), e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> LabeledDiagram {
        s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    fn tl(n: usize) -> UnitIntervalGraph {
        UnitIntervalGraph::tl(n).unwrap()
    }

    #[test]
    fn arc_counts() {
        assert_eq!(enumerate_arcs(&tl(1)).len(), 1);
        assert_eq!(enumerate_arcs(&tl(3)).len(), 6);
        assert_eq!(enumerate_arcs(&tl(4)).len(), 18);
        let g = UnitIntervalGraph::from_intervals(&[1, 1, 2, 2, 4]).unwrap();
        let want: usize = (1..=5).map(|j| j - g.left(j) + 1).product();
        assert_eq!(enumerate_arcs(&g).len(), want);
        assert!(enumerate_arcs(&g).iter().all(|a| a.fits(&g)));
    }

    #[test]
    fn fig2_partitions() {
        // arcs of the figure: (1,2),(5,6) and the length-2 arcs ending at 3, 5, 7
        let a = ArcDiagram::from_arcs(7, &[(1, 2), (1, 3), (3, 5), (5, 6), (5, 7)]).unwrap();
        assert_eq!(a.pi().to_string(), "123567/4");
        let mut tics = vec![false; 7];
        tics[5] = true; // the tic'd length-1 arc (5,6)
        let ld_pieces = pieces(&a.left, &tics);
        assert_eq!(SetPartition::from_tags(&ld_pieces).to_string(), "1235/4/67");
        assert_eq!(ArcDiagram::empty(3).pi().to_string(), "1/2/3");
    }

    #[test]
    fn decompositions() {
        // L3, C3 and L2·L1·C1·C2
        let l3 = ArcDiagram::from_arcs(4, &[(1, 3), (2, 4)]).unwrap();
        assert_eq!(l3.decompose().unwrap().to_string(), "L3");
        let c3 = ArcDiagram::from_arcs(4, &[(1, 2), (1, 3), (2, 4)]).unwrap();
        assert_eq!(c3.decompose().unwrap().to_string(), "C3");
        let w = ArcDiagram::from_arcs(7, &[(1, 3), (4, 5), (5, 6), (5, 7)]).unwrap();
        let dec = w.decompose().unwrap();
        assert_eq!(dec.to_string(), "L2·L1·C1·C2");
        assert_eq!(dec.sections().len(), 2);
        assert_eq!(ArcDiagram::empty(3).decompose().unwrap().to_string(), "L1·L1");
        assert!(ArcDiagram::from_arcs(4, &[(1, 4)]).unwrap().decompose().is_err());
        assert_eq!(ArcDiagram::empty(1).decompose().unwrap().factors, vec![]);
    }

    #[test]
    fn decomposition_round_trips() {
        for n in 1..=8 {
            for a in enumerate_arcs(&tl(n)) {
                let dec = a.decompose().unwrap();
                assert_eq!(dec.factors.iter().map(|f| f.len).sum::<usize>(), n - 1);
                assert_eq!(ArcDiagram::from_decomposition(&dec), a);
            }
        }
    }

    #[test]
    fn single_section_without_ic() {
        let l2 = ArcDiagram::from_arcs(3, &[(1, 3)]).unwrap().decompose().unwrap();
        assert_eq!(l2.sections().len(), 1);
        assert!(!ic_condition(l2.sections()[0]));
    }

    #[test]
    fn k2_labeled_diagrams() {
        let all = enumerate_labeled(&tl(2));
        let shown: Vec<String> = all.iter().map(|x| x.to_string()).collect();
        assert_eq!(
            shown,
            vec![
                "*. | (1,2) | 12",
                ".* | (1,2) | 12",
                ".* | (1,2)! | 12",
                ".* | (1,2)! | 21",
                "** | - | 12",
                "** | - | 21",
            ]
        );
        assert_eq!(enumerate_labeled(&tl(1)), vec![LabeledDiagram::single()]);
    }

    #[test]
    fn tic_subsets_count() {
        for a in enumerate_arcs(&tl(5)) {
            let mut seen = std::collections::BTreeSet::new();
            for_each_labeled(&a, |x| {
                seen.insert(x.tics.clone());
            });
            assert_eq!(seen.len(), 1 << a.num_arcs());
        }
    }

    #[test]
    fn labeled_enumeration_matches_filter() {
        // oracle: all (tics, permutation, star set) triples filtered by the invariants
        use crate::partitions::Permutation;
        for n in 1..=4 {
            let mut brute = Vec::new();
            for a in enumerate_arcs(&tl(n)) {
                let heads: Vec<usize> = a.arcs().iter().map(|&(_, j)| j).collect();
                for mask in 0..(1u32 << heads.len()) {
                    let mut tics = vec![false; n];
                    for (b, &j) in heads.iter().enumerate() {
                        tics[j - 1] = mask >> b & 1 == 1;
                    }
                    for perm in Permutation::all(n) {
                        for smask in 0..(1u32 << n) {
                            let stars = (0..n).map(|v| smask >> v & 1 == 1).collect();
                            if let Ok(x) = LabeledDiagram::new(a.clone(), tics.clone(), perm.word().to_vec(), stars) {
                                brute.push(x);
                            }
                        }
                    }
                }
            }
            let mut fast = enumerate_labeled(&tl(n));
            assert_eq!(fast.len(), brute.len(), "n={n}");
            fast.sort();
            brute.sort();
            assert_eq!(fast, brute);
        }
    }

    #[test]
    fn star_positions() {
        let x = d("** | - | 12");
        assert_eq!(x.star_pos(1), Some(1));
        assert_eq!(x.star_pos(2), Some(1));
        // the marked example: C1·C2·C1·L3 with s = 5
        let fig4 = d(".*.....* | (1,2) (2,3) (2,4) (4,5) (5,7) (6,8) | 12345678");
        let dec = fig4.decompose().unwrap();
        assert_eq!(dec.to_string(), "C1·C2·C1·L3");
        assert_eq!(fig4.s_of(dec.last().unwrap()), Some(5));
        assert!(ic_condition(dec.sections()[0]));
        assert!(is_fixed_point(&fig4));
    }

    #[test]
    fn fixed_point_basics() {
        assert!(is_fixed_point(&LabeledDiagram::single()));
        assert!(!is_fixed_point(&d(".* | (1,2)! | 12")));
        assert!(is_fixed_point(&d("*. | (1,2) | 12")));
        assert!(!is_fixed_point(&d("** | - | 12")));
        assert!(!star_cond(&LabeledDiagram::single()));
        // P ending in L1
        assert!(!star_cond(&d("*.* | (1,2) | 123")));
    }

    #[test]
    fn k2_cases() {
        assert_eq!(classify_case(&d("** | - | 12")).unwrap(), CaseId::C1b);
        assert_eq!(classify_case(&d(".* | (1,2)! | 21")).unwrap(), CaseId::C1a);
        assert_eq!(classify_case(&d("*. | (1,2) | 12")).unwrap(), CaseId::Fix1);
        assert!(classify_case(&LabeledDiagram::single()).is_err());
    }

    #[test]
    fn every_diagram_classifies() {
        for n in 2..=5 {
            for x in enumerate_labeled(&tl(n)) {
                classify_case(&x).unwrap_or_else(|e| panic!("{x}: {e}"));
            }
        }
    }

    #[test]
    fn prefix_standardizes_and_stars() {
        let x = d("..* | (1,2) (2,3)! | 231");
        assert_eq!(x.prefix(2).to_string(), ".* | (1,2) | 12");
        let y = d(".**. | (1,3) (2,4) | 2134");
        assert_eq!(y.prefix(1).to_string(), "* | - | 1");
        let z = d("*..* | (1,2) (3,4)! | 3412");
        assert_eq!(z.prefix(3).to_string(), "*.* | (1,2) | 231");
    }

    #[test]
    fn text_format_round_trip_and_rejects() {
        for x in enumerate_labeled(&tl(4)) {
            assert_eq!(x.to_string().parse::<LabeledDiagram>().unwrap(), x);
            assert_eq!(LabeledDiagram::from_json(&x.to_json()).unwrap(), x);
        }
        let wide = LabeledDiagram {
            left: (1..=10).collect(),
            tics: vec![false; 10],
            labels: (1..=10).rev().collect(),
            stars: vec![true; 10],
        };
        assert_eq!(wide.to_string(), "********** | - | 10,9,8,7,6,5,4,3,2,1");
        assert_eq!(wide.to_string().parse::<LabeledDiagram>().unwrap(), wide);
        for bad in [
            "",
            "** | - ",
            "*x | - | 12",
            "** | (1,2 | 12",
            "** | (2,1) | 12",
            "*** | (1,3) (2,3) | 123",
            "** | - | 11",
            "** | - | 123",
            ".. | - | 12",
            "*. | (1,2)! | 12",
            "** | (1,2) | 12",
            ".* | (1,2) | 21",
        ] {
            assert!(bad.parse::<LabeledDiagram>().is_err(), "{bad:?}");
        }
        assert_eq!(d("*. | (1,2) | 12").to_json(), r#"{"n":2,"arcs":[[1,2]],"tics":[],"labels":[1,2],"stars":[1]}"#);
        assert!(LabeledDiagram::from_json(r#"{"n":2,"arcs":[],"tics":[[1,2]],"labels":[1,2],"stars":[1,2]}"#).is_err());
    }

    #[test]
    fn case_names_parse() {
        for c in CaseId::ALL {
            assert_eq!(c.name().parse::<CaseId>().unwrap(), c);
            assert_eq!(c.partner().partner(), c);
        }
        assert_eq!("C7a".parse::<CaseId>().unwrap(), CaseId::C7a);
        assert!("9z".parse::<CaseId>().is_err());
    }
}
