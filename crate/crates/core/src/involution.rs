//! The sign-reversing involution φ on `𝒜′_L(TL_n)` and a harness that checks it.
//!
//! Every non-inductive part rewrites a suffix of the diagram ("the region") and
//! moves whole pieces: a piece keeps its label set (sorted onto its new vertices)
//! and its star, at the same rank from the right inside the piece.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chromatic::y_semisym_main;
use crate::diagrams::{
    classify_case, components, enumerate_arcs, for_each_labeled, is_fixed_point, pieces, pieces_within, CaseId, Factor,
    FactorKind, LabeledDiagram,
};
use crate::error::{Error, Result};
use crate::graphs::UnitIntervalGraph;
use crate::ncsym::SemiSymE;
use crate::partitions::{ClassKey, SetPartition};

/// Stored violation messages are capped; `violation_count` keeps the full tally.
const MAX_REPORTED: usize = 200;

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct PairingReport {
    pub n: usize,
    pub total: u64,
    pub pairs: u64,
    pub fixed: u64,
    pub violation_count: u64,
    pub violations: Vec<String>,
}

impl PairingReport {
    pub fn ok(&self) -> bool {
        self.violation_count == 0
    }

    fn violate(&mut self, msg: String) {
        self.violation_count += 1;
        if self.violations.len() < MAX_REPORTED {
            self.violations.push(msg);
        }
    }

    fn merge(mut self, o: PairingReport) -> PairingReport {
        self.total += o.total;
        self.pairs += o.pairs;
        self.fixed += o.fixed;
        self.violation_count += o.violation_count;
        for v in o.violations {
            if self.violations.len() < MAX_REPORTED {
                self.violations.push(v);
            }
        }
        self
    }
}

/// Mutable working copy of a diagram's arcs and tics.
struct Shape {
    left: Vec<usize>,
    tics: Vec<bool>,
}

impl Shape {
    fn of(d: &LabeledDiagram) -> Self {
        let (left, tics, _, _) = d.raw();
        Shape { left: left.to_vec(), tics: tics.to_vec() }
    }

    /// Clears vertices `from..=n` (arcs and tics).
    fn clear_from(&mut self, from: usize) {
        for v in from..=self.left.len() {
            self.left[v - 1] = v;
            self.tics[v - 1] = false;
        }
    }

    /// Writes the arcs of one factor on `start ..= start + len`.
    fn put(&mut self, kind: FactorKind, start: usize, len: usize) {
        if len == 0 {
            return;
        }
        if kind == FactorKind::C {
            self.left[start] = start;
        }
        for v in start + 2..=start + len {
            self.left[v - 1] = v - 2;
        }
    }

    /// Tics the left arc of each listed vertex.
    fn cut(&mut self, vs: impl IntoIterator<Item = usize>) {
        for v in vs {
            debug_assert!(self.left[v - 1] != v);
            self.tics[v - 1] = true;
        }
    }

    /// Cuts the component of `v` into consecutive runs of the given sizes,
    /// counted from `v`'s position onward.
    fn cut_runs(&mut self, v: usize, sizes: &[usize]) {
        let comp = components(&self.left);
        let c = comp[v - 1];
        let run: Vec<usize> = (v..=self.left.len()).filter(|&u| comp[u - 1] == c).collect();
        let mut at = 0;
        for s in &sizes[..sizes.len() - 1] {
            at += s;
            self.tics[run[at] - 1] = true;
        }
        debug_assert_eq!(at + sizes.last().unwrap(), run.len());
    }
}

/// Vertices of each piece, ascending, indexed by piece id.
fn piece_members(left: &[usize], tics: &[bool]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let ids = pieces(left, tics);
    let k = ids.iter().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); k];
    for (v, &p) in ids.iter().enumerate() {
        members[p].push(v + 1);
    }
    (ids, members)
}

/// Pieces of the component containing `v`, left to right, as first vertices.
fn comp_piece_heads(d: &LabeledDiagram, v: usize) -> Vec<usize> {
    let (left, tics, _, _) = d.raw();
    let (ids, members) = piece_members(left, tics);
    let comp = components(left);
    let mut heads: Vec<usize> = Vec::new();
    for u in 1..=d.n() {
        if comp[u - 1] == comp[v - 1] && members[ids[u - 1]][0] == u {
            heads.push(u);
        }
    }
    heads
}

/// Vertex carrying the star of `v`'s component.
fn star_of(d: &LabeledDiagram, v: usize) -> usize {
    *d.component_vertices(v).iter().find(|&&u| d.is_starred(u)).expect("every component is starred")
}

/// Builds the image diagram: `pairs` sends the old piece through `.0` to the new piece
/// through `.1`; pieces not listed must be unchanged as vertex sets. Stars in `drop`
/// disappear; each `(w, s)` in `add` stars rank `s` from the right of `w`'s component.
fn assemble(
    d: &LabeledDiagram,
    shape: Shape,
    pairs: &[(usize, usize)],
    drop: &[usize],
    add: &[(usize, usize)],
) -> Result<LabeledDiagram> {
    let n = d.n();
    let (old_left, old_tics, old_labels, old_stars) = d.raw();
    let (old_id, old_members) = piece_members(old_left, old_tics);
    let (new_id, new_members) = piece_members(&shape.left, &shape.tics);
    let bad = |m: String| Error::InvalidDiagram(format!("{d}: {m}"));

    let mut map = vec![usize::MAX; old_members.len()];
    for &(o, w) in pairs {
        map[old_id[o - 1]] = new_id[w - 1];
    }
    for (p, vs) in old_members.iter().enumerate() {
        if map[p] == usize::MAX {
            let q = new_id[vs[0] - 1];
            if &new_members[q] != vs {
                return Err(bad(format!("piece at {} changed without a pairing", vs[0])));
            }
            map[p] = q;
        }
        if new_members[map[p]].len() != vs.len() {
            return Err(bad(format!("piece at {} changes size", vs[0])));
        }
    }
    let mut hit = vec![false; new_members.len()];
    for &q in &map {
        if std::mem::replace(&mut hit[q], true) {
            return Err(bad("two pieces land on one".into()));
        }
    }

    let mut labels = vec![0; n];
    let mut stars = vec![false; n];
    for (p, vs) in old_members.iter().enumerate() {
        let mut ls: Vec<usize> = vs.iter().map(|&v| old_labels[v - 1]).collect();
        ls.sort_unstable();
        let target = &new_members[map[p]];
        for (&w, &l) in target.iter().zip(&ls) {
            labels[w - 1] = l;
        }
        for (k, &v) in vs.iter().rev().enumerate() {
            if old_stars[v - 1] && !drop.contains(&v) {
                stars[target[target.len() - 1 - k] - 1] = true;
            }
        }
    }
    let comp = components(&shape.left);
    for &(w, s) in add {
        let vs: Vec<usize> = (1..=n).filter(|&u| comp[u - 1] == comp[w - 1]).collect();
        if s == 0 || s > vs.len() {
            return Err(bad(format!("no rank {s} in the component of {w}")));
        }
        stars[vs[vs.len() - s] - 1] = true;
    }
    LabeledDiagram::from_raw(shape.left, shape.tics, labels, stars)
}

/// Pieces of the trailing IC factor `q` counted inside it, as first vertices.
fn q_heads(d: &LabeledDiagram, q: &Factor) -> Vec<usize> {
    let mut heads = vec![q.start];
    heads.extend((q.start + 1..=q.end()).filter(|&v| d.is_ticked(v)));
    heads
}

/// `φ(d)`.
pub fn phi(d: &LabeledDiagram) -> Result<LabeledDiagram> {
    if d.n() == 1 {
        return Ok(d.clone());
    }
    let case = classify_case(d)?;
    if case.is_fixed() {
        return Ok(d.clone());
    }
    let dec = d.decompose()?;
    let fs = &dec.factors;
    let q = *fs.last().unwrap();
    let p2 = (fs.len() >= 2).then(|| fs[fs.len() - 2]);
    use CaseId::*;
    match case {
        Inductive => inductive(d, q.start),
        C1a => part1_forward(d, q, p2),
        C1b => part1_backward(d, q, p2),
        C3a => part2_forward(d, q, p2.unwrap()),
        C3b => part2_backward(d, q),
        C4a => part3_forward(d, q, p2.unwrap()),
        C4b => part3_backward(d, q),
        C6a => part4_forward(d, q),
        C6b => part4_backward(d, q),
        C7b => part5_forward(d, q),
        C7a => part5_backward(d, q),
        C8b => part6_forward(d, q),
        C8a => part6_backward(d, q, p2.unwrap()),
        _ => unreachable!("fixed cases returned above"),
    }
}

/// `P·Q ↦ φ(P)·Q`, restoring `P`'s labels and dropping the stand-in star at `r`.
fn inductive(d: &LabeledDiagram, r: usize) -> Result<LabeledDiagram> {
    let p = d.prefix(r);
    let fp = phi(&p)?;
    let (left, tics, labels, stars) = d.raw();
    let (pl, pt, plab, pst) = fp.raw();
    let mut set: Vec<usize> = labels[..r].to_vec();
    set.sort_unstable();
    let stand_in = star_of(d, r) > r;
    let mut nl = pl.to_vec();
    nl.extend_from_slice(&left[r..]);
    let mut nt = pt.to_vec();
    nt.extend_from_slice(&tics[r..]);
    let mut nlab: Vec<usize> = plab.iter().map(|&l| set[l - 1]).collect();
    nlab.extend_from_slice(&labels[r..]);
    let mut ns = pst.to_vec();
    if stand_in {
        ns[r - 1] = false;
    }
    ns.extend_from_slice(&stars[r..]);
    LabeledDiagram::from_raw(nl, nt, nlab, ns)
}

/// Start of the part-1 region and the length `m` of its leading IC factor.
fn part1_region(q: &Factor, p2: Option<Factor>) -> (usize, usize) {
    match p2 {
        Some(f) if f.is_c() => (f.start, f.len),
        _ => (q.start, 0),
    }
}

fn part1_split(alpha: &[usize]) -> usize {
    let l = alpha.len();
    if l == 2 {
        return 1;
    }
    (1..=l - 2).find(|&i| alpha[..i].iter().sum::<usize>() >= alpha[i + 1..].iter().sum::<usize>()).unwrap_or(l - 1)
}

fn sizes_of(d: &LabeledDiagram, heads: &[usize]) -> Vec<usize> {
    heads.iter().map(|&h| d.piece_vertices(h).len()).collect()
}

fn part1_forward(d: &LabeledDiagram, q: Factor, p2: Option<Factor>) -> Result<LabeledDiagram> {
    let n = d.n();
    let (r0, m) = part1_region(&q, p2);
    let heads = comp_piece_heads(d, r0);
    let alpha = sizes_of(d, &heads);
    let l = alpha.len();
    let j = part1_split(&alpha);
    let a: usize = alpha[j..].iter().sum();
    let b: usize = alpha[..j].iter().sum();
    let (x, y) = if a > b { (a - b - 1, 2 * b) } else { (b - a, 2 * a - 1) };

    let mut sh = Shape::of(d);
    sh.clear_from(r0 + 1);
    sh.put(FactorKind::C, r0, x);
    sh.put(FactorKind::L, r0 + x, y);
    let first_of = |sh: &Shape, end: usize| {
        let comp = components(&sh.left);
        (r0..=n).find(|&u| comp[u - 1] == comp[end - 1]).unwrap()
    };
    let (ha, hb) = (first_of(&sh, n), first_of(&sh, n - 1));
    let a_sizes = alpha[j..].to_vec();
    let b_sizes: Vec<usize> = alpha[..j].iter().rev().copied().collect();
    sh.cut_runs(ha, &a_sizes);
    sh.cut_runs(hb, &b_sizes);

    let new_a = run_heads(&sh, ha);
    let new_b = run_heads(&sh, hb);
    let mut pairs = Vec::with_capacity(l);
    for (i, &h) in heads.iter().enumerate() {
        let w = if i >= j { new_a[i - j] } else { new_b[j - 1 - i] };
        pairs.push((h, w));
    }
    assemble(d, sh, &pairs, &[], &[(n - 1, alpha[0] - m)])
}

/// Piece heads of the component through `v`, from `v` rightward.
fn run_heads(sh: &Shape, v: usize) -> Vec<usize> {
    let comp = components(&sh.left);
    let mut out = vec![v];
    out.extend((v + 1..=sh.left.len()).filter(|&u| comp[u - 1] == comp[v - 1] && sh.tics[u - 1]));
    out
}

fn part1_backward(d: &LabeledDiagram, q: Factor, p2: Option<Factor>) -> Result<LabeledDiagram> {
    let n = d.n();
    let (r0, _) = part1_region(&q, p2);
    let a_heads = comp_piece_heads(d, n);
    let b_heads = comp_piece_heads(d, n - 1);
    let heads: Vec<usize> = b_heads.iter().rev().chain(&a_heads).copied().collect();
    let alpha = sizes_of(d, &heads);
    let s = d.star_pos(n - 1).expect("starred");
    if s > alpha[0] {
        return Err(Error::InvalidDiagram(format!("{d}: star outside the α₁ piece")));
    }
    let m = alpha[0] - s;
    let mut sh = Shape::of(d);
    sh.clear_from(r0 + 1);
    sh.put(FactorKind::C, r0, m);
    sh.put(FactorKind::C, r0 + m, n - r0 - m);
    sh.cut_runs(r0, &alpha);
    let new_heads = run_heads(&sh, r0);
    let pairs: Vec<(usize, usize)> = heads.iter().copied().zip(new_heads).collect();
    assemble(d, sh, &pairs, &[star_of(d, n - 1)], &[])
}

fn part2_forward(d: &LabeledDiagram, q: Factor, l: Factor) -> Result<LabeledDiagram> {
    let (rl, r, m) = (l.start, q.start, l.len);
    let qh = q_heads(d, &q);
    let alpha = pieces_within(d, &q);
    let (sizes, firsts) = if m % 2 == 0 {
        let j = m / 2;
        // X (through r) grows by α₁, then Y
        (vec![j + alpha[0], j], [r, r - 1])
    } else {
        let j = m.div_ceil(2);
        (vec![j, j + alpha[0] - 1], [rl, r])
    };
    let sizes: Vec<usize> = sizes.into_iter().chain(alpha[1..].iter().copied()).collect();
    let mut sh = Shape::of(d);
    sh.clear_from(rl + 1);
    sh.put(FactorKind::C, rl, m + q.len);
    sh.cut_runs(rl, &sizes);
    let nh = run_heads(&sh, rl);
    let mut pairs = vec![(firsts[0], nh[0]), (firsts[1], nh[1])];
    pairs.extend(qh[1..].iter().copied().zip(nh[2..].iter().copied()));
    assemble(d, sh, &pairs, &[star_of(d, r - 1)], &[])
}

fn part2_backward(d: &LabeledDiagram, q: Factor) -> Result<LabeledDiagram> {
    let r = q.start;
    let beta = pieces_within(d, &q);
    let qh = q_heads(d, &q);
    let (m, alpha1) = if beta[0] > beta[1] {
        let j = beta[1];
        (2 * j, beta[0] - j)
    } else {
        let j = beta[0];
        (2 * j - 1, beta[1] - j + 1)
    };
    let rq = r + m;
    let mut sh = Shape::of(d);
    sh.clear_from(r + 1);
    sh.put(FactorKind::L, r, m);
    sh.put(FactorKind::C, rq, q.len - m);
    let alpha: Vec<usize> = std::iter::once(alpha1).chain(beta[2..].iter().copied()).collect();
    sh.cut_runs(rq, &alpha);
    let nh = run_heads(&sh, rq);
    let (x, y) = if m % 2 == 0 { (rq, r + 1) } else { (r, rq) };
    // first old piece holds r, second is β₂
    let mut pairs = vec![(qh[0], x), (qh[1], y)];
    pairs.extend(qh[2..].iter().copied().zip(nh[1..].iter().copied()));
    assemble(d, sh, &pairs, &[], &[(rq - 1, 1)])
}

fn part3_forward(d: &LabeledDiagram, q: Factor, l: Factor) -> Result<LabeledDiagram> {
    let (rl, r) = (l.start, q.start);
    let m = l.len.div_ceil(2);
    let mut sh = Shape::of(d);
    sh.clear_from(rl + 1);
    sh.put(FactorKind::C, rl, l.len + q.len);
    sh.cut([rl + m]);
    assemble(d, sh, &[(rl, rl), (r, rl + m)], &[star_of(d, r - 1)], &[])
}

fn part3_backward(d: &LabeledDiagram, q: Factor) -> Result<LabeledDiagram> {
    let r = q.start;
    let beta = pieces_within(d, &q);
    let m = beta[0];
    let rq = r + 2 * m - 1;
    let mut sh = Shape::of(d);
    sh.clear_from(r + 1);
    sh.put(FactorKind::L, r, 2 * m - 1);
    sh.put(FactorKind::C, rq, q.len - (2 * m - 1));
    assemble(d, sh, &[(r, r), (r + m, rq)], &[], &[(rq - 1, 1)])
}

fn part4_forward(d: &LabeledDiagram, q: Factor) -> Result<LabeledDiagram> {
    let r = q.start;
    let mut sh = Shape::of(d);
    sh.left[r] = r - 1;
    sh.tics[r] = true;
    assemble(d, sh, &[], &[star_of(d, r - 1)], &[])
}

fn part4_backward(d: &LabeledDiagram, q: Factor) -> Result<LabeledDiagram> {
    let v = (q.start + 1..=q.end())
        .find(|&v| d.is_ticked(v))
        .ok_or_else(|| Error::InvalidDiagram(format!("{d}: no tic in the last factor")))?;
    let mut sh = Shape::of(d);
    sh.left[v - 1] = v;
    sh.tics[v - 1] = false;
    assemble(d, sh, &[], &[], &[(v - 2, 1)])
}

fn part5_forward(d: &LabeledDiagram, q: Factor) -> Result<LabeledDiagram> {
    let (r, n) = (q.start, d.n());
    let mut sh = Shape::of(d);
    sh.clear_from(r + 1);
    sh.put(FactorKind::L, r, q.len);
    assemble(d, sh, &[(r, r), (n, n)], &[], &[(n - 1, 2)])
}

fn part5_backward(d: &LabeledDiagram, q: Factor) -> Result<LabeledDiagram> {
    let (r, n) = (q.start, d.n());
    let a = q.len.div_ceil(2);
    let mut sh = Shape::of(d);
    sh.clear_from(r + 1);
    sh.put(FactorKind::C, r, q.len);
    sh.cut([r + a]);
    assemble(d, sh, &[(r, r), (n, n)], &[star_of(d, n - 1)], &[])
}

fn part6_forward(d: &LabeledDiagram, q: Factor) -> Result<LabeledDiagram> {
    let (r, n) = (q.start, d.n());
    let alpha = pieces_within(d, &q);
    let c = alpha[0] - alpha[1];
    let mut sh = Shape::of(d);
    sh.clear_from(r + 1);
    sh.put(FactorKind::C, r, c);
    sh.put(FactorKind::L, r + c, 2 * alpha[1] - 1);
    assemble(d, sh, &[(r, r), (n, n)], &[], &[(n - 1, 3)])
}

fn part6_backward(d: &LabeledDiagram, q: Factor, cf: Factor) -> Result<LabeledDiagram> {
    let (r0, n) = (cf.start, d.n());
    let b = q.len.div_ceil(2);
    let mut sh = Shape::of(d);
    sh.clear_from(r0 + 1);
    sh.put(FactorKind::C, r0, cf.len + q.len);
    sh.cut([r0 + cf.len + b]);
    assemble(d, sh, &[(r0, r0), (n, n)], &[star_of(d, n - 1)], &[])
}

fn weight_key(d: &LabeledDiagram) -> (SetPartition, usize, usize, bool) {
    let pi = d.pi();
    let n = d.n();
    let bn = pi.block_size_of(n);
    (pi, bn, d.label(n), d.is_starred(n))
}

/// Checks one diagram; returns whether it is a fixed point of φ.
fn check_one(d: &LabeledDiagram, g: &UnitIntervalGraph, rep: &mut PairingReport) -> bool {
    let img = match phi(d) {
        Ok(x) => x,
        Err(e) => {
            rep.violate(format!("{d}: φ failed: {e}"));
            return false;
        }
    };
    let fixed = img == *d;
    if !img.arc_diagram().fits(g) {
        rep.violate(format!("{d} ↦ {img}: image leaves the host graph"));
    }
    match phi(&img) {
        Ok(back) if back == *d => {}
        Ok(back) => rep.violate(format!("{d} ↦ {img} ↦ {back}: not an involution")),
        Err(e) => rep.violate(format!("{d} ↦ {img}: φ of image failed: {e}")),
    }
    if fixed != is_fixed_point(d) {
        rep.violate(format!("{d}: φ-fixed = {fixed} but fixed-point conditions say {}", !fixed));
    }
    if fixed && d.t() != 0 {
        rep.violate(format!("{d}: fixed point with tic marks"));
    }
    if !fixed {
        if d.t() % 2 == img.t() % 2 {
            rep.violate(format!("{d} ↦ {img}: sign not reversed"));
        }
        let (pa, ba, la, sa) = weight_key(d);
        let (pb, bb, lb, sb) = weight_key(&img);
        if pa.lambda() != pb.lambda() {
            rep.violate(format!("{d} ↦ {img}: block sizes change"));
        }
        if ba != bb {
            rep.violate(format!("{d} ↦ {img}: block of n changes size"));
        }
        if la != lb {
            rep.violate(format!("{d} ↦ {img}: label of n changes"));
        }
        if sa != sb {
            rep.violate(format!("{d} ↦ {img}: star on n changes"));
        }
    }
    if d.n() >= 2 {
        if let (Ok(ca), Ok(cb)) = (classify_case(d), classify_case(&img)) {
            if cb != ca.partner() {
                rep.violate(format!("{d} ↦ {img}: case {ca} lands in {cb}"));
            } else if ca == CaseId::Inductive {
                let qa = d.decompose().ok().and_then(|x| x.last().copied()).map(|f| (f.kind, f.len));
                let qb = img.decompose().ok().and_then(|x| x.last().copied()).map(|f| (f.kind, f.len));
                let ta = d.tics_between(d.n() - qa.map_or(0, |f| f.1) + 1, d.n());
                let tb = img.tics_between(img.n() - qb.map_or(0, |f| f.1) + 1, img.n());
                if qa != qb || ta != tb {
                    rep.violate(format!("{d} ↦ {img}: inductive step changes the last factor"));
                }
            }
        }
    }
    rep.total += 1;
    if fixed {
        rep.fixed += 1;
    }
    fixed
}

/// Full sweep over `𝒜′_L(TL_n)`, including `Σ_fixed e_{π}/n! = Y_{TL_n}` (semi-symmetrized).
pub fn verify(n: usize) -> PairingReport {
    let g = UnitIntervalGraph::tl(n).expect("n ≥ 1");
    let (mut rep, acc) = enumerate_arcs(&g)
        .par_iter()
        .map(|arcs| {
            let mut rep = PairingReport { n, ..Default::default() };
            let mut acc: BTreeMap<ClassKey, i64> = BTreeMap::new();
            for_each_labeled(arcs, |d| {
                if check_one(d, &g, &mut rep) {
                    *acc.entry(d.pi().class_key()).or_default() += 1;
                }
            });
            (rep, acc)
        })
        .reduce(
            || (PairingReport { n, ..Default::default() }, BTreeMap::new()),
            |(ra, mut aa), (rb, ab)| {
                for (k, c) in ab {
                    *aa.entry(k).or_default() += c;
                }
                (ra.merge(rb), aa)
            },
        );
    let non_fixed = rep.total - rep.fixed;
    if non_fixed % 2 != 0 {
        rep.violate(format!("{non_fixed} non-fixed diagrams cannot pair up"));
    }
    rep.pairs = non_fixed / 2;
    let nf: i64 = (1..=n as i64).product();
    let mut fixed_sum = SemiSymE::zero(n);
    for (k, c) in acc {
        fixed_sum.add_term(k, num_rational::BigRational::new(c.into(), nf.into()));
    }
    if fixed_sum != y_semisym_main(&g) {
        rep.violate(format!("fixed-point sum differs from the signed sum for TL_{n}"));
    }
    rep
}

/// A uniformly random arc diagram of `g` with random tics, a random valid labeling
/// and random stars.
pub fn random_diagram(g: &UnitIntervalGraph, rng: &mut impl Rng) -> LabeledDiagram {
    let n = g.n();
    let left: Vec<usize> = (1..=n).map(|j| rng.gen_range(g.left(j)..=j)).collect();
    let tics: Vec<bool> = (1..=n).map(|v| left[v - 1] != v && rng.gen_bool(0.5)).collect();
    let (ids, members) = piece_members(&left, &tics);
    let mut perm: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut labels = vec![0; n];
    let mut next = 0;
    for vs in &members {
        let mut ls: Vec<usize> = perm[next..next + vs.len()].to_vec();
        ls.sort_unstable();
        next += vs.len();
        for (&v, l) in vs.iter().zip(ls) {
            labels[v - 1] = l;
        }
    }
    let comp = components(&left);
    let mut stars = vec![false; n];
    for c in 0..n {
        if comp[c] != c {
            continue;
        }
        let last = (0..n).rev().find(|&v| comp[v] == c).unwrap();
        let slot: Vec<usize> = members[ids[last]].clone();
        stars[slot[rng.gen_range(0..slot.len())] - 1] = true;
    }
    LabeledDiagram::from_raw(left, tics, labels, stars).expect("constructed valid")
}

/// Per-diagram checks on `samples` random diagrams of `TL_n`; no fixed-point sum.
pub fn verify_sample(n: usize, samples: u64, seed: u64) -> PairingReport {
    let g = UnitIntervalGraph::tl(n).expect("n ≥ 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ds: Vec<LabeledDiagram> = (0..samples).map(|_| random_diagram(&g, &mut rng)).collect();
    let mut rep = ds
        .par_iter()
        .map(|d| {
            let mut rep = PairingReport { n, ..Default::default() };
            check_one(d, &g, &mut rep);
            rep
        })
        .reduce(|| PairingReport { n, ..Default::default() }, PairingReport::merge);
    rep.pairs = (rep.total - rep.fixed) / 2;
    rep
}

fn starts_with_untic_cc(d: &LabeledDiagram, m: usize) -> bool {
    let Ok(dec) = d.decompose() else { return false };
    let f = &dec.factors;
    f.len() >= 2
        && f[0].kind == FactorKind::C
        && f[0].len == m - 1
        && f[1].kind == FactorKind::C
        && f[1].len == 1
        && d.tics_between(1, m + 1) == 0
}

/// φ keeps an untic'd leading `C_{m−1}·C_1`, the labels on its first `m` vertices,
/// and an unstarred vertex 1. Host `TL_{m+n−1}`; vacuous when that cannot hold `C_{m−1}·C_1`.
pub fn check_restriction(m: usize, n: usize) -> bool {
    assert!(m >= 2 && n >= 1);
    let g = UnitIntervalGraph::tl(m + n - 1).expect("positive size");
    enumerate_arcs(&g).par_iter().all(|arcs| {
        let mut ok = true;
        for_each_labeled(arcs, |d| {
            if !ok || !starts_with_untic_cc(d, m) {
                return;
            }
            let Ok(img) = phi(d) else {
                ok = false;
                return;
            };
            ok = starts_with_untic_cc(&img, m)
                && img.labels()[..m] == d.labels()[..m]
                && (d.is_starred(1) || !img.is_starred(1));
        });
        ok
    })
}

/// Diagrams of `TL_n` per case.
pub fn case_census(n: usize) -> BTreeMap<CaseId, u64> {
    let g = UnitIntervalGraph::tl(n).expect("n ≥ 1");
    enumerate_arcs(&g)
        .par_iter()
        .map(|arcs| {
            let mut m: BTreeMap<CaseId, u64> = BTreeMap::new();
            for_each_labeled(arcs, |d| {
                if let Ok(c) = classify_case(d) {
                    *m.entry(c).or_default() += 1;
                }
            });
            m
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_default() += c;
            }
            a
        })
}

/// The first diagram of `TL_n` (enumeration order) in `case`, with its image.
pub fn trace_case(n: usize, case: CaseId) -> Option<(LabeledDiagram, LabeledDiagram)> {
    let g = UnitIntervalGraph::tl(n).ok()?;
    for arcs in enumerate_arcs(&g) {
        let mut found = None;
        for_each_labeled(&arcs, |d| {
            if found.is_none() && classify_case(d).ok() == Some(case) {
                found = Some(d.clone());
            }
        });
        if let Some(d) = found {
            let img = phi(&d).ok()?;
            return Some((d, img));
        }
    }
    None
}
