//! Set partitions of `[n]`, integer partitions, the refinement order, and the
//! equivalence classes used for semi-symmetrization.
//!
//! A [`SetPartition`] is stored as a restricted growth string: entry `i` is the
//! index of the block holding element `i + 1`, blocks numbered in order of their
//! minima. That is exactly the canonical form (blocks ordered by minimum, sorted
//! inside), and the derived `Ord` gives a total order usable as a map key.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest ground set supported by the compact representation.
pub const MAX_N: usize = 255;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    rgs: Vec<u8>,
}

impl SetPartition {
    /// Builds a partition from arbitrary per-element block tags (element `i + 1`
    /// gets `tags[i]`). Equal tags mean the same block.
    pub fn from_tags<T: PartialEq>(tags: &[T]) -> Self {
        assert!(tags.len() <= MAX_N, "ground set too large");
        let mut seen: Vec<&T> = Vec::new();
        let rgs = tags
            .iter()
            .map(|t| match seen.iter().position(|s| *s == t) {
                Some(i) => i as u8,
                None => {
                    seen.push(t);
                    (seen.len() - 1) as u8
                }
            })
            .collect();
        SetPartition { rgs }
    }

    /// Builds a partition of `[n]` from 1-based blocks.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::OutOfRange { index: n, max: MAX_N });
        }
        let mut tag = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidDiagram("empty block".into()));
            }
            for &e in block {
                if e == 0 || e > n {
                    return Err(Error::OutOfRange { index: e, max: n });
                }
                if tag[e - 1] != usize::MAX {
                    return Err(Error::parse(0, format!("element {e} repeated")));
                }
                tag[e - 1] = b;
            }
        }
        if let Some(missing) = tag.iter().position(|&t| t == usize::MAX) {
            return Err(Error::parse(0, format!("element {} missing", missing + 1)));
        }
        Ok(SetPartition::from_tags(&tag))
    }

    /// `0̂ = 1/2/.../n`.
    pub fn singletons(n: usize) -> Self {
        SetPartition { rgs: (0..n).map(|i| i as u8).collect() }
    }

    /// `1̂ = 12...n`.
    pub fn one_block(n: usize) -> Self {
        SetPartition { rgs: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.rgs.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.rgs.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    /// Block index (0-based, canonical order) of element `e` (1-based).
    pub fn block_index(&self, e: usize) -> usize {
        self.rgs[e - 1] as usize
    }

    /// Blocks as sorted lists of 1-based elements, ordered by minimum.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b as usize].push(i + 1);
        }
        blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_blocks()];
        for &b in &self.rgs {
            sizes[b as usize] += 1;
        }
        sizes
    }

    /// Size of the block containing element `e` (1-based).
    pub fn block_size_of(&self, e: usize) -> usize {
        let b = self.rgs[e - 1];
        self.rgs.iter().filter(|&&x| x == b).count()
    }

    /// True iff every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &SetPartition) -> Result<bool> {
        if self.n() != coarser.n() {
            return Err(Error::GroundMismatch(self.n(), coarser.n()));
        }
        let mut image: Vec<Option<u8>> = vec![None; self.num_blocks()];
        for (&fine, &coarse) in self.rgs.iter().zip(&coarser.rgs) {
            match image[fine as usize] {
                None => image[fine as usize] = Some(coarse),
                Some(c) if c != coarse => return Ok(false),
                _ => {}
            }
        }
        Ok(true)
    }

    /// `μ(0̂, σ) = ∏_B (−1)^{|B|−1} (|B|−1)!`.
    pub fn mobius_hat0(&self) -> i64 {
        self.block_sizes()
            .into_iter()
            .map(|s| {
                let f: i64 = (1..s as i64).product();
                if s % 2 == 0 {
                    -f
                } else {
                    f
                }
            })
            .product()
    }

    /// `π ⊕_j n` for `π ⊢ [n−1]`: put `n` in the block of `j`, or alone when `j == n`.
    pub fn oplus(&self, j: usize) -> Result<Self> {
        let n = self.n() + 1;
        if j == 0 || j > n {
            return Err(Error::OutOfRange { index: j, max: n });
        }
        if n > MAX_N {
            return Err(Error::OutOfRange { index: n, max: MAX_N });
        }
        let mut rgs = self.rgs.clone();
        let tag = if j == n { self.num_blocks() as u8 } else { self.rgs[j - 1] };
        rgs.push(tag);
        Ok(SetPartition { rgs })
    }

    /// `π | σ`: blocks of σ shifted up by `n` and appended.
    pub fn shift_concat(&self, other: &SetPartition) -> SetPartition {
        let offset = self.num_blocks() as u8;
        let mut rgs = self.rgs.clone();
        rgs.extend(other.rgs.iter().map(|&b| b + offset));
        SetPartition { rgs }
    }

    /// `λ(π)`: block sizes sorted weakly decreasing.
    pub fn lambda(&self) -> IntegerPartition {
        IntegerPartition::from_parts(self.block_sizes())
    }

    /// `π! = ∏ |B|!`.
    pub fn factorial(&self) -> u64 {
        self.lambda().factorial()
    }

    pub fn class_key(&self) -> ClassKey {
        ClassKey { lambda: self.lambda(), last: if self.n() == 0 { 0 } else { self.block_size_of(self.n()) } }
    }

    /// `δ(π)`: every element `i` replaced by `δ(i)`.
    pub fn act(&self, delta: &Permutation) -> Result<SetPartition> {
        if delta.len() != self.n() {
            return Err(Error::GroundMismatch(delta.len(), self.n()));
        }
        let mut tags = vec![0u8; self.n()];
        for (i, &b) in self.rgs.iter().enumerate() {
            tags[delta.apply(i + 1) - 1] = b;
        }
        Ok(SetPartition::from_tags(&tags))
    }

    /// Every `σ ≤ π` in the refinement order.
    pub fn refinements(&self) -> Vec<SetPartition> {
        let blocks = self.blocks();
        let mut out: Vec<Vec<usize>> = vec![vec![0; self.n()]];
        let mut next_tag = 0usize;
        for block in &blocks {
            let local: Vec<SetPartition> = enumerate_partitions(block.len()).collect();
            let mut grown = Vec::with_capacity(out.len() * local.len());
            for tags in &out {
                for sub in &local {
                    let mut t = tags.clone();
                    for (k, &e) in block.iter().enumerate() {
                        t[e - 1] = next_tag + sub.rgs[k] as usize;
                    }
                    grown.push(t);
                }
            }
            next_tag += block.len();
            out = grown;
        }
        out.iter().map(|t| SetPartition::from_tags(t)).collect()
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.n() > 9;
        for (bi, block) in self.blocks().iter().enumerate() {
            if bi > 0 {
                f.write_str("/")?;
            }
            for (k, e) in block.iter().enumerate() {
                if wide && k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetPartition({self})")
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    /// Parses `13/2/47`, or `1,3/2,10/...` when elements need more than one digit.
    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::parse(0, "empty set partition"));
        }
        let comma_mode = s.contains(',');
        let mut blocks: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        let mut pos = 0usize;
        let bytes = s.as_bytes();
        while pos < bytes.len() {
            let c = bytes[pos];
            match c {
                b'/' => {
                    if blocks.last().is_some_and(|b| b.is_empty()) {
                        return Err(Error::parse(pos, "empty block"));
                    }
                    blocks.push(Vec::new());
                    pos += 1;
                }
                b',' if comma_mode => {
                    if pos == 0 || !bytes[pos - 1].is_ascii_digit() {
                        return Err(Error::parse(pos, "misplaced comma"));
                    }
                    pos += 1;
                    if pos >= bytes.len() || !bytes[pos].is_ascii_digit() {
                        return Err(Error::parse(pos, "expected digit after comma"));
                    }
                }
                b'0'..=b'9' => {
                    let start = pos;
                    let mut value = 0usize;
                    if comma_mode {
                        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                            value = value
                                .checked_mul(10)
                                .and_then(|v| v.checked_add((bytes[pos] - b'0') as usize))
                                .ok_or_else(|| Error::parse(start, "number too large"))?;
                            pos += 1;
                        }
                    } else {
                        value = (c - b'0') as usize;
                        pos += 1;
                    }
                    if value == 0 {
                        return Err(Error::parse(start, "elements start at 1"));
                    }
                    blocks.last_mut().unwrap().push((value, start));
                }
                _ => return Err(Error::parse(pos, format!("unexpected character {:?}", c as char))),
            }
        }
        if blocks.last().is_some_and(|b| b.is_empty()) {
            return Err(Error::parse(s.len(), "empty block"));
        }
        let n: usize = blocks.iter().map(Vec::len).sum();
        if n > MAX_N {
            return Err(Error::parse(0, "ground set too large"));
        }
        let mut tag = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &(e, at) in block {
                if e > n {
                    return Err(Error::parse(at, format!("element {e} exceeds ground set size {n}")));
                }
                if tag[e - 1] != usize::MAX {
                    return Err(Error::parse(at, format!("element {e} repeated")));
                }
                tag[e - 1] = b;
            }
        }
        Ok(SetPartition::from_tags(&tag))
    }
}

/// Lexicographic stream of restricted growth strings: every partition of `[n]` once.
pub fn enumerate_partitions(n: usize) -> impl Iterator<Item = SetPartition> {
    assert!(n <= MAX_N, "ground set too large");
    let mut state: Option<Vec<u8>> = Some(vec![0; n]);
    std::iter::from_fn(move || {
        let current = state.take()?;
        // prefix maxima decide which positions can still grow
        let mut maxes = vec![0u8; current.len()];
        let mut m = 0u8;
        for (i, &v) in current.iter().enumerate() {
            maxes[i] = m;
            m = m.max(v);
        }
        let mut next = current.clone();
        let mut advanced = false;
        for i in (1..next.len()).rev() {
            if next[i] <= maxes[i] {
                next[i] += 1;
                for v in next.iter_mut().skip(i + 1) {
                    *v = 0;
                }
                advanced = true;
                break;
            }
        }
        if advanced {
            state = Some(next);
        }
        Some(SetPartition { rgs: current })
    })
}

/// A weakly decreasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntegerPartition(Vec<usize>);

impl IntegerPartition {
    /// Sorts the given positive parts into weakly decreasing order.
    pub fn from_parts(mut parts: Vec<usize>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "parts must be positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        IntegerPartition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `λ! = ∏ λᵢ!`.
    pub fn factorial(&self) -> u64 {
        self.0.iter().map(|&p| (1..=p as u64).product::<u64>()).product()
    }

    /// Multiset union of parts.
    pub fn union(&self, other: &IntegerPartition) -> IntegerPartition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        IntegerPartition::from_parts(parts)
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.0.iter().any(|&p| p > 9);
        for (i, p) in self.0.iter().enumerate() {
            if wide && i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Key of a `∼` class: the block-size multiset plus the size of the block holding `n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassKey {
    pub lambda: IntegerPartition,
    pub last: usize,
}

impl ClassKey {
    pub fn new(lambda: IntegerPartition, last: usize) -> Result<Self> {
        if !lambda.parts().contains(&last) {
            return Err(Error::InvalidDiagram(format!("class key: {last} is not a part of {lambda}")));
        }
        Ok(ClassKey { lambda, last })
    }

    pub fn n(&self) -> usize {
        self.lambda.size()
    }

    /// Canonical member: consecutive runs in decreasing size, with the block
    /// containing `n` placed last.
    pub fn representative(&self) -> SetPartition {
        let mut rest = self.lambda.parts().to_vec();
        let at = rest.iter().position(|&p| p == self.last).expect("key invariant");
        rest.remove(at);
        rest.push(self.last);
        let tags: Vec<usize> = rest.iter().enumerate().flat_map(|(b, &size)| std::iter::repeat_n(b, size)).collect();
        SetPartition::from_tags(&tags)
    }
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|last={})", self.lambda, self.last)
    }
}

/// A permutation of `[n]` in one-line notation, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n];
        for &v in &word {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidDiagram(format!("{word:?} is not a permutation")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation(word))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `δ(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn word(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// All permutations of `[n]` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation(prefix.clone()));
                return;
            }
            for v in 0..used.len() {
                if !used[v] {
                    used[v] = true;
                    prefix.push(v + 1);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// `231` or `2,3,1`.
    fn from_str(s: &str) -> Result<Self> {
        let word: Result<Vec<usize>> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse::<usize>().map_err(|e| Error::parse(0, e.to_string()))).collect()
        } else {
            s.chars()
                .enumerate()
                .map(|(i, c)| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::parse(i, "expected digit")))
                .collect()
        };
        Permutation::new(word?)
    }
}
