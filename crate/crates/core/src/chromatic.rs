//! Routes to `Y_G` and `X_G`: the inducing recursion, the arc-diagram p-sum,
//! the signed e-formula over labeled tic'd diagrams, and the fixed-point sum for
//! triangular ladders.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::diagrams::{enumerate_arcs, is_fixed_point, ArcDiagram, LabeledDiagram};
use crate::graphs::UnitIntervalGraph;
use crate::ncsym::{int, Basis, CommExpr, NCExpr, SemiSymE};
use crate::partitions::{ClassKey, SetPartition};

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

/// `Y_G` in the p-basis from `Y_G = Y_{G'}↑ₙ − Σ_{i=aₙ}^{n−1} Y_{G'}↑ᵢ`, `Y_{K₁} = p₁`.
pub fn y_p_dc(g: &UnitIntervalGraph) -> NCExpr {
    let n = g.n();
    if n == 1 {
        return NCExpr::basis_element(Basis::P, SetPartition::singletons(1));
    }
    let prev = y_p_dc(&g.remove_last().expect("n ≥ 2"));
    let mut out = prev.induce_p(n).expect("j = n is in range");
    for i in g.left(n)..n {
        out.add_expr(&prev.induce_p(i).expect("i < n").scaled(&int(-1)));
    }
    out
}

/// `Σ_{D∈𝒜(G)} (−1)^{a(D)} p_{π(D)}`.
pub fn y_p_diagrams(g: &UnitIntervalGraph) -> NCExpr {
    let mut out = NCExpr::zero(Basis::P, g.n());
    for d in enumerate_arcs(g) {
        let sign = if d.num_arcs() % 2 == 0 { 1 } else { -1 };
        out.add_term(d.pi(), int(sign));
    }
    out
}

/// Signed, weighted class contributions of every tic refinement of one arc diagram.
/// Labels contribute the multinomial `n!/∏α!`, stars the product of right-most
/// piece sizes.
fn tic_contributions(arcs: &ArcDiagram, acc: &mut BTreeMap<ClassKey, i128>) {
    let n = arcs.n();
    let nf = factorial(n);
    let heads: Vec<usize> = arcs.arcs().iter().map(|&(_, j)| j).collect();
    let src = arcs.sources();
    for mask in 0u64..(1u64 << heads.len()) {
        let mut cut = vec![false; n + 1];
        for (b, &j) in heads.iter().enumerate() {
            cut[j] = mask >> b & 1 == 1;
        }
        // piece tag per vertex: (component root, cuts seen so far in it)
        let mut root = vec![0usize; n + 1];
        let mut cuts = vec![0usize; n + 1];
        let mut tag = Vec::with_capacity(n);
        for v in 1..=n {
            root[v] = if src[v - 1] == v { v } else { root[src[v - 1]] };
            if cut[v] {
                cuts[root[v]] += 1;
            }
            tag.push((root[v], cuts[root[v]]));
        }
        let pi = SetPartition::from_tags(&tag);
        let mut size: BTreeMap<(usize, usize), i128> = BTreeMap::new();
        for t in &tag {
            *size.entry(*t).or_default() += 1;
        }
        let mut w = nf;
        for (&(r, c), &s) in &size {
            w /= factorial(s as usize);
            if c == cuts[r] {
                w *= s;
            }
        }
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        *acc.entry(pi.class_key()).or_default() += sign * w;
    }
}

fn finish(n: usize, acc: BTreeMap<ClassKey, i128>) -> SemiSymE {
    let nf = BigInt::from(factorial(n));
    let mut out = SemiSymE::zero(n);
    for (k, c) in acc {
        out.add_term(k, BigRational::new(BigInt::from(c), nf.clone()));
    }
    out
}

fn merge(mut a: BTreeMap<ClassKey, i128>, b: BTreeMap<ClassKey, i128>) -> BTreeMap<ClassKey, i128> {
    for (k, c) in b {
        *a.entry(k).or_default() += c;
    }
    a
}

/// `Y_G ≡ₙ (1/n!) Σ_{D′∈𝒜′_L(G)} (−1)^{t(D′)} e_{π(D′)}`, with labels and stars
/// counted rather than enumerated.
pub fn y_semisym_main(g: &UnitIntervalGraph) -> SemiSymE {
    let acc = enumerate_arcs(g)
        .par_iter()
        .fold(BTreeMap::new, |mut acc, d| {
            tic_contributions(d, &mut acc);
            acc
        })
        .reduce(BTreeMap::new, merge);
    finish(g.n(), acc)
}

/// The same sum taken literally over every labeled diagram; for cross-checks.
pub fn y_semisym_enumerated(g: &UnitIntervalGraph) -> SemiSymE {
    let mut acc: BTreeMap<ClassKey, i128> = BTreeMap::new();
    for arcs in enumerate_arcs(g) {
        crate::diagrams::for_each_labeled(&arcs, |d| {
            let sign = if d.t() % 2 == 0 { 1 } else { -1 };
            *acc.entry(d.pi().class_key()).or_default() += sign;
        });
    }
    finish(g.n(), acc)
}

/// `(1/n!)` times the e-classes of the fixed points of the involution on `𝒜′_L(TL_n)`.
/// Fixedness depends only on arcs and stars, so labels are counted.
pub fn y_tl_fixed(n: usize) -> SemiSymE {
    let g = UnitIntervalGraph::tl(n).expect("n ≥ 1");
    let nf = factorial(n);
    let acc = enumerate_arcs(&g)
        .par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<ClassKey, i128>, arcs| {
            let pi = arcs.pi();
            let blocks = pi.blocks();
            let w = blocks.iter().fold(nf, |w, b| w / factorial(b.len()));
            let key = pi.class_key();
            let mut choice = vec![0usize; blocks.len()];
            loop {
                let mut stars = vec![false; n];
                for (b, &c) in blocks.iter().zip(&choice) {
                    stars[b[c] - 1] = true;
                }
                let d = LabeledDiagram::new(arcs.clone(), vec![false; n], (1..=n).collect(), stars)
                    .expect("identity labels increase on every piece");
                if is_fixed_point(&d) {
                    *acc.entry(key.clone()).or_default() += w;
                }
                // odometer, left-most component most significant
                let mut k = blocks.len();
                loop {
                    if k == 0 {
                        return acc;
                    }
                    k -= 1;
                    choice[k] += 1;
                    if choice[k] < blocks[k].len() {
                        break;
                    }
                    choice[k] = 0;
                }
            }
        })
        .reduce(BTreeMap::new, merge);
    finish(n, acc)
}

/// `X_G = ρ(Y_G)` in the commutative e-basis.
pub fn x_e(g: &UnitIntervalGraph) -> CommExpr {
    y_p_dc(g).rho().p_to_e().expect("ρ of a p-expression is in the p-basis")
}

pub fn is_epositive(g: &UnitIntervalGraph) -> bool {
    x_e(g).is_nonnegative()
}

pub fn is_semisym_epositive(g: &UnitIntervalGraph) -> bool {
    y_semisym_main(g).is_nonnegative()
}

/// `X_G(1^k)` against the number of proper `k`-colorings.
pub fn specialize_check(g: &UnitIntervalGraph, k: u64) -> bool {
    x_e(g).specialize_ones(k) == int(g.count_colorings(k as usize) as i64)
}
