//! The structural lemma on fixed points and the `*`/`**` conditions, checked
//! exhaustively on tic-free diagrams of small triangular ladders.

use ncchrom::diagrams::{classify_case, enumerate_arcs, enumerate_labeled, is_fixed_point, star_cond, starstar_cond};
use ncchrom::{ArcDiagram, LabeledDiagram, UnitIntervalGraph};

/// Every star placement on `arcs` with identity labels and no tics (labels never
/// influence the predicates).
fn starrings(arcs: &ArcDiagram) -> Vec<LabeledDiagram> {
    let n = arcs.n();
    let blocks = arcs.pi().blocks();
    let mut out = Vec::new();
    let mut choice = vec![0usize; blocks.len()];
    loop {
        let mut stars = vec![false; n];
        for (b, &c) in blocks.iter().zip(&choice) {
            stars[b[c] - 1] = true;
        }
        out.push(LabeledDiagram::new(arcs.clone(), vec![false; n], (1..=n).collect(), stars).unwrap());
        let mut k = blocks.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < blocks[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

fn untic_diagrams(n: usize) -> Vec<LabeledDiagram> {
    let g = UnitIntervalGraph::tl(n).unwrap();
    enumerate_arcs(&g).iter().flat_map(starrings).collect()
}

#[test]
fn prefixes_of_fixed_points_are_fixed() {
    for n in 2..=6 {
        for d in untic_diagrams(n).into_iter().filter(is_fixed_point) {
            for f in d.decompose().unwrap().factors {
                assert!(is_fixed_point(&d.prefix(f.start)), "{d} at {}", f.start);
            }
        }
    }
}

#[test]
fn fixed_points_ending_in_il_have_star_prefix() {
    for n in 2..=6 {
        for d in untic_diagrams(n).into_iter().filter(is_fixed_point) {
            let q = *d.decompose().unwrap().last().unwrap();
            if q.is_l() && q.start > 1 {
                assert!(star_cond(&d.prefix(q.start)), "{d}");
            }
        }
    }
}

#[test]
fn appending_ic_keeps_star_condition() {
    for n in 3..=6 {
        for d in untic_diagrams(n) {
            let q = *d.decompose().unwrap().last().unwrap();
            if q.is_c() && star_cond(&d.prefix(q.start)) {
                assert!(star_cond(&d), "{d}");
            }
        }
    }
}

#[test]
fn star_prefix_and_s_one_give_fixed_point() {
    for n in 3..=6 {
        for d in untic_diagrams(n) {
            let q = *d.decompose().unwrap().last().unwrap();
            if q.is_l() && star_cond(&d.prefix(q.start)) && d.s_of(&q) == Some(1) {
                assert!(is_fixed_point(&d), "{d}");
            }
        }
    }
}

#[test]
fn starstar_iff_star_prefix() {
    for n in 3..=6 {
        for d in untic_diagrams(n) {
            let q = *d.decompose().unwrap().last().unwrap();
            if q.is_c() {
                assert_eq!(starstar_cond(&d), star_cond(&d.prefix(q.start)), "{d}");
            }
        }
    }
}

#[test]
fn classification_is_total() {
    for n in 2..=6 {
        for d in enumerate_labeled(&UnitIntervalGraph::tl(n).unwrap()) {
            let c = classify_case(&d).unwrap_or_else(|e| panic!("{d}: {e}"));
            assert_eq!(c.is_fixed(), is_fixed_point(&d), "{d}: {c}");
        }
    }
}

#[test]
fn k2_has_six_labeled_diagrams() {
    assert_eq!(enumerate_labeled(&UnitIntervalGraph::complete(2).unwrap()).len(), 6);
    assert_eq!(enumerate_labeled(&UnitIntervalGraph::complete(1).unwrap()).len(), 1);
}
