//! Exhaustive and random families of small spaces.

use std::collections::BTreeSet;

use rand::Rng;

use super::{FiniteSpace, OrderMode, PointSet, StrictOrder};

fn is_preorder(m: &[PointSet]) -> bool {
    m.iter().all(|mx| mx.iter().all(|y| m[y].is_subset(*mx)))
}

/// Every topology on `n` points (labelled), as the preorders they correspond to.
pub fn all_topologies(n: usize) -> Vec<FiniteSpace> {
    assert!(n <= 5, "labelled enumeration is limited to 5 points");
    let choices: Vec<Vec<PointSet>> = (0..n)
        .map(|x| {
            let others = PointSet::full(n).without(x);
            others.subsets().map(|s| s | PointSet::singleton(x)).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![PointSet::EMPTY; n];
    fn go(x: usize, choices: &[Vec<PointSet>], cur: &mut Vec<PointSet>, out: &mut Vec<FiniteSpace>) {
        if x == choices.len() {
            if is_preorder(cur) {
                out.push(FiniteSpace::from_min_nbhds(cur.len(), cur.clone()).expect("small"));
            }
            return;
        }
        for &c in &choices[x] {
            cur[x] = c;
            go(x + 1, choices, cur, out);
        }
    }
    go(0, &choices, &mut cur, &mut out);
    out
}

/// Canonical code of a strict order: the least relabelled successor table among
/// relabellings that sort points by a degree invariant.
pub fn canonical_order(above: &[PointSet]) -> Vec<u64> {
    let n = above.len();
    let below: Vec<usize> = (0..n).map(|x| (0..n).filter(|&y| above[y].contains(x)).count()).collect();
    let inv: Vec<(usize, usize)> = (0..n).map(|x| (above[x].len(), below[x])).collect();
    let mut points: Vec<usize> = (0..n).collect();
    points.sort_by_key(|&x| inv[x]);
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &x in &points {
        match blocks.last_mut() {
            Some(b) if inv[b[0]] == inv[x] => b.push(x),
            _ => blocks.push(vec![x]),
        }
    }
    let mut best: Option<Vec<u64>> = None;
    let mut order = Vec::with_capacity(n);
    fn perms(blocks: &mut [Vec<usize>], i: usize, order: &mut Vec<usize>, above: &[PointSet], best: &mut Option<Vec<u64>>) {
        if i == blocks.len() {
            let mut pos = vec![0; order.len()];
            for (k, &x) in order.iter().enumerate() {
                pos[x] = k;
            }
            let code: Vec<u64> = order
                .iter()
                .map(|&x| PointSet::from_points(above[x].iter().map(|y| pos[y])).0)
                .collect();
            if best.as_ref().map_or(true, |b| code < *b) {
                *best = Some(code);
            }
            return;
        }
        let len = blocks[i].len();
        permute(blocks, i, 0, len, order, above, best);
    }
    fn permute(
        blocks: &mut [Vec<usize>],
        i: usize,
        k: usize,
        len: usize,
        order: &mut Vec<usize>,
        above: &[PointSet],
        best: &mut Option<Vec<u64>>,
    ) {
        if k == len {
            perms(blocks, i + 1, order, above, best);
            return;
        }
        for j in k..len {
            blocks[i].swap(k, j);
            order.push(blocks[i][k]);
            permute(blocks, i, k + 1, len, order, above, best);
            order.pop();
            blocks[i].swap(k, j);
        }
    }
    perms(&mut blocks, 0, &mut order, above, &mut best);
    best.unwrap_or_default()
}

/// One representative per isomorphism class of strict partial orders on `n` points.
pub fn posets_up_to_iso(n: usize) -> Vec<StrictOrder> {
    let mut level: BTreeSet<Vec<u64>> = [Vec::new()].into();
    for size in 0..n {
        let mut next = BTreeSet::new();
        for code in &level {
            let above: Vec<PointSet> = code.iter().map(|&m| PointSet(m)).collect();
            // the new point `size` is maximal; its strict down-set must be down-closed
            let all = PointSet::full(size);
            for down in all.subsets() {
                let closed = down.iter().all(|y| (0..size).all(|z| !above[z].contains(y) || down.contains(z)));
                if !closed {
                    continue;
                }
                let mut ext = above.clone();
                for y in down.iter() {
                    ext[y].insert(size);
                }
                ext.push(PointSet::EMPTY);
                next.insert(canonical_order(&ext));
            }
        }
        level = next;
    }
    level
        .into_iter()
        .map(|code| {
            let pairs: Vec<(usize, usize)> = code
                .iter()
                .enumerate()
                .flat_map(|(x, &m)| PointSet(m).iter().map(move |y| (x, y)))
                .collect();
            StrictOrder::new(n, &pairs).expect("generated orders are transitive")
        })
        .collect()
}

/// The upset spaces of [`posets_up_to_iso`]: every T0 space up to homeomorphism.
pub fn t0_spaces_up_to_iso(n: usize) -> Vec<FiniteSpace> {
    posets_up_to_iso(n)
        .iter()
        .map(|o| FiniteSpace::upset_topology(o, OrderMode::Upset).expect("small"))
        .collect()
}

/// A random space on `n` points: alternately generated by a random subbase
/// (often not scattered) or by a random strict order (always scattered).
pub fn random_space<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FiniteSpace {
    if rng.gen_bool(0.5) {
        let k = rng.gen_range(1..=n);
        let sets: Vec<PointSet> = (0..k).map(|_| PointSet(rng.gen::<u64>() & PointSet::full(n).0)).collect();
        FiniteSpace::from_subbase(n, &sets).expect("in range")
    } else {
        let density = rng.gen_range(0.1..0.6);
        let perm = {
            let mut p: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                p.swap(i, rng.gen_range(0..=i));
            }
            p
        };
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(density) {
                    pairs.push((perm[i], perm[j]));
                }
            }
        }
        let order = StrictOrder::generated_by(n, &pairs).expect("acyclic by construction");
        FiniteSpace::upset_topology(&order, OrderMode::Upset).expect("small")
    }
}
