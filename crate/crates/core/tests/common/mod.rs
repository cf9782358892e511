//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's firing, cube or elimination code.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use petri_homology::net::{ElementaryNet, EventDef, Marking};
use rand::seq::SliceRandom;
use rand::Rng;

pub type State = BTreeSet<usize>;

/// `(pre, post)` as place-index sets, in declaration order.
pub fn event_sets(net: &ElementaryNet) -> Vec<(State, State)> {
    let idx = |names: &[String]| -> State { names.iter().map(|p| net.place_id(p).unwrap()).collect() };
    net.events().iter().map(|e| (idx(&e.pre), idx(&e.post))).collect()
}

pub fn fire(pre: &State, post: &State, s: &State) -> Option<State> {
    if !pre.is_subset(s) {
        return None;
    }
    let rest: State = s.difference(pre).copied().collect();
    if !rest.is_disjoint(post) {
        return None;
    }
    Some(rest.union(post).copied().collect())
}

pub fn independent(a: &(State, State), b: &(State, State)) -> bool {
    let na: State = a.0.union(&a.1).copied().collect();
    let nb: State = b.0.union(&b.1).copied().collect();
    na.is_disjoint(&nb)
}

pub fn to_state(m: &Marking) -> State {
    m.occupied().collect()
}

pub fn all_states(places: usize) -> BTreeSet<State> {
    (0u32..1 << places)
        .map(|bits| (0..places).filter(|p| bits >> p & 1 == 1).collect())
        .collect()
}

pub fn reachable(net: &ElementaryNet) -> BTreeSet<State> {
    let ev = event_sets(net);
    let start = to_state(net.initial());
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for (pre, post) in &ev {
            if let Some(t) = fire(pre, post, &s) {
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
    }
    seen
}

/// States of `space` with no outgoing, resp. no incoming, transition inside it.
pub fn deadlocks_and_senders(net: &ElementaryNet, space: &BTreeSet<State>) -> (usize, usize) {
    let ev = event_sets(net);
    let mut has_in = BTreeSet::new();
    let mut deadlocks = 0;
    for s in space {
        let mut out = false;
        for (pre, post) in &ev {
            if let Some(t) = fire(pre, post, s) {
                if space.contains(&t) {
                    out = true;
                    has_in.insert(t);
                }
            }
        }
        if !out {
            deadlocks += 1;
        }
    }
    (deadlocks, space.len() - has_in.len())
}

/// Cube counts per grade by enumerating every event subset at every state.
pub fn cube_counts(net: &ElementaryNet, space: &BTreeSet<State>) -> Vec<usize> {
    let ev = event_sets(net);
    let k = ev.len();
    assert!(k < 20);
    let mut counts = vec![0usize; k + 1];
    for mask in 0u32..1 << k {
        let chosen: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        let pairwise = chosen
            .iter()
            .enumerate()
            .all(|(x, &a)| chosen[x + 1..].iter().all(|&b| independent(&ev[a], &ev[b])));
        if !pairwise {
            continue;
        }
        for s in space {
            let mut cur = Some(s.clone());
            for &a in &chosen {
                cur = cur
                    .and_then(|c| fire(&ev[a].0, &ev[a].1, &c))
                    .filter(|c| space.contains(c));
            }
            if cur.is_some() {
                counts[chosen.len()] += 1;
            }
        }
    }
    while counts.len() > 1 && counts.last() == Some(&0) {
        counts.pop();
    }
    counts
}

/// A random elementary net on `places` places. Every event touches at least
/// one place and has disjoint pre and post sets.
pub fn random_net<R: Rng>(rng: &mut R, places: usize, events: usize) -> ElementaryNet {
    let names: Vec<String> = (1..=places).map(|i| format!("p{i}")).collect();
    let mut defs = Vec::new();
    for e in 1..=events {
        let (mut pre, mut post) = (Vec::new(), Vec::new());
        while pre.is_empty() && post.is_empty() {
            pre.clear();
            post.clear();
            for p in &names {
                match rng.gen_range(0..10) {
                    0 | 1 => pre.push(p.clone()),
                    2 | 3 => post.push(p.clone()),
                    _ => {}
                }
            }
        }
        defs.push(EventDef::new(format!("e{e}"), pre, post));
    }
    let initial: Vec<String> = names.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
    ElementaryNet::new(names, defs, &initial).unwrap()
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// Rank by Gaussian elimination over the rationals.
pub fn rational_rank(m: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..a.len() {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &a[rank][c];
            let pivot = a[rank].clone();
            for (x, p) in a[r][c..].iter_mut().zip(&pivot[c..]) {
                *x -= &f * p;
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}
