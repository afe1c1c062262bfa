#![allow(dead_code)]

use std::sync::Arc;

use equipment::fincat::enumerate_functors;
use equipment::kanext::{enumerate_copresheaves, Copresheaf};
use equipment::{FinCat, FinFunctor, Obj, Profunctor};
use proptest::prelude::*;

/// A poset on `1..=max_n` elements from the upper triangle of an adjacency
/// matrix.
pub fn poset(max_n: usize) -> impl Strategy<Value = Arc<FinCat>> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut rel = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        rel.push((i, j));
                    }
                    k += 1;
                }
            }
            Arc::new(FinCat::preorder_closure(n, &rel).unwrap())
        })
    })
}

/// A monotone map between two random posets.
pub fn posets_with_functor(max_n: usize) -> impl Strategy<Value = FinFunctor> {
    (poset(max_n), poset(max_n), any::<prop::sample::Index>()).prop_map(|(a, b, i)| {
        let all = enumerate_functors(&a, &b, 1 << 16);
        all[i.index(all.len())].clone()
    })
}

pub fn copresheaf(max_n: usize) -> impl Strategy<Value = Copresheaf> {
    (poset(max_n), any::<prop::sample::Index>()).prop_map(|(a, i)| {
        let all = enumerate_copresheaves(&a, 2, 1 << 16);
        all[i.index(all.len())].clone()
    })
}

/// A relation `R(x, y) ≠ ∅` iff `x ≤ s` and `t ≤ y` for a seed `(s, t)`.
pub fn relation(a: Arc<FinCat>, b: Arc<FinCat>, seeds: &[(usize, usize)]) -> Profunctor {
    let seeds: Vec<(Obj, Obj)> = seeds.iter().map(|&(s, t)| (s % a.objects(), t % b.objects())).collect();
    let (a2, b2) = (a.clone(), b.clone());
    Profunctor::from_fn(
        a,
        b,
        move |x, y| usize::from(seeds.iter().any(|&(s, t)| a2.leq(x, s) && b2.leq(t, y))),
        |_, _, _| 0,
        |_, _, _| 0,
    )
    .unwrap()
}

pub fn profunctor(max_n: usize) -> impl Strategy<Value = Profunctor> {
    (poset(max_n), poset(max_n), proptest::collection::vec((0..8usize, 0..8usize), 0..4))
        .prop_map(|(a, b, seeds)| relation(a, b, &seeds))
}

pub fn square() -> Arc<FinCat> {
    Arc::new(FinCat::preorder_closure(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap())
}

/// Small lattices: chains, the square, the pentagon and the diamond.
pub fn lattices() -> Vec<Arc<FinCat>> {
    vec![
        Arc::new(FinCat::chain(1)),
        Arc::new(FinCat::chain(2)),
        Arc::new(FinCat::chain(3)),
        square(),
        Arc::new(FinCat::preorder_closure(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap()),
        Arc::new(FinCat::preorder_closure(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap()),
    ]
}
