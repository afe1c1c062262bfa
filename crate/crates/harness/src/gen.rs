//! Seeded generators for posets, monotone maps, copresheaves and
//! profunctors.

use std::sync::Arc;

use equipment::fincat::enumerate_functors;
use equipment::kanext::Copresheaf;
use equipment::{FinCat, FinFunctor, Obj, Profunctor};
use rand::Rng;

/// Enough for every pair of categories the generators produce.
const FUNCTOR_CAP: usize = 1 << 16;

/// A poset on `1..=max_n` elements whose index order is a linear extension.
pub fn poset(rng: &mut impl Rng, max_n: usize) -> Arc<FinCat> {
    let n = rng.gen_range(1..=max_n);
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.35) {
                rel.push((i, j));
            }
        }
    }
    Arc::new(FinCat::preorder_closure(n, &rel).expect("random relation closes to a poset"))
}

/// A uniformly chosen functor, if there is one.
pub fn functor(rng: &mut impl Rng, a: &Arc<FinCat>, b: &Arc<FinCat>) -> Option<FinFunctor> {
    let all = enumerate_functors(a, b, FUNCTOR_CAP);
    if all.is_empty() {
        None
    } else {
        Some(all[rng.gen_range(0..all.len())].clone())
    }
}

pub fn pick<'a, T>(rng: &mut impl Rng, xs: &'a [T]) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}

/// The up-closure of a random set of elements of a poset, as a copresheaf
/// with singleton or empty fibers.
pub fn up_set_indicator(rng: &mut impl Rng, cat: &Arc<FinCat>) -> Copresheaf {
    let n = cat.objects();
    let gens: Vec<Obj> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
    let inside: Vec<bool> = (0..n).map(|y| gens.iter().any(|&g| cat.leq(g, y))).collect();
    let sizes = inside.iter().map(|&b| usize::from(b)).collect();
    let maps = (0..cat.morphisms()).map(|m| if inside[cat.src(m)] { vec![0] } else { vec![] }).collect();
    Copresheaf::new(cat.clone(), sizes, maps).expect("up-sets are functorial")
}

/// `R(a′, b′)` inhabited iff `a′ ≤ x` and `y ≤ b′` for a seed `(x, y)`.
pub fn relation(rng: &mut impl Rng, a: &Arc<FinCat>, b: &Arc<FinCat>) -> Profunctor {
    let seeds: Vec<(Obj, Obj)> =
        (0..rng.gen_range(0..=3)).map(|_| (rng.gen_range(0..a.objects()), rng.gen_range(0..b.objects()))).collect();
    let inhabited = |x: Obj, y: Obj| seeds.iter().any(|&(s, t)| a.leq(x, s) && b.leq(t, y));
    Profunctor::from_fn(a.clone(), b.clone(), |x, y| usize::from(inhabited(x, y)), |_, _, _| 0, |_, _, _| 0)
        .expect("closed relations are profunctors")
}

/// A sum of one or two random relations between posets.
pub fn profunctor(rng: &mut impl Rng, a: &Arc<FinCat>, b: &Arc<FinCat>) -> Profunctor {
    let p = relation(rng, a, b);
    if rng.gen_bool(0.5) {
        p.sum(&relation(rng, a, b)).expect("same boundary")
    } else {
        p
    }
}

/// Library posets with at most `max_n` elements together with a fresh
/// random poset.
pub fn poset_pool(rng: &mut impl Rng, max_n: usize) -> Vec<Arc<FinCat>> {
    let mut pool: Vec<Arc<FinCat>> = crate::corpus::library()
        .into_iter()
        .chain(crate::corpus::lattices())
        .map(|(_, c)| c)
        .filter(|c| c.objects() > 0 && c.objects() <= max_n && c.is_thin())
        .collect();
    pool.push(poset(rng, max_n));
    pool
}
