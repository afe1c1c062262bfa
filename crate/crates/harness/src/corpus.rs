//! The library of small categories and lattices, and the copresheaf corpus.

use std::sync::Arc;

use equipment::fincat::RawCategory;
use equipment::kanext::{enumerate_copresheaves, Copresheaf};
use equipment::FinCat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gen;

fn poset(n: usize, rel: &[(usize, usize)]) -> Arc<FinCat> {
    Arc::new(FinCat::preorder_closure(n, rel).expect("library poset"))
}

/// Two parallel arrows `0 ⇉ 1`.
fn parallel_pair() -> Arc<FinCat> {
    let raw = RawCategory {
        objects: 2,
        morphisms: vec![(0, 0), (1, 1), (0, 1), (0, 1)],
        identities: vec![0, 1],
        composites: vec![(0, 0, 0), (1, 1, 1), (1, 2, 2), (1, 3, 3), (2, 0, 2), (3, 0, 3)],
    };
    Arc::new(FinCat::from_raw(&raw).expect("parallel pair"))
}

/// The square `0 → 1 → 3`, `0 → 2 → 3` whose two paths stay distinct.
fn free_square() -> Arc<FinCat> {
    // 4: 0→1, 5: 0→2, 6: 1→3, 7: 2→3, 8 = 6∘4, 9 = 7∘5
    let morphisms = vec![(0, 0), (1, 1), (2, 2), (3, 3), (0, 1), (0, 2), (1, 3), (2, 3), (0, 3), (0, 3)];
    let mut composites = Vec::new();
    for (m, &(s, t)) in morphisms.iter().enumerate() {
        composites.push((t, m, m));
        if s != t {
            composites.push((m, s, m));
        }
    }
    composites.push((6, 4, 8));
    composites.push((7, 5, 9));
    let raw = RawCategory { objects: 4, morphisms, identities: vec![0, 1, 2, 3], composites };
    Arc::new(FinCat::from_raw(&raw).expect("free square"))
}

/// The categories of the exhaustive sweep, by name.
pub fn library() -> Vec<(&'static str, Arc<FinCat>)> {
    vec![
        ("empty", Arc::new(FinCat::empty())),
        ("point", Arc::new(FinCat::terminal())),
        ("discrete2", Arc::new(FinCat::discrete(2))),
        ("discrete3", Arc::new(FinCat::discrete(3))),
        ("arrow", Arc::new(FinCat::chain(2))),
        ("chain3", Arc::new(FinCat::chain(3))),
        ("span", poset(3, &[(0, 1), (0, 2)])),
        ("cospan", poset(3, &[(1, 0), (2, 0)])),
        ("arrow_plus_point", poset(3, &[(0, 1)])),
        ("parallel_pair", parallel_pair()),
        ("boolean_square", boolean_square()),
        ("free_square", free_square()),
    ]
}

/// `0` bottom, `3` top, `1` and `2` incomparable.
pub fn boolean_square() -> Arc<FinCat> {
    poset(4, &[(0, 1), (0, 2), (1, 3), (2, 3)])
}

/// `0` bottom, three atoms, `4` top.
pub fn m3() -> Arc<FinCat> {
    poset(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
}

/// `0 < 1 < 2 < 4` and `0 < 3 < 4`.
pub fn n5() -> Arc<FinCat> {
    poset(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
}

/// Finite lattices, ordered by size.
pub fn lattices() -> Vec<(&'static str, Arc<FinCat>)> {
    vec![
        ("point", Arc::new(FinCat::terminal())),
        ("chain2", Arc::new(FinCat::chain(2))),
        ("chain3", Arc::new(FinCat::chain(3))),
        ("boolean_square", boolean_square()),
        ("m3", m3()),
        ("n5", n5()),
    ]
}

pub fn library_category(name: &str) -> Option<Arc<FinCat>> {
    library().into_iter().chain(lattices()).find(|(n, _)| *n == name).map(|(_, c)| c)
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub d: Copresheaf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusBounds {
    /// Sweep every copresheaf with fibers of at most this size over the
    /// library; `None` skips the sweep.
    pub exhaustive_fiber: Option<usize>,
    pub random_instances: usize,
    pub random_max_objects: usize,
    pub random_max_fiber: usize,
}

impl CorpusBounds {
    pub fn zero() -> Self {
        CorpusBounds { exhaustive_fiber: None, random_instances: 0, random_max_objects: 0, random_max_fiber: 0 }
    }

    pub fn exhaustive() -> Self {
        CorpusBounds { exhaustive_fiber: Some(2), ..Self::zero() }
    }

    pub fn random(instances: usize) -> Self {
        CorpusBounds { exhaustive_fiber: None, random_instances: instances, random_max_objects: 6, random_max_fiber: 3 }
    }
}

/// Far above the size of any sweep over the library.
const SWEEP_CAP: usize = 1 << 20;

pub fn exhaustive(max_fiber: usize) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for (name, cat) in library() {
        for (i, d) in enumerate_copresheaves(&cat, max_fiber, SWEEP_CAP).into_iter().enumerate() {
            out.push(CorpusEntry { name: format!("{name}/{i}"), d });
        }
    }
    out
}

/// A random copresheaf on a random poset: a sum of indicators of up-sets,
/// or a pullback of a copresheaf on the square.
fn random_entry(rng: &mut ChaCha8Rng, max_objects: usize, max_fiber: usize) -> Copresheaf {
    let cat = gen::poset(rng, max_objects.max(1));
    if max_fiber >= 2 && rng.gen_bool(0.25) {
        let sq = boolean_square();
        let pool = enumerate_copresheaves(&sq, 2, SWEEP_CAP);
        if let Some(f) = gen::functor(rng, &cat, &sq) {
            return pool[rng.gen_range(0..pool.len())].pullback(&f);
        }
    }
    let terms = rng.gen_range(1..=max_fiber.max(1));
    let mut d = Copresheaf::constant(cat.clone(), 0);
    for _ in 0..terms.min(max_fiber) {
        d = d.sum(&gen::up_set_indicator(rng, &cat));
    }
    d
}

/// Deterministic per `(bounds, seed)`.
pub fn generate_corpus(bounds: CorpusBounds, seed: u64) -> Vec<CorpusEntry> {
    let mut out = bounds.exhaustive_fiber.map(exhaustive).unwrap_or_default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..bounds.random_instances {
        let d = random_entry(&mut rng, bounds.random_max_objects, bounds.random_max_fiber);
        out.push(CorpusEntry { name: format!("random/{seed}/{i}"), d });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_is_valid() {
        for (name, c) in library().into_iter().chain(lattices()) {
            assert!(c.check_laws().is_ok(), "{name}");
        }
        assert!(!parallel_pair().is_thin());
        assert!(!free_square().is_thin());
        assert_eq!(free_square().hom(0, 3).len(), 2);
    }

    #[test]
    fn zero_bounds_give_nothing() {
        assert!(generate_corpus(CorpusBounds::zero(), 0).is_empty());
    }

    #[test]
    fn random_corpus_is_seeded() {
        let a = generate_corpus(CorpusBounds::random(30), 0);
        let b = generate_corpus(CorpusBounds::random(30), 0);
        let c = generate_corpus(CorpusBounds::random(30), 1);
        assert_eq!(a.len(), 30);
        assert!(a.iter().zip(&b).all(|(x, y)| x.d == y.d));
        assert!(a.iter().zip(&c).any(|(x, y)| x.d != y.d));
        for e in &a {
            assert!(e.d.cat().objects() <= 6);
            assert!(e.d.sizes().iter().all(|&s| s <= 3), "{}", e.name);
        }
    }
}
