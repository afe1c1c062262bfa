//! Categories of elements, span categories and cosiftedness.

use std::collections::HashMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::fincat::{FinCat, FinFunctor, Mor, Obj};
use crate::kanext::Copresheaf;

/// The category of elements of a copresheaf, with its projection.
#[derive(Debug, Clone)]
pub struct ElCat {
    pub cat: Arc<FinCat>,
    /// Object `i` is the element `elems[i] = (x, q)` with `q ∈ dx`.
    pub elems: Vec<(Obj, usize)>,
    pub proj: FinFunctor,
}

impl ElCat {
    pub fn index_of(&self, x: Obj, q: usize) -> Option<Obj> {
        self.elems.iter().position(|&e| e == (x, q))
    }
}

pub fn category_of_elements(d: &Copresheaf) -> ElCat {
    let a = d.cat().clone();
    let mut elems = Vec::new();
    let mut index = HashMap::new();
    for x in 0..a.objects() {
        for q in 0..d.size(x) {
            index.insert((x, q), elems.len());
            elems.push((x, q));
        }
    }
    let mut mors = Vec::new();
    for (i, &(x, q)) in elems.iter().enumerate() {
        for y in 0..a.objects() {
            for &f in a.hom(x, y) {
                mors.push((i, index[&(y, d.act(f, q))], f));
            }
        }
    }
    let base_obj: Vec<Obj> = elems.iter().map(|e| e.0).collect();
    let cat = Arc::new(FinCat::over_base(&a, &base_obj, &mors).expect("category of elements"));
    let proj = FinFunctor::new(cat.clone(), a, base_obj, mors.iter().map(|m| m.2).collect()).expect("projection");
    ElCat { cat, elems, proj }
}

/// Objects of the `k`-span category: an object `a` of `C` with a leg
/// `a → t_i` for every target.
#[derive(Debug, Clone)]
pub struct SpanCat {
    pub cat: Arc<FinCat>,
    pub objects: Vec<(Obj, Vec<Mor>)>,
}

fn leg_tuples(c: &FinCat, a: Obj, targets: &[Obj]) -> Vec<Vec<Mor>> {
    let mut out = vec![Vec::new()];
    for &t in targets {
        let mut next = Vec::new();
        for prefix in &out {
            for &u in c.hom(a, t) {
                let mut v = prefix.clone();
                v.push(u);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Objects are `(a, (p_i: a → t_i)_i)`; morphisms are `f: a → a′` with
/// `p′_i ∘ f = p_i` for every `i`. With no targets this is `C` itself.
pub fn k_span_category(c: &Arc<FinCat>, targets: &[Obj]) -> SpanCat {
    let mut objects = Vec::new();
    let mut index = HashMap::new();
    for a in 0..c.objects() {
        for legs in leg_tuples(c, a, targets) {
            index.insert((a, legs.clone()), objects.len());
            objects.push((a, legs));
        }
    }
    let mut mors = Vec::new();
    for (i, (a, legs)) in objects.iter().enumerate() {
        for a2 in 0..c.objects() {
            for &f in c.hom(*a, a2) {
                for legs2 in leg_tuples(c, a2, targets) {
                    if legs2.iter().zip(legs).all(|(&p2, &p)| c.compose(p2, f) == p) {
                        mors.push((i, index[&(a2, legs2)], f));
                    }
                }
            }
        }
    }
    let base: Vec<Obj> = objects.iter().map(|o| o.0).collect();
    let cat = Arc::new(FinCat::over_base(c, &base, &mors).expect("span category"));
    SpanCat { cat, objects }
}

/// Spans `x ← a → y`.
pub fn span_category(c: &Arc<FinCat>, x: Obj, y: Obj) -> SpanCat {
    k_span_category(c, &[x, y])
}

/// Number of connected components of the `k`-span category, computed
/// without building it: every `f: a′ → a` joins `(a′, p∘f)` to `(a, p)`.
pub fn k_span_components(c: &FinCat, targets: &[Obj]) -> usize {
    let mut offsets = Vec::with_capacity(c.objects() + 1);
    let mut total = 0;
    let tuples: Vec<Vec<Vec<Mor>>> = (0..c.objects()).map(|a| leg_tuples(c, a, targets)).collect();
    let index: Vec<HashMap<Vec<Mor>, usize>> =
        tuples.iter().map(|ts| ts.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()).collect();
    for ts in &tuples {
        offsets.push(total);
        total += ts.len();
    }
    let mut uf = UnionFind::<usize>::new(total);
    for f in 0..c.morphisms() {
        let (a2, a) = (c.src(f), c.tgt(f));
        for (i, legs) in tuples[a].iter().enumerate() {
            let pulled: Vec<Mor> = legs.iter().map(|&p| c.compose(p, f)).collect();
            uf.union(offsets[a2] + index[a2][&pulled], offsets[a] + i);
        }
    }
    let mut roots: Vec<usize> = (0..total).map(|t| uf.find(t)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Nonempty, with every binary span category connected.
pub fn is_cosifted(c: &FinCat) -> bool {
    c.objects() > 0 && (0..c.objects()).all(|x| (0..c.objects()).all(|y| k_span_components(c, &[x, y]) == 1))
}
