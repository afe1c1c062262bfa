//! The free finite-product completion `T`, truncated at a bound on the
//! length of sequences, and the right Beck-Chevalley check for its unit.
//!
//! An object of `TA` is a finite sequence of objects of `A`. A morphism
//! `(x_0, …, x_{n-1}) → (y_0, …, y_{k-1})` is a function
//! `s: {0..k} → {0..n}` with morphisms `u_i: x_{s i} → y_i`. Composition of
//! `(s, u)` followed by `(t, v)` is `(s∘t, (v_j ∘ u_{t j})_j)`.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{CategoryError, FinCat, FinFunctor, FunctorError, Mor, Obj};
use crate::kanext::{decode, encode};
use crate::prof::{companion, compose, left_unitor_inv, right_unitor, CellError, ProCell, Profunctor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpError {
    #[error("sequence of length {length} exceeds the truncation bound {bound}")]
    TruncationExceeded { length: usize, bound: usize },
    #[error("truncation bound {0} is below 2")]
    BoundTooSmall(usize),
    #[error("sequence morphism is not typed as claimed")]
    IllTyped,
    #[error("profunctor does not match the truncated categories")]
    Boundary,
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Cell(#[from] CellError),
}

/// Maximum sequence length used by the checks. Never below 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Truncation(usize);

impl Truncation {
    pub fn new(bound: usize) -> Result<Self, FpError> {
        if bound < 2 {
            Err(FpError::BoundTooSmall(bound))
        } else {
            Ok(Truncation(bound))
        }
    }

    pub fn bound(self) -> usize {
        self.0
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation(3)
    }
}

/// A category presented by enumeration. Lets `T` be iterated without
/// materializing each stage.
pub trait Category {
    type Obj: Clone + Eq + Hash + Debug;
    type Mor: Clone + Eq + Hash + Debug;

    fn all_objects(&self) -> Vec<Self::Obj>;
    fn hom_set(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Mor>;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`; the caller guarantees composability.
    fn compose_mors(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
}

impl Category for FinCat {
    type Obj = Obj;
    type Mor = Mor;

    fn all_objects(&self) -> Vec<Obj> {
        (0..self.objects()).collect()
    }

    fn hom_set(&self, x: &Obj, y: &Obj) -> Vec<Mor> {
        self.hom(*x, *y).to_vec()
    }

    fn identity(&self, x: &Obj) -> Mor {
        self.id(*x)
    }

    fn compose_mors(&self, g: &Mor, f: &Mor) -> Mor {
        self.compose(*g, *f)
    }
}

impl<C: Category + ?Sized> Category for &C {
    type Obj = C::Obj;
    type Mor = C::Mor;

    fn all_objects(&self) -> Vec<C::Obj> {
        (**self).all_objects()
    }

    fn hom_set(&self, x: &C::Obj, y: &C::Obj) -> Vec<C::Mor> {
        (**self).hom_set(x, y)
    }

    fn identity(&self, x: &C::Obj) -> C::Mor {
        (**self).identity(x)
    }

    fn compose_mors(&self, g: &C::Mor, f: &C::Mor) -> C::Mor {
        (**self).compose_mors(g, f)
    }
}

impl<C: Category + ?Sized> Category for Arc<C> {
    type Obj = C::Obj;
    type Mor = C::Mor;

    fn all_objects(&self) -> Vec<C::Obj> {
        (**self).all_objects()
    }

    fn hom_set(&self, x: &C::Obj, y: &C::Obj) -> Vec<C::Mor> {
        (**self).hom_set(x, y)
    }

    fn identity(&self, x: &C::Obj) -> C::Mor {
        (**self).identity(x)
    }

    fn compose_mors(&self, g: &C::Mor, f: &C::Mor) -> C::Mor {
        (**self).compose_mors(g, f)
    }
}

/// `(s, u)` with `u_i: x_{s i} → y_i`. The same shape also serves as an
/// element `(s, e)` of a fiber of `TJ`, with `e_i ∈ J(x_{s i}, y_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeqMor<M> {
    pub s: Vec<usize>,
    pub u: Vec<M>,
}

/// All functions `{0..k} → {0..n}`, lexicographically, last position fastest.
pub fn functions(k: usize, n: usize) -> Vec<Vec<usize>> {
    product(&vec![(0..n).collect::<Vec<_>>(); k])
}

/// Cartesian product in lexicographic order, last factor fastest.
pub fn product<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::with_capacity(lists.len())];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for v in list {
                let mut p = prefix.clone();
                p.push(v.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// `T` applied to `inner`, keeping sequences of length at most `bound`.
#[derive(Debug, Clone)]
pub struct SeqCat<C> {
    pub inner: C,
    pub bound: usize,
}

impl<C: Category> SeqCat<C> {
    pub fn new(inner: C, bound: usize) -> Self {
        SeqCat { inner, bound }
    }

    pub fn is_typed(&self, m: &SeqMor<C::Mor>, x: &[C::Obj], y: &[C::Obj]) -> bool {
        m.s.len() == y.len()
            && m.u.len() == y.len()
            && m.s.iter().zip(&m.u).zip(y).all(|((&j, u), yi)| j < x.len() && self.inner.hom_set(&x[j], yi).contains(u))
    }

    /// `g ∘ f` for `f: x → y` and `g: y → z`, checking both typings.
    pub fn compose_typed(
        &self,
        g: &SeqMor<C::Mor>,
        f: &SeqMor<C::Mor>,
        x: &[C::Obj],
        y: &[C::Obj],
        z: &[C::Obj],
    ) -> Result<SeqMor<C::Mor>, FpError> {
        if !self.is_typed(f, x, y) || !self.is_typed(g, y, z) {
            return Err(FpError::IllTyped);
        }
        Ok(self.compose_mors(g, f))
    }
}

impl<C: Category> Category for SeqCat<C> {
    type Obj = Vec<C::Obj>;
    type Mor = SeqMor<C::Mor>;

    /// By length, then lexicographically.
    fn all_objects(&self) -> Vec<Self::Obj> {
        let base = self.inner.all_objects();
        (0..=self.bound).flat_map(|len| product(&vec![base.clone(); len])).collect()
    }

    /// By `s`, then by the tuple `u`.
    fn hom_set(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Mor> {
        let mut out = Vec::new();
        for s in functions(y.len(), x.len()) {
            let lists: Vec<Vec<C::Mor>> = s.iter().zip(y).map(|(&j, yi)| self.inner.hom_set(&x[j], yi)).collect();
            for u in product(&lists) {
                out.push(SeqMor { s: s.clone(), u });
            }
        }
        out
    }

    fn identity(&self, x: &Self::Obj) -> Self::Mor {
        SeqMor { s: (0..x.len()).collect(), u: x.iter().map(|o| self.inner.identity(o)).collect() }
    }

    fn compose_mors(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        SeqMor {
            s: g.s.iter().map(|&t| f.s[t]).collect(),
            u: g.s.iter().zip(&g.u).map(|(&t, v)| self.inner.compose_mors(v, &f.u[t])).collect(),
        }
    }
}

/// Morphisms `x → y` in `TA`.
pub fn seq_hom(a: &FinCat, x: &[Obj], y: &[Obj]) -> Vec<SeqMor<Mor>> {
    SeqCat::new(a, x.len().max(y.len())).hom_set(&x.to_vec(), &y.to_vec())
}

/// `(s, u)` followed by `(t, v)`, where `f: x → y` and `g: y → z`.
pub fn seq_compose(
    a: &FinCat,
    g: &SeqMor<Mor>,
    f: &SeqMor<Mor>,
    x: &[Obj],
    y: &[Obj],
    z: &[Obj],
) -> Result<SeqMor<Mor>, FpError> {
    let bound = x.len().max(y.len()).max(z.len());
    SeqCat::new(a, bound).compose_typed(g, f, x, y, z)
}

/// A finite category built from an enumerated one, with the dictionary
/// between labels and indices. Morphisms are numbered by source, target and
/// hom order.
#[derive(Debug, Clone)]
pub struct Materialized<O, M> {
    pub cat: Arc<FinCat>,
    objects: Vec<O>,
    obj_index: HashMap<O, Obj>,
    mors: Vec<M>,
    mor_index: HashMap<(Obj, Obj, M), Mor>,
}

impl<O: Clone + Eq + Hash, M: Clone + Eq + Hash> Materialized<O, M> {
    pub fn objects(&self) -> &[O] {
        &self.objects
    }

    pub fn object(&self, x: Obj) -> &O {
        &self.objects[x]
    }

    pub fn index_of(&self, o: &O) -> Option<Obj> {
        self.obj_index.get(o).copied()
    }

    pub fn morphism(&self, m: Mor) -> &M {
        &self.mors[m]
    }

    pub fn mor_index_of(&self, x: Obj, y: Obj, m: &M) -> Option<Mor> {
        self.mor_index.get(&(x, y, m.clone())).copied()
    }
}

/// Builds the composition table and checks the category laws on it.
pub fn materialize<C: Category>(c: &C) -> Result<Materialized<C::Obj, C::Mor>, FpError> {
    let objects = c.all_objects();
    let obj_index: HashMap<C::Obj, Obj> = objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
    let mut ends = Vec::new();
    let mut mors = Vec::new();
    let mut mor_index = HashMap::new();
    for (xi, x) in objects.iter().enumerate() {
        for (yi, y) in objects.iter().enumerate() {
            for m in c.hom_set(x, y) {
                mor_index.insert((xi, yi, m.clone()), mors.len());
                ends.push((xi, yi));
                mors.push(m);
            }
        }
    }
    let identity = objects.iter().enumerate().map(|(xi, x)| mor_index[&(xi, xi, c.identity(x))]).collect();
    let cat = FinCat::from_parts(objects.len(), &ends, identity, |g, f| {
        let key = (ends[f].0, ends[g].1, c.compose_mors(&mors[g], &mors[f]));
        mor_index.get(&key).copied().ok_or(CategoryError::MissingComposite { g, f })
    })?;
    Ok(Materialized { cat: Arc::new(cat), objects, obj_index, mors, mor_index })
}

/// The materialized truncation `T_L A`.
#[derive(Debug, Clone)]
pub struct TCat {
    pub base: Arc<FinCat>,
    pub bound: usize,
    pub mat: Materialized<Vec<Obj>, SeqMor<Mor>>,
}

impl TCat {
    pub fn new(base: &Arc<FinCat>, bound: usize) -> Result<Self, FpError> {
        let mat = materialize(&SeqCat::new(base.clone(), bound))?;
        Ok(TCat { base: base.clone(), bound, mat })
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.mat.cat
    }

    pub fn seq(&self, x: Obj) -> &[Obj] {
        self.mat.object(x)
    }

    pub fn index_of(&self, seq: &[Obj]) -> Result<Obj, FpError> {
        self.mat.index_of(&seq.to_vec()).ok_or(FpError::TruncationExceeded { length: seq.len(), bound: self.bound })
    }

    /// `ι_A: A → TA`, sending objects and morphisms to singleton sequences.
    pub fn iota(&self) -> FinFunctor {
        let a = &self.base;
        let obj: Vec<Obj> = (0..a.objects()).map(|x| self.mat.obj_index[&vec![x]]).collect();
        let mor = (0..a.morphisms())
            .map(|u| self.mat.mor_index[&(obj[a.src(u)], obj[a.tgt(u)], SeqMor { s: vec![0], u: vec![u] })])
            .collect();
        FinFunctor::new(a.clone(), self.cat().clone(), obj, mor).expect("unit is a functor")
    }
}

/// `Tf: TA → TC`, applying `f` entrywise.
pub fn t_functor(f: &FinFunctor, ta: &TCat, tc: &TCat) -> Result<FinFunctor, FpError> {
    if **f.dom() != *ta.base || **f.cod() != *tc.base || ta.bound != tc.bound {
        return Err(FpError::Boundary);
    }
    let obj: Vec<Obj> =
        ta.mat.objects().iter().map(|x| tc.mat.obj_index[&x.iter().map(|&o| f.obj(o)).collect::<Vec<_>>()]).collect();
    let c = ta.cat();
    let mor = (0..c.morphisms())
        .map(|m| {
            let (s, u) = (&ta.mat.morphism(m).s, &ta.mat.morphism(m).u);
            let image = SeqMor { s: s.clone(), u: u.iter().map(|&v| f.mor(v)).collect() };
            tc.mat.mor_index[&(obj[c.src(m)], obj[c.tgt(m)], image)]
        })
        .collect();
    Ok(FinFunctor::new(ta.cat().clone(), tc.cat().clone(), obj, mor)?)
}

/// `TJ: TA ⇸ TB` with
/// `TJ((x_0..x_{n-1}), (y_0..y_{k-1})) = Σ_s Π_i J(x_{s i}, y_i)`.
#[derive(Debug, Clone)]
pub struct TProf {
    pub base: Profunctor,
    pub prof: Profunctor,
    src_seqs: Vec<Vec<Obj>>,
    tgt_seqs: Vec<Vec<Obj>>,
    elems: Vec<Vec<SeqMor<usize>>>,
    index: Vec<HashMap<SeqMor<usize>, usize>>,
}

impl TProf {
    fn slot(&self, x: Obj, y: Obj) -> usize {
        x * self.tgt_seqs.len() + y
    }

    /// Element `k` of the fiber over `(x, y)`, as `(s, e)`.
    pub fn element(&self, x: Obj, y: Obj, k: usize) -> &SeqMor<usize> {
        &self.elems[self.slot(x, y)][k]
    }

    pub fn index_of(&self, x: Obj, y: Obj, e: &SeqMor<usize>) -> Option<usize> {
        self.index[self.slot(x, y)].get(e).copied()
    }
}

/// Fibers are ordered by `s`, then by the tuple of elements, so that
/// `T(1_A) = 1_{TA}` holds on the nose.
pub fn t_profunctor(j: &Profunctor, ta: &TCat, tb: &TCat) -> Result<TProf, FpError> {
    if **j.dom() != *ta.base || **j.cod() != *tb.base {
        return Err(FpError::Boundary);
    }
    let src_seqs = ta.mat.objects().to_vec();
    let tgt_seqs = tb.mat.objects().to_vec();
    let nb = tgt_seqs.len();
    let mut elems = Vec::with_capacity(src_seqs.len() * nb);
    let mut index = Vec::with_capacity(src_seqs.len() * nb);
    for x in &src_seqs {
        for y in &tgt_seqs {
            let mut fiber = Vec::new();
            for s in functions(y.len(), x.len()) {
                let lists: Vec<Vec<usize>> = s.iter().zip(y).map(|(&i, &yi)| (0..j.size(x[i], yi)).collect()).collect();
                for e in product(&lists) {
                    fiber.push(SeqMor { s: s.clone(), u: e });
                }
            }
            index.push(fiber.iter().cloned().enumerate().map(|(k, e)| (e, k)).collect::<HashMap<_, _>>());
            elems.push(fiber);
        }
    }
    let (ca, cb) = (ta.cat(), tb.cat());
    let prof = Profunctor::from_fn(
        ca.clone(),
        cb.clone(),
        |x, y| elems[x * nb + y].len(),
        |alpha, y, k| {
            let (x2, x) = (ca.src(alpha), ca.tgt(alpha));
            let m = ta.mat.morphism(alpha);
            let e = &elems[x * nb + y][k];
            let image = SeqMor {
                s: e.s.iter().map(|&i| m.s[i]).collect(),
                u: e.s.iter().zip(&e.u).zip(&tgt_seqs[y]).map(|((&i, &v), &yi)| j.left(m.u[i], yi, v)).collect(),
            };
            index[x2 * nb + y][&image]
        },
        |beta, x, k| {
            let (y, y2) = (cb.src(beta), cb.tgt(beta));
            let m = tb.mat.morphism(beta);
            let e = &elems[x * nb + y][k];
            let image = SeqMor {
                s: m.s.iter().map(|&r| e.s[r]).collect(),
                u: m.s.iter().zip(&m.u).map(|(&r, &w)| j.right(w, src_seqs[x][e.s[r]], e.u[r])).collect(),
            };
            index[x * nb + y2][&image]
        },
    )
    .map_err(|_| FpError::Boundary)?;
    Ok(TProf { base: j.clone(), prof, src_seqs, tgt_seqs, elems, index })
}

/// `Tφ: TJ ⇒ TK` along `Tf, Tg`, applying `φ` entrywise.
pub fn t_cell(phi: &ProCell, tj: &TProf, tk: &TProf, tf: &FinFunctor, tg: &FinFunctor) -> Result<ProCell, FpError> {
    if tj.base != *phi.src() || tk.base != *phi.tgt() {
        return Err(FpError::Boundary);
    }
    let (na, nb) = (tj.src_seqs.len(), tj.tgt_seqs.len());
    let mut comps = Vec::with_capacity(na * nb);
    for x in 0..na {
        for y in 0..nb {
            let (xs, ys) = (&tj.src_seqs[x], &tj.tgt_seqs[y]);
            let (fx, gy) = (tf.obj(x), tg.obj(y));
            let comp = tj.elems[tj.slot(x, y)]
                .iter()
                .map(|e| {
                    let image = SeqMor {
                        s: e.s.clone(),
                        u: e.s.iter().zip(&e.u).zip(ys).map(|((&i, &v), &yi)| phi.apply(xs[i], yi, v)).collect(),
                    };
                    tk.index_of(fx, gy, &image).ok_or(FpError::Boundary)
                })
                .collect::<Result<Vec<_>, _>>()?;
            comps.push(comp);
        }
    }
    Ok(ProCell::new(tj.prof.clone(), tk.prof.clone(), tf.clone(), tg.clone(), comps)?)
}

/// `ι_J: J ⇒ TJ` along `ι_A, ι_B`, `e ↦ ((0), (e))`.
pub fn iota_cell(tj: &TProf, ia: &FinFunctor, ib: &FinFunctor) -> Result<ProCell, FpError> {
    let j = &tj.base;
    Ok(ProCell::from_fn(j.clone(), tj.prof.clone(), ia.clone(), ib.clone(), |a, b, e| {
        tj.index_of(ia.obj(a), ib.obj(b), &SeqMor { s: vec![0], u: vec![e] }).expect("singleton element")
    })?)
}

/// `μ` on objects: concatenation.
pub fn mu_obj<O: Clone>(xs: &[Vec<O>], bound: usize) -> Result<Vec<O>, FpError> {
    let flat: Vec<O> = xs.iter().flatten().cloned().collect();
    if flat.len() > bound {
        return Err(FpError::TruncationExceeded { length: flat.len(), bound });
    }
    Ok(flat)
}

/// `μ` on a morphism out of `src`. Position `i` of block `j` of the target
/// comes from position `v_j.s[i]` of block `t[j]` of the source.
pub fn mu_mor<O, M: Clone>(src: &[Vec<O>], m: &SeqMor<SeqMor<M>>, bound: usize) -> Result<SeqMor<M>, FpError> {
    let mut offsets = Vec::with_capacity(src.len());
    let mut total = 0;
    for block in src {
        offsets.push(total);
        total += block.len();
    }
    let mut out = SeqMor { s: Vec::new(), u: Vec::new() };
    for (&t, v) in m.s.iter().zip(&m.u) {
        for (&i, u) in v.s.iter().zip(&v.u) {
            out.s.push(offsets[t] + i);
            out.u.push(u.clone());
        }
    }
    if total > bound || out.s.len() > bound {
        return Err(FpError::TruncationExceeded { length: total.max(out.s.len()), bound });
    }
    Ok(out)
}

/// Outcome of the monad laws at a truncation, counted over objects and
/// morphisms where both sides are defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonadLawReport {
    pub left_unit: bool,
    pub right_unit: bool,
    pub associativity: bool,
    pub morphisms_checked: usize,
}

impl MonadLawReport {
    pub fn holds(&self) -> bool {
        self.left_unit && self.right_unit && self.associativity
    }
}

pub fn monad_laws(a: &FinCat, bound: usize) -> MonadLawReport {
    let t1 = SeqCat::new(a, bound);
    let mut checked = 0;
    let (mut left_unit, mut right_unit) = (true, true);
    let objs = t1.all_objects();
    for x in &objs {
        for y in &objs {
            for m in t1.hom_set(x, y) {
                checked += 1;
                // μ ∘ ιT
                let single = SeqMor { s: vec![0], u: vec![m.clone()] };
                left_unit &= mu_obj(std::slice::from_ref(x), bound).as_ref() == Ok(x)
                    && mu_mor(std::slice::from_ref(x), &single, bound).as_ref() == Ok(&m);
                // μ ∘ Tι
                let blocks: Vec<Vec<Obj>> = x.iter().map(|&o| vec![o]).collect();
                let lifted =
                    SeqMor { s: m.s.clone(), u: m.u.iter().map(|&u| SeqMor { s: vec![0], u: vec![u] }).collect() };
                right_unit &=
                    mu_obj(&blocks, bound).as_ref() == Ok(x) && mu_mor(&blocks, &lifted, bound).as_ref() == Ok(&m);
            }
        }
    }
    let t3 = SeqCat::new(SeqCat::new(SeqCat::new(a, bound), bound), bound);
    let defined = |xs: &Vec<Vec<Vec<Obj>>>| {
        let outer: usize = xs.iter().map(Vec::len).sum();
        let flat: usize = xs.iter().flatten().map(Vec::len).sum();
        outer <= bound && flat <= bound
    };
    let objs3: Vec<_> = t3.all_objects().into_iter().filter(defined).collect();
    let mut associativity = true;
    for x in &objs3 {
        for y in &objs3 {
            for m in t3.hom_set(x, y) {
                checked += 1;
                let via_outer = mu_obj(x, bound)
                    .and_then(|mx| Ok((mu_obj(&mx, bound)?, mu_mor(&mx, &mu_mor(x, &m, bound)?, bound)?)));
                let inner_x: Result<Vec<Vec<Obj>>, _> = x.iter().map(|b| mu_obj(b, bound)).collect();
                let via_inner = inner_x.and_then(|ix| {
                    let u =
                        m.s.iter().zip(&m.u).map(|(&t, v)| mu_mor(&x[t], v, bound)).collect::<Result<Vec<_>, _>>()?;
                    let tm = SeqMor { s: m.s.clone(), u };
                    Ok((mu_obj(&ix, bound)?, mu_mor(&ix, &tm, bound)?))
                });
                associativity &= via_outer.is_ok() && via_outer == via_inner;
            }
        }
    }
    MonadLawReport { left_unit, right_unit, associativity, morphisms_checked: checked }
}

/// The compositor `TJ ⊙ TH ⇒ T(J ⊙ H)`,
/// `[(s, e), (t, h)] ↦ (s∘t, ([e_{t j}, h_j])_j)`.
#[derive(Debug, Clone)]
pub struct Compositor {
    pub cell: ProCell,
    pub iso: bool,
}

pub fn compositor(j: &Profunctor, h: &Profunctor, bound: usize) -> Result<Compositor, FpError> {
    let ta = TCat::new(j.dom(), bound)?;
    let tb = TCat::new(j.cod(), bound)?;
    let tc = TCat::new(h.cod(), bound)?;
    let jh = compose(j, h)?;
    let tj = t_profunctor(j, &ta, &tb)?;
    let th = t_profunctor(h, &tb, &tc)?;
    let tjh = t_profunctor(&jh.prof, &ta, &tc)?;
    let src = compose(&tj.prof, &th.prof)?;
    let cell = ProCell::from_composite(
        &src,
        tjh.prof.clone(),
        FinFunctor::identity(ta.cat().clone()),
        FinFunctor::identity(tc.cat().clone()),
        |x, z, y, p, q| {
            let (xs, ys, zs) = (ta.seq(x), tb.seq(y), tc.seq(z));
            let (e, hh) = (tj.element(x, y, p), th.element(y, z, q));
            let image = SeqMor {
                s: hh.s.iter().map(|&t| e.s[t]).collect(),
                u: hh
                    .s
                    .iter()
                    .zip(&hh.u)
                    .zip(zs)
                    .map(|((&t, &hv), &zj)| jh.class_of(xs[e.s[t]], zj, ys[t], e.u[t], hv))
                    .collect(),
            };
            tjh.index_of(x, z, &image).expect("compositor lands in the fiber")
        },
    )?;
    let iso = cell.is_iso();
    Ok(Compositor { cell, iso })
}

/// The compositor on `f_* ⊙ h_*` for composable functors `f`, `h`.
pub fn compositor_on_companions(f: &FinFunctor, h: &FinFunctor, bound: usize) -> Result<Compositor, FpError> {
    compositor(&companion(f).prof, &companion(h).prof, bound)
}

/// Naturality of `ι` at the companion of `f: A → C`: `T(cart_f) ∘ ι_{f_*}`
/// equals `1_{ι_C} ∘ cart_f`, both as cells `f_* ⇒ 1_{TC}`.
pub fn iota_naturality_on_companion(f: &FinFunctor, bound: usize) -> Result<bool, FpError> {
    let ta = TCat::new(f.dom(), bound)?;
    let tc = TCat::new(f.cod(), bound)?;
    let (ia, ic) = (ta.iota(), tc.iota());
    let fs = companion(f);
    let t_fs = t_profunctor(&fs.prof, &ta, &tc)?;
    let t_one = t_profunctor(&Profunctor::hom(f.cod()), &tc, &tc)?;
    let tf = t_functor(f, &ta, &tc)?;
    let t_cart = t_cell(&fs.cart, &t_fs, &t_one, &tf, &FinFunctor::identity(tc.cat().clone()))?;
    let lhs = iota_cell(&t_fs, &ia, &ic)?.vcompose(&t_cart)?;
    let rhs = fs.cart.vcompose(&ProCell::unit(&ic))?;
    Ok(lhs == rhs)
}

/// One component of `ι_{J*}` at `(a, ys)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RbcComponent {
    pub a: Obj,
    pub ys: Vec<Obj>,
    pub source: usize,
    pub target: usize,
    pub bijective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RbcReport {
    pub lengths: Vec<usize>,
    pub components: Vec<RbcComponent>,
}

impl RbcReport {
    pub fn passed(&self) -> bool {
        self.components.iter().all(|c| c.bijective)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RbcComponent> {
        self.components.iter().filter(|c| !c.bijective)
    }
}

fn is_bijection(comp: &[usize], n: usize) -> bool {
    if comp.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    comp.iter().all(|&v| !std::mem::replace(&mut hit[v], true))
}

/// `ι_{J*}` at every `(a, ys)` with `|ys| ≤ L`.
pub fn iota_star_rbc(j: &Profunctor, bound: Truncation) -> Result<RbcReport, FpError> {
    iota_star_rbc_at(j, &(0..=bound.bound()).collect::<Vec<_>>())
}

/// `ι_{J*}` at sequences of the given lengths only. The source
/// `(J ⊙ ι_{B*})(a, ys)` is computed as `∫^b J(a,b) × Π_i B(b, y_i)` and
/// the target `(ι_{A*} ⊙ TJ)(a, ys)` as `Π_i J(a, y_i)`; the component is
/// `[x, (β_i)] ↦ (x·β_i)_i`.
pub fn iota_star_rbc_at(j: &Profunctor, lengths: &[usize]) -> Result<RbcReport, FpError> {
    let (a_cat, b_cat) = (j.dom().clone(), j.cod().clone());
    let objs: Vec<Obj> = (0..b_cat.objects()).collect();
    let ys: Vec<Vec<Obj>> = lengths.iter().flat_map(|&k| product(&vec![objs.clone(); k])).collect();
    let disc = Arc::new(FinCat::discrete(ys.len()));
    let hom_sizes = |b: Obj, y: &[Obj]| -> Vec<usize> { y.iter().map(|&yi| b_cat.hom(b, yi).len()).collect() };
    let legs = Profunctor::from_fn_unchecked(
        b_cat.clone(),
        disc.clone(),
        |b, yi| hom_sizes(b, &ys[yi]).iter().product(),
        |alpha, yi, code| {
            let (b2, b) = (b_cat.src(alpha), b_cat.tgt(alpha));
            let y = &ys[yi];
            let pos = decode(code, hom_sizes(b, y).into_iter());
            encode(y.iter().zip(pos).map(|(&t, p)| {
                let beta = b_cat.hom(b, t)[p];
                (b_cat.hom_index(b_cat.compose(beta, alpha)), b_cat.hom(b2, t).len())
            }))
        },
        |_, _, code| code,
    );
    let j_sizes = |a: Obj, y: &[Obj]| -> Vec<usize> { y.iter().map(|&yi| j.size(a, yi)).collect() };
    let target = Profunctor::from_fn_unchecked(
        a_cat.clone(),
        disc.clone(),
        |a, yi| j_sizes(a, &ys[yi]).iter().product(),
        |alpha, yi, code| {
            let (a2, a) = (a_cat.src(alpha), a_cat.tgt(alpha));
            let y = &ys[yi];
            let es = decode(code, j_sizes(a, y).into_iter());
            encode(y.iter().zip(es).map(|(&t, e)| (j.left(alpha, t, e), j.size(a2, t))))
        },
        |_, _, code| code,
    );
    let src = compose(j, &legs)?;
    let cell = ProCell::from_composite(
        &src,
        target.clone(),
        FinFunctor::identity(a_cat.clone()),
        FinFunctor::identity(disc.clone()),
        |a, yi, b, x, code| {
            let y = &ys[yi];
            let pos = decode(code, hom_sizes(b, y).into_iter());
            encode(y.iter().zip(pos).map(|(&t, p)| (j.right(b_cat.hom(b, t)[p], a, x), j.size(a, t))))
        },
    )?;
    let mut components = Vec::with_capacity(a_cat.objects() * ys.len());
    for a in 0..a_cat.objects() {
        for (yi, y) in ys.iter().enumerate() {
            let n = target.size(a, yi);
            components.push(RbcComponent {
                a,
                ys: y.clone(),
                source: src.prof.size(a, yi),
                target: n,
                bijective: is_bijection(cell.component(a, yi), n),
            });
        }
    }
    Ok(RbcReport { lengths: lengths.to_vec(), components })
}

/// `ι_{J*}` as the literal pasting over materialized truncations:
/// `J ⊙ ι_{B*} ≅ (1_A ⊙ J) ⊙ ι_{B*} ⇒ (ι_{A*} ⊙ TJ) ⊙ 1_{TB} ≅ ι_{A*} ⊙ TJ`,
/// with the middle cell `(opcart ⊙ ι_J) ⊙ cart`.
pub fn iota_star_literal(j: &Profunctor, bound: usize) -> Result<(ProCell, TCat), FpError> {
    let ta = TCat::new(j.dom(), bound)?;
    let tb = TCat::new(j.cod(), bound)?;
    let (ia, ib) = (ta.iota(), tb.iota());
    let ias = companion(&ia);
    let ibs = companion(&ib);
    let tj = t_profunctor(j, &ta, &tb)?;
    let iota_j = iota_cell(&tj, &ia, &ib)?;
    let middle = ias.opcart.hcompose(&iota_j)?.hcompose(&ibs.cart)?;
    let pre = left_unitor_inv(j).hcompose(&ProCell::identity(&ibs.prof))?;
    let inner = compose(&ias.prof, &tj.prof)?;
    let post = right_unitor(&inner.prof);
    let cell = pre.vcompose(&middle)?.vcompose(&post)?;
    Ok((cell, tb))
}

/// The literal pasting, reported in the same shape as [`iota_star_rbc`].
pub fn iota_star_rbc_literal(j: &Profunctor, bound: usize) -> Result<RbcReport, FpError> {
    let (cell, tb) = iota_star_literal(j, bound)?;
    let mut components = Vec::new();
    for a in 0..j.dom().objects() {
        for (yi, y) in tb.mat.objects().iter().enumerate() {
            let n = cell.tgt().size(a, yi);
            components.push(RbcComponent {
                a,
                ys: y.clone(),
                source: cell.src().size(a, yi),
                target: n,
                bijective: is_bijection(cell.component(a, yi), n),
            });
        }
    }
    Ok(RbcReport { lengths: (0..=bound).collect(), components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kanext::Copresheaf;
    use crate::prof::conjoint;

    fn arrow() -> Arc<FinCat> {
        Arc::new(FinCat::chain(2))
    }

    fn square() -> Arc<FinCat> {
        Arc::new(FinCat::preorder_closure(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap())
    }

    fn count_formula(a: &FinCat, x: &[Obj], y: &[Obj]) -> usize {
        // Σ_s Π_i |A(x_{s i}, y_i)|, iterating s as a base-n counter
        let (n, k) = (x.len(), y.len());
        if k == 0 {
            return 1;
        }
        if n == 0 {
            return 0;
        }
        let mut total = 0;
        for code in 0..n.pow(k as u32) {
            let mut c = code;
            let mut prod = 1;
            for &yi in y {
                prod *= a.hom(x[c % n], yi).len();
                c /= n;
            }
            total += prod;
        }
        total
    }

    #[test]
    fn hom_counts_over_the_point() {
        let one = FinCat::terminal();
        for n in 0..4 {
            for k in 0..4 {
                let got = seq_hom(&one, &vec![0; n], &vec![0; k]).len();
                assert_eq!(got, n.pow(k as u32), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn hom_counts_match_formula() {
        let a = square();
        let seqs: Vec<Vec<Obj>> = SeqCat::new(&*a, 2).all_objects();
        for x in &seqs {
            for y in &seqs {
                assert_eq!(seq_hom(&a, x, y).len(), count_formula(&a, x, y));
            }
        }
        assert_eq!(seq_hom(&a, &[], &[]), vec![SeqMor { s: vec![], u: vec![] }]);
        assert_eq!(seq_hom(&a, &[1, 2], &[]).len(), 1);
        assert!(seq_hom(&a, &[], &[0]).is_empty());
    }

    #[test]
    fn composition_over_point_is_function_composition() {
        let one = FinCat::terminal();
        let t = SeqCat::new(&one, 2);
        for n in 0..3 {
            for k in 0..3 {
                for m in 0..3 {
                    let (x, y, z) = (vec![0; n], vec![0; k], vec![0; m]);
                    for f in t.hom_set(&x, &y) {
                        for g in t.hom_set(&y, &z) {
                            let gf = seq_compose(&one, &g, &f, &x, &y, &z).unwrap();
                            let expect: Vec<usize> = (0..m).map(|j| f.s[g.s[j]]).collect();
                            assert_eq!(gf.s, expect);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn composition_checks_typing() {
        let a = arrow();
        let f = SeqMor { s: vec![0], u: vec![1] };
        let err = seq_compose(&a, &f, &f, &[0], &[1], &[1]);
        assert_eq!(err, Err(FpError::IllTyped));
        let id1 = SeqMor { s: vec![0], u: vec![a.id(1)] };
        assert_eq!(seq_compose(&a, &id1, &f, &[0], &[1], &[1]).unwrap(), f);
    }

    #[test]
    fn truncations_are_categories() {
        for a in [arrow(), square(), Arc::new(FinCat::discrete(2))] {
            let t = TCat::new(&a, 2).unwrap();
            let n = a.objects();
            assert_eq!(t.cat().objects(), 1 + n + n * n);
        }
    }

    #[test]
    fn t_of_hom_is_hom_of_t() {
        for a in [arrow(), Arc::new(FinCat::discrete(2))] {
            let t = TCat::new(&a, 2).unwrap();
            let th = t_profunctor(&Profunctor::hom(&a), &t, &t).unwrap();
            assert_eq!(th.prof, Profunctor::hom(t.cat()));
        }
    }

    #[test]
    fn t_fiber_sizes() {
        let a = square();
        let j = Profunctor::hom(&a);
        let t = TCat::new(&a, 2).unwrap();
        let tj = t_profunctor(&j, &t, &t).unwrap();
        let at = |s: &[Obj]| t.index_of(s).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(tj.prof.size(at(&[x]), at(&[y])), j.size(x, y));
                assert_eq!(tj.prof.size(at(&[x, y]), at(&[])), 1);
                for y2 in 0..4 {
                    assert_eq!(tj.prof.size(at(&[x]), at(&[y, y2])), j.size(x, y) * j.size(x, y2));
                }
            }
        }
    }

    #[test]
    fn t_on_functors_and_cells() {
        let a = arrow();
        let c = square();
        let t = TCat::new(&a, 2).unwrap();
        let tc = TCat::new(&c, 2).unwrap();
        let id = t_functor(&FinFunctor::identity(a.clone()), &t, &t).unwrap();
        assert_eq!(id, FinFunctor::identity(t.cat().clone()));
        let f = FinFunctor::monotone(a.clone(), c.clone(), vec![0, 1]).unwrap();
        let tf = t_functor(&f, &t, &tc).unwrap();
        let fs = companion(&f);
        let t_fs = t_profunctor(&fs.prof, &t, &tc).unwrap();
        let t_one = t_profunctor(&Profunctor::hom(&c), &tc, &tc).unwrap();
        let cart = t_cell(&fs.cart, &t_fs, &t_one, &tf, &FinFunctor::identity(tc.cat().clone())).unwrap();
        assert!(cart.is_cartesian());
        let j = Profunctor::hom(&a);
        let tj = t_profunctor(&j, &t, &t).unwrap();
        let ident = t_cell(&ProCell::identity(&j), &tj, &tj, &id, &id).unwrap();
        assert!(ident.is_iso());
        assert_eq!(ident, ProCell::identity(&tj.prof));
    }

    #[test]
    fn iota_cells_are_bijective_and_natural() {
        let a = square();
        let d = Copresheaf::new(arrow(), vec![2, 1], vec![vec![0, 1], vec![0, 0], vec![0]]).unwrap();
        for j in [Profunctor::hom(&a), conjoint(&FinFunctor::constant(arrow(), a.clone(), 1)).prof, d.to_profunctor()] {
            let ta = TCat::new(j.dom(), 2).unwrap();
            let tb = TCat::new(j.cod(), 2).unwrap();
            let tj = t_profunctor(&j, &ta, &tb).unwrap();
            assert!(iota_cell(&tj, &ta.iota(), &tb.iota()).unwrap().is_iso());
        }
        let one = TCat::new(&Arc::new(FinCat::terminal()), 2).unwrap();
        assert_eq!(one.iota().obj(0), one.index_of(&[0]).unwrap());
        let f = FinFunctor::monotone(arrow(), a.clone(), vec![1, 3]).unwrap();
        assert!(iota_naturality_on_companion(&f, 2).unwrap());
        assert!(iota_naturality_on_companion(&FinFunctor::identity(a), 2).unwrap());
    }

    #[test]
    fn flattening() {
        let xs = vec![vec!['x'], vec!['y', 'z']];
        assert_eq!(mu_obj(&xs, 3).unwrap(), vec!['x', 'y', 'z']);
        assert_eq!(mu_obj(&xs, 2), Err(FpError::TruncationExceeded { length: 3, bound: 2 }));
        // (t, v) from ((x),(y,z)) to ((z, y)): picks the second block, swaps it
        let m = SeqMor { s: vec![1], u: vec![SeqMor { s: vec![1, 0], u: vec!['c', 'b'] }] };
        assert_eq!(mu_mor(&xs, &m, 3).unwrap(), SeqMor { s: vec![2, 1], u: vec!['c', 'b'] });
    }

    #[test]
    fn monad_laws_at_two() {
        let r = monad_laws(&FinCat::chain(2), 2);
        assert!(r.holds(), "{r:?}");
        assert!(r.morphisms_checked > 0);
    }

    #[test]
    fn compositors() {
        let c3 = Arc::new(FinCat::chain(3));
        let id = FinFunctor::identity(c3.clone());
        let comp = compositor_on_companions(&id, &id, 2).unwrap();
        assert!(comp.iso);
        let f = FinFunctor::monotone(c3.clone(), c3.clone(), vec![0, 0, 2]).unwrap();
        let h = FinFunctor::monotone(c3.clone(), c3.clone(), vec![1, 2, 2]).unwrap();
        assert!(compositor_on_companions(&f, &h, 2).unwrap().iso);
    }

    #[test]
    fn rbc_for_companions() {
        let a = square();
        let f = FinFunctor::monotone(arrow(), a.clone(), vec![0, 3]).unwrap();
        let r = iota_star_rbc(&companion(&f).prof, Truncation::default()).unwrap();
        assert!(r.passed());
        let one = Arc::new(FinCat::terminal());
        assert!(iota_star_rbc(&Profunctor::hom(&one), Truncation::default()).unwrap().passed());
    }

    #[test]
    fn rbc_fails_for_disconnected_elements() {
        let d = Copresheaf::constant(Arc::new(FinCat::discrete(2)), 1).to_profunctor();
        let r = iota_star_rbc(&d, Truncation::default()).unwrap();
        let first = r.failures().next().unwrap();
        assert_eq!((first.ys.as_slice(), first.source, first.target), (&[][..], 2, 1));
    }

    #[test]
    fn literal_pasting_agrees() {
        let a = arrow();
        let cases = vec![
            Copresheaf::constant(Arc::new(FinCat::discrete(2)), 1).to_profunctor(),
            Copresheaf::new(a.clone(), vec![2, 1], vec![vec![0, 1], vec![0, 0], vec![0]]).unwrap().to_profunctor(),
            Profunctor::hom(&a),
            conjoint(&FinFunctor::constant(a.clone(), a.clone(), 1)).prof,
        ];
        for j in cases {
            let fast = iota_star_rbc(&j, Truncation::new(2).unwrap()).unwrap();
            let slow = iota_star_rbc_literal(&j, 2).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn truncation_bound() {
        assert_eq!(Truncation::new(1), Err(FpError::BoundTooSmall(1)));
        assert_eq!(Truncation::default().bound(), 3);
    }
}
