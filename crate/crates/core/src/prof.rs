//! Profunctors between finite categories and the cells between them.
//!
//! A profunctor `J: A ⇸ B` assigns to each pair `(a, b)` a finite set
//! `J(a, b) = {0, …, n-1}`. Morphisms `α: a′ → a` of `A` act on the left,
//! `J(a, b) → J(a′, b)`, written `α·x`; morphisms `β: b → b′` of `B` act on
//! the right, `J(a, b) → J(a, b′)`, written `x·β`.

use std::fmt;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::fincat::{FinCat, FinFunctor, Mor, NatTransf, Obj};

/// Pointer equality first, structural equality second.
pub(crate) fn same_cat(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn same_functor(f: &FinFunctor, g: &FinFunctor) -> bool {
    same_cat(f.dom(), g.dom()) && same_cat(f.cod(), g.cod()) && f.obj_map() == g.obj_map() && f.mor_map() == g.mor_map()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfError {
    #[error("action of morphism {mor} on fiber ({a},{b}) sends element {x} out of range")]
    OutOfRange { mor: Mor, a: Obj, b: Obj, x: usize },
    #[error("identity at object {0} does not act trivially")]
    Identity(Obj),
    #[error("left action is not functorial at the pair ({0}, {1})")]
    LeftFunctoriality(Mor, Mor),
    #[error("right action is not functorial at the pair ({0}, {1})")]
    RightFunctoriality(Mor, Mor),
    #[error("left action of {alpha} and right action of {beta} do not commute")]
    Commutation { alpha: Mor, beta: Mor },
    #[error("table shape does not match the categories")]
    Shape,
}

#[derive(PartialEq, Eq)]
struct ProfData {
    dom: Arc<FinCat>,
    cod: Arc<FinCat>,
    sizes: Vec<usize>,
    // left[α][b]: J(tgt α, b) → J(src α, b)
    left: Vec<Vec<Vec<usize>>>,
    // right[β][a]: J(a, src β) → J(a, tgt β)
    right: Vec<Vec<Vec<usize>>>,
}

/// A profunctor `dom ⇸ cod`. Cloning is cheap.
#[derive(Clone, PartialEq, Eq)]
pub struct Profunctor(Arc<ProfData>);

impl fmt::Debug for Profunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nb = self.0.cod.objects();
        let rows: Vec<&[usize]> = self.0.sizes.chunks(nb.max(1)).collect();
        f.debug_struct("Profunctor").field("sizes", &rows).finish()
    }
}

impl Profunctor {
    fn build(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        size: impl Fn(Obj, Obj) -> usize,
        left: impl Fn(Mor, Obj, usize) -> usize,
        right: impl Fn(Mor, Obj, usize) -> usize,
    ) -> Self {
        let (na, nb) = (dom.objects(), cod.objects());
        let mut sizes = Vec::with_capacity(na * nb);
        for a in 0..na {
            for b in 0..nb {
                sizes.push(size(a, b));
            }
        }
        let left = (0..dom.morphisms())
            .map(|alpha| {
                let a = dom.tgt(alpha);
                (0..nb).map(|b| (0..sizes[a * nb + b]).map(|x| left(alpha, b, x)).collect()).collect()
            })
            .collect();
        let right = (0..cod.morphisms())
            .map(|beta| {
                let b = cod.src(beta);
                (0..na).map(|a| (0..sizes[a * nb + b]).map(|x| right(beta, a, x)).collect()).collect()
            })
            .collect();
        Profunctor(Arc::new(ProfData { dom, cod, sizes, left, right }))
    }

    /// Builds and validates a profunctor from its fiber sizes and actions.
    /// `left(α, b, x)` is `α·x` for `x ∈ J(tgt α, b)`; `right(β, a, x)` is
    /// `x·β` for `x ∈ J(a, src β)`.
    pub fn from_fn(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        size: impl Fn(Obj, Obj) -> usize,
        left: impl Fn(Mor, Obj, usize) -> usize,
        right: impl Fn(Mor, Obj, usize) -> usize,
    ) -> Result<Self, ProfError> {
        let p = Self::build(dom, cod, size, left, right);
        p.validate()?;
        Ok(p)
    }

    /// Same as [`Profunctor::from_fn`] without the law checks. For
    /// constructions whose laws hold by construction.
    pub(crate) fn from_fn_unchecked(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        size: impl Fn(Obj, Obj) -> usize,
        left: impl Fn(Mor, Obj, usize) -> usize,
        right: impl Fn(Mor, Obj, usize) -> usize,
    ) -> Self {
        Self::build(dom, cod, size, left, right)
    }

    /// From explicit tables: `sizes[a][b]`, `left[α][b]`, `right[β][a]`.
    pub fn from_tables(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        sizes: Vec<Vec<usize>>,
        left: Vec<Vec<Vec<usize>>>,
        right: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, ProfError> {
        let (na, nb) = (dom.objects(), cod.objects());
        if sizes.len() != na || sizes.iter().any(|r| r.len() != nb) {
            return Err(ProfError::Shape);
        }
        if left.len() != dom.morphisms() || right.len() != cod.morphisms() {
            return Err(ProfError::Shape);
        }
        for (alpha, rows) in left.iter().enumerate() {
            if rows.len() != nb || (0..nb).any(|b| rows[b].len() != sizes[dom.tgt(alpha)][b]) {
                return Err(ProfError::Shape);
            }
        }
        for (beta, rows) in right.iter().enumerate() {
            if rows.len() != na || (0..na).any(|a| rows[a].len() != sizes[a][cod.src(beta)]) {
                return Err(ProfError::Shape);
            }
        }
        let p = Profunctor(Arc::new(ProfData { dom, cod, sizes: sizes.concat(), left, right }));
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ProfError> {
        let (a_cat, b_cat) = (&self.0.dom, &self.0.cod);
        let (na, nb) = (a_cat.objects(), b_cat.objects());
        for alpha in 0..a_cat.morphisms() {
            let a2 = a_cat.src(alpha);
            for b in 0..nb {
                for (x, &y) in self.0.left[alpha][b].iter().enumerate() {
                    if y >= self.size(a2, b) {
                        return Err(ProfError::OutOfRange { mor: alpha, a: a2, b, x });
                    }
                }
            }
        }
        for beta in 0..b_cat.morphisms() {
            let b2 = b_cat.tgt(beta);
            for a in 0..na {
                for (x, &y) in self.0.right[beta][a].iter().enumerate() {
                    if y >= self.size(a, b2) {
                        return Err(ProfError::OutOfRange { mor: beta, a, b: b2, x });
                    }
                }
            }
        }
        for a in 0..na {
            let id = a_cat.id(a);
            if (0..nb).any(|b| self.0.left[id][b].iter().enumerate().any(|(x, &y)| x != y)) {
                return Err(ProfError::Identity(a));
            }
        }
        for b in 0..nb {
            let id = b_cat.id(b);
            if (0..na).any(|a| self.0.right[id][a].iter().enumerate().any(|(x, &y)| x != y)) {
                return Err(ProfError::Identity(b));
            }
        }
        // (α ∘ α′)·x = α′·(α·x)
        for alpha2 in 0..a_cat.morphisms() {
            for a in 0..na {
                for &alpha in a_cat.hom(a_cat.tgt(alpha2), a) {
                    let comp = a_cat.compose(alpha, alpha2);
                    for b in 0..nb {
                        for x in 0..self.size(a, b) {
                            if self.left(comp, b, x) != self.left(alpha2, b, self.left(alpha, b, x)) {
                                return Err(ProfError::LeftFunctoriality(alpha, alpha2));
                            }
                        }
                    }
                }
            }
        }
        // x·(β′ ∘ β) = (x·β)·β′
        for beta in 0..b_cat.morphisms() {
            for b in 0..nb {
                for &beta2 in b_cat.hom(b_cat.tgt(beta), b) {
                    let comp = b_cat.compose(beta2, beta);
                    for a in 0..na {
                        for x in 0..self.size(a, b_cat.src(beta)) {
                            if self.right(comp, a, x) != self.right(beta2, a, self.right(beta, a, x)) {
                                return Err(ProfError::RightFunctoriality(beta, beta2));
                            }
                        }
                    }
                }
            }
        }
        for alpha in 0..a_cat.morphisms() {
            for beta in 0..b_cat.morphisms() {
                let (a, b) = (a_cat.tgt(alpha), b_cat.src(beta));
                for x in 0..self.size(a, b) {
                    let one = self.right(beta, a_cat.src(alpha), self.left(alpha, b, x));
                    let two = self.left(alpha, b_cat.tgt(beta), self.right(beta, a, x));
                    if one != two {
                        return Err(ProfError::Commutation { alpha, beta });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dom(&self) -> &Arc<FinCat> {
        &self.0.dom
    }

    pub fn cod(&self) -> &Arc<FinCat> {
        &self.0.cod
    }

    pub fn size(&self, a: Obj, b: Obj) -> usize {
        self.0.sizes[a * self.0.cod.objects() + b]
    }

    /// `α·x` for `x ∈ J(tgt α, b)`.
    pub fn left(&self, alpha: Mor, b: Obj, x: usize) -> usize {
        self.0.left[alpha][b][x]
    }

    /// `x·β` for `x ∈ J(a, src β)`.
    pub fn right(&self, beta: Mor, a: Obj, x: usize) -> usize {
        self.0.right[beta][a][x]
    }

    pub fn total_size(&self) -> usize {
        self.0.sizes.iter().sum()
    }

    /// `sizes[a][b]` as nested rows.
    pub fn size_table(&self) -> Vec<Vec<usize>> {
        let nb = self.0.cod.objects();
        (0..self.0.dom.objects()).map(|a| (0..nb).map(|b| self.size(a, b)).collect()).collect()
    }

    pub fn left_table(&self) -> &[Vec<Vec<usize>>] {
        &self.0.left
    }

    pub fn right_table(&self) -> &[Vec<Vec<usize>>] {
        &self.0.right
    }

    /// The hom profunctor `1_A`, with `1_A(x, y) = A(x, y)`; elements are
    /// positions inside the hom-set.
    pub fn hom(a: &Arc<FinCat>) -> Self {
        let c = a.clone();
        let (c1, c2, c3) = (c.clone(), c.clone(), c.clone());
        Self::from_fn_unchecked(
            a.clone(),
            a.clone(),
            move |x, y| c1.hom(x, y).len(),
            move |alpha, y, i| {
                let u = c2.hom(c2.tgt(alpha), y)[i];
                c2.hom_index(c2.compose(u, alpha))
            },
            move |beta, x, i| {
                let u = c3.hom(x, c3.src(beta))[i];
                c3.hom_index(c3.compose(beta, u))
            },
        )
    }

    /// The profunctor with all fibers empty.
    pub fn empty(dom: Arc<FinCat>, cod: Arc<FinCat>) -> Self {
        Self::from_fn_unchecked(dom, cod, |_, _| 0, |_, _, _| 0, |_, _, _| 0)
    }

    /// Disjoint union fiberwise; elements of `self` come first.
    pub fn sum(&self, other: &Profunctor) -> Result<Self, CellError> {
        if !same_cat(self.dom(), other.dom()) || !same_cat(self.cod(), other.cod()) {
            return Err(CellError::BoundaryMismatch);
        }
        let (p, q) = (self.clone(), other.clone());
        let (p2, q2, p3, q3) = (p.clone(), q.clone(), p.clone(), q.clone());
        Ok(Self::from_fn_unchecked(
            self.dom().clone(),
            self.cod().clone(),
            move |a, b| p.size(a, b) + q.size(a, b),
            move |alpha, b, x| {
                let a = p2.dom().tgt(alpha);
                let a2 = p2.dom().src(alpha);
                let n = p2.size(a, b);
                if x < n {
                    p2.left(alpha, b, x)
                } else {
                    p2.size(a2, b) + q2.left(alpha, b, x - n)
                }
            },
            move |beta, a, x| {
                let b = p3.cod().src(beta);
                let b2 = p3.cod().tgt(beta);
                let n = p3.size(a, b);
                if x < n {
                    p3.right(beta, a, x)
                } else {
                    p3.size(a, b2) + q3.right(beta, a, x - n)
                }
            },
        ))
    }

    /// The restriction `K(f, g)` with its cartesian cell `K(f, g) ⇒ K`.
    pub fn restrict(&self, f: &FinFunctor, g: &FinFunctor) -> Result<(Profunctor, ProCell), CellError> {
        if !same_cat(f.cod(), self.dom()) || !same_cat(g.cod(), self.cod()) {
            return Err(CellError::BoundaryMismatch);
        }
        let (k, k2, k3) = (self.clone(), self.clone(), self.clone());
        let (f1, f2, f3) = (f.clone(), f.clone(), f.clone());
        let (g1, g2, g3) = (g.clone(), g.clone(), g.clone());
        let r = Self::from_fn_unchecked(
            f.dom().clone(),
            g.dom().clone(),
            move |a, b| k.size(f1.obj(a), g1.obj(b)),
            move |alpha, b, x| k2.left(f2.mor(alpha), g2.obj(b), x),
            move |beta, a, x| k3.right(g3.mor(beta), f3.obj(a), x),
        );
        let nb = g.dom().objects();
        let comps = (0..f.dom().objects())
            .flat_map(|a| (0..nb).map(move |b| (a, b)))
            .map(|(a, b)| (0..r.size(a, b)).collect())
            .collect();
        let cell = ProCell { src: r.clone(), tgt: self.clone(), f: f.clone(), g: g.clone(), comps };
        Ok((r, cell))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellError {
    #[error("boundaries of the cells do not match")]
    BoundaryMismatch,
    #[error("component at ({a},{b}) has the wrong shape or sends {x} out of range")]
    Typing { a: Obj, b: Obj, x: usize },
    #[error("naturality fails for morphism {mor} at element {x} of ({a},{b})")]
    Naturality { mor: Mor, a: Obj, b: Obj, x: usize },
    #[error("map out of a coend is not constant on the class of ({a},{c}) element {class}")]
    NotWellDefined { a: Obj, c: Obj, class: usize },
    #[error("cell to factor through is not cartesian")]
    NotCartesian,
    #[error("cell does not factor through the given cartesian cell")]
    NoFactorisation,
}

/// How a coend is quotiented. `Raw` keeps every pair and is only meant for
/// sensitivity tests of the law checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoendMode {
    #[default]
    Quotient,
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct FiberPresentation {
    // offsets[b] is the first token index for middle object b
    offsets: Vec<usize>,
    class: Vec<usize>,
    reps: Vec<(Obj, usize, usize)>,
}

/// The explicit presentation of `J ⊙ H` as a quotient of
/// `Σ_b J(a,b) × H(b,c)`; tokens are ordered by `(b, x, y)` and each class
/// is represented by its least token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoendPresentation {
    j: Profunctor,
    h: Profunctor,
    fibers: Vec<FiberPresentation>,
}

impl CoendPresentation {
    fn fiber(&self, a: Obj, c: Obj) -> &FiberPresentation {
        &self.fibers[a * self.h.cod().objects() + c]
    }

    pub fn left_factor(&self) -> &Profunctor {
        &self.j
    }

    pub fn right_factor(&self) -> &Profunctor {
        &self.h
    }

    /// Class of the pair `(x, y)` with `x ∈ J(a,b)`, `y ∈ H(b,c)`.
    pub fn class_of(&self, a: Obj, c: Obj, b: Obj, x: usize, y: usize) -> usize {
        let fp = self.fiber(a, c);
        fp.class[fp.offsets[b] + x * self.h.size(b, c) + y]
    }

    /// Least token `(b, x, y)` of a class.
    pub fn rep(&self, a: Obj, c: Obj, class: usize) -> (Obj, usize, usize) {
        self.fiber(a, c).reps[class]
    }

    /// Number of tokens `Σ_b |J(a,b)|·|H(b,c)|`.
    pub fn tokens(&self, a: Obj, c: Obj) -> usize {
        *self.fiber(a, c).offsets.last().unwrap_or(&0)
    }

    /// Every token of the fiber over `(a, c)` with its class.
    pub fn for_each_token(&self, a: Obj, c: Obj, mut visit: impl FnMut(Obj, usize, usize, usize)) {
        let fp = self.fiber(a, c);
        for b in 0..self.j.cod().objects() {
            let hs = self.h.size(b, c);
            for x in 0..self.j.size(a, b) {
                for y in 0..hs {
                    visit(b, x, y, fp.class[fp.offsets[b] + x * hs + y]);
                }
            }
        }
    }
}

/// A composite profunctor together with its coend presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composite {
    pub prof: Profunctor,
    pub presentation: Arc<CoendPresentation>,
}

impl Composite {
    pub fn class_of(&self, a: Obj, c: Obj, b: Obj, x: usize, y: usize) -> usize {
        self.presentation.class_of(a, c, b, x, y)
    }

    pub fn rep(&self, a: Obj, c: Obj, class: usize) -> (Obj, usize, usize) {
        self.presentation.rep(a, c, class)
    }
}

/// `J ⊙ H` computed as a coend.
pub fn compose(j: &Profunctor, h: &Profunctor) -> Result<Composite, CellError> {
    compose_with(j, h, CoendMode::Quotient)
}

pub fn compose_with(j: &Profunctor, h: &Profunctor, mode: CoendMode) -> Result<Composite, CellError> {
    if !same_cat(j.cod(), h.dom()) {
        return Err(CellError::BoundaryMismatch);
    }
    let (a_cat, b_cat, c_cat) = (j.dom(), j.cod(), h.cod());
    let (na, nb, nc) = (a_cat.objects(), b_cat.objects(), c_cat.objects());
    let mut fibers = Vec::with_capacity(na * nc);
    for a in 0..na {
        for c in 0..nc {
            let mut offsets = Vec::with_capacity(nb + 1);
            let mut total = 0;
            for b in 0..nb {
                offsets.push(total);
                total += j.size(a, b) * h.size(b, c);
            }
            offsets.push(total);
            let token = |b: Obj, x: usize, y: usize| offsets[b] + x * h.size(b, c) + y;
            let mut uf = UnionFind::<usize>::new(total);
            if mode == CoendMode::Quotient {
                for beta in 0..b_cat.morphisms() {
                    let (b, b2) = (b_cat.src(beta), b_cat.tgt(beta));
                    for x in 0..j.size(a, b) {
                        let xb = j.right(beta, a, x);
                        for y2 in 0..h.size(b2, c) {
                            let by = h.left(beta, c, y2);
                            uf.union(token(b2, xb, y2), token(b, x, by));
                        }
                    }
                }
            }
            let mut root_class = vec![usize::MAX; total];
            let mut class = vec![0; total];
            let mut reps = Vec::new();
            for b in 0..nb {
                for x in 0..j.size(a, b) {
                    for y in 0..h.size(b, c) {
                        let t = token(b, x, y);
                        let r = uf.find(t);
                        if root_class[r] == usize::MAX {
                            root_class[r] = reps.len();
                            reps.push((b, x, y));
                        }
                        class[t] = root_class[r];
                    }
                }
            }
            fibers.push(FiberPresentation { offsets, class, reps });
        }
    }
    let pres = Arc::new(CoendPresentation { j: j.clone(), h: h.clone(), fibers });
    let (p1, p2, p3) = (pres.clone(), pres.clone(), pres.clone());
    let (jj, hh) = (j.clone(), h.clone());
    let prof = Profunctor::from_fn_unchecked(
        a_cat.clone(),
        c_cat.clone(),
        move |a, c| p1.fiber(a, c).reps.len(),
        move |alpha, c, k| {
            let a = jj.dom().tgt(alpha);
            let (b, x, y) = p2.rep(a, c, k);
            p2.class_of(jj.dom().src(alpha), c, b, jj.left(alpha, b, x), y)
        },
        move |gamma, a, k| {
            let c = hh.cod().src(gamma);
            let (b, x, y) = p3.rep(a, c, k);
            p3.class_of(a, hh.cod().tgt(gamma), b, x, hh.right(gamma, b, y))
        },
    );
    Ok(Composite { prof, presentation: pres })
}

/// A cell `J ⇒ K` along `f: A → C` (left) and `g: B → D` (right), where
/// `J: A ⇸ B` and `K: C ⇸ D`.
#[derive(Clone, PartialEq, Eq)]
pub struct ProCell {
    src: Profunctor,
    tgt: Profunctor,
    f: FinFunctor,
    g: FinFunctor,
    comps: Vec<Vec<usize>>,
}

impl fmt::Debug for ProCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProCell").field("comps", &self.comps).finish()
    }
}

impl ProCell {
    /// Validates typing, range and naturality.
    pub fn new(
        src: Profunctor,
        tgt: Profunctor,
        f: FinFunctor,
        g: FinFunctor,
        comps: Vec<Vec<usize>>,
    ) -> Result<Self, CellError> {
        if !same_cat(f.dom(), src.dom())
            || !same_cat(f.cod(), tgt.dom())
            || !same_cat(g.dom(), src.cod())
            || !same_cat(g.cod(), tgt.cod())
        {
            return Err(CellError::BoundaryMismatch);
        }
        let (na, nb) = (src.dom().objects(), src.cod().objects());
        if comps.len() != na * nb {
            return Err(CellError::Typing { a: 0, b: 0, x: 0 });
        }
        for a in 0..na {
            for b in 0..nb {
                let comp = &comps[a * nb + b];
                if comp.len() != src.size(a, b) {
                    return Err(CellError::Typing { a, b, x: comp.len() });
                }
                let bound = tgt.size(f.obj(a), g.obj(b));
                if let Some(x) = comp.iter().position(|&v| v >= bound) {
                    return Err(CellError::Typing { a, b, x });
                }
            }
        }
        let cell = ProCell { src, tgt, f, g, comps };
        cell.check_naturality()?;
        Ok(cell)
    }

    pub fn from_fn(
        src: Profunctor,
        tgt: Profunctor,
        f: FinFunctor,
        g: FinFunctor,
        comp: impl Fn(Obj, Obj, usize) -> usize,
    ) -> Result<Self, CellError> {
        let (na, nb) = (src.dom().objects(), src.cod().objects());
        let comps = (0..na)
            .flat_map(|a| (0..nb).map(move |b| (a, b)))
            .map(|(a, b)| (0..src.size(a, b)).map(|x| comp(a, b, x)).collect())
            .collect();
        Self::new(src, tgt, f, g, comps)
    }

    /// A cell out of a composite, given on tokens `(b, x, y)` of the
    /// presentation over `(a, c)`. Rejects functions that separate two tokens
    /// of the same class.
    pub fn from_composite(
        src: &Composite,
        tgt: Profunctor,
        f: FinFunctor,
        g: FinFunctor,
        token: impl Fn(Obj, Obj, Obj, usize, usize) -> usize,
    ) -> Result<Self, CellError> {
        let p = &src.prof;
        let (na, nc) = (p.dom().objects(), p.cod().objects());
        let mut comps = Vec::with_capacity(na * nc);
        for a in 0..na {
            for c in 0..nc {
                let mut comp = vec![usize::MAX; p.size(a, c)];
                let mut bad = None;
                src.presentation.for_each_token(a, c, |b, x, y, k| {
                    let v = token(a, c, b, x, y);
                    if comp[k] == usize::MAX {
                        comp[k] = v;
                    } else if comp[k] != v && bad.is_none() {
                        bad = Some(k);
                    }
                });
                if let Some(class) = bad {
                    return Err(CellError::NotWellDefined { a, c, class });
                }
                comps.push(comp);
            }
        }
        Self::new(p.clone(), tgt, f, g, comps)
    }

    fn check_naturality(&self) -> Result<(), CellError> {
        let (a_cat, b_cat) = (self.src.dom(), self.src.cod());
        let (na, nb) = (a_cat.objects(), b_cat.objects());
        for alpha in 0..a_cat.morphisms() {
            let (a2, a) = (a_cat.src(alpha), a_cat.tgt(alpha));
            for b in 0..nb {
                for x in 0..self.src.size(a, b) {
                    let lhs = self.apply(a2, b, self.src.left(alpha, b, x));
                    let rhs = self.tgt.left(self.f.mor(alpha), self.g.obj(b), self.apply(a, b, x));
                    if lhs != rhs {
                        return Err(CellError::Naturality { mor: alpha, a, b, x });
                    }
                }
            }
        }
        for beta in 0..b_cat.morphisms() {
            let (b, b2) = (b_cat.src(beta), b_cat.tgt(beta));
            for a in 0..na {
                for x in 0..self.src.size(a, b) {
                    let lhs = self.apply(a, b2, self.src.right(beta, a, x));
                    let rhs = self.tgt.right(self.g.mor(beta), self.f.obj(a), self.apply(a, b, x));
                    if lhs != rhs {
                        return Err(CellError::Naturality { mor: beta, a, b, x });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn src(&self) -> &Profunctor {
        &self.src
    }

    pub fn tgt(&self) -> &Profunctor {
        &self.tgt
    }

    pub fn left_functor(&self) -> &FinFunctor {
        &self.f
    }

    pub fn right_functor(&self) -> &FinFunctor {
        &self.g
    }

    pub fn apply(&self, a: Obj, b: Obj, x: usize) -> usize {
        self.comps[a * self.src.cod().objects() + b][x]
    }

    pub fn component(&self, a: Obj, b: Obj) -> &[usize] {
        &self.comps[a * self.src.cod().objects() + b]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.comps
    }

    /// Along identity functors on both sides.
    pub fn is_horizontal(&self) -> bool {
        let id = |f: &FinFunctor| {
            same_cat(f.dom(), f.cod())
                && f.obj_map().iter().enumerate().all(|(i, &v)| i == v)
                && f.mor_map().iter().enumerate().all(|(i, &v)| i == v)
        };
        id(&self.f) && id(&self.g)
    }

    pub fn identity(j: &Profunctor) -> Self {
        let f = FinFunctor::identity(j.dom().clone());
        let g = FinFunctor::identity(j.cod().clone());
        let nb = j.cod().objects();
        let comps = (0..j.dom().objects())
            .flat_map(|a| (0..nb).map(move |b| (a, b)))
            .map(|(a, b)| (0..j.size(a, b)).collect())
            .collect();
        ProCell { src: j.clone(), tgt: j.clone(), f, g, comps }
    }

    /// The unit cell `1_f: 1_A ⇒ 1_C` along `f, f`.
    pub fn unit(f: &FinFunctor) -> Self {
        let one_a = Profunctor::hom(f.dom());
        let one_c = Profunctor::hom(f.cod());
        let a = f.dom().clone();
        let c = f.cod().clone();
        ProCell::from_fn(one_a, one_c, f.clone(), f.clone(), |x, y, i| c.hom_index(f.mor(a.hom(x, y)[i])))
            .expect("unit cell is natural")
    }

    /// The cell `1_A ⇒ 1_C` along `f, g` of a transformation `φ: f ⇒ g`,
    /// sending `u: x → y` to `φ_y ∘ f(u)`.
    pub fn from_nat_transf(phi: &NatTransf) -> Self {
        let (f, g) = (phi.src(), phi.tgt());
        let a = f.dom().clone();
        let c = f.cod().clone();
        ProCell::from_fn(Profunctor::hom(&a), Profunctor::hom(&c), f.clone(), g.clone(), |x, y, i| {
            c.hom_index(c.compose(phi.comp(y), f.mor(a.hom(x, y)[i])))
        })
        .expect("transformation cells are natural")
    }

    /// `other ∘ self`: first `self: J ⇒ K`, then `other: K ⇒ L`.
    pub fn vcompose(&self, other: &ProCell) -> Result<ProCell, CellError> {
        if self.tgt != other.src {
            return Err(CellError::BoundaryMismatch);
        }
        let f = self.f.then(&other.f).map_err(|_| CellError::BoundaryMismatch)?;
        let g = self.g.then(&other.g).map_err(|_| CellError::BoundaryMismatch)?;
        let nb = self.src.cod().objects();
        let comps = (0..self.src.dom().objects())
            .flat_map(|a| (0..nb).map(move |b| (a, b)))
            .map(|(a, b)| {
                let (fa, gb) = (self.f.obj(a), self.g.obj(b));
                self.component(a, b).iter().map(|&x| other.apply(fa, gb, x)).collect()
            })
            .collect();
        Ok(ProCell { src: self.src.clone(), tgt: other.tgt.clone(), f, g, comps })
    }

    /// `self ⊙ other` for `self: J ⇒ K` along `f, g` and `other: H ⇒ L`
    /// along `g, h`, using the given composites `J ⊙ H` and `K ⊙ L`.
    pub fn hcompose_with(&self, other: &ProCell, src: &Composite, tgt: &Composite) -> Result<ProCell, CellError> {
        if !same_functor(&self.g, &other.f) {
            return Err(CellError::BoundaryMismatch);
        }
        let ok = src.presentation.j == self.src
            && src.presentation.h == other.src
            && tgt.presentation.j == self.tgt
            && tgt.presentation.h == other.tgt;
        if !ok {
            return Err(CellError::BoundaryMismatch);
        }
        let (f, h) = (&self.f, &other.g);
        ProCell::from_composite(src, tgt.prof.clone(), f.clone(), h.clone(), |a, c, b, x, y| {
            let gb = self.g.obj(b);
            tgt.class_of(f.obj(a), h.obj(c), gb, self.apply(a, b, x), other.apply(b, c, y))
        })
    }

    pub fn hcompose(&self, other: &ProCell) -> Result<ProCell, CellError> {
        let src = compose(&self.src, &other.src)?;
        let tgt = compose(&self.tgt, &other.tgt)?;
        self.hcompose_with(other, &src, &tgt)
    }

    /// Every component is a bijection.
    pub fn is_iso(&self) -> bool {
        let nb = self.src.cod().objects();
        (0..self.src.dom().objects()).all(|a| {
            (0..nb).all(|b| {
                let n = self.tgt.size(self.f.obj(a), self.g.obj(b));
                let comp = self.component(a, b);
                if comp.len() != n {
                    return false;
                }
                let mut hit = vec![false; n];
                comp.iter().all(|&v| !std::mem::replace(&mut hit[v], true))
            })
        })
    }

    /// Cartesian means the comparison `J → K(f, g)` is invertible. That
    /// comparison has the same components as the cell itself.
    pub fn is_cartesian(&self) -> bool {
        self.is_iso()
    }

    /// The inverse of an invertible horizontal cell.
    pub fn inverse(&self) -> Option<ProCell> {
        if !self.is_horizontal() || !self.is_iso() {
            return None;
        }
        let nb = self.src.cod().objects();
        let comps = (0..self.src.dom().objects())
            .flat_map(|a| (0..nb).map(move |b| (a, b)))
            .map(|(a, b)| {
                let comp = self.component(a, b);
                let mut inv = vec![0; comp.len()];
                for (x, &v) in comp.iter().enumerate() {
                    inv[v] = x;
                }
                inv
            })
            .collect();
        Some(ProCell { src: self.tgt.clone(), tgt: self.src.clone(), f: self.f.clone(), g: self.g.clone(), comps })
    }

    /// The factorisation `ψ: J ⇒ R` along identities with `cart ∘ ψ = self`,
    /// for a cartesian `cart: R ⇒ K` with the same vertical boundary as `self`.
    pub fn factor_through(&self, cart: &ProCell) -> Result<ProCell, CellError> {
        if self.tgt != cart.tgt || !same_functor(&self.f, &cart.f) || !same_functor(&self.g, &cart.g) {
            return Err(CellError::BoundaryMismatch);
        }
        if !cart.is_cartesian() {
            return Err(CellError::NotCartesian);
        }
        let nb = self.src.cod().objects();
        let mut comps = Vec::new();
        for a in 0..self.src.dom().objects() {
            for b in 0..nb {
                let c = cart.component(a, b);
                let mut inv = vec![0; c.len()];
                for (x, &v) in c.iter().enumerate() {
                    inv[v] = x;
                }
                comps.push(self.component(a, b).iter().map(|&v| inv[v]).collect());
            }
        }
        ProCell::new(
            self.src.clone(),
            cart.src.clone(),
            FinFunctor::identity(self.src.dom().clone()),
            FinFunctor::identity(self.src.cod().clone()),
            comps,
        )
    }

    /// For `ψ: H ⇒ J` along `h: A → C`, `k: B → D`: the induced map
    /// `h^* ⊙ H ⊙ k_* → J`, `[α, z, β] ↦ α·ψ(z)·β`, is invertible.
    pub fn is_opcartesian(&self) -> bool {
        self.opcartesian_comparison().is_iso()
    }

    /// The comparison cell `(h^* ⊙ H) ⊙ k_* ⇒ J` along identities.
    pub fn opcartesian_comparison(&self) -> ProCell {
        let (h, k) = (&self.f, &self.g);
        let hs = conjoint(h).prof;
        let ks = companion(k).prof;
        let inner = compose(&hs, &self.src).expect("conjoint composes");
        let outer = compose(&inner.prof, &ks).expect("companion composes");
        let (c_cat, d_cat) = (h.cod().clone(), k.cod().clone());
        let j = &self.tgt;
        ProCell::from_composite(
            &outer,
            j.clone(),
            FinFunctor::identity(c_cat.clone()),
            FinFunctor::identity(d_cat.clone()),
            |c, d, b, e, bi| {
                let (a, ai, z) = inner.rep(c, b, e);
                let alpha = c_cat.hom(c, h.obj(a))[ai];
                let beta = d_cat.hom(k.obj(b), d)[bi];
                let v = self.apply(a, b, z);
                let v = j.left(alpha, k.obj(b), v);
                j.right(beta, c, v)
            },
        )
        .expect("opcartesian comparison is a cell")
    }
}

/// Left unitor `1_A ⊙ J ⇒ J`, `[α, x] ↦ α·x`.
pub fn left_unitor(j: &Profunctor) -> ProCell {
    let one = Profunctor::hom(j.dom());
    let comp = compose(&one, j).expect("unit composes");
    let a_cat = j.dom().clone();
    ProCell::from_composite(
        &comp,
        j.clone(),
        FinFunctor::identity(a_cat.clone()),
        FinFunctor::identity(j.cod().clone()),
        |a, _c, b, i, x| j.left(a_cat.hom(a, b)[i], _c, x),
    )
    .expect("left unitor is a cell")
}

/// Right unitor `J ⊙ 1_B ⇒ J`, `[x, β] ↦ x·β`.
pub fn right_unitor(j: &Profunctor) -> ProCell {
    right_unitor_with(j, CoendMode::Quotient).expect("right unitor is a cell")
}

/// The right unitor computed over a coend in the given mode. In raw mode
/// the map is not injective as soon as some fiber has a nontrivial action.
pub fn right_unitor_with(j: &Profunctor, mode: CoendMode) -> Result<ProCell, CellError> {
    let one = Profunctor::hom(j.cod());
    let comp = compose_with(j, &one, mode)?;
    let b_cat = j.cod().clone();
    ProCell::from_composite(
        &comp,
        j.clone(),
        FinFunctor::identity(j.dom().clone()),
        FinFunctor::identity(b_cat.clone()),
        |a, c, b, x, i| j.right(b_cat.hom(b, c)[i], a, x),
    )
}

/// `J ⇒ 1_A ⊙ J`, `x ↦ [id, x]`.
pub fn left_unitor_inv(j: &Profunctor) -> ProCell {
    let one = Profunctor::hom(j.dom());
    let comp = compose(&one, j).expect("unit composes");
    let a_cat = j.dom().clone();
    ProCell::from_fn(
        j.clone(),
        comp.prof.clone(),
        FinFunctor::identity(a_cat.clone()),
        FinFunctor::identity(j.cod().clone()),
        |a, b, x| comp.class_of(a, b, a, a_cat.hom_index(a_cat.id(a)), x),
    )
    .expect("inverse left unitor is a cell")
}

/// `J ⇒ J ⊙ 1_B`, `x ↦ [x, id]`.
pub fn right_unitor_inv(j: &Profunctor) -> ProCell {
    let one = Profunctor::hom(j.cod());
    let comp = compose(j, &one).expect("unit composes");
    let b_cat = j.cod().clone();
    ProCell::from_fn(
        j.clone(),
        comp.prof.clone(),
        FinFunctor::identity(j.dom().clone()),
        FinFunctor::identity(b_cat.clone()),
        |a, b, x| comp.class_of(a, b, b, x, b_cat.hom_index(b_cat.id(b))),
    )
    .expect("inverse right unitor is a cell")
}

/// Associator `(J ⊙ H) ⊙ L ⇒ J ⊙ (H ⊙ L)`, `[[x, y], z] ↦ [x, [y, z]]`.
pub fn associator(j: &Profunctor, h: &Profunctor, l: &Profunctor) -> Result<ProCell, CellError> {
    let jh = compose(j, h)?;
    let hl = compose(h, l)?;
    let jh_l = compose(&jh.prof, l)?;
    let j_hl = compose(j, &hl.prof)?;
    ProCell::from_composite(
        &jh_l,
        j_hl.prof.clone(),
        FinFunctor::identity(j.dom().clone()),
        FinFunctor::identity(l.cod().clone()),
        |a, d, c, e, z| {
            let (b, x, y) = jh.rep(a, c, e);
            j_hl.class_of(a, d, b, x, hl.class_of(b, d, c, y, z))
        },
    )
}

/// Inverse associator `J ⊙ (H ⊙ L) ⇒ (J ⊙ H) ⊙ L`.
pub fn associator_inv(j: &Profunctor, h: &Profunctor, l: &Profunctor) -> Result<ProCell, CellError> {
    let jh = compose(j, h)?;
    let hl = compose(h, l)?;
    let jh_l = compose(&jh.prof, l)?;
    let j_hl = compose(j, &hl.prof)?;
    ProCell::from_composite(
        &j_hl,
        jh_l.prof.clone(),
        FinFunctor::identity(j.dom().clone()),
        FinFunctor::identity(l.cod().clone()),
        |a, d, b, x, e| {
            let (c, y, z) = hl.rep(b, d, e);
            jh_l.class_of(a, d, c, jh.class_of(a, c, b, x, y), z)
        },
    )
}

/// A companion or conjoint with its defining cells.
#[derive(Debug, Clone)]
pub struct Representable {
    pub prof: Profunctor,
    pub cart: ProCell,
    pub opcart: ProCell,
}

/// `f_*: A ⇸ C`, `f_*(x, y) = C(fx, y)`, with the cartesian cell
/// `f_* ⇒ 1_C` along `f, id` and the opcartesian cell `1_A ⇒ f_*` along `id, f`.
pub fn companion(f: &FinFunctor) -> Representable {
    let c = f.cod().clone();
    let (prof, cart) = Profunctor::hom(&c).restrict(f, &FinFunctor::identity(c.clone())).expect("companion");
    let a = f.dom().clone();
    let opcart =
        ProCell::from_fn(Profunctor::hom(&a), prof.clone(), FinFunctor::identity(a.clone()), f.clone(), |x, y, i| {
            c.hom_index(f.mor(a.hom(x, y)[i]))
        })
        .expect("companion opcartesian cell");
    Representable { prof, cart, opcart }
}

/// `f^*: C ⇸ A`, `f^*(y, x) = C(y, fx)`, with the cartesian cell
/// `f^* ⇒ 1_C` along `id, f` and the opcartesian cell `1_A ⇒ f^*` along `f, id`.
pub fn conjoint(f: &FinFunctor) -> Representable {
    let c = f.cod().clone();
    let (prof, cart) = Profunctor::hom(&c).restrict(&FinFunctor::identity(c.clone()), f).expect("conjoint");
    let a = f.dom().clone();
    let opcart =
        ProCell::from_fn(Profunctor::hom(&a), prof.clone(), f.clone(), FinFunctor::identity(a.clone()), |x, y, i| {
            c.hom_index(f.mor(a.hom(x, y)[i]))
        })
        .expect("conjoint opcartesian cell");
    Representable { prof, cart, opcart }
}

/// Checks both companion identities for `f`: `cart ∘ opcart = 1_f`, and
/// `opcart ⊙ cart` equals the composite of unitors `1_A ⊙ f_* ≅ f_* ≅ f_* ⊙ 1_C`.
pub fn companion_identities_hold(f: &FinFunctor) -> bool {
    let rep = companion(f);
    let first = rep.opcart.vcompose(&rep.cart).map(|c| c == ProCell::unit(f)).unwrap_or(false);
    let second = match rep.opcart.hcompose(&rep.cart) {
        Ok(h) => left_unitor(&rep.prof).vcompose(&right_unitor_inv(&rep.prof)).map(|u| u == h).unwrap_or(false),
        Err(_) => false,
    };
    first && second
}

/// The conjoint identities: `cart ∘ opcart = 1_f`, and `cart ⊙ opcart`
/// equals the unitor composite `f^* ⊙ 1_A ≅ f^* ≅ 1_C ⊙ f^*`.
pub fn conjoint_identities_hold(f: &FinFunctor) -> bool {
    let rep = conjoint(f);
    let first = rep.opcart.vcompose(&rep.cart).map(|c| c == ProCell::unit(f)).unwrap_or(false);
    let second = match rep.cart.hcompose(&rep.opcart) {
        Ok(h) => right_unitor(&rep.prof).vcompose(&left_unitor_inv(&rep.prof)).map(|u| u == h).unwrap_or(false),
        Err(_) => false,
    };
    first && second
}

/// For `φ: f ⇒ g` between functors `A → C`, the horizontal cell
/// `φ_*: g_* ⇒ f_*`, obtained by factoring the composite
/// `g_* ≅ 1_A ⊙ g_* ⇒ 1_C ⊙ 1_C ≅ 1_C` through the cartesian cell of `f_*`.
pub fn star_of_vertical_cell(phi: &NatTransf) -> Result<ProCell, CellError> {
    let (f, g) = (phi.src(), phi.tgt());
    let gs = companion(g);
    let fs = companion(f);
    let pasted = ProCell::from_nat_transf(phi).hcompose(&gs.cart)?;
    let chi = left_unitor_inv(&gs.prof).vcompose(&pasted)?.vcompose(&left_unitor(&Profunctor::hom(f.cod())))?;
    chi.factor_through(&fs.cart)
}

/// All cells `J ⇒ K` along `f, g`, in lexicographic order of their
/// components, stopping after `cap` of them.
pub fn enumerate_cells(j: &Profunctor, k: &Profunctor, f: &FinFunctor, g: &FinFunctor, cap: usize) -> Vec<ProCell> {
    enumerate_cells_allowed(j, k, f, g, cap, |_, _, _, _| true)
}

/// As [`enumerate_cells`], restricted to cells whose value on `x ∈ J(a, b)`
/// is some `v` with `allowed(a, b, x, v)`.
pub fn enumerate_cells_allowed(
    j: &Profunctor,
    k: &Profunctor,
    f: &FinFunctor,
    g: &FinFunctor,
    cap: usize,
    allowed: impl Fn(Obj, Obj, usize, usize) -> bool,
) -> Vec<ProCell> {
    let (na, nb) = (j.dom().objects(), j.cod().objects());
    let mut base = vec![0; na * nb + 1];
    for a in 0..na {
        for b in 0..nb {
            base[a * nb + b + 1] = base[a * nb + b] + j.size(a, b);
        }
    }
    let total = base[na * nb];
    // elem e lives in fiber (a, b); value range is K(fa, gb)
    let mut fiber_of = Vec::with_capacity(total);
    for a in 0..na {
        for b in 0..nb {
            for x in 0..j.size(a, b) {
                fiber_of.push((a, b, x));
            }
        }
    }
    // constraint (e1, e2, side, mor): value(e2) = act(mor, value(e1))
    #[derive(Clone, Copy)]
    enum Side {
        Left,
        Right,
    }
    type Constraint = (usize, usize, Side, Mor, Obj);
    let mut checks: Vec<Vec<Constraint>> = vec![Vec::new(); total];
    let (a_cat, b_cat) = (j.dom(), j.cod());
    for alpha in 0..a_cat.morphisms() {
        let (a2, a) = (a_cat.src(alpha), a_cat.tgt(alpha));
        for b in 0..nb {
            for x in 0..j.size(a, b) {
                let e1 = base[a * nb + b] + x;
                let e2 = base[a2 * nb + b] + j.left(alpha, b, x);
                checks[e1.max(e2)].push((e1, e2, Side::Left, f.mor(alpha), g.obj(b)));
            }
        }
    }
    for beta in 0..b_cat.morphisms() {
        let (b, b2) = (b_cat.src(beta), b_cat.tgt(beta));
        for a in 0..na {
            for x in 0..j.size(a, b) {
                let e1 = base[a * nb + b] + x;
                let e2 = base[a * nb + b2] + j.right(beta, a, x);
                checks[e1.max(e2)].push((e1, e2, Side::Right, g.mor(beta), f.obj(a)));
            }
        }
    }
    let mut out = Vec::new();
    let mut val = vec![0; total];
    #[allow(clippy::too_many_arguments)]
    fn go(
        e: usize,
        total: usize,
        val: &mut Vec<usize>,
        fiber_of: &[(Obj, Obj, usize)],
        checks: &[Vec<Constraint>],
        k: &Profunctor,
        f: &FinFunctor,
        g: &FinFunctor,
        cap: usize,
        allowed: &dyn Fn(Obj, Obj, usize, usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= cap {
            return;
        }
        if e == total {
            out.push(val.clone());
            return;
        }
        let (a, b, x) = fiber_of[e];
        for v in 0..k.size(f.obj(a), g.obj(b)) {
            if !allowed(a, b, x, v) {
                continue;
            }
            val[e] = v;
            let ok = checks[e].iter().all(|&(e1, e2, side, m, o)| match side {
                Side::Left => k.left(m, o, val[e1]) == val[e2],
                Side::Right => k.right(m, o, val[e1]) == val[e2],
            });
            if ok {
                go(e + 1, total, val, fiber_of, checks, k, f, g, cap, allowed, out);
            }
        }
    }
    go(0, total, &mut val, &fiber_of, &checks, k, f, g, cap, &allowed, &mut out);
    out.into_iter()
        .map(|flat| {
            let comps = (0..na * nb).map(|i| flat[base[i]..base[i + 1]].to_vec()).collect();
            ProCell { src: j.clone(), tgt: k.clone(), f: f.clone(), g: g.clone(), comps }
        })
        .collect()
}
