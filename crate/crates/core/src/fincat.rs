//! Finite categories given by explicit composition tables.
//!
//! Objects are the indices `0..n`, morphisms are indices into a table of
//! `(source, target)` pairs. Composition is stored per composable pair, so
//! `compose(g, f)` is a single table lookup. Everything built on top of this
//! module (profunctors, commas, categories of elements, truncated sequence
//! categories) reduces to these tables.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

pub type Obj = usize;
pub type Mor = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("morphism {mor} has endpoint {obj} but there are only {objects} objects")]
    BadEndpoint { mor: Mor, obj: Obj, objects: usize },
    #[error("morphism index {0} out of range")]
    BadMorphism(Mor),
    #[error("identity of object {obj} is morphism {mor}, which is not an endomorphism of {obj}")]
    BadIdentity { obj: Obj, mor: Mor },
    #[error("expected {expected} identities, got {got}")]
    IdentityCount { expected: usize, got: usize },
    #[error("composite {g} ∘ {f} is not defined although tgt({f}) = src({g})")]
    MissingComposite { g: Mor, f: Mor },
    #[error("composite {g} ∘ {f} is given more than once")]
    DuplicateComposite { g: Mor, f: Mor },
    #[error("composite {g} ∘ {f} is ill-typed")]
    IllTypedComposite { g: Mor, f: Mor },
    #[error("identity law fails for morphism {0}")]
    IdentityLaw(Mor),
    #[error("composition is not associative: h={h}, g={g}, f={f}")]
    NonAssociative { f: Mor, g: Mor, h: Mor },
    #[error("relation is not a preorder: ({x},{y}) and ({y},{z}) related but ({x},{z}) is not")]
    NotTransitive { x: Obj, y: Obj, z: Obj },
    #[error("relation is not reflexive at {0}")]
    NotReflexive(Obj),
}

/// Unvalidated category data, as read from an instance file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub objects: usize,
    pub morphisms: Vec<(Obj, Obj)>,
    pub identities: Vec<Mor>,
    /// Triples `(g, f, g ∘ f)`, one per composable pair.
    pub composites: Vec<(Mor, Mor, Mor)>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct FinCat {
    objects: usize,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    identity: Vec<Mor>,
    homs: Vec<Vec<Mor>>,
    hom_pos: Vec<usize>,
    out_pos: Vec<usize>,
    comp_offset: Vec<usize>,
    comp: Vec<Mor>,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat").field("objects", &self.objects).field("morphisms", &self.src.len()).finish()
    }
}

impl FinCat {
    /// Builds the lookup tables from a total composition function on
    /// composable pairs. No laws are checked here.
    fn assemble(
        objects: usize,
        ends: &[(Obj, Obj)],
        identity: Vec<Mor>,
        mut compose: impl FnMut(Mor, Mor) -> Result<Mor, CategoryError>,
    ) -> Result<Self, CategoryError> {
        let src: Vec<Obj> = ends.iter().map(|e| e.0).collect();
        let tgt: Vec<Obj> = ends.iter().map(|e| e.1).collect();
        let mut homs = vec![Vec::new(); objects * objects];
        let mut hom_pos = vec![0; ends.len()];
        let mut outs: Vec<Vec<Mor>> = vec![Vec::new(); objects];
        let mut out_pos = vec![0; ends.len()];
        for (m, &(s, t)) in ends.iter().enumerate() {
            hom_pos[m] = homs[s * objects + t].len();
            homs[s * objects + t].push(m);
            out_pos[m] = outs[s].len();
            outs[s].push(m);
        }
        let mut comp_offset = Vec::with_capacity(ends.len());
        let mut comp = Vec::new();
        for f in 0..ends.len() {
            comp_offset.push(comp.len());
            for &g in &outs[tgt[f]] {
                comp.push(compose(g, f)?);
            }
        }
        Ok(FinCat { objects, src, tgt, identity, homs, hom_pos, out_pos, comp_offset, comp })
    }

    /// Validates raw data: typing, totality on composable pairs, identity
    /// laws and associativity, reporting the first violation.
    pub fn from_raw(raw: &RawCategory) -> Result<Self, CategoryError> {
        let n = raw.objects;
        for (m, &(s, t)) in raw.morphisms.iter().enumerate() {
            for obj in [s, t] {
                if obj >= n {
                    return Err(CategoryError::BadEndpoint { mor: m, obj, objects: n });
                }
            }
        }
        let mors = raw.morphisms.len();
        if raw.identities.len() != n {
            return Err(CategoryError::IdentityCount { expected: n, got: raw.identities.len() });
        }
        for (x, &i) in raw.identities.iter().enumerate() {
            if i >= mors {
                return Err(CategoryError::BadMorphism(i));
            }
            if raw.morphisms[i] != (x, x) {
                return Err(CategoryError::BadIdentity { obj: x, mor: i });
            }
        }
        let mut table: HashMap<(Mor, Mor), Mor> = HashMap::new();
        for &(g, f, h) in &raw.composites {
            for m in [g, f, h] {
                if m >= mors {
                    return Err(CategoryError::BadMorphism(m));
                }
            }
            let (fs, ft) = raw.morphisms[f];
            let (gs, gt) = raw.morphisms[g];
            if ft != gs || raw.morphisms[h] != (fs, gt) {
                return Err(CategoryError::IllTypedComposite { g, f });
            }
            if table.insert((g, f), h).is_some() {
                return Err(CategoryError::DuplicateComposite { g, f });
            }
        }
        let cat = Self::assemble(n, &raw.morphisms, raw.identities.clone(), |g, f| {
            table.get(&(g, f)).copied().ok_or(CategoryError::MissingComposite { g, f })
        })?;
        cat.check_laws()?;
        Ok(cat)
    }

    /// Builds a category whose morphisms are labelled by morphisms of `base`:
    /// each new object sits over `base_obj[i]`, each new morphism is a triple
    /// `(source, target, label)`, and composition composes labels. The caller
    /// guarantees that identities and composites are present.
    pub fn over_base(base: &FinCat, base_obj: &[Obj], mors: &[(Obj, Obj, Mor)]) -> Result<Self, CategoryError> {
        let mut index: HashMap<(Obj, Obj, Mor), Mor> = HashMap::with_capacity(mors.len());
        for (m, &key) in mors.iter().enumerate() {
            index.insert(key, m);
        }
        let objects = base_obj.len();
        let mut identity = Vec::with_capacity(objects);
        for (i, &b) in base_obj.iter().enumerate() {
            let m = *index.get(&(i, i, base.id(b))).ok_or(CategoryError::BadIdentity { obj: i, mor: usize::MAX })?;
            identity.push(m);
        }
        let ends: Vec<(Obj, Obj)> = mors.iter().map(|&(s, t, _)| (s, t)).collect();
        Self::assemble(objects, &ends, identity, |g, f| {
            let (fs, _, fl) = mors[f];
            let (_, gt, gl) = mors[g];
            index.get(&(fs, gt, base.compose(gl, fl))).copied().ok_or(CategoryError::MissingComposite { g, f })
        })
    }

    /// From endpoints, identities and a composition function on composable
    /// pairs, checking the identity and associativity laws.
    pub fn from_parts(
        objects: usize,
        ends: &[(Obj, Obj)],
        identity: Vec<Mor>,
        compose: impl FnMut(Mor, Mor) -> Result<Mor, CategoryError>,
    ) -> Result<Self, CategoryError> {
        let cat = Self::assemble(objects, ends, identity, compose)?;
        cat.check_laws()?;
        Ok(cat)
    }

    /// The preorder on `0..n` given by `leq`, which must be reflexive and
    /// transitive. There is one morphism per related pair.
    pub fn from_preorder(n: usize, leq: impl Fn(Obj, Obj) -> bool) -> Result<Self, CategoryError> {
        for x in 0..n {
            if !leq(x, x) {
                return Err(CategoryError::NotReflexive(x));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if !leq(x, y) {
                    continue;
                }
                for z in 0..n {
                    if leq(y, z) && !leq(x, z) {
                        return Err(CategoryError::NotTransitive { x, y, z });
                    }
                }
            }
        }
        let mut ends = Vec::new();
        let mut index = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                if leq(x, y) {
                    index.insert((x, y), ends.len());
                    ends.push((x, y));
                }
            }
        }
        let identity = (0..n).map(|x| index[&(x, x)]).collect();
        let ends2 = ends.clone();
        Self::assemble(n, &ends, identity, |g, f| Ok(index[&(ends2[f].0, ends2[g].1)]))
    }

    /// The preorder generated by the reflexive-transitive closure of `rel`.
    pub fn preorder_closure(n: usize, rel: &[(Obj, Obj)]) -> Result<Self, CategoryError> {
        let mut leq = vec![false; n * n];
        for x in 0..n {
            leq[x * n + x] = true;
        }
        for &(x, y) in rel {
            if x >= n || y >= n {
                return Err(CategoryError::BadEndpoint { mor: 0, obj: x.max(y), objects: n });
            }
            leq[x * n + y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_preorder(n, |x, y| leq[x * n + y])
    }

    pub fn empty() -> Self {
        Self::discrete(0)
    }

    pub fn terminal() -> Self {
        Self::discrete(1)
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_preorder(n, |x, y| x == y).expect("discrete preorder")
    }

    /// The chain `0 ≤ 1 ≤ … ≤ n-1`; `chain(2)` is the walking arrow.
    pub fn chain(n: usize) -> Self {
        Self::from_preorder(n, |x, y| x <= y).expect("chain preorder")
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn morphisms(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, m: Mor) -> Obj {
        self.src[m]
    }

    pub fn tgt(&self, m: Mor) -> Obj {
        self.tgt[m]
    }

    pub fn id(&self, x: Obj) -> Mor {
        self.identity[x]
    }

    pub fn is_identity(&self, m: Mor) -> bool {
        self.identity[self.src[m]] == m
    }

    pub fn hom(&self, x: Obj, y: Obj) -> &[Mor] {
        &self.homs[x * self.objects + y]
    }

    /// Position of `m` inside `hom(src m, tgt m)`.
    pub fn hom_index(&self, m: Mor) -> usize {
        self.hom_pos[m]
    }

    /// `g ∘ f`. Panics when `tgt(f) != src(g)`.
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        assert_eq!(self.tgt[f], self.src[g], "composing non-composable morphisms {g} ∘ {f}");
        self.comp[self.comp_offset[f] + self.out_pos[g]]
    }

    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        (self.tgt[f] == self.src[g]).then(|| self.comp[self.comp_offset[f] + self.out_pos[g]])
    }

    /// True when every hom-set has at most one element.
    pub fn is_thin(&self) -> bool {
        self.homs.iter().all(|h| h.len() <= 1)
    }

    pub fn leq(&self, x: Obj, y: Obj) -> bool {
        !self.hom(x, y).is_empty()
    }

    pub fn inverse(&self, m: Mor) -> Option<Mor> {
        let (s, t) = (self.src[m], self.tgt[m]);
        self.hom(t, s).iter().copied().find(|&n| self.compose(n, m) == self.id(s) && self.compose(m, n) == self.id(t))
    }

    pub fn is_iso(&self, m: Mor) -> bool {
        self.inverse(m).is_some()
    }

    /// Identity laws and associativity over every composable triple.
    pub fn check_laws(&self) -> Result<(), CategoryError> {
        for f in 0..self.morphisms() {
            if self.compose(self.id(self.tgt[f]), f) != f || self.compose(f, self.id(self.src[f])) != f {
                return Err(CategoryError::IdentityLaw(f));
            }
        }
        for f in 0..self.morphisms() {
            for x in 0..self.objects {
                for &g in self.hom(self.tgt[f], x) {
                    let gf = self.compose(g, f);
                    for y in 0..self.objects {
                        for &h in self.hom(x, y) {
                            if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                                return Err(CategoryError::NonAssociative { f, g, h });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Same morphism indices, sources and targets swapped, composition reversed.
    pub fn opposite(&self) -> FinCat {
        let ends: Vec<(Obj, Obj)> = (0..self.morphisms()).map(|m| (self.tgt[m], self.src[m])).collect();
        Self::assemble(self.objects, &ends, self.identity.clone(), |g, f| Ok(self.compose(f, g)))
            .expect("opposite of a valid category")
    }

    pub fn to_raw(&self) -> RawCategory {
        let mut composites = Vec::new();
        for f in 0..self.morphisms() {
            for y in 0..self.objects {
                for &g in self.hom(self.tgt[f], y) {
                    composites.push((g, f, self.compose(g, f)));
                }
            }
        }
        RawCategory {
            objects: self.objects,
            morphisms: (0..self.morphisms()).map(|m| (self.src[m], self.tgt[m])).collect(),
            identities: self.identity.clone(),
            composites,
        }
    }

    /// Connected-component label of every object (labels are `0..count`,
    /// assigned in order of lowest member).
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut uf = UnionFind::new(self.objects);
        for m in 0..self.morphisms() {
            uf.union(self.src[m], self.tgt[m]);
        }
        let mut label = vec![usize::MAX; self.objects];
        let mut root_label: HashMap<usize, usize> = HashMap::new();
        for (x, slot) in label.iter_mut().enumerate() {
            let r = uf.find(x);
            let next = root_label.len();
            *slot = *root_label.entry(r).or_insert(next);
        }
        (root_label.len(), label)
    }

    /// Nonempty with a single connected component. The empty category is
    /// not connected.
    pub fn is_connected(&self) -> bool {
        self.objects > 0 && self.components().0 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("functor tables have wrong length")]
    Shape,
    #[error("object {0} is sent outside the codomain")]
    BadObject(Obj),
    #[error("morphism {0} is sent to a morphism with the wrong endpoints")]
    Endpoints(Mor),
    #[error("identity of object {0} is not preserved")]
    Identity(Obj),
    #[error("composite {g} ∘ {f} is not preserved")]
    Composition { g: Mor, f: Mor },
}

#[derive(Clone, PartialEq, Eq)]
pub struct FinFunctor {
    dom: Arc<FinCat>,
    cod: Arc<FinCat>,
    obj: Vec<Obj>,
    mor: Vec<Mor>,
}

impl fmt::Debug for FinFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinFunctor").field("obj", &self.obj).field("mor", &self.mor).finish()
    }
}

impl FinFunctor {
    pub fn new(dom: Arc<FinCat>, cod: Arc<FinCat>, obj: Vec<Obj>, mor: Vec<Mor>) -> Result<Self, FunctorError> {
        if obj.len() != dom.objects() || mor.len() != dom.morphisms() {
            return Err(FunctorError::Shape);
        }
        if let Some(x) = obj.iter().position(|&y| y >= cod.objects()) {
            return Err(FunctorError::BadObject(x));
        }
        for (m, &fm) in mor.iter().enumerate() {
            if fm >= cod.morphisms() || cod.src(fm) != obj[dom.src(m)] || cod.tgt(fm) != obj[dom.tgt(m)] {
                return Err(FunctorError::Endpoints(m));
            }
        }
        for x in 0..dom.objects() {
            if mor[dom.id(x)] != cod.id(obj[x]) {
                return Err(FunctorError::Identity(x));
            }
        }
        for f in 0..dom.morphisms() {
            for y in 0..dom.objects() {
                for &g in dom.hom(dom.tgt(f), y) {
                    if mor[dom.compose(g, f)] != cod.compose(mor[g], mor[f]) {
                        return Err(FunctorError::Composition { g, f });
                    }
                }
            }
        }
        Ok(FinFunctor { dom, cod, obj, mor })
    }

    /// Monotone map between preorders: the morphism map is forced.
    pub fn monotone(dom: Arc<FinCat>, cod: Arc<FinCat>, obj: Vec<Obj>) -> Result<Self, FunctorError> {
        if obj.len() != dom.objects() {
            return Err(FunctorError::Shape);
        }
        if let Some(x) = obj.iter().position(|&y| y >= cod.objects()) {
            return Err(FunctorError::BadObject(x));
        }
        let mut mor = Vec::with_capacity(dom.morphisms());
        for m in 0..dom.morphisms() {
            let h = cod.hom(obj[dom.src(m)], obj[dom.tgt(m)]);
            match h.first() {
                Some(&fm) => mor.push(fm),
                None => return Err(FunctorError::Endpoints(m)),
            }
        }
        Self::new(dom, cod, obj, mor)
    }

    pub fn identity(c: Arc<FinCat>) -> Self {
        let obj = (0..c.objects()).collect();
        let mor = (0..c.morphisms()).collect();
        FinFunctor { dom: c.clone(), cod: c, obj, mor }
    }

    pub fn constant(dom: Arc<FinCat>, cod: Arc<FinCat>, x: Obj) -> Self {
        let obj = vec![x; dom.objects()];
        let mor = vec![cod.id(x); dom.morphisms()];
        FinFunctor { dom, cod, obj, mor }
    }

    /// The functor from the terminal category picking `x`.
    pub fn point(cod: Arc<FinCat>, x: Obj) -> Self {
        Self::constant(Arc::new(FinCat::terminal()), cod, x)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &FinFunctor) -> Result<FinFunctor, FunctorError> {
        if *self.cod != *then.dom {
            return Err(FunctorError::Shape);
        }
        Ok(FinFunctor {
            dom: self.dom.clone(),
            cod: then.cod.clone(),
            obj: self.obj.iter().map(|&x| then.obj[x]).collect(),
            mor: self.mor.iter().map(|&m| then.mor[m]).collect(),
        })
    }

    pub fn dom(&self) -> &Arc<FinCat> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCat> {
        &self.cod
    }

    pub fn obj(&self, x: Obj) -> Obj {
        self.obj[x]
    }

    pub fn mor(&self, m: Mor) -> Mor {
        self.mor[m]
    }

    pub fn obj_map(&self) -> &[Obj] {
        &self.obj
    }

    pub fn mor_map(&self) -> &[Mor] {
        &self.mor
    }

    /// Every `dom(x, y) → cod(fx, fy)` is a bijection.
    pub fn is_full_and_faithful(&self) -> bool {
        (0..self.dom.objects()).all(|x| {
            (0..self.dom.objects()).all(|y| {
                let src = self.dom.hom(x, y);
                let tgt = self.cod.hom(self.obj[x], self.obj[y]);
                if src.len() != tgt.len() {
                    return false;
                }
                let mut hit = vec![false; tgt.len()];
                src.iter().all(|&m| !std::mem::replace(&mut hit[self.cod.hom_index(self.mor[m])], true))
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NatError {
    #[error("functors are not parallel")]
    NotParallel,
    #[error("component at object {0} has the wrong type")]
    Typing(Obj),
    #[error("naturality fails at morphism {0}")]
    Naturality(Mor),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTransf {
    src: FinFunctor,
    tgt: FinFunctor,
    comps: Vec<Mor>,
}

impl NatTransf {
    pub fn new(src: FinFunctor, tgt: FinFunctor, comps: Vec<Mor>) -> Result<Self, NatError> {
        if *src.dom != *tgt.dom || *src.cod != *tgt.cod || comps.len() != src.dom.objects() {
            return Err(NatError::NotParallel);
        }
        let c = &src.cod;
        for (x, &m) in comps.iter().enumerate() {
            if m >= c.morphisms() || c.src(m) != src.obj(x) || c.tgt(m) != tgt.obj(x) {
                return Err(NatError::Typing(x));
            }
        }
        for u in 0..src.dom.morphisms() {
            let (x, y) = (src.dom.src(u), src.dom.tgt(u));
            if c.compose(comps[y], src.mor(u)) != c.compose(tgt.mor(u), comps[x]) {
                return Err(NatError::Naturality(u));
            }
        }
        Ok(NatTransf { src, tgt, comps })
    }

    pub fn identity(f: FinFunctor) -> Self {
        let comps = (0..f.dom.objects()).map(|x| f.cod.id(f.obj(x))).collect();
        NatTransf { src: f.clone(), tgt: f, comps }
    }

    pub fn src(&self) -> &FinFunctor {
        &self.src
    }

    pub fn tgt(&self) -> &FinFunctor {
        &self.tgt
    }

    pub fn comp(&self, x: Obj) -> Mor {
        self.comps[x]
    }

    pub fn components(&self) -> &[Mor] {
        &self.comps
    }

    pub fn is_invertible(&self) -> bool {
        self.comps.iter().all(|&m| self.src.cod.is_iso(m))
    }
}

/// A diagram is a functor out of its shape.
pub type Diagram = FinFunctor;

/// The comma category `j ↓ b` with its projection to the domain of `j`.
#[derive(Debug, Clone)]
pub struct Comma {
    pub cat: Arc<FinCat>,
    /// Objects as pairs `(a, α: ja → b)`.
    pub objects: Vec<(Obj, Mor)>,
    pub proj: FinFunctor,
}

pub fn comma_category(j: &FinFunctor, b: Obj) -> Comma {
    let a_cat = j.dom();
    let b_cat = j.cod();
    let mut objects = Vec::new();
    for a in 0..a_cat.objects() {
        for &alpha in b_cat.hom(j.obj(a), b) {
            objects.push((a, alpha));
        }
    }
    let mut mors = Vec::new();
    for (i, &(a, alpha)) in objects.iter().enumerate() {
        for (k, &(a2, alpha2)) in objects.iter().enumerate() {
            for &f in a_cat.hom(a, a2) {
                if b_cat.compose(alpha2, j.mor(f)) == alpha {
                    mors.push((i, k, f));
                }
            }
        }
    }
    let base_obj: Vec<Obj> = objects.iter().map(|o| o.0).collect();
    let cat = Arc::new(FinCat::over_base(a_cat, &base_obj, &mors).expect("comma category"));
    let proj =
        FinFunctor { dom: cat.clone(), cod: a_cat.clone(), obj: base_obj, mor: mors.iter().map(|m| m.2).collect() };
    Comma { cat, objects, proj }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("diagram has no colimit")]
pub struct NoColimit;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colimit {
    pub apex: Obj,
    pub legs: Vec<Mor>,
}

impl Colimit {
    /// The unique mediating morphism to another cocone, if it factors.
    pub fn factor(&self, diagram: &Diagram, apex: Obj, legs: &[Mor]) -> Option<Mor> {
        let m = diagram.cod();
        m.hom(self.apex, apex)
            .iter()
            .copied()
            .find(|&u| legs.iter().zip(&self.legs).all(|(&c, &l)| m.compose(u, l) == c))
    }
}

/// All cocones over `diagram` with the given apex.
pub fn cocones(diagram: &Diagram, apex: Obj) -> Vec<Vec<Mor>> {
    let shape = diagram.dom();
    let m = diagram.cod();
    let n = shape.objects();
    let mut out = Vec::new();
    let mut legs = vec![0; n];
    fn go(s: usize, n: usize, diagram: &Diagram, apex: Obj, legs: &mut Vec<Mor>, out: &mut Vec<Vec<Mor>>) {
        let shape = diagram.dom();
        let m = diagram.cod();
        if s == n {
            out.push(legs.clone());
            return;
        }
        for &c in m.hom(diagram.obj(s), apex) {
            legs[s] = c;
            let ok = (0..=s).all(|t| {
                shape.hom(t, s).iter().all(|&sig| m.compose(legs[s], diagram.mor(sig)) == legs[t])
                    && shape.hom(s, t).iter().all(|&sig| m.compose(legs[t], diagram.mor(sig)) == legs[s])
            });
            if ok {
                go(s + 1, n, diagram, apex, legs, out);
            }
        }
    }
    let _ = m;
    go(0, n, diagram, apex, &mut legs, &mut out);
    out
}

/// Brute-force colimit: the lowest apex carrying a cocone through which every
/// cocone factors exactly once.
pub fn colimit_brute_force(diagram: &Diagram) -> Result<Colimit, NoColimit> {
    let m = diagram.cod();
    let all: Vec<Vec<Vec<Mor>>> = (0..m.objects()).map(|x| cocones(diagram, x)).collect();
    for apex in 0..m.objects() {
        for legs in &all[apex] {
            let universal = (0..m.objects()).all(|other| {
                all[other].iter().all(|c| {
                    m.hom(apex, other)
                        .iter()
                        .filter(|&&u| c.iter().zip(legs).all(|(&ci, &li)| m.compose(u, li) == ci))
                        .count()
                        == 1
                })
            });
            if universal {
                return Ok(Colimit { apex, legs: legs.clone() });
            }
        }
    }
    Err(NoColimit)
}

/// Colimit in a preorder: the lowest-index least upper bound.
fn colimit_in_preorder(diagram: &Diagram) -> Result<Colimit, NoColimit> {
    let m = diagram.cod();
    let shape_objs = diagram.dom().objects();
    let upper: Vec<Obj> = (0..m.objects()).filter(|&x| (0..shape_objs).all(|s| m.leq(diagram.obj(s), x))).collect();
    let apex = *upper.iter().find(|&&x| upper.iter().all(|&y| m.leq(x, y))).ok_or(NoColimit)?;
    let legs = (0..shape_objs).map(|s| m.hom(diagram.obj(s), apex)[0]).collect();
    Ok(Colimit { apex, legs })
}

/// Colimit of a diagram, with a join fast path when the target is thin.
pub fn colimit(diagram: &Diagram) -> Result<Colimit, NoColimit> {
    if diagram.cod().is_thin() {
        colimit_in_preorder(diagram)
    } else {
        colimit_brute_force(diagram)
    }
}

/// All functors `dom → cod`, in lexicographic order of their tables, stopping
/// after `cap` of them.
pub fn enumerate_functors(dom: &Arc<FinCat>, cod: &Arc<FinCat>, cap: usize) -> Vec<FinFunctor> {
    let n = dom.objects();
    let mut out = Vec::new();
    let mut obj = vec![0; n];
    // morphisms ordered so that each is assigned after nothing in particular;
    // composites are checked once all three members are assigned.
    let order: Vec<Mor> = (0..dom.morphisms()).filter(|&m| !dom.is_identity(m)).collect();
    let mut checks: Vec<Vec<(Mor, Mor, Mor)>> = vec![Vec::new(); dom.morphisms()];
    let rank: HashMap<Mor, usize> = order.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    for f in 0..dom.morphisms() {
        for y in 0..dom.objects() {
            for &g in dom.hom(dom.tgt(f), y) {
                let h = dom.compose(g, f);
                let last = [g, f, h].iter().filter_map(|m| rank.get(m).copied()).max();
                if let Some(r) = last {
                    checks[order[r]].push((g, f, h));
                }
            }
        }
    }
    #[allow(clippy::too_many_arguments)]
    fn objects_rec(
        i: usize,
        dom: &Arc<FinCat>,
        cod: &Arc<FinCat>,
        obj: &mut Vec<Obj>,
        order: &[Mor],
        checks: &[Vec<(Mor, Mor, Mor)>],
        cap: usize,
        out: &mut Vec<FinFunctor>,
    ) {
        if out.len() >= cap {
            return;
        }
        if i == dom.objects() {
            let mut mor: Vec<Mor> = (0..dom.morphisms()).map(|m| cod.id(obj[dom.src(m)])).collect();
            mors_rec(0, dom, cod, obj, &mut mor, order, checks, cap, out);
            return;
        }
        for x in 0..cod.objects() {
            obj[i] = x;
            objects_rec(i + 1, dom, cod, obj, order, checks, cap, out);
        }
    }
    #[allow(clippy::too_many_arguments)]
    fn mors_rec(
        i: usize,
        dom: &Arc<FinCat>,
        cod: &Arc<FinCat>,
        obj: &[Obj],
        mor: &mut Vec<Mor>,
        order: &[Mor],
        checks: &[Vec<(Mor, Mor, Mor)>],
        cap: usize,
        out: &mut Vec<FinFunctor>,
    ) {
        if out.len() >= cap {
            return;
        }
        if i == order.len() {
            out.push(FinFunctor { dom: dom.clone(), cod: cod.clone(), obj: obj.to_vec(), mor: mor.clone() });
            return;
        }
        let m = order[i];
        for &c in cod.hom(obj[dom.src(m)], obj[dom.tgt(m)]) {
            mor[m] = c;
            if checks[m].iter().all(|&(g, f, h)| cod.compose(mor[g], mor[f]) == mor[h]) {
                mors_rec(i + 1, dom, cod, obj, mor, order, checks, cap, out);
            }
        }
    }
    objects_rec(0, dom, cod, &mut obj, &order, &checks, cap, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walking_arrow() -> Arc<FinCat> {
        Arc::new(FinCat::chain(2))
    }

    fn boolean_square() -> Arc<FinCat> {
        // 0 = ⊥, 1 = a, 2 = b, 3 = ⊤
        Arc::new(FinCat::preorder_closure(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap())
    }

    #[test]
    fn terminal_is_valid() {
        let raw = RawCategory { objects: 1, morphisms: vec![(0, 0)], identities: vec![0], composites: vec![(0, 0, 0)] };
        let c = FinCat::from_raw(&raw).unwrap();
        assert_eq!(c.morphisms(), 1);
        assert_eq!(c, FinCat::terminal());
    }

    #[test]
    fn walking_arrow_is_valid() {
        let raw = RawCategory {
            objects: 2,
            morphisms: vec![(0, 0), (1, 1), (0, 1)],
            identities: vec![0, 1],
            composites: vec![(0, 0, 0), (1, 1, 1), (2, 0, 2), (1, 2, 2)],
        };
        let c = FinCat::from_raw(&raw).unwrap();
        assert_eq!(c.hom(0, 1), &[2]);
        assert!(c.hom(1, 0).is_empty());
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // One object, morphisms {1, a, b}; a∘a = b, a∘b = a, b∘a = b, b∘b = b.
        // (a∘a)∘b = b∘b = b but a∘(a∘b) = a∘a = b; (a∘b)∘a = a∘a = b vs a∘(b∘a) = a∘b = a.
        let raw = RawCategory {
            objects: 1,
            morphisms: vec![(0, 0), (0, 0), (0, 0)],
            identities: vec![0],
            composites: vec![
                (0, 0, 0),
                (0, 1, 1),
                (1, 0, 1),
                (0, 2, 2),
                (2, 0, 2),
                (1, 1, 2),
                (1, 2, 1),
                (2, 1, 2),
                (2, 2, 2),
            ],
        };
        match FinCat::from_raw(&raw) {
            Err(CategoryError::NonAssociative { f, g, h }) => {
                let c = FinCat::assemble(1, &raw.morphisms, vec![0], |g, f| {
                    Ok(raw.composites.iter().find(|t| t.0 == g && t.1 == f).unwrap().2)
                })
                .unwrap();
                assert_ne!(c.compose(h, c.compose(g, f)), c.compose(c.compose(h, g), f));
            }
            other => panic!("expected NonAssociative, got {other:?}"),
        }
    }

    #[test]
    fn missing_and_ill_typed_composites() {
        let mut raw = FinCat::chain(2).to_raw();
        raw.composites.pop();
        assert!(matches!(FinCat::from_raw(&raw), Err(CategoryError::MissingComposite { .. })));
        let mut raw = FinCat::chain(2).to_raw();
        raw.composites.push((0, 1, 0));
        assert!(matches!(FinCat::from_raw(&raw), Err(CategoryError::IllTypedComposite { .. })));
    }

    #[test]
    fn identity_law_violation() {
        // id∘f given as id instead of f.
        let raw = RawCategory {
            objects: 1,
            morphisms: vec![(0, 0), (0, 0)],
            identities: vec![0],
            composites: vec![(0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 1)],
        };
        assert_eq!(FinCat::from_raw(&raw), Err(CategoryError::IdentityLaw(1)));
    }

    #[test]
    fn opposite_properties() {
        let t = FinCat::terminal();
        assert_eq!(t.opposite(), t);
        let a = walking_arrow();
        let op = a.opposite();
        assert_eq!(op.hom(1, 0).len(), 1);
        assert!(op.hom(0, 1).is_empty());
        for c in [a.as_ref().clone(), (*boolean_square()).clone(), FinCat::discrete(3)] {
            assert_eq!(c.opposite().morphisms(), c.morphisms());
            assert_eq!(c.opposite().opposite(), c);
            c.opposite().check_laws().unwrap();
        }
    }

    #[test]
    fn comma_examples() {
        let one = Arc::new(FinCat::terminal());
        let c = comma_category(&FinFunctor::identity(one.clone()), 0);
        assert_eq!(c.cat.objects(), 1);
        assert_eq!(c.cat.morphisms(), 1);

        let disc = Arc::new(FinCat::discrete(2));
        let j = FinFunctor::constant(disc.clone(), one.clone(), 0);
        let c = comma_category(&j, 0);
        assert_eq!(c.cat.objects(), 2);
        assert_eq!(c.cat.morphisms(), 2);

        let a = walking_arrow();
        let j = FinFunctor::point(a.clone(), 0);
        let c = comma_category(&j, 1);
        assert_eq!(c.objects, vec![(0, a.hom(0, 1)[0])]);
    }

    #[test]
    fn comma_object_count_is_sum_of_homs() {
        let b = boolean_square();
        let a = Arc::new(FinCat::chain(3));
        for j in enumerate_functors(&a, &b, usize::MAX) {
            for y in 0..b.objects() {
                let expect: usize = (0..a.objects()).map(|x| b.hom(j.obj(x), y).len()).sum();
                let c = comma_category(&j, y);
                assert_eq!(c.cat.objects(), expect);
                c.cat.check_laws().unwrap();
            }
        }
    }

    #[test]
    fn connectivity() {
        assert!(!FinCat::discrete(2).is_connected());
        assert!(FinCat::chain(2).is_connected());
        assert!(!FinCat::empty().is_connected());
        assert!(boolean_square().is_connected());
    }

    #[test]
    fn colimit_examples() {
        let l = boolean_square();
        let one = Arc::new(FinCat::terminal());
        let d = FinFunctor::constant(one.clone(), l.clone(), 1);
        assert_eq!(colimit(&d).unwrap().apex, 1);

        let two = Arc::new(FinCat::discrete(2));
        let d = FinFunctor::new(two.clone(), l.clone(), vec![1, 2], vec![l.id(1), l.id(2)]).unwrap();
        assert_eq!(colimit(&d).unwrap().apex, 3);
        assert_eq!(colimit_brute_force(&d).unwrap().apex, 3);

        let disc = Arc::new(FinCat::discrete(2));
        let d = FinFunctor::identity(disc);
        assert_eq!(colimit(&d), Err(NoColimit));
    }

    #[test]
    fn colimit_fast_path_agrees_with_brute_force() {
        let l = boolean_square();
        for shape in [FinCat::discrete(2), FinCat::chain(2), FinCat::empty(), FinCat::discrete(3)] {
            let shape = Arc::new(shape);
            for d in enumerate_functors(&shape, &l, usize::MAX) {
                assert_eq!(colimit(&d), colimit_brute_force(&d));
            }
        }
    }

    #[test]
    fn colimit_is_universal_in_non_thin_target() {
        // Parallel pair 0 ⇉ 1 as target; the coequalizer-shaped diagram.
        let raw = RawCategory {
            objects: 2,
            morphisms: vec![(0, 0), (1, 1), (0, 1), (0, 1)],
            identities: vec![0, 1],
            composites: vec![(0, 0, 0), (1, 1, 1), (2, 0, 2), (3, 0, 3), (1, 2, 2), (1, 3, 3)],
        };
        let m = Arc::new(FinCat::from_raw(&raw).unwrap());
        // The identity diagram has no cocone: a leg at 1 would equalize 2 and 3.
        assert_eq!(colimit_brute_force(&FinFunctor::identity(m.clone())), Err(NoColimit));
        let arrow = Arc::new(FinCat::chain(2));
        let d = FinFunctor::new(arrow, m.clone(), vec![0, 1], vec![0, 3, 1]).unwrap();
        let c = colimit_brute_force(&d).unwrap();
        assert_eq!(c, Colimit { apex: 1, legs: vec![3, 1] });
        for apex in 0..m.objects() {
            for co in cocones(&d, apex) {
                let n = m
                    .hom(c.apex, apex)
                    .iter()
                    .filter(|&&u| co.iter().zip(&c.legs).all(|(&ci, &li)| m.compose(u, li) == ci))
                    .count();
                assert_eq!(n, 1);
            }
        }
        // 0 + 0 does not exist: the four cocones at 1 cannot all factor.
        let two = Arc::new(FinCat::discrete(2));
        let d = FinFunctor::new(two, m.clone(), vec![0, 0], vec![0, 0]).unwrap();
        assert_eq!(colimit(&d), Err(NoColimit));
    }

    #[test]
    fn functor_validation() {
        let a = walking_arrow();
        let id = FinFunctor::identity(a.clone());
        assert!(FinFunctor::new(a.clone(), a.clone(), id.obj.clone(), id.mor.clone()).is_ok());
        let comp = id.then(&id).unwrap();
        assert_eq!(comp, id);
        // constant object map, arrow sent to a non-endomorphism
        let err = FinFunctor::new(a.clone(), a.clone(), vec![0, 0], vec![0, 1, 2]);
        assert!(matches!(err, Err(FunctorError::Endpoints(_))));
    }

    #[test]
    fn functor_composition_is_associative_and_unital() {
        let a = Arc::new(FinCat::chain(3));
        let fs = enumerate_functors(&a, &a, usize::MAX);
        let id = FinFunctor::identity(a.clone());
        for f in &fs {
            assert_eq!(&f.then(&id).unwrap(), f);
            assert_eq!(&id.then(f).unwrap(), f);
        }
        for f in fs.iter().take(4) {
            for g in fs.iter().take(4) {
                for h in fs.iter().take(4) {
                    assert_eq!(f.then(g).unwrap().then(h).unwrap(), f.then(&g.then(h).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn monotone_maps_of_chains_count() {
        // monotone maps 3 → 3: C(5,3) = 10
        let a = Arc::new(FinCat::chain(3));
        assert_eq!(enumerate_functors(&a, &a, usize::MAX).len(), 10);
    }

    #[test]
    fn nat_transf_validation() {
        let a = walking_arrow();
        let one = Arc::new(FinCat::terminal());
        let f = FinFunctor::point(a.clone(), 0);
        let g = FinFunctor::point(a.clone(), 1);
        let arrow = a.hom(0, 1)[0];
        assert!(NatTransf::new(f.clone(), g.clone(), vec![arrow]).is_ok());
        assert_eq!(NatTransf::new(g, f, vec![arrow]), Err(NatError::Typing(0)));
        let _ = one;
    }
}
