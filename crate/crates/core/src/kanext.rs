//! Set-valued functors on finite categories, tensors, and left Kan
//! extensions computed pointwise.
//!
//! Left Kan extension along the Yoneda embedding is never built as a functor
//! on the whole presheaf category. It is only evaluated at given presheaves,
//! as the tensor `∫^x p(x) × d(x)`.

use std::collections::HashMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::fincat::{
    colimit, comma_category, enumerate_functors, Colimit, FinCat, FinFunctor, Mor, NoColimit, Obj, RawCategory,
};
use crate::prof::{companion, compose, enumerate_cells_allowed, CellError, ProCell, Profunctor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetFunctorError {
    #[error("tables do not match the category")]
    Shape,
    #[error("map of morphism {0} sends an element out of range")]
    OutOfRange(Mor),
    #[error("identity of object {0} does not act trivially")]
    Identity(Obj),
    #[error("composite {g} ∘ {f} is not preserved")]
    Composition { g: Mor, f: Mor },
}

fn validate_set_functor(
    cat: &FinCat,
    sizes: &[usize],
    maps: &[Vec<usize>],
    contra: bool,
) -> Result<(), SetFunctorError> {
    if sizes.len() != cat.objects() || maps.len() != cat.morphisms() {
        return Err(SetFunctorError::Shape);
    }
    for (m, map) in maps.iter().enumerate() {
        let (from, to) = if contra { (cat.tgt(m), cat.src(m)) } else { (cat.src(m), cat.tgt(m)) };
        if map.len() != sizes[from] {
            return Err(SetFunctorError::Shape);
        }
        if map.iter().any(|&v| v >= sizes[to]) {
            return Err(SetFunctorError::OutOfRange(m));
        }
    }
    for x in 0..cat.objects() {
        if maps[cat.id(x)].iter().enumerate().any(|(i, &v)| i != v) {
            return Err(SetFunctorError::Identity(x));
        }
    }
    for f in 0..cat.morphisms() {
        for y in 0..cat.objects() {
            for &g in cat.hom(cat.tgt(f), y) {
                let gf = cat.compose(g, f);
                let ok = if contra {
                    (0..sizes[y]).all(|q| maps[gf][q] == maps[f][maps[g][q]])
                } else {
                    (0..sizes[cat.src(f)]).all(|q| maps[gf][q] == maps[g][maps[f][q]])
                };
                if !ok {
                    return Err(SetFunctorError::Composition { g, f });
                }
            }
        }
    }
    Ok(())
}

/// A functor `A → FinSet`; `maps[m]` is `d(src m) → d(tgt m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Copresheaf {
    cat: Arc<FinCat>,
    sizes: Vec<usize>,
    maps: Vec<Vec<usize>>,
}

impl Copresheaf {
    pub fn new(cat: Arc<FinCat>, sizes: Vec<usize>, maps: Vec<Vec<usize>>) -> Result<Self, SetFunctorError> {
        validate_set_functor(&cat, &sizes, &maps, false)?;
        Ok(Copresheaf { cat, sizes, maps })
    }

    pub fn constant(cat: Arc<FinCat>, n: usize) -> Self {
        let sizes = vec![n; cat.objects()];
        let maps = vec![(0..n).collect(); cat.morphisms()];
        Copresheaf { cat, sizes, maps }
    }

    /// `A(x, −)`, elements are positions in the hom-set.
    pub fn representable(cat: Arc<FinCat>, x: Obj) -> Self {
        let sizes = (0..cat.objects()).map(|y| cat.hom(x, y).len()).collect();
        let maps = (0..cat.morphisms())
            .map(|m| cat.hom(x, cat.src(m)).iter().map(|&u| cat.hom_index(cat.compose(m, u))).collect())
            .collect();
        Copresheaf { cat, sizes, maps }
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn size(&self, x: Obj) -> usize {
        self.sizes[x]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn act(&self, m: Mor, q: usize) -> usize {
        self.maps[m][q]
    }

    /// `d ∘ f` for `f: C → A`.
    pub fn pullback(&self, f: &FinFunctor) -> Self {
        let c = f.dom().clone();
        let sizes = (0..c.objects()).map(|x| self.sizes[f.obj(x)]).collect();
        let maps = (0..c.morphisms()).map(|m| self.maps[f.mor(m)].clone()).collect();
        Copresheaf { cat: c, sizes, maps }
    }

    /// Fiberwise disjoint union.
    pub fn sum(&self, other: &Copresheaf) -> Self {
        let sizes = self.sizes.iter().zip(&other.sizes).map(|(a, b)| a + b).collect();
        let maps = (0..self.cat.morphisms())
            .map(|m| {
                let off = self.sizes[self.cat.tgt(m)];
                self.maps[m].iter().copied().chain(other.maps[m].iter().map(|&v| v + off)).collect()
            })
            .collect();
        Copresheaf { cat: self.cat.clone(), sizes, maps }
    }

    /// The profunctor `D: 1 ⇸ A` with `D(∗, x) = dx`.
    pub fn to_profunctor(&self) -> Profunctor {
        let one = Arc::new(FinCat::terminal());
        let d = self.clone();
        let d2 = self.clone();
        Profunctor::from_fn(one, self.cat.clone(), move |_, x| d.sizes[x], |_, _, q| q, move |m, _, q| d2.maps[m][q])
            .expect("copresheaf actions are functorial")
    }
}

/// A functor `A^op → FinSet`; `maps[m]` is `p(tgt m) → p(src m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    cat: Arc<FinCat>,
    sizes: Vec<usize>,
    maps: Vec<Vec<usize>>,
}

impl Presheaf {
    pub fn new(cat: Arc<FinCat>, sizes: Vec<usize>, maps: Vec<Vec<usize>>) -> Result<Self, SetFunctorError> {
        validate_set_functor(&cat, &sizes, &maps, true)?;
        Ok(Presheaf { cat, sizes, maps })
    }

    /// `A(−, y)`, elements are positions in the hom-set.
    pub fn representable(cat: Arc<FinCat>, y: Obj) -> Self {
        let sizes = (0..cat.objects()).map(|x| cat.hom(x, y).len()).collect();
        let maps = (0..cat.morphisms())
            .map(|m| cat.hom(cat.tgt(m), y).iter().map(|&u| cat.hom_index(cat.compose(u, m))).collect())
            .collect();
        Presheaf { cat, sizes, maps }
    }

    pub fn terminal(cat: Arc<FinCat>) -> Self {
        let sizes = vec![1; cat.objects()];
        let maps = vec![vec![0]; cat.morphisms()];
        Presheaf { cat, sizes, maps }
    }

    /// Pointwise product; a tuple `(ξ_1, …, ξ_n)` is encoded in mixed radix
    /// with the first factor most significant.
    pub fn pointwise_product(cat: &Arc<FinCat>, ps: &[Presheaf]) -> Presheaf {
        let sizes: Vec<usize> = (0..cat.objects()).map(|x| ps.iter().map(|p| p.sizes[x]).product()).collect();
        let maps = (0..cat.morphisms())
            .map(|m| {
                let (from, to) = (cat.tgt(m), cat.src(m));
                (0..sizes[from])
                    .map(|code| {
                        let parts = decode(code, ps.iter().map(|p| p.sizes[from]));
                        encode(parts.iter().zip(ps).map(|(&xi, p)| (p.maps[m][xi], p.sizes[to])))
                    })
                    .collect()
            })
            .collect();
        Presheaf { cat: cat.clone(), sizes, maps }
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn size(&self, x: Obj) -> usize {
        self.sizes[x]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    /// `p(m)(ξ)` for `ξ ∈ p(tgt m)`.
    pub fn act(&self, m: Mor, xi: usize) -> usize {
        self.maps[m][xi]
    }

    /// The profunctor `A ⇸ 1` with fibers `p(x)`.
    pub fn to_profunctor(&self) -> Profunctor {
        let one = Arc::new(FinCat::terminal());
        let p = self.clone();
        let p2 = self.clone();
        Profunctor::from_fn(
            self.cat.clone(),
            one,
            move |x, _| p.sizes[x],
            move |m, _, xi| p2.maps[m][xi],
            |_, _, xi| xi,
        )
        .expect("presheaf actions are functorial")
    }
}

/// Splits a mixed-radix code, first factor most significant.
pub fn decode(mut code: usize, radices: impl DoubleEndedIterator<Item = usize>) -> Vec<usize> {
    let mut out: Vec<usize> = radices
        .rev()
        .map(|r| {
            let d = code % r.max(1);
            code /= r.max(1);
            d
        })
        .collect();
    out.reverse();
    out
}

/// Inverse of [`decode`]: pairs of `(digit, radix)`.
pub fn encode(parts: impl IntoIterator<Item = (usize, usize)>) -> usize {
    parts.into_iter().fold(0, |acc, (d, r)| acc * r + d)
}

/// Natural transformations `p ⇒ q` of presheaves, as component tables
/// `comp[x][ξ]`, in lexicographic order, at most `cap` of them.
pub fn presheaf_maps(p: &Presheaf, q: &Presheaf, cap: usize) -> Vec<Vec<Vec<usize>>> {
    let cat = p.cat.clone();
    let mut elems = Vec::new();
    for x in 0..cat.objects() {
        for xi in 0..p.sizes[x] {
            elems.push((x, xi));
        }
    }
    let index: HashMap<(Obj, usize), usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    // value(e2) = q(m)(value(e1)), e2 = p(m)(e1)
    let mut checks: Vec<Vec<(usize, usize, Mor)>> = vec![Vec::new(); elems.len()];
    for m in 0..cat.morphisms() {
        for xi in 0..p.sizes[cat.tgt(m)] {
            let e1 = index[&(cat.tgt(m), xi)];
            let e2 = index[&(cat.src(m), p.maps[m][xi])];
            checks[e1.max(e2)].push((e1, e2, m));
        }
    }
    let mut val = vec![0; elems.len()];
    let mut out = Vec::new();
    fn go(
        e: usize,
        elems: &[(Obj, usize)],
        checks: &[Vec<(usize, usize, Mor)>],
        q: &Presheaf,
        val: &mut Vec<usize>,
        cap: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= cap {
            return;
        }
        if e == elems.len() {
            out.push(val.clone());
            return;
        }
        for v in 0..q.sizes[elems[e].0] {
            val[e] = v;
            if checks[e].iter().all(|&(e1, e2, m)| q.maps[m][val[e1]] == val[e2]) {
                go(e + 1, elems, checks, q, val, cap, out);
            }
        }
    }
    go(0, &elems, &checks, q, &mut val, cap, &mut out);
    out.into_iter()
        .map(|flat| {
            let mut comps = vec![Vec::new(); cat.objects()];
            for (i, &(x, _)) in elems.iter().enumerate() {
                comps[x].push(flat[i]);
            }
            comps
        })
        .collect()
}

/// All copresheaves on `cat` with every `|dx| ≤ max`, in lexicographic
/// order of sizes then maps, at most `cap`.
pub fn enumerate_copresheaves(cat: &Arc<FinCat>, max: usize, cap: usize) -> Vec<Copresheaf> {
    let n = cat.objects();
    let mut out = Vec::new();
    let mut sizes = vec![0; n];
    let moving: Vec<Mor> = (0..cat.morphisms()).filter(|&m| !cat.is_identity(m)).collect();
    loop {
        if out.len() >= cap {
            break;
        }
        let mut maps: Vec<Vec<usize>> = (0..cat.morphisms()).map(|m| vec![0; sizes[cat.src(m)]]).collect();
        for x in 0..n {
            maps[cat.id(x)] = (0..sizes[x]).collect();
        }
        fill(cat, &sizes, &moving, 0, 0, &mut maps, cap, &mut out);
        // next size vector, last position fastest
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if sizes[i] < max {
                sizes[i] += 1;
                for s in sizes.iter_mut().skip(i + 1) {
                    *s = 0;
                }
                break;
            }
        }
    }
    out.truncate(cap);
    out
}

#[allow(clippy::too_many_arguments)]
fn fill(
    cat: &Arc<FinCat>,
    sizes: &[usize],
    moving: &[Mor],
    i: usize,
    q: usize,
    maps: &mut Vec<Vec<usize>>,
    cap: usize,
    out: &mut Vec<Copresheaf>,
) {
    if out.len() >= cap {
        return;
    }
    if i == moving.len() {
        if validate_set_functor(cat, sizes, maps, false).is_ok() {
            out.push(Copresheaf { cat: cat.clone(), sizes: sizes.to_vec(), maps: maps.clone() });
        }
        return;
    }
    let m = moving[i];
    if q == sizes[cat.src(m)] {
        // prune on composites whose three members are all assigned
        let assigned = |u: Mor| cat.is_identity(u) || moving[..=i].contains(&u);
        let ok = moving[..=i].iter().all(|&f| {
            (0..cat.objects()).all(|y| {
                cat.hom(cat.tgt(f), y).iter().all(|&g| {
                    let gf = cat.compose(g, f);
                    !(assigned(g) && assigned(gf)) || (0..sizes[cat.src(f)]).all(|x| maps[gf][x] == maps[g][maps[f][x]])
                })
            })
        });
        if ok {
            fill(cat, sizes, moving, i + 1, 0, maps, cap, out);
        }
        return;
    }
    for v in 0..sizes[cat.tgt(m)] {
        maps[m][q] = v;
        fill(cat, sizes, moving, i, q + 1, maps, cap, out);
    }
}

/// The coend `∫^x p(x) × d(x)` with its presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    offsets: Vec<usize>,
    dsizes: Vec<usize>,
    class: Vec<usize>,
    reps: Vec<(Obj, usize, usize)>,
}

impl Tensor {
    pub fn size(&self) -> usize {
        self.reps.len()
    }

    pub fn class_of(&self, x: Obj, xi: usize, q: usize) -> usize {
        self.class[self.offsets[x] + xi * self.dsizes[x] + q]
    }

    pub fn rep(&self, k: usize) -> (Obj, usize, usize) {
        self.reps[k]
    }
}

/// `∫^x p(x) × d(x)`: the quotient of `Σ_x p(x) × d(x)` by
/// `(p(α)ξ, q) ~ (ξ, d(α)q)`.
pub fn tensor(p: &Presheaf, d: &Copresheaf) -> Tensor {
    let cat = &d.cat;
    let n = cat.objects();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut total = 0;
    for x in 0..n {
        offsets.push(total);
        total += p.sizes[x] * d.sizes[x];
    }
    offsets.push(total);
    let tok = |x: Obj, xi: usize, q: usize| offsets[x] + xi * d.sizes[x] + q;
    let mut uf = UnionFind::<usize>::new(total);
    for alpha in 0..cat.morphisms() {
        let (x, y) = (cat.src(alpha), cat.tgt(alpha));
        for xi in 0..p.sizes[y] {
            for q in 0..d.sizes[x] {
                uf.union(tok(x, p.maps[alpha][xi], q), tok(y, xi, d.maps[alpha][q]));
            }
        }
    }
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut class = vec![0; total];
    let mut reps = Vec::new();
    for x in 0..n {
        for xi in 0..p.sizes[x] {
            for q in 0..d.sizes[x] {
                let t = tok(x, xi, q);
                let next = reps.len();
                let k = *seen.entry(uf.find(t)).or_insert(next);
                if k == next {
                    reps.push((x, xi, q));
                }
                class[t] = k;
            }
        }
    }
    Tensor { offsets, dsizes: d.sizes.clone(), class, reps }
}

/// The map `∫ (Π p_i) × d → Π (∫ p_i × d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductComparison {
    pub domain: usize,
    pub codomain: usize,
    /// Encoded tuples, first factor most significant.
    pub map: Vec<usize>,
    pub bijective: bool,
}

pub fn product_comparison(d: &Copresheaf, ps: &[Presheaf]) -> ProductComparison {
    let cat = &d.cat;
    let prod = Presheaf::pointwise_product(cat, ps);
    let whole = tensor(&prod, d);
    let parts: Vec<Tensor> = ps.iter().map(|p| tensor(p, d)).collect();
    let radices: Vec<usize> = parts.iter().map(Tensor::size).collect();
    let codomain: usize = radices.iter().product();
    let mut map = vec![usize::MAX; whole.size()];
    let mut consistent = true;
    for x in 0..cat.objects() {
        for code in 0..prod.sizes[x] {
            let xis = decode(code, ps.iter().map(|p| p.sizes[x]));
            for q in 0..d.sizes[x] {
                let v = encode(parts.iter().zip(&xis).zip(&radices).map(|((t, &xi), &r)| (t.class_of(x, xi, q), r)));
                let k = whole.class_of(x, code, q);
                if map[k] == usize::MAX {
                    map[k] = v;
                } else if map[k] != v {
                    consistent = false;
                }
            }
        }
    }
    assert!(consistent, "product comparison is well defined on coend classes");
    let mut hit = vec![false; codomain];
    let injective = map.iter().all(|&v| !std::mem::replace(&mut hit[v], true));
    ProductComparison { domain: whole.size(), codomain, bijective: injective && whole.size() == codomain, map }
}

/// Presheaves on `A` indexed by the objects of another category `B`, with a
/// transformation per morphism of `B`: a functor `B → PA` given as data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafFamily {
    pub base: Arc<FinCat>,
    pub values: Vec<Presheaf>,
    /// `maps[β][x]` is the component at `x` of the transformation for `β`.
    pub maps: Vec<Vec<Vec<usize>>>,
}

impl PresheafFamily {
    /// A copresheaf `A → Set` as a family of presheaves on `1`.
    pub fn from_copresheaf(d: &Copresheaf) -> Self {
        let one = Arc::new(FinCat::terminal());
        let values = d
            .sizes
            .iter()
            .map(|&n| Presheaf { cat: one.clone(), sizes: vec![n], maps: vec![(0..n).collect()] })
            .collect();
        let maps = d.maps.iter().map(|m| vec![m.clone()]).collect();
        PresheafFamily { base: d.cat.clone(), values, maps }
    }
}

/// `D: M ⇸ A` with `D(m, x) = (dx)(m)` for a family `d: A → PM`.
pub fn yoneda_restriction(d: &PresheafFamily) -> Result<Profunctor, crate::prof::ProfError> {
    let m_cat = d.values.first().map(|p| p.cat.clone()).unwrap_or_else(|| Arc::new(FinCat::terminal()));
    Profunctor::from_fn(
        m_cat,
        d.base.clone(),
        |m, x| d.values[x].sizes[m],
        |mu, x, e| d.values[x].maps[mu][e],
        |alpha, m, e| d.maps[alpha][m][e],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ColimitFormula,
    TensorFormula,
}

/// A left Kan extension `l` of `d: A → M` along `j_*`, with unit
/// `η: j_* ⇒ 1_M` along `d, l`.
#[derive(Debug, Clone)]
pub struct KanWitness {
    pub l: FinFunctor,
    pub unit: ProCell,
    pub colimits: Vec<Colimit>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KanError {
    #[error("no colimit over the comma category at object {0}")]
    NoColimit(Obj),
    #[error("functor boundaries do not match")]
    Boundary,
    #[error(transparent)]
    Cell(#[from] CellError),
}

/// `l(b) = colim_{(a, α: ja → b)} d(a)`.
pub fn pointwise_lan(d: &FinFunctor, j: &FinFunctor) -> Result<KanWitness, KanError> {
    if !crate::prof::same_cat(d.dom(), j.dom()) {
        return Err(KanError::Boundary);
    }
    let (b_cat, m_cat) = (j.cod().clone(), d.cod().clone());
    let mut commas = Vec::with_capacity(b_cat.objects());
    let mut colims = Vec::with_capacity(b_cat.objects());
    for b in 0..b_cat.objects() {
        let comma = comma_category(j, b);
        let diagram = comma.proj.then(d).map_err(|_| KanError::Boundary)?;
        let c = colimit(&diagram).map_err(|NoColimit| KanError::NoColimit(b))?;
        colims.push((c, diagram));
        commas.push(comma);
    }
    let positions: Vec<HashMap<(Obj, Mor), usize>> =
        commas.iter().map(|c| c.objects.iter().enumerate().map(|(i, &o)| (o, i)).collect()).collect();
    let obj: Vec<Obj> = colims.iter().map(|(c, _)| c.apex).collect();
    let mut mor = Vec::with_capacity(b_cat.morphisms());
    for beta in 0..b_cat.morphisms() {
        let (b, b2) = (b_cat.src(beta), b_cat.tgt(beta));
        let legs: Vec<Mor> = commas[b]
            .objects
            .iter()
            .map(|&(a, alpha)| colims[b2].0.legs[positions[b2][&(a, b_cat.compose(beta, alpha))]])
            .collect();
        let (c, diagram) = &colims[b];
        let u = c.factor(diagram, obj[b2], &legs).ok_or(KanError::NoColimit(b))?;
        mor.push(u);
    }
    let l = FinFunctor::new(b_cat.clone(), m_cat.clone(), obj, mor).map_err(|_| KanError::Boundary)?;
    let js = companion(j);
    let hom_m = Profunctor::hom(&m_cat);
    let unit = ProCell::from_fn(js.prof.clone(), hom_m, d.clone(), l.clone(), |a, b, i| {
        let alpha = b_cat.hom(j.obj(a), b)[i];
        let leg = colims[b].0.legs[positions[b][&(a, alpha)]];
        m_cat.hom_index(leg)
    })?;
    Ok(KanWitness {
        l,
        unit,
        colimits: colims.into_iter().map(|c| c.0).collect(),
        provenance: Provenance::ColimitFormula,
    })
}

/// One test cell `φ: J ⊙ H ⇒ 1_M` along `d, k`, with `H: B ⇸ C`, `k: C → M`.
#[derive(Debug, Clone)]
pub struct BatteryCell {
    pub h: Profunctor,
    pub k: FinFunctor,
    pub phi: ProCell,
}

#[derive(Debug, Clone)]
pub struct Battery {
    pub id: String,
    pub cells: Vec<BatteryCell>,
}

/// Outcome of checking a candidate unit against a battery. A pass only
/// means no cell of the battery refutes the candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanVerdict {
    pub battery_id: String,
    pub battery_size: usize,
    pub passed: bool,
    pub vacuous: bool,
    /// Index of the first refuting cell and how many factorisations it has
    /// (0, or 2 meaning "at least two").
    pub failure: Option<(usize, usize)>,
}

/// Cells `H ⇒ 1_M` along `l, k` through which `φ` factors, at most `cap`.
pub fn factorisations(eta: &ProCell, cell: &BatteryCell, cap: usize) -> Result<Vec<ProCell>, KanError> {
    let j = eta.src();
    let (d, l) = (eta.left_functor(), eta.right_functor());
    let m_cat = l.cod().clone();
    let comp = compose(j, &cell.h)?;
    if *cell.phi.src() != comp.prof || !crate::prof::same_functor(cell.phi.left_functor(), d) {
        return Err(KanError::Boundary);
    }
    let h = &cell.h;
    let k = &cell.k;
    let (na, nb) = (j.dom().objects(), j.cod().objects());
    let allowed = |b: Obj, c: Obj, y: usize, v: usize| -> bool {
        let u = m_cat.hom(l.obj(b), k.obj(c))[v];
        (0..na).all(|a| {
            (0..j.size(a, b)).all(|x| {
                let e = m_cat.hom(d.obj(a), l.obj(b))[eta.apply(a, b, x)];
                m_cat.hom_index(m_cat.compose(u, e)) == cell.phi.apply(a, c, comp.class_of(a, c, b, x, y))
            })
        })
    };
    let _ = nb;
    Ok(enumerate_cells_allowed(h, &Profunctor::hom(&m_cat), l, k, cap, allowed))
}

pub fn check_defines_lan_bounded(eta: &ProCell, battery: &Battery) -> Result<LanVerdict, KanError> {
    let mut failure = None;
    for (i, cell) in battery.cells.iter().enumerate() {
        let n = factorisations(eta, cell, 2)?.len();
        if n != 1 {
            failure = Some((i, n));
            break;
        }
    }
    Ok(LanVerdict {
        battery_id: battery.id.clone(),
        battery_size: battery.cells.len(),
        passed: failure.is_none(),
        vacuous: battery.cells.is_empty(),
        failure,
    })
}

/// Cells `J ⊙ H ⇒ 1_M` along `d, k` for every `H` in `hs`, every functor
/// `k: cod H → M` and every such cell, each family capped.
pub fn battery_from_legs(
    id: &str,
    j: &Profunctor,
    d: &FinFunctor,
    hs: &[Profunctor],
    functor_cap: usize,
    cell_cap: usize,
) -> Result<Battery, KanError> {
    let m_cat = d.cod().clone();
    let hom_m = Profunctor::hom(&m_cat);
    let mut cells = Vec::new();
    for h in hs {
        let comp = compose(j, h)?;
        for k in enumerate_functors(h.cod(), &m_cat, functor_cap) {
            for phi in crate::prof::enumerate_cells(&comp.prof, &hom_m, d, &k, cell_cap) {
                cells.push(BatteryCell { h: h.clone(), k: k.clone(), phi });
            }
        }
    }
    Ok(Battery { id: id.to_string(), cells })
}

/// Cells of the form `[x, y] ↦ ψ(y) ∘ η(x)` for cells `ψ: 1_B ⇒ 1_M` along
/// `l, k`. Every such cell factors by construction; uniqueness is what is tested.
pub fn battery_own_cocones(eta: &ProCell, functor_cap: usize, cell_cap: usize) -> Result<Battery, KanError> {
    let j = eta.src();
    let (d, l) = (eta.left_functor(), eta.right_functor());
    let (b_cat, m_cat) = (l.dom().clone(), l.cod().clone());
    let one_b = Profunctor::hom(&b_cat);
    let hom_m = Profunctor::hom(&m_cat);
    let comp = compose(j, &one_b)?;
    let mut cells = Vec::new();
    for k in enumerate_functors(&b_cat, &m_cat, functor_cap) {
        for psi in crate::prof::enumerate_cells(&one_b, &hom_m, l, &k, cell_cap) {
            let phi = ProCell::from_composite(&comp, hom_m.clone(), d.clone(), k.clone(), |a, c, b, x, y| {
                let e = m_cat.hom(d.obj(a), l.obj(b))[eta.apply(a, b, x)];
                let u = m_cat.hom(l.obj(b), k.obj(c))[psi.apply(b, c, y)];
                m_cat.hom_index(m_cat.compose(u, e))
            })?;
            cells.push(BatteryCell { h: one_b.clone(), k: k.clone(), phi });
        }
    }
    Ok(Battery { id: format!("own-cocones(functors≤{functor_cap},cells≤{cell_cap})"), cells })
}

/// For a cell `1_A ⇒ 1_M` along `d, k`: its components `d a → k a`, read
/// off at identities.
pub fn vertical_components(cell: &ProCell) -> Vec<Mor> {
    let (d, k) = (cell.left_functor(), cell.right_functor());
    let (a_cat, m_cat) = (d.dom().clone(), d.cod().clone());
    (0..a_cat.objects())
        .map(|a| m_cat.hom(d.obj(a), k.obj(a))[cell.apply(a, a, a_cat.hom_index(a_cat.id(a)))])
        .collect()
}

/// Both routes to full faithfulness: hom-set bijections, and cartesianness
/// of the unit cell `1_f`.
pub fn is_full_and_faithful(f: &FinFunctor) -> bool {
    f.is_full_and_faithful()
}

pub fn full_and_faithful_routes(f: &FinFunctor) -> (bool, bool) {
    (f.is_full_and_faithful(), ProCell::unit(f).is_cartesian())
}

/// A finite full subcategory of presheaves on `A`, with all transformations
/// between the listed presheaves as morphisms.
#[derive(Debug, Clone)]
pub struct PresheafSubcategory {
    pub base: Arc<FinCat>,
    pub objects: Vec<Presheaf>,
    pub cat: Arc<FinCat>,
    /// Morphism `m` is the transformation `components[m][x][ξ]`.
    pub components: Vec<Vec<Vec<usize>>>,
    index: HashMap<(Obj, Obj, Vec<Vec<usize>>), Mor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum YonedaError {
    #[error("presheaf data is invalid: {0}")]
    Presheaf(#[from] SetFunctorError),
    #[error("transformation count exceeds the cap")]
    TooLarge,
    #[error(transparent)]
    Kan(#[from] KanError),
    #[error(transparent)]
    Cell(#[from] CellError),
}

impl PresheafSubcategory {
    pub fn new(base: Arc<FinCat>, objects: Vec<Presheaf>, cap: usize) -> Result<Self, YonedaError> {
        let n = objects.len();
        let mut morphisms = Vec::new();
        let mut components = Vec::new();
        let mut index = HashMap::new();
        for (i, p) in objects.iter().enumerate() {
            for (k, q) in objects.iter().enumerate() {
                let maps = presheaf_maps(p, q, cap + 1);
                if maps.len() > cap {
                    return Err(YonedaError::TooLarge);
                }
                for comp in maps {
                    index.insert((i, k, comp.clone()), morphisms.len());
                    morphisms.push((i, k));
                    components.push(comp);
                }
            }
        }
        let identities = (0..n)
            .map(|i| {
                let id: Vec<Vec<usize>> = (0..base.objects()).map(|x| (0..objects[i].sizes[x]).collect()).collect();
                index[&(i, i, id)]
            })
            .collect();
        let mut composites = Vec::new();
        for f in 0..morphisms.len() {
            for g in 0..morphisms.len() {
                if morphisms[f].1 != morphisms[g].0 {
                    continue;
                }
                let comp: Vec<Vec<usize>> = (0..base.objects())
                    .map(|x| components[f][x].iter().map(|&v| components[g][x][v]).collect())
                    .collect();
                let h = index[&(morphisms[f].0, morphisms[g].1, comp)];
                composites.push((g, f, h));
            }
        }
        let raw = RawCategory { objects: n, morphisms, identities, composites };
        let cat = Arc::new(FinCat::from_raw(&raw).expect("presheaf transformations form a category"));
        Ok(PresheafSubcategory { base, objects, cat, components, index })
    }

    pub fn morphism(&self, from: Obj, to: Obj, comps: &[Vec<usize>]) -> Option<Mor> {
        self.index.get(&(from, to, comps.to_vec())).copied()
    }
}

/// Result of the instance check of the two Yoneda axioms.
#[derive(Debug, Clone)]
pub struct YonedaReport {
    pub yoneda_full_and_faithful: bool,
    pub axiom_c_cartesian: bool,
    pub axiom_e: LanVerdict,
    /// Candidates `η: J ⇒ 1_P` along `y, k` that pass the (non-pointwise)
    /// battery and are also cartesian, out of all that pass.
    pub lemma_passing: usize,
    pub lemma_cartesian: usize,
}

/// Builds presheaves `A(−, x)` and `J(−, y)`, the embedding `y: A → P` and
/// `g: B → P`, the cartesian cell `J ⇒ 1_P` of Yoneda bijections, and checks
/// it against a bounded battery.
pub fn yoneda_axiom_instance_check(
    j: &Profunctor,
    functor_cap: usize,
    cell_cap: usize,
) -> Result<YonedaReport, YonedaError> {
    let a_cat = j.dom().clone();
    let b_cat = j.cod().clone();
    let (na, nb) = (a_cat.objects(), b_cat.objects());
    let mut objects: Vec<Presheaf> = (0..na).map(|x| Presheaf::representable(a_cat.clone(), x)).collect();
    for y in 0..nb {
        let sizes = (0..na).map(|x| j.size(x, y)).collect();
        let maps =
            (0..a_cat.morphisms()).map(|m| (0..j.size(a_cat.tgt(m), y)).map(|e| j.left(m, y, e)).collect()).collect();
        objects.push(Presheaf::new(a_cat.clone(), sizes, maps)?);
    }
    let sub = PresheafSubcategory::new(a_cat.clone(), objects, 4096)?;
    let p_cat = sub.cat.clone();
    // yoneda on morphisms: u: x → x′ acts by post-composition
    let y_mor = (0..a_cat.morphisms())
        .map(|u| {
            let (x, x2) = (a_cat.src(u), a_cat.tgt(u));
            let comps: Vec<Vec<usize>> = (0..na)
                .map(|z| a_cat.hom(z, x).iter().map(|&v| a_cat.hom_index(a_cat.compose(u, v))).collect())
                .collect();
            sub.morphism(x, x2, &comps).expect("post-composition is natural")
        })
        .collect();
    let yon = FinFunctor::new(a_cat.clone(), p_cat.clone(), (0..na).collect(), y_mor).expect("yoneda is a functor");
    let g_mor = (0..b_cat.morphisms())
        .map(|beta| {
            let (y, y2) = (b_cat.src(beta), b_cat.tgt(beta));
            let comps: Vec<Vec<usize>> =
                (0..na).map(|z| (0..j.size(z, y)).map(|e| j.right(beta, z, e)).collect()).collect();
            sub.morphism(na + y, na + y2, &comps).expect("right action is natural")
        })
        .collect();
    let g = FinFunctor::new(b_cat.clone(), p_cat.clone(), (na..na + nb).collect(), g_mor).expect("g is a functor");
    let hom_p = Profunctor::hom(&p_cat);
    // ξ ∈ J(x, y) ↦ the transformation A(−, x) ⇒ J(−, y), v ↦ v·ξ
    let eta = ProCell::from_fn(j.clone(), hom_p.clone(), yon.clone(), g.clone(), |x, y, e| {
        let comps: Vec<Vec<usize>> =
            (0..na).map(|z| a_cat.hom(z, x).iter().map(|&v| j.left(v, y, e)).collect()).collect();
        let m = sub.morphism(x, na + y, &comps).expect("yoneda transformation");
        p_cat.hom_index(m)
    })?;
    let axiom_c_cartesian = eta.is_cartesian();
    let hs = vec![Profunctor::hom(&b_cat)];
    let battery = battery_from_legs("yoneda(e): H = 1_B", j, &yon, &hs, functor_cap, cell_cap)?;
    let axiom_e = check_defines_lan_bounded(&eta, &battery)?;
    let mut lemma_passing = 0;
    let mut lemma_cartesian = 0;
    for k in enumerate_functors(&b_cat, &p_cat, functor_cap) {
        for cand in crate::prof::enumerate_cells(j, &hom_p, &yon, &k, cell_cap) {
            if check_defines_lan_bounded(&cand, &battery)?.passed {
                lemma_passing += 1;
                if cand.is_cartesian() {
                    lemma_cartesian += 1;
                }
            }
        }
    }
    Ok(YonedaReport {
        yoneda_full_and_faithful: yon.is_full_and_faithful(),
        axiom_c_cartesian,
        axiom_e,
        lemma_passing,
        lemma_cartesian,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow() -> Arc<FinCat> {
        Arc::new(FinCat::chain(2))
    }

    fn square() -> Arc<FinCat> {
        Arc::new(FinCat::preorder_closure(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap())
    }

    #[test]
    fn walking_arrow_copresheaf_count() {
        // Σ over sizes n0, n1 ≤ 2 of n1^n0
        let expect: usize = (0..=2u32).flat_map(|a| (0..=2usize).map(move |b| b.pow(a))).sum();
        assert_eq!(enumerate_copresheaves(&arrow(), 2, usize::MAX).len(), expect);
        assert_eq!(expect, 11);
    }

    #[test]
    fn copresheaf_enumeration_is_valid_and_distinct() {
        let c = square();
        let all = enumerate_copresheaves(&c, 2, usize::MAX);
        for d in &all {
            Copresheaf::new(d.cat.clone(), d.sizes.clone(), d.maps.clone()).unwrap();
        }
        let mut v: Vec<_> = all.iter().map(|d| (d.sizes.clone(), d.maps.clone())).collect();
        v.sort();
        v.dedup();
        assert_eq!(v.len(), all.len());
    }

    #[test]
    fn co_yoneda_on_arrow() {
        let a = arrow();
        for d in enumerate_copresheaves(&a, 2, usize::MAX) {
            for y in 0..2 {
                let t = tensor(&Presheaf::representable(a.clone(), y), &d);
                assert_eq!(t.size(), d.size(y));
            }
        }
    }

    #[test]
    fn empty_copresheaf_gives_empty_tensor() {
        let a = square();
        let d = Copresheaf::constant(a.clone(), 0);
        assert_eq!(tensor(&Presheaf::terminal(a), &d).size(), 0);
    }

    #[test]
    fn discrete_constant_product_comparison() {
        let a = Arc::new(FinCat::discrete(2));
        let d = Copresheaf::constant(a, 1);
        let pc = product_comparison(&d, &[]);
        assert_eq!((pc.domain, pc.codomain, pc.bijective), (2, 1, false));
    }

    #[test]
    fn meet_semilattice_representable_pairs_are_bijective() {
        let a = square();
        let d = Copresheaf::constant(a.clone(), 1);
        for x in 0..4 {
            for y in 0..4 {
                let ps = [Presheaf::representable(a.clone(), x), Presheaf::representable(a.clone(), y)];
                assert!(product_comparison(&d, &ps).bijective);
            }
        }
        assert!(product_comparison(&d, &[]).bijective);
    }

    #[test]
    fn yoneda_restriction_over_terminal() {
        let a = arrow();
        let d = Copresheaf::new(a.clone(), vec![2, 1], vec![vec![0, 1], vec![0, 0], vec![0]]).unwrap();
        let p = yoneda_restriction(&PresheafFamily::from_copresheaf(&d)).unwrap();
        assert_eq!((p.size(0, 0), p.size(0, 1)), (2, 1));
        assert_eq!(p, d.to_profunctor());
    }

    #[test]
    fn lan_along_identity() {
        let m = square();
        let a = arrow();
        let d = FinFunctor::monotone(a.clone(), m.clone(), vec![1, 3]).unwrap();
        let w = pointwise_lan(&d, &FinFunctor::identity(a.clone())).unwrap();
        assert_eq!(w.l.obj_map(), d.obj_map());
        let comps = vertical_components(&companion(&FinFunctor::identity(a)).opcart.vcompose(&w.unit).unwrap());
        assert!(comps.iter().all(|&c| m.is_iso(c)));
    }

    #[test]
    fn lan_from_point_of_arrow() {
        let m = square();
        let one = Arc::new(FinCat::terminal());
        let a = arrow();
        let j = FinFunctor::point(a.clone(), 0);
        let d = FinFunctor::point(m.clone(), 2);
        let _ = one;
        let w = pointwise_lan(&d, &j).unwrap();
        assert_eq!(w.l.obj_map(), &[2, 2]);
    }

    #[test]
    fn lan_into_discrete_fails() {
        let m = Arc::new(FinCat::discrete(2));
        let two = Arc::new(FinCat::discrete(2));
        let one = Arc::new(FinCat::terminal());
        let d = FinFunctor::identity(two.clone());
        let j = FinFunctor::constant(two, one, 0);
        let _ = m;
        assert_eq!(pointwise_lan(&d, &j).unwrap_err(), KanError::NoColimit(0));
    }

    #[test]
    fn own_cocone_battery_passes_and_perturbation_fails() {
        let m = square();
        let a = arrow();
        let b = Arc::new(FinCat::chain(3));
        let j = FinFunctor::monotone(a.clone(), b.clone(), vec![0, 2]).unwrap();
        let d = FinFunctor::monotone(a.clone(), m.clone(), vec![0, 1]).unwrap();
        let w = pointwise_lan(&d, &j).unwrap();
        assert_eq!(w.l.obj_map(), &[0, 0, 1]);
        let own = battery_own_cocones(&w.unit, usize::MAX, usize::MAX).unwrap();
        let v = check_defines_lan_bounded(&w.unit, &own).unwrap();
        assert!(v.passed && !v.vacuous);
        // raise l at the middle object from 0 to 2: still a cell, no longer universal
        let l2 = FinFunctor::monotone(b.clone(), m.clone(), vec![0, 2, 3]).unwrap();
        let js = companion(&j);
        let eta2 = ProCell::from_fn(js.prof.clone(), Profunctor::hom(&m), d.clone(), l2.clone(), |a, bb, _| {
            m.hom_index(m.hom(d.obj(a), l2.obj(bb))[0])
        })
        .unwrap();
        let bat = battery_from_legs("vertical", &js.prof, &d, &[Profunctor::hom(&b)], usize::MAX, usize::MAX).unwrap();
        let v = check_defines_lan_bounded(&eta2, &bat).unwrap();
        assert!(!v.passed);
        assert!(check_defines_lan_bounded(&w.unit, &bat).unwrap().passed);
    }

    #[test]
    fn empty_battery_is_vacuous() {
        let m = square();
        let a = arrow();
        let d = FinFunctor::monotone(a.clone(), m.clone(), vec![0, 1]).unwrap();
        let w = pointwise_lan(&d, &FinFunctor::identity(a)).unwrap();
        let v = check_defines_lan_bounded(&w.unit, &Battery { id: "empty".into(), cells: vec![] }).unwrap();
        assert!(v.passed && v.vacuous);
    }

    #[test]
    fn full_and_faithful_routes_agree() {
        let a = arrow();
        let one = Arc::new(FinCat::terminal());
        let two = Arc::new(FinCat::discrete(2));
        assert_eq!(full_and_faithful_routes(&FinFunctor::identity(a.clone())), (true, true));
        assert_eq!(full_and_faithful_routes(&FinFunctor::constant(two, one, 0)), (false, false));
    }

    #[test]
    fn yoneda_on_terminal_and_arrow() {
        let one = Arc::new(FinCat::terminal());
        let j = Profunctor::from_fn(one.clone(), one.clone(), |_, _| 2, |_, _, x| x, |_, _, x| x).unwrap();
        let r = yoneda_axiom_instance_check(&j, 64, 64).unwrap();
        assert!(r.axiom_c_cartesian && r.axiom_e.passed && r.yoneda_full_and_faithful);
        assert_eq!(r.lemma_passing, r.lemma_cartesian);
        let a = arrow();
        let j = companion(&FinFunctor::identity(a.clone())).prof;
        let r = yoneda_axiom_instance_check(&j, 64, 64).unwrap();
        assert!(r.axiom_c_cartesian && r.axiom_e.passed && r.yoneda_full_and_faithful);
        assert!(r.lemma_passing >= 1);
        assert_eq!(r.lemma_passing, r.lemma_cartesian);
    }
}
