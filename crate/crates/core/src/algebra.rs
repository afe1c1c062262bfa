//! Chosen finite products as algebra structure, the colax structure cell of
//! a functor between such categories, and pointwise products of presheaves.

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{FinCat, FinFunctor, Mor, Obj};
use crate::fpmonad::{
    iota_star_rbc, product as cartesian, Category, FpError, RbcReport, SeqCat, SeqMor, TCat, Truncation,
};
use crate::kanext::{decode, encode, presheaf_maps, Presheaf};
use crate::prof::conjoint;

/// What is missing when a category lacks finite products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Missing {
    Terminal,
    Pair(Obj, Obj),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("no finite products: missing {0:?}")]
    NoProducts(Missing),
    #[error("proposed {0:?} is not universal")]
    NotUniversal(Missing),
    #[error("functor does not match the product choices")]
    Boundary,
    #[error(transparent)]
    Fp(#[from] FpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinaryProduct {
    pub apex: Obj,
    pub p1: Mor,
    pub p2: Mor,
}

/// A terminal object and a binary product for every ordered pair.
#[derive(Debug, Clone)]
pub struct ProductChoice {
    cat: Arc<FinCat>,
    terminal: Obj,
    pairs: Vec<BinaryProduct>,
}

fn is_terminal(m: &FinCat, t: Obj) -> bool {
    (0..m.objects()).all(|x| m.hom(x, t).len() == 1)
}

fn is_product(m: &FinCat, x: Obj, y: Obj, p: &BinaryProduct) -> bool {
    if m.src(p.p1) != p.apex || m.tgt(p.p1) != x || m.src(p.p2) != p.apex || m.tgt(p.p2) != y {
        return false;
    }
    (0..m.objects()).all(|c| {
        m.hom(c, x).iter().all(|&f| {
            m.hom(c, y).iter().all(|&g| {
                let n =
                    m.hom(c, p.apex).iter().filter(|&&h| m.compose(p.p1, h) == f && m.compose(p.p2, h) == g).count();
                n == 1
            })
        })
    })
}

impl ProductChoice {
    /// Lowest terminal object; for each pair the lowest apex, then the
    /// lowest projections, that are universal.
    pub fn find(m: &Arc<FinCat>) -> Result<Self, AlgebraError> {
        let n = m.objects();
        let terminal = (0..n).find(|&t| is_terminal(m, t)).ok_or(AlgebraError::NoProducts(Missing::Terminal))?;
        let mut pairs = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let found = (0..n).find_map(|apex| {
                    m.hom(apex, x).iter().find_map(|&p1| {
                        m.hom(apex, y).iter().map(|&p2| BinaryProduct { apex, p1, p2 }).find(|p| is_product(m, x, y, p))
                    })
                });
                pairs.push(found.ok_or(AlgebraError::NoProducts(Missing::Pair(x, y)))?);
            }
        }
        Ok(ProductChoice { cat: m.clone(), terminal, pairs })
    }

    /// An explicit choice, `pairs[x * n + y]` for `x × y`, checked universal.
    pub fn new(m: &Arc<FinCat>, terminal: Obj, pairs: Vec<BinaryProduct>) -> Result<Self, AlgebraError> {
        let n = m.objects();
        if terminal >= n || !is_terminal(m, terminal) {
            return Err(AlgebraError::NotUniversal(Missing::Terminal));
        }
        if pairs.len() != n * n {
            return Err(AlgebraError::NotUniversal(Missing::Pair(0, 0)));
        }
        for x in 0..n {
            for y in 0..n {
                let p = &pairs[x * n + y];
                let typed = p.apex < n && p.p1 < m.morphisms() && p.p2 < m.morphisms();
                if !typed || !is_product(m, x, y, p) {
                    return Err(AlgebraError::NotUniversal(Missing::Pair(x, y)));
                }
            }
        }
        Ok(ProductChoice { cat: m.clone(), terminal, pairs })
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn terminal(&self) -> Obj {
        self.terminal
    }

    pub fn pair(&self, x: Obj, y: Obj) -> &BinaryProduct {
        &self.pairs[x * self.cat.objects() + y]
    }

    /// The unique map `x → 1`.
    pub fn bang(&self, x: Obj) -> Mor {
        self.cat.hom(x, self.terminal)[0]
    }

    /// `((x_0 × x_1) × x_2) × …`, with `() ↦ 1` and `(x) ↦ x`.
    pub fn product(&self, xs: &[Obj]) -> Obj {
        match xs {
            [] => self.terminal,
            [x] => *x,
            [init @ .., last] => self.pair(self.product(init), *last).apex,
        }
    }

    /// Projection `product(xs) → xs[i]`.
    pub fn projection(&self, xs: &[Obj], i: usize) -> Mor {
        match xs {
            [x] => self.cat.id(*x),
            [init @ .., last] => {
                let p = self.pair(self.product(init), *last);
                if i == init.len() {
                    p.p2
                } else {
                    self.cat.compose(self.projection(init, i), p.p1)
                }
            }
            [] => unreachable!("no projections out of the empty product"),
        }
    }

    /// The unique `c → product(xs)` whose `i`-th projection is `legs[i]`.
    pub fn tuple(&self, xs: &[Obj], c: Obj, legs: &[Mor]) -> Mor {
        self.cat
            .hom(c, self.product(xs))
            .iter()
            .copied()
            .find(|&h| (0..xs.len()).all(|i| self.cat.compose(self.projection(xs, i), h) == legs[i]))
            .expect("products are universal")
    }

    /// The action `m: TM → M` on a morphism `(s, u): xs → ys`.
    pub fn act(&self, xs: &[Obj], ys: &[Obj], m: &SeqMor<Mor>) -> Mor {
        let legs: Vec<Mor> = m.s.iter().zip(&m.u).map(|(&j, &u)| self.cat.compose(u, self.projection(xs, j))).collect();
        self.tuple(ys, self.product(xs), &legs)
    }

    /// `m: TM → M` on a materialized truncation of `TM`.
    pub fn action_functor(&self, tm: &TCat) -> Result<FinFunctor, AlgebraError> {
        if *tm.base != *self.cat {
            return Err(AlgebraError::Boundary);
        }
        let t = tm.cat();
        let obj: Vec<Obj> = (0..t.objects()).map(|x| self.product(tm.seq(x))).collect();
        let mor =
            (0..t.morphisms()).map(|m| self.act(tm.seq(t.src(m)), tm.seq(t.tgt(m)), tm.mat.morphism(m))).collect();
        FinFunctor::new(t.clone(), self.cat.clone(), obj, mor).map_err(|e| AlgebraError::Fp(FpError::Functor(e)))
    }
}

/// The comparison maps `f(x_0 × … × x_{n-1}) → f x_0 × … × f x_{n-1}` for
/// all sequences up to the bound.
#[derive(Debug, Clone)]
pub struct StructureCell {
    pub components: Vec<(Vec<Obj>, Mor)>,
    pub iso: bool,
    pub natural: bool,
    pub projections_commute: bool,
}

pub fn colax_structure_cell(
    f: &FinFunctor,
    pa: &ProductChoice,
    pc: &ProductChoice,
    bound: usize,
) -> Result<StructureCell, AlgebraError> {
    if **f.dom() != *pa.cat || **f.cod() != *pc.cat {
        return Err(AlgebraError::Boundary);
    }
    let (a, c) = (&pa.cat, &pc.cat);
    let seqs = SeqCat::new(&**a, bound).all_objects();
    let image = |xs: &[Obj]| -> Vec<Obj> { xs.iter().map(|&x| f.obj(x)).collect() };
    let comp = |xs: &[Obj]| -> Mor {
        let legs: Vec<Mor> = (0..xs.len()).map(|i| f.mor(pa.projection(xs, i))).collect();
        pc.tuple(&image(xs), f.obj(pa.product(xs)), &legs)
    };
    let components: Vec<(Vec<Obj>, Mor)> = seqs.iter().map(|xs| (xs.clone(), comp(xs))).collect();
    let iso = components.iter().all(|(_, m)| c.is_iso(*m));
    let projections_commute = components.iter().all(|(xs, m)| {
        let fxs = image(xs);
        (0..xs.len()).all(|i| c.compose(pc.projection(&fxs, i), *m) == f.mor(pa.projection(xs, i)))
    });
    let t = SeqCat::new(&**a, bound);
    // parallel maps agree in a thin codomain, and a finite category with
    // binary products is thin since |C(z, y)|^n = |C(z, y^n)| is bounded
    let mut natural = true;
    if !c.is_thin() {
        for (xs, cx) in &components {
            for (ys, cy) in &components {
                for m in t.hom_set(xs, ys) {
                    let fm = SeqMor { s: m.s.clone(), u: m.u.iter().map(|&u| f.mor(u)).collect() };
                    let lhs = c.compose(*cy, f.mor(pa.act(xs, ys, &m)));
                    let rhs = c.compose(pc.act(&image(xs), &image(ys), &fm), *cx);
                    natural &= lhs == rhs;
                }
            }
        }
    }
    Ok(StructureCell { components, iso, natural, projections_commute })
}

/// Unit and counit of `ι_M ⊣ m` at a truncation, with the triangle
/// identities evaluated.
#[derive(Debug, Clone)]
pub struct AdjunctionData {
    /// `x → m(ι x)`.
    pub unit: Vec<Mor>,
    /// `θ_xs: ι(m xs) → xs` in `TM`.
    pub counit: Vec<(Vec<Obj>, SeqMor<Mor>)>,
    pub counit_natural: bool,
    pub triangle_iota: bool,
    pub triangle_m: bool,
}

impl AdjunctionData {
    pub fn holds(&self) -> bool {
        self.counit_natural && self.triangle_iota && self.triangle_m
    }
}

pub fn adjunction_data(pm: &ProductChoice, bound: usize) -> AdjunctionData {
    let m = &pm.cat;
    let t = SeqCat::new(&**m, bound);
    let unit: Vec<Mor> = (0..m.objects()).map(|x| m.id(pm.product(&[x]))).collect();
    let theta = |xs: &[Obj]| SeqMor { s: vec![0; xs.len()], u: (0..xs.len()).map(|i| pm.projection(xs, i)).collect() };
    let seqs = t.all_objects();
    let counit: Vec<(Vec<Obj>, SeqMor<Mor>)> = seqs.iter().map(|xs| (xs.clone(), theta(xs))).collect();
    let iota = |u: Mor| SeqMor { s: vec![0], u: vec![u] };
    // θ_{ιx} ∘ ι(unit_x) = id_{ιx}
    let triangle_iota = (0..m.objects()).all(|x| t.compose_mors(&theta(&[x]), &iota(unit[x])) == t.identity(&vec![x]));
    // m(θ_xs) ∘ unit_{m xs} = id_{m xs}
    let triangle_m = seqs.iter().all(|xs| {
        let mx = pm.product(xs);
        let m_theta = pm.act(&[mx], xs, &theta(xs));
        m.compose(m_theta, unit[mx]) == m.id(mx)
    });
    let mut counit_natural = true;
    for xs in &seqs {
        for ys in &seqs {
            for f in t.hom_set(xs, ys) {
                let lhs = t.compose_mors(&f, &theta(xs));
                let rhs = t.compose_mors(&theta(ys), &iota(pm.act(xs, ys, &f)));
                counit_natural &= lhs == rhs;
            }
        }
    }
    AdjunctionData { unit, counit, counit_natural, triangle_iota, triangle_m }
}

/// Invertibility of the structure cell of `f`, next to the right
/// Beck-Chevalley verdict for the conjoint `f^*`.
#[derive(Debug, Clone)]
pub struct ColaxCrosscheck {
    pub structure_iso: bool,
    pub rbc: RbcReport,
}

impl ColaxCrosscheck {
    pub fn agree(&self) -> bool {
        self.structure_iso == self.rbc.passed()
    }
}

pub fn rbc_colax_crosscheck(
    f: &FinFunctor,
    pa: &ProductChoice,
    pc: &ProductChoice,
    bound: Truncation,
) -> Result<ColaxCrosscheck, AlgebraError> {
    let cell = colax_structure_cell(f, pa, pc, bound.bound())?;
    let rbc = iota_star_rbc(&conjoint(f).prof, bound)?;
    Ok(ColaxCrosscheck { structure_iso: cell.iso, rbc })
}

/// `x ↦ Π_j p_j(x)` with componentwise actions.
pub fn presheaf_pointwise_product(cat: &Arc<FinCat>, ps: &[Presheaf]) -> Presheaf {
    Presheaf::pointwise_product(cat, ps)
}

/// `Π_j p_j → p_i` at every object.
fn projection_components(cat: &FinCat, ps: &[Presheaf], i: usize) -> Vec<Vec<usize>> {
    (0..cat.objects())
        .map(|x| {
            let radices: Vec<usize> = ps.iter().map(|p| p.size(x)).collect();
            let total: usize = radices.iter().product();
            (0..total).map(|code| decode(code, radices.iter().copied())[i]).collect()
        })
        .collect()
}

/// For every representable `q`, composing with the projections is a
/// bijection `maps(q, Π p) → Π_j maps(q, p_j)`.
pub fn pointwise_universal_property(cat: &Arc<FinCat>, ps: &[Presheaf], cap: usize) -> bool {
    let w = presheaf_pointwise_product(cat, ps);
    let projections: Vec<Vec<Vec<usize>>> = (0..ps.len()).map(|i| projection_components(cat, ps, i)).collect();
    (0..cat.objects()).all(|x| {
        let q = Presheaf::representable(cat.clone(), x);
        let into_w = presheaf_maps(&q, &w, cap);
        let factors: Vec<Vec<Vec<Vec<usize>>>> = ps.iter().map(|p| presheaf_maps(&q, p, cap)).collect();
        let expected: usize = factors.iter().map(Vec::len).product();
        let mut seen = HashSet::new();
        let all_valid = into_w.iter().all(|phi| {
            let tuple: Vec<Vec<Vec<usize>>> = projections
                .iter()
                .map(|pr| phi.iter().enumerate().map(|(y, comp)| comp.iter().map(|&v| pr[y][v]).collect()).collect())
                .collect();
            let valid = tuple.iter().zip(&factors).all(|(t, fs)| fs.contains(t));
            valid && seen.insert(tuple)
        });
        all_valid && into_w.len() == expected && seen.len() == expected
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaxAlgebraReport {
    pub pointwise: bool,
    pub associator: bool,
    pub unit: bool,
    pub cases: usize,
}

impl LaxAlgebraReport {
    pub fn holds(&self) -> bool {
        self.pointwise && self.associator && self.unit
    }
}

fn actions_agree(cat: &FinCat, w: &Presheaf, ps: &[Presheaf]) -> bool {
    (0..cat.morphisms()).all(|m| {
        let (x, y) = (cat.src(m), cat.tgt(m));
        (0..w.size(y)).all(|code| {
            let digits = decode(code, ps.iter().map(|p| p.size(y)));
            let expect = encode(ps.iter().zip(digits).map(|(p, d)| (p.act(m, d), p.size(x))));
            w.act(m, code) == expect
        })
    })
}

/// Checks the pointwise product structure on sequences drawn from the
/// battery: pointwise sizes and actions, the reassociation
/// `w(w(p̄_0), …, w(p̄_{n-1})) → w(p̄_0 ⋯ p̄_{n-1})` as a natural bijection,
/// and the unit comparisons at the empty and singleton sequences. Sequences
/// have length at most 2 at both levels.
pub fn lax_algebra_instance_check(cat: &Arc<FinCat>, battery: &[Presheaf]) -> LaxAlgebraReport {
    let idx: Vec<usize> = (0..battery.len()).collect();
    let seqs: Vec<Vec<usize>> = (0..=2).flat_map(|k| cartesian(&vec![idx.clone(); k])).collect();
    let pick = |s: &[usize]| -> Vec<Presheaf> { s.iter().map(|&i| battery[i].clone()).collect() };
    let mut cases = 0;
    let mut pointwise = true;
    for s in &seqs {
        cases += 1;
        let ps = pick(s);
        let w = presheaf_pointwise_product(cat, &ps);
        pointwise &= (0..cat.objects()).all(|x| w.size(x) == ps.iter().map(|p| p.size(x)).product::<usize>());
        pointwise &= actions_agree(cat, &w, &ps);
    }
    let seq_idx: Vec<usize> = (0..seqs.len()).collect();
    let mut associator = true;
    for outer in (0..=2).flat_map(|k| cartesian(&vec![seq_idx.clone(); k])) {
        cases += 1;
        let blocks: Vec<Vec<Presheaf>> = outer.iter().map(|&b| pick(&seqs[b])).collect();
        let inner: Vec<Presheaf> = blocks.iter().map(|b| presheaf_pointwise_product(cat, b)).collect();
        let nested = presheaf_pointwise_product(cat, &inner);
        let flat_ps: Vec<Presheaf> = blocks.iter().flatten().cloned().collect();
        let flat = presheaf_pointwise_product(cat, &flat_ps);
        let comparison: Vec<Vec<usize>> = (0..cat.objects())
            .map(|x| {
                (0..nested.size(x))
                    .map(|code| {
                        let outer_digits = decode(code, inner.iter().map(|p| p.size(x)));
                        let digits: Vec<usize> = blocks
                            .iter()
                            .zip(outer_digits)
                            .flat_map(|(b, d)| decode(d, b.iter().map(|p| p.size(x))))
                            .collect();
                        encode(digits.into_iter().zip(flat_ps.iter().map(|p| p.size(x))))
                    })
                    .collect()
            })
            .collect();
        let bijective = (0..cat.objects()).all(|x| {
            let mut hit = vec![false; flat.size(x)];
            comparison[x].len() == flat.size(x) && comparison[x].iter().all(|&v| !std::mem::replace(&mut hit[v], true))
        });
        let natural = (0..cat.morphisms()).all(|m| {
            let (x, y) = (cat.src(m), cat.tgt(m));
            (0..nested.size(y)).all(|code| comparison[x][nested.act(m, code)] == flat.act(m, comparison[y][code]))
        });
        associator &= bijective && natural;
    }
    let empty = presheaf_pointwise_product(cat, &[]);
    let mut unit = (0..cat.objects()).all(|x| empty.size(x) == 1);
    for p in battery {
        cases += 1;
        let single = presheaf_pointwise_product(cat, std::slice::from_ref(p));
        unit &= single.sizes() == p.sizes() && single.maps() == p.maps();
    }
    LaxAlgebraReport { pointwise, associator, unit, cases }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Arc<FinCat> {
        Arc::new(FinCat::preorder_closure(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap())
    }

    #[test]
    fn find_products() {
        let sq = square();
        let pc = ProductChoice::find(&sq).unwrap();
        assert_eq!(pc.terminal(), 3);
        let meet = |x: Obj, y: Obj| {
            (0..4)
                .filter(|&z| sq.leq(z, x) && sq.leq(z, y))
                .max_by_key(|&z| (0..4).filter(|&w| sq.leq(w, z)).count())
                .unwrap()
        };
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(pc.pair(x, y).apex, meet(x, y));
            }
        }
        let d = Arc::new(FinCat::discrete(2));
        assert_eq!(ProductChoice::find(&d).unwrap_err(), AlgebraError::NoProducts(Missing::Terminal));
        let c = Arc::new(FinCat::chain(2));
        let pc = ProductChoice::find(&c).unwrap();
        assert_eq!(pc.terminal(), 1);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(pc.pair(x, y).apex, x.min(y));
            }
        }
    }

    #[test]
    fn explicit_choice_is_verified() {
        let c = Arc::new(FinCat::chain(2));
        let found = ProductChoice::find(&c).unwrap();
        assert!(ProductChoice::new(&c, 1, found.pairs.clone()).is_ok());
        assert_eq!(
            ProductChoice::new(&c, 0, found.pairs.clone()).unwrap_err(),
            AlgebraError::NotUniversal(Missing::Terminal)
        );
        let mut bad = found.pairs.clone();
        // 1 × 1 with apex 0 is not universal
        bad[3] = BinaryProduct { apex: 0, p1: 1, p2: 1 };
        assert_eq!(ProductChoice::new(&c, 1, bad).unwrap_err(), AlgebraError::NotUniversal(Missing::Pair(1, 1)));
    }

    #[test]
    fn nary_products() {
        let sq = square();
        let pc = ProductChoice::find(&sq).unwrap();
        assert_eq!(pc.product(&[]), 3);
        assert_eq!(pc.product(&[1]), 1);
        assert_eq!(pc.product(&[1, 2, 3]), 0);
        assert_eq!(pc.product(&[3, 1, 1]), 1);
    }

    #[test]
    fn structure_cells() {
        let sq = square();
        let ps = ProductChoice::find(&sq).unwrap();
        let id = colax_structure_cell(&FinFunctor::identity(sq.clone()), &ps, &ps, 3).unwrap();
        assert!(id.iso && id.natural && id.projections_commute);
        let chain = Arc::new(FinCat::chain(2));
        let pcn = ProductChoice::find(&chain).unwrap();
        // ⊥ ↦ 0, everything else ↦ 1: f(a ∧ b) = 0 but f(a) ∧ f(b) = 1
        let bad = FinFunctor::monotone(sq.clone(), chain.clone(), vec![0, 1, 1, 1]).unwrap();
        let cell = colax_structure_cell(&bad, &ps, &pcn, 3).unwrap();
        assert!(!cell.iso && cell.natural);
        let proj = FinFunctor::monotone(sq.clone(), chain.clone(), vec![0, 1, 0, 1]).unwrap();
        let cell = colax_structure_cell(&proj, &ps, &pcn, 3).unwrap();
        assert!(cell.iso && cell.natural && cell.projections_commute);
    }

    #[test]
    fn adjunctions() {
        for m in [Arc::new(FinCat::terminal()), Arc::new(FinCat::chain(2)), square()] {
            let pm = ProductChoice::find(&m).unwrap();
            let adj = adjunction_data(&pm, 2);
            assert!(adj.holds(), "{adj:?}");
            assert!(adj.unit.iter().all(|&u| m.is_identity(u)));
        }
    }

    #[test]
    fn colax_crosscheck() {
        let sq = square();
        let ps = ProductChoice::find(&sq).unwrap();
        let chain = Arc::new(FinCat::chain(2));
        let pcn = ProductChoice::find(&chain).unwrap();
        let id = rbc_colax_crosscheck(&FinFunctor::identity(sq.clone()), &ps, &ps, Truncation::default()).unwrap();
        assert!(id.structure_iso && id.agree());
        let proj = FinFunctor::monotone(sq.clone(), chain.clone(), vec![0, 1, 0, 1]).unwrap();
        let r = rbc_colax_crosscheck(&proj, &ps, &pcn, Truncation::default()).unwrap();
        assert!(r.structure_iso && r.agree());
        let bad = FinFunctor::monotone(sq.clone(), chain.clone(), vec![0, 1, 1, 1]).unwrap();
        let r = rbc_colax_crosscheck(&bad, &ps, &pcn, Truncation::default()).unwrap();
        assert!(!r.structure_iso && r.agree());
    }

    #[test]
    fn pointwise_products() {
        let a = Arc::new(FinCat::chain(2));
        let p = Presheaf::representable(a.clone(), 0);
        let q = Presheaf::new(a.clone(), vec![2, 3], vec![vec![0, 1], vec![1, 0, 1], vec![0, 1, 2]]).unwrap();
        let w = presheaf_pointwise_product(&a, &[]);
        assert_eq!(w.sizes(), &[1, 1]);
        assert_eq!(presheaf_pointwise_product(&a, std::slice::from_ref(&q)).sizes(), q.sizes());
        let w = presheaf_pointwise_product(&a, &[p.clone(), q.clone()]);
        assert_eq!(w.sizes(), &[p.size(0) * q.size(0), p.size(1) * q.size(1)]);
        assert!(pointwise_universal_property(&a, &[p.clone(), q.clone()], 10_000));
        assert!(pointwise_universal_property(&a, &[], 10_000));
    }

    #[test]
    fn lax_algebra_on_representables() {
        let a = Arc::new(FinCat::chain(2));
        let battery: Vec<Presheaf> = (0..2).map(|x| Presheaf::representable(a.clone(), x)).collect();
        let r = lax_algebra_instance_check(&a, &battery);
        assert!(r.holds(), "{r:?}");
        assert!(r.cases > 0);
    }

    #[test]
    fn action_functor_on_square() {
        let sq = square();
        let pm = ProductChoice::find(&sq).unwrap();
        let tm = TCat::new(&sq, 2).unwrap();
        let m = pm.action_functor(&tm).unwrap();
        let back = tm.iota().then(&m).unwrap();
        assert_eq!(back.obj_map(), FinFunctor::identity(sq.clone()).obj_map());
        // the empty sequence goes to the top, a pair to its meet
        assert_eq!(m.obj(tm.index_of(&[]).unwrap()), 3);
        assert_eq!(m.obj(tm.index_of(&[1, 2]).unwrap()), 0);
        let other = TCat::new(&Arc::new(FinCat::chain(2)), 2).unwrap();
        assert!(pm.action_functor(&other).is_err());
    }
}
