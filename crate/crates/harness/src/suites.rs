//! Seeded property suites. Every case is a short list of functors and
//! profunctors, so a failing case serializes as a `lemma` check and replays
//! through [`run_lemma`].

use std::sync::Arc;

use equipment::algebra::{
    lax_algebra_instance_check, pointwise_universal_property, rbc_colax_crosscheck, ProductChoice,
};
use equipment::fincat::enumerate_functors;
use equipment::fpmonad::{
    compositor_on_companions, iota_naturality_on_companion, iota_star_rbc, t_cell, t_functor, t_profunctor, TCat,
    Truncation,
};
use equipment::kanext::{enumerate_copresheaves, pointwise_lan, Presheaf};
use equipment::prof::{
    companion, companion_identities_hold, compose, compose_with, conjoint, conjoint_identities_hold, left_unitor,
    left_unitor_inv, right_unitor, right_unitor_inv, right_unitor_with, CoendMode,
};
use equipment::{FinCat, FinFunctor, Obj, ProCell, Profunctor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{lattices, library};
use crate::gen;
use crate::instance::{CheckSpec, InstanceBuilder};
use crate::report::{Check, Section};

/// Truncation for the lemmas about `T` itself on small posets.
const T_LEMMA_BOUND: usize = 2;
/// Attempts per counted case for suites that discard cases failing a
/// hypothesis.
const ATTEMPTS_PER_CASE: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Holds(String),
    Fails(String),
    /// A hypothesis of the lemma does not hold on the data.
    Vacuous(String),
}

/// The data of one instance of a lemma.
#[derive(Debug, Clone)]
pub struct LemmaCase {
    pub lemma: &'static str,
    pub functors: Vec<FinFunctor>,
    pub profunctors: Vec<Profunctor>,
    pub raw_coend: bool,
}

impl LemmaCase {
    fn new(lemma: &'static str, functors: Vec<FinFunctor>, profunctors: Vec<Profunctor>) -> Self {
        LemmaCase { lemma, functors, profunctors, raw_coend: false }
    }

    pub fn witness(&self, name: &str) -> serde_json::Value {
        let mut b = InstanceBuilder::new(name);
        let functors = self.functors.iter().map(|f| b.functor(f)).collect();
        let profunctors = self.profunctors.iter().map(|p| b.profunctor(p)).collect();
        b.check(CheckSpec::Lemma { lemma: self.lemma.to_string(), functors, profunctors, raw_coend: self.raw_coend });
        b.finish().to_value()
    }

    pub fn run(&self, bound: Truncation) -> Outcome {
        run_lemma(self.lemma, &self.functors, &self.profunctors, self.raw_coend, bound)
    }
}

pub const LEMMAS: &[&str] = &[
    "pasting",
    "companion_identities",
    "restriction_via_companions",
    "extension_via_companions",
    "horizontal_cartesian",
    "compositor",
    "iota_naturality",
    "t_preserves",
    "rbc_restrictions",
    "unit_laws",
];

fn verdict(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        Outcome::Holds(detail.into())
    } else {
        Outcome::Fails(detail.into())
    }
}

fn join(m: &FinCat, xs: &[Obj]) -> Option<Obj> {
    let ubs: Vec<Obj> = (0..m.objects()).filter(|&u| xs.iter().all(|&x| m.leq(x, u))).collect();
    ubs.iter().copied().find(|&u| ubs.iter().all(|&v| m.leq(u, v)))
}

/// For a cell `J ⇒ 1_M` along `f, k` into a poset: it exhibits `k` as a
/// left Kan extension iff `k(y)` is the join of `f(x)` over `J(x, y) ≠ ∅`.
pub fn thin_lan(cell: &ProCell) -> bool {
    let j = cell.src();
    let (f, k) = (cell.left_functor(), cell.right_functor());
    (0..j.cod().objects()).all(|y| {
        let xs: Vec<Obj> = (0..j.dom().objects()).filter(|&x| j.size(x, y) > 0).map(|x| f.obj(x)).collect();
        join(k.cod(), &xs) == Some(k.obj(y))
    })
}

fn arity(lemma: &str, fs: &[FinFunctor], ps: &[Profunctor], nf: usize, np: usize) -> Result<(), String> {
    if fs.len() == nf && ps.len() == np {
        Ok(())
    } else {
        Err(format!("{lemma} takes {nf} functors and {np} profunctors, got {} and {}", fs.len(), ps.len()))
    }
}

fn rbc(j: &Profunctor, bound: Truncation) -> Result<bool, String> {
    iota_star_rbc(j, bound).map(|r| r.passed()).map_err(|e| e.to_string())
}

/// Runs one lemma on explicit data. Errors mean the data does not fit the
/// lemma's shape.
pub fn run_lemma(lemma: &str, fs: &[FinFunctor], ps: &[Profunctor], raw: bool, bound: Truncation) -> Outcome {
    match lemma_inner(lemma, fs, ps, raw, bound) {
        Ok(o) => o,
        Err(e) => Outcome::Fails(format!("malformed case: {e}")),
    }
}

fn lemma_inner(
    lemma: &str,
    fs: &[FinFunctor],
    ps: &[Profunctor],
    raw: bool,
    bound: Truncation,
) -> Result<Outcome, String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    Ok(match lemma {
        // η: j_* ⇒ 1_M along (d, l) and ψ: h_* ⇒ 1_M along (l, k)
        "pasting" => {
            arity(lemma, fs, ps, 4, 0)?;
            let (j, d, h, k) = (&fs[0], &fs[1], &fs[2], &fs[3]);
            let eta = pointwise_lan(d, j).map_err(|e| err(&e))?;
            let m = d.cod();
            let psi = ProCell::from_fn(companion(h).prof, Profunctor::hom(m), eta.l.clone(), k.clone(), |_, _, _| 0)
                .map_err(|e| err(&e))?;
            let pasted = eta
                .unit
                .hcompose(&psi)
                .and_then(|c| c.vcompose(&right_unitor(&Profunctor::hom(m))))
                .map_err(|e| err(&e))?;
            let (e, a, b) = (thin_lan(&eta.unit), thin_lan(&psi), thin_lan(&pasted));
            verdict(e && a == b, format!("eta={e} psi={a} pasted={b}"))
        }
        "companion_identities" => {
            arity(lemma, fs, ps, 1, 0)?;
            let f = &fs[0];
            let (cs, cj) = (companion(f), conjoint(f));
            let restricted =
                Profunctor::hom(f.cod()).restrict(f, &FinFunctor::identity(f.cod().clone())).map_err(|e| err(&e))?.0;
            let checks = [
                companion_identities_hold(f),
                conjoint_identities_hold(f),
                cs.cart.is_cartesian(),
                cs.opcart.is_opcartesian(),
                cj.cart.is_cartesian(),
                cj.opcart.is_opcartesian(),
                restricted == cs.prof,
            ];
            verdict(checks.iter().all(|&b| b), format!("{checks:?}"))
        }
        // K: C ⇸ D, f: A → C, g: B → D; (f_* ⊙ K) ⊙ g^* ⇒ K along (f, g)
        "restriction_via_companions" => {
            arity(lemma, fs, ps, 2, 1)?;
            let (f, g, k) = (&fs[0], &fs[1], &ps[0]);
            let (cs, cj) = (companion(f), conjoint(g));
            let top =
                cs.cart.hcompose(&ProCell::identity(k)).and_then(|c| c.hcompose(&cj.cart)).map_err(|e| err(&e))?;
            let one_k = compose(&Profunctor::hom(k.dom()), k).map_err(|e| err(&e))?.prof;
            let cell =
                top.vcompose(&right_unitor(&one_k)).and_then(|c| c.vcompose(&left_unitor(k))).map_err(|e| err(&e))?;
            verdict(cell.is_cartesian(), "")
        }
        // J: A ⇸ B, f: A → C, g: B → D; J ⇒ (f^* ⊙ J) ⊙ g_* along (f, g)
        "extension_via_companions" => {
            arity(lemma, fs, ps, 2, 1)?;
            let (f, g, j) = (&fs[0], &fs[1], &ps[0]);
            let one_j = compose(&Profunctor::hom(j.dom()), j).map_err(|e| err(&e))?.prof;
            let bottom = conjoint(f)
                .opcart
                .hcompose(&ProCell::identity(j))
                .and_then(|c| c.hcompose(&companion(g).opcart))
                .map_err(|e| err(&e))?;
            let cell = left_unitor_inv(j)
                .vcompose(&right_unitor_inv(&one_j))
                .and_then(|c| c.vcompose(&bottom))
                .map_err(|e| err(&e))?;
            verdict(cell.is_opcartesian(), "")
        }
        // K: A ⇸ B restricted along f on the left, L: B ⇸ C along h on the right
        "horizontal_cartesian" => {
            arity(lemma, fs, ps, 2, 2)?;
            let (f, h, k, l) = (&fs[0], &fs[1], &ps[0], &ps[1]);
            let id_b = FinFunctor::identity(k.cod().clone());
            let (_, phi) = k.restrict(f, &id_b).map_err(|e| err(&e))?;
            let (_, psi) = l.restrict(&id_b, h).map_err(|e| err(&e))?;
            let cell = phi.hcompose(&psi).map_err(|e| err(&e))?;
            verdict(phi.is_cartesian() && psi.is_cartesian() && cell.is_cartesian(), "")
        }
        "compositor" => {
            arity(lemma, fs, ps, 2, 0)?;
            let c = compositor_on_companions(&fs[0], &fs[1], T_LEMMA_BOUND).map_err(|e| err(&e))?;
            verdict(c.iso, "")
        }
        "iota_naturality" => {
            arity(lemma, fs, ps, 1, 0)?;
            verdict(iota_naturality_on_companion(&fs[0], T_LEMMA_BOUND).map_err(|e| err(&e))?, "")
        }
        "t_preserves" => {
            arity(lemma, fs, ps, 1, 0)?;
            let f = &fs[0];
            let ta = TCat::new(f.dom(), T_LEMMA_BOUND).map_err(|e| err(&e))?;
            let tc = TCat::new(f.cod(), T_LEMMA_BOUND).map_err(|e| err(&e))?;
            let tf = t_functor(f, &ta, &tc).map_err(|e| err(&e))?;
            let (ida, idc) = (FinFunctor::identity(ta.cat().clone()), FinFunctor::identity(tc.cat().clone()));
            let t1a = t_profunctor(&Profunctor::hom(f.dom()), &ta, &ta).map_err(|e| err(&e))?;
            let t1c = t_profunctor(&Profunctor::hom(f.cod()), &tc, &tc).map_err(|e| err(&e))?;
            let (cs, cj) = (companion(f), conjoint(f));
            let tcs = t_profunctor(&cs.prof, &ta, &tc).map_err(|e| err(&e))?;
            let tcj = t_profunctor(&cj.prof, &tc, &ta).map_err(|e| err(&e))?;
            let cells = [
                t_cell(&cs.cart, &tcs, &t1c, &tf, &idc).map(|c| c.is_cartesian()),
                t_cell(&cs.opcart, &t1a, &tcs, &ida, &tf).map(|c| c.is_opcartesian()),
                t_cell(&cj.cart, &tcj, &t1c, &idc, &tf).map(|c| c.is_cartesian()),
                t_cell(&cj.opcart, &t1a, &tcj, &tf, &ida).map(|c| c.is_opcartesian()),
            ];
            let out = cells.into_iter().collect::<Result<Vec<bool>, _>>().map_err(|e| err(&e))?;
            verdict(out.iter().all(|&b| b), format!("{out:?}"))
        }
        "rbc_restrictions" => {
            arity(lemma, fs, ps, 1, 1)?;
            let (g, k) = (&fs[0], &ps[0]);
            let gs = conjoint(g).prof;
            if !rbc(k, bound)? {
                return Ok(Outcome::Vacuous("RBC(K) fails".into()));
            }
            if !rbc(&gs, bound)? {
                return Ok(Outcome::Vacuous("RBC(g^*) fails".into()));
            }
            let kg = compose(k, &gs).map_err(|e| err(&e))?.prof;
            verdict(rbc(&kg, bound)?, "")
        }
        "unit_laws" => {
            arity(lemma, fs, ps, 0, 1)?;
            let j = &ps[0];
            let mode = if raw { CoendMode::Raw } else { CoendMode::Quotient };
            let left = compose_with(&Profunctor::hom(j.dom()), j, mode).map_err(|e| err(&e))?.prof.total_size()
                == j.total_size()
                && left_unitor(j).is_iso();
            let right = right_unitor_with(j, mode).map(|c| c.is_iso()).unwrap_or(false);
            verdict(left && right, format!("left={left} right={right}"))
        }
        "rbc_companion" => {
            arity(lemma, fs, ps, 1, 0)?;
            verdict(rbc(&companion(&fs[0]).prof, bound)?, "")
        }
        // g: Q → P with its left adjoint f: P → Q
        "rbc_galois" => {
            arity(lemma, fs, ps, 2, 0)?;
            let (g, f) = (&fs[0], &fs[1]);
            let (p, q) = (g.cod(), g.dom());
            let adjoint = f.dom() == p
                && f.cod() == q
                && (0..p.objects()).all(|x| (0..q.objects()).all(|y| q.leq(f.obj(x), y) == p.leq(x, g.obj(y))));
            if !adjoint {
                return Ok(Outcome::Vacuous("not an adjoint pair".into()));
            }
            verdict(rbc(&conjoint(g).prof, bound)?, "")
        }
        other => return Err(format!("unknown lemma `{other}`")),
    })
}

/// Nonempty library categories, the lattices and a random poset, all with
/// at most `max_n` objects.
fn category_pool(rng: &mut ChaCha8Rng, max_n: usize) -> Vec<Arc<FinCat>> {
    let mut pool: Vec<Arc<FinCat>> = library()
        .into_iter()
        .chain(lattices())
        .map(|(_, c)| c)
        .filter(|c| c.objects() > 0 && c.objects() <= max_n)
        .collect();
    pool.push(gen::poset(rng, max_n));
    pool
}

fn random_functor(rng: &mut ChaCha8Rng, pool: &[Arc<FinCat>]) -> FinFunctor {
    loop {
        let (a, b) = (gen::pick(rng, pool).clone(), gen::pick(rng, pool).clone());
        if let Some(f) = gen::functor(rng, &a, &b) {
            return f;
        }
    }
}

fn functor_from(rng: &mut ChaCha8Rng, a: &Arc<FinCat>, pool: &[Arc<FinCat>]) -> FinFunctor {
    loop {
        let b = gen::pick(rng, pool).clone();
        if let Some(f) = gen::functor(rng, a, &b) {
            return f;
        }
    }
}

fn functor_into(rng: &mut ChaCha8Rng, pool: &[Arc<FinCat>], b: &Arc<FinCat>) -> FinFunctor {
    loop {
        let a = gen::pick(rng, pool).clone();
        if let Some(f) = gen::functor(rng, &a, b) {
            return f;
        }
    }
}

/// A pasting case: `k` is the extension of `l` along `h` or a random
/// functor above it.
fn pasting_case(rng: &mut ChaCha8Rng) -> LemmaCase {
    let posets = gen::poset_pool(rng, 4);
    let ms: Vec<Arc<FinCat>> = lattices().into_iter().map(|(_, c)| c).collect();
    let m = gen::pick(rng, &ms).clone();
    let a = gen::pick(rng, &posets).clone();
    let j = functor_from(rng, &a, &posets);
    let d = gen::functor(rng, &a, &m).expect("lattices are nonempty");
    let h = functor_from(rng, j.cod(), &posets);
    let l = pointwise_lan(&d, &j).expect("lattices are complete").l;
    let least = pointwise_lan(&l, &h).expect("lattices are complete").l;
    let k = if rng.gen_bool(0.5) {
        least
    } else {
        let above: Vec<FinFunctor> = enumerate_functors(h.cod(), &m, 1 << 12)
            .into_iter()
            .filter(|k| (0..k.dom().objects()).all(|c| m.leq(least.obj(c), k.obj(c))))
            .collect();
        gen::pick(rng, &above).clone()
    };
    LemmaCase::new("pasting", vec![j, d, h, k], vec![])
}

fn generate(lemma: &'static str, rng: &mut ChaCha8Rng) -> LemmaCase {
    let pool = category_pool(rng, 4);
    let small = category_pool(rng, 3);
    match lemma {
        "pasting" => pasting_case(rng),
        "companion_identities" | "rbc_companion" => LemmaCase::new(lemma, vec![random_functor(rng, &pool)], vec![]),
        "iota_naturality" | "t_preserves" => LemmaCase::new(lemma, vec![random_functor(rng, &small)], vec![]),
        "compositor" => {
            let f = random_functor(rng, &small);
            let h = functor_from(rng, f.cod(), &small);
            LemmaCase::new(lemma, vec![f, h], vec![])
        }
        "restriction_via_companions" | "extension_via_companions" => {
            let posets = gen::poset_pool(rng, 4);
            let (c, d) = (gen::pick(rng, &posets).clone(), gen::pick(rng, &posets).clone());
            let k = gen::profunctor(rng, &c, &d);
            let (f, g) = if lemma == "restriction_via_companions" {
                (functor_into(rng, &posets, &c), functor_into(rng, &posets, &d))
            } else {
                (functor_from(rng, &c, &posets), functor_from(rng, &d, &posets))
            };
            LemmaCase::new(lemma, vec![f, g], vec![k])
        }
        "horizontal_cartesian" => {
            let posets = gen::poset_pool(rng, 4);
            let (a, b, c) =
                (gen::pick(rng, &posets).clone(), gen::pick(rng, &posets).clone(), gen::pick(rng, &posets).clone());
            let (k, l) = (gen::profunctor(rng, &a, &b), gen::profunctor(rng, &b, &c));
            let (f, h) = (functor_into(rng, &posets, &a), functor_into(rng, &posets, &c));
            LemmaCase::new(lemma, vec![f, h], vec![k, l])
        }
        "rbc_restrictions" => {
            let posets = gen::poset_pool(rng, 4);
            let b = gen::pick(rng, &posets).clone();
            let k = match rng.gen_range(0..3) {
                0 => companion(&functor_into(rng, &posets, &b)).prof,
                1 => gen::up_set_indicator(rng, &b).to_profunctor(),
                _ => {
                    let a = gen::pick(rng, &posets).clone();
                    gen::profunctor(rng, &a, &b)
                }
            };
            LemmaCase::new(lemma, vec![functor_into(rng, &posets, &b)], vec![k])
        }
        "unit_laws" => {
            let k = if rng.gen_bool(0.3) {
                companion(&random_functor(rng, &pool)).prof
            } else {
                let posets = gen::poset_pool(rng, 4);
                let (a, b) = (gen::pick(rng, &posets).clone(), gen::pick(rng, &posets).clone());
                gen::profunctor(rng, &a, &b)
            };
            LemmaCase::new(lemma, vec![], vec![k])
        }
        "rbc_galois" => galois_case(rng),
        other => unreachable!("no generator for {other}"),
    }
}

/// A monotone `g: Q → P` together with its left adjoint, when it has one.
fn galois_case(rng: &mut ChaCha8Rng) -> LemmaCase {
    loop {
        let posets = gen::poset_pool(rng, 4);
        let (p, q) = (gen::pick(rng, &posets).clone(), gen::pick(rng, &posets).clone());
        let Some(g) = gen::functor(rng, &q, &p) else { continue };
        let least = |x: Obj| -> Option<Obj> {
            let ys: Vec<Obj> = (0..q.objects()).filter(|&y| p.leq(x, g.obj(y))).collect();
            ys.iter().copied().find(|&y| ys.iter().all(|&z| q.leq(y, z)))
        };
        let Some(obj) = (0..p.objects()).map(least).collect::<Option<Vec<Obj>>>() else { continue };
        let f = FinFunctor::monotone(p.clone(), q.clone(), obj).expect("left adjoints are monotone");
        return LemmaCase::new("rbc_galois", vec![g, f], vec![]);
    }
}

fn lemma_seed(seed: u64, lemma: &str) -> u64 {
    // FNV-1a over the name, so each suite has its own stream
    let h = lemma.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3));
    seed ^ h
}

/// `cases` counted instances of one lemma. Cases where a hypothesis fails
/// are redrawn, up to a fixed number of attempts.
pub fn run_suite(lemma: &'static str, seed: u64, cases: usize, bound: Truncation, raw_coend: bool) -> Section {
    let name = if raw_coend { format!("lemma/{lemma}/raw_coend") } else { format!("lemma/{lemma}") };
    let mut s = Section::new(name);
    let mut rng = ChaCha8Rng::seed_from_u64(lemma_seed(seed, lemma));
    let (mut counted, mut attempts, mut discarded) = (0, 0, 0);
    while counted < cases && attempts < cases * ATTEMPTS_PER_CASE {
        attempts += 1;
        let mut case = generate(lemma, &mut rng);
        case.raw_coend = raw_coend;
        let id = format!("{lemma}/{seed}/{counted}");
        match case.run(bound) {
            Outcome::Vacuous(_) => discarded += 1,
            Outcome::Holds(d) => {
                counted += 1;
                s.push(Check::new(id, true).detail(d));
            }
            Outcome::Fails(d) => {
                counted += 1;
                let w = case.witness(&id);
                s.push(Check::new(id, false).detail(d).witness_on_fail(|| w));
            }
        }
    }
    if discarded > 0 {
        s = s.note(format!("{discarded} drawn cases discarded for a failed hypothesis"));
    }
    if counted < cases {
        s = s.note(format!("only {counted} of {cases} cases met the hypotheses"));
    }
    s.finish()
}

pub fn run_property_suites(seed: u64, cases: usize, bound: Truncation) -> Vec<Section> {
    LEMMAS.iter().map(|lemma| run_suite(lemma, seed, cases, bound, false)).collect()
}

/// Companions always satisfy RBC, and so do right adjoints between posets.
pub fn run_rbc_suites(seed: u64, companions: usize, galois: usize, bound: Truncation) -> Vec<Section> {
    vec![
        run_suite("rbc_companion", seed, companions, bound, false),
        run_suite("rbc_galois", seed, galois, bound, false),
    ]
}

/// Every monotone map between library lattices.
pub fn run_colax_crosscheck(bound: Truncation) -> Section {
    let mut s = Section::new("colax_rbc");
    let lats = lattices();
    for (an, a) in &lats {
        let pa = ProductChoice::find(a).expect("lattice");
        for (cn, c) in &lats {
            let pc = ProductChoice::find(c).expect("lattice");
            for (i, f) in enumerate_functors(a, c, 1 << 20).into_iter().enumerate() {
                let id = format!("{an}->{cn}/{i}");
                let check = match rbc_colax_crosscheck(&f, &pa, &pc, bound) {
                    Ok(x) => Check::new(&id, x.agree()).detail(format!(
                        "structure_iso={} rbc={}",
                        x.structure_iso,
                        x.rbc.passed()
                    )),
                    Err(e) => Check::new(&id, false).detail(e.to_string()),
                };
                s.push(check.witness_on_fail(|| colax_witness(&id, &f, &pa, &pc)));
            }
        }
    }
    s.finish()
}

pub fn colax_witness(name: &str, f: &FinFunctor, pa: &ProductChoice, pc: &ProductChoice) -> serde_json::Value {
    let mut b = InstanceBuilder::new(name);
    let functor = b.functor(f);
    let dom = b.product_choice(pa);
    let cod = b.product_choice(pc);
    b.check(CheckSpec::Colax { functor, dom, cod });
    b.finish().to_value()
}

/// Presheaves with fibers of size at most 1 on every library category, and
/// at most 2 on those with at most two objects.
pub fn presheaf_corpus() -> Vec<(String, Arc<FinCat>, Vec<Presheaf>)> {
    library()
        .into_iter()
        .map(|(name, cat)| {
            let max = if cat.objects() <= 2 { 2 } else { 1 };
            let op = Arc::new(cat.opposite());
            let ps = enumerate_copresheaves(&op, max, 1 << 20)
                .into_iter()
                .map(|d| Presheaf::new(cat.clone(), d.sizes().to_vec(), d.maps().to_vec()).expect("same data"))
                .collect();
            (name.to_string(), cat, ps)
        })
        .collect()
}

/// Digits of a code, most significant first.
fn digits(mut code: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (i, &r) in radices.iter().enumerate().rev() {
        out[i] = code % r;
        code /= r;
    }
    out
}

fn pointwise_product_holds(cat: &FinCat, ps: &[Presheaf]) -> bool {
    let w = Presheaf::pointwise_product(&Arc::new(cat.clone()), ps);
    let sizes_ok = (0..cat.objects()).all(|x| w.size(x) == ps.iter().map(|p| p.size(x)).product::<usize>());
    sizes_ok
        && (0..cat.morphisms()).all(|m| {
            let (x, y) = (cat.src(m), cat.tgt(m));
            let rx: Vec<usize> = ps.iter().map(|p| p.size(x)).collect();
            let ry: Vec<usize> = ps.iter().map(|p| p.size(y)).collect();
            (0..w.size(y)).all(|code| {
                let image: Vec<usize> = digits(code, &ry).iter().zip(ps).map(|(&xi, p)| p.act(m, xi)).collect();
                digits(w.act(m, code), &rx) == image
            })
        })
}

/// All tuples of length at most 3 from each corpus family, then the lax
/// algebra comparisons on representables.
pub fn run_appendix() -> Section {
    let mut s = Section::new("appendix")
        .note("presheaf corpus: fibers ≤ 1 on every library category, ≤ 2 on those with ≤ 2 objects");
    for (name, cat, ps) in presheaf_corpus() {
        let idx: Vec<usize> = (0..ps.len()).collect();
        let mut bad = None;
        let mut tuples = 0;
        for n in 0..=3 {
            for t in equipment::fpmonad::product(&vec![idx.clone(); n]) {
                tuples += 1;
                let tuple: Vec<Presheaf> = t.iter().map(|&i| ps[i].clone()).collect();
                if bad.is_none() && !pointwise_product_holds(&cat, &tuple) {
                    bad = Some(t);
                }
            }
        }
        let detail = match &bad {
            Some(t) => format!("{tuples} tuples; fails at {t:?}"),
            None => format!("{tuples} tuples from {} presheaves", ps.len()),
        };
        s.push(Check::new(format!("pointwise_sizes/{name}"), bad.is_none()).detail(detail));
        let reps: Vec<Presheaf> = (0..cat.objects()).map(|x| Presheaf::representable(cat.clone(), x)).collect();
        let pairs: Vec<Vec<Presheaf>> = equipment::fpmonad::product(&vec![reps.clone(); 2]);
        let universal = pairs.iter().all(|pair| pointwise_universal_property(&cat, pair, 1 << 16));
        s.push(
            Check::new(format!("pointwise_universal/{name}"), universal)
                .detail("representable test objects, pairs of representables"),
        );
        let r = lax_algebra_instance_check(&cat, &reps);
        s.push(Check::new(format!("lax_algebra/{name}"), r.holds()).detail(format!(
            "pointwise={} associator={} unit={} cases={}",
            r.pointwise, r.associator, r.unit, r.cases
        )));
    }
    s.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(lemma: &'static str) -> Section {
        run_suite(lemma, 7, 12, Truncation::default(), false)
    }

    #[test]
    fn thin_lan_oracle() {
        let sq = crate::corpus::boolean_square();
        let id = FinFunctor::identity(sq.clone());
        let eta = pointwise_lan(&id, &id).unwrap();
        assert!(thin_lan(&eta.unit));
        let top = FinFunctor::constant(sq.clone(), sq.clone(), 3);
        let cell = ProCell::from_fn(Profunctor::hom(&sq), Profunctor::hom(&sq), id.clone(), top, |_, _, _| 0).unwrap();
        assert!(!thin_lan(&cell));
    }

    #[test]
    fn every_lemma_passes_on_a_few_cases() {
        for lemma in LEMMAS.iter().chain(&["rbc_companion", "rbc_galois"]) {
            let s = small(lemma);
            assert_eq!(s.checks.len(), 12, "{lemma}");
            assert!(s.passed(), "{lemma}: {:?}", s.failures().next());
        }
    }

    #[test]
    fn raw_coend_breaks_the_unit_laws() {
        let s = run_suite("unit_laws", 7, 40, Truncation::default(), true);
        assert!(!s.passed());
        let w = s.failures().next().unwrap().witness.clone().unwrap();
        assert!(w.to_string().contains("\"raw_coend\":true"));
    }

    #[test]
    fn zero_cases_are_vacuous() {
        let s = run_suite("compositor", 0, 0, Truncation::default(), false);
        assert!(s.vacuous && s.checks.is_empty());
    }

    #[test]
    fn malformed_cases_fail() {
        assert!(matches!(run_lemma("compositor", &[], &[], false, Truncation::default()), Outcome::Fails(_)));
        assert!(matches!(run_lemma("nope", &[], &[], false, Truncation::default()), Outcome::Fails(_)));
    }

    #[test]
    fn digits_are_most_significant_first() {
        assert_eq!(digits(5, &[2, 3]), vec![1, 2]);
        assert_eq!(digits(0, &[]), Vec::<usize>::new());
    }
}
