//! Lifting left Kan extensions to algebras of the finite-product monad, on
//! finite lattices.
//!
//! For `j: A → B`, `d: A → M` with `η` the extension of `d` along `j_*` and
//! unit `l`, the implications relate invertibility of the structure cell
//! `l̄`, the right Beck-Chevalley conditions for `d^*` and `j^*`, full
//! faithfulness of `j`, and whether `1_m ∘ Tη` exhibits `m ∘ Tl` as a left
//! Kan extension (the "Kan side").

use std::sync::Arc;

use equipment::algebra::{colax_structure_cell, AlgebraError, ProductChoice};
use equipment::fincat::FunctorError;
use equipment::fpmonad::{iota_star_rbc, product, t_cell, t_functor, t_profunctor, FpError, TCat, Truncation};
use equipment::kanext::{check_defines_lan_bounded, pointwise_lan, Battery, BatteryCell, KanError, LanVerdict};
use equipment::prof::{companion, compose, conjoint, CellError};
use equipment::{FinCat, FinFunctor, Obj, ProCell, Profunctor};
use thiserror::Error;

use crate::corpus::{boolean_square, m3, n5};
use crate::instance::{CheckSpec, InstanceBuilder, InstanceDoc};
use crate::report::{Check, Section};

/// The Kan side is materialized at sequences of at most this length.
pub const KAN_BATTERY_BOUND: usize = 2;

#[derive(Debug, Error)]
pub enum Thm23Error {
    #[error("{0} is not a lattice: no join of {1:?}")]
    NotALattice(&'static str, Vec<Obj>),
    #[error(transparent)]
    Kan(#[from] KanError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Fp(#[from] FpError),
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
}

#[derive(Debug, Clone)]
pub struct Thm23Input {
    pub name: String,
    pub j: FinFunctor,
    pub d: FinFunctor,
    /// Only needed for the statement that assumes `d̄` invertible.
    pub pa: Option<ProductChoice>,
    pub pb: ProductChoice,
    pub pm: ProductChoice,
}

impl Thm23Input {
    pub fn witness(&self) -> InstanceDoc {
        let mut b = InstanceBuilder::new(&self.name);
        let j = b.functor(&self.j);
        let d = b.functor(&self.d);
        let a = self.pa.as_ref().map(|p| b.product_choice(p));
        let pb = b.product_choice(&self.pb);
        let pm = b.product_choice(&self.pm);
        b.check(CheckSpec::Thm23 { j, d, a, b: pb, m: pm });
        b.finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm23Facts {
    pub l: Vec<Obj>,
    pub lbar_iso: bool,
    pub dbar_iso: Option<bool>,
    pub rbc_d: bool,
    pub rbc_j: bool,
    pub ff_j: bool,
    /// The Kan side from the lattice formula at the full truncation.
    pub kan: bool,
    /// The same formula at the battery truncation.
    pub kan_short: bool,
    pub battery: LanVerdict,
}

impl Thm23Facts {
    fn summary(&self) -> String {
        let dbar = self.dbar_iso.map_or("n/a".to_string(), |b| b.to_string());
        format!(
            "l={:?} lbar_iso={} dbar_iso={} rbc_d={} rbc_j={} ff_j={} kan={}",
            self.l, self.lbar_iso, dbar, self.rbc_d, self.rbc_j, self.ff_j, self.kan
        )
    }
}

/// Least upper bound in a poset.
fn join(m: &FinCat, xs: &[Obj]) -> Option<Obj> {
    let ubs: Vec<Obj> = (0..m.objects()).filter(|&u| xs.iter().all(|&x| m.leq(x, u))).collect();
    ubs.iter().copied().find(|&u| ubs.iter().all(|&v| m.leq(u, v)))
}

/// For every `ys` with `|ys| ≤ bound`: `Π l(y_i)` is the join of
/// `Π d(x̄)` over the `x̄` with `|x̄| ≤ bound` and some `Tj x̄ → ys`.
/// In a thin `M` this is exactly the Kan side at that truncation.
pub fn kan_side_formula(
    j: &FinFunctor,
    d: &FinFunctor,
    l: &FinFunctor,
    pm: &ProductChoice,
    bound: usize,
) -> Result<bool, Thm23Error> {
    let (a, b, m) = (j.dom(), j.cod(), pm.cat());
    let seqs = |n: usize| -> Vec<Vec<Obj>> {
        let objs: Vec<Obj> = (0..n).collect();
        (0..=bound).flat_map(|k| product(&vec![objs.clone(); k])).collect()
    };
    let xs_all = seqs(a.objects());
    for ys in seqs(b.objects()) {
        let reaching: Vec<Obj> = xs_all
            .iter()
            .filter(|xs| ys.iter().all(|&y| xs.iter().any(|&x| b.leq(j.obj(x), y))))
            .map(|xs| pm.product(&xs.iter().map(|&x| d.obj(x)).collect::<Vec<_>>()))
            .collect();
        let k = join(m, &reaching).ok_or_else(|| Thm23Error::NotALattice("M", reaching.clone()))?;
        let target = pm.product(&ys.iter().map(|&y| l.obj(y)).collect::<Vec<_>>());
        if k != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `1_m ∘ Tη` against a battery of three test cells `T(j_*) ⊙ 1_{TB} ⇒ 1_M`:
/// along the join of the cocone it must dominate, along `m ∘ Tl` itself and
/// along the constant at the top.
pub fn kan_side_battery(
    eta: &ProCell,
    j: &FinFunctor,
    d: &FinFunctor,
    pm: &ProductChoice,
    bound: usize,
) -> Result<LanVerdict, Thm23Error> {
    let (a, b, m) = (j.dom().clone(), j.cod().clone(), pm.cat().clone());
    let l = eta.right_functor();
    let (ta, tb, tm) = (TCat::new(&a, bound)?, TCat::new(&b, bound)?, TCat::new(&m, bound)?);
    let tjs = t_profunctor(&companion(j).prof, &ta, &tb)?;
    let t1m = t_profunctor(&Profunctor::hom(&m), &tm, &tm)?;
    let (td, tl) = (t_functor(d, &ta, &tm)?, t_functor(l, &tb, &tm)?);
    let act = pm.action_functor(&tm)?;
    let teta = t_cell(eta, &tjs, &t1m, &td, &tl)?.vcompose(&ProCell::unit(&act))?;
    let left = teta.left_functor().clone();
    let (tb_cat, ta_cat) = (tb.cat().clone(), ta.cat().clone());
    let hom_tb = Profunctor::hom(&tb_cat);
    let comp = compose(&tjs.prof, &hom_tb)?;
    let dominated: Vec<Obj> = (0..tb_cat.objects())
        .map(|y| {
            let reaching: Vec<Obj> =
                (0..ta_cat.objects()).filter(|&x| tjs.prof.size(x, y) > 0).map(|x| left.obj(x)).collect();
            join(&m, &reaching).ok_or(Thm23Error::NotALattice("M", reaching))
        })
        .collect::<Result<_, _>>()?;
    let candidates = vec![
        FinFunctor::monotone(tb_cat.clone(), m.clone(), dominated)?,
        teta.right_functor().clone(),
        FinFunctor::constant(tb_cat.clone(), m.clone(), pm.terminal()),
    ];
    let hom_m = Profunctor::hom(&m);
    let mut cells = Vec::new();
    for k in candidates {
        let phi = ProCell::from_composite(&comp, hom_m.clone(), left.clone(), k.clone(), |_, _, _, _, _| 0)?;
        cells.push(BatteryCell { h: hom_tb.clone(), k, phi });
    }
    let battery = Battery { id: format!("kan-candidates(L={bound})"), cells };
    Ok(check_defines_lan_bounded(&teta, &battery)?)
}

pub fn facts(input: &Thm23Input, bound: Truncation) -> Result<Thm23Facts, Thm23Error> {
    let (j, d, pm) = (&input.j, &input.d, &input.pm);
    let eta = pointwise_lan(d, j)?;
    let l = &eta.l;
    let lbar_iso = colax_structure_cell(l, &input.pb, pm, bound.bound())?.iso;
    let dbar_iso = match &input.pa {
        Some(pa) => Some(colax_structure_cell(d, pa, pm, bound.bound())?.iso),
        None => None,
    };
    let rbc_d = iota_star_rbc(&conjoint(d).prof, bound)?.passed();
    let rbc_j = iota_star_rbc(&conjoint(j).prof, bound)?.passed();
    let short = bound.bound().min(KAN_BATTERY_BOUND);
    Ok(Thm23Facts {
        l: l.obj_map().to_vec(),
        lbar_iso,
        dbar_iso,
        rbc_d,
        rbc_j,
        ff_j: j.is_full_and_faithful(),
        kan: kan_side_formula(j, d, l, pm, bound.bound())?,
        kan_short: kan_side_formula(j, d, l, pm, short)?,
        battery: kan_side_battery(&eta.unit, j, d, pm, short)?,
    })
}

/// Every implication whose hypotheses hold on the instance.
pub fn run_thm23_check(input: &Thm23Input, bound: Truncation) -> Vec<Check> {
    let id = |s: &str| format!("{}/{s}", input.name);
    let f = match facts(input, bound) {
        Ok(f) => f,
        Err(e) => {
            return vec![Check::new(id("facts"), false)
                .detail(e.to_string())
                .witness_on_fail(|| input.witness().to_value())]
        }
    };
    let summary = format!("{} (Kan side against {})", f.summary(), f.battery.battery_id);
    let witness = || input.witness().to_value();
    let mut out = Vec::new();
    // the Kan side enters through the battery verdict, so passes that use it
    // are only battery-relative
    let kan = f.battery.passed;
    out.push(
        Check::new(id("kan_oracle"), f.battery.passed == f.kan_short)
            .detail(format!("battery {} passed={} formula={}", f.battery.battery_id, f.battery.passed, f.kan_short))
            .witness_on_fail(witness),
    );
    if bound.bound() > KAN_BATTERY_BOUND {
        out.push(
            Check::new(id("kan_truncation"), f.kan == f.kan_short)
                .detail(format!("formula at L={KAN_BATTERY_BOUND}: {}, at L={}: {}", f.kan_short, bound.bound(), f.kan))
                .witness_on_fail(witness),
        );
    }
    out.push(
        Check::new(id("thm2_forward"), !(f.rbc_d && kan) || f.lbar_iso)
            .battery_relative()
            .detail(summary.clone())
            .witness_on_fail(witness),
    );
    if f.ff_j && f.rbc_j {
        out.push(
            Check::new(id("thm2_converse"), !f.lbar_iso || (f.rbc_d && kan))
                .battery_relative()
                .detail(summary.clone())
                .witness_on_fail(witness),
        );
    } else {
        let why = if f.ff_j { "RBC(j^*) fails" } else { "j is not full and faithful" };
        out.push(Check::skipped(id("thm2_converse"), format!("missing hypothesis: {why}")));
    }
    match f.dbar_iso {
        Some(true) => out.push(
            Check::new(id("thm3"), f.lbar_iso == kan)
                .battery_relative()
                .detail(summary.clone())
                .witness_on_fail(witness),
        ),
        Some(false) => out.push(Check::skipped(id("thm3"), "missing hypothesis: dbar is not invertible")),
        None => out.push(Check::skipped(id("thm3"), "missing hypothesis: no product choice on A")),
    }
    if let Some(dbar) = f.dbar_iso {
        out.push(
            Check::new(id("rbc_vs_structure_cell"), dbar == f.rbc_d)
                .detail(format!("dbar_iso={dbar} rbc_d={}", f.rbc_d))
                .witness_on_fail(witness),
        );
    }
    out
}

fn mono(a: &Arc<FinCat>, b: &Arc<FinCat>, obj: &[Obj]) -> FinFunctor {
    FinFunctor::monotone(a.clone(), b.clone(), obj.to_vec()).expect("curated map is monotone")
}

/// Curated instances over the lattice library, plus a discrete domain.
pub fn curated() -> Vec<Thm23Input> {
    let pt = Arc::new(FinCat::terminal());
    let c2 = Arc::new(FinCat::chain(2));
    let c3 = Arc::new(FinCat::chain(3));
    let disc3 = Arc::new(FinCat::discrete(3));
    let (sq, m3, n5) = (boolean_square(), m3(), n5());
    let id = |n: usize| -> Vec<Obj> { (0..n).collect() };
    #[rustfmt::skip]
    // name, A, B, M, objects of j, objects of d
    type Row<'a> = (&'a str, &'a Arc<FinCat>, &'a Arc<FinCat>, &'a Arc<FinCat>, Vec<Obj>, Vec<Obj>);
    let table: Vec<Row> = vec![
        ("square_identity", &sq, &sq, &sq, id(4), id(4)),
        ("square_to_chain_join_like", &sq, &sq, &c2, id(4), vec![0, 1, 1, 1]),
        ("square_to_chain_projection", &sq, &sq, &c2, id(4), vec![0, 1, 0, 1]),
        ("chain_ends_into_square", &c2, &sq, &c2, vec![0, 3], vec![0, 1]),
        ("chain_side_into_square", &c2, &sq, &c2, vec![1, 3], vec![0, 1]),
        ("chain_low_into_square_not_top", &c2, &sq, &sq, vec![0, 1], vec![0, 1]),
        ("chain_low_into_square", &c2, &sq, &sq, vec![0, 1], vec![1, 3]),
        ("square_collapse", &sq, &c2, &sq, vec![0, 1, 1, 1], id(4)),
        ("square_projection", &sq, &c2, &sq, vec![0, 1, 0, 1], id(4)),
        ("m3_identity", &m3, &m3, &m3, id(5), id(5)),
        ("m3_atoms_to_top", &m3, &m3, &c2, id(5), vec![0, 1, 1, 1, 1]),
        ("m3_top_indicator", &m3, &m3, &c2, id(5), vec![0, 0, 0, 0, 1]),
        ("m3_atom_filter", &m3, &m3, &c2, id(5), vec![0, 1, 0, 0, 1]),
        ("n5_identity", &n5, &n5, &n5, id(5), id(5)),
        ("n5_filter", &n5, &n5, &c2, id(5), vec![0, 0, 1, 0, 1]),
        ("n5_non_filter", &n5, &n5, &c2, id(5), vec![0, 1, 1, 1, 1]),
        ("chain3_into_n5_long", &c3, &n5, &c2, vec![0, 1, 2], vec![0, 0, 1]),
        ("chain3_into_n5_short", &c3, &n5, &c2, vec![0, 3, 4], vec![0, 0, 1]),
        ("chain_into_m3", &c2, &m3, &c3, vec![1, 4], vec![0, 2]),
        ("square_onto_m3_not_ff", &sq, &m3, &sq, vec![0, 1, 1, 4], id(4)),
        ("square_into_m3_bad_d", &sq, &m3, &c2, vec![0, 1, 2, 4], vec![0, 1, 1, 1]),
        ("square_into_m3", &sq, &m3, &c2, vec![0, 1, 2, 4], vec![0, 0, 0, 1]),
        ("n5_collapse", &n5, &c2, &n5, vec![0, 0, 1, 0, 1], id(5)),
        ("point_at_bottom", &pt, &sq, &sq, vec![0], vec![3]),
        ("point_at_atom", &pt, &sq, &sq, vec![1], vec![3]),
        ("chain_into_chain3_not_top", &c2, &c3, &n5, vec![0, 2], vec![1, 2]),
        ("discrete_into_square_m3", &disc3, &sq, &m3, vec![1, 2, 2], vec![1, 2, 3]),
        ("m3_into_square", &m3, &sq, &m3, vec![0, 1, 2, 2, 3], id(5)),
    ];
    table
        .into_iter()
        .map(|(name, a, b, m, j, d)| Thm23Input {
            name: name.to_string(),
            j: mono(a, b, &j),
            d: mono(a, m, &d),
            pa: ProductChoice::find(a).ok(),
            pb: ProductChoice::find(b).expect("lattice"),
            pm: ProductChoice::find(m).expect("lattice"),
        })
        .collect()
}

pub fn run_curated(bound: Truncation) -> Section {
    let mut s = Section::new("thm23").note(format!(
        "Kan side checked against a battery at L={KAN_BATTERY_BOUND}; passes using it are battery-relative"
    ));
    for input in curated() {
        for c in run_thm23_check(&input, bound) {
            s.push(c);
        }
    }
    s.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(name: &str) -> Thm23Input {
        curated().into_iter().find(|i| i.name == name).unwrap()
    }

    #[test]
    fn join_in_posets() {
        let sq = boolean_square();
        assert_eq!(join(&sq, &[1, 2]), Some(3));
        assert_eq!(join(&sq, &[]), Some(0));
        assert_eq!(join(&FinCat::discrete(2), &[0, 1]), None);
    }

    #[test]
    fn forward_direction_on_a_distributive_target() {
        let f = facts(&find("chain_ends_into_square"), Truncation::default()).unwrap();
        assert!(f.ff_j && f.lbar_iso && f.rbc_d && f.kan && f.battery.passed);
        assert_eq!(f.l, vec![0, 0, 0, 1]);
    }

    #[test]
    fn join_like_map_is_consistent() {
        let f = facts(&find("square_to_chain_join_like"), Truncation::default()).unwrap();
        assert!(!f.lbar_iso && !f.rbc_d && f.dbar_iso == Some(false));
        assert!(run_thm23_check(&find("square_to_chain_join_like"), Truncation::default())
            .iter()
            .all(|c| c.verdict != crate::report::Verdict::Fail));
    }

    #[test]
    fn kan_side_can_fail() {
        // l(1) ∧ l(2) = 1 in M3 while every x̄ reaching (1, 2) has meet 0
        let f = facts(&find("m3_into_square"), Truncation::default()).unwrap();
        assert!(!f.kan && !f.kan_short && !f.battery.passed);
        assert!(!f.lbar_iso && f.dbar_iso == Some(true));
        let f = facts(&find("discrete_into_square_m3"), Truncation::default()).unwrap();
        assert!(!f.kan && f.dbar_iso.is_none());
    }

    #[test]
    fn converse_needs_full_faithfulness() {
        let checks = run_thm23_check(&find("square_collapse"), Truncation::default());
        let c = checks.iter().find(|c| c.id.ends_with("thm2_converse")).unwrap();
        assert_eq!(c.verdict, crate::report::Verdict::Skipped);
        assert!(c.detail.contains("missing hypothesis"));
    }

    #[test]
    fn curated_set_has_no_failures() {
        let s = run_curated(Truncation::default());
        let fails: Vec<_> = s.failures().map(|c| format!("{} {}", c.id, c.detail)).collect();
        assert!(fails.is_empty(), "{fails:#?}");
        assert!(s.checks.len() > 100);
    }
}
