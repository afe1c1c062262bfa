//! Three independent verdicts on a copresheaf `d: A → Set`: cosiftedness of
//! its category of elements, the right Beck-Chevalley condition for
//! `D: 1 ⇸ A`, and preservation of finite products by `d ⋆ −`.

use equipment::fpmonad::{iota_star_rbc_at, FpError, RbcReport};
use equipment::kanext::{product_comparison, tensor, Copresheaf, Presheaf};
use equipment::sifted::{category_of_elements, is_cosifted};

use crate::corpus::CorpusEntry;
use crate::instance::{CheckSpec, InstanceBuilder, InstanceDoc};
use crate::report::{Check, Section};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm1Verdicts {
    pub cosifted: bool,
    /// At sequence lengths 0 and 2.
    pub rbc: bool,
    /// At every length up to the truncation.
    pub rbc_upto: bool,
    pub products: bool,
    pub detail: String,
}

impl Thm1Verdicts {
    pub fn agree(&self) -> bool {
        self.cosifted == self.rbc && self.rbc == self.products && self.rbc == self.rbc_upto
    }

    pub fn triple(&self) -> (bool, bool, bool) {
        (self.cosifted, self.rbc, self.products)
    }
}

fn first_rbc_failure(r: &RbcReport) -> Option<String> {
    r.failures().next().map(|c| format!("k={} component at ys={:?}: {} → {}", c.ys.len(), c.ys, c.source, c.target))
}

pub fn verdicts(d: &Copresheaf, bound: usize) -> Result<Thm1Verdicts, FpError> {
    let a = d.cat();
    let cosifted = is_cosifted(&category_of_elements(d).cat);
    let dp = d.to_profunctor();
    let rbc_report = iota_star_rbc_at(&dp, &[0, 2])?;
    let upto: Vec<usize> = (0..=bound).collect();
    let rbc_upto = iota_star_rbc_at(&dp, &upto)?.passed();
    let mut failed_product = None;
    if !product_comparison(d, &[]).bijective {
        failed_product = Some("empty product".to_string());
    }
    'pairs: for x in 0..a.objects() {
        for y in 0..a.objects() {
            if failed_product.is_some() {
                break 'pairs;
            }
            let ps = [Presheaf::representable(a.clone(), x), Presheaf::representable(a.clone(), y)];
            let c = product_comparison(d, &ps);
            if !c.bijective {
                failed_product = Some(format!("pair ({x},{y}): {} → {}", c.domain, c.codomain));
            }
        }
    }
    let mut detail = Vec::new();
    if let Some(w) = first_rbc_failure(&rbc_report) {
        detail.push(w);
    }
    if let Some(w) = &failed_product {
        detail.push(format!("comparison fails at {w}"));
    }
    Ok(Thm1Verdicts {
        cosifted,
        rbc: rbc_report.passed(),
        rbc_upto,
        products: failed_product.is_none(),
        detail: detail.join("; "),
    })
}

/// A single-instance document that reruns `check` on `d`.
pub fn witness(name: &str, d: &Copresheaf, check: impl FnOnce(String) -> CheckSpec) -> InstanceDoc {
    let mut b = InstanceBuilder::new(name);
    let dn = b.copresheaf(d);
    b.check(check(dn));
    b.finish()
}

pub fn thm1_check(name: &str, d: &Copresheaf, bound: usize) -> Check {
    match verdicts(d, bound) {
        Ok(v) => {
            let (c, r, p) = v.triple();
            let mut detail = format!("cosifted={c} rbc={r} products={p}");
            if v.rbc_upto != v.rbc {
                detail.push_str(&format!(" rbc(k≤{bound})={}", v.rbc_upto));
            }
            if !v.detail.is_empty() {
                detail.push_str(&format!(" ({})", v.detail));
            }
            Check::new(name, v.agree())
                .detail(detail)
                .witness_on_fail(|| witness(name, d, |copresheaf| CheckSpec::Thm1 { copresheaf }).to_value())
        }
        Err(e) => Check::new(name, false)
            .detail(e.to_string())
            .witness_on_fail(|| witness(name, d, |copresheaf| CheckSpec::Thm1 { copresheaf }).to_value()),
    }
}

pub fn run_theorem1_crosscheck(corpus: &[CorpusEntry], bound: usize) -> Section {
    let mut s = Section::new("thm1")
        .note("verdicts: cosifted El(d); RBC of D at k ∈ {0,2}; product comparison at () and all representable pairs");
    for e in corpus {
        s.push(thm1_check(&e.name, &e.d, bound));
    }
    s.finish()
}

/// `∫^x A(x, y) × dx → dy`, `[α, q] ↦ d(α)q`, is well defined and bijective.
pub fn co_yoneda_holds(d: &Copresheaf, y: usize) -> bool {
    let a = d.cat();
    let p = Presheaf::representable(a.clone(), y);
    let t = tensor(&p, d);
    let mut image = vec![usize::MAX; t.size()];
    for x in 0..a.objects() {
        for (xi, &alpha) in a.hom(x, y).iter().enumerate() {
            for q in 0..d.size(x) {
                let k = t.class_of(x, xi, q);
                let v = d.act(alpha, q);
                if image[k] != usize::MAX && image[k] != v {
                    return false;
                }
                image[k] = v;
            }
        }
    }
    let mut hit = vec![false; d.size(y)];
    t.size() == d.size(y) && image.iter().all(|&v| v < hit.len() && !std::mem::replace(&mut hit[v], true))
}

pub fn co_yoneda_check(name: &str, d: &Copresheaf) -> Check {
    let bad: Vec<usize> = (0..d.cat().objects()).filter(|&y| !co_yoneda_holds(d, y)).collect();
    Check::new(name, bad.is_empty())
        .detail(if bad.is_empty() { String::new() } else { format!("fails at objects {bad:?}") })
        .witness_on_fail(|| witness(name, d, |copresheaf| CheckSpec::CoYoneda { copresheaf }).to_value())
}

pub fn run_co_yoneda(corpus: &[CorpusEntry]) -> Section {
    let mut s = Section::new("co_yoneda");
    for e in corpus {
        s.push(co_yoneda_check(&e.name, &e.d));
    }
    s.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::boolean_square;
    use equipment::FinCat;
    use std::sync::Arc;

    #[test]
    fn worked_examples() {
        let v = verdicts(&Copresheaf::constant(boolean_square(), 1), 3).unwrap();
        assert_eq!(v.triple(), (true, true, true));
        let v = verdicts(&Copresheaf::constant(Arc::new(FinCat::discrete(2)), 1), 3).unwrap();
        assert_eq!(v.triple(), (false, false, false));
        assert!(v.detail.contains("k=0 component at ys=[]: 2 → 1"), "{}", v.detail);
        let arrow = Arc::new(FinCat::chain(2));
        let maps = (0..arrow.morphisms()).map(|m| vec![0; usize::from(arrow.src(m) == 1)]).collect();
        let d = Copresheaf::new(arrow, vec![0, 1], maps).unwrap();
        assert_eq!(category_of_elements(&d).cat.objects(), 1);
        assert_eq!(verdicts(&d, 3).unwrap().triple(), (true, true, true));
    }

    #[test]
    fn co_yoneda_on_representables() {
        let sq = boolean_square();
        for x in 0..4 {
            let d = Copresheaf::representable(sq.clone(), x);
            assert!((0..4).all(|y| co_yoneda_holds(&d, y)));
        }
    }
}
