//! Assembling reports: checks declared in an instance file, and the fixed
//! runs behind each subcommand.

use std::time::Instant;

use equipment::algebra::rbc_colax_crosscheck;
use equipment::fpmonad::{iota_star_rbc, Truncation};
use equipment::sifted::{category_of_elements, is_cosifted};

use crate::corpus::{generate_corpus, CorpusBounds};
use crate::instance::{CheckSpec, Instance};
use crate::report::{Check, Parameters, Report, Section};
use crate::suites::{self, Outcome};
use crate::thm1::{co_yoneda_check, run_co_yoneda, run_theorem1_crosscheck, thm1_check};
use crate::thm23::{run_curated, run_thm23_check, Thm23Input};

/// Random copresheaves drawn by `thm1 --seed` when no count is given.
pub const DEFAULT_RANDOM_INSTANCES: usize = 200;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_CASES: usize = 200;
/// Galois connections drawn next to the companion cases.
pub const GALOIS_CASES: usize = 50;

/// Pushes a section and records how long it took.
pub fn timed(report: &mut Report, run: impl FnOnce() -> Section) {
    let start = Instant::now();
    let section = run();
    let ms = start.elapsed().as_millis() as u64;
    report.push(section, Some(ms));
    if let Some(t) = report.timing.as_mut() {
        t.total_ms += ms;
    }
}

fn self_witness(inst: &Instance, spec: &CheckSpec) -> serde_json::Value {
    // the instance restricted to the one failing check
    let mut doc = inst.doc.clone();
    doc.checks = vec![spec.clone()];
    doc.to_value()
}

fn check_name(inst: &Instance, i: usize, kind: &str, subject: &str) -> String {
    let prefix = inst.name.clone().unwrap_or_else(|| "instance".to_string());
    format!("{prefix}/{i}/{kind}/{subject}")
}

/// Every check the instance declares, in order.
pub fn run_instance_checks(inst: &Instance, bound: Truncation) -> Section {
    let mut s = Section::new("instance");
    for (i, spec) in inst.checks.iter().enumerate() {
        let w = || self_witness(inst, spec);
        match spec {
            CheckSpec::Thm1 { copresheaf } => {
                let mut c =
                    thm1_check(&check_name(inst, i, "thm1", copresheaf), &inst.copresheaves[copresheaf], bound.bound());
                if c.witness.is_some() {
                    c.witness = Some(w());
                }
                s.push(c);
            }
            CheckSpec::CoYoneda { copresheaf } => {
                let mut c =
                    co_yoneda_check(&check_name(inst, i, "co_yoneda", copresheaf), &inst.copresheaves[copresheaf]);
                if c.witness.is_some() {
                    c.witness = Some(w());
                }
                s.push(c);
            }
            CheckSpec::Rbc { profunctor } => {
                let id = check_name(inst, i, "rbc", profunctor);
                let c = match iota_star_rbc(&inst.profunctors[profunctor], bound) {
                    Ok(r) => {
                        let detail = match r.failures().next() {
                            Some(f) => format!("not bijective at a={} ys={:?}: {} → {}", f.a, f.ys, f.source, f.target),
                            None => format!("{} components bijective", r.components.len()),
                        };
                        Check::new(id, r.passed()).detail(detail)
                    }
                    Err(e) => Check::new(id, false).detail(e.to_string()),
                };
                s.push(c.witness_on_fail(w));
            }
            CheckSpec::Cosifted { copresheaf } => {
                let el = category_of_elements(&inst.copresheaves[copresheaf]);
                let ok = is_cosifted(&el.cat);
                s.push(
                    Check::new(check_name(inst, i, "cosifted", copresheaf), ok)
                        .detail(format!("El(d) has {} objects", el.cat.objects()))
                        .witness_on_fail(w),
                );
            }
            CheckSpec::Thm23 { j, d, a, b, m } => {
                let input = Thm23Input {
                    name: check_name(inst, i, "thm23", &format!("{j},{d}")),
                    j: inst.functors[j].clone(),
                    d: inst.functors[d].clone(),
                    pa: a.as_ref().map(|a| inst.product_choices[a].clone()),
                    pb: inst.product_choices[b].clone(),
                    pm: inst.product_choices[m].clone(),
                };
                for mut c in run_thm23_check(&input, bound) {
                    if c.witness.is_some() {
                        c.witness = Some(w());
                    }
                    s.push(c);
                }
            }
            CheckSpec::Colax { functor, dom, cod } => {
                let id = check_name(inst, i, "colax", functor);
                let c = match rbc_colax_crosscheck(
                    &inst.functors[functor],
                    &inst.product_choices[dom],
                    &inst.product_choices[cod],
                    bound,
                ) {
                    Ok(x) => Check::new(id, x.agree()).detail(format!(
                        "structure_iso={} rbc={}",
                        x.structure_iso,
                        x.rbc.passed()
                    )),
                    Err(e) => Check::new(id, false).detail(e.to_string()),
                };
                s.push(c.witness_on_fail(w));
            }
            CheckSpec::Lemma { lemma, functors, profunctors, raw_coend } => {
                let fs: Vec<_> = functors.iter().map(|f| inst.functors[f].clone()).collect();
                let ps: Vec<_> = profunctors.iter().map(|p| inst.profunctors[p].clone()).collect();
                let id = check_name(inst, i, "lemma", lemma);
                let c = match suites::run_lemma(lemma, &fs, &ps, *raw_coend, bound) {
                    Outcome::Holds(d) => Check::new(id, true).detail(d),
                    Outcome::Fails(d) => Check::new(id, false).detail(d).witness_on_fail(w),
                    Outcome::Vacuous(why) => Check::skipped(id, format!("missing hypothesis: {why}")),
                };
                s.push(c);
            }
        }
    }
    s.finish()
}

pub fn instance_report(command: &str, inst: &Instance, bound: Truncation) -> Report {
    let mut r = Report::new(command, Parameters { bound: bound.bound(), seed: None, cases: None });
    timed(&mut r, || run_instance_checks(inst, bound));
    r
}

/// Which copresheaves `thm1` runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thm1Corpus {
    Exhaustive,
    Random { seed: u64, instances: usize },
}

pub fn thm1_report(corpus: Thm1Corpus, bound: Truncation) -> Report {
    let (bounds, seed, cases) = match corpus {
        Thm1Corpus::Exhaustive => (CorpusBounds::exhaustive(), 0, None),
        Thm1Corpus::Random { seed, instances } => (CorpusBounds::random(instances), seed, Some(instances)),
    };
    let corpus = generate_corpus(bounds, seed);
    let seed = bounds.exhaustive_fiber.is_none().then_some(seed);
    let mut r = Report::new("thm1", Parameters { bound: bound.bound(), seed, cases });
    timed(&mut r, || run_theorem1_crosscheck(&corpus, bound.bound()));
    timed(&mut r, || run_co_yoneda(&corpus));
    r
}

pub fn suite_report(seed: u64, cases: usize, bound: Truncation, raw_coend: bool) -> Report {
    let mut r = Report::new("suite", Parameters { bound: bound.bound(), seed: Some(seed), cases: Some(cases) });
    for lemma in suites::LEMMAS {
        if raw_coend && *lemma != "unit_laws" {
            continue;
        }
        timed(&mut r, || suites::run_suite(lemma, seed, cases, bound, raw_coend));
    }
    r
}

pub fn thm23_report(bound: Truncation) -> Report {
    let mut r = Report::new("thm2", Parameters { bound: bound.bound(), seed: None, cases: None });
    timed(&mut r, || run_curated(bound));
    r
}

/// Everything: the flagship sweep, the RBC and colax checks, the lemma
/// suites, the curated lattice instances and the presheaf checks.
pub fn full_report(seed: u64, cases: usize, bound: Truncation) -> Report {
    let mut r = Report::new("report", Parameters { bound: bound.bound(), seed: Some(seed), cases: Some(cases) });
    let corpus = generate_corpus(CorpusBounds::exhaustive(), 0);
    timed(&mut r, || run_theorem1_crosscheck(&corpus, bound.bound()));
    timed(&mut r, || run_co_yoneda(&corpus));
    for s in ["rbc_companion", "rbc_galois"] {
        let n = if s == "rbc_galois" { GALOIS_CASES.max(cases / 4) } else { cases };
        timed(&mut r, || suites::run_suite(s, seed, n, bound, false));
    }
    timed(&mut r, || suites::run_colax_crosscheck(bound));
    for lemma in suites::LEMMAS {
        timed(&mut r, || suites::run_suite(lemma, seed, cases, bound, false));
    }
    timed(&mut r, || run_curated(bound));
    timed(&mut r, suites::run_appendix);
    r
}
