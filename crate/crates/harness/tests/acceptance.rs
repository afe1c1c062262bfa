//! One line per acceptance criterion, written straight to stdout so it shows
//! up without `--nocapture`.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use equipment::fincat::enumerate_functors;
use equipment::fpmonad::Truncation;
use equipment::kanext::Copresheaf;
use equipment::FinCat;
use equipment_harness::corpus::{boolean_square, generate_corpus, CorpusBounds};
use equipment_harness::instance::{CheckSpec, InstanceBuilder, InstanceDoc};
use equipment_harness::report::{Report, Section, Verdict};
use equipment_harness::run::{full_report, run_instance_checks, suite_report, thm1_report, thm23_report, Thm1Corpus};
use equipment_harness::suites::{self, run_suite, LEMMAS};
use equipment_harness::thm1::{run_co_yoneda, run_theorem1_crosscheck};

struct Line {
    n: usize,
    ok: bool,
    what: String,
}

fn line(n: usize, ok: bool, what: impl Into<String>) -> Line {
    Line { n, ok, what: what.into() }
}

fn clean(s: &Section) -> bool {
    s.count(Verdict::Fail) == 0 && !s.vacuous && !s.checks.is_empty()
}

fn first_failure(s: &Section) -> String {
    s.failures().next().map(|c| format!(" first failure {}: {}", c.id, c.detail)).unwrap_or_default()
}

fn bound() -> Truncation {
    Truncation::new(3).unwrap()
}

fn thm1_and_co_yoneda() -> (Line, Line) {
    let start = Instant::now();
    let corpus = generate_corpus(CorpusBounds::exhaustive(), 0);
    let s = run_theorem1_crosscheck(&corpus, 3);
    let ms = start.elapsed().as_millis();
    let agree = s.count(Verdict::Pass);
    let ok1 = clean(&s) && agree == corpus.len() && corpus.len() > 1000;
    let l1 = line(
        1,
        ok1,
        format!("three verdicts agree on {agree}/{} copresheaves in {ms} ms{}", corpus.len(), first_failure(&s)),
    );
    let y = run_co_yoneda(&corpus);
    let l5 = line(
        5,
        clean(&y) && y.checks.len() == corpus.len(),
        format!("co-Yoneda bijective on {} copresheaves{}", y.checks.len(), first_failure(&y)),
    );
    (l1, l5)
}

fn rbc_suites() -> Line {
    let c = run_suite("rbc_companion", 42, 200, bound(), false);
    let g = run_suite("rbc_galois", 42, 50, bound(), false);
    let ok = clean(&c) && clean(&g) && c.count(Verdict::Pass) >= 200 && g.count(Verdict::Pass) >= 50;
    line(
        2,
        ok,
        format!(
            "companions {}/{} and Galois conjoints {}/{} pass RBC at L=3{}{}",
            c.count(Verdict::Pass),
            c.checks.len(),
            g.count(Verdict::Pass),
            g.checks.len(),
            first_failure(&c),
            first_failure(&g)
        ),
    )
}

fn index_of(a: &Arc<FinCat>, c: &Arc<FinCat>, objs: &[usize]) -> usize {
    enumerate_functors(a, c, 1 << 20).iter().position(|f| f.obj_map() == objs).expect("monotone map")
}

fn colax() -> Line {
    let s = suites::run_colax_crosscheck(bound());
    let sq = boolean_square();
    let c2 = Arc::new(FinCat::chain(2));
    let find = |id: String| s.checks.iter().find(|c| c.id == id).cloned();
    let pos = find(format!("boolean_square->boolean_square/{}", index_of(&sq, &sq, &[0, 1, 2, 3])));
    let neg = find(format!("boolean_square->chain2/{}", index_of(&sq, &c2, &[0, 1, 1, 1])));
    let designed = |c: &Option<equipment_harness::report::Check>, want: &str| {
        c.as_ref().is_some_and(|c| c.verdict == Verdict::Pass && c.detail == format!("structure_iso={want} rbc={want}"))
    };
    let isos = s.checks.iter().filter(|c| c.detail.starts_with("structure_iso=true")).count();
    let ok = clean(&s) && designed(&pos, "true") && designed(&neg, "false");
    line(
        3,
        ok,
        format!(
            "{} lattice maps, {} meet-preserving; identity on the square positive, square → chain [0,1,1,1] negative{}",
            s.checks.len(),
            isos,
            first_failure(&s)
        ),
    )
}

fn lemma_suites() -> Line {
    let r = suite_report(42, 200, bound(), false);
    let short: Vec<String> = r
        .sections
        .iter()
        .filter(|s| !clean(s) || s.count(Verdict::Pass) < 200)
        .map(|s| format!("{} ({}/{})", s.name, s.count(Verdict::Pass), s.checks.len()))
        .collect();
    let raw = suite_report(42, 200, bound(), true);
    let raw_fails = raw.section("lemma/unit_laws/raw_coend").map_or(0, |s| s.count(Verdict::Fail));
    let ok = r.sections.len() == LEMMAS.len() && short.is_empty() && raw_fails > 0;
    line(
        4,
        ok,
        format!(
            "{} lemma suites × 200 cases, {} failures; raw coend fails unit laws on {raw_fails}/200{}",
            r.sections.len(),
            r.summary.fail,
            if short.is_empty() { String::new() } else { format!(" short: {short:?}") }
        ),
    )
}

fn appendix() -> Line {
    let s = suites::run_appendix();
    let kinds = ["pointwise_sizes/", "pointwise_universal/", "lax_algebra/"];
    let all_kinds = kinds.iter().all(|k| s.checks.iter().any(|c| c.id.starts_with(k)));
    line(
        6,
        clean(&s) && all_kinds,
        format!("{} checks on pointwise products and unit/associator comparisons{}", s.checks.len(), first_failure(&s)),
    )
}

fn thm23() -> Line {
    let r = thm23_report(bound());
    let s = &r.sections[0];
    let instances: std::collections::BTreeSet<&str> = s.checks.iter().filter_map(|c| c.id.split('/').next()).collect();
    let kan_labelled = s
        .checks
        .iter()
        .filter(|c| c.verdict == Verdict::Pass && c.battery_relative)
        .all(|c| c.detail.contains("kan-candidates"));
    let ok = clean(s) && instances.len() >= 20 && r.summary.battery_relative > 0 && kan_labelled;
    line(
        7,
        ok,
        format!(
            "{} curated instances: {} pass ({} battery-relative), {} skipped, {} fail{}",
            instances.len(),
            r.summary.pass,
            r.summary.battery_relative,
            r.summary.skipped,
            r.summary.fail,
            first_failure(s)
        ),
    )
}

fn determinism() -> Line {
    let json = |r: Report| r.without_timing().to_json().unwrap();
    let pairs = [
        (json(suite_report(42, 40, bound(), false)), json(suite_report(42, 40, bound(), false))),
        (json(suite_report(42, 40, bound(), true)), json(suite_report(42, 40, bound(), true))),
        (
            json(thm1_report(Thm1Corpus::Random { seed: 9, instances: 60 }, bound())),
            json(thm1_report(Thm1Corpus::Random { seed: 9, instances: 60 }, bound())),
        ),
        (json(full_report(5, 20, bound())), json(full_report(5, 20, bound()))),
    ];
    let same = pairs.iter().filter(|(a, b)| a == b).count();
    line(8, same == pairs.len(), format!("{same}/{} report pairs byte-identical without timing", pairs.len()))
}

#[test]
fn acceptance() {
    let (l1, l5) = thm1_and_co_yoneda();
    let mut lines = vec![l1, rbc_suites(), colax(), lemma_suites(), l5, appendix(), thm23(), determinism()];
    lines.sort_by_key(|l| l.n);
    let mut out = std::io::stdout().lock();
    for l in &lines {
        writeln!(out, "criterion {}: {} {}", l.n, if l.ok { "PASS" } else { "FAIL" }, l.what).unwrap();
    }
    let failed: Vec<String> = lines.iter().filter(|l| !l.ok).map(|l| format!("{}: {}", l.n, l.what)).collect();
    assert!(failed.is_empty(), "{failed:#?}");
}

fn replay(witness: &serde_json::Value) -> Section {
    let doc = InstanceDoc::parse(&witness.to_string()).unwrap();
    run_instance_checks(&doc.resolve().unwrap(), bound())
}

#[test]
fn raw_coend_witnesses_replay() {
    let s = run_suite("unit_laws", 42, 50, bound(), true);
    let bad = s.failures().next().expect("raw coend should break the unit laws");
    let w = bad.witness.as_ref().expect("witness");
    let again = replay(w);
    assert_eq!(again.checks.len(), 1);
    assert_eq!(again.checks[0].verdict, Verdict::Fail);
}

#[test]
fn rbc_witness_on_a_discrete_constant_replays() {
    let d = Copresheaf::constant(Arc::new(FinCat::discrete(2)), 1);
    let mut b = InstanceBuilder::new("discrete_constant");
    let profunctor = b.profunctor(&d.to_profunctor());
    b.check(CheckSpec::Rbc { profunctor });
    let doc = b.finish();
    let first = run_instance_checks(&doc.resolve().unwrap(), bound());
    assert_eq!(first.checks[0].verdict, Verdict::Fail);
    let w = first.checks[0].witness.as_ref().expect("witness");
    let again = replay(w);
    assert_eq!(again.checks[0].verdict, Verdict::Fail);
    assert_eq!(again.checks[0].detail, first.checks[0].detail);
}
