//! The named verification suites behind `itlag verify` and the acceptance test.
//!
//! A suite is a list of independent cases. Cases run in parallel and are reported sorted by id,
//! so a report depends only on the suite, the seed and the case filter. Each case records the
//! input it ran on; the report checksum is a SHA-256 over those inputs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cobordism::simplicial::pullback;
use crate::cobordism::{
    check_iota_all, cochain_algebra, fundamental_functional, orcut, orcut_between, orientation_check, restriction,
    stokes_check, CobordismPresentation, FlatLocalSystem, OrientedSimplicialComplex,
};
use crate::error::{Error, Result};
use crate::homlin::complex::RationalComplex;
use crate::homlin::diagram::{holim, Diagram};
use crate::homlin::forms::BilinearForm;
use crate::homlin::map::ChainMap;
use crate::homlin::ops::{hpb, tensor_maps};
use crate::lag::aksz::{aksz_on_cospan, aksz_transgress, OrientedCochainAlgebra};
use crate::lag::correspondence::{random_lagrangian, random_object, unit_comparison};
use crate::lag::symplectic::{closed_antisymmetric_forms, random_symplectic, SymplecticComplex};
use crate::lag::{compose, deloop, Correspondence};
use crate::random::{random_complex, seeded, ComplexShape, WorkRng};
use crate::rational::q;
use crate::shape::nerve::nerve;
use crate::shape::poset::{Poset, PosetMap};
use crate::shape::shapes::{j_circ_functor, sigma, sigma_pairs, sp_uple_circ};
use crate::span_nondeg::{fold_criteria, random_fold_cone, BottomKind};
use crate::spine::{
    check_family, check_oplax, check_oplax_composition, check_spine_functoriality, check_zeta, ell_is_hpb, spine_maps,
    spine_maps_natural, CheckTally, PFamily,
};
use crate::twisted::{check_coinitial, cone_compatibility, tw_r, tw_shriek_poset, SliceVerdict};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

pub const SUITES: [&str; 11] = [
    "sphere-nerves",
    "constant-holim",
    "twisted-arrow",
    "coinitiality",
    "criteria-equivalence",
    "lagrangian-closure",
    "deloop",
    "spine",
    "iota-stokes",
    "lefschetz",
    "aksz-pipeline",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub verdict: Verdict,
    /// `fail` for negative controls.
    pub expected: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl CaseReport {
    /// Skipped cases are neutral.
    pub fn as_expected(&self) -> bool {
        self.verdict == Verdict::Skipped || self.verdict == self.expected
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checksum: String,
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    /// At least one case ran and every case that ran met its expectation.
    pub fn passed(&self) -> bool {
        self.cases.iter().any(|c| c.verdict != Verdict::Skipped) && self.cases.iter().all(CaseReport::as_expected)
    }

    /// `(as expected, not as expected, skipped)`.
    pub fn tally(&self) -> (usize, usize, usize) {
        let skipped = self.cases.iter().filter(|c| c.verdict == Verdict::Skipped).count();
        let good = self.cases.iter().filter(|c| c.verdict != Verdict::Skipped && c.as_expected()).count();
        (good, self.cases.len() - good - skipped, skipped)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let (good, bad, skipped) = self.tally();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{} {status}: {good} as expected, {bad} not, {skipped} skipped (seed {}, checksum {})", self.suite, self.seed, self.checksum);
        for c in &self.cases {
            let mut line = format!("  {:<8} {}", c.verdict.as_str(), c.id);
            if c.expected != Verdict::Pass {
                let _ = write!(line, " [expected {}]", c.expected.as_str());
            }
            if let Some(o) = &c.observed {
                let _ = write!(line, ": {o}");
            }
            if let Some(w) = &c.witness {
                let _ = write!(line, " (witness: {w})");
            }
            if let Some(t) = c.timing_ms {
                let _ = write!(line, " [{t} ms]");
            }
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub seed: Option<u64>,
    /// Run only the case with this id; the others are reported as skipped.
    pub case: Option<String>,
    /// Record wall-clock time per case. Reports are then no longer reproducible byte for byte.
    pub timings: bool,
}

struct Outcome {
    ok: bool,
    observed: Option<String>,
    witness: Option<String>,
}

impl Outcome {
    fn pass(observed: impl Into<String>) -> Self {
        Outcome { ok: true, observed: Some(observed.into()), witness: None }
    }

    fn fail(witness: impl Into<String>) -> Self {
        Outcome { ok: false, observed: None, witness: Some(witness.into()) }
    }

    fn check(ok: bool, observed: impl Into<String>, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(observed)
        } else {
            Outcome { ok: false, observed: Some(observed.into()), witness: Some(witness()) }
        }
    }

    fn tally(t: &CheckTally) -> Self {
        Self::check(t.ok(), format!("{} identities checked", t.checked), || {
            let shown: Vec<&str> = t.failures.iter().take(3).map(String::as_str).collect();
            format!("{} failures, first: {}", t.failures.len(), shown.join("; "))
        })
    }
}

type Runner = Box<dyn Fn() -> Result<(Value, Outcome)> + Send + Sync>;

struct Case {
    id: String,
    expected: Verdict,
    run: Runner,
}

fn case(id: impl Into<String>, run: impl Fn() -> Result<(Value, Outcome)> + Send + Sync + 'static) -> Case {
    Case { id: id.into(), expected: Verdict::Pass, run: Box::new(run) }
}

fn negative(id: impl Into<String>, run: impl Fn() -> Result<(Value, Outcome)> + Send + Sync + 'static) -> Case {
    Case { id: id.into(), expected: Verdict::Fail, run: Box::new(run) }
}

/// Aggregate check over the reports of the cases that ran.
type Summary = fn(&[CaseReport]) -> CaseReport;

/// Independent stream `stream` of the seeded generator.
fn rng_for(seed: u64, stream: u64) -> WorkRng {
    let mut rng = seeded(seed);
    rng.set_stream(stream);
    rng
}

fn build(name: &str, seed: u64) -> Result<(Vec<Case>, Option<Summary>)> {
    Ok(match name {
        "sphere-nerves" => (sphere_nerves(), None),
        "constant-holim" => (constant_holim(seed), None),
        "twisted-arrow" => (twisted_arrow(), None),
        "coinitiality" => (coinitiality(), None),
        "criteria-equivalence" => (criteria_equivalence(seed), Some(both_verdicts as Summary)),
        "lagrangian-closure" => (lagrangian_closure(seed), None),
        "deloop" => (deloop_suite(seed), Some(deloop_both_sides as Summary)),
        "spine" => (spine_suite(), None),
        "iota-stokes" => (iota_stokes(), None),
        "lefschetz" => (lefschetz(), None),
        "aksz-pipeline" => (aksz_pipeline(), None),
        _ => return Err(Error::Unknown { kind: "suite", name: name.into() }),
    })
}

/// Case ids of a suite, in report order.
pub fn case_ids(name: &str) -> Result<Vec<String>> {
    let (cases, _) = build(name, DEFAULT_SEED)?;
    let mut ids: Vec<String> = cases.into_iter().map(|c| c.id).collect();
    ids.sort();
    Ok(ids)
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let (cases, summary) = build(name, seed)?;
    if let Some(want) = &opts.case {
        if !cases.iter().any(|c| &c.id == want) {
            return Err(Error::Unknown { kind: "case", name: format!("{want} in suite {name}") });
        }
    }
    let mut results: Vec<(CaseReport, Value)> = cases
        .par_iter()
        .map(|c| {
            let selected = !matches!(&opts.case, Some(w) if w != &c.id);
            if !selected {
                let r = CaseReport {
                    id: c.id.clone(),
                    verdict: Verdict::Skipped,
                    expected: c.expected,
                    observed: None,
                    witness: None,
                    timing_ms: None,
                };
                return (r, Value::Null);
            }
            let start = Instant::now();
            let (input, outcome) = match (c.run)() {
                Ok(x) => x,
                Err(e) => (Value::Null, Outcome::fail(format!("error: {e}"))),
            };
            let timing_ms = opts.timings.then(|| start.elapsed().as_millis() as u64);
            let verdict = if outcome.ok { Verdict::Pass } else { Verdict::Fail };
            let witness = match (verdict, outcome.witness) {
                (Verdict::Fail, None) => Some("check failed".to_string()),
                (_, w) => w,
            };
            let r = CaseReport { id: c.id.clone(), verdict, expected: c.expected, observed: outcome.observed, witness, timing_ms };
            (r, input)
        })
        .collect();
    results.sort_by(|a, b| a.0.id.cmp(&b.0.id));
    let inputs: Vec<Value> = results.iter().map(|(r, input)| json!([r.id, input])).collect();
    let mut cases: Vec<CaseReport> = results.into_iter().map(|(r, _)| r).collect();
    if let Some(summary) = summary {
        if opts.case.is_none() {
            let s = summary(&cases);
            cases.push(s);
        }
    }
    let digest = Sha256::digest(json!({"suite": name, "seed": seed, "inputs": inputs}).to_string().as_bytes());
    let checksum = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok(SuiteReport { suite: name.into(), seed, checksum, cases })
}

/// Every suite in order.
pub fn run_all(opts: &SuiteOptions) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|s| run_suite(s, opts)).collect()
}

fn homology_text(h: &BTreeMap<i32, usize>) -> String {
    if h.is_empty() {
        return "0".into();
    }
    h.iter().map(|(k, r)| format!("H^{k} = Q^{r}")).collect::<Vec<_>>().join(", ")
}

fn ordinal(n: usize) -> Poset {
    let labels = (0..=n).map(|i| i.to_string()).collect();
    let rel: Vec<(usize, usize)> = (1..=n).map(|i| (i - 1, i)).collect();
    Poset::new(labels, &rel).expect("a chain is a poset")
}

fn sphere_nerves() -> Vec<Case> {
    (1..=4)
        .map(|n| {
            case(format!("n{n}"), move || {
                let p = sp_uple_circ(n);
                let h = nerve(&p).reduced_homology();
                let text = if h.is_empty() {
                    "reduced homology 0".to_string()
                } else {
                    h.iter().map(|(k, r)| format!("reduced H_{k} = Q^{r}")).collect::<Vec<_>>().join(", ")
                };
                let want = BTreeMap::from([(n - 1, 1)]);
                Ok((p.to_json(), Outcome::check(h == want, text, || format!("expected reduced H_{} = Q only", n - 1))))
            })
        })
        .collect()
}

fn constant_holim(seed: u64) -> Vec<Case> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        for i in 0..10u64 {
            out.push(case(format!("n{n}/a{i:02}"), move || {
                let mut rng = rng_for(seed, 1000 * n as u64 + i);
                let a = random_complex(&mut rng, &ComplexShape::default());
                let h = holim(&Diagram::constant(&sp_uple_circ(n), &a)).complex.homology();
                let want = RationalComplex::direct_sum(&[&a, &a.shift(1 - n as i32)]).homology();
                let outcome = Outcome::check(h == want, homology_text(&h), || format!("expected {}", homology_text(&want)));
                Ok((a.to_json(), outcome))
            }));
        }
    }
    out
}

/// Compares `tw_!(Σ^n)` with the explicit order: `Σ^n` on the plain copy, its opposite on the
/// dual copy, `(i,j) ≤ (k,l)^∨` iff `max(i,k) ≤ min(j,l)`, nothing from dual to plain.
fn sigma_rule_mismatch(n: usize) -> Result<(usize, Option<String>)> {
    let s = sigma(n);
    let t = tw_shriek_poset(&s)?;
    let p = t.poset();
    let pairs = sigma_pairs(n);
    let mut checked = 0;
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for (b, &(k, l)) in pairs.iter().enumerate() {
            let rules = [
                ("plain-plain", p.leq(t.plain(a), t.plain(b)), s.leq(a, b)),
                ("dual-dual", p.leq(t.dual(a), t.dual(b)), s.leq(b, a)),
                ("plain-dual", p.leq(t.plain(a), t.dual(b)), i.max(k) <= j.min(l)),
                ("dual-plain", p.leq(t.dual(a), t.plain(b)), false),
            ];
            for (what, got, want) in rules {
                checked += 1;
                if got != want {
                    return Ok((checked, Some(format!("{what} relation between ({i},{j}) and ({k},{l}): got {got}, expected {want}"))));
                }
            }
        }
    }
    Ok((checked, None))
}

fn twisted_arrow() -> Vec<Case> {
    let mut out = Vec::new();
    for n in 0..=4 {
        out.push(case(format!("tw-r/n{n}"), move || {
            let t = tw_r(&ordinal(n));
            let iso = t.isomorphism_to(&sigma(n)).is_some();
            let observed = format!("{} elements, {} relations", t.len(), t.relation_count());
            Ok((json!({"ordinal": n}), Outcome::check(iso, observed, || "no isomorphism to the interval poset".into())))
        }));
    }
    for n in 0..=3 {
        out.push(case(format!("tw-shriek/sigma{n}"), move || {
            let (checked, bad) = sigma_rule_mismatch(n)?;
            let outcome = match bad {
                None => Outcome::pass(format!("{checked} relations match")),
                Some(w) => Outcome::fail(w),
            };
            Ok((sigma(n).to_json(), outcome))
        }));
    }
    for (id, p) in [("cone/point", Poset::point()), ("cone/sigma1", sigma(1)), ("cone/sigma2", sigma(2))] {
        out.push(case(id, move || {
            let ok = cone_compatibility(&p)?;
            Ok((p.to_json(), Outcome::check(ok, "cone compatibility", || "twisted cone is not the cone of the twisted poset".into())))
        }));
    }
    out
}

fn coinitial_outcome(f: &PosetMap) -> (Value, Outcome) {
    let report = check_coinitial(f);
    let certified = report.slices.iter().filter(|s| s.verdict == SliceVerdict::ContractibleCertified).count();
    let acyclic = report.slices.iter().filter(|s| s.verdict == SliceVerdict::QAcyclic).count();
    let observed = format!("{} slices: {certified} certified contractible, {acyclic} Q-acyclic", report.slices.len());
    let outcome = Outcome::check(report.passes(), observed, || {
        let bad = report.slices.iter().find(|s| s.verdict == SliceVerdict::Fails).expect("a failing slice");
        format!("slice over {}: {}", bad.target, bad.witness.clone().unwrap_or_default())
    });
    let input = json!({"source": f.source.to_json(), "target": f.target.to_json(), "mapping": f.mapping});
    (input, outcome)
}

fn coinitiality() -> Vec<Case> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push(case(format!("j-circ/n{n}"), move || Ok(coinitial_outcome(&j_circ_functor(n)))));
    }
    for n in 1..=2 {
        out.push(case(format!("plain-embedding/sigma{n}"), move || {
            let t = tw_shriek_poset(&sigma(n))?;
            Ok(coinitial_outcome(&t.plain_embedding()))
        }));
    }
    out
}

const FOLD_SAMPLES: u64 = 60;

fn criteria_equivalence(seed: u64) -> Vec<Case> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        for i in 0..FOLD_SAMPLES {
            out.push(case(format!("n{n}/d{i:03}"), move || {
                let mut rng = rng_for(seed, 2000 * n as u64 + i);
                let kind = BottomKind::random(&mut rng);
                let d = random_fold_cone(&mut rng, n, &ComplexShape::default(), kind)?;
                let c = fold_criteria(&d)?;
                let observed = if c.holim { "non-degenerate" } else { "degenerate" };
                let outcome = Outcome::check(c.agree(), observed, || {
                    format!("holim {}, iterated {}, stable square {}", c.holim, c.iterated, c.stable_square)
                });
                Ok((d.to_json(), outcome))
            }));
        }
    }
    out
}

fn summary_case(id: &str, ok: bool, observed: String) -> CaseReport {
    CaseReport {
        id: id.into(),
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        expected: Verdict::Pass,
        witness: (!ok).then(|| observed.clone()),
        observed: Some(observed),
        timing_ms: None,
    }
}

fn count_observed(cases: &[CaseReport], label: &str) -> usize {
    cases.iter().filter(|c| c.verdict == Verdict::Pass && c.observed.as_deref() == Some(label)).count()
}

fn both_verdicts(cases: &[CaseReport]) -> CaseReport {
    let (yes, no) = (count_observed(cases, "non-degenerate"), count_observed(cases, "degenerate"));
    summary_case("sample/both-verdicts", yes > 0 && no > 0, format!("{yes} non-degenerate, {no} degenerate"))
}

const LAGRANGIAN_PAIRS: u64 = 100;

fn lagrangian_closure(seed: u64) -> Vec<Case> {
    let mut out = Vec::new();
    for s in -1i32..=2 {
        for i in 0..LAGRANGIAN_PAIRS {
            out.push(case(format!("s{s:+}/p{i:03}"), move || {
                let mut rng = rng_for(seed, 3000 + 1000 * (s + 1) as u64 + i);
                let (wx, x) = random_object(&mut rng, s, 3);
                let (wy, y) = random_object(&mut rng, s, 3);
                let (wz, z) = random_object(&mut rng, s, 3);
                let c1 = random_lagrangian(&mut rng, (&wx, &x), (&wy, &y))?;
                let c2 = random_lagrangian(&mut rng, (&wy, &y), (&wz, &z))?;
                let input = json!([c1.to_json(), c2.to_json()]);
                if !c1.is_lagrangian()? || !c2.is_lagrangian()? {
                    return Ok((input, Outcome::fail("generated correspondence is not Lagrangian")));
                }
                let c = compose(&c1, &c2)?;
                if !c.is_lagrangian()? {
                    return Ok((input, Outcome::fail("composite is not Lagrangian")));
                }
                let unit = compose(&Correspondence::identity(&x), &c1)?;
                let phi = unit_comparison(&c1, &unit)?;
                let outcome = Outcome::check(c1.is_equivalent_via(&unit, &phi)?, "composite Lagrangian, unit law holds", || {
                    "identity composite is not equivalent to the original".into()
                });
                Ok((input, outcome))
            }));
        }
    }
    out
}

const DELOOP_INSTANCES: u64 = 60;

/// `h` on a random complex: a symplectic pairing, a random closed antisymmetric form, or the
/// sum of the two, by `i mod 3`.
fn deloop_instance(rng: &mut impl Rng, s: i32, i: u64) -> Result<(RationalComplex, BilinearForm)> {
    let random_form = |rng: &mut WorkRng, v: &RationalComplex| -> BilinearForm {
        let mut acc = BilinearForm::zero(v, v, s - 1);
        for b in closed_antisymmetric_forms(v, s - 1, &|_, _, _| true) {
            acc = acc.add(&b.scale(&q(rng.gen_range(-2..=2)))).expect("same complexes");
        }
        acc
    };
    let mut local = seeded(rng.gen());
    Ok(match i % 3 {
        0 => {
            let x = random_symplectic(&mut local, s - 1, 6);
            (x.complex().clone(), x.form().clone())
        }
        1 => {
            let v = random_complex(&mut local, &ComplexShape::default());
            let f = random_form(&mut local, &v);
            (v, f)
        }
        _ => {
            let x = random_symplectic(&mut local, s - 1, 6);
            let f = random_form(&mut local, x.complex());
            (x.complex().clone(), x.form().add(&f)?)
        }
    })
}

fn deloop_suite(seed: u64) -> Vec<Case> {
    (0..DELOOP_INSTANCES)
        .map(|i| {
            let s = (i % 4) as i32 - 1;
            case(format!("h{i:03}"), move || {
                let mut rng = rng_for(seed, 9000 + i);
                let (v, form) = deloop_instance(&mut rng, s, i)?;
                let h = form.adjoint()?;
                let verdict = deloop(&v, s, &h)?;
                let input = json!({"s": s, "h": SymplecticComplex::new(form)?.to_json()});
                let observed = if verdict.symplectic { "both hold" } else { "both fail" };
                let outcome = Outcome::check(verdict.agree(), observed, || {
                    format!("Lagrangian {}, symplectic {}", verdict.lagrangian, verdict.symplectic)
                });
                Ok((input, outcome))
            })
        })
        .collect()
}

fn deloop_both_sides(cases: &[CaseReport]) -> CaseReport {
    let (yes, no) = (count_observed(cases, "both hold"), count_observed(cases, "both fail"));
    summary_case("sample/both-sides", yes > 0 && no > 0, format!("{yes} symplectic, {no} not"))
}

const SPINE_MAX_J: usize = 2;
const SPINE_MAX_L: usize = 2;

fn spine_suite() -> Vec<Case> {
    let mut out = vec![case("functoriality", || {
        let t = check_spine_functoriality(SPINE_MAX_J + 1);
        Ok((json!({"max_arity": SPINE_MAX_J + 1}), Outcome::tally(&t)))
    })];
    let mut js: Vec<Vec<usize>> = vec![vec![]];
    for a in 0..=SPINE_MAX_J {
        js.push(vec![a]);
        for b in 0..=SPINE_MAX_J {
            js.push(vec![a, b]);
        }
    }
    for l in 0..=SPINE_MAX_L {
        for j in &js {
            let j = j.clone();
            let id = format!("family/l{l}/j{}", j.iter().map(usize::to_string).collect::<Vec<_>>().join("-"));
            out.push(case(id, move || {
                let family = PFamily::new(j.clone(), l);
                let mut t = check_family(&family)?;
                if j.len() <= 1 {
                    for d in 0..=1 {
                        t.absorb(check_zeta(&family, d)?);
                    }
                }
                Ok((json!({"j": j, "l": l}), Outcome::tally(&t)))
            }));
        }
        for a in 0..=SPINE_MAX_J {
            for b in 0..=SPINE_MAX_J {
                out.push(case(format!("oplax/l{l}/{a}-{b}"), move || {
                    let mut t = check_oplax(&[a], &[b], l)?;
                    for c in 0..=SPINE_MAX_J {
                        t.absorb(check_oplax_composition(&[a], &[b], &[c], l)?);
                    }
                    Ok((json!({"from": [a], "to": [b], "l": l}), Outcome::tally(&t)))
                }));
            }
        }
    }
    out.push(case("ell-r", || {
        let m = spine_maps();
        let mut t = CheckTally::default();
        t.record(spine_maps_natural(&m), || "ℓ or r not natural".into());
        t.record(ell_is_hpb(&m)?, || "ℓ does not exhibit Q[-1] as the homotopy pullback".into());
        t.record(m.r.iter().all(ChainMap::is_quasi_iso), || "r is not a quasi-isomorphism".into());
        Ok((json!("ell-r"), Outcome::tally(&t)))
    }));
    out
}

fn iota_stokes() -> Vec<Case> {
    let mut out = Vec::new();
    for name in ["two-interval", "square"] {
        out.push(case(format!("iota/{name}"), move || {
            let p = CobordismPresentation::bundled(name)?;
            Ok((p.to_json(), Outcome::tally(&check_iota_all(&p)?)))
        }));
    }
    for name in ["interval", "two-interval", "square", "cylinder", "annulus-composition"] {
        out.push(case(format!("stokes/{name}"), move || {
            let p = CobordismPresentation::bundled(name)?;
            let r = stokes_check(&p)?;
            let observed = format!("{} Stokes and additivity identities checked", r.checked);
            let outcome = Outcome::check(r.ok(), observed, || r.failures.first().cloned().unwrap_or_default());
            Ok((p.to_json(), outcome))
        }));
    }
    out
}

fn lefschetz_case(name: &'static str, e: FlatLocalSystem) -> impl Fn() -> Result<(Value, Outcome)> + Send + Sync {
    move || {
        let p = CobordismPresentation::bundled(name)?;
        let v = orientation_check(&p, &e)?;
        let input = json!({"presentation": p.to_json(), "coefficients": e.to_json()});
        let outcome = if v.ok() {
            Outcome::pass("Stokes holds, duality square cartesian")
        } else {
            let mut w = Vec::new();
            if !v.stokes {
                w.push("Stokes fails".to_string());
            }
            match v.witness {
                Some(k) => w.push(format!("cohomology comparison differs in degree {k}")),
                None => w.push("square is not cartesian".to_string()),
            }
            Outcome::fail(w.join("; "))
        };
        Ok((input, outcome))
    }
}

fn lefschetz() -> Vec<Case> {
    let trivial = FlatLocalSystem::trivial(1);
    let mut out: Vec<Case> = ["interval", "circle", "cylinder"]
        .into_iter()
        .map(|name| case(name, lefschetz_case(name, trivial.clone())))
        .collect();
    let twisted = FlatLocalSystem::rank_one((0, 2), q(2)).expect("rank one system");
    out.push(case("circle-monodromy-2", lefschetz_case("circle", twisted)));
    out.push(negative("moebius", lefschetz_case("moebius", trivial)));
    out
}

fn oriented(m: &OrientedSimplicialComplex, dim: i32) -> Result<OrientedCochainAlgebra> {
    OrientedCochainAlgebra::new(cochain_algebra(m)?, dim, fundamental_functional(m))
}

/// `aksz(M_0) ≅ aksz(M)` through the projection of the cylinder onto its left foot.
fn cylinder_identity() -> Result<(Value, Outcome)> {
    let p = CobordismPresentation::bundled("cylinder")?;
    let x = SymplecticComplex::standard();
    let corr = aksz_on_cospan(&orcut(&p)?, &x)?;
    if !corr.is_lagrangian()? {
        return Ok((p.to_json(), Outcome::fail("cylinder correspondence is not Lagrangian")));
    }
    let foot = p.piece(&[(0, 0)])?;
    let feet = foot.vertices();
    let per_angle = p.total().vertices().len() / feet.len();
    let proj: BTreeMap<usize, usize> = p.total().vertices().into_iter().map(|v| (v, feet[v / per_angle])).collect();
    let rho = pullback(p.total(), foot, &proj)?;
    let phi = tensor_maps(&rho, &ChainMap::identity(x.complex()));
    let id = Correspondence::identity(&aksz_transgress(&oriented(foot, 1)?, &x)?.object);
    let ok = id.is_equivalent_via(&corr, &phi)?;
    Ok((p.to_json(), Outcome::check(ok, "Lagrangian, equivalent to the identity", || "projection is not an equivalence of correspondences".into())))
}

/// Transgressing the glued interval against composing the transgressed halves.
fn interval_composition() -> Result<(Value, Outcome)> {
    let p = CobordismPresentation::bundled("two-interval")?;
    let x = SymplecticComplex::standard();
    let id = ChainMap::identity(x.complex());
    let c1 = aksz_on_cospan(&orcut_between(&p, 0, 1)?, &x)?;
    let c2 = aksz_on_cospan(&orcut_between(&p, 1, 2)?, &x)?;
    let direct = aksz_on_cospan(&orcut_between(&p, 0, 2)?, &x)?;
    let composite = compose(&c1, &c2)?;
    let whole = p.piece(&[(0, 2)])?;
    let e = FlatLocalSystem::trivial(1);
    let r01 = restriction(whole, p.piece(&[(0, 1)])?, &e)?;
    let r12 = restriction(whole, p.piece(&[(1, 2)])?, &e)?;
    let pb = hpb(c1.beta(), c2.alpha())?;
    let phi = pb.compare(&tensor_maps(&r01, &id), &tensor_maps(&r12, &id), &BTreeMap::new())?;
    let ok = direct.is_lagrangian()? && composite.is_lagrangian()? && direct.is_equivalent_via(&composite, &phi)?;
    Ok((p.to_json(), Outcome::check(ok, "transgression commutes with composition", || "glued and composed correspondences differ".into())))
}

fn aksz_pipeline() -> Vec<Case> {
    vec![
        case("circle-transgression", || {
            let p = CobordismPresentation::bundled("circle")?;
            let t = aksz_transgress(&oriented(p.total(), 1)?, &SymplecticComplex::standard())?;
            let check = t.object.check();
            let ok = t.object.shift() == -1 && check.ok() && !t.presymplectic_only;
            let observed = format!("shift {}, {}", t.object.shift(), homology_text(&t.object.complex().homology()));
            Ok((p.to_json(), Outcome::check(ok, observed, || format!("{:?}", check.failures()))))
        }),
        case("cylinder-identity", cylinder_identity),
        case("interval-composition", interval_composition),
        case("moebius-flagged", || {
            let p = CobordismPresentation::bundled("moebius")?;
            let t = aksz_transgress(&oriented(p.total(), 2)?, &SymplecticComplex::standard())?;
            Ok((p.to_json(), Outcome::check(t.presymplectic_only, "flagged presymplectic", || "broken duality not flagged".into())))
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_names_are_errors() {
        assert!(run_suite("nope", &SuiteOptions::default()).is_err());
        let opts = SuiteOptions { case: Some("n9".into()), ..Default::default() };
        assert!(run_suite("sphere-nerves", &opts).is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("sphere-nerves", &SuiteOptions::default()).unwrap();
        let b = run_suite("sphere-nerves", &SuiteOptions::default()).unwrap();
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
        assert!(a.passed());
        assert_eq!(a.cases.len(), 4);
    }

    #[test]
    fn case_filter_skips_the_rest() {
        let opts = SuiteOptions { case: Some("n2".into()), ..Default::default() };
        let r = run_suite("sphere-nerves", &opts).unwrap();
        assert_eq!(r.tally(), (1, 0, 3));
        assert!(r.passed());
    }

    #[test]
    fn seed_changes_the_checksum() {
        let a = run_suite("constant-holim", &SuiteOptions { case: Some("n2/a00".into()), ..Default::default() }).unwrap();
        let b = run_suite("constant-holim", &SuiteOptions { seed: Some(7), case: Some("n2/a00".into()), ..Default::default() }).unwrap();
        assert_ne!(a.checksum, b.checksum);
        assert!(a.passed() && b.passed());
    }

    #[test]
    fn failing_cases_carry_witnesses() {
        let opts = SuiteOptions { case: Some("moebius".into()), ..Default::default() };
        let r = run_suite("lefschetz", &opts).unwrap();
        let m = r.cases.iter().find(|c| c.id == "moebius").unwrap();
        assert_eq!(m.verdict, Verdict::Fail);
        assert!(m.witness.as_deref().unwrap().contains("degree 2"));
        assert!(r.passed());
    }
}
