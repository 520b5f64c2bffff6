//! `itlag`: builds objects from files or shape expressions, runs the verification suites and
//! prints reports as JSON or text.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on bad input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use itlag::cobordism::presentation::parse_index;
use itlag::cobordism::{
    check_iota_all, cochain_algebra, fundamental_functional, orcut, orientation_check, stokes_check, CobordismPresentation,
    FlatLocalSystem,
};
use itlag::grid::{check_grid, IntervalTuple};
use itlag::homlin::complex::RationalComplex;
use itlag::homlin::diagram::Diagram;
use itlag::lag::aksz::{aksz_on_cospan, aksz_transgress, OrientedCochainAlgebra};
use itlag::lag::symplectic::SymplecticComplex;
use itlag::lag::{compose, Correspondence};
use itlag::random::{seeded, ComplexShape};
use itlag::shape::nerve::nerve;
use itlag::shape::poset::{Poset, PosetMap};
use itlag::shape::shapes::{j_circ_functor, Shape};
use itlag::span_nondeg::{
    fold_cone_index, fold_criteria, nondeg_boundary, nondeg_half, nondeg_one_axis, nondeg_rke, nondeg_uple,
    random_fold_cone, BottomKind, UpleSpanDiagram,
};
use itlag::spine::{check_family, check_zeta, CheckTally, PFamily, PObject};
use itlag::suites::{case_ids, run_suite, SuiteOptions, SuiteReport, DEFAULT_SEED, SUITES};
use itlag::twisted::{check_coinitial, tw_r, tw_shriek_poset};

#[derive(Parser)]
#[command(name = "itlag", version, about = "Exact rational workbench for iterated spans, Lagrangians and oriented cospans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Seed for randomly generated instances.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Run a single case of a suite.
    #[arg(long, global = true)]
    case: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PosetInput {
    /// Shape expression such as `sigma(2)`, `Sp_circ(3)` or `product(1,2)`.
    shape: Option<String>,
    /// Poset JSON file `{"elements": [...], "leq": [[a, b], ...]}`.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PresentationInput {
    /// A bundled presentation: interval, two-interval, square, circle, cylinder, moebius, annulus-composition.
    #[arg(long)]
    name: Option<String>,
    /// Triangulation JSON file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TwKind {
    R,
    Shriek,
}

#[derive(Subcommand)]
enum Command {
    /// Build a shape and print it as poset JSON (or DOT).
    Shape {
        #[command(flatten)]
        input: PosetInput,
        #[arg(long)]
        dot: bool,
    },
    /// Cell counts and reduced rational homology of the nerve of a poset.
    Nerve(PosetInput),
    /// Cohomology table of a complex file.
    Homology {
        #[arg(long)]
        file: PathBuf,
    },
    /// Twisted arrow posets.
    Tw {
        #[command(flatten)]
        input: PosetInput,
        #[arg(long, value_enum, default_value_t = TwKind::Shriek)]
        kind: TwKind,
        #[arg(long)]
        dot: bool,
    },
    /// Slice-by-slice coinitiality of a poset map.
    Coinitial(CoinitialArgs),
    /// Non-degeneracy verdicts for an uple diagram or a fold cone diagram.
    Nondeg(NondegArgs),
    /// Lagrangian check and composition of correspondences.
    Lag {
        #[arg(long)]
        file: PathBuf,
        /// Compose with this correspondence on the right.
        #[arg(long)]
        then: Option<PathBuf>,
    },
    /// AKSZ transgression of a closed presentation or of a one-direction cospan.
    Aksz {
        #[command(flatten)]
        input: PresentationInput,
        /// Symplectic target; defaults to the standard 0-shifted Q^2.
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// The spine complexes P_{j,l}: identities of a family, or one value.
    Spine {
        /// Comma-separated j, e.g. `1,2`; empty for no directions.
        #[arg(long, default_value = "")]
        j: String,
        #[arg(long, default_value_t = 0)]
        l: usize,
        /// Object of Σ^j such as `(0,1)(1,2)`; prints P at this object.
        #[arg(long)]
        xi: Option<String>,
        /// Face of [l] as comma-separated vertices; defaults to all of [l].
        #[arg(long)]
        face: Option<String>,
    },
    /// Grid checks for a tuple of interval sequences.
    Grid {
        #[arg(long)]
        file: PathBuf,
        /// Object of Σ^j such as `(0,1)(1,2)`; prints its grid box.
        #[arg(long)]
        xi: Option<String>,
    },
    /// Stokes, integration and orientation checks on a cobordism presentation.
    Cobordism {
        #[command(flatten)]
        input: PresentationInput,
        /// Flat local system JSON for the orientation check.
        #[arg(long)]
        coefficients: Option<PathBuf>,
    },
    /// Run a named acceptance suite, or `all`.
    Verify {
        suite: Option<String>,
        /// List suites and their case ids.
        #[arg(long)]
        list: bool,
        /// Record per-case wall-clock time (reports then differ between runs).
        #[arg(long)]
        timings: bool,
    },
    /// Hasse diagram of a shape, or of its twisted arrow poset, in DOT.
    ExportDot {
        #[command(flatten)]
        input: PosetInput,
        #[arg(long, value_enum)]
        tw: Option<TwKind>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CoinitialArgs {
    /// The functor j_n restricted to the punctured shapes.
    #[arg(long)]
    j_circ: Option<usize>,
    /// The plain embedding C → tw_!(C) for this shape.
    #[arg(long)]
    plain: Option<String>,
    /// Map JSON `{"source": poset, "target": poset, "mapping": [...]}`.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct NondegArgs {
    /// Uple diagram `{"n": .., "diagram": ..}` or a diagram on the fold cone index.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Generate a random fold cone diagram of this dimension (uses --seed).
    #[arg(long)]
    random: Option<usize>,
}

/// A command's result: the report, optional text rendering, and whether all checks passed.
struct Report {
    value: Value,
    text: Option<String>,
    ok: bool,
}

impl Report {
    fn info(value: Value) -> Self {
        Report { value, text: None, ok: true }
    }

    fn checked(value: Value, ok: bool) -> Self {
        Report { value, text: None, ok }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| {
            let msg = e.to_string();
            let msg = msg.split(" at line ").next().unwrap_or_default();
            anyhow!("{}:{}:{}: malformed JSON: {msg}", path.display(), e.line(), e.column())
        })
}

/// Reads a JSON file and decodes it, prefixing decoding errors with the file name.
fn load<T>(path: &Path, what: &str, decode: impl FnOnce(&Value) -> itlag::Result<T>) -> Result<T> {
    let v = read_json(path)?;
    decode(&v).map_err(|e| anyhow!("{}: invalid {what}: {e}", path.display()))
}

fn poset(input: &PosetInput) -> Result<(String, Poset)> {
    match (&input.shape, &input.file) {
        (Some(s), _) => Ok((s.clone(), Shape::parse(s)?.build()?)),
        (None, Some(f)) => Ok((f.display().to_string(), load(f, "poset", Poset::from_json)?)),
        (None, None) => bail!("give a shape expression or --file"),
    }
}

fn presentation(input: &PresentationInput) -> Result<CobordismPresentation> {
    match (&input.name, &input.file) {
        (Some(n), _) => Ok(CobordismPresentation::bundled(n)?),
        (None, Some(f)) => load(f, "presentation", CobordismPresentation::from_json),
        (None, None) => bail!("give --name or --file"),
    }
}

fn twisted(p: &Poset, kind: TwKind) -> Result<Poset> {
    Ok(match kind {
        TwKind::R => tw_r(p),
        TwKind::Shriek => tw_shriek_poset(p)?.poset().clone(),
    })
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().with_context(|| format!("{t:?} is not a non-negative integer")))
        .collect()
}

fn tally_json(t: &CheckTally) -> Value {
    json!({"checked": t.checked, "failures": t.failures})
}

fn homology_json(h: &std::collections::BTreeMap<i32, usize>) -> Value {
    Value::Object(h.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

fn run(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    Ok(match &cli.command {
        Command::Shape { input, dot } => {
            let (name, p) = poset(input)?;
            if *dot {
                Report { value: json!({"dot": p.to_dot(&name)}), text: Some(p.to_dot(&name)), ok: true }
            } else {
                Report::info(p.to_json())
            }
        }
        Command::Nerve(input) => {
            let (_, p) = poset(input)?;
            let n = nerve(&p);
            let reduced: serde_json::Map<String, Value> =
                n.reduced_homology().iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            Report::info(json!({"cells": n.counts(), "reduced_homology": reduced}))
        }
        Command::Homology { file } => {
            let c = load(file, "complex", RationalComplex::from_json)?;
            let h = c.homology();
            let table: serde_json::Map<String, Value> =
                c.dims().keys().map(|k| (k.to_string(), json!(h.get(k).copied().unwrap_or(0)))).collect();
            Report::info(json!({"homology": table, "euler_characteristic": c.euler_characteristic()}))
        }
        Command::Tw { input, kind, dot } => {
            let (name, p) = poset(input)?;
            let t = twisted(&p, *kind)?;
            if *dot {
                let d = t.to_dot(&format!("tw({name})"));
                Report { value: json!({"dot": d}), text: Some(d), ok: true }
            } else {
                Report::info(t.to_json())
            }
        }
        Command::Coinitial(args) => {
            let f = if let Some(n) = args.j_circ {
                j_circ_functor(n)
            } else if let Some(s) = &args.plain {
                tw_shriek_poset(&Shape::parse(s)?.build()?)?.plain_embedding()
            } else {
                let path = args.file.as_ref().expect("clap enforces one input");
                let v = read_json(path)?;
                let field = |k: &str| v.get(k).ok_or_else(|| anyhow!("{}: missing \"{k}\"", path.display()));
                let source = Poset::from_json(field("source")?).with_context(|| format!("{}: \"source\"", path.display()))?;
                let target = Poset::from_json(field("target")?).with_context(|| format!("{}: \"target\"", path.display()))?;
                let mapping: Vec<usize> = serde_json::from_value(field("mapping")?.clone())
                    .with_context(|| format!("{}: \"mapping\"", path.display()))?;
                PosetMap::new(source, target, mapping).with_context(|| format!("{}: not a monotone map", path.display()))?
            };
            let report = check_coinitial(&f);
            Report::checked(serde_json::to_value(&report.slices)?, report.passes())
        }
        Command::Nondeg(args) => nondeg(args, g.seed)?,
        Command::Lag { file, then } => {
            let c = load(file, "correspondence", Correspondence::from_json)?;
            let mut out = json!({"shift": c.shift(), "lagrangian": c.is_lagrangian()?, "apex_homology": homology_json(&c.apex().homology())});
            let mut ok = out["lagrangian"] == json!(true);
            if let Some(t) = then {
                let d = load(t, "correspondence", Correspondence::from_json)?;
                let e = compose(&c, &d)?;
                let lag = e.is_lagrangian()?;
                ok &= lag;
                out["composite"] = json!({"lagrangian": lag, "apex_homology": homology_json(&e.apex().homology()), "correspondence": e.to_json()});
            }
            Report::checked(out, ok)
        }
        Command::Aksz { input, target } => {
            let p = presentation(input)?;
            let x = match target {
                Some(t) => load(t, "symplectic object", SymplecticComplex::from_json)?,
                None => SymplecticComplex::standard(),
            };
            if p.j().is_empty() {
                let m = p.total();
                let t = OrientedCochainAlgebra::new(cochain_algebra(m)?, p.dim() as i32, fundamental_functional(m))?;
                let tr = aksz_transgress(&t, &x)?;
                let check = tr.object.check();
                let value = json!({
                    "shift": tr.object.shift(),
                    "symplectic": check.ok(),
                    "failures": check.failures(),
                    "presymplectic_only": tr.presymplectic_only,
                    "homology": homology_json(&tr.object.complex().homology()),
                });
                Report::checked(value, check.ok() && !tr.presymplectic_only)
            } else {
                let corr = aksz_on_cospan(&orcut(&p)?, &x)?;
                let lag = corr.is_lagrangian()?;
                Report::checked(json!({"shift": corr.shift(), "lagrangian": lag, "apex_homology": homology_json(&corr.apex().homology())}), lag)
            }
        }
        Command::Spine { j, l, xi, face } => {
            let j = parse_list(j)?;
            let family = PFamily::new(j.clone(), *l);
            match xi {
                Some(x) => {
                    let intervals = parse_index(x)?;
                    let face = match face {
                        Some(f) => parse_list(f)?,
                        None => (0..=*l).collect(),
                    };
                    let obj = PObject { intervals, face };
                    if !family.objects().contains(&obj) {
                        bail!("{} is not an object for j = {j:?}, l = {l}", obj.label());
                    }
                    let v = family.value(&obj)?;
                    Report::info(json!({"object": obj.to_json(), "complex": v.to_json(), "homology": homology_json(&v.homology())}))
                }
                None => {
                    let mut t = check_family(&family)?;
                    if j.len() <= 1 {
                        for d in 0..=1 {
                            t.absorb(check_zeta(&family, d)?);
                        }
                    }
                    Report::checked(json!({"j": j, "l": l, "objects": family.objects().len(), "checks": tally_json(&t)}), t.ok())
                }
            }
        }
        Command::Grid { file, xi } => {
            let tuple = load(file, "interval tuple", IntervalTuple::from_json)?;
            let t = check_grid(&tuple);
            let mut out = json!({"shape": tuple.shape(), "checks": tally_json(&t)});
            if let Some(x) = xi {
                let xi = parse_index(x)?;
                let boxes: Vec<Value> = tuple.grid(&xi)?.iter().map(|c| c.to_json()).collect();
                out["grid"] = Value::Array(boxes);
            }
            Report::checked(out, t.ok())
        }
        Command::Cobordism { input, coefficients } => {
            let p = presentation(input)?;
            let e = match coefficients {
                Some(f) => load(f, "local system", FlatLocalSystem::from_json)?,
                None => FlatLocalSystem::trivial(1),
            };
            let stokes = stokes_check(&p)?;
            let lefschetz = orientation_check(&p, &e)?;
            let mut ok = stokes.ok() && lefschetz.ok();
            let mut out = json!({
                "name": p.name(),
                "j": p.j(),
                "stokes": stokes,
                "lefschetz": lefschetz,
            });
            if !p.j().is_empty() {
                let iota = check_iota_all(&p)?;
                ok &= iota.ok();
                out["iota"] = tally_json(&iota);
            }
            Report::checked(out, ok)
        }
        Command::Verify { suite, list, timings } => verify(g, suite.as_deref(), *list, *timings)?,
        Command::ExportDot { input, tw } => {
            let (name, p) = poset(input)?;
            let (name, p) = match tw {
                Some(k) => (format!("tw({name})"), twisted(&p, *k)?),
                None => (name, p),
            };
            let d = p.to_dot(&name);
            Report { value: json!({"dot": d}), text: Some(d), ok: true }
        }
    })
}

fn nondeg(args: &NondegArgs, seed: Option<u64>) -> Result<Report> {
    let (diagram, generated) = match (&args.file, args.random) {
        (Some(f), _) => {
            let v = read_json(f)?;
            if v.get("n").is_some() {
                let phi = UpleSpanDiagram::from_json(&v).map_err(|e| anyhow!("{}: invalid uple diagram: {e}", f.display()))?;
                let faces = nondeg_boundary(&phi)?;
                let value = json!({
                    "kind": "uple",
                    "n": phi.n(),
                    "nondegenerate": nondeg_uple(&phi)?,
                    "half": nondeg_half(&phi)?,
                    "rke": nondeg_rke(&phi)?,
                    "one_axis": if phi.n() > 0 { json!(nondeg_one_axis(&phi)?) } else { Value::Null },
                    "faces": faces,
                });
                return Ok(Report::info(value));
            }
            (Diagram::from_json(&v).map_err(|e| anyhow!("{}: invalid diagram: {e}", f.display()))?, None)
        }
        (None, Some(n)) => {
            let mut rng = seeded(seed.unwrap_or(DEFAULT_SEED));
            let kind = BottomKind::random(&mut rng);
            let d = random_fold_cone(&mut rng, n, &ComplexShape::default(), kind)?;
            let j = d.to_json();
            (d, Some(j))
        }
        (None, None) => bail!("give --file or --random"),
    };
    let n = (1..=4)
        .find(|&n| diagram.index() == &fold_cone_index(n))
        .ok_or_else(|| anyhow!("diagram is not indexed by a fold cone shape (n ≤ 4)"))?;
    let c = fold_criteria(&diagram)?;
    let mut value = json!({"kind": "fold-cone", "n": n, "criteria": c, "agree": c.agree()});
    if let Some(d) = generated {
        value["diagram"] = d;
    }
    Ok(Report::checked(value, c.agree()))
}

fn verify(g: &Global, suite: Option<&str>, list: bool, timings: bool) -> Result<Report> {
    if list {
        let mut value = serde_json::Map::new();
        let mut text = String::new();
        for s in SUITES {
            let ids = case_ids(s)?;
            text.push_str(&format!("{s}: {}\n", ids.join(" ")));
            value.insert(s.to_string(), json!(ids));
        }
        return Ok(Report { value: Value::Object(value), text: Some(text), ok: true });
    }
    let suite = suite.ok_or_else(|| anyhow!("name a suite ({}) or `all`", SUITES.join(", ")))?;
    let opts = SuiteOptions { seed: g.seed, case: g.case.clone(), timings };
    let reports: Vec<SuiteReport> = if suite == "all" {
        if g.case.is_some() {
            bail!("--case needs a single suite");
        }
        SUITES.iter().map(|s| run_suite(s, &opts)).collect::<itlag::Result<_>>()?
    } else {
        vec![run_suite(suite, &opts)?]
    };
    let ok = reports.iter().all(SuiteReport::passed);
    let text = reports.iter().map(SuiteReport::to_text).collect::<String>();
    let value = if reports.len() == 1 { reports[0].to_json() } else { Value::Array(reports.iter().map(SuiteReport::to_json).collect()) };
    Ok(Report { value, text: Some(text), ok })
}

/// `key: value` lines for reports without a dedicated text form.
fn plain_text(v: &Value) -> String {
    match v {
        Value::Object(m) => m.iter().map(|(k, x)| format!("{k}: {}\n", x)).collect(),
        Value::Array(xs) => xs.iter().map(|x| format!("{x}\n")).collect(),
        x => format!("{x}\n"),
    }
}

fn emit(g: &Global, r: &Report) -> Result<()> {
    let body = match g.format {
        Format::Json => serde_json::to_string_pretty(&r.value)? + "\n",
        Format::Text => r.text.clone().unwrap_or_else(|| plain_text(&r.value)),
    };
    match &g.out {
        Some(path) => fs::write(path, body).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|r| emit(&cli.global, &r).map(|()| r.ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
