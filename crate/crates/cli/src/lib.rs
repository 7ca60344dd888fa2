//! `dext` command line: argument parsing, dispatch and report rendering.

use std::io::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use dext::curve::{self, CurveSpec};
use dext::hypersurface::{self, EndElement, SelfExt1};
use dext::models::{self, ModelId};
use dext::quotient::{self, Character, DiagonalGroupAction, GradedDims};
use dext::rewrite::RewriteSystem;
use dext::{Error, TruncationTable, WeylElement};

pub mod verify;

/// Environment variable holding the worker count for `verify`.
pub const THREADS_ENV: &str = "DEXT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "dext", version, about = "Exact Ext computations for D-modules on singular hypersurfaces")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Highest filtration level reported.
    #[arg(long, global = true, default_value_t = 6)]
    pub max_deg: u32,
    /// Unchanged widenings required before a positive level is reported.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub stab_window: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    /// Include wall time in the report (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ActOn {
    Ext0,
    Ext1,
    #[value(name = "ext1-ext1")]
    Ext1Ext1,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Filtered dimensions of Ext¹(D_X, D_X) = D/(Df + fD).
    ExtSelf {
        #[arg(long)]
        f: String,
        #[arg(long)]
        nvars: Option<usize>,
    },
    /// Ext⁰ and Ext¹ of D_X against a module model.
    ExtModule {
        #[arg(long)]
        f: String,
        /// `dx:<poly>`, `delta:<n>`, `nlines-ic:<n>`, `kummer:<n>:<p/q>` or `free:<n>`.
        #[arg(long)]
        model: String,
    },
    /// Solve α·f = f·β for β.
    Twist {
        #[arg(long)]
        f: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        nvars: Option<usize>,
    },
    /// Action of an endomorphism (or Ext¹ class) on Ext classes of D_X.
    Act {
        #[arg(long)]
        f: String,
        /// The endomorphism; for `ext1-ext1`, the element multiplying on the left.
        #[arg(long)]
        alpha: String,
        /// The class acted on.
        #[arg(long)]
        m: String,
        #[arg(long, value_enum, default_value_t = ActOn::Ext1)]
        on: ActOn,
        #[arg(long)]
        nvars: Option<usize>,
    },
    /// Whether h·f ∈ f·D.
    EndMember {
        #[arg(long)]
        f: String,
        #[arg(long)]
        h: String,
        #[arg(long)]
        nvars: Option<usize>,
    },
    /// Normal form under a rewriting preset.
    Rewrite {
        #[arg(long, default_value = "node-xy")]
        preset: String,
        #[arg(long)]
        e: String,
    },
    /// Exhaustive local confluence check of a preset.
    Confluence {
        #[arg(long, default_value = "node-xy")]
        preset: String,
    },
    /// Cumulative irreducible-monomial counts of a preset.
    IrreducibleDims {
        #[arg(long, default_value = "node-xy")]
        preset: String,
    },
    /// Vanishing prediction from curve data (JSON text or `@path`).
    CurvePredict {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        simple: bool,
    },
    /// Prediction vs computation on planar multicross models; the full
    /// matrix n = 2..4 × {trivial, kummer 1/2, delta} when no flags are given.
    CurveCrosscheck {
        #[arg(long)]
        lines: Option<usize>,
        #[arg(long)]
        model: Option<String>,
    },
    /// Isotypic dimensions of the delta module under a diagonal group.
    QuotientIsotypic {
        #[arg(long)]
        group: String,
        #[arg(long)]
        character: String,
    },
    /// Dimensions of the nontrivial-isotypic part of the cohomology of REnd.
    QuotientRend {
        #[arg(long)]
        group: String,
    },
    /// Lattice counts of (x^{-1}C[x^{-1}])^χ by degree.
    QuotientCech {
        #[arg(long)]
        group: String,
        #[arg(long)]
        character: String,
    },
    /// Run a verification suite.
    Verify {
        /// One of: node, smooth, cusp, twist, actions, nlines, curves, quotient, all.
        suite: String,
    },
}

/// Exit status and rendered streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::UnknownVariable { .. }
            | Error::NotPolynomial(_)
            | Error::InvalidModel(_)
            | Error::InvalidGroup(_)
            | Error::InvalidCharacter(_)
            | Error::MalformedSpec(_)
            | Error::DimensionMismatch { .. } => Failure::Usage(e.to_string()),
            other => Failure::Compute(other.to_string()),
        }
    }
}

/// A computed payload plus its renderings.
struct Payload {
    input: Value,
    result: Value,
    text: String,
    csv: Option<String>,
    certification: String,
    /// Exit 1 even though the computation ran (failed verification).
    failed: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RunReport<'a> {
    command: &'a str,
    argv: &'a [String],
    input: &'a Value,
    result: &'a Value,
    certification: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<u128>,
}

/// Parses `argv` (including the program name), runs one command and
/// renders its report. Never panics on bad input and never exits.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if !e.use_stderr() {
                return Outcome { code: 0, stdout: text, stderr: String::new() };
            }
            let sub = argv.iter().skip(1).find_map(|a| subcommand_help(a));
            let help = sub.unwrap_or_else(|| <Cli as clap::CommandFactory>::command().render_help().to_string());
            return Outcome { code: 2, stdout: String::new(), stderr: format!("{text}\n{help}") };
        }
    };
    let started = Instant::now();
    let name = command_name(&cli.command);
    let payload = match dispatch(&cli) {
        Ok(p) => p,
        Err(Failure::Usage(msg)) => {
            let help = subcommand_help(name).unwrap_or_default();
            return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n\n{help}") };
        }
        Err(Failure::Compute(msg)) => {
            return Outcome { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") };
        }
    };
    let wall = cli.common.timing.then(|| started.elapsed().as_millis());
    let body = match cli.common.format {
        Format::Json => {
            let report = RunReport {
                command: name,
                argv: &argv[1..],
                input: &payload.input,
                result: &payload.result,
                certification: &payload.certification,
                wall_time_ms: wall,
            };
            serde_json::to_string_pretty(&report).expect("serializable") + "\n"
        }
        Format::Csv => match &payload.csv {
            Some(c) => c.clone(),
            None => {
                return Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!(
                        "error: `{name}` has no CSV rendering; use --format json or text\n\n{}",
                        subcommand_help(name).unwrap_or_default()
                    ),
                }
            }
        },
        Format::Text => {
            let mut t = payload.text.clone();
            if let Some(ms) = wall {
                t.push_str(&format!("# wall time {ms} ms\n"));
            }
            t
        }
    };
    let code = if payload.failed { 1 } else { 0 };
    match &cli.common.output {
        Some(path) => {
            let res = std::fs::File::create(path).and_then(|mut fh| fh.write_all(body.as_bytes()));
            match res {
                Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                Err(e) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {}: {e}\n", path.display()) },
            }
        }
        None => Outcome { code, stdout: body, stderr: String::new() },
    }
}

fn subcommand_help(name: &str) -> Option<String> {
    let mut root = <Cli as clap::CommandFactory>::command();
    root.find_subcommand_mut(name).map(|c| c.render_help().to_string())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::ExtSelf { .. } => "ext-self",
        Command::ExtModule { .. } => "ext-module",
        Command::Twist { .. } => "twist",
        Command::Act { .. } => "act",
        Command::EndMember { .. } => "end-member",
        Command::Rewrite { .. } => "rewrite",
        Command::Confluence { .. } => "confluence",
        Command::IrreducibleDims { .. } => "irreducible-dims",
        Command::CurvePredict { .. } => "curve-predict",
        Command::CurveCrosscheck { .. } => "curve-crosscheck",
        Command::QuotientIsotypic { .. } => "quotient-isotypic",
        Command::QuotientRend { .. } => "quotient-rend",
        Command::QuotientCech { .. } => "quotient-cech",
        Command::Verify { .. } => "verify",
    }
}

/// Parses `text` in `nvars` variables, or the fewest (up to 4) that work.
fn parse_element(text: &str, nvars: Option<usize>) -> Result<WeylElement, Failure> {
    match nvars {
        Some(n) => Ok(WeylElement::parse(text, n)?),
        None => {
            let mut last = None;
            for n in 1..=4 {
                match WeylElement::parse(text, n) {
                    Ok(e) => return Ok(e),
                    Err(e) => last = Some(e),
                }
            }
            Err(last.expect("tried at least once").into())
        }
    }
}

fn parse_polynomial(text: &str, nvars: Option<usize>) -> Result<WeylElement, Failure> {
    let f = parse_element(text, nvars)?;
    f.require_polynomial()?;
    if f.is_zero() {
        return Err(Failure::Usage("f must be nonzero".into()));
    }
    Ok(f)
}

/// Parses several elements in a common variable count.
fn parse_together(texts: &[&str], nvars: Option<usize>) -> Result<Vec<WeylElement>, Failure> {
    let n = match nvars {
        Some(n) => n,
        None => texts.iter().map(|t| parse_element(t, None).map(|e| e.nvars())).collect::<Result<Vec<_>, _>>()?.into_iter().max().unwrap_or(1),
    };
    texts.iter().map(|t| parse_element(t, Some(n))).collect()
}

fn model_nvars(id: &str) -> Option<usize> {
    let (kind, rest) = id.split_once(':')?;
    match kind {
        "delta" | "free" => rest.trim().parse().ok(),
        "nlines-ic" | "kummer" => Some(2),
        _ => None,
    }
}

fn table_payload(input: Value, t: &TruncationTable) -> Payload {
    let certification = certification(std::slice::from_ref(t));
    Payload {
        input,
        result: serde_json::to_value(t).expect("serializable"),
        text: t.to_text(),
        csv: Some(t.to_csv()),
        certification,
        failed: false,
    }
}

fn certification(tables: &[TruncationTable]) -> String {
    let levels: Vec<_> = tables.iter().flat_map(|t| &t.levels).collect();
    let exact = levels.iter().filter(|l| l.status.is_exact()).count();
    let uncertified = levels.iter().filter(|l| l.status == dext::LevelStatus::Uncertified).count();
    let mut s = format!("{exact}/{} levels exact", levels.len());
    if uncertified > 0 {
        s.push_str(&format!(", {uncertified} uncertified"));
    }
    s
}

fn dims_payload(input: Value, d: &GradedDims) -> Payload {
    let mut text = format!("# {}\n", d.meaning);
    let mut csv = String::from("degree,dim\n");
    for (m, v) in d.dims.iter().enumerate() {
        text.push_str(&format!("{m:>4}  {v:>8}\n"));
        csv.push_str(&format!("{m},{v}\n"));
    }
    text.push_str(&format!("# series: {}\n", d.series()));
    Payload {
        input,
        result: json!({ "dims": d.dims, "meaning": d.meaning, "series": d.series() }),
        text,
        csv: Some(csv),
        certification: "exact (lattice count)".into(),
        failed: false,
    }
}

fn plain_payload(input: Value, result: Value, text: String, certification: &str) -> Payload {
    Payload { input, result, text, csv: None, certification: certification.into(), failed: false }
}

fn dispatch(cli: &Cli) -> Result<Payload, Failure> {
    let max_deg = cli.common.max_deg;
    let window = cli.common.stab_window as usize;
    match &cli.command {
        Command::ExtSelf { f, nvars } => {
            let f = parse_polynomial(f, *nvars)?;
            let t = hypersurface::ext1_self_dims(&f, max_deg, window)?;
            let input = json!({ "f": f.to_string(), "nvars": f.nvars(), "maxDeg": max_deg, "stabWindow": window });
            Ok(table_payload(input, &t))
        }
        Command::ExtModule { f, model } => {
            let fp = parse_polynomial(f, model_nvars(model))?;
            let id = ModelId::parse(model, Some(fp.nvars()))?;
            let module = models::build(&id)?;
            let t = hypersurface::ext_module_dims(module.as_ref(), &fp, max_deg, window)?;
            let input = json!({ "f": fp.to_string(), "model": id.to_string(), "maxDeg": max_deg, "stabWindow": window });
            let mut text = t.ext0.to_text();
            text.push_str(&t.ext1.to_text());
            let mut csv = String::from("ext,degree,dim,status\n");
            for (name, tab) in [("0", &t.ext0), ("1", &t.ext1)] {
                for l in &tab.levels {
                    csv.push_str(&format!("{name},{},{},{}\n", l.m, l.dim, l.status));
                }
            }
            Ok(Payload {
                input,
                result: json!({ "ext0": t.ext0, "ext1": t.ext1 }),
                text,
                csv: Some(csv),
                certification: certification(&[t.ext0.clone(), t.ext1.clone()]),
                failed: false,
            })
        }
        Command::Twist { f, alpha, nvars } => {
            let v = parse_together(&[f, alpha], *nvars)?;
            v[0].require_polynomial()?;
            let end = hypersurface::solve_twist(&v[0], &v[1])?;
            let input = json!({ "f": v[0].to_string(), "alpha": v[1].to_string() });
            let text = format!("alpha = {}\nbeta  = {}\n", end.alpha(), end.beta());
            let result = json!({ "alpha": end.alpha().to_string(), "beta": end.beta().to_string(), "verified": true });
            Ok(plain_payload(input, result, text, "exact (verified by multiplication)"))
        }
        Command::Act { f, alpha, m, on, nvars } => {
            let v = parse_together(&[f, alpha, m], *nvars)?;
            let (fp, a, x) = (&v[0], &v[1], &v[2]);
            fp.require_polynomial()?;
            let out = match on {
                ActOn::Ext0 => {
                    let end = hypersurface::solve_twist(fp, a)?;
                    let dx = models::CanonicalDx::new(fp.clone())?;
                    let c = dx.reduce_to_combination(x);
                    dx.element_of(&hypersurface::action_ext0(&dx, fp, &end, &c).map_err(|e| match e {
                        Error::Precondition(p) => Failure::Usage(p),
                        other => other.into(),
                    })?)
                }
                ActOn::Ext1 => {
                    let end: EndElement = hypersurface::solve_twist(fp, a)?;
                    SelfExt1::new(fp, window)?.act(&end, x)?
                }
                ActOn::Ext1Ext1 => SelfExt1::new(fp, window)?.act_on_ext1(x, a)?,
            };
            let on_name = match on {
                ActOn::Ext0 => "ext0",
                ActOn::Ext1 => "ext1",
                ActOn::Ext1Ext1 => "ext1-ext1",
            };
            let input = json!({ "f": fp.to_string(), "alpha": a.to_string(), "m": x.to_string(), "on": on_name });
            Ok(plain_payload(input, json!({ "class": out.to_string() }), format!("{out}\n"), "exact normal form"))
        }
        Command::EndMember { f, h, nvars } => {
            let v = parse_together(&[f, h], *nvars)?;
            v[0].require_polynomial()?;
            let member = hypersurface::end_membership(&v[0], &v[1])?;
            let input = json!({ "f": v[0].to_string(), "h": v[1].to_string() });
            Ok(plain_payload(input, json!({ "member": member }), format!("{member}\n"), "exact linear solve"))
        }
        Command::Rewrite { preset, e } => {
            let sys = RewriteSystem::preset(preset).map_err(|e| Failure::Usage(e.to_string()))?;
            let el = WeylElement::parse(e, sys.nvars())?;
            let nf = sys.reduce(&el)?;
            let input = json!({ "preset": preset, "e": el.to_string() });
            Ok(plain_payload(input, json!({ "normalForm": nf.to_string() }), format!("{nf}\n"), "rewriting normal form"))
        }
        Command::Confluence { preset } => {
            let sys = RewriteSystem::preset(preset).map_err(|e| Failure::Usage(e.to_string()))?;
            let r = sys.confluence_check(max_deg);
            let violations: Vec<Value> = r
                .violations
                .iter()
                .map(|v| {
                    json!({
                        "monomial": v.monomial.to_string(),
                        "normalForms": v.normal_forms.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let mut text = format!("# confluence of {preset} through degree {}\nviolations: {}\n", r.checked_degree, r.violations.len());
            for v in &r.violations {
                let forms: Vec<String> = v.normal_forms.iter().map(|e| e.to_string()).collect();
                text.push_str(&format!("  {}: {}\n", v.monomial, forms.join(" | ")));
            }
            let input = json!({ "preset": preset, "maxDeg": max_deg });
            let result = json!({ "checkedDegree": r.checked_degree, "violations": violations });
            let cert = if r.is_confluent() { "confluent" } else { "not confluent" };
            Ok(plain_payload(input, result, text, cert))
        }
        Command::IrreducibleDims { preset } => {
            let sys = RewriteSystem::preset(preset).map_err(|e| Failure::Usage(e.to_string()))?;
            let t = sys.irreducible_dims(max_deg);
            Ok(table_payload(json!({ "preset": preset, "maxDeg": max_deg }), &t))
        }
        Command::CurvePredict { spec, simple } => {
            let text = match spec.strip_prefix('@') {
                Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?,
                None => spec.clone(),
            };
            let cs = CurveSpec::from_json(&text)?;
            let p = curve::predict(&cs, *simple)?;
            let input = json!({ "spec": cs, "simple": simple });
            let out = format!("{}: {}\n", p.verdict, p.justification);
            Ok(plain_payload(input, serde_json::to_value(&p).expect("serializable"), out, "symbolic"))
        }
        Command::CurveCrosscheck { lines, model } => {
            let jobs: Vec<(usize, ModelId)> = match (lines, model) {
                (Some(n), Some(m)) => vec![(*n, ModelId::parse(m, Some(2))?)],
                (None, None) => verify::crosscheck_matrix(),
                _ => return Err(Failure::Usage("give both --lines and --model, or neither".into())),
            };
            let mut reports = Vec::new();
            let mut text = String::new();
            for (n, id) in &jobs {
                let r = curve::cross_check(*n, id, max_deg)?;
                text.push_str(&format!(
                    "n={} model={} predicted={} dims={:?} agree={}\n",
                    r.lines,
                    r.model,
                    r.predicted.verdict,
                    r.computed.dims(),
                    r.agree
                ));
                reports.push(r);
            }
            let all = reports.iter().all(|r| r.agree);
            let input = json!({
                "jobs": jobs.iter().map(|(n, id)| json!({ "lines": n, "model": id.to_string() })).collect::<Vec<_>>(),
                "maxDeg": max_deg,
            });
            let mut p = plain_payload(input, json!({ "reports": reports, "allAgree": all }), text, if all { "all agree" } else { "disagreement" });
            p.failed = !all;
            Ok(p)
        }
        Command::QuotientIsotypic { group, character } => {
            let g = DiagonalGroupAction::parse(group)?;
            let chi = Character::parse(character)?;
            let d = quotient::isotypic_dims(&g, &chi, max_deg)?;
            Ok(dims_payload(json!({ "group": g, "character": chi.exps, "maxDeg": max_deg }), &d))
        }
        Command::QuotientRend { group } => {
            let g = DiagonalGroupAction::parse(group)?;
            let d = quotient::rend_cohomology_dims(&g, max_deg)?;
            Ok(dims_payload(json!({ "group": g, "maxDeg": max_deg }), &d))
        }
        Command::QuotientCech { group, character } => {
            let g = DiagonalGroupAction::parse(group)?;
            let chi = Character::parse(character)?;
            let d = quotient::hypersurface_cech_dims(&g, &chi, max_deg)?;
            Ok(dims_payload(json!({ "group": g, "character": chi.exps, "maxDeg": max_deg }), &d))
        }
        Command::Verify { suite } => {
            let ids = verify::suite(suite).ok_or_else(|| {
                Failure::Usage(format!("unknown suite `{suite}` (known: {})", verify::SUITES.join(", ")))
            })?;
            let results = verify::run_criteria(&ids, verify::thread_count());
            let mut text = String::new();
            for r in &results {
                text.push_str(&r.line());
                text.push('\n');
            }
            let passed = results.iter().filter(|r| r.passed).count();
            let input = json!({ "suite": suite });
            let result = serde_json::to_value(&results).expect("serializable");
            let mut p = plain_payload(input, result, text, &format!("{passed}/{} criteria passed", results.len()));
            p.failed = passed != results.len();
            Ok(p)
        }
    }
}
