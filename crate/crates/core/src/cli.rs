//! Command line front end. `run` does all the work and returns the exit code
//! with the rendered report, so tests can drive it without a process.
//!
//! Exit codes: 0 pass, 1 fail, 2 parse or usage error, 3 capability refusal,
//! 4 resource limit.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::comodule::{invariants, Comodule};
use crate::complex::ext_dims;
use crate::error::Error;
use crate::format::{comodule_section, fixture_text, load, parse_document, poly_to_expr, Definition, FIXTURES};
use crate::graded::weight_dims;
use crate::monoidal::{chom, ctensor, dualizability, internal_adjunction, resolution_witness, unit_chom_witness, ResolutionOutcome};
use crate::oracle::compare_suite;
use crate::ring::Budget;

#[derive(Parser, Debug)]
#[command(name = "hopf-comod", version, about = "Exact computations with comodules over Hopf algebroids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Definition file, or an operand binding such as `N=A_mod_x2`.
    #[arg(long, global = true)]
    pub input: Vec<String>,
    #[arg(long, global = true, value_enum)]
    pub fixture: Option<FixtureId>,
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Reduction steps allowed per Gröbner basis computation.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random instances per comparison in `oracle-compare`.
    #[arg(long, global = true, default_value_t = 100)]
    pub count: usize,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Check the Hopf algebroid axioms.
    CheckAlgebroid,
    /// Check the comodule axioms for `M`, or for every declared comodule.
    CheckComodule,
    /// Tensor product `M ⊗ N` with the diagonal coaction.
    Tensor,
    /// Internal hom `chom(M, N)`.
    Chom,
    /// Internal adjunction for `P ⊗ M → N` and the unit isomorphism.
    Adjunction,
    /// Duality certificate for `M` against every declared comodule.
    Dualizable,
    /// Primitives of `N`.
    Invariants,
    /// Surjection onto `M` from sums of declared comodules.
    ResolutionWitness,
    /// Ext dimensions of `M` through `--depth` from the cobar complex.
    CobarExt,
    /// Homology of complex `C`.
    ComplexHomology,
    /// List the built-in fixtures, or print one with `--fixture`.
    Fixtures,
    /// Compare with the graded oracle on random instances.
    OracleCompare,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureId {
    #[value(name = "F1")]
    F1,
    #[value(name = "F2")]
    F2,
    #[value(name = "F3")]
    F3,
}

impl FixtureId {
    fn id(self) -> &'static str {
        match self {
            FixtureId::F1 => "F1",
            FixtureId::F2 => "F2",
            FixtureId::F3 => "F3",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
}

/// Sorted key-value report.
struct Report {
    status: Status,
    fields: BTreeMap<String, Value>,
}

impl Report {
    fn new() -> Self {
        Report {
            status: Status::Pass,
            fields: BTreeMap::new(),
        }
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.fields.insert(key.to_string(), v.into());
    }

    fn require(&mut self, ok: bool) {
        if !ok {
            self.status = Status::Fail;
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Invalid(_) => 2,
        Error::Capability(_) => 3,
        Error::ResourceLimit(_) => 4,
        Error::Integrity(_) => 1,
    }
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::CheckAlgebroid => "check-algebroid",
        Command::CheckComodule => "check-comodule",
        Command::Tensor => "tensor",
        Command::Chom => "chom",
        Command::Adjunction => "adjunction",
        Command::Dualizable => "dualizable",
        Command::Invariants => "invariants",
        Command::ResolutionWitness => "resolution-witness",
        Command::CobarExt => "cobar-ext",
        Command::ComplexHomology => "complex-homology",
        Command::Fixtures => "fixtures",
        Command::OracleCompare => "oracle-compare",
    }
}

/// Where the definition comes from plus the operand bindings.
struct Inputs {
    source: String,
    def: Definition,
    bindings: BTreeMap<String, String>,
}

impl Inputs {
    fn comodule(&self, key: &str) -> crate::Result<(String, Comodule)> {
        let name = self.bindings.get(key).cloned().unwrap_or_else(|| "unit".to_string());
        match self.def.comodule(&name) {
            Some(c) => Ok((name, c.clone())),
            None if name == "unit" => Ok((name, Comodule::unit(&self.def.algebroid))),
            None => Err(Error::Invalid(format!("no comodule named {name} (bound to {key})"))),
        }
    }

    /// Every declared comodule, sorted by name.
    fn all(&self) -> Vec<(String, Comodule)> {
        let mut v = self.def.comodules.clone();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

fn read_inputs(cli: &Cli, budget: Budget) -> crate::Result<Inputs> {
    let mut files = Vec::new();
    let mut bindings = BTreeMap::new();
    for i in &cli.input {
        match i.split_once('=') {
            Some((k, v)) if !k.is_empty() && !v.is_empty() && !k.contains('/') => {
                if bindings.insert(k.to_string(), v.to_string()).is_some() {
                    return Err(Error::Invalid(format!("operand {k} bound twice")));
                }
            }
            _ => files.push(PathBuf::from(i)),
        }
    }
    let (source, text) = match (files.as_slice(), cli.fixture) {
        ([], Some(f)) => (format!("fixture {}", f.id()), fixture_text(f.id()).unwrap().to_string()),
        ([p], None) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", p.display())))?;
            (format!("file {}", p.display()), text)
        }
        ([], None) => return Err(Error::Invalid("give a definition with --input FILE or --fixture".into())),
        _ => return Err(Error::Invalid("give exactly one definition file or fixture".into())),
    };
    Ok(Inputs {
        source,
        def: load(&text, budget)?,
        bindings,
    })
}

fn dim_value(d: Option<usize>) -> Value {
    match d {
        Some(d) => json!(d),
        None => json!("infinite"),
    }
}

fn weights_value(m: &Comodule) -> Option<Value> {
    let w = weight_dims(m).ok()?;
    Some(Value::Object(w.into_iter().map(|(k, d)| (k.to_string(), json!(d))).collect()))
}

fn describe(r: &mut Report, m: &Comodule) -> crate::Result<()> {
    r.set("generators", m.ngens());
    r.set("kdim", dim_value(m.kdim()?));
    if let Some(w) = weights_value(m) {
        r.set("weights", w);
    }
    let ok = m.check()?.passed();
    r.set("axioms", if ok { "pass" } else { "fail" });
    r.require(ok);
    r.set("result", comodule_section("result", m).to_string_doc());
    Ok(())
}

trait SectionText {
    fn to_string_doc(&self) -> String;
}

impl SectionText for crate::format::Section {
    fn to_string_doc(&self) -> String {
        crate::format::Document {
            sections: vec![self.clone()],
        }
        .to_string()
    }
}

fn execute(cli: &Cli, r: &mut Report) -> crate::Result<()> {
    let budget = cli.budget.map_or(Budget::default(), |b| Budget { max_reductions: b });
    if cli.command == Command::Fixtures {
        return fixtures(cli, r);
    }
    let inp = read_inputs(cli, budget)?;
    r.set("source", inp.source.clone());
    let alg = inp.def.algebroid.clone();
    r.set("algebroid", alg.name.clone());
    match cli.command {
        Command::Fixtures => unreachable!(),
        Command::CheckAlgebroid => {
            let rep = alg.check()?;
            let mut checks = serde_json::Map::new();
            for c in &rep.checks {
                let v = match (&c.witness, c.optional) {
                    (None, _) => "pass".to_string(),
                    (Some(w), true) => format!("optional, does not hold: {w}"),
                    (Some(w), false) => w.clone(),
                };
                checks.insert(c.name.clone(), json!(v));
            }
            r.set("checks", Value::Object(checks));
            r.set("flatness", alg.flatness.label());
            r.require(rep.passed());
        }
        Command::CheckComodule => {
            let targets = if inp.bindings.contains_key("M") {
                vec![inp.comodule("M")?]
            } else {
                inp.all()
            };
            let mut all = serde_json::Map::new();
            for (name, m) in targets {
                let rep = m.check()?;
                let mut checks = serde_json::Map::new();
                for c in &rep.checks {
                    checks.insert(c.name.clone(), json!(c.witness.clone().unwrap_or_else(|| "pass".into())));
                }
                all.insert(name, Value::Object(checks));
                r.require(rep.passed());
            }
            r.set("comodules", Value::Object(all));
        }
        Command::Tensor => {
            let (mn, m) = inp.comodule("M")?;
            let (nn, n) = inp.comodule("N")?;
            r.set("operands", json!([mn, nn]));
            describe(r, &ctensor(&m, &n)?)?;
        }
        Command::Chom => {
            let (mn, m) = inp.comodule("M")?;
            let (nn, n) = inp.comodule("N")?;
            r.set("operands", json!([mn, nn]));
            let h = chom(&m, &n)?;
            r.set("backend", h.backend_name());
            describe(r, &h.comodule)?;
            if h.comodule.kdim()?.is_some() {
                r.set("invariants", invariants(&h.comodule)?.dim());
            }
        }
        Command::Adjunction => {
            let (pn, p) = inp.comodule("P")?;
            let (mn, m) = inp.comodule("M")?;
            let (nn, n) = inp.comodule("N")?;
            r.set("operands", json!([pn, mn, nn]));
            let adj = internal_adjunction(&p, &m, &n)?.verify()?;
            let (_, unit) = unit_chom_witness(&n)?;
            let unit = unit.verify()?;
            r.set("internal_adjunction", adj);
            r.set("unit_iso", unit);
            r.require(adj && unit);
        }
        Command::Dualizable => {
            let (mn, m) = inp.comodule("M")?;
            r.set("operands", json!([mn]));
            let testers = inp.all();
            let cert = dualizability(&m, &testers.iter().map(|t| t.1.clone()).collect::<Vec<_>>())?;
            let mut per = serde_json::Map::new();
            for ((name, _), c) in testers.iter().zip(&cert.canonical) {
                per.insert(name.clone(), json!(c.backward.is_some()));
            }
            r.set("testers", Value::Object(per));
            r.set("triangles", cert.triangles);
            r.set("dual_generators", cert.dual.ngens());
            r.set("certificate", cert.to_string());
            r.require(cert.verified());
        }
        Command::Invariants => {
            let (nn, n) = inp.comodule("N")?;
            r.set("operands", json!([nn]));
            let inv = invariants(&n)?;
            r.set("dim", inv.dim());
            let basis: Vec<Value> = inv
                .basis
                .iter()
                .map(|v| json!(v.iter().map(|p| poly_to_expr(n.a0(), p).to_string()).collect::<Vec<_>>()))
                .collect();
            r.set("basis", basis);
        }
        Command::ResolutionWitness => {
            let (mn, m) = inp.comodule("M")?;
            r.set("operands", json!([mn]));
            let fam = inp.all();
            let members: Vec<Comodule> = fam.iter().map(|f| f.1.clone()).collect();
            match resolution_witness(&members, &m)? {
                ResolutionOutcome::Found(w) => {
                    let names: Vec<&str> = w.summands.iter().map(|&i| fam[i].0.as_str()).collect();
                    r.set("summands", json!(names));
                    let surj = w.map.map.is_surjective()?;
                    r.set("surjective", surj);
                    r.require(surj);
                }
                ResolutionOutcome::NotFound { reason } => {
                    r.set("not_found", reason);
                    r.require(false);
                }
            }
        }
        Command::CobarExt => {
            let (mn, m) = inp.comodule("M")?;
            r.set("operands", json!([mn]));
            r.set("depth", cli.depth);
            r.set("ext_dims", ext_dims(&m, cli.depth)?);
        }
        Command::ComplexHomology => {
            let name = inp
                .bindings
                .get("C")
                .ok_or_else(|| Error::Invalid("bind a complex with --input C=NAME".into()))?;
            let c = inp
                .def
                .complex(name)
                .ok_or_else(|| Error::Invalid(format!("no complex named {name}")))?;
            r.set("operands", json!([name]));
            let mut h = serde_json::Map::new();
            for n in c.degrees() {
                h.insert(n.to_string(), dim_value(c.homology(n)?.kdim()?));
            }
            r.set("homology", Value::Object(h));
        }
        Command::OracleCompare => {
            let rep = compare_suite(&alg, cli.seed, cli.count)?;
            let mut counts = serde_json::Map::new();
            for kind in ["chom", "ctensor", "invariants", "tensor_complexes"] {
                let (ok, all) = rep.count(kind);
                counts.insert(kind.into(), json!(format!("{ok}/{all}")));
            }
            r.set("agreement", Value::Object(counts));
            let bad: Vec<String> = rep
                .cases
                .iter()
                .filter(|c| !c.agree)
                .map(|c| format!("{} #{}: {}", c.kind, c.index, c.detail))
                .collect();
            r.require(bad.is_empty());
            r.set("disagreements", bad);
        }
    }
    Ok(())
}

fn fixtures(cli: &Cli, r: &mut Report) -> crate::Result<()> {
    match cli.fixture {
        None => {
            let list: serde_json::Map<String, Value> =
                FIXTURES.iter().map(|(id, d, _)| (id.to_string(), json!(d))).collect();
            r.set("fixtures", Value::Object(list));
        }
        Some(f) => {
            let doc = parse_document(fixture_text(f.id()).unwrap())?;
            r.set("source", format!("fixture {}", f.id()));
            r.set("definition", doc.to_string());
        }
    }
    Ok(())
}

fn render_text(command: &str, seed: u64, status: &str, fields: &BTreeMap<String, Value>) -> String {
    let mut out = format!("hopf-comod {command}\nseed: {seed}\nstatus: {status}\n");
    for (k, v) in fields {
        match v {
            Value::String(s) if s.contains('\n') => {
                out.push_str(&format!("{k}: |\n"));
                for line in s.lines() {
                    out.push_str(&format!("  {line}\n"));
                }
            }
            Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
            Value::Object(m) => {
                out.push_str(&format!("{k}:\n"));
                for (kk, vv) in m {
                    match vv {
                        Value::String(s) => out.push_str(&format!("  {kk}: {s}\n")),
                        other => out.push_str(&format!("  {kk}: {other}\n")),
                    }
                }
            }
            other => out.push_str(&format!("{k}: {other}\n")),
        }
    }
    out
}

/// Runs the command line and returns the exit code and everything written
/// to standard output.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return (code, e.render().to_string());
        }
    };
    let mut r = Report::new();
    let (code, status) = match execute(&cli, &mut r) {
        Ok(()) => match r.status {
            Status::Pass => (0, "pass"),
            Status::Fail => (1, "fail"),
        },
        Err(e) => {
            r.set("error", e.to_string());
            let code = exit_code(&e);
            (
                code,
                match code {
                    2 => "parse-error",
                    3 => "refused",
                    4 => "resource-limit",
                    _ => "fail",
                },
            )
        }
    };
    let command = command_name(cli.command);
    let out = match cli.format {
        OutputFormat::Text => render_text(command, cli.seed, status, &r.fields),
        OutputFormat::Json => {
            let mut all = r.fields.clone();
            all.insert("command".into(), json!(command));
            all.insert("seed".into(), json!(cli.seed));
            all.insert("status".into(), json!(status));
            let mut s = serde_json::to_string_pretty(&all).expect("json");
            s.push('\n');
            s
        }
    };
    (code, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let (c, _) = run(["hopf-comod", "check-algebroid", "--fixture", "F1"]);
        assert_eq!(c, 0);
        let (c, _) = run(["hopf-comod", "check-algebroid"]);
        assert_eq!(c, 2);
        let (c, _) = run(["hopf-comod", "cobar-ext", "--fixture", "F3", "--input", "M=unit"]);
        assert_eq!(c, 3);
        let (c, _) = run(["hopf-comod", "check-algebroid", "--fixture", "F3", "--budget", "0"]);
        assert_eq!(c, 4);
        let (c, _) = run(["hopf-comod", "dualizable", "--fixture", "F3", "--input", "M=A_mod_x2"]);
        assert!(c == 1 || c == 3, "{c}");
    }
}
