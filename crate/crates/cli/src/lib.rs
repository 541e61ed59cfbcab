//! The `opcalc` command line, as a library so tests can drive it in-process.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use opcalc_core::colimit::{coequalizer, colimit, coproduct, pushout, Arrow, Colimit, FiniteDiagram};
use opcalc_core::dsl;
use opcalc_core::free::{check_triangular, FreeOperad};
use opcalc_core::graded::GradedSpace;
use opcalc_core::operad::{check_morphism, check_operad, Operad, OperadMorphism, TruncationProfile};
use opcalc_core::report::Report;
use opcalc_core::zoo::{augmentation_m_to_n, operad_end, operad_m, operad_n, reduced, reversal_m, EndSign};
use opcalc_core::{Error, Field};

#[derive(Parser, Debug)]
#[command(name = "opcalc", version, about = "Exact computations with truncated symmetric dg operads")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    #[arg(long, default_value_t = 4, global = true)]
    pub max_arity: usize,
    /// Vertex bound for trees in free operads.
    #[arg(long, default_value_t = 3, global = true)]
    pub max_depth: usize,
    #[arg(long, default_value = "F101", global = true)]
    pub field: String,
    /// Seed for the randomized spot checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Operands are `builtin:N`, `builtin:M`, `builtin:End(d1,...,dk)` (basis degrees),
/// any of these with a trailing `+` for the part without constants, or a path
/// to a presentation file. Morphisms are `id:OP`, `rev:OP` (ℳ only) and `aug:OP`
/// (ℳ → 𝒩).
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the operad axiom checks.
    Check { operands: Vec<String> },
    /// Print component dimensions.
    Dims { operand: String },
    /// The free operad on the generators of a presentation file.
    Free { file: String },
    /// Coequalizer of two parallel morphisms.
    Coeq { f: String, g: String },
    /// Coproduct of operands.
    Coprod { operands: Vec<String> },
    /// Pushout of two morphisms with a common source.
    Pushout { f: String, g: String },
    /// Colimit of a finite diagram: objects, then `--arrow SRC:TGT:KIND` with KIND id, rev or aug.
    Colim {
        objects: Vec<String>,
        #[arg(long = "arrow")]
        arrows: Vec<String>,
    },
    /// Check that a map is an operad morphism.
    MorphismCheck { morphism: String },
    /// Both triangle identities of the free/forgetful adjunction for the
    /// generators of a presentation file and an operand.
    TriangularCheck { file: String, operand: String },
}

/// What a run produced: standard output and the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match Session::new(cli).and_then(|mut s| s.dispatch(&cli.command)) {
        Ok((stdout, passed)) => Outcome { stdout, stderr: String::new(), code: if passed { 0 } else { 1 } },
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 },
    }
}

struct Session {
    field: Field,
    profile: TruncationProfile,
    format: Format,
    seed: u64,
    /// keyed by (spec, built for colimits) so equal specs give the same object
    cache: HashMap<(String, bool), Arc<Operad>>,
}

#[derive(Serialize)]
struct OperadSummary {
    operad: String,
    field: String,
    exact: bool,
    dims: BTreeMap<usize, usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

#[derive(Serialize)]
struct CheckOutput {
    passed: bool,
    reports: Vec<Report>,
}

#[derive(Serialize)]
struct ColimitOutput {
    passed: bool,
    result: OperadSummary,
    edges: Vec<String>,
    reports: Vec<Report>,
}

#[derive(Serialize)]
struct FreeOutput {
    #[serde(flatten)]
    summary: OperadSummary,
    basis: BTreeMap<usize, Vec<String>>,
}

fn dims_map(op: &Operad) -> BTreeMap<usize, usize> {
    op.dims().into_iter().enumerate().collect()
}

fn summary(op: &Operad) -> OperadSummary {
    OperadSummary { operad: op.name.clone(), field: op.field().to_string(), exact: op.exact, dims: dims_map(op), notes: op.notes.clone() }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl Session {
    fn new(cli: &Cli) -> Result<Session, Error> {
        Ok(Session {
            field: Field::parse(&cli.field)?,
            profile: TruncationProfile::new(cli.max_arity, cli.max_depth)?,
            format: cli.format,
            seed: cli.seed,
            cache: HashMap::new(),
        })
    }

    /// Builtins entering a coproduct are built with room for a vertex to carry
    /// up to N + D − 1 inputs, which constants make possible.
    fn operand(&mut self, spec: &str, for_colimit: bool) -> Result<Arc<Operad>, Error> {
        let key = (spec.to_string(), for_colimit);
        if let Some(op) = self.cache.get(&key) {
            return Ok(op.clone());
        }
        let (base, strip) = match spec.strip_suffix('+') {
            Some(b) => (b, true),
            None => (spec, false),
        };
        let wide = TruncationProfile { max_arity: self.profile.max_arity + self.profile.max_depth - 1, ..self.profile };
        let prof = if for_colimit && !strip { wide } else { self.profile };
        let op = if let Some(name) = base.strip_prefix("builtin:") {
            match name {
                "N" => operad_n(self.field, prof)?,
                "M" => operad_m(self.field, prof)?,
                _ => {
                    let inner = name.strip_prefix("End(").and_then(|r| r.strip_suffix(')')).ok_or_else(|| usage(format!("unknown builtin `{name}`; use N, M or End(d1,...,dk)")))?;
                    let degrees: Vec<i32> = inner
                        .split(',')
                        .map(|d| d.trim().parse().map_err(|_| usage(format!("`{d}` is not a degree in `{spec}`"))))
                        .collect::<Result<_, _>>()?;
                    operad_end(&GradedSpace::from_degrees(self.field, "e", &degrees), prof, EndSign::Koszul)?
                }
            }
        } else {
            let src = std::fs::read_to_string(base).map_err(|e| usage(format!("cannot read `{base}`: {e}")))?;
            let pres = dsl::parse(&src).map_err(|d| usage(format!("{base}:{d}")))?;
            let built = dsl::build(&pres, self.field, self.profile)?;
            let mut op = (*built.operad).clone();
            op.notes.extend(built.notes);
            op
        };
        let op = Arc::new(if strip { reduced(Arc::new(op))? } else { op });
        self.cache.insert(key, op.clone());
        Ok(op)
    }

    fn arrow(&mut self, kind: &str, source: Arc<Operad>, target: Arc<Operad>) -> Result<OperadMorphism, Error> {
        let is_m = |op: &Operad| op.name == "M" || op.name == "M+";
        match kind {
            "id" if Arc::ptr_eq(&source, &target) => Ok(OperadMorphism::identity(source)),
            "rev" if Arc::ptr_eq(&source, &target) && is_m(&source) => reversal_m(source),
            "aug" if is_m(&source) => augmentation_m_to_n(source, target),
            _ => Err(usage(format!("`{kind}` is not a morphism {} → {}", source.name, target.name))),
        }
    }

    fn morphism(&mut self, spec: &str, for_colimit: bool) -> Result<OperadMorphism, Error> {
        let (kind, op) = spec.split_once(':').ok_or_else(|| usage(format!("`{spec}` is not a morphism; use id:OP, rev:OP or aug:OP")))?;
        let source = self.operand(op, for_colimit)?;
        let target = match kind {
            "aug" => self.operand(if op.ends_with('+') { "builtin:N+" } else { "builtin:N" }, for_colimit)?,
            _ => source.clone(),
        };
        self.arrow(kind, source, target)
    }

    fn dispatch(&mut self, cmd: &Command) -> Result<(String, bool), Error> {
        match cmd {
            Command::Check { operands } => {
                if operands.is_empty() {
                    return Err(usage("check needs at least one operand"));
                }
                let mut reports = Vec::new();
                for spec in operands {
                    let op = self.operand(spec, false)?;
                    for mut r in check_operad(&op, self.seed) {
                        r.check = format!("{}: {}", op.name, r.check);
                        reports.push(r);
                    }
                }
                Ok(self.reports(reports))
            }
            Command::Dims { operand } => {
                let op = self.operand(operand, false)?;
                Ok((self.dims(&op), true))
            }
            Command::Free { file } => {
                let src = std::fs::read_to_string(file).map_err(|e| usage(format!("cannot read `{file}`: {e}")))?;
                let mut pres = dsl::parse(&src).map_err(|d| usage(format!("{file}:{d}")))?;
                pres.rels.clear();
                let built = dsl::build(&pres, self.field, self.profile)?;
                Ok((self.free(&built.free, built.notes), true))
            }
            Command::Coeq { f, g } => {
                let (f, g) = (self.morphism(f, false)?, self.morphism(g, false)?);
                let c = coequalizer(&f, &g, self.profile)?;
                Ok(self.colimit(&c, format!("Coeq({}, {})", f.name, g.name)))
            }
            Command::Coprod { operands } => {
                if operands.is_empty() {
                    return Err(usage("coprod needs at least one operand"));
                }
                let objs = operands.iter().map(|s| self.operand(s, true)).collect::<Result<Vec<_>, _>>()?;
                let c = coproduct(&objs, self.profile)?;
                Ok(self.colimit(&c, c.operad.name.clone()))
            }
            Command::Pushout { f, g } => {
                let (f, g) = (self.morphism(f, false)?, self.morphism(g, false)?);
                let c = pushout(&f, &g, self.profile)?;
                Ok(self.colimit(&c, format!("{}⊔_{}{}", f.target.name, f.source.name, g.target.name)))
            }
            Command::Colim { objects, arrows } => {
                let objs = objects.iter().map(|s| self.operand(s, false)).collect::<Result<Vec<_>, _>>()?;
                let mut list = Vec::new();
                for a in arrows {
                    let parts: Vec<&str> = a.split(':').collect();
                    let [s, t, kind] = parts[..] else { return Err(usage(format!("arrow `{a}` should read SRC:TGT:KIND"))) };
                    let index = |x: &str| x.parse::<usize>().ok().filter(|&i| i < objs.len()).ok_or_else(|| usage(format!("`{x}` is not an object index in `{a}`")));
                    let (s, t) = (index(s)?, index(t)?);
                    let map = self.arrow(kind, objs[s].clone(), objs[t].clone())?;
                    list.push(Arrow { source: s, target: t, map });
                }
                let label = format!("colim({}; {})", objs.iter().map(|o| o.name.as_str()).collect::<Vec<_>>().join(", "), arrows.join(", "));
                let c = colimit(&FiniteDiagram::new(objs, list)?, self.profile)?;
                Ok(self.colimit(&c, label))
            }
            Command::MorphismCheck { morphism } => {
                let m = self.morphism(morphism, false)?;
                Ok(self.reports(vec![check_morphism(&m, self.seed)]))
            }
            Command::TriangularCheck { file, operand } => {
                let src = std::fs::read_to_string(file).map_err(|e| usage(format!("cannot read `{file}`: {e}")))?;
                let mut pres = dsl::parse(&src).map_err(|d| usage(format!("{file}:{d}")))?;
                pres.rels.clear();
                let x = dsl::build(&pres, self.field, self.profile)?.free.x().clone();
                let p = self.operand(operand, false)?;
                let t = check_triangular(x, p, self.profile)?;
                Ok(self.reports(vec![t.free_side, t.module_side]))
            }
        }
    }

    fn dims(&self, op: &Operad) -> String {
        match self.format {
            Format::Json => format!("{{\"dims\": {}}}\n", serde_json::to_string(&dims_map(op)).expect("serializable")),
            Format::Table => table(&summary(op)),
        }
    }

    fn free(&self, fx: &FreeOperad, notes: Vec<String>) -> String {
        let mut s = summary(&fx.operad);
        s.notes.extend(notes);
        let basis = (0..=fx.operad.max_arity()).map(|n| (n, (0..fx.operad.dim(n)).map(|b| fx.tree_name(fx.data.basis_tree(n, b))).collect())).collect();
        match self.format {
            Format::Json => json(&FreeOutput { summary: s, basis }),
            Format::Table => {
                let mut out = table(&s);
                for (n, names) in &basis {
                    if !names.is_empty() {
                        let _ = writeln!(out, "basis {n}: {}", names.join(", "));
                    }
                }
                out
            }
        }
    }

    fn colimit(&self, c: &Colimit, label: String) -> (String, bool) {
        let mut reports = check_operad(&c.operad, self.seed);
        reports.extend(c.edges.iter().map(|e| {
            let mut r = check_morphism(e, self.seed);
            r.check = format!("edge {}: {}", e.name, r.check);
            r
        }));
        let passed = reports.iter().all(|r| r.passed);
        let mut result = summary(&c.operad);
        result.operad = label;
        let out = ColimitOutput { passed, result, edges: c.edges.iter().map(|e| e.name.clone()).collect(), reports };
        let text = match self.format {
            Format::Json => json(&out),
            Format::Table => {
                let mut t = table(&out.result);
                t.push_str(&report_table(&out.reports));
                t
            }
        };
        (text, passed)
    }

    fn reports(&self, reports: Vec<Report>) -> (String, bool) {
        let passed = reports.iter().all(|r| r.passed);
        let text = match self.format {
            Format::Json => json(&CheckOutput { passed, reports }),
            Format::Table => report_table(&reports),
        };
        (text, passed)
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn table(s: &OperadSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} over {}{}", s.operad, s.field, if s.exact { "" } else { " (truncated)" });
    let _ = writeln!(out, "arity  dim");
    for (n, d) in &s.dims {
        let _ = writeln!(out, "{n:>5}  {d}");
    }
    for n in &s.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

fn report_table(reports: &[Report]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "{} {}  (checked {}, skipped {})", if r.passed { "PASS" } else { "FAIL" }, r.check, r.checked, r.skipped);
        for w in &r.failures {
            let _ = writeln!(out, "    at {}: expected {}, found {}", w.at, w.expected, w.found);
        }
        if r.failure_count > r.failures.len() {
            let _ = writeln!(out, "    ... {} failures in all", r.failure_count);
        }
        for n in &r.notes {
            let _ = writeln!(out, "    note: {n}");
        }
    }
    out
}
