//! Command-line front-end over `pvkit-core`.
//!
//! Every command reads JSON or expression inputs, calls one library
//! operation, and renders a human report followed by a JSON block with
//! sorted keys. Exit codes: 0 on success, 1 on a negative or undecided
//! answer, 2 on invalid input.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Parser;
use serde_json::{json, Map, Value};

use pvkit_core::cocycle::{
    are_equivalent, construction_f, construction_g, enumerate_h1, is_cocycle, Cocycle, Elem, Equivalence,
    GammaAction,
};
use pvkit_core::dcsa::{
    adjoint_system, is_split, iso_witness_check, iso_witness_check_closed, splitting_degree, DeltaCSA,
};
use pvkit_core::diffmod::{char_lattice, diag_group, is_gauge_witness, rank1_group, GaugeWitness, LinSys, RMat};
use pvkit_core::io::{format_constant, format_entries, H1File, HopfGaloisFile, MatrixFile, PhiObjectFile};
use pvkit_core::partial::rational_solution_rank1;
use pvkit_core::phihopf::{can_map, descent_check, hopf_galois_failures, FinHopfGalois};
use pvkit_core::torsor::{from_module, is_trivial_torsor, splitting_report, torsor_iso_check, SplitReport};
use pvkit_core::{parse, Error, RatFunc};

/// Bundled extension fixtures, addressable as `builtin:NAME`.
pub const BUILTINS: [(&str, &str); 5] = [
    ("kummer2", include_str!("../fixtures/kummer2.json")),
    ("kummer3", include_str!("../fixtures/kummer3.json")),
    ("kummer4", include_str!("../fixtures/kummer4.json")),
    ("split3", include_str!("../fixtures/split3.json")),
    ("corrupted", include_str!("../fixtures/corrupted.json")),
];

#[derive(Parser, Debug, Clone)]
#[command(name = "pvkit", version, about = "Exact checks for differential modules, torsors, descent and twisted forms")]
pub struct Cli {
    /// Command, as one word (`h1-enumerate`) or two (`h1 enumerate`).
    #[arg(required = true, num_args = 1..=2)]
    pub command: Vec<String>,
    /// Input files, in the order the command expects; `builtin:NAME` selects a bundled fixture.
    #[arg(long = "input", short = 'i')]
    pub inputs: Vec<String>,
    /// Expression inputs, used instead of a matrix file where one entry per expression suffices.
    #[arg(long = "expr")]
    pub exprs: Vec<String>,
    /// Emit only the JSON block.
    #[arg(long)]
    pub json: bool,
    /// Level `N` of `zeta`; overrides the `zeta_level` of every input file.
    #[arg(long = "zeta-level")]
    pub zeta_level: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    GaugeCheck,
    Rank1Classify,
    DiagGroup,
    TorsorIso,
    SplitReport,
    HopfCheck,
    DescentRoundtrip,
    H1Enumerate,
    H1Check,
    H1Twist,
    H1Untwist,
    DcsaCheckIso,
    DcsaSplitDegree,
    DcsaAdjoint,
}

impl Command {
    pub const ALL: [Command; 14] = [
        Command::GaugeCheck,
        Command::Rank1Classify,
        Command::DiagGroup,
        Command::TorsorIso,
        Command::SplitReport,
        Command::HopfCheck,
        Command::DescentRoundtrip,
        Command::H1Enumerate,
        Command::H1Check,
        Command::H1Twist,
        Command::H1Untwist,
        Command::DcsaCheckIso,
        Command::DcsaSplitDegree,
        Command::DcsaAdjoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::GaugeCheck => "gauge-check",
            Command::Rank1Classify => "rank1-classify",
            Command::DiagGroup => "diag-group",
            Command::TorsorIso => "torsor-iso",
            Command::SplitReport => "split-report",
            Command::HopfCheck => "hopf-check",
            Command::DescentRoundtrip => "descent-roundtrip",
            Command::H1Enumerate => "h1-enumerate",
            Command::H1Check => "h1-check",
            Command::H1Twist => "h1-twist",
            Command::H1Untwist => "h1-untwist",
            Command::DcsaCheckIso => "dcsa-check-iso",
            Command::DcsaSplitDegree => "dcsa-split-degree",
            Command::DcsaAdjoint => "dcsa-adjoint",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let alias = match s {
            "torsor-iso-check" => "torsor-iso",
            "torsor-split-report" => "split-report",
            other => other,
        };
        Command::ALL
            .into_iter()
            .find(|c| c.name() == alias)
            .ok_or_else(|| format!("unknown command '{s}'"))
    }
}

/// An input error, reported with exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub file: Option<String>,
    pub reason: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.file {
            Some(file) => write!(f, "error: {file}: {}", self.reason),
            None => write!(f, "error: {}", self.reason),
        }
    }
}

fn input_err(file: Option<&str>, e: impl fmt::Display) -> InputError {
    InputError { file: file.map(str::to_string), reason: e.to_string() }
}

type CliResult<T> = Result<T, InputError>;

/// Rendered output and exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

struct Report {
    lines: Vec<String>,
    data: Map<String, Value>,
    code: i32,
}

impl Report {
    fn new(command: Command) -> Self {
        let mut data = Map::new();
        data.insert("command".into(), json!(command.name()));
        Report { lines: vec![format!("command: {}", command.name())], data, code: 0 }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn set(&mut self, key: &str, v: Value) {
        self.data.insert(key.into(), v);
    }

    fn negative_if(&mut self, cond: bool) {
        if cond {
            self.code = 1;
        }
    }

    fn render(mut self, json_only: bool) -> Outcome {
        self.data.insert("exit_code".into(), json!(self.code));
        let block = serde_json::to_string_pretty(&Value::Object(self.data)).expect("serializable");
        let stdout = if json_only {
            format!("{block}\n")
        } else {
            format!("{}\n\n{block}\n", self.lines.join("\n"))
        };
        Outcome { stdout, stderr: String::new(), code: self.code }
    }
}

/// Loaded inputs with the command-line overrides applied.
struct Inputs<'a> {
    cli: &'a Cli,
}

impl<'a> Inputs<'a> {
    fn text(&self, idx: usize, what: &str) -> CliResult<(String, String)> {
        let name = self
            .cli
            .inputs
            .get(idx)
            .ok_or_else(|| input_err(None, format!("missing input {} ({what})", idx + 1)))?;
        let text = if let Some(b) = name.strip_prefix("builtin:") {
            BUILTINS
                .iter()
                .find(|(n, _)| *n == b)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| input_err(Some(name), "unknown builtin fixture"))?
        } else {
            std::fs::read_to_string(PathBuf::from(name)).map_err(|e| input_err(Some(name), e))?
        };
        let text = match self.cli.zeta_level {
            Some(level) => {
                let mut v: Value = serde_json::from_str(&text)
                    .map_err(|e| input_err(Some(name), format!("malformed JSON: {e}")))?;
                if let Value::Object(m) = &mut v {
                    m.insert("zeta_level".into(), json!(level));
                }
                v.to_string()
            }
            None => text,
        };
        Ok((name.clone(), text))
    }

    fn matrix_file(&self, idx: usize, what: &str) -> CliResult<(String, MatrixFile)> {
        let (name, text) = self.text(idx, what)?;
        let f = MatrixFile::from_json(&text).map_err(|e| input_err(Some(&name), e))?;
        Ok((name, f))
    }

    fn matrix(&self, idx: usize, what: &str) -> CliResult<RMat> {
        let (name, f) = self.matrix_file(idx, what)?;
        f.matrix().map_err(|e| input_err(Some(&name), e))
    }

    fn level(&self) -> u32 {
        self.cli.zeta_level.unwrap_or(1)
    }

    /// Diagonal entries from `--expr` values, or from a diagonal matrix file.
    fn diagonal(&self) -> CliResult<Vec<RatFunc>> {
        if !self.cli.exprs.is_empty() {
            return self
                .cli
                .exprs
                .iter()
                .enumerate()
                .map(|(i, e)| parse(e, self.level()).map_err(|err| input_err(Some(&format!("--expr {}", i + 1)), err)))
                .collect();
        }
        let (name, f) = self.matrix_file(0, "diagonal matrix")?;
        let m = f.matrix().map_err(|e| input_err(Some(&name), e))?;
        if !m.is_diagonal() {
            return Err(input_err(Some(&name), "matrix is not diagonal"));
        }
        Ok(m.diag())
    }

    fn extension(&self, idx: usize) -> CliResult<FinHopfGalois> {
        let (name, text) = self.text(idx, "extension")?;
        HopfGaloisFile::from_json(&text)
            .and_then(|f| f.extension())
            .map_err(|e| input_err(Some(&name), e))
    }

    fn h1(&self) -> CliResult<(String, H1File, GammaAction)> {
        let (name, text) = self.text(0, "cohomology job")?;
        let f = H1File::from_json(&text).map_err(|e| input_err(Some(&name), e))?;
        let act = f.action().map_err(|e| input_err(Some(&name), e))?;
        Ok((name, f, act))
    }
}

fn mat_json(m: &RMat) -> Value {
    let level = m.level();
    json!({ "zeta_level": level, "entries": format_entries(m, level) })
}

fn mat_lines(m: &RMat) -> Vec<String> {
    m.to_rows()
        .iter()
        .map(|r| format!("  [{}]", r.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")))
        .collect()
}

fn cocycle_level(a: &Cocycle) -> u32 {
    a.values.iter().flat_map(|v| v.entries().iter().map(|c| c.level())).fold(1, num_lcm)
}

fn num_lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn cocycle_json(a: &Cocycle, act: &GammaAction) -> Value {
    let level = cocycle_level(a);
    let labels = act.group.labels();
    let values: Map<String, Value> = a
        .values
        .iter()
        .zip(labels)
        .map(|(v, l)| {
            let val = if v.rows() == 1 && v.cols() == 1 {
                json!(format_constant(v.get(0, 0), level))
            } else {
                json!(v
                    .to_rows()
                    .iter()
                    .map(|r| r.iter().map(|c| format_constant(c, level)).collect::<Vec<_>>())
                    .collect::<Vec<_>>())
            };
            (l.clone(), val)
        })
        .collect();
    json!({ "zeta_level": level, "values": values })
}

fn elem_string(v: &Elem) -> String {
    if v.rows() == 1 && v.cols() == 1 {
        v.get(0, 0).to_string()
    } else {
        v.to_rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn cocycle_line(a: &Cocycle, act: &GammaAction) -> String {
    let parts: Vec<String> = a
        .values
        .iter()
        .zip(act.group.labels())
        .map(|(v, l)| format!("{l} -> {}", elem_string(v)))
        .collect();
    parts.join(", ")
}

fn split_json(r: &SplitReport) -> Value {
    json!({
        "group": r.group.as_ref().map(|g| g.to_string()),
        "degree": r.degree,
        "is_bound": r.is_bound,
        "note": r.minimal_field_note,
    })
}

fn lib_err(file: &str) -> impl Fn(Error) -> InputError + '_ {
    move |e| input_err(Some(file), e)
}

fn gauge_check(inp: &Inputs, rep: &mut Report) -> CliResult<()> {
    let a = LinSys::new(inp.matrix(0, "system A")?).map_err(|e| input_err(inp.cli.inputs.first().map(|s| s.as_str()), e))?;
    let b = LinSys::new(inp.matrix(1, "system B")?).map_err(|e| input_err(inp.cli.inputs.get(1).map(|s| s.as_str()), e))?;
    let p_name = inp.cli.inputs.get(2).cloned().unwrap_or_default();
    let p = GaugeWitness::new(inp.matrix(2, "witness P")?).map_err(lib_err(&p_name))?;
    let ok = is_gauge_witness(&a, &b, &p).map_err(lib_err(&p_name))?;
    rep.line(format!("P'P^-1 + PAP^-1 = B: {}", if ok { "yes" } else { "no" }));
    rep.set("valid", json!(ok));
    rep.negative_if(!ok);
    Ok(())
}

fn rank1_classify(inp: &Inputs, rep: &mut Report) -> CliResult<()> {
    let d = inp.diagonal()?;
    if d.len() != 1 {
        return Err(input_err(None, "rank1-classify takes exactly one coefficient"));
    }
    let a = &d[0];
    let level = a.level().max(inp.level());
    let g = rank1_group(a, level).map_err(|e| input_err(None, e))?;
    let report = splitting_report(&from_module(&LinSys::scalar(a.clone())), level).map_err(|e| input_err(None, e))?;
    rep.line(format!("a = {a}"));
    rep.line(format!("result: {report}"));
    rep.set("a", json!(a.to_string()));
    rep.set("group", json!(g.to_string()));
    rep.set("splitting_degree", json!(report.degree));
    if let Some(y) = rational_solution_rank1(a, level).map_err(|e| input_err(None, e))? {
        rep.line(format!("rational solution: y = {y}"));
        rep.set("rational_solution", json!(y.to_string()));
    }
    Ok(())
}

fn diag_group_cmd(inp: &Inputs, rep: &mut Report) -> CliResult<()> {
    let d = inp.diagonal()?;
    let level = d.iter().map(|f| f.level()).fold(inp.level(), num_lcm);
    let g = diag_group(&d, level).map_err(|e| input_err(None, e))?;
    let lattice = char_lattice(&d, level).map_err(|e| input_err(None, e))?;
    let basis: Vec<Vec<String>> = lattice.basis.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    rep.line(format!("entries: {}", d.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")));
    rep.line(format!("character lattice basis: {}", if basis.is_empty() {
        "(none)".to_string()
    } else {
        basis.iter().map(|r| format!("({})", r.join(", "))).collect::<Vec<_>>().join(" ")
    }));
    rep.line(format!("group: {g}"));
    rep.set("group", json!(g.to_string()));
    rep.set("torus_rank", json!(g.torus_rank));
    rep.set("finite_factors", json!(g.finite_factors));
    rep.set("lattice_basis", json!(basis));
    Ok(())
}

fn torsor_iso(inp: &Inputs, rep: &mut Report) -> CliResult<()> {
    let y = from_module(&LinSys::new(inp.matrix(0, "torsor Y")?).map_err(|e| input_err(None, e))?);
    let z = from_module(&LinSys::new(inp.matrix(1, "torsor Z")?).map_err(|e| input_err(None, e))?);
    let p_name = inp.cli.inputs.get(2).cloned().unwrap_or_default();
    let p = GaugeWitness::new(inp.matrix(2, "witness P")?).map_err(lib_err(&p_name))?;
    let ok = torsor_iso_check(&y, &z, &p).map_err(lib_err(&p_name))?;
    rep.line(format!("x -> P.x is a torsor isomorphism: {}", if ok { "yes" } else { "no" }));
    rep.set("isomorphism", json!(ok));
    rep.negative_if(!ok);
    Ok(())
}

fn split_report_cmd(inp: &Inputs, rep: &mut Report) -> CliResult<()> {
    let name = inp.cli.inputs.first().cloned().unwrap_or_default();
    let m = inp.matrix(0, "torsor matrix")?;
    let level = m.level().max(inp.level());
    let y = from_module(&LinSys::new(m).map_err(lib_err(&name))?);
    let r = splitting_report(&y, level).map_err(lib_err(&name))?;
    let t = is_trivial_torsor(&y, None, level).map_err(lib_err(&name))?;
    rep.line(format!("result: {r}"));
    rep.line(format!("note: {}", r.minimal_field_note));
    rep.line(format!("torsor: {t}"));
    rep.set("split", split_json(&r));
    rep.set("triviality", json!(t.to_string()));
    Ok(())
}

fn hopf_check(inp: &Inputs, rep: &mut Report) -> CliResult<()> {
    let s = inp.extension(0)?;
    let failures = hopf_galois_failures(&s);
    let can = can_map(&s);
    let rank = can.rank();
    rep.line(format!("dimension {} over F, group of order {}", s.dim(), s.group().order()));
    rep.line(format!("canonical map rank: {rank} of {}", can.rows().min(can.cols())));
    if failures.is_empty() {
        rep.line("Hopf-Galois: yes");
    } else {
        rep.line("Hopf-Galois: no");
        for f in &failures {
            rep.line(format!("  {f}"));
        }
    }
    rep.set("dimension", json!(s.dim()));
    rep.set("group_order", json!(s.group().order()));
    rep.set("can_rank", json!(rank));
    rep.set("hopf_galois", json!(failures.is_empty()));
    rep.set("failures", json!(failures));
    rep.negative_if(!failures.is_empty());
    Ok(())
}

fn descent_roundtrip(inp: &Inputs, rep: &mut Report) -> CliResult<()> {
    let (name, text) = inp.text(0, "Φ-object")?;
    let m = PhiObjectFile::from_json(&text).and_then(|f| f.object()).map_err(lib_err(&name))?;
    let s = inp.extension(1)?;
    let ext_name = inp.cli.inputs.get(1).cloned().unwrap_or_default();
    let c = descent_check(&m, &s).map_err(lib_err(&ext_name))?;
    let yn = |b: bool| if b { "yes" } else { "no" };
    rep.line(format!("object of rank {} with {} structure maps", m.rank, m.maps.len()));
    rep.line(format!("coinvariants: dimension {}", c.coinvariant_dim));
    rep.line(format!("m -> m(x)1 is a Phi-isomorphism onto them: {}", yn(c.iso)));
    rep.line(format!("multiplication map bijective: {}", yn(c.mu_bijective)));
    rep.set("coinvariant_dim", json!(c.coinvariant_dim));
    rep.set("iso", json!(c.iso));
    rep.set("mu_bijective", json!(c.mu_bijective));
    rep.negative_if(!c.ok());
    Ok(())
}

fn h1_enumerate(inp: &Inputs, rep: &mut Report) -> CliResult<()> {
    let (name, _, act) = inp.h1()?;
    let classes = enumerate_h1(&act).map_err(lib_err(&name))?;
    rep.line(format!("H^1({} acting on {})", group_name(&act), act.target));
    rep.line(format!("number of classes: {}", classes.len()));
    for (i, c) in classes.iter().enumerate() {
        rep.line(format!("  [{i}] {}", cocycle_line(c, &act)));
    }
    rep.set("target", json!(act.target.to_string()));
    rep.set("count", json!(classes.len()));
    rep.set("classes", json!(classes.iter().map(|c| cocycle_json(c, &act)).collect::<Vec<_>>()));
    Ok(())
}

fn group_name(act: &GammaAction) -> String {
    format!("group of order {}", act.group.order())
}

fn equivalence_json(e: &Equivalence, act: &GammaAction) -> Value {
    let witness = match e {
        Equivalence::Equivalent(Some(c)) => Some(cocycle_json(&Cocycle { values: vec![c.clone()] }, act)["values"]
            .as_object()
            .and_then(|m| m.values().next().cloned())
            .unwrap_or(Value::Null)),
        _ => None,
    };
    json!({ "answer": e.to_string(), "witness": witness })
}

fn h1_check(inp: &Inputs, rep: &mut Report) -> CliResult<()> {
    let (name, f, act) = inp.h1()?;
    let a = f.cocycle(&act).map_err(lib_err(&name))?;
    let ok = is_cocycle(&a, &act);
    rep.line(format!("cocycle: {}", cocycle_line(&a, &act)));
    rep.line(format!("cocycle condition: {}", if ok { "holds" } else { "fails" }));
    rep.set("is_cocycle", json!(ok));
    rep.negative_if(!ok);
    if let Some(b) = f.other(&act).map_err(lib_err(&name))? {
        if !is_cocycle(&b, &act) {
            return Err(input_err(Some(&name), "'other' is not a cocycle"));
        }
        if ok {
            let w = f.witness().map_err(lib_err(&name))?;
            let e = are_equivalent(&a, &b, &act, w.as_ref());
            rep.line(format!("compared with: {}", cocycle_line(&b, &act)));
            rep.line(format!("equivalence: {e}"));
            if let Equivalence::Equivalent(Some(c)) = &e {
                rep.line(format!("witness c: {}", elem_string(c)));
            }
            rep.set("equivalence", equivalence_json(&e, &act));
            rep.negative_if(!matches!(e, Equivalence::Equivalent(_)));
        }
    }
    Ok(())
}

fn h1_twist(inp: &Inputs, rep: &mut Report) -> CliResult<()> {
    let (name, f, act) = inp.h1()?;
    let a = f.cocycle(&act).map_err(lib_err(&name))?;
    let s = f.extension().map_err(lib_err(&name))?;
    let base = f.base(&act).map_err(lib_err(&name))?;
    let ambient = pvkit_core::phihopf::extend_scalars(&base, &s).map_err(lib_err(&name))?;
    let tw = construction_g(&a, &act, &ambient).map_err(lib_err(&name))?;
    rep.line(format!("cocycle: {}", cocycle_line(&a, &act)));
    rep.line(format!("fixed object of rank {}; derivation:", tw.object.rank));
    rep.lines.extend(mat_lines(&tw.object.derivation));
    rep.line("inclusion into M(x)S:");
    rep.lines.extend(mat_lines(&tw.basis));
    rep.set("twisted", serde_json::to_value(PhiObjectFile::from_object(&tw.object)).expect("serializable"));
    rep.set("inclusion", mat_json(&tw.basis));
    Ok(())
}

fn h1_untwist(inp: &Inputs, rep: &mut Report) -> CliResult<()> {
    let (name, f, act) = inp.h1()?;
    let tf = f.twisted_form(&act).map_err(lib_err(&name))?;
    let a = construction_f(&tf, &act).map_err(lib_err(&name))?;
    let e = are_equivalent(&a, &Cocycle::trivial(&act), &act, None);
    rep.line(format!("cocycle: {}", cocycle_line(&a, &act)));
    rep.line(format!("equivalent to the trivial class: {e}"));
    rep.set("cocycle", cocycle_json(&a, &act));
    rep.set("trivial_class", json!(e.to_string()));
    Ok(())
}

fn dcsa_input(inp: &Inputs, idx: usize, what: &str) -> CliResult<DeltaCSA> {
    let name = inp.cli.inputs.get(idx).cloned().unwrap_or_default();
    DeltaCSA::new(inp.matrix(idx, what)?).map_err(lib_err(&name))
}

fn dcsa_check_iso(inp: &Inputs, rep: &mut Report) -> CliResult<()> {
    let p = dcsa_input(inp, 0, "P")?;
    let q = dcsa_input(inp, 1, "Q")?;
    let u_name = inp.cli.inputs.get(2).cloned().unwrap_or_default();
    let u = GaugeWitness::new(inp.matrix(2, "witness u")?).map_err(lib_err(&u_name))?;
    let ok = iso_witness_check(&p, &q, &u).map_err(lib_err(&u_name))?;
    let closed = iso_witness_check_closed(&p, &q, &u).map_err(lib_err(&u_name))?;
    rep.line(format!("conjugation by u intertwines delta_P and delta_Q: {}", if ok { "yes" } else { "no" }));
    rep.line(format!("closed form gives the same answer: {}", if ok == closed { "yes" } else { "no" }));
    rep.set("isomorphism", json!(ok));
    rep.set("closed_form_agrees", json!(ok == closed));
    rep.negative_if(!ok);
    Ok(())
}

fn dcsa_split_degree(inp: &Inputs, rep: &mut Report) -> CliResult<()> {
    let a = dcsa_input(inp, 0, "P")?;
    let name = inp.cli.inputs.first().cloned().unwrap_or_default();
    let r = splitting_degree(&a).map_err(lib_err(&name))?;
    let t = is_split(&a, None).map_err(lib_err(&name))?;
    let bound = a.n() * a.n() - 1;
    rep.line(format!("result: {r}"));
    rep.line(format!("bound: n^2 - 1 = {bound}"));
    rep.line(format!("split over F: {t}"));
    rep.set("split", split_json(&r));
    rep.set("bound", json!(bound));
    rep.set("split_over_f", json!(t.to_string()));
    Ok(())
}

fn dcsa_adjoint(inp: &Inputs, rep: &mut Report) -> CliResult<()> {
    let a = dcsa_input(inp, 0, "P")?;
    let m = adjoint_system(&a);
    rep.line(format!("adjoint system of size {}:", m.n()));
    rep.lines.extend(mat_lines(m.matrix()));
    rep.set("adjoint", serde_json::to_value(MatrixFile::from_matrix(m.matrix())).expect("serializable"));
    Ok(())
}

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> Outcome {
    let fail = |e: InputError| Outcome { stdout: String::new(), stderr: format!("{e}\n"), code: 2 };
    let command = match cli.command.join("-").parse::<Command>() {
        Ok(c) => c,
        Err(e) => return fail(input_err(None, e)),
    };
    let inp = Inputs { cli };
    let mut rep = Report::new(command);
    let result = match command {
        Command::GaugeCheck => gauge_check(&inp, &mut rep),
        Command::Rank1Classify => rank1_classify(&inp, &mut rep),
        Command::DiagGroup => diag_group_cmd(&inp, &mut rep),
        Command::TorsorIso => torsor_iso(&inp, &mut rep),
        Command::SplitReport => split_report_cmd(&inp, &mut rep),
        Command::HopfCheck => hopf_check(&inp, &mut rep),
        Command::DescentRoundtrip => descent_roundtrip(&inp, &mut rep),
        Command::H1Enumerate => h1_enumerate(&inp, &mut rep),
        Command::H1Check => h1_check(&inp, &mut rep),
        Command::H1Twist => h1_twist(&inp, &mut rep),
        Command::H1Untwist => h1_untwist(&inp, &mut rep),
        Command::DcsaCheckIso => dcsa_check_iso(&inp, &mut rep),
        Command::DcsaSplitDegree => dcsa_split_degree(&inp, &mut rep),
        Command::DcsaAdjoint => dcsa_adjoint(&inp, &mut rep),
    };
    match result {
        Ok(()) => rep.render(cli.json),
        Err(e) => fail(e),
    }
}

/// Parses `args` (without the program name) and runs them.
pub fn run_args<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv = std::iter::once("pvkit".to_string()).chain(args.into_iter().map(Into::into));
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => Outcome { stdout: String::new(), stderr: e.to_string(), code: 2 },
    }
}
