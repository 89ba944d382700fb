use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use determina::closure::{closure_colon, integral_closure, newton_polyhedron};
use determina::dvr::{skew_canonical_dvr, smith_normal_form, sym_canonical_dvr, CongruenceForm};
use determina::ideals::loewy_search;
use determina::io::{extra_ideal, ideal_from_value, ideal_to_json, matrix_from_value, matrix_to_json, parse_chain_json, parse_json, MatrixInput};
use determina::matrixops::{determinantal_ideal, pfaffian, pfaffian_sub_ideal};
use determina::tangent::{ann_coker_minimal_power, t1_ann_jet, t1_jet_dimension, t1_minimal_power};
use determina::{
    chain_report, genericity_note, relative_report, report, Certificate, CertifiedBool, DeterminacyReport, Error, GroupAction,
    GroupKind, Ideal, PolyMatrix, PowerSearch, SigmaSpace, Structure, Verdict, DEFAULT_N_MAX,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "determina", version, about = "Finite determinacy of matrices over formal power series rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Determinantal ideals I_1, .., I_min(m,n)
    Ideals(Plain),
    /// Integral closure of a monomial ideal; with a "colon" key, closure(I) : closure(J)
    Closure(Plain),
    /// Loewy length of ann.coker(A) and of the restricted map A: m R^n -> R^m
    Anncoker(Budgeted),
    /// Pfaffian of an even skew matrix, or the sub-Pfaffian ideal of an odd one
    Pfaffian(Plain),
    /// Loewy length of ann(T¹) for a group and Σ
    T1(Tangent),
    /// Verdict and bounds on the order of determinacy
    Determinacy(Determinacy),
    /// Determinacy relative to Σ ∩ (A + Mat(J))
    Relative(Relative),
    /// Smith form over k[[t]], plus the congruence form for sym/skew input
    Smith(Truncated),
    /// Bounds for a chain of maps
    Chain(Budgeted),
    /// Loewy length of an ideal
    Loewy(Budgeted),
}

#[derive(Args)]
struct Common {
    /// Input JSON file
    input: PathBuf,
    /// Human-readable output instead of JSON
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct Plain {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Budget {
    /// Largest Loewy length searched
    #[arg(long = "nmax", env = "DETERMINA_NMAX", default_value_t = DEFAULT_N_MAX)]
    n_max: u32,
}

#[derive(Args)]
struct Budgeted {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args)]
struct Truncated {
    #[command(flatten)]
    common: Common,
    /// Work modulo t^D
    #[arg(long, default_value_t = 12)]
    truncation: u32,
}

#[derive(Args)]
struct Action {
    /// gr, gl, glr, congr, conj, gr-up, glr-up
    #[arg(long, value_parser = parse_group)]
    group: GroupKind,
    /// full, sym, skew, upper; defaults to the structure of the matrix
    #[arg(long, value_parser = ["full", "sym", "skew", "upper"])]
    sigma: Option<String>,
    /// Use the subgroup of elements congruent to the identity modulo m
    #[arg(long)]
    unipotent: bool,
}

#[derive(Args)]
struct Tangent {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    budget: Budget,
    #[command(flatten)]
    action: Action,
    /// Also report jet dimensions of T¹ and of its annihilator modulo m^D
    #[arg(long)]
    truncation: Option<u32>,
}

#[derive(Args)]
struct Determinacy {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    budget: Budget,
    #[command(flatten)]
    action: Action,
    /// Ideal file for J; switches to the relative report
    #[arg(long = "relative-j")]
    relative_j: Option<PathBuf>,
    /// Exit with status 3 when the upper bound search is inconclusive
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct Relative {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    budget: Budget,
    #[command(flatten)]
    action: Action,
    /// Ideal file for J; an optional "group_ideal" key restricts the group to G^(I)
    #[arg(long = "relative-j")]
    relative_j: PathBuf,
    #[arg(long)]
    strict: bool,
}

fn parse_group(s: &str) -> Result<GroupKind, String> {
    GroupKind::parse(s).ok_or_else(|| format!("unknown group `{s}`"))
}

/// Failures of a run, mapped to exit codes.
enum Failure {
    Input(String),
    Inconclusive(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Undecided { .. } => Failure::Inconclusive(e.to_string()),
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

struct Output {
    json: Value,
    text: String,
    inconclusive: bool,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Output { json, text, inconclusive: false }
    }
}

fn read(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(parse_json(&text)?)
}

fn read_matrix(path: &Path) -> Result<MatrixInput, Failure> {
    Ok(matrix_from_value(&read(path)?)?)
}

fn sigma_for(a: &PolyMatrix, choice: Option<&str>) -> Result<SigmaSpace, Failure> {
    let choice = choice.unwrap_or(match a.structure() {
        Structure::General => "full",
        Structure::Symmetric => "sym",
        Structure::SkewSymmetric => "skew",
        Structure::UpperBlockTriangular { .. } => "upper",
    });
    Ok(match choice {
        "full" => SigmaSpace::Full,
        "sym" => SigmaSpace::Sym,
        "skew" => SigmaSpace::Skew,
        _ => SigmaSpace::upper_for(a)?,
    })
}

fn group_of(action: &Action) -> GroupAction {
    if action.unipotent {
        GroupAction::unipotent(action.group)
    } else {
        GroupAction::new(action.group)
    }
}

fn certificate_text(c: &CertifiedBool) -> String {
    match &c.certificate {
        Certificate::Immediate(why) => format!("immediate: {why}"),
        Certificate::Combinatorial => "monomial divisibility".into(),
        Certificate::Nakayama { degree } => format!("Nakayama lift from degree {degree}"),
        Certificate::PolynomialIdentity { degree } => format!("explicit combination, degree <= {degree}"),
        Certificate::LocalIdentity { degree } => format!("combination with unit denominators, degree <= {degree}"),
        Certificate::Witness(_) => format!("witness outside the target modulo m^{}", c.truncation),
    }
}

fn search_json(s: &PowerSearch) -> Value {
    match s {
        PowerSearch::Found { n, proof } => {
            json!({ "loewy_length": n, "truncation": proof.truncation, "certificate": certificate_text(proof) })
        }
        PowerSearch::Exceeds { n_max, refutation } => json!({
            "loewy_length": null,
            "exceeds": n_max,
            "truncation": refutation.truncation,
            "certificate": certificate_text(refutation),
        }),
    }
}

fn search_text(s: &PowerSearch) -> String {
    match s {
        PowerSearch::Found { n, proof } => format!("{n} ({})", certificate_text(proof)),
        PowerSearch::Exceeds { n_max, .. } => format!("> {n_max}"),
    }
}

fn ideals(args: &Plain) -> Result<Output, Failure> {
    let MatrixInput { names, matrix } = read_matrix(&args.common.input)?;
    let mut json = serde_json::Map::new();
    let mut text = String::new();
    for j in 1..=matrix.rows().min(matrix.cols()) {
        let i = determinantal_ideal(&matrix, j as i64);
        text += &format!("I_{j} = {}\n", i.display(&names));
        json.insert(format!("I_{j}"), json!(i.to_strings(&names)));
    }
    Ok(Output::new(json!({ "vars": names, "determinantal": json }), text))
}

fn closure(args: &Plain) -> Result<Output, Failure> {
    let v = read(&args.common.input)?;
    let input = ideal_from_value(&v)?;
    let names = input.names;
    match extra_ideal(&v, &names, "colon")? {
        Some(j) => {
            let c = closure_colon(&input.ideal, &j)?;
            let text = format!("closure(I) : closure(J) = {}\n", c.display(&names));
            Ok(Output::new(json!({ "vars": names, "closure_colon": c.to_strings(&names) }), text))
        }
        None => {
            let c = integral_closure(&input.ideal)?;
            let facets: Vec<Value> = if input.ideal.is_zero() {
                Vec::new()
            } else {
                newton_polyhedron(&input.ideal)?
                    .facets
                    .iter()
                    .map(|f| json!({ "normal": f.normal.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "offset": f.offset.to_string() }))
                    .collect()
            };
            let text = format!("closure(I) = {}\n", c.display(&names));
            Ok(Output::new(json!({ "vars": names, "closure": c.to_strings(&names), "newton_facets": facets }), text))
        }
    }
}

fn anncoker(args: &Budgeted) -> Result<Output, Failure> {
    let MatrixInput { names, matrix } = read_matrix(&args.common.input)?;
    let plain = ann_coker_minimal_power(&matrix, false, args.budget.n_max)?;
    let restricted = ann_coker_minimal_power(&matrix, true, args.budget.n_max)?;
    let text = format!("ll(ann.coker A) = {}\nll(ann.coker A|m R^n) = {}\n", search_text(&plain), search_text(&restricted));
    let json = json!({
        "matrix": matrix_to_json(&names, &matrix),
        "n_max": args.budget.n_max,
        "ann_coker": search_json(&plain),
        "restricted": search_json(&restricted),
    });
    Ok(Output::new(json, text))
}

fn pfaffians(args: &Plain) -> Result<Output, Failure> {
    let MatrixInput { names, matrix } = read_matrix(&args.common.input)?;
    if matrix.rows() % 2 == 0 {
        let pf = pfaffian(&matrix)?;
        let s = pf.display(&names).to_string();
        Ok(Output::new(json!({ "vars": names, "pfaffian": s }), format!("{s}\n")))
    } else {
        let i = pfaffian_sub_ideal(&matrix)?;
        let text = format!("Pf_{}(A) = {}\n", matrix.rows() - 1, i.display(&names));
        Ok(Output::new(json!({ "vars": names, "sub_pfaffians": i.to_strings(&names) }), text))
    }
}

fn t1(args: &Tangent) -> Result<Output, Failure> {
    let MatrixInput { names, matrix } = read_matrix(&args.common.input)?;
    let sigma = sigma_for(&matrix, args.action.sigma.as_deref())?;
    let g = group_of(&args.action);
    let search = t1_minimal_power(&matrix, g, &sigma, args.budget.n_max)?;
    let mut text = format!("group {g}, Σ = {}\nll(ann T¹) = {}\n", sigma.name(), search_text(&search));
    let mut json = json!({
        "matrix": matrix_to_json(&names, &matrix),
        "group": g.kind.name(),
        "unipotent": g.unipotent,
        "sigma": sigma.name(),
        "n_max": args.budget.n_max,
        "ann_t1": search_json(&search),
    });
    if let Some(d) = args.truncation {
        let dim = t1_jet_dimension(&matrix, g, &sigma, d)?;
        let ann = t1_ann_jet(&matrix, g, &sigma, d)?;
        text += &format!("dim T¹ mod m^{d} = {dim}\ndim ann(T¹) mod m^{d} = {}\n", ann.dim());
        json["jets"] = json!({ "truncation": d, "t1_dimension": dim, "annihilator_dimension": ann.dim() });
    }
    Ok(Output::new(json, text))
}

fn report_text(r: &DeterminacyReport, names: &[String]) -> String {
    let mut out = format!("group {}, Σ = {}\n", r.group, r.sigma);
    out += &match &r.verdict {
        Verdict::NotFinitelyDetermined { reason } => format!("not finitely determined: {reason}\n"),
        Verdict::Bounds { lower, upper } if lower == upper => format!("ord = {lower}\n"),
        Verdict::Bounds { lower, upper } => format!("{lower} <= ord <= {upper}\n"),
        Verdict::Inconclusive { budget, lower } => match lower {
            Some(l) => format!("ord >= {l}; upper bound not found within budget {budget}\n"),
            None => format!("inconclusive within budget {budget}\n"),
        },
    };
    for c in &r.certificates {
        let value = c.value.map_or("?".into(), |v| v.to_string());
        out += &format!("  {} {value}: {} [{}]", c.kind.name(), c.rule, c.method);
        if let Some(i) = &c.ideal {
            out += &format!(" ideal {}", i.display(names));
        }
        out += "\n";
    }
    if let Some(o) = &r.oracle {
        let show = |x: Option<u32>| x.map_or("?".into(), |v| v.to_string());
        out += &format!("  tangent oracle: {} .. {} (consistent: {})\n", show(o.lower), show(o.upper), o.consistent);
    }
    for n in &r.notes {
        out += &format!("  note: {n}\n");
    }
    out
}

fn read_relative(path: &Path, names: &[String]) -> Result<(Ideal, Option<Ideal>), Failure> {
    let v = read(path)?;
    let input = ideal_from_value(&v)?;
    if input.names != names {
        return Err(Failure::Input(format!(
            "{}: variables {:?} differ from the matrix variables {:?}",
            path.display(),
            input.names,
            names
        )));
    }
    let group_ideal = extra_ideal(&v, names, "group_ideal")?;
    Ok((input.ideal, group_ideal))
}

fn determinacy_output(
    common: &Common,
    budget: &Budget,
    action: &Action,
    relative: Option<&Path>,
) -> Result<Output, Failure> {
    let MatrixInput { names, matrix } = read_matrix(&common.input)?;
    let g = group_of(action);
    let sigma = sigma_for(&matrix, action.sigma.as_deref())?;
    let r = match relative {
        Some(path) => {
            let (j, group_ideal) = read_relative(path, &names)?;
            let r = relative_report(&matrix, g, &sigma, &j, group_ideal.as_ref(), budget.n_max)?;
            (r, Some((j, group_ideal)))
        }
        None => (report(&matrix, g, &sigma, budget.n_max)?, None),
    };
    let (r, rel) = r;
    let mut json = r.to_json(&names);
    json["genericity"] = json!(genericity_note(matrix.rows(), matrix.cols(), matrix.nvars(), g.kind, &sigma));
    if let Some((j, group_ideal)) = rel {
        json["input"]["relative_j"] = ideal_to_json(&names, &j)["generators"].clone();
        json["input"]["group_ideal"] = group_ideal.map_or(Value::Null, |i| json!(i.to_strings(&names)));
    }
    let mut out = Output::new(json, report_text(&r, &names));
    out.inconclusive = matches!(r.verdict, Verdict::Inconclusive { .. });
    Ok(out)
}

fn smith(args: &Truncated) -> Result<Output, Failure> {
    let MatrixInput { names, matrix } = read_matrix(&args.common.input)?;
    let d = args.truncation;
    let s = smith_normal_form(&matrix, d)?;
    let mut text = format!("valuations mod t^{d}: {:?}\n", s.valuations);
    let mut json = json!({
        "truncation": d,
        "valuations": s.valuations,
        "u": s.u.to_strings(&names),
        "diag": s.diag.to_strings(&names),
        "v": s.v.to_strings(&names),
    });
    let congruence = |f: CongruenceForm, kind: &str| {
        let line = format!("{kind} congruence valuations: {:?}, zero block {}\n", f.valuations, f.zero_block);
        let value = json!({
            "kind": kind,
            "valuations": f.valuations,
            "zero_block": f.zero_block,
            "u": f.u.to_strings(&names),
            "form": f.form.to_strings(&names),
        });
        (line, value)
    };
    let form = match matrix.structure() {
        Structure::Symmetric => Some(congruence(sym_canonical_dvr(&matrix, d)?, "symmetric")),
        Structure::SkewSymmetric => Some(congruence(skew_canonical_dvr(&matrix, d)?, "skew")),
        _ => None,
    };
    if let Some((line, value)) = form {
        text += &line;
        json["congruence"] = value;
    }
    Ok(Output::new(json, text))
}

fn chain(args: &Budgeted) -> Result<Output, Failure> {
    let text = std::fs::read_to_string(&args.common.input).map_err(|e| Failure::Input(format!("{}: {e}", args.common.input.display())))?;
    let (names, maps) = parse_chain_json(&text)?;
    let r = chain_report(&maps, args.budget.n_max)?;
    let show = |x: Option<u32>| x.map_or("?".into(), |v| v.to_string());
    let mut text = format!("{} <= ord <= {}\n", show(r.lower), show(r.upper));
    if let Some(i) = &r.outer_ideal {
        text += &format!("  ideal {}\n", i.display(&names));
    }
    let mut out = Output::new(r.to_json(&names), text);
    out.inconclusive = r.upper.is_none();
    Ok(out)
}

fn loewy(args: &Budgeted) -> Result<Output, Failure> {
    let input = ideal_from_value(&read(&args.common.input)?)?;
    let s = loewy_search(&input.ideal, args.budget.n_max);
    let text = format!("ll(I) = {}\n", search_text(&s));
    let mut out = Output::new(json!({ "vars": input.names, "n_max": args.budget.n_max, "ideal": search_json(&s) }), text);
    out.inconclusive = s.value().is_none();
    Ok(out)
}

fn run(cli: &Cli) -> Result<(Output, bool, bool), Failure> {
    Ok(match &cli.command {
        Command::Ideals(a) => (ideals(a)?, a.common.pretty, false),
        Command::Closure(a) => (closure(a)?, a.common.pretty, false),
        Command::Anncoker(a) => (anncoker(a)?, a.common.pretty, false),
        Command::Pfaffian(a) => (pfaffians(a)?, a.common.pretty, false),
        Command::T1(a) => (t1(a)?, a.common.pretty, false),
        Command::Determinacy(a) => {
            (determinacy_output(&a.common, &a.budget, &a.action, a.relative_j.as_deref())?, a.common.pretty, a.strict)
        }
        Command::Relative(a) => (determinacy_output(&a.common, &a.budget, &a.action, Some(&a.relative_j))?, a.common.pretty, a.strict),
        Command::Smith(a) => (smith(a)?, a.common.pretty, false),
        Command::Chain(a) => (chain(a)?, a.common.pretty, false),
        Command::Loewy(a) => (loewy(a)?, a.common.pretty, false),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, pretty, strict)) => {
            let body = if pretty {
                out.text
            } else {
                serde_json::to_string_pretty(&out.json).expect("JSON values serialize") + "\n"
            };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            if strict && out.inconclusive {
                eprintln!("inconclusive: the upper bound search exhausted the budget");
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Inconclusive(msg)) => {
            eprintln!("inconclusive: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
