//! Argument handling and subcommand dispatch.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nilpotent_lie::bch::{
    automorphism_check, bch_with, group_commutator, group_mul_with, lattice_closed, AutomorphismFailure, GroupElement,
    LatticeOp, LatticeSpec, LatticeVerdict,
};
use nilpotent_lie::cohomology::{self, betti_with, cup_duality, format_cochain, CochainComplex, MasseyOutcome};
use nilpotent_lie::obstruction::{self, CheckOptions, Mode};
use nilpotent_lie::{
    lcs_dims, nilpotent::minimal_relation_degrees_with, nilpotent::nilpotent_quotient_with, Error as CoreError,
    FreeLieAlgebra, Generator, GradedQuotient, LiePresentation, Limits, Q,
};

use crate::parse::{self, BuildError, ParseError};
use crate::report::{self, Report};

/// Environment variable overriding the default class cap.
pub const MAX_CLASS_ENV: &str = "NLIE_MAX_CLASS";

#[derive(Parser, Debug)]
#[command(name = "nlie", version, about = "Exact computations with presented nilpotent Lie algebras over Q")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Largest class cap accepted (also bounds BCH expansions).
    #[arg(long, global = true, value_name = "N")]
    max_class: Option<usize>,
    /// Run every check even after a failure.
    #[arg(long, global = true)]
    full_battery: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Smooth,
    SmoothProper,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Smooth => Mode::Smooth,
            ModeArg::SmoothProper => Mode::SmoothProper,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quotient dimensions, lower central series and relation degrees.
    Dims { file: PathBuf },
    /// Baker–Campbell–Hausdorff product of free Lie elements.
    Bch {
        #[arg(long)]
        class: usize,
        /// Generator order; by default, order of first appearance.
        #[arg(long, value_delimiter = ',')]
        gens: Option<Vec<String>>,
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        elements: Vec<String>,
    },
    /// Betti numbers of the quotient, split by weight.
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Cup products of degree-1 classes and their duality with the bracket.
    Cup { file: PathBuf },
    /// Triple Massey product of the dual classes of three generators.
    Massey { file: PathBuf, a: String, b: String, c: String },
    /// Relation-degree, weight and Massey criteria.
    Check {
        file: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Check every `.lie` file in a directory.
        #[arg(long, conflicts_with = "file", value_name = "DIR")]
        all: Option<PathBuf>,
    },
    /// Quadratic presentation dual to a cup-product tensor.
    BuildFromCup {
        file: PathBuf,
        #[arg(long, default_value_t = obstruction::DEFAULT_DEPTH)]
        depth: usize,
        /// Also write the presentation file here.
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Malcev group operations on the quotient.
    Group {
        #[command(subcommand)]
        op: GroupOp,
    },
}

#[derive(Subcommand, Debug)]
enum GroupOp {
    /// Product of two or more elements, left to right.
    Mul {
        file: PathBuf,
        #[arg(required = true, num_args = 2.., allow_hyphen_values = true)]
        elements: Vec<String>,
    },
    /// Group inverse, that is, the negated logarithm.
    Inverse {
        file: PathBuf,
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// `a b a⁻¹ b⁻¹`.
    Commutator {
        file: PathBuf,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Closure of the integer span of `elem` lines under products and inverses.
    Lattice { file: PathBuf, lattice: PathBuf },
    /// Whether `gen=expr` images define an automorphism.
    Auto {
        file: PathBuf,
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        images: Vec<String>,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_EXCLUDED: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Parse { path: String, err: ParseError },
    Input(String),
    Cap(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Cap(_) => EXIT_CAP,
            _ => EXIT_INPUT,
        }
    }

    fn line(&self) -> String {
        match self {
            CliError::Usage(m) => format!("error[usage]: {m}\n"),
            CliError::Parse { path, err } => format!("error[parse]: {path}:{err}\n"),
            CliError::Input(m) => format!("error[input]: {m}\n"),
            CliError::Cap(m) => format!("error[cap]: {m}\n"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_resource_cap() {
            CliError::Cap(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, CliError>;

struct Ctx {
    json: bool,
    limits: Limits,
    full_battery: bool,
}

/// Runs one command line (including the program name) and captures its output.
pub fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Output { code: EXIT_OK, stdout: e.to_string(), stderr: String::new() }
                }
                _ => {
                    let first = e.to_string().lines().next().unwrap_or("invalid arguments").to_string();
                    let msg = first.strip_prefix("error: ").unwrap_or(&first).to_string();
                    Output { code: EXIT_INPUT, stdout: String::new(), stderr: CliError::Usage(msg).line() }
                }
            };
        }
    };
    match dispatch(cli) {
        Ok((code, stdout)) => Output { code, stdout, stderr: String::new() },
        Err(e) => Output { code: e.code(), stdout: String::new(), stderr: e.line() },
    }
}

fn limits(flag: Option<usize>) -> CliResult<Limits> {
    if let Some(n) = flag {
        return Ok(Limits::with_max_class(n));
    }
    match std::env::var(MAX_CLASS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Limits::with_max_class)
            .map_err(|_| CliError::Usage(format!("{MAX_CLASS_ENV} must be a nonnegative integer, found `{v}`"))),
        Err(_) => Ok(Limits::default()),
    }
}

fn dispatch(cli: Cli) -> CliResult<(i32, String)> {
    let ctx = Ctx { json: cli.json, limits: limits(cli.max_class)?, full_battery: cli.full_battery };
    match cli.command {
        Command::Dims { file } => single(&ctx, dims(&ctx, &file)?),
        Command::Bch { class, gens, elements } => single(&ctx, bch_cmd(&ctx, class, gens, &elements)?),
        Command::Cohomology { file, degree } => single(&ctx, cohomology_cmd(&ctx, &file, degree)?),
        Command::Cup { file } => single(&ctx, cup_cmd(&ctx, &file)?),
        Command::Massey { file, a, b, c } => single(&ctx, massey_cmd(&ctx, &file, [&a, &b, &c])?),
        Command::Check { file, mode, all } => match (file, all) {
            (Some(f), None) => {
                let (code, r) = check_cmd(&ctx, &f, mode.into())?;
                Ok((code, render(&ctx, &r)))
            }
            (None, Some(dir)) => check_all(&ctx, &dir, mode.into()),
            _ => Err(CliError::Usage("`check` needs a file or `--all <DIR>`".into())),
        },
        Command::BuildFromCup { file, depth, output } => single(&ctx, build_from_cup(&ctx, &file, depth, output)?),
        Command::Group { op } => single(&ctx, group_cmd(&ctx, op)?),
    }
}

fn single(ctx: &Ctx, r: Report) -> CliResult<(i32, String)> {
    Ok((EXIT_OK, render(ctx, &r)))
}

fn render(ctx: &Ctx, r: &Report) -> String {
    if ctx.json {
        report::render_json(r)
    } else {
        report::render_text(r)
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn load(ctx: &Ctx, path: &Path) -> CliResult<LiePresentation> {
    let text = read(path)?;
    let file = parse::parse_presentation(&text).map_err(|err| CliError::Parse { path: display(path), err })?;
    file.build(&ctx.limits).map_err(|e| match e {
        BuildError::Relation { line, message } => CliError::Input(format!("{}:{line}: {message}", display(path))),
        BuildError::Core(c) => c.into(),
    })
}

fn quotient(ctx: &Ctx, pres: &LiePresentation) -> CliResult<GradedQuotient> {
    Ok(nilpotent_quotient_with(pres, &ctx.limits)?)
}

/// Fills the fields shared by every report about a presentation.
fn describe(ctx: &Ctx, r: &mut Report, path: &Path, pres: &LiePresentation, u: &GradedQuotient) -> CliResult<()> {
    r.input = Some(display(path));
    r.generators = pres.generators().iter().map(|g| g.name().to_string()).collect();
    r.class_cap = Some(pres.class_cap());
    r.dims = u.dims().to_vec();
    r.lcs_dims = lcs_dims(u);
    r.relation_degrees = minimal_relation_degrees_with(pres, &ctx.limits)?;
    Ok(())
}

fn dims(ctx: &Ctx, path: &Path) -> CliResult<Report> {
    let pres = load(ctx, path)?;
    let u = quotient(ctx, &pres)?;
    let mut r = Report::new("dims");
    describe(ctx, &mut r, path, &pres, &u)?;
    r.push("dimension", u.dim().to_string());
    r.push("class", u.class().to_string());
    for n in 1..=u.dims().len() {
        let labels: Vec<String> = u.degree_range(n).map(|i| u.basis_label(i)).collect();
        if !labels.is_empty() {
            r.push(format!("basis {n}"), labels.join(", "));
        }
    }
    for s in pres.splits() {
        let degrees: Vec<String> = s.degrees.iter().map(usize::to_string).collect();
        r.push(format!("split relation {}", s.relation + 1), format!("degrees {}", degrees.join(" ")));
    }
    Ok(r)
}

fn parse_arg(text: &str, known: Option<&[String]>) -> CliResult<(nilpotent_lie::Expr, Vec<String>)> {
    parse::parse_expr(text, known).map_err(|err| CliError::Parse { path: "<argument>".into(), err })
}

fn bch_cmd(ctx: &Ctx, class: usize, gens: Option<Vec<String>>, elements: &[String]) -> CliResult<Report> {
    if class == 0 {
        return Err(CliError::Usage("--class must be positive".into()));
    }
    if class > ctx.limits.max_bch_class {
        return Err(CoreError::ClassLimitExceeded { requested: class, limit: ctx.limits.max_bch_class }.into());
    }
    let mut exprs = Vec::new();
    let mut seen: Vec<String> = Vec::new();
    for e in elements {
        let (expr, names) = parse_arg(e, gens.as_deref())?;
        for n in names {
            if !seen.contains(&n) {
                seen.push(n);
            }
        }
        exprs.push(expr);
    }
    let names = gens.unwrap_or(seen);
    let generators = names.iter().map(Generator::unit).collect::<Result<Vec<_>, _>>()?;
    let alg = FreeLieAlgebra::new(generators, class)?;
    let mut acc = alg.rewrite(&exprs[0])?;
    for e in &exprs[1..] {
        acc = bch_with(&acc, &alg.rewrite(e)?, class, &ctx.limits)?;
    }
    let mut r = Report::new("bch");
    r.generators = names;
    r.push("class", class.to_string());
    r.push("result", acc.to_string());
    Ok(r)
}

fn cohomology_cmd(ctx: &Ctx, path: &Path, degree: Option<usize>) -> CliResult<Report> {
    let pres = load(ctx, path)?;
    let u = quotient(ctx, &pres)?;
    let mut r = Report::new("cohomology");
    describe(ctx, &mut r, path, &pres, &u)?;
    let degrees: Vec<usize> = match degree {
        Some(p) => vec![p],
        None => (0..=u.dim()).collect(),
    };
    let mut vector = Vec::new();
    for p in degrees {
        let b = betti_with(&u, p, &ctx.limits)?;
        vector.push(b.betti.to_string());
        let weights: Vec<String> = b.by_weight.iter().map(|(w, n)| format!("{w}:{n}")).collect();
        r.push(format!("b{p}"), b.betti.to_string());
        if !weights.is_empty() {
            r.push(format!("b{p} by weight"), weights.join(" "));
        }
    }
    if degree.is_none() {
        r.push("betti", vector.join(" "));
    }
    Ok(r)
}

fn cup_cmd(ctx: &Ctx, path: &Path) -> CliResult<Report> {
    let pres = load(ctx, path)?;
    let u = quotient(ctx, &pres)?;
    let mut r = Report::new("cup");
    describe(ctx, &mut r, path, &pres, &u)?;
    let cx = CochainComplex::new(&u);
    let ones: Vec<usize> = u.degree_range(1).collect();
    for &i in &ones {
        for &j in ones.iter().filter(|&&j| j > i) {
            let class =
                cohomology::cup(&u, &cx.class(cohomology::dual(i))?, &cx.class(cohomology::dual(j))?)?;
            let key = format!("{}∨ ∪ {}∨", u.basis_label(i), u.basis_label(j));
            let value = if class.is_zero() { "0".to_string() } else { format_cochain(&u, &class.representative) };
            r.push(key, value);
        }
    }
    let d = cup_duality(&u)?;
    r.push("cup rank", d.cup.rank().to_string());
    r.push("bracket rank", d.bracket.rank().to_string());
    r.push("duality", if d.holds() { "holds" } else { "fails" });
    Ok(r)
}

fn generator_class(u: &GradedQuotient, name: &str) -> CliResult<usize> {
    let name = name.trim().trim_end_matches('∨');
    u.algebra().generator_index(name).map_err(CliError::from)
}

fn massey_cmd(ctx: &Ctx, path: &Path, names: [&String; 3]) -> CliResult<Report> {
    let pres = load(ctx, path)?;
    let u = obstruction::massey_quotient(&pres, &ctx.limits)?;
    let mut r = Report::new("massey");
    describe(ctx, &mut r, path, &pres, &quotient(ctx, &pres)?)?;
    let cx = CochainComplex::new(&u);
    let mut idx = [0; 3];
    for (slot, name) in idx.iter_mut().zip(names) {
        *slot = generator_class(&u, name)?;
    }
    let [a, b, c] = idx;
    let (ca, cb, cc) = (cx.class(cohomology::dual(a))?, cx.class(cohomology::dual(b))?, cx.class(cohomology::dual(c))?);
    let labels: Vec<String> = [a, b, c].iter().map(|&i| format!("{}∨", u.basis_label(i))).collect();
    r.push("product", format!("<{}>", labels.join(", ")));
    r.push("massey class cap", obstruction::massey_class_cap(&pres).to_string());
    match cohomology::massey(&u, &ca, &cb, &cc)? {
        MasseyOutcome::Undefined(why) => {
            let reason = match why {
                cohomology::MasseyUndefined::LeftCupNonzero => format!("{} ∪ {} ≠ 0", labels[0], labels[1]),
                cohomology::MasseyUndefined::RightCupNonzero => format!("{} ∪ {} ≠ 0", labels[1], labels[2]),
            };
            r.push("status", "undefined");
            r.push("reason", reason);
        }
        MasseyOutcome::Defined(m) => {
            r.push("status", if m.vanishing { "vanishing" } else { "nonvanishing" });
            r.push("class", format_cochain(&u, &m.class.representative));
            let ind: Vec<String> = m.indeterminacy.iter().map(|c| format_cochain(&u, c)).collect();
            r.push("indeterminacy", if ind.is_empty() { "0".to_string() } else { ind.join(", ") });
        }
    }
    Ok(r)
}

fn check_cmd(ctx: &Ctx, path: &Path, mode: Mode) -> CliResult<(i32, Report)> {
    let pres = load(ctx, path)?;
    let u = quotient(ctx, &pres)?;
    let mut r = Report::new("check");
    describe(ctx, &mut r, path, &pres, &u)?;
    let opts = CheckOptions { full_battery: ctx.full_battery, limits: ctx.limits.clone() };
    let v = obstruction::check(&pres, mode, &opts)?;
    r.verdicts.push(report::verdict_report(&v));
    r.checks_run = report::check_runs(&v.checks_run);
    let code = if v.is_excluded() { EXIT_EXCLUDED } else { EXIT_OK };
    Ok((code, r))
}

fn check_all(ctx: &Ctx, dir: &Path, mode: Mode) -> CliResult<(i32, String)> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "lie"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Input(format!("{}: no .lie files", dir.display())));
    }
    let results: Vec<CliResult<(i32, Report)>> = std::thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|f| s.spawn(move || check_cmd(ctx, f, mode))).collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    });
    let mut reports = Vec::new();
    let mut code = EXIT_OK;
    for res in results {
        let (c, r) = res?;
        code = code.max(c);
        reports.push(r);
    }
    let out = if ctx.json {
        report::render_json_all(&reports)
    } else {
        reports.iter().map(report::render_text).collect::<Vec<_>>().join("\n")
    };
    Ok((code, out))
}

fn build_from_cup(ctx: &Ctx, path: &Path, depth: usize, output: Option<PathBuf>) -> CliResult<Report> {
    let text = read(path)?;
    let data = parse::parse_cup(&text).map_err(|err| CliError::Parse { path: display(path), err })?;
    if 2 * depth > ctx.limits.max_class {
        return Err(CoreError::ClassLimitExceeded { requested: 2 * depth, limit: ctx.limits.max_class }.into());
    }
    let pres = obstruction::presentation_from_cup(&data, depth)?;
    let u = quotient(ctx, &pres)?;
    let mut r = Report::new("build-from-cup");
    describe(ctx, &mut r, path, &pres, &u)?;
    for (k, rel) in pres.relations().iter().enumerate() {
        r.push(format!("relation {}", k + 1), rel.to_string());
    }
    let recovered = obstruction::recovered_cup_tensor(&data, depth, &ctx.limits)?;
    r.push("round trip", if recovered == data.tensor() { "exact" } else { "mismatch" });
    let nondegenerate = cohomology::pairing_nondegenerate(&data)?;
    r.push("cup pairing", if nondegenerate { "nondegenerate" } else { "degenerate" });
    if let Some(out) = output {
        std::fs::write(&out, parse::serialize(&pres)).map_err(|e| CliError::Input(format!("{}: {e}", out.display())))?;
        r.push("written", display(&out));
    }
    Ok(r)
}

fn element(u: &GradedQuotient, text: &str) -> CliResult<GroupElement> {
    let names: Vec<String> = u.algebra().generators().iter().map(|g| g.name().to_string()).collect();
    let (e, _) = parse_arg(text, Some(&names))?;
    Ok(GroupElement::from_lie(u, &u.algebra().rewrite(&e)?)?)
}

fn show(u: &GradedQuotient, g: &GroupElement) -> String {
    g.log_element(u).to_string()
}

fn coords(v: &[Q]) -> String {
    format!("({})", v.iter().map(Q::to_string).collect::<Vec<_>>().join(", "))
}

fn group_cmd(ctx: &Ctx, op: GroupOp) -> CliResult<Report> {
    let file = match &op {
        GroupOp::Mul { file, .. }
        | GroupOp::Inverse { file, .. }
        | GroupOp::Commutator { file, .. }
        | GroupOp::Lattice { file, .. }
        | GroupOp::Auto { file, .. } => file.clone(),
    };
    let pres = load(ctx, &file)?;
    let u = quotient(ctx, &pres)?;
    let mut r = Report::new("group");
    describe(ctx, &mut r, &file, &pres, &u)?;
    match op {
        GroupOp::Mul { elements, .. } => {
            let mut acc = element(&u, &elements[0])?;
            for e in &elements[1..] {
                acc = group_mul_with(&u, &acc, &element(&u, e)?, &ctx.limits)?;
            }
            r.push("product", show(&u, &acc));
        }
        GroupOp::Inverse { element: e, .. } => {
            r.push("inverse", show(&u, &element(&u, &e)?.inverse()));
        }
        GroupOp::Commutator { a, b, .. } => {
            r.push("commutator", show(&u, &group_commutator(&u, &element(&u, &a)?, &element(&u, &b)?)?));
        }
        GroupOp::Lattice { lattice, .. } => {
            let text = read(&lattice)?;
            let names: Vec<String> = pres.generators().iter().map(|g| g.name().to_string()).collect();
            let elems =
                parse::parse_lattice(&text, &names).map_err(|err| CliError::Parse { path: display(&lattice), err })?;
            let basis = elems.iter().map(|l| u.algebra().rewrite(&l.value)).collect::<Result<Vec<_>, _>>()?;
            r.push("lattice", display(&lattice));
            match lattice_closed(&u, &LatticeSpec { basis })? {
                LatticeVerdict::Closed => r.push("closure", "closed"),
                LatticeVerdict::Open(f) => {
                    r.push("closure", "open");
                    let what = match f.op {
                        LatticeOp::Product => format!("product of elements {} and {}", f.left + 1, f.right + 1),
                        LatticeOp::Inverse => format!("inverse of element {}", f.left + 1),
                    };
                    r.push("failure", format!("{what} has coordinates {}", coords(&f.coordinates)));
                }
            }
        }
        GroupOp::Auto { images, .. } => {
            let names: Vec<String> = pres.generators().iter().map(|g| g.name().to_string()).collect();
            let mut map = BTreeMap::new();
            for spec in &images {
                let Some((g, e)) = spec.split_once('=') else {
                    return Err(CliError::Usage(format!("image `{spec}` must look like `gen=expr`")));
                };
                let g = g.trim().to_string();
                if !names.contains(&g) {
                    return Err(CliError::Input(format!("unknown generator `{g}`")));
                }
                let (expr, _) = parse_arg(e, Some(&names))?;
                map.insert(g, u.algebra().rewrite(&expr)?);
            }
            let rep = automorphism_check(&u, &map)?;
            r.push("automorphism", if rep.is_automorphism() { "yes" } else { "no" });
            match rep.failure {
                None => {}
                Some(AutomorphismFailure::RelationNotPreserved { relation, image }) => {
                    r.push("failure", format!("relation {} maps to {}", relation + 1, coords(&image)))
                }
                Some(AutomorphismFailure::NotInvertible { kernel }) => {
                    r.push("failure", format!("not invertible; kernel contains {}", coords(&kernel)))
                }
                Some(AutomorphismFailure::GroupLawMismatch { left, right }) => {
                    r.push("failure", format!("group law differs on basis elements {} and {}", left + 1, right + 1))
                }
            }
            if let Some(m) = rep.matrix {
                for i in 0..m.ncols() {
                    r.push(format!("image of {}", u.basis_label(i)), coords(&m.column(i)));
                }
            }
        }
    }
    Ok(r)
}
