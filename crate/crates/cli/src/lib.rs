//! Batch front-end for the `cubical` library: reads JSON documents, runs one
//! computation and renders a text or JSON report.

pub mod formats;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cubical::catalg::{
    bw_cohomology_cubical, bw_cohomology_oracle, category_cohomology, category_homology, cubical_nerve,
    nerve_vs_bar_comparison, FiniteCategory, FiniteDiagram,
};
use cubical::coeff::{
    constant_system, direct_image, extend_semicubical, pullback_system, CoefficientSystem, SemiCubicalSystem,
    Variance,
};
use cubical::cubset::{pullback_fiber, universal_from_semicubical, CubesTable, CubicalMap, SemiCubicalSet};
use cubical::homcalc::{
    cochain_complex, cohomology, fiber_criterion, homology, normalized_complex, normalized_complex_local,
    semicubical_homology,
};
use cubical::report::ValidationReport;
use cubical::zlinalg::{format_groups, homology_of_complex, HomologyGroup, HomologyRecord, IntMatrix};

use formats::{
    doc_type, parse_doc, to_json, Base, CategoryDoc, DiagramDoc, DocType, FormatError, MapDoc, MatrixDoc, Over,
    SemiDoc, SemiSystemDoc, SetDoc, SystemDoc, TableDoc,
};

#[derive(Debug, Parser)]
#[command(name = "cubical", version, about = "Homology of cubical sets with coefficients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Highest degree N to report.
    #[arg(long, global = true, default_value_t = 2)]
    pub max_dim: usize,
    /// Truncation T of the expanded set; defaults to N+1.
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write produced documents here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Include the chain complex in homology reports.
    #[arg(long, global = true)]
    pub dump_complex: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct SetArgs {
    /// A cubical_set, cubes_table or semicubical_set document.
    #[arg(long)]
    pub set: PathBuf,
    /// A system document on the set; constant Z when omitted.
    #[arg(long)]
    pub system: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    #[arg(long)]
    pub map: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct MapSystemArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub system: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct DiagramArgs {
    #[arg(long)]
    pub diagram: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the defining identities of any document.
    Validate {
        #[arg(long)]
        set: Option<PathBuf>,
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        category: Option<PathBuf>,
        #[arg(long)]
        diagram: Option<PathBuf>,
    },
    /// H_n(X, F) for a contravariant system.
    Homology(SetArgs),
    /// H^n(X, G) for a covariant system.
    Cohomology(SetArgs),
    /// Homology of a semi-cubical set with a system on it.
    SemicubicalHomology {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        system: Option<PathBuf>,
    },
    /// Universal cubical set of a semi-cubical set.
    Universal {
        #[arg(long)]
        set: PathBuf,
    },
    /// Product of two sets as a cubes table.
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// The fiber f/y as a cubes table.
    Fiber {
        #[arg(long)]
        map: PathBuf,
        /// Cube key in the target, e.g. `v@del:1`.
        #[arg(long)]
        cube: String,
    },
    /// Compares the homology of every fiber f/y with that of a point.
    FiberCriterion(MapArgs),
    /// Pushes a system on the source forward along the map.
    DirectImage(MapSystemArgs),
    /// Pulls a system on the target back along the map.
    PullbackSystem(MapSystemArgs),
    /// Homology of a category with coefficients in a diagram on it.
    CatHomology(DiagramArgs),
    /// Cohomology of a category with coefficients in a diagram on it.
    CatCohomology(DiagramArgs),
    /// The cubical nerve as a cubes table.
    Nerve {
        #[arg(long)]
        category: PathBuf,
    },
    /// Cohomology of the cubical nerve with a natural system.
    Bw(DiagramArgs),
    /// The same groups through the cobar complex of the factorization category.
    BwOracle(DiagramArgs),
    /// Computes both sides of a comparison and reports whether they agree.
    Compare {
        #[arg(value_enum)]
        contract: Contract,
        #[arg(long)]
        set: Option<PathBuf>,
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        diagram: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Contract {
    /// H(X, F) against H(Y, f_*F); needs --map and --system.
    Dirhomol,
    /// Local fast path against the normalized complex; needs --set and --system.
    Comloc,
    /// Semi-cubical homology against its universal extension; needs --set.
    Semicubecube,
    /// Cubical nerve against the bar complex; needs --diagram over the opposite.
    Homolcatcub,
    /// Cubical nerve against the cobar complex; needs --diagram over the factorization category.
    Homolbwcub,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] cubical::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Format { .. } | CliError::Io(_) | CliError::Usage(_) => 2,
            CliError::Invalid(_) | CliError::Core(_) => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Report text and exit code of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

// ---------------------------------------------------------------- loading

struct Input {
    path: String,
    text: String,
}

impl Input {
    fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(Self {
            path: path.display().to_string(),
            text,
        })
    }

    fn ty(&self) -> Result<DocType> {
        doc_type(&self.text).map_err(|e| self.err(e))
    }

    fn parse<T: serde::de::DeserializeOwned>(&self, ty: DocType) -> Result<T> {
        parse_doc(&self.text, ty).map_err(|e| self.err(e))
    }

    fn err(&self, source: FormatError) -> CliError {
        CliError::Format {
            path: self.path.clone(),
            source,
        }
    }
}

fn ensure_valid(what: &str, rep: ValidationReport) -> Result<()> {
    if rep.is_valid() {
        return Ok(());
    }
    let mut msg = format!("{what} is invalid:");
    for v in &rep.violations {
        msg.push_str(&format!("\n  {}: {}", v.relation, v.witness));
    }
    Err(CliError::Invalid(msg))
}

enum SetLike {
    Set(cubical::cubset::PresentedCubicalSet),
    Table(CubesTable),
    Semi(SemiCubicalSet),
}

fn load_set(path: &Path) -> Result<(Input, SetLike)> {
    let input = Input::read(path)?;
    let loaded = match input.ty()? {
        DocType::CubicalSet => SetLike::Set(input.parse::<SetDoc>(DocType::CubicalSet)?.to_set().map_err(|e| input.err(e))?),
        DocType::CubesTable => {
            SetLike::Table(input.parse::<TableDoc>(DocType::CubesTable)?.to_table().map_err(|e| input.err(e))?)
        }
        DocType::SemicubicalSet => {
            SetLike::Semi(input.parse::<SemiDoc>(DocType::SemicubicalSet)?.to_semi().map_err(|e| input.err(e))?)
        }
        other => {
            return Err(input.err(FormatError::at(
                "type",
                format!("expected cubical_set, cubes_table or semicubical_set, found {other}"),
            )))
        }
    };
    Ok((input, loaded))
}

fn set_report(s: &SetLike) -> ValidationReport {
    match s {
        SetLike::Set(x) => x.validate(),
        SetLike::Table(t) => t.validate(),
        SetLike::Semi(s) => s.validate(),
    }
}

/// A validated base for systems; semi-cubical sets are replaced by their
/// universal cubical set.
fn load_base(path: &Path) -> Result<Base> {
    let (input, s) = load_set(path)?;
    ensure_valid(&input.path, set_report(&s))?;
    Ok(match s {
        SetLike::Set(x) => Base::Set(x),
        SetLike::Table(t) => Base::Table(t),
        SetLike::Semi(s) => Base::Set(universal_from_semicubical(&s)),
    })
}

fn load_system(path: &Path, base: &Base, t: usize) -> Result<CoefficientSystem> {
    let input = Input::read(path)?;
    let doc: SystemDoc = input.parse(DocType::System)?;
    let f = doc.to_system(base, t).map_err(|e| input.err(e))?;
    ensure_valid(&input.path, f.validate())?;
    Ok(f)
}

fn load_map(path: &Path) -> Result<CubicalMap> {
    let input = Input::read(path)?;
    let f = input.parse::<MapDoc>(DocType::CubicalMap)?.to_map().map_err(|e| input.err(e))?;
    ensure_valid(&format!("{} (source)", input.path), f.source().validate())?;
    ensure_valid(&format!("{} (target)", input.path), f.target().validate())?;
    ensure_valid(&input.path, f.validate())?;
    Ok(f)
}

fn load_semi_system(path: Option<&Path>, s: &SemiCubicalSet) -> Result<SemiCubicalSystem> {
    let Some(path) = path else {
        return Ok(SemiCubicalSystem::constant(s.clone(), 1, Variance::Contravariant));
    };
    let input = Input::read(path)?;
    let f = input
        .parse::<SemiSystemDoc>(DocType::SemicubicalSystem)?
        .to_system(s)
        .map_err(|e| input.err(e))?;
    ensure_valid(&input.path, f.validate())?;
    Ok(f)
}

fn load_category(path: &Path) -> Result<FiniteCategory> {
    let input = Input::read(path)?;
    let c = input.parse::<CategoryDoc>(DocType::Category)?.to_category().map_err(|e| input.err(e))?;
    ensure_valid(&input.path, c.validate())?;
    Ok(c)
}

fn load_diagram(path: &Path) -> Result<(FiniteCategory, Over, FiniteDiagram)> {
    let input = Input::read(path)?;
    let doc: DiagramDoc = input.parse(DocType::Diagram)?;
    let (c, d) = doc.to_diagram().map_err(|e| input.err(e))?;
    ensure_valid(&format!("{} (category)", input.path), c.validate())?;
    ensure_valid(&input.path, d.validate())?;
    Ok((c, doc.over, d))
}

fn need<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref().ok_or_else(|| CliError::Usage(format!("this command needs --{flag}")))
}

fn require_over(over: Over, want: Over, what: &str) -> Result<()> {
    if over != want {
        return Err(CliError::Usage(format!(
            "{what} needs a diagram over `{}`, found `{}`",
            serde_json::to_value(want).expect("unit variant").as_str().expect("string"),
            serde_json::to_value(over).expect("unit variant").as_str().expect("string"),
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------- reports

fn records(groups: &[HomologyGroup]) -> Vec<HomologyRecord> {
    groups.iter().enumerate().map(|(d, g)| g.to_record(d)).collect()
}

fn matrices(ms: &[IntMatrix]) -> Vec<MatrixDoc> {
    ms.iter().map(MatrixDoc::from_matrix).collect()
}

struct Ctx {
    opts: Options,
    n: usize,
    t: usize,
}

impl Ctx {
    fn render(&self, report: Value, text: String) -> String {
        match self.opts.format {
            Format::Json => to_json(&report),
            Format::Text => text + "\n",
        }
    }

    fn groups(&self, command: &str, prefix: &str, groups: &[HomologyGroup], extra: Option<(&str, Value)>) -> String {
        let mut report = json!({
            "command": command,
            "max_dim": self.n,
            "truncation": self.t,
            "groups": records(groups),
        });
        let mut text = format_groups(prefix, groups);
        if let Some((k, v)) = extra {
            if self.opts.format == Format::Text {
                text.push('\n');
                text.push_str(&serde_json::to_string_pretty(&v).expect("json"));
            }
            report[k] = v;
        }
        self.render(report, text)
    }

    /// Writes a produced document to `--output` or returns it for stdout.
    fn document(&self, kind: DocType, json_text: String, summary: String) -> Result<String> {
        match &self.opts.output {
            Some(p) => {
                fs::write(p, &json_text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                let report = json!({"command": kind.to_string(), "output": p.display().to_string(), "summary": summary});
                Ok(self.render(report, format!("wrote {kind} to {} ({summary})", p.display())))
            }
            None => Ok(json_text),
        }
    }
}

fn counts_summary(t: &CubesTable) -> String {
    let c: Vec<String> = t.counts().iter().map(usize::to_string).collect();
    format!("cubes per dimension: {}", c.join(", "))
}

// ---------------------------------------------------------------- commands

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(o) => o,
        Err(e) => {
            let code = e.exit_code();
            let stdout = match cli.opts.format {
                Format::Json => to_json(&json!({"error": e.to_string(), "exit_code": code})),
                Format::Text => String::new(),
            };
            Outcome {
                code,
                stdout,
                stderr: format!("error: {e}\n"),
            }
        }
    }
}

fn ok(stdout: String) -> Result<Outcome> {
    Ok(Outcome {
        code: 0,
        stdout,
        stderr: String::new(),
    })
}

fn verdict(pass: bool, stdout: String) -> Result<Outcome> {
    Ok(Outcome {
        code: if pass { 0 } else { 1 },
        stdout,
        stderr: String::new(),
    })
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let n = cli.opts.max_dim;
    let t = cli.opts.truncation.unwrap_or(n + 1);
    if t < n + 1 {
        return Err(CliError::Usage(format!("truncation {t} is below max-dim + 1 = {}", n + 1)));
    }
    let ctx = Ctx {
        opts: cli.opts.clone(),
        n,
        t,
    };
    match &cli.command {
        Command::Validate {
            set,
            system,
            map,
            category,
            diagram,
        } => validate(&ctx, set, system, map, category, diagram),
        Command::Homology(a) => {
            let base = load_base(&a.set)?;
            let f = match &a.system {
                Some(p) => load_system(p, &base, t)?,
                None => constant_system(&base.table(t).map_err(|e| CliError::Usage(e.to_string()))?, 1, Variance::Contravariant),
            };
            let groups = homology(&f, n)?;
            let extra = ctx.opts.dump_complex.then(|| -> Result<(&str, Value)> {
                let rep = normalized_complex(&f)?;
                Ok(("complex", json!({
                    "ranks": rep.complex.ranks(),
                    "boundaries": matrices(rep.complex.boundaries()),
                })))
            });
            ok(ctx.groups("homology", "H_", &groups, extra.transpose()?))
        }
        Command::Cohomology(a) => {
            let base = load_base(&a.set)?;
            let g = match &a.system {
                Some(p) => load_system(p, &base, t)?,
                None => constant_system(&base.table(t).map_err(|e| CliError::Usage(e.to_string()))?, 1, Variance::Covariant),
            };
            let groups = cohomology(&g, n)?;
            let extra = ctx.opts.dump_complex.then(|| -> Result<(&str, Value)> {
                let rep = cochain_complex(&g)?;
                Ok(("complex", json!({
                    "ranks": rep.complex.ranks(),
                    "coboundaries": matrices(rep.complex.coboundaries()),
                })))
            });
            ok(ctx.groups("cohomology", "H^", &groups, extra.transpose()?))
        }
        Command::SemicubicalHomology { set, system } => {
            let s = load_semi(set)?;
            let f = load_semi_system(system.as_deref(), &s)?;
            ok(ctx.groups("semicubical-homology", "H_", &semicubical_homology(&f, n)?, None))
        }
        Command::Universal { set } => {
            let s = load_semi(set)?;
            let x = universal_from_semicubical(&s);
            let summary = format!("{} generators", x.generators().count());
            ctx.document(DocType::CubicalSet, to_json(&SetDoc::from_set(&x)), summary).and_then(ok)
        }
        Command::Product { left, right } => {
            let a = table_of(left, t)?;
            let b = table_of(right, t)?;
            let p = cubical::cubset::product_tables(&a, &b)?;
            ctx.document(DocType::CubesTable, to_json(&TableDoc::from_table(&p)), counts_summary(&p)).and_then(ok)
        }
        Command::Fiber { map, cube } => {
            let f = load_map(map)?;
            let y = f
                .target()
                .cube_from_key(cube)
                .map_err(|e| CliError::Usage(format!("--cube: {e}")))?;
            let fiber = pullback_fiber(&f, &y, t)?;
            ctx.document(DocType::CubesTable, to_json(&TableDoc::from_table(&fiber)), counts_summary(&fiber))
                .and_then(ok)
        }
        Command::FiberCriterion(a) => {
            let f = load_map(&a.map)?;
            let rep = fiber_criterion(&f, n, t)?;
            let mut text = String::new();
            for e in rep.failures() {
                let gs: Vec<String> = e
                    .homology
                    .iter()
                    .map(|r| format!("{}", record_group(r)))
                    .enumerate()
                    .map(|(d, g)| format!("H_{d} = {g}"))
                    .collect();
                text.push_str(&format!("fails at {} (dim {}): {}\n", e.cube, e.dim, gs.join("; ")));
            }
            text.push_str(&format!(
                "fiber criterion: {} ({} cubes checked)",
                if rep.verdict { "pass" } else { "fail" },
                rep.entries.len()
            ));
            let mut report = serde_json::to_value(&rep).expect("json");
            report["command"] = json!("fiber-criterion");
            report["max_dim"] = json!(n);
            report["truncation"] = json!(t);
            verdict(rep.verdict, ctx.render(report, text))
        }
        Command::DirectImage(a) => {
            let f = load_map(&a.map)?;
            let sys = load_system(&a.system, &Base::Set(f.source().clone()), t)?;
            let pushed = direct_image(&f, &sys)?;
            ctx.document(DocType::System, to_json(&SystemDoc::from_system(&pushed)), system_summary(&pushed))
                .and_then(ok)
        }
        Command::PullbackSystem(a) => {
            let f = load_map(&a.map)?;
            let sys = load_system(&a.system, &Base::Set(f.target().clone()), t)?;
            let pulled = pullback_system(&f, &sys)?;
            ctx.document(DocType::System, to_json(&SystemDoc::from_system(&pulled)), system_summary(&pulled))
                .and_then(ok)
        }
        Command::CatHomology(a) => {
            let (_, _, d) = load_diagram(&a.diagram)?;
            ok(ctx.groups("cat-homology", "H_", &category_homology(d.category(), &d, n)?, None))
        }
        Command::CatCohomology(a) => {
            let (_, _, d) = load_diagram(&a.diagram)?;
            ok(ctx.groups("cat-cohomology", "H^", &category_cohomology(d.category(), &d, n)?, None))
        }
        Command::Nerve { category } => {
            let c = load_category(category)?;
            let nerve = cubical_nerve(&c, t)?;
            ctx.document(DocType::CubesTable, to_json(&TableDoc::from_table(&nerve.table)), counts_summary(&nerve.table))
                .and_then(ok)
        }
        Command::Bw(a) | Command::BwOracle(a) => {
            let (c, over, d) = load_diagram(&a.diagram)?;
            require_over(over, Over::Factorization, "bw")?;
            let (name, groups) = match &cli.command {
                Command::Bw(_) => ("bw", bw_cohomology_cubical(&c, &d, n)?),
                _ => ("bw-oracle", bw_cohomology_oracle(&c, &d, n)?),
            };
            ok(ctx.groups(name, "H^", &groups, None))
        }
        Command::Compare {
            contract,
            set,
            system,
            map,
            diagram,
        } => compare(&ctx, *contract, set, system, map, diagram),
    }
}

fn record_group(r: &HomologyRecord) -> String {
    let torsion: Vec<i64> = r.torsion.iter().filter_map(|v| v.as_i64()).collect();
    if torsion.len() == r.torsion.len() {
        HomologyGroup::new(r.betti, torsion).to_string()
    } else {
        serde_json::to_string(r).expect("json")
    }
}

fn system_summary(f: &CoefficientSystem) -> String {
    let r: Vec<String> = (0..=f.truncation()).map(|n| f.total_rank(n).to_string()).collect();
    format!("total rank per dimension: {}", r.join(", "))
}

fn load_semi(path: &Path) -> Result<SemiCubicalSet> {
    let input = Input::read(path)?;
    let s = input.parse::<SemiDoc>(DocType::SemicubicalSet)?.to_semi().map_err(|e| input.err(e))?;
    ensure_valid(&input.path, s.validate())?;
    Ok(s)
}

fn table_of(path: &Path, t: usize) -> Result<CubesTable> {
    load_base(path)?.table(t).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn validate(
    ctx: &Ctx,
    set: &Option<PathBuf>,
    system: &Option<PathBuf>,
    map: &Option<PathBuf>,
    category: &Option<PathBuf>,
    diagram: &Option<PathBuf>,
) -> Result<Outcome> {
    let mut checked: Vec<(String, DocType, ValidationReport)> = Vec::new();
    let mut base = None;
    if let Some(p) = set {
        let (input, s) = load_set(p)?;
        let rep = set_report(&s);
        if rep.is_valid() {
            base = Some(s);
        }
        checked.push((input.path.clone(), input.ty()?, rep));
    }
    if let Some(p) = system {
        let input = Input::read(p)?;
        let ty = input.ty()?;
        let rep = match (ty, &base) {
            (DocType::System, Some(SetLike::Set(x))) => system_validation(&input, &Base::Set(x.clone()), ctx.t)?,
            (DocType::System, Some(SetLike::Table(tab))) => system_validation(&input, &Base::Table(tab.clone()), ctx.t)?,
            (DocType::System, Some(SetLike::Semi(s))) => {
                system_validation(&input, &Base::Set(universal_from_semicubical(s)), ctx.t)?
            }
            (DocType::SemicubicalSystem, Some(SetLike::Semi(s))) => input
                .parse::<SemiSystemDoc>(ty)?
                .to_system(s)
                .map_err(|e| input.err(e))?
                .validate(),
            (_, None) if set.is_some() => return Err(CliError::Invalid(render_checked(&checked))),
            _ => return Err(CliError::Usage("--system needs a matching --set".into())),
        };
        checked.push((input.path.clone(), ty, rep));
    }
    if let Some(p) = map {
        let input = Input::read(p)?;
        let f = input.parse::<MapDoc>(DocType::CubicalMap)?.to_map().map_err(|e| input.err(e))?;
        let mut rep = f.source().validate();
        rep.extend(f.target().validate());
        if rep.is_valid() {
            rep.extend(f.validate());
        }
        checked.push((input.path.clone(), DocType::CubicalMap, rep));
    }
    if let Some(p) = category {
        let input = Input::read(p)?;
        let c = input.parse::<CategoryDoc>(DocType::Category)?.to_category().map_err(|e| input.err(e))?;
        checked.push((input.path.clone(), DocType::Category, c.validate()));
    }
    if let Some(p) = diagram {
        let input = Input::read(p)?;
        let doc: DiagramDoc = input.parse(DocType::Diagram)?;
        let (c, d) = doc.to_diagram().map_err(|e| input.err(e))?;
        let mut rep = c.validate();
        if rep.is_valid() {
            rep.extend(d.validate());
        }
        checked.push((input.path.clone(), DocType::Diagram, rep));
    }
    if checked.is_empty() {
        return Err(CliError::Usage("validate needs at least one input".into()));
    }
    let valid = checked.iter().all(|c| c.2.is_valid());
    let report = json!({
        "command": "validate",
        "valid": valid,
        "checked": checked.iter().map(|(p, ty, rep)| json!({
            "path": p,
            "type": ty,
            "valid": rep.is_valid(),
            "violations": rep.violations,
        })).collect::<Vec<_>>(),
    });
    verdict(valid, ctx.render(report, render_checked(&checked)))
}

fn system_validation(input: &Input, base: &Base, t: usize) -> Result<ValidationReport> {
    let doc: SystemDoc = input.parse(DocType::System)?;
    Ok(doc.to_system(base, t).map_err(|e| input.err(e))?.validate())
}

fn render_checked(checked: &[(String, DocType, ValidationReport)]) -> String {
    let mut out = Vec::new();
    for (p, ty, rep) in checked {
        if rep.is_valid() {
            out.push(format!("{p}: valid {ty}"));
        } else {
            out.push(format!("{p}: invalid {ty}, {} violation(s)", rep.violations.len()));
            out.extend(rep.violations.iter().map(|v| format!("  {}: {}", v.relation, v.witness)));
        }
    }
    out.join("\n")
}

fn compare(
    ctx: &Ctx,
    contract: Contract,
    set: &Option<PathBuf>,
    system: &Option<PathBuf>,
    map: &Option<PathBuf>,
    diagram: &Option<PathBuf>,
) -> Result<Outcome> {
    let (n, t) = (ctx.n, ctx.t);
    let (name, lhs, rhs) = match contract {
        Contract::Dirhomol => {
            let f = load_map(need(map, "map")?)?;
            let src = Base::Set(f.source().clone());
            let sys = match system {
                Some(p) => load_system(p, &src, t)?,
                None => constant_system(&f.source().expand(t), 1, Variance::Contravariant),
            };
            let pushed = direct_image(&f, &sys)?;
            ("dirhomol", ("source", homology(&sys, n)?), ("direct image", homology(&pushed, n)?))
        }
        Contract::Comloc => {
            let base = load_base(need(set, "set")?)?;
            let sys = load_system(need(system, "system")?, &base, t)?;
            if !sys.is_local() {
                return Err(CliError::Invalid("comloc needs a local system".into()));
            }
            let trunc = |g: Vec<HomologyGroup>| g.into_iter().take(n + 1).collect::<Vec<_>>();
            let local = trunc(homology_of_complex(&normalized_complex_local(&sys)?.complex)?);
            let full = trunc(homology_of_complex(&normalized_complex(&sys)?.complex)?);
            ("comloc", ("local", local), ("normalized", full))
        }
        Contract::Semicubecube => {
            let s = load_semi(need(set, "set")?)?;
            let f = load_semi_system(system.as_deref(), &s)?;
            let (_, ext) = extend_semicubical(&f, t)?;
            ("semicubecube", ("semi-cubical", semicubical_homology(&f, n)?), ("universal", homology(&ext, n)?))
        }
        Contract::Homolcatcub => {
            let (c, over, d) = load_diagram(need(diagram, "diagram")?)?;
            require_over(over, Over::Opposite, "homolcatcub")?;
            let cmp = nerve_vs_bar_comparison(&c, &d, n)?;
            return compare_report(ctx, "homolcatcub", ("nerve", cmp.cubical), ("bar", cmp.oracle));
        }
        Contract::Homolbwcub => {
            let (c, over, d) = load_diagram(need(diagram, "diagram")?)?;
            require_over(over, Over::Factorization, "homolbwcub")?;
            ("homolbwcub", ("nerve", bw_cohomology_cubical(&c, &d, n)?), ("cobar", bw_cohomology_oracle(&c, &d, n)?))
        }
    };
    compare_report(ctx, name, (lhs.0, records(&lhs.1)), (rhs.0, records(&rhs.1)))
}

fn compare_report(
    ctx: &Ctx,
    contract: &str,
    lhs: (&str, Vec<HomologyRecord>),
    rhs: (&str, Vec<HomologyRecord>),
) -> Result<Outcome> {
    let equal = lhs.1 == rhs.1;
    let line = |(label, rs): &(&str, Vec<HomologyRecord>)| {
        let gs: Vec<String> = rs
            .iter()
            .map(|r| format!("{}{} = {}", if contract == "homolbwcub" { "H^" } else { "H_" }, r.degree, record_group(r)))
            .collect();
        format!("{label}: {}", gs.join("; "))
    };
    let text = format!(
        "{}\n{}\n{contract}: {}",
        line(&lhs),
        line(&rhs),
        if equal { "equal" } else { "unequal" }
    );
    let report = json!({
        "command": "compare",
        "contract": contract,
        "max_dim": ctx.n,
        "truncation": ctx.t,
        "lhs": {"label": lhs.0, "groups": lhs.1},
        "rhs": {"label": rhs.0, "groups": rhs.1},
        "equal": equal,
    });
    verdict(equal, ctx.render(report, text))
}

/// Caps the global rayon pool from `CUBICAL_THREADS` when it is set.
#[cfg(feature = "parallel")]
pub fn configure_threads() {
    if let Some(n) = std::env::var("CUBICAL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

#[cfg(not(feature = "parallel"))]
pub fn configure_threads() {}
