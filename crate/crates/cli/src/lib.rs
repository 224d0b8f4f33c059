//! Command-line front end for the `ktower` engine.
//!
//! [`run`] parses an argument vector and executes one subcommand in
//! process, returning the exit code and both output streams. Exit codes:
//! 0 success, 1 bad input, 2 resource cap or window too small, 3 internal
//! invariant violation.

pub mod io;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use ktower::algebras::{bimodule_aut_group, Algebra, Bimodule};
use ktower::blakers::{bm_check, campaign, BmReport, PushoutProblem};
use ktower::dga::DgAlgebra;
use ktower::exactla::Convention;
use ktower::hochschild::{hh, HochschildComplex};
use ktower::moduli::{a_infinity_check, classify, k_invariant_with, model_class, oracle_classify, realize};
use ktower::{Caps, Error, ErrorClass, Result};

use io::{AlgebraFile, BimoduleFile, ClassFile, DgaFile, FieldSpec, ModelFile, ProblemFile, SemifreeFile};
use report::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    RowEchelon,
    Reversed,
}

#[derive(Debug, Parser)]
#[command(name = "ktower", version, about = "Postnikov extensions of DG algebras")]
struct Cli {
    /// Output format; `machine` emits a single JSON document.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CapArgs {
    /// Largest End(M) dimension enumerated for Aut(M).
    #[arg(long, global = true)]
    cap_aut_dim: Option<usize>,
    /// Largest number of candidates walked by one enumeration.
    #[arg(long, global = true)]
    cap_enumeration: Option<u64>,
    /// Largest cochain space materialized.
    #[arg(long, global = true)]
    cap_tensor: Option<u64>,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        let d = Caps::default();
        Caps {
            aut_dim: self.cap_aut_dim.unwrap_or(d.aut_dim),
            enumeration: self.cap_enumeration.unwrap_or(d.enumeration),
            tensor: self.cap_tensor.unwrap_or(d.tensor),
        }
    }
}

#[derive(Debug, Args)]
struct Pair {
    #[arg(long)]
    algebra: PathBuf,
    #[arg(long)]
    bimodule: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hochschild cohomology HH^s(A, M).
    Hh {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        unnormalized: bool,
        /// Write one class file per basis class into this directory.
        #[arg(long)]
        emit_classes: Option<PathBuf>,
    },
    /// Lists the bimodule automorphisms of M.
    Aut {
        #[command(flatten)]
        pair: Pair,
    },
    /// Extensions of type (M, n) up to equivalence.
    Classify {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        n: usize,
        /// Enumeration cap for this run.
        #[arg(long)]
        cap: Option<u64>,
        /// Write one class file per orbit representative into this directory.
        #[arg(long)]
        emit_classes: Option<PathBuf>,
    },
    /// Brute-force count over all cochains.
    Oracle {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cap: u64,
    },
    /// Minimal model realizing a class, with its coherence check.
    Realize {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        class: PathBuf,
        /// Where to write the model file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// k-invariant of a DGA with homology in degrees 0 and n.
    Kinv {
        /// A DGA file or a semifree file.
        #[arg(long)]
        dga: PathBuf,
        #[arg(long)]
        n: usize,
        /// Window override for semifree input.
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, value_enum, default_value = "row-echelon")]
        convention: ConventionArg,
    },
    /// Postnikov truncation.
    Truncate {
        #[arg(long)]
        dga: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Blakers–Massey connectivity check on a pushout.
    BmCheck {
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        problem: Option<PathBuf>,
        /// Number of random instances.
        #[arg(long)]
        random: Option<u64>,
        /// First seed of the random campaign.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Window override for the problem file.
        #[arg(long, conflicts_with = "random")]
        window: Option<usize>,
    },
    /// Checks that an input file parses and satisfies its axioms.
    Validate {
        file: PathBuf,
        /// Algebra for bimodule, class and model-independent checks.
        #[arg(long)]
        algebra: Option<PathBuf>,
        #[arg(long)]
        bimodule: Option<PathBuf>,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Input => 1,
        ErrorClass::Resource => 2,
        ErrorClass::Internal => 3,
    }
}

/// Runs one command; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let caps = cli.caps.caps();
    match dispatch(cli.command, cli.format, &caps) {
        Ok((stdout, None)) => Outcome { code: 0, stdout, stderr: String::new() },
        Ok((stdout, Some(e))) => Outcome { code: exit_code(&e), stdout, stderr: format!("error: {e}\n") },
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn emit<R: Report>(command: &str, r: &R, format: Format) -> String {
    #[derive(Serialize)]
    struct Doc<'a, R> {
        command: &'a str,
        report: &'a R,
    }
    match format {
        Format::Text => r.text(),
        Format::Machine => io::to_json(&Doc { command, report: r }),
    }
}

fn load_pair(p: &Pair) -> Result<(Algebra, Bimodule)> {
    let a = io::read::<AlgebraFile>(&p.algebra)?.build()?;
    let m = io::read::<BimoduleFile>(&p.bimodule)?.build(&a)?;
    Ok((a, m))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))
}

fn emit_classes(dir: &Path, prefix: &str, classes: &[ClassFile]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Invalid(format!("cannot create {}: {e}", dir.display())))?;
    for (i, c) in classes.iter().enumerate() {
        write_file(&dir.join(format!("{prefix}_{i}.json")), &io::to_json(c))?;
    }
    Ok(())
}

/// Loads a DGA file, or expands a semifree file within its window.
fn load_dga(path: &Path, window: Option<usize>) -> Result<DgAlgebra> {
    let v = io::read_value(path)?;
    if v.get("generators").is_some() {
        let s: SemifreeFile = serde_json::from_value(v).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        s.build(window)?.expand()
    } else {
        if window.is_some() {
            return Err(Error::Invalid("--window applies to semifree input only".into()));
        }
        let d: DgaFile = serde_json::from_value(v).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        d.build()
    }
}

fn load_problem(path: &Path, window: Option<usize>, caps: &Caps) -> Result<PushoutProblem> {
    let f: ProblemFile = io::read(path)?;
    let base = f.base.build(window)?;
    let cells = |v: &[io::GeneratorSpec]| v.iter().map(io::GeneratorSpec::cell).collect::<Vec<_>>();
    PushoutProblem::new(&base, &cells(&f.cells_b), &cells(&f.cells_c), f.m, f.n, caps)
}

fn bm_row(seed: Option<u64>, r: &BmReport) -> BmRow {
    BmRow {
        seed,
        m: r.m,
        n: r.n,
        window: r.window,
        bound: r.bound,
        connectivity: r.comparison.c,
        window_limited: r.comparison.window_limited,
        first_nonvanishing: r.comparison.first_nonvanishing,
        verified: r.verified,
        relative_degrees: r.relative.len(),
        relative_holds: r.relative.iter().all(|d| d.holds),
        sharp: r.sharp,
        unit_boundary: r.unit_boundary,
        violation: r.violation(),
    }
}

type Dispatched = (String, Option<Error>);

fn dispatch(command: Command, format: Format, caps: &Caps) -> Result<Dispatched> {
    let ok = |s: String| Ok((s, None));
    match command {
        Command::Hh { pair, degree, unnormalized, emit_classes: dir } => {
            let (a, m) = load_pair(&pair)?;
            let complex = HochschildComplex::with_caps(&a, &m, !unnormalized, *caps)?;
            let h = hh(&a, &m, degree, !unnormalized, caps)?;
            let reps = h.representatives();
            if let Some(dir) = dir {
                let files: Vec<ClassFile> = reps
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let mut coords = vec![a.field().zero(); h.dim];
                        coords[i] = a.field().one();
                        ClassFile::of(c, Some(&coords))
                    })
                    .collect();
                emit_classes(&dir, "class", &files)?;
            }
            let r = HhReport {
                field: FieldSpec::of(a.field()),
                level: degree,
                normalized: !unnormalized,
                cochain_dim: complex.cochain_dim(degree)?,
                dim: h.dim,
                context: h.context.clone(),
                representatives: reps.iter().map(|c| io::scalars(&c.cochain)).collect(),
            };
            ok(emit("hh", &r, format))
        }
        Command::Aut { pair } => {
            let (a, m) = load_pair(&pair)?;
            let group = bimodule_aut_group(&m, caps)?;
            let r = AutReport {
                field: FieldSpec::of(a.field()),
                order: group.len(),
                maps: group.iter().map(|s| io::matrix_strings(&s.matrix)).collect(),
            };
            ok(emit("aut", &r, format))
        }
        Command::Classify { pair, n, cap, emit_classes: dir } => {
            let (a, m) = load_pair(&pair)?;
            let caps = Caps { enumeration: cap.unwrap_or(caps.enumeration), ..*caps };
            let rep = classify(&a, &m, n, &caps)?;
            if let Some(dir) = dir {
                let files: Vec<ClassFile> =
                    rep.representatives.iter().map(|o| ClassFile::of(&o.class, Some(&o.coords))).collect();
                emit_classes(&dir, "orbit", &files)?;
            }
            let r = ClassifyReport {
                field: FieldSpec::of(rep.field),
                n,
                hh_dim: rep.hh_dim,
                aut_order: rep.aut_order,
                orbit_count: rep.orbit_count,
                representatives: rep
                    .representatives
                    .iter()
                    .map(|o| OrbitRow { coords: io::scalars(&o.coords), orbit_size: o.orbit_size })
                    .collect(),
                classes_enumerated: rep.stats.classes_enumerated,
                action_applications: rep.stats.action_applications,
            };
            ok(emit("classify", &r, format))
        }
        Command::Oracle { pair, n, cap } => {
            let (a, m) = load_pair(&pair)?;
            let o = oracle_classify(&a, &m, n, cap)?;
            let r = OracleReport {
                field: FieldSpec::of(a.field()),
                n,
                count: o.count,
                aut_order: o.aut_order,
                cochains_enumerated: o.cochains_enumerated,
                cocycles: o.cocycles,
                classes: o.classes.iter().map(|c| io::scalars(c)).collect(),
            };
            ok(emit("oracle", &r, format))
        }
        Command::Realize { pair, n, class, out } => {
            let (a, m) = load_pair(&pair)?;
            let c = io::read::<ClassFile>(&class)?.build(a.field())?;
            let model = realize(&a, &m, n, &c, caps)?;
            let norm = HochschildComplex::with_caps(&a, &m, true, *caps)?;
            let s = n + 2;
            let input = if c.context == norm.context(s) {
                norm.cohomology(s)?.coords(&c.cochain)
            } else {
                norm.class_of_unnormalized(s, &c.cochain)?
            };
            let back = model_class(&model, caps)?;
            let check = a_infinity_check(&model);
            let model_file = match &out {
                Some(p) => {
                    write_file(p, &io::to_json(&ModelFile::of(&model)))?;
                    Some(p.display().to_string())
                }
                None => None,
            };
            let r = RealizeReport {
                n,
                arity: model.arity(),
                round_trip: input == back.coords,
                input_coords: io::scalars(&input),
                read_back: io::scalars(&back.coords),
                check: CheckReport {
                    passed: check.passed(),
                    associativity_failures: check.associativity.len(),
                    module_failures: check.module.clone(),
                    cocycle_failures: check.cocycle.len(),
                    shape_failures: check.shape.clone(),
                },
                model_file,
            };
            let failure = if !r.round_trip {
                Some(Error::Internal("realized model does not carry the input class".into()))
            } else if !r.check.passed {
                Some(Error::Internal("realized model fails the A-infinity check".into()))
            } else {
                None
            };
            Ok((emit("realize", &r, format), failure))
        }
        Command::Kinv { dga, n, window, convention } => {
            let y = load_dga(&dga, window)?;
            let conv = match convention {
                ConventionArg::RowEchelon => Convention::RowEchelon,
                ConventionArg::Reversed => Convention::Reversed,
            };
            let k = k_invariant_with(&y, n, conv, caps)?;
            let r = KinvReport {
                n,
                convention: format!("{convention:?}").to_lowercase(),
                h0_dim: k.model.algebra.dim(),
                hn_dim: k.model.bimodule.dim(),
                hh_dim: k.class.coords.len(),
                zero: k.class.is_zero(),
                coords: io::scalars(&k.class.coords),
                class: ClassFile::of(&k.class.class, Some(&k.class.coords)),
            };
            ok(emit("kinv", &r, format))
        }
        Command::Truncate { dga, n, out, window } => {
            let c = load_dga(&dga, window)?;
            let t = c.truncate(n)?;
            let homology = |x: &DgAlgebra| -> Result<Vec<usize>> {
                (0..=x.hi()).map(|i| x.homology(i).map(|h| h.dim)).collect()
            };
            write_file(&out, &io::to_json(&DgaFile::of(&t)))?;
            let r = TruncateReport {
                n,
                dims_before: c.dims().to_vec(),
                dims_after: t.dims().to_vec(),
                homology_before: homology(&c)?,
                homology_after: homology(&t)?,
                out: out.display().to_string(),
            };
            ok(emit("truncate", &r, format))
        }
        Command::BmCheck { problem, random, seed, window } => {
            let rows = match (problem, random) {
                (Some(p), _) => vec![bm_row(None, &bm_check(&load_problem(&p, window, caps)?)?)],
                (None, Some(count)) => campaign(seed, count, caps)?
                    .iter()
                    .map(|e| bm_row(Some(e.seed), &e.report))
                    .collect(),
                (None, None) => return Err(Error::Invalid("give --problem or --random".into())),
            };
            let violations = rows.iter().filter(|r| r.violation).count();
            let t = BmTable { instances: rows.len(), violations, rows };
            let failure = (violations > 0)
                .then(|| Error::Internal(format!("{violations} instances violate the connectivity estimate")));
            Ok((emit("bm-check", &t, format), failure))
        }
        Command::Validate { file, algebra, bimodule } => {
            let r = validate(&file, algebra.as_deref(), bimodule.as_deref(), caps)?;
            ok(emit("validate", &r, format))
        }
    }
}

fn parse_as<T: for<'de> serde::Deserialize<'de>>(path: &Path, v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn need<'a>(p: Option<&'a Path>, flag: &str, kind: &str) -> Result<&'a Path> {
    p.ok_or_else(|| Error::Invalid(format!("validating a {kind} file needs --{flag}")))
}

/// Validates one file, or every file listed in a manifest.
fn validate(path: &Path, algebra: Option<&Path>, bimodule: Option<&Path>, caps: &Caps) -> Result<ValidateAll> {
    let v = io::read_value(path)?;
    if v.get("manifest").is_some() {
        let man: io::Manifest = parse_as(path, v)?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let mut files = Vec::new();
        for e in man.entries() {
            let alg = e.algebra.as_ref().map(|p| dir.join(p));
            let bim = e.bimodule.as_ref().map(|p| dir.join(p));
            files.extend(validate(&dir.join(&e.file), alg.as_deref(), bim.as_deref(), caps)?.files);
        }
        return Ok(ValidateAll { files });
    }
    let obj = v.as_object().ok_or_else(|| Error::Invalid(format!("{}: expected a JSON object", path.display())))?;
    let (kind, summary) = if obj.contains_key("operation") {
        let model: ModelFile = parse_as(path, v)?;
        let e = model.build()?;
        let check = a_infinity_check(&e);
        if !check.passed() {
            return Err(Error::Invalid(format!("model fails the A-infinity check: {check:?}")));
        }
        ("model", format!("m_{} over dim {} algebra, A-infinity check passed", e.arity(), e.algebra.dim()))
    } else if obj.contains_key("cochain") {
        let a = io::read::<AlgebraFile>(need(algebra, "algebra", "class")?)?.build()?;
        let m = io::read::<BimoduleFile>(need(bimodule, "bimodule", "class")?)?.build(&a)?;
        let class: ClassFile = parse_as(path, v)?;
        let c = class.build(a.field())?;
        let mut found = None;
        for normalized in [true, false] {
            let cx = HochschildComplex::with_caps(&a, &m, normalized, *caps)?;
            if cx.context(c.level) == c.context {
                if !cx.is_cocycle(c.level, &c.cochain)? {
                    return Err(Error::Invalid("class representative is not a cocycle".into()));
                }
                found = Some(normalized);
            }
        }
        let normalized = found.ok_or_else(|| {
            Error::BimoduleMismatch("class context does not match the given (A, M, level)".into())
        })?;
        let which = if normalized { "normalized" } else { "unnormalized" };
        ("class", format!("{which} cocycle at level {}", c.level))
    } else if obj.contains_key("cells_b") {
        let p = load_problem(path, None, caps)?;
        ("problem", format!("m = {}, n = {}, window {}", p.m(), p.n(), p.window()))
    } else if obj.contains_key("generators") {
        let s: SemifreeFile = parse_as(path, v)?;
        let x = s.build(None)?;
        let dims = x.dims()?;
        ("semifree", format!("{} generators, dims {dims:?}", x.generators().len()))
    } else if obj.contains_key("degrees") {
        let d: DgaFile = parse_as(path, v)?;
        let c = d.build()?;
        ("dga", format!("dims {:?}", c.dims()))
    } else if obj.contains_key("left") {
        let a = io::read::<AlgebraFile>(need(algebra, "algebra", "bimodule")?)?.build()?;
        let m = parse_as::<BimoduleFile>(path, v)?.build(&a)?;
        ("bimodule", format!("dim {}", m.dim()))
    } else if obj.contains_key("product") {
        let a = parse_as::<AlgebraFile>(path, v)?.build()?;
        ("algebra", format!("dim {} over {}", a.dim(), a.field()))
    } else {
        return Err(Error::Invalid(format!("{}: unrecognized document", path.display())));
    };
    Ok(ValidateAll {
        files: vec![ValidateReport {
            file: path.display().to_string(),
            kind: kind.to_string(),
            valid: true,
            summary,
        }],
    })
}
