use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use supercohom::cochain::{differential_matrix, Cochain, CochainSpace};
use supercohom::cohomology::{cocycle_families, cohomology, restricted_cohomology, Theory};
use supercohom::constructions::{
    central_extension, module_equivalence, module_extension_from_cocycle, restricted_derivations,
    section_to_cocycle, ConstructionError,
};
use supercohom::field;
use supercohom::filiform::FiliformSpec;
use supercohom::io::{
    parse_algebra, parse_module, AlgebraJson, CochainJson, ModuleJson, ReportJson,
    RestrictedTwoJson,
};
use supercohom::linalg::is_zero;
use supercohom::report::CheckReport;
use supercohom::repr::Representation;
use supercohom::restricted::{RestrictedSpace, RestrictedTwoCochain};
use supercohom::superalg::{strongly_abelian, Parity, SuperAlgebra};

mod render;

// Write errors (a closed pipe) are ignored.
macro_rules! put {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "supercohom",
    version,
    about = "Cohomology of restricted Lie superalgebras over GF(p)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args, Clone, Debug)]
struct Source {
    /// Algebra JSON file
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Prime for the filiform family
    #[arg(long)]
    p: Option<u64>,
    /// Comma-separated p-map coefficients (restricted filiform family)
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args, Clone, Debug)]
struct Output {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Check the superalgebra axioms, the restricted structure and optionally a module
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        module: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Ordinary or restricted cohomology in degree 0, 1 or 2
    Cohom {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "trivial")]
        module: String,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long)]
        restricted: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Restricted superderivations
    Derivations {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Central extension by a one-dimensional even kernel
    ExtendCentral {
        #[command(flatten)]
        source: Source,
        /// Restricted 2-cocycle JSON ({phi, omega}); random if absent
        #[arg(long)]
        cocycle: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Extension of the trivial module by --module
    ExtendModule {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "trivial")]
        module: String,
        /// 1-cocycle JSON with values in Hom(trivial, module); random if absent
        #[arg(long)]
        cocycle: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// The 2-cocycle families of L_{p,p}
    Families {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Cohomology dimensions over a grid of primes and p-map parameters
    Sweep {
        /// Comma-separated primes
        #[arg(long, default_value = "3")]
        p: String,
        /// Comma-separated: zero, units, random:N
        #[arg(long, default_value = "")]
        lambdas: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

/// Exit 2 for bad input, 1 for a failed check or precondition.
enum Failure {
    Input(String),
    Semantic(String),
}

fn input(e: impl Display) -> Failure {
    Failure::Input(e.to_string())
}

fn semantic(e: impl Display) -> Failure {
    Failure::Semantic(e.to_string())
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn parse_residues(text: &str, p: u32) -> Result<Vec<u32>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map(|v| field::reduce(v, p))
                .map_err(|e| input(format!("bad lambda entry {s:?}: {e}")))
        })
        .collect()
}

struct Loaded {
    algebra: Arc<SuperAlgebra>,
    lambda: Option<Vec<u32>>,
}

fn load_algebra(src: &Source) -> Result<Loaded, Failure> {
    if let Some(path) = &src.algebra {
        if src.p.is_some() || src.lambda.is_some() || src.n.is_some() || src.m.is_some() {
            return Err(input(
                "--algebra cannot be combined with --p, --lambda, --n, --m",
            ));
        }
        let algebra =
            parse_algebra(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))?;
        return Ok(Loaded {
            algebra: Arc::new(algebra),
            lambda: None,
        });
    }
    let p = src.p.ok_or_else(|| input("give --algebra or --p"))?;
    let pu = field::check_modulus(p).map_err(input)?;
    let lambda = match (&src.lambda, src.n.is_some() || src.m.is_some()) {
        (Some(t), _) => Some(parse_residues(t, pu)?),
        (None, true) => None,
        (None, false) => Some(vec![0; p as usize]),
    };
    let spec = FiliformSpec {
        n: src.n.unwrap_or(p as usize),
        m: src.m.unwrap_or(p as usize),
        lambda: lambda.clone(),
    };
    let algebra = spec.build(p).map_err(input)?;
    Ok(Loaded {
        algebra: Arc::new(algebra),
        lambda,
    })
}

fn load_module(spec: &str, l: &Arc<SuperAlgebra>) -> Result<Representation, Failure> {
    match spec {
        "trivial" => Ok(Representation::trivial(l.clone())),
        "adjoint" => Ok(Representation::adjoint(l.clone())),
        path => {
            let text = read(Path::new(path))?;
            parse_module(&text, l.clone()).map_err(|e| input(format!("{path}: {e}")))
        }
    }
}

fn emit_json(v: &impl Serialize) {
    say!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn require(report: &CheckReport, what: &str) -> Result<(), Failure> {
    match report.failures().next() {
        None => Ok(()),
        Some(e) => Err(semantic(format!(
            "{what}: {} fails{}",
            e.name,
            e.witness
                .as_ref()
                .map(|w| format!(" at {w}"))
                .unwrap_or_default()
        ))),
    }
}

#[derive(Serialize)]
struct CheckOutput {
    passed: bool,
    algebra: CheckReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    module: Option<CheckReport>,
}

fn cmd_check(source: &Source, module: Option<&str>, format: Format) -> Outcome {
    let loaded = load_algebra(source)?;
    let l = &loaded.algebra;
    let mut report = l.check_axioms();
    if l.has_pmap() {
        report.extend(l.check_restricted());
    }
    let module_report = match module {
        None => None,
        Some(spec) => Some(load_module(spec, l)?.check_rep()),
    };
    let passed = report.passed() && module_report.as_ref().map_or(true, |r| r.passed());
    let out = CheckOutput {
        passed,
        algebra: report,
        module: module_report,
    };
    match format {
        Format::Json => emit_json(&out),
        Format::Table => {
            put!("{}", out.algebra);
            if let Some(m) = &out.module {
                say!("module:");
                put!("{m}");
            }
        }
    }
    Ok(passed)
}

fn cmd_cohom(
    source: &Source,
    module: &str,
    degree: usize,
    restricted: bool,
    format: Format,
) -> Outcome {
    if degree > 2 {
        return Err(input(format!("degree must be 0, 1 or 2; got {degree}")));
    }
    let loaded = load_algebra(source)?;
    let l = &loaded.algebra;
    let m = load_module(module, l)?;
    require(&m.check_rep(), "module")?;
    let theory = if restricted {
        Theory::Restricted
    } else {
        Theory::Ordinary
    };
    if restricted {
        if !l.has_pmap() {
            return Err(semantic("restricted cohomology needs a p-map"));
        }
        require(&l.check_restricted(), "algebra")?;
    }
    let h = cohomology(l, &m, degree, theory).map_err(semantic)?;
    let json =
        ReportJson::from_report(l, &m, loaded.lambda.clone(), &h.report).map_err(semantic)?;
    match format {
        Format::Json => emit_json(&json),
        Format::Table => put!("{}", render::report_table(l, &m, &json)),
    }
    Ok(true)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DerivationOutput {
    dim: usize,
    dim_even: usize,
    dim_odd: usize,
    dim_inner: usize,
    dim_outer: usize,
    dim_h1_adjoint: usize,
    derivations: Vec<DerivationJson>,
}

#[derive(Serialize)]
struct DerivationJson {
    parity: &'static str,
    matrix: Vec<Vec<u32>>,
}

fn cmd_derivations(source: &Source, format: Format) -> Outcome {
    let loaded = load_algebra(source)?;
    let l = &loaded.algebra;
    if !l.has_pmap() {
        return Err(semantic("restricted derivations need a p-map"));
    }
    require(&l.check_restricted(), "algebra")?;
    let der = restricted_derivations(l).map_err(semantic)?;
    let inner = l.dim() - l.center_dim();
    let h1 = restricted_cohomology(l, &Representation::adjoint(l.clone()), 1)
        .map_err(semantic)?
        .report
        .dim_h;
    let out = DerivationOutput {
        dim: der.dim(),
        dim_even: der.dim_of(Parity::Even),
        dim_odd: der.dim_of(Parity::Odd),
        dim_inner: inner,
        dim_outer: der.dim() - inner,
        dim_h1_adjoint: h1,
        derivations: der
            .derivations
            .iter()
            .map(|d| DerivationJson {
                parity: if d.parity == Parity::Even {
                    "even"
                } else {
                    "odd"
                },
                matrix: d.matrix.to_rows(),
            })
            .collect(),
    };
    match format {
        Format::Json => emit_json(&out),
        Format::Table => {
            let rows = vec![
                vec!["dim Der_res".into(), out.dim.to_string()],
                vec![
                    "  even / odd".into(),
                    format!("{} / {}", out.dim_even, out.dim_odd),
                ],
                vec!["dim ad L".into(), out.dim_inner.to_string()],
                vec!["dim Der_res / ad L".into(), out.dim_outer.to_string()],
                vec!["dim H^1_*(L; L)".into(), out.dim_h1_adjoint.to_string()],
            ];
            put!("{}", render::table(&[], &rows));
        }
    }
    Ok(out.dim_outer == out.dim_h1_adjoint)
}

#[derive(Serialize)]
struct CentralOutput {
    passed: bool,
    cocycle: RestrictedTwoJson,
    algebra: AlgebraJson,
    checks: CheckReport,
}

fn cmd_extend_central(
    source: &Source,
    cocycle: Option<&Path>,
    seed: u64,
    format: Format,
) -> Outcome {
    let loaded = load_algebra(source)?;
    let l = &loaded.algebra;
    if !l.has_pmap() {
        return Err(semantic("central extensions need a p-map"));
    }
    let k = strongly_abelian(l.p() as u64, 1, 0).map_err(input)?;
    let coeff = Representation::trivial_with_basis(l.clone(), k.basis().clone());
    let rs = RestrictedSpace::new(l, &coeff, 2).map_err(semantic)?;
    let pair = match cocycle {
        Some(path) => {
            let j: RestrictedTwoJson = serde_json::from_str(&read(path)?)
                .map_err(|e| input(format!("{}: {e}", path.display())))?;
            j.to_pair(&rs, l).map_err(input)?
        }
        None => {
            let h = restricted_cohomology(l, &coeff, 2).map_err(semantic)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = h.random_cycle(&rs.coordinate_parities(), Parity::Even, &mut rng);
            RestrictedTwoCochain::from_coords(&rs, &v).map_err(semantic)?
        }
    };
    let ext = match central_extension(l.clone(), &k, &pair) {
        Ok(e) => e,
        Err(e @ (ConstructionError::NotACocycle | ConstructionError::NotEven)) => {
            return Err(semantic(e))
        }
        Err(e) => return Err(input(e)),
    };
    let mut checks = ext.algebra.check_axioms();
    checks.extend(ext.algebra.check_restricted());
    checks.extend(ext.datum.check_exact());
    let back = section_to_cocycle(&ext, &ext.canonical_section()).map_err(semantic)?;
    checks.record(
        "canonical section returns the cocycle",
        (back != pair).then(|| "cocycle differs".to_string()),
    );
    let out = CentralOutput {
        passed: checks.passed(),
        cocycle: RestrictedTwoJson::from_pair(&rs, &pair),
        algebra: AlgebraJson::from_algebra(&ext.algebra),
        checks,
    };
    match format {
        Format::Json => emit_json(&out),
        Format::Table => {
            say!(
                "extension of dimension {} ({}|{})",
                ext.algebra.dim(),
                ext.algebra.n_even(),
                ext.algebra.dim() - ext.algebra.n_even()
            );
            say!("cocycle: {}", render::pair_terms(l, &coeff, &rs, &pair));
            put!("{}", out.checks);
        }
    }
    Ok(out.passed)
}

#[derive(Serialize)]
struct ModuleOutput {
    passed: bool,
    split: bool,
    cocycle: CochainJson,
    module: ModuleJson,
    checks: CheckReport,
}

fn cmd_extend_module(
    source: &Source,
    module: &str,
    cocycle: Option<&Path>,
    seed: u64,
    format: Format,
) -> Outcome {
    let loaded = load_algebra(source)?;
    let l = &loaded.algebra;
    if !l.has_pmap() {
        return Err(semantic("restricted module extensions need a p-map"));
    }
    let n = Representation::trivial(l.clone());
    let m = load_module(module, l)?;
    require(&m.check_rep(), "module")?;
    let hom = Representation::hom(&n, &m).map_err(input)?;
    let space = CochainSpace::new(l, &hom, 1).map_err(semantic)?;
    let phi = match cocycle {
        Some(path) => {
            let j: CochainJson = serde_json::from_str(&read(path)?)
                .map_err(|e| input(format!("{}: {e}", path.display())))?;
            j.to_cochain(&space, l).map_err(input)?
        }
        None => {
            let h = restricted_cohomology(l, &hom, 1).map_err(semantic)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = h.random_cycle(&space.coordinate_parities(), Parity::Even, &mut rng);
            Cochain::from_coords(&space, v).map_err(semantic)?
        }
    };
    let ext = match module_extension_from_cocycle(&n, &m, &phi) {
        Ok(e) => e,
        Err(e @ (ConstructionError::NotACocycle | ConstructionError::NotHomogeneous)) => {
            return Err(semantic(e))
        }
        Err(e) => return Err(input(e)),
    };
    let split_ext =
        module_extension_from_cocycle(&n, &m, &Cochain::zero(&space)).map_err(semantic)?;
    let split = module_equivalence(&ext, &split_ext).is_some();
    let mut checks = ext.module.check_rep();
    checks.extend(ext.datum.check_exact());
    let out = ModuleOutput {
        passed: checks.passed(),
        split,
        cocycle: CochainJson::from_cochain(&space, &phi),
        module: ModuleJson::from_module(&ext.module),
        checks,
    };
    match format {
        Format::Json => emit_json(&out),
        Format::Table => {
            say!("module of dimension {}", ext.module.dim());
            say!(
                "cocycle: {}",
                render::cochain_terms(l, &hom, &space, &phi.coords)
            );
            say!("split: {}", if out.split { "yes" } else { "no" });
            put!("{}", out.checks);
        }
    }
    Ok(out.passed)
}

#[derive(Serialize)]
struct FamilyJson {
    name: String,
    closed: bool,
    cochain: CochainJson,
}

fn cmd_families(p: u64, format: Format) -> Outcome {
    field::check_modulus(p).map_err(input)?;
    let fams = cocycle_families(p).map_err(input)?;
    let l = Arc::new(
        supercohom::filiform::restricted_model_filiform(p, &vec![0; p as usize]).map_err(input)?,
    );
    let t = Representation::trivial(l.clone());
    let space = CochainSpace::new(&l, &t, 2).map_err(semantic)?;
    let d2 = differential_matrix(&l, &t, 2).map_err(semantic)?;
    let out: Vec<FamilyJson> = fams
        .iter()
        .map(|f| FamilyJson {
            name: f.name.clone(),
            closed: is_zero(&d2.mul_vec(&f.cochain.coords)),
            cochain: CochainJson::from_cochain(&space, &f.cochain),
        })
        .collect();
    let ok = out.iter().all(|f| f.closed);
    match format {
        Format::Json => emit_json(&out),
        Format::Table => {
            let rows: Vec<Vec<String>> = out
                .iter()
                .zip(&fams)
                .map(|(f, c)| {
                    vec![
                        f.name.clone(),
                        if f.closed {
                            "closed".into()
                        } else {
                            "NOT CLOSED".into()
                        },
                        render::cochain_terms(&l, &t, &space, &c.cochain.coords),
                    ]
                })
                .collect();
            put!("{}", render::table(&["name", "d2", "cochain"], &rows));
            say!("{} cocycles", out.len());
        }
    }
    Ok(ok)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq, PartialOrd, Ord)]
struct SweepRow {
    p: u64,
    lambda: Vec<u32>,
    class: String,
    h1: usize,
    h1_restricted: usize,
    h2: usize,
    h2_restricted: usize,
}

fn parse_primes(text: &str) -> Result<Vec<u64>, Failure> {
    let mut out = Vec::new();
    for s in text.split(',').filter(|s| !s.trim().is_empty()) {
        let p: u64 = s
            .trim()
            .parse()
            .map_err(|e| input(format!("bad prime {s:?}: {e}")))?;
        field::check_modulus(p).map_err(input)?;
        out.push(p);
    }
    if out.is_empty() {
        return Err(input("no primes given"));
    }
    Ok(out)
}

fn sweep_lambdas(p: u64, spec: &str, seed: u64) -> Result<Vec<(Vec<u32>, String)>, Failure> {
    let n = p as usize;
    let pu = p as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut out = vec![];
    let tokens: Vec<&str> = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if tokens.is_empty() {
        out.push((vec![0; n], "zero".to_string()));
    }
    for tok in tokens {
        match tok {
            "zero" => out.push((vec![0; n], "zero".into())),
            "units" => {
                for k in 1..=n {
                    out.push((supercohom::filiform::unit_lambda(n, k), format!("e{k}")));
                }
            }
            t if t.starts_with("random:") => {
                let count: usize = t["random:".len()..]
                    .parse()
                    .map_err(|e| input(format!("bad sampling spec {t:?}: {e}")))?;
                for _ in 0..count {
                    let lam = loop {
                        let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..pu)).collect();
                        if !is_zero(&v) {
                            break v;
                        }
                    };
                    out.push((lam, "random".into()));
                }
            }
            t => {
                return Err(input(format!(
                    "unknown lambda spec {t:?} (zero, units, random:N)"
                )))
            }
        }
    }
    Ok(out)
}

fn sweep_row(p: u64, lambda: Vec<u32>, class: String) -> Result<SweepRow, String> {
    let l = Arc::new(
        supercohom::filiform::restricted_model_filiform(p, &lambda).map_err(|e| e.to_string())?,
    );
    let t = Representation::trivial(l.clone());
    let dim = |q: usize, theory: Theory| {
        cohomology(&l, &t, q, theory)
            .map(|h| h.report.dim_h)
            .map_err(|e| e.to_string())
    };
    Ok(SweepRow {
        p,
        class,
        h1: dim(1, Theory::Ordinary)?,
        h1_restricted: dim(1, Theory::Restricted)?,
        h2: dim(2, Theory::Ordinary)?,
        h2_restricted: dim(2, Theory::Restricted)?,
        lambda,
    })
}

fn cmd_sweep(primes: &str, lambdas: &str, seed: u64, format: Format) -> Outcome {
    let primes = parse_primes(primes)?;
    let mut jobs = Vec::new();
    for &p in &primes {
        for (lam, class) in sweep_lambdas(p, lambdas, seed)? {
            jobs.push((p, lam, class));
        }
    }
    let mut rows = jobs
        .into_par_iter()
        .map(|(p, lam, class)| sweep_row(p, lam, class))
        .collect::<Result<Vec<_>, String>>()
        .map_err(semantic)?;
    rows.sort();
    rows.dedup();
    match format {
        Format::Json => emit_json(&rows),
        Format::Table => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.p.to_string(),
                        r.lambda
                            .iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                        r.class.clone(),
                        r.h1.to_string(),
                        r.h1_restricted.to_string(),
                        r.h2.to_string(),
                        r.h2_restricted.to_string(),
                    ]
                })
                .collect();
            put!(
                "{}",
                render::table(&["p", "lambda", "class", "H1", "H1_*", "H2", "H2_*"], &body)
            );
        }
    }
    Ok(true)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Check {
            source,
            module,
            out,
        } => cmd_check(source, module.as_deref(), out.format),
        Command::Cohom {
            source,
            module,
            degree,
            restricted,
            out,
        } => cmd_cohom(source, module, *degree, *restricted, out.format),
        Command::Derivations { source, out } => cmd_derivations(source, out.format),
        Command::ExtendCentral {
            source,
            cocycle,
            seed,
            out,
        } => cmd_extend_central(source, cocycle.as_deref(), *seed, out.format),
        Command::ExtendModule {
            source,
            module,
            cocycle,
            seed,
            out,
        } => cmd_extend_module(source, module, cocycle.as_deref(), *seed, out.format),
        Command::Families { p, out } => cmd_families(*p, out.format),
        Command::Sweep {
            p,
            lambdas,
            seed,
            out,
        } => cmd_sweep(p, lambdas, *seed, out.format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Semantic(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
