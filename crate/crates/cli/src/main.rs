mod problem;
mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use charsub::certificate::{CharMode, ClassTag, Route};
use charsub::engine::char_subspace::{find_characteristic_subspace, CharSubspaceRequest};
use charsub::engine::series::{
    build_un, check_series, class_laws, find_characteristic_series, LevelRequirement, SeriesRequest,
};
use charsub::lattice::{check_codim_laws, sublattice_closure, OrdinaryCodim, DEFAULT_CLOSURE_CAP};
use charsub::morphisms::{closure, DEFAULT_MORPHISM_CAP};
use charsub::predicates::{
    check_declared_laws, extend_c, extend_d, pred_a, pred_b, rank_parity_fixture, zero_predicate, LawCheckConfig,
    LawDomain, LawReport, Predicate,
};
use charsub::subspace::Subspace;
use charsub::verify::{verify_char_certificate, verify_series_certificate, VerifyLevel, VerifyReport};
use charsub::words::MultilinearElement;
use charsub::Error;

use problem::Problem;
use render::{Certificate, CertificateDocument, CommandEcho, Status, Verification};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("schema error at {0}")]
    Schema(String),
    #[error("{0}")]
    Request(String),
    #[error("{0}: {1}")]
    Engine(String, Error),
    #[error("{0}")]
    Failed(String, u8),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Json { .. } | CliError::Schema(_) => 1,
            CliError::Request(_) => 2,
            CliError::Engine(_, e) => engine_exit_code(e),
            CliError::Failed(_, code) => *code,
        }
    }
}

fn engine_exit_code(e: &Error) -> u8 {
    match e {
        Error::ClosureCap { .. } | Error::MorphismCap { .. } | Error::IncompleteClosure | Error::DegreeCap { .. } => 3,
        Error::Overflow(_) => 3,
        Error::TheoremViolation(_) | Error::RouteDisagreement(_) => 4,
        _ => 2,
    }
}

fn engine(context: &str) -> impl FnOnce(Error) -> CliError + '_ {
    move |e| CliError::Engine(context.to_string(), e)
}

/// Characteristic subspaces and ideal series of finite-dimensional algebras over prime fields.
///
/// Exit codes: 0 success; 1 I/O or schema error; 2 validation failure, unmet
/// hypothesis or failed verification; 3 resource cap reached; 4 theorem
/// violation or route disagreement (an implementation defect); 5 law failure.
#[derive(Debug, Parser)]
#[command(
    name = "charsub",
    version,
    after_help = "Environment:\n  CHARSUB_CLOSURE_CAP  default for --closure-cap (built-in 50000)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check structure constants, flavor laws, automorphisms, subspaces and the series witness.
    Validate(ValidateArgs),
    /// Find a characteristic subspace of bounded codimension inside the lattice generated by the orbit of N.
    CharSubspace(CharArgs),
    /// Find a characteristic ideal with a series of the same shape as the input series.
    Series(SeriesArgs),
    /// Check predicate, codimension and class laws on the generated closure.
    Laws(LawsArgs),
    /// Re-verify a certificate document against its problem without running any search.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Debug, Args)]
struct Caps {
    /// Maximum size of the sublattice closure.
    #[arg(long, env = "CHARSUB_CLOSURE_CAP", default_value_t = DEFAULT_CLOSURE_CAP)]
    closure_cap: usize,
    /// Maximum size of the automorphism set Φ.
    #[arg(long, default_value_t = DEFAULT_MORPHISM_CAP)]
    morphism_cap: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    General,
    Identity,
    BoundedImage,
}

#[derive(Debug, Args)]
struct CharArgs {
    #[arg(long)]
    input: PathBuf,
    /// Name of the subspace N.
    #[arg(long)]
    subspace: String,
    /// Degree t; defaults to the target word's degree outside general mode.
    #[arg(long)]
    t: Option<usize>,
    /// Extra named words to include, comma separated.
    #[arg(long, value_delimiter = ',')]
    words: Vec<String>,
    #[arg(long, value_enum, default_value = "general")]
    mode: ModeArg,
    /// Named word for the identity and bounded-image modes.
    #[arg(long)]
    target_word: Option<String>,
    /// Automorphism generators to use, comma separated; all by default.
    #[arg(long, value_delimiter = ',')]
    automorphisms: Vec<String>,
    #[command(flatten)]
    caps: Caps,
    /// Write the certificate document here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the certificate document instead of the summary.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RouteArg {
    Direct,
    Predicate,
    Both,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    route: RouteArg,
    #[arg(long, value_delimiter = ',')]
    automorphisms: Vec<String>,
    #[command(flatten)]
    caps: Caps,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PredicateArg {
    A,
    B,
    Composed,
    Codim,
    Class,
    /// Deliberately broken fixture: rank(N) even, declared monotone and multilinear.
    RankParity,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClassArg {
    Nilpotent,
    Abelian,
}

#[derive(Debug, Args)]
struct LawsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    predicate: PredicateArg,
    #[arg(long, value_enum, default_value = "nilpotent")]
    class: ClassArg,
    /// Seed subspaces for the closure, comma separated; all named subspaces by default.
    #[arg(long, value_delimiter = ',')]
    subspaces: Vec<String>,
    /// Check exhaustively when |domain|^arity is at most this; sample otherwise.
    #[arg(long, default_value_t = LawCheckConfig::default().exhaustive_bound)]
    exhaustive_bound: usize,
    /// Random ideal pairs per algebra for the class laws.
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[command(flatten)]
    caps: Caps,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Certificate document written by char-subspace or series.
    #[arg(long)]
    cert: PathBuf,
    /// The problem the certificate claims to solve.
    #[arg(long)]
    input: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match cli.command {
        Command::Validate(a) => validate(&a),
        Command::CharSubspace(a) => char_subspace(&a),
        Command::Series(a) => series(&a),
        Command::Laws(a) => laws(&a),
        Command::Verify(a) => verify(&a),
    };
    eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn write_out(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn validate(args: &ValidateArgs) -> Result<(), CliError> {
    let p = Problem::load(&args.input)?;
    let alg = &p.algebra;
    let mut failures = 0;
    let report = alg.validate_flavor();
    match &report {
        charsub::algebra::FlavorReport::Pass => println!("ok   flavor {}", render::label(&alg.flavor())),
        charsub::algebra::FlavorReport::Fail(v) => {
            failures += 1;
            println!("FAIL flavor {}: {v}", render::label(&alg.flavor()));
        }
    }
    for name in p.automorphisms.keys() {
        match p.generators(std::slice::from_ref(name)) {
            Ok(_) => println!("ok   automorphism {name}"),
            Err(e) => {
                failures += 1;
                println!("FAIL {e}");
            }
        }
    }
    for (name, (s, rows)) in &p.subspaces {
        let canonical = s.basis() == rows.as_slice();
        let note = if canonical {
            "canonical".to_string()
        } else {
            format!("canonical basis {s}")
        };
        println!("ok   subspace {name}: rank {}, {note}", s.rank());
    }
    for (name, w) in &p.words {
        println!("ok   word {name} = {w} (degree {})", w.degree());
    }
    if let Some(series) = &p.series {
        let report =
            check_series(alg, series.witness.top(), &series.witness, &series.spec).map_err(engine("series"))?;
        match report.failure {
            None => println!("ok   series witness {}", series.witness_names.join(" <= ")),
            Some(f) => {
                failures += 1;
                println!("FAIL series witness, level {}: {}", f.level, f.reason);
            }
        }
    }
    if failures > 0 {
        return Err(CliError::Failed(format!("{failures} validation failures"), 2));
    }
    Ok(())
}

fn char_mode(m: ModeArg) -> CharMode {
    match m {
        ModeArg::General => CharMode::General,
        ModeArg::Identity => CharMode::Identity,
        ModeArg::BoundedImage => CharMode::BoundedImage,
    }
}

fn named_words(p: &Problem, names: &[String]) -> Result<Vec<(String, MultilinearElement)>, CliError> {
    names.iter().map(|n| Ok((n.clone(), p.word(n)?.clone()))).collect()
}

fn emit(doc: &CertificateDocument, summary: String, out: &Option<PathBuf>, json: bool) -> Result<(), CliError> {
    let text = doc.to_json();
    if let Some(path) = out {
        write_out(path, &text)?;
    }
    if json {
        print!("{text}");
    } else {
        print!("{summary}");
    }
    if doc.verification.status == Status::Fail {
        return Err(CliError::Failed(
            "certificate failed independent verification".into(),
            4,
        ));
    }
    Ok(())
}

fn char_subspace(args: &CharArgs) -> Result<(), CliError> {
    let p = Problem::load(&args.input)?;
    let n = p.subspace(&args.subspace)?.clone();
    let names = p.automorphism_names(&args.automorphisms)?;
    let generators = p.generators(&names)?;
    let mode = char_mode(args.mode);
    let mut req = CharSubspaceRequest::new(p.algebra.clone(), n.clone(), generators, 0)
        .with_t(args.t)
        .with_words(named_words(&p, &args.words)?);
    match (&args.target_word, mode) {
        (Some(name), _) => req = req.with_target(mode, name.clone(), p.word(name)?.clone()),
        (None, CharMode::General) => {}
        (None, _) => return Err(CliError::Request("--target-word is required in this mode".into())),
    }
    req.closure_cap = args.caps.closure_cap;
    req.morphism_cap = args.caps.morphism_cap;
    let outcome = find_characteristic_subspace(&req).map_err(engine("char-subspace"))?;
    let cert = outcome.certificate;
    let report = verify_char_certificate(&p.algebra, n.basis(), &p.matrices(&names), &cert);
    let verification = Verification::from(&report);
    let summary = render::char_summary(&cert, &verification);
    let doc = CertificateDocument {
        command: CommandEcho::CharSubspace {
            input: args.input.display().to_string(),
            subspace: args.subspace.clone(),
            automorphisms: names,
            t: args.t,
            words: args.words.clone(),
            mode,
            target_word: args.target_word.clone(),
            closure_cap: args.caps.closure_cap,
        },
        certificate: Certificate::CharSubspace(cert),
        verification,
    };
    emit(&doc, summary, &args.out, args.json)
}

fn route(r: RouteArg) -> Route {
    match r {
        RouteArg::Direct => Route::Direct,
        RouteArg::Predicate => Route::Predicate,
        RouteArg::Both => Route::Both,
    }
}

fn verify_levels(levels: &[LevelRequirement]) -> Vec<VerifyLevel> {
    levels
        .iter()
        .map(|l| match l {
            LevelRequirement::Identity { word, .. } => VerifyLevel::Identity(word.clone()),
            LevelRequirement::Class(tag) => VerifyLevel::Class(*tag),
        })
        .collect()
}

fn series(args: &SeriesArgs) -> Result<(), CliError> {
    let p = Problem::load(&args.input)?;
    let block = p
        .series
        .clone()
        .ok_or_else(|| CliError::Request("the input has no series block".into()))?;
    let names = p.automorphism_names(&args.automorphisms)?;
    let generators = p.generators(&names)?;
    let mut req = SeriesRequest::new(p.algebra.clone(), block.spec.clone(), block.witness.clone(), generators)
        .with_route(route(args.route));
    req.closure_cap = args.caps.closure_cap;
    req.morphism_cap = args.caps.morphism_cap;
    let outcome = find_characteristic_series(&req).map_err(engine("series"))?;
    let cert = outcome.certificate;
    let input: Vec<_> = block.witness.chain[1..].iter().map(|s| s.basis().to_vec()).collect();
    let report = verify_series_certificate(
        &p.algebra,
        &p.matrices(&names),
        &verify_levels(block.spec.levels()),
        &input,
        &cert,
    );
    let verification = Verification::from(&report);
    let summary = render::series_summary(&cert, &verification);
    let doc = CertificateDocument {
        command: CommandEcho::Series {
            input: args.input.display().to_string(),
            automorphisms: names,
            route: route(args.route),
            closure_cap: args.caps.closure_cap,
        },
        certificate: Certificate::Series(cert),
        verification,
    };
    emit(&doc, summary, &args.out, args.json)
}

fn class_tag(c: ClassArg) -> ClassTag {
    match c {
        ClassArg::Nilpotent => ClassTag::Nilpotent,
        ClassArg::Abelian => ClassTag::Abelian,
    }
}

struct LawTable {
    failures: usize,
}

impl LawTable {
    fn predicate(&mut self, p: &Predicate, domain: &LawDomain, config: &LawCheckConfig) -> Result<(), CliError> {
        for r in check_declared_laws(p, domain, config).map_err(engine("laws"))? {
            self.line(&r);
        }
        Ok(())
    }

    fn line(&mut self, r: &LawReport) {
        if !r.passed() {
            self.failures += 1;
        }
        println!("{r}");
    }

    fn plain(&mut self, name: &str, ok: bool, detail: &str) {
        if !ok {
            self.failures += 1;
        }
        let mark = if ok { "pass" } else { "FAIL" };
        println!("{mark} {name}{}{detail}", if detail.is_empty() { "" } else { ": " });
    }
}

fn laws(args: &LawsArgs) -> Result<(), CliError> {
    let p = Problem::load(&args.input)?;
    let alg = &p.algebra;
    let f = alg.field();
    let d = alg.dim();
    let names = p.automorphism_names(&[])?;
    let generators = p.generators(&names)?;
    let phi = closure(f, d, &generators, args.caps.morphism_cap).map_err(engine("laws"))?;
    let seeds: Vec<String> = if args.subspaces.is_empty() {
        p.subspaces.keys().cloned().collect()
    } else {
        args.subspaces.clone()
    };
    let mut seed = vec![alg.zero_subspace(), alg.full()];
    for name in &seeds {
        seed.extend(phi.orbit(p.subspace(name)?).map_err(engine("laws"))?);
    }
    let lattice = sublattice_closure(&seed, args.caps.closure_cap).map_err(engine("laws"))?;
    if !lattice.is_complete() {
        return Err(CliError::Engine(
            "laws".into(),
            Error::ClosureCap {
                cap: args.caps.closure_cap,
                reached: lattice.len() + 1,
            },
        ));
    }
    let elements = lattice.elements().to_vec();
    let ideals: Vec<Subspace> = elements
        .iter()
        .filter(|s| alg.is_ideal(s).unwrap_or(false))
        .cloned()
        .collect();
    println!(
        "closure: {} elements ({} ideals), |Φ| = {}",
        elements.len(),
        ideals.len(),
        phi.len()
    );
    let config = LawCheckConfig {
        exhaustive_bound: args.exhaustive_bound,
        ..LawCheckConfig::default()
    };
    let domain = LawDomain::new(&elements, Some(&phi)).map_err(engine("laws"))?;
    let ideal_domain = LawDomain::new(&ideals, Some(&phi)).map_err(engine("laws"))?;
    let tag = class_tag(args.class);
    let words: Vec<(String, MultilinearElement)> = if p.words.is_empty() {
        vec![("x1x2".into(), MultilinearElement::product(f))]
    } else {
        p.words.iter().map(|(n, w)| (n.clone(), w.clone())).collect()
    };
    let wants = |x: PredicateArg| args.predicate == x || args.predicate == PredicateArg::All;
    let mut table = LawTable { failures: 0 };

    if wants(PredicateArg::A) {
        for (_, w) in &words {
            table.predicate(&pred_a(w, alg).flatten(), &domain, &config)?;
        }
    }
    if wants(PredicateArg::B) {
        let b = pred_b(Arc::new(tag.class()), alg).flatten();
        table.predicate(&b, &ideal_domain, &config)?;
    }
    if wants(PredicateArg::Composed) {
        let u1 = extend_d(Arc::new(tag.class()), &zero_predicate(), &ideals, alg).map_err(engine("laws"))?;
        table.predicate(&u1, &ideal_domain, &config)?;
        for (_, w) in &words {
            let u2 = extend_c(w, &u1, &ideals, alg).map_err(engine("laws"))?;
            table.predicate(&u2, &ideal_domain, &config)?;
        }
        if let Some(block) = &p.series {
            let un = build_un(alg, &block.spec, &ideals).map_err(engine("laws"))?;
            table.predicate(&un, &ideal_domain, &config)?;
        }
    }
    if wants(PredicateArg::Codim) {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let r = check_codim_laws(&OrdinaryCodim, &elements, &phi, 200, &mut rng).map_err(engine("laws"))?;
        for (name, v) in [
            ("codim antitone", &r.antitone),
            ("codim Φ-nonincreasing", &r.phi_nonincreasing),
            ("codim meet-subadditive", &r.meet_subadditive),
            ("codim sup selection", &r.sup_selection),
        ] {
            table.plain(name, v.is_none(), v.as_deref().unwrap_or(""));
        }
    }
    if wants(PredicateArg::Class) {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let class = tag.class();
        let r = class_laws(&class, std::slice::from_ref(alg), args.pairs, &mut rng).map_err(engine("laws"))?;
        for t in &r.laws {
            let detail = format!(
                "{} checked{}",
                t.checked,
                t.violations
                    .first()
                    .map(|v| format!(", witness {v}"))
                    .unwrap_or_default()
            );
            table.plain(
                &format!("class {} {}", r.class, t.law),
                t.violations.is_empty(),
                &detail,
            );
        }
    }
    if args.predicate == PredicateArg::RankParity {
        table.predicate(&rank_parity_fixture(), &domain, &config)?;
    }
    if table.failures > 0 {
        return Err(CliError::Failed(format!("{} law checks failed", table.failures), 5));
    }
    Ok(())
}

fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.cert).map_err(|source| CliError::Io {
        path: args.cert.display().to_string(),
        source,
    })?;
    let doc: CertificateDocument = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: args.cert.display().to_string(),
        source,
    })?;
    let p = Problem::load(&args.input)?;
    let report: VerifyReport = match (&doc.command, &doc.certificate) {
        (
            CommandEcho::CharSubspace {
                subspace,
                automorphisms,
                ..
            },
            Certificate::CharSubspace(c),
        ) => {
            let names = p.automorphism_names(automorphisms)?;
            verify_char_certificate(&p.algebra, p.subspace(subspace)?.basis(), &p.matrices(&names), c)
        }
        (CommandEcho::Series { automorphisms, .. }, Certificate::Series(c)) => {
            let block = p
                .series
                .as_ref()
                .ok_or_else(|| CliError::Request("the input has no series block".into()))?;
            let names = p.automorphism_names(automorphisms)?;
            let input: Vec<_> = block.witness.chain[1..].iter().map(|s| s.basis().to_vec()).collect();
            verify_series_certificate(
                &p.algebra,
                &p.matrices(&names),
                &verify_levels(block.spec.levels()),
                &input,
                c,
            )
        }
        _ => {
            return Err(CliError::Request(
                "command echo does not match the certificate kind".into(),
            ))
        }
    };
    println!("{report}");
    let fresh = Verification::from(&report);
    if fresh != doc.verification {
        println!("recorded verification differs from the recomputed one");
        return Err(CliError::Failed("verification mismatch".into(), 2));
    }
    if !report.passed() {
        return Err(CliError::Failed("certificate failed verification".into(), 2));
    }
    println!("status: pass");
    Ok(())
}
