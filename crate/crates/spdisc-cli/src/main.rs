//! Command-line front end: evaluation, strict-positive-definiteness checks,
//! witness construction, Gram analysis, sphere sampling and coefficient
//! translation over JSON documents.
//!
//! Every command except `sample` prints a run report, a JSON object with
//! sorted keys holding the command name, a digest of the inputs, and a
//! command-specific payload; `sample` prints a points document. Reports are
//! byte-stable given identical inputs and seeds; wall-clock timing is only
//! included when `--timing` is passed.
//!
//! Exit codes: 0 ok, 2 validation, 3 domain, 4 capacity, 5 progression meets
//! the shadow, 6 duplicate points, 7 symmetry violation.

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use spdisc::bridge::{self, BridgeError};
use spdisc::geometry::{sample_uniform, GeometryError, ProductPoint, SpherePoint};
use spdisc::gram::{self, GramError};
use spdisc::lattice::{
    decide_spd_condition, find_empty_progression_finite, Coset1D, CosetProduct, IndexSet2D,
    LatticeError,
};
use spdisc::polynomials::{DiscPoint, DomainError};
use spdisc::schema::{
    Coeffs1DDoc, Cos2DDoc, CosetDoc, ExpansionDoc, IndexSetDoc, PointsDoc, SchemaError, TorusDoc,
    WitnessDoc,
};
use spdisc::ProductExpansion;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const EXIT_VALIDATION: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_CAPACITY: u8 = 4;
const EXIT_BAD_PROGRESSION: u8 = 5;
const EXIT_DUPLICATE_POINTS: u8 = 6;
const EXIT_SYMMETRY: u8 = 7;

#[derive(Parser)]
#[command(name = "spdisc", version, about = "Disc polynomial kernels on products of complex spheres")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    CosToTorus,
    TorusToCos,
    CircleToCos,
    CosToCircle,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expansion at a disc point pair
    Eval {
        /// Expansion JSON file
        #[arg(long)]
        expansion: PathBuf,
        /// First argument as "re,im"
        #[arg(long)]
        xi: String,
        /// Second argument as "re,im"
        #[arg(long)]
        eta: String,
        #[arg(long)]
        timing: bool,
    },
    /// Decide the progression criterion for an index set or expansion file
    CheckSpd {
        /// Index-set or expansion JSON file (detected by its fields)
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        timing: bool,
    },
    /// Build and verify a roots-of-unity non-SPD witness
    Witness {
        #[arg(long)]
        expansion: PathBuf,
        /// Progression product "N,x,M,y"; found from the shadow when absent
        #[arg(long)]
        progression: Option<String>,
        /// Points file holding exactly one base point
        #[arg(long)]
        base_points: Option<PathBuf>,
        /// Sample the base point with this seed instead of using (e1, e1)
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        #[arg(long)]
        timing: bool,
    },
    /// Assemble the Gram matrix of an expansion at a point set
    Gram {
        #[arg(long)]
        expansion: PathBuf,
        #[arg(long)]
        points: PathBuf,
        /// Dump the matrix as row-major text with 17-significant-digit floats
        #[arg(long)]
        dump_matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        #[arg(long)]
        timing: bool,
    },
    /// Emit a deterministic points file
    Sample {
        /// Dimension of the first sphere component
        #[arg(long)]
        dim_q: usize,
        /// Dimension of the second sphere component
        #[arg(long)]
        dim_p: usize,
        /// Number of product points
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Translate coefficient families between cosine and bilateral forms
    Translate {
        #[arg(long)]
        direction: Direction,
        #[arg(long)]
        input: PathBuf,
        /// Re-translate the output and require the identity
        #[arg(long)]
        round_trip: bool,
        #[arg(long)]
        timing: bool,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        let code = match &e {
            SchemaError::Lattice(LatticeError::CapacityExceeded { .. })
            | SchemaError::Lattice(LatticeError::TooManyCosets { .. }) => EXIT_CAPACITY,
            _ => EXIT_VALIDATION,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        CliError::new(EXIT_DOMAIN, e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::new(EXIT_DOMAIN, e.to_string())
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        let code = match e {
            LatticeError::CapacityExceeded { .. } | LatticeError::TooManyCosets { .. } => {
                EXIT_CAPACITY
            }
            LatticeError::InvalidModulus { .. } => EXIT_VALIDATION,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<GramError> for CliError {
    fn from(e: GramError) -> Self {
        let code = match &e {
            GramError::ProgressionIntersectsShadow => EXIT_BAD_PROGRESSION,
            GramError::DuplicatePoints { .. } => EXIT_DUPLICATE_POINTS,
            GramError::Domain(_) | GramError::Geometry(_) => EXIT_DOMAIN,
            GramError::Lattice(l) => return CliError::from(l.clone()),
            _ => EXIT_VALIDATION,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<BridgeError> for CliError {
    fn from(e: BridgeError) -> Self {
        let code = match &e {
            BridgeError::SymmetryViolation { .. } | BridgeError::SymmetryViolation1D { .. } => {
                EXIT_SYMMETRY
            }
            BridgeError::InvalidCoefficient { .. } | BridgeError::NegativeCosineIndex { .. } => {
                EXIT_VALIDATION
            }
        };
        CliError::new(code, e.to_string())
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| {
        CliError::new(
            EXIT_VALIDATION,
            format!("cannot read {}: {e}", path.display()),
        )
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(bytes: &[u8], what: &str) -> Result<T, CliError> {
    serde_json::from_slice(bytes)
        .map_err(|e| CliError::new(EXIT_VALIDATION, format!("invalid {what} document: {e}")))
}

fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::new(
            EXIT_VALIDATION,
            format!("expected \"re,im\", got {text:?}"),
        ));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|e| CliError::new(EXIT_VALIDATION, format!("bad real part: {e}")))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| CliError::new(EXIT_VALIDATION, format!("bad imaginary part: {e}")))?;
    Ok(Complex64::new(re, im))
}

fn parse_progression(text: &str) -> Result<CosetProduct, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(CliError::new(
            EXIT_VALIDATION,
            format!("expected \"N,x,M,y\", got {text:?}"),
        ));
    }
    let nums: Vec<i64> = parts
        .iter()
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::new(EXIT_VALIDATION, format!("bad progression: {e}")))?;
    Ok(CosetProduct::new(
        Coset1D::new(nums[0], nums[1])?,
        Coset1D::new(nums[2], nums[3])?,
    ))
}

/// 17 significant digits, the round-trip-exact width for doubles.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

struct DigestBuilder(Sha256);

impl DigestBuilder {
    fn new(command: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        DigestBuilder(hasher)
    }

    fn file(mut self, bytes: &[u8]) -> Self {
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
        self
    }

    fn arg(mut self, value: &str) -> Self {
        self.0.update([0u8]);
        self.0.update(value.as_bytes());
        self
    }

    fn finish(self) -> String {
        let digest = self.0.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn print_report(command: &str, digest: String, payload: Value, started: Option<Instant>) {
    let mut report = json!({
        "command": command,
        "inputs_digest": digest,
        "payload": payload,
    });
    if let Some(started) = started {
        report["timing_ms"] = json!(started.elapsed().as_secs_f64() * 1e3);
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("reports serialize")
    );
}

fn coset_doc_value(cp: &CosetProduct) -> Value {
    serde_json::to_value(CosetDoc::from_domain(cp)).expect("coset doc serializes")
}

fn load_expansion(path: &Path) -> Result<(ProductExpansion, Vec<u8>), CliError> {
    let bytes = read_file(path)?;
    let doc: ExpansionDoc = parse_json(&bytes, "expansion")?;
    Ok((doc.to_domain()?, bytes))
}

fn cmd_eval(expansion: &Path, xi: &str, eta: &str, timing: bool) -> Result<(), CliError> {
    let started = timing.then(Instant::now);
    let (e, bytes) = load_expansion(expansion)?;
    let xi_value = parse_complex(xi)?;
    let eta_value = parse_complex(eta)?;
    let value = e.eval(DiscPoint::new(xi_value)?, DiscPoint::new(eta_value)?)?;
    let digest = DigestBuilder::new("eval")
        .file(&bytes)
        .arg(xi)
        .arg(eta)
        .finish();
    let payload = json!({
        "xi": [xi_value.re, xi_value.im],
        "eta": [eta_value.re, eta_value.im],
        "value": [value.re, value.im],
        "printed": format!("{} {}", fmt17(value.re), fmt17(value.im)),
    });
    print_report("eval", digest, payload, started);
    Ok(())
}

fn cmd_check_spd(input: &Path, timing: bool) -> Result<(), CliError> {
    let started = timing.then(Instant::now);
    let bytes = read_file(input)?;
    let raw: Value = parse_json(&bytes, "input")?;
    let (kind, set) = if raw.get("coefficients").is_some() {
        let doc: ExpansionDoc = parse_json(&bytes, "expansion")?;
        let e = doc.to_domain()?;
        ("expansion", IndexSet2D::from_points(e.index_shadow()))
    } else {
        let doc: IndexSetDoc = parse_json(&bytes, "index set")?;
        ("index-set", doc.to_domain()?)
    };
    let verdict = decide_spd_condition(&set)?;
    let digest = DigestBuilder::new("check-spd").file(&bytes).finish();
    let payload = json!({
        "kind": kind,
        "holds": verdict.holds,
        "counterexample": verdict.counterexample.as_ref().map(coset_doc_value),
    });
    print_report("check-spd", digest, payload, started);
    Ok(())
}

fn default_base(e: &ProductExpansion, seed: Option<u64>) -> Result<ProductPoint, CliError> {
    match seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dim_z = e.q().dimension().unwrap_or(2);
            let dim_w = e.p().dimension().unwrap_or(2);
            Ok(ProductPoint::new(
                sample_uniform(dim_z, &mut rng)?,
                sample_uniform(dim_w, &mut rng)?,
            ))
        }
        None => {
            let dim_z = e.q().dimension().unwrap_or(1);
            let dim_w = e.p().dimension().unwrap_or(1);
            Ok(ProductPoint::new(
                SpherePoint::standard_basis(dim_z)?,
                SpherePoint::standard_basis(dim_w)?,
            ))
        }
    }
}

fn cmd_witness(
    expansion: &Path,
    progression: Option<&str>,
    base_points: Option<&Path>,
    seed: Option<u64>,
    tol_scale: f64,
    timing: bool,
) -> Result<(), CliError> {
    let started = timing.then(Instant::now);
    let (e, bytes) = load_expansion(expansion)?;
    let mut digest = DigestBuilder::new("witness").file(&bytes);

    let prog = match progression {
        Some(text) => {
            digest = digest.arg(text);
            parse_progression(text)?
        }
        None => find_empty_progression_finite(&e.index_shadow()),
    };
    let base = match base_points {
        Some(path) => {
            let base_bytes = read_file(path)?;
            digest = digest.file(&base_bytes);
            let doc: PointsDoc = parse_json(&base_bytes, "points")?;
            let mut pts = doc.to_domain()?;
            if pts.len() != 1 {
                return Err(CliError::new(
                    EXIT_VALIDATION,
                    format!("base-points file must hold exactly one point, got {}", pts.len()),
                ));
            }
            pts.pop().expect("length checked")
        }
        None => {
            if let Some(seed) = seed {
                digest = digest.arg(&seed.to_string());
            }
            default_base(&e, seed)?
        }
    };
    digest = digest.arg(&format!("{tol_scale}"));

    let witness = gram::spd_witness(&e, &prog, &base, tol_scale)?;
    let doc = WitnessDoc::from_domain(&witness);
    let n = witness.progression.first.modulus();
    let m = witness.progression.second.modulus();
    let tolerance = tol_scale * 1e-9 * e.total_mass() * (n * m) as f64;
    let payload = json!({
        "witness": serde_json::to_value(&doc).expect("witness doc serializes"),
        "coefficient_sum": e.total_mass(),
        "tolerance": tolerance,
        "verified": true,
    });
    print_report("witness", digest.finish(), payload, started);
    Ok(())
}

fn dump_matrix(path: &Path, matrix: &gram::GramMatrix) -> Result<(), CliError> {
    use std::fmt::Write as _;
    let mut out = String::new();
    for i in 0..matrix.size() {
        let mut first = true;
        for j in 0..matrix.size() {
            if !first {
                out.push(' ');
            }
            first = false;
            let entry = matrix.entry(i, j);
            write!(out, "{} {}", fmt17(entry.re), fmt17(entry.im)).expect("string write");
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| {
        CliError::new(
            EXIT_VALIDATION,
            format!("cannot write {}: {e}", path.display()),
        )
    })
}

fn cmd_gram(
    expansion: &Path,
    points: &Path,
    dump: Option<&Path>,
    tol_scale: f64,
    timing: bool,
) -> Result<(), CliError> {
    let started = timing.then(Instant::now);
    let (e, expansion_bytes) = load_expansion(expansion)?;
    let points_bytes = read_file(points)?;
    let doc: PointsDoc = parse_json(&points_bytes, "points")?;
    let pts = doc.to_domain()?;
    let a = gram::build_a(&e, &pts)?;
    let min_eig = gram::min_eigenvalue(&a)?;
    let trace = a.trace();
    let digest = DigestBuilder::new("gram")
        .file(&expansion_bytes)
        .file(&points_bytes)
        .arg(&format!("{tol_scale}"))
        .finish();
    if let Some(path) = dump {
        dump_matrix(path, &a)?;
    }
    let mut payload = json!({
        "size": a.size(),
        "trace": trace,
        "min_eigenvalue": min_eig,
        "hermitian_residual": a.hermitian_residual(),
        "psd_within_tolerance": min_eig >= -tol_scale * 1e-9 * trace,
    });
    if let Some(path) = dump {
        payload["matrix_dump"] = json!(path.display().to_string());
    }
    print_report("gram", digest, payload, started);
    Ok(())
}

fn cmd_sample(dim_q: usize, dim_p: usize, count: usize, seed: u64) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<ProductPoint> = (0..count)
        .map(|_| -> Result<ProductPoint, CliError> {
            Ok(ProductPoint::new(
                sample_uniform(dim_q, &mut rng)?,
                sample_uniform(dim_p, &mut rng)?,
            ))
        })
        .collect::<Result<_, _>>()?;
    let mut doc = PointsDoc::from_domain(&points);
    // An empty list still records the requested dimensions.
    doc.q = dim_q;
    doc.p = dim_p;
    println!(
        "{}",
        serde_json::to_string_pretty(&doc).expect("points doc serializes")
    );
    Ok(())
}

fn cmd_translate(
    direction: Direction,
    input: &Path,
    round_trip: bool,
    timing: bool,
) -> Result<(), CliError> {
    let started = timing.then(Instant::now);
    let bytes = read_file(input)?;
    let (name, output) = match direction {
        Direction::CosToTorus => {
            let doc: Cos2DDoc = parse_json(&bytes, "cosine coefficients")?;
            let c = doc.to_domain()?;
            let t = bridge::cos_to_torus(&c);
            if round_trip {
                let back = bridge::torus_to_cos(&t)?;
                if back != c {
                    return Err(CliError::new(EXIT_SYMMETRY, "round trip is not the identity"));
                }
            }
            (
                "cos-to-torus",
                serde_json::to_value(TorusDoc::from_domain(&t)).expect("serializes"),
            )
        }
        Direction::TorusToCos => {
            let doc: TorusDoc = parse_json(&bytes, "torus coefficients")?;
            let t = doc.to_domain()?;
            let c = bridge::torus_to_cos(&t)?;
            if round_trip && bridge::cos_to_torus(&c) != t {
                return Err(CliError::new(EXIT_SYMMETRY, "round trip is not the identity"));
            }
            (
                "torus-to-cos",
                serde_json::to_value(Cos2DDoc::from_domain(&c)).expect("serializes"),
            )
        }
        Direction::CircleToCos => {
            let doc: Coeffs1DDoc = parse_json(&bytes, "circle coefficients")?;
            let circle = doc.to_circle()?;
            let c = bridge::circle_to_cos(&circle)?;
            if round_trip && bridge::cos_to_circle(&c) != circle {
                return Err(CliError::new(EXIT_SYMMETRY, "round trip is not the identity"));
            }
            (
                "circle-to-cos",
                serde_json::to_value(Coeffs1DDoc::from_cos1d(&c)).expect("serializes"),
            )
        }
        Direction::CosToCircle => {
            let doc: Coeffs1DDoc = parse_json(&bytes, "cosine coefficients")?;
            let c = doc.to_cos1d()?;
            let circle = bridge::cos_to_circle(&c);
            if round_trip && bridge::circle_to_cos(&circle)? != c {
                return Err(CliError::new(EXIT_SYMMETRY, "round trip is not the identity"));
            }
            (
                "cos-to-circle",
                serde_json::to_value(Coeffs1DDoc::from_circle(&circle)).expect("serializes"),
            )
        }
    };
    let digest = DigestBuilder::new("translate")
        .arg(name)
        .file(&bytes)
        .arg(if round_trip { "round-trip" } else { "single" })
        .finish();
    let payload = json!({
        "direction": name,
        "output": output,
        "round_trip_checked": round_trip,
    });
    print_report("translate", digest, payload, started);
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval {
            expansion,
            xi,
            eta,
            timing,
        } => cmd_eval(&expansion, &xi, &eta, timing),
        Command::CheckSpd { input, timing } => cmd_check_spd(&input, timing),
        Command::Witness {
            expansion,
            progression,
            base_points,
            seed,
            tol_scale,
            timing,
        } => cmd_witness(
            &expansion,
            progression.as_deref(),
            base_points.as_deref(),
            seed,
            tol_scale,
            timing,
        ),
        Command::Gram {
            expansion,
            points,
            dump_matrix,
            tol_scale,
            timing,
        } => cmd_gram(&expansion, &points, dump_matrix.as_deref(), tol_scale, timing),
        Command::Sample {
            dim_q,
            dim_p,
            count,
            seed,
        } => cmd_sample(dim_q, dim_p, count, seed),
        Command::Translate {
            direction,
            input,
            round_trip,
            timing,
        } => cmd_translate(direction, &input, round_trip, timing),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
