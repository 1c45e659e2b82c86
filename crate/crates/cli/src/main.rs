use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use slowness::elastic::{forward, Basis, ElasticError, StiffnessTensor, SymmetryClass};
use slowness::geometry::{
    aperture_directions, circle_directions, fit_patch, group_velocity, sample_branch, samples_csv, svg_curves,
    BranchSample, GeometryError, Medium,
};
use slowness::irreducible::{certify, certify_scan, CertifyOptions, IrreducibleError, Verdict};
use slowness::reconstruct::{
    admissibility_2d, companions, groebner_crosscheck, reconstruct_2d, reconstruct_3d, ReconstructError,
};
use slowness::twolayer::{recover, simulate, Dataset, RecoveryConfig, SimConfig, TwoLayerError, TwoLayerModel};

/// Slowness polynomials of anisotropic elastic media: forward map,
/// irreducibility certificates, reconstruction and the two-layer demo.
///
/// Exit codes: 0 success, 1 domain error, 2 I/O or format error, 3 budget
/// exhausted. Errors are printed to stderr as {"error": {"kind", "message"}}.
#[derive(Parser)]
#[command(name = "slowness", version)]
struct Cli {
    /// Cap on worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum PlotFormat {
    Svg,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Slowness polynomial of a stiffness tensor.
    Forward {
        #[arg(long)]
        tensor: PathBuf,
        /// Keep the p0-homogenized form.
        #[arg(long)]
        homogeneous: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Certify irreducibility over ℂ by reduction modulo a prime.
    Irreducible {
        #[arg(long)]
        poly: PathBuf,
        /// Prime to reduce at; without it the first `--scan` primes are tried in order.
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = 10)]
        scan: usize,
        /// Random specializations for the degree-pattern sieve.
        #[arg(long, default_value_t = slowness::irreducible::DEFAULT_BUDGET)]
        budget: usize,
        /// Random plane sections tried for four or more variables.
        #[arg(long, default_value_t = slowness::irreducible::DEFAULT_PLANE_TRIES)]
        plane_tries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Stiffness tensors with the given slowness polynomial.
    Reconstruct {
        #[arg(long)]
        poly: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Every tensor of the same class sharing the slowness polynomial.
    Companions {
        #[arg(long)]
        tensor: PathBuf,
        /// Also compute the full fiber by Gröbner basis and compare.
        #[arg(long)]
        with_groebner_crosscheck: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Membership of 2D coefficients in the image of the forward map.
    Admissible {
        #[arg(long)]
        poly: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Slowness curves of a 2D tensor.
    SlownessPlot {
        #[arg(long)]
        tensor: PathBuf,
        /// Directions per branch.
        #[arg(long, default_value_t = 360)]
        directions: usize,
        /// Include group velocities in json/csv output.
        #[arg(long)]
        velocities: bool,
        #[arg(long, value_enum, default_value_t = PlotFormat::Svg)]
        format: PlotFormat,
        #[command(flatten)]
        out: Output,
    },
    /// Exact slowness polynomial from samples of one branch, then reconstruction.
    Fit {
        /// Tensor to sample; use with --branch, --center, --aperture, --count.
        #[arg(long, conflicts_with = "samples")]
        tensor: Option<PathBuf>,
        /// Samples in the CSV layout written by slowness-plot.
        #[arg(long)]
        samples: Option<PathBuf>,
        /// 1 for the slowest branch. With --samples, keeps only rows of this branch.
        #[arg(long)]
        branch: Option<usize>,
        /// Aperture center in degrees.
        #[arg(long, default_value_t = 0.0)]
        center: f64,
        /// Aperture width in degrees.
        #[arg(long, default_value_t = 40.0)]
        aperture: f64,
        #[arg(long, default_value_t = 12)]
        count: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Synthetic traveltimes through a two-layer disk model.
    TwolayerSimulate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = SimConfig::default().boundary_points)]
        boundary_points: usize,
        #[arg(long, default_value_t = SimConfig::default().direction_grid)]
        direction_grid: usize,
        /// Drop the endpoint momenta.
        #[arg(long)]
        traveltimes_only: bool,
        /// Delete this fraction of the data at random (seeded).
        #[arg(long)]
        thin: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// json writes one datum per line.
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
        #[command(flatten)]
        out: Output,
    },
    /// Recover the outer tensor, interface and inner tensor from traveltimes.
    TwolayerRecover {
        /// JSON lines as written by twolayer-simulate.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = RecoveryConfig::default().grid)]
        grid: usize,
        #[arg(long, default_value_t = RecoveryConfig::default().chord_fraction)]
        chord_fraction: f64,
        #[arg(long, default_value_t = RecoveryConfig::default().direct_tol)]
        direct_tol: f64,
        #[arg(long, default_value_t = RecoveryConfig::default().min_directions)]
        min_directions: usize,
        #[arg(long, default_value_t = RecoveryConfig::default().direction_grid)]
        direction_grid: usize,
        /// Also write the interface mask as PGM.
        #[arg(long)]
        mask: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
}

struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        CliError { kind, message: message.into() }
    }

    fn code(&self) -> u8 {
        match self.kind {
            "domain" => 1,
            "resource" => 3,
            _ => 2,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::new("io", e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::new("format", e.to_string())
    }
}

impl From<ElasticError> for CliError {
    fn from(e: ElasticError) -> Self {
        let kind = if matches!(e, ElasticError::Format(_)) { "format" } else { "domain" };
        CliError::new(kind, e.to_string())
    }
}

impl From<ReconstructError> for CliError {
    fn from(e: ReconstructError) -> Self {
        match e {
            ReconstructError::Resource(_) => CliError::new("resource", e.to_string()),
            ReconstructError::Elastic(e) => e.into(),
            ReconstructError::Domain(_) => CliError::new("domain", e.to_string()),
        }
    }
}

impl From<IrreducibleError> for CliError {
    fn from(e: IrreducibleError) -> Self {
        CliError::new("domain", e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::new("domain", e.to_string())
    }
}

impl From<TwoLayerError> for CliError {
    fn from(e: TwoLayerError) -> Self {
        match e {
            TwoLayerError::Format(_) => CliError::new("format", e.to_string()),
            TwoLayerError::Reconstruct(e) => e.into(),
            TwoLayerError::Elastic(e) => e.into(),
            _ => CliError::new("domain", e.to_string()),
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::new("format", format!("{}: {e}", path.display())))
}

fn read_tensor(path: &Path) -> Result<StiffnessTensor, CliError> {
    Ok(StiffnessTensor::from_json(&read_json(path)?)?)
}

fn read_poly(path: &Path) -> Result<slowness::elastic::SlownessPoly, CliError> {
    Ok(slowness::elastic::SlownessPoly::from_json(&read_json(path)?)?)
}

fn emit(out: &Output, text: &str) -> Result<(), CliError> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &out.output {
        Some(p) => fs::write(p, text).map_err(|e| CliError::new("io", format!("{}: {e}", p.display()))),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn emit_json(out: &Output, v: &Value) -> Result<(), CliError> {
    emit(out, &serde_json::to_string_pretty(v)?)
}

fn coeffs_of(poly: &slowness::elastic::SlownessPoly) -> Result<Vec<slowness::algebra::BigRational>, CliError> {
    poly.coeffs().ok_or_else(|| CliError::new("domain", "polynomial has no canonical coefficient layout"))
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::new("resource", e.to_string()))?;
    }
    match cli.command {
        Command::Forward { tensor, homogeneous, out } => {
            let t = read_tensor(&tensor)?;
            emit_json(&out, &forward(&t, homogeneous).to_json())
        }
        Command::Irreducible { poly, prime, scan, budget, plane_tries, seed, out } => {
            let f = read_poly(&poly)?;
            let opts = CertifyOptions { budget, plane_tries, seed };
            let cert = match prime {
                Some(p) => certify(f.homogenized(), p, &opts)?,
                None => certify_scan(f.homogenized(), scan, &opts)?,
            };
            emit_json(&out, &cert.to_json())?;
            if cert.verdict == Verdict::Inconclusive {
                return Err(CliError::new("resource", "budget exhausted without a conclusive verdict"));
            }
            Ok(())
        }
        Command::Reconstruct { poly, out } => {
            let f = read_poly(&poly)?;
            let c = coeffs_of(&f)?;
            let result = match f.basis() {
                Basis::Canon2d => reconstruct_2d(&c)?,
                Basis::Ortho3d => reconstruct_3d(SymmetryClass::Orthorhombic, &c)?,
                Basis::Mono3d => reconstruct_3d(SymmetryClass::Monoclinic, &c)?,
                Basis::Generic => return Err(CliError::new("domain", "generic polynomials cannot be reconstructed")),
            };
            emit_json(&out, &result.to_json())
        }
        Command::Companions { tensor, with_groebner_crosscheck, out } => {
            let t = read_tensor(&tensor)?;
            let mut v = companions(&t)?.to_json();
            if with_groebner_crosscheck {
                let cc = groebner_crosscheck(&t)?;
                v["crosscheck"] = json!({
                    "solution_count": cc.solution_count,
                    "companions_on_variety": cc.companions_on_variety,
                    "groebner": cc.groebner.to_json(),
                });
            }
            emit_json(&out, &v)
        }
        Command::Admissible { poly, out } => {
            let f = read_poly(&poly)?;
            if f.basis() != Basis::Canon2d {
                return Err(CliError::new("domain", "admissibility is defined for canon2d coefficients"));
            }
            emit_json(&out, &serde_json::to_value(admissibility_2d(&coeffs_of(&f)?)?)?)
        }
        Command::SlownessPlot { tensor, directions, velocities, format, out } => {
            let t = read_tensor(&tensor)?;
            let m = Medium::new(&t)?;
            if m.dim() != 2 && format == PlotFormat::Svg {
                return Err(CliError::new("domain", "SVG plots are drawn for 2D tensors"));
            }
            let dirs = circle_directions(directions);
            let mut samples = Vec::new();
            for b in 1..=m.dim() {
                samples.extend(sample_branch(&m, b, &dirs)?);
            }
            match format {
                PlotFormat::Svg => {
                    let curves: Vec<(usize, Vec<[f64; 2]>)> = (1..=2)
                        .map(|b| (b, samples.iter().filter(|s| s.branch == b).map(|s| [s.p[0], s.p[1]]).collect()))
                        .collect();
                    emit(&out, &svg_curves("slowness curves", &curves))
                }
                PlotFormat::Csv | PlotFormat::Json => {
                    let vels: Vec<_> =
                        samples.iter().map(|s| if velocities { group_velocity(&m, s).ok() } else { None }).collect();
                    if format == PlotFormat::Csv {
                        emit(&out, &samples_csv(&samples, &vels))
                    } else {
                        let rows: Vec<Value> = samples
                            .iter()
                            .zip(&vels)
                            .map(|(s, v)| {
                                let mut row = serde_json::to_value(s).expect("sample serializes");
                                if let Some(v) = v {
                                    row["velocity"] = json!(v.velocity);
                                }
                                row
                            })
                            .collect();
                        emit_json(&out, &Value::Array(rows))
                    }
                }
            }
        }
        Command::Fit { tensor, samples, branch, center, aperture, count, out } => {
            let samples = match (tensor, samples) {
                (Some(path), None) => {
                    let m = Medium::new(&read_tensor(&path)?)?;
                    if m.dim() != 2 {
                        return Err(CliError::new("domain", "aperture sampling is implemented for 2D tensors"));
                    }
                    let dirs = aperture_directions(center.to_radians(), aperture.to_radians(), count);
                    sample_branch(&m, branch.unwrap_or(1), &dirs)?
                }
                (None, Some(path)) => {
                    let mut all = parse_samples(&read_text(&path)?)?;
                    if let Some(b) = branch {
                        all.retain(|s| s.branch == b);
                    }
                    all
                }
                _ => return Err(CliError::new("usage", "give exactly one of --tensor or --samples")),
            };
            let dim = samples.first().map(|s| s.p.len()).unwrap_or(2);
            let basis = if dim == 2 { Basis::Canon2d } else { Basis::Ortho3d };
            let poly = fit_patch(&samples, basis)?;
            let mut v = json!({ "samples": samples.len(), "poly": poly.to_json() });
            if dim == 2 {
                v["reconstruction"] = reconstruct_2d(&coeffs_of(&poly)?)?.to_json();
            }
            emit_json(&out, &v)
        }
        Command::TwolayerSimulate {
            model,
            boundary_points,
            direction_grid,
            traveltimes_only,
            thin,
            seed,
            format,
            out,
        } => {
            let model = TwoLayerModel::from_json(&read_json(&model)?)?;
            let mut ds = simulate(&model, &SimConfig { boundary_points, direction_grid })?;
            if let Some(f) = thin {
                if !(0.0..1.0).contains(&f) {
                    return Err(CliError::new("domain", "--thin must lie in [0, 1)"));
                }
                ds = ds.thinned(f, seed);
            }
            if traveltimes_only {
                ds.entries = ds.traveltimes();
            }
            if ds.dropped > 0 {
                eprintln!("{}", json!({ "warning": { "dropped_pairs": ds.dropped } }));
            }
            match format {
                TableFormat::Json => emit(&out, &ds.to_jsonl()),
                TableFormat::Csv => emit(&out, &dataset_csv(&ds)),
            }
        }
        Command::TwolayerRecover {
            data,
            grid,
            chord_fraction,
            direct_tol,
            min_directions,
            direction_grid,
            mask,
            out,
        } => {
            let ds = Dataset::from_jsonl(&read_text(&data)?)?;
            let cfg = RecoveryConfig { chord_fraction, direct_tol, grid, min_directions, direction_grid };
            let report = recover(&ds.entries, &cfg)?;
            if let Some(path) = mask {
                let est = &report.interface;
                let mut pgm = format!("P2\n{} {}\n1\n", est.grid, est.grid).into_bytes();
                // Row 0 of the raster is the bottom edge; PGM starts at the top.
                for r in (0..est.grid).rev() {
                    let row: Vec<&str> =
                        (0..est.grid).map(|c| if est.mask[r * est.grid + c] { "1" } else { "0" }).collect();
                    pgm.extend_from_slice(row.join(" ").as_bytes());
                    pgm.push(b'\n');
                }
                fs::write(&path, pgm).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
            }
            emit_json(&out, &report.to_json())
        }
    }
}

fn dataset_csv(ds: &Dataset) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "x_1", "x_2", "y_1", "y_2", "p_1", "p_2", "q_1", "q_2"]).expect("in-memory write");
    for d in &ds.entries {
        let opt = |v: Option<[f64; 2]>, k: usize| v.map(|v| format!("{:e}", v[k])).unwrap_or_default();
        w.write_record([
            format!("{:e}", d.t),
            format!("{:e}", d.x[0]),
            format!("{:e}", d.x[1]),
            format!("{:e}", d.y[0]),
            format!("{:e}", d.y[1]),
            opt(d.p, 0),
            opt(d.p, 1),
            opt(d.q, 0),
            opt(d.q, 1),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// Reads the CSV written by `slowness-plot --format csv`.
fn parse_samples(text: &str) -> Result<Vec<BranchSample>, CliError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(|e| CliError::new("format", e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(bc), Some(px)) = (col("branch"), col("p_x")) else {
        return Err(CliError::new("format", "samples need branch and p_x columns"));
    };
    let dim = if col("p_z").is_some() { 3 } else { 2 };
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::new("format", e.to_string()))?;
        let num = |i: usize| -> Result<f64, CliError> {
            rec.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| CliError::new("format", format!("bad number in column {i}")))
        };
        let branch =
            rec.get(bc).and_then(|s| s.parse().ok()).ok_or_else(|| CliError::new("format", "bad branch index"))?;
        let p: Vec<f64> = (0..dim).map(|k| num(px + k)).collect::<Result<_, _>>()?;
        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(CliError::new("format", "zero slowness sample"));
        }
        // On the curve λ(p) = 1, so λ(u) = 1/|p|² at u = p/|p|.
        out.push(BranchSample {
            direction: p.iter().map(|x| x / norm).collect(),
            branch,
            p,
            eigenvalue: 1.0 / (norm * norm),
        });
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            eprintln!("{}", json!({ "error": { "kind": "usage", "message": first } }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": { "kind": e.kind, "message": e.message } }));
            ExitCode::from(e.code())
        }
    }
}
