//! Implementation of the command-line front end: argument types, run
//! manifests, deterministic JSON output with 17-significant-digit floats,
//! and the handlers shared by the `ghg` and `bouquet` binaries.

use anyhow::{anyhow, Context};
use clap::{Args, Subcommand, ValueEnum};
use ghg_core::error::Error as CoreError;
use ghg_core::formats;
use ghg_core::ghg::GhgDescriptor;
use ghg_core::schrodinger::{rep_matrix, RepConfig, Side, StateVector};
use ghg_core::{arith, autgrp, bouquet, search, selftest};
use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit codes: 2 for malformed configuration, 3 for a numerical
/// verification failure, 4 for an internal inconsistency.
pub fn exit_code_for(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::Numerical(_)) | Some(CoreError::Exhausted(_)) => 3,
        Some(CoreError::Internal(_)) => 4,
        Some(_) => 2,
        None => 2,
    }
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Output format for stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for every random choice made by the command.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Angle/classification tolerance; overrides GHG_TOLERANCE.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

impl GlobalOpts {
    pub fn tolerance(&self) -> f64 {
        self.tolerance
            .or_else(|| std::env::var("GHG_TOLERANCE").ok().and_then(|s| s.parse().ok()))
            .unwrap_or(1e-7)
    }

    pub fn init_threads(&self) {
        if let Some(n) = self.threads {
            // ignore failure if a pool is already installed (tests)
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SectionArg {
    /// The canonical displacement section (odd central order only).
    D,
    /// The zero-lift section.
    Zero,
    /// Displacement when the central order is odd, zero-lift otherwise.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchMode {
    Equiangular,
    Regular,
}

#[derive(Debug, Subcommand)]
pub enum BouquetCmd {
    /// Verify a fiducial: orbit, overlap table, clinometric residuals,
    /// classification and symmetry generators.
    Verify(VerifyArgs),
    /// Search for a fiducial meeting per-orbit squared-angle targets.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Descriptor JSON file.
    #[arg(long)]
    pub desc: PathBuf,
    /// Fiducial state-vector JSON file.
    #[arg(long)]
    pub fiducial: PathBuf,
    /// Section for overlap evaluation.
    #[arg(long, value_enum, default_value_t = SectionArg::Auto)]
    pub section: SectionArg,
    /// Orbit partition: `autgroup`, `divisor`, or a targets/partition JSON
    /// file.
    #[arg(long, default_value = "divisor")]
    pub orbits: String,
    /// Central character exponent.
    #[arg(long, default_value_t = 1)]
    pub u: i64,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Descriptor JSON file.
    #[arg(long)]
    pub desc: PathBuf,
    #[arg(long, value_enum)]
    pub mode: SearchMode,
    /// Targets JSON file (required for `regular` mode).
    #[arg(long)]
    pub targets: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 5000)]
    pub iters: usize,
    /// Central character exponent.
    #[arg(long, default_value_t = 1)]
    pub u: i64,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Provenance data for one invocation. The digest covers only the
/// reproducible fields, so identical (inputs, seed, version) give
/// byte-identical outputs; wall time goes to stderr.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub input_digests: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64) -> Self {
        RunManifest {
            command: command.to_string(),
            version: VERSION.to_string(),
            seed,
            input_digests: BTreeMap::new(),
        }
    }

    pub fn record_input(&mut self, label: &str, bytes: &[u8]) {
        let mut h = Sha256::new();
        h.update(bytes);
        self.input_digests.insert(label.to_string(), hex::encode(h.finalize()));
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.command.as_bytes());
        h.update([0]);
        h.update(self.version.as_bytes());
        h.update([0]);
        h.update(self.seed.to_le_bytes());
        for (k, v) in &self.input_digests {
            h.update([0]);
            h.update(k.as_bytes());
            h.update([0]);
            h.update(v.as_bytes());
        }
        hex::encode(h.finalize())
    }
}

fn read_input(manifest: &mut RunManifest, label: &str, path: &Path) -> anyhow::Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    manifest.record_input(label, &bytes);
    String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
}

/// JSON serialisation with floats at 17 significant digits (round-trip
/// exact for doubles and stable across runs).
pub fn to_json_17(value: &serde_json::Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter::default());
    serde::Serialize::serialize(value, &mut ser).expect("serialising to memory");
    String::from_utf8(out).expect("JSON is UTF-8")
}

#[derive(Default)]
struct Sig17Formatter;

impl serde_json::ser::Formatter for Sig17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

fn complex_pairs(values: &[Complex64]) -> serde_json::Value {
    serde_json::Value::Array(
        values
            .iter()
            .map(|z| serde_json::json!([z.re, z.im]))
            .collect(),
    )
}

fn write_output(path: Option<&Path>, body: &str, format: Format) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))?;
            if format == Format::Json {
                println!("{body}");
            }
        }
        None => println!("{body}"),
    }
    Ok(())
}

fn log_wall_time(manifest: &RunManifest, start: std::time::Instant) {
    eprintln!(
        "# {} v{} seed={} wall={:.3}s digest={}",
        manifest.command,
        manifest.version,
        manifest.seed,
        start.elapsed().as_secs_f64(),
        manifest.digest()
    );
}

/// `arith build`: field/ideal config to descriptor JSON.
pub fn cmd_arith_build(
    global: &GlobalOpts,
    config: &Path,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let start = std::time::Instant::now();
    let mut manifest = RunManifest::new("arith build", global.seed);
    let raw = read_input(&mut manifest, "config", config)?;
    let tuple = formats::field_config_from_json(&raw)?;
    let ag = arith::trace_pairing_build(&tuple)?;
    let desc_json = formats::descriptor_to_json(&ag.desc)?;
    let mut value: serde_json::Value = serde_json::from_str(&desc_json).expect("own output");
    value["manifest_digest"] = serde_json::Value::String(manifest.digest());
    let ndc = ag.desc.check_ndc();
    let body = to_json_17(&value);
    write_output(out, &body, global.format)?;
    if global.format == Format::Text && out.is_some() {
        println!(
            "built descriptor: |A| = |B| = {}, r = {}, ND-C = {}",
            ag.desc.group_a().order(),
            ag.desc.group_c().order(),
            ndc.is_ndc
        );
    }
    log_wall_time(&manifest, start);
    Ok(())
}

/// `rep`: print the matrix of one group element.
pub fn cmd_rep(
    global: &GlobalOpts,
    desc_path: &Path,
    element: &str,
    side: SideArg,
    u: i64,
) -> anyhow::Result<()> {
    let start = std::time::Instant::now();
    let mut manifest = RunManifest::new("ghg rep", global.seed);
    let raw = read_input(&mut manifest, "desc", desc_path)?;
    let desc = formats::descriptor_from_json(&raw)?;
    let h = formats::element_from_str(&desc, element)?;
    let cfg = RepConfig::new(desc, u)?;
    let side = match side {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    };
    let m = rep_matrix(&cfg, &h, side)?;
    match global.format {
        Format::Json => {
            let rows: Vec<serde_json::Value> =
                (0..m.rows).map(|i| complex_pairs(&m.column_major_row(i))).collect();
            let value = serde_json::json!({
                "manifest_digest": manifest.digest(),
                "dim": m.rows,
                "matrix": rows,
            });
            println!("{}", to_json_17(&value));
        }
        Format::Text => {
            for i in 0..m.rows {
                let row: Vec<String> = (0..m.cols)
                    .map(|j| {
                        let z = m[(i, j)];
                        format!("{:+.4}{:+.4}i", z.re, z.im)
                    })
                    .collect();
                println!("{}", row.join("  "));
            }
        }
    }
    log_wall_time(&manifest, start);
    Ok(())
}

/// `aut enumerate`: list (or count) the automorphisms fixing the centre.
pub fn cmd_aut_enumerate(
    global: &GlobalOpts,
    desc_path: &Path,
    count_only: bool,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let start = std::time::Instant::now();
    let mut manifest = RunManifest::new("ghg aut enumerate", global.seed);
    let raw = read_input(&mut manifest, "desc", desc_path)?;
    let desc = formats::descriptor_from_json(&raw)?;
    let autos = autgrp::enumerate_aut0(&desc)?;
    if count_only {
        match global.format {
            Format::Json => println!(
                "{}",
                serde_json::json!({
                    "manifest_digest": manifest.digest(),
                    "count": autos.len(),
                })
            ),
            Format::Text => println!("{}", autos.len()),
        }
        log_wall_time(&manifest, start);
        return Ok(());
    }
    let list: Vec<serde_json::Value> = autos
        .iter()
        .map(|a| {
            serde_json::json!({
                "eta_matrix": a.eta.matrix,
                "sp_matrix": a.sp.matrix(),
            })
        })
        .collect();
    let value = serde_json::json!({
        "manifest_digest": manifest.digest(),
        "count": autos.len(),
        "automorphisms": list,
    });
    write_output(out, &to_json_17(&value), global.format)?;
    log_wall_time(&manifest, start);
    Ok(())
}

fn resolve_partition(
    manifest: &mut RunManifest,
    desc: &GhgDescriptor,
    orbits: &str,
) -> anyhow::Result<(Vec<Vec<usize>>, Option<Vec<f64>>)> {
    match orbits {
        "divisor" => Ok((bouquet::partition_by_order(desc), None)),
        "autgroup" => Ok((bouquet::partition_by_sp_orbits(desc)?, None)),
        path => {
            let raw = read_input(manifest, "orbits", Path::new(path))?;
            let dto = formats::targets_from_json(&raw)?;
            let partition = dto.partition.resolve(desc)?;
            Ok((partition, Some(dto.targets)))
        }
    }
}

/// `bouquet verify`.
pub fn cmd_bouquet_verify(global: &GlobalOpts, args: &VerifyArgs) -> anyhow::Result<()> {
    let start = std::time::Instant::now();
    let mut manifest = RunManifest::new("bouquet verify", global.seed);
    let desc_raw = read_input(&mut manifest, "desc", &args.desc)?;
    let desc = formats::descriptor_from_json(&desc_raw)?;
    let fid_raw = read_input(&mut manifest, "fiducial", &args.fiducial)?;
    let v = formats::state_vector_from_json(&fid_raw, desc.group_a())?;
    let cfg = RepConfig::new(desc.clone(), args.u)?;
    let section = match args.section {
        SectionArg::D => bouquet::Section::Displacement,
        SectionArg::Zero => bouquet::Section::ZeroLift,
        SectionArg::Auto => bouquet::default_section(&desc),
    };
    let (partition, _) = resolve_partition(&mut manifest, &desc, &args.orbits)?;
    let tol = global.tolerance();

    let line = bouquet::Line::new(&v)?;
    let orbit = bouquet::orbit_and_stabilizer(&cfg, &line)?;
    let table = bouquet::overlap_table(&cfg, &line, section)?;
    let clinometric = bouquet::clinometric_check(&cfg, &orbit)?;
    let classification = if orbit.is_free() {
        Some(bouquet::classify(&cfg, &orbit, &partition, tol)?)
    } else {
        None
    };

    // angle histogram: group values to 1e-9
    let mut hist: BTreeMap<i64, usize> = BTreeMap::new();
    for &a in &table.angles {
        *hist.entry((a / 1e-9).round() as i64).or_default() += 1;
    }
    let histogram: Vec<serde_json::Value> = hist
        .iter()
        .map(|(k, n)| serde_json::json!({"angle": (*k as f64) * 1e-9, "count": n}))
        .collect();

    // symmetry generators: eta = 0 representatives over Sp, feasible sizes only
    let symmetry: Vec<serde_json::Value> = if desc.group_c().order() % 2 == 1
        && desc.group_a().order() <= 9
        && orbit.is_free()
    {
        let candidates: Vec<autgrp::Automorphism> = autgrp::enumerate_symplectic(&desc)?
            .into_iter()
            .map(|sp| {
                autgrp::auto_from_pair(
                    &desc,
                    ghg_core::abelian::GroupHom::zero(&desc.abar(), desc.group_c()),
                    sp,
                )
            })
            .collect::<Result<_, _>>()?;
        let report = bouquet::symmetry_group(&cfg, &orbit, &candidates, global.seed)?;
        report
            .members
            .iter()
            .map(|&i| serde_json::json!({"sp_matrix": candidates[i].sp.matrix()}))
            .collect()
    } else {
        Vec::new()
    };

    let value = serde_json::json!({
        "manifest_digest": manifest.digest(),
        "free": orbit.is_free(),
        "stabilizer_order": orbit.stabilizer.len(),
        "angles_histogram": histogram,
        "clinometric": clinometric,
        "classification": classification,
        "symmetry_generators_found": symmetry,
    });
    let body = to_json_17(&value);
    write_output(args.out.as_deref(), &body, global.format)?;
    if global.format == Format::Text && args.out.is_some() {
        match &classification {
            Some(c) => println!(
                "free bouquet; equiangular = {}, regular = {}, spread = {:.2e}",
                c.equiangular, c.regular, c.angle_spread
            ),
            None => println!(
                "bouquet is not free (stabiliser of order {})",
                orbit.stabilizer.len()
            ),
        }
    }
    log_wall_time(&manifest, start);

    // a numerically broken clinometric relation signals an inconsistency
    if clinometric.eigen_residual_inf > 1e-6 {
        return Err(anyhow!(CoreError::Numerical(format!(
            "clinometric residual {:.2e} is out of range",
            clinometric.eigen_residual_inf
        ))));
    }
    Ok(())
}

/// `bouquet search`.
pub fn cmd_bouquet_search(global: &GlobalOpts, args: &SearchArgs) -> anyhow::Result<()> {
    let start = std::time::Instant::now();
    let mut manifest = RunManifest::new("bouquet search", global.seed);
    let desc_raw = read_input(&mut manifest, "desc", &args.desc)?;
    let desc = formats::descriptor_from_json(&desc_raw)?;
    let cfg = RepConfig::new(desc.clone(), args.u)?;
    let problem = match args.mode {
        SearchMode::Equiangular => {
            search::SearchProblem::equiangular(cfg.clone(), args.restarts, args.iters)?
        }
        SearchMode::Regular => {
            let path = args
                .targets
                .as_deref()
                .ok_or_else(|| anyhow!(CoreError::Validation(
                    "regular mode needs --targets (the paper names no canonical values)".into(),
                )))?;
            let raw = read_input(&mut manifest, "targets", path)?;
            let dto = formats::targets_from_json(&raw)?;
            let partition = dto.partition.resolve(&desc)?;
            search::SearchProblem::new(
                cfg.clone(),
                partition,
                dto.targets,
                args.restarts,
                args.iters,
                1e-16,
            )?
        }
    };
    let outcome = search::optimize_fiducial(&problem, global.seed)?;
    let v = StateVector::from_values(desc.group_a(), outcome.best.fiducial.clone())?;
    let verification = search::verify_candidate(&problem, &v, global.tolerance())?;

    let value = serde_json::json!({
        "manifest_digest": manifest.digest(),
        "mode": match args.mode { SearchMode::Equiangular => "equiangular", SearchMode::Regular => "regular" },
        "seed": global.seed,
        "restarts": outcome.restarts_run,
        "best_restart": outcome.best_restart,
        "iterations": outcome.best.iterations,
        "objective": outcome.best.objective,
        "converged": outcome.converged,
        "fiducial": {
            "re": v.values.iter().map(|z| z.re).collect::<Vec<f64>>(),
            "im": v.values.iter().map(|z| z.im).collect::<Vec<f64>>(),
        },
        "verification": verification,
    });
    let body = to_json_17(&value);
    write_output(args.out.as_deref(), &body, global.format)?;
    if global.format == Format::Text && args.out.is_some() {
        println!(
            "objective {:.3e} after {} iterations (restart {}); converged = {}",
            outcome.best.objective, outcome.best.iterations, outcome.best_restart, outcome.converged
        );
    }
    log_wall_time(&manifest, start);
    Ok(())
}

/// `selftest`: run the acceptance criteria; nonzero exit on any failure.
pub fn cmd_selftest(quick: bool) -> anyhow::Result<()> {
    let reports = selftest::run_all(quick);
    let mut stdout = std::io::stdout().lock();
    let mut all_pass = true;
    for r in &reports {
        writeln!(stdout, "{}", r.line())?;
        all_pass &= r.passed;
    }
    if !all_pass {
        return Err(anyhow!(CoreError::Numerical("selftest reported failures".into())));
    }
    Ok(())
}

/// Row accessor used by the JSON matrix printer.
trait RowAccess {
    fn column_major_row(&self, i: usize) -> Vec<Complex64>;
}

impl RowAccess for ghg_core::linalg::CMat {
    fn column_major_row(&self, i: usize) -> Vec<Complex64> {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }
}
