//! `gh-steiner` command-line front end.
//!
//! Every subcommand prints one JSON document (or CSV for tabular output) to
//! stdout. Exit codes: 0 ok, 1 invalid input, 2 budget or size limit
//! exceeded, 3 a verification failed.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gh_steiner::io::{
    parse_cloud_json, parse_space_csv, parse_space_json, CloudJson, EmbeddingJson, SpaceJson,
    TreeJson,
};
use gh_steiner::ratios::{simplex_gap_law, SIMPLEX_TABLE_MAX};
use gh_steiner::{
    embed_into_gh, gh_distance_with_witness, mf_with_tol, mst, nu, ratios_linf, realize_filling,
    simplex_experiment, smt_linf_with_tol, theorem1_suite, verify_filling_characterization,
    DeltaWitness, Error, FiniteMetricSpace, PointCloudLinf, Scalar, ValueSource, DEFAULT_BUDGET,
};
use serde_json::{json, Value};

const THREADS_VAR: &str = "GH_STEINER_THREADS";

#[derive(Parser)]
#[command(name = "gh-steiner", version, about = "Gromov–Hausdorff distances, ℓ∞ Steiner trees and minimal fillings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a distance matrix is a metric.
    Validate(InputArgs),
    /// Genericity constant of a space.
    Delta(InputArgs),
    /// Sorted, halved distance vector.
    Nu(InputArgs),
    /// Exact Gromov–Hausdorff distance between two spaces.
    GhDist {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Minimal spanning tree.
    Mst(InputArgs),
    /// Steiner minimal tree of a point cloud in ℓ∞^k.
    Smt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Minimal filling, checked against the spanning-tree characterization.
    Mf {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Isometric embedding of a space into GH space.
    Embed {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Minimal filling carried into GH space with every edge measured.
    Realize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// smt, mst and mf of a point cloud and their ratios.
    Ratios(InputArgs),
    /// mf / mst on the simplex spaces.
    SimplexExperiment {
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Randomized theorem checks.
    Verify {
        #[command(subcommand)]
        which: Verify,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Space JSON or CSV (by extension); point cloud JSON for `ratios`.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Subcommand)]
enum Verify {
    /// Shortest trees near a generic space are minimal fillings.
    Theorem1 {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Lib(e) if e.is_limit() => 2,
            Failure::Lib(
                Error::RealizationMismatch { .. } | Error::SampleOutsideBall(_) | Error::NotAMetric(_),
            ) => 3,
            Failure::Lib(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(msg) => f.write_str(msg),
        }
    }
}

/// What a command prints, and whether its verification held.
struct Report {
    body: String,
    verified: bool,
}

impl Report {
    fn json(mut value: Value, verified: bool) -> Self {
        round_numbers(&mut value);
        let body = serde_json::to_string_pretty(&value).expect("JSON values serialize");
        Self { body, verified }
    }
}

/// Rounds every floating-point number to 12 significant digits.
fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            *v = json!(sig12(n.as_f64().expect("checked f64")));
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_space(path: &Path) -> Result<FiniteMetricSpace, Failure> {
    let text = read(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
    Ok(if is_csv {
        parse_space_csv(&text)?
    } else {
        parse_space_json(&text)?
    })
}

fn load_cloud(path: &Path) -> Result<PointCloudLinf, Failure> {
    Ok(parse_cloud_json(&read(path)?)?)
}

fn pair(x: &FiniteMetricSpace, (i, j): (usize, usize)) -> Value {
    json!([x.labels()[i], x.labels()[j]])
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")).into())
    }
}

fn check_budget(budget: u128) -> Result<(), Failure> {
    if budget > 0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter("budget must be positive".into()).into())
    }
}

fn run(command: Command) -> Result<Report, Failure> {
    match command {
        Command::Validate(args) => {
            let x = load_space(&args.input)?;
            Ok(Report::json(
                json!({ "valid": true, "points": x.labels(), "diameter": x.diameter() }),
                true,
            ))
        }
        Command::Delta(args) => {
            let x = load_space(&args.input)?;
            let r = x.delta()?;
            let witness = match r.witness {
                DeltaWitness::Triangle(i, j, k) => json!({
                    "kind": "triangle",
                    "points": [x.labels()[i], x.labels()[j], x.labels()[k]],
                }),
                DeltaWitness::PairGap(p, q) => json!({
                    "kind": "pair_gap",
                    "pairs": [pair(&x, p), pair(&x, q)],
                }),
                DeltaWitness::SinglePair(i, j) => json!({
                    "kind": "single_pair",
                    "pairs": [pair(&x, (i, j))],
                }),
            };
            Ok(Report::json(
                json!({ "delta": r.delta, "is_generic": r.is_generic, "witness": witness }),
                true,
            ))
        }
        Command::Nu(args) => {
            let x = load_space(&args.input)?;
            let image = nu(&x)?;
            let order: Vec<Value> = image.pair_order.iter().map(|&p| pair(&x, p)).collect();
            Ok(Report::json(
                json!({ "vector": image.vector, "pair_order": order }),
                true,
            ))
        }
        Command::GhDist { a, b, budget } => {
            check_budget(budget)?;
            let x = load_space(&a)?;
            let y = load_space(&b)?;
            let r = gh_distance_with_witness(&x, &y, budget)?;
            let corr: Vec<Value> = r
                .correspondence
                .pairs()
                .iter()
                .map(|&(i, j)| json!([x.labels()[i], y.labels()[j]]))
                .collect();
            Ok(Report::json(
                json!({ "distance": r.distance, "correspondence": corr }),
                true,
            ))
        }
        Command::Mst(args) => {
            let x = load_space(&args.input)?;
            let tree = mst(&x);
            Ok(Report::json(
                json!({ "length": tree.length(), "tree": TreeJson::from_tree(&tree) }),
                true,
            ))
        }
        Command::Smt { input, tol } => {
            check_tol(tol)?;
            let cloud = load_cloud(&input)?;
            let sol = smt_linf_with_tol(&cloud, tol)?;
            Ok(Report::json(
                json!({
                    "length": sol.length,
                    "topology_index": sol.topology_index,
                    "tree": TreeJson::from_tree(&sol.tree),
                }),
                true,
            ))
        }
        Command::Mf { input, tol } => {
            check_tol(tol)?;
            let x = load_space(&input)?;
            let sol = mf_with_tol(&x, tol)?;
            let verdict = verify_filling_characterization(&sol, &x, f64::lit(1e-7))?;
            let tight: Vec<Value> = sol.tight_pairs(&x, tol).into_iter().map(|p| pair(&x, p)).collect();
            Ok(Report::json(
                json!({
                    "length": sol.length,
                    "topology_index": sol.topology_index,
                    "tree": TreeJson::from_tree(&sol.tree),
                    "tight_pairs": tight,
                    "verification": {
                        "holds": verdict.holds,
                        "tree_length": verdict.tree_length,
                        "mst_length": verdict.mst_length,
                        "mf_length": verdict.mf_length,
                        "extension_error": verdict.extension_error,
                        "edge_error": verdict.edge_error,
                        "witness": verdict.witness,
                    },
                }),
                verdict.holds,
            ))
        }
        Command::Embed { input, seed } => {
            let x = load_space(&input)?;
            let rec = embed_into_gh(&x, seed)?;
            let value = serde_json::to_value(EmbeddingJson::from_record(&rec)).expect("plain data");
            Ok(Report::json(value, true))
        }
        Command::Realize {
            input,
            seed,
            budget,
            tol,
        } => {
            check_budget(budget)?;
            check_tol(tol)?;
            let x = load_space(&input)?;
            let r = realize_filling(&x, seed, budget, tol)?;
            let names = r.filling.tree.topology().vertex_labels();
            let edges: Vec<Value> = r
                .filling
                .tree
                .topology()
                .edges()
                .iter()
                .zip(r.filling.tree.edge_lengths().iter().zip(r.image_tree.edge_lengths()))
                .map(|(&(a, b), (w, gh))| {
                    json!({ "u": names[a], "v": names[b], "filling": w, "gh": gh })
                })
                .collect();
            Ok(Report::json(
                json!({
                    "mf_length": r.filling.length,
                    "image_length": r.image_tree.length(),
                    "edges": edges,
                    "extension": SpaceJson::from_space(&r.extension),
                    "embedding": EmbeddingJson::from_record(&r.embedding),
                }),
                true,
            ))
        }
        Command::Ratios(args) => {
            let cloud = load_cloud(&args.input)?;
            let r = ratios_linf(&cloud)?;
            let holds = r.chain_holds(1e-7);
            Ok(Report::json(
                json!({
                    "points": CloudJson::from_cloud(&cloud),
                    "smt": r.smt_len,
                    "mst": r.mst_len,
                    "mf": r.mf_len,
                    "sr": r.sr,
                    "sgr": r.sgr,
                    "ssr": r.ssr,
                    "context": r.context,
                    "chain_holds": holds,
                }),
                holds,
            ))
        }
        Command::SimplexExperiment { n_max, format } => {
            let table = simplex_experiment::<f64>(n_max)?;
            let rows_ok = table.rows.iter().all(|r| {
                (r.mf - r.n as f64 / 2.0).abs() < 1e-9 && (r.mst - (r.n - 1) as f64).abs() < 1e-9
            });
            let gap_law = (2..=SIMPLEX_TABLE_MAX).all(simplex_gap_law);
            let verified = rows_ok && gap_law && table.decreasing_above_half;
            if format == Format::Csv {
                let mut body = String::from("n,mf,mst,ratio,exact_ratio,mf_source\n");
                for r in &table.rows {
                    body.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        r.n,
                        sig12(r.mf),
                        sig12(r.mst),
                        sig12(r.ratio),
                        r.exact_ratio,
                        source_name(r.mf_source)
                    ));
                }
                return Ok(Report { body, verified });
            }
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "mf": r.mf,
                        "mst": r.mst,
                        "ratio": r.ratio,
                        "exact_ratio": r.exact_ratio.to_string(),
                        "mf_source": source_name(r.mf_source),
                    })
                })
                .collect();
            Ok(Report::json(
                json!({
                    "rows": rows,
                    "decreasing_above_half": table.decreasing_above_half,
                    "gap_law_holds": gap_law,
                    "verified": verified,
                }),
                verified,
            ))
        }
        Command::Verify {
            which:
                Verify::Theorem1 {
                    n,
                    m,
                    trials,
                    seed,
                    budget,
                },
        } => {
            check_budget(budget)?;
            if trials == 0 {
                return Err(Error::InvalidParameter("trials must be positive".into()).into());
            }
            let results = theorem1_suite(n, m, trials, seed, budget)?;
            let failed = results.iter().filter(|t| !t.passed()).count();
            let rows: Vec<Value> = results
                .iter()
                .map(|t| {
                    json!({
                        "seed": t.seed,
                        "radius": t.radius,
                        "ball_radius": t.ball_radius,
                        "smt": t.smt_len,
                        "mf": t.mf_len,
                        "mst": t.mst_len,
                        "max_vertex_offset": t.max_vertex_offset,
                        "lengths_agree": t.lengths_agree,
                        "vertices_contained": t.vertices_contained,
                        "chain_holds": t.chain_holds,
                        "passed": t.passed(),
                    })
                })
                .collect();
            Ok(Report::json(
                json!({
                    "theorem": "theorem1",
                    "n": n,
                    "m": m,
                    "seed": seed,
                    "trials": rows,
                    "passed": results.len() - failed,
                    "failed": failed,
                    "verdict": if failed == 0 { "PASS" } else { "FAIL" },
                }),
                failed == 0,
            ))
        }
    }
}

fn source_name(s: ValueSource) -> &'static str {
    match s {
        ValueSource::LinearProgram => "lp",
        ValueSource::Analytic => "analytic",
    }
}

fn sig12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Io(format!("{THREADS_VAR} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Io(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; help and version are not errors
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = init_threads().and_then(|()| run(cli.command));
    match outcome {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            // a closed pipe (`| head`) is not an error worth reporting
            let _ = writeln!(out, "{}", report.body.trim_end());
            if report.verified {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification FAILED");
                ExitCode::from(3)
            }
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
