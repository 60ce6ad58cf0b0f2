//! Batch CLI over the core library: JSON in, JSON report out.
//!
//! Exit codes: 0 on success, 1 when the computation reports a failure
//! flag (for example a quasi-tiling that missed its coverage target),
//! 2 on input errors. Reports are byte-deterministic for a fixed config
//! and seed; wall-clock fields are emitted only with `--timings`.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use locent_core::entropy::{self, EntropyEstimate, EntropyOptions};
use locent_core::group::{invariance_report, FolnerSequence};
use locent_core::{io, lang, measures, tiling, tuples};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "locent",
    about = "Følner-window entropy computations on Z^d subshifts",
    long_about = None,
    version
)]
struct Cli {
    /// Node/incidence budget override (also via LOCENT_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed recorded in the report (randomness is confined to test
    /// generators; core computations are deterministic).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Include wall-clock timings (breaks byte-for-byte determinism).
    #[arg(long, global = true)]
    timings: bool,
    /// Write the JSON report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group-level helpers.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Quasi-tile a target by shape translates.
    Tile(TileArgs),
    /// Enumerate a window language.
    Lang(LangArgs),
    /// Entropy estimates along Følner windows.
    Entropy {
        #[command(subcommand)]
        cmd: EntropyCmd,
    },
    /// Entropy-tuple detection.
    Tuples {
        #[command(subcommand)]
        cmd: TuplesCmd,
    },
    /// Re-emit an entropy report as plot-ready columns.
    Plotdata(PlotArgs),
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Evaluate a Følner sequence member.
    Folner {
        /// Følner spec JSON file, e.g. {"kind":"box","d":1}.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Boundary B(A,K) and the invariance ratio.
    Boundary {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        k: PathBuf,
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
    },
}

#[derive(Args)]
struct TileArgs {
    /// JSON list of shapes (each a finite subset).
    #[arg(long)]
    shapes: PathBuf,
    #[arg(long)]
    target: PathBuf,
    #[arg(long)]
    epsilon: f64,
}

#[derive(Args)]
struct LangArgs {
    #[arg(long)]
    sft: PathBuf,
    #[arg(long)]
    window: PathBuf,
    #[arg(long, default_value_t = 1)]
    margin: i64,
}

#[derive(Subcommand)]
enum EntropyCmd {
    /// Topological entropy of a cover.
    Top(EntropyArgs),
    /// Measure entropy of a cover (upper family) or partition.
    Measure(MeasureArgs),
    /// Katok counting statistic.
    Katok(KatokArgs),
    /// Local variational-principle check over a list of measures.
    Vp(VpArgs),
}

#[derive(Args)]
struct EntropyArgs {
    #[arg(long)]
    sft: PathBuf,
    #[arg(long)]
    cover: PathBuf,
    /// "box" or a path to a Følner spec JSON.
    #[arg(long, default_value = "box")]
    folner: String,
    #[arg(long)]
    nmax: usize,
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long)]
    sft: PathBuf,
    #[arg(long)]
    cover: PathBuf,
    #[arg(long)]
    measure: PathBuf,
    #[arg(long, default_value = "box")]
    folner: String,
    #[arg(long)]
    nmax: usize,
    /// Refinement depth for the upper family.
    #[arg(long, default_value_t = 2)]
    refine: usize,
    /// Compute the static-join estimate h_μ⁻ instead of the upper family.
    #[arg(long)]
    minus: bool,
}

#[derive(Args)]
struct KatokArgs {
    #[arg(long)]
    sft: PathBuf,
    #[arg(long)]
    cover: PathBuf,
    #[arg(long)]
    measure: PathBuf,
    #[arg(long, default_value = "box")]
    folner: String,
    #[arg(long)]
    nmax: usize,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
}

#[derive(Args)]
struct VpArgs {
    #[arg(long)]
    sft: PathBuf,
    #[arg(long)]
    cover: PathBuf,
    /// JSON file holding a list of measures.
    #[arg(long)]
    measures: PathBuf,
    #[arg(long, default_value = "box")]
    folner: String,
    #[arg(long)]
    nmax: usize,
    #[arg(long, default_value_t = 2)]
    refine: usize,
}

#[derive(Subcommand)]
enum TuplesCmd {
    /// Tuple verdict for a candidate point list.
    Check {
        #[arg(long)]
        sft: PathBuf,
        /// {"r": 1, "words": [["0","1"], ["1","0"]]}.
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 3)]
        rmax: usize,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// U.p.e. heuristic over all pairs at a resolution.
    Upe {
        #[arg(long)]
        sft: PathBuf,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// λ_n mass of a product of symbolic sets.
    Lambda {
        #[arg(long)]
        sft: PathBuf,
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        n: usize,
        /// Cover-file style list of symbolic sets (the product factors).
        #[arg(long)]
        sets: PathBuf,
    },
    /// Product-formula spot check.
    Product {
        #[arg(long)]
        sft1: PathBuf,
        #[arg(long)]
        sft2: PathBuf,
        /// [[ [w1, w2], [w1, w2] ], …]: per candidate, per point, the
        /// factor words as token arrays.
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long, default_value_t = 0)]
        r: usize,
        #[arg(long, default_value_t = 8)]
        nmax_product: usize,
        #[arg(long, default_value_t = 8)]
        nmax1: usize,
        #[arg(long, default_value_t = 8)]
        nmax2: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
}

#[derive(Args)]
struct PlotArgs {
    /// A report produced by an entropy subcommand.
    #[arg(long)]
    report: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let started = Instant::now();
    let budget = cli
        .budget
        .or_else(|| std::env::var("LOCENT_BUDGET").ok().and_then(|v| v.parse().ok()));
    let mut opts = EntropyOptions::default();
    if let Some(b) = budget {
        opts.node_budget = b;
        opts.incidence_budget = b as usize;
        opts.assignment_budget = b;
    }
    match dispatch(&cli, &opts) {
        Ok((name, ok, result)) => {
            let mut report = json!({
                "schema": "locent-report/1",
                "command": name,
                "ok": ok,
                "seed": cli.seed,
                "budgets": {
                    "nodes": opts.node_budget,
                    "incidence": opts.incidence_budget,
                    "assignments": opts.assignment_budget,
                },
                "result": result,
            });
            if cli.timings {
                report["timings"] = json!({"elapsed_ms": started.elapsed().as_millis() as u64});
            }
            let text = serde_json::to_string_pretty(&report).expect("report is valid JSON");
            let emitted = match &cli.out {
                Some(path) => std::fs::write(path, text + "\n").map_err(|e| anyhow!(e)),
                None => {
                    use std::io::Write;
                    let mut stdout = std::io::stdout().lock();
                    match writeln!(stdout, "{text}") {
                        // A closed pipe downstream is not our error.
                        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                        other => other.map_err(|e| anyhow!(e)),
                    }
                }
            };
            if let Err(e) = emitted {
                eprintln!("error: {e}");
                return 2;
            }
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn read_json(path: &PathBuf) -> anyhow::Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn folner_arg(spec: &str, d: usize) -> anyhow::Result<FolnerSequence> {
    if spec == "box" {
        return Ok(FolnerSequence::Box { d });
    }
    let v = read_json(&PathBuf::from(spec))?;
    Ok(io::folner_from_json(&v)?)
}

fn sig(x: f64) -> f64 {
    io::round_sig(x, 12)
}

fn estimate_json(est: &EntropyEstimate) -> Value {
    json!({
        "values": est
            .values
            .iter()
            .map(|v| json!({"n": v.n, "window_size": v.window_size, "value": sig(v.value)}))
            .collect::<Vec<_>>(),
        "certified_upper": sig(est.certified_upper),
        "extrapolated": sig(est.extrapolated),
        "exact": est.exact,
        "certified": est.certified,
        "search_exact": est.search_exact,
        "approximate_language": est.approximate_language,
    })
}

type Outcome = anyhow::Result<(&'static str, bool, Value)>;

fn dispatch(cli: &Cli, opts: &EntropyOptions) -> Outcome {
    match &cli.command {
        Command::Group { cmd } => match cmd {
            GroupCmd::Folner { spec, n } => {
                let seq = io::folner_from_json(&read_json(spec)?)?;
                let f = seq.member(*n)?;
                Ok((
                    "group.folner",
                    true,
                    json!({"n": n, "set": io::finite_subset_to_json(&f), "size": f.len()}),
                ))
            }
            GroupCmd::Boundary { a, k, delta } => {
                let a = io::finite_subset_from_json(&read_json(a)?)?;
                let k = io::finite_subset_from_json(&read_json(k)?)?;
                let b = locent_core::group::boundary(&a, &k)?;
                let report = invariance_report(&a, &k, *delta)?;
                Ok((
                    "group.boundary",
                    true,
                    json!({
                        "boundary": io::finite_subset_to_json(&b),
                        "boundary_size": report.boundary_size,
                        "ratio": sig(report.ratio),
                        "delta": delta,
                        "satisfied": report.satisfied,
                    }),
                ))
            }
        },
        Command::Tile(args) => {
            let shapes_json = read_json(&args.shapes)?;
            let shapes = shapes_json
                .as_array()
                .ok_or_else(|| anyhow!("shapes file must be a JSON list of finite subsets"))?
                .iter()
                .map(io::finite_subset_from_json)
                .collect::<locent_core::Result<Vec<_>>>()?;
            let target = io::finite_subset_from_json(&read_json(&args.target)?)?;
            let tiling = tiling::quasi_tile(&shapes, &target, args.epsilon)?;
            let ok = tiling.ok;
            Ok((
                "tile",
                ok,
                json!({
                    "shapes": tiling.shapes.iter().map(io::finite_subset_to_json).collect::<Vec<_>>(),
                    "centers": tiling.centers.iter().map(io::finite_subset_to_json).collect::<Vec<_>>(),
                    "coverage": sig(tiling.coverage),
                    "epsilon": tiling.epsilon,
                    "ok": tiling.ok,
                }),
            ))
        }
        Command::Lang(args) => {
            let sft = io::sft_from_json(&read_json(&args.sft)?)?;
            let window = io::finite_subset_from_json(&read_json(&args.window)?)?;
            let language = lang::language(&sft, &window, args.margin, opts.language_budget)?;
            Ok((
                "lang",
                true,
                json!({
                    "window": language.window.iter().map(|g| g.coords().to_vec()).collect::<Vec<_>>(),
                    "count": language.words.len(),
                    "exact": language.exact,
                    "words": language
                        .words
                        .iter()
                        .map(|w| w.iter().map(|&s| sft.alphabet.symbol(s)).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                }),
            ))
        }
        Command::Entropy { cmd } => match cmd {
            EntropyCmd::Top(args) => {
                let sft = io::sft_from_json(&read_json(&args.sft)?)?;
                let cover = io::cover_from_json(&read_json(&args.cover)?, &sft)?;
                let seq = folner_arg(&args.folner, sft.d)?;
                let est = entropy::h_top(&sft, &cover, &seq, args.nmax, opts)?;
                Ok(("entropy.top", true, estimate_json(&est)))
            }
            EntropyCmd::Measure(args) => {
                let sft = io::sft_from_json(&read_json(&args.sft)?)?;
                let cover = io::cover_from_json(&read_json(&args.cover)?, &sft)?;
                let mu = io::measure_from_json(&read_json(&args.measure)?, &sft)?;
                let seq = folner_arg(&args.folner, sft.d)?;
                let est = if args.minus {
                    entropy::h_mu_minus_cover(&sft, &mu, &cover, &seq, args.nmax, opts)?
                } else {
                    entropy::h_mu_cover(&sft, &mu, &cover, &seq, args.nmax, args.refine, opts)?
                };
                Ok(("entropy.measure", true, estimate_json(&est)))
            }
            EntropyCmd::Katok(args) => {
                let sft = io::sft_from_json(&read_json(&args.sft)?)?;
                let cover = io::cover_from_json(&read_json(&args.cover)?, &sft)?;
                let mu = io::measure_from_json(&read_json(&args.measure)?, &sft)?;
                let seq = folner_arg(&args.folner, sft.d)?;
                let ke = entropy::katok_entropy(&sft, &mu, &cover, &seq, args.nmax, args.epsilon, opts)?;
                let ok = ke.weiss.iter().all(|w| w.holds);
                Ok((
                    "entropy.katok",
                    ok,
                    json!({
                        "estimate": estimate_json(&ke.estimate),
                        "weiss": ke
                            .weiss
                            .iter()
                            .map(|w| json!({"n": w.n, "lhs": sig(w.lhs), "rhs": sig(w.rhs), "holds": w.holds}))
                            .collect::<Vec<_>>(),
                    }),
                ))
            }
            EntropyCmd::Vp(args) => {
                let sft = io::sft_from_json(&read_json(&args.sft)?)?;
                let cover = io::cover_from_json(&read_json(&args.cover)?, &sft)?;
                let measures_json = read_json(&args.measures)?;
                let measures = measures_json
                    .as_array()
                    .ok_or_else(|| anyhow!("measures file must be a JSON list"))?
                    .iter()
                    .map(|m| io::measure_from_json(m, &sft))
                    .collect::<locent_core::Result<Vec<_>>>()?;
                let seq = folner_arg(&args.folner, sft.d)?;
                let report = entropy::vp_check(&sft, &cover, &measures, &seq, args.nmax, args.refine, opts)?;
                let ok = report.certificate_ok;
                Ok((
                    "entropy.vp",
                    ok,
                    json!({
                        "h_top": estimate_json(&report.h_top),
                        "per_measure": report.per_measure.iter().map(estimate_json).collect::<Vec<_>>(),
                        "max_h_mu": sig(report.max_h_mu),
                        "gap": sig(report.gap),
                        "argmax": report.argmax,
                        "certificate_ok": report.certificate_ok,
                    }),
                ))
            }
        },
        Command::Tuples { cmd } => match cmd {
            TuplesCmd::Check {
                sft,
                points,
                rmax,
                nmax,
                tol,
            } => {
                let sft = io::sft_from_json(&read_json(sft)?)?;
                let pts = read_json(points)?;
                let r = pts
                    .get("r")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| anyhow!("points file needs \"r\""))? as usize;
                let words = parse_words(&pts, "words", &sft)?;
                let candidate = tuples::TupleCandidate::from_words(&sft, r, &words)?;
                let mut topts = tuples::TupleOptions {
                    tol: *tol,
                    ..Default::default()
                };
                topts.entropy = opts.clone();
                let report = tuples::is_entropy_tuple(&sft, &candidate, (*rmax).max(r), *nmax, &topts)?;
                Ok((
                    "tuples.check",
                    true,
                    json!({
                        "verdict": report.verdict,
                        "per_resolution": report
                            .per_resolution
                            .iter()
                            .map(|r| json!({
                                "r": r.r,
                                "verdict": r.verdict,
                                "covers_checked": r.covers_checked,
                                "min_certified_upper": sig(r.min_certified_upper),
                                "min_last": sig(r.min_last),
                            }))
                            .collect::<Vec<_>>(),
                    }),
                ))
            }
            TuplesCmd::Upe { sft, r, nmax, tol } => {
                let sft = io::sft_from_json(&read_json(sft)?)?;
                let mut topts = tuples::TupleOptions {
                    tol: *tol,
                    ..Default::default()
                };
                topts.entropy = opts.clone();
                let report = tuples::upe_check(&sft, *r, *nmax, &topts)?;
                let verdict = match &report.verdict {
                    tuples::UpeVerdict::Evidence => json!({"kind": "evidence"}),
                    tuples::UpeVerdict::Refuted { witness } => json!({
                        "kind": "refuted",
                        "witness": [tokens(&witness.0, &sft), tokens(&witness.1, &sft)],
                    }),
                    tuples::UpeVerdict::Undecided => json!({"kind": "undecided"}),
                };
                Ok((
                    "tuples.upe",
                    true,
                    json!({
                        "r": report.r,
                        "verdict": verdict,
                        "pairs": report
                            .pair_verdicts
                            .iter()
                            .map(|(a, b, v)| json!([tokens(a, &sft), tokens(b, &sft), v]))
                            .collect::<Vec<_>>(),
                    }),
                ))
            }
            TuplesCmd::Lambda {
                sft,
                measure,
                n,
                sets,
            } => {
                let sft = io::sft_from_json(&read_json(sft)?)?;
                let mu = io::measure_from_json(&read_json(measure)?, &sft)?;
                let cover = io::cover_from_json(&read_json(sets)?, &sft)?;
                let lambda = tuples::lambda_n(&mu, *n)?;
                let mut hull = cover.shape_hull();
                if hull.is_empty() {
                    hull.push(locent_core::group::GroupElement::identity(sft.d)?);
                }
                let window = locent_core::group::FiniteSubset::new(sft.d, hull)?;
                let mass = lambda.product_mass(&cover.elements, &window, &sft)?;
                Ok((
                    "tuples.lambda",
                    true,
                    json!({
                        "n": n,
                        "variant": lambda.variant,
                        "mass": io::rational_to_json(&mass),
                        "mass_f64": sig(num_traits_to_f64(&mass)),
                        "positive": mass > measures::Q::from_integer(0.into()),
                    }),
                ))
            }
            TuplesCmd::Product {
                sft1,
                sft2,
                pairs,
                r,
                nmax_product,
                nmax1,
                nmax2,
                tol,
            } => {
                let s1 = io::sft_from_json(&read_json(sft1)?)?;
                let s2 = io::sft_from_json(&read_json(sft2)?)?;
                let pairs_json = read_json(pairs)?;
                let candidates = parse_product_candidates(&pairs_json, &s1, &s2)?;
                let mut topts = tuples::TupleOptions {
                    tol: *tol,
                    ..Default::default()
                };
                topts.entropy = opts.clone();
                let report = tuples::product_tuple_check(
                    &s1,
                    &s2,
                    &candidates,
                    *r,
                    *nmax_product,
                    *nmax1,
                    *nmax2,
                    &topts,
                )?;
                let ok = report.disagreements == 0;
                Ok((
                    "tuples.product",
                    ok,
                    json!({
                        "decided": report.decided,
                        "agreements": report.agreements,
                        "disagreements": report.disagreements,
                        "undecided": report.undecided,
                        "instances": report
                            .instances
                            .iter()
                            .map(|i| json!({"detector": i.detector, "predicted": i.predicted, "agree": i.agree}))
                            .collect::<Vec<_>>(),
                    }),
                ))
            }
        },
        Command::Plotdata(args) => {
            let report = read_json(&args.report)?;
            let result = report
                .get("result")
                .ok_or_else(|| anyhow!("not a locent report: missing \"result\""))?;
            let est = result
                .get("values")
                .map(|_| result)
                .or_else(|| result.get("estimate"))
                .or_else(|| result.get("h_top"))
                .ok_or_else(|| anyhow!("report carries no entropy estimate"))?;
            let values = est
                .get("values")
                .and_then(Value::as_array)
                .ok_or_else(|| anyhow!("estimate has no values"))?;
            let mut text = String::from("# n value certified_upper\n");
            let mut running = f64::INFINITY;
            for v in values {
                let n = v.get("n").and_then(Value::as_u64).unwrap_or(0);
                let value = v.get("value").and_then(Value::as_f64).unwrap_or(f64::NAN);
                running = running.min(value);
                text.push_str(&format!("{n} {value} {running}\n"));
            }
            Ok(("plotdata", true, json!({"table": text})))
        }
    }
}

fn tokens(word: &[u8], sft: &locent_core::Sft) -> Vec<String> {
    word.iter().map(|&s| sft.alphabet.symbol(s).to_string()).collect()
}

fn parse_words(v: &Value, key: &str, sft: &locent_core::Sft) -> anyhow::Result<Vec<Vec<u8>>> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("points file needs \"{key}\""))?
        .iter()
        .map(|w| {
            w.as_array()
                .ok_or_else(|| anyhow!("each word must be a token array"))?
                .iter()
                .map(|t| {
                    let tok = t.as_str().ok_or_else(|| anyhow!("tokens must be strings"))?;
                    Ok(sft.alphabet.index_of(tok)?)
                })
                .collect::<anyhow::Result<Vec<u8>>>()
        })
        .collect()
}

type ProductCandidates = Vec<Vec<(Vec<u8>, Vec<u8>)>>;

fn parse_product_candidates(
    v: &Value,
    s1: &locent_core::Sft,
    s2: &locent_core::Sft,
) -> anyhow::Result<ProductCandidates> {
    v.as_array()
        .ok_or_else(|| anyhow!("pairs file must be a list of candidates"))?
        .iter()
        .map(|candidate| {
            candidate
                .as_array()
                .ok_or_else(|| anyhow!("candidate must be a list of points"))?
                .iter()
                .map(|point| {
                    let pair = point
                        .as_array()
                        .filter(|p| p.len() == 2)
                        .ok_or_else(|| anyhow!("each point is a [w1, w2] pair"))?;
                    let w1 = token_word(&pair[0], s1)?;
                    let w2 = token_word(&pair[1], s2)?;
                    Ok((w1, w2))
                })
                .collect()
        })
        .collect()
}

fn token_word(v: &Value, sft: &locent_core::Sft) -> anyhow::Result<Vec<u8>> {
    v.as_array()
        .ok_or_else(|| anyhow!("word must be a token array"))?
        .iter()
        .map(|t| {
            let tok = t.as_str().ok_or_else(|| anyhow!("tokens must be strings"))?;
            Ok(sft.alphabet.index_of(tok)?)
        })
        .collect()
}

fn num_traits_to_f64(q: &measures::Q) -> f64 {
    use std::str::FromStr;
    // Exact conversion through the decimal expansion is unnecessary; the
    // rational fits f64 for report purposes.
    let n = f64::from_str(&q.numer().to_string()).unwrap_or(f64::NAN);
    let d = f64::from_str(&q.denom().to_string()).unwrap_or(f64::NAN);
    n / d
}
