//! Command-line front end: reproducible searches, builds, certificates,
//! reports and figures.
//!
//! Exit codes: 0 pass/certified, 1 violation/fail, 2 usage error,
//! 3 inconclusive.

mod render;

use clap::{Parser, Subcommand, ValueEnum};
use intdist::certifier::{
    line_criterion_check, monte_carlo_integral_pair, pairwise_certify, Verdict,
};
use intdist::constructions::{
    build_1d_family, build_annuli, build_pentagon_discs, build_pgon_balls, build_pgon_slices,
    build_separated_balls, build_two_slices, pentagon_pipeline, pgon_balls_pipeline,
    pgon_slices_pipeline, two_slices_pipeline, OneDimVariant, PipelineRun, SeparatedLayout,
};
use intdist::diophantine::{
    find_k, golden_ratio_problem, integer_relation, pgon_diagonals, solve_pgon_system, PgonForm,
};
use intdist::error::Error;
use intdist::geometry::ComponentUnion;
use intdist::interval1d::{IntervalSet1D, IntervalSetJson};
use intdist::precision::{Dimension, PrecisionContext};
use intdist::volumes::{FormulaKind, VolumeFormula};
use serde_json::json;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "intdist",
    version,
    about = "Construct, certify and measure open sets avoiding integral distances"
)]
struct Cli {
    /// working mantissa bits
    #[arg(long, global = true, default_value_t = 256)]
    bits: u32,
    /// RNG seed recorded in every stochastic artifact
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// comparison tolerance
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// write the primary artifact here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Ball,
    Slice,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Pairwise,
    Lines,
    Mc,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructionArg {
    Pentagon,
    PgonBalls,
    PgonSlices,
    TwoSlices,
    Nested,
    Separated,
    Annuli,
    OneD,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PipelineArg {
    Pentagon,
    PgonBalls,
    PgonSlices,
    TwoSlices,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LayoutArg {
    Ngon,
    Parabola,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    BigSmall,
    Equal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Ball,
    Slice,
    Cap,
    CosPowerIntegral,
    FCirc,
    LCirc,
    F,
    LConjecture,
    WidthBound,
    JungBound,
    AveragingBound,
    AsymptoticV,
}

impl From<KindArg> for FormulaKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Ball => FormulaKind::Ball,
            KindArg::Slice => FormulaKind::Slice,
            KindArg::Cap => FormulaKind::Cap,
            KindArg::CosPowerIntegral => FormulaKind::CosPowerIntegral,
            KindArg::FCirc => FormulaKind::FCirc,
            KindArg::LCirc => FormulaKind::LCirc,
            KindArg::F => FormulaKind::F,
            KindArg::LConjecture => FormulaKind::LConjecture,
            KindArg::WidthBound => FormulaKind::WidthBound,
            KindArg::JungBound => FormulaKind::JungBound,
            KindArg::AveragingBound => FormulaKind::AveragingBound,
            KindArg::AsymptoticV => FormulaKind::AsymptoticV,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate volume formulas; emits CSV (kind,d,n,value,precision_bits) or JSON
    Volumes {
        /// reproduce the slice/cap table for d = 2..5
        #[arg(long)]
        table1: bool,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        diameter: Option<f64>,
        #[arg(long)]
        width: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Scan for integers k making the scaled fractional parts small
    SearchK {
        /// odd prime for the p-gon system
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_enum, default_value_t = FormArg::Ball)]
        form: FormArg,
        /// use the pentagon lemma's golden-ratio problem instead
        #[arg(long)]
        golden: bool,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        k_max: u64,
        /// restrict the system to the diagonals realized by this many
        /// consecutive vertices
        #[arg(long)]
        limit_components: Option<u64>,
    },
    /// Heuristic rational-independence test via integer relation search
    CheckIndependence {
        /// test the diagonal lengths of the regular p-gon
        #[arg(long)]
        p: Option<u64>,
        /// comma-separated decimal values
        #[arg(long)]
        values: Option<String>,
        #[arg(long, default_value_t = 1_000_000)]
        coeff_bound: u64,
        /// scaling precision of the relation lattice
        #[arg(long, default_value_t = 512)]
        relation_bits: u32,
    },
    /// Build a construction; emits ComponentUnion JSON (or intervals for one-d)
    Build {
        #[arg(long, value_enum)]
        construction: ConstructionArg,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, value_enum)]
        layout: Option<LayoutArg>,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        #[arg(long)]
        n_max: Option<u64>,
    },
    /// Certify a ComponentUnion (or 1-D interval set) JSON file
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Pairwise)]
        method: MethodArg,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 10_000)]
        lines: usize,
    },
    /// search-k -> build -> certify -> volume, emitting one summary row
    Pipeline {
        #[arg(long, value_enum)]
        construction: PipelineArg,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        k_max: Option<u64>,
        #[arg(long, default_value_t = 2000)]
        p_max: u64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Build the annuli example and verify the bound ledger
    AnnuliVerify {
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n_max: u64,
        #[arg(long, default_value_t = 10_000)]
        lines: usize,
    },
    /// Render a planar union to SVG
    Render {
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() {
    std::process::exit(real_main());
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Usage(_) | Error::Parse(_) | Error::Domain(_) | Error::Precondition(_) => 2,
        Error::Undecidable(_) => 3,
        Error::EmptyBody
        | Error::PTooSmall { .. }
        | Error::KTooSmall(..)
        | Error::Packing { .. } => 1,
    }
}

fn real_main() -> i32 {
    let cli = Cli::parse();
    let ctx = match PrecisionContext::with_tol(cli.bits, cli.tol) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let out = cli.out.clone();
    match run(&cli, &ctx) {
        Ok((content, code)) => {
            if let Err(e) = emit(&out, &content) {
                eprintln!("error: {e}");
                return 2;
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read_to_string(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn float17(f: &intdist::rug::Float) -> String {
    format!("{:.16e}", f)
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::CertifiedAvoiding => 0,
        Verdict::Violation => 1,
        Verdict::Inconclusive => 3,
    }
}

fn run(cli: &Cli, ctx: &PrecisionContext) -> Result<(String, i32), Error> {
    match &cli.command {
        Command::Volumes {
            table1,
            kind,
            d,
            n,
            diameter,
            width,
            format,
        } => {
            let mut formulas: Vec<VolumeFormula> = Vec::new();
            if *table1 {
                for kind in [FormulaKind::Slice, FormulaKind::Cap] {
                    for d in 2..=5usize {
                        formulas.push(VolumeFormula {
                            kind,
                            d,
                            n: None,
                            diameter: None,
                            width: None,
                        });
                    }
                }
            } else {
                let kind = kind.ok_or_else(|| Error::usage("pass --table1 or --kind"))?;
                formulas.push(VolumeFormula {
                    kind: kind.into(),
                    d: d.ok_or_else(|| Error::usage("--kind needs --d"))?,
                    n: *n,
                    diameter: *diameter,
                    width: *width,
                });
            }
            let mut rows = Vec::new();
            for f in &formulas {
                let v = f.eval(ctx)?;
                rows.push((f.clone(), v));
            }
            let content = match format {
                Format::Csv => {
                    let mut s = String::from("kind,d,n,value,precision_bits\n");
                    for (f, v) in &rows {
                        let kind = serde_json::to_value(f.kind).unwrap();
                        s.push_str(&format!(
                            "{},{},{},{},{}\n",
                            kind.as_str().unwrap(),
                            f.d,
                            f.n.map_or(String::new(), |n| n.to_string()),
                            float17(&v.value),
                            ctx.bits()
                        ));
                    }
                    s
                }
                Format::Json => {
                    let arr: Vec<_> = rows
                        .iter()
                        .map(|(f, v)| {
                            json!({
                                "kind": f.kind,
                                "d": f.d,
                                "n": f.n,
                                "value": float17(&v.value),
                                "value_f64": v.value.to_f64(),
                                "conjectural": v.conjectural,
                                "precision_bits": ctx.bits(),
                            })
                        })
                        .collect();
                    format!("{:#}\n", serde_json::Value::Array(arr))
                }
            };
            Ok((content, 0))
        }
        Command::SearchK {
            p,
            form,
            golden,
            epsilon,
            k_max,
            limit_components,
        } => {
            let hits = if *golden {
                let eps = ctx.float(*epsilon);
                let problem = golden_ratio_problem(ctx, &eps, *k_max)?;
                find_k(ctx, &problem)?
            } else {
                let p = p.ok_or_else(|| Error::usage("pass --p or --golden"))?;
                let eps = ctx.float(*epsilon);
                let form = match form {
                    FormArg::Ball => PgonForm::BallConstruction,
                    FormArg::Slice => PgonForm::SliceConstruction,
                };
                solve_pgon_system(ctx, p, form, &eps, *k_max, *limit_components)?
            };
            let records: Vec<_> = hits
                .iter()
                .map(|(k, f)| json!({"k": k, "worst_frac": f.to_f64()}))
                .collect();
            let doc = json!({
                "hits": records,
                "count": hits.len(),
                "epsilon": epsilon,
                "k_max": k_max,
                "bits": ctx.bits(),
                "seed": cli.seed,
            });
            Ok((format!("{doc:#}\n"), 0))
        }
        Command::CheckIndependence {
            p,
            values,
            coeff_bound,
            relation_bits,
        } => {
            let vals = match (p, values) {
                (Some(p), None) => pgon_diagonals(ctx, *p)?.values,
                (None, Some(list)) => list
                    .split(',')
                    .map(|s| ctx.parse(s.trim()))
                    .collect::<Result<Vec<_>, _>>()?,
                _ => return Err(Error::usage("pass exactly one of --p or --values")),
            };
            let relation = integer_relation(&vals, *coeff_bound, *relation_bits)?;
            let doc = json!({
                "relation": relation.as_ref().map(|r| json!({
                    "coefficients": r.coefficients,
                    "residual": r.residual.to_f64(),
                })),
                "independent_at_bound": relation.is_none(),
                "heuristic": true,
                "coeff_bound": coeff_bound,
                "precision_bits": relation_bits,
            });
            Ok((format!("{doc:#}\n"), 0))
        }
        Command::Build {
            construction,
            d,
            n,
            p,
            k,
            epsilon,
            layout,
            variant,
            n_max,
        } => {
            let dim = Dimension::new(d.unwrap_or(2))?;
            let content = match construction {
                ConstructionArg::Pentagon => {
                    build_pentagon_discs(k.unwrap_or(6.0) as u64, epsilon.unwrap_or(0.01))?
                        .to_json()
                }
                ConstructionArg::PgonBalls => {
                    let built = build_pgon_balls(
                        ctx,
                        dim,
                        n.ok_or_else(|| Error::usage("pgon-balls needs --n"))?,
                        p.ok_or_else(|| Error::usage("pgon-balls needs --p"))?,
                        k.ok_or_else(|| Error::usage("pgon-balls needs --k"))? as u64,
                        epsilon.unwrap_or(0.01),
                    )?;
                    if !built.system_satisfied {
                        eprintln!(
                            "warning: k fails the scaling system (worst frac {}); built unverified",
                            built.worst_frac
                        );
                    }
                    built.union.to_json()
                }
                ConstructionArg::PgonSlices => {
                    let built = build_pgon_slices(
                        dim,
                        n.ok_or_else(|| Error::usage("pgon-slices needs --n"))?,
                        p.ok_or_else(|| Error::usage("pgon-slices needs --p"))?,
                        k.ok_or_else(|| Error::usage("pgon-slices needs --k"))? as u64,
                        epsilon.unwrap_or(0.01),
                    )?;
                    built.union.to_json()
                }
                ConstructionArg::TwoSlices => {
                    build_two_slices(dim, k.unwrap_or(100.0) as u64)?.to_json()
                }
                ConstructionArg::Nested => intdist::constructions::build_nested(
                    dim,
                    n.unwrap_or(2),
                    epsilon.unwrap_or(0.1),
                )?
                .to_json(),
                ConstructionArg::Separated => {
                    let layout = match layout.unwrap_or(LayoutArg::Ngon) {
                        LayoutArg::Ngon => SeparatedLayout::Ngon,
                        LayoutArg::Parabola => SeparatedLayout::Parabola,
                    };
                    build_separated_balls(
                        dim,
                        n.ok_or_else(|| Error::usage("separated needs --n"))?,
                        k.unwrap_or(100.0),
                        layout,
                    )?
                    .to_json()
                }
                ConstructionArg::Annuli => {
                    let (union, _) = build_annuli(
                        ctx,
                        dim,
                        n_max.ok_or_else(|| Error::usage("annuli needs --n-max"))?,
                        0,
                        cli.seed,
                    )?;
                    union.to_json()
                }
                ConstructionArg::OneD => {
                    let variant = match variant.unwrap_or(VariantArg::Equal) {
                        VariantArg::BigSmall => OneDimVariant::BigSmall,
                        VariantArg::Equal => OneDimVariant::Equal,
                    };
                    let set = build_1d_family(n.unwrap_or(3), epsilon.unwrap_or(0.1), variant)?;
                    serde_json::to_string_pretty(&set.to_json()).unwrap()
                }
            };
            Ok((format!("{content}\n"), 0))
        }
        Command::Certify {
            input,
            method,
            samples,
            lines,
        } => {
            let text = read_to_string(input)?;
            if looks_like_interval_set(&text) {
                let set_json: IntervalSetJson = serde_json::from_str(&text)
                    .map_err(|e| Error::Parse(format!("interval set: {e}")))?;
                let set = IntervalSet1D::from_f64(&set_json.intervals)?;
                let outcome = intdist::interval1d::check_1d(&set)?;
                let (doc, code) = match &outcome {
                    intdist::interval1d::Check1dOutcome::IntegralPair { x, y, distance } => (
                        json!({
                            "method": "one_dim_exact",
                            "has_integral_pair": true,
                            "witness": {
                                "x": x.to_f64(),
                                "y": y.to_f64(),
                                "distance": distance.to_f64(),
                            },
                        }),
                        1,
                    ),
                    intdist::interval1d::Check1dOutcome::Avoids { shift } => (
                        json!({
                            "method": "one_dim_exact",
                            "has_integral_pair": false,
                            "shift": shift.to_f64(),
                        }),
                        0,
                    ),
                };
                return Ok((format!("{doc:#}\n"), code));
            }
            let union = ComponentUnion::from_json(&text)?;
            match method {
                MethodArg::Pairwise => {
                    let cert = pairwise_certify(ctx, &union)?;
                    let code = verdict_code(cert.verdict);
                    Ok((format!("{}\n", cert.to_json()), code))
                }
                MethodArg::Lines => {
                    let report = line_criterion_check(&union, cli.seed, *lines, ctx.tol())?;
                    let code = if report.pass { 0 } else { 1 };
                    Ok((
                        format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
                        code,
                    ))
                }
                MethodArg::Mc => {
                    let mc = monte_carlo_integral_pair(&union, *samples, cli.seed)?;
                    let code = if mc.min_margin < ctx.tol() { 1 } else { 0 };
                    Ok((
                        format!("{}\n", serde_json::to_string_pretty(&mc).unwrap()),
                        code,
                    ))
                }
                MethodArg::All => {
                    let cert = pairwise_certify(ctx, &union)?;
                    let lines_report = line_criterion_check(&union, cli.seed, *lines, ctx.tol())?;
                    let mc = monte_carlo_integral_pair(&union, *samples, cli.seed)?;
                    let code = verdict_code(cert.verdict);
                    let doc = json!({
                        "pairwise": serde_json::to_value(&cert).unwrap(),
                        "lines": serde_json::to_value(&lines_report).unwrap(),
                        "monte_carlo": serde_json::to_value(&mc).unwrap(),
                    });
                    Ok((format!("{doc:#}\n"), code))
                }
            }
        }
        Command::Pipeline {
            construction,
            d,
            n,
            p,
            k,
            epsilon,
            k_max,
            p_max,
            samples,
        } => {
            let dim = Dimension::new(d.unwrap_or(2))?;
            let run: PipelineRun = match construction {
                PipelineArg::Pentagon => pentagon_pipeline(
                    ctx,
                    epsilon.unwrap_or(0.01),
                    k_max.unwrap_or(2500),
                    *samples,
                    cli.seed,
                )?,
                PipelineArg::PgonBalls => pgon_balls_pipeline(
                    ctx,
                    dim,
                    n.ok_or_else(|| Error::usage("pgon-balls needs --n"))?,
                    p.ok_or_else(|| Error::usage("pgon-balls needs --p"))?,
                    epsilon.unwrap_or(0.01),
                    k_max.unwrap_or(100_000),
                    *samples,
                    cli.seed,
                )?,
                PipelineArg::PgonSlices => pgon_slices_pipeline(
                    ctx,
                    dim,
                    n.ok_or_else(|| Error::usage("pgon-slices needs --n"))?,
                    epsilon.unwrap_or(0.01),
                    k_max.unwrap_or(2_000_000),
                    *p_max,
                    *samples,
                    cli.seed,
                )?,
                PipelineArg::TwoSlices => two_slices_pipeline(
                    ctx,
                    dim,
                    k.ok_or_else(|| Error::usage("two-slices needs --k"))?,
                    *samples,
                    cli.seed,
                )?,
            };
            let code = verdict_code(run.certificate.verdict);
            let doc = json!({
                "construction": run.construction,
                "params": run.params,
                "k": run.k,
                "verdict": run.certificate.verdict,
                "volume": run.volume,
                "volume_error": run.volume_error,
                "paper_limit": run.paper_limit,
                "gap": run.paper_limit - run.volume,
                "mc_margin": run.mc_margin,
                "bits": ctx.bits(),
                "tol": ctx.tol(),
                "seed": cli.seed,
            });
            Ok((format!("{doc:#}\n"), code))
        }
        Command::AnnuliVerify { d, n_max, lines } => {
            let dim = Dimension::new(d.unwrap_or(2))?;
            let (_, report) = build_annuli(ctx, dim, *n_max, *lines, cli.seed)?;
            let pass = report.connectivity_ok
                && report.volume_sum >= report.harmonic_lower
                && report.max_b_sum < 0.12
                && report.max_a_sum_low < 0.47
                && report.max_a_sum_high < 0.84
                && report.max_total_length < 1.0;
            let doc = json!({
                "report": serde_json::to_value(&report).unwrap(),
                "pass": pass,
                "bounds": {"b": 0.12, "a_low": 0.47, "a_high": 0.84, "total": 1.0},
                "seed": cli.seed,
            });
            Ok((format!("{doc:#}\n"), if pass { 0 } else { 1 }))
        }
        Command::Render { input } => {
            let text = read_to_string(input)?;
            let union = ComponentUnion::from_json(&text)?;
            let svg = render::render_svg(&union).map_err(Error::Usage)?;
            Ok((svg, 0))
        }
    }
}

fn looks_like_interval_set(text: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(text)
        .ok()
        .and_then(|v| v.get("intervals").cloned())
        .is_some()
}
