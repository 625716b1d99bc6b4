//! `maxplus`: exact max-plus computations over documented JSON formats.
//!
//! Every subcommand reads one JSON input (a file path, `-` for stdin, or an
//! inline JSON literal) and writes a `{"ok": ..., "result"/"error": ...}`
//! envelope to stdout. Domain errors exit 1, usage errors exit 2.

mod io;

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use io::*;
use maxplus::curve::{is_section, section_or_box, SectionOrBox};
use maxplus::planecurve::{betti1, on_curve, skeleton, tropicalize, PlanePoint};
use maxplus::poly::TermData;
use maxplus::{left_inverse, Error, TropScalar, TropVector};

#[derive(Parser)]
#[command(
    name = "maxplus",
    version,
    about = "Exact arithmetic and geometry over the max-plus semifield",
    after_help = "Scalars are strings: \"-inf\", \"3\", \"-1/2\". Run with --schema for the JSON formats."
)]
struct Cli {
    /// Print the JSON schemas of all input and output formats and exit.
    #[arg(long)]
    schema: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Scalar arithmetic: add, mul, div, or root.
    Scalar {
        op: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Exact membership of a vector in a module: {"module", "vector"}.
    Contains { input: String },
    /// Greatest module element below a vector: {"module", "vector"}.
    Project { input: String },
    /// Minimal generating set of a module: {"module"}.
    Basis { input: String },
    /// Number of extremal rays: {"module"}.
    Dim { input: String },
    /// Exact infimum-preservation test with certificate: {"module"}.
    Latcheck { input: String },
    /// Sampled distributivity check: {"module", "triples"?, "samples"?}.
    Straightcheck { input: String },
    /// Residuated left inverse of a column map: {"columns", "vector"}.
    Leftinv { input: String },
    /// Tropical determinant (permanent): {"matrix"}.
    Det { input: String },
    /// Matrix power: {"matrix", "k"}.
    Pow { input: String },
    /// Stabilized power under the zero-determinant hypothesis: {"matrix"}.
    Ff3 { input: String },
    /// Eigen-dichotomy certificate: {"matrix"}.
    Ff4 { input: String },
    /// Tropically convex hull of projective points: {"dim", "points"}.
    Hull { input: String },
    /// Ordinary-convexity test of a tropical polytope: {"dim", "points"}.
    #[command(name = "polytrope-check")]
    PolytropeCheck { input: String },
    /// Vertices of a polytrope: {"dim", "points"}.
    Vertices { input: String },
    /// Defining inequalities of a polytrope: {"dim", "points"}.
    Ineqs { input: String },
    /// Projective membership: {"polytope", "point"}.
    Member { input: String },
    /// Order of a rational function at a point: {"graph", "function", "point"}.
    Ord { input: String },
    /// Principal divisor of a rational function: {"graph", "function"}.
    Divisor { input: String },
    /// Is the function a section of the divisor: {"graph", "function", "divisor"}.
    #[command(name = "section-check")]
    SectionCheck { input: String },
    /// Box-or-section rank bound: {"graph", "divisor", "sections", "points"}.
    Fe7 { input: String },
    /// Corner-locus membership: {"polynomial", "point"}.
    Oncurve { input: String },
    /// Skeleton of a plane tropical curve: {"polynomial"}.
    Skeleton { input: String },
    /// First Betti number: {"polynomial"} or {"skeleton"}.
    Betti { input: String },
    /// Tropicalization of valued coefficients: {"terms"}.
    Tropicalize { input: String },
    /// Run the built-in worked-example corpus.
    Fixtures,
}

enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

fn load_input(input: &str) -> Result<String, CliError> {
    let trimmed = input.trim_start();
    if input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(input.to_string())
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| CliError::Usage(format!("cannot read {input}: {e}")))
    }
}

fn parse<T: for<'de> Deserialize<'de>>(input: &str) -> Result<T, CliError> {
    let text = load_input(input)?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid input JSON: {e}")))
}

fn to_value<T: serde::Serialize>(t: T) -> Value {
    serde_json::to_value(t).expect("output serialization cannot fail")
}

fn schemas() -> Value {
    let docs = [
        ("scalar", include_str!("../schemas/scalar.schema.json")),
        ("module", include_str!("../schemas/module.schema.json")),
        ("matrix", include_str!("../schemas/matrix.schema.json")),
        ("polytope", include_str!("../schemas/polytope.schema.json")),
        (
            "polynomial",
            include_str!("../schemas/polynomial.schema.json"),
        ),
        ("curve", include_str!("../schemas/curve.schema.json")),
        ("envelope", include_str!("../schemas/envelope.schema.json")),
    ];
    Value::Object(
        docs.iter()
            .map(|(name, text)| {
                (
                    name.to_string(),
                    serde_json::from_str(text).expect("bundled schemas are valid JSON"),
                )
            })
            .collect(),
    )
}

#[derive(Deserialize)]
struct ModuleVectorReq {
    module: ModuleData,
    vector: Vec<TropScalar>,
}

#[derive(Deserialize)]
struct ModuleReq {
    module: ModuleData,
}

#[derive(Deserialize)]
struct StraightReq {
    module: ModuleData,
    #[serde(default)]
    triples: Option<Vec<Vec<Vec<TropScalar>>>>,
    #[serde(default)]
    samples: Option<usize>,
}

#[derive(Deserialize)]
struct LeftinvReq {
    columns: Vec<Vec<TropScalar>>,
    vector: Vec<TropScalar>,
}

#[derive(Deserialize)]
struct MatrixReq {
    matrix: MatrixData,
}

#[derive(Deserialize)]
struct PowReq {
    matrix: MatrixData,
    k: u32,
}

#[derive(Deserialize)]
struct MemberReq {
    polytope: PolytopeData,
    point: Vec<TropScalar>,
}

#[derive(Deserialize)]
struct OrdReq {
    graph: GraphData,
    function: FunctionData,
    point: PointData,
}

#[derive(Deserialize)]
struct DivisorReq {
    graph: GraphData,
    function: FunctionData,
}

#[derive(Deserialize)]
struct SectionCheckReq {
    graph: GraphData,
    function: FunctionData,
    divisor: Vec<DivisorEntry>,
}

#[derive(Deserialize)]
struct RankReq {
    graph: GraphData,
    divisor: Vec<DivisorEntry>,
    sections: Vec<FunctionData>,
    points: Vec<PointData>,
}

#[derive(Deserialize)]
struct OncurveReq {
    polynomial: Vec<TermData>,
    point: (String, String),
}

#[derive(Deserialize)]
struct PolyReq {
    polynomial: Vec<TermData>,
}

#[derive(Deserialize)]
struct BettiReq {
    #[serde(default)]
    polynomial: Option<Vec<TermData>>,
    #[serde(default)]
    skeleton: Option<Value>,
}

#[derive(Deserialize)]
struct TropicalizeReq {
    terms: Vec<TropicalizeTerm>,
}

#[derive(Deserialize)]
struct TropicalizeTerm {
    exp: (i64, i64),
    val: String,
}

/// Deterministic triples for `straightcheck` when none are supplied:
/// generators, pairwise joins, and shifted copies.
fn default_triples(
    m: &maxplus::Submodule,
    samples: usize,
) -> Vec<(TropVector, TropVector, TropVector)> {
    let gens = m.generators();
    let mut pool: Vec<TropVector> = gens.to_vec();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            pool.push(gens[i].join(&gens[j]).unwrap());
        }
        pool.push(gens[i].scale(&TropScalar::ratio((i as i64 % 5) - 2, 2)));
    }
    let mut triples = Vec::new();
    let k = pool.len();
    for a in 0..k {
        for b in a..k {
            for c in 0..k {
                if triples.len() >= samples {
                    return triples;
                }
                triples.push((pool[a].clone(), pool[b].clone(), pool[c].clone()));
            }
        }
    }
    triples
}

fn run(cmd: Command) -> Result<Value, CliError> {
    match cmd {
        Command::Scalar { op, a, b } => {
            let x: TropScalar = a
                .parse()
                .map_err(|e: Error| CliError::Usage(e.to_string()))?;
            let result = match op.as_str() {
                "add" | "mul" | "div" => {
                    let y: TropScalar = b
                        .parse()
                        .map_err(|e: Error| CliError::Usage(e.to_string()))?;
                    match op.as_str() {
                        "add" => &x + &y,
                        "mul" => &x * &y,
                        _ => x.div(&y)?,
                    }
                }
                "root" => {
                    let m: u64 = b.parse().map_err(|_| {
                        CliError::Usage(format!("root index must be a positive integer, got {b:?}"))
                    })?;
                    if m == 0 {
                        return Err(CliError::Usage("root index must be positive".into()));
                    }
                    x.root(m)
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown scalar op {other:?}; expected add, mul, div, or root"
                    )))
                }
            };
            Ok(to_value(result))
        }
        Command::Contains { input } => {
            let req: ModuleVectorReq = parse(&input)?;
            let m = req.module.build()?;
            Ok(to_value(m.contains(&TropVector::new(req.vector))?))
        }
        Command::Project { input } => {
            let req: ModuleVectorReq = parse(&input)?;
            let m = req.module.build()?;
            Ok(to_value(m.project(&TropVector::new(req.vector))?))
        }
        Command::Basis { input } => {
            let req: ModuleReq = parse(&input)?;
            Ok(to_value(req.module.build()?.minimal_generators()))
        }
        Command::Dim { input } => {
            let req: ModuleReq = parse(&input)?;
            Ok(to_value(req.module.build()?.dimension()))
        }
        Command::Latcheck { input } => {
            let req: ModuleReq = parse(&input)?;
            let check = req.module.build()?.lattice_check()?;
            Ok(to_value(LatticeCheckOut::from(check)))
        }
        Command::Straightcheck { input } => {
            let req: StraightReq = parse(&input)?;
            let m = req.module.build()?;
            let triples = match req.triples {
                Some(ts) => ts
                    .into_iter()
                    .map(|t| {
                        let [a, b, c]: [Vec<TropScalar>; 3] = t.try_into().map_err(|_| {
                            CliError::Usage("each triple needs exactly three vectors".into())
                        })?;
                        Ok((TropVector::new(a), TropVector::new(b), TropVector::new(c)))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?,
                None => default_triples(&m, req.samples.unwrap_or(50)),
            };
            let report = m.straightness_on_samples(&triples)?;
            Ok(to_value(StraightnessOut::from(report)))
        }
        Command::Leftinv { input } => {
            let req: LeftinvReq = parse(&input)?;
            let columns: Vec<TropVector> = req.columns.into_iter().map(TropVector::new).collect();
            Ok(to_value(left_inverse(
                &columns,
                &TropVector::new(req.vector),
            )?))
        }
        Command::Det { input } => {
            let req: MatrixReq = parse(&input)?;
            Ok(to_value(req.matrix.build()?.det()?))
        }
        Command::Pow { input } => {
            let req: PowReq = parse(&input)?;
            Ok(matrix_out(&req.matrix.build()?.pow(req.k)))
        }
        Command::Ff3 { input } => {
            let req: MatrixReq = parse(&input)?;
            let (power, verified) = req.matrix.build()?.stabilized_power()?;
            Ok(json!({ "power": matrix_out(&power), "verified": verified }))
        }
        Command::Ff4 { input } => {
            let req: MatrixReq = parse(&input)?;
            let cert = req.matrix.build()?.dichotomy()?;
            Ok(to_value(DichotomyOut::from(cert)))
        }
        Command::Hull { input } => {
            let data: PolytopeData = parse(&input)?;
            Ok(polytope_out(&data.build()?))
        }
        Command::PolytropeCheck { input } => {
            let data: PolytopeData = parse(&input)?;
            let check = data.build()?.polytrope_check()?;
            Ok(json!({
                "is_polytrope": check.is_polytrope,
                "minima": to_value(check.minima),
                "failing": check.failing,
            }))
        }
        Command::Vertices { input } => {
            let data: PolytopeData = parse(&input)?;
            let verts = data.build()?.polytrope_vertices()?;
            Ok(to_value(
                verts.iter().map(|p| p.rep().clone()).collect::<Vec<_>>(),
            ))
        }
        Command::Ineqs { input } => {
            let data: PolytopeData = parse(&input)?;
            let c = data.build()?.defining_inequalities()?;
            Ok(to_value(CMatrixOut::from(&c)))
        }
        Command::Member { input } => {
            let req: MemberReq = parse(&input)?;
            let p = req.polytope.build()?;
            let point = maxplus::ProjPoint::new(TropVector::new(req.point))?;
            Ok(to_value(p.contains_point(&point)?))
        }
        Command::Ord { input } => {
            let req: OrdReq = parse(&input)?;
            let graph = req.graph.build()?;
            let f = req.function.build(&graph)?;
            let ord = f.order_at(&graph, &req.point.build()?)?;
            Ok(to_value(
                i64::try_from(ord).expect("orders fit machine integers"),
            ))
        }
        Command::Divisor { input } => {
            let req: DivisorReq = parse(&input)?;
            let graph = req.graph.build()?;
            let f = req.function.build(&graph)?;
            Ok(to_value(divisor_out(&f.principal_divisor(&graph)?)))
        }
        Command::SectionCheck { input } => {
            let req: SectionCheckReq = parse(&input)?;
            let graph = req.graph.build()?;
            let f = req.function.build(&graph)?;
            let d = divisor_from(req.divisor, &graph)?;
            Ok(to_value(is_section(&graph, &f, &d)?))
        }
        Command::Fe7 { input } => {
            let req: RankReq = parse(&input)?;
            let graph = req.graph.build()?;
            let d = divisor_from(req.divisor, &graph)?;
            let sections = req
                .sections
                .into_iter()
                .map(|f| f.build(&graph))
                .collect::<Result<Vec<_>, _>>()?;
            let points = req
                .points
                .into_iter()
                .map(|p| p.build())
                .collect::<Result<Vec<_>, _>>()?;
            match section_or_box(&graph, &d, &sections, &points)? {
                SectionOrBox::Box(cert) => Ok(json!({
                    "outcome": "box",
                    "base": to_value(cert.base),
                    "epsilon": to_value(cert.epsilon),
                    "generators": to_value(cert.generators),
                    "dimension": cert.dimension,
                })),
                SectionOrBox::Section(w) => Ok(json!({
                    "outcome": "section",
                    "coeffs": to_value(w.coeffs),
                    "attained_by": w.attained_by,
                    "function": to_value(function_out(&w.function)),
                })),
            }
        }
        Command::Oncurve { input } => {
            let req: OncurveReq = parse(&input)?;
            let f = polynomial_from_terms(2, req.polynomial)?;
            let p = PlanePoint::new(parse_rational(&req.point.0)?, parse_rational(&req.point.1)?);
            Ok(to_value(on_curve(&f, &p)?))
        }
        Command::Skeleton { input } => {
            let req: PolyReq = parse(&input)?;
            let f = polynomial_from_terms(2, req.polynomial)?;
            Ok(skeleton_out(&skeleton(&f)?))
        }
        Command::Betti { input } => {
            let req: BettiReq = parse(&input)?;
            match (req.polynomial, req.skeleton) {
                (Some(terms), _) => {
                    let f = polynomial_from_terms(2, terms)?;
                    Ok(to_value(betti1(&skeleton(&f)?)))
                }
                (None, Some(sk)) => {
                    // re-count from a previously emitted skeleton
                    #[derive(Deserialize)]
                    struct SkEdge {
                        ends: (usize, usize),
                    }
                    #[derive(Deserialize)]
                    struct Sk {
                        vertices: Vec<(String, String)>,
                        bounded_edges: Vec<SkEdge>,
                    }
                    let sk: Sk = serde_json::from_value(sk)
                        .map_err(|e| CliError::Usage(format!("invalid skeleton: {e}")))?;
                    let mut rebuilt = maxplus::planecurve::Skeleton::default();
                    for (x, y) in &sk.vertices {
                        rebuilt
                            .vertices
                            .push(PlanePoint::new(parse_rational(x)?, parse_rational(y)?));
                    }
                    for e in &sk.bounded_edges {
                        rebuilt.bounded_edges.push(maxplus::planecurve::SkelEdge {
                            ends: e.ends,
                            direction: (0, 0),
                            multiplicity: 1,
                        });
                    }
                    Ok(to_value(betti1(&rebuilt)))
                }
                (None, None) => Err(CliError::Usage(
                    "betti needs a \"polynomial\" or a \"skeleton\"".into(),
                )),
            }
        }
        Command::Tropicalize { input } => {
            let req: TropicalizeReq = parse(&input)?;
            let terms = req
                .terms
                .iter()
                .map(|t| Ok((t.exp, parse_rational(&t.val)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            let f = tropicalize(&terms)?;
            Ok(to_value(f.to_terms()))
        }
        Command::Fixtures => {
            let results = maxplus::fixtures::run_all();
            let passed = results.iter().filter(|r| r.outcome.is_ok()).count();
            let failed = results.len() - passed;
            let out: Vec<Value> = results
                .iter()
                .map(|r| match &r.outcome {
                    Ok(()) => json!({ "name": r.name, "ok": true }),
                    Err(msg) => json!({ "name": r.name, "ok": false, "detail": msg }),
                })
                .collect();
            if failed > 0 {
                // a failing corpus is a domain error, reported structurally
                return Err(CliError::Domain(Error::InternalVerificationFailed(
                    format!("{failed} fixture(s) failed"),
                )));
            }
            Ok(json!({ "passed": passed, "failed": failed, "results": out }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.schema {
        println!(
            "{}",
            serde_json::to_string_pretty(&schemas()).expect("schemas serialize")
        );
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (try --help or --schema)");
        return ExitCode::from(2);
    };
    match run(command) {
        Ok(result) => {
            println!("{}", json!({ "ok": true, "result": result }));
            ExitCode::SUCCESS
        }
        Err(CliError::Domain(e)) => {
            println!(
                "{}",
                json!({ "ok": false, "error": { "code": e.code(), "message": e.to_string() } })
            );
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            println!(
                "{}",
                json!({ "ok": false, "error": { "code": "InvalidInput", "message": msg } })
            );
            ExitCode::from(2)
        }
    }
}
