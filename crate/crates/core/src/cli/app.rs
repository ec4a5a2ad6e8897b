use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::render::{render_svg, RenderOptions};
use crate::error::{Error, Result};
use crate::fixtures::obstruction_vectors;
use crate::links::{enumerate_links, validate_link, Fibered, LinkMode, LinkSequence};
use crate::pgs::{fiber_structures, polytope_reduction, PrimGenSet};
use crate::polytope::{
    classify, mavlyutov_dual, polar_dual, primitive_points, Polytope, PolytopeClass,
};
use crate::web::obstruction::{
    detour_sequence, fano_route_certificate, fano_route_sequence, relabel, DETOUR_SARKISOV_LABELS,
    FANO_ROUTE_SARKISOV_LABELS,
};
use crate::web::{
    bfs_connect, connect, enumerate_fano, fano_purity_report, mmp_reduce, verify_certificate, ConnectCertificate,
};
use crate::zlattice::{LatticeVector, UnimodularMap};

/// Exact combinatorics of lattice polytopes and their elementary links.
///
/// Inputs are JSON, given inline, as a file path, or as `-` for stdin.
#[derive(Parser, Debug)]
#[command(name = "polyweb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Class constraint for reductions and links.
    #[arg(long, global = true, default_value = "canonical")]
    class: PolytopeClass,
    /// Coordinate bound for searches and enumeration.
    #[arg(long = "box", global = true, default_value_t = 4)]
    bound: i64,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class flags of a polytope.
    Classify {
        input: String,
        /// Also check the flags on this many random unimodular images.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Polar and Mavlyutov duals.
    Dual { input: String },
    /// Lattice, interior and primitive points.
    Points { input: String },
    /// Vertex removals and why each one is or is not a reduction.
    Reduce { input: String },
    /// Fiber structures on the primitive points.
    Fibers {
        input: String,
        #[arg(long)]
        mori: bool,
    },
    /// Elementary links out of a Mori fiber structure.
    Links {
        /// A polytope or a `{"set": ..., "fiber": ...}` object.
        input: String,
        /// Fiber points, if the input is a bare polytope.
        #[arg(long)]
        fiber: Option<String>,
        #[arg(long, default_value = "polytope")]
        mode: String,
    },
    /// Reduce to a Mori fiber polygon.
    Mmp { input: String },
    /// Connection certificate through the standard forms.
    Connect { from: String, to: String },
    /// Shortest connection by breadth-first search inside the box.
    Bfs {
        from: String,
        to: String,
        #[arg(long, default_value_t = 20_000)]
        max_states: usize,
    },
    /// Re-check a certificate.
    Verify { input: String },
    /// Fano polygons in the box up to unimodular equivalence.
    Enumerate {
        /// Keep only polygons with a Mori fiber structure.
        #[arg(long)]
        mfp: bool,
    },
    /// SVG of a certificate, link sequence or polytope.
    Render {
        input: String,
        #[arg(long, default_value_t = 24)]
        cell: u32,
    },
    /// The two 3D link sequences between the same pair of Mori fiber polytopes.
    Example37,
}

enum Output {
    Json(Value),
    Text(String),
}

struct Failed {
    exit: i32,
    body: Value,
}

impl From<Error> for Failed {
    fn from(e: Error) -> Failed {
        let exit = match e {
            Error::OpenProblem(_) | Error::MissingBaseSequence(_) => 2,
            _ => 1,
        };
        Failed { exit, body: json!({ "error": e.code(), "message": e.to_string() }) }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("domain types serialize")
}

fn read_value(arg: &str) -> Result<Value> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        s
    } else if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::InvalidInput(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(e.to_string()))
}

fn parse<T: serde::de::DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::InvalidInput(e.to_string()))
}

fn read_polytope(arg: &str) -> Result<Polytope> {
    parse(read_value(arg)?)
}

fn read_certificate(v: Value) -> Result<ConnectCertificate> {
    if v.get("chain").is_some() {
        return parse(v);
    }
    let seq: LinkSequence = parse(v)?;
    crate::web::certificate_from_links(&seq.steps, seq.class_constraint)
}

fn first_mori_fiber(a: &PrimGenSet) -> Result<Vec<LatticeVector>> {
    crate::pgs::mori_fiber_structures(a)
        .into_iter()
        .map(|f| f.fiber)
        .min()
        .ok_or_else(|| Error::NotMori("no Mori fiber structure".into()))
}

fn execute(cli: &Cli) -> std::result::Result<Output, Failed> {
    let class = cli.class;
    let out = match &cli.command {
        Command::Classify { input, samples } => {
            let p = read_polytope(input)?;
            let flags = classify(&p);
            let mut body = json!({ "polytope": p, "flags": flags });
            if *samples > 0 {
                eprintln!("seed {}", cli.seed);
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                let invariant = (0..*samples).all(|_| {
                    let g = UnimodularMap::random(p.dim(), &mut rng, 10);
                    classify(&p.transform(&g)) == flags
                });
                body["orbit_check"] = json!({ "seed": cli.seed, "samples": samples, "invariant": invariant });
            }
            Output::Json(body)
        }
        Command::Dual { input } => {
            let p = read_polytope(input)?;
            Output::Json(json!({ "polar": polar_dual(&p)?, "mavlyutov": mavlyutov_dual(&p)? }))
        }
        Command::Points { input } => {
            let p = read_polytope(input)?;
            let prim = primitive_points(&p)?;
            Output::Json(json!({
                "lattice": p.lattice_points(),
                "interior": p.interior_lattice_points(),
                "primitive": prim.points(),
            }))
        }
        Command::Reduce { input } => {
            let p = read_polytope(input)?;
            let rows: Vec<Value> = p
                .vertices()
                .iter()
                .map(|v| match polytope_reduction(&p, v) {
                    Ok(q) => json!({ "vertex": v, "result": q, "in_class": q.satisfies(class) }),
                    Err(why) => json!({ "vertex": v, "rejected": why }),
                })
                .collect();
            Output::Json(Value::Array(rows))
        }
        Command::Fibers { input, mori } => {
            let a = primitive_points(&read_polytope(input)?)?;
            let fs: Vec<_> = fiber_structures(&a).into_iter().filter(|f| !*mori || f.mori).collect();
            Output::Json(to_value(&fs))
        }
        Command::Links { input, fiber, mode } => {
            let v = read_value(input)?;
            let from: Fibered = if v.get("set").is_some() {
                parse(v)?
            } else {
                let a = primitive_points(&parse::<Polytope>(v)?)?;
                let f = match fiber {
                    Some(f) => parse(read_value(f)?)?,
                    None => first_mori_fiber(&a)?,
                };
                Fibered::new(a, f)
            };
            if !from.is_mori() {
                return Err(Error::NotMori("input fiber is not a Mori fiber structure".into()).into());
            }
            let mode = match mode.as_str() {
                "set" => LinkMode::Set,
                "polytope" => LinkMode::Polytope,
                other => return Err(Error::InvalidInput(format!("unknown mode {other:?}")).into()),
            };
            Output::Json(to_value(&enumerate_links(&from, class, cli.bound, mode)))
        }
        Command::Mmp { input } => Output::Json(to_value(&mmp_reduce(&read_polytope(input)?, class)?)),
        Command::Connect { from, to } => {
            Output::Json(to_value(&connect(&read_polytope(from)?, &read_polytope(to)?, class)?))
        }
        Command::Bfs { from, to, max_states } => {
            match bfs_connect(&read_polytope(from)?, &read_polytope(to)?, class, cli.bound, *max_states)? {
                Some(c) => Output::Json(to_value(&c)),
                None => {
                    return Err(Failed {
                        exit: 2,
                        body: json!({ "error": "not_found", "message": format!("no connection within box {}", cli.bound) }),
                    })
                }
            }
        }
        Command::Verify { input } => {
            let report = verify_certificate(&read_certificate(read_value(input)?)?);
            if !report.ok {
                return Err(Failed { exit: 3, body: to_value(&report) });
            }
            Output::Json(to_value(&report))
        }
        Command::Enumerate { mfp } => Output::Json(to_value(&enumerate_fano(cli.bound, class, *mfp))),
        Command::Render { input, cell } => {
            let v = read_value(input)?;
            let opts = RenderOptions { cell_size: *cell };
            let svg = if v.get("chain").is_some() || v.get("steps").is_some() {
                render_svg(&read_certificate(v)?, opts)?
            } else {
                super::render::render_polytope_svg(&parse(v)?, opts)?
            };
            Output::Text(svg)
        }
        Command::Example37 => Output::Json(example37()),
    };
    Ok(out)
}

fn sequence_report(seq: &LinkSequence) -> Value {
    let steps: Vec<Value> = seq
        .steps
        .iter()
        .map(|l| {
            let r = validate_link(l);
            json!({ "kind": l.kind, "valid": r.valid, "failures": r.failures() })
        })
        .collect();
    json!({
        "steps": steps,
        "joints_intact": seq.broken_joint().is_none(),
        "impure_sets": fano_purity_report(seq),
    })
}

fn example37() -> Value {
    let v = obstruction_vectors();
    let hull = Polytope::hull(&crate::fixtures::obstruction_set(&[1, 2, 3, 5, 7])).expect("full-dimensional");
    let relabelled = |seq: LinkSequence, labels| {
        let seq = relabel(&seq, labels);
        seq.steps.iter().all(|l| validate_link(l).valid)
    };
    json!({
        "vectors": v,
        "detour": sequence_report(&detour_sequence()),
        "fano_route": sequence_report(&fano_route_sequence()),
        "sarkisov_labels_validate": {
            "detour": relabelled(detour_sequence(), &DETOUR_SARKISOV_LABELS),
            "fano_route": relabelled(fano_route_sequence(), &FANO_ROUTE_SARKISOV_LABELS),
        },
        "membership": {
            "v4_in_hull_A12357": hull.contains(&v[3]),
            "v6_in_hull_A12357": hull.contains(&v[5]),
        },
        "fano_route_certificate": verify_certificate(&fano_route_certificate()),
    })
}

fn emit(cli_out: Option<&PathBuf>, text: &str) -> i32 {
    match cli_out {
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => 0,
            Err(e) => {
                println!("{}", json!({ "error": "io", "message": format!("{}: {e}", path.display()) }));
                1
            }
        },
        None => {
            print!("{text}");
            0
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

/// Runs the command line and returns the process exit code: 0 on success,
/// 1 for malformed input, 2 when nothing is found, 3 when verification fails.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            println!("{}", json!({ "error": "usage", "message": e.to_string() }));
            return 1;
        }
    };
    match execute(&cli) {
        Ok(Output::Json(v)) => emit(cli.out.as_ref(), &pretty(&v)),
        Ok(Output::Text(s)) => emit(cli.out.as_ref(), &s),
        Err(f) => {
            let code = emit(cli.out.as_ref(), &pretty(&f.body));
            if code != 0 {
                return code;
            }
            f.exit
        }
    }
}
