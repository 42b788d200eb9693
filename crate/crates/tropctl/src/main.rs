//! `tropctl`: JSON front end for the tropcore operations.

mod input;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use tropcore::gaussfield::{
    count_gauss_extensions, extension_branches, extension_count_profile, gauss_eval, gauss_residue, newton_polygon,
    ValuedPolynomial,
};
use tropcore::linarith::{dimension, dimension_at, eliminate_many, is_connected};
use tropcore::mpolytope::{star, CPolytope};
use tropcore::skeleton::{
    base_change_stabilization_demo, preimage_skeleton_monomial, search_separators, skeleton_preimage_curve, MonomialMap,
};
use tropcore::tropicalizer::{corner_locus, local_germ};
use tropcore::ovalgroup::set_initial_precision;
use tropcore::{Error, GroupElement, ValueGroupDesc};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "tropctl", version, about = "Exact tropical geometry over valued fields")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write an SVG picture of the result (one or two coordinates only).
    #[arg(long, global = true)]
    render: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PolyArgs {
    /// Polynomial, e.g. `Y^2 - X*(X-1)`, or `@file`.
    #[arg(long)]
    poly: String,
    /// `Q-trivial`, `Q-padic:5`, `Q-series:1/2` or a JSON block.
    #[arg(long, default_value = "Q-trivial")]
    field: String,
}

#[derive(Args)]
struct SetArgs {
    /// Set in text syntax (`t1 = t2 & t1 >= 1 | ...`), JSON, or `@file`.
    #[arg(long)]
    set: String,
    /// Number of coordinates (inferred from the text when omitted).
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Gauss valuation |P|_r.
    Gauss {
        #[command(flatten)]
        poly: PolyArgs,
        /// Radii, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        r: String,
    },
    /// Graded residue of P at the Gauss point.
    Residue {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        r: String,
    },
    /// Corner locus of P.
    Trop {
        #[command(flatten)]
        poly: PolyArgs,
    },
    /// Local star of a set, or of the corner locus of a polynomial, at a point.
    Star {
        #[arg(long)]
        poly: Option<String>,
        #[arg(long, default_value = "Q-trivial")]
        field: String,
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        at: String,
    },
    /// Eliminate coordinates (1-based, comma separated).
    Qe {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        eliminate: String,
    },
    /// Topological closure.
    Closure {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Dimension, or local dimension with `--at`.
    Dim {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        at: Option<String>,
    },
    /// Definable connectedness.
    Connected {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Extensions of the Gauss valuation at r to K(X)[Y]/(P).
    Extensions {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        r: String,
    },
    /// Number of extensions as a function of r over a range `s:t`.
    Profile {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        range: String,
    },
    /// Skeleton preimage: of a curve over `--range`, or of a box under `--matrix`.
    SkeletonPreimage {
        #[arg(long)]
        poly: Option<String>,
        #[arg(long, default_value = "Q-trivial")]
        field: String,
        #[arg(long)]
        range: Option<String>,
        /// Separating functions separated by `;` (searched for when omitted).
        #[arg(long)]
        separators: Option<String>,
        /// Exponent matrix of a monomial map, rows separated by `;`.
        #[arg(long)]
        matrix: Option<String>,
        /// Half-width R of the box [1/R, R]^n for `--matrix`.
        #[arg(long, default_value = "2")]
        radius: String,
    },
    /// Extension counts before and after adjoining square roots of constants.
    Stabilize {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        range: String,
    },
    /// Run the acceptance suite.
    Selftest,
    /// Draw a JSON artifact as SVG.
    Render {
        /// Artifact path, or inline JSON.
        #[arg(long)]
        input: String,
    },
}

fn with_schema(kind: &str, body: Value) -> Value {
    let mut out = json!({ "schema": format!("tropctl.{kind}/v{SCHEMA_VERSION}") });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    out
}

fn value_json(v: &Option<GroupElement>) -> Value {
    v.as_ref().map_or(Value::Null, GroupElement::to_json)
}

fn load_poly(a: &PolyArgs) -> tropcore::Result<ValuedPolynomial> {
    input::poly(&a.poly, &input::field(&a.field)?)
}

enum Failure {
    Core(Error),
    Io(String),
    Selftest,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    let out = match &cli.command {
        Command::Gauss { poly, r } => {
            let p = load_poly(poly)?;
            let v = gauss_eval(&p, &input::point(r)?)?;
            with_schema("gauss", json!({ "value": value_json(&v) }))
        }
        Command::Residue { poly, r } => {
            let p = load_poly(poly)?;
            let r = input::point(r)?;
            let res = gauss_residue(&p, &r)?;
            let mut body = json!({
                "degree": res.degree.to_json(),
                "residue": res.representative.to_string(),
                "vars": p.vars,
            });
            if p.n() >= 2 {
                let np = newton_polygon(&p, &r[..p.n() - 1]);
                if let Ok(np) = np {
                    body["newton_polygon"] = np.to_json();
                }
            }
            with_schema("residue", body)
        }
        Command::Trop { poly } => with_schema("trop", corner_locus(&load_poly(poly)?).to_json()),
        Command::Star { poly, field, set, n, at } => {
            let xi = input::point(at)?;
            match (poly, set) {
                (Some(p), None) => {
                    let p = input::poly(p, &input::field(field)?)?;
                    with_schema("star", local_germ(&p, &xi)?.to_json())
                }
                (None, Some(s)) => {
                    let d = input::set(s, *n)?;
                    with_schema("star", json!({ "set": star(&d, &xi)?.to_json() }))
                }
                _ => return Err(Error::InvalidInput("give exactly one of --poly and --set".into()).into()),
            }
        }
        Command::Qe { set, eliminate } => {
            let d = input::set(&set.set, set.n)?;
            let coords = input::coordinates(eliminate, d.n)?;
            let e = eliminate_many(&d, &coords)?;
            with_schema("qe", json!({ "eliminated": coords.iter().map(|i| i + 1).collect::<Vec<_>>(), "set": e.to_json() }))
        }
        Command::Closure { set } => {
            let d = input::set(&set.set, set.n)?;
            with_schema("closure", json!({ "set": d.closure().to_json() }))
        }
        Command::Dim { set, at } => {
            let d = input::set(&set.set, set.n)?;
            match at {
                Some(x) => {
                    let x = input::point(x)?;
                    let k = dimension_at(&d, &x)?;
                    let at: Vec<Value> = x.iter().map(GroupElement::to_json).collect();
                    with_schema("dim", json!({ "dimension": k, "at": at }))
                }
                None => with_schema("dim", json!({ "dimension": dimension(&d) })),
            }
        }
        Command::Connected { set } => {
            let d = input::set(&set.set, set.n)?;
            with_schema("connected", json!({ "connected": is_connected(&d) }))
        }
        Command::Extensions { poly, r } => {
            let p = load_poly(poly)?;
            let r = input::point(r)?;
            let branches = extension_branches(&p, &r)?;
            let list: Vec<Value> = branches
                .iter()
                .map(|b| {
                    json!({
                        "root_abs": value_json(&b.rho),
                        "ramification": b.ramification,
                        "residue_degree": b.residue_degree,
                    })
                })
                .collect();
            with_schema("extensions", json!({ "count": count_gauss_extensions(&p, &r)?, "extensions": list }))
        }
        Command::Profile { poly, range } => {
            let p = load_poly(poly)?;
            let (s, t) = input::range(range)?;
            with_schema("profile", extension_count_profile(&p, &s, &t)?.to_json())
        }
        Command::SkeletonPreimage { poly, field, range, separators, matrix, radius } => {
            let field = input::field(field)?;
            match (poly, matrix) {
                (Some(p), None) => {
                    let p = input::poly(p, &field)?;
                    let range = range.as_deref().ok_or_else(|| Error::InvalidInput("--range is required with --poly".into()))?;
                    let (s, t) = input::range(range)?;
                    let seps = match separators {
                        Some(list) => list
                            .split(';')
                            .map(|e| ValuedPolynomial::parse_with_vars(e, &p.field, &p.vars))
                            .collect::<tropcore::Result<Vec<_>>>()?,
                        None => search_separators(&p, &s, &t)?
                            .ok_or_else(|| Error::NotSeparating("no separating set found among the candidates".into()))?,
                    };
                    let c = skeleton_preimage_curve(&p, &seps, &s, &t)?;
                    with_schema("skeleton-preimage", c.to_json())
                }
                (None, Some(m)) => {
                    let m = input::matrix(m)?;
                    let phi = MonomialMap::pure(field, m)?;
                    let r = GroupElement::parse(radius)?;
                    let bx = CPolytope::cube(phi.source_dim(), &r, &ValueGroupDesc::rationals())?;
                    with_schema("skeleton-preimage", preimage_skeleton_monomial(&phi, &bx)?.to_json())
                }
                _ => return Err(Error::InvalidInput("give exactly one of --poly and --matrix".into()).into()),
            }
        }
        Command::Stabilize { poly, range } => {
            let p = load_poly(poly)?;
            let (s, t) = input::range(range)?;
            with_schema("stabilize", base_change_stabilization_demo(&p, &s, &t)?.to_json())
        }
        Command::Selftest => {
            let outcomes = tropcore_conformance::run_all();
            for o in &outcomes {
                eprintln!("{o}");
            }
            let rows: Vec<Value> = outcomes
                .iter()
                .map(|o| json!({ "id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail }))
                .collect();
            let passed = outcomes.iter().all(|o| o.passed);
            let report = with_schema("selftest", json!({ "passed": passed, "criteria": rows }));
            emit(cli, &report)?;
            return if passed { Ok(Value::Null) } else { Err(Failure::Selftest) };
        }
        Command::Render { input: src } => {
            let text = if src.trim_start().starts_with('{') {
                src.clone()
            } else {
                std::fs::read_to_string(src).map_err(|e| Failure::Io(format!("{src}: {e}")))?
            };
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let svg = render::render(&v)?;
            let target = cli.out.as_ref().or(cli.render.as_ref());
            match target {
                Some(path) => std::fs::write(path, svg).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
                None => print!("{svg}"),
            }
            return Ok(Value::Null);
        }
    };
    emit(cli, &out)?;
    Ok(out)
}

fn emit(cli: &Cli, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if let Some(path) = &cli.render {
        let svg = render::render(v)?;
        std::fs::write(path, svg).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn precision_from_env() -> Result<(), String> {
    match std::env::var("TROPCTL_PRECISION") {
        Ok(s) => {
            let bits: u32 = s.trim().parse().map_err(|_| format!("TROPCTL_PRECISION must be a bit count, got `{s}`"))?;
            set_initial_precision(bits);
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = precision_from_env() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(_) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_parse() { 2 } else { 3 })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Selftest) => ExitCode::from(1),
    }
}
