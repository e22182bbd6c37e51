use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use kcontact_core::graded::{parse_presentation, CupPresentation};
use kcontact_core::gysin::{total_space_betti, total_space_cohomology};
use kcontact_core::numeric::{parse_real, to_f64};
use kcontact_core::reeb::{
    check_reeb_parameter, closed_orbit_census, parse_moment_data, search_relations,
    subtorus_same_fixed_set, MomentData, ReebError, ReebParameter, DEFAULT_RELATION_TOL,
};
use kcontact_core::sphere_flow::{closure_census, verify_invariance, WeightedFlow};
use kcontact_core::verdict::{
    chern_criterion, pi1_total_space, sphere_verdict, Hypotheses, TriState,
};

#[derive(Parser)]
#[command(name = "kcontact", version, about = "Circle bundle cohomology and Reeb orbit census")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pi1 {
    Trivial,
    Unknown,
    HamiltonianIsolated,
}

#[derive(Subcommand)]
enum Command {
    /// Integral cohomology of the total space.
    TotalSpace {
        #[arg(long)]
        base: PathBuf,
    },
    /// Rational Betti numbers of the total space.
    Betti {
        #[arg(long)]
        base: PathBuf,
    },
    /// Decide whether the total space is a sphere.
    SphereCheck {
        #[arg(long)]
        base: PathBuf,
        #[arg(long, value_enum, default_value = "unknown")]
        pi1: Pi1,
        /// N carries a Hamiltonian circle action with isolated fixed points.
        #[arg(long)]
        hamiltonian_isolated: bool,
        #[arg(long)]
        fixed_points: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        c1: Option<i64>,
        #[arg(long)]
        kahler: bool,
    },
    /// Simple connectivity of the total space.
    Pi1Check {
        /// Read H^2 and primitivity of the Euler class from this presentation.
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "unknown")]
        pi1: Pi1,
        #[arg(long)]
        hamiltonian_isolated: bool,
        /// H^2(N; Z) = Z (ignored with --base).
        #[arg(long)]
        h2_is_z: bool,
        /// The Euler class is primitive (ignored with --base).
        #[arg(long)]
        euler_primitive: bool,
    },
    /// Sphere criterion from the first Chern class.
    ChernCheck {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        c1: Option<i64>,
        #[arg(long)]
        fixed_points: Option<usize>,
        #[arg(long)]
        hamiltonian_isolated: bool,
        #[arg(long)]
        kahler: bool,
    },
    /// Closed Reeb orbits for a Reeb direction xi = (xi_1; xi_2).
    ReebCensus {
        #[arg(long)]
        moment: PathBuf,
        /// Comma-separated xi_1 entries, then ';' and xi_2. Entries may be
        /// decimals, p/q or sqrt(k).
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
        #[arg(long, default_value = DEFAULT_RELATION_TOL)]
        tol: String,
    },
    /// Circle subgroup with the same fixed points as the torus.
    Subtorus {
        #[arg(long)]
        moment: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        bound: u64,
    },
    /// Weighted Reeb flow on the sphere.
    SphereFlow {
        /// Comma-separated positive weights.
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        denom_bound: u64,
        #[arg(long, default_value_t = 1e-9)]
        closure_tol: f64,
        #[arg(long, default_value_t = 100)]
        random_points: usize,
        /// Entry bound for the relation search on the weights.
        #[arg(long, default_value_t = 1000)]
        bound: u64,
        #[arg(long, default_value = "1e-12")]
        relation_tol: String,
    },
    /// Parse and normalize a ring (.ring) or moment (.moment) file.
    Validate { file: PathBuf },
}

enum Failure {
    /// Bad input; exit 2.
    Input(String),
    /// Mathematical rejection with a report; exit 1.
    Rejected {
        command: &'static str,
        parameters: Value,
        result: Value,
    },
}

fn input<E: Display>(context: impl Display) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Input(format!("{context}: {e}"))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(input(path.display()))
}

fn load_ring(path: &Path) -> Result<CupPresentation, Failure> {
    parse_presentation(&read(path)?).map_err(input(path.display()))
}

fn load_moment(path: &Path) -> Result<MomentData, Failure> {
    parse_moment_data(&read(path)?).map_err(input(path.display()))
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn hypotheses(
    pi1: Pi1,
    hamiltonian_isolated: bool,
    fixed_points: Option<usize>,
    c1: Option<i64>,
    kahler: bool,
) -> Hypotheses {
    Hypotheses {
        pi1_base_trivial: match pi1 {
            Pi1::Trivial => TriState::True,
            _ => TriState::Unknown,
        },
        hamiltonian_circle_isolated_fixed_points: hamiltonian_isolated
            || matches!(pi1, Pi1::HamiltonianIsolated),
        fixed_point_count: fixed_points,
        c1_coefficient: c1,
        base_is_kahler: kahler,
        ..Hypotheses::default()
    }
}

/// Runs one command; returns `(command name, parameters, result)`.
fn run(command: &Command) -> Result<(&'static str, Value, Value), Failure> {
    match command {
        Command::TotalSpace { base } => {
            let p = load_ring(base)?;
            let params = json!({"base": path_str(base)});
            let h = total_space_cohomology(&p).map_err(|e| Failure::Rejected {
                command: "total-space",
                parameters: params.clone(),
                result: json!({"error": e.to_string()}),
            })?;
            let mut result = h.to_json();
            result["betti"] = json!(total_space_betti(&p));
            Ok(("total-space", params, result))
        }
        Command::Betti { base } => {
            let p = load_ring(base)?;
            let b = total_space_betti(&p);
            let euler: i64 = b
                .iter()
                .enumerate()
                .map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) })
                .sum();
            Ok((
                "betti",
                json!({"base": path_str(base)}),
                json!({"betti": b, "euler_characteristic": euler}),
            ))
        }
        Command::SphereCheck {
            base,
            pi1,
            hamiltonian_isolated,
            fixed_points,
            c1,
            kahler,
        } => {
            let p = load_ring(base)?;
            let h = hypotheses(*pi1, *hamiltonian_isolated, *fixed_points, *c1, *kahler)
                .with_presentation(&p);
            let v = sphere_verdict(&p, &h).map_err(input("sphere-check"))?;
            Ok((
                "sphere-check",
                json!({"base": path_str(base), "hypotheses": h}),
                serde_json::to_value(v).expect("verdict serializes"),
            ))
        }
        Command::Pi1Check {
            base,
            pi1,
            hamiltonian_isolated,
            h2_is_z,
            euler_primitive,
        } => {
            let mut h = hypotheses(*pi1, *hamiltonian_isolated, None, None, false);
            h.h2_base_is_z = *h2_is_z;
            h.euler_primitive = *euler_primitive;
            if let Some(base) = base {
                h = h.with_presentation(&load_ring(base)?);
            }
            let answer = pi1_total_space(&h);
            Ok((
                "pi1-check",
                json!({"base": base.as_deref().map(path_str), "hypotheses": h}),
                json!({"pi1_total_space_trivial": answer}),
            ))
        }
        Command::ChernCheck {
            n,
            c1,
            fixed_points,
            hamiltonian_isolated,
            kahler,
        } => {
            let h = hypotheses(Pi1::Unknown, *hamiltonian_isolated, *fixed_points, *c1, *kahler);
            let v = chern_criterion(*n, &h).map_err(input("chern-check"))?;
            Ok((
                "chern-check",
                json!({"n": n, "hypotheses": h}),
                serde_json::to_value(v).expect("verdict serializes"),
            ))
        }
        Command::ReebCensus {
            moment,
            xi,
            bound,
            tol,
        } => {
            let d = load_moment(moment)?;
            let xi_value = ReebParameter::parse(xi).map_err(input("--xi"))?;
            let tol_value = parse_real(tol).map_err(input("--tol"))?;
            let params = json!({
                "moment": path_str(moment),
                "xi": xi,
                "bound": bound,
                "tol": to_f64(&tol_value),
            });
            let reject = |e: ReebError, check: Value| Failure::Rejected {
                command: "reeb-census",
                parameters: params.clone(),
                result: json!({"accepted": false, "rejection": e.to_string(), "parameter_check": check}),
            };
            let check = match check_reeb_parameter(&d, &xi_value, *bound, &tol_value) {
                Ok(c) => c,
                Err(e @ (ReebError::XiLength { .. } | ReebError::XiZero | ReebError::Tolerance)) => {
                    return Err(Failure::Input(format!("--xi: {e}")))
                }
                Err(e) => return Err(reject(e, Value::Null)),
            };
            match closed_orbit_census(&d, &xi_value, *bound, &tol_value) {
                Ok(census) => {
                    let mut result = serde_json::Map::new();
                    result.insert("accepted".into(), json!(true));
                    if let Value::Object(fields) = census.to_json() {
                        result.extend(fields);
                    }
                    Ok(("reeb-census", params, Value::Object(result)))
                }
                Err(e) => Err(reject(e, check.to_json())),
            }
        }
        Command::Subtorus { moment, k, bound } => {
            let d = load_moment(moment)?;
            let params = json!({"moment": path_str(moment), "k": k, "bound": bound});
            match subtorus_same_fixed_set(&d, *k, *bound) {
                Ok(vs) => Ok(("subtorus", params, json!({"vectors": vs}))),
                Err(e @ ReebError::SearchExhausted { .. }) => Err(Failure::Rejected {
                    command: "subtorus",
                    parameters: params,
                    result: json!({"error": e.to_string()}),
                }),
                Err(e) => Err(Failure::Input(format!("--k: {e}"))),
            }
        }
        Command::SphereFlow {
            lambda,
            samples,
            seed,
            tol,
            denom_bound,
            closure_tol,
            random_points,
            bound,
            relation_tol,
        } => {
            let exact = lambda
                .split(',')
                .map(parse_real)
                .collect::<Result<Vec<_>, _>>()
                .map_err(input("--lambda"))?;
            let values: Vec<f64> = exact.iter().map(to_f64).collect();
            let w = WeightedFlow::new(values.clone()).map_err(input("--lambda"))?;
            let rel_tol = parse_real(relation_tol).map_err(input("--relation-tol"))?;
            if rel_tol <= BigRational::zero() {
                return Err(Failure::Input("--relation-tol: must be positive".into()));
            }
            // relations of the weights as the flow sees them, i.e. the doubles
            let as_doubles: Vec<_> = values
                .iter()
                .map(|&x| BigRational::from_float(x).expect("finite"))
                .collect();
            let relations = search_relations(&as_doubles, *bound, &rel_tol);
            let census = closure_census(&w, *random_points, *seed, *denom_bound, *closure_tol);
            let report = verify_invariance(&w, *samples, *seed, *tol);
            Ok((
                "sphere-flow",
                json!({
                    "lambda": values,
                    "samples": samples,
                    "seed": seed,
                    "tol": tol,
                    "denom_bound": denom_bound,
                    "closure_tol": closure_tol,
                    "random_points": random_points,
                    "bound": bound,
                    "relation_tol": to_f64(&rel_tol),
                }),
                json!({
                    "weight_relations": relations
                        .relations
                        .iter()
                        .map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "weight_relations_certified": relations.certified,
                    "closure": census,
                    "invariance": report,
                }),
            ))
        }
        Command::Validate { file } => {
            let src = read(file)?;
            let ext = file.extension().and_then(|e| e.to_str()).unwrap_or("");
            let result = match ext {
                "ring" => json!({
                    "kind": "ring",
                    "normalized": parse_presentation(&src).map_err(input(file.display()))?.to_json(),
                }),
                "moment" => json!({
                    "kind": "moment",
                    "normalized": parse_moment_data(&src).map_err(input(file.display()))?.to_json(),
                }),
                _ => match (parse_presentation(&src), parse_moment_data(&src)) {
                    (Ok(p), _) => json!({"kind": "ring", "normalized": p.to_json()}),
                    (_, Ok(d)) => json!({"kind": "moment", "normalized": d.to_json()}),
                    (Err(e), Err(_)) => return Err(Failure::Input(format!("{}: {e}", file.display()))),
                },
            };
            Ok(("validate", json!({"file": path_str(file)}), result))
        }
    }
}

fn emit(report: &Value, output: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    match output {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.as_deref();
    let (command, parameters, result, code) = match run(&cli.command) {
        Ok((command, parameters, result)) => (command, parameters, result, 0),
        Err(Failure::Rejected {
            command,
            parameters,
            result,
        }) => (command, parameters, result, 1),
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    let report = json!({
        "tool": "kcontact",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "parameters": parameters,
        "result": result,
    });
    if let Err(message) = emit(&report, output) {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
