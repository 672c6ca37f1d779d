//! Command-line surface: tower and factorization dumps, permutation
//! construction and verification, inversion, value tables, agreement
//! sweeps, and iterated lifts. Artifacts are JSON on stdout or --out;
//! domain errors exit 1 with error JSON on stderr; usage errors exit 2.

use std::io::{Read, Write};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use linpp::cyclo_factor;
use linpp::error::{Error, Result};
use linpp::field_tower::{Elem, FieldTower, Level};
use linpp::oracle::{self, SweepConfig, SweepMode};
use linpp::polyring::Poly;
use linpp::pp_engine::{
    check_pp_general, construct_cpp_from_base, construct_from_base_pp,
    construct_variant_from_base_pp, invert_trace_pp, invert_variant_pp, iterate_construction,
    BaseConstructInput,
};
use linpp::serial::{self, TableFormat};

#[derive(Parser)]
#[command(
    name = "linpp",
    about = "Permutation polynomials of F_{q^n} from linearized decompositions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TowerArgs {
    /// Characteristic (a prime).
    #[arg(long)]
    p: u64,
    /// Base-field degree: q = p^k.
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Extension degree over F_q.
    #[arg(long)]
    n: u32,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the deterministic tower description for (p, k, n).
    Tower {
        #[command(flatten)]
        tower: TowerArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Factor x^n - 1 over F_q.
    Factor {
        #[command(flatten)]
        tower: TowerArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Lift a base permutation b of F_q to a permutation of F_{q^n}.
    Construct {
        #[command(flatten)]
        tower: TowerArgs,
        /// Base permutation over F_q, compact coefficients ("0,1" is x).
        #[arg(long)]
        b: String,
        /// h over F_q, coprime to (x^n-1)/(x-1).
        #[arg(long)]
        h: String,
        /// k over F_q, unit-valued on F_q; defaults to 1.
        #[arg(long)]
        kpoly: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Lift a complete permutation of F_q to one of F_{q^n} (k = 1).
    ConstructCpp {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        b: String,
        #[arg(long)]
        h: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Lift through the twisted divisor (x^n-1)/(x-a).
    ConstructVariant {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        b: String,
        /// The twist a ∈ F_q with a^n = 1, compact form ("2" or "0/1").
        #[arg(long)]
        a: String,
        #[arg(long)]
        h: String,
        /// k over F_q or F_{q^n} (level detected from the coefficient shape).
        #[arg(long)]
        kpoly: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check a spec artifact: criterion plus brute-force oracle.
    Verify {
        /// Path to a pp_spec artifact, or - for stdin.
        #[arg(long)]
        spec: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Produce the inverse permutation of a spec artifact.
    Invert {
        #[arg(long)]
        spec: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Emit the full value table of a spec or inverse artifact.
    Table {
        #[arg(long)]
        spec: String,
        /// json, csv, or bin (little-endian u64).
        #[arg(long, default_value = "json")]
        format: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Criterion-vs-oracle agreement sweep over seeded random specs.
    Sweep {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// general, trace, cpp, or variant.
        #[arg(long, default_value = "general")]
        mode: String,
        /// Twist element for variant mode.
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        deg_f: Option<usize>,
        #[arg(long)]
        deg_h: Option<usize>,
        #[arg(long)]
        deg_k: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Iterate the lift: level i permutes F_{q^(n^i)}.
    Iterate {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        b: String,
        #[arg(long)]
        levels: u32,
        /// One h per level, each over that level's base field.
        #[arg(long = "h", action = clap::ArgAction::Append)]
        hs: Vec<String>,
        /// One k per level; defaults to 1 everywhere.
        #[arg(long = "kpoly", action = clap::ArgAction::Append)]
        kpolys: Vec<String>,
        /// Base seed; level i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn enum_bound() -> u64 {
    std::env::var("LINPP_ENUM_BOUND")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(linpp::DEFAULT_ENUM_BOUND)
}

fn build_tower(args: &TowerArgs) -> Result<Arc<FieldTower>> {
    FieldTower::build_with_bound(args.p, args.k, args.n, enum_bound())
}

fn write_artifact(out: &OutArgs, bytes: &[u8]) -> Result<()> {
    match &out.out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Error::InvalidInput(format!("cannot write stdout: {e}"))),
    }
}

fn write_json(out: &OutArgs, v: &serde_json::Value) -> Result<()> {
    write_artifact(out, serial::to_pretty_string(v).as_bytes())
}

fn read_artifact(path: &str) -> Result<serde_json::Value> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::InvalidInput(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

fn parse_k_poly(tower: &FieldTower, kpoly: &Option<String>, allow_fqn: bool) -> Result<Poly> {
    match kpoly {
        None => Ok(Poly::one(tower, Level::Fq)),
        Some(s) => {
            let level = if allow_fqn {
                serial::detect_compact_level(tower, s)?
            } else {
                Level::Fq
            };
            serial::poly_from_compact(tower, level, s)
        }
    }
}

/// Extracts the twist a from a divisor of the shape (xⁿ−1)/(x−a);
/// errors out for any other divisor.
fn twist_of_divisor(tower: &FieldTower, g: &Poly) -> Result<Elem> {
    let n = tower.n();
    let a = if n == 1 {
        tower.one(Level::Fq)
    } else {
        if g.degree() != Some(n as usize - 1) {
            return Err(Error::UnsupportedDivisor);
        }
        g.coeff(tower, n as usize - 2)
    };
    if cyclo_factor::variant_divisor(tower, &a).map_err(|_| Error::UnsupportedDivisor)? != *g {
        return Err(Error::UnsupportedDivisor);
    }
    Ok(a)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Tower { tower, out } => {
            let tw = build_tower(&tower)?;
            write_json(&out, &serial::tower_to_json(&tw))?;
            Ok(0)
        }
        Command::Factor { tower, out } => {
            let tw = build_tower(&tower)?;
            let fs = cyclo_factor::factor_xn_minus_1(&tw)?;
            write_json(&out, &serial::factor_set_to_json(&fs))?;
            Ok(0)
        }
        Command::Construct {
            tower,
            b,
            h,
            kpoly,
            seed,
            out,
        } => {
            let tw = build_tower(&tower)?;
            let input = BaseConstructInput {
                b: serial::poly_from_compact(&tw, Level::Fq, &b)?,
                h: serial::poly_from_compact(&tw, Level::Fq, &h)?,
                k: parse_k_poly(&tw, &kpoly, false)?,
                sampler_seed: seed,
            };
            let (_, spec) = construct_from_base_pp(&tw, &input)?;
            write_json(&out, &serial::pp_spec_to_json(&spec))?;
            Ok(0)
        }
        Command::ConstructCpp {
            tower,
            b,
            h,
            seed,
            out,
        } => {
            let tw = build_tower(&tower)?;
            let b = serial::poly_from_compact(&tw, Level::Fq, &b)?;
            let h = serial::poly_from_compact(&tw, Level::Fq, &h)?;
            let (_, spec) = construct_cpp_from_base(&tw, &b, &h, seed)?;
            write_json(&out, &serial::pp_spec_to_json(&spec))?;
            Ok(0)
        }
        Command::ConstructVariant {
            tower,
            b,
            a,
            h,
            kpoly,
            seed,
            out,
        } => {
            let tw = build_tower(&tower)?;
            let b = serial::poly_from_compact(&tw, Level::Fq, &b)?;
            let a = serial::elem_from_compact(&tw, Level::Fq, &a)?;
            let h = serial::poly_from_compact(&tw, Level::Fq, &h)?;
            let k = parse_k_poly(&tw, &kpoly, true)?;
            let (_, spec) = construct_variant_from_base_pp(&tw, &b, &a, &h, &k, seed)?;
            write_json(&out, &serial::pp_spec_to_json(&spec))?;
            Ok(0)
        }
        Command::Verify { spec, out } => {
            let value = read_artifact(&spec)?;
            let spec = serial::pp_spec_from_json(&value, enum_bound())?;
            let criterion = check_pp_general(&spec)?.is_pp;
            let oracle_verdict = oracle::is_permutation_spec(&spec)?;
            let verdict = serde_json::json!({
                "kind": "verdict",
                "criterion": criterion,
                "oracle": oracle_verdict,
                "is_pp": oracle_verdict,
            });
            write_json(&out, &verdict)?;
            if criterion != oracle_verdict {
                return Err(Error::InvalidInput(
                    "criterion and oracle disagree; this is a bug worth reporting".into(),
                ));
            }
            if !oracle_verdict {
                return Err(Error::NotAPermutation);
            }
            Ok(0)
        }
        Command::Invert { spec, out } => {
            let value = read_artifact(&spec)?;
            let spec = serial::pp_spec_from_json(&value, enum_bound())?;
            let tw = spec.tower();
            let a = twist_of_divisor(tw, spec.g())?;
            let inverse = if a == tw.one(Level::Fq) {
                invert_trace_pp(tw, spec.f(), spec.h(), spec.k())?
            } else {
                invert_variant_pp(tw, spec.f(), &a, spec.h(), spec.k())?
            };
            write_json(&out, &serial::inverse_spec_to_json(&inverse))?;
            Ok(0)
        }
        Command::Table { spec, format, out } => {
            let format = TableFormat::from_str(&format)?;
            let value = read_artifact(&spec)?;
            let table = match serial::artifact_kind(&value) {
                Some("pp_spec") => {
                    let spec = serial::pp_spec_from_json(&value, enum_bound())?;
                    let tw = Arc::clone(spec.tower());
                    oracle::value_table(&tw, Level::Fqn, |c| spec.evaluate(c))?
                }
                Some("inverse_spec") => {
                    let inv = serial::inverse_spec_from_json(&value, enum_bound())?;
                    let tw = Arc::clone(inv.tower());
                    oracle::value_table(&tw, Level::Fqn, |c| inv.evaluate(c))?
                }
                other => {
                    return Err(Error::InvalidInput(format!(
                        "table needs a pp_spec or inverse_spec artifact, found {other:?}"
                    )))
                }
            };
            write_artifact(&out, &serial::render_table(&table, format))?;
            Ok(0)
        }
        Command::Sweep {
            tower,
            trials,
            seed,
            mode,
            a,
            deg_f,
            deg_h,
            deg_k,
            out,
        } => {
            let tw = build_tower(&tower)?;
            let mode = match mode.as_str() {
                "general" => SweepMode::General,
                "trace" => SweepMode::Trace,
                "cpp" => SweepMode::Cpp,
                "variant" => {
                    let a = a
                        .as_deref()
                        .ok_or_else(|| Error::InvalidInput("variant mode needs --a".into()))?;
                    SweepMode::Variant {
                        a: serial::elem_from_compact(&tw, Level::Fq, a)?,
                    }
                }
                other => {
                    return Err(Error::InvalidInput(format!("unknown sweep mode {other:?}")))
                }
            };
            let mut config = SweepConfig::new(trials, seed, mode, tw.n());
            if let Some(d) = deg_f {
                config.deg_f = d;
            }
            if let Some(d) = deg_h {
                config.deg_h = d;
            }
            if let Some(d) = deg_k {
                config.deg_k = d;
            }
            let report = oracle::agreement_sweep(&tw, &config)?;
            log::info!(
                "sweep finished in {:?}: {}/{} agreements",
                report.elapsed,
                report.agreements,
                report.trials
            );
            write_json(&out, &serial::sweep_report_to_json(&report))?;
            if !report.disagreements.is_empty() {
                eprintln!(
                    "{}",
                    serial::to_pretty_string(&serde_json::json!({
                        "error": {
                            "code": "SweepDisagreement",
                            "message": format!(
                                "{} of {} trials disagreed with the oracle",
                                report.disagreements.len(),
                                report.trials
                            ),
                        }
                    }))
                );
                return Ok(1);
            }
            Ok(0)
        }
        Command::Iterate {
            tower,
            b,
            levels,
            hs,
            kpolys,
            seed,
            out,
        } => {
            if levels == 0 {
                return Err(Error::InvalidInput("levels must be at least 1".into()));
            }
            if hs.len() != levels as usize {
                return Err(Error::InvalidInput(format!(
                    "expected {levels} occurrences of --h, got {}",
                    hs.len()
                )));
            }
            if !kpolys.is_empty() && kpolys.len() != levels as usize {
                return Err(Error::InvalidInput(format!(
                    "expected 0 or {levels} occurrences of --kpoly, got {}",
                    kpolys.len()
                )));
            }
            let tw0 = build_tower(&tower)?;
            let b = serial::poly_from_compact(&tw0, Level::Fq, &b)?;
            // Parse each level's parameters against that level's tower.
            let mut per_level = Vec::with_capacity(levels as usize);
            let mut k_i = tower.k;
            for i in 0..levels {
                let tw_i = FieldTower::build_with_bound(tower.p, k_i, tower.n, enum_bound())?;
                let h = serial::poly_from_compact(&tw_i, Level::Fq, &hs[i as usize])?;
                let k = match kpolys.get(i as usize) {
                    Some(s) => serial::poly_from_compact(&tw_i, Level::Fq, s)?,
                    None => Poly::one(&tw_i, Level::Fq),
                };
                per_level.push((h, k, seed + i as u64));
                k_i = k_i.checked_mul(tower.n).ok_or(Error::TowerTooLarge)?;
            }
            let chain = iterate_construction(&tw0, &b, &per_level)?;
            let levels_json: Vec<serde_json::Value> = chain
                .iter()
                .map(|lvl| serial::pp_spec_to_json(&lvl.spec))
                .collect();
            write_json(
                &out,
                &serde_json::json!({ "kind": "iteration", "levels": levels_json }),
            )?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("{}", serial::to_pretty_string(&serial::error_to_json(&err)));
            ExitCode::from(1)
        }
    }
}
