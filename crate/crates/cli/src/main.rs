//! Command-line front end for the engine: parse and print automorphisms and
//! words, run the individual operations, and execute named verification
//! suites.
//!
//! Exit codes: 0 success / all checks passed, 1 operation error or check
//! failure, 2 usage or parse error, 3 all checks either passed or were
//! inconclusive, with at least one inconclusive.

use autalg::approx::{hiking_solve, tame_approximate};
use autalg::coeffs::{FieldSpec, Scalar};
use autalg::endo::Endo;
use autalg::poly::PolyCtx;
use autalg::synth::{synth_edge, synth_elementary, synth_nc_elementary, synth_power};
use autalg::text::{format_endo, format_word, parse_endo, parse_expr, parse_word};
use autalg::torus::{singularity_valuation, torus_conjugate};
use autalg::Error;
use autalg_cli::suites::{run_suite, Status};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::io::Read;

#[derive(Parser)]
#[command(name = "autalg", version, about = "Exact automorphism-group computations")]
struct Cli {
    #[command(flatten)]
    globals: Globals,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Globals {
    /// Coefficient field: `q` or `fp:<p>`
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Work in the free (noncommutative) algebra
    #[arg(long, global = true)]
    nc: bool,
    /// Number of variables for constructed contexts
    #[arg(long, global = true, default_value_t = 3)]
    vars: usize,
    /// Seed for randomized operations
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit line-delimited JSON records
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an endomorphism (or word) file and reprint it canonically
    Parse {
        /// Input path, `-` for stdin
        file: String,
        /// Treat the input as a generator word
        #[arg(long)]
        word: bool,
    },
    /// Compose two endomorphisms (apply the first, then the second)
    Compose { f: String, g: String },
    /// Invert an endomorphism degree by degree up to the given level
    Invert {
        #[arg(long)]
        to: usize,
        f: String,
    },
    /// Conjugate the second map by the first
    Conjugate {
        a: String,
        m: String,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Locate an endomorphism in the augmentation filtration
    Filtration {
        #[arg(long, default_value_t = 8)]
        cap: usize,
        f: String,
    },
    /// Drop all terms of degree above the given level
    Truncate {
        #[arg(long)]
        to: usize,
        f: String,
    },
    /// Produce generator words for elementary automorphisms
    Synthesize {
        #[command(subcommand)]
        what: SynthCmd,
    },
    /// Diagonal one-parameter actions
    Torus {
        #[command(subcommand)]
        what: TorusCmd,
    },
    /// Tame approximation: peel deviations degree by degree up to a level
    Approximate {
        #[arg(long)]
        to: usize,
        #[arg(long, default_value_t = 200)]
        budget: usize,
        f: String,
    },
    /// Solve for slice-cancelling multiplicities and scales
    Hike {
        /// Comma-separated slice degrees to cancel
        #[arg(long)]
        targets: String,
    },
    /// Run a named verification suite
    Verify { suite: String },
}

#[derive(Subcommand)]
enum SynthCmd {
    /// Word for z -> z + c * x^k
    Power {
        #[arg(long)]
        coeff: String,
        #[arg(long)]
        exp: usize,
    },
    /// Word for z -> z + c * y * x^k
    Edge {
        #[arg(long)]
        coeff: String,
        #[arg(long)]
        exp: usize,
    },
    /// Word for the commutative elementary z -> z + P(x, y)
    Poly {
        #[arg(long)]
        expr: String,
    },
    /// Word for a free-algebra elementary in four variables
    Nc {
        /// Target variable (e.g. `z` or `t`)
        #[arg(long)]
        target: String,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 64)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum TorusCmd {
    /// Conjugate by the weighted diagonal family diag(t^w)
    Conjugate {
        /// Comma-separated integer weights
        #[arg(long)]
        weights: String,
        f: String,
    },
    /// Lowest parameter exponent over the off-diagonal terms
    Valuation {
        #[arg(long)]
        weights: String,
        f: String,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::UnknownSuite(_) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> i32 {
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            if cli.globals.json {
                println!("{}", json!({ "error": e.to_string() }));
            } else {
                eprintln!("error: {}", e);
            }
            exit_code_for(&e)
        }
    }
}

fn read_input(path: &str) -> autalg::Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::BadShape(format!("cannot read stdin: {}", e)))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::BadShape(format!("cannot read {}: {}", path, e)))
    }
}

fn load_endo(path: &str) -> autalg::Result<Endo<Scalar>> {
    parse_endo(&read_input(path)?)
}

fn parse_field(s: &str) -> autalg::Result<FieldSpec> {
    if s == "q" {
        Ok(FieldSpec::Q)
    } else if let Some(p) = s.strip_prefix("fp:") {
        let p: u64 = p.parse().map_err(|_| Error::Parse {
            line: 1,
            col: 1,
            msg: format!("invalid prime '{}'", p),
        })?;
        FieldSpec::prime(p)
    } else {
        Err(Error::Parse {
            line: 1,
            col: 1,
            msg: format!("field must be 'q' or 'fp:<p>', got '{}'", s),
        })
    }
}

fn build_ctx(g: &Globals) -> autalg::Result<PolyCtx> {
    let field = parse_field(&g.field)?;
    if g.vars == 0 {
        return Err(Error::BadShape("need at least one variable".into()));
    }
    Ok(if g.nc {
        PolyCtx::free(g.vars, field)
    } else {
        PolyCtx::comm(g.vars, field)
    })
}

fn parse_weights(s: &str) -> autalg::Result<Vec<i64>> {
    s.split(',')
        .map(|part| {
            part.trim().parse::<i64>().map_err(|_| Error::Parse {
                line: 1,
                col: 1,
                msg: format!("invalid weight '{}'", part),
            })
        })
        .collect()
}

fn parse_scalar_arg(field: FieldSpec, s: &str) -> autalg::Result<Scalar> {
    let bad = || Error::Parse {
        line: 1,
        col: 1,
        msg: format!("invalid coefficient '{}'", s),
    };
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        Scalar::from_ratio(field, n, d)
    } else {
        let v: i64 = s.trim().parse().map_err(|_| bad())?;
        Ok(Scalar::from_int(field, v))
    }
}

fn emit_endo(g: &Globals, f: &Endo<Scalar>) {
    if g.json {
        println!("{}", json!({ "endo": format_endo(f) }));
    } else {
        println!("{}", format_endo(f));
    }
}

fn emit_word(g: &Globals, w: &autalg::word::GenWord) {
    if g.json {
        println!("{}", json!({ "word": format_word(w) }));
    } else {
        println!("{}", format_word(w));
    }
}

fn var_arg(name: &str, n: usize) -> autalg::Result<usize> {
    let aliases = ["x", "y", "z", "t"];
    if let Some(i) = aliases.iter().position(|a| *a == name) {
        if i < n {
            return Ok(i);
        }
    }
    if let Some(rest) = name.strip_prefix('x') {
        if let Ok(k) = rest.parse::<usize>() {
            if 1 <= k && k <= n {
                return Ok(k - 1);
            }
        }
    }
    Err(Error::Parse {
        line: 1,
        col: 1,
        msg: format!("unknown variable '{}'", name),
    })
}

fn dispatch(cli: &Cli) -> autalg::Result<i32> {
    let g = &cli.globals;
    match &cli.command {
        Command::Parse { file, word } => {
            let text = read_input(file)?;
            if *word {
                emit_word(g, &parse_word(&text)?);
            } else {
                emit_endo(g, &parse_endo(&text)?);
            }
            Ok(0)
        }
        Command::Compose { f, g: gpath } => {
            let a = load_endo(f)?;
            let b = load_endo(gpath)?;
            emit_endo(g, &a.compose(&b)?);
            Ok(0)
        }
        Command::Invert { to, f } => {
            let a = load_endo(f)?;
            emit_endo(g, &a.jet_invert(*to)?);
            Ok(0)
        }
        Command::Conjugate { a, m, cap } => {
            let a = load_endo(a)?;
            let m = load_endo(m)?;
            emit_endo(g, &Endo::conjugate(&a, &m, *cap)?);
            Ok(0)
        }
        Command::Filtration { cap, f } => {
            let a = load_endo(f)?;
            let rep = a.filtration(*cap);
            if g.json {
                println!(
                    "{}",
                    json!({
                        "level": rep.level,
                        "scalar_linear_part": rep.scalar_flag,
                        "witness": rep.witness.as_ref().map(|w| json!({
                            "image": w.image,
                            "monomial": format!("{:?}", w.mono),
                            "coeff": w.coeff,
                        })),
                    })
                );
            } else {
                println!("level: {}", rep.level);
                println!("scalar linear part: {}", rep.scalar_flag);
                match &rep.witness {
                    Some(w) => println!(
                        "witness: image {} term {:?} coeff {}",
                        w.image, w.mono, w.coeff
                    ),
                    None => println!("witness: none (identity up to the cap)"),
                }
            }
            Ok(0)
        }
        Command::Truncate { to, f } => {
            let a = load_endo(f)?;
            emit_endo(g, &a.truncate(*to));
            Ok(0)
        }
        Command::Synthesize { what } => {
            let ctx = build_ctx(g)?;
            let word = match what {
                SynthCmd::Power { coeff, exp } => {
                    let c = parse_scalar_arg(ctx.field, coeff)?;
                    synth_power(&ctx, &c, *exp)?
                }
                SynthCmd::Edge { coeff, exp } => {
                    let c = parse_scalar_arg(ctx.field, coeff)?;
                    synth_edge(&ctx, &c, *exp)?
                }
                SynthCmd::Poly { expr } => {
                    let p = parse_expr(expr, &ctx)?;
                    synth_elementary(&ctx, &p)?
                }
                SynthCmd::Nc {
                    target,
                    expr,
                    depth,
                } => {
                    let p = parse_expr(expr, &ctx)?;
                    let t = var_arg(target, ctx.n)?;
                    synth_nc_elementary(&ctx, t, &p, *depth)?
                }
            };
            emit_word(g, &word);
            Ok(0)
        }
        Command::Torus { what } => match what {
            TorusCmd::Conjugate { weights, f } => {
                let a = load_endo(f)?;
                let w = parse_weights(weights)?;
                let conj = torus_conjugate(&a, &w)?;
                let lines: Vec<String> = (0..conj.ctx().n)
                    .map(|i| {
                        let image: Vec<String> = conj
                            .image(i)
                            .terms()
                            .map(|(m, c)| format!("({}) * {:?}", c, m))
                            .collect();
                        format!("x{} = {}", i + 1, image.join(" + "))
                    })
                    .collect();
                if g.json {
                    println!("{}", json!({ "images": lines }));
                } else {
                    for line in lines {
                        println!("{}", line);
                    }
                }
                Ok(0)
            }
            TorusCmd::Valuation { weights, f } => {
                let a = load_endo(f)?;
                let w = parse_weights(weights)?;
                let val = singularity_valuation(&a, &w)?;
                if g.json {
                    println!("{}", json!({ "valuation": val }));
                } else {
                    println!("{}", val);
                }
                Ok(0)
            }
        },
        Command::Approximate { to, budget, f } => {
            let a = load_endo(f)?;
            let trace = tame_approximate(&a, *to, *budget, g.seed)?;
            if g.json {
                println!(
                    "{}",
                    json!({
                        "seed": g.seed,
                        "stages": trace
                            .stages
                            .iter()
                            .map(|s| json!({
                                "degree": s.degree,
                                "residual_level": s.residual_level,
                                "word": format_word(&s.word),
                            }))
                            .collect::<Vec<_>>(),
                        "word": format_word(&trace.word()),
                        "residual": format_endo(&trace.residual),
                    })
                );
            } else {
                println!("{}", format_word(&trace.word()));
                println!("---");
                println!("{}", format_endo(&trace.residual));
            }
            Ok(0)
        }
        Command::Hike { targets } => {
            let field = parse_field(&g.field)?;
            let targets: Vec<u32> = targets
                .split(',')
                .map(|p| {
                    p.trim().parse::<u32>().map_err(|_| Error::Parse {
                        line: 1,
                        col: 1,
                        msg: format!("invalid target '{}'", p),
                    })
                })
                .collect::<autalg::Result<_>>()?;
            let plan = hiking_solve(&targets, field)?;
            if g.json {
                println!(
                    "{}",
                    json!({
                        "weights": plan.weights,
                        "scales": plan.scales.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                        "targets": plan.targets,
                    })
                );
            } else {
                for (k, lambda) in plan.weights.iter().zip(plan.scales.iter()) {
                    println!("weight {} at scale {}", k, lambda);
                }
            }
            Ok(0)
        }
        Command::Verify { suite } => {
            let result = run_suite(suite, g.seed)?;
            for c in &result.checks {
                if g.json {
                    println!(
                        "{}",
                        json!({
                            "suite": result.suite,
                            "seed": result.seed,
                            "check": c.name,
                            "status": c.status.as_str(),
                            "detail": c.detail,
                        })
                    );
                } else if c.status != Status::Pass {
                    println!("[{}] {}: {}", c.status.as_str(), c.name, c.detail);
                }
            }
            let (p, f, i) = (result.passed(), result.failed(), result.inconclusive());
            if g.json {
                println!(
                    "{}",
                    json!({
                        "suite": result.suite,
                        "seed": result.seed,
                        "passed": p,
                        "failed": f,
                        "inconclusive": i,
                        "millis": result.millis,
                    })
                );
            } else {
                println!(
                    "suite {}: {} passed, {} failed, {} inconclusive ({} ms, seed {})",
                    result.suite, p, f, i, result.millis, result.seed
                );
            }
            Ok(if f > 0 {
                1
            } else if i > 0 {
                3
            } else {
                0
            })
        }
    }
}
