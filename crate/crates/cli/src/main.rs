use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graphlift::analysis::{analyze, AnalyzeOptions, Verdict};
use graphlift::config::{find_obstructor, Limits};
use graphlift::corpus::{corpus, NAMES};
use graphlift::gamma::{build_gamma, mu2_vanishes, nu3_closure};
use graphlift::realize::{parse_cnf, realize, validate_shape, verify_realization};
use graphlift::{parse_gmap, write_gmap, Error, GraphMap};

/// Decide whether graph maps lift to embeddings, and explain why not.
#[derive(Parser)]
#[command(name = "graphlift", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full lifting decision with certificate.
    Analyze(AnalyzeArgs),
    /// Like analyze, also printing the fiber orders.
    Lift(AnalyzeArgs),
    /// Search for an n-obstructor.
    Obstruct {
        file: PathBuf,
        #[arg(short = 'n', long, default_value_t = 2)]
        arity: usize,
        #[arg(long)]
        max_config_vertices: Option<usize>,
    },
    /// Print Γ_f and its satisfiability.
    Gamma {
        file: PathBuf,
        #[arg(long)]
        max_config_vertices: Option<usize>,
    },
    /// Print the μ₂ and ν₃ invariants and the closure merge log.
    Nu3 {
        file: PathBuf,
        #[arg(long)]
        max_config_vertices: Option<usize>,
    },
    /// Build a map realising a GCNF formula; GMAP on stdout, audit on stderr.
    Realize {
        file: PathBuf,
        /// Reject formulas missing negated twins instead of completing them.
        #[arg(long)]
        strict: bool,
    },
    /// Print a built-in instance, or `list` them.
    Corpus { name: String },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// GMAP file, or `-` for stdin.
    file: PathBuf,
    /// Analyse the whole map instead of its multiple-point part.
    #[arg(long)]
    no_restrict: bool,
    /// Also search for obstructors of arity 3..=N (N ≤ 5).
    #[arg(long, value_name = "N")]
    obstructors: Option<usize>,
    /// Count isotopy classes of liftings, up to CAP (`--count=CAP`).
    #[arg(
        long,
        value_name = "CAP",
        num_args = 0..=1,
        require_equals = true,
        default_missing_value = "1000000"
    )]
    count: Option<usize>,
    /// Decide stable tree→path maps by the 2-obstructor test.
    #[arg(long)]
    stable_shortcut: bool,
    #[arg(long)]
    fast: bool,
    #[arg(long, value_name = "N")]
    max_config_vertices: Option<usize>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceCap(_) | Error::BoundExceeded { .. } => 3,
        Error::Internal(_) => 4,
        _ => 2,
    }
}

fn read_input(path: &PathBuf) -> Result<String, Error> {
    let mut bytes = Vec::new();
    let res = if path.as_os_str() == "-" {
        io::stdin().read_to_end(&mut bytes).map(|_| ())
    } else {
        std::fs::read(path).map(|b| bytes = b)
    };
    res.map_err(|e| Error::Shape(format!("cannot read {}: {e}", path.display())))?;
    String::from_utf8(bytes).map_err(|_| Error::Shape(format!("{} is not UTF-8", path.display())))
}

fn load_map(path: &PathBuf) -> Result<GraphMap, Error> {
    parse_gmap(&read_input(path)?)
}

fn limits(max_config_vertices: Option<usize>) -> Limits {
    let mut l = Limits::default();
    if let Some(n) = max_config_vertices {
        l.max_config_vertices = n;
    }
    l
}

fn reject_coincident(m: &GraphMap) -> Result<(), Error> {
    match m.coincident_edges() {
        Some((e, g)) => Err(Error::CoincidentEdges {
            first: m.domain().edge(e).name.clone(),
            second: m.domain().edge(g).name.clone(),
        }),
        None => Ok(()),
    }
}

fn run(cli: Cli, out: &mut String) -> Result<u8, Error> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args, false, out),
        Command::Lift(args) => cmd_analyze(args, true, out),
        Command::Obstruct {
            file,
            arity,
            max_config_vertices,
        } => {
            let m = load_map(&file)?;
            if arity > Limits::HARD_MAX_ARITY {
                return Err(Error::ResourceCap(format!(
                    "arity {arity} above {}",
                    Limits::HARD_MAX_ARITY
                )));
            }
            let mut l = limits(max_config_vertices);
            l.max_arity = l.max_arity.max(arity);
            match find_obstructor(&m, arity, &l)? {
                Some(w) => {
                    w.validate(&m)?;
                    out.push_str(&w.render(&m));
                    Ok(1)
                }
                None => {
                    out.push_str(&format!("obstructor {arity}: none\n"));
                    Ok(0)
                }
            }
        }
        Command::Gamma {
            file,
            max_config_vertices,
        } => {
            let m = load_map(&file)?;
            reject_coincident(&m)?;
            match build_gamma(&m, &limits(max_config_vertices)) {
                Ok(g) => {
                    out.push_str(&format!(
                        "gamma_vars: {}\ngamma_clauses: {}\n",
                        g.num_vars(),
                        g.clauses().len()
                    ));
                    out.push_str(&g.render_clauses());
                    let sat = g.solve().is_some();
                    out.push_str(if sat {
                        "gamma_status: sat\n"
                    } else {
                        "gamma_status: unsat\n"
                    });
                    Ok(if sat { 0 } else { 1 })
                }
                Err(Error::GammaUndefined) => {
                    out.push_str("gamma_status: undefined\n");
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
        Command::Nu3 {
            file,
            max_config_vertices,
        } => {
            let m = load_map(&file)?;
            let l = limits(max_config_vertices);
            let nu = nu3_closure(&m, &l)?;
            out.push_str(&nu.render(&m, mu2_vanishes(&m, &l)?));
            Ok(0)
        }
        Command::Realize { file, strict } => {
            let spec = validate_shape(parse_cnf(&read_input(&file)?)?, strict)?;
            let m = realize(&spec)?;
            let report = verify_realization(&m, &spec);
            let mut err = io::stderr().lock();
            for w in &spec.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let _ = write!(err, "{}", report.render());
            out.push_str(&write_gmap(&m));
            Ok(if report.all_pass() { 0 } else { 4 })
        }
        Command::Corpus { name } => {
            if name == "list" {
                for n in NAMES {
                    out.push_str(n);
                    out.push('\n');
                }
                return Ok(0);
            }
            let m = corpus(&name)
                .ok_or_else(|| Error::Shape(format!("unknown corpus instance `{name}`")))?;
            out.push_str(&write_gmap(&m));
            Ok(0)
        }
    }
}

fn cmd_analyze(args: AnalyzeArgs, with_orders: bool, out: &mut String) -> Result<u8, Error> {
    let m = load_map(&args.file)?;
    let mut opts = AnalyzeOptions {
        restrict: !args.no_restrict,
        count: args.count,
        stable_shortcut: args.stable_shortcut,
        fast: args.fast,
        limits: limits(args.max_config_vertices),
        ..Default::default()
    };
    if let Some(n) = args.obstructors {
        if n > Limits::HARD_MAX_ARITY {
            return Err(Error::ResourceCap(format!(
                "--obstructors {n} above {}",
                Limits::HARD_MAX_ARITY
            )));
        }
        opts.max_obstructor_arity = n;
        opts.limits.max_arity = opts.limits.max_arity.max(n);
    }
    let report = analyze(&m, &opts)?;
    out.push_str(&report.render(&m, with_orders));
    eprintln!("elapsed: {:.3}s", report.elapsed.as_secs_f64());
    Ok(match report.verdict {
        Verdict::Liftable => 0,
        Verdict::Unliftable => 1,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    let mut stdout = io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(code)
}
