//! `staircase` command line. Exit codes: 0 success, 1 a requested check
//! failed, 2 bad usage or input.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use staircase_core::atf::{apply_word, init_polydisk, to_svg};
use staircase_core::ech::{default_sweep_samples, ellipsoid_caps, lower_bound_sweep, polydisk_caps, polydisk_caps_bruteforce, sweep_csv};
use staircase_core::perfclass::{ech_index, family_n, inner_classes, mu, outer_classes, qp_check};
use staircase_core::staircase::{acc_point_decimal, accumulation, is_blocked};
use staircase_core::{Error, QuadNum, Rounding};

use crate::inputs::{parse_beta, ClassSelector};
use crate::service::polygon_view;
use crate::suites::{run_suite, SUITES};

#[derive(Parser, Debug)]
#[command(name = "staircase", version, about = "Exact ellipsoid-into-polydisk embedding computations")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Decimal digits for rendered values.
    #[arg(long, global = true, env = "STAIRCASE_PRECISION", default_value_t = 40)]
    digits: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct BetaArgs {
    /// Exact beta, e.g. `1/2+5/12*sqrt(30)`.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// `main` or `n=<k>`.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct SelectorArgs {
    /// Explicit tuple `d,e,p,q,t`.
    #[arg(long, allow_hyphen_values = true)]
    class: Option<String>,
    #[arg(long)]
    outer: Option<usize>,
    #[arg(long)]
    inner: Option<usize>,
    /// The step class (2,0,6,1,5).
    #[arg(long)]
    step: bool,
    /// Blocking class of the n-th family.
    #[arg(long)]
    blocker: Option<u64>,
}

impl SelectorArgs {
    fn selector(&self) -> ClassSelector {
        ClassSelector {
            class: self.class.clone(),
            outer: self.outer,
            inner: self.inner,
            step: self.step,
            blocker: self.blocker,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Target {
    Ellipsoid,
    Polydisk,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Accumulation point and the volume constraint there.
    Acc {
        #[command(flatten)]
        beta: BetaArgs,
    },
    /// Members of the staircase class families.
    Classes {
        #[arg(long, conflicts_with = "inner")]
        outer: Option<usize>,
        #[arg(long)]
        inner: Option<usize>,
        /// List every member up to the given index.
        #[arg(long)]
        all: bool,
    },
    /// Obstruction function of one class at z.
    Mu {
        #[command(flatten)]
        class: SelectorArgs,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[command(flatten)]
        beta: BetaArgs,
    },
    /// ECH capacities c_0..c_K.
    EchCaps {
        #[arg(long, value_enum)]
        target: Target,
        /// Ellipsoid sides `a,b`.
        #[arg(long, default_value = "1,1")]
        sides: String,
        #[arg(long, default_value_t = 20)]
        kmax: u64,
        /// Enumerate lattice paths instead of using the closed form.
        #[arg(long)]
        brute: bool,
        #[command(flatten)]
        beta: BetaArgs,
    },
    /// Capacity-ratio lower bound over sample points in [1, 9].
    Sweep {
        #[arg(long, default_value_t = 2000)]
        kmax: u64,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[command(flatten)]
        beta: BetaArgs,
    },
    /// Apply a mutation word to the initial polydisk polygon.
    Mutate {
        #[arg(long)]
        word: String,
        /// Also write an SVG snapshot.
        #[arg(long)]
        svg: Option<std::path::PathBuf>,
        #[command(flatten)]
        beta: BetaArgs,
    },
    /// Whether a class blocks beta.
    Blocked {
        #[command(flatten)]
        class: SelectorArgs,
        #[command(flatten)]
        beta: BetaArgs,
    },
    /// Data of the n-th family.
    Family {
        #[arg(long)]
        n: u64,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        kmax: Option<usize>,
        #[command(flatten)]
        beta: BetaArgs,
    },
    /// Serve the session API over HTTP.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(format!("error[{}]: {e}", e.code()))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Check(format!("io error: {e}"))
    }
}

type Out<'a> = &'a mut dyn Write;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "{m}");
            2
        }
        Err(Failure::Check(m)) => {
            let _ = writeln!(err, "{m}");
            1
        }
    }
}

fn beta_of(b: &BetaArgs) -> Result<QuadNum, Failure> {
    Ok(parse_beta(b.beta.as_deref(), b.preset.as_deref())?)
}

fn print_json(out: Out, v: &Value) -> Result<(), Failure> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"))?;
    Ok(())
}

fn dec(x: &QuadNum, digits: usize) -> String {
    x.to_decimal(digits, Rounding::Nearest)
}

fn dispatch(cli: &Cli, out: Out) -> Result<(), Failure> {
    let d = cli.digits;
    match &cli.cmd {
        Cmd::Acc { beta } => {
            let b = beta_of(beta)?;
            let data = accumulation(&b)?;
            let bracket = acc_point_decimal(&b, d as u32)?;
            if cli.json {
                print_json(out, &json!({"data": data, "acc_decimal": bracket}))?;
            } else {
                writeln!(out, "{}", data.acc)?;
                writeln!(out, "acc      ~ {}", bracket.lower)?;
                writeln!(out, "vol(acc) = {} ~ {}", data.vol_at_acc, dec(&data.vol_at_acc, d))?;
            }
        }
        Cmd::Classes { outer, inner, all } => {
            let classes = match (outer, inner) {
                (Some(k), None) => outer_classes(*k),
                (None, Some(k)) => {
                    if *k == 0 {
                        return Err(Failure::Usage("the inner family starts at index 1".into()));
                    }
                    inner_classes(*k)?
                }
                _ => return Err(Failure::Usage("give --outer <k> or --inner <k>".into())),
            };
            let first = if *all { 0 } else { classes.len() - 1 };
            let offset = if inner.is_some() { 1 } else { 0 };
            let shown: Vec<_> = classes.iter().enumerate().skip(first).collect();
            if cli.json {
                let v: Vec<Value> = shown
                    .iter()
                    .map(|(i, c)| json!({"k": i + offset, "class": c, "ech_index": ech_index(c).to_string(), "ok": qp_check(&c.tuple()).ok}))
                    .collect();
                print_json(out, &Value::Array(v))?;
            } else {
                for (i, c) in shown {
                    if *all {
                        writeln!(out, "{:>3}  {}", i + offset, c)?;
                    } else {
                        writeln!(out, "{c}")?;
                    }
                }
            }
        }
        Cmd::Mu { class, z, beta } => {
            let c = class.selector().resolve()?;
            let b = beta_of(beta)?;
            let z: QuadNum = z.parse()?;
            let m = mu(&c, &b, &z)?;
            if cli.json {
                print_json(out, &json!({"class": c, "z": z, "beta": b, "mu": m, "decimal": dec(&m, d)}))?;
            } else {
                writeln!(out, "{m}")?;
                writeln!(out, "~ {}", dec(&m, d))?;
            }
        }
        Cmd::EchCaps { target, sides, kmax, brute, beta } => {
            let caps = match target {
                Target::Ellipsoid => {
                    let parts: Vec<&str> = sides.split(',').collect();
                    let [a, b] = parts.as_slice() else {
                        return Err(Failure::Usage(format!("--sides wants a,b; got '{sides}'")));
                    };
                    let a: QuadNum = a.trim().parse()?;
                    let b: QuadNum = b.trim().parse()?;
                    ellipsoid_caps(&a, &b, *kmax as usize)?
                }
                Target::Polydisk => {
                    let b = beta_of(beta)?;
                    if *brute {
                        polydisk_caps_bruteforce(*kmax, &b)?
                    } else {
                        polydisk_caps(*kmax, &b)?
                    }
                }
            };
            if cli.json {
                print_json(out, &json!(caps))?;
            } else {
                for (k, c) in caps.iter().enumerate() {
                    writeln!(out, "{k:>5}  {c}  ~ {}", dec(c, d.min(12)))?;
                }
            }
        }
        Cmd::Sweep { kmax, out: path, beta } => {
            let b = beta_of(beta)?;
            let samples = lower_bound_sweep(&b, *kmax, &default_sweep_samples())?;
            let csv = sweep_csv(&samples, d);
            match path {
                Some(p) => std::fs::write(p, csv)?,
                None => write!(out, "{csv}")?,
            }
        }
        Cmd::Mutate { word, svg, beta } => {
            let b = beta_of(beta)?;
            let poly = apply_word(&init_polydisk(&b)?, word).map_err(|e| Failure::Check(format!("error[{}]: {e}", e.code())))?;
            if let Some(p) = svg {
                std::fs::write(p, to_svg(&poly, 6))?;
            }
            print_json(out, &polygon_view(&poly, d))?;
        }
        Cmd::Blocked { class, beta } => {
            let c = class.selector().resolve()?;
            let b = beta_of(beta)?;
            let status = is_blocked(&c, &b)?;
            if cli.json {
                print_json(out, &json!({"class": c, "beta": b, "status": status}))?;
            } else {
                writeln!(out, "{}", serde_json::to_value(status).expect("serializable").as_str().unwrap_or_default())?;
            }
        }
        Cmd::Family { n } => {
            let f = family_n(*n)?;
            let seeds: Vec<String> = f.seed_centers.iter().map(|c| c.to_string()).collect();
            if cli.json {
                print_json(
                    out,
                    &json!({
                        "n": f.n,
                        "beta_n": f.beta_n,
                        "blocker": f.blocker,
                        "step_class": f.step_class,
                        "seed_centers": seeds,
                    }),
                )?;
            } else {
                writeln!(out, "beta_{n} = {} ~ {}", f.beta_n, dec(&f.beta_n, d))?;
                writeln!(out, "blocker    {}", f.blocker)?;
                writeln!(out, "step class {}", f.step_class)?;
                writeln!(out, "seeds      {}", seeds.join("  "))?;
            }
        }
        Cmd::Verify { suite, kmax, beta } => {
            if !SUITES.contains(&suite.as_str()) {
                return Err(Failure::Usage(format!("unknown suite '{suite}'; one of {}", SUITES.join(", "))));
            }
            let b = beta_of(beta)?;
            let report = run_suite(suite, *kmax, &b)?;
            if cli.json {
                print_json(out, &serde_json::to_value(&report).expect("serializable"))?;
            } else {
                write!(out, "{}", report.render_table())?;
            }
            let failed = report.failures().count();
            if failed > 0 {
                return Err(Failure::Check(format!("{failed} of {} checks failed", report.records.len())));
            }
            if !cli.json {
                writeln!(out, "pass ({} checks)", report.records.len())?;
            }
        }
        Cmd::Serve { addr } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(crate::http::serve(addr, d))?;
        }
    }
    Ok(())
}
