use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quadrep_core::bound::{least_n, threshold, TheoremId};
use quadrep_core::form::{Domain, FormParams, RepProblem, Weighting};
use quadrep_core::sieve::{count_representations, sieve_with, ObservedThreshold, SieveConfig};
use quadrep_core::verify::{self, Claim, Report, Verdict};
use quadrep_core::witness::{construct, construct_for, WitnessTrace};
use quadrep_core::Error;

#[derive(Debug, Parser)]
#[command(
    name = "quadrep",
    version,
    about = "Four-term representations by x(ax+b) and x(ax+b)/2"
)]
struct Cli {
    /// Worker threads for sieving and claim checks (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DomainArg {
    N,
    Z,
}

#[derive(Debug, Args)]
struct ProblemArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
    /// Leading coefficient k: (k,1,1,1) for k in 1..=3.
    #[arg(long, default_value_t = 1)]
    weighted: i64,
    /// Use x(ax+b)/2 instead of x(ax+b).
    #[arg(long)]
    halved: bool,
    #[arg(long, value_enum, default_value_t = DomainArg::N)]
    domain: DomainArg,
    /// TOML or JSON file with a `terms` list, for mixed problems.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    problem: Option<PathBuf>,
}

impl ProblemArgs {
    fn params(&self) -> anyhow::Result<FormParams> {
        match (self.a, self.b) {
            (Some(a), Some(b)) => Ok(FormParams::new(a, b)?),
            _ => Err(usage("--a and --b are required (or --problem)")),
        }
    }

    fn problem(&self) -> anyhow::Result<RepProblem> {
        if let Some(path) = &self.problem {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let parsed = if path.extension().is_some_and(|e| e == "json") {
                serde_json::from_str(&text)
                    .map_err(|e| usage(&format!("{}: {e}", path.display())))?
            } else {
                toml::from_str(&text).map_err(|e| usage(&format!("{}: {e}", path.display())))?
            };
            return Ok(parsed);
        }
        let domain = match self.domain {
            DomainArg::N => Domain::N,
            DomainArg::Z => Domain::Z,
        };
        Ok(RepProblem::uniform(
            self.params()?,
            Weighting::from_leading(self.weighted)?,
            self.halved,
            domain,
        )?)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Construct an explicit witness for n.
    Witness {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        n: i64,
        /// Force a specific theorem's construction.
        #[arg(long)]
        theorem: Option<TheoremId>,
    },
    /// Sieve the representable set and summarize it.
    Sieve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = verify::DEFAULT_LIMIT)]
        limit: u64,
        /// Also write the bitset as a QRS1 dump.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// List the non-representable integers up to the limit.
    Exceptions {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = verify::DEFAULT_LIMIT)]
        limit: u64,
    },
    /// Check registered claims (all non-conjecture claims by default).
    Verify {
        #[arg(long)]
        claim: Option<String>,
        #[arg(long)]
        limit: Option<u64>,
        /// Omit wall times so repeated runs are byte-identical.
        #[arg(long)]
        no_timing: bool,
    },
    /// Gather evidence for the registered conjectures.
    Conjecture {
        #[arg(long)]
        claim: Option<String>,
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long)]
        no_timing: bool,
    },
    /// Print a theorem's threshold exactly and the least admissible n.
    Bound {
        #[arg(long)]
        theorem: TheoremId,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Count ordered representations of n.
    Count {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        n: u64,
    },
    /// Re-verify a JSON witness trace.
    Check {
        /// Read the trace from stdin.
        #[arg(long, required = true)]
        stdin: bool,
    },
}

/// Marks an error as a usage error (exit code 2).
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: &str) -> anyhow::Error {
    anyhow!(Usage(msg.to_string()))
}

struct Outcome {
    body: String,
    refuted: bool,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome {
            body,
            refuted: false,
        }
    }
}

fn to_json(v: &impl Serialize) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn csv_line(fields: &[String]) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(fields).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("fields are UTF-8")
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

fn witness_cmd(fmt: Format, trace: &WitnessTrace) -> anyhow::Result<String> {
    let t = trace.witness.tuple();
    Ok(match fmt {
        Format::Json => to_json(trace)?,
        Format::Csv => {
            let mut s = csv_line(&["theorem", "n", "w", "x", "y", "z", "case"].map(String::from));
            s += &csv_line(&[
                trace.theorem.to_string(),
                trace.n.to_string(),
                t[0].to_string(),
                t[1].to_string(),
                t[2].to_string(),
                t[3].to_string(),
                trace.case.clone(),
            ]);
            s
        }
        Format::Text => format!(
            "{} = {} at (w, x, y, z) = ({}, {}, {}, {}) [{}; {}]\n",
            trace.n, trace.problem, t[0], t[1], t[2], t[3], trace.theorem, trace.case
        ),
    })
}

#[derive(Serialize)]
struct SieveSummary {
    problem: String,
    limit: u64,
    representable: u64,
    exceptions: u64,
    max_exception: Option<u64>,
    stable_tail: bool,
}

#[derive(Serialize)]
struct ExceptionList {
    problem: String,
    limit: u64,
    exceptions: Vec<u64>,
}

#[derive(Serialize)]
struct BoundReport {
    theorem: String,
    a: i64,
    b: i64,
    /// The bound applies to `n / scale`.
    scale: i128,
    strict: bool,
    bound: String,
    approx: f64,
    least_n: i64,
}

#[derive(Serialize)]
struct CountReport {
    problem: String,
    n: u64,
    ordered_representations: u64,
}

fn reports_out(fmt: Format, reports: Vec<Report>, no_timing: bool) -> anyhow::Result<Outcome> {
    let reports: Vec<Report> = if no_timing {
        reports.into_iter().map(Report::without_timing).collect()
    } else {
        reports
    };
    let refuted = reports.iter().any(|r| r.verdict == Verdict::Refuted);
    let body = match fmt {
        Format::Json => to_json(&reports)?,
        Format::Csv => {
            let mut s = csv_line(&verify::csv_header().map(String::from));
            for r in &reports {
                s += &csv_line(&verify::csv_row(r));
            }
            s
        }
        Format::Text => reports
            .iter()
            .map(|r| {
                let detail = match (r.evidence.counterexample, r.evidence.max_exception) {
                    (Some(c), _) => format!("counterexample {c}"),
                    (None, Some(m)) => format!("max exception {m}"),
                    (None, None) => String::new(),
                };
                format!(
                    "{:<26} {:<12} limit {:<8} {detail}\n",
                    r.id,
                    r.verdict.to_string(),
                    r.limit
                )
            })
            .collect(),
    };
    Ok(Outcome { body, refuted })
}

fn claims_cmd(
    fmt: Format,
    claim: Option<String>,
    limit: Option<u64>,
    no_timing: bool,
    conjectures: bool,
) -> anyhow::Result<Outcome> {
    let reports = match claim {
        Some(id) => {
            let c = verify::find_claim(&id).map_err(|e| usage(&e.to_string()))?;
            if c.def.conjecture != conjectures {
                let other = if conjectures { "verify" } else { "conjecture" };
                return Err(usage(&format!("{id} is checked by `quadrep {other}`")));
            }
            vec![verify::run_claim(&c, limit).map_err(|e| match e {
                Error::LimitTooSmall { .. } => usage(&e.to_string()),
                e => e.into(),
            })?]
        }
        None => verify::verify_all(limit, |c: &Claim| c.def.conjecture == conjectures)?,
    };
    reports_out(fmt, reports, no_timing)
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let fmt = cli.format;
    match cli.command {
        Command::Witness {
            problem,
            n,
            theorem,
        } => {
            let trace = match theorem {
                Some(th) => construct_for(th, problem.params()?, n)?,
                None => construct(&problem.problem()?, n)?,
            };
            Ok(Outcome::ok(witness_cmd(fmt, &trace)?))
        }
        Command::Sieve {
            problem,
            limit,
            dump,
        } => {
            let prob = problem.problem()?;
            let set = sieve_with(&prob, limit, &SieveConfig::from_env())?;
            if let Some(path) = dump {
                let file = fs::File::create(&path)
                    .with_context(|| format!("creating {}", path.display()))?;
                set.write_to(io::BufWriter::new(file))?;
            }
            let obs = ObservedThreshold::of(&set);
            let summary = SieveSummary {
                problem: prob.to_string(),
                limit,
                representable: set.bits().count_ones() as u64,
                exceptions: set.exceptions().len() as u64,
                max_exception: obs.max_exception,
                stable_tail: obs.stable,
            };
            Ok(Outcome::ok(match fmt {
                Format::Json => to_json(&summary)?,
                Format::Csv => {
                    let opt = summary
                        .max_exception
                        .map(|m| m.to_string())
                        .unwrap_or_default();
                    csv_line(
                        &[
                            "problem",
                            "limit",
                            "representable",
                            "exceptions",
                            "max_exception",
                            "stable_tail",
                        ]
                        .map(String::from),
                    ) + &csv_line(&[
                        summary.problem.clone(),
                        limit.to_string(),
                        summary.representable.to_string(),
                        summary.exceptions.to_string(),
                        opt,
                        summary.stable_tail.to_string(),
                    ])
                }
                Format::Text => format!(
                    "{}: {} of {} representable, {} exceptions, largest {}{}\n",
                    summary.problem,
                    summary.representable,
                    limit + 1,
                    summary.exceptions,
                    summary
                        .max_exception
                        .map_or("none".into(), |m| m.to_string()),
                    if summary.stable_tail {
                        ""
                    } else {
                        " (top fifth not exception-free)"
                    }
                ),
            }))
        }
        Command::Exceptions { problem, limit } => {
            let prob = problem.problem()?;
            let exceptions = sieve_with(&prob, limit, &SieveConfig::from_env())?.exceptions();
            Ok(Outcome::ok(match fmt {
                Format::Json => to_json(&ExceptionList {
                    problem: prob.to_string(),
                    limit,
                    exceptions,
                })?,
                Format::Csv => exceptions.iter().map(|n| format!("{n}\n")).collect(),
                Format::Text => format!("{{{}}}\n", join(&exceptions)),
            }))
        }
        Command::Verify {
            claim,
            limit,
            no_timing,
        } => claims_cmd(fmt, claim, limit, no_timing, false),
        Command::Conjecture {
            claim,
            limit,
            no_timing,
        } => claims_cmd(fmt, claim, limit, no_timing, true),
        Command::Bound { theorem, a, b } => {
            let params = FormParams::new(a, b)?;
            let bound = threshold(theorem, params)?;
            let rep = BoundReport {
                theorem: theorem.to_string(),
                a,
                b,
                scale: theorem.scale(),
                strict: theorem.strict(),
                bound: bound.to_string(),
                approx: bound.approx(),
                least_n: least_n(theorem, params)?,
            };
            Ok(Outcome::ok(match fmt {
                Format::Json => to_json(&rep)?,
                Format::Csv => {
                    csv_line(&["theorem", "a", "b", "bound", "approx", "least_n"].map(String::from))
                        + &csv_line(&[
                            rep.theorem.clone(),
                            a.to_string(),
                            b.to_string(),
                            rep.bound.clone(),
                            format!("{:.3}", rep.approx),
                            rep.least_n.to_string(),
                        ])
                }
                Format::Text => {
                    let lhs = if rep.scale == 1 {
                        "n".to_string()
                    } else {
                        format!("n/{}", rep.scale)
                    };
                    let rel = if rep.strict { ">" } else { ">=" };
                    format!(
                        "{} ≈ {:.3}; least n = {} ({lhs} {rel} bound)\n",
                        rep.bound, rep.approx, rep.least_n
                    )
                }
            }))
        }
        Command::Count { problem, n } => {
            let prob = problem.problem()?;
            let count = count_representations(&prob, n)?;
            let rep = CountReport {
                problem: prob.to_string(),
                n,
                ordered_representations: count,
            };
            Ok(Outcome::ok(match fmt {
                Format::Json => to_json(&rep)?,
                Format::Csv => {
                    csv_line(&["n", "count"].map(String::from))
                        + &csv_line(&[n.to_string(), count.to_string()])
                }
                Format::Text => format!("{count}\n"),
            }))
        }
        Command::Check { .. } => {
            let mut input = String::new();
            io::stdin().read_to_string(&mut input)?;
            let trace: WitnessTrace = serde_json::from_str(&input)
                .map_err(|e| usage(&format!("stdin is not a witness trace: {e}")))?;
            let verdict = trace.check().and_then(|_| {
                let again = trace.replay()?;
                if again != trace.witness {
                    bail_contradiction(&trace)
                } else {
                    Ok(())
                }
            });
            match verdict {
                Ok(()) => Ok(Outcome::ok(format!(
                    "ok: {} = {} at {:?}\n",
                    trace.n,
                    trace.problem,
                    trace.witness.tuple()
                ))),
                Err(e) => Ok(Outcome {
                    body: format!("failed: {e}\n"),
                    refuted: true,
                }),
            }
        }
    }
}

fn bail_contradiction(trace: &WitnessTrace) -> quadrep_core::Result<()> {
    Err(Error::Contradiction(format!(
        "replay of the recorded step does not give {:?}",
        trace.witness.tuple()
    )))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Contradiction(_)) => 1,
        Some(Error::Io(_)) | None => 1,
        Some(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("quadrep: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    let output = cli.output.clone();
    let result = run(cli).and_then(|out| {
        match &output {
            Some(path) => {
                fs::write(path, &out.body).with_context(|| format!("writing {}", path.display()))?
            }
            None => io::stdout().write_all(out.body.as_bytes())?,
        }
        Ok(out.refuted)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("quadrep: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
