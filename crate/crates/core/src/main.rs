use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use obf_core::certfile;
use obf_core::numtheory::{classify_prime, is_prime, PrimeClassification};
use obf_core::solver::{
    solve, solve_prescribed_with_hamilton, verify_certificate, SolverConfig, Verdict,
};
use obf_core::two_factors::{
    cycles_of, j123_c3, j123_cycle, j134_c8, j134_c8_triple, j134_cycle, JGadget, TwoFactorError,
    DEFAULT_BUDGET,
};
use obf_core::{Certificate, CycleType, ProblemSpec, Status};

const EXIT_USAGE: u8 = 2;
const EXIT_NO_SOLUTION: u8 = 3;
const EXIT_UNSUPPORTED: u8 = 4;

/// Oberwolfach 2-factorisations via circulant factorisations.
#[derive(Parser)]
#[command(name = "obf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number-theoretic classification of a prime, or list a class.
    Classify(ClassifyArgs),
    /// Solve a problem and write its certificate.
    Solve(SolveArgs),
    /// Check a certificate file.
    Verify {
        /// Certificate written by `solve`.
        path: PathBuf,
    },
    /// Print and self-check a building-block gadget.
    Gadget(GadgetArgs),
    /// Solve and verify every cycle type of one order.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// Prime to classify.
    #[arg(required_unless_present = "list", conflicts_with = "list")]
    p: Option<u64>,
    /// List the primes of a class.
    #[arg(long, value_enum, requires = "below")]
    list: Option<PrimeList>,
    /// Exclusive upper bound for `--list`.
    #[arg(long)]
    below: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrimeList {
    /// 2 and 3 non-cubes, 6 a cube: `K_p` splits into `±{1,2,3}` circulants.
    #[value(name = "pm123", alias = "theorem3")]
    Pm123,
    /// 2, 3 and 6 non-cubes: `K_p` splits into `±{1,3,4}` circulants.
    #[value(name = "pm134", alias = "theorem4")]
    Pm134,
}

#[derive(Args)]
struct SolveArgs {
    /// Order of the complete graph.
    #[arg(long, group = "problem", requires = "cycles")]
    op: Option<u32>,
    /// `LAMBDA,P` for the multigraph `LAMBDA K_P`.
    #[arg(long, group = "problem", requires = "cycles", value_name = "LAMBDA,P")]
    multigraph: Option<String>,
    /// File with one cycle type per line; a copy of each plus Hamilton cycles.
    #[arg(long, group = "problem", value_name = "FILE")]
    prescribed: Option<PathBuf>,
    /// Cycle lengths of F, comma separated.
    #[arg(long)]
    cycles: Option<String>,
    /// Write the certificate here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArg,
}

#[derive(Args)]
struct BudgetArg {
    /// Node limit for each backtracking search.
    #[arg(long, env = "OBF_SEARCH_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetFlavor {
    J123,
    J134,
}

#[derive(Args)]
struct GadgetArgs {
    #[arg(value_enum)]
    flavor: GadgetFlavor,
    /// Order parameter of the gadget.
    m: u32,
    /// Triangle plus an (m-3)-cycle.
    #[arg(long, conflicts_with_all = ["c8", "triple"])]
    c3: bool,
    /// Octagon plus an (m-8)-cycle.
    #[arg(long, conflicts_with = "triple")]
    c8: bool,
    /// Three octagons.
    #[arg(long)]
    triple: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Order whose cycle types are swept.
    #[arg(long)]
    op: u32,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Also write each certificate into this directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArg,
}

macro_rules! out {
    ($($arg:tt)*) => { write_stdout(&format!($($arg)*)) };
}

macro_rules! outln {
    ($($arg:tt)*) => { write_stdout(&format!("{}\n", format_args!($($arg)*))) };
}

/// Writes to standard output. A closed pipe is not an error: the command
/// still finishes and reports its own exit code.
fn write_stdout(text: &str) {
    let mut stdout = std::io::stdout().lock();
    match stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush())
    {
        Ok(()) => {}
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
        Err(e) => {
            eprintln!("error: writing standard output: {e}");
            std::process::exit(i32::from(EXIT_USAGE));
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Classify(args) => classify(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Verify { path } => Ok(verify(&path)),
        Command::Gadget(args) => gadget(args),
        Command::Sweep(args) => sweep(args),
    }
}

fn classify(args: ClassifyArgs) -> Result<ExitCode> {
    if let Some(list) = args.list {
        let below = args.below.expect("clap requires --below");
        let mut primes = Vec::new();
        for p in (7..below).filter(|&p| is_prime(p)) {
            let c = classify_prime(p)?;
            let hit = match list {
                PrimeList::Pm123 => c.is_pm123_class(),
                PrimeList::Pm134 => c.is_pm134_class(),
            };
            if hit {
                primes.push(p.to_string());
            }
        }
        outln!("{}", primes.join(", "));
        return Ok(ExitCode::SUCCESS);
    }
    let p = args.p.expect("clap requires P");
    if p < 3 || !is_prime(p) {
        bail!("{p} is not an odd prime");
    }
    out!("{}", report(&classify_prime(p)?));
    Ok(ExitCode::SUCCESS)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn report(c: &PrimeClassification) -> String {
    let mut out = format!(
        "p: {}\nclass: {}\np mod 6: {}\np mod 8: {}\n",
        c.p,
        c.class_label(),
        c.residue_mod_6,
        c.residue_mod_8
    );
    match c.cube_status {
        Some(s) => {
            out += &format!(
                "cube status: 2 {}, 3 {}, 6 {}\n",
                if s.two { "cube" } else { "non-cube" },
                if s.three { "cube" } else { "non-cube" },
                if s.six { "cube" } else { "non-cube" }
            );
        }
        None => out += "cube status: n/a\n",
    }
    match c.t_signature {
        Some((a, b)) => out += &format!("t signature: ({a},{b})\n"),
        None => out += "t signature: n/a\n",
    }
    match (c.p % 4, c.quartic_run_witness) {
        (1, Some(x)) => out += &format!("quartic run witness: {x}\n"),
        (1, None) => out += "quartic run witness: none\n",
        _ => out += "quartic run witness: n/a\n",
    }
    out += &format!(
        "mixed ±{{1,2,3}}/±{{1,2,3,4}} class: {}\n",
        yes_no(c.mixed_class)
    );
    if let Some(d) = c.mixed_run_length {
        out += &format!("mixed run length: {d}\n");
    }
    out += &format!(
        "K_2p - I into ±{{1,2,3,4}}: {}\n",
        yes_no(c.is_dihedral_1234_class() && c.p != 13)
    );
    out
}

fn parse_cycles(text: &str) -> Result<CycleType> {
    let lengths = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .with_context(|| format!("bad cycle length {s:?}"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CycleType::new(lengths)?)
}

fn read_prescribed(path: &Path) -> Result<Vec<CycleType>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_cycles)
        .collect()
}

fn status_code(status: &Status) -> ExitCode {
    match status {
        Status::Solved => ExitCode::SUCCESS,
        Status::NoSolution(_) => ExitCode::from(EXIT_NO_SOLUTION),
        Status::Unsupported(_) => ExitCode::from(EXIT_UNSUPPORTED),
    }
}

fn describe(cert: &Certificate) -> String {
    match &cert.status {
        Status::Solved => format!("{}: solved", cert.spec),
        Status::NoSolution(r) => format!("{}: no solution ({r})", cert.spec),
        Status::Unsupported(r) => format!("{}: unsupported ({r})", cert.spec),
    }
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode> {
    let config = SolverConfig {
        budget: args.budget.budget,
    };
    let cert = if let Some(path) = &args.prescribed {
        let types = read_prescribed(path)?;
        let first = types
            .first()
            .ok_or_else(|| anyhow!("no cycle types in {}", path.display()))?;
        if first.order() % 2 == 1 {
            bail!("prescribed types must have even order 2p");
        }
        solve_prescribed_with_hamilton(first.order() / 2, &types, &config)?
    } else {
        let f = parse_cycles(
            args.cycles
                .as_deref()
                .ok_or_else(|| anyhow!("--cycles is required"))?,
        )?;
        let spec = if let Some(n) = args.op {
            if f.order() != n {
                bail!("cycle lengths sum to {}, not {n}", f.order());
            }
            ProblemSpec::op(f)
        } else if let Some(mg) = &args.multigraph {
            let (lambda, p) = mg
                .split_once(',')
                .ok_or_else(|| anyhow!("--multigraph expects LAMBDA,P"))?;
            ProblemSpec::multigraph(lambda.trim().parse()?, p.trim().parse()?, f)?
        } else {
            bail!("one of --op, --multigraph or --prescribed is required");
        };
        solve(&spec, &config)?
    };
    let text = certfile::emit(&cert);
    match &args.out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?
        }
        None => out!("{text}"),
    }
    eprintln!("{}", describe(&cert));
    Ok(status_code(&cert.status))
}

fn verify(path: &Path) -> ExitCode {
    let parsed = fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|t| certfile::parse(&t).map_err(|e| e.to_string()));
    let cert = match parsed {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match verify_certificate(&cert) {
        Verdict::Valid => {
            outln!("valid: {}", describe(&cert));
            ExitCode::SUCCESS
        }
        Verdict::Invalid { check, detail } => {
            outln!("invalid: {check}: {detail}");
            ExitCode::FAILURE
        }
    }
}

fn print_gadget(g: &JGadget) {
    outln!(
        "{} gadget, m = {}, cycle type {}",
        g.flavor(),
        g.m(),
        g.cycle_type()
    );
    for (k, part) in g.parts().iter().enumerate() {
        let cycles: Vec<String> = cycles_of(part)
            .iter()
            .map(|c| {
                let vs: Vec<String> = c.iter().map(u32::to_string).collect();
                format!("({})", vs.join(" "))
            })
            .collect();
        outln!("H{}: {}", k + 1, cycles.join(" "));
    }
    outln!("check: ok (edge partition, 2-regular, omitted vertices, common cycle type)");
}

fn gadget(args: GadgetArgs) -> Result<ExitCode> {
    let built = match (args.flavor, args.c3, args.c8, args.triple) {
        (GadgetFlavor::J123, false, false, false) => j123_cycle(args.m),
        (GadgetFlavor::J123, true, _, _) => j123_c3(args.m),
        (GadgetFlavor::J134, false, false, false) => j134_cycle(args.m),
        (GadgetFlavor::J134, _, true, _) => j134_c8(args.m),
        (GadgetFlavor::J134, _, _, true) if args.m == 24 => j134_c8_triple(),
        (GadgetFlavor::J134, _, _, true) => Err(TwoFactorError::Unsupported {
            what: "j134 three octagons",
            m: args.m,
            range: "m = 24",
        }),
        (GadgetFlavor::J123, ..) => bail!("j123 gadgets have no octagon variants"),
        (GadgetFlavor::J134, true, ..) => bail!("j134 gadgets have no triangle variant"),
    };
    match built {
        Ok(g) => {
            print_gadget(&g);
            Ok(ExitCode::SUCCESS)
        }
        Err(e @ TwoFactorError::Unsupported { .. }) => {
            eprintln!("unsupported: {e}");
            Ok(ExitCode::from(EXIT_UNSUPPORTED))
        }
        Err(e) => Err(e.into()),
    }
}

fn sweep(args: SweepArgs) -> Result<ExitCode> {
    let config = SolverConfig {
        budget: args.budget.budget,
    };
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()?;
    let types = CycleType::all_of_order(args.op);
    let rows: Vec<Result<(String, bool)>> = pool.install(|| {
        types
            .par_iter()
            .map(|f| {
                let cert = solve(&ProblemSpec::op(f.clone()), &config)?;
                let verdict = verify_certificate(&cert);
                if let Some(dir) = &args.out_dir {
                    let name = f
                        .lengths()
                        .iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join("-");
                    fs::write(dir.join(format!("op-{name}.json")), certfile::emit(&cert))?;
                }
                let check = match &verdict {
                    Verdict::Valid => "valid".to_string(),
                    Verdict::Invalid { check, .. } => format!("INVALID ({check})"),
                };
                Ok((
                    format!("{f}\t{}\t{check}", cert.status.label()),
                    verdict.is_valid(),
                ))
            })
            .collect()
    });
    let mut all_valid = true;
    for row in rows {
        let (line, ok) = row?;
        all_valid &= ok;
        outln!("{line}");
    }
    Ok(if all_valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
