use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use metriclat::io::{read_json, write_reports, Format, KernelJson};
use metriclat::models::LoadedModel;
use metriclat::sweep::{par_eval, pool};
use metriclat::verify::{estimate_constant, run_all, run_check, NRange, Params};
use metriclat_core::kernels::{
    classify_eigen, classify_mobius, cnd_test, fkg_check, metric_from_cnd, totally_p_nonnegative, wilf_identity_holds,
    KernelFunction,
};
use metriclat_core::logic::{builtin, parse_formula, Compiled};
use metriclat_core::partition::{
    bjorner_embed, bjorner_pairing, enumerate_partitions, enumerate_singular, format_partition, format_pi, gamma,
    hausdorff_brute_force, hausdorff_selectors, parse_partition, parse_pi, partition_metric, psi_min_distance,
    selectors,
};
use metriclat_core::rational::{fmt_rational, parse_rational};

#[derive(Parser)]
#[command(name = "metriclat", version, about = "Exact computations on finite metric lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Worker threads; 0 means one per core.
    #[arg(long, env = "METRICLAT_JOBS", default_value_t = 0, global = true)]
    jobs: usize,
    #[arg(long, global = true)]
    output: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// List the partitions of {1..n}, one per line.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Only singular partitions (at most one non-singleton block).
        #[arg(long)]
        singular: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a sentence on a model.
    Eval {
        /// pn:<n>, bool:<n>, nc:<n>, file:<path> or flats:<path>.
        #[arg(long)]
        model: String,
        #[arg(long, conflicts_with_all = ["formula_file", "builtin"])]
        formula: Option<String>,
        #[arg(long, conflicts_with = "builtin")]
        formula_file: Option<String>,
        /// A named sentence, e.g. sigma_mod.
        #[arg(long)]
        builtin: Option<String>,
        /// Values of free variables as name=label.
        #[arg(long = "assign")]
        assign: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a check (C1..C25) or `all`.
    Check {
        id: String,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Largest observed ratio for C5, C11, C12 or C16.
    Constant {
        id: String,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        common: Common,
    },
    /// γ(x,y), the fewest extra blocks any selector of y needs to meet a selector of x.
    Gamma {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        common: Common,
    },
    /// Hausdorff distance between the selector sets of x and y.
    Hausdorff {
        #[command(flatten)]
        pair: Pair,
        /// Also compare with the definitional maximum over selector pairs.
        #[arg(long)]
        brute: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Image of x ∈ Π_n under φ_n^{kn}; blocks are over {0..n}.
    Bjorner {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Classify the kernel (x,y) ↦ f(x+y) on a model.
    Kernels {
        #[arg(long)]
        model: String,
        /// Comma-separated values "p/q", one per element in model order.
        #[arg(long, conflicts_with = "file")]
        values: Option<String>,
        /// JSON file {"values": [...]}.
        #[arg(long)]
        file: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// A size `n` or range `a..b`.
    #[arg(long, alias = "n-range")]
    n: Option<NRange>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Allow sizes beyond the default limits.
    #[arg(long)]
    deep: bool,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    k: Option<i64>,
    /// Cap on planned instances.
    #[arg(long)]
    budget: Option<u64>,
    /// Record wall-clock time in reports.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Clone)]
struct Pair {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
}

impl Common {
    fn sink(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.output {
            Some(path) => Box::new(BufWriter::new(File::create(path).with_context(|| format!("creating {path}"))?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn params(run: &RunArgs, common: &Common) -> Params {
    Params {
        n: run.n,
        seed: run.seed,
        deep: run.deep,
        samples: run.samples,
        k: run.k,
        budget: run.budget,
        timing: run.timing,
        jobs: common.jobs,
    }
}

/// Failure of a check, as opposed to a usage error.
struct Failed;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failed)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command) -> Result<Result<(), Failed>> {
    match command {
        Command::Enumerate { n, singular, common } => {
            let mut out = common.sink()?;
            if singular {
                for x in enumerate_singular(n) {
                    writeln!(out, "{}", format_partition(&x))?;
                }
            } else {
                for x in enumerate_partitions(n) {
                    writeln!(out, "{}", format_partition(&x))?;
                }
            }
            out.flush()?;
        }
        Command::Eval { model, formula, formula_file, builtin: name, assign, common } => {
            let loaded = LoadedModel::parse(&model)?;
            let f = match (formula, formula_file, name) {
                (Some(text), _, _) => parse_formula(&text)?,
                (_, Some(path), _) => {
                    parse_formula(&std::fs::read_to_string(&path).with_context(|| format!("reading {path}"))?)?
                }
                (_, _, Some(name)) => builtin(&name)?.formula,
                _ => bail!("one of --formula, --formula-file or --builtin is required"),
            };
            let m = loaded.model();
            let l = loaded.lattice();
            let mut names = Vec::new();
            let mut values = Vec::new();
            for a in &assign {
                let (name, label) = a.split_once('=').with_context(|| format!("--assign {a:?} is not name=label"))?;
                let v = l.index_of(label).with_context(|| format!("no element labelled {label:?} in {model}"))?;
                names.push(name);
                values.push(v);
            }
            if let Some(v) = f.free_vars().iter().find(|v| !names.contains(&v.as_str())) {
                bail!("free variable {v} needs --assign {v}=<label>");
            }
            let c = Compiled::new(&f, &names, &m)?;
            let value = pool(common.jobs).install(|| par_eval(&c, &m, &values))?;
            let mut out = common.sink()?;
            writeln!(out, "{}", fmt_rational(&value))?;
            out.flush()?;
        }
        Command::Check { id, run, common } => {
            let p = params(&run, &common);
            let reports = if id.eq_ignore_ascii_case("all") {
                run_all(&p)?
            } else {
                vec![run_check(&id, &p)?]
            };
            let mut out = common.sink()?;
            write_reports(&reports, common.format, &mut out)?;
            out.flush()?;
            if !reports.iter().all(|r| r.passed()) {
                return Ok(Err(Failed));
            }
        }
        Command::Constant { id, run, common } => {
            let e = estimate_constant(&id, &params(&run, &common))?;
            let mut out = common.sink()?;
            match common.format {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(["check_id", "n", "value", "bound", "witness", "instances"])?;
                    w.write_record([
                        e.check_id.clone(),
                        e.n.clone(),
                        fmt_rational(&e.value),
                        fmt_rational(&e.bound),
                        e.witness.clone(),
                        e.instances.to_string(),
                    ])?;
                    w.flush()?;
                }
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&e)?)?,
            }
            out.flush()?;
        }
        Command::Gamma { pair, common } => {
            let (x, y) = (parse_partition(&pair.x, pair.n)?, parse_partition(&pair.y, pair.n)?);
            let mut out = common.sink()?;
            writeln!(out, "γ={}", gamma(&x, &y)?)?;
            writeln!(out, "γ_reverse={}", gamma(&y, &x)?)?;
            writeln!(out, "d_Haus={}", fmt_rational(&hausdorff_selectors(&x, &y)?))?;
            out.flush()?;
        }
        Command::Hausdorff { pair, brute, common } => {
            let (x, y) = (parse_partition(&pair.x, pair.n)?, parse_partition(&pair.y, pair.n)?);
            let h = hausdorff_selectors(&x, &y)?;
            let mut out = common.sink()?;
            writeln!(out, "|Γ(x)|={}", selectors(&x).len())?;
            writeln!(out, "|Γ(y)|={}", selectors(&y).len())?;
            writeln!(out, "d={}", fmt_rational(&partition_metric(&x, &y)?))?;
            writeln!(out, "d_Haus={}", fmt_rational(&h))?;
            if brute {
                let b = hausdorff_brute_force(&x, &y)?;
                writeln!(out, "d_Haus_brute={}", fmt_rational(&b))?;
                if b != h {
                    out.flush()?;
                    return Ok(Err(Failed));
                }
            }
            out.flush()?;
        }
        Command::Bjorner { n, x, k, common } => {
            let pi = parse_pi(&x, n)?;
            let img = bjorner_embed(&pi, k)?;
            let mut out = common.sink()?;
            writeln!(out, "image={}", format_pi(&img))?;
            if k == 2 {
                let z = bjorner_pairing(n);
                writeln!(out, "pairing={}", format_pi(&z))?;
                writeln!(out, "d(image,pairing)={}", fmt_rational(&psi_min_distance(&[img], &z)?))?;
            }
            out.flush()?;
        }
        Command::Kernels { model, values, file, common } => {
            let loaded = LoadedModel::parse(&model)?;
            let l = loaded.lattice();
            let vals = match (values, file) {
                (Some(text), _) => {
                    text.split(',').map(|v| parse_rational(v.trim())).collect::<Result<Vec<_>, _>>()?
                }
                (_, Some(path)) => read_json::<KernelJson>(&path)?.values()?,
                _ => bail!("one of --values or --file is required"),
            };
            let f = KernelFunction::from_rationals(l, &vals)?;
            let (eigen, lambda) = classify_eigen(&f);
            let mut out = common.sink()?;
            writeln!(out, "wilf={}", wilf_identity_holds(&f))?;
            writeln!(out, "mobius={:?}", classify_mobius(&f))?;
            writeln!(out, "eigen={eigen:?} min_eigenvalue={lambda:e}")?;
            writeln!(out, "cnd={}", cnd_test(&f))?;
            if let Ok(m) = metric_from_cnd(&f) {
                writeln!(out, "exp_neg_pd={} semilattice_violation={:?}", m.exp_neg_pd, m.violation)?;
            }
            writeln!(out, "tp3={}", totally_p_nonnegative(&f, 3).is_ok())?;
            writeln!(out, "fkg={}", fkg_check(&f).is_ok())?;
            out.flush()?;
        }
    }
    Ok(Ok(()))
}
