//! `cycloform`: representations of integers by cyclotomic binary forms, from the command line.

mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use cycloform::density::{
    average_multiplicity, constants_with, sieve_representable, Form, Method, Variant,
};
use cycloform::minima::{cn, cn_lower_bounds};
use cycloform::represent::{
    enumerate_representations, m_h, m_h_brute_force, representation_reports, representation_tables,
    small_value_triples, unbounded_family, Representation, SmallValueMode,
};
use cycloform::{Budget, Error};

use output::{float, truncated, Envelope, Format};

#[derive(Parser, Debug)]
#[command(
    name = "cycloform",
    version,
    about = "Integers represented by cyclotomic binary forms"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=1024))]
    threads: Option<u64>,
    /// Truncate minima to three decimals, as in the published tables.
    #[arg(long, global = true)]
    paper_precision: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All (n, x, y) with n >= 3 and Φ_n(x, y) = m.
    Repr {
        #[arg(value_parser = parse_count)]
        m: u64,
        #[arg(long, default_value_t = 2)]
        min_height: u64,
    },
    /// Minimum c_n of φ_n over the reals, its minimizer and lower bounds.
    Cn { n: u64 },
    /// Nonzero a_m for m <= max-m.
    Table1 {
        #[arg(long, default_value_t = 20)]
        max_m: u64,
    },
    /// Nonzero b_m for m <= max-m.
    Table2 {
        #[arg(long, default_value_t = 100)]
        max_m: u64,
    },
    /// c_n and t_n for odd squarefree n <= max-n.
    Table3 {
        #[arg(long, default_value_t = 53)]
        max_n: u64,
    },
    /// Every representation of every m <= max-m.
    Table4 {
        #[arg(long, default_value_t = 10)]
        max_m: u64,
    },
    /// Count the integers up to N represented by a form.
    Count {
        #[arg(value_parser = parse_count)]
        n: u64,
        #[arg(long, value_enum, default_value_t = FormArg::All)]
        form: FormArg,
        #[arg(long, value_enum, default_value_t = VariantArg::Restricted)]
        variant: VariantArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Lattice)]
        method: MethodArg,
    },
    /// Density constants from truncated Euler products.
    Constants {
        #[arg(long, value_parser = parse_count, default_value = "10000000")]
        prime_bound: u64,
    },
    /// Average number of representations of the represented integers up to N.
    Multiplicity {
        #[arg(value_parser = parse_count)]
        n: u64,
        #[arg(long, value_parser = parse_count, default_value = "10000000")]
        prime_bound: u64,
    },
    /// Least m represented at height at least h, closed form and search.
    Mh { h: u64 },
    /// Triples of height >= 2 with small values.
    SmallValues {
        #[arg(long, default_value_t = 100)]
        n_max: u64,
        /// Use Φ_n(x, y) <= 2^{θ φ(n)} instead of Φ_n(x, y) < 7^{φ(n)/2}.
        #[arg(long)]
        theta: Option<f64>,
    },
    /// 2^{k_s} with its explicit representations.
    Family { s: u64 },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormArg {
    Phi3,
    Phi4,
    Both,
    Union34,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Tilde,
    Restricted,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Lattice,
    Factorization,
}

/// Accepts `12345`, `10_000_000` and `1e7`.
fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.replace('_', "");
    if let Some((mantissa, exp)) = s.split_once(['e', 'E']) {
        let mantissa: u64 = mantissa.parse().map_err(|e| format!("{e}"))?;
        let exp: u32 = exp.parse().map_err(|e| format!("{e}"))?;
        return 10u64
            .checked_pow(exp)
            .and_then(|p| p.checked_mul(mantissa))
            .ok_or_else(|| "value does not fit in 64 bits".to_string());
    }
    s.parse().map_err(|e| format!("{e}"))
}

mod big {
    use serde_json::Value;

    /// Exact integers become JSON numbers when they fit in 64 bits, strings otherwise.
    pub fn int(v: impl ToString) -> Value {
        let s = v.to_string();
        if let Ok(i) = s.parse::<i64>() {
            Value::from(i)
        } else if let Ok(u) = s.parse::<u64>() {
            Value::from(u)
        } else {
            Value::String(s)
        }
    }
}

fn name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn rep_rows(env: &mut Envelope, reps: &[Representation], with_m: bool) {
    for r in reps {
        let mut row = Vec::new();
        if with_m {
            row.push(big::int(&r.value));
        }
        row.extend([
            Value::from(r.n),
            big::int(&r.x),
            big::int(&r.y),
            big::int(&r.height),
            Value::from(r.degree()),
        ]);
        env.row(row);
    }
}

fn run(cli: &Cli) -> Result<Envelope, Error> {
    let budget = Budget::default();
    let minimum = |x: f64| {
        if cli.paper_precision {
            truncated(x)
        } else {
            float(x)
        }
    };
    Ok(match &cli.command {
        Command::Repr { m, min_height } => {
            if *m == 0 {
                return Err(Error::Domain {
                    op: "repr",
                    reason: "m must be positive".into(),
                });
            }
            let r = enumerate_representations(*m, *min_height)?;
            let mut env = Envelope::new("repr")
                .param("m", *m)
                .param("min_height", *min_height);
            env.summary("m", r.m);
            env.summary("a_m", r.a_m);
            env.summary("b_m", r.b_m);
            env.columns(&["n", "x", "y", "height", "degree"]);
            rep_rows(&mut env, &r.reps, false);
            env
        }
        Command::Cn { n } => {
            let m = cn(*n)?;
            let b = cn_lower_bounds(*n)?;
            let mut env = Envelope::new("cn").param("n", *n);
            env.columns(&[
                "n",
                "c",
                "t",
                "abs_error",
                "core",
                "power",
                "negate",
                "bound_sqrt3",
                "bound_smallest_prime",
            ]);
            env.row(vec![
                Value::from(*n),
                minimum(m.c),
                m.t.map_or(Value::Null, minimum),
                float(m.abs_error),
                Value::from(m.reduction.core_index()),
                Value::from(m.reduction.power),
                Value::from(m.reduction.negate),
                float(b.sqrt3),
                float(b.smallest_prime),
            ]);
            env
        }
        Command::Table1 { max_m } | Command::Table2 { max_m } => {
            let first = matches!(cli.command, Command::Table1 { .. });
            let t = representation_tables(*max_m)?;
            let (label, entries) = if first { ("a_m", t.a) } else { ("b_m", t.b) };
            let mut env =
                Envelope::new(if first { "table1" } else { "table2" }).param("max_m", *max_m);
            env.summary("nonzero", entries.len());
            env.columns(&["m", label]);
            for (m, c) in entries {
                env.row(vec![m.into(), c.into()]);
            }
            env
        }
        Command::Table3 { max_n } => {
            let mut env = Envelope::new("table3").param("max_n", *max_n);
            env.columns(&["n", "c", "t", "abs_error"]);
            for n in (3..=*max_n).step_by(2) {
                let m = cn(n)?;
                if m.core() != Some(n) {
                    continue;
                }
                env.row(vec![
                    n.into(),
                    minimum(m.c),
                    m.t.map_or(Value::Null, minimum),
                    float(m.abs_error),
                ]);
            }
            env
        }
        Command::Table4 { max_m } => {
            let reports = representation_reports(*max_m)?;
            let mut env = Envelope::new("table4").param("max_m", *max_m);
            env.summary("triples", reports.iter().map(|r| r.a_m).sum::<usize>());
            env.columns(&["m", "n", "x", "y", "height", "degree"]);
            for r in &reports {
                rep_rows(&mut env, &r.reps, true);
            }
            env
        }
        Command::Count {
            n,
            form,
            variant,
            method,
        } => {
            let f = match form {
                FormArg::Phi3 => Form::Phi3,
                FormArg::Phi4 => Form::Phi4,
                FormArg::Both => Form::Both,
                FormArg::Union34 => Form::Union34,
                FormArg::All => Form::All,
            };
            let v = match variant {
                VariantArg::Tilde => Variant::Tilde,
                VariantArg::Restricted => Variant::Restricted,
            };
            let me = match method {
                MethodArg::Lattice => Method::Lattice,
                MethodArg::Factorization => Method::Factorization,
            };
            let (set, c) = sieve_representable(*n, f, v, me, &budget)?;
            let mut env = Envelope::new("count")
                .param("n", *n)
                .param("form", name(*form))
                .param("variant", name(*variant))
                .param("method", name(*method));
            env.summary("count", set.count());
            env.summary(
                "ratio_sqrt_log",
                float(set.count() as f64 * (*n as f64).ln().sqrt() / *n as f64),
            );
            env.columns(&["form", "count"]);
            env.row(vec!["phi3".into(), c.count_phi3.into()]);
            env.row(vec!["phi4".into(), c.count_phi4.into()]);
            env.row(vec!["both".into(), c.count_both.into()]);
            env.row(vec!["union34".into(), c.count_union34.into()]);
            if let Some(all) = c.count_all {
                env.row(vec!["all".into(), all.into()]);
            }
            env
        }
        Command::Constants { prime_bound } => {
            let c = constants_with(*prime_bound, &budget)?;
            let mut env = Envelope::new("constants").param("prime_bound", *prime_bound);
            env.columns(&["name", "value", "tail_error"]);
            for (k, v, t) in [
                ("alpha0_3", c.alpha0_3, Some(c.tail_alpha0_3)),
                ("alpha0_4", c.alpha0_4, Some(c.tail_alpha0_4)),
                ("beta0", c.beta0, Some(c.tail_beta0)),
                ("alpha0", c.alpha0, Some(c.tail_alpha0_3 + c.tail_alpha0_4)),
                ("kappa1", c.kappa1, None),
                ("kappa1_lattice", c.kappa1_lattice, None),
            ] {
                env.row(vec![k.into(), float(v), t.map_or(Value::Null, float)]);
            }
            env
        }
        Command::Multiplicity { n, prime_bound } => {
            let m = average_multiplicity(*n, &budget)?;
            let c = constants_with(*prime_bound, &budget)?;
            let mut env = Envelope::new("multiplicity")
                .param("n", *n)
                .param("prime_bound", *prime_bound);
            env.summary("triples", m.triples);
            env.summary("represented", m.represented);
            env.summary("mean", float(m.mean));
            env.summary("mean_over_sqrt_log", float(m.normalized));
            env.summary("kappa1", float(c.kappa1));
            env.summary("kappa1_lattice", float(c.kappa1_lattice));
            env
        }
        Command::Mh { h } => {
            let closed = m_h(*h)?;
            let searched = m_h_brute_force(*h)?;
            let mut env = Envelope::new("mh").param("h", *h);
            env.columns(&["h", "m_h", "search", "verified"]);
            env.row(vec![
                (*h).into(),
                closed.into(),
                searched.into(),
                (closed == searched).into(),
            ]);
            env
        }
        Command::SmallValues { n_max, theta } => {
            let mode = match theta {
                Some(t) => SmallValueMode::Theta(*t),
                None => SmallValueMode::SevenThreshold,
            };
            let list = small_value_triples(*n_max, mode)?;
            let mut env = Envelope::new("small-values")
                .param("n_max", *n_max)
                .param("theta", theta.map_or(Value::Null, float));
            env.summary("triples", list.len());
            env.summary(
                "max_height",
                list.iter()
                    .map(|r| r.height.clone())
                    .max()
                    .map_or(Value::Null, big::int),
            );
            env.columns(&["value", "n", "x", "y", "height", "degree"]);
            rep_rows(&mut env, &list, true);
            env
        }
        Command::Family { s } => {
            let f = unbounded_family(*s, &budget)?;
            let mut env = Envelope::new("family").param("s", *s);
            env.summary("k_s", f.k_s);
            env.summary("m_s", big::int(f.m_s.value()));
            env.summary("witnesses", f.witnesses.len());
            env.summary("b_witnesses", f.b_witnesses);
            env.summary("b_lower_bound", 8 * (s - 1));
            env.columns(&["value", "n", "x", "y", "height", "degree"]);
            rep_rows(&mut env, &f.witnesses, true);
            env
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = cli.threads {
        pool = pool.num_threads(k as usize);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(env) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(env.render(cli.format).as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget() { 3 } else { 2 })
        }
    }
}
