use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use heisenberg_zeta::checks::{run_check, CHECK_NAMES};
use heisenberg_zeta::combinat::Partition;
use heisenberg_zeta::exactalg::json::rational_to_json;
use heisenberg_zeta::oracle::{
    check_factorization, enum_lagrangians, enum_subalgebras, enum_sublattices, lagrangian_total, Budget,
};
use heisenberg_zeta::zeta::{
    dirichlet_coeffs, global_factor, global_factor_eval, reduced_zeta, rn_numeric, zeta_graded, zeta_ideal, zeta_thm_a,
    zeta_thm_b, zeta_thm_c,
};
use heisenberg_zeta::{Error, Poly};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "hzeta", version, about = "Subalgebra zeta functions of higher Heisenberg Lie rings")]
struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the local zeta function in one of its forms.
    Zeta {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Form::B)]
        form: Form,
        #[arg(long, value_enum, default_value_t = Output::Plain)]
        output: Output,
    },
    /// Run identity checks and print a JSON report.
    Verify {
        #[arg(long)]
        n: usize,
        /// Comma-separated subset of crossform,funeq,poles,fibre,residue,reduced.
        #[arg(long, value_delimiter = ',', default_values_t = CHECK_NAMES.map(String::from))]
        checks: Vec<String>,
    },
    /// Dirichlet coefficients a_{p^i} of the local factor.
    Coeffs {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        max_order: u32,
        /// Also count subalgebras by enumeration.
        #[arg(long)]
        oracle: bool,
    },
    /// Brute-force enumeration oracles.
    Oracle {
        #[command(subcommand)]
        which: OracleCmd,
    },
    /// The global factor N_n(X, Y), its evaluation at (p, p^-2n) and R_n.
    Global {
        #[arg(long)]
        n: usize,
        /// Evaluate at (X, Y) = (p, p^-2n).
        #[arg(long)]
        eval: bool,
        /// Estimate R_n from truncated Euler products.
        #[arg(long)]
        rn: bool,
        #[arg(long, default_value_t = 1000)]
        prime_bound: u64,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Lagrangian counts N'(lambda, mu) in M_mu.
    Lagrangian {
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long)]
        prime: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Sublattice counts N(lambda, mu) of Z^2n.
    Sublattice {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        max_val: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check N(lambda, mu) = N'(lambda, mu) alpha_n(mu; p^2).
    Factorization {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        max_val: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long)]
    max_module: Option<u128>,
    #[arg(long)]
    max_matrices: Option<u128>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let d = Budget::default();
        Budget {
            max_module: self.max_module.unwrap_or(d.max_module),
            max_matrices: self.max_matrices.unwrap_or(d.max_matrices),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    A,
    B,
    C,
    Ideal,
    Graded,
    Reduced,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Plain,
    Json,
    Latex,
}

/// What a command produced: text and whether every comparison held.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, ok: true }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn cmd_zeta(n: usize, form: Form, output: Output) -> Result<Outcome, Error> {
    let (f, name) = match form {
        Form::A => (zeta_thm_a(n)?, "a"),
        Form::B => (zeta_thm_b(n)?, "b"),
        Form::C => (zeta_thm_c(n)?, "c"),
        Form::Ideal => (zeta_ideal(n), "ideal"),
        Form::Graded => (zeta_graded(n)?, "graded"),
        Form::Reduced => (reduced_zeta(n)?, "reduced"),
    };
    let text = match output {
        Output::Plain => f.to_plain(),
        Output::Latex => f.to_latex(),
        Output::Json => {
            let mut v = json!({ "version": VERSION, "n": n, "form": name, "zeta": rational_to_json(&f) });
            if let Form::Graded = form {
                v["status"] = json!("EXPERIMENTAL");
            }
            pretty(&v)
        }
    };
    Ok(Outcome::ok(text))
}

fn cmd_verify(n: usize, checks: &[String]) -> Result<Outcome, Error> {
    let mut reports = Vec::new();
    for name in checks {
        reports.push(run_check(name.trim(), n)?);
    }
    let ok = reports.iter().all(|r| r.passed());
    let first_failure = reports.iter().find(|r| !r.passed()).map(|r| r.check.clone());
    let v = json!({ "version": VERSION, "n": n, "pass": ok, "first_failure": first_failure, "reports": reports });
    Ok(Outcome { text: pretty(&v), ok })
}

fn cmd_coeffs(n: usize, prime: u64, max_order: u32, oracle: bool) -> Result<Outcome, Error> {
    let formula = dirichlet_coeffs(n, prime, max_order)?;
    let counted = if oracle { Some(enum_subalgebras(n, prime, max_order, &Budget::default())?) } else { None };
    let mut lines = vec![if oracle { "i\tformula\toracle\tagree".to_string() } else { "i\tformula".to_string() }];
    let mut ok = true;
    for (i, a) in formula.iter().enumerate() {
        match &counted {
            Some(c) => {
                let agree = *a == c[i].into();
                ok &= agree;
                lines.push(format!("{i}\t{a}\t{}\t{}", c[i], if agree { "yes" } else { "NO" }));
            }
            None => lines.push(format!("{i}\t{a}")),
        }
    }
    Ok(Outcome { text: lines.join("\n"), ok })
}

fn cmd_oracle(which: &OracleCmd) -> Result<Outcome, Error> {
    match which {
        OracleCmd::Lagrangian { mu, prime, budget } => {
            let mu: Partition = mu.parse()?;
            let counts = enum_lagrangians(&mu, *prime, &budget.budget())?;
            let rows: Vec<Value> = counts
                .iter()
                .map(|(l, c)| json!({ "lambda": l.to_string(), "mu": mu.to_string(), "p": prime, "count": c.to_string() }))
                .collect();
            let total = lagrangian_total(&counts);
            Ok(Outcome::ok(pretty(&json!({ "version": VERSION, "rows": rows, "total": total.to_string() }))))
        }
        OracleCmd::Sublattice { n, prime, max_val, budget } => {
            let counts = enum_sublattices(*n, *prime, *max_val, &budget.budget())?;
            let rows: Vec<Value> = counts
                .iter()
                .map(|((l, m), c)| json!({ "lambda": l.to_string(), "mu": m.to_string(), "p": prime, "count": c.to_string() }))
                .collect();
            Ok(Outcome::ok(pretty(&json!({ "version": VERSION, "rows": rows }))))
        }
        OracleCmd::Factorization { n, prime, max_val, budget } => {
            let rows = check_factorization(*n, *prime, *max_val, &budget.budget())?;
            let ok = rows.iter().all(|r| r.holds());
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "lambda": r.lambda.to_string(),
                        "mu": r.mu.to_string(),
                        "p": r.p,
                        "count": r.lattices.to_string(),
                        "lagrangians": r.lagrangians.to_string(),
                        "alpha": r.alpha.to_string(),
                        "holds": r.holds(),
                    })
                })
                .collect();
            Ok(Outcome { text: pretty(&json!({ "version": VERSION, "pass": ok, "rows": rows })), ok })
        }
    }
}

/// Terms of a `p`-only polynomial in descending order of the exponent.
fn descending(p: &Poly) -> String {
    let mut terms: Vec<(i64, String)> = p.terms().map(|(c, e, _)| (e, c.to_string())).collect();
    terms.sort_by(|a, b| b.0.cmp(&a.0));
    let mut s = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, c.as_str()),
        };
        if i > 0 {
            s.push_str(if neg { " \u{2212} " } else { " + " });
        } else if neg {
            s.push('\u{2212}');
        }
        let coeff = if mag == "1" && *e != 0 { String::new() } else { mag.to_string() };
        let power = match e {
            0 => String::new(),
            1 => "p".into(),
            e => format!("p^{e}"),
        };
        s.push_str(&[coeff, power].iter().filter(|x| !x.is_empty()).cloned().collect::<Vec<_>>().join(" "));
    }
    s
}

fn cmd_global(n: usize, eval: bool, rn: bool, prime_bound: u64) -> Result<Outcome, Error> {
    let mut lines = vec![format!("N_{n}(X, Y) = {}", global_factor(n)?.to_plain_in("X", "Y"))];
    if eval {
        lines.push(format!("N_{n}(p, p^-{}) = {}", 2 * n, descending(&global_factor_eval(n)?)));
    }
    if rn {
        let r = rn_numeric(n, prime_bound)?;
        lines.push(format!(
            "R_{n} ~ {:.12} ({}, primes <= {}, change from half the bound {:.3e})",
            r.value, r.label, r.prime_bound, r.delta_half_bound
        ));
    }
    Ok(Outcome::ok(lines.join("\n")))
}

/// 1 for a failed identity, 2 for usage, guard and budget errors.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::IdentityMismatch(_)
        | Error::FactorizationMismatch { .. }
        | Error::FunctionalEquationFailure(_)
        | Error::NonPolynomialReduction => 1,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.cmd {
        Cmd::Zeta { n, form, output } => cmd_zeta(*n, *form, *output),
        Cmd::Verify { n, checks } => cmd_verify(*n, checks),
        Cmd::Coeffs { n, prime, max_order, oracle } => cmd_coeffs(*n, *prime, *max_order, *oracle),
        Cmd::Oracle { which } => cmd_oracle(which),
        Cmd::Global { n, eval, rn, prime_bound } => cmd_global(*n, *eval, *rn, *prime_bound),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = out.text + "\n";
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, text) {
                        eprintln!("error: cannot write {path}: {e}");
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
