//! Command-line dispatcher.
//!
//! Exit codes: 0 success, 1 parse/usage error, 2 precondition violation,
//! 3 identity-check failure. Errors are reported as one structured line
//! `error: <Kind>: <detail>` on the error stream.

use clap::{Parser, Subcommand};

use super::parse::{parse_connection, parse_form_expr, parse_invpoly};
use super::print::{print_cycle, print_form, print_matrix};
use super::{ConnectionSpec, ParseError};
use crate::error::Error;
use crate::homotopy::{primitive, PrimitiveOutcome};
use crate::invariants::chern_weil;
use crate::logres::{cs_residue_check, gamma_chern, gamma_newton, gamma_set, residue_matrix, ChernConvention};
use crate::matform::{curvature, gauge, is_flat};
use crate::scalar::Var;
use crate::selftest;
use crate::transgression::{rigidity_identity_check, transgress};

#[derive(Parser, Debug)]
#[command(
    name = "cskernel",
    about = "Exact symbolic kernel for connection matrices: curvature, Chern-Weil forms, transgression classes, primitives and log residues",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the curvature matrix F(A) = dA - A^2.
    Curvature {
        #[arg(long)]
        input: String,
    },
    /// Decide flatness: prints `true` or `false`.
    Flat {
        #[arg(long)]
        input: String,
    },
    /// Apply the file's gauge pair: prints dg.g^{-1} + g A g^{-1}.
    Gauge {
        #[arg(long)]
        input: String,
    },
    /// Print the Chern-Weil form P(F(A)).
    Cw {
        #[arg(long)]
        input: String,
        /// Invariant polynomial, e.g. `p2`, `e2`, `p1*p2 - 2*p3`.
        #[arg(long)]
        inv: String,
    },
    /// Print the transgression form TP(A).
    Cs {
        #[arg(long)]
        input: String,
        #[arg(long)]
        inv: String,
    },
    /// Find a primitive of a closed polynomial form.
    Primitive {
        #[arg(long)]
        input: String,
        /// Form expression over the file's variables.
        #[arg(long)]
        form: String,
    },
    /// Residue matrix along a divisor, or the residue-exactness pipeline.
    Residue {
        #[arg(long)]
        input: String,
        /// Log variable cutting out the divisor.
        #[arg(long)]
        along: String,
        /// `cs:N`: take the residue of the degree-N transgression class and
        /// verify a primitive for it on the divisor.
        #[arg(long)]
        of: Option<String>,
    },
    /// Newton and Chern classes of the residue matrices.
    Gamma {
        #[arg(long)]
        input: String,
        #[arg(long)]
        degree: u32,
        #[arg(long, value_parser = ["standard", "paper"], default_value = "standard")]
        convention: String,
    },
    /// Check the rigidity polynomial identity for one degree.
    Rigidity {
        #[arg(long)]
        n: u32,
    },
    /// Run the seeded identity suites.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
    /// Parse a form expression and print its canonical text.
    Print {
        #[arg(long)]
        input: String,
        #[arg(long)]
        form: String,
    },
}

/// Captured run of the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn usage_outcome(msg: String) -> Outcome {
    Outcome {
        code: 1,
        stdout: String::new(),
        stderr: msg,
    }
}

fn kernel_exit_code(e: &Error) -> i32 {
    if e.is_identity_failure() {
        3
    } else {
        2
    }
}

fn error_outcome_kernel(e: &Error) -> Outcome {
    Outcome {
        code: kernel_exit_code(e),
        stdout: String::new(),
        stderr: format!("error: {}: {e}\n", e.kind()),
    }
}

fn error_outcome_parse(e: &ParseError) -> Outcome {
    let code = match e {
        ParseError::Kernel(k) => kernel_exit_code(k),
        _ => 1,
    };
    Outcome {
        code,
        stdout: String::new(),
        stderr: format!("error: {}: {e}\n", e.kind()),
    }
}

fn precondition_outcome(kind: &str, msg: &str) -> Outcome {
    Outcome {
        code: 2,
        stdout: String::new(),
        stderr: format!("error: {kind}: {msg}\n"),
    }
}

fn ok(stdout: String) -> Outcome {
    Outcome {
        code: 0,
        stdout,
        stderr: String::new(),
    }
}

fn load(input: &str) -> Result<ConnectionSpec, Outcome> {
    let text = std::fs::read_to_string(input).map_err(|e| Outcome {
        code: 1,
        stdout: String::new(),
        stderr: format!("error: Io: cannot read '{input}': {e}\n"),
    })?;
    parse_connection(&text).map_err(|e| error_outcome_parse(&e))
}

fn resolve_logvar(spec: &ConnectionSpec, name: &str) -> Result<Var, Outcome> {
    let v = spec.table.index_of(name).ok_or_else(|| {
        error_outcome_parse(&ParseError::UnknownVariable {
            name: name.into(),
            line: 0,
            col: 0,
        })
    })?;
    if !spec.connection.is_logvar(v) {
        return Err(error_outcome_kernel(&Error::NotLogVariable(v)));
    }
    Ok(v)
}

/// Run the CLI on pre-split arguments (without the program name).
pub fn run(args: Vec<String>) -> Outcome {
    let mut argv = vec!["cskernel".to_string()];
    argv.extend(args);
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own message; help/version requests are success
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ok(rendered),
                _ => usage_outcome(rendered),
            };
        }
    };
    match dispatch(cli.cmd) {
        Ok(out) => out,
        Err(out) => out,
    }
}

fn dispatch(cmd: Cmd) -> Result<Outcome, Outcome> {
    match cmd {
        Cmd::Curvature { input } => {
            let spec = load(&input)?;
            let f = curvature(spec.connection.matrix()).map_err(|e| error_outcome_kernel(&e))?;
            Ok(ok(format!("{}\n", print_matrix("F", &f, &spec.table))))
        }
        Cmd::Flat { input } => {
            let spec = load(&input)?;
            let flat = is_flat(spec.connection.matrix()).map_err(|e| error_outcome_kernel(&e))?;
            Ok(ok(format!("{flat}\n")))
        }
        Cmd::Gauge { input } => {
            let spec = load(&input)?;
            let (g, ginv) = match spec.connection.gauge() {
                Some(pair) => pair,
                None => {
                    return Err(precondition_outcome(
                        "MissingGauge",
                        "the connection file declares no gauge pair",
                    ))
                }
            };
            let out = gauge(spec.connection.matrix(), g, ginv)
                .map_err(|e| error_outcome_kernel(&e))?;
            Ok(ok(format!("{}\n", print_matrix("A", &out, &spec.table))))
        }
        Cmd::Cw { input, inv } => {
            let spec = load(&input)?;
            let p = parse_invpoly(&inv).map_err(|e| error_outcome_parse(&e))?;
            let cw = chern_weil(spec.connection.matrix(), &p)
                .map_err(|e| error_outcome_kernel(&e))?;
            Ok(ok(format!("{}\n", print_form(&cw, &spec.table))))
        }
        Cmd::Cs { input, inv } => {
            let spec = load(&input)?;
            let p = parse_invpoly(&inv).map_err(|e| error_outcome_parse(&e))?;
            let tp = transgress(spec.connection.matrix(), &p)
                .map_err(|e| error_outcome_kernel(&e))?;
            Ok(ok(format!("{}\n", print_form(&tp.form, &spec.table))))
        }
        Cmd::Primitive { input, form } => {
            let spec = load(&input)?;
            let w =
                parse_form_expr(&form, &spec.table, 1, 1).map_err(|e| error_outcome_parse(&e))?;
            match primitive(&w).map_err(|e| error_outcome_kernel(&e))? {
                PrimitiveOutcome::Witness(wit) => {
                    Ok(ok(format!("{}\n", print_form(&wit.primitive, &spec.table))))
                }
                PrimitiveOutcome::NotClosed { differential } => Err(precondition_outcome(
                    "NotClosed",
                    &format!(
                        "the form is not closed; d(form) = {}",
                        print_form(&differential, &spec.table)
                    ),
                )),
            }
        }
        Cmd::Residue { input, along, of } => {
            let spec = load(&input)?;
            let s = resolve_logvar(&spec, &along)?;
            match of {
                None => {
                    let g = residue_matrix(&spec.connection, s)
                        .map_err(|e| error_outcome_kernel(&e))?;
                    Ok(ok(format!("{}\n", print_matrix("Gamma", &g, &spec.table))))
                }
                Some(of) => {
                    let n: u32 = match of.strip_prefix("cs:").and_then(|s| s.parse().ok()) {
                        Some(n) if n >= 2 => n,
                        _ => {
                            return Err(usage_outcome(format!(
                                "error: Usage: '--of {of}' is not of the form 'cs:N' with N >= 2\n"
                            )))
                        }
                    };
                    let wit = cs_residue_check(&spec.connection, n, s)
                        .map_err(|e| error_outcome_kernel(&e))?;
                    Ok(ok(format!(
                        "residue = {}\nprimitive = {}\n",
                        print_form(&wit.target, &spec.table),
                        print_form(&wit.primitive, &spec.table)
                    )))
                }
            }
        }
        Cmd::Gamma {
            input,
            degree,
            convention,
        } => {
            if degree < 1 {
                return Err(usage_outcome(
                    "error: Usage: --degree must be at least 1\n".into(),
                ));
            }
            let spec = load(&input)?;
            let conv = match convention.as_str() {
                "paper" => ChernConvention::Paper,
                _ => ChernConvention::Standard,
            };
            let gamma = gamma_set(&spec.connection).map_err(|e| error_outcome_kernel(&e))?;
            let newton = gamma_newton(&gamma, degree).map_err(|e| error_outcome_kernel(&e))?;
            let chern = gamma_chern(&gamma, degree, conv).map_err(|e| error_outcome_kernel(&e))?;
            let divisors: Vec<Var> = gamma.divisors.iter().map(|&(s, _)| s).collect();
            Ok(ok(format!(
                "N{degree} = {}\nc{degree} = {}\n",
                print_cycle(&newton, &divisors, &spec.table),
                print_cycle(&chern, &divisors, &spec.table)
            )))
        }
        Cmd::Rigidity { n } => {
            if n < 2 {
                return Err(usage_outcome(
                    "error: Usage: --n must be at least 2\n".into(),
                ));
            }
            let holds = rigidity_identity_check(n);
            if holds {
                Ok(ok("true\n".into()))
            } else {
                Err(Outcome {
                    code: 3,
                    stdout: "false\n".into(),
                    stderr: format!("error: InternalIdentityFailure: rigidity identity fails for n = {n}\n"),
                })
            }
        }
        Cmd::Selftest { seed, cases } => {
            if cases == 0 {
                return Err(usage_outcome(
                    "error: Usage: --cases must be at least 1\n".into(),
                ));
            }
            let report = selftest::run(seed, cases);
            if report.ok() {
                Ok(ok(report.render()))
            } else {
                Err(Outcome {
                    code: 3,
                    stdout: report.render(),
                    stderr: "error: InternalIdentityFailure: selftest found failing identities\n"
                        .into(),
                })
            }
        }
        Cmd::Print { input, form } => {
            let spec = load(&input)?;
            let w =
                parse_form_expr(&form, &spec.table, 1, 1).map_err(|e| error_outcome_parse(&e))?;
            Ok(ok(format!("{}\n", print_form(&w, &spec.table))))
        }
    }
}
