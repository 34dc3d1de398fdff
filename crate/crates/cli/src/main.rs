use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use rootsum_core::census::{self, CensusOptions, LowerBoundReport, UniquenessReport, VerifyOptions};
use rootsum_core::cyclotomic::{self, ConstrainedOutcome, KernelCertificate};
use rootsum_core::weights::{self, CharCheckInput, CharRule};
use rootsum_core::{parse_element, Error, GroupRingElement};

#[derive(Parser)]
#[command(name = "rootsum", version, about = "Vanishing sums of roots of unity")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ElementArg {
    /// Sparse element, e.g. "z^5 + z^6 + 2*z^12".
    element: String,
    /// Order of the cyclic group.
    #[arg(long)]
    m: usize,
}

impl ElementArg {
    fn parse(&self) -> Result<GroupRingElement, Error> {
        parse_element(&self.element, self.m)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the cyclotomic polynomial Φ_m.
    Phi { m: usize },
    /// Describe the weight set W(m).
    Weights {
        m: usize,
        /// Also list members up to this bound.
        #[arg(long)]
        up_to: Option<usize>,
    },
    /// Test n ∈ W(m).
    Member { m: usize, n: usize },
    /// Evaluate Σ x_k exp(2πik/m) with an error bound.
    Eval {
        #[command(flatten)]
        x: ElementArg,
        #[arg(long, default_value_t = 128)]
        bits: u32,
    },
    /// Test whether the sum vanishes.
    Kernel {
        #[command(flatten)]
        x: ElementArg,
    },
    /// Certificate x = Σ z_i σ(P_i).
    Decompose {
        #[command(flatten)]
        x: ElementArg,
    },
    /// Split a nonnegative kernel element along the cosets of the radical subgroup.
    CosetSplit {
        #[command(flatten)]
        x: ElementArg,
    },
    /// x = a·σ(P_2) + b·σ(P_1) for at most two primes.
    TwoPrime {
        #[command(flatten)]
        x: ElementArg,
    },
    /// Certificate with every ε(z_i) >= 0, or infeasible.
    Constrained {
        #[command(flatten)]
        x: ElementArg,
    },
    /// Minimal vanishing sums up to rotation, one record per line.
    Census {
        m: usize,
        #[arg(long)]
        max_weight: usize,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        no_prune: bool,
        /// Accept weights above the guard.
        #[arg(long)]
        allow_large: bool,
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Lower bound, uniqueness and oracle checks for m.
    Verify {
        m: usize,
        /// Census weight for the lower-bound check.
        #[arg(long)]
        max_weight: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1000)]
        oracle_samples: usize,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, default_value_t = 200_000_000)]
        node_limit: u64,
    },
    /// Check a character value against the weight constraints.
    Charcheck {
        #[arg(long)]
        degree: u64,
        #[arg(long, allow_hyphen_values = true)]
        value: i64,
        #[arg(long)]
        order: usize,
    },
    /// Canonical rotation of an element.
    Canon {
        #[command(flatten)]
        x: ElementArg,
    },
}

/// Text or JSON output plus the exit status.
struct Output {
    text: Vec<String>,
    json: Vec<serde_json::Value>,
    ok: bool,
}

impl Output {
    fn new(ok: bool) -> Self {
        Self {
            text: Vec::new(),
            json: Vec::new(),
            ok,
        }
    }

    fn line(mut self, s: impl Into<String>) -> Self {
        self.text.push(s.into());
        self
    }

    fn value(mut self, v: impl Serialize) -> Self {
        self.json.push(serde_json::to_value(v).expect("serializable"));
        self
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NotInKernel { .. } | Error::NotMinimal(_) | Error::BudgetExhausted(_) => 1,
        _ => 2,
    }
}

fn certificate_lines(cert: &KernelCertificate) -> Vec<String> {
    cert.primes()
        .iter()
        .zip(cert.parts())
        .map(|(p, z)| format!("p = {p}: {z}"))
        .collect()
}

fn run(cmd: Command) -> Result<Output, Error> {
    Ok(match cmd {
        Command::Phi { m } => {
            if m == 0 {
                return Err(Error::ZeroModulus);
            }
            let p = cyclotomic::cyclotomic_poly(m);
            Output::new(true).line(p.to_string()).value(&p)
        }
        Command::Weights { m, up_to } => {
            let w = weights::weight_set(m)?;
            let primes: Vec<String> = w.primes.iter().map(|p| p.to_string()).collect();
            let mut out = Output::new(true).line(format!("W({m}) = N-span of {{{}}}", primes.join(", ")));
            out = match (&w.conductor, &w.gaps) {
                (Some(c), Some(g)) => {
                    let gaps: Vec<String> = g.iter().map(|n| n.to_string()).collect();
                    out.line(format!("conductor: {c}"))
                        .line(format!("gaps: {}", gaps.join(" ")))
                }
                _ => out.line(format!("multiples of {}", w.primes[0])),
            };
            if let Some(limit) = up_to {
                let members: Vec<String> = w.members_up_to(limit).iter().map(|n| n.to_string()).collect();
                out = out.line(format!("members up to {limit}: {}", members.join(" ")));
            }
            out.value(&w)
        }
        Command::Member { m, n } => {
            let member = weights::is_weight(m, n)?;
            let text = if member {
                format!("{n} in W({m})")
            } else {
                format!("{n} not in W({m})")
            };
            Output::new(member)
                .line(text)
                .value(json!({"m": m, "n": n, "member": member}))
        }
        Command::Eval { x, bits } => {
            let v = cyclotomic::complex_eval(&x.parse()?, bits)?;
            let (re, im) = v.to_f64();
            Output::new(true)
                .line(format!("{re:.17e} + {im:.17e}i"))
                .line(format!("error bound: {:.3e}", v.error_bound()))
                .line(format!("may be zero: {}", if v.may_be_zero() { "yes" } else { "no" }))
                .value(json!({
                    "re": re,
                    "im": im,
                    "error_bound": v.error_bound(),
                    "frac_bits": v.frac_bits,
                    "may_be_zero": v.may_be_zero(),
                }))
        }
        Command::Kernel { x } => {
            let x = x.parse()?;
            let image = cyclotomic::phi_map(&x)?;
            let yes = image.is_zero();
            let mut out = Output::new(yes).line(format!("in kernel: {}", if yes { "yes" } else { "no" }));
            if !yes {
                out = out.line(format!("phi(x) = {image}"));
            }
            out.value(json!({"in_kernel": yes, "phi": image.coords}))
        }
        Command::Decompose { x } => {
            let cert = cyclotomic::kernel_decompose(&x.parse()?)?;
            let mut out = Output::new(true);
            for l in certificate_lines(&cert) {
                out = out.line(l);
            }
            out.value(&cert)
        }
        Command::CosetSplit { x } => {
            let parts = cyclotomic::coset_split(&x.parse()?)?;
            let mut out = Output::new(true);
            for p in &parts {
                out = out.line(format!("coset {}: {}", p.coset, p.part));
            }
            out.value(&parts)
        }
        Command::TwoPrime { x } => {
            let d = cyclotomic::two_prime_decompose(&x.parse()?)?;
            Output::new(true)
                .line(format!("a = {}", d.a))
                .line(format!("b = {}", d.b))
                .value(&d)
        }
        Command::Constrained { x } => match cyclotomic::constrained_decompose(&x.parse()?)? {
            ConstrainedOutcome::Feasible(cert) => {
                let augs: Vec<String> = cert.augmentations().iter().map(|a| a.to_string()).collect();
                let mut out = Output::new(true).line(format!("feasible; augmentations {}", augs.join(" ")));
                for l in certificate_lines(&cert) {
                    out = out.line(l);
                }
                out.value(json!({"feasible": true, "certificate": cert}))
            }
            ConstrainedOutcome::Infeasible { candidates } => Output::new(false)
                .line(format!("infeasible ({candidates} augmentation vectors ruled out)"))
                .value(json!({"feasible": false, "candidates": candidates})),
        },
        Command::Census {
            m,
            max_weight,
            workers,
            no_prune,
            allow_large,
            node_limit,
        } => {
            let opts = CensusOptions {
                max_weight,
                workers,
                prune: !no_prune,
                allow_large,
                node_limit,
            };
            let records = census::enumerate_minimal_with(m, &opts)?;
            let mut out = Output::new(true);
            for r in &records {
                let class = if r.is_symmetric() { "symmetric" } else { "asymmetric" };
                out = out
                    .line(format!(
                        "weight {} support {} {class}: {}",
                        r.weight, r.support, r.canon
                    ))
                    .value(r);
            }
            out
        }
        Command::Verify {
            m,
            max_weight,
            seed,
            samples,
            oracle_samples,
            workers,
            node_limit,
        } => verify(m, max_weight, seed, samples, oracle_samples, workers, node_limit)?,
        Command::Charcheck { degree, value, order } => {
            let v = weights::char_constraint_check(&CharCheckInput { degree, value, order })?;
            let rule = match v.rule {
                CharRule::WeightMembership => format!("t in W({order})"),
                CharRule::OddBound { ell: Some(l) } => format!("odd t >= {l}"),
                CharRule::OddBound { ell: None } => format!("odd t, but {order} has no odd prime"),
                CharRule::NoConstraint => "no constraint applicable".to_string(),
            };
            let verdict = if v.pass { "pass" } else { "fail" };
            Output::new(v.pass)
                .line(format!("t = {}: {verdict} ({rule})", v.t))
                .value(v)
        }
        Command::Canon { x } => {
            let (shift, canon) = x.parse()?.canonical_rotation();
            Output::new(true)
                .line(format!("shift {shift}: {canon}"))
                .value(json!({"shift": shift, "canon": canon}))
        }
    })
}

fn lower_bound_lines(r: &LowerBoundReport) -> Vec<String> {
    let bound = r.bound.map_or("none".to_string(), |b| b.to_string());
    let mut lines = vec![format!(
        "lower bound (m = {}, weight <= {}): {} classes, {} asymmetric, bound {bound}, min asymmetric support {}, {} decomposition samples",
        r.m,
        r.max_weight,
        r.records,
        r.asymmetric,
        r.min_asymmetric_support.map_or("-".to_string(), |s| s.to_string()),
        r.decomposition_samples,
    )];
    lines.extend(r.failures.iter().map(|f| format!("  FAIL {f}")));
    lines
}

fn uniqueness_lines(r: &UniquenessReport) -> Vec<String> {
    if let Some(s) = &r.skipped {
        return vec![format!("uniqueness: {s}")];
    }
    let mut lines = vec![format!(
        "uniqueness (m = {}): {} class(es) at weight {}, {} at weight {}",
        r.m,
        r.bound_classes.len(),
        r.bound,
        r.next_classes.len(),
        r.bound + 1
    )];
    lines.extend(r.failures.iter().map(|f| format!("  FAIL {f}")));
    lines
}

fn verify(
    m: usize,
    max_weight: Option<usize>,
    seed: u64,
    samples: usize,
    oracle_samples: usize,
    workers: usize,
    node_limit: u64,
) -> Result<Output, Error> {
    let opts = VerifyOptions {
        workers,
        seed,
        samples,
        node_limit: Some(node_limit),
    };
    let primes = rootsum_core::groupring::factorize(m)?.primes;
    let default_weight = match primes.as_slice() {
        [p1, p2, p3, ..] => (p1 - 1) * (p2 - 1) + p3,
        _ => 12,
    };
    let max_weight = max_weight.unwrap_or(default_weight);
    let lower = match census::verify_lower_bound(m, max_weight, &opts) {
        Err(Error::BudgetExhausted(n)) => {
            return Ok(Output::new(false)
                .line(format!("lower bound: census exceeded {n} search nodes"))
                .value(json!({"m": m, "budget_exhausted": n})))
        }
        other => other?,
    };
    let unique = if primes.len() >= 3 {
        Some(census::verify_uniqueness(m, &opts)?)
    } else {
        None
    };
    let oracle = cyclotomic::check_oracle_agreement(oracle_samples, 60, seed)?;

    let ok = lower.passed() && unique.as_ref().is_none_or(|u| u.passed()) && oracle.passed();
    let mut out = Output::new(ok);
    for l in lower_bound_lines(&lower) {
        out = out.line(l);
    }
    if let Some(u) = &unique {
        for l in uniqueness_lines(u) {
            out = out.line(l);
        }
    }
    out = out.line(format!(
        "oracle: {} samples, {} disagreements",
        oracle.samples,
        oracle.disagreements.len()
    ));
    out = out.line(if ok { "verify: pass" } else { "verify: FAIL" });
    Ok(out.value(json!({
        "pass": ok,
        "lower_bound": lower,
        "uniqueness": unique,
        "oracle": oracle,
    })))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let stdout = io::stdout();
    let mut stdout = stdout.lock();
    match run(cli.command) {
        Ok(out) => {
            if json {
                for v in &out.json {
                    let _ = writeln!(stdout, "{v}");
                }
            } else {
                for l in &out.text {
                    let _ = writeln!(stdout, "{l}");
                }
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
