//! `weaklift`: JSON command-line front end.
//!
//! Every run prints one line {"schema":1,"command":…,"result":…} (or
//! "error" instead of "result"). Exit codes: 0 success, 1 a check failed or
//! a search was exhausted, 2 invalid input.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use weaklift::chebyshev::{is_eisenstein, psi_ideal_check, psi_poly};
use weaklift::classify::{
    hurwitz_example, minimal_hurwitz_violation, nu_global, ramification_filtration, recognize_group,
    LocalActionInput,
};
use weaklift::deformation::{lift_generators, verify_relations, versal_table, GroupSpec, LiftCase, NamedGenerator};
use weaklift::json::{bigint_to_json, parse_inline_or_file};
use weaklift::obstruction::{
    binomial_identity_check, eigen_order_values, exhaustive_lift_search, iterate_identity_check,
    klein_commutation_check, order_p_probe, perturbation_constraints, EnumerationOrder, SearchBounds, SearchStatus,
    ULift,
};
use weaklift::{Error, MobiusElem, Ring, RingDescriptor};

#[derive(Parser)]
#[command(name = "weaklift", version, about = "Lifting weakly ramified actions on k[[y]]")]
struct Cli {
    /// Attach run metadata (version, elapsed time) to the output.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of ψ_p (constant term first).
    Psi {
        #[arg(long)]
        p: u64,
        /// Also divide the Chebyshev ideal generators by ψ.
        #[arg(long)]
        check: bool,
    },
    /// Versal presentation of a table row.
    Table {
        /// Group spec: inline JSON or @file.
        #[arg(long)]
        group: String,
    },
    /// Check the relations of a lift; exit 1 if any fails.
    Verify(VerifyArgs),
    /// Exhaustive lift search; exit 0 when found, 1 when exhausted.
    Search(SearchArgs),
    /// Recognize local groups and compute ν(X, G).
    Classify {
        /// JSON list of local actions (or a single one): @file or inline.
        #[arg(long)]
        input: String,
        /// Maximal closure size.
        #[arg(long, default_value_t = 10_000)]
        closure_bound: usize,
        /// Check every closure element even above the sampling threshold.
        #[arg(long)]
        deterministic: bool,
    },
    /// Polynomial and iterate identities; exit 1 if the identity fails.
    Identity {
        #[command(subcommand)]
        kind: IdentityKind,
    },
    /// T^p for all perturbations of y/(y+1) over Z/p².
    Probe {
        #[arg(long)]
        p: u64,
    },
    /// Automorphism count of (x^p − x)(y^p − y) = 1 against the Hurwitz bound.
    Hurwitz {
        #[arg(long)]
        p: u64,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Explicit lift: cyclic-p, cyclic-2, klein, dp (or dihedral), s3, a4.
    #[arg(long, conflicts_with_all = ["group", "presentation"])]
    case: Option<String>,
    /// Prime for --case.
    #[arg(long, requires = "case")]
    p: Option<u64>,
    /// Group spec; verifies its table row unless --presentation is given.
    #[arg(long)]
    group: Option<String>,
    /// A presentation (as emitted by `table`) to verify against --group.
    #[arg(long, requires = "group")]
    presentation: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Natural,
    Reversed,
    Shuffled,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    ring: String,
    /// D: perturbations of degree < D; 0 searches exact homographies.
    #[arg(long, default_value_t = 0)]
    perturb_degree: usize,
    /// Series truncation for the perturbed search.
    #[arg(long = "K", default_value_t = 3)]
    k: usize,
    /// Height bound on entries (required over infinite rings).
    #[arg(long)]
    entry_bound: Option<i64>,
    /// Fixed generator {"name", "matrix"} (repeatable).
    #[arg(long)]
    fixed: Vec<String>,
    #[arg(long, value_enum, default_value_t = Order::Natural)]
    order: Order,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Refuse larger search spaces (decimal).
    #[arg(long)]
    ceiling: Option<String>,
}

#[derive(Subcommand)]
enum IdentityKind {
    /// Σ (j/p)C(p,j)(A−C)^{p−j}C^j ≡ C(A^{p−1} − C^{p−1}) in F_p[A, C].
    Binomial {
        #[arg(long)]
        p: u64,
    },
    /// T^i ≡ n^i + p·i·c·y² mod (pπ, y³) over O/pπ.
    Iterate {
        #[arg(long)]
        p: u64,
        /// u ∈ F_{p²} ∖ F_p as a payload, e.g. [0,1].
        #[arg(long)]
        u: String,
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = 0)]
        imax: u64,
        /// Use the lift ũ + p instead of the naive lift.
        #[arg(long)]
        shifted: bool,
    },
    /// Linear constraints on the perturbation S over F_{p^s}.
    Constraints {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        s: u32,
        #[arg(long)]
        u: String,
        #[arg(long = "K", default_value_t = 3)]
        k: usize,
    },
    /// P and Q at Y = 1 + α/2 for [[A, αC], [C, A + αC]].
    Eigen {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        p: u64,
    },
    /// Commutation of the Klein lift over GR(4, s).
    Klein {
        #[arg(long, default_value_t = 2)]
        s: u32,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
}

type Outcome = Result<(Value, u8), Error>;

fn ring_arg(arg: &str) -> Result<Ring, Error> {
    Ring::new(&RingDescriptor::from_json(&parse_inline_or_file(arg)?)?)
}

fn group_arg(arg: &str) -> Result<GroupSpec, Error> {
    GroupSpec::from_json(&parse_inline_or_file(arg)?)
}

fn payload(ring: &Ring, arg: &str) -> Result<weaklift::Elem, Error> {
    let v: Value = serde_json::from_str(arg).map_err(|e| Error::InvalidArgument(format!("invalid payload: {e}")))?;
    ring.from_payload(&v)
}

fn psi(p: u64, check: bool) -> Outcome {
    let poly = psi_poly(p)?;
    let mut out = json!({ "coeffs": poly.coeffs().iter().map(bigint_to_json).collect::<Vec<_>>() });
    if check {
        out["eisenstein"] = json!(is_eisenstein(&poly, p));
        out["idealCheck"] = serde_json::to_value(psi_ideal_check(p)?).unwrap();
    }
    Ok((out, 0))
}

fn verify(a: &VerifyArgs) -> Outcome {
    let (pres, spec) = match (&a.case, &a.group) {
        (Some(case), _) => {
            let case = LiftCase::parse(case)?;
            let p = a.p.ok_or_else(|| Error::InvalidArgument("--case needs --p".into()))?;
            (lift_generators(case, p)?, case.group_spec(p)?)
        }
        (None, Some(g)) => {
            let spec = group_arg(g)?;
            let pres = match &a.presentation {
                Some(x) => weaklift::deformation::VersalPresentation::from_json(&parse_inline_or_file(x)?)?,
                None => versal_table(&spec)?,
            };
            (pres, spec)
        }
        (None, None) => return Err(Error::InvalidArgument("give --case or --group".into())),
    };
    let report = verify_relations(&pres, &spec);
    let code = if report.all_passed { 0 } else { 1 };
    Ok((json!({ "presentation": pres.to_json(), "report": report }), code))
}

fn search(a: &SearchArgs) -> Outcome {
    let spec = group_arg(&a.group)?;
    let ring = ring_arg(&a.ring)?;
    let mut bounds = if a.perturb_degree == 0 {
        let mut b = SearchBounds::exact(a.entry_bound.unwrap_or(0));
        b.entry_bound = a.entry_bound;
        b
    } else {
        SearchBounds::perturbed(a.perturb_degree, a.k)
    };
    for f in &a.fixed {
        let v = parse_inline_or_file(f)?;
        let name = v.get("name").and_then(Value::as_str).ok_or_else(|| Error::InvalidArgument("fixed generator needs a name".into()))?;
        let m = MobiusElem::from_json(&ring, v.get("matrix").unwrap_or(&Value::Null))?;
        bounds = bounds.with_fixed(NamedGenerator::new(name, m));
    }
    bounds = bounds.with_order(match a.order {
        Order::Natural => EnumerationOrder::Natural,
        Order::Reversed => EnumerationOrder::Reversed,
        Order::Shuffled => EnumerationOrder::Shuffled(a.seed),
    });
    if let Some(c) = &a.ceiling {
        let c = c.parse().map_err(|_| Error::InvalidArgument("ceiling must be a decimal integer".into()))?;
        bounds = bounds.with_ceiling(c);
    }
    let out = exhaustive_lift_search(&spec, &ring, &bounds)?;
    let code = if out.status == SearchStatus::Found { 0 } else { 1 };
    Ok((out.to_json(), code))
}

fn classify(input: &str, bound: usize, deterministic: bool) -> Outcome {
    let v = parse_inline_or_file(input)?;
    let items = match v {
        Value::Array(xs) => xs,
        other => vec![other],
    };
    let mut points = Vec::new();
    let mut specs = Vec::new();
    for item in &items {
        let local = LocalActionInput::from_json(item)?;
        let filtration = ramification_filtration(&local, bound, deterministic)?;
        let spec = recognize_group(&local, bound)?;
        points.push(json!({ "filtration": filtration, "group": spec.group_name(), "spec": spec.to_json() }));
        specs.push(spec);
    }
    let answer = nu_global(&specs)?;
    Ok((json!({ "locals": points, "global": answer }), 0))
}

fn identity(kind: &IdentityKind) -> Outcome {
    match kind {
        IdentityKind::Binomial { p } => {
            let r = binomial_identity_check(*p)?;
            let code = if r.holds { 0 } else { 1 };
            Ok((serde_json::to_value(r).unwrap(), code))
        }
        IdentityKind::Iterate { p, u, c, imax, shifted } => {
            let f = Ring::finite_field(*p, 2)?;
            let imax = if *imax == 0 { *p } else { *imax };
            let lift = if *shifted { ULift::ShiftedByP } else { ULift::Naive };
            let r = iterate_identity_check(*p, &payload(&f, u)?, &payload(&f, c)?, imax, lift)?;
            let code = if r.holds { 0 } else { 1 };
            Ok((serde_json::to_value(r).unwrap(), code))
        }
        IdentityKind::Constraints { p, s, u, k } => {
            let f = Ring::finite_field(*p, *s)?;
            let sys = perturbation_constraints(*p, &payload(&f, u)?, &f, *k)?;
            Ok((sys.to_json(), 0))
        }
        IdentityKind::Eigen { ring, a, c, alpha, p } => {
            let r = ring_arg(ring)?;
            let (pv, qv) = eigen_order_values(&r, &payload(&r, a)?, &payload(&r, c)?, &payload(&r, alpha)?, *p)?;
            let vanish = r.is_zero(&pv) && r.is_zero(&qv);
            Ok((json!({ "P": r.to_payload(&pv), "Q": r.to_payload(&qv), "orderP": vanish }), 0))
        }
        IdentityKind::Klein { s, u, v } => {
            let f = Ring::finite_field(2, *s)?;
            let r = klein_commutation_check(*s, &payload(&f, u)?, &payload(&f, v)?)?;
            let code = if r.condition_equivalent { 0 } else { 1 };
            Ok((serde_json::to_value(r).unwrap(), code))
        }
    }
}

fn dispatch(cmd: &Command) -> Outcome {
    match cmd {
        Command::Psi { p, check } => psi(*p, *check),
        Command::Table { group } => Ok((versal_table(&group_arg(group)?)?.to_json(), 0)),
        Command::Verify(a) => verify(a),
        Command::Search(a) => search(a),
        Command::Classify { input, closure_bound, deterministic } => classify(input, *closure_bound, *deterministic),
        Command::Identity { kind } => identity(kind),
        Command::Probe { p } => {
            let r = order_p_probe(*p)?;
            Ok((serde_json::to_value(r).unwrap(), 0))
        }
        Command::Hurwitz { p } => {
            let mut r = hurwitz_example(*p)?.to_json();
            r["minimalViolatingPrime"] = json!(minimal_hurwitz_violation(1000));
            Ok((r, 0))
        }
    }
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Psi { .. } => "psi",
        Command::Table { .. } => "table",
        Command::Verify(_) => "verify",
        Command::Search(_) => "search",
        Command::Classify { .. } => "classify",
        Command::Identity { .. } => "identity",
        Command::Probe { .. } => "probe",
        Command::Hurwitz { .. } => "hurwitz",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = dispatch(&cli.command);
    let mut out = json!({ "schema": 1, "command": name(&cli.command) });
    let code = match outcome {
        Ok((result, code)) => {
            out["result"] = result;
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            out["error"] = json!(e.to_string());
            2
        }
    };
    if cli.verbose {
        out["meta"] = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "elapsedMs": start.elapsed().as_millis() as u64,
        });
    }
    // a closed pipe is not an error worth a panic
    let _ = writeln!(std::io::stdout().lock(), "{out}");
    ExitCode::from(code)
}
