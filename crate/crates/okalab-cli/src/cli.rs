//! Subcommand definitions and dispatch.
//!
//! Exit codes: 0 success, 1 argument/subcommand errors, 2 precondition or
//! config failures, 3 numerical rejections (winding residual, certification
//! failure). Every invocation writes exactly one JSON document (or one CSV
//! table for sweeps) to standard output.

use clap::{Args, Parser, Subcommand};

use okalab::branchlog::BranchedPoint;
use okalab::bundlecalc::{restrict_and_decide, Verdict};
use okalab::curvelab::{compose_curve, count_intersections, phi_injectivity_seeded, CurveTarget};
use okalab::latticeforms::{pair_form, takayama_verdict, GaussianLatticeVector, HermitianFormSpec};
use okalab::monodromy::{chern_pairing, w_loop_factor, z_loop_factor, TorusCycle};
use okalab::steinfn::{
    eval_fminus, eval_fplus, eval_fplus_shift, zero_count_annulus, EvalResult, ShiftParam,
    TruncationBudget,
};

use crate::config::{parse_gaussian_vector_arg, DivisorConfig, LatticeConfig};
use crate::output::{arr, fmt_complex, fmt_f64, fmt_str, obj, CsvTable};
use crate::parse::{parse_complex, parse_handle, parse_laurent};
use crate::sweep::thread_count;

#[derive(Parser)]
#[command(
    name = "okalab",
    version,
    about = "Certified divisor/line-bundle computations on (C*)^n",
    long_about = None
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stein function evaluation, monodromy factors, and annulus zero counts
    Stein {
        #[command(subcommand)]
        command: SteinCommand,
    },
    /// Chern pairing <c1(L(D)), T> on a coordinate torus
    Pairing(PairingArgs),
    /// Extra-zero solvability verdicts for declared divisors
    Oka {
        #[command(subcommand)]
        command: OkaCommand,
    },
    /// Exact lattice (1,1)-form pairings
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Entire-curve intersection counts and checks
    Curve {
        #[command(subcommand)]
        command: CurveCommand,
    },
    /// CSV parameter sweeps for plot consumption
    Sweep {
        #[command(subcommand)]
        command: SweepCommand,
    },
}

#[derive(Args)]
struct BudgetArgs {
    /// Target relative error for certified evaluations
    #[arg(long, default_value_t = 1e-12)]
    target: f64,
    /// Maximum head terms per infinite product
    #[arg(long, default_value_t = 256)]
    max_terms: u32,
}

impl BudgetArgs {
    fn budget(&self) -> Result<TruncationBudget, CliError> {
        TruncationBudget::new(self.target, self.max_terms).map_err(CliError::Core)
    }
}

#[derive(Args)]
struct PointArgs {
    /// Base point z as 're,im'
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    /// Branch shift: log z = principal + 2*pi*i*shift
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    branch_shift: i64,
}

impl PointArgs {
    fn branched(&self) -> Result<BranchedPoint, CliError> {
        let z = parse_complex(&self.z).map_err(CliError::Config)?;
        let b = BranchedPoint::principal(z).map_err(CliError::Core)?;
        Ok(b.shifted(self.branch_shift))
    }
}

#[derive(Subcommand)]
enum SteinCommand {
    /// Evaluate F+, F-, or the shifted F+_lambda at one point
    Eval {
        #[command(flatten)]
        point: PointArgs,
        /// Second coordinate w as 're,im'
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// Which function: plus or minus
        #[arg(long = "fn", default_value = "plus")]
        function: String,
        /// Divisor shift lambda 're,im' (evaluates F+_lambda, function must be plus)
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Loop factors of a handle around the z- and w-circles
    Monodromy {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// Handle: fplus, fminus, fplus-shift, or a '*'-product
        #[arg(long, default_value = "fplus")]
        handle: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Count zeros of w -> F+(z, w) in an annulus r1 < |w| < r2
    Zeros {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        r2: f64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Args)]
struct PairingArgs {
    /// Handle: fplus, fminus, fplus-shift, or a '*'-product
    #[arg(long)]
    handle: String,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Torus radius in z
    #[arg(long, default_value_t = 1.0)]
    rz: f64,
    /// Torus radius in w (default nudged off the base sheet)
    #[arg(long, default_value_t = 1.3)]
    rw: f64,
    /// Torus orientation: 1 or -1
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    orientation: i8,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Subcommand)]
enum OkaCommand {
    /// Decide the extra-zero criterion for a divisor config
    Decide {
        /// Path to a divisor JSON config
        #[arg(long)]
        config: String,
    },
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Pair the form against one 2-cycle u ^ v
    Pair {
        /// Complex dimension n
        #[arg(long)]
        n: usize,
        /// Diagonal weight d
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// Drop the off-diagonal i*dz_j^dzbar_k part
        #[arg(long)]
        diagonal_only: bool,
        /// First leg as JSON `[[a1,b1],...]` (a_j e_j + b_j ie_j)
        #[arg(long)]
        u: String,
        /// Second leg, same format
        #[arg(long)]
        v: String,
    },
    /// Search declared sublattice basis 2-cycles for an obstruction
    Verdict {
        /// Path to a lattice JSON config
        #[arg(long)]
        config: String,
    },
}

#[derive(Subcommand)]
enum CurveCommand {
    /// Count curve-divisor intersections inside |zeta| <= R
    Count {
        /// Laurent polynomial "c*z^j*w^k ± ..."
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// Shift lambda for the Stein divisor target F+_lambda
        #[arg(long, allow_hyphen_values = true)]
        stein_lambda: Option<String>,
        #[arg(long)]
        radius: f64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Show the exponential sum the curve pulls a polynomial back to
    Compose {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Sampled injectivity check of the curve map
    Phicheck {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        halfwidth: f64,
        #[arg(long, default_value_t = okalab::curvelab::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum SweepCommand {
    /// Curve intersection counts over a list of radii (CSV)
    CurveCount {
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        stein_lambda: Option<String>,
        /// Comma-separated radii
        #[arg(long)]
        radii: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Annulus zero counts over a list of outer radii (CSV)
    AnnulusZeros {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        r1: f64,
        /// Comma-separated outer radii
        #[arg(long)]
        r2_list: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

pub enum CliError {
    /// Precondition/config problems: exit 2.
    Config(String),
    /// Library errors: exit 2 or 3 depending on the rejection class.
    Core(okalab::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => {
                if e.is_numerical_rejection() {
                    3
                } else {
                    2
                }
            }
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Config(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

fn eval_json(r: &EvalResult) -> String {
    obj(&[
        ("value", fmt_complex(r.value)),
        ("rel_error_bound", fmt_f64(r.rel_error_bound)),
        ("nu_terms", r.nu_terms.to_string()),
        ("mu_terms", r.mu_terms.to_string()),
    ])
}

fn verdict_json(v: &Verdict) -> String {
    let ambient: Vec<String> = v
        .ambient_pairings
        .iter()
        .map(|p| {
            obj(&[
                ("cycle", format!("[{},{}]", p.a, p.b)),
                ("pairing", p.pairing.to_string()),
            ])
        })
        .collect();
    let support: Vec<String> = v
        .support_pairings
        .iter()
        .map(|p| {
            obj(&[
                ("cycle", format!("[{},{}]", p.a, p.b)),
                ("coefficient", p.coefficient.to_string()),
                ("pairing", p.pairing.to_string()),
            ])
        })
        .collect();
    let witness = match &v.witness {
        None => "null".to_string(),
        Some(w) => obj(&[
            ("cycle", format!("[{},{}]", w.a, w.b)),
            ("pairing", w.pairing.to_string()),
        ]),
    };
    obj(&[
        ("ambient_pairings", arr(&ambient)),
        ("support_pairings", arr(&support)),
        ("cousin2_on_tested", v.cousin2_on_tested.to_string()),
        ("extra_zero_on_tested", v.extra_zero_on_tested.to_string()),
        ("rule_applied", fmt_str(v.rule_applied.as_str())),
        ("witness", witness),
    ])
}

fn gaussian_json(v: &GaussianLatticeVector) -> String {
    let pairs: Vec<String> = v
        .e_coeffs()
        .iter()
        .zip(v.ie_coeffs())
        .map(|(a, b)| format!("[{a},{b}]"))
        .collect();
    arr(&pairs)
}

fn curve_target(
    poly: &Option<String>,
    stein_lambda: &Option<String>,
    budget: &BudgetArgs,
) -> Result<CurveTarget, CliError> {
    match (poly, stein_lambda) {
        (Some(p), None) => Ok(CurveTarget::Poly(
            parse_laurent(p).map_err(CliError::Config)?,
        )),
        (None, Some(l)) => Ok(CurveTarget::SteinShift {
            lambda: parse_complex(l).map_err(CliError::Config)?,
            budget: budget.budget()?,
        }),
        _ => Err(CliError::Config(
            "give exactly one of --poly or --stein-lambda".into(),
        )),
    }
}

pub fn dispatch(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Stein { command } => match command {
            SteinCommand::Eval {
                point,
                w,
                function,
                lambda,
                budget,
            } => {
                let zb = point.branched()?;
                let w = parse_complex(&w).map_err(CliError::Config)?;
                let b = budget.budget()?;
                let result = match (function.as_str(), lambda) {
                    ("plus", None) => eval_fplus(&zb, w, &b),
                    ("plus", Some(l)) => {
                        let lambda = parse_complex(&l).map_err(CliError::Config)?;
                        eval_fplus_shift(ShiftParam { lambda }, &zb, w, &b)
                    }
                    ("minus", None) => eval_fminus(&zb, w, &b),
                    ("minus", Some(_)) => {
                        return Err(CliError::Config(
                            "--lambda applies to the plus function only".into(),
                        ))
                    }
                    (other, _) => {
                        return Err(CliError::Config(format!(
                            "--fn must be plus or minus, got '{other}'"
                        )))
                    }
                }
                .map_err(CliError::Core)?;
                Ok(eval_json(&result))
            }
            SteinCommand::Monodromy {
                point,
                w,
                handle,
                lambda,
                budget,
            } => {
                let zb = point.branched()?;
                let w = parse_complex(&w).map_err(CliError::Config)?;
                let lambda = lambda
                    .map(|l| parse_complex(&l).map_err(CliError::Config))
                    .transpose()?;
                let h = parse_handle(&handle, lambda).map_err(CliError::Config)?;
                let b = budget.budget()?;
                let zf = z_loop_factor(&h, &zb, w, &b).map_err(CliError::Core)?;
                let wf = w_loop_factor(&h, &zb, w, &b).map_err(CliError::Core)?;
                // Combined certificate for the ratios: both evaluations carry
                // a relative bound, so first order they add.
                let base = h.eval(&zb, w, &b).map_err(CliError::Core)?;
                let moved = h.eval(&zb.shifted(1), w, &b).map_err(CliError::Core)?;
                let ratio_bound = base.rel_error_bound + moved.rel_error_bound;
                Ok(obj(&[
                    ("handle", fmt_str(h.label())),
                    ("z_loop_factor", fmt_complex(zf)),
                    ("z_loop_bound", fmt_f64(ratio_bound)),
                    ("w_loop_factor", fmt_complex(wf)),
                    ("w_loop_bound", fmt_f64(2.0 * base.rel_error_bound)),
                ]))
            }
            SteinCommand::Zeros {
                point,
                r1,
                r2,
                budget,
            } => {
                let zb = point.branched()?;
                let b = budget.budget()?;
                let r = zero_count_annulus(&zb, r1, r2, &b).map_err(CliError::Core)?;
                Ok(obj(&[
                    ("count", r.winding.to_string()),
                    ("residual", fmt_f64(r.residual)),
                ]))
            }
        },
        Command::Pairing(args) => {
            let lambda = args
                .lambda
                .as_ref()
                .map(|l| parse_complex(l).map_err(CliError::Config))
                .transpose()?;
            let handle = parse_handle(&args.handle, lambda).map_err(CliError::Config)?;
            let torus =
                TorusCycle::new(args.rz, args.rw, args.orientation).map_err(CliError::Core)?;
            let b = args.budget.budget()?;
            let p = chern_pairing(&handle, &torus, &b).map_err(CliError::Core)?;
            Ok(obj(&[
                ("pairing", p.pairing.to_string()),
                ("residual", fmt_f64(p.residual)),
                ("samples_used", p.samples_used.to_string()),
            ]))
        }
        Command::Oka { command } => match command {
            OkaCommand::Decide { config } => {
                let spec = DivisorConfig::load(&config).map_err(CliError::Config)?;
                let v = restrict_and_decide(&spec).map_err(CliError::Core)?;
                Ok(verdict_json(&v))
            }
        },
        Command::Lattice { command } => match command {
            LatticeCommand::Pair {
                n,
                d,
                diagonal_only,
                u,
                v,
            } => {
                let omega = HermitianFormSpec::new(n, d, !diagonal_only).map_err(CliError::Core)?;
                let u = parse_gaussian_vector_arg(&u).map_err(CliError::Config)?;
                let v = parse_gaussian_vector_arg(&v).map_err(CliError::Config)?;
                let p = pair_form(&omega, &u, &v).map_err(CliError::Core)?;
                Ok(obj(&[("pairing", p.to_string()), ("exact", "true".into())]))
            }
            LatticeCommand::Verdict { config } => {
                let (omega, sub) = LatticeConfig::load(&config).map_err(CliError::Config)?;
                let v = takayama_verdict(&omega, &sub).map_err(CliError::Core)?;
                let witness = match &v.witness {
                    None => "null".to_string(),
                    Some(w) => obj(&[
                        ("u", gaussian_json(&w.u)),
                        ("v", gaussian_json(&w.v)),
                        ("pairing", w.pairing.to_string()),
                    ]),
                };
                let warning = match &v.hypothesis_warning {
                    None => "null".to_string(),
                    Some(w) => fmt_str(w),
                };
                Ok(obj(&[
                    ("obstructed", v.obstructed.to_string()),
                    ("witness", witness),
                    ("searched_pairs", v.searched_pairs.to_string()),
                    ("hypothesis_warning", warning),
                ]))
            }
        },
        Command::Curve { command } => match command {
            CurveCommand::Count {
                poly,
                stein_lambda,
                radius,
                budget,
            } => {
                let target = curve_target(&poly, &stein_lambda, &budget)?;
                let r = count_intersections(&target, radius).map_err(CliError::Core)?;
                Ok(obj(&[
                    ("count", r.count.to_string()),
                    ("radius", fmt_f64(r.radius)),
                    ("residual", fmt_f64(r.residual)),
                ]))
            }
            CurveCommand::Compose { poly } => {
                let p = parse_laurent(&poly).map_err(CliError::Config)?;
                let g = compose_curve(&p);
                let terms: Vec<String> = g
                    .terms()
                    .iter()
                    .map(|(f, c)| {
                        obj(&[
                            ("frequency", fmt_complex(*f)),
                            ("coefficient", fmt_complex(*c)),
                        ])
                    })
                    .collect();
                Ok(obj(&[
                    ("terms", arr(&terms)),
                    ("nondegenerate", p.is_nondegenerate().to_string()),
                ]))
            }
            CurveCommand::Phicheck {
                samples,
                halfwidth,
                seed,
            } => {
                let injective =
                    phi_injectivity_seeded(samples, halfwidth, seed).map_err(CliError::Core)?;
                Ok(obj(&[
                    ("injective", injective.to_string()),
                    ("samples", samples.to_string()),
                    ("halfwidth", fmt_f64(halfwidth)),
                    ("seed", seed.to_string()),
                ]))
            }
        },
        Command::Sweep { command } => match command {
            SweepCommand::CurveCount {
                poly,
                stein_lambda,
                radii,
                budget,
            } => {
                let target = curve_target(&poly, &stein_lambda, &budget)?;
                let radii = parse_f64_list(&radii)?;
                let threads = thread_count().map_err(CliError::Config)?;
                let rows = crate::sweep::map_ordered(radii, threads, |r| {
                    count_intersections(&target, r).map(|c| (r, c))
                });
                let mut table =
                    CsvTable::new(vec!["requested_radius", "radius", "count", "residual"]);
                for row in rows {
                    let (r, c) = row.map_err(CliError::Core)?;
                    table.push(vec![
                        fmt_f64(r),
                        fmt_f64(c.radius),
                        c.count.to_string(),
                        fmt_f64(c.residual),
                    ]);
                }
                Ok(table.render())
            }
            SweepCommand::AnnulusZeros {
                point,
                r1,
                r2_list,
                budget,
            } => {
                let zb = point.branched()?;
                let b = budget.budget()?;
                let r2s = parse_f64_list(&r2_list)?;
                let threads = thread_count().map_err(CliError::Config)?;
                let rows = crate::sweep::map_ordered(r2s, threads, |r2| {
                    zero_count_annulus(&zb, r1, r2, &b).map(|w| (r2, w))
                });
                let mut table = CsvTable::new(vec!["r1", "r2", "count", "residual"]);
                for row in rows {
                    let (r2, w) = row.map_err(CliError::Core)?;
                    table.push(vec![
                        fmt_f64(r1),
                        fmt_f64(r2),
                        w.winding.to_string(),
                        fmt_f64(w.residual),
                    ]);
                }
                Ok(table.render())
            }
        },
    }
}

fn parse_f64_list(src: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for part in src.split(',') {
        let x: f64 = part
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("bad number '{part}' in list")))?;
        out.push(x);
    }
    if out.is_empty() {
        return Err(CliError::Config("empty list".into()));
    }
    Ok(out)
}
