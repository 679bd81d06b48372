use anyhow::{bail, Result};
use clap::Subcommand;
use diffset::arith::primitive_root;
use diffset::cyclotomy::{
    classify_type_o, classify_type_o0, cyclotomic_numbers, enumerate_norm_solutions, family_viable,
    octic_closed_form, octic_ds_test, scan, sign_normalization, solve_octic_systems, OcticCase,
    OcticTarget, OcticVerdict, QuadReps, DEFAULT_VERIFY_LIMIT,
};
use diffset::DsParams;
use serde::Serialize;

use crate::{emit, Verdict};

#[derive(Subcommand)]
pub enum OcticCommand {
    /// Cyclotomic numbers of order e, with the closed form when e = 8.
    Table {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 8)]
        e: u64,
        /// Generator; the least primitive root by default.
        #[arg(long)]
        g: Option<u64>,
    },
    /// Type O, Type O0 and difference-set verdicts for one prime.
    Classify {
        #[arg(long)]
        p: u64,
        /// Build and check the set directly up to this prime.
        #[arg(long, default_value_t = DEFAULT_VERIFY_LIMIT)]
        verify_limit: u64,
    },
    /// Every prime 1 mod 8 up to a bound with an octic ADS or DS.
    Scan {
        #[arg(long)]
        max: u64,
        #[arg(long, default_value_t = DEFAULT_VERIFY_LIMIT)]
        verify_limit: u64,
    },
    /// Elements of b² - 2y² = N and the values a² + 2b².
    Norms {
        #[arg(long = "N", allow_hyphen_values = true)]
        n: i64,
        /// Taken from the solved systems when omitted.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i64>,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Keep only prime (or probable prime) values.
        #[arg(long)]
        primes_only: bool,
    },
    /// Solve the order-8 ADS equations for one case.
    Systems {
        /// 1q, 1n, 9q or 9n: p mod 16 and whether 2 is a quartic residue.
        #[arg(long)]
        case: OcticCase,
        #[arg(long)]
        target: OcticTarget,
        /// Only norm families that can contain primes.
        #[arg(long)]
        viable_only: bool,
    },
}

#[derive(Serialize)]
struct ClosedForm {
    case: OcticCase,
    reps: QuadReps,
    numbers: Vec<Vec<u64>>,
}

#[derive(Serialize)]
struct TableOutput {
    p: u64,
    e: u64,
    f: u64,
    generator: u64,
    numbers: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<ClosedForm>,
}

#[derive(Serialize)]
struct ClassifyOutput {
    p: u64,
    case: OcticCase,
    reps: QuadReps,
    type_o: OcticVerdict,
    type_o0: OcticVerdict,
    ds: Option<DsParams>,
}

#[derive(Serialize)]
struct SystemRow {
    #[serde(flatten)]
    solution: diffset::cyclotomy::SystemSolution,
    viable: bool,
}

/// `a` of the retained family with this norm, if the systems give one.
fn family_a(n: i64) -> Option<i64> {
    OcticTarget::ALL
        .into_iter()
        .flat_map(|t| OcticCase::ALL.into_iter().flat_map(move |c| solve_octic_systems(c, t)))
        .find(|r| r.prime.is_none() && r.norm == n)
        .map(|r| r.a)
}

pub fn run(cmd: OcticCommand, pretty: bool) -> Result<Verdict> {
    match cmd {
        OcticCommand::Table { p, e, g } => {
            let g = match g {
                Some(g) => g,
                None => primitive_root(p)?,
            };
            let table = cyclotomic_numbers(p, e, g)?;
            let closed_form = if e == 8 {
                let reps = sign_normalization(p, g)?;
                let case = OcticCase::of(p)?;
                let closed = octic_closed_form(p, &reps, case)?;
                if closed.numbers != table.numbers {
                    bail!("closed form disagrees with enumeration at p = {p}");
                }
                Some(ClosedForm { case, reps, numbers: closed.numbers })
            } else {
                None
            };
            emit(
                &TableOutput { p, e, f: table.f, generator: g, numbers: table.numbers, closed_form },
                pretty,
            )?;
            Ok(Verdict::Pass)
        }
        OcticCommand::Classify { p, verify_limit } => {
            let g = primitive_root(p)?;
            let out = ClassifyOutput {
                p,
                case: OcticCase::of(p)?,
                reps: sign_normalization(p, g).or_else(|_| diffset::cyclotomy::quad_representations(p))?,
                type_o: classify_type_o(p, verify_limit)?,
                type_o0: classify_type_o0(p, verify_limit)?,
                ds: octic_ds_test(p)?,
            };
            let found = out.type_o.ads.is_some() || out.type_o0.ads.is_some() || out.ds.is_some();
            emit(&out, pretty)?;
            Ok(if found { Verdict::Pass } else { Verdict::Negative })
        }
        OcticCommand::Scan { max, verify_limit } => {
            let rows = scan(max, verify_limit)?;
            emit(&rows, pretty)?;
            Ok(if rows.is_empty() { Verdict::Negative } else { Verdict::Pass })
        }
        OcticCommand::Norms { n, a, count, primes_only } => {
            let Some(a) = a.or_else(|| family_a(n)) else {
                bail!("no solved family has norm {n}; pass --a");
            };
            let mut sols = enumerate_norm_solutions(n, a, count)?;
            if primes_only {
                sols.retain(|s| s.primality.is_prime());
            }
            emit(&sols, pretty)?;
            Ok(if sols.is_empty() { Verdict::Negative } else { Verdict::Pass })
        }
        OcticCommand::Systems { case, target, viable_only } => {
            let rows: Vec<SystemRow> = solve_octic_systems(case, target)
                .into_iter()
                .map(|s| {
                    let viable = s.prime.is_some() || family_viable(s.a, s.norm);
                    SystemRow { solution: s, viable }
                })
                .filter(|r| r.viable || !viable_only)
                .collect();
            emit(&rows, pretty)?;
            Ok(if rows.is_empty() { Verdict::Negative } else { Verdict::Pass })
        }
    }
}
