//! `witt`: a command-line front end for exact signature, residue, and
//! spectral-sequence computations.  Every subcommand prints a single JSON
//! document on stdout.  Exit codes: 0 success, 1 domain error (with an error
//! JSON), 2 usage or syntax error.

mod parse;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num::BigInt;
use serde_json::{json, Value};

use parse::CliParseError;
use witt_core::forms::{invariants_q, witt_equal, FieldTag};
use witt_core::homology::{
    betti_rank_bounds, build_thm_a_e2, cohomology, lens_complex, run_forced, smith_normal_form,
    AbutmentReport, FGAbGroup, IntMatrix, PageBidegree, WittReport,
};
use witt_core::residues::{second_residue, theorem_b_section_check, unramified_member, ResidueClass};
use witt_core::signatures::{sign_at, total_signature};
use witt_core::spectrum::{beta, OpenSet};

#[derive(Parser)]
#[command(name = "witt", version, about = "Exact Witt-group and signature calculator")]
struct Cli {
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Emit machine JSON (the default; accepted for symmetry with --pretty).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Signature of a form at one ordering point.
    Sign {
        #[arg(long)]
        form: String,
        #[arg(long, default_value = "Q")]
        field: String,
        /// Ordering point: Q, -inf, +inf, left(a), right(a).
        #[arg(long, default_value = "Q")]
        at: String,
    },
    /// Total signature of a form as a step function on the real line.
    TotalSign {
        #[arg(long)]
        form: String,
        #[arg(long, default_value = "Qt")]
        field: String,
        /// Level hint j: breakpoint values are certified divisible by 2^j.
        #[arg(long, default_value_t = 0)]
        level: u32,
    },
    /// Second residue of a form at a place.
    Residue {
        #[arg(long)]
        form: String,
        #[arg(long, default_value = "Qt")]
        field: String,
        /// Place: a linear polynomial (t-2), inf, quad:t^2+1, or p:5.
        #[arg(long)]
        at: String,
    },
    /// Signature jump 2x across a real place of the total-signature function.
    Beta {
        #[arg(long)]
        form: String,
        #[arg(long, default_value = "Qt")]
        field: String,
        #[arg(long)]
        at: String,
    },
    /// Whether a form is unramified over the affine line minus given points.
    Unramified {
        #[arg(long)]
        form: String,
        #[arg(long, default_value = "Qt")]
        field: String,
        /// Comma-separated places to remove.
        #[arg(long, default_value = "")]
        remove: String,
    },
    /// Witt-class equality of two forms.
    WittEq {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Classical invariants of a form over Q.
    Invariants {
        #[arg(long)]
        form: String,
    },
    /// Section-level generator/injectivity report over an affine open.
    #[command(name = "thmB")]
    ThmB {
        /// Comma-separated rational points to remove.
        #[arg(long, default_value = "")]
        remove: String,
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[arg(long, default_value_t = 20)]
        trials: u32,
    },
    /// Build the first page from Betti/torsion data and report forced
    /// consequences on the four Witt diagonals.
    Ss {
        /// Comma-separated Betti numbers b_0,...,b_d.
        #[arg(long)]
        betti: String,
        /// Comma-separated odd-torsion summands deg:n, e.g. 4:7.
        #[arg(long, default_value = "")]
        torsion: String,
        #[arg(long)]
        dim: usize,
        /// Treat the input as affine (kills differentials out of column 0).
        #[arg(long)]
        affine: bool,
        /// Differential bidegree convention: "r,1-r" or "r,r-1".
        #[arg(long, default_value = "r,1-r")]
        bidegree: String,
    },
    /// Rank bounds for the four Witt groups from Betti numbers alone.
    Bounds {
        #[arg(long)]
        betti: String,
        #[arg(long)]
        dim: usize,
    },
    /// Lens-space fixture: cochain cohomology and the forced Witt report.
    Lens {
        /// Odd dimension of the lens space.
        #[arg(long)]
        n: u32,
        /// Order of the cyclic group.
        #[arg(long)]
        p: u64,
        #[arg(long)]
        affine: bool,
    },
    /// Smith normal form of an integer matrix given as a JSON array of rows.
    Snf {
        #[arg(long)]
        matrix: String,
    },
}

enum AppError {
    /// Bad input text or flags: exit 2.
    Usage(String),
    /// A well-formed request the library rejects: exit 1.
    Domain(String),
}

impl From<CliParseError> for AppError {
    fn from(e: CliParseError) -> Self {
        match e {
            CliParseError::Syntax(s) => AppError::Usage(s.to_string()),
            CliParseError::Domain(d) => AppError::Domain(d.to_string()),
        }
    }
}

impl From<witt_core::Error> for AppError {
    fn from(e: witt_core::Error) -> Self {
        AppError::Domain(e.to_string())
    }
}

type AppResult = Result<Value, AppError>;

fn usage(msg: impl Into<String>) -> AppError {
    AppError::Usage(msg.into())
}

fn big(v: &BigInt) -> Value {
    match i64::try_from(v.clone()) {
        Ok(n) => json!(n),
        Err(_) => json!(v.to_string()),
    }
}

fn group_str(g: &FGAbGroup) -> Value {
    json!(g.to_string())
}

fn witt_report_json(r: &WittReport) -> Value {
    match r {
        WittReport::Iso { degree, group } => json!({
            "degree": degree,
            "kind": "iso",
            "group": group_str(group),
        }),
        WittReport::Extension { degree, sub, quot } => json!({
            "degree": degree,
            "kind": "extension",
            "sub": group_str(sub),
            "quot": group_str(quot),
        }),
        WittReport::LeftExact { degree, sub, quot } => json!({
            "degree": degree,
            "kind": "left_exact",
            "sub": group_str(sub),
            "quot": group_str(quot),
        }),
        WittReport::Bounded {
            degree,
            rank_bound,
            exponent_bound,
        } => json!({
            "degree": degree,
            "kind": "bounded",
            "rank_bound": rank_bound,
            "exponent_bound": big(exponent_bound),
        }),
    }
}

fn abutment_json(r: &AbutmentReport) -> Value {
    json!({
        "affine": r.affine,
        "diagonals": r.diagonals.iter().map(witt_report_json).collect::<Vec<_>>(),
    })
}

fn parse_usize_list(text: &str, what: &str) -> Result<Vec<usize>, AppError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad {what} entry '{s}'")))
        })
        .collect()
}

fn parse_torsion(text: &str) -> Result<Vec<(usize, u64)>, AppError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let (deg, n) = s
                .trim()
                .split_once(':')
                .ok_or_else(|| usage(format!("bad torsion entry '{s}', expected deg:n")))?;
            let deg = deg
                .parse::<usize>()
                .map_err(|_| usage(format!("bad torsion degree '{deg}'")))?;
            let n = n
                .parse::<u64>()
                .map_err(|_| usage(format!("bad torsion order '{n}'")))?;
            if n < 2 {
                return Err(usage(format!("torsion order must be >= 2, got {n}")));
            }
            Ok((deg, n))
        })
        .collect()
}

fn parse_bidegree(text: &str) -> Result<PageBidegree, AppError> {
    match text {
        "r,1-r" | "1-r" => Ok(PageBidegree::R1MinusR),
        "r,r-1" | "r-1" => Ok(PageBidegree::RRMinus1),
        _ => Err(usage(format!(
            "bad bidegree '{text}', expected 'r,1-r' or 'r,r-1'"
        ))),
    }
}

fn env_seed() -> Result<u64, AppError> {
    match std::env::var("WITT_SEED") {
        Ok(s) => s
            .parse::<u64>()
            .map_err(|_| usage(format!("WITT_SEED must be an unsigned integer, got '{s}'"))),
        Err(_) => Ok(0),
    }
}

fn residue_json(r: &ResidueClass) -> Value {
    match r {
        ResidueClass::Form(f) => {
            if f.rank() == 0 {
                json!({ "residue": "0" })
            } else {
                json!({ "residue": f.to_string() })
            }
        }
        ResidueClass::Signature(s) => json!({ "residue": { "signature": s } }),
        ResidueClass::Parity(k) => json!({ "residue": { "parity": k } }),
    }
}

fn field(text: &str) -> Result<FieldTag, AppError> {
    Ok(parse::parse_field(text)?)
}

fn run(cmd: &Cmd) -> AppResult {
    match cmd {
        Cmd::Sign { form, field: f, at } => {
            let tag = field(f)?;
            let form = parse::parse_form(form, tag)?;
            let pt = parse::parse_ordering_pt(at)?;
            let s = sign_at(&form, &pt)?;
            Ok(json!({ "signature": s }))
        }
        Cmd::TotalSign {
            form,
            field: f,
            level,
        } => {
            let tag = field(f)?;
            if !tag.is_function_field() {
                return Err(usage("total-sign needs a function field (Qt or RalgT)"));
            }
            let form = parse::parse_form(form, tag)?;
            let s = total_signature(&form, *level)?;
            Ok(serde_json::to_value(s.to_json()).expect("step function serializes"))
        }
        Cmd::Residue { form, field: f, at } => {
            let tag = field(f)?;
            let form = parse::parse_form(form, tag)?;
            let place = parse::parse_place(at)?;
            let r = second_residue(&form, &place)?;
            Ok(residue_json(&r))
        }
        Cmd::Beta { form, field: f, at } => {
            let tag = field(f)?;
            let form = parse::parse_form(form, tag)?;
            let place = parse::parse_place(at)?;
            let s = total_signature(&form, 0)?;
            let b = beta(&s, &place)?;
            Ok(json!({ "beta": big(&b) }))
        }
        Cmd::Unramified {
            form,
            field: f,
            remove,
        } => {
            let tag = field(f)?;
            let form = parse::parse_form(form, tag)?;
            let removed = parse::parse_places(remove)?;
            let u = OpenSet::affine_minus(removed);
            let ok = unramified_member(&form, &u)?;
            Ok(json!({ "unramified": ok }))
        }
        Cmd::WittEq { lhs, rhs, field: f } => {
            let tag = field(f)?;
            let lhs = parse::parse_form(lhs, tag)?;
            let rhs = parse::parse_form(rhs, tag)?;
            let eq = witt_equal(&lhs, &rhs)?;
            Ok(json!({ "equal": eq }))
        }
        Cmd::Invariants { form } => {
            let form = parse::parse_form(form, FieldTag::Q)?;
            let inv = invariants_q(&form)?;
            Ok(json!({
                "rank_mod2": inv.rank_mod2,
                "signed_disc": inv.signed_disc.to_string(),
                "hasse_minus": inv.hasse_minus.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "signature": inv.signature,
            }))
        }
        Cmd::ThmB {
            remove,
            level,
            trials,
        } => {
            let removed = parse::parse_places(remove)?;
            let u = OpenSet::affine_minus(removed);
            let seed = env_seed()?;
            let report = theorem_b_section_check(&u, *level, *trials, seed)?;
            Ok(json!({
                "all_pass": report.all_pass(),
                "items": report.items.iter().map(|i| json!({
                    "label": i.label,
                    "pass": i.pass,
                })).collect::<Vec<_>>(),
                "section_rank": report.section_rank,
            }))
        }
        Cmd::Ss {
            betti,
            torsion,
            dim,
            affine,
            bidegree,
        } => {
            let betti = parse_usize_list(betti, "betti")?;
            if betti.len() != dim + 1 {
                return Err(usage(format!(
                    "need {} Betti numbers for dim {dim}, got {}",
                    dim + 1,
                    betti.len()
                )));
            }
            let torsion = parse_torsion(torsion)?;
            let convention = parse_bidegree(bidegree)?;
            let mut groups: Vec<FGAbGroup> =
                betti.iter().map(|&b| FGAbGroup::free(b)).collect();
            for (deg, n) in torsion {
                if deg > *dim {
                    return Err(usage(format!("torsion degree {deg} exceeds dim {dim}")));
                }
                groups[deg] = groups[deg].direct_sum(&FGAbGroup::cyclic(n));
            }
            let page = build_thm_a_e2(&groups, *dim, convention)?;
            let report = run_forced(&page, *affine)?;
            Ok(abutment_json(&report))
        }
        Cmd::Bounds { betti, dim } => {
            let betti = parse_usize_list(betti, "betti")?;
            if betti.len() != dim + 1 {
                return Err(usage(format!(
                    "need {} Betti numbers for dim {dim}, got {}",
                    dim + 1,
                    betti.len()
                )));
            }
            let b = betti_rank_bounds(&betti, *dim);
            Ok(json!({ "W0": b[0], "W1": b[1], "W2": b[2], "W3": b[3] }))
        }
        Cmd::Lens { n, p, affine } => {
            let diffs = lens_complex(*n, *p)?;
            let groups = cohomology(&diffs)?;
            let page = build_thm_a_e2(&groups, *n as usize, PageBidegree::R1MinusR)?;
            let report = run_forced(&page, *affine)?;
            Ok(json!({
                "cohomology": groups.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "witt": abutment_json(&report),
            }))
        }
        Cmd::Snf { matrix } => {
            let rows: Vec<Vec<i64>> = serde_json::from_str(matrix)
                .map_err(|e| usage(format!("bad matrix JSON: {e}")))?;
            if rows.is_empty() {
                return Err(usage("matrix needs at least one row"));
            }
            let w = rows[0].len();
            if rows.iter().any(|r| r.len() != w) {
                return Err(usage("matrix rows have unequal lengths"));
            }
            let m = IntMatrix::from_rows(rows);
            let (u, d, v) = smith_normal_form(&m);
            let mat_json = |m: &IntMatrix| -> Value {
                (0..m.rows())
                    .map(|i| (0..m.cols()).map(|j| big(m.get(i, j))).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
                    .into()
            };
            let diag: Vec<Value> = (0..d.rows().min(d.cols()))
                .map(|i| big(d.get(i, i)))
                .filter(|v| v != &json!(0))
                .collect();
            Ok(json!({
                "d": mat_json(&d),
                "diagonal": diag,
                "u": mat_json(&u),
                "v": mat_json(&v),
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.cmd) {
        Ok(v) => {
            if cli.pretty {
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            } else {
                println!("{}", serde_json::to_string(&v).expect("serializable"));
            }
            ExitCode::SUCCESS
        }
        Err(AppError::Domain(msg)) => {
            println!("{}", json!({ "error": msg, "kind": "domain" }));
            ExitCode::from(1)
        }
        Err(AppError::Usage(msg)) => {
            println!("{}", json!({ "error": msg, "kind": "usage" }));
            ExitCode::from(2)
        }
    }
}
