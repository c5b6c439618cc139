//! Command-line front end. Machine-readable JSON on stdout by default
//! (`--format text` for a human layout); diagnostics on stderr; exit code
//! 0 on success, 1 on computation errors, 2 on usage errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cosmetic;
use crate::diagram::PlanarDiagram;
use crate::families::{self, ConwayFormParams, WhiteheadParams};
use crate::ftinv;
use crate::poly::{rational_str, Rational};
use crate::verify::{self, VerifyOptions};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser)]
#[command(
    name = "knotinv",
    version,
    about = "Exact knot invariants and the purely-cosmetic-surgery obstruction"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct DiagramInput {
    /// File containing PD text
    file: Option<PathBuf>,
    /// PD text inline, e.g. "X(4,2,5,1) X(2,6,3,5) X(6,4,1,3)"
    #[arg(long)]
    pd: Option<String>,
    /// Use the 0-crossing unknot diagram
    #[arg(long)]
    unknot: bool,
}

impl DiagramInput {
    fn load(&self) -> Result<PlanarDiagram, String> {
        match (&self.file, &self.pd, self.unknot) {
            (None, None, true) => Ok(PlanarDiagram::unknot()),
            (None, Some(text), false) => PlanarDiagram::parse(text).map_err(|e| e.to_string()),
            (Some(path), None, false) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                PlanarDiagram::parse(&text).map_err(|e| e.to_string())
            }
            _ => Err("give exactly one of: a PD file, --pd, or --unknot".to_string()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute a2, Jones derivatives at t = 1, w3, v2, v3 of a knot diagram
    Invariants(DiagramInput),
    /// Apply the cosmetic-surgery obstruction to a knot diagram
    Verdict {
        #[command(flatten)]
        input: DiagramInput,
        /// Ingested tau invariant (omit when unknown; 0 must be explicit)
        #[arg(long)]
        tau: Option<i64>,
    },
    /// Closed-form invariants of a two-bridge knot in Conway form
    Twobridge {
        /// Parameters b1,c1,...,bm,cm (nonzero integers)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        conway: Vec<i64>,
        /// Also generate the diagram and cross-check through the full pipeline
        #[arg(long)]
        diagram: bool,
    },
    /// Closed-form invariants of a positive n-twisted Whitehead double
    Whitehead {
        /// Twist parameter n
        #[arg(long, allow_hyphen_values = true)]
        twist: i64,
        /// a2 of the companion knot (default 0: unknot companion)
        #[arg(long = "companion-a2", default_value_t = 0)]
        companion_a2: i64,
    },
    /// Enumerate candidate slope pairs with q^2 = -1 (mod p)
    Slopes {
        /// Upper bound on p
        #[arg(long)]
        pmax: u64,
    },
    /// Scan a census CSV (name,crossings,pd,tau) and report verdicts
    Census {
        /// CSV path
        file: PathBuf,
    },
    /// Run the full exact verification suite
    Verify {
        /// Bound on |b_i|, |c_i| in the closed-vs-diagram grid
        #[arg(long, default_value_t = 2)]
        grid_max: i64,
        /// Bound on the genus m in the closed-vs-diagram grid
        #[arg(long, default_value_t = 3)]
        genus_max: usize,
        /// Census CSV for the exception-list criterion
        #[arg(long, default_value = default_census_path())]
        census: PathBuf,
    },
}

/// Bundled location of the full census (present only after fetching the
/// external data; see tools/fetch_census.py).
fn default_census_path() -> &'static str {
    concat!(env!("CARGO_MANIFEST_DIR"), "/data/census/knots11.csv")
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(value).expect("serializable")),
        Format::Text => println!("{}", text()),
    }
}

fn dispatch(cli: &Cli) -> Result<i32, String> {
    match &cli.command {
        Command::Invariants(input) => {
            let d = input.load()?;
            let inv = ftinv::invariants(&d).map_err(|e| e.to_string())?;
            emit(cli.format, &inv, || {
                format!(
                    "a2 = {}\nV(1) = {}\nV'(1) = {}\nV''(1) = {}\nV'''(1) = {}\nw3 = {}\nv2 = {}\nv3 = {}",
                    inv.a2,
                    rational_str(&inv.v_at_one),
                    rational_str(&inv.dv_at_one),
                    rational_str(&inv.d2v_at_one),
                    rational_str(&inv.d3v_at_one),
                    rational_str(&inv.w3),
                    inv.v2,
                    inv.v3
                )
            });
            Ok(0)
        }
        Command::Verdict { input, tau } => {
            let d = input.load()?;
            let inv = ftinv::invariants(&d).map_err(|e| e.to_string())?;
            let v = cosmetic::verdict(&inv, *tau);
            emit(cli.format, &v, || match (&v.witness, &v.constraints) {
                (Some(w), _) => format!("{:?}: {} = {}", v.status, w.quantity, w.value),
                (None, Some(c)) => format!("{:?}: {c}", v.status),
                _ => format!("{:?}", v.status),
            });
            Ok(0)
        }
        Command::Twobridge { conway, diagram } => {
            let params = ConwayFormParams::from_flat(conway).map_err(|e| e.to_string())?;
            let (alpha, beta) = families::continued_fraction(&params).map_err(|e| e.to_string())?;
            let a2 = families::a2_closed(&params);
            let v3 = families::v3_closed(&params);
            let w3 = Rational::new((-v3).into(), 2.into());
            let genus2_form = (params.genus() == 2)
                .then(|| families::genus2_form_check(&params).expect("genus checked"));
            let recursions = families::recursion_checks(&params);
            let mut out = json!({
                "params": conway,
                "genus": params.genus(),
                "fraction": format!("{alpha}/{beta}"),
                "a2": a2,
                "v3": v3,
                "w3": rational_str(&w3),
                "genus2_form": genus2_form,
                "recursions_ok": recursions.all_ok(),
            });
            let mut text = format!(
                "K_{:?}: genus {}, fraction {alpha}/{beta}\na2 = {a2}\nv3 = {v3}\nw3 = {}\nrecursion lemmas: {}",
                conway,
                params.genus(),
                rational_str(&w3),
                if recursions.all_ok() { "ok" } else { "FAILED" }
            );
            if let Some(form) = genus2_form {
                text.push_str(&format!("\ngenus-2 vanishing form K_{{x,y,-x-y,x}}: {form}"));
            }
            if *diagram {
                let d = families::twobridge_diagram(&params);
                let inv = ftinv::invariants(&d).map_err(|e| e.to_string())?;
                let matches = inv.a2 == a2 && inv.v3 == v3;
                out["diagram"] = json!({
                    "pd": d.pd_text(),
                    "crossings": d.crossing_count(),
                    "a2": inv.a2,
                    "v3": inv.v3,
                    "matches": matches,
                });
                text.push_str(&format!(
                    "\ndiagram: {} crossings, a2 = {}, v3 = {}, matches closed forms: {matches}",
                    d.crossing_count(),
                    inv.a2,
                    inv.v3
                ));
                if !matches {
                    return Err("diagram pipeline disagrees with closed formulas".to_string());
                }
            }
            emit(cli.format, &out, || text);
            Ok(0)
        }
        Command::Whitehead { twist, companion_a2 } => {
            let params = WhiteheadParams {
                n: *twist,
                companion_a2: *companion_a2,
            };
            let (a2, v3, delta) = families::whitehead_invariants(&params);
            let out = json!({
                "n": params.n,
                "companion_a2": params.companion_a2,
                "a2": a2,
                "v3": v3,
                "alexander": delta.t_string(),
            });
            emit(cli.format, &out, || {
                format!(
                    "D+(K, {}) with a2(K) = {}\na2 = {a2}\nv3 = {v3}\nalexander = {}",
                    params.n,
                    params.companion_a2,
                    delta.t_string()
                )
            });
            Ok(0)
        }
        Command::Slopes { pmax } => {
            let pairs = cosmetic::admissible_slopes(*pmax);
            let out = json!({ "pmax": pmax, "pairs": pairs });
            emit(cli.format, &out, || {
                pairs
                    .iter()
                    .map(|s| format!("{}/{}", s.p, s.q))
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            Ok(0)
        }
        Command::Census { file } => {
            let report = cosmetic::census_scan_path(file).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::to_string(&json!({"header": {
                            "census": file.display().to_string(),
                            "source": report.source_note,
                        }}))
                        .expect("serializable")
                    );
                    for e in &report.entries {
                        println!("{}", serde_json::to_string(e).expect("serializable"));
                    }
                    for err in &report.errors {
                        println!(
                            "{}",
                            serde_json::to_string(&json!({ "error": err })).expect("serializable")
                        );
                    }
                    println!(
                        "{}",
                        serde_json::to_string(&json!({"summary": report.summary()}))
                            .expect("serializable")
                    );
                }
                Format::Text => {
                    if let Some(src) = &report.source_note {
                        println!("# source: {src}");
                    }
                    for e in &report.entries {
                        println!(
                            "{}\t{}\tv2={} v3={}",
                            e.name,
                            match e.verdict.status {
                                cosmetic::VerdictStatus::ObstructedJones => "OBSTRUCTED_JONES",
                                cosmetic::VerdictStatus::ObstructedTau => "OBSTRUCTED_TAU",
                                cosmetic::VerdictStatus::Inconclusive => "INCONCLUSIVE",
                            },
                            e.invariants.v2,
                            e.invariants.v3
                        );
                    }
                    for err in &report.errors {
                        eprintln!("row {} ({}): {}", err.row, err.name, err.error);
                    }
                    let s = report.summary();
                    println!(
                        "total {} | jones {} | tau {} | inconclusive {} | errors {}",
                        s.total, s.obstructed_jones, s.obstructed_tau, s.inconclusive, s.errors
                    );
                }
            }
            Ok(if report.errors.is_empty() { 0 } else { 1 })
        }
        Command::Verify {
            grid_max,
            genus_max,
            census,
        } => {
            let opts = VerifyOptions {
                grid_max: *grid_max,
                genus_max: *genus_max,
                census: Some(census.clone()),
            };
            let checks = verify::run_all(&opts);
            let all_passed = checks.iter().all(|c| c.passed);
            match cli.format {
                Format::Json => {
                    let out = json!({
                        "checks": checks.iter().map(|c| json!({
                            "name": c.name,
                            "passed": c.passed,
                            "seconds": c.seconds,
                            "detail": c.detail,
                        })).collect::<Vec<_>>(),
                        "all_passed": all_passed,
                    });
                    println!("{}", serde_json::to_string(&out).expect("serializable"));
                }
                Format::Text => {
                    for c in &checks {
                        println!(
                            "{} {:<28} ({:>7.2}s)  {}",
                            if c.passed { "PASS" } else { "FAIL" },
                            c.name,
                            c.seconds,
                            c.detail
                        );
                    }
                }
            }
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}
