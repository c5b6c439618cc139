//! The purely-cosmetic-surgery obstruction and census scanning.
//!
//! The verdict implements exactly the Jones-derivative obstruction plus the
//! ingested tau invariant: a knot with `V''(1) != 0` or `V'''(1) != 0`
//! admits no purely cosmetic surgeries, independently a knot with
//! `tau != 0` admits none, and otherwise the status is inconclusive with
//! the slope constraints (`r' = -r`, `q^2 = -1 (mod p)`) attached. `tau`
//! is never computed here; absence is distinct from zero.

use std::io::Read;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::alexander;
use crate::diagram::PlanarDiagram;
use crate::ftinv::{self, KnotInvariants};
use crate::poly::{rational_str, Rational};

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("cannot read census file: {0}")]
    Io(#[from] std::io::Error),
    #[error("census file has no `name,crossings,pd,tau` header")]
    MissingHeader,
}

/// Outcome of the obstruction for one knot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictStatus {
    #[serde(rename = "OBSTRUCTED_JONES")]
    ObstructedJones,
    #[serde(rename = "OBSTRUCTED_TAU")]
    ObstructedTau,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

/// The nonzero quantity justifying an obstructed verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub quantity: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub witness: Option<Witness>,
    pub constraints: Option<String>,
}

/// Constraint note attached to inconclusive verdicts: the only slope pairs
/// a purely cosmetic surgery could use.
pub const SLOPE_CONSTRAINTS: &str =
    "any purely cosmetic pair must be r' = -r with r = p/q and q^2 = -1 (mod p)";

/// Apply the obstruction to a computed invariant record and an optionally
/// ingested tau. Adding tau information never downgrades a Jones verdict.
pub fn verdict(inv: &KnotInvariants, tau: Option<i64>) -> Verdict {
    if !inv.d2v_at_one.is_zero() {
        return Verdict {
            status: VerdictStatus::ObstructedJones,
            witness: Some(Witness {
                quantity: "d2V1".to_string(),
                value: rational_str(&inv.d2v_at_one),
            }),
            constraints: None,
        };
    }
    if !inv.d3v_at_one.is_zero() {
        return Verdict {
            status: VerdictStatus::ObstructedJones,
            witness: Some(Witness {
                quantity: "d3V1".to_string(),
                value: rational_str(&inv.d3v_at_one),
            }),
            constraints: None,
        };
    }
    if let Some(t) = tau {
        if t != 0 {
            return Verdict {
                status: VerdictStatus::ObstructedTau,
                witness: Some(Witness {
                    quantity: "tau".to_string(),
                    value: t.to_string(),
                }),
                constraints: None,
            };
        }
    }
    Verdict {
        status: VerdictStatus::Inconclusive,
        witness: None,
        constraints: Some(SLOPE_CONSTRAINTS.to_string()),
    }
}

// ---------------------------------------------------------------------------
// slopes

/// A candidate slope pair `(p/q, -p/q)` surviving the number-theoretic
/// constraint `q^2 = -1 (mod p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SlopePair {
    pub p: u64,
    pub q: u64,
}

/// All `(p, q)` with `2 <= p <= p_max`, `0 < q <= p`, `gcd(p, q) = 1` and
/// `q^2 = -1 (mod p)`. `p = 1` is omitted: every residue satisfies the
/// congruence mod 1, so it carries no constraint content.
pub fn admissible_slopes(p_max: u64) -> Vec<SlopePair> {
    let mut out = Vec::new();
    for p in 2..=p_max {
        // squares mod 4 are {0, 1}: no solution when p = 0 or 3 (mod 4)
        if p % 4 == 0 || p % 4 == 3 {
            continue;
        }
        for q in 1..=p {
            if num_integer::Integer::gcd(&p, &q) == 1
                && (u128::from(q) * u128::from(q)) % u128::from(p) == u128::from(p - 1) % u128::from(p)
            {
                out.push(SlopePair { p, q });
            }
        }
    }
    out
}

/// `lambda_2(S^3_{p/q}(K)) - lambda_2(S^3_{-p/q}(K)) = w3 * 2q/p`, exact.
/// Zero exactly when `w3` is zero.
pub fn lambda2_difference(w3: &Rational, s: &SlopePair) -> Rational {
    w3 * Rational::new(BigInt::from(2 * s.q), BigInt::from(s.p))
}

// ---------------------------------------------------------------------------
// census scanning

/// One row of a census CSV after processing.
#[derive(Clone, Debug, Serialize)]
pub struct CensusEntry {
    pub name: String,
    pub crossings: usize,
    pub pd: String,
    pub tau: Option<i64>,
    pub invariants: KnotInvariants,
    /// `Delta''(1) = 2 a2`, reported for transparency (it vanishes exactly
    /// when the `d2V1` branch does)
    pub delta2: i64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowError {
    pub row: usize,
    pub name: String,
    pub error: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusSummary {
    pub total: usize,
    pub obstructed_jones: usize,
    pub obstructed_tau: usize,
    pub inconclusive: usize,
    pub errors: usize,
    pub inconclusive_names: Vec<String>,
}

/// Scan result; entries keep the input row order regardless of the
/// parallel execution.
#[derive(Clone, Debug)]
pub struct CensusReport {
    /// data-source note lifted from `# source:` comments in the file
    pub source_note: Option<String>,
    pub entries: Vec<CensusEntry>,
    pub errors: Vec<RowError>,
}

impl CensusReport {
    pub fn summary(&self) -> CensusSummary {
        let count = |s: VerdictStatus| {
            self.entries
                .iter()
                .filter(|e| e.verdict.status == s)
                .count()
        };
        CensusSummary {
            total: self.entries.len() + self.errors.len(),
            obstructed_jones: count(VerdictStatus::ObstructedJones),
            obstructed_tau: count(VerdictStatus::ObstructedTau),
            inconclusive: count(VerdictStatus::Inconclusive),
            errors: self.errors.len(),
            inconclusive_names: self
                .entries
                .iter()
                .filter(|e| e.verdict.status == VerdictStatus::Inconclusive)
                .map(|e| e.name.clone())
                .collect(),
        }
    }

    pub fn inconclusive_names(&self) -> Vec<String> {
        self.summary().inconclusive_names
    }
}

struct RawRow {
    row: usize,
    name: String,
    crossings: usize,
    pd: String,
    tau: Option<i64>,
}

/// Scan a census CSV (`name,crossings,pd,tau`; `tau` empty when unknown;
/// `#` comments allowed). Per-row failures are collected, not fatal; rows
/// are processed in parallel and reported in input order.
pub fn census_scan<R: Read>(reader: R) -> Result<CensusReport, CensusError> {
    let mut text = String::new();
    let mut reader = reader;
    reader.read_to_string(&mut text)?;

    let mut source_note: Option<String> = None;
    for line in text.lines() {
        if let Some(note) = line.trim().strip_prefix("# source:") {
            source_note = Some(note.trim().to_string());
        }
    }

    let mut rows: Vec<RawRow> = Vec::new();
    let mut errors: Vec<(usize, RowError)> = Vec::new();
    let mut csv = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    {
        let headers = csv.headers().map_err(|_| CensusError::MissingHeader)?;
        let expect = ["name", "crossings", "pd", "tau"];
        if headers.iter().take(4).ne(expect) {
            return Err(CensusError::MissingHeader);
        }
    }
    for (idx, record) in csv.records().enumerate() {
        let row = idx + 1;
        match record {
            Err(e) => errors.push((
                row,
                RowError {
                    row,
                    name: String::new(),
                    error: e.to_string(),
                },
            )),
            Ok(r) => {
                let name = r.get(0).unwrap_or("").to_string();
                let parse = || -> Result<RawRow, String> {
                    let crossings: usize = r
                        .get(1)
                        .ok_or("missing crossings column")?
                        .parse()
                        .map_err(|e| format!("bad crossings column: {e}"))?;
                    let pd = r.get(2).ok_or("missing pd column")?.to_string();
                    let tau_field = r.get(3).unwrap_or("");
                    let tau = if tau_field.is_empty() {
                        None
                    } else {
                        Some(
                            tau_field
                                .parse::<i64>()
                                .map_err(|e| format!("bad tau column: {e}"))?,
                        )
                    };
                    Ok(RawRow {
                        row,
                        name: name.clone(),
                        crossings,
                        pd,
                        tau,
                    })
                };
                match parse() {
                    Ok(raw) => rows.push(raw),
                    Err(error) => errors.push((
                        row,
                        RowError {
                            row,
                            name,
                            error,
                        },
                    )),
                }
            }
        }
    }

    let mut computed: Vec<(usize, Result<CensusEntry, RowError>)> = rows
        .par_iter()
        .map(|raw| {
            let result = (|| -> Result<CensusEntry, String> {
                let d = PlanarDiagram::parse(&raw.pd).map_err(|e| e.to_string())?;
                let invariants = ftinv::invariants(&d).map_err(|e| e.to_string())?;
                let delta2 = 2 * alexander::a2(&d).map_err(|e| e.to_string())?;
                let verdict = verdict(&invariants, raw.tau);
                Ok(CensusEntry {
                    name: raw.name.clone(),
                    crossings: raw.crossings,
                    pd: raw.pd.clone(),
                    tau: raw.tau,
                    invariants,
                    delta2,
                    verdict,
                })
            })();
            (
                raw.row,
                result.map_err(|error| RowError {
                    row: raw.row,
                    name: raw.name.clone(),
                    error,
                }),
            )
        })
        .collect();
    computed.sort_by_key(|(row, _)| *row);

    let mut entries = Vec::new();
    for (row, result) in computed {
        match result {
            Ok(e) => entries.push(e),
            Err(e) => errors.push((row, e)),
        }
    }
    errors.sort_by_key(|(row, _)| *row);
    Ok(CensusReport {
        source_note,
        entries,
        errors: errors.into_iter().map(|(_, e)| e).collect(),
    })
}

pub fn census_scan_path(path: &std::path::Path) -> Result<CensusReport, CensusError> {
    census_scan(std::fs::File::open(path)?)
}
