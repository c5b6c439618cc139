//! The exact verification suite: every identity the engine is contracted
//! to satisfy, runnable as one batch (`knotinv verify`) and asserted
//! criterion-by-criterion in the acceptance tests.
//!
//! All checks are exact polynomial or integer identities; the only
//! tolerances are wall-clock budgets on the three heavyweight sweeps.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::alexander;
use crate::cosmetic::{self, VerdictStatus};
use crate::diagram::PlanarDiagram;
use crate::families::{self, ConwayFormParams};
use crate::ftinv;
use crate::jones;
use crate::poly::{HalfIntLaurent, Rational};

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Check {
    fn finish(name: &'static str, start: Instant, passed: bool, detail: String) -> Check {
        Check {
            name,
            passed,
            detail,
            seconds: start.elapsed().as_secs_f64(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// bound on `|b_i|, |c_i|` in the closed-vs-diagram grid
    pub grid_max: i64,
    /// bound on the genus `m` in the closed-vs-diagram grid
    pub genus_max: usize,
    /// census CSV for the exception-list criterion
    pub census: Option<PathBuf>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            grid_max: 2,
            genus_max: 3,
            census: None,
        }
    }
}

pub const TREFOIL_RIGHT_PD: &str = "X(4,2,5,1) X(2,6,3,5) X(6,4,1,3)";
pub const TREFOIL_LEFT_PD: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
pub const FIGURE_EIGHT_PD: &str = "X(4,2,5,1) X(2,7,3,8) X(8,6,1,5) X(6,3,7,4)";

/// The diagrams every identity sweep runs over: generated two-bridge
/// forms, twist knots, and (when a census file is supplied) its knots with
/// at most `census_max_crossings` crossings.
pub fn corpus(census: Option<&Path>, census_max_crossings: usize) -> Vec<(String, PlanarDiagram)> {
    let mut out: Vec<(String, PlanarDiagram)> = Vec::new();
    out.push((
        "trefoil_right".into(),
        PlanarDiagram::parse(TREFOIL_RIGHT_PD).unwrap(),
    ));
    out.push((
        "trefoil_left".into(),
        PlanarDiagram::parse(TREFOIL_LEFT_PD).unwrap(),
    ));
    out.push((
        "figure_eight".into(),
        PlanarDiagram::parse(FIGURE_EIGHT_PD).unwrap(),
    ));
    for n in -4i64..=4 {
        out.push((format!("twist({n})"), families::twist_knot_diagram(n)));
    }
    for b in [-2i64, -1, 1, 2] {
        for c in [-2i64, -1, 1, 2] {
            let p = ConwayFormParams::new(vec![(b, c)]).unwrap();
            out.push((format!("K({b},{c})"), families::twobridge_diagram(&p)));
        }
    }
    for flat in [
        vec![1i64, 1, 1, 1],
        vec![1, 2, -1, 1],
        vec![2, -1, 1, 2],
        vec![1, 1, -2, 1],
        vec![1, 1, 1, 1, 1, 1],
    ] {
        let p = ConwayFormParams::from_flat(&flat).unwrap();
        out.push((format!("K{flat:?}"), families::twobridge_diagram(&p)));
    }
    if let Some(path) = census {
        if let Ok(report) = cosmetic::census_scan_path(path) {
            for e in report.entries {
                if e.crossings <= census_max_crossings {
                    if let Ok(d) = PlanarDiagram::parse(&e.pd) {
                        if d.is_knot() && d.crossing_count() > 0 {
                            out.push((e.name, d));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Criterion: the Jones skein relation
/// `t^{-1} V(L+) - t V(L-) = (q - q^{-1}) V(L0)` holds as exact polynomial
/// equality at every crossing of every corpus diagram. Budget: 30 s.
pub fn check_skein_identity(corpus: &[(String, PlanarDiagram)]) -> Check {
    let start = Instant::now();
    let z = HalfIntLaurent::q_minus_qinv();
    let failures: Vec<String> = corpus
        .par_iter()
        .flat_map(|(name, d)| {
            let z = z.clone();
            (0..d.crossing_count())
                .into_par_iter()
                .filter_map(move |i| {
                    let t = d.resolve(i).expect("index in range");
                    let lhs = &(&HalfIntLaurent::q_pow(-2) * &jones::jones(&t.positive))
                        - &(&HalfIntLaurent::q_pow(2) * &jones::jones(&t.negative));
                    let rhs = &z * &jones::jones(&t.resolved);
                    (lhs != rhs).then(|| format!("{name} crossing {i}"))
                })
        })
        .collect();
    let sites: usize = corpus.iter().map(|(_, d)| d.crossing_count()).sum();
    let elapsed = start.elapsed().as_secs_f64();
    let within_budget = elapsed < 30.0;
    Check::finish(
        "skein-identity",
        start,
        failures.is_empty() && within_budget,
        if failures.is_empty() {
            format!(
                "exact at all {sites} crossings of {} diagrams in {elapsed:.1}s (budget 30s)",
                corpus.len()
            )
        } else {
            format!("failed at {:?}", failures)
        },
    )
}

/// Criterion: `V''(1) = -6 a2` exactly on every corpus knot, Jones and
/// Alexander pipelines computed independently.
pub fn check_jones_vs_alexander(corpus: &[(String, PlanarDiagram)]) -> Check {
    let start = Instant::now();
    let failures: Vec<String> = corpus
        .par_iter()
        .filter(|(_, d)| d.is_knot())
        .filter_map(|(name, d)| {
            let [_, _, d2, _] = jones::jones_derivatives(d);
            let a2 = alexander::a2(d).expect("knot");
            (d2 != Rational::from_integer(BigInt::from(-6 * a2))).then(|| name.clone())
        })
        .collect();
    let knots = corpus.iter().filter(|(_, d)| d.is_knot()).count();
    Check::finish(
        "jones-vs-alexander",
        start,
        failures.is_empty(),
        if failures.is_empty() {
            format!("V''(1) = -6 a2 on all {knots} corpus knots")
        } else {
            format!("failed on {failures:?}")
        },
    )
}

/// Criterion: the calibrated right trefoil yields `v2 = 1, v3 = 1`.
pub fn check_trefoil_normalization() -> Check {
    let start = Instant::now();
    let inv = ftinv::invariants(&PlanarDiagram::parse(TREFOIL_RIGHT_PD).unwrap()).unwrap();
    let ok = inv.v2 == 1 && inv.v3 == 1;
    Check::finish(
        "trefoil-normalization",
        start,
        ok,
        format!("right trefoil: v2 = {}, v3 = {}", inv.v2, inv.v3),
    )
}

/// Criterion: the `w3` crossing-change formula and Hoste's relation hold at
/// every crossing of every corpus knot.
pub fn check_crossing_change(corpus: &[(String, PlanarDiagram)]) -> Check {
    let start = Instant::now();
    let failures: Vec<String> = corpus
        .par_iter()
        .filter(|(_, d)| d.is_knot())
        .flat_map(|(name, d)| {
            (0..d.crossing_count()).into_par_iter().filter_map(move |i| {
                let t = d.resolve(i).expect("index in range");
                let w3_ok = ftinv::w3_crossing_change_check(&t).unwrap_or(false);
                let hoste_ok = ftinv::hoste_check(&t).unwrap_or(false);
                (!(w3_ok && hoste_ok)).then(|| format!("{name} crossing {i}"))
            })
        })
        .collect();
    let sites: usize = corpus
        .iter()
        .filter(|(_, d)| d.is_knot())
        .map(|(_, d)| d.crossing_count())
        .sum();
    Check::finish(
        "crossing-change-w3-hoste",
        start,
        failures.is_empty(),
        if failures.is_empty() {
            format!("both identities exact at all {sites} eligible sites")
        } else {
            format!("failed at {failures:?}")
        },
    )
}

/// Criterion: the two-component link identities (`V0(1) = -2`,
/// `V0'(1) = -3 lk`, the second-derivative formula) hold on every resolved
/// link arising from the corpus.
pub fn check_murakami_identities(corpus: &[(String, PlanarDiagram)]) -> Check {
    let start = Instant::now();
    let failures: Vec<String> = corpus
        .par_iter()
        .filter(|(_, d)| d.is_knot())
        .flat_map(|(name, d)| {
            (0..d.crossing_count()).into_par_iter().filter_map(move |i| {
                let t = d.resolve(i).expect("index in range");
                match ftinv::murakami_link_checks(&t) {
                    Ok(report) if report.all_ok() => None,
                    Ok(report) => Some(format!("{name} crossing {i}: {:?}", report.residuals)),
                    Err(e) => Some(format!("{name} crossing {i}: {e}")),
                }
            })
        })
        .collect();
    Check::finish(
        "murakami-link-identities",
        start,
        failures.is_empty(),
        if failures.is_empty() {
            "all three identities exact on every eligible resolved link".to_string()
        } else {
            format!("failed at {failures:?}")
        },
    )
}

fn entry_values(max: i64) -> Vec<i64> {
    (-max..=max).filter(|&x| x != 0).collect()
}

fn grid(genus: usize, max: i64) -> Vec<Vec<(i64, i64)>> {
    let vals = entry_values(max);
    let mut out: Vec<Vec<(i64, i64)>> = vec![Vec::new()];
    for _ in 0..genus {
        let mut next = Vec::new();
        for prefix in &out {
            for &b in &vals {
                for &c in &vals {
                    let mut v = prefix.clone();
                    v.push((b, c));
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

/// Criterion: closed `a2`/`v3` formulas equal the diagram-computed values
/// on the exhaustive grid `m <= genus_max`, `|entries| <= grid_max`.
/// Budget: 5 min.
pub fn check_twobridge_grid(grid_max: i64, genus_max: usize) -> Check {
    let start = Instant::now();
    let mut cases = 0usize;
    let mut failures: Vec<String> = Vec::new();
    for m in 1..=genus_max {
        let vectors = grid(m, grid_max);
        cases += vectors.len();
        let mut fails: Vec<String> = vectors
            .par_iter()
            .filter_map(|pairs| {
                let p = ConwayFormParams::new(pairs.clone()).expect("nonzero");
                let d = families::twobridge_diagram(&p);
                let inv = ftinv::invariants(&d).expect("knot");
                let ok = inv.a2 == families::a2_closed(&p) && inv.v3 == families::v3_closed(&p);
                (!ok).then(|| format!("{pairs:?}"))
            })
            .collect();
        failures.append(&mut fails);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let within_budget = elapsed < 300.0;
    Check::finish(
        "twobridge-closed-vs-diagram",
        start,
        failures.is_empty() && within_budget,
        if failures.is_empty() {
            format!("{cases} parameter vectors agree exactly in {elapsed:.1}s (budget 300s)")
        } else {
            format!("failed at {failures:?}")
        },
    )
}

/// Criterion: on the genus-2 grid `|entries| <= 3`, the invariants vanish
/// simultaneously exactly on the `K_{x,y,-x-y,x}` form; and the genus-3
/// family `K_{x,1,-x,x,1,-x}` has `v3 = -x` for `x = 1..5`.
pub fn check_genus_corollaries() -> Check {
    let start = Instant::now();
    let mut failures: Vec<String> = Vec::new();
    for pairs in grid(2, 3) {
        let p = ConwayFormParams::new(pairs.clone()).expect("nonzero");
        let vanishing = families::a2_closed(&p) == 0 && families::v3_closed(&p) == 0;
        let form = families::genus2_form_check(&p).expect("genus 2");
        if vanishing != form {
            failures.push(format!("{pairs:?}: vanishing={vanishing} form={form}"));
        }
    }
    for x in 1..=5i64 {
        let p = ConwayFormParams::from_flat(&[x, 1, -x, x, 1, -x]).unwrap();
        if families::v3_closed(&p) != -x {
            failures.push(format!("genus-3 family at x={x}"));
        }
    }
    Check::finish(
        "genus-2-3-corollaries",
        start,
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "equivalence on {} genus-2 vectors; v3(K_{{x,1,-x,x,1,-x}}) = -x for x = 1..5",
                grid(2, 3).len()
            )
        } else {
            format!("failed at {failures:?}")
        },
    )
}

/// Criterion: twist-knot diagrams for `n` in `[-4, 4]` give `a2 = -n` and
/// `v3 = (n^2 - n)/2` through the diagram pipeline, matching the
/// Whitehead closed form with trivial companion.
pub fn check_twist_knots() -> Check {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in -4i64..=4 {
        let d = families::twist_knot_diagram(n);
        let inv = ftinv::invariants(&d).expect("knot");
        let (a2, v3, _) =
            families::whitehead_invariants(&families::WhiteheadParams { n, companion_a2: 0 });
        if inv.a2 != -n || inv.v3 != (n * n - n) / 2 || (inv.a2, inv.v3) != (a2, v3) {
            failures.push(format!("n={n}: a2={} v3={}", inv.a2, inv.v3));
        }
    }
    Check::finish(
        "twist-knot-family",
        start,
        failures.is_empty(),
        if failures.is_empty() {
            "diagram pipeline matches the closed form for n in [-4, 4]".to_string()
        } else {
            format!("failed at {failures:?}")
        },
    )
}

/// The paper's eight possible exceptions among knots with at most 11
/// crossings.
pub const EXPECTED_EXCEPTIONS: [&str; 8] = [
    "10_33", "10_118", "10_146", "11a_91", "11a_138", "11a_285", "11n_86", "11n_157",
];

/// Number of prime knots with 3..=11 crossings.
pub const FULL_CENSUS_SIZE: usize = 801;

/// Criterion: scanning a census of all prime knots with at most 11
/// crossings (with externally sourced tau values) leaves exactly the eight
/// expected exceptions inconclusive, and 9_44 is obstructed through the
/// Jones branch. Budget: 10 min. Requires the external data file.
pub fn check_census(census: Option<&Path>) -> Check {
    let start = Instant::now();
    let Some(path) = census else {
        return Check::finish(
            "census-exception-list",
            start,
            false,
            "no census file supplied; this criterion needs the externally sourced \
             table of prime knots <= 11 crossings with tau values \
             (see tools/fetch_census.py)"
                .to_string(),
        );
    };
    if !path.exists() {
        return Check::finish(
            "census-exception-list",
            start,
            false,
            format!(
                "census file {} not found; this criterion needs the externally sourced \
                 table of prime knots <= 11 crossings with tau values \
                 (see tools/fetch_census.py)",
                path.display()
            ),
        );
    }
    let report = match cosmetic::census_scan_path(path) {
        Ok(r) => r,
        Err(e) => {
            return Check::finish(
                "census-exception-list",
                start,
                false,
                format!("census scan failed: {e}"),
            )
        }
    };
    let mut failures: Vec<String> = Vec::new();
    if !report.errors.is_empty() {
        failures.push(format!("{} row errors", report.errors.len()));
    }
    if report.entries.len() != FULL_CENSUS_SIZE {
        failures.push(format!(
            "expected {FULL_CENSUS_SIZE} census knots, found {}",
            report.entries.len()
        ));
    }
    let mut inconclusive = report.inconclusive_names();
    inconclusive.sort();
    let mut expected: Vec<String> = EXPECTED_EXCEPTIONS.iter().map(|s| s.to_string()).collect();
    expected.sort();
    if inconclusive != expected {
        failures.push(format!("inconclusive sublist = {inconclusive:?}"));
    }
    match report.entries.iter().find(|e| e.name == "9_44") {
        Some(e) if e.verdict.status == VerdictStatus::ObstructedJones => {}
        Some(e) => failures.push(format!("9_44 verdict = {:?}", e.verdict.status)),
        None => failures.push("9_44 missing from census".to_string()),
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 600.0 {
        failures.push(format!("runtime {elapsed:.0}s exceeds 600s budget"));
    }
    Check::finish(
        "census-exception-list",
        start,
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "all {FULL_CENSUS_SIZE} knots scanned in {elapsed:.0}s; exceptions match the expected eight"
            )
        } else {
            failures.join("; ")
        },
    )
}

/// Criterion: the slope enumeration matches a plain brute-force loop for
/// all `p <= 10^4`, and the lambda_2 difference vanishes exactly when `w3`
/// does, over seeded pseudo-random rationals.
pub fn check_slopes() -> Check {
    let start = Instant::now();
    let mut failures: Vec<String> = Vec::new();

    let enumerated = cosmetic::admissible_slopes(10_000);
    let mut plain = Vec::new();
    for p in 2..=10_000u64 {
        for q in 1..=p {
            if num_integer::Integer::gcd(&p, &q) == 1
                && (u128::from(q) * u128::from(q)) % u128::from(p)
                    == u128::from(p - 1) % u128::from(p)
            {
                plain.push(cosmetic::SlopePair { p, q });
            }
        }
    }
    if enumerated != plain {
        failures.push(format!(
            "slope enumeration differs from brute force ({} vs {} pairs)",
            enumerated.len(),
            plain.len()
        ));
    }

    // splitmix64 for reproducible pseudo-random rationals
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    let slopes = cosmetic::admissible_slopes(50);
    for _ in 0..1000 {
        let num = (next() % 2001) as i64 - 1000;
        let den = (next() % 1000) as i64 + 1;
        let w3 = Rational::new(BigInt::from(num), BigInt::from(den));
        let s = slopes[(next() % slopes.len() as u64) as usize];
        let diff = cosmetic::lambda2_difference(&w3, &s);
        if diff.is_zero() != w3.is_zero() {
            failures.push(format!("lambda2 zero-iff-zero fails at w3={w3}, {s:?}"));
        }
    }

    Check::finish(
        "slope-arithmetic",
        start,
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} admissible pairs up to p = 10^4 match brute force; zero-iff-zero on 1000 randomized rationals",
                enumerated.len()
            )
        } else {
            failures.join("; ")
        },
    )
}

/// Run the whole suite in criterion order.
pub fn run_all(opts: &VerifyOptions) -> Vec<Check> {
    let corpus = corpus(opts.census.as_deref(), 9);
    vec![
        check_skein_identity(&corpus),
        check_jones_vs_alexander(&corpus),
        check_trefoil_normalization(),
        check_crossing_change(&corpus),
        check_murakami_identities(&corpus),
        check_twobridge_grid(opts.grid_max, opts.genus_max),
        check_genus_corollaries(),
        check_twist_knots(),
        check_census(opts.census.as_deref()),
        check_slopes(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_large_enough() {
        let c = corpus(None, 9);
        assert!(c.len() >= 30, "corpus has {} diagrams", c.len());
        for (name, d) in &c {
            assert!(d.component_count() >= 1, "{name}");
        }
    }

    #[test]
    fn trefoil_check_passes() {
        assert!(check_trefoil_normalization().passed);
    }

    #[test]
    fn census_check_reports_missing_file() {
        let c = check_census(Some(Path::new("/nonexistent/census.csv")));
        assert!(!c.passed);
        assert!(c.detail.contains("not found"));
        let c = check_census(None);
        assert!(!c.passed);
    }
}
