//! Two-bridge knots in Conway form and Whitehead doubles.
//!
//! `K_{b1,c1,...,bm,cm}` is realized as the plat closure of a four-strand
//! braid: each `b_i` contributes `2|b_i|` half-twists on the middle pair of
//! strands, each `c_i` contributes `2|c_i|` half-twists on the top pair,
//! with handedness per the Conway-form template (positive `b` gives
//! positive full-twists, positive `c` gives negative full-twists). The
//! labelling scheme was calibrated once against the closed `a2`/`v3`
//! formulas on the exhaustive small-parameter grid; see `HALF_TWIST_SIDES`.
//!
//! Twist knots `D_+(unknot, n)` are the `m = 1` family `K_{n,1}` (the
//! `c`-region is the positive clasp); `n = 0` degenerates to a two-strand
//! plat holding just the clasp.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::diagram::{PlanarDiagram, PortRef};
use crate::poly::HalfIntLaurent;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("conway form parameters must be nonzero (pair {0})")]
    ZeroParameter(usize),
    #[error("conway form needs at least one (b, c) pair")]
    Empty,
    #[error("continued fraction hit a zero value while folding suffix {suffix:?}")]
    DivisionByZero { suffix: Vec<i64> },
    #[error("genus-2 form check needs m = 2, got m = {0}")]
    WrongGenus(usize),
}

/// Parameters `(b1, c1, ..., bm, cm)` of a two-bridge knot in Conway form;
/// all entries nonzero, `m >= 1`. The genus of the knot is `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConwayFormParams {
    pairs: Vec<(i64, i64)>,
}

impl ConwayFormParams {
    pub fn new(pairs: Vec<(i64, i64)>) -> Result<Self, FamilyError> {
        if pairs.is_empty() {
            return Err(FamilyError::Empty);
        }
        for (i, &(b, c)) in pairs.iter().enumerate() {
            if b == 0 || c == 0 {
                return Err(FamilyError::ZeroParameter(i + 1));
            }
        }
        Ok(ConwayFormParams { pairs })
    }

    /// Flat entry list `b1,c1,...,bm,cm` (the CLI syntax).
    pub fn from_flat(entries: &[i64]) -> Result<Self, FamilyError> {
        if entries.is_empty() || entries.len() % 2 != 0 {
            return Err(FamilyError::Empty);
        }
        Self::new(entries.chunks(2).map(|p| (p[0], p[1])).collect())
    }

    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.pairs
    }

    pub fn genus(&self) -> usize {
        self.pairs.len()
    }

    pub fn flat(&self) -> Vec<i64> {
        self.pairs.iter().flat_map(|&(b, c)| [b, c]).collect()
    }
}

/// Twist parameter and companion data for a Whitehead double `D_+(K, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WhiteheadParams {
    pub n: i64,
    pub companion_a2: i64,
}

// ---------------------------------------------------------------------------
// continued fraction

/// Evaluate `[2b1, 2c1, ..., 2bm, 2cm]` and return the reduced fraction
/// `(alpha, beta)` with `beta > 0`. For valid parameters `alpha` is odd and
/// `beta` even; every suffix value has magnitude above 1, so the
/// division-by-zero arm is reachable only through the raw evaluator.
pub fn continued_fraction(p: &ConwayFormParams) -> Result<(BigInt, BigInt), FamilyError> {
    let entries: Vec<i64> = p.flat().iter().map(|e| 2 * e).collect();
    continued_fraction_entries(&entries)
}

fn continued_fraction_entries(entries: &[i64]) -> Result<(BigInt, BigInt), FamilyError> {
    // fold right-to-left as num/den
    let mut num = BigInt::from(entries[entries.len() - 1]);
    let mut den = BigInt::from(1);
    for (idx, &e) in entries.iter().enumerate().rev().skip(1) {
        if num.is_zero() {
            return Err(FamilyError::DivisionByZero {
                suffix: entries[idx + 1..].to_vec(),
            });
        }
        // e + den/num
        let new_num = BigInt::from(e) * &num + &den;
        den = std::mem::replace(&mut num, new_num);
    }
    let g = num_integer::Integer::gcd(&num, &den);
    num /= &g;
    den /= &g;
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    Ok((num, den))
}

// ---------------------------------------------------------------------------
// closed formulas

/// Burde's formula `a2 = -sum_{i<=k} b_i c_k`, on raw pairs so the
/// recursion checks can probe zero tail entries.
fn a2_closed_raw(pairs: &[(i64, i64)]) -> i64 {
    let mut total = 0i64;
    for (i, &(b, _)) in pairs.iter().enumerate() {
        for &(_, c) in &pairs[i..] {
            total -= b * c;
        }
    }
    total
}

/// `v3 = (sum_k c_k (b_1+..+b_k)^2 - sum_i b_i (c_i+..+c_m)^2) / 2`.
fn v3_closed_raw(pairs: &[(i64, i64)]) -> i64 {
    let mut first = 0i64;
    let mut prefix_b = 0i64;
    for &(b, c) in pairs {
        prefix_b += b;
        first += c * prefix_b * prefix_b;
    }
    let mut second = 0i64;
    let mut suffix_c = 0i64;
    for &(b, c) in pairs.iter().rev() {
        suffix_c += c;
        second += b * suffix_c * suffix_c;
    }
    let num = first - second;
    assert!(
        num % 2 == 0,
        "v3 numerator is even for integer Conway parameters (got {num})"
    );
    num / 2
}

pub fn a2_closed(p: &ConwayFormParams) -> i64 {
    a2_closed_raw(&p.pairs)
}

pub fn v3_closed(p: &ConwayFormParams) -> i64 {
    v3_closed_raw(&p.pairs)
}

fn w3_closed_times4(pairs: &[(i64, i64)]) -> i64 {
    // v3 = -2 w3, so 4 w3 = -2 v3; scaling by 4 keeps everything integral
    -2 * v3_closed_raw(pairs)
}

// ---------------------------------------------------------------------------
// plat-closure diagram generation

#[derive(Clone, Copy, PartialEq, Eq)]
enum OverSide {
    /// the strand descending left-to-right passes over
    Upper,
    /// the strand ascending left-to-right passes over
    Lower,
}

/// Calibrated half-twist handedness for positive parameters (negative ones
/// use the opposite side). Fixed once against the closed `a2`/`v3`
/// formulas on the small-parameter grid, together with the twist-knot
/// clasp conditions (clasp crossings positive, clasp resolution linking
/// `-n`); the grid determines the pair uniquely.
const B_POSITIVE_SIDE: OverSide = OverSide::Upper;
const C_POSITIVE_SIDE: OverSide = OverSide::Lower;

#[derive(Clone)]
enum Term {
    Port(PortRef),
    Cap(u32),
}

struct PlatBuilder {
    cur: Vec<Term>,
    pairs: Vec<(PortRef, PortRef)>,
    free_loops: usize,
    n_crossings: usize,
}

impl PlatBuilder {
    /// `cap_pairs` are the slots connected by bare strands at the start.
    fn with_caps(strands: usize, cap_pairs: &[(usize, usize)]) -> Self {
        let mut cur: Vec<Term> = (0..strands).map(|_| Term::Cap(u32::MAX)).collect();
        for (id, &(a, b)) in cap_pairs.iter().enumerate() {
            cur[a] = Term::Cap(id as u32);
            cur[b] = Term::Cap(id as u32);
        }
        PlatBuilder {
            cur,
            pairs: Vec::new(),
            free_loops: 0,
            n_crossings: 0,
        }
    }

    fn attach(&mut self, term: Term, port: PortRef) {
        match term {
            Term::Port(p) => self.pairs.push((p, port)),
            Term::Cap(t) => {
                let other = self
                    .cur
                    .iter_mut()
                    .find(|x| matches!(x, Term::Cap(s) if *s == t))
                    .expect("cap has a live far end");
                *other = Term::Port(port);
            }
        }
    }

    /// One half-twist between the strands dangling at slots `i` and `j`.
    /// Geometry (strands entering from the left, `i` the upper lane):
    /// `Upper` puts the upper-left -> lower-right strand on top, making the
    /// lower-left -> upper-right strand the under pass; counterclockwise
    /// from its incoming end the ports read (LL, LR, UR, UL). Rotating the
    /// whole crossing (for vertical twist regions) leaves the
    /// counterclockwise structure unchanged.
    fn half_twist(&mut self, i: usize, j: usize, side: OverSide) {
        let k = self.n_crossings;
        self.n_crossings += 1;
        let (ul, ll, ur, lr) = match side {
            OverSide::Upper => (3u8, 0u8, 2u8, 1u8),
            OverSide::Lower => (0, 1, 3, 2),
        };
        let top = self.cur[i].clone();
        let bottom = self.cur[j].clone();
        self.cur[i] = Term::Cap(u32::MAX); // placeholder, never matched
        self.cur[j] = Term::Cap(u32::MAX - 1);
        match (top, bottom) {
            // both ends of one bare arc: it becomes the crossing's left loop
            (Term::Cap(s), Term::Cap(t)) if s == t => {
                self.pairs.push(((k, ul), (k, ll)));
            }
            (top, bottom) => {
                self.attach(top, (k, ul));
                self.attach(bottom, (k, ll));
            }
        }
        self.cur[i] = Term::Port((k, ur));
        self.cur[j] = Term::Port((k, lr));
    }

    fn close(mut self, closure_pairs: &[(usize, usize)]) -> PlanarDiagram {
        let strands = self.cur.len();
        let mut next_cap = strands as u32;
        for &(s, t) in closure_pairs {
            let a = self.cur[s].clone();
            let b = self.cur[t].clone();
            self.cur[s] = Term::Cap(u32::MAX);
            self.cur[t] = Term::Cap(u32::MAX - 1);
            match (a, b) {
                (Term::Port(p), Term::Port(q)) => self.pairs.push((p, q)),
                (Term::Port(p), Term::Cap(t)) | (Term::Cap(t), Term::Port(p)) => {
                    let other = self
                        .cur
                        .iter_mut()
                        .find(|x| matches!(x, Term::Cap(s) if *s == t))
                        .expect("cap has a live far end");
                    *other = Term::Port(p);
                }
                (Term::Cap(s), Term::Cap(t)) if s == t => self.free_loops += 1,
                (Term::Cap(s), Term::Cap(t)) => {
                    let id = next_cap;
                    next_cap += 1;
                    for x in self.cur.iter_mut() {
                        if matches!(x, Term::Cap(c) if *c == s || *c == t) {
                            *x = Term::Cap(id);
                        }
                    }
                }
            }
        }
        PlanarDiagram::from_wiring_undirected(self.n_crossings, &self.pairs, self.free_loops)
    }
}

fn side_for(parameter: i64, positive_side: OverSide) -> OverSide {
    let flip = |s: OverSide| match s {
        OverSide::Upper => OverSide::Lower,
        OverSide::Lower => OverSide::Upper,
    };
    if parameter > 0 {
        positive_side
    } else {
        flip(positive_side)
    }
}

/// PD realization of the Conway form `C(2b1, 2c1, ..., 2bm, 2cm)` as the
/// numerator closure of a rational tangle. Tangle slots are
/// (NW, NE, SW, SE) = (0, 1, 2, 3); construction starts from the
/// infinity-tangle (NW-SW and NE-SE strands) and applies the entries
/// innermost-first — `2|c_m|` half-twists on the bottom pair (SW, SE),
/// `2|b_m|` on the right pair (NE, SE), and so on outward — so the tangle
/// fraction nests exactly as `2b1 + 1/(2c1 + 1/(...))`. The numerator
/// closure joins NW-NE and SW-SE; the fraction's numerator is odd, so the
/// result is a single component for valid parameters.
pub fn twobridge_diagram(p: &ConwayFormParams) -> PlanarDiagram {
    let d = plat_from_pairs(&p.pairs);
    assert!(d.is_knot(), "even Conway forms close to knots");
    d
}

fn plat_from_pairs(pairs: &[(i64, i64)]) -> PlanarDiagram {
    let mut plat = PlatBuilder::with_caps(4, &[(0, 2), (1, 3)]);
    for &(b, c) in pairs.iter().rev() {
        // bottom region: rotating the half-twist picture a quarter turn
        // counterclockwise-consistently puts SE in the upper-lane role
        let side = side_for(c, C_POSITIVE_SIDE);
        for _ in 0..2 * c.unsigned_abs() {
            plat.half_twist(3, 2, side);
        }
        let side = side_for(b, B_POSITIVE_SIDE);
        for _ in 0..2 * b.unsigned_abs() {
            plat.half_twist(1, 3, side);
        }
    }
    plat.close(&[(0, 1), (2, 3)])
}

/// Positive-clasp twist-knot diagram `D_+(unknot, n)`: `K_{n,1}` for
/// `n != 0`, and the bare two-crossing clasp curve for `n = 0`.
pub fn twist_knot_diagram(n: i64) -> PlanarDiagram {
    // K_{n,1} built directly on raw pairs so n = 0 (the bare clasp) works
    let d = plat_from_pairs(&[(n, 1)]);
    assert!(d.is_knot());
    d
}

/// Index of a clasp crossing in [`twist_knot_diagram`] (the clasp is laid
/// down first, so it occupies crossings 0 and 1).
pub fn twist_knot_clasp_site(_n: i64) -> usize {
    0
}

/// Closed-form invariants of the positive `n`-twisted Whitehead double:
/// `a2 = -n`, `v3 = -2 a2(K) + (n^2 - n)/2`, and the Alexander polynomial
/// `-n t + (2n + 1) - n t^{-1}`.
pub fn whitehead_invariants(w: &WhiteheadParams) -> (i64, i64, HalfIntLaurent) {
    let n = w.n;
    let a2 = -n;
    debug_assert_eq!((n * n - n) % 2, 0);
    let v3 = -2 * w.companion_a2 + (n * n - n) / 2;
    let delta = HalfIntLaurent::from_terms([(2i64, -n), (0, 2 * n + 1), (-2, -n)]);
    (a2, v3, delta)
}

/// Genus-2 vanishing form: `K_{b1,c1,b2,c2}` is of type `K_{x,y,-x-y,x}`
/// exactly when `b1 = c2` and `b1 + b2 + c1 = 0`.
pub fn genus2_form_check(p: &ConwayFormParams) -> Result<bool, FamilyError> {
    if p.genus() != 2 {
        return Err(FamilyError::WrongGenus(p.genus()));
    }
    let [(b1, c1), (b2, c2)] = [p.pairs[0], p.pairs[1]];
    Ok(b1 == c2 && b1 + b2 + c1 == 0)
}

/// Exact verification of the two recursion lemmas behind the closed `v3`
/// formula, evaluated with `w3 = -v3/2` and Burde's `a2` on the given
/// parameters and every intermediate tail value.
#[derive(Clone, Debug, Default)]
pub struct RecursionReport {
    pub single_twist_steps: usize,
    pub single_twist_ok: bool,
    pub tail_collapse_ok: bool,
    pub a2_linear_ok: bool,
}

impl RecursionReport {
    pub fn all_ok(&self) -> bool {
        self.single_twist_ok && self.tail_collapse_ok && self.a2_linear_ok
    }
}

pub fn recursion_checks(p: &ConwayFormParams) -> RecursionReport {
    let pairs = &p.pairs;
    let m = pairs.len();
    let (b_last, c_last) = pairs[m - 1];
    let prefix = &pairs[..m - 1];
    let sum_b: i64 = pairs.iter().map(|&(b, _)| b).sum();

    let with_tail = |x: i64| -> Vec<(i64, i64)> {
        let mut v = prefix.to_vec();
        v.push((b_last, x));
        v
    };

    // Lemma: 4*(w3(...,x) - w3(...,x-1)) = -(a2(...,x) + a2(...,x-1) + (sum b)^2),
    // at every step between the tail value and zero (both signs of c_m).
    let mut steps = 0usize;
    let mut single_ok = true;
    let range: Vec<i64> = if c_last > 0 {
        (1..=c_last).rev().collect()
    } else {
        (c_last + 1..=0).collect()
    };
    for x in range {
        let lhs = w3_closed_times4(&with_tail(x)) - w3_closed_times4(&with_tail(x - 1));
        let rhs = -(a2_closed_raw(&with_tail(x)) + a2_closed_raw(&with_tail(x - 1)) + sum_b * sum_b);
        if lhs != rhs {
            single_ok = false;
        }
        steps += 1;
    }

    // Lemma: 4*(w3(full) - w3(prefix)) =
    //   -(2 c_m a2(prefix) - c_m^2 sum_b + c_m (sum_b)^2);
    // with an empty prefix this is the m = 1 base case
    // w3(K_{b1,c1}) = -(c1 b1^2 - c1^2 b1)/4.
    let lhs = w3_closed_times4(pairs) - w3_closed_times4(prefix);
    let rhs = -(2 * c_last * a2_closed_raw(prefix) - c_last * c_last * sum_b
        + c_last * sum_b * sum_b);
    let tail_collapse_ok = lhs == rhs;

    // a2(K_{..., b_m, x}) = a2(prefix) - x * sum_b for every swept x.
    let mut a2_linear_ok = true;
    let lo = c_last.min(0);
    let hi = c_last.max(0);
    for x in lo..=hi {
        if a2_closed_raw(&with_tail(x)) != a2_closed_raw(prefix) - x * sum_b {
            a2_linear_ok = false;
        }
    }

    RecursionReport {
        single_twist_steps: steps,
        single_twist_ok: single_ok,
        tail_collapse_ok,
        a2_linear_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alexander;
    use crate::ftinv;

    fn params(flat: &[i64]) -> ConwayFormParams {
        ConwayFormParams::from_flat(flat).unwrap()
    }

    #[test]
    fn continued_fraction_examples() {
        let (a, b) = continued_fraction(&params(&[1, 1])).unwrap();
        assert_eq!((a, b), (BigInt::from(5), BigInt::from(2)));
        let (a, b) = continued_fraction(&params(&[1, -1])).unwrap();
        assert_eq!((a, b), (BigInt::from(3), BigInt::from(2)));
    }

    #[test]
    fn continued_fraction_parity() {
        for b1 in [-3i64, -1, 1, 2] {
            for c1 in [-2i64, 1, 3] {
                for b2 in [-1i64, 2] {
                    for c2 in [-3i64, -1, 1] {
                        let (a, b) =
                            continued_fraction(&params(&[b1, c1, b2, c2])).unwrap();
                        assert!(!(&a % BigInt::from(2)).is_zero(), "alpha odd");
                        assert!((&b % BigInt::from(2)).is_zero(), "beta even");
                    }
                }
            }
        }
    }

    #[test]
    fn continued_fraction_zero_suffix_reported() {
        // reachable only through the raw evaluator: valid Conway suffixes
        // always have magnitude above 1
        let err = continued_fraction_entries(&[2, 0]).unwrap_err();
        assert_eq!(err, FamilyError::DivisionByZero { suffix: vec![0] });
    }

    #[test]
    fn parameter_validation() {
        assert_eq!(
            ConwayFormParams::from_flat(&[1, 0]).unwrap_err(),
            FamilyError::ZeroParameter(1)
        );
        assert_eq!(ConwayFormParams::from_flat(&[]).unwrap_err(), FamilyError::Empty);
        assert_eq!(
            ConwayFormParams::from_flat(&[1, 1, 2]).unwrap_err(),
            FamilyError::Empty
        );
    }

    #[test]
    fn closed_formula_examples() {
        assert_eq!(a2_closed(&params(&[1, 1])), -1);
        assert_eq!(v3_closed(&params(&[1, 1])), 0);
        assert_eq!(a2_closed(&params(&[1, -1])), 1);
        assert_eq!(v3_closed(&params(&[1, -1])), -1);
        // v3(K_{x,1,-x,x,1,-x}) = -x
        for x in 1..=5i64 {
            assert_eq!(v3_closed(&params(&[x, 1, -x, x, 1, -x])), -x);
        }
        // K_{x,y,-x-y,x} has vanishing a2 and v3
        for x in [-3i64, -1, 1, 2, 3] {
            for y in [-3i64, -2, 1, 3] {
                if x + y == 0 {
                    continue;
                }
                let p = params(&[x, y, -x - y, x]);
                assert_eq!(a2_closed(&p), 0, "a2 at x={x}, y={y}");
                assert_eq!(v3_closed(&p), 0, "v3 at x={x}, y={y}");
            }
        }
    }

    #[test]
    fn genus2_form_examples() {
        assert!(genus2_form_check(&params(&[1, 1, -2, 1])).unwrap());
        assert!(!genus2_form_check(&params(&[1, 1, 1, 1])).unwrap());
        assert_eq!(
            genus2_form_check(&params(&[1, 1])).unwrap_err(),
            FamilyError::WrongGenus(1)
        );
    }

    /// The calibration grid: diagram-computed a2 and v3 must match the
    /// closed formulas on every small parameter vector. This pins all
    /// handedness conventions of the plat template.
    #[test]
    fn diagram_matches_closed_formulas_m1() {
        for b in [-2i64, -1, 1, 2] {
            for c in [-2i64, -1, 1, 2] {
                let p = params(&[b, c]);
                let d = twobridge_diagram(&p);
                assert_eq!(d.crossing_count(), 2 * (b.unsigned_abs() + c.unsigned_abs()) as usize);
                assert!(d.is_knot());
                let inv = ftinv::invariants(&d).unwrap();
                assert_eq!(inv.a2, a2_closed(&p), "a2 at ({b},{c})");
                assert_eq!(inv.v3, v3_closed(&p), "v3 at ({b},{c})");
            }
        }
    }

    #[test]
    fn diagram_matches_closed_formulas_m2_sample() {
        for flat in [
            [1i64, 1, 1, 1],
            [1, 2, -1, 1],
            [2, -1, 1, 2],
            [-2, 1, 2, -1],
            [1, 1, -2, 1],
            [-1, -1, -1, -1],
        ] {
            let p = params(&flat);
            let d = twobridge_diagram(&p);
            let inv = ftinv::invariants(&d).unwrap();
            assert_eq!(inv.a2, a2_closed(&p), "a2 at {flat:?}");
            assert_eq!(inv.v3, v3_closed(&p), "v3 at {flat:?}");
        }
    }

    #[test]
    fn figure_eight_class() {
        // K_{1,1} is the figure-eight: 4 crossings, a2 = -1, v3 = 0
        let d = twobridge_diagram(&params(&[1, 1]));
        assert_eq!(d.crossing_count(), 4);
        let data = alexander::alexander(&d).unwrap();
        assert_eq!(data.a2, -1);
    }

    #[test]
    fn twist_knot_family() {
        for n in -4i64..=4 {
            let d = twist_knot_diagram(n);
            assert!(d.is_knot());
            let inv = ftinv::invariants(&d).unwrap();
            assert_eq!(inv.a2, -n, "a2 of twist knot n={n}");
            assert_eq!(inv.v3, (n * n - n) / 2, "v3 of twist knot n={n}");
            let (a2, v3, _) = whitehead_invariants(&WhiteheadParams {
                n,
                companion_a2: 0,
            });
            assert_eq!((inv.a2, inv.v3), (a2, v3));
        }
    }

    #[test]
    fn twist_knot_clasp_is_positive_with_linking_minus_n() {
        for n in -3i64..=3 {
            let d = twist_knot_diagram(n);
            let site = twist_knot_clasp_site(n);
            assert_eq!(d.crossing_sign(site).unwrap(), 1, "clasp sign at n={n}");
            let t = d.resolve(site).unwrap();
            assert_eq!(t.resolved.component_count(), 2);
            assert_eq!(
                t.resolved.linking_number(0, 1).unwrap(),
                -n,
                "lk of the clasp resolution at n={n}"
            );
            assert_eq!(t.positive, d, "the twist knot fills the positive slot");
        }
    }

    #[test]
    fn whitehead_closed_forms() {
        // untwisted double of a trefoil companion
        let (a2, v3, delta) = whitehead_invariants(&WhiteheadParams {
            n: 0,
            companion_a2: 1,
        });
        assert_eq!((a2, v3), (0, -2));
        assert!(delta.is_one());
        // n = 2 with trivial companion
        let (a2, v3, delta) = whitehead_invariants(&WhiteheadParams {
            n: 2,
            companion_a2: 0,
        });
        assert_eq!((a2, v3), (-2, 1));
        assert_eq!(
            delta,
            HalfIntLaurent::from_terms([(2, -2), (0, 5), (-2, -2)])
        );
        assert_eq!(delta.eval_at_one(), crate::poly::Rational::from_integer(1.into()));
        assert_eq!(delta, delta.invert_variable());
    }

    #[test]
    fn recursion_lemmas_hold() {
        for flat in [
            vec![1i64, 2],
            vec![1, -2],
            vec![-2, 3],
            vec![1, 1, 1, 1],
            vec![2, -1, 1, 2],
            vec![1, 2, -1, 1, 2, -2],
        ] {
            let report = recursion_checks(&params(&flat));
            assert!(report.all_ok(), "recursions fail at {flat:?}: {report:?}");
            assert_eq!(report.single_twist_steps, flat.last().unwrap().unsigned_abs() as usize);
        }
    }

    #[test]
    fn recursion_explicit_step() {
        // m = 1, (b1, c1) = (1, 2): the x = 2 -> 1 step of the single-twist
        // lemma reads w3(K_{1,2}) - w3(K_{1,1}) = 1/2; with v3 = -2 w3 the
        // closed values give (-(-1)) - 0 = ... both sides scaled by 4: 2.
        let lhs = w3_closed_times4(&[(1, 2)]) - w3_closed_times4(&[(1, 1)]);
        let rhs = -(a2_closed_raw(&[(1, 2)]) + a2_closed_raw(&[(1, 1)]) + 1);
        assert_eq!(lhs, 2);
        assert_eq!(lhs, rhs);
    }
}
