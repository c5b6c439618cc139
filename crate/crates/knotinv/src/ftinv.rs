//! Finite-type invariants of order 2 and 3.
//!
//! The primary path computes `w3 = V'''(1)/72 + V''(1)/24` from the Jones
//! derivatives; the crossing-change recursion is exposed only as a test
//! oracle (it would need an unknotting sequence to serve as a computation
//! route). `v2 = a2` and `v3 = -2 w3` are the canonically normalized
//! invariants: `v2(3_1) = v3(3_1) = 1` for the right trefoil, `v2` is
//! mirror-even and `v3` mirror-odd.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::alexander::{self, AlexanderError};
use crate::diagram::{PlanarDiagram, SkeinTriple};
use crate::jones;
use crate::poly::{rational_str, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FtInvError {
    #[error("diagram has {0} components; finite-type invariants need a knot")]
    NotAKnot(usize),
    #[error("resolved diagram has {0} components; this check needs exactly 2")]
    WrongComponentCount(usize),
}

impl From<AlexanderError> for FtInvError {
    fn from(e: AlexanderError) -> Self {
        match e {
            AlexanderError::NotAKnot(n) => FtInvError::NotAKnot(n),
        }
    }
}

/// Exact invariant record for one knot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotInvariants {
    pub a2: i64,
    /// V(1) = 1
    pub v_at_one: Rational,
    /// V'(1) = 0
    pub dv_at_one: Rational,
    pub d2v_at_one: Rational,
    pub d3v_at_one: Rational,
    /// Lescop's invariant, `V'''(1)/72 + V''(1)/24`; denominator divides 2.
    pub w3: Rational,
    pub v2: i64,
    pub v3: i64,
}

impl Serialize for KnotInvariants {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("KnotInvariants", 8)?;
        st.serialize_field("a2", &self.a2)?;
        st.serialize_field("V1", &rational_str(&self.v_at_one))?;
        st.serialize_field("dV1", &rational_str(&self.dv_at_one))?;
        st.serialize_field("d2V1", &rational_str(&self.d2v_at_one))?;
        st.serialize_field("d3V1", &rational_str(&self.d3v_at_one))?;
        st.serialize_field("w3", &rational_str(&self.w3))?;
        st.serialize_field("v2", &self.v2)?;
        st.serialize_field("v3", &self.v3)?;
        st.end()
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `w3` from the derivative values alone.
pub fn w3_from_derivatives(d2v: &Rational, d3v: &Rational) -> Rational {
    d3v / rat(72, 1) + d2v / rat(24, 1)
}

/// Compute the full invariant record of a knot diagram. The Jones and
/// Alexander pipelines are independent; their consistency
/// (`V''(1) = -6 a2`) is asserted, not assumed.
pub fn invariants(d: &PlanarDiagram) -> Result<KnotInvariants, FtInvError> {
    if !d.is_knot() {
        return Err(FtInvError::NotAKnot(d.component_count()));
    }
    let [v0, v1, v2d, v3d] = jones::jones_derivatives(d);
    let a2 = alexander::a2(d)?;
    assert!(v0.is_one(), "V(1) = 1 for knots");
    assert!(v1.is_zero(), "V'(1) = 0 for knots");
    assert_eq!(
        v2d,
        rat(-6 * a2, 1),
        "V''(1) = -6 a2 links the two pipelines"
    );
    let w3 = w3_from_derivatives(&v2d, &v3d);
    let minus_two_w3 = &w3 * rat(-2, 1);
    assert!(minus_two_w3.is_integer(), "v3 = -2 w3 is an integer");
    let v3 = i64::try_from(&minus_two_w3.to_integer()).expect("v3 fits i64");
    Ok(KnotInvariants {
        a2,
        v_at_one: v0,
        dv_at_one: v1,
        d2v_at_one: v2d,
        d3v_at_one: v3d,
        w3,
        v2: a2,
        v3,
    })
}

fn w3_of(d: &PlanarDiagram) -> Result<Rational, FtInvError> {
    if !d.is_knot() {
        return Err(FtInvError::NotAKnot(d.component_count()));
    }
    let [_, _, d2, d3] = jones::jones_derivatives(d);
    Ok(w3_from_derivatives(&d2, &d3))
}

/// Data shared by the crossing-change oracles: the two components of the
/// resolved link, their `a2` values, and the linking number.
fn resolved_link_data(t: &SkeinTriple) -> Result<(i64, i64, i64), FtInvError> {
    let l0 = &t.resolved;
    if l0.component_count() != 2 {
        return Err(FtInvError::WrongComponentCount(l0.component_count()));
    }
    let a2_prime = alexander::a2(&l0.component_subdiagram(0).expect("component exists"))?;
    let a2_second = alexander::a2(&l0.component_subdiagram(1).expect("component exists"))?;
    let lk = l0.linking_number(0, 1).expect("two components");
    Ok((a2_prime, a2_second, lk))
}

/// Test oracle for the crossing-change formula of `w3`:
/// `w3(K+) - w3(K-) = (a2(K') + a2(K''))/2 - (a2(K+) + a2(K-) + lk^2)/4`,
/// with `w3` computed from Jones derivatives and the right-hand side from
/// the Alexander pipeline on the extracted components.
pub fn w3_crossing_change_check(t: &SkeinTriple) -> Result<bool, FtInvError> {
    let (a2p, a2pp, lk) = resolved_link_data(t)?;
    let lhs = w3_of(&t.positive)? - w3_of(&t.negative)?;
    let a2_plus = alexander::a2(&t.positive)?;
    let a2_minus = alexander::a2(&t.negative)?;
    let rhs = rat(a2p + a2pp, 2) - rat(a2_plus + a2_minus + lk * lk, 4);
    Ok(lhs == rhs)
}

/// Hoste's relation at the same sites: `lk(K', K'') = a2(K+) - a2(K-)`.
pub fn hoste_check(t: &SkeinTriple) -> Result<bool, FtInvError> {
    let l0 = &t.resolved;
    if l0.component_count() != 2 {
        return Err(FtInvError::WrongComponentCount(l0.component_count()));
    }
    let lk = l0.linking_number(0, 1).expect("two components");
    Ok(lk == alexander::a2(&t.positive)? - alexander::a2(&t.negative)?)
}

/// Per-identity result of the two-component link checks at `t = 1`:
/// `V0(1) = -2`, `V0'(1) = -3 lk`, and
/// `V0''(1) = -1/2 + 3 lk + 12 (a2(K') + a2(K'')) - 6 lk^2`.
#[derive(Clone, Debug)]
pub struct MurakamiReport {
    pub value_ok: bool,
    pub first_ok: bool,
    pub second_ok: bool,
    /// exact residuals (computed minus predicted) for the three identities
    pub residuals: [Rational; 3],
}

impl MurakamiReport {
    pub fn all_ok(&self) -> bool {
        self.value_ok && self.first_ok && self.second_ok
    }
}

pub fn murakami_link_checks(t: &SkeinTriple) -> Result<MurakamiReport, FtInvError> {
    let (a2p, a2pp, lk) = resolved_link_data(t)?;
    let [v0, dv, d2v, _] = jones::jones_derivatives(&t.resolved);
    let predicted = [
        rat(-2, 1),
        rat(-3 * lk, 1),
        rat(-1, 2) + rat(3 * lk + 12 * (a2p + a2pp) - 6 * lk * lk, 1),
    ];
    let residuals = [
        &v0 - &predicted[0],
        &dv - &predicted[1],
        &d2v - &predicted[2],
    ];
    Ok(MurakamiReport {
        value_ok: residuals[0].is_zero(),
        first_ok: residuals[1].is_zero(),
        second_ok: residuals[2].is_zero(),
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{TREFOIL_LEFT, TREFOIL_RIGHT};

    const FIGURE_EIGHT: &str = "X(4,2,5,1) X(2,7,3,8) X(8,6,1,5) X(6,3,7,4)";

    fn parse(text: &str) -> PlanarDiagram {
        PlanarDiagram::parse(text).unwrap()
    }

    #[test]
    fn right_trefoil_normalization() {
        let inv = invariants(&parse(TREFOIL_RIGHT)).unwrap();
        assert_eq!(inv.v2, 1);
        assert_eq!(inv.v3, 1);
        assert_eq!(inv.a2, 1);
        assert_eq!(inv.d2v_at_one, rat(-6, 1));
        assert_eq!(inv.d3v_at_one, rat(-18, 1));
        assert_eq!(inv.w3, rat(-1, 2));
    }

    #[test]
    fn unknot_invariants_vanish() {
        let inv = invariants(&PlanarDiagram::unknot()).unwrap();
        assert_eq!(inv.a2, 0);
        assert!(inv.d2v_at_one.is_zero());
        assert!(inv.d3v_at_one.is_zero());
        assert!(inv.w3.is_zero());
        assert_eq!((inv.v2, inv.v3), (0, 0));
    }

    #[test]
    fn figure_eight_is_amphichiral() {
        let inv = invariants(&parse(FIGURE_EIGHT)).unwrap();
        assert_eq!(inv.v2, -1);
        assert_eq!(inv.v3, 0);
    }

    #[test]
    fn mirror_symmetry_of_v2_v3() {
        for text in [TREFOIL_RIGHT, TREFOIL_LEFT, FIGURE_EIGHT] {
            let d = parse(text);
            let inv = invariants(&d).unwrap();
            let minv = invariants(&d.mirror()).unwrap();
            assert_eq!(minv.v2, inv.v2);
            assert_eq!(minv.v3, -inv.v3);
        }
    }

    #[test]
    fn multi_component_rejected() {
        let hopf = parse("X(1,3,2,4) X(3,1,4,2)");
        assert_eq!(invariants(&hopf).unwrap_err(), FtInvError::NotAKnot(2));
    }

    #[test]
    fn json_field_names() {
        let inv = invariants(&parse(TREFOIL_RIGHT)).unwrap();
        let json = serde_json::to_string(&inv).unwrap();
        assert_eq!(
            json,
            r#"{"a2":1,"V1":"1/1","dV1":"0/1","d2V1":"-6/1","d3V1":"-18/1","w3":"-1/2","v2":1,"v3":1}"#
        );
    }

    #[test]
    fn crossing_change_formula_on_trefoil_sites() {
        // Resolving any right-trefoil crossing: K- is an unknot, K' and K''
        // are unknots with lk = 1, so both sides equal -1/2.
        let d = parse(TREFOIL_RIGHT);
        for i in 0..d.crossing_count() {
            let t = d.resolve(i).unwrap();
            assert!(w3_crossing_change_check(&t).unwrap());
            assert!(hoste_check(&t).unwrap());
        }
    }

    #[test]
    fn crossing_change_formula_on_figure_eight_sites() {
        let d = parse(FIGURE_EIGHT);
        for i in 0..d.crossing_count() {
            let t = d.resolve(i).unwrap();
            assert!(w3_crossing_change_check(&t).unwrap());
            assert!(hoste_check(&t).unwrap());
        }
    }

    #[test]
    fn nugatory_crossing_is_neutral() {
        // switching the kink's crossing does not change the knot type:
        // both sides of the crossing-change formula vanish
        let t = parse("X(1,1,2,2)").resolve(0).unwrap();
        assert!(w3_crossing_change_check(&t).unwrap());
        assert!(hoste_check(&t).unwrap());
    }

    #[test]
    fn murakami_identities_on_trefoil_resolution() {
        let d = parse(TREFOIL_RIGHT);
        let t = d.resolve(0).unwrap();
        let report = murakami_link_checks(&t).unwrap();
        assert!(report.all_ok(), "residuals: {:?}", report.residuals);
    }

    #[test]
    fn murakami_identities_on_split_pair() {
        // the kink resolution is a split unknot pair: lk = 0, V0'(1) = 0
        let t = parse("X(1,1,2,2)").resolve(0).unwrap();
        assert_eq!(t.resolved.component_count(), 2);
        let report = murakami_link_checks(&t).unwrap();
        assert!(report.all_ok());
        let [_, dv, _, _] = jones::jones_derivatives(&t.resolved);
        assert!(dv.is_zero());
    }

    #[test]
    fn wrong_component_count_rejected() {
        // resolving a Hopf crossing leaves one component
        let t = parse("X(1,3,2,4) X(3,1,4,2)").resolve(0).unwrap();
        assert_eq!(
            murakami_link_checks(&t).unwrap_err(),
            FtInvError::WrongComponentCount(1)
        );
    }
}
