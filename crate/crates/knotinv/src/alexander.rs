//! Normalized Alexander polynomial of a knot via Fox calculus on the
//! Wirtinger presentation, and the Conway coefficient `a2 = Delta''(1)/2`.
//!
//! The determinant route needs no unknot recognition and is deterministic
//! on any PD input; the Conway skein recursion survives only as a
//! desk-scale oracle in the tests.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::diagram::PlanarDiagram;
use crate::poly::HalfIntLaurent;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlexanderError {
    #[error("diagram has {0} components; the Alexander route requires a knot")]
    NotAKnot(usize),
}

/// Normalized Alexander polynomial and its Conway coefficient.
/// Invariants: `delta(t) = delta(1/t)` exactly, `delta(1) = 1`, and
/// `a2 = delta''(1)/2` is an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlexanderData {
    pub delta: HalfIntLaurent,
    pub a2: i64,
}

/// Fox-calculus Alexander polynomial. The Wirtinger generators are the
/// over-arcs of the diagram; each crossing contributes the abelianized Fox
/// row of its relation, one row and one column are dropped, and the minor's
/// determinant is normalized by a unit `±t^k` to be symmetric with
/// `delta(1) = 1`.
pub fn alexander(d: &PlanarDiagram) -> Result<AlexanderData, AlexanderError> {
    if !d.is_knot() {
        return Err(AlexanderError::NotAKnot(d.component_count()));
    }
    let n = d.crossing_count();
    if n == 0 {
        return Ok(AlexanderData {
            delta: HalfIntLaurent::one(),
            a2: 0,
        });
    }

    // Arcs: edges merged across every over-pass.
    let mut arc: Vec<usize> = (0..d.edge_count()).collect();
    fn find(arc: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while arc[r] != r {
            r = arc[r];
        }
        let mut c = x;
        while arc[c] != c {
            let nx = arc[c];
            arc[c] = r;
            c = nx;
        }
        r
    }
    for cr in d.crossings() {
        let (a, b) = (cr.e[1], cr.e[3]);
        let (ra, rb) = (find(&mut arc, a), find(&mut arc, b));
        if ra != rb {
            arc[ra] = rb;
        }
    }
    let mut arc_id = vec![usize::MAX; d.edge_count()];
    let mut n_arcs = 0;
    for e in 0..d.edge_count() {
        let r = find(&mut arc, e);
        if arc_id[r] == usize::MAX {
            arc_id[r] = n_arcs;
            n_arcs += 1;
        }
        arc_id[e] = arc_id[r];
    }
    debug_assert_eq!(n_arcs, n, "a knot diagram has one arc per crossing");

    // Abelianized Fox matrix, doubled exponents (t = q^2).
    let t = || HalfIntLaurent::q_pow(2);
    let t_inv = || HalfIntLaurent::q_pow(-2);
    let mut m = vec![vec![HalfIntLaurent::zero(); n_arcs]; n];
    for (row, cr) in d.crossings().iter().enumerate() {
        let over = arc_id[cr.e[1]];
        let under_in = arc_id[cr.e[0]];
        let under_out = arc_id[cr.e[2]];
        let (over_coeff, in_coeff) = if cr.sign() > 0 {
            (&HalfIntLaurent::one() - &t(), t())
        } else {
            (&HalfIntLaurent::one() - &t_inv(), t_inv())
        };
        m[row][over] = &m[row][over] + &over_coeff;
        m[row][under_in] = &m[row][under_in] + &in_coeff;
        m[row][under_out] = &m[row][under_out] - &HalfIntLaurent::one();
    }
    // Any (n-1) x (n-1) minor works up to units; drop the last row/column.
    let minor: Vec<Vec<HalfIntLaurent>> = m[..n - 1]
        .iter()
        .map(|row| row[..n_arcs - 1].to_vec())
        .collect();
    let det = bareiss_det(minor);
    assert!(!det.is_zero(), "Wirtinger minor is nonsingular for a knot");

    // Unit normalization: center the support, fix the sign at t = 1.
    let (lo, hi) = det.support().unwrap();
    let shift = -(lo + hi) / 2;
    assert!(
        shift % 2 == 0,
        "knot Alexander determinant centers on an integer power of t"
    );
    let mut delta = det.mul_monomial(shift, &BigInt::one());
    let at_one = delta.eval_at_one();
    let at_one = at_one.to_integer();
    assert!(
        at_one.magnitude().is_one(),
        "normalized Alexander polynomial evaluates to +-1 at t = 1"
    );
    if at_one.is_negative() {
        delta = -&delta;
    }
    assert_eq!(
        delta,
        delta.invert_variable(),
        "Alexander polynomial is symmetric"
    );

    let second = delta.derivative_at_one(2).expect("order in range");
    assert!(second.is_integer(), "delta''(1) is an even integer");
    let two_a2 = second.to_integer();
    let a2_big = &two_a2 / BigInt::from(2);
    assert_eq!(&a2_big * BigInt::from(2), two_a2, "delta''(1) is even");
    let a2 = i64::try_from(&a2_big).expect("a2 fits i64 for tabulated diagrams");
    Ok(AlexanderData { delta, a2 })
}

/// Convenience projection of [`alexander`].
pub fn a2(d: &PlanarDiagram) -> Result<i64, AlexanderError> {
    Ok(alexander(d)?.a2)
}

/// Fraction-free Bareiss elimination; exact over the Laurent ring.
fn bareiss_det(mut m: Vec<Vec<HalfIntLaurent>>) -> HalfIntLaurent {
    let n = m.len();
    if n == 0 {
        return HalfIntLaurent::one();
    }
    let mut sign_flip = false;
    let mut prev = HalfIntLaurent::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return HalfIntLaurent::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss intermediate division is exact");
            }
            m[i][k] = HalfIntLaurent::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -&det
    } else {
        det
    }
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
    fn unknot_normalization() {
        let data = alexander(&PlanarDiagram::unknot()).unwrap();
        assert!(data.delta.is_one());
        assert_eq!(data.a2, 0);
        for kink in ["X(1,1,2,2)", "X(1,2,2,1)"] {
            let data = alexander(&parse(kink)).unwrap();
            assert!(data.delta.is_one(), "kink diagram is an unknot");
            assert_eq!(data.a2, 0);
        }
    }

    /// Oracle: Conway skein recursion on the trefoil's two-step tree.
    /// nabla(hopf) = z (switching a Hopf crossing splits the link), so
    /// nabla(trefoil) = 1 + z^2 and nabla(figure-eight) = 1 - z^2 with
    /// z = t^{1/2} - t^{-1/2}.
    #[test]
    fn trefoil_and_figure_eight_match_conway_oracle() {
        let z = HalfIntLaurent::q_minus_qinv();
        let z2 = &z * &z;
        let trefoil_expect = &HalfIntLaurent::one() + &z2;
        let fig8_expect = &HalfIntLaurent::one() - &z2;
        assert_eq!(
            trefoil_expect,
            HalfIntLaurent::from_terms([(2, 1), (0, -1), (-2, 1)]),
            "oracle gives t - 1 + t^{{-1}}"
        );

        for text in [TREFOIL_RIGHT, TREFOIL_LEFT] {
            let data = alexander(&parse(text)).unwrap();
            assert_eq!(data.delta, trefoil_expect);
            assert_eq!(data.a2, 1);
        }
        let data = alexander(&parse(FIGURE_EIGHT)).unwrap();
        assert_eq!(data.delta, fig8_expect);
        assert_eq!(data.a2, -1);
    }

    #[test]
    fn mirror_preserves_a2() {
        for text in [TREFOIL_RIGHT, FIGURE_EIGHT] {
            let d = parse(text);
            assert_eq!(a2(&d).unwrap(), a2(&d.mirror()).unwrap());
        }
    }

    #[test]
    fn multi_component_rejected() {
        let hopf = parse("X(1,3,2,4) X(3,1,4,2)");
        assert_eq!(alexander(&hopf).unwrap_err(), AlexanderError::NotAKnot(2));
    }

    #[test]
    fn symmetry_and_unit_value() {
        for text in [TREFOIL_RIGHT, TREFOIL_LEFT, FIGURE_EIGHT, "X(1,1,2,2)"] {
            let data = alexander(&parse(text)).unwrap();
            assert_eq!(data.delta, data.delta.invert_variable());
            assert_eq!(
                data.delta.eval_at_one(),
                crate::poly::Rational::from_integer(1.into())
            );
        }
    }
}
