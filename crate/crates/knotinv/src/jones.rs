//! Jones polynomial via the Kauffman bracket.
//!
//! Two evaluators produce the bracket: a plain state sum over the `2^n`
//! A/B smoothings, and a memoized sequential crossing contraction that
//! processes crossings in an order keeping the open-strand frontier small
//! and caches partial tangle brackets keyed by the matching of frontier
//! endpoints. They agree exactly; `jones` uses the contraction.
//!
//! Conventions (anchored by the right-trefoil calibration): for a crossing
//! `X(a,b,c,d)` the A-smoothing joins `a-b` and `c-d`, the B-smoothing
//! joins `a-d` and `b-c`; a closed circle contributes `-A^2 - A^{-2}`;
//! `V_L(t) = (-A)^{-3w} <L>` under `t = A^{-4}`, so `q = t^{1/2} = A^{-2}`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::diagram::PlanarDiagram;
use crate::poly::{HalfIntLaurent, Rational};

/// Kauffman bracket: a Laurent polynomial whose doubled-exponent keys are
/// read as powers of the bracket variable `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketPoly(pub HalfIntLaurent);

/// The value of a disjoint circle, `-A^2 - A^{-2}`.
pub fn loop_value() -> HalfIntLaurent {
    HalfIntLaurent::from_terms([(2i64, -1i32), (-2, -1)])
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != c {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Plain state sum over all `2^n` smoothings. Exponential; fine for the
/// diagrams it is asked about in tests, use [`jones`] otherwise.
pub fn kauffman_bracket(d: &PlanarDiagram) -> BracketPoly {
    kauffman_bracket_counting(d).0
}

/// State sum plus the number of states evaluated (exactly `2^n`).
pub fn kauffman_bracket_counting(d: &PlanarDiagram) -> (BracketPoly, u64) {
    let n = d.crossing_count();
    assert!(n <= 26, "state sum over 2^{n} states; use jones() instead");
    let crossings = d.crossings();
    let mut total = HalfIntLaurent::zero();
    let mut states = 0u64;
    for mask in 0u64..(1u64 << n) {
        states += 1;
        let mut dsu = Dsu::new(d.edge_count());
        let mut a_minus_b: i64 = 0;
        for (i, cr) in crossings.iter().enumerate() {
            let a_smoothing = mask & (1 << i) == 0;
            let pairs: [(usize, usize); 2] = if a_smoothing {
                a_minus_b += 1;
                [(0, 1), (2, 3)]
            } else {
                a_minus_b -= 1;
                [(0, 3), (1, 2)]
            };
            for (x, y) in pairs {
                dsu.union(cr.e[x], cr.e[y]);
            }
        }
        let mut loops = d.free_loop_count();
        for e in 0..d.edge_count() {
            if dsu.find(e) == e {
                loops += 1;
            }
        }
        let mut term = HalfIntLaurent::monomial(a_minus_b, 1);
        let delta = loop_value();
        for _ in 0..loops {
            term = &term * &delta;
        }
        total = &total + &term;
    }
    let bracket = total
        .div_exact(&loop_value())
        .expect("every state carries at least one circle");
    (BracketPoly(bracket), states)
}

/// Memoized frontier contraction.
pub fn kauffman_bracket_contracted(d: &PlanarDiagram) -> BracketPoly {
    let n = d.crossing_count();
    let crossings = d.crossings();

    // Greedy processing order: always take the crossing sharing the most
    // edges with the current frontier (fewest new open strands).
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut processed = vec![false; n];
    let mut open: std::collections::HashSet<usize> = Default::default();
    let mut edge_sides: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, cr) in crossings.iter().enumerate() {
        for &e in &cr.e {
            edge_sides.entry(e).or_default().push(i);
        }
    }
    for _ in 0..n {
        let mut best = usize::MAX;
        let mut best_score = i64::MIN;
        for (i, cr) in crossings.iter().enumerate() {
            if processed[i] {
                continue;
            }
            let mut shared = 0i64;
            for &e in &cr.e {
                if open.contains(&e) {
                    shared += 1;
                }
            }
            if shared > best_score {
                best_score = shared;
                best = i;
            }
        }
        processed[best] = true;
        order.push(best);
        for &e in &crossings[best].e {
            if !open.remove(&e) {
                // self-loop edges at `best` enter and leave the frontier here
                let both_here = crossings[best].e.iter().filter(|&&x| x == e).count() == 2;
                if !both_here {
                    open.insert(e);
                }
            }
        }
    }

    type Matching = Vec<(u32, u32)>;
    let mut states: HashMap<Matching, HalfIntLaurent> = HashMap::new();
    states.insert(Vec::new(), HalfIntLaurent::one());
    let delta = loop_value();
    let mut done = vec![false; n];

    for &ci in &order {
        let cr = &crossings[ci];
        done[ci] = true;
        let mut next: HashMap<Matching, HalfIntLaurent> = HashMap::new();
        for (matching, weight) in &states {
            let in_matching: HashMap<u32, u32> = matching
                .iter()
                .flat_map(|&(a, b)| [(a, b), (b, a)])
                .collect();
            for (arcs, exp) in [([(0u8, 1u8), (2, 3)], 1i64), ([(0, 3), (1, 2)], -1)] {
                let (new_pairs, loops) = splice(cr.e, &arcs, &in_matching, |e| {
                    let sides = &edge_sides[&(e as usize)];
                    // an edge not incident to `ci` on its far side stays open
                    // when that far crossing is still unprocessed
                    sides.iter().any(|&c| !done[c])
                });
                let mut m: Matching = matching
                    .iter()
                    .copied()
                    .filter(|&(a, b)| {
                        !cr.e.contains(&(a as usize)) && !cr.e.contains(&(b as usize))
                    })
                    .collect();
                m.extend(new_pairs);
                m.sort_unstable();
                let mut w = weight.mul_monomial(exp, &BigInt::one());
                for _ in 0..loops {
                    w = &w * &delta;
                }
                next.entry(m)
                    .and_modify(|acc| *acc = &*acc + &w)
                    .or_insert(w);
            }
        }
        states = next;
    }

    debug_assert_eq!(states.len(), 1);
    let mut total = states
        .remove(&Vec::new())
        .expect("all strands close by the end");
    for _ in 0..d.free_loop_count() {
        total = &total * &delta;
    }
    let bracket = total
        .div_exact(&delta)
        .expect("state sum is divisible by the circle value");
    BracketPoly(bracket)
}

/// Resolve the connectivity created by smoothing one crossing: `arcs` pair
/// up the four ports, `matching` describes how already-open edges connect
/// through the processed region, `stays_open` says whether an edge incident
/// to this crossing still has an unprocessed far endpoint. Returns the new
/// open pairs and the number of circles closed.
fn splice(
    e: [usize; 4],
    arcs: &[(u8, u8); 2],
    matching: &HashMap<u32, u32>,
    stays_open: impl Fn(u32) -> bool,
) -> (Vec<(u32, u32)>, usize) {
    // Nodes: 0..4 are the ports, 4.. are external edge stubs.
    let mut ext_ids: Vec<u32> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 4];
    let link = |adj: &mut Vec<Vec<usize>>, a: usize, b: usize| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for &(p, q) in arcs {
        link(&mut adj, p as usize, q as usize);
    }
    let mut edge_done = [false; 4];
    for p in 0..4usize {
        if edge_done[p] {
            continue;
        }
        let eid = e[p] as u32;
        // self-loop edge at this crossing?
        if let Some(q) = (p + 1..4).find(|&q| e[q] == e[p]) {
            link(&mut adj, p, q);
            edge_done[p] = true;
            edge_done[q] = true;
            continue;
        }
        edge_done[p] = true;
        if let Some(&far) = matching.get(&eid) {
            // connected through the processed region to `far`
            if let Some(r) = (0..4).find(|&r| e[r] == far as usize) {
                // `far` is also incident here; link the two ports once
                link(&mut adj, p, r);
                edge_done[r] = true;
            } else {
                let node = adj.len();
                adj.push(Vec::new());
                ext_ids.push(far);
                link(&mut adj, p, node);
            }
        } else {
            debug_assert!(stays_open(eid));
            let node = adj.len();
            adj.push(Vec::new());
            ext_ids.push(eid);
            link(&mut adj, p, node);
        }
    }
    debug_assert!(adj.iter().take(4).all(|v| v.len() == 2));

    let mut visited = vec![false; adj.len()];
    let mut pairs = Vec::new();
    // paths between external stubs; ports have degree 2, stubs degree 1
    for start in 4..adj.len() {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut prev = start;
        let mut cur = adj[start][0];
        while cur < 4 {
            visited[cur] = true;
            let next = if adj[cur][0] == prev {
                adj[cur][1]
            } else {
                adj[cur][0]
            };
            prev = cur;
            cur = next;
        }
        visited[cur] = true;
        let a = ext_ids[start - 4];
        let b = ext_ids[cur - 4];
        pairs.push((a.min(b), a.max(b)));
    }
    // leftover cycles among ports
    let mut loops = 0;
    for start in 0..4usize {
        if visited[start] {
            continue;
        }
        loops += 1;
        let mut prev = start;
        let mut cur = adj[start][0];
        visited[start] = true;
        while cur != start {
            visited[cur] = true;
            let next = if adj[cur][0] == prev {
                adj[cur][1]
            } else {
                adj[cur][0]
            };
            prev = cur;
            cur = next;
        }
    }
    (pairs, loops)
}

/// The Jones polynomial in `q = t^{1/2}`, normalized so `V(unknot) = 1`:
/// the contracted bracket with the `(-A)^{-3w}` writhe correction under
/// `t = A^{-4}`. Satisfies the skein relation
/// `t^{-1} V(L+) - t V(L-) = (q - q^{-1}) V(L0)` for every resolved triple.
pub fn jones(d: &PlanarDiagram) -> HalfIntLaurent {
    let bracket = kauffman_bracket_contracted(d);
    jones_from_bracket(&bracket, d.writhe())
}

pub(crate) fn jones_from_bracket(bracket: &BracketPoly, writhe: i64) -> HalfIntLaurent {
    let sign = if writhe.rem_euclid(2) == 0 { 1 } else { -1 };
    let corrected = bracket
        .0
        .mul_monomial(-3 * writhe, &BigInt::from(sign));
    let mut out = HalfIntLaurent::zero();
    for (k, c) in corrected.terms() {
        assert!(k % 2 == 0, "writhe-corrected bracket must be even in A");
        out.add_term(-k / 2, c.clone());
    }
    out
}

/// `(V(1), V'(1), V''(1), V'''(1))` as exact rationals.
pub fn jones_derivatives(d: &PlanarDiagram) -> [Rational; 4] {
    let v = jones(d);
    [0u32, 1, 2, 3].map(|k| v.derivative_at_one(k).expect("order in range"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{TREFOIL_LEFT, TREFOIL_RIGHT};
    use num_traits::Zero;

    fn parse(text: &str) -> PlanarDiagram {
        PlanarDiagram::parse(text).unwrap()
    }

    fn q(e: i64) -> HalfIntLaurent {
        HalfIntLaurent::q_pow(e)
    }

    const HOPF_POSITIVE: &str = "X(1,3,2,4) X(3,1,4,2)";
    /// closure of the braid (s1 s2^-1)^2
    const FIGURE_EIGHT: &str = "X(4,2,5,1) X(2,7,3,8) X(8,6,1,5) X(6,3,7,4)";

    #[test]
    fn bracket_unknot_is_one() {
        let b = kauffman_bracket(&PlanarDiagram::unknot());
        assert!(b.0.is_one());
    }

    #[test]
    fn bracket_two_circles_is_loop_value() {
        let b = kauffman_bracket(&parse("UNKNOT UNKNOT"));
        assert_eq!(b.0, loop_value());
    }

    #[test]
    fn state_count_is_two_to_the_n() {
        let (_, states) = kauffman_bracket_counting(&parse(TREFOIL_RIGHT));
        assert_eq!(states, 8);
        let (_, s1) = kauffman_bracket_counting(&parse("X(1,1,2,2)"));
        assert_eq!(s1, 2);
    }

    /// Independent oracle for the trefoil Jones polynomial: unroll the skein
    /// relation `t^{-1} V(L+) - t V(L-) = (q - q^{-1}) V(L0)` by hand from
    /// the base values V(unknot) = 1 and V(2-component unlink) = -q - q^{-1}.
    fn skein_oracle_right_trefoil() -> (HalfIntLaurent, HalfIntLaurent) {
        let t = q(2);
        let z = HalfIntLaurent::q_minus_qinv();
        let unknot = HalfIntLaurent::one();
        let unlink2 = HalfIntLaurent::from_terms([(1, -1), (-1, -1)]);
        // positive Hopf: L+ = Hopf, L- = unlink, L0 = unknot
        let hopf = &t * &(&(&t * &unlink2) + &(&z * &unknot));
        // right trefoil: L+ = trefoil, L- = unknot, L0 = positive Hopf
        let trefoil = &t * &(&(&t * &unknot) + &(&z * &hopf));
        (hopf, trefoil)
    }

    #[test]
    fn jones_right_trefoil_matches_skein_oracle() {
        let (hopf_expect, trefoil_expect) = skein_oracle_right_trefoil();
        assert_eq!(
            trefoil_expect,
            HalfIntLaurent::from_terms([(8, -1), (6, 1), (2, 1)]),
            "oracle reproduces -t^4 + t^3 + t"
        );
        assert_eq!(jones(&parse(TREFOIL_RIGHT)), trefoil_expect);
        assert_eq!(jones(&parse(HOPF_POSITIVE)), hopf_expect);
    }

    #[test]
    fn jones_unknots() {
        assert!(jones(&PlanarDiagram::unknot()).is_one());
        assert_eq!(
            jones(&parse("UNKNOT UNKNOT")),
            HalfIntLaurent::from_terms([(1, -1), (-1, -1)])
        );
        // one-crossing kinks are unknots
        assert!(jones(&parse("X(1,1,2,2)")).is_one());
        assert!(jones(&parse("X(1,2,2,1)")).is_one());
    }

    #[test]
    fn jones_mirror_inverts_variable() {
        for text in [TREFOIL_RIGHT, HOPF_POSITIVE, FIGURE_EIGHT] {
            let d = parse(text);
            assert_eq!(jones(&d.mirror()), jones(&d).invert_variable());
        }
        assert_eq!(
            jones(&parse(TREFOIL_LEFT)),
            jones(&parse(TREFOIL_RIGHT)).invert_variable()
        );
    }

    #[test]
    fn naive_and_contracted_agree() {
        for text in [
            TREFOIL_RIGHT,
            TREFOIL_LEFT,
            HOPF_POSITIVE,
            FIGURE_EIGHT,
            "X(1,1,2,2) X(3,3,4,4)",
            "UNKNOT",
        ] {
            let d = parse(text);
            assert_eq!(
                kauffman_bracket(&d),
                kauffman_bracket_contracted(&d),
                "paths disagree on {text}"
            );
        }
    }

    #[test]
    fn skein_identity_at_every_crossing() {
        let z = HalfIntLaurent::q_minus_qinv();
        for text in [TREFOIL_RIGHT, TREFOIL_LEFT, HOPF_POSITIVE, FIGURE_EIGHT] {
            let d = parse(text);
            for i in 0..d.crossing_count() {
                let tr = d.resolve(i).unwrap();
                let lhs = &(&q(-2) * &jones(&tr.positive)) - &(&q(2) * &jones(&tr.negative));
                let rhs = &z * &jones(&tr.resolved);
                assert_eq!(lhs, rhs, "skein fails at crossing {i} of {text}");
            }
        }
    }

    #[test]
    fn knot_normalization_and_link_values() {
        for text in [TREFOIL_RIGHT, FIGURE_EIGHT] {
            let [v0, v1, ..] = jones_derivatives(&parse(text));
            assert_eq!(v0, Rational::from_integer(1.into()));
            assert!(v1.is_zero());
        }
        // positive Hopf: V(1) = -2, V'(1) = -3 lk = -3
        let [v0, v1, ..] = jones_derivatives(&parse(HOPF_POSITIVE));
        assert_eq!(v0, Rational::from_integer((-2).into()));
        assert_eq!(v1, Rational::from_integer((-3).into()));
    }

    #[test]
    fn figure_eight_derivatives() {
        // V(4_1) = t^-2 - t^-1 + 1 - t + t^2, so V''(1) = 6, V'''(1) = -18.
        let v = jones(&parse(FIGURE_EIGHT));
        assert_eq!(
            v,
            HalfIntLaurent::from_terms([(-4, 1), (-2, -1), (0, 1), (2, -1), (4, 1)])
        );
        let d = jones_derivatives(&parse(FIGURE_EIGHT));
        assert_eq!(d[2], Rational::from_integer(6.into()));
        assert_eq!(d[3], Rational::from_integer((-18).into()));
    }
}
