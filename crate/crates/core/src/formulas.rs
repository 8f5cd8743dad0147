//! Closed-form dimension counts for two patches, vertex stars and
//! C^r splines on two simplices.

use crate::complex::{transition_from_gluing, GluingData, RelativeTransition};
use crate::error::{Error, Result};
use crate::poly::{binomial, int, GradingKind, Polynomial};

/// Dimension of G¹ splines on two patches glued by [𝔞, 𝔟] with deg 𝔞 = `d_a`.
/// `constant` selects the constant-𝔞 formulas, stated for every d ≥ 0.
/// Note the bidegree one gives 0 at d = 0 although the constants span a
/// 1-dimensional space there.
pub fn closed_form_two_patch(d_a: u32, d: u32, g: GradingKind, constant: bool) -> Result<i64> {
    let (di, da) = (d as i64, d_a as i64);
    if constant {
        return Ok(match g {
            GradingKind::Total => di * di + di + 1,
            GradingKind::Bidegree => 2 * di * di + 2 * di,
        });
    }
    let (ok, v) = match g {
        GradingKind::Total => (d > d_a, di * di + di + 1 - da),
        GradingKind::Bidegree => (d >= d_a, 2 * di * di + 2 * di + 1 - da),
    };
    if !ok {
        return Err(Error::BelowThreshold(format!("two-patch formula needs larger degree than {d} for deg 𝔞 = {d_a}")));
    }
    Ok(v)
}

/// χ of the vertex-star complex and whether it equals the dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StarFormula {
    pub value: i64,
    /// True when the degree is high enough for χ to be the exact dimension.
    pub exact: bool,
}

/// χ(Q¹_{d,•}) on a star of `s` faces with symmetric gluing data.
pub fn closed_form_star(s: u32, d_a: u32, d: u32, g: GradingKind, a_is_zero: bool) -> Result<StarFormula> {
    let (si, da, di) = (s as i64, d_a as i64, d as i64);
    let (ok, value) = match (s == 4, g) {
        (false, GradingKind::Total) => (d > d_a, si * binomial(d as usize + 2, 2) as i64 - si * (2 * di + da + 1) + 3),
        (false, GradingKind::Bidegree) => (d >= d_a, si * (di + 1) * (di + 1) - si * (2 * di + da + 1) + 3),
        (true, GradingKind::Total) => (d >= 2, if a_is_zero { 2 * (di * di - di + 2) } else { 2 * (di * di - di - 2) }),
        (true, GradingKind::Bidegree) => (d >= 1, if a_is_zero { 4 * di * di } else { 4 * (di * di - 1) }),
    };
    if !ok {
        return Err(Error::BelowThreshold(format!("star formula (s = {s}) not asserted at degree {d}")));
    }
    let exact = match g {
        GradingKind::Total => d >= 4,
        GradingKind::Bidegree => d >= 3,
    };
    Ok(StarFormula { value, exact })
}

/// C^r splines of degree ≤ d on two n-simplices sharing a facet:
/// C(d+n, n) + C(d−r−1+n, n).
pub fn bss_reference_dim(n: u32, r: u32, d: u32) -> usize {
    let n = n as usize;
    let base = binomial(d as usize + n, n);
    if d < r + 1 {
        return base;
    }
    base + binomial((d - r - 1) as usize + n, n)
}

/// Explicit spanning set of J¹(τ) for two patches glued by symmetric data
/// with b = −1, in the relative coordinates (u1_1, u1_2, u2_1, u2_2) of
/// [`transition_from_gluing`]. Returned with that transition so callers can
/// build I¹(τ) in the same space.
pub fn two_patch_j_basis(g: &GluingData, d: u32, kind: GradingKind) -> Result<(RelativeTransition, Vec<Polynomial>)> {
    let t = transition_from_gluing(g, 1)?;
    let s = t.space.clone();
    let x = |i: usize| Polynomial::var(&s, i);
    let (u1, v1, u2, v2) = (x(0), x(1), x(2), x(3));
    let a = g.a.substitute(&std::collections::BTreeMap::from([(0, u2.clone())]), &s)?;
    let da = g.deg_a();
    if da == 0 || g.b != Polynomial::constant(&g.b.space().clone(), int(-1)) {
        return Err(Error::Gluing("explicit J-basis needs non-constant 𝔞 and 𝔟 = −1".into()));
    }
    // v₁^i − (u₂^i + i·u₂^{i−1}·v₂·𝔞(u₂))
    let graph = |i: u32| &v1.pow(i) - &(&u2.pow(i) + &(&(&u2.pow(i - 1) * &v2) * &a).scale(&int(i as i64)));
    let mut out = Vec::new();
    match kind {
        GradingKind::Total => {
            if d < da + 1 {
                return Err(Error::BelowThreshold(format!("total degree list needs d ≥ {}", da + 1)));
            }
            for i in 2..=d {
                for j in 0..=d - i {
                    out.push(&u1.pow(i) * &v1.pow(j));
                    out.push(&u2.pow(j) * &v2.pow(i));
                }
            }
            for i in 0..d {
                out.push(&(&u1 * &v1.pow(i)) + &(&u2.pow(i) * &v2));
            }
            for i in 1..=d - da {
                out.push(graph(i));
            }
        }
        GradingKind::Bidegree => {
            if d < da {
                return Err(Error::BelowThreshold(format!("bidegree list needs d ≥ {da}")));
            }
            for j in 0..=d {
                for i in 2..=d {
                    out.push(&u1.pow(i) * &v1.pow(j));
                    out.push(&u2.pow(j) * &v2.pow(i));
                }
                out.push(&(&u1 * &v1.pow(j)) + &(&u2.pow(j) * &v2));
            }
            for i in 1..=d + 1 - da {
                out.push(graph(i));
            }
        }
    }
    Ok((t, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_patch_values() {
        assert_eq!(closed_form_two_patch(2, 4, GradingKind::Total, false).unwrap(), 19);
        assert_eq!(closed_form_two_patch(2, 3, GradingKind::Bidegree, false).unwrap(), 23);
        assert_eq!(closed_form_two_patch(0, 1, GradingKind::Bidegree, true).unwrap(), 4);
        assert!(matches!(closed_form_two_patch(2, 2, GradingKind::Total, false), Err(Error::BelowThreshold(_))));
        assert_eq!(closed_form_two_patch(0, 0, GradingKind::Bidegree, true).unwrap(), 0);
    }

    #[test]
    fn star_values() {
        assert_eq!(closed_form_star(4, 2, 3, GradingKind::Total, false).unwrap().value, 8);
        assert_eq!(closed_form_star(4, 0, 2, GradingKind::Total, true).unwrap().value, 8);
        assert_eq!(closed_form_star(3, 2, 3, GradingKind::Bidegree, false).unwrap(), StarFormula { value: 24, exact: true });
        let f = closed_form_star(3, 2, 4, GradingKind::Total, false).unwrap();
        assert_eq!(f, StarFormula { value: 15, exact: true });
    }

    #[test]
    fn bss_values() {
        assert_eq!(bss_reference_dim(2, 1, 3), 13);
        assert_eq!(bss_reference_dim(2, 0, 1), 4);
        assert_eq!(bss_reference_dim(2, 4, 4), 15);
    }
}
