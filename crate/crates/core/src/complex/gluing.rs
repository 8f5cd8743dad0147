//! Gluing data [a, b] and the transition maps they define.

use crate::error::{Error, Result};
use crate::groebner::buchberger;
use crate::poly::{int, MonomialOrder, Polynomial, Rational, VariableSpace};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

/// The univariate ring ℚ[u] used for gluing data.
pub fn gluing_space() -> Arc<VariableSpace> {
    static SPACE: OnceLock<Arc<VariableSpace>> = OnceLock::new();
    SPACE.get_or_init(|| VariableSpace::named(&["u"])).clone()
}

/// Univariate polynomials a(u), b(u): u₁ ↦ v₂·b(u₂), v₁ ↦ u₂ + v₂·a(u₂).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingData {
    pub a: Polynomial,
    pub b: Polynomial,
    pub valences: Option<(u32, u32)>,
}

impl GluingData {
    pub fn new(a: Polynomial, b: Polynomial) -> Result<Self> {
        let s = gluing_space();
        let a = a.embed(&s)?;
        let b = b.embed(&s)?;
        if b.is_zero() {
            return Err(Error::Gluing("b must not be the zero polynomial".into()));
        }
        Ok(Self { a, b, valences: None })
    }

    pub fn parse(a: &str, b: &str) -> Result<Self> {
        let s = gluing_space();
        Self::new(Polynomial::parse(a, &s)?, Polynomial::parse(b, &s)?)
    }

    /// deg a, with the zero polynomial counted as degree 0.
    pub fn deg_a(&self) -> u32 {
        self.a.total_degree().unwrap_or(0)
    }
}

/// 2cos(2π/w) when rational.
pub fn two_cos(w: u32) -> Option<Rational> {
    match w {
        1 => Some(int(2)),
        2 => Some(int(-2)),
        3 => Some(int(-1)),
        4 => Some(int(0)),
        6 => Some(int(1)),
        _ => None,
    }
}

/// a(u) = 2cos(2π/w)(1−u)² − 2cos(2π/w′)u², b = −1.
pub fn symmetric_gluing(w: u32, w2: u32) -> Result<GluingData> {
    let c = two_cos(w).ok_or_else(|| Error::Gluing(format!("2cos(2π/{w}) is irrational; supply a rational surrogate")))?;
    let c2 = two_cos(w2).ok_or_else(|| Error::Gluing(format!("2cos(2π/{w2}) is irrational; supply a rational surrogate")))?;
    let mut g = symmetric_gluing_with(c, c2);
    g.valences = Some((w, w2));
    Ok(g)
}

/// Symmetric form with explicit values standing in for 2cos(2π/w), 2cos(2π/w′).
pub fn symmetric_gluing_with(c: Rational, c2: Rational) -> GluingData {
    let s = gluing_space();
    let u = Polynomial::var(&s, 0);
    let one = Polynomial::one(&s);
    let h = (&one - &u).pow(2);
    let q = u.pow(2);
    let a = &h.scale(&c) - &q.scale(&c2);
    GluingData { a, b: Polynomial::constant(&s, -Rational::one()), valences: None }
}

/// Gluing data of two bilinear patches sharing the edge x = 0 with the common
/// corner at the origin. Corners are ψ⁻¹(0,0), ψ⁻¹(1,0), ψ⁻¹(0,1), ψ⁻¹(1,1).
pub fn bilinear_gluing(c1: [[Rational; 2]; 4], c2: [[Rational; 2]; 4]) -> Result<GluingData> {
    // ψ⁻¹(u,v) = P00 + (P10−P00)u + (P01−P00)v + (P11−P10−P01+P00)uv
    let coef = |c: &[[Rational; 2]; 4], k: usize| {
        let p00 = &c[0][k];
        let p10 = &c[1][k];
        let p01 = &c[2][k];
        let p11 = &c[3][k];
        (p00.clone(), p10 - p00, p01 - p00, p11 - p10 - p01 + p00)
    };
    let (a00, a10, a01, a11) = coef(&c1, 0);
    let (b00, b10, b01, b11) = coef(&c1, 1);
    let (c00, c10, c01, c11) = coef(&c2, 0);
    let (e00, e10, e01, e11) = coef(&c2, 1);
    for (name, v) in [("a00", &a00), ("a01", &a01), ("b00", &b00), ("c10", &c10), ("c00", &c00), ("e00", &e00)] {
        if !v.is_zero() {
            return Err(Error::Gluing(format!("patches not normalized to the shared edge x = 0 at the origin ({name} ≠ 0)")));
        }
    }
    if !a11.is_zero() || !b11.is_zero() {
        return Err(Error::Gluing(format!(
            "no polynomial solution: first patch is genuinely bilinear (a11 = {a11}, b11 = {b11})"
        )));
    }
    if a10.is_zero() || b01.is_zero() {
        return Err(Error::Gluing("degenerate first patch".into()));
    }
    if e10 != b01 {
        return Err(Error::Gluing(format!("the patches parametrize the shared edge differently ({e10} ≠ {b01})")));
    }
    let s = gluing_space();
    let u = Polynomial::var(&s, 0);
    let k = |x: &Rational| Polynomial::constant(&s, x.clone());
    // a10·b(u) = c11·u + c01 ;  b01·a(u) + b10·b(u) = e11·u + e01
    let b = (&u.scale(&c11) + &k(&c01)).scale(&a10.recip());
    let a = (&(&u.scale(&e11) + &k(&e01)) - &b.scale(&b10)).scale(&b01.recip());
    GluingData::new(a, b)
}

/// A transition in relative coordinates: images of (u₁, …) in terms of the
/// target's relative coordinates, in a private space `u1_i`, `u2_i`.
#[derive(Clone, Debug)]
pub struct RelativeTransition {
    pub space: Arc<VariableSpace>,
    pub n: usize,
    pub r: u32,
    pub images: Vec<Polynomial>,
    pub source_ideal: Polynomial,
    pub target_ideal: Polynomial,
}

fn relative_space(n: usize) -> Arc<VariableSpace> {
    VariableSpace::for_faces(&[1, 2], n)
}

/// u₁ ↦ v₂·b(u₂), v₁ ↦ u₂ + v₂·a(u₂), reduced modulo ⟨v₂^{r+1}⟩.
pub fn transition_from_gluing(g: &GluingData, r: u32) -> Result<RelativeTransition> {
    let s = relative_space(2);
    let u2 = Polynomial::var(&s, 2);
    let v2 = Polynomial::var(&s, 3);
    let at_u2 = |p: &Polynomial| p.substitute(&BTreeMap::from([(0, u2.clone())]), &s);
    let img_u = &v2 * &at_u2(&g.b)?;
    let img_v = &u2 + &(&v2 * &at_u2(&g.a)?);
    let gb = buchberger(&[v2.pow(r + 1)], &MonomialOrder::grevlex(4))?;
    Ok(RelativeTransition {
        images: vec![gb.normal_form(&img_u), gb.normal_form(&img_v)],
        source_ideal: Polynomial::var(&s, 0),
        target_ideal: v2,
        space: s,
        n: 2,
        r,
    })
}

/// Generic n-face form: u₁₁ ↦ Σ_j u₂ₙ^j p_j, u₁ᵢ ↦ u₂₍ᵢ₋₁₎ + Σ_j u₂ₙ^j q_{ij}
/// (i = 2..n), where p_j and q_ij are polynomials in u₂₁..u₂₍ₙ₋₁₎ given in
/// ℚ[u1_.., u2_..] of the relative space (use [`RelativeTransition::space`]).
pub fn generic_transition(n: usize, r: u32, p: &[Polynomial], q: &[Vec<Polynomial>]) -> Result<RelativeTransition> {
    let s = relative_space(n);
    if p.len() != r as usize || q.len() != n - 1 || q.iter().any(|row| row.len() != r as usize) {
        return Err(Error::Gluing("generic transition: coefficient list shapes do not match (n, r)".into()));
    }
    let last = Polynomial::var(&s, n + n - 1);
    let mut images = Vec::new();
    let mut first = Polynomial::zero(&s);
    for (j, pj) in p.iter().enumerate() {
        first = &first + &(&last.pow(j as u32 + 1) * &pj.embed(&s)?);
    }
    images.push(first);
    for (i, row) in q.iter().enumerate() {
        let mut img = Polynomial::var(&s, n + i);
        for (j, qij) in row.iter().enumerate() {
            img = &img + &(&last.pow(j as u32 + 1) * &qij.embed(&s)?);
        }
        images.push(img);
    }
    Ok(RelativeTransition { images, source_ideal: Polynomial::var(&s, 0), target_ideal: last, space: s, n, r })
}

/// Affine chart change `rel = M·x + t` between a face's own coordinates and a
/// relative frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub m: Vec<Vec<Rational>>,
    pub t: Vec<Rational>,
}

impl Frame {
    pub fn identity(n: usize) -> Self {
        let m = (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
        Self { m, t: vec![Rational::zero(); n] }
    }

    /// Frame sending points `p[k]` to `f[k]` (k = 0..=n, affinely independent).
    pub fn from_points(p: &[Vec<Rational>], f: &[Vec<Rational>]) -> Result<Self> {
        let n = p.len() - 1;
        // M·(p_k − p_0) = f_k − f_0
        let dp: Vec<Vec<Rational>> = (1..=n).map(|k| (0..n).map(|i| &p[k][i] - &p[0][i]).collect()).collect();
        let df: Vec<Vec<Rational>> = (1..=n).map(|k| (0..n).map(|i| &f[k][i] - &f[0][i]).collect()).collect();
        // columns: P = [dp_1 .. dp_n], F = [df_1 .. df_n]; M = F·P⁻¹
        let pm = crate::linalg::RationalMatrix::from_rows((0..n).map(|i| (0..n).map(|k| dp[k][i].clone()).collect()).collect());
        let inv = invert(&pm).ok_or_else(|| Error::Gluing("frame points are degenerate".into()))?;
        let fm = crate::linalg::RationalMatrix::from_rows((0..n).map(|i| (0..n).map(|k| df[k][i].clone()).collect()).collect());
        let mm = fm.mul(&inv);
        let m: Vec<Vec<Rational>> = (0..n).map(|i| mm.row(i).to_vec()).collect();
        let t = (0..n).map(|i| &f[0][i] - (0..n).map(|j| &m[i][j] * &p[0][j]).sum::<Rational>()).collect();
        Ok(Self { m, t })
    }

    pub fn inverse(&self) -> Result<Frame> {
        let n = self.t.len();
        let inv = invert(&crate::linalg::RationalMatrix::from_rows(self.m.clone()))
            .ok_or_else(|| Error::Gluing("singular frame".into()))?;
        let m: Vec<Vec<Rational>> = (0..n).map(|i| inv.row(i).to_vec()).collect();
        let t = (0..n).map(|i| -(0..n).map(|j| &m[i][j] * &self.t[j]).sum::<Rational>()).collect();
        Ok(Frame { m, t })
    }

    /// The relative coordinates as polynomials in the given variables.
    pub fn apply(&self, vars: &[Polynomial]) -> Vec<Polynomial> {
        let s = vars[0].space().clone();
        (0..self.t.len())
            .map(|i| {
                let mut p = Polynomial::constant(&s, self.t[i].clone());
                for (j, v) in vars.iter().enumerate() {
                    p = &p + &v.scale(&self.m[i][j]);
                }
                p
            })
            .collect()
    }
}

pub(crate) fn invert(m: &crate::linalg::RationalMatrix) -> Option<crate::linalg::RationalMatrix> {
    let n = m.rows();
    let mut cols = Vec::new();
    for j in 0..n {
        let e: Vec<Rational> = (0..n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect();
        cols.push(m.solve(&e)?);
    }
    if m.rank() < n {
        return None;
    }
    Some(crate::linalg::RationalMatrix::from_rows((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()))
}

impl RelativeTransition {
    /// Global lift `x₁ ↦ A₁⁻¹(φ(A₂ x₂))` for the given frames; `src`/`dst` are
    /// the faces' variables in the global space. Returns the lift images and
    /// the two facet-ideal generators (source frame u, target frame last coordinate).
    pub fn globalize(
        &self,
        src: &[Polynomial],
        dst: &[Polynomial],
        src_frame: &Frame,
        dst_frame: &Frame,
    ) -> Result<(Vec<Polynomial>, Polynomial, Polynomial)> {
        let n = self.n;
        let gspace = src[0].space().clone();
        let rel_dst = dst_frame.apply(dst);
        let mut map = BTreeMap::new();
        for (i, p) in rel_dst.iter().enumerate() {
            map.insert(n + i, p.clone());
        }
        for i in 0..n {
            // source relative vars do not occur in the images
            map.insert(i, Polynomial::zero(&gspace));
        }
        let phi: Vec<Polynomial> = self.images.iter().map(|p| p.substitute(&map, &gspace)).collect::<Result<_>>()?;
        let inv = src_frame.inverse()?;
        let images = inv.apply(&phi);
        let rel_src = src_frame.apply(src);
        let l2 = rel_dst[n - 1].clone();
        let gb = buchberger(&[l2.pow(self.r + 1)], &MonomialOrder::grevlex(gspace.nvars()))?;
        let images = images.iter().map(|p| gb.normal_form(p)).collect();
        Ok((images, rel_src[0].clone(), l2))
    }
}
