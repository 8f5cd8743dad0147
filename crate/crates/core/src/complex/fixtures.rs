//! Standard domains: two patches, vertex stars, the cube, a circle, a
//! sphere and two simplices.

use super::domain::{FaceIdeal, GrDomain, TransitionMap};
use super::gluing::{symmetric_gluing, symmetric_gluing_with, two_cos, GluingData};
use super::quad::{FrameConvention, QuadMesh};
use super::CellComplex;
use crate::error::{Error, Result};
use crate::groebner::buchberger;
use crate::poly::{rat, MonomialOrder, Polynomial, Rational};
use std::collections::BTreeMap;

/// Two unit squares glued along one edge with the given data.
pub fn two_patch(g: &GluingData, r: u32) -> Result<GrDomain> {
    let mesh = QuadMesh::new(6, vec![[0, 1, 2, 3], [1, 0, 4, 5]]);
    mesh.build_domain("two_patch", r, FrameConvention::Inward, None, |_| Ok(g.clone()))
}

/// Star of `s` squares around one interior vertex (id 0). Face i has corners
/// [γ, δ_{i−1}, F_i, δ_i]; edges are oriented σ_i → σ_{i+1}. The boundary
/// ends use valence `w_other`. `surrogate`, when given, replaces the per-edge
/// value of 2cos(2π/s) (needed for s = 5).
pub fn vertex_star(s: usize, w_other: u32, surrogate: Option<&[Rational]>, r: u32) -> Result<GrDomain> {
    if s < 3 {
        return Err(Error::Complex("a vertex star needs at least 3 faces".into()));
    }
    if let Some(c) = surrogate {
        if c.len() != s {
            return Err(Error::Gluing(format!("surrogate needs {s} values, got {}", c.len())));
        }
    }
    let delta = |i: usize| 1 + i % s;
    let faces = (0..s).map(|i| [0, delta(i + s - 1), 1 + s + i, delta(i)]).collect();
    let mesh = QuadMesh::new(1 + 2 * s, faces);
    let c2 = two_cos(w_other).ok_or_else(|| Error::Gluing(format!("valence {w_other} has no rational 2cos")))?;
    let src = |_e: usize, f: usize, g: usize| if (f + 1) % s == g { f } else { g };
    let name = format!("star_{s}");
    mesh.build_domain(&name, r, FrameConvention::Inward, Some(&src), |ctx| match surrogate {
        Some(c) => Ok(symmetric_gluing_with(c[ctx.source].clone(), c2.clone())),
        None => symmetric_gluing(s as u32, w_other),
    })
}

/// The s = 5 surrogate values (2/1-scaled cosines) per edge whose transition
/// cycle closes exactly.
pub fn star5_surrogate() -> Vec<Rational> {
    vec![rat(1, 2), rat(1, 2), rat(2, 3), rat(3, 4), rat(2, 3)]
}

/// Which literal gluing the cube uses on every edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CubeVariant {
    /// a = 2u − 1, inward frames.
    #[default]
    Standard,
    /// a = −2u + 1 with reflected frames (same global lifts).
    Reflected,
    /// a = −2u + 1 with inward frames; fails the vertex cycle condition.
    ReflectedInward,
}

pub fn cube_mesh() -> QuadMesh {
    QuadMesh::new(
        8,
        vec![[0, 2, 3, 1], [4, 5, 7, 6], [0, 1, 5, 4], [2, 6, 7, 3], [0, 4, 6, 2], [1, 3, 7, 5]],
    )
}

pub fn cube(variant: CubeVariant, r: u32) -> Result<GrDomain> {
    cube_from_mesh(&cube_mesh(), variant, r)
}

/// The cube with one face's orientation reversed (not coherently oriented).
pub fn flipped_cube_mesh() -> QuadMesh {
    let mut m = cube_mesh();
    m.faces[0].reverse();
    m
}

pub fn cube_from_mesh(mesh: &QuadMesh, variant: CubeVariant, r: u32) -> Result<GrDomain> {
    cube_with(mesh, variant, None, r)
}

/// The cube with 𝔟 = +1 instead of −1 on one edge.
pub fn cube_flipped_b(edge: usize, r: u32) -> Result<GrDomain> {
    cube_with(&cube_mesh(), CubeVariant::Standard, Some(edge), r)
}

fn cube_with(mesh: &QuadMesh, variant: CubeVariant, flip: Option<usize>, r: u32) -> Result<GrDomain> {
    let (a, conv) = match variant {
        CubeVariant::Standard => ("2*u - 1", FrameConvention::Inward),
        CubeVariant::Reflected => ("-2*u + 1", FrameConvention::Outward),
        CubeVariant::ReflectedInward => ("-2*u + 1", FrameConvention::Inward),
    };
    let g = GluingData::parse(a, "-1")?;
    let flipped = GluingData::parse(a, "1")?;
    mesh.build_domain("cube", r, conv, None, |ctx| Ok(if Some(ctx.edge) == flip { flipped.clone() } else { g.clone() }))
}

/// Circle from three arcs; σ_i meets σ_{i+1} at p_i via u_i ↦ u_{i+1} + 1.
pub fn circle_domain(r: u32) -> Result<GrDomain> {
    let mut c = CellComplex::new(1);
    for i in 0..3 {
        c.add_face(0, i, vec![]);
    }
    for i in 0..3 {
        c.add_face(1, i, vec![(i, 1), ((i + 2) % 3, -1)]);
    }
    let space = GrDomain::space_for(&c);
    let x = |f: usize| Polynomial::var(&space, space.block_range(f).unwrap().start);
    let one = Polynomial::one(&space);
    let mut ideals = BTreeMap::new();
    let mut transitions = BTreeMap::new();
    for p in 0..3 {
        let (s, t) = (p, (p + 1) % 3);
        ideals.insert(p, FaceIdeal { facet: p, generators: BTreeMap::from([(s, &x(s) - &one), (t, x(t))]) });
        transitions.insert(p, TransitionMap { source: s, target: t, facet: p, r, lift: vec![&x(t) + &one] });
    }
    GrDomain::new("circle", c, r, ideals, transitions)
}

/// Two discs (north, south) glued along the unit circle by inversion
/// x ↦ x/|x|², expanded to order r in w = 1 − u² − v².
pub fn sphere_domain(r: u32) -> Result<GrDomain> {
    let mut c = CellComplex::new(2);
    c.add_face(1, 0, vec![]);
    c.add_face(2, 0, vec![(0, 1)]);
    c.add_face(2, 1, vec![(0, -1)]);
    let space = GrDomain::space_for(&c);
    let v = |i: usize| Polynomial::var(&space, i);
    let one = Polynomial::one(&space);
    let w = |f: usize| {
        let b = space.block_range(f).unwrap().start;
        &(&one - &v(b).pow(2)) - &v(b + 1).pow(2)
    };
    let wn = w(0);
    let mut series = Polynomial::zero(&space);
    for k in 0..=r {
        series = &series + &wn.pow(k);
    }
    let gb = buchberger(&[wn.pow(r + 1)], &MonomialOrder::grevlex(space.nvars()))?;
    let lift = vec![gb.normal_form(&(&v(0) * &series)), gb.normal_form(&(&v(1) * &series))];
    let ideals = BTreeMap::from([(0, FaceIdeal { facet: 0, generators: BTreeMap::from([(0, wn.clone()), (1, w(1))]) })]);
    let transitions = BTreeMap::from([(0, TransitionMap { source: 1, target: 0, facet: 0, r, lift })]);
    GrDomain::new("sphere", c, r, ideals, transitions)
}

/// Two n-simplices sharing a facet on the hyperplane x₁ = 0, glued by the
/// identity (plain C^r continuity).
pub fn two_simplices(n: usize, r: u32) -> Result<GrDomain> {
    let a: Vec<usize> = (0..=n).collect();
    let b: Vec<usize> = (1..=n + 1).collect();
    let c = CellComplex::simplicial(n, &[a, b])?;
    let space = GrDomain::space_for(&c);
    let tops = c.top_faces().to_vec();
    let shared = c
        .interior_faces(n - 1)
        .first()
        .copied()
        .ok_or_else(|| Error::Complex("simplices share no facet".into()))?;
    let xs = |f: usize| -> Vec<Polynomial> { space.block_range(f).unwrap().map(|i| Polynomial::var(&space, i)).collect() };
    let (s, t) = (tops[0], tops[1]);
    let ideals = BTreeMap::from([(
        shared,
        FaceIdeal { facet: shared, generators: BTreeMap::from([(s, xs(s)[0].clone()), (t, xs(t)[0].clone())]) },
    )]);
    let transitions = BTreeMap::from([(shared, TransitionMap { source: s, target: t, facet: shared, r, lift: xs(t) })]);
    GrDomain::new(format!("two_simplices_{n}"), c, r, ideals, transitions)
}

/// Names accepted after `builtin:`.
pub const BUILTIN_NAMES: &[&str] =
    &["cube", "cube_reflected", "two_patch_34", "star3", "star4", "star4_w3", "star5", "star6", "circle", "sphere", "two_simplices_2"];

pub fn builtin(name: &str, r: u32) -> Result<GrDomain> {
    let d = match name {
        "cube" => cube(CubeVariant::Standard, r)?,
        "cube_reflected" => cube(CubeVariant::Reflected, r)?,
        "two_patch_34" => two_patch(&symmetric_gluing(3, 4)?, r)?,
        "star3" => vertex_star(3, 4, None, r)?,
        "star4" => vertex_star(4, 4, None, r)?,
        "star4_w3" => vertex_star(4, 3, None, r)?,
        "star5" => vertex_star(5, 4, Some(&star5_surrogate()), r)?,
        "star6" => vertex_star(6, 4, None, r)?,
        "circle" => circle_domain(r)?,
        "sphere" => sphere_domain(r)?,
        "two_simplices_2" => two_simplices(2, r)?,
        _ => {
            return Err(Error::Format(format!("unknown builtin domain `{name}` (known: {})", BUILTIN_NAMES.join(", "))))
        }
    };
    Ok(d)
}
