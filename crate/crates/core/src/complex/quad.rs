//! Quadrilateral meshes: each face is the unit square with corners
//! c0..c3 at (0,0), (1,0), (1,1), (0,1), edge i running c_i → c_{i+1}.

use super::domain::{FaceIdeal, GrDomain, TransitionMap};
use super::gluing::{transition_from_gluing, Frame, GluingData};
use super::CellComplex;
use crate::error::{Error, Result};
use crate::poly::{int, Polynomial, Rational};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadMesh {
    pub num_vertices: usize,
    /// Corner vertex ids in counter-clockwise order.
    pub faces: Vec<[usize; 4]>,
}

/// Which side of the relative frames each face occupies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FrameConvention {
    /// Source face in u ≥ 0, target face in v ≥ 0.
    #[default]
    Inward,
    /// Reflected frames: source face in u ≤ 0, target face in v ≤ 0.
    Outward,
}

/// What a gluing callback gets to see about an interior edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeContext {
    pub edge: usize,
    pub source: usize,
    pub target: usize,
    /// Shared vertex placed at the relative origin.
    pub root: usize,
    pub other: usize,
    pub valence_root: usize,
    pub valence_other: usize,
    pub root_interior: bool,
    pub other_interior: bool,
}

const CORNERS: [(i64, i64); 4] = [(0, 0), (1, 0), (1, 1), (0, 1)];

fn corner(k: usize) -> Vec<Rational> {
    let (x, y) = CORNERS[k % 4];
    vec![int(x), int(y)]
}

fn pt(x: i64, y: i64) -> Vec<Rational> {
    vec![int(x), int(y)]
}

impl QuadMesh {
    pub fn new(num_vertices: usize, faces: Vec<[usize; 4]>) -> Self {
        Self { num_vertices, faces }
    }

    /// Unordered edges (low, high) in order of first appearance.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for f in &self.faces {
            for i in 0..4 {
                let (a, b) = (f[i], f[(i + 1) % 4]);
                let e = (a.min(b), a.max(b));
                if !out.contains(&e) {
                    out.push(e);
                }
            }
        }
        out
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edges().iter().position(|&e| e == (a.min(b), a.max(b)))
    }

    pub fn valence(&self, v: usize) -> usize {
        self.faces.iter().filter(|f| f.contains(&v)).count()
    }

    /// Faces using an edge, with the index of the edge within each face.
    pub fn edge_faces(&self, a: usize, b: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for i in 0..4 {
                let (x, y) = (f[i], f[(i + 1) % 4]);
                if (x, y) == (a, b) || (x, y) == (b, a) {
                    out.push((fi, i));
                }
            }
        }
        out
    }

    pub fn is_interior_vertex(&self, v: usize) -> bool {
        self.edges().iter().filter(|e| e.0 == v || e.1 == v).all(|e| self.edge_faces(e.0, e.1).len() == 2)
    }

    pub fn complex(&self) -> CellComplex {
        let mut c = CellComplex::new(2);
        let edges = self.edges();
        for v in 0..self.num_vertices {
            c.add_face(0, v, vec![]);
        }
        for (id, &(a, b)) in edges.iter().enumerate() {
            c.add_face(1, id, vec![(a, -1), (b, 1)]);
        }
        for (fi, f) in self.faces.iter().enumerate() {
            let bnd = (0..4)
                .map(|i| {
                    let (a, b) = (f[i], f[(i + 1) % 4]);
                    let id = edges.iter().position(|&e| e == (a.min(b), a.max(b))).unwrap();
                    (id, if a < b { 1 } else { -1 })
                })
                .collect();
            c.add_face(2, fi, bnd);
        }
        c
    }

    /// Affine form vanishing on edge i of the unit square, positive inside.
    fn edge_form(vars: &[Polynomial], i: usize) -> Polynomial {
        let one = Polynomial::one(vars[0].space());
        match i % 4 {
            0 => vars[1].clone(),
            1 => &one - &vars[0],
            2 => &one - &vars[1],
            _ => vars[0].clone(),
        }
    }

    /// G^r-domain whose interior edges carry the transition maps of the
    /// gluing data returned by `gluing`. `source_of(edge, f, g)` may pick
    /// the source face; by default it is the lower id.
    pub fn build_domain(
        &self,
        name: &str,
        r: u32,
        convention: FrameConvention,
        source_of: Option<&dyn Fn(usize, usize, usize) -> usize>,
        mut gluing: impl FnMut(&EdgeContext) -> Result<GluingData>,
    ) -> Result<GrDomain> {
        let complex = self.complex();
        super::validate_complex(&complex)?;
        let space = GrDomain::space_for(&complex);
        let vars = |f: usize| -> Vec<Polynomial> {
            space.block_range(f).unwrap().map(|i| Polynomial::var(&space, i)).collect()
        };
        let mut ideals: BTreeMap<usize, FaceIdeal> = BTreeMap::new();
        let mut transitions = BTreeMap::new();
        for (eid, &(a, b)) in self.edges().iter().enumerate() {
            let users = self.edge_faces(a, b);
            let mut gens = BTreeMap::new();
            if users.len() != 2 {
                for &(f, i) in &users {
                    gens.insert(f, Self::edge_form(&vars(f), i));
                }
                ideals.insert(eid, FaceIdeal { facet: eid, generators: gens });
                continue;
            }
            let default = users[0].0.min(users[1].0);
            let src = source_of.map_or(default, |f| f(eid, users[0].0, users[1].0));
            let (s, i) = *users.iter().find(|u| u.0 == src).ok_or_else(|| Error::Complex(format!("edge {eid}: bad source face")))?;
            let (t, j) = *users.iter().find(|u| u.0 != src).unwrap();
            let root = self.faces[s][(i + 1) % 4];
            if self.faces[t][j] != root {
                return Err(Error::Complex(format!("edge {eid}: faces {s} and {t} traverse it in the same direction")));
            }
            let other = self.faces[s][i];
            let ctx = EdgeContext {
                edge: eid,
                source: s,
                target: t,
                root,
                other,
                valence_root: self.valence(root),
                valence_other: self.valence(other),
                root_interior: self.is_interior_vertex(root),
                other_interior: self.is_interior_vertex(other),
            };
            let g = gluing(&ctx)?;
            let (sx, sy) = match convention {
                FrameConvention::Inward => (pt(1, 0), pt(0, 1)),
                FrameConvention::Outward => (pt(-1, 0), pt(0, 1)),
            };
            let (tx, ty) = match convention {
                FrameConvention::Inward => (pt(1, 0), pt(0, 1)),
                FrameConvention::Outward => (pt(1, 0), pt(0, -1)),
            };
            let src_frame =
                Frame::from_points(&[corner(i + 1), corner(i + 2), corner(i)], &[pt(0, 0), sx, sy])?;
            let dst_frame =
                Frame::from_points(&[corner(j), corner(j + 1), corner(j + 3)], &[pt(0, 0), tx, ty])?;
            let rel = transition_from_gluing(&g, r)?;
            let (lift, ls, lt) = rel.globalize(&vars(s), &vars(t), &src_frame, &dst_frame)?;
            gens.insert(s, ls);
            gens.insert(t, lt);
            ideals.insert(eid, FaceIdeal { facet: eid, generators: gens });
            transitions.insert(eid, TransitionMap { source: s, target: t, facet: eid, r, lift });
        }
        GrDomain::new(name, complex, r, ideals, transitions)
    }
}
