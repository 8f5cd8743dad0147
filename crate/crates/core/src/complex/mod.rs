//! Cell complexes, transition maps and G^r-domains.

mod domain;
pub mod fixtures;
mod gluing;
mod quad;

pub use domain::{CompatibilityReport, FaceIdeal, GrDomain, TransitionMap};
pub use gluing::{
    bilinear_gluing, generic_transition, gluing_space, symmetric_gluing, symmetric_gluing_with, transition_from_gluing, two_cos,
    Frame, GluingData, RelativeTransition,
};
pub use quad::{EdgeContext, FrameConvention, QuadMesh};

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// Pure n-dimensional cell complex with signed incidences. Face ids are
/// per-dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    pub n: usize,
    /// `faces[k]`: sorted ids of the k-faces.
    pub faces: Vec<Vec<usize>>,
    /// `boundary[k][id]`: signed (k−1)-faces of a k-face; `boundary[0]` is empty.
    pub boundary: Vec<BTreeMap<usize, Vec<(usize, i64)>>>,
}

#[derive(Clone, Debug, Default)]
pub struct ComplexDiagnostics {
    /// Interior faces per dimension (all n-faces count as interior).
    pub interior: Vec<Vec<usize>>,
    pub boundary: Vec<Vec<usize>>,
    pub warnings: Vec<String>,
}

impl CellComplex {
    pub fn new(n: usize) -> Self {
        Self { n, faces: vec![Vec::new(); n + 1], boundary: vec![BTreeMap::new(); n + 1] }
    }

    pub fn add_face(&mut self, k: usize, id: usize, boundary: Vec<(usize, i64)>) {
        let pos = self.faces[k].binary_search(&id).unwrap_or_else(|p| p);
        if self.faces[k].get(pos) != Some(&id) {
            self.faces[k].insert(pos, id);
        }
        if k > 0 {
            self.boundary[k].insert(id, boundary);
        }
    }

    pub fn num_faces(&self, k: usize) -> usize {
        self.faces[k].len()
    }

    pub fn top_faces(&self) -> &[usize] {
        &self.faces[self.n]
    }

    pub fn face_boundary(&self, k: usize, id: usize) -> &[(usize, i64)] {
        self.boundary[k].get(&id).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Signed (k+1)-cofaces of a k-face.
    pub fn cofaces(&self, k: usize, id: usize) -> Vec<(usize, i64)> {
        if k >= self.n {
            return vec![];
        }
        self.boundary[k + 1]
            .iter()
            .filter_map(|(&c, b)| b.iter().find(|(f, _)| *f == id).map(|(_, s)| (c, *s)))
            .collect()
    }

    pub fn incidence(&self, k: usize, alpha: usize, beta: usize) -> i64 {
        self.face_boundary(k, alpha).iter().filter(|(f, _)| *f == beta).map(|(_, s)| *s).sum()
    }

    /// All j-faces (j > k) containing the k-face `id`.
    pub fn containing(&self, k: usize, id: usize, j: usize) -> BTreeSet<usize> {
        let mut cur: BTreeSet<usize> = [id].into();
        for dim in k..j {
            cur = cur.iter().flat_map(|&f| self.cofaces(dim, f).into_iter().map(|(c, _)| c)).collect();
        }
        cur
    }

    /// All k-faces contained in the j-face `id` (k < j).
    pub fn contained(&self, j: usize, id: usize, k: usize) -> BTreeSet<usize> {
        let mut cur: BTreeSet<usize> = [id].into();
        for dim in (k + 1..=j).rev() {
            cur = cur.iter().flat_map(|&f| self.face_boundary(dim, f).iter().map(|(b, _)| *b)).collect();
        }
        cur
    }

    pub fn is_interior_facet(&self, id: usize) -> bool {
        self.n > 0 && self.cofaces(self.n - 1, id).len() == 2
    }

    pub fn interior_faces(&self, k: usize) -> Vec<usize> {
        if k == self.n {
            return self.faces[k].clone();
        }
        let bnd: BTreeSet<usize> = self.faces[self.n - 1].iter().copied().filter(|&t| !self.is_interior_facet(t)).collect();
        self.faces[k]
            .iter()
            .copied()
            .filter(|&f| {
                if k == self.n - 1 {
                    !bnd.contains(&f)
                } else {
                    self.containing(k, f, self.n - 1).is_disjoint(&bnd)
                }
            })
            .collect()
    }

    /// Simplicial complex generated by the given top simplices (vertex lists),
    /// oriented coherently when possible.
    pub fn simplicial(n: usize, tops: &[Vec<usize>]) -> Result<Self> {
        let mut tops: Vec<Vec<usize>> = tops.to_vec();
        for t in &tops {
            if t.len() != n + 1 {
                return Err(Error::Complex(format!("simplex {t:?} is not {n}-dimensional")));
            }
        }
        // coherent orientation: adjacent simplices induce opposite signs on shared facets
        for i in 1..tops.len() {
            for j in 0..i {
                if let Some((si, sj)) = shared_facet_signs(&tops[i], &tops[j]) {
                    if si == sj {
                        tops[i].swap(0, 1);
                    }
                    break;
                }
            }
        }
        let mut ids: Vec<BTreeMap<Vec<usize>, usize>> = vec![BTreeMap::new(); n + 1];
        for t in &tops {
            let mut s = t.clone();
            s.sort();
            for k in 0..=n {
                for sub in subsets(&s, k + 1) {
                    let len = ids[k].len();
                    ids[k].entry(sub).or_insert(len);
                }
            }
        }
        let mut c = CellComplex::new(n);
        for k in 0..=n {
            for (s, &id) in &ids[k] {
                let b = if k == 0 {
                    vec![]
                } else {
                    (0..=k)
                        .map(|i| {
                            let mut f = s.clone();
                            f.remove(i);
                            (ids[k - 1][&f], if i % 2 == 0 { 1 } else { -1 })
                        })
                        .collect()
                };
                c.add_face(k, id, b);
            }
        }
        // re-sign top faces by permutation parity of the given vertex order
        for t in &tops {
            let mut s = t.clone();
            s.sort();
            let id = ids[n][&s];
            if parity(t) {
                let b = c.boundary[n].get_mut(&id).unwrap();
                for e in b.iter_mut() {
                    e.1 = -e.1;
                }
            }
        }
        Ok(c)
    }

    pub fn validate(&self) -> Result<ComplexDiagnostics> {
        validate_complex(self)
    }
}

fn subsets(s: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if s.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for mut rest in subsets(&s[1..], k - 1) {
        rest.insert(0, s[0]);
        out.push(rest);
    }
    out.extend(subsets(&s[1..], k));
    out
}

/// True for an odd permutation relative to sorted order.
fn parity(t: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if t[i] > t[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

fn oriented_facet_sign(t: &[usize], facet: &[usize]) -> i64 {
    // position of the omitted vertex in the given order, times parity of t
    let i = t.iter().position(|v| !facet.contains(v)).unwrap();
    let mut rest: Vec<usize> = t.to_vec();
    rest.remove(i);
    let s = if i % 2 == 0 { 1 } else { -1 };
    let p = if parity(&rest) { -1 } else { 1 };
    s * p
}

fn shared_facet_signs(a: &[usize], b: &[usize]) -> Option<(i64, i64)> {
    let shared: Vec<usize> = a.iter().copied().filter(|v| b.contains(v)).collect();
    if shared.len() + 1 != a.len() {
        return None;
    }
    Some((oriented_facet_sign(a, &shared), oriented_facet_sign(b, &shared)))
}

/// Purity, facet cofaces, ∂∘∂ = 0, coherent orientation across interior
/// facets and (n = 2) connected vertex links.
pub fn validate_complex(c: &CellComplex) -> Result<ComplexDiagnostics> {
    let n = c.n;
    if c.faces.len() != n + 1 || c.boundary.len() != n + 1 {
        return Err(Error::Complex("face lists do not match the dimension".into()));
    }
    if c.faces[n].is_empty() {
        return Err(Error::Complex("no maximal faces".into()));
    }
    for k in 1..=n {
        for &f in &c.faces[k] {
            for &(b, s) in c.face_boundary(k, f) {
                if c.faces[k - 1].binary_search(&b).is_err() {
                    return Err(Error::Complex(format!("{k}-face {f} refers to unknown {}-face {b}", k - 1)));
                }
                if s == 0 {
                    return Err(Error::Complex(format!("{k}-face {f} has zero incidence with {b}")));
                }
            }
        }
    }
    for k in 0..n {
        for &f in &c.faces[k] {
            if c.containing(k, f, n).is_empty() {
                return Err(Error::Complex(format!("{k}-face {f} lies in no {n}-face (complex not pure)")));
            }
        }
    }
    for &t in &c.faces[n - 1] {
        let cof = c.cofaces(n - 1, t);
        if cof.len() > 2 {
            let ids: Vec<usize> = cof.iter().map(|x| x.0).collect();
            return Err(Error::Complex(format!("{}-face {t} bounds {} maximal faces {ids:?}", n - 1, cof.len())));
        }
        if cof.len() == 2 && cof[0].1 == cof[1].1 {
            return Err(Error::Complex(format!(
                "{}-face {t}: maximal faces {} and {} induce the same orientation",
                n - 1,
                cof[0].0,
                cof[1].0
            )));
        }
    }
    for k in 2..=n {
        for &f in &c.faces[k] {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(b, s) in c.face_boundary(k, f) {
                for &(bb, ss) in c.face_boundary(k - 1, b) {
                    *acc.entry(bb).or_default() += s * ss;
                }
            }
            if let Some((bad, _)) = acc.iter().find(|(_, v)| **v != 0) {
                return Err(Error::Complex(format!("∂∂ ≠ 0 on {k}-face {f} at {}-face {bad}", k - 2)));
            }
        }
    }
    let mut diag = ComplexDiagnostics::default();
    for k in 0..=n {
        let int = c.interior_faces(k);
        let bnd = c.faces[k].iter().copied().filter(|f| !int.contains(f)).collect();
        diag.interior.push(int);
        diag.boundary.push(bnd);
    }
    if n == 2 {
        for &v in &c.faces[0] {
            let faces = c.containing(0, v, 2);
            let edges: Vec<usize> = c.cofaces(0, v).into_iter().map(|x| x.0).collect();
            // link graph: faces joined by edges through v
            let mut parent: BTreeMap<usize, usize> = faces.iter().map(|&f| (f, f)).collect();
            fn find(p: &mut BTreeMap<usize, usize>, x: usize) -> usize {
                let q = p[&x];
                if q == x {
                    x
                } else {
                    let r = find(p, q);
                    p.insert(x, r);
                    r
                }
            }
            for e in edges {
                let cf: Vec<usize> = c.cofaces(1, e).into_iter().map(|x| x.0).collect();
                if cf.len() == 2 {
                    let (a, b) = (find(&mut parent, cf[0]), find(&mut parent, cf[1]));
                    parent.insert(a, b);
                }
            }
            let roots: BTreeSet<usize> = faces.iter().map(|&f| find(&mut parent, f)).collect();
            if roots.len() > 1 {
                return Err(Error::Complex(format!("link of vertex {v} is disconnected")));
            }
        }
    }
    Ok(diag)
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::groebner::buchberger;
    use crate::poly::{int, rat, MonomialOrder, Polynomial, Rational};

    fn boundary_matrix_product_is_zero(c: &CellComplex) -> bool {
        (2..=c.n).all(|k| {
            c.faces[k].iter().all(|&f| {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for &(b, s) in c.face_boundary(k, f) {
                    for &(bb, ss) in c.face_boundary(k - 1, b) {
                        *acc.entry(bb).or_default() += s * ss;
                    }
                }
                acc.values().all(|v| *v == 0)
            })
        })
    }

    #[test]
    fn cube_complex_is_closed() {
        let d = cube(CubeVariant::Standard, 1).unwrap();
        let c = &d.complex;
        assert_eq!((c.num_faces(2), c.num_faces(1), c.num_faces(0)), (6, 12, 8));
        let diag = c.validate().unwrap();
        assert_eq!(diag.interior.iter().map(|v| v.len()).collect::<Vec<_>>(), vec![8, 12, 6]);
        assert!(diag.boundary.iter().all(|b| b.is_empty()));
        assert!(boundary_matrix_product_is_zero(c));
    }

    #[test]
    fn two_squares() {
        let d = two_patch(&symmetric_gluing(3, 4).unwrap(), 1).unwrap();
        let diag = d.complex.validate().unwrap();
        assert_eq!(diag.interior[1].len(), 1);
        assert!(diag.interior[0].is_empty());
        for name in BUILTIN_NAMES {
            assert!(boundary_matrix_product_is_zero(&builtin(name, 1).unwrap().complex), "{name}");
        }
    }

    #[test]
    fn non_manifold_edge_rejected() {
        let mut c = CellComplex::new(2);
        for v in 0..5 {
            c.add_face(0, v, vec![]);
        }
        // edge 0 = (0,1) shared by three triangles
        let edges = [(0, 1), (1, 2), (2, 0), (1, 3), (3, 0), (1, 4), (4, 0)];
        for (i, &(a, b)) in edges.iter().enumerate() {
            c.add_face(1, i, vec![(a, -1), (b, 1)]);
        }
        c.add_face(2, 0, vec![(0, 1), (1, 1), (2, 1)]);
        c.add_face(2, 1, vec![(0, -1), (3, 1), (4, 1)]);
        c.add_face(2, 2, vec![(0, -1), (5, 1), (6, 1)]);
        let e = validate_complex(&c).unwrap_err().to_string();
        assert!(e.contains("bounds 3 maximal faces"), "{e}");
    }

    #[test]
    fn symmetric_examples() {
        let u = |s: &str| Polynomial::parse(s, &gluing_space()).unwrap();
        let g = symmetric_gluing(3, 4).unwrap();
        assert_eq!((g.a.clone(), g.b.clone()), (u("-u^2 + 2*u - 1"), u("-1")));
        assert_eq!(g.deg_a(), 2);
        assert_eq!(symmetric_gluing(4, 4).unwrap().a, u("0"));
        assert_eq!(symmetric_gluing(3, 3).unwrap().a, u("2*u - 1"));
        assert!(matches!(symmetric_gluing(5, 4), Err(Error::Gluing(_))));
        // interpolation constraints: 𝔞(0) = 2cos(2π/w), 𝔞(1) = −2cos(2π/w′)
        let g = symmetric_gluing(6, 3).unwrap();
        assert_eq!(g.a.eval(&[int(0)]), int(1));
        assert_eq!(g.a.eval(&[int(1)]), int(1));
    }

    fn pt(x: i64, y: i64) -> [Rational; 2] {
        [int(x), int(y)]
    }

    #[test]
    fn bilinear_examples() {
        // ψ₁⁻¹(u,v) = (4u, 4v); ψ₂⁻¹(u,v) = (uv/2 − 5v, uv/8 + 4u + v)
        let c1 = [pt(0, 0), pt(4, 0), pt(0, 4), pt(4, 4)];
        let c2 = [pt(0, 0), pt(0, 4), pt(-5, 1), [rat(-9, 2), rat(41, 8)]];
        let g = bilinear_gluing(c1, c2).unwrap();
        let u = |s: &str| Polynomial::parse(s, &gluing_space()).unwrap();
        assert_eq!(g.a, u("1/32*u + 1/4"));
        assert_eq!(g.b, u("1/8*u - 5/4"));
        // unit squares on either side of x = 0
        let unit = [pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1)];
        let left = [pt(0, 0), pt(0, 1), pt(-1, 0), pt(-1, 1)];
        let g = bilinear_gluing(unit.clone(), left.clone()).unwrap();
        assert_eq!((g.a, g.b), (u("0"), u("-1")));
        // second chart the mirror image: overlapping squares, 𝔟 = 1
        let mirror = [pt(0, 0), pt(0, 1), pt(1, 0), pt(1, 1)];
        let g = bilinear_gluing(unit.clone(), mirror).unwrap();
        assert_eq!((g.a, g.b), (u("0"), u("1")));
        let skew = [pt(0, 0), pt(1, 0), pt(0, 1), pt(2, 1)];
        let e = bilinear_gluing(skew, left).unwrap_err().to_string();
        assert!(e.contains("a11"), "{e}");
    }

    #[test]
    fn transition_examples() {
        let t = transition_from_gluing(&symmetric_gluing(3, 4).unwrap(), 1).unwrap();
        let p = |s: &str| Polynomial::parse(s, &t.space).unwrap();
        assert_eq!(t.images, vec![p("-u2_2"), p("u2_1 + u2_2*(-u2_1^2 + 2*u2_1 - 1)")]);
        let id = transition_from_gluing(&GluingData::parse("0", "1").unwrap(), 3).unwrap();
        assert_eq!(id.images, vec![p("u2_2"), p("u2_1")]);
        // generic n-face template with r = 1: p₁ = 𝔟, q₁₁ = 𝔞
        let g = symmetric_gluing(3, 4).unwrap();
        let at = |q: &Polynomial| q.substitute(&BTreeMap::from([(0, p("u2_1"))]), &t.space).unwrap();
        let gen = generic_transition(2, 1, &[at(&g.b)], &[vec![at(&g.a)]]).unwrap();
        assert_eq!(gen.images, t.images);
    }

    #[test]
    fn inverse_symmetric_gluing_is_identity() {
        for (w, w2) in [(3, 4), (3, 3), (6, 4), (4, 6)] {
            let g12 = symmetric_gluing(w, w2).unwrap();
            let g21 = symmetric_gluing(w2, w).unwrap();
            let t = transition_from_gluing(&g12, 1).unwrap();
            let s = t.space.clone();
            let x = |i| Polynomial::var(&s, i);
            let one = Polynomial::one(&s);
            let at = |q: &Polynomial, v: &Polynomial| q.substitute(&BTreeMap::from([(0, v.clone())]), &s).unwrap();
            // primed frames u₁′ = 1 − v₁, v₁′ = u₁, u₂′ = v₂, v₂′ = 1 − u₂
            let (u1p, v1p) = (&one - &x(1), x(0));
            let img_u2p = &v1p * &at(&g21.b, &u1p);
            let img_v2p = &u1p + &(&v1p * &at(&g21.a, &u1p));
            let phi21 = BTreeMap::from([(2, &one - &img_v2p), (3, img_u2p), (0, x(0)), (1, x(1))]);
            let gb = buchberger(&[x(0).pow(2)], &MonomialOrder::grevlex(4)).unwrap();
            for (i, img) in t.images.iter().enumerate() {
                let back = img.substitute(&phi21, &s).unwrap();
                assert!(gb.contains(&(&back - &x(i))), "({w},{w2}) coordinate {i}");
            }
        }
    }

    #[test]
    fn fixtures_are_compatible() {
        for name in BUILTIN_NAMES {
            let d = builtin(name, 1).unwrap();
            let rep = d.check_compatibility();
            assert!(rep.is_ok(), "{name}: {:?}", rep.violations);
        }
        let c = circle_domain(1).unwrap();
        assert_eq!((c.complex.num_faces(1), c.complex.interior_faces(0).len()), (3, 3));
        let s = sphere_domain(1).unwrap();
        assert_eq!(s.complex.num_faces(2), 2);
        assert_eq!(s.generator(0, 0).unwrap().total_degree(), Some(2));
    }

    #[test]
    fn sphere_lifts() {
        let s0 = sphere_domain(0).unwrap();
        let w = s0.generator(0, 0).unwrap().clone();
        let gb = buchberger(&[w], &MonomialOrder::grevlex(4)).unwrap();
        for (img, x) in s0.transitions[&0].lift.iter().zip(s0.face_vars(0)) {
            assert!(gb.contains(&(img - &x)));
        }
        let s1 = sphere_domain(1).unwrap();
        let gens = s1.edge_ideal_generators(0);
        let gb = buchberger(&gens, &MonomialOrder::grevlex(4)).unwrap();
        let p = |t: &str| Polynomial::parse(t, &s1.space).unwrap();
        for f in ["(1 - u0_1^2 - u0_2^2)^2", "(1 - u1_1^2 - u1_2^2)^2", "u1_1 - u0_1*(2 - u0_1^2 - u0_2^2)"] {
            assert!(gb.contains(&p(f)), "{f}");
        }
    }

    #[test]
    fn incompatible_cubes() {
        let rep = cube_flipped_b(0, 1).unwrap().check_compatibility();
        assert!(!rep.is_ok());
        assert!(rep.violations.iter().all(|v| v.contains("C3")), "{:?}", rep.violations);
        assert_eq!(rep.violations.len(), 2, "{:?}", rep.violations);
        assert!(!cube(CubeVariant::ReflectedInward, 1).unwrap().check_compatibility().is_ok());
        assert!(cube(CubeVariant::Reflected, 1).unwrap().check_compatibility().is_ok());
        let e = cube_from_mesh(&flipped_cube_mesh(), CubeVariant::Standard, 1).unwrap_err();
        assert!(matches!(e, Error::Complex(_)), "{e}");
        // a uniform s = 5 surrogate does not close the vertex cycle
        let uniform = vec![rat(1, 2); 5];
        assert!(!vertex_star(5, 4, Some(&uniform), 1).unwrap().check_compatibility().is_ok());
    }

    #[test]
    fn reflected_cube_has_the_same_lifts() {
        let a = cube(CubeVariant::Standard, 1).unwrap();
        let b = cube(CubeVariant::Reflected, 1).unwrap();
        assert_eq!(a.transitions, b.transitions);
    }
}
