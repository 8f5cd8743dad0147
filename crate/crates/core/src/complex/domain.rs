use super::{validate_complex, CellComplex};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, GroebnerBasis};
use crate::linalg::RationalMatrix;
use crate::poly::{Monomial, MonomialOrder, Polynomial, Rational, VariableSpace};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Generators of I_σ(τ) for an (n−1)-face τ and each adjacent n-face σ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceIdeal {
    pub facet: usize,
    pub generators: BTreeMap<usize, Polynomial>,
}

/// Lift of φ: R(source) → R(target): `lift[i]` is the image of the i-th
/// source coordinate, a polynomial in the target's coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMap {
    pub source: usize,
    pub target: usize,
    pub facet: usize,
    pub r: u32,
    pub lift: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrDomain {
    pub name: String,
    pub complex: CellComplex,
    pub space: Arc<VariableSpace>,
    pub r: u32,
    /// Keyed by (n−1)-face; interior facets are required, boundary ones optional.
    pub ideals: BTreeMap<usize, FaceIdeal>,
    /// One stored direction per interior (n−1)-face.
    pub transitions: BTreeMap<usize, TransitionMap>,
    /// Optional opposite directions, checked against `transitions`.
    pub reverse: BTreeMap<usize, TransitionMap>,
}

#[derive(Clone, Debug, Default)]
pub struct CompatibilityReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
    /// Interior vertices whose C3 cycle was evaluated (pass or fail).
    pub vertices_checked: usize,
}

impl CompatibilityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl GrDomain {
    pub fn new(
        name: impl Into<String>,
        complex: CellComplex,
        r: u32,
        ideals: BTreeMap<usize, FaceIdeal>,
        transitions: BTreeMap<usize, TransitionMap>,
    ) -> Result<Self> {
        let space = VariableSpace::for_faces(complex.top_faces(), complex.n);
        let d = Self { name: name.into(), complex, space, r, ideals, transitions, reverse: BTreeMap::new() };
        d.check_structure()?;
        Ok(d)
    }

    /// The canonical global space for a complex (one block per maximal face).
    pub fn space_for(complex: &CellComplex) -> Arc<VariableSpace> {
        VariableSpace::for_faces(complex.top_faces(), complex.n)
    }

    pub fn n(&self) -> usize {
        self.complex.n
    }

    pub fn face_vars(&self, face: usize) -> Vec<Polynomial> {
        self.space.block_range(face).expect("face has a block").map(|i| Polynomial::var(&self.space, i)).collect()
    }

    pub fn block(&self, face: usize) -> std::ops::Range<usize> {
        self.space.block_range(face).expect("face has a block")
    }

    pub fn interior_facets(&self) -> Vec<usize> {
        self.complex.interior_faces(self.n() - 1)
    }

    pub fn generator(&self, facet: usize, face: usize) -> Option<&Polynomial> {
        self.ideals.get(&facet)?.generators.get(&face)
    }

    fn in_block(&self, p: &Polynomial, face: usize) -> bool {
        let r = self.block(face);
        p.variables().iter().all(|i| r.contains(i))
    }

    /// Structural checks: complex validity, one transition and both ideal
    /// generators per interior facet, polynomials in the right blocks.
    pub fn check_structure(&self) -> Result<()> {
        validate_complex(&self.complex)?;
        let n = self.n();
        for &t in &self.interior_facets() {
            let cof: Vec<usize> = self.complex.cofaces(n - 1, t).into_iter().map(|x| x.0).collect();
            let tm = self
                .transitions
                .get(&t)
                .ok_or_else(|| Error::Compatibility(format!("interior {}-face {t} has no transition map", n - 1)))?;
            let ok_pair = (tm.source == cof[0] && tm.target == cof[1]) || (tm.source == cof[1] && tm.target == cof[0]);
            if !ok_pair {
                return Err(Error::Compatibility(format!(
                    "transition on {}-face {t} maps {} → {}, but the face is shared by {} and {}",
                    n - 1,
                    tm.source,
                    tm.target,
                    cof[0],
                    cof[1]
                )));
            }
            if tm.lift.len() != n {
                return Err(Error::Compatibility(format!("transition on face {t}: lift has {} images, expected {n}", tm.lift.len())));
            }
            for img in &tm.lift {
                if !self.in_block(img, tm.target) {
                    return Err(Error::Compatibility(format!("transition on face {t}: image {img} leaves the target block")));
                }
            }
            for &s in &cof {
                let g = self
                    .generator(t, s)
                    .ok_or_else(|| Error::Compatibility(format!("no ideal generator for {}-face {t} in face {s}", n - 1)))?;
                if !self.in_block(g, s) {
                    return Err(Error::Compatibility(format!("ideal generator of face {t} in {s} uses foreign variables")));
                }
                if g.is_constant() {
                    return Err(Error::Compatibility(format!("ideal generator of face {t} in {s} is constant")));
                }
            }
        }
        for (&t, tm) in &self.transitions {
            if !self.complex.is_interior_facet(t) {
                return Err(Error::Compatibility(format!("transition given on non-interior face {t}")));
            }
            if tm.source == tm.target {
                return Err(Error::Compatibility(format!("C1: transition on face {t} maps face {} to itself", tm.source)));
            }
        }
        Ok(())
    }

    /// I^r(τ): graph relations plus both (r+1)-power facet ideals.
    pub fn edge_ideal_generators(&self, tau: usize) -> Vec<Polynomial> {
        let tm = &self.transitions[&tau];
        let mut gens: Vec<Polynomial> =
            self.face_vars(tm.source).iter().zip(&tm.lift).map(|(x, img)| x - img).collect();
        let e = self.r + 1;
        gens.push(self.generator(tau, tm.source).unwrap().pow(e));
        gens.push(self.generator(tau, tm.target).unwrap().pow(e));
        gens
    }

    /// I^r(α) = Σ_{τ ⊇ α} I^r(τ) for a lower-dimensional interior face.
    pub fn low_face_ideal_generators(&self, k: usize, alpha: usize) -> Vec<Polynomial> {
        let n = self.n();
        self.complex
            .containing(k, alpha, n - 1)
            .into_iter()
            .flat_map(|t| self.edge_ideal_generators(t))
            .collect()
    }

    /// Maximal faces containing a face (the blocks of R(α)).
    pub fn top_faces_of(&self, k: usize, alpha: usize) -> Vec<usize> {
        if k == self.n() {
            return vec![alpha];
        }
        self.complex.containing(k, alpha, self.n()).into_iter().collect()
    }

    /// Sets r, reducing every lift modulo the new (r+1)-power ideal.
    pub fn with_smoothness(&self, r: u32) -> Result<GrDomain> {
        let mut d = self.clone();
        d.r = r;
        for tm in d.transitions.values_mut().chain(d.reverse.values_mut()) {
            tm.r = r;
            let l = self.generator(tm.facet, tm.target).unwrap();
            let gb = buchberger(&[l.pow(r + 1)], &MonomialOrder::grevlex(self.space.nvars()))?;
            tm.lift = tm.lift.iter().map(|p| gb.normal_form(p)).collect();
        }
        Ok(d)
    }

    /// Substitute the lift of `tm` into a polynomial in the source block.
    pub fn apply_lift(&self, tm: &TransitionMap, f: &Polynomial) -> Result<Polynomial> {
        let map: BTreeMap<usize, Polynomial> = self.block(tm.source).zip(tm.lift.iter().cloned()).collect();
        f.substitute(&map, &self.space)
    }

    /// Rewrite face `face` in new coordinates y = M·x + t and conjugate the
    /// lifts and ideal generators accordingly.
    pub fn reparametrize(&self, face: usize, frame: &super::gluing::Frame) -> Result<GrDomain> {
        let mut d = self.clone();
        let x = self.face_vars(face);
        // old x in terms of new y: x = M⁻¹(y − t)
        let x_of_y = frame.inverse()?.apply(&x);
        let to_new: BTreeMap<usize, Polynomial> = self.block(face).zip(x_of_y).collect();
        let y_of_x = frame.apply(&x);
        let rewrite = |p: &Polynomial| -> Result<Polynomial> {
            let mut map: BTreeMap<usize, Polynomial> = (0..self.space.nvars()).map(|i| (i, Polynomial::var(&self.space, i))).collect();
            for (k, v) in &to_new {
                map.insert(*k, v.clone());
            }
            p.substitute(&map, &self.space)
        };
        for fi in d.ideals.values_mut() {
            if let Some(g) = fi.generators.get_mut(&face) {
                *g = rewrite(g)?;
            }
        }
        for tm in d.transitions.values_mut().chain(d.reverse.values_mut()) {
            if tm.target == face {
                tm.lift = tm.lift.iter().map(&rewrite).collect::<Result<_>>()?;
            }
            if tm.source == face {
                // new source coordinate y_i = (M x + t)_i ↦ (M·lift + t)_i
                let map: BTreeMap<usize, Polynomial> = self.block(face).zip(tm.lift.iter().cloned()).collect();
                tm.lift = y_of_x.iter().map(|y| y.substitute(&map, &self.space)).collect::<Result<_>>()?;
            }
        }
        Ok(d)
    }

    pub fn ensure_compatible(&self) -> Result<CompatibilityReport> {
        let rep = self.check_compatibility();
        if rep.is_ok() {
            Ok(rep)
        } else {
            Err(Error::Compatibility(rep.violations.join("; ")))
        }
    }

    /// C1–C3 plus the vanishing-locus correspondence on every interior facet.
    pub fn check_compatibility(&self) -> CompatibilityReport {
        let mut rep = CompatibilityReport::default();
        if let Err(e) = self.check_structure() {
            rep.violations.push(e.to_string());
            return rep;
        }
        let nv = self.space.nvars();
        let order = MonomialOrder::grevlex(nv);
        for (&t, tm) in &self.transitions {
            if let Err(e) = self.check_facet(t, tm, &order, &mut rep) {
                rep.violations.push(format!("face {t}: {e}"));
            }
        }
        for (&t, rv) in &self.reverse {
            let Some(tm) = self.transitions.get(&t) else {
                rep.violations.push(format!("C2: reverse map on face {t} without a forward map"));
                continue;
            };
            if rv.source != tm.target || rv.target != tm.source {
                rep.violations.push(format!("C2: two maps on face {t} with the same direction"));
                continue;
            }
            for (a, b) in [(tm, rv), (rv, tm)] {
                match self.composite_is_identity(a, b, &order) {
                    Ok(true) => {}
                    Ok(false) => rep.violations.push(format!(
                        "C2: on face {t}, the composite {} → {} → {} is not the identity modulo I^{}",
                        a.source,
                        a.target,
                        b.target,
                        self.r + 1
                    )),
                    Err(e) => rep.violations.push(format!("C2 on face {t}: {e}")),
                }
            }
        }
        if self.n() == 2 {
            for g in self.complex.interior_faces(0) {
                match self.check_vertex_cycle(g, &order) {
                    Ok(Some(msg)) => {
                        rep.vertices_checked += 1;
                        rep.violations.push(msg)
                    }
                    Ok(None) => rep.vertices_checked += 1,
                    Err(e) => rep.warnings.push(format!("vertex {g}: C3 not checked ({e})")),
                }
            }
        } else if self.n() > 2 && !self.complex.interior_faces(self.n() - 2).is_empty() {
            rep.warnings.push("C3 is only checked for 2-dimensional complexes".into());
        }
        rep
    }

    fn check_facet(&self, t: usize, tm: &TransitionMap, order: &MonomialOrder, rep: &mut CompatibilityReport) -> Result<()> {
        let ls = self.generator(t, tm.source).unwrap();
        let lt = self.generator(t, tm.target).unwrap();
        for (g, f) in [(ls, tm.source), (lt, tm.target)] {
            if let Some(w) = irreducibility_warning(g, &self.block(f)) {
                rep.warnings.push(format!("face {t} in {f}: {w}"));
            }
        }
        let img = self.apply_lift(tm, ls)?;
        let gb1 = buchberger(&[lt.clone()], order)?;
        if !gb1.contains(&img) {
            rep.violations.push(format!(
                "face {t}: lift does not map the vanishing ideal of {} into that of {}",
                tm.source, tm.target
            ));
            return Ok(());
        }
        if self.r >= 1 {
            let gb2 = buchberger(&[lt.pow(2)], order)?;
            if gb2.contains(&img) {
                rep.violations.push(format!("face {t}: lift is degenerate across the face (image of ℓ lies in ⟨ℓ²⟩)"));
            }
        }
        if self.n() == 2 {
            for &(g, _) in self.complex.face_boundary(1, t) {
                let (Some(src), Some(dst)) = (self.vertex_generators(g, tm.source), self.vertex_generators(g, tm.target)) else {
                    rep.warnings.push(format!("face {t}: endpoint {g} ideals unavailable, point condition skipped"));
                    continue;
                };
                let gb = buchberger(&dst, order)?;
                for p in &src {
                    if !gb.contains(&self.apply_lift(tm, p)?) {
                        rep.violations.push(format!(
                            "face {t}: lift does not map vertex {g} of face {} to vertex {g} of face {}",
                            tm.source, tm.target
                        ));
                        break;
                    }
                }
            }
        }
        Ok(())
    }

    /// Generators of I_σ(γ): the facet generators of σ's facets through γ.
    fn vertex_generators(&self, g: usize, sigma: usize) -> Option<Vec<Polynomial>> {
        let edges: Vec<usize> = self
            .complex
            .cofaces(0, g)
            .into_iter()
            .map(|x| x.0)
            .filter(|&e| self.complex.face_boundary(2, sigma).iter().any(|(b, _)| *b == e))
            .collect();
        if edges.is_empty() {
            return None;
        }
        edges.iter().map(|&e| self.generator(e, sigma).cloned()).collect()
    }

    fn composite_is_identity(&self, a: &TransitionMap, b: &TransitionMap, order: &MonomialOrder) -> Result<bool> {
        let l = self.generator(a.facet, a.source).unwrap();
        let gb = buchberger(&[l.pow(self.r + 1)], order)?;
        let back: BTreeMap<usize, Polynomial> = self.block(b.source).zip(b.lift.iter().cloned()).collect();
        for (x, img) in self.face_vars(a.source).iter().zip(&a.lift) {
            let c = img.substitute(&back, &self.space)?;
            if !gb.contains(&(&c - x)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Faces and edges around an interior vertex in cyclic order:
    /// `[(face, edge to next face)]`.
    pub fn vertex_cycle(&self, g: usize) -> Result<Vec<(usize, usize)>> {
        let edges: Vec<usize> = self.complex.cofaces(0, g).into_iter().map(|x| x.0).collect();
        let mut adj: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for &e in &edges {
            let cf: Vec<usize> = self.complex.cofaces(1, e).into_iter().map(|x| x.0).collect();
            if cf.len() != 2 {
                return Err(Error::Complex(format!("edge {e} at vertex {g} is not interior")));
            }
            adj.entry(cf[0]).or_default().push((e, cf[1]));
            adj.entry(cf[1]).or_default().push((e, cf[0]));
        }
        if adj.values().any(|v| v.len() != 2) {
            return Err(Error::Complex(format!("a face meets vertex {g} other than along two edges")));
        }
        let start = *adj.keys().next().ok_or_else(|| Error::Complex(format!("vertex {g} has no faces")))?;
        let mut cycle = Vec::new();
        let mut cur = start;
        let mut via = usize::MAX;
        loop {
            let opts = &adj[&cur];
            let (e, next) = if via == usize::MAX { *opts.iter().min().unwrap() } else { *opts.iter().find(|x| x.0 != via).unwrap() };
            cycle.push((cur, e));
            via = e;
            cur = next;
            if cur == start {
                break;
            }
            if cycle.len() > adj.len() {
                return Err(Error::Complex(format!("faces around vertex {g} do not form a cycle")));
            }
        }
        if cycle.len() != adj.len() {
            return Err(Error::Complex(format!("faces around vertex {g} form several cycles")));
        }
        Ok(cycle)
    }

    /// Power ideal I_σ(γ)^{r+1} as a Gröbner basis.
    fn vertex_power_gb(&self, g: usize, sigma: usize, order: &MonomialOrder) -> Result<GroebnerBasis> {
        let gens = self.vertex_generators(g, sigma).ok_or_else(|| Error::Compatibility("missing vertex ideal".into()))?;
        let e = self.r + 1;
        let mut prods = vec![Polynomial::one(&self.space)];
        for _ in 0..e {
            let mut next = Vec::new();
            for p in &prods {
                for q in &gens {
                    next.push(p * q);
                }
            }
            prods = next;
        }
        buchberger(&prods, order)
    }

    /// The point γ in σ's coordinates, from linear generators.
    fn vertex_point(&self, g: usize, sigma: usize) -> Result<Vec<Rational>> {
        let gens = self.vertex_generators(g, sigma).ok_or_else(|| Error::Compatibility("missing vertex ideal".into()))?;
        let blk = self.block(sigma);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for p in &gens {
            if p.total_degree().unwrap_or(0) > 1 {
                return Err(Error::Compatibility("non-linear vertex ideal".into()));
            }
            rows.push(blk.clone().map(|i| p.coefficient(&Monomial::var(self.space.nvars(), i, 1))).collect::<Vec<_>>());
            rhs.push(-p.constant_term());
        }
        let m = RationalMatrix::from_rows(rows);
        if m.rank() < blk.len() {
            return Err(Error::Compatibility("vertex is not cut out by its edges".into()));
        }
        let sol = m.solve(&rhs).ok_or_else(|| Error::Compatibility("edge ideals have no common point".into()))?;
        let mut full = vec![Rational::zero(); self.space.nvars()];
        for (k, i) in blk.enumerate() {
            full[i] = sol[k].clone();
        }
        Ok(full)
    }

    /// Inverse of `tm` as a jet at γ: images of the target's coordinates in
    /// the source's coordinates, modulo I_source(γ)^{r+1}.
    fn jet_inverse(&self, tm: &TransitionMap, g: usize, gb_src: &GroebnerBasis) -> Result<Vec<Polynomial>> {
        let pt = self.vertex_point(g, tm.target)?;
        let ps = self.vertex_point(g, tm.source)?;
        let tb: Vec<usize> = self.block(tm.target).collect();
        let sb: Vec<usize> = self.block(tm.source).collect();
        let n = tb.len();
        for (i, f) in tm.lift.iter().enumerate() {
            if f.eval(&pt) != ps[sb[i]] {
                return Err(Error::Compatibility(format!("transition on face {} does not fix vertex {g}", tm.facet)));
            }
        }
        let jac = RationalMatrix::from_rows(
            tm.lift.iter().map(|f| tb.iter().map(|&j| f.derivative(j).eval(&pt)).collect()).collect(),
        );
        let jinv = super::gluing::invert(&jac).ok_or_else(|| Error::Compatibility("singular transition at vertex".into()))?;
        let xs: Vec<Polynomial> = sb.iter().map(|&i| Polynomial::var(&self.space, i)).collect();
        let cst = |c: &Rational| Polynomial::constant(&self.space, c.clone());
        let mut gmap: Vec<Polynomial> = (0..n)
            .map(|j| {
                let mut p = cst(&pt[tb[j]]);
                for i in 0..n {
                    p = &p + &(&xs[i] - &cst(&ps[sb[i]])).scale(jinv.get(j, i));
                }
                p
            })
            .collect();
        for _ in 0..=self.r {
            let map: BTreeMap<usize, Polynomial> = tb.iter().copied().zip(gmap.iter().cloned()).collect();
            let err: Vec<Polynomial> = tm
                .lift
                .iter()
                .zip(&xs)
                .map(|(f, x)| Ok(gb_src.normal_form(&(&f.substitute(&map, &self.space)? - x))))
                .collect::<Result<_>>()?;
            gmap = (0..n)
                .map(|j| {
                    let mut p = gmap[j].clone();
                    for i in 0..n {
                        p = &p - &err[i].scale(jinv.get(j, i));
                    }
                    gb_src.normal_form(&p)
                })
                .collect();
        }
        Ok(gmap)
    }

    /// Composite of the transition lifts around γ; `Some(msg)` on violation.
    fn check_vertex_cycle(&self, g: usize, order: &MonomialOrder) -> Result<Option<String>> {
        let cycle = self.vertex_cycle(g)?;
        let mut gbs: BTreeMap<usize, GroebnerBasis> = BTreeMap::new();
        for &(f, _) in &cycle {
            gbs.insert(f, self.vertex_power_gb(g, f, order)?);
        }
        let start = cycle[0].0;
        let mut comp: Vec<Polynomial> = self.face_vars(start);
        for (k, &(f, e)) in cycle.iter().enumerate() {
            let next = cycle[(k + 1) % cycle.len()].0;
            let tm = &self.transitions[&e];
            let images = if tm.source == f && tm.target == next {
                tm.lift.clone()
            } else {
                self.jet_inverse(tm, g, &gbs[&next])?
            };
            let map: BTreeMap<usize, Polynomial> = self.block(f).zip(images).collect();
            comp = comp.iter().map(|c| Ok(gbs[&next].normal_form(&c.substitute(&map, &self.space)?))).collect::<Result<_>>()?;
        }
        let faces: Vec<usize> = cycle.iter().map(|x| x.0).collect();
        for (c, x) in comp.iter().zip(self.face_vars(start)) {
            if !gbs[&start].contains(&(c - &x)) {
                return Ok(Some(format!(
                    "C3: composite of transitions around vertex {g} (faces {faces:?}) sends {x} to {c}, not the identity modulo I(γ)^{}",
                    self.r + 1
                )));
            }
        }
        Ok(None)
    }

    /// All interior facets τ ⊇ α (α a k-face).
    pub fn facets_containing(&self, k: usize, alpha: usize) -> BTreeSet<usize> {
        if k == self.n() - 1 {
            return [alpha].into();
        }
        self.complex.containing(k, alpha, self.n() - 1)
    }
}

/// Machine check for degree ≤ 2; `Some(warning)` when irreducibility is not established.
fn irreducibility_warning(g: &Polynomial, blk: &std::ops::Range<usize>) -> Option<String> {
    match g.total_degree().unwrap_or(0) {
        0 | 1 => None,
        2 => {
            // homogenized symmetric matrix; full rank ≥ 3 forces irreducibility
            let vars: Vec<usize> = blk.clone().collect();
            let k = vars.len() + 1;
            let nv = g.space().nvars();
            let mut m = RationalMatrix::zeros(k, k);
            let half = crate::poly::rat(1, 2);
            for (mono, c) in g.terms() {
                let sup: Vec<(usize, u32)> = mono.support().collect();
                let pos = |v: usize| vars.iter().position(|&x| x == v).unwrap() + 1;
                match sup.as_slice() {
                    [] => m.set(0, 0, c.clone()),
                    [(v, 1)] => {
                        m.set(0, pos(*v), c * &half);
                        m.set(pos(*v), 0, c * &half);
                    }
                    [(v, 2)] => m.set(pos(*v), pos(*v), c.clone()),
                    [(v, 1), (w, 1)] => {
                        m.set(pos(*v), pos(*w), c * &half);
                        m.set(pos(*w), pos(*v), c * &half);
                    }
                    _ => {}
                }
            }
            let _ = nv;
            if m.rank() >= 3 {
                None
            } else {
                Some("quadratic generator may be reducible".into())
            }
        }
        d => Some(format!("degree-{d} generator accepted without an irreducibility check")),
    }
}
