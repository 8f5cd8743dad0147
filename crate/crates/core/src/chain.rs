//! The bounded-degree spline chain complex Q_{d,•}: per-face quotients
//! T_d(α)/J_d(α) and the boundary maps between them.

use crate::complex::GrDomain;
use crate::error::{Error, Result};
use crate::groebner::{buchberger, GroebnerBasis};
use crate::linalg::RationalMatrix;
use crate::poly::{monomials_within_by, Grading, Monomial, MonomialOrder, Polynomial, VariableSpace};
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Monomial order used for the face ideals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OrderChoice {
    /// Graded reverse lexicographic over the global variable order.
    #[default]
    Grevlex,
    /// Lexicographic over the global variable order (eliminates lower face ids first).
    Elim,
}

impl OrderChoice {
    pub fn order(self, nvars: usize) -> MonomialOrder {
        match self {
            OrderChoice::Grevlex => MonomialOrder::grevlex(nvars),
            OrderChoice::Elim => MonomialOrder::lex(nvars),
        }
    }
}

impl std::str::FromStr for OrderChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grevlex" => Ok(Self::Grevlex),
            "elim" | "lex" => Ok(Self::Elim),
            _ => Err(Error::Format(format!("unknown order `{s}` (grevlex|elim)"))),
        }
    }
}

/// Generators and reduced basis of I^r(α) for one interior face.
#[derive(Clone, Debug)]
pub struct FaceIdealSystem {
    pub dim: usize,
    pub face: usize,
    /// Maximal faces whose blocks make up R(α).
    pub blocks: Vec<usize>,
    pub generators: Vec<Polynomial>,
    pub gb: GroebnerBasis,
}

pub fn build_edge_ideal(d: &GrDomain, tau: usize, order: &MonomialOrder) -> Result<FaceIdealSystem> {
    if !d.complex.is_interior_facet(tau) {
        return Err(Error::Complex(format!("face {tau} is not an interior facet")));
    }
    let generators = d.edge_ideal_generators(tau);
    let gb = buchberger(&generators, order)?;
    Ok(FaceIdealSystem { dim: d.n() - 1, face: tau, blocks: d.top_faces_of(d.n() - 1, tau), generators, gb })
}

pub fn build_vertex_ideal(d: &GrDomain, k: usize, alpha: usize, order: &MonomialOrder) -> Result<FaceIdealSystem> {
    if k + 2 > d.n() {
        return Err(Error::Complex(format!("{k}-face is not of codimension ≥ 2")));
    }
    let generators = d.low_face_ideal_generators(k, alpha);
    if generators.is_empty() {
        return Err(Error::Complex(format!("{k}-face {alpha} meets no interior facet")));
    }
    let gb = buchberger(&generators, order)?;
    Ok(FaceIdealSystem { dim: k, face: alpha, blocks: d.top_faces_of(k, alpha), generators, gb })
}

/// T_d(α): the constant once, then the non-constant monomials of each block.
pub fn t_span(space: &VariableSpace, blocks: &[usize], g: Grading, order: &MonomialOrder) -> Result<Vec<Monomial>> {
    let mut out = vec![Monomial::one(space.nvars())];
    for &b in blocks {
        out.extend(monomials_within_by(space, b, g, order)?.into_iter().filter(|m| !m.is_one()));
    }
    Ok(out)
}

/// Basis of Q_d(α) = T_d(α)/J_d(α), extracted from the remainders of the
/// spanning monomials.
#[derive(Clone, Debug)]
pub struct QBasis {
    pub dim: usize,
    pub face: usize,
    pub span: Vec<Monomial>,
    /// Indices into `span` of the representatives (first independent remainders).
    pub basis: Vec<usize>,
    /// `coords` column j: coordinates of 𝔯(span[j]) in the basis.
    pub coords: RationalMatrix,
    /// Standard monomials labelling the remainder matrix rows.
    pub standard: Vec<Monomial>,
    /// dim J_d(α): kernel dimension of the remainder map on T_d(α).
    pub kernel_dim: usize,
}

impl QBasis {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn representatives(&self) -> Vec<&Monomial> {
        self.basis.iter().map(|&i| &self.span[i]).collect()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.span.iter().position(|x| x == m)
    }
}

/// Remainder matrix: rows standard monomials, columns the spanning monomials.
pub fn remainder_matrix(span: &[Monomial], gb: &GroebnerBasis) -> (RationalMatrix, Vec<Monomial>) {
    let space = gb.space();
    let rems: Vec<Polynomial> = span.iter().map(|m| gb.normal_form(&Polynomial::monomial(space, m.clone(), One::one()))).collect();
    let mut rows: Vec<Monomial> = rems.iter().flat_map(|r| r.terms().map(|(m, _)| m.clone())).collect();
    gb.order.sort_desc(&mut rows);
    rows.dedup();
    let idx: BTreeMap<&Monomial, usize> = rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = RationalMatrix::zeros(rows.len(), span.len());
    for (j, r) in rems.iter().enumerate() {
        for (m, c) in r.terms() {
            mat.set(idx[m], j, c.clone());
        }
    }
    (mat, rows)
}

pub fn q_basis(dim: usize, face: usize, span: Vec<Monomial>, gb: &GroebnerBasis) -> QBasis {
    let (mat, standard) = remainder_matrix(&span, gb);
    let (rref, pivots) = mat.rref();
    let k = pivots.len();
    let mut coords = RationalMatrix::zeros(k, span.len());
    for i in 0..k {
        for j in 0..span.len() {
            coords.set(i, j, rref.get(i, j).clone());
        }
    }
    QBasis { dim, face, kernel_dim: span.len() - k, span, basis: pivots, coords, standard }
}

/// Options for assembling the complex.
#[derive(Clone, Copy, Debug, Default)]
pub struct ChainOptions {
    pub order: OrderChoice,
    /// Replace every ideal by zero (the complex T_{d,•} itself).
    pub zero_ideals: bool,
}

/// Ideals of all interior faces, computed once and reused across degrees.
#[derive(Clone, Debug)]
pub struct ChainContext {
    pub domain: Arc<GrDomain>,
    pub order: MonomialOrder,
    pub options: ChainOptions,
    /// `ideals[k]`: interior k-faces with their ideal systems.
    pub ideals: Vec<Vec<FaceIdealSystem>>,
}

impl ChainContext {
    pub fn new(domain: &GrDomain, options: ChainOptions) -> Result<Self> {
        let n = domain.n();
        let order = options.order.order(domain.space.nvars());
        let mut ideals = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let faces = domain.complex.interior_faces(k);
            let systems: Vec<FaceIdealSystem> = faces
                .par_iter()
                .map(|&a| {
                    if options.zero_ideals || k == n {
                        Ok(FaceIdealSystem {
                            dim: k,
                            face: a,
                            blocks: domain.top_faces_of(k, a),
                            generators: vec![],
                            gb: GroebnerBasis::empty(&domain.space, order.clone()),
                        })
                    } else if k == n - 1 {
                        build_edge_ideal(domain, a, &order)
                    } else {
                        build_vertex_ideal(domain, k, a, &order)
                    }
                })
                .collect::<Result<_>>()?;
            log::debug!("{} interior {k}-face ideal(s) ready", systems.len());
            ideals.push(systems);
        }
        Ok(Self { domain: Arc::new(domain.clone()), order, options, ideals })
    }

    pub fn ideal(&self, k: usize, face: usize) -> Option<&FaceIdealSystem> {
        self.ideals[k].iter().find(|s| s.face == face)
    }

    pub fn complex(&self, g: Grading) -> Result<TruncatedChainComplex> {
        let d = &self.domain;
        let n = d.n();
        let space = d.space.clone();
        let mut faces: Vec<Vec<QBasis>> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let qs: Vec<QBasis> = self.ideals[k]
                .par_iter()
                .map(|s| Ok(q_basis(k, s.face, t_span(&space, &s.blocks, g, &self.order)?, &s.gb)))
                .collect::<Result<_>>()?;
            faces.push(qs);
        }
        let offsets: Vec<Vec<usize>> = faces
            .iter()
            .map(|qs| {
                let mut acc = 0;
                qs.iter()
                    .map(|q| {
                        let o = acc;
                        acc += q.len();
                        o
                    })
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = faces.iter().map(|qs| qs.iter().map(|q| q.len()).sum()).collect();
        let mut deltas = vec![RationalMatrix::zeros(0, dims[0])];
        for k in 1..=n {
            let mut m = RationalMatrix::zeros(dims[k - 1], dims[k]);
            let lower: BTreeMap<usize, usize> = faces[k - 1].iter().enumerate().map(|(i, q)| (q.face, i)).collect();
            for (ai, qa) in faces[k].iter().enumerate() {
                for &(b, sign) in d.complex.face_boundary(k, qa.face) {
                    let Some(&bi) = lower.get(&b) else { continue };
                    let qb = &faces[k - 1][bi];
                    let s = crate::poly::int(sign);
                    for (col, &si) in qa.basis.iter().enumerate() {
                        let j = qb.index_of(&qa.span[si]).ok_or_else(|| {
                            Error::Complex(format!("spanning monomial of {k}-face {} missing from face {b}", qa.face))
                        })?;
                        for row in 0..qb.len() {
                            let c = qb.coords.get(row, j);
                            if !c.is_zero() {
                                m.add_to(offsets[k - 1][bi] + row, offsets[k][ai] + col, &(c * &s));
                            }
                        }
                    }
                }
            }
            deltas.push(m);
        }
        let ranks = deltas.par_iter().map(|m| m.rank()).collect();
        log::debug!("complex at {g:?}: dims {dims:?}");
        Ok(TruncatedChainComplex { n, grading: g, space, faces, offsets, deltas, ranks })
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedChainComplex {
    pub n: usize,
    pub grading: Grading,
    pub space: Arc<VariableSpace>,
    /// `faces[k]`: Q-bases of the interior k-faces.
    pub faces: Vec<Vec<QBasis>>,
    pub offsets: Vec<Vec<usize>>,
    /// `deltas[k]`: C_k → C_{k−1} (k ≥ 1); `deltas[0]` is the zero map.
    pub deltas: Vec<RationalMatrix>,
    pub ranks: Vec<usize>,
}

pub fn build_complex(d: &GrDomain, g: Grading) -> Result<TruncatedChainComplex> {
    ChainContext::new(d, ChainOptions::default())?.complex(g)
}

impl TruncatedChainComplex {
    pub fn dims(&self) -> Vec<usize> {
        self.faces.iter().map(|qs| qs.iter().map(|q| q.len()).sum()).collect()
    }

    /// Σ_k (−1)^{n−k} dim C_k.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims()
            .iter()
            .enumerate()
            .map(|(k, &c)| if (self.n - k) % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// dim H_k = dim C_k − rank δ_k − rank δ_{k+1}, k = 0..=n.
    pub fn homology_dims(&self) -> Vec<usize> {
        let dims = self.dims();
        (0..=self.n)
            .map(|k| {
                let out = self.ranks[k];
                let inc = if k < self.n { self.ranks[k + 1] } else { 0 };
                dims[k] - out - inc
            })
            .collect()
    }

    /// dim H_n: the spline space dimension.
    pub fn spline_dim(&self) -> usize {
        self.homology_dims()[self.n]
    }

    pub fn delta_squared_zero(&self) -> bool {
        (2..=self.n).all(|k| self.deltas[k - 1].mul(&self.deltas[k]).is_zero())
    }

    /// Kernel of δ_n as piecewise polynomials (one map per spline).
    pub fn top_kernel(&self) -> Vec<BTreeMap<usize, Polynomial>> {
        let top = &self.faces[self.n];
        self.deltas[self.n]
            .kernel_basis()
            .into_iter()
            .map(|v| {
                let mut pieces = BTreeMap::new();
                for (fi, q) in top.iter().enumerate() {
                    let mut p = Polynomial::zero(&self.space);
                    for (col, &si) in q.basis.iter().enumerate() {
                        let c = &v[self.offsets[self.n][fi] + col];
                        if !c.is_zero() {
                            p.add_term(q.span[si].clone(), c.clone());
                        }
                    }
                    pieces.insert(q.face, p);
                }
                pieces
            })
            .collect()
    }
}

/// χ of the complex for a domain and grading (no homology needed).
pub fn euler_characteristic(c: &TruncatedChainComplex) -> i64 {
    c.euler_characteristic()
}

pub fn homology_dims(c: &TruncatedChainComplex) -> Vec<usize> {
    c.homology_dims()
}
