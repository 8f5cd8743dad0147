//! Spline bases (Algorithm 1), dimensions and membership checks.

use crate::chain::{ChainContext, ChainOptions, OrderChoice};
use crate::complex::GrDomain;
use crate::error::{Error, Result};
use crate::groebner::{buchberger, GroebnerBasis};
use crate::linalg::RationalMatrix;
use crate::poly::{int, monomials_within_by, Grading, Monomial, MonomialOrder, Polynomial, Rational, VariableSpace};
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

/// One polynomial per maximal face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spline {
    pub pieces: BTreeMap<usize, Polynomial>,
}

impl Spline {
    pub fn new(pieces: BTreeMap<usize, Polynomial>) -> Self {
        Self { pieces }
    }

    pub fn constant(d: &GrDomain, c: Rational) -> Self {
        let pieces = d.complex.top_faces().iter().map(|&f| (f, Polynomial::constant(&d.space, c.clone()))).collect();
        Self { pieces }
    }

    pub fn piece(&self, face: usize) -> Option<&Polynomial> {
        self.pieces.get(&face)
    }

    pub fn scale(&self, c: &Rational) -> Spline {
        Spline { pieces: self.pieces.iter().map(|(f, p)| (*f, p.scale(c))).collect() }
    }

    pub fn add(&self, other: &Spline) -> Result<Spline> {
        let mut pieces = self.pieces.clone();
        for (f, p) in &other.pieces {
            let e = pieces.get(f).cloned();
            pieces.insert(*f, match e {
                Some(q) => q.try_add(p)?,
                None => p.clone(),
            });
        }
        Ok(Spline { pieces })
    }

    /// Evaluate piece `face` at the face's own coordinates.
    pub fn eval(&self, d: &GrDomain, face: usize, coords: &[Rational]) -> Result<Rational> {
        let p = self.piece(face).ok_or_else(|| Error::Spline(format!("no piece on face {face}")))?;
        let blk = d.block(face);
        if coords.len() != blk.len() {
            return Err(Error::Spline(format!("face {face} needs {} coordinates", blk.len())));
        }
        let mut pt = vec![Rational::zero(); d.space.nvars()];
        for (k, i) in blk.enumerate() {
            pt[i] = coords[k].clone();
        }
        Ok(p.eval(&pt))
    }
}

#[derive(Clone, Debug)]
pub struct SplineBasis {
    pub domain: String,
    pub r: u32,
    pub grading: Grading,
    pub space: Arc<VariableSpace>,
    pub splines: Vec<Spline>,
}

impl SplineBasis {
    pub fn len(&self) -> usize {
        self.splines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splines.is_empty()
    }

    /// Σ c_i · basis_i.
    pub fn combine(&self, coeffs: &[Rational]) -> Result<Spline> {
        if coeffs.len() != self.splines.len() {
            return Err(Error::Spline(format!("{} coefficients for a basis of size {}", coeffs.len(), self.splines.len())));
        }
        let mut pieces: BTreeMap<usize, Polynomial> = BTreeMap::new();
        for (c, s) in coeffs.iter().zip(&self.splines) {
            for (f, p) in &s.pieces {
                let acc = pieces.entry(*f).or_insert_with(|| Polynomial::zero(&self.space));
                *acc = &*acc + &p.scale(c);
            }
        }
        Ok(Spline { pieces })
    }
}

/// Incidence of facet τ in the boundary of σ.
fn sign(d: &GrDomain, sigma: usize, tau: usize) -> i64 {
    d.complex.incidence(d.n(), sigma, tau)
}

/// The matrix A of Algorithm 1 together with its column labels.
pub struct Algorithm1System {
    pub matrix: RationalMatrix,
    pub columns: Vec<(usize, Monomial)>,
    pub rows: Vec<(usize, Monomial)>,
}

pub fn algorithm1_system(d: &GrDomain, g: Grading, order: &MonomialOrder) -> Result<Algorithm1System> {
    let n = d.n();
    let mut columns = Vec::new();
    for &s in d.complex.top_faces() {
        for m in monomials_within_by(&d.space, s, g, order)? {
            columns.push((s, m));
        }
    }
    let facets = d.interior_facets();
    let blocks: Vec<(usize, Vec<(usize, Monomial)>, Vec<Vec<(usize, Rational)>>)> = facets
        .par_iter()
        .map(|&t| {
            let gb = buchberger(&d.edge_ideal_generators(t), order)?;
            let mut rowmons: Vec<Monomial> = Vec::new();
            let mut entries: Vec<(usize, Polynomial)> = Vec::new();
            for (s, _) in d.complex.cofaces(n - 1, t) {
                let sg = int(sign(d, s, t));
                for (j, (cs, m)) in columns.iter().enumerate() {
                    if *cs != s {
                        continue;
                    }
                    let rem = gb.normal_form(&Polynomial::monomial(&d.space, m.clone(), One::one())).scale(&sg);
                    rowmons.extend(rem.terms().map(|(q, _)| q.clone()));
                    entries.push((j, rem));
                }
            }
            order.sort_desc(&mut rowmons);
            rowmons.dedup();
            let ri: BTreeMap<&Monomial, usize> = rowmons.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut rows = vec![Vec::new(); rowmons.len()];
            for (j, rem) in &entries {
                for (q, c) in rem.terms() {
                    rows[ri[q]].push((*j, c.clone()));
                }
            }
            Ok((t, rowmons.into_iter().map(|q| (t, q)).collect(), rows))
        })
        .collect::<Result<_>>()?;
    let nrows: usize = blocks.iter().map(|b| b.1.len()).sum();
    let mut matrix = RationalMatrix::zeros(nrows, columns.len());
    let mut rows = Vec::with_capacity(nrows);
    let mut r0 = 0;
    for (_, labels, entries) in blocks {
        for (i, row) in entries.into_iter().enumerate() {
            for (j, c) in row {
                matrix.set(r0 + i, j, c);
            }
        }
        r0 += labels.len();
        rows.extend(labels);
    }
    Ok(Algorithm1System { matrix, columns, rows })
}

/// Basis of G^r_d via the kernel of A (Algorithm 1), after checking compatibility.
pub fn basis_algorithm1(d: &GrDomain, g: Grading, order: OrderChoice) -> Result<SplineBasis> {
    d.ensure_compatible()?;
    basis_algorithm1_unchecked(d, g, order)
}

pub fn basis_algorithm1_unchecked(d: &GrDomain, g: Grading, order: OrderChoice) -> Result<SplineBasis> {
    let ord = order.order(d.space.nvars());
    let sys = algorithm1_system(d, g, &ord)?;
    let mut kernel = sys.matrix.kernel_basis();
    kernel.sort_by_key(|v| v.iter().position(|x| !x.is_zero()));
    let splines = kernel
        .into_iter()
        .map(|v| {
            let mut pieces: BTreeMap<usize, Polynomial> =
                d.complex.top_faces().iter().map(|&f| (f, Polynomial::zero(&d.space))).collect();
            for (c, (s, m)) in v.into_iter().zip(&sys.columns) {
                if !c.is_zero() {
                    pieces.get_mut(s).unwrap().add_term(m.clone(), c);
                }
            }
            Spline { pieces }
        })
        .collect();
    Ok(SplineBasis { domain: d.name.clone(), r: d.r, grading: g, space: d.space.clone(), splines })
}

/// Spline dimension, computed both by Algorithm 1 and as top homology; the
/// two must agree.
pub fn dimension(d: &GrDomain, g: Grading) -> Result<usize> {
    dimension_with(d, g, OrderChoice::default())
}

pub fn dimension_with(d: &GrDomain, g: Grading, order: OrderChoice) -> Result<usize> {
    let ord = order.order(d.space.nvars());
    let sys = algorithm1_system(d, g, &ord)?;
    let a = sys.columns.len() - sys.matrix.rank();
    let h = ChainContext::new(d, ChainOptions { order, zero_ideals: false })?.complex(g)?.spline_dim();
    if a != h {
        return Err(Error::Spline(format!("Algorithm 1 gives {a} but top homology gives {h} ({g})")));
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCheck {
    pub facet: usize,
    pub ok: bool,
    /// 𝔯(f_σ − f_σ′) with respect to I^r(τ).
    pub remainder: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub edges: Vec<EdgeCheck>,
    /// Faces whose piece exceeds the grading bound or leaves its block.
    pub degree_violations: Vec<usize>,
    pub missing_pieces: Vec<usize>,
}

impl VerifyReport {
    pub fn continuous(&self) -> bool {
        self.edges.iter().all(|e| e.ok)
    }

    pub fn ok(&self) -> bool {
        self.continuous() && self.degree_violations.is_empty() && self.missing_pieces.is_empty()
    }

    pub fn failed_edges(&self) -> Vec<usize> {
        self.edges.iter().filter(|e| !e.ok).map(|e| e.facet).collect()
    }
}

/// Edge Gröbner bases kept for repeated membership checks.
pub struct Verifier<'a> {
    domain: &'a GrDomain,
    gbs: BTreeMap<usize, GroebnerBasis>,
}

impl<'a> Verifier<'a> {
    pub fn new(d: &'a GrDomain) -> Result<Self> {
        let ord = MonomialOrder::grevlex(d.space.nvars());
        let gbs = d
            .interior_facets()
            .par_iter()
            .map(|&t| Ok((t, buchberger(&d.edge_ideal_generators(t), &ord)?)))
            .collect::<Result<_>>()?;
        Ok(Self { domain: d, gbs })
    }

    pub fn verify(&self, s: &Spline, g: Option<Grading>) -> VerifyReport {
        let d = self.domain;
        let mut missing = Vec::new();
        let mut degree = Vec::new();
        for &f in d.complex.top_faces() {
            match s.piece(f) {
                None => missing.push(f),
                Some(p) => {
                    let blk = d.block(f);
                    let inside = p.variables().iter().all(|i| blk.contains(i));
                    let bounded = g.is_none_or(|g| p.terms().all(|(m, _)| g.admits(m, blk.clone())));
                    if !inside || !bounded {
                        degree.push(f);
                    }
                }
            }
        }
        let edges = self
            .gbs
            .iter()
            .map(|(&t, gb)| {
                let mut diff = Polynomial::zero(&d.space);
                for (sg, sign) in d.complex.cofaces(d.n() - 1, t) {
                    if let Some(p) = s.piece(sg) {
                        diff = &diff + &p.scale(&int(sign));
                    }
                }
                let remainder = gb.normal_form(&diff);
                EdgeCheck { facet: t, ok: remainder.is_zero(), remainder }
            })
            .collect();
        VerifyReport { edges, degree_violations: degree, missing_pieces: missing }
    }
}

pub fn verify(d: &GrDomain, s: &Spline, g: Option<Grading>) -> Result<VerifyReport> {
    Ok(Verifier::new(d)?.verify(s, g))
}
