//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Every polynomial carries a shared [`VariableSpace`]; the space is a list of
//! per-face blocks, so a polynomial over the tensor ring of several faces is
//! just a polynomial in the union of their blocks.

mod order;
mod text;

pub use order::{binomial, monomials_within, monomials_within_by, Grading, GradingKind, MonomialOrder, OrderKind};
pub use text::{format_decimal, format_rational, parse_polynomial, parse_rational};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub face: usize,
    pub names: Vec<String>,
}

/// Ordered list of variable blocks; the global variable index runs through the
/// blocks in face order.
#[derive(Clone, Debug)]
pub struct VariableSpace {
    blocks: Vec<Block>,
    names: Vec<String>,
    offsets: Vec<usize>,
    index: HashMap<String, usize>,
}

impl PartialEq for VariableSpace {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}
impl Eq for VariableSpace {}

impl VariableSpace {
    pub fn new(mut blocks: Vec<Block>) -> Result<Arc<Self>> {
        blocks.sort_by_key(|b| b.face);
        for w in blocks.windows(2) {
            if w[0].face == w[1].face {
                return Err(Error::Format(format!("duplicate block for face {}", w[0].face)));
            }
        }
        let mut names = Vec::new();
        let mut offsets = Vec::new();
        let mut index = HashMap::new();
        for b in &blocks {
            offsets.push(names.len());
            for n in &b.names {
                if index.insert(n.clone(), names.len()).is_some() {
                    return Err(Error::Format(format!("variable `{n}` declared twice")));
                }
                names.push(n.clone());
            }
        }
        Ok(Arc::new(Self { blocks, names, offsets, index }))
    }

    /// Canonical space: block for face k is `u{k}_1 .. u{k}_n`.
    pub fn for_faces(faces: &[usize], n: usize) -> Arc<Self> {
        let blocks = faces
            .iter()
            .map(|&k| Block { face: k, names: (1..=n).map(|j| format!("u{k}_{j}")).collect() })
            .collect();
        Self::new(blocks).expect("canonical names are unique")
    }

    /// A one-block space with the given names (face id 0); used for univariate
    /// gluing data and ad-hoc examples.
    pub fn named(names: &[&str]) -> Arc<Self> {
        Self::new(vec![Block { face: 0, names: names.iter().map(|s| s.to_string()).collect() }])
            .expect("names must be unique")
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn faces(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.face).collect()
    }

    /// Global index range of a face's block.
    pub fn block_range(&self, face: usize) -> Option<Range<usize>> {
        let pos = self.blocks.iter().position(|b| b.face == face)?;
        let start = self.offsets[pos];
        Some(start..start + self.blocks[pos].names.len())
    }

    /// The sub-space made of the given faces' blocks (same names).
    pub fn restrict(&self, faces: &[usize]) -> Result<Arc<Self>> {
        let mut blocks = Vec::new();
        for &f in faces {
            let b = self
                .blocks
                .iter()
                .find(|b| b.face == f)
                .ok_or_else(|| Error::Format(format!("no block for face {f}")))?;
            blocks.push(b.clone());
        }
        Self::new(blocks)
    }
}

impl fmt::Display for VariableSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}

pub fn same_space(a: &Arc<VariableSpace>, b: &Arc<VariableSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Dense exponent vector over the variables of a space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e.into_boxed_slice())
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; nvars];
        v[i] = e;
        Monomial(v.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self | other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(self.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variables with nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e))
    }

    pub fn fmt_in(&self, space: &VariableSpace) -> String {
        let parts: Vec<String> = self
            .support()
            .map(|(i, e)| if e == 1 { space.name(i).to_string() } else { format!("{}^{}", space.name(i), e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, Debug)]
pub struct Polynomial {
    space: Arc<VariableSpace>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.terms == other.terms
    }
}
impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(space: &Arc<VariableSpace>) -> Self {
        Self { space: space.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(space: &Arc<VariableSpace>, c: Rational) -> Self {
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(space.nvars()), c);
        }
        p
    }

    pub fn one(space: &Arc<VariableSpace>) -> Self {
        Self::constant(space, Rational::one())
    }

    pub fn var(space: &Arc<VariableSpace>, i: usize) -> Self {
        Self::monomial(space, Monomial::var(space.nvars(), i, 1), Rational::one())
    }

    pub fn var_named(space: &Arc<VariableSpace>, name: &str) -> Result<Self> {
        let i = space.index_of(name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(Self::var(space, i))
    }

    pub fn monomial(space: &Arc<VariableSpace>, m: Monomial, c: Rational) -> Self {
        debug_assert_eq!(m.nvars(), space.nvars());
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(space: &Arc<VariableSpace>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(space);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn space(&self) -> &Arc<VariableSpace> {
        &self.space
    }

    /// Terms in ascending lexicographic exponent order (storage order).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> + DoubleEndedIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.space.nvars()))
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.support().map(|(i, _)| i).collect::<Vec<_>>()).collect()
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        Ok(p)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), -c.clone());
        }
        Ok(p)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut p = Polynomial::zero(&self.space);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(p)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.space);
        }
        Polynomial { space: self.space.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.space);
        }
        Polynomial { space: self.space.clone(), terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.space);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Divide out the content and make the leading coefficient (in `order`) positive.
    pub fn primitive(&self, order: &MonomialOrder) -> Polynomial {
        let Some((_, lc)) = self.leading_term(order) else { return self.clone() };
        let sign = if lc.is_negative() { -Rational::one() } else { Rational::one() };
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_integer::Integer::gcd(&num_gcd, c.numer());
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
        self.scale(&(sign * Rational::new(den_lcm, num_gcd)))
    }

    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            Some((_, lc)) => self.scale(&lc.recip()),
            None => self.clone(),
        }
    }

    /// Ring homomorphism: every variable occurring in `self` is replaced by
    /// its image; images live in `target`.
    pub fn substitute(&self, images: &BTreeMap<usize, Polynomial>, target: &Arc<VariableSpace>) -> Result<Polynomial> {
        for img in images.values() {
            if !same_space(img.space(), target) {
                return Err(Error::SpaceMismatch);
            }
        }
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, e) in m.support() {
                let img = images.get(&i).ok_or_else(|| Error::MissingImage(self.space.name(i).into()))?;
                let p = powers.entry((i, e)).or_insert_with(|| img.pow(e));
                t = &t * &*p;
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Substitute by variable names, for hand-written examples.
    pub fn substitute_named(&self, images: &[(&str, &Polynomial)], target: &Arc<VariableSpace>) -> Result<Polynomial> {
        let mut map = BTreeMap::new();
        for (n, p) in images {
            let i = self.space.index_of(n).ok_or_else(|| Error::UnknownVariable(n.to_string()))?;
            map.insert(i, (*p).clone());
        }
        self.substitute(&map, target)
    }

    /// Re-express in another space by matching variable names.
    pub fn embed(&self, target: &Arc<VariableSpace>) -> Result<Polynomial> {
        if same_space(&self.space, target) {
            return Ok(self.clone());
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.nvars()];
            for (i, k) in m.support() {
                let j = target.index_of(self.space.name(i)).ok_or_else(|| Error::UnknownVariable(self.space.name(i).into()))?;
                e[j] = k;
            }
            out.add_term(Monomial::from_exponents(e), c.clone());
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.support() {
                t *= num_traits::pow(point[i].clone(), e as usize);
            }
            acc += t;
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.space);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                let mut ex = m.exponents().to_vec();
                ex[i] -= 1;
                out.add_term(Monomial::from_exponents(ex), c * int(e as i64));
            }
        }
        out
    }

    pub fn parse(text: &str, space: &Arc<VariableSpace>) -> Result<Polynomial> {
        parse_polynomial(text, space)
    }
}

pub fn arith(a: &Polynomial, b: &Polynomial, op: ArithOp) -> Result<Polynomial> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        /// Panics when the operands live in different variable spaces; use the
        /// `try_` methods for a checked variant.
        impl<'a> std::ops::$tr<&'a Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &'a Polynomial) -> Polynomial {
                self.$f(rhs).expect("polynomial arithmetic across variable spaces")
            }
        }
        impl std::ops::$tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                self.$f(&rhs).expect("polynomial arithmetic across variable spaces")
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl std::ops::Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_polynomial(self))
    }
}
