use super::{Monomial, VariableSpace};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderKind {
    Grevlex,
    Lex,
    /// Blocks are eliminated in list order; grevlex inside each block.
    BlockElimination(Vec<Vec<usize>>),
}

/// A monomial order; `priority` lists variable indices from most to least
/// significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn grevlex(nvars: usize) -> Self {
        Self { kind: OrderKind::Grevlex, priority: (0..nvars).collect() }
    }

    pub fn lex(nvars: usize) -> Self {
        Self { kind: OrderKind::Lex, priority: (0..nvars).collect() }
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Self {
        Self { kind, priority }
    }

    pub fn block_elimination(blocks: Vec<Vec<usize>>) -> Self {
        let priority = blocks.iter().flatten().copied().collect();
        Self { kind: OrderKind::BlockElimination(blocks), priority }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match &self.kind {
            OrderKind::Lex => {
                for &i in &self.priority {
                    match a.exp(i).cmp(&b.exp(i)) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::Grevlex => grevlex(a, b, &self.priority),
            OrderKind::BlockElimination(blocks) => {
                for blk in blocks {
                    match grevlex(a, b, blk) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// Descending sort.
    pub fn sort_desc(&self, ms: &mut [Monomial]) {
        ms.sort_by(|a, b| self.cmp(b, a));
    }
}

fn grevlex(a: &Monomial, b: &Monomial, vars: &[usize]) -> Ordering {
    let da: u32 = vars.iter().map(|&i| a.exp(i)).sum();
    let db: u32 = vars.iter().map(|&i| b.exp(i)).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for &i in vars.iter().rev() {
        match a.exp(i).cmp(&b.exp(i)) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingKind {
    Total,
    Bidegree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grading {
    pub kind: GradingKind,
    pub d: u32,
}

impl Grading {
    pub fn total(d: u32) -> Self {
        Self { kind: GradingKind::Total, d }
    }

    pub fn bidegree(d: u32) -> Self {
        Self { kind: GradingKind::Bidegree, d }
    }

    /// Whether `m` (restricted to `vars`) lies within the bound.
    pub fn admits(&self, m: &Monomial, vars: std::ops::Range<usize>) -> bool {
        match self.kind {
            GradingKind::Total => vars.map(|i| m.exp(i)).sum::<u32>() <= self.d,
            GradingKind::Bidegree => vars.into_iter().all(|i| m.exp(i) <= self.d),
        }
    }

    /// Number of monomials per block of `n` variables.
    pub fn block_count(&self, n: usize) -> usize {
        match self.kind {
            GradingKind::Total => binomial(self.d as usize + n, n),
            GradingKind::Bidegree => (self.d as usize + 1).pow(n as u32),
        }
    }
}

impl std::fmt::Display for Grading {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            GradingKind::Total => write!(f, "total {}", self.d),
            GradingKind::Bidegree => write!(f, "bidegree ({0},{0})", self.d),
        }
    }
}

impl std::str::FromStr for GradingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "total" => Ok(GradingKind::Total),
            "bidegree" | "bi" => Ok(GradingKind::Bidegree),
            _ => Err(Error::Grading(format!("unknown grading `{s}`"))),
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: usize = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Monomials of one block within the grading, descending in grevlex over the
/// global variable order.
pub fn monomials_within(space: &VariableSpace, face: usize, g: Grading) -> Result<Vec<Monomial>> {
    monomials_within_by(space, face, g, &MonomialOrder::grevlex(space.nvars()))
}

pub fn monomials_within_by(space: &VariableSpace, face: usize, g: Grading, order: &MonomialOrder) -> Result<Vec<Monomial>> {
    let range = space.block_range(face).ok_or_else(|| Error::Grading(format!("no block for face {face}")))?;
    let n = range.len();
    if g.kind == GradingKind::Bidegree && n != 2 {
        return Err(Error::Grading(format!("bidegree needs 2 variables per block, face {face} has {n}")));
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    enumerate(&mut exps, 0, g, &mut |e| {
        let mut full = vec![0u32; space.nvars()];
        full[range.clone()].copy_from_slice(e);
        out.push(Monomial::from_exponents(full));
    });
    order.sort_desc(&mut out);
    Ok(out)
}

fn enumerate(e: &mut Vec<u32>, pos: usize, g: Grading, f: &mut dyn FnMut(&[u32])) {
    if pos == e.len() {
        f(e);
        return;
    }
    let used: u32 = e[..pos].iter().sum();
    let max = match g.kind {
        GradingKind::Total => g.d - used,
        GradingKind::Bidegree => g.d,
    };
    for k in 0..=max {
        e[pos] = k;
        enumerate(e, pos + 1, g, f);
    }
    e[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn monomial_counts() {
        let s = VariableSpace::for_faces(&[0], 2);
        let t2 = monomials_within(&s, 0, Grading::total(2)).unwrap();
        assert_eq!(t2, vec![m(&[2, 0]), m(&[1, 1]), m(&[0, 2]), m(&[1, 0]), m(&[0, 1]), m(&[0, 0])]);
        assert_eq!(monomials_within(&s, 0, Grading::bidegree(1)).unwrap().len(), 4);
        assert_eq!(monomials_within(&s, 0, Grading::total(10)).unwrap().len(), 66);
        let s3 = VariableSpace::for_faces(&[0], 3);
        assert!(matches!(monomials_within(&s3, 0, Grading::bidegree(1)), Err(Error::Grading(_))));
        for d in 0..6 {
            assert_eq!(monomials_within(&s3, 0, Grading::total(d)).unwrap().len(), binomial(d as usize + 3, 3));
        }
    }

    #[test]
    fn grevlex_and_lex() {
        let g = MonomialOrder::grevlex(3);
        // x·z² ≺ y³ in grevlex (same degree, smaller last exponent wins)
        assert_eq!(g.cmp(&m(&[0, 3, 0]), &m(&[1, 0, 2])), Ordering::Greater);
        assert_eq!(g.cmp(&m(&[0, 0, 2]), &m(&[1, 0, 0])), Ordering::Greater);
        let l = MonomialOrder::lex(3);
        assert_eq!(l.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
    }

    fn arb_m() -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u32..4, 3).prop_map(Monomial::from_exponents)
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative_and_total(a in arb_m(), b in arb_m(), c in arb_m()) {
            for o in [MonomialOrder::grevlex(3), MonomialOrder::lex(3), MonomialOrder::block_elimination(vec![vec![0], vec![1, 2]])] {
                let ab = o.cmp(&a, &b);
                prop_assert_eq!(ab == Ordering::Equal, a == b);
                prop_assert_eq!(o.cmp(&b, &a), ab.reverse());
                prop_assert_eq!(o.cmp(&a.mul(&c), &b.mul(&c)), ab);
            }
            let g = MonomialOrder::grevlex(3);
            if a.degree() > b.degree() {
                prop_assert_eq!(g.cmp(&a, &b), Ordering::Greater);
            }
        }
    }
}
