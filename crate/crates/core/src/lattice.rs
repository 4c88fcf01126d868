//! Picard lattice of the blowup in the orthogonal basis `H, F_1, ..., F_N`,
//! where `F_i` is the total transform of the `i`-th exceptional curve.
//! `H² = 1`, `F_i² = -1` and all mixed products vanish.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{Origin, VertexId, VisibleGraph};
use crate::rational::{format_rational, Rational};
use crate::singularity::DiscrepancyVector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    h: Rational,
    /// Sparse coefficients of the `F_i`, keyed by insertion index.
    e: BTreeMap<usize, Rational>,
    /// Number of exceptional classes of the surface this class lives on.
    rank: usize,
}

impl DivisorClass {
    pub fn zero(rank: usize) -> Self {
        Self {
            h: Rational::zero(),
            e: BTreeMap::new(),
            rank,
        }
    }

    pub fn hyperplane(rank: usize) -> Self {
        Self {
            h: Rational::one(),
            ..Self::zero(rank)
        }
    }

    pub fn exceptional(i: usize, rank: usize) -> Self {
        assert!(i < rank, "exceptional index {i} out of range {rank}");
        let mut c = Self::zero(rank);
        c.e.insert(i, Rational::one());
        c
    }

    /// `d H - Σ m_i F_i`.
    pub fn from_multiplicities(d: Rational, m: &[Rational]) -> Self {
        let mut c = Self::zero(m.len());
        c.h = d;
        for (i, x) in m.iter().enumerate() {
            if !x.is_zero() {
                c.e.insert(i, -x);
            }
        }
        c
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn h(&self) -> &Rational {
        &self.h
    }

    pub fn coefficient(&self, i: usize) -> Rational {
        self.e.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero `F` coefficients in index order.
    pub fn exceptional_terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.e.iter().map(|(i, c)| (*i, c))
    }

    pub fn pairing(&self, other: &DivisorClass) -> Result<Rational> {
        if self.rank != other.rank {
            return Err(Error::LatticeMismatch(self.rank, other.rank));
        }
        let (small, large) = if self.e.len() <= other.e.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = &self.h * &other.h;
        for (i, c) in &small.e {
            if let Some(d) = large.e.get(i) {
                acc -= c * d;
            }
        }
        Ok(acc)
    }

    /// Self-intersection.
    pub fn square(&self) -> Rational {
        self.pairing(self).expect("same lattice")
    }

    fn combine(mut self, other: &DivisorClass, sign: &Rational) -> Self {
        assert_eq!(self.rank, other.rank, "classes on different blowups");
        self.h += &other.h * sign;
        for (i, c) in &other.e {
            let entry = self.e.entry(*i).or_insert_with(Rational::zero);
            *entry += c * sign;
            if entry.is_zero() {
                self.e.remove(i);
            }
        }
        self
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.rank);
        }
        Self {
            h: &self.h * s,
            e: self.e.iter().map(|(i, c)| (*i, c * s)).collect(),
            rank: self.rank,
        }
    }
}

impl Add<&DivisorClass> for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.combine(rhs, &Rational::one())
    }
}

impl Sub<&DivisorClass> for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.combine(rhs, &-Rational::one())
    }
}

impl Mul<&Rational> for &DivisorClass {
    type Output = DivisorClass;
    fn mul(self, rhs: &Rational) -> DivisorClass {
        self.scaled(rhs)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scaled(&-Rational::one())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}H", format_rational(&self.h))?;
        for (i, c) in &self.e {
            write!(f, " + {}F{}", format_rational(c), i)?;
        }
        Ok(())
    }
}

/// Classes of all visible curves, indexed by vertex id.
pub fn visible_classes(graph: &VisibleGraph) -> Vec<DivisorClass> {
    let rank = graph.blowups();
    let mut classes: Vec<DivisorClass> = graph
        .vertices()
        .iter()
        .map(|v| match v.origin {
            Origin::Corner(_) => DivisorClass::hyperplane(rank),
            Origin::Inserted(i) => DivisorClass::exceptional(i, rank),
        })
        .collect();
    let minus_one = -Rational::one();
    for (i, ins) in graph.history().iter().enumerate() {
        for p in [ins.left, ins.right] {
            classes[p.0].e.insert(i, minus_one.clone());
        }
    }
    classes
}

pub fn class_of(graph: &VisibleGraph, v: VertexId) -> Result<DivisorClass> {
    if v.0 >= graph.vertices().len() {
        return Err(Error::UnknownVertex(format!("#{}", v.0)));
    }
    let rank = graph.blowups();
    let mut c = match graph.vertex(v).origin {
        Origin::Corner(_) => DivisorClass::hyperplane(rank),
        Origin::Inserted(i) => DivisorClass::exceptional(i, rank),
    };
    for (i, ins) in graph.history().iter().enumerate() {
        if ins.left == v || ins.right == v {
            c.e.insert(i, -Rational::one());
        }
    }
    Ok(c)
}

/// `K = -3H + Σ F_i`.
pub fn canonical_class(graph: &VisibleGraph) -> DivisorClass {
    let rank = graph.blowups();
    let mut c = DivisorClass::zero(rank);
    c.h = Rational::from_integer((-3).into());
    for i in 0..rank {
        c.e.insert(i, Rational::one());
    }
    c
}

pub fn pairing(c1: &DivisorClass, c2: &DivisorClass) -> Result<Rational> {
    c1.pairing(c2)
}

/// `K + Σ b_i E_i`, plus the boundary curve with coefficient one.
pub fn log_pullback(graph: &VisibleGraph, b: &DiscrepancyVector) -> Result<DivisorClass> {
    let blacks = graph.blacks();
    if b.len() != blacks.len() || blacks.iter().any(|v| b.get(*v).is_none()) {
        return Err(Error::DiscrepancyMismatch);
    }
    let classes = visible_classes(graph);
    let mut c = canonical_class(graph);
    for (v, bi) in b.iter() {
        c = c + &classes[v.0].scaled(bi);
    }
    if let Some(bd) = graph.boundary() {
        c = c + &classes[bd.0];
    }
    Ok(c)
}
