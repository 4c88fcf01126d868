//! Black components, the chain test, and the discrepancy system
//! `(K + Σ b_i E_i + B) · E_j = 0` over all black curves `E_j`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Color, VertexId, VisibleGraph};
use crate::linalg;
use crate::rational::Rational;

/// A black component whose induced subgraph is a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub vertices: Vec<VertexId>,
    pub marks: Vec<i64>,
}

impl Chain {
    pub fn determinant(&self) -> BigInt {
        chain_determinant(&self.marks)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiscrepancyVector {
    values: BTreeMap<VertexId, Rational>,
}

impl DiscrepancyVector {
    pub fn get(&self, v: VertexId) -> Option<&Rational> {
        self.values.get(&v)
    }

    /// Zero for vertices that are not black.
    pub fn at(&self, v: VertexId) -> Rational {
        self.values.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &Rational)> {
        self.values.iter().map(|(v, b)| (*v, b))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> Option<&Rational> {
        self.values.values().max()
    }
}

impl FromIterator<(VertexId, Rational)> for DiscrepancyVector {
    fn from_iter<T: IntoIterator<Item = (VertexId, Rational)>>(iter: T) -> Self {
        Self {
            values: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A non-boundary curve with mark at most zero.
    Unresolved(String),
    /// A black component that is not a path.
    NotAChain(Vec<String>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Unresolved(v) => write!(f, "vertex {v} has mark <= 0"),
            Violation::NotAChain(vs) => {
                write!(f, "not a chain: component {{{}}} is unsupported", vs.join(", "))
            }
        }
    }
}

/// Connected components of the subgraph induced on black vertices, each
/// sorted by id, ordered by smallest member.
pub fn black_components(graph: &VisibleGraph) -> Vec<Vec<VertexId>> {
    let is_black = |v: VertexId| graph.color(v) == Color::Black;
    let mut seen = vec![false; graph.vertices().len()];
    let mut out = Vec::new();
    for start in graph.ids().filter(|&v| is_black(v)) {
        if seen[start.0] {
            continue;
        }
        seen[start.0] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in graph.neighbors(v) {
                if is_black(u) && !seen[u.0] {
                    seen[u.0] = true;
                    comp.push(u);
                    stack.push(u);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

/// Every black component as an ordered chain, or the first violation.
pub fn check_log_terminal(graph: &VisibleGraph) -> std::result::Result<Vec<Chain>, Violation> {
    if let Some(v) = graph.ids().find(|&v| graph.color(v) == Color::Unresolved) {
        return Err(Violation::Unresolved(graph.name(v).to_string()));
    }
    let mut chains = Vec::new();
    for comp in black_components(graph) {
        let inner = |v: VertexId| -> Vec<VertexId> {
            graph
                .neighbors(v)
                .iter()
                .copied()
                .filter(|u| comp.binary_search(u).is_ok())
                .collect()
        };
        let degrees: Vec<usize> = comp.iter().map(|&v| inner(v).len()).collect();
        let ends: Vec<VertexId> = comp
            .iter()
            .zip(&degrees)
            .filter(|(_, &d)| d <= 1)
            .map(|(v, _)| *v)
            .collect();
        let is_path = degrees.iter().all(|&d| d <= 2) && (comp.len() == 1 || ends.len() == 2);
        if !is_path {
            return Err(Violation::NotAChain(
                comp.iter().map(|&v| graph.name(v).to_string()).collect(),
            ));
        }
        let mut order = vec![ends[0]];
        while order.len() < comp.len() {
            let last = *order.last().expect("nonempty");
            let prev = order.len().checked_sub(2).map(|i| order[i]);
            let next = inner(last)
                .into_iter()
                .find(|&u| Some(u) != prev)
                .expect("path continues");
            order.push(next);
        }
        let marks = order.iter().map(|&v| graph.vertex(v).mark).collect();
        chains.push(Chain { vertices: order, marks });
    }
    Ok(chains)
}

fn boundary_contact(graph: &VisibleGraph, v: VertexId) -> i64 {
    match graph.boundary() {
        Some(b) if graph.adjacent(v, b) => 1,
        _ => 0,
    }
}

/// Right-hand side `2 - mark - [adjacent to boundary]` of the equation of `v`.
fn rhs(graph: &VisibleGraph, v: VertexId) -> Rational {
    let m = graph.vertex(v).mark;
    Rational::from_integer(BigInt::from(2 - m - boundary_contact(graph, v)))
}

/// Solve the discrepancy system chain by chain with the tridiagonal
/// recurrence.
pub fn solve_discrepancies(graph: &VisibleGraph) -> Result<DiscrepancyVector> {
    let chains = check_log_terminal(graph).map_err(|v| Error::InvalidArgument(v.to_string()))?;
    let mut out = BTreeMap::new();
    for chain in &chains {
        let r: Vec<Rational> = chain.vertices.iter().map(|&v| rhs(graph, v)).collect();
        let b = solve_chain(&chain.marks, &r)?;
        for (v, bj) in chain.vertices.iter().zip(b) {
            out.insert(*v, bj);
        }
    }
    Ok(DiscrepancyVector { values: out })
}

/// Solve `-a_j b_j + b_{j-1} + b_{j+1} = r_j` along a chain with marks `a`.
pub fn solve_chain(marks: &[i64], r: &[Rational]) -> Result<Vec<Rational>> {
    let k = marks.len();
    if r.len() != k {
        return Err(Error::InvalidArgument(
            "chain and right-hand side differ in length".into(),
        ));
    }
    let mut c_prime: Vec<Rational> = Vec::with_capacity(k);
    let mut d_prime: Vec<Rational> = Vec::with_capacity(k);
    for j in 0..k {
        let diag = Rational::from_integer(BigInt::from(-marks[j]));
        let (denom, d) = if j == 0 {
            (diag, r[0].clone())
        } else {
            (diag - &c_prime[j - 1], &r[j] - &d_prime[j - 1])
        };
        if denom.is_zero() {
            return Err(Error::Singular);
        }
        c_prime.push(Rational::one() / &denom);
        d_prime.push(d / denom);
    }
    let mut b = vec![Rational::zero(); k];
    for j in (0..k).rev() {
        b[j] = if j + 1 == k {
            d_prime[j].clone()
        } else {
            &d_prime[j] - &c_prime[j] * &b[j + 1]
        };
    }
    Ok(b)
}

/// Solve the whole system at once by dense elimination. Works for any black
/// configuration with a nonsingular intersection matrix.
pub fn solve_discrepancies_dense(graph: &VisibleGraph) -> Result<DiscrepancyVector> {
    let blacks = graph.blacks();
    let n = blacks.len();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for (i, &u) in blacks.iter().enumerate() {
        for (j, &v) in blacks.iter().enumerate() {
            m[i][j] = if i == j {
                Rational::from_integer(BigInt::from(-graph.vertex(u).mark))
            } else if graph.adjacent(u, v) {
                Rational::one()
            } else {
                Rational::zero()
            };
        }
    }
    let r: Vec<Rational> = blacks.iter().map(|&v| rhs(graph, v)).collect();
    let x = linalg::solve(&m, &r)?;
    Ok(blacks.into_iter().zip(x).collect())
}

/// Residual of the equation of every black vertex.
pub fn residuals(graph: &VisibleGraph, b: &DiscrepancyVector) -> Vec<(VertexId, Rational)> {
    graph
        .blacks()
        .into_iter()
        .map(|j| {
            let mut lhs = -Rational::from_integer(BigInt::from(graph.vertex(j).mark)) * b.at(j);
            for &i in graph.neighbors(j) {
                lhs += b.at(i);
            }
            (j, lhs - rhs(graph, j))
        })
        .collect()
}

/// `d_k` of the recurrence `d_0 = 1, d_1 = a_1, d_j = a_j d_{j-1} - d_{j-2}`.
pub fn chain_determinant(marks: &[i64]) -> BigInt {
    let (mut prev, mut cur) = (BigInt::one(), BigInt::one());
    for (j, &a) in marks.iter().enumerate() {
        let next = if j == 0 {
            BigInt::from(a)
        } else {
            BigInt::from(a) * &cur - &prev
        };
        prev = cur;
        cur = next;
    }
    cur
}

/// `Σ (1 - 1/m_i)`.
pub fn orbifold_defect(determinants: &[BigInt]) -> Result<Rational> {
    let mut acc = Rational::zero();
    for m in determinants {
        if !m.is_positive() {
            return Err(Error::InvalidArgument(format!("determinant {m} is not positive")));
        }
        acc += Rational::one() - Rational::new(BigInt::one(), m.clone());
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn base_graph_has_no_blacks() {
        let g = VisibleGraph::new_base([0, 1, 1, 1].map(int), None).unwrap();
        assert!(black_components(&g).is_empty());
        // corners with mark -1 and no boundary are unresolved
        assert!(matches!(check_log_terminal(&g), Err(Violation::Unresolved(_))));
    }

    #[test]
    fn isolated_mark_three() {
        assert_eq!(solve_chain(&[3], &[int(-1)]).unwrap(), vec![frac(1, 3)]);
        // next to the boundary: -3 b = 2 - 3 - 1
        assert_eq!(solve_chain(&[3], &[int(-2)]).unwrap(), vec![frac(2, 3)]);
        assert_eq!(
            solve_chain(&[2, 2, 2], &[int(0), int(0), int(0)]).unwrap(),
            vec![int(0); 3]
        );
    }

    #[test]
    fn chains_of_the_78_pair() {
        let g = crate::format::parse(include_str!("../../../fixtures/p78.graph")).unwrap();
        let chains = check_log_terminal(&g).unwrap();
        let mut marks: Vec<Vec<i64>> = chains.iter().map(|c| c.marks.clone()).collect();
        for m in marks.iter_mut() {
            if m.first() > m.last() {
                m.reverse();
            }
        }
        marks.sort();
        assert_eq!(marks, vec![vec![2], vec![2, 2], vec![2, 2, 2, 2, 2, 3]]);
        let b = solve_discrepancies(&g).unwrap();
        assert_eq!(b, solve_discrepancies_dense(&g).unwrap());
        assert!(residuals(&g, &b).iter().all(|(_, r)| r.is_zero()));
        assert_eq!(b.at(g.id("x2").unwrap()), frac(1, 2));
        assert_eq!(b.at(g.id("C").unwrap()), frac(12, 13));
    }

    #[test]
    fn star_is_not_a_chain() {
        let g = VisibleGraph::new_base([1, 1, 1, 1].map(int), None).unwrap();
        let mut g = g;
        for (a, b, n) in [
            ("L0", "L1", "a"),
            ("L0", "L2", "b"),
            ("L0", "L3", "c"),
            ("L1", "L2", "d"),
            ("L1", "L3", "e"),
            ("L2", "L3", "f"),
        ] {
            g = g.insert(a, b, n).unwrap();
        }
        // whites a, b, c next to L0 turn black, giving a star around L0
        for (a, b, n) in [("a", "L1", "a2"), ("b", "L2", "b2"), ("c", "L3", "c2")] {
            g = g.insert(a, b, n).unwrap();
        }
        match check_log_terminal(&g) {
            Err(Violation::NotAChain(vs)) => assert!(vs.contains(&"L0".to_string())),
            other => panic!("expected a star, got {other:?}"),
        }
    }

    #[test]
    fn determinants() {
        assert_eq!(chain_determinant(&[2, 6]), 11.into());
        assert_eq!(chain_determinant(&[2, 3, 2, 2]), 11.into());
        assert_eq!(chain_determinant(&[2, 2, 2, 2, 10, 2]), 87.into());
        assert_eq!(chain_determinant(&[2, 2, 2, 2, 2, 2, 2, 2, 2, 4, 2, 2]), 73.into());
        assert_eq!(chain_determinant(&[]), 1.into());
    }

    #[test]
    fn orbifold_sums() {
        assert_eq!(orbifold_defect(&[]).unwrap(), int(0));
        assert_eq!(orbifold_defect(&[2, 2, 2].map(BigInt::from)).unwrap(), frac(3, 2));
        let s = orbifold_defect(&[11, 61, 73, 2].map(BigInt::from)).unwrap();
        assert!(s > int(3));
        assert!(orbifold_defect(&[BigInt::from(0)]).is_err());
    }
}
