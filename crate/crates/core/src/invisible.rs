//! Integral classes `D = d H - Σ m_i F_i` of arithmetic genus zero that are
//! orthogonal to the pulled-back (log) canonical class. Such a class is a
//! lattice candidate for a curve contracted by the canonical model; whether
//! an actual curve exists is not decided here.
//!
//! The pulled-back class is written through the weights as
//! `Σ_v (δ_v - d_v) V` over visible curves, where `d_v = 1 - w_v / n`,
//! `δ_v = b_v` on black curves, 1 on the boundary and 0 on whites. A
//! candidate must meet every curve with positive coefficient trivially and
//! every other visible curve nonnegatively.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{Color, Origin, VertexId, VisibleGraph};
use crate::lattice::{log_pullback, DivisorClass};
use crate::rational::Rational;
use crate::singularity::DiscrepancyVector;
use crate::volume::kc_degree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateClass {
    pub d: i64,
    /// Multiplicity at each blowup, by insertion index.
    pub m: Vec<i64>,
    pub class: DivisorClass,
    pub self_int: i64,
    pub k_int: i64,
    /// Visible curves met with nonzero intersection number.
    pub intersections: Vec<(VertexId, i64)>,
}

/// Coefficient of each visible curve in the weight expression of the
/// pulled-back class. Needs a positive weight sum.
pub fn pullback_coefficients(graph: &VisibleGraph, b: &DiscrepancyVector) -> Result<Vec<Rational>> {
    let n: Rational = graph.weight_sum();
    if !n.is_positive() {
        return Err(Error::InvalidArgument(format!("weight sum {n} is not positive")));
    }
    Ok(graph
        .ids()
        .map(|v| {
            let d = Rational::from_integer(1.into()) - &graph.vertex(v).weight / &n;
            let delta = match graph.color(v) {
                Color::Boundary => Rational::from_integer(1.into()),
                Color::Black => b.at(v),
                _ => Rational::zero(),
            };
            delta - d
        })
        .collect())
}

/// Visible curves with positive coefficient in the weight expression.
pub fn support(graph: &VisibleGraph, b: &DiscrepancyVector) -> Result<Vec<VertexId>> {
    Ok(pullback_coefficients(graph, b)?
        .into_iter()
        .enumerate()
        .filter(|(_, c)| c.is_positive())
        .map(|(i, _)| VertexId(i))
        .collect())
}

struct Ctx<'a> {
    graph: &'a VisibleGraph,
    /// For each insertion index, the insertion indices of its children.
    children: Vec<Vec<usize>>,
    /// For each corner, the insertion indices of its children.
    corner_children: [Vec<usize>; 4],
    /// Vertex id of each insertion.
    vertex_of: Vec<VertexId>,
    in_support: Vec<bool>,
    lp: DivisorClass,
}

pub fn search_orthogonal(graph: &VisibleGraph, b: &DiscrepancyVector, d_max: i64) -> Result<Vec<CandidateClass>> {
    if d_max < 1 {
        return Err(Error::InvalidArgument("d_max must be at least 1".into()));
    }
    let n = graph.blowups();
    let mut children = vec![Vec::new(); n];
    let mut corner_children: [Vec<usize>; 4] = Default::default();
    for (i, ins) in graph.history().iter().enumerate() {
        for p in [ins.left, ins.right] {
            match graph.vertex(p).origin {
                Origin::Corner(k) => corner_children[k].push(i),
                Origin::Inserted(j) => children[j].push(i),
            }
        }
    }
    let mut in_support = vec![false; graph.vertices().len()];
    for v in support(graph, b)? {
        in_support[v.0] = true;
    }
    let ctx = Ctx {
        graph,
        children,
        corner_children,
        vertex_of: graph.history().iter().map(|ins| ins.new).collect(),
        in_support,
        lp: log_pullback(graph, b)?,
    };
    let mut out = Vec::new();
    for d in 1..=d_max {
        let genus_budget = (d - 1) * (d - 2);
        let mut m = vec![0i64; n];
        ctx.dfs(d, n, genus_budget, &mut m, &mut out);
    }
    Ok(out)
}

impl Ctx<'_> {
    /// Assign `m[i]` for `i < remaining`, in reverse creation order so that
    /// all children of a curve are known when the curve is reached.
    fn dfs(&self, d: i64, remaining: usize, genus_left: i64, m: &mut Vec<i64>, out: &mut Vec<CandidateClass>) {
        if remaining == 0 {
            if genus_left == 0 {
                self.finish(d, m, out);
            }
            return;
        }
        let i = remaining - 1;
        let v = self.vertex_of[i];
        let below: i64 = self.children[i].iter().map(|&c| m[c]).sum();
        let range = if self.in_support[v.0] {
            below..=below
        } else {
            below..=2 * d
        };
        for x in range {
            if x > 2 * d {
                break;
            }
            let cost = x * (x - 1);
            if cost > genus_left {
                break;
            }
            m[i] = x;
            // corners need Σ m over their children <= d
            let ok = (0..4).all(|k| {
                let kids = &self.corner_children[k];
                if !kids.contains(&i) {
                    return true;
                }
                kids.iter().filter(|&&c| c >= i).map(|&c| m[c]).sum::<i64>() <= d
            });
            if ok {
                self.dfs(d, remaining - 1, genus_left - cost, m, out);
            }
        }
        m[i] = 0;
    }

    fn finish(&self, d: i64, m: &[i64], out: &mut Vec<CandidateClass>) {
        let g = self.graph;
        // corner constraints
        for k in 0..4 {
            let v = g.corner(k);
            let dot = d - self.corner_children[k].iter().map(|&c| m[c]).sum::<i64>();
            if dot < 0 || (self.in_support[v.0] && dot != 0) {
                return;
            }
        }
        let content = m.iter().fold(d, |acc, &x| acc.gcd(&x));
        if content != 1 {
            return;
        }
        let mr: Vec<Rational> = m.iter().map(|&x| Rational::from_integer(x.into())).collect();
        let class = DivisorClass::from_multiplicities(Rational::from_integer(d.into()), &mr);
        if !class.pairing(&self.lp).expect("same lattice").is_zero() {
            return;
        }
        let mut intersections = Vec::new();
        for v in g.ids() {
            let dot = match g.vertex(v).origin {
                Origin::Corner(k) => d - self.corner_children[k].iter().map(|&c| m[c]).sum::<i64>(),
                Origin::Inserted(i) => m[i] - self.children[i].iter().map(|&c| m[c]).sum::<i64>(),
            };
            if dot != 0 {
                intersections.push((v, dot));
            }
        }
        // a visible curve is not a candidate
        if intersections.iter().any(|&(_, x)| x < 0) {
            return;
        }
        let sq: i64 = d * d - m.iter().map(|x| x * x).sum::<i64>();
        let k: i64 = -3 * d + m.iter().sum::<i64>();
        debug_assert_eq!(sq + k, -2);
        debug_assert_eq!(class.square().to_integer().to_i64(), Some(sq));
        out.push(CandidateClass {
            d,
            m: m.to_vec(),
            class,
            self_int: sq,
            k_int: k,
            intersections,
        });
    }
}

/// True when `C` has degree zero, so contracting it keeps the volume.
pub fn crepant_check(graph: &VisibleGraph, b: &DiscrepancyVector, c: VertexId) -> Result<bool> {
    Ok(kc_degree(graph, b, c)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse;
    use crate::singularity::solve_discrepancies;

    #[test]
    fn d_max_must_be_positive() {
        let g = parse(include_str!("../../../fixtures/p78.graph")).unwrap();
        let b = solve_discrepancies(&g).unwrap();
        assert!(search_orthogonal(&g, &b, 0).is_err());
    }

    #[test]
    fn support_on_the_78_pair_contains_the_boundary() {
        let g = parse(include_str!("../../../fixtures/p78.graph")).unwrap();
        let b = solve_discrepancies(&g).unwrap();
        let s = support(&g, &b).unwrap();
        assert!(s.contains(&g.boundary().unwrap()));
        // the expression reproduces the class on every visible curve
        let coeffs = pullback_coefficients(&g, &b).unwrap();
        let classes = crate::lattice::visible_classes(&g);
        let lp = log_pullback(&g, &b).unwrap();
        for c in &classes {
            let via: Rational = coeffs
                .iter()
                .zip(&classes)
                .map(|(x, v)| x * v.pairing(c).unwrap())
                .sum();
            assert_eq!(via, lp.pairing(c).unwrap());
        }
    }

    #[test]
    fn positive_degree_whites_are_not_crepant() {
        let g = parse(include_str!("../../../fixtures/p462a.graph")).unwrap();
        let b = solve_discrepancies(&g).unwrap();
        let w = g.id("F13_11").unwrap();
        assert!(!crepant_check(&g, &b, w).unwrap());
        assert!(crepant_check(&g, &b, g.id("F13_4").unwrap()).is_err());
    }
}
