//! Blowup histories on a single edge, encoded through the Stern-Brocot tree.
//!
//! On the edge between corners `a` (weight `w_a`) and `b` (weight `w_b`)
//! every inserted curve has weight `m1 * w_a + m2 * w_b` for a coprime pair
//! `(m1, m2)`. The corners themselves are `1/0` and `0/1`, and a curve
//! inserted between `p/q` and `r/s` is their mediant. The final chain on the
//! edge depends only on the *set* of inserted fractions, which is an
//! ancestor-closed subtree of the Stern-Brocot tree; its leaves are exactly
//! the white curves.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SbNode {
    pub m1: u64,
    pub m2: u64,
}

impl SbNode {
    /// The corner `a`.
    pub const START: SbNode = SbNode { m1: 1, m2: 0 };
    /// The corner `b`.
    pub const END: SbNode = SbNode { m1: 0, m2: 1 };
    pub const ROOT: SbNode = SbNode { m1: 1, m2: 1 };

    pub fn new(m1: u64, m2: u64) -> Self {
        Self { m1, m2 }
    }

    pub fn mediant(self, other: SbNode) -> SbNode {
        SbNode::new(self.m1 + other.m1, self.m2 + other.m2)
    }

    pub fn weight(self, wa: &Rational, wb: &Rational) -> Rational {
        wa * Rational::from_integer(BigInt::from(self.m1)) + wb * Rational::from_integer(BigInt::from(self.m2))
    }

    /// The two neighbours this node was inserted between, found by descending
    /// from the root. Panics on `1/0`, `0/1` and non-coprime pairs.
    pub fn parents(self) -> (SbNode, SbNode) {
        let (mut lo, mut hi) = (Self::START, Self::END);
        loop {
            let mid = lo.mediant(hi);
            match position_cmp(self, mid) {
                Ordering::Equal => return (lo, hi),
                Ordering::Less => hi = mid,
                Ordering::Greater => lo = mid,
            }
            assert!(
                mid.m1 + mid.m2 <= self.m1 + self.m2,
                "{self:?} is not a Stern-Brocot node"
            );
        }
    }
}

/// Order along the edge walking from `a` to `b`: `Less` means `x` comes
/// first (closer to `a`, i.e. larger `m1/m2`).
fn position_cmp(x: SbNode, y: SbNode) -> Ordering {
    let lhs = x.m1 as u128 * y.m2 as u128;
    let rhs = y.m1 as u128 * x.m2 as u128;
    rhs.cmp(&lhs)
}

/// The set of curves inserted on one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePattern {
    /// Preorder: parents before children, so this is a valid blowup order.
    nodes: Vec<SbNode>,
    /// Leaves whose weight is one above the target (step-up whites).
    steps: u8,
}

impl EdgePattern {
    pub fn empty() -> Self {
        Self {
            nodes: Vec::new(),
            steps: 0,
        }
    }

    /// Build from any ancestor-closed set of nodes.
    pub fn from_nodes(nodes: &[SbNode]) -> Self {
        let mut sorted: Vec<SbNode> = nodes.to_vec();
        sorted.sort_by_key(|n| (n.m1 + n.m2, n.m1));
        sorted.dedup();
        // depth-first reorder so that each node follows both parents
        let set: std::collections::HashSet<SbNode> = sorted.iter().copied().collect();
        let mut pre = Vec::with_capacity(sorted.len());
        fn walk(n: SbNode, lo: SbNode, hi: SbNode, set: &std::collections::HashSet<SbNode>, out: &mut Vec<SbNode>) {
            if !set.contains(&n) {
                return;
            }
            out.push(n);
            walk(lo.mediant(n), lo, n, set, out);
            walk(n.mediant(hi), n, hi, set, out);
        }
        walk(SbNode::ROOT, SbNode::START, SbNode::END, &set, &mut pre);
        assert_eq!(pre.len(), sorted.len(), "node set is not ancestor-closed");
        Self { nodes: pre, steps: 0 }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[SbNode] {
        &self.nodes
    }

    pub fn steps(&self) -> u8 {
        self.steps
    }

    /// `(new, left, right)` triples in a valid blowup order.
    pub fn insertion_order(&self) -> Vec<(SbNode, SbNode, SbNode)> {
        self.nodes
            .iter()
            .map(|&n| {
                let (l, r) = n.parents();
                (n, l, r)
            })
            .collect()
    }

    /// Interior of the edge, walking from `a` to `b`.
    pub fn path(&self) -> Vec<SbNode> {
        let mut p = self.nodes.clone();
        p.sort_by(|x, y| position_cmp(*x, *y));
        p
    }

    /// Leaves of the subtree: the white curves of this edge.
    pub fn leaves(&self) -> Vec<SbNode> {
        let marks = self.marks();
        self.path().into_iter().filter(|n| marks(n) == 1).collect()
    }

    /// Mark of every inserted node, plus the increments `(a, b)` received
    /// by the two corners.
    pub fn marks_and_increments(&self) -> (Vec<(SbNode, i64)>, (i64, i64)) {
        let mut counts: std::collections::HashMap<SbNode, i64> = self.nodes.iter().map(|&n| (n, 1)).collect();
        let (mut inc_a, mut inc_b) = (0, 0);
        for &n in &self.nodes {
            let (l, r) = n.parents();
            for p in [l, r] {
                if p == SbNode::START {
                    inc_a += 1;
                } else if p == SbNode::END {
                    inc_b += 1;
                } else {
                    *counts.get_mut(&p).expect("parents are present") += 1;
                }
            }
        }
        let marks = self.path().into_iter().map(|n| (n, counts[&n])).collect();
        (marks, (inc_a, inc_b))
    }

    fn marks(&self) -> impl Fn(&SbNode) -> i64 {
        let (m, _) = self.marks_and_increments();
        let map: std::collections::HashMap<SbNode, i64> = m.into_iter().collect();
        move |n| map[n]
    }
}

/// Which leaves an enumeration accepts.
#[derive(Debug, Clone)]
pub enum LeafRule {
    /// Every white has weight exactly `n`.
    Exact { n: Rational },
    /// Every white has weight `n`, except exactly one of weight `n + 1`.
    StepUp { n: Rational },
    /// Every white has weight at least `n`.
    AtLeast { n: Rational },
}

/// All blowup patterns on one edge with at most `max_insertions` curves
/// whose whites obey `rule`. The empty pattern is included unless the rule
/// requires a step-up white.
pub fn enumerate_edge(wa: &Rational, wb: &Rational, rule: &LeafRule, max_insertions: usize) -> Vec<EdgePattern> {
    let (target, max_steps, at_least) = match rule {
        LeafRule::Exact { n } => (n.clone(), 0u8, false),
        LeafRule::StepUp { n } => (n.clone(), 1u8, false),
        LeafRule::AtLeast { n } => (n.clone(), 0u8, true),
    };
    let one = Rational::from_integer(1.into());
    let step = &target + &one;
    let nonneg = !wa.is_negative() && !wb.is_negative();
    let ctx = Ctx {
        wa,
        wb,
        target: &target,
        step: &step,
        max_steps,
        at_least,
        nonneg,
    };
    let mut out: Vec<EdgePattern> = Vec::new();
    if max_steps == 0 {
        out.push(EdgePattern::empty());
    }
    for sub in ctx.rec(SbNode::ROOT, SbNode::START, SbNode::END, max_insertions) {
        if sub.steps == max_steps {
            out.push(EdgePattern {
                nodes: sub.nodes,
                steps: sub.steps,
            });
        }
    }
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.nodes.cmp(&y.nodes)));
    out
}

/// Patterns on one edge whose whites all have weight exactly `n`.
pub fn cy_edge_enumerate(wa: &Rational, wb: &Rational, n: &Rational, max_insertions: usize) -> Vec<EdgePattern> {
    enumerate_edge(wa, wb, &LeafRule::Exact { n: n.clone() }, max_insertions)
}

struct Sub {
    nodes: Vec<SbNode>,
    steps: u8,
}

struct Ctx<'a> {
    wa: &'a Rational,
    wb: &'a Rational,
    target: &'a Rational,
    step: &'a Rational,
    max_steps: u8,
    at_least: bool,
    nonneg: bool,
}

impl Ctx<'_> {
    fn rec(&self, node: SbNode, lo: SbNode, hi: SbNode, budget: usize) -> Vec<Sub> {
        if budget == 0 {
            return Vec::new();
        }
        let w = node.weight(self.wa, self.wb);
        let mut out = Vec::new();
        if self.at_least {
            if &w >= self.target {
                out.push(Sub {
                    nodes: vec![node],
                    steps: 0,
                });
            }
        } else if &w == self.target {
            out.push(Sub {
                nodes: vec![node],
                steps: 0,
            });
        } else if self.max_steps > 0 && &w == self.step {
            out.push(Sub {
                nodes: vec![node],
                steps: 1,
            });
        }
        // with nonnegative corner weights, weights never decrease downwards
        let cap = if self.max_steps > 0 { self.step } else { self.target };
        if !self.at_least && self.nonneg && &w >= cap {
            return out;
        }
        if budget < 2 {
            return out;
        }
        let left = self.rec(lo.mediant(node), lo, node, budget - 1);
        let right = self.rec(node.mediant(hi), node, hi, budget - 1);
        for l in &left {
            out.push(join(node, Some(l), None));
        }
        for r in &right {
            out.push(join(node, None, Some(r)));
        }
        for l in &left {
            for r in &right {
                if 1 + l.nodes.len() + r.nodes.len() <= budget && l.steps + r.steps <= self.max_steps {
                    out.push(join(node, Some(l), Some(r)));
                }
            }
        }
        out
    }
}

fn join(node: SbNode, l: Option<&Sub>, r: Option<&Sub>) -> Sub {
    let mut nodes = vec![node];
    let mut steps = 0;
    for s in [l, r].into_iter().flatten() {
        nodes.extend_from_slice(&s.nodes);
        steps += s.steps;
    }
    Sub { nodes, steps }
}
