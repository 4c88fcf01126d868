//! Degrees of the (log) canonical class on visible curves, volumes, the
//! weight conditions and the certification pipeline.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{Color, VertexId, VisibleGraph, CORNERS};
use crate::lattice::log_pullback;
use crate::linalg::{fourier_motzkin, Inequality};
use crate::rational::{format_rational, Rational};
use crate::singularity::{check_log_terminal, solve_discrepancies, DiscrepancyVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    pub w: [Rational; CORNERS],
}

impl WeightSystem {
    pub fn new(w: [Rational; CORNERS]) -> Self {
        Self { w }
    }

    pub fn from_ints(w: [i64; CORNERS]) -> Self {
        Self {
            w: w.map(|x| Rational::from_integer(x.into())),
        }
    }

    pub fn of(graph: &VisibleGraph) -> Self {
        Self {
            w: graph.weights().clone(),
        }
    }

    pub fn n(&self) -> Rational {
        self.w.iter().sum()
    }

    /// `1 - w_k / n`, the coefficient of the `k`-th line.
    pub fn d(&self, k: usize) -> Rational {
        Rational::one() - &self.w[k] / self.n()
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.w.iter().map(format_rational).collect();
        f.write_str(&ws.join(","))
    }
}

/// Ordered so that `NotCertified < BigNef < AmpleCertified`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    NotCertified,
    BigNef,
    AmpleCertified,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::NotCertified => "not_certified",
            Status::BigNef => "big_nef",
            Status::AmpleCertified => "ample_certified",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NearCy {
    /// Every white has weight `n` and the boundary, if any, has weight 0.
    AllCy,
    /// As `AllCy` except for a single white of weight `n + 1`.
    OneStep(VertexId),
    /// Every white has weight `n` and the boundary has weight 1.
    BoundaryUnit,
    General,
}

impl NearCy {
    pub fn tag(&self) -> &'static str {
        match self {
            NearCy::AllCy => "all_cy",
            NearCy::OneStep(_) => "one_step",
            NearCy::BoundaryUnit => "boundary_unit",
            NearCy::General => "general",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightViolation {
    NonPositiveSum(Rational),
    White { vertex: String, weight: Rational },
    Boundary(Rational),
}

impl fmt::Display for WeightViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightViolation::NonPositiveSum(n) => write!(f, "weight sum {} is not positive", format_rational(n)),
            WeightViolation::White { vertex, weight } => {
                write!(f, "white {vertex} has weight {}", format_rational(weight))
            }
            WeightViolation::Boundary(w) => write!(f, "boundary weight {}", format_rational(w)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Singularity {
    pub vertices: Vec<String>,
    pub chain: Vec<i64>,
    pub det: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceReport {
    /// Absent when the configuration is not log canonical.
    pub volume: Option<Rational>,
    pub rho: i64,
    pub blowups: usize,
    pub singularities: Vec<Singularity>,
    pub epsilon1: Option<Rational>,
    pub delta1: Option<Rational>,
    pub status: Status,
    pub near_cy: NearCy,
    pub near_cy_vertex: Option<String>,
    pub n: Rational,
    /// False for log canonical configurations with some `b_i = 1`.
    pub log_terminal: bool,
    pub reasons: Vec<String>,
}

fn rational_json(r: &Rational) -> Value {
    let num = |x: &BigInt| x.to_i64().map_or_else(|| json!(x.to_string()), |v| json!(v));
    json!({ "num": num(r.numer()), "den": num(r.denom()) })
}

impl SurfaceReport {
    pub fn to_json(&self) -> Value {
        let opt = |r: &Option<Rational>| r.as_ref().map_or(Value::Null, rational_json);
        let near = match &self.near_cy_vertex {
            Some(v) => format!("{}({v})", self.near_cy.tag()),
            None => self.near_cy.tag().to_string(),
        };
        json!({
            "volume": opt(&self.volume),
            "rho": self.rho,
            "blowups": self.blowups,
            "singularities": self.singularities.iter().map(|s| json!({
                "chain": s.chain,
                "det": s.det.to_i64().map_or_else(|| json!(s.det.to_string()), |v| json!(v)),
            })).collect::<Vec<_>>(),
            "epsilon1": opt(&self.epsilon1),
            "delta1": opt(&self.delta1),
            "status": self.status.to_string(),
            "near_cy": near,
            "n": rational_json(&self.n),
            "log_terminal": self.log_terminal,
            "reasons": self.reasons,
        })
    }
}

impl fmt::Display for SurfaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |r: &Option<Rational>| r.as_ref().map_or("-".to_string(), format_rational);
        writeln!(f, "status: {}", self.status)?;
        writeln!(f, "volume: {}", opt(&self.volume))?;
        writeln!(f, "n: {}", format_rational(&self.n))?;
        writeln!(f, "rho: {}", self.rho)?;
        writeln!(f, "blowups: {}", self.blowups)?;
        for s in &self.singularities {
            let ms: Vec<String> = s.chain.iter().map(|m| m.to_string()).collect();
            writeln!(f, "singularity: [{}] det {}", ms.join(","), s.det)?;
        }
        writeln!(f, "epsilon1: {}", opt(&self.epsilon1))?;
        writeln!(f, "delta1: {}", opt(&self.delta1))?;
        match &self.near_cy_vertex {
            Some(v) => writeln!(f, "near_cy: {} ({v})", self.near_cy.tag())?,
            None => writeln!(f, "near_cy: {}", self.near_cy.tag())?,
        }
        if !self.log_terminal {
            writeln!(f, "log canonical, not log terminal")?;
        }
        for r in &self.reasons {
            writeln!(f, "reason: {r}")?;
        }
        Ok(())
    }
}

/// `(K + Δ) · C` for a white curve `C`.
pub fn kc_degree(graph: &VisibleGraph, b: &DiscrepancyVector, c: VertexId) -> Result<Rational> {
    if graph.color(c) != Color::White {
        return Err(Error::NotWhite(graph.name(c).to_string()));
    }
    let mut acc = -Rational::one();
    for &u in graph.neighbors(c) {
        match graph.color(u) {
            Color::Boundary => acc += Rational::one(),
            Color::Black => acc += b.at(u),
            _ => {}
        }
    }
    Ok(acc)
}

/// `(K + B) · B` for the boundary curve.
pub fn epsilon1(graph: &VisibleGraph, b: &DiscrepancyVector) -> Result<Rational> {
    let bd = graph.boundary().ok_or(Error::NoBoundary)?;
    let mut acc = Rational::from_integer((-2).into());
    for &u in graph.neighbors(bd) {
        acc += b.at(u);
    }
    Ok(acc)
}

/// `(K + Δ)²` from marks and discrepancies alone.
pub fn volume(graph: &VisibleGraph, b: &DiscrepancyVector) -> Rational {
    let mut v = Rational::from_integer(BigInt::from(9 - graph.blowups() as i64));
    for (i, bi) in b.iter() {
        v += bi * Rational::from_integer((graph.vertex(i).mark - 2).into());
    }
    if let Some(bd) = graph.boundary() {
        v += Rational::from_integer((graph.vertex(bd).mark - 2).into());
        v += epsilon1(graph, b).expect("boundary present");
    }
    v
}

/// `(K + Δ)²` computed in the Picard lattice.
pub fn volume_lattice(graph: &VisibleGraph, b: &DiscrepancyVector) -> Result<Rational> {
    Ok(log_pullback(graph, b)?.square())
}

fn weight_under(graph: &VisibleGraph, v: VertexId, ws: &WeightSystem) -> Rational {
    graph
        .vertex(v)
        .coords
        .iter()
        .zip(&ws.w)
        .fold(Rational::zero(), |acc, (&c, w)| {
            acc + w * Rational::from_integer(c.into())
        })
}

pub fn check_weights(
    graph: &VisibleGraph,
    ws: &WeightSystem,
    strict: bool,
) -> std::result::Result<(), Vec<WeightViolation>> {
    let n = ws.n();
    let ok = |x: &Rational, bound: &Rational| if strict { x > bound } else { x >= bound };
    let mut bad = Vec::new();
    if !n.is_positive() {
        bad.push(WeightViolation::NonPositiveSum(n.clone()));
    }
    for v in graph.whites() {
        let w = weight_under(graph, v, ws);
        if !ok(&w, &n) {
            bad.push(WeightViolation::White {
                vertex: graph.name(v).to_string(),
                weight: w,
            });
        }
    }
    if let Some(k) = graph.boundary_index() {
        if !ok(&ws.w[k], &Rational::zero()) {
            bad.push(WeightViolation::Boundary(ws.w[k].clone()));
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

pub fn classify_near_cy(graph: &VisibleGraph, ws: &WeightSystem) -> NearCy {
    let n = ws.n();
    if !n.is_positive() {
        return NearCy::General;
    }
    let off: Vec<(VertexId, Rational)> = graph
        .whites()
        .into_iter()
        .map(|v| (v, weight_under(graph, v, ws)))
        .filter(|(_, w)| *w != n)
        .collect();
    let w0 = graph.boundary_index().map(|k| ws.w[k].clone());
    let no_boundary_weight = w0.as_ref().is_none_or(|w| w.is_zero());
    match off.as_slice() {
        [] if no_boundary_weight => NearCy::AllCy,
        [] if w0.as_ref().is_some_and(|w| w.is_one()) => NearCy::BoundaryUnit,
        [(v, w)] if no_boundary_weight && *w == &n + Rational::one() => NearCy::OneStep(*v),
        _ => NearCy::General,
    }
}

/// `1/n` in the boundary-unit case, otherwise not computed.
pub fn delta1(graph: &VisibleGraph, ws: &WeightSystem) -> Option<Rational> {
    match classify_near_cy(graph, ws) {
        NearCy::BoundaryUnit => Some(ws.n().recip()),
        _ => None,
    }
}

pub fn certify(graph: &VisibleGraph, ws: &WeightSystem) -> SurfaceReport {
    let g = if graph.weights() == &ws.w {
        graph.clone()
    } else {
        graph.with_weights(ws.w.clone())
    };
    let n = ws.n();
    let near_cy = classify_near_cy(&g, ws);
    let mut report = SurfaceReport {
        volume: None,
        rho: 1 + g.blowups() as i64 - g.blacks().len() as i64,
        blowups: g.blowups(),
        singularities: Vec::new(),
        epsilon1: None,
        delta1: delta1(&g, ws),
        status: Status::NotCertified,
        near_cy,
        near_cy_vertex: match near_cy {
            NearCy::OneStep(v) => Some(g.name(v).to_string()),
            _ => None,
        },
        n: n.clone(),
        log_terminal: false,
        reasons: Vec::new(),
    };
    let chains = match check_log_terminal(&g) {
        Ok(c) => c,
        Err(v) => {
            report.reasons.push(v.to_string());
            return report;
        }
    };
    report.singularities = chains
        .iter()
        .map(|c| Singularity {
            vertices: c.vertices.iter().map(|&v| g.name(v).to_string()).collect(),
            chain: c.marks.clone(),
            det: c.determinant(),
        })
        .collect();
    let b = solve_discrepancies(&g).expect("chains are nonsingular");
    let one = Rational::one();
    if b.iter().any(|(_, x)| x > &one) {
        report.reasons.push("not log canonical: some b_i > 1".into());
        return report;
    }
    report.log_terminal = b.iter().all(|(_, x)| x < &one);
    let vol = volume(&g, &b);
    report.volume = Some(vol.clone());
    report.epsilon1 = g.boundary().map(|_| epsilon1(&g, &b).expect("boundary present"));

    let mut strict_ok = true;
    let mut weak_ok = true;
    let zero = Rational::zero();
    if !n.is_positive() {
        report
            .reasons
            .push(format!("n = {} is not positive", format_rational(&n)));
        weak_ok = false;
    }
    for c in g.whites() {
        let k = kc_degree(&g, &b, c).expect("white");
        if k < zero {
            report.reasons.push(format!(
                "negative degree {} on white {}",
                format_rational(&k),
                g.name(c)
            ));
            weak_ok = false;
        } else if k.is_zero() {
            strict_ok = false;
        }
    }
    // with epsilon1 = 0 the canonical model contracts the boundary
    if let Some(e) = report.epsilon1.as_ref().filter(|e| !e.is_positive()) {
        report
            .reasons
            .push(format!("epsilon1 = {} is not positive", format_rational(e)));
        weak_ok = false;
    }
    if !vol.is_positive() {
        report
            .reasons
            .push(format!("volume {} is not positive", format_rational(&vol)));
        weak_ok = false;
    }
    if let Err(v) = check_weights(&g, ws, false) {
        report.reasons.extend(v.iter().map(|x| x.to_string()));
        weak_ok = false;
    }
    if check_weights(&g, ws, true).is_err() {
        strict_ok = false;
    }
    report.status = match (weak_ok, strict_ok) {
        (true, true) => Status::AmpleCertified,
        (true, false) => Status::BigNef,
        _ => Status::NotCertified,
    };
    report
}

/// Weights satisfying the strict conditions of [`check_weights`], scaled to
/// coprime integers, if any exist.
pub fn find_ample_weights(graph: &VisibleGraph) -> Option<WeightSystem> {
    let one = Rational::one();
    let mut rows = Vec::new();
    // the conditions are homogeneous, so strict inequalities become >= 1
    for v in graph.whites() {
        let coeffs = graph
            .vertex(v)
            .coords
            .iter()
            .map(|&c| Rational::from_integer(c.into()) - &one)
            .collect();
        rows.push(Inequality::new(coeffs, one.clone()));
    }
    if let Some(k) = graph.boundary_index() {
        let mut coeffs = vec![Rational::zero(); CORNERS];
        coeffs[k] = one.clone();
        rows.push(Inequality::new(coeffs, one.clone()));
    }
    rows.push(Inequality::new(vec![one.clone(); CORNERS], one.clone()));
    let x = fourier_motzkin(&rows, CORNERS)?;
    let lcm = x.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = x
        .iter()
        .map(|r| (r * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let ws = WeightSystem::new(std::array::from_fn(|k| Rational::from_integer(&ints[k] / &gcd)));
    debug_assert!(check_weights(graph, &ws, true).is_ok());
    Some(ws)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn nonpositive_weight_sum_is_general() {
        let g = VisibleGraph::new_base([1, 0, 0, -1].map(int), Some(0)).unwrap();
        let r = certify(&g, &WeightSystem::of(&g));
        assert_eq!(r.near_cy, NearCy::General);
        assert_eq!(r.delta1, None);
    }

    #[test]
    fn base_graph_volume() {
        let g = VisibleGraph::new_base([1, 1, 1, 1].map(int), None).unwrap();
        let b = DiscrepancyVector::default();
        assert_eq!(volume(&g, &b), int(9));
        assert_eq!(volume_lattice(&g, &b).unwrap(), int(9));
        let r = certify(&g, &WeightSystem::of(&g));
        assert_eq!(r.status, Status::NotCertified);
    }

    #[test]
    fn the_78_pair() {
        let g = crate::format::parse(include_str!("../../../fixtures/p78.graph")).unwrap();
        let b = solve_discrepancies(&g).unwrap();
        assert_eq!(volume(&g, &b), frac(1, 78));
        assert_eq!(volume_lattice(&g, &b).unwrap(), frac(1, 78));
        assert_eq!(epsilon1(&g, &b).unwrap(), frac(7, 78));
        for c in g.whites() {
            assert!(kc_degree(&g, &b, c).unwrap() >= int(0));
        }
        assert!(matches!(kc_degree(&g, &b, VertexId(1)), Err(Error::NotWhite(_))));
        let r = certify(&g, &WeightSystem::of(&g));
        assert_eq!(r.status, Status::BigNef);
        assert_eq!(r.delta1, Some(frac(1, 7)));
        assert_eq!(r.rho, 1);
    }

    #[test]
    fn weight_conditions() {
        let g = VisibleGraph::new_base([1, 1, 1, 1].map(int), None).unwrap();
        let g = g.insert("L0", "L1", "x").unwrap();
        let ws = WeightSystem::from_ints([1, 2, 3, 5]);
        let err = check_weights(&g, &ws, false).unwrap_err();
        // x has weight 3 < 11 and the corners L2, L3 are still unresolved
        assert!(err
            .iter()
            .any(|v| matches!(v, WeightViolation::White { vertex, .. } if vertex == "x")));
        assert_eq!(ws.d(0) + ws.d(1) + ws.d(2) + ws.d(3), int(3));
    }

    #[test]
    fn found_weights_satisfy_strict_conditions() {
        let g = VisibleGraph::new_base([1, 1, 1, 1].map(int), None).unwrap();
        let g = g.insert("L0", "L1", "x").unwrap();
        assert!(find_ample_weights(&g).is_some_and(|ws| check_weights(&g, &ws, true).is_ok()));
    }
}
