//! Minimal-volume search over visible graphs.
//!
//! A graph is determined by one [`EdgePattern`] per corner pair, so both
//! modes enumerate admissible patterns edge by edge and assemble them under
//! a global blowup budget:
//!
//! * `Generic`: every white must end with weight at least `n`, which is
//!   necessary for certification, so no certifiable graph is missed.
//! * `CyStepUp`: every white has weight exactly `n`, except that at most one
//!   white may have weight `n + 1` when there is no boundary or the boundary
//!   has weight 0.
//!
//! Work is split over the patterns of the first edge. Each worker keeps its
//! own best list keyed by `(volume, canonical form)`, and the lists are
//! merged in that order, so the output does not depend on the number of
//! workers.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::Result;
use crate::graph::{VertexId, VisibleGraph, CORNERS, EDGES};
use crate::rational::Rational;
use crate::stern_brocot::{enumerate_edge, EdgePattern, LeafRule, SbNode};
use crate::volume::{certify, Status, SurfaceReport, WeightSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Generic,
    CyStepUp,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub weights: [Rational; CORNERS],
    /// Corner 0 is the boundary.
    pub boundary: bool,
    pub max_blowups: usize,
    pub mode: Mode,
    pub rho_filter: Option<i64>,
    /// How many of the smallest volumes to keep.
    pub keep: usize,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
}

impl SearchConfig {
    pub fn new(weights: [Rational; CORNERS], boundary: bool, max_blowups: usize, mode: Mode) -> Self {
        Self {
            weights,
            boundary,
            max_blowups,
            mode,
            rho_filter: None,
            keep: 16,
            jobs: 0,
        }
    }

    fn boundary_index(&self) -> Option<usize> {
        self.boundary.then_some(0)
    }

    fn n(&self) -> Rational {
        self.weights.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Found {
    pub graph: VisibleGraph,
    pub report: SurfaceReport,
    pub canonical: String,
}

impl Found {
    pub fn volume(&self) -> &Rational {
        self.report.volume.as_ref().expect("certified reports carry a volume")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub edge_patterns: [usize; 6],
    pub assemblies: u64,
    pub certified: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// Sorted by `(volume, canonical form)`, one entry per canonical form.
    pub best: Vec<Found>,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn min_volume(&self) -> Option<&Rational> {
        self.best.first().map(Found::volume)
    }

    /// All entries attaining the minimum volume.
    pub fn minimizers(&self) -> Vec<&Found> {
        match self.min_volume() {
            Some(v) => self.best.iter().filter(|f| f.volume() == v).collect(),
            None => Vec::new(),
        }
    }
}

pub fn search(config: &SearchConfig) -> SearchResult {
    match config.mode {
        Mode::Generic => generic_search(config),
        Mode::CyStepUp => cy_step_up_search(config),
    }
}

pub fn generic_search(config: &SearchConfig) -> SearchResult {
    let rule = LeafRule::AtLeast { n: config.n() };
    let options = edge_options(config, &[rule]);
    run(config, options, 0)
}

pub fn cy_step_up_search(config: &SearchConfig) -> SearchResult {
    let n = config.n();
    let w0 = &config.weights[0];
    let steps_allowed = !config.boundary || w0.is_zero();
    let mut rules = vec![LeafRule::Exact { n: n.clone() }];
    if steps_allowed {
        rules.push(LeafRule::StepUp { n });
    }
    let options = edge_options(config, &rules);
    run(config, options, u8::from(steps_allowed))
}

struct EdgeOption {
    pattern: EdgePattern,
    len: usize,
    steps: u8,
    inc: (i64, i64),
}

fn edge_options(config: &SearchConfig, rules: &[LeafRule]) -> Vec<Vec<EdgeOption>> {
    EDGES
        .iter()
        .map(|&(a, b)| {
            let mut out = Vec::new();
            for rule in rules {
                for p in enumerate_edge(&config.weights[a], &config.weights[b], rule, config.max_blowups) {
                    let (_, inc) = p.marks_and_increments();
                    out.push(EdgeOption {
                        len: p.len(),
                        steps: p.steps(),
                        inc,
                        pattern: p,
                    });
                }
            }
            out
        })
        .collect()
}

/// Build the graph with the given pattern on each edge, in [`EDGES`] order.
/// Inserted curves are named `F{a}{b}_{m1}_{m2}`.
pub fn assemble(
    weights: [Rational; CORNERS],
    boundary: Option<usize>,
    patterns: [&EdgePattern; 6],
) -> Result<VisibleGraph> {
    let mut g = VisibleGraph::new_base(weights, boundary)?;
    for (e, &(a, b)) in EDGES.iter().enumerate() {
        let mut ids: BTreeMap<SbNode, VertexId> = BTreeMap::new();
        ids.insert(SbNode::START, g.corner(a));
        ids.insert(SbNode::END, g.corner(b));
        for (node, l, r) in patterns[e].insertion_order() {
            let name = format!("F{a}{b}_{}_{}", node.m1, node.m2);
            let id = g.insert_in_place(ids[&l], ids[&r], name)?;
            ids.insert(node, id);
        }
    }
    Ok(g)
}

struct Best {
    keep: usize,
    map: BTreeMap<(Rational, String), Found>,
    stats: SearchStats,
}

impl Best {
    fn new(keep: usize) -> Self {
        Self {
            keep,
            map: BTreeMap::new(),
            stats: SearchStats::default(),
        }
    }

    fn offer(&mut self, f: Found) {
        let key = (f.volume().clone(), f.canonical.clone());
        if self.map.len() >= self.keep {
            match self.map.last_key_value() {
                Some((worst, _)) if &key < worst => {}
                _ => return,
            }
        }
        self.map.insert(key, f);
        while self.map.len() > self.keep {
            self.map.pop_last();
        }
    }

    fn merge(mut self, other: Best) -> Best {
        self.stats.assemblies += other.stats.assemblies;
        self.stats.certified += other.stats.certified;
        for (_, f) in other.map {
            self.offer(f);
        }
        self
    }
}

struct Assembler<'a> {
    config: &'a SearchConfig,
    options: &'a [Vec<EdgeOption>],
    ws: WeightSystem,
    n: Rational,
    max_steps: u8,
}

impl Assembler<'_> {
    /// Corner `k` has its final mark; can it still be part of a certified
    /// graph?
    fn corner_ok(&self, k: usize, mark: i64) -> bool {
        if self.config.boundary_index() == Some(k) || mark >= 2 {
            return true;
        }
        if mark <= 0 {
            return false;
        }
        let w = &self.config.weights[k];
        match self.config.mode {
            Mode::Generic => w >= &self.n,
            Mode::CyStepUp => w == &self.n || (self.max_steps > 0 && *w == &self.n + Rational::one()),
        }
    }

    fn dfs(&self, e: usize, budget: usize, steps: u8, marks: [i64; CORNERS], chosen: &mut [usize; 6], best: &mut Best) {
        if e == 6 {
            self.finish(chosen, best);
            return;
        }
        let (a, b) = EDGES[e];
        for (i, opt) in self.options[e].iter().enumerate() {
            if opt.len > budget || opt.steps + steps > self.max_steps {
                continue;
            }
            let mut m = marks;
            m[a] += opt.inc.0;
            m[b] += opt.inc.1;
            let done: &[usize] = match e {
                2 => &[0],
                4 => &[1],
                5 => &[2, 3],
                _ => &[],
            };
            if done.iter().any(|&k| !self.corner_ok(k, m[k])) {
                continue;
            }
            chosen[e] = i;
            self.dfs(e + 1, budget - opt.len, steps + opt.steps, m, chosen, best);
        }
    }

    fn finish(&self, chosen: &[usize; 6], best: &mut Best) {
        best.stats.assemblies += 1;
        let pats: [&EdgePattern; 6] = std::array::from_fn(|e| &self.options[e][chosen[e]].pattern);
        let g = assemble(self.config.weights.clone(), self.config.boundary_index(), pats)
            .expect("patterns assemble on a fresh base graph");
        let report = certify(&g, &self.ws);
        if report.status < Status::BigNef {
            return;
        }
        best.stats.certified += 1;
        if self.config.rho_filter.is_some_and(|r| r != report.rho) {
            return;
        }
        let canonical = g.canonical_form();
        best.offer(Found {
            graph: g,
            report,
            canonical,
        });
    }
}

fn run(config: &SearchConfig, options: Vec<Vec<EdgeOption>>, max_steps: u8) -> SearchResult {
    let asm = Assembler {
        config,
        options: &options,
        ws: WeightSystem::new(config.weights.clone()),
        n: config.n(),
        max_steps,
    };
    let first = options[0].len();
    let work = || {
        (0..first)
            .into_par_iter()
            .map(|i| {
                let mut best = Best::new(config.keep);
                let opt = &options[0][i];
                if opt.len <= config.max_blowups && opt.steps <= max_steps {
                    let mut marks = [-1; CORNERS];
                    marks[0] += opt.inc.0;
                    marks[1] += opt.inc.1;
                    let mut chosen = [i, 0, 0, 0, 0, 0];
                    asm.dfs(
                        1,
                        config.max_blowups - opt.len,
                        opt.steps,
                        marks,
                        &mut chosen,
                        &mut best,
                    );
                }
                best
            })
            .reduce(|| Best::new(config.keep), Best::merge)
    };
    let best = if config.jobs == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .expect("thread pool")
            .install(work)
    };
    let mut stats = best.stats;
    for (e, o) in options.iter().enumerate() {
        stats.edge_patterns[e] = o.len();
    }
    SearchResult {
        best: best.map.into_values().collect(),
        stats,
    }
}
