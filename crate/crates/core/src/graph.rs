//! The visible graph: dual graph of the strict transforms of four lines and
//! of every exceptional curve produced by blowing up intersection points.
//!
//! Corners are the four lines and always occupy vertex ids `0..4`. Every
//! insertion subdivides an existing edge, so the graph stays a subdivision of
//! the complete graph on four vertices. Each vertex remembers its
//! multiplicity vector `coords`: the weight of a vertex is
//! `Σ coords[k] * w_k`, and an inserted vertex has exactly two nonzero
//! coordinates, which identify the edge it lives on together with its
//! Stern-Brocot fraction along that edge.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

pub const CORNERS: usize = 4;

/// Corner pairs in the fixed order used by [`VisibleGraph::edge_chains`].
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Corner(usize),
    /// Position of the creating insertion in the history.
    Inserted(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Boundary,
    /// Mark 1: a (-1)-curve.
    White,
    /// Mark at least 2: contracted to a singular point.
    Black,
    /// Non-boundary vertex with mark at most 0.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    /// Negative self-intersection.
    pub mark: i64,
    pub weight: Rational,
    pub origin: Origin,
    pub coords: [u64; CORNERS],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Insertion {
    pub new: VertexId,
    pub left: VertexId,
    pub right: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisibleGraph {
    vertices: Vec<Vertex>,
    adjacency: Vec<Vec<VertexId>>,
    boundary: Option<usize>,
    history: Vec<Insertion>,
    weights: [Rational; CORNERS],
    names: HashMap<String, VertexId>,
}

fn default_corner_names() -> [String; CORNERS] {
    std::array::from_fn(|k| format!("L{k}"))
}

impl VisibleGraph {
    /// Four lines in general position: marks `-1`, the given weights, no
    /// blowups yet.
    pub fn new_base(weights: [Rational; CORNERS], boundary: Option<usize>) -> Result<Self> {
        Self::new_base_named(default_corner_names(), weights, boundary)
    }

    pub fn new_base_named(
        names: [String; CORNERS],
        weights: [Rational; CORNERS],
        boundary: Option<usize>,
    ) -> Result<Self> {
        if let Some(b) = boundary {
            if b >= CORNERS {
                return Err(Error::BoundaryIndex(b));
            }
        }
        let mut name_map = HashMap::new();
        let mut vertices = Vec::with_capacity(CORNERS);
        for (k, name) in names.into_iter().enumerate() {
            if name_map.insert(name.clone(), VertexId(k)).is_some() {
                return Err(Error::DuplicateVertex(name));
            }
            let mut coords = [0; CORNERS];
            coords[k] = 1;
            vertices.push(Vertex {
                name,
                mark: -1,
                weight: weights[k].clone(),
                origin: Origin::Corner(k),
                coords,
            });
        }
        let adjacency = (0..CORNERS)
            .map(|k| (0..CORNERS).filter(|&j| j != k).map(VertexId).collect())
            .collect();
        Ok(Self {
            vertices,
            adjacency,
            boundary,
            history: Vec::new(),
            weights,
            names: name_map,
        })
    }

    /// Blow up the intersection point of `a` and `b`, returning the new graph.
    pub fn insert(&self, a: &str, b: &str, new: &str) -> Result<Self> {
        let a = self.id(a)?;
        let b = self.id(b)?;
        let mut g = self.clone();
        g.insert_in_place(a, b, new.to_string())?;
        Ok(g)
    }

    /// In-place variant of [`insert`](Self::insert) used by builders.
    pub fn insert_in_place(&mut self, a: VertexId, b: VertexId, name: String) -> Result<VertexId> {
        if a.0 >= self.vertices.len() {
            return Err(Error::UnknownVertex(format!("#{}", a.0)));
        }
        if b.0 >= self.vertices.len() {
            return Err(Error::UnknownVertex(format!("#{}", b.0)));
        }
        if !self.adjacent(a, b) {
            return Err(Error::NotAdjacent(
                self.vertices[a.0].name.clone(),
                self.vertices[b.0].name.clone(),
            ));
        }
        if self.names.contains_key(&name) {
            return Err(Error::DuplicateVertex(name));
        }
        let mut coords = [0u64; CORNERS];
        for (k, c) in coords.iter_mut().enumerate() {
            *c = self.vertices[a.0].coords[k]
                .checked_add(self.vertices[b.0].coords[k])
                .ok_or(Error::Overflow)?;
        }
        let id = VertexId(self.vertices.len());
        let weight = &self.vertices[a.0].weight + &self.vertices[b.0].weight;
        self.vertices.push(Vertex {
            name: name.clone(),
            mark: 1,
            weight,
            origin: Origin::Inserted(self.history.len()),
            coords,
        });
        self.vertices[a.0].mark += 1;
        self.vertices[b.0].mark += 1;
        for (x, y) in [(a, b), (b, a)] {
            let slot = self.adjacency[x.0]
                .iter_mut()
                .find(|v| **v == y)
                .expect("adjacency is symmetric");
            *slot = id;
        }
        self.adjacency.push(vec![a, b]);
        self.names.insert(name, id);
        self.history.push(Insertion {
            new: id,
            left: a,
            right: b,
        });
        Ok(id)
    }

    /// The same curves with different initial weights.
    pub fn with_weights(&self, weights: [Rational; CORNERS]) -> Self {
        let mut g = self.clone();
        for v in g.vertices.iter_mut() {
            v.weight = v
                .coords
                .iter()
                .zip(weights.iter())
                .fold(Rational::zero(), |acc, (&c, w)| {
                    acc + w * Rational::from_integer(c.into())
                });
        }
        g.weights = weights;
        g
    }

    /// Rename corner `k` to position `perm[k]`, carrying its weight, name and
    /// boundary flag along.
    pub fn relabel_corners(&self, perm: [usize; CORNERS]) -> Result<Self> {
        let mut seen = [false; CORNERS];
        for &p in &perm {
            if p >= CORNERS || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
        }
        let mut names = default_corner_names();
        let mut weights: [Rational; CORNERS] = std::array::from_fn(|_| Rational::zero());
        for k in 0..CORNERS {
            names[perm[k]] = self.vertices[k].name.clone();
            weights[perm[k]] = self.weights[k].clone();
        }
        let mut g = Self::new_base_named(names, weights, self.boundary.map(|b| perm[b]))?;
        let remap = |v: VertexId| if v.0 < CORNERS { VertexId(perm[v.0]) } else { v };
        for ins in &self.history {
            let name = self.vertices[ins.new.0].name.clone();
            g.insert_in_place(remap(ins.left), remap(ins.right), name)?;
        }
        Ok(g)
    }

    pub fn id(&self, name: &str) -> Result<VertexId> {
        self.names
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.0]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.vertices[v.0].name
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v.0]
    }

    pub fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.adjacency[a.0].contains(&b)
    }

    pub fn corner(&self, k: usize) -> VertexId {
        VertexId(k)
    }

    pub fn boundary(&self) -> Option<VertexId> {
        self.boundary.map(VertexId)
    }

    pub fn boundary_index(&self) -> Option<usize> {
        self.boundary
    }

    pub fn weights(&self) -> &[Rational; CORNERS] {
        &self.weights
    }

    /// Sum of the initial weights.
    pub fn weight_sum(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn history(&self) -> &[Insertion] {
        &self.history
    }

    pub fn blowups(&self) -> usize {
        self.history.len()
    }

    pub fn color(&self, v: VertexId) -> Color {
        if Some(v.0) == self.boundary {
            return Color::Boundary;
        }
        match self.vertices[v.0].mark {
            1 => Color::White,
            m if m >= 2 => Color::Black,
            _ => Color::Unresolved,
        }
    }

    pub fn whites(&self) -> Vec<VertexId> {
        self.ids().filter(|&v| self.color(v) == Color::White).collect()
    }

    pub fn blacks(&self) -> Vec<VertexId> {
        self.ids().filter(|&v| self.color(v) == Color::Black).collect()
    }

    /// Vertices created by insertions that had `v` as one of their two
    /// parents, in creation order.
    pub fn children(&self, v: VertexId) -> Vec<VertexId> {
        self.history
            .iter()
            .filter(|ins| ins.left == v || ins.right == v)
            .map(|ins| ins.new)
            .collect()
    }

    /// The corner pair whose edge carries `v`, or `None` for a corner.
    pub fn edge_of(&self, v: VertexId) -> Option<(usize, usize)> {
        if v.0 < CORNERS {
            return None;
        }
        let mut it = (0..CORNERS).filter(|&k| self.vertices[v.0].coords[k] > 0);
        let a = it.next()?;
        let b = it.next()?;
        Some((a, b))
    }

    /// Interior vertices of the six corner-to-corner paths, in [`EDGES`]
    /// order, each listed walking from the lower corner to the higher one.
    pub fn edge_chains(&self) -> [Vec<VertexId>; 6] {
        std::array::from_fn(|e| {
            let (a, b) = EDGES[e];
            let start = self.adjacency[a]
                .iter()
                .copied()
                .find(|&v| v.0 == b || self.edge_of(v) == Some((a, b)))
                .expect("every corner pair is joined by a path");
            let mut path = Vec::new();
            let (mut prev, mut cur) = (VertexId(a), start);
            while cur.0 != b {
                path.push(cur);
                let next = self.adjacency[cur.0]
                    .iter()
                    .copied()
                    .find(|&x| x != prev)
                    .expect("interior vertices have degree 2");
                prev = cur;
                cur = next;
            }
            path
        })
    }

    /// Corner permutations that keep every weight and the boundary flag.
    pub fn admissible_permutations(&self) -> Vec<[usize; CORNERS]> {
        permutations()
            .into_iter()
            .filter(|p| {
                (0..CORNERS).all(|k| {
                    self.weights[k] == self.weights[p[k]] && (self.boundary == Some(k)) == (self.boundary == Some(p[k]))
                })
            })
            .collect()
    }

    /// A string that is equal for two graphs exactly when they coincide after
    /// a weight- and boundary-preserving relabelling of the corners.
    ///
    /// Each edge is described by the sorted set of Stern-Brocot fractions of
    /// its interior vertices; insertion order does not affect the result.
    pub fn canonical_form(&self) -> String {
        let best = self
            .admissible_permutations()
            .into_iter()
            .map(|p| self.edge_encoding(&p))
            .min()
            .expect("identity is always admissible");
        let mut out = String::new();
        let weights: Vec<String> = self.weights.iter().map(format_rational).collect();
        out.push_str(&format!("w={}", weights.join(",")));
        match self.boundary {
            Some(b) => out.push_str(&format!(";b={b}")),
            None => out.push_str(";b=-"),
        }
        for (e, nodes) in best.iter().enumerate() {
            let (a, b) = EDGES[e];
            let fr: Vec<String> = nodes.iter().map(|(x, y)| format!("{x}/{y}")).collect();
            out.push_str(&format!(";{a}{b}:{}", fr.join(",")));
        }
        out
    }

    fn edge_encoding(&self, perm: &[usize; CORNERS]) -> [Vec<(u64, u64)>; 6] {
        let mut edges: [Vec<(u64, u64)>; 6] = Default::default();
        for v in self.vertices.iter().skip(CORNERS) {
            let mut c = [0u64; CORNERS];
            for k in 0..CORNERS {
                c[perm[k]] = v.coords[k];
            }
            let e = EDGES
                .iter()
                .position(|&(a, b)| c[a] > 0 && c[b] > 0)
                .expect("inserted vertices lie on an edge");
            let (a, b) = EDGES[e];
            edges[e].push((c[a], c[b]));
        }
        for e in edges.iter_mut() {
            e.sort_unstable();
        }
        edges
    }
}

impl fmt::Display for VisibleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::serialize(self))
    }
}

fn permutations() -> Vec<[usize; CORNERS]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}
