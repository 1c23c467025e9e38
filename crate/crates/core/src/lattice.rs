//! Triangular and hexagonal grid graphs with their planar duals.
//!
//! All coordinates are stored doubled so that edge midpoints and dual
//! vertices, which sit on half-integer positions, stay exact integers. A
//! [`Coord`] of `(7, 4)` therefore names the real point `(3.5, 2)`.
//!
//! `Δ(m,n)` has rows `1..=n`; odd rows carry `m` vertices at
//! `x ∈ {0, 2, …, 2m-2}`, even rows `m-1` vertices at `x ∈ {1, 3, …, 2m-3}`.
//! Faces are labelled by the horizontal position of the triangle corner that
//! sits alone on its row and the vertical label `k + 1/2` of the strip between
//! rows `k` and `k+1`. The outer face is split into one bottom (top) dual
//! vertex per horizontal edge of row 1 (row `n`) and one inert side dual
//! vertex per slanted boundary edge on the left and right walls.
//!
//! `H(n,m)` is obtained from `Δ(m,n)` by exchanging the roles of vertices and
//! faces and turning the picture a quarter turn: a doubled point `(X, Y)` of
//! `Δ` is drawn at `(Y - 1, X + 2)` in `H`.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// A position in doubled coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

impl Coord {
    pub const fn new(x: i32, y: i32) -> Self {
        Coord { x, y }
    }

    /// Builds a coordinate from a real position given in half units, e.g.
    /// `Coord::half(7, 4)` is the point `(3.5, 2)`.
    pub const fn half(x2: i32, y2: i32) -> Self {
        Coord { x: x2, y: y2 }
    }

    pub fn offset(self, dx: i32, dy: i32) -> Self {
        Coord::new(self.x + dx, self.y + dy)
    }

    /// The real position as floats, for display.
    pub fn real(self) -> (f64, f64) {
        (self.x as f64 / 2.0, self.y as f64 / 2.0)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: i32| {
            if v % 2 == 0 {
                format!("{}", v / 2)
            } else {
                format!("{}", v as f64 / 2.0)
            }
        };
        write!(f, "({}, {})", show(self.x), show(self.y))
    }
}

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn idx(self) -> usize {
                self.0 as usize
            }
        }
    };
}

id_type!(VertexId);
id_type!(EdgeId);
id_type!(DualId);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeKind {
    Triangular { m: u32, n: u32 },
    Hexagonal { n: u32, m: u32 },
}

impl LatticeKind {
    pub fn is_triangular(self) -> bool {
        matches!(self, LatticeKind::Triangular { .. })
    }

    /// `(m, n)` of the underlying triangular grid.
    pub fn tri_dims(self) -> (u32, u32) {
        match self {
            LatticeKind::Triangular { m, n } | LatticeKind::Hexagonal { n, m } => (m, n),
        }
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeKind::Triangular { m, n } => write!(f, "tri-{m}x{n}"),
            LatticeKind::Hexagonal { n, m } => write!(f, "hex-{n}x{m}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DualKind {
    Interior,
    Top,
    Bottom,
    /// Outer face piece beyond a side wall. Red edges into it change nothing.
    Side,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Up,
    Down,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Vertex {
    pub pos: Coord,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Edge {
    /// Endpoints ordered by `(y, x)`.
    pub ends: [VertexId; 2],
    /// Incident faces: `[left or below, right or above]`.
    pub duals: [DualId; 2],
    pub mid: Coord,
}

impl Edge {
    pub fn other_dual(&self, d: DualId) -> DualId {
        if self.duals[0] == d {
            self.duals[1]
        } else {
            self.duals[0]
        }
    }

    pub fn other_end(&self, v: VertexId) -> VertexId {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualVertex {
    pub pos: Coord,
    pub kind: DualKind,
    pub orientation: Option<Orientation>,
    /// Dual vertex level on `Δ` (`1..=2n`) or vertical label on `H`.
    pub level: Option<i32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("degenerate grid: need m >= {min_m} and n >= {min_n}, got m = {m}, n = {n}")]
    Degenerate { m: u32, n: u32, min_m: u32, min_n: u32 },
    #[error("unknown coordinate {0}")]
    UnknownCoord(Coord),
    #[error("dual vertex {0:?} has no level")]
    NoLevel(DualId),
    #[error("dual vertex levels are only defined on triangular grids")]
    NotTriangular,
}

/// An immutable grid graph together with its planar dual.
#[derive(Clone, Debug)]
pub struct GridTopology {
    pub kind: LatticeKind,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub duals: Vec<DualVertex>,
    vertex_at: HashMap<Coord, VertexId>,
    edge_at: HashMap<Coord, EdgeId>,
    dual_at: HashMap<Coord, DualId>,
    vertex_adj: Vec<Vec<(VertexId, EdgeId)>>,
    dual_adj: Vec<Vec<(DualId, EdgeId)>>,
    pub left_vertices: Vec<VertexId>,
    pub right_vertices: Vec<VertexId>,
    pub top_duals: Vec<DualId>,
    pub bottom_duals: Vec<DualId>,
    /// Hexagonal grids only: vertices one step below the top labels.
    pub top_securing: Vec<VertexId>,
    pub bottom_securing: Vec<VertexId>,
    is_left: Vec<bool>,
    is_right: Vec<bool>,
}

/// `Δ(m,n)` for `m, n >= 2`.
pub fn build_triangular(m: u32, n: u32) -> Result<GridTopology, LatticeError> {
    if m < 2 || n < 2 {
        return Err(LatticeError::Degenerate { m, n, min_m: 2, min_n: 2 });
    }
    Ok(triangular_unchecked(m, n))
}

/// `H(n,m)`: the dual of `Δ(m,n)` turned a quarter turn. Requires `m >= 3`.
pub fn build_hexagonal(n: u32, m: u32) -> Result<GridTopology, LatticeError> {
    if m < 3 || n < 1 {
        return Err(LatticeError::Degenerate { m, n, min_m: 3, min_n: 1 });
    }
    Ok(dual_of_triangular(&triangular_unchecked(m, n)))
}

fn row_xs(m: u32, y: i32) -> impl Iterator<Item = i32> {
    let m = m as i32;
    let (start, count) = if y % 2 == 1 { (0, m) } else { (1, m - 1) };
    (0..count).map(move |i| start + 2 * i)
}

fn triangular_unchecked(m: u32, n: u32) -> GridTopology {
    let ni = n as i32;
    let mut vertices = Vec::new();
    let mut vertex_at = HashMap::new();
    for y in 1..=ni {
        for x in row_xs(m, y) {
            let pos = Coord::new(2 * x, 2 * y);
            vertex_at.insert(pos, VertexId(vertices.len() as u32));
            vertices.push(Vertex { pos });
        }
    }
    let has_vertex = |x: i32, y: i32| vertex_at.contains_key(&Coord::new(2 * x, 2 * y));

    let mut duals: Vec<DualVertex> = Vec::new();
    let mut dual_at: HashMap<Coord, DualId> = HashMap::new();
    fn add_dual(
        duals: &mut Vec<DualVertex>,
        dual_at: &mut HashMap<Coord, DualId>,
        pos: Coord,
        kind: DualKind,
        orientation: Option<Orientation>,
        level: Option<i32>,
    ) -> DualId {
        *dual_at.entry(pos).or_insert_with(|| {
            duals.push(DualVertex { pos, kind, orientation, level });
            DualId(duals.len() as u32 - 1)
        })
    }

    // Interior faces, strip by strip.
    for k in 1..ni {
        for x in 0..=(2 * m as i32 - 2) {
            let up = has_vertex(x - 1, k) && has_vertex(x + 1, k) && has_vertex(x, k + 1);
            let down = has_vertex(x - 1, k + 1) && has_vertex(x + 1, k + 1) && has_vertex(x, k);
            let pos = Coord::new(2 * x, 2 * k + 1);
            if up {
                add_dual(&mut duals, &mut dual_at, pos, DualKind::Interior, Some(Orientation::Up), Some(2 * k));
            } else if down {
                add_dual(&mut duals, &mut dual_at, pos, DualKind::Interior, Some(Orientation::Down), Some(2 * k + 1));
            }
        }
    }

    let mut edges = Vec::new();
    let mut edge_at = HashMap::new();
    let mut push_edge = |edges: &mut Vec<Edge>, a: Coord, b: Coord, duals: [DualId; 2]| {
        let (a, b) = if (a.y, a.x) <= (b.y, b.x) { (a, b) } else { (b, a) };
        let mid = Coord::new((a.x + b.x) / 2, (a.y + b.y) / 2);
        edge_at.insert(mid, EdgeId(edges.len() as u32));
        edges.push(Edge { ends: [vertex_at[&a], vertex_at[&b]], duals, mid });
    };

    for y in 1..=ni {
        for x in row_xs(m, y) {
            let here = Coord::new(2 * x, 2 * y);
            if has_vertex(x + 2, y) {
                let mid = Coord::new(2 * x + 2, 2 * y);
                let below = if y == 1 {
                    add_dual(&mut duals, &mut dual_at, mid.offset(0, -1), DualKind::Bottom, None, Some(1))
                } else {
                    dual_at[&mid.offset(0, -1)]
                };
                let above = if y == ni {
                    add_dual(&mut duals, &mut dual_at, mid.offset(0, 1), DualKind::Top, None, Some(2 * ni))
                } else {
                    dual_at[&mid.offset(0, 1)]
                };
                push_edge(&mut edges, here, Coord::new(2 * x + 4, 2 * y), [below, above]);
            }
            for dx in [-1, 1] {
                if y < ni && has_vertex(x + dx, y + 1) {
                    let mid = Coord::new(2 * x + dx, 2 * y + 1);
                    let left =
                        add_dual(&mut duals, &mut dual_at, mid.offset(-1, 0), DualKind::Side, None, None);
                    let right =
                        add_dual(&mut duals, &mut dual_at, mid.offset(1, 0), DualKind::Side, None, None);
                    push_edge(&mut edges, here, Coord::new(2 * (x + dx), 2 * y + 2), [left, right]);
                }
            }
        }
    }

    let left_vertices = (1..=ni)
        .map(|y| vertex_at[&Coord::new(2 * row_xs(m, y).next().unwrap(), 2 * y)])
        .collect();
    let right_vertices = (1..=ni)
        .map(|y| vertex_at[&Coord::new(2 * row_xs(m, y).last().unwrap(), 2 * y)])
        .collect();
    let by_kind = |duals: &[DualVertex], kind| {
        duals
            .iter()
            .enumerate()
            .filter(|(_, d)| d.kind == kind)
            .map(|(i, _)| DualId(i as u32))
            .collect::<Vec<_>>()
    };
    let top_duals = by_kind(&duals, DualKind::Top);
    let bottom_duals = by_kind(&duals, DualKind::Bottom);

    finish(GridTopology {
        kind: LatticeKind::Triangular { m, n },
        vertices,
        edges,
        duals,
        vertex_at,
        edge_at,
        dual_at,
        vertex_adj: Vec::new(),
        dual_adj: Vec::new(),
        left_vertices,
        right_vertices,
        top_duals,
        bottom_duals,
        top_securing: Vec::new(),
        bottom_securing: Vec::new(),
        is_left: Vec::new(),
        is_right: Vec::new(),
    })
}

/// Quarter-turn map from `Δ` drawing coordinates to `H` drawing coordinates.
pub fn tri_to_hex(c: Coord) -> Coord {
    Coord::new(c.y - 1, c.x + 2)
}

pub fn hex_to_tri(c: Coord) -> Coord {
    Coord::new(c.y - 2, c.x + 1)
}

fn dual_of_triangular(tri: &GridTopology) -> GridTopology {
    let (m, n) = tri.kind.tri_dims();
    let vertices: Vec<Vertex> = tri.duals.iter().map(|d| Vertex { pos: tri_to_hex(d.pos) }).collect();
    let vertex_at = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.pos, VertexId(i as u32)))
        .collect();
    let edges: Vec<Edge> = tri
        .edges
        .iter()
        .map(|e| Edge {
            ends: [VertexId(e.duals[0].0), VertexId(e.duals[1].0)],
            duals: [DualId(e.ends[0].0), DualId(e.ends[1].0)],
            mid: tri_to_hex(e.mid),
        })
        .collect();
    let edge_at = edges.iter().enumerate().map(|(i, e)| (e.mid, EdgeId(i as u32))).collect();

    let mut kinds = vec![DualKind::Interior; tri.vertices.len()];
    for v in &tri.left_vertices {
        kinds[v.idx()] = DualKind::Bottom;
    }
    for v in &tri.right_vertices {
        kinds[v.idx()] = DualKind::Top;
    }
    let duals: Vec<DualVertex> = tri
        .vertices
        .iter()
        .zip(&kinds)
        .map(|(v, &kind)| {
            let pos = tri_to_hex(v.pos);
            DualVertex { pos, kind, orientation: None, level: Some(pos.y / 2) }
        })
        .collect();
    let dual_at = duals.iter().enumerate().map(|(i, d)| (d.pos, DualId(i as u32))).collect();
    let to_vertices =
        |ds: &[DualId]| ds.iter().map(|d| VertexId(d.0)).collect::<Vec<_>>();
    let to_duals = |vs: &[VertexId]| vs.iter().map(|v| DualId(v.0)).collect::<Vec<_>>();

    let top_label = 2 * m as i32 - 2;
    let select = |label: i32| {
        vertices
            .iter()
            .enumerate()
            .filter(|(i, v)| v.pos.y == 2 * label && tri.duals[*i].kind == DualKind::Interior)
            .map(|(i, _)| VertexId(i as u32))
            .collect::<Vec<_>>()
    };
    let top_securing = select(top_label);
    let bottom_securing = select(2);

    finish(GridTopology {
        kind: LatticeKind::Hexagonal { n, m },
        left_vertices: to_vertices(&tri.bottom_duals),
        right_vertices: to_vertices(&tri.top_duals),
        top_duals: to_duals(&tri.right_vertices),
        bottom_duals: to_duals(&tri.left_vertices),
        vertices,
        edges,
        duals,
        vertex_at,
        edge_at,
        dual_at,
        vertex_adj: Vec::new(),
        dual_adj: Vec::new(),
        top_securing,
        bottom_securing,
        is_left: Vec::new(),
        is_right: Vec::new(),
    })
}

fn finish(mut t: GridTopology) -> GridTopology {
    let mut vertex_adj = vec![Vec::new(); t.vertices.len()];
    let mut dual_adj = vec![Vec::new(); t.duals.len()];
    for (i, e) in t.edges.iter().enumerate() {
        let id = EdgeId(i as u32);
        vertex_adj[e.ends[0].idx()].push((e.ends[1], id));
        vertex_adj[e.ends[1].idx()].push((e.ends[0], id));
        dual_adj[e.duals[0].idx()].push((e.duals[1], id));
        dual_adj[e.duals[1].idx()].push((e.duals[0], id));
    }
    t.vertex_adj = vertex_adj;
    t.dual_adj = dual_adj;
    t.is_left = vec![false; t.vertices.len()];
    t.is_right = vec![false; t.vertices.len()];
    for v in &t.left_vertices {
        t.is_left[v.idx()] = true;
    }
    for v in &t.right_vertices {
        t.is_right[v.idx()] = true;
    }
    t
}

impl GridTopology {
    pub fn family(&self) -> crate::brackets::Family {
        if self.kind.is_triangular() {
            crate::brackets::Family::Tri
        } else {
            crate::brackets::Family::Hex
        }
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.idx()]
    }

    pub fn dual(&self, d: DualId) -> &DualVertex {
        &self.duals[d.idx()]
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.idx()]
    }

    pub fn vertex_at(&self, c: Coord) -> Option<VertexId> {
        self.vertex_at.get(&c).copied()
    }

    /// The edge whose midpoint is `c`.
    pub fn edge_at(&self, c: Coord) -> Option<EdgeId> {
        self.edge_at.get(&c).copied()
    }

    pub fn dual_at(&self, c: Coord) -> Option<DualId> {
        self.dual_at.get(&c).copied()
    }

    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        self.vertex_adj[a.idx()].iter().find(|(w, _)| *w == b).map(|(_, e)| *e)
    }

    pub fn vertex_neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.vertex_adj[v.idx()]
    }

    pub fn dual_neighbors(&self, d: DualId) -> &[(DualId, EdgeId)] {
        &self.dual_adj[d.idx()]
    }

    pub fn is_left(&self, v: VertexId) -> bool {
        self.is_left[v.idx()]
    }

    pub fn is_right(&self, v: VertexId) -> bool {
        self.is_right[v.idx()]
    }

    pub fn dual_kind(&self, d: DualId) -> DualKind {
        self.duals[d.idx()].kind
    }

    /// Whether `e` lies on a side wall of the board.
    pub fn is_wall(&self, e: EdgeId) -> bool {
        self.edges[e.idx()].duals.iter().any(|&d| self.dual_kind(d) == DualKind::Side)
    }

    /// The dual edge of `e`, as its pair of incident faces.
    pub fn dual_edge(&self, e: EdgeId) -> [DualId; 2] {
        self.edges[e.idx()].duals
    }

    /// Dual vertex level on `Δ`: `2k` for an upward triangle with base on row
    /// `k`, `2k+1` for a downward triangle pointing at row `k`, `1` for the
    /// bottom boundary and `2n` for the top.
    pub fn dual_vertex_level(&self, d: DualId) -> Result<i32, LatticeError> {
        if !self.kind.is_triangular() {
            return Err(LatticeError::NotTriangular);
        }
        let dv = self.duals.get(d.idx()).ok_or(LatticeError::NoLevel(d))?;
        dv.level.ok_or(LatticeError::NoLevel(d))
    }

    /// Level on `Δ` or vertical label on `H`; `None` for side faces.
    pub fn level(&self, d: DualId) -> Option<i32> {
        self.duals[d.idx()].level
    }

    /// The largest level any dual vertex can have: `2n` on `Δ`, `2m - 1` on `H`.
    pub fn top_level(&self) -> i32 {
        match self.kind {
            LatticeKind::Triangular { n, .. } => 2 * n as i32,
            LatticeKind::Hexagonal { m, .. } => 2 * m as i32 - 1,
        }
    }

    /// Number of bounded faces of the primal drawing, used for Euler checks.
    pub fn interior_face_count(&self) -> usize {
        self.duals.iter().filter(|d| d.kind == DualKind::Interior).count()
    }

    /// A hash of the construction parameters, used to key solver caches.
    pub fn fingerprint(&self) -> String {
        self.kind.to_string()
    }

    pub fn to_json(&self) -> TopologyDoc {
        let (m, n) = self.kind.tri_dims();
        TopologyDoc {
            version: 1,
            kind: match self.kind {
                LatticeKind::Triangular { .. } => "triangular".into(),
                LatticeKind::Hexagonal { .. } => "hexagonal".into(),
            },
            m,
            n,
            vertices: self.vertices.iter().map(|v| [v.pos.x, v.pos.y]).collect(),
            edges: self.edges.iter().map(|e| [e.ends[0].0, e.ends[1].0]).collect(),
            dual_vertices: self
                .duals
                .iter()
                .map(|d| DualDoc { pos: [d.pos.x, d.pos.y], kind: d.kind, level: d.level })
                .collect(),
            dual_pairs: self
                .edges
                .iter()
                .enumerate()
                .map(|(i, e)| [i as u32, e.duals[0].0, e.duals[1].0])
                .collect(),
            left: self.left_vertices.iter().map(|v| v.0).collect(),
            right: self.right_vertices.iter().map(|v| v.0).collect(),
        }
    }
}

/// Versioned JSON view of a topology. Positions are doubled integers.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TopologyDoc {
    pub version: u32,
    pub kind: String,
    pub m: u32,
    pub n: u32,
    pub vertices: Vec<[i32; 2]>,
    pub edges: Vec<[u32; 2]>,
    pub dual_vertices: Vec<DualDoc>,
    /// `[edge, dual_a, dual_b]`: each primal edge with the dual edge crossing it.
    pub dual_pairs: Vec<[u32; 3]>,
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DualDoc {
    pub pos: [i32; 2],
    pub kind: DualKind,
    pub level: Option<i32>,
}

impl TopologyDoc {
    pub fn build(&self) -> Result<GridTopology, LatticeError> {
        match self.kind.as_str() {
            "hexagonal" => build_hexagonal(self.n, self.m),
            _ => build_triangular(self.m, self.n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_degree(t: &GridTopology, x: i32, y: i32) -> usize {
        let v = t.vertex_at(Coord::new(2 * x, 2 * y)).unwrap();
        t.vertex_neighbors(v).len()
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(build_triangular(1, 4).is_err());
        assert!(build_triangular(4, 1).is_err());
        assert!(build_hexagonal(3, 2).is_err());
    }

    #[test]
    fn small_grid_counts_match_hand_enumeration() {
        // Δ(2,2): row 1 has (0,1),(2,1); row 2 has (1,2).
        // Edges: one horizontal, two slanted. One interior face.
        let t = build_triangular(2, 2).unwrap();
        assert_eq!(t.vertices.len(), 3);
        assert_eq!(t.edges.len(), 3);
        assert_eq!(t.interior_face_count(), 1);
        assert_eq!(t.bottom_duals.len(), 1);
        assert_eq!(t.top_duals.len(), 0);

        // Δ(3,3): rows of 3, 2, 3 vertices. Horizontal edges 2 + 1 + 2,
        // slanted 4 + 4, interior faces 3 + 3.
        let t = build_triangular(3, 3).unwrap();
        assert_eq!(t.vertices.len(), 8);
        assert_eq!(t.edges.len(), 13);
        assert_eq!(t.interior_face_count(), 6);
        assert_eq!(t.bottom_duals.len(), 2);
        assert_eq!(t.top_duals.len(), 2);
    }

    #[test]
    fn figure_grid_has_alternating_rows() {
        let t = build_triangular(6, 5).unwrap();
        for y in 1..=5 {
            let row = t.vertices.iter().filter(|v| v.pos.y == 2 * y).count();
            assert_eq!(row, if y % 2 == 1 { 6 } else { 5 });
        }
        for (y, v) in (1..=5).zip(&t.left_vertices) {
            let min = t.vertices.iter().filter(|w| w.pos.y == 2 * y).map(|w| w.pos.x).min();
            assert_eq!(Some(t.vertex(*v).pos.x), min);
        }
    }

    #[test]
    fn euler_formula_holds() {
        for (m, n) in [(2, 2), (3, 3), (6, 5), (10, 4), (5, 9)] {
            let t = build_triangular(m, n).unwrap();
            let v = t.vertices.len() as i64;
            let e = t.edges.len() as i64;
            let f = t.interior_face_count() as i64 + 1;
            assert_eq!(v - e + f, 2, "Δ({m},{n})");
        }
    }

    #[test]
    fn degrees() {
        let t = build_triangular(6, 5).unwrap();
        assert_eq!(count_degree(&t, 4, 3), 6);
        assert!(count_degree(&t, 0, 1) <= 3);
        assert!(count_degree(&t, 10, 5) <= 3);
        for (i, d) in t.duals.iter().enumerate() {
            let deg = t.dual_neighbors(DualId(i as u32)).len();
            match d.kind {
                DualKind::Interior => assert_eq!(deg, 3),
                _ => assert_eq!(deg, 1),
            }
        }
    }

    #[test]
    fn levels_follow_orientation() {
        let t = build_triangular(5, 4).unwrap();
        // Upward face with base on row 1: apex (1,2), label (1, 1.5).
        let up = t.dual_at(Coord::new(2, 3)).unwrap();
        assert_eq!(t.dual(up).orientation, Some(Orientation::Up));
        assert_eq!(t.dual_vertex_level(up).unwrap(), 2);
        // Downward face pointing at row 1: point (2,1), label (2, 1.5).
        let down = t.dual_at(Coord::new(4, 3)).unwrap();
        assert_eq!(t.dual(down).orientation, Some(Orientation::Down));
        assert_eq!(t.dual_vertex_level(down).unwrap(), 3);
        for e in &t.edges {
            let [a, b] = e.duals;
            if let (Some(la), Some(lb)) = (t.level(a), t.level(b)) {
                assert!((la - lb).abs() <= 1);
            }
        }
        for d in &t.bottom_duals {
            assert_eq!(t.dual_vertex_level(*d).unwrap(), 1);
        }
        for d in &t.top_duals {
            assert_eq!(t.dual_vertex_level(*d).unwrap(), 8);
        }
    }

    #[test]
    fn bottom_row_horizontal_touches_bottom_boundary() {
        let t = build_triangular(4, 3).unwrap();
        let e = t.edge_at(Coord::new(2, 2)).unwrap();
        let kinds = t.dual_edge(e).map(|d| t.dual_kind(d));
        assert!(kinds.contains(&DualKind::Bottom));
    }

    #[test]
    fn hexagonal_is_the_rotated_dual() {
        let tri = build_triangular(6, 7).unwrap();
        let hex = build_hexagonal(7, 6).unwrap();
        assert_eq!(tri.edges.len(), hex.edges.len());
        for (a, b) in tri.edges.iter().zip(&hex.edges) {
            assert_eq!(tri_to_hex(a.mid), b.mid);
            assert_eq!(hex_to_tri(b.mid), a.mid);
            for i in 0..2 {
                assert_eq!(tri_to_hex(tri.dual(a.duals[i]).pos), hex.vertex(b.ends[i]).pos);
                assert_eq!(tri_to_hex(tri.vertex(a.ends[i]).pos), hex.dual(b.duals[i]).pos);
            }
        }
        // Bottom dual vertices of H carry label 1 (and 2 on even rows).
        let min = hex.bottom_duals.iter().map(|d| hex.level(*d).unwrap()).min();
        assert_eq!(min, Some(1));
        let max = hex.top_duals.iter().map(|d| hex.level(*d).unwrap()).max();
        assert_eq!(max, Some(11));
        assert!(hex.top_securing.iter().all(|v| hex.vertex(*v).pos.y == 2 * 10));
        assert!(!hex.top_securing.is_empty());
    }

    #[test]
    fn json_document_round_trips() {
        let t = build_hexagonal(4, 5).unwrap();
        let doc = t.to_json();
        let s = serde_json::to_string(&doc).unwrap();
        let back: TopologyDoc = serde_json::from_str(&s).unwrap();
        assert_eq!(doc, back);
        assert_eq!(back.build().unwrap().edges.len(), t.edges.len());
    }
}
