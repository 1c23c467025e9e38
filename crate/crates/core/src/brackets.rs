//! The bracket catalogs: eight 3-edge templates for `Δ` and five 6-edge
//! templates for `H`.
//!
//! A bracket is a short non-red path whose two ends meet a blue path, closing
//! a curve around a red component. Templates are plain data: offsets of the
//! edge midpoints and of the interior dual vertices from an anchor vertex, in
//! doubled coordinates.

use crate::game_state::{Component, GameState};
use crate::lattice::{Coord, DualId, DualKind, EdgeId, GridTopology, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Tri,
    Hex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BracketTemplate {
    pub family: Family,
    pub type_id: u8,
    /// Edge midpoint offsets from the anchor, in path order.
    pub edges: &'static [(i32, i32)],
    pub interiors: &'static [(i32, i32)],
}

macro_rules! template {
    ($fam:ident, $id:expr, [$($e:expr),*], [$($i:expr),*]) => {
        BracketTemplate { family: Family::$fam, type_id: $id, edges: &[$($e),*], interiors: &[$($i),*] }
    };
}

static TRI: [BracketTemplate; 8] = [
    template!(Tri, 1, [(-1, -1), (0, -2), (3, -1)], [(0, -1), (2, -1)]),
    template!(Tri, 2, [(1, -1), (4, -2), (5, -1)], [(2, -1), (4, -1)]),
    template!(Tri, 3, [(1, -1), (3, -1), (3, 1)], [(2, -1), (2, 1)]),
    template!(Tri, 4, [(1, -1), (4, -2), (7, -1)], [(2, -1), (4, -1), (6, -1)]),
    template!(Tri, 5, [(2, 0), (6, 0), (7, 1)], [(2, 1), (4, 1), (6, 1)]),
    template!(Tri, 6, [(2, 0), (6, 0), (9, 1)], [(2, 1), (6, 1), (8, 1)]),
    template!(Tri, 7, [(1, -1), (3, -1), (5, 1)], [(2, -1), (2, 1), (4, 1)]),
    template!(Tri, 8, [(1, -1), (3, -1), (6, 0)], [(2, -1), (2, 1), (6, 1)]),
];

static HEX: [BracketTemplate; 5] = [
    template!(Hex, 1, [(0, -1), (1, -2), (2, -1), (2, 1), (2, 3), (2, 5)], [(1, 0), (1, 4)]),
    template!(Hex, 2, [(0, -1), (1, -2), (2, -1), (3, 0), (4, 1), (4, 3)], [(1, 0), (3, 2)]),
    template!(Hex, 3, [(0, -1), (1, -2), (2, -1), (2, 1), (1, 2), (0, 3)], [(1, 0), (-1, 2)]),
    template!(Hex, 4, [(0, -1), (1, -2), (2, -1), (2, 1), (2, 3), (3, 4)], [(1, 0), (1, 4), (3, 6)]),
    template!(Hex, 5, [(0, -1), (1, -2), (2, -1), (3, 0), (4, 1), (5, 2)], [(1, 0), (3, 2), (5, 4)]),
];

/// The fixed catalog for a family.
pub fn catalog(family: Family) -> &'static [BracketTemplate] {
    match family {
        Family::Tri => &TRI,
        Family::Hex => &HEX,
    }
}

pub fn template(family: Family, type_id: u8) -> Option<&'static BracketTemplate> {
    catalog(family).iter().find(|t| t.type_id == type_id)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BracketInstance {
    pub family: Family,
    pub type_id: u8,
    /// The anchor point; it may lie off the board for a clipped placement.
    pub anchor: Coord,
    pub edges: Vec<EdgeId>,
    pub interiors: Vec<DualId>,
    /// Some template edges fell beyond a side wall and were dropped.
    pub clipped: bool,
}

impl BracketInstance {
    pub fn template(&self) -> &'static BracketTemplate {
        template(self.family, self.type_id).expect("instance of a catalog template")
    }

    /// The two ends of an unclipped path, anchor first.
    pub fn ends(&self, topo: &GridTopology) -> Option<[VertexId; 2]> {
        if self.clipped {
            return None;
        }
        let start = topo.vertex_at(self.anchor)?;
        let end = self.edges.iter().fold(start, |v, &e| topo.edge(e).other_end(v));
        Some([start, end])
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// 1-based position of `e` along the path.
    pub fn position(&self, e: EdgeId) -> Option<usize> {
        self.edges.iter().position(|&f| f == e).map(|i| i + 1)
    }
}

/// Places `template` at `anchor`. Returns `None` when a needed edge or face
/// falls outside the board or the edges do not chain into a path.
pub fn instantiate(
    template: &BracketTemplate,
    anchor: VertexId,
    topo: &GridTopology,
) -> Option<BracketInstance> {
    let at = topo.vertex(anchor).pos;
    let mut edges = Vec::with_capacity(template.edges.len());
    let mut cursor = anchor;
    for &(dx, dy) in template.edges {
        let e = topo.edge_at(at.offset(dx, dy))?;
        let edge = topo.edge(e);
        if !edge.ends.contains(&cursor) {
            return None;
        }
        cursor = edge.other_end(cursor);
        edges.push(e);
    }
    let mut interiors = Vec::with_capacity(template.interiors.len());
    for &(dx, dy) in template.interiors {
        let d = topo.dual_at(at.offset(dx, dy))?;
        if topo.dual_kind(d) != DualKind::Interior && topo.family() == Family::Tri {
            return None;
        }
        interiors.push(d);
    }
    Some(BracketInstance {
        family: template.family,
        type_id: template.type_id,
        anchor: at,
        edges,
        interiors,
        clipped: false,
    })
}

/// Places `template` at an arbitrary point, dropping edges and interiors that
/// fall off the board. Only placements cut by a side wall are kept, and at
/// least one interior must remain.
pub fn instantiate_clipped(
    template: &BracketTemplate,
    at: Coord,
    topo: &GridTopology,
) -> Option<BracketInstance> {
    if let Some(v) = topo.vertex_at(at) {
        if let Some(inst) = instantiate(template, v, topo) {
            return Some(inst);
        }
    }
    let (min_y, max_y) = (2, 2 * topo.kind.tri_dims().1 as i32);
    let mut edges = Vec::new();
    let mut dropped = false;
    for &(dx, dy) in template.edges {
        let c = at.offset(dx, dy);
        match topo.edge_at(c) {
            Some(e) => edges.push(e),
            None => {
                if topo.family() == Family::Tri && (c.y < min_y || c.y > max_y) {
                    return None;
                }
                dropped = true;
            }
        }
    }
    let mut interiors = Vec::new();
    for &(dx, dy) in template.interiors {
        match topo.dual_at(at.offset(dx, dy)) {
            Some(d) if topo.dual_kind(d) == DualKind::Interior => interiors.push(d),
            Some(d) if topo.family() == Family::Hex => interiors.push(d),
            Some(_) => return None,
            None => dropped = true,
        }
    }
    if !dropped || interiors.is_empty() || edges.is_empty() {
        return None;
    }
    let inst = BracketInstance {
        family: template.family,
        type_id: template.type_id,
        anchor: at,
        edges,
        interiors,
        clipped: true,
    };
    let limit = *expected_spreads(template.family).iter().max().unwrap_or(&0);
    match level_spread(topo, &inst) {
        Some(s) if s <= limit => Some(inst),
        _ => None,
    }
}

/// All placements of catalog brackets whose interior dual vertices lie in
/// `comp` and whose edges are all non-red.
pub fn find_securing_brackets(state: &GameState, comp: &Component) -> Vec<BracketInstance> {
    let topo = state.topology();
    let members: HashSet<DualId> = comp.dual_vertices.iter().copied().collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in catalog(topo.family()) {
        for &(ix, iy) in t.interiors {
            for &d in &comp.dual_vertices {
                let p = topo.dual(d).pos;
                let at = Coord::new(p.x - ix, p.y - iy);
                if !seen.insert((t.type_id, at)) {
                    continue;
                }
                let Some(inst) = instantiate_clipped(t, at, topo) else {
                    continue;
                };
                if inst.interiors.iter().all(|i| members.contains(i))
                    && inst.edges.iter().all(|&e| !state.mark(e).is_red() || topo.is_wall(e))
                {
                    out.push(inst);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub family: Option<Family>,
    pub type_id: u8,
    pub is_path: bool,
    pub encloses_interiors: bool,
    /// Largest level (or label) of a face outside the bracket minus the lowest
    /// interior level.
    pub level_spread: Option<i32>,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Level spread reported for each template, in catalog order.
pub fn expected_spreads(family: Family) -> &'static [i32] {
    match family {
        Family::Tri => &[1, 1, 2, 0, 1, 0, 1, 0],
        Family::Hex => &[3, 2, 2, 1, 0],
    }
}

/// Mechanically checks a template on a board big enough to hold it away from
/// the boundary: the edges chain into a simple path, closing the bracket
/// against the smallest component containing its interiors encloses exactly
/// that component, and the level spread matches the published table.
pub fn validate_template(template: &BracketTemplate, topo: &GridTopology) -> ValidationReport {
    let mut report = ValidationReport {
        family: Some(template.family),
        type_id: template.type_id,
        ..Default::default()
    };
    let Some(inst) = deep_placement(template, topo) else {
        report.failures.push("no placement away from the boundary".into());
        return report;
    };

    // (a) simple path of the right length
    let want = match template.family {
        Family::Tri => 3,
        Family::Hex => 6,
    };
    let start = topo.vertex_at(inst.anchor).expect("unclipped placement");
    let mut visited = vec![start];
    let mut cursor = start;
    let mut simple = inst.edges.len() == want;
    for &e in &inst.edges {
        cursor = topo.edge(e).other_end(cursor);
        if visited.contains(&cursor) {
            simple = false;
        }
        visited.push(cursor);
    }
    report.is_path = simple;
    if !simple {
        report.failures.push(format!("edges do not form a simple {want}-edge path"));
    }

    // (b) enclosure against the minimal component through the interiors
    let bracket: HashSet<EdgeId> = inst.edges.iter().copied().collect();
    let core = connect_interiors(topo, &inst.interiors, &bracket);
    let interiors: HashSet<DualId> = inst.interiors.iter().copied().collect();
    let mut enclosure_ok = core.is_some();
    if let Some(core) = &core {
        for &e in &inst.edges {
            let [a, b] = topo.edge(e).duals;
            let inside = [core.contains(&a), core.contains(&b)];
            let inner = if inside[0] { a } else { b };
            if inside[0] == inside[1] || !interiors.contains(&inner) {
                enclosure_ok = false;
            }
        }
        let boundary: Vec<EdgeId> = (0..topo.num_edges() as u32)
            .map(EdgeId)
            .filter(|&e| {
                let [a, b] = topo.edge(e).duals;
                core.contains(&a) != core.contains(&b)
            })
            .collect();
        let path: Vec<EdgeId> = boundary.iter().copied().filter(|e| !bracket.contains(e)).collect();
        // The blue side plus the bracket must be one simple cycle.
        let mut degree = std::collections::HashMap::new();
        for &e in &boundary {
            for v in topo.edge(e).ends {
                *degree.entry(v).or_insert(0) += 1;
            }
        }
        if degree.values().any(|&d| d != 2) {
            enclosure_ok = false;
        }
        if !path.is_empty() {
            let path_ends: Vec<VertexId> = degree
                .keys()
                .copied()
                .filter(|v| path.iter().filter(|&&e| topo.edge(e).ends.contains(v)).count() == 1)
                .collect();
            let mut want_ends = inst.ends(topo).map(|e| e.to_vec()).unwrap_or_default();
            let mut got = path_ends.clone();
            want_ends.sort();
            got.sort();
            if got != want_ends {
                enclosure_ok = false;
            }
        }
        let walls: HashSet<EdgeId> = boundary.iter().copied().collect();
        let reach = flood(topo, core.iter().copied(), |e| walls.contains(&e));
        if reach != *core {
            enclosure_ok = false;
        }
    }
    report.encloses_interiors = enclosure_ok;
    if !enclosure_ok {
        report.failures.push("bracket does not close around its interior dual vertices".into());
    }

    // (c) level spread
    let spread = level_spread(topo, &inst);
    report.level_spread = spread;
    let expected = expected_spreads(template.family)[(template.type_id - 1) as usize];
    if spread != Some(expected) {
        report.failures.push(format!("level spread {spread:?}, expected {expected}"));
    }
    report
}

/// Largest level of a face across a bracket edge from the interiors, minus
/// the smallest interior level.
pub fn level_spread(topo: &GridTopology, inst: &BracketInstance) -> Option<i32> {
    let low = inst.interiors.iter().map(|&d| topo.level(d)).collect::<Option<Vec<_>>>()?;
    let low = *low.iter().min()?;
    let mut high = i32::MIN;
    for &e in &inst.edges {
        for d in topo.edge(e).duals {
            if !inst.interiors.contains(&d) {
                if let Some(l) = topo.level(d) {
                    high = high.max(l);
                }
            }
        }
    }
    (high > i32::MIN).then(|| high - low)
}

pub(crate) fn deep_placement(template: &BracketTemplate, topo: &GridTopology) -> Option<BracketInstance> {
    let n = topo.vertices.len();
    let mut best: Option<(i64, BracketInstance)> = None;
    let (cx, cy) = {
        let (sx, sy) = topo.vertices.iter().fold((0i64, 0i64), |(a, b), v| {
            (a + v.pos.x as i64, b + v.pos.y as i64)
        });
        (sx / n as i64, sy / n as i64)
    };
    for v in 0..n as u32 {
        if let Some(inst) = instantiate(template, VertexId(v), topo) {
            let p = topo.vertex(VertexId(v)).pos;
            let score = (p.x as i64 - cx).abs() + (p.y as i64 - cy).abs();
            let all_interior = inst.edges.iter().all(|&e| {
                topo.edge(e).duals.iter().all(|&d| topo.dual_kind(d) == DualKind::Interior)
            });
            if all_interior && best.as_ref().is_none_or(|(s, _)| score < *s) {
                best = Some((score, inst));
            }
        }
    }
    best.map(|(_, i)| i)
}

/// Smallest connected set of faces containing `interiors`, joined by shortest
/// dual paths that avoid the bracket edges.
pub(crate) fn connect_interiors(
    topo: &GridTopology,
    interiors: &[DualId],
    bracket: &HashSet<EdgeId>,
) -> Option<BTreeSet<DualId>> {
    let mut core: BTreeSet<DualId> = BTreeSet::new();
    core.insert(interiors[0]);
    for &target in &interiors[1..] {
        if core.contains(&target) {
            continue;
        }
        // BFS from the current core to `target`.
        let mut prev = std::collections::HashMap::new();
        let mut queue: VecDeque<DualId> = core.iter().copied().collect();
        for &c in &core {
            prev.insert(c, c);
        }
        while let Some(d) = queue.pop_front() {
            if d == target {
                break;
            }
            for &(w, e) in topo.dual_neighbors(d) {
                if bracket.contains(&e) || prev.contains_key(&w) {
                    continue;
                }
                if topo.dual_kind(w) != DualKind::Interior {
                    continue;
                }
                prev.insert(w, d);
                queue.push_back(w);
            }
        }
        let mut cur = target;
        if !prev.contains_key(&cur) {
            return None;
        }
        while !core.contains(&cur) {
            core.insert(cur);
            cur = prev[&cur];
        }
    }
    Some(core)
}

/// Faces reachable from `start` through dual edges not blocked by `blocked`.
pub(crate) fn flood(
    topo: &GridTopology,
    start: impl IntoIterator<Item = DualId>,
    blocked: impl Fn(EdgeId) -> bool,
) -> BTreeSet<DualId> {
    let mut seen: BTreeSet<DualId> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for d in start {
        if seen.insert(d) {
            queue.push_back(d);
        }
    }
    while let Some(d) = queue.pop_front() {
        if topo.dual_kind(d) == DualKind::Side {
            continue;
        }
        for &(w, e) in topo.dual_neighbors(d) {
            if !blocked(e) && seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen
}

/// JSON view of a template with doubled-integer offsets.
#[derive(Clone, Debug, Serialize)]
pub struct TemplateDoc {
    pub family: Family,
    pub type_id: u8,
    pub edges: Vec<[i32; 2]>,
    pub interiors: Vec<[i32; 2]>,
}

pub fn catalog_json(family: Family) -> Vec<TemplateDoc> {
    catalog(family)
        .iter()
        .map(|t| TemplateDoc {
            family: t.family,
            type_id: t.type_id,
            edges: t.edges.iter().map(|&(x, y)| [x, y]).collect(),
            interiors: t.interiors.iter().map(|&(x, y)| [x, y]).collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_hexagonal, build_triangular};

    #[test]
    fn published_entries() {
        let t1 = template(Family::Tri, 1).unwrap();
        assert_eq!(t1.edges, &[(-1, -1), (0, -2), (3, -1)]);
        assert_eq!(t1.interiors, &[(0, -1), (2, -1)]);
        let t5 = template(Family::Tri, 5).unwrap();
        assert_eq!(t5.edges, &[(2, 0), (6, 0), (7, 1)]);
        let h1 = template(Family::Hex, 1).unwrap();
        assert_eq!(&h1.edges[..3], &[(0, -1), (1, -2), (2, -1)]);
        assert_eq!(catalog(Family::Tri).len(), 8);
        assert_eq!(catalog(Family::Hex).len(), 5);
    }

    #[test]
    fn type_one_at_four_three() {
        let topo = build_triangular(8, 5).unwrap();
        let anchor = topo.vertex_at(Coord::new(8, 6)).unwrap();
        let inst = instantiate(template(Family::Tri, 1).unwrap(), anchor, &topo).unwrap();
        let mids: Vec<Coord> = inst.edges.iter().map(|&e| topo.edge(e).mid).collect();
        assert_eq!(mids, vec![Coord::new(7, 5), Coord::new(8, 4), Coord::new(11, 5)]);
        let ints: Vec<Coord> = inst.interiors.iter().map(|&d| topo.dual(d).pos).collect();
        assert_eq!(ints, vec![Coord::new(8, 5), Coord::new(10, 5)]);
        assert_eq!(topo.vertex(inst.ends(&topo).unwrap()[1]).pos, Coord::new(12, 6));
    }

    #[test]
    fn bottom_row_anchor_is_unplaceable() {
        let topo = build_triangular(8, 5).unwrap();
        let anchor = topo.vertex_at(Coord::new(8, 2)).unwrap();
        assert!(instantiate(template(Family::Tri, 1).unwrap(), anchor, &topo).is_none());
    }

    #[test]
    fn every_template_validates() {
        let tri = build_triangular(12, 9).unwrap();
        for t in catalog(Family::Tri) {
            let r = validate_template(t, &tri);
            assert!(r.ok(), "tri type {}: {:?}", t.type_id, r.failures);
        }
        let hex = build_hexagonal(9, 8).unwrap();
        for t in catalog(Family::Hex) {
            let r = validate_template(t, &hex);
            assert!(r.ok(), "hex type {}: {:?}", t.type_id, r.failures);
        }
    }

    #[test]
    fn hex_type_three_interiors_after_repair() {
        let hex = build_hexagonal(9, 8).unwrap();
        let t3 = template(Family::Hex, 3).unwrap();
        let inst = deep_placement(t3, &hex).unwrap();
        let a = inst.anchor;
        let ints: Vec<Coord> = inst.interiors.iter().map(|&d| hex.dual(d).pos).collect();
        assert_eq!(ints, vec![a.offset(1, 0), a.offset(-1, 2)]);
    }
}
