//! Constructed secure positions: one red move away from a chosen case.
//!
//! Random play seldom lines two brackets up edge to edge, so the bracket
//! cases are built directly. Each position has one component per bracket,
//! made of the bracket's interior faces joined by red edges, with every
//! other exit blue.

use crate::brackets::{catalog, instantiate, BracketInstance, Family};
use crate::game_state::{exits, red_components, ComponentClass, EdgeMark, GameRules, GameState, Player};
use crate::lattice::{build_hexagonal, build_triangular, DualId, DualKind, EdgeId, GridTopology, VertexId};
use crate::opponents::is_legal;
use crate::security::{check_grid, CertKind, CertMap, SecurityCertificate};
use crate::strategy::classify;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub state: GameState,
    pub certs: CertMap,
    pub red: EdgeId,
    /// The case tag the move is expected to receive.
    pub expect: String,
}

/// Positions for the shared-bracket-edge cases, which fuzzed play reaches
/// only for the common pairs.
pub fn coverage_fixtures(family: Family) -> Vec<Fixture> {
    bracket_pair_fixtures(family)
}

fn board(family: Family) -> Arc<GridTopology> {
    Arc::new(match family {
        Family::Tri => build_triangular(14, 8).expect("fixture board"),
        Family::Hex => build_hexagonal(9, 10).expect("fixture board"),
    })
}

/// Vertices near the middle of the board, nearest first.
fn central_anchors(topo: &GridTopology, radius: i32) -> Vec<VertexId> {
    let (sx, sy) = topo.vertices.iter().fold((0i64, 0i64), |(x, y), v| (x + v.pos.x as i64, y + v.pos.y as i64));
    let n = topo.vertices.len() as i64;
    let (cx, cy) = ((sx / n) as i32, (sy / n) as i32);
    let mut out: Vec<(i32, VertexId)> = topo
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| ((v.pos.x - cx).abs() + 2 * (v.pos.y - cy).abs(), VertexId(i as u32)))
        .filter(|&(d, _)| d <= radius)
        .collect();
    out.sort();
    out.into_iter().map(|(_, v)| v).collect()
}

/// Joins `interiors` with red edges through interior faces, avoiding the
/// `blocked` edges and the `forbidden` faces.
fn connect(
    topo: &GridTopology,
    interiors: &[DualId],
    blocked: &HashSet<EdgeId>,
    forbidden: &HashSet<DualId>,
) -> Option<Vec<EdgeId>> {
    let mut tree: HashSet<DualId> = HashSet::from([*interiors.first()?]);
    let mut red = Vec::new();
    for &target in &interiors[1..] {
        if tree.contains(&target) {
            continue;
        }
        let mut prev: HashMap<DualId, (DualId, EdgeId)> = HashMap::new();
        let mut queue: VecDeque<DualId> = tree.iter().copied().collect();
        let mut seen = tree.clone();
        while let Some(d) = queue.pop_front() {
            if d == target {
                break;
            }
            for &(w, e) in topo.dual_neighbors(d) {
                if blocked.contains(&e)
                    || forbidden.contains(&w)
                    || topo.dual_kind(w) != DualKind::Interior
                    || !seen.insert(w)
                {
                    continue;
                }
                prev.insert(w, (d, e));
                queue.push_back(w);
            }
        }
        let mut at = target;
        while !tree.contains(&at) {
            let &(p, e) = prev.get(&at)?;
            red.push(e);
            tree.insert(at);
            at = p;
        }
    }
    Some(red)
}

/// A secure position with one floating component per bracket.
pub fn position_with(topo: &Arc<GridTopology>, brackets: &[BracketInstance]) -> Option<(GameState, CertMap)> {
    let blocked: HashSet<EdgeId> = brackets.iter().flat_map(|b| b.edges.iter().copied()).collect();
    let mut marks = vec![EdgeMark::Unclaimed; topo.num_edges()];
    for (i, b) in brackets.iter().enumerate() {
        if b.interiors.iter().any(|&d| topo.dual_kind(d) != DualKind::Interior) {
            return None;
        }
        let forbidden: HashSet<DualId> = brackets
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .flat_map(|(_, o)| o.interiors.iter().copied())
            .collect();
        if b.interiors.iter().any(|d| forbidden.contains(d)) {
            return None;
        }
        for e in connect(topo, &b.interiors, &blocked, &forbidden)? {
            marks[e.idx()] = EdgeMark::Red;
        }
    }
    let state = GameState::with_marks(topo.clone(), GameRules::secure(topo.family()), marks, Player::Vertical).ok()?;
    let comps = red_components(&state);
    if comps.len() != brackets.len() {
        return None;
    }
    let mut certs = CertMap::new();
    let mut uses: BTreeMap<EdgeId, u32> = BTreeMap::new();
    for b in brackets {
        let comp = comps.iter().find(|c| c.contains(b.interiors[0]))?;
        if comp.class != ComponentClass::Floating || !b.interiors.iter().all(|&d| comp.contains(d)) {
            return None;
        }
        let path: Vec<EdgeId> = exits(&state, comp).into_iter().filter(|e| !b.contains(*e)).collect();
        for &e in &path {
            *uses.entry(e).or_default() += 1;
        }
        certs.insert(comp.key(), SecurityCertificate { kind: CertKind::Floating { bracket: b.clone() }, path });
    }
    let mut marks = state.marks().to_vec();
    for (e, n) in uses {
        marks[e.idx()] = if n > 1 { EdgeMark::BlueDouble } else { EdgeMark::Blue };
    }
    let state = GameState::with_marks(topo.clone(), GameRules::secure(topo.family()), marks, Player::Vertical).ok()?;
    check_grid(&state, &certs).ok()?;
    Some((state, certs))
}

fn fixture(name: String, state: GameState, certs: CertMap, red: EdgeId) -> Option<Fixture> {
    if !state.mark(red).is_unclaimed() || !is_legal(&state, Some(&certs), red) {
        return None;
    }
    let expect = classify(&state, &certs, red);
    Some(Fixture { name, state, certs, red, expect })
}

/// Red claims edge `i` of a lone bracket of each type: the `2d` cases.
pub fn single_bracket_fixtures(family: Family) -> Vec<Fixture> {
    let topo = board(family);
    let mut out = Vec::new();
    for t in catalog(family) {
        let placed = central_anchors(&topo, 24).into_iter().find_map(|a| {
            let b = instantiate(t, a, &topo)?;
            let (state, certs) = position_with(&topo, std::slice::from_ref(&b))?;
            Some((b, state, certs))
        });
        let Some((b, state, certs)) = placed else { continue };
        for (i, &e) in b.edges.iter().enumerate() {
            let name = format!("{} T{}.{}", family_name(family), t.type_id, i + 1);
            out.extend(fixture(name, state.clone(), certs.clone(), e));
        }
    }
    out
}

/// Two brackets sharing exactly one edge, red claiming it: the `3b/bb`
/// cases. One position per distinct tag.
pub fn bracket_pair_fixtures(family: Family) -> Vec<Fixture> {
    let topo = board(family);
    let templates = catalog(family);
    let anchors = central_anchors(&topo, 8);
    let Some(&a1) = anchors.first() else { return Vec::new() };
    let nearby = central_anchors(&topo, 40);
    let mut found: BTreeMap<String, Fixture> = BTreeMap::new();
    for t1 in templates {
        let Some(b1) = instantiate(t1, a1, &topo) else { continue };
        for t2 in templates {
            for &a2 in &nearby {
                if a2 == a1 && t1.type_id == t2.type_id {
                    continue;
                }
                let Some(b2) = instantiate(t2, a2, &topo) else { continue };
                let shared: Vec<EdgeId> = b1.edges.iter().copied().filter(|&e| b2.contains(e)).collect();
                if shared.len() != 1 {
                    continue;
                }
                let Some((state, certs)) = position_with(&topo, &[b1.clone(), b2.clone()]) else { continue };
                let name = format!("{} T{}+T{}", family_name(family), t1.type_id, t2.type_id);
                let Some(fx) = fixture(name, state, certs, shared[0]) else { continue };
                if fx.expect.starts_with("3b/bb") {
                    found.entry(fx.expect.clone()).or_insert(fx);
                }
            }
        }
    }
    found.into_values().collect()
}

fn family_name(family: Family) -> &'static str {
    match family {
        Family::Tri => "tri",
        Family::Hex => "hex",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_tri_bracket_edge_has_a_position() {
        let fx = single_bracket_fixtures(Family::Tri);
        for t in 1..=8 {
            for i in 1..=3 {
                let want = format!("2d/T{t}.{i}");
                assert!(fx.iter().any(|f| f.expect == want), "no fixture for {want}");
            }
        }
    }

    #[test]
    fn pair_positions_include_type_one_and_eight() {
        let fx = bracket_pair_fixtures(Family::Tri);
        assert!(fx.iter().any(|f| f.expect == "3b/bb/T1.1+T8.2"));
        for f in &fx {
            assert!(check_grid(&f.state, &f.certs).is_ok(), "{}", f.name);
        }
    }
}
