//! Security certificates: the blue paths, brackets and gates that keep red
//! components contained, plus the single-turn safety checks they buy.

use crate::brackets::{BracketInstance, Family};
use crate::game_state::{
    exits, min_completion_witness, red_components, Component, ComponentClass, EdgeMark, GameState,
};
use crate::lattice::{DualId, DualKind, EdgeId, GridTopology};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum CertKind {
    Floating { bracket: BracketInstance },
    Top { gate: EdgeId },
    Bottom { gate: EdgeId },
    ExtraSecure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecurityCertificate {
    pub kind: CertKind,
    /// The blue path `P`.
    pub path: Vec<EdgeId>,
}

impl SecurityCertificate {
    pub fn bracket(&self) -> Option<&BracketInstance> {
        match &self.kind {
            CertKind::Floating { bracket } => Some(bracket),
            _ => None,
        }
    }

    pub fn gate(&self) -> Option<EdgeId> {
        match self.kind {
            CertKind::Top { gate } | CertKind::Bottom { gate } => Some(gate),
            _ => None,
        }
    }

    /// Edges that may stay non-blue: the bracket or the gate.
    pub fn open_edges(&self) -> Vec<EdgeId> {
        match &self.kind {
            CertKind::Floating { bracket } => bracket.edges.clone(),
            CertKind::Top { gate } | CertKind::Bottom { gate } => vec![*gate],
            CertKind::ExtraSecure => Vec::new(),
        }
    }
}

/// Certificates keyed by [`Component::key`].
pub type CertMap = BTreeMap<DualId, SecurityCertificate>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Clause {
    ClassMismatch,
    BracketEdgeRed(EdgeId),
    InteriorOutside(DualId),
    PathNotBlue(EdgeId),
    PathNotAdjacent(EdgeId),
    UncoveredExit(EdgeId),
    GateRed,
    GateNotExit,
    GateMisplaced,
    Uncertified,
    Crossed,
    SharedSingleBlue(EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridViolation {
    pub component: DualId,
    pub clause: Clause,
}

/// Whether `g` is an admissible gate for the top or bottom component `comp`.
///
/// On `Δ` the gate is a slanted edge of the top (bottom) strip whose left face
/// lies in the component and whose midpoint is right of the root. On `H` the
/// gate must leave the component from the root itself.
pub fn gate_ok(topo: &GridTopology, comp: &Component, g: EdgeId) -> bool {
    let Some(root) = comp.root else { return false };
    let edge = topo.edge(g);
    match topo.family() {
        Family::Tri => {
            let n = topo.kind.tri_dims().1 as i32;
            let want_y = match comp.class {
                ComponentClass::Top => 2 * n - 1,
                ComponentClass::Bottom => 3,
                _ => return false,
            };
            let [a, b] = edge.duals;
            let left = if topo.dual(a).pos.x < topo.dual(b).pos.x { a } else { b };
            edge.mid.y == want_y && comp.contains(left) && edge.mid.x > topo.dual(root).pos.x
        }
        Family::Hex => edge.duals.contains(&root),
    }
}

/// Evaluates every clause of `cert` against `comp`.
pub fn check_component(
    state: &GameState,
    comp: &Component,
    cert: &SecurityCertificate,
) -> Result<(), Vec<Clause>> {
    let topo = state.topology();
    let mut bad = Vec::new();
    let members: HashSet<DualId> = comp.dual_vertices.iter().copied().collect();
    let class_ok = match (&cert.kind, comp.class) {
        (CertKind::Floating { .. }, ComponentClass::Floating) => true,
        (CertKind::Top { .. }, ComponentClass::Top) => true,
        (CertKind::Bottom { .. }, ComponentClass::Bottom) => true,
        (CertKind::ExtraSecure, c) => c != ComponentClass::Spanning,
        _ => false,
    };
    if !class_ok {
        return Err(vec![Clause::ClassMismatch]);
    }
    match &cert.kind {
        CertKind::Floating { bracket } => {
            for &e in &bracket.edges {
                if state.mark(e).is_red() && !topo.is_wall(e) {
                    bad.push(Clause::BracketEdgeRed(e));
                }
            }
            for &d in &bracket.interiors {
                if !members.contains(&d) {
                    bad.push(Clause::InteriorOutside(d));
                }
            }
        }
        CertKind::Top { gate } | CertKind::Bottom { gate } => {
            if state.mark(*gate).is_red() {
                bad.push(Clause::GateRed);
            } else if !exits(state, comp).contains(gate) {
                bad.push(Clause::GateNotExit);
            } else if !gate_ok(topo, comp, *gate) {
                bad.push(Clause::GateMisplaced);
            }
        }
        CertKind::ExtraSecure => {}
    }
    let path: HashSet<EdgeId> = cert.path.iter().copied().collect();
    for &e in &cert.path {
        if !state.mark(e).is_blue() {
            bad.push(Clause::PathNotBlue(e));
        }
        if !topo.edge(e).duals.iter().any(|d| members.contains(d)) {
            bad.push(Clause::PathNotAdjacent(e));
        }
    }
    let open: HashSet<EdgeId> = cert.open_edges().into_iter().collect();
    for e in exits(state, comp) {
        if !open.contains(&e) && !path.contains(&e) {
            bad.push(Clause::UncoveredExit(e));
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

/// The whole-board predicate: every component certified, and every edge on
/// two certificates' paths claimed twice.
pub fn check_grid(state: &GameState, certs: &CertMap) -> Result<(), Vec<GridViolation>> {
    let comps = red_components(state);
    let mut bad = Vec::new();
    let mut uses: HashMap<EdgeId, usize> = HashMap::new();
    for c in &comps {
        let key = c.key();
        if c.class == ComponentClass::Spanning {
            bad.push(GridViolation { component: key, clause: Clause::Crossed });
            continue;
        }
        let Some(cert) = certs.get(&key) else {
            bad.push(GridViolation { component: key, clause: Clause::Uncertified });
            continue;
        };
        if let Err(clauses) = check_component(state, c, cert) {
            bad.extend(clauses.into_iter().map(|clause| GridViolation { component: key, clause }));
        }
        for &e in &cert.path {
            *uses.entry(e).or_default() += 1;
        }
    }
    for c in &comps {
        if let Some(cert) = certs.get(&c.key()) {
            for &e in &cert.path {
                if uses[&e] > 1 && state.mark(e) != EdgeMark::BlueDouble {
                    bad.push(GridViolation { component: c.key(), clause: Clause::SharedSingleBlue(e) });
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Safety {
    Safe,
    /// Unclaimed edges that would complete a red crossing.
    Counterexample(Vec<EdgeId>),
}

/// `Safe` iff red needs more than `q` fresh edges to cross.
pub fn single_turn_safety(state: &GameState, q: u32) -> Safety {
    match min_completion_witness(state) {
        Some((cost, path)) if cost <= q => Safety::Counterexample(path),
        _ => Safety::Safe,
    }
}

/// Brute force over every set of at most `q` unclaimed edges. Returns a
/// crossing set if one exists. Meant for boards with few unclaimed edges.
pub fn exhaustive_crossing(state: &GameState, q: u32) -> Option<Vec<EdgeId>> {
    let free: Vec<EdgeId> = state.unclaimed().collect();
    let mut scratch = state.clone();
    let mut chosen = Vec::new();
    fn rec(
        scratch: &mut GameState,
        free: &[EdgeId],
        start: usize,
        left: u32,
        chosen: &mut Vec<EdgeId>,
    ) -> bool {
        if crate::game_state::min_completion_cost(scratch) == Some(0) {
            return true;
        }
        if left == 0 {
            return false;
        }
        for i in start..free.len() {
            scratch.set_mark(free[i], EdgeMark::Red);
            chosen.push(free[i]);
            if rec(scratch, free, i + 1, left - 1, chosen) {
                return true;
            }
            chosen.pop();
            scratch.set_mark(free[i], EdgeMark::Unclaimed);
        }
        false
    }
    rec(&mut scratch, &free, 0, q, &mut chosen).then_some(chosen)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("edge {0:?} does not continue the path")]
    NotAPath(EdgeId),
    #[error("the first edge does not start at the bottom")]
    NoBottomStart,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelTrace {
    /// Level (on `Δ`) or label (on `H`) of the far dual vertex of each edge.
    pub upper: Vec<i32>,
    /// 1-based indices where the bound fails.
    pub violations: Vec<usize>,
}

/// The bound checked by [`level_bound_trace`] at 1-based index `k`.
pub fn level_bound(family: Family, k: usize) -> i32 {
    match family {
        Family::Tri => 2 * k as i32 + 1,
        Family::Hex => 3 * k as i32 + 1,
    }
}

/// Follows an ordered bottom-to-top list of fresh red edges through the red
/// structure already on the board and reports the level reached after each.
pub fn level_bound_trace(state: &GameState, path_edges: &[EdgeId]) -> Result<LevelTrace, TraceError> {
    let topo = state.topology();
    // Red classes of dual vertices, by flood from each.
    let class_of = |d: DualId| -> Vec<DualId> {
        crate::game_state::component_of(state, d).map(|c| c.dual_vertices).unwrap_or_else(|| vec![d])
    };
    let touches_bottom = |d: DualId| class_of(d).iter().any(|&w| topo.dual_kind(w) == DualKind::Bottom);
    let mut upper = Vec::new();
    let mut current: Option<Vec<DualId>> = None;
    for (i, &e) in path_edges.iter().enumerate() {
        let [a, b] = topo.edge(e).duals;
        let (lo, hi) = match &current {
            None => {
                if touches_bottom(a) {
                    (a, b)
                } else if touches_bottom(b) {
                    (b, a)
                } else {
                    return Err(TraceError::NoBottomStart);
                }
            }
            Some(cls) => {
                if cls.contains(&a) {
                    (a, b)
                } else if cls.contains(&b) {
                    (b, a)
                } else {
                    return Err(TraceError::NotAPath(e));
                }
            }
        };
        let _ = lo;
        upper.push(topo.level(hi).unwrap_or(0));
        let _ = i;
        current = Some(class_of(hi));
    }
    let violations = upper
        .iter()
        .enumerate()
        .filter(|(i, &v)| v > level_bound(topo.family(), i + 1))
        .map(|(i, _)| i + 1)
        .collect();
    Ok(LevelTrace { upper, violations })
}

/// JSON overlay for one certificate.
#[derive(Clone, Debug, Serialize)]
pub struct CertDoc {
    pub component_id: u32,
    pub variant: &'static str,
    pub path_edges: Vec<u32>,
    pub bracket_type: Option<u8>,
    pub bracket_edges: Vec<u32>,
    pub gate_edge: Option<u32>,
}

pub fn certs_json(certs: &CertMap) -> Vec<CertDoc> {
    certs
        .iter()
        .map(|(k, c)| CertDoc {
            component_id: k.0,
            variant: match c.kind {
                CertKind::Floating { .. } => "floating",
                CertKind::Top { .. } => "top",
                CertKind::Bottom { .. } => "bottom",
                CertKind::ExtraSecure => "extra_secure",
            },
            path_edges: c.path.iter().map(|e| e.0).collect(),
            bracket_type: c.bracket().map(|b| b.type_id),
            bracket_edges: c.bracket().map(|b| b.edges.iter().map(|e| e.0).collect()).unwrap_or_default(),
            gate_edge: c.gate().map(|g| g.0),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::{instantiate, template};
    use crate::game_state::{GameRules, Player};
    use crate::lattice::{build_triangular, Coord};
    use std::sync::Arc;

    fn setup() -> (Arc<GridTopology>, GameState) {
        let t = Arc::new(build_triangular(10, 5).unwrap());
        let s = GameState::new(t.clone(), GameRules::secure(Family::Tri)).unwrap();
        (t, s)
    }

    fn e(t: &GridTopology, x: i32, y: i32) -> EdgeId {
        t.edge_at(Coord::new(x, y)).unwrap()
    }

    /// A lone red edge between faces (4, 2.5) and (5, 2.5), caged by a Type 1
    /// bracket at (4, 3) and the blue edge (5, 3).
    fn floating_fixture() -> (Arc<GridTopology>, GameState, CertMap) {
        let (t, mut s) = setup();
        s.set_mark(e(&t, 9, 5), EdgeMark::Red);
        s.set_mark(e(&t, 10, 6), EdgeMark::Blue);
        let b = instantiate(template(Family::Tri, 1).unwrap(), t.vertex_at(Coord::new(8, 6)).unwrap(), &t)
            .unwrap();
        let comp = &red_components(&s)[0];
        let mut certs = CertMap::new();
        certs.insert(
            comp.key(),
            SecurityCertificate { kind: CertKind::Floating { bracket: b }, path: vec![e(&t, 10, 6)] },
        );
        (t, s, certs)
    }

    #[test]
    fn type_one_cage_is_secure() {
        let (_, s, certs) = floating_fixture();
        assert_eq!(check_grid(&s, &certs), Ok(()));
    }

    #[test]
    fn red_bracket_edge_breaks_it() {
        let (t, mut s, certs) = floating_fixture();
        s.set_mark(e(&t, 8, 4), EdgeMark::Red);
        assert!(check_grid(&s, &certs).is_err());
    }

    #[test]
    fn empty_board_is_secure() {
        let (_, s) = setup();
        assert_eq!(check_grid(&s, &CertMap::new()), Ok(()));
    }

    #[test]
    fn top_gate_must_be_right_of_root() {
        let (t, mut s) = setup();
        // Red edge from the top boundary (5, 5.5) down into the face (5, 4.5).
        s.set_mark(e(&t, 10, 10), EdgeMark::Red);
        let comp = red_components(&s)[0].clone();
        assert_eq!(comp.class, ComponentClass::Top);
        let left = e(&t, 9, 9);
        let right = e(&t, 11, 9);
        s.set_mark(left, EdgeMark::Blue);
        let good = SecurityCertificate { kind: CertKind::Top { gate: right }, path: vec![left] };
        assert_eq!(check_component(&s, &comp, &good), Ok(()));
        let mut s2 = s.clone();
        s2.set_mark(left, EdgeMark::Unclaimed);
        s2.set_mark(right, EdgeMark::Blue);
        let bad = SecurityCertificate { kind: CertKind::Top { gate: left }, path: vec![right] };
        assert_eq!(check_component(&s2, &comp, &bad), Err(vec![Clause::GateMisplaced]));
    }

    #[test]
    fn shared_path_edge_needs_double() {
        let (t, mut s, mut certs) = floating_fixture();
        // A second component whose path also uses (5, 3).
        s.set_mark(e(&t, 11, 7), EdgeMark::Red);
        let comp2 = red_components(&s).into_iter().find(|c| c.key() != *certs.keys().next().unwrap()).unwrap();
        let mut path = Vec::new();
        for x in exits(&s, &comp2) {
            if s.mark(x).is_unclaimed() {
                s.set_mark(x, EdgeMark::Blue);
            }
            path.push(x);
        }
        assert!(path.contains(&e(&t, 10, 6)));
        certs.insert(comp2.key(), SecurityCertificate { kind: CertKind::ExtraSecure, path });
        let err = check_grid(&s, &certs).unwrap_err();
        assert!(err.iter().any(|v| v.clause == Clause::SharedSingleBlue(e(&t, 10, 6))));
        s.set_mark(e(&t, 10, 6), EdgeMark::BlueDouble);
        assert_eq!(check_grid(&s, &certs), Ok(()));
    }

    #[test]
    fn safety_on_empty_boards() {
        let (_, s) = setup();
        // 2n - 1 = 9 edges needed.
        assert_eq!(single_turn_safety(&s, 8), Safety::Safe);
        assert!(matches!(single_turn_safety(&s, 9), Safety::Counterexample(p) if p.len() == 9));
    }

    #[test]
    fn exhaustive_agrees_on_a_small_board() {
        let t = Arc::new(build_triangular(3, 2).unwrap());
        let s = GameState::new(t, GameRules::crossing(1, 1)).unwrap();
        assert!(exhaustive_crossing(&s, 2).is_none());
        assert_eq!(exhaustive_crossing(&s, 3).map(|v| v.len()), Some(3));
        assert_eq!(crate::game_state::min_completion_cost(&s), Some(3));
        let _ = Player::Maker;
    }

    #[test]
    fn trace_from_the_bottom() {
        let (t, s) = setup();
        // Bottom boundary -> (1, 1.5) up face -> (2, 1.5) down face.
        let path = [e(&t, 2, 2), e(&t, 3, 3)];
        let tr = level_bound_trace(&s, &path).unwrap();
        assert_eq!(tr.upper, vec![2, 3]);
        assert!(tr.violations.is_empty());
        assert_eq!(level_bound_trace(&s, &[e(&t, 3, 3)]), Err(TraceError::NoBottomStart));
    }
}
