//! Edge marks, turn order and the connectivity queries every other module
//! leans on.

use crate::brackets::Family;
use crate::lattice::{DualId, DualKind, EdgeId, GridTopology, VertexId};
use crate::security::CertMap;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeMark {
    #[default]
    Unclaimed,
    Red,
    Blue,
    /// Claimed by the blue player twice; only in the secure game.
    BlueDouble,
}

impl EdgeMark {
    pub fn is_red(self) -> bool {
        self == EdgeMark::Red
    }

    pub fn is_blue(self) -> bool {
        matches!(self, EdgeMark::Blue | EdgeMark::BlueDouble)
    }

    pub fn is_unclaimed(self) -> bool {
        self == EdgeMark::Unclaimed
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    Maker,
    Breaker,
    Horizontal,
    Vertical,
}

impl Player {
    /// Breaker and Vertical claim red edges.
    pub fn is_red(self) -> bool {
        matches!(self, Player::Breaker | Player::Vertical)
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Player::Maker => "maker",
            Player::Breaker => "breaker",
            Player::Horizontal => "horizontal",
            Player::Vertical => "vertical",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GameKind {
    Crossing { p: u32, q: u32 },
    QResponse { q: u32 },
    Q4Response { q: u32 },
    Secure { family: Family },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameRules {
    pub kind: GameKind,
}

impl GameRules {
    pub fn crossing(p: u32, q: u32) -> Self {
        GameRules { kind: GameKind::Crossing { p, q } }
    }

    pub fn q_response(q: u32) -> Self {
        GameRules { kind: GameKind::QResponse { q } }
    }

    pub fn q4_response(q: u32) -> Self {
        GameRules { kind: GameKind::Q4Response { q } }
    }

    pub fn secure(family: Family) -> Self {
        GameRules { kind: GameKind::Secure { family } }
    }

    pub fn is_secure(&self) -> bool {
        matches!(self.kind, GameKind::Secure { .. })
    }

    /// The blue player's answer per red edge: 1 on `Δ`, 4 on `H`.
    pub fn response_factor(&self) -> usize {
        match self.kind {
            GameKind::Q4Response { .. } | GameKind::Secure { family: Family::Hex } => 4,
            _ => 1,
        }
    }

    /// Whether Maker's guarantee (`p >= q`, `n >= q + 2`) covers this game.
    pub fn maker_guarantee(&self, n: u32) -> bool {
        matches!(self.kind, GameKind::Crossing { p, q } if p >= q && n >= q + 2)
    }

    /// Whether Breaker's guarantee (`q >= 4p`, `m >= q + 1`) covers this game.
    pub fn breaker_guarantee(&self, m: u32) -> bool {
        matches!(self.kind, GameKind::Crossing { p, q } if q >= 4 * p && m > q)
    }

    fn first_mover(&self) -> Player {
        match self.kind {
            GameKind::Crossing { .. } => Player::Maker,
            _ => Player::Vertical,
        }
    }

    fn validate(&self, topo: &GridTopology) -> Result<(), GameError> {
        match self.kind {
            GameKind::Crossing { p, q } if p == 0 || q == 0 => {
                Err(GameError::Incompatible("crossing game needs p, q >= 1".into()))
            }
            GameKind::QResponse { q } | GameKind::Q4Response { q } if q == 0 => {
                Err(GameError::Incompatible("response game needs q >= 1".into()))
            }
            GameKind::Secure { family } if family != topo.family() => Err(GameError::Incompatible(
                format!("{family:?} secure game on a {} board", topo.kind),
            )),
            GameKind::Q4Response { .. } if topo.family() != Family::Hex => {
                Err(GameError::Incompatible("4-response game is played on H".into()))
            }
            GameKind::QResponse { .. } if topo.family() != Family::Tri => {
                Err(GameError::Incompatible("response game is played on Δ".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// Would close a red cycle or join two top (two bottom) dual vertices.
    CycleOrArch,
    /// Would join the top and the bottom.
    TopMeetsBottom,
    /// Would turn a secured floating component into a top or bottom one by
    /// breaking its blue path.
    UnsecuresFloating,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Violation::CycleOrArch => "(i) red cycle or arch",
            Violation::TopMeetsBottom => "(ii) joins a top and a bottom component",
            Violation::UnsecuresFloating => "(iii) breaks the blue path of a secured floating component",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GameError {
    #[error("edge {0:?} is already claimed")]
    OccupiedEdge(EdgeId),
    #[error("edge {0:?} does not exist")]
    UnknownEdge(EdgeId),
    #[error("edge {0:?} listed twice")]
    DuplicateEdge(EdgeId),
    #[error("it is {expected}'s turn, not {got}'s")]
    WrongTurn { expected: Player, got: Player },
    #[error("expected {expected} edges, got {got}")]
    BudgetMismatch { expected: String, got: usize },
    #[error("secure game rule violated: {0}")]
    SecureRuleViolation(Violation),
    #[error("the game is over")]
    GameOver,
    #[error("incompatible rules: {0}")]
    Incompatible(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub player: Player,
    pub edges: Vec<EdgeId>,
    pub turn: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingStatus {
    MakerWin,
    BreakerWin,
    Open,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentClass {
    Top,
    Bottom,
    Floating,
    /// Touches both the top and the bottom: red has crossed.
    Spanning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    /// Members ordered by `(y, x)` of their positions.
    pub dual_vertices: Vec<DualId>,
    pub red_edges: Vec<EdgeId>,
    pub class: ComponentClass,
    /// The boundary dual vertex of a top or bottom component.
    pub root: Option<DualId>,
}

impl Component {
    pub fn contains(&self, d: DualId) -> bool {
        self.dual_vertices.contains(&d)
    }

    /// Stable key used by certificate maps: the smallest member id.
    pub fn key(&self) -> DualId {
        *self.dual_vertices.iter().min().expect("components are non-empty")
    }
}

/// A game position. Cloning is cheap enough to treat positions as values.
#[derive(Clone, Debug)]
pub struct GameState {
    topo: Arc<GridTopology>,
    rules: GameRules,
    marks: Vec<EdgeMark>,
    history: Vec<Move>,
    to_move: Player,
    /// Blue claims owed for the last red move (response games).
    owed: Option<usize>,
    /// Blue marks replaced by the last red claim in the secure game.
    last_b: u32,
}

impl GameState {
    pub fn new(topo: Arc<GridTopology>, rules: GameRules) -> Result<Self, GameError> {
        rules.validate(&topo)?;
        let n = topo.num_edges();
        Ok(GameState {
            topo,
            rules,
            marks: vec![EdgeMark::Unclaimed; n],
            history: Vec::new(),
            to_move: rules.first_mover(),
            owed: None,
            last_b: 0,
        })
    }

    /// A position with the given marks and no history, e.g. for fixtures.
    pub fn with_marks(
        topo: Arc<GridTopology>,
        rules: GameRules,
        marks: Vec<EdgeMark>,
        to_move: Player,
    ) -> Result<Self, GameError> {
        let mut s = GameState::new(topo, rules)?;
        assert_eq!(marks.len(), s.marks.len(), "mark vector length");
        s.marks = marks;
        s.to_move = to_move;
        Ok(s)
    }

    pub fn topology(&self) -> &GridTopology {
        &self.topo
    }

    pub fn topology_arc(&self) -> &Arc<GridTopology> {
        &self.topo
    }

    pub fn rules(&self) -> &GameRules {
        &self.rules
    }

    pub fn mark(&self, e: EdgeId) -> EdgeMark {
        self.marks[e.idx()]
    }

    pub fn marks(&self) -> &[EdgeMark] {
        &self.marks
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn last_b(&self) -> u32 {
        self.last_b
    }

    /// Number of edges the player to move must claim, if fixed.
    pub fn owed(&self) -> Option<usize> {
        self.owed
    }

    pub fn unclaimed(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.marks
            .iter()
            .enumerate()
            .filter(|(_, m)| m.is_unclaimed())
            .map(|(i, _)| EdgeId(i as u32))
    }

    pub fn unclaimed_count(&self) -> usize {
        self.marks.iter().filter(|m| m.is_unclaimed()).count()
    }

    pub fn turn(&self) -> u32 {
        self.history.len() as u32
    }

    /// Overwrites a mark without touching history or turn order.
    pub fn set_mark(&mut self, e: EdgeId, m: EdgeMark) {
        self.marks[e.idx()] = m;
    }

    /// Applies a move and returns the new position.
    pub fn claim(&self, player: Player, edges: &[EdgeId]) -> Result<GameState, GameError> {
        self.claim_checked(player, edges, None)
    }

    /// Like [`claim`](Self::claim) but, in the secure game, also enforces
    /// rule (iii) against the given certificates.
    pub fn claim_checked(
        &self,
        player: Player,
        edges: &[EdgeId],
        certs: Option<&CertMap>,
    ) -> Result<GameState, GameError> {
        let mut next = self.clone();
        next.apply(player, edges, certs)?;
        Ok(next)
    }

    /// In-place version of [`claim`](Self::claim).
    pub fn apply(
        &mut self,
        player: Player,
        edges: &[EdgeId],
        certs: Option<&CertMap>,
    ) -> Result<u32, GameError> {
        if player != self.to_move {
            return Err(GameError::WrongTurn { expected: self.to_move, got: player });
        }
        if matches!(self.rules.kind, GameKind::Crossing { .. })
            && crossing_status(self) != CrossingStatus::Open
        {
            return Err(GameError::GameOver);
        }
        let mut seen = HashSet::new();
        for &e in edges {
            if e.idx() >= self.marks.len() {
                return Err(GameError::UnknownEdge(e));
            }
            if !seen.insert(e) {
                return Err(GameError::DuplicateEdge(e));
            }
        }
        let available = self.unclaimed_count();
        let secure = self.rules.is_secure();
        match self.rules.kind {
            GameKind::Crossing { p, q } => {
                let want = if player == Player::Maker { p } else { q } as usize;
                let want = want.min(available);
                if edges.len() != want {
                    return Err(GameError::BudgetMismatch { expected: want.to_string(), got: edges.len() });
                }
            }
            GameKind::QResponse { q } | GameKind::Q4Response { q } => {
                if player == Player::Vertical {
                    if edges.is_empty() || edges.len() > q as usize {
                        return Err(GameError::BudgetMismatch {
                            expected: format!("1..={q}"),
                            got: edges.len(),
                        });
                    }
                } else {
                    let want = self.owed.unwrap_or(0).min(available);
                    if edges.len() != want {
                        return Err(GameError::BudgetMismatch { expected: want.to_string(), got: edges.len() });
                    }
                }
            }
            GameKind::Secure { .. } => {
                if player == Player::Vertical {
                    if edges.len() != 1 {
                        return Err(GameError::BudgetMismatch { expected: "1".into(), got: edges.len() });
                    }
                } else {
                    let upgradable = self.marks.iter().filter(|m| **m == EdgeMark::Blue).count();
                    let want = self.owed.unwrap_or(0).min(available + upgradable);
                    if edges.len() != want {
                        return Err(GameError::BudgetMismatch { expected: want.to_string(), got: edges.len() });
                    }
                }
            }
        }

        let mut b = 0;
        if player.is_red() {
            for &e in edges {
                match self.marks[e.idx()] {
                    EdgeMark::Unclaimed => {}
                    EdgeMark::Blue if secure => b += 1,
                    EdgeMark::BlueDouble if secure => b += 2,
                    _ => return Err(GameError::OccupiedEdge(e)),
                }
            }
            if secure {
                let e = edges[0];
                if let Some(v) = secure_rule_check(self, certs, e) {
                    return Err(GameError::SecureRuleViolation(v));
                }
            }
            for &e in edges {
                self.marks[e.idx()] = EdgeMark::Red;
            }
        } else {
            for &e in edges {
                match self.marks[e.idx()] {
                    EdgeMark::Unclaimed => {}
                    EdgeMark::Blue if secure => {}
                    _ => return Err(GameError::OccupiedEdge(e)),
                }
            }
            for &e in edges {
                let m = &mut self.marks[e.idx()];
                *m = if *m == EdgeMark::Blue { EdgeMark::BlueDouble } else { EdgeMark::Blue };
            }
        }

        let turn = self.turn();
        self.history.push(Move { player, edges: edges.to_vec(), turn });
        let factor = self.rules.response_factor();
        self.to_move = match (self.rules.kind, player) {
            (GameKind::Crossing { .. }, Player::Maker) => Player::Breaker,
            (GameKind::Crossing { .. }, _) => Player::Maker,
            (_, Player::Vertical) => Player::Horizontal,
            _ => Player::Vertical,
        };
        self.owed = match (self.rules.kind, player) {
            (GameKind::Secure { .. }, Player::Vertical) => Some(factor + b as usize),
            (_, Player::Vertical) => Some(factor * edges.len()),
            _ => None,
        };
        if player.is_red() {
            self.last_b = b;
        }
        Ok(b)
    }

    /// Replays `history` from an empty board.
    pub fn replay(
        topo: Arc<GridTopology>,
        rules: GameRules,
        history: &[Move],
    ) -> Result<GameState, GameError> {
        let mut s = GameState::new(topo, rules)?;
        for mv in history {
            s.apply(mv.player, &mv.edges, None)?;
        }
        Ok(s)
    }

    /// The red components, each of at least two dual vertices, ordered by
    /// their lowest-then-leftmost member.
    pub fn red_components(&self) -> Vec<Component> {
        red_components(self)
    }
}

/// Red dual adjacency restricted to non-side dual vertices.
fn red_neighbors<'a>(
    state: &'a GameState,
    d: DualId,
) -> impl Iterator<Item = (DualId, EdgeId)> + 'a {
    let topo = state.topology();
    topo.dual_neighbors(d).iter().copied().filter(move |&(w, e)| {
        state.mark(e).is_red() && topo.dual_kind(w) != DualKind::Side
    })
}

pub fn red_components(state: &GameState) -> Vec<Component> {
    let topo = state.topology();
    let mut seen = vec![false; topo.duals.len()];
    let mut out = Vec::new();
    for start in 0..topo.duals.len() {
        let s = DualId(start as u32);
        if seen[start] || topo.dual_kind(s) == DualKind::Side {
            continue;
        }
        seen[start] = true;
        let mut members = vec![s];
        let mut red = BTreeSet::new();
        let mut queue = VecDeque::from([s]);
        while let Some(d) = queue.pop_front() {
            for (w, e) in red_neighbors(state, d) {
                red.insert(e);
                if !seen[w.idx()] {
                    seen[w.idx()] = true;
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        if members.len() < 2 {
            continue;
        }
        out.push(make_component(topo, members, red.into_iter().collect()));
    }
    out.sort_by_key(|c| {
        let p = topo.dual(c.dual_vertices[0]).pos;
        (p.y, p.x)
    });
    out
}

fn make_component(topo: &GridTopology, mut members: Vec<DualId>, red_edges: Vec<EdgeId>) -> Component {
    members.sort_by_key(|&d| {
        let p = topo.dual(d).pos;
        (p.y, p.x)
    });
    let tops: Vec<DualId> = members.iter().copied().filter(|&d| topo.dual_kind(d) == DualKind::Top).collect();
    let bottoms: Vec<DualId> =
        members.iter().copied().filter(|&d| topo.dual_kind(d) == DualKind::Bottom).collect();
    let (class, root) = match (tops.is_empty(), bottoms.is_empty()) {
        (true, true) => (ComponentClass::Floating, None),
        (false, true) => (ComponentClass::Top, tops.first().copied()),
        (true, false) => (ComponentClass::Bottom, bottoms.first().copied()),
        (false, false) => (ComponentClass::Spanning, None),
    };
    Component { dual_vertices: members, red_edges, class, root }
}

/// The red component containing `d`, if `d` lies on a red edge.
pub fn component_of(state: &GameState, d: DualId) -> Option<Component> {
    let topo = state.topology();
    if topo.dual_kind(d) == DualKind::Side {
        return None;
    }
    let mut seen = HashSet::from([d]);
    let mut members = vec![d];
    let mut red = BTreeSet::new();
    let mut queue = VecDeque::from([d]);
    while let Some(v) = queue.pop_front() {
        for (w, e) in red_neighbors(state, v) {
            red.insert(e);
            if seen.insert(w) {
                members.push(w);
                queue.push_back(w);
            }
        }
    }
    (members.len() >= 2).then(|| make_component(topo, members, red.into_iter().collect()))
}

/// Non-red edges with exactly one dual endpoint in `C`.
pub fn external_boundary(state: &GameState, comp: &Component) -> Vec<EdgeId> {
    let topo = state.topology();
    let members: HashSet<DualId> = comp.dual_vertices.iter().copied().collect();
    let mut out = BTreeSet::new();
    for &d in &comp.dual_vertices {
        for &(w, e) in topo.dual_neighbors(d) {
            if !members.contains(&w) && !state.mark(e).is_red() {
                out.insert(e);
            }
        }
    }
    out.into_iter().collect()
}

/// The edges through which red could still leave `C`: non-red boundary
/// edges, minus wall edges and edges whose claim would join two top (two
/// bottom) dual vertices.
pub fn exits(state: &GameState, comp: &Component) -> Vec<EdgeId> {
    let topo = state.topology();
    let members: HashSet<DualId> = comp.dual_vertices.iter().copied().collect();
    let has_top = comp.dual_vertices.iter().any(|&d| topo.dual_kind(d) == DualKind::Top);
    let has_bottom = comp.dual_vertices.iter().any(|&d| topo.dual_kind(d) == DualKind::Bottom);
    let hex = topo.family() == Family::Hex;
    let mut out = BTreeSet::new();
    for &d in &comp.dual_vertices {
        for &(w, e) in topo.dual_neighbors(d) {
            if members.contains(&w) || state.mark(e).is_red() {
                continue;
            }
            let (far_top, far_bottom) = match topo.dual_kind(w) {
                DualKind::Side => continue,
                DualKind::Top => (true, false),
                DualKind::Bottom => (false, true),
                DualKind::Interior => match component_of(state, w) {
                    Some(c) => (c.class == ComponentClass::Top, c.class == ComponentClass::Bottom),
                    None => (false, false),
                },
            };
            if (has_top && far_top) || (has_bottom && far_bottom) {
                continue;
            }
            if hex && shallow(topo, w, has_top, has_bottom) {
                continue;
            }
            out.insert(e);
        }
    }
    out.into_iter().collect()
}

/// On the hexagonal grid the boundary rows come in two labels, so a red path
/// can already reach label 3 (or `top - 2`) with its first edge. Exits of a
/// boundary component that only lead that far are left open.
fn shallow(topo: &GridTopology, w: DualId, has_top: bool, has_bottom: bool) -> bool {
    let Some(l) = topo.level(w) else { return false };
    (has_bottom && l <= 3) || (has_top && l >= topo.top_level() - 2)
}

/// Checks the secure-game claiming rules for a red claim of `e`. Rule (iii)
/// is only checked when certificates are supplied.
pub fn secure_rule_check(state: &GameState, certs: Option<&CertMap>, e: EdgeId) -> Option<Violation> {
    let topo = state.topology();
    let [a, b] = topo.edge(e).duals;
    if topo.dual_kind(a) == DualKind::Side || topo.dual_kind(b) == DualKind::Side {
        return None;
    }
    let ca = component_of(state, a);
    let cb = component_of(state, b);
    if let (Some(x), Some(y)) = (&ca, &cb) {
        if x.contains(b) || y.contains(a) {
            return Some(Violation::CycleOrArch);
        }
    }
    let members = |c: &Option<Component>, d: DualId| -> Vec<DualId> {
        c.as_ref().map(|c| c.dual_vertices.clone()).unwrap_or_else(|| vec![d])
    };
    let merged: Vec<DualId> = members(&ca, a).into_iter().chain(members(&cb, b)).collect();
    let tops = merged.iter().filter(|&&d| topo.dual_kind(d) == DualKind::Top).count();
    let bottoms = merged.iter().filter(|&&d| topo.dual_kind(d) == DualKind::Bottom).count();
    if tops >= 2 || bottoms >= 2 {
        return Some(Violation::CycleOrArch);
    }
    if tops >= 1 && bottoms >= 1 {
        return Some(Violation::TopMeetsBottom);
    }
    if let Some(certs) = certs {
        if state.mark(e).is_blue() && (tops + bottoms) > 0 {
            for c in [&ca, &cb].into_iter().flatten() {
                if c.class != ComponentClass::Floating {
                    continue;
                }
                if let Some(cert) = certs.get(&c.key()) {
                    if cert.path.contains(&e) {
                        return Some(Violation::UnsecuresFloating);
                    }
                }
            }
        }
    }
    None
}

/// Left-right blue crossing in the primal, or top-bottom red crossing in the
/// dual.
pub fn crossing_status(state: &GameState) -> CrossingStatus {
    if blue_crosses(state) {
        CrossingStatus::MakerWin
    } else if red_crosses(state) {
        CrossingStatus::BreakerWin
    } else {
        CrossingStatus::Open
    }
}

/// `(blue crosses left-right, red crosses top-bottom)`, checked separately.
pub fn crossings(state: &GameState) -> (bool, bool) {
    (blue_crosses(state), red_crosses(state))
}

fn blue_crosses(state: &GameState) -> bool {
    let topo = state.topology();
    let mut seen = vec![false; topo.vertices.len()];
    let mut queue: VecDeque<VertexId> = topo.left_vertices.iter().copied().collect();
    for v in &queue {
        seen[v.idx()] = true;
    }
    while let Some(v) = queue.pop_front() {
        if topo.is_right(v) {
            return true;
        }
        for &(w, e) in topo.vertex_neighbors(v) {
            if state.mark(e).is_blue() && !seen[w.idx()] {
                seen[w.idx()] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

fn red_crosses(state: &GameState) -> bool {
    red_crossing_path(state).is_some()
}

fn red_crossing_path(state: &GameState) -> Option<Vec<EdgeId>> {
    match completion(state, true) {
        Some((0, path)) => Some(path),
        _ => None,
    }
}

/// The fewest unclaimed edges red needs for a top-bottom dual crossing, or
/// `None` if blue has already cut every route.
pub fn min_completion_cost(state: &GameState) -> Option<u32> {
    completion(state, false).map(|(c, _)| c)
}

/// Like [`min_completion_cost`] but also returns the unclaimed edges of one
/// cheapest route, ordered from bottom to top.
pub fn min_completion_witness(state: &GameState) -> Option<(u32, Vec<EdgeId>)> {
    completion(state, false).map(|(c, path)| {
        let fresh = path.into_iter().filter(|&e| state.mark(e).is_unclaimed()).collect();
        (c, fresh)
    })
}

/// 0-1 breadth-first search from the bottom dual vertices.
fn completion(state: &GameState, red_only: bool) -> Option<(u32, Vec<EdgeId>)> {
    let topo = state.topology();
    let n = topo.duals.len();
    let mut dist = vec![u32::MAX; n];
    let mut via: Vec<Option<(DualId, EdgeId)>> = vec![None; n];
    let mut deque = VecDeque::new();
    for &b in &topo.bottom_duals {
        dist[b.idx()] = 0;
        deque.push_back(b);
    }
    while let Some(d) = deque.pop_front() {
        if topo.dual_kind(d) == DualKind::Top {
            let mut path = Vec::new();
            let mut cur = d;
            while let Some((p, e)) = via[cur.idx()] {
                path.push(e);
                cur = p;
            }
            path.reverse();
            return Some((dist[d.idx()], path));
        }
        for &(w, e) in topo.dual_neighbors(d) {
            if topo.dual_kind(w) == DualKind::Side {
                continue;
            }
            let cost = match state.mark(e) {
                EdgeMark::Red => 0,
                EdgeMark::Unclaimed if !red_only => 1,
                _ => continue,
            };
            let nd = dist[d.idx()] + cost;
            if nd < dist[w.idx()] {
                dist[w.idx()] = nd;
                via[w.idx()] = Some((d, e));
                if cost == 0 {
                    deque.push_front(w);
                } else {
                    deque.push_back(w);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_hexagonal, build_triangular, Coord};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tri(m: u32, n: u32) -> Arc<GridTopology> {
        Arc::new(build_triangular(m, n).unwrap())
    }

    fn edge(t: &GridTopology, x2: i32, y2: i32) -> EdgeId {
        t.edge_at(Coord::new(x2, y2)).unwrap()
    }

    #[test]
    fn new_game_checks_rules() {
        let t = tri(3, 3);
        let s = GameState::new(t.clone(), GameRules::crossing(1, 1)).unwrap();
        assert_eq!(s.to_move(), Player::Maker);
        assert!(s.marks().iter().all(|m| m.is_unclaimed()));
        assert!(GameState::new(t.clone(), GameRules::secure(Family::Hex)).is_err());
        let h = Arc::new(build_hexagonal(4, 4).unwrap());
        let s = GameState::new(h, GameRules::q4_response(4)).unwrap();
        assert_eq!(s.to_move(), Player::Vertical);
    }

    #[test]
    fn secure_game_budgets_follow_overwrites() {
        let t = tri(8, 4);
        let s = GameState::new(t.clone(), GameRules::secure(Family::Tri)).unwrap();
        let e1 = edge(&t, 8, 4);
        let e2 = edge(&t, 12, 4);
        let s = s.claim(Player::Vertical, &[e1]).unwrap();
        assert_eq!(s.owed(), Some(1));
        let s = s.claim(Player::Horizontal, &[e2]).unwrap();
        // Vertical overwrites the blue edge: Horizontal now owes two.
        let s = s.claim(Player::Vertical, &[e2]).unwrap();
        assert_eq!(s.last_b(), 1);
        assert_eq!(s.owed(), Some(2));
        let err = s.claim(Player::Horizontal, &[e1, e2]).unwrap_err();
        assert_eq!(err, GameError::OccupiedEdge(e1));
        let e3 = edge(&t, 16, 4);
        let e4 = edge(&t, 20, 4);
        let s = s.claim(Player::Horizontal, &[e3, e4]).unwrap();
        // Double claim, then overwrite: b = 2.
        let s = s.claim(Player::Vertical, &[edge(&t, 5, 5)]).unwrap();
        let s = s.claim(Player::Horizontal, &[e3]).unwrap();
        assert_eq!(s.mark(e3), EdgeMark::BlueDouble);
        let s = s.claim(Player::Vertical, &[e3]).unwrap();
        assert_eq!(s.last_b(), 2);
        assert_eq!(s.owed(), Some(3));
    }

    #[test]
    fn occupied_and_turn_errors() {
        let t = tri(4, 4);
        let s = GameState::new(t.clone(), GameRules::crossing(1, 1)).unwrap();
        let e = edge(&t, 2, 2);
        assert!(matches!(s.claim(Player::Breaker, &[e]), Err(GameError::WrongTurn { .. })));
        let s = s.claim(Player::Maker, &[e]).unwrap();
        assert_eq!(s.claim(Player::Breaker, &[e]).unwrap_err(), GameError::OccupiedEdge(e));
        let s2 = GameState::new(t.clone(), GameRules::secure(Family::Tri)).unwrap();
        let s2 = s2.claim(Player::Vertical, &[e]).unwrap();
        let s2 = s2.claim(Player::Horizontal, &[edge(&t, 6, 2)]).unwrap();
        assert_eq!(s2.claim(Player::Vertical, &[e]).unwrap_err(), GameError::OccupiedEdge(e));
    }

    #[test]
    fn rule_checks() {
        let t = tri(8, 4);
        let mut s = GameState::new(t.clone(), GameRules::secure(Family::Tri)).unwrap();
        // Two row-4 horizontal edges reach two top dual vertices; a red path
        // joining them is an arch.
        for e in [edge(&t, 4, 8), edge(&t, 5, 7), edge(&t, 7, 7)] {
            s.set_mark(e, EdgeMark::Red);
        }
        assert_eq!(secure_rule_check(&s, None, edge(&t, 8, 8)), Some(Violation::CycleOrArch));
        // Top component meets bottom component.
        let mut s = GameState::new(t.clone(), GameRules::secure(Family::Tri)).unwrap();
        for e in [edge(&t, 4, 8), edge(&t, 6, 2), edge(&t, 5, 3), edge(&t, 4, 4), edge(&t, 5, 5), edge(&t, 6, 6)] {
            s.set_mark(e, EdgeMark::Red);
        }
        assert_eq!(secure_rule_check(&s, None, edge(&t, 5, 7)), Some(Violation::TopMeetsBottom));
        // Extending a lone red edge is fine.
        let mut s = GameState::new(t.clone(), GameRules::secure(Family::Tri)).unwrap();
        s.set_mark(edge(&t, 8, 4), EdgeMark::Red);
        assert_eq!(secure_rule_check(&s, None, edge(&t, 9, 5)), None);
    }

    #[test]
    fn components_and_classes() {
        let t = tri(8, 4);
        let mut s = GameState::new(t.clone(), GameRules::secure(Family::Tri)).unwrap();
        assert!(red_components(&s).is_empty());
        s.set_mark(edge(&t, 9, 5), EdgeMark::Red);
        let cs = red_components(&s);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].class, ComponentClass::Floating);
        assert_eq!(cs[0].dual_vertices.len(), 2);
        // A red path from the top boundary downward.
        s.set_mark(edge(&t, 4, 8), EdgeMark::Red);
        s.set_mark(edge(&t, 5, 7), EdgeMark::Red);
        let cs = red_components(&s);
        assert_eq!(cs.len(), 2);
        let top = cs.iter().find(|c| c.class == ComponentClass::Top).unwrap();
        assert_eq!(t.dual(top.root.unwrap()).pos, Coord::new(4, 9));
        assert!(exits(&s, top).len() <= external_boundary(&s, top).len());
    }

    #[test]
    fn boundary_of_single_edge_and_trees() {
        let t = tri(8, 6);
        let mut s = GameState::new(t.clone(), GameRules::secure(Family::Tri)).unwrap();
        s.set_mark(edge(&t, 9, 5), EdgeMark::Red);
        let c = &red_components(&s)[0];
        assert_eq!(external_boundary(&s, c).len(), 4);
        s.set_mark(edge(&t, 12, 4), EdgeMark::Red);
        let c = &red_components(&s)[0];
        assert!(external_boundary(&s, c).len() <= c.red_edges.len() + 3);
    }

    #[test]
    fn crossing_status_extremes() {
        let t = tri(4, 4);
        let n = t.num_edges();
        let all = |m| GameState::with_marks(t.clone(), GameRules::crossing(1, 1), vec![m; n], Player::Maker).unwrap();
        assert_eq!(crossing_status(&all(EdgeMark::Blue)), CrossingStatus::MakerWin);
        assert_eq!(crossing_status(&all(EdgeMark::Red)), CrossingStatus::BreakerWin);
        assert_eq!(min_completion_cost(&all(EdgeMark::Red)), Some(0));
        assert_eq!(min_completion_cost(&all(EdgeMark::Blue)), None);
    }

    #[test]
    fn random_full_colourings_have_one_winner() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in [tri(4, 4), Arc::new(build_hexagonal(4, 4).unwrap())] {
            for _ in 0..200 {
                let marks: Vec<EdgeMark> = (0..t.num_edges())
                    .map(|_| *[EdgeMark::Red, EdgeMark::Blue].choose(&mut rng).unwrap())
                    .collect();
                let s = GameState::with_marks(t.clone(), GameRules::crossing(1, 1), marks, Player::Maker).unwrap();
                assert_ne!(crossing_status(&s), CrossingStatus::Open);
                assert_eq!(blue_crosses(&s), !red_crosses(&s));
            }
        }
    }

    #[test]
    fn empty_board_completion_costs() {
        // Hand count on Δ: enter the bottom strip, then two edges per strip
        // (cross a row, then a slanted edge to the downward face), then the
        // top boundary edge: 2n - 1. On H the label climbs by at most 2 per
        // edge from 2 to 2m - 2: m - 2 edges.
        for (m, n, want) in [(4, 3, 5), (6, 5, 9), (8, 4, 7)] {
            let t = tri(m, n);
            let s = GameState::new(t, GameRules::crossing(1, 1)).unwrap();
            assert_eq!(min_completion_cost(&s), Some(want), "Δ({m},{n})");
        }
        for (n, m, want) in [(5, 4, 2), (4, 5, 3), (3, 8, 6)] {
            let h = Arc::new(build_hexagonal(n, m).unwrap());
            let s = GameState::new(h, GameRules::q4_response(1)).unwrap();
            assert_eq!(min_completion_cost(&s), Some(want), "H({n},{m})");
        }
    }
}
