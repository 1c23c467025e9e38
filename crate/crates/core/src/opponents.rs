//! Adversary policies. A policy always plays the red side of the position it
//! is shown; to play Maker, show it the colour-swapped view on `H` (see
//! [`swapped_view`]).

use crate::game_state::{
    component_of, exits, min_completion_witness, red_components, secure_rule_check, ComponentClass, EdgeMark,
    GameRules, GameState, Player, Violation,
};
use crate::lattice::{EdgeId, GridTopology};
use crate::security::{CertKind, CertMap};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Policy {
    Random { seed: u64 },
    GreedyShortestPath,
    GateAttacker,
    BracketAttacker,
    /// Plays the listed edges in order, skipping any that are no longer legal.
    Scripted { edges: Vec<EdgeId> },
    Exhaustive { depth: u32 },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("bad policy spec {0:?}; expected random:SEED, greedy, gate-attacker, bracket-attacker, exhaustive:DEPTH or scripted:E1,E2,...")]
pub struct PolicyParseError(pub String);

impl FromStr for Policy {
    type Err = PolicyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PolicyParseError(s.to_string());
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("random", None) => Ok(Policy::Random { seed: 0 }),
            ("random", Some(a)) => a.parse().map(|seed| Policy::Random { seed }).map_err(|_| bad()),
            ("greedy", None) => Ok(Policy::GreedyShortestPath),
            ("gate-attacker", None) => Ok(Policy::GateAttacker),
            ("bracket-attacker", None) => Ok(Policy::BracketAttacker),
            ("exhaustive", None) => Ok(Policy::Exhaustive { depth: 1 }),
            ("exhaustive", Some(a)) => a.parse().map(|depth| Policy::Exhaustive { depth }).map_err(|_| bad()),
            ("scripted", Some(a)) => a
                .split(',')
                .filter(|t| !t.is_empty())
                .map(|t| t.trim().parse().map(EdgeId))
                .collect::<Result<Vec<_>, _>>()
                .map(|edges| Policy::Scripted { edges })
                .map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Random { seed } => write!(f, "random:{seed}"),
            Policy::GreedyShortestPath => f.write_str("greedy"),
            Policy::GateAttacker => f.write_str("gate-attacker"),
            Policy::BracketAttacker => f.write_str("bracket-attacker"),
            Policy::Exhaustive { depth } => write!(f, "exhaustive:{depth}"),
            Policy::Scripted { edges } => {
                let list: Vec<String> = edges.iter().map(|e| e.0.to_string()).collect();
                write!(f, "scripted:{}", list.join(","))
            }
        }
    }
}

/// `state` with blue and red exchanged, on `topo` (which must have the same
/// edge ids). Maker's edges become red on `H`.
pub fn swapped_view(state: &GameState, topo: Arc<GridTopology>, rules: GameRules) -> GameState {
    let marks = state
        .marks()
        .iter()
        .map(|m| match m {
            EdgeMark::Red => EdgeMark::Blue,
            EdgeMark::Blue | EdgeMark::BlueDouble => EdgeMark::Red,
            EdgeMark::Unclaimed => EdgeMark::Unclaimed,
        })
        .collect();
    GameState::with_marks(topo, rules, marks, Player::Vertical).expect("views share edge ids")
}

/// Whether red may claim `e` now.
pub fn is_legal(state: &GameState, certs: Option<&CertMap>, e: EdgeId) -> bool {
    if state.rules().is_secure() {
        !state.mark(e).is_red() && secure_rule_check(state, certs, e).is_none()
    } else {
        state.mark(e).is_unclaimed()
    }
}

/// Red claims that only close a cycle or an arch; legal outside the secure
/// game but never useful.
fn wasted(state: &GameState, e: EdgeId) -> bool {
    secure_rule_check(state, None, e) == Some(Violation::CycleOrArch)
}

fn candidates(state: &GameState, certs: Option<&CertMap>) -> Vec<EdgeId> {
    let all = (0..state.marks().len() as u32).map(EdgeId).filter(|&e| is_legal(state, certs, e));
    let all: Vec<EdgeId> = all.collect();
    if state.rules().is_secure() {
        return all;
    }
    let useful: Vec<EdgeId> = all.iter().copied().filter(|&e| !wasted(state, e)).collect();
    if useful.is_empty() {
        all
    } else {
        useful
    }
}

fn rng_for(seed: u64, state: &GameState) -> ChaCha8Rng {
    let claimed = state.marks().iter().filter(|m| !m.is_unclaimed()).count() as u64;
    let reds = state.marks().iter().filter(|m| m.is_red()).count() as u64;
    ChaCha8Rng::seed_from_u64(seed ^ claimed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ reds.rotate_left(32))
}

/// Up to `r` legal red edges for `state`. `certs` are the defender's
/// certificates where known; attackers aim at them and, in the secure game,
/// they feed rule (iii).
pub fn next_moves(policy: &Policy, state: &GameState, certs: Option<&CertMap>, r: usize) -> Vec<EdgeId> {
    if let Policy::Exhaustive { depth } = policy {
        return exhaustive(state, certs, r, *depth);
    }
    let mut work = state.clone();
    let mut out = Vec::new();
    let mut rng = match policy {
        Policy::Random { seed } => Some(rng_for(*seed, state)),
        _ => None,
    };
    while out.len() < r {
        let pick = match policy {
            Policy::Random { .. } => {
                let c = candidates(&work, certs);
                c.choose(rng.as_mut().unwrap()).copied()
            }
            Policy::GreedyShortestPath => greedy(&work, certs),
            Policy::GateAttacker => gate_attack(&work, certs).or_else(|| greedy(&work, certs)),
            Policy::BracketAttacker => bracket_attack(&work, certs).or_else(|| greedy(&work, certs)),
            Policy::Scripted { edges } => edges.iter().copied().find(|&e| !out.contains(&e) && is_legal(&work, certs, e)),
            Policy::Exhaustive { .. } => unreachable!(),
        };
        let Some(e) = pick else { break };
        work.set_mark(e, EdgeMark::Red);
        out.push(e);
    }
    out
}

fn greedy(state: &GameState, certs: Option<&CertMap>) -> Option<EdgeId> {
    min_completion_witness(state)
        .and_then(|(_, path)| path.into_iter().find(|&e| is_legal(state, certs, e) && !wasted(state, e)))
        .or_else(|| candidates(state, certs).into_iter().next())
}

fn depth_of(state: &GameState, e: EdgeId, class: ComponentClass) -> i32 {
    let topo = state.topology();
    let l = topo.edge(e).duals.iter().filter_map(|&d| topo.level(d)).collect::<Vec<_>>();
    match class {
        ComponentClass::Top => -l.iter().copied().min().unwrap_or(0),
        _ => l.iter().copied().max().unwrap_or(0),
    }
}

fn gate_attack(state: &GameState, certs: Option<&CertMap>) -> Option<EdgeId> {
    let legal = |e: EdgeId| is_legal(state, certs, e);
    if let Some(certs) = certs {
        let mut gates = Vec::new();
        let mut paths = Vec::new();
        for cert in certs.values() {
            match cert.kind {
                CertKind::Top { gate } | CertKind::Bottom { gate } => {
                    gates.push(gate);
                    paths.extend(cert.path.iter().copied());
                }
                _ => {}
            }
        }
        if let Some(g) = gates.into_iter().filter(|&g| legal(g)).min() {
            return Some(g);
        }
        if let Some(p) = paths.into_iter().filter(|&p| legal(p)).min() {
            return Some(p);
        }
    }
    // Push the deepest boundary component further in.
    let mut best: Option<(i32, EdgeId)> = None;
    for c in red_components(state) {
        if !matches!(c.class, ComponentClass::Top | ComponentClass::Bottom) {
            continue;
        }
        for e in exits(state, &c) {
            if legal(e) && !wasted(state, e) {
                let d = depth_of(state, e, c.class);
                if best.is_none_or(|(bd, be)| (d, std::cmp::Reverse(e)) > (bd, std::cmp::Reverse(be))) {
                    best = Some((d, e));
                }
            }
        }
    }
    if let Some((_, e)) = best {
        return Some(e);
    }
    // Otherwise start a component at a boundary.
    let topo = state.topology();
    let mut fresh: Vec<EdgeId> = topo
        .top_duals
        .iter()
        .chain(&topo.bottom_duals)
        .flat_map(|&d| topo.dual_neighbors(d).iter().map(|&(_, e)| e))
        .filter(|&e| legal(e) && component_of(state, topo.edge(e).duals[0]).is_none())
        .collect();
    fresh.sort();
    fresh.into_iter().next()
}

fn bracket_attack(state: &GameState, certs: Option<&CertMap>) -> Option<EdgeId> {
    let legal = |e: EdgeId| is_legal(state, certs, e);
    let certs = certs?;
    let floating: Vec<_> = certs.values().filter(|c| matches!(c.kind, CertKind::Floating { .. })).collect();
    let in_bracket = |e: EdgeId| floating.iter().filter(|c| c.bracket().is_some_and(|b| b.contains(e))).count();
    let in_path = |e: EdgeId| certs.values().filter(|c| c.path.contains(&e)).count();
    let mut pool: HashSet<EdgeId> = HashSet::new();
    for c in &floating {
        pool.extend(c.bracket().unwrap().edges.iter().copied());
        pool.extend(c.path.iter().copied());
    }
    let mut pool: Vec<EdgeId> = pool.into_iter().filter(|&e| legal(e)).collect();
    pool.sort();
    // Edges shared between two certificates first, then bracket edges, then
    // path edges.
    pool.into_iter().max_by_key(|&e| {
        let (b, p) = (in_bracket(e), in_path(e));
        let score = 4 * (b + p).saturating_sub(1) + 2 * b.min(1) + p.min(1);
        (score, std::cmp::Reverse(e))
    })
}

fn eval(state: &GameState) -> u32 {
    crate::game_state::min_completion_cost(state).unwrap_or(u32::MAX)
}

/// Scores every legal `r`-subset by red's completion cost after `depth`
/// rounds in which blue blocks greedily.
fn exhaustive(state: &GameState, certs: Option<&CertMap>, r: usize, depth: u32) -> Vec<EdgeId> {
    let cands = candidates(state, certs);
    if cands.len() <= r {
        return cands;
    }
    let mut best: Option<(u32, Vec<EdgeId>)> = None;
    let mut chosen = Vec::new();
    subsets(&cands, r, 0, &mut chosen, &mut |set| {
        let mut s = state.clone();
        for &e in set {
            s.set_mark(e, EdgeMark::Red);
        }
        let score = lookahead(&s, depth.saturating_sub(1), r);
        if best.as_ref().is_none_or(|(b, _)| score < *b) {
            best = Some((score, set.to_vec()));
        }
    });
    best.map(|(_, s)| s).unwrap_or_default()
}

fn lookahead(state: &GameState, depth: u32, r: usize) -> u32 {
    let now = eval(state);
    if depth == 0 || now == 0 || now == u32::MAX {
        return now;
    }
    let mut s = state.clone();
    let factor = match state.topology().family() {
        crate::brackets::Family::Tri => 1,
        crate::brackets::Family::Hex => 4,
    };
    for _ in 0..r * factor {
        let Some((_, path)) = min_completion_witness(&s) else { return u32::MAX };
        let Some(&e) = path.first() else { break };
        s.set_mark(e, EdgeMark::Blue);
    }
    let Some((_, path)) = min_completion_witness(&s) else { return u32::MAX };
    let mut best = u32::MAX;
    for &e in path.iter().take(8) {
        let mut t = s.clone();
        t.set_mark(e, EdgeMark::Red);
        best = best.min(lookahead(&t, depth - 1, r));
    }
    best
}

fn subsets(c: &[EdgeId], r: usize, from: usize, acc: &mut Vec<EdgeId>, f: &mut impl FnMut(&[EdgeId])) {
    if acc.len() == r {
        f(acc);
        return;
    }
    for i in from..c.len() {
        if c.len() - i < r - acc.len() {
            break;
        }
        acc.push(c[i]);
        subsets(c, r, i + 1, acc, f);
        acc.pop();
    }
}

/// Picks the attacker-view side for a player: red players see the board as
/// is, Maker sees it swapped onto `hex`.
pub fn attacker_view(state: &GameState, player: Player, hex: Option<&Arc<GridTopology>>) -> GameState {
    if player.is_red() {
        return state.clone();
    }
    let hex = hex.expect("Maker policies need the hexagonal view");
    swapped_view(state, hex.clone(), GameRules::q4_response(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::Family;
    use crate::lattice::{build_hexagonal, build_triangular, Coord};
    use crate::security::SecurityCertificate;

    fn tri(m: u32, n: u32, rules: GameRules) -> GameState {
        GameState::new(Arc::new(build_triangular(m, n).unwrap()), rules).unwrap()
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["random:42", "greedy", "gate-attacker", "bracket-attacker", "exhaustive:2", "scripted:3,1,4"] {
            assert_eq!(s.parse::<Policy>().unwrap().to_string(), s);
        }
        assert!("nope".parse::<Policy>().is_err());
        assert!("random:x".parse::<Policy>().is_err());
    }

    #[test]
    fn greedy_on_empty_board_walks_a_shortest_crossing() {
        let s = tri(6, 4, GameRules::crossing(1, 1));
        let cost = crate::game_state::min_completion_cost(&s).unwrap() as usize;
        let picks = next_moves(&Policy::GreedyShortestPath, &s, None, cost);
        let mut t = s.clone();
        for &e in &picks {
            t.set_mark(e, EdgeMark::Red);
        }
        assert_eq!(crate::game_state::min_completion_cost(&t), Some(0));
    }

    #[test]
    fn random_is_reproducible() {
        let s = tri(6, 4, GameRules::crossing(1, 2));
        let a = next_moves(&Policy::Random { seed: 9 }, &s, None, 2);
        let b = next_moves(&Policy::Random { seed: 9 }, &s, None, 2);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn gate_attacker_claims_the_gate() {
        let mut s = tri(10, 5, GameRules::secure(Family::Tri));
        let t = s.topology_arc().clone();
        let e = |x, y| t.edge_at(Coord::new(x, y)).unwrap();
        s.set_mark(e(10, 10), EdgeMark::Red);
        s.set_mark(e(9, 9), EdgeMark::Blue);
        let comp = red_components(&s).into_iter().next().unwrap();
        let cert = SecurityCertificate { kind: CertKind::Top { gate: e(11, 9) }, path: vec![e(9, 9)] };
        let certs: CertMap = [(comp.key(), cert)].into_iter().collect();
        assert_eq!(next_moves(&Policy::GateAttacker, &s, Some(&certs), 1), vec![e(11, 9)]);
    }

    #[test]
    fn exhaustive_finds_the_only_win() {
        let s = tri(4, 3, GameRules::crossing(1, 1));
        let picks = next_moves(&Policy::Exhaustive { depth: 1 }, &s, None, 1);
        assert_eq!(picks.len(), 1);
        let mut t = s.clone();
        t.set_mark(picks[0], EdgeMark::Red);
        assert_eq!(crate::game_state::min_completion_cost(&t), Some(eval(&s) - 1));
    }

    #[test]
    fn maker_view_is_red_on_hex() {
        let s = tri(5, 3, GameRules::crossing(1, 4));
        let hex = Arc::new(build_hexagonal(3, 5).unwrap());
        let mut s2 = s.clone();
        s2.set_mark(EdgeId(0), EdgeMark::Blue);
        let v = attacker_view(&s2, Player::Maker, Some(&hex));
        assert!(v.mark(EdgeId(0)).is_red());
    }

    #[test]
    fn secure_policies_stay_legal() {
        let mut s = tri(8, 4, GameRules::secure(Family::Tri));
        let mut certs = CertMap::new();
        for turn in 0..30 {
            let pol = [Policy::Random { seed: turn }, Policy::GreedyShortestPath, Policy::GateAttacker][turn as usize % 3].clone();
            let mv = next_moves(&pol, &s, Some(&certs), 1);
            if mv.is_empty() {
                break;
            }
            assert!(is_legal(&s, Some(&certs), mv[0]));
            let (resp, blue) = crate::strategy::secure_turn(&s, &certs, mv[0]).unwrap();
            s.apply(Player::Vertical, &mv, Some(&certs)).unwrap();
            s.apply(Player::Horizontal, &blue, None).unwrap();
            certs = resp.new_certs;
        }
    }
}
