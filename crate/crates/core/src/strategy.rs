//! Horizontal's strategy: answering each red edge so the board stays secure,
//! lifted to whole response turns and to the two crossing-game adapters.
//!
//! A red claim is first classified into the case it falls under. Where a
//! fixed rule is known for that case it is tried first; otherwise, or when
//! the rule does not certify the position, a bounded search over catalog
//! brackets, gates and fully blue boundaries picks the cheapest certificate.

use crate::brackets::{find_securing_brackets, instantiate_clipped, BracketInstance, Family};
use crate::game_state::{
    component_of, exits, red_components, Component, ComponentClass, EdgeMark, GameError, GameRules,
    GameState, Player,
};
use crate::lattice::{Coord, DualId, DualKind, EdgeId, GridTopology, Orientation, VertexId};
use crate::security::{check_component, check_grid, gate_ok, CertKind, CertMap, SecurityCertificate};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("no certificate for component {component:?} within budget {budget} ({tag})")]
    NoSecuringMove { component: DualId, budget: u32, tag: String },
    #[error("edge {0:?} is already red")]
    AlreadyRed(EdgeId),
    #[error("out of range: {0}")]
    Precondition(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Where a response came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Hand,
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyResponse {
    pub red_edge: EdgeId,
    /// Claims the certificates need, in claim order. A blue edge listed here
    /// is claimed a second time.
    pub blue_edges: Vec<EdgeId>,
    /// Budget left over after `blue_edges`.
    pub spare: u32,
    pub new_certs: CertMap,
    pub case_tag: String,
    pub b: u32,
    pub budget: u32,
    pub source: Source,
    /// Claims the fixed rule for this case would have made, if one applies
    /// and it certifies the position.
    pub hand_cost: Option<u32>,
    /// Whether a fixed rule exists for this case but failed to certify.
    pub hand_failed: bool,
    /// Claims the search needs on its own.
    pub search_cost: Option<u32>,
}

/// Horizontal's per-edge budget in the secure game.
pub fn budget_for(family: Family, b: u32) -> u32 {
    match family {
        Family::Tri => 1 + b,
        Family::Hex => 4 + b,
    }
}

fn cost_of_mark(m: EdgeMark) -> Option<u32> {
    match m {
        EdgeMark::Unclaimed => Some(0),
        EdgeMark::Blue => Some(1),
        EdgeMark::BlueDouble => Some(2),
        EdgeMark::Red => None,
    }
}

// ---------------------------------------------------------------------------
// Classification

#[derive(Clone, Debug)]
enum Situation {
    /// The edge touches no component and changes none.
    Inert,
    Fresh {
        /// The boundary endpoint, if any.
        boundary: Option<DualId>,
        ends: [DualId; 2],
    },
    Extend {
        comp: Component,
        cert: Option<SecurityCertificate>,
        v2: DualId,
    },
    Merge {
        c1: Component,
        cert1: Option<SecurityCertificate>,
        c2: Component,
        cert2: Option<SecurityCertificate>,
    },
    Illegal,
}

fn is_boundary(topo: &GridTopology, d: DualId) -> bool {
    matches!(topo.dual_kind(d), DualKind::Top | DualKind::Bottom)
}

fn bracket_label(b: &BracketInstance, e: EdgeId) -> (u8, usize) {
    (b.type_id, b.position(e).unwrap_or(0))
}

fn situation(before: &GameState, certs: &CertMap, e: EdgeId) -> Situation {
    let topo = before.topology();
    let [a, b] = topo.edge(e).duals;
    let live = |d: DualId| topo.dual_kind(d) != DualKind::Side;
    let comp = |d: DualId| if live(d) { component_of(before, d) } else { None };
    let (ca, cb) = (comp(a), comp(b));
    let cert = |c: &Component| certs.get(&c.key()).cloned();
    match (ca, cb) {
        (None, None) => {
            if !live(a) || !live(b) {
                return Situation::Inert;
            }
            let boundary = [a, b].into_iter().find(|&d| is_boundary(topo, d));
            Situation::Fresh { boundary, ends: [a, b] }
        }
        (Some(c), None) => {
            let cert = cert(&c);
            Situation::Extend { comp: c, cert, v2: b }
        }
        (None, Some(c)) => {
            let cert = cert(&c);
            Situation::Extend { comp: c, cert, v2: a }
        }
        (Some(c1), Some(c2)) => {
            if c1.key() == c2.key() {
                return Situation::Illegal;
            }
            // Keep a boundary component first.
            let (c1, c2) = if c1.class == ComponentClass::Floating && c2.class != ComponentClass::Floating {
                (c2, c1)
            } else {
                (c1, c2)
            };
            let (cert1, cert2) = (cert(&c1), cert(&c2));
            Situation::Merge { c1, cert1, c2, cert2 }
        }
    }
}

fn tag_for(before: &GameState, e: EdgeId, sit: &Situation) -> String {
    let topo = before.topology();
    let family = topo.family();
    match sit {
        Situation::Inert => "wall".into(),
        Situation::Illegal => "cycle".into(),
        Situation::Fresh { boundary: None, .. } => "1/interior".into(),
        Situation::Fresh { boundary: Some(r), ends } => match family {
            Family::Tri => "1/boundary".into(),
            Family::Hex => {
                let v2 = if ends[0] == *r { ends[1] } else { ends[0] };
                if topo.dual(*r).pos.x == topo.dual(v2).pos.x {
                    "1/boundary/same".into()
                } else {
                    "1/boundary/diff".into()
                }
            }
        },
        Situation::Extend { comp, cert, v2 } => {
            if !exits(before, comp).contains(&e) {
                return if topo.dual_kind(*v2) == DualKind::Side { "2a".into() } else { "arch".into() };
            }
            let Some(cert) = cert else { return "uncertified".into() };
            if cert.path.contains(&e) {
                "2b".into()
            } else if cert.gate() == Some(e) {
                match family {
                    Family::Hex => "2c".into(),
                    Family::Tri => {
                        let n = topo.kind.tri_dims().1 as i32;
                        let l = topo.level(*v2).unwrap_or(0);
                        if l == 2 * n - 1 || l == 2 {
                            "2c/outer".into()
                        } else {
                            "2c/inner".into()
                        }
                    }
                }
            } else if let Some(b) = cert.bracket().filter(|b| b.contains(e)) {
                let (t, i) = bracket_label(b, e);
                format!("2d/T{t}.{i}")
            } else {
                "unsecured".into()
            }
        }
        Situation::Merge { c1, cert1, c2, cert2 } => {
            let f1 = c1.class == ComponentClass::Floating;
            let f2 = c2.class == ComponentClass::Floating;
            if !f1 && !f2 {
                return if c1.class == c2.class { "arch".into() } else { "top-bottom".into() };
            }
            let (Some(k1), Some(k2)) = (cert1, cert2) else { return "uncertified".into() };
            if k2.bracket().is_none() || (f1 && k1.bracket().is_none()) {
                return if f1 { "3b/extra".into() } else { "3a/extra".into() };
            }
            let in_p = |k: &SecurityCertificate| k.path.contains(&e);
            let in_b = |k: &SecurityCertificate| k.bracket().is_some_and(|b| b.contains(e));
            if !f1 {
                if in_p(k1) {
                    "3a/path".into()
                } else if k1.gate() == Some(e) {
                    match k2.bracket().filter(|b| b.contains(e)) {
                        Some(b) => format!("3a/gate/T{}", b.type_id),
                        None => "3a/gate".into(),
                    }
                } else {
                    "3a/other".into()
                }
            } else if in_p(k1) && in_p(k2) {
                "3b/path-path".into()
            } else if (in_p(k1) && in_b(k2)) || (in_p(k2) && in_b(k1)) {
                "3b/path-bracket".into()
            } else if in_b(k1) && in_b(k2) {
                let mut l = [bracket_label(k1.bracket().unwrap(), e), bracket_label(k2.bracket().unwrap(), e)];
                l.sort();
                format!("3b/bb/T{}.{}+T{}.{}", l[0].0, l[0].1, l[1].0, l[1].1)
            } else {
                "3b/other".into()
            }
        }
    }
}

/// The case a red claim of `e` falls under, given the current certificates.
pub fn classify(before: &GameState, certs: &CertMap, e: EdgeId) -> String {
    tag_for(before, e, &situation(before, certs, e))
}

/// Cases the strategy tables enumerate for each family. A recorded tag
/// covers an entry when the entry is a `/`-separated prefix of it.
pub fn enumerated_cases(family: Family) -> &'static [&'static str] {
    match family {
        Family::Tri => &[
            "1/interior",
            "1/boundary",
            "2a",
            "2b",
            "2c/outer",
            "2c/inner",
            "2d/T1.1",
            "2d/T1.2",
            "2d/T1.3",
            "3a/path",
            "3a/gate",
            "3b/path-path",
            "3b/path-bracket",
            "3b/bb/T1.1+T1.3",
            "3b/bb/T1.1+T3.2",
            "3b/bb/T1.1+T4.3",
            "3b/bb/T1.1+T6.3",
            "3b/bb/T1.1+T7.2",
            "3b/bb/T1.1+T7.3",
            "3b/bb/T1.1+T8.2",
        ],
        Family::Hex => &[
            "1/interior",
            "1/boundary/diff",
            "1/boundary/same",
            "2b",
            "2c",
            "2d",
            "3a/path",
            "3b/path-path",
            "3b/path-bracket",
            "3b/bb",
        ],
    }
}

pub fn tag_covers(case: &str, tag: &str) -> bool {
    tag == case || (tag.starts_with(case) && tag.as_bytes().get(case.len()) == Some(&b'/'))
}

// ---------------------------------------------------------------------------
// Certificate search

#[derive(Clone, Debug, PartialEq, Eq)]
enum Want {
    Any,
    Gate,
    Extra,
    Types(Vec<u8>),
    Instance(Vec<EdgeId>),
    Anchor(Coord),
}

impl Want {
    fn admits(&self, cert: &SecurityCertificate) -> bool {
        match (self, &cert.kind) {
            (Want::Any, _) => true,
            (Want::Gate, CertKind::Top { .. } | CertKind::Bottom { .. }) => true,
            (Want::Extra, CertKind::ExtraSecure) => true,
            (Want::Types(ts), CertKind::Floating { bracket }) => ts.contains(&bracket.type_id),
            (Want::Instance(es), CertKind::Floating { bracket }) => {
                let mut a = bracket.edges.clone();
                let mut b = es.clone();
                a.sort();
                b.sort();
                a == b
            }
            (Want::Anchor(c), CertKind::Floating { bracket }) => bracket.anchor == *c,
            _ => false,
        }
    }
}

/// Every certificate shape that could secure `comp` in `state`, with its
/// path set to the exits it leaves open.
fn shapes(state: &GameState, comp: &Component, exits: &[EdgeId]) -> Vec<SecurityCertificate> {
    let topo = state.topology();
    let path_without = |open: &[EdgeId]| -> Vec<EdgeId> {
        exits.iter().copied().filter(|e| !open.contains(e)).collect()
    };
    let mut out = Vec::new();
    match comp.class {
        ComponentClass::Floating => {
            for b in find_securing_brackets(state, comp) {
                let path = path_without(&b.edges);
                out.push(SecurityCertificate { kind: CertKind::Floating { bracket: b }, path });
            }
        }
        ComponentClass::Top | ComponentClass::Bottom => {
            for &g in exits {
                if gate_ok(topo, comp, g) {
                    let kind = if comp.class == ComponentClass::Top {
                        CertKind::Top { gate: g }
                    } else {
                        CertKind::Bottom { gate: g }
                    };
                    out.push(SecurityCertificate { kind, path: path_without(&[g]) });
                }
            }
        }
        ComponentClass::Spanning => return out,
    }
    out.push(SecurityCertificate { kind: CertKind::ExtraSecure, path: exits.to_vec() });
    out
}

fn shape_rank(topo: &GridTopology, c: &SecurityCertificate) -> (u8, bool, u8, i32, i32, u32) {
    match &c.kind {
        CertKind::Floating { bracket } => {
            (0, bracket.clipped, bracket.type_id, bracket.anchor.y, bracket.anchor.x, 0)
        }
        CertKind::Top { gate } | CertKind::Bottom { gate } => {
            let m = topo.edge(*gate).mid;
            (0, false, 0, m.y, m.x, gate.0)
        }
        CertKind::ExtraSecure => (1, false, 0, 0, 0, 0),
    }
}

/// Claims needed to make every edge of `path` blue, doubling edges another
/// certificate's path already relies on.
fn claims_for(state: &GameState, path: &[EdgeId], usage: &HashMap<EdgeId, u32>) -> Option<Vec<EdgeId>> {
    let mut out = Vec::new();
    for &e in path {
        match state.mark(e) {
            EdgeMark::Unclaimed => out.push(e),
            EdgeMark::Blue if usage.get(&e).copied().unwrap_or(0) > 0 => out.push(e),
            EdgeMark::Blue | EdgeMark::BlueDouble => {}
            EdgeMark::Red => return None,
        }
    }
    Some(out)
}

fn blue_claim(state: &mut GameState, e: EdgeId) {
    let m = match state.mark(e) {
        EdgeMark::Unclaimed => EdgeMark::Blue,
        EdgeMark::Blue | EdgeMark::BlueDouble => EdgeMark::BlueDouble,
        EdgeMark::Red => EdgeMark::Red,
    };
    state.set_mark(e, m);
}

#[derive(Clone, Debug)]
struct Repair {
    claims: Vec<EdgeId>,
    certs: CertMap,
}

/// Re-certifies every component of `state` whose certificate no longer
/// holds, spending at most `budget` claims. The component containing `focus`
/// must take a certificate admitted by `want`.
fn repair(
    state: &GameState,
    certs: &CertMap,
    budget: u32,
    focus: Option<(DualId, &Want)>,
    robust: bool,
) -> Result<Repair, DualId> {
    let comps = red_components(state);
    let mut kept = CertMap::new();
    let mut broken = Vec::new();
    for c in &comps {
        let forced = focus.is_some_and(|(d, w)| c.contains(d) && *w != Want::Any);
        match certs.get(&c.key()) {
            Some(cert) if !forced && check_component(state, c, cert).is_ok() => {
                kept.insert(c.key(), cert.clone());
            }
            _ => broken.push(c),
        }
    }
    let mut usage: HashMap<EdgeId, u32> = HashMap::new();
    for cert in kept.values() {
        for &e in &cert.path {
            *usage.entry(e).or_default() += 1;
        }
    }
    let mut work = state.clone();
    let mut claims = Vec::new();
    for c in broken {
        let want = match focus {
            Some((d, w)) if c.contains(d) => w.clone(),
            _ => Want::Any,
        };
        let left = budget - claims.len() as u32;
        let mut options = candidates(&work, c, &usage, &want, left);
        if options.is_empty() {
            return Err(c.key());
        }
        let pick = options
            .iter()
            .take(ROBUST_TRIES)
            .position(|(cl, cert)| !robust || !fragile(&work, &kept, c.key(), cl, cert))
            .unwrap_or(0);
        let (cl, cert) = options.swap_remove(pick);
        for &e in &cl {
            blue_claim(&mut work, e);
        }
        for &e in &cert.path {
            *usage.entry(e).or_default() += 1;
        }
        claims.extend(cl);
        kept.insert(c.key(), cert);
    }
    Ok(Repair { claims, certs: kept })
}

/// How many of the cheapest certificates are checked for a weak bracket edge.
const ROBUST_TRIES: usize = 8;

/// Certificates for `c` within `left` claims, cheapest first.
fn candidates(
    work: &GameState,
    c: &Component,
    usage: &HashMap<EdgeId, u32>,
    want: &Want,
    left: u32,
) -> Vec<(Vec<EdgeId>, SecurityCertificate)> {
    let topo = work.topology();
    let ex = exits(work, c);
    let mut out: Vec<_> = shapes(work, c, &ex)
        .into_iter()
        .filter(|s| want.admits(s))
        .filter_map(|s| claims_for(work, &s.path, usage).map(|cl| (cl, s)))
        .filter(|(cl, _)| cl.len() as u32 <= left)
        .collect();
    out.sort_by_cached_key(|(cl, s)| (cl.len(), shape_rank(topo, s)));
    out
}

/// Whether red could claim an open bracket edge of `cert` that no response
/// within a single-edge budget answers.
fn fragile(work: &GameState, kept: &CertMap, key: DualId, cl: &[EdgeId], cert: &SecurityCertificate) -> bool {
    let Some(bracket) = cert.bracket() else { return false };
    let mut base = work.clone();
    for &e in cl {
        blue_claim(&mut base, e);
    }
    let mut certs = kept.clone();
    certs.insert(key, cert.clone());
    bracket
        .edges
        .iter()
        .filter(|&&f| base.mark(f).is_unclaimed())
        .any(|&f| respond_once(&base, &certs, f, false).is_err())
}

// ---------------------------------------------------------------------------
// Fixed rules

struct HandMove {
    /// Edges the rule makes blue.
    targets: Vec<EdgeId>,
    want: Want,
}

fn edge_at_offset(topo: &GridTopology, at: Coord, dx: i32, dy: i32) -> Option<EdgeId> {
    topo.edge_at(at.offset(dx, dy))
}

fn other_edges(topo: &GridTopology, d: DualId, skip: EdgeId) -> Vec<EdgeId> {
    topo.dual_neighbors(d).iter().map(|&(_, f)| f).filter(|&f| f != skip).collect()
}

fn slanted(topo: &GridTopology, e: EdgeId) -> bool {
    topo.edge(e).mid.y % 2 != 0
}

/// The rules the case analysis spells out, as (targets, wanted shape)
/// alternatives. Empty when the case has no fixed rule.
fn hand_moves(before: &GameState, after: &GameState, e: EdgeId, sit: &Situation, tag: &str) -> Vec<HandMove> {
    let topo = before.topology();
    match topo.family() {
        Family::Tri => tri_hand(before, after, e, sit, tag),
        Family::Hex => hex_hand(after, e, sit, tag),
    }
}

fn tri_hand(before: &GameState, after: &GameState, e: EdgeId, sit: &Situation, tag: &str) -> Vec<HandMove> {
    let topo = before.topology();
    let one = |targets: Vec<Option<EdgeId>>, want: Want| -> Vec<HandMove> {
        match targets.into_iter().collect::<Option<Vec<_>>>() {
            Some(targets) => vec![HandMove { targets, want }],
            None => Vec::new(),
        }
    };
    match sit {
        Situation::Inert | Situation::Illegal => Vec::new(),
        Situation::Fresh { boundary: None, ends } => {
            let f = if !slanted(topo, e) {
                // The top-left edge of the face above.
                let up = *ends.iter().max_by_key(|&&d| topo.dual(d).pos.y).unwrap();
                other_edges(topo, up, e).into_iter().min_by_key(|&f| topo.edge(f).mid.x)
            } else {
                // The horizontal edge of the downward face.
                ends.iter()
                    .find(|&&d| topo.dual(d).orientation == Some(Orientation::Down))
                    .and_then(|&d| edge_at_offset(topo, topo.dual(d).pos, 0, 1))
            };
            one(vec![f], Want::Types(vec![1, 2, 3]))
        }
        Situation::Fresh { boundary: Some(r), ends } => {
            let v2 = if ends[0] == *r { ends[1] } else { ends[0] };
            let f = other_edges(topo, v2, e)
                .into_iter()
                .filter(|&f| slanted(topo, f))
                .min_by_key(|&f| topo.edge(f).mid.x);
            one(vec![f], Want::Gate)
        }
        Situation::Extend { comp, cert: Some(cert), v2 } => {
            let v2pos = topo.dual(*v2).pos;
            if tag == "2a" {
                vec![HandMove { targets: Vec::new(), want: Want::Instance(cert.open_edges()) }]
            } else if tag == "2b" {
                let targets = other_edges(topo, *v2, e);
                let want = match &cert.kind {
                    CertKind::Floating { bracket } => Want::Instance(bracket.edges.clone()),
                    CertKind::ExtraSecure => Want::Extra,
                    _ => Want::Gate,
                };
                vec![HandMove { targets, want }]
            } else if tag == "2c/outer" {
                one(vec![edge_at_offset(topo, v2pos, 1, 0)], Want::Extra)
            } else if tag == "2c/inner" {
                let dy = if comp.class == ComponentClass::Top { -1 } else { 1 };
                one(vec![edge_at_offset(topo, v2pos, 0, dy)], Want::Gate)
            } else if let Some(rest) = tag.strip_prefix("2d/T1.") {
                let a = cert.bracket().unwrap().anchor;
                match rest {
                    "1" => one(vec![edge_at_offset(topo, a, -2, 0)], Want::Types(vec![4])),
                    "2" => one(vec![edge_at_offset(topo, a, -1, -1)], Want::Types(vec![7])),
                    "3" => one(vec![edge_at_offset(topo, a, -1, -1)], Want::Types(vec![5])),
                    _ => Vec::new(),
                }
            } else {
                Vec::new()
            }
        }
        Situation::Extend { cert: None, .. } => Vec::new(),
        Situation::Merge { cert1: Some(k1), cert2: Some(k2), .. } => {
            let rest_of = |b: &BracketInstance| b.edges.iter().copied().filter(|&f| f != e).collect::<Vec<_>>();
            if tag == "3a/path" {
                let b2 = k2.bracket().unwrap();
                vec![HandMove { targets: rest_of(b2), want: Want::Gate }]
            } else if tag.starts_with("3a/gate/T") {
                let b2 = k2.bracket().unwrap();
                let mut out = Vec::new();
                if [3, 4, 7, 8].contains(&b2.type_id) && b2.edges.len() == 3 {
                    out.push(HandMove { targets: vec![b2.edges[2]], want: Want::Gate });
                }
                if [1, 2, 4].contains(&b2.type_id) && b2.edges.len() == 3 {
                    out.push(HandMove { targets: vec![b2.edges[1]], want: Want::Gate });
                }
                out
            } else if tag == "3b/path-path" {
                let (b1, b2) = (k1.bracket().unwrap(), k2.bracket().unwrap());
                vec![HandMove { targets: b1.edges.clone(), want: Want::Instance(b2.edges.clone()) }]
            } else if tag == "3b/path-bracket" {
                let (kp, kb) = if k1.path.contains(&e) { (k1, k2) } else { (k2, k1) };
                let bb = kb.bracket().unwrap();
                vec![HandMove {
                    targets: rest_of(bb),
                    want: Want::Instance(kp.bracket().unwrap().edges.clone()),
                }]
            } else if let Some(pair) = tag.strip_prefix("3b/bb/") {
                let (b1, b2) = (k1.bracket().unwrap(), k2.bracket().unwrap());
                // Put the bracket holding `e` at the smaller label first.
                let (x, y) = {
                    let l1 = bracket_label(b1, e);
                    let l2 = bracket_label(b2, e);
                    if l1 <= l2 { (b1, b2) } else { (b2, b1) }
                };
                let t = |b: &BracketInstance, i: usize| vec![b.edges[i - 1]];
                match pair {
                    // `y` is the left bracket: its third edge is `e`.
                    "T1.1+T1.3" => vec![HandMove { targets: t(y, 1), want: Want::Types(vec![6]) }],
                    "T1.1+T3.2" => vec![HandMove { targets: t(y, 3), want: Want::Types(vec![4]) }],
                    "T1.1+T4.3" => vec![HandMove { targets: t(y, 1), want: Want::Types(vec![6]) }],
                    "T1.1+T6.3" => vec![HandMove { targets: t(y, 1), want: Want::Types(vec![6]) }],
                    "T1.1+T7.2" => vec![HandMove { targets: t(y, 3), want: Want::Types(vec![4]) }],
                    "T1.1+T7.3" => vec![HandMove { targets: t(x, 3), want: Want::Types(vec![8]) }],
                    "T1.1+T8.2" => vec![HandMove { targets: Vec::new(), want: Want::Types(vec![4]) }],
                    _ => Vec::new(),
                }
            } else {
                let _ = after;
                Vec::new()
            }
        }
        Situation::Merge { .. } => Vec::new(),
    }
}

/// The leftmost lowest of `seeds`, and every bracket anchored so that its
/// first interior sits on it.
fn lowest_anchor(topo: &GridTopology, seeds: &[DualId]) -> Option<Coord> {
    let v = seeds.iter().min_by_key(|&&d| {
        let p = topo.dual(d).pos;
        (p.y, p.x)
    })?;
    // Every hexagonal template has its first interior at offset (1, 0).
    Some(topo.dual(*v).pos.offset(-1, 0))
}

fn hex_hand(after: &GameState, e: EdgeId, sit: &Situation, tag: &str) -> Vec<HandMove> {
    let topo = after.topology();
    let non_red = |es: Vec<EdgeId>| es.into_iter().filter(|&f| !after.mark(f).is_red()).collect::<Vec<_>>();
    match sit {
        Situation::Fresh { boundary: None, ends } => ends
            .iter()
            .map(|&v1| HandMove { targets: other_edges(topo, v1, e), want: Want::Types(vec![1, 2, 3]) })
            .collect(),
        Situation::Fresh { boundary: Some(r), .. } => match component_of(after, *r) {
            Some(comp) => vec![HandMove { targets: exits(after, &comp), want: Want::Extra }],
            None => Vec::new(),
        },
        Situation::Extend { cert: Some(cert), v2, .. } => {
            let around = non_red(other_edges(topo, *v2, e));
            if tag == "2b" {
                let want = match &cert.kind {
                    CertKind::Floating { bracket } => Want::Instance(bracket.edges.clone()),
                    CertKind::ExtraSecure => Want::Extra,
                    _ => Want::Gate,
                };
                vec![HandMove { targets: around, want }]
            } else if tag == "2c" {
                vec![HandMove { targets: around, want: Want::Extra }]
            } else if tag.starts_with("2d") {
                let mut seeds = cert.bracket().unwrap().interiors.clone();
                seeds.push(*v2);
                reconstruct(after, &seeds)
            } else {
                Vec::new()
            }
        }
        Situation::Merge { cert1: Some(k1), cert2: Some(k2), .. } => {
            let rest_of = |b: &BracketInstance| b.edges.iter().copied().filter(|&f| f != e).collect::<Vec<_>>();
            if tag == "3a/path" {
                vec![HandMove { targets: rest_of(k2.bracket().unwrap()), want: Want::Gate }]
            } else if tag == "3b/path-path" {
                let (b1, b2) = (k1.bracket().unwrap(), k2.bracket().unwrap());
                vec![HandMove { targets: b1.edges.clone(), want: Want::Instance(b2.edges.clone()) }]
            } else if tag == "3b/path-bracket" {
                let (kp, kb) = if k1.path.contains(&e) { (k1, k2) } else { (k2, k1) };
                vec![HandMove {
                    targets: rest_of(kb.bracket().unwrap()),
                    want: Want::Instance(kp.bracket().unwrap().edges.clone()),
                }]
            } else if tag.starts_with("3b/bb") {
                let mut seeds = k1.bracket().unwrap().interiors.clone();
                seeds.extend(k2.bracket().unwrap().interiors.iter().copied());
                reconstruct(after, &seeds)
            } else {
                Vec::new()
            }
        }
        _ => Vec::new(),
    }
}

/// A new bracket through the lower edges of the leftmost lowest seed; the
/// remaining exits of the merged component are claimed.
fn reconstruct(after: &GameState, seeds: &[DualId]) -> Vec<HandMove> {
    let topo = after.topology();
    let Some(at) = lowest_anchor(topo, seeds) else { return Vec::new() };
    let Some(comp) = component_of(after, seeds[0]) else { return Vec::new() };
    let ex = exits(after, &comp);
    crate::brackets::catalog(Family::Hex)
        .iter()
        .filter_map(|t| instantiate_clipped(t, at, topo))
        .filter(|b| b.edges.iter().all(|&f| !after.mark(f).is_red() || topo.is_wall(f)))
        .map(|b| HandMove {
            targets: ex.iter().copied().filter(|f| !b.contains(*f)).collect(),
            want: Want::Anchor(at),
        })
        .collect()
}

fn focus_of(topo: &GridTopology, e: EdgeId) -> Option<DualId> {
    topo.edge(e).duals.into_iter().find(|&d| topo.dual_kind(d) != DualKind::Side)
}

/// Tries one fixed rule: claims its targets, then requires the position to
/// be certified with no further claims.
fn try_hand(after: &GameState, certs: &CertMap, e: EdgeId, hm: &HandMove, budget: u32, robust: bool) -> Option<Repair> {
    let topo = after.topology();
    let focus = focus_of(topo, e)?;
    let comps = red_components(after);
    let mut usage: HashMap<EdgeId, u32> = HashMap::new();
    for c in &comps {
        if c.contains(focus) {
            continue;
        }
        if let Some(k) = certs.get(&c.key()) {
            for &f in &k.path {
                *usage.entry(f).or_default() += 1;
            }
        }
    }
    let claims = claims_for(after, &hm.targets, &usage)?;
    if claims.len() as u32 > budget {
        return None;
    }
    let mut work = after.clone();
    for &f in &claims {
        blue_claim(&mut work, f);
    }
    let r = repair(&work, certs, 0, Some((focus, &hm.want)), robust).ok()?;
    Some(Repair { claims, certs: r.certs })
}

/// Horizontal's answer in the secure game to a red claim of `e` made from
/// `before`. The returned claims restore security; any spare budget is left
/// to the caller.
pub fn secure_response(before: &GameState, certs: &CertMap, e: EdgeId) -> Result<StrategyResponse, StrategyError> {
    let mut resp = respond_once(before, certs, e, true)?;
    if resp.spare > 0 {
        let mut after = before.clone();
        after.set_mark(e, EdgeMark::Red);
        for &f in &resp.blue_edges {
            blue_claim(&mut after, f);
        }
        let extra = reinforce(&after, &resp.new_certs, resp.spare as usize);
        resp.spare -= extra.len() as u32;
        resp.blue_edges.extend(extra);
    }
    Ok(resp)
}

/// Bracket edges whose red claim could not be answered next turn. Claiming
/// them blue keeps the bracket intact.
fn reinforce(after: &GameState, certs: &CertMap, k: usize) -> Vec<EdgeId> {
    let mut state = after.clone();
    let mut out = Vec::new();
    let edges: BTreeSet<EdgeId> = certs
        .values()
        .flat_map(|c| c.bracket().map(|b| b.edges.clone()).unwrap_or_default())
        .filter(|&f| state.mark(f).is_unclaimed())
        .collect();
    for f in edges {
        if out.len() == k {
            break;
        }
        if respond_once(&state, certs, f, false).is_err() {
            blue_claim(&mut state, f);
            out.push(f);
        }
    }
    out
}

/// Whether a certificate of `r` has an open bracket edge that could not
/// be answered next turn.
fn repair_fragile(after: &GameState, r: &Repair) -> bool {
    let mut state = after.clone();
    for &f in &r.claims {
        blue_claim(&mut state, f);
    }
    r.certs
        .values()
        .filter_map(|c| c.bracket())
        .flat_map(|b| b.edges.iter().copied())
        .filter(|&f| state.mark(f).is_unclaimed())
        .any(|f| respond_once(&state, &r.certs, f, false).is_err())
}

fn respond_once(before: &GameState, certs: &CertMap, e: EdgeId, robust: bool) -> Result<StrategyResponse, StrategyError> {
    let topo = before.topology();
    let b = cost_of_mark(before.mark(e)).ok_or(StrategyError::AlreadyRed(e))?;
    let budget = budget_for(topo.family(), b);
    let sit = situation(before, certs, e);
    let tag = tag_for(before, e, &sit);
    let mut after = before.clone();
    after.set_mark(e, EdgeMark::Red);

    let moves = hand_moves(before, &after, e, &sit, &tag);
    let hand = moves
        .iter()
        .filter_map(|hm| try_hand(&after, certs, e, hm, budget, robust))
        .min_by_key(|r| r.claims.len());
    let focus = focus_of(topo, e);
    let searched = repair(&after, certs, budget, focus.map(|d| (d, &Want::Any)), robust);
    let search_cost = searched.as_ref().ok().map(|r| r.claims.len() as u32);
    let hand_cost = hand.as_ref().map(|r| r.claims.len() as u32);
    let hand_failed = !moves.is_empty() && hand.is_none();
    let weak = |r: &Repair| robust && repair_fragile(&after, r);
    let (chosen, source) = match (hand, searched) {
        (Some(h), Ok(s)) if weak(&h) && !weak(&s) => (s, Source::Search),
        (Some(h), _) => (h, Source::Hand),
        (None, Ok(s)) => (s, Source::Search),
        (None, Err(component)) => {
            return Err(StrategyError::NoSecuringMove { component, budget, tag });
        }
    };
    let spare = budget - chosen.claims.len() as u32;
    Ok(StrategyResponse {
        red_edge: e,
        blue_edges: chosen.claims,
        spare,
        new_certs: chosen.certs,
        case_tag: tag,
        b,
        budget,
        source,
        hand_cost,
        hand_failed,
        search_cost,
    })
}

// ---------------------------------------------------------------------------
// Free edges

/// Picks up to `k` unclaimed edges along a cheapest left-right blue route,
/// lowest edge id first when no route is left.
pub fn free_edges(state: &GameState, k: usize) -> Vec<EdgeId> {
    let mut work = state.clone();
    let mut out = Vec::new();
    while out.len() < k {
        let pick = cheapest_blue_route(&work)
            .and_then(|r| r.into_iter().find(|&e| work.mark(e).is_unclaimed()))
            .or_else(|| work.unclaimed().next());
        let Some(e) = pick else { break };
        work.set_mark(e, EdgeMark::Blue);
        out.push(e);
    }
    out
}

/// 0-1 BFS over primal vertices: blue edges are free, unclaimed cost one,
/// red edges are cut.
fn cheapest_blue_route(state: &GameState) -> Option<Vec<EdgeId>> {
    let topo = state.topology();
    let n = topo.vertices.len();
    let mut dist = vec![u32::MAX; n];
    let mut prev: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
    let mut dq = VecDeque::new();
    for &v in &topo.left_vertices {
        dist[v.idx()] = 0;
        dq.push_back(v);
    }
    while let Some(v) = dq.pop_front() {
        for &(w, e) in topo.vertex_neighbors(v) {
            let c = match state.mark(e) {
                EdgeMark::Red => continue,
                EdgeMark::Unclaimed => 1,
                _ => 0,
            };
            let nd = dist[v.idx()] + c;
            if nd < dist[w.idx()] {
                dist[w.idx()] = nd;
                prev[w.idx()] = Some((v, e));
                if c == 0 {
                    dq.push_front(w);
                } else {
                    dq.push_back(w);
                }
            }
        }
    }
    let end = topo
        .right_vertices
        .iter()
        .copied()
        .filter(|v| dist[v.idx()] < u32::MAX)
        .min_by_key(|v| (dist[v.idx()], v.0))?;
    let mut route = Vec::new();
    let mut cur = end;
    while let Some((p, e)) = prev[cur.idx()] {
        route.push(e);
        cur = p;
    }
    route.reverse();
    Some(route)
}

// ---------------------------------------------------------------------------
// Whole turns

/// Orders a turn's red edges so that, inside each top or bottom component
/// of the resulting position, edges nearer the root come first.
pub fn order_adversary_edges(after: &GameState, edges: &[EdgeId]) -> Vec<EdgeId> {
    let topo = after.topology();
    let mut dist: HashMap<DualId, u32> = HashMap::new();
    for c in red_components(after) {
        let Some(root) = c.root else { continue };
        if !matches!(c.class, ComponentClass::Top | ComponentClass::Bottom) {
            continue;
        }
        let members: HashSet<DualId> = c.dual_vertices.iter().copied().collect();
        let mut q = VecDeque::from([root]);
        dist.insert(root, 0);
        while let Some(d) = q.pop_front() {
            let dd = dist[&d];
            for &(w, f) in topo.dual_neighbors(d) {
                if members.contains(&w) && after.mark(f).is_red() && !dist.contains_key(&w) {
                    dist.insert(w, dd + 1);
                    q.push_back(w);
                }
            }
        }
    }
    let key = |e: &EdgeId| {
        let d = topo.edge(*e).duals.iter().filter_map(|x| dist.get(x)).min().copied().unwrap_or(u32::MAX);
        (d, *e)
    };
    let mut out = edges.to_vec();
    out.sort_by_key(key);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponsePlan {
    /// Edges to claim in the real game, certificate claims first.
    pub claims: Vec<EdgeId>,
    pub free: Vec<EdgeId>,
    pub steps: Vec<StrategyResponse>,
    /// Shadow claims dropped because red took the edge later in the turn or
    /// because they only doubled an edge.
    pub banked: u32,
    /// Set when the strategy could not certify the position and fell back to
    /// blocking the cheapest red route.
    pub fallback: Option<String>,
}

/// Horizontal in a response game. It plays the secure game on a shadow
/// board whose blue edges match the real ones but may be doubled.
#[derive(Clone, Debug)]
pub struct ResponsePlayer {
    shadow: GameState,
    certs: CertMap,
    /// Fall back instead of failing when a turn needs more claims than
    /// allowed; set when playing outside the guarantee.
    lenient: bool,
}

impl ResponsePlayer {
    pub fn new(topo: Arc<GridTopology>) -> Self {
        let family = topo.family();
        let shadow = GameState::new(topo, GameRules::secure(family)).expect("secure rules match the family");
        ResponsePlayer { shadow, certs: CertMap::new(), lenient: false }
    }

    pub fn certs(&self) -> &CertMap {
        &self.certs
    }

    /// The shadow position, on which [`check_grid`] holds after each turn.
    pub fn shadow(&self) -> &GameState {
        &self.shadow
    }

    /// Claims `k` free edges, e.g. on an opening move.
    pub fn free_move(&mut self, real: &GameState, k: usize) -> Vec<EdgeId> {
        let free = free_edges(real, k);
        for &e in &free {
            self.shadow.set_mark(e, EdgeMark::Blue);
        }
        free
    }

    /// Answers red's turn. `real` already shows the red edges; `allowance`
    /// is the number of edges Horizontal must claim.
    pub fn respond(&mut self, real: &GameState, red: &[EdgeId], allowance: usize) -> Result<ResponsePlan, StrategyError> {
        let order = order_adversary_edges(real, red);
        let mut steps = Vec::new();
        let mut fallback = None;
        for &e in &order {
            if self.shadow.mark(e).is_red() {
                continue;
            }
            match secure_response(&self.shadow, &self.certs, e) {
                Ok(resp) => {
                    self.shadow.set_mark(e, EdgeMark::Red);
                    for &f in &resp.blue_edges {
                        blue_claim(&mut self.shadow, f);
                    }
                    self.certs = resp.new_certs.clone();
                    steps.push(resp);
                }
                Err(err) => {
                    self.shadow.set_mark(e, EdgeMark::Red);
                    fallback.get_or_insert_with(|| err.to_string());
                }
            }
        }
        let mut claims: Vec<EdgeId> = Vec::new();
        let mut seen = HashSet::new();
        for s in &steps {
            for &f in &s.blue_edges {
                if real.mark(f).is_unclaimed() && self.shadow.mark(f).is_blue() && seen.insert(f) {
                    claims.push(f);
                }
            }
        }
        let shadow_claims: usize = steps.iter().map(|s| s.blue_edges.len()).sum();
        let banked = (shadow_claims - claims.len()) as u32;
        let available = real.unclaimed_count();
        let want = allowance.min(available);
        if self.lenient && claims.len() > want && fallback.is_none() {
            fallback = Some(format!("turn needs {} claims but only {want} are allowed", claims.len()));
        }
        if fallback.is_some() {
            claims.truncate(want);
        }
        if claims.len() > want {
            return Err(StrategyError::Precondition(format!(
                "turn needs {} claims but only {want} are allowed",
                claims.len()
            )));
        }
        let mut view = real.clone();
        for &f in &claims {
            view.set_mark(f, EdgeMark::Blue);
        }
        let free = if fallback.is_some() {
            block_route(&view, want - claims.len())
        } else {
            free_edges(&view, want - claims.len())
        };
        for &f in &free {
            self.shadow.set_mark(f, EdgeMark::Blue);
        }
        if fallback.is_some() {
            // Start over from the real board; the old certificates no longer apply.
            self.resync(real, &claims, &free);
        }
        Ok(ResponsePlan { claims, free, steps, banked, fallback })
    }

    fn resync(&mut self, real: &GameState, claims: &[EdgeId], free: &[EdgeId]) {
        let mut marks = real.marks().to_vec();
        for &f in claims.iter().chain(free) {
            marks[f.idx()] = EdgeMark::Blue;
        }
        for (i, m) in marks.into_iter().enumerate() {
            self.shadow.set_mark(EdgeId(i as u32), m);
        }
        self.certs = CertMap::new();
        let r = repair(&self.shadow, &CertMap::new(), u32::MAX / 2, None, false);
        if let Ok(r) = r {
            if r.claims.is_empty() {
                self.certs = r.certs;
            }
        }
    }

    /// Whether the shadow position is secure under the current certificates.
    pub fn is_secure(&self) -> bool {
        check_grid(&self.shadow, &self.certs).is_ok()
    }
}

/// Blocks the cheapest red crossing routes one edge at a time.
fn block_route(state: &GameState, k: usize) -> Vec<EdgeId> {
    let mut work = state.clone();
    let mut out = Vec::new();
    while out.len() < k {
        let pick = crate::game_state::min_completion_witness(&work)
            .and_then(|(_, p)| p.first().copied())
            .or_else(|| work.unclaimed().next());
        let Some(e) = pick else { break };
        work.set_mark(e, EdgeMark::Blue);
        out.push(e);
    }
    out
}

/// Horizontal's full move in the secure game: the certificate claims, then
/// spare budget spent on free edges (doubling blue edges once the board has
/// no unclaimed edges left).
pub fn secure_turn(before: &GameState, certs: &CertMap, e: EdgeId) -> Result<(StrategyResponse, Vec<EdgeId>), StrategyError> {
    let resp = secure_response(before, certs, e)?;
    let mut after = before.clone();
    after.set_mark(e, EdgeMark::Red);
    for &f in &resp.blue_edges {
        blue_claim(&mut after, f);
    }
    let mut moves = resp.blue_edges.clone();
    let spare = resp.spare as usize;
    let mut free = free_edges(&after, spare);
    if free.len() < spare {
        let extra: Vec<EdgeId> = (0..after.marks().len() as u32)
            .map(EdgeId)
            .filter(|f| after.mark(*f) == EdgeMark::Blue && !moves.contains(f) && !free.contains(f))
            .take(spare - free.len())
            .collect();
        free.extend(extra);
    }
    moves.extend(free);
    Ok((resp, moves))
}

// ---------------------------------------------------------------------------
// Crossing-game adapters

/// Maker in the `(p, q)` crossing game on `Δ`, playing the response strategy
/// against Breaker's claims.
#[derive(Clone, Debug)]
pub struct MakerAdapter {
    p: u32,
    inner: ResponsePlayer,
    pub log: Vec<ResponsePlan>,
}

impl MakerAdapter {
    /// Refuses outside `p >= q`, `n >= q + 2` unless `unsafe_ok`.
    pub fn new(topo: Arc<GridTopology>, p: u32, q: u32, unsafe_ok: bool) -> Result<Self, StrategyError> {
        if topo.family() != Family::Tri {
            return Err(StrategyError::Precondition("Maker plays on Δ".into()));
        }
        let n = topo.kind.tri_dims().1;
        if !unsafe_ok && !(p >= q && n >= q + 2) {
            return Err(StrategyError::Precondition(format!(
                "Maker's guarantee needs p >= q and n >= q + 2 (p={p}, q={q}, n={n})"
            )));
        }
        let mut inner = ResponsePlayer::new(topo);
        inner.lenient = unsafe_ok;
        Ok(MakerAdapter { p, inner, log: Vec::new() })
    }

    pub fn player(&self) -> &ResponsePlayer {
        &self.inner
    }

    /// Maker's move. `breaker_last` is Breaker's previous turn, empty on the
    /// opening move.
    pub fn next_move(&mut self, state: &GameState, breaker_last: &[EdgeId]) -> Result<Vec<EdgeId>, StrategyError> {
        if breaker_last.is_empty() {
            return Ok(self.inner.free_move(state, self.p as usize));
        }
        let plan = self.inner.respond(state, breaker_last, self.p as usize)?;
        let mut out = plan.claims.clone();
        out.extend(plan.free.iter().copied());
        self.log.push(plan);
        Ok(out)
    }
}

/// Breaker in the `(p, q)` crossing game on `Δ(m,n)`, playing the hexagonal
/// response strategy on `H(n,m)` with colours exchanged.
#[derive(Clone, Debug)]
pub struct BreakerAdapter {
    p: u32,
    q: u32,
    hex: Arc<GridTopology>,
    inner: ResponsePlayer,
    pub log: Vec<ResponsePlan>,
}

impl BreakerAdapter {
    /// Refuses outside `q >= 4p`, `m >= q + 1` unless `unsafe_ok`.
    pub fn new(tri: &GridTopology, p: u32, q: u32, unsafe_ok: bool) -> Result<Self, StrategyError> {
        let (m, n) = tri.kind.tri_dims();
        if !unsafe_ok && !(q >= 4 * p && m > q) {
            return Err(StrategyError::Precondition(format!(
                "Breaker's guarantee needs q >= 4p and m >= q + 1 (p={p}, q={q}, m={m})"
            )));
        }
        let hex = Arc::new(
            crate::lattice::build_hexagonal(n, m).map_err(|e| StrategyError::Precondition(e.to_string()))?,
        );
        let mut inner = ResponsePlayer::new(hex.clone());
        inner.lenient = unsafe_ok;
        Ok(BreakerAdapter { p, q, inner, hex, log: Vec::new() })
    }

    pub fn hex(&self) -> &Arc<GridTopology> {
        &self.hex
    }

    pub fn player(&self) -> &ResponsePlayer {
        &self.inner
    }

    /// The position seen on `H`: Maker's edges red, Breaker's blue.
    pub fn hex_view(&self, state: &GameState) -> GameState {
        let marks = state
            .marks()
            .iter()
            .map(|m| match m {
                EdgeMark::Red => EdgeMark::Blue,
                EdgeMark::Blue | EdgeMark::BlueDouble => EdgeMark::Red,
                EdgeMark::Unclaimed => EdgeMark::Unclaimed,
            })
            .collect();
        GameState::with_marks(self.hex.clone(), GameRules::q4_response(self.p.max(1)), marks, Player::Horizontal)
            .expect("hex view has the same edge count")
    }

    pub fn next_move(&mut self, state: &GameState, maker_last: &[EdgeId]) -> Result<Vec<EdgeId>, StrategyError> {
        let view = self.hex_view(state);
        let plan = self.inner.respond(&view, maker_last, self.q as usize)?;
        let mut out = plan.claims.clone();
        out.extend(plan.free.iter().copied());
        self.log.push(plan);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_hexagonal, build_triangular};
    use crate::security::check_grid;

    fn tri(m: u32, n: u32) -> GameState {
        GameState::new(Arc::new(build_triangular(m, n).unwrap()), GameRules::secure(Family::Tri)).unwrap()
    }

    fn e(s: &GameState, x: i32, y: i32) -> EdgeId {
        s.topology().edge_at(Coord::new(x, y)).unwrap()
    }

    fn play(s: &mut GameState, certs: &mut CertMap, red: EdgeId) -> StrategyResponse {
        let (resp, moves) = secure_turn(s, certs, red).unwrap();
        s.apply(Player::Vertical, &[red], Some(certs)).unwrap();
        s.apply(Player::Horizontal, &moves, None).unwrap();
        *certs = resp.new_certs.clone();
        assert_eq!(check_grid(s, certs), Ok(()), "{}", resp.case_tag);
        resp
    }

    #[test]
    fn case_one_interior_uses_the_edge_above() {
        let mut s = tri(10, 5);
        let mut certs = CertMap::new();
        let r = { let red = e(&s, 9, 5); play(&mut s, &mut certs, red) };
        assert_eq!(r.case_tag, "1/interior");
        assert_eq!(r.source, Source::Hand);
        assert_eq!(r.blue_edges, vec![e(&s, 10, 6)]);
        let cert = certs.values().next().unwrap();
        assert_eq!(cert.bracket().unwrap().type_id, 1);
    }

    #[test]
    fn case_one_horizontal_takes_type_three() {
        let mut s = tri(10, 5);
        let mut certs = CertMap::new();
        let r = { let red = e(&s, 8, 4); play(&mut s, &mut certs, red) };
        assert_eq!(r.case_tag, "1/interior");
        assert_eq!(certs.values().next().unwrap().bracket().unwrap().type_id, 3);
        assert_eq!(r.blue_edges, vec![e(&s, 7, 5)]);
    }

    #[test]
    fn case_one_from_the_top_takes_a_gate() {
        let mut s = tri(10, 5);
        let mut certs = CertMap::new();
        let r = { let red = e(&s, 10, 10); play(&mut s, &mut certs, red) };
        assert_eq!(r.case_tag, "1/boundary");
        assert_eq!(r.blue_edges, vec![e(&s, 9, 9)]);
        assert_eq!(certs.values().next().unwrap().gate(), Some(e(&s, 11, 9)));
    }

    #[test]
    fn type_one_bracket_cases() {
        for (idx, want) in [(0usize, 4u8), (1, 7), (2, 5)] {
            let mut s = tri(12, 6);
            let mut certs = CertMap::new();
            { let red = e(&s, 13, 5); play(&mut s, &mut certs, red) };
            let b = certs.values().next().unwrap().bracket().unwrap().clone();
            assert_eq!(b.type_id, 1);
            let r = play(&mut s, &mut certs, b.edges[idx]);
            assert_eq!(r.case_tag, format!("2d/T1.{}", idx + 1));
            assert_eq!(r.source, Source::Hand, "{}", r.case_tag);
            let nb = certs.values().next().unwrap().bracket().unwrap().type_id;
            assert_eq!(nb, want);
        }
    }

    #[test]
    fn blue_overwrite_buys_two() {
        let mut s = tri(12, 6);
        let mut certs = CertMap::new();
        { let red = e(&s, 13, 5); play(&mut s, &mut certs, red) };
        let p = certs.values().next().unwrap().path[0];
        let r = play(&mut s, &mut certs, p);
        assert_eq!(r.case_tag, "2b");
        assert_eq!(r.b, 1);
        assert_eq!(r.budget, 2);
    }

    #[test]
    fn hex_fresh_edge() {
        let t = Arc::new(build_hexagonal(8, 7).unwrap());
        let mut s = GameState::new(t.clone(), GameRules::secure(Family::Hex)).unwrap();
        let mut certs = CertMap::new();
        let mid = t.edges.iter().enumerate().find(|(_, ed)| {
            ed.duals.iter().all(|&d| t.dual_kind(d) == DualKind::Interior)
                && ed.duals.iter().all(|&d| (4..=8).contains(&t.level(d).unwrap_or(0)))
        });
        let red = EdgeId(mid.unwrap().0 as u32);
        let r = play(&mut s, &mut certs, red);
        assert_eq!(r.case_tag, "1/interior");
        assert!(r.blue_edges.len() <= 4);
    }

    #[test]
    fn ordering_puts_root_edges_first() {
        let mut s = tri(8, 4);
        let far = e(&s, 5, 7);
        let near = e(&s, 4, 8);
        s.set_mark(far, EdgeMark::Red);
        s.set_mark(near, EdgeMark::Red);
        assert_eq!(order_adversary_edges(&s, &[far, near]), vec![near, far]);
    }

    #[test]
    fn free_edges_follow_a_route() {
        let s = tri(4, 3);
        let f = free_edges(&s, 3);
        assert_eq!(f.len(), 3);
        assert!(f.iter().all(|&x| !slanted(s.topology(), x)));
    }

    #[test]
    fn adapters_check_ranges() {
        let t = Arc::new(build_triangular(8, 3).unwrap());
        assert!(MakerAdapter::new(t.clone(), 1, 2, false).is_err());
        assert!(MakerAdapter::new(t.clone(), 1, 1, false).is_ok());
        assert!(BreakerAdapter::new(&t, 1, 3, false).is_err());
        assert!(BreakerAdapter::new(&t, 1, 4, false).is_ok());
    }

    #[test]
    fn coverage_prefixes() {
        assert!(tag_covers("2c", "2c"));
        assert!(tag_covers("3a/gate", "3a/gate/T1"));
        assert!(tag_covers("1", "1/boundary"));
        assert!(!tag_covers("1/interior", "1/boundary"));
        assert!(!tag_covers("2d/T1.1", "2d/T1.10"));
    }
}
