//! Exact minimax for crossing games on tiny boards.
//!
//! Turns of `p` (or `q`) claims are expanded one claim at a time; the memo
//! merges the orderings of a turn. Keys optionally fold the left-right
//! mirror of the board.

use crate::game_state::{GameRules, GameState, Player};
use crate::lattice::{build_triangular, Coord, EdgeId, GridTopology};
use crate::suites::SuiteReport;
use dashmap::DashMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;
use thiserror::Error;

pub const DEFAULT_CAP: usize = 22;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("{unclaimed} unclaimed edges exceed the solver cap of {cap}")]
    CapExceeded { unclaimed: usize, cap: usize },
    #[error("the cap may not exceed 64 edges")]
    CapTooLarge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Winner {
    Maker,
    Breaker,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Winner::Maker => "Maker",
            Winner::Breaker => "Breaker",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PvMove {
    pub player: Player,
    pub edge: EdgeId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub winner: Winner,
    /// One claim per entry; consecutive entries of a player form a turn.
    pub principal_variation: Vec<PvMove>,
    pub nodes_visited: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    pub cap: usize,
    pub memo: bool,
    pub symmetry: bool,
    pub parallel: bool,
    /// Expand whole turns as subsets instead of single claims.
    pub subsets: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { cap: DEFAULT_CAP, memo: true, symmetry: true, parallel: true, subsets: false }
    }
}

/// Solves the crossing game `(p, q)` from `state`, with the player to move
/// starting a fresh turn.
pub fn solve(topo: &GridTopology, p: u32, q: u32, state: &GameState) -> Result<SolveResult, SolverError> {
    solve_with(topo, p, q, state, SolverOptions::default())
}

pub fn solve_with(
    topo: &GridTopology,
    p: u32,
    q: u32,
    state: &GameState,
    opts: SolverOptions,
) -> Result<SolveResult, SolverError> {
    if opts.cap > 64 {
        return Err(SolverError::CapTooLarge);
    }
    let unclaimed = state.unclaimed_count();
    if unclaimed > opts.cap {
        return Err(SolverError::CapExceeded { unclaimed, cap: opts.cap });
    }
    let search = Search::new(topo, p, q, state, opts);
    let maker_moves = !state.to_move().is_red();
    let left = search.turn_size(maker_moves, search.all);
    let root = Node { blue: 0, red: 0, maker: maker_moves, left };
    let maker_wins = if opts.parallel { search.win_parallel(root) } else { search.win(root) };
    let principal_variation = search.principal_variation(root, maker_wins);
    Ok(SolveResult {
        winner: if maker_wins { Winner::Maker } else { Winner::Breaker },
        principal_variation,
        nodes_visited: search.nodes.load(Ordering::Relaxed),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    blue: u64,
    red: u64,
    maker: bool,
    left: u8,
}

struct Search {
    p: u32,
    q: u32,
    opts: SolverOptions,
    /// Unclaimed edges at the root, in static search order.
    vars: Vec<EdgeId>,
    all: u64,
    /// Vertices with every left vertex merged into 0 and every right vertex
    /// into 1.
    nodes_count: usize,
    edges: Vec<(usize, usize, Link)>,
    incident: Vec<Vec<usize>>,
    /// Variable index permutation under the mirror, when it is a symmetry.
    mirror: Option<Vec<usize>>,
    memo: DashMap<Node, bool>,
    nodes: AtomicU64,
}

#[derive(Clone, Copy, Debug)]
enum Link {
    Var(usize),
    Blue,
    Red,
}

enum Analysis {
    Decided(bool),
    /// Unclaimed edges on no remaining route, and the live ones in the order
    /// to try them.
    Open { dead: u64, order: Vec<usize> },
}

impl Search {
    fn new(topo: &GridTopology, p: u32, q: u32, state: &GameState, opts: SolverOptions) -> Search {
        let mut vars: Vec<EdgeId> = state.unclaimed().collect();
        // Edges nearer the middle row first; they decide most games.
        let mid = topo.vertices.iter().map(|v| v.pos.y).max().unwrap_or(0) / 2;
        vars.sort_by_key(|&e| {
            let m = topo.edge(e).mid;
            ((m.y - mid).abs(), m.x, m.y)
        });
        let index: HashMap<EdgeId, usize> = vars.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut node_of = vec![usize::MAX; topo.vertices.len()];
        for v in &topo.left_vertices {
            node_of[v.idx()] = 0;
        }
        for v in &topo.right_vertices {
            // A vertex on both sides is already a crossing; keep it on the left
            // and join the two terminals below.
            if node_of[v.idx()] == usize::MAX {
                node_of[v.idx()] = 1;
            }
        }
        let mut nodes_count = 2;
        for n in node_of.iter_mut().filter(|n| **n == usize::MAX) {
            *n = nodes_count;
            nodes_count += 1;
        }
        let mut edges = Vec::new();
        if topo.left_vertices.iter().any(|v| topo.is_right(*v)) {
            edges.push((0, 1, Link::Blue));
        }
        for (i, edge) in topo.edges.iter().enumerate() {
            let e = EdgeId(i as u32);
            let link = match index.get(&e) {
                Some(&k) => Link::Var(k),
                None if state.mark(e).is_red() => Link::Red,
                None => Link::Blue,
            };
            let [a, b] = edge.ends;
            edges.push((node_of[a.idx()], node_of[b.idx()], link));
        }
        let mut incident = vec![Vec::new(); nodes_count];
        for (i, &(a, b, _)) in edges.iter().enumerate() {
            if a != b {
                incident[a].push(i);
                incident[b].push(i);
            }
        }
        let mirror = if opts.symmetry { mirror_map(topo, state, &vars, &index) } else { None };
        let all = if vars.len() == 64 { u64::MAX } else { (1u64 << vars.len()) - 1 };
        Search {
            p,
            q,
            opts,
            vars,
            all,
            nodes_count,
            edges,
            incident,
            mirror,
            memo: DashMap::new(),
            nodes: AtomicU64::new(0),
        }
    }

    fn turn_size(&self, maker: bool, free: u64) -> u8 {
        let k = if maker { self.p } else { self.q } as u64;
        k.min(free.count_ones() as u64) as u8
    }

    fn analyze(&self, blue: u64, red: u64) -> Analysis {
        let bit = |k: usize, m: u64| m >> k & 1 == 1;
        let is_blue = |l: Link| match l {
            Link::Blue => true,
            Link::Red => false,
            Link::Var(k) => bit(k, blue),
        };
        let is_open = |l: Link| match l {
            Link::Blue => true,
            Link::Red => false,
            Link::Var(k) => !bit(k, red),
        };
        if self.reaches(|l| is_blue(l)) {
            return Analysis::Decided(true);
        }
        // Strip dangling ends: an edge on no simple left-right route.
        let n = self.nodes_count;
        let mut alive: Vec<bool> = self.edges.iter().map(|&(a, b, l)| a != b && is_open(l)).collect();
        let mut degree = vec![0u32; n];
        for (i, &(a, b, _)) in self.edges.iter().enumerate() {
            if alive[i] {
                degree[a] += 1;
                degree[b] += 1;
            }
        }
        let mut stack: Vec<usize> = (2..n).filter(|&v| degree[v] <= 1).collect();
        while let Some(v) = stack.pop() {
            for &i in &self.incident[v] {
                if !alive[i] {
                    continue;
                }
                alive[i] = false;
                let (a, b, _) = self.edges[i];
                let w = if a == v { b } else { a };
                degree[v] -= 1;
                degree[w] -= 1;
                if w >= 2 && degree[w] == 1 {
                    stack.push(w);
                }
            }
        }
        // Cheapest route for blue: blue edges cost 0, unclaimed cost 1.
        let mut dist = vec![u32::MAX; n];
        let mut via = vec![usize::MAX; n];
        let mut deque = std::collections::VecDeque::from([0usize]);
        dist[0] = 0;
        while let Some(v) = deque.pop_front() {
            for &i in &self.incident[v] {
                if !alive[i] {
                    continue;
                }
                let (a, b, l) = self.edges[i];
                let w = if a == v { b } else { a };
                let c = u32::from(!is_blue(l));
                if dist[v] + c < dist[w] {
                    dist[w] = dist[v] + c;
                    via[w] = i;
                    if c == 0 {
                        deque.push_front(w);
                    } else {
                        deque.push_back(w);
                    }
                }
            }
        }
        if dist[1] == u32::MAX {
            return Analysis::Decided(false);
        }
        let mut order = Vec::new();
        let mut on_path = 0u64;
        let mut at = 1;
        while at != 0 {
            let i = via[at];
            let (a, b, l) = self.edges[i];
            if let Link::Var(k) = l {
                if !bit(k, blue) {
                    order.push(k);
                    on_path |= 1 << k;
                }
            }
            at = if a == at { b } else { a };
        }
        let mut live = 0u64;
        for (i, &(_, _, l)) in self.edges.iter().enumerate() {
            if let Link::Var(k) = l {
                if alive[i] && !bit(k, blue) {
                    live |= 1 << k;
                }
            }
        }
        order.extend((0..self.vars.len()).filter(|&k| bit(k, live) && !bit(k, on_path)));
        let free = self.all & !(blue | red);
        Analysis::Open { dead: free & !live, order }
    }

    /// Left-right connection through the edges accepted by `open`.
    fn reaches(&self, open: impl Fn(Link) -> bool) -> bool {
        let mut seen = vec![false; self.nodes_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            if v == 1 {
                return true;
            }
            for &i in &self.incident[v] {
                let (a, b, l) = self.edges[i];
                let w = if a == v { b } else { a };
                if !seen[w] && open(l) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    /// Folds dead edges into red; they matter to neither side.
    fn normalize(&self, n: Node) -> Result<(Node, Vec<usize>), bool> {
        match self.analyze(n.blue, n.red) {
            Analysis::Decided(v) => Err(v),
            Analysis::Open { dead, order } => {
                let left = n.left.min(order.len() as u8);
                Ok((Node { red: n.red | dead, left, ..n }, order))
            }
        }
    }

    fn key(&self, n: Node) -> Node {
        let Some(perm) = &self.mirror else { return n };
        let flip = |m: u64| {
            let mut out = 0u64;
            let mut rest = m;
            while rest != 0 {
                let k = rest.trailing_zeros() as usize;
                out |= 1 << perm[k];
                rest &= rest - 1;
            }
            out
        };
        let m = Node { blue: flip(n.blue), red: flip(n.red), ..n };
        if (m.blue, m.red) < (n.blue, n.red) {
            m
        } else {
            n
        }
    }

    /// The positions after one step from a normalized `n`: a single claim,
    /// or a whole turn in subset mode.
    fn children(&self, n: Node, order: &[usize]) -> Vec<(Vec<usize>, Node)> {
        let free = self.all & !(n.blue | n.red);
        let step = |claimed: &[usize]| {
            let mask = claimed.iter().fold(0u64, |m, &k| m | 1 << k);
            let (blue, red) = if n.maker { (n.blue | mask, n.red) } else { (n.blue, n.red | mask) };
            let left = n.left - claimed.len() as u8;
            let rest = free & !mask;
            let next = if left == 0 || rest == 0 {
                Node { blue, red, maker: !n.maker, left: self.turn_size(!n.maker, rest) }
            } else {
                Node { blue, red, maker: n.maker, left }
            };
            (claimed.to_vec(), next)
        };
        if self.opts.subsets {
            combinations(order, n.left as usize).iter().map(|c| step(c)).collect()
        } else {
            order.iter().map(|&k| step(&[k])).collect()
        }
    }

    /// Whether Maker wins from `n` with best play.
    fn win(&self, n: Node) -> bool {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        let (n, order) = match self.normalize(n) {
            Ok(x) => x,
            Err(v) => return v,
        };
        let key = self.key(n);
        if self.opts.memo {
            if let Some(v) = self.memo.get(&key) {
                return *v;
            }
        }
        let kids = self.children(n, &order);
        let v = if n.maker {
            kids.iter().any(|(_, c)| self.win(*c))
        } else {
            kids.iter().all(|(_, c)| self.win(*c))
        };
        if self.opts.memo {
            self.memo.insert(key, v);
        }
        v
    }

    fn win_parallel(&self, n: Node) -> bool {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        let (n, order) = match self.normalize(n) {
            Ok(x) => x,
            Err(v) => return v,
        };
        let kids = self.children(n, &order);
        let v = if n.maker {
            kids.par_iter().any(|(_, c)| self.win(*c))
        } else {
            kids.par_iter().all(|(_, c)| self.win(*c))
        };
        if self.opts.memo {
            self.memo.insert(self.key(n), v);
        }
        v
    }

    fn principal_variation(&self, root: Node, maker_wins: bool) -> Vec<PvMove> {
        let mut out = Vec::new();
        let mut n = root;
        while let Ok((norm, order)) = self.normalize(n) {
            n = norm;
            let kids = self.children(n, &order);
            let mover_wins = n.maker == maker_wins;
            let pick = if mover_wins {
                kids.iter().find(|(_, c)| self.win(*c) == maker_wins)
            } else {
                kids.first()
            };
            let Some((claimed, next)) = pick else { break };
            let player = if n.maker { Player::Maker } else { Player::Breaker };
            out.extend(claimed.iter().map(|&k| PvMove { player, edge: self.vars[k] }));
            n = *next;
        }
        out
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k.min(items.len()), 0, &mut Vec::new(), &mut out);
    out
}

/// The left-right mirror as a permutation of the variable edges, if the
/// board and its claimed edges are mirror symmetric.
fn mirror_map(
    topo: &GridTopology,
    state: &GameState,
    vars: &[EdgeId],
    index: &HashMap<EdgeId, usize>,
) -> Option<Vec<usize>> {
    let lo = topo.vertices.iter().map(|v| v.pos.x).min()?;
    let hi = topo.vertices.iter().map(|v| v.pos.x).max()?;
    let flip = |c: Coord| Coord::new(lo + hi - c.x, c.y);
    for (i, edge) in topo.edges.iter().enumerate() {
        let e = EdgeId(i as u32);
        let f = topo.edge_at(flip(edge.mid))?;
        if state.mark(e) != state.mark(f) {
            return None;
        }
    }
    vars.iter().map(|&e| index.get(&topo.edge_at(flip(topo.edge(e).mid))?).copied()).collect()
}

// ---------------------------------------------------------------------------
// Winner tables

/// The guarantee that covers a cell, if any.
pub fn theorem_for(m: u32, n: u32, p: u32, q: u32) -> Option<(&'static str, Winner)> {
    let rules = GameRules::crossing(p, q);
    if rules.maker_guarantee(n) {
        Some(("maker: p >= q, n >= q + 2", Winner::Maker))
    } else if rules.breaker_guarantee(m) {
        Some(("breaker: q >= 4p, m >= q + 1", Winner::Breaker))
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCell {
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub q: u32,
    pub edges: usize,
    /// `None` when the board exceeds the cap.
    pub winner: Option<Winner>,
    pub nodes: u64,
    pub theorem: Option<String>,
    /// Whether the solved winner matches the theorem, where one applies.
    pub agrees: Option<bool>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct WinnerTable {
    pub cells: Vec<TableCell>,
}

#[derive(Clone, Debug)]
pub struct TableRanges {
    pub m: std::ops::RangeInclusive<u32>,
    pub n: std::ops::RangeInclusive<u32>,
    pub p: std::ops::RangeInclusive<u32>,
    pub q: std::ops::RangeInclusive<u32>,
}

/// Solved winners keyed by topology fingerprint and `(p, q)`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SolveCache {
    pub entries: HashMap<String, (Winner, u64)>,
}

impl SolveCache {
    pub fn load(path: &Path) -> std::io::Result<SolveCache> {
        match std::fs::read_to_string(path) {
            Ok(s) => serde_json::from_str(&s).map_err(std::io::Error::other),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(SolveCache::default()),
            Err(e) => Err(e),
        }
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, serde_json::to_string(self).map_err(std::io::Error::other)?)
    }
}

pub fn winner_table(ranges: &TableRanges, cap: usize, cache: &mut SolveCache) -> WinnerTable {
    let mut cells = Vec::new();
    for m in ranges.m.clone() {
        for n in ranges.n.clone() {
            let Ok(topo) = build_triangular(m, n) else { continue };
            let topo = Arc::new(topo);
            for p in ranges.p.clone() {
                for q in ranges.q.clone() {
                    let edges = topo.num_edges();
                    let theorem = theorem_for(m, n, p, q);
                    let key = format!("{}:{p}:{q}", topo.fingerprint());
                    let solved = match cache.entries.get(&key) {
                        Some(&hit) => Some(hit),
                        None if edges <= cap => {
                            let state = GameState::new(topo.clone(), GameRules::crossing(p, q)).expect("crossing rules");
                            let opts = SolverOptions { cap, ..SolverOptions::default() };
                            let r = solve_with(&topo, p, q, &state, opts).expect("within cap");
                            cache.entries.insert(key, (r.winner, r.nodes_visited));
                            Some((r.winner, r.nodes_visited))
                        }
                        None => None,
                    };
                    cells.push(TableCell {
                        m,
                        n,
                        p,
                        q,
                        edges,
                        winner: solved.map(|s| s.0),
                        nodes: solved.map_or(0, |s| s.1),
                        theorem: theorem.map(|t| t.0.to_string()),
                        agrees: match (theorem, solved) {
                            (Some((_, w)), Some((got, _))) => Some(w == got),
                            _ => None,
                        },
                    });
                }
            }
        }
    }
    WinnerTable { cells }
}

impl WinnerTable {
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["m", "n", "p", "q", "edges", "winner", "nodes", "theorem", "agrees"])?;
        for c in &self.cells {
            w.write_record([
                c.m.to_string(),
                c.n.to_string(),
                c.p.to_string(),
                c.q.to_string(),
                c.edges.to_string(),
                c.winner.map_or("cap_exceeded".into(), |w| w.to_string()),
                c.nodes.to_string(),
                c.theorem.clone().unwrap_or_default(),
                c.agrees.map_or(String::new(), |a| a.to_string()),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Cells where a larger `p` turns a Maker win into a Breaker win.
    pub fn monotonicity_breaks(&self) -> Vec<(&TableCell, &TableCell)> {
        let mut out = Vec::new();
        for a in &self.cells {
            for b in &self.cells {
                if (a.m, a.n, a.q) == (b.m, b.n, b.q)
                    && b.p > a.p
                    && a.winner == Some(Winner::Maker)
                    && b.winner == Some(Winner::Breaker)
                {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Agreement suite

/// The empty boards checked against the guarantees.
pub fn agreement_ranges() -> TableRanges {
    TableRanges { m: 2..=6, n: 2..=6, p: 1..=3, q: 1..=6 }
}

/// Solver against the guarantees on every empty board within the cap, on
/// positions reached by the strategies, and the searched responses against
/// the hand rules.
pub fn agreement_suite(budget: u64, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut report = SuiteReport::new("solver_agree");
    let mut cache = SolveCache::default();
    let table = winner_table(&agreement_ranges(), DEFAULT_CAP, &mut cache);
    for c in &table.cells {
        if let Some(agrees) = c.agrees {
            report.samples += 1;
            *report.coverage.entry(format!("theorem cells ({})", c.theorem.as_deref().unwrap_or(""))).or_default() += 1;
            if !agrees {
                report.fail(format!("Δ({},{}) p={} q={}: solver says {:?}", c.m, c.n, c.p, c.q, c.winner));
            }
        }
    }
    for (a, b) in table.monotonicity_breaks() {
        report.fail(format!("Δ({},{}) q={}: Maker wins at p={} but not at p={}", a.m, a.n, a.q, a.p, b.p));
    }
    let solved = table.cells.iter().filter(|c| c.winner.is_some()).count();
    report.notes.push(format!("{solved} of {} table cells within the cap", table.cells.len()));

    let positions = budget.clamp(4, 200);
    crate::suites::strategy_positions(&mut report, positions, seed);
    crate::suites::hand_table_check(&mut report);
    report.finish(start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game_state::EdgeMark;

    fn empty(m: u32, n: u32, p: u32, q: u32) -> (Arc<GridTopology>, GameState) {
        let topo = Arc::new(build_triangular(m, n).unwrap());
        let s = GameState::new(topo.clone(), GameRules::crossing(p, q)).unwrap();
        (topo, s)
    }

    #[test]
    fn cap_is_enforced() {
        let (topo, s) = empty(6, 3, 1, 1);
        assert_eq!(
            solve(&topo, 1, 1, &s),
            Err(SolverError::CapExceeded { unclaimed: 34, cap: DEFAULT_CAP })
        );
    }

    #[test]
    fn full_board_is_a_leaf() {
        let (topo, s) = empty(3, 2, 1, 1);
        let mut s = s;
        for i in 0..topo.num_edges() {
            s.set_mark(EdgeId(i as u32), if i % 2 == 0 { EdgeMark::Blue } else { EdgeMark::Red });
        }
        let r = solve(&topo, 1, 1, &s).unwrap();
        let expect = match crate::game_state::crossing_status(&s) {
            crate::game_state::CrossingStatus::MakerWin => Winner::Maker,
            _ => Winner::Breaker,
        };
        assert_eq!(r.winner, expect);
        assert!(r.principal_variation.is_empty());
    }

    #[test]
    fn options_agree() {
        for (m, n) in [(3, 2), (2, 4), (4, 2)] {
            for (p, q) in [(1, 1), (1, 2), (2, 1)] {
                let (topo, s) = empty(m, n, p, q);
                let base = solve(&topo, p, q, &s).unwrap().winner;
                for (memo, symmetry, parallel, subsets) in [
                    (false, false, false, false),
                    (true, false, false, false),
                    (true, true, false, false),
                    (true, true, true, true),
                    (false, false, false, true),
                ] {
                    let opts = SolverOptions { cap: DEFAULT_CAP, memo, symmetry, parallel, subsets };
                    assert_eq!(solve_with(&topo, p, q, &s, opts).unwrap().winner, base, "Δ({m},{n}) {p},{q}");
                }
            }
        }
    }

    #[test]
    fn mirror_is_found_on_empty_boards() {
        let (topo, s) = empty(4, 3, 1, 1);
        let vars: Vec<EdgeId> = s.unclaimed().collect();
        let index = vars.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let perm = mirror_map(&topo, &s, &vars, &index).unwrap();
        for (i, &j) in perm.iter().enumerate() {
            assert_eq!(perm[j], i);
        }
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(&[0, 1, 2, 3, 4], 2).len(), 10);
        assert_eq!(combinations(&[0, 1], 3).len(), 1);
    }

    /// Plain minimax over whole turns through the game rules.
    fn oracle(s: &GameState, p: u32, q: u32) -> Winner {
        use crate::game_state::{crossing_status, CrossingStatus};
        match crossing_status(s) {
            CrossingStatus::MakerWin => return Winner::Maker,
            CrossingStatus::BreakerWin => return Winner::Breaker,
            CrossingStatus::Open => {}
        }
        let free: Vec<EdgeId> = s.unclaimed().collect();
        if free.is_empty() {
            return Winner::Breaker;
        }
        let mover = s.to_move();
        let want = if mover == Player::Maker { p } else { q } as usize;
        let goal = if mover == Player::Maker { Winner::Maker } else { Winner::Breaker };
        let idx: Vec<usize> = (0..free.len()).collect();
        for c in combinations(&idx, want) {
            let edges: Vec<EdgeId> = c.iter().map(|&i| free[i]).collect();
            let mut next = s.clone();
            next.apply(mover, &edges, None).unwrap();
            if oracle(&next, p, q) == goal {
                return goal;
            }
        }
        if goal == Winner::Maker { Winner::Breaker } else { Winner::Maker }
    }

    fn random_position(m: u32, n: u32, p: u32, q: u32, free: usize, seed: u64) -> (Arc<GridTopology>, GameState) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let topo = Arc::new(build_triangular(m, n).unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..topo.num_edges()).collect();
        order.shuffle(&mut rng);
        let mut marks = vec![EdgeMark::Unclaimed; topo.num_edges()];
        for (j, &e) in order.iter().skip(free).enumerate() {
            marks[e] = if j % 2 == 0 { EdgeMark::Blue } else { EdgeMark::Red };
        }
        let s = GameState::with_marks(topo.clone(), GameRules::crossing(p, q), marks, Player::Maker).unwrap();
        (topo, s)
    }

    #[test]
    fn agrees_with_plain_minimax_on_empty_boards() {
        for (m, n) in [(3, 2), (4, 2), (2, 3), (3, 3)] {
            for (p, q) in [(1, 1), (1, 2), (2, 1), (1, 3)] {
                let (topo, s) = empty(m, n, p, q);
                assert_eq!(solve(&topo, p, q, &s).unwrap().winner, oracle(&s, p, q), "Δ({m},{n}) {p},{q}");
            }
        }
    }

    #[test]
    fn frozen_small_board() {
        let (topo, s) = empty(3, 2, 1, 1);
        let r = solve(&topo, 1, 1, &s).unwrap();
        assert_eq!(r.winner, Winner::Maker);
        assert_eq!(r.principal_variation.first().map(|m| m.player), Some(Player::Maker));
    }

    #[test]
    fn principal_variation_replays_to_the_result() {
        let (topo, s) = random_position(4, 3, 1, 2, 12, 5);
        let r = solve(&topo, 1, 2, &s).unwrap();
        let mut g = s.clone();
        for mv in &r.principal_variation {
            g.set_mark(mv.edge, if mv.player == Player::Maker { EdgeMark::Blue } else { EdgeMark::Red });
        }
        let end = crate::game_state::crossing_status(&g);
        let want = if r.winner == Winner::Maker {
            crate::game_state::CrossingStatus::MakerWin
        } else {
            crate::game_state::CrossingStatus::BreakerWin
        };
        assert_eq!(end, want);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]

        #[test]
        fn matches_minimax_on_random_positions(seed in 0u64..10_000, free in 4usize..10, p in 1u32..3, q in 1u32..3) {
            let (topo, s) = random_position(4, 3, p, q, free, seed);
            proptest::prop_assert_eq!(solve(&topo, p, q, &s).unwrap().winner, oracle(&s, p, q));
        }

        #[test]
        fn options_do_not_change_the_winner(seed in 0u64..10_000, free in 6usize..16, q in 1u32..4) {
            let (topo, s) = random_position(5, 3, 1, q, free, seed);
            let base = solve(&topo, 1, q, &s).unwrap().winner;
            for (memo, symmetry, parallel) in [(false, false, false), (true, false, true), (true, true, false)] {
                let opts = SolverOptions { cap: DEFAULT_CAP, memo, symmetry, parallel, subsets: false };
                proptest::prop_assert_eq!(solve_with(&topo, 1, q, &s, opts).unwrap().winner, base);
            }
        }

        #[test]
        fn more_claims_never_hurt_maker(seed in 0u64..10_000, free in 6usize..16, q in 1u32..4) {
            let (topo, s1) = random_position(5, 3, 1, q, free, seed);
            let (_, s2) = random_position(5, 3, 2, q, free, seed);
            if solve(&topo, 1, q, &s1).unwrap().winner == Winner::Maker {
                proptest::prop_assert_eq!(solve(&topo, 2, q, &s2).unwrap().winner, Winner::Maker);
            }
        }
    }
}
