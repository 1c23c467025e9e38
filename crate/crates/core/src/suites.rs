//! Verification suites: property checks driven by random growth and fuzzed
//! play. Each returns a [`SuiteReport`]; the CLI and the acceptance tests
//! share them.

use crate::brackets::Family;
use crate::game_state::{
    crossing_status, crossings, external_boundary, red_components, CrossingStatus, EdgeMark, GameRules, GameState,
    Player,
};
use crate::lattice::{build_hexagonal, build_triangular, DualId, DualKind, EdgeId, GridTopology};
use crate::opponents::{is_legal, next_moves, Policy};
use crate::security::{check_grid, exhaustive_crossing, single_turn_safety, CertMap, Safety};
use crate::strategy::{
    budget_for, enumerated_cases, secure_turn, tag_covers, BreakerAdapter, MakerAdapter, ResponsePlayer,
    StrategyResponse,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, HashSet};
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;
use thiserror::Error;

const MAX_LISTED: usize = 20;

/// Unclaimed-edge count up to which every red move set is also enumerated.
pub const EXHAUSTIVE_LIMIT: usize = 18;

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    /// Items checked: components, turns, games or colorings.
    pub samples: u64,
    pub violation_count: u64,
    /// The first few violations.
    pub violations: Vec<String>,
    pub coverage: BTreeMap<String, u64>,
    /// Enumerated cases never reached.
    pub missing: Vec<String>,
    pub notes: Vec<String>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub(crate) fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.to_string(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.missing.is_empty()
    }

    pub(crate) fn fail(&mut self, msg: impl Into<String>) {
        self.violation_count += 1;
        if self.violations.len() < MAX_LISTED {
            self.violations.push(msg.into());
        }
    }

    fn merge(&mut self, other: SuiteReport) {
        self.samples += other.samples;
        self.violation_count += other.violation_count;
        for v in other.violations {
            if self.violations.len() < MAX_LISTED {
                self.violations.push(v);
            }
        }
        for (k, v) in other.coverage {
            *self.coverage.entry(k).or_default() += v;
        }
        for n in other.notes {
            if self.notes.len() < MAX_LISTED {
                self.notes.push(n);
            }
        }
    }

    pub(crate) fn finish(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_millis();
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Suite {
    Lemma1_1,
    Lemma2_1,
    Lemma3_1,
    Lemma4_1,
    Lemma4_2,
    Duality,
    SolverAgree,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown suite {0:?}; expected one of lemma1_1, lemma2_1, lemma3_1, lemma4_1, lemma4_2, duality, solver_agree")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "lemma1_1" => Suite::Lemma1_1,
            "lemma2_1" => Suite::Lemma2_1,
            "lemma3_1" => Suite::Lemma3_1,
            "lemma4_1" => Suite::Lemma4_1,
            "lemma4_2" => Suite::Lemma4_2,
            "duality" => Suite::Duality,
            "solver_agree" => Suite::SolverAgree,
            _ => return Err(UnknownSuite(s.to_string())),
        })
    }
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Lemma1_1,
        Suite::Lemma2_1,
        Suite::Lemma3_1,
        Suite::Lemma4_1,
        Suite::Lemma4_2,
        Suite::Duality,
        Suite::SolverAgree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1_1 => "lemma1_1",
            Suite::Lemma2_1 => "lemma2_1",
            Suite::Lemma3_1 => "lemma3_1",
            Suite::Lemma4_1 => "lemma4_1",
            Suite::Lemma4_2 => "lemma4_2",
            Suite::Duality => "duality",
            Suite::SolverAgree => "solver_agree",
        }
    }

    /// Runs the suite with `budget` samples (turns, components, colorings).
    pub fn run(self, budget: u64, seed: u64) -> SuiteReport {
        match self {
            Suite::Lemma1_1 => lemma1_1(budget, seed),
            Suite::Lemma2_1 => safety_suite(Family::Tri, budget, seed),
            Suite::Lemma4_1 => safety_suite(Family::Hex, budget, seed),
            Suite::Lemma3_1 => secure_suite(Family::Tri, budget, seed),
            Suite::Lemma4_2 => secure_suite(Family::Hex, budget, seed),
            Suite::Duality => duality(budget, seed),
            Suite::SolverAgree => crate::solver::agreement_suite(budget, seed),
        }
    }
}

fn tri(m: u32, n: u32) -> Arc<GridTopology> {
    Arc::new(build_triangular(m, n).expect("suite boards are valid"))
}

fn hex(n: u32, m: u32) -> Arc<GridTopology> {
    Arc::new(build_hexagonal(n, m).expect("suite boards are valid"))
}

pub const SECURE_POLICIES: [&str; 4] = ["random", "greedy", "gate-attacker", "bracket-attacker"];

fn policy_for(name: &str, seed: u64) -> Policy {
    match name {
        "random" => Policy::Random { seed },
        other => other.parse().expect("known policy"),
    }
}

/// Picks a red move: mostly the policy's choice, sometimes a random legal
/// edge so deterministic policies still visit many positions.
fn adversary_move(
    policy: &Policy,
    state: &GameState,
    certs: Option<&CertMap>,
    r: usize,
    rng: &mut ChaCha8Rng,
    noise: f64,
) -> Vec<EdgeId> {
    if rng.gen_bool(noise) {
        let seed = rng.gen();
        next_moves(&Policy::Random { seed }, state, certs, r)
    } else {
        next_moves(policy, state, certs, r)
    }
}

// ---------------------------------------------------------------------------
// Boundary sizes

/// `|β(C)| <= |E(C)| + 3` for randomly grown red dual trees and graphs on
/// `Δ` up to 10 x 10, and for every component met in fuzzed play.
pub fn lemma1_1(samples: u64, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut report = SuiteReport::new("lemma1_1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let boards: Vec<Arc<GridTopology>> =
        (2..=10).flat_map(|m| (2..=10).map(move |n| (m, n))).map(|(m, n)| tri(m, n)).collect();
    for i in 0..samples {
        let topo = boards.choose(&mut rng).unwrap().clone();
        let size = rng.gen_range(1..=topo.num_edges().min(40));
        let state = grow_component(&topo, size, &mut rng);
        for c in red_components(&state) {
            check_boundary(&state, &c, &mut report, &format!("grown #{i} on {}", topo.kind));
        }
    }
    // Components from secure-game play.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for (k, &(m, n)) in [(6, 3), (8, 4), (10, 5)].iter().enumerate() {
        let topo = tri(m, n);
        for pol in SECURE_POLICIES {
            let policy = policy_for(pol, seed + k as u64);
            let mut state = GameState::new(topo.clone(), GameRules::secure(Family::Tri)).unwrap();
            let mut certs = CertMap::new();
            for _ in 0..60 {
                let mv = adversary_move(&policy, &state, Some(&certs), 1, &mut rng, 0.3);
                let Some(&e) = mv.first() else { break };
                let Ok((resp, blue)) = secure_turn(&state, &certs, e) else { break };
                if state.apply(Player::Vertical, &[e], Some(&certs)).is_err()
                    || state.apply(Player::Horizontal, &blue, None).is_err()
                {
                    break;
                }
                certs = resp.new_certs;
                for c in red_components(&state) {
                    check_boundary(&state, &c, &mut report, &format!("{pol} game on {}", topo.kind));
                }
            }
        }
    }
    report.finish(start)
}

fn check_boundary(state: &GameState, c: &crate::game_state::Component, report: &mut SuiteReport, ctx: &str) {
    report.samples += 1;
    let beta = external_boundary(state, c).len();
    let edges = c.red_edges.len();
    if beta > edges + 3 {
        report.fail(format!("{ctx}: |β| = {beta} > |E| + 3 = {}", edges + 3));
    }
}

/// A red connected dual subgraph of `size` edges grown from a random face.
pub fn grow_component(topo: &Arc<GridTopology>, size: usize, rng: &mut ChaCha8Rng) -> GameState {
    let mut state = GameState::new(topo.clone(), GameRules::crossing(1, 1)).unwrap();
    let live: Vec<DualId> =
        (0..topo.duals.len() as u32).map(DualId).filter(|&d| topo.dual_kind(d) == DualKind::Interior).collect();
    let Some(&seed) = live.choose(rng) else { return state };
    let mut members = vec![seed];
    let mut have: HashSet<DualId> = members.iter().copied().collect();
    for _ in 0..size {
        let frontier: Vec<(DualId, EdgeId)> = members
            .iter()
            .flat_map(|&d| topo.dual_neighbors(d).iter().copied())
            .filter(|&(w, e)| topo.dual_kind(w) != DualKind::Side && !state.mark(e).is_red())
            .collect();
        let Some(&(w, e)) = frontier.choose(rng) else { break };
        state.set_mark(e, EdgeMark::Red);
        // Boundary duals are leaves; never grow through them.
        if have.insert(w) && topo.dual_kind(w) == DualKind::Interior {
            members.push(w);
        }
    }
    state
}

// ---------------------------------------------------------------------------
// Single-turn safety

/// The response game boards of the safety suites: `Δ` with `n = q + 2`,
/// `H` with `m = ceil(1.5 q) + 2`.
pub fn safety_boards(family: Family) -> Vec<(u32, Arc<GridTopology>)> {
    match family {
        Family::Tri => [1u32, 2, 3]
            .into_iter()
            .flat_map(|q| [4u32, 6, 8].into_iter().map(move |m| (q, tri(m, q + 2))))
            .collect(),
        Family::Hex => [1u32, 2]
            .into_iter()
            .flat_map(|q| {
                let m = (3 * q).div_ceil(2) + 2;
                [3u32, 4, 6].into_iter().map(move |n| (q, hex(n, m)))
            })
            .collect(),
    }
}

/// Plays q-response games (`H`: q-4response) and checks every position at
/// the start of Vertical's turn: the shadow is secure, red cannot cross in
/// one turn, and brute force agrees with the search on small boards.
pub fn safety_suite(family: Family, turns: u64, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let name = match family {
        Family::Tri => "lemma2_1",
        Family::Hex => "lemma4_1",
    };
    let mut report = SuiteReport::new(name);
    let boards = safety_boards(family);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut game = 0u64;
    while report.samples < turns {
        let (q, topo) = &boards[game as usize % boards.len()];
        let pol = SECURE_POLICIES[(game as usize / boards.len()) % SECURE_POLICIES.len()];
        let policy = policy_for(pol, seed.wrapping_add(game));
        let sub = response_game(topo.clone(), *q, &policy, &mut rng, turns - report.samples);
        report.merge(sub);
        game += 1;
    }
    report.notes.push(format!("{game} games"));
    report.finish(start)
}

/// One q-response game. Samples are the adversary turns that start from a
/// secure shadow position; only those are held to the safety verdict.
/// Turns after a strategy fallback are counted under `insecure`.
fn response_game(topo: Arc<GridTopology>, q: u32, policy: &Policy, rng: &mut ChaCha8Rng, cap: u64) -> SuiteReport {
    let mut report = SuiteReport::new("game");
    let rules = match topo.family() {
        Family::Tri => GameRules::q_response(q),
        Family::Hex => GameRules::q4_response(q),
    };
    let mut state = GameState::new(topo.clone(), rules).unwrap();
    let mut player = ResponsePlayer::new(topo.clone());
    let label = format!("{} q={q} {policy}", topo.kind);
    while report.samples < cap && state.unclaimed_count() > 0 {
        let secure = check_grid(player.shadow(), player.certs()).is_ok();
        if secure {
            report.samples += 1;
            let safety = single_turn_safety(&state, q);
            if let Safety::Counterexample(edges) = &safety {
                report.fail(format!("{label}: red crosses with {edges:?} at turn {}", state.turn()));
            }
            if state.unclaimed_count() <= EXHAUSTIVE_LIMIT {
                *report.coverage.entry("exhaustive".into()).or_default() += 1;
                let brute = exhaustive_crossing(&state, q);
                if brute.is_some() != matches!(safety, Safety::Counterexample(_)) {
                    report.fail(format!("{label}: brute force and search disagree at turn {}", state.turn()));
                }
            }
        } else {
            *report.coverage.entry("insecure".into()).or_default() += 1;
        }
        let r = rng.gen_range(1..=q as usize);
        let red = adversary_move(policy, &state, Some(player.certs()), r, rng, 0.3);
        if red.is_empty() {
            break;
        }
        if let Err(e) = state.apply(Player::Vertical, &red, None) {
            report.fail(format!("{label}: illegal adversary move {red:?}: {e}"));
            break;
        }
        let owed = state.owed().unwrap_or(0);
        match player.respond(&state, &red, owed) {
            Ok(plan) => {
                for s in &plan.steps {
                    *report.coverage.entry(s.case_tag.clone()).or_default() += 1;
                }
                if let Some(f) = &plan.fallback {
                    *report.coverage.entry("fallback".into()).or_default() += 1;
                    if report.notes.len() < MAX_LISTED {
                        report.notes.push(format!("{label}: fallback at turn {}: {f}", state.turn()));
                    }
                }
                let mut moves = plan.claims.clone();
                moves.extend(plan.free.iter().copied());
                if let Err(e) = state.apply(Player::Horizontal, &moves, None) {
                    report.fail(format!("{label}: response rejected: {e}"));
                    break;
                }
            }
            Err(e) => {
                report.fail(format!("{label}: {e}"));
                break;
            }
        }
        if crossing_status(&state) == CrossingStatus::BreakerWin {
            if secure {
                report.fail(format!("{label}: red crossed from a secure position"));
            }
            break;
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Secure game

pub fn secure_boards(family: Family) -> Vec<Arc<GridTopology>> {
    match family {
        Family::Tri => vec![tri(5, 3), tri(6, 4), tri(8, 4), tri(8, 5), tri(10, 6), tri(12, 7)],
        Family::Hex => vec![hex(4, 5), hex(5, 6), hex(6, 7), hex(8, 8)],
    }
}

/// Outcome of one Horizontal answer in the secure game.
#[derive(Clone, Debug)]
pub struct SecureStep {
    pub response: StrategyResponse,
    pub moves: Vec<EdgeId>,
}

/// Plays one secure-game turn from `state`: red claims `e`, Horizontal
/// answers. Checks the claim rules, the exact budget and security after.
pub fn secure_step(
    state: &mut GameState,
    certs: &mut CertMap,
    e: EdgeId,
    report: &mut SuiteReport,
    label: &str,
) -> Option<SecureStep> {
    let family = state.topology().family();
    if !is_legal(state, Some(certs), e) {
        report.fail(format!("{label}: adversary offered illegal edge {e:?}"));
        return None;
    }
    let (resp, moves) = match secure_turn(state, certs, e) {
        Ok(x) => x,
        Err(err) => {
            report.fail(format!("{label}: {err} (edge {e:?})"));
            return None;
        }
    };
    let b = match state.apply(Player::Vertical, &[e], Some(certs)) {
        Ok(b) => b,
        Err(err) => {
            report.fail(format!("{label}: red claim rejected: {err}"));
            return None;
        }
    };
    *report.coverage.entry(resp.case_tag.clone()).or_default() += 1;
    report.samples += 1;
    let budget = budget_for(family, b);
    if resp.budget != budget {
        report.fail(format!("{label}: budget {} != {budget}", resp.budget));
    }
    let owed = state.owed().unwrap_or(0);
    if owed != budget as usize {
        report.fail(format!("{label}: engine owes {owed}, expected {budget}"));
    }
    if let Err(err) = state.apply(Player::Horizontal, &moves, None) {
        report.fail(format!("{label}: response rejected: {err}"));
        return None;
    }
    *certs = resp.new_certs.clone();
    if let Err(v) = check_grid(state, certs) {
        report.fail(format!("{label}: insecure after {} ({:?})", resp.case_tag, v.first()));
        return None;
    }
    Some(SecureStep { response: resp, moves })
}

/// Secure-game fuzzing against the four attacker policies, plus the
/// constructed positions for cases play rarely reaches.
pub fn secure_suite(family: Family, turns: u64, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let name = match family {
        Family::Tri => "lemma3_1",
        Family::Hex => "lemma4_2",
    };
    let mut report = SuiteReport::new(name);
    let boards = secure_boards(family);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut game = 0u64;
    while report.samples < turns {
        let topo = &boards[game as usize % boards.len()];
        let pol = SECURE_POLICIES[(game as usize / boards.len()) % SECURE_POLICIES.len()];
        let policy = policy_for(pol, seed.wrapping_add(game));
        let noise = [0.0, 0.2, 0.5][(game as usize / (boards.len() * 4)) % 3];
        let mut state = GameState::new(topo.clone(), GameRules::secure(family)).unwrap();
        let mut certs = CertMap::new();
        let label = format!("{} vs {policy} game {game}", topo.kind);
        loop {
            let mv = adversary_move(&policy, &state, Some(&certs), 1, &mut rng, noise);
            let Some(&e) = mv.first() else { break };
            if secure_step(&mut state, &mut certs, e, &mut report, &label).is_none() {
                break;
            }
        }
        game += 1;
    }
    report.notes.push(format!("{game} games"));
    let fixtures = crate::scenarios::coverage_fixtures(family);
    report.notes.push(format!("{} constructed positions", fixtures.len()));
    for fx in fixtures {
        let mut state = fx.state;
        let mut certs = fx.certs;
        let label = format!("fixture {}", fx.name);
        if let Err(v) = check_grid(&state, &certs) {
            report.fail(format!("{label}: fixture is not secure: {:?}", v.first()));
            continue;
        }
        if let Some(step) = secure_step(&mut state, &mut certs, fx.red, &mut report, &label) {
            if !tag_covers(&fx.expect, &step.response.case_tag) {
                report.fail(format!("{label}: classified as {}", step.response.case_tag));
            }
        }
    }
    report.missing = missing_cases(family, &report.coverage);
    report.finish(start)
}

pub fn missing_cases(family: Family, coverage: &BTreeMap<String, u64>) -> Vec<String> {
    enumerated_cases(family)
        .iter()
        .filter(|case| !coverage.keys().any(|t| tag_covers(case, t)))
        .map(|s| s.to_string())
        .collect()
}

// ---------------------------------------------------------------------------
// Crossing games

#[derive(Clone, Debug, Serialize)]
pub struct MatchSummary {
    pub board: String,
    pub p: u32,
    pub q: u32,
    pub opponent: String,
    pub games: u64,
    pub strategy_wins: u64,
    pub fallbacks: u64,
    pub errors: Vec<String>,
}

impl MatchSummary {
    pub fn all_won(&self) -> bool {
        self.errors.is_empty() && self.strategy_wins == self.games
    }
}

/// Maker plays the response strategy; Breaker plays `policy` (seeded per
/// game). Returns whether Maker won and whether the strategy had to fall
/// back.
pub fn maker_game(topo: &Arc<GridTopology>, p: u32, q: u32, policy: &Policy, seed: u64) -> Result<(bool, bool), String> {
    let mut state = GameState::new(topo.clone(), GameRules::crossing(p, q)).map_err(|e| e.to_string())?;
    let mut maker = MakerAdapter::new(topo.clone(), p, q, false).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last: Vec<EdgeId> = Vec::new();
    loop {
        let mv = maker.next_move(&state, &last).map_err(|e| e.to_string())?;
        state.apply(Player::Maker, &mv, None).map_err(|e| format!("maker: {e}"))?;
        if crossing_status(&state) != CrossingStatus::Open || state.unclaimed_count() == 0 {
            break;
        }
        let r = (q as usize).min(state.unclaimed_count());
        last = adversary_move(policy, &state, Some(maker.player().certs()), r, &mut rng, 0.2);
        state.apply(Player::Breaker, &last, None).map_err(|e| format!("breaker: {e}"))?;
        if crossing_status(&state) != CrossingStatus::Open || state.unclaimed_count() == 0 {
            break;
        }
    }
    let fell_back = maker.log.iter().any(|p| p.fallback.is_some());
    Ok((crossing_status(&state) == CrossingStatus::MakerWin, fell_back))
}

/// Breaker plays the dual strategy on `H`; Maker plays `policy` in the
/// colour-swapped view. Returns whether Breaker prevented a crossing.
pub fn breaker_game(topo: &Arc<GridTopology>, p: u32, q: u32, policy: &Policy, seed: u64) -> Result<(bool, bool), String> {
    let mut state = GameState::new(topo.clone(), GameRules::crossing(p, q)).map_err(|e| e.to_string())?;
    let mut breaker = BreakerAdapter::new(topo, p, q, false).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let view = breaker.hex_view(&state);
        let r = (p as usize).min(state.unclaimed_count());
        let mv = adversary_move(policy, &view, Some(breaker.player().certs()), r, &mut rng, 0.2);
        state.apply(Player::Maker, &mv, None).map_err(|e| format!("maker: {e}"))?;
        if crossing_status(&state) != CrossingStatus::Open || state.unclaimed_count() == 0 {
            break;
        }
        let reply = breaker.next_move(&state, &mv).map_err(|e| e.to_string())?;
        state.apply(Player::Breaker, &reply, None).map_err(|e| format!("breaker: {e}"))?;
        if crossing_status(&state) != CrossingStatus::Open || state.unclaimed_count() == 0 {
            break;
        }
    }
    let fell_back = breaker.log.iter().any(|p| p.fallback.is_some());
    Ok((crossing_status(&state) != CrossingStatus::MakerWin, fell_back))
}

/// The Maker boards: `Δ(m, q + 2)` for `m` in {6, 8, 10}.
pub const MAKER_PARAMS: [(u32, u32); 3] = [(1, 1), (2, 2), (2, 1)];
pub const MAKER_WIDTHS: [u32; 3] = [6, 8, 10];
/// Breaker plays `(1, 4)` on `Δ(m, n)`.
pub const BREAKER_BOARDS: [(u32, u32); 6] = [(5, 3), (5, 4), (6, 3), (6, 4), (8, 3), (8, 4)];

/// Plays `games` games per (board, p, q), cycling through the policies.
pub fn maker_matches(games: u64, seed: u64) -> Vec<MatchSummary> {
    let mut out = Vec::new();
    for (p, q) in MAKER_PARAMS {
        for m in MAKER_WIDTHS {
            let topo = tri(m, q + 2);
            out.extend(run_matches(&topo, p, q, games, seed, maker_game));
        }
    }
    out
}

pub fn breaker_matches(games: u64, seed: u64) -> Vec<MatchSummary> {
    BREAKER_BOARDS
        .iter()
        .flat_map(|&(m, n)| run_matches(&tri(m, n), 1, 4, games, seed, breaker_game))
        .collect()
}

type GameFn = fn(&Arc<GridTopology>, u32, u32, &Policy, u64) -> Result<(bool, bool), String>;

fn run_matches(topo: &Arc<GridTopology>, p: u32, q: u32, games: u64, seed: u64, play: GameFn) -> Vec<MatchSummary> {
    let per = games.div_ceil(SECURE_POLICIES.len() as u64);
    SECURE_POLICIES
        .iter()
        .map(|name| {
            let mut sum = MatchSummary {
                board: topo.kind.to_string(),
                p,
                q,
                opponent: name.to_string(),
                games: 0,
                strategy_wins: 0,
                fallbacks: 0,
                errors: Vec::new(),
            };
            for g in 0..per {
                let game_seed = seed.wrapping_mul(1_000_003).wrapping_add(g);
                let policy = policy_for(name, game_seed);
                sum.games += 1;
                match play(topo, p, q, &policy, game_seed) {
                    Ok((won, fell)) => {
                        sum.strategy_wins += won as u64;
                        sum.fallbacks += fell as u64;
                    }
                    Err(e) => sum.errors.push(format!("game {g}: {e}")),
                }
            }
            sum
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Unique winner

/// Random full colorings of `Δ(4,4)`, `Δ(6,5)` and `H(5,4)` each have
/// exactly one winner.
pub fn duality(colorings: u64, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut report = SuiteReport::new("duality");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for topo in [tri(4, 4), tri(6, 5), hex(5, 4)] {
        let label = topo.kind.to_string();
        let mut blue_wins = 0u64;
        for i in 0..colorings {
            let marks = (0..topo.num_edges())
                .map(|_| if rng.gen_bool(0.5) { EdgeMark::Blue } else { EdgeMark::Red })
                .collect();
            let s = GameState::with_marks(topo.clone(), GameRules::crossing(1, 1), marks, Player::Maker).unwrap();
            report.samples += 1;
            match crossings(&s) {
                (true, false) => blue_wins += 1,
                (false, true) => {}
                (b, r) => report.fail(format!("{label} coloring {i}: blue crosses {b}, red crosses {r}")),
            }
        }
        report.coverage.insert(format!("{label} blue"), blue_wins);
        report.coverage.insert(format!("{label} red"), colorings - blue_wins);
    }
    report.finish(start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>(), Ok(s));
        }
        assert!("lemma9".parse::<Suite>().is_err());
    }

    #[test]
    fn grown_components_are_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let topo = tri(6, 6);
        for _ in 0..50 {
            let s = grow_component(&topo, 12, &mut rng);
            let comps = red_components(&s);
            assert_eq!(comps.len(), 1);
        }
    }

    #[test]
    fn small_runs_pass() {
        assert!(lemma1_1(200, 3).passed());
        assert!(duality(50, 3).passed());
    }
}

// ---------------------------------------------------------------------------
// Solver cross-checks

/// Boards for the mid-game positions: `(m, n, p, q, maker_side)`.
const POSITION_GAMES: [(u32, u32, u32, u32, bool); 4] =
    [(6, 3, 1, 1, true), (5, 4, 2, 2, true), (6, 3, 2, 1, true), (5, 3, 1, 4, false)];

/// Plays the strategies until at most the solver cap is unclaimed and checks
/// that the solver agrees the strategy side wins from there.
pub(crate) fn strategy_positions(report: &mut SuiteReport, games: u64, seed: u64) {
    use crate::solver::{solve, Winner};
    for g in 0..games {
        let (m, n, p, q, maker_side) = POSITION_GAMES[g as usize % POSITION_GAMES.len()];
        let topo = tri(m, n);
        let game_seed = seed.wrapping_mul(1_000_003).wrapping_add(g);
        let policy = policy_for(SECURE_POLICIES[(g as usize / POSITION_GAMES.len()) % SECURE_POLICIES.len()], game_seed);
        let reached = if maker_side {
            maker_position(&topo, p, q, &policy, game_seed)
        } else {
            breaker_position(&topo, p, q, &policy, game_seed)
        };
        let label = format!("{} p={p} q={q} game {g}", topo.kind);
        let state = match reached {
            Ok(Some(s)) => s,
            Ok(None) => continue,
            Err(e) => {
                report.fail(format!("{label}: {e}"));
                continue;
            }
        };
        let want = if maker_side { Winner::Maker } else { Winner::Breaker };
        report.samples += 1;
        *report.coverage.entry(format!("strategy positions ({want})")).or_default() += 1;
        match solve(&topo, p, q, &state) {
            Ok(r) if r.winner == want => {}
            Ok(r) => report.fail(format!("{label}: solver says {} after {} claims", r.winner, state.history().len())),
            Err(e) => report.fail(format!("{label}: {e}")),
        }
    }
}

fn within_cap(state: &GameState) -> bool {
    crossing_status(state) == CrossingStatus::Open && state.unclaimed_count() <= crate::solver::DEFAULT_CAP
}

fn maker_position(
    topo: &Arc<GridTopology>,
    p: u32,
    q: u32,
    policy: &Policy,
    seed: u64,
) -> Result<Option<GameState>, String> {
    let mut state = GameState::new(topo.clone(), GameRules::crossing(p, q)).map_err(|e| e.to_string())?;
    let mut maker = MakerAdapter::new(topo.clone(), p, q, false).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last: Vec<EdgeId> = Vec::new();
    while crossing_status(&state) == CrossingStatus::Open && state.unclaimed_count() > 0 {
        let mv = maker.next_move(&state, &last).map_err(|e| e.to_string())?;
        state.apply(Player::Maker, &mv, None).map_err(|e| format!("maker: {e}"))?;
        if within_cap(&state) {
            return Ok(Some(state));
        }
        if crossing_status(&state) != CrossingStatus::Open || state.unclaimed_count() == 0 {
            break;
        }
        let r = (q as usize).min(state.unclaimed_count());
        last = adversary_move(policy, &state, Some(maker.player().certs()), r, &mut rng, 0.2);
        state.apply(Player::Breaker, &last, None).map_err(|e| format!("breaker: {e}"))?;
    }
    Ok(None)
}

fn breaker_position(
    topo: &Arc<GridTopology>,
    p: u32,
    q: u32,
    policy: &Policy,
    seed: u64,
) -> Result<Option<GameState>, String> {
    let mut state = GameState::new(topo.clone(), GameRules::crossing(p, q)).map_err(|e| e.to_string())?;
    let mut breaker = BreakerAdapter::new(topo, p, q, false).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while crossing_status(&state) == CrossingStatus::Open && state.unclaimed_count() > 0 {
        let view = breaker.hex_view(&state);
        let r = (p as usize).min(state.unclaimed_count());
        let mv = adversary_move(policy, &view, Some(breaker.player().certs()), r, &mut rng, 0.2);
        state.apply(Player::Maker, &mv, None).map_err(|e| format!("maker: {e}"))?;
        if crossing_status(&state) != CrossingStatus::Open || state.unclaimed_count() == 0 {
            break;
        }
        let reply = breaker.next_move(&state, &mv).map_err(|e| e.to_string())?;
        state.apply(Player::Breaker, &reply, None).map_err(|e| format!("breaker: {e}"))?;
        if within_cap(&state) {
            return Ok(Some(state));
        }
    }
    Ok(None)
}

/// Every position with a fixed rule: the search certifies it too, with no
/// more claims than the rule.
pub(crate) fn hand_table_check(report: &mut SuiteReport) {
    use crate::scenarios::{bracket_pair_fixtures, single_bracket_fixtures};
    use crate::strategy::secure_response;
    for family in [Family::Tri, Family::Hex] {
        let mut fixtures = single_bracket_fixtures(family);
        fixtures.extend(bracket_pair_fixtures(family));
        for f in fixtures {
            let Ok(r) = secure_response(&f.state, &f.certs, f.red) else { continue };
            let Some(hand) = r.hand_cost else { continue };
            report.samples += 1;
            *report.coverage.entry(format!("hand table ({})", if family == Family::Tri { "tri" } else { "hex" })).or_default() += 1;
            match r.search_cost {
                Some(found) if found <= hand => {}
                Some(found) => report.fail(format!("{}: search needs {found} claims, rule needs {hand}", f.name)),
                None => report.fail(format!("{}: search finds no certificate; rule needs {hand}", f.name)),
            }
        }
    }
}
