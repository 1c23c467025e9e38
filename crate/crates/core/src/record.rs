//! Match configuration, sessions, game records and replay.
//!
//! A [`Session`] drives one game: it applies human moves and lets the
//! engine or a policy play the other turns. [`run_match`] plays a session
//! with no human to completion.

use crate::brackets::Family;
use crate::game_state::{crossing_status, CrossingStatus, GameError, GameKind, GameRules, GameState, Player};
use crate::lattice::{build_hexagonal, build_triangular, Coord, EdgeId, GridTopology, LatticeError};
use crate::opponents::{next_moves, swapped_view, Policy, PolicyParseError};
use crate::security::CertMap;
use crate::strategy::{secure_turn, BreakerAdapter, MakerAdapter, StrategyError};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BoardSpec {
    Tri { m: u32, n: u32 },
    Hex { n: u32, m: u32 },
}

impl BoardSpec {
    pub fn build(self) -> Result<GridTopology, LatticeError> {
        match self {
            BoardSpec::Tri { m, n } => build_triangular(m, n),
            BoardSpec::Hex { n, m } => build_hexagonal(n, m),
        }
    }

    pub fn family(self) -> Family {
        match self {
            BoardSpec::Tri { .. } => Family::Tri,
            BoardSpec::Hex { .. } => Family::Hex,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("bad board {0:?}; expected tri:MxN or hex:NxM")]
pub struct BoardParseError(pub String);

impl FromStr for BoardSpec {
    type Err = BoardParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BoardParseError(s.to_string());
        let (family, dims) = s.split_once(':').ok_or_else(bad)?;
        let (a, b) = dims.split_once('x').ok_or_else(bad)?;
        let a: u32 = a.parse().map_err(|_| bad())?;
        let b: u32 = b.parse().map_err(|_| bad())?;
        match family {
            "tri" => Ok(BoardSpec::Tri { m: a, n: b }),
            "hex" => Ok(BoardSpec::Hex { n: a, m: b }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for BoardSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoardSpec::Tri { m, n } => write!(f, "tri:{m}x{n}"),
            BoardSpec::Hex { n, m } => write!(f, "hex:{n}x{m}"),
        }
    }
}

/// Who plays a side: `strategy`, `human`, or a policy string such as
/// `greedy` or `random:42`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlayerSpec {
    Strategy,
    Human,
    Policy(Policy),
}

impl FromStr for PlayerSpec {
    type Err = PolicyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strategy" => Ok(PlayerSpec::Strategy),
            "human" => Ok(PlayerSpec::Human),
            other => other.parse().map(PlayerSpec::Policy),
        }
    }
}

/// A match as requested. Player specs are kept as given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchConfig {
    pub board: BoardSpec,
    pub rules: GameRules,
    /// Maker in a crossing game, Horizontal in the secure game.
    pub maker: String,
    /// Breaker in a crossing game, Vertical in the secure game.
    pub breaker: String,
    pub seed: u64,
    /// Play the strategies even where their guarantee does not apply.
    #[serde(default)]
    pub unsafe_heuristic: bool,
}

#[derive(Debug, Error)]
pub enum MatchError {
    #[error(transparent)]
    Board(#[from] LatticeError),
    #[error(transparent)]
    Rules(#[from] GameError),
    #[error(transparent)]
    Policy(#[from] PolicyParseError),
    #[error("refused: {0}")]
    Refused(String),
    #[error("unsupported match: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("it is {expected}'s turn")]
    NotYourTurn { expected: Player },
    #[error("the game is over")]
    GameOver,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyRef {
    pub kind: String,
    pub board: BoardSpec,
    pub fingerprint: String,
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordedMove {
    pub player: Player,
    /// Edge midpoints in doubled coordinates.
    pub edges: Vec<[i32; 2]>,
    pub turn: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub case_tags: Vec<String>,
    /// The strategy's certificates after this move.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificates: Option<CertMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    MakerWin,
    BreakerWin,
    /// Secure game: the board filled up with no red crossing.
    HorizontalHeld,
    VerticalCrossed,
    Refused { reason: String },
    Aborted { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub topology_ref: TopologyRef,
    pub rules: GameRules,
    pub config: MatchConfig,
    pub moves: Vec<RecordedMove>,
    pub result: Option<Outcome>,
}

enum Agent {
    Human,
    Policy(Policy),
    Maker(Box<MakerAdapter>),
    Breaker(Box<BreakerAdapter>),
    /// Horizontal in the secure game.
    Secure,
}

impl Agent {
    fn certs(&self) -> Option<&CertMap> {
        match self {
            Agent::Maker(a) => Some(a.player().certs()),
            Agent::Breaker(a) => Some(a.player().certs()),
            _ => None,
        }
    }
}

pub struct Session {
    topo: Arc<GridTopology>,
    /// `H` for the colour-swapped view of a crossing game, when Maker is a
    /// policy.
    hex: Option<Arc<GridTopology>>,
    state: GameState,
    maker: Agent,
    breaker: Agent,
    /// Secure game certificates.
    certs: CertMap,
    last: Vec<EdgeId>,
    record: GameRecord,
}

fn resolve(spec: &str, seed: u64) -> Result<PlayerSpec, PolicyParseError> {
    Ok(match spec.parse()? {
        PlayerSpec::Policy(Policy::Random { seed: 0 }) if spec == "random" => {
            PlayerSpec::Policy(Policy::Random { seed })
        }
        other => other,
    })
}

impl Session {
    pub fn new(config: MatchConfig) -> Result<Session, MatchError> {
        let topo = Arc::new(config.board.build()?);
        let state = GameState::new(topo.clone(), config.rules)?;
        let maker_spec = resolve(&config.maker, config.seed)?;
        let breaker_spec = resolve(&config.breaker, config.seed.wrapping_add(1))?;
        let unsafe_ok = config.unsafe_heuristic;
        let (maker, breaker, hex) = match config.rules.kind {
            GameKind::Crossing { p, q } => {
                if config.board.family() != Family::Tri {
                    return Err(MatchError::Unsupported("crossing games are played on Δ".into()));
                }
                let maker = match maker_spec {
                    PlayerSpec::Strategy => {
                        Agent::Maker(Box::new(MakerAdapter::new(topo.clone(), p, q, unsafe_ok).map_err(refusal)?))
                    }
                    PlayerSpec::Human => Agent::Human,
                    PlayerSpec::Policy(pol) => Agent::Policy(pol),
                };
                let breaker = match breaker_spec {
                    PlayerSpec::Strategy => {
                        Agent::Breaker(Box::new(BreakerAdapter::new(&topo, p, q, unsafe_ok).map_err(refusal)?))
                    }
                    PlayerSpec::Human => Agent::Human,
                    PlayerSpec::Policy(pol) => Agent::Policy(pol),
                };
                let (m, n) = topo.kind.tri_dims();
                let hex = match (&maker, &breaker) {
                    (Agent::Policy(_), Agent::Breaker(b)) => Some(b.hex().clone()),
                    (Agent::Policy(_), _) => Some(Arc::new(build_hexagonal(n, m)?)),
                    _ => None,
                };
                (maker, breaker, hex)
            }
            GameKind::Secure { .. } => {
                if maker_spec != PlayerSpec::Strategy {
                    return Err(MatchError::Unsupported("Horizontal plays the strategy in the secure game".into()));
                }
                let breaker = match breaker_spec {
                    PlayerSpec::Human => Agent::Human,
                    PlayerSpec::Policy(pol) => Agent::Policy(pol),
                    PlayerSpec::Strategy => {
                        return Err(MatchError::Unsupported("Vertical has no strategy in the secure game".into()))
                    }
                };
                (Agent::Secure, breaker, None)
            }
            _ => return Err(MatchError::Unsupported("only crossing and secure games are played".into())),
        };
        let record = GameRecord {
            topology_ref: TopologyRef {
                kind: topo.kind.to_string(),
                board: config.board,
                fingerprint: topo.fingerprint(),
                edges: topo.num_edges(),
            },
            rules: config.rules,
            config,
            moves: Vec::new(),
            result: None,
        };
        let mut s = Session { topo, hex, state, maker, breaker, certs: CertMap::new(), last: Vec::new(), record };
        s.advance()?;
        Ok(s)
    }

    /// Rebuilds a session from its record by replaying the human moves; the
    /// engine's replies are recomputed and must match.
    pub fn restore(record: &GameRecord) -> Result<Session, MatchError> {
        let mut s = Session::new(record.config.clone())?;
        while s.record.moves.len() < record.moves.len() {
            let next = &record.moves[s.record.moves.len()];
            let edges = move_edges(&s.topo, next)
                .ok_or_else(|| MatchError::Unsupported(format!("move {} names an unknown edge", next.turn)))?;
            s.submit(next.player, &edges)?;
        }
        if s.record.moves != record.moves {
            return Err(MatchError::Unsupported("replayed moves differ from the record".into()));
        }
        Ok(s)
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn topology(&self) -> &Arc<GridTopology> {
        &self.topo
    }

    pub fn record(&self) -> &GameRecord {
        &self.record
    }

    /// The certificates of whichever side plays a strategy.
    pub fn certificates(&self) -> Option<&CertMap> {
        match (&self.maker, &self.breaker) {
            (Agent::Secure, _) => Some(&self.certs),
            (m, b) => m.certs().or(b.certs()),
        }
    }

    pub fn is_over(&self) -> bool {
        self.record.result.is_some()
    }

    /// The side to move, if a human controls it.
    pub fn human_to_move(&self) -> Option<Player> {
        if self.is_over() {
            return None;
        }
        let p = self.state.to_move();
        matches!(self.agent(p), Agent::Human).then_some(p)
    }

    /// Edges the side to move may claim now.
    pub fn legal_moves(&self) -> Vec<EdgeId> {
        if self.is_over() {
            return Vec::new();
        }
        let p = self.state.to_move();
        if p == Player::Vertical {
            return self
                .state
                .unclaimed()
                .filter(|&e| crate::opponents::is_legal(&self.state, Some(&self.certs), e))
                .collect();
        }
        self.state.unclaimed().collect()
    }

    fn agent(&self, p: Player) -> &Agent {
        match p {
            Player::Maker | Player::Horizontal => &self.maker,
            Player::Breaker | Player::Vertical => &self.breaker,
        }
    }

    /// A human move, followed by the engine's replies until a human is to
    /// move again or the game ends. Returns the moves the engine made.
    pub fn submit(&mut self, player: Player, edges: &[EdgeId]) -> Result<Vec<RecordedMove>, MatchError> {
        if self.is_over() {
            return Err(MatchError::GameOver);
        }
        let expected = self.state.to_move();
        if player != expected || !matches!(self.agent(player), Agent::Human) {
            return Err(MatchError::NotYourTurn { expected });
        }
        let before = self.record.moves.len();
        self.play_turn(edges.to_vec())?;
        self.advance()?;
        Ok(self.record.moves[before + 1..].to_vec())
    }

    /// Plays engine and policy turns until a human is to move or the game
    /// ends.
    fn advance(&mut self) -> Result<(), MatchError> {
        while !self.is_over() && self.human_to_move().is_none() {
            let edges = self.choose()?;
            self.play_turn(edges)?;
        }
        Ok(())
    }

    /// Moves for the side to move when it is not human.
    fn choose(&mut self) -> Result<Vec<EdgeId>, MatchError> {
        let player = self.state.to_move();
        let rules = *self.state.rules();
        let r = match rules.kind {
            GameKind::Crossing { p, q } => (if player == Player::Maker { p } else { q }) as usize,
            _ => 1,
        }
        .min(self.state.unclaimed_count());
        let last = std::mem::take(&mut self.last);
        let picked = match player {
            Player::Maker => match &mut self.maker {
                Agent::Maker(a) => a.next_move(&self.state, &last)?,
                Agent::Policy(pol) => {
                    let hex = self.hex.clone().expect("hex board for a policy Maker");
                    let view = swapped_view(&self.state, hex, GameRules::q4_response(1));
                    next_moves(pol, &view, self.breaker.certs(), r)
                }
                _ => unreachable!("human turns are not chosen"),
            },
            Player::Breaker => match &mut self.breaker {
                Agent::Breaker(a) => a.next_move(&self.state, &last)?,
                Agent::Policy(pol) => next_moves(pol, &self.state, self.maker.certs(), r),
                _ => unreachable!("human turns are not chosen"),
            },
            Player::Vertical => match &self.breaker {
                Agent::Policy(pol) => next_moves(pol, &self.state, Some(&self.certs), 1),
                _ => unreachable!("human turns are not chosen"),
            },
            Player::Horizontal => unreachable!("Horizontal answers within Vertical's turn"),
        };
        Ok(picked)
    }

    fn play_turn(&mut self, edges: Vec<EdgeId>) -> Result<(), MatchError> {
        let player = self.state.to_move();
        if player == Player::Vertical {
            return self.secure_round(edges);
        }
        self.state.apply(player, &edges, None)?;
        let (tags, fallback) = self.plan_notes(player);
        let certificates = match player {
            Player::Maker => self.maker.certs().cloned(),
            _ => self.breaker.certs().cloned(),
        };
        self.push(player, &edges, tags, certificates, fallback);
        self.last = edges;
        self.finish_crossing();
        Ok(())
    }

    /// Case tags and fallback of the strategy's latest turn, if `player`
    /// plays one.
    fn plan_notes(&self, player: Player) -> (Vec<String>, Option<String>) {
        let log = match (player, &self.maker, &self.breaker) {
            (Player::Maker, Agent::Maker(a), _) => &a.log,
            (Player::Breaker, _, Agent::Breaker(a)) => &a.log,
            _ => return (Vec::new(), None),
        };
        match log.last() {
            Some(plan) => (plan.steps.iter().map(|s| s.case_tag.clone()).collect(), plan.fallback.clone()),
            None => (Vec::new(), None),
        }
    }

    /// Vertical claims one edge and Horizontal answers at once.
    fn secure_round(&mut self, edges: Vec<EdgeId>) -> Result<(), MatchError> {
        let &[e] = edges.as_slice() else {
            return Err(MatchError::Rules(GameError::BudgetMismatch { expected: "1".into(), got: edges.len() }));
        };
        if !crate::opponents::is_legal(&self.state, Some(&self.certs), e) {
            // Let the rules say why.
            self.state.clone().apply(Player::Vertical, &[e], Some(&self.certs))?;
            return Err(MatchError::Rules(GameError::OccupiedEdge(e)));
        }
        let reply = secure_turn(&self.state, &self.certs, e);
        self.state.apply(Player::Vertical, &[e], Some(&self.certs))?;
        self.push(Player::Vertical, &[e], Vec::new(), None, None);
        match reply {
            Ok((resp, moves)) => {
                self.state.apply(Player::Horizontal, &moves, None)?;
                self.certs = resp.new_certs;
                let certs = self.certs.clone();
                self.push(Player::Horizontal, &moves, vec![resp.case_tag], Some(certs), None);
            }
            Err(err) => {
                self.record.result = Some(Outcome::Aborted { reason: err.to_string() });
                return Ok(());
            }
        }
        let (_, red) = crate::game_state::crossings(&self.state);
        if red {
            self.record.result = Some(Outcome::VerticalCrossed);
        } else if self.state.unclaimed_count() == 0 {
            self.record.result = Some(Outcome::HorizontalHeld);
        }
        Ok(())
    }

    fn push(
        &mut self,
        player: Player,
        edges: &[EdgeId],
        case_tags: Vec<String>,
        certificates: Option<CertMap>,
        fallback: Option<String>,
    ) {
        let coords = edges
            .iter()
            .map(|&e| {
                let c = self.topo.edge(e).mid;
                [c.x, c.y]
            })
            .collect();
        let turn = self.record.moves.len() as u32 + 1;
        self.record.moves.push(RecordedMove { player, edges: coords, turn, case_tags, certificates, fallback });
    }

    fn finish_crossing(&mut self) {
        match crossing_status(&self.state) {
            CrossingStatus::MakerWin => self.record.result = Some(Outcome::MakerWin),
            CrossingStatus::BreakerWin => self.record.result = Some(Outcome::BreakerWin),
            CrossingStatus::Open if self.state.unclaimed_count() == 0 => {
                self.record.result = Some(Outcome::BreakerWin)
            }
            CrossingStatus::Open => {}
        }
    }
}

fn refusal(e: StrategyError) -> MatchError {
    MatchError::Refused(e.to_string())
}

/// Plays a match with no human to completion. A refused strategy is
/// recorded as the result rather than returned as an error.
pub fn run_match(config: MatchConfig) -> Result<GameRecord, MatchError> {
    if config.maker == "human" || config.breaker == "human" {
        return Err(MatchError::Unsupported("run_match plays no human sides".into()));
    }
    match Session::new(config.clone()) {
        Ok(s) => Ok(s.record),
        Err(MatchError::Refused(reason)) => {
            let topo = config.board.build()?;
            Ok(GameRecord {
                topology_ref: TopologyRef {
                    kind: topo.kind.to_string(),
                    board: config.board,
                    fingerprint: topo.fingerprint(),
                    edges: topo.num_edges(),
                },
                rules: config.rules,
                config,
                moves: Vec::new(),
                result: Some(Outcome::Refused { reason }),
            })
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error(transparent)]
    Board(#[from] LatticeError),
    #[error("no edge at ({0}, {1})")]
    UnknownEdge(i32, i32),
    #[error("move {turn}: {source}")]
    Move { turn: u32, source: GameError },
    #[error("record was made on a different board ({0})")]
    Fingerprint(String),
}

/// Replays `record`, returning the state after each move (the empty board
/// first).
pub fn replay(record: &GameRecord) -> Result<Vec<GameState>, ReplayError> {
    let topo = Arc::new(record.topology_ref.board.build()?);
    if topo.fingerprint() != record.topology_ref.fingerprint {
        return Err(ReplayError::Fingerprint(record.topology_ref.fingerprint.clone()));
    }
    let mut state = GameState::new(topo.clone(), record.rules).map_err(|source| ReplayError::Move { turn: 0, source })?;
    let mut frames = vec![state.clone()];
    let mut certs = CertMap::new();
    for mv in &record.moves {
        let edges = mv
            .edges
            .iter()
            .map(|&[x, y]| topo.edge_at(Coord::new(x, y)).ok_or(ReplayError::UnknownEdge(x, y)))
            .collect::<Result<Vec<_>, _>>()?;
        let check = (mv.player == Player::Vertical).then_some(&certs);
        state.apply(mv.player, &edges, check).map_err(|source| ReplayError::Move { turn: mv.turn, source })?;
        if mv.player == Player::Horizontal {
            if let Some(c) = &mv.certificates {
                certs = c.clone();
            }
        }
        frames.push(state.clone());
    }
    Ok(frames)
}

/// The edge ids of a recorded move.
pub fn move_edges(topo: &GridTopology, mv: &RecordedMove) -> Option<Vec<EdgeId>> {
    mv.edges.iter().map(|&[x, y]| topo.edge_at(Coord::new(x, y))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(board: &str, rules: GameRules, maker: &str, breaker: &str) -> MatchConfig {
        MatchConfig {
            board: board.parse().unwrap(),
            rules,
            maker: maker.into(),
            breaker: breaker.into(),
            seed: 11,
            unsafe_heuristic: false,
        }
    }

    #[test]
    fn maker_strategy_beats_greedy() {
        let r = run_match(config("tri:8x3", GameRules::crossing(1, 1), "strategy", "greedy")).unwrap();
        assert_eq!(r.result, Some(Outcome::MakerWin));
        assert!(r.moves.iter().any(|m| !m.case_tags.is_empty()));
    }

    #[test]
    fn breaker_strategy_beats_greedy() {
        let r = run_match(config("tri:6x3", GameRules::crossing(1, 4), "greedy", "strategy")).unwrap();
        assert_eq!(r.result, Some(Outcome::BreakerWin));
    }

    #[test]
    fn unmet_guarantee_is_refused() {
        let r = run_match(config("tri:8x3", GameRules::crossing(1, 2), "strategy", "greedy")).unwrap();
        assert!(matches!(r.result, Some(Outcome::Refused { .. })));
        let mut c = config("tri:8x3", GameRules::crossing(1, 2), "strategy", "greedy");
        c.unsafe_heuristic = true;
        assert!(matches!(run_match(c).unwrap().result, Some(Outcome::MakerWin | Outcome::BreakerWin)));
    }

    #[test]
    fn records_replay_exactly() {
        for c in [
            config("tri:6x3", GameRules::crossing(2, 1), "strategy", "random:3"),
            config("tri:5x3", GameRules::crossing(1, 4), "random", "strategy"),
            config("tri:7x4", GameRules::secure(Family::Tri), "strategy", "gate-attacker"),
            config("hex:4x6", GameRules::secure(Family::Hex), "strategy", "random:9"),
        ] {
            let a = run_match(c.clone()).unwrap();
            let b = run_match(c).unwrap();
            assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
            let json = serde_json::to_string(&a).unwrap();
            let back: GameRecord = serde_json::from_str(&json).unwrap();
            assert_eq!(back, a);
            let frames = replay(&back).unwrap();
            assert_eq!(frames.len(), a.moves.len() + 1);
        }
    }

    #[test]
    fn secure_game_answers_with_the_budget() {
        let r = run_match(config("tri:7x4", GameRules::secure(Family::Tri), "strategy", "bracket-attacker")).unwrap();
        assert_eq!(r.result, Some(Outcome::HorizontalHeld));
        for pair in r.moves.chunks(2) {
            assert_eq!(pair[0].player, Player::Vertical);
            assert_eq!(pair[1].player, Player::Horizontal);
            assert_eq!(pair[1].case_tags.len(), 1);
        }
    }

    #[test]
    fn human_sessions_check_the_turn() {
        let mut s = Session::new(config("tri:6x3", GameRules::crossing(1, 1), "strategy", "human")).unwrap();
        assert_eq!(s.human_to_move(), Some(Player::Breaker));
        let e = s.legal_moves()[0];
        assert!(matches!(s.submit(Player::Maker, &[e]), Err(MatchError::NotYourTurn { .. })));
        let replies = s.submit(Player::Breaker, &[e]).unwrap();
        assert_eq!(replies.len(), 1);
        assert_eq!(replies[0].player, Player::Maker);
        let taken = s.state().history()[0].edges[0];
        assert!(matches!(
            s.submit(Player::Breaker, &[taken]),
            Err(MatchError::Rules(GameError::OccupiedEdge(_)))
        ));
    }

    #[test]
    fn sessions_restore_from_their_record() {
        let mut s = Session::new(config("tri:6x3", GameRules::crossing(1, 1), "human", "greedy")).unwrap();
        for _ in 0..3 {
            let e = s.legal_moves()[0];
            s.submit(Player::Maker, &[e]).unwrap();
        }
        let back = Session::restore(s.record()).unwrap();
        assert_eq!(back.record(), s.record());
        assert_eq!(back.state().marks(), s.state().marks());
    }

    #[test]
    fn board_specs_parse() {
        assert_eq!("tri:6x5".parse::<BoardSpec>().unwrap(), BoardSpec::Tri { m: 6, n: 5 });
        assert_eq!("hex:5x4".parse::<BoardSpec>().unwrap().to_string(), "hex:5x4");
        assert!("square:3x3".parse::<BoardSpec>().is_err());
    }
}
