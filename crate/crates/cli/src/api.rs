//! HTTP API for interactive games.
//!
//! Each game lives behind its own mutex, so mutations of one game are
//! applied one at a time while other games proceed.

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use tricross_core::game_state::{crossing_status, min_completion_cost, CrossingStatus};
use tricross_core::lattice::Coord;
use tricross_core::record::{MatchError, RecordedMove};
use tricross_core::solver::{solve, SolverError, DEFAULT_CAP};
use tricross_core::{
    BoardSpec, CertMap, EdgeMark, GameKind, GameRecord, GameRules, MatchConfig, Outcome, Player, Session, Winner,
};

#[derive(Clone, Default)]
pub struct AppState {
    games: Arc<RwLock<HashMap<u64, Arc<Mutex<Session>>>>>,
    next_id: Arc<AtomicU64>,
    journal: Option<PathBuf>,
    default_seed: u64,
}

impl AppState {
    pub fn new(journal: Option<PathBuf>, default_seed: u64) -> Self {
        AppState { journal, default_seed, ..Default::default() }
    }

    /// Reloads every journaled game. Returns how many were restored.
    pub fn restore_journal(&self) -> std::io::Result<usize> {
        let Some(dir) = &self.journal else { return Ok(0) };
        let mut restored = 0;
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            let Some(id) = path.file_stem().and_then(|s| s.to_str()).and_then(|s| s.parse::<u64>().ok()) else {
                continue;
            };
            let text = std::fs::read_to_string(&path)?;
            let Some(last) = text.lines().rev().find(|l| !l.trim().is_empty()) else { continue };
            let Ok(record) = serde_json::from_str::<GameRecord>(last) else { continue };
            if let Ok(session) = Session::restore(&record) {
                self.games.write().expect("games lock").insert(id, Arc::new(Mutex::new(session)));
                self.next_id.fetch_max(id + 1, Ordering::SeqCst);
                restored += 1;
            }
        }
        Ok(restored)
    }

    fn game(&self, id: u64) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.games.read().expect("games lock").get(&id).cloned().ok_or(ApiError::UnknownGame(id))
    }

    fn journal(&self, id: u64, record: &GameRecord) {
        let Some(dir) = &self.journal else { return };
        let line = serde_json::to_string(record).expect("records serialize");
        let path = dir.join(format!("{id}.jsonl"));
        let written = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .and_then(|mut f| writeln!(f, "{line}"));
        if let Err(e) = written {
            eprintln!("journal {}: {e}", path.display());
        }
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/moves", post(post_moves))
        .route("/games/{id}/hint", get(get_hint))
        .route("/games/{id}/record", get(get_record))
        .with_state(state)
}

#[derive(Debug)]
pub enum ApiError {
    UnknownGame(u64),
    BadRequest(String),
    Conflict(String),
    Internal(String),
}

#[derive(Serialize)]
struct ErrorBody {
    error: &'static str,
    detail: String,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, error, detail) = match self {
            ApiError::UnknownGame(id) => (StatusCode::NOT_FOUND, "unknown_game", format!("no game {id}")),
            ApiError::BadRequest(d) => (StatusCode::BAD_REQUEST, "illegal_move", d),
            ApiError::Conflict(d) => (StatusCode::CONFLICT, "not_your_turn", d),
            ApiError::Internal(d) => (StatusCode::INTERNAL_SERVER_ERROR, "internal", d),
        };
        (status, Json(ErrorBody { error, detail })).into_response()
    }
}

impl From<MatchError> for ApiError {
    fn from(e: MatchError) -> Self {
        match e {
            MatchError::NotYourTurn { .. } | MatchError::GameOver => ApiError::Conflict(e.to_string()),
            MatchError::Rules(g) => ApiError::BadRequest(format!("{g:?}: {g}")),
            MatchError::Strategy(_) => ApiError::Internal(e.to_string()),
            other => ApiError::BadRequest(other.to_string()),
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct CreateGame {
    /// `tri:MxN` or `hex:NxM`.
    pub board: String,
    /// Crossing game claims per turn; omit both for the secure game.
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub maker: String,
    pub breaker: String,
    pub seed: Option<u64>,
    #[serde(default)]
    pub unsafe_heuristic: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EdgeView {
    pub id: u32,
    pub mid: [i32; 2],
    pub ends: [[i32; 2]; 2],
    pub mark: EdgeMark,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GameView {
    pub id: u64,
    pub board: BoardSpec,
    pub rules: GameRules,
    pub to_move: Player,
    /// The side a human controls, if it is to move.
    pub human_to_move: Option<Player>,
    pub edges: Vec<EdgeView>,
    pub legal_moves: Vec<[i32; 2]>,
    pub certificates: Option<CertMap>,
    pub result: Option<Outcome>,
    pub turn: usize,
}

fn view(id: u64, s: &Session) -> GameView {
    let topo = s.topology();
    let pos = |c: Coord| [c.x, c.y];
    GameView {
        id,
        board: s.record().topology_ref.board,
        rules: *s.state().rules(),
        to_move: s.state().to_move(),
        human_to_move: s.human_to_move(),
        edges: topo
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| EdgeView {
                id: i as u32,
                mid: pos(e.mid),
                ends: [pos(topo.vertex(e.ends[0]).pos), pos(topo.vertex(e.ends[1]).pos)],
                mark: s.state().marks()[i],
            })
            .collect(),
        legal_moves: s.legal_moves().into_iter().map(|e| pos(topo.edge(e).mid)).collect(),
        certificates: s.certificates().cloned(),
        result: s.record().result.clone(),
        turn: s.record().moves.len(),
    }
}

async fn create_game(State(app): State<AppState>, Json(req): Json<CreateGame>) -> Result<Response, ApiError> {
    let board: BoardSpec = req.board.parse().map_err(|e: tricross_core::record::BoardParseError| {
        ApiError::BadRequest(e.to_string())
    })?;
    let rules = match (req.p, req.q) {
        (Some(p), Some(q)) => GameRules::crossing(p, q),
        (None, None) => GameRules::secure(board.family()),
        _ => return Err(ApiError::BadRequest("give both p and q, or neither for the secure game".into())),
    };
    let config = MatchConfig {
        board,
        rules,
        maker: req.maker,
        breaker: req.breaker,
        seed: req.seed.unwrap_or(app.default_seed),
        unsafe_heuristic: req.unsafe_heuristic,
    };
    let session = tokio::task::spawn_blocking(move || Session::new(config))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))??;
    let id = app.next_id.fetch_add(1, Ordering::SeqCst);
    let body = view(id, &session);
    app.journal(id, session.record());
    app.games.write().expect("games lock").insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn get_game(State(app): State<AppState>, Path(id): Path<u64>) -> Result<Json<GameView>, ApiError> {
    let game = app.game(id)?;
    let s = game.lock().expect("game lock");
    Ok(Json(view(id, &s)))
}

#[derive(Debug, Deserialize)]
pub struct MoveRequest {
    pub player: Player,
    /// Edge midpoints in doubled coordinates.
    pub edges: Vec<[i32; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MoveResponse {
    pub replies: Vec<RecordedMove>,
    pub game: GameView,
}

async fn post_moves(
    State(app): State<AppState>,
    Path(id): Path<u64>,
    Json(req): Json<MoveRequest>,
) -> Result<Json<MoveResponse>, ApiError> {
    let game = app.game(id)?;
    let journal = app.clone();
    tokio::task::spawn_blocking(move || {
        let mut s = game.lock().expect("game lock");
        let edges = req
            .edges
            .iter()
            .map(|&[x, y]| {
                s.topology()
                    .edge_at(Coord::new(x, y))
                    .ok_or_else(|| ApiError::BadRequest(format!("UnknownEdge: no edge at ({x}, {y})")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let replies = s.submit(req.player, &edges)?;
        journal.journal(id, s.record());
        Ok(Json(MoveResponse { replies, game: view(id, &s) }))
    })
    .await
    .map_err(|e| ApiError::Internal(e.to_string()))?
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolverHint {
    pub winner: Winner,
    pub principal_variation: Vec<[i32; 2]>,
    pub nodes_visited: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Hint {
    /// Unclaimed edges red still needs for a crossing; `None` once blue has
    /// cut every route.
    pub min_completion_cost: Option<u32>,
    pub status: String,
    /// Exact result with best play from here, for crossing games within
    /// the solver cap.
    pub solver: Option<SolverHint>,
    pub solver_note: Option<String>,
}

async fn get_hint(State(app): State<AppState>, Path(id): Path<u64>) -> Result<Json<Hint>, ApiError> {
    let game = app.game(id)?;
    let state = game.lock().expect("game lock").state().clone();
    tokio::task::spawn_blocking(move || {
        let status = match crossing_status(&state) {
            CrossingStatus::MakerWin => "blue_crossed",
            CrossingStatus::BreakerWin => "red_crossed",
            CrossingStatus::Open => "open",
        };
        let (solver, solver_note) = match state.rules().kind {
            GameKind::Crossing { p, q } if crossing_status(&state) == CrossingStatus::Open => {
                match solve(state.topology(), p, q, &state) {
                    Ok(r) => {
                        let topo = state.topology();
                        let pv = r
                            .principal_variation
                            .iter()
                            .map(|m| {
                                let c = topo.edge(m.edge).mid;
                                [c.x, c.y]
                            })
                            .collect();
                        let h = SolverHint { winner: r.winner, principal_variation: pv, nodes_visited: r.nodes_visited };
                        (Some(h), None)
                    }
                    Err(e @ SolverError::CapExceeded { .. }) => (None, Some(e.to_string())),
                    Err(e) => (None, Some(e.to_string())),
                }
            }
            GameKind::Crossing { .. } => (None, Some("game is decided".into())),
            _ => (None, Some(format!("solver plays crossing games; cap {DEFAULT_CAP} edges"))),
        };
        Json(Hint { min_completion_cost: min_completion_cost(&state), status: status.into(), solver, solver_note })
    })
    .await
    .map_err(|e| ApiError::Internal(e.to_string()))
}

async fn get_record(State(app): State<AppState>, Path(id): Path<u64>) -> Result<Json<GameRecord>, ApiError> {
    let game = app.game(id)?;
    let record = game.lock().expect("game lock").record().clone();
    Ok(Json(record))
}
