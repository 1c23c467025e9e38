//! Maker-Breaker crossing games on triangular grids `Δ(m,n)` and their
//! hexagonal duals `H(n,m)`.
//!
//! The engine ([`game_state`], [`lattice`]) plays the games; [`strategy`]
//! implements the secure-game responses and the Maker and Breaker
//! strategies built on them; [`security`] checks certificates; [`solver`]
//! decides small boards exactly; [`suites`] holds the property checks.

pub mod brackets;
pub mod game_state;
pub mod lattice;
pub mod opponents;
pub mod record;
pub mod render;
pub mod scenarios;
pub mod security;
pub mod solver;
pub mod strategy;
pub mod suites;

pub use brackets::{BracketInstance, BracketTemplate, Family};
pub use game_state::{CrossingStatus, EdgeMark, GameError, GameKind, GameRules, GameState, Player};
pub use lattice::{build_hexagonal, build_triangular, Coord, DualId, EdgeId, GridTopology, VertexId};
pub use opponents::Policy;
pub use record::{run_match, BoardSpec, GameRecord, MatchConfig, Outcome, Session};
pub use security::{check_grid, CertKind, CertMap, SecurityCertificate};
pub use solver::{solve, SolveResult, SolverError, Winner};
pub use strategy::{secure_response, StrategyError, StrategyResponse};
pub use suites::{Suite, SuiteReport};
