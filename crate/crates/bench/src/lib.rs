//! Positions shared by the benchmarks.

use std::sync::Arc;
use tricross_core::{build_triangular, GameRules, GameState, GridTopology};

pub fn tri(m: u32, n: u32) -> Arc<GridTopology> {
    Arc::new(build_triangular(m, n).expect("bench board"))
}

/// `Δ(m,n)` with `claimed` edges taken alternately blue and red, picked by
/// a fixed stride so the position is the same on every run.
pub fn midgame(m: u32, n: u32, p: u32, q: u32, claimed: usize) -> GameState {
    let topo = tri(m, n);
    let count = topo.num_edges();
    let mut marks = vec![tricross_core::EdgeMark::Unclaimed; count];
    let mut i = 0;
    for k in 0..claimed.min(count) {
        while marks[i].is_blue() || marks[i].is_red() {
            i = (i + 1) % count;
        }
        marks[i] = if k % 2 == 0 { tricross_core::EdgeMark::Blue } else { tricross_core::EdgeMark::Red };
        i = (i + 7) % count;
    }
    GameState::with_marks(topo, GameRules::crossing(p, q), marks, tricross_core::Player::Maker).expect("bench position")
}
