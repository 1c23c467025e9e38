//! SVG board diagrams: primal edges by owner, the dual in violet, and
//! certificate brackets, gates and paths highlighted.

use crate::game_state::{EdgeMark, GameState};
use crate::lattice::{Coord, EdgeId};
use crate::record::{replay, GameRecord, ReplayError};
use crate::security::{CertKind, CertMap};
use std::collections::HashSet;
use std::fmt::Write;
use std::str::FromStr;
use thiserror::Error;

const SCALE: f64 = 48.0;
const MARGIN: f64 = 36.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Svg,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("unsupported format {0:?}; only svg is available")]
    UnsupportedFormat(String),
}

impl FromStr for Format {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "svg" => Ok(Format::Svg),
            other => Err(RenderError::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RenderOptions {
    pub dual: bool,
    pub labels: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { dual: true, labels: false }
    }
}

/// The board as an SVG document.
pub fn render_svg(state: &GameState, certs: Option<&CertMap>, opts: RenderOptions) -> String {
    let topo = state.topology();
    let points = topo.vertices.iter().map(|v| v.pos).chain(topo.duals.iter().map(|d| d.pos));
    let (mut x0, mut x1, mut y0, mut y1) = (i32::MAX, i32::MIN, i32::MAX, i32::MIN);
    for p in points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    let width = (x1 - x0) as f64 / 2.0 * SCALE + 2.0 * MARGIN;
    let height = (y1 - y0) as f64 / 2.0 * SCALE + 2.0 * MARGIN;
    // y grows upwards on the board and downwards in SVG.
    let at = |c: Coord| ((c.x - x0) as f64 / 2.0 * SCALE + MARGIN, (y1 - c.y) as f64 / 2.0 * SCALE + MARGIN);

    let mut bracket_edges = HashSet::new();
    let mut gates = HashSet::new();
    let mut paths = HashSet::new();
    if let Some(certs) = certs {
        for cert in certs.values() {
            match &cert.kind {
                CertKind::Floating { bracket } => bracket_edges.extend(bracket.edges.iter().copied()),
                CertKind::Top { gate } | CertKind::Bottom { gate } => {
                    gates.insert(*gate);
                }
                CertKind::ExtraSecure => {}
            }
            paths.extend(cert.path.iter().copied());
        }
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r#"<title>{}</title>"#, topo.kind);
    out.push_str(
        "<style>.edge{stroke-linecap:round}.unclaimed{stroke:#000;stroke-width:1.5}.blue{stroke:#1f5fd6;stroke-width:4}\
         .double{stroke:#1f5fd6;stroke-width:7}.red{stroke:#d62728;stroke-width:4}\
         .dual{stroke:#8a2be2;stroke-width:1;stroke-dasharray:3 3;fill:none}.dualv{fill:#8a2be2}\
         .path{stroke:#7fd3ff;stroke-width:12;stroke-opacity:.5}.bracket{stroke:#ff9f1c;stroke-width:12;stroke-opacity:.6}\
         .gate{stroke:#2ca02c;stroke-width:12;stroke-opacity:.6}.vertex{fill:#000}</style>\n",
    );

    let segment = |out: &mut String, class: &str, a: Coord, b: Coord, id: Option<EdgeId>| {
        let (ax, ay) = at(a);
        let (bx, by) = at(b);
        let id = id.map(|e| format!(r#" data-edge="{}""#, e.0)).unwrap_or_default();
        let _ = writeln!(out, r#"<line class="{class}"{id} x1="{ax:.1}" y1="{ay:.1}" x2="{bx:.1}" y2="{by:.1}"/>"#);
    };

    out.push_str("<g id=\"highlights\">\n");
    for (i, edge) in topo.edges.iter().enumerate() {
        let e = EdgeId(i as u32);
        let (a, b) = (topo.vertex(edge.ends[0]).pos, topo.vertex(edge.ends[1]).pos);
        for (set, class) in [(&paths, "path"), (&bracket_edges, "bracket"), (&gates, "gate")] {
            if set.contains(&e) {
                segment(&mut out, class, a, b, None);
            }
        }
    }
    out.push_str("</g>\n");

    if opts.dual {
        out.push_str("<g id=\"dual\">\n");
        for (i, _) in topo.edges.iter().enumerate() {
            let [p, q] = topo.dual_edge(EdgeId(i as u32));
            segment(&mut out, "dual", topo.dual(p).pos, topo.dual(q).pos, None);
        }
        for d in &topo.duals {
            let (x, y) = at(d.pos);
            let _ = writeln!(out, r#"<circle class="dualv" cx="{x:.1}" cy="{y:.1}" r="2.5"/>"#);
        }
        out.push_str("</g>\n");
    }

    out.push_str("<g id=\"primal\">\n");
    for (i, edge) in topo.edges.iter().enumerate() {
        let e = EdgeId(i as u32);
        let class = match state.mark(e) {
            EdgeMark::Unclaimed => "edge unclaimed",
            EdgeMark::Blue => "edge blue",
            EdgeMark::BlueDouble => "edge double",
            EdgeMark::Red => "edge red",
        };
        segment(&mut out, class, topo.vertex(edge.ends[0]).pos, topo.vertex(edge.ends[1]).pos, Some(e));
    }
    for v in &topo.vertices {
        let (x, y) = at(v.pos);
        let _ = writeln!(out, r#"<circle class="vertex" cx="{x:.1}" cy="{y:.1}" r="3.5"/>"#);
        if opts.labels {
            let (rx, ry) = v.pos.real();
            let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" font-size="9">({rx},{ry})</text>"#, x + 4.0, y - 4.0);
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// One frame per position of a recorded game, starting from the empty
/// board. Certificates are those recorded with each move.
pub fn render_record(record: &GameRecord, opts: RenderOptions) -> Result<Vec<String>, ReplayError> {
    let frames = replay(record)?;
    let mut certs: Option<&CertMap> = None;
    let mut out = vec![render_svg(&frames[0], None, opts)];
    for (mv, state) in record.moves.iter().zip(&frames[1..]) {
        if let Some(c) = &mv.certificates {
            certs = Some(c);
        }
        out.push(render_svg(state, certs, opts));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::Family;
    use crate::game_state::GameRules;
    use crate::lattice::build_triangular;
    use std::sync::Arc;

    #[test]
    fn empty_board_has_every_edge_and_vertex() {
        let topo = Arc::new(build_triangular(6, 5).unwrap());
        let s = GameState::new(topo.clone(), GameRules::crossing(1, 1)).unwrap();
        let svg = render_svg(&s, None, RenderOptions::default());
        assert_eq!(svg.matches("class=\"edge unclaimed\"").count(), topo.num_edges());
        assert_eq!(svg.matches("class=\"vertex\"").count(), topo.vertices.len());
        assert_eq!(svg.matches("class=\"dualv\"").count(), topo.duals.len());
    }

    #[test]
    fn floating_certificate_shows_its_bracket_and_path() {
        let fx = &crate::scenarios::single_bracket_fixtures(Family::Tri)[0];
        let svg = render_svg(&fx.state, Some(&fx.certs), RenderOptions::default());
        let cert = fx.certs.values().next().unwrap();
        let CertKind::Floating { bracket } = &cert.kind else { panic!("floating fixture") };
        assert_eq!(svg.matches("class=\"bracket\"").count(), bracket.edges.len());
        assert_eq!(svg.matches("class=\"path\"").count(), cert.path.len());
        assert!(svg.matches("class=\"edge red\"").count() > 0);
    }

    #[test]
    fn only_svg_is_supported() {
        assert_eq!("SVG".parse::<Format>(), Ok(Format::Svg));
        assert!(matches!("png".parse::<Format>(), Err(RenderError::UnsupportedFormat(_))));
    }
}
