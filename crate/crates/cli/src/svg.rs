//! Deterministic SVG figure of the boundary strata, tangencies and zeros.

use std::fmt::Write;

use eqmorse::morse::{IndexReport, Problem};

const SIZE: f64 = 640.0;
const MARGIN: f64 = 40.0;

struct View {
    scale: f64,
}

impl View {
    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        let c = SIZE / 2.0;
        (c + p[0] * self.scale, c - p[1] * self.scale)
    }
}

/// Renders a planar problem. Returns `None` for one-dimensional problems.
pub fn render(problem: &Problem, report: &IndexReport) -> Option<String> {
    let strat = report.strata.full.as_ref()?;
    let view = View {
        scale: (SIZE / 2.0 - MARGIN) / problem.domain.bounding_radius(),
    };
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    let signs = strat.segment_signs();
    for (li, lp) in strat.loops.iter().enumerate() {
        let m = lp.len();
        // Split the loop into runs of equal sign; start at a sign change if any.
        let start = (0..m).find(|&k| signs[li][k] != signs[li][(k + m - 1) % m]).unwrap_or(0);
        let mut k = 0;
        while k < m {
            let plus = signs[li][(start + k) % m];
            let mut pts = vec![lp.point(start + k)];
            while k < m && signs[li][(start + k) % m] == plus {
                k += 1;
                pts.push(lp.point(start + k));
            }
            let coords: Vec<String> = pts
                .iter()
                .map(|&p| {
                    let (x, y) = view.map(p);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let dash = if plus { "" } else { r#" stroke-dasharray="6,4""# };
            writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="black" stroke-width="1.5"{dash}/>"#,
                coords.join(" ")
            )
            .unwrap();
        }
    }

    for t in &strat.tangencies {
        let (x, y) = view.map(t.location);
        let fill = if t.is_plus { "black" } else { "white" };
        writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{fill}" stroke="black"/>"#
        )
        .unwrap();
    }

    let ring = &problem.ring;
    for orbit in &report.orbits {
        let chars = ring.ch(&orbit.induced).map(|c| c.values).unwrap_or_default();
        for &i in &orbit.members {
            let z = &report.zeros[i];
            let (x, y) = view.map([z.location[0], z.location[1]]);
            let color = if z.sign() > 0 { "#1f5fbf" } else { "#bf1f1f" };
            writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="6" height="6" fill="{color}"/>"#,
                x - 3.0,
                y - 3.0
            )
            .unwrap();
            writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="10">{} {:?}</text>"#,
                x + 5.0,
                y - 5.0,
                ring.table.label(z.stabilizer_class),
                chars
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    Some(out)
}
