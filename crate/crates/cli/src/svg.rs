//! Log-scale SVG heatmaps of two-axis grids.

use std::fmt::Write as _;

use rydcav::grid::SpectralGrid;

/// Decades shown below the maximum; anything smaller gets the floor colour.
const DECADES: f64 = 6.0;
const CELL: f64 = 3.0;
const MARGIN: f64 = 60.0;
const BAR: f64 = 16.0;

/// Viridis sampled at five stops.
const STOPS: [(f64, [f64; 3]); 5] = [
    (0.00, [68.0, 1.0, 84.0]),
    (0.25, [59.0, 82.0, 139.0]),
    (0.50, [33.0, 145.0, 140.0]),
    (0.75, [94.0, 201.0, 98.0]),
    (1.00, [253.0, 231.0, 37.0]),
];

fn colour(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let k = STOPS.iter().position(|s| s.0 >= t).unwrap_or(STOPS.len() - 1).max(1);
    let (t0, c0) = STOPS[k - 1];
    let (t1, c1) = STOPS[k];
    let f = (t - t0) / (t1 - t0);
    let c: Vec<u8> = (0..3).map(|i| (c0[i] + f * (c1[i] - c0[i])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Position of `log10(v)` within the displayed window `[top − DECADES, top]`.
fn level(v: f64, top: f64) -> f64 {
    if v > 0.0 {
        (v.log10() - (top - DECADES)) / DECADES
    } else {
        0.0
    }
}

/// First axis runs left to right, second bottom to top. Overlays become
/// lines: a single-row family is drawn along both directions, a per-row
/// family as curves over the first axis.
pub fn heatmap(grid: &SpectralGrid, title: &str, with_overlays: bool) -> String {
    let shape = grid.shape();
    assert_eq!(shape.len(), 2, "heatmaps need two axes");
    let (nx, ny) = (shape[0], shape[1]);
    let mags = grid.magnitudes();
    let max = mags.iter().cloned().filter(|v| v.is_finite()).fold(0.0, f64::max);
    let top = if max > 0.0 { max.log10() } else { 0.0 };

    let (w, h) = (nx as f64 * CELL, ny as f64 * CELL);
    let (xa, ya) = (&grid.axes[0].values, &grid.axes[1].values);
    let (x0, x1) = (xa[0], xa[nx - 1]);
    let (y0, y1) = (ya[0], ya[ny - 1]);
    let px = |x: f64| MARGIN + if x1 > x0 { (x - x0) / (x1 - x0) * (w - CELL) + CELL / 2.0 } else { w / 2.0 };
    let py = |y: f64| MARGIN + h - if y1 > y0 { (y - y0) / (y1 - y0) * (h - CELL) + CELL / 2.0 } else { h / 2.0 };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" font-family="sans-serif" font-size="12">"#,
        w + 2.0 * MARGIN + 3.0 * BAR + 40.0,
        h + 2.0 * MARGIN
    );
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="{:.1}">{}</text>"#, MARGIN / 2.0, escape(title));
    let _ = writeln!(s, r#"<g shape-rendering="crispEdges">"#);
    for i in 0..nx {
        for j in 0..ny {
            let v = mags[i * ny + j];
            let _ = writeln!(
                s,
                r#"<rect x="{:.1}" y="{:.1}" width="{CELL}" height="{CELL}" fill="{}"/>"#,
                MARGIN + i as f64 * CELL,
                MARGIN + h - (j + 1) as f64 * CELL,
                colour(level(v, top))
            );
        }
    }
    let _ = writeln!(s, "</g>");

    if with_overlays {
        let _ = writeln!(s, r#"<g stroke="white" stroke-width="1" stroke-dasharray="4 3" fill="none">"#);
        for o in &grid.overlays {
            if o.rows.len() == 1 {
                for &e in &o.rows[0] {
                    if e >= x0 && e <= x1 {
                        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{MARGIN}" x2="{:.1}" y2="{:.1}"/>"#, px(e), px(e), MARGIN + h);
                    }
                    if e >= y0 && e <= y1 {
                        let _ = writeln!(s, r#"<line x1="{MARGIN}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/>"#, py(e), MARGIN + w, py(e));
                    }
                }
            } else {
                let width = o.rows.first().map_or(0, Vec::len);
                for k in 0..width {
                    let pts: Vec<String> = xa
                        .iter()
                        .zip(&o.rows)
                        .filter(|(_, r)| r[k] >= y0 && r[k] <= y1)
                        .map(|(&x, r)| format!("{:.1},{:.1}", px(x), py(r[k])))
                        .collect();
                    if pts.len() > 1 {
                        let _ = writeln!(s, r#"<polyline points="{}"/>"#, pts.join(" "));
                    }
                }
            }
        }
        let _ = writeln!(s, "</g>");
    }

    // axes
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{w:.1}" height="{h:.1}" fill="none" stroke="black"/>"#
    );
    for (t, v) in [(0.0, x0), (0.5, 0.5 * (x0 + x1)), (1.0, x1)] {
        let x = MARGIN + t * w;
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, MARGIN + h + 16.0, tick(v));
    }
    for (t, v) in [(0.0, y0), (0.5, 0.5 * (y0 + y1)), (1.0, y1)] {
        let y = MARGIN + h - t * h;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, MARGIN - 6.0, y + 4.0, tick(v));
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        MARGIN + w / 2.0,
        MARGIN + h + 36.0,
        escape(&grid.axes[0].name)
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">{}</text>"#,
        MARGIN - 40.0,
        MARGIN + h / 2.0,
        MARGIN - 40.0,
        MARGIN + h / 2.0,
        escape(&grid.axes[1].name)
    );

    // colour bar in decades
    let bx = MARGIN + w + BAR;
    let steps = 60;
    for k in 0..steps {
        let t = k as f64 / (steps - 1) as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{bx:.1}" y="{:.1}" width="{BAR}" height="{:.1}" fill="{}"/>"#,
            MARGIN + h - (k + 1) as f64 * h / steps as f64,
            h / steps as f64 + 0.5,
            colour(t)
        );
    }
    for d in 0..=DECADES as i32 {
        let y = MARGIN + h - d as f64 / DECADES * h;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">1e{:.1}</text>"#,
            bx + BAR + 4.0,
            y + 4.0,
            top - DECADES + d as f64
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    format!("{v:.2}")
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rydcav::grid::{Axis, Metadata, Overlay, Shell, Values};

    fn grid() -> SpectralGrid {
        let meta = Metadata {
            version: "0".into(),
            params_hash: "h".into(),
            units: "gamma_e".into(),
            provenance: "test".into(),
            alpha_power: 4,
            alpha: 1.0,
        };
        let values: Vec<f64> = (0..12).map(|k| 10f64.powi(k - 8)).collect();
        SpectralGrid::new(
            vec![Axis::linspace("x", 0.0, 1.0, 3), Axis::linspace("y", -1.0, 1.0, 4)],
            Values::Real(values),
            Shell::LineDelta,
            meta,
        )
        .unwrap()
        .with_overlay(Overlay {
            name: "pm_eps".into(),
            rows: vec![vec![0.5, -0.5]],
        })
        .unwrap()
    }

    #[test]
    fn colour_map_ends_at_the_stops() {
        assert_eq!(colour(0.0), "#440154");
        assert_eq!(colour(1.0), "#fde725");
        assert_eq!(colour(-3.0), colour(0.0));
    }

    #[test]
    fn one_cell_per_point_and_log_levels() {
        let g = grid();
        let svg = heatmap(&g, "t", false);
        assert_eq!(svg.matches(r#"width="3" height="3""#).count(), 12);
        assert!(svg.contains("1e-3.0") && svg.contains("1e3.0"));
        // the brightest cell is the largest value
        assert_eq!(level(1e3, 3.0), 1.0);
        assert!(level(1e-8, 3.0) < 0.0);
    }

    #[test]
    fn overlays_are_optional() {
        let g = grid();
        assert!(!heatmap(&g, "t", false).contains("<line"));
        assert_eq!(heatmap(&g, "t", true).matches("<line").count(), 3);
    }
}
