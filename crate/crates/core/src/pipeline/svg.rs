//! Plain SVG drawing of critical graphs in the source chart.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::numerics::SpherePoint;
use crate::ribbon::RibbonGraph;
use crate::trajectory::Separatrix;

use super::report;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 32.0;

/// Everything that gets drawn, in plane coordinates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scene {
    pub polylines: Vec<Vec<[f64; 2]>>,
    /// Position and order.
    pub zeros: Vec<([f64; 2], usize)>,
    pub poles: Vec<[f64; 2]>,
}

impl Scene {
    /// Vertex orders come from the valences of `g`.
    pub fn new(g: &RibbonGraph, traces: &[Separatrix], poles: &[SpherePoint]) -> Scene {
        let mut valence = vec![0; g.n_vertices()];
        for h in 0..g.n_half_edges() {
            valence[g.vertex_of(h)] += 1;
        }
        let zeros = g
            .vertex_points()
            .iter()
            .zip(&valence)
            .filter_map(|(p, &k)| p.finite().map(|z| ([z.mid_c64().re, z.mid_c64().im], k - 2)))
            .collect();
        Scene {
            polylines: traces
                .iter()
                .map(|s| s.path.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            zeros,
            poles: poles
                .iter()
                .filter_map(|p| p.finite().map(|z| [z.mid_c64().re, z.mid_c64().im]))
                .collect(),
        }
    }

    pub fn from_report(g: &report::Graph) -> Scene {
        Scene {
            polylines: g.traces.iter().map(|t| t.points.clone()).collect(),
            zeros: g.zeros.iter().map(|z| (z.point.value(), z.order)).collect(),
            poles: g.poles.iter().filter_map(|p| p.point.finite()).collect(),
        }
    }

    fn bounds(&self) -> Option<[f64; 4]> {
        let pts = self
            .polylines
            .iter()
            .flatten()
            .chain(self.zeros.iter().map(|z| &z.0))
            .chain(&self.poles)
            .filter(|p| p[0].is_finite() && p[1].is_finite());
        let mut b: Option<[f64; 4]> = None;
        for p in pts {
            b = Some(match b {
                None => [p[0], p[1], p[0], p[1]],
                Some(b) => [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])],
            });
        }
        b
    }
}

/// Deterministic SVG text. An empty scene gives the unit box with axes.
pub fn render_svg(scene: &Scene) -> String {
    let [x0, y0, x1, y1] = scene.bounds().unwrap_or([-1.0, -1.0, 1.0, 1.0]);
    let span = (x1 - x0).max(y1 - y0).max(1e-6) * 1.1;
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let tx = |x: f64| SIZE / 2.0 + (x - cx) * scale;
    let ty = |y: f64| SIZE / 2.0 - (y - cy) * scale;
    let half = span / 2.0;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(s, r##"<g stroke="#bbbbbb" stroke-width="1">"##);
    if (cx - half..=cx + half).contains(&0.0) {
        let _ = writeln!(s, r#"<line x1="{0:.3}" y1="0" x2="{0:.3}" y2="{SIZE}"/>"#, tx(0.0));
    }
    if (cy - half..=cy + half).contains(&0.0) {
        let _ = writeln!(s, r#"<line x1="0" y1="{0:.3}" x2="{SIZE}" y2="{0:.3}"/>"#, ty(0.0));
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g fill="none" stroke="#1f4e9c" stroke-width="1.5">"##);
    for line in &scene.polylines {
        if line.len() < 2 {
            continue;
        }
        let pts: Vec<String> = line.iter().map(|p| format!("{:.3},{:.3}", tx(p[0]), ty(p[1]))).collect();
        let _ = writeln!(s, r#"<polyline points="{}"/>"#, pts.join(" "));
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g fill="#c0392b">"##);
    for (p, k) in &scene.zeros {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{:.1}"/>"#,
            tx(p[0]),
            ty(p[1]),
            2.5 + 1.5 * *k as f64
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g stroke="#222222" stroke-width="1.5">"##);
    for p in &scene.poles {
        let (x, y) = (tx(p[0]), ty(p[1]));
        let _ = writeln!(
            s,
            r#"<path d="M{:.3},{:.3}L{:.3},{:.3}M{:.3},{:.3}L{:.3},{:.3}"/>"#,
            x - 4.0,
            y - 4.0,
            x + 4.0,
            y + 4.0,
            x - 4.0,
            y + 4.0,
            x + 4.0,
            y - 4.0
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(scene: &Scene, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(scene))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_scene_has_axes_only() {
        let s = render_svg(&Scene::default());
        assert!(s.starts_with("<svg"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<line").count(), 2);
        assert!(!s.contains("<polyline") && !s.contains("<circle"));
    }

    #[test]
    fn output_is_deterministic() {
        let scene = Scene {
            polylines: vec![vec![[0.5, 0.866], [0.5, -0.866]]],
            zeros: vec![([0.5, 0.866], 1), ([0.5, -0.866], 1)],
            poles: vec![[0.0, 0.0], [1.0, 0.0]],
        };
        assert_eq!(render_svg(&scene), render_svg(&scene.clone()));
        assert_eq!(render_svg(&scene).matches("<circle").count(), 2);
    }
}
