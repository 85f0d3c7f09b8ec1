use std::fmt::Write as _;

use crate::model::{CurveGeometry, Front, FrontKind, ResolutionRule, Solution};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 50.0;
/// Largest allowed gap between a polyline and the exact front, in pixels.
pub const PIXEL_TOL: f64 = 0.1;

/// Affine map from the `x`-`t` window to pixel coordinates, `t` upward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub window: [f64; 2],
    pub t_max: f64,
}

impl Frame {
    pub fn px(&self, t: f64, x: f64) -> (f64, f64) {
        let [x0, x1] = self.window;
        (
            MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN),
            HEIGHT - MARGIN - t / self.t_max * (HEIGHT - 2.0 * MARGIN),
        )
    }
}

fn refine(f: &Front, frame: &Frame, t0: f64, t1: f64, depth: u32, out: &mut Vec<(f64, f64)>) {
    let tm = 0.5 * (t0 + t1);
    let (a, b, m) = (frame.px(t0, f.x_at(t0)), frame.px(t1, f.x_at(t1)), frame.px(tm, f.x_at(tm)));
    let chord = (0.5 * (a.0 + b.0) - m.0).hypot(0.5 * (a.1 + b.1) - m.1);
    if depth < 24 && (depth < 3 || chord > PIXEL_TOL) {
        refine(f, frame, t0, tm, depth + 1, out);
        refine(f, frame, tm, t1, depth + 1, out);
    } else {
        out.push(b);
    }
}

/// Pixel polyline of `f` on `[t_start, min(t_end, t_max)]`; empty for
/// fronts that start after `t_max` or have zero length.
pub fn front_polyline(f: &Front, frame: &Frame) -> Vec<(f64, f64)> {
    let t1 = f.t_end.unwrap_or(frame.t_max).min(frame.t_max);
    if !(t1 > f.t_start) {
        return Vec::new();
    }
    let mut out = vec![frame.px(f.t_start, f.x_at(f.t_start))];
    match f.geometry {
        CurveGeometry::Line { .. } => out.push(frame.px(t1, f.x_at(t1))),
        _ => refine(f, frame, f.t_start, t1, 0, &mut out),
    }
    out
}

fn style(kind: FrontKind) -> &'static str {
    match kind {
        FrontKind::Shock => r##"stroke="#000" stroke-width="1.5""##,
        FrontKind::Contact => r##"stroke="#1f5fbf" stroke-width="1.2" stroke-dasharray="6 4""##,
        FrontKind::DeltaShock => r##"stroke="#b03020" stroke-width="3.5""##,
        FrontKind::DeltaContact => r##"stroke="#b03020" stroke-width="3.5" stroke-dasharray="8 4""##,
        FrontKind::FanEdge => r##"stroke="#555" stroke-width="1" stroke-dasharray="1.5 3""##,
    }
}

fn rule_name(r: ResolutionRule) -> &'static str {
    match r {
        ResolutionRule::MergeDeltas => "MergeDeltas",
        ResolutionRule::DeltaCrossesContact => "DeltaCrossesContact",
        ResolutionRule::ShockHitsDelta => "ShockHitsDelta",
        ResolutionRule::DeltaEntersFan => "DeltaEntersFan",
        ResolutionRule::BreakdownBifurcation => "BreakdownBifurcation",
        ResolutionRule::FrontExitsFan => "FrontExitsFan",
        ResolutionRule::ContactContinuation => "ContactContinuation",
    }
}

/// `x`-`t` wave diagram: shocks solid, contacts dashed, delta fronts heavy,
/// fan edges dotted, events as dots.
pub fn diagram(sol: &Solution, window: [f64; 2], t_max: f64) -> String {
    let frame = Frame { window, t_max };
    let (bx0, by1) = frame.px(0.0, window[0]);
    let (bx1, by0) = frame.px(t_max, window[1]);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="plot"><rect x="{bx0}" y="{by0}" width="{}" height="{}"/></clipPath></defs>"#,
        bx1 - bx0,
        by1 - by0
    );
    let _ = writeln!(s, r##"<rect x="{bx0}" y="{by0}" width="{}" height="{}" fill="#fff" stroke="#000"/>"##, bx1 - bx0, by1 - by0);
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<text x="{bx0}" y="{}" text-anchor="middle">{}</text>"#, by1 + 16.0, window[0]);
    let _ = writeln!(s, r#"<text x="{bx1}" y="{}" text-anchor="middle">{}</text>"#, by1 + 16.0, window[1]);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">x</text>"#, 0.5 * (bx0 + bx1), by1 + 32.0);
    let _ = writeln!(s, r#"<text x="{}" y="{by1}" text-anchor="end">0</text>"#, bx0 - 6.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{t_max}</text>"#, bx0 - 6.0, by0 + 4.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">t</text>"#, bx0 - 6.0, 0.5 * (by0 + by1));
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g clip-path="url(#plot)" fill="none" stroke-linecap="round">"#);
    for f in &sol.fronts {
        let pts = front_polyline(f, &frame);
        if pts.is_empty() {
            continue;
        }
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let _ = writeln!(
            s,
            r#"<polyline data-front="{}" data-kind="{}" {} points="{}"/>"#,
            f.id,
            f.kind.as_str(),
            style(f.kind),
            coords.join(" ")
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g fill="#000">"##);
    for e in sol.events.iter().filter(|e| e.point.t <= t_max) {
        let (x, y) = frame.px(e.point.t, e.point.x);
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="3.5"><title>{} at t={}, x={}</title></circle>"#,
            rule_name(e.rule),
            e.point.t,
            e.point.x
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}
