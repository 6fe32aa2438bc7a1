//! Planar SVG rendering: discs, slab cuts as chords, annuli, and a
//! parameter legend. Deterministic output for identical input.

use intdist::geometry::ComponentUnion;
use std::fmt::Write as _;

fn fmt(x: f64) -> String {
    format!("{x:.6}")
}

/// Renders a two-dimensional union to an SVG string.
pub fn render_svg(union: &ComponentUnion) -> Result<String, String> {
    if union.dimension != 2 {
        return Err(format!(
            "rendering supports d = 2 only (got d = {})",
            union.dimension
        ));
    }
    // bounds
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    let mut grow = |x: f64, y: f64, r: f64| {
        min_x = min_x.min(x - r);
        max_x = max_x.max(x + r);
        min_y = min_y.min(y - r);
        max_y = max_y.max(y + r);
    };
    for c in &union.components {
        grow(c.center.0[0], c.center.0[1], c.radius());
    }
    for s in &union.shells {
        grow(s.center.0[0], s.center.0[1], s.r_outer);
    }
    if !min_x.is_finite() {
        return Err("nothing to draw".into());
    }
    let pad = 0.05 * ((max_x - min_x).max(max_y - min_y)).max(1.0);
    min_x -= pad;
    max_x += pad;
    min_y -= pad;
    max_y += pad;
    let world = (max_x - min_x).max(max_y - min_y);
    let size = 800.0;
    let scale = size / world;

    let tx = |x: f64| (x - min_x) * scale;
    let ty = |y: f64| (max_y - y) * scale; // flip y for SVG

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        fmt(size),
        fmt(size),
        fmt(size),
        fmt(size)
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    for c in &union.components {
        let (cx, cy, r) = (c.center.0[0], c.center.0[1], c.radius());
        let _ = writeln!(
            svg,
            r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="steelblue" stroke-width="1.2"/>"#,
            fmt(tx(cx)),
            fmt(ty(cy)),
            fmt(r * scale)
        );
        for s in &c.slabs {
            // chords at +-half_width along the normal
            let (nx, ny) = (s.normal[0], s.normal[1]);
            let (px, py) = (-ny, nx); // in-plane perpendicular
            let h = (r * r - s.half_width * s.half_width).max(0.0).sqrt();
            for sign in [-1.0f64, 1.0] {
                let bx = cx + sign * s.half_width * nx;
                let by = cy + sign * s.half_width * ny;
                let _ = writeln!(
                    svg,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="indianred" stroke-width="1"/>"#,
                    fmt(tx(bx - h * px)),
                    fmt(ty(by - h * py)),
                    fmt(tx(bx + h * px)),
                    fmt(ty(by + h * py))
                );
            }
        }
    }
    for s in &union.shells {
        let (cx, cy) = (s.center.0[0], s.center.0[1]);
        for (r, color) in [(s.r_inner, "seagreen"), (s.r_outer, "seagreen")] {
            let _ = writeln!(
                svg,
                r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="{}" stroke-width="0.8"/>"#,
                fmt(tx(cx)),
                fmt(ty(cy)),
                fmt(r * scale),
                color
            );
        }
    }
    let _ = writeln!(
        svg,
        r#"<text x="10" y="20" font-family="monospace" font-size="14">components={} shells={} extent=[{}, {}]x[{}, {}]</text>"#,
        union.components.len(),
        union.shells.len(),
        fmt(min_x),
        fmt(max_x),
        fmt(min_y),
        fmt(max_y)
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}
