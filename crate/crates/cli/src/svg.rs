//! Minimal SVG line plots and grayscale heatmaps. Negative heatmap values
//! are drawn black.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f4e9c", "#c0392b", "#2e7d32", "#6a1b9a"];

fn frame(title: &str, body: &str, x_label: &str, y_label: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="25" text-anchor="middle" font-size="16">{title}</text>"#, WIDTH / 2.0);
    s.push_str(body);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{x_label}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" font-size="13" transform="rotate(-90 14 {})">{y_label}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    s.push_str("</svg>\n");
    s
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// One polyline per series; points are `(x, y)`.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[(&str, Vec<(f64, f64)>)]) -> String {
    let (x0, x1) = extent(series.iter().flat_map(|(_, p)| p.iter().map(|q| q.0)));
    let (y0, y1) = extent(series.iter().flat_map(|(_, p)| p.iter().map(|q| q.1)));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let mut body = String::new();
    for (i, (name, points)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|p| format!("{:.2},{:.2}", sx(p.0), sy(p.1)))
            .collect();
        let _ = writeln!(
            body,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
        let _ = writeln!(
            body,
            r#"<text x="{}" y="{}" font-size="12" fill="{color}">{name}</text>"#,
            WIDTH - MARGIN - 110.0,
            MARGIN + 16.0 * (i as f64 + 1.0)
        );
    }
    let _ = writeln!(
        body,
        r#"<text x="{MARGIN}" y="{}" font-size="11">{x0:.3} .. {x1:.3}; y {y0:.3} .. {y1:.3}</text>"#,
        HEIGHT - 30.0
    );
    frame(title, &body, x_label, y_label)
}

/// Heatmap of `values[i][j]` with `i` along the horizontal axis.
pub fn heatmap(title: &str, x_label: &str, y_label: &str, values: &[Vec<f64>]) -> String {
    let nx = values.len().max(1);
    let ny = values.first().map_or(1, Vec::len).max(1);
    let vmax = values.iter().flatten().copied().filter(|v| v.is_finite()).fold(0.0, f64::max);
    let cw = (WIDTH - 2.0 * MARGIN) / nx as f64;
    let ch = (HEIGHT - 2.0 * MARGIN) / ny as f64;
    let mut body = String::new();
    for (i, column) in values.iter().enumerate() {
        for (j, &v) in column.iter().enumerate() {
            let level = if v.is_finite() && v >= 0.0 && vmax > 0.0 {
                (60.0 + 195.0 * (v / vmax).min(1.0)).round() as u8
            } else {
                0
            };
            let _ = writeln!(
                body,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({level},{level},{level})"/>"#,
                MARGIN + i as f64 * cw,
                HEIGHT - MARGIN - (j as f64 + 1.0) * ch,
                cw + 0.05,
                ch + 0.05
            );
        }
    }
    frame(title, &body, x_label, y_label)
}
