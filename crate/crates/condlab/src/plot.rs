//! Minimal SVG line plots of table columns.

use std::fmt::Write as _;

use crate::output::Table;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// One polyline per `y` column against column `x`; non-finite points are dropped.
pub fn svg_polylines(table: &Table, x: usize, ys: &[usize]) -> String {
    let xs = table.numeric_column(x);
    let series: Vec<Vec<(f64, f64)>> = ys
        .iter()
        .map(|&j| {
            xs.iter()
                .zip(table.numeric_column(j))
                .filter(|(a, b)| a.is_finite() && b.is_finite())
                .map(|(a, b)| (*a, b))
                .collect()
        })
        .collect();
    let all = series.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(a, b) in all {
        x0 = x0.min(a);
        x1 = x1.max(a);
        y0 = y0.min(b);
        y1 = y1.max(b);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let px = |a: f64| MARGIN + (a - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |b: f64| HEIGHT - MARGIN - (b - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<path d="M{m} {t} V{b} H{r}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0,
        table.columns[x]
    );
    let _ =
        writeln!(svg, r#"<text x="{}" y="{}" text-anchor="start">{:.3}</text>"#, MARGIN, HEIGHT - MARGIN + 15.0, x0);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#,
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 15.0,
        x1
    );
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#, MARGIN - 4.0, HEIGHT - MARGIN, y0);
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#, MARGIN - 4.0, MARGIN + 4.0, y1);
    for (k, (pts, &j)) in series.iter().zip(ys).enumerate() {
        let color = COLORS[k % COLORS.len()];
        let coords: Vec<String> = pts.iter().map(|&(a, b)| format!("{:.2},{:.2}", px(a), py(b))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            coords.join(" ")
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            WIDTH - MARGIN - 120.0,
            MARGIN + 16.0 * k as f64,
            table.columns[j]
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_polyline_per_series() {
        let mut t = Table::new(&["x", "a", "b"]);
        for i in 0..5 {
            t.push(vec![(i as f64).into(), (i as f64 * 2.0).into(), f64::NAN.into()]);
        }
        let svg = svg_polylines(&t, 0, &[1, 2]);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.starts_with("<svg"));
    }
}
