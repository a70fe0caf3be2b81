//! Minimal standalone SVG log-log chart. No external assets, deterministic
//! bytes for identical input.

use oscillab_core::Result;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 20.0;
const MARGIN_B: f64 = 50.0;
const FLOOR: f64 = 1e-16;

/// Writes a log-log line chart of `|value|` against `N`.
pub fn emit_plot(points: &[(usize, f64)], title: &str, path: &str) -> Result<()> {
    assert!(!points.is_empty(), "plot needs at least one point");
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).log10()).collect();
    let ys: Vec<f64> = points
        .iter()
        .map(|&(_, v)| v.max(FLOOR).log10())
        .collect();
    let (x_lo, x_hi) = padded_range(&xs);
    let (y_lo, y_hi) = padded_range(&ys);

    let to_px = |x: f64, y: f64| -> (f64, f64) {
        let px = MARGIN_L + (x - x_lo) / (x_hi - x_lo) * (WIDTH - MARGIN_L - MARGIN_R);
        let py = HEIGHT - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - MARGIN_T - MARGIN_B);
        (px, py)
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"14\" font-family=\"monospace\" font-size=\"12\">{}</text>\n",
        MARGIN_L,
        xml_escape(title)
    ));

    // axes
    svg.push_str(&format!(
        "<line x1=\"{l:.2}\" y1=\"{b:.2}\" x2=\"{r:.2}\" y2=\"{b:.2}\" stroke=\"black\"/>\n\
         <line x1=\"{l:.2}\" y1=\"{t:.2}\" x2=\"{l:.2}\" y2=\"{b:.2}\" stroke=\"black\"/>\n",
        l = MARGIN_L,
        r = WIDTH - MARGIN_R,
        t = MARGIN_T,
        b = HEIGHT - MARGIN_B,
    ));

    // decade ticks
    for dx in (x_lo.floor() as i64)..=(x_hi.ceil() as i64) {
        let x = dx as f64;
        if x < x_lo || x > x_hi {
            continue;
        }
        let (px, _) = to_px(x, y_lo);
        svg.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{b:.2}\" x2=\"{px:.2}\" y2=\"{b2:.2}\" stroke=\"black\"/>\n\
             <text x=\"{px:.2}\" y=\"{ty:.2}\" font-family=\"monospace\" font-size=\"11\" \
             text-anchor=\"middle\">1e{dx}</text>\n",
            b = HEIGHT - MARGIN_B,
            b2 = HEIGHT - MARGIN_B + 6.0,
            ty = HEIGHT - MARGIN_B + 22.0,
        ));
    }
    for dy in (y_lo.floor() as i64)..=(y_hi.ceil() as i64) {
        let y = dy as f64;
        if y < y_lo || y > y_hi {
            continue;
        }
        let (_, py) = to_px(x_lo, y);
        svg.push_str(&format!(
            "<line x1=\"{l1:.2}\" y1=\"{py:.2}\" x2=\"{l:.2}\" y2=\"{py:.2}\" stroke=\"black\"/>\n\
             <text x=\"{tx:.2}\" y=\"{typ:.2}\" font-family=\"monospace\" font-size=\"11\" \
             text-anchor=\"end\">1e{dy}</text>\n",
            l1 = MARGIN_L - 6.0,
            l = MARGIN_L,
            tx = MARGIN_L - 10.0,
            typ = py + 4.0,
        ));
    }

    // polyline through the data
    if points.len() > 1 {
        let path_points: Vec<String> = xs
            .iter()
            .zip(&ys)
            .map(|(&x, &y)| {
                let (px, py) = to_px(x, y);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n",
            path_points.join(" ")
        ));
    }
    for (&x, &y) in xs.iter().zip(&ys) {
        let (px, py) = to_px(x, y);
        svg.push_str(&format!(
            "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"3\" fill=\"steelblue\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)?;
    Ok(())
}

fn padded_range(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if (hi - lo).abs() < 1e-9 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_bytes_are_deterministic() {
        let dir = std::env::temp_dir().join("oscillab-plot-test");
        std::fs::create_dir_all(&dir).unwrap();
        let points = vec![(1000usize, 0.1), (10_000, 0.03), (100_000, 0.011)];
        let a = dir.join("a.svg");
        let b = dir.join("b.svg");
        emit_plot(&points, "decay", a.to_str().unwrap()).unwrap();
        emit_plot(&points, "decay", b.to_str().unwrap()).unwrap();
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    }

    #[test]
    fn single_point_plot() {
        let dir = std::env::temp_dir().join("oscillab-plot-test");
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("single.svg");
        emit_plot(&[(100, 1.0)], "flat", p.to_str().unwrap()).unwrap();
        let body = std::fs::read_to_string(p).unwrap();
        assert!(body.contains("<circle"));
        assert!(!body.contains("polyline"));
    }
}
