//! Self-contained SVG difference plot: mean performance difference on Y,
//! attention radius on X, a dashed line marking zero. No rendering
//! dependency, byte-stable output.

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 56.0;

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

/// Renders the difference series as a standalone SVG document.
pub fn difference_plot(series: &[(f64, f64)], title: &str) -> String {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let x_max = series
        .iter()
        .map(|&(r, _)| r)
        .fold(16.0f64, f64::max)
        .max(1.0);
    let y_abs = series
        .iter()
        .map(|&(_, d)| d.abs())
        .fold(0.0f64, f64::max)
        .max(1.0)
        * 1.15;

    let x_of = |r: f64| MARGIN_LEFT + r / x_max * plot_w;
    let y_of = |d: f64| MARGIN_TOP + (y_abs - d) / (2.0 * y_abs) * plot_h;
    let zero_y = y_of(0.0);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
        fmt(WIDTH / 2.0),
        title
    ));

    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP),
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP + plot_h)
    ));
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP + plot_h),
        fmt(MARGIN_LEFT + plot_w),
        fmt(MARGIN_TOP + plot_h)
    ));

    // Dashed zero line.
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(zero_y),
        fmt(MARGIN_LEFT + plot_w),
        fmt(zero_y)
    ));

    // Y ticks at five even positions.
    for i in 0..=4 {
        let d = -y_abs + f64::from(i) * (2.0 * y_abs / 4.0);
        let y = y_of(d);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            fmt(MARGIN_LEFT - 5.0),
            fmt(y),
            fmt(MARGIN_LEFT),
            fmt(y)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            fmt(MARGIN_LEFT - 8.0),
            fmt(y + 4.0),
            fmt(d)
        ));
    }

    // X ticks at the swept radii.
    for &(r, _) in series {
        let x = x_of(r);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            fmt(x),
            fmt(MARGIN_TOP + plot_h),
            fmt(x),
            fmt(MARGIN_TOP + plot_h + 5.0)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            fmt(x),
            fmt(MARGIN_TOP + plot_h + 18.0),
            r
        ));
    }

    // Axis labels.
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">attention radius</text>\n",
        fmt(MARGIN_LEFT + plot_w / 2.0),
        fmt(HEIGHT - 14.0)
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">mean performance difference</text>\n",
        fmt(MARGIN_TOP + plot_h / 2.0),
        fmt(MARGIN_TOP + plot_h / 2.0)
    ));

    // The series itself.
    if series.len() > 1 {
        let points: Vec<String> = series
            .iter()
            .map(|&(r, d)| format!("{},{}", fmt(x_of(r)), fmt(y_of(d))))
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n",
            points.join(" ")
        ));
    }
    for &(r, d) in series {
        svg.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"steelblue\"/>\n",
            fmt(x_of(r)),
            fmt(y_of(d))
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_differences_sit_on_the_dashed_zero_line() {
        let series = vec![(1.0, 0.0), (4.0, 0.0), (16.0, 0.0)];
        let svg = difference_plot(&series, "test");
        let zero_y = {
            let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
            fmt(MARGIN_TOP + plot_h / 2.0)
        };
        assert!(svg.contains("stroke-dasharray=\"6,4\""));
        for _ in 0..3 {
            assert!(svg.contains(&format!("cy=\"{zero_y}\"")));
        }
        assert_eq!(svg.matches("<circle").count(), 3);
    }

    #[test]
    fn plot_is_deterministic() {
        let series = vec![(1.0, -3.7), (8.0, 12.25), (16.0, 40.0)];
        assert_eq!(difference_plot(&series, "t"), difference_plot(&series, "t"));
    }

    #[test]
    fn plot_names_every_radius() {
        let series = vec![(1.0, 1.0), (2.5, -1.0), (11.0, 2.0)];
        let svg = difference_plot(&series, "t");
        for label in [">1<", ">2.5<", ">11<"] {
            assert!(svg.contains(label), "missing tick label {label}");
        }
    }
}
