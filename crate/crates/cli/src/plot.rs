//! Minimal static SVG plots: scatter, polylines, axes with tick labels.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 56.0;

enum Element {
    Polyline { points: Vec<(f64, f64)>, color: String },
    Scatter { points: Vec<(f64, f64)>, color: String },
}

pub struct SvgPlot {
    title: String,
    x_label: String,
    y_label: String,
    x_range: (f64, f64),
    y_range: (f64, f64),
    elements: Vec<Element>,
}

impl SvgPlot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        SvgPlot {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            x_range: (f64::INFINITY, f64::NEG_INFINITY),
            y_range: (f64::INFINITY, f64::NEG_INFINITY),
            elements: Vec::new(),
        }
    }

    fn grow_range(&mut self, points: &[(f64, f64)]) {
        for &(x, y) in points {
            self.x_range.0 = self.x_range.0.min(x);
            self.x_range.1 = self.x_range.1.max(x);
            self.y_range.0 = self.y_range.0.min(y);
            self.y_range.1 = self.y_range.1.max(y);
        }
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], color: &str) {
        self.grow_range(points);
        self.elements.push(Element::Polyline {
            points: points.to_vec(),
            color: color.to_string(),
        });
    }

    pub fn scatter(&mut self, points: &[(f64, f64)], color: &str) {
        self.grow_range(points);
        self.elements.push(Element::Scatter {
            points: points.to_vec(),
            color: color.to_string(),
        });
    }

    pub fn write(self, path: &std::path::Path) -> std::io::Result<()> {
        std::fs::write(path, self.render())
    }

    fn render(self) -> String {
        let (x0, x1) = pad_range(self.x_range);
        let (y0, y1) = pad_range(self.y_range);
        let sx = (WIDTH - 2.0 * MARGIN) / (x1 - x0);
        let sy = (HEIGHT - 2.0 * MARGIN) / (y1 - y0);
        let to_px =
            |x: f64, y: f64| (MARGIN + (x - x0) * sx, HEIGHT - MARGIN - (y - y0) * sy);

        let mut body = String::new();
        for element in &self.elements {
            match element {
                Element::Polyline { points, color } => {
                    let pts: Vec<String> = points
                        .iter()
                        .map(|&(x, y)| {
                            let (px, py) = to_px(x, y);
                            format!("{px:.2},{py:.2}")
                        })
                        .collect();
                    let _ = writeln!(
                        body,
                        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" \
                         points=\"{}\"/>",
                        pts.join(" ")
                    );
                }
                Element::Scatter { points, color } => {
                    let _ = write!(body, "<g fill=\"{color}\">");
                    for &(x, y) in points {
                        let (px, py) = to_px(x, y);
                        let _ = write!(body, "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"2\"/>");
                    }
                    let _ = writeln!(body, "</g>");
                }
            }
        }

        let mut ticks = String::new();
        for i in 0..=4 {
            let fx = x0 + (x1 - x0) * i as f64 / 4.0;
            let (px, _) = to_px(fx, y0);
            let _ = write!(
                ticks,
                "<line x1=\"{px:.1}\" y1=\"{0}\" x2=\"{px:.1}\" y2=\"{1}\" stroke=\"#999\"/>\
                 <text x=\"{px:.1}\" y=\"{2}\" text-anchor=\"middle\" font-size=\"11\">{fx:.3}</text>",
                HEIGHT - MARGIN,
                HEIGHT - MARGIN + 5.0,
                HEIGHT - MARGIN + 18.0
            );
            let fy = y0 + (y1 - y0) * i as f64 / 4.0;
            let (_, py) = to_px(x0, fy);
            let _ = write!(
                ticks,
                "<line x1=\"{0}\" y1=\"{py:.1}\" x2=\"{1}\" y2=\"{py:.1}\" stroke=\"#999\"/>\
                 <text x=\"{2}\" y=\"{3:.1}\" text-anchor=\"end\" font-size=\"11\">{fy:.3}</text>",
                MARGIN - 5.0,
                MARGIN,
                MARGIN - 8.0,
                py + 4.0
            );
        }

        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
             <text x=\"{tx}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{title}</text>\n\
             <rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{w}\" height=\"{h}\" fill=\"none\" stroke=\"#333\"/>\n\
             {ticks}\n\
             <text x=\"{tx}\" y=\"{xl_y}\" text-anchor=\"middle\" font-size=\"12\">{x_label}</text>\n\
             <text x=\"16\" y=\"{ty}\" text-anchor=\"middle\" font-size=\"12\" \
             transform=\"rotate(-90 16 {ty})\">{y_label}</text>\n\
             {body}</svg>\n",
            tx = WIDTH / 2.0,
            title = xml_escape(&self.title),
            w = WIDTH - 2.0 * MARGIN,
            h = HEIGHT - 2.0 * MARGIN,
            xl_y = HEIGHT - 12.0,
            x_label = xml_escape(&self.x_label),
            ty = HEIGHT / 2.0,
            y_label = xml_escape(&self.y_label),
        )
    }
}

fn pad_range(r: (f64, f64)) -> (f64, f64) {
    let (mut lo, mut hi) = r;
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
