//! SVG rendering of real plane configurations: the base conic, tangent
//! lines, lateral vertices and the implicit curve (marching squares on a
//! 512x512 cell grid over the auto-fitted viewport).

use crate::lateral::TernaryForm;

/// Marching-squares cells per axis.
pub const GRID: usize = 512;
/// Conic polyline sample count.
pub const CONIC_SAMPLES: usize = 320;
const CANVAS: f64 = 800.0;

#[derive(Debug, Clone, Copy)]
struct Viewport {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    scale: f64,
    off_x: f64,
    off_y: f64,
}

impl Viewport {
    /// Fits the feature bounding box with a 10% margin on every side,
    /// preserving aspect ratio on the fixed square canvas.
    fn fit(points: &[(f64, f64)]) -> Viewport {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for &(x, y) in points {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        if points.is_empty() || !(x1 - x0).is_finite() {
            (x0, y0, x1, y1) = (-3.0, -3.0, 3.0, 3.0);
        }
        let (w, h) = (x1 - x0, y1 - y0);
        let pad_x = 0.1 * if w > 1e-9 { w } else { 1.0 };
        let pad_y = 0.1 * if h > 1e-9 { h } else { 1.0 };
        x0 -= pad_x;
        x1 += pad_x;
        y0 -= pad_y;
        y1 += pad_y;
        let scale = (CANVAS / (x1 - x0)).min(CANVAS / (y1 - y0));
        let off_x = (CANVAS - scale * (x1 - x0)) / 2.0;
        let off_y = (CANVAS - scale * (y1 - y0)) / 2.0;
        Viewport {
            x0,
            y0,
            x1,
            y1,
            scale,
            off_x,
            off_y,
        }
    }

    fn px(&self, x: f64) -> f64 {
        self.off_x + (x - self.x0) * self.scale
    }

    /// Screen y grows downward.
    fn py(&self, y: f64) -> f64 {
        CANVAS - (self.off_y + (y - self.y0) * self.scale)
    }
}

fn fmt(v: f64) -> String {
    format!("{:.2}", v)
}

/// Renders the scene. `laterals` holds parameter lists; the first is drawn
/// solid (the seed lateral), any further ones dashed (traced laterals).
/// Output is a pure function of the inputs, byte for byte.
pub fn render_scene(curve: &TernaryForm, laterals: &[Vec<f64>]) -> String {
    let mut features: Vec<(f64, f64)> = Vec::new();
    for params in laterals {
        for &u in params {
            features.push((2.0 * u, u * u));
        }
        for (i, &u) in params.iter().enumerate() {
            for &v in params.iter().skip(i + 1) {
                features.push((u + v, u * v));
            }
        }
    }
    let vp = Viewport::fit(&features);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{c}\" height=\"{c}\" viewBox=\"0 0 {c} {c}\">\n",
        c = CANVAS
    ));
    s.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{c}\" height=\"{c}\" fill=\"white\"/>\n",
        c = CANVAS
    ));
    s.push_str("<clipPath id=\"frame\">");
    s.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{c}\" height=\"{c}\"/>",
        c = CANVAS
    ));
    s.push_str("</clipPath>\n<g clip-path=\"url(#frame)\">\n");

    // implicit curve via marching squares
    let path = marching_squares_path(curve, &vp);
    s.push_str(&format!(
        "<path d=\"{path}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.6\"/>\n"
    ));

    // base conic: the parabola x2 = x1^2 / 4 in this chart
    let mut pts = String::new();
    for i in 0..CONIC_SAMPLES {
        let u = vp.x0 / 2.0 + (vp.x1 - vp.x0) / 2.0 * i as f64 / (CONIC_SAMPLES - 1) as f64;
        let (x, y) = (2.0 * u, u * u);
        if !pts.is_empty() {
            pts.push(' ');
        }
        pts.push_str(&format!("{},{}", fmt(vp.px(x)), fmt(vp.py(y))));
    }
    s.push_str(&format!(
        "<polyline points=\"{pts}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.2\"/>\n"
    ));

    // tangent lines y = u x - u^2, vertices at pair points
    for (which, params) in laterals.iter().enumerate() {
        let (color, dash) = if which == 0 {
            ("#2ca02c", "")
        } else {
            ("#ff7f0e", " stroke-dasharray=\"6,4\"")
        };
        for &u in params {
            let ya = u * vp.x0 - u * u;
            let yb = u * vp.x1 - u * u;
            s.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"1.0\"{dash}/>\n",
                fmt(vp.px(vp.x0)),
                fmt(vp.py(ya)),
                fmt(vp.px(vp.x1)),
                fmt(vp.py(yb)),
            ));
        }
        for (i, &u) in params.iter().enumerate() {
            for &v in params.iter().skip(i + 1) {
                s.push_str(&format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#d62728\"/>\n",
                    fmt(vp.px(u + v)),
                    fmt(vp.py(u * v)),
                ));
            }
        }
    }
    s.push_str("</g>\n");

    // legend
    s.push_str("<g font-family=\"monospace\" font-size=\"14\">\n");
    let legend = [
        ("black", "curve"),
        ("#1f77b4", "base conic"),
        ("#2ca02c", "tangent lines"),
        ("#ff7f0e", "traced laterals"),
        ("#d62728", "vertices"),
    ];
    for (row, (color, label)) in legend.iter().enumerate() {
        let y = 24.0 + 20.0 * row as f64;
        s.push_str(&format!(
            "<line x1=\"16\" y1=\"{y}\" x2=\"44\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"3\"/>\n"
        ));
        s.push_str(&format!(
            "<text x=\"52\" y=\"{}\" fill=\"black\">{label}</text>\n",
            y + 5.0
        ));
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// One path with a move-to/line-to pair per zero-crossing segment, cells in
/// row-major order. Ambiguous saddle cells are split by the center value.
fn marching_squares_path(curve: &TernaryForm, vp: &Viewport) -> String {
    let value = |x: f64, y: f64| -> f64 {
        curve
            .eval(&[
                crate::scalar::Scalar::ONE,
                crate::scalar::Scalar::new(x, 0.0),
                crate::scalar::Scalar::new(y, 0.0),
            ])
            .re
    };
    let nx = GRID + 1;
    let dx = (vp.x1 - vp.x0) / GRID as f64;
    let dy = (vp.y1 - vp.y0) / GRID as f64;
    let mut grid = vec![0.0f64; nx * nx];
    for iy in 0..nx {
        let y = vp.y0 + dy * iy as f64;
        for ix in 0..nx {
            let x = vp.x0 + dx * ix as f64;
            grid[iy * nx + ix] = value(x, y);
        }
    }
    let mut path = String::new();
    let mut emit = |x1: f64, y1: f64, x2: f64, y2: f64| {
        path.push_str(&format!(
            "M{} {} L{} {} ",
            fmt(vp.px(x1)),
            fmt(vp.py(y1)),
            fmt(vp.px(x2)),
            fmt(vp.py(y2)),
        ));
    };
    // linear interpolation of the zero along an edge
    let lerp = |a: f64, b: f64| -> f64 {
        if (a - b).abs() < 1e-300 {
            0.5
        } else {
            a / (a - b)
        }
    };
    for iy in 0..GRID {
        let y = vp.y0 + dy * iy as f64;
        for ix in 0..GRID {
            let x = vp.x0 + dx * ix as f64;
            let v00 = grid[iy * nx + ix];
            let v10 = grid[iy * nx + ix + 1];
            let v01 = grid[(iy + 1) * nx + ix];
            let v11 = grid[(iy + 1) * nx + ix + 1];
            let mut case = 0u8;
            if v00 > 0.0 {
                case |= 1;
            }
            if v10 > 0.0 {
                case |= 2;
            }
            if v11 > 0.0 {
                case |= 4;
            }
            if v01 > 0.0 {
                case |= 8;
            }
            if case == 0 || case == 15 {
                continue;
            }
            // edge crossing points: bottom, right, top, left
            let bottom = (x + dx * lerp(v00, v10), y);
            let right = (x + dx, y + dy * lerp(v10, v11));
            let top = (x + dx * lerp(v01, v11), y + dy);
            let left = (x, y + dy * lerp(v00, v01));
            match case {
                1 | 14 => emit(left.0, left.1, bottom.0, bottom.1),
                2 | 13 => emit(bottom.0, bottom.1, right.0, right.1),
                3 | 12 => emit(left.0, left.1, right.0, right.1),
                4 | 11 => emit(right.0, right.1, top.0, top.1),
                6 | 9 => emit(bottom.0, bottom.1, top.0, top.1),
                7 | 8 => emit(left.0, left.1, top.0, top.1),
                5 | 10 => {
                    let center = (v00 + v10 + v01 + v11) / 4.0;
                    let flip = (case == 5) == (center > 0.0);
                    if flip {
                        emit(left.0, left.1, bottom.0, bottom.1);
                        emit(right.0, right.1, top.0, top.1);
                    } else {
                        emit(left.0, left.1, top.0, top.1);
                        emit(bottom.0, bottom.1, right.0, right.1);
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    path.trim_end().to_string()
}
