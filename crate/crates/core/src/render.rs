//! SVG drawing of a partition rotated 45 degrees, with its level-line
//! contours and diagonal sums.
//!
//! Layout coordinates have `y` pointing up: lattice vertex `(R, J)`
//! (`0 <= R <= a`, `0 <= J <= b`) sits at `x = (J - R) s`,
//! `y = (J + R + 1) s / 2`, which puts the centre of cell `(r, j)` at
//! `((j - r) s, (j + r) s / 2)`. The corner at cell `(1, 1)` is the bottom
//! of the picture, and diagonal `i` is the vertical line `x = i s`.
//! The SVG flips `y` when writing coordinates.

use std::fmt::Write;

use crate::partition::{ContourSet, PlanePartition};

#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    pub cell_size: f64,
    pub show_numbers: bool,
    pub show_contours: bool,
    pub show_sums: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            cell_size: 24.0,
            show_numbers: true,
            show_contours: true,
            show_sums: true,
        }
    }
}

/// Level-`k` contour for `k = 1..=c`, one vertex per diagonal line
/// `i = -a ..= b`, as lattice vertices `(R, J)`.
///
/// The level set `{z >= k}` is an order ideal; its boundary crosses diagonal
/// line `i` at the vertex `R = h[k][i] + max(0, -i)`, `J = R + i`.
pub fn contour_vertices(contours: &ContourSet) -> Vec<Vec<(usize, usize)>> {
    let dims = contours.dims();
    (1..=contours.levels())
        .map(|k| {
            dims.diagonals()
                .map(|i| {
                    let r = contours.get(k, i) as i64 + (-i).max(0);
                    (r as usize, (r + i) as usize)
                })
                .collect()
        })
        .collect()
}

/// Layout position (y up) of lattice vertex `(R, J)`.
pub fn vertex_position(vertex: (usize, usize), cell_size: f64) -> (f64, f64) {
    let (r, j) = (vertex.0 as f64, vertex.1 as f64);
    ((j - r) * cell_size, (j + r + 1.0) * cell_size / 2.0)
}

struct Frame {
    s: f64,
    a: f64,
    b: f64,
    margin: f64,
    band: f64,
}

impl Frame {
    fn width(&self) -> f64 {
        (self.a + self.b) * self.s + 2.0 * self.margin
    }

    fn height(&self) -> f64 {
        (self.a + self.b) * self.s / 2.0 + 2.0 * self.margin + self.band
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let top = (self.a + self.b + 1.0) * self.s / 2.0;
        (
            x + self.a * self.s + self.margin,
            self.band + self.margin + (top - y),
        )
    }

    fn vertex(&self, v: (usize, usize)) -> (f64, f64) {
        let (x, y) = vertex_position(v, self.s);
        self.map(x, y)
    }
}

fn points(frame: &Frame, vs: &[(usize, usize)]) -> String {
    vs.iter()
        .map(|&v| {
            let (x, y) = frame.vertex(v);
            format!("{x:.3},{y:.3}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Deterministic SVG 1.1 document. Numbers are printed with three decimals
/// and attributes in a fixed order, so equal inputs give equal bytes.
pub fn render_svg(p: &PlanePartition, options: &RenderOptions) -> String {
    let dims = p.dims();
    let s = options.cell_size;
    let frame = Frame {
        s,
        a: dims.a as f64,
        b: dims.b as f64,
        margin: s,
        band: if options.show_sums { s } else { 0.0 },
    };
    let font = s * 0.5;
    let mut out = String::new();
    let (w, h) = (frame.width(), frame.height());
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.3}\" height=\"{h:.3}\" viewBox=\"0 0 {w:.3} {h:.3}\">"
    )
    .unwrap();
    writeln!(
        out,
        "<title>{}x{}x{} boxed plane partition</title>",
        dims.a, dims.b, dims.c
    )
    .unwrap();

    out.push_str("<g class=\"cells\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1.000\">\n");
    for r in 1..=dims.a {
        for j in 1..=dims.b {
            let corners = [(r - 1, j - 1), (r - 1, j), (r, j), (r, j - 1)];
            writeln!(out, "<polygon points=\"{}\"/>", points(&frame, &corners)).unwrap();
        }
    }
    out.push_str("</g>\n");

    if options.show_numbers {
        writeln!(
            out,
            "<g class=\"numbers\" font-family=\"sans-serif\" font-size=\"{font:.3}\" text-anchor=\"middle\" dominant-baseline=\"central\">"
        )
        .unwrap();
        for r in 1..=dims.a {
            for j in 1..=dims.b {
                let (x, y) = frame.map((j as f64 - r as f64) * s, (j as f64 + r as f64) * s / 2.0);
                writeln!(
                    out,
                    "<text x=\"{x:.3}\" y=\"{y:.3}\">{}</text>",
                    p.get(r, j)
                )
                .unwrap();
            }
        }
        out.push_str("</g>\n");
    }

    if options.show_contours {
        out.push_str(
            "<g class=\"contours\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2.000\" stroke-linejoin=\"round\">\n",
        );
        for (k, path) in contour_vertices(&p.contour_heights()).iter().enumerate() {
            writeln!(
                out,
                "<polyline class=\"contour\" data-level=\"{}\" points=\"{}\"/>",
                k + 1,
                points(&frame, path)
            )
            .unwrap();
        }
        out.push_str("</g>\n");
    }

    if options.show_sums {
        writeln!(
            out,
            "<g class=\"sums\" font-family=\"sans-serif\" font-size=\"{font:.3}\" text-anchor=\"middle\">"
        )
        .unwrap();
        let sums = p.diagonal_sums();
        let y = frame.margin + frame.band * 0.5;
        for i in dims.interior() {
            let (x, _) = frame.map(i as f64 * s, 0.0);
            writeln!(
                out,
                "<text class=\"sum\" data-diagonal=\"{i}\" x=\"{x:.3}\" y=\"{y:.3}\">{}</text>",
                sums.get(i)
            )
            .unwrap();
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
