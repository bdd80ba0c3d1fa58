//! Ternary plot support: the affine embedding of 3-part compositions into
//! the equilateral triangle with vertices (0,0), (1,0), (1/2, √3/2), and a
//! self-contained SVG rendering.

use crate::error::{Error, Result};

pub const TRIANGLE_HEIGHT: f64 = 0.8660254037844386; // √3/2

/// Planar coordinates of a composition: x = y₂ + y₃/2, y = (√3/2)·y₃.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TernaryPoint {
    pub x: f64,
    pub y: f64,
}

impl TernaryPoint {
    /// Maps a 3-part composition. The closed simplex is accepted here
    /// (plotting has no log terms), so vertices like (1,0,0) are fine.
    pub fn from_composition(y: &[f64]) -> Result<Self> {
        if y.len() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: y.len(),
            });
        }
        for (j, &v) in y.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidEntry {
                    row: 0,
                    col: j,
                    value: v,
                    reason: "must be a nonnegative proportion".into(),
                });
            }
        }
        let sum: f64 = y.iter().sum();
        if (sum - 1.0).abs() > 1e-8 {
            return Err(Error::RowSum {
                row: 0,
                sum,
                tol: 1e-8,
            });
        }
        Ok(Self {
            x: y[1] + 0.5 * y[2],
            y: TRIANGLE_HEIGHT * y[2],
        })
    }
}

/// Self-contained SVG: reference triangle, axis labels, one marker per row.
pub fn ternary_svg(rows: &[Vec<f64>], labels: &[String; 3]) -> Result<String> {
    let points: Vec<TernaryPoint> = rows
        .iter()
        .map(|r| TernaryPoint::from_composition(r))
        .collect::<Result<_>>()?;

    // plot window: unit triangle scaled into a 640x600 canvas with margins
    let scale = 520.0;
    let ox = 60.0;
    let oy = 540.0;
    let px = |p: &TernaryPoint| (ox + scale * p.x, oy - scale * p.y);

    let v1 = px(&TernaryPoint { x: 0.0, y: 0.0 });
    let v2 = px(&TernaryPoint { x: 1.0, y: 0.0 });
    let v3 = px(&TernaryPoint {
        x: 0.5,
        y: TRIANGLE_HEIGHT,
    });

    let mut svg = String::new();
    svg.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"600\" viewBox=\"0 0 640 600\">\n",
    );
    svg.push_str("<rect width=\"640\" height=\"600\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<polygon points=\"{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
        v1.0, v1.1, v2.0, v2.1, v3.0, v3.1
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n",
        v1.0 - 8.0,
        v1.1 + 16.0,
        xml_escape(&labels[0])
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"start\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n",
        v2.0 + 8.0,
        v2.1 + 16.0,
        xml_escape(&labels[1])
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n",
        v3.0,
        v3.1 - 10.0,
        xml_escape(&labels[2])
    ));
    for p in &points {
        let (cx, cy) = px(p);
        svg.push_str(&format!(
            "<circle cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"4\" fill=\"steelblue\" fill-opacity=\"0.8\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
