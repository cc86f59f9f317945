//! Standalone SVG diagrams of Voronoi partitions.

use std::f64::consts::PI;
use std::fmt::Write;

use cvtq_core::disc::BoundaryElement;
use cvtq_core::geom::clip_all;
use cvtq_core::region::CellGeometry;
use cvtq_core::voronoi::{bisectors, voronoi_partition};
use cvtq_core::{ConvexPolygon, DiscreteUniform, Point, Quantizer, Region, Result, Shape};

const WIDTH: f64 = 480.0;
const MARGIN: f64 = 24.0;
const CROSS: f64 = 5.0;
const CURVE_SAMPLES: usize = 256;
const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

/// Maps model coordinates to the picture, with `x2` pointing up.
struct Frame {
    lo: Point,
    hi: Point,
    scale: f64,
}

impl Frame {
    fn new(lo: Point, hi: Point) -> Self {
        let span = (hi.x1 - lo.x1).max(hi.x2 - lo.x2).max(1e-9);
        Self { lo, hi, scale: (WIDTH - 2.0 * MARGIN) / span }
    }

    fn size(&self) -> (f64, f64) {
        (
            (self.hi.x1 - self.lo.x1) * self.scale + 2.0 * MARGIN,
            (self.hi.x2 - self.lo.x2) * self.scale + 2.0 * MARGIN,
        )
    }

    fn map(&self, p: Point) -> (f64, f64) {
        ((p.x1 - self.lo.x1) * self.scale + MARGIN, (self.hi.x2 - p.x2) * self.scale + MARGIN)
    }

    fn xy(&self, p: Point) -> String {
        let (x, y) = self.map(p);
        format!("{x:.3},{y:.3}")
    }
}

fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

fn header(out: &mut String, frame: &Frame) {
    let (w, h) = frame.size();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(
        out,
        "<style>.region{{fill:none;stroke:#222;stroke-width:1.5}}.cell{{fill-opacity:0.35;stroke:#333;stroke-width:0.8}}\
         .cross{{fill:none;stroke:#000;stroke-width:1.8}}.point{{stroke:#222;stroke-width:0.6}}</style>"
    );
}

fn polygon(out: &mut String, frame: &Frame, class: &str, fill: &str, pts: &[Point]) {
    let list: Vec<String> = pts.iter().map(|&p| frame.xy(p)).collect();
    let _ = writeln!(out, r#"<polygon class="{class}" fill="{fill}" points="{}"/>"#, list.join(" "));
}

fn cross(out: &mut String, frame: &Frame, c: Point) {
    let (x, y) = frame.map(c);
    let r = CROSS;
    let _ = writeln!(
        out,
        r#"<path class="cross" d="M{:.3},{:.3} L{:.3},{:.3} M{:.3},{:.3} L{:.3},{:.3}"/>"#,
        x - r,
        y - r,
        x + r,
        y + r,
        x - r,
        y + r,
        x + r,
        y - r
    );
}

/// Path data for a clipped disc: chords as lines, boundary arcs as SVG arcs.
fn disc_path(frame: &Frame, radius: f64, elements: &[BoundaryElement]) -> String {
    let r = radius * frame.scale;
    let mut d = String::new();
    for (k, el) in elements.iter().enumerate() {
        let start = match el {
            BoundaryElement::Line(a, _) => *a,
            BoundaryElement::Arc(a) => a.start,
        };
        if k == 0 {
            let _ = write!(d, "M{} ", frame.xy(start));
        }
        match el {
            BoundaryElement::Line(_, b) => {
                let _ = write!(d, "L{} ", frame.xy(*b));
            }
            BoundaryElement::Arc(a) => {
                // Counterclockwise in the model is counterclockwise on screen,
                // which is sweep flag 0 once the y axis points down.
                let center = a.start - Point::new(a.start_angle.cos(), a.start_angle.sin()) * radius;
                let mut rest = a.sweep;
                let mut angle = a.start_angle;
                while rest > 1e-12 {
                    let step = rest.min(PI);
                    angle += step;
                    rest -= step;
                    let end = center + Point::new(angle.cos(), angle.sin()) * radius;
                    let _ = write!(d, "A{r:.3},{r:.3} 0 0 0 {} ", frame.xy(end));
                }
            }
        }
    }
    d.push('Z');
    d
}

/// Polygonal outline of a region, used for curved outlines and their cells.
fn outline(region: &Region) -> Vec<Point> {
    match &region.shape {
        Shape::Polygon(p) => p.vertices().to_vec(),
        Shape::Disc(d) => (0..CURVE_SAMPLES)
            .map(|k| d.center + Point::new(1.0, 0.0).rotate(2.0 * PI * k as f64 / CURVE_SAMPLES as f64) * d.radius)
            .collect(),
        Shape::CurveBounded(c) => {
            let xs: Vec<f64> =
                (0..=CURVE_SAMPLES).map(|k| c.a + (c.b - c.a) * k as f64 / CURVE_SAMPLES as f64).collect();
            let mut ring: Vec<Point> = xs.iter().map(|&x| Point::new(x, (c.lower)(x))).collect();
            ring.extend(xs.iter().rev().map(|&x| Point::new(x, (c.upper)(x))));
            ring.dedup_by(|a, b| (*a - *b).norm() < 1e-12);
            ring
        }
    }
}

/// Diagram of the Voronoi partition of `region` by `q`.
pub fn render_region(region: &Region, q: &Quantizer) -> Result<String> {
    let ring = outline(region);
    let mut lo = region.bounding_box().0;
    let mut hi = region.bounding_box().1;
    for c in q.centers() {
        lo = Point::new(lo.x1.min(c.x1), lo.x2.min(c.x2));
        hi = Point::new(hi.x1.max(c.x1), hi.x2.max(c.x2));
    }
    let frame = Frame::new(lo, hi);
    let mut out = String::new();
    header(&mut out, &frame);
    let cells = voronoi_partition(region, q)?;
    let curved = ConvexPolygon::new(ring.clone()).ok();
    for (i, cell) in cells.iter().enumerate() {
        match &cell.geometry {
            Some(CellGeometry::Polygon(p)) => polygon(&mut out, &frame, "cell", color(i), p.vertices()),
            Some(CellGeometry::ClippedDisc(piece)) => {
                let d = disc_path(&frame, piece.disc.radius, piece.boundary());
                let _ = writeln!(out, r#"<path class="cell" fill="{}" d="{d}"/>"#, color(i));
            }
            Some(CellGeometry::ClippedCurves(_)) => {
                let approx = curved.as_ref().and_then(|p| clip_all(p, &bisectors(q, i).ok()?));
                if let Some(p) = approx {
                    let pts: Vec<String> = p.vertices().iter().map(|&v| frame.xy(v)).collect();
                    let _ = writeln!(out, r#"<path class="cell" fill="{}" d="M{} Z"/>"#, color(i), pts.join(" L"));
                }
            }
            None => {}
        }
    }
    match &region.shape {
        Shape::Disc(d) => {
            let (x, y) = frame.map(d.center);
            let _ = writeln!(
                out,
                r#"<circle class="region" cx="{x:.3}" cy="{y:.3}" r="{:.3}"/>"#,
                d.radius * frame.scale
            );
        }
        _ => {
            let pts: Vec<String> = ring.iter().map(|&v| frame.xy(v)).collect();
            let _ = writeln!(out, r#"<path class="region" d="M{} Z"/>"#, pts.join(" L"));
        }
    }
    for &c in q.centers() {
        cross(&mut out, &frame, c);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Diagram of a point set colored by nearest center, with cells clipped to
/// a padded bounding box.
pub fn render_points(dist: &DiscreteUniform, q: &Quantizer) -> Result<String> {
    let all: Vec<Point> = dist.points().iter().chain(q.centers()).copied().collect();
    let mut lo = all[0];
    let mut hi = all[0];
    for p in &all {
        lo = Point::new(lo.x1.min(p.x1), lo.x2.min(p.x2));
        hi = Point::new(hi.x1.max(p.x1), hi.x2.max(p.x2));
    }
    let pad = 0.1 * (hi.x1 - lo.x1).max(hi.x2 - lo.x2).max(1.0);
    lo = lo - Point::new(pad, pad);
    hi += Point::new(pad, pad);
    let frame = Frame::new(lo, hi);
    let mut out = String::new();
    header(&mut out, &frame);
    let bounds = ConvexPolygon::new(vec![lo, Point::new(hi.x1, lo.x2), hi, Point::new(lo.x1, hi.x2)])?;
    for i in 0..q.len() {
        if let Some(cell) = clip_all(&bounds, &bisectors(q, i)?) {
            polygon(&mut out, &frame, "cell", color(i), cell.vertices());
        }
    }
    for (p, c) in dist.points().iter().zip(dist.assign(q)) {
        let (x, y) = frame.map(*p);
        let _ = writeln!(out, r#"<circle class="point" cx="{x:.3}" cy="{y:.3}" r="4" fill="{}"/>"#, color(c));
    }
    for &c in q.centers() {
        cross(&mut out, &frame, c);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cvtq_core::{dquant, region};

    fn q(pts: &[(f64, f64)]) -> Quantizer {
        Quantizer::new(pts.iter().map(|&(a, b)| Point::new(a, b)).collect()).unwrap()
    }

    #[test]
    fn rhombus_pair() {
        let r = region::preset("prop4-rhombus").unwrap();
        let svg = render_region(&r, &q(&[(0.5, 0.2), (1.2, 0.5)])).unwrap();
        assert_eq!(svg.matches(r#"<polygon class="cell""#).count(), 2);
        assert_eq!(svg.matches(r#"class="cross""#).count(), 2);
    }

    #[test]
    fn disc_halves_use_arcs() {
        let r = region::preset("prop2-disc").unwrap();
        let svg = render_region(&r, &q(&[(-0.42, 0.0), (0.42, 0.0)])).unwrap();
        let cells: Vec<&str> = svg.lines().filter(|l| l.starts_with(r#"<path class="cell""#)).collect();
        assert_eq!(cells.len(), 2);
        assert!(cells.iter().all(|l| l.contains(" A")));
    }

    #[test]
    fn grid_points() {
        let g = dquant::preset("grid4").unwrap();
        let a5 = q(&[(3.5, 3.5), (1.5, 1.5), (1.5, 4.0), (3.5, 1.5), (1.5, 3.0)]);
        let svg = render_points(&g, &a5).unwrap();
        assert_eq!(svg.matches(r#"class="point""#).count(), 16);
        assert_eq!(svg.matches(r#"class="cross""#).count(), 5);
    }
}
