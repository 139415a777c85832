//! Lattice diagrams in dimension one and two: exact per-point
//! classification plus ASCII and SVG renderers.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{GkzError, Result};
use crate::matrix::IntMatrix;
use crate::polyhedral::{face_lattice, facet_normals, in_cone, to_rational, FaceLattice, Semigroup};
use crate::resonance::{dsres_face, ResonanceSet};
use crate::{Int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layer {
    Semigroup,
    SaturationGap,
    Cone,
    Qdeg(usize),
    Sres,
    Dsres,
    DeltaCone,
}

impl FromStr for Layer {
    type Err = GkzError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(j) = s.strip_prefix("qdeg") {
            let j = j.trim_matches(|c| c == ':' || c == '(' || c == ')' || c == '=');
            return j.parse().map(Layer::Qdeg).map_err(|_| GkzError::Parse(format!("bad qdeg layer {s:?}")));
        }
        match s {
            "semigroup" => Ok(Layer::Semigroup),
            "saturation-gap" | "gap" => Ok(Layer::SaturationGap),
            "cone" => Ok(Layer::Cone),
            "sres" => Ok(Layer::Sres),
            "dsres" => Ok(Layer::Dsres),
            "delta-cone" | "delta" => Ok(Layer::DeltaCone),
            _ => Err(GkzError::Parse(format!("unknown layer {s:?}"))),
        }
    }
}

impl Layer {
    fn glyph(self) -> char {
        match self {
            Layer::Semigroup => '*',
            Layer::SaturationGap => 'o',
            Layer::Cone => '+',
            Layer::Qdeg(_) => 'q',
            Layer::Sres => 'r',
            Layer::Dsres => 'x',
            Layer::DeltaCone => 'd',
        }
    }

    fn colour(self) -> &'static str {
        match self {
            Layer::Semigroup | Layer::SaturationGap => "black",
            Layer::Cone => "#4a90d9",
            Layer::Qdeg(_) => "#2e8b57",
            Layer::Sres => "#c0392b",
            Layer::Dsres => "#8e44ad",
            Layer::DeltaCone => "#e67e22",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagramFormat {
    Ascii,
    Svg,
}

impl FromStr for DiagramFormat {
    type Err = GkzError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascii" | "text" => Ok(DiagramFormat::Ascii),
            "svg" => Ok(DiagramFormat::Svg),
            _ => Err(GkzError::Parse(format!("unknown diagram format {s:?}"))),
        }
    }
}

/// An integer box `[x0, x1] × [y0, y1]`; the `y` range is ignored for
/// one-row matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramSpec {
    pub x: (i64, i64),
    pub y: (i64, i64),
    pub layers: Vec<Layer>,
    pub format: DiagramFormat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifiedPoint {
    pub point: Vec<i64>,
    pub layers: Vec<Layer>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub layer: Layer,
    #[serde(serialize_with = "crate::serde_rationals")]
    pub from: Vec<Rational>,
    #[serde(serialize_with = "crate::serde_rationals")]
    pub to: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polygon {
    pub layer: Layer,
    pub vertices: Vec<Vec<String>>,
    #[serde(skip)]
    exact: Vec<[Rational; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagram {
    pub dim: usize,
    pub spec: DiagramSpec,
    pub points: Vec<ClassifiedPoint>,
    pub segments: Vec<Segment>,
    pub polygons: Vec<Polygon>,
}

struct Context<'a> {
    a: &'a IntMatrix,
    lattice: FaceLattice,
    semigroup: Option<Semigroup>,
    resonance: Option<ResonanceSet>,
    delta: Option<Vec<Int>>,
}

impl Context<'_> {
    fn test(&mut self, layer: Layer, p: &[Int]) -> bool {
        let q = to_rational(p);
        match layer {
            Layer::Semigroup => self.semigroup.as_mut().expect("semigroup prepared").contains(p),
            Layer::SaturationGap => {
                in_cone(self.a, &q) && !self.semigroup.as_mut().expect("semigroup prepared").contains(p)
            }
            Layer::Cone => in_cone(self.a, &q),
            Layer::Qdeg(j) => self.resonance.as_ref().expect("resonance prepared").components.iter().any(|c| {
                c.column == j && {
                    let diff: Vec<Rational> = q.iter().zip(&c.offset).map(|(x, y)| x - Rational::from_integer(y.clone())).collect();
                    crate::linalg::in_span(p.len(), &c.face.vectors(self.a).iter().map(|v| to_rational(v)).collect::<Vec<_>>(), &diff)
                }
            }),
            Layer::Sres => self.resonance.as_ref().expect("resonance prepared").contains(&q),
            Layer::Dsres => dsres_face(self.a, &self.lattice, &q).is_some(),
            Layer::DeltaCone => {
                let delta = self.delta.as_ref().expect("delta prepared");
                let shifted: Vec<Rational> = q.iter().zip(delta).map(|(x, y)| x - Rational::from_integer(y.clone())).collect();
                in_cone(self.a, &shifted)
            }
        }
    }
}

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

/// Clips `p + t v` to the box; `None` when the line misses it.
fn clip_line(p: &[Rational], v: &[Rational], lo: &[Rational], hi: &[Rational]) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let mut t0: Option<Rational> = None;
    let mut t1: Option<Rational> = None;
    for k in 0..p.len() {
        if v[k].is_zero() {
            if p[k] < lo[k] || p[k] > hi[k] {
                return None;
            }
            continue;
        }
        let a = (&lo[k] - &p[k]) / &v[k];
        let b = (&hi[k] - &p[k]) / &v[k];
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        t0 = Some(t0.map_or(a.clone(), |t: Rational| t.max(a)));
        t1 = Some(t1.map_or(b.clone(), |t: Rational| t.min(b)));
    }
    let (t0, t1) = (t0?, t1?);
    if t0 > t1 {
        return None;
    }
    let at = |t: &Rational| p.iter().zip(v).map(|(x, y)| x + t * y).collect();
    Some((at(&t0), at(&t1)))
}

/// Sutherland-Hodgman clipping against `n · x ≥ c`.
fn clip_half_plane(poly: &[[Rational; 2]], n: &[Rational; 2], c: &Rational) -> Vec<[Rational; 2]> {
    let val = |p: &[Rational; 2]| &n[0] * &p[0] + &n[1] * &p[1] - c;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let cur = &poly[i];
        let next = &poly[(i + 1) % poly.len()];
        let (vc, vn) = (val(cur), val(next));
        if !vc.is_negative() {
            out.push(cur.clone());
        }
        if (vc.is_negative() && vn.is_positive()) || (vc.is_positive() && vn.is_negative()) {
            let t = &vc / (&vc - &vn);
            out.push([&cur[0] + &t * (&next[0] - &cur[0]), &cur[1] + &t * (&next[1] - &cur[1])]);
        }
    }
    out
}

/// Classifies every lattice point of the box and collects the analytic
/// shapes of the requested layers.
pub fn render_diagram(a: &IntMatrix, spec: &DiagramSpec) -> Result<Diagram> {
    let d = a.nrows();
    if d == 0 || d > 2 {
        return Err(GkzError::DimensionUnsupported(d));
    }
    let lattice = face_lattice(a)?;
    let needs = |f: fn(&Layer) -> bool| spec.layers.iter().any(f);
    let semigroup = if needs(|l| matches!(l, Layer::Semigroup | Layer::SaturationGap)) {
        Some(Semigroup::with_lattice(a, &lattice)?)
    } else {
        None
    };
    let resonance = if needs(|l| matches!(l, Layer::Sres | Layer::Qdeg(_) | Layer::DeltaCone)) {
        Some(ResonanceSet::new(a)?)
    } else {
        None
    };
    let delta = match (&resonance, needs(|l| matches!(l, Layer::DeltaCone))) {
        (Some(r), true) => Some(r.delta()?),
        _ => None,
    };
    for l in &spec.layers {
        if let Layer::Qdeg(j) = l {
            if *j >= a.ncols() {
                return Err(GkzError::InvalidColumn(*j));
            }
        }
    }
    let mut ctx = Context { a, lattice, semigroup, resonance, delta };

    let ys: Vec<i64> = if d == 1 { vec![0] } else { (spec.y.0..=spec.y.1).collect() };
    let mut points = Vec::new();
    for &y in &ys {
        for x in spec.x.0..=spec.x.1 {
            let p: Vec<i64> = if d == 1 { vec![x] } else { vec![x, y] };
            let big: Vec<Int> = p.iter().map(|&v| Int::from(v)).collect();
            let layers = spec.layers.iter().copied().filter(|&l| ctx.test(l, &big)).collect();
            points.push(ClassifiedPoint { point: p, layers });
        }
    }

    let lo: Vec<Rational> = if d == 1 { vec![q(spec.x.0)] } else { vec![q(spec.x.0), q(spec.y.0)] };
    let hi: Vec<Rational> = if d == 1 { vec![q(spec.x.1)] } else { vec![q(spec.x.1), q(spec.y.1)] };
    let mut segments = Vec::new();
    let mut polygons = Vec::new();
    let rect = || {
        if d == 1 {
            vec![[lo[0].clone(), Rational::zero()], [hi[0].clone(), Rational::zero()]]
        } else {
            vec![
                [lo[0].clone(), lo[1].clone()],
                [hi[0].clone(), lo[1].clone()],
                [hi[0].clone(), hi[1].clone()],
                [lo[0].clone(), hi[1].clone()],
            ]
        }
    };
    let span = (spec.x.1 - spec.x.0).abs() + (spec.y.1 - spec.y.0).abs();
    for &layer in &spec.layers {
        match layer {
            Layer::Qdeg(_) | Layer::Sres => {
                let set = ctx.resonance.as_ref().expect("resonance prepared");
                for c in &set.components {
                    if let Layer::Qdeg(j) = layer {
                        if c.column != j {
                            continue;
                        }
                    }
                    let dirs: Vec<Vec<Int>> = c.face.vectors(a).into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
                    let rank = crate::linalg::rank(&crate::matrix::Matrix::from_columns(d, &dirs.iter().map(|v| to_rational(v)).collect::<Vec<_>>()));
                    if rank == 0 {
                        continue;
                    }
                    if rank == d {
                        polygons.push(Polygon { layer, vertices: Vec::new(), exact: rect() });
                        continue;
                    }
                    let v = to_rational(&dirs[0]);
                    let base = to_rational(&c.offset);
                    let shift = to_rational(&c.shift);
                    let parallel = crate::linalg::in_span(d, std::slice::from_ref(&v), &shift);
                    let multipliers: Vec<i64> = match layer {
                        Layer::Qdeg(_) => vec![0],
                        _ if parallel => vec![1],
                        _ => {
                            let offs: i64 = c.offset.iter().map(|x| x.abs().to_i64().unwrap_or(i64::MAX / 4)).sum();
                            (1..=4 * (span + offs) + 4).collect()
                        }
                    };
                    for m in multipliers {
                        let p: Vec<Rational> = base.iter().zip(&shift).map(|(x, s)| x - q(m) * s).collect();
                        if let Some((from, to)) = clip_line(&p, &v, &lo, &hi) {
                            segments.push(Segment { layer, from, to });
                        }
                    }
                }
            }
            Layer::Cone | Layer::DeltaCone => {
                let origin: Vec<Rational> = match layer {
                    Layer::DeltaCone => to_rational(ctx.delta.as_ref().expect("delta prepared")),
                    _ => vec![Rational::zero(); d],
                };
                if d == 1 {
                    // rays of a line
                    let cols = a.columns();
                    let pos = cols.iter().any(|c| c[0].is_positive());
                    let neg = cols.iter().any(|c| c[0].is_negative());
                    let from = if neg { lo[0].clone() } else { origin[0].clone().max(lo[0].clone()) };
                    let to = if pos { hi[0].clone() } else { origin[0].clone().min(hi[0].clone()) };
                    if from <= to {
                        segments.push(Segment { layer, from: vec![from], to: vec![to] });
                    }
                    continue;
                }
                if !ctx.lattice.full_dimensional {
                    for col in a.columns().iter().filter(|c| c.iter().any(|x| !x.is_zero())) {
                        let v = to_rational(col);
                        if let Some((s, e)) = clip_line(&origin, &v, &lo, &hi) {
                            // keep the part with t ≥ 0
                            let t_of = |p: &[Rational]| {
                                let k = if v[0].is_zero() { 1 } else { 0 };
                                (&p[k] - &origin[k]) / &v[k]
                            };
                            let (ts, te) = (t_of(&s), t_of(&e));
                            let clamp = |t: Rational| t.max(Rational::zero());
                            let (ts, te) = (clamp(ts), clamp(te));
                            if ts != te {
                                let at = |t: &Rational| origin.iter().zip(&v).map(|(x, y)| x + t * y).collect();
                                segments.push(Segment { layer, from: at(&ts), to: at(&te) });
                            }
                        }
                    }
                    continue;
                }
                let mut poly = rect();
                for (_, n) in facet_normals(a, &ctx.lattice) {
                    let n = to_rational(&n);
                    let n2 = [n[0].clone(), n[1].clone()];
                    let c = &n2[0] * &origin[0] + &n2[1] * &origin[1];
                    poly = clip_half_plane(&poly, &n2, &c);
                    if poly.is_empty() {
                        break;
                    }
                }
                if !poly.is_empty() {
                    polygons.push(Polygon { layer, vertices: Vec::new(), exact: poly });
                }
            }
            _ => {}
        }
    }
    for p in &mut polygons {
        p.vertices = p.exact.iter().map(|v| v.iter().map(crate::scalar::fmt_rational).collect()).collect();
    }
    Ok(Diagram { dim: d, spec: spec.clone(), points, segments, polygons })
}

impl Diagram {
    pub fn layers_at(&self, p: &[i64]) -> Option<&[Layer]> {
        self.points.iter().find(|c| c.point == p).map(|c| c.layers.as_slice())
    }

    /// One character per lattice point; the first requested layer that
    /// holds wins.
    pub fn to_ascii(&self) -> String {
        let mut out = String::new();
        let legend: Vec<String> = self.spec.layers.iter().map(|l| format!("{} {}", l.glyph(), layer_name(*l))).collect();
        let _ = writeln!(out, "# {}", legend.join(", "));
        let ys: Vec<i64> = if self.dim == 1 { vec![0] } else { (self.spec.y.0..=self.spec.y.1).rev().collect() };
        for y in ys {
            let label = if self.dim == 1 { String::new() } else { format!("{y:>4} ") };
            out.push_str(&label);
            for x in self.spec.x.0..=self.spec.x.1 {
                let p: Vec<i64> = if self.dim == 1 { vec![x] } else { vec![x, y] };
                let glyph = self
                    .layers_at(&p)
                    .and_then(|ls| self.spec.layers.iter().find(|l| ls.contains(l)))
                    .map_or('.', |l| l.glyph());
                out.push(glyph);
                out.push(' ');
            }
            out.pop();
            out.push('\n');
        }
        out
    }

    pub fn to_svg(&self) -> String {
        const S: f64 = 32.0;
        const M: f64 = 24.0;
        let (x0, x1) = self.spec.x;
        let (y0, y1) = if self.dim == 1 { (0, 0) } else { self.spec.y };
        let w = (x1 - x0) as f64 * S + 2.0 * M;
        let h = (y1 - y0) as f64 * S + 2.0 * M;
        let px = |x: f64| (x - x0 as f64) * S + M;
        let py = |y: f64| (y1 as f64 - y) * S + M;
        let f = |r: &Rational| r.to_f64().unwrap_or(0.0);
        let mut out = String::new();
        let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
        let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
        for poly in &self.polygons {
            let pts: Vec<String> = poly.exact.iter().map(|v| format!("{:.2},{:.2}", px(f(&v[0])), py(f(&v[1])))).collect();
            let _ = writeln!(out, r#"<polygon points="{}" fill="{}" fill-opacity="0.18" stroke="none"/>"#, pts.join(" "), poly.layer.colour());
        }
        // axes
        if x0 <= 0 && 0 <= x1 && self.dim == 2 {
            let _ = writeln!(out, r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="gray" stroke-width="0.5"/>"#, px(0.0), py(y0 as f64), py(y1 as f64));
        }
        if y0 <= 0 && 0 <= y1 {
            let _ = writeln!(out, r#"<line x1="{0:.2}" y1="{2:.2}" x2="{1:.2}" y2="{2:.2}" stroke="gray" stroke-width="0.5"/>"#, px(x0 as f64), px(x1 as f64), py(0.0));
        }
        for s in &self.segments {
            let (ay, by) = if self.dim == 1 { (0.0, 0.0) } else { (f(&s.from[1]), f(&s.to[1])) };
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="2"/>"#,
                px(f(&s.from[0])),
                py(ay),
                px(f(&s.to[0])),
                py(by),
                s.layer.colour()
            );
        }
        for c in &self.points {
            let (x, y) = (c.point[0] as f64, if self.dim == 1 { 0.0 } else { c.point[1] as f64 });
            for l in &c.layers {
                let (cx, cy) = (px(x), py(y));
                let shape = match l {
                    Layer::Semigroup => format!(r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="4" fill="black"/>"#),
                    Layer::SaturationGap => format!(r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="4" fill="white" stroke="black"/>"#),
                    Layer::Cone => continue,
                    other => format!(r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="2" fill="{}"/>"#, other.colour()),
                };
                out.push_str(&shape);
                out.push('\n');
            }
        }
        out.push_str("</svg>\n");
        out
    }

    pub fn render(&self) -> String {
        match self.spec.format {
            DiagramFormat::Ascii => self.to_ascii(),
            DiagramFormat::Svg => self.to_svg(),
        }
    }
}

pub fn layer_name(l: Layer) -> String {
    match l {
        Layer::Semigroup => "semigroup".into(),
        Layer::SaturationGap => "saturation-gap".into(),
        Layer::Cone => "cone".into(),
        Layer::Qdeg(j) => format!("qdeg:{j}"),
        Layer::Sres => "sres".into(),
        Layer::Dsres => "dsres".into(),
        Layer::DeltaCone => "delta-cone".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedral::semigroup_contains;

    fn m(s: &str) -> IntMatrix {
        IntMatrix::parse(s).unwrap()
    }

    fn spec(x: (i64, i64), y: (i64, i64), layers: &[Layer]) -> DiagramSpec {
        DiagramSpec { x, y, layers: layers.to_vec(), format: DiagramFormat::Ascii }
    }

    #[test]
    fn example_two_first_figure() {
        let a = m("3 2 0; 1 1 1");
        let sp = spec((-1, 9), (-1, 5), &[Layer::Semigroup, Layer::SaturationGap, Layer::Cone]);
        let dg = render_diagram(&a, &sp).unwrap();
        for c in &dg.points {
            let p: Vec<Int> = c.point.iter().map(|&v| Int::from(v)).collect();
            let sg = semigroup_contains(&a, &p).unwrap();
            let cone = c.point[0] >= 0 && 3 * c.point[1] >= c.point[0];
            assert_eq!(c.layers.contains(&Layer::Semigroup), sg);
            assert_eq!(c.layers.contains(&Layer::Cone), cone);
            assert_eq!(c.layers.contains(&Layer::SaturationGap), cone && !sg);
        }
        assert_eq!(dg.layers_at(&[1, 1]).unwrap(), &[Layer::SaturationGap, Layer::Cone]);
        assert_eq!(dg.polygons.len(), 1);
        assert!(dg.to_svg().contains("<polygon"));
    }

    #[test]
    fn identity_fills_box() {
        let dg = render_diagram(&m("1 0; 0 1"), &spec((0, 3), (0, 3), &[Layer::Semigroup])).unwrap();
        assert!(dg.points.iter().all(|c| c.layers == [Layer::Semigroup]));
        assert_eq!(dg.to_ascii().lines().nth(1).unwrap(), "   3 * * * *");
    }

    #[test]
    fn line_sres() {
        let dg = render_diagram(&m("1"), &spec((-3, 3), (0, 0), &[Layer::Sres])).unwrap();
        let marked: Vec<i64> = dg.points.iter().filter(|c| !c.layers.is_empty()).map(|c| c.point[0]).collect();
        assert_eq!(marked, vec![-3, -2, -1]);
        assert_eq!(dg.to_ascii().lines().nth(1).unwrap(), "r r r . . . .");
    }

    #[test]
    fn qdeg_segments() {
        let dg = render_diagram(&m("3 2 0; 1 1 1"), &spec((-1, 9), (-1, 5), &[Layer::Qdeg(0)])).unwrap();
        let xs: Vec<String> = dg.segments.iter().map(|s| crate::scalar::fmt_rational(&s.from[0])).collect();
        assert_eq!(xs, vec!["0", "2", "4"]);
    }

    #[test]
    fn rejects_three_rows() {
        assert_eq!(render_diagram(&m("1 0 0; 0 1 0; 0 0 1"), &spec((0, 1), (0, 1), &[Layer::Cone])).unwrap_err(), GkzError::DimensionUnsupported(3));
    }

    #[test]
    fn layer_parsing() {
        assert_eq!("qdeg:2".parse::<Layer>().unwrap(), Layer::Qdeg(2));
        assert_eq!("saturation-gap".parse::<Layer>().unwrap(), Layer::SaturationGap);
        assert!("nope".parse::<Layer>().is_err());
    }
}
