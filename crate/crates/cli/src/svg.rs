//! Static figures in the Poincaré disk.
//!
//! Every point goes through one projection, `(x1/(1+x0), x2/(1+x0))`,
//! after an optional isometry that recentres the figure. Geodesics are drawn
//! as arcs of circles orthogonal to the unit circle.

use std::fmt::Write as _;

use hypext::lorentz::HPoint;
use hypext::num17::format as f17;

const SIZE: f64 = 800.0;
const SCALE: f64 = 380.0;

pub type Disk = (f64, f64);

pub fn project(p: &HPoint) -> Disk {
    p.to_disk()
}

fn screen((u, v): Disk) -> Disk {
    (SIZE / 2.0 + SCALE * u, SIZE / 2.0 - SCALE * v)
}

/// Centre and radius of the circle through `a` and `b` orthogonal to the
/// unit circle, or `None` when the geodesic is a diameter.
pub fn orthogonal_circle(a: Disk, b: Disk) -> Option<(Disk, f64)> {
    let det = a.0 * b.1 - a.1 * b.0;
    if det.abs() < 1e-12 {
        return None;
    }
    let ka = (a.0 * a.0 + a.1 * a.1 + 1.0) / 2.0;
    let kb = (b.0 * b.0 + b.1 * b.1 + 1.0) / 2.0;
    let c = ((ka * b.1 - kb * a.1) / det, (a.0 * kb - b.0 * ka) / det);
    let r2 = c.0 * c.0 + c.1 * c.1 - 1.0;
    (r2 > 0.0).then(|| (c, r2.sqrt()))
}

/// Colour for `t` in `[0, 1]`, dark blue through teal to yellow.
pub fn heat(t: f64) -> String {
    let stops =
        [(68.0, 1.0, 84.0), (59.0, 82.0, 139.0), (33.0, 145.0, 140.0), (94.0, 201.0, 98.0), (253.0, 231.0, 37.0)];
    let t = t.clamp(0.0, 1.0) * (stops.len() - 1) as f64;
    let k = (t.floor() as usize).min(stops.len() - 2);
    let f = t - k as f64;
    let (a, b) = (stops[k], stops[k + 1]);
    let mix = |x: f64, y: f64| (x + (y - x) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

pub struct Svg {
    body: String,
}

impl Default for Svg {
    fn default() -> Self {
        Self::new()
    }
}

impl Svg {
    pub fn new() -> Self {
        let mut body = String::new();
        let c = f17(SIZE / 2.0);
        let _ = writeln!(
            body,
            r##"<circle cx="{c}" cy="{c}" r="{}" fill="none" stroke="#999" stroke-width="1"/>"##,
            f17(SCALE)
        );
        Svg { body }
    }

    fn path_from(&self, a: Disk) -> String {
        let (x, y) = screen(a);
        format!("M {} {}", f17(x), f17(y))
    }

    fn arc_to(a: Disk, b: Disk) -> String {
        let (bx, by) = screen(b);
        match orthogonal_circle(a, b) {
            None => format!(" L {} {}", f17(bx), f17(by)),
            Some((c, r)) => {
                let (ax, ay) = screen(a);
                let (cx, cy) = screen(c);
                // centre to the right of travel on screen means clockwise
                let cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
                let sweep = u8::from(cross > 0.0);
                let rs = f17(r * SCALE);
                format!(" A {rs} {rs} 0 0 {sweep} {} {}", f17(bx), f17(by))
            }
        }
    }

    /// Geodesic polygon (or open path) through disk points.
    pub fn geodesic_path(&mut self, pts: &[Disk], closed: bool, stroke: &str, width: f64) {
        if pts.len() < 2 {
            return;
        }
        let mut d = self.path_from(pts[0]);
        for w in pts.windows(2) {
            d.push_str(&Self::arc_to(w[0], w[1]));
        }
        if closed {
            d.push_str(&Self::arc_to(pts[pts.len() - 1], pts[0]));
            d.push_str(" Z");
        }
        let _ = writeln!(self.body, r##"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{}"/>"##, f17(width));
    }

    pub fn dot(&mut self, p: Disk, radius: f64, fill: &str) {
        let (x, y) = screen(p);
        let _ = writeln!(self.body, r##"<circle cx="{}" cy="{}" r="{}" fill="{fill}"/>"##, f17(x), f17(y), f17(radius));
    }

    pub fn marker(&mut self, p: Disk, label: &str) {
        let (x, y) = screen(p);
        let _ = writeln!(
            self.body,
            r##"<circle cx="{}" cy="{}" r="6" fill="none" stroke="#d62728" stroke-width="2"/>"##,
            f17(x),
            f17(y)
        );
        let _ = writeln!(
            self.body,
            r##"<text x="{}" y="{}" font-size="14" fill="#d62728">{label}</text>"##,
            f17(x + 8.0),
            f17(y - 8.0)
        );
    }

    pub fn caption(&mut self, text: &str) {
        let _ = writeln!(self.body, r##"<text x="10" y="20" font-size="14" fill="#333">{text}</text>"##);
    }

    pub fn finish(self) -> String {
        let s = f17(SIZE);
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}
