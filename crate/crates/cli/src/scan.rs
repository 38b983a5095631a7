//! Grid scan of `sys_p` over the hexagon for `hypext pants --scan`.

use hypext::lorentz::HPoint;
use hypext::num17::format as f17;
use hypext::pants::{systole_unchecked, EmbeddedHexagon};

pub const CSV_HEADER: &str = "s,t,u,v,l1,l2,l3,sys,is_max";

pub struct ScanRow {
    pub s: f64,
    pub t: f64,
    pub point: HPoint,
    pub ell: [f64; 3],
    pub sys: f64,
}

pub struct Scan {
    pub rows: Vec<ScanRow>,
    pub ds: f64,
    pub dt: f64,
    pub argmax: usize,
}

/// Grid of `(res + 1)^2` nodes in Fermi coordinates about `B3`, keeping
/// the points inside the hexagon. The row `t = 0` lies on `B3`.
pub fn scan(emb: &EmbeddedHexagon, res: usize) -> Scan {
    let coords: Vec<(f64, f64)> = emb.vertices.iter().map(|v| emb.fermi_coords(v)).collect();
    let s_lo = coords.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let s_hi = coords.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
    let t_hi = coords.iter().map(|c| c.1).fold(0.0, f64::max);
    let ds = (s_hi - s_lo) / res as f64;
    let dt = t_hi / res as f64;
    let mut rows = Vec::new();
    for j in 0..=res {
        let t = j as f64 * dt;
        for k in 0..=res {
            let s = s_lo + k as f64 * ds;
            let point = emb.fermi_point(s, t);
            if !emb.contains(&point) {
                continue;
            }
            let r = systole_unchecked(emb, &point);
            rows.push(ScanRow { s, t, point, ell: r.ell, sys: r.sys });
        }
    }
    let argmax = rows.iter().enumerate().max_by(|a, b| a.1.sys.total_cmp(&b.1.sys)).map(|(k, _)| k).unwrap_or(0);
    Scan { rows, ds, dt, argmax }
}

impl Scan {
    /// Whether `(s, t)` lies in a grid cell with the maximum node as a
    /// corner.
    pub fn near_max_cell(&self, s: f64, t: f64) -> bool {
        self.rows
            .get(self.argmax)
            .is_some_and(|m| (m.s - s).abs() <= self.ds * (1.0 + 1e-9) && (m.t - t).abs() <= self.dt * (1.0 + 1e-9))
    }

    /// Rows as CSV; `u, v` are disk coordinates after `recentre`.
    pub fn to_csv(&self, recentre: impl Fn(&HPoint) -> (f64, f64)) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for (k, r) in self.rows.iter().enumerate() {
            let (u, v) = recentre(&r.point);
            let cols = [r.s, r.t, u, v, r.ell[0], r.ell[1], r.ell[2], r.sys].map(f17).join(",");
            out.push_str(&format!("{cols},{}\n", u8::from(k == self.argmax)));
        }
        out
    }
}
