//! Closed 3D polylines to PD codes by generic projection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::diagram::{Crossing, KnotDiagram};
use super::KnotError;
use crate::curve::{Point3, Polyline3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionConfig {
    /// Tried first when set; random directions follow if it is not generic.
    pub direction: Option<[f64; 3]>,
    pub seed: u64,
    pub max_tries: usize,
    /// Relative tolerance for tangencies, vertex hits, triple points and
    /// equal depths.
    pub tol: f64,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        Self { direction: None, seed: 0x5eed, max_tries: 100, tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Hit {
    /// segment index and parameter along it, for the over and under passes
    over: (usize, f64),
    under: (usize, f64),
    sign: i8,
    at: [f64; 2],
}

fn dot(a: &Point3, b: &Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: &Point3, b: &Point3) -> Point3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn unit(a: &Point3) -> Point3 {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

/// Orthonormal (u, v) with u × v = d.
fn basis(d: &Point3) -> (Point3, Point3, Point3) {
    let d = unit(d);
    let helper = if d[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = unit(&cross3(&helper, &d));
    let v = cross3(&d, &u);
    (u, v, d)
}

/// Crossings of the projection along `dir`, or `None` if the projection is
/// not generic at tolerance `tol`.
fn project(pts: &[Point3], dir: &Point3, tol: f64) -> Option<Vec<Hit>> {
    let (u, v, d) = basis(dir);
    let p2: Vec<[f64; 2]> = pts.iter().map(|p| [dot(p, &u), dot(p, &v)]).collect();
    let depth: Vec<f64> = pts.iter().map(|p| dot(p, &d)).collect();
    let scale = pts.iter().map(|p| dot(p, p).sqrt()).fold(1.0, f64::max);
    let nseg = pts.len() - 1;

    let mut order: Vec<usize> = (0..nseg).collect();
    let xmin = |i: usize| p2[i][0].min(p2[i + 1][0]);
    let xmax = |i: usize| p2[i][0].max(p2[i + 1][0]);
    order.sort_by(|&a, &b| xmin(a).total_cmp(&xmin(b)));

    let mut hits = Vec::new();
    for (oi, &i) in order.iter().enumerate() {
        let (a0, a1) = (p2[i], p2[i + 1]);
        let ymin_i = a0[1].min(a1[1]);
        let ymax_i = a0[1].max(a1[1]);
        for &j in &order[oi + 1..] {
            if xmin(j) > xmax(i) + tol * scale {
                break;
            }
            let adjacent = j == i + 1 || i == j + 1 || (i.min(j) == 0 && i.max(j) == nseg - 1);
            if adjacent {
                continue;
            }
            let (b0, b1) = (p2[j], p2[j + 1]);
            if b0[1].min(b1[1]) > ymax_i + tol * scale || b0[1].max(b1[1]) < ymin_i - tol * scale {
                continue;
            }
            let ra = [a1[0] - a0[0], a1[1] - a0[1]];
            let rb = [b1[0] - b0[0], b1[1] - b0[1]];
            let den = ra[0] * rb[1] - ra[1] * rb[0];
            let w = [b0[0] - a0[0], b0[1] - a0[1]];
            let la = ra[0].hypot(ra[1]);
            let lb = rb[0].hypot(rb[1]);
            if den.abs() <= tol * la * lb {
                // parallel: degenerate only if the segments overlap
                let off = (w[0] * ra[1] - w[1] * ra[0]).abs() / la.max(f64::MIN_POSITIVE);
                if off < tol * scale {
                    let along = |p: [f64; 2]| ((p[0] - a0[0]) * ra[0] + (p[1] - a0[1]) * ra[1]) / (la * la);
                    let (s0, s1) = (along(b0), along(b1));
                    let slack = tol * scale / la;
                    if s0.max(s1) >= -slack && s0.min(s1) <= 1.0 + slack {
                        return None;
                    }
                }
                continue;
            }
            let s = (w[0] * rb[1] - w[1] * rb[0]) / den;
            let t = (w[0] * ra[1] - w[1] * ra[0]) / den;
            let inside = |x: f64| (-tol..=1.0 + tol).contains(&x);
            if !inside(s) || !inside(t) {
                continue;
            }
            if s < tol || s > 1.0 - tol || t < tol || t > 1.0 - tol {
                return None;
            }
            let da = depth[i] + s * (depth[i + 1] - depth[i]);
            let db = depth[j] + t * (depth[j + 1] - depth[j]);
            if (da - db).abs() < tol * scale {
                return None;
            }
            let at = [a0[0] + s * ra[0], a0[1] + s * ra[1]];
            let (over, under, od, ud) =
                if da > db { ((i, s), (j, t), ra, rb) } else { ((j, t), (i, s), rb, ra) };
            let c = od[0] * ud[1] - od[1] * ud[0];
            hits.push(Hit { over, under, sign: if c > 0.0 { 1 } else { -1 }, at });
        }
    }
    // triple points
    let mut by_x: Vec<usize> = (0..hits.len()).collect();
    by_x.sort_by(|&a, &b| hits[a].at[0].total_cmp(&hits[b].at[0]));
    for k in 1..by_x.len() {
        let (a, b) = (hits[by_x[k - 1]].at, hits[by_x[k]].at);
        if (a[0] - b[0]).abs() < tol * scale && (a[1] - b[1]).abs() < tol * scale {
            return None;
        }
    }
    Some(hits)
}

/// Gauss code entry: crossing index and whether this pass is the over pass.
type Gauss = Vec<(usize, bool)>;

fn gauss_code(hits: &[Hit], nseg: usize) -> Gauss {
    let mut per_seg: Vec<Vec<(f64, usize, bool)>> = vec![Vec::new(); nseg];
    for (k, h) in hits.iter().enumerate() {
        per_seg[h.over.0].push((h.over.1, k, true));
        per_seg[h.under.0].push((h.under.1, k, false));
    }
    let mut code = Vec::with_capacity(2 * hits.len());
    for mut s in per_seg {
        s.sort_by(|a, b| a.0.total_cmp(&b.0));
        code.extend(s.into_iter().map(|(_, k, o)| (k, o)));
    }
    code
}

/// Removes kinks: crossings whose two passes are cyclically adjacent.
fn reidemeister_one(mut code: Gauss) -> Gauss {
    loop {
        let n = code.len();
        if n == 0 {
            return code;
        }
        let kink = (0..n).find(|&m| code[m].0 == code[(m + 1) % n].0);
        let Some(m) = kink else { return code };
        let k = code[m].0;
        code.retain(|&(c, _)| c != k);
    }
}

fn diagram_from_gauss(code: &Gauss, signs: &[i8]) -> KnotDiagram {
    let n = code.len();
    if n == 0 {
        return KnotDiagram::unknot();
    }
    // Edge m enters pass m and edge m + 1 leaves it.
    let mut under: std::collections::BTreeMap<usize, (usize, usize)> = Default::default();
    let mut over: std::collections::HashMap<usize, (usize, usize)> = Default::default();
    for (m, &(k, is_over)) in code.iter().enumerate() {
        let e = (m, (m + 1) % n);
        if is_over {
            over.insert(k, e);
        } else {
            under.insert(k, e);
        }
    }
    let crossings = under
        .iter()
        .map(|(&k, &(ui, uo))| {
            let (oi, oo) = over[&k];
            let sign = signs[k];
            let pd = if sign > 0 { [ui, oo, uo, oi] } else { [ui, oi, uo, oo] };
            Crossing { pd, sign }
        })
        .collect();
    KnotDiagram { crossings, free_loops: 0 }
}

/// Projects the closed polyline generically, reads off crossings with
/// over/under from depth, removes kinks and returns the PD code.
pub fn polyline_to_diagram(c: &Polyline3, cfg: &ProjectionConfig) -> Result<KnotDiagram, KnotError> {
    if !c.closed || !c.is_valid() || c.points.len() < 4 {
        return Err(KnotError::BadDiagram("polyline must be closed with distinct consecutive vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for attempt in 0..cfg.max_tries {
        let dir = match (attempt, cfg.direction) {
            (0, Some(d)) => d,
            _ => {
                let mut d = [0.0; 3];
                while dot(&d, &d) < 1e-6 {
                    d = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                }
                d
            }
        };
        let Some(hits) = project(&c.points, &dir, cfg.tol) else { continue };
        let code = reidemeister_one(gauss_code(&hits, c.points.len() - 1));
        let signs: Vec<i8> = hits.iter().map(|h| h.sign).collect();
        let d = diagram_from_gauss(&code, &signs);
        // relabel densely
        let mut labels: Vec<usize> = d.crossings.iter().flat_map(|x| x.pd).collect();
        labels.sort_unstable();
        labels.dedup();
        let crossings = d
            .crossings
            .iter()
            .map(|x| Crossing {
                pd: x.pd.map(|e| labels.binary_search(&e).unwrap() + 1),
                sign: x.sign,
            })
            .collect();
        let out = KnotDiagram { crossings, free_loops: d.free_loops };
        out.validate()?;
        return Ok(out);
    }
    Err(KnotError::Degenerate(cfg.max_tries))
}
