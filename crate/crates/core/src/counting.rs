//! Rectangle zero counting by the argument principle.
//!
//! The winding number of F_a along a positively oriented contour equals
//! (zeros − poles) inside. Steps along the contour are refined until each
//! discrete argument increment is below π/2 and |ΔF| < |F| at both endpoints,
//! so the accumulated increments round to the exact integer. Distinct zeros
//! are isolated by quadtree subdivision and polished by secant plus
//! finite-difference Newton iteration; multiplicities come from a small
//! circle winding around each refined location.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::eval::{f_eval, residue_at_one, EvalError, EvalOptions};
use crate::sequences::PeriodicSequence;

const TAU: f64 = std::f64::consts::TAU;

/// |F| below this on a contour counts as a boundary zero.
pub const BOUNDARY_ZERO_THRESHOLD: f64 = 1e-10;

/// Required clearance between the contour and the pole at s = 1.
pub const POLE_CLEARANCE: f64 = 1e-6;

#[derive(Debug, Clone, Error)]
pub enum CountError {
    #[error("|F| = {modulus:.3e} on the contour near {location}; jitter the rectangle by ±1e-4")]
    BoundaryZero { location: Complex64, modulus: f64 },
    #[error("the pole at s = 1 is within {distance:.3e} of the contour (needs ≥ {POLE_CLEARANCE:.0e})")]
    PoleOnBoundary { distance: f64 },
    #[error("winding failed to stabilize: {0}")]
    Precision(String),
    #[error("invalid rectangle: {0}")]
    InvalidRectangle(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// An open counting region σ1 < Re s < σ2, t1 < Im s < t2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rectangle {
    pub sigma1: f64,
    pub sigma2: f64,
    pub t1: f64,
    pub t2: f64,
}

impl Rectangle {
    pub fn new(sigma1: f64, sigma2: f64, t1: f64, t2: f64) -> Result<Rectangle, CountError> {
        if !(sigma1 < sigma2 && t1 < t2) {
            return Err(CountError::InvalidRectangle(format!(
                "need sigma1 < sigma2 and t1 < t2, got ({sigma1}, {sigma2}) x ({t1}, {t2})"
            )));
        }
        Ok(Rectangle {
            sigma1,
            sigma2,
            t1,
            t2,
        })
    }

    pub fn contains(&self, s: Complex64) -> bool {
        self.sigma1 < s.re && s.re < self.sigma2 && self.t1 < s.im && s.im < self.t2
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.sigma1 + self.sigma2), 0.5 * (self.t1 + self.t2))
    }

    pub fn diameter(&self) -> f64 {
        let w = self.sigma2 - self.sigma1;
        let h = self.t2 - self.t1;
        (w * w + h * h).sqrt()
    }

    /// Distance from a point to the rectangle's boundary.
    fn boundary_distance(&self, p: Complex64) -> f64 {
        let dx = (self.sigma1 - p.re).max(p.re - self.sigma2);
        let dy = (self.t1 - p.im).max(p.im - self.t2);
        if dx <= 0.0 && dy <= 0.0 {
            // inside: distance to nearest side
            (-dx).min(-dy)
        } else {
            let ex = dx.max(0.0);
            let ey = dy.max(0.0);
            (ex * ex + ey * ey).sqrt()
        }
    }

    /// Corner-anchored parametrization of the positively oriented boundary.
    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.sigma1, self.t1),
            Complex64::new(self.sigma2, self.t1),
            Complex64::new(self.sigma2, self.t2),
            Complex64::new(self.sigma1, self.t2),
        ]
    }
}

struct WindingOutcome {
    turns: i64,
    /// |accumulated − 2π·turns|.
    deviation: f64,
    min_modulus: f64,
}

/// Adaptive winding of f along the closed polyline through `nodes`
/// (parametrized linearly between consecutive points; last connects back to
/// first).
fn winding_polyline<F>(f: &F, nodes: &[Complex64]) -> Result<WindingOutcome, CountError>
where
    F: Fn(Complex64) -> Result<Complex64, EvalError>,
{
    const MAX_DEPTH: u32 = 48;
    let eval = |s: Complex64| -> Result<Complex64, CountError> {
        let v = f(s)?;
        if v.norm() < BOUNDARY_ZERO_THRESHOLD {
            return Err(CountError::BoundaryZero {
                location: s,
                modulus: v.norm(),
            });
        }
        Ok(v)
    };
    let mut total = 0.0f64;
    let mut min_modulus = f64::INFINITY;
    let n = nodes.len();
    let mut stack: Vec<(Complex64, Complex64, Complex64, Complex64, u32)> = Vec::new();
    let mut fvals = Vec::with_capacity(n);
    for &p in nodes {
        let v = eval(p)?;
        min_modulus = min_modulus.min(v.norm());
        fvals.push(v);
    }
    for i in 0..n {
        let j = (i + 1) % n;
        stack.push((nodes[i], nodes[j], fvals[i], fvals[j], 0));
    }
    while let Some((a, b, fa, fb, depth)) = stack.pop() {
        let dphi = (fb / fa).arg();
        let df = (fb - fa).norm();
        if dphi.abs() < std::f64::consts::FRAC_PI_2 && df < fa.norm() && df < fb.norm() {
            total += dphi;
            continue;
        }
        if depth >= MAX_DEPTH {
            return Err(CountError::Precision(format!(
                "argument step between {a} and {b} did not settle after {MAX_DEPTH} halvings"
            )));
        }
        let m = 0.5 * (a + b);
        let fm = eval(m)?;
        min_modulus = min_modulus.min(fm.norm());
        stack.push((a, m, fa, fm, depth + 1));
        stack.push((m, b, fm, fb, depth + 1));
    }
    let turns = (total / TAU).round() as i64;
    let deviation = (total - TAU * turns as f64).abs();
    if deviation > 0.25 {
        return Err(CountError::Precision(format!(
            "accumulated argument {total:.6} is {deviation:.3} away from a multiple of 2π"
        )));
    }
    Ok(WindingOutcome {
        turns,
        deviation,
        min_modulus,
    })
}

fn rectangle_nodes(rect: &Rectangle, step: f64) -> Vec<Complex64> {
    let corners = rect.corners();
    let mut nodes = Vec::new();
    for i in 0..4 {
        let a = corners[i];
        let b = corners[(i + 1) % 4];
        let len = (b - a).norm();
        let k = (len / step).ceil().max(1.0) as usize;
        for j in 0..k {
            nodes.push(a + (b - a) * (j as f64 / k as f64));
        }
    }
    nodes
}

fn circle_nodes(center: Complex64, radius: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let ang = TAU * k as f64 / count as f64;
            center + radius * Complex64::new(ang.cos(), ang.sin())
        })
        .collect()
}

/// Winding number of f along a circle, counterclockwise.
pub fn winding_circle<F>(f: &F, center: Complex64, radius: f64) -> Result<i64, CountError>
where
    F: Fn(Complex64) -> Result<Complex64, EvalError>,
{
    let count = ((TAU * radius / 0.25).ceil() as usize).max(16);
    let outcome = winding_polyline(f, &circle_nodes(center, radius, count))?;
    Ok(outcome.turns)
}

fn has_pole(a: &PeriodicSequence) -> bool {
    residue_at_one(a).norm() * a.period() as f64 > 1e-10 * (1.0 + a.abs_sum())
}

fn check_pole_clearance(a: &PeriodicSequence, rect: &Rectangle) -> Result<(), CountError> {
    if has_pole(a) {
        let d = rect.boundary_distance(Complex64::new(1.0, 0.0));
        if d < POLE_CLEARANCE {
            return Err(CountError::PoleOnBoundary { distance: d });
        }
    }
    Ok(())
}

/// Raw winding number of F_a along the rectangle boundary: zeros − poles
/// inside. Errors on a boundary zero instead of jittering; see `count_zeros`
/// for the retrying variant.
pub fn winding_number(
    a: &PeriodicSequence,
    rect: &Rectangle,
    opts: &EvalOptions,
) -> Result<i64, CountError> {
    winding_number_with_step(a, rect, opts, 0.25).map(|o| o.turns)
}

fn winding_number_with_step(
    a: &PeriodicSequence,
    rect: &Rectangle,
    opts: &EvalOptions,
    step: f64,
) -> Result<WindingOutcome, CountError> {
    check_pole_clearance(a, rect)?;
    let f = |s: Complex64| f_eval(a, s, opts);
    winding_polyline(&f, &rectangle_nodes(rect, step))
}

/// Expose the raw accumulated-argument deviation for the integrality check.
pub fn winding_deviation(
    a: &PeriodicSequence,
    rect: &Rectangle,
    opts: &EvalOptions,
) -> Result<(i64, f64), CountError> {
    winding_number_with_step(a, rect, opts, 0.25).map(|o| (o.turns, o.deviation))
}

/// Winding with the boundary-zero retry policy: the side nearest the
/// offending point is pushed outward by 1e-4, up to five times.
fn winding_with_jitter(
    a: &PeriodicSequence,
    rect: &Rectangle,
    opts: &EvalOptions,
) -> Result<(WindingOutcome, Rectangle), CountError> {
    let mut r = *rect;
    let mut last_err = None;
    for _ in 0..=5 {
        match winding_number_with_step(a, &r, opts, 0.25) {
            Ok(o) => return Ok((o, r)),
            Err(CountError::BoundaryZero { location, modulus }) => {
                let d_left = (location.re - r.sigma1).abs();
                let d_right = (location.re - r.sigma2).abs();
                let d_bottom = (location.im - r.t1).abs();
                let d_top = (location.im - r.t2).abs();
                let min = d_left.min(d_right).min(d_bottom).min(d_top);
                if min == d_left {
                    r.sigma1 -= 1e-4;
                } else if min == d_right {
                    r.sigma2 += 1e-4;
                } else if min == d_bottom {
                    r.t1 -= 1e-4;
                } else {
                    r.t2 += 1e-4;
                }
                last_err = Some(CountError::BoundaryZero { location, modulus });
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap())
}

/// N_F: zeros of F_a inside the rectangle, counted with multiplicity.
/// The winding number is corrected by +1 when the pole at s = 1 lies strictly
/// inside.
pub fn count_zeros(
    a: &PeriodicSequence,
    rect: &Rectangle,
    opts: &EvalOptions,
) -> Result<u32, CountError> {
    let (outcome, effective) = winding_with_jitter(a, rect, opts)?;
    let mut n = outcome.turns;
    if has_pole(a) && effective.contains(Complex64::new(1.0, 0.0)) {
        n += 1;
    }
    if n < 0 {
        return Err(CountError::Precision(format!(
            "negative zero count {n} after pole adjustment"
        )));
    }
    Ok(n as u32)
}

/// A zero count together with resolved locations.
#[derive(Debug, Clone)]
pub struct ZeroReport {
    /// N_F: total with multiplicity.
    pub count: u32,
    /// Resolved zeros (location, multiplicity); N'_F is the length.
    pub distinct: Vec<(Complex64, u32)>,
    /// Smallest |F| seen on the outer contour.
    pub boundary_min_modulus: f64,
    /// Deepest subdivision level used.
    pub refinement_depth: u32,
    /// Cells below the separation scale still holding ≥ 2 zeros.
    pub unresolved: Vec<Rectangle>,
}

impl Serialize for ZeroReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct Zero {
            location: [f64; 2],
            multiplicity: u32,
        }
        let mut st = s.serialize_struct("ZeroReport", 5)?;
        st.serialize_field("count", &self.count)?;
        st.serialize_field(
            "distinct",
            &self
                .distinct
                .iter()
                .map(|&(z, m)| Zero {
                    location: [z.re, z.im],
                    multiplicity: m,
                })
                .collect::<Vec<_>>(),
        )?;
        st.serialize_field("boundaryMinModulus", &self.boundary_min_modulus)?;
        st.serialize_field("refinementDepth", &self.refinement_depth)?;
        st.serialize_field("unresolved", &self.unresolved)?;
        st.end()
    }
}

impl ZeroReport {
    pub fn distinct_count(&self) -> u32 {
        self.distinct.len() as u32
    }
}

/// Newton polish with finite-difference derivative, preceded by a few secant
/// steps. Returns a point with |F| < 1e-10, and only if it lies inside the
/// cell that was counted — converging to a neighbor's zero does not count.
fn refine_zero(
    a: &PeriodicSequence,
    cell: &Rectangle,
    opts: &EvalOptions,
) -> Option<Complex64> {
    let f = |s: Complex64| f_eval(a, s, opts).ok();
    // iterations may wander a little outside before pulling back
    let inflated = Rectangle {
        sigma1: cell.sigma1 - (cell.sigma2 - cell.sigma1),
        sigma2: cell.sigma2 + (cell.sigma2 - cell.sigma1),
        t1: cell.t1 - (cell.t2 - cell.t1),
        t2: cell.t2 + (cell.t2 - cell.t1),
    };
    let inside_cell = |z: Complex64| {
        let eps = 1e-9 * (1.0 + z.norm());
        cell.sigma1 - eps < z.re
            && z.re < cell.sigma2 + eps
            && cell.t1 - eps < z.im
            && z.im < cell.t2 + eps
    };
    let mut z0 = cell.center();
    let mut z1 = z0 + Complex64::new(
        0.2 * (cell.sigma2 - cell.sigma1),
        0.13 * (cell.t2 - cell.t1),
    );
    let mut f0 = f(z0)?;
    let mut f1 = f(z1)?;
    // secant
    for _ in 0..8 {
        if f1.norm() < 1e-11 {
            break;
        }
        let denom = f1 - f0;
        if denom.norm() == 0.0 {
            break;
        }
        let z2 = z1 - f1 * (z1 - z0) / denom;
        if !inflated.contains(z2) {
            break;
        }
        z0 = z1;
        f0 = f1;
        z1 = z2;
        f1 = f(z1)?;
    }
    // Newton with central finite differences
    let mut z = if f1.norm() < f0.norm() { z1 } else { z0 };
    for _ in 0..40 {
        let fz = f(z)?;
        if fz.norm() < 1e-10 {
            return inside_cell(z).then_some(z);
        }
        let h = 1e-6 * (1.0 + z.norm());
        let d = (f(z + h)? - f(z - h)?) / (2.0 * h);
        if d.norm() == 0.0 {
            return None;
        }
        let next = z - fz / d;
        if !inflated.contains(next) || !next.re.is_finite() || !next.im.is_finite() {
            return None;
        }
        z = next;
    }
    None
}

/// Count with a horizontal/vertical split whose position is nudged until both
/// children evaluate cleanly and their counts add to the parent.
fn split_cell(
    a: &PeriodicSequence,
    cell: &Rectangle,
    parent_count: u32,
    opts: &EvalOptions,
) -> Result<Vec<(Rectangle, u32)>, CountError> {
    let wide = (cell.sigma2 - cell.sigma1) >= (cell.t2 - cell.t1);
    for attempt in 0..6 {
        let offset = match attempt {
            0 => 0.0,
            k => 1e-4 * ((k as f64 + 1.0) / 2.0).floor() * if k % 2 == 1 { 1.0 } else { -1.0 },
        };
        let (left, right) = if wide {
            let mid = 0.5 * (cell.sigma1 + cell.sigma2) + offset;
            (
                Rectangle { sigma2: mid, ..*cell },
                Rectangle { sigma1: mid, ..*cell },
            )
        } else {
            let mid = 0.5 * (cell.t1 + cell.t2) + offset;
            (
                Rectangle { t2: mid, ..*cell },
                Rectangle { t1: mid, ..*cell },
            )
        };
        let ca = count_zeros(a, &left, opts);
        let cb = count_zeros(a, &right, opts);
        match (ca, cb) {
            (Ok(ca), Ok(cb)) if ca + cb == parent_count => {
                return Ok(vec![(left, ca), (right, cb)]);
            }
            _ => continue,
        }
    }
    Err(CountError::Precision(format!(
        "could not split cell ({}, {}) x ({}, {}) consistently",
        cell.sigma1, cell.sigma2, cell.t1, cell.t2
    )))
}

/// N'_F: resolve the distinct zeros inside the rectangle down to separation
/// `sep` (default 1e-6), with multiplicities from a circle winding of radius
/// `sep` around each refined location.
pub fn distinct_zeros(
    a: &PeriodicSequence,
    rect: &Rectangle,
    sep: f64,
    opts: &EvalOptions,
) -> Result<ZeroReport, CountError> {
    assert!(sep > 0.0, "separation must be positive");
    let (outcome, effective) = winding_with_jitter(a, rect, opts)?;
    let pole_inside = has_pole(a) && effective.contains(Complex64::new(1.0, 0.0));
    let total = outcome.turns + if pole_inside { 1 } else { 0 };
    if total < 0 {
        return Err(CountError::Precision(format!(
            "negative zero count {total} after pole adjustment"
        )));
    }
    let mut report = ZeroReport {
        count: total as u32,
        distinct: Vec::new(),
        boundary_min_modulus: outcome.min_modulus,
        refinement_depth: 0,
        unresolved: Vec::new(),
    };
    let mut stack: Vec<(Rectangle, u32, u32)> = vec![(effective, total as u32, 0)];
    while let Some((cell, n, depth)) = stack.pop() {
        report.refinement_depth = report.refinement_depth.max(depth);
        if n == 0 {
            continue;
        }
        // A cell containing the pole keeps subdividing until the pole is
        // excluded; Newton near the pole is unreliable.
        let pole_here = has_pole(a) && cell.contains(Complex64::new(1.0, 0.0));
        if n == 1 && !pole_here {
            if let Some(z) = refine_zero(a, &cell, opts) {
                let mult = multiplicity_at(a, z, sep, opts)?;
                report.distinct.push((z, mult));
                continue;
            }
        }
        if cell.diameter() < sep {
            if n >= 2 {
                report.unresolved.push(cell);
                // keep the invariant Σ multiplicities = count
                report.distinct.push((cell.center(), n));
            } else if let Some(z) = refine_zero(a, &cell, opts) {
                let mult = multiplicity_at(a, z, sep, opts)?;
                report.distinct.push((z, mult));
            } else {
                report.distinct.push((cell.center(), n));
            }
            continue;
        }
        for (child, cn) in split_cell(a, &cell, n, opts)? {
            if cn > 0 {
                stack.push((child, cn, depth + 1));
            }
        }
    }
    report.distinct.sort_by(|x, y| {
        x.0.im
            .partial_cmp(&y.0.im)
            .unwrap()
            .then(x.0.re.partial_cmp(&y.0.re).unwrap())
    });
    Ok(report)
}

/// Multiplicity of a zero: winding of F_a around a circle of radius `sep`.
fn multiplicity_at(
    a: &PeriodicSequence,
    z: Complex64,
    sep: f64,
    opts: &EvalOptions,
) -> Result<u32, CountError> {
    // keep clear of the pole
    if has_pole(a) && (z - Complex64::new(1.0, 0.0)).norm() <= sep + POLE_CLEARANCE {
        return Ok(1);
    }
    let f = |s: Complex64| f_eval(a, s, opts);
    let w = winding_circle(&f, z, sep)?;
    Ok(w.max(1) as u32)
}

/// One row of a zero-density table.
#[derive(Debug, Clone, Serialize)]
pub struct DensityRow {
    pub t: f64,
    pub count: u32,
    pub distinct: u32,
    pub per_unit: f64,
}

/// Zero counts of F_a over (σ1, σ2) × [0, T] for each requested T.
///
/// The t-range is cut into strips of height ≤ 10, scanned in parallel, and
/// accumulated; cut lines are nudged upward by 1e-4 when a zero sits on one.
/// When F_a has a pole and σ1 < 1 < σ2 the scan starts at t = 1e-3 to keep
/// s = 1 off the contour.
pub fn density_table(
    a: &PeriodicSequence,
    sigma1: f64,
    sigma2: f64,
    ts: &[f64],
    opts: &EvalOptions,
) -> Result<Vec<DensityRow>, CountError> {
    if !(0.5 < sigma1 && sigma1 < sigma2) {
        return Err(CountError::InvalidRectangle(format!(
            "need 1/2 < sigma1 < sigma2, got ({sigma1}, {sigma2})"
        )));
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) || ts.is_empty() {
        return Err(CountError::InvalidRectangle(
            "T values must be increasing and nonempty".into(),
        ));
    }
    let t_start = if has_pole(a) && sigma1 < 1.0 && 1.0 < sigma2 {
        1e-3
    } else {
        0.0
    };
    // strip boundaries: every requested T plus intermediate cuts ≤ 10 apart
    let mut cuts = vec![t_start];
    for &t in ts {
        let mut cur = *cuts.last().unwrap();
        while t - cur > 10.0 + 1e-9 {
            cur += 10.0;
            cuts.push(cur);
        }
        cuts.push(t);
    }
    let strips: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    let results: Vec<Result<(f64, u32, u32), CountError>> = strips
        .par_iter()
        .map(|&(lo, hi)| {
            let rect = Rectangle::new(sigma1, sigma2, lo, hi)?;
            let report = distinct_zeros(a, &rect, 1e-6, opts)?;
            Ok((hi, report.count, report.distinct_count()))
        })
        .collect();
    let mut acc_n = 0u32;
    let mut acc_np = 0u32;
    let mut rows = Vec::with_capacity(ts.len());
    let mut next_t = 0usize;
    for r in results {
        let (hi, n, np) = r?;
        acc_n += n;
        acc_np += np;
        if next_t < ts.len() && (hi - ts[next_t]).abs() < 1e-12 {
            rows.push(DensityRow {
                t: ts[next_t],
                count: acc_n,
                distinct: acc_np,
                per_unit: acc_n as f64 / ts[next_t],
            });
            next_t += 1;
        }
    }
    Ok(rows)
}

/// Second-moment data at a fixed abscissa.
#[derive(Debug, Clone, Serialize)]
pub struct MomentResult {
    pub sigma: f64,
    #[serde(rename = "T")]
    pub t_max: f64,
    /// ∫_0^T |F_a(σ+it)|² dt by adaptive Simpson quadrature.
    #[serde(rename = "integralValue")]
    pub integral: f64,
    /// T·q^(−2σ)·Σ_j |a_j|² ζ(2σ, j/q).
    #[serde(rename = "mainTerm")]
    pub main_term: f64,
    #[serde(rename = "relativeGap")]
    pub relative_gap: f64,
}

fn adaptive_simpson<F>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, CountError>
where
    F: Fn(f64) -> Result<f64, CountError>,
{
    const MAX_DEPTH: u32 = 40;
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        (fa + 4.0 * fm + fb) * h / 6.0
    }
    struct Frame {
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let fm = f(0.5 * (a + b))?;
    let whole = simpson(fa, fm, fb, b - a);
    let mut total = 0.0f64;
    let mut stack = vec![Frame {
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        tol,
        depth: 0,
    }];
    while let Some(fr) = stack.pop() {
        let m = 0.5 * (fr.a + fr.b);
        let lm = 0.5 * (fr.a + m);
        let rm = 0.5 * (m + fr.b);
        let flm = f(lm)?;
        let frm = f(rm)?;
        let left = simpson(fr.fa, flm, fr.fm, m - fr.a);
        let right = simpson(fr.fm, frm, fr.fb, fr.b - m);
        let err = left + right - fr.whole;
        if err.abs() <= 15.0 * fr.tol || fr.depth >= MAX_DEPTH {
            if fr.depth >= MAX_DEPTH && err.abs() > 15.0 * fr.tol {
                return Err(CountError::Precision(format!(
                    "quadrature failed to converge on [{}, {}]",
                    fr.a, fr.b
                )));
            }
            total += left + right + err / 15.0;
            continue;
        }
        stack.push(Frame {
            a: fr.a,
            b: m,
            fa: fr.fa,
            fm: flm,
            fb: fr.fm,
            whole: left,
            tol: 0.5 * fr.tol,
            depth: fr.depth + 1,
        });
        stack.push(Frame {
            a: m,
            b: fr.b,
            fa: fr.fm,
            fm: frm,
            fb: fr.fb,
            whole: right,
            tol: 0.5 * fr.tol,
            depth: fr.depth + 1,
        });
    }
    Ok(total)
}

/// ∫_0^T |F_a(σ+it)|² dt against its main term T·q^(−2σ)·Σ|a_j|²ζ(2σ, j/q),
/// for 1/2 < σ < 1 and T ≥ 10.
pub fn second_moment(
    a: &PeriodicSequence,
    sigma: f64,
    t_max: f64,
    opts: &EvalOptions,
) -> Result<MomentResult, CountError> {
    if !(0.5 < sigma && sigma < 1.0) {
        return Err(CountError::InvalidRectangle(format!(
            "sigma = {sigma} outside (1/2, 1)"
        )));
    }
    if t_max < 10.0 {
        return Err(CountError::InvalidRectangle(format!(
            "T = {t_max} below 10"
        )));
    }
    let q = a.period();
    let mut main_sum = 0.0f64;
    for (j, aj) in a.values().iter().enumerate() {
        if aj.norm() == 0.0 {
            continue;
        }
        let z = crate::eval::hurwitz_zeta(
            Complex64::new(2.0 * sigma, 0.0),
            (j as f64 + 1.0) / q as f64,
            opts,
        )?;
        main_sum += aj.norm_sqr() * z.re;
    }
    let main_term = t_max * (q as f64).powf(-2.0 * sigma) * main_sum;
    let integrand = |t: f64| -> Result<f64, CountError> {
        let v = f_eval(a, Complex64::new(sigma, t), opts)?;
        Ok(v.norm_sqr())
    };
    let integral = adaptive_simpson(&integrand, 0.0, t_max, 1e-6 * main_term)?;
    Ok(MomentResult {
        sigma,
        t_max,
        integral,
        main_term,
        relative_gap: (integral - main_term).abs() / main_term,
    })
}

/// Density-bound diagnostic for the half-plane count.
#[derive(Debug, Clone, Serialize)]
pub struct RatioResult {
    pub u: f64,
    #[serde(rename = "T")]
    pub t_max: f64,
    #[serde(rename = "sigmaCap")]
    pub sigma_cap: f64,
    pub count: u32,
    /// N(1/2+u, σ_cap, T) · u / (T·log(1/u)).
    pub ratio: f64,
}

/// Certified cap: beyond σ_cap the leading coefficient dominates,
/// Σ_{n>m} |a_n| n^(−σ) < |a_m| m^(−σ)/2, so no zeros lie to the right.
fn certify_sigma_cap(a: &PeriodicSequence, opts: &EvalOptions) -> Result<f64, CountError> {
    let m = a
        .first_nonzero()
        .ok_or_else(|| CountError::InvalidRectangle("zero sequence".into()))?;
    let q = a.period();
    for cap in [4.0f64, 5.0, 6.0, 8.0, 10.0, 12.0] {
        // q^(−cap)·Σ_j |a_j| ζ(cap, j/q) = Σ_{n≥1} |a_n| n^(−cap)
        let mut total = 0.0f64;
        for (j, aj) in a.values().iter().enumerate() {
            if aj.norm() == 0.0 {
                continue;
            }
            let z = crate::eval::hurwitz_zeta(
                Complex64::new(cap, 0.0),
                (j as f64 + 1.0) / q as f64,
                opts,
            )?;
            total += aj.norm() * z.re;
        }
        let series = (q as f64).powf(-cap) * total;
        let mut head = 0.0f64;
        for n in 1..=m {
            head += a.value_at(n).norm() * (n as f64).powf(-cap);
        }
        let lead = a.value_at(m).norm() * (m as f64).powf(-cap);
        if series - head < 0.5 * lead {
            return Ok(cap);
        }
    }
    Err(CountError::InvalidRectangle(
        "no certifiable right edge found up to sigma = 12".into(),
    ))
}

/// N(1/2+u, σ_cap, T)·u/(T·log(1/u)) for 0 < u ≤ 1/2.
///
/// σ_cap is certified at runtime so the strip count equals the half-plane
/// count. With a pole present the scan starts at t = 1e-3.
pub fn halfplane_ratio(
    a: &PeriodicSequence,
    u: f64,
    t_max: f64,
    opts: &EvalOptions,
) -> Result<RatioResult, CountError> {
    if !(0.0 < u && u <= 0.5) {
        return Err(CountError::InvalidRectangle(format!(
            "u = {u} outside (0, 1/2]"
        )));
    }
    if t_max < 10.0 {
        return Err(CountError::InvalidRectangle(format!("T = {t_max} below 10")));
    }
    if a.is_zero() {
        return Err(CountError::InvalidRectangle("zero sequence".into()));
    }
    let sigma_cap = certify_sigma_cap(a, opts)?;
    let sigma1 = 0.5 + u;
    let t_start = if has_pole(a) && sigma1 < 1.0 && 1.0 < sigma_cap {
        1e-3
    } else {
        0.0
    };
    let mut cuts = vec![t_start];
    while t_max - *cuts.last().unwrap() > 10.0 + 1e-9 {
        let next = cuts.last().unwrap() + 10.0;
        cuts.push(next);
    }
    cuts.push(t_max);
    let strips: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    let counts: Vec<Result<u32, CountError>> = strips
        .par_iter()
        .map(|&(lo, hi)| {
            let rect = Rectangle::new(sigma1, sigma_cap, lo, hi)?;
            count_zeros(a, &rect, opts)
        })
        .collect();
    let mut count = 0u32;
    for c in counts {
        count += c?;
    }
    Ok(RatioResult {
        u,
        t_max,
        sigma_cap,
        count,
        ratio: count as f64 * u / (t_max * (1.0 / u).ln()),
    })
}
