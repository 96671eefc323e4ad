//! Achievable rate regions: the per-distribution pentagon, its convex hull
//! over sampled product distributions, and time sharing.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{conditional_entropies, EntropyProfile};
use crate::error::{Error, Result};
use crate::rng;
use crate::SignalEnsemble;

/// Collinearity and duplicate-vertex tolerance for the hull.
pub const HULL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub fn new(r1: f64, r2: f64) -> Self {
        RatePair { r1, r2 }
    }

    pub fn sum(&self) -> f64 {
        self.r1 + self.r2
    }

    fn dist(&self, other: &RatePair) -> f64 {
        (self.r1 - other.r1).hypot(self.r2 - other.r2)
    }
}

fn cross(o: &RatePair, a: &RatePair, b: &RatePair) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

/// Closed convex polygon of rate pairs, vertices counterclockwise starting at
/// the lexicographically smallest point (the origin for every region built
/// here).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    vertices: Vec<RatePair>,
}

impl RateRegion {
    pub fn vertices(&self) -> &[RatePair] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let twice: f64 = (0..n)
            .map(|i| {
                let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % n]);
                a.r1 * b.r2 - b.r1 * a.r2
            })
            .sum();
        0.5 * twice
    }

    /// Broken region invariants, empty when valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let v = &self.vertices;
        if v.is_empty() {
            out.push("no vertices".into());
            return out;
        }
        if v.iter().any(|p| !(p.r1 >= 0.0 && p.r2 >= 0.0 && p.r1.is_finite() && p.r2.is_finite())) {
            out.push("vertex outside the non-negative quadrant".into());
        }
        if !contains(self, RatePair::new(0.0, 0.0), HULL_TOL) {
            out.push("origin not contained".into());
        }
        let n = v.len();
        for i in 0..n {
            for j in i + 1..n {
                if v[i].dist(&v[j]) <= HULL_TOL {
                    out.push(format!("duplicate vertices {i} and {j}"));
                }
            }
        }
        if n >= 3 {
            for i in 0..n {
                let c = cross(&v[i], &v[(i + 1) % n], &v[(i + 2) % n]);
                if c < -HULL_TOL {
                    out.push(format!("reflex turn at vertex {}", (i + 1) % n));
                }
            }
        }
        out
    }
}

/// Andrew's monotone chain. Points closer than [`HULL_TOL`] are merged and
/// turns with `|cross| <= HULL_TOL` are dropped.
pub fn convex_hull(points: &[RatePair]) -> RateRegion {
    let mut pts: Vec<RatePair> = points.to_vec();
    // order on coordinates snapped to the tolerance, so points that differ by
    // rounding noise in r1 are ordered by r2 instead of interleaving
    let snap = |x: f64| (x / HULL_TOL).round();
    pts.sort_by(|a, b| {
        snap(a.r1)
            .total_cmp(&snap(b.r1))
            .then(snap(a.r2).total_cmp(&snap(b.r2)))
            .then(a.r1.total_cmp(&b.r1))
            .then(a.r2.total_cmp(&b.r2))
    });
    pts.dedup_by(|a, b| a.dist(b) <= HULL_TOL);
    if pts.len() <= 2 {
        if pts.len() == 2 && pts[0].dist(&pts[1]) <= HULL_TOL {
            pts.pop();
        }
        return RateRegion { vertices: pts };
    }
    let mut lower: Vec<RatePair> = Vec::with_capacity(pts.len());
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= HULL_TOL {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<RatePair> = Vec::with_capacity(pts.len());
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= HULL_TOL {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // all points collinear: keep the two extremes
    if lower.len() == 2 && lower[0].dist(&lower[1]) <= HULL_TOL {
        lower.pop();
    }
    RateRegion { vertices: lower }
}

/// Closure of `{R1 < H_A, R2 < H_B, R1 + R2 < H}` with coincident vertices
/// merged.
pub fn pentagon(profile: &EntropyProfile) -> Result<RateRegion> {
    let problems = profile.violations();
    if !problems.is_empty() {
        return Err(Error::InvalidProfile(problems.join("; ")));
    }
    let ha = profile.h_cond_a.max(0.0);
    let hb = profile.h_cond_b.max(0.0);
    let h = profile.h_joint.max(0.0);
    let corners = [
        RatePair::new(0.0, 0.0),
        RatePair::new(ha, 0.0),
        RatePair::new(ha, (h - ha).clamp(0.0, hb)),
        RatePair::new((h - hb).clamp(0.0, ha), hb),
        RatePair::new(0.0, hb),
    ];
    Ok(convex_hull(&corners))
}

/// Closed-set membership with every half-plane relaxed by `tol`.
pub fn contains(region: &RateRegion, rate: RatePair, tol: f64) -> bool {
    let v = &region.vertices;
    match v.len() {
        0 => false,
        1 => v[0].dist(&rate) <= tol,
        2 => segment_distance(&v[0], &v[1], &rate) <= tol,
        n => (0..n).all(|i| {
            let (a, b) = (&v[i], &v[(i + 1) % n]);
            let len = a.dist(b);
            cross(a, b, &rate) / len >= -tol
        }),
    }
}

fn segment_distance(a: &RatePair, b: &RatePair, p: &RatePair) -> f64 {
    let (dx, dy) = (b.r1 - a.r1, b.r2 - a.r2);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.r1 - a.r1) * dx + (p.r2 - a.r2) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    p.dist(&RatePair::new(a.r1 + t * dx, a.r2 + t * dy))
}

/// `lambda * a + (1 - lambda) * b`.
pub fn time_share(a: RatePair, b: RatePair, lambda: f64) -> Result<RatePair> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    Ok(RatePair::new(
        lambda * a.r1 + (1.0 - lambda) * b.r1,
        lambda * a.r2 + (1.0 - lambda) * b.r2,
    ))
}

/// Which product distributions `p x q` to evaluate.
///
/// The grid puts every point `k / n` (with `n = 1 / grid_step`) of each
/// simplex into the plan and takes all `p`, `q` combinations. Random samples
/// draw `p` then `q` from the flat Dirichlet distribution, one pair per
/// sample, from a single ChaCha8 stream seeded with `seed`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SamplerPlan {
    pub grid_step: Option<f64>,
    pub random_samples: usize,
    pub seed: Option<u64>,
    /// Explicit `(p, q)` pairs evaluated in addition to the grid.
    pub extra: Vec<(Vec<f64>, Vec<f64>)>,
}

impl SamplerPlan {
    pub fn grid(step: f64) -> Self {
        SamplerPlan {
            grid_step: Some(step),
            ..Default::default()
        }
    }

    fn grid_divisions(&self) -> Result<Option<usize>> {
        let Some(step) = self.grid_step else {
            return Ok(None);
        };
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::InvalidSamplerPlan(format!("grid step {step} outside (0, 1]")));
        }
        let n = (1.0 / step).round();
        if (n * step - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidSamplerPlan(format!("grid step {step} does not divide 1")));
        }
        Ok(Some(n as usize))
    }

    /// Every `(p, q)` pair the plan evaluates, in a fixed order.
    pub fn distributions(&self, size_a: usize, size_b: usize) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
        let divisions = self.grid_divisions()?;
        if divisions.is_none() && self.random_samples == 0 && self.extra.is_empty() {
            return Err(Error::InvalidSamplerPlan("plan selects no distributions".into()));
        }
        if self.random_samples > 0 && self.seed.is_none() {
            return Err(Error::InvalidSamplerPlan("random samples need a seed".into()));
        }
        let mut out = Vec::new();
        if let Some(n) = divisions {
            let grid_p = simplex_grid(size_a, n);
            let grid_q = simplex_grid(size_b, n);
            for p in &grid_p {
                for q in &grid_q {
                    out.push((p.clone(), q.clone()));
                }
            }
        }
        if self.random_samples > 0 {
            let mut rng = rng::stream(self.seed.unwrap_or_default());
            for _ in 0..self.random_samples {
                let p = flat_dirichlet(&mut rng, size_a);
                let q = flat_dirichlet(&mut rng, size_b);
                out.push((p, q));
            }
        }
        for (p, q) in &self.extra {
            if p.len() != size_a || q.len() != size_b {
                return Err(Error::InvalidSamplerPlan(format!(
                    "extra distribution sizes ({}, {}) do not match alphabets ({size_a}, {size_b})",
                    p.len(),
                    q.len()
                )));
            }
            out.push((p.clone(), q.clone()));
        }
        Ok(out)
    }
}

/// All points of the `k`-simplex with coordinates in `{0, 1/n, ..., 1}`.
pub fn simplex_grid(k: usize, n: usize) -> Vec<Vec<f64>> {
    fn fill(k: usize, remaining: usize, n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if prefix.len() + 1 == k {
            prefix.push(remaining);
            out.push(prefix.iter().map(|&c| c as f64 / n as f64).collect());
            prefix.pop();
            return;
        }
        for c in 0..=remaining {
            prefix.push(c);
            fill(k, remaining - c, n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        fill(k, n, n, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

fn flat_dirichlet(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = draws.iter().sum();
    let mut p: Vec<f64> = draws.iter().map(|x| x / total).collect();
    // push rounding error into the largest entry so the sum is 1 to 1e-12
    let drift = 1.0 - p.iter().sum::<f64>();
    if let Some(max) = p.iter_mut().max_by(|a, b| a.total_cmp(b)) {
        *max += drift;
    }
    p
}

/// Convex hull of the pentagons of every sampled product distribution.
pub fn region_union(e: &SignalEnsemble, plan: &SamplerPlan) -> Result<RateRegion> {
    e.ensure_valid()?;
    let dists = plan.distributions(e.size_a(), e.size_b())?;
    let corners: Vec<Vec<RatePair>> = dists
        .par_iter()
        .map(|(p, q)| {
            let profile = conditional_entropies(&e.with_distributions(p.clone(), q.clone()))?;
            Ok(pentagon(&profile)?.vertices)
        })
        .collect::<Result<_>>()?;
    let all: Vec<RatePair> = corners.into_iter().flatten().collect();
    Ok(convex_hull(&all))
}
