//! Sampling checkers for h-convexity (one variable), joint convexity and
//! coordinated convexity (two variables).
//!
//! A passing verdict means no violation was found among the sampled points;
//! it is not a proof. A failing verdict carries the worst witnesses found,
//! each of which can be re-evaluated from its recorded points and parameters.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Expr, Var};
use crate::function::{IvFunction1D, IvFunction2D};
use crate::integration::{integrate_scalar, QuadratureConfig};
use crate::interval::Interval;

/// How a comparison `A ⊇ B` is judged.
///
/// `Scalar` is the degenerate mode for point-interval inputs: only the lower
/// endpoints are compared, which turns every inclusion into the classical
/// real inequality `a <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    #[default]
    Interval,
    Scalar,
}

impl CheckMode {
    /// Violation size of `container ⊇ inner`; zero when it holds exactly.
    pub fn defect(self, container: &Interval, inner: &Interval) -> f64 {
        let (lo, hi) = container.inclusion_defect(inner);
        match self {
            CheckMode::Interval => lo.max(hi),
            CheckMode::Scalar => lo,
        }
    }

    pub(crate) fn require_degenerate(self, degenerate: bool, label: &str) -> Result<()> {
        if self == CheckMode::Scalar && !degenerate {
            return Err(Error::NotDegenerate(label.to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HKind {
    Identity,
    Power { s: f64 },
    Expr { src: String },
}

/// Nonnegative weight function `h` on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct HFunction {
    kind: HKind,
    expr: Option<Expr>,
    label: String,
}

impl HFunction {
    /// `h(t) = t`.
    pub fn identity() -> Self {
        HFunction { kind: HKind::Identity, expr: None, label: "t".into() }
    }

    /// `h(t) = t^s`, `s ∈ (0, 1]`.
    pub fn power(s: f64) -> Result<Self> {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::InvalidH { label: format!("t^{s}"), reason: "s must lie in (0, 1]".into() });
        }
        Self::validated(HFunction { kind: HKind::Power { s }, expr: None, label: format!("t^{s}") })
    }

    /// `h` given as an expression in `t`.
    pub fn expr(src: &str) -> Result<Self> {
        let e = Expr::parse(src)?;
        if e.uses(Var::Y) {
            return Err(Error::InvalidH { label: src.into(), reason: "h takes the single variable t".into() });
        }
        Self::validated(HFunction { kind: HKind::Expr { src: src.into() }, expr: Some(e), label: src.into() })
    }

    /// Parses `t`, `pow:<s>` or `expr:<dsl>`.
    pub fn parse(spec: &str) -> Result<Self> {
        if spec == "t" {
            Ok(Self::identity())
        } else if let Some(s) = spec.strip_prefix("pow:") {
            let s: f64 = s
                .parse()
                .map_err(|_| Error::InvalidH { label: spec.into(), reason: "exponent is not a number".into() })?;
            Self::power(s)
        } else if let Some(src) = spec.strip_prefix("expr:") {
            Self::expr(src)
        } else {
            Err(Error::InvalidH { label: spec.into(), reason: "expected t, pow:<s> or expr:<dsl>".into() })
        }
    }

    fn validated(h: HFunction) -> Result<Self> {
        let mut nonzero = false;
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let v = h.eval(t);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidH { label: h.label, reason: format!("h({t}) = {v} is not a nonnegative real") });
            }
            nonzero |= v != 0.0;
        }
        if !nonzero {
            return Err(Error::InvalidH { label: h.label, reason: "h vanishes on every sample".into() });
        }
        Ok(h)
    }

    pub fn kind(&self) -> &HKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            HKind::Identity => t,
            HKind::Power { s } => t.powf(*s),
            HKind::Expr { .. } => self.expr.as_ref().expect("expr kind carries its ast").eval(t, 0.0),
        }
    }

    /// `∫₀¹ h` by the configured quadrature rule.
    pub fn integral(&self, cfg: &QuadratureConfig) -> Result<f64> {
        integrate_scalar(|t| self.eval(t), 0.0, 1.0, cfg)
    }

    /// `∫₀¹ h` in closed form, when known.
    pub fn closed_form_integral(&self) -> Option<f64> {
        match self.kind {
            HKind::Identity => Some(0.5),
            HKind::Power { s } => Some(1.0 / (s + 1.0)),
            HKind::Expr { .. } => None,
        }
    }
}

/// Where and how densely the checkers sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingSpec {
    /// Uniform points per spatial variable, endpoints included.
    pub points_per_axis: usize,
    /// Combination parameters `t` (and `s`).
    pub params: Vec<f64>,
    /// Extra uniformly random samples drawn from `seed`.
    pub random_samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub mode: CheckMode,
    pub max_witnesses: usize,
}

impl Default for SamplingSpec {
    fn default() -> Self {
        SamplingSpec {
            points_per_axis: 17,
            params: (1..8).map(|k| k as f64 / 8.0).collect(),
            random_samples: 64,
            seed: 0,
            tol: 1e-10,
            mode: CheckMode::Interval,
            max_witnesses: 16,
        }
    }
}

impl SamplingSpec {
    pub fn with_mode(mode: CheckMode) -> Self {
        SamplingSpec { mode, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points_per_axis < 2 {
            return Err(Error::Config(format!("grid needs at least 2 points per axis, got {}", self.points_per_axis)));
        }
        if self.params.is_empty() || self.params.iter().any(|t| !(*t > 0.0 && *t < 1.0)) {
            return Err(Error::Config("combination parameters must be nonempty and lie in (0, 1)".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::Config(format!("tolerance must be >= 0, got {}", self.tol)));
        }
        Ok(())
    }

    fn grid(&self, lo: f64, hi: f64) -> Vec<f64> {
        let n = self.points_per_axis - 1;
        (0..=n).map(|i| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 }).collect()
    }

    /// Closed under `t ↦ 1 - t`, which lets symmetric pair enumeration skip mirrored samples.
    fn params_symmetric(&self) -> bool {
        self.params.iter().all(|t| self.params.iter().any(|u| (u - (1.0 - t)).abs() <= 1e-15))
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessPoints {
    /// `F(t x + (1-t) y)` against `h(t) F(x) + h(1-t) F(y)`.
    Segment { x: f64, y: f64 },
    /// `F(t p + (1-t) q)` against `t F(p) + (1-t) F(q)`.
    Pair { p: [f64; 2], q: [f64; 2] },
    /// The tensor four-point inclusion on corners `(x|y) × (u|w)`.
    Tensor { x: f64, y: f64, u: f64, w: f64 },
}

/// One violated inclusion `lhs ⊇ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub points: WitnessPoints,
    /// `[t]` or `[t, s]`.
    pub params: Vec<f64>,
    pub lhs: Interval,
    pub rhs: Interval,
    pub defect: f64,
}

impl Witness {
    /// Recomputes the defect of a one-variable witness.
    pub fn recheck_1d(&self, f: &IvFunction1D, h: &HFunction, mode: CheckMode) -> Result<f64> {
        let WitnessPoints::Segment { x, y } = self.points else {
            return Err(Error::Config("not a one-variable witness".into()));
        };
        let t = self.params[0];
        let (lhs, rhs) = h_convex_terms(f, h, x, y, t, f.eval(x)?, f.eval(y)?)?;
        Ok(mode.defect(&lhs, &rhs))
    }

    /// Recomputes the defect of a two-variable witness.
    pub fn recheck_2d(&self, f: &IvFunction2D, mode: CheckMode) -> Result<f64> {
        let (lhs, rhs) = match self.points {
            WitnessPoints::Pair { p, q } => {
                joint_terms(f, p, q, self.params[0], f.eval(p[0], p[1])?, f.eval(q[0], q[1])?)?
            }
            WitnessPoints::Tensor { x, y, u, w } => {
                let corners = [f.eval(x, u)?, f.eval(x, w)?, f.eval(y, u)?, f.eval(y, w)?];
                tensor_terms(f, [x, y, u, w], self.params[0], self.params[1], corners)?
            }
            WitnessPoints::Segment { .. } => return Err(Error::Config("not a two-variable witness".into())),
        };
        Ok(mode.defect(&lhs, &rhs))
    }
}

/// Result of the section-wise cross-check behind the tensor check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionSummary {
    pub holds: bool,
    pub sections_checked: usize,
    pub failing_sections: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityVerdict {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
    pub samples_checked: usize,
    pub violations: usize,
    pub tolerance: f64,
    pub mode: CheckMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sections: Option<SectionSummary>,
}

impl ConvexityVerdict {
    pub fn summary(&self) -> String {
        if self.holds {
            format!("no violation found on {} samples", self.samples_checked)
        } else {
            let worst = self.witnesses.first().map_or(0.0, |w| w.defect);
            format!("{} of {} samples violate (worst defect {worst:e})", self.violations, self.samples_checked)
        }
    }
}

/// Keeps the `k` largest defects, ties broken by sample index.
struct TopK {
    k: usize,
    seen: usize,
    items: Vec<(usize, Witness)>,
}

impl TopK {
    fn new(k: usize) -> Self {
        TopK { k, seen: 0, items: Vec::new() }
    }

    fn order(a: &(usize, Witness), b: &(usize, Witness)) -> Ordering {
        b.1.defect.total_cmp(&a.1.defect).then(a.0.cmp(&b.0))
    }

    fn push(&mut self, idx: usize, w: Witness) {
        self.seen += 1;
        let item = (idx, w);
        let pos = self.items.partition_point(|x| Self::order(x, &item) == Ordering::Less);
        if pos < self.k {
            self.items.insert(pos, item);
            self.items.truncate(self.k);
        }
    }

    fn merge(mut self, other: TopK) -> TopK {
        let seen = self.seen + other.seen;
        for (i, w) in other.items {
            self.push(i, w);
        }
        self.seen = seen;
        self
    }
}

const CHUNK: usize = 4096;

/// Evaluates samples `0..count` and returns the worst violations in a
/// worker-count independent order.
fn scan<F>(count: usize, k: usize, eval: F) -> Result<TopK>
where
    F: Fn(usize) -> Result<Option<Witness>> + Sync,
{
    let chunks = count.div_ceil(CHUNK);
    let parts: Vec<TopK> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut top = TopK::new(k);
            for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
                if let Some(w) = eval(i)? {
                    top.push(i, w);
                }
            }
            Ok(top)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().fold(TopK::new(k), TopK::merge))
}

fn finish(grid: TopK, random: TopK, samples: usize, spec: &SamplingSpec) -> ConvexityVerdict {
    let all = grid.merge(random);
    ConvexityVerdict {
        holds: all.seen == 0,
        violations: all.seen,
        witnesses: all.items.into_iter().map(|(_, w)| w).collect(),
        samples_checked: samples,
        tolerance: spec.tol,
        mode: spec.mode,
        sections: None,
    }
}

fn require_nonnegative(values: &[Interval], label: &str) -> Result<()> {
    match values.iter().find(|v| !v.is_nonnegative()) {
        Some(v) => Err(Error::NegativeOperand(format!("{label} takes value {v}"))),
        None => Ok(()),
    }
}

fn lerp(t: f64, a: f64, b: f64) -> f64 {
    t * a + (1.0 - t) * b
}

fn h_convex_terms(
    f: &IvFunction1D,
    h: &HFunction,
    x: f64,
    y: f64,
    t: f64,
    fx: Interval,
    fy: Interval,
) -> Result<(Interval, Interval)> {
    let lhs = f.eval_in_domain(lerp(t, x, y))?;
    let rhs = fx.scale(h.eval(t))? + fy.scale(h.eval(1.0 - t))?;
    Ok((lhs, rhs))
}

fn joint_terms(
    f: &IvFunction2D,
    p: [f64; 2],
    q: [f64; 2],
    t: f64,
    fp: Interval,
    fq: Interval,
) -> Result<(Interval, Interval)> {
    let lhs = f.eval_in_domain(lerp(t, p[0], q[0]), lerp(t, p[1], q[1]))?;
    let rhs = fp.scale(t)? + fq.scale(1.0 - t)?;
    Ok((lhs, rhs))
}

/// `corners` = `[F(x,u), F(x,w), F(y,u), F(y,w)]`.
fn tensor_terms(
    f: &IvFunction2D,
    [x, y, u, w]: [f64; 4],
    t: f64,
    s: f64,
    corners: [Interval; 4],
) -> Result<(Interval, Interval)> {
    let lhs = f.eval_in_domain(lerp(t, x, y), lerp(s, u, w))?;
    let rhs = corners[0].scale(t * s)?
        + corners[1].scale(t * (1.0 - s))?
        + corners[2].scale(s * (1.0 - t))?
        + corners[3].scale((1.0 - s) * (1.0 - t))?;
    Ok((lhs, rhs))
}

fn pairs(n: usize, symmetric: bool) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (if symmetric { i } else { 0 }..n).map(move |j| (i, j)))
        .collect()
}

/// Checks `h(t)F(x) + h(1-t)F(y) ⊆ F(tx + (1-t)y)` on the sample set.
pub fn check_h_convex_1d(f: &IvFunction1D, h: &HFunction, spec: &SamplingSpec) -> Result<ConvexityVerdict> {
    spec.validate()?;
    spec.mode.require_degenerate(f.is_degenerate(), f.label())?;
    let dom = f.domain();
    let grid = spec.grid(dom.lo(), dom.hi());
    let values: Vec<Interval> = grid.iter().map(|&x| f.eval(x)).collect::<Result<_>>()?;
    require_nonnegative(&values, f.label())?;

    let n = grid.len();
    let np = spec.params.len();
    let count = n * n * np;
    let check = |x: f64, y: f64, t: f64, fx: Interval, fy: Interval| -> Result<Option<Witness>> {
        let (lhs, rhs) = h_convex_terms(f, h, x, y, t, fx, fy)?;
        let defect = spec.mode.defect(&lhs, &rhs);
        Ok((defect > spec.tol).then(|| Witness {
            points: WitnessPoints::Segment { x, y },
            params: vec![t],
            lhs,
            rhs,
            defect,
        }))
    };

    let on_grid = scan(count, spec.max_witnesses, |idx| {
        let (i, rest) = (idx / (n * np), idx % (n * np));
        let (j, k) = (rest / np, rest % np);
        check(grid[i], grid[j], spec.params[k], values[i], values[j])
    })?;

    let mut rng = spec.rng();
    let randoms: Vec<(f64, f64, f64)> = (0..spec.random_samples)
        .map(|_| (rng.gen_range(dom.lo()..=dom.hi()), rng.gen_range(dom.lo()..=dom.hi()), rng.gen_range(0.0..1.0)))
        .collect();
    let random = scan(randoms.len(), spec.max_witnesses, |idx| {
        let (x, y, t) = randoms[idx];
        if t == 0.0 {
            return Ok(None);
        }
        check(x, y, t, f.eval(x)?, f.eval(y)?)
    })?;

    Ok(finish(on_grid, random, count + randoms.len(), spec))
}

/// Checks `tF(p) + (1-t)F(q) ⊆ F(tp + (1-t)q)` for sampled points of the rectangle.
pub fn check_joint_convex(f: &IvFunction2D, spec: &SamplingSpec) -> Result<ConvexityVerdict> {
    spec.validate()?;
    spec.mode.require_degenerate(f.is_degenerate(), f.label())?;
    let r = f.domain();
    let xs = spec.grid(r.a, r.b);
    let ys = spec.grid(r.c, r.d);
    let points: Vec<[f64; 2]> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| [x, y])).collect();
    let values: Vec<Interval> = points.iter().map(|p| f.eval(p[0], p[1])).collect::<Result<_>>()?;
    require_nonnegative(&values, f.label())?;

    let check = |p: [f64; 2], q: [f64; 2], t: f64, fp: Interval, fq: Interval| -> Result<Option<Witness>> {
        let (lhs, rhs) = joint_terms(f, p, q, t, fp, fq)?;
        let defect = spec.mode.defect(&lhs, &rhs);
        Ok((defect > spec.tol).then(|| Witness { points: WitnessPoints::Pair { p, q }, params: vec![t], lhs, rhs, defect }))
    };

    let point_pairs = pairs(points.len(), spec.params_symmetric());
    let np = spec.params.len();
    let count = point_pairs.len() * np;
    let on_grid = scan(count, spec.max_witnesses, |idx| {
        let (a, b) = point_pairs[idx / np];
        check(points[a], points[b], spec.params[idx % np], values[a], values[b])
    })?;

    let mut rng = spec.rng();
    let draw = |rng: &mut ChaCha8Rng| [rng.gen_range(r.a..=r.b), rng.gen_range(r.c..=r.d)];
    let randoms: Vec<([f64; 2], [f64; 2], f64)> = (0..spec.random_samples)
        .map(|_| (draw(&mut rng), draw(&mut rng), rng.gen_range(0.0..1.0)))
        .collect();
    let random = scan(randoms.len(), spec.max_witnesses, |idx| {
        let (p, q, t) = randoms[idx];
        check(p, q, t, f.eval(p[0], p[1])?, f.eval(q[0], q[1])?)
    })?;

    Ok(finish(on_grid, random, count + randoms.len(), spec))
}

/// Checks the tensor inclusion
/// `F(tx+(1-t)y, su+(1-s)w) ⊇ tsF(x,u) + t(1-s)F(x,w) + s(1-t)F(y,u) + (1-s)(1-t)F(y,w)`
/// and, separately, interval convexity of every sampled axis section.
pub fn check_coord_convex(f: &IvFunction2D, spec: &SamplingSpec) -> Result<ConvexityVerdict> {
    let mut verdict = check_coord_tensor(f, spec)?;
    verdict.sections = Some(check_sections(f, spec)?);
    Ok(verdict)
}

/// Tensor part of [`check_coord_convex`] without the section cross-check.
pub fn check_coord_tensor(f: &IvFunction2D, spec: &SamplingSpec) -> Result<ConvexityVerdict> {
    spec.validate()?;
    spec.mode.require_degenerate(f.is_degenerate(), f.label())?;
    let r = f.domain();
    let xs = spec.grid(r.a, r.b);
    let ys = spec.grid(r.c, r.d);
    let n = ys.len();
    let values: Vec<Interval> =
        xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).map(|(x, y)| f.eval(x, y)).collect::<Result<_>>()?;
    require_nonnegative(&values, f.label())?;
    let at = |i: usize, k: usize| values[i * n + k];

    let check = |pts: [f64; 4], t: f64, s: f64, corners: [Interval; 4]| -> Result<Option<Witness>> {
        let (lhs, rhs) = tensor_terms(f, pts, t, s, corners)?;
        let defect = spec.mode.defect(&lhs, &rhs);
        Ok((defect > spec.tol).then(|| {
            let [x, y, u, w] = pts;
            Witness { points: WitnessPoints::Tensor { x, y, u, w }, params: vec![t, s], lhs, rhs, defect }
        }))
    };

    let symmetric = spec.params_symmetric();
    let x_pairs = pairs(xs.len(), symmetric);
    let y_pairs = pairs(ys.len(), symmetric);
    let np = spec.params.len();
    let per_x = y_pairs.len() * np * np;
    let count = x_pairs.len() * per_x;
    let on_grid = scan(count, spec.max_witnesses, |idx| {
        let (i, j) = x_pairs[idx / per_x];
        let rest = idx % per_x;
        let (k, l) = y_pairs[rest / (np * np)];
        let (ti, si) = ((rest % (np * np)) / np, rest % np);
        let corners = [at(i, k), at(i, l), at(j, k), at(j, l)];
        check([xs[i], xs[j], ys[k], ys[l]], spec.params[ti], spec.params[si], corners)
    })?;

    let mut rng = spec.rng();
    let randoms: Vec<([f64; 4], f64, f64)> = (0..spec.random_samples)
        .map(|_| {
            let pts = [
                rng.gen_range(r.a..=r.b),
                rng.gen_range(r.a..=r.b),
                rng.gen_range(r.c..=r.d),
                rng.gen_range(r.c..=r.d),
            ];
            (pts, rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0))
        })
        .collect();
    let random = scan(randoms.len(), spec.max_witnesses, |idx| {
        let (pts, t, s) = randoms[idx];
        let [x, y, u, w] = pts;
        let corners = [f.eval(x, u)?, f.eval(x, w)?, f.eval(y, u)?, f.eval(y, w)?];
        check(pts, t, s, corners)
    })?;

    Ok(finish(on_grid, random, count + randoms.len(), spec))
}

/// Interval convexity (`h(t) = t`) of `F(x0, ·)` and `F(·, y0)` for every grid `x0`, `y0`.
pub fn check_sections(f: &IvFunction2D, spec: &SamplingSpec) -> Result<SectionSummary> {
    let r = f.domain();
    let h = HFunction::identity();
    let section_spec = SamplingSpec { random_samples: 0, max_witnesses: 1, ..spec.clone() };
    let mut failing = Vec::new();
    let mut checked = 0;
    for x0 in spec.grid(r.a, r.b) {
        checked += 1;
        if !check_h_convex_1d(&f.section_x(x0)?, &h, &section_spec)?.holds {
            failing.push(format!("x={x0}"));
        }
    }
    for y0 in spec.grid(r.c, r.d) {
        checked += 1;
        if !check_h_convex_1d(&f.section_y(y0)?, &h, &section_spec)?.holds {
            failing.push(format!("y={y0}"));
        }
    }
    Ok(SectionSummary { holds: failing.is_empty(), sections_checked: checked, failing_sections: failing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::Rectangle;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn h_functions() {
        assert_eq!(HFunction::parse("t").unwrap().eval(0.25), 0.25);
        let h = HFunction::parse("pow:0.5").unwrap();
        assert!((h.eval(0.25) - 0.5).abs() < 1e-15);
        assert_eq!(h.closed_form_integral(), Some(1.0 / 1.5));
        let h = HFunction::parse("expr:t^2").unwrap();
        assert_eq!(h.eval(0.5), 0.25);
        assert_eq!(h.closed_form_integral(), None);
        assert!(HFunction::parse("pow:0").is_err());
        assert!(HFunction::parse("pow:1.5").is_err());
        assert!(HFunction::parse("expr:t-1").is_err());
        assert!(HFunction::parse("expr:0*t").is_err());
        assert!(HFunction::parse("expr:y").is_err());
        assert!(HFunction::parse("square").is_err());
    }

    #[test]
    fn h_integrals_match_closed_forms() {
        let cfg = QuadratureConfig::default();
        let h = HFunction::identity();
        assert!((h.integral(&cfg).unwrap() - 0.5).abs() < 1e-15);
        let h = HFunction::power(1.0).unwrap();
        assert!((h.integral(&cfg).unwrap() - 0.5).abs() < 1e-15);
        // t^s has an unbounded derivative at 0, so Simpson converges slowly there
        let h = HFunction::power(0.5).unwrap();
        assert!((h.integral(&cfg).unwrap() - h.closed_form_integral().unwrap()).abs() < 1e-4);
    }

    #[test]
    fn band_is_convex() {
        let f = IvFunction1D::parse("x^2+1", "12-x^2", 0.0, 2.0).unwrap();
        let v = check_h_convex_1d(&f, &HFunction::identity(), &SamplingSpec::default()).unwrap();
        assert!(v.holds, "{:?}", v.witnesses.first());
        assert!(v.witnesses.is_empty());
        assert_eq!(v.samples_checked, 17 * 17 * 7 + 64);
    }

    #[test]
    fn convex_point_function_is_not_interval_convex() {
        let f = IvFunction1D::point_valued("x^2", 0.0, 1.0).unwrap();
        let v = check_h_convex_1d(&f, &HFunction::identity(), &SamplingSpec::default()).unwrap();
        assert!(!v.holds);
        let w = &v.witnesses[0];
        assert!((w.defect - 0.25).abs() < 1e-15);
        assert_eq!(w.params, vec![0.5]);
        match w.points {
            WitnessPoints::Segment { x, y } => assert_eq!((x.min(y), x.max(y)), (0.0, 1.0)),
            _ => panic!("wrong witness shape"),
        }
        assert_eq!(w.lhs, iv(0.25, 0.25));
        assert_eq!(w.rhs, iv(0.5, 0.5));
        assert_eq!(w.recheck_1d(&f, &HFunction::identity(), CheckMode::Interval).unwrap(), w.defect);

        let scalar = check_h_convex_1d(&f, &HFunction::identity(), &SamplingSpec::with_mode(CheckMode::Scalar)).unwrap();
        assert!(scalar.holds);
    }

    #[test]
    fn constant_holds_with_equality() {
        let f = IvFunction1D::constant(iv(1.0, 2.0), 0.0, 3.0).unwrap();
        assert!(check_h_convex_1d(&f, &HFunction::identity(), &SamplingSpec::default()).unwrap().holds);
    }

    #[test]
    fn scalar_mode_requires_point_inputs() {
        let f = IvFunction1D::parse("x", "x+1", 0.0, 1.0).unwrap();
        let err = check_h_convex_1d(&f, &HFunction::identity(), &SamplingSpec::with_mode(CheckMode::Scalar));
        assert!(matches!(err, Err(Error::NotDegenerate(_))));
    }

    #[test]
    fn negative_values_are_rejected() {
        let f = IvFunction1D::parse("x-1", "x", 0.0, 2.0).unwrap();
        assert!(matches!(
            check_h_convex_1d(&f, &HFunction::identity(), &SamplingSpec::default()),
            Err(Error::NegativeOperand(_))
        ));
    }

    #[test]
    fn affine_is_jointly_convex() {
        let f = IvFunction2D::parse("x+y", "10-x-y", Rectangle::unit_square()).unwrap();
        let spec = SamplingSpec { points_per_axis: 9, ..Default::default() };
        assert!(check_joint_convex(&f, &spec).unwrap().holds);
        assert!(check_coord_convex(&f, &spec).unwrap().holds);
    }

    #[test]
    fn bilinear_fails_joint_convexity() {
        let f = IvFunction2D::parse("x*y", "4*x*y", Rectangle::new(0.0, 1.0, 1.0, 2.0).unwrap()).unwrap();
        let v = check_joint_convex(&f, &SamplingSpec { points_per_axis: 5, ..Default::default() }).unwrap();
        assert!(!v.holds);
        // xy fails on the anti-diagonal, 4xy on the diagonal
        assert!(v.witnesses[0].defect >= 0.25 - 1e-12);
        for w in &v.witnesses {
            assert!((w.recheck_2d(&f, CheckMode::Interval).unwrap() - w.defect).abs() < 1e-15);
        }
    }

    #[test]
    fn sum_of_squares_in_scalar_mode() {
        let f = IvFunction2D::point_valued("x^2+y^2", Rectangle::unit_square()).unwrap();
        let spec = SamplingSpec { points_per_axis: 9, mode: CheckMode::Scalar, ..Default::default() };
        let v = check_coord_convex(&f, &spec).unwrap();
        assert!(v.holds);
        assert!(v.sections.unwrap().holds);
    }

    #[test]
    fn verdicts_are_deterministic() {
        let f = IvFunction2D::parse("x*y", "(6-exp(x))*(6-exp(y))", Rectangle::unit_square()).unwrap();
        let spec = SamplingSpec { points_per_axis: 7, random_samples: 200, seed: 9, ..Default::default() };
        let a = check_joint_convex(&f, &spec).unwrap();
        let b = check_joint_convex(&f, &spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sampling_validation() {
        let f = IvFunction1D::parse("x", "x", 0.0, 1.0).unwrap();
        let h = HFunction::identity();
        let bad = SamplingSpec { points_per_axis: 1, ..Default::default() };
        assert!(check_h_convex_1d(&f, &h, &bad).is_err());
        let bad = SamplingSpec { params: vec![0.0, 0.5], ..Default::default() };
        assert!(check_h_convex_1d(&f, &h, &bad).is_err());
    }

    #[test]
    fn top_k_keeps_worst() {
        let mk = |d: f64| Witness {
            points: WitnessPoints::Segment { x: 0.0, y: 0.0 },
            params: vec![0.5],
            lhs: Interval::ZERO,
            rhs: Interval::ZERO,
            defect: d,
        };
        let mut top = TopK::new(2);
        for (i, d) in [0.1, 0.5, 0.3, 0.5].into_iter().enumerate() {
            top.push(i, mk(d));
        }
        assert_eq!(top.seen, 4);
        assert_eq!(top.items.iter().map(|x| x.0).collect::<Vec<_>>(), vec![1, 3]);
    }
}
