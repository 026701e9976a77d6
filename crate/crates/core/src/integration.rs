//! Interval-valued integration.
//!
//! One-dimensional integrals are computed endpoint-wise by a composite rule.
//! Double integrals over rectangles are computed two ways: iterated
//! quadrature (the fast path used by the inequality engine) and the
//! tagged-partition integral sum, kept as an independent check of the first.
//!
//! All reductions run in a fixed order with compensated summation, so results
//! do not depend on the rayon worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{IvFunction1D, IvFunction2D, Rectangle};
use crate::interval::Interval;

const MAX_REFINEMENTS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Midpoint,
    Trapezoid,
    Simpson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub nodes_per_axis: usize,
    pub rule: Rule,
    pub refine_until: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { nodes_per_axis: 512, rule: Rule::Simpson, refine_until: None }
    }
}

impl QuadratureConfig {
    pub fn with_nodes(nodes_per_axis: usize) -> Self {
        QuadratureConfig { nodes_per_axis, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_axis < 2 {
            return Err(Error::Config(format!("nodes_per_axis must be >= 2, got {}", self.nodes_per_axis)));
        }
        if let Some(tol) = self.refine_until {
            if !(tol > 0.0) {
                return Err(Error::Config(format!("refinement tolerance must be > 0, got {tol}")));
            }
        }
        Ok(())
    }

    fn refined(&self, level: u32) -> QuadratureConfig {
        QuadratureConfig { nodes_per_axis: (self.nodes_per_axis - 1) * (1 << level) + 1, ..*self }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct IntervalSum {
    lo: CompensatedSum,
    hi: CompensatedSum,
}

impl IntervalSum {
    fn add_weighted(&mut self, w: f64, v: Interval) {
        self.lo.add(w * v.lo());
        self.hi.add(w * v.hi());
    }

    fn value(&self) -> Interval {
        let (lo, hi) = (self.lo.value(), self.hi.value());
        // independent rounding of the two sums cannot reverse a true ordering by more than an ulp
        Interval::from_bounds_unchecked(lo, hi.max(lo))
    }
}

/// Quadrature nodes and weights on `[a, b]`.
///
/// Midpoint uses `nodes` panel centers. Trapezoid uses `nodes` equispaced
/// points. Simpson uses `nodes` points, rounded up to an odd count so the
/// panel count is even.
pub fn nodes_and_weights(rule: Rule, a: f64, b: f64, nodes: usize) -> Vec<(f64, f64)> {
    let len = b - a;
    let at = |i: usize, panels: usize| if i == panels { b } else { a + len * (i as f64) / (panels as f64) };
    match rule {
        Rule::Midpoint => {
            let h = len / nodes as f64;
            (0..nodes).map(|i| (a + len * (i as f64 + 0.5) / nodes as f64, h)).collect()
        }
        Rule::Trapezoid => {
            let panels = nodes - 1;
            let h = len / panels as f64;
            (0..=panels)
                .map(|i| (at(i, panels), if i == 0 || i == panels { 0.5 * h } else { h }))
                .collect()
        }
        Rule::Simpson => {
            let mut panels = nodes - 1;
            if panels % 2 == 1 {
                panels += 1;
            }
            let h = len / panels as f64;
            (0..=panels)
                .map(|i| {
                    let w = if i == 0 || i == panels {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    (at(i, panels), w * h / 3.0)
                })
                .collect()
        }
    }
}

fn with_refinement<F>(cfg: &QuadratureConfig, mut compute: F) -> Result<Interval>
where
    F: FnMut(&QuadratureConfig) -> Result<Interval>,
{
    cfg.validate()?;
    let mut current = compute(cfg)?;
    let Some(tol) = cfg.refine_until else {
        return Ok(current);
    };
    let mut distance = f64::INFINITY;
    for level in 1..=MAX_REFINEMENTS {
        let next = compute(&cfg.refined(level))?;
        distance = next.hausdorff(&current);
        current = next;
        if distance < tol {
            return Ok(current);
        }
    }
    Err(Error::QuadratureDivergence { tolerance: tol, distance })
}

fn quad_1d(f: &IvFunction1D, cfg: &QuadratureConfig) -> Result<Interval> {
    let dom = f.domain();
    let mut acc = IntervalSum::default();
    for (t, w) in nodes_and_weights(cfg.rule, dom.lo(), dom.hi(), cfg.nodes_per_axis) {
        acc.add_weighted(w, f.eval_in_domain(t)?);
    }
    Ok(acc.value())
}

/// `∫ F` over the function's segment, endpoint by endpoint.
pub fn ir_integral_1d(f: &IvFunction1D, cfg: &QuadratureConfig) -> Result<Interval> {
    with_refinement(cfg, |c| quad_1d(f, c))
}

/// `(1/(b-a)) ∫ F`.
pub fn mean_1d(f: &IvFunction1D, cfg: &QuadratureConfig) -> Result<Interval> {
    let dom = f.domain();
    ir_integral_1d(f, cfg)?.scale(1.0 / dom.width())
}

/// Real-valued integral with the same rule, used for `∫ h`.
pub fn integrate_scalar<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let run = |c: &QuadratureConfig| -> Result<Interval> {
        let mut acc = CompensatedSum::default();
        for (t, w) in nodes_and_weights(c.rule, a, b, c.nodes_per_axis) {
            let v = f(t);
            if !v.is_finite() {
                return Err(Error::NonFinite { at: format!("{t}"), value: v });
            }
            acc.add(w * v);
        }
        Ok(Interval::point(acc.value()))
    };
    Ok(with_refinement(cfg, run)?.lo())
}

fn quad_2d(f: &IvFunction2D, cfg: &QuadratureConfig) -> Result<Interval> {
    let r = f.domain();
    let xs = nodes_and_weights(cfg.rule, r.a, r.b, cfg.nodes_per_axis);
    let ys = nodes_and_weights(cfg.rule, r.c, r.d, cfg.nodes_per_axis);
    let rows: Vec<Interval> = xs
        .par_iter()
        .map(|&(x, _)| {
            let mut acc = IntervalSum::default();
            for &(y, wy) in &ys {
                acc.add_weighted(wy, f.eval_in_domain(x, y)?);
            }
            Ok(acc.value())
        })
        .collect::<Result<_>>()?;
    let mut acc = IntervalSum::default();
    for (&(_, wx), row) in xs.iter().zip(&rows) {
        acc.add_weighted(wx, *row);
    }
    Ok(acc.value())
}

/// `∬_Δ F dA` by iterated quadrature.
pub fn id_integral_2d(f: &IvFunction2D, cfg: &QuadratureConfig) -> Result<Interval> {
    with_refinement(cfg, |c| quad_2d(f, c))
}

/// `(1/|Δ|) ∬_Δ F dA`.
pub fn mean_2d(f: &IvFunction2D, cfg: &QuadratureConfig) -> Result<Interval> {
    id_integral_2d(f, cfg)?.scale(1.0 / f.domain().area())
}

/// Where each cell's tag sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "rule", content = "seed")]
pub enum TagRule {
    Midpoint,
    Left,
    Right,
    Random(u64),
}

/// One subinterval `[lo, hi]` of a tagged partition with its tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaggedCell {
    pub lo: f64,
    pub hi: f64,
    pub tag: f64,
}

impl TaggedCell {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Uniform tagged partition `P₁ × P₂` of a rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSpec {
    pub domain: Rectangle,
    pub m: usize,
    pub n: usize,
    pub tag_rule: TagRule,
}

impl PartitionSpec {
    pub fn uniform(domain: Rectangle, m: usize, n: usize, tag_rule: TagRule) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Config(format!("partition needs m, n >= 1, got {m}×{n}")));
        }
        Ok(PartitionSpec { domain, m, n, tag_rule })
    }

    /// Mesh bound δ: the widest subinterval, nudged up so every width is < δ.
    pub fn delta(&self) -> f64 {
        let w = self.domain.width() / self.m as f64;
        let h = self.domain.height() / self.n as f64;
        w.max(h) * (1.0 + 1e-12)
    }

    fn axis(&self, lo: f64, hi: f64, count: usize, stream: u64) -> Vec<TaggedCell> {
        let at = |i: usize| if i == count { hi } else { lo + (hi - lo) * i as f64 / count as f64 };
        let mut rng = match self.tag_rule {
            TagRule::Random(seed) => {
                let mut r = ChaCha8Rng::seed_from_u64(seed);
                r.set_stream(stream);
                Some(r)
            }
            _ => None,
        };
        (0..count)
            .map(|i| {
                let (l, h) = (at(i), at(i + 1));
                let tag = match self.tag_rule {
                    TagRule::Midpoint => 0.5 * (l + h),
                    TagRule::Left => l,
                    TagRule::Right => h,
                    TagRule::Random(_) => {
                        let u: f64 = rng.as_mut().unwrap().gen();
                        (l + u * (h - l)).clamp(l, h)
                    }
                };
                TaggedCell { lo: l, hi: h, tag }
            })
            .collect()
    }

    /// Tagged partition `P₁` of `[a, b]`.
    pub fn x_cells(&self) -> Vec<TaggedCell> {
        self.axis(self.domain.a, self.domain.b, self.m, 0)
    }

    /// Tagged partition `P₂` of `[c, d]`.
    pub fn y_cells(&self) -> Vec<TaggedCell> {
        self.axis(self.domain.c, self.domain.d, self.n, 1)
    }
}

/// `S(F, P, δ, Δ) = Σᵢ Σⱼ F(ξᵢ, ηⱼ) ΔAᵢⱼ`.
pub fn integral_sum(f: &IvFunction2D, p: &PartitionSpec) -> Result<Interval> {
    if f.domain() != p.domain {
        return Err(Error::DomainMismatch(f.domain().to_string(), p.domain.to_string()));
    }
    let xs = p.x_cells();
    let ys = p.y_cells();
    let rows: Vec<Interval> = xs
        .par_iter()
        .map(|cx| {
            let mut acc = IntervalSum::default();
            for cy in &ys {
                acc.add_weighted(cx.width() * cy.width(), f.eval_in_domain(cx.tag, cy.tag)?);
            }
            Ok(acc.value())
        })
        .collect::<Result<_>>()?;
    let mut acc = IntervalSum::default();
    for row in rows {
        acc.add_weighted(1.0, row);
    }
    Ok(acc.value())
}

/// `Σᵢ F(ξᵢ) Δxᵢ` over `cells` uniform subintervals, tagged as `P₁` would be.
pub fn integral_sum_1d(f: &IvFunction1D, cells: usize, tag_rule: TagRule) -> Result<Interval> {
    let dom = f.domain();
    let rect = Rectangle::new(dom.lo(), dom.hi(), 0.0, 1.0)?;
    let p = PartitionSpec::uniform(rect, cells, 1, tag_rule)?;
    let mut acc = IntervalSum::default();
    for cx in p.x_cells() {
        acc.add_weighted(cx.width(), f.eval_in_domain(cx.tag)?);
    }
    Ok(acc.value())
}
