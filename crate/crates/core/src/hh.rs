//! Hermite–Hadamard-type inclusion chains for interval-valued functions.
//!
//! Each chain evaluates its terms (midpoint values, integral means, corner
//! averages or corner-product aggregates) and records, for every consecutive
//! pair, whether the left term contains the right one at the link tolerance.
//! A failed link is a finding, not an error.

use serde::{Deserialize, Serialize};

use crate::convexity::{CheckMode, HFunction};
use crate::error::{Error, Result};
use crate::function::{IvFunction1D, IvFunction2D};
use crate::integration::{integrate_scalar, mean_1d, mean_2d, QuadratureConfig};
use crate::interval::Interval;

/// Link tolerance when either side involves a quadrature.
pub const QUADRATURE_TOL: f64 = 1e-7;
/// Link tolerance when both sides are pure evaluations.
pub const EVALUATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ChainId {
    Zhtm1,
    K2,
    K3,
    K4,
    K5,
    K6,
    Mt1,
    Mt2,
    Mt3,
}

impl ChainId {
    pub fn name(self) -> &'static str {
        match self {
            ChainId::Zhtm1 => "zhtm1",
            ChainId::K2 => "k2",
            ChainId::K3 => "k3",
            ChainId::K4 => "k4",
            ChainId::K5 => "k5",
            ChainId::K6 => "k6",
            ChainId::Mt1 => "mt1",
            ChainId::Mt2 => "mt2",
            ChainId::Mt3 => "mt3",
        }
    }

    /// Chains over functions of two variables.
    pub fn is_2d(self) -> bool {
        matches!(self, ChainId::Mt1 | ChainId::Mt2 | ChainId::Mt3)
    }

    /// Chains that take a second function `G`.
    pub fn is_product(self) -> bool {
        matches!(self, ChainId::K3 | ChainId::K4 | ChainId::K5 | ChainId::K6 | ChainId::Mt2 | ChainId::Mt3)
    }
}

/// Which corner products make up `P` in the product chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PmnVariant {
    /// `P` sums `F G` at all four corners.
    #[default]
    FourCorner,
    /// `P` without the `(b, c)` corner, as the aggregate is sometimes stated.
    PaperLiteral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub value: Interval,
    /// Whether the value came out of a quadrature.
    pub quadrature: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainTerms {
    pub chain: ChainId,
    pub terms: Vec<Term>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub from: String,
    pub to: String,
    pub holds: bool,
    pub defect_lo: f64,
    pub defect_hi: f64,
    pub tolerance: f64,
}

impl Link {
    fn judge(from: &Term, to: &Term, tol: f64, mode: CheckMode) -> Link {
        let (defect_lo, defect_hi) = from.value.inclusion_defect(&to.value);
        let holds = match mode {
            CheckMode::Interval => from.value.includes(&to.value, tol),
            CheckMode::Scalar => from.value.lo() <= to.value.lo() + tol,
        };
        Link { from: from.label.clone(), to: to.label.clone(), holds, defect_lo, defect_hi, tolerance: tol }
    }
}

/// Configuration echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainEcho {
    pub quadrature: QuadratureConfig,
    pub quadrature_tol: f64,
    pub evaluation_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<PmnVariant>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub h: Vec<String>,
    pub functions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub chain: ChainTerms,
    pub links: Vec<Link>,
    /// Intermediate quantities (aggregates, means, weight integrals).
    pub aux: Vec<Term>,
    pub mode: CheckMode,
    pub config: ChainEcho,
}

impl InclusionReport {
    pub fn holds(&self) -> bool {
        self.links.iter().all(|l| l.holds)
    }

    pub fn term(&self, label: &str) -> Option<Interval> {
        self.chain.terms.iter().chain(&self.aux).find(|t| t.label == label).map(|t| t.value)
    }

    pub fn values(&self) -> Vec<Interval> {
        self.chain.terms.iter().map(|t| t.value).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainOptions {
    pub quadrature: QuadratureConfig,
    /// Overrides both default link tolerances.
    pub tol: Option<f64>,
    pub mode: CheckMode,
    pub variant: PmnVariant,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions { quadrature: QuadratureConfig::default(), tol: None, mode: CheckMode::Interval, variant: PmnVariant::FourCorner }
    }
}

impl ChainOptions {
    pub fn scalar() -> Self {
        ChainOptions { mode: CheckMode::Scalar, ..Default::default() }
    }

    fn quadrature_tol(&self) -> f64 {
        self.tol.unwrap_or(QUADRATURE_TOL)
    }

    fn evaluation_tol(&self) -> f64 {
        self.tol.unwrap_or(EVALUATION_TOL)
    }

    fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        if let Some(tol) = self.tol {
            if !(tol > 0.0) {
                return Err(Error::Config(format!("tolerance must be > 0, got {tol}")));
            }
        }
        Ok(())
    }
}

struct Builder<'a> {
    chain: ChainId,
    opts: &'a ChainOptions,
    terms: Vec<Term>,
    aux: Vec<Term>,
    h: Vec<String>,
    functions: Vec<String>,
    variant: Option<PmnVariant>,
}

impl<'a> Builder<'a> {
    fn new(chain: ChainId, opts: &'a ChainOptions) -> Result<Self> {
        opts.validate()?;
        Ok(Builder { chain, opts, terms: Vec::new(), aux: Vec::new(), h: Vec::new(), functions: Vec::new(), variant: None })
    }

    fn function(&mut self, label: &str, degenerate: bool) -> Result<()> {
        self.opts.mode.require_degenerate(degenerate, label)?;
        self.functions.push(label.to_string());
        Ok(())
    }

    fn term(&mut self, name: &str, value: Interval, quadrature: bool) {
        self.terms.push(Term { label: format!("{}.{name}", self.chain.name()), value, quadrature });
    }

    fn aux(&mut self, name: &str, value: Interval, quadrature: bool) {
        self.aux.push(Term { label: format!("{}.{name}", self.chain.name()), value, quadrature });
    }

    fn finish(self) -> InclusionReport {
        let links = self
            .terms
            .windows(2)
            .map(|w| {
                let tol = if w[0].quadrature || w[1].quadrature {
                    self.opts.quadrature_tol()
                } else {
                    self.opts.evaluation_tol()
                };
                Link::judge(&w[0], &w[1], tol, self.opts.mode)
            })
            .collect();
        InclusionReport {
            chain: ChainTerms { chain: self.chain, terms: self.terms, tolerance: self.opts.quadrature_tol() },
            links,
            aux: self.aux,
            mode: self.opts.mode,
            config: ChainEcho {
                quadrature: self.opts.quadrature,
                quadrature_tol: self.opts.quadrature_tol(),
                evaluation_tol: self.opts.evaluation_tol(),
                variant: self.variant,
                h: self.h,
                functions: self.functions,
            },
        }
    }
}

fn nonzero_at_half(h: &HFunction) -> Result<f64> {
    let v = h.eval(0.5);
    if v == 0.0 {
        return Err(Error::HZeroAtHalf(h.label().to_string()));
    }
    Ok(v)
}

fn zhtm1_as(chain: ChainId, f: &IvFunction1D, h: &HFunction, opts: &ChainOptions) -> Result<InclusionReport> {
    let mut b = Builder::new(chain, opts)?;
    b.function(f.label(), f.is_degenerate())?;
    b.h.push(h.label().to_string());
    let h_half = nonzero_at_half(h)?;
    let dom = f.domain();
    let (a, bb) = (dom.lo(), dom.hi());

    let t1 = f.eval(0.5 * (a + bb))?.scale(1.0 / (2.0 * h_half))?;
    let t2 = mean_1d(f, &opts.quadrature)?;
    let h_int = h.integral(&opts.quadrature)?;
    let t3 = (f.eval(a)? + f.eval(bb)?).scale(h_int)?;

    b.term("T1", t1, false);
    b.term("T2", t2, true);
    b.term("T3", t3, true);
    b.aux("int_h", Interval::point(h_int), true);
    Ok(b.finish())
}

/// `F(mid)/(2h(½)) ⊇ mean F ⊇ [F(a) + F(b)] ∫₀¹ h`.
pub fn chain_zhtm1(f: &IvFunction1D, h: &HFunction, opts: &ChainOptions) -> Result<InclusionReport> {
    zhtm1_as(ChainId::Zhtm1, f, h, opts)
}

/// The `h(t) = t` case: `F(mid) ⊇ mean F ⊇ (F(a) + F(b))/2`.
pub fn chain_k2(f: &IvFunction1D, opts: &ChainOptions) -> Result<InclusionReport> {
    zhtm1_as(ChainId::K2, f, &HFunction::identity(), opts)
}

/// Both one-variable product inclusions for a pair `h₁` (for `F`), `h₂` (for `G`).
#[derive(Debug, Clone, PartialEq)]
pub struct ProductChains1D {
    /// Midpoint bound: `F(mid)G(mid)/(2h₁(½)h₂(½)) ⊇ mean FG + M ∫h₁(t)h₂(1-t) + N ∫h₁h₂`.
    pub midpoint: InclusionReport,
    /// Integral-mean bound: `mean FG ⊇ M ∫h₁h₂ + N ∫h₁(t)h₂(1-t)`.
    pub mean: InclusionReport,
}

fn products_1d(
    ids: (ChainId, ChainId),
    f: &IvFunction1D,
    g: &IvFunction1D,
    h1: &HFunction,
    h2: &HFunction,
    opts: &ChainOptions,
) -> Result<ProductChains1D> {
    if f.domain() != g.domain() {
        return Err(Error::DomainMismatch(f.domain().to_string(), g.domain().to_string()));
    }
    let h1_half = nonzero_at_half(h1)?;
    let h2_half = nonzero_at_half(h2)?;
    let dom = f.domain();
    let (a, b) = (dom.lo(), dom.hi());
    let q = &opts.quadrature;

    let (fa, fb, ga, gb) = (f.eval(a)?, f.eval(b)?, g.eval(a)?, g.eval(b)?);
    let m = fa.mul_nonneg(&ga)? + fb.mul_nonneg(&gb)?;
    let n = fa.mul_nonneg(&gb)? + fb.mul_nonneg(&ga)?;
    let mean_fg = mean_1d(&f.product(g)?, q)?;
    let same = integrate_scalar(|t| h1.eval(t) * h2.eval(t), 0.0, 1.0, q)?;
    let flipped = integrate_scalar(|t| h1.eval(t) * h2.eval(1.0 - t), 0.0, 1.0, q)?;
    let mid = 0.5 * (a + b);
    let midpoint_value = f.eval(mid)?.mul_nonneg(&g.eval(mid)?)?.scale(1.0 / (2.0 * h1_half * h2_half))?;

    let build = |chain: ChainId, lhs: Interval, lhs_quad: bool, rhs: Interval| -> Result<InclusionReport> {
        let mut bld = Builder::new(chain, opts)?;
        bld.function(f.label(), f.is_degenerate())?;
        bld.function(g.label(), g.is_degenerate())?;
        bld.h = vec![h1.label().to_string(), h2.label().to_string()];
        bld.term("LHS", lhs, lhs_quad);
        bld.term("RHS", rhs, true);
        bld.aux("mean_FG", mean_fg, true);
        bld.aux("M", m, false);
        bld.aux("N", n, false);
        bld.aux("int_h1h2", Interval::point(same), true);
        bld.aux("int_h1h2_flipped", Interval::point(flipped), true);
        Ok(bld.finish())
    };

    let midpoint_rhs = mean_fg + m.scale(flipped)? + n.scale(same)?;
    let mean_rhs = m.scale(same)? + n.scale(flipped)?;
    Ok(ProductChains1D {
        midpoint: build(ids.0, midpoint_value, false, midpoint_rhs)?,
        mean: build(ids.1, mean_fg, true, mean_rhs)?,
    })
}

/// Evaluates both product inclusions, labelled `k3` (midpoint) and `k4` (mean).
pub fn chain_k4_k3(
    f: &IvFunction1D,
    g: &IvFunction1D,
    h1: &HFunction,
    h2: &HFunction,
    opts: &ChainOptions,
) -> Result<ProductChains1D> {
    products_1d((ChainId::K3, ChainId::K4), f, g, h1, h2, opts)
}

/// The `h₁ = h₂ = t` case, labelled by content: `k6` is the midpoint bound
/// `2F(mid)G(mid) ⊇ mean FG + M/6 + N/3`, `k5` the mean bound `mean FG ⊇ M/3 + N/6`.
pub fn chain_k5_k6(f: &IvFunction1D, g: &IvFunction1D, opts: &ChainOptions) -> Result<ProductChains1D> {
    let h = HFunction::identity();
    products_1d((ChainId::K6, ChainId::K5), f, g, &h, &h, opts)
}

/// `F(mid) ⊇ ½[mean_x F(x,mid_y) + mean_y F(mid_x,y)] ⊇ mean_Δ F ⊇ ¼[edge means] ⊇ ¼[corners]`.
pub fn chain_mt1(f: &IvFunction2D, opts: &ChainOptions) -> Result<InclusionReport> {
    let mut b = Builder::new(ChainId::Mt1, opts)?;
    b.function(f.label(), f.is_degenerate())?;
    let r = f.domain();
    let (mx, my) = r.center();
    let q = &opts.quadrature;

    let t1 = f.eval(mx, my)?;
    let t2 = (mean_1d(&f.section_y(my)?, q)? + mean_1d(&f.section_x(mx)?, q)?).scale(0.5)?;
    let t3 = mean_2d(f, q)?;
    let t4 = (mean_1d(&f.section_y(r.c)?, q)?
        + mean_1d(&f.section_y(r.d)?, q)?
        + mean_1d(&f.section_x(r.a)?, q)?
        + mean_1d(&f.section_x(r.b)?, q)?)
    .scale(0.25)?;
    let t5 = (f.eval(r.a, r.c)? + f.eval(r.a, r.d)? + f.eval(r.b, r.c)? + f.eval(r.b, r.d)?).scale(0.25)?;

    b.term("T1", t1, false);
    b.term("T2", t2, true);
    b.term("T3", t3, true);
    b.term("T4", t4, true);
    b.term("T5", t5, false);
    Ok(b.finish())
}

/// Corner-product aggregates of the two-variable product chains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmnAggregates {
    /// Same-corner products.
    pub p: Interval,
    /// Mixed products over corners sharing an edge.
    pub m: Interval,
    /// Mixed products over diagonally opposite corners.
    pub n: Interval,
    pub variant: PmnVariant,
}

impl PmnAggregates {
    pub fn compute(f: &IvFunction2D, g: &IvFunction2D, variant: PmnVariant) -> Result<Self> {
        if f.domain() != g.domain() {
            return Err(Error::DomainMismatch(f.domain().to_string(), g.domain().to_string()));
        }
        let r = f.domain();
        let corners = [(r.a, r.c), (r.a, r.d), (r.b, r.c), (r.b, r.d)];
        let fv: Vec<Interval> = corners.iter().map(|&(x, y)| f.eval(x, y)).collect::<Result<_>>()?;
        let gv: Vec<Interval> = corners.iter().map(|&(x, y)| g.eval(x, y)).collect::<Result<_>>()?;
        let (ac, ad, bc, bd) = (0, 1, 2, 3);
        let fg = |i: usize, j: usize| fv[i].mul_nonneg(&gv[j]);

        let mut p = fg(ac, ac)? + fg(ad, ad)? + fg(bd, bd)?;
        if variant == PmnVariant::FourCorner {
            p = p + fg(bc, bc)?;
        }
        let m = fg(ac, ad)? + fg(ad, ac)? + fg(bc, bd)? + fg(bd, bc)? + fg(bc, ac)? + fg(ac, bc)? + fg(bd, ad)? + fg(ad, bd)?;
        let n = fg(bc, ad)? + fg(ad, bc)? + fg(bd, ac)? + fg(ac, bd)?;
        Ok(PmnAggregates { p, m, n, variant })
    }

    /// `αP + βM + γN`.
    pub fn weighted(&self, alpha: f64, beta: f64, gamma: f64) -> Result<Interval> {
        Ok(self.p.scale(alpha)? + self.m.scale(beta)? + self.n.scale(gamma)?)
    }
}

fn product_2d<'a>(
    chain: ChainId,
    f: &IvFunction2D,
    g: &IvFunction2D,
    opts: &'a ChainOptions,
) -> Result<(Builder<'a>, PmnAggregates, Interval)> {
    let mut b = Builder::new(chain, opts)?;
    b.function(f.label(), f.is_degenerate())?;
    b.function(g.label(), g.is_degenerate())?;
    b.variant = Some(opts.variant);
    let agg = PmnAggregates::compute(f, g, opts.variant)?;
    let mean_fg = mean_2d(&f.product(g)?, &opts.quadrature)?;
    b.aux("mean_FG", mean_fg, true);
    b.aux("P", agg.p, false);
    b.aux("M", agg.m, false);
    b.aux("N", agg.n, false);
    Ok((b, agg, mean_fg))
}

/// `mean_Δ FG ⊇ P/9 + M/18 + N/36`.
pub fn chain_mt2(f: &IvFunction2D, g: &IvFunction2D, opts: &ChainOptions) -> Result<InclusionReport> {
    let (mut b, agg, mean_fg) = product_2d(ChainId::Mt2, f, g, opts)?;
    b.term("LHS", mean_fg, true);
    b.term("RHS", agg.weighted(1.0 / 9.0, 1.0 / 18.0, 1.0 / 36.0)?, false);
    Ok(b.finish())
}

/// `4F(mid)G(mid) ⊇ mean_Δ FG + 5P/36 + 7M/36 + 2N/9`.
pub fn chain_mt3(f: &IvFunction2D, g: &IvFunction2D, opts: &ChainOptions) -> Result<InclusionReport> {
    let (mut b, agg, mean_fg) = product_2d(ChainId::Mt3, f, g, opts)?;
    let (mx, my) = f.domain().center();
    let lhs = f.eval(mx, my)?.mul_nonneg(&g.eval(mx, my)?)?.scale(4.0)?;
    b.term("LHS", lhs, false);
    b.term("RHS", mean_fg + agg.weighted(5.0 / 36.0, 7.0 / 36.0, 2.0 / 9.0)?, true);
    Ok(b.finish())
}
