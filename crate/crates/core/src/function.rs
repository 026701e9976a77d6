//! Interval-valued functions of one and two variables.
//!
//! A function is a pair of real endpoint functions. Evaluation returns the
//! interval `[lower(p), upper(p)]` and fails if the pair is out of order at
//! `p`; ordering is never proven globally.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Expr, Var};
use crate::interval::Interval;

type Eval2 = dyn Fn(f64, f64) -> Result<Interval> + Send + Sync;
type Eval1 = dyn Fn(f64) -> Result<Interval> + Send + Sync;

// Points produced by convex combinations may land an ulp outside the domain.
const DOMAIN_SLACK: f64 = 1e-12;

fn within(v: f64, lo: f64, hi: f64) -> bool {
    let slack = DOMAIN_SLACK * lo.abs().max(hi.abs()).max(1.0);
    v >= lo - slack && v <= hi + slack
}

/// Axis-aligned rectangle `[a,b] × [c,d]` with `a < b`, `c < d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Rectangle {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Rectangle {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) || a >= b || c >= d {
            return Err(Error::InvalidDomain(format!("[{a},{b}]×[{c},{d}] needs a<b and c<d")));
        }
        Ok(Rectangle { a, b, c, d })
    }

    pub fn unit_square() -> Self {
        Rectangle { a: 0.0, b: 1.0, c: 0.0, d: 1.0 }
    }

    pub fn x_range(&self) -> Interval {
        Interval::from_bounds_unchecked(self.a, self.b)
    }

    pub fn y_range(&self) -> Interval {
        Interval::from_bounds_unchecked(self.c, self.d)
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn height(&self) -> f64 {
        self.d - self.c
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.a + self.b), 0.5 * (self.c + self.d))
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        within(x, self.a, self.b) && within(y, self.c, self.d)
    }
}

impl TryFrom<[f64; 4]> for Rectangle {
    type Error = Error;

    fn try_from(v: [f64; 4]) -> Result<Self> {
        Rectangle::new(v[0], v[1], v[2], v[3])
    }
}

impl From<Rectangle> for [f64; 4] {
    fn from(r: Rectangle) -> Self {
        [r.a, r.b, r.c, r.d]
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]×[{}, {}]", self.a, self.b, self.c, self.d)
    }
}

/// A closed segment `[a, b]` with `a < b`.
pub fn segment(a: f64, b: f64) -> Result<Interval> {
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(Error::InvalidDomain(format!("[{a},{b}] needs a<b")));
    }
    Ok(Interval::from_bounds_unchecked(a, b))
}

fn pair(lower: f64, upper: f64, at: impl FnOnce() -> String) -> Result<Interval> {
    if !lower.is_finite() {
        return Err(Error::NonFinite { at: at(), value: lower });
    }
    if !upper.is_finite() {
        return Err(Error::NonFinite { at: at(), value: upper });
    }
    if lower > upper {
        return Err(Error::EndpointOrder { at: at(), lower, upper });
    }
    Ok(Interval::from_bounds_unchecked(lower, upper))
}

/// How two functions are combined pointwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Combination {
    Sum,
    Scale(f64),
    Product,
}

/// Interval-valued function on a rectangle.
#[derive(Clone)]
pub struct IvFunction2D {
    eval: Arc<Eval2>,
    domain: Rectangle,
    degenerate: bool,
    label: String,
}

impl fmt::Debug for IvFunction2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IvFunction2D")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("degenerate", &self.degenerate)
            .finish()
    }
}

impl IvFunction2D {
    /// Endpoint expressions over `x` and `y`.
    pub fn from_exprs(lower: Expr, upper: Expr, domain: Rectangle) -> Result<Self> {
        for e in [&lower, &upper] {
            if e.uses(Var::T) {
                return Err(Error::Config(format!("'{e}' uses t; two-variable functions take x and y")));
            }
        }
        let degenerate = lower == upper;
        let label = if degenerate { format!("[{lower}]") } else { format!("[{lower}, {upper}]") };
        Ok(IvFunction2D {
            eval: Arc::new(move |x, y| pair(lower.eval(x, y), upper.eval(x, y), || format!("({x}, {y})"))),
            domain,
            degenerate,
            label,
        })
    }

    pub fn parse(lower: &str, upper: &str, domain: Rectangle) -> Result<Self> {
        Self::from_exprs(Expr::parse(lower)?, Expr::parse(upper)?, domain)
    }

    /// Point-interval function `[f, f]`.
    pub fn point_valued(f: &str, domain: Rectangle) -> Result<Self> {
        let e = Expr::parse(f)?;
        Self::from_exprs(e.clone(), e, domain)
    }

    /// Builds a function from native endpoint closures.
    pub fn from_fns<L, U>(label: impl Into<String>, domain: Rectangle, lower: L, upper: U) -> Self
    where
        L: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        U: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        IvFunction2D {
            eval: Arc::new(move |x, y| pair(lower(x, y), upper(x, y), || format!("({x}, {y})"))),
            domain,
            degenerate: false,
            label: label.into(),
        }
    }

    /// Point-interval function from a native closure.
    pub fn from_scalar_fn<F>(label: impl Into<String>, domain: Rectangle, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        IvFunction2D {
            eval: Arc::new(move |x, y| {
                let v = f(x, y);
                pair(v, v, || format!("({x}, {y})"))
            }),
            domain,
            degenerate: true,
            label: label.into(),
        }
    }

    pub fn constant(value: Interval, domain: Rectangle) -> Self {
        IvFunction2D {
            eval: Arc::new(move |_, _| Ok(value)),
            domain,
            degenerate: value.is_point(),
            label: value.to_string(),
        }
    }

    pub fn domain(&self) -> Rectangle {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// True when the function is point-valued by construction.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<Interval> {
        if !self.domain.contains(x, y) {
            return Err(Error::Domain { x, y, domain: self.domain.to_string() });
        }
        (self.eval)(x, y)
    }

    /// Evaluation without the domain check, for callers that generate points
    /// from the domain themselves.
    pub(crate) fn eval_in_domain(&self, x: f64, y: f64) -> Result<Interval> {
        (self.eval)(x, y)
    }

    /// `y ↦ F(x0, y)` on `[c, d]`.
    pub fn section_x(&self, x0: f64) -> Result<IvFunction1D> {
        if !within(x0, self.domain.a, self.domain.b) {
            return Err(Error::Domain { x: x0, y: self.domain.c, domain: self.domain.to_string() });
        }
        let inner = self.eval.clone();
        Ok(IvFunction1D {
            eval: Arc::new(move |y| inner(x0, y)),
            domain: self.domain.y_range(),
            degenerate: self.degenerate,
            label: format!("{}|x={x0}", self.label),
        })
    }

    /// `x ↦ F(x, y0)` on `[a, b]`.
    pub fn section_y(&self, y0: f64) -> Result<IvFunction1D> {
        if !within(y0, self.domain.c, self.domain.d) {
            return Err(Error::Domain { x: self.domain.a, y: y0, domain: self.domain.to_string() });
        }
        let inner = self.eval.clone();
        Ok(IvFunction1D {
            eval: Arc::new(move |x| inner(x, y0)),
            domain: self.domain.x_range(),
            degenerate: self.degenerate,
            label: format!("{}|y={y0}", self.label),
        })
    }

    pub fn combine(&self, other: &IvFunction2D, kind: Combination) -> Result<IvFunction2D> {
        if let Combination::Scale(alpha) = kind {
            return self.scale(alpha);
        }
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(self.domain.to_string(), other.domain.to_string()));
        }
        let (f, g) = (self.eval.clone(), other.eval.clone());
        let eval: Arc<Eval2> = match kind {
            Combination::Sum => Arc::new(move |x, y| Ok(f(x, y)? + g(x, y)?)),
            Combination::Product => Arc::new(move |x, y| f(x, y)?.mul_nonneg(&g(x, y)?)),
            Combination::Scale(_) => unreachable!(),
        };
        let op = if kind == Combination::Sum { "+" } else { "·" };
        Ok(IvFunction2D {
            eval,
            domain: self.domain,
            degenerate: self.degenerate && other.degenerate,
            label: format!("({} {op} {})", self.label, other.label),
        })
    }

    pub fn sum(&self, other: &IvFunction2D) -> Result<IvFunction2D> {
        self.combine(other, Combination::Sum)
    }

    pub fn product(&self, other: &IvFunction2D) -> Result<IvFunction2D> {
        self.combine(other, Combination::Product)
    }

    pub fn scale(&self, alpha: f64) -> Result<IvFunction2D> {
        if alpha < 0.0 || !alpha.is_finite() {
            return Err(Error::NegativeScalar(alpha));
        }
        let f = self.eval.clone();
        Ok(IvFunction2D {
            eval: Arc::new(move |x, y| f(x, y)?.scale(alpha)),
            domain: self.domain,
            degenerate: self.degenerate,
            label: format!("{alpha}·{}", self.label),
        })
    }
}

/// Interval-valued function on a segment.
#[derive(Clone)]
pub struct IvFunction1D {
    eval: Arc<Eval1>,
    domain: Interval,
    degenerate: bool,
    label: String,
}

impl fmt::Debug for IvFunction1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IvFunction1D")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("degenerate", &self.degenerate)
            .finish()
    }
}

impl IvFunction1D {
    /// Endpoint expressions in one variable, written with `x` or `t`.
    pub fn from_exprs(lower: Expr, upper: Expr, domain: Interval) -> Result<Self> {
        for e in [&lower, &upper] {
            if e.uses(Var::Y) {
                return Err(Error::Config(format!("'{e}' uses y; one-variable functions take x or t")));
            }
        }
        let domain = segment(domain.lo(), domain.hi())?;
        let degenerate = lower == upper;
        let label = if degenerate { format!("[{lower}]") } else { format!("[{lower}, {upper}]") };
        Ok(IvFunction1D {
            eval: Arc::new(move |t| pair(lower.eval(t, 0.0), upper.eval(t, 0.0), || format!("{t}"))),
            domain,
            degenerate,
            label,
        })
    }

    pub fn parse(lower: &str, upper: &str, a: f64, b: f64) -> Result<Self> {
        Self::from_exprs(Expr::parse(lower)?, Expr::parse(upper)?, segment(a, b)?)
    }

    pub fn point_valued(f: &str, a: f64, b: f64) -> Result<Self> {
        let e = Expr::parse(f)?;
        Self::from_exprs(e.clone(), e, segment(a, b)?)
    }

    pub fn from_fns<L, U>(label: impl Into<String>, a: f64, b: f64, lower: L, upper: U) -> Result<Self>
    where
        L: Fn(f64) -> f64 + Send + Sync + 'static,
        U: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Ok(IvFunction1D {
            eval: Arc::new(move |t| pair(lower(t), upper(t), || format!("{t}"))),
            domain: segment(a, b)?,
            degenerate: false,
            label: label.into(),
        })
    }

    pub fn constant(value: Interval, a: f64, b: f64) -> Result<Self> {
        Ok(IvFunction1D {
            eval: Arc::new(move |_| Ok(value)),
            domain: segment(a, b)?,
            degenerate: value.is_point(),
            label: value.to_string(),
        })
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn eval(&self, t: f64) -> Result<Interval> {
        if !within(t, self.domain.lo(), self.domain.hi()) {
            return Err(Error::Domain { x: t, y: f64::NAN, domain: self.domain.to_string() });
        }
        (self.eval)(t)
    }

    pub(crate) fn eval_in_domain(&self, t: f64) -> Result<Interval> {
        (self.eval)(t)
    }

    pub fn combine(&self, other: &IvFunction1D, kind: Combination) -> Result<IvFunction1D> {
        if let Combination::Scale(alpha) = kind {
            return self.scale(alpha);
        }
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(self.domain.to_string(), other.domain.to_string()));
        }
        let (f, g) = (self.eval.clone(), other.eval.clone());
        let eval: Arc<Eval1> = match kind {
            Combination::Sum => Arc::new(move |t| Ok(f(t)? + g(t)?)),
            Combination::Product => Arc::new(move |t| f(t)?.mul_nonneg(&g(t)?)),
            Combination::Scale(_) => unreachable!(),
        };
        let op = if kind == Combination::Sum { "+" } else { "·" };
        Ok(IvFunction1D {
            eval,
            domain: self.domain,
            degenerate: self.degenerate && other.degenerate,
            label: format!("({} {op} {})", self.label, other.label),
        })
    }

    pub fn product(&self, other: &IvFunction1D) -> Result<IvFunction1D> {
        self.combine(other, Combination::Product)
    }

    pub fn scale(&self, alpha: f64) -> Result<IvFunction1D> {
        if alpha < 0.0 || !alpha.is_finite() {
            return Err(Error::NegativeScalar(alpha));
        }
        let f = self.eval.clone();
        Ok(IvFunction1D {
            eval: Arc::new(move |t| f(t)?.scale(alpha)),
            domain: self.domain,
            degenerate: self.degenerate,
            label: format!("{alpha}·{}", self.label),
        })
    }
}

/// Textual function description, `{ "lower", "upper", "domain" }`.
///
/// `domain` holds `[a, b]` for one variable or `[a, b, c, d]` for two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub lower: String,
    pub upper: String,
    pub domain: Vec<f64>,
}

/// Either kind of interval-valued function.
#[derive(Debug, Clone)]
pub enum AnyFunction {
    One(IvFunction1D),
    Two(IvFunction2D),
}

impl AnyFunction {
    pub fn arity(&self) -> &'static str {
        match self {
            AnyFunction::One(_) => "one-variable",
            AnyFunction::Two(_) => "two-variable",
        }
    }
}

impl FunctionSpec {
    pub fn build(&self) -> Result<AnyFunction> {
        let lower = Expr::parse(&self.lower)?;
        let upper = Expr::parse(&self.upper)?;
        match self.domain.as_slice() {
            &[a, b] => Ok(AnyFunction::One(IvFunction1D::from_exprs(lower, upper, segment(a, b)?)?)),
            &[a, b, c, d] => Ok(AnyFunction::Two(IvFunction2D::from_exprs(lower, upper, Rectangle::new(a, b, c, d)?)?)),
            other => Err(Error::InvalidDomain(format!("expected 2 or 4 bounds, got {}", other.len()))),
        }
    }
}
