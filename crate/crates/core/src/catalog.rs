//! Named functions with their domains attached.

use crate::error::{Error, Result};
use crate::function::{segment, AnyFunction, IvFunction1D, IvFunction2D, Rectangle};
use crate::expr::Expr;

struct Entry {
    name: &'static str,
    lower: &'static str,
    upper: &'static str,
    domain: &'static [f64],
}

const ENTRIES: &[Entry] = &[
    // [st, s+t] with s ↦ x, t ↦ y
    Entry { name: "paper-id-example", lower: "x*y", upper: "x+y", domain: &[0.0, 1.0, 1.0, 2.0] },
    Entry { name: "paper-mt1-example", lower: "x*y", upper: "4*x*y", domain: &[0.0, 1.0, 1.0, 2.0] },
    Entry {
        name: "paper-coord-counterexample",
        lower: "x*y",
        upper: "(6-exp(x))*(6-exp(y))",
        domain: &[0.0, 1.0, 0.0, 1.0],
    },
    Entry { name: "quadratic-band", lower: "x^2+1", upper: "12-x^2", domain: &[0.0, 2.0] },
    Entry { name: "linear-double", lower: "x", upper: "2*x", domain: &[1.0, 2.0] },
    Entry { name: "linear-triple", lower: "x", upper: "3*x", domain: &[1.0, 2.0] },
];

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|e| e.name)
}

/// Names of the two-variable entries.
pub fn names_2d() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().filter(|e| e.domain.len() == 4).map(|e| e.name)
}

pub fn catalog(name: &str) -> Result<AnyFunction> {
    let entry = ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownCatalogEntry(name.to_string()))?;
    let lower = Expr::parse(entry.lower)?;
    let upper = Expr::parse(entry.upper)?;
    let f = match *entry.domain {
        [a, b] => AnyFunction::One(IvFunction1D::from_exprs(lower, upper, segment(a, b)?)?.with_label(name)),
        [a, b, c, d] => AnyFunction::Two(IvFunction2D::from_exprs(lower, upper, Rectangle::new(a, b, c, d)?)?.with_label(name)),
        _ => unreachable!("catalog domains have 2 or 4 bounds"),
    };
    Ok(f)
}

pub fn catalog_2d(name: &str) -> Result<IvFunction2D> {
    match catalog(name)? {
        AnyFunction::Two(f) => Ok(f),
        other => Err(Error::CatalogArity { name: name.into(), found: other.arity(), expected: "two-variable" }),
    }
}

pub fn catalog_1d(name: &str) -> Result<IvFunction1D> {
    match catalog(name)? {
        AnyFunction::One(f) => Ok(f),
        other => Err(Error::CatalogArity { name: name.into(), found: other.arity(), expected: "one-variable" }),
    }
}
