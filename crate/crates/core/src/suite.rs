//! Canned verification suites: the worked examples and the randomized
//! property checks over the polynomial family.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{catalog_2d, names_2d};
use crate::convexity::{check_coord_convex, check_joint_convex, ConvexityVerdict, SamplingSpec, WitnessPoints};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::family::{seed_list, FamilyMember};
use crate::function::{IvFunction2D, Rectangle};
use crate::hh::{chain_mt1, ChainOptions};
use crate::integration::{id_integral_2d, QuadratureConfig};
use crate::interval::Interval;

/// Distance allowed between a computed value and an exact fraction.
pub const VALUE_TOL: f64 = 1e-8;
/// Link tolerance for the randomized family.
pub const FAMILY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    PaperGolden,
    Properties,
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-golden" => Ok(SuiteName::PaperGolden),
            "properties" => Ok(SuiteName::Properties),
            other => Err(Error::UnknownSuite(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: SuiteName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<u64>,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn holds(&self) -> bool {
        self.cases.iter().all(|c| c.holds)
    }

    pub fn cases_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a CaseResult> + 'a {
        self.cases.iter().filter(move |c| c.name == name)
    }
}

pub fn run_suite(name: SuiteName, base_seed: u64) -> Result<SuiteReport> {
    match name {
        SuiteName::PaperGolden => paper_golden(),
        SuiteName::Properties => properties(base_seed),
    }
}

struct Cases(Vec<CaseResult>);

impl Cases {
    fn push(&mut self, name: &str, seed: Option<u64>, holds: bool, detail: String) {
        self.0.push(CaseResult { name: name.to_string(), seed, holds, detail });
    }

    fn near(&mut self, name: &str, got: Interval, want: Interval, tol: f64) {
        let d = got.hausdorff(&want);
        self.push(name, None, d <= tol, format!("{got} vs {want}, distance {d:e}"));
    }
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).expect("ordered literal")
}

/// Is `w` the anti-diagonal witness `p = (0, 1)`, `q = (1, 0)`, `t = 1/2` (in either order)?
pub fn is_anti_diagonal(points: &WitnessPoints, params: &[f64]) -> bool {
    let WitnessPoints::Pair { p, q } = points else {
        return false;
    };
    let ends = |a: [f64; 2], b: [f64; 2]| a == [0.0, 1.0] && b == [1.0, 0.0];
    (ends(*p, *q) || ends(*q, *p)) && params.first() == Some(&0.5)
}

/// Every worked example, compared against its printed value.
pub fn paper_golden() -> Result<SuiteReport> {
    let mut cases = Cases(Vec::new());
    let cfg = QuadratureConfig::default();
    let three_quarters_three = iv(0.75, 3.0);

    cases.push(
        "equal-chain-inclusion",
        None,
        three_quarters_three.includes(&three_quarters_three, 0.0),
        "[3/4, 3] ⊇ [3/4, 3] at tol 0".into(),
    );

    let upper = Expr::parse("(6-exp(x))*(6-exp(y))")?;
    let (x, y) = (0.3, 0.8);
    let want = (6.0 - f64::exp(x)) * (6.0 - f64::exp(y));
    let reparsed = Expr::parse(&upper.to_string())?;
    cases.push(
        "counterexample-upper-endpoint",
        None,
        upper.eval(x, y) == want && reparsed == upper,
        format!("{upper} at ({x}, {y}) = {}", upper.eval(x, y)),
    );

    let mt1_example = catalog_2d("paper-mt1-example")?;
    cases.near("mt1-example-center", mt1_example.eval(0.5, 1.5)?, three_quarters_three, 0.0);

    let id_example = catalog_2d("paper-id-example")?;
    let unit_height = Rectangle::new(0.0, 1.0, 1.0, 2.0)?;
    cases.push(
        "catalog-domains",
        None,
        id_example.domain() == unit_height
            && mt1_example.domain() == unit_height
            && catalog_2d("paper-coord-counterexample")?.domain() == Rectangle::unit_square(),
        "[0,1]×[1,2], [0,1]×[1,2], [0,1]²".into(),
    );

    cases.near("id-example-integral", id_integral_2d(&id_example, &cfg)?, iv(0.75, 2.0), VALUE_TOL);
    cases.near("mt1-example-integral", id_integral_2d(&mt1_example, &cfg)?, three_quarters_three, VALUE_TOL);

    let counter = catalog_2d("paper-coord-counterexample")?;
    let spec = SamplingSpec::default();
    let coord = check_coord_convex(&counter, &spec)?;
    let sections_hold = coord.sections.as_ref().is_some_and(|s| s.holds);
    cases.push(
        "counterexample-coordinated",
        None,
        coord.holds && sections_hold,
        format!("{}; sections {}", coord.summary(), if sections_hold { "convex" } else { "fail" }),
    );
    let joint = check_joint_convex(&counter, &spec)?;
    let witness = joint.witnesses.iter().find(|w| is_anti_diagonal(&w.points, &w.params));
    cases.push(
        "counterexample-not-jointly-convex",
        None,
        !joint.holds && witness.is_some_and(|w| w.defect >= 0.25 - 1e-9),
        match witness {
            Some(w) => format!("{}; anti-diagonal defect {:e}", joint.summary(), w.defect),
            None => format!("{}; anti-diagonal witness missing", joint.summary()),
        },
    );

    let rep = chain_mt1(&mt1_example, &ChainOptions::default())?;
    for term in &rep.chain.terms {
        cases.near(&term.label, term.value, three_quarters_three, VALUE_TOL);
    }
    cases.push(
        "mt1-example-links",
        None,
        rep.holds(),
        format!("{} of {} links hold", rep.links.iter().filter(|l| l.holds).count(), rep.links.len()),
    );

    Ok(SuiteReport { suite: SuiteName::PaperGolden, base_seed: None, seeds: Vec::new(), cases: cases.0 })
}

fn verdict_note(v: &ConvexityVerdict) -> String {
    let sections = match &v.sections {
        Some(s) if s.holds => "; sections convex".to_string(),
        Some(s) => format!("; {} failing sections", s.failing_sections.len()),
        None => String::new(),
    };
    format!("{}{sections}", v.summary())
}

/// Tensor verdict against the conjunction of section verdicts.
fn lemma_agrees(v: &ConvexityVerdict) -> bool {
    v.sections.as_ref().is_some_and(|s| s.holds == v.holds)
}

/// Randomized invariants over the polynomial family, one round per derived seed.
pub fn properties(base_seed: u64) -> Result<SuiteReport> {
    let seeds = seed_list(base_seed);
    let mut cases = Cases(Vec::new());

    for name in names_2d() {
        let f = catalog_2d(name)?;
        let v = check_coord_convex(&f, &SamplingSpec { seed: base_seed, ..Default::default() })?;
        cases.push("section-lemma", None, lemma_agrees(&v), format!("{name}: {}", verdict_note(&v)));
    }

    for &seed in &seeds {
        let member = FamilyMember::generate(seed);
        let f = member.function();
        let g = FamilyMember::generate_on(!seed, member.domain).function();
        let alpha = ChaCha8Rng::seed_from_u64(seed).gen_range(0.0..4.0);

        let opts = ChainOptions { tol: Some(FAMILY_TOL), ..Default::default() };
        let rep = chain_mt1(&f, &opts)?;
        let worst = rep.links.iter().map(|l| l.defect_lo.max(l.defect_hi)).fold(0.0, f64::max);
        cases.push("family-mt1", Some(seed), rep.holds(), format!("worst link defect {worst:e}"));

        let spec = SamplingSpec { seed, ..Default::default() };
        let base_f = check_coord_convex(&f, &spec)?;
        let base_g = check_coord_convex(&g, &spec)?;
        cases.push("family-coordinated", Some(seed), base_f.holds && base_g.holds, verdict_note(&base_f));
        let both = base_f.holds && base_g.holds;

        let combined: [(&str, IvFunction2D); 3] =
            [("closure-sum", f.sum(&g)?), ("closure-scale", f.scale(alpha)?), ("closure-product", f.product(&g)?)];
        let mut lemma = lemma_agrees(&base_f) && lemma_agrees(&base_g);
        for (name, h) in &combined {
            let v = check_coord_convex(h, &spec)?;
            lemma &= lemma_agrees(&v);
            cases.push(name, Some(seed), !both || v.holds, verdict_note(&v));
        }
        cases.push("section-lemma", Some(seed), lemma, "tensor and section verdicts compared on F, G, F+G, αF, FG".into());
    }

    Ok(SuiteReport { suite: SuiteName::Properties, base_seed: Some(base_seed), seeds, cases: cases.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!("paper-golden".parse::<SuiteName>().unwrap(), SuiteName::PaperGolden);
        assert!(matches!("unknown".parse::<SuiteName>(), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn golden_suite_passes() {
        let rep = paper_golden().unwrap();
        for c in &rep.cases {
            assert!(c.holds, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn anti_diagonal_matcher() {
        let w = WitnessPoints::Pair { p: [1.0, 0.0], q: [0.0, 1.0] };
        assert!(is_anti_diagonal(&w, &[0.5]));
        assert!(!is_anti_diagonal(&w, &[0.25]));
        assert!(!is_anti_diagonal(&WitnessPoints::Segment { x: 0.0, y: 1.0 }, &[0.5]));
    }
}
