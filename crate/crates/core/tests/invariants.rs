use ivhh::convexity::{check_h_convex_1d, CheckMode, HFunction, SamplingSpec};
use ivhh::expr::{BinOp, Expr, Var};
use ivhh::function::{IvFunction1D, IvFunction2D, Rectangle};
use ivhh::hh::{chain_mt1, chain_mt2, chain_mt3, chain_zhtm1, ChainOptions, InclusionReport};
use ivhh::integration::{id_integral_2d, ir_integral_1d, QuadratureConfig};
use ivhh::Interval;
use proptest::prelude::*;

fn interval() -> impl Strategy<Value = Interval> {
    (-50.0..50.0f64, 0.0..20.0f64).prop_map(|(lo, w)| Interval::new(lo, lo + w).unwrap())
}

fn nonneg_interval() -> impl Strategy<Value = Interval> {
    (0.0..20.0f64, 0.0..20.0f64).prop_map(|(lo, w)| Interval::new(lo, lo + w).unwrap())
}

/// A pair `A ⊇ B`.
fn nested(base: impl Strategy<Value = Interval>) -> impl Strategy<Value = (Interval, Interval)> {
    (base, 0.0..1.0f64, 0.0..1.0f64).prop_map(|(a, s, u)| {
        let lo = a.lo() + s * a.width();
        let hi = lo + u * (a.hi() - lo);
        (a, Interval::new(lo, hi).unwrap())
    })
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..1000).prop_map(|n| Expr::num(n as f64 / 100.0)),
        (1u32..100).prop_map(|n| Expr::num(-(n as f64))),
        Just(Expr::var(Var::X)),
        Just(Expr::var(Var::Y)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Exp(Box::new(e))),
            (inner.clone(), inner.clone(), 0..4usize).prop_map(|(l, r, k)| {
                let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][k];
                Expr::bin(op, l, r)
            }),
            (inner, 0u32..4).prop_map(|(l, n)| Expr::bin(BinOp::Pow, l, Expr::num(n as f64))),
        ]
    })
}

fn same_value(a: f64, b: f64) -> bool {
    (a.is_nan() && b.is_nan()) || a == b || (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// `[p, p + w]` on the unit square with `p` affine and `w` a nonnegative concave quadratic.
fn affine_pair(c: [f64; 6]) -> IvFunction2D {
    IvFunction2D::from_fns(
        "affine",
        Rectangle::unit_square(),
        move |x, y| c[0] + c[1] * x + c[2] * y,
        move |x, y| c[0] + c[1] * x + c[2] * y + c[3] + c[4] * x * (1.0 - x) + c[5] * y * (1.0 - y),
    )
}

fn terms(rep: &InclusionReport) -> Vec<Interval> {
    rep.values()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hausdorff_is_a_metric(a in interval(), b in interval(), c in interval()) {
        prop_assert_eq!(a.hausdorff(&a), 0.0);
        prop_assert_eq!(a.hausdorff(&b), b.hausdorff(&a));
        prop_assert!(a == b || a.hausdorff(&b) > 0.0);
        prop_assert!(a.hausdorff(&c) <= a.hausdorff(&b) + b.hausdorff(&c) + 1e-12);
    }

    #[test]
    fn inclusion_is_a_partial_order((a, b) in nested(interval()), s in 0.0..1.0f64, u in 0.0..1.0f64) {
        prop_assert!(a.includes(&a, 0.0));
        prop_assert!(a.includes(&b, 0.0));
        let lo = b.lo() + s * b.width();
        let c = Interval::new(lo, lo + u * (b.hi() - lo)).unwrap();
        prop_assert!(b.includes(&c, 0.0));
        prop_assert!(a.includes(&c, 0.0));
        if b.includes(&a, 0.0) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn operations_are_isotone((a, a2) in nested(nonneg_interval()), (b, b2) in nested(nonneg_interval()), alpha in 0.0..10.0f64) {
        prop_assert!((a + b).includes(&(a2 + b2), 1e-12));
        let prod = a.mul_nonneg(&b).unwrap();
        let prod2 = a2.mul_nonneg(&b2).unwrap();
        prop_assert!(prod.includes(&prod2, 1e-9));
        prop_assert!(a.scale(alpha).unwrap().includes(&a2.scale(alpha).unwrap(), 1e-12));
    }

    #[test]
    fn points_embed_the_reals(x in 0.0..100.0f64, y in 0.0..100.0f64, alpha in 0.0..10.0f64) {
        let (px, py) = (Interval::point(x), Interval::point(y));
        prop_assert_eq!(px + py, Interval::point(x + y));
        prop_assert_eq!(px.mul_nonneg(&py).unwrap(), Interval::point(x * y));
        prop_assert_eq!(px.scale(alpha).unwrap(), Interval::point(alpha * x));
    }

    #[test]
    fn printing_then_parsing_is_stable(e in expr(), x in -2.0..2.0f64, y in -2.0..2.0f64) {
        let once = Expr::parse(&e.to_string()).unwrap();
        let twice = Expr::parse(&once.to_string()).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(once.to_string(), twice.to_string());
        prop_assert!(same_value(e.eval(x, y), once.eval(x, y)), "{} vs {}", e.eval(x, y), once.eval(x, y));
    }

    #[test]
    fn combination_is_a_homomorphism(c in prop::array::uniform6(0.0..3.0f64), d in prop::array::uniform6(0.0..3.0f64),
                                     x in 0.0..1.0f64, y in 0.0..1.0f64, alpha in 0.0..5.0f64) {
        let (f, g) = (affine_pair(c), affine_pair(d));
        let (fv, gv) = (f.eval(x, y).unwrap(), g.eval(x, y).unwrap());
        prop_assert_eq!(f.sum(&g).unwrap().eval(x, y).unwrap(), fv + gv);
        prop_assert_eq!(f.scale(alpha).unwrap().eval(x, y).unwrap(), fv.scale(alpha).unwrap());
        prop_assert_eq!(f.product(&g).unwrap().eval(x, y).unwrap(), fv.mul_nonneg(&gv).unwrap());
    }

    #[test]
    fn sections_agree_with_the_function(c in prop::array::uniform6(0.0..3.0f64), x0 in 0.0..1.0f64, y0 in 0.0..1.0f64) {
        let f = affine_pair(c);
        prop_assert_eq!(f.section_x(x0).unwrap().eval(y0).unwrap(), f.eval(x0, y0).unwrap());
        prop_assert_eq!(f.section_y(y0).unwrap().eval(x0).unwrap(), f.eval(x0, y0).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn integration_is_linear(c in prop::array::uniform6(0.0..3.0f64), d in prop::array::uniform6(0.0..3.0f64), alpha in 0.0..5.0f64) {
        let cfg = QuadratureConfig::with_nodes(129);
        let (f, g) = (affine_pair(c), affine_pair(d));
        let (i_f, i_g) = (id_integral_2d(&f, &cfg).unwrap(), id_integral_2d(&g, &cfg).unwrap());
        prop_assert!(id_integral_2d(&f.sum(&g).unwrap(), &cfg).unwrap().hausdorff(&(i_f + i_g)) < 1e-9);
        prop_assert!(id_integral_2d(&f.scale(alpha).unwrap(), &cfg).unwrap().hausdorff(&i_f.scale(alpha).unwrap()) < 1e-9);
    }

    #[test]
    fn integration_is_monotone(c in prop::array::uniform6(0.0..3.0f64), shrink in 0.0..1.0f64) {
        let cfg = QuadratureConfig::with_nodes(129);
        let f = affine_pair(c);
        // G(p) ⊆ F(p) pointwise: keep the lower endpoint, pull the upper one in
        let g = IvFunction2D::from_fns(
            "inner",
            Rectangle::unit_square(),
            move |x, y| c[0] + c[1] * x + c[2] * y,
            move |x, y| c[0] + c[1] * x + c[2] * y + shrink * (c[3] + c[4] * x * (1.0 - x) + c[5] * y * (1.0 - y)),
        );
        prop_assert!(id_integral_2d(&f, &cfg).unwrap().includes(&id_integral_2d(&g, &cfg).unwrap(), 1e-9));
    }

    #[test]
    fn chain_links_compose(c in prop::array::uniform6(0.0..3.0f64)) {
        let rep = chain_mt1(&affine_pair(c), &ChainOptions::default()).unwrap();
        prop_assert!(rep.holds());
        let t = terms(&rep);
        for i in 0..rep.links.len().saturating_sub(1) {
            let (l1, l2) = (&rep.links[i], &rep.links[i + 1]);
            if l1.holds && l2.holds {
                prop_assert!(t[i].includes(&t[i + 2], l1.tolerance + l2.tolerance));
            }
        }
    }

    #[test]
    fn chains_scale_with_the_function(c in prop::array::uniform6(0.0..3.0f64), alpha in 0.0..5.0f64) {
        let f = affine_pair(c);
        let opts = ChainOptions::default();
        let base = chain_mt1(&f, &opts).unwrap();
        let scaled = chain_mt1(&f.scale(alpha).unwrap(), &opts).unwrap();
        for (a, b) in terms(&base).iter().zip(terms(&scaled)) {
            prop_assert!(a.scale(alpha).unwrap().hausdorff(&b) <= 1e-12 * (1.0 + b.hi().abs()));
        }
        if alpha > 0.0 {
            let verdicts = |r: &InclusionReport| r.links.iter().map(|l| l.holds).collect::<Vec<_>>();
            prop_assert_eq!(verdicts(&base), verdicts(&scaled));
        }
    }

    #[test]
    fn constant_products_satisfy_the_coefficient_identity(c in nonneg_interval(), a in 0.0..3.0f64, w in 0.5..3.0f64) {
        let f = IvFunction2D::constant(c, Rectangle::new(a, a + w, a, a + 2.0 * w).unwrap());
        let sq = c.mul_nonneg(&c).unwrap();
        let tol = 1e-12 * (1.0 + sq.hi());
        let mt2 = chain_mt2(&f, &f, &ChainOptions::default()).unwrap();
        for v in terms(&mt2) {
            prop_assert!(v.hausdorff(&sq) <= tol);
        }
        let mt3 = chain_mt3(&f, &f, &ChainOptions::default()).unwrap();
        for v in terms(&mt3) {
            prop_assert!(v.hausdorff(&sq.scale(4.0).unwrap()) <= 4.0 * tol);
        }
    }

    #[test]
    fn point_chains_have_equal_endpoints(k in 0usize..4, s in 0.1..3.0f64) {
        let src = ["x^2", "exp(x)", "(x-0.3)^2+1", "x^4"][k];
        let g = IvFunction1D::point_valued(src, 0.0, s).unwrap();
        let rep = chain_zhtm1(&g, &HFunction::identity(), &ChainOptions::scalar()).unwrap();
        for t in terms(&rep) {
            prop_assert!((t.hi() - t.lo()).abs() <= 1e-9);
        }
        prop_assert!(rep.holds());
        let integral = ir_integral_1d(&g, &QuadratureConfig::default()).unwrap();
        prop_assert_eq!(integral.lo(), integral.hi());
    }

    #[test]
    fn scalar_h_convexity_matches_the_classical_check(k in 0usize..5) {
        let src = ["x^2", "exp(x)", "x^3-3*x^2+5", "(x-1)^2", "5-x^2"][k];
        let f = IvFunction1D::point_valued(src, 0.0, 2.0).unwrap();
        let spec = SamplingSpec { random_samples: 0, ..SamplingSpec::with_mode(CheckMode::Scalar) };
        let verdict = check_h_convex_1d(&f, &HFunction::identity(), &spec).unwrap();
        // f(tx + (1-t)y) <= t f(x) + (1-t) f(y) on the same grid
        let e = Expr::parse(src).unwrap();
        let xs: Vec<f64> = (0..17).map(|i| 2.0 * i as f64 / 16.0).collect();
        let mut convex = true;
        for &x in &xs {
            for &y in &xs {
                for t in (1..8).map(|k| k as f64 / 8.0) {
                    let lhs = e.eval(t * x + (1.0 - t) * y, 0.0);
                    let rhs = t * e.eval(x, 0.0) + (1.0 - t) * e.eval(y, 0.0);
                    convex &= lhs <= rhs + 1e-10;
                }
            }
        }
        prop_assert_eq!(verdict.holds, convex);
    }
}
