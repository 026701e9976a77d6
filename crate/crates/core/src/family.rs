//! Seeded random coordinated-convex test functions.
//!
//! A member is `F = [q, K - r]` on a rectangle in the closed first quadrant,
//! where `q` and `r` are biquadratic polynomials with nonnegative
//! coefficients. Each monomial `xⁱyʲ` is convex in either variable once the
//! other is fixed at a nonnegative value, so `q` is coordinated convex and
//! `K - r` coordinated concave. `K` is the smallest constant with
//! `K - r ≥ q`; both polynomials increase in each variable, so it is
//! attained at the far corner.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::function::{IvFunction2D, Rectangle};

pub const SEED_COUNT: usize = 32;
pub const DEFAULT_BASE_SEED: u64 = 42;

/// `Σ c[i][j] xⁱ yʲ` for `i, j ∈ {0, 1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Biquadratic {
    pub coeffs: [[f64; 3]; 3],
}

impl Biquadratic {
    pub fn random(rng: &mut impl Rng) -> Self {
        let mut coeffs = [[0.0; 3]; 3];
        for row in &mut coeffs {
            for c in row.iter_mut() {
                *c = rng.gen_range(0.0..1.0);
            }
        }
        Biquadratic { coeffs }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let row = |i: usize| {
            let c = &self.coeffs[i];
            c[0] + y * (c[1] + y * c[2])
        };
        row(0) + x * (row(1) + x * row(2))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub seed: u64,
    pub domain: Rectangle,
    pub q: Biquadratic,
    pub r: Biquadratic,
    pub k: f64,
}

impl FamilyMember {
    pub fn generate(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = rng.gen_range(0.0..1.0);
        let c = rng.gen_range(0.0..1.0);
        let b = a + rng.gen_range(0.5..2.0);
        let d = c + rng.gen_range(0.5..2.0);
        let domain = Rectangle::new(a, b, c, d).expect("positive widths");
        Self::draw(seed, domain, &mut rng)
    }

    /// A member on a given domain, which must lie in the closed first quadrant.
    pub fn generate_on(seed: u64, domain: Rectangle) -> Self {
        assert!(domain.a >= 0.0 && domain.c >= 0.0, "family members live on x, y >= 0");
        Self::draw(seed, domain, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    fn draw(seed: u64, domain: Rectangle, rng: &mut ChaCha8Rng) -> Self {
        let q = Biquadratic::random(rng);
        let r = Biquadratic::random(rng);
        let k = q.eval(domain.b, domain.d) + r.eval(domain.b, domain.d);
        FamilyMember { seed, domain, q, r, k }
    }

    pub fn function(&self) -> IvFunction2D {
        let (q, r, k) = (self.q, self.r, self.k);
        // K - r ≥ q can lose an ulp at the far corner
        IvFunction2D::from_fns(
            format!("family-{}", self.seed),
            self.domain,
            move |x, y| q.eval(x, y),
            move |x, y| (k - r.eval(x, y)).max(q.eval(x, y)),
        )
    }
}

/// The per-run seed list, drawn from a generator seeded with `base`.
pub fn seed_list(base: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    (0..SEED_COUNT).map(|_| rng.next_u64()).collect()
}
