//! Helpers shared by the integration suites.
#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rankmetric::{FieldContext, Gf, LinearizedPoly, RdCode};

pub fn ctx(p: u64, e: u32, n: u32) -> Arc<FieldContext> {
    Arc::new(FieldContext::new(p, e, n).unwrap())
}

pub fn nonzero<R: Rng>(ctx: &FieldContext, rng: &mut R) -> Gf {
    ctx.from_int(rng.gen_range(1..ctx.size()))
}

/// A random equivalence `(h, g, σ)`.
pub struct Transform {
    pub h: LinearizedPoly,
    pub g: LinearizedPoly,
    pub sigma: u32,
}

impl Transform {
    /// Arbitrary invertible `h` and `g`.
    pub fn general<R: Rng>(ctx: &Arc<FieldContext>, rng: &mut R) -> Self {
        Transform {
            h: LinearizedPoly::random_invertible(ctx, rng),
            g: LinearizedPoly::random_invertible(ctx, rng),
            sigma: rng.gen_range(0..ctx.e() * ctx.n() as u32),
        }
    }

    /// `h = βx^{q^a}`, so left `F_{q^n}`-linearity survives.
    pub fn semilinear<R: Rng>(ctx: &Arc<FieldContext>, rng: &mut R) -> Self {
        let a = rng.gen_range(0..ctx.n() as i64);
        Transform {
            h: LinearizedPoly::monomial(ctx, a, nonzero(ctx, rng)),
            g: LinearizedPoly::random_invertible(ctx, rng),
            sigma: rng.gen_range(0..ctx.e() * ctx.n() as u32),
        }
    }

    pub fn apply(&self, code: &RdCode) -> RdCode {
        code.apply_equivalence(&self.h, &self.g, self.sigma).unwrap()
    }
}
