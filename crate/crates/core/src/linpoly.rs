//! The algebra of `q`-polynomials `f(x) = Σ a_i x^{q^i}` over `F_{q^n}`.
//!
//! Each polynomial is an `F_q`-linear endomorphism of `F_{q^n}`; composition
//! makes the set an `F_q`-algebra isomorphic to `F_q^{n×n}`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldContext, Gf};
use crate::linalg::{self, Matrix};

/// Dense coefficient vector `(a_0, …, a_{n-1})`.
#[derive(Clone)]
pub struct LinearizedPoly {
    ctx: Arc<FieldContext>,
    coeffs: Vec<Gf>,
}

impl PartialEq for LinearizedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_field(&other.ctx) && self.coeffs == other.coeffs
    }
}

impl Eq for LinearizedPoly {}

impl fmt::Debug for LinearizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match c.log() {
                Some(0) => format!("x^[{i}]"),
                Some(l) => format!("g^{l}·x^[{i}]"),
                None => unreachable!(),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl LinearizedPoly {
    pub fn new(ctx: Arc<FieldContext>, coeffs: Vec<Gf>) -> Result<Self> {
        if coeffs.len() != ctx.n() {
            return Err(Error::BadParams(format!(
                "expected {} coefficients, got {}",
                ctx.n(),
                coeffs.len()
            )));
        }
        Ok(LinearizedPoly { ctx, coeffs })
    }

    pub(crate) fn from_vec(ctx: &Arc<FieldContext>, coeffs: Vec<Gf>) -> Self {
        debug_assert_eq!(coeffs.len(), ctx.n());
        LinearizedPoly {
            ctx: Arc::clone(ctx),
            coeffs,
        }
    }

    pub fn zero(ctx: &Arc<FieldContext>) -> Self {
        Self::from_vec(ctx, vec![Gf::ZERO; ctx.n()])
    }

    /// The polynomial `x`.
    pub fn identity(ctx: &Arc<FieldContext>) -> Self {
        Self::monomial(ctx, 0, Gf::ONE)
    }

    /// `c · x^{q^i}` with `i` reduced modulo `n`.
    pub fn monomial(ctx: &Arc<FieldContext>, i: i64, c: Gf) -> Self {
        let mut v = vec![Gf::ZERO; ctx.n()];
        v[i.rem_euclid(ctx.n() as i64) as usize] = c;
        Self::from_vec(ctx, v)
    }

    /// Uniformly random polynomial.
    pub fn random<R: Rng + ?Sized>(ctx: &Arc<FieldContext>, rng: &mut R) -> Self {
        let coeffs = (0..ctx.n())
            .map(|_| ctx.from_int(rng.gen_range(0..ctx.size())))
            .collect();
        Self::from_vec(ctx, coeffs)
    }

    /// Uniformly random invertible polynomial (by rejection).
    pub fn random_invertible<R: Rng + ?Sized>(ctx: &Arc<FieldContext>, rng: &mut R) -> Self {
        loop {
            let f = Self::random(ctx, rng);
            if f.is_invertible() {
                return f;
            }
        }
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Gf> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx.same_field(&other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn evaluate(&self, x: Gf) -> Gf {
        let ctx = &*self.ctx;
        self.coeffs
            .iter()
            .enumerate()
            .fold(Gf::ZERO, |acc, (i, &a)| {
                ctx.add(acc, ctx.mul(a, ctx.frobenius(x, i as i64)))
            })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let ctx = &*self.ctx;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| ctx.add(a, b))
            .collect();
        Ok(Self::from_vec(&self.ctx, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.neg(a)).collect();
        Self::from_vec(&self.ctx, coeffs)
    }

    /// Left scalar action `α · f`, i.e. `αx ∘ f`.
    pub fn scale(&self, alpha: Gf) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.mul(alpha, a)).collect();
        Self::from_vec(&self.ctx, coeffs)
    }

    /// `self ∘ other`: `h_k = Σ_i f_i · g_{k-i}^{q^i}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        let ctx = &*self.ctx;
        let n = ctx.n();
        let mut h = vec![Gf::ZERO; n];
        for (i, &fi) in self.coeffs.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            for (j, &gj) in other.coeffs.iter().enumerate() {
                if gj.is_zero() {
                    continue;
                }
                let k = (i + j) % n;
                h[k] = ctx.add(h[k], ctx.mul(fi, ctx.frobenius(gj, i as i64)));
            }
        }
        Self::from_vec(&self.ctx, h)
    }

    /// `f^{[s]}`: `b_i = a_{i-s}^{q^s}`, equal to `x^{q^s} ∘ f`.
    pub fn frobenius_shift(&self, s: i64) -> Self {
        let ctx = &*self.ctx;
        let n = ctx.n() as i64;
        let s = s.rem_euclid(n);
        let coeffs = (0..n)
            .map(|i| ctx.frobenius(self.coeffs[(i - s).rem_euclid(n) as usize], s))
            .collect();
        Self::from_vec(&self.ctx, coeffs)
    }

    /// Adjoint with respect to the trace form: `â_j = a_{n-j}^{q^j}`, so that
    /// `Tr(y · f(x)) = Tr(x · f̂(y))`.
    pub fn adjoint(&self) -> Self {
        let ctx = &*self.ctx;
        let n = ctx.n();
        let coeffs = (0..n)
            .map(|j| ctx.frobenius(self.coeffs[(n - j) % n], j as i64))
            .collect();
        Self::from_vec(&self.ctx, coeffs)
    }

    /// Coefficient-wise field automorphism `a ↦ a^{p^t}`.
    pub fn sigma(&self, t: u32) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.p_power(a, t)).collect();
        Self::from_vec(&self.ctx, coeffs)
    }

    /// Values `f(b_j)` on the `F_q`-basis.
    pub fn values_on_basis(&self) -> Vec<Gf> {
        let ctx = &*self.ctx;
        ctx.basis_frob()
            .iter()
            .map(|bf| {
                self.coeffs
                    .iter()
                    .zip(bf)
                    .fold(Gf::ZERO, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b)))
            })
            .collect()
    }

    /// Interpolates the unique `q`-polynomial with `f(b_j) = values[j]`.
    pub fn from_values(ctx: &Arc<FieldContext>, values: &[Gf]) -> Self {
        let coeffs = linalg::mat_vec(ctx, ctx.moore_inv(), values);
        Self::from_vec(ctx, coeffs)
    }

    /// `F_q`-matrix of the map: column `j` holds the coordinates of `f(b_j)`.
    pub fn matrix_of(&self) -> Matrix {
        let n = self.ctx.n();
        let mut m = vec![vec![Gf::ZERO; n]; n];
        for (j, v) in self.values_on_basis().into_iter().enumerate() {
            let c = self.ctx.coords(v);
            for i in 0..n {
                m[i][j] = c[i];
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        let n = self.ctx.n();
        let mut buf = vec![Gf::ZERO; n * n];
        for (j, v) in self.values_on_basis().into_iter().enumerate() {
            self.ctx.coords_into(v, &mut buf[j * n..(j + 1) * n]);
        }
        // rank of the transpose is the same
        linalg::rank_in_place(&self.ctx, &mut buf, n, n)
    }

    pub fn kernel_dim(&self) -> usize {
        self.ctx.n() - self.rank()
    }

    /// `b(f, g) = Tr(Σ f_i g_i)`, an element of `F_q`.
    pub fn bilinear_b(&self, other: &Self) -> Result<Gf> {
        self.check(other)?;
        let ctx = &*self.ctx;
        let s = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(Gf::ZERO, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b)));
        Ok(ctx.rel_trace(s))
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.ctx.n()
    }

    pub fn inverse(&self) -> Result<Self> {
        let m = self.matrix_of();
        let inv = linalg::invert(&self.ctx, &m).ok_or(Error::NotInvertible)?;
        let n = self.ctx.n();
        // f^{-1}(b_j) has coordinates given by column j of the inverse matrix
        let values: Vec<Gf> = (0..n)
            .map(|j| {
                let col: Vec<Gf> = (0..n).map(|i| inv[i][j]).collect();
                self.ctx.from_fq_coordinates(&col)
            })
            .collect();
        Ok(Self::from_values(&self.ctx, &values))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|&c| self.ctx.element_to_string(c))
            .collect()
    }

    pub fn from_strings(ctx: &Arc<FieldContext>, items: &[String]) -> Result<Self> {
        let coeffs = items
            .iter()
            .map(|s| ctx.parse_element(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(Arc::clone(ctx), coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u64, e: u32, n: u32) -> Arc<FieldContext> {
        Arc::new(FieldContext::new(p, e, n).unwrap())
    }

    #[test]
    fn evaluation_basics() {
        let c = ctx(2, 1, 6);
        let id = LinearizedPoly::identity(&c);
        let v = c.gen_pow(17);
        assert_eq!(id.evaluate(v), v);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = LinearizedPoly::random(&c, &mut rng);
        assert_eq!(f.evaluate(Gf::ZERO), Gf::ZERO);
        // x^q - x vanishes exactly on F_q
        let t = LinearizedPoly::monomial(&c, 1, Gf::ONE)
            .sub(&id)
            .unwrap();
        let roots: Vec<u32> = (0..c.size())
            .filter(|&v| t.evaluate(c.from_int(v)).is_zero())
            .collect();
        assert_eq!(roots.len(), 2);
        assert_eq!(t.rank(), 5);
    }

    #[test]
    fn compose_monomials_and_identity() {
        let c = ctx(2, 1, 6);
        let xq = LinearizedPoly::monomial(&c, 1, Gf::ONE);
        assert_eq!(
            xq.compose(&xq).unwrap(),
            LinearizedPoly::monomial(&c, 2, Gf::ONE)
        );
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = LinearizedPoly::random(&c, &mut rng);
        let id = LinearizedPoly::identity(&c);
        assert_eq!(f.compose(&id).unwrap(), f);
        assert_eq!(id.compose(&f).unwrap(), f);
    }

    #[test]
    fn compose_matches_evaluation() {
        let c = ctx(3, 1, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let f = LinearizedPoly::random(&c, &mut rng);
            let g = LinearizedPoly::random(&c, &mut rng);
            let v = c.from_int(rng.gen_range(0..c.size()));
            assert_eq!(f.compose(&g).unwrap().evaluate(v), f.evaluate(g.evaluate(v)));
        }
    }

    #[test]
    fn frobenius_shift_evaluation() {
        let c = ctx(2, 1, 6);
        let n = c.n() as i64;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let f = LinearizedPoly::random(&c, &mut rng);
            let v = c.from_int(rng.gen_range(0..c.size()));
            let lhs = f.frobenius_shift(1).evaluate(v);
            let rhs = c.frobenius(f.evaluate(v), 1);
            assert_eq!(lhs, rhs);
            assert_eq!(f.frobenius_shift(0), f);
            assert_eq!(f.frobenius_shift(n), f);
        }
        let x = LinearizedPoly::identity(&c);
        assert_eq!(x.frobenius_shift(3), LinearizedPoly::monomial(&c, 3, Gf::ONE));
    }

    #[test]
    fn adjoint_trace_identity() {
        let c = ctx(5, 1, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(
            LinearizedPoly::identity(&c).adjoint(),
            LinearizedPoly::identity(&c)
        );
        for _ in 0..1000 {
            let f = LinearizedPoly::random(&c, &mut rng);
            let x = c.from_int(rng.gen_range(0..c.size()));
            let y = c.from_int(rng.gen_range(0..c.size()));
            let lhs = c.rel_trace(c.mul(y, f.evaluate(x)));
            let rhs = c.rel_trace(c.mul(x, f.adjoint().evaluate(y)));
            assert_eq!(lhs, rhs);
        }
        for _ in 0..100 {
            let f = LinearizedPoly::random(&c, &mut rng);
            assert_eq!(f.adjoint().adjoint(), f);
            assert_eq!(f.adjoint().rank(), f.rank());
        }
    }

    #[test]
    fn rank_basics() {
        let c = ctx(2, 1, 6);
        assert_eq!(LinearizedPoly::identity(&c).rank(), 6);
        assert_eq!(LinearizedPoly::zero(&c).rank(), 0);
        assert!(!LinearizedPoly::zero(&c).is_invertible());
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let f = LinearizedPoly::random(&c, &mut rng);
            let a = c.gen_pow(rng.gen_range(0..63));
            assert_eq!(f.scale(a).rank(), f.rank());
            assert_eq!(f.rank() + f.kernel_dim(), 6);
            assert_eq!(f.rank(), linalg::rank(&c, &f.matrix_of()));
        }
    }

    #[test]
    fn matrix_homomorphism() {
        let c = ctx(2, 2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let f = LinearizedPoly::random(&c, &mut rng);
            let g = LinearizedPoly::random(&c, &mut rng);
            let lhs = f.compose(&g).unwrap().matrix_of();
            let rhs = linalg::mat_mul(&c, &f.matrix_of(), &g.matrix_of());
            assert_eq!(lhs, rhs);
            assert_eq!(
                f.compose(&g).unwrap().frobenius_shift(2),
                f.frobenius_shift(2).compose(&g).unwrap()
            );
        }
    }

    #[test]
    fn bilinear_form() {
        let c = ctx(2, 1, 6);
        let x = LinearizedPoly::identity(&c);
        // Tr(1) = n·1 = 0 in characteristic 2 with n = 6
        assert_eq!(x.bilinear_b(&x).unwrap(), Gf::ZERO);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let z = LinearizedPoly::zero(&c);
        for _ in 0..100 {
            let f = LinearizedPoly::random(&c, &mut rng);
            let g = LinearizedPoly::random(&c, &mut rng);
            assert_eq!(f.bilinear_b(&g).unwrap(), g.bilinear_b(&f).unwrap());
            assert_eq!(f.bilinear_b(&z).unwrap(), Gf::ZERO);
        }
    }

    #[test]
    fn inverses() {
        let c = ctx(3, 1, 4);
        let id = LinearizedPoly::identity(&c);
        assert_eq!(id.inverse().unwrap(), id);
        let x1 = LinearizedPoly::monomial(&c, 1, Gf::ONE);
        assert_eq!(x1.inverse().unwrap(), LinearizedPoly::monomial(&c, 3, Gf::ONE));
        assert_eq!(LinearizedPoly::zero(&c).inverse(), Err(Error::NotInvertible));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut seen = 0;
        while seen < 50 {
            let f = LinearizedPoly::random(&c, &mut rng);
            if !f.is_invertible() {
                continue;
            }
            seen += 1;
            let inv = f.inverse().unwrap();
            assert_eq!(inv.compose(&f).unwrap(), id);
            // independent check through the matrix inverse
            let m = linalg::invert(&c, &f.matrix_of()).unwrap();
            assert_eq!(inv.matrix_of(), m);
        }
    }

    #[test]
    fn context_mismatch() {
        let a = ctx(2, 1, 4);
        let b = ctx(3, 1, 4);
        let f = LinearizedPoly::identity(&a);
        let g = LinearizedPoly::identity(&b);
        assert_eq!(f.compose(&g).unwrap_err(), Error::ContextMismatch);
        assert_eq!(f.bilinear_b(&g).unwrap_err(), Error::ContextMismatch);
    }
}
