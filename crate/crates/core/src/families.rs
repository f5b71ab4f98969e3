//! Constructors for the known `F_{q^n}`-linear MRD families.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, prime_power};
use crate::codes::{RdCode, Search};
use crate::error::{Error, Result};
use crate::gf::{FieldContext, Gf};
use crate::linpoly::LinearizedPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    G,
    H,
    C1,
    C2,
    C3,
    C4,
    C5,
    D1,
    D2,
    D3,
    D4,
    D5,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::G,
        Family::H,
        Family::C1,
        Family::C2,
        Family::C3,
        Family::C4,
        Family::C5,
        Family::D1,
        Family::D2,
        Family::D3,
        Family::D4,
        Family::D5,
    ];

    /// Extension degree fixed by the family, if any.
    pub fn fixed_n(self) -> Option<u32> {
        use Family::*;
        match self {
            G | H => None,
            C1 | C5 | D1 | D5 => Some(6),
            C3 | D3 => Some(7),
            C2 | C4 | D2 | D4 => Some(8),
        }
    }

    /// Smallest prime power meeting the family's congruence conditions
    /// (`(2, 5)` for the infinite families).
    pub fn default_q(self) -> u32 {
        use Family::*;
        match self {
            G | H => 2,
            C3 | D3 => 3,
            C4 | D4 => 4,
            C1 | C2 | C5 | D1 | D2 | D5 => 5,
        }
    }

    /// The `C_i` paired with a `D_i`, and vice versa.
    pub fn partner(self) -> Option<Family> {
        use Family::*;
        Some(match self {
            C1 => D1,
            C2 => D2,
            C3 => D3,
            C4 => D4,
            C5 => D5,
            D1 => C1,
            D2 => C2,
            D3 => C3,
            D4 => C4,
            D5 => C5,
            G | H => return None,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

fn mono(ctx: &Arc<FieldContext>, i: i64, c: Gf) -> LinearizedPoly {
    LinearizedPoly::monomial(ctx, i, c)
}

fn x_pow(ctx: &Arc<FieldContext>, i: i64) -> LinearizedPoly {
    mono(ctx, i, Gf::ONE)
}

fn sum(a: LinearizedPoly, b: LinearizedPoly) -> LinearizedPoly {
    a.add(&b).expect("same context")
}

fn span(ctx: &Arc<FieldContext>, gens: &[LinearizedPoly]) -> RdCode {
    RdCode::from_span_fqn(ctx, gens).expect("same context")
}

fn require_n(ctx: &FieldContext, n: usize) -> Result<()> {
    if ctx.n() == n {
        Ok(())
    } else {
        Err(Error::BadParams(format!("this family needs n = {n}, got n = {}", ctx.n())))
    }
}

fn require_coprime(s: i64, n: usize) -> Result<()> {
    if s <= 0 || gcd(s as u64, n as u64) != 1 {
        return Err(Error::BadParams(format!("s = {s} is not coprime to n = {n}")));
    }
    Ok(())
}

fn require_odd(ctx: &FieldContext) -> Result<()> {
    if ctx.p() == 2 {
        return Err(Error::CongruenceViolated(format!("q = {} must be odd", ctx.q())));
    }
    Ok(())
}

/// `G_{k,s} = ⟨x, x^{q^s}, …, x^{q^{s(k-1)}}⟩`.
pub fn gabidulin(ctx: &Arc<FieldContext>, k: usize, s: i64) -> Result<RdCode> {
    let n = ctx.n();
    require_coprime(s, n)?;
    if k == 0 || k >= n {
        return Err(Error::BadParams(format!("k = {k} outside 1..{n}")));
    }
    let gens: Vec<_> = (0..k as i64).map(|i| x_pow(ctx, s * i)).collect();
    Ok(span(ctx, &gens))
}

/// `H_{k,s}(η, h) = {a_0 x + a_1 x^{q^s} + … + a_{k-1} x^{q^{s(k-1)}} + a_0^{q^h} η x^{q^{sk}}}`.
///
/// Requires `N(η) ≠ (-1)^{nk}`. For `h = 0` the result is `F_{q^n}`-linear.
pub fn twisted(ctx: &Arc<FieldContext>, k: usize, s: i64, eta: Gf, h: u32) -> Result<RdCode> {
    let n = ctx.n() as u64;
    if ctx.rel_norm(eta) == ctx.minus_one_pow(n * k as u64) {
        return Err(Error::NormConditionViolated);
    }
    twisted_unchecked(ctx, k, s, eta, h)
}

/// [`twisted`] without the norm condition (the code need not be MRD).
pub fn twisted_unchecked(
    ctx: &Arc<FieldContext>,
    k: usize,
    s: i64,
    eta: Gf,
    h: u32,
) -> Result<RdCode> {
    let n = ctx.n();
    require_coprime(s, n)?;
    if k == 0 || k >= n {
        return Err(Error::BadParams(format!("k = {k} outside 1..{n}")));
    }
    let sk = s * k as i64;
    if h % n as u32 == 0 {
        let mut gens = vec![sum(x_pow(ctx, 0), mono(ctx, sk, eta))];
        gens.extend((1..k as i64).map(|i| x_pow(ctx, s * i)));
        return Ok(span(ctx, &gens));
    }
    let mut gens = Vec::with_capacity(n * k);
    for &t in ctx.fq_basis() {
        let tw = ctx.mul(ctx.frobenius(t, h as i64), eta);
        gens.push(sum(mono(ctx, 0, t), mono(ctx, sk, tw)));
        for i in 1..k as i64 {
            gens.push(mono(ctx, s * i, t));
        }
    }
    Ok(RdCode::from_span_fq(ctx, &gens)?.promote())
}

fn check_c1(ctx: &FieldContext, delta: Gf) -> Result<()> {
    require_n(ctx, 6)?;
    if ctx.frobenius(delta, 2) != delta {
        return Err(Error::DeltaConstraintViolated("delta must lie in F_{q^2}".into()));
    }
    Ok(())
}

/// `C_1 = ⟨x, δx^q + x^{q^4}⟩` over `F_{q^6}`, `δ ∈ F_{q^2}`.
pub fn c1(ctx: &Arc<FieldContext>, delta: Gf) -> Result<RdCode> {
    check_c1(ctx, delta)?;
    Ok(span(ctx, &[x_pow(ctx, 0), sum(mono(ctx, 1, delta), x_pow(ctx, 4))]))
}

/// `D_1 = ⟨x^q, x^{q^2}, x^{q^4}, x − δ^q x^{q^3}⟩`.
pub fn d1(ctx: &Arc<FieldContext>, delta: Gf) -> Result<RdCode> {
    check_c1(ctx, delta)?;
    let dq = ctx.frobenius(delta, 1);
    Ok(span(
        ctx,
        &[
            x_pow(ctx, 1),
            x_pow(ctx, 2),
            x_pow(ctx, 4),
            sum(x_pow(ctx, 0), mono(ctx, 3, ctx.neg(dq))),
        ],
    ))
}

/// First nonzero `δ ∈ F_{q^2}` (in generator-power order) making `C_1` MRD,
/// verified by exhaustive enumeration.
pub fn search_delta_c1(ctx: &Arc<FieldContext>, budget: u64) -> Result<Gf> {
    require_n(ctx, 6)?;
    let q = ctx.q() as u64;
    if q <= 4 {
        return Err(Error::BadParams(format!("delta search needs q > 4, got q = {q}")));
    }
    let step = (ctx.size() as u64 - 1) / (q * q - 1);
    let search = Search::with_budget(budget);
    for j in 0..q * q - 1 {
        let delta = ctx.gen_pow(j * step);
        let code = c1(ctx, delta)?;
        if code.projective_count() > budget as u128 {
            return Err(Error::BudgetExceeded(code.projective_count()));
        }
        if code.is_mrd_in(&search).is_verified_true() {
            return Ok(delta);
        }
    }
    Err(Error::NotFound(format!("no delta in F_{{q^2}} makes C1 MRD for q = {q}")))
}

/// Smallest generator power `δ` with `δ² = −1`.
pub fn c2_delta(ctx: &FieldContext) -> Result<Gf> {
    require_odd(ctx)?;
    let order = ctx.size() as u64 - 1;
    // −1 = g^{order/2}; the smallest square root is g^{order/4}
    let delta = ctx.gen_pow(order / 4);
    debug_assert_eq!(ctx.mul(delta, delta), ctx.neg(Gf::ONE));
    Ok(delta)
}

/// `C_2 = ⟨x, δx^q + x^{q^5}⟩` over `F_{q^8}`, `δ² = −1`.
pub fn c2(ctx: &Arc<FieldContext>) -> Result<RdCode> {
    require_n(ctx, 8)?;
    let delta = c2_delta(ctx)?;
    Ok(span(ctx, &[x_pow(ctx, 0), sum(mono(ctx, 1, delta), x_pow(ctx, 5))]))
}

/// `D_2 = ⟨x^q, x^{q^2}, x^{q^3}, x^{q^5}, x^{q^6}, x − δx^{q^4}⟩`.
pub fn d2(ctx: &Arc<FieldContext>) -> Result<RdCode> {
    require_n(ctx, 8)?;
    let delta = c2_delta(ctx)?;
    let mut gens: Vec<_> = [1, 2, 3, 5, 6].iter().map(|&i| x_pow(ctx, i)).collect();
    gens.push(sum(x_pow(ctx, 0), mono(ctx, 4, ctx.neg(delta))));
    Ok(span(ctx, &gens))
}

fn check_c3(ctx: &FieldContext, s: i64) -> Result<()> {
    require_n(ctx, 7)?;
    require_odd(ctx)?;
    require_coprime(s, 7)
}

fn check_c4(ctx: &FieldContext, s: i64) -> Result<()> {
    require_n(ctx, 8)?;
    if ctx.q() % 3 != 1 {
        return Err(Error::CongruenceViolated(format!("q = {} must be 1 mod 3", ctx.q())));
    }
    require_coprime(s, 8)
}

fn monomial_span(ctx: &Arc<FieldContext>, s: i64, exps: &[i64]) -> RdCode {
    let gens: Vec<_> = exps.iter().map(|&i| x_pow(ctx, s * i)).collect();
    span(ctx, &gens)
}

/// `C_3 = ⟨x, x^{q^s}, x^{q^{3s}}⟩` over `F_{q^7}`, `q` odd.
pub fn c3(ctx: &Arc<FieldContext>, s: i64) -> Result<RdCode> {
    check_c3(ctx, s)?;
    Ok(monomial_span(ctx, s, &[0, 1, 3]))
}

/// `D_3 = ⟨x, x^{q^{2s}}, x^{q^{3s}}, x^{q^{4s}}⟩`.
pub fn d3(ctx: &Arc<FieldContext>, s: i64) -> Result<RdCode> {
    check_c3(ctx, s)?;
    Ok(monomial_span(ctx, s, &[0, 2, 3, 4]))
}

/// `C_4 = ⟨x, x^{q^s}, x^{q^{3s}}⟩` over `F_{q^8}`, `q ≡ 1 (mod 3)`.
pub fn c4(ctx: &Arc<FieldContext>, s: i64) -> Result<RdCode> {
    check_c4(ctx, s)?;
    Ok(monomial_span(ctx, s, &[0, 1, 3]))
}

/// `D_4 = ⟨x, x^{q^{2s}}, …, x^{q^{5s}}⟩`.
pub fn d4(ctx: &Arc<FieldContext>, s: i64) -> Result<RdCode> {
    check_c4(ctx, s)?;
    Ok(monomial_span(ctx, s, &[0, 2, 3, 4, 5]))
}

fn check_c5(ctx: &FieldContext, delta: Gf) -> Result<()> {
    require_n(ctx, 6)?;
    require_odd(ctx)?;
    if ![0, 1, 4].contains(&(ctx.q() % 5)) {
        return Err(Error::CongruenceViolated(format!(
            "q = {} must be 0 or ±1 mod 5",
            ctx.q()
        )));
    }
    if ctx.add(ctx.mul(delta, delta), delta) != Gf::ONE {
        return Err(Error::DeltaConstraintViolated("delta^2 + delta must be 1".into()));
    }
    Ok(())
}

/// Smallest generator power `δ` with `δ² + δ = 1`.
pub fn c5_delta(ctx: &FieldContext) -> Result<Gf> {
    (0..ctx.size() as u64 - 1)
        .map(|j| ctx.gen_pow(j))
        .find(|&d| ctx.add(ctx.mul(d, d), d) == Gf::ONE)
        .ok_or_else(|| Error::NotFound("root of x^2 + x - 1".into()))
}

/// `C_5 = ⟨x, x^q + x^{q^3} + δx^{q^5}⟩` over `F_{q^6}`.
pub fn c5(ctx: &Arc<FieldContext>, delta: Gf) -> Result<RdCode> {
    check_c5(ctx, delta)?;
    let f = sum(sum(x_pow(ctx, 1), x_pow(ctx, 3)), mono(ctx, 5, delta));
    Ok(span(ctx, &[x_pow(ctx, 0), f]))
}

/// `D_5 = ⟨x^q, x^{q^3}, x − x^{q^2}, x^{q^4} − δx⟩`.
pub fn d5(ctx: &Arc<FieldContext>, delta: Gf) -> Result<RdCode> {
    check_c5(ctx, delta)?;
    let m1 = ctx.neg(Gf::ONE);
    Ok(span(
        ctx,
        &[
            x_pow(ctx, 1),
            x_pow(ctx, 3),
            sum(x_pow(ctx, 0), mono(ctx, 2, m1)),
            sum(x_pow(ctx, 4), mono(ctx, 0, ctx.neg(delta))),
        ],
    ))
}

/// A family plus its parameters, as given on the command line
/// (`"H:k=2,s=1,eta=g^3,h=0"`, `"C3:s=1"`, …). Field elements stay textual
/// until a context is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub k: Option<usize>,
    pub s: Option<i64>,
    pub eta: Option<String>,
    pub h: Option<u32>,
    pub delta: Option<String>,
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        FamilySpec {
            family,
            k: None,
            s: None,
            eta: None,
            h: None,
            delta: None,
        }
    }

    pub fn parse(desc: &str) -> Result<Self> {
        let (name, rest) = desc.split_once(':').unwrap_or((desc, ""));
        let mut spec = FamilySpec::new(name.parse()?);
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, val) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {item:?}")))?;
            let bad = |_| Error::Parse(format!("bad value in {item:?}"));
            match key.trim() {
                "k" => spec.k = Some(val.trim().parse().map_err(bad)?),
                "s" => spec.s = Some(val.trim().parse().map_err(bad)?),
                "h" => spec.h = Some(val.trim().parse().map_err(bad)?),
                "eta" => spec.eta = Some(val.trim().to_string()),
                "delta" => spec.delta = Some(val.trim().to_string()),
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        Ok(spec)
    }

    /// The context at prime power `q`, with `n` forced for the sporadic families.
    pub fn context(&self, q: u64, n: Option<u32>) -> Result<Arc<FieldContext>> {
        let (p, e) =
            prime_power(q).ok_or_else(|| Error::BadParams(format!("{q} is not a prime power")))?;
        let n = match (self.family.fixed_n(), n) {
            (Some(f), Some(given)) if f != given => {
                return Err(Error::BadParams(format!(
                    "{} needs n = {f}, got n = {given}",
                    self.family
                )))
            }
            (Some(f), _) => f,
            (None, Some(given)) => given,
            (None, None) => 5,
        };
        Ok(Arc::new(FieldContext::new(p, e, n)?))
    }

    fn element(ctx: &FieldContext, v: &Option<String>) -> Result<Option<Gf>> {
        v.as_deref().map(|s| ctx.parse_element(s)).transpose()
    }

    /// Builds the code; `budget` bounds the `δ` search for `C_1`/`D_1`.
    pub fn build(&self, ctx: &Arc<FieldContext>, budget: u64) -> Result<RdCode> {
        use Family::*;
        let k = self.k.unwrap_or(2);
        let s = self.s.unwrap_or(1);
        let delta = Self::element(ctx, &self.delta)?;
        match self.family {
            G => gabidulin(ctx, k, s),
            H => {
                let eta = Self::element(ctx, &self.eta)?.unwrap_or(Gf::ZERO);
                twisted(ctx, k, s, eta, self.h.unwrap_or(0))
            }
            C1 | D1 => {
                let delta = match delta {
                    Some(d) => d,
                    None => search_delta_c1(ctx, budget)?,
                };
                if self.family == C1 {
                    c1(ctx, delta)
                } else {
                    d1(ctx, delta)
                }
            }
            C2 => c2(ctx),
            D2 => d2(ctx),
            C3 => c3(ctx, s),
            D3 => d3(ctx, s),
            C4 => c4(ctx, s),
            D4 => d4(ctx, s),
            C5 | D5 => {
                let delta = match delta {
                    Some(d) => d,
                    None => c5_delta(ctx)?,
                };
                if self.family == C5 {
                    c5(ctx, delta)
                } else {
                    d5(ctx, delta)
                }
            }
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(k) = self.k {
            parts.push(format!("k={k}"));
        }
        if let Some(s) = self.s {
            parts.push(format!("s={s}"));
        }
        if let Some(e) = &self.eta {
            parts.push(format!("eta={e}"));
        }
        if let Some(h) = self.h {
            parts.push(format!("h={h}"));
        }
        if let Some(d) = &self.delta {
            parts.push(format!("delta={d}"));
        }
        if parts.is_empty() {
            write!(f, "{}", self.family)
        } else {
            write!(f, "{}:{}", self.family, parts.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::DEFAULT_BUDGET;

    fn ctx(p: u64, e: u32, n: u32) -> Arc<FieldContext> {
        Arc::new(FieldContext::new(p, e, n).unwrap())
    }

    #[test]
    fn gabidulin_basics() {
        let c = ctx(2, 1, 4);
        let g = gabidulin(&c, 2, 1).unwrap();
        assert_eq!(g.basis(), vec![x_pow(&c, 0), x_pow(&c, 1)]);
        assert_eq!(g.min_distance(DEFAULT_BUDGET).unwrap(), 3);
        assert!(gabidulin(&c, 2, 2).is_err());
        assert!(gabidulin(&c, 4, 1).is_err());
        let c5 = ctx(2, 1, 5);
        assert!(gabidulin(&c5, 2, 2).unwrap().is_mrd(DEFAULT_BUDGET).is_verified_true());
    }

    #[test]
    fn twisted_basics() {
        let c = ctx(3, 1, 4);
        assert_eq!(twisted(&c, 2, 1, Gf::ZERO, 0).unwrap(), gabidulin(&c, 2, 1).unwrap());
        // N(1) = 1 = (−1)^{nk}
        assert_eq!(twisted(&c, 2, 1, Gf::ONE, 0).unwrap_err(), Error::NormConditionViolated);
        let eta = c.gen_pow(1);
        assert_ne!(c.rel_norm(eta), Gf::ONE);
        let h = twisted(&c, 2, 1, eta, 0).unwrap();
        assert!(h.is_mrd(DEFAULT_BUDGET).is_verified_true());
        // k = n − 1 wraps around: x^{q^{sk}} = x^{q^{-s}} and the chain is one longer
        let h3 = twisted(&c, 3, 1, eta, 0).unwrap();
        assert_eq!(h3.intersect(&h3.shift_code(1)).unwrap().dim(), 2);
        let c5 = ctx(3, 1, 5);
        let eta5 = c5.gen_pow(2);
        let h3 = twisted(&c5, 3, 1, eta5, 0).unwrap();
        assert_eq!(h3.intersect(&h3.shift_code(1)).unwrap().dim(), 1);
        // h ≠ 0: only F_q-linear, still of dimension nk
        let ht = twisted(&c, 2, 1, eta, 1).unwrap();
        assert_eq!(ht.scalars(), crate::codes::Scalars::Fq);
        assert_eq!(ht.dim_fq(), 8);
        assert!(ht.is_mrd(DEFAULT_BUDGET).is_verified_true());
        // twist exponent that is a multiple of n behaves like h = 0
        assert_eq!(twisted(&c, 2, 1, eta, 4).unwrap(), h);
    }

    #[test]
    fn at_q2_only_eta_zero_satisfies_the_norm_condition() {
        let c = ctx(2, 1, 5);
        let admissible: Vec<u32> = (0..c.size())
            .filter(|&v| twisted(&c, 2, 1, c.from_int(v), 0).is_ok())
            .collect();
        assert_eq!(admissible, vec![0]);
    }

    #[test]
    fn sporadic_preconditions() {
        let c6 = ctx(5, 1, 6);
        assert!(matches!(c1(&c6, c6.gen_pow(1)), Err(Error::DeltaConstraintViolated(_))));
        let c3ctx = ctx(2, 1, 7);
        assert!(matches!(c3(&c3ctx, 1), Err(Error::CongruenceViolated(_))));
        let c4ctx = ctx(5, 1, 8);
        assert!(matches!(c4(&c4ctx, 1), Err(Error::CongruenceViolated(_))));
        assert!(matches!(c5(&c6, Gf::ONE), Err(Error::DeltaConstraintViolated(_))));
        let c7 = ctx(3, 1, 6);
        assert!(matches!(c5(&c7, Gf::ONE), Err(Error::CongruenceViolated(_))));
        assert!(c1(&ctx(5, 1, 4), Gf::ONE).is_err());
        assert!(search_delta_c1(&ctx(2, 1, 6), DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn c5_delta_at_q5_is_two() {
        let c = ctx(5, 1, 6);
        let d = c5_delta(&c).unwrap();
        assert_eq!(d, c.from_int(2));
        assert!(c5(&c, d).is_ok());
        assert_eq!(c.mul(c2_delta(&c).unwrap(), c2_delta(&c).unwrap()), c.neg(Gf::ONE));
    }

    #[test]
    fn c3_is_mrd() {
        let c = ctx(3, 1, 7);
        let code = c3(&c, 1).unwrap();
        assert_eq!(code.k_fqn(), Some(3));
        assert_eq!(code.min_distance(DEFAULT_BUDGET).unwrap(), 5);
        let d = d3(&c, 1).unwrap();
        assert_eq!(d.k_fqn(), Some(4));
    }

    #[test]
    fn descriptors() {
        let s = FamilySpec::parse("H:k=2,s=1,eta=g^3,h=0").unwrap();
        assert_eq!(s.family, Family::H);
        assert_eq!(s.k, Some(2));
        assert_eq!(s.eta.as_deref(), Some("g^3"));
        assert_eq!(s.to_string(), "H:k=2,s=1,eta=g^3,h=0");
        assert_eq!(FamilySpec::parse("c3:s=1").unwrap().family, Family::C3);
        assert!(FamilySpec::parse("X").is_err());
        assert!(FamilySpec::parse("G:k").is_err());
        let ctx = FamilySpec::parse("D4").unwrap().context(4, None).unwrap();
        assert_eq!((ctx.p(), ctx.e(), ctx.n()), (2, 2, 8));
        assert!(FamilySpec::parse("C3").unwrap().context(3, Some(6)).is_err());
    }
}
