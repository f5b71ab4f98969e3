//! Distinguishers: idealisers, `h(C)`, the Gabidulin index, and the
//! constructive recognition tests for (twisted) Gabidulin codes.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, pow_sat};
use crate::codes::{flatten, unflatten, MrdStatus, RankDistribution, RdCode, Scalars, Search};
use crate::error::{Error, Result};
use crate::families::gabidulin;
use crate::gf::{FieldContext, Gf};
use crate::linalg::{self, Matrix};
use crate::linpoly::LinearizedPoly;
use crate::par;

/// Orders up to this size get an exhaustive invertibility check.
const FIELD_CHECK_EXHAUSTIVE: u128 = 1 << 16;
const FIELD_CHECK_SAMPLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct IdealiserResult {
    pub side: Side,
    /// `F_q`-basis of the idealiser.
    pub basis: Vec<LinearizedPoly>,
    /// `m` with `|I| = q^m`.
    pub order_exponent: usize,
    pub is_field: bool,
    /// False when invertibility was only sampled.
    pub field_check_exhaustive: bool,
}

fn coprime_shifts(n: usize) -> Vec<i64> {
    (1..n as i64).filter(|&j| gcd(j as u64, n as u64) == 1).collect()
}

fn idealiser(code: &RdCode, side: Side) -> IdealiserResult {
    let ctx = code.ctx();
    let n = ctx.n();
    let parity = code.fq_parity();
    let units: Vec<LinearizedPoly> = (0..n as i64)
        .flat_map(|t| ctx.fq_basis().iter().map(move |&b| (t, b)))
        .map(|(t, b)| LinearizedPoly::monomial(ctx, t, b))
        .collect();
    // column u of the system: parity · flat(E_u ∘ f) (or f ∘ E_u), stacked over f
    let gens = code.fq_basis();
    let mut system: Matrix = vec![Vec::with_capacity(n * n); gens.len() * parity.len()];
    for e in &units {
        let mut row = 0;
        for f in &gens {
            let comp = match side {
                Side::Left => e.compose_unchecked(f),
                Side::Right => f.compose_unchecked(e),
            };
            let v = flatten(ctx, comp.coeffs());
            for pr in &parity {
                let dot = pr
                    .iter()
                    .zip(&v)
                    .fold(Gf::ZERO, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b)));
                system[row].push(dot);
                row += 1;
            }
        }
    }
    let kernel = linalg::nullspace(ctx, &system, n * n);
    let basis: Vec<LinearizedPoly> = kernel
        .iter()
        .map(|v| LinearizedPoly::from_vec(ctx, unflatten(ctx, v)))
        .collect();
    let (is_field, exhaustive) = field_check(ctx, &kernel, &basis);
    IdealiserResult {
        side,
        order_exponent: basis.len(),
        basis,
        is_field,
        field_check_exhaustive: exhaustive,
    }
}

/// Closure under composition on basis pairs, identity membership, and
/// invertibility of every nonzero element (sampled for large orders).
fn field_check(ctx: &Arc<FieldContext>, rows: &Matrix, basis: &[LinearizedPoly]) -> (bool, bool) {
    let pivots = linalg::pivots_of(rows);
    let inside = |f: &LinearizedPoly| {
        let mut v = flatten(ctx, f.coeffs());
        linalg::reduce(ctx, rows, &pivots, &mut v);
        v.iter().all(|x| x.is_zero())
    };
    if basis.is_empty() || !inside(&LinearizedPoly::identity(ctx)) {
        return (false, true);
    }
    for a in basis {
        for b in basis {
            if !inside(&a.compose_unchecked(b)) {
                return (false, true);
            }
        }
    }
    let q = ctx.q() as u64;
    let m = basis.len();
    let order = pow_sat(q as u128, m as u32);
    let element = |digits: &[u64]| {
        let mut acc = LinearizedPoly::zero(ctx);
        for (d, f) in digits.iter().zip(basis) {
            if *d != 0 {
                acc = acc.add(&f.scale(ctx.fq_elements()[*d as usize])).expect("same context");
            }
        }
        acc
    };
    if order <= FIELD_CHECK_EXHAUSTIVE {
        let all_invertible = (1..order as u64).all(|mut idx| {
            let mut digits = vec![0u64; m];
            for d in digits.iter_mut() {
                *d = idx % q;
                idx /= q;
            }
            element(&digits).is_invertible()
        });
        (all_invertible, true)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut checked = 0;
        while checked < FIELD_CHECK_SAMPLES {
            let digits: Vec<u64> = (0..m).map(|_| rng.gen_range(0..q)).collect();
            if digits.iter().all(|&d| d == 0) {
                continue;
            }
            checked += 1;
            if !element(&digits).is_invertible() {
                return (false, true);
            }
        }
        (true, false)
    }
}

/// `L(C) = {φ : φ ∘ C ⊆ C}`.
pub fn left_idealiser(code: &RdCode) -> IdealiserResult {
    idealiser(code, Side::Left)
}

/// `R(C) = {φ : C ∘ φ ⊆ C}`.
pub fn right_idealiser(code: &RdCode) -> IdealiserResult {
    idealiser(code, Side::Right)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HValue {
    pub value: usize,
    /// Smallest `j` attaining the maximum (none when `n = 1`).
    pub arg: Option<i64>,
    /// Dimensions are over `F_{q^n}` (else over `F_q`).
    pub over_fqn: bool,
}

/// `h(C) = max { dim(C ∩ C^{[j]}) : 1 ≤ j < n, gcd(j, n) = 1 }`.
pub fn h_invariant(code: &RdCode) -> HValue {
    let mut best: Option<(usize, i64)> = None;
    for j in coprime_shifts(code.n()) {
        let d = code.intersect(&code.shift_code(j)).expect("same mode").dim();
        if best.is_none_or(|(b, _)| d > b) {
            best = Some((d, j));
        }
    }
    HValue {
        value: best.map_or(0, |b| b.0),
        arg: best.map(|b| b.1),
        over_fqn: code.scalars() == Scalars::Fqn,
    }
}

fn require_fqn(code: &RdCode) -> Result<usize> {
    code.k_fqn().ok_or(Error::NotFqnLinear)
}

#[derive(Clone, Debug)]
pub struct GabidulinCheck {
    /// Smallest admissible `s`, if the code is equivalent to some `G_{k,s}`.
    pub s: Option<i64>,
    /// MRD status the verdict rests on.
    pub mrd: MrdStatus,
}

/// Characterization of (generalized) Gabidulin codes among `F_{q^n}`-linear
/// MRD codes: some `s` coprime to `n` has `dim(C ∩ C^{[s]}) = k − 1`.
pub fn is_equiv_gabidulin(code: &RdCode, search: &Search) -> Result<GabidulinCheck> {
    let mrd = code.is_mrd_in(search);
    is_equiv_gabidulin_with(code, mrd)
}

/// As [`is_equiv_gabidulin`] with an MRD status already at hand.
pub fn is_equiv_gabidulin_with(code: &RdCode, mrd: MrdStatus) -> Result<GabidulinCheck> {
    let k = require_fqn(code)?;
    if mrd.is_verified_false() {
        return Err(Error::NotMrd);
    }
    if k == 0 {
        return Err(Error::BadParams("the zero code".into()));
    }
    let s = if k == 1 {
        code.basis()[0].is_invertible().then_some(1)
    } else {
        coprime_shifts(code.n())
            .into_iter()
            .find(|&s| code.intersect(&code.shift_code(s)).expect("same mode").dim() == k - 1)
    };
    Ok(GabidulinCheck { s, mrd })
}

/// Certificate that `C` is equivalent to a generalized twisted Gabidulin code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedWitness {
    pub s: i64,
    pub p: LinearizedPoly,
    pub q_complement: LinearizedPoly,
    pub eta: Gf,
}

/// The recovery step at which a given `s` was rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistedStep {
    /// `dim(C ∩ C^{[s]}) ≠ k − 2`
    Intersection,
    /// `dim(C ∩ C^{[s]} ∩ C^{[2s]}) ≠ k − 3`
    DoubleIntersection,
    /// `dim(V^{[-s]} + V) ≠ k − 1`
    SumDimension,
    /// the chain intersection is not a line
    ChainLine,
    /// `U ≠ ⟨p^{[s]}, …, p^{[s(k-1)]}⟩`
    SpanMismatch,
    NotInvertible,
    /// no `η ≠ 0` with `p + η p^{[sk]} ∈ C`
    NoEta,
    NormCondition,
}

#[derive(Clone, Debug)]
pub struct TwistedCheck {
    pub witness: Option<TwistedWitness>,
    /// Failing step for each rejected `s`.
    pub rejected: Vec<(i64, TwistedStep)>,
    pub mrd: MrdStatus,
}

/// Recognition of `F_{q^n}`-linear MRD codes equivalent to `H_{k,s}(η)`, `k > 2`.
pub fn is_equiv_twisted(code: &RdCode, search: &Search) -> Result<TwistedCheck> {
    let mrd = code.is_mrd_in(search);
    is_equiv_twisted_with(code, mrd)
}

pub fn is_equiv_twisted_with(code: &RdCode, mrd: MrdStatus) -> Result<TwistedCheck> {
    let k = require_fqn(code)?;
    if mrd.is_verified_false() {
        return Err(Error::NotMrd);
    }
    if k <= 2 {
        return Err(Error::KTooSmall(k));
    }
    let mut rejected = Vec::new();
    for s in coprime_shifts(code.n()) {
        match twisted_attempt(code, k, s) {
            Ok(w) => {
                return Ok(TwistedCheck {
                    witness: Some(w),
                    rejected,
                    mrd,
                })
            }
            Err(step) => rejected.push((s, step)),
        }
    }
    Ok(TwistedCheck {
        witness: None,
        rejected,
        mrd,
    })
}

fn twisted_attempt(
    code: &RdCode,
    k: usize,
    s: i64,
) -> std::result::Result<TwistedWitness, TwistedStep> {
    let ctx = code.ctx();
    let inter = |a: &RdCode, b: &RdCode| a.intersect(b).expect("same mode");
    let v = inter(code, &code.shift_code(s));
    if v.dim() != k - 2 {
        return Err(TwistedStep::Intersection);
    }
    if inter(&v, &code.shift_code(2 * s)).dim() != k - 3 {
        return Err(TwistedStep::DoubleIntersection);
    }
    let u = v.shift_code(-s).sum(&v).expect("same mode");
    if u.dim() != k - 1 {
        return Err(TwistedStep::SumDimension);
    }
    let mut w = u.clone();
    for i in 1..k as i64 - 1 {
        w = inter(&w, &u.shift_code(i * s));
    }
    if w.dim() != 1 {
        return Err(TwistedStep::ChainLine);
    }
    let r = w.basis().remove(0);
    let p = r.frobenius_shift(-s * (k as i64 - 1));
    let gens: Vec<LinearizedPoly> = (1..k as i64).map(|i| p.frobenius_shift(i * s)).collect();
    if RdCode::from_span_fqn(ctx, &gens).expect("same context") != u {
        return Err(TwistedStep::SpanMismatch);
    }
    let q_complement = code
        .basis()
        .into_iter()
        .find(|f| !u.contains(f).expect("same context"))
        .expect("dim U < dim C");
    if !p.is_invertible() {
        return Err(TwistedStep::NotInvertible);
    }
    // images of p and p^{[sk]} under the parity map C^n → F_{q^n}^n / C
    let parity = linalg::nullspace(ctx, code.rows(), code.n());
    let image = |f: &LinearizedPoly| linalg::mat_vec(ctx, &parity, f.coeffs());
    let a = image(&p);
    let b = image(&p.frobenius_shift(s * k as i64));
    let Some(i) = b.iter().position(|x| !x.is_zero()) else {
        return Err(TwistedStep::NoEta);
    };
    let eta = ctx.neg(ctx.div(a[i], b[i]).expect("nonzero"));
    if eta.is_zero() {
        return Err(TwistedStep::NoEta);
    }
    let consistent = a
        .iter()
        .zip(&b)
        .all(|(&x, &y)| ctx.add(x, ctx.mul(eta, y)).is_zero());
    if !consistent {
        return Err(TwistedStep::NoEta);
    }
    let n = code.n() as u64;
    if ctx.rel_norm(eta) == ctx.minus_one_pow(n * k as u64) {
        return Err(TwistedStep::NormCondition);
    }
    Ok(TwistedWitness {
        s,
        p,
        q_complement,
        eta,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexStatus {
    /// Lower and upper bound coincide.
    Certified,
    /// A witness attains the lower bound; the upper bound is budget-limited.
    Witnessed,
    /// No witness found and the bound is budget-limited.
    BudgetLimited,
}

/// Subcode `⟨p, p^{[s]}, …, p^{[s(m-1)]}⟩ = G_{m,s} ∘ p` of the code.
#[derive(Clone, Debug)]
pub struct IndexWitness {
    pub m: usize,
    pub s: i64,
    pub p: LinearizedPoly,
}

impl IndexWitness {
    pub fn subcode(&self) -> RdCode {
        let gens: Vec<_> = (0..self.m as i64)
            .map(|i| self.p.frobenius_shift(i * self.s))
            .collect();
        RdCode::from_span_fqn(self.p.ctx(), &gens).expect("same context")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelOutcome {
    Present,
    /// Every admissible `s` was excluded exhaustively.
    Absent,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct IndexReport {
    pub lower: usize,
    pub upper: usize,
    pub status: IndexStatus,
    pub witness: Option<IndexWitness>,
    /// Outcome per examined dimension, from the top down.
    pub levels: Vec<(usize, LevelOutcome)>,
}

enum ScanOutcome {
    Found(LinearizedPoly),
    Absent,
    Unknown,
}

/// Looks for an invertible element of `w` (up to scalars): basis vectors
/// first, then an exhaustive projective scan within budget, else sampling.
fn find_invertible(w: &RdCode, search: &Search) -> ScanOutcome {
    if w.is_zero() {
        return ScanOutcome::Absent;
    }
    if let Some(f) = w.basis().into_iter().find(|f| f.is_invertible()) {
        return ScanOutcome::Found(f);
    }
    let n = w.n();
    match w.codewords(true, search.budget) {
        Ok(_) => {
            let s = Search {
                budget: search.budget,
                ..*search
            };
            let basis = w.basis();
            let ctx = w.ctx();
            let count = w.projective_count() as u64;
            // reuse the enumeration order of `codewords`
            let hit = par::find_first(s.exec, count, || (), |_, i| {
                nth_projective(ctx, &basis, i).rank() == n
            });
            match hit {
                Some(i) => ScanOutcome::Found(nth_projective(ctx, &basis, i)),
                None => ScanOutcome::Absent,
            }
        }
        Err(_) => {
            let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
            let basis = w.basis();
            for _ in 0..search.samples {
                let mut f = LinearizedPoly::zero(w.ctx());
                for b in &basis {
                    let c = w.ctx().from_int(rng.gen_range(0..w.ctx().size()));
                    f = f.add(&b.scale(c)).expect("same context");
                }
                if f.is_invertible() {
                    return ScanOutcome::Found(f);
                }
            }
            ScanOutcome::Unknown
        }
    }
}

/// The `i`-th projective representative over an `F_{q^n}`-basis (leading
/// coefficient 1, first at the lowest basis index).
fn nth_projective(ctx: &Arc<FieldContext>, basis: &[LinearizedPoly], mut idx: u64) -> LinearizedPoly {
    let k = basis.len();
    let size = ctx.size() as u64;
    let mut lead = 0;
    for l in 0..k {
        let block = size.pow((k - 1 - l) as u32);
        if idx < block {
            lead = l;
            break;
        }
        idx -= block;
    }
    let mut f = basis[lead].clone();
    for b in basis[lead + 1..].iter().rev() {
        let c = ctx.from_int((idx % size) as u32);
        idx /= size;
        if !c.is_zero() {
            f = f.add(&b.scale(c)).expect("same context");
        }
    }
    f
}

/// Largest `F_{q^n}`-linear subcode equivalent to a generalized Gabidulin code.
///
/// Such a subcode of dimension `m < n` has the form `⟨p^{[si]} : i < m⟩` with
/// `p` invertible (an equivalence fixing left `F_{q^n}`-linearity is
/// `βx^{q^a} ∘ · ∘ g`), so level `m` reduces to finding an invertible
/// element of `∩_{i<m} C^{[-si]}` for some admissible `s`.
pub fn gabidulin_index(code: &RdCode, search: &Search) -> Result<IndexReport> {
    let k = require_fqn(code)?;
    let n = code.n();
    let shifts = coprime_shifts(n);
    let mut levels = Vec::new();
    let mut upper: Option<usize> = None;
    let mut witness = None;
    for m in (1..=k.min(n - 1)).rev() {
        let candidates: &[i64] = if m == 1 { &[1] } else { &shifts };
        let mut outcome = LevelOutcome::Absent;
        for &s in candidates {
            let mut w = code.clone();
            for i in 1..m as i64 {
                w = w.intersect(&code.shift_code(-s * i)).expect("same mode");
            }
            match find_invertible(&w, search) {
                ScanOutcome::Found(p) => {
                    witness = Some(IndexWitness { m, s, p });
                    outcome = LevelOutcome::Present;
                    break;
                }
                ScanOutcome::Absent => {}
                ScanOutcome::Unknown => outcome = LevelOutcome::Unknown,
            }
        }
        levels.push((m, outcome));
        if outcome != LevelOutcome::Absent && upper.is_none() {
            upper = Some(m);
        }
        if outcome == LevelOutcome::Present {
            break;
        }
    }
    let lower = witness.as_ref().map_or(0, |w| w.m);
    let upper = upper.unwrap_or(0);
    let status = if lower == upper {
        IndexStatus::Certified
    } else if witness.is_some() {
        IndexStatus::Witnessed
    } else {
        IndexStatus::BudgetLimited
    };
    Ok(IndexReport {
        lower,
        upper,
        status,
        witness,
        levels,
    })
}

/// Independent check of an index witness: the subcode lies in `code`, has
/// the right dimension, meets the Gabidulin intersection condition, is not
/// refuted as MRD, and composing with `p^{-1}` gives exactly `G_{m,s}`.
pub fn verify_index_witness(code: &RdCode, w: &IndexWitness, search: &Search) -> Result<bool> {
    let d = w.subcode();
    if d.dim() != w.m || !d.basis().iter().all(|f| code.contains(f).unwrap_or(false)) {
        return Ok(false);
    }
    if w.m >= 2 && d.intersect(&d.shift_code(w.s))?.dim() != w.m - 1 {
        return Ok(false);
    }
    if d.is_mrd_in(search).is_verified_false() {
        return Ok(false);
    }
    let pinv = w.p.inverse()?;
    let back: Vec<_> = d.basis().iter().map(|f| f.compose_unchecked(&pinv)).collect();
    let back = RdCode::from_span_fqn(code.ctx(), &back)?;
    Ok(back == gabidulin(code.ctx(), w.m, w.s)?)
}

/// Rank statistics used to compare codes: the exact distribution when it
/// can be enumerated, else the set of ranks seen among seeded samples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RankProfile {
    Exact { counts: Vec<u128> },
    Sampled { support: Vec<usize>, samples: u64 },
}

pub fn rank_profile(code: &RdCode, search: &Search) -> Result<RankProfile> {
    match code.rank_distribution_in(search) {
        Ok(RankDistribution { counts }) => Ok(RankProfile::Exact { counts }),
        Err(Error::BudgetExceeded(_)) => {
            let d = code.sampled_rank_profile(search.samples, search.seed)?;
            let support = d.support().into_iter().filter(|&r| r > 0).collect();
            Ok(RankProfile::Sampled {
                support,
                samples: search.samples,
            })
        }
        Err(e) => Err(e),
    }
}

/// Invariants that agree on equivalent codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub dim_fq: usize,
    pub h: usize,
    pub l_exp: usize,
    pub r_exp: usize,
    pub profile: RankProfile,
}

pub fn fingerprint(code: &RdCode, search: &Search) -> Result<Fingerprint> {
    Ok(Fingerprint {
        dim_fq: code.dim_fq(),
        h: h_invariant(code).value,
        l_exp: left_idealiser(code).order_exponent,
        r_exp: right_idealiser(code).order_exponent,
        profile: rank_profile(code, search)?,
    })
}

/// Everything the distinguishers say about one code.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub h: HValue,
    pub index: IndexReport,
    pub left: IdealiserResult,
    pub right: IdealiserResult,
    pub mrd: MrdStatus,
}

pub fn invariant_report(code: &RdCode, search: &Search) -> Result<InvariantReport> {
    Ok(InvariantReport {
        h: h_invariant(code),
        index: gabidulin_index(code, search)?,
        left: left_idealiser(code),
        right: right_idealiser(code),
        mrd: code.is_mrd_in(search),
    })
}

/// Fraction of `trials` random `k`-dimensional `F_{q^n}`-linear codes that are
/// MRD, each checked exhaustively.
pub fn mrd_fraction(
    ctx: &Arc<FieldContext>,
    k: usize,
    trials: u64,
    search: &Search,
) -> Result<f64> {
    if trials == 0 || k == 0 {
        return Err(Error::BadParams("need trials ≥ 1 and k ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let mut hits = 0u64;
    for _ in 0..trials {
        let code = RdCode::random_code(ctx, k, Scalars::Fqn, rng.gen())?;
        if code.projective_count() > search.budget as u128 {
            return Err(Error::BudgetExceeded(code.projective_count()));
        }
        if code.is_mrd_in(search).is_verified_true() {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}
