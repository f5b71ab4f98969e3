//! Rank-distance codes as `F_q`- or `F_{q^n}`-subspaces of `q`-polynomials.
//!
//! `F_{q^n}`-linear codes are stored by their coefficient vectors in
//! `F_{q^n}^n`; `F_q`-linear codes by flattened coordinate vectors in
//! `F_q^{n²}` (entry `i·n + j` is the `j`-th coordinate of `a_i`). Either way
//! the basis is kept in reduced row echelon form, so equal subspaces have
//! equal bases.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::pow_sat;
use crate::error::{Error, Result};
use crate::gf::{ContextDescriptor, FieldContext, Gf};
use crate::linalg::{self, Matrix};
use crate::linpoly::LinearizedPoly;
use crate::par::{self, Exec};

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const DEFAULT_SAMPLES: u64 = 10_000;

/// Which scalars the code is closed under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scalars {
    /// `F_q`-linear only.
    Fq,
    /// Closed under the left action `f ↦ αf` of `F_{q^n}`.
    Fqn,
}

/// Enumeration/sampling knobs shared by the expensive operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Search {
    /// Maximum number of projective points enumerated exhaustively.
    pub budget: u64,
    /// Sample count used when the budget is exceeded.
    pub samples: u64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for Search {
    fn default() -> Self {
        Search {
            budget: DEFAULT_BUDGET,
            samples: DEFAULT_SAMPLES,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

impl Search {
    pub fn with_budget(budget: u64) -> Self {
        Search {
            budget,
            ..Default::default()
        }
    }
}

/// Number of codewords of each rank; index = rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankDistribution {
    pub counts: Vec<u128>,
}

impl RankDistribution {
    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }

    /// Smallest nonzero rank that occurs.
    pub fn min_rank(&self) -> Option<usize> {
        self.counts.iter().skip(1).position(|&c| c > 0).map(|r| r + 1)
    }

    /// Ranks that occur at least once.
    pub fn support(&self) -> Vec<usize> {
        (0..self.counts.len()).filter(|&r| self.counts[r] > 0).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("rank,count\n");
        for (r, c) in self.counts.iter().enumerate() {
            s.push_str(&format!("{r},{c}\n"));
        }
        s
    }
}

/// Outcome of an MRD check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MrdStatus {
    VerifiedTrue,
    /// Either a low-rank codeword was found, or the dimension cannot meet
    /// the Singleton bound (no witness then).
    VerifiedFalse { witness: Option<LinearizedPoly> },
    /// Enumeration exceeded the budget and every sampled codeword had full
    /// designed rank.
    SampledConsistent { samples: u64 },
}

impl MrdStatus {
    pub fn is_verified_true(&self) -> bool {
        matches!(self, MrdStatus::VerifiedTrue)
    }
    pub fn is_verified_false(&self) -> bool {
        matches!(self, MrdStatus::VerifiedFalse { .. })
    }
    /// True unless MRD-ness was refuted.
    pub fn is_plausible(&self) -> bool {
        !self.is_verified_false()
    }
    pub fn label(&self) -> &'static str {
        match self {
            MrdStatus::VerifiedTrue => "verified_true",
            MrdStatus::VerifiedFalse { .. } => "verified_false",
            MrdStatus::SampledConsistent { .. } => "sampled_consistent",
        }
    }
}

#[derive(Clone)]
pub struct RdCode {
    ctx: Arc<FieldContext>,
    scalars: Scalars,
    rows: Matrix,
}

impl fmt::Debug for RdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RdCode")
            .field("q", &self.ctx.q())
            .field("n", &self.ctx.n())
            .field("scalars", &self.scalars)
            .field("basis", &self.basis())
            .finish()
    }
}

/// Equality of subspaces; codes stored in different modes are compared in
/// `F_q` form.
impl PartialEq for RdCode {
    fn eq(&self, other: &Self) -> bool {
        if !self.ctx.same_field(&other.ctx) {
            return false;
        }
        if self.scalars == other.scalars {
            self.rows == other.rows
        } else {
            self.flat_rows() == other.flat_rows()
        }
    }
}

impl Eq for RdCode {}

pub(crate) fn flatten(ctx: &FieldContext, coeffs: &[Gf]) -> Vec<Gf> {
    let n = ctx.n();
    let mut v = vec![Gf::ZERO; n * n];
    for (i, &a) in coeffs.iter().enumerate() {
        ctx.coords_into(a, &mut v[i * n..(i + 1) * n]);
    }
    v
}

pub(crate) fn unflatten(ctx: &FieldContext, v: &[Gf]) -> Vec<Gf> {
    let n = ctx.n();
    (0..n)
        .map(|i| ctx.from_fq_coordinates(&v[i * n..(i + 1) * n]))
        .collect()
}

fn check_ctx(ctx: &FieldContext, gens: &[LinearizedPoly]) -> Result<()> {
    if gens.iter().all(|g| g.ctx().same_field(ctx)) {
        Ok(())
    } else {
        Err(Error::ContextMismatch)
    }
}

impl RdCode {
    fn from_rows(ctx: &Arc<FieldContext>, scalars: Scalars, mut rows: Matrix) -> Self {
        linalg::rref(ctx, &mut rows);
        RdCode {
            ctx: Arc::clone(ctx),
            scalars,
            rows,
        }
    }

    /// `F_{q^n}`-span of `gens`.
    pub fn from_span_fqn(ctx: &Arc<FieldContext>, gens: &[LinearizedPoly]) -> Result<Self> {
        check_ctx(ctx, gens)?;
        let rows = gens.iter().map(|g| g.coeffs().to_vec()).collect();
        Ok(Self::from_rows(ctx, Scalars::Fqn, rows))
    }

    /// `F_q`-span of `gens`.
    pub fn from_span_fq(ctx: &Arc<FieldContext>, gens: &[LinearizedPoly]) -> Result<Self> {
        check_ctx(ctx, gens)?;
        let rows = gens.iter().map(|g| flatten(ctx, g.coeffs())).collect();
        Ok(Self::from_rows(ctx, Scalars::Fq, rows))
    }

    pub fn zero(ctx: &Arc<FieldContext>, scalars: Scalars) -> Self {
        RdCode {
            ctx: Arc::clone(ctx),
            scalars,
            rows: Vec::new(),
        }
    }

    /// All of `L_n`.
    pub fn full(ctx: &Arc<FieldContext>, scalars: Scalars) -> Self {
        let d = match scalars {
            Scalars::Fq => ctx.n() * ctx.n(),
            Scalars::Fqn => ctx.n(),
        };
        let rows = (0..d)
            .map(|i| (0..d).map(|j| if i == j { Gf::ONE } else { Gf::ZERO }).collect())
            .collect();
        RdCode {
            ctx: Arc::clone(ctx),
            scalars,
            rows,
        }
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn scalars(&self) -> Scalars {
        self.scalars
    }

    pub fn n(&self) -> usize {
        self.ctx.n()
    }

    /// Dimension over the code's own scalars.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// `F_{q^n}`-dimension, for `F_{q^n}`-linear codes.
    pub fn k_fqn(&self) -> Option<usize> {
        match self.scalars {
            Scalars::Fqn => Some(self.rows.len()),
            Scalars::Fq => None,
        }
    }

    pub fn dim_fq(&self) -> usize {
        match self.scalars {
            Scalars::Fqn => self.rows.len() * self.n(),
            Scalars::Fq => self.rows.len(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub(crate) fn rows(&self) -> &Matrix {
        &self.rows
    }

    /// Reduced basis over the code's own scalars.
    pub fn basis(&self) -> Vec<LinearizedPoly> {
        match self.scalars {
            Scalars::Fqn => self
                .rows
                .iter()
                .map(|r| LinearizedPoly::from_vec(&self.ctx, r.clone()))
                .collect(),
            Scalars::Fq => self
                .rows
                .iter()
                .map(|r| LinearizedPoly::from_vec(&self.ctx, unflatten(&self.ctx, r)))
                .collect(),
        }
    }

    /// An `F_q`-basis: the stored basis for `F_q`-codes, `{θ_j f_i}` otherwise.
    pub fn fq_basis(&self) -> Vec<LinearizedPoly> {
        match self.scalars {
            Scalars::Fq => self.basis(),
            Scalars::Fqn => {
                let mut out = Vec::with_capacity(self.dim_fq());
                for f in self.basis() {
                    for &t in self.ctx.fq_basis() {
                        out.push(f.scale(t));
                    }
                }
                out
            }
        }
    }

    /// Reduced basis of the code as an `F_q`-space of flattened vectors.
    pub(crate) fn flat_rows(&self) -> Matrix {
        match self.scalars {
            Scalars::Fq => self.rows.clone(),
            Scalars::Fqn => {
                let mut m: Matrix = self
                    .fq_basis()
                    .iter()
                    .map(|f| flatten(&self.ctx, f.coeffs()))
                    .collect();
                linalg::rref(&self.ctx, &mut m);
                m
            }
        }
    }

    /// Forgets `F_{q^n}`-linearity.
    pub fn to_fq(&self) -> RdCode {
        RdCode {
            ctx: Arc::clone(&self.ctx),
            scalars: Scalars::Fq,
            rows: self.flat_rows(),
        }
    }

    /// Whether an `F_q`-code is closed under left multiplication by the
    /// generator of `F_{q^n}` (and hence by all of `F_{q^n}`).
    pub fn is_fqn_closed(&self) -> bool {
        match self.scalars {
            Scalars::Fqn => true,
            Scalars::Fq => {
                let g = self.ctx.generator();
                let pivots = linalg::pivots_of(&self.rows);
                self.basis().iter().all(|f| {
                    let mut v = flatten(&self.ctx, f.scale(g).coeffs());
                    linalg::reduce(&self.ctx, &self.rows, &pivots, &mut v);
                    v.iter().all(|x| x.is_zero())
                })
            }
        }
    }

    /// Re-expresses an `F_q`-code as `F_{q^n}`-linear when it is closed under
    /// the left scalar action; otherwise returns it unchanged.
    pub fn promote(self) -> RdCode {
        if self.scalars == Scalars::Fqn || !self.is_fqn_closed() {
            return self;
        }
        let rows = self.basis().into_iter().map(|f| f.into_coeffs()).collect();
        let out = Self::from_rows(&self.ctx, Scalars::Fqn, rows);
        debug_assert_eq!(out.dim_fq(), self.dim_fq());
        out
    }

    fn check_same(&self, other: &RdCode) -> Result<()> {
        if !self.ctx.same_field(&other.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.scalars != other.scalars {
            return Err(Error::ScalarModeMismatch);
        }
        Ok(())
    }

    pub fn contains(&self, f: &LinearizedPoly) -> Result<bool> {
        if !self.ctx.same_field(f.ctx()) {
            return Err(Error::ContextMismatch);
        }
        let mut v = match self.scalars {
            Scalars::Fqn => f.coeffs().to_vec(),
            Scalars::Fq => flatten(&self.ctx, f.coeffs()),
        };
        let pivots = linalg::pivots_of(&self.rows);
        linalg::reduce(&self.ctx, &self.rows, &pivots, &mut v);
        Ok(v.iter().all(|x| x.is_zero()))
    }

    fn width(&self) -> usize {
        match self.scalars {
            Scalars::Fqn => self.n(),
            Scalars::Fq => self.n() * self.n(),
        }
    }

    pub fn intersect(&self, other: &RdCode) -> Result<RdCode> {
        self.check_same(other)?;
        let rows = linalg::intersect(&self.ctx, &self.rows, &other.rows, self.width());
        Ok(RdCode {
            ctx: Arc::clone(&self.ctx),
            scalars: self.scalars,
            rows,
        })
    }

    pub fn sum(&self, other: &RdCode) -> Result<RdCode> {
        self.check_same(other)?;
        Ok(RdCode {
            ctx: Arc::clone(&self.ctx),
            scalars: self.scalars,
            rows: linalg::sum(&self.ctx, &self.rows, &other.rows),
        })
    }

    /// `C^{[s]} = {f^{[s]} : f ∈ C}`.
    pub fn shift_code(&self, s: i64) -> RdCode {
        let gens: Vec<LinearizedPoly> = self.basis().iter().map(|f| f.frobenius_shift(s)).collect();
        match self.scalars {
            Scalars::Fqn => Self::from_span_fqn(&self.ctx, &gens),
            Scalars::Fq => Self::from_span_fq(&self.ctx, &gens),
        }
        .expect("same context")
    }

    /// Parity-check rows over `F_q`: `flat(f) ∈ C` iff every row is orthogonal to it.
    pub(crate) fn fq_parity(&self) -> Matrix {
        let n = self.n();
        linalg::nullspace(&self.ctx, &self.flat_rows(), n * n)
    }

    // -- enumeration ---------------------------------------------------

    fn scan(&self) -> Scan<'_> {
        Scan::new(self)
    }

    /// Iterates codewords; `projective` yields one representative per
    /// scalar class of nonzero codewords (first nonzero coefficient 1).
    pub fn codewords(&self, projective: bool, budget: u64) -> Result<Codewords<'_>> {
        if projective && self.scalars == Scalars::Fq {
            return Err(Error::BadParams(
                "projective enumeration needs an F_{q^n}-linear code".into(),
            ));
        }
        let scan = self.scan();
        let count = scan.count(projective);
        if count > budget as u128 {
            return Err(Error::BudgetExceeded(count));
        }
        Ok(Codewords {
            basis: self.basis(),
            buf: vec![Gf::ZERO; scan.k],
            scan,
            projective,
            next: 0,
            count: count as u64,
        })
    }

    /// Number of scalar classes of nonzero codewords (over the code's scalars).
    pub fn projective_count(&self) -> u128 {
        self.scan().count(true)
    }

    fn require_nonzero(&self) -> Result<()> {
        if self.is_zero() {
            Err(Error::BadParams("the zero code has no minimum distance".into()))
        } else {
            Ok(())
        }
    }

    fn enumerable(&self, budget: u64) -> Result<(Scan<'_>, u64)> {
        let scan = self.scan();
        let count = scan.count(true);
        if count > budget as u128 {
            return Err(Error::BudgetExceeded(count));
        }
        Ok((scan, count as u64))
    }

    pub fn min_distance(&self, budget: u64) -> Result<usize> {
        self.min_distance_in(&Search::with_budget(budget)).map(|(d, _)| d)
    }

    /// Exhaustive minimum distance and the first codeword attaining it.
    pub fn min_distance_in(&self, search: &Search) -> Result<(usize, LinearizedPoly)> {
        self.require_nonzero()?;
        let (scan, count) = self.enumerable(search.budget)?;
        let (r, idx) = par::min_by(search.exec, count, || scan.state(), |st, i| {
            scan.rank_at(st, i, true)
        })
        .expect("nonzero code has codewords");
        Ok((r, scan.poly_at(self, idx, true)))
    }

    pub fn rank_distribution(&self, budget: u64) -> Result<RankDistribution> {
        self.rank_distribution_in(&Search::with_budget(budget))
    }

    /// Exact rank distribution, counted projectively and scaled back up.
    pub fn rank_distribution_in(&self, search: &Search) -> Result<RankDistribution> {
        let n = self.n();
        let (scan, count) = self.enumerable(search.budget)?;
        let mut counts = par::histogram(search.exec, count, n + 1, || scan.state(), |st, i| {
            scan.rank_at(st, i, true)
        });
        let scale = scan.alphabet as u128 - 1;
        for c in counts.iter_mut() {
            *c *= scale;
        }
        counts[0] = 1;
        Ok(RankDistribution { counts })
    }

    /// Minimum rank over `samples` uniformly random nonzero codewords.
    pub fn sample_min_rank(&self, samples: u64, seed: u64) -> Result<usize> {
        self.require_nonzero()?;
        let s = Search {
            samples,
            seed,
            ..Default::default()
        };
        Ok(self.sample(&s).min.expect("samples > 0").0)
    }

    /// Histogram of ranks over random nonzero codewords (raw sample counts).
    pub fn sampled_rank_profile(&self, samples: u64, seed: u64) -> Result<RankDistribution> {
        self.require_nonzero()?;
        let s = Search {
            samples,
            seed,
            ..Default::default()
        };
        Ok(RankDistribution {
            counts: self.sample(&s).hist,
        })
    }

    fn sample(&self, search: &Search) -> SampleResult {
        const BLOCK: u64 = 1024;
        let scan = self.scan();
        let blocks = search.samples.div_ceil(BLOCK);
        let n = self.n();
        let parts = par::map_collect(search.exec, blocks, |b| {
            let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
            rng.set_stream(b);
            let mut st = scan.state();
            let mut hist = vec![0u128; n + 1];
            let mut best: Option<(usize, u64, Vec<Gf>)> = None;
            let end = ((b + 1) * BLOCK).min(search.samples);
            for idx in b * BLOCK..end {
                scan.random_coeffs(&mut rng, &mut st.coeffs);
                let c = std::mem::take(&mut st.coeffs);
                let r = scan.rank_of(&mut st, &c);
                hist[r] += 1;
                if best.as_ref().is_none_or(|(br, _, _)| r < *br) {
                    best = Some((r, idx, c.clone()));
                }
                st.coeffs = c;
            }
            (hist, best)
        });
        let mut hist = vec![0u128; n + 1];
        let mut best: Option<(usize, u64, Vec<Gf>)> = None;
        for (h, b) in parts {
            for (x, y) in hist.iter_mut().zip(h) {
                *x += y;
            }
            if let Some(b) = b {
                if best.as_ref().is_none_or(|cur| (b.0, b.1) < (cur.0, cur.1)) {
                    best = Some(b);
                }
            }
        }
        SampleResult {
            hist,
            min: best.map(|(r, _, c)| (r, scan.combine(self, &c))),
        }
    }

    /// Designed minimum distance for MRD-ness, `None` if the `F_q`-dimension
    /// is not a multiple of `n` (no code of that size can be MRD).
    pub fn singleton_distance(&self) -> Option<usize> {
        let n = self.n();
        let d = self.dim_fq();
        if d == 0 || d % n != 0 {
            return None;
        }
        Some(n - d / n + 1)
    }

    pub fn is_mrd(&self, budget: u64) -> MrdStatus {
        self.is_mrd_in(&Search::with_budget(budget))
    }

    /// Exhaustive when the projective count fits the budget, sampled otherwise.
    pub fn is_mrd_in(&self, search: &Search) -> MrdStatus {
        let Some(d) = self.singleton_distance() else {
            return MrdStatus::VerifiedFalse { witness: None };
        };
        match self.enumerable(search.budget) {
            Ok((scan, count)) => {
                let hit = par::find_first(search.exec, count, || scan.state(), |st, i| {
                    scan.rank_at(st, i, true) < d
                });
                match hit {
                    None => MrdStatus::VerifiedTrue,
                    Some(i) => MrdStatus::VerifiedFalse {
                        witness: Some(scan.poly_at(self, i, true)),
                    },
                }
            }
            Err(_) => {
                let res = self.sample(search);
                match res.min {
                    Some((r, w)) if r < d => MrdStatus::VerifiedFalse { witness: Some(w) },
                    _ => MrdStatus::SampledConsistent {
                        samples: search.samples,
                    },
                }
            }
        }
    }

    // -- duality and equivalence ---------------------------------------

    /// `C^⊥` with respect to `b(f, g) = Tr(Σ f_i g_i)`.
    pub fn delsarte_dual(&self) -> RdCode {
        match self.scalars {
            Scalars::Fqn => {
                let rows = linalg::nullspace(&self.ctx, &self.rows, self.n());
                RdCode {
                    ctx: Arc::clone(&self.ctx),
                    scalars: Scalars::Fqn,
                    rows,
                }
            }
            Scalars::Fq => self.delsarte_dual_trace(),
        }
    }

    /// The dual computed from the trace form over `F_q`, regardless of mode.
    pub fn delsarte_dual_trace(&self) -> RdCode {
        let ctx = &*self.ctx;
        let n = self.n();
        let gram: Matrix = self
            .fq_basis()
            .iter()
            .map(|g| {
                let mut r = Vec::with_capacity(n * n);
                for &gi in g.coeffs() {
                    for &b in ctx.fq_basis() {
                        r.push(ctx.rel_trace(ctx.mul(b, gi)));
                    }
                }
                r
            })
            .collect();
        let rows = linalg::nullspace(ctx, &gram, n * n);
        RdCode {
            ctx: Arc::clone(&self.ctx),
            scalars: Scalars::Fq,
            rows,
        }
        .promote()
    }

    /// `C^⊤ = {f̂ : f ∈ C}`. May be only right-`F_{q^n}`-linear, in which
    /// case it is returned as an `F_q`-code.
    pub fn adjoint_code(&self) -> RdCode {
        let gens: Vec<LinearizedPoly> = self.fq_basis().iter().map(|f| f.adjoint()).collect();
        Self::from_span_fq(&self.ctx, &gens)
            .expect("same context")
            .promote()
    }

    /// `{h ∘ f^σ ∘ g : f ∈ C}` with `σ: a ↦ a^{p^sigma_exp}`.
    pub fn apply_equivalence(
        &self,
        h: &LinearizedPoly,
        g: &LinearizedPoly,
        sigma_exp: u32,
    ) -> Result<RdCode> {
        check_ctx(&self.ctx, &[h.clone(), g.clone()])?;
        if !h.is_invertible() || !g.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let gens: Vec<LinearizedPoly> = self
            .fq_basis()
            .iter()
            .map(|f| {
                h.compose_unchecked(&f.sigma(sigma_exp))
                    .compose_unchecked(g)
            })
            .collect();
        Ok(Self::from_span_fq(&self.ctx, &gens)?.promote())
    }

    /// Uniformly random subspace of dimension `k` over the given scalars.
    pub fn random_code(
        ctx: &Arc<FieldContext>,
        k: usize,
        scalars: Scalars,
        seed: u64,
    ) -> Result<RdCode> {
        let n = ctx.n();
        let width = match scalars {
            Scalars::Fqn => n,
            Scalars::Fq => n * n,
        };
        if k > width {
            return Err(Error::BadParams(format!("k = {k} exceeds {width}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let rows: Matrix = (0..k)
                .map(|_| {
                    (0..width)
                        .map(|_| match scalars {
                            Scalars::Fqn => ctx.from_int(rng.gen_range(0..ctx.size())),
                            Scalars::Fq => {
                                ctx.fq_elements()[rng.gen_range(0..ctx.q() as usize)]
                            }
                        })
                        .collect()
                })
                .collect();
            let code = Self::from_rows(ctx, scalars, rows);
            if code.dim() == k {
                return Ok(code);
            }
        }
    }

    // -- serialization -------------------------------------------------

    pub fn to_json(&self) -> CodeJson {
        CodeJson {
            ctx: self.ctx.descriptor(),
            scalars: self.scalars,
            basis: self.basis().iter().map(|f| f.to_strings()).collect(),
        }
    }

    pub fn from_json(j: &CodeJson) -> Result<RdCode> {
        let ctx = Arc::new(FieldContext::from_descriptor(&j.ctx)?);
        let gens = j
            .basis
            .iter()
            .map(|b| LinearizedPoly::from_strings(&ctx, b))
            .collect::<Result<Vec<_>>>()?;
        match j.scalars {
            Scalars::Fqn => Self::from_span_fqn(&ctx, &gens),
            Scalars::Fq => Self::from_span_fq(&ctx, &gens),
        }
    }
}

/// `{"ctx": …, "scalars": "fq"|"fqn", "basis": [[element, …], …]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub ctx: ContextDescriptor,
    pub scalars: Scalars,
    pub basis: Vec<Vec<String>>,
}

struct SampleResult {
    hist: Vec<u128>,
    min: Option<(usize, LinearizedPoly)>,
}

/// Precomputed data for rank scans: `evals[i][j] = f_i(b_j)` for the basis
/// over the code's scalars, and the alphabet of coefficients.
struct Scan<'a> {
    ctx: &'a FieldContext,
    scalars: Scalars,
    n: usize,
    k: usize,
    alphabet: u64,
    evals: Vec<Vec<Gf>>,
    prime: Option<PrimeCoords>,
}

struct ScanState {
    coeffs: Vec<Gf>,
    buf: Vec<Gf>,
    small: Vec<u8>,
    bits: Vec<u64>,
}

/// Largest field for which `F_p`-coordinate tables are built.
const PRIME_TABLE_CAP: u32 = 1 << 21;

/// For prime `q`: `F_q`-coordinates of every element as bytes (or bitmasks
/// at `p = 2`), so ranks avoid the Zech tables.
enum PrimeCoords {
    Two(Vec<u64>),
    Odd {
        p: u8,
        coords: Vec<u8>,
        mul: Vec<[u8; 256]>,
        inv: Vec<u8>,
    },
}

impl PrimeCoords {
    fn new(ctx: &FieldContext) -> Option<Self> {
        let (p, n, size) = (ctx.p(), ctx.n(), ctx.size());
        if ctx.e() != 1 || p > 251 || n > 64 || size > PRIME_TABLE_CAP {
            return None;
        }
        let mut tmp = vec![Gf::ZERO; n];
        let mut digits = |v: u32| {
            ctx.coords_into(ctx.from_int(v), &mut tmp);
            tmp.iter().map(|&c| ctx.to_int(c) as u8).collect::<Vec<u8>>()
        };
        if p == 2 {
            let bits = (0..size)
                .map(|v| {
                    digits(v)
                        .iter()
                        .enumerate()
                        .fold(0u64, |acc, (i, &d)| acc | ((d as u64) << i))
                })
                .collect();
            return Some(PrimeCoords::Two(bits));
        }
        let coords = (0..size).flat_map(&mut digits).collect();
        let pu = p as usize;
        let mul = (0..pu)
            .map(|a| {
                let mut row = [0u8; 256];
                for (b, x) in row.iter_mut().enumerate().take(pu) {
                    *x = (a * b % pu) as u8;
                }
                row
            })
            .collect();
        let mut inv = vec![0u8; pu];
        for a in 1..pu {
            inv[a] = (1..pu).find(|b| a * b % pu == 1).unwrap() as u8;
        }
        Some(PrimeCoords::Odd {
            p: p as u8,
            coords,
            mul,
            inv,
        })
    }
}

impl<'a> Scan<'a> {
    fn new(code: &'a RdCode) -> Self {
        let ctx = &*code.ctx;
        let alphabet = match code.scalars {
            Scalars::Fqn => ctx.size() as u64,
            Scalars::Fq => ctx.q() as u64,
        };
        let evals = code.basis().iter().map(|f| f.values_on_basis()).collect();
        Scan {
            ctx,
            scalars: code.scalars,
            n: ctx.n(),
            k: code.dim(),
            alphabet,
            evals,
            // only worth building when the scan dwarfs the table
            prime: (pow_sat(alphabet as u128, code.dim().saturating_sub(1) as u32)
                >= ctx.size() as u128)
                .then(|| PrimeCoords::new(ctx))
                .flatten(),
        }
    }

    fn state(&self) -> ScanState {
        ScanState {
            coeffs: vec![Gf::ZERO; self.k],
            buf: vec![Gf::ZERO; self.n * self.n],
            small: vec![0; self.n * self.n],
            bits: vec![0; self.n],
        }
    }

    fn count(&self, projective: bool) -> u128 {
        let s = self.alphabet as u128;
        if projective {
            (0..self.k as u32).fold(0u128, |acc, l| acc.saturating_add(pow_sat(s, l)))
        } else {
            pow_sat(s, self.k as u32)
        }
    }

    #[inline]
    fn letter(&self, d: u64) -> Gf {
        match self.scalars {
            Scalars::Fqn => self.ctx.from_int(d as u32),
            Scalars::Fq => self.ctx.fq_elements()[d as usize],
        }
    }

    /// Coefficient vector of the `idx`-th codeword.
    fn decode(&self, mut idx: u64, projective: bool, out: &mut [Gf]) {
        let s = self.alphabet;
        let mut lead = 0;
        if projective {
            for l in 0..self.k {
                let block = s.pow((self.k - 1 - l) as u32);
                if idx < block {
                    lead = l;
                    break;
                }
                idx -= block;
            }
            for c in out[..lead].iter_mut() {
                *c = Gf::ZERO;
            }
            out[lead] = Gf::ONE;
            lead += 1;
        }
        for c in out[lead..].iter_mut().rev() {
            *c = self.letter(idx % s);
            idx /= s;
        }
    }

    fn random_coeffs<R: Rng>(&self, rng: &mut R, out: &mut Vec<Gf>) {
        out.resize(self.k, Gf::ZERO);
        loop {
            for c in out.iter_mut() {
                *c = self.letter(rng.gen_range(0..self.alphabet));
            }
            if out.iter().any(|c| !c.is_zero()) {
                return;
            }
        }
    }

    #[inline]
    fn rank_of(&self, st: &mut ScanState, c: &[Gf]) -> usize {
        let ctx = self.ctx;
        let n = self.n;
        let value = |j: usize| {
            let mut v = Gf::ZERO;
            for (ci, ev) in c.iter().zip(&self.evals) {
                if !ci.is_zero() {
                    v = ctx.add(v, ctx.mul(*ci, ev[j]));
                }
            }
            v
        };
        match &self.prime {
            Some(PrimeCoords::Two(bits)) => {
                for j in 0..n {
                    st.bits[j] = bits[ctx.to_int(value(j)) as usize];
                }
                linalg::rank_gf2(&mut st.bits)
            }
            Some(PrimeCoords::Odd { p, coords, mul, inv }) => {
                for j in 0..n {
                    let v = ctx.to_int(value(j)) as usize;
                    st.small[j * n..(j + 1) * n].copy_from_slice(&coords[v * n..(v + 1) * n]);
                }
                linalg::rank_mod_p(&mut st.small, n, n, *p, mul, inv)
            }
            None => {
                for j in 0..n {
                    let v = value(j);
                    ctx.coords_into(v, &mut st.buf[j * n..(j + 1) * n]);
                }
                linalg::rank_in_place(ctx, &mut st.buf, n, n)
            }
        }
    }

    #[inline]
    fn rank_at(&self, st: &mut ScanState, idx: u64, projective: bool) -> usize {
        let mut c = std::mem::take(&mut st.coeffs);
        self.decode(idx, projective, &mut c);
        let r = self.rank_of(st, &c);
        st.coeffs = c;
        r
    }

    fn combine(&self, code: &RdCode, c: &[Gf]) -> LinearizedPoly {
        let ctx = &code.ctx;
        let mut acc = LinearizedPoly::zero(ctx);
        for (ci, f) in c.iter().zip(code.basis()) {
            if !ci.is_zero() {
                acc = acc.add(&f.scale(*ci)).expect("same context");
            }
        }
        acc
    }

    fn poly_at(&self, code: &RdCode, idx: u64, projective: bool) -> LinearizedPoly {
        let mut c = vec![Gf::ZERO; self.k];
        self.decode(idx, projective, &mut c);
        self.combine(code, &c)
    }
}

/// Iterator returned by [`RdCode::codewords`].
pub struct Codewords<'a> {
    scan: Scan<'a>,
    basis: Vec<LinearizedPoly>,
    buf: Vec<Gf>,
    projective: bool,
    next: u64,
    count: u64,
}

impl Iterator for Codewords<'_> {
    type Item = LinearizedPoly;

    fn next(&mut self) -> Option<LinearizedPoly> {
        if self.next == self.count {
            return None;
        }
        self.scan.decode(self.next, self.projective, &mut self.buf);
        self.next += 1;
        let ctx = self.basis.first().map(|f| Arc::clone(f.ctx()))?;
        let mut acc = LinearizedPoly::zero(&ctx);
        for (ci, f) in self.buf.iter().zip(&self.basis) {
            if !ci.is_zero() {
                acc = acc.add(&f.scale(*ci)).expect("same context");
            }
        }
        Some(acc)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = (self.count - self.next) as usize;
        (r, Some(r))
    }
}
