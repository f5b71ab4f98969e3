//! Finite field towers `F_p ⊆ F_q = F_{p^e} ⊆ F_{q^n}`.
//!
//! Elements are stored as discrete logarithms with respect to a fixed
//! primitive element, and addition goes through a Zech logarithm table.
//! The polynomial basis over `F_p` (digits of an element, constant term
//! first) is kept alongside for serialization, for the `F_q`-coordinate
//! map, and as an independent cross-check of the table arithmetic.
//!
//! The subfield `F_q` is the fixed field of `a ↦ a^q` inside `F_{q^n}`;
//! there is no separate type for it.

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_factors};
use crate::error::{Error, Result};

/// Default limit on `|F_{q^n}|` for table construction.
pub const DEFAULT_TABLE_CAP: u64 = 1 << 24;

/// Coordinate tables are materialized when `|F_{q^n}| · n` stays below this.
const COORD_TABLE_LIMIT: u64 = 1 << 23;

/// An element of `F_{q^n}` in discrete-log form.
///
/// `Gf::ZERO` is a distinguished marker; every other value is the exponent
/// of the context generator. The element does not carry its context: codes
/// and polynomials do, and they are where mismatches are caught.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Gf(u32);

pub type FieldElement = Gf;

impl Gf {
    pub const ZERO: Gf = Gf(u32::MAX);
    pub const ONE: Gf = Gf(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == u32::MAX
    }

    /// Discrete log with respect to the context generator, `None` for zero.
    #[inline]
    pub fn log(self) -> Option<u32> {
        if self.is_zero() {
            None
        } else {
            Some(self.0)
        }
    }
}

impl Default for Gf {
    fn default() -> Self {
        Gf::ZERO
    }
}

/// Arithmetic tables and subfield data for one tower.
#[derive(Debug)]
pub struct FieldContext {
    p: u32,
    e: u32,
    n: u32,
    q: u32,
    size: u32,
    /// |F_{q^n}^*|
    m: u32,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg_one: u32,
    q_pow: Vec<u64>,
    fq_elements: Vec<Gf>,
    fq_basis: Vec<Gf>,
    /// `basis_frob[j][i] = fq_basis[j]^{q^i}`
    basis_frob: Vec<Vec<Gf>>,
    /// inverse of the Moore matrix `M[j][i] = fq_basis[j]^{q^i}`
    moore_inv: Vec<Vec<Gf>>,
    /// F_p coordinates of a digit vector with respect to `{w^t b_i}`, row index `i*e + t`.
    coord_inv: Vec<Vec<u32>>,
    /// powers `w^t` of the primitive element of F_q, `t < e`
    fq_gen_pows: Vec<Gf>,
    coord_table: Option<Vec<Gf>>,
}

impl FieldContext {
    /// Builds the tower with the default table cap.
    pub fn new(p: u64, e: u32, n: u32) -> Result<Self> {
        Self::with_cap(p, e, n, DEFAULT_TABLE_CAP)
    }

    /// Builds the tower `F_p ⊆ F_{p^e} ⊆ F_{p^{en}}`.
    ///
    /// The modulus is the lexicographically smallest irreducible monic
    /// polynomial of degree `e·n` (coefficients compared constant term
    /// first) and the generator is the smallest primitive element in the
    /// integer encoding of the polynomial basis.
    pub fn with_cap(p: u64, e: u32, n: u32, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if e == 0 || n == 0 {
            return Err(Error::BadParams("e and n must be positive".into()));
        }
        let degree = e * n;
        let size = (p as u128).checked_pow(degree).unwrap_or(u128::MAX);
        if size > cap as u128 || size > u32::MAX as u128 / 2 {
            return Err(Error::TableCapExceeded { size, cap });
        }
        let size = size as u32;
        let p32 = p as u32;
        let d = degree as usize;

        let modulus = smallest_irreducible(p32, d);
        let generator = smallest_primitive(p32, &modulus, size);

        let m = size - 1;
        let mut exp = vec![0u32; m as usize];
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = vec![0u32; d];
        cur[0] = 1;
        let gen_digits = to_digits(generator, p32, d);
        let is_x = d > 1 && generator == p32;
        for i in 0..m as usize {
            let v = from_digits(&cur, p32);
            exp[i] = v;
            log[v as usize] = i as u32;
            cur = if is_x {
                mul_by_x(&cur, &modulus, p32)
            } else {
                poly_mulmod(&cur, &gen_digits, &modulus, p32)
            };
        }

        // zech[k] = log(1 + g^k)
        let mut zech = vec![u32::MAX; m as usize];
        for k in 0..m as usize {
            let v = exp[k];
            let low = v % p32;
            let w = v - low + (low + 1) % p32;
            zech[k] = log[w as usize];
        }
        let neg_one = if p == 2 { 0 } else { m / 2 };

        let q = p32.pow(e);
        let mut q_pow = Vec::with_capacity(n as usize);
        let mut acc: u64 = 1;
        for _ in 0..n {
            q_pow.push(acc);
            acc = acc * q as u64 % m.max(1) as u64;
        }

        let mut ctx = FieldContext {
            p: p32,
            e,
            n,
            q,
            size,
            m,
            modulus,
            generator,
            exp,
            log,
            zech,
            neg_one,
            q_pow,
            fq_elements: Vec::new(),
            fq_basis: Vec::new(),
            basis_frob: Vec::new(),
            moore_inv: Vec::new(),
            coord_inv: Vec::new(),
            fq_gen_pows: Vec::new(),
            coord_table: None,
        };
        ctx.init_subfield();
        Ok(ctx)
    }

    fn init_subfield(&mut self) {
        let step = self.m / (self.q - 1);
        let mut fq = vec![Gf::ZERO];
        fq.extend((0..self.q - 1).map(|j| Gf(j * step)));
        self.fq_elements = fq;

        let e = self.e as usize;
        let d = (self.e * self.n) as usize;
        let w = Gf(step % self.m.max(1));
        let mut pows = Vec::with_capacity(e);
        let mut acc = Gf::ONE;
        for _ in 0..e {
            pows.push(acc);
            acc = self.mul(acc, w);
        }
        self.fq_gen_pows = pows;

        // greedy F_q-independent scan in generator-power order
        let p = self.p;
        let mut echelon: Vec<(usize, Vec<u32>)> = Vec::new();
        let mut basis = Vec::new();
        let mut columns: Vec<Vec<u32>> = Vec::new();
        for l in 0..self.m {
            if basis.len() == self.n as usize {
                break;
            }
            let cand = Gf(l);
            let digits = self.digits(cand);
            if fp_reduce(&echelon, digits, p).iter().all(|&x| x == 0) {
                continue;
            }
            basis.push(cand);
            for t in 0..e {
                let v = self.digits(self.mul(self.fq_gen_pows[t], cand));
                columns.push(v.clone());
                let r = fp_reduce(&echelon, v, p);
                fp_insert(&mut echelon, r, p);
            }
        }
        debug_assert_eq!(basis.len(), self.n as usize);
        self.fq_basis = basis;

        // columns[i*e + t] = digits(w^t b_i); invert the D×D matrix
        let mut mat = vec![vec![0u32; d]; d];
        for (c, col) in columns.iter().enumerate() {
            for r in 0..d {
                mat[r][c] = col[r];
            }
        }
        self.coord_inv = fp_invert(mat, p).expect("F_q basis expansion is invertible");

        let n = self.n as usize;
        self.basis_frob = self
            .fq_basis
            .iter()
            .map(|&b| (0..n).map(|i| self.frobenius(b, i as i64)).collect())
            .collect();
        self.moore_inv = crate::linalg::invert(self, &self.basis_frob)
            .expect("Moore matrix of an F_q basis is invertible");

        if (self.size as u64) * (self.n as u64) <= COORD_TABLE_LIMIT {
            self.build_coord_table();
        }
    }

    fn build_coord_table(&mut self) {
        let n = self.n as usize;
        let size = self.size as usize;
        let mut table = vec![Gf::ZERO; size * n];
        // entries for d·p^k, then table[v] = table[v - d p^k] + table[d p^k]
        let mut pk = 1usize;
        let p = self.p as usize;
        while pk < size {
            for dgt in 1..p {
                let v = dgt * pk;
                let c = self.coords_slow(self.from_int(v as u32));
                table[v * n..(v + 1) * n].copy_from_slice(&c);
            }
            for v in pk..(pk * p).min(size) {
                let top = v / pk;
                let rest = v - top * pk;
                if rest == 0 {
                    continue;
                }
                for i in 0..n {
                    let a = table[rest * n + i];
                    let b = table[top * pk * n + i];
                    table[v * n + i] = self.add(a, b);
                }
            }
            pk *= p;
        }
        self.coord_table = Some(table);
    }

    fn coords_slow(&self, a: Gf) -> Vec<Gf> {
        let n = self.n as usize;
        let e = self.e as usize;
        let digits = self.digits(a);
        let p = self.p as u64;
        let mut out = vec![Gf::ZERO; n];
        for i in 0..n {
            let mut acc = Gf::ZERO;
            for t in 0..e {
                let row = &self.coord_inv[i * e + t];
                let c = row
                    .iter()
                    .zip(&digits)
                    .fold(0u64, |s, (&x, &y)| (s + x as u64 * y as u64) % p);
                let term = self.mul(self.from_int(c as u32), self.fq_gen_pows[t]);
                acc = self.add(acc, term);
            }
            out[i] = acc;
        }
        out
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn n(&self) -> usize {
        self.n as usize
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// `|F_{q^n}|`
    pub fn size(&self) -> u32 {
        self.size
    }
    pub fn total_degree(&self) -> u32 {
        self.e * self.n
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn generator(&self) -> Gf {
        Gf(if self.m == 1 { 0 } else { 1 })
    }
    /// Generator in the integer encoding of the polynomial basis.
    pub fn generator_int(&self) -> u32 {
        self.generator
    }
    pub fn fq_elements(&self) -> &[Gf] {
        &self.fq_elements
    }
    pub fn fq_basis(&self) -> &[Gf] {
        &self.fq_basis
    }
    /// `fq_basis[j]^{q^i}` at `[j][i]`.
    pub(crate) fn basis_frob(&self) -> &[Vec<Gf>] {
        &self.basis_frob
    }
    pub(crate) fn moore_inv(&self) -> &[Vec<Gf>] {
        &self.moore_inv
    }

    /// Same tower and representation.
    pub fn same_field(&self, other: &FieldContext) -> bool {
        std::ptr::eq(self, other) || (self.p, self.e, self.n) == (other.p, other.e, other.n)
    }

    // -- conversions ---------------------------------------------------

    /// Element with integer encoding `v` (base-p digits, constant term least significant).
    pub fn from_int(&self, v: u32) -> Gf {
        assert!(v < self.size, "integer encoding out of range");
        Gf(self.log[v as usize])
    }

    pub fn to_int(&self, a: Gf) -> u32 {
        match a.log() {
            None => 0,
            Some(l) => self.exp[l as usize],
        }
    }

    /// `g^k` for the context generator `g`.
    pub fn gen_pow(&self, k: u64) -> Gf {
        Gf((k % self.m as u64) as u32)
    }

    /// Element from a discrete log, reduced modulo the group order.
    pub fn from_log(&self, l: u64) -> Gf {
        self.gen_pow(l)
    }

    /// Digit vector over F_p, constant term first, length `e·n`.
    pub fn digits(&self, a: Gf) -> Vec<u32> {
        to_digits(self.to_int(a), self.p, (self.e * self.n) as usize)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Gf> {
        if digits.len() != (self.e * self.n) as usize || digits.iter().any(|&d| d >= self.p) {
            return Err(Error::Parse("bad digit vector".into()));
        }
        Ok(self.from_int(from_digits(digits, self.p)))
    }

    /// Serializes as a base-p digit string, constant term first.
    pub fn element_to_string(&self, a: Gf) -> String {
        let digits = self.digits(a);
        if self.p <= 10 {
            digits.iter().map(|d| char::from(b'0' + *d as u8)).collect()
        } else {
            digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
        }
    }

    /// Parses a digit string or a generator power `g^i`.
    pub fn parse_element(&self, s: &str) -> Result<Gf> {
        let s = s.trim();
        if s == "0" && self.total_degree() != 1 {
            return Ok(Gf::ZERO);
        }
        if let Some(rest) = s.strip_prefix("g^") {
            let k: u64 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            return Ok(self.gen_pow(k));
        }
        let digits: Vec<u32> = if s.contains('.') {
            s.split('.')
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad digit in {s:?}"))))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::Parse(format!("bad digit in {s:?}"))))
                .collect::<Result<_>>()?
        };
        self.from_digits(&digits)
    }

    // -- arithmetic ----------------------------------------------------

    #[inline]
    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let m = self.m;
        let diff = if b.0 >= a.0 { b.0 - a.0 } else { b.0 + m - a.0 };
        let z = self.zech[diff as usize];
        if z == u32::MAX {
            return Gf::ZERO;
        }
        let s = a.0 + z;
        Gf(if s >= m { s - m } else { s })
    }

    #[inline]
    pub fn neg(&self, a: Gf) -> Gf {
        if a.is_zero() {
            return a;
        }
        let s = a.0 + self.neg_one;
        Gf(if s >= self.m { s - self.m } else { s })
    }

    #[inline]
    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.is_zero() || b.is_zero() {
            return Gf::ZERO;
        }
        let s = a.0 + b.0;
        Gf(if s >= self.m { s - self.m } else { s })
    }

    pub fn inv(&self, a: Gf) -> Result<Gf> {
        match a.log() {
            None => Err(Error::DivisionByZero),
            Some(0) => Ok(Gf::ONE),
            Some(l) => Ok(Gf(self.m - l)),
        }
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Gf, k: u64) -> Gf {
        match a.log() {
            None => {
                if k == 0 {
                    Gf::ONE
                } else {
                    Gf::ZERO
                }
            }
            Some(l) => Gf(((l as u128 * k as u128) % self.m as u128) as u32),
        }
    }

    /// `a^{q^j}` with `j` reduced modulo `n`.
    #[inline]
    pub fn frobenius(&self, a: Gf, j: i64) -> Gf {
        match a.log() {
            None => a,
            Some(l) => {
                let j = j.rem_euclid(self.n as i64) as usize;
                Gf(((l as u64 * self.q_pow[j]) % self.m as u64) as u32)
            }
        }
    }

    /// `a^{p^t}`, the field automorphism used by code equivalences.
    pub fn p_power(&self, a: Gf, t: u32) -> Gf {
        let k = (self.p as u64).pow(t % self.total_degree());
        self.pow(a, k)
    }

    /// Relative trace `Tr_{q^n/q}(a) = Σ a^{q^i}`.
    pub fn rel_trace(&self, a: Gf) -> Gf {
        (0..self.n as i64).fold(Gf::ZERO, |acc, i| self.add(acc, self.frobenius(a, i)))
    }

    /// Relative norm `a^{(q^n-1)/(q-1)}`; the norm of zero is zero.
    pub fn rel_norm(&self, a: Gf) -> Gf {
        match a.log() {
            None => Gf::ZERO,
            Some(_) => self.pow(a, (self.m / (self.q - 1)) as u64),
        }
    }

    /// `(-1)^k` as a field element.
    pub fn minus_one_pow(&self, k: u64) -> Gf {
        if k % 2 == 0 {
            Gf::ONE
        } else {
            self.neg(Gf::ONE)
        }
    }

    /// `a^q = a`
    pub fn is_in_subfield(&self, a: Gf) -> bool {
        self.frobenius(a, 1) == a
    }

    /// Unique `c ∈ F_q^n` with `a = Σ c_i · fq_basis[i]`.
    pub fn fq_coordinates(&self, a: Gf) -> Vec<Gf> {
        self.coords(a).into_owned()
    }

    pub(crate) fn coords(&self, a: Gf) -> std::borrow::Cow<'_, [Gf]> {
        match &self.coord_table {
            Some(t) => {
                let n = self.n as usize;
                let v = self.to_int(a) as usize;
                std::borrow::Cow::Borrowed(&t[v * n..(v + 1) * n])
            }
            None => std::borrow::Cow::Owned(self.coords_slow(a)),
        }
    }

    /// Writes the coordinates of `a` into `out[..n]`.
    #[inline]
    pub(crate) fn coords_into(&self, a: Gf, out: &mut [Gf]) {
        match &self.coord_table {
            Some(t) => {
                let n = self.n as usize;
                let v = self.to_int(a) as usize;
                out[..n].copy_from_slice(&t[v * n..(v + 1) * n]);
            }
            None => out[..self.n as usize].copy_from_slice(&self.coords_slow(a)),
        }
    }

    /// `Σ c_i · fq_basis[i]`
    pub fn from_fq_coordinates(&self, c: &[Gf]) -> Gf {
        c.iter()
            .zip(&self.fq_basis)
            .fold(Gf::ZERO, |acc, (&ci, &b)| self.add(acc, self.mul(ci, b)))
    }

    /// Field addition through the polynomial basis, bypassing the Zech table.
    pub fn add_via_digits(&self, a: Gf, b: Gf) -> Gf {
        let x = self.digits(a);
        let y = self.digits(b);
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.from_int(from_digits(&s, self.p))
    }

    /// Field multiplication through polynomial reduction, bypassing the log tables.
    pub fn mul_via_digits(&self, a: Gf, b: Gf) -> Gf {
        let x = self.digits(a);
        let y = self.digits(b);
        self.from_int(from_digits(&poly_mulmod(&x, &y, &self.modulus, self.p), self.p))
    }

    pub fn descriptor(&self) -> ContextDescriptor {
        ContextDescriptor {
            p: self.p as u64,
            e: self.e,
            n: self.n,
            modulus: self.modulus.clone(),
        }
    }

    pub fn from_descriptor(d: &ContextDescriptor) -> Result<Self> {
        let ctx = Self::new(d.p, d.e, d.n)?;
        if ctx.modulus != d.modulus {
            return Err(Error::Parse("modulus does not match the canonical choice".into()));
        }
        Ok(ctx)
    }
}

/// JSON form of a context: `{"p":…, "e":…, "n":…, "modulus":[…]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextDescriptor {
    pub p: u64,
    pub e: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

// -- F_p polynomial helpers ---------------------------------------------

fn to_digits(mut v: u32, p: u32, d: usize) -> Vec<u32> {
    let mut out = vec![0u32; d];
    for slot in out.iter_mut() {
        *slot = v % p;
        v /= p;
    }
    out
}

fn from_digits(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &x| acc * p + x)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is small; Fermat
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut k = p - 2;
    while k > 0 {
        if k & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        k >>= 1;
    }
    r as u32
}

/// `a · x mod f` for monic `f` of degree `d` (stored with the leading 1).
fn mul_by_x(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let d = a.len();
    let top = a[d - 1];
    let mut out = vec![0u32; d];
    for i in (1..d).rev() {
        out[i] = a[i - 1];
    }
    if top != 0 {
        for i in 0..d {
            out[i] = (out[i] + (p - top) * f[i] % p) % p;
        }
    }
    out
}

/// Product of two residues modulo monic `f` (length deg+1).
fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let d = f.len() - 1;
    let mut prod = vec![0u64; 2 * d.max(1)];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for deg in (d..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for i in 0..d {
            let t = c * f[i] as u64 % p as u64;
            let idx = deg - d + i;
            prod[idx] = (prod[idx] + p as u64 - t) % p as u64;
        }
    }
    prod.truncate(d);
    prod.resize(d, 0);
    prod.into_iter().map(|x| x as u32).collect()
}

fn poly_powmod(base: &[u32], mut k: u64, f: &[u32], p: u32) -> Vec<u32> {
    let d = f.len() - 1;
    let mut result = vec![0u32; d];
    result[0] = 1;
    let mut b = base.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            result = poly_mulmod(&result, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        k >>= 1;
    }
    result
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let c = r[r.len() - 1] as u64 * lead_inv as u64 % p as u64;
        let shift = r.len() - 1 - db;
        for i in 0..=db {
            let t = c * b[i] as u64 % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - t) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    trim(&mut x);
    let mut y = b.to_vec();
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin's test for a monic polynomial of degree `d`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    let mut x = vec![0u32; d];
    x[1] = 1;
    // frob_pow[i] = x^{p^i} mod f
    let mut cur = x.clone();
    let mut pows = vec![x.clone()];
    for _ in 0..d {
        cur = poly_powmod(&cur, p as u64, f, p);
        pows.push(cur.clone());
    }
    if pows[d] != x {
        return false;
    }
    for r in prime_factors(d as u64) {
        let mut g = pows[d / r as usize].clone();
        g[1] = (g[1] + p - 1) % p;
        let h = poly_gcd(f, &g, p);
        if h.len() != 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u32, d: usize) -> Vec<u32> {
    let total = (p as u64).pow(d as u32);
    for idx in 0..total {
        // a_0 is the most significant digit of idx
        let mut f = vec![0u32; d + 1];
        let mut v = idx;
        for i in (0..d).rev() {
            f[i] = (v % p as u64) as u32;
            v /= p as u64;
        }
        f[d] = 1;
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn smallest_primitive(p: u32, f: &[u32], size: u32) -> u32 {
    let m = (size - 1) as u64;
    if m == 1 {
        return 1;
    }
    let d = f.len() - 1;
    let factors = prime_factors(m);
    for g in 1..size {
        let gd = to_digits(g, p, d);
        let one = poly_powmod(&gd, m, f, p);
        if one.iter().enumerate().any(|(i, &c)| c != (i == 0) as u32) {
            continue;
        }
        let primitive = factors.iter().all(|&r| {
            let t = poly_powmod(&gd, m / r, f, p);
            t.iter().enumerate().any(|(i, &c)| c != (i == 0) as u32)
        });
        if primitive {
            return g;
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

// -- F_p linear algebra on digit vectors -------------------------------

fn fp_reduce(echelon: &[(usize, Vec<u32>)], mut v: Vec<u32>, p: u32) -> Vec<u32> {
    for (piv, row) in echelon {
        let c = v[*piv];
        if c != 0 {
            for (x, &y) in v.iter_mut().zip(row) {
                *x = ((*x as u64 + (p - c) as u64 * y as u64) % p as u64) as u32;
            }
        }
    }
    v
}

fn fp_insert(echelon: &mut Vec<(usize, Vec<u32>)>, mut v: Vec<u32>, p: u32) {
    if let Some(piv) = v.iter().position(|&x| x != 0) {
        let inv = inv_mod(v[piv], p);
        for x in v.iter_mut() {
            *x = (*x as u64 * inv as u64 % p as u64) as u32;
        }
        echelon.push((piv, v));
    }
}

fn fp_invert(mut a: Vec<Vec<u32>>, p: u32) -> Option<Vec<Vec<u32>>> {
    let d = a.len();
    let mut inv: Vec<Vec<u32>> = (0..d)
        .map(|i| (0..d).map(|j| (i == j) as u32).collect())
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let s = inv_mod(a[col][col], p) as u64;
        for j in 0..d {
            a[col][j] = (a[col][j] as u64 * s % p as u64) as u32;
            inv[col][j] = (inv[col][j] as u64 * s % p as u64) as u32;
        }
        for r in 0..d {
            if r != col && a[r][col] != 0 {
                let c = (p - a[r][col]) as u64;
                for j in 0..d {
                    a[r][j] = ((a[r][j] as u64 + c * a[col][j] as u64) % p as u64) as u32;
                    inv[r][j] = ((inv[r][j] as u64 + c * inv[col][j] as u64) % p as u64) as u32;
                }
            }
        }
    }
    Some(inv)
}
