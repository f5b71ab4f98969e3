//! Gaussian elimination over a context field.
//!
//! The same routines serve `F_{q^n}`-linear algebra (coefficient vectors of
//! length `n`) and `F_q`-linear algebra (flattened vectors of length `n²`
//! whose entries happen to lie in the subfield): the subfield is closed
//! under the field operations, so no separate scalar type is needed.
//!
//! Reduced row echelon form here always means pivot = lowest nonzero
//! column, pivot entry 1, zeros above and below every pivot.

use crate::gf::{FieldContext, Gf};

pub type Matrix = Vec<Vec<Gf>>;

/// Brings `rows` to reduced row echelon form in place, dropping zero rows.
/// Returns the pivot columns in increasing order.
pub fn rref(ctx: &FieldContext, rows: &mut Matrix) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = ctx.inv(rows[r][col]).expect("pivot is nonzero");
        if inv != Gf::ONE {
            for x in rows[r][col..].iter_mut() {
                *x = ctx.mul(*x, inv);
            }
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let c = row[col];
            if c.is_zero() {
                continue;
            }
            let nc = ctx.neg(c);
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !y.is_zero() {
                    *x = ctx.add(*x, ctx.mul(nc, y));
                }
            }
        }
        rows[r] = pivot_row;
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(ctx: &FieldContext, rows: &[Vec<Gf>]) -> usize {
    let mut m = rows.to_vec();
    rref(ctx, &mut m).len()
}

/// Rank of a `rows × cols` row-major matrix, destroying the buffer.
pub fn rank_in_place(ctx: &FieldContext, buf: &mut [Gf], rows: usize, cols: usize) -> usize {
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !buf[i * cols + col].is_zero()) else {
            continue;
        };
        if piv != r {
            for j in col..cols {
                buf.swap(r * cols + j, piv * cols + j);
            }
        }
        let inv = ctx.inv(buf[r * cols + col]).expect("pivot is nonzero");
        for i in r + 1..rows {
            let c = buf[i * cols + col];
            if c.is_zero() {
                continue;
            }
            let f = ctx.neg(ctx.mul(c, inv));
            for j in col..cols {
                let y = buf[r * cols + j];
                if !y.is_zero() {
                    buf[i * cols + j] = ctx.add(buf[i * cols + j], ctx.mul(f, y));
                }
            }
        }
        r += 1;
    }
    r
}

/// Reduces `v` against an RREF basis with the given pivots.
pub fn reduce(ctx: &FieldContext, basis: &[Vec<Gf>], pivots: &[usize], v: &mut [Gf]) {
    for (row, &p) in basis.iter().zip(pivots) {
        let c = v[p];
        if c.is_zero() {
            continue;
        }
        let nc = ctx.neg(c);
        for (x, &y) in v.iter_mut().zip(row) {
            if !y.is_zero() {
                *x = ctx.add(*x, ctx.mul(nc, y));
            }
        }
    }
}

/// Pivot column of each RREF row.
pub fn pivots_of(rows: &[Vec<Gf>]) -> Vec<usize> {
    rows.iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).expect("RREF rows are nonzero"))
        .collect()
}

/// Basis (in RREF) of the right kernel `{x : A x = 0}` of a matrix with `ncols` columns.
pub fn nullspace(ctx: &FieldContext, rows: &[Vec<Gf>], ncols: usize) -> Matrix {
    let mut m = rows.to_vec();
    let pivots = rref(ctx, &mut m);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Gf::ZERO; ncols];
        v[free] = Gf::ONE;
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = ctx.neg(row[free]);
        }
        out.push(v);
    }
    rref(ctx, &mut out);
    out
}

/// Intersection of two row spaces (Zassenhaus), in RREF.
pub fn intersect(ctx: &FieldContext, a: &[Vec<Gf>], b: &[Vec<Gf>], ncols: usize) -> Matrix {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut stacked: Matrix = Vec::with_capacity(a.len() + b.len());
    for r in a {
        let mut v = r.clone();
        v.extend_from_slice(r);
        stacked.push(v);
    }
    for r in b {
        let mut v = r.clone();
        v.extend(std::iter::repeat(Gf::ZERO).take(ncols));
        stacked.push(v);
    }
    rref(ctx, &mut stacked);
    let mut out: Matrix = stacked
        .into_iter()
        .filter(|r| r[..ncols].iter().all(|x| x.is_zero()))
        .map(|r| r[ncols..].to_vec())
        .collect();
    rref(ctx, &mut out);
    out
}

/// Sum of two row spaces, in RREF.
pub fn sum(ctx: &FieldContext, a: &[Vec<Gf>], b: &[Vec<Gf>]) -> Matrix {
    let mut m: Matrix = a.iter().chain(b).cloned().collect();
    rref(ctx, &mut m);
    m
}

/// Inverse of a square matrix, `None` if singular.
pub fn invert(ctx: &FieldContext, m: &[Vec<Gf>]) -> Option<Matrix> {
    let d = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..d).map(|j| if i == j { Gf::ONE } else { Gf::ZERO }));
            v
        })
        .collect();
    let pivots = rref(ctx, &mut aug);
    if pivots.len() != d || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[d..].to_vec()).collect())
}

pub fn mat_mul(ctx: &FieldContext, a: &[Vec<Gf>], b: &[Vec<Gf>]) -> Matrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Gf::ZERO, |acc, (&x, br)| ctx.add(acc, ctx.mul(x, br[j])))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(ctx: &FieldContext, a: &[Vec<Gf>], v: &[Gf]) -> Vec<Gf> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Gf::ZERO, |acc, (&x, &y)| ctx.add(acc, ctx.mul(x, y)))
        })
        .collect()
}


/// Rank over `F_2` of rows packed as bitmasks.
pub(crate) fn rank_gf2(rows: &mut [u64]) -> usize {
    let mut r = 0;
    for i in 0..rows.len() {
        let v = rows[i];
        if v == 0 {
            continue;
        }
        let low = v & v.wrapping_neg();
        for row in rows[i + 1..].iter_mut() {
            if *row & low != 0 {
                *row ^= v;
            }
        }
        r += 1;
    }
    r
}

/// Rank over a prime field `F_p` (`p < 256`) of a row-major byte matrix,
/// with `mul[a][b] = ab` and `inv[a] = a^{-1}`.
pub(crate) fn rank_mod_p(
    buf: &mut [u8],
    rows: usize,
    cols: usize,
    p: u8,
    mul: &[[u8; 256]],
    inv: &[u8],
) -> usize {
    let p16 = p as u16;
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| buf[i * cols + col] != 0) else {
            continue;
        };
        if piv != r {
            for j in col..cols {
                buf.swap(r * cols + j, piv * cols + j);
            }
        }
        let (head, tail) = buf[..rows * cols].split_at_mut((r + 1) * cols);
        let prow = &head[r * cols + col..];
        let pinv = inv[prow[0] as usize] as usize;
        for row in tail.chunks_exact_mut(cols) {
            let c = row[col] as usize;
            if c == 0 {
                continue;
            }
            // row -= (c / pivot) · prow
            let f = &mul[(p - mul[c][pinv]) as usize];
            for (x, &y) in row[col..].iter_mut().zip(prow) {
                let s = *x as u16 + f[y as usize] as u16;
                *x = if s >= p16 { (s - p16) as u8 } else { s as u8 };
            }
        }
        r += 1;
    }
    r
}
