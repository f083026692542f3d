//! Dense linear algebra over the chain ring Z/p^n via the Howell normal
//! form, the canonical echelon form that remains correct over a non-domain:
//! row spans are compared, kernels computed and systems solved through it.

use crate::error::{input_err, Result};
use crate::scalar::PadicCtx;
use alloc::vec;
use alloc::vec::Vec;

/// A dense matrix over Z/p^n with row-major storage.
#[derive(Clone, PartialEq, Debug)]
pub struct ZpnMatrix {
    ctx: PadicCtx,
    ncols: usize,
    rows: Vec<Vec<u64>>,
}

impl ZpnMatrix {
    pub fn new(ctx: PadicCtx, ncols: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        for r in &rows {
            if r.len() != ncols {
                return Err(input_err!("ragged matrix: expected {ncols} columns"));
            }
        }
        let m = ctx.modulus();
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| v % m).collect())
            .collect();
        Ok(ZpnMatrix { ctx, ncols, rows })
    }

    pub fn zero(ctx: PadicCtx, nrows: usize, ncols: usize) -> Self {
        ZpnMatrix { ctx, ncols, rows: vec![vec![0; ncols]; nrows] }
    }

    pub fn identity(ctx: PadicCtx, n: usize) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            m.rows[i][i] = 1 % ctx.modulus();
        }
        m
    }

    pub fn ctx(&self) -> PadicCtx {
        self.ctx
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn entry(&self, r: usize, c: usize) -> u64 {
        self.rows[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.rows[r][c] = v % self.ctx.modulus();
    }

    /// Matrix-vector product A*x.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.ncols);
        let m = self.ctx.modulus() as u128;
        self.rows
            .iter()
            .map(|row| {
                let mut acc = 0u128;
                for (a, b) in row.iter().zip(x) {
                    acc = (acc + *a as u128 * *b as u128) % m;
                }
                acc as u64
            })
            .collect()
    }
}

fn val_of(ctx: PadicCtx, x: u64) -> u32 {
    if x == 0 {
        return ctx.prec();
    }
    let mut v = 0;
    let mut y = x;
    while y % ctx.p() == 0 {
        y /= ctx.p();
        v += 1;
    }
    v
}

fn unit_inv(ctx: PadicCtx, u: u64) -> u64 {
    ctx.from_u64(u).inverse().expect("unit part is invertible").value()
}

/// row_a -= c * row_b
fn row_subtract(ctx: PadicCtx, a: &mut [u64], b: &[u64], c: u64) {
    let m = ctx.modulus() as u128;
    for (x, y) in a.iter_mut().zip(b) {
        let sub = c as u128 * *y as u128 % m;
        *x = ((*x as u128 + m - sub) % m) as u64;
    }
}

fn row_scale(ctx: PadicCtx, a: &mut [u64], c: u64) {
    let m = ctx.modulus() as u128;
    for x in a.iter_mut() {
        *x = (*x as u128 * c as u128 % m) as u64;
    }
}

/// The Howell normal form of the row span. Rows come out sorted by pivot
/// column with pivots p^v, entries above each pivot reduced mod p^v, and the
/// span closed under trailing-coordinate restriction; the form is the
/// canonical representative of the row span.
pub fn howell_form(mat: &ZpnMatrix) -> ZpnMatrix {
    let ctx = mat.ctx;
    let n = ctx.prec();
    let mut rows: Vec<Vec<u64>> = mat.rows.clone();
    let mut done: Vec<(usize, u32, Vec<u64>)> = Vec::new(); // (pivot col, val, row)
    let mut pending: Vec<Vec<u64>> = Vec::new();

    for col in 0..mat.ncols {
        // best unprocessed row for this column: minimal valuation
        let mut best: Option<(usize, u32)> = None;
        for (i, r) in rows.iter().enumerate() {
            let v = val_of(ctx, r[col]);
            if v < n && best.map_or(true, |(_, bv)| v < bv) {
                best = Some((i, v));
            }
        }
        if let Some((bi, v)) = best {
            let mut piv = rows.swap_remove(bi);
            // scale so the pivot is exactly p^v
            let unit = piv[col] / pow(ctx.p(), v);
            row_scale(ctx, &mut piv, unit_inv(ctx, unit % ctx.modulus()));
            let pv = pow(ctx.p(), v);
            // eliminate this column from every remaining unprocessed row
            for r in rows.iter_mut() {
                if r[col] != 0 {
                    let c = r[col] / pv; // exact: val >= v
                    row_subtract(ctx, r, &piv, c);
                }
            }
            // reduce entries above the pivot mod p^v
            for (_, _, r) in done.iter_mut() {
                if r[col] != 0 {
                    let c = r[col] / pv;
                    if c != 0 {
                        row_subtract(ctx, r, &piv, c);
                    }
                }
            }
            // the annihilator of a non-unit pivot contributes span elements
            // supported strictly to the right; feed them back into the pool
            if v > 0 {
                let mut ann = piv.clone();
                row_scale(ctx, &mut ann, pow(ctx.p(), n - v));
                debug_assert_eq!(ann[col], 0);
                if ann.iter().any(|&x| x != 0) {
                    pending.push(ann);
                }
            }
            done.push((col, v, piv));
            rows.append(&mut pending);
        }
        // drop rows that became zero
        rows.retain(|r| r.iter().any(|&x| x != 0));
    }

    let out_rows: Vec<Vec<u64>> = done.into_iter().map(|(_, _, r)| r).collect();
    ZpnMatrix { ctx, ncols: mat.ncols, rows: out_rows }
}

fn pow(b: u64, e: u32) -> u64 {
    let mut acc = 1u64;
    for _ in 0..e {
        acc *= b;
    }
    acc
}

/// Precomputed Howell echelon of the graph {(A x, x)} of a linear map
/// x -> A x; answers kernel and solvability queries for that map.
pub struct LinSolver {
    ctx: PadicCtx,
    lhs_cols: usize,
    rhs_cols: usize,
    /// echelon rows with a nonzero leading block, as (pivot col, val, row)
    echelon: Vec<(usize, u32, Vec<u64>)>,
    kernel: Vec<Vec<u64>>,
}

impl LinSolver {
    /// `a` is the matrix of the map (nrows x ncols); the solver computes the
    /// Howell form of [A^T | I].
    pub fn new(a: &ZpnMatrix) -> Self {
        let ctx = a.ctx;
        let (nr, nc) = (a.nrows(), a.ncols());
        let mut rows = Vec::with_capacity(nc);
        for j in 0..nc {
            let mut row = Vec::with_capacity(nr + nc);
            for i in 0..nr {
                row.push(a.rows[i][j]);
            }
            let mut e = vec![0u64; nc];
            e[j] = 1 % ctx.modulus();
            row.extend(e);
            rows.push(row);
        }
        let graph = ZpnMatrix { ctx, ncols: nr + nc, rows };
        let h = howell_form(&graph);
        let mut echelon = Vec::new();
        let mut kernel = Vec::new();
        for row in h.rows {
            let lead = row.iter().position(|&x| x != 0).expect("no zero rows in Howell form");
            if lead < nr {
                let v = val_of(ctx, row[lead]);
                echelon.push((lead, v, row));
            } else {
                kernel.push(row[nr..].to_vec());
            }
        }
        LinSolver { ctx, lhs_cols: nr, rhs_cols: nc, echelon, kernel }
    }

    /// Generators of {x : A x = 0} as a Z/p^n-module.
    pub fn kernel(&self) -> &[Vec<u64>] {
        &self.kernel
    }

    /// A particular solution of A x = b, if any.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.lhs_cols);
        let m = self.ctx.modulus();
        let mut residual: Vec<u64> = b.iter().map(|&x| x % m).collect();
        let mut x = vec![0u64; self.rhs_cols];
        for (col, v, row) in &self.echelon {
            let e = residual[*col];
            if e == 0 {
                continue;
            }
            let pv = pow(self.ctx.p(), *v);
            if e % pv != 0 {
                return None;
            }
            let c = e / pv;
            // residual -= c * leading block; x += c * trailing block
            row_subtract(self.ctx, &mut residual, &row[..self.lhs_cols], c);
            let madd = self.ctx.modulus() as u128;
            for (xi, ri) in x.iter_mut().zip(&row[self.lhs_cols..]) {
                *xi = ((*xi as u128 + c as u128 * *ri as u128) % madd) as u64;
            }
        }
        if residual.iter().all(|&r| r == 0) {
            Some(x)
        } else {
            None
        }
    }
}

/// Kernel generators of the map x -> A x.
pub fn kernel_basis(a: &ZpnMatrix) -> Vec<Vec<u64>> {
    LinSolver::new(a).kernel().to_vec()
}

/// Canonical form of a row span for span-equality comparisons.
pub fn span_canonical(ctx: PadicCtx, ncols: usize, gens: &[Vec<u64>]) -> Result<ZpnMatrix> {
    let m = ZpnMatrix::new(ctx, ncols, gens.to_vec())?;
    Ok(howell_form(&m))
}

/// Number of elements of the row span (for rank accounting over Z/p^n the
/// span cardinality is the meaningful size measure).
pub fn span_cardinality_log_p(ctx: PadicCtx, form: &ZpnMatrix) -> u64 {
    // each Howell pivot p^v contributes a cyclic factor Z/p^{n-v}
    let mut total = 0u64;
    for row in form.rows() {
        let lead = row.iter().position(|&x| x != 0);
        if let Some(l) = lead {
            total += (ctx.prec() - val_of(ctx, row[l])) as u64;
        }
    }
    total
}
