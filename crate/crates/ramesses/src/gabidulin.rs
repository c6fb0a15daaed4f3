//! Gabidulin codes: Moore-matrix construction, a fixed parity-check, and a
//! bounded-distance rank-metric decoder up to ⌊(n-K)/2⌋.
//!
//! The code of dimension K is the set of evaluation vectors on the public
//! basis g of skew polynomials of degree < K. The parity-check is derived
//! deterministically: a vector h orthogonal to all shifted conjugates
//! g^[j], -(n-K-1) ≤ j ≤ K-1, gives the Moore-form dual; the G·Hᵀ = 0
//! invariant is verified after construction, with a systematic fallback if
//! the Moore-form solve were ever degenerate.
//!
//! The decoder is a Welch–Berlekamp-style reconstruction: solve the linear
//! system V(yᵢ) = N(gᵢ) with deg V ≤ t', deg N ≤ K+t'-1 over F_q, divide N
//! by V from the left, and read the error off the quotient's evaluation.
//! Cubic cost; decoding speed is not a goal here.

use crate::field::{FieldContext, FieldElement};
use crate::skew::{left_divide, FqMat, SkewPoly};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GabError {
    #[error("code dimension {k} out of range for length {n}")]
    DimensionOutOfRange { k: usize, n: usize },
    #[error("Moore matrix with {rows} rows exceeds length {n}")]
    TooManyRows { rows: usize, n: usize },
}

/// Returned when no codeword lies within the decoding radius: either channel
/// overload or, inside the scheme, a malformed ciphertext.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no codeword within the decoding radius")]
pub struct DecodingFailure;

/// Moore matrix of `b` with the given number of rows: row i is the
/// componentwise 2^i-th power b^[i].
pub fn moore_matrix(
    ctx: &FieldContext,
    b: &[FieldElement],
    rows: usize,
) -> Result<Vec<Vec<FieldElement>>, GabError> {
    if rows > ctx.degree() {
        return Err(GabError::TooManyRows {
            rows,
            n: ctx.degree(),
        });
    }
    let mut out = Vec::with_capacity(rows);
    let mut cur = b.to_vec();
    for _ in 0..rows {
        out.push(cur.clone());
        for x in cur.iter_mut() {
            *x = ctx.square(*x);
        }
    }
    Ok(out)
}

/// A Gabidulin code of dimension K over the context's basis g, with cached
/// Moore rows, a fixed parity-check and a deterministic syndrome preimage
/// map. Immutable after construction.
pub struct GabidulinCode {
    ctx: Arc<FieldContext>,
    dim: usize,
    /// Full Moore matrix of g (n rows); the first K rows generate the code.
    moore: Vec<Vec<FieldElement>>,
    /// (n-K) x n parity-check.
    h: Vec<Vec<FieldElement>>,
    /// n x (n-K) right inverse of H: preimage(s) = B·s.
    preimage_map: Vec<Vec<FieldElement>>,
    radius: usize,
}

impl GabidulinCode {
    pub fn new(ctx: Arc<FieldContext>, dim: usize) -> Result<GabidulinCode, GabError> {
        let n = ctx.degree();
        if dim == 0 || dim >= n {
            return Err(GabError::DimensionOutOfRange { k: dim, n });
        }
        let moore = moore_matrix(&ctx, &ctx.basis().to_vec(), n).expect("full Moore");

        let h = Self::parity_check_moore_form(&ctx, &moore, dim)
            .filter(|h| Self::check_parity(&ctx, &moore, dim, h))
            .unwrap_or_else(|| Self::parity_check_systematic(&ctx, &moore, dim));
        assert!(
            Self::check_parity(&ctx, &moore, dim, &h),
            "parity-check invariant violated"
        );

        let preimage_map = Self::build_preimage_map(&ctx, &h, n);
        Ok(GabidulinCode {
            radius: (n - dim) / 2,
            ctx,
            dim,
            moore,
            h,
            preimage_map,
        })
    }

    /// Moore-form dual: h orthogonal to g^[j] for -(n-K-1) <= j <= K-1,
    /// then H = Moore_{n-K}(h). The n-1 constraint rows are distinct
    /// conjugate shifts, so the kernel has dimension exactly 1.
    fn parity_check_moore_form(
        ctx: &FieldContext,
        moore: &[Vec<FieldElement>],
        dim: usize,
    ) -> Option<Vec<Vec<FieldElement>>> {
        let n = ctx.degree();
        let lo = -((n - dim - 1) as isize);
        let hi = (dim - 1) as isize;
        let mut sys = FqMat::zeros((hi - lo + 1) as usize, n);
        for (r, j) in (lo..=hi).enumerate() {
            let idx = j.rem_euclid(n as isize) as usize;
            for s in 0..n {
                *sys.at_mut(r, s) = moore[idx][s];
            }
        }
        let h0 = sys.kernel_vector(ctx)?;
        moore_matrix(ctx, &h0, n - dim).ok()
    }

    /// Fallback: rows of H from a kernel basis of the generator.
    fn parity_check_systematic(
        ctx: &FieldContext,
        moore: &[Vec<FieldElement>],
        dim: usize,
    ) -> Vec<Vec<FieldElement>> {
        let n = ctx.degree();
        let mut sys = FqMat::zeros(dim, n);
        for r in 0..dim {
            for s in 0..n {
                *sys.at_mut(r, s) = moore[r][s];
            }
        }
        let pivots = sys.rref(ctx);
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut rows = Vec::with_capacity(n - dim);
        for f in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = vec![FieldElement::ZERO; n];
            v[f] = FieldElement::ONE;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = sys.at(r, f);
            }
            rows.push(v);
        }
        rows
    }

    fn check_parity(
        ctx: &FieldContext,
        moore: &[Vec<FieldElement>],
        dim: usize,
        h: &[Vec<FieldElement>],
    ) -> bool {
        let n = ctx.degree();
        if h.len() != n - dim {
            return false;
        }
        for hr in h {
            for g_row in moore.iter().take(dim) {
                let mut acc = FieldElement::ZERO;
                for s in 0..n {
                    acc += ctx.mul(hr[s], g_row[s]);
                }
                if !acc.is_zero() {
                    return false;
                }
            }
        }
        // H must have full rank n-K
        let mut m = FqMat::zeros(h.len(), n);
        for (r, row) in h.iter().enumerate() {
            for s in 0..n {
                *m.at_mut(r, s) = row[s];
            }
        }
        m.rref(ctx).len() == n - dim
    }

    /// Right inverse B with H·B = I, found by eliminating [H | I] once.
    /// Depends only on H, so the same syndrome always maps to the same
    /// preimage, and the zero syndrome maps to the zero vector.
    fn build_preimage_map(
        ctx: &FieldContext,
        h: &[Vec<FieldElement>],
        n: usize,
    ) -> Vec<Vec<FieldElement>> {
        let m = h.len();
        let mut aug = FqMat::zeros(m, n + m);
        for (r, row) in h.iter().enumerate() {
            for s in 0..n {
                *aug.at_mut(r, s) = row[s];
            }
            *aug.at_mut(r, n + r) = FieldElement::ONE;
        }
        let pivots = aug.rref(ctx);
        let mut b = vec![vec![FieldElement::ZERO; m]; n];
        for (r, &c) in pivots.iter().enumerate() {
            debug_assert!(c < n, "H has full row rank");
            for s in 0..m {
                b[c][s] = aug.at(r, n + s);
            }
        }
        b
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn length(&self) -> usize {
        self.ctx.degree()
    }

    /// Unique decoding radius ⌊(n-K)/2⌋.
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Generator matrix: the first K rows of the Moore matrix of g.
    pub fn generator(&self) -> &[Vec<FieldElement>] {
        &self.moore[..self.dim]
    }

    pub fn parity_check(&self) -> &[Vec<FieldElement>] {
        &self.h
    }

    pub fn encode(&self, msg: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(msg.len(), self.dim, "message length");
        let n = self.length();
        let mut c = vec![FieldElement::ZERO; n];
        for (i, &m) in msg.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            for j in 0..n {
                c[j] += self.ctx.mul(m, self.moore[i][j]);
            }
        }
        c
    }

    pub fn syndrome(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(x.len(), self.length(), "vector length");
        self.h
            .iter()
            .map(|row| {
                let mut acc = FieldElement::ZERO;
                for (hj, xj) in row.iter().zip(x) {
                    acc += self.ctx.mul(*hj, *xj);
                }
                acc
            })
            .collect()
    }

    pub fn contains(&self, x: &[FieldElement]) -> bool {
        self.syndrome(x).iter().all(|s| s.is_zero())
    }

    /// The deterministic solution of H·xᵀ = sᵀ.
    pub fn preimage(&self, s: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(s.len(), self.h.len(), "syndrome length");
        self.preimage_map
            .iter()
            .map(|row| {
                let mut acc = FieldElement::ZERO;
                for (b, si) in row.iter().zip(s) {
                    acc += self.ctx.mul(*b, *si);
                }
                acc
            })
            .collect()
    }

    /// Bounded-distance decoding: returns (codeword, error) with
    /// y = c + e and rk(e) ≤ ⌊(n-K)/2⌋, whenever such a decomposition
    /// exists (it is then unique). Fails otherwise.
    pub fn decode_bounded(
        &self,
        y: &[FieldElement],
    ) -> Result<(Vec<FieldElement>, Vec<FieldElement>), DecodingFailure> {
        let n = self.length();
        assert_eq!(y.len(), n, "received word length");
        let ctx = &*self.ctx;
        let t = self.radius;
        let nv = t + 1; // candidate annihilator V, deg <= t
        let nm = self.dim + t; // candidate product N = V·f, deg <= K+t-1

        let mut sys = FqMat::zeros(n, nv + nm);
        let mut ycol = y.to_vec();
        for j in 0..nv {
            for i in 0..n {
                *sys.at_mut(i, j) = ycol[i];
            }
            for v in ycol.iter_mut() {
                *v = ctx.square(*v);
            }
        }
        for j in 0..nm {
            for i in 0..n {
                *sys.at_mut(i, nv + j) = self.moore[j][i];
            }
        }

        let sol = sys.kernel_vector(ctx).ok_or(DecodingFailure)?;
        let v = SkewPoly::from_coeffs(sol[..nv].to_vec());
        let nn = SkewPoly::from_coeffs(sol[nv..].to_vec());
        if v.is_zero() {
            return Err(DecodingFailure);
        }
        let (f, rem) = left_divide(ctx, &nn, &v).expect("nonzero divisor");
        if !rem.is_zero() || f.degree().is_some_and(|d| d >= self.dim) {
            return Err(DecodingFailure);
        }

        let n_len = self.length();
        let mut c = vec![FieldElement::ZERO; n_len];
        for (i, &fc) in f.coeffs().iter().enumerate() {
            if fc.is_zero() {
                continue;
            }
            for j in 0..n_len {
                c[j] += ctx.mul(fc, self.moore[i][j]);
            }
        }
        let e: Vec<FieldElement> = y.iter().zip(&c).map(|(&a, &b)| a + b).collect();
        if ctx.vector_rank(&e) > t {
            return Err(DecodingFailure);
        }
        Ok((c, e))
    }
}
