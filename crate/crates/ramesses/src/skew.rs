//! The skew polynomial ring F_q[X; θ], θ the Frobenius x ↦ x².
//!
//! Multiplication follows the rule X·a = θ(a)·X, so the ring is
//! non-commutative; evaluation P(x) = Σ aᵢ·θ^i(x) is GF(2)-linear in x and
//! turns products into compositions: (P·Q)(x) = P(Q(x)). This module houses
//! the interpolating polynomial of a vector on the public basis g, the
//! minimal vanishing (annihilator) polynomial of a vector, and left/right
//! Euclidean division — everything the Gabidulin decoder and the private-key
//! map are made of.
//!
//! The Gaussian elimination over F_q used for Moore systems lives here too
//! (shared with the decoder); it pivots on the first nonzero entry, which
//! keeps every output deterministic.

use crate::field::{FieldContext, FieldElement};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SkewError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("the zero vector has no g-degree")]
    ZeroGDegree,
}

/// A skew polynomial, stored as coefficients in increasing degree order with
/// no trailing zeros. The zero polynomial has no coefficients and its degree
/// is `None`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SkewPoly {
    coeffs: Vec<FieldElement>,
}

impl SkewPoly {
    pub fn zero() -> Self {
        SkewPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        SkewPoly {
            coeffs: vec![FieldElement::ONE],
        }
    }

    /// The monomial X.
    pub fn x() -> Self {
        SkewPoly {
            coeffs: vec![FieldElement::ZERO, FieldElement::ONE],
        }
    }

    pub fn monomial(c: FieldElement, degree: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![FieldElement::ZERO; degree + 1];
        coeffs[degree] = c;
        SkewPoly { coeffs }
    }

    /// Normalizes by dropping trailing zero coefficients.
    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        SkewPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of X^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(FieldElement::ONE)
    }

    /// Coefficientwise sum (characteristic 2, so also the difference).
    pub fn add(&self, other: &SkewPoly) -> SkewPoly {
        let mut coeffs = vec![FieldElement::ZERO; self.coeffs.len().max(other.coeffs.len())];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeff(i) + other.coeff(i);
        }
        SkewPoly::from_coeffs(coeffs)
    }

    /// Skew product: (Σ aᵢXⁱ)(Σ bⱼXʲ) = Σ aᵢ·θ^i(bⱼ)·X^{i+j}.
    pub fn mul(&self, other: &SkewPoly, ctx: &FieldContext) -> SkewPoly {
        if self.is_zero() || other.is_zero() {
            return SkewPoly::zero();
        }
        let mut coeffs = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        let mut conj = other.coeffs.clone(); // θ^i applied to all of b
        for (i, &a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                for (j, &b) in conj.iter().enumerate() {
                    coeffs[i + j] += ctx.mul(a, b);
                }
            }
            for b in conj.iter_mut() {
                *b = ctx.square(*b);
            }
        }
        SkewPoly::from_coeffs(coeffs)
    }

    /// P(x) = Σ aᵢ·x^(2^i).
    pub fn evaluate(&self, x: FieldElement, ctx: &FieldContext) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut t = x;
        for &a in &self.coeffs {
            if !a.is_zero() {
                acc += ctx.mul(a, t);
            }
            t = ctx.square(t);
        }
        acc
    }

    pub fn evaluate_vec(&self, xs: &[FieldElement], ctx: &FieldContext) -> Vec<FieldElement> {
        xs.iter().map(|&x| self.evaluate(x, ctx)).collect()
    }

    /// Coefficient count (16-bit little-endian) followed by the coefficients
    /// in increasing degree order, each in the field element encoding.
    pub fn to_bytes(&self, n: usize) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.coeffs.len() as u16).to_le_bytes());
        for c in &self.coeffs {
            out.extend_from_slice(&c.to_bytes(n));
        }
        out
    }

    /// Rejects wrong lengths, nonzero padding and non-normalized forms.
    pub fn from_bytes(n: usize, bytes: &[u8]) -> Option<Self> {
        if bytes.len() < 2 {
            return None;
        }
        let count = u16::from_le_bytes([bytes[0], bytes[1]]) as usize;
        let stride = n.div_ceil(8);
        if bytes.len() != 2 + count * stride {
            return None;
        }
        let mut coeffs = Vec::with_capacity(count);
        for i in 0..count {
            let chunk = &bytes[2 + i * stride..2 + (i + 1) * stride];
            coeffs.push(FieldElement::from_bytes(n, chunk)?);
        }
        if coeffs.last().is_some_and(|c| c.is_zero()) {
            return None;
        }
        Some(SkewPoly { coeffs })
    }
}

impl std::fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{c:?}·X^{i}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// The g-interpolating polynomial L_x: the unique skew polynomial of degree
/// < n with L_x(g) = x. Its degree equals the g-degree of x.
pub fn interpolate(ctx: &FieldContext, x: &[FieldElement]) -> SkewPoly {
    let n = ctx.degree();
    assert_eq!(x.len(), n, "vector length");
    // row j: Σ_i c_i θ^i(g_j) = x_j  (transposed Moore system)
    let mut mat = FqMat::zeros(n, n + 1);
    let mut col: Vec<FieldElement> = ctx.basis().to_vec();
    for i in 0..n {
        for j in 0..n {
            *mat.at_mut(j, i) = col[j];
        }
        for c in col.iter_mut() {
            *c = ctx.square(*c);
        }
    }
    for j in 0..n {
        *mat.at_mut(j, n) = x[j];
    }
    let pivots = mat.rref(ctx);
    debug_assert_eq!(pivots.len(), n, "Moore matrix must be invertible");
    let mut coeffs = vec![FieldElement::ZERO; n];
    for (r, &c) in pivots.iter().enumerate() {
        coeffs[c] = mat.at(r, n);
    }
    SkewPoly::from_coeffs(coeffs)
}

/// The minimal vanishing polynomial V_e: the unique monic skew polynomial of
/// least degree with V_e(eᵢ) = 0 for every coordinate. deg V_e = rk(e), and
/// its zero set is exactly the coordinate span of e.
pub fn annihilator(ctx: &FieldContext, e: &[FieldElement]) -> SkewPoly {
    let mut v = SkewPoly::one();
    for &ei in e {
        let val = v.evaluate(ei, ctx);
        if val.is_zero() {
            continue;
        }
        // (X - θ(val)/val) · v kills ei and keeps all previous zeros
        let c = ctx.mul(ctx.square(val), ctx.inv(val).expect("nonzero"));
        let factor = SkewPoly::from_coeffs(vec![c, FieldElement::ONE]);
        v = factor.mul(&v, ctx);
    }
    v
}

/// The g-degree of a nonzero vector: the degree of its interpolating
/// polynomial, i.e. the index of the smallest Gabidulin code containing it.
pub fn g_degree(ctx: &FieldContext, x: &[FieldElement]) -> Result<usize, SkewError> {
    interpolate(ctx, x).degree().ok_or(SkewError::ZeroGDegree)
}

/// The g-degree of a bit matrix M, defined through the vector g·M.
pub fn g_degree_matrix(
    ctx: &FieldContext,
    m: &crate::linalg::BitMatrix,
) -> Result<usize, SkewError> {
    let v = ctx.compress_g(m);
    g_degree(ctx, &v)
}

/// Division with the divisor on the left: a = b·q + r, deg r < deg b.
pub fn left_divide(
    ctx: &FieldContext,
    a: &SkewPoly,
    b: &SkewPoly,
) -> Result<(SkewPoly, SkewPoly), SkewError> {
    let d = b.degree().ok_or(SkewError::DivisionByZero)?;
    let n = ctx.degree();
    let b_lead_inv = ctx.inv(b.leading().unwrap()).expect("nonzero leading");
    let mut q = SkewPoly::zero();
    let mut r = a.clone();
    while let Some(dr) = r.degree() {
        if dr < d {
            break;
        }
        // leading term: b_d · θ^d(q_m) = r_dr  =>  q_m = θ^{-d}(b_d^{-1}·r_dr)
        let qm = ctx.frobenius(ctx.mul(b_lead_inv, r.leading().unwrap()), n - (d % n));
        let term = SkewPoly::monomial(qm, dr - d);
        q = q.add(&term);
        r = r.add(&b.mul(&term, ctx));
    }
    Ok((q, r))
}

/// Division with the divisor on the right: a = q·b + r, deg r < deg b.
/// Membership in the left ideal generated by b is `r = 0` here.
pub fn right_divide(
    ctx: &FieldContext,
    a: &SkewPoly,
    b: &SkewPoly,
) -> Result<(SkewPoly, SkewPoly), SkewError> {
    let d = b.degree().ok_or(SkewError::DivisionByZero)?;
    let b_lead = b.leading().unwrap();
    let mut q = SkewPoly::zero();
    let mut r = a.clone();
    while let Some(dr) = r.degree() {
        if dr < d {
            break;
        }
        // leading term: q_m · θ^m(b_d) = r_dr
        let m = dr - d;
        let qm = ctx.mul(
            r.leading().unwrap(),
            ctx.inv(ctx.frobenius(b_lead, m)).expect("nonzero leading"),
        );
        let term = SkewPoly::monomial(qm, m);
        q = q.add(&term);
        r = r.add(&term.mul(b, ctx));
    }
    Ok((q, r))
}

/// Dense matrix over F_q for the Moore/decoder systems. Deterministic
/// elimination: pivot rows are chosen top-down, free variables in increasing
/// column order.
pub(crate) struct FqMat {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl FqMat {
    pub(crate) fn zeros(rows: usize, cols: usize) -> Self {
        FqMat {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    #[inline]
    pub(crate) fn at(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub(crate) fn at_mut(&mut self, r: usize, c: usize) -> &mut FieldElement {
        &mut self.data[r * self.cols + c]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduction to reduced row echelon form over F_q; returns the
    /// pivot columns.
    pub(crate) fn rref(&mut self, ctx: &FieldContext) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        let mut pivot_row = vec![FieldElement::ZERO; self.cols];
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = ctx.inv(self.at(r, c)).expect("pivot nonzero");
            for j in c..self.cols {
                *self.at_mut(r, j) = ctx.mul(inv, self.at(r, j));
            }
            pivot_row.copy_from_slice(&self.data[r * self.cols..(r + 1) * self.cols]);
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.at(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let sub = ctx.mul(factor, pivot_row[j]);
                    *self.at_mut(i, j) += sub;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// A nonzero kernel vector (from the first free column), or `None` when
    /// the matrix has full column rank.
    pub(crate) fn kernel_vector(&mut self, ctx: &FieldContext) -> Option<Vec<FieldElement>> {
        let pivots = self.rref(ctx);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free = (0..self.cols).find(|&c| !is_pivot[c])?;
        let mut v = vec![FieldElement::ZERO; self.cols];
        v[free] = FieldElement::ONE;
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = self.at(r, free);
        }
        Some(v)
    }
}
