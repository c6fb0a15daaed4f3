//! Arithmetic in GF(2^n) for arbitrary degree n up to 256.
//!
//! A context fixes the field once: the modulus is the lexicographically
//! smallest irreducible polynomial of degree n, and the public basis `g` is
//! the conjugate orbit of the first element (in increasing polynomial-basis
//! order) that generates a normal basis. Two contexts built for the same n
//! are bit-identical, so public parameters never need to be shipped.
//!
//! Elements are packed into four 64-bit limbs. Multiplication is carry-less
//! schoolbook over limbs followed by a table-driven fold of the high bits;
//! squaring and inversion reuse a precomputed table of squared monomials.
//! Nothing here is constant-time.

use crate::linalg::{BitMatrix, BitVec};
use rand::RngCore;
use thiserror::Error;

/// Number of 64-bit limbs in an element; bounds the degree at 256.
const LIMBS: usize = 4;

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 64 * LIMBS;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("unsupported extension degree {0} (need 2..=256)")]
    UnsupportedDegree(usize),
    #[error("inversion of zero")]
    ZeroInversion,
    #[error("basis is singular")]
    SingularBasis,
    #[error("the zero vector has no g-degree")]
    ZeroGDegree,
}

/// An element of GF(2^n), identified with a polynomial over GF(2) of degree
/// < n: bit i is the coefficient of z^i. Only meaningful relative to the
/// `FieldContext` it came from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FieldElement {
    limbs: [u64; LIMBS],
}

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement { limbs: [0; LIMBS] };
    pub const ONE: FieldElement = FieldElement {
        limbs: [1, 0, 0, 0],
    };

    /// Element with the low 64 coefficient bits set from `x`.
    pub fn from_u64(x: u64) -> Self {
        FieldElement {
            limbs: [x, 0, 0, 0],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs == [0; LIMBS]
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        self.limbs[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    fn set_bit(&mut self, i: usize) {
        self.limbs[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    fn clear_bit(&mut self, i: usize) {
        self.limbs[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    fn xor_assign(&mut self, other: &FieldElement) {
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= b;
        }
    }

    /// Shift left by one; returns the bit shifted out of position 255.
    fn shl1(&self) -> (FieldElement, bool) {
        let carry_out = self.limbs[LIMBS - 1] >> 63 == 1;
        let mut out = [0u64; LIMBS];
        let mut carry = 0u64;
        for (o, &l) in out.iter_mut().zip(&self.limbs) {
            *o = (l << 1) | carry;
            carry = l >> 63;
        }
        (FieldElement { limbs: out }, carry_out)
    }

    /// Coefficients as a bit vector of length `n`.
    pub fn coords(&self, n: usize) -> BitVec {
        BitVec::from_words(n, &self.limbs)
    }

    /// `ceil(n/8)` bytes, little-endian bit order; unused high bits zero.
    pub fn to_bytes(&self, n: usize) -> Vec<u8> {
        self.coords(n).to_bytes()
    }

    /// Rejects wrong lengths and nonzero padding bits.
    pub fn from_bytes(n: usize, bytes: &[u8]) -> Option<Self> {
        let v = BitVec::from_bytes(n, bytes)?;
        let mut limbs = [0u64; LIMBS];
        for (l, &w) in limbs.iter_mut().zip(v.words()) {
            *l = w;
        }
        Some(FieldElement { limbs })
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(mut self, rhs: FieldElement) -> FieldElement {
        self.xor_assign(&rhs);
        self
    }
}

impl std::ops::AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        self.xor_assign(&rhs);
    }
}

impl std::fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let top = (0..LIMBS).rev().find(|&w| self.limbs[w] != 0).unwrap_or(0);
        write!(f, "{:#x}", self.limbs[top])?;
        for w in (0..top).rev() {
            write!(f, "_{:016x}", self.limbs[w])?;
        }
        Ok(())
    }
}

/// Carry-less 64x64 -> 128 bit multiplication, (lo, hi).
#[inline]
fn clmul64(a: u64, mut b: u64) -> (u64, u64) {
    let mut lo = 0u64;
    let mut hi = 0u64;
    while b != 0 {
        let i = b.trailing_zeros();
        lo ^= a << i;
        if i != 0 {
            hi ^= a >> (64 - i);
        }
        b &= b - 1;
    }
    (lo, hi)
}

/// The field GF(2^n): modulus, the public normal basis `g`, and the
/// precomputed reduction/squaring tables. Immutable after construction.
#[derive(Clone)]
pub struct FieldContext {
    n: usize,
    limbs: usize,
    /// Modulus minus its leading term z^n (the leading 1 is implicit).
    modulus_low: FieldElement,
    /// fold[j] = z^(n+j) mod modulus, for j in 0..n-1.
    fold: Vec<FieldElement>,
    /// sq[i] = z^(2i) mod modulus, for i in 0..n. Makes squaring a linear
    /// table lookup; this is the cached Frobenius data.
    sq: Vec<FieldElement>,
    /// Normal basis: g[j] = g[0]^(2^j).
    g: Vec<FieldElement>,
    /// Inverse of the matrix whose columns are the polynomial-basis
    /// coordinates of g; maps polynomial coordinates to g-coordinates.
    g_inv: BitMatrix,
}

impl FieldContext {
    /// Deterministically instantiates GF(2^n). The same `n` always yields a
    /// bit-identical context.
    pub fn new(n: usize) -> Result<FieldContext, FieldError> {
        if !(2..=MAX_DEGREE).contains(&n) {
            return Err(FieldError::UnsupportedDegree(n));
        }
        let modulus_low = find_modulus(n);

        // fold[j] = z^(n+j) mod f for j in 0..n-1 (product bits reach 2n-2),
        // built by repeated multiplication by z
        let mut fold = Vec::with_capacity(n - 1);
        let mut cur = modulus_low; // z^n mod f
        for _ in 0..n - 1 {
            fold.push(cur);
            cur = mul_z(cur, &modulus_low, n);
        }

        let mut sq = Vec::with_capacity(n);
        for i in 0..n {
            if 2 * i < n {
                let mut e = FieldElement::ZERO;
                e.set_bit(2 * i);
                sq.push(e);
            } else {
                sq.push(fold[2 * i - n]);
            }
        }

        let mut ctx = FieldContext {
            n,
            limbs: n.div_ceil(64),
            modulus_low,
            fold,
            sq,
            g: Vec::new(),
            g_inv: BitMatrix::zeros(0, 0),
        };

        let g0 = ctx.first_normal_generator();
        let mut g = Vec::with_capacity(n);
        let mut x = g0;
        for _ in 0..n {
            g.push(x);
            x = ctx.square(x);
        }
        ctx.g_inv = invert_coords_matrix(&g, n).expect("normal basis is invertible");
        ctx.g = g;
        Ok(ctx)
    }

    /// First candidate on a fixed ChaCha20 stream whose conjugate orbit
    /// x, x^2, ..., x^(2^(n-1)) is linearly independent over GF(2).
    ///
    /// Random elements are normal with probability ≥ 0.28, so this takes a
    /// handful of draws. A scan in increasing integer order does not work:
    /// small-integer elements are systematically non-normal (the first
    /// normal element is already past 2^17 for n = 20), which puts integer
    /// order out of reach for n ≥ 64. The stream is keyed only by n, so
    /// the choice stays deterministic.
    fn first_normal_generator(&self) -> FieldElement {
        use rand::SeedableRng;
        let mut seed = *b"gf2n normal basis generator scan";
        seed[30] = (self.n >> 8) as u8;
        seed[31] = self.n as u8;
        let mut stream = rand_chacha::ChaCha20Rng::from_seed(seed);
        loop {
            let x = self.random_element(&mut stream);
            if x.is_zero() {
                continue;
            }
            let mut m = BitMatrix::zeros(self.n, self.n);
            let mut c = x;
            for j in 0..self.n {
                let coords = c.coords(self.n);
                for i in 0..self.n {
                    if coords.get(i) {
                        m.set(i, j, true);
                    }
                }
                c = self.square(c);
            }
            if m.rank() == self.n {
                return x;
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// The public basis g (a normal basis: each entry is the square of the
    /// previous one).
    pub fn basis(&self) -> &[FieldElement] {
        &self.g
    }

    /// Modulus coefficients without the leading term.
    pub fn modulus_low(&self) -> FieldElement {
        self.modulus_low
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let mut prod = [0u64; 2 * LIMBS];
        for i in 0..self.limbs {
            if a.limbs[i] == 0 {
                continue;
            }
            for j in 0..self.limbs {
                if b.limbs[j] == 0 {
                    continue;
                }
                let (lo, hi) = clmul64(a.limbs[i], b.limbs[j]);
                prod[i + j] ^= lo;
                prod[i + j + 1] ^= hi;
            }
        }
        self.reduce(&prod)
    }

    /// Reduces a carry-less product (degree <= 2n-2) modulo the field
    /// polynomial. fold[] entries only have bits below n, so one pass over
    /// the high bits suffices.
    fn reduce(&self, prod: &[u64; 2 * LIMBS]) -> FieldElement {
        let n = self.n;
        let mut out = FieldElement::ZERO;
        out.limbs[..self.limbs].copy_from_slice(&prod[..self.limbs]);
        // clear bits >= n in the low copy; they are handled by the fold
        for i in n..self.limbs * 64 {
            out.clear_bit(i);
        }
        let hi_start = n / 64;
        let hi_end = (2 * n - 2) / 64;
        for w in hi_start..=hi_end {
            let mut bits = prod[w];
            if w == hi_start && n % 64 != 0 {
                bits &= !((1u64 << (n % 64)) - 1);
            }
            while bits != 0 {
                let p = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                out.xor_assign(&self.fold[p - n]);
            }
        }
        out
    }

    /// x^2 via the table of squared monomials (squaring is GF(2)-linear).
    pub fn square(&self, a: FieldElement) -> FieldElement {
        let mut out = FieldElement::ZERO;
        for w in 0..self.limbs {
            let mut bits = a.limbs[w];
            while bits != 0 {
                let i = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                out.xor_assign(&self.sq[i]);
            }
        }
        out
    }

    /// theta^i: the i-fold Frobenius x -> x^(2^i). theta^n is the identity,
    /// so i is reduced mod n; inverse Frobenius is `frobenius(x, n - 1)`.
    pub fn frobenius(&self, x: FieldElement, i: usize) -> FieldElement {
        let mut y = x;
        for _ in 0..(i % self.n) {
            y = self.square(y);
        }
        y
    }

    /// Multiplicative inverse by Fermat: x^(2^n - 2).
    pub fn inv(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroInversion);
        }
        let mut y = x; // invariant: y = x^(2^(k+1) - 1)
        for _ in 0..self.n - 2 {
            y = self.mul(self.square(y), x);
        }
        Ok(self.square(y))
    }

    /// Uniform random element.
    pub fn random_element<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let mut limbs = [0u64; LIMBS];
        for l in limbs.iter_mut().take(self.limbs) {
            *l = rng.next_u64();
        }
        if self.n % 64 != 0 {
            limbs[self.limbs - 1] &= (1u64 << (self.n % 64)) - 1;
        }
        FieldElement { limbs }
    }

    /// Uniform random nonzero element.
    pub fn random_nonzero<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let x = self.random_element(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Extension map: column j of the result holds the coordinates of
    /// `a[j]` in `basis`. Fails on a singular basis.
    pub fn ext(
        &self,
        a: &[FieldElement],
        basis: &[FieldElement],
    ) -> Result<BitMatrix, FieldError> {
        let n = self.n;
        assert_eq!(basis.len(), n, "basis length");
        // solve B X = C in one elimination, B = basis coords, C = a coords
        let mut aug = BitMatrix::zeros(n, n + a.len());
        for (j, b) in basis.iter().enumerate() {
            let coords = b.coords(n);
            for i in 0..n {
                if coords.get(i) {
                    aug.set(i, j, true);
                }
            }
        }
        for (j, x) in a.iter().enumerate() {
            let coords = x.coords(n);
            for i in 0..n {
                if coords.get(i) {
                    aug.set(i, n + j, true);
                }
            }
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(FieldError::SingularBasis);
        }
        let mut out = BitMatrix::zeros(n, a.len());
        for j in 0..a.len() {
            for i in 0..n {
                if aug.get(i, n + j) {
                    out.set(i, j, true);
                }
            }
        }
        Ok(out)
    }

    /// Extension map with respect to the public basis g (fast path through
    /// the precomputed inverse).
    pub fn ext_g(&self, a: &[FieldElement]) -> BitMatrix {
        let n = self.n;
        let mut out = BitMatrix::zeros(n, a.len());
        for (j, x) in a.iter().enumerate() {
            let coords = x.coords(n);
            for i in 0..n {
                if self.g_inv.row_bitvec(i).dot(&coords) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    /// Inverse of `ext`: entry (i, j) of `m` selects `basis[i]` into output
    /// coordinate j. Accepts any row count matching `basis`.
    pub fn compress(&self, m: &BitMatrix, basis: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(m.rows(), basis.len(), "row count");
        let mut out = vec![FieldElement::ZERO; m.cols()];
        for (i, b) in basis.iter().enumerate() {
            for j in 0..m.cols() {
                if m.get(i, j) {
                    out[j].xor_assign(b);
                }
            }
        }
        out
    }

    pub fn compress_g(&self, m: &BitMatrix) -> Vec<FieldElement> {
        self.compress(m, &self.g)
    }

    /// Rank of a vector: the GF(2)-rank of its coordinate matrix. The raw
    /// polynomial-basis coordinates suffice since a change of basis is an
    /// invertible transform.
    pub fn vector_rank(&self, a: &[FieldElement]) -> usize {
        let mut m = BitMatrix::zeros(self.n, a.len());
        for (j, x) in a.iter().enumerate() {
            let coords = x.coords(self.n);
            for i in 0..self.n {
                if coords.get(i) {
                    m.set(i, j, true);
                }
            }
        }
        m.rank()
    }
}

/// x * z mod f, for the construction-time scan (no tables yet).
fn mul_z(x: FieldElement, modulus_low: &FieldElement, n: usize) -> FieldElement {
    let (mut y, carry) = x.shl1();
    let top = if n == MAX_DEGREE { carry } else { y.bit(n) };
    if top {
        if n < MAX_DEGREE {
            y.clear_bit(n);
        }
        y.xor_assign(modulus_low);
    }
    y
}

fn scan_mulmod(
    a: FieldElement,
    b: FieldElement,
    modulus_low: &FieldElement,
    n: usize,
) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    let mut shifted = a;
    for i in 0..n {
        if b.bit(i) {
            acc.xor_assign(&shifted);
        }
        shifted = mul_z(shifted, modulus_low, n);
    }
    acc
}

/// z^(2^k) mod f by repeated squaring.
fn pow_z_2k(k: usize, modulus_low: &FieldElement, n: usize) -> FieldElement {
    let mut r = FieldElement::from_u64(2); // z
    for _ in 0..k {
        r = scan_mulmod(r, r, modulus_low, n);
    }
    r
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// full polynomials (degree can reach n = 256, so one extra limb)
type Poly = [u64; LIMBS + 1];

fn poly_deg(a: &Poly) -> Option<usize> {
    for w in (0..a.len()).rev() {
        if a[w] != 0 {
            return Some(w * 64 + 63 - a[w].leading_zeros() as usize);
        }
    }
    None
}

fn poly_xor_shifted(a: &mut Poly, b: &Poly, shift: usize) {
    let (words, bits) = (shift / 64, shift % 64);
    for w in 0..a.len() {
        if w >= words {
            let mut v = b[w - words] << bits;
            if bits != 0 && w - words >= 1 {
                v |= b[w - words - 1] >> (64 - bits);
            }
            a[w] ^= v;
        }
    }
}

fn poly_rem(mut a: Poly, b: &Poly) -> Poly {
    let db = poly_deg(b).expect("division by zero polynomial");
    while let Some(da) = poly_deg(&a) {
        if da < db {
            break;
        }
        poly_xor_shifted(&mut a, b, da - db);
    }
    a
}

fn poly_gcd(mut a: Poly, mut b: Poly) -> Poly {
    while poly_deg(&b).is_some() {
        let r = poly_rem(a, &b);
        a = b;
        b = r;
    }
    a
}

fn to_poly(low: &FieldElement, leading: Option<usize>) -> Poly {
    let mut p: Poly = [0; LIMBS + 1];
    p[..LIMBS].copy_from_slice(&low.limbs);
    if let Some(d) = leading {
        p[d / 64] |= 1 << (d % 64);
    }
    p
}

/// Deterministic irreducibility test: z^(2^n) = z mod f, and for each prime
/// p | n, gcd(z^(2^(n/p)) - z, f) = 1.
fn is_irreducible(modulus_low: &FieldElement, n: usize) -> bool {
    let z = FieldElement::from_u64(2);
    if pow_z_2k(n, modulus_low, n) != z {
        return false;
    }
    let f = to_poly(modulus_low, Some(n));
    for p in prime_factors(n) {
        let h = pow_z_2k(n / p, modulus_low, n) + z;
        let g = poly_gcd(f, to_poly(&h, None));
        if poly_deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Lexicographically smallest irreducible polynomial of degree n, found by
/// scanning the low coefficients in increasing integer order.
fn find_modulus(n: usize) -> FieldElement {
    let mut low = FieldElement::ONE; // constant term must be 1 anyway
    loop {
        if is_irreducible(&low, n) {
            return low;
        }
        low = increment(low);
    }
}

fn increment(mut x: FieldElement) -> FieldElement {
    for l in x.limbs.iter_mut() {
        let (v, overflow) = l.overflowing_add(1);
        *l = v;
        if !overflow {
            break;
        }
    }
    x
}

fn invert_coords_matrix(basis: &[FieldElement], n: usize) -> Option<BitMatrix> {
    let mut aug = BitMatrix::zeros(n, 2 * n);
    for (j, b) in basis.iter().enumerate() {
        let coords = b.coords(n);
        for i in 0..n {
            if coords.get(i) {
                aug.set(i, j, true);
            }
        }
        aug.set(j, n + j, true);
    }
    let pivots = aug.rref_in_place();
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = BitMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if aug.get(i, n + j) {
                inv.set(i, j, true);
            }
        }
    }
    Some(inv)
}
