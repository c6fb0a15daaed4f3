//! Dense linear algebra over GF(2).
//!
//! Matrices are stored row-major with 64 row bits per word; all row
//! operations are word-wide XORs, so elimination on the sizes used by the
//! scheme (n ≤ 256) stays cache-resident. Samplers take an explicit RNG
//! owned by the caller.

use rand::RngCore;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// A bit vector of fixed length. Bits beyond `len` are kept zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn random<R: RngCore + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.next_u64();
        }
        v.mask_tail();
        v
    }

    fn mask_tail(&mut self) {
        if self.len % 64 != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << (self.len % 64)) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_with(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Builds a vector from packed words, truncating or zero-padding to `len`.
    pub fn from_words(len: usize, words: &[u64]) -> Self {
        let mut v = Self::zeros(len);
        let take = v.words.len().min(words.len());
        v.words[..take].copy_from_slice(&words[..take]);
        v.mask_tail();
        v
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Little-endian bit order: bit j of byte i is entry 8i+j.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for (i, b) in out.iter_mut().enumerate() {
            *b = (self.words[i / 8] >> (8 * (i % 8))) as u8;
        }
        out
    }

    /// Rejects inputs of the wrong length or with nonzero padding bits.
    pub fn from_bytes(len: usize, bytes: &[u8]) -> Option<Self> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        let mut v = Self::zeros(len);
        for (i, &b) in bytes.iter().enumerate() {
            v.words[i / 8] |= (b as u64) << (8 * (i % 8));
        }
        let mut clean = v.clone();
        clean.mask_tail();
        if clean.words != v.words {
            return None;
        }
        Some(clean)
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}

/// A bit matrix in GF(2)^{rows x cols}, packed row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = words_for(cols);
        BitMatrix {
            rows,
            cols,
            wpr,
            data: vec![0; rows * wpr],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn random<R: RngCore + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for w in m.row_mut(r) {
                *w = rng.next_u64();
            }
            m.mask_row_tail(r);
        }
        m
    }

    fn mask_row_tail(&mut self, r: usize) {
        if self.cols % 64 != 0 {
            let mask = (1u64 << (self.cols % 64)) - 1;
            let last = self.wpr - 1;
            self.row_mut(r)[last] &= mask;
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    #[inline]
    fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.row(r)[c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let mask = 1u64 << (c % 64);
        if value {
            self.row_mut(r)[c / 64] |= mask;
        } else {
            self.row_mut(r)[c / 64] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn row_bitvec(&self, r: usize) -> BitVec {
        BitVec {
            len: self.cols,
            words: self.row(r).to_vec(),
        }
    }

    pub fn set_row(&mut self, r: usize, v: &BitVec) {
        debug_assert_eq!(v.len, self.cols);
        self.row_mut(r).copy_from_slice(&v.words);
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let (d, s) = if dst < src {
            let (a, b) = self.data.split_at_mut(src * self.wpr);
            (&mut a[dst * self.wpr..(dst + 1) * self.wpr], &b[..self.wpr])
        } else {
            let (a, b) = self.data.split_at_mut(dst * self.wpr);
            (&mut b[..self.wpr], &a[src * self.wpr..(src + 1) * self.wpr])
        };
        for (x, y) in d.iter_mut().zip(s) {
            *x ^= y;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.wpr {
            self.data.swap(a * self.wpr + w, b * self.wpr + w);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for w in 0..self.wpr {
                let mut bits = self.row(r)[w];
                while bits != 0 {
                    let j = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let src = other.row(j).to_vec();
                    for (x, y) in out.row_mut(r).iter_mut().zip(&src) {
                        *x ^= y;
                    }
                }
            }
        }
        out
    }

    /// `self` stacked on top of `other` (column counts must agree).
    pub fn stack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "dimension mismatch");
        let mut out = BitMatrix::zeros(self.rows + other.rows, self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&other.data);
        out
    }

    /// In-place reduction to the unique reduced row echelon form.
    /// Returns the pivot columns in increasing order.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form together with the rank.
    pub fn rref(&self) -> (BitMatrix, usize) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Checks the three RREF conditions: pivots strictly move right, each
    /// pivot is 1 and the only nonzero entry of its column, zero rows last.
    pub fn is_rref(&self) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero_row = false;
        for r in 0..self.rows {
            let pivot = (0..self.cols).find(|&c| self.get(r, c));
            match pivot {
                None => seen_zero_row = true,
                Some(c) => {
                    if seen_zero_row {
                        return false;
                    }
                    if let Some(prev) = last_pivot {
                        if c <= prev {
                            return false;
                        }
                    }
                    if (0..self.rows).any(|i| i != r && self.get(i, c)) {
                        return false;
                    }
                    last_pivot = Some(c);
                }
            }
        }
        true
    }

    /// One solution of `self * x = b` (free variables set to zero), or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len, self.rows, "dimension mismatch");
        let mut aug = BitMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for (w, &word) in self.row(r).iter().enumerate() {
                aug.row_mut(r)[w] = word;
            }
            aug.mask_row_tail(r);
            aug.set(r, self.cols, b.get(r));
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVec::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            x.set(c, aug.get(r, self.cols));
        }
        Some(x)
    }

    /// A basis of the right kernel `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = BitVec::zeros(self.cols);
            v.set(f, true);
            for (r, &c) in pivots.iter().enumerate() {
                if m.get(r, f) {
                    v.set(c, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Row-major serialization: `rows * ceil(cols/8)` bytes, little-endian
    /// bit order within each byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        let stride = self.cols.div_ceil(8);
        let mut out = Vec::with_capacity(self.rows * stride);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..stride {
                out.push((row[i / 8] >> (8 * (i % 8))) as u8);
            }
        }
        out
    }

    /// Rejects inputs of the wrong length or with nonzero padding bits.
    pub fn from_bytes(rows: usize, cols: usize, bytes: &[u8]) -> Option<Self> {
        let stride = cols.div_ceil(8);
        if bytes.len() != rows * stride {
            return None;
        }
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            let chunk = &bytes[r * stride..(r + 1) * stride];
            for (i, &b) in chunk.iter().enumerate() {
                m.row_mut(r)[i / 8] |= (b as u64) << (8 * (i % 8));
            }
            let raw = m.row(r).to_vec();
            m.mask_row_tail(r);
            if m.row(r) != raw.as_slice() {
                return None;
            }
        }
        Some(m)
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", self.get(r, c) as u8)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Uniform sample from GL_n(GF(2)) by rejection; a uniform matrix is
/// invertible with probability ~0.289, so this takes < 4 draws on average.
pub fn sample_invertible<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> BitMatrix {
    loop {
        let m = BitMatrix::random(n, n, rng);
        if m.rank() == n {
            return m;
        }
    }
}

fn sample_full_rank<R: RngCore + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> BitMatrix {
    let target = rows.min(cols);
    loop {
        let m = BitMatrix::random(rows, cols, rng);
        if m.rank() == target {
            return m;
        }
    }
}

/// Uniform sample from the n x n matrices of rank exactly r, as the product
/// of uniform full-rank n x r and r x n factors: every rank-r matrix has
/// exactly |GL_r| such factorizations, so the product is uniform.
pub fn sample_rank_exact<R: RngCore + ?Sized>(n: usize, r: usize, rng: &mut R) -> BitMatrix {
    assert!(r <= n, "rank {r} exceeds dimension {n}");
    if r == 0 {
        return BitMatrix::zeros(n, n);
    }
    let u = sample_full_rank(n, r, rng);
    let v = sample_full_rank(r, n, rng);
    u.mul(&v)
}

/// Dimension of the intersection of the row spaces of `a` and `b`
/// (subspaces of GF(2)^cols): rk(a) + rk(b) - rk(a stacked on b).
pub fn subspace_intersection_dim(a: &BitMatrix, b: &BitMatrix) -> usize {
    assert_eq!(a.cols, b.cols, "ambient spaces differ");
    a.rank() + b.rank() - a.stack(b).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn rng(tag: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(tag)
    }

    #[test]
    fn rref_identity_and_zero() {
        let (r, rank) = BitMatrix::identity(7).rref();
        assert_eq!(r, BitMatrix::identity(7));
        assert_eq!(rank, 7);
        let (r, rank) = BitMatrix::zeros(5, 9).rref();
        assert!(r.is_zero());
        assert_eq!(rank, 0);
    }

    #[test]
    fn rref_is_canonical_under_row_transforms() {
        let mut rng = rng(1);
        for _ in 0..100 {
            let m = BitMatrix::random(10, 14, &mut rng);
            let u = sample_invertible(10, &mut rng);
            assert_eq!(u.mul(&m).rref(), m.rref());
        }
    }

    #[test]
    fn rref_idempotent_and_rank_transpose() {
        let mut rng = rng(2);
        for _ in 0..50 {
            let m = BitMatrix::random(9, 13, &mut rng);
            let (r, rank) = m.rref();
            assert_eq!(r.rref().0, r);
            assert!(r.is_rref());
            assert_eq!(rank, m.transpose().rank());
        }
    }

    #[test]
    fn rref_handles_degenerate_shapes() {
        let (r, rank) = BitMatrix::zeros(0, 4).rref();
        assert_eq!(rank, 0);
        assert_eq!(r.rows(), 0);
        let one_row = BitMatrix::random(1, 70, &mut rng(3));
        let (_, rank) = one_row.rref();
        assert!(rank <= 1);
    }

    #[test]
    fn solve_identity_and_random_consistent_systems() {
        let mut rng = rng(4);
        let b = BitVec::random(8, &mut rng);
        assert_eq!(BitMatrix::identity(8).solve(&b).unwrap(), b);

        for _ in 0..100 {
            let a = BitMatrix::random(9, 12, &mut rng);
            let x0 = BitVec::random(12, &mut rng);
            // b := a * x0 is consistent by construction
            let mut b = BitVec::zeros(9);
            for r in 0..9 {
                let mut acc = false;
                for c in 0..12 {
                    acc ^= a.get(r, c) && x0.get(c);
                }
                b.set(r, acc);
            }
            let x = a.solve(&b).expect("consistent");
            for r in 0..9 {
                let mut acc = false;
                for c in 0..12 {
                    acc ^= a.get(r, c) && x.get(c);
                }
                assert_eq!(acc, b.get(r));
            }
        }
    }

    #[test]
    fn solve_reports_inconsistency() {
        // 2x1 system x = 0 and x = 1
        let mut a = BitMatrix::zeros(2, 1);
        a.set(0, 0, true);
        a.set(1, 0, true);
        let mut b = BitVec::zeros(2);
        b.set(1, true);
        // rows force x=0 and x=1 simultaneously after adding them: 0 = 1
        b.set(0, false);
        assert!(a.solve(&b).is_none());
    }

    #[test]
    fn kernel_dimension_matches_rank_nullity() {
        let mut rng = rng(5);
        for _ in 0..50 {
            let a = BitMatrix::random(8, 11, &mut rng);
            let rank = a.rank();
            let basis = a.kernel_basis();
            assert_eq!(basis.len(), 11 - rank);
            for v in &basis {
                for r in 0..8 {
                    let mut acc = false;
                    for c in 0..11 {
                        acc ^= a.get(r, c) && v.get(c);
                    }
                    assert!(!acc, "kernel vector not annihilated");
                }
            }
            // independence
            let mut m = BitMatrix::zeros(basis.len(), 11);
            for (i, v) in basis.iter().enumerate() {
                m.set_row(i, v);
            }
            assert_eq!(m.rank(), basis.len());
        }
    }

    #[test]
    fn sample_invertible_always_full_rank() {
        let mut rng = rng(6);
        for _ in 0..1000 {
            assert_eq!(sample_invertible(8, &mut rng).rank(), 8);
        }
        // n = 1: the only invertible matrix is (1)
        let m = sample_invertible(1, &mut rng);
        assert!(m.get(0, 0));
    }

    #[test]
    fn invertibility_density_matches_gl_product() {
        // P(rank = n) = prod_{i=1..n} (1 - 2^-i) = 0.287925... at n = 16
        let mut rng = rng(7);
        let trials = 10_000;
        let hits = (0..trials)
            .filter(|_| BitMatrix::random(16, 16, &mut rng).rank() == 16)
            .count();
        let p = 0.2887925016880553;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        let observed = hits as f64 / trials as f64;
        assert!(
            (observed - p).abs() < 3.0 * sigma,
            "observed {observed}, expected {p} +- {}",
            3.0 * sigma
        );
    }

    #[test]
    fn sample_rank_exact_hits_requested_rank() {
        let mut rng = rng(8);
        for _ in 0..1000 {
            assert_eq!(sample_rank_exact(8, 3, &mut rng).rank(), 3);
        }
        assert!(sample_rank_exact(6, 0, &mut rng).is_zero());
        assert_eq!(sample_rank_exact(6, 6, &mut rng).rank(), 6);
    }

    #[test]
    fn rank_sampler_composed_with_rref_lands_in_plaintext_space() {
        let mut rng = rng(9);
        for _ in 0..200 {
            let (r, rank) = sample_rank_exact(8, 3, &mut rng).rref();
            assert_eq!(rank, 3);
            assert!(r.is_rref());
        }
    }

    #[test]
    fn intersection_dim_trivial_cases() {
        let mut rng = rng(10);
        let a = BitMatrix::random(4, 10, &mut rng);
        assert_eq!(subspace_intersection_dim(&a, &a), a.rank());

        // complementary coordinate subspaces
        let mut x = BitMatrix::zeros(3, 8);
        let mut y = BitMatrix::zeros(5, 8);
        for i in 0..3 {
            x.set(i, i, true);
        }
        for i in 0..5 {
            y.set(i, 3 + i, true);
        }
        assert_eq!(subspace_intersection_dim(&x, &y), 0);
    }

    #[test]
    fn intersection_dim_agrees_with_enumeration() {
        // enumerate all elements of span(a) and test membership in span(b)
        let mut rng = rng(11);
        for _ in 0..40 {
            let a = BitMatrix::random(3, 9, &mut rng);
            let b = BitMatrix::random(4, 9, &mut rng);
            let (ra, rank_a) = a.rref();
            let mut count = 0u32;
            for mask in 0u32..(1 << rank_a) {
                let mut v = BitVec::zeros(9);
                for i in 0..rank_a {
                    if mask >> i & 1 == 1 {
                        v.xor_with(&ra.row_bitvec(i));
                    }
                }
                // v in span(b) iff stacking it on b does not raise the rank
                let mut vm = BitMatrix::zeros(1, 9);
                vm.set_row(0, &v);
                if b.stack(&vm).rank() == b.rank() {
                    count += 1;
                }
            }
            let dim = subspace_intersection_dim(&a, &b);
            assert_eq!(1u32 << dim, count);
        }
    }

    #[test]
    fn rank_invariant_under_left_multiplication() {
        let mut rng = rng(12);
        for _ in 0..50 {
            let m = BitMatrix::random(12, 12, &mut rng);
            let u = sample_invertible(12, &mut rng);
            assert_eq!(u.mul(&m).rank(), m.rank());
        }
    }

    #[test]
    fn subspace_collision_probability_is_bounded() {
        // P(uniform t-dim subspace meets fixed w-dim nontrivially)
        //   <= (2^t-1)(2^w-1)/(2^n-1), checked statistically at n = 12.
        let (n, t, w) = (12usize, 3usize, 4usize);
        let mut fixed = BitMatrix::zeros(w, n);
        for i in 0..w {
            fixed.set(i, i, true);
        }
        let bound = ((1u32 << t) - 1) as f64 * ((1u32 << w) - 1) as f64
            / ((1u32 << n) - 1) as f64;
        let trials = 20_000;
        let mut rng = rng(13);
        let hits = (0..trials)
            .filter(|_| {
                let s = sample_rank_exact(n, t, &mut rng);
                subspace_intersection_dim(&s, &fixed) > 0
            })
            .count();
        let observed = hits as f64 / trials as f64;
        let sigma = (bound * (1.0 - bound) / trials as f64).sqrt();
        assert!(
            observed <= bound + 3.0 * sigma,
            "observed {observed} above bound {bound}"
        );
    }

    #[test]
    fn bytes_round_trip_and_padding_is_strict() {
        let mut rng = rng(14);
        for _ in 0..50 {
            let m = BitMatrix::random(5, 21, &mut rng);
            let bytes = m.to_bytes();
            assert_eq!(bytes.len(), 5 * 3);
            assert_eq!(BitMatrix::from_bytes(5, 21, &bytes).unwrap(), m);
        }
        // padding bits must be zero: 21 cols -> top 3 bits of each 3rd byte
        let m = BitMatrix::zeros(1, 21);
        let mut bytes = m.to_bytes();
        bytes[2] |= 0x80;
        assert!(BitMatrix::from_bytes(1, 21, &bytes).is_none());
        assert!(BitMatrix::from_bytes(1, 21, &[0u8; 2]).is_none());

        let v = BitVec::random(13, &mut rng);
        assert_eq!(BitVec::from_bytes(13, &v.to_bytes()).unwrap(), v);
    }
}
