//! Sparse q-ary parity-check matrices and Tanner-graph structure.
//!
//! A matrix is stored row-wise as `(column, coefficient)` pairs with strictly
//! increasing columns and nonzero coefficients; the column-wise adjacency is
//! derived at construction so the two views are consistent by construction.

use crate::gf::{GfContext, GfElem};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CodeError {
    #[error("row {row}: column indices must be strictly increasing")]
    UnsortedRow { row: usize },
    #[error("row {row}, column {col}: coefficient {coeff} out of GF({q}) \\ {{0}}")]
    BadCoefficient { row: usize, col: usize, coeff: u16, q: usize },
    #[error("row {row}: column index {col} out of range (n={n})")]
    ColumnOutOfRange { row: usize, col: usize, n: usize },
    #[error("word length {got} does not match code length {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("circulant shift {shift} out of range (size {size})")]
    ShiftOutOfRange { shift: usize, size: usize },
    #[error("n*d_v = {edges} is not divisible by d_c = {dc}")]
    NotDivisible { edges: usize, dc: usize },
    #[error("could not place a ({dv},{dc})-regular edge set without duplicate edges")]
    PlacementFailed { dv: usize, dc: usize },
}

/// A length-n word of field symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolWord(pub Vec<GfElem>);

impl SymbolWord {
    pub fn zero(n: usize) -> Self {
        SymbolWord(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Sparse m x n parity-check matrix over GF(q).
#[derive(Debug, Clone)]
pub struct ParityCheckMatrix {
    gf: Arc<GfContext>,
    m: usize,
    n: usize,
    rows: Vec<Vec<(usize, GfElem)>>,
    cols: Vec<Vec<(usize, GfElem)>>,
    rank: usize,
}

impl ParityCheckMatrix {
    pub fn new(
        gf: Arc<GfContext>,
        m: usize,
        n: usize,
        rows: Vec<Vec<(usize, GfElem)>>,
    ) -> Result<Self, CodeError> {
        assert_eq!(rows.len(), m, "row count mismatch");
        let q = gf.q();
        let mut cols = vec![Vec::new(); n];
        for (i, row) in rows.iter().enumerate() {
            let mut prev: Option<usize> = None;
            for &(j, h) in row {
                if j >= n {
                    return Err(CodeError::ColumnOutOfRange { row: i, col: j, n });
                }
                if prev.is_some_and(|p| p >= j) {
                    return Err(CodeError::UnsortedRow { row: i });
                }
                prev = Some(j);
                if h == 0 || h as usize >= q {
                    return Err(CodeError::BadCoefficient { row: i, col: j, coeff: h as u16, q });
                }
                cols[j].push((i, h));
            }
        }
        let rank = gf_rank(&gf, m, n, &rows);
        Ok(ParityCheckMatrix { gf, m, n, rows, cols, rank })
    }

    pub fn gf(&self) -> &Arc<GfContext> {
        &self.gf
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of H over GF(q).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Code dimension r = n - rank(H).
    pub fn dimension(&self) -> usize {
        self.n - self.rank
    }

    /// Code rate r/n.
    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.n as f64
    }

    /// Row adjacency N_i as (column, coefficient) pairs.
    pub fn row(&self, i: usize) -> &[(usize, GfElem)] {
        &self.rows[i]
    }

    /// Column adjacency M_j as (row, coefficient) pairs.
    pub fn col(&self, j: usize) -> &[(usize, GfElem)] {
        &self.cols[j]
    }

    /// Syndrome z * H^T; all-zero exactly when z is a codeword.
    pub fn syndrome(&self, z: &SymbolWord) -> Result<Vec<GfElem>, CodeError> {
        if z.len() != self.n {
            return Err(CodeError::LengthMismatch { got: z.len(), want: self.n });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(0, |acc, &(j, h)| acc ^ self.gf.mul(h, z.0[j]))
            })
            .collect())
    }

    pub fn is_codeword(&self, z: &SymbolWord) -> Result<bool, CodeError> {
        Ok(self.syndrome(z)?.iter().all(|&s| s == 0))
    }

    /// Number of length-4 cycles in the Tanner graph. Diagnostic only.
    pub fn count_4cycles(&self) -> usize {
        let mut total = 0;
        for i in 0..self.m {
            for i2 in i + 1..self.m {
                let shared = intersect_count(&self.rows[i], &self.rows[i2]);
                total += shared * shared.saturating_sub(1) / 2;
            }
        }
        total
    }

    /// FNV-1a digest of the matrix content, for result provenance.
    pub fn content_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |v: u64| {
            for byte in v.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        eat(self.gf.q() as u64);
        eat(self.m as u64);
        eat(self.n as u64);
        for row in &self.rows {
            for &(j, c) in row {
                eat(j as u64);
                eat(c as u64);
            }
            eat(u64::MAX);
        }
        h
    }
}

fn intersect_count(a: &[(usize, GfElem)], b: &[(usize, GfElem)]) -> usize {
    let (mut ia, mut ib, mut count) = (0, 0, 0);
    while ia < a.len() && ib < b.len() {
        match a[ia].0.cmp(&b[ib].0) {
            std::cmp::Ordering::Less => ia += 1,
            std::cmp::Ordering::Greater => ib += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                ia += 1;
                ib += 1;
            }
        }
    }
    count
}

/// Dense Gaussian elimination rank over GF(q). Desk-scale matrices only.
fn gf_rank(gf: &GfContext, m: usize, n: usize, rows: &[Vec<(usize, GfElem)>]) -> usize {
    let mut dense: Vec<Vec<GfElem>> = vec![vec![0; n]; m];
    for (i, row) in rows.iter().enumerate() {
        for &(j, h) in row {
            dense[i][j] = h;
        }
    }
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..m).find(|&i| dense[i][col] != 0) else {
            continue;
        };
        dense.swap(rank, pivot);
        let inv = gf.inv(dense[rank][col]).expect("pivot is nonzero");
        for j in col..n {
            dense[rank][j] = gf.mul(dense[rank][j], inv);
        }
        for i in 0..m {
            if i != rank && dense[i][col] != 0 {
                let factor = dense[i][col];
                for j in col..n {
                    dense[i][j] ^= gf.mul(factor, dense[rank][j]);
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}

/// One block of a quasi-cyclic base matrix: either an all-zero block or a
/// circulant permutation with a shift and a single nonzero coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CirculantDesc {
    Zero,
    Circulant { shift: usize, coeff: GfElem },
}

/// Expands a base matrix of circulant descriptors into the full sparse matrix.
/// A `Circulant { shift: s, coeff: c }` block has entry c at (t, (t+s) mod L)
/// for t in 0..L.
pub fn qc_expand(
    base: &[Vec<CirculantDesc>],
    circ_size: usize,
    gf: Arc<GfContext>,
) -> Result<ParityCheckMatrix, CodeError> {
    let bm = base.len();
    let bn = base.first().map_or(0, |r| r.len());
    let m = bm * circ_size;
    let n = bn * circ_size;
    let q = gf.q();
    for row in base {
        for desc in row {
            if let CirculantDesc::Circulant { shift, coeff } = *desc {
                if shift >= circ_size {
                    return Err(CodeError::ShiftOutOfRange { shift, size: circ_size });
                }
                if coeff == 0 || coeff as usize >= q {
                    return Err(CodeError::BadCoefficient {
                        row: 0,
                        col: 0,
                        coeff: coeff as u16,
                        q,
                    });
                }
            }
        }
    }
    let mut rows: Vec<Vec<(usize, GfElem)>> = vec![Vec::new(); m];
    for (bi, brow) in base.iter().enumerate() {
        for t in 0..circ_size {
            let i = bi * circ_size + t;
            for (bj, desc) in brow.iter().enumerate() {
                if let CirculantDesc::Circulant { shift, coeff } = *desc {
                    rows[i].push((bj * circ_size + (t + shift) % circ_size, coeff));
                }
            }
            rows[i].sort_unstable_by_key(|&(j, _)| j);
        }
    }
    ParityCheckMatrix::new(gf, m, n, rows)
}

/// Builds a random `(d_v, d_c)`-regular matrix with coefficients uniform on
/// GF(q)\{0}, deterministic for a given seed. The edge set is drawn by socket
/// permutation; duplicate edges within a row are repaired by re-shuffling.
/// Girth is not conditioned: use [`ParityCheckMatrix::count_4cycles`] to
/// inspect the result.
pub fn random_regular(
    n: usize,
    d_v: usize,
    d_c: usize,
    gf: Arc<GfContext>,
    seed: u64,
) -> Result<ParityCheckMatrix, CodeError> {
    let edges = n * d_v;
    if !edges.is_multiple_of(d_c) {
        return Err(CodeError::NotDivisible { edges, dc: d_c });
    }
    let m = edges / d_c;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut sockets: Vec<usize> = (0..edges).map(|e| e / d_v).collect();
    sockets.shuffle(&mut rng);
    // Repair duplicate columns within a row by swapping the offender with a
    // random socket elsewhere; sweep until a full pass stays clean.
    let mut clean = false;
    for _ in 0..1_000 {
        let mut dirty = false;
        for i in 0..m {
            let base = i * d_c;
            for a in 0..d_c {
                for b in (a + 1)..d_c {
                    if sockets[base + a] == sockets[base + b] {
                        let other = rng.gen_range(0..edges);
                        sockets.swap(base + b, other);
                        dirty = true;
                    }
                }
            }
        }
        if !dirty {
            clean = true;
            break;
        }
    }
    if !clean {
        return Err(CodeError::PlacementFailed { dv: d_v, dc: d_c });
    }
    let q = gf.q();
    let rows = (0..m)
        .map(|i| {
            let slot = &mut sockets[i * d_c..(i + 1) * d_c];
            slot.sort_unstable();
            slot.iter().map(|&j| (j, rng.gen_range(1..q) as GfElem)).collect()
        })
        .collect();
    ParityCheckMatrix::new(gf, m, n, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> Arc<GfContext> {
        Arc::new(GfContext::new(p, None).unwrap())
    }

    /// Dense matrix-vector oracle over GF(q).
    fn dense_syndrome(h: &ParityCheckMatrix, z: &SymbolWord) -> Vec<GfElem> {
        let gf = h.gf();
        let mut dense = vec![vec![0; h.n()]; h.m()];
        for i in 0..h.m() {
            for &(j, c) in h.row(i) {
                dense[i][j] = c;
            }
        }
        dense
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&z.0)
                    .fold(0, |acc, (&c, &v)| acc ^ gf.mul(c, v))
            })
            .collect()
    }

    #[test]
    fn syndrome_basics() {
        let h = ParityCheckMatrix::new(gf(3), 1, 2, vec![vec![(0, 1), (1, 1)]]).unwrap();
        assert_eq!(h.syndrome(&SymbolWord::zero(2)).unwrap(), vec![0]);
        for d in 0..8u8 {
            assert_eq!(h.syndrome(&SymbolWord(vec![d, d])).unwrap(), vec![0]);
        }
        assert_eq!(
            h.syndrome(&SymbolWord::zero(3)),
            Err(CodeError::LengthMismatch { got: 3, want: 2 })
        );
    }

    #[test]
    fn syndrome_matches_dense_oracle() {
        use rand::{Rng, SeedableRng};
        let gf = gf(4);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for trial in 0..20 {
            let h = random_regular(24, 2, 4, gf.clone(), trial).unwrap();
            let z = SymbolWord((0..24).map(|_| rng.gen_range(0..16) as u8).collect());
            assert_eq!(h.syndrome(&z).unwrap(), dense_syndrome(&h, &z));
        }
    }

    #[test]
    fn adjacency_views_consistent() {
        let h = random_regular(24, 3, 6, gf(3), 9).unwrap();
        for i in 0..h.m() {
            for &(j, c) in h.row(i) {
                assert!(h.col(j).contains(&(i, c)));
            }
        }
        for j in 0..h.n() {
            for &(i, c) in h.col(j) {
                assert!(h.row(i).contains(&(j, c)));
            }
        }
    }

    #[test]
    fn qc_identity_block() {
        let base = vec![vec![CirculantDesc::Circulant { shift: 0, coeff: 1 }]];
        let h = qc_expand(&base, 3, gf(2)).unwrap();
        assert_eq!(h.m(), 3);
        assert_eq!(h.n(), 3);
        for i in 0..3 {
            assert_eq!(h.row(i), &[(i, 1)]);
        }
    }

    #[test]
    fn qc_shape_of_10x20_array() {
        use rand::{Rng, SeedableRng};
        let gf = gf(5);
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let base: Vec<Vec<CirculantDesc>> = (0..10)
            .map(|_| {
                (0..20)
                    .map(|_| CirculantDesc::Circulant {
                        shift: rng.gen_range(0..31),
                        coeff: rng.gen_range(1..32) as u8,
                    })
                    .collect()
            })
            .collect();
        let h = qc_expand(&base, 31, gf).unwrap();
        assert_eq!(h.m(), 310);
        assert_eq!(h.n(), 620);
        for i in 0..h.m() {
            assert_eq!(h.row(i).len(), 20);
        }
        for j in 0..h.n() {
            assert_eq!(h.col(j).len(), 10);
        }
    }

    #[test]
    fn qc_rejects_out_of_range() {
        let base = vec![vec![CirculantDesc::Circulant { shift: 3, coeff: 1 }]];
        assert_eq!(
            qc_expand(&base, 3, gf(2)).unwrap_err(),
            CodeError::ShiftOutOfRange { shift: 3, size: 3 }
        );
    }

    #[test]
    fn regular_construction() {
        let h = random_regular(12, 2, 4, gf(3), 7).unwrap();
        assert_eq!(h.m(), 6);
        for i in 0..6 {
            assert_eq!(h.row(i).len(), 4);
        }
        for j in 0..12 {
            assert_eq!(h.col(j).len(), 2);
        }
        // determinism
        let h2 = random_regular(12, 2, 4, gf(3), 7).unwrap();
        for i in 0..6 {
            assert_eq!(h.row(i), h2.row(i));
        }
        assert_eq!(
            random_regular(10, 3, 4, gf(3), 7).unwrap_err(),
            CodeError::NotDivisible { edges: 30, dc: 4 }
        );
    }

    #[test]
    fn rank_and_dimension() {
        // two identical rows: rank 1
        let rows = vec![vec![(0, 1), (1, 2)], vec![(0, 1), (1, 2)]];
        let h = ParityCheckMatrix::new(gf(2), 2, 2, rows).unwrap();
        assert_eq!(h.rank(), 1);
        assert_eq!(h.dimension(), 1);
    }

    #[test]
    fn rejects_malformed_rows() {
        assert_eq!(
            ParityCheckMatrix::new(gf(2), 1, 3, vec![vec![(1, 1), (1, 2)]]).unwrap_err(),
            CodeError::UnsortedRow { row: 0 }
        );
        assert_eq!(
            ParityCheckMatrix::new(gf(2), 1, 3, vec![vec![(0, 0)]]).unwrap_err(),
            CodeError::BadCoefficient { row: 0, col: 0, coeff: 0, q: 4 }
        );
    }
}
