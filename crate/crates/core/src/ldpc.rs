//! Regular LDPC baseline: random (dv, dc) Gallager-ensemble construction,
//! systematic encoding through a row-reduced parity-check matrix, and a
//! flooding sum-product decoder.
//!
//! Comparison results produced with this module are against this particular
//! baseline; no attempt is made to optimize the degree distribution.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::split_seed;
use crate::{Error, Result};

/// Default iteration cap for [`bp_decode`].
pub const DEFAULT_MAX_ITERS: usize = 50;

const MAX_ATTEMPTS: u64 = 16;
const SWAP_ROUNDS: usize = 200;
const SWAP_TRIES: usize = 64;

/// Sparse parity-check matrix stored as row and column adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    cols: usize,
    row_adj: Vec<Vec<usize>>,
    col_adj: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    pub fn from_rows(cols: usize, mut row_adj: Vec<Vec<usize>>) -> Result<Self> {
        let mut col_adj = vec![Vec::new(); cols];
        for (r, row) in row_adj.iter_mut().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!("duplicate edge in row {r}")));
            }
            for &c in row.iter() {
                if c >= cols {
                    return Err(Error::IndexOutOfRange { index: c, len: cols });
                }
                col_adj[c].push(r);
            }
        }
        Ok(Self { cols, row_adj, col_adj })
    }

    pub fn rows(&self) -> usize {
        self.row_adj.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_adj[r]
    }

    pub fn col(&self, c: usize) -> &[usize] {
        &self.col_adj[c]
    }

    pub fn edges(&self) -> usize {
        self.row_adj.iter().map(Vec::len).sum()
    }

    /// `H·cᵀ = 0` over GF(2).
    pub fn is_codeword(&self, c: &[u8]) -> bool {
        c.len() == self.cols && self.row_adj.iter().all(|row| row.iter().fold(0u8, |acc, &j| acc ^ c[j]) == 0)
    }

    /// Number of length-4 cycles in the Tanner graph.
    pub fn four_cycles(&self) -> usize {
        let mut shared = vec![0usize; self.rows()];
        let mut total = 0;
        for (r, row) in self.row_adj.iter().enumerate() {
            shared.iter_mut().for_each(|s| *s = 0);
            for &c in row {
                for &r2 in &self.col_adj[c] {
                    if r2 > r {
                        shared[r2] += 1;
                    }
                }
            }
            total += shared.iter().map(|&s| s * s.saturating_sub(1) / 2).sum::<usize>();
        }
        total
    }

    pub fn is_regular(&self, dv: usize, dc: usize) -> bool {
        self.col_adj.iter().all(|c| c.len() == dv) && self.row_adj.iter().all(|r| r.len() == dc)
    }

    /// Serializes to the alist text format (1-based indices, zero padded).
    pub fn to_alist(&self) -> String {
        let max_col = self.col_adj.iter().map(Vec::len).max().unwrap_or(0);
        let max_row = self.row_adj.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = String::new();
        let join = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "{} {}", self.cols, self.rows());
        let _ = writeln!(out, "{max_col} {max_row}");
        let _ = writeln!(out, "{}", join(&mut self.col_adj.iter().map(Vec::len)));
        let _ = writeln!(out, "{}", join(&mut self.row_adj.iter().map(Vec::len)));
        for (lists, width) in [(&self.col_adj, max_col), (&self.row_adj, max_row)] {
            for list in lists {
                let mut line: Vec<usize> = list.iter().map(|x| x + 1).collect();
                line.resize(width, 0);
                let _ = writeln!(out, "{}", join(&mut line.into_iter()));
            }
        }
        out
    }

    pub fn from_alist(text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Format {
            format: "alist",
            reason: reason.to_string(),
        };
        let mut nums = text.split_whitespace().map(|t| t.parse::<usize>().map_err(|_| bad("non-integer token")));
        let mut next = || nums.next().unwrap_or_else(|| Err(bad("unexpected end of input")));
        let (cols, rows) = (next()?, next()?);
        let (max_col, max_row) = (next()?, next()?);
        let col_w = (0..cols).map(|_| next()).collect::<Result<Vec<_>>>()?;
        let row_w = (0..rows).map(|_| next()).collect::<Result<Vec<_>>>()?;
        // Column lists are redundant with the row lists; read and cross-check them.
        let mut col_lists = Vec::with_capacity(cols);
        for &w in &col_w {
            let entries = (0..max_col).map(|_| next()).collect::<Result<Vec<_>>>()?;
            col_lists.push(entries.into_iter().filter(|&x| x != 0).map(|x| x - 1).collect::<Vec<_>>());
            if col_lists.last().map(Vec::len) != Some(w) {
                return Err(bad("column list length disagrees with its weight"));
            }
        }
        let mut row_adj = Vec::with_capacity(rows);
        for &w in &row_w {
            let entries = (0..max_row).map(|_| next()).collect::<Result<Vec<_>>>()?;
            let row: Vec<usize> = entries.into_iter().filter(|&x| x != 0).map(|x| x - 1).collect();
            if row.len() != w {
                return Err(bad("row list length disagrees with its weight"));
            }
            row_adj.push(row);
        }
        let h = Self::from_rows(cols, row_adj)?;
        for (c, mut list) in col_lists.into_iter().enumerate() {
            list.sort_unstable();
            if list != h.col_adj[c] {
                return Err(bad("column and row lists disagree"));
            }
        }
        Ok(h)
    }
}

/// An LDPC code ready for systematic encoding.
#[derive(Debug, Clone)]
pub struct LdpcCode {
    h: ParityCheckMatrix,
    info_cols: Vec<usize>,
    parity_cols: Vec<usize>,
    /// Row `i`: bitmask over information indices whose XOR gives `parity_cols[i]`.
    parity_masks: Vec<Vec<u64>>,
    removed_rows: usize,
}

impl LdpcCode {
    /// Builds the encoder. Linearly dependent rows of `h` are dropped.
    pub fn from_parity_check(h: ParityCheckMatrix) -> Result<Self> {
        let n = h.cols();
        let words = n.div_ceil(64);
        let dense = |row: &[usize]| {
            let mut v = vec![0u64; words];
            for &c in row {
                v[c / 64] ^= 1 << (c % 64);
            }
            v
        };

        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        let mut kept = Vec::new();
        for r in 0..h.rows() {
            let mut v = dense(h.row(r));
            for (p, b) in &basis {
                if bit(&v, *p) {
                    xor_into(&mut v, b);
                }
            }
            if let Some(p) = first_set(&v) {
                basis.push((p, v));
                kept.push(h.row(r).to_vec());
            }
        }
        for i in (0..basis.len()).rev() {
            let (p, row) = basis[i].clone();
            for entry in basis.iter_mut().take(i) {
                if bit(&entry.1, p) {
                    xor_into(&mut entry.1, &row);
                }
            }
        }

        let removed_rows = h.rows() - kept.len();
        let h = if removed_rows > 0 { ParityCheckMatrix::from_rows(n, kept)? } else { h };
        let mut is_pivot = vec![false; n];
        for (p, _) in &basis {
            is_pivot[*p] = true;
        }
        let info_cols: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let k_words = info_cols.len().div_ceil(64);
        let parity_masks = basis
            .iter()
            .map(|(_, row)| {
                let mut mask = vec![0u64; k_words];
                for (t, &c) in info_cols.iter().enumerate() {
                    if bit(row, c) {
                        mask[t / 64] |= 1 << (t % 64);
                    }
                }
                mask
            })
            .collect();
        Ok(Self {
            h,
            parity_cols: basis.iter().map(|(p, _)| *p).collect(),
            info_cols,
            parity_masks,
            removed_rows,
        })
    }

    pub fn parity_check(&self) -> &ParityCheckMatrix {
        &self.h
    }

    pub fn block_len(&self) -> usize {
        self.h.cols()
    }

    /// Information length `K = N − rank(H)`.
    pub fn info_len(&self) -> usize {
        self.info_cols.len()
    }

    pub fn rate(&self) -> f64 {
        self.info_len() as f64 / self.block_len() as f64
    }

    /// Codeword positions that carry the information bits verbatim.
    pub fn info_cols(&self) -> &[usize] {
        &self.info_cols
    }

    /// Rows dropped during rank repair.
    pub fn removed_rows(&self) -> usize {
        self.removed_rows
    }

    pub fn extract_info(&self, codeword: &[u8]) -> Vec<u8> {
        self.info_cols.iter().map(|&c| codeword[c]).collect()
    }

    /// Codeword of the `t`-th unit information vector.
    pub fn generator_row(&self, t: usize) -> Result<Vec<u8>> {
        let mut info = vec![0u8; self.info_len()];
        *info.get_mut(t).ok_or(Error::IndexOutOfRange { index: t, len: self.info_len() })? = 1;
        ldpc_encode(&info, self)
    }
}

fn bit(v: &[u64], i: usize) -> bool {
    (v[i / 64] >> (i % 64)) & 1 == 1
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn first_set(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Socket-permutation construction of a random `(dv, dc)`-regular code.
///
/// Duplicate edges are always removed. Length-4 cycles are removed by random
/// edge swaps whenever the parameters admit a 4-cycle-free graph at all
/// (`n·C(dv,2) ≤ C(m,2)`); below that size the 4-cycle count is merely
/// whatever the duplicate-free graph has.
pub fn generate_regular_ldpc(n: usize, dv: usize, dc: usize, seed: u64) -> Result<LdpcCode> {
    let fail = |reason: String| Error::LdpcConstruction { seed, reason };
    if n == 0 || !n.is_multiple_of(2) {
        return Err(fail(format!("block length {n} must be positive and even")));
    }
    if dv < 2 || dc <= dv || !(n * dv).is_multiple_of(dc) {
        return Err(fail(format!("(dv, dc) = ({dv}, {dc}) incompatible with n = {n}")));
    }
    let m = n * dv / dc;
    if dc > n || dv > m {
        return Err(fail("degrees exceed the matrix dimensions".into()));
    }
    let girth6_feasible = n * dv * (dv - 1) / 2 <= m * (m - 1) / 2;

    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, attempt));
        let mut graph = SocketGraph::random(n, m, dv, dc, &mut rng);
        if graph.repair(girth6_feasible, &mut rng) {
            let h = ParityCheckMatrix::from_rows(n, graph.rows())?;
            return LdpcCode::from_parity_check(h);
        }
    }
    Err(fail(format!("could not remove short cycles after {MAX_ATTEMPTS} attempts")))
}

struct SocketGraph {
    dc: usize,
    /// Column of each edge; edge `e` belongs to row `e / dc`.
    edge_col: Vec<usize>,
    col_rows: Vec<Vec<usize>>,
}

impl SocketGraph {
    fn random(n: usize, m: usize, dv: usize, dc: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut edge_col: Vec<usize> = (0..n).flat_map(|c| std::iter::repeat_n(c, dv)).collect();
        edge_col.shuffle(rng);
        let mut col_rows = vec![Vec::with_capacity(dv); n];
        for (e, &c) in edge_col.iter().enumerate() {
            col_rows[c].push(e / dc);
        }
        debug_assert_eq!(edge_col.len(), m * dc);
        Self { dc, edge_col, col_rows }
    }

    fn row_cols(&self, r: usize) -> &[usize] {
        &self.edge_col[r * self.dc..(r + 1) * self.dc]
    }

    fn edge_ok(&self, e: usize, check_cycles: bool) -> bool {
        let r = e / self.dc;
        let c = self.edge_col[e];
        let row = self.row_cols(r);
        if row.iter().filter(|&&x| x == c).count() > 1 {
            return false;
        }
        if !check_cycles {
            return true;
        }
        for &r2 in &self.col_rows[c] {
            if r2 == r {
                continue;
            }
            if row.iter().any(|&c2| c2 != c && self.col_rows[c2].contains(&r2)) {
                return false;
            }
        }
        true
    }

    fn swap(&mut self, e1: usize, e2: usize) {
        let (c1, c2) = (self.edge_col[e1], self.edge_col[e2]);
        let (r1, r2) = (e1 / self.dc, e2 / self.dc);
        replace_one(&mut self.col_rows[c1], r1, r2);
        replace_one(&mut self.col_rows[c2], r2, r1);
        self.edge_col.swap(e1, e2);
    }

    fn repair(&mut self, check_cycles: bool, rng: &mut ChaCha8Rng) -> bool {
        let edges = self.edge_col.len();
        for _ in 0..SWAP_ROUNDS {
            let bad: Vec<usize> = (0..edges).filter(|&e| !self.edge_ok(e, check_cycles)).collect();
            if bad.is_empty() {
                return true;
            }
            for e1 in bad {
                if self.edge_ok(e1, check_cycles) {
                    continue;
                }
                for _ in 0..SWAP_TRIES {
                    let e2 = rng.random_range(0..edges);
                    if e2 / self.dc == e1 / self.dc || self.edge_col[e1] == self.edge_col[e2] {
                        continue;
                    }
                    self.swap(e1, e2);
                    if self.edge_ok(e1, check_cycles) && self.edge_ok(e2, check_cycles) {
                        break;
                    }
                    self.swap(e1, e2);
                }
            }
        }
        false
    }

    fn rows(&self) -> Vec<Vec<usize>> {
        self.edge_col.chunks(self.dc).map(<[usize]>::to_vec).collect()
    }
}

fn replace_one(list: &mut [usize], from: usize, to: usize) {
    if let Some(slot) = list.iter_mut().find(|x| **x == from) {
        *slot = to;
    }
}

/// Systematic encoding; `info` lands on [`LdpcCode::info_cols`].
pub fn ldpc_encode(info: &[u8], code: &LdpcCode) -> Result<Vec<u8>> {
    if info.len() != code.info_len() {
        return Err(Error::LengthMismatch {
            expected: code.info_len(),
            actual: info.len(),
        });
    }
    crate::polar::check_bits(info)?;
    let mut packed = vec![0u64; info.len().div_ceil(64)];
    for (t, &b) in info.iter().enumerate() {
        packed[t / 64] |= (b as u64) << (t % 64);
    }
    let mut c = vec![0u8; code.block_len()];
    for (&col, &b) in code.info_cols.iter().zip(info) {
        c[col] = b;
    }
    for (&col, mask) in code.parity_cols.iter().zip(&code.parity_masks) {
        let ones: u32 = mask.iter().zip(&packed).map(|(m, p)| (m & p).count_ones()).sum();
        c[col] = (ones & 1) as u8;
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpOutput {
    pub codeword: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
}

/// Flooding sum-product decoder with reusable message buffers.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    row_start: Vec<usize>,
    edge_col: Vec<usize>,
    col_edges: Vec<Vec<usize>>,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    tanh_buf: Vec<f64>,
    posterior: Vec<f64>,
}

impl BpDecoder {
    pub fn new(h: &ParityCheckMatrix) -> Self {
        let mut row_start = Vec::with_capacity(h.rows() + 1);
        let mut edge_col = Vec::with_capacity(h.edges());
        let mut col_edges = vec![Vec::new(); h.cols()];
        row_start.push(0);
        for r in 0..h.rows() {
            for &c in h.row(r) {
                col_edges[c].push(edge_col.len());
                edge_col.push(c);
            }
            row_start.push(edge_col.len());
        }
        let edges = edge_col.len();
        Self {
            row_start,
            edge_col,
            col_edges,
            v2c: vec![0.0; edges],
            c2v: vec![0.0; edges],
            tanh_buf: vec![0.0; edges],
            posterior: vec![0.0; h.cols()],
        }
    }

    pub fn decode(&mut self, llrs: &[f64], max_iters: usize) -> Result<BpOutput> {
        let n = self.col_edges.len();
        if llrs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: llrs.len(),
            });
        }
        for (e, &c) in self.edge_col.iter().enumerate() {
            self.v2c[e] = llrs[c];
        }
        let mut hard = vec![0u8; n];
        for iter in 1..=max_iters {
            self.check_update();
            for c in 0..n {
                let total = llrs[c] + self.col_edges[c].iter().map(|&e| self.c2v[e]).sum::<f64>();
                self.posterior[c] = total;
                hard[c] = u8::from(total < 0.0);
                for &e in &self.col_edges[c] {
                    self.v2c[e] = total - self.c2v[e];
                }
            }
            if self.settled(&hard) {
                return Ok(BpOutput {
                    codeword: hard,
                    converged: true,
                    iterations: iter,
                });
            }
        }
        Ok(BpOutput {
            codeword: hard,
            converged: false,
            iterations: max_iters,
        })
    }

    fn check_update(&mut self) {
        const LIMIT: f64 = 1.0 - 1e-15;
        for r in 0..self.row_start.len() - 1 {
            let (lo, hi) = (self.row_start[r], self.row_start[r + 1]);
            for e in lo..hi {
                self.tanh_buf[e] = (0.5 * self.v2c[e]).tanh();
            }
            // leave-one-out products via a forward and a backward sweep
            let mut prefix = 1.0;
            for e in lo..hi {
                self.c2v[e] = prefix;
                prefix *= self.tanh_buf[e];
            }
            let mut suffix = 1.0;
            for e in (lo..hi).rev() {
                let p = (self.c2v[e] * suffix).clamp(-LIMIT, LIMIT);
                self.c2v[e] = 2.0 * p.atanh();
                suffix *= self.tanh_buf[e];
            }
        }
    }

    /// Zero syndrome and no bit left undecided (posterior exactly zero).
    fn settled(&self, hard: &[u8]) -> bool {
        if self.posterior.contains(&0.0) {
            return false;
        }
        (0..self.row_start.len() - 1).all(|r| {
            self.edge_col[self.row_start[r]..self.row_start[r + 1]]
                .iter()
                .fold(0u8, |acc, &c| acc ^ hard[c])
                == 0
        })
    }
}

/// One-shot sum-product decode.
pub fn bp_decode(llrs: &[f64], code: &LdpcCode, max_iters: usize) -> Result<BpOutput> {
    BpDecoder::new(code.parity_check()).decode(llrs, max_iters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::SimRng;

    #[test]
    fn toy_code_structure() {
        let code = generate_regular_ldpc(16, 3, 6, 7).unwrap();
        let h = code.parity_check();
        assert_eq!(h.cols(), 16);
        assert_eq!(h.rows() + code.removed_rows(), 8);
        assert!(ParityCheckMatrix::from_rows(16, h.row_adj.clone()).is_ok());
        if code.removed_rows() == 0 {
            assert!(h.is_regular(3, 6));
        }
        let again = generate_regular_ldpc(16, 3, 6, 7).unwrap();
        assert_eq!(again.parity_check(), h);
    }

    #[test]
    fn girth_six_when_feasible() {
        for (n, seed) in [(96, 1), (256, 2), (2048, 3)] {
            let code = generate_regular_ldpc(n, 3, 6, seed).unwrap();
            let h = code.parity_check();
            assert_eq!(h.four_cycles(), 0, "n = {n}");
            assert_eq!(h.rows() + code.removed_rows(), n / 2);
            assert!(code.rate() >= 0.5);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(generate_regular_ldpc(15, 3, 6, 1), Err(Error::LdpcConstruction { seed: 1, .. })));
        assert!(generate_regular_ldpc(16, 3, 5, 1).is_err());
        assert!(generate_regular_ldpc(0, 3, 6, 1).is_err());
    }

    #[test]
    fn encoding_lands_in_null_space() {
        let code = generate_regular_ldpc(256, 3, 6, 5).unwrap();
        let mut rng = SimRng::new(3);
        assert_eq!(ldpc_encode(&vec![0; code.info_len()], &code).unwrap(), vec![0; 256]);
        for _ in 0..50 {
            let mut info = vec![0u8; code.info_len()];
            rng.fill_bits(&mut info);
            let c = ldpc_encode(&info, &code).unwrap();
            assert!(code.parity_check().is_codeword(&c));
            assert_eq!(code.extract_info(&c), info);
        }
        assert!(ldpc_encode(&[1, 0], &code).is_err());
    }

    #[test]
    fn generator_rows_are_unit_encodings() {
        let code = generate_regular_ldpc(16, 3, 6, 7).unwrap();
        let mut info = vec![0u8; code.info_len()];
        info[2] = 1;
        let g2 = code.generator_row(2).unwrap();
        assert_eq!(ldpc_encode(&info, &code).unwrap(), g2);
        assert!(code.parity_check().is_codeword(&g2));
        assert!(code.generator_row(code.info_len()).is_err());
    }

    #[test]
    fn rank_repair_drops_dependent_rows() {
        // third row is the sum of the first two
        let h = ParityCheckMatrix::from_rows(6, vec![vec![0, 1, 2], vec![2, 3, 4], vec![0, 1, 3, 4], vec![1, 5]]).unwrap();
        let code = LdpcCode::from_parity_check(h).unwrap();
        assert_eq!(code.removed_rows(), 1);
        assert_eq!(code.info_len(), 3);
        for t in 0..3 {
            assert!(code.parity_check().is_codeword(&code.generator_row(t).unwrap()));
        }
    }

    #[test]
    fn alist_round_trip() {
        let code = generate_regular_ldpc(48, 3, 6, 9).unwrap();
        let text = code.parity_check().to_alist();
        assert!(text.starts_with("48 24\n3 6\n"));
        assert_eq!(&ParityCheckMatrix::from_alist(&text).unwrap(), code.parity_check());
        assert!(ParityCheckMatrix::from_alist("4 2\n1 2\n1 1").is_err());
        assert!(ParityCheckMatrix::from_alist("2 1\n1 2\n1 1\n2\n1\n1\n1 3\n").is_err());
    }

    #[test]
    fn four_cycle_counter() {
        let h = ParityCheckMatrix::from_rows(4, vec![vec![0, 1, 2], vec![0, 1, 3], vec![1, 2, 3]]).unwrap();
        // row pairs share {0,1}, {1,2}, {1,3}
        assert_eq!(h.four_cycles(), 3);
    }

    #[test]
    fn noiseless_converges_in_one_iteration() {
        let code = generate_regular_ldpc(256, 3, 6, 4).unwrap();
        let mut rng = SimRng::new(5);
        let mut info = vec![0u8; code.info_len()];
        rng.fill_bits(&mut info);
        let c = ldpc_encode(&info, &code).unwrap();
        let llrs: Vec<f64> = c.iter().map(|&b| if b == 0 { 100.0 } else { -100.0 }).collect();
        let out = bp_decode(&llrs, &code, DEFAULT_MAX_ITERS).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.codeword, c);
    }

    #[test]
    fn zero_llrs_never_converge() {
        let code = generate_regular_ldpc(64, 3, 6, 4).unwrap();
        let out = bp_decode(&[0.0; 64], &code, DEFAULT_MAX_ITERS).unwrap();
        assert!(!out.converged);
        assert_eq!(out.iterations, DEFAULT_MAX_ITERS);
    }

    #[test]
    fn decoder_is_deterministic() {
        let code = generate_regular_ldpc(64, 3, 6, 4).unwrap();
        let mut rng = SimRng::new(8);
        let llrs: Vec<f64> = (0..64).map(|_| 1.0 + 1.5 * rng.standard_normal()).collect();
        assert_eq!(bp_decode(&llrs, &code, 50).unwrap(), bp_decode(&llrs, &code, 50).unwrap());
        assert!(bp_decode(&llrs[..10], &code, 50).is_err());
    }
}
