//! Dynamic-programming kernels over generic symbol sequences.
//!
//! Three kernels share one [`ScoringScheme`]: Needleman-Wunsch global
//! alignment, Smith-Waterman local alignment and the longest common
//! subsequence. Inputs are plain slices, so the same code serves character
//! sequences (whole normalized sentences, single words) and word sequences.
//!
//! Every kernel fills each cell of its `(m + 1) x (n + 1)` table exactly once.
//! The [`audit`] module can record the number of visited cells per call so
//! callers can check that bound.

use std::cmp::max;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("match score must be positive, got {0}")]
    MatchNotPositive(i32),
    #[error("mismatch score must not be positive, got {0}")]
    MismatchPositive(i32),
    #[error("gap penalty must be negative, got {0}")]
    GapNotNegative(i32),
    #[error("scale factor must be positive, got {0}")]
    BadScale(i32),
}

/// Match, mismatch and linear gap costs shared by the alignment kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScoringScheme {
    match_score: i32,
    mismatch_score: i32,
    gap_penalty: i32,
}

impl ScoringScheme {
    pub fn new(match_score: i32, mismatch_score: i32, gap_penalty: i32) -> Result<Self, SchemeError> {
        if match_score <= 0 {
            return Err(SchemeError::MatchNotPositive(match_score));
        }
        if mismatch_score > 0 {
            return Err(SchemeError::MismatchPositive(mismatch_score));
        }
        if gap_penalty >= 0 {
            return Err(SchemeError::GapNotNegative(gap_penalty));
        }
        Ok(Self {
            match_score,
            mismatch_score,
            gap_penalty,
        })
    }

    /// Symmetric unit costs: +1 match, -1 mismatch, -1 gap.
    pub const fn unit() -> Self {
        Self {
            match_score: 1,
            mismatch_score: -1,
            gap_penalty: -1,
        }
    }

    pub fn match_score(&self) -> i32 {
        self.match_score
    }

    pub fn mismatch_score(&self) -> i32 {
        self.mismatch_score
    }

    pub fn gap_penalty(&self) -> i32 {
        self.gap_penalty
    }

    /// Multiplies every cost by `factor`.
    pub fn scaled(&self, factor: i32) -> Result<Self, SchemeError> {
        if factor <= 0 {
            return Err(SchemeError::BadScale(factor));
        }
        Self::new(
            self.match_score * factor,
            self.mismatch_score * factor,
            self.gap_penalty * factor,
        )
    }

    #[inline]
    pub fn substitution<T: PartialEq>(&self, a: &T, b: &T) -> i32 {
        if a == b {
            self.match_score
        } else {
            self.mismatch_score
        }
    }
}

impl Default for ScoringScheme {
    fn default() -> Self {
        Self::unit()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AlignmentScore(pub i32);

impl AlignmentScore {
    pub fn value(self) -> i32 {
        self.0
    }
}

impl fmt::Display for AlignmentScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Needleman-Wunsch score with linear gaps.
///
/// Border cells are `F[0][j] = d * j` and `F[i][0] = d * i`; every inner cell
/// is the best of a diagonal step scored by the scheme or a gap step in
/// either direction. The score is the bottom-right cell.
pub fn global_alignment_score<T: PartialEq>(a: &[T], b: &[T], scheme: &ScoringScheme) -> AlignmentScore {
    let (m, n) = (a.len(), b.len());
    let gap = scheme.gap_penalty;
    let mut cells: u64 = 0;

    let mut prev: Vec<i32> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        prev.push(gap * j as i32);
        cells += 1;
    }
    let mut cur = vec![0; n + 1];
    for i in 1..=m {
        cur[0] = gap * i as i32;
        cells += 1;
        for j in 1..=n {
            let diag = prev[j - 1] + scheme.substitution(&a[i - 1], &b[j - 1]);
            let left = cur[j - 1] + gap;
            let up = prev[j] + gap;
            cur[j] = max(diag, max(left, up));
            cells += 1;
        }
        std::mem::swap(&mut prev, &mut cur);
    }

    audit::record(audit::Kernel::Global, m, n, cells);
    AlignmentScore(prev[n])
}

/// Smith-Waterman score: the best alignment between any two segments,
/// with every cell floored at zero.
pub fn local_alignment_score<T: PartialEq>(a: &[T], b: &[T], scheme: &ScoringScheme) -> AlignmentScore {
    let (m, n) = (a.len(), b.len());
    let gap = scheme.gap_penalty;
    let mut cells: u64 = 0;
    let mut best = 0;

    let mut prev = vec![0i32; n + 1];
    cells += (n + 1) as u64;
    let mut cur = vec![0i32; n + 1];
    for i in 1..=m {
        cur[0] = 0;
        cells += 1;
        for j in 1..=n {
            let diag = prev[j - 1] + scheme.substitution(&a[i - 1], &b[j - 1]);
            let left = cur[j - 1] + gap;
            let up = prev[j] + gap;
            let v = max(0, max(diag, max(left, up)));
            cur[j] = v;
            best = max(best, v);
            cells += 1;
        }
        std::mem::swap(&mut prev, &mut cur);
    }

    audit::record(audit::Kernel::Local, m, n, cells);
    AlignmentScore(best)
}

/// Length and one witness of a longest common subsequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lcs<T> {
    pub length: usize,
    pub witness: Vec<T>,
}

/// Longest common subsequence by the classic table fill.
///
/// The witness is recovered by walking back from the bottom-right cell,
/// taking the diagonal on equal symbols, otherwise moving up when that keeps
/// the length and left only when it must.
pub fn longest_common_subsequence<T: PartialEq + Clone>(a: &[T], b: &[T]) -> Lcs<T> {
    let (m, n) = (a.len(), b.len());
    let width = n + 1;
    let mut table = vec![0usize; (m + 1) * width];
    let mut cells: u64 = (n + 1) as u64;
    for i in 1..=m {
        cells += 1;
        for j in 1..=n {
            table[i * width + j] = if a[i - 1] == b[j - 1] {
                table[(i - 1) * width + j - 1] + 1
            } else {
                max(table[(i - 1) * width + j], table[i * width + j - 1])
            };
            cells += 1;
        }
    }
    audit::record(audit::Kernel::Lcs, m, n, cells);

    let length = table[m * width + n];
    let mut witness = Vec::with_capacity(length);
    let (mut i, mut j) = (m, n);
    while i > 0 && j > 0 {
        if a[i - 1] == b[j - 1] {
            witness.push(a[i - 1].clone());
            i -= 1;
            j -= 1;
        } else if table[(i - 1) * width + j] >= table[i * width + j - 1] {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    witness.reverse();
    Lcs { length, witness }
}

/// Length-only convenience wrapper around [`longest_common_subsequence`].
pub fn lcs_length<T: PartialEq + Clone>(a: &[T], b: &[T]) -> usize {
    longest_common_subsequence(a, b).length
}

/// Per-thread record of kernel invocations.
///
/// Recording is off until [`audit::start`] is called on the current thread;
/// [`audit::finish`] stops it and hands back everything recorded since.
pub mod audit {
    use std::cell::RefCell;

    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
    pub enum Kernel {
        Global,
        Local,
        Lcs,
    }

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub struct KernelRun {
        pub kernel: Kernel,
        pub rows: usize,
        pub cols: usize,
        pub cells_visited: u64,
    }

    impl KernelRun {
        pub fn expected_cells(&self) -> u64 {
            (self.rows as u64 + 1) * (self.cols as u64 + 1)
        }

        pub fn is_exact(&self) -> bool {
            self.cells_visited == self.expected_cells()
        }
    }

    thread_local! {
        static LOG: RefCell<Option<Vec<KernelRun>>> = const { RefCell::new(None) };
    }

    pub fn start() {
        LOG.with(|log| *log.borrow_mut() = Some(Vec::new()));
    }

    pub fn finish() -> Vec<KernelRun> {
        LOG.with(|log| log.borrow_mut().take().unwrap_or_default())
    }

    pub(crate) fn record(kernel: Kernel, rows: usize, cols: usize, cells_visited: u64) {
        LOG.with(|log| {
            if let Some(runs) = log.borrow_mut().as_mut() {
                runs.push(KernelRun {
                    kernel,
                    rows,
                    cols,
                    cells_visited,
                });
            }
        });
    }
}
