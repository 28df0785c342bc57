//! Exhaustive reference implementations. Deliberately slow: every alignment
//! path or subsequence is enumerated explicitly, with no memoisation.

#![allow(dead_code)]

/// Scores of every complete global alignment path of `a` against `b`.
fn enumerate_alignments<T: PartialEq>(
    a: &[T],
    b: &[T],
    (m, mm, gap): (i32, i32, i32),
    acc: i32,
    best: &mut i32,
) {
    if a.is_empty() && b.is_empty() {
        *best = (*best).max(acc);
        return;
    }
    if !a.is_empty() && !b.is_empty() {
        let s = if a[0] == b[0] { m } else { mm };
        enumerate_alignments(&a[1..], &b[1..], (m, mm, gap), acc + s, best);
    }
    if !a.is_empty() {
        enumerate_alignments(&a[1..], b, (m, mm, gap), acc + gap, best);
    }
    if !b.is_empty() {
        enumerate_alignments(a, &b[1..], (m, mm, gap), acc + gap, best);
    }
}

/// Maximum over all global alignments, found by enumerating every one.
pub fn brute_global<T: PartialEq>(a: &[T], b: &[T], costs: (i32, i32, i32)) -> i32 {
    let mut best = i32::MIN;
    enumerate_alignments(a, b, costs, 0, &mut best);
    best
}

/// Maximum global score over every pair of substrings, floored at zero.
pub fn brute_local<T: PartialEq>(a: &[T], b: &[T], costs: (i32, i32, i32)) -> i32 {
    let mut best = 0;
    for i in 0..a.len() {
        for j in i + 1..=a.len() {
            for k in 0..b.len() {
                for l in k + 1..=b.len() {
                    best = best.max(brute_global(&a[i..j], &b[k..l], costs));
                }
            }
        }
    }
    best
}

fn is_subsequence<T: PartialEq>(needle: &[&T], hay: &[T]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|x| it.any(|y| y == *x))
}

/// Longest subsequence of the shorter input that is also a subsequence of
/// the longer one, by trying every subset of positions.
pub fn brute_lcs<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    assert!(short.len() < 24, "brute_lcs is exponential");
    let mut best = 0;
    for mask in 0u32..(1u32 << short.len()) {
        let len = mask.count_ones() as usize;
        if len <= best {
            continue;
        }
        let picked: Vec<&T> = (0..short.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| &short[i])
            .collect();
        if is_subsequence(&picked, long) {
            best = len;
        }
    }
    best
}

/// Every sequence over `alphabet` of length `0..=max_len`.
pub fn all_sequences<T: Clone>(alphabet: &[T], max_len: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &frontier {
            for sym in alphabet {
                let mut s: Vec<T> = seq.clone();
                s.push(sym.clone());
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Result of comparing the kernels against the enumerators over every pair
/// of sequences up to a length bound.
#[derive(Debug, Default)]
pub struct SweepTally {
    pub pairs: usize,
    pub mismatches: Vec<String>,
    pub kernel_runs: usize,
    pub inexact_runs: usize,
}

/// Every pair over `alphabet` with lengths `0..=max_len`, three kernels per
/// pair, with the cell-visit audit running throughout.
pub fn exhaustive_sweep(alphabet: &[char], max_len: usize, costs: (i32, i32, i32)) -> SweepTally {
    use tasml::alignment::{audit, global_alignment_score, lcs_length, local_alignment_score, ScoringScheme};

    let scheme = ScoringScheme::new(costs.0, costs.1, costs.2).expect("valid costs");
    let seqs = all_sequences(alphabet, max_len);
    let mut tally = SweepTally::default();
    audit::start();
    for a in &seqs {
        for b in &seqs {
            tally.pairs += 1;
            let show = |s: &[char]| s.iter().collect::<String>();
            let g = global_alignment_score(a, b, &scheme).value();
            let l = local_alignment_score(a, b, &scheme).value();
            let c = lcs_length(a, b);
            let (bg, bl, bc) = (brute_global(a, b, costs), brute_local(a, b, costs), brute_lcs(a, b));
            if (g, l, c) != (bg, bl, bc) {
                tally.mismatches.push(format!(
                    "{:?}/{:?}: kernels ({g},{l},{c}) oracle ({bg},{bl},{bc})",
                    show(a),
                    show(b)
                ));
            }
        }
    }
    let runs = audit::finish();
    tally.kernel_runs = runs.len();
    tally.inexact_runs = runs.iter().filter(|r| !r.is_exact()).count();
    tally
}
