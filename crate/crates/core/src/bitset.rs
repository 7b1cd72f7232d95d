use alloc::vec::Vec;

/// Fixed-size set of item indices, one bit per item.
#[derive(Clone, Debug)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits(alloc::vec![0; len.div_ceil(64)])
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn word(&self, w: usize) -> u64 {
        self.0[w]
    }
}

/// Indices `i < end` that lie, for every clause, in the union of that
/// clause's sets. An empty clause list accepts every `i < end`.
pub(crate) fn conjunction_of_unions(end: usize, clauses: &[&[&Bits]]) -> Vec<usize> {
    let mut out = Vec::new();
    for w in 0..end.div_ceil(64) {
        let mut acc = if (w + 1) * 64 <= end {
            u64::MAX
        } else {
            (1u64 << (end % 64)) - 1
        };
        for clause in clauses {
            acc &= clause.iter().fold(0, |u, b| u | b.word(w));
            if acc == 0 {
                break;
            }
        }
        while acc != 0 {
            out.push(w * 64 + acc.trailing_zeros() as usize);
            acc &= acc - 1;
        }
    }
    out
}
