//! Small permutation utilities: words, reduced decompositions into
//! adjacent transpositions, and minimal-length coset representatives.
//!
//! A permutation is stored in one-line notation `word[pos] = value`
//! over 0-based values. Braided operators built from a permutation read
//! it as "slot `pos` ends up carrying variable `word[pos]`".

use crate::error::Error;
use crate::Result;
use rand::Rng;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Perm {
    word: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { word: (0..n).collect() }
    }

    pub fn from_word(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n];
        for &v in &word {
            if v >= n || seen[v] {
                return Err(Error::BadPermutation { arity: n });
            }
            seen[v] = true;
        }
        Ok(Perm { word })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.word.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn apply(&self, pos: usize) -> usize {
        self.word[pos]
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn inverse(&self) -> Self {
        let mut w = vec![0; self.word.len()];
        for (i, &v) in self.word.iter().enumerate() {
            w[v] = i;
        }
        Perm { word: w }
    }

    /// Swap of adjacent positions i, i+1.
    pub fn adjacent(n: usize, i: usize) -> Self {
        let mut w: Vec<usize> = (0..n).collect();
        w.swap(i, i + 1);
        Perm { word: w }
    }

    /// The order-reversing longest element.
    pub fn longest(n: usize) -> Self {
        Perm { word: (0..n).rev().collect() }
    }

    /// Composition acting on positions: (a.then(b))(pos) = a(b(pos)).
    pub fn compose(&self, inner: &Perm) -> Self {
        let w = inner.word.iter().map(|&p| self.word[p]).collect();
        Perm { word: w }
    }

    pub fn inversions(&self) -> usize {
        let n = self.word.len();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.word[i] > self.word[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Canonical reduced word: positions of adjacent swaps turning the
    /// identity arrangement into this word (selection sort from the
    /// left, swap count = inversion count).
    pub fn canonical_reduced_word(&self) -> Vec<usize> {
        let mut current: Vec<usize> = (0..self.word.len()).collect();
        let mut steps = Vec::with_capacity(self.inversions());
        for target in 0..self.word.len() {
            let value = self.word[target];
            let mut pos = current.iter().position(|&v| v == value).unwrap();
            while pos > target {
                steps.push(pos - 1);
                current.swap(pos - 1, pos);
                pos -= 1;
            }
        }
        steps
    }

    /// A random reduced word for the same permutation: at each step pick
    /// one of the adjacent pairs still out of order relative to the target.
    pub fn random_reduced_word<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let n = self.word.len();
        let target_pos = self.inverse();
        let mut current: Vec<usize> = (0..n).collect();
        let mut steps = Vec::with_capacity(self.inversions());
        loop {
            let candidates: Vec<usize> = (0..n.saturating_sub(1))
                .filter(|&i| target_pos.word[current[i]] > target_pos.word[current[i + 1]])
                .collect();
            if candidates.is_empty() {
                break;
            }
            let i = candidates[rng.gen_range(0..candidates.len())];
            steps.push(i);
            current.swap(i, i + 1);
        }
        steps
    }

    /// Verifies a proposed word is reduced for this permutation.
    pub fn check_reduced(&self, word: &[usize]) -> Result<()> {
        let inv = self.inversions();
        if word.len() != inv {
            return Err(Error::NonReducedWord { word_len: word.len(), inversions: inv });
        }
        let mut current: Vec<usize> = (0..self.word.len()).collect();
        for &i in word {
            if i + 1 >= self.word.len() {
                return Err(Error::BadPermutation { arity: self.word.len() });
            }
            current.swap(i, i + 1);
        }
        if current == self.word {
            Ok(())
        } else {
            Err(Error::NonReducedWord { word_len: word.len(), inversions: inv })
        }
    }

    /// Rotation omega^j: the word (n-j .. n-1, 0 .. n-j-1).
    pub fn rotation(n: usize, j: usize) -> Self {
        let j = j % n.max(1);
        let mut w = Vec::with_capacity(n);
        for v in n - j..n {
            w.push(v);
        }
        for v in 0..n - j {
            w.push(v);
        }
        Perm { word: w }
    }
}

/// Minimal-length representatives of S_{a+b} / (S_a x S_b): words whose
/// first `a` entries increase and whose last `b` entries increase,
/// enumerated in colexicographic order of the set placed in the tail
/// block.
pub fn coset_reps(a: usize, b: usize) -> Vec<Perm> {
    let n = a + b;
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    // all b-subsets of 0..n for the tail block
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..=n - left {
            cur.push(v);
            rec(v + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(0, n, b, &mut Vec::new(), &mut subsets);
    subsets.sort_by(|x, y| x.iter().rev().cmp(y.iter().rev()));
    subsets
        .into_iter()
        .map(|tail| {
            let mut head: Vec<usize> = (0..n).filter(|v| !tail.contains(v)).collect();
            head.extend(tail);
            Perm { word: head }
        })
        .collect()
}
