//! Graded vector spaces and coordinate embeddings between them.

use crate::error::Error;
use crate::Result;
use serde::Serialize;

/// C^(n+m) with a Z2 grading on the standard basis: +1 bosonic, -1
/// fermionic. The standard constructor sorts bosonic labels first;
/// auxiliary spaces used by projected trace maps may carry any pattern.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GradedSpace {
    n: usize,
    m: usize,
    #[serde(skip)]
    eps: Vec<i8>,
}

impl GradedSpace {
    /// Labels 0..n bosonic, n..n+m fermionic.
    pub fn standard(n: usize, m: usize) -> Self {
        let mut eps = vec![1i8; n];
        eps.extend(vec![-1i8; m]);
        GradedSpace { n, m, eps }
    }

    /// Arbitrary grading pattern.
    pub fn with_grading(eps: Vec<i8>) -> Result<Self> {
        if eps.is_empty() || eps.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::Config("grading entries must be +-1 and nonempty".into()));
        }
        let n = eps.iter().filter(|&&e| e == 1).count();
        let m = eps.len() - n;
        Ok(GradedSpace { n, m, eps })
    }

    pub fn dim(&self) -> usize {
        self.eps.len()
    }

    pub fn bosonic(&self) -> usize {
        self.n
    }

    pub fn fermionic(&self) -> usize {
        self.m
    }

    /// Grading of label i (0-based).
    pub fn eps(&self, i: usize) -> i8 {
        self.eps[i]
    }

    pub fn grading(&self) -> &[i8] {
        &self.eps
    }

    /// True when bosonic labels come first, as the twist matrix D requires.
    pub fn is_sorted_standard(&self) -> bool {
        self.eps == GradedSpace::standard(self.n, self.m).eps
    }

    pub fn check_label(&self, i: usize) -> Result<()> {
        if i < self.dim() {
            Ok(())
        } else {
            Err(Error::LabelOutOfRange { label: i, dim: self.dim() })
        }
    }
}

/// The data governing a projected trace map: an ambient space V'' with
/// two coordinate subspaces V (via iota) and V' (via iota'), together
/// with the partial inverses pi, pi'. Label maps are 0-based, strictly
/// increasing and grading-compatible, and their images cover V''.
#[derive(Clone, Debug)]
pub struct EmbeddingSpec {
    pub v: GradedSpace,
    pub v_prime: GradedSpace,
    pub v_ambient: GradedSpace,
    iota: Vec<usize>,
    iota_prime: Vec<usize>,
}

impl EmbeddingSpec {
    pub fn new(
        v: GradedSpace,
        v_prime: GradedSpace,
        v_ambient: GradedSpace,
        iota: Vec<usize>,
        iota_prime: Vec<usize>,
    ) -> Result<Self> {
        let strictly_increasing = |xs: &[usize]| xs.windows(2).all(|w| w[0] < w[1]);
        if iota.len() != v.dim() || iota_prime.len() != v_prime.dim() {
            return Err(Error::GradingMismatch);
        }
        if !strictly_increasing(&iota) || !strictly_increasing(&iota_prime) {
            return Err(Error::GradingMismatch);
        }
        let dim2 = v_ambient.dim();
        if iota.iter().chain(iota_prime.iter()).any(|&j| j >= dim2) {
            return Err(Error::GradingMismatch);
        }
        for (i, &j) in iota.iter().enumerate() {
            if v_ambient.eps(j) != v.eps(i) {
                return Err(Error::GradingMismatch);
            }
        }
        for (i, &j) in iota_prime.iter().enumerate() {
            if v_ambient.eps(j) != v_prime.eps(i) {
                return Err(Error::GradingMismatch);
            }
        }
        let mut covered = vec![false; dim2];
        for &j in iota.iter().chain(iota_prime.iter()) {
            covered[j] = true;
        }
        if covered.iter().any(|&c| !c) {
            return Err(Error::GradingMismatch);
        }
        Ok(EmbeddingSpec { v, v_prime, v_ambient, iota, iota_prime })
    }

    pub fn iota(&self) -> &[usize] {
        &self.iota
    }

    pub fn iota_prime(&self) -> &[usize] {
        &self.iota_prime
    }

    /// pi: ambient label -> V label, when the label lies in iota(V).
    pub fn pi(&self, ambient: usize) -> Option<usize> {
        self.iota.iter().position(|&j| j == ambient)
    }

    pub fn pi_prime(&self, ambient: usize) -> Option<usize> {
        self.iota_prime.iter().position(|&j| j == ambient)
    }
}
