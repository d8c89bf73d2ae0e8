use std::fmt;

use crate::{Error, Result};

/// Element of the symmetric group `S_N`, stored as its image list (0-based).
///
/// Acting on functions, `σ·f (x_1..x_N) = f(x_{σ(1)}, ..., x_{σ(N)})`; this
/// is a left action: `σ·(τ·f) = (σ∘τ)·f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
        }
        Ok(Permutation(images))
    }

    /// The transposition exchanging `i` and `j`; the identity when `i == j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(i, j);
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`, i.e. `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "permutation degree");
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// `+1` for even, `-1` for odd permutations.
    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.len()];
        let mut sign = 1;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// All of `S_n` in lexicographic order of image lists; position in this
    /// list is [`Permutation::rank`].
    pub fn all(n: usize) -> Vec<Permutation> {
        (0..factorial(n)).map(|r| Self::unrank(n, r)).collect()
    }

    /// Lexicographic rank in `S_n` (Lehmer code).
    pub fn rank(&self) -> usize {
        let n = self.len();
        let mut r = 0;
        for i in 0..n {
            let smaller = self.0[i + 1..].iter().filter(|&&v| v < self.0[i]).count();
            r += smaller * factorial(n - 1 - i);
        }
        r
    }

    pub fn unrank(n: usize, mut r: usize) -> Permutation {
        let mut pool: Vec<usize> = (0..n).collect();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let f = factorial(n - 1 - i);
            out.push(pool.remove(r / f));
            r %= f;
        }
        Permutation(out)
    }
}

pub(crate) fn factorial(n: usize) -> usize {
    (1..=n).product()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_roundtrip_and_order() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        assert!(all[0].is_identity());
        for (r, p) in all.iter().enumerate() {
            assert_eq!(p.rank(), r);
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn group_axioms_s3() {
        let all = Permutation::all(3);
        for a in &all {
            assert!(a.compose(&a.inverse()).is_identity());
            for b in &all {
                assert_eq!(a.compose(b).sign(), a.sign() * b.sign());
                for c in &all {
                    assert_eq!(a.compose(b).compose(c), a.compose(&b.compose(c)));
                }
            }
        }
    }

    #[test]
    fn transposition_relations() {
        let n = 4;
        let s = |i, j| Permutation::transposition(n, i, j);
        // symmetry and involution
        assert_eq!(s(0, 2), s(2, 0));
        assert!(s(0, 2).compose(&s(0, 2)).is_identity());
        // disjoint transpositions commute
        assert_eq!(s(0, 1).compose(&s(2, 3)), s(2, 3).compose(&s(0, 1)));
        // fusion: P_ik P_kl = P_il P_ik = P_kl P_il
        let (i, k, l) = (0, 1, 3);
        assert_eq!(s(i, k).compose(&s(k, l)), s(i, l).compose(&s(i, k)));
        assert_eq!(s(i, l).compose(&s(i, k)), s(k, l).compose(&s(i, l)));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
        assert_eq!(Permutation::transposition(3, 0, 2).sign(), -1);
    }
}
