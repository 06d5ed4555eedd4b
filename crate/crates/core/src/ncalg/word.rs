use std::cmp::Ordering;
use std::fmt;

/// A monomial in the noncommuting generators: a sequence of generator ids.
///
/// Words order first by degree and then lexicographically, so iterating a
/// sorted map of words walks the homogeneous components in turn.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(id: usize) -> Self {
        Word(vec![id as u8])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn render(&self, labels: &[String]) -> String {
        if self.0.is_empty() {
            return "I".to_string();
        }
        self.0.iter().map(|&g| labels[g as usize].as_str()).collect()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A nonempty word is Lyndon when it is strictly smaller than each of its
/// proper rotations.
pub fn is_lyndon(w: &[u8]) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    (1..n).all(|k| {
        let rotated = w[k..].iter().chain(w[..k].iter());
        w.iter().cmp(rotated) == Ordering::Less
    })
}

/// All Lyndon words over `alphabet` letters with length in `1..=max_len`,
/// in (degree, lexicographic) order. Uses Duval's generation algorithm.
pub fn lyndon_words(alphabet: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if alphabet == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    loop {
        out.push(Word(w.iter().map(|&c| c as u8).collect()));
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == alphabet - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out.sort();
    out
}

/// Standard factorization `w = u v` of a Lyndon word of length ≥ 2, where `v`
/// is the longest proper suffix that is itself Lyndon.
pub fn standard_factorization(w: &[u8]) -> (&[u8], &[u8]) {
    debug_assert!(w.len() >= 2 && is_lyndon(w));
    for k in 1..w.len() {
        if is_lyndon(&w[k..]) {
            return (&w[..k], &w[k..]);
        }
    }
    unreachable!("a Lyndon word of length ≥ 2 always has a Lyndon proper suffix")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn necklace_count(k: usize, n: usize) -> usize {
        // Witt's formula: (1/n) Σ_{d | n} μ(d) k^{n/d}
        fn mobius(mut n: usize) -> i64 {
            let mut result = 1;
            let mut p = 2;
            while p * p <= n {
                if n % p == 0 {
                    n /= p;
                    if n % p == 0 {
                        return 0;
                    }
                    result = -result;
                }
                p += 1;
            }
            if n > 1 {
                result = -result;
            }
            result
        }
        let total: i64 = (1..=n)
            .filter(|d| n % d == 0)
            .map(|d| mobius(d) * (k as i64).pow((n / d) as u32))
            .sum();
        (total / n as i64) as usize
    }

    #[test]
    fn lyndon_counts_match_witt_formula() {
        for k in 1..=3 {
            let words = lyndon_words(k, 7);
            for n in 1..=7 {
                let count = words.iter().filter(|w| w.degree() == n).count();
                assert_eq!(count, necklace_count(k, n), "k={k} n={n}");
            }
            assert!(words.iter().all(|w| is_lyndon(&w.0)));
        }
    }

    #[test]
    fn standard_factorizations() {
        assert_eq!(standard_factorization(&[0, 1]), (&[0u8][..], &[1u8][..]));
        assert_eq!(standard_factorization(&[0, 0, 1]), (&[0u8][..], &[0u8, 1][..]));
        assert_eq!(standard_factorization(&[0, 1, 1]), (&[0u8, 1][..], &[1u8][..]));
    }

    #[test]
    fn rotations() {
        assert!(is_lyndon(&[0, 0, 1]));
        assert!(!is_lyndon(&[0, 1, 0]));
        assert!(!is_lyndon(&[0, 0]));
    }
}
