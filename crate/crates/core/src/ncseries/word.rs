use std::fmt;

/// Largest supported word length (and hence truncation level).
pub const MAX_DEGREE: usize = 32;
/// Largest supported number of generators.
pub const MAX_VARS: usize = 16;

const BITS: u32 = 4;
const MASK: u128 = 0xf;

/// A word in the generators `x_0 .. x_{n-1}`, packed four bits per letter
/// with the first letter most significant.
///
/// The derived ordering compares length first and then the packed letters,
/// which is the degree-first lexicographic order with `x_0 < x_1 < ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    len: u8,
    bits: u128,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    pub fn letter(i: usize) -> Word {
        assert!(i < MAX_VARS, "generator index {i} out of range");
        Word {
            len: 1,
            bits: i as u128,
        }
    }

    pub fn from_letters(letters: &[usize]) -> Word {
        assert!(letters.len() <= MAX_DEGREE, "word too long");
        letters.iter().fold(Word::EMPTY, |w, &l| w.push(l))
    }

    pub fn push(self, i: usize) -> Word {
        assert!(i < MAX_VARS, "generator index {i} out of range");
        assert!((self.len as usize) < MAX_DEGREE, "word too long");
        Word {
            len: self.len + 1,
            bits: (self.bits << BITS) | i as u128,
        }
    }

    #[inline]
    pub fn len(self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// Letter at position `j` (0-based from the left).
    #[inline]
    pub fn at(self, j: usize) -> usize {
        debug_assert!(j < self.len());
        ((self.bits >> (BITS * (self.len as u32 - 1 - j as u32))) & MASK) as usize
    }

    #[inline]
    pub fn concat(self, other: Word) -> Word {
        debug_assert!(self.len() + other.len() <= MAX_DEGREE);
        if other.len == 0 {
            return self;
        }
        if self.len == 0 {
            return other;
        }
        Word {
            len: self.len + other.len,
            bits: (self.bits << (BITS * other.len as u32)) | other.bits,
        }
    }

    /// Letters `[from, to)`.
    #[inline]
    pub fn slice(self, from: usize, to: usize) -> Word {
        debug_assert!(from <= to && to <= self.len());
        let len = (to - from) as u32;
        if len == 0 {
            return Word::EMPTY;
        }
        let shifted = self.bits >> (BITS * (self.len as u32 - to as u32));
        let mask = if len as usize == MAX_DEGREE {
            u128::MAX
        } else {
            (1u128 << (BITS * len)) - 1
        };
        Word {
            len: len as u8,
            bits: shifted & mask,
        }
    }

    /// Cyclic rotation moving the first `k` letters to the end.
    pub fn rotate(self, k: usize) -> Word {
        let k = k % self.len().max(1);
        self.slice(k, self.len()).concat(self.slice(0, k))
    }

    pub fn letters(self) -> impl Iterator<Item = usize> {
        (0..self.len()).map(move |j| self.at(j))
    }

    /// Occurrences of each letter, indexed by generator.
    pub fn letter_counts(self, nvars: usize) -> Vec<usize> {
        let mut c = vec![0; nvars];
        for l in self.letters() {
            c[l] += 1;
        }
        c
    }

    pub fn max_letter(self) -> Option<usize> {
        self.letters().max()
    }

    /// Plain lexicographic comparison where a proper prefix sorts first.
    pub fn lex_cmp(self, other: Word) -> std::cmp::Ordering {
        let common = self.len().min(other.len());
        let a = self.slice(0, common).bits;
        let b = other.slice(0, common).bits;
        a.cmp(&b).then(self.len.cmp(&other.len))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for l in self.letters() {
            write!(f, "{}", crate::ncseries::default_var_name(l))?;
        }
        Ok(())
    }
}

/// Number of words of length at most `degree` in `nvars` letters.
pub fn count_words_up_to(nvars: usize, degree: usize) -> u128 {
    let n = nvars as u128;
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..=degree {
        total = total.saturating_add(level);
        level = level.saturating_mul(n);
    }
    total
}

/// All words of length exactly `degree`, in increasing order.
pub fn words_of_degree(nvars: usize, degree: usize) -> Vec<Word> {
    let mut out = vec![Word::EMPTY];
    for _ in 0..degree {
        out = out
            .into_iter()
            .flat_map(|w| (0..nvars).map(move |i| w.push(i)))
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_degree_then_lex() {
        let x = Word::letter(0);
        let y = Word::letter(1);
        let xy = x.concat(y);
        let yx = y.concat(x);
        let xx = x.concat(x);
        assert!(x < y);
        assert!(y < xx);
        assert!(xx < xy && xy < yx);
    }

    #[test]
    fn slicing_and_rotation() {
        let w = Word::from_letters(&[0, 1, 1, 2]);
        assert_eq!(w.slice(1, 3), Word::from_letters(&[1, 1]));
        assert_eq!(w.rotate(1), Word::from_letters(&[1, 1, 2, 0]));
        assert_eq!(w.rotate(4), w);
        assert_eq!(w.at(3), 2);
    }

    #[test]
    fn long_words() {
        let letters: Vec<usize> = (0..MAX_DEGREE).map(|i| i % 3).collect();
        let w = Word::from_letters(&letters);
        assert_eq!(w.len(), MAX_DEGREE);
        assert_eq!(w.letters().collect::<Vec<_>>(), letters);
        assert_eq!(w.slice(0, MAX_DEGREE), w);
    }

    #[test]
    fn counts() {
        assert_eq!(count_words_up_to(2, 3), 15);
        assert_eq!(words_of_degree(3, 2).len(), 9);
    }
}
