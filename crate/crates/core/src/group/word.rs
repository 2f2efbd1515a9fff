//! Freely reduced words stored as runs `g^e`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Default letter budget for words produced by iterated substitution.
pub const DEFAULT_LETTER_CAP: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("generator {gen} outside alphabet of rank {rank}")]
    AlphabetMismatch { gen: u32, rank: usize },
    #[error("word exceeds the cap of {cap} letters")]
    TooLong { cap: u64 },
    #[error("automorphism check failed: {0}")]
    NotInverse(String),
    #[error("cannot parse word token {0:?}")]
    Parse(String),
}

/// A freely reduced word. Adjacent runs have distinct generators and no run
/// has exponent zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FreeWord {
    runs: Vec<(u32, i64)>,
}

/// Stack-based reducer that keeps a running letter count.
#[derive(Debug, Default)]
pub struct Reducer {
    runs: Vec<(u32, i64)>,
    len: u64,
    cap: u64,
}

impl Reducer {
    pub fn new(cap: u64) -> Self {
        Reducer {
            runs: Vec::new(),
            len: 0,
            cap,
        }
    }

    pub fn push(&mut self, gen: u32, exp: i64) -> Result<(), WordError> {
        if exp == 0 {
            return Ok(());
        }
        match self.runs.last_mut() {
            Some((g, e)) if *g == gen => {
                self.len -= e.unsigned_abs();
                *e += exp;
                if *e == 0 {
                    self.runs.pop();
                } else {
                    self.len += e.unsigned_abs();
                }
            }
            _ => {
                self.runs.push((gen, exp));
                self.len += exp.unsigned_abs();
            }
        }
        if self.len > self.cap {
            return Err(WordError::TooLong { cap: self.cap });
        }
        Ok(())
    }

    pub fn push_word(&mut self, w: &FreeWord) -> Result<(), WordError> {
        for &(g, e) in &w.runs {
            self.push(g, e)?;
        }
        Ok(())
    }

    pub fn push_inverse(&mut self, w: &FreeWord) -> Result<(), WordError> {
        for &(g, e) in w.runs.iter().rev() {
            self.push(g, -e)?;
        }
        Ok(())
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn finish(self) -> FreeWord {
        FreeWord { runs: self.runs }
    }
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    pub fn gen(g: u32) -> Self {
        FreeWord { runs: vec![(g, 1)] }
    }

    pub fn gen_pow(g: u32, e: i64) -> Self {
        Self::from_runs([(g, e)])
    }

    /// Reduces an arbitrary run sequence.
    pub fn from_runs(runs: impl IntoIterator<Item = (u32, i64)>) -> Self {
        let mut r = Reducer::new(u64::MAX);
        for (g, e) in runs {
            r.push(g, e).expect("uncapped");
        }
        r.finish()
    }

    /// Reduces a sequence of `(generator, ±1)` letters.
    pub fn from_letters(letters: impl IntoIterator<Item = (u32, i8)>) -> Self {
        Self::from_runs(letters.into_iter().map(|(g, s)| (g, s as i64)))
    }

    pub fn runs(&self) -> &[(u32, i64)] {
        &self.runs
    }

    /// Letters as `(generator, ±1)`.
    pub fn letters(&self) -> impl Iterator<Item = (u32, i8)> + '_ {
        self.runs
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n((g, e.signum() as i8), e.unsigned_abs() as usize))
    }

    pub fn len(&self) -> u64 {
        self.runs.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.runs.iter().all(|&(_, e)| e > 0)
    }

    pub fn max_gen(&self) -> Option<u32> {
        self.runs.iter().map(|&(g, _)| g).max()
    }

    pub fn check_rank(&self, rank: usize) -> Result<(), WordError> {
        match self.max_gen() {
            Some(g) if g as usize >= rank => Err(WordError::AlphabetMismatch { gen: g, rank }),
            _ => Ok(()),
        }
    }

    pub fn inverse(&self) -> Self {
        FreeWord {
            runs: self.runs.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn mul(&self, other: &FreeWord) -> Self {
        let mut r = Reducer::new(u64::MAX);
        r.push_word(self).unwrap();
        r.push_word(other).unwrap();
        r.finish()
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut r = Reducer::new(u64::MAX);
        for _ in 0..n.unsigned_abs() {
            r.push_word(&base).unwrap();
        }
        r.finish()
    }

    pub fn conjugate_by(&self, g: &FreeWord) -> Self {
        g.mul(self).mul(&g.inverse())
    }

    /// Substitutes `images[g]` for each generator `g`.
    pub fn substitute(&self, images: &[FreeWord], cap: u64) -> Result<FreeWord, WordError> {
        self.check_rank(images.len())?;
        substitute_with(self, images, cap)
    }

    /// Text form using generator names; the identity prints as `1`.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.runs.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for &(g, e) in &self.runs {
            let name = names.get(g as usize).cloned().unwrap_or_else(|| format!("g{g}"));
            let tok = if e > 0 { name } else { format!("{name}^-1") };
            for _ in 0..e.unsigned_abs() {
                parts.push(tok.clone());
            }
        }
        parts.join(" ")
    }

    /// Parses the output of [`Self::display_with`].
    pub fn parse_with(text: &str, lookup: &dyn Fn(&str) -> Option<u32>) -> Result<FreeWord, WordError> {
        let t = text.trim();
        if t == "1" || t.is_empty() {
            return Ok(FreeWord::identity());
        }
        let mut letters = Vec::new();
        for tok in t.split_whitespace() {
            let (name, sign) = match tok.strip_suffix("^-1") {
                Some(n) => (n, -1),
                None => (tok, 1),
            };
            let g = lookup(name).ok_or_else(|| WordError::Parse(tok.to_string()))?;
            letters.push((g, sign));
        }
        Ok(FreeWord::from_letters(letters))
    }
}

pub(crate) fn substitute_with(w: &FreeWord, images: &[FreeWord], cap: u64) -> Result<FreeWord, WordError> {
    let mut r = Reducer::new(cap);
    for &(g, e) in w.runs() {
        let img = &images[g as usize];
        if let [(h, m)] = img.runs() {
            r.push(*h, m * e)?;
            continue;
        }
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                r.push_word(img)?;
            } else {
                r.push_inverse(img)?;
            }
        }
    }
    Ok(r.finish())
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .runs
            .iter()
            .map(|&(g, e)| if e == 1 { format!("g{g}") } else { format!("g{g}^{e}") })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_cancels_across_runs() {
        let w = FreeWord::from_letters([(0, 1), (1, 1), (1, -1), (0, -1), (2, 1)]);
        assert_eq!(w, FreeWord::gen(2));
        let w = FreeWord::from_runs([(0, 2), (1, 3), (1, -3), (0, -1)]);
        assert_eq!(w, FreeWord::gen(0));
        assert_eq!(FreeWord::gen(0).mul(&FreeWord::gen(0).inverse()), FreeWord::identity());
    }

    #[test]
    fn cap_is_enforced() {
        let mut r = Reducer::new(3);
        r.push(0, 3).unwrap();
        assert_eq!(r.push(1, 1), Err(WordError::TooLong { cap: 3 }));
    }

    #[test]
    fn text_round_trip() {
        let names: Vec<String> = ["a_1^(0)", "b"].iter().map(|s| s.to_string()).collect();
        let w = FreeWord::from_letters([(0, 1), (1, -1), (1, -1), (0, 1)]);
        let text = w.display_with(&names);
        assert_eq!(text, "a_1^(0) b^-1 b^-1 a_1^(0)");
        let back = FreeWord::parse_with(&text, &|s| names.iter().position(|n| n == s).map(|p| p as u32)).unwrap();
        assert_eq!(back, w);
        assert_eq!(FreeWord::identity().display_with(&names), "1");
    }
}
