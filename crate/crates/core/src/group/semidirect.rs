//! Free-by-free semidirect products `A ⋊ B` with `b a b⁻¹ = Φ(b)(a)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::automorphism::FreeAutomorphism;
use super::word::{FreeWord, WordError, DEFAULT_LETTER_CAP};

/// The action of a free base group `B` on a free kernel `A`, one verified
/// automorphism per base generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyAction {
    pub kernel_names: Vec<String>,
    pub base_names: Vec<String>,
    pub auts: Vec<FreeAutomorphism>,
}

/// A letter of a word over the combined alphabet `A ∪ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SdLetter {
    Kernel(u32, i8),
    Base(u32, i8),
}

/// The normal form `a·b` of an element of `A ⋊ B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SemidirectElement {
    pub kernel: FreeWord,
    pub base: FreeWord,
}

impl MonodromyAction {
    pub fn new(
        kernel_names: Vec<String>,
        base_names: Vec<String>,
        auts: Vec<FreeAutomorphism>,
    ) -> Result<Self, WordError> {
        if auts.len() != base_names.len() {
            return Err(WordError::AlphabetMismatch {
                gen: auts.len() as u32,
                rank: base_names.len(),
            });
        }
        if let Some(a) = auts.iter().find(|a| a.rank() != kernel_names.len()) {
            return Err(WordError::AlphabetMismatch {
                gen: a.rank() as u32,
                rank: kernel_names.len(),
            });
        }
        Ok(MonodromyAction {
            kernel_names,
            base_names,
            auts,
        })
    }

    /// Single-automorphism action with default names `x_i` and `t`.
    pub fn cyclic(aut: FreeAutomorphism, kernel_prefix: &str, base_name: &str) -> Self {
        let kernel_names = (1..=aut.rank()).map(|i| format!("{kernel_prefix}_{i}")).collect();
        MonodromyAction {
            kernel_names,
            base_names: vec![base_name.to_string()],
            auts: vec![aut],
        }
    }

    pub fn kernel_rank(&self) -> usize {
        self.kernel_names.len()
    }

    pub fn base_rank(&self) -> usize {
        self.base_names.len()
    }

    /// `Φ(b)(a)`, applying the letters of `b` from right to left.
    pub fn act(&self, b: &FreeWord, a: &FreeWord, cap: u64) -> Result<FreeWord, WordError> {
        b.check_rank(self.base_rank())?;
        let mut cur = a.clone();
        for &(g, e) in b.runs().iter().rev() {
            cur = self.auts[g as usize].apply_pow(&cur, e, cap)?;
        }
        Ok(cur)
    }

    /// Defining relators `b a b⁻¹ Φ(b)(a)⁻¹`, as `(b, a)` pairs.
    pub fn relator_pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.base_rank() as u32)
            .flat_map(move |b| (0..self.kernel_rank() as u32).map(move |a| (b, a)))
    }

    pub fn mul(
        &self,
        x: &SemidirectElement,
        y: &SemidirectElement,
        cap: u64,
    ) -> Result<SemidirectElement, WordError> {
        let moved = self.act(&x.base, &y.kernel, cap)?;
        Ok(SemidirectElement {
            kernel: x.kernel.mul(&moved),
            base: x.base.mul(&y.base),
        })
    }

    pub fn inverse(&self, x: &SemidirectElement, cap: u64) -> Result<SemidirectElement, WordError> {
        let binv = x.base.inverse();
        Ok(SemidirectElement {
            kernel: self.act(&binv, &x.kernel.inverse(), cap)?,
            base: binv,
        })
    }

    /// Normal form of a word over `A ∪ B`, folding letters in from the right.
    pub fn normal_form(&self, letters: &[SdLetter], cap: u64) -> Result<SemidirectElement, WordError> {
        let mut kernel_rev: Vec<(u32, i64)> = Vec::new();
        let mut base_rev: Vec<(u32, i64)> = Vec::new();
        let mut kernel = FreeWord::identity();
        for l in letters.iter().rev() {
            match *l {
                SdLetter::Kernel(g, s) => {
                    if g as usize >= self.kernel_rank() {
                        return Err(WordError::AlphabetMismatch {
                            gen: g,
                            rank: self.kernel_rank(),
                        });
                    }
                    kernel_rev.clear();
                    kernel_rev.push((g, s as i64));
                    kernel_rev.extend_from_slice(kernel.runs());
                    kernel = FreeWord::from_runs(kernel_rev.iter().copied());
                }
                SdLetter::Base(g, s) => {
                    if g as usize >= self.base_rank() {
                        return Err(WordError::AlphabetMismatch {
                            gen: g,
                            rank: self.base_rank(),
                        });
                    }
                    kernel = self.auts[g as usize].apply_pow(&kernel, s as i64, cap)?;
                    base_rev.push((g, s as i64));
                }
            }
        }
        if kernel.len() > cap {
            return Err(WordError::TooLong { cap });
        }
        Ok(SemidirectElement {
            kernel,
            base: FreeWord::from_runs(base_rev.into_iter().rev()),
        })
    }

    /// Total letter count of all `Φ_j(basis)` images.
    pub fn image_size(&self) -> u64 {
        self.auts.iter().map(FreeAutomorphism::image_size).sum()
    }

    pub fn kernel_lookup(&self) -> HashMap<&str, u32> {
        name_lookup(&self.kernel_names)
    }

    /// Text form: a `kernel:` line, a `base:` line, then one
    /// `t: gen -> word` line per kernel generator and base generator, and the
    /// same with `t^-1:` for the inverses.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("kernel: {}\n", self.kernel_names.join(" ")));
        out.push_str(&format!("base: {}\n", self.base_names.join(" ")));
        for (j, aut) in self.auts.iter().enumerate() {
            let t = &self.base_names[j];
            for (i, w) in aut.images().iter().enumerate() {
                out.push_str(&format!(
                    "{t}: {} -> {}\n",
                    self.kernel_names[i],
                    w.display_with(&self.kernel_names)
                ));
            }
            for (i, w) in aut.inverse_images().iter().enumerate() {
                out.push_str(&format!(
                    "{t}^-1: {} -> {}\n",
                    self.kernel_names[i],
                    w.display_with(&self.kernel_names)
                ));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, WordError> {
        let bad = |s: &str| WordError::Parse(s.to_string());
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let kernel_line = lines.next().ok_or_else(|| bad("missing kernel line"))?;
        let kernel_names: Vec<String> = kernel_line
            .strip_prefix("kernel:")
            .ok_or_else(|| bad(kernel_line))?
            .split_whitespace()
            .map(String::from)
            .collect();
        let base_line = lines.next().ok_or_else(|| bad("missing base line"))?;
        let base_names: Vec<String> = base_line
            .strip_prefix("base:")
            .ok_or_else(|| bad(base_line))?
            .split_whitespace()
            .map(String::from)
            .collect();
        let klook = name_lookup(&kernel_names);
        let blook = name_lookup(&base_names);
        let lookup = |s: &str| klook.get(s).copied();
        let nk = kernel_names.len();
        let mut fwd = vec![vec![None; nk]; base_names.len()];
        let mut inv = vec![vec![None; nk]; base_names.len()];
        for line in lines {
            let (head, rest) = line.split_once(": ").ok_or_else(|| bad(line))?;
            let (t, is_inv) = match head.strip_suffix("^-1") {
                Some(t) => (t, true),
                None => (head, false),
            };
            let j = *blook.get(t).ok_or_else(|| bad(t))? as usize;
            let (g, w) = rest.split_once(" -> ").ok_or_else(|| bad(line))?;
            let i = lookup(g.trim()).ok_or_else(|| bad(g))? as usize;
            let word = FreeWord::parse_with(w, &lookup)?;
            let slot = if is_inv { &mut inv[j][i] } else { &mut fwd[j][i] };
            *slot = Some(word);
        }
        let mut auts = Vec::new();
        for j in 0..base_names.len() {
            let take = |v: &Vec<Option<FreeWord>>| -> Result<Vec<FreeWord>, WordError> {
                v.iter()
                    .enumerate()
                    .map(|(i, w)| {
                        w.clone()
                            .ok_or_else(|| bad(&format!("{}: {} missing", base_names[j], kernel_names[i])))
                    })
                    .collect()
            };
            auts.push(FreeAutomorphism::new(take(&fwd[j])?, take(&inv[j])?)?);
        }
        MonodromyAction::new(kernel_names, base_names, auts)
    }
}

fn name_lookup(names: &[String]) -> HashMap<&str, u32> {
    names.iter().enumerate().map(|(i, n)| (n.as_str(), i as u32)).collect()
}

impl SemidirectElement {
    pub fn identity() -> Self {
        SemidirectElement::default()
    }

    pub fn kernel(a: FreeWord) -> Self {
        SemidirectElement {
            kernel: a,
            base: FreeWord::identity(),
        }
    }

    pub fn base(b: FreeWord) -> Self {
        SemidirectElement {
            kernel: FreeWord::identity(),
            base: b,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.kernel.is_identity() && self.base.is_identity()
    }
}

/// Letters of `b a b⁻¹` as a combined word.
pub fn conjugate_letters(b: &FreeWord, a: &FreeWord) -> Vec<SdLetter> {
    let mut out: Vec<SdLetter> = b.letters().map(|(g, s)| SdLetter::Base(g, s)).collect();
    out.extend(a.letters().map(|(g, s)| SdLetter::Kernel(g, s)));
    out.extend(b.inverse().letters().map(|(g, s)| SdLetter::Base(g, s)));
    out
}

/// Checks every defining relator reduces to the identity.
pub fn check_relators(action: &MonodromyAction) -> Result<(), WordError> {
    for (b, a) in action.relator_pairs() {
        let bw = FreeWord::gen(b);
        let aw = FreeWord::gen(a);
        let mut letters = conjugate_letters(&bw, &aw);
        let img = action.act(&bw, &aw, DEFAULT_LETTER_CAP)?;
        letters.extend(img.inverse().letters().map(|(g, s)| SdLetter::Kernel(g, s)));
        let nf = action.normal_form(&letters, DEFAULT_LETTER_CAP)?;
        if !nf.is_identity() {
            return Err(WordError::NotInverse(format!(
                "relator ({}, {}) gives {:?}",
                action.base_names[b as usize], action.kernel_names[a as usize], nf
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::automorphism::example1_monodromy;

    fn gamma3() -> MonodromyAction {
        MonodromyAction::cyclic(example1_monodromy(3), "x", "t")
    }

    #[test]
    fn conjugation_normal_form() {
        let act = gamma3();
        let nf = act
            .normal_form(&conjugate_letters(&FreeWord::gen(0), &FreeWord::gen(1)), 100)
            .unwrap();
        assert_eq!(nf, SemidirectElement::kernel(FreeWord::from_runs([(0, 1), (1, 1)])));
        assert_eq!(act.normal_form(&[], 10).unwrap(), SemidirectElement::identity());
        let ba = act
            .normal_form(&[SdLetter::Base(0, 1), SdLetter::Kernel(2, 1)], 100)
            .unwrap();
        assert_eq!(ba.kernel, act.act(&FreeWord::gen(0), &FreeWord::gen(2), 100).unwrap());
        assert_eq!(ba.base, FreeWord::gen(0));
        check_relators(&act).unwrap();
    }

    #[test]
    fn inverse_and_mul() {
        let act = gamma3();
        let x = SemidirectElement {
            kernel: FreeWord::from_runs([(2, 1), (0, -2)]),
            base: FreeWord::gen_pow(0, -3),
        };
        let xi = act.inverse(&x, 1000).unwrap();
        assert!(act.mul(&x, &xi, 1000).unwrap().is_identity());
        assert!(act.mul(&xi, &x, 1000).unwrap().is_identity());
    }

    #[test]
    fn text_round_trip() {
        let act = gamma3();
        let text = act.to_text();
        assert!(text.contains("t: x_3 -> x_1 x_2 x_3\n"));
        assert!(text.contains("t^-1: x_2 -> x_1^-1 x_2\n"));
        assert_eq!(MonodromyAction::from_text(&text).unwrap(), act);
    }
}
