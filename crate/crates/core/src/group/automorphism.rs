use serde::{Deserialize, Serialize};

use super::word::{substitute_with, FreeWord, WordError, DEFAULT_LETTER_CAP};

/// An automorphism of a free group of finite rank, stored with its inverse.
/// Both directions are checked on construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeAutomorphism {
    images: Vec<FreeWord>,
    inverse_images: Vec<FreeWord>,
}

impl FreeAutomorphism {
    pub fn new(images: Vec<FreeWord>, inverse_images: Vec<FreeWord>) -> Result<Self, WordError> {
        let rank = images.len();
        if inverse_images.len() != rank {
            return Err(WordError::NotInverse(format!(
                "{} images but {} inverse images",
                rank,
                inverse_images.len()
            )));
        }
        for w in images.iter().chain(&inverse_images) {
            w.check_rank(rank)?;
        }
        let aut = FreeAutomorphism {
            images,
            inverse_images,
        };
        for g in 0..rank as u32 {
            let x = FreeWord::gen(g);
            let there = aut.apply_inverse(&aut.apply(&x, DEFAULT_LETTER_CAP)?, DEFAULT_LETTER_CAP)?;
            if there != x {
                return Err(WordError::NotInverse(format!("inverse(image(g{g})) = {there}")));
            }
            let back = aut.apply(&aut.apply_inverse(&x, DEFAULT_LETTER_CAP)?, DEFAULT_LETTER_CAP)?;
            if back != x {
                return Err(WordError::NotInverse(format!("image(inverse(g{g})) = {back}")));
            }
        }
        Ok(aut)
    }

    pub fn identity(rank: usize) -> Self {
        let gens: Vec<FreeWord> = (0..rank as u32).map(FreeWord::gen).collect();
        FreeAutomorphism {
            images: gens.clone(),
            inverse_images: gens,
        }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[FreeWord] {
        &self.inverse_images
    }

    pub fn inverse(&self) -> FreeAutomorphism {
        FreeAutomorphism {
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    pub fn apply(&self, w: &FreeWord, cap: u64) -> Result<FreeWord, WordError> {
        w.check_rank(self.rank())?;
        substitute_with(w, &self.images, cap)
    }

    pub fn apply_inverse(&self, w: &FreeWord, cap: u64) -> Result<FreeWord, WordError> {
        w.check_rank(self.rank())?;
        substitute_with(w, &self.inverse_images, cap)
    }

    /// Applies the `n`-th power (negative `n` uses the inverse).
    pub fn apply_pow(&self, w: &FreeWord, n: i64, cap: u64) -> Result<FreeWord, WordError> {
        let mut cur = w.clone();
        for _ in 0..n.unsigned_abs() {
            cur = if n > 0 {
                self.apply(&cur, cap)?
            } else {
                self.apply_inverse(&cur, cap)?
            };
        }
        Ok(cur)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &FreeAutomorphism) -> Result<FreeAutomorphism, WordError> {
        if self.rank() != other.rank() {
            return Err(WordError::AlphabetMismatch {
                gen: other.rank() as u32,
                rank: self.rank(),
            });
        }
        let images = other
            .images
            .iter()
            .map(|w| self.apply(w, DEFAULT_LETTER_CAP))
            .collect::<Result<Vec<_>, _>>()?;
        let inverse_images = self
            .inverse_images
            .iter()
            .map(|w| other.apply_inverse(w, DEFAULT_LETTER_CAP))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FreeAutomorphism {
            images,
            inverse_images,
        })
    }

    /// Total letter count of the images of the basis.
    pub fn image_size(&self) -> u64 {
        self.images.iter().map(FreeWord::len).sum()
    }
}

/// The monodromy of the kernel-by-cyclic group of `Γ_k`:
/// `x_i ↦ x_1 x_2 ⋯ x_i`.
pub fn example1_monodromy(k: usize) -> FreeAutomorphism {
    let images = (0..k as u32)
        .map(|i| FreeWord::from_runs((0..=i).map(|g| (g, 1))))
        .collect();
    let inverse_images = (0..k as u32)
        .map(|i| {
            if i == 0 {
                FreeWord::gen(0)
            } else {
                FreeWord::from_runs([(i - 1, -1), (i, 1)])
            }
        })
        .collect();
    FreeAutomorphism::new(images, inverse_images).expect("Γ_k monodromy is invertible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_images() {
        let phi = example1_monodromy(3);
        let x3 = FreeWord::gen(2);
        assert_eq!(phi.apply(&x3, 100).unwrap(), FreeWord::from_runs([(0, 1), (1, 1), (2, 1)]));
        assert_eq!(phi.apply_pow(&x3, 2, 100).unwrap().len(), 6);
        let id = FreeAutomorphism::identity(3);
        assert_eq!(id.apply(&x3, 10).unwrap(), x3);
    }

    #[test]
    fn bad_inverse_rejected() {
        let images = vec![FreeWord::from_runs([(0, 1), (1, 1)]), FreeWord::gen(1)];
        let wrong = vec![FreeWord::from_runs([(0, 1), (1, 1)]), FreeWord::gen(1)];
        assert!(matches!(FreeAutomorphism::new(images, wrong), Err(WordError::NotInverse(_))));
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let phi = example1_monodromy(4);
        let id = phi.compose(&phi.inverse()).unwrap();
        assert_eq!(id, FreeAutomorphism::identity(4));
    }

    #[test]
    fn alphabet_mismatch() {
        let phi = example1_monodromy(2);
        assert!(matches!(
            phi.apply(&FreeWord::gen(5), 10),
            Err(WordError::AlphabetMismatch { gen: 5, rank: 2 })
        ));
    }
}
