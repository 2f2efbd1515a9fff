//! Sampled checks of the factor and diagonal intersection conditions, run in
//! `(A ⋊ B) × C` coordinates where the map is `ab ↦ (ab, θ(b))`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::automorphism::{example1_monodromy, FreeAutomorphism};
use super::folding::{is_free_basis, FoldedGraph};
use super::semidirect::{MonodromyAction, SemidirectElement};
use super::word::{FreeWord, WordError, DEFAULT_LETTER_CAP};

pub const MAX_SAMPLE_LEN: usize = 32;

/// `A ⋊ B` with an injection `θ: B → C` into a free group `C`.
#[derive(Debug, Clone)]
pub struct BassSetup {
    pub name: String,
    pub action: MonodromyAction,
    pub theta: Vec<FreeWord>,
    pub c_names: Vec<String>,
    image: FoldedGraph,
}

/// A point of `(A ⋊ B) × C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiImage {
    pub first: SemidirectElement,
    pub second: FreeWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BassReport {
    pub setup: String,
    pub test: String,
    pub seed: u64,
    pub samples: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl BassReport {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

impl BassSetup {
    pub fn new(name: &str, action: MonodromyAction, theta: Vec<FreeWord>, c_names: Vec<String>) -> Result<Self, WordError> {
        if theta.len() != action.base_rank() {
            return Err(WordError::AlphabetMismatch {
                gen: theta.len() as u32,
                rank: action.base_rank(),
            });
        }
        for w in &theta {
            w.check_rank(c_names.len())?;
        }
        if !is_free_basis(&theta) {
            return Err(WordError::NotInverse("θ images are not a free basis of their span".into()));
        }
        let image = FoldedGraph::fold(&theta);
        Ok(BassSetup {
            name: name.to_string(),
            action,
            theta,
            c_names,
            image,
        })
    }

    /// `F_3 ⋊_φ ℤ` with `φ(x_i) = x_1⋯x_i` and `θ(t) = c_1 c_2` in `F_2`.
    pub fn example1() -> Self {
        let action = MonodromyAction::cyclic(example1_monodromy(3), "x", "t");
        let theta = vec![FreeWord::from_runs([(0, 1), (1, 1)])];
        BassSetup::new("example1-F3", action, theta, vec!["c_1".into(), "c_2".into()]).unwrap()
    }

    /// `F_2 ⋊ F_2` with two transvections and `θ(s) = c_1 c_2`,
    /// `θ(t) = c_2 c_1²`.
    pub fn rank_two_base() -> Self {
        let x = |runs: &[(u32, i64)]| FreeWord::from_runs(runs.iter().copied());
        let s = FreeAutomorphism::new(
            vec![x(&[(0, 1), (1, 1)]), x(&[(1, 1)])],
            vec![x(&[(0, 1), (1, -1)]), x(&[(1, 1)])],
        )
        .unwrap();
        let t = FreeAutomorphism::new(
            vec![x(&[(0, 1)]), x(&[(1, 1), (0, 1)])],
            vec![x(&[(0, 1)]), x(&[(1, 1), (0, -1)])],
        )
        .unwrap();
        let action = MonodromyAction::new(
            vec!["x".into(), "y".into()],
            vec!["s".into(), "t".into()],
            vec![s, t],
        )
        .unwrap();
        let theta = vec![x(&[(0, 1), (1, 1)]), x(&[(1, 1), (0, 2)])];
        BassSetup::new("rank-two-base", action, theta, vec!["c_1".into(), "c_2".into()]).unwrap()
    }

    pub fn standard() -> Vec<BassSetup> {
        vec![BassSetup::example1(), BassSetup::rank_two_base()]
    }

    pub fn theta_of(&self, b: &FreeWord) -> Result<FreeWord, WordError> {
        b.substitute(&self.theta, DEFAULT_LETTER_CAP)
    }

    pub fn embed_phi(&self, g: &SemidirectElement) -> Result<PhiImage, WordError> {
        Ok(PhiImage {
            first: g.clone(),
            second: self.theta_of(&g.base)?,
        })
    }

    pub fn mul(&self, x: &PhiImage, y: &PhiImage) -> Result<PhiImage, WordError> {
        Ok(PhiImage {
            first: self.action.mul(&x.first, &y.first, DEFAULT_LETTER_CAP)?,
            second: x.second.mul(&y.second),
        })
    }

    /// Whether `c` lies in `θ(B)`.
    pub fn in_theta_image(&self, c: &FreeWord) -> bool {
        self.image.accepts(c)
    }

    pub fn random_kernel(&self, rng: &mut ChaCha8Rng) -> FreeWord {
        random_word(rng, self.action.kernel_rank())
    }

    pub fn random_base(&self, rng: &mut ChaCha8Rng) -> FreeWord {
        random_word(rng, self.action.base_rank())
    }

    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> SemidirectElement {
        SemidirectElement {
            kernel: self.random_kernel(rng),
            base: self.random_base(rng),
        }
    }
}

/// A random reduced word of length `0..=MAX_SAMPLE_LEN`.
pub fn random_word(rng: &mut ChaCha8Rng, rank: usize) -> FreeWord {
    let len = rng.gen_range(0..=MAX_SAMPLE_LEN);
    let mut letters: Vec<(u32, i8)> = Vec::with_capacity(len);
    while letters.len() < len {
        let g = rng.gen_range(0..rank as u32);
        let s: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
        if letters.last() == Some(&(g, -s)) {
            continue;
        }
        letters.push((g, s));
    }
    FreeWord::from_letters(letters)
}

fn report(setup: &BassSetup, test: &str, seed: u64, samples: usize, bad: Vec<String>) -> BassReport {
    BassReport {
        setup: setup.name.clone(),
        test: test.into(),
        seed,
        samples,
        violations: bad.len(),
        first_violation: bad.into_iter().next(),
    }
}

/// `φ(ab)` has trivial `C` coordinate exactly when `b = 1`. Every other
/// sample forces `b = 1` so both directions are exercised.
pub fn bass_factor_test(setup: &BassSetup, samples: usize, seed: u64) -> Result<BassReport, WordError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for i in 0..samples {
        let mut g = setup.random_element(&mut rng);
        if i % 2 == 0 {
            g.base = FreeWord::identity();
        }
        let img = setup.embed_phi(&g)?;
        if img.second.is_identity() != g.base.is_identity() {
            bad.push(format!("sample {i}: {:?}", g));
        }
        if img.first != g {
            bad.push(format!("sample {i}: first coordinate moved"));
        }
    }
    Ok(report(setup, "factor", seed, samples, bad))
}

/// For `c = θ(b)`: `c ∈ θ(B)` and `φ(β(c)) = (b, c)`, which the amalgam
/// relation `b = θ(b)` turns into the diagonal pair `(c, c)`. Conversely
/// `φ(ab)` with `a ≠ 1` keeps a nontrivial kernel part.
pub fn bass_diagonal_test(setup: &BassSetup, samples: usize, seed: u64) -> Result<BassReport, WordError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for i in 0..samples {
        let b = setup.random_base(&mut rng);
        let c = setup.theta_of(&b)?;
        if !setup.in_theta_image(&c) {
            bad.push(format!("sample {i}: θ(b) not accepted"));
        }
        let img = setup.embed_phi(&SemidirectElement::base(b.clone()))?;
        if img.second != c || !img.first.kernel.is_identity() || img.first.base != b {
            bad.push(format!("sample {i}: φ(β(c)) off the diagonal"));
        }
        let g = setup.random_element(&mut rng);
        if !g.kernel.is_identity() && setup.embed_phi(&g)?.first.kernel.is_identity() {
            bad.push(format!("sample {i}: kernel part vanished"));
        }
    }
    Ok(report(setup, "diagonal", seed, samples, bad))
}

/// `φ(g₁)φ(g₂) = φ(g₁g₂)` on random pairs.
pub fn embed_phi_homomorphism_test(setup: &BassSetup, samples: usize, seed: u64) -> Result<BassReport, WordError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for i in 0..samples {
        let g1 = setup.random_element(&mut rng);
        let g2 = setup.random_element(&mut rng);
        let lhs = setup.mul(&setup.embed_phi(&g1)?, &setup.embed_phi(&g2)?)?;
        let prod = setup.action.mul(&g1, &g2, DEFAULT_LETTER_CAP)?;
        let rhs = setup.embed_phi(&prod)?;
        if lhs != rhs {
            bad.push(format!("sample {i}"));
        }
    }
    Ok(report(setup, "homomorphism", seed, samples, bad))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn setups_are_valid_and_pass() {
        for s in BassSetup::standard() {
            assert!(bass_factor_test(&s, 50, 1).unwrap().pass());
            assert!(bass_diagonal_test(&s, 50, 2).unwrap().pass());
            assert!(embed_phi_homomorphism_test(&s, 50, 3).unwrap().pass());
        }
    }

    #[test]
    fn non_injective_theta_rejected() {
        let action = MonodromyAction::cyclic(example1_monodromy(2), "x", "t");
        assert!(BassSetup::new("bad", action, vec![FreeWord::identity()], vec!["c".into()]).is_err());
    }
}
