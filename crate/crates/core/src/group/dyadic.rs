//! The affine model of `BS(1,2) = ⟨a, t | t a t⁻¹ = a²⟩` and the commutator
//! demonstration contrasting a product quotient with the honest double.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::word::FreeWord;

/// The map `x ↦ 2^scale · x + shift`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicAffine {
    pub scale: i64,
    pub shift: BigRational,
}

fn pow2(k: i64) -> BigRational {
    let p = BigRational::from_integer(BigInt::one() << k.unsigned_abs());
    if k >= 0 {
        p
    } else {
        p.recip()
    }
}

impl DyadicAffine {
    pub fn identity() -> Self {
        DyadicAffine {
            scale: 0,
            shift: BigRational::zero(),
        }
    }

    pub fn a() -> Self {
        DyadicAffine {
            scale: 0,
            shift: BigRational::one(),
        }
    }

    pub fn t() -> Self {
        DyadicAffine {
            scale: 1,
            shift: BigRational::zero(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DyadicAffine) -> DyadicAffine {
        DyadicAffine {
            scale: self.scale + other.scale,
            shift: pow2(self.scale) * &other.shift + &self.shift,
        }
    }

    pub fn inverse(&self) -> DyadicAffine {
        DyadicAffine {
            scale: -self.scale,
            shift: -(pow2(-self.scale) * &self.shift),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.scale == 0 && self.shift.is_zero()
    }

    /// Integer translations are exactly the elements of `⟨a⟩`.
    pub fn in_cyclic_a(&self) -> bool {
        self.scale == 0 && self.shift.is_integer()
    }
}

/// Letters of `BS(1,2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsLetter {
    A(i8),
    T(i8),
}

/// Evaluates a word left to right as a composition of affine maps.
pub fn evaluate(word: &[BsLetter]) -> DyadicAffine {
    let mut acc = DyadicAffine::identity();
    for l in word {
        let m = match *l {
            BsLetter::A(s) if s > 0 => DyadicAffine::a(),
            BsLetter::A(_) => DyadicAffine::a().inverse(),
            BsLetter::T(s) if s > 0 => DyadicAffine::t(),
            BsLetter::T(_) => DyadicAffine::t().inverse(),
        };
        acc = acc.compose(&m);
    }
    acc
}

/// The normal form `t^{-p} a^m t^q` with `p, q ≥ 0`, `m` odd when both are
/// positive, and not the empty word.
pub fn random_normal_form(rng: &mut ChaCha8Rng) -> Vec<BsLetter> {
    loop {
        let p: u32 = rng.gen_range(0..=10);
        let q: u32 = rng.gen_range(0..=10);
        let mut m: i64 = rng.gen_range(-12..=12);
        if p > 0 && q > 0 && m % 2 == 0 {
            m += 1;
        }
        if p == 0 && q == 0 && m == 0 {
            continue;
        }
        let mut w = Vec::new();
        w.extend(std::iter::repeat_n(BsLetter::T(-1), p as usize));
        let s = if m > 0 { 1 } else { -1 };
        w.extend(std::iter::repeat_n(BsLetter::A(s), m.unsigned_abs() as usize));
        w.extend(std::iter::repeat_n(BsLetter::T(1), q as usize));
        return w;
    }
}

/// Counts nonempty random normal forms that evaluate to the identity.
pub fn faithfulness_violations(samples: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .filter(|_| evaluate(&random_normal_form(&mut rng)).is_identity())
        .count()
}

/// An element of `BS(1,2) × F(u, v)`; `u, v` commute with `a, t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsTimesFree {
    pub bs: DyadicAffine,
    pub free: FreeWord,
}

/// Letters of `⟨a, t, u, v | t a t⁻¹ = a², u and v commute with a and t⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductLetter {
    Bs(BsLetter),
    U(i8),
    V(i8),
}

pub fn evaluate_product(word: &[ProductLetter]) -> BsTimesFree {
    let mut bs = Vec::new();
    let mut free = Vec::new();
    for l in word {
        match *l {
            ProductLetter::Bs(b) => bs.push(b),
            ProductLetter::U(s) => free.push((0u32, s)),
            ProductLetter::V(s) => free.push((1u32, s)),
        }
    }
    BsTimesFree {
        bs: evaluate(&bs),
        free: FreeWord::from_letters(free),
    }
}

/// Letters of the double `⟨a, s_1, s_2 | s_i a s_i⁻¹ = a²⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoubleLetter {
    A(i8),
    S(u8, i8),
}

/// A syllable of an amalgam word: factor 0 is `⟨a⟩`, factors 1 and 2 are the
/// two copies.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Syllable {
    factor: u8,
    value: DyadicAffine,
}

/// Reduces a word in the double to alternating syllables none of which lies
/// in `⟨a⟩`. Returns the syllable count and, when zero, the leftover
/// translation.
pub fn reduce_in_double(word: &[DoubleLetter]) -> (usize, DyadicAffine) {
    let mut syl: Vec<Syllable> = word
        .iter()
        .map(|l| match *l {
            DoubleLetter::A(s) => Syllable {
                factor: 0,
                value: evaluate(&[BsLetter::A(s)]),
            },
            DoubleLetter::S(i, s) => Syllable {
                factor: i,
                value: evaluate(&[BsLetter::T(s)]),
            },
        })
        .collect();
    loop {
        let mut changed = false;
        for s in syl.iter_mut() {
            if s.factor != 0 && s.value.in_cyclic_a() {
                s.factor = 0;
                changed = true;
            }
        }
        let mut out: Vec<Syllable> = Vec::new();
        for s in syl {
            match out.last_mut() {
                Some(last) if last.factor == s.factor || last.factor == 0 || s.factor == 0 => {
                    last.value = last.value.compose(&s.value);
                    last.factor = last.factor.max(s.factor);
                    changed = true;
                }
                _ => out.push(s),
            }
        }
        syl = out;
        if !changed {
            break;
        }
    }
    syl.retain(|s| !(s.factor == 0 && s.value.is_identity()));
    match syl.as_slice() {
        [] => (0, DyadicAffine::identity()),
        [s] if s.factor == 0 => (0, s.value.clone()),
        _ => (syl.len(), DyadicAffine::identity()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsDemoReport {
    pub quotient_conjugator: String,
    pub quotient_commutator_trivial: bool,
    pub double_commutator_syllables: usize,
    pub double_commutator_trivial: bool,
    pub affine_relation_holds: bool,
    pub pass: bool,
}

fn commutator<T: Copy>(x: &[T], y: &[T], inv: impl Fn(T) -> T) -> Vec<T> {
    let xi: Vec<T> = x.iter().rev().map(|&l| inv(l)).collect();
    let yi: Vec<T> = y.iter().rev().map(|&l| inv(l)).collect();
    [x, y, &xi, &yi].concat()
}

pub fn bs_demo() -> BsDemoReport {
    use BsLetter as B;
    use ProductLetter as P;
    let pinv = |l: ProductLetter| match l {
        P::Bs(B::A(s)) => P::Bs(B::A(-s)),
        P::Bs(B::T(s)) => P::Bs(B::T(-s)),
        P::U(s) => P::U(-s),
        P::V(s) => P::V(-s),
    };
    // (tv)(tu)⁻¹ = t v u⁻¹ t⁻¹
    let g = [P::Bs(B::T(1)), P::V(1), P::U(-1), P::Bs(B::T(-1))];
    let g_val = evaluate_product(&g);
    let names = vec!["u".to_string(), "v".to_string()];
    let conj = if g_val.bs.is_identity() {
        g_val.free.display_with(&names)
    } else {
        format!("{:?}", g_val)
    };
    let comm = commutator(&g, &[P::Bs(B::A(1))], pinv);
    let quotient_trivial = {
        let c = evaluate_product(&comm);
        c.bs.is_identity() && c.free.is_identity()
    };

    let dinv = |l: DoubleLetter| match l {
        DoubleLetter::A(s) => DoubleLetter::A(-s),
        DoubleLetter::S(i, s) => DoubleLetter::S(i, -s),
    };
    let h = [DoubleLetter::S(1, 1), DoubleLetter::S(2, -1)];
    let dcomm = commutator(&h, &[DoubleLetter::A(1)], dinv);
    let (syllables, rest) = reduce_in_double(&dcomm);
    let double_trivial = syllables == 0 && rest.is_identity();

    let lhs = evaluate(&[B::T(1), B::A(1), B::T(-1)]);
    let rhs = evaluate(&[B::A(1), B::A(1)]);
    let relation = lhs == rhs;
    BsDemoReport {
        quotient_conjugator: conj,
        quotient_commutator_trivial: quotient_trivial,
        double_commutator_syllables: syllables,
        double_commutator_trivial: double_trivial,
        affine_relation_holds: relation,
        pass: quotient_trivial && !double_trivial && relation,
    }
}

impl std::fmt::Display for DyadicAffine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sign = if self.shift.is_negative() { "-" } else { "+" };
        write!(f, "x -> 2^{} x {} {}", self.scale, sign, self.shift.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_relation_and_faithfulness() {
        use BsLetter::*;
        assert_eq!(evaluate(&[T(1), A(1), T(-1)]), evaluate(&[A(1), A(1)]));
        assert!(evaluate(&[T(-1), A(1), T(1)]).shift == BigRational::new(1.into(), 2.into()));
        assert_eq!(faithfulness_violations(1000, 7), 0);
        let x = evaluate(&[T(1), A(-3), T(-2)]);
        assert!(x.compose(&x.inverse()).is_identity());
    }

    #[test]
    fn demo_passes() {
        let r = bs_demo();
        assert_eq!(r.quotient_conjugator, "v u^-1");
        assert!(r.quotient_commutator_trivial);
        assert!(r.double_commutator_syllables > 0);
        assert!(r.pass);
    }

    #[test]
    fn double_reduction_cancels_trivial_words() {
        use DoubleLetter::*;
        let w = [S(1, 1), A(1), S(1, -1), A(-1), A(-1)];
        assert_eq!(reduce_in_double(&w).0, 0);
        assert!(reduce_in_double(&w).1.is_identity());
        let w = [S(1, 1), S(2, -1), S(2, 1), S(1, -1)];
        assert_eq!(reduce_in_double(&w).0, 0);
    }
}
