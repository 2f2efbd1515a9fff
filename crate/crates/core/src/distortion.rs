//! Distortion witnesses, growth tables and a deterministic growth classifier.
//!
//! Outputs are witness-based lower data; the only upper information is the
//! composed bound checked by [`upper_model_check`].

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group::compressed::{Arena, View};
use crate::group::semidirect::MonodromyAction;
use crate::group::{example1_monodromy, FreeAutomorphism, FreeWord, WordError, DEFAULT_LETTER_CAP};

pub const REPORT_LABEL: &str = "witness-based lower data / composed upper model";

#[derive(Debug, thiserror::Error)]
pub enum DistortionError {
    #[error("growth fit needs at least {need} rows, got {got}")]
    TooFewRows { need: usize, got: usize },
    #[error("table has too few positive values after {depth} logarithms")]
    Degenerate { depth: usize },
    #[error("iterate {n} is not a positive word")]
    NotPositive { n: usize },
    #[error("length overflowed 128 bits")]
    Overflow,
    #[error("bad index: {0}")]
    BadIndex(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub x: u64,
    pub kernel_length: u128,
    pub ambient_budget: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub name: String,
    pub rows: Vec<GrowthRow>,
}

impl GrowthTable {
    pub fn new(name: &str, rows: Vec<GrowthRow>) -> Self {
        GrowthTable {
            name: name.to_string(),
            rows,
        }
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].kernel_length <= w[1].kernel_length)
    }

    pub fn to_csv(&self) -> Result<String, DistortionError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).map_err(|e| DistortionError::Csv(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| DistortionError::Csv(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| DistortionError::Csv(e.to_string()))
    }

    pub fn from_csv(name: &str, text: &str) -> Result<Self, DistortionError> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let rows = r
            .deserialize()
            .collect::<Result<Vec<GrowthRow>, _>>()
            .map_err(|e| DistortionError::Csv(e.to_string()))?;
        Ok(GrowthTable::new(name, rows))
    }
}

// ---------------------------------------------------------------------------
// F_k ⋊ ℤ with x_i ↦ x_1⋯x_i

/// `|φⁿ(x_i)|` for `n = 0..=nmax` by direct iteration.
pub fn example1_length_table(k: usize, i: usize, nmax: usize) -> Result<Vec<u64>, DistortionError> {
    if i == 0 || i > k {
        return Err(DistortionError::BadIndex(format!("x_{i} in F_{k}")));
    }
    let phi = example1_monodromy(k);
    let mut w = FreeWord::gen(i as u32 - 1);
    let mut out = vec![w.len()];
    for n in 1..=nmax {
        w = phi.apply(&w, DEFAULT_LETTER_CAP)?;
        if !w.is_positive() {
            return Err(DistortionError::NotPositive { n });
        }
        out.push(w.len());
    }
    Ok(out)
}

pub fn example1_lengths(k: usize, i: usize, n: usize) -> Result<u64, DistortionError> {
    Ok(example1_length_table(k, i, n)?[n])
}

/// Kernel and ambient length of `tⁿ x_kⁿ t⁻ⁿ = (φⁿ(x_k))ⁿ`.
pub fn example1_witness(k: usize, n: usize) -> Result<(u64, u64), DistortionError> {
    let l = example1_lengths(k, k, n)?;
    Ok((n as u64 * l, 3 * n as u64))
}

pub fn example1_witness_word(k: usize, n: usize) -> Result<FreeWord, DistortionError> {
    let phi = example1_monodromy(k);
    let base = phi.apply_pow(&FreeWord::gen(k as u32 - 1), n as i64, DEFAULT_LETTER_CAP)?;
    Ok(base.pow(n as i64))
}

pub fn example1_witness_table(k: usize, nmax: usize) -> Result<GrowthTable, DistortionError> {
    let lens = example1_length_table(k, k, nmax)?;
    let rows = (1..=nmax)
        .map(|n| GrowthRow {
            x: n as u64,
            kernel_length: n as u128 * lens[n] as u128,
            ambient_budget: 3 * n as u128,
        })
        .collect();
    Ok(GrowthTable::new(&format!("example1-k{k}"), rows))
}

// ---------------------------------------------------------------------------
// Growth classification

pub const MIN_ROWS: usize = 8;
pub const MAX_DEPTH: usize = 3;
/// A sequence counts as sub-exponential when `ln(f(2x)/f(x)²)` falls at
/// least this fast against `ln x` over the top half of the table.
pub const SUBEXP_SLOPE: f64 = -0.5;
/// Sequences with `max/min` at most this are treated as bounded.
pub const BOUNDED_SPREAD: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitThresholds {
    pub min_rows: usize,
    pub max_depth: usize,
    pub subexp_slope: f64,
    pub bounded_spread: f64,
}

impl Default for FitThresholds {
    fn default() -> Self {
        FitThresholds {
            min_rows: MIN_ROWS,
            max_depth: MAX_DEPTH,
            subexp_slope: SUBEXP_SLOPE,
            bounded_spread: BOUNDED_SPREAD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub table: String,
    pub label: String,
    /// Number of logarithms applied before the sequence looked sub-exponential.
    pub depth: usize,
    /// Log-log slope of the sequence after `depth` logarithms.
    pub slope: f64,
    pub poly_degree: Option<f64>,
    /// `exp` of the slope of `ln f` against `x`, reported at depth 1.
    pub exp_base: Option<f64>,
    pub rows_used: usize,
    pub thresholds: FitThresholds,
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

fn top_half<T: Copy>(v: &[T]) -> &[T] {
    &v[v.len() / 2..]
}

/// `ln f` at `x` by linear interpolation of `ln f` between table points.
fn interp_ln(xs: &[f64], ln_ys: &[f64], x: f64) -> Option<f64> {
    let i = xs.iter().position(|&p| p >= x)?;
    if xs[i] == x {
        return Some(ln_ys[i]);
    }
    if i == 0 {
        return None;
    }
    let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    Some(ln_ys[i - 1] + t * (ln_ys[i] - ln_ys[i - 1]))
}

fn is_subexponential(xs: &[f64], ys: &[f64]) -> bool {
    let (lo, hi) = ys.iter().fold((f64::INFINITY, 0f64), |(l, h), &y| (l.min(y), h.max(y)));
    if hi <= BOUNDED_SPREAD * lo {
        return true;
    }
    let ln_ys: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let xmax = *xs.last().unwrap();
    let mut px = Vec::new();
    let mut pr = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        if 2.0 * x > xmax {
            break;
        }
        if let Some(l2) = interp_ln(xs, &ln_ys, 2.0 * x) {
            px.push(x.ln());
            pr.push(l2 - 2.0 * ln_ys[i]);
        }
    }
    if px.len() < 2 {
        return false;
    }
    let (px, pr) = if px.len() >= 4 { (top_half(&px), top_half(&pr)) } else { (&px[..], &pr[..]) };
    least_squares_slope(px, pr) <= SUBEXP_SLOPE
}

/// Applies `ln` until the sequence passes the ratio test, then reports the
/// log-log slope over the top half of the rows.
pub fn fit_growth(table: &GrowthTable) -> Result<GrowthFit, DistortionError> {
    if table.rows.len() < MIN_ROWS {
        return Err(DistortionError::TooFewRows {
            need: MIN_ROWS,
            got: table.rows.len(),
        });
    }
    let mut rows: Vec<&GrowthRow> = table.rows.iter().filter(|r| r.x > 0).collect();
    rows.sort_by_key(|r| r.x);
    let mut xs: Vec<f64> = rows.iter().map(|r| r.x as f64).collect();
    let mut seq: Vec<f64> = rows.iter().map(|r| r.kernel_length as f64).collect();
    let raw_xs = xs.clone();
    let raw_ln: Vec<f64> = seq.iter().map(|y| y.max(f64::MIN_POSITIVE).ln()).collect();
    let mut depth = 0;
    loop {
        let keep: Vec<usize> = (0..seq.len()).filter(|&i| seq[i] > 0.0).collect();
        if keep.len() < MIN_ROWS / 2 {
            return Err(DistortionError::Degenerate { depth });
        }
        xs = keep.iter().map(|&i| xs[i]).collect();
        seq = keep.iter().map(|&i| seq[i]).collect();
        if depth == MAX_DEPTH || is_subexponential(&xs, &seq) {
            break;
        }
        seq = seq.iter().map(|y| y.ln()).collect();
        depth += 1;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = seq.iter().map(|y| y.ln()).collect();
    let slope = least_squares_slope(top_half(&lx), top_half(&ly));
    let exp_base = (depth == 1).then(|| least_squares_slope(top_half(&raw_xs), top_half(&raw_ln)).exp());
    Ok(GrowthFit {
        table: table.name.clone(),
        label: REPORT_LABEL.to_string(),
        depth,
        slope,
        poly_degree: (depth == 0).then_some(slope),
        exp_base,
        rows_used: xs.len(),
        thresholds: FitThresholds::default(),
    })
}

// ---------------------------------------------------------------------------
// Exact lengths of iterated images without expanding them

type Letter = (u32, i8);

/// Tracks `Ψ(x)` for every kernel generator `x` as `Ψ` is composed with more
/// automorphisms on the right.
#[derive(Debug, Clone)]
pub struct CompressedImages {
    arena: Arena,
    images: Vec<View>,
}

impl CompressedImages {
    pub fn identity(rank: usize) -> Self {
        let mut arena = Arena::new();
        let images = (0..rank as u32).map(|g| arena.letter(g, 1)).collect();
        CompressedImages { arena, images }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn node_count(&self) -> usize {
        self.arena.node_count()
    }

    fn image_of(&mut self, w: &FreeWord) -> Result<View, DistortionError> {
        let parts: Vec<View> = w
            .letters()
            .map(|(g, s)| {
                let v = self.images[g as usize];
                if s > 0 {
                    v
                } else {
                    v.inverse()
                }
            })
            .collect();
        self.arena.join_all(&parts).map_err(|_| DistortionError::Overflow)
    }

    fn block(&self, (g, s): Letter) -> View {
        let v = self.images[g as usize];
        if s > 0 {
            v
        } else {
            v.inverse()
        }
    }

    /// `Ψ ← Ψ ∘ φ`, with `images[x] = φ(x)`.
    ///
    /// Each image is reduced with a stack of partly cancelled blocks
    /// `Ψ(letter)[left .. len - right]`; the cancellation between two stack
    /// entries depends only on their letters and cuts and is cached.
    pub fn compose_right(&mut self, images: &[FreeWord]) -> Result<(), DistortionError> {
        let mut cancel: HashMap<(Letter, u128, Letter, u128), u128> = HashMap::new();
        let mut next = Vec::with_capacity(images.len());
        for w in images {
            // (letter, cut on the left, cut on the right)
            let mut stack: Vec<(Letter, u128, u128)> = Vec::new();
            for l in w.letters() {
                let len_b = self.arena.len(self.block(l));
                let mut left = 0u128;
                while let Some(&(a, al, ar)) = stack.last() {
                    let key = (a, ar, l, left);
                    let c = match cancel.get(&key) {
                        Some(&c) => c,
                        None => {
                            let c = self.arena.lcp_at(self.block(a).inverse(), ar, self.block(l), left);
                            cancel.insert(key, c);
                            c
                        }
                    };
                    let len_a = self.arena.len(self.block(a)) - al - ar;
                    let c = c.min(len_a);
                    left += c;
                    if c == len_a {
                        stack.pop();
                        if left == len_b {
                            break;
                        }
                    } else {
                        stack.last_mut().unwrap().2 += c;
                        break;
                    }
                }
                if left < len_b {
                    stack.push((l, left, 0));
                }
            }
            let mut parts = Vec::with_capacity(stack.len());
            for &(a, al, ar) in &stack {
                let b = self.block(a);
                let len = self.arena.len(b) - al - ar;
                parts.push(self.arena.slice(b, al, len).map_err(|_| DistortionError::Overflow)?);
            }
            next.push(self.arena.concat_all(&parts).map_err(|_| DistortionError::Overflow)?);
        }
        self.images = next;
        Ok(())
    }

    /// Exact reduced length of `Ψ(w)`.
    pub fn length_of(&mut self, w: &FreeWord) -> Result<u128, DistortionError> {
        w.check_rank(self.rank())?;
        let v = self.image_of(w)?;
        Ok(self.arena.len(v))
    }

    pub fn expand(&mut self, w: &FreeWord) -> Result<FreeWord, DistortionError> {
        let v = self.image_of(w)?;
        Ok(self.arena.expand(v))
    }
}

fn step_images(action: &MonodromyAction, (g, s): Letter) -> &[FreeWord] {
    let a: &FreeAutomorphism = &action.auts[g as usize];
    if s > 0 {
        a.images()
    } else {
        a.inverse_images()
    }
}

/// Exact `|Φ(g)(b)|`; `Φ(g)` applies the letters of `g` right to left.
pub fn conjugate_length(action: &MonodromyAction, g: &FreeWord, b: &FreeWord) -> Result<u128, DistortionError> {
    g.check_rank(action.base_rank())?;
    let mut psi = CompressedImages::identity(action.kernel_rank());
    for l in g.letters() {
        psi.compose_right(step_images(action, l))?;
    }
    psi.length_of(b)
}

// ---------------------------------------------------------------------------
// Witness families

/// A reduced word of exactly `len` letters.
pub fn random_reduced_word(rng: &mut ChaCha8Rng, rank: usize, len: usize) -> FreeWord {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
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

/// `|Φ(g[..m])(b)|` for each prefix length `m` in `marks` (ascending).
pub fn prefix_lengths(action: &MonodromyAction, g: &FreeWord, b: &FreeWord, marks: &[usize]) -> Result<Vec<u128>, DistortionError> {
    g.check_rank(action.base_rank())?;
    let letters: Vec<Letter> = g.letters().collect();
    let mut psi = CompressedImages::identity(action.kernel_rank());
    let mut out = Vec::with_capacity(marks.len());
    let mut done = 0;
    for &m in marks {
        if m > letters.len() || m < done {
            return Err(DistortionError::BadIndex(format!("prefix {m} of a {}-letter word", letters.len())));
        }
        for &l in &letters[done..m] {
            psi.compose_right(step_images(action, l))?;
        }
        done = m;
        out.push(psi.length_of(b)?);
    }
    Ok(out)
}

/// Rows `x = |g|` for `x = 1..=xmax`: the least `|Φ(g)(b)|` over `samples`
/// random reduced `g` of length `xmax`, read through their length-`x`
/// prefixes.
pub fn hyperbolic_step_table(
    action: &MonodromyAction,
    b: &FreeWord,
    xmax: usize,
    samples: usize,
    seed: u64,
) -> Result<GrowthTable, DistortionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words: Vec<FreeWord> = (0..samples.max(1))
        .map(|_| random_reduced_word(&mut rng, action.base_rank(), xmax))
        .collect();
    words.sort();
    words.dedup();
    let marks: Vec<usize> = (1..=xmax).collect();
    let per_sample = words
        .par_iter()
        .map(|g| prefix_lengths(action, g, b, &marks))
        .collect::<Result<Vec<_>, DistortionError>>()?;
    let rows = marks
        .iter()
        .enumerate()
        .map(|(i, &x)| GrowthRow {
            x: x as u64,
            kernel_length: per_sample.iter().map(|v| v[i]).min().unwrap(),
            ambient_budget: (2 * x) as u128 + b.len() as u128,
        })
        .collect();
    Ok(GrowthTable::new("hyperbolic-step", rows))
}

/// One element of `g_1, g_2 = Φ_1(g_1)(b_2), …` with its ambient budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStep {
    pub word: FreeWord,
    pub length: u64,
    pub budget: u128,
}

#[derive(Debug, Clone)]
pub struct ChainLink {
    pub action: MonodromyAction,
    pub letter: FreeWord,
}

/// `g_1` followed by `g_{i+1} = Φ_i(g_i)(b_{i+1})`; the budget of `g_{i+1}`
/// is `3^i` times that of `g_1`.
pub fn witness_sequence(g1: &FreeWord, budget: u128, chain: &[ChainLink], cap: u64) -> Result<Vec<WitnessStep>, DistortionError> {
    let mut out = vec![WitnessStep {
        word: g1.clone(),
        length: g1.len(),
        budget,
    }];
    let mut b = budget;
    for link in chain {
        let prev = &out.last().unwrap().word;
        let next = link.action.act(prev, &link.letter, cap)?;
        b = b.checked_mul(3).ok_or(DistortionError::Overflow)?;
        out.push(WitnessStep {
            length: next.len(),
            word: next,
            budget: b,
        });
    }
    Ok(out)
}

/// Two-stage table: `g_1` is the Example-1 witness in `F_k` for `n = x`,
/// read in the base alphabet of `action`, and the row records `|Φ(g_1)(b)|`.
pub fn chained_table(k: usize, action: &MonodromyAction, b: &FreeWord, nmax: usize) -> Result<ChainedTable, DistortionError> {
    if action.base_rank() != k {
        return Err(WordError::AlphabetMismatch {
            gen: k as u32,
            rank: action.base_rank(),
        }
        .into());
    }
    let words = (1..=nmax).map(|n| example1_witness_word(k, n)).collect::<Result<Vec<_>, _>>()?;
    let longest: Vec<Letter> = words.last().map(|w| w.letters().collect()).unwrap_or_default();
    let nested = words
        .iter()
        .all(|w| w.letters().zip(&longest).all(|(x, &y)| x == y));
    let lengths: Vec<u128> = if nested && !words.is_empty() {
        let marks: Vec<usize> = words.iter().map(|w| w.len() as usize).collect();
        prefix_lengths(action, words.last().unwrap(), b, &marks)?
    } else {
        words
            .par_iter()
            .map(|g| conjugate_length(action, g, b))
            .collect::<Result<_, _>>()?
    };
    let rows = words
        .par_iter()
        .zip(&lengths)
        .enumerate()
        .map(|(i, (g1, &len))| {
            let n = i + 1;
            let explicit = if len <= DEFAULT_LETTER_CAP as u128 {
                Some(action.act(g1, b, DEFAULT_LETTER_CAP)?.len() as u128 == len)
            } else {
                None
            };
            Ok((
                ChainedRow {
                    n: n as u64,
                    base_length: g1.len(),
                    explicit_agrees: explicit,
                },
                GrowthRow {
                    x: n as u64,
                    kernel_length: len,
                    ambient_budget: 9 * n as u128,
                },
            ))
        })
        .collect::<Result<Vec<_>, DistortionError>>()?;
    let (details, rows): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    Ok(ChainedTable {
        table: GrowthTable::new(&format!("chain-example1-k{k}"), rows),
        details,
        letter_length: b.len(),
        max_letter_image: max_letter_image(action),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainedRow {
    pub n: u64,
    pub base_length: u64,
    /// Whether the materialized word agrees, when it fits under the cap.
    pub explicit_agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainedTable {
    pub table: GrowthTable,
    pub details: Vec<ChainedRow>,
    pub letter_length: u64,
    pub max_letter_image: u64,
}

/// Longest image of a single letter under any `Φ_j^{±1}`.
pub fn max_letter_image(action: &MonodromyAction) -> u64 {
    action
        .auts
        .iter()
        .flat_map(|a| a.images().iter().chain(a.inverse_images()))
        .map(FreeWord::len)
        .max()
        .unwrap_or(1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperModelCheck {
    pub label: String,
    pub rows_checked: usize,
    pub violations: Vec<u64>,
    pub pass: bool,
}

/// `|g_2| ≤ |b| · L^{|g_1|}` on every row, compared in logarithms, where `L`
/// is the longest single-letter image.
pub fn upper_model_check(chained: &ChainedTable) -> UpperModelCheck {
    let ln_l = (chained.max_letter_image as f64).ln();
    let ln_b = (chained.letter_length as f64).ln();
    let violations: Vec<u64> = chained
        .table
        .rows
        .iter()
        .zip(&chained.details)
        .filter(|(r, d)| (r.kernel_length as f64).ln() > ln_b + d.base_length as f64 * ln_l + 1e-9)
        .map(|(r, _)| r.x)
        .collect();
    UpperModelCheck {
        label: REPORT_LABEL.to_string(),
        rows_checked: chained.table.rows.len(),
        pass: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(name: &str, f: impl Fn(f64) -> f64, xs: impl Iterator<Item = u64>) -> GrowthTable {
        let rows = xs
            .map(|x| GrowthRow {
                x,
                kernel_length: f(x as f64).round() as u128,
                ambient_budget: x as u128,
            })
            .collect();
        GrowthTable::new(name, rows)
    }

    #[test]
    fn example1_small_values() {
        assert_eq!(example1_lengths(3, 3, 2).unwrap(), 6);
        assert_eq!(example1_witness(2, 3).unwrap(), (12, 9));
        assert_eq!(example1_witness(4, 1).unwrap().0, 4);
        assert_eq!(example1_witness_word(2, 3).unwrap().len(), 12);
        assert!(example1_lengths(2, 3, 1).is_err());
    }

    #[test]
    fn fit_synthetic_models() {
        let cube = fit_growth(&synthetic("cube", |x| x.powi(3), 1..=40)).unwrap();
        assert_eq!(cube.depth, 0);
        assert!((cube.slope - 3.0).abs() < 0.1, "{cube:?}");
        let exp = fit_growth(&synthetic("exp", |x| 2f64.powf(x), 1..=40)).unwrap();
        assert_eq!(exp.depth, 1);
        assert!((exp.slope - 1.0).abs() < 0.1, "{exp:?}");
        assert!((exp.exp_base.unwrap() - 2.0).abs() < 1e-6);
        let flat = fit_growth(&synthetic("flat", |_| 1.0, 1..=10)).unwrap();
        assert_eq!(flat.depth, 0);
        assert!(fit_growth(&synthetic("short", |x| x, 1..=5)).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let t = example1_witness_table(2, 10).unwrap();
        let text = t.to_csv().unwrap();
        assert!(text.starts_with("x,kernel_length,ambient_budget\n"));
        assert_eq!(GrowthTable::from_csv(&t.name, &text).unwrap(), t);
    }

    #[test]
    fn compressed_matches_explicit() {
        let phi = example1_monodromy(3);
        let action = MonodromyAction::cyclic(phi.clone(), "x", "t");
        for n in 0..40i64 {
            for s in [1, -1] {
                let g = FreeWord::gen_pow(0, s * n);
                let b = FreeWord::from_runs([(2, 1), (0, -1), (1, 2)]);
                let exact = action.act(&g, &b, DEFAULT_LETTER_CAP).unwrap().len() as u128;
                assert_eq!(conjugate_length(&action, &g, &b).unwrap(), exact, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn chain_of_length_zero_is_identity() {
        let g = FreeWord::from_runs([(0, 2)]);
        let s = witness_sequence(&g, 6, &[], DEFAULT_LETTER_CAP).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].word, g);
    }
}
