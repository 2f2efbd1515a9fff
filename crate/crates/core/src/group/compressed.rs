//! Reduced free-group words held as a DAG of concatenations, with polynomial
//! fingerprints for longest-common-prefix queries. Prefixes and suffixes are
//! built by copying one root-to-leaf path, so depth never grows from cutting.
//!
//! Equality of fingerprints is taken as equality of words. Two independent
//! moduli-`2^61 - 1` hashes with fixed bases are used.

use std::collections::HashMap;

use super::word::FreeWord;

const MOD: u64 = (1 << 61) - 1;
const BASES: [u64; 2] = [0x1F2E_3D4C_5B6A_7988 % MOD, 0x0A1B_2C3D_4E5F_6071 % MOD];

fn mulmod(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let lo = (p as u64) & MOD;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    if s >= MOD {
        s - MOD
    } else {
        s
    }
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MOD {
        s - MOD
    } else {
        s
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

type Fp = [u64; 2];

fn letter_key(g: u32, s: i8) -> Fp {
    let code = 2 * g as u64 + u64::from(s < 0);
    [0, 1].map(|i| splitmix(code.wrapping_mul(2).wrapping_add(i)) % (MOD - 1) + 1)
}

/// `h1 · B^{|y|} + h2`.
fn combine(h1: Fp, pw2: Fp, h2: Fp) -> Fp {
    [0, 1].map(|i| addmod(mulmod(h1[i], pw2[i]), h2[i]))
}

fn mul_fp(a: Fp, b: Fp) -> Fp {
    [0, 1].map(|i| mulmod(a[i], b[i]))
}

/// A node read forwards or as its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct View {
    node: u32,
    inv: bool,
}

impl View {
    pub fn inverse(self) -> View {
        View {
            node: self.node,
            inv: !self.inv,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Empty,
    Leaf(u32, i8),
    Concat(View, View),
}

#[derive(Debug, Clone)]
struct Node {
    kind: Kind,
    len: u128,
    h: Fp,
    hinv: Fp,
    pw: Fp,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("compressed word length overflowed 128 bits")]
pub struct LengthOverflow;

#[derive(Debug, Clone)]
pub struct Arena {
    nodes: Vec<Node>,
    leaves: HashMap<(u32, i8), u32>,
}

impl Default for Arena {
    fn default() -> Self {
        Arena::new()
    }
}

impl Arena {
    pub fn new() -> Self {
        Arena {
            nodes: vec![Node {
                kind: Kind::Empty,
                len: 0,
                h: [0, 0],
                hinv: [0, 0],
                pw: [1, 1],
            }],
            leaves: HashMap::new(),
        }
    }

    pub fn empty(&self) -> View {
        View { node: 0, inv: false }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn len(&self, v: View) -> u128 {
        self.nodes[v.node as usize].len
    }

    pub fn is_empty(&self, v: View) -> bool {
        self.len(v) == 0
    }

    fn hash(&self, v: View) -> Fp {
        let n = &self.nodes[v.node as usize];
        if v.inv {
            n.hinv
        } else {
            n.h
        }
    }

    fn pw(&self, v: View) -> Fp {
        self.nodes[v.node as usize].pw
    }

    fn push(&mut self, node: Node) -> View {
        self.nodes.push(node);
        View {
            node: self.nodes.len() as u32 - 1,
            inv: false,
        }
    }

    pub fn letter(&mut self, g: u32, s: i8) -> View {
        if let Some(&n) = self.leaves.get(&(g, s)) {
            return View { node: n, inv: false };
        }
        let v = self.push(Node {
            kind: Kind::Leaf(g, s),
            len: 1,
            h: letter_key(g, s),
            hinv: letter_key(g, -s),
            pw: BASES,
        });
        self.leaves.insert((g, s), v.node);
        v
    }

    pub fn from_word(&mut self, w: &FreeWord) -> View {
        let letters: Vec<View> = w.letters().map(|(g, s)| self.letter(g, s)).collect();
        self.concat_all(&letters).expect("short word")
    }

    /// Children of a concatenation as seen through `v`.
    fn children(&self, v: View) -> Option<(View, View)> {
        match self.nodes[v.node as usize].kind {
            Kind::Concat(a, b) if !v.inv => Some((a, b)),
            Kind::Concat(a, b) => Some((b.inverse(), a.inverse())),
            _ => None,
        }
    }

    /// Fingerprint and `B^l` of `v[s .. s + l]`.
    fn sub_hash(&self, v: View, s: u128, l: u128) -> (Fp, Fp) {
        if l == 0 {
            return ([0, 0], [1, 1]);
        }
        if s == 0 && l == self.len(v) {
            return (self.hash(v), self.pw(v));
        }
        if let Some((x, y)) = self.children(v) {
            let lx = self.len(x);
            if s + l <= lx {
                self.sub_hash(x, s, l)
            } else if s >= lx {
                self.sub_hash(y, s - lx, l)
            } else {
                let (h1, p1) = self.sub_hash(x, s, lx - s);
                let (h2, p2) = self.sub_hash(y, 0, l - (lx - s));
                (combine(h1, p2, h2), mul_fp(p1, p2))
            }
        } else {
            unreachable!("leaf queried below its length")
        }
    }

    pub fn letter_at(&self, mut v: View, mut i: u128) -> (u32, i8) {
        loop {
            match self.nodes[v.node as usize].kind {
                Kind::Leaf(g, s) => return (g, if v.inv { -s } else { s }),
                Kind::Empty => panic!("index into empty word"),
                Kind::Concat(..) => {
                    let (x, y) = self.children(v).unwrap();
                    let lx = self.len(x);
                    if i < lx {
                        v = x;
                    } else {
                        v = y;
                        i -= lx;
                    }
                }
            }
        }
    }

    pub fn concat(&mut self, x: View, y: View) -> Result<View, LengthOverflow> {
        if self.is_empty(x) {
            return Ok(y);
        }
        if self.is_empty(y) {
            return Ok(x);
        }
        let len = self.len(x).checked_add(self.len(y)).ok_or(LengthOverflow)?;
        let h = combine(self.hash(x), self.pw(y), self.hash(y));
        let hinv = combine(self.hash(y.inverse()), self.pw(x), self.hash(x.inverse()));
        let pw = mul_fp(self.pw(x), self.pw(y));
        Ok(self.push(Node {
            kind: Kind::Concat(x, y),
            len,
            h,
            hinv,
            pw,
        }))
    }

    /// The first `l` letters of `v`.
    pub fn prefix(&mut self, v: View, l: u128) -> Result<View, LengthOverflow> {
        if l == 0 {
            return Ok(self.empty());
        }
        if l == self.len(v) {
            return Ok(v);
        }
        let (x, y) = self.children(v).expect("proper prefix of a letter");
        let lx = self.len(x);
        if l <= lx {
            self.prefix(x, l)
        } else {
            let tail = self.prefix(y, l - lx)?;
            self.concat(x, tail)
        }
    }

    /// The last `l` letters of `v`.
    pub fn suffix(&mut self, v: View, l: u128) -> Result<View, LengthOverflow> {
        if l == 0 {
            return Ok(self.empty());
        }
        if l == self.len(v) {
            return Ok(v);
        }
        let (x, y) = self.children(v).expect("proper suffix of a letter");
        let ly = self.len(y);
        if l <= ly {
            self.suffix(y, l)
        } else {
            let head = self.suffix(x, l - ly)?;
            self.concat(head, y)
        }
    }

    /// `v[s .. s + l]`.
    pub fn slice(&mut self, v: View, s: u128, l: u128) -> Result<View, LengthOverflow> {
        let rest = self.suffix(v, self.len(v) - s)?;
        self.prefix(rest, l)
    }

    fn prefix_eq(&self, x: View, xs: u128, y: View, ys: u128, c: u128) -> bool {
        self.sub_hash(x, xs, c).0 == self.sub_hash(y, ys, c).0
    }

    /// Length of the longest common prefix.
    pub fn lcp(&self, x: View, y: View) -> u128 {
        self.lcp_at(x, 0, y, 0)
    }

    /// Length of the longest common prefix of `x[xs..]` and `y[ys..]`.
    pub fn lcp_at(&self, x: View, xs: u128, y: View, ys: u128) -> u128 {
        let m = (self.len(x) - xs).min(self.len(y) - ys);
        if m == 0 || self.letter_at(x, xs) != self.letter_at(y, ys) {
            return 0;
        }
        let mut lo = 1u128;
        let mut hi;
        loop {
            let probe = lo.saturating_mul(2).min(m);
            if probe == lo {
                return lo;
            }
            if self.prefix_eq(x, xs, y, ys, probe) {
                lo = probe;
            } else {
                hi = probe;
                break;
            }
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.prefix_eq(x, xs, y, ys, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// The reduced form of `x · y` for reduced `x`, `y`.
    pub fn join(&mut self, x: View, y: View) -> Result<View, LengthOverflow> {
        let c = self.lcp(x.inverse(), y);
        let (lx, ly) = (self.len(x), self.len(y));
        let a = self.prefix(x, lx - c)?;
        let b = self.suffix(y, ly - c)?;
        self.concat(a, b)
    }

    pub fn concat_all(&mut self, parts: &[View]) -> Result<View, LengthOverflow> {
        match parts {
            [] => Ok(self.empty()),
            [v] => Ok(*v),
            _ => {
                let (l, r) = parts.split_at(parts.len() / 2);
                let a = self.concat_all(l)?;
                let b = self.concat_all(r)?;
                self.concat(a, b)
            }
        }
    }

    /// Reduced product of reduced words, joined as a balanced tree.
    pub fn join_all(&mut self, parts: &[View]) -> Result<View, LengthOverflow> {
        match parts {
            [] => Ok(self.empty()),
            [v] => Ok(*v),
            _ => {
                let (l, r) = parts.split_at(parts.len() / 2);
                let a = self.join_all(l)?;
                let b = self.join_all(r)?;
                self.join(a, b)
            }
        }
    }

    /// Expands `v` into an ordinary word.
    pub fn expand(&self, v: View) -> FreeWord {
        let n = self.len(v);
        FreeWord::from_letters((0..n).map(|i| self.letter_at(v, i)))
    }
}
