use proptest::prelude::*;

use curvchain::complex::{amalgamate, text, validate, CellIso};
use curvchain::covering::build_branched_cover;
use curvchain::distortion::{fit_growth, GrowthRow, GrowthTable};
use curvchain::group::compressed::Arena;
use curvchain::group::dyadic::DyadicAffine;
use curvchain::group::{example1_monodromy, FreeWord, MonodromyAction, SemidirectElement, DEFAULT_LETTER_CAP};
use curvchain::spine::build_spine;
use curvchain::templates::{build_gamma_diagonal, build_xk};

fn letters(rank: u32, max: usize) -> impl Strategy<Value = Vec<(u32, i8)>> {
    prop::collection::vec((0..rank, prop::bool::ANY).prop_map(|(g, p)| (g, if p { 1 } else { -1 })), 0..max)
}

fn word(rank: u32, max: usize) -> impl Strategy<Value = FreeWord> {
    letters(rank, max).prop_map(FreeWord::from_letters)
}

/// Free reduction by a plain stack.
fn stack_reduce(ls: &[(u32, i8)]) -> Vec<(u32, i8)> {
    let mut out: Vec<(u32, i8)> = Vec::new();
    for &(g, s) in ls {
        if out.last() == Some(&(g, -s)) {
            out.pop();
        } else {
            out.push((g, s));
        }
    }
    out
}

fn gamma3() -> MonodromyAction {
    MonodromyAction::cyclic(example1_monodromy(3), "x", "t")
}

fn element(max: usize) -> impl Strategy<Value = SemidirectElement> {
    (word(3, max), prop::collection::vec(prop::bool::ANY, 0..4)).prop_map(|(kernel, b)| SemidirectElement {
        kernel,
        base: FreeWord::from_letters(b.into_iter().map(|p| (0, if p { 1 } else { -1 }))),
    })
}

proptest! {
    #[test]
    fn reduction_matches_stack(ls in letters(3, 40)) {
        let w = FreeWord::from_letters(ls.iter().copied());
        prop_assert_eq!(w.letters().collect::<Vec<_>>(), stack_reduce(&ls));
    }

    #[test]
    fn reduction_is_confluent(a in letters(3, 30), b in letters(3, 30)) {
        let joined: Vec<_> = a.iter().chain(&b).copied().collect();
        let lhs = FreeWord::from_letters(a.iter().copied()).mul(&FreeWord::from_letters(b.iter().copied()));
        prop_assert_eq!(lhs, FreeWord::from_letters(joined));
    }

    #[test]
    fn inverse_cancels(w in word(4, 30)) {
        prop_assert!(w.mul(&w.inverse()).is_identity());
        prop_assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn automorphism_is_a_homomorphism(u in word(3, 12), v in word(3, 12)) {
        let phi = example1_monodromy(3);
        let lhs = phi.apply(&u.mul(&v), DEFAULT_LETTER_CAP).unwrap();
        let rhs = phi.apply(&u, DEFAULT_LETTER_CAP).unwrap().mul(&phi.apply(&v, DEFAULT_LETTER_CAP).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(phi.apply_inverse(&phi.apply(&u, DEFAULT_LETTER_CAP).unwrap(), DEFAULT_LETTER_CAP).unwrap(), u);
    }

    #[test]
    fn semidirect_product_is_associative(x in element(6), y in element(6), z in element(6)) {
        let a = gamma3();
        let cap = DEFAULT_LETTER_CAP;
        let l = a.mul(&a.mul(&x, &y, cap).unwrap(), &z, cap).unwrap();
        let r = a.mul(&x, &a.mul(&y, &z, cap).unwrap(), cap).unwrap();
        prop_assert_eq!(l, r);
        let xi = a.inverse(&x, cap).unwrap();
        prop_assert!(a.mul(&x, &xi, cap).unwrap().is_identity());
    }

    #[test]
    fn compressed_join_matches_explicit(a in word(3, 40), b in word(3, 40), c in word(3, 40)) {
        let mut arena = Arena::new();
        let (va, vb, vc) = (arena.from_word(&a), arena.from_word(&b), arena.from_word(&c));
        let ab = arena.join(va, vb).unwrap();
        let abc = arena.join(ab, vc.inverse()).unwrap();
        let expect = a.mul(&b).mul(&c.inverse());
        prop_assert_eq!(arena.len(abc), expect.len() as u128);
        prop_assert_eq!(arena.expand(abc), expect.clone());
        prop_assert_eq!(arena.expand(abc.inverse()), expect.inverse());
    }

    #[test]
    fn dyadic_composition_law(k1 in -5i64..5, k2 in -5i64..5, k3 in -5i64..5, b in -20i64..20) {
        let f = DyadicAffine::t();
        let g = DyadicAffine::a();
        let pow = |m: &DyadicAffine, n: i64| {
            let step = if n < 0 { m.inverse() } else { m.clone() };
            (0..n.abs()).fold(DyadicAffine::identity(), |acc, _| acc.compose(&step))
        };
        let x = pow(&f, k1).compose(&pow(&g, b));
        let y = pow(&f, k2);
        let z = pow(&g, k3).compose(&pow(&f, k1));
        prop_assert_eq!(x.compose(&y).compose(&z), x.compose(&y.compose(&z)));
        prop_assert!(x.compose(&x.inverse()).is_identity());
        prop_assert_eq!(x.compose(&y).scale, x.scale + y.scale);
    }

    #[test]
    fn polynomial_tables_fit_at_depth_zero(d in 1u32..4, c in 1u64..20) {
        let rows = (1..=64u64)
            .map(|x| GrowthRow { x, kernel_length: (c * x.pow(d)) as u128, ambient_budget: x as u128 })
            .collect();
        let f = fit_growth(&GrowthTable::new("poly", rows)).unwrap();
        prop_assert_eq!(f.depth, 0);
        prop_assert!((f.slope - d as f64).abs() < 0.05);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cover_is_deck_invariant(cochain in prop::collection::vec(-3i64..=3, 48), n in 2u64..7) {
        let x = build_xk(1);
        let spine = build_spine(&x);
        let cocycle: Vec<i64> = (0..spine.legs.len()).map(|i| cochain[i % cochain.len()]).collect();
        let Ok(cover) = build_branched_cover(&x, &spine, &cocycle, n) else {
            return Ok(());
        };
        let c = &cover.complex;
        let deg = n as usize;
        prop_assert_eq!(c.edges().len(), x.edges().len() * deg);
        prop_assert_eq!(c.faces().len(), x.faces().len() * deg);
        prop_assert!(validate(c).pass());
        for (fi, f) in c.faces().iter().enumerate() {
            let shifted = &c.faces()[fi - fi % deg + (fi % deg + 1) % deg];
            for (a, b) in f.boundary.iter().zip(&shifted.boundary) {
                prop_assert_eq!(b.edge, a.edge - a.edge % deg + (a.edge % deg + 1) % deg);
                prop_assert_eq!(a.forward, b.forward);
            }
            prop_assert_eq!(&f.angles, &shifted.angles);
        }
    }

    #[test]
    fn glueing_adds_euler_characteristics(k in 1usize..4, j in 1usize..4) {
        let a = build_gamma_diagonal(k);
        let b = build_gamma_diagonal(j).with_id_prefix("B.").unwrap();
        let m = k.min(j);
        let ids: Vec<(String, String)> = (1..=m).map(|i| (format!("x_{i}"), format!("B.x_{i}"))).collect();
        let pairs: Vec<(&str, &str)> = ids.iter().map(|(p, q)| (p.as_str(), q.as_str())).collect();
        let iso = CellIso::from_edge_pairs(&a, &b, &pairs).unwrap();
        let g = amalgamate(&a, &b, &iso).unwrap();
        prop_assert_eq!(
            g.euler_characteristic(),
            a.euler_characteristic() + b.euler_characteristic() - iso.euler_characteristic()
        );
        prop_assert!(validate(&g).pass());
    }

    #[test]
    fn complex_text_round_trips(k in 1usize..4) {
        for c in [build_xk(k), build_gamma_diagonal(k), build_gamma_diagonal(k).scaled_by_sqrt2()] {
            let t = text::emit(&c);
            let back = text::load(&t).unwrap();
            prop_assert_eq!(text::emit(&back), t);
            prop_assert!(back == c);
        }
    }
}
