//! Generators for the concrete complexes: the triangle template `X_k`, the
//! presentation complex of `Γ_k` (square or diagonally subdivided) and a few
//! small test shapes.

use num_rational::Ratio;

use crate::complex::{Angle, ComplexBuilder, Length, PE2Complex, ShapeTag};

pub const BASE_VERTEX: &str = "v";

pub fn a_id(i: usize) -> String {
    format!("a_{i}")
}

pub fn n_id(i: usize, j: usize) -> String {
    format!("n_{{{i},{j}}}")
}

pub fn p_id(i: usize, j: usize) -> String {
    format!("p_{{{i},{j}}}")
}

pub fn alpha_id(i: usize, j: usize) -> String {
    format!("alpha_{{{i},{j}}}")
}

pub fn beta_id(i: usize, j: usize) -> String {
    format!("beta_{{{i},{j}}}")
}

/// Indices `(s, t)` of the n- and p-edges sharing endpoints with the
/// octagon edges α_i, β_i: `n_s` is at the tail, `p_t` at the head.
pub fn octagon_ends(i: usize) -> (usize, usize) {
    assert!((1..=8).contains(&i));
    let m = i.div_ceil(2);
    if i % 2 == 1 {
        (m, m)
    } else {
        (m % 4 + 1, m)
    }
}

/// Horizontal edge opposite to α_i in the β triangle.
pub fn antipodal(i: usize) -> usize {
    (i + 3) % 8 + 1
}

/// The single-vertex complex `X_k`: 8k+8 edges and 16k equilateral triangles.
///
/// `alpha_{i,j}` has boundary `n_{s,j} · a_i · p_{t,j}⁻¹` and `beta_{i,j}`
/// has boundary `a_{i+4} · p_{t,j} · n_{s,j}⁻¹`, with `(s, t)` from
/// [`octagon_ends`].
pub fn build_xk(k: usize) -> PE2Complex {
    let mut b = ComplexBuilder::new();
    b.vertex(BASE_VERTEX).unwrap();
    let unit = Length::one();
    for i in 1..=8 {
        let id = a_id(i);
        b.edge(&id, BASE_VERTEX, BASE_VERTEX, unit, &id).unwrap();
    }
    for j in 1..=k {
        for i in 1..=4 {
            for id in [n_id(i, j), p_id(i, j)] {
                b.edge(&id, BASE_VERTEX, BASE_VERTEX, unit, &id).unwrap();
            }
        }
    }
    let corners = vec![Ratio::new(1, 3); 3];
    for j in 1..=k {
        for i in 1..=8 {
            let (s, t) = octagon_ends(i);
            let (n, p) = (n_id(s, j), p_id(t, j));
            b.face(
                &alpha_id(i, j),
                &[(&n, true), (&a_id(i), true), (&p, false)],
                corners.clone(),
                ShapeTag::EquilateralTriangle,
            )
            .unwrap();
            b.face(
                &beta_id(i, j),
                &[(&a_id(antipodal(i)), true), (&p, true), (&n, false)],
                corners.clone(),
                ShapeTag::EquilateralTriangle,
            )
            .unwrap();
        }
    }
    b.finish()
}

pub fn gamma_a_id(i: usize) -> String {
    format!("a_{i}")
}

pub fn gamma_x_id(i: usize) -> String {
    format!("x_{i}")
}

pub const GAMMA_T: &str = "t";

/// The square presentation complex of
/// `Γ_k = ⟨a_1..a_k, t | a_1 t a_1⁻¹ t⁻¹, a_i a_{i-1} a_i⁻¹ t⁻¹⟩`.
pub fn build_gamma_squares(k: usize) -> PE2Complex {
    let mut b = gamma_one_skeleton(k, false);
    let quarter = vec![Ratio::new(1, 2); 4];
    for i in 1..=k {
        let prev = if i == 1 { GAMMA_T.to_string() } else { gamma_a_id(i - 1) };
        let a = gamma_a_id(i);
        b.face(
            &format!("r_{i}"),
            &[(&a, true), (&prev, true), (&a, false), (GAMMA_T, false)],
            quarter.clone(),
            ShapeTag::UnitSquare,
        )
        .unwrap();
    }
    b.finish()
}

/// `Γ_k` with every square cut along its diagonal `x_i` (length √2) into two
/// right isosceles triangles. The diagonals form the kernel rose.
pub fn build_gamma_diagonal(k: usize) -> PE2Complex {
    let mut b = gamma_one_skeleton(k, true);
    let corners: Vec<Angle> = vec![Ratio::new(1, 4), Ratio::new(1, 2), Ratio::new(1, 4)];
    for i in 1..=k {
        let prev = if i == 1 { GAMMA_T.to_string() } else { gamma_a_id(i - 1) };
        let a = gamma_a_id(i);
        let x = gamma_x_id(i);
        b.face(
            &format!("r_{i}^u"),
            &[(&prev, true), (&a, false), (&x, false)],
            corners.clone(),
            ShapeTag::GeneralConvexPolygon,
        )
        .unwrap();
        b.face(
            &format!("r_{i}^l"),
            &[(GAMMA_T, false), (&a, true), (&x, true)],
            corners.clone(),
            ShapeTag::GeneralConvexPolygon,
        )
        .unwrap();
    }
    b.finish()
}

fn gamma_one_skeleton(k: usize, diagonals: bool) -> ComplexBuilder {
    let mut b = ComplexBuilder::new();
    b.vertex(BASE_VERTEX).unwrap();
    for i in 1..=k {
        let id = gamma_a_id(i);
        b.edge(&id, BASE_VERTEX, BASE_VERTEX, Length::one(), &id).unwrap();
    }
    b.edge(GAMMA_T, BASE_VERTEX, BASE_VERTEX, Length::one(), GAMMA_T)
        .unwrap();
    if diagonals {
        for i in 1..=k {
            let id = gamma_x_id(i);
            b.edge(&id, BASE_VERTEX, BASE_VERTEX, Length::sqrt2(), &id).unwrap();
        }
    }
    b
}

/// Two equilateral triangles glued along their whole boundary.
pub fn pillow() -> PE2Complex {
    let mut b = ComplexBuilder::new();
    for v in ["u", "v", "w"] {
        b.vertex(v).unwrap();
    }
    b.edge("e_uv", "u", "v", Length::one(), "e_uv").unwrap();
    b.edge("e_vw", "v", "w", Length::one(), "e_vw").unwrap();
    b.edge("e_wu", "w", "u", Length::one(), "e_wu").unwrap();
    let corners = vec![Ratio::new(1, 3); 3];
    b.face(
        "top",
        &[("e_uv", true), ("e_vw", true), ("e_wu", true)],
        corners.clone(),
        ShapeTag::EquilateralTriangle,
    )
    .unwrap();
    b.face(
        "bottom",
        &[("e_wu", false), ("e_vw", false), ("e_uv", false)],
        corners,
        ShapeTag::EquilateralTriangle,
    )
    .unwrap();
    b.finish()
}

/// A single equilateral triangle with all three corners at one vertex.
pub fn one_vertex_triangle() -> PE2Complex {
    let mut b = ComplexBuilder::new();
    b.vertex(BASE_VERTEX).unwrap();
    for e in ["x", "y", "z"] {
        b.edge(e, BASE_VERTEX, BASE_VERTEX, Length::one(), e).unwrap();
    }
    b.face(
        "f",
        &[("x", true), ("y", true), ("z", false)],
        vec![Ratio::new(1, 3); 3],
        ShapeTag::EquilateralTriangle,
    )
    .unwrap();
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::validate;

    #[test]
    fn octagon_pattern() {
        let ends: Vec<_> = (1..=8).map(octagon_ends).collect();
        assert_eq!(
            ends,
            vec![(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (4, 3), (4, 4), (1, 4)]
        );
        assert_eq!(antipodal(4), 8);
        assert_eq!(antipodal(5), 1);
    }

    #[test]
    fn xk_counts_and_validity() {
        for k in 1..=3 {
            let x = build_xk(k);
            let c = x.counts();
            assert_eq!((c.vertices, c.edges, c.faces), (1, 8 * k + 8, 16 * k));
            assert!(validate(&x).pass());
        }
        assert_eq!(build_xk(1).euler_characteristic(), 1);
    }

    #[test]
    fn gamma_complexes_validate() {
        for k in 1..=4 {
            assert!(validate(&build_gamma_squares(k)).pass());
            let d = build_gamma_diagonal(k);
            assert!(validate(&d).pass());
            assert_eq!(d.euler_characteristic(), 1 - (2 * k as i64 + 1) + 2 * k as i64);
        }
        assert!(validate(&pillow()).pass());
    }
}
