use proptest::prelude::*;
use rcp_core::feasibility::{nontrivial_cone_subspace_element, ConeCondition};
use rcp_core::geometry::cone_inclusion;
use rcp_core::linalg::{self, Matrix, Vector};
use rcp_core::{IndexSet, Rational, Scalar, Simplex, Tolerances};

fn q(v: i64) -> Rational {
    Rational::from_i64(v)
}

fn simplex_strategy(n: usize) -> impl Strategy<Value = Simplex<Rational>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, n), n + 1).prop_filter_map("degenerate", |rows| {
        let vertices: Vec<Vector<Rational>> = rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
        Simplex::new(vertices, 0.0).ok()
    })
}

/// Barycentric weights in `0..=5`, not all zero.
fn weights(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..=5, n + 1).prop_filter("all zero", |w| w.iter().any(|&x| x > 0))
}

fn point(s: &Simplex<Rational>, w: &[i64]) -> Vector<Rational> {
    let total: i64 = w.iter().sum();
    let alpha: Vec<Rational> = w.iter().map(|&k| Rational::from_ratio(k, total)).collect();
    s.from_barycentric(&alpha)
}

fn support(w: &[i64]) -> IndexSet {
    IndexSet::from_iter(w.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, _)| i))
}

proptest! {
    #[test]
    fn barycentric_round_trip(s in simplex_strategy(3), w in weights(3)) {
        let x = point(&s, &w);
        let alpha = s.barycentric(&x);
        prop_assert_eq!(alpha.iter().cloned().fold(q(0), |a, b| a + b), q(1));
        prop_assert_eq!(s.from_barycentric(&alpha), x.clone());
        prop_assert_eq!(s.active_index_set(&x, 0.0).unwrap(), support(&w));
        prop_assert!(s.contains(&x, 0.0));
    }

    #[test]
    fn vertex_deletion(s in simplex_strategy(3), wx in weights(3), wy in weights(3)) {
        let (x, y) = (point(&s, &wx), point(&s, &wy));
        let mut ix = s.active_index_set(&x, 0.0).unwrap();
        ix.remove(0);
        let iy = s.active_index_set(&y, 0.0).unwrap();
        let (cx, cy) = (s.tangent_cone(&x, 0.0).unwrap(), s.tangent_cone(&y, 0.0).unwrap());
        prop_assert_eq!(ix.is_subset(iy), cone_inclusion(&cx, &cy));
    }

    #[test]
    fn cone_of_polytope_is_contained_in_every_point_cone(
        s in simplex_strategy(3),
        ws in prop::collection::vec(weights(3), 1..4),
        mix in prop::collection::vec(1i64..=4, 3),
    ) {
        let vertices: Vec<Vector<Rational>> = ws.iter().map(|w| point(&s, w)).collect();
        let cone = s.cone_of_polytope(&vertices, 0.0).unwrap();
        for v in &vertices {
            prop_assert!(cone_inclusion(&cone, &s.tangent_cone(v, 0.0).unwrap()));
        }
        let total: i64 = mix[..vertices.len()].iter().sum();
        let lambda: Vec<Rational> = mix[..vertices.len()].iter().map(|&k| Rational::from_ratio(k, total)).collect();
        let inner = linalg::combine(&lambda, &vertices);
        prop_assert!(cone_inclusion(&cone, &s.tangent_cone(&inner, 0.0).unwrap()));
        let union = vertices
            .iter()
            .map(|v| s.tangent_cone(v, 0.0).unwrap().constraints())
            .fold(IndexSet::empty(), IndexSet::union);
        prop_assert_eq!(cone.constraints(), union);
    }

    #[test]
    fn cone_witness_is_a_nonzero_cone_element_in_the_span(
        s in simplex_strategy(3),
        mask in 1u8..8,
        basis in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 1..=3),
    ) {
        let constraints = IndexSet::from_iter((1..=3).filter(|j| mask & (1 << (j - 1)) != 0));
        let cone = s.cone_with_constraints(constraints);
        let basis: Vec<Vector<Rational>> = basis.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
        let tol = Tolerances::default();
        if let ConeCondition::Satisfied(w) = nontrivial_cone_subspace_element(&cone, &basis, &tol).unwrap() {
            prop_assert!(!linalg::is_zero_vector(&w.vector));
            prop_assert!(cone.contains(&w.vector, 0.0));
            let span = Matrix::from_columns(&basis, 3);
            let mut stacked = basis.clone();
            stacked.push(w.vector.clone());
            prop_assert_eq!(
                linalg::rank(&Matrix::from_columns(&stacked, 3), 0.0),
                linalg::rank(&span, 0.0)
            );
        }
    }

    #[test]
    fn rational_render_parses_back(num in -10_000i64..10_000, den in 1i64..10_000) {
        let x = Rational::from_ratio(num, den);
        prop_assert_eq!(Rational::parse(&x.render()), Some(x));
    }

    #[test]
    fn float_render_parses_back(x in prop::num::f64::NORMAL) {
        prop_assert_eq!(f64::parse(&x.render()), Some(x));
    }
}

#[test]
fn dependent_spanning_set_gives_a_nonzero_witness() {
    let vertices: Vec<Vector<Rational>> = [[-2, -6, -3], [0, 1, 0], [0, 0, 0], [-1, 0, 0]]
        .iter()
        .map(|r| r.iter().map(|&v| q(v)).collect())
        .collect();
    let s = Simplex::new(vertices, 0.0).unwrap();
    let cone = s.cone_with_constraints(IndexSet::range(1, 3));
    let basis: Vec<Vector<Rational>> = [[-1, 0, 3], [-4, 3, 0], [0, 1, -4]]
        .iter()
        .map(|r| r.iter().map(|&v| q(v)).collect())
        .collect();
    let tol = Tolerances::default();
    let spanning = nontrivial_cone_subspace_element(&cone, &basis, &tol).unwrap();
    let independent = nontrivial_cone_subspace_element(&cone, &basis[..2], &tol).unwrap();
    assert_eq!(spanning.holds(), independent.holds());
    if let ConeCondition::Satisfied(w) = spanning {
        assert!(!linalg::is_zero_vector(&w.vector));
        assert!(cone.contains(&w.vector, 0.0));
        assert_eq!(linalg::combine(&w.basis_coords, &basis), w.vector);
    }
}
