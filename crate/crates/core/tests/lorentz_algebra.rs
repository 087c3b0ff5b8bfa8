use bk_core::lorentz::{causal_character_scaled, DEFAULT_CAUSAL_TOL};
use bk_core::*;
use nalgebra::Matrix4;
use proptest::prelude::*;

fn vec4() -> impl Strategy<Value = Vec4> {
    prop::array::uniform4(-1.0f64..1.0).prop_map(Vec4)
}

fn nalgebra_det(a: &Vec4, b: &Vec4, c: &Vec4, d: &Vec4) -> f64 {
    Matrix4::from_row_slice(&[a.0, b.0, c.0, d.0].concat()).determinant()
}

proptest! {
    #[test]
    fn wedge_pairs_to_determinant(a in vec4(), x in vec4(), y in vec4(), z in vec4()) {
        let lhs = minkowski_dot(&a, &wedge3(&x, &y, &z));
        prop_assert!((lhs - nalgebra_det(&a, &x, &y, &z)).abs() <= 1e-12);
        prop_assert!((lhs - det4(&a, &x, &y, &z)).abs() <= 1e-12);
    }

    #[test]
    fn wedge_is_alternating(x in vec4(), y in vec4(), z in vec4()) {
        let w = wedge3(&x, &y, &z);
        prop_assert_eq!(wedge3(&y, &x, &z), -w);
        prop_assert_eq!(wedge3(&x, &z, &y), -w);
        prop_assert_eq!(wedge3(&z, &y, &x), -w);
    }

    #[test]
    fn wedge_is_orthogonal_to_its_factors(x in vec4(), y in vec4(), z in vec4()) {
        let w = wedge3(&x, &y, &z);
        for v in [x, y, z] {
            prop_assert!(minkowski_dot(&v, &w).abs() <= 1e-14);
        }
    }

    #[test]
    fn dot_is_symmetric_and_bilinear(x in vec4(), y in vec4(), z in vec4(), s in -3.0f64..3.0) {
        prop_assert_eq!(minkowski_dot(&x, &y), minkowski_dot(&y, &x));
        let lhs = minkowski_dot(&(s * x + z), &y);
        let rhs = s * minkowski_dot(&x, &y) + minkowski_dot(&z, &y);
        prop_assert!((lhs - rhs).abs() <= 1e-13);
    }

    #[test]
    fn gram_schmidt_is_pseudo_orthonormal(
        t in 0.2f64..1.0,
        a in vec4(), b in vec4(), c in vec4(),
    ) {
        // a timelike leading vector keeps the remaining subspace spacelike
        let seed = [Vec4::new(2.0 + t, a[1] * 0.5, a[2] * 0.5, a[3] * 0.5), a, b, c];
        prop_assume!(nalgebra_det(&seed[0], &seed[1], &seed[2], &seed[3]).abs() > 1e-2);
        let f = signed_gram_schmidt(&seed, 1e-12).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { f.signs[i] } else { 0.0 };
                prop_assert!((minkowski_dot(&f.vectors[i], &f.vectors[j]) - want).abs() <= 1e-10);
            }
        }
        prop_assert_eq!(f.signs[0], -1.0);
    }
}

#[test]
fn spec_dot_examples() {
    assert_eq!(minkowski_dot(&Vec4::basis(0), &Vec4::basis(0)), -1.0);
    assert_eq!(minkowski_dot(&Vec4::basis(1), &Vec4::basis(2)), 0.0);
    assert_eq!(minkowski_dot(&Vec4::new(1.0, 2.0, 0.0, 0.0), &Vec4::new(3.0, 1.0, 0.0, 0.0)), -1.0);
}

#[test]
fn causal_characters() {
    use CausalCharacter::*;
    let tol = DEFAULT_CAUSAL_TOL;
    assert_eq!(causal_character(&Vec4::basis(0), tol).unwrap(), Timelike);
    assert_eq!(causal_character(&Vec4::basis(1), tol).unwrap(), Spacelike);
    assert_eq!(causal_character(&Vec4::new(1.0, 1.0, 0.0, 0.0), tol).unwrap(), Lightlike);
    assert!(causal_character(&Vec4::ZERO, tol).is_err());
    // a large exact null vector stays null under the scaled test
    let big = Vec4::new(1e5, 6e4, 8e4, 0.0);
    assert_eq!(causal_character_scaled(&big, tol).unwrap(), Lightlike);
}

#[test]
fn hyperplane_correspondence() {
    use CausalCharacter::*;
    let classify = |v: Vec4| hyperplane_classify(&Hyperplane::new(v, 0.0).unwrap(), 1e-9).unwrap();
    assert_eq!(classify(Vec4::basis(0)), Spacelike);
    assert_eq!(classify(Vec4::basis(1)), Timelike);
    assert_eq!(classify(Vec4::new(1.0, 1.0, 0.0, 0.0)), Lightlike);
    assert!(Hyperplane::new(Vec4::ZERO, 1.0).is_err());
}

#[test]
fn de_sitter_membership() {
    assert!(on_de_sitter(&Vec4::basis(1), 1e-12));
    assert!(!on_de_sitter(&Vec4::new(0.0, 0.0, 0.0, 2.0), 1e-12));
    assert!(on_de_sitter(&Vec4::new(1f64.sinh(), 1f64.cosh(), 0.0, 0.0), 1e-12));
}

#[test]
fn gram_schmidt_examples() {
    let f = signed_gram_schmidt(&[Vec4::new(2.0, 0.0, 0.0, 0.0), Vec4::new(0.0, 3.0, 0.0, 0.0)], 1e-12).unwrap();
    assert_eq!(f.vectors, vec![Vec4::basis(0), Vec4::basis(1)]);
    assert_eq!(f.signs, vec![-1.0, 1.0]);
    let f = signed_gram_schmidt(&[Vec4::basis(1), Vec4::new(0.0, 1.0, 1.0, 0.0)], 1e-12).unwrap();
    assert_eq!(f.vectors, vec![Vec4::basis(1), Vec4::basis(2)]);
    assert_eq!(
        signed_gram_schmidt(&[Vec4::new(1.0, 1.0, 0.0, 0.0)], 1e-12).unwrap_err(),
        GeomError::NullDegeneracy { index: 0 }
    );
    assert!(matches!(
        signed_gram_schmidt(&[Vec4::basis(1), Vec4::new(0.0, 2.0, 0.0, 0.0)], 1e-12),
        Err(GeomError::RankDeficient { index: 1 })
    ));
}

#[test]
fn lorentz_transform_is_an_isometry() {
    let seed = [
        Vec4::new(1.7, 0.3, -0.4, 0.2),
        Vec4::new(0.1, 1.0, 0.2, -0.3),
        Vec4::new(-0.2, 0.4, 1.1, 0.5),
        Vec4::new(0.3, -0.1, 0.6, 0.9),
    ];
    let m = LorentzTransform::from_seed(seed, 1e-12).unwrap();
    assert!((m.determinant() - 1.0).abs() < 1e-12);
    let (x, y) = (Vec4::new(0.5, -1.0, 2.0, 0.25), Vec4::new(-0.3, 0.8, 0.1, 1.5));
    assert!((minkowski_dot(&m.apply(&x), &m.apply(&y)) - minkowski_dot(&x, &y)).abs() < 1e-12);
}
