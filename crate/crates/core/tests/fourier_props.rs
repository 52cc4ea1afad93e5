use num_complex::Complex64;
use proptest::prelude::*;

use ldpclab::fourier::{fourier_transform, inverse_transform, scalar_twist};
use ldpclab::rowdist::smoothness;
use ldpclab::{ComplexDistribution, FieldSpec, RowDistribution};
use num_rational::Rational64;

const SHAPES: [(u32, u32, usize); 8] =
    [(2, 1, 1), (2, 1, 3), (2, 1, 6), (3, 1, 2), (3, 1, 4), (2, 2, 3), (5, 1, 2), (3, 2, 2)];

fn complex_function() -> impl Strategy<Value = (FieldSpec, usize, Vec<Complex64>)> {
    (0..SHAPES.len()).prop_flat_map(|i| {
        let (p, h, ell) = SHAPES[i];
        let f = FieldSpec::new(p, h).unwrap();
        let size = (f.q() as usize).pow(ell as u32);
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), size)
            .prop_map(move |v| (f.clone(), ell, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()))
    })
}

fn row_distribution() -> impl Strategy<Value = RowDistribution> {
    (0..SHAPES.len()).prop_flat_map(|i| {
        let (p, h, ell) = SHAPES[i];
        let f = FieldSpec::new(p, h).unwrap();
        let q = f.q();
        proptest::collection::vec((proptest::collection::vec(0..q, ell), 1i64..10), 1..8).prop_map(move |pairs| {
            let total: i64 = pairs.iter().map(|(_, w)| w).sum();
            let masses = pairs.into_iter().map(|(v, w)| (v, Rational64::new(w, total))).collect();
            RowDistribution::new(&f, ell, masses).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inversion_recovers_function((f, ell, values) in complex_function()) {
        let d = ComplexDistribution::new(&f, ell, values.clone()).unwrap();
        let back = inverse_transform(&fourier_transform(&d).unwrap()).unwrap();
        for (a, b) in values.iter().zip(back.values()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn plancherel((f, ell, values) in complex_function()) {
        // sum_y |f_hat(y)|^2 = q^{-l} sum_x |f(x)|^2
        let d = ComplexDistribution::new(&f, ell, values.clone()).unwrap();
        let t = fourier_transform(&d).unwrap();
        let lhs: f64 = t.coefficients().iter().map(|c| c.norm_sqr()).sum();
        let rhs: f64 = values.iter().map(|c| c.norm_sqr()).sum::<f64>() / values.len() as f64;
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs));
    }

    #[test]
    fn twist_coefficients_are_real_and_determined_by_smoothness(tau in row_distribution()) {
        // P_hat(y) = q^{-l} (1 - q/(q-1) Pr[<y, v> != 0]), so the largest
        // nonzero coefficient is pinned by the smoothness
        let q = tau.field().q() as f64;
        let size = q.powi(tau.ell() as i32);
        let t = fourier_transform(&scalar_twist(&tau).unwrap()).unwrap();
        prop_assert!(t.coefficients().iter().all(|c| c.im.abs() < 1e-12));
        prop_assert!((t.coefficients()[0].re - 1.0 / size).abs() < 1e-12);
        let max = t.coefficients()[1..].iter().map(|c| c.re).fold(f64::NEG_INFINITY, f64::max);
        let delta = smoothness(&tau).unwrap();
        prop_assert!((max - (1.0 - q * delta / (q - 1.0)) / size).abs() < 1e-12);
    }
}
