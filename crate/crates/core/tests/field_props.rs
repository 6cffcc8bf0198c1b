use std::f64::consts::PI;

use nematic::coefficients::MaterialParams;
use nematic::fields::frank::{frank_energy, frank_molecular_field};
use nematic::fields::{elastic_operator, landau_energy, molecular_field, Field, Grid, GridOps, QField, Scheme};
use nematic::qtensor::{Mat3, QTensor, Vec3};
use proptest::prelude::*;

const N: usize = 16;

fn grid() -> Grid {
    Grid::new_2d(N, N, 1.0, 1.0).unwrap()
}

/// Three Fourier modes per component with wavenumbers up to 3.
fn band_limited_q(coef: &[f64]) -> QField {
    Field::from_fn(grid(), |x| {
        let c = |k: usize| {
            let b = &coef[k * 6..k * 6 + 6];
            b[0] * (2.0 * PI * x[0]).sin()
                + b[1] * (2.0 * PI * (x[0] + 2.0 * x[1])).cos()
                + b[2] * (6.0 * PI * x[1]).sin()
                + b[3] * (4.0 * PI * (x[0] - x[1])).cos()
                + b[4] * (2.0 * PI * x[1]).cos()
                + b[5]
        };
        QTensor::from_components([c(0), c(1), c(2), c(3), c(4)])
    })
}

fn coef_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 30)
}

fn elastic_strategy() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.05f64..2.0, -0.5f64..1.0, -0.5f64..1.0).prop_filter("coercive", |(l1, l2, l3)| l1 + l2 + l3 > 0.02)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integration_by_parts(c in coef_strategy()) {
        let ops = GridOps::new(grid(), Scheme::Spectral);
        let q = band_limited_q(&c);
        let sigma: Field<Mat3> = q.map(|x| x.to_matrix() + Mat3::new(0.0, x.xy, 0.0, -x.xx, 0.0, 0.0, 0.0, 0.0, 0.0));
        let v: Field<Vec3> = q.map(|x| Vec3::new(x.yy, x.xz * x.xz, x.yz));
        let lhs = ops.inner(&ops.tensor_divergence(&sigma), &v);
        let rhs = -ops.inner(&sigma, &ops.vector_gradient(&v));
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()), "{} {}", lhs, rhs);
    }

    #[test]
    fn operators_keep_tensors_traceless(c in coef_strategy(), (l1, l2, l3) in elastic_strategy()) {
        for scheme in [Scheme::Spectral, Scheme::Central2] {
            let ops = GridOps::new(grid(), scheme);
            let q = band_limited_q(&c);
            for f in [elastic_operator(&ops, &q, l1, l2, l3), ops.laplacian(&q), ops.deriv(&q, 1)] {
                let worst = f.values().iter().map(|x| x.to_matrix().trace().abs()).fold(0.0, f64::max);
                prop_assert!(worst <= 1e-12);
            }
        }
    }

    #[test]
    fn elastic_operator_is_coercive(c in coef_strategy(), (l1, l2, l3) in elastic_strategy()) {
        let ops = GridOps::new(grid(), Scheme::Spectral);
        let q = band_limited_q(&c);
        let l0 = l1.min(l1 + l2 + l3);
        let lq = ops.inner(&elastic_operator(&ops, &q, l1, l2, l3), &q);
        let grad: f64 = ops.gradient(&q).iter().map(|g| ops.inner(g, g)).sum();
        prop_assert!(lq >= l0 * grad - 1e-10 * (1.0 + grad), "{} < {}", lq, l0 * grad);
    }

    #[test]
    fn molecular_field_is_the_energy_gradient(c in coef_strategy(), d in coef_strategy(), (l1, l2, l3) in elastic_strategy()) {
        let ops = GridOps::new(grid(), Scheme::Spectral);
        let p = MaterialParams { l1, l2, l3, epsilon: 0.3, ..Default::default() };
        let q = band_limited_q(&c).scale(0.5);
        let dq = band_limited_q(&d);
        let h = 1e-5;
        let e = |x: &QField| landau_energy(&ops, x, &p).unwrap().total;
        let fd = -(e(&q.axpy(h, &dq)) - e(&q.axpy(-h, &dq))) / (2.0 * h);
        let an = ops.inner(&molecular_field(&ops, &q, &p).unwrap(), &dq);
        prop_assert!((fd - an).abs() < 1e-6 * (1.0 + an.abs()), "{} vs {}", fd, an);
    }
}

/// Random smooth planar-plus-twist director and a tangent perturbation.
fn director_pair(c: &[f64]) -> (Field<Vec3>, Field<Vec3>) {
    let g = Grid::new_2d(32, 32, 1.0, 1.0).unwrap();
    let n = Field::from_fn(g, |x| {
        let a = 0.4 * c[0] * (2.0 * PI * x[0]).sin() + 0.3 * c[1] * (2.0 * PI * (x[0] + x[1])).cos();
        let b = 0.3 * c[2] * (2.0 * PI * x[1]).cos();
        Vec3::new(a.cos() * b.cos(), a.sin() * b.cos(), b.sin())
    });
    let raw = Field::from_fn(g, |x| {
        Vec3::new((2.0 * PI * x[1]).sin() * c[3], (2.0 * PI * x[0]).cos(), c[4] * (2.0 * PI * (x[0] - x[1])).sin())
    });
    let tangent = raw.zip_map(&n, |r, nv| r - nv * nv.dot(r));
    (n, tangent)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn frank_field_is_the_energy_gradient(
        c in prop::collection::vec(-1.0f64..1.0, 5),
        k in prop::array::uniform4(0.2f64..2.0),
    ) {
        let (n, delta) = director_pair(&c);
        let ops = GridOps::new(*n.grid(), Scheme::Spectral);
        let e = |h: f64| {
            let moved = n.zip_map(&delta, |a, b| (a + h * b).normalize());
            frank_energy(&ops, &moved, &k).unwrap()
        };
        let h = 1e-5;
        let fd = -(e(h) - e(-h)) / (2.0 * h);
        let an = ops.inner(&frank_molecular_field(&ops, &n, &k).unwrap(), &delta);
        prop_assert!((fd - an).abs() < 1e-6 * (1.0 + an.abs()), "{} vs {}", fd, an);
    }
}
