//! Quick randomized property checks run by `nematic selftest`.

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coefficients::{check_dissipation, derive_coefficients, identity_checks, MaterialParams};
use crate::fields::elastic::{distortion_stress, elastic_density};
use crate::fields::frank::{director_gradient, ericksen_stress, frank_density};
use crate::fields::{Field, Grid, GridOps, Scheme};
use crate::hilbert::q0_of_director;
use crate::qtensor::{
    bulk_gradient, inverse_h, linearized_h, project_in, project_out, uniaxial, BulkParams, Director, QTensor, Vec3,
};

#[derive(Clone, Debug, Serialize)]
pub struct SelfCheck {
    pub name: String,
    pub pass: bool,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub tolerance: f64,
}

impl SelfCheck {
    fn new(name: &str, worst: f64, tolerance: f64) -> SelfCheck {
        SelfCheck { name: name.into(), pass: worst <= tolerance, worst, tolerance }
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

fn random_q(rng: &mut ChaCha8Rng) -> QTensor {
    QTensor::from_components([0; 5].map(|_| rng.random_range(-1.0..1.0)))
}

pub fn random_params(rng: &mut ChaCha8Rng) -> MaterialParams {
    let l1 = rng.random_range(0.01..2.0);
    MaterialParams {
        a: rng.random_range(0.1..3.0),
        b: rng.random_range(0.1..3.0),
        c: rng.random_range(0.1..3.0),
        l1,
        l2: rng.random_range(-0.4 * l1..1.0),
        l3: rng.random_range(-0.4 * l1..1.0),
        gamma: rng.random_range(0.1..3.0),
        xi: rng.random_range(-2.0..2.0),
        eta: rng.random_range(0.1..3.0),
        epsilon: rng.random_range(0.01..1.0),
    }
}

/// Bulk algebra around random uniaxial states.
pub fn algebra(seed: u64, draws: usize) -> Vec<SelfCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 5];
    for _ in 0..draws {
        let bulk = BulkParams::new(rng.random_range(0.1..3.0), rng.random_range(0.1..3.0), rng.random_range(0.1..3.0))
            .expect("positive coefficients");
        let n = Director::new(random_unit(&mut rng)).expect("unit");
        let q0 = uniaxial(bulk.s, &n);
        let scale = 1.0 + bulk.a * bulk.s + bulk.b * bulk.s * bulk.s + bulk.c * bulk.s.powi(3);
        worst[0] = worst[0].max(bulk_gradient(&q0, &bulk).norm() / scale);

        let q = random_q(&mut rng);
        let q_in = project_in(&q, &n);
        let q_out = project_out(&q, &n);
        worst[1] = worst[1].max(linearized_h(&q_in, &bulk, &n).norm() / (1.0 + scale * q_in.norm()));

        let h_out = linearized_h(&q_out, &bulk, &n);
        let deficit = bulk.coercivity_constant() * q_out.norm_sq() - h_out.dot(&q_out);
        worst[2] = worst[2].max(deficit);

        let back = inverse_h(&h_out, &bulk, &n).expect("range of H");
        worst[3] = worst[3].max((back - q_out).norm() / (1.0 + q_out.norm()));

        let qn = q.mul_vec(&n.vector());
        let rhs = 2.0 * qn.norm_squared() - 2.0 * n.vector().dot(&qn).powi(2);
        worst[4] = worst[4].max((q_in.norm_sq() - rhs).abs());
    }
    vec![
        SelfCheck::new("bulk gradient vanishes at the uniaxial ground state", worst[0], 1e-12),
        SelfCheck::new("linearized operator annihilates the kernel", worst[1], 1e-13),
        SelfCheck::new("coercivity on the complement", worst[2], 1e-10),
        SelfCheck::new("inverse of the linearized operator", worst[3], 1e-12),
        SelfCheck::new("kernel projection norm identity", worst[4], 1e-13),
    ]
}

/// Identities and dissipation inequalities for random parameter sets.
pub fn coefficients(seed: u64, draws: usize) -> Vec<SelfCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failed_identities = 0usize;
    let mut failed_inequalities = 0usize;
    for _ in 0..draws {
        let p = random_params(&mut rng);
        let d = derive_coefficients(&p).expect("valid parameters");
        failed_identities += identity_checks(&p, &d).iter().filter(|c| !c.pass).count();
        if !check_dissipation(&d).all_hold() {
            failed_inequalities += 1;
        }
    }
    vec![
        SelfCheck::new("coefficient identities (failures)", failed_identities as f64, 0.0),
        SelfCheck::new("dissipation inequalities (failures)", failed_inequalities as f64, 0.0),
    ]
}

/// Landau-de Gennes elastic density and distortion stress of uniaxial
/// fields against the Oseen-Frank density and Ericksen stress.
pub fn energy_equivalence(seed: u64, fields: usize, n: usize) -> Vec<SelfCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Grid::new_2d(n, n, 1.0, 1.0).expect("valid grid");
    let ops = GridOps::new(g, Scheme::Spectral);
    let mut worst_density = 0.0f64;
    let mut worst_stress = 0.0f64;
    for _ in 0..fields {
        let p = random_params(&mut rng);
        let d = derive_coefficients(&p).expect("valid parameters");
        let c: [f64; 4] = [0; 4].map(|_| rng.random_range(-0.4..0.4));
        let phi = Field::from_fn(g, |x| c[0] * (2.0 * PI * x[0]).sin() + c[1] * (2.0 * PI * (x[0] + x[1])).cos());
        let psi = Field::from_fn(g, |x| c[2] * (2.0 * PI * x[1]).cos() + c[3] * (2.0 * PI * (x[0] - x[1])).sin());
        let dir = phi.zip_map(&psi, |a, b| Vec3::new(a.cos() * b.cos(), a.sin() * b.cos(), b.sin()));
        let q0 = q0_of_director(&dir, d.s).expect("unit director");
        let fe = elastic_density(&ops, &q0, p.l1, p.l2, p.l3);
        let gn = director_gradient(&ops, &dir);
        let frank = d.frank();
        for i in 0..g.node_count() {
            let ef = frank_density(&dir.values()[i], &gn.values()[i], &frank);
            worst_density = worst_density.max((fe.values()[i] - ef).abs());
        }
        let sd = distortion_stress(&ops, &q0, &q0, p.l1, p.l2, p.l3).expect("same grid");
        let se = ericksen_stress(&ops, &dir, &frank);
        worst_stress = worst_stress.max(sd.zip_map(&se, |a, b| (a - b).amax()).max_abs());
    }
    vec![
        SelfCheck::new("elastic density of uniaxial fields equals Frank density", worst_density, 1e-10),
        SelfCheck::new("distortion stress of uniaxial fields equals Ericksen stress", worst_stress, 1e-10),
    ]
}

/// All quick suites.
pub fn run_all(seed: u64) -> Vec<SelfCheck> {
    let mut out = algebra(seed, 10_000);
    out.extend(coefficients(seed.wrapping_add(1), 1_000));
    out.extend(energy_equivalence(seed.wrapping_add(2), 3, 32));
    out
}
