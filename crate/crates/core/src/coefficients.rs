//! Material parameters of the Q-tensor model and the Ericksen-Leslie
//! constants they induce at the uniaxial ground state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qtensor::BulkParams;

/// Relative tolerance for identities that are exact in real arithmetic.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Inputs of the Q-tensor model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub gamma: f64,
    pub xi: f64,
    pub eta: f64,
    pub epsilon: f64,
}

impl Default for MaterialParams {
    fn default() -> Self {
        MaterialParams {
            a: 1.0,
            b: 1.0,
            c: 1.0,
            l1: 1.0,
            l2: 0.0,
            l3: 0.0,
            gamma: 1.0,
            xi: 1.0,
            eta: 1.0,
            epsilon: 0.1,
        }
    }
}

impl MaterialParams {
    /// Checks every inequality the model needs, naming the first one that fails.
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.a, self.b, self.c, self.l1, self.l2, self.l3, self.gamma, self.xi, self.eta,
            self.epsilon,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("all parameters must be finite".into()));
        }
        let fail = |what: &str| Err(Error::Validation(what.to_string()));
        if !(self.c > 0.0) {
            return fail("c > 0 (bulk potential bounded below)");
        }
        if !(self.a > 0.0 && self.b > 0.0) {
            return fail("a > 0 and b > 0 (bulk coercivity: bs > 0 and 2cs^2 - bs > 0)");
        }
        if !(self.l1 > 0.0 && self.l1 + self.l2 + self.l3 > 0.0) {
            return fail("L1 > 0 and L1 + L2 + L3 > 0 (elastic coercivity)");
        }
        if !(self.gamma > 0.0) {
            return fail("Gamma > 0 (rotational diffusion)");
        }
        if !(self.eta > 0.0) {
            return fail("eta > 0 (viscosity)");
        }
        if !(self.epsilon > 0.0) {
            return fail("epsilon > 0 (relaxation parameter)");
        }
        Ok(())
    }

    pub fn bulk(&self) -> Result<BulkParams> {
        BulkParams::new(self.a, self.b, self.c)
    }

    /// `min(L1, L1 + L2 + L3)`.
    pub fn elastic_coercivity(&self) -> f64 {
        self.l1.min(self.l1 + self.l2 + self.l3)
    }
}

/// Ericksen-Leslie constants induced by a [`MaterialParams`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedCoefficients {
    pub s: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha4: f64,
    pub alpha5: f64,
    pub alpha6: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub l0: f64,
    pub c0: f64,
}

impl DerivedCoefficients {
    /// Frank constants as an array `[k1, k2, k3, k4]`.
    pub fn frank(&self) -> [f64; 4] {
        [self.k1, self.k2, self.k3, self.k4]
    }
}

pub fn derive_coefficients(p: &MaterialParams) -> Result<DerivedCoefficients> {
    p.validate()?;
    let bulk = p.bulk()?;
    let s = bulk.s;
    let (g, xi, eta) = (p.gamma, p.xi, p.eta);
    let s2 = s * s;

    let k2 = 2.0 * p.l1 * s2;
    let k1 = (2.0 * p.l1 + p.l2 + p.l3) * s2;
    let k4 = p.l3 * s2;

    let gamma1 = 2.0 * g * s2;
    let gamma2 = -2.0 * g * xi * s * (s + 2.0) / 3.0;
    let flow = g * xi * s * (2.0 + s) / 3.0;
    let alpha1 = -2.0 * g * xi * xi * s2 * (3.0 - 2.0 * s) * (1.0 + 2.0 * s) / 3.0;
    let alpha2 = g * s2 - flow;
    let alpha3 = -g * s2 - flow;
    let alpha4 = eta + 4.0 * g * xi * xi * (1.0 - s) * (1.0 - s) / 9.0;
    let tumble = g * xi * xi * s * (4.0 - s) / 3.0;
    let alpha5 = tumble - flow;
    let alpha6 = tumble + flow;

    let ratio = gamma2 * gamma2 / gamma1;
    Ok(DerivedCoefficients {
        s,
        k1,
        k2,
        k3: k1,
        k4,
        alpha1,
        alpha2,
        alpha3,
        alpha4,
        alpha5,
        alpha6,
        gamma1,
        gamma2,
        beta1: alpha1 + ratio,
        beta2: alpha4,
        beta3: alpha5 + alpha6 - ratio,
        l0: p.elastic_coercivity(),
        c0: bulk.coercivity_constant(),
    })
}

/// Values and signs of the three dissipation inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissipationReport {
    pub beta2: f64,
    pub two_beta2_plus_beta3: f64,
    pub three_halves_beta2_plus_beta3_plus_beta1: f64,
    pub beta2_positive: bool,
    pub two_beta2_plus_beta3_positive: bool,
    pub three_halves_combination_positive: bool,
}

impl DissipationReport {
    pub fn all_hold(&self) -> bool {
        self.beta2_positive && self.two_beta2_plus_beta3_positive && self.three_halves_combination_positive
    }
}

pub fn check_dissipation(d: &DerivedCoefficients) -> DissipationReport {
    let first = d.beta2;
    let second = 2.0 * d.beta2 + d.beta3;
    let third = 1.5 * d.beta2 + d.beta3 + d.beta1;
    DissipationReport {
        beta2: first,
        two_beta2_plus_beta3: second,
        three_halves_beta2_plus_beta3_plus_beta1: third,
        beta2_positive: first > 0.0,
        two_beta2_plus_beta3_positive: second > 0.0,
        three_halves_combination_positive: third > 0.0,
    }
}

/// How a signed linear relation `lhs = rhs` holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationStatus {
    Holds,
    HoldsWithOppositeSign,
    Fails,
}

impl RelationStatus {
    pub fn classify(lhs: f64, rhs: f64) -> Self {
        let scale = 1.0 + lhs.abs().max(rhs.abs());
        if (lhs - rhs).abs() <= IDENTITY_TOL * scale {
            RelationStatus::Holds
        } else if (lhs + rhs).abs() <= IDENTITY_TOL * scale {
            RelationStatus::HoldsWithOppositeSign
        } else {
            RelationStatus::Fails
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            RelationStatus::Holds => "holds",
            RelationStatus::HoldsWithOppositeSign => "holds with opposite sign",
            RelationStatus::Fails => "fails",
        }
    }
}

/// The Parodi-type relations in their commonly printed form, with the sign
/// under which each actually holds for the given coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParodiReport {
    pub alpha2_plus_alpha3: f64,
    pub alpha6_minus_alpha5: f64,
    pub alpha3_minus_alpha2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// `alpha2 + alpha3 = alpha6 - alpha5`
    pub parodi: RelationStatus,
    /// `gamma1 = alpha3 - alpha2`
    pub gamma1_relation: RelationStatus,
    /// `gamma2 = alpha6 - alpha5`
    pub gamma2_relation: RelationStatus,
    /// `alpha2 + alpha3 = gamma2`
    pub gamma2_from_sum: RelationStatus,
}

pub fn parodi_report(d: &DerivedCoefficients) -> ParodiReport {
    let sum = d.alpha2 + d.alpha3;
    let diff65 = d.alpha6 - d.alpha5;
    let diff32 = d.alpha3 - d.alpha2;
    ParodiReport {
        alpha2_plus_alpha3: sum,
        alpha6_minus_alpha5: diff65,
        alpha3_minus_alpha2: diff32,
        gamma1: d.gamma1,
        gamma2: d.gamma2,
        parodi: RelationStatus::classify(sum, diff65),
        gamma1_relation: RelationStatus::classify(d.gamma1, diff32),
        gamma2_relation: RelationStatus::classify(d.gamma2, diff65),
        gamma2_from_sum: RelationStatus::classify(sum, d.gamma2),
    }
}

/// One checked identity `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        let scale = 1.0 + lhs.abs().max(rhs.abs());
        IdentityCheck {
            name: name.to_string(),
            lhs,
            rhs,
            pass: (lhs - rhs).abs() <= IDENTITY_TOL * scale,
        }
    }
}

/// Every identity that must hold for coefficients from [`derive_coefficients`].
pub fn identity_checks(p: &MaterialParams, d: &DerivedCoefficients) -> Vec<IdentityCheck> {
    let s = d.s;
    let s2 = s * s;
    let ratio = d.gamma2 * d.gamma2 / d.gamma1;
    let xi2 = p.xi * p.xi;
    vec![
        IdentityCheck::new("2cs²−bs−3a = 0", 2.0 * p.c * s2 - p.b * s - 3.0 * p.a, 0.0),
        IdentityCheck::new("k1 = (2L1+L2+L3)s²", d.k1, (2.0 * p.l1 + p.l2 + p.l3) * s2),
        IdentityCheck::new("k3 = k1", d.k3, d.k1),
        IdentityCheck::new("k2 = 2L1s²", d.k2, 2.0 * p.l1 * s2),
        IdentityCheck::new("k4 = L3s²", d.k4, p.l3 * s2),
        IdentityCheck::new("γ1 = 2Γs²", d.gamma1, 2.0 * p.gamma * s2),
        IdentityCheck::new("γ2 = −2Γξs(s+2)/3", d.gamma2, -2.0 * p.gamma * p.xi * s * (s + 2.0) / 3.0),
        IdentityCheck::new("α2+α3 = γ2", d.alpha2 + d.alpha3, d.gamma2),
        IdentityCheck::new("α6−α5 = −γ2", d.alpha6 - d.alpha5, -d.gamma2),
        IdentityCheck::new("α3−α2 = −γ1", d.alpha3 - d.alpha2, -d.gamma1),
        IdentityCheck::new("β1 = α1+γ2²/γ1", d.beta1, d.alpha1 + ratio),
        IdentityCheck::new("β2 = α4", d.beta2, d.alpha4),
        IdentityCheck::new("β3 = α5+α6−γ2²/γ1", d.beta3, d.alpha5 + d.alpha6 - ratio),
        IdentityCheck::new("2α4+α5+α6−γ2²/γ1 = 2η", 2.0 * d.alpha4 + d.alpha5 + d.alpha6 - ratio, 2.0 * p.eta),
        IdentityCheck::new(
            "(3/2)α4+α5+α6+α1 = (3/2)η+(2/3)Γξ²(1−s)²(1+2s)²",
            1.5 * d.alpha4 + d.alpha5 + d.alpha6 + d.alpha1,
            1.5 * p.eta
                + 2.0 / 3.0 * p.gamma * xi2 * (1.0 - s).powi(2) * (1.0 + 2.0 * s).powi(2),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_params() -> MaterialParams {
        MaterialParams { epsilon: 0.1, ..MaterialParams::default() }
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn unit_example() {
        let d = derive_coefficients(&unit_params()).unwrap();
        assert!(close(d.s, 1.5));
        for k in [d.k1, d.k2, d.k3] {
            assert!(close(k, 4.5));
        }
        assert_eq!(d.k4, 0.0);
        assert!(close(d.gamma1, 4.5));
        assert!(close(d.gamma2, -3.5));
        assert!(close(d.alpha1, 0.0));
        assert!(close(d.alpha2, 0.5));
        assert!(close(d.alpha3, -4.0));
        assert!(close(d.alpha4, 1.0 + 1.0 / 9.0));
        assert!(close(d.alpha5, -0.5));
        assert!(close(d.alpha6, 3.0));
        assert!(close(d.c0, 1.5));
        assert!(close(d.l0, 1.0));
    }

    #[test]
    fn no_flow_coupling() {
        let p = MaterialParams { xi: 0.0, ..unit_params() };
        let d = derive_coefficients(&p).unwrap();
        assert_eq!(d.gamma2, 0.0);
        assert_eq!(d.alpha1, 0.0);
        assert_eq!(d.alpha5, 0.0);
        assert_eq!(d.alpha6, 0.0);
        assert!(close(d.alpha2, 2.25));
        assert!(close(d.alpha3, -2.25));
        assert!(close(d.alpha4, 1.0));
        let r = check_dissipation(&d);
        assert!(close(r.beta2, 1.0));
        assert!(close(r.two_beta2_plus_beta3, 2.0));
        assert!(close(r.three_halves_beta2_plus_beta3_plus_beta1, 1.5));
        let pr = parodi_report(&d);
        assert_eq!(pr.parodi, RelationStatus::Holds);
        assert_eq!(pr.gamma2_relation, RelationStatus::Holds);
    }

    #[test]
    fn dissipation_unit_example() {
        let d = derive_coefficients(&unit_params()).unwrap();
        let r = check_dissipation(&d);
        assert!(r.all_hold());
        assert!(close(r.three_halves_beta2_plus_beta3_plus_beta1, 1.5 + 8.0 / 3.0));
    }

    #[test]
    fn tampered_beta2_fails_first_inequality() {
        let mut d = derive_coefficients(&unit_params()).unwrap();
        d.beta2 = -1.0;
        let r = check_dissipation(&d);
        assert!(!r.beta2_positive);
        assert!(!r.all_hold());
    }

    #[test]
    fn parodi_signs_for_unit_example() {
        let d = derive_coefficients(&unit_params()).unwrap();
        let r = parodi_report(&d);
        assert!(close(r.alpha2_plus_alpha3, -3.5));
        assert!(close(r.alpha6_minus_alpha5, 3.5));
        assert!(close(r.alpha3_minus_alpha2, -4.5));
        assert_eq!(r.parodi, RelationStatus::HoldsWithOppositeSign);
        assert_eq!(r.gamma1_relation, RelationStatus::HoldsWithOppositeSign);
        assert_eq!(r.gamma2_relation, RelationStatus::HoldsWithOppositeSign);
        assert_eq!(r.gamma2_from_sum, RelationStatus::Holds);
    }

    #[test]
    fn validation_names_the_inequality() {
        let p = MaterialParams { l1: -1.0, ..unit_params() };
        let err = derive_coefficients(&p).unwrap_err().to_string();
        assert!(err.contains("L1 > 0 and L1 + L2 + L3 > 0"), "{err}");
        let p = MaterialParams { l1: 1.0, l2: -3.0, ..unit_params() };
        assert!(matches!(p.validate(), Err(Error::Validation(_))));
        let p = MaterialParams { gamma: 0.0, ..unit_params() };
        assert!(p.validate().unwrap_err().to_string().contains("Gamma"));
        let p = MaterialParams { c: 0.0, ..unit_params() };
        assert!(p.validate().is_err());
    }

    #[test]
    fn all_identities_pass_for_unit_example() {
        let p = unit_params();
        let d = derive_coefficients(&p).unwrap();
        for check in identity_checks(&p, &d) {
            assert!(check.pass, "{check:?}");
        }
    }
}
