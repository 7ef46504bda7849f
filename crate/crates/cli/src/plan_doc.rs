//! JSON form of a resolved plan.

use neggamma_core::model::{rho_m1, rho_m2};
use neggamma_core::{Plan, PlanM1, PlanM2};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Tolerance when checking a document's `rho_theoretical` against its fields.
const RHO_RECOMPUTE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanDocument {
    pub method: u8,
    pub r: u32,
    pub s: u32,
    pub alpha0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    pub rate: f64,
    pub rho_target: f64,
    pub rho_theoretical: f64,
    pub swapped: bool,
}

impl PlanDocument {
    pub fn new(plan: &Plan, rho_target: f64, swapped: bool) -> Self {
        match plan {
            Plan::M1(p) => Self {
                method: 1,
                r: p.r,
                s: p.s,
                alpha0: p.alpha0,
                theta: None,
                rate: p.rate,
                rho_target,
                rho_theoretical: p.rho_theoretical,
                swapped,
            },
            Plan::M2(p) => Self {
                method: 2,
                r: p.r,
                s: p.s,
                alpha0: p.alpha0,
                theta: Some(p.theta),
                rate: p.rate,
                rho_target,
                rho_theoretical: p.rho_theoretical,
                swapped,
            },
        }
    }

    /// Rebuilds the plan, rejecting documents whose fields disagree.
    pub fn to_plan(&self) -> Result<Plan, CliError> {
        let bad = |msg: String| CliError::PlanDocument(msg);
        let (plan, rho) = match (self.method, self.theta) {
            (1, None) => {
                let p = PlanM1::new(self.r, self.s, self.alpha0)?.with_rate(self.rate)?;
                (Plan::M1(p), rho_m1(self.alpha0, self.r, self.s)?)
            }
            (2, Some(theta)) => {
                let p = PlanM2::new(self.r, self.s, self.alpha0, theta)?.with_rate(self.rate)?;
                (Plan::M2(p), rho_m2(self.alpha0, self.r, self.s, theta)?)
            }
            (1, Some(_)) => return Err(bad("method 1 plans carry no theta".into())),
            (2, None) => return Err(bad("method 2 plans need theta".into())),
            (m, _) => return Err(bad(format!("unknown method {m}"))),
        };
        if (rho - self.rho_theoretical).abs() > RHO_RECOMPUTE_TOL {
            return Err(bad(format!(
                "rho_theoretical {} does not match the value {rho} implied by the other fields",
                self.rho_theoretical
            )));
        }
        Ok(plan)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2_doc() -> PlanDocument {
        let p = PlanM2::new(6, 9, 1.0, -0.9455533421780252).unwrap();
        PlanDocument::new(&Plan::M2(p), -0.05, false)
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let doc = m2_doc();
        let text = serde_json::to_string(&doc).unwrap();
        let back: PlanDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(doc, back);
        assert_eq!(back.to_plan().unwrap().rho_theoretical(), doc.rho_theoretical);
    }

    #[test]
    fn float_fields_parse_exactly() {
        // Needs serde_json's exact float parser; the default one can be off by an ulp.
        let mut doc = m2_doc();
        for x in [1.0539933212375925f64, 0.1 + 0.2, 1e-300 * 3.3, -0.9455533421780258] {
            doc.alpha0 = x.abs();
            let back: PlanDocument = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
            assert_eq!(back.alpha0.to_bits(), doc.alpha0.to_bits());
        }
    }

    #[test]
    fn method_one_omits_theta() {
        let p = PlanM1::new(2, 3, 0.0).unwrap();
        let text = serde_json::to_string(&PlanDocument::new(&Plan::M1(p), -0.5266, true)).unwrap();
        assert!(!text.contains("theta"));
        assert!(text.contains("\"swapped\":true"));
    }

    #[test]
    fn unknown_fields_rejected() {
        let mut v = serde_json::to_value(m2_doc()).unwrap();
        v["extra"] = serde_json::json!(1);
        assert!(serde_json::from_value::<PlanDocument>(v).is_err());
    }

    #[test]
    fn inconsistent_documents_rejected() {
        let mut d = m2_doc();
        d.rho_theoretical = -0.2;
        assert!(d.to_plan().is_err());
        let mut d = m2_doc();
        d.theta = None;
        assert!(d.to_plan().is_err());
        let mut d = m2_doc();
        d.rate = -1.0;
        assert!(d.to_plan().is_err());
    }
}
