//! The JSON document emitted for a classified element.

use std::sync::Arc;

use serde::Serialize;

use crate::classify::{classify, ClassificationReport};
use crate::cyclotomic::{CycloElem, RingContext};
use crate::error::Result;
use crate::global::{certify_local, LocalCertificate};
use crate::parse::parse_element;
use crate::scalar::Residue;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Precision {
    pub k: u32,
    /// `π`-adic precision `k (p - 1)`.
    #[serde(rename = "N")]
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct ReportDocument<T: Residue> {
    pub version: u32,
    pub p: u64,
    pub precision: Precision,
    pub input: String,
    /// Decimal coefficients in the basis `1, ζ, …, ζ^(p-2)`.
    pub coefficients: Vec<String>,
    pub classification: ClassificationReport<T>,
    /// A `p`-th root, present exactly when the element is a `p`-th power.
    pub certificate: Option<LocalCertificate<T>>,
    pub assumptions: Vec<String>,
    pub exit_status: i32,
}

pub const VARPI_NORMALISATION: &str = "varpi is the root of x^(p-1) + p with varpi/pi = 1 mod p";

impl<T: Residue> ReportDocument<T> {
    pub fn for_element(input: &str, x: &CycloElem<T>) -> Result<Self> {
        let ctx = x.ctx();
        let classification = classify(x)?;
        let certificate = if classification.is_pth_power {
            Some(certify_local(x)?)
        } else {
            None
        };
        Ok(ReportDocument {
            version: REPORT_VERSION,
            p: ctx.p(),
            precision: Precision {
                k: ctx.k(),
                n: ctx.precision(),
            },
            input: input.to_string(),
            coefficients: x.coeffs().iter().map(|c| c.to_string()).collect(),
            classification,
            certificate,
            assumptions: vec![VARPI_NORMALISATION.to_string()],
            exit_status: 0,
        })
    }

    pub fn parse_and_classify(input: &str, ctx: &Arc<RingContext<T>>) -> Result<Self> {
        Self::for_element(input, &parse_element(input, ctx)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_plus_p() {
        let ctx = RingContext::<u64>::new(5, 4).unwrap();
        let doc = ReportDocument::parse_and_classify("1+p", &ctx).unwrap();
        let v = serde_json::to_value(&doc).unwrap();
        assert_eq!(v["classification"]["is_primaire"], true);
        assert_eq!(v["classification"]["is_p_primary"], false);
        assert_eq!(v["precision"]["N"], 16);
        assert_eq!(v["coefficients"][0], "6");
        assert!(v["certificate"].is_null());
    }

    #[test]
    fn pth_power_carries_certificate() {
        let ctx = RingContext::<u64>::new(5, 4).unwrap();
        let doc = ReportDocument::parse_and_classify("(2+zeta)^5", &ctx).unwrap();
        let root = doc.certificate.as_ref().and_then(|c| c.root()).unwrap();
        let x = parse_element("(2+zeta)^5", &ctx).unwrap();
        assert!(root.pow(5).congruent(&x, ctx.precision() - 4));
        let v = serde_json::to_value(&doc).unwrap();
        assert_eq!(v["certificate"]["outcome"], "root");
        assert_eq!(v["certificate"]["root"]["p"], 5);
    }
}
