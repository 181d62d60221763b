//! Exit-code classification of library errors.

use serde::Serialize;
use serde_json::Value;

use tropsing::census::CensusError;
use tropsing::delta::DeltaError;
use tropsing::io::IoError;
use tropsing::strata::StrataError;
use tropsing::ultratrop::UltratropError;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONSISTENCY: i32 = 3;

/// A command that could not produce a trustworthy result.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
    /// Result computed before the inconsistency surfaced, if any.
    pub context: Option<Value>,
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    kind: &'a str,
    message: &'a str,
    exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    context: Option<&'a Value>,
}

impl Failure {
    pub fn input(kind: &'static str, message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, kind, message: message.into(), context: None }
    }

    pub fn inconsistency(kind: &'static str, message: impl Into<String>, context: Option<Value>) -> Self {
        Failure { code: EXIT_INCONSISTENCY, kind, message: message.into(), context }
    }

    pub fn to_json(&self) -> Value {
        let obj = ErrorObject { kind: self.kind, message: &self.message, exit_code: self.code, context: self.context.as_ref() };
        serde_json::json!({ "error": obj })
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        let kind = match e {
            IoError::Read { .. } => "ReadError",
            IoError::SchemaError { .. } => "SchemaError",
            IoError::DuplicatePoint { .. } => "DuplicatePoint",
        };
        Failure::input(kind, e.to_string())
    }
}

impl From<DeltaError> for Failure {
    fn from(e: DeltaError) -> Self {
        match e {
            DeltaError::OddIntersection(_) => Failure::inconsistency("OddIntersection", e.to_string(), None),
            _ => Failure::input("DeltaError", e.to_string()),
        }
    }
}

impl From<UltratropError> for Failure {
    fn from(e: UltratropError) -> Self {
        match e {
            UltratropError::ParityViolation { .. } => Failure::inconsistency("ParityViolation", e.to_string(), None),
            UltratropError::NegativeTotal(_) => Failure::inconsistency("NegativeTotal", e.to_string(), None),
            UltratropError::AssumptionViolated(_) => Failure::input("AssumptionViolated", e.to_string()),
            UltratropError::InfiniteIndex { .. } => Failure::input("InfiniteIndex", e.to_string()),
            _ => Failure::input("UltratropError", e.to_string()),
        }
    }
}

impl From<StrataError> for Failure {
    fn from(e: StrataError) -> Self {
        match e {
            StrataError::InconsistencyDetected(_) => Failure::inconsistency("InconsistencyDetected", e.to_string(), None),
            StrataError::ExceptionalCase(_) => Failure::input("ExceptionalCase", e.to_string()),
            StrataError::Delta(d) => d.into(),
            StrataError::NotOneDimensional => Failure::input("StrataError", e.to_string()),
        }
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::Strata(s) => s.into(),
            CensusError::Ultratrop(u) => u.into(),
            CensusError::Delta(d) => d.into(),
            CensusError::NegativeNodeCount { .. } => Failure::inconsistency("NegativeNodeCount", e.to_string(), None),
            CensusError::NonIntegralCount { .. } => Failure::inconsistency("NonIntegralCount", e.to_string(), None),
            _ => Failure::input("CensusError", e.to_string()),
        }
    }
}

impl From<tropsing::geom::GeomError> for Failure {
    fn from(e: tropsing::geom::GeomError) -> Self {
        Failure::input("GeomError", e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_by_kind() {
        assert_eq!(Failure::from(CensusError::NegativeNodeCount { total: 1, non_node: 2 }).code, EXIT_INCONSISTENCY);
        assert_eq!(Failure::from(UltratropError::Shape).code, EXIT_INPUT);
        let f = Failure::from(StrataError::InconsistencyDetected("x".into()));
        assert_eq!(f.to_json()["error"]["kind"], "InconsistencyDetected");
        assert_eq!(f.to_json()["error"]["exit_code"], 3);
    }
}
