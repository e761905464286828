//! Pass/fail certificates shared by the verification routines.

use serde::Serialize;

use crate::exactnum::{RationalFunction, Series};

/// A concrete failing case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub case: String,
    pub order: Option<usize>,
    pub lhs: String,
    pub rhs: String,
}

impl Witness {
    pub fn new(case: impl Into<String>, order: Option<usize>, lhs: String, rhs: String) -> Self {
        Witness {
            case: case.into(),
            order,
            lhs,
            rhs,
        }
    }
}

impl Witness {
    /// Witness from two series that first differ at order `o`; keeps only the coefficients there.
    pub fn series(
        case: impl Into<String>,
        o: usize,
        lhs: &Series<RationalFunction>,
        rhs: &Series<RationalFunction>,
    ) -> Self {
        Witness::new(
            case,
            Some(o),
            lhs.coeff_or_zero(o).to_string(),
            rhs.coeff_or_zero(o).to_string(),
        )
    }
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.case)?;
        if let Some(o) = self.order {
            write!(f, " at order {o}")?;
        }
        write!(f, ": {} != {}", self.lhs, self.rhs)
    }
}

/// Outcome of an exhaustive finite check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub property: String,
    pub holds: bool,
    pub cases: usize,
    pub witness: Option<Witness>,
}

impl Certificate {
    pub fn from_witness(
        property: impl Into<String>,
        cases: usize,
        witness: Option<Witness>,
    ) -> Self {
        Certificate {
            property: property.into(),
            holds: witness.is_none(),
            cases,
            witness,
        }
    }
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.witness {
            None => write!(f, "{}: holds ({} cases)", self.property, self.cases),
            Some(w) => write!(f, "{}: FAILS ({w})", self.property),
        }
    }
}
