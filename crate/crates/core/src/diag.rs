use std::fmt;

/// The five correlators computed by every backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagnosticKind {
    R1,
    R2,
    F,
    D1,
    Drel,
}

impl DiagnosticKind {
    pub const ALL: [DiagnosticKind; 5] = [
        DiagnosticKind::R1,
        DiagnosticKind::R2,
        DiagnosticKind::F,
        DiagnosticKind::D1,
        DiagnosticKind::Drel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DiagnosticKind::R1 => "R1",
            DiagnosticKind::R2 => "R2",
            DiagnosticKind::F => "F",
            DiagnosticKind::D1 => "D1",
            DiagnosticKind::Drel => "Drel",
        }
    }
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A real number or `+∞`. Relative entropy between states with mismatched
/// supports is infinite; that case is tagged rather than stored as a float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedReal::PosInf)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::PosInf => None,
        }
    }

    /// Equal within `tol` when finite, or both infinite.
    pub fn approx_eq(self, other: ExtendedReal, tol: f64) -> bool {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => (a - b).abs() <= tol,
            (ExtendedReal::PosInf, ExtendedReal::PosInf) => true,
            _ => false,
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        ExtendedReal::Finite(v)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PosInf => f.write_str("inf"),
        }
    }
}

/// All five correlators for one (state, operator) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlators {
    pub r1: f64,
    pub r2: f64,
    pub f: f64,
    pub d1: f64,
    pub drel: ExtendedReal,
}

impl Correlators {
    pub fn get(&self, kind: DiagnosticKind) -> ExtendedReal {
        match kind {
            DiagnosticKind::R1 => self.r1.into(),
            DiagnosticKind::R2 => self.r2.into(),
            DiagnosticKind::F => self.f.into(),
            DiagnosticKind::D1 => self.d1.into(),
            DiagnosticKind::Drel => self.drel,
        }
    }
}
