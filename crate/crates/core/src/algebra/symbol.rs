use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolKind {
    /// Summation index of a bracket series.
    Index,
    /// Free parameter of the integral (`alpha`, `beta`, ...).
    Parameter,
    /// Integration variable of a Mellin–Barnes contour.
    ContourVar,
}

/// A named symbol. Ordering is by name, then kind.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    name: String,
    kind: SymbolKind,
}

impl Symbol {
    pub fn new(name: impl Into<String>, kind: SymbolKind) -> Self {
        Self { name: name.into(), kind }
    }

    pub fn index(name: impl Into<String>) -> Self {
        Self::new(name, SymbolKind::Index)
    }

    pub fn parameter(name: impl Into<String>) -> Self {
        Self::new(name, SymbolKind::Parameter)
    }

    pub fn contour(name: impl Into<String>) -> Self {
        Self::new(name, SymbolKind::ContourVar)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn is_index(&self) -> bool {
        self.kind == SymbolKind::Index
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// The two parameters of the flagship integral.
pub fn alpha() -> Symbol {
    Symbol::parameter("alpha")
}

pub fn beta() -> Symbol {
    Symbol::parameter("beta")
}
