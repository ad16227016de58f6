use std::fmt;

use super::RepresentationKind;

/// Asymptotic storage class of a layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticClass {
    NSquared,
    NTimesE,
    NPlusE,
    E,
}

impl fmt::Display for AsymptoticClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AsymptoticClass::NSquared => "O(N^2)",
            AsymptoticClass::NTimesE => "O(N*E)",
            AsymptoticClass::NPlusE => "O(N+E)",
            AsymptoticClass::E => "O(E)",
        })
    }
}

/// Exact stored-cell count of a layout together with its asymptotic class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryProfile {
    pub kind: RepresentationKind,
    pub n: u64,
    pub e: u64,
    pub cells: u128,
    pub asymptotic_class: AsymptoticClass,
}

/// Cell-count convention: matrices store every cell; both list layouts keep
/// one header per node plus one entry per arc endpoint; the edge list keeps
/// two ids per arc.
pub fn memory_profile(kind: RepresentationKind, n: u64, e: u64) -> MemoryProfile {
    let (n128, e128) = (u128::from(n), u128::from(e));
    let (cells, asymptotic_class) = match kind {
        RepresentationKind::AdjacencyMatrix => (n128 * n128, AsymptoticClass::NSquared),
        RepresentationKind::IncidenceMatrix => (n128 * e128, AsymptoticClass::NTimesE),
        RepresentationKind::AdjacencyList | RepresentationKind::IncidenceList => {
            (n128 + 2 * e128, AsymptoticClass::NPlusE)
        }
        RepresentationKind::EdgeList => (2 * e128, AsymptoticClass::E),
    };
    MemoryProfile {
        kind,
        n,
        e,
        cells,
        asymptotic_class,
    }
}
