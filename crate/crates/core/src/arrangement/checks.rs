use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::Arrangement;
use crate::error::Result;
use crate::lattice::IntegerMatrix;
use crate::rational::{q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalityReport {
    /// Every vertex lies on exactly `m` hyperplanes.
    pub transversal: bool,
    /// Vertices (in `[0,1)^m`) lying on more than `m` hyperplanes.
    #[serde(with = "crate::io::qmat")]
    pub witnesses: Vec<Vec<Q>>,
}

pub fn check_transversality(arr: &Arrangement) -> TransversalityReport {
    let witnesses: Vec<Vec<Q>> = arr
        .vertex_orbits_mod_z()
        .iter()
        .filter(|v| v.on.len() > arr.m())
        .map(|v| v.point.clone())
        .collect();
    TransversalityReport {
        transversal: witnesses.is_empty(),
        witnesses,
    }
}

/// Whether the vertex set is exactly `ℤ^m` (in lattice coordinates).
pub fn vertices_equal_lattice(arr: &Arrangement) -> bool {
    let v = arr.vertex_orbits_mod_z();
    v.len() == 1 && v[0].point.iter().all(Zero::is_zero)
}

/// Whether halving `ε` changes neither the orbit counts nor transversality.
pub fn epsilon_stable(basis: &IntegerMatrix, eps: &[Q]) -> Result<bool> {
    let a = Arrangement::new(basis, eps)?;
    let half: Vec<Q> = eps.iter().map(|e| e / q(2)).collect();
    let b = Arrangement::new(basis, &half)?;
    Ok(a.orbit_f_vector() == b.orbit_f_vector()
        && check_transversality(&a).transversal == check_transversality(&b).transversal)
}
