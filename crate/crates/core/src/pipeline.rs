//! From a fan, a shift vector and an optional finite group to a labeled quotient complex.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arrangement::{
    build_arrangement, check_transversality, default_window, quotient::required_window,
    quotient_complex, vertices_equal_lattice, Arrangement, ArrangementSpec, QuotientComplex,
};
use crate::error::{Error, Result};
use crate::fan::{DegreeMap, Fan};
use crate::lattice::{big, cofinite_sublattice, CosetLabeling, IntegerMatrix, Lattice};
use crate::rational::Q;

/// `L → ⊕ ℤ/moduli_i`; `images[j]` is the image of the `j`-th basis vector of `L`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub moduli: Vec<i64>,
    /// Defaults to sending basis vector `j` to the `j`-th generator (or to 0 past the last one).
    #[serde(default)]
    pub images: Option<Vec<Vec<i64>>>,
}

impl GroupSpec {
    pub fn trivial() -> Self {
        GroupSpec::default()
    }

    pub fn cyclic(d: i64) -> Self {
        GroupSpec {
            moduli: vec![d],
            images: None,
        }
    }

    /// Parses `"d1,d2,..."`.
    pub fn parse(moduli: &str, images: Option<&str>) -> Result<Self> {
        let moduli = parse_ints(moduli, ',')?;
        let images = images
            .map(|s| {
                s.split(';')
                    .map(|row| parse_ints(row, ','))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        Ok(GroupSpec { moduli, images })
    }

    pub fn is_trivial(&self) -> bool {
        self.moduli.iter().all(|&d| d == 1)
    }

    fn images_for(&self, rank: usize) -> Vec<Vec<i64>> {
        match &self.images {
            Some(im) => im.clone(),
            None => (0..rank)
                .map(|j| (0..self.moduli.len()).map(|i| i64::from(i == j)).collect())
                .collect(),
        }
    }
}

pub(crate) fn parse_ints(s: &str, sep: char) -> Result<Vec<i64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(sep)
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("not an integer: {x:?}")))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct PipelineSpec {
    pub fan: Fan,
    pub epsilon: Vec<Q>,
    pub group: GroupSpec,
    /// `None` picks the smallest sound window.
    pub window: Option<u64>,
}

/// Which of the two vertex conditions admitted the arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub vertices_equal_lattice: bool,
    pub transversal: bool,
}

#[derive(Clone, Debug)]
pub struct Pipeline {
    pub fan: Fan,
    /// `L = Im(B)` with the columns of the ray matrix as basis.
    pub lattice: Lattice,
    pub sublattice: Lattice,
    pub labeling: CosetLabeling,
    /// Basis of the translation lattice in lattice coordinates (columns).
    pub translation: IntegerMatrix,
    pub gate: Gate,
    pub complex: QuotientComplex,
}

impl Pipeline {
    pub fn n(&self) -> usize {
        self.fan.n_rays()
    }

    /// Grading by `ℤ^n / L̃`, which is `Cl(X)` when the group is trivial.
    pub fn degree_map(&self) -> DegreeMap {
        DegreeMap::cokernel(self.sublattice.basis())
    }
}

/// Coefficients of the basis of `sub` with respect to the basis of `l`, as columns.
pub fn coefficient_matrix(l: &Lattice, sub: &Lattice) -> Result<IntegerMatrix> {
    let cols: Vec<Vec<BigInt>> = sub
        .basis()
        .to_columns()
        .iter()
        .map(|v| l.coefficients(v).ok_or(Error::NotSublattice))
        .collect::<Result<_>>()?;
    IntegerMatrix::from_columns(&cols, l.rank())
}

pub fn sublattice_for(fan: &Fan, group: &GroupSpec) -> Result<(Lattice, Lattice, CosetLabeling)> {
    let l = fan.principal_lattice()?;
    let m = l.rank();
    let moduli: Vec<BigInt> = group.moduli.iter().map(|&d| BigInt::from(d)).collect();
    let images: Vec<Vec<BigInt>> = group.images_for(m).iter().map(|r| big(r)).collect();
    for r in &images {
        if r.len() != moduli.len() {
            return Err(Error::DimensionMismatch(format!(
                "group image has {} entries for {} cyclic factors",
                r.len(),
                moduli.len()
            )));
        }
    }
    let (sub, labeling) = cofinite_sublattice(&l, &moduli, &images)?;
    Ok((l, sub, labeling))
}

pub fn run_pipeline(spec: &PipelineSpec) -> Result<Pipeline> {
    let fan = &spec.fan;
    let (l, sub, labeling) = sublattice_for(fan, &spec.group)?;
    let k = coefficient_matrix(&l, &sub)?;
    let b = fan.ray_matrix();
    let epsilon = if spec.epsilon.is_empty() {
        vec![Q::zero(); fan.n_rays()]
    } else {
        spec.epsilon.clone()
    };
    let arr = Arrangement::new(&b, &epsilon)?;
    let at_zero = epsilon.iter().all(Zero::is_zero);
    let gate = Gate {
        vertices_equal_lattice: at_zero && vertices_equal_lattice(&arr),
        transversal: check_transversality(&arr).transversal,
    };
    if !gate.vertices_equal_lattice && !gate.transversal {
        return Err(Error::DegenerateArrangement(
            "vertices are not lattice points and intersections are not transversal; choose a generic epsilon".into(),
        ));
    }
    let need = required_window(&arr, &k);
    let window = match spec.window {
        Some(w) => w,
        None => default_window(&b).max(need),
    };
    if window < need {
        return Err(Error::WindowTooSmall {
            given: window,
            required: need,
        });
    }
    let cx = build_arrangement(&ArrangementSpec {
        basis: b,
        epsilon,
        window,
    })?;
    let complex = quotient_complex(&cx, &k)?;
    Ok(Pipeline {
        fan: fan.clone(),
        lattice: l,
        sublattice: sub,
        labeling,
        translation: k,
        gate,
        complex,
    })
}

/// Index of the translation lattice, as a machine integer.
pub fn group_order(p: &Pipeline) -> u64 {
    p.labeling.group.order().to_u64().unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::examples::*;
    use crate::io::parse_rational_list;

    fn run(fan: Fan, eps: &str, group: GroupSpec) -> Result<Pipeline> {
        run_pipeline(&PipelineSpec {
            fan,
            epsilon: parse_rational_list(eps)?,
            group,
            window: None,
        })
    }

    #[test]
    fn p2_gate_uses_lattice_vertices() {
        let p = run(p2(), "", GroupSpec::trivial()).unwrap();
        assert!(p.gate.vertices_equal_lattice);
        assert!(!p.gate.transversal);
        assert_eq!(p.complex.f_vector(), vec![1, 3, 2]);
    }

    #[test]
    fn p1_mu6() {
        let p = run(p1(), "", GroupSpec::cyclic(6)).unwrap();
        assert_eq!(p.complex.f_vector(), vec![6, 6]);
        assert_eq!(group_order(&p), 6);
    }

    #[test]
    fn explicit_images() {
        let g = GroupSpec::parse("2", Some("1;0")).unwrap();
        let p = run(p2(), "", g).unwrap();
        assert_eq!(p.complex.f_vector(), vec![2, 6, 4]);
        let bad = GroupSpec::parse("2", Some("0;0")).unwrap();
        assert!(matches!(run(p2(), "", bad), Err(Error::NotSurjective { .. })));
    }

    #[test]
    fn non_generic_shift_rejected() {
        let err = run(double_blowup(), "", GroupSpec::trivial()).unwrap_err();
        assert!(matches!(err, Error::DegenerateArrangement(_)));
        assert!(run(double_blowup(), "1/100,1/30,0,0,1/70", GroupSpec::trivial()).is_ok());
    }

    #[test]
    fn explicit_small_window() {
        let err = run_pipeline(&PipelineSpec {
            fan: p1(),
            epsilon: vec![],
            group: GroupSpec::cyclic(6),
            window: Some(2),
        })
        .unwrap_err();
        assert_eq!(err.code(), "window_too_small");
    }
}
