//! Seeded randomized checks of the library against independent oracles.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::{covering_map, vertices_equal_lattice, Arrangement};
use crate::diagonal::{floor_shift_check, in_lattice_module};
use crate::error::Result;
use crate::fan::{examples, Fan};
use crate::lattice::{big, box_lattice_point, is_unimodular, IntegerMatrix, Lattice};
use crate::pipeline::{run_pipeline, GroupSpec, PipelineSpec};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub trials: usize,
    pub failures: Vec<String>,
}

impl PropertyOutcome {
    fn new(name: &str) -> Self {
        PropertyOutcome {
            name: name.into(),
            trials: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `⌊p + v⌋ = ⌊p⌋ + v` for random rational `p` and random `v` in the lattice of a sample fan.
pub fn floor_shift_trials(seed: u64, trials: usize) -> Result<PropertyOutcome> {
    let mut r = rng(seed);
    let mut out = PropertyOutcome::new("floor_shift_check");
    let fans = [examples::p1(), examples::p2(), examples::blp2()];
    for _ in 0..trials {
        let fan = &fans[r.gen_range(0..fans.len())];
        let b = fan.ray_matrix();
        let t: Vec<i64> = (0..fan.dim).map(|_| r.gen_range(-20..=20)).collect();
        let v: Vec<i64> = b.mul_vec(&big(&t)).iter().map(|x| i64::try_from(x).unwrap()).collect();
        let p: Vec<Q> = (0..fan.n_rays())
            .map(|_| BigRational::new(r.gen_range(-500..=500).into(), r.gen_range(1..=60).into()))
            .collect();
        out.record(floor_shift_check(&p, &v), || format!("p={p:?} v={v:?}"));
    }
    Ok(out)
}

/// Membership in the lattice module against enumeration of `u ∈ L` with `|u| ≤ 5`.
pub fn module_membership_trials(seed: u64, trials: usize) -> Result<PropertyOutcome> {
    let mut r = rng(seed);
    let mut out = PropertyOutcome::new("in_lattice_module");
    let fans = [examples::p1(), examples::p2(), examples::blp2()];
    let mut tables = Vec::new();
    for fan in &fans {
        let l = fan.principal_lattice()?;
        let b = fan.ray_matrix();
        // every ray set here contains a coordinate basis, so |t| ≤ |u|
        let pts: Vec<Vec<i64>> = (0..fan.dim)
            .map(|_| -5i64..=5)
            .multi_cartesian_product()
            .map(|t| b.mul_vec(&big(&t)).iter().map(|x| i64::try_from(x).unwrap()).collect::<Vec<i64>>())
            .filter(|u| u.iter().all(|x| x.abs() <= 5))
            .collect();
        tables.push((l, pts));
    }
    for _ in 0..trials {
        let k = r.gen_range(0..fans.len());
        let (l, pts) = &tables[k];
        let n = fans[k].n_rays();
        let w: Vec<i64> = (0..2 * n).map(|_| r.gen_range(-5..=5)).collect();
        let brute = pts.iter().any(|u| (0..n).all(|i| u[i] <= w[i] && -u[i] <= w[n + i]));
        out.record(in_lattice_module(&w, l) == brute, || format!("w={w:?}"));
    }
    Ok(out)
}

fn random_basis(r: &mut ChaCha8Rng, with_identity: bool) -> Option<IntegerMatrix> {
    let m = r.gen_range(1..=2);
    let n = r.gen_range(m + 1..=4);
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        if with_identity && i < m {
            rows.push((0..m).map(|j| i64::from(i == j)).collect());
        } else {
            rows.push((0..m).map(|_| r.gen_range(-2..=2)).collect());
        }
    }
    let b = IntegerMatrix::from_rows(&rows);
    (b.rank() == m).then_some(b)
}

/// `box_lattice_point` against enumeration, on lattices whose first coordinates are free.
pub fn box_point_trials(seed: u64, trials: usize) -> Result<PropertyOutcome> {
    let mut r = rng(seed);
    let mut out = PropertyOutcome::new("box_lattice_point");
    while out.trials < trials {
        let Some(b) = random_basis(&mut r, true) else { continue };
        let (n, m) = (b.rows(), b.cols());
        let l = Lattice::new(b.clone())?;
        let lo: Vec<i64> = (0..n).map(|_| r.gen_range(-4..=3)).collect();
        let hi: Vec<i64> = lo.iter().map(|&a| a + r.gen_range(0..=3)).collect();
        let brute = (0..m)
            .map(|_| -7i64..=7)
            .multi_cartesian_product()
            .map(|t| b.mul_vec(&big(&t)))
            .any(|u| u.iter().zip(&lo).zip(&hi).all(|((x, a), c)| *x >= BigInt::from(*a) && *x <= BigInt::from(*c)));
        let found = box_lattice_point(&l, &big(&lo), &big(&hi));
        let sound = found.as_ref().is_none_or(|u| {
            l.contains(u) && u.iter().zip(&lo).zip(&hi).all(|((x, a), c)| *x >= BigInt::from(*a) && *x <= BigInt::from(*c))
        });
        out.record(sound && found.is_some() == brute, || format!("B={:?} lo={lo:?} hi={hi:?}", b.to_rows()));
    }
    Ok(out)
}

/// Unimodularity by minors against the vertices of the undeformed arrangement being the lattice.
pub fn unimodularity_trials(seed: u64, trials: usize) -> Result<PropertyOutcome> {
    let mut r = rng(seed);
    let mut out = PropertyOutcome::new("unimodularity");
    while out.trials < trials {
        let Some(b) = random_basis(&mut r, false) else { continue };
        let zero = vec![Q::from_integer(0.into()); b.rows()];
        let arr = Arrangement::new(&b, &zero)?;
        out.record(is_unimodular(&b)? == vertices_equal_lattice(&arr), || {
            format!("B={:?}", b.to_rows())
        });
    }
    Ok(out)
}

fn complete_cases(r: &mut ChaCha8Rng, count: usize) -> Vec<(Fan, &'static str, i64)> {
    let fixed: Vec<(Fan, &'static str)> = vec![
        (examples::p1(), ""),
        (examples::p2(), ""),
        (examples::blp2(), "1/100,0,0,1/100"),
        (examples::blp2_other(), "0,1/100,0,1/100"),
    ];
    (0..count)
        .map(|_| {
            let (f, e) = fixed[r.gen_range(0..fixed.len())].clone();
            let d = if f.n_rays() <= 3 { r.gen_range(1..=4) } else { r.gen_range(1..=2) };
            (f, e, d)
        })
        .collect()
}

/// Quotient complexes of complete fans are tori, so `χ = 0`, and covers have `|G|` times the cells.
pub fn quotient_trials(seed: u64, trials: usize) -> Result<Vec<PropertyOutcome>> {
    let mut r = rng(seed);
    let mut euler = PropertyOutcome::new("euler_characteristic");
    let mut ratio = PropertyOutcome::new("covering_f_vector_ratio");
    for (fan, eps, d) in complete_cases(&mut r, trials) {
        let spec = |group| PipelineSpec {
            fan: fan.clone(),
            epsilon: crate::io::parse_rational_list(eps).expect("fixed epsilon"),
            group,
            window: None,
        };
        let coarse = run_pipeline(&spec(GroupSpec::trivial()))?;
        let fine = run_pipeline(&spec(GroupSpec::cyclic(d)))?;
        euler.record(fine.complex.euler_characteristic() == 0, || format!("{eps} mod {d}"));
        let ok = fine
            .complex
            .f_vector()
            .iter()
            .zip(coarse.complex.f_vector())
            .all(|(a, b)| *a as i64 == b as i64 * d)
            && covering_map(&fine.complex, &coarse.complex)?.is_valid();
        ratio.record(ok, || format!("{eps} mod {d}"));
    }
    Ok(vec![euler, ratio])
}

/// Every suite, with `trials` for the cheap ones and fewer pipeline runs.
pub fn run_all(seed: u64, trials: usize) -> Result<Vec<PropertyOutcome>> {
    let mut out = vec![
        floor_shift_trials(seed, trials)?,
        module_membership_trials(seed.wrapping_add(1), trials)?,
        box_point_trials(seed.wrapping_add(2), trials)?,
        unimodularity_trials(seed.wrapping_add(3), trials.min(200))?,
    ];
    out.extend(quotient_trials(seed.wrapping_add(4), (trials / 50).clamp(1, 20))?);
    Ok(out)
}
