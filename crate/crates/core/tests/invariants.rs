use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use toric_diagonal::cech::WeightedProjLine;
use toric_diagonal::diagonal::{floor_shift_check, in_lattice_module};
use toric_diagonal::fan::{examples, Fan};
use toric_diagonal::io::parse_rational_list;
use toric_diagonal::lattice::{big, box_lattice_point, IntegerMatrix, LaurentMonomial, Lattice};
use toric_diagonal::morita::{morita_check, CharacterGroup, MoritaSetup};
use toric_diagonal::pipeline::{run_pipeline, GroupSpec, PipelineSpec};

fn p2_points(r: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            out.push([a, b, -a - b]);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn floor_commutes_with_lattice_shifts(
        nums in prop::collection::vec(-400i64..400, 3),
        dens in prop::collection::vec(1i64..50, 3),
        t in prop::collection::vec(-30i64..30, 2),
    ) {
        let p: Vec<BigRational> = nums.iter().zip(&dens).map(|(n, d)| BigRational::new((*n).into(), (*d).into())).collect();
        let v = [t[0], t[1], -t[0] - t[1]];
        prop_assert!(floor_shift_check(&p, &v));
    }

    #[test]
    fn module_membership_matches_enumeration(w in prop::collection::vec(-3i64..=3, 6)) {
        let l = examples::p2().principal_lattice().unwrap();
        // any witness is bounded by max |w_i| ≤ 3 in each coordinate
        let brute = p2_points(3).iter().any(|u| (0..3).all(|i| u[i] <= w[i] && -u[i] <= w[3 + i]));
        prop_assert_eq!(in_lattice_module(&w, &l), brute);
    }

    #[test]
    fn module_is_closed_under_multiplication(w in prop::collection::vec(-3i64..=3, 8), bump in prop::collection::vec(0i64..3, 8)) {
        let l = examples::blp2().principal_lattice().unwrap();
        let bigger: Vec<i64> = w.iter().zip(&bump).map(|(a, b)| a + b).collect();
        if in_lattice_module(&w, &l) {
            prop_assert!(in_lattice_module(&bigger, &l));
        }
    }

    #[test]
    fn box_points_are_found(a in -3i64..=3, b in -3i64..=3, lo in prop::collection::vec(-4i64..=2, 3), width in prop::collection::vec(0i64..=3, 3)) {
        let basis = IntegerMatrix::from_rows(&[vec![1i64, 0], vec![0, 1], vec![a, b]]);
        let l = Lattice::new(basis).unwrap();
        let hi: Vec<i64> = lo.iter().zip(&width).map(|(x, w)| x + w).collect();
        let brute = (lo[0]..=hi[0]).any(|s| (lo[1]..=hi[1]).any(|t| (lo[2]..=hi[2]).contains(&(a * s + b * t))));
        let found = box_lattice_point(&l, &big(&lo), &big(&hi));
        prop_assert_eq!(found.is_some(), brute);
        if let Some(u) = found {
            prop_assert!(l.contains(&u));
            for i in 0..3 {
                prop_assert!(u[i] >= BigInt::from(lo[i]) && u[i] <= BigInt::from(hi[i]));
            }
        }
    }

    #[test]
    fn laurent_division_inverts_multiplication(a in prop::collection::vec(-5i64..5, 4), b in prop::collection::vec(-5i64..5, 4)) {
        let (x, y) = (LaurentMonomial::x(a), LaurentMonomial::x(b));
        prop_assert_eq!(x.mul(&y).div(&y), x.clone());
        prop_assert!(x.lcm(&y).divides(&x.lcm(&y).mul(&LaurentMonomial::x(vec![1; 4]))));
    }

    #[test]
    fn weighted_line_cohomology(a in 1i64..6, b in 1i64..6, n in -25i64..25) {
        prop_assume!(num_integer::gcd(a, b) == 1);
        let x = WeightedProjLine::new(a, b).unwrap();
        prop_assert_eq!(x.h_dims(n), x.h_dims_cech(n));
        prop_assert!(x.serre_duality_holds(n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quotient_complexes_are_tori(d in 1i64..=5, which in 0usize..3) {
        let (fan, eps): (Fan, &str) = [
            (examples::p1(), ""),
            (examples::p2(), ""),
            (examples::blp2(), "1/100,0,0,1/100"),
        ][which].clone();
        let spec = |group| PipelineSpec { fan: fan.clone(), epsilon: parse_rational_list(eps).unwrap(), group, window: None };
        let coarse = run_pipeline(&spec(GroupSpec::trivial())).unwrap();
        let fine = run_pipeline(&spec(GroupSpec::cyclic(d))).unwrap();
        prop_assert_eq!(fine.complex.euler_characteristic(), 0);
        let scaled: Vec<usize> = coarse.complex.f_vector().iter().map(|f| f * d as usize).collect();
        prop_assert_eq!(fine.complex.f_vector(), scaled);
    }

    #[test]
    fn morita_on_cyclic_groups(d in 2i64..=7, w in 1i64..7) {
        prop_assume!(num_integer::gcd(d, w) == 1);
        let s = MoritaSetup::new(CharacterGroup::new(vec![d]).unwrap(), vec![vec![w]]).unwrap();
        prop_assert!(morita_check(&s, 4).passed());
    }
}

#[test]
fn fans_round_trip_through_json() {
    for fan in [examples::p1(), examples::p2(), examples::blp2(), examples::double_blowup()] {
        let s = serde_json::to_string(&fan).unwrap();
        assert_eq!(Fan::from_json(&s).unwrap(), fan);
    }
}
