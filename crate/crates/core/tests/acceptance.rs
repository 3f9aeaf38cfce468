//! End-to-end acceptance checks. Runs without the libtest harness and prints one line per
//! criterion; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use toric_diagonal::arrangement::{check_transversality, covering_map, Arrangement};
use toric_diagonal::cech::{exceptional_collection_check, koszul_sequence_check, WeightedProjLine};
use toric_diagonal::diagonal::{cokernel_report, DEFAULT_KMAX};
use toric_diagonal::fan::{examples, Fan};
use toric_diagonal::io::parse_rational_list;
use toric_diagonal::morita::{morita_check, CharacterGroup, MoritaSetup};
use toric_diagonal::pipeline::{run_pipeline, GroupSpec, Pipeline, PipelineSpec};
use toric_diagonal::properties::run_all;
use toric_diagonal::resolution::{
    cellular_differential, exactness_certificate, graded_twists, matches_up_to_symmetry, parse_matrix,
    verify_d_squared, Polynomial,
};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn pipeline(fan: Fan, eps: &str, group: GroupSpec) -> Result<Pipeline, String> {
    let epsilon = parse_rational_list(eps).map_err(|e| e.to_string())?;
    run_pipeline(&PipelineSpec {
        fan,
        epsilon,
        group,
        window: None,
    })
    .map_err(|e| e.to_string())
}

fn matrix(rows: &[&[&str]], vars: usize) -> Vec<Vec<Polynomial>> {
    parse_matrix(rows, vars).expect("well-formed target matrix")
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let t = start.elapsed();
    ensure!(t < limit, "took {t:?}, limit {limit:?}");
    Ok(())
}

fn p2_pipeline() -> Outcome {
    let start = Instant::now();
    let p = pipeline(examples::p2(), "", GroupSpec::trivial())?;
    let cc = cellular_differential(&p.complex).map_err(|e| e.to_string())?;
    ensure!(cc.f_vector() == [1, 3, 2], "f-vector {:?}", cc.f_vector());
    let d1 = matrix(&[&["y1x3 - x1y3", "x2y3 - x3y2", "x1y2 - x2y1"]], 3);
    let d2 = matrix(&[&["y2", "x2"], &["y1", "x1"], &["y3", "x3"]], 3);
    ensure!(matches_up_to_symmetry(&cc.differentials[0].dense(), &d1), "d1 differs");
    ensure!(matches_up_to_symmetry(&cc.differentials[1].dense(), &d2), "d2 differs");
    ensure!(verify_d_squared(&cc), "d^2 != 0");
    let r = exactness_certificate(&p.complex, None).map_err(|e| e.to_string())?;
    ensure!(r.resolves_image(), "failures {:?} {:?}", r.failures, r.index_zero_defects);
    within(start, Duration::from_secs(5))
}

const BLP2_TABLE: [[&str; 10]; 5] = [
    ["0", "0", "0", "0", "1", "-1", "0", "x3y4", "0", "-x3y1"],
    ["0", "1", "-y2", "0", "0", "1", "0", "0", "-x3y1", "0"],
    ["0", "0", "0", "1", "-1", "0", "-x1y4", "0", "0", "x1y3"],
    ["y2", "-1", "0", "-1", "0", "0", "0", "0", "x1y3", "0"],
    ["-x2", "0", "x2", "0", "0", "0", "x4y1", "-x4y3", "0", "0"],
];

fn blp2_nef_chamber() -> Outcome {
    let start = Instant::now();
    let fan = examples::blp2();
    let eps = parse_rational_list("1/100,0,0,1/100").map_err(|e| e.to_string())?;
    let arr = Arrangement::new(&fan.ray_matrix(), &eps).map_err(|e| e.to_string())?;
    let tr = check_transversality(&arr);
    ensure!(tr.transversal, "not transversal at {:?}", tr.witnesses);
    let p = pipeline(fan, "1/100,0,0,1/100", GroupSpec::trivial())?;
    let cc = cellular_differential(&p.complex).map_err(|e| e.to_string())?;
    ensure!(cc.f_vector() == [5, 10, 5], "f-vector {:?}", cc.f_vector());
    let rows: Vec<&[&str]> = BLP2_TABLE.iter().map(|r| &r[..]).collect();
    ensure!(
        matches_up_to_symmetry(&cc.differentials[0].dense(), &matrix(&rows, 4)),
        "table differs: {:?}",
        cc.differentials[0].display(4)
    );
    ensure!(verify_d_squared(&cc), "d^2 != 0");
    within(start, Duration::from_secs(30))
}

fn cokernels() -> Outcome {
    let p = pipeline(examples::blp2(), "1/100,0,0,1/100", GroupSpec::trivial())?;
    let r = cokernel_report(&p, DEFAULT_KMAX).map_err(|e| e.to_string())?;
    let extra: Vec<&str> = r.extra_monomials.iter().map(|v| v.display.as_str()).collect();
    ensure!(extra == ["y2/x2"], "nef extras {extra:?}");
    let c = &r.certificates[0];
    ensure!(c.is_certified() && c.verify(&p.lattice), "nef certificate");
    ensure!(c.per_generator.iter().all(|w| w.k == 1), "some generator needs k > 1");

    let p = pipeline(examples::blp2_other(), "0,1/100,0,1/100", GroupSpec::trivial())?;
    let r = cokernel_report(&p, DEFAULT_KMAX).map_err(|e| e.to_string())?;
    let mut extra: Vec<&str> = r.extra_monomials.iter().map(|v| v.display.as_str()).collect();
    extra.sort_unstable();
    ensure!(extra == ["y1/x1", "y3/x3"], "other extras {extra:?}");
    ensure!(r.is_torsion(), "uncertified: {:?}", r.failures);
    ensure!(r.certificates.iter().all(|c| c.verify(&p.lattice)), "witness fails to verify");
    // y1/x1 is killed by (u, -u) with u = 0, e3 - e1 or e4 - e1 - e2 depending on which of
    // x1, x3, x4·y2 divides the generator
    let c = r.certificates.iter().find(|c| c.display == "y1/x1").ok_or("no y1/x1 certificate")?;
    let n = 4;
    for w in &c.per_generator {
        let g = &w.generator;
        let u: [i64; 4] = if g[0] == 1 {
            [0, 0, 0, 0]
        } else if g[2] == 1 {
            [-1, 0, 1, 0]
        } else {
            ensure!(g[3] == 1 && g[n + 1] == 1, "unexpected generator {g:?}");
            [-1, -1, 0, 1]
        };
        ensure!(p.lattice.contains(&u.map(BigInt::from)), "{u:?} not in L");
        let e: Vec<i64> = c.monomial.iter().zip(g).map(|(a, b)| a + b).collect();
        ensure!((0..n).all(|i| u[i] <= e[i] && -u[i] <= e[n + i]), "{u:?} does not divide {e:?}");
    }
    Ok(())
}

fn circulant(d: usize) -> Vec<Vec<Polynomial>> {
    let rows: Vec<Vec<&str>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| match () {
                    _ if i == j => "-x1y2",
                    _ if i == (j + 1) % d => "x2y1",
                    _ => "0",
                })
                .collect()
        })
        .collect();
    let slices: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
    matrix(&slices, 2)
}

fn p1_quotients() -> Outcome {
    let coarse = pipeline(examples::p1(), "", GroupSpec::trivial())?;
    for d in [6usize, 4] {
        let p = pipeline(examples::p1(), "", GroupSpec::cyclic(d as i64))?;
        ensure!(p.complex.f_vector() == [d, d], "f-vector {:?}", p.complex.f_vector());
        let cc = cellular_differential(&p.complex).map_err(|e| e.to_string())?;
        ensure!(matches_up_to_symmetry(&cc.differentials[0].dense(), &circulant(d)), "mod {d}: not circulant");
        let cover = covering_map(&p.complex, &coarse.complex).map_err(|e| e.to_string())?;
        ensure!(cover.is_valid() && cover.degree == d as u64, "mod {d}: cover {cover:?}");
        if d == 4 {
            let dm = p.degree_map();
            let g = graded_twists(&cc, &dm).map_err(|e| e.to_string())?;
            let mut chars = Vec::new();
            for t in &g.twists[0] {
                ensure!(t.x.free.iter().chain(&t.y.free).all(|x| *x == BigInt::from(0)), "free part");
                ensure!(dm.group.neg(&t.x.torsion) == t.y.torsion, "twist not antidiagonal");
                chars.push(t.x.torsion.clone());
            }
            chars.sort();
            chars.dedup();
            ensure!(chars.len() == 4, "characters {chars:?}");
        }
    }
    Ok(())
}

fn cech() -> Outcome {
    let start = Instant::now();
    let x = WeightedProjLine::new(1, 2).map_err(|e| e.to_string())?;
    ensure!(x.h_dims(-1) == (0, 0) && x.h_dims(-2) == (0, 0), "vanishing");
    let ex = exceptional_collection_check(&x, &[0, 1, 2]).map_err(|e| e.to_string())?;
    ensure!(ex.exceptional, "{:?}", ex.violations);
    for n in -30..=30 {
        ensure!(x.h_dims(n) == x.h_dims_cech(n), "n = {n}");
    }
    let k = koszul_sequence_check(&x, 8);
    ensure!(k.exact && k.degrees.len() == 9, "{:?}", k.degrees);
    within(start, Duration::from_secs(5))
}

fn morita() -> Outcome {
    let start = Instant::now();
    for d in [4, 6] {
        let g = CharacterGroup::new(vec![d]).map_err(|e| e.to_string())?;
        let s = MoritaSetup::new(g, vec![vec![1]]).map_err(|e| e.to_string())?;
        let r = morita_check(&s, 6);
        ensure!(r.bijection, "Z/{d}: not a bijection");
        ensure!(r.action_compat, "Z/{d}: actions differ");
        ensure!(r.dims_agree, "Z/{d}: graded dimensions differ");
    }
    within(start, Duration::from_secs(5))
}

fn properties() -> Outcome {
    let outcomes = run_all(0, 1000).map_err(|e| e.to_string())?;
    for o in &outcomes {
        ensure!(o.passed(), "{}: {} of {} failed, first {:?}", o.name, o.failures.len(), o.trials, o.failures[0]);
    }
    let names: Vec<&str> = outcomes.iter().map(|o| o.name.as_str()).collect();
    ensure!(names.len() == 6, "suites {names:?}");
    ensure!(outcomes[0].trials == 1000, "floor shift ran {} trials", outcomes[0].trials);
    Ok(())
}

fn negative_controls() -> Outcome {
    let fan = examples::double_blowup();
    ensure!(!fan.is_unimodular().map_err(|e| e.to_string())?, "iterated blow-up reported unimodular");
    let p = pipeline(examples::p2(), "", GroupSpec::trivial())?;
    let cc = cellular_differential(&p.complex).map_err(|e| e.to_string())?;
    ensure!(!verify_d_squared(&cc.with_flipped_sign(2, 0)), "sign flip kept d^2 = 0");
    let edge = p.complex.cells_of_dim(1)[0];
    let r = exactness_certificate(&p.complex.without_cell(edge), None).map_err(|e| e.to_string())?;
    ensure!(!r.is_exact(), "edge-deleted complex certified exact");
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("P2 resolution", p2_pipeline),
        ("Bl P2 nef chamber", blp2_nef_chamber),
        ("cokernel torsion", cokernels),
        ("P1 quotient stacks", p1_quotients),
        ("weighted projective line", cech),
        ("Morita equivalence", morita),
        ("property suites", properties),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let t = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {} {name}: PASS ({t:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({t:.2}s): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
