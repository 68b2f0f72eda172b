//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines;
//! every tolerance is pinned in code.

use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use okalab::branchlog::{
    continue_branch, principal_branch, winding_number, BranchedPoint, LoopPath,
};
use okalab::bundlecalc::ExponentMatrix;
use okalab::curvelab::{count_intersections, CurveTarget, LaurentPoly, LaurentTerm};
use okalab::latticeforms::{pair_form, pair_form_parts, GaussianLatticeVector, HermitianFormSpec};
use okalab::monodromy::{
    chern_pairing, torus_intersection_count, w_loop_factor, z_loop_factor, FunctionHandle,
    TorusCycle,
};
use okalab::steinfn::{eval_fminus, eval_fplus, zero_count_annulus, TruncationBudget};

const TWO_PI: f64 = 2.0 * PI;

fn budget() -> TruncationBudget {
    TruncationBudget::new(1e-12, 256).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn run_cli(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_okalab"))
        .args(args)
        .output()
        .expect("failed to launch the okalab binary");
    (
        String::from_utf8_lossy(&out.stdout).trim_end().to_string(),
        out.status.code().unwrap_or(-1),
    )
}

fn config_path(name: &str) -> String {
    format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn criterion_01_chern_pairing_reproduction() {
    let cases: Vec<(Vec<&str>, i64)> = vec![
        (vec!["pairing", "--handle", "fplus"], 1),
        (vec!["pairing", "--handle", "fminus"], -1),
        (vec!["pairing", "--handle", "fplus*fminus"], 0),
        (
            vec!["pairing", "--handle", "fplus-shift", "--lambda", "1,0"],
            1,
        ),
    ];
    for (args, expected) in cases {
        let start = Instant::now();
        let (stdout, code) = run_cli(&args);
        let elapsed = start.elapsed().as_secs_f64();
        assert_eq!(code, 0, "pairing run failed: {args:?}");
        let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
        assert_eq!(v["pairing"].as_i64().unwrap(), expected, "args {args:?}");
        assert!(v["residual"].as_f64().unwrap() < 0.1);
        assert!(elapsed < 10.0, "pairing took {elapsed:.1}s");
    }
    println!(
        "ACCEPTANCE 1 PASS: pairing 1/-1/0/1 on the default torus, residual < 0.1, < 10 s each"
    );
}

/// Draw a random branched point and w in the given annuli, retrying until
/// every listed operation is admissible at it.
struct PointSampler {
    rng: ChaCha8Rng,
}

impl PointSampler {
    fn new(seed: u64) -> Self {
        PointSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn draw_raw(&mut self, rmin: f64, rmax: f64, shifts: i64) -> (BranchedPoint, Complex64) {
        let z = Complex64::from_polar(
            self.rng.random_range(rmin..rmax),
            self.rng.random_range(0.0..TWO_PI),
        );
        let shift = self.rng.random_range(-shifts..=shifts);
        let zb = principal_branch(z).unwrap().shifted(shift);
        let w = Complex64::from_polar(
            self.rng.random_range(rmin..rmax),
            self.rng.random_range(0.0..TWO_PI),
        );
        (zb, w)
    }
}

#[test]
fn criterion_02_monodromy_relations() {
    let start = Instant::now();
    let b = budget();
    let fplus = FunctionHandle::fplus();
    let fminus = FunctionHandle::fminus();
    let mut sampler = PointSampler::new(0xA11CE);
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < 100 {
        attempts += 1;
        assert!(attempts < 10_000, "sampling starved");
        let (zb, w) = sampler.draw_raw(0.5, 2.0, 1);
        let Ok(zp) = z_loop_factor(&fplus, &zb, w, &b) else {
            continue;
        };
        let Ok(zm) = z_loop_factor(&fminus, &zb, w, &b) else {
            continue;
        };
        let Ok(wp) = w_loop_factor(&fplus, &zb, w, &b) else {
            continue;
        };
        let Ok(wm) = w_loop_factor(&fminus, &zb, w, &b) else {
            continue;
        };
        assert!(
            (zp - w).norm() / w.norm() <= 1e-9,
            "z-loop factor of F+ deviates: {zp} vs {w}"
        );
        assert!(
            (zm - w.inv()).norm() * w.norm() <= 1e-9,
            "z-loop factor of F- deviates: {zm} vs {}",
            w.inv()
        );
        assert!((wp - c(1.0, 0.0)).norm() <= 1e-9);
        assert!((wm - c(1.0, 0.0)).norm() <= 1e-9);
        accepted += 1;
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "monodromy relations took {elapsed:.1}s");
    println!(
        "ACCEPTANCE 2 PASS: z/w loop factors at 100 random admissible points within 1e-9, < 30 s"
    );
}

#[test]
fn criterion_03_reflection_identity() {
    let b = budget();
    let mut sampler = PointSampler::new(0xBEEF);
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < 100 {
        attempts += 1;
        assert!(attempts < 10_000, "sampling starved");
        let (zb, w) = sampler.draw_raw(0.5, 2.0, 1);
        let lhs = eval_fminus(&zb, w, &b).unwrap();
        let inv_point = zb.point().inv();
        let zb_inv = BranchedPoint::new(inv_point, -zb.log_value()).unwrap();
        let rhs = eval_fplus(&zb_inv, w, &b).unwrap();
        if lhs.value.norm() == 0.0 && rhs.value.norm() == 0.0 {
            accepted += 1;
            continue;
        }
        let combined =
            lhs.rel_error_bound * lhs.value.norm() + rhs.rel_error_bound * rhs.value.norm();
        assert!(
            (lhs.value - rhs.value).norm() <= combined,
            "reflection identity violated at zb = {:?}, w = {w}",
            zb
        );
        accepted += 1;
    }
    println!("ACCEPTANCE 3 PASS: F-(z,w) = F+(1/z,w) within combined bounds at 100 random points");
}

/// Multiplier contributed by `extra` more factors per product, accumulated
/// through a log series so the oracle's own rounding stays at ulp level.
fn extension_ratio(
    zb: &BranchedPoint,
    w: Complex64,
    from_nu: u32,
    from_mu: u32,
    extra: u32,
) -> Complex64 {
    let l = zb.log_value();
    let i = c(0.0, 1.0);
    let mut log_sum = c(0.0, 0.0);
    for nu in from_nu as i64..(from_nu + extra) as i64 {
        // w / e^{i l + 2νπ}, computed without forming the huge denominator.
        let a = w * (-(i * l) - c(TWO_PI * nu as f64, 0.0)).exp();
        log_sum += -a - a * a * 0.5;
    }
    for mu in (from_mu + 1) as i64..=(from_mu + extra) as i64 {
        let a = (i * l - c(TWO_PI * mu as f64, 0.0)).exp() / w;
        log_sum += -a - a * a * 0.5;
    }
    log_sum.exp()
}

#[test]
fn criterion_04_certification_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let targets = [1e-6, 1e-9, 1e-12];
    let mut violations = 0usize;
    for i in 0..1000usize {
        let z = Complex64::from_polar(rng.random_range(0.25..4.0), rng.random_range(0.0..TWO_PI));
        let shift = rng.random_range(-1i64..=1);
        let zb = principal_branch(z).unwrap().shifted(shift);
        assert!(zb.log_value().im.abs() <= 3.0 * PI);
        let w = Complex64::from_polar(rng.random_range(0.25..4.0), rng.random_range(0.0..TWO_PI));
        let b = TruncationBudget::new(targets[i % targets.len()], 256).unwrap();
        let ev = eval_fplus(&zb, w, &b).unwrap();
        if ev.value.norm() == 0.0 {
            continue;
        }
        let ratio = extension_ratio(&zb, w, ev.nu_terms, ev.mu_terms, 50);
        let actual = (ratio.inv() - c(1.0, 0.0)).norm();
        if actual > ev.rel_error_bound {
            violations += 1;
            eprintln!(
                "violation at zb = {zb:?}, w = {w}: actual {actual:e} > bound {:e}",
                ev.rel_error_bound
            );
        }
        assert!(ev.rel_error_bound <= b.target_rel_error());
    }
    assert_eq!(violations, 0);
    println!("ACCEPTANCE 4 PASS: certified bound >= actual truncation error on 1000 random inputs, zero violations");
}

#[test]
fn criterion_05_zero_structure() {
    let b = budget();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE);
    for _ in 0..50 {
        let z = Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..TWO_PI));
        let shift = rng.random_range(-1i64..=1);
        let zb = principal_branch(z).unwrap().shifted(shift);
        let theta = zb.log_value().im;
        // Radii in the log-gaps between sheet moduli e^{-θ+2kπ}, jittered
        // but keeping a >= 0.1π log-distance from the sheets.
        let k_lo = rng.random_range(-2i64..=1);
        let span = rng.random_range(-1i64..=2);
        let jitter = |rng: &mut ChaCha8Rng| rng.random_range(-0.4 * PI..0.4 * PI);
        let mut r1 = (-theta + (2 * k_lo - 1) as f64 * PI + jitter(&mut rng)).exp();
        let mut r2 = (-theta + (2 * (k_lo + span) + 1) as f64 * PI + jitter(&mut rng)).exp();
        if r1 > r2 {
            std::mem::swap(&mut r1, &mut r2);
        }
        // Independent oracle: enumerate sheet moduli inside the annulus.
        let expected = (-10i64..=10)
            .filter(|&k| {
                let m = (-theta + TWO_PI * k as f64).exp();
                r1 < m && m < r2
            })
            .count() as i64;
        let got = zero_count_annulus(&zb, r1, r2, &b).unwrap();
        assert_eq!(
            got.winding, expected,
            "annulus ({r1}, {r2}) over theta = {theta}"
        );
    }
    println!("ACCEPTANCE 5 PASS: annulus zero counts match sheet enumeration on 50 random configurations");
}

#[test]
fn criterion_06_oracle_cross_validation() {
    let b = budget();
    let handles = vec![
        FunctionHandle::fplus(),
        FunctionHandle::fminus(),
        FunctionHandle::product(&[FunctionHandle::fplus(), FunctionHandle::fminus()]).unwrap(),
        FunctionHandle::fplus_shift(c(1.0, 0.0)),
        FunctionHandle::fplus_shift(c(1.0, 0.7)),
        FunctionHandle::product(&[FunctionHandle::fplus(), FunctionHandle::fplus()]).unwrap(),
        FunctionHandle::product(&[
            FunctionHandle::fplus(),
            FunctionHandle::fplus_shift(c(2.5, 0.0)),
        ])
        .unwrap(),
    ];
    let radii = [
        (1.0, 1.3),
        (0.8, 2.2),
        (1.2, 0.4),
        (0.95, 6.0),
        (1.05, 100.0),
    ];
    let mut combos = 0usize;
    for handle in &handles {
        let matrix = handle.exponent_matrix();
        let symbolic = matrix.symbolic_pairing(1, 2).unwrap();
        for &(rz, rw) in &radii {
            let torus = TorusCycle::new(rz, rw, 1).unwrap();
            let numeric = chern_pairing(handle, &torus, &b).unwrap();
            let direct = torus_intersection_count(&handle.sheet_families(), &torus).unwrap();
            assert_eq!(
                numeric.pairing,
                symbolic,
                "chern vs symbolic for {} at ({rz}, {rw})",
                handle.label()
            );
            assert_eq!(
                direct,
                symbolic,
                "intersection vs symbolic for {} at ({rz}, {rw})",
                handle.label()
            );
            combos += 1;
        }
    }
    assert!(combos >= 12);
    println!(
        "ACCEPTANCE 6 PASS: chern_pairing = torus_intersection_count = symbolic_pairing on {combos} combinations"
    );
}

#[test]
fn criterion_07_decision_procedure_fixtures() {
    let dplus = config_path("dplus.json");
    let reducible = config_path("reducible3.json");
    let cancel = config_path("dplus-dminus.json");

    let (out, code) = run_cli(&["oka", "decide", "--config", &dplus]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        r#"{"ambient_pairings":[{"cycle":[1,2],"pairing":1}],"support_pairings":[],"cousin2_on_tested":false,"extra_zero_on_tested":true,"rule_applied":"dimension-two","witness":null}"#
    );

    let (out2, code) = run_cli(&["oka", "decide", "--config", &reducible]);
    assert_eq!(code, 0);
    assert_eq!(
        out2,
        r#"{"ambient_pairings":[{"cycle":[1,2],"pairing":1},{"cycle":[1,3],"pairing":0},{"cycle":[2,3],"pairing":0}],"support_pairings":[{"cycle":[1,2],"coefficient":1,"pairing":1}],"cousin2_on_tested":false,"extra_zero_on_tested":false,"rule_applied":"cycle-test","witness":{"cycle":[1,2],"pairing":1}}"#
    );

    let (out3, code) = run_cli(&["oka", "decide", "--config", &cancel]);
    assert_eq!(code, 0);
    assert_eq!(
        out3,
        r#"{"ambient_pairings":[{"cycle":[1,2],"pairing":0}],"support_pairings":[],"cousin2_on_tested":true,"extra_zero_on_tested":true,"rule_applied":"dimension-two","witness":null}"#
    );

    // Determinism: identical invocation, byte-identical output.
    let (again, _) = run_cli(&["oka", "decide", "--config", &dplus]);
    assert_eq!(out, again);
    println!(
        "ACCEPTANCE 7 PASS: oka decide matches the exact JSON fixtures on all three scenarios"
    );
}

/// Brute-force real-basis oracle for the lattice form (independent of the
/// Gaussian-integer arithmetic in the library).
fn real_basis_oracle(
    omega: &HermitianFormSpec,
    u: &GaussianLatticeVector,
    v: &GaussianLatticeVector,
) -> i64 {
    let n = omega.n;
    let mut form = vec![vec![0i64; 2 * n]; 2 * n];
    for j in 0..n {
        form[j][n + j] += 2 * omega.d;
        form[n + j][j] -= 2 * omega.d;
    }
    if omega.offdiag {
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    form[j][n + k] += 1;
                    form[n + k][j] -= 1;
                    form[n + j][k] -= 1;
                    form[k][n + j] += 1;
                }
            }
        }
    }
    let coords = |x: &GaussianLatticeVector| -> Vec<i64> {
        x.e_coeffs().iter().chain(x.ie_coeffs()).copied().collect()
    };
    let (uc, vc) = (coords(u), coords(v));
    let mut total = 0;
    for p in 0..2 * n {
        for q in 0..2 * n {
            total += uc[p] * form[p][q] * vc[q];
        }
    }
    total
}

#[test]
fn criterion_08_takayama_claim() {
    for d in [2i64, 4] {
        let omega = HermitianFormSpec::new(3, d, true).unwrap();
        for j in [2usize, 3] {
            let u = GaussianLatticeVector::basis_ie(3, 1).unwrap();
            let v = GaussianLatticeVector::basis_e(3, j).unwrap();
            let p = pair_form(&omega, &u, &v).unwrap();
            assert_eq!(p, -2, "d = {d}, j = {j}");
            assert_eq!(p, real_basis_oracle(&omega, &u, &v));
            assert_ne!(p, 0);
        }
        for j in [1usize, 2, 3] {
            let u = GaussianLatticeVector::basis_e(3, j).unwrap();
            let v = GaussianLatticeVector::basis_ie(3, j).unwrap();
            let p = pair_form(&omega, &u, &v).unwrap();
            assert_eq!(p, 2 * d, "d = {d}, j = {j}");
            assert_eq!(p, real_basis_oracle(&omega, &u, &v));
        }
    }
    println!("ACCEPTANCE 8 PASS: pair_form(ie1, e_j) = -2 and pair_form(e_j, ie_j) = 2d exactly, matching the brute-force oracle");
}

#[test]
fn criterion_09_curve_counts() {
    let start = Instant::now();
    let z_minus_one = CurveTarget::Poly(
        LaurentPoly::new(vec![
            LaurentTerm {
                z_exp: 1,
                w_exp: 0,
                coeff: c(1.0, 0.0),
            },
            LaurentTerm {
                z_exp: 0,
                w_exp: 0,
                coeff: c(-1.0, 0.0),
            },
        ])
        .unwrap(),
    );
    assert_eq!(count_intersections(&z_minus_one, 7.0).unwrap().count, 3);
    assert_eq!(count_intersections(&z_minus_one, 1.0).unwrap().count, 1);

    let shifted = CurveTarget::SteinShift {
        lambda: c(1.0, 0.0),
        budget: budget(),
    };
    for radius in [5.0, 10.0, 20.0] {
        assert_eq!(count_intersections(&shifted, radius).unwrap().count, 0);
    }

    let growth = CurveTarget::Poly(
        LaurentPoly::new(vec![
            LaurentTerm {
                z_exp: 1,
                w_exp: 0,
                coeff: c(1.0, 0.0),
            },
            LaurentTerm {
                z_exp: 0,
                w_exp: 1,
                coeff: c(1.0, 0.0),
            },
            LaurentTerm {
                z_exp: 0,
                w_exp: 0,
                coeff: c(-2.0, 0.0),
            },
        ])
        .unwrap(),
    );
    let counts: Vec<i64> = [4.0, 8.0, 16.0, 32.0]
        .iter()
        .map(|&r| count_intersections(&growth, r).unwrap().count)
        .collect();
    for w in counts.windows(2) {
        assert!(w[1] >= w[0], "counts {counts:?} not nondecreasing");
    }
    assert!(counts[3] > counts[0], "counts {counts:?} show no growth");

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "curve counts took {elapsed:.1}s");
    println!(
        "ACCEPTANCE 9 PASS: curve counts 3/1, shifted-divisor 0s, and growth {counts:?}, < 60 s"
    );
}

#[test]
fn criterion_10_property_suites() {
    let cases = 256;

    // Winding additivity and conjugation on monomials.
    let mut runner = TestRunner::new(PropConfig::with_cases(cases));
    runner
        .run(&(-3i64..=3, -3i64..=3), |(a, b)| {
            let n = 64;
            let circle: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new(0.0, TWO_PI * i as f64 / n as f64).exp())
                .collect();
            let fa: Vec<Complex64> = circle.iter().map(|w| w.powi(a as i32)).collect();
            let fb: Vec<Complex64> = circle.iter().map(|w| w.powi(b as i32)).collect();
            let product: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
            let wa = winding_number(&fa).unwrap().winding;
            let wb = winding_number(&fb).unwrap().winding;
            prop_assert_eq!(winding_number(&product).unwrap().winding, wa + wb);
            let conj: Vec<Complex64> = product.iter().map(|v| v.conj()).collect();
            prop_assert_eq!(winding_number(&conj).unwrap().winding, -(wa + wb));
            Ok(())
        })
        .unwrap();

    // Branch round-trip over nullhomotopic loops.
    let mut runner = TestRunner::new(PropConfig::with_cases(cases));
    runner
        .run(
            &(0.0f64..TWO_PI, 1.0f64..3.0, 0.05f64..0.8, 0.0f64..TWO_PI),
            |(angle, radius, frac, start_angle)| {
                let center = Complex64::from_polar(radius, angle);
                let r = frac * radius;
                let path = LoopPath::from_curve(
                    |t| Ok(center + Complex64::from_polar(r, start_angle + TWO_PI * t)),
                    true,
                )
                .unwrap();
                let start = principal_branch(path.samples()[0]).unwrap();
                let end = continue_branch(&start, &path).unwrap();
                prop_assert!((end.log_value() - start.log_value()).norm() < 1e-9);
                Ok(())
            },
        )
        .unwrap();

    // Pairing antisymmetry and additivity for exponent matrices.
    let mut runner = TestRunner::new(PropConfig::with_cases(cases));
    runner
        .run(
            &(
                proptest::collection::vec(-500_000i64..=500_000, 9),
                proptest::collection::vec(-500_000i64..=500_000, 9),
                1usize..=3,
                1usize..=3,
            ),
            |(e1, e2, a, b)| {
                let m1 = ExponentMatrix::new(vec![
                    e1[0..3].to_vec(),
                    e1[3..6].to_vec(),
                    e1[6..9].to_vec(),
                ])
                .unwrap();
                let m2 = ExponentMatrix::new(vec![
                    e2[0..3].to_vec(),
                    e2[3..6].to_vec(),
                    e2[6..9].to_vec(),
                ])
                .unwrap();
                prop_assert_eq!(
                    m1.symbolic_pairing(a, b).unwrap(),
                    -m1.symbolic_pairing(b, a).unwrap()
                );
                prop_assert_eq!(
                    m1.sum(&m2).unwrap().symbolic_pairing(a, b).unwrap(),
                    m1.symbolic_pairing(a, b).unwrap() + m2.symbolic_pairing(a, b).unwrap()
                );
                Ok(())
            },
        )
        .unwrap();

    // Lattice-form realness and bilinearity.
    let mut runner = TestRunner::new(PropConfig::with_cases(cases));
    runner
        .run(
            &(
                proptest::collection::vec(-5i64..=5, 6),
                proptest::collection::vec(-5i64..=5, 6),
                proptest::collection::vec(-5i64..=5, 6),
                -3i64..=5,
                proptest::bool::ANY,
                -4i64..=4,
            ),
            |(uc, vc, wc, d, offdiag, scale)| {
                let omega = HermitianFormSpec::new(3, d, offdiag).unwrap();
                let u = GaussianLatticeVector::new(uc[0..3].to_vec(), uc[3..6].to_vec()).unwrap();
                let v = GaussianLatticeVector::new(vc[0..3].to_vec(), vc[3..6].to_vec()).unwrap();
                let w = GaussianLatticeVector::new(wc[0..3].to_vec(), wc[3..6].to_vec()).unwrap();
                let (_, im) = pair_form_parts(&omega, &u, &v).unwrap();
                prop_assert_eq!(im, 0);
                prop_assert_eq!(
                    pair_form(&omega, &u, &v).unwrap(),
                    -pair_form(&omega, &v, &u).unwrap()
                );
                let shifted = u.add(&w.scaled(scale)).unwrap();
                prop_assert_eq!(
                    pair_form(&omega, &shifted, &v).unwrap(),
                    pair_form(&omega, &u, &v).unwrap() + scale * pair_form(&omega, &w, &v).unwrap()
                );
                Ok(())
            },
        )
        .unwrap();

    println!("ACCEPTANCE 10 PASS: four property suites at 256 cases each, zero failures");
}
