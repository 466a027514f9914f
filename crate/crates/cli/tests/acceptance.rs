//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! `cargo test -p posthopf-cli --test acceptance`

use std::sync::Arc;
use std::time::{Duration, Instant};

use nalgebra::DVector;

use posthopf_core::sample::{random_coeff, rng, CoeffKind};
use posthopf_core::series::modified_field;
use posthopf_core::suites::{run_suite, CheckReport, SuiteConfig};
use posthopf_core::trees::{enumerate_forests, left_graft, trees_of_size};
use posthopf_core::{Algebroid, AlgebroidElement, PlanarTree};
use posthopf_geomint::eval::{connection, eval_tree, tree_polys};
use posthopf_geomint::experiment::{series_errors, SeriesExp};
use posthopf_geomint::field::{DivFreeRecipe, FieldRecipe};
use posthopf_geomint::func::PolyFunction;
use posthopf_geomint::group::So3;
use posthopf_geomint::stepper::ReferenceStepper;
use posthopf_geomint::*;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn suite_verdict(reports: &[CheckReport], filter: impl Fn(&CheckReport) -> bool) -> Verdict {
    let chosen: Vec<&CheckReport> = reports.iter().filter(|r| filter(r)).collect();
    let cases: usize = chosen.iter().map(|r| r.cases).sum();
    match chosen.iter().find(|r| !r.passed()) {
        Some(bad) => verdict(false, bad.to_string()),
        None => verdict(!chosen.is_empty(), format!("{} checks, {cases} cases", chosen.len())),
    }
}

fn el(s: &str) -> AlgebroidElement {
    AlgebroidElement::parse(s).expect("literal element")
}

fn weak_axioms() -> Verdict {
    let reports = run_suite("axioms", &SuiteConfig::default()).expect("registered suite");
    suite_verdict(&reports, |r| r.id.starts_with("post-had"))
}

fn gl_structure() -> Verdict {
    let cfg = SuiteConfig {
        max_grade: 4,
        ..Default::default()
    };
    let reports = run_suite("axioms", &cfg).expect("registered suite");
    suite_verdict(&reports, |r| {
        ["gl-assoc", "gl-unit", "gl-coproduct", "gl-counit"].contains(&r.id.as_str())
    })
}

fn theta_suite() -> Verdict {
    let reports = run_suite("theta", &SuiteConfig::default()).expect("registered suite");
    suite_verdict(&reports, |_| true)
}

fn braiding_suite() -> Verdict {
    let reports = run_suite("braiding", &SuiteConfig::default()).expect("registered suite");
    let suite = suite_verdict(&reports, |_| true);
    // r(o⊠o) = [o]⊠1 + o⊠o − 1⊠[o], also through the unsimplified formula
    let h = Algebroid::default();
    let expected = "-1 | 1 | [o]\n1 | o | o\n1 | [o] | 1\n";
    let r = h.braid_r(&h.tensor_bimod(&el("o"), &el("o"))).dump();
    let direct = h.braid_r_direct(&el("o"), &el("o")).dump();
    let worked = r == expected && direct == expected;
    verdict(
        suite.passed && worked,
        format!("{}; r(o⊠o) {}", suite.detail, if worked { "reproduced" } else { "differs" }),
    )
}

fn smash_product() -> Verdict {
    let h = Algebroid::default();
    let forests = enumerate_forests(3).expect("within bound");
    let mut r = rng(5);
    let mut cases = 0;
    for a in &forests {
        for b in &forests {
            let f = random_coeff(&mut r, CoeffKind::Aromatic);
            let g = random_coeff(&mut r, CoeffKind::Aromatic);
            let x = AlgebroidElement::pure(f, a.clone());
            let y = AlgebroidElement::pure(g, b.clone());
            if h.gl_product(&x, &y) != h.gl_product_via_smash(&x, &y) {
                return verdict(false, format!("x = {x}, y = {y}"));
            }
            cases += 1;
        }
    }
    verdict(true, format!("{cases} pure pairs"))
}

fn degenerate() -> Verdict {
    let cfg = SuiteConfig {
        max_grade: 5,
        ..Default::default()
    };
    let reports = run_suite("degenerate", &cfg).expect("registered suite");
    suite_verdict(&reports, |_| true)
}

fn eval_homomorphism() -> Verdict {
    let group = So3::default();
    let field = build_field(&group, "divfree", DerivMode::Analytic, 0).expect("field");
    let polys = DivFreeRecipe.polys(&group, 0).expect("field");
    let tree_field = |t: &PlanarTree| {
        let p = tree_polys(t, &polys, field.frame()).expect("small tree");
        FrameVectorField::from_polys(field.frame_arc(), p, DerivMode::Analytic).expect("dimension")
    };
    let mut r = rng(11);
    let points: Vec<Mat> = (0..10).map(|_| group.random_point(&mut r)).collect();
    let trees: Vec<PlanarTree> = (1..=3).flat_map(trees_of_size).collect();
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for tau in &trees {
        for sigma in &trees {
            if tau.vertex_count() + sigma.vertex_count() > 4 {
                continue;
            }
            pairs += 1;
            let (x, y) = (tree_field(tau), tree_field(sigma));
            for p in &points {
                let mut lhs = DVector::zeros(3);
                for (t, m) in left_graft(tau, sigma) {
                    lhs += eval_tree(&t, &field, p).expect("eval") * m as f64;
                }
                let rhs = connection(&x, &y, p).expect("connection");
                worst = worst.max((lhs - &rhs).norm() / rhs.norm());
            }
        }
    }
    verdict(worst <= 1e-8, format!("{pairs} pairs × 10 points, max relative error {worst:.1e}"))
}

fn exponentials_vs_flow() -> Verdict {
    let cfg = ExperimentConfig::default();
    let frame = Arc::new(So3::default().frame().clone());
    let phi = &Poly9::entry(0, 0) + &(&Poly9::entry(0, 1) * &Poly9::entry(1, 2));
    let phi: Arc<dyn ScalarFunction> = Arc::new(PolyFunction::new(phi, frame));
    let mut slopes = Vec::new();
    for kind in [SeriesExp::GrossmanLarson, SeriesExp::Concatenation] {
        let errors = series_errors(kind, &cfg, 3, phi.clone()).expect("series errors");
        slopes.push(slope_estimate(&errors).expect("positive errors").0);
    }
    verdict(
        slopes.iter().all(|s| (s - 4.0).abs() <= 0.2),
        format!("slopes GL {:.3}, concatenation {:.3}", slopes[0], slopes[1]),
    )
}

fn modified_field_coefficient() -> Verdict {
    let h = Algebroid::default();
    let computed = modified_field(&h, "lie-euler", 2).expect("order 2").coeff(2).clone();
    // log(1 + X) = X − X*▷X/2 with X = t·o + t²/2·oo, degree 2 by hand
    let x1 = el("o");
    let x2 = el("1/2 | o o");
    let mut oracle = x2.clone();
    oracle.add_assign_ref(&h.gl_product(&x1, &x1).scale(&posthopf_core::coeffs::ratio(-1, 2)));
    let expected = el("-1/2 | [o]");
    verdict(
        computed == expected && oracle == expected,
        format!("degree-2 term {computed}"),
    )
}

fn volume_slopes() -> Verdict {
    let run = |method: &str| {
        run_experiment(&ExperimentConfig {
            method: method.into(),
            ..Default::default()
        })
        .expect("volume experiment")
        .slope
    };
    let (lie, aromatic) = (run("lie-euler"), run("aromatic"));
    verdict(
        (lie - 2.0).abs() <= 0.25 && (aromatic - 4.0).abs() <= 0.4,
        format!("slopes Lie–Euler {lie:.3}, aromatic {aromatic:.3}"),
    )
}

fn reference_volume() -> Verdict {
    let cfg = ExperimentConfig::default();
    let field = cfg.build_field().expect("field");
    let p = cfg.base_point().expect("point");
    let reference = ReferenceStepper { tol: cfg.tol };
    let mut worst: f64 = 0.0;
    for t in cfg.t_grid().expect("grid").into_iter().filter(|&t| t <= 1e-2) {
        worst = worst.max(step_volume(&reference, &field, &p, t).expect("volume").abs());
    }
    verdict(worst <= 1e-8, format!("max |log det| {worst:.1e}"))
}

/// Dyck words of length 2(n−1) counted over all bit strings.
fn dyck_count(n: usize) -> usize {
    let len = 2 * (n - 1);
    (0u32..1 << len)
        .filter(|bits| {
            let mut depth = 0i32;
            (0..len).all(|k| {
                depth += if bits >> k & 1 == 1 { 1 } else { -1 };
                depth >= 0
            }) && depth == 0
        })
        .count()
}

fn tree_counts() -> Verdict {
    let counts: Vec<usize> = (1..=5).map(|n| trees_of_size(n).len()).collect();
    let brute: Vec<usize> = (1..=5).map(dyck_count).collect();
    verdict(
        counts == [1, 1, 2, 5, 14] && counts == brute,
        format!("{counts:?}"),
    )
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = posthopf_cli::run(std::iter::once("posthopf").chain(args.iter().copied()), &mut out, &mut err);
    (code, out)
}

fn determinism() -> Verdict {
    for suite in ["axioms", "theta", "braiding", "degenerate"] {
        let base = ["algebra", "check", "--suite", suite, "--seed", "7"];
        let runs: Vec<(i32, Vec<u8>)> = ["1", "8", "1", "8"]
            .iter()
            .map(|n| cli(&[&base[..], &["--threads", n]].concat()))
            .collect();
        if runs[0].0 != 0 || runs.iter().any(|r| r != &runs[0]) {
            return verdict(false, format!("suite {suite} differs between runs"));
        }
    }
    let exp = ["experiment", "volume", "--method", "aromatic", "--seed", "3"];
    let a = cli(&[&exp[..], &["--threads", "1"]].concat());
    let b = cli(&[&exp[..], &["--threads", "8"]].concat());
    verdict(a.0 == 0 && a == b, "4 suites and one experiment, threads 1 and 8")
}

type Criterion = (&'static str, Duration, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 13] = [
        ("weak post-Hopf algebroid axioms", Duration::from_secs(60), weak_axioms),
        ("Grossman–Larson bialgebroid laws", Duration::from_secs(60), gl_structure),
        ("θ suite", Duration::from_secs(60), theta_suite),
        ("braiding suite", Duration::from_secs(120), braiding_suite),
        ("smash-product formula", Duration::from_secs(60), smash_product),
        ("zero-anchor post-Hopf identities", Duration::from_secs(60), degenerate),
        ("eval homomorphism on SO(3)", Duration::from_secs(30), eval_homomorphism),
        ("truncated exponentials vs flows", Duration::from_secs(60), exponentials_vs_flow),
        ("Lie–Euler modified field", Duration::from_secs(60), modified_field_coefficient),
        ("volume slopes", Duration::from_secs(120), volume_slopes),
        ("reference-flow volume", Duration::from_secs(60), reference_volume),
        ("planar tree counts", Duration::from_secs(60), tree_counts),
        ("deterministic CLI output", Duration::from_secs(120), determinism),
    ];
    let mut failures = 0;
    for (n, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let ok = v.passed && elapsed <= *budget;
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {} ({:.2} s, budget {} s)",
            n + 1,
            if ok { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("{} of 13 criteria passed", 13 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
