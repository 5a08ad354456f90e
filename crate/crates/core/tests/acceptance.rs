//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fellbundle::act::{criterion_d1t_closed, e_unitary_cross_check, germ_groupoid};
use fellbundle::corpus::{self, FdFixture};
use fellbundle::fdalg::AlgElement;
use fellbundle::gpdalg::verify_iterated_iso;
use fellbundle::linalg::{self, seeded};
use fellbundle::xprod::iau::crossed_01m1;
use fellbundle::xprod::{e_faithful_check, grading_norms, regular_representation, CrossedElement, CrossedProduct, SlotOrder};
use fellbundle::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn crossed(f: &FdFixture) -> Result<CrossedProduct> {
    CrossedProduct::new(f.action.clone(), SlotOrder::Index)
}

fn random_fd() -> Result<Vec<FdFixture>> {
    corpus::random_fd_actions(corpus::RANDOM_FD_COUNT)
}

fn e_star_suite() -> Result<Outcome> {
    let actions = corpus::space_actions()?;
    let mut failures = Vec::new();
    let mut verdicts = Vec::new();
    for &name in corpus::E_STAR_SUITE {
        let s = corpus::semigroup(name)?;
        let own: Vec<_> = actions
            .iter()
            .filter(|f| f.action.is_zero_preserving() && f.action.semigroup().table() == s.table())
            .map(|f| f.action.clone())
            .collect();
        let r = e_unitary_cross_check(&s, &own)?;
        let agree = r.e_star_unitary == r.order_condition && r.order_condition == r.universal_units_closed;
        if !agree || !r.consistent {
            failures.push(format!("{name}: {r:?}"));
        }
        if name == "i3" && (r.e_star_unitary || r.witness.is_none()) {
            failures.push("i3 must fail with a witness".into());
        }
        if name == "01m1" && !r.e_star_unitary {
            failures.push("01m1 must be E*-unitary".into());
        }
        verdicts.push(format!("{name}={}", r.e_star_unitary));
    }
    outcome(failures.is_empty(), if failures.is_empty() { verdicts.join(" ") } else { failures.join("; ") })
}

fn hausdorff_suite() -> Result<Outcome> {
    let actions = corpus::space_actions()?;
    let mut failures = Vec::new();
    let mut non_hausdorff = 0;
    for f in &actions {
        let g = germ_groupoid(&f.action)?;
        let closed = g.space().is_closed(g.units());
        let criterion = criterion_d1t_closed(&f.action)?.holds;
        let hausdorff = g.space().is_hausdorff()?;
        let base = f.action.space().is_hausdorff()?;
        if !base {
            non_hausdorff += 1;
        }
        if closed != criterion || hausdorff != (closed && base) {
            failures.push(f.name.clone());
        }
    }
    let covered = corpus::SPACES.iter().all(|name| {
        let x = corpus::space(name).expect("named space");
        x.is_hausdorff().expect("small space") || actions.iter().any(|f| f.action.space() == &x)
    });
    outcome(
        failures.is_empty() && actions.len() >= 30 && covered,
        format!("{} actions ({non_hausdorff} on non-Hausdorff spaces), mismatches {failures:?}", actions.len()),
    )
}

fn expectation_suite() -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut samples = 0;
    let mut worst_eig = f64::INFINITY;
    for (i, f) in random_fd()?.iter().enumerate() {
        let cp = crossed(f)?;
        let action = cp.action();
        let alg = action.algebra();
        let s = action.semigroup();
        let one = s.unit().expect("unit");
        let mut rng = seeded(3000 + i as u64);
        let relations: Vec<CrossedElement> = s
            .elements()
            .flat_map(|t| s.elements().map(move |u| (t, u)))
            .filter(|&(t, u)| t != u && !action.ideal_i_tu(t, u).is_empty())
            .map(|(t, u)| {
                let xi = AlgElement::random(alg, action.ideal_i_tu(t, u), &mut seeded(t as u64 * 31 + u as u64));
                let moved = action.theta(u, t, &xi, 1e-10).expect("element of I_{t,u}");
                CrossedElement::single(t, xi).sub(&CrossedElement::single(u, moved))
            })
            .collect();
        for k in 0..10 {
            samples += 1;
            let x = if k % 3 == 2 && !relations.is_empty() { relations[k % relations.len()].clone() } else { cp.random_element(&mut rng) };
            let e = cp.expectation(&x);
            let e_star = cp.expectation(&cp.star_raw(&x));
            if !e_star.is_close(&e.star(), 1e-10) {
                failures.push(format!("{}: E(x*) ≠ E(x)*", f.name));
            }
            let a = AlgElement::random(alg, alg.full_ideal(), &mut rng);
            let b = AlgElement::random(alg, alg.full_ideal(), &mut rng);
            let axb = cp.multiply_raw(&cp.multiply_raw(&CrossedElement::single(one, a.clone()), &x), &CrossedElement::single(one, b.clone()));
            if !cp.expectation(&axb).is_close(&(&(&a * &e) * &b), 1e-10) {
                failures.push(format!("{}: E(axb) ≠ aE(x)b", f.name));
            }
            let exx = cp.expectation(&cp.multiply_raw(&cp.star_raw(&x), &x));
            let eig = exx.blocks().iter().map(linalg::min_hermitian_eigenvalue).fold(f64::INFINITY, f64::min);
            worst_eig = worst_eig.min(eig);
            if eig < -1e-9 {
                failures.push(format!("{}: E(x*x) has eigenvalue {eig:e}", f.name));
            }
            let scale = x.max_abs().max(1.0);
            if exx.is_zero(1e-10 * scale * scale) != cp.normal_form(&x).is_zero(1e-10 * scale) {
                failures.push(format!("{}: E(x*x) = 0 disagrees with normal form = 0", f.name));
            }
        }
    }
    outcome(failures.is_empty() && samples == 200, format!("{samples} elements, min eigenvalue {worst_eig:.3e} {failures:?}"))
}

fn injectivity_suite() -> Result<Outcome> {
    let mut kernels = Vec::new();
    for f in random_fd()? {
        let cp = crossed(&f)?;
        kernels.push(regular_representation(&cp)?.kernel_rank(&cp, 4));
    }
    outcome(kernels.iter().all(|&k| k == 0), format!("kernel ranks {kernels:?}"))
}

fn iau_suite() -> Result<Outcome> {
    let base = crossed_01m1(&corpus::iau_trivial_c2()?, 5)?;
    let base_ok = base.dim_crossed == 3 && base.blocks == vec![1, 1, 1] && base.trivial_case == Some(true);
    let mut laws = Vec::new();
    for f in corpus::random_iau(corpus::RANDOM_IAU_COUNT)? {
        let r = crossed_01m1(&f.data, 6)?;
        laws.push(r.dimension_law && r.holds() && f.data.algebra().blocks().iter().all(|&d| d <= 3));
    }
    outcome(
        base_ok && laws.len() == 10 && laws.iter().all(|&l| l),
        format!("C² trivial: dim {} blocks {:?}; dimension law on random data {laws:?}", base.dim_crossed, base.blocks),
    )
}

fn iterated_suite() -> Result<Outcome> {
    let discrete = corpus::discrete_actions()?;
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for f in &discrete {
        let r = verify_iterated_iso(&f.action)?;
        worst = worst.max(r.r1).max(r.r2).max(r.r3);
        if !(r.iso && r.bijective && r.r1.max(r.r2).max(r.r3) <= 1e-9) {
            failures.push(f.name.clone());
        }
    }
    let fixture = verify_iterated_iso(&corpus::discrete_01m1()?)?;
    outcome(
        failures.is_empty() && discrete.len() >= 15 && fixture.iso && fixture.dim == 3,
        format!("{} discrete actions, worst R-defect {worst:.1e}, failures {failures:?}", discrete.len()),
    )
}

fn induction_suite() -> Result<Outcome> {
    let mut failures = Vec::new();
    let all = corpus::fd_actions()?;
    for f in &all {
        let cp = crossed(f)?;
        let k = f.action.algebra().block_count();
        let family: Vec<Vec<usize>> = (0..k).map(|b| (0..k).map(|c| usize::from(b == c)).collect()).collect();
        let r = e_faithful_check(&cp, &family)?;
        if !r.induced_faithful {
            failures.push(f.name.clone());
        }
    }
    let swap = crossed(all.iter().find(|f| f.name == "block-swap").expect("fixture"))?;
    let r = e_faithful_check(&swap, &[vec![1, 0]])?;
    let swap_ok = !r.faithful_on_algebra && r.induced_faithful;
    outcome(
        failures.is_empty() && swap_ok,
        format!("{} actions, failures {failures:?}; swap fixture: π faithful {} / Ind π faithful {}", all.len(), r.faithful_on_algebra, r.induced_faithful),
    )
}

fn isometry_suite() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut samples = 0;
    for (i, f) in random_fd()?.iter().enumerate() {
        let cp = crossed(f)?;
        let rep = regular_representation(&cp)?;
        let mut rng = seeded(8000 + i as u64);
        let action = cp.action();
        for t in action.semigroup().elements() {
            let src = action.source(t);
            if src.is_empty() {
                continue;
            }
            let xi = AlgElement::random(action.algebra(), src, &mut rng);
            let (op, norm) = grading_norms(&rep, t, &xi);
            worst = worst.max((op - norm).abs());
            samples += 1;
        }
    }
    outcome(worst <= 1e-8, format!("{samples} samples, worst |‖π(ξδ_t)‖ − ‖ξ‖| = {worst:.2e}"))
}

type Criterion = (&'static str, Duration, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("E*-unitarity equivalences", Duration::from_secs(5), e_star_suite),
        ("closed units, D_{1,t} criterion and Hausdorffness", Duration::from_secs(10), hausdorff_suite),
        ("conditional expectation", Duration::from_secs(30), expectation_suite),
        ("injectivity of the regular representation", Duration::from_secs(30), injectivity_suite),
        ("{1,-1,0} crossed products from (I, α, u)", Duration::from_secs(10), iau_suite),
        ("iterated crossed product isomorphism", Duration::from_secs(30), iterated_suite),
        ("faithful induction", Duration::from_secs(10), induction_suite),
        ("isometric grading", Duration::from_secs(30), isometry_suite),
    ];
    let mut all_pass = true;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && elapsed <= *budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all_pass &= pass;
        println!(
            "{} criterion {}: {name} [{:.2}s of {}s] {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
