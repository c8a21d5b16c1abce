//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{diag, operator, pulled_back_set, random_operator, rng};
use usdkit::distill::{plan_distillation, schmidt, BipartiteState};
use usdkit::families::{
    apply_degenerate_mixer, apply_phase_family, distillation_family, inconclusive_analysis,
    phase_transform,
};
use usdkit::numkernel::{normalized, random, ComplexMatrix, C64};
use usdkit::simulate::{dilate, measure_usd};
use usdkit::usd::{
    analyze, angle_between, best_angle, discrimination_residual, optimal_pair,
    orthogonality_residual, population_report,
};
use usdkit::StateSet;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Tracks the worst value of a quantity that must stay below a limit.
struct Worst {
    value: f64,
    limit: f64,
}

impl Worst {
    fn below(limit: f64) -> Self {
        Self { value: 0.0, limit }
    }

    fn see(&mut self, x: f64) {
        // NaN must fail, so it is kept rather than ignored by max
        if x.is_nan() || x > self.value {
            self.value = x;
        }
    }

    fn ok(&self) -> bool {
        self.value <= self.limit
    }

    fn show(&self) -> String {
        format!("{:.2e} (limit {:.0e})", self.value, self.limit)
    }
}

fn criterion_1() -> Outcome {
    let mut r = rng(1);
    let mut overlap = Worst::below(1e-10);
    let mut angle = Worst::below(1e-9);
    for i in 0..200 {
        let n = 2 + i % 5;
        let k = random_operator(&mut r, n);
        let p = optimal_pair(&k).unwrap();
        let out = ComplexMatrix::from_columns(&[p.out_plus.clone(), p.out_minus.clone()]);
        overlap.see(orthogonality_residual(&out));
        let s = k.singular_values();
        let expected = 2.0 * (s[n - 1] / s[0]).atan();
        angle.see((angle_between(&p.g_plus, &p.g_minus).unwrap() - expected).abs());
    }
    let golden = optimal_pair(&diag(&[0.5, 1.0])).unwrap();
    let golden_angle = angle_between(&golden.g_plus, &golden.g_minus).unwrap();
    let golden_ok = (golden_angle - 0.9272952180016122).abs() <= 1e-15
        && (golden_angle.cos() - 0.6).abs() <= 1e-15;
    outcome(
        overlap.ok() && angle.ok() && golden_ok,
        format!(
            "200 K, N=2..6: output overlap {}, angle error {}; diag(0.5,1) angle {golden_angle:.16}, cos {:.16}",
            overlap.show(),
            angle.show(),
            golden_angle.cos()
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let mut min_margin = f64::INFINITY;
    let mut pairs = 0;
    for n in 2..=6 {
        let k = random_operator(&mut r, n);
        let kinv = k.inverse_matrix().unwrap();
        let best = best_angle(&k).unwrap();
        for _ in 0..10_000 {
            // two random orthonormal outputs pulled back through K⁻¹
            let a = normalized(&random::gaussian_vector(&mut r, n)).unwrap();
            let b = random::gaussian_vector(&mut r, n);
            let c = usdkit::numkernel::inner(&a, &b);
            let b: Vec<C64> = b.iter().zip(&a).map(|(y, x)| y - c * x).collect();
            let g1 = kinv.mul_vec(&a);
            let g2 = kinv.mul_vec(&b);
            min_margin = min_margin.min(angle_between(&g1, &g2).unwrap() - best);
            pairs += 1;
        }
    }
    outcome(
        min_margin >= -1e-9,
        format!("{pairs} pulled-back pairs over 5 K: min(angle − θ_best) = {min_margin:.3e} (limit −1e-9)"),
    )
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut violations = 0;
    let mut tested = 0;
    let mut min_slack = f64::INFINITY;
    for i in 0..500 {
        let n = 2 + i % 5;
        // include badly conditioned operators
        let spread = 10f64.powf(-(i as f64 % 7.0));
        let s: Vec<f64> = (0..n)
            .map(|j| 1.0 - (1.0 - spread) * j as f64 / (n - 1) as f64)
            .collect();
        for k in [
            random_operator(&mut r, n),
            operator(random::with_singular_values(&mut r, &s)),
        ] {
            let a = analyze(&k);
            let lo = a.angle_lower_bound.unwrap();
            let hi = a.angle_upper_bound.unwrap();
            let slack = (a.best_angle_rad - lo).min(hi - a.best_angle_rad);
            min_slack = min_slack.min(slack);
            if slack < -1e-12 {
                violations += 1;
            }
            tested += 1;
        }
    }
    outcome(
        violations == 0,
        format!("{tested} K: {violations} violations of (3/2)x ≤ θ_best ≤ 2x, min slack {min_slack:.3e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut diff = Worst::below(1e-10);
    for i in 0..100 {
        let k = random_operator(&mut r, 2 + i % 5);
        let kinv = operator(k.inverse_matrix().unwrap());
        diff.see((best_angle(&k).unwrap() - best_angle(&kinv).unwrap()).abs());
    }
    outcome(
        diff.ok(),
        format!("100 K: |θ_best(K) − θ_best(K⁻¹)| {}", diff.show()),
    )
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let mut diff = Worst::below(1e-10);
    for i in 0..100 {
        let n = 2 + i % 5;
        let k = random_operator(&mut r, n);
        let ul = random::unitary(&mut r, n);
        let ur = random::unitary(&mut r, n);
        let k2 = operator(&(&ul * k.matrix()) * &ur);
        for (a, b) in k.singular_values().iter().zip(k2.singular_values()) {
            diff.see((a - b).abs());
        }
    }
    outcome(
        diff.ok(),
        format!(
            "100 sandwiches U_L·K·U_R: singular value drift {}",
            diff.show()
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let mut min_overlap = f64::INFINITY;
    let mut min_gap = f64::INFINITY;
    let mut failures = 0;
    for n in 3..=5 {
        let mut checked = 0;
        while checked < 100 {
            let k = random_operator(&mut r, n);
            let set = pulled_back_set(&mut r, &k, n);
            let rep = population_report(&k, &set).unwrap();
            if !rep.completely_non_orthogonal {
                continue;
            }
            checked += 1;
            let m = rep
                .overlaps
                .iter()
                .flatten()
                .copied()
                .fold(f64::INFINITY, f64::min);
            min_overlap = min_overlap.min(m);
            min_gap = min_gap.min(rep.angle_gap_rad);
            if !(m > 1e-9 && rep.strict_inequality_holds == Some(true)) {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0 && min_gap > 0.0,
        format!(
            "300 sets, N=3..5: min |⟨ĝ_k|v_i⟩| {min_overlap:.3e} (> 1e-9), min angle gap {min_gap:.3e} rad (> 0), {failures} failures"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let mut prob = Worst::below(1e-10);
    let mut spread = Worst::below(1e-9);
    for i in 0..100 {
        let n = 2 + i % 3;
        let c = random::gaussian_matrix(&mut r, n, n);
        let c = c.scale_real(1.0 / c.frobenius_norm());
        let plan = plan_distillation(&BipartiteState::new(c).unwrap()).unwrap();
        prob.see((plan.success_probability - plan.output_state.norm().powi(2)).abs());
        spread.see(schmidt(&plan.output_state).unwrap().relative_spread());
    }
    let golden = plan_distillation(
        &BipartiteState::new(ComplexMatrix::from_diag(&[0.8f64.sqrt(), 0.2f64.sqrt()])).unwrap(),
    )
    .unwrap()
    .success_probability;
    let bell = plan_distillation(
        &BipartiteState::new(ComplexMatrix::identity(2).scale_real(0.5f64.sqrt())).unwrap(),
    )
    .unwrap()
    .success_probability;
    let golden_ok = (golden - 0.4).abs() <= 1e-12 && (bell - 1.0).abs() <= 1e-12;
    outcome(
        prob.ok() && spread.ok() && golden_ok,
        format!(
            "100 states: |P − ‖out‖²| {}, Schmidt spread {}; λ=(√0.8,√0.2) → {golden:.15}, maximally entangled → {bell:.15}",
            prob.show(),
            spread.show()
        ),
    )
}

fn criterion_8() -> Outcome {
    let k = diag(&[0.5, 1.0]);
    let p = optimal_pair(&k).unwrap();
    let analytic = p.detection_probability;
    let set = StateSet::from_columns(&[p.g_plus, p.g_minus]).unwrap();
    let shots = 1_000_000u64;
    let sigma = (analytic * (1.0 - analytic) / shots as f64).sqrt();
    let results = measure_usd(&k, &set, shots, 20240601).unwrap();
    let mut worst_dev: f64 = 0.0;
    let mut misidentified = 0;
    for (i, res) in results.iter().enumerate() {
        worst_dev = worst_dev.max((res.frequency(&i.to_string()) - analytic).abs());
        misidentified += res.conclusive() - res.count(&i.to_string());
    }
    let ok = (analytic - 0.4).abs() <= 1e-15 && worst_dev <= 4.0 * sigma && misidentified == 0;
    outcome(
        ok,
        format!(
            "P_D = {analytic:.15}; 10^6 shots per input: max |freq − P_D| {worst_dev:.2e} (4σ = {:.2e}), misidentifications {misidentified}",
            4.0 * sigma
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let mut phase = Worst::below(1e-9);
    let mut mixed = Worst::below(1e-10);
    let mut distill = Worst::below(1e-9);
    let mut commute = Worst::below(1e-10);
    for i in 0..100 {
        let n = 2 + i % 4;
        let k = random_operator(&mut r, n);
        let set = pulled_back_set(&mut r, &k, n);
        let moved = apply_phase_family(&k, &set, &random::phases(&mut r, n)).unwrap();
        phase.see(discrimination_residual(&k, &moved).unwrap());

        let u0 = random::unitary(&mut r, n);
        let fam = distillation_family(&k, &u0).unwrap();
        distill.see(k.apply(&fam.states).unwrap().max_abs_diff(&u0));

        let v = random::unitary(&mut r, n);
        let s: Vec<f64> = (0..n).map(|j| 1.0 - 0.7 * j as f64 / n as f64).collect();
        let positive = operator(&(&v * &ComplexMatrix::from_diag(&s)) * &v.adjoint());
        let w = phase_transform(&positive, &random::phases(&mut r, n))
            .unwrap()
            .input_transform;
        commute.see((&(positive.matrix() * &w) - &(&w * positive.matrix())).frobenius_norm());

        let k = operator(random::with_singular_values(
            &mut r,
            &[1.0, 1.0, 0.6, 0.6, 0.3],
        ));
        let set = pulled_back_set(&mut r, &k, 5);
        let blocks = [
            random::unitary(&mut r, 2),
            random::unitary(&mut r, 2),
            random::unitary(&mut r, 1),
        ];
        mixed.see(
            apply_degenerate_mixer(&k, &set, &blocks)
                .unwrap()
                .output_gram_residual,
        );
    }
    let ok = phase.ok() && mixed.ok() && distill.ok() && commute.ok();
    outcome(
        ok,
        format!(
            "W-sets Gram {}, V-sets (exact degeneracy) Gram {}, K·K⁻¹U₀ − U₀ {}, ‖KW − WK‖ {}",
            phase.show(),
            mixed.show(),
            distill.show(),
            commute.show()
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut r = rng(10);
    let mut max_rank = 0;
    for i in 0..50 {
        let n = 2 + i % 4;
        let mut s = vec![1.0; n];
        s[n - 1] = 0.25 + 0.5 * (i as f64 / 50.0);
        let k = operator(random::with_singular_values(&mut r, &s));
        let rho = random::density_matrix(&mut r, n);
        max_rank = max_rank.max(inconclusive_analysis(&k, &rho).unwrap().rank);
    }
    let mut unitary_rho = Worst::below(1e-10);
    for i in 0..50 {
        let n = 2 + i % 4;
        let k = operator(random::unitary(&mut r, n));
        let rho = random::density_matrix(&mut r, n);
        unitary_rho.see(
            inconclusive_analysis(&k, &rho)
                .unwrap()
                .rho_question
                .max_abs(),
        );
    }
    outcome(
        max_rank <= 1 && unitary_rho.ok(),
        format!(
            "50 ρ with N−1 unit singular values: max rank(ρ_?) {max_rank} (≤ 1); unitary K: max |ρ_?| {}",
            unitary_rho.show()
        ),
    )
}

fn criterion_11() -> Outcome {
    let mut r = rng(11);
    let mut unitarity = Worst::below(1e-10);
    let mut block = Worst::below(1e-10);
    for i in 0..100 {
        let n = 1 + i % 6;
        let target = [1.0, 0.999999, 0.7, 0.2][i % 4];
        let k = operator(random::passive(&mut r, n, target));
        let d = dilate(&k).unwrap();
        let u = &d.unitary;
        unitarity.see((&(&u.adjoint() * u) - &ComplexMatrix::identity(2 * n)).frobenius_norm());
        block.see(d.system_block().max_abs_diff(k.matrix()));
    }
    outcome(
        unitarity.ok() && block.ok(),
        format!(
            "100 passive K: ‖U†U − I‖_F {}, top-left block − K {}",
            unitarity.show(),
            block.show()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("optimal-pair law", criterion_1),
        ("optimality of θ_best", criterion_2),
        ("bound sandwich", criterion_3),
        ("K ↔ K⁻¹ symmetry", criterion_4),
        ("USD equivalence", criterion_5),
        ("population theorem", criterion_6),
        ("distillation", criterion_7),
        ("detection probability", criterion_8),
        ("family invariance", criterion_9),
        ("inconclusive rank law", criterion_10),
        ("dilation", criterion_11),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
