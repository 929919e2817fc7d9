//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Reference numbers marked "oracle" were computed independently (dense
//! numpy evolution of the two-qubit state plus bisection) and frozen here.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use warmq::channel::{apply_by_enumeration, apply_to_all, coefficients, evolve, kraus_quartet, thermal_state};
use warmq::densmat::{
    sample_random_density, sample_random_density_with, sample_random_product_state_with, stream_rng,
    ComplexSquareMatrix,
};
use warmq::esd::{
    bell_elements, bell_elements_weighted, bell_lambda_closed_form, bell_state, numeric_tesd, numeric_tesd_with,
    tesd_log_estimate, BellSign, EsdKind,
};
use warmq::lindblad::{compare_to_kraus, integrate, LindbladSpec, StepControl};
use warmq::metrics::{lambda_value, min_pt_eigenvalue, witness_from_state};
use warmq::neighborhood::{directed_boundary, random_scan, DiagonalTarget};
use warmq::BathSpec;

/// Oracle Bell root times (Γ = 1) for n̄ = 0.1, 0.25, 0.5, 1, 2, 4.
const ORACLE_ROOTS: [(f64, f64); 6] = [
    (0.1, 1.251250719014565),
    (0.25, 0.7704866422432859),
    (0.5, 0.5038960042703404),
    (1.0, 0.3104540451397665),
    (2.0, 0.17968520744555866),
    (4.0, 0.09850360167045749),
];
/// γ² at the Bell crossing for n̄ = 1 (oracle).
const ORACLE_GAMMA_SQ_N1: f64 = 0.39401664065177244;
/// ln(1 + 1/(2n̄(n̄+1)))·2/(2n̄+1) at n̄ = 1, by hand.
const LOG_ESTIMATE_N1: f64 = 1.430784941822815;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bath(nbar: f64) -> BathSpec {
    BathSpec::new(1.0, nbar).expect("valid bath")
}

fn criterion_1() -> Check {
    let mut worst: f64 = 0.0;
    for nbar in [0.0, 0.1, 0.5, 1.0, 2.0, 10.0] {
        for gt in [0.0, 0.1, 1.0, 5.0] {
            let c = coefficients(&bath(nbar), gt).map_err(|e| e.to_string())?;
            let dev = kraus_quartet(nbar, &c).completeness().max_abs_diff(&ComplexSquareMatrix::identity(2));
            worst = worst.max(dev);
        }
    }
    ensure(worst <= 1e-12, || format!("max |ΣK†K − I| = {worst:e}"))?;
    Ok(format!("max |ΣK†K − I| = {worst:.1e} over 24 grid points"))
}

fn criterion_2() -> Check {
    let t_grid: Vec<f64> = (0..=10).map(|k| 0.5 * k as f64).collect();
    let mut states = vec![bell_state(BellSign::Plus), bell_state(BellSign::Minus)];
    for seed in 0..3 {
        states.push(sample_random_density(1, 100 + seed));
        states.push(sample_random_density(2, 200 + seed));
    }
    let mut worst: f64 = 0.0;
    for nbar in [0.0, 0.5, 1.0, 2.0] {
        let b = bath(nbar);
        let ctl = StepControl::scaled(0.01, 1_000_000, &b).map_err(|e| e.to_string())?;
        for rho in &states {
            let rep = compare_to_kraus(rho, &b, &t_grid, &ctl).map_err(|e| e.to_string())?;
            worst = worst.max(rep.worst());
        }
    }
    ensure(worst <= 1e-6, || format!("max elementwise deviation {worst:e}"))?;
    Ok(format!("max elementwise deviation {worst:.1e} ({} states × 4 n̄ × 11 times)", states.len()))
}

fn criterion_3() -> Check {
    let mut worst: f64 = 0.0;
    for k in 0..20u64 {
        let qubits = 1 + (k % 3) as usize;
        let nbar = [0.0, 0.5, 1.0, 2.0][(k % 4) as usize];
        let b = bath(nbar);
        let rho = sample_random_density(qubits, 300 + k);
        let out = evolve(&rho, &b, 40.0 / b.total_rate()).map_err(|e| e.to_string())?;
        let th = thermal_state(qubits, nbar).map_err(|e| e.to_string())?;
        worst = worst.max(out.matrix().frobenius_distance(th.state.matrix()));
    }
    ensure(worst <= 1e-8, || format!("Frobenius distance to thermal {worst:e}"))?;
    let diag = thermal_state(2, 1.0f64).map_err(|e| e.to_string())?.diagonal();
    let expect = vec![1.0 / 9.0, 2.0 / 9.0, 2.0 / 9.0, 4.0 / 9.0];
    ensure(diag == expect, || format!("thermal diagonal {diag:?}"))?;
    Ok(format!("worst distance {worst:.1e}; M=2 n̄=1 diagonal is exactly (1/9, 2/9, 2/9, 4/9)"))
}

fn criterion_4() -> Check {
    let mut worst: f64 = 0.0;
    for nbar in [0.0f64, 0.5, 1.0, 2.0] {
        let l = lambda_value(&thermal_state(2, nbar).map_err(|e| e.to_string())?.state).map_err(|e| e.to_string())?;
        let expect = -2.0 * nbar * (nbar + 1.0) / (2.0 * nbar + 1.0).powi(2);
        worst = worst.max((l - expect).abs());
    }
    let l1 = lambda_value(&thermal_state(2, 1.0f64).map_err(|e| e.to_string())?.state).map_err(|e| e.to_string())?;
    ensure(worst <= 1e-12 && (l1 + 4.0 / 9.0).abs() <= 1e-12, || format!("worst {worst:e}, n̄=1 gives {l1}"))?;
    Ok(format!("worst |Λ − closed form| = {worst:.1e}; Λ(n̄=1) = {l1:.15}"))
}

fn criterion_5() -> Check {
    let mut lines = Vec::new();
    for nbar in [0.5, 1.0] {
        let b = bath(nbar);
        let mut states = Vec::new();
        let mut stream = 0u64;
        while states.len() < 1000 {
            let rho = sample_random_density_with::<f64, _>(2, &mut stream_rng(500, stream));
            stream += 1;
            if lambda_value(&rho).map_err(|e| e.to_string())? > 0.0 {
                states.push(rho);
            }
        }
        let kinds: Vec<Result<EsdKind, String>> = states
            .par_iter()
            .map(|rho| numeric_tesd(rho, &b, 1e-10).map(|r| r.kind).map_err(|e| e.to_string()))
            .collect();
        let finite = kinds.iter().filter(|k| matches!(k, Ok(EsdKind::Finite))).count();
        ensure(finite == 1000, || format!("n̄={nbar}: {finite}/1000 finite; first other: {:?}",
            kinds.iter().find(|k| !matches!(k, Ok(EsdKind::Finite)))))?;
        lines.push(format!("n̄={nbar}: 1000/1000 finite ({stream} draws)"));
    }
    Ok(lines.join("; "))
}

fn criterion_6() -> Check {
    let b = bath(0.0);
    let mut worst_gamma: f64 = 0.0;
    for sign in [BellSign::Plus, BellSign::Minus] {
        let rho = bell_state(sign);
        for k in 0..=100 {
            let t = 0.25 * k as f64;
            let c = coefficients(&b, t).map_err(|e| e.to_string())?;
            let l = lambda_value(&evolve(&rho, &b, t).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(l > 0.0, || format!("Λ({t}) = {l} not positive"))?;
            worst_gamma = worst_gamma.max((l - c.gamma_sq()).abs() / c.gamma_sq());
        }
        let r = numeric_tesd(&rho, &b, 1e-10).map_err(|e| e.to_string())?;
        ensure(r.kind == EsdKind::Asymptotic, || format!("{sign:?}: {r:?}"))?;
    }
    ensure(worst_gamma <= 1e-8, || format!("relative |Λ − γ²| = {worst_gamma:e}"))?;

    let mut worst_closed: f64 = 0.0;
    for nbar in [0.0, 0.1, 0.5, 1.0, 2.0] {
        let b = bath(nbar);
        for k in 0..=50 {
            let t = 0.1 * k as f64;
            let c = coefficients(&b, t).map_err(|e| e.to_string())?;
            for sign in [BellSign::Plus, BellSign::Minus] {
                let rho = evolve(&bell_state(sign), &b, t).map_err(|e| e.to_string())?;
                let l = lambda_value(&rho).map_err(|e| e.to_string())?;
                worst_closed = worst_closed.max((l - bell_lambda_closed_form(nbar, &c)).abs());
                let elems = bell_elements(nbar, &c, sign).to_matrix();
                worst_closed = worst_closed.max(elems.max_abs_diff(rho.matrix()));
            }
        }
    }
    ensure(worst_closed <= 1e-10, || format!("closed form vs channel {worst_closed:e}"))?;
    Ok(format!(
        "Λ = γ² > 0 on 101 probes per sign (rel. dev {worst_gamma:.1e}), asymptotic; closed form vs channel {worst_closed:.1e}"
    ))
}

fn criterion_7() -> Check {
    let mut times = Vec::new();
    for (nbar, oracle) in ORACLE_ROOTS {
        for sign in [BellSign::Plus, BellSign::Minus] {
            let r = numeric_tesd(&bell_state(sign), &bath(nbar), 1e-12).map_err(|e| e.to_string())?;
            let t = r.t_esd.ok_or_else(|| format!("n̄={nbar}: no finite root"))?;
            ensure((t - oracle).abs() <= 1e-9, || format!("n̄={nbar}: t_esd {t} vs oracle {oracle}"))?;
            if sign == BellSign::Plus {
                times.push(t);
            }
        }
    }
    ensure(times.windows(2).all(|w| w[1] < w[0]), || format!("not strictly decreasing: {times:?}"))?;
    Ok(format!("t_esd = {times:.6?}, strictly decreasing, matches oracle within 1e-9"))
}

fn criterion_8() -> Check {
    let estimate = tesd_log_estimate(1.0, 1.0).map_err(|e| e.to_string())?;
    ensure((estimate - LOG_ESTIMATE_N1).abs() <= 1e-12 && (estimate - 1.4307).abs() < 1e-4, || {
        format!("log estimate gives {estimate}")
    })?;

    let b = bath(1.0);
    let rho = bell_state(BellSign::Plus);
    let kraus = numeric_tesd(&rho, &b, 1e-12).map_err(|e| e.to_string())?;
    let t_kraus = kraus.t_esd.ok_or("no Kraus root")?;
    let g2_kraus = coefficients(&b, t_kraus).map_err(|e| e.to_string())?.gamma_sq();

    let spec = LindbladSpec::rotating(b);
    let ctl = StepControl::scaled(0.005, 1_000_000, &b).map_err(|e| e.to_string())?;
    let lind = numeric_tesd_with(&rho, &b, 1e-12, |r, t| integrate(r, &spec, t, &ctl)).map_err(|e| e.to_string())?;
    let t_lind = lind.t_esd.ok_or("no Lindblad root")?;
    let g2_lind = coefficients(&b, t_lind).map_err(|e| e.to_string())?.gamma_sq();

    ensure((g2_kraus - ORACLE_GAMMA_SQ_N1).abs() <= 1e-9, || format!("Kraus γ² at root {g2_kraus}"))?;
    ensure((g2_lind - ORACLE_GAMMA_SQ_N1).abs() <= 1e-7, || format!("Lindblad γ² at root {g2_lind}"))?;
    ensure((estimate - t_kraus).abs() > 1.0, || "log estimate unexpectedly agrees".into())?;

    // The thermally weighted Bell elements do not have unit trace at t = 0.
    let weighted = bell_elements_weighted(1.0, &coefficients(&b, 0.0).map_err(|e| e.to_string())?, BellSign::Plus);
    ensure((weighted.b + weighted.c - 0.5).abs() > 1e-3 && (weighted.trace() - 1.0).abs() > 1e-3, || {
        format!("weighted elements at t=0: b+c = {}, trace = {}", weighted.b + weighted.c, weighted.trace())
    })?;
    Ok(format!(
        "log estimate = {estimate:.6}/Γ; root t = {t_kraus:.10} (Kraus) vs {t_lind:.10} (Lindblad), \
         γ² = {g2_kraus:.10} / {g2_lind:.10}; weighted elements at t=0: b+c = {:.4}, trace = {:.4}",
        weighted.b + weighted.c,
        weighted.trace()
    ))
}

fn criterion_9() -> Check {
    let disagreements: Vec<u64> = (0..10_000u64)
        .into_par_iter()
        .filter_map(|k| {
            let rho = sample_random_density_with::<f64, _>(2, &mut stream_rng(900, k));
            let l = lambda_value(&rho).ok()?;
            let pt = min_pt_eigenvalue(&rho, &[1]).ok()?;
            ((l > 1e-9) != (pt < -1e-9)).then_some(k)
        })
        .collect();
    ensure(disagreements.is_empty(), || format!("disagreements at streams {disagreements:?}"))?;
    Ok("0 disagreements on 10⁴ states".into())
}

fn criterion_10() -> Check {
    let b = bath(1.0);
    let t_esd = ORACLE_ROOTS[3].1;
    let mut lines = Vec::new();
    for (i, frac) in [0.1, 0.3, 0.5, 0.7, 0.9].into_iter().enumerate() {
        let t = frac * t_esd;
        let rho = evolve(&bell_state(BellSign::Plus), &b, t).map_err(|e| e.to_string())?;
        let w = witness_from_state(&rho).map_err(|e| e.to_string())?;
        let on_target = w.target_expectation();
        ensure(on_target < -1e-10, || format!("t={t}: tr(Wρ) = {on_target}"))?;
        let min_product = (0..10_000u64)
            .into_par_iter()
            .map(|k| w.expectation(&sample_random_product_state_with::<f64, _>(2, &mut stream_rng(1000 + i as u64, k))))
            .reduce(|| f64::INFINITY, f64::min);
        ensure(min_product >= -1e-12, || format!("t={t}: product state gives tr(Wσ) = {min_product}"))?;
        lines.push(format!("{on_target:.3e}/{min_product:.2e}"));
    }
    Ok(format!("tr(Wρ)/min tr(Wσ) at 0.1..0.9·t_esd: {}", lines.join(", ")))
}

fn criterion_11() -> Check {
    let warm = DiagonalTarget::thermal(2, 1.0).map_err(|e| e.to_string())?;
    let scan = random_scan(&warm, 0.01, 100_000, 1100).map_err(|e| e.to_string())?;
    ensure(scan.npt_found == 0, || format!("{scan:?}"))?;
    let est = directed_boundary(&warm, 8, 1101).map_err(|e| e.to_string())?;
    ensure(est.radius > 0.01, || format!("boundary estimate {}", est.radius))?;
    let cold = DiagonalTarget::new(vec![0.0, 0.0, 0.0, 1.0]).map_err(|e| e.to_string())?;
    let contrast = directed_boundary(&cold, 8, 1102).map_err(|e| e.to_string())?;
    ensure(contrast.radius <= 1e-3, || format!("contrast radius {}", contrast.radius))?;
    Ok(format!(
        "ε=0.01 scan: 0/{} NPT ({} accepted); boundary ≈ {:.4}; diag(0,0,0,1) NPT at ε = {:.2e}",
        scan.samples, scan.accepted, est.radius, contrast.radius
    ))
}

fn criterion_12() -> Check {
    let b = bath(1.0);
    let rho = sample_random_density(10, 1200);
    let start = Instant::now();
    let out = evolve(&rho, &b, 0.7).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure((out.matrix().trace().re - 1.0).abs() < 1e-10, || "trace not preserved".into())?;
    ensure(elapsed < Duration::from_secs(2), || format!("M=10 evolve took {elapsed:?}"))?;

    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let small = sample_random_density(2, 1300 + seed);
        for t in [0.0, 0.1, 0.5, 2.0] {
            let q = kraus_quartet(1.0, &coefficients(&b, t).map_err(|e| e.to_string())?);
            let d = apply_to_all(&small, &q).matrix().max_abs_diff(apply_by_enumeration(&small, &q).matrix());
            worst = worst.max(d);
        }
    }
    ensure(worst <= 1e-12, || format!("factorised vs enumeration {worst:e}"))?;
    Ok(format!("M=10 evolve in {elapsed:.2?}; factorised vs enumeration {worst:.1e}"))
}

type Criterion = (&'static str, Duration, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("Kraus completeness", Duration::from_secs(1), criterion_1),
        ("Kraus vs Lindblad", Duration::from_secs(30), criterion_2),
        ("steady state", Duration::from_secs(30), criterion_3),
        ("steady-state Λ", Duration::from_secs(1), criterion_4),
        ("ESD universality", Duration::from_secs(300), criterion_5),
        ("zero-temperature Bell", Duration::from_secs(30), criterion_6),
        ("temperature monotonicity", Duration::from_secs(30), criterion_7),
        ("log estimate vs numerical root", Duration::from_secs(60), criterion_8),
        ("Peres vs Wootters", Duration::from_secs(60), criterion_9),
        ("witness contract", Duration::from_secs(60), criterion_10),
        ("separable neighborhood", Duration::from_secs(300), criterion_11),
        ("performance", Duration::from_secs(30), criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = run();
        let elapsed = start.elapsed();
        if result.is_ok() && elapsed > *budget {
            result = Err(format!("took {elapsed:.2?}, budget {budget:?}"));
        }
        match result {
            Ok(detail) => println!("[PASS] {:>2} {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name} ({elapsed:.2?}): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
