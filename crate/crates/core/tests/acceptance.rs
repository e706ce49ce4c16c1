//! The eight acceptance criteria, one report line each. Runs without the
//! libtest harness so the lines always reach the output; exits nonzero if
//! any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use prym_lab::exact::{Field, SeededRng};
use prym_lab::formulas::formula_table;
use prym_lab::genus5::{run_genus5, SquareConfig};
use prym_lab::linsys::{sample_member, solve, ConditionSpec, Verdict};
use prym_lab::planeprym::{
    audit_member, prym_parameters, prym_system, run_prym, sample_configuration, verify_claims, PrymConfiguration,
    PrymRunOptions,
};
use prym_lab::poly::MonomialBasis;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn primes() -> [Field; 2] {
    Field::default_primes()
}

fn within(elapsed: Duration, limit_secs: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_secs, || {
        format!("took {:.2} s, limit {limit_secs} s", elapsed.as_secs_f64())
    })
}

/// Independent evaluation of the closed forms; `h = floor(g/2)`, `eps = g mod 2`.
fn formula_regression() -> Check {
    let start = Instant::now();
    for g in 5u32..=12 {
        let t = formula_table(g).map_err(|e| e.to_string())?;
        let (g64, h, eps) = (g as u64, (g / 2) as u64, (g % 2) as u64);
        let two_torsion = (0..2 * g).fold(1u128, |acc, _| acc * 2) - 1;
        let expected = (3 * g64 - 3, two_torsion, 2 * g64 + 1, 2 * g64 - 2, (g >= 7).then_some(2 * g64 + 3), 4 * h + 9 + 3 * eps);
        let got = (t.dim_rg, t.deg_forgetful, t.dim_r0g, t.dim_r0nb, t.dim_tetragonal, t.dim_h);
        ensure(got == expected, || format!("g = {g}: {got:?} != {expected:?}"))?;
        ensure(t.tetragonal_is_rg == (g <= 6), || format!("g = {g}: tetragonal flag"))?;
        let block = (t.dim_v, t.dim_v_linear_system, t.dim_v_prime, t.dim_b5, t.dim_d05);
        ensure(block == (16, 12, 10, 10, 10), || format!("genus-5 constants {block:?}"))?;
    }
    within(start.elapsed(), 1.0)?;
    Ok("g = 5..12 exact".into())
}

fn dimension_certificates() -> Check {
    let start = Instant::now();
    for g in 5u32..=12 {
        let p = prym_parameters(g).map_err(|e| e.to_string())?;
        let (h, eps) = ((g / 2) as i64, (g % 2) as i64);
        let certs = verify_claims(&p, 3, &primes(), 1).map_err(|e| e.to_string())?;
        let expected = [2 * h + 9 - eps, 2 * h - 1 - eps, 2 * h + 1 - eps];
        for (c, e) in certs.iter().zip(expected) {
            ensure(c.expected == e, || format!("{}: expected {} vs {e}", c.claim, c.expected))?;
            ensure(c.verdict == Verdict::Pass, || format!("{}: {:?}", c.claim, c.verdict))?;
            ensure(c.trials.iter().all(|t| t.computed == e), || format!("{}: trials {:?}", c.claim, c.trials))?;
        }
    }
    within(start.elapsed(), 30.0)?;
    Ok("24/24 certificates PASS at two primes, 3 trials each".into())
}

fn member_audits() -> Check {
    let f = primes()[0];
    let mut passed = 0;
    for g in 5u32..=9 {
        let p = prym_parameters(g).map_err(|e| e.to_string())?;
        for seed in 1..=5u64 {
            let mut rng = SeededRng::new(seed);
            let cfg = sample_configuration(f, &p, &mut rng).map_err(|e| e.to_string())?;
            let sys = solve(f, MonomialBasis::plane(p.n()), cfg.claim32_conditions(&p)).map_err(|e| e.to_string())?;
            let gamma = sample_member(&sys, &mut rng, &[], &cfg.lines).map_err(|e| e.to_string())?;
            let audit = audit_member(&gamma, &cfg, &p, &mut rng).map_err(|e| e.to_string())?;
            ensure(audit.passes(), || format!("g = {g}, seed {seed}: {audit:?}"))?;
            passed += 1;
        }
    }
    Ok(format!("{passed}/25 members audited clean"))
}

fn prym_completeness() -> Check {
    let f = primes()[0];
    for g in 5u32..=12 {
        let p = prym_parameters(g).map_err(|e| e.to_string())?;
        let mut rng = SeededRng::new(g as u64);
        let cfg = sample_configuration(f, &p, &mut rng).map_err(|e| e.to_string())?;
        let sys = solve(f, MonomialBasis::plane(p.n()), cfg.claim32_conditions(&p)).map_err(|e| e.to_string())?;
        let gamma = sample_member(&sys, &mut rng, &[], &cfg.lines).map_err(|e| e.to_string())?;
        let audit = audit_member(&gamma, &cfg, &p, &mut rng).map_err(|e| e.to_string())?;
        ensure(audit.passes(), || format!("g = {g}: audit failed"))?;
        let prym = prym_system(&cfg, &p).map_err(|e| e.to_string())?;
        ensure(prym.vector_dimension == g as usize - 1, || format!("g = {g}: dimension {}", prym.vector_dimension))?;
    }
    for g in 5u32..=64 {
        // n = h + 3 + eps and delta = h + 2 eps
        let (h, eps) = ((g / 2) as i64, (g % 2) as i64);
        let (n, delta) = (h + 3 + eps, h + 2 * eps);
        ensure(3 * n - 10 - delta == g as i64 - 1, || format!("count identity fails at g = {g}"))?;
        let p = prym_parameters(g).map_err(|e| e.to_string())?;
        ensure(p.prym_count() == g as i64 - 1 && p.delta as i64 == delta, || format!("parameters at g = {g}"))?;
    }
    Ok("vector dimension g-1 for g = 5..12; identity for g = 5..64".into())
}

fn two_nodes() -> Check {
    let opts = PrymRunOptions::default();
    let mut passed = 0;
    for g in 5u32..=9 {
        for seed in 1..=5u64 {
            let c = run_prym(g, seed, &opts).map_err(|e| e.to_string())?;
            let tag = format!("g = {g}, seed {seed}");
            ensure(c.gluings.len() == 2, || format!("{tag}: {} gluings", c.gluings.len()))?;
            ensure(c.gluings.iter().all(|r| r.image_equal && r.tangents_distinct), || format!("{tag}: {:?}", c.gluings))?;
            ensure(c.images_distinct && c.eta_nontrivial, || format!("{tag}: images/eta"))?;
            ensure(c.spot.pairs == 200 && c.spot.separated == 200 && c.spot.immersed == 200, || {
                format!("{tag}: spot {:?}", c.spot)
            })?;
            ensure(c.verdict == Verdict::Pass, || format!("{tag}: verdict {:?}", c.verdict))?;
            passed += 1;
        }
    }
    Ok(format!("{passed}/25 instances with exactly two nodes"))
}

fn genus5_lab() -> Check {
    let start = Instant::now();
    let mut passed = 0;
    for f in primes() {
        for seed in 1..=10u64 {
            let c = run_genus5(seed, f).map_err(|e| e.to_string())?;
            let tag = format!("p = {}, seed {seed}", f.modulus());
            ensure(c.system_dimension == 12 && c.canonical_dimension == 5, || format!("{tag}: dimensions"))?;
            ensure(c.net.quadrics.len() == 3 && c.net.holdout_ok, || format!("{tag}: net"))?;
            ensure(c.ruling_quadrics.iter().all(|q| q.rank == 3 && q.in_net), || format!("{tag}: ruling quadrics"))?;
            ensure(c.quadrics_distinct, || format!("{tag}: quadrics coincide"))?;
            ensure(c.theta.omega_2l1.passes() && c.theta.omega_2l2.passes(), || format!("{tag}: theta witnesses"))?;
            ensure(c.theta.eta_nontrivial, || format!("{tag}: eta"))?;
            ensure(c.segre.gluings.len() == 4 && c.segre.passes(), || format!("{tag}: Segre nodes"))?;
            ensure(c.verdict == Verdict::Pass, || format!("{tag}: verdict"))?;
            passed += 1;
        }
    }
    within(start.elapsed(), 10.0)?;
    Ok(format!("{passed}/20 instances"))
}

fn content_hash(stdout: &[u8]) -> Result<String, String> {
    let v: serde_json::Value = serde_json::from_slice(stdout).map_err(|e| e.to_string())?;
    v["content_hash"].as_str().map(str::to_string).ok_or_else(|| "no content_hash".into())
}

fn determinism() -> Check {
    let bin = env!("CARGO_BIN_EXE_prym-verifier");
    let mut hashes = Vec::new();
    for _ in 0..2 {
        let out = Command::new(bin)
            .args(["all", "--g", "5..8", "--seed", "1", "--timestamp"])
            .env_remove("PRYM_VERIFIER_PRIMES")
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(0), || format!("exit status {:?}", out.status))?;
        hashes.push(content_hash(&out.stdout)?);
    }
    ensure(hashes[0] == hashes[1], || format!("{} != {}", hashes[0], hashes[1]))?;
    Ok(format!("two runs hash {}", &hashes[0][..16]))
}

fn control_triple_point() -> Check {
    let f = primes()[0];
    let p = prym_parameters(5).map_err(|e| e.to_string())?;
    let mut rng = SeededRng::new(4);
    let cfg = sample_configuration(f, &p, &mut rng).map_err(|e| e.to_string())?;
    let mut conds = cfg.claim32_conditions(&p);
    conds.push(ConditionSpec::multiplicity(cfg.nodes[0], 3));
    let sys = solve(f, MonomialBasis::plane(p.n()), conds).map_err(|e| e.to_string())?;
    let gamma = sample_member(&sys, &mut rng, &[], &cfg.lines).map_err(|e| e.to_string())?;
    let audit = audit_member(&gamma, &cfg, &p, &mut rng).map_err(|e| e.to_string())?;
    ensure(!audit.nodes[0] && !audit.passes(), || "triple point not flagged".into())?;
    Ok("node flag false".into())
}

fn control_coincident_q() -> Check {
    let f = primes()[0];
    let p = prym_parameters(5).map_err(|e| e.to_string())?;
    let cfg = sample_configuration(f, &p, &mut SeededRng::new(3)).map_err(|e| e.to_string())?;
    let q = [[cfg.q[0][0], cfg.q[0][0]], cfg.q[1]];
    match PrymConfiguration::new(f, &p, cfg.nodes.clone(), cfg.lines, q) {
        Err(prym_lab::Error::InvalidConfiguration(m)) => Ok(format!("rejected: {m}")),
        other => Err(format!("accepted: {other:?}")),
    }
}

fn control_collapsed_square() -> Check {
    let f = primes()[1];
    let (a, b) = (f.elem(11), f.elem(13));
    match (SquareConfig::new(f, a, b, a, a), SquareConfig::new(f, a, a, a, b)) {
        (Err(prym_lab::Error::InvalidConfiguration(_)), Err(prym_lab::Error::InvalidConfiguration(_))) => {
            Ok("both collapses rejected".into())
        }
        other => Err(format!("{other:?}")),
    }
}

fn negative_controls() -> Check {
    let parts = [
        ("triple point", control_triple_point()),
        ("coincident q", control_coincident_q()),
        ("collapsed square", control_collapsed_square()),
    ];
    for (name, r) in &parts {
        println!("    control {name}: {}", match r {
            Ok(d) => format!("ok ({d})"),
            Err(e) => format!("NOT REJECTED ({e})"),
        });
    }
    let failed: Vec<&str> = parts.iter().filter(|(_, r)| r.is_err()).map(|(n, _)| *n).collect();
    ensure(failed.is_empty(), || format!("controls failed: {failed:?}"))?;
    Ok("3/3 controls rejected or flagged".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("formula regression", formula_regression),
        ("dimension certificates", dimension_certificates),
        ("member audit", member_audits),
        ("prym system completeness", prym_completeness),
        ("two-node certificate", two_nodes),
        ("genus-5 laboratory", genus5_lab),
        ("determinism", determinism),
        ("negative controls", negative_controls),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.2} s)", k + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {} {name}: FAIL ({why}; {secs:.2} s)", k + 1);
            }
        }
    }
    println!("acceptance: {}/8 criteria pass", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
