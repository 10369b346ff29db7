//! Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers
//! as arguments to run a subset.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use prodcode::algebra::{poly_ext_gcd, poly_gcd, Field, Gf, Matrix, UniPoly};
use prodcode::bounds::{homological_sweep, subsystem_sweep, SweepConfig, DISTANCE_BUDGET};
use prodcode::codes::{
    dual_tensor, is_mds, min_distance, punctured_tensor_rs, rs_code, tensor, LinearCode, TensorIndex,
};
use prodcode::decoder::{alpha_decode, hamming, ConstantsMode, DecodePath, DualTensorInstance};
use prodcode::expansion::{epsilon_closure, pe_exact, pe_exact_cost, PE_EXACT_BUDGET};
use prodcode::quantum::{
    subsystem_decode, subsystem_decode_syndromes, SubsystemRsDecoder, SyndromeInput, SyndromeSolver,
};
use prodcode::subsystem::{check_matrices, CheckStyle};
use prodcode::transversal::{
    exponent_set_check, gamma_satisfies, phase_identity_test, sabotage_run, smallest_window_m,
    transrs_gate, transrs_params, triple_product_build, Certificate, GateInstance, Sabotage, Verdict,
};
use prodcode_cli::config::{Command, ExperimentConfig, SingleShotTrials};
use prodcode_cli::fixtures;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn orders(max: u64) -> Vec<u64> {
    (2..=max).filter(|&q| Field::of_order(q).is_ok()).collect()
}

fn same_code(a: &LinearCode, b: &LinearCode) -> bool {
    a.dim() == b.dim() && a.is_subcode_of(b)
}

// 1

fn random_poly(f: &Field, deg: usize, rng: &mut ChaCha8Rng) -> UniPoly {
    UniPoly::new((0..=deg).map(|_| f.random(rng)).collect())
}

fn algebra() -> Check {
    let qs = orders(64);
    for &q in &qs {
        let f = Field::of_order(q).unwrap();
        let p = f.p() as u64;
        let prime: Vec<Gf> = (0..p as i64).map(|c| f.from_int(c)).collect();
        for a in f.elements() {
            let t = f.trace(a);
            ensure!(f.pow(t, p) == t, "GF({q}): Tr({a:?}) outside the prime field");
            ensure!(f.trace(f.frobenius(a)) == t, "GF({q}): Tr not Frobenius-invariant at {a:?}");
            for &c in &prime {
                ensure!(f.trace(f.mul(c, a)) == f.mul(c, t), "GF({q}): Tr not F_p-linear");
            }
            for b in f.elements() {
                ensure!(f.trace(f.add(a, b)) == f.add(t, f.trace(b)), "GF({q}): Tr not additive");
            }
        }
    }
    let fields: Vec<Field> = [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 64, 1 << 17]
        .iter()
        .map(|&q| Field::of_order(q).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..10_000 {
        let f = &fields[rng.gen_range(0..fields.len())];
        let h = random_poly(f, rng.gen_range(0..4), &mut rng);
        let a = random_poly(f, rng.gen_range(0..7), &mut rng).mul(f, &h);
        let b = random_poly(f, rng.gen_range(0..7), &mut rng).mul(f, &h);
        if a.is_zero() && b.is_zero() {
            ensure!(poly_gcd(f, &a, &b).is_err(), "case {case}: gcd(0, 0) accepted");
            continue;
        }
        let g = poly_gcd(f, &a, &b).unwrap();
        ensure!(a.rem(f, &g).is_zero() && b.rem(f, &g).is_zero(), "case {case}: gcd does not divide");
        ensure!(g.lead() == Gf::ONE, "case {case}: gcd not monic");
        if !h.is_zero() {
            ensure!(g.rem(f, &h.monic(f)).is_zero(), "case {case}: planted factor missing from gcd");
        }
        let (g2, s, t) = poly_ext_gcd(f, &a, &b).unwrap();
        ensure!(g2 == g, "case {case}: extended gcd differs");
        ensure!(s.mul(f, &a).add(f, &t.mul(f, &b)) == g, "case {case}: Bezout identity fails");
    }
    for case in 0..10_000 {
        let f = &fields[rng.gen_range(0..fields.len())];
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let mut m = Matrix::random(f, r, c, &mut rng);
        if rng.gen_bool(0.5) && r > 1 {
            // force a dependent row
            let row: Vec<Gf> = f.add_vec(m.row(0), m.row(r / 2));
            m.row_mut(r - 1).copy_from_slice(&row);
        }
        let k = m.kernel();
        ensure!(m.rank() + k.rows() == c, "case {case}: rank-nullity fails");
        ensure!(m.rank() == m.transpose().rank(), "case {case}: row rank != column rank");
        for v in k.row_vecs() {
            ensure!(m.mul_vec(&v).iter().all(|x| x.is_zero()), "case {case}: kernel vector not annihilated");
        }
    }
    Ok(format!("trace over {} fields, 10^4 gcd and 10^4 rank-nullity cases", qs.len()))
}

// 2

fn duality() -> Check {
    let mut rs = 0;
    for q in orders(16) {
        let f = Field::of_order(q).unwrap();
        let n = q as usize;
        for k in 0..=n {
            let c = rs_code(&f, n, k, None).unwrap();
            let d = rs_code(&f, n, n - k, None).unwrap();
            ensure!(same_code(&c.dual(), &d), "RS({q},{k})^⊥ != RS({q},{})", n - k);
            rs += 1;
        }
    }
    let f = Field::of_order(8).unwrap();
    let mut pairs = 0;
    for n in 1..=8 {
        let id = Matrix::identity(&f, n);
        for k1 in 0..=n {
            for k2 in 0..=n {
                let c1 = rs_code(&f, n, k1, None).unwrap();
                let c2 = rs_code(&f, n, k2, None).unwrap();
                let (d1, d2) = (c1.dual(), c2.dual());
                let span = d1
                    .generator()
                    .kron(&id)
                    .unwrap()
                    .vstack(&id.kron(d2.generator()).unwrap())
                    .unwrap();
                let by_hand = LinearCode::new(span, "hand");
                let perp = tensor(&[&c1, &c2]).unwrap().dual();
                ensure!(same_code(&perp, &by_hand), "n={n} k=({k1},{k2}): (C1⊗C2)^⊥ != C1^⊥⊞C2^⊥");
                let dt = dual_tensor(&[&d1, &d2]).unwrap();
                ensure!(same_code(&dt, &by_hand), "n={n} k=({k1},{k2}): dual_tensor differs");
                let c_dt = dual_tensor(&[&c1, &c2]).unwrap();
                let formula = n * n - (n - k1) * (n - k2);
                let direct = c1.generator().kron(&id).unwrap().vstack(&id.kron(c2.generator()).unwrap()).unwrap();
                ensure!(direct.rank() == formula, "n={n} k=({k1},{k2}): rank {} != {formula}", direct.rank());
                ensure!(c_dt.dim() == formula, "n={n} k=({k1},{k2}): dual_tensor dim {}", c_dt.dim());
                pairs += 1;
            }
        }
    }
    Ok(format!("{rs} RS duals, {pairs} tensor pairs"))
}

// 3 and 4

#[derive(Default)]
struct SuiteStats {
    trials: usize,
    literal: usize,
    not_codeword: usize,
    fallbacks: usize,
    wrong_output: usize,
    alpha_violations: usize,
    stage1_violations: usize,
    stage3_violations: usize,
    iteration_violations: usize,
    literal_stage1_violations: usize,
    max_stage1: usize,
    max_decode: Duration,
    elapsed: Duration,
}

fn plant(inst: &DualTensorInstance, w: usize, rng: &mut ChaCha8Rng) -> (Vec<Gf>, Vec<Gf>) {
    let f = inst.field();
    let n = inst.n();
    let a = inst.random_codeword(rng);
    let cells: Vec<usize> = match rng.gen_range(0..3) {
        0 => sample(rng, n * n, w).into_vec(),
        1 => {
            let r = rng.gen_range(0..n);
            sample(rng, n, w).into_iter().map(|j| r * n + j).collect()
        }
        _ => {
            let c = rng.gen_range(0..n);
            sample(rng, n, w).into_iter().map(|i| i * n + c).collect()
        }
    };
    let mut c = a.clone();
    for x in cells {
        c[x] = f.add(c[x], f.random_nonzero(rng));
    }
    (a, c)
}

fn planted_suite() -> &'static [(usize, SuiteStats)] {
    static S: OnceLock<Vec<(usize, SuiteStats)>> = OnceLock::new();
    S.get_or_init(|| {
        [32, 64]
            .into_iter()
            .map(|n| {
                let t0 = Instant::now();
                let f = Field::of_order(n as u64).unwrap();
                let inst = DualTensorInstance::new(&f, n, n / 8, n / 4, None, None, 0.5, 0.125, ConstantsMode::Scaled { gamma: 20.0 })
                    .unwrap();
                let s = inst.s();
                let literal_w = inst.d0().floor() as usize;
                let extended_w = (s + 1) * (s + 1) - 1;
                let literal_bound = inst.rho() * inst.eps() * (n * n) as f64 / 50.0;
                let mut st = SuiteStats::default();
                let mut rng = ChaCha8Rng::seed_from_u64(1000 + n as u64);
                // 200 trials in the literal promise, 200 in the extended one
                for t in 0..400 {
                    let literal = t < 200;
                    let w = if literal { t % (literal_w + 1) } else { 1 + t % extended_w };
                    let (a, c) = plant(&inst, w, &mut rng);
                    let b = hamming(&a, &c);
                    let t1 = Instant::now();
                    let rep = alpha_decode(&inst, &c).unwrap();
                    st.max_decode = st.max_decode.max(t1.elapsed());
                    st.trials += 1;
                    st.literal += usize::from(literal);
                    st.not_codeword += usize::from(!inst.contains(&rep.output));
                    st.fallbacks += usize::from(rep.path == DecodePath::Fallback);
                    st.wrong_output += usize::from(rep.output != a);
                    st.alpha_violations += usize::from(rep.residual as f64 > inst.alpha() * b as f64);
                    if rep.path == DecodePath::Stages {
                        let s1 = rep.stage1_residual(&c).unwrap_or(usize::MAX);
                        st.max_stage1 = st.max_stage1.max(s1);
                        st.stage1_violations += usize::from(s1 as f64 > inst.stage1_bound());
                        if literal {
                            st.literal_stage1_violations += usize::from(s1 as f64 > literal_bound);
                        }
                        let fin = rep.finish.as_ref().unwrap();
                        st.stage3_violations +=
                            usize::from(prodcode::algebra::weight(&fin.output) as f64 > inst.stage3_bound(b));
                        st.iteration_violations += usize::from(fin.iterations > n * n);
                    }
                }
                st.elapsed = t0.elapsed();
                (n, st)
            })
            .collect()
    })
}

fn dual_tensor_decoder() -> Check {
    let mut notes = Vec::new();
    for (n, st) in planted_suite() {
        ensure!(st.not_codeword == 0, "n={n}: {} outputs not codewords", st.not_codeword);
        ensure!(st.fallbacks == 0, "n={n}: FALLBACK fired {} times", st.fallbacks);
        ensure!(st.alpha_violations == 0, "n={n}: {} residuals above α|e|", st.alpha_violations);
        ensure!(st.wrong_output == 0, "n={n}: {} planted codewords not recovered", st.wrong_output);
        ensure!(st.max_decode < Duration::from_secs(5), "n={n}: slowest decode {:?}", st.max_decode);
        notes.push(format!("n={n}: {} trials ({} literal), slowest {:.0?}", st.trials, st.literal, st.max_decode));
    }
    let total: Duration = planted_suite().iter().map(|(_, s)| s.elapsed).sum();
    ensure!(total < Duration::from_secs(600), "suite took {total:?}");
    Ok(notes.join("; "))
}

fn stage_bounds() -> Check {
    let mut notes = Vec::new();
    for (n, st) in planted_suite() {
        ensure!(
            st.literal_stage1_violations == 0,
            "n={n}: literal stage-1 bound ρεn²/50 violated {} times",
            st.literal_stage1_violations
        );
        ensure!(st.stage1_violations == 0, "n={n}: {} stage-1 violations", st.stage1_violations);
        ensure!(st.stage3_violations == 0, "n={n}: {} stage-3 violations", st.stage3_violations);
        ensure!(st.iteration_violations == 0, "n={n}: {} iteration violations", st.iteration_violations);
        notes.push(format!("n={n}: max stage-1 residual {}", st.max_stage1));
    }
    Ok(notes.join("; "))
}

// 5

fn quantum_subsystem() -> Check {
    let f = Field::of_order(16).unwrap();
    let d = SubsystemRsDecoder::new(&f, 16, [12, 9], [12, 9], 0.125, ConstantsMode::default()).map_err(|e| e.to_string())?;
    let checks = check_matrices(&d.code, CheckStyle::Tensor).unwrap();
    let solver = SyndromeSolver::new(&checks).unwrap();
    let len = d.code.pair.len();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let plant = |w: usize, rng: &mut ChaCha8Rng| {
        let mut e = vec![Gf::ZERO; len];
        for i in sample(rng, len, w) {
            e[i] = f.random_nonzero(rng);
        }
        e
    };
    // weight 0 is the literal promise; 1..3 the extended one
    for t in 0..400 {
        let w = if t < 200 { 0 } else { 1 + t % 3 };
        let tz = d.z_decoder().target().random_codeword(&mut rng);
        let tx = d.x_decoder().target().random_codeword(&mut rng);
        let cz = f.add_vec(&tz, &plant(w, &mut rng));
        let cx = f.add_vec(&tx, &plant(w, &mut rng));
        let word = subsystem_decode(&d, &cx, &cz).map_err(|e| format!("trial {t}: {e}"))?;
        ensure!(d.in_x_gauge(&f.sub_vec(&word.z.coset.representative, &tz)), "trial {t}: wrong Z coset");
        ensure!(d.in_z_gauge(&f.sub_vec(&word.x.coset.representative, &tx)), "trial {t}: wrong X coset");
        let s = SyndromeInput {
            s_x: checks.hx.mul_vec(&cx),
            s_z: checks.hz.mul_vec(&cz),
        };
        let syn = subsystem_decode_syndromes(&d, &solver, &s).map_err(|e| format!("trial {t}: {e}"))?;
        let bz = f.sub_vec(&cz, &word.z.coset.representative);
        let bx = f.sub_vec(&cx, &word.x.coset.representative);
        ensure!(d.in_x_gauge(&f.sub_vec(&syn.z.coset.representative, &bz)), "trial {t}: syndrome path disagrees (Z)");
        ensure!(d.in_z_gauge(&f.sub_vec(&syn.x.coset.representative, &bx)), "trial {t}: syndrome path disagrees (X)");
    }
    Ok("200 literal + 200 extended trials, word and syndrome paths agree".into())
}

// 6

fn distance_bounds() -> Check {
    let cfg = SweepConfig {
        pe_budget: 1 << 26,
        dist_budget: DISTANCE_BUDGET,
        ..SweepConfig::default()
    };
    let sub = subsystem_sweep(&cfg).map_err(|e| e.to_string())?;
    let hom = homological_sweep(&cfg).map_err(|e| e.to_string())?;
    ensure!(sub.violations().is_empty(), "subsystem bound violated: {:?}", sub.violations());
    ensure!(hom.violations().is_empty(), "homological bound violated: {:?}", hom.violations());
    let fill = hom.records.iter().filter(|r| r.filling.is_some()).count();
    Ok(format!(
        "subsystem {} compared ({} skipped for pe budget, {} inexact distance); homological {} compared ({} with filling check)",
        sub.compared(),
        sub.skipped_pe,
        sub.inexact(),
        hom.compared(),
        fill
    ))
}

// 7

fn random_code(rng: &mut ChaCha8Rng) -> LinearCode {
    loop {
        let q = [2u64, 3, 4, 5][rng.gen_range(0..4)];
        let f = Field::of_order(q).unwrap();
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(1..n);
        let c = LinearCode::new(Matrix::random(&f, k, n, rng), "random");
        if c.dim() > 0 {
            return c;
        }
    }
}

fn scaled(c: &LinearCode, rng: &mut ChaCha8Rng) -> LinearCode {
    let f = c.field().clone();
    let g: Vec<Gf> = (0..c.len()).map(|_| f.random_nonzero(rng)).collect();
    c.scaled(&g).unwrap()
}

fn product_expansion() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut singles = Vec::new();
    for i in 0..50 {
        let c = random_code(&mut rng);
        let rho = pe_exact(&[&c], PE_EXACT_BUDGET).map_err(|e| e.to_string())?.rho;
        let d = min_distance(&c, 1 << 24);
        ensure!(d.exact, "code {i}: distance not exact");
        let d = d.value.unwrap() as u64;
        ensure!(*rho.numer() * c.len() as u64 == d * *rho.denom(), "code {i}: ρ = {rho} but d/n = {d}/{}", c.len());
        let s = scaled(&c, &mut rng);
        ensure!(pe_exact(&[&s], PE_EXACT_BUDGET).unwrap().rho == rho, "code {i}: scaling changed ρ");
        singles.push((c, rho));
    }
    let mut pairs = 0;
    let mut tried = 0;
    while pairs < 20 && tried < 500 {
        tried += 1;
        let i = rng.gen_range(0..singles.len());
        let j = rng.gen_range(0..singles.len());
        let ((a, ra), (b, rb)) = (&singles[i], &singles[j]);
        if a.field() != b.field() || pe_exact_cost(&[a, b]).map_or(true, |c| c > PE_EXACT_BUDGET) {
            continue;
        }
        let r = pe_exact(&[a, b], PE_EXACT_BUDGET).unwrap().rho;
        ensure!(r <= *ra && r <= *rb, "pair ({i},{j}): ρ = {r} exceeds a single-code value");
        let (sa, sb) = (scaled(a, &mut rng), scaled(b, &mut rng));
        ensure!(pe_exact(&[&sa, &sb], PE_EXACT_BUDGET).unwrap().rho == r, "pair ({i},{j}): scaling changed ρ");
        pairs += 1;
    }
    ensure!(pairs >= 10, "only {pairs} pair instances fit the budget");
    let shapes: [&[usize]; 4] = [&[3, 3], &[4, 4], &[4, 6], &[3, 3, 3]];
    for t in 0..1000 {
        let idx = TensorIndex::new(shapes[t % 4]);
        let set: Vec<bool> = (0..idx.size()).map(|_| rng.gen_bool(0.25)).collect();
        let eps = rng.gen_range(0.05..=1.0);
        let cl = epsilon_closure(&idx, &set, eps);
        ensure!(set.iter().zip(&cl).all(|(a, b)| !a || *b), "set {t}: closure drops cells");
        ensure!(epsilon_closure(&idx, &cl, eps) == cl, "set {t}: closure not idempotent");
    }
    Ok(format!("50 single codes, {pairs} pairs, 1000 closures"))
}

// 8

fn check_gate(g: &GateInstance, r: usize, q: usize) -> Check {
    let Certificate::Ranks(c) = &g.certificate else {
        return Err(format!("({r},{q}): expected a rank certificate"));
    };
    ensure!(c.intersection_dim() == 0, "({r},{q}): L^{{*r}} ∩ W has dim {}", c.intersection_dim());
    ensure!(exponent_set_check(&transrs_params(r, q).unwrap()).empty, "({r},{q}): exponent set not empty");
    let rep = phase_identity_test(g, 1000, 2024);
    ensure!(rep.passed == 1000, "({r},{q}): phase identity {}/1000, witness {:?}", rep.passed, rep.witness);
    Ok(String::new())
}

fn transversal() -> Check {
    let gates: Vec<(usize, usize, GateInstance)> = [(2, 16), (3, 37)]
        .into_iter()
        .map(|(r, q)| transrs_gate(&transrs_params(r, q).unwrap()).map(|g| (r, q, g)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for (r, q, g) in &gates {
        check_gate(g, *r, *q)?;
    }
    for run in 0..20u64 {
        let kind = if run % 2 == 0 { Sabotage::PerturbedCoefficients } else { Sabotage::EnlargedStabilizers };
        let g = &gates[usize::from(run % 4 >= 2)].2;
        let out = sabotage_run(g, kind, 100 + run, 1000).map_err(|e| e.to_string())?;
        ensure!(out.caught, "sabotage run {run} not caught: {}", out.detail);
    }
    Ok("both gates certified, 2000 phase trials, 20/20 sabotage runs caught".into())
}

// 9

fn triple_product() -> Check {
    let f = Field::of_order(1 << 17).unwrap();
    let m = smallest_window_m();
    let t = triple_product_build(&f, m, 1, 2024).map_err(|e| e.to_string())?;
    ensure!(!t.params.empty_window, "window empty at m={m}");
    ensure!(t.gamma_valid, "γ search failed");
    for i in 0..3 {
        ensure!(t.gammas[i].iter().all(|x| !x.is_zero()), "γ_{i} has a zero entry");
        ensure!(gamma_satisfies(&f, &t.points[i], &t.params, &t.gammas[i]), "γ_{i} fails its equations");
    }
    let mut note = format!("m={m}, verdict {:?}", t.verdict);
    if t.verdict == Verdict::Holds {
        let g = t.gate.as_ref().ok_or("verdict holds but no gate")?;
        let rep = phase_identity_test(g, 1000, 7);
        ensure!(rep.all_passed(), "phase identity failed: {:?}", rep.witness);
        note.push_str(", phase 1000/1000");
    }
    Ok(note)
}

// 10

fn single_shot() -> Check {
    let cfg = ExperimentConfig {
        seed: 11,
        command: Command::SingleShotTrials(SingleShotTrials {
            q: 8,
            factors: vec![[5, 5], [5, 5]],
            amplified_seed: 7,
            data_weight: None,
            syndrome_noise: None,
            trials: 500,
        }),
    };
    let out = prodcode_cli::run(&cfg).map_err(|e| e.to_string())?;
    let p = out.promise.unwrap();
    let v_max = out.result["v_max"].as_u64().unwrap_or(0);
    ensure!(v_max >= 1, "promise admits no syndrome noise");
    ensure!(p.out_of_promise == 0, "{} trials outside the promise", p.out_of_promise);
    ensure!(p.in_promise_success == 500, "{} in-promise failures", p.in_promise_failure);
    Ok(format!(
        "500/500, e_max={} v_max={v_max} ρ̂={:.3} d={} (exact: {})",
        out.result["e_max"], out.result["soundness"], out.result["distance"], out.result["distance_exact"]
    ))
}

// 11

fn punctured_mds() -> Check {
    let f = Field::of_order(1 << 17).unwrap();
    for seed in 0..50 {
        let e = punctured_tensor_rs(&f, 3, 2, 2, None, seed).map_err(|e| e.to_string())?;
        ensure!(is_mds(&e.code), "draw {seed} is not MDS");
    }
    Ok("50/50 draws MDS".into())
}

// 12

fn determinism() -> Check {
    let paths = fixtures::fixture_paths(&fixtures::shipped_dir()).map_err(|e| e.to_string())?;
    ensure!(!paths.is_empty(), "no fixtures shipped");
    for p in &paths {
        let c = fixtures::check(p).map_err(|e| e.to_string())?;
        ensure!(c.actual == c.expected, "{}: hash {} != pinned {}", c.name, c.actual, c.expected);
        ensure!(!c.failed_trials, "{}: in-promise failure", c.name);
    }
    Ok(format!("{} fixtures reproduce", paths.len()))
}

type Criterion = (u32, &'static str, u64, fn() -> Check);

const CRITERIA: [Criterion; 12] = [
    (1, "algebra soundness", 30, algebra),
    (2, "duality and product identities", 60, duality),
    (3, "dual-tensor planted suite", 600, dual_tensor_decoder),
    (4, "stage bounds", 600, stage_bounds),
    (5, "quantum subsystem decode", 300, quantum_subsystem),
    (6, "distance bounds", 1200, distance_bounds),
    (7, "product-expansion oracles", 600, product_expansion),
    (8, "transversal gate verification", 300, transversal),
    (9, "triple product", 600, triple_product),
    (10, "single-shot decoding", 600, single_shot),
    (11, "punctured tensor RS is MDS", 300, punctured_mds),
    (12, "fixture determinism", u64::MAX, determinism),
];

fn main() -> ExitCode {
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, limit, f) in CRITERIA {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        let res = match res {
            Ok(_) if secs > limit as f64 => Err(format!("over the {limit} s limit")),
            r => r,
        };
        match res {
            Ok(note) => println!("PASS {id:>2} {name} ({secs:.1} s): {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id:>2} {name} ({secs:.1} s): {why}");
            }
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
