//! Acceptance checks for the control stack. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, SymmetricEigen};
use quadloco::feet::CommandSet;
use quadloco::linalg::{ldq_decompose, ldu_decompose, pivot_iterations, Matrix, Vec3};
use quadloco::model::{
    constraint_matrix, pose, ContactFlags, RobotParams, LEG_COUNT, RANK_BY_CONTACTS,
};
use quadloco::scenario::{
    run_scenario, write_trace, NBucket, RunOptions, RunOutput, Scenario, Summary,
};
use quadloco::sim::Controller;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SLOW: &str = include_str!("../../../data/scenarios/slow_tour.scn");
const FAST: &str = include_str!("../../../data/scenarios/fast_tour.scn");
const EMPTY: &str = include_str!("../../../data/scenarios/empty.scn");

const INSTANCES: usize = 1000;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

struct Run {
    name: &'static str,
    result: Result<RunOutput, String>,
    elapsed: Duration,
}

fn run(name: &'static str, text: &str) -> Run {
    let scenario = Scenario::parse(text).expect("bundled scenario parses");
    let started = Instant::now();
    let result = run_scenario(&RobotParams::go2(), &scenario, &RunOptions::default())
        .map_err(|f| f.to_string());
    Run {
        name,
        result,
        elapsed: started.elapsed(),
    }
}

fn trace_bytes(out: &RunOutput) -> Vec<u8> {
    let mut buf = Vec::new();
    write_trace(&mut buf, &out.rows, false).expect("writing to memory");
    buf
}

fn tracking(s: &Summary, xy: f64, z: f64, angles: Option<f64>) -> (bool, String) {
    let e = &s.errors.max_abs;
    let mut ok = e[pose::X] <= xy && e[pose::Y] <= xy && e[pose::Z] <= z;
    let mut detail = format!(
        "max |x| {:.4} m, |y| {:.4} m (<= {xy}), |z| {:.4} m (<= {z})",
        e[pose::X],
        e[pose::Y],
        e[pose::Z]
    );
    if let Some(a) = angles {
        ok &= e[pose::ROLL] <= a && e[pose::PITCH] <= a && e[pose::YAW] <= a;
        detail += &format!(
            ", roll {:.4} pitch {:.4} yaw {:.4} rad (<= {a:.4})",
            e[pose::ROLL],
            e[pose::PITCH],
            e[pose::YAW]
        );
    }
    detail += &format!(
        "; clamped reference |x| {:.4} |y| {:.4}",
        s.safe_errors.max_abs[pose::X],
        s.safe_errors.max_abs[pose::Y]
    );
    (ok, detail)
}

fn slow_tour(r: &Run) -> Outcome {
    match &r.result {
        Ok(out) => {
            let (ok, detail) = tracking(&out.summary, 0.04, 0.08, Some(0.2 * std::f64::consts::PI));
            let secs = r.elapsed.as_secs_f64();
            Outcome::new(
                ok && secs <= 60.0,
                format!("{detail}; {secs:.2} s wall clock (<= 60)"),
            )
        }
        Err(e) => Outcome::new(false, format!("run faulted: {e}")),
    }
}

fn fast_tour(r: &Run) -> Outcome {
    match &r.result {
        Ok(out) => {
            let (ok, detail) = tracking(&out.summary, 0.10, 0.20, None);
            let n = out.summary.min_contacts;
            Outcome::new(
                ok && n >= 2,
                format!("{detail}; no fault; min N {n} (>= 2)"),
            )
        }
        Err(e) => Outcome::new(false, format!("run faulted: {e}")),
    }
}

fn random_matrix<const R: usize, const C: usize>(rng: &mut ChaCha8Rng) -> Matrix<R, C> {
    Matrix::from_fn(|_, _| rng.gen_range(-1.0..1.0))
}

/// Product of random `6`x`r` and `r`x`12` factors.
fn random_rank_6x12(rng: &mut ChaCha8Rng, r: usize) -> Matrix<6, 12> {
    let mut b: Matrix<6, 6> = random_matrix(rng);
    let mut c: Matrix<6, 12> = random_matrix(rng);
    for k in r..6 {
        for i in 0..6 {
            b[(i, k)] = 0.0;
        }
        for j in 0..12 {
            c[(k, j)] = 0.0;
        }
    }
    b * c
}

fn random_stance(rng: &mut ChaCha8Rng) -> [Vec3; LEG_COUNT] {
    core::array::from_fn(|_| {
        Vec3::new(
            rng.gen_range(-0.4..0.4),
            rng.gen_range(-0.3..0.3),
            rng.gen_range(-0.4..-0.2),
        )
    })
}

fn random_contacts(rng: &mut ChaCha8Rng, n: usize) -> ContactFlags {
    let mut legs = [0usize, 1, 2, 3];
    for i in (1..LEG_COUNT).rev() {
        legs.swap(i, rng.gen_range(0..=i));
    }
    let mut sigma = [false; LEG_COUNT];
    for &leg in &legs[..n] {
        sigma[leg] = true;
    }
    ContactFlags::new(sigma)
}

fn decomposition_suite() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut recon, mut ortho, mut ldu_recon) = (0.0f64, 0.0f64, 0.0f64);
    let mut bad_counts = 0usize;
    let mut failures = 0usize;
    for r in 0..=6 {
        for k in 0..INSTANCES {
            // Constraint transposes for the ranks a stance can have, generic
            // low-rank products for the rest.
            let x = match RANK_BY_CONTACTS.iter().position(|&q| q == r) {
                Some(n) if k % 2 == 0 => {
                    let n = if r == 6 && k % 4 == 0 { 4 } else { n };
                    constraint_matrix(&random_contacts(&mut rng, n), &random_stance(&mut rng))
                        .0
                        .transpose()
                }
                _ => random_rank_6x12(&mut rng, r),
            };
            match ldq_decompose(&x, r) {
                Ok(f) => {
                    recon = recon.max((f.reconstruct() - x).max_abs());
                    ortho = ortho.max(f.orthonormality_error());
                    bad_counts += usize::from(f.iterations != pivot_iterations(6, r));
                }
                Err(_) => failures += 1,
            }
            let s: Matrix<6, 6> =
                random_rank_6x12(&mut rng, r) * random_rank_6x12(&mut rng, 6).transpose();
            match ldu_decompose(&s, r) {
                Ok(f) => {
                    ldu_recon = ldu_recon.max((f.reconstruct() - s).max_abs());
                    bad_counts += usize::from(f.iterations != pivot_iterations(6, r));
                }
                Err(_) => failures += 1,
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    let ok = recon <= 1e-9
        && ortho <= 1e-9
        && ldu_recon <= 1e-9
        && bad_counts == 0
        && failures == 0
        && secs <= 5.0;
    Outcome::new(
        ok,
        format!(
            "{INSTANCES} instances per rank 0..=6: LDQ reconstruction {recon:.2e}, Q·Qᵀ − I {ortho:.2e}, \
             LDU reconstruction {ldu_recon:.2e} (<= 1e-9); iteration mismatches {bad_counts}, \
             failures {failures}; {secs:.2} s (<= 5)"
        ),
    )
}

/// Rank of `AᵀA` from its eigenvalues, relative to the largest.
fn gram_rank(a: &Matrix<12, 6>, tol: f64) -> usize {
    let m = DMatrix::from_fn(12, 6, |i, j| a[(i, j)]);
    let eig = SymmetricEigen::new(m.transpose() * &m).eigenvalues;
    let top = eig.iter().cloned().fold(0.0f64, f64::max);
    if top == 0.0 {
        return 0;
    }
    eig.iter().filter(|&&l| l > tol * top).count()
}

fn rank_table() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut found = [usize::MAX; LEG_COUNT + 1];
    let mut mismatches = 0usize;
    for n in 0..=LEG_COUNT {
        for _ in 0..INSTANCES {
            let contacts = random_contacts(&mut rng, n);
            let (a, table) = constraint_matrix(&contacts, &random_stance(&mut rng));
            let oracle = gram_rank(&a, 1e-8);
            if oracle != table {
                mismatches += 1;
            }
            found[n] = oracle;
        }
    }
    Outcome::new(
        mismatches == 0 && found == RANK_BY_CONTACTS,
        format!("oracle ranks for N = 0..=4: {found:?}, expected {RANK_BY_CONTACTS:?}; mismatches {mismatches} of {}", 5 * INSTANCES),
    )
}

fn swing_boundary(r: &Run) -> Outcome {
    match &r.result {
        Ok(out) => {
            let lifts = out
                .rows
                .windows(2)
                .map(|w| {
                    (0..LEG_COUNT)
                        .filter(|&l| w[0].sigma[l] && !w[1].sigma[l])
                        .count()
                })
                .sum::<usize>();
            let worst = out.summary.swing_boundary_max;
            Outcome::new(
                worst <= 1e-9 && lifts > 0,
                format!("worst boundary velocity/acceleration {worst:.2e} (<= 1e-9) over {lifts} lift-offs"),
            )
        }
        Err(e) => Outcome::new(false, format!("run faulted: {e}")),
    }
}

fn closed_form(e0: f64, kp: f64, kd: f64, t: f64) -> f64 {
    // Overdamped with the default gains: two real poles.
    let disc = (kd * kd - 4.0 * kp).sqrt();
    let (r1, r2) = ((-kd + disc) / 2.0, (-kd - disc) / 2.0);
    e0 * (r2 * (r1 * t).exp() - r1 * (r2 * t).exp()) / (r2 - r1)
}

fn feedback_linearization() -> Outcome {
    let params = RobotParams::go2();
    let (kp, kd, ts) = (params.body_kp, params.body_kd, params.sampling_time);
    let mut ctrl = Controller::new(params);
    let start = ctrl.plant.pose;
    let cmds = CommandSet {
        z: start[pose::Z] + 0.01,
        pitch: 0.02,
        ..Default::default()
    };
    let mut initial = [0.0; 6];
    let mut worst = 0.0f64;
    let ticks = (2.0 / ts).round() as usize;
    for k in 0..=ticks {
        let report = match ctrl.step(&cmds) {
            Ok(r) => r,
            Err(e) => return Outcome::new(false, format!("tick {k}: {e}")),
        };
        let e: [f64; 6] = core::array::from_fn(|i| report.refs.pose[i] - report.pose[i]);
        if k == 0 {
            initial = e;
        }
        let t = k as f64 * ts;
        for i in 0..6 {
            let expected = closed_form(initial[i], kp, kd, t);
            worst = worst.max((e[i] - expected).abs());
        }
    }
    let ok = worst <= 1e-3
        && (initial[pose::Z] - 0.01).abs() < 1e-12
        && (initial[pose::PITCH] - 0.02).abs() < 1e-12;
    Outcome::new(
        ok,
        format!("initial error z {:.3} m, pitch {:.3} rad; max deviation from the closed form over 2 s {worst:.2e} (<= 1e-3)", initial[pose::Z], initial[pose::PITCH]),
    )
}

fn stability_clamp(runs: &[Run]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in runs {
        match &r.result {
            Ok(out) => {
                let s = &out.summary;
                ok &= s.zmp_outside_ticks == 0 && s.zmp_round_trip_max <= 1e-9;
                parts.push(format!(
                    "{}: outside {} of {} ticks, round trip {:.2e}",
                    r.name, s.zmp_outside_ticks, s.ticks, s.zmp_round_trip_max
                ));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{}: faulted: {e}", r.name));
            }
        }
    }
    Outcome::new(ok, parts.join("; "))
}

fn determinism(runs: &[Run]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut per_n: [Option<usize>; LEG_COUNT + 1] = [None; LEG_COUNT + 1];
    for r in runs {
        let again = run(
            r.name,
            match r.name {
                "slow_tour" => SLOW,
                "fast_tour" => FAST,
                _ => EMPTY,
            },
        );
        match (&r.result, &again.result) {
            (Ok(a), Ok(b)) => {
                let same = trace_bytes(a) == trace_bytes(b);
                ok &= same;
                parts.push(format!(
                    "{}: traces {}",
                    r.name,
                    if same { "identical" } else { "DIFFER" }
                ));
                for NBucket {
                    contacts,
                    iterations_min,
                    iterations_max,
                    ..
                } in &a.summary.buckets
                {
                    let slot = &mut per_n[*contacts];
                    ok &= iterations_min == iterations_max
                        && slot.is_none_or(|v| v == *iterations_min);
                    *slot = Some(*iterations_min);
                }
            }
            (a, b) => {
                ok = false;
                let e = a
                    .as_ref()
                    .err()
                    .or(b.as_ref().err())
                    .cloned()
                    .unwrap_or_default();
                parts.push(format!("{}: faulted: {e}", r.name));
            }
        }
    }
    let two = per_n[2];
    let more = [per_n[3], per_n[4]]
        .iter()
        .all(|&c| matches!((c, two), (Some(c), Some(t)) if c > t));
    ok &= more;
    let counts: Vec<String> = per_n
        .iter()
        .enumerate()
        .filter_map(|(n, c)| c.map(|c| format!("N={n}: {c}")))
        .collect();
    parts.push(format!("iterations per tick {}", counts.join(", ")));
    Outcome::new(ok, parts.join("; "))
}

fn main() -> ExitCode {
    let runs = [
        run("slow_tour", SLOW),
        run("fast_tour", FAST),
        run("empty", EMPTY),
    ];
    let results = [
        ("slow-tour tracking", slow_tour(&runs[0])),
        ("fast-tour tracking", fast_tour(&runs[1])),
        ("decomposition suite", decomposition_suite()),
        ("rank table", rank_table()),
        ("swing boundary conditions", swing_boundary(&runs[0])),
        ("feedback-linearization oracle", feedback_linearization()),
        ("stability clamp", stability_clamp(&runs)),
        ("determinism", determinism(&runs)),
    ];
    let mut failed = 0;
    for (k, (name, o)) in results.iter().enumerate() {
        println!(
            "{} {} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", results.len());
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
