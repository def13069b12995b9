//! Acceptance suite. Runs every criterion in order and prints one line per
//! criterion; exits non-zero when the outcome differs from `KNOWN_FAILURES`.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surfex::construction::{build_extremal_candidates, construct_ex, inner_graph};
use surfex::embedding::{min_euler_genus, trace_faces, verify_triangulation_facecounts, EmbeddingScheme, GenusLimits};
use surfex::extremal::{candidate_sweep, canonical_form, has_minor, rebalance_check, SweepConfig};
use surfex::graph::{self, DegreeSequence, Graph};
use surfex::spectral::{bounds, rho0, rho_complete_split, spectral_radius};
use surfex::w3max::{max_w3_degseq, W3Budget};
use surfex::walks::{check_w2_w3, walk_compare, walk_counts, zhang_rho, JoinPart, WalkComparison, WalkMode};

use common::{brute_walks, dense_rho, k2_join, path_with_chords, random_graph};

/// Criteria that fail after investigation. A criterion that starts passing
/// must be removed from this list, so it cannot go stale.
const KNOWN_FAILURES: &[usize] = &[6, 10];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn say(line: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
}

fn peak_rss_mib() -> Option<f64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: f64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb / 1024.0)
}

fn closed_form() -> Verdict {
    const TOL: f64 = 1e-8;
    const LIMIT: Duration = Duration::from_secs(1);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in [10, 100, 5000] {
        let g = graph::join(&graph::complete(2), &Graph::empty(n - 2));
        let got = spectral_radius(&g, 1e-12).unwrap().rho;
        let want = (1.0 + (8.0 * n as f64 - 15.0).sqrt()) / 2.0;
        assert_eq!(rho_complete_split(n).unwrap(), want);
        worst = worst.max((got - want).abs());
    }
    let t = start.elapsed();
    verdict(
        worst <= TOL && t < LIMIT,
        format!("max |err| {worst:.2e} (tol {TOL:e}), {:.3} s (limit 1 s)", t.as_secs_f64()),
    )
}

fn cycle_anchor() -> Verdict {
    const TOL: f64 = 1e-8;
    const ENTRY_TOL: f64 = 1e-6;
    let (mut worst, mut worst_entry): (f64, f64) = (0.0, 0.0);
    for n in [10, 1000] {
        let g = k2_join(&graph::cycle(n - 2).unwrap());
        let r = spectral_radius(&g, 1e-12).unwrap();
        // equitable partition: (ρ − 1)(ρ − 2) = 2(n − 2)
        let want = (3.0 + (8.0 * n as f64 - 15.0).sqrt()) / 2.0;
        assert!((rho0(n).unwrap() - want).abs() < 1e-12);
        worst = worst.max((r.rho - want).abs());
        let scale = r.perron[0];
        for &x in &r.perron[2..] {
            worst_entry = worst_entry.max((x / scale - 2.0 / (want - 2.0)).abs());
        }
    }
    verdict(
        worst <= TOL && worst_entry <= ENTRY_TOL,
        format!("max |rho - rho0| {worst:.2e} (tol {TOL:e}), max entry err {worst_entry:.2e} (tol {ENTRY_TOL:e})"),
    )
}

/// xᵀAx / xᵀx, a lower bound on ρ for every nonzero x.
fn rayleigh(g: &Graph, x: &[f64]) -> f64 {
    let mut num = surfex::numeric::Neumaier::default();
    for (u, v) in g.edges() {
        num.add_product(2.0 * x[u], x[v]);
    }
    num.value() / surfex::numeric::dot(x, x)
}

/// ρ of K₂ ∇ H from the characteristic equation of the join.
fn zhang_join(inner: &Graph) -> f64 {
    let parts = [JoinPart::independent(1), JoinPart::independent(1), JoinPart::with_graph(inner.order(), inner)];
    zhang_rho(&parts, 1e-15).unwrap().rho
}

fn sandwich() -> Verdict {
    let mut notes = Vec::new();
    let mut pass = true;
    let n = 13_000_000;
    let start = Instant::now();
    let t = construct_ex(n, 1).unwrap();
    let r = spectral_radius(&t.graph, 1e-13).unwrap();
    let rq = rayleigh(&t.graph, &r.perron);
    let solve = start.elapsed();
    let h = inner_graph(&t).unwrap();
    drop(t);
    let z = zhang_join(&h);
    drop(h);
    let b = bounds(n, 1).unwrap();
    let scaled = |x: f64| (x - b.rho0) * n as f64;
    pass &= [r.rho, rq, z].iter().all(|&x| b.lower < x && x < b.upper);
    notes.push(format!(
        "n=1.3e7: (rho-rho0)·n = {:.6} (eigensolver), {:.6} (Rayleigh), {:.6} (join equation), window (2, 2.05); {:.0} s, peak RSS {:.0} MiB",
        scaled(r.rho),
        scaled(rq),
        scaled(z),
        solve.as_secs_f64(),
        peak_rss_mib().unwrap_or(f64::NAN),
    ));
    let mut grid_ok = 0;
    for gamma in 1..=3 {
        for n in [10_000, 100_000, 1_000_000] {
            let t = construct_ex(n, gamma).unwrap();
            let r = spectral_radius(&t.graph, 1e-13).unwrap();
            let rq = rayleigh(&t.graph, &r.perron);
            let z = zhang_join(&inner_graph(&t).unwrap());
            let lower = bounds(n, gamma).unwrap().lower;
            if rq > lower && r.rho > lower && z > lower {
                grid_ok += 1;
            } else {
                pass = false;
                notes.push(format!("lower bound fails at n={n}, gamma={gamma}"));
            }
        }
    }
    notes.push(format!("lower bound holds at {grid_ok}/9 grid points"));
    verdict(pass, notes.join("; "))
}

fn zhang() -> Verdict {
    const TOL: f64 = 1e-8;
    const BIP_TOL: f64 = 1e-10;
    let (h, _) = graph::kr_pendant(5, 48).unwrap();
    let parts = [JoinPart::independent(1), JoinPart::independent(1), JoinPart::with_graph(48, &h)];
    let z = zhang_rho(&parts, 1e-13).unwrap().rho;
    let g = k2_join(&h);
    let s = spectral_radius(&g, 1e-13).unwrap().rho;
    let err = (z - s).abs();
    let mut bip: f64 = 0.0;
    for (a, b) in [(3, 7), (10, 10)] {
        let z = zhang_rho(&[JoinPart::independent(a), JoinPart::independent(b)], 1e-14).unwrap().rho;
        bip = bip.max((z - ((a * b) as f64).sqrt()).abs());
    }
    verdict(
        err <= TOL && bip <= BIP_TOL,
        format!("K2∇K5^48: |zhang - eigensolver| {err:.2e} (tol {TOL:e}); K_(a,b) max err {bip:.2e} (tol {BIP_TOL:e})"),
    )
}

fn walk_identities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2021);
    let mut ok = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.0..0.9);
        let g = random_graph(&mut rng, n, p);
        let d = g.degrees();
        let w2: u64 = d.iter().map(|&x| (x * x) as u64).sum();
        let w3: u64 = g.edges().map(|(u, v)| 2 * (d[u] * d[v]) as u64).sum();
        let prof = walk_counts(&g, 3, WalkMode::Exact).unwrap();
        let exact = prof.exact(2) == Some(&BigUint::from(w2)) && prof.exact(3) == Some(&BigUint::from(w3));
        let brute = brute_walks(&g, 2) == w2 && brute_walks(&g, 3) == w3;
        if exact && brute && check_w2_w3(&g) {
            ok += 1;
        }
    }
    verdict(ok == 100, format!("{ok}/100 graphs match exactly (library, closed form, brute-force enumerator)"))
}

fn w3_constants() -> Verdict {
    const LIMIT: Duration = Duration::from_secs(60);
    let n = 20;
    let cases: [(&str, &[usize], u64); 4] = [
        ("i", &[4, 4, 3, 3], 8 * n + 106),
        ("ii", &[5, 5, 4, 4, 4], 8 * n + 346),
        ("iii", &[5, 5, 5, 3, 3, 3], 8 * n + 340),
        ("iv", &[6, 4, 4, 4, 3, 3], 8 * n + 332),
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, head, want) in cases {
        let mut d = head.to_vec();
        d.extend(std::iter::repeat_n(2, n as usize - 2 - head.len() - 2));
        d.extend([1, 1]);
        let budget = W3Budget {
            time_limit: LIMIT,
            ..W3Budget::default()
        };
        let start = Instant::now();
        let r = max_w3_degseq(&DegreeSequence::new(d).unwrap(), &budget).unwrap();
        let t = start.elapsed();
        let mut forks = head.to_vec();
        forks.extend([1, 1]);
        let exact = common::w3_oracle::max_connected_w3(&forks, n as usize - 2 - forks.len()).unwrap();
        let ok = r.w3 == want && t <= LIMIT + Duration::from_secs(5);
        pass &= ok;
        notes.push(format!(
            "({name}) {} vs {want} {} in {:.1} s, exact max {exact}",
            r.w3,
            if ok { "ok" } else { "MISMATCH" },
            t.as_secs_f64()
        ));
    }
    verdict(pass, notes.join(", "))
}

fn genus() -> Verdict {
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, g, want) in [
        ("K4", graph::complete(4), 0),
        ("K5", graph::complete(5), 1),
        ("K3,3", graph::complete_bipartite(3, 3), 1),
    ] {
        let r = min_euler_genus(&g, false, &GenusLimits::default()).unwrap();
        pass &= r.exact && r.genus == want;
        notes.push(format!("{name}->{}", r.genus));
    }
    let k6 = trace_faces(&EmbeddingScheme::k6_projective()).unwrap();
    let k7 = trace_faces(&EmbeddingScheme::k7_torus()).unwrap();
    pass &= (k6.f, k6.genus, k6.orientable) == (10, 1, false);
    pass &= (k7.f, k7.genus, k7.orientable) == (14, 2, true);
    notes.push(format!("K6 f={} genus {} orientable {}", k6.f, k6.genus, k6.orientable));
    notes.push(format!("K7 f={} genus {} orientable {}", k7.f, k7.genus, k7.orientable));
    for gamma in 1..=2 {
        let (_, s) = build_extremal_candidates(20, gamma).unwrap();
        let t = trace_faces(&s).unwrap();
        let r = verify_triangulation_facecounts(&s, 0, 1).unwrap();
        pass &= t.genus == gamma && r.avoiding == 2 * gamma && r.all_hold();
        notes.push(format!("spliced n=20 genus {} avoiding {}", t.genus, r.avoiding));
    }
    verdict(pass, notes.join(", "))
}

fn construction() -> Verdict {
    let k6 = canonical_form(&construct_ex(6, 1).unwrap().graph).unwrap() == canonical_form(&graph::complete(6)).unwrap();
    let mut ok = 0;
    let mut total = 0;
    for gamma in 1..=2 {
        let target = graph::complete_bipartite(3, 2 * gamma + 3);
        for n in 14..=30 {
            total += 1;
            let t = construct_ex(n, gamma).unwrap();
            if t.graph.size() == 3 * (n - 2 + gamma) && t.verify().is_ok() && !has_minor(&t.graph, &target).unwrap() {
                ok += 1;
            }
        }
    }
    verdict(
        k6 && ok == total,
        format!("construct_ex(6,1) = K6: {k6}; {ok}/{total} grid points with e = 3(n-2+gamma), valid witness, no K_(3,2gamma+3) minor"),
    )
}

fn ordering() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(339);
    let mut agree = 0;
    for _ in 0..50 {
        let h1 = path_with_chords(&mut rng, 12, 3, 4);
        let h2 = path_with_chords(&mut rng, 12, 3, 4);
        let (r1, r2) = (dense_rho(&k2_join(&h1)), dense_rho(&k2_join(&h2)));
        let ok = match walk_compare(&h1, &h2, 2 * 12).unwrap() {
            WalkComparison::FirstDiffers { sign, .. } => (sign > 0) == (r1 > r2) && (r1 - r2).abs() > 1e-12,
            WalkComparison::Equal { conclusive } => conclusive && (r1 - r2).abs() < 1e-9,
        };
        agree += usize::from(ok);
    }
    let mut increases = 0;
    for (r, pairs) in [(4, [(8, 4), (9, 3), (10, 2)]), (5, [(10, 2), (9, 3), (8, 4)])] {
        for (a, b) in pairs {
            let out = rebalance_check(&graph::complete(r), 0, 1, a, b).unwrap();
            let dense_before = dense_rho(&k2_join(&graph::attach_paths(&graph::complete(r), 0, 1, a, b).unwrap()));
            let dense_after = dense_rho(&k2_join(&graph::attach_paths(&graph::complete(r), 0, 1, a - 1, b + 1).unwrap()));
            if out.increased && dense_after > dense_before {
                increases += 1;
            }
        }
    }
    verdict(
        agree == 50 && increases == 6,
        format!("{agree}/50 walk-profile predictions match the eigensolver; {increases}/6 rebalancing steps increase rho"),
    )
}

fn sweep() -> Verdict {
    let mut pass = true;
    let mut notes = Vec::new();
    for gamma in 1..=2 {
        let start = Instant::now();
        let rep = candidate_sweep(&SweepConfig::new(30, gamma, 7)).unwrap();
        let ok = rep.confirms_balanced_clique();
        pass &= ok;
        let best = rep.best_row().expect("some minor-free row reaches the threshold");
        let scope = match rep.config.scope {
            surfex::extremal::SweepScope::Exhaustive => "exhaustive".to_string(),
            surfex::extremal::SweepScope::Windowed { width } => {
                format!("windows of {width} plus {} climbs", rep.config.restarts)
            }
        };
        notes.push(format!(
            "gamma={gamma} ({scope}, {} chord sets, {:.0} s): argmax rho {:.6} {} balanced clique rho {:.6}, chords {:?}",
            rep.chord_sets_examined,
            start.elapsed().as_secs_f64(),
            best.rho,
            if ok { "is the" } else { "beats" },
            rep.threshold,
            best.chords,
        ));
    }
    verdict(pass, notes.join("; "))
}

fn main() {
    let criteria: [(usize, &str, fn() -> Verdict); 10] = [
        (1, "closed form for K2∇(n-2)K1", closed_form),
        (2, "K2∇C_(n-2) anchor", cycle_anchor),
        (3, "two-sided bound at n = 1.3e7", sandwich),
        (4, "Zhang solver", zhang),
        (5, "w2/w3 identities", walk_identities),
        (6, "w3 maxima at n = 20", w3_constants),
        (7, "genus", genus),
        (8, "construction", construction),
        (9, "walk-profile and rebalancing order", ordering),
        (10, "desk-scale argmax at n = 30", sweep),
    ];
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        let v = run();
        say(&format!("ACCEPTANCE {id:>2} {} | {name} | {}", if v.pass { "PASS" } else { "FAIL" }, v.detail));
        if !v.pass {
            failed.push(id);
        }
    }
    say(&format!("acceptance: {} passed, {} failed {:?}", 10 - failed.len(), failed.len(), failed));
    if failed != KNOWN_FAILURES {
        say(&format!("unexpected outcome: known failures are {KNOWN_FAILURES:?}"));
        std::process::exit(1);
    }
}
