mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chromres::adversary::{
    global_resilience_oracle, plant_clique, random_budget, tightness_clique_size,
};
use chromres::analytics::AnalyticProfile;
use chromres::coloring::{
    chromatic_exact, chromatic_exact_coloring, degeneracy_color, dsatur, strip_color,
    verify_coloring, Coloring, StripKnobs,
};
use chromres::graph::{EdgeSet, Graph};
use chromres::iset::{
    enumerate_isets, max_independent_set, sparse_iset, turan_extract, DEFAULT_ENUMERATION_LIMIT,
};
use chromres::lab::{
    concentration_sample, density_audit, run_experiment, AuditMode, ExperimentConfig, Strategy,
};

use common::{brute_alpha, brute_chi, gnp};

/// Criteria whose failure is recorded rather than fatal.
const KNOWN_FAILURES: &[usize] = &[4, 9];

type Check = Result<String, String>;
type Criterion = (usize, &'static str, fn() -> Check, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn proper(g: &Graph, c: &Coloring) -> Result<(), String> {
    ensure(verify_coloring(g, c).unwrap_or(false), || {
        format!("improper coloring on n = {}", g.n())
    })
}

fn c1_identities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut done = 0;
    let mut worst = 0f64;
    while done < 50 {
        let n = rng.gen_range(2..=2000usize);
        let p = rng.gen_range(0.05..0.95);
        let theta = if rng.gen_bool(0.5) {
            1.0
        } else {
            rng.gen_range(1.0..1e6)
        };
        let prof = AnalyticProfile::new(n, p, theta).map_err(|e| e.to_string())?;
        let (Some(k0), Some(counts)) = (prof.k0, prof.counts) else {
            continue;
        };
        let exact = (k0 * (k0 - 1)) as f64 / (n * (n - 1)) as f64;
        let computed = (counts.ln_mu0 - counts.ln_mu).exp();
        let rel = (computed / exact - 1.0).abs();
        worst = worst.max(rel);
        ensure(rel <= 1e-12, || {
            format!("n={n} p={p} k0={k0}: relative error {rel:e}")
        })?;
        ensure(counts.ln_mu >= theta.ln() - 1e-9, || {
            format!("mu < theta at n={n}")
        })?;
        done += 1;
    }
    Ok(format!("50 profiles, worst relative error {worst:.2e}"))
}

fn c2_turan() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..500u64 {
        let n = rng.gen_range(1..=60usize);
        let p = if i % 2 == 0 { 0.2 } else { 0.5 };
        let g = gnp(n, p, i);
        let t = turan_extract(&g);
        let e = g.edge_count();
        let bound = (n * n).div_ceil(2 * e + n);
        let alpha = max_independent_set(&g).map_err(|e| e.to_string())?;
        ensure(g.is_independent(&t) && g.is_independent(&alpha), || {
            format!("dependent set at n={n} seed={i}")
        })?;
        ensure(t.len() >= bound && t.len() <= alpha.len(), || {
            format!(
                "n={n} seed={i}: turan {} bound {bound} alpha {}",
                t.len(),
                alpha.len()
            )
        })?;
        if n <= 18 {
            ensure(alpha.len() == brute_alpha(&g), || {
                format!("alpha mismatch n={n} seed={i}")
            })?;
        }
    }
    Ok("500 graphs, 0 failures".into())
}

fn small_suite() -> Vec<Graph> {
    let mut gs = vec![
        Graph::cycle(5),
        Graph::complete(3),
        Graph::empty(4),
        Graph::empty(7),
        Graph::cycle(6),
        Graph::cycle(7),
        Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap(),
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap(),
        Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap(),
        Graph::from_edges(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v)))).unwrap(),
        Graph::from_edges(
            6,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (5, 0),
                (5, 1),
                (5, 2),
                (5, 3),
                (5, 4),
            ],
        )
        .unwrap(),
    ];
    for s in 0..6u64 {
        gs.push(gnp(5 + s as usize % 3, 0.5, 100 + s));
    }
    gs
}

/// Edge sets produced by every strategy on `g`.
fn strategy_outputs(g: &Graph, cap: usize, seed: u64) -> Vec<EdgeSet> {
    let n = g.n();
    let mut out = Vec::new();
    let t = (cap + 1).min(n);
    let first: Vec<usize> = (0..t).collect();
    let last: Vec<usize> = (n - t..n).collect();
    out.push(plant_clique(g, &first).unwrap());
    out.push(plant_clique(g, &last).unwrap());
    for m in 1..=g.non_edge_count().min(6) {
        for s in 0..3 {
            out.push(random_budget(g, m, seed * 31 + s).unwrap());
        }
    }
    for delta in 1..=3.min(n - 1) {
        let (e, _) = Strategy::BoundedDegree { delta }
            .apply(g, 0.5, seed)
            .unwrap();
        out.push(e);
    }
    out
}

fn c3_oracle() -> Check {
    let mut graphs = small_suite();
    for s in 0..100u64 {
        graphs.push(gnp(8, if s % 2 == 0 { 0.3 } else { 0.5 }, 1000 + s));
    }
    let mut checked = 0;
    for (i, g) in graphs.iter().enumerate() {
        let cap = brute_chi(g);
        if cap >= g.n() {
            continue;
        }
        for e in strategy_outputs(g, cap, i as u64) {
            if e.is_empty() || brute_chi(&g.union(&e).unwrap()) <= cap {
                continue;
            }
            let m = e.len();
            let w = global_resilience_oracle(g, cap, m)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| {
                    format!("graph {i}: strategy broke cap {cap} with {m} edges, oracle found none")
                })?;
            ensure(w.value <= m && w.edges.len() == w.value, || {
                format!("graph {i}: oracle {} > strategy {m}", w.value)
            })?;
            ensure(brute_chi(&g.union(&w.edges).unwrap()) > cap, || {
                format!("graph {i}: witness does not break the cap")
            })?;
            checked += 1;
        }
    }

    let c5 = Graph::cycle(5);
    let non_edges: Vec<(usize, usize)> = c5.non_edges().collect();
    let brute = (0u32..1 << non_edges.len())
        .filter(|&mask| {
            let e = EdgeSet::from_pairs(
                (0..non_edges.len())
                    .filter(|&j| mask >> j & 1 == 1)
                    .map(|j| non_edges[j]),
            )
            .unwrap();
            brute_chi(&c5.union(&e).unwrap()) > 3
        })
        .map(u32::count_ones)
        .min()
        .unwrap() as usize;
    let oracle = global_resilience_oracle(&c5, 3, 10)
        .map_err(|e| e.to_string())?
        .map(|w| w.value);
    ensure(brute == 3 && oracle == Some(3), || {
        format!("C5: brute force {brute}, oracle {oracle:?}")
    })?;
    Ok(format!(
        "{} graphs, {checked} breaking strategy outputs dominated; C5 = 3",
        graphs.len()
    ))
}

fn c4_tightness() -> Check {
    let (n, p) = (150, 0.5);
    let t = (n as f64 / (n as f64 * p).log2()).ceil() as usize;
    ensure(tightness_clique_size(n, p) == Some(t), || {
        "clique size mismatch".into()
    })?;
    let lo = 0.15 * (t * t) as f64;
    let hi = 0.30 * (t * t) as f64;
    let target: Vec<usize> = (0..t).collect();
    let (mut good, mut in_band, mut union_ok, mut base_ok) = (0, 0, 0, 0);
    let mut added_range = (usize::MAX, 0);
    let mut base_range = (usize::MAX, 0);
    for seed in 0..20 {
        let g = gnp(n, p, seed);
        let e = plant_clique(&g, &target).map_err(|e| e.to_string())?;
        let union = g.union(&e).map_err(|e| e.to_string())?;
        let (cb, cu) = (dsatur(&g), dsatur(&union));
        proper(&g, &cb)?;
        proper(&union, &cu)?;
        let m = e.len();
        added_range = (added_range.0.min(m), added_range.1.max(m));
        base_range = (
            base_range.0.min(cb.num_colors),
            base_range.1.max(cb.num_colors),
        );
        let flags = [
            (lo..=hi).contains(&(m as f64)),
            cu.num_colors >= t,
            cb.num_colors < t,
        ];
        in_band += usize::from(flags[0]);
        union_ok += usize::from(flags[1]);
        base_ok += usize::from(flags[2]);
        good += usize::from(flags.iter().all(|&f| f));
    }
    let detail = format!(
        "t = {t}, {good}/20 seeds meet all conditions (added edges {}..{} in band {in_band}/20, \
         dsatur(union) >= t {union_ok}/20, dsatur(base) < t {base_ok}/20 with dsatur(base) {}..{})",
        added_range.0, added_range.1, base_range.0, base_range.1
    );
    ensure(good >= 18, || detail.clone())?;
    Ok(detail)
}

fn c5_averaging() -> Check {
    let (mut below_mean, mut is_min) = (0, 0);
    for trial in 0..50u64 {
        let n = 24 + (trial % 9) as usize;
        let g = gnp(n, 0.5, 500 + trial);
        let alpha = max_independent_set(&g).map_err(|e| e.to_string())?.len();
        let family =
            enumerate_isets(&g, alpha - 1, DEFAULT_ENUMERATION_LIMIT).map_err(|e| e.to_string())?;
        ensure(family.verify(&g), || {
            format!("trial {trial}: family fails verification")
        })?;
        let e = random_budget(&g, 20, trial).map_err(|e| e.to_string())?;
        let choice = sparse_iset(&family, &e).map_err(|e| e.to_string())?;
        let counts: Vec<usize> = family
            .sets
            .iter()
            .map(|s| {
                let mut c = 0;
                for (i, &u) in s.iter().enumerate() {
                    for &v in &s[i + 1..] {
                        c += usize::from(e.contains(u, v));
                    }
                }
                c
            })
            .collect();
        let mean = counts.iter().sum::<usize>() as f64 / counts.len() as f64;
        if choice.planted_inside as f64 <= mean + 1e-12 {
            below_mean += 1;
        }
        if choice.planted_inside == *counts.iter().min().unwrap()
            && counts[choice.index] == choice.planted_inside
        {
            is_min += 1;
        }
    }
    ensure(below_mean == 50 && is_min == 50, || {
        format!("below mean {below_mean}/50, minimum {is_min}/50")
    })?;
    Ok("50/50 at or below the family mean, 50/50 equal to the scanned minimum".into())
}

fn c6_audit() -> Check {
    let g = gnp(20, 0.5, 6);
    let runs: Vec<String> = [1, 1, 4]
        .iter()
        .map(|&w| {
            density_audit(&g, 0.5, 1.0, AuditMode::Exhaustive, w)
                .map(|r| serde_json::to_string(&r).unwrap())
                .map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    ensure(runs[0] == runs[1] && runs[1] == runs[2], || {
        "audit reports differ".into()
    })?;

    let clique = [1, 4, 8, 11, 15, 19];
    let mut edges: Vec<(usize, usize)> = gnp(20, 0.1, 6).edges().collect();
    for (i, &u) in clique.iter().enumerate() {
        for &v in &clique[i + 1..] {
            edges.push((u, v));
        }
    }
    let planted = Graph::from_edges(20, edges).map_err(|e| e.to_string())?;
    let a =
        density_audit(&planted, 0.1, 4.0, AuditMode::Exhaustive, 1).map_err(|e| e.to_string())?;
    let b =
        density_audit(&planted, 0.1, 4.0, AuditMode::Exhaustive, 3).map_err(|e| e.to_string())?;
    ensure(a == b && a.recheck(&planted), || {
        "planted audit not reproducible".into()
    })?;
    let hit = a.violations.iter().any(|v| v.subset == clique);
    ensure(hit, || "planted K6 not reported".into())?;
    Ok(format!(
        "n=20 p=0.5 eps=1 identical over 3 runs; planted K6 at p=0.1 eps=4 flagged ({} violations)",
        a.violations.len()
    ))
}

fn c7_coloring() -> Check {
    let known = [
        ("C5", Graph::cycle(5), 3),
        ("K4", Graph::complete(4), 4),
        ("Petersen", Graph::petersen(), 3),
    ];
    for (name, g, chi) in &known {
        let c = chromatic_exact_coloring(g, 40).map_err(|e| e.to_string())?;
        proper(g, &c)?;
        ensure(c.num_colors == *chi, || {
            format!("{name}: got {}", c.num_colors)
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..200u64 {
        let n = rng.gen_range(1..=14usize);
        let g = gnp(n, rng.gen_range(0.1..0.9), 7000 + i);
        let c = chromatic_exact_coloring(&g, 40).map_err(|e| e.to_string())?;
        proper(&g, &c)?;
        let d = dsatur(&g);
        proper(&g, &d)?;
        let (dg, degen) = degeneracy_color(&g);
        proper(&g, &dg)?;
        let alpha = brute_alpha(&g);
        let chi = c.num_colors;
        ensure(n.div_ceil(alpha) <= chi && chi <= n - alpha + 1, || {
            format!(
                "instance {i}: chi {chi} outside [{}, {}]",
                n.div_ceil(alpha),
                n - alpha + 1
            )
        })?;
        ensure(
            chi == brute_chi(&g) && chi <= d.num_colors && chi <= degen + 1,
            || format!("instance {i}: chi {chi} inconsistent"),
        )?;
    }
    for i in 0..200u64 {
        let n = rng.gen_range(1..=10usize);
        let a = gnp(n, rng.gen_range(0.1..0.7), 9000 + i);
        let b = gnp(n, rng.gen_range(0.1..0.7), 19000 + i);
        let u = a.union_graph(&b).map_err(|e| e.to_string())?;
        let (ca, cb, cu) = (
            chromatic_exact(&a).map_err(|e| e.to_string())?,
            chromatic_exact(&b).map_err(|e| e.to_string())?,
            chromatic_exact(&u).map_err(|e| e.to_string())?,
        );
        ensure(cu <= ca * cb && cu >= ca.max(cb), || {
            format!("pair {i}: chi(union) {cu} vs {ca} * {cb}")
        })?;
    }
    Ok("known values match; 200 instances bracketed; 200 product pairs hold".into())
}

fn c8_strip() -> Check {
    let mut worst = 0f64;
    for &n in &[100usize, 200, 400] {
        let profile = AnalyticProfile::new(n, 0.5, 1.0).map_err(|e| e.to_string())?;
        for seed in 0..10 {
            let g = gnp(n, 0.5, 800 + seed);
            let (c, trace) =
                strip_color(&g, &EdgeSet::new(), 1.0, &profile, &StripKnobs::default())
                    .map_err(|e| e.to_string())?;
            proper(&g, &c)?;
            let d = dsatur(&g);
            proper(&g, &d)?;
            worst = worst.max(c.num_colors as f64 / d.num_colors as f64);
            ensure(c.num_colors <= 3 * d.num_colors, || {
                format!(
                    "n={n} seed={seed}: {} colors vs dsatur {}",
                    c.num_colors, d.num_colors
                )
            })?;
            let stripped: usize = trace.bucket_counts.iter().sum();
            ensure(
                stripped == trace.strips.len() && stripped + trace.residual_colors == c.num_colors,
                || {
                    format!(
                        "n={n} seed={seed}: accounting {stripped} + {} != {}",
                        trace.residual_colors, c.num_colors
                    )
                },
            )?;
        }
    }
    Ok(format!(
        "30 runs proper and exactly accounted, worst ratio to dsatur {worst:.2}"
    ))
}

fn c9_concentration() -> Check {
    let s = concentration_sample(40, 0.5, 1.0, 4.0, 100, 1, DEFAULT_ENUMERATION_LIMIT, 4)
        .map_err(|e| e.to_string())?;
    let mean = s.mean_ratio.unwrap();
    let low = s.frac_at_most_three_fifths.unwrap();
    let detail = format!(
        "k0 = {}, mu = {:.4}, cap = 4 mu0 = {:.4}, mean ratio {mean:.4}, frac <= 3/5 {low:.2}",
        s.k0, s.mu, s.cap
    );
    if (0.5..=1.5).contains(&mean) && low < 0.2 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c10_reproducibility() -> Check {
    let mut cfg = ExperimentConfig::parse(
        "n = 30, 40\np = 0.5\nseeds = 1..4\n\
         strategy = none; plant_clique; random:m=20; bounded_degree:delta=2\n",
    )
    .map_err(|e| e.to_string())?;
    let mut csvs = Vec::new();
    for workers in [1, 1, 4] {
        cfg.workers = workers;
        let table = run_experiment(&cfg).map_err(|e| e.to_string())?;
        ensure(table.error_count() == 0, || "rows failed".into())?;
        ensure(table.rows.iter().all(|r| r.row.all_proper), || {
            "improper row".into()
        })?;
        csvs.push(table.to_csv(false).map_err(|e| e.to_string())?);
    }
    ensure(csvs[0] == csvs[1] && csvs[1] == csvs[2], || {
        "CSV differs".into()
    })?;
    Ok(format!(
        "{} rows identical over 2 runs and worker counts 1 and 4",
        csvs[0].lines().count() - 1
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "exact identities", c1_identities, 1),
        (2, "turan soundness", c2_turan, 60),
        (3, "oracle cross-check", c3_oracle, 600),
        (4, "tightness demonstration", c4_tightness, 120),
        (5, "averaging lemma", c5_averaging, 300),
        (6, "density audit", c6_audit, 300),
        (7, "coloring correctness", c7_coloring, 600),
        (8, "stripping sanity", c8_strip, 600),
        (9, "concentration corridor", c9_concentration, 900),
        (10, "reproducibility", c10_reproducibility, 600),
    ];
    let mut unexpected = Vec::new();
    for (id, name, check, budget) in criteria {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if result.is_ok() && elapsed > Duration::from_secs(budget) {
            result = Err(format!("took {elapsed:.1?}, budget {budget} s"));
        }
        let (status, detail) = match &result {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!(
            "criterion {id:>2}: {status} {name}: {detail} [{:.2} s]",
            elapsed.as_secs_f64()
        );
        if result.is_err() && !KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
