//! Acceptance gate: ten numbered criteria, one test and one printed
//! verdict line each.
//!
//! Every test ends by calling [`conclude`], which prints
//! `criterion NN [PASS|FAIL] ...` with the measured runtime and then
//! asserts, so `--nocapture` (or any failure) shows the full scoreboard.
//! A process-wide mutex serializes the criteria so the wall-clock budgets
//! are measured on an otherwise idle process.

use std::sync::Mutex;
use std::time::Instant;

use abgc::pipeline::{run_on_graph, ClusterParams};
use abgc_core::datagen::{planted_partition_abg, running_example_fixture};
use abgc_core::embed::{
    build_random_feature_map, compute_smoothed_features, EmbedConfig, FeatureMatrix,
};
use abgc_core::factorize::{run_onmf, FactorizeConfig};
use abgc_core::graph::BipartiteGraph;
use abgc_core::linalg::{row_l2_normalize, DenseMatrix, RandomSeed};
use abgc_core::metrics::{accuracy, ari, hungarian_assignment, nmi};
use abgc_core::oracle::{
    brute_force_best_partition, exact_features, exact_msa_matrix, lemma2_lhs, lemma2_rhs,
    lemma3_bound_check,
};
use abgc_core::rounding::generate_nci;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

static GATE: Mutex<()> = Mutex::new(());

fn conclude(num: usize, name: &str, budget: f64, start: Instant, pass: bool, detail: &str) {
    let secs = start.elapsed().as_secs_f64();
    let within = secs < budget;
    let verdict = if pass && within { "PASS" } else { "FAIL" };
    println!("criterion {num:02} [{verdict}] {name}: {detail} [{secs:.2}s of {budget:.0}s budget]");
    assert!(pass, "criterion {num:02} ({name}) failed: {detail}");
    assert!(
        within,
        "criterion {num:02} ({name}) blew its {budget:.0}s budget: {secs:.2}s"
    );
}

fn rng_for(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xACCE_0000 + tag)
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(rows, cols);
    for v in m.data_mut() {
        *v = rng.sample(StandardNormal);
    }
    m
}

/// Random unit rows clustered around one random unit direction, the regime
/// the estimator runs in after smoothing (moderate positive similarities).
fn clustered_unit_rows(rng: &mut ChaCha8Rng, n: usize, d: usize, spread: f64) -> DenseMatrix {
    let mut center = vec![0.0; d];
    let mut norm = 0.0;
    for c in center.iter_mut() {
        *c = rng.sample::<f64, _>(StandardNormal);
        norm += *c * *c;
    }
    let norm = norm.sqrt();
    let mut m = DenseMatrix::zeros(n, d);
    for i in 0..n {
        for (j, &c) in center.iter().enumerate() {
            let noise: f64 = rng.sample(StandardNormal);
            m.set(i, j, c / norm + spread * noise);
        }
    }
    row_l2_normalize(&m)
}

fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut map: Vec<Option<usize>> = Vec::new();
    let mut out = Vec::with_capacity(labels.len());
    for &l in labels {
        if l >= map.len() {
            map.resize(l + 1, None);
        }
        let next = map.iter().flatten().count();
        let id = *map[l].get_or_insert(next);
        out.push(id);
    }
    out
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values[values.len() / 2]
}

/// Random bipartite graph; `floor` forces at least one edge per U node so
/// every U degree is positive.
fn random_graph(
    rng: &mut ChaCha8Rng,
    n_u: usize,
    n_v: usize,
    attr_dim: usize,
    density: f64,
    floor: bool,
) -> (BipartiteGraph, Vec<f64>) {
    let mut edges = Vec::new();
    for u in 0..n_u {
        if floor {
            edges.push((u, rng.gen_range(0..n_v), rng.gen_range(0.5..2.0)));
        }
        for v in 0..n_v {
            if rng.gen::<f64>() < density {
                edges.push((u, v, rng.gen_range(0.2..2.0)));
            }
        }
    }
    let mut degrees = vec![0.0; n_u];
    for &(u, _, w) in &edges {
        degrees[u] += w;
    }
    let attrs = gaussian_matrix(rng, n_u, attr_dim);
    let g = BipartiteGraph::new(n_u, n_v, edges, attrs, None).expect("valid random graph");
    (g, degrees)
}

#[test]
fn criterion_01_golden_fixture() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let fx = running_example_fixture();

    let computed = exact_msa_matrix(&fx.zhat);
    let max_err = computed.max_abs_diff(&fx.s);

    let labels = brute_force_best_partition(&fx.s, 3);
    let recovered = canonical(&labels) == canonical(&fx.partition);

    let pass = max_err <= 0.003 && recovered;
    conclude(
        1,
        "golden fixture",
        1.0,
        start,
        pass,
        &format!("max |S - S_published| = {max_err:.5}, partition recovered = {recovered}"),
    );
}

#[test]
fn criterion_02_theorem1_estimator_band() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let n = 10;
    let trials = 1000;
    let mut worst_margin = f64::NEG_INFINITY;
    let mut pass = true;

    for (di, &d) in [16usize, 64].iter().enumerate() {
        let c = 17.0 / (16.0 * (d * d) as f64) + 1.0 / (4.0 * d as f64);
        for set in 0..20u64 {
            let mut rng = rng_for(200 + 100 * di as u64 + set);
            let zhat = clustered_unit_rows(&mut rng, n, d, 0.15);
            let feats = FeatureMatrix::from_rows(zhat);
            let s = exact_msa_matrix(feats.zhat());

            let pairs = n * (n - 1) / 2;
            let mut sum = vec![0.0; pairs];
            let mut sumsq = vec![0.0; pairs];
            for t in 0..trials as u64 {
                let seed = RandomSeed::new(((d as u64) << 40) ^ (set << 20) ^ t);
                let r = build_random_feature_map(&feats, seed);
                let r = r.matrix();
                let mut p = 0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        let mut est = 0.0;
                        for (a, b) in r.row(i).iter().zip(r.row(j)) {
                            est += a * b;
                        }
                        sum[p] += est;
                        sumsq[p] += est * est;
                        p += 1;
                    }
                }
            }

            let mut p = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    let mean = sum[p] / trials as f64;
                    let var = (sumsq[p] - sum[p] * sum[p] / trials as f64) / (trials as f64 - 1.0);
                    let se = (var.max(0.0) / trials as f64).sqrt();
                    let sij = s.get(i, j);
                    let lo = (1.0 - c) * sij - 3.0 * se;
                    let hi = (1.0 + c) * sij + 3.0 * se;
                    // Positive margin = distance outside the widened band.
                    let margin = (lo - mean).max(mean - hi);
                    if margin > worst_margin {
                        worst_margin = margin;
                    }
                    if margin > 0.0 {
                        pass = false;
                    }
                    p += 1;
                }
            }
        }
    }

    conclude(
        2,
        "theorem 1 estimator band",
        30.0,
        start,
        pass,
        &format!(
            "20 sets x d in {{16,64}} x {trials} seeds, worst band excursion {worst_margin:.2e}"
        ),
    );
}

#[test]
fn criterion_03_lemma1_series_equivalence() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut worst_ratio = 0.0f64;
    let mut pass = true;

    for t in 0..50u64 {
        let mut rng = rng_for(300 + t);
        let n_u = rng.gen_range(5..=100);
        let n_v = rng.gen_range(5..=80);
        let attr_dim = rng.gen_range(1..=20);
        let (g, _) = random_graph(&mut rng, n_u, n_v, attr_dim, 0.15, false);
        let alpha = rng.gen_range(0.1..=0.9);
        let gamma = rng.gen_range(2..=10);

        let l = g.build_normalized_adjacency();
        let cfg = EmbedConfig {
            alpha,
            gamma,
            reduced_dim: None,
            seed: RandomSeed::new(0),
        };
        let feats = compute_smoothed_features(&l, g.attrs_u(), &cfg).expect("smoothing succeeds");
        let exact = exact_features(&l.to_dense(), g.attrs_u(), alpha, 200);

        let mut diff = feats.raw().clone();
        diff.add_scaled(&exact, -1.0);
        let err = diff.frobenius_norm();
        let bound = alpha.powi(gamma as i32 + 1) / (1.0 - alpha) * g.attrs_u().frobenius_norm();
        let ratio = if bound > 0.0 {
            err / bound
        } else {
            f64::INFINITY
        };
        if ratio > worst_ratio {
            worst_ratio = ratio;
        }
        if err > bound {
            pass = false;
        }
    }

    conclude(
        3,
        "lemma 1 truncation bound",
        10.0,
        start,
        pass,
        &format!("50 graphs, worst error/bound ratio {worst_ratio:.3}"),
    );
}

#[test]
fn criterion_04_lemma3_reduction_bound() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut pass = true;

    for t in 0..50u64 {
        let mut rng = rng_for(400 + t);
        let n_u = rng.gen_range(5..=100);
        let n_v = rng.gen_range(5..=60);
        let d_u = rng.gen_range(5..=60);
        let d = [4, 8, 16][(t % 3) as usize];
        let alpha = rng.gen_range(0.1..=0.85);
        let (g, degrees) = random_graph(&mut rng, n_u, n_v, d_u, 0.1, true);

        let l_dense = g.build_normalized_adjacency().to_dense();
        let ratio = lemma3_bound_check(g.attrs_u(), &l_dense, &degrees, alpha, d);
        if ratio > worst {
            worst = ratio;
        }
        if ratio > 1.0 + 1e-6 {
            pass = false;
        }
    }

    conclude(
        4,
        "lemma 3 gram error bound",
        20.0,
        start,
        pass,
        &format!("50 instances, worst error/bound ratio {worst:.6}"),
    );
}

#[test]
fn criterion_05_onmf_loss_monotonicity() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut violating_runs = 0usize;
    let mut worst_ratio = 1.0f64;

    for t in 0..100u64 {
        let mut rng = rng_for(500 + t);
        let n = rng.gen_range(20..=200);
        let d = rng.gen_range(4..=32);
        let k = rng.gen_range(2..=6).min(n);
        let zhat = clustered_unit_rows(&mut rng, n, d, 0.8);
        let r = build_random_feature_map(&FeatureMatrix::from_rows(zhat), RandomSeed::new(t));

        let cfg = FactorizeConfig::new(k, 30, RandomSeed::new(5000 + t));
        let fp = run_onmf(&r, &cfg).expect("factorization succeeds");
        let mut violated = false;
        for w in fp.loss_history.windows(2) {
            if w[1] > w[0] * (1.0 + 1e-8) {
                violated = true;
                let ratio = w[1] / w[0];
                if ratio > worst_ratio {
                    worst_ratio = ratio;
                }
            }
        }
        if violated {
            violating_runs += 1;
        }
    }

    let pass = violating_runs == 0;
    conclude(
        5,
        "onmf loss monotonicity",
        30.0,
        start,
        pass,
        &format!(
            "{violating_runs}/100 runs violate loss_(t+1) <= loss_t*(1+1e-8), worst step ratio {worst_ratio:.4}"
        ),
    );
}

#[test]
fn criterion_06_nci_validity() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut pass = true;
    let mut checked_rows = 0usize;

    for t in 0..100u64 {
        let mut rng = rng_for(600 + t);
        let n = rng.gen_range(5..=200);
        let k = rng.gen_range(2..=8).min(n);
        let mut upsilon = gaussian_matrix(&mut rng, n, k);
        // A third of the inputs are the nonnegative near-indicator shape the
        // pipeline produces; the rest stay raw Gaussian.
        if t.is_multiple_of(3) {
            for v in upsilon.data_mut() {
                *v = v.abs();
            }
        }

        let y = generate_nci(&upsilon, 20);
        let m = y.y();
        let mut counts = vec![0usize; k];
        for i in 0..n {
            let nz: Vec<usize> = (0..k).filter(|&j| m.get(i, j) != 0.0).collect();
            if nz.len() != 1 {
                pass = false;
                continue;
            }
            counts[nz[0]] += 1;
        }
        for (j, &count) in counts.iter().enumerate() {
            let mut norm_sq = 0.0;
            for i in 0..n {
                let v = m.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    pass = false;
                }
                norm_sq += v * v;
            }
            if count == 0 {
                if norm_sq != 0.0 {
                    pass = false;
                }
            } else if (norm_sq - 1.0).abs() > 1e-9 {
                pass = false;
            }
        }
        checked_rows += n;
    }

    conclude(
        6,
        "nci validity",
        5.0,
        start,
        pass,
        &format!("100 random inputs, {checked_rows} rows checked"),
    );
}

#[test]
fn criterion_07_lemma2_trace_identity() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut worst_rel = 0.0f64;

    for t in 0..50u64 {
        let mut rng = rng_for(700 + t);
        let n = rng.gen_range(5..=100);
        let m = rng.gen_range(2..=32);
        let k = rng.gen_range(2..=6).min(n);
        let r = gaussian_matrix(&mut rng, n, m);
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let y = abgc_core::rounding::NciMatrix::from_labels(&labels, k);

        let lhs = lemma2_lhs(&r, y.y());
        let rhs = lemma2_rhs(&r, y.y());
        let rel = (lhs - rhs).abs() / rhs.abs().max(1e-12);
        if rel > worst_rel {
            worst_rel = rel;
        }
    }

    let pass = worst_rel <= 1e-8;
    conclude(
        7,
        "lemma 2 trace identity",
        5.0,
        start,
        pass,
        &format!("50 pairs, worst relative error {worst_rel:.2e}"),
    );
}

#[test]
fn criterion_08_planted_recovery() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut accs = Vec::new();
    let mut nmis = Vec::new();
    let mut aris = Vec::new();

    for s in 0..5u64 {
        let (g, truth) =
            planted_partition_abg(3, 600, 600, 0.3, 0.01, 32, 0.1, RandomSeed::new(7000 + s))
                .expect("planted graph generates");
        let params = ClusterParams {
            k: 3,
            seed: 42 + s,
            ..ClusterParams::default()
        };
        let (labels, _timings) = run_on_graph(&g, &params).expect("pipeline succeeds");
        accs.push(accuracy(&truth, &labels).unwrap());
        nmis.push(nmi(&truth, &labels).unwrap());
        aris.push(ari(&truth, &labels).unwrap());
    }

    let med_acc = median(&mut accs);
    let med_nmi = median(&mut nmis);
    let med_ari = median(&mut aris);
    let pass = med_acc >= 0.95 && med_nmi >= 0.85 && med_ari >= 0.85;
    conclude(
        8,
        "planted recovery",
        10.0,
        start,
        pass,
        &format!("median over 5 seeds: acc {med_acc:.4}, nmi {med_nmi:.4}, ari {med_ari:.4}"),
    );
}

#[test]
fn criterion_09_metrics_correctness() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();

    let truth = [0usize, 0, 1, 1];
    let pred = [0usize, 1, 1, 1];
    let acc = accuracy(&truth, &pred).unwrap();
    let nmi_v = nmi(&truth, &pred).unwrap();
    let ari_v = ari(&truth, &pred).unwrap();
    if (acc - 0.75).abs() > 1e-12 || (nmi_v - 0.3455).abs() > 1e-3 || ari_v.abs() > 1e-12 {
        pass = false;
        detail = format!("worked example gave acc {acc}, nmi {nmi_v}, ari {ari_v}; ");
    }

    // Permutation invariance under independent relabelings of both sides.
    for t in 0..20u64 {
        let mut rng = rng_for(900 + t);
        let n = rng.gen_range(10..=60);
        let k = rng.gen_range(2..=5);
        let a: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let b: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let mut perm_a: Vec<usize> = (0..k).collect();
        let mut perm_b: Vec<usize> = (0..k).collect();
        perm_a.shuffle(&mut rng);
        perm_b.shuffle(&mut rng);
        let a2: Vec<usize> = a.iter().map(|&l| perm_a[l]).collect();
        let b2: Vec<usize> = b.iter().map(|&l| perm_b[l]).collect();
        for (f, name) in [
            (accuracy as fn(&[usize], &[usize]) -> _, "acc"),
            (nmi, "nmi"),
            (ari, "ari"),
        ] {
            let before = f(&a, &b).unwrap();
            let after = f(&a2, &b2).unwrap();
            if (before - after).abs() > 1e-12 {
                pass = false;
                detail.push_str(&format!("{name} moved under relabeling; "));
            }
        }
    }

    // Hungarian assignment against exhaustive search on 5x5 costs.
    let mut hungarian_mismatches = 0usize;
    for t in 0..200u64 {
        let mut rng = rng_for(950 + t);
        let mut cost = DenseMatrix::zeros(5, 5);
        for v in cost.data_mut() {
            *v = rng.gen::<f64>();
        }
        let assign = hungarian_assignment(&cost);
        let got: f64 = assign
            .iter()
            .enumerate()
            .map(|(i, &j)| cost.get(i, j))
            .sum();

        let mut best = f64::INFINITY;
        let mut perm = [0usize, 1, 2, 3, 4];
        heap_permutations(&mut perm, 5, &mut |p| {
            let total: f64 = p.iter().enumerate().map(|(i, &j)| cost.get(i, j)).sum();
            if total < best {
                best = total;
            }
        });
        if (got - best).abs() > 1e-9 {
            hungarian_mismatches += 1;
        }
    }
    if hungarian_mismatches > 0 {
        pass = false;
        detail.push_str(&format!(
            "{hungarian_mismatches}/200 hungarian mismatches; "
        ));
    }

    if detail.is_empty() {
        detail = "worked example, 20 relabelings, 200 assignment instances all agree".into();
    }
    conclude(9, "metrics correctness", 5.0, start, pass, &detail);
}

fn heap_permutations(perm: &mut [usize; 5], k: usize, visit: &mut impl FnMut(&[usize; 5])) {
    if k == 1 {
        visit(perm);
        return;
    }
    for i in 0..k {
        heap_permutations(perm, k - 1, visit);
        if k.is_multiple_of(2) {
            perm.swap(i, k - 1);
        } else {
            perm.swap(0, k - 1);
        }
    }
}

#[test]
fn criterion_10_linear_scaling() {
    let _gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();

    // n_v, p_in, and p_out are fixed, so going from 5k to 10k target nodes
    // exactly doubles the expected edge count.
    let graphs: Vec<_> = [5000usize, 10000]
        .iter()
        .enumerate()
        .map(|(i, &n_u)| {
            let (g, _) = planted_partition_abg(
                3,
                n_u,
                2000,
                0.2,
                0.01,
                16,
                0.1,
                RandomSeed::new(8000 + i as u64),
            )
            .expect("planted graph generates");
            g
        })
        .collect();
    let params = ClusterParams {
        k: 3,
        ..ClusterParams::default()
    };

    // One untimed warm-up per size, then the three timed runs, alternating
    // sizes so a transient load spike inflates both medians instead of one.
    for g in &graphs {
        run_on_graph(g, &params).expect("pipeline succeeds");
    }
    let mut totals = [Vec::new(), Vec::new()];
    for _ in 0..3 {
        for (i, g) in graphs.iter().enumerate() {
            let (_, timings) = run_on_graph(g, &params).expect("pipeline succeeds");
            totals[i].push(timings.total());
        }
    }

    let med_small = median(&mut totals[0]);
    let med_large = median(&mut totals[1]);
    let ratio = med_large / med_small;
    let pass = ratio <= 2.5;
    conclude(
        10,
        "linear-time scaling",
        120.0,
        start,
        pass,
        &format!(
            "|E| {} -> {}, median wall time {:.4}s -> {:.4}s, ratio {ratio:.2}",
            graphs[0].edges().len(),
            graphs[1].edges().len(),
            med_small,
            med_large
        ),
    );
}
