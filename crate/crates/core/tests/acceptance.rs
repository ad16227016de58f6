//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Run with
//! `cargo test -p grafrec --test acceptance`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::num::NonZeroUsize;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use grafrec::ars::{ars_recommend, ArsQuery};
use grafrec::graph::{build_from_edges, AsymptoticClass, Digraph, NodeId, RepresentationKind};
use grafrec::hetnet::{build_pgrec, match_metapath, EdgeType, MetaPathPattern, RatingScale};
use grafrec::pagerank::{
    init_ranks, pagerank_run, pagerank_step, rank_positions, solve_linear, PageRankConfig,
    PowerIteration,
};
use grafrec::session::{validate_session_graph, KernelClass, KernelClassPartition, SessionGraph};

use common::*;

const CANONICAL: [(u64, u64); 9] = [
    (1, 2),
    (2, 5),
    (3, 1),
    (3, 2),
    (3, 4),
    (3, 5),
    (4, 3),
    (4, 5),
    (5, 4),
];

fn main() {
    let criteria: [(&str, fn()); 9] = [
        (
            "1 five-page worked example reproduced exactly",
            five_page_example,
        ),
        (
            "2 linear solve agrees with power iteration",
            cross_method_agreement,
        ),
        (
            "3 damped iteration conserves mass and converges",
            damped_conservation,
        ),
        (
            "4 ARS matches brute-force two-hop counting",
            ars_oracle_equivalence,
        ),
        (
            "5 every injected session fault is detected",
            fault_detection,
        ),
        (
            "6 all layouts and conversions are equivalent",
            representation_equivalence,
        ),
        ("7 preference-graph edge rules hold", pgrec_invariants),
        ("8 meta-path counts match walk enumeration", metapath_oracle),
        (
            "9 CLI output is deterministic and matches goldens",
            cli_determinism,
        ),
    ];
    let mut stdout = std::io::stdout();
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let elapsed = started.elapsed().as_secs_f64();
        let verdict = if outcome.is_ok() { "PASS" } else { "FAIL" };
        if outcome.is_err() {
            failed += 1;
        }
        writeln!(stdout, "acceptance {name} ... {verdict} ({elapsed:.3}s)").unwrap();
    }
    writeln!(stdout, "acceptance: {} passed, {failed} failed", 9 - failed).unwrap();
    if failed > 0 {
        std::process::exit(1);
    }
}

/// In units of 1/8640 so that every division by an out-degree of 1..=4 in
/// the first two steps is exact.
const UNIT: i64 = 8640;

/// Arc masks over the 20 ordered pairs of distinct nodes 1..=5 whose first
/// two power-iteration steps from 1/5 reach the two target vectors.
fn five_node_fits(step1: [i64; 5], step2: [i64; 5]) -> Vec<Vec<(u64, u64)>> {
    let pairs: Vec<(usize, usize)> = (0..5)
        .flat_map(|s| (0..5).filter(move |&d| d != s).map(move |d| (s, d)))
        .collect();
    let step = |mask: u32, r: [i64; 5]| -> Option<[i64; 5]> {
        let mut out = [0i64; 5];
        for (k, &(s, _)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                out[s] += 1;
            }
        }
        let mut next = [0i64; 5];
        for (k, &(s, d)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                if r[s] % out[s] != 0 {
                    return None;
                }
                next[d] += r[s] / out[s];
            }
        }
        Some(next)
    };
    let mut fits = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        if step(mask, [UNIT / 5; 5]) != Some(step1) {
            continue;
        }
        if step(mask, step1) == Some(step2) {
            fits.push(
                pairs
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &(s, d))| (s as u64 + 1, d as u64 + 1))
                    .collect(),
            );
        }
    }
    fits
}

fn five_page_example() {
    let started = Instant::now();
    let s02 = [1.0 / 20.0, 5.0 / 20.0, 2.0 / 20.0, 5.0 / 20.0, 7.0 / 20.0];
    let s03 = [1.0 / 40.0, 3.0 / 40.0, 5.0 / 40.0, 15.0 / 40.0, 16.0 / 40.0];
    let units = |v: [f64; 5]| v.map(|x| (x * UNIT as f64).round() as i64);

    let fits = five_node_fits(units(s02), units(s03));
    assert_eq!(
        fits.len(),
        2,
        "expected exactly two consistent graphs, got {fits:?}"
    );
    assert!(fits.contains(&CANONICAL.to_vec()));

    let g = build_from_edges(
        CANONICAL.iter().map(|&(s, d)| (s as i64, d as i64, None)),
        &[],
    )
    .unwrap();
    let cfg = PageRankConfig::basic();
    let close = |got: &[f64], want: &[f64]| {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= 1e-12, "{got:?} vs {want:?}");
        }
    };
    let r0 = init_ranks(&g).unwrap();
    close(r0.ranks(), &[0.2; 5]);
    let r1 = pagerank_step(&g, &r0, &cfg).unwrap();
    close(r1.ranks(), &s02);
    let r2 = pagerank_step(&g, &r1, &cfg).unwrap();
    close(r2.ranks(), &s03);
    let order: Vec<u64> = rank_positions(&r2).iter().map(|p| p.node.0).collect();
    assert_eq!(order, [5, 4, 3, 2, 1]);
    let positions: Vec<usize> = rank_positions(&r2).iter().map(|p| p.position).collect();
    assert_eq!(positions, [1, 2, 3, 4, 5]);
    assert!(
        started.elapsed() < Duration::from_secs(1),
        "took {:?}",
        started.elapsed()
    );
}

fn cross_method_agreement() {
    let started = Instant::now();
    let mut rng = rng(2);
    let cfg = PageRankConfig::basic()
        .with_epsilon(1e-12)
        .with_max_iter(100_000);
    for _ in 0..50 {
        let n = rng.gen_range(2..=12);
        let p = rng.gen_range(0.0..0.4);
        let arcs = random_strongly_connected(&mut rng, n, p);
        assert!(is_strongly_connected(n, &arcs));
        let g = to_graph(n, &arcs);
        let linear = solve_linear(&g).unwrap();
        let iterative = pagerank_run(&g, &cfg).unwrap();
        assert!(
            iterative.converged,
            "power iteration did not settle on {arcs:?}"
        );
        for (a, b) in linear.ranks().iter().zip(iterative.ranks()) {
            assert!((a - b).abs() <= 1e-8, "{a} vs {b} on {arcs:?}");
        }
        let again = row_times(linear.ranks(), &transition(n, &arcs));
        for (a, b) in again.iter().zip(linear.ranks()) {
            assert!((a - b).abs() <= 1e-9, "r A != r on {arcs:?}");
        }
    }
    assert!(
        started.elapsed() < Duration::from_secs(10),
        "took {:?}",
        started.elapsed()
    );
}

fn damped_conservation() {
    let mut rng = rng(3);
    for _ in 0..100 {
        let n = rng.gen_range(2..=50);
        let p = rng.gen_range(0.0..0.3);
        let arcs = random_dangling_free(&mut rng, n, p);
        let g = to_graph(n, &arcs);
        let cfg = PageRankConfig::damped();
        let mut worst: f64 = 0.0;
        let last = PowerIteration::new(&g, cfg)
            .unwrap()
            .run_observed(|s| worst = worst.max((s.total() - 1.0).abs()))
            .unwrap();
        assert!(worst <= 1e-9, "mass drifted by {worst}");
        assert!(
            last.converged && last.iterations <= 100,
            "{} iterations",
            last.iterations
        );
    }
}

fn ars_oracle_equivalence() {
    let mut rng = rng(4);
    for _ in 0..100 {
        let inst = SessionInstance::random(&mut rng, 20, 30);
        let g = inst.graph();
        assert!(validate_session_graph(&g, g.classes()).is_empty());
        let m = *inst.objects.choose(&mut rng).unwrap();
        let class = rng
            .gen_bool(0.3)
            .then(|| rng.gen_range(0..inst.class_names.len()));
        let top = rng.gen_bool(0.3).then(|| rng.gen_range(1..=5usize));
        let mut q = ArsQuery::new(NodeId(m));
        if let Some(c) = class {
            q = q.with_class(inst.class_names[c].as_str());
        }
        if let Some(t) = top {
            q = q.with_top_n(NonZeroUsize::new(t).unwrap());
        }
        let got: Vec<(u64, u64)> = ars_recommend(&g, &q)
            .unwrap()
            .iter()
            .map(|r| (r.object.0, r.score))
            .collect();
        assert_eq!(got, ars_oracle(&inst, m, class, top));
    }
}

fn fault_detection() {
    let mut rng = rng(5);
    let faults = [
        "OrphanObject",
        "OrphanKernel",
        "IdCollision",
        "OverlappingClasses",
        "UncoveredKernel",
    ];
    for trial in 0..100 {
        let mut inst = SessionInstance::random(&mut rng, 8, 10);
        if inst.class_names.len() < 2 {
            inst.class_names.push("extra".into());
        }
        let base = inst.graph();
        assert!(validate_session_graph(&base, base.classes()).is_empty());

        let fault = faults[trial % faults.len()];
        let fresh = inst.kernels.len() as u64 + inst.objects.len() as u64;
        let mut kernels: Vec<u64> = inst.kernels.clone();
        let mut objects: Vec<u64> = inst.objects.clone();
        let mut partition: Vec<KernelClass> = inst.partition().classes().to_vec();
        let victim = *inst.kernels.choose(&mut rng).unwrap();
        let home = partition
            .iter()
            .position(|c| c.kernels.contains(&NodeId(victim)))
            .unwrap();
        match fault {
            "OrphanObject" => objects.push(fresh),
            "OrphanKernel" => {
                kernels.push(fresh);
                partition[0].kernels.insert(NodeId(fresh));
            }
            "IdCollision" => kernels.push(*inst.objects.choose(&mut rng).unwrap()),
            "OverlappingClasses" => {
                let other = (home + 1) % partition.len();
                partition[other].kernels.insert(NodeId(victim));
            }
            "UncoveredKernel" => {
                partition[home].kernels.remove(&NodeId(victim));
            }
            _ => unreachable!(),
        }
        let g = SessionGraph::new(
            kernels.into_iter().map(NodeId),
            objects.into_iter().map(NodeId),
            inst.arcs.iter().map(|&(s, d)| (NodeId(s), NodeId(d))),
        )
        .unwrap();
        let partition = KernelClassPartition::new(partition).unwrap();
        let found = validate_session_graph(&g, Some(&partition));
        assert!(
            found.iter().any(|v| v.rule() == fault),
            "{fault} not reported: {found:?}"
        );
    }
}

fn representation_equivalence() {
    let mut rng = rng(6);
    for _ in 0..100 {
        let n = rng.gen_range(1..=64);
        let p = rng.gen_range(0.0..0.2);
        let arcs = random_digraph(&mut rng, n, p);
        let expected: BTreeSet<(u64, u64)> = arcs.iter().copied().collect();
        let base = to_graph(n, &arcs);
        for from in RepresentationKind::ALL {
            let g = base.convert(from);
            assert_eq!(g.kind(), from);
            for to in RepresentationKind::ALL {
                let h = g.convert(to);
                assert_eq!(h.kind(), to);
                let got: BTreeSet<(u64, u64)> =
                    h.arc_pairs().iter().map(|&(s, d)| (s.0, d.0)).collect();
                assert_eq!(got, expected, "{from} -> {to}");
                assert_eq!(h.nodes(), base.nodes());
            }
            for v in 0..n {
                let a = g.adjacency(NodeId(v)).unwrap();
                let succ: Vec<u64> = expected.iter().filter(|a| a.0 == v).map(|a| a.1).collect();
                let pred: Vec<u64> = expected.iter().filter(|a| a.1 == v).map(|a| a.0).collect();
                assert_eq!(
                    a.out_neighbors.iter().map(|x| x.0).collect::<Vec<_>>(),
                    succ,
                    "{from}"
                );
                assert_eq!(
                    a.in_neighbors.iter().map(|x| x.0).collect::<Vec<_>>(),
                    pred,
                    "{from}"
                );
                assert_eq!((a.out_degree, a.in_degree), (succ.len(), pred.len()));
            }
            assert!(g.adjacency(NodeId(n)).is_err());
            let p = g.memory_profile();
            let (nn, e) = (u128::from(n), expected.len() as u128);
            let (cells, class) = match from {
                RepresentationKind::AdjacencyMatrix => (nn * nn, AsymptoticClass::NSquared),
                RepresentationKind::IncidenceMatrix => (nn * e, AsymptoticClass::NTimesE),
                RepresentationKind::AdjacencyList | RepresentationKind::IncidenceList => {
                    (nn + 2 * e, AsymptoticClass::NPlusE)
                }
                RepresentationKind::EdgeList => (2 * e, AsymptoticClass::E),
            };
            assert_eq!((p.cells, p.asymptotic_class), (cells, class), "{from}");
        }
    }
}

fn pgrec_invariants() {
    let mut rng = rng(7);
    let scale = RatingScale::new(1, 5).unwrap();
    for _ in 0..50 {
        let rm = random_ratings(&mut rng, 10, 10, scale);
        let pg = build_pgrec(&rm);
        let g = pg.graph();

        let mut want: BTreeMap<(NodeId, NodeId), usize> = BTreeMap::new();
        let objects: Vec<NodeId> = rm.objects().iter().copied().collect();
        for (x, &i) in objects.iter().enumerate() {
            for &j in &objects[x + 1..] {
                let differing = rm
                    .users()
                    .iter()
                    .filter(
                        |&&u| matches!((rm.get(u, i), rm.get(u, j)), (Some(a), Some(b)) if a != b),
                    )
                    .count();
                if differing > 0 {
                    want.insert((i, j), differing);
                }
            }
        }
        let got: BTreeMap<(NodeId, NodeId), usize> = pg
            .preferences()
            .iter()
            .map(|(&p, &pair)| {
                let up = g
                    .edges_of_type(EdgeType::UserPreference)
                    .filter(|e| e.b == p)
                    .count();
                (pair, up)
            })
            .collect();
        assert_eq!(got, want);

        for (&p, &(i, j)) in pg.preferences() {
            let mut po: Vec<(NodeId, i64)> = g
                .edges_of_type(EdgeType::PreferenceObject)
                .filter(|e| e.a == p)
                .map(|e| (e.b, e.weight.unwrap() as i64))
                .collect();
            po.sort();
            assert_eq!(po, [(i, 1), (j, -1)]);
        }
        for e in g.edges_of_type(EdgeType::UserPreference) {
            let w = e.weight.unwrap();
            assert!((-4.0..=4.0).contains(&w) && w != 0.0, "weight {w}");
            let (i, j) = pg.preferences()[&e.b];
            let diff = rm.get(e.a, i).unwrap() - rm.get(e.a, j).unwrap();
            assert_eq!(w, diff as f64);
        }
    }
}

fn metapath_oracle() {
    let mut rng = rng(8);
    let patterns: Vec<MetaPathPattern> = ["UU", "UGU", "UOU", "UOKOU"]
        .iter()
        .map(|p| p.parse().unwrap())
        .collect();
    let mut nonempty = 0;
    for _ in 0..50 {
        let inst = HetInstance::random(&mut rng, 30);
        let g = inst.graph(&mut rng);
        for pattern in &patterns {
            for (&v, &t) in &inst.types {
                if t != pattern.first() {
                    continue;
                }
                let got: BTreeMap<u64, u64> = match_metapath(&g, pattern, NodeId(v))
                    .unwrap()
                    .into_iter()
                    .map(|(k, c)| (k.0, c))
                    .collect();
                let want = inst.count_walks(pattern.types(), v);
                assert_eq!(got, want, "{pattern} from {v}");
                nonempty += usize::from(!want.is_empty());
            }
        }
    }
    assert!(
        nonempty > 50,
        "generator produced too few walks to be meaningful"
    );
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn cli_determinism() {
    let dir = fixtures();
    let scratch = tempfile::tempdir().unwrap();
    let built = scratch.path().join("pgrec.tsv");
    let built_arg = built.to_str().unwrap().to_owned();
    let runs: Vec<(Vec<&str>, &str)> = vec![
        (
            vec![
                "pagerank",
                "--edges",
                "ex5.tsv",
                "--variant",
                "basic",
                "--d",
                "1",
                "--steps",
                "2",
            ],
            "pagerank_ex5_steps2.txt",
        ),
        (
            vec![
                "pagerank",
                "--edges",
                "ex5.tsv",
                "--variant",
                "basic",
                "--method",
                "linear",
            ],
            "pagerank_ex5_linear.txt",
        ),
        (
            vec!["pagerank", "--edges", "ex5.tsv", "--variant", "damped"],
            "pagerank_ex5_damped.txt",
        ),
        (
            vec![
                "pagerank",
                "--edges",
                "dangling.tsv",
                "--variant",
                "damped",
                "--dangling",
                "uniform",
            ],
            "pagerank_dangling_uniform.txt",
        ),
        (
            vec!["ars", "--graph", "demo.tsv", "--object", "o3"],
            "ars_demo_o3.txt",
        ),
        (
            vec![
                "ars",
                "--graph",
                "classed.tsv",
                "--object",
                "o3",
                "--class",
                "orders",
            ],
            "ars_classed_o3_orders.txt",
        ),
        (vec!["validate", "--graph", "demo.tsv"], "validate_demo.txt"),
        (
            vec![
                "validate",
                "--graph",
                "classed.tsv",
                "--classes",
                "overlap_classes.tsv",
            ],
            "validate_overlap.txt",
        ),
        (
            vec![
                "pgrec",
                "build",
                "--ratings",
                "ratings.csv",
                "--scale",
                "1:5",
                "--out",
                &built_arg,
            ],
            "pgrec_build.txt",
        ),
        (
            vec![
                "metapath",
                "--graph",
                "het.tsv",
                "--pattern",
                "UOU",
                "--start",
                "u1",
            ],
            "metapath_uou_u1.txt",
        ),
        (
            vec![
                "metapath",
                "--graph",
                "het.tsv",
                "--pattern",
                "UGU",
                "--start",
                "u1",
                "--recommend",
            ],
            "metapath_ugu_u1_recommend.txt",
        ),
        (
            vec![
                "convert",
                "--in",
                "g.tsv",
                "--from",
                "edge-list",
                "--to",
                "adjacency-matrix",
            ],
            "convert_g_adjacency_matrix.txt",
        ),
        (
            vec![
                "profile",
                "--kind",
                "incidence-matrix",
                "--n",
                "64",
                "--e",
                "300",
            ],
            "profile_incidence_matrix.txt",
        ),
    ];
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_grafrec"))
            .args(args)
            .current_dir(dir.join("fixtures"))
            .output()
            .unwrap();
        (out.status.code(), out.stdout)
    };
    for (args, golden) in &runs {
        let first = run(args);
        let second = run(args);
        assert_eq!(first, second, "{args:?} is not deterministic");
        let want = std::fs::read(dir.join("golden").join(golden)).unwrap();
        assert_eq!(
            String::from_utf8_lossy(&first.1),
            String::from_utf8_lossy(&want),
            "{args:?} differs from {golden}"
        );
        let expected_code = if golden.starts_with("validate_overlap") {
            1
        } else {
            0
        };
        assert_eq!(first.0, Some(expected_code), "{args:?}");
        if args[0] == "pgrec" {
            let file = std::fs::read(&built).unwrap();
            assert_eq!(
                file,
                std::fs::read(dir.join("golden/pgrec_ratings.tsv")).unwrap()
            );
        }
    }
}
