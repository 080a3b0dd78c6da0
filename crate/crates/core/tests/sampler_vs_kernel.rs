//! Long runs of both samplers compared with their exact transition matrices.

use mhbc::testkit::generators::{generate, GeneratorSpec};
use mhbc::testkit::kernel::{build_kernel_joint, build_kernel_single, KernelMatrix};
use mhbc::{exact_betweenness, run_chain, run_joint_chain, ChainConfig, Graph, JointState};

fn busiest(g: &Graph) -> usize {
    let bc = exact_betweenness(g).unwrap().bc;
    (0..g.n()).max_by(|&a, &b| bc[a].total_cmp(&bc[b])).unwrap()
}

/// Empirical one-step frequencies out of every visited state, compared with the
/// kernel row using a 5σ binomial band per entry.
fn assert_transitions_match(k: &KernelMatrix, path: &[JointState]) {
    let s = k.states.len();
    let idx = |x: JointState| k.states.iter().position(|&y| y == x).unwrap();
    let mut counts = vec![vec![0u64; s]; s];
    let mut visits = vec![0u64; s];
    for w in path.windows(2) {
        let (a, b) = (idx(w[0]), idx(w[1]));
        counts[a][b] += 1;
        visits[a] += 1;
    }
    let total = (path.len() - 1) as f64;
    for x in 0..s {
        let occupancy = visits[x] as f64 / total;
        assert!(
            (occupancy - k.pi[x]).abs() < 0.01,
            "occupancy of {:?}: {occupancy} vs {}",
            k.states[x],
            k.pi[x]
        );
        if visits[x] < 2000 {
            continue;
        }
        let m = visits[x] as f64;
        for (y, (&p, &count)) in k.transition[x].iter().zip(&counts[x]).enumerate() {
            let freq = count as f64 / m;
            let band = 5.0 * (p * (1.0 - p) / m).sqrt() + 1e-12;
            assert!(
                (freq - p).abs() <= band,
                "{:?} -> {:?}: {freq} vs {p}",
                k.states[x],
                k.states[y]
            );
        }
    }
}

#[test]
fn single_sampler_follows_kernel() {
    for (spec, r) in [
        (GeneratorSpec::Star(5), 0),
        (GeneratorSpec::Path(6), 2),
        (GeneratorSpec::Barbell { k: 3, bridge_len: 1 }, 3),
        (
            GeneratorSpec::Gnp {
                n: 7,
                p: 0.4,
                seed: 5,
            },
            usize::MAX,
        ),
    ] {
        let g = generate(&spec).unwrap();
        // usize::MAX: use the vertex with the largest betweenness
        let r = if r == usize::MAX { busiest(&g) } else { r };
        let k = build_kernel_single(&g, r).unwrap();
        let trace = run_chain(&g, &ChainConfig::new(r, 400_000, 11)).unwrap();
        let path: Vec<_> = trace.states()[1..].iter().map(|&v| JointState { r, v }).collect();
        assert_transitions_match(&k, &path);
    }
}

#[test]
fn joint_sampler_follows_kernel() {
    for (spec, targets) in [
        (GeneratorSpec::Path(4), vec![1, 2]),
        (GeneratorSpec::Path(8), vec![3, 4]),
        (GeneratorSpec::Star(6), vec![0, 1]),
        (GeneratorSpec::Cycle(5), vec![0, 2, 4]),
    ] {
        let g = generate(&spec).unwrap();
        let k = build_kernel_joint(&g, &targets).unwrap();
        let trace = run_joint_chain(&g, &targets, 400_000, 23).unwrap();
        assert_transitions_match(&k, &trace.states()[1..]);
    }
}
