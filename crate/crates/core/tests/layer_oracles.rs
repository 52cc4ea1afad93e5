//! Layer and code-level probabilities checked against exhaustive enumeration
//! of every permutation and scaling at n = 6.

use num_rational::Rational64;

use ldpclab::ensembles::{ldpc_containment_mc, sample_ldpc, sample_rlc, Layer, LdpcEnsembleParams};
use ldpclab::fourier::{exact_layer_prob, ldpc_contain_bound};
use ldpclab::gvdistance::{layer_zero_prob, p_lambda_bound_finite, p_lambda_exact};
use ldpclab::rowdist::row_distribution_of;
use ldpclab::{FieldSpec, FqMatrix, FqVector, LinearCode};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn scalings(n: usize, q: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (1..q).map(move |d| [v.clone(), vec![d]].concat())).collect();
    }
    out
}

/// Exact `Pr[layer annihilates m]` by averaging over all `n! (q-1)^n` layers.
fn enumerate_layer_prob(m: &FqMatrix, s: usize) -> f64 {
    let f = m.field();
    let n = m.rows();
    let perms = permutations(n);
    let scales = scalings(n, f.q());
    let mut hits = 0u64;
    for perm in &perms {
        for scale in &scales {
            let layer = Layer { perm: perm.clone(), scale: scale.clone() };
            hits += layer.annihilates(f, s, m) as u64;
        }
    }
    hits as f64 / (perms.len() * scales.len()) as f64
}

#[test]
fn single_column_dp_matches_enumeration() {
    for (p, s) in [(2, 2), (2, 3), (3, 2), (3, 3), (5, 3)] {
        let f = FieldSpec::new(p, 1).unwrap();
        for w in 0..=6 {
            let col: Vec<u32> = (0..6).map(|i| if i < w { 1 + (i as u32 % (p - 1)) } else { 0 }).collect();
            let m = FqMatrix::from_data(&f, 6, 1, col).unwrap();
            let brute = enumerate_layer_prob(&m, s);
            let dp = layer_zero_prob(p, 6, s, w).unwrap();
            assert!((brute - dp).abs() < 1e-12, "q={p} s={s} w={w}: {brute} vs {dp}");
            let via_tau = exact_layer_prob(&row_distribution_of(&m), 6, s).unwrap();
            assert!((via_tau - dp).abs() < 1e-15);
        }
    }
}

#[test]
fn multi_column_dp_matches_enumeration() {
    let cases: Vec<(u32, Vec<Vec<u32>>)> = vec![
        (2, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 0], vec![0, 1], vec![1, 1]]),
        (2, vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1], vec![0, 0], vec![0, 0]]),
        (3, vec![vec![1, 0], vec![2, 0], vec![0, 1], vec![1, 1], vec![2, 2], vec![0, 0]]),
        (3, vec![vec![1, 2], vec![2, 1], vec![1, 2], vec![0, 1], vec![0, 2], vec![0, 0]]),
    ];
    for (q, rows) in cases {
        let f = FieldSpec::new(q, 1).unwrap();
        let m = FqMatrix::from_rows(&f, &rows).unwrap();
        for s in [2, 3] {
            let brute = enumerate_layer_prob(&m, s);
            let dp = exact_layer_prob(&row_distribution_of(&m), 6, s).unwrap();
            assert!((brute - dp).abs() < 1e-12, "q={q} s={s} {rows:?}: {brute} vs {dp}");
        }
    }
}

#[test]
fn three_column_dp_matches_enumeration() {
    let f = FieldSpec::new(2, 1).unwrap();
    let rows = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1], vec![0, 0, 1]];
    let m = FqMatrix::from_rows(&f, &rows).unwrap();
    for s in [2, 3] {
        let brute = enumerate_layer_prob(&m, s);
        let dp = exact_layer_prob(&row_distribution_of(&m), 6, s).unwrap();
        assert!((brute - dp).abs() < 1e-12);
    }
}

#[test]
fn exact_layer_prob_agrees_with_monte_carlo_over_f4() {
    let f = FieldSpec::new(2, 2).unwrap();
    let mut rows = vec![vec![0u32, 0]; 12];
    for (i, v) in [[1, 0], [2, 0], [0, 1], [1, 2], [2, 3]].iter().enumerate() {
        rows[2 * i] = v.to_vec();
    }
    let m = FqMatrix::from_rows(&f, &rows).unwrap();
    let params = LdpcEnsembleParams::new(&f, 12, 3, Rational64::new(2, 3)).unwrap();
    assert_eq!(params.t(), 1);
    let exact = exact_layer_prob(&row_distribution_of(&m), 12, 3).unwrap();
    let est = ldpc_containment_mc(&m, &params, 400_000, 77).unwrap();
    assert!(est.within_se_of(exact, 4.0), "{est:?} vs {exact}");
}

#[test]
fn finite_length_weight_bound_holds() {
    let f = FieldSpec::new(2, 1).unwrap();
    for (n, s, rate) in [(24, 3, Rational64::new(1, 3)), (30, 5, Rational64::new(3, 5)), (48, 3, Rational64::new(1, 3))] {
        let params = LdpcEnsembleParams::new(&f, n, s, rate).unwrap();
        for w in 1..=n / 2 {
            let lambda = w as f64 / n as f64;
            let exact = p_lambda_exact(lambda, &params).unwrap();
            let bound = p_lambda_bound_finite(lambda, &params).unwrap();
            assert!(exact <= bound, "n={n} s={s} w={w}: {exact} > {bound}");
        }
    }
}

#[test]
fn contain_bound_dominates_exact_probability() {
    let f = FieldSpec::new(2, 1).unwrap();
    let params = LdpcEnsembleParams::new(&f, 30, 5, Rational64::new(3, 5)).unwrap();
    for w in [6usize, 10, 15, 20] {
        let m = FqMatrix::from_data(&f, 30, 1, (0..30).map(|i| (i < w) as u32).collect()).unwrap();
        let b = ldpc_contain_bound(&m, &params, 0.0).unwrap();
        let exact = params.t() as f64 * exact_layer_prob(&row_distribution_of(&m), 30, 5).unwrap().log2();
        assert!(exact <= b.log_q_bound, "w={w}: {exact} > {}", b.log_q_bound);
        assert!(b.conditioning_log <= b.conditioning_cap_log + 1e-12);
    }
}

fn check_code(code: &LinearCode) {
    let h = code.parity_check();
    let g = code.generator();
    assert_eq!((g.rows(), g.cols()), (code.n(), code.dimension()));
    assert_eq!(g.rank(), code.dimension());
    assert_eq!(code.dimension(), code.n() - h.rank());
    assert!(h.mul(g).unwrap().is_zero());
    let q = code.field().q() as u128;
    assert_eq!(code.size(), Some(q.pow(code.dimension() as u32)));
    let mut count = 0u128;
    code.for_each_codeword(1 << 20, |w| {
        assert!(code.contains(&FqVector::new(code.field(), w.to_vec())).unwrap());
        count += 1;
    })
    .unwrap();
    assert_eq!(Some(count), code.size());
    let back = LinearCode::from_json(&code.to_json()).unwrap();
    assert_eq!(&back, code);
}

#[test]
fn sampled_codes_are_consistent() {
    for (p, h) in [(2, 1), (3, 1), (2, 2)] {
        let f = FieldSpec::new(p, h).unwrap();
        let params = LdpcEnsembleParams::new(&f, 12, 4, Rational64::new(1, 2)).unwrap();
        for seed in 0..5 {
            let code = sample_ldpc(&params, seed);
            check_code(&code);
            assert_eq!(code, sample_ldpc(&params, seed));
            let rlc = sample_rlc(10, Rational64::new(1, 2), &f, seed).unwrap();
            check_code(&rlc);
            assert_eq!(rlc, sample_rlc(10, Rational64::new(1, 2), &f, seed).unwrap());
        }
        assert_ne!(sample_ldpc(&params, 1), sample_ldpc(&params, 2));
    }
}

#[test]
fn ldpc_rows_have_sparsity_s() {
    let f = FieldSpec::new(3, 1).unwrap();
    let params = LdpcEnsembleParams::new(&f, 15, 5, Rational64::new(2, 5)).unwrap();
    let code = sample_ldpc(&params, 9);
    let h = code.parity_check();
    assert_eq!(h.rows(), 9);
    for i in 0..h.rows() {
        assert_eq!(h.row(i).iter().filter(|&&e| e != 0).count(), 5);
    }
    // each layer covers every coordinate exactly once
    for layer in 0..3 {
        for j in 0..15 {
            let hits = (0..3).filter(|b| h.get(layer * 3 + b, j) != 0).count();
            assert_eq!(hits, 1);
        }
    }
}
