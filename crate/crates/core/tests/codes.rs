//! Code-level scans (distance, weight distribution, list size) against
//! naive enumeration of F_q^n.

use num_rational::Rational64;

use ldpclab::ensembles::{max_list_size, radius, sample_ldpc, sample_rlc, LdpcEnsembleParams};
use ldpclab::{FieldSpec, FqVector, LinearCode};

fn all_vectors(f: &FieldSpec, n: usize) -> Vec<Vec<u32>> {
    let q = f.q() as usize;
    (0..q.pow(n as u32))
        .map(|mut x| {
            (0..n)
                .map(|_| {
                    let d = (x % q) as u32;
                    x /= q;
                    d
                })
                .collect()
        })
        .collect()
}

fn codewords(code: &LinearCode) -> Vec<Vec<u32>> {
    all_vectors(code.field(), code.n())
        .into_iter()
        .filter(|v| code.contains(&FqVector::new(code.field(), v.clone())).unwrap())
        .collect()
}

fn dist(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn sample_codes() -> Vec<LinearCode> {
    let mut out = Vec::new();
    for (p, h) in [(2, 1), (3, 1), (2, 2)] {
        let f = FieldSpec::new(p, h).unwrap();
        let n = if f.q() == 2 { 10 } else { 6 };
        let s = if f.q() == 2 { 5 } else { 3 };
        let params = LdpcEnsembleParams::new(&f, n, s, Rational64::new(2, s as i64)).unwrap();
        for seed in 0..3 {
            out.push(sample_ldpc(&params, seed));
            out.push(sample_rlc(n, Rational64::new(1, 2), &f, 100 + seed).unwrap());
        }
    }
    out
}

#[test]
fn weight_distribution_and_distance_match_enumeration() {
    for code in sample_codes() {
        let words = codewords(&code);
        assert_eq!(Some(words.len() as u128), code.size());
        let mut brute = vec![0u64; code.n() + 1];
        for w in &words {
            brute[w.iter().filter(|&&e| e != 0).count()] += 1;
        }
        assert_eq!(code.weight_distribution().unwrap(), brute);
        let (d, witness) = code.min_distance().unwrap();
        match brute[1..].iter().position(|&c| c > 0) {
            Some(i) => {
                assert_eq!(d, (i + 1) as f64 / code.n() as f64);
                assert_eq!(witness.weight(), i + 1);
                assert!(code.contains(&witness).unwrap());
            }
            None => assert_eq!(d, 1.0),
        }
    }
}

#[test]
fn exhaustive_list_size_matches_enumeration() {
    for code in sample_codes() {
        let words = codewords(&code);
        for alpha in [0.1, 0.2, 0.34] {
            let r = radius(code.n(), alpha);
            let best = all_vectors(code.field(), code.n())
                .iter()
                .map(|c| words.iter().filter(|w| dist(w, c) <= r).count())
                .max()
                .unwrap();
            let res = max_list_size(&code, alpha, None).unwrap();
            assert!(res.exhaustive);
            assert_eq!(res.size, best, "alpha={alpha}");
            assert_eq!(code.list_size_at(&res.center, alpha).unwrap(), best);
            let sampled = max_list_size(&code, alpha, Some((200, 5))).unwrap();
            assert!(!sampled.exhaustive);
            assert!(sampled.size >= 1 && sampled.size <= best);
        }
    }
}
