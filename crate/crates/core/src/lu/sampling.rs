//! Random inputs for the soundness sweeps.
//!
//! Generators mix generic draws with structured and near-extremal ones
//! (stars, single edges, perturbed equality configurations, exact
//! maximizers), since a uniform draw almost never comes close to equality.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use super::lemma1::{
    construct_equality_eta, lemma1_maximize, EdgeWeights, EqualityCase1, EtaWeights, Orientation,
};
use super::lemma2::{construct_lemma2_equality, Lemma2EqualityConfig};
use crate::symmat::{frobenius_inner, Hypotheses, MatrixFamily, SquareMatrix, SymMatrix};

/// Tolerance used when re-validating generated inputs.
const GEN_TOL: f64 = 1e-12;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Uniform point on the unit sphere of the zero-sum hyperplane in `ℝⁿ`.
pub fn random_eta<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    loop {
        let mut eta: Vec<f64> = (0..n).map(|_| normal(rng)).collect();
        let mean = eta.iter().sum::<f64>() / n as f64;
        eta.iter_mut().for_each(|x| *x -= mean);
        let norm = eta.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            eta.iter_mut().for_each(|x| *x /= norm);
            return eta;
        }
    }
}

/// Nonnegative weights from one of several dense, sparse and structured
/// generators. At least one weight is positive.
pub fn random_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> EdgeWeights {
    assert!(n >= 2);
    let pairs = n * (n - 1) / 2;
    let mut values = vec![0.0; pairs];
    match rng.random_range(0..6) {
        // dense uniform
        0 => values.iter_mut().for_each(|v| *v = rng.random::<f64>()),
        // sparse exponential
        1 => {
            let p = rng.random_range(0.1..0.6);
            for v in values.iter_mut() {
                if rng.random::<f64>() < p {
                    *v = -(1.0 - rng.random::<f64>()).ln();
                }
            }
        }
        // star around a random centre, weights near-equal or equal
        2 => {
            let centre = rng.random_range(0..n);
            let equal = rng.random_bool(0.5);
            let base = rng.random_range(0.5..3.0);
            let mut w = EdgeWeights::zeros(n);
            for j in (0..n).filter(|&j| j != centre) {
                if rng.random_bool(0.8) {
                    let r = if equal { base } else { base * rng.random_range(0.8..1.0) };
                    w.set(centre, j, r).expect("valid pair");
                }
            }
            values = w.values().to_vec();
        }
        // single edge
        3 => values[rng.random_range(0..pairs)] = rng.random_range(0.1..5.0),
        // small integers
        4 => values
            .iter_mut()
            .for_each(|v| *v = rng.random_range(0..4) as f64),
        // log-normal spread
        _ => values
            .iter_mut()
            .for_each(|v| *v = (normal(rng)).exp().min(20.0)),
    }
    if values.iter().all(|&v| v == 0.0) {
        values[rng.random_range(0..pairs)] = 1.0;
    }
    EdgeWeights::from_values(n, values).expect("generated weights are nonnegative")
}

fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// Project to the zero-sum sphere.
fn renormalize(mut eta: Vec<f64>) -> Vec<f64> {
    let n = eta.len() as f64;
    let mean = eta.iter().sum::<f64>() / n;
    eta.iter_mut().for_each(|x| *x -= mean);
    let norm = eta.iter().map(|x| x * x).sum::<f64>().sqrt();
    eta.iter_mut().for_each(|x| *x /= norm);
    eta
}

/// Random input of the zero-sum inequality with `n` indices.
pub fn random_eta_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> EtaWeights {
    let mode = rng.random_range(0..10);
    let x = match mode {
        // relabelled equality configuration, possibly perturbed
        0 | 1 => {
            let spec = EqualityCase1 {
                n,
                k: rng.random_range(1..n),
                weight: rng.random_range(0.1..8.0),
                orientation: if rng.random_bool(0.5) {
                    Orientation::Case1
                } else {
                    Orientation::Case2
                },
            };
            let base = construct_equality_eta(&spec)
                .expect("valid equality parameters")
                .permuted(&random_permutation(rng, n));
            if mode == 0 {
                base
            } else {
                let eps = 10f64.powf(rng.random_range(-8.0..-2.0));
                let eta = renormalize(base.eta().iter().map(|x| x + eps * normal(rng)).collect());
                EtaWeights::new(eta, base.weights().clone(), GEN_TOL).expect("renormalized")
            }
        }
        // exact maximizer of the given weights
        2 | 3 => {
            let weights = random_weights(rng, n);
            let eta = lemma1_maximize(&weights)
                .expect("weights are not all zero")
                .eta;
            EtaWeights::new(eta, weights, GEN_TOL).expect("maximizer is feasible")
        }
        _ => {
            let weights = random_weights(rng, n);
            EtaWeights::new(random_eta(rng, n), weights, GEN_TOL).expect("feasible draw")
        }
    };
    x
}

pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SymMatrix {
    SymMatrix::from_fn(n, |_, _| normal(rng))
}

/// Haar-like orthogonal matrix: Gram–Schmidt on Gaussian columns.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SquareMatrix {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| normal(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let d: f64 = c.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(c).for_each(|(x, y)| *x -= d * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            cols.push(v);
        }
    }
    SquareMatrix::from_fn(n, |i, j| cols[j][i])
}

/// Gram–Schmidt in the Frobenius inner product; members that collapse
/// become zero.
fn frobenius_gram_schmidt(mut members: Vec<SymMatrix>) -> Vec<SymMatrix> {
    let mut out: Vec<SymMatrix> = Vec::with_capacity(members.len());
    for a in members.drain(..) {
        let scale = a.norm();
        let mut v = a;
        for _ in 0..2 {
            for b in out.iter().filter(|b| !b.is_zero()) {
                let c = frobenius_inner(&v, b).expect("same dimension") / b.norm_sq();
                v = v.add_scaled(-c, b).expect("same dimension");
            }
        }
        if v.norm() <= 1e-9 * scale.max(1e-300) {
            out.push(SymMatrix::zeros(v.dim()));
        } else {
            let s = 1.0 / v.norm();
            out.push(v.scaled(s));
        }
    }
    out
}

/// Trace-free, pairwise orthogonal family with `‖A_1‖ = 1` and random
/// norms on the remaining members.
pub fn random_orthogonal_family<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> MatrixFamily {
    if rng.random_bool(0.15) && n >= 2 && m >= 2 {
        return random_equality_family(rng, n, m);
    }
    let raw: Vec<SymMatrix> = (0..m)
        .map(|_| {
            let a = random_symmetric(rng, n);
            let shift = a.trace() / n as f64;
            a.add_scaled(-shift, &SymMatrix::identity(n)).expect("same dimension")
        })
        .collect();
    let mut members = frobenius_gram_schmidt(raw);
    for a in members.iter_mut().skip(1) {
        let scale = match rng.random_range(0..4) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.random_range(0.05..3.0),
        };
        *a = a.scaled(scale);
    }
    MatrixFamily::with_hypotheses(
        members,
        Hypotheses { trace_free: true, orthogonal: true },
        1e-10,
    )
    .expect("Gram-Schmidt output satisfies the hypotheses")
}

/// Equality configuration of the commutator inequality seen in a random
/// orthonormal tangent frame.
pub fn random_equality_family<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> MatrixFamily {
    let cfg = Lemma2EqualityConfig {
        n,
        m,
        k: rng.random_range(1..=(n - 1).min(m - 1)),
        lambda_scale: 1.0,
        mu_scale: rng.random_range(0.05..3.0),
    };
    let q = random_orthogonal(rng, n);
    construct_lemma2_equality(&cfg)
        .expect("valid parameters")
        .similarity(&q)
        .expect("same dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn generated_inputs_satisfy_hypotheses() {
        let mut rng = rng_from_seed(99);
        for _ in 0..500 {
            let n = rng.random_range(2..=12);
            let x = random_eta_weights(&mut rng, n);
            let sum: f64 = x.eta().iter().sum();
            assert!(sum.abs() < 1e-12);
            assert!(!x.weights().is_zero());

            let m = rng.random_range(2..=6);
            let n = rng.random_range(2..=8);
            let f = random_orthogonal_family(&mut rng, n, m);
            assert!((f.member(0).norm() - 1.0).abs() < 1e-12);
            assert!(f.max_cross_inner().0 < 1e-10);
            assert!(f.max_abs_trace() < 1e-10);
        }
    }

    #[test]
    fn orthogonal_matrices_are_orthogonal() {
        let mut rng = rng_from_seed(3);
        let q = random_orthogonal(&mut rng, 7);
        let qtq = q.transpose().mul(&q).unwrap();
        assert!(qtq.sub(&SquareMatrix::identity(7)).unwrap().max_abs() < 1e-14);
    }
}
