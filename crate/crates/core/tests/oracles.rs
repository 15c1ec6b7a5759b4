mod common;

use rnca::bounds::{kcca_exact, DEFAULT_ORACLE_CAP};
use rnca::components::{rcca_fit, rpca_fit, test_correlation_sum};
use rnca::kernel::{median_bandwidth, sample_fourier, FeatureMap};
use rnca::Matrix;

/// Cyclic Jacobi rotations; returns eigenvalues descending with their vectors.
fn jacobi(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.nrows();
    let mut a = a.clone();
    let mut v = Matrix::identity(n, n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].powi(2))
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

#[test]
fn identity_rpca_is_linear_pca() {
    let n = 150;
    let base = common::normal(n, 4, 21);
    let mix = Matrix::from_row_slice(
        4,
        4,
        &[
            3.0, 0.0, 0.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.5, 0.2, 1.0, 0.0, 0.0, 0.1, 0.3, 0.2,
        ],
    );
    let x = &base * mix.transpose();
    let means = x.row_mean();
    let centered = Matrix::from_fn(n, 4, |i, j| x[(i, j)] - means[j]);
    let cov = centered.tr_mul(&centered) / (n - 1) as f64;
    let (values, vectors) = jacobi(&cov);

    let model = rpca_fit(&x, &FeatureMap::identity(4), 4).unwrap();
    let scores = model.transform(&x).unwrap();
    for j in 0..4 {
        assert!(
            (model.eigenvalues()[j] - values[j]).abs() <= 1e-10 * values[0],
            "eigenvalue {j}"
        );
        let oracle = &centered * vectors.column(j);
        let got = scores.column(j);
        let same = (&oracle - got).amax();
        let flip = (&oracle + got).amax();
        assert!(
            same.min(flip) <= 1e-8,
            "score column {j} off by {}",
            same.min(flip)
        );
    }
}

#[test]
fn rcca_approaches_kcca_as_features_grow() {
    let n = 200;
    let x = common::normal(n, 2, 31);
    let noise = common::normal(n, 1, 32);
    let y = Matrix::from_fn(n, 1, |i, _| {
        (x[(i, 0)] * x[(i, 1)]).sin() + 0.2 * noise[(i, 0)]
    });
    let sx = median_bandwidth(&x, usize::MAX, 0).unwrap().spec;
    let sy = median_bandwidth(&y, usize::MAX, 0).unwrap().spec;
    let gamma = 1e-2;
    let exact: f64 = kcca_exact(&x, &y, sx, sy, gamma, gamma, 5, DEFAULT_ORACLE_CAP)
        .unwrap()
        .iter()
        .sum();
    let gap = |m: usize| {
        let mx = sample_fourier(2, m, sx, 40 + m as u64).unwrap();
        let my = sample_fourier(1, m, sy, 41 + m as u64).unwrap();
        let fit = rcca_fit(&x, &y, &mx, &my, gamma, gamma, 5).unwrap();
        (fit.correlations().iter().sum::<f64>() - exact).abs()
    };
    let coarse = gap(20);
    let fine = gap(20 * n);
    assert!(fine <= 0.1, "gap at m = 20n is {fine}");
    assert!(fine < coarse, "gap did not shrink: {coarse} -> {fine}");
}

#[test]
fn held_out_sum_is_centered_under_independence() {
    let n = 10_000;
    let mut total = 0.0;
    for t in 0..20u64 {
        let x = common::normal(n, 1, 100 + t);
        let y = common::normal(n, 1, 200 + t);
        let xt = common::normal(n, 1, 300 + t);
        let yt = common::normal(n, 1, 400 + t);
        let mx = sample_fourier(
            1,
            20,
            median_bandwidth(&x, 10_000, t).unwrap().spec,
            500 + t,
        )
        .unwrap();
        let my = sample_fourier(
            1,
            20,
            median_bandwidth(&y, 10_000, t).unwrap().spec,
            600 + t,
        )
        .unwrap();
        let fit = rcca_fit(&x, &y, &mx, &my, 1e-3, 1e-3, 1).unwrap();
        total += test_correlation_sum(&fit, &xt, &yt, 1).unwrap();
    }
    let mean = total / 20.0;
    assert!(mean.abs() < 0.03, "null mean {mean}");
}
