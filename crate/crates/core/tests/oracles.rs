//! Independent numerical oracles for the bipartite and multipartite solvers.

use entanglement::{
    bipartite_measure, random, random_state, reshape_bipartite, verify_stationarity, BipartiteOptions, Dims,
    HermitianMatrix, Matrix, State, C64,
};

/// Plain Nelder–Mead on `f: ℝⁿ → ℝ`.
fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, start: &[f64], step: f64, iters: usize) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut simplex: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..n {
        let mut p = start.to_vec();
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
    for _ in 0..iters {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        if values[n] - values[0] < 1e-15 {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..n].iter().map(|p| p[d]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            (0..n)
                .map(|d| centroid[d] + t * (simplex[n][d] - centroid[d]))
                .collect()
        };
        let reflected = along(-1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let contracted = if fr < values[n] { along(-0.5) } else { along(0.5) };
            let fc = f(&contracted);
            if fc < values[n].min(fr) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                let best = simplex[0].clone();
                for i in 1..=n {
                    simplex[i] = (0..n).map(|d| best[d] + 0.5 * (simplex[i][d] - best[d])).collect();
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let best = (0..=n)
        .min_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap())
        .unwrap();
    (simplex[best].clone(), values[best])
}

/// `min over u, v of Σ|A_ij − u_i v*_j|²`, searched directly without any eigensolver.
fn direct_rank_one_distance(a: &Matrix, restarts: u64) -> f64 {
    let (m, n) = (a.rows(), a.cols());
    let objective = |x: &[f64]| -> f64 {
        let u = |i: usize| C64::new(x[2 * i], x[2 * i + 1]);
        let v = |j: usize| C64::new(x[2 * (m + j)], x[2 * (m + j) + 1]);
        let mut acc = 0.0;
        for i in 0..m {
            for j in 0..n {
                acc += (a.get(i, j) - u(i) * v(j).conj()).norm_sqr();
            }
        }
        acc
    };
    let mut best = f64::INFINITY;
    for r in 0..restarts {
        let mut rng = random::rng_from_seed(1000 + r);
        let start: Vec<f64> = random::gaussian_vector::<f64, _>(m + n, &mut rng)
            .iter()
            .flat_map(|z| [z.re * 0.5, z.im * 0.5])
            .collect();
        let (mut x, mut fx) = nelder_mead(&objective, &start, 0.3, 20_000);
        // polish by restarting the simplex around the incumbent
        for step in [0.05, 0.01, 1e-3, 1e-4] {
            let (nx, nf) = nelder_mead(&objective, &x, step, 20_000);
            if nf < fx {
                x = nx;
                fx = nf;
            }
        }
        best = best.min(fx);
    }
    best
}

#[test]
fn random_qutrit_pair_matches_direct_minimization() {
    let state: State = random_state(&Dims::new(vec![3, 3]).unwrap(), 11);
    let report = bipartite_measure(&state, &[0], &BipartiteOptions::default()).unwrap();

    // top eigenvalue of A†A, from an explicitly formed Gram matrix
    let a = reshape_bipartite(&state, &[0]).unwrap();
    let mut g = vec![C64::new(0.0, 0.0); 9];
    for i in 0..3 {
        for j in 0..3 {
            for r in 0..3 {
                g[i * 3 + j] += a.get(r, i).conj() * a.get(r, j);
            }
        }
    }
    let eig = entanglement::jacobi_eigen(&HermitianMatrix::new(3, g).unwrap()).unwrap();
    assert!((report.j - (1.0 - eig.values[0])).abs() < 1e-10);

    let direct = direct_rank_one_distance(&a, 12);
    assert!(
        (report.j - direct).abs() < 1e-6,
        "eigen route J = {}, direct minimization = {direct}",
        report.j
    );
}

#[test]
fn perturbed_factor_fails_stationarity() {
    // non-degenerate instance: dims [3, 3], seed 11
    let state: State = random_state(&Dims::new(vec![3, 3]).unwrap(), 11);
    let r = bipartite_measure(&state, &[0], &BipartiteOptions::default()).unwrap();
    let a = reshape_bipartite(&state, &[0]).unwrap();
    assert!(r.stationarity_residual <= 1e-8);

    let mut g = vec![C64::new(0.0, 0.0); 9];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                g[i * 3 + j] += a.get(k, i).conj() * a.get(k, j);
            }
        }
    }
    let eig = entanglement::jacobi_eigen(&HermitianMatrix::new(3, g).unwrap()).unwrap();
    assert!(eig.values[0] - eig.values[1] > 1e-3);
    let second = &eig.vectors[1];
    let (c, s) = (0.1f64.cos(), 0.1f64.sin());
    let rotated: Vec<C64> = r.v_tilde.iter().zip(second).map(|(v, w)| v * c + w * s).collect();
    let residual = verify_stationarity(&a, &r.u_tilde, &rotated, r.lambda);
    assert!(residual > 1e-3, "residual {residual}");
}

#[test]
fn als_w_state_matches_refined_grid() {
    let w: State = entanglement::make_named_state(entanglement::NamedState::W(3)).unwrap();
    let als = entanglement::als_measure(&w, &entanglement::AlsOptions::default()).unwrap();
    let coarse = entanglement::brute_force_product_search(&w, 128).unwrap();
    let refined = entanglement::brute_force_refined(&w, 64, 12).unwrap();
    assert!(als.gamma >= coarse - 1e-6);
    assert!((als.gamma - refined).abs() < 1e-6);
    assert!((als.j - 5.0 / 9.0).abs() < 1e-6);
}
