//! The `measure` subcommand and its text / JSON renderings.

use std::fmt::Write;

use entanglement::{als_search, bipartite_measure, AlsOptions, Bipartite, BipartiteOptions, Multipartite, C64};
use serde::Serialize;

use crate::{load_state, Failure, Format, MeasureArgs, Mode};

#[derive(Serialize)]
struct MeasureOutput {
    mode: &'static str,
    j: f64,
    lambda: f64,
    k: f64,
    gamma: Option<f64>,
    factors: Option<Vec<Vec<[f64; 2]>>>,
    diagnostics: Diagnostics,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Diagnostics {
    Bipartite {
        method: String,
        iterations: usize,
        stationarity_residual: f64,
        power_fallback: bool,
        split: Vec<usize>,
        normalized_input: bool,
        options: BipartiteOptionsOut,
    },
    Multipartite {
        method: &'static str,
        iterations: usize,
        fixed_point_residual: f64,
        converged: bool,
        restarts_used: usize,
        best_restart: usize,
        gamma_spread: [f64; 2],
        normalized_input: bool,
        options: AlsOptionsOut,
    },
}

#[derive(Serialize)]
struct BipartiteOptionsOut {
    method: String,
    tol: f64,
    max_iters: usize,
    seed: u64,
    normalize: bool,
}

#[derive(Serialize)]
struct AlsOptionsOut {
    restarts: usize,
    tol: f64,
    max_sweeps: usize,
    seed: u64,
    normalize: bool,
}

fn pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn bipartite_output(r: &Bipartite, split: Vec<usize>, opts: &BipartiteOptions, with_factors: bool) -> MeasureOutput {
    MeasureOutput {
        mode: "bipartite",
        j: r.j,
        lambda: r.lambda,
        k: r.k,
        gamma: None,
        factors: with_factors.then(|| vec![pairs(&r.u_tilde), pairs(&r.v_tilde)]),
        diagnostics: Diagnostics::Bipartite {
            method: r.method.to_string(),
            iterations: r.iterations,
            stationarity_residual: r.stationarity_residual,
            power_fallback: r.power_fallback,
            split,
            normalized_input: r.normalized_input,
            options: BipartiteOptionsOut {
                method: opts.method.to_string(),
                tol: opts.tol,
                max_iters: opts.max_iters,
                seed: opts.seed,
                normalize: opts.normalize,
            },
        },
    }
}

fn multipartite_output(r: &Multipartite, opts: &AlsOptions, with_factors: bool) -> MeasureOutput {
    let (lo, hi) = r.gamma_spread();
    MeasureOutput {
        mode: "multipartite",
        j: r.j,
        lambda: r.gamma * r.gamma,
        k: r.gamma,
        gamma: Some(r.gamma),
        factors: with_factors.then(|| r.factors.iter().map(|f| pairs(f)).collect()),
        diagnostics: Diagnostics::Multipartite {
            method: "als",
            iterations: r.iterations,
            fixed_point_residual: r.fixed_point_residual,
            converged: r.converged,
            restarts_used: r.restarts_used,
            best_restart: r.best_restart,
            gamma_spread: [lo, hi],
            normalized_input: r.normalized_input,
            options: AlsOptionsOut {
                restarts: opts.restarts,
                tol: opts.tol,
                max_sweeps: opts.max_sweeps,
                seed: opts.seed,
                normalize: opts.normalize,
            },
        },
    }
}

fn render_text(out: &MeasureOutput) -> String {
    let mut s = String::new();
    let mut line = |key: &str, value: String| writeln!(s, "{key:<22}{value}").expect("write to String");
    line("mode", out.mode.to_string());
    line("J", out.j.to_string());
    line("lambda", out.lambda.to_string());
    line("K", out.k.to_string());
    if let Some(g) = out.gamma {
        line("gamma", g.to_string());
    }
    match &out.diagnostics {
        Diagnostics::Bipartite {
            method,
            iterations,
            stationarity_residual,
            power_fallback,
            split,
            ..
        } => {
            line("split", format!("{split:?}"));
            let fallback = if *power_fallback { " (after power fallback)" } else { "" };
            line("method", format!("{method}{fallback}"));
            line("iterations", iterations.to_string());
            line("stationarity_residual", format!("{stationarity_residual:e}"));
        }
        Diagnostics::Multipartite {
            iterations,
            fixed_point_residual,
            converged,
            restarts_used,
            best_restart,
            gamma_spread,
            ..
        } => {
            line("method", "als".to_string());
            line("sweeps", iterations.to_string());
            line("fixed_point_residual", format!("{fixed_point_residual:e}"));
            line("converged", converged.to_string());
            line("restarts", format!("{restarts_used} (best #{best_restart})"));
            line("gamma_spread", format!("[{}, {}]", gamma_spread[0], gamma_spread[1]));
        }
    }
    if let Some(factors) = &out.factors {
        for (i, f) in factors.iter().enumerate() {
            let body: Vec<String> = f.iter().map(|[re, im]| format!("{re}{im:+}i")).collect();
            line(&format!("factor[{i}]"), format!("[{}]", body.join(", ")));
        }
    }
    s
}

pub(crate) fn measure(args: &MeasureArgs) -> Result<(), Failure> {
    let normalize = !args.no_normalize;
    let state = load_state(&args.source, args.n, normalize)?;
    let subsystems = state.num_subsystems();

    let bipartite = match (args.mode, &args.split) {
        (Mode::Multipartite, Some(_)) => {
            return Err(Failure::input("--split only applies to the bipartite mode"));
        }
        (Mode::Multipartite, None) => false,
        (Mode::Bipartite, _) => true,
        (Mode::Auto, split) => split.is_some() || subsystems == 2,
    };

    if args.factors {
        eprintln!("note: factors are fixed only up to phase, and are not unique when the optimum is degenerate");
    }

    let (output, converged) = if bipartite {
        let split = args.split.as_ref().map(|s| s.0.clone()).unwrap_or_else(|| vec![0]);
        let opts = BipartiteOptions {
            method: args.method.into(),
            tol: args.tol,
            max_iters: args.max_iters,
            seed: args.seed,
            normalize,
        };
        let report = bipartite_measure(&state, &split, &opts)?;
        if report.power_fallback {
            eprintln!("warning: power iteration did not converge; result computed with jacobi");
        }
        (bipartite_output(&report, split, &opts, args.factors), true)
    } else {
        let opts = AlsOptions {
            restarts: args.restarts,
            tol: args.tol,
            max_sweeps: args.max_sweeps,
            seed: args.seed,
            normalize,
        };
        let report = als_search(&state, &opts)?;
        (multipartite_output(&report, &opts, args.factors), report.converged)
    };

    match args.format {
        Format::Json => println!("{}", serde_json::to_string(&output).expect("report serializes")),
        Format::Text => print!("{}", render_text(&output)),
    }
    if converged {
        Ok(())
    } else {
        Err(Failure::solver(format!(
            "no restart converged within {} sweeps; gamma is a lower bound",
            args.max_sweeps
        )))
    }
}
