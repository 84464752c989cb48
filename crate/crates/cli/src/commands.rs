//! Subcommand implementations. Configuration is fully validated before any
//! output file is created.

use std::io::Write;

use gp_spectrum_core::realspec::find_mu;
use gp_spectrum_core::spectrum::{compute_slice, match_multisets, SolveOptions, SpectrumSlice, SHADOW_ORACLE_MAX_TERMS};
use gp_spectrum_core::timedomain::{assemble_field, simulate_mode, spectrum_oracle, uniform_grid, ModeTrajectory};
use gp_spectrum_core::verify::{doublings, sweep_table, verify_slices, ClaimStatus};
use gp_spectrum_core::{ExponentialSumKernel, RealZeroLadder, Result as CoreResult};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{num, opt_num, to_json, write_output, Table, CSV_VERSION_LINE};
use crate::{CliError, Invocation};

/// Evaluate `f` for every mode, in parallel when `jobs > 1`, keeping order.
fn per_mode<T, F>(ns: &[u32], jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u32) -> T + Sync + Send,
{
    if jobs <= 1 {
        return ns.iter().map(|&n| f(n)).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| ns.par_iter().map(|&n| f(n)).collect()),
        Err(_) => ns.iter().map(|&n| f(n)).collect(),
    }
}

fn options(inv: &Invocation) -> SolveOptions {
    SolveOptions {
        tol_root: inv.config.tol_root,
        eps: inv.config.eps,
    }
}

fn kernel_and_branches(inv: &Invocation, extra_branch: Option<usize>) -> Result<(ExponentialSumKernel, usize), CliError> {
    let kernel = inv.config.kernel.instantiate()?;
    let count = inv.config.branches.max(extra_branch.unwrap_or(0));
    if count + 1 > kernel.len() {
        return Err(CliError::Config(format!(
            "J = {count} needs at least {} stored kernel terms, M = {}",
            count + 1,
            kernel.len()
        )));
    }
    Ok((kernel, count))
}

#[derive(Debug, Serialize)]
pub struct SpectrumRecord {
    pub n: u32,
    /// `j` for real branches, `+` / `-` for the complex pair.
    pub branch: String,
    pub re: f64,
    pub im: f64,
    pub residual: f64,
    /// Bracket ends for real branches; `∓` the localization box half-diagonal for the pair.
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub oracle_dist: Option<f64>,
}

fn records(kernel: &ExponentialSumKernel, ladder: &RealZeroLadder, slice: &SpectrumSlice) -> Vec<SpectrumRecord> {
    let values = slice.values();
    let oracle_dist: Vec<Option<f64>> = if kernel.len() <= SHADOW_ORACLE_MAX_TERMS && ladder.len() + 1 == kernel.len() {
        let oracle = spectrum_oracle(kernel, slice.n);
        match match_multisets(&values, &oracle) {
            Some(m) => m.pairs.iter().map(|p| Some(p.2)).collect(),
            None => vec![None; values.len()],
        }
    } else {
        vec![None; values.len()]
    };
    let mut out: Vec<SpectrumRecord> = slice
        .branches
        .iter()
        .enumerate()
        .map(|(i, b)| SpectrumRecord {
            n: slice.n,
            branch: b.j.to_string(),
            re: b.lambda,
            im: 0.0,
            residual: b.residual,
            bracket_lo: b.bracket.0,
            bracket_hi: b.bracket.1,
            oracle_dist: oracle_dist[i],
        })
        .collect();
    let p = &slice.pair;
    let nb = slice.branches.len();
    for (k, (label, z)) in [("+", p.lambda_plus), ("-", p.lambda_minus)].into_iter().enumerate() {
        out.push(SpectrumRecord {
            n: slice.n,
            branch: label.into(),
            re: z.re,
            im: z.im,
            residual: p.residual,
            bracket_lo: -p.box_radius,
            bracket_hi: p.box_radius,
            oracle_dist: oracle_dist[nb + k],
        });
    }
    out
}

pub fn cmd_spectrum(inv: &Invocation, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (kernel, count) = kernel_and_branches(inv, None)?;
    let opts = options(inv);
    let ns: Vec<u32> = (inv.config.n_min..=inv.config.n_max).collect();
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    match find_mu(&kernel, count, opts.tol_root) {
        Ok(ladder) => {
            let slices = per_mode(&ns, inv.jobs, |n| compute_slice(&kernel, &ladder, n, &opts));
            for (n, s) in ns.iter().zip(slices) {
                match s {
                    Ok(s) => rows.extend(records(&kernel, &ladder, &s)),
                    Err(e) => errors.push((Some(*n), e)),
                }
            }
        }
        Err(e) => errors.push((None, e)),
    }

    let diagnostics: Vec<String> = errors
        .iter()
        .map(|(n, e)| match n {
            Some(n) => format!("error n={n}: {e}"),
            None => format!("error: {e}"),
        })
        .collect();
    #[derive(Serialize)]
    struct Doc<'a> {
        version: &'a str,
        records: &'a [SpectrumRecord],
        errors: &'a [String],
    }
    write_output(
        &inv.out_dir,
        "spectrum",
        inv.format,
        || {
            let mut t = Table::new(["n", "branch", "re", "im", "residual", "bracket_lo", "bracket_hi", "oracle_dist"]);
            for r in &rows {
                t.rows.push(vec![
                    r.n.to_string(),
                    r.branch.clone(),
                    num(r.re),
                    num(r.im),
                    num(r.residual),
                    num(r.bracket_lo),
                    num(r.bracket_hi),
                    opt_num(r.oracle_dist),
                ]);
            }
            t.comments = diagnostics.clone();
            t.to_csv()
        },
        || {
            to_json(&Doc {
                version: &CSV_VERSION_LINE[2..],
                records: &rows,
                errors: &diagnostics,
            })
        },
    )?;
    writeln!(stdout, "{} spectrum rows written to {}", rows.len(), inv.out_dir.display())?;
    match errors.into_iter().next() {
        Some((_, e)) => Err(CliError::Solve(e)),
        None => Ok(()),
    }
}

fn all_slices(
    kernel: &ExponentialSumKernel,
    ladder: &RealZeroLadder,
    ns: &[u32],
    inv: &Invocation,
) -> CoreResult<Vec<SpectrumSlice>> {
    let opts = options(inv);
    per_mode(ns, inv.jobs, |n| compute_slice(kernel, ladder, n, &opts))
        .into_iter()
        .collect()
}

#[derive(Serialize)]
struct ClaimRecord {
    claim: String,
    status: String,
    margin: Option<f64>,
    detail: String,
}

pub fn cmd_verify(inv: &Invocation, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (kernel, count) = kernel_and_branches(inv, None)?;
    let ladder = find_mu(&kernel, count, inv.config.tol_root)?;
    let ns: Vec<u32> = (inv.config.n_min..=inv.config.n_max).collect();
    let slices = all_slices(&kernel, &ladder, &ns, inv)?;
    let report = verify_slices(&kernel, &ladder, &slices)?;

    let claims: Vec<ClaimRecord> = report
        .claims
        .iter()
        .map(|c| {
            let (status, detail) = match &c.status {
                ClaimStatus::Pass => ("PASS".to_string(), c.detail.clone()),
                ClaimStatus::Fail => ("FAIL".to_string(), c.detail.clone()),
                ClaimStatus::NotApplicable(why) => ("N/A".to_string(), format!("not applicable: {why}")),
            };
            ClaimRecord {
                claim: c.claim.to_string(),
                status,
                margin: c.margin,
                detail,
            }
        })
        .collect();
    for c in &claims {
        writeln!(stdout, "{:<4} {:<24} margin={:<24} {}", c.status, c.claim, opt_num(c.margin), c.detail)?;
    }
    write_output(
        &inv.out_dir,
        "verify",
        inv.format,
        || {
            let mut t = Table::new(["claim", "status", "margin", "detail"]);
            for c in &claims {
                t.rows.push(vec![c.claim.clone(), c.status.clone(), opt_num(c.margin), c.detail.clone()]);
            }
            t.to_csv()
        },
        || to_json(&claims),
    )?;
    if report.all_passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = claims.iter().filter(|c| c.status == "FAIL").map(|c| c.claim.as_str()).collect();
        Err(CliError::ClaimsFailed(format!("claims failed: {}", failed.join(", "))))
    }
}

pub fn cmd_simulate(inv: &Invocation, stdout: &mut dyn Write) -> Result<(), CliError> {
    let kernel = inv.config.kernel.instantiate()?;
    let sim = inv
        .config
        .simulate
        .as_ref()
        .ok_or_else(|| CliError::Config("simulate needs a [simulate] section".into()))?;
    if let Some(x) = sim.x_samples.iter().find(|x| !(0.0..=std::f64::consts::PI).contains(*x)) {
        return Err(CliError::Config(format!("x sample {x} outside [0, pi]")));
    }
    if !(sim.tail_energy >= 0.0) {
        return Err(CliError::Config("tail_energy must be >= 0".into()));
    }
    let grid = uniform_grid(sim.t_end, sim.samples).map_err(|e| CliError::Config(e.to_string()))?;
    let ns: Vec<u32> = (1..=sim.xi.len() as u32).collect();
    let modes = per_mode(&ns, inv.jobs, |n| {
        simulate_mode(&kernel, n, sim.xi[n as usize - 1], &grid, inv.config.tol_integrator)
    })
    .into_iter()
    .collect::<CoreResult<Vec<ModeTrajectory>>>()?;

    let alpha = kernel.alpha();
    let exact = |m: &ModeTrajectory, t: f64| m.xi * (alpha * f64::from(m.n) * t).cos();
    let closed_form = kernel.is_constant();
    let field = (!sim.x_samples.is_empty())
        .then(|| assemble_field(&grid, modes.clone(), &sim.x_samples, sim.tail_energy));

    #[derive(Serialize)]
    struct ModeDoc<'a> {
        n: u32,
        xi: f64,
        theta: &'a [f64],
        exact: Option<Vec<f64>>,
        max_local_error: f64,
    }
    #[derive(Serialize)]
    struct FieldDoc<'a> {
        x: &'a [f64],
        values: &'a [Vec<f64>],
        tail_bound: f64,
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        version: &'a str,
        t: &'a [f64],
        modes: Vec<ModeDoc<'a>>,
        field: Option<FieldDoc<'a>>,
    }

    write_output(
        &inv.out_dir,
        "trajectories",
        inv.format,
        || {
            let mut cols = vec!["t".to_string()];
            cols.extend(modes.iter().map(|m| format!("theta_{}", m.n)));
            if closed_form {
                cols.extend(modes.iter().map(|m| format!("exact_{}", m.n)));
            }
            let mut t = Table::new(cols);
            for (j, &tj) in grid.iter().enumerate() {
                let mut row = vec![num(tj)];
                row.extend(modes.iter().map(|m| num(m.theta[j])));
                if closed_form {
                    row.extend(modes.iter().map(|m| num(exact(m, tj))));
                }
                t.rows.push(row);
            }
            t.to_csv()
        },
        || {
            to_json(&Doc {
                version: &CSV_VERSION_LINE[2..],
                t: &grid,
                modes: modes
                    .iter()
                    .map(|m| ModeDoc {
                        n: m.n,
                        xi: m.xi,
                        theta: &m.theta,
                        exact: closed_form.then(|| grid.iter().map(|&t| exact(m, t)).collect()),
                        max_local_error: m.stats.local_errors.iter().copied().fold(0.0, f64::max),
                    })
                    .collect(),
                field: field.as_ref().and_then(|f| {
                    f.field.as_ref().map(|s| FieldDoc {
                        x: &s.x,
                        values: &s.values,
                        tail_bound: f.tail_bound,
                    })
                }),
            })
        },
    )?;
    if inv.format == crate::config::Format::Csv {
        if let Some(f) = field.as_ref().and_then(|r| r.field.as_ref().map(|s| (s, r.tail_bound))) {
            let (samples, tail_bound) = f;
            let mut cols = vec!["t".to_string()];
            cols.extend(samples.x.iter().map(|x| format!("x={}", num(*x))));
            let mut t = Table::new(cols);
            for (j, &tj) in grid.iter().enumerate() {
                let mut row = vec![num(tj)];
                row.extend(samples.values[j].iter().map(|v| num(*v)));
                t.rows.push(row);
            }
            t.comments.push(format!("l2_tail_bound = {}", num(tail_bound)));
            std::fs::write(inv.out_dir.join("field.csv"), t.to_csv())?;
        }
    }

    for m in &modes {
        write!(stdout, "mode {}: theta(t_end) = {}", m.n, num(*m.theta.last().unwrap()))?;
        if closed_form {
            let dev = grid
                .iter()
                .zip(&m.theta)
                .map(|(&t, th)| (th - exact(m, t)).abs())
                .fold(0.0, f64::max);
            write!(stdout, ", max closed-form deviation = {}", num(dev))?;
        }
        writeln!(stdout)?;
    }
    Ok(())
}

pub fn cmd_sweep(inv: &Invocation, stdout: &mut dyn Write) -> Result<(), CliError> {
    let ns = doublings(inv.config.n_min, inv.config.n_max);
    if ns.len() < 4 {
        return Err(CliError::Config(format!(
            "insufficient doublings: n in {}..={} gives {:?}, need at least 3 doublings",
            inv.config.n_min, inv.config.n_max, ns
        )));
    }
    let j = inv
        .config
        .sweep
        .as_ref()
        .and_then(|s| s.j)
        .or((inv.config.branches >= 1).then_some(1));
    if j == Some(0) {
        return Err(CliError::Config("sweep.j must be >= 1".into()));
    }
    let (kernel, count) = kernel_and_branches(inv, j)?;
    let ladder = find_mu(&kernel, count, inv.config.tol_root)?;
    let slices = all_slices(&kernel, &ladder, &ns, inv)?;
    let table = sweep_table(&kernel, &ladder, &slices, j)?;

    #[derive(Serialize)]
    struct Row {
        n: u32,
        pair_rel_gap: f64,
        branch_gap_j: Option<f64>,
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        version: &'a str,
        j: Option<usize>,
        rows: Vec<Row>,
        pair_decreasing: bool,
        branch_decreasing: bool,
    }
    write_output(
        &inv.out_dir,
        "sweep",
        inv.format,
        || {
            let mut t = Table::new(["n", "pair_rel_gap", "branch_gap_j"]);
            for r in &table.rows {
                t.rows.push(vec![r.n.to_string(), num(r.pair_rel_gap), opt_num(r.branch_gap)]);
            }
            t.comments.push(match j {
                Some(j) => format!("j = {j}"),
                None => "j = none".into(),
            });
            t.to_csv()
        },
        || {
            to_json(&Doc {
                version: &CSV_VERSION_LINE[2..],
                j,
                rows: table
                    .rows
                    .iter()
                    .map(|r| Row {
                        n: r.n,
                        pair_rel_gap: r.pair_rel_gap,
                        branch_gap_j: r.branch_gap,
                    })
                    .collect(),
                pair_decreasing: table.pair_decreasing,
                branch_decreasing: table.branch_decreasing,
            })
        },
    )?;
    for r in &table.rows {
        writeln!(stdout, "n = {:>6}  pair_rel_gap = {}  branch_gap = {}", r.n, num(r.pair_rel_gap), opt_num(r.branch_gap))?;
    }
    if table.pair_decreasing && table.branch_decreasing {
        Ok(())
    } else {
        Err(CliError::ClaimsFailed(format!(
            "sweep not monotone: pair decreasing = {}, branch decreasing = {}",
            table.pair_decreasing, table.branch_decreasing
        )))
    }
}
