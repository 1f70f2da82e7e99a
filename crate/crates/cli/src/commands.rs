use std::io::Write;
use std::path::Path;

use serde::Serialize;

use dimwitness::estimator::{
    experiment_sweep, run_estimator, ConditionTwoAt, EstimatorConfig, EstimatorResult,
};
use dimwitness::numerics::io::{orthogonal_file, parse_operator, parse_vector, unitary_file, Operator};
use dimwitness::numerics::{haar_orthogonal, haar_unitary, CVector, OrthogonalMatrix, SeedStream};
use dimwitness::simulate::{monte_carlo_return_time, sample_outcomes, trajectory_rows, MeasurementProcess};
use dimwitness::witness::{
    exact_sum_complex, exact_sum_real, iterate_fixed, iterate_norms_with, ExactSumReport, Tolerances,
};
use dimwitness::Execution;

use crate::args::*;
use crate::error::CliError;
use crate::manifest::RunManifest;

type Out<'a> = &'a mut dyn Write;

#[derive(Serialize)]
struct WithManifest<'a, T: Serialize> {
    manifest: &'a RunManifest,
    #[serde(flatten)]
    body: T,
}

fn print_json<T: Serialize>(out: Out, manifest: &RunManifest, body: T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&WithManifest { manifest, body }).expect("outputs serialize");
    writeln!(out, "{text}")?;
    Ok(())
}

fn load_operator(manifest: &mut RunManifest, args: &OperatorArgs) -> Result<(Operator, CVector), CliError> {
    let op = parse_operator(&manifest.read_input(&args.matrix)?)?;
    let z = match &args.vector {
        Some(path) => parse_vector(&manifest.read_input(path)?)?,
        None => CVector::basis(op.dim(), 0)?,
    };
    Ok((op, z))
}

fn tolerances(t: &ToleranceArgs) -> Tolerances {
    Tolerances {
        cluster: t.cluster_tol,
        theta: t.theta_tol,
        rank: t.rank_tol,
    }
}

fn process(manifest: &mut RunManifest, args: &OperatorArgs) -> Result<MeasurementProcess, CliError> {
    let (op, z) = load_operator(manifest, args)?;
    Ok(MeasurementProcess::new(op.to_unitary(), z)?)
}

pub fn exact_sum(args: &ExactSumArgs, out: Out) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("exact-sum", args, None);
    let (op, z) = load_operator(&mut manifest, &args.operator)?;
    let tol = tolerances(&args.tolerances);
    let report: ExactSumReport = if args.real {
        let r = match op {
            Operator::Orthogonal(r) => r,
            Operator::Unitary(u) => {
                if u.matrix().iter().any(|c| c.im != 0.0) {
                    return Err(CliError::Input("--real needs a real matrix".into()));
                }
                OrthogonalMatrix::new(u.matrix().map(|c| c.re))?
            }
        };
        exact_sum_real(&r, &z, &tol)?
    } else {
        exact_sum_complex(&op.to_unitary(), &z, &tol)?
    };
    print_json(out, &manifest, report)
}

#[derive(Serialize)]
struct IterateRow {
    n: usize,
    norm_sq: f64,
    partial_sum: f64,
}

pub fn iterate(args: &IterateArgs, out: Out) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("iterate", args, None);
    let (op, z) = load_operator(&mut manifest, &args.operator)?;
    let u = op.to_unitary();
    let series = match args.steps {
        Some(steps) => iterate_fixed(&u, &z, steps)?,
        None => iterate_norms_with(
            &u,
            &z,
            args.tail_tol.unwrap_or(1e-8),
            args.max_steps,
            &tolerances(&args.tolerances),
        )?,
    };
    {
        let mut w = csv::Writer::from_writer(&mut *out);
        for (n, (&norm_sq, &partial_sum)) in series.norms_sq.iter().zip(&series.partial_sums).enumerate() {
            w.serialize(IterateRow { n, norm_sq, partial_sum })?;
        }
        if series.is_empty() {
            w.write_record(["n", "norm_sq", "partial_sum"])?;
        }
        w.flush()?;
    }
    if let Some(rho) = series.contraction_radius {
        writeln!(out, "# contraction_radius: {rho}")?;
    }
    writeln!(out, "# truncation_reason: {}", series.truncation_reason)?;
    manifest.emit_sidecar(args.manifest.manifest.as_deref())
}

pub fn sample(args: &SampleArgs, out: Out) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("sample", args, Some(args.seed.seed));
    let proc = process(&mut manifest, &args.operator)?;
    let outcomes = sample_outcomes(&proc, args.length, &SeedStream::new(args.seed.seed, 0))?;
    writeln!(out, "{outcomes}")?;
    if let Some(path) = &args.trajectory {
        write_csv(path, &trajectory_rows(&outcomes))?;
    }
    manifest.emit_sidecar(args.manifest.manifest.as_deref())
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ReturnTimeOutput {
    count: usize,
    mean: f64,
    std_err: f64,
    complete: bool,
    steps: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<u64>>,
}

pub fn return_time(args: &ReturnTimeArgs, out: Out) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("return-time", args, Some(args.seed.seed));
    let proc = process(&mut manifest, &args.operator)?;
    let stats = monte_carlo_return_time(&proc, args.returns, &SeedStream::new(args.seed.seed, 0), args.step_cap)?;
    let body = ReturnTimeOutput {
        count: stats.count,
        mean: stats.mean,
        std_err: stats.std_err,
        complete: stats.complete,
        steps: stats.steps,
        samples: args.samples.then_some(stats.samples),
    };
    print_json(out, &manifest, body)
}

fn estimator_config(e: &EnsembleArgs, d: usize) -> EstimatorConfig {
    EstimatorConfig {
        ensemble_size: e.m,
        beta: e.beta,
        window: e.s,
        max_steps: e.max_steps,
        dimension: d,
        master_seed: e.seed.seed,
        ceil_clamp: e.ceil_clamp,
        start: None,
        condition_two_at: match e.condition_two_at {
            ConditionTwo::Lagged => ConditionTwoAt::Lagged,
            ConditionTwo::Final => ConditionTwoAt::Final,
        },
        execution: if e.sequential { Execution::Sequential } else { Execution::Parallel },
    }
}

#[derive(Serialize)]
struct EstimateOutput<'a> {
    config: &'a EstimatorConfig,
    result: &'a EstimatorResult,
    final_lower_bounds: Vec<usize>,
}

pub fn estimate(args: &EstimateArgs, out: Out) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("estimate", args, Some(args.ensemble.seed.seed));
    let mut config = estimator_config(&args.ensemble, args.d);
    if let Some(path) = &args.vector {
        let z = parse_vector(&manifest.read_input(path)?)?;
        config.start = Some(z.iter().copied().collect());
    }
    let result = run_estimator(&config)?;
    let body = EstimateOutput {
        config: &config,
        result: &result,
        final_lower_bounds: result.final_lower_bounds(),
    };
    print_json(out, &manifest, body)
}

pub fn sweep(args: &SweepArgs, out: Out) -> Result<(), CliError> {
    let manifest = RunManifest::new("sweep", args, Some(args.ensemble.seed.seed));
    let template = estimator_config(&args.ensemble, args.d_min.max(1));
    let table = experiment_sweep(args.d_min..=args.d_max, args.reps, &template)?;
    {
        let mut w = csv::Writer::from_writer(&mut *out);
        for r in &table.rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    if let Some(path) = &args.summary {
        write_csv(path, &table.summaries())?;
    }
    manifest.emit_sidecar(args.manifest.manifest.as_deref())
}

pub fn haar(args: &HaarArgs, out: Out) -> Result<(), CliError> {
    let stream = SeedStream::new(args.seed.seed, 0);
    let file = if args.real {
        orthogonal_file(&haar_orthogonal(args.d, &stream)?)
    } else {
        unitary_file(&haar_unitary(args.d, &stream)?)
    };
    writeln!(out, "{}", file.to_json())?;
    Ok(())
}
