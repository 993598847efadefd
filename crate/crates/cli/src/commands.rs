use std::ops::ControlFlow;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use bcclab::alist::{serialize_alist, Sidecar};
use bcclab::construct::{girth, girth_through};
use bcclab::montecarlo::{run_sweep_resumable, Checkpoint, CodedLink};
use bcclab::secrecy::{plot_rows, SecurityReport};
use bcclab::FrameSimulator;

use crate::config::{BuiltCode, ExperimentConfig, SchemeConfig};
use crate::output::{
    read_json, table_row, write_json, CurvesFile, LayoutSummary, Paths, Provenance, ReportFile, SidecarFile,
    TABLE_HEADER,
};
use crate::{usage, Common, Failure};

fn load(common: &Common) -> Result<(ExperimentConfig, Paths), Failure> {
    let mut config = ExperimentConfig::load(&common.config).map_err(usage)?;
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    let dir = common
        .out
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let paths = Paths::new(dir, &config.name);
    Ok((config, paths))
}

fn build(config: &ExperimentConfig) -> Result<Vec<BuiltCode>, Failure> {
    config.validate().map_err(usage)?;
    config.build_codes().map_err(Failure::Runtime)
}

fn link(codes: Vec<BuiltCode>) -> anyhow::Result<CodedLink> {
    let mut codes = codes.into_iter().map(|b| b.code);
    match (codes.next(), codes.next()) {
        (Some(code), None) => Ok(CodedLink::uep(code)?),
        (Some(public), Some(secret)) => Ok(CodedLink::two_codes(public, secret)?),
        _ => Err(anyhow!("scheme has no codes")),
    }
}

fn histogram(pairs: &[(usize, usize)]) -> String {
    pairs.iter().map(|(d, c)| format!("{d}:{c}")).collect::<Vec<_>>().join(" ")
}

pub fn construct(common: &Common, pc1_fraction: Option<f64>) -> Result<(), Failure> {
    let (mut config, paths) = load(common)?;
    if let Some(f) = pc1_fraction {
        match &mut config.scheme {
            SchemeConfig::Uep { pc1_fraction, .. } => *pc1_fraction = f,
            SchemeConfig::TwoCodes { .. } => {
                return Err(usage(anyhow!("--pc1-fraction applies to UEP schemes only")));
            }
        }
    }
    let codes = build(&config)?;
    paths.ensure_dir()?;
    let provenance = Provenance::of(&config);
    for built in &codes {
        let code = &built.code;
        let alist_path = paths.alist(built.role);
        std::fs::write(&alist_path, serialize_alist(code))?;
        let sidecar = SidecarFile {
            sidecar: Sidecar::for_code(code, built.spec.clone())?,
            provenance: provenance.clone(),
        };
        write_json(&crate::config::sidecar_path(&alist_path), &sidecar)?;
        let counts = code.class_counts().expect("built codes carry classes");
        println!("{} ({}): n={} k={} r={}", config.name, built.role, code.n(), code.k(), code.r());
        println!("  classes: k1={} k2={} r={}", counts.k1, counts.k2, counts.r);
        println!("  info degrees: {}", histogram(&code.degree_histogram(0..code.k())));
        println!("  redundancy degrees: {}", histogram(&code.degree_histogram(code.k()..code.n())));
        println!("  check degrees: {}", histogram(&code.check_histogram()));
        println!(
            "  girth: {} (information columns: {})",
            girth(code.h()),
            girth_through(code.h(), 0..code.k())
        );
        println!("  wrote {}", alist_path.display());
    }
    Ok(())
}

pub fn simulate(
    common: &Common,
    workers: Option<usize>,
    min_errors: Option<u64>,
    max_frames: Option<u64>,
    stop_after: Option<usize>,
) -> Result<(), Failure> {
    let (mut config, paths) = load(common)?;
    if let Some(m) = min_errors {
        config.stop.min_errors = m;
    }
    if let Some(m) = max_frames {
        config.stop.max_frames = m;
    }
    let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let sim_config = config.sim_config(workers).map_err(usage)?;
    let codes = build(&config)?;
    let code_hashes: Vec<String> = codes.iter().map(|b| b.code.fingerprint()).collect();
    let link = link(codes)?;
    paths.ensure_dir()?;
    let provenance = Provenance::of(&config);
    let checkpoint = paths.checkpoint();
    let done = Checkpoint::load(&checkpoint, &provenance.config_hash)?;
    if !done.is_empty() {
        eprintln!("resuming: {} of {} points done", done.len(), sim_config.snr_grid.len());
    }
    let mut new_points = 0;
    let mut seen: Vec<f64> = done.iter().map(|p| p.gamma_db).collect();
    let result = run_sweep_resumable(&link, &sim_config, done, |points| {
        new_points += 1;
        let fresh = points.iter().find(|p| !seen.contains(&p.gamma_db));
        if let Some(p) = fresh {
            seen.push(p.gamma_db);
            eprintln!(
                "  {:6.2} dB: {} frames, errors P/Pp/Ps = {}/{}/{}{}",
                p.gamma_db,
                p.frames,
                p.errors[0],
                p.errors[1],
                p.errors[2],
                if p.low_confidence { " (low confidence)" } else { "" }
            );
        }
        Checkpoint::save(&checkpoint, &provenance.config_hash, points)
            .map_err(|e| bcclab::Error::InvalidConfig(format!("checkpoint: {e}")))?;
        Ok(if stop_after.is_some_and(|s| new_points >= s) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        })
    })?;
    let Some(result) = result else {
        eprintln!("stopped after {new_points} new points; rerun to resume");
        return Ok(());
    };
    let csv = format!("{}{}", provenance.csv_header(), result.to_csv());
    std::fs::write(paths.curves_csv(), csv)?;
    let file = CurvesFile {
        provenance,
        config,
        code_hashes,
        layout: LayoutSummary::from(link.layout()),
        result,
    };
    write_json(&paths.curves_json(), &file)?;
    std::fs::remove_file(&checkpoint).ok();
    println!("wrote {}", paths.curves_csv().display());
    Ok(())
}

pub fn analyze(common: &Common, delta: Option<f64>, eta: Option<f64>, l_max: Option<u32>) -> Result<(), Failure> {
    let (mut config, paths) = load(common)?;
    config.delta = delta.unwrap_or(config.delta);
    config.eta = eta.unwrap_or(config.eta);
    config.l_max = l_max.unwrap_or(config.l_max);
    config.validate().map_err(usage)?;
    let curves: CurvesFile = read_json(&paths.curves_json()).context("run `simulate` first")?;
    // the stopping rule may have been overridden on the simulate command line
    config.stop = curves.config.stop;
    let codes = build(&config)?;
    let code_hashes: Vec<String> = codes.iter().map(|b| b.code.fingerprint()).collect();
    if code_hashes != curves.code_hashes {
        return Err(usage(anyhow!(
            "{} was simulated with different codes than this configuration describes",
            paths.curves_json().display()
        )));
    }
    let result = &curves.result;
    let report = SecurityReport::analyze(
        curves.layout.scheme,
        curves.layout.n,
        &result.secret,
        &result.public,
        config.delta,
        config.eta,
        config.l_max,
    )?;
    let provenance = Provenance::of(&config);
    let mut plot = provenance.csv_header();
    plot.push_str("series,gamma_db,p\n");
    for row in plot_rows(&result.public, &result.secret, report.l)? {
        plot.push_str(&format!("{},{},{:e}\n", row.series, row.gamma_db, row.p));
    }
    std::fs::write(paths.plot(), plot)?;
    write_json(
        &paths.report(),
        &ReportFile {
            provenance,
            code_hashes,
            report: report.clone(),
        },
    )?;
    println!("{TABLE_HEADER}");
    println!("{}", table_row(&report));
    if report.extrapolated {
        println!("note: a threshold relies on a zero-error bound");
    }
    Ok(())
}

pub fn report(files: &[PathBuf]) -> Result<(), Failure> {
    println!("{TABLE_HEADER}");
    for path in files {
        let file: ReportFile = read_json(Path::new(path)).map_err(usage)?;
        println!("{}", table_row(&file.report));
    }
    Ok(())
}
