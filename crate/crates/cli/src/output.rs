//! CSV, TSV and JSON writers. Everything is written after reduction by a single caller.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use wavedens::risk::RateCheck;
use wavedens::{DensityModel, RiskReport, SelectionReport};

use crate::experiments::{Curve, FigureData};

/// File-name-safe form of a model spec: `mix:0.5,0,1,4,1` becomes `mix_0.5_0_1_4_1`.
pub fn model_tag(model: &DensityModel) -> String {
    model.to_string().replace([':', ','], "_")
}

#[derive(Serialize)]
struct TableRow<'a> {
    model: &'a str,
    mise: f64,
    mise_sd: Option<f64>,
    selected_mode: u32,
}

#[derive(Serialize)]
struct MiseRow<'a> {
    model: &'a str,
    mise: f64,
}

#[derive(Serialize)]
struct RateRow {
    n: usize,
    mise: f64,
    mise_sd: Option<f64>,
    selected_mode: u32,
}

#[derive(Serialize)]
struct IseRow {
    rep: usize,
    ise: f64,
    selected: u32,
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok((path, BufWriter::new(file)))
}

fn write_rows<T: Serialize>(
    dir: &Path,
    name: &str,
    delimiter: u8,
    rows: impl IntoIterator<Item = T>,
) -> Result<PathBuf> {
    let (path, file) = create(dir, name)?;
    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(file);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let (path, mut file) = create(dir, name)?;
    serde_json::to_writer_pretty(&mut file, value)?;
    file.write_all(b"\n")?;
    file.flush()
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// `table1.csv` with `model,mise,mise_sd,selected_mode` and `table1.json` with the full reports.
pub fn write_table1(dir: &Path, reports: &[RiskReport]) -> Result<Vec<PathBuf>> {
    let rows = reports.iter().map(|r| TableRow {
        model: &r.settings.model,
        mise: r.mise_mean,
        mise_sd: r.mise_sd,
        selected_mode: r.selected_mode(),
    });
    Ok(vec![
        write_rows(dir, "table1.csv", b',', rows)?,
        write_json(dir, "table1.json", &reports)?,
    ])
}

/// `<tag>_report.json` and the one-row `<tag>_mise.csv`.
pub fn write_report(dir: &Path, model: &DensityModel, report: &RiskReport) -> Result<Vec<PathBuf>> {
    let tag = model_tag(model);
    let row = MiseRow {
        model: &report.settings.model,
        mise: report.mise_mean,
    };
    Ok(vec![
        write_json(dir, &format!("{tag}_report.json"), report)?,
        write_rows(dir, &format!("{tag}_mise.csv"), b',', [row])?,
    ])
}

pub fn write_selection(
    dir: &Path,
    model: &DensityModel,
    selection: &SelectionReport,
) -> Result<PathBuf> {
    write_json(
        dir,
        &format!("{}_selection.json", model_tag(model)),
        selection,
    )
}

fn write_curve(dir: &Path, name: &str, curve: &Curve, middle: &str) -> Result<PathBuf> {
    let (path, file) = create(dir, name)?;
    let mut w = csv::WriterBuilder::new().delimiter(b'\t').from_writer(file);
    w.write_record(["x", middle, "true_density"])?;
    for ((x, e), t) in curve.x.iter().zip(&curve.estimate).zip(&curve.truth) {
        w.serialize((x, e, t))?;
    }
    w.flush()
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// `<tag>_estimate.tsv`: `x`, `estimate`, `true_density`.
pub fn write_grid(dir: &Path, model: &DensityModel, curve: &Curve) -> Result<PathBuf> {
    write_curve(
        dir,
        &format!("{}_estimate.tsv", model_tag(model)),
        curve,
        "estimate",
    )
}

/// `<tag>_figure.tsv` (`x`, `mean_estimate`, `true_density`) and `<tag>_ise.tsv` (`rep`, `ise`, `selected`).
pub fn write_figure(dir: &Path, fig: &FigureData) -> Result<Vec<PathBuf>> {
    let tag = model_tag(&fig.model);
    let rows = fig
        .report
        .ise
        .iter()
        .zip(&fig.report.selected)
        .enumerate()
        .map(|(rep, (&ise, &selected))| IseRow { rep, ise, selected });
    Ok(vec![
        write_curve(
            dir,
            &format!("{tag}_figure.tsv"),
            &fig.curve,
            "mean_estimate",
        )?,
        write_rows(dir, &format!("{tag}_ise.tsv"), b'\t', rows)?,
    ])
}

/// `<tag>_rates.csv` (`n,mise,mise_sd,selected_mode`) and `<tag>_rates.json` with the slope.
pub fn write_rates(dir: &Path, model: &DensityModel, rates: &RateCheck) -> Result<Vec<PathBuf>> {
    let tag = model_tag(model);
    let rows = rates.reports.iter().map(|r| RateRow {
        n: r.settings.n,
        mise: r.mise_mean,
        mise_sd: r.mise_sd,
        selected_mode: r.selected_mode(),
    });
    Ok(vec![
        write_rows(dir, &format!("{tag}_rates.csv"), b',', rows)?,
        write_json(dir, &format!("{tag}_rates.json"), rates)?,
    ])
}
