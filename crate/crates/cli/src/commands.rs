use std::io::Write;
use std::path::Path;

use qdcomp_core::codes::{
    cq_scheme, huffman_with, kraft_converse, kraft_sum, optimal_length_of_spectrum, ClassicalCode,
};
use qdcomp_core::ensembles::{builtin, load_model, EnsembleModel};
use qdcomp_core::numkit::{
    density_spectrum, entropy_of_spectrum, shannon_entropy_with, ComplexVector,
};
use qdcomp_core::qmc::{
    default_kmax, dynamical_entropy as compute_report, EntropyOptions, EntropyReport, EntropyRow,
};
use serde::Serialize;
use serde_json::json;

use crate::format::{sig6, table};
use crate::golden;
use crate::{CliError, Format, RunConfig};

type CliResult = Result<(), CliError>;

fn emit(out: &mut dyn Write, text: &str) -> CliResult {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> CliResult {
    let text = serde_json::to_string_pretty(value).expect("output serializes");
    emit(out, &format!("{text}\n"))
}

/// Loads and validates the model. Failed invariants are input errors,
/// except a non-stationary start, which is only reported.
fn model(config: &RunConfig) -> Result<EnsembleModel, CliError> {
    let path = config
        .model
        .as_ref()
        .ok_or_else(|| CliError::Usage("this command needs --model FILE".into()))?;
    let model = load_model(path)?;
    check_model(&model, config)?;
    Ok(model)
}

fn check_model(model: &EnsembleModel, config: &RunConfig) -> CliResult {
    let report = model.validate(&config.tol);
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.passed && c.name != "stationarity Pp = p")
        .map(|c| format!("{} (residual {:e}, {})", c.name, c.residual, c.detail))
        .collect();
    if !failed.is_empty() {
        return Err(CliError::Usage(format!(
            "invalid model: {}",
            failed.join("; ")
        )));
    }
    if report.stationarity_warning() {
        eprintln!(
            "qdcomp: warning: the initial distribution is not stationary; \
             joint correlations then differ from the ensemble states"
        );
    }
    Ok(())
}

fn row_for(model: &EnsembleModel, k: usize, config: &RunConfig) -> Result<EntropyRow, CliError> {
    let rho = model.ensemble_state(k, &config.caps)?;
    let spectrum = density_spectrum(&rho, &config.tol)?;
    drop(rho);
    let entropy = entropy_of_spectrum(&spectrum, &config.tol);
    let el = optimal_length_of_spectrum(&spectrum, &config.tol)?;
    Ok(EntropyRow {
        k,
        entropy,
        entropy_per_symbol: entropy / k as f64,
        optimal_length_per_symbol: Some(el / k as f64),
        rank: spectrum.iter().filter(|&&l| l >= config.tol.zero).count(),
    })
}

fn csv_line(row: &EntropyRow, with_length: bool) -> String {
    let el = match (with_length, row.optimal_length_per_symbol) {
        (true, Some(v)) => v.to_string(),
        _ => String::new(),
    };
    format!(
        "{},{},{},{}\n",
        row.k, row.entropy, row.entropy_per_symbol, el
    )
}

const CSV_HEADER: &str = "k,S,S_per_k,EL_star_k\n";

pub fn entropy(config: &RunConfig, out: &mut dyn Write) -> CliResult {
    let model = model(config)?;
    let k = config.k.unwrap_or(1);
    let rho = model.ensemble_state(k, &config.caps)?;
    let s = entropy_of_spectrum(&density_spectrum(&rho, &config.tol)?, &config.tol);
    match config.format {
        Format::Csv => emit(out, &format!("{CSV_HEADER}{k},{s},{},\n", s / k as f64)),
        Format::Json => emit_json(out, &json!({ "k": k, "S": s, "S_per_k": s / k as f64 })),
        Format::Table => emit(
            out,
            &table(
                &["k", "S", "S_per_k"],
                &[vec![k.to_string(), sig6(s), sig6(s / k as f64)]],
            ),
        ),
    }
}

pub fn optimal_length(config: &RunConfig, out: &mut dyn Write) -> CliResult {
    let model = model(config)?;
    let k = config.k.unwrap_or(1);
    let row = row_for(&model, k, config)?;
    let el_k = row.optimal_length_per_symbol.expect("computed");
    let holds = row.sandwich_holds(&config.tol).expect("computed");
    match config.format {
        Format::Csv => emit(out, &format!("{CSV_HEADER}{}", csv_line(&row, true))),
        Format::Json => emit_json(
            out,
            &json!({
                "k": k,
                "S": row.entropy,
                "S_per_k": row.entropy_per_symbol,
                "EL_star": el_k * k as f64,
                "EL_star_k": el_k,
                "sandwich_holds": holds,
            }),
        ),
        Format::Table => {
            let mut text = table(
                &["k", "S", "S_per_k", "EL_star", "EL_star_k"],
                &[vec![
                    k.to_string(),
                    sig6(row.entropy),
                    sig6(row.entropy_per_symbol),
                    sig6(el_k * k as f64),
                    sig6(el_k),
                ]],
            );
            text.push_str(&format!(
                "S/k <= EL*_k < S/k + 1/k: {}\n",
                if holds { "PASS" } else { "FAIL" }
            ));
            emit(out, &text)
        }
    }
}

fn report_table(report: &EntropyReport) -> String {
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                sig6(r.entropy),
                sig6(r.entropy_per_symbol),
                r.optimal_length_per_symbol
                    .map(sig6)
                    .unwrap_or_else(|| "-".into()),
            ]
        })
        .collect();
    let mut text = table(&["k", "S", "S_per_k", "EL_star_k"], &rows);
    text.push_str(&format!(
        "tail max of S_per_k (last {}): {}\n",
        report.tail_window,
        sig6(report.tail_max)
    ));
    text.push_str(&format!(
        "strictly decreasing: {}\n",
        if report.strictly_decreasing {
            "yes"
        } else {
            "no"
        }
    ));
    if let Some(holds) = report.sandwich_holds {
        text.push_str(&format!(
            "S/k <= EL*_k < S/k + 1/k: {}\n",
            if holds { "PASS" } else { "FAIL" }
        ));
    }
    text
}

fn write_report(report: &EntropyReport, format: Format, out: &mut dyn Write) -> CliResult {
    match format {
        Format::Csv => emit(out, &report.to_csv()),
        Format::Json => emit(out, &format!("{}\n", report.to_json())),
        Format::Table => emit(out, &report_table(report)),
    }
}

fn options(config: &RunConfig, tail: usize, lengths: bool) -> EntropyOptions {
    EntropyOptions {
        caps: config.caps,
        tol: config.tol,
        tail_window: tail,
        optimal_lengths: lengths,
    }
}

pub fn dynamical_entropy(
    config: &RunConfig,
    tail: usize,
    lengths: bool,
    out: &mut dyn Write,
) -> CliResult {
    if tail == 0 {
        return Err(CliError::Usage("--tail must be at least 1".into()));
    }
    let model = model(config)?;
    let kmax = config.k.unwrap_or_else(|| default_kmax(&model));
    let report = compute_report(&model, kmax, &options(config, tail, lengths))?;
    write_report(&report, config.format, out)
}

/// One comparison made by `reproduce`.
#[derive(Debug, Clone, Serialize)]
pub struct GoldenCheck {
    pub name: String,
    pub actual: Option<f64>,
    pub criterion: String,
    pub passed: bool,
}

impl GoldenCheck {
    fn new(name: String, expected: f64, actual: f64, tolerance: f64) -> Self {
        Self {
            name,
            actual: Some(actual),
            criterion: format!("expected {expected} ± {tolerance:e}"),
            passed: (actual - expected).abs() <= tolerance,
        }
    }

    fn at_most(name: String, bound: f64, actual: f64) -> Self {
        Self {
            name,
            actual: Some(actual),
            criterion: format!("at most {bound}"),
            passed: actual <= bound,
        }
    }
}

/// Golden comparisons for a built-in example's report.
pub fn golden_checks(name: &str, report: &EntropyReport) -> Vec<GoldenCheck> {
    let mut checks = Vec::new();
    match name {
        "trine" => {
            for (r, &g) in report.rows.iter().zip(&golden::TRINE_RATES) {
                checks.push(GoldenCheck::new(
                    format!("S/k at k={}", r.k),
                    g,
                    r.entropy_per_symbol,
                    golden::TRINE_TOLERANCE,
                ));
            }
            checks.push(GoldenCheck {
                name: format!("S/k strictly decreasing over k=1..{}", report.rows.len()),
                actual: None,
                criterion: "holds".into(),
                passed: report.strictly_decreasing,
            });
            if let Some(last) = report
                .rows
                .iter()
                .find(|r| r.k == golden::TRINE_RATES.len())
            {
                checks.push(GoldenCheck::at_most(
                    format!("S/k at k={}", last.k),
                    golden::TRINE_FINAL_BOUND,
                    last.entropy_per_symbol,
                ));
            }
        }
        "bell" => {
            for r in &report.rows {
                checks.push(GoldenCheck::new(
                    format!("S at k={}", r.k),
                    r.k as f64,
                    r.entropy,
                    golden::BELL_TOLERANCE,
                ));
                if let Some(el) = r.optimal_length_per_symbol {
                    checks.push(GoldenCheck::new(
                        format!("EL*_k at k={}", r.k),
                        1.0,
                        el,
                        golden::BELL_TOLERANCE,
                    ));
                }
            }
        }
        _ => {
            let first = report.rows[0].entropy_per_symbol;
            for r in &report.rows[1..] {
                checks.push(GoldenCheck::new(
                    format!("S/k at k={} equals S at k=1", r.k),
                    first,
                    r.entropy_per_symbol,
                    golden::IID_DEMO_TOLERANCE,
                ));
            }
        }
    }
    checks
}

pub fn reproduce(config: &RunConfig, name: &str, out: &mut dyn Write) -> CliResult {
    let model = builtin::by_name(name)
        .ok_or_else(|| CliError::Usage(format!("unknown example {name:?}")))?;
    let full = match name {
        "trine" => golden::TRINE_RATES.len(),
        "bell" => golden::BELL_KMAX,
        _ => golden::IID_DEMO_KMAX,
    };
    let kmax = config.k.unwrap_or(full);
    if kmax > full {
        return Err(CliError::Usage(format!(
            "{name} has golden values up to k={full}"
        )));
    }
    let report = compute_report(&model, kmax, &options(config, 3, true))?;
    let checks = golden_checks(name, &report);
    let passed = checks.iter().all(|c| c.passed);
    match config.format {
        Format::Csv => write_report(&report, Format::Csv, out)?,
        Format::Json => emit_json(
            out,
            &json!({ "example": name, "report": report, "checks": checks, "passed": passed }),
        )?,
        Format::Table => {
            let mut text = report_table(&report);
            for c in &checks {
                let value = c
                    .actual
                    .map(|v| format!("{}, ", sig6(v)))
                    .unwrap_or_default();
                text.push_str(&format!(
                    "{} {}: {value}{}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.criterion
                ));
            }
            text.push_str(&format!(
                "reproduce {name}: {} ({} checks)\n",
                if passed { "PASS" } else { "FAIL" },
                checks.len()
            ));
            emit(out, &text)?;
        }
    }
    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Err(CliError::Mismatch(format!("{name}: {}", failed.join(", "))))
    }
}

fn code_rows(code: &ClassicalCode) -> Vec<Vec<String>> {
    code.codewords()
        .iter()
        .map(|(i, w)| vec![i.to_string(), w.len().to_string(), w.clone()])
        .collect()
}

fn code_csv(code: &ClassicalCode) -> String {
    let mut text = String::from("symbol,length,codeword\n");
    for (i, w) in code.codewords() {
        text.push_str(&format!("{i},{},{w}\n", w.len()));
    }
    text
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn kraft(
    config: &RunConfig,
    lengths: Option<&[usize]>,
    code: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult {
    match (lengths, code) {
        (Some(lengths), None) => {
            if lengths.is_empty() || lengths.contains(&0) {
                return Err(CliError::Usage("lengths must be positive integers".into()));
            }
            let sum = kraft_sum(lengths);
            let canonical = if sum <= 1.0 {
                Some(kraft_converse(lengths)?)
            } else {
                None
            };
            match config.format {
                Format::Json => emit_json(
                    out,
                    &json!({
                        "lengths": lengths,
                        "kraft_sum": sum,
                        "feasible": canonical.is_some(),
                        "canonical_code": canonical.as_ref().map(ClassicalCode::to_json),
                    }),
                ),
                Format::Csv => match &canonical {
                    Some(c) => emit(out, &code_csv(c)),
                    None => emit(out, "symbol,length,codeword\n"),
                },
                Format::Table => {
                    let mut text = format!(
                        "Kraft sum: {}\nfeasible: {}\n",
                        sig6(sum),
                        yes_no(canonical.is_some())
                    );
                    if let Some(c) = &canonical {
                        text.push_str("canonical prefix code:\n");
                        text.push_str(&table(&["symbol", "length", "codeword"], &code_rows(c)));
                    }
                    emit(out, &text)
                }
            }
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let code = ClassicalCode::from_json(&text)?;
            let decodable = code.is_uniquely_decodable();
            let quantum_sum = if decodable {
                let n = code.codewords().keys().max().map_or(0, |&m| m + 1);
                let basis: Vec<ComplexVector> =
                    (0..n).map(|i| ComplexVector::basis(n, i)).collect();
                Some(cq_scheme(&code, &basis, &config.tol)?.kraft_sum())
            } else {
                None
            };
            match config.format {
                Format::Json => emit_json(
                    out,
                    &json!({
                        "code": code.to_json(),
                        "kraft_sum": code.kraft_sum(),
                        "prefix_free": code.is_prefix_free(),
                        "uniquely_decodable": decodable,
                        "quantum_kraft_sum": quantum_sum,
                    }),
                ),
                Format::Csv => emit(out, &code_csv(&code)),
                Format::Table => {
                    let mut text = table(&["symbol", "length", "codeword"], &code_rows(&code));
                    text.push_str(&format!(
                        "Kraft sum: {}\nprefix-free: {}\nuniquely decodable: {}\n",
                        sig6(code.kraft_sum()),
                        yes_no(code.is_prefix_free()),
                        yes_no(decodable)
                    ));
                    if let Some(q) = quantum_sum {
                        text.push_str(&format!("c-q scheme Kraft trace: {}\n", sig6(q)));
                    }
                    emit(out, &text)
                }
            }
        }
        _ => Err(CliError::Usage("kraft needs --lengths or --code".into())),
    }
}

pub fn huffman(
    config: &RunConfig,
    pmf: Option<&[f64]>,
    pmf_file: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult {
    let p: Vec<f64> = match (pmf, pmf_file) {
        (Some(p), None) => p.to_vec(),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        _ => return Err(CliError::Usage("huffman needs --pmf or --pmf-file".into())),
    };
    let code = huffman_with(&p, &config.tol)?;
    let expected = code.expected_length(&p)?;
    let h = shannon_entropy_with(&p, &config.tol)?;
    let holds = h <= expected + config.tol.ent && (code.len() == 1 || expected < h + 1.0);
    match config.format {
        Format::Json => emit_json(
            out,
            &json!({
                "pmf": p,
                "code": code.to_json(),
                "lengths": code.lengths(),
                "expected_length": expected,
                "entropy": h,
                "sandwich_holds": holds,
            }),
        ),
        Format::Csv => {
            let mut text = String::from("symbol,probability,length,codeword\n");
            for (i, w) in code.codewords() {
                text.push_str(&format!("{i},{},{},{w}\n", p[*i], w.len()));
            }
            emit(out, &text)
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = code
                .codewords()
                .iter()
                .map(|(i, w)| vec![i.to_string(), sig6(p[*i]), w.len().to_string(), w.clone()])
                .collect();
            let mut text = table(&["symbol", "probability", "length", "codeword"], &rows);
            text.push_str(&format!(
                "expected length: {}\nentropy: {}\nH <= E[l] < H + 1: {}\n",
                sig6(expected),
                sig6(h),
                if holds { "PASS" } else { "FAIL" }
            ));
            emit(out, &text)
        }
    }
}
