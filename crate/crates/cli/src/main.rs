//! Command-line front end: spectra tables, solution construction, pointwise
//! evaluation, validation reports, and the hypergeometric identity suite.
//!
//! Output is JSON (default) or CSV on stdout; `--out PATH` additionally
//! writes the identical bytes to a file. Exit status: 0 when all requested
//! checks pass, 1 on a numerical failure (the error is serialized into the
//! report), 2 on input validation problems.

use std::io::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use biheun::frobenius::{evaluate_frobenius, frobenius_coefficients, frobenius_spectrum};
use biheun::hermite::{
    evaluate_hermite_series, evaluate_hermite_series_derivative, evaluate_hermite_series_diag,
    hermite_spectrum, HermiteExpansion,
};
use biheun::hypergeom::{run_identity_suite, CombineNormalization};
use biheun::reduction::{build_ghg_solution, evaluate_combination, HypergeomCombination};
use biheun::validation::{cross_validate, ode_reference_solve, Representation, SampleSpec};
use biheun::{BiconfluentParams, SpectrumResult, ToleranceConfig};

const MAX_LEVEL: usize = 12;

/// Complex scalar parsed from "re,im" (or just "re").
#[derive(Debug, Clone, Copy)]
struct Cx(Complex64);

impl FromStr for Cx {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(',');
        let re = parts
            .next()
            .ok_or("empty complex literal")?
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("bad real part: {}", e))?;
        let im = match parts.next() {
            Some(p) => p
                .trim()
                .parse::<f64>()
                .map_err(|e| format!("bad imaginary part: {}", e))?,
            None => 0.0,
        };
        if parts.next().is_some() {
            return Err("expected at most two comma-separated numbers".into());
        }
        Ok(Cx(Complex64::new(re, im)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct OutputOpts {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Also write the report to this file, bit-identical to stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Override the root-residual tolerance.
    #[arg(long)]
    tol_root: Option<f64>,
    /// Override the series truncation tolerance.
    #[arg(long)]
    tol_series: Option<f64>,
    /// Override the series term cap.
    #[arg(long)]
    max_terms: Option<usize>,
    /// Override the validation tolerance (BIHEUN_TOL_VALIDATE also works).
    #[arg(long)]
    tol_validate: Option<f64>,
}

#[derive(Debug, Parser)]
#[command(name = "biheun", version, about = "Biconfluent Heun equation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Power-series termination spectrum at level N (q1 = 2N implied).
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        p0: Cx,
        #[arg(long, allow_hyphen_values = true)]
        p1: Cx,
        #[arg(long = "N", visible_alias = "n")]
        n: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Hermite-expansion termination spectrum at level N (p0 = -N implied).
    HermiteSpectrum {
        #[arg(long, allow_hyphen_values = true)]
        p1: Cx,
        #[arg(long, allow_hyphen_values = true)]
        q1: Cx,
        #[arg(long = "N", visible_alias = "n")]
        n: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Build the combined generalized-hypergeometric solution for one
    /// admissible accessory parameter.
    Construct {
        #[arg(long, allow_hyphen_values = true)]
        p1: Cx,
        #[arg(long, allow_hyphen_values = true)]
        q1: Cx,
        #[arg(long = "N", visible_alias = "n")]
        n: usize,
        /// Index into the sorted admissible q0 list.
        #[arg(long, default_value_t = 0)]
        root_index: usize,
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        s: Cx,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Evaluate every applicable representation at sample points.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        p0: Cx,
        #[arg(long, allow_hyphen_values = true)]
        p1: Cx,
        #[arg(long, allow_hyphen_values = true)]
        q0: Cx,
        #[arg(long, allow_hyphen_values = true)]
        q1: Cx,
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        s: Cx,
        /// Single evaluation point; may repeat.
        #[arg(long = "z", allow_hyphen_values = true)]
        points: Vec<Cx>,
        /// Disc sampling instead of explicit points: center.
        #[arg(long, allow_hyphen_values = true)]
        center: Option<Cx>,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 12)]
        count: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Cross-validate the finite representations of one admissible case
    /// against reference integration of the equation.
    Validate {
        #[arg(long, allow_hyphen_values = true)]
        p1: Cx,
        #[arg(long, allow_hyphen_values = true)]
        q1: Cx,
        #[arg(long = "N", visible_alias = "n")]
        n: usize,
        #[arg(long, default_value_t = 0)]
        root_index: usize,
        /// Validate this accessory parameter instead of the spectrum root
        /// (the coefficient vector stays that of the nearest root, so an
        /// off-spectrum value is expected to fail).
        #[arg(long, allow_hyphen_values = true)]
        q0: Option<Cx>,
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        s: Cx,
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        center: Cx,
        #[arg(long, default_value_t = 0.6)]
        radius: f64,
        #[arg(long, default_value_t = 16)]
        count: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run the contiguous-shift identity suite on random draws.
    IdentityCheck {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0xB1BE)]
        seed: u64,
        /// Pass threshold for every identity deviation.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn tolerances(output: &OutputOpts) -> Result<ToleranceConfig, String> {
    let mut cfg = ToleranceConfig::default();
    if let Some(v) = output.tol_root {
        cfg.tol_root = v;
    }
    if let Some(v) = output.tol_series {
        cfg.tol_series = v;
    }
    if let Some(v) = output.max_terms {
        cfg.max_terms = v;
    }
    if let Ok(env) = std::env::var("BIHEUN_TOL_VALIDATE") {
        cfg.tol_validate = env
            .parse::<f64>()
            .map_err(|e| format!("BIHEUN_TOL_VALIDATE: {}", e))?;
    }
    if let Some(v) = output.tol_validate {
        cfg.tol_validate = v;
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn cx_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn tol_json(cfg: &ToleranceConfig) -> Value {
    json!({
        "tol_root": cfg.tol_root,
        "tol_series": cfg.tol_series,
        "max_terms": cfg.max_terms,
        "tol_validate": cfg.tol_validate,
    })
}

fn base_report(command: &str, cfg: &ToleranceConfig) -> serde_json::Map<String, Value> {
    let mut map = serde_json::Map::new();
    map.insert("command".into(), json!(command));
    map.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    map.insert("tolerances".into(), tol_json(cfg));
    map
}

fn spectrum_json(spec: &SpectrumResult) -> Value {
    json!({
        "n": spec.n_max,
        "char_poly": spec.char_poly.coeffs().iter().map(|&c| cx_json(c)).collect::<Vec<_>>(),
        "roots": spec.admissible_q0.iter().map(|&r| cx_json(r)).collect::<Vec<_>>(),
        "eigenvectors": spec.eigenvectors.iter().map(|ev| json!({
            "values": ev.coefficients.values.iter().map(|&v| cx_json(v)).collect::<Vec<_>>(),
            "normalized_at": ev.normalized_at,
        })).collect::<Vec<_>>(),
    })
}

/// Shared CSV preamble: command, version, and the tolerance block.
fn csv_meta(command: &str, cfg: &ToleranceConfig) -> String {
    format!(
        "meta,command,{}\nmeta,version,{}\nmeta,tol_root,{:e}\nmeta,tol_series,{:e}\nmeta,max_terms,{}\nmeta,tol_validate,{:e}\n",
        command,
        env!("CARGO_PKG_VERSION"),
        cfg.tol_root,
        cfg.tol_series,
        cfg.max_terms,
        cfg.tol_validate
    )
}

fn spectrum_csv(meta: String, spec: &SpectrumResult) -> String {
    let mut out = meta;
    for (k, c) in spec.char_poly.coeffs().iter().enumerate() {
        out.push_str(&format!("char_poly,{},{:.17e},{:.17e}\n", k, c.re, c.im));
    }
    for (i, r) in spec.admissible_q0.iter().enumerate() {
        out.push_str(&format!("root,{},{:.17e},{:.17e}\n", i, r.re, r.im));
    }
    for (i, ev) in spec.eigenvectors.iter().enumerate() {
        for (j, v) in ev.coefficients.values.iter().enumerate() {
            out.push_str(&format!(
                "eigenvector,{},{},{:.17e},{:.17e}\n",
                i, j, v.re, v.im
            ));
        }
    }
    out
}

fn combination_json(comb: &HypergeomCombination) -> Value {
    json!({
        "xi_transform": {"scale": cx_json(comb.params.s), "shift": cx_json(-comb.params.p1 / 2.0)},
        "argument": "xi^2",
        "terms": comb.terms.iter().map(|t| json!({
            "group": t.group.label(),
            "prefactor": cx_json(t.combined.term.prefactor),
            "xi_power": t.combined.term.xi_power,
            "upper": t.combined.term.upper.iter().map(|&u| cx_json(u)).collect::<Vec<_>>(),
            "lower": t.combined.term.lower.iter().map(|&l| cx_json(l)).collect::<Vec<_>>(),
            "lambdas": t.combined.lambdas.iter().map(|&l| cx_json(l)).collect::<Vec<_>>(),
            "normalization": match t.combined.normalization {
                CombineNormalization::SumForm => "sum",
                CombineNormalization::ProductForm => "product",
            },
        })).collect::<Vec<_>>(),
    })
}

fn emit(output: &OutputOpts, text: &str) -> Result<(), String> {
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| e.to_string())?;
    if let Some(path) = &output.out {
        std::fs::write(path, text.as_bytes()).map_err(|e| format!("--out {:?}: {}", path, e))?;
    }
    Ok(())
}

fn emit_json(output: &OutputOpts, report: &serde_json::Map<String, Value>) -> Result<(), String> {
    let mut text =
        serde_json::to_string_pretty(&Value::Object(report.clone())).map_err(|e| e.to_string())?;
    text.push('\n');
    emit(output, &text)
}

fn check_level(n: usize) -> Result<(), String> {
    if n > MAX_LEVEL {
        return Err(format!(
            "N: level {} exceeds the double-precision guard {}",
            n, MAX_LEVEL
        ));
    }
    Ok(())
}

/// Exit 2 diagnostics go to stderr; numerical failures are serialized.
fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();

    match cli.command {
        Command::Spectrum { p0, p1, n, output } => {
            check_level(n)?;
            let cfg = tolerances(&output)?;
            let spec = frobenius_spectrum(p0.0, p1.0, n, &cfg);
            match output.format {
                Format::Json => {
                    let mut report = base_report("spectrum", &cfg);
                    report.insert("p0".into(), cx_json(p0.0));
                    report.insert("p1".into(), cx_json(p1.0));
                    report.insert("q1".into(), cx_json(Complex64::new(2.0 * n as f64, 0.0)));
                    report.insert("spectrum".into(), spectrum_json(&spec));
                    emit_json(&output, &report)?;
                }
                Format::Csv => {
                    let mut meta = csv_meta("spectrum", &cfg);
                    meta.push_str(&format!("meta,n,{}\n", n));
                    emit(&output, &spectrum_csv(meta, &spec))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::HermiteSpectrum { p1, q1, n, output } => {
            check_level(n)?;
            let cfg = tolerances(&output)?;
            let spec = hermite_spectrum(p1.0, q1.0, n, &cfg);
            match output.format {
                Format::Json => {
                    let mut report = base_report("hermite-spectrum", &cfg);
                    report.insert("p0".into(), cx_json(Complex64::new(-(n as f64), 0.0)));
                    report.insert("p1".into(), cx_json(p1.0));
                    report.insert("q1".into(), cx_json(q1.0));
                    report.insert("spectrum".into(), spectrum_json(&spec));
                    emit_json(&output, &report)?;
                }
                Format::Csv => {
                    let mut meta = csv_meta("hermite-spectrum", &cfg);
                    meta.push_str(&format!("meta,n,{}\n", n));
                    emit(&output, &spectrum_csv(meta, &spec))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Construct {
            p1,
            q1,
            n,
            root_index,
            s,
            output,
        } => {
            check_level(n)?;
            let cfg = tolerances(&output)?;
            if s.0.norm() == 0.0 {
                return Err("s: must be nonzero".into());
            }
            let spec = hermite_spectrum(p1.0, q1.0, n, &cfg);
            if root_index >= spec.admissible_q0.len() {
                return Err(format!(
                    "root-index: {} out of range ({} roots at N = {})",
                    root_index,
                    spec.admissible_q0.len(),
                    n
                ));
            }
            let exp = HermiteExpansion::from_spectrum_root(&spec, root_index, p1.0, q1.0, s.0)
                .map_err(|e| e.to_string())?;

            let mut report = base_report("construct", &cfg);
            report.insert("n".into(), json!(n));
            report.insert("p1".into(), cx_json(p1.0));
            report.insert("q1".into(), cx_json(q1.0));
            report.insert("s".into(), cx_json(s.0));
            report.insert("root_index".into(), json!(root_index));
            report.insert("q0".into(), cx_json(exp.params.q0));
            report.insert("beta".into(), cx_json(exp.params.beta()));
            report.insert(
                "d".into(),
                json!(exp.d.values.iter().map(|&v| cx_json(v)).collect::<Vec<_>>()),
            );

            match build_ghg_solution(&exp, &cfg) {
                Ok(comb) => {
                    report.insert("combination".into(), combination_json(&comb));
                    match output.format {
                        Format::Json => emit_json(&output, &report)?,
                        Format::Csv => {
                            let mut text = String::new();
                            text.push_str("meta,command,construct\n");
                            text.push_str(&format!("meta,version,{}\n", env!("CARGO_PKG_VERSION")));
                            text.push_str(&format!(
                                "meta,q0,{:.17e},{:.17e}\n",
                                exp.params.q0.re, exp.params.q0.im
                            ));
                            for t in &comb.terms {
                                text.push_str(&format!(
                                    "term,{},{},{:.17e},{:.17e}\n",
                                    t.group.label(),
                                    t.combined.term.xi_power,
                                    t.combined.term.prefactor.re,
                                    t.combined.term.prefactor.im
                                ));
                                for (k, u) in t.combined.term.upper.iter().enumerate() {
                                    text.push_str(&format!(
                                        "upper,{},{},{:.17e},{:.17e}\n",
                                        t.group.label(),
                                        k,
                                        u.re,
                                        u.im
                                    ));
                                }
                                for (k, l) in t.combined.term.lower.iter().enumerate() {
                                    text.push_str(&format!(
                                        "lower,{},{},{:.17e},{:.17e}\n",
                                        t.group.label(),
                                        k,
                                        l.re,
                                        l.im
                                    ));
                                }
                            }
                            emit(&output, &text)?;
                        }
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(err) => {
                    report.insert("error".into(), json!(err.to_string()));
                    emit_json(&output, &report)?;
                    Ok(ExitCode::FAILURE)
                }
            }
        }

        Command::Eval {
            p0,
            p1,
            q0,
            q1,
            s,
            points,
            center,
            radius,
            count,
            output,
        } => {
            let cfg = tolerances(&output)?;
            let params = BiconfluentParams::new(p0.0, p1.0, q0.0, q1.0, s.0)
                .map_err(|e| format!("s: {}", e))?;

            let samples: Vec<Complex64> = if let Some(center) = center {
                SampleSpec {
                    center: center.0,
                    radius,
                    count,
                }
                .points()
            } else if !points.is_empty() {
                points.iter().map(|p| p.0).collect()
            } else {
                return Err("z/center: provide --z points or a --center disc".into());
            };

            let mut reps: Vec<(String, Vec<Value>)> = Vec::new();
            let mut numerical_failure = false;

            // Power-series representation about z = 0; skipped when the
            // zero-exponent branch does not exist.
            match frobenius_coefficients(&params, cfg.max_terms.min(256)) {
                Ok(coeffs) => {
                    let mut values = Vec::new();
                    for &z in &samples {
                        match evaluate_frobenius(&coeffs, &params, z, &cfg) {
                            Ok(v) => values.push(json!([z.re, z.im, v.re, v.im])),
                            Err(e) => {
                                values.push(json!([z.re, z.im, null, null, e.to_string()]));
                                numerical_failure = true;
                            }
                        }
                    }
                    reps.push(("frobenius-series".into(), values));
                }
                Err(e) => {
                    reps.push((
                        "frobenius-series".into(),
                        vec![json!({ "skipped": e.to_string() })],
                    ));
                }
            }

            // Terminated Hermite representation when p0 = -N and q0 is on
            // the level-N spectrum.
            let n_level = -params.p0.re;
            let is_level = params.p0.im.abs() < 1e-12
                && (n_level - n_level.round()).abs() < 1e-12
                && n_level.round() >= 0.0
                && n_level.round() <= MAX_LEVEL as f64;
            let mut hermite_used = false;
            if is_level {
                let n = n_level.round() as usize;
                let spec = hermite_spectrum(p1.0, q1.0, n, &cfg);
                let scale = 1.0
                    + spec
                        .admissible_q0
                        .iter()
                        .map(|r| r.norm())
                        .fold(0.0, f64::max);
                if let Some(idx) = spec
                    .admissible_q0
                    .iter()
                    .position(|&r| (r - q0.0).norm() <= 1e-8 * scale)
                {
                    hermite_used = true;
                    let exp = HermiteExpansion::from_spectrum_root(&spec, idx, p1.0, q1.0, s.0)
                        .map_err(|e| e.to_string())?;
                    let mut values = Vec::new();
                    for &z in &samples {
                        match evaluate_hermite_series_diag(&exp, z, &cfg) {
                            Ok((v, cancellation)) => {
                                if cancellation > 1e6 {
                                    // Digits lost to series cancellation;
                                    // flagged rather than recomputed.
                                    values.push(json!([
                                        z.re, z.im, v.re, v.im,
                                        {"accuracy_warning_digits_lost": cancellation.log10()}
                                    ]));
                                } else {
                                    values.push(json!([z.re, z.im, v.re, v.im]));
                                }
                            }
                            Err(e) => {
                                values.push(json!([z.re, z.im, null, null, e.to_string()]));
                                numerical_failure = true;
                            }
                        }
                    }
                    reps.push(("hermite-sum".into(), values));

                    match build_ghg_solution(&exp, &cfg) {
                        Ok(comb) => {
                            let mut values = Vec::new();
                            for &z in &samples {
                                match evaluate_combination(&comb, z, &cfg) {
                                    Ok(v) => values.push(json!([z.re, z.im, v.re, v.im])),
                                    Err(e) => {
                                        values.push(json!([z.re, z.im, null, null, e.to_string()]));
                                        numerical_failure = true;
                                    }
                                }
                            }
                            reps.push(("ghg-combination".into(), values));
                        }
                        Err(e) => {
                            reps.push((
                                "ghg-combination".into(),
                                vec![json!({ "skipped": e.to_string() })],
                            ));
                        }
                    }
                }
            }

            if reps
                .iter()
                .all(|(_, v)| v.len() == 1 && v[0].get("skipped").is_some())
                || reps.is_empty()
            {
                return Err(
                    "params: no representation applies (zero-exponent branch missing and q0 not on the Hermite spectrum)"
                        .into(),
                );
            }
            if is_level && !hermite_used {
                // p0 = -N but q0 off-spectrum: the power branch is missing
                // too, so nothing finite exists; the report carries whatever
                // was produced, but flag the input if that was nothing.
                if reps.len() == 1 && reps[0].1.first().and_then(|v| v.get("skipped")).is_some() {
                    return Err("q0: not an admissible accessory parameter at this level".into());
                }
            }

            match output.format {
                Format::Json => {
                    let mut report = base_report("eval", &cfg);
                    report.insert(
                        "params".into(),
                        json!({
                            "p0": cx_json(params.p0), "p1": cx_json(params.p1),
                            "q0": cx_json(params.q0), "q1": cx_json(params.q1),
                            "s": cx_json(params.s),
                        }),
                    );
                    report.insert(
                        "representations".into(),
                        json!(reps
                            .iter()
                            .map(|(name, values)| json!({"name": name, "values": values}))
                            .collect::<Vec<_>>()),
                    );
                    emit_json(&output, &report)?;
                }
                Format::Csv => {
                    let mut text = csv_meta("eval", &cfg);
                    for (name, values) in &reps {
                        for v in values {
                            if let Some(arr) = v.as_array() {
                                if arr.len() >= 4 && arr[2].is_number() {
                                    text.push_str(&format!(
                                        "value,{},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                                        name,
                                        arr[0].as_f64().unwrap(),
                                        arr[1].as_f64().unwrap(),
                                        arr[2].as_f64().unwrap(),
                                        arr[3].as_f64().unwrap()
                                    ));
                                } else {
                                    text.push_str(&format!("error,{}\n", name));
                                }
                            } else {
                                text.push_str(&format!("skipped,{}\n", name));
                            }
                        }
                    }
                    emit(&output, &text)?;
                }
            }
            Ok(if numerical_failure {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }

        Command::Validate {
            p1,
            q1,
            n,
            root_index,
            q0,
            s,
            center,
            radius,
            count,
            output,
        } => {
            check_level(n)?;
            let cfg = tolerances(&output)?;
            let spec = hermite_spectrum(p1.0, q1.0, n, &cfg);
            if root_index >= spec.admissible_q0.len() {
                return Err(format!(
                    "root-index: {} out of range ({} roots at N = {})",
                    root_index,
                    spec.admissible_q0.len(),
                    n
                ));
            }
            let exp = match q0 {
                None => HermiteExpansion::from_spectrum_root(&spec, root_index, p1.0, q1.0, s.0)
                    .map_err(|e| e.to_string())?,
                Some(q0) => {
                    // Claimed accessory parameter with the nearest root's
                    // coefficient vector.
                    let idx = spec
                        .admissible_q0
                        .iter()
                        .enumerate()
                        .min_by(|(_, a), (_, b)| {
                            (*a - q0.0).norm().partial_cmp(&(*b - q0.0).norm()).unwrap()
                        })
                        .map(|(i, _)| i)
                        .unwrap();
                    let params = BiconfluentParams::new(
                        Complex64::new(-(n as f64), 0.0),
                        p1.0,
                        q0.0,
                        q1.0,
                        s.0,
                    )
                    .map_err(|e| format!("s: {}", e))?;
                    HermiteExpansion::new(params, spec.eigenvectors[idx].coefficients.clone())
                        .map_err(|e| e.to_string())?
                }
            };

            let mut report = base_report("validate", &cfg);
            report.insert("n".into(), json!(n));
            report.insert("root_index".into(), json!(root_index));
            report.insert("q0".into(), cx_json(exp.params.q0));

            let run = || -> biheun::Result<biheun::validation::ValidationReport> {
                let comb = build_ghg_solution(&exp, &cfg)?;
                let z0 = center.0;
                let phi0 = evaluate_hermite_series(&exp, z0, &cfg)?;
                let dphi0 = evaluate_hermite_series_derivative(&exp, z0, &cfg)?;
                let params = exp.params;
                let reps = vec![
                    Representation::new("hermite-sum", |z| evaluate_hermite_series(&exp, z, &cfg)),
                    Representation::new("ghg-combination", |z| {
                        evaluate_combination(&comb, z, &cfg)
                    }),
                    Representation::without_residual_check("reference-integration", move |z| {
                        ode_reference_solve(&params, z0, phi0, dphi0, z, 200)
                    }),
                ];
                let sample = SampleSpec {
                    center: z0,
                    radius,
                    count,
                };
                cross_validate(&exp.params, &reps, &sample, &cfg)
            };

            match run() {
                Ok(vr) => {
                    report.insert(
                        "report".into(),
                        json!({
                            "residual_max": vr.residual_max,
                            "residual_points": vr.residual_points.iter()
                                .map(|(z, r)| json!([z.re, z.im, r]))
                                .collect::<Vec<_>>(),
                            "pairwise_dev": vr.pairwise_dev.iter()
                                .map(|(pair, d)| json!({"pair": pair, "deviation": d}))
                                .collect::<Vec<_>>(),
                            "tol_validate": vr.tol_validate,
                            "passed": vr.passed,
                        }),
                    );
                    match output.format {
                        Format::Json => emit_json(&output, &report)?,
                        Format::Csv => {
                            let mut text = String::new();
                            text.push_str("meta,command,validate\n");
                            text.push_str(&format!("meta,version,{}\n", env!("CARGO_PKG_VERSION")));
                            for (z, r) in &vr.residual_points {
                                text.push_str(&format!(
                                    "residual,{:.17e},{:.17e},{:.3e}\n",
                                    z.re, z.im, r
                                ));
                            }
                            for (pair, d) in &vr.pairwise_dev {
                                text.push_str(&format!("pairwise,{},{:.3e}\n", pair, d));
                            }
                            text.push_str(&format!("summary,passed,{}\n", vr.passed));
                            emit(&output, &text)?;
                        }
                    }
                    Ok(if vr.passed {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    })
                }
                Err(err) => {
                    report.insert("error".into(), json!(err.to_string()));
                    emit_json(&output, &report)?;
                    Ok(ExitCode::FAILURE)
                }
            }
        }

        Command::IdentityCheck {
            trials,
            seed,
            tolerance,
            output,
        } => {
            let cfg = tolerances(&output)?;
            if trials == 0 {
                return Err("trials: must be positive".into());
            }
            let suite = run_identity_suite(trials, seed, &cfg, tolerance);
            match output.format {
                Format::Json => {
                    let mut report = base_report("identity-check", &cfg);
                    report.insert("trials".into(), json!(trials));
                    report.insert("seed".into(), json!(seed));
                    report.insert(
                        "deviations".into(),
                        json!({
                            "combination_n1": suite.dev_n1,
                            "lambda_closed_form_n1": suite.dev_lambda_n1,
                            "combination_n2": suite.dev_n2,
                            "quadratic_roots_n2": suite.dev_quadratic_n2,
                            "combination_n3": suite.dev_n3,
                        }),
                    );
                    report.insert("tolerance".into(), json!(tolerance));
                    report.insert("passed".into(), json!(suite.passed()));
                    emit_json(&output, &report)?;
                }
                Format::Csv => {
                    let mut text = csv_meta("identity-check", &cfg);
                    text.push_str(&format!("deviation,combination_n1,{:.3e}\n", suite.dev_n1));
                    text.push_str(&format!(
                        "deviation,lambda_closed_form_n1,{:.3e}\n",
                        suite.dev_lambda_n1
                    ));
                    text.push_str(&format!("deviation,combination_n2,{:.3e}\n", suite.dev_n2));
                    text.push_str(&format!(
                        "deviation,quadratic_roots_n2,{:.3e}\n",
                        suite.dev_quadratic_n2
                    ));
                    text.push_str(&format!("deviation,combination_n3,{:.3e}\n", suite.dev_n3));
                    text.push_str(&format!("summary,passed,{}\n", suite.passed()));
                    emit(&output, &text)?;
                }
            }
            Ok(if suite.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {}", message);
            ExitCode::from(2)
        }
    }
}
