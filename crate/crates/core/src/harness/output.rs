use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::experiment::ExperimentResults;
use crate::error::Result;
use crate::oracle::{ArmClass, BanditInstance, LowerBound, OracleSolution};

pub const REGRET_CURVES: &str = "regret_curves.csv";
pub const ARM_COUNTS: &str = "arm_counts.csv";
pub const DECOMPOSITION: &str = "decomposition.csv";
pub const SUMMARY: &str = "summary.txt";

/// Formats like C's `%.12g`: 12 significant digits, trailing zeros removed,
/// exponent notation outside `[1e-5, 1e12)`.
pub fn format_g12(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes the CSVs and the summary into `dir` and returns their paths.
pub fn write_outputs(dir: &Path, results: &ExperimentResults) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let paths = [REGRET_CURVES, ARM_COUNTS, DECOMPOSITION, SUMMARY].map(|f| dir.join(f));
    write_regret_curves(&paths[0], results)?;
    write_arm_counts(&paths[1], results)?;
    write_decomposition(&paths[2], results)?;
    fs::write(
        &paths[3],
        summary_text(&results.instance, &results.solution, &results.lower_bound),
    )?;
    Ok(paths.to_vec())
}

fn write_regret_curves(path: &Path, results: &ExperimentResults) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "algorithm",
        "checkpoint_t",
        "mean_regret",
        "stderr",
        "lower_bound_value",
    ])?;
    for (kind, agg) in &results.per_algorithm {
        let name = kind.to_string();
        for (i, &t) in agg.checkpoints.iter().enumerate() {
            w.write_record([
                name.clone(),
                t.to_string(),
                format_g12(agg.regret.mean[i]),
                format_g12(agg.regret.stderr[i]),
                format_g12(results.lower_bound.at(t as f64)),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_arm_counts(path: &Path, results: &ExperimentResults) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["algorithm", "checkpoint_t", "arm", "mean_count", "stderr"])?;
    for (kind, agg) in &results.per_algorithm {
        let name = kind.to_string();
        for (i, &t) in agg.checkpoints.iter().enumerate() {
            for (a, pulls) in agg.pulls.iter().enumerate() {
                w.write_record([
                    name.clone(),
                    t.to_string(),
                    (a + 1).to_string(),
                    format_g12(pulls.mean[i]),
                    format_g12(pulls.stderr[i]),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn write_decomposition(path: &Path, results: &ExperimentResults) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "algorithm",
        "checkpoint_t",
        "leading_shortfall",
        "below_spend",
        "unspent_budget",
        "pseudo_mass",
        "mean_realized_gain",
        "realized_gain_stderr",
    ])?;
    for (kind, agg) in &results.per_algorithm {
        let name = kind.to_string();
        for (i, &t) in agg.checkpoints.iter().enumerate() {
            w.write_record([
                name.clone(),
                t.to_string(),
                format_g12(agg.terms[0].mean[i]),
                format_g12(agg.terms[1].mean[i]),
                format_g12(agg.terms[2].mean[i]),
                format_g12(agg.pseudo_mass.mean[i]),
                format_g12(agg.realized_gain.mean[i]),
                format_g12(agg.realized_gain.stderr[i]),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn id_set(ids: &[usize]) -> String {
    let inner: Vec<String> = ids.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// Human-readable oracle solution and lower-bound constants.
pub fn summary_text(
    instance: &BanditInstance,
    solution: &OracleSolution,
    lower_bound: &LowerBound,
) -> String {
    let mut s = String::new();
    let join = |xs: &[f64]| {
        xs.iter()
            .map(|x| format_g12(*x))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let _ = writeln!(s, "K = {}", instance.len());
    let _ = writeln!(s, "means = [{}]", join(&instance.means()));
    let _ = writeln!(s, "costs = [{}]", join(&instance.costs()));
    let _ = writeln!(s, "budget = {}", format_g12(instance.budget()));
    let _ = writeln!(s, "rho = {}", format_g12(instance.rho()));
    let _ = writeln!(s, "rho_star = {}", format_g12(solution.rho_star));
    for class in [
        ArmClass::Leading,
        ArmClass::Margin,
        ArmClass::Below,
        ArmClass::Unreachable,
    ] {
        let _ = writeln!(
            s,
            "{} = {}",
            class.label(),
            id_set(&solution.arms_in(class))
        );
    }
    let _ = writeln!(s, "pseudo_arm = {}", solution.pseudo_arm_class.label());
    let _ = writeln!(s, "q_star = [{}]", join(&solution.q_star));
    let _ = writeln!(s, "G_star = {}", format_g12(solution.g_star));
    let _ = writeln!(
        s,
        "lower_bound_coefficient = {}",
        format_g12(lower_bound.coefficient)
    );
    for (a, &per) in lower_bound.per_arm.iter().enumerate() {
        if per > 0.0 {
            let _ = writeln!(s, "draws_coefficient[{}] = {}", a + 1, format_g12(per));
        }
    }
    s
}
