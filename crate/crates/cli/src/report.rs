//! Column-aligned plain-text tables: the fitness summary (mean / std / max /
//! final) and the per-strategy performance tables.

use crate::experiment::Evaluation;
use gafs_core::ga::{trace_stats, RunReport};

fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = line(header);
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
    out.push('\n');
    for row in rows {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}

/// Fitness summary row computed from a best-fitness trace.
pub fn fitness_summary(id: &str, trace: &[f64]) -> Result<String, gafs_core::ga::GaError> {
    let stats = trace_stats(trace)?;
    Ok(render_table(
        &[
            "ID".into(),
            "mean".into(),
            "std".into(),
            "max".into(),
            "final".into(),
        ],
        &[vec![
            id.to_string(),
            format!("{:.2}", stats.mean),
            format!("{:.4}", stats.std),
            format!("{:.2}", stats.max),
            format!("{:.2}", stats.final_value),
        ]],
    ))
}

/// Render the evaluation (and GA trace when present) as the run's tables.
pub fn render_run(evaluation: &Evaluation, ga: Option<&RunReport>) -> String {
    let mut out = String::new();
    let id = format!("{:?}-{:?}", evaluation.strategy, evaluation.mode).to_lowercase();

    if let Some(report) = ga {
        out.push_str("Fitness values\n");
        out.push_str(&fitness_summary(&id, &report.trace).unwrap_or_default());
        out.push_str(&format!(
            "stop: {:?} after {} generations (cap {}), {:.4} min\n\n",
            report.stop_reason,
            report.generations_run,
            report.max_generations,
            report.elapsed_minutes
        ));
    }

    if let Some(cls) = &evaluation.classification {
        out.push_str("Classification performance\n");
        let mut header = vec!["ID".to_string(), "N_sf".to_string()];
        for class in &cls.classes {
            header.push(format!("Acc {class}"));
        }
        header.push("gAcc".into());
        header.push("waF1".into());
        let mut row = vec![id.clone(), evaluation.n_selected.to_string()];
        for acc in &cls.per_class_accuracy {
            row.push(format!("{acc:.2}"));
        }
        row.push(format!("{:.2}", cls.global_accuracy));
        row.push(format!("{:.2}", cls.weighted_f1));
        out.push_str(&render_table(&header, &[row]));
        if cls.folds_reduced {
            out.push_str(&format!(
                "note: folds reduced to {} by the smallest class\n",
                cls.folds_used
            ));
        }
    }

    if let Some(sil) = evaluation.silhouette {
        out.push_str("Clustering performance\n");
        let mut header = vec![
            "ID".to_string(),
            "N_sf".to_string(),
            "Silhouette".to_string(),
        ];
        let mut row = vec![
            id.clone(),
            evaluation.n_selected.to_string(),
            format!("{sil:.2}"),
        ];
        if let Some(sweep) = &evaluation.sweep {
            header.push("optimal clusters".into());
            header.push(format!(
                "k=[{} - {}]",
                sweep.entries.first().map(|e| e.0).unwrap_or(2),
                sweep.entries.last().map(|e| e.0).unwrap_or(2)
            ));
            row.push(sweep.best_k.to_string());
            row.push(format!(
                "[{}]",
                sweep
                    .entries
                    .iter()
                    .map(|(_, s)| format!("{s:.2}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
        }
        out.push_str(&render_table(&header, &[row]));
    }
    out
}

/// One-row CSV summary of the run.
pub fn summary_csv(evaluation: &Evaluation, ga: Option<&RunReport>) -> String {
    let mut header = vec!["strategy", "mode", "n_selected", "n_total"];
    let mut row = vec![
        format!("{:?}", evaluation.strategy).to_lowercase(),
        format!("{:?}", evaluation.mode).to_lowercase(),
        evaluation.n_selected.to_string(),
        evaluation.n_total.to_string(),
    ];
    if let Some(cls) = &evaluation.classification {
        header.extend(["gAcc", "waF1"]);
        row.push(format!("{:.4}", cls.global_accuracy));
        row.push(format!("{:.4}", cls.weighted_f1));
    }
    if let Some(sil) = evaluation.silhouette {
        header.push("silhouette");
        row.push(format!("{sil:.4}"));
        if let Some(sweep) = &evaluation.sweep {
            header.push("optimal_clusters");
            row.push(sweep.best_k.to_string());
        }
    }
    if let Some(report) = ga {
        header.extend(["fit_mean", "fit_std", "fit_max", "fit_final", "generations"]);
        row.push(format!("{:.4}", report.mean));
        row.push(format!("{:.4}", report.std));
        row.push(format!("{:.4}", report.max));
        row.push(format!("{:.4}", report.final_fitness));
        row.push(report.generations_run.to_string());
    }
    format!("{}\n{}\n", header.join(","), row.join(","))
}
