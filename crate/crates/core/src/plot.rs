//! One-vs-rest ROC curves rendered as a standalone SVG document.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::evaluate::EvalReport;
use crate::model::AffectLabel;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 60.0;

fn color(label: AffectLabel) -> &'static str {
    match label {
        AffectLabel::Happy => "#d62728",
        AffectLabel::Sad => "#1f77b4",
        AffectLabel::Disgust => "#2ca02c",
        AffectLabel::Peaceful => "#9467bd",
    }
}

fn sx(fpr: f64) -> f64 {
    MARGIN + fpr * SIZE
}

fn sy(tpr: f64) -> f64 {
    MARGIN + (1.0 - tpr) * SIZE
}

/// One `<path>` per class with a ROC, a dashed chance diagonal, axes and a
/// legend carrying each class's AUC. Output depends only on the report.
pub fn roc_svg(report: &EvalReport) -> Result<String> {
    if report.roc.is_empty() {
        return Err(Error::Degenerate("report has no ROC curves".into()));
    }
    let w = SIZE + 2.0 * MARGIN + 160.0;
    let h = SIZE + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="13">"#);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="black"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-dasharray="6,4"/>"#,
        sx(0.0),
        sy(0.0),
        sx(1.0),
        sy(1.0)
    );
    for k in 0..=5 {
        let v = k as f64 / 5.0;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{v:.1}</text>"#, sx(v), sy(0.0) + 18.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.1}</text>"#, sx(0.0) - 6.0, sy(v) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">False Positive Rate</text>"#, sx(0.5), h - 12.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">True Positive Rate</text>"#,
        sy(0.5),
        sy(0.5)
    );
    let _ = writeln!(s, r#"<text x="{:.1}" y="30" text-anchor="middle" font-size="15">ROC curves (one-vs-rest)</text>"#, sx(0.5));
    for (k, c) in report.roc.iter().enumerate() {
        let mut d = String::new();
        for (i, (fpr, tpr)) in c.points.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, sx(*fpr), sy(*tpr));
        }
        let _ = writeln!(s, r#"<path class="roc" data-label="{}" d="{d}" fill="none" stroke="{}" stroke-width="2"/>"#, c.label, color(c.label));
        let ly = MARGIN + 20.0 + 22.0 * k as f64;
        let lx = MARGIN + SIZE + 16.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="3"/>"#, lx + 20.0, color(c.label));
        let _ = writeln!(s, r#"<text x="{}" y="{}">{} (AUC {:.3})</text>"#, lx + 26.0, ly + 4.0, c.label.name().to_uppercase(), c.auc);
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
