//! Static SVG charts built from a report.

use std::fmt::Write as _;

use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    IndexDecomposition,
    InteractionCoefficients,
}

impl PlotKind {
    pub fn parse(s: &str) -> Option<PlotKind> {
        match s {
            "index_decomposition" => Some(PlotKind::IndexDecomposition),
            "interaction_coefficients" => Some(PlotKind::InteractionCoefficients),
            _ => None,
        }
    }
}

pub fn render(report: &Report, kind: PlotKind) -> Result<String, String> {
    match kind {
        PlotKind::IndexDecomposition => index_decomposition(report),
        PlotKind::InteractionCoefficients => interaction_coefficients(report),
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

const FIRST_COLOR: &str = "#9ecae1";
const TOTAL_COLOR: &str = "#3182bd";

struct Panel<'a> {
    title: &'a str,
    first_label: &'a str,
    total_label: &'a str,
    values: Vec<(String, f64, f64)>,
}

/// Values of `name` per single-input target, restricted to one setting.
fn per_input(report: &Report, name: &str, setting: &Option<String>) -> Vec<(String, f64)> {
    report
        .indices
        .iter()
        .filter(|e| e.name == name && e.target.len() == 1 && &e.setting == setting)
        .map(|e| (e.target[0].clone(), e.value))
        .collect()
}

fn paired(
    report: &Report,
    first: &str,
    total: &str,
    setting: &Option<String>,
) -> Option<Vec<(String, f64, f64)>> {
    let a = per_input(report, first, setting);
    let b = per_input(report, total, setting);
    if a.is_empty() || a.len() != b.len() {
        return None;
    }
    a.into_iter()
        .map(|(name, v)| {
            b.iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| (name.clone(), v, *t))
        })
        .collect()
}

/// Two panels, full and uncorrelated, with first-order and total bars per input.
/// The gap between the two bars of an input is its interaction share.
pub fn index_decomposition(report: &Report) -> Result<String, String> {
    let setting = report.indices.first().and_then(|e| e.setting.clone());
    let full = paired(report, "first_order_full", "alt_total_full", &setting);
    let unc = paired(
        report,
        "alt_first_order_uncorrelated",
        "total_uncorrelated",
        &setting,
    );
    let mut missing = Vec::new();
    if full.is_none() {
        missing.push("full");
    }
    if unc.is_none() {
        missing.push("uncorrelated");
    }
    if !missing.is_empty() {
        return Err(format!(
            "report has no complete per-input indices for families: {}; rerun analyze with families including {}",
            missing.join(", "),
            missing.join(",")
        ));
    }
    let panels = [
        Panel {
            title: "Full indices",
            first_label: "first-order",
            total_label: "total",
            values: full.unwrap(),
        },
        Panel {
            title: "Uncorrelated indices",
            first_label: "first-order",
            total_label: "total",
            values: unc.unwrap(),
        },
    ];
    let panel_w = 80.0 + 70.0 * panels[0].values.len() as f64;
    let (h, top, plot_h) = (360.0, 50.0, 240.0);
    let width = 2.0 * panel_w + 40.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{h:.0}" viewBox="0 0 {width:.0} {h:.0}" font-family="sans-serif" font-size="12">"#
    );
    if let Some(s) = &setting {
        let _ = writeln!(
            svg,
            r#"<text x="10" y="16" font-size="11">setting {}</text>"#,
            esc(s)
        );
    }
    for (k, panel) in panels.iter().enumerate() {
        let x0 = 20.0 + k as f64 * (panel_w + 20.0) + 40.0;
        let inner_w = panel_w - 60.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">{}</text>"#,
            x0 + inner_w / 2.0,
            top - 20.0,
            panel.title
        );
        axis(&mut svg, x0, top, inner_w, plot_h);
        let slot = inner_w / panel.values.len() as f64;
        for (i, (name, first, total)) in panel.values.iter().enumerate() {
            let sx = x0 + i as f64 * slot + slot * 0.15;
            let bw = slot * 0.35;
            for (j, (v, color)) in [(first, FIRST_COLOR), (total, TOTAL_COLOR)]
                .into_iter()
                .enumerate()
            {
                let bh = v.clamp(0.0, 1.0) * plot_h;
                let bx = sx + j as f64 * bw;
                let _ = writeln!(
                    svg,
                    r#"<rect x="{bx:.1}" y="{:.1}" width="{bw:.1}" height="{bh:.1}" fill="{color}"/>"#,
                    top + plot_h - bh
                );
                let _ = writeln!(
                    svg,
                    r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="9">{v:.3}</text>"#,
                    bx + bw / 2.0,
                    top + plot_h - bh - 3.0
                );
            }
            let _ = writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                sx + bw,
                top + plot_h + 16.0,
                esc(name)
            );
        }
        legend(
            &mut svg,
            x0,
            top + plot_h + 36.0,
            panel.first_label,
            panel.total_label,
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn axis(svg: &mut String, x0: f64, top: f64, w: f64, h: f64) {
    let _ = writeln!(
        svg,
        "<line x1=\"{x0:.1}\" y1=\"{top:.1}\" x2=\"{x0:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
        top + h
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{x0:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
        top + h,
        x0 + w,
        top + h
    );
    for t in 0..=4 {
        let v = t as f64 / 4.0;
        let y = top + h - v * h;
        let _ = writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{x0:.1}\" y2=\"{y:.1}\" stroke=\"black\"/><text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-size=\"10\">{v:.2}</text>",
            x0 - 4.0,
            x0 - 6.0,
            y + 3.0
        );
    }
}

fn legend(svg: &mut String, x: f64, y: f64, first: &str, total: &str) {
    let _ = writeln!(
        svg,
        r#"<rect x="{x:.1}" y="{:.1}" width="10" height="10" fill="{FIRST_COLOR}"/><text x="{:.1}" y="{y:.1}">{first}</text>"#,
        y - 9.0,
        x + 14.0
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{:.1}" y="{:.1}" width="10" height="10" fill="{TOTAL_COLOR}"/><text x="{:.1}" y="{y:.1}">{total}</text>"#,
        x + 100.0,
        y - 9.0,
        x + 114.0
    );
}

/// Bar chart of `|θ|` for every two-way pivot monomial.
pub fn interaction_coefficients(report: &Report) -> Result<String, String> {
    let coefs = &report.interaction_coefficients;
    if coefs.is_empty() {
        return Err(
            "report has no interaction coefficients; rerun analyze with families including order and degree >= 2"
                .into(),
        );
    }
    let max = coefs
        .iter()
        .map(|c| c.coefficient.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let (top, plot_h, left) = (40.0, 240.0, 60.0);
    let slot = 22.0;
    let inner_w = slot * coefs.len() as f64;
    let width = left + inner_w + 30.0;
    let height = top + plot_h + 90.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">Two-way interaction coefficients |θ|</text>"#,
        left + inner_w / 2.0
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{:.1}\" stroke=\"black\"/><line x1=\"{left}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
        top + plot_h,
        top + plot_h,
        left + inner_w,
        top + plot_h
    );
    for t in 0..=4 {
        let v = max * t as f64 / 4.0;
        let y = top + plot_h - plot_h * t as f64 / 4.0;
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-size=\"10\">{v:.3}</text>",
            left - 5.0,
            y + 3.0
        );
    }
    for (i, c) in coefs.iter().enumerate() {
        let a = c.coefficient.abs();
        let bh = a / max * plot_h;
        let x = left + i as f64 * slot + 3.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{x:.1}" y="{:.1}" width="{:.1}" height="{bh:.1}" fill="{TOTAL_COLOR}"><title>{} = {:.6}</title></rect>"#,
            top + plot_h - bh,
            slot - 6.0,
            esc(&c.label),
            c.coefficient
        );
        let cx = x + (slot - 6.0) / 2.0;
        let ly = top + plot_h + 8.0;
        let _ = writeln!(
            svg,
            r#"<text x="{cx:.1}" y="{ly:.1}" transform="rotate(60 {cx:.1} {ly:.1})" font-size="9">{}</text>"#,
            esc(&c.label)
        );
        if a >= 0.1 * max {
            let _ = writeln!(
                svg,
                r#"<text x="{cx:.1}" y="{:.1}" text-anchor="middle" font-size="8">{a:.3}</text>"#,
                top + plot_h - bh - 3.0
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
