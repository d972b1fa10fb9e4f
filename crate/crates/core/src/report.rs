//! Comparison artifacts: the results table and SVG bar charts.

use std::fmt::Write;

use crate::evaluation::EvalReport;

pub const RESULTS_HEADER: &str = "classifier,precision,recall,f_measure,accuracy";

/// One row per report, in the given order, values to three decimals.
pub fn results_csv(reports: &[EvalReport]) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for r in reports {
        let m = &r.metrics;
        writeln!(
            out,
            "{},{:.3},{:.3},{:.3},{:.3}",
            r.classifier, m.precision, m.recall, m.f_measure, m.accuracy
        )
        .unwrap();
    }
    out
}

/// Reports sorted by weighted F-measure, best first; stable on ties.
pub fn ranking(reports: &[EvalReport]) -> Vec<&EvalReport> {
    let mut v: Vec<&EvalReport> = reports.iter().collect();
    v.sort_by(|a, b| b.metrics.f_measure.total_cmp(&a.metrics.f_measure));
    v
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

const PALETTE: [&str; 3] = ["#4472c4", "#ed7d31", "#a5a5a5"];

struct Series<'a> {
    name: &'a str,
    values: Vec<f64>,
}

/// Grouped vertical bar chart with values in [0, 1] shown as percentages.
fn bar_chart(title: &str, categories: &[&str], series: &[Series]) -> String {
    let (width, height) = (640.0, 380.0);
    let (left, right, top, bottom) = (56.0, 16.0, 40.0, 70.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;
    let group_w = plot_w / categories.len().max(1) as f64;
    let bar_w = group_w * 0.7 / series.len().max(1) as f64;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        width / 2.0,
        escape(title)
    )
    .unwrap();
    for tick in 0..=5 {
        let v = tick as f64 / 5.0;
        let y = top + plot_h * (1.0 - v);
        writeln!(
            s,
            r##"<line x1="{left}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{}%</text>"##,
            left + plot_w,
            left - 6.0,
            y + 4.0,
            tick * 20
        )
        .unwrap();
    }
    for (gi, cat) in categories.iter().enumerate() {
        let gx = left + gi as f64 * group_w + group_w * 0.15;
        for (si, ser) in series.iter().enumerate() {
            let v = ser.values[gi].clamp(0.0, 1.0);
            let h = plot_h * v;
            let x = gx + si as f64 * bar_w;
            writeln!(
                s,
                r#"<rect x="{x:.1}" y="{:.1}" width="{:.1}" height="{h:.1}" fill="{}"><title>{} {}: {:.3}</title></rect>"#,
                top + plot_h - h,
                bar_w * 0.95,
                PALETTE[si % PALETTE.len()],
                escape(cat),
                escape(ser.name),
                ser.values[gi]
            )
            .unwrap();
            if series.len() == 1 {
                writeln!(
                    s,
                    r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{:.1}%</text>"#,
                    x + bar_w * 0.475,
                    top + plot_h - h - 4.0,
                    v * 100.0
                )
                .unwrap();
            }
        }
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            left + (gi as f64 + 0.5) * group_w,
            top + plot_h + 18.0,
            escape(cat)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<line x1="{left}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#,
        top + plot_h,
        left + plot_w,
        top + plot_h
    )
    .unwrap();
    if series.len() > 1 {
        for (si, ser) in series.iter().enumerate() {
            let x = left + si as f64 * 120.0;
            let y = height - 22.0;
            writeln!(
                s,
                r#"<rect x="{x:.1}" y="{:.1}" width="12" height="12" fill="{}"/><text x="{:.1}" y="{y:.1}">{}</text>"#,
                y - 10.0,
                PALETTE[si % PALETTE.len()],
                x + 16.0,
                escape(ser.name)
            )
            .unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Accuracy per classifier.
pub fn accuracy_svg(reports: &[EvalReport]) -> String {
    let cats: Vec<&str> = reports.iter().map(|r| r.classifier.as_str()).collect();
    bar_chart(
        "Classification accuracy",
        &cats,
        &[Series {
            name: "Accuracy",
            values: reports.iter().map(|r| r.metrics.accuracy).collect(),
        }],
    )
}

/// Weighted precision, recall and F-measure per classifier.
pub fn prf_svg(reports: &[EvalReport]) -> String {
    let cats: Vec<&str> = reports.iter().map(|r| r.classifier.as_str()).collect();
    let series = [
        Series {
            name: "Precision",
            values: reports.iter().map(|r| r.metrics.precision).collect(),
        },
        Series {
            name: "Recall",
            values: reports.iter().map(|r| r.metrics.recall).collect(),
        },
        Series {
            name: "F-measure",
            values: reports.iter().map(|r| r.metrics.f_measure).collect(),
        },
    ];
    bar_chart("Precision, recall and F-measure", &cats, &series)
}
