//! Minimal SVG line chart of mean success against node count.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::sweep::SweepRow;

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Mean value keyed by node count.
pub type Curve = BTreeMap<usize, f64>;

/// Mean success per (K, k) series and mean baseline. Skipped rows are left
/// out.
pub fn series(rows: &[SweepRow]) -> (BTreeMap<(u64, usize), Curve>, Curve) {
    let mut success: BTreeMap<(u64, usize), BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
    let mut baseline: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in rows {
        if let (Some(s), Some(b)) = (r.success, r.baseline) {
            success
                .entry((r.threshold, r.k))
                .or_default()
                .entry(r.n)
                .or_default()
                .push(s);
            baseline.entry(r.n).or_default().push(b);
        }
    }
    let success = success
        .into_iter()
        .map(|(key, by_n)| (key, by_n.into_iter().map(|(n, v)| (n, mean(&v))).collect()))
        .collect();
    (
        success,
        baseline.into_iter().map(|(n, v)| (n, mean(&v))).collect(),
    )
}

pub fn render(rows: &[SweepRow]) -> String {
    let (success, baseline) = series(rows);
    let ns: Vec<usize> = baseline.keys().copied().collect();
    let (lo, hi) = match (ns.first(), ns.last()) {
        (Some(&a), Some(&b)) if b > a => (a as f64, b as f64),
        (Some(&a), _) => (a as f64 - 1.0, a as f64 + 1.0),
        _ => (0.0, 1.0),
    };
    let x = |n: f64| MARGIN + (n - lo) / (hi - lo) * (W - 2.0 * MARGIN);
    let y = |p: f64| H - MARGIN - p * (H - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/><line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{0}" stroke="black"/>"#,
        H - MARGIN,
        W - MARGIN
    );
    for &n in &ns {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">{n}</text>"#,
            x(n as f64),
            H - MARGIN + 18.0
        );
    }
    for t in 0..=4 {
        let p = t as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="end">{p:.2}</text>"#,
            MARGIN - 6.0,
            y(p) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">nodes (n)</text>"#,
        W / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.1}" font-size="13" transform="rotate(-90 14 {:.1})" text-anchor="middle">success probability</text>"#,
        H / 2.0,
        H / 2.0
    );

    let polyline = |pts: &Curve| {
        pts.iter()
            .map(|(&n, &p)| format!("{:.1},{:.1}", x(n as f64), y(p)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    for (i, ((k_thr, k), pts)) in success.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            polyline(pts)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" fill="{color}">K={k_thr}, k={k}</text>"#,
            W - MARGIN - 90.0,
            MARGIN + 16.0 * i as f64
        );
    }
    if !baseline.is_empty() {
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="gray" stroke-width="2" stroke-dasharray="6 4" points="{}"/>"#,
            polyline(&baseline)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" fill="gray">baseline M/N</text>"#,
            W - MARGIN - 90.0,
            MARGIN + 16.0 * success.len() as f64
        );
    }
    s.push_str("</svg>\n");
    s
}
