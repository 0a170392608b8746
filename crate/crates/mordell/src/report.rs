//! Output: number formatting, JSON reports and the spectrum CSV.

use serde::Serialize;
use serde_json::{json, Value};

use mordell_core::algebra::Partition;
use mordell_core::lattice::{Lattice, SymmetricBox};
use mordell_core::mordell::{MordellEstimate, OracleResult};
use mordell_core::orbits::{ClassificationEntry, OrbitKind};
use mordell_core::spectrum2::{Scan, SpectrumPoint};

pub const SIG_DIGITS: usize = 12;

/// `x` with 12 significant digits, `%g` style.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { format!("{x}") };
    }
    let e = x.abs().log10().floor() as i32;
    let s = if (-5..SIG_DIGITS as i32).contains(&e) {
        let decimals = (SIG_DIGITS as i32 - 1 - e).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{:.*e}", SIG_DIGITS - 1, x);
        let (m, exp) = s.split_once('e').expect("exponent");
        let m = if m.contains('.') { m.trim_end_matches('0').trim_end_matches('.') } else { m };
        format!("{m}e{exp}")
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// `x` rounded to 12 significant digits, for JSON numbers.
pub fn round_sig(x: f64) -> f64 {
    fmt_sig(x).parse().unwrap_or(x)
}

fn box_strings(b: &SymmetricBox) -> Vec<String> {
    b.half_widths().iter().map(|a| a.describe()).collect()
}

pub fn estimate_json(l: &Lattice, e: &MordellEstimate, seed: u64, oracle: Option<&OracleResult>) -> Value {
    let starts: Vec<Value> = e
        .search_log
        .iter()
        .map(|r| {
            json!({
                "start": r.start.iter().map(|x| round_sig(*x)).collect::<Vec<_>>(),
                "t": r.t.iter().map(|x| round_sig(*x)).collect::<Vec<_>>(),
                "value": round_sig(r.value),
                "evaluations": r.evaluations,
            })
        })
        .collect();
    let mut v = json!({
        "n": l.n(),
        "covolume": l.covolume().describe(),
        "certified": e.certified,
        "kappa_lower": round_sig(e.kappa_lower),
        "kappa_exact": e.kappa_exact.as_ref().map(|x| x.describe()),
        "kappa_float": round_sig(e.kappa_float),
        "lattice_box": box_strings(&e.lattice_box),
        "normalizer": e.normalizer.iter().map(|a| a.describe()).collect::<Vec<_>>(),
        "witness_box": box_strings(&e.witness_box),
        "diverging": e.diverging,
        "evaluations": e.evaluations,
        "seed": seed,
        "search_log": starts,
    });
    if let Some(o) = oracle {
        v["oracle"] = json!({
            "kappa": round_sig(o.kappa),
            "first": o.first,
            "second": o.second,
            "difference": round_sig(e.kappa_lower - o.kappa),
        });
    }
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationRow {
    pub partition: String,
    pub blocks: usize,
    pub dim: usize,
    pub components: Vec<usize>,
    pub algebra: String,
    pub kind: String,
    pub equiblock: bool,
}

impl ClassificationRow {
    pub fn new(p: &Partition, e: &ClassificationEntry) -> Self {
        Self {
            partition: p.to_string(),
            blocks: p.len(),
            dim: e.dim,
            components: e.components.clone(),
            algebra: e.algebra.clone(),
            kind: e.kind.as_str().to_string(),
            equiblock: p.is_equiblock(),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.kind != OrbitKind::NotClosed.as_str()
    }
}

pub fn classification_table(rows: &[ClassificationRow]) -> String {
    let head = ["partition", "|P|", "dim", "algebra", "orbit"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| [r.partition.clone(), r.blocks.to_string(), r.dim.to_string(), r.algebra.clone(), r.kind.clone()])
        .collect();
    let mut w = head.map(|h| h.chars().count());
    for c in &cells {
        for (k, s) in c.iter().enumerate() {
            w[k] = w[k].max(s.chars().count());
        }
    }
    let line = |c: &[String]| {
        let mut s = String::new();
        for (k, x) in c.iter().enumerate() {
            let pad = w[k] - x.chars().count();
            s.push_str(x);
            if k + 1 < c.len() {
                s.push_str(&" ".repeat(pad + 2));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(&head.map(String::from));
    out.push_str(&line(&w.map(|k| "-".repeat(k))));
    for c in &cells {
        out.push_str(&line(c));
    }
    out
}

pub const SPECTRUM_HEADER: [&str; 8] =
    ["param", "D", "discriminant", "max_digit", "lambda", "kappa_oracle", "kappa_search", "certified"];

fn spectrum_record(p: &SpectrumPoint) -> [String; 8] {
    [
        p.param.to_string(),
        p.source.radicand().to_string(),
        p.discriminant.to_string(),
        p.max_digit.to_string(),
        fmt_sig(p.lambda),
        fmt_sig(p.kappa_oracle),
        fmt_sig(p.kappa_search),
        p.certified.to_string(),
    ]
}

pub fn spectrum_csv(scan: &Scan) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SPECTRUM_HEADER)?;
    for p in &scan.points {
        w.write_record(spectrum_record(p))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn spectrum_json(scan: &Scan) -> Value {
    json!({
        "points": scan.points.iter().map(|p| json!({
            "param": p.param,
            "x": p.source.to_string(),
            "cf": p.cf.to_string(),
            "D": p.source.radicand().to_string(),
            "discriminant": p.discriminant.to_string(),
            "max_digit": p.max_digit,
            "lambda": round_sig(p.lambda),
            "kappa_oracle": round_sig(p.kappa_oracle),
            "kappa_search": round_sig(p.kappa_search),
            "certified": p.certified,
        })).collect::<Vec<_>>(),
        "distinct_discriminants": scan.distinct_discriminants(),
        "skipped": scan.skipped.iter().map(|(m, e)| json!({"param": m, "error": e.to_string()})).collect::<Vec<_>>(),
    })
}
