//! Plain-text renderings of command results.

use gibbsloss_core::SystemBundle;
use serde_json::Value;

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(xs) if xs.iter().all(Value::is_string) => {
            let names: Vec<String> = xs.iter().map(scalar).collect();
            let sep = if names.iter().all(|n| n.chars().count() == 1) { "" } else { " " };
            names.join(sep)
        }
        other => other.to_string(),
    }
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(header.to_vec());
    s.push_str(&line(width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect()));
    for r in rows {
        s.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    s
}

/// `key: value` lines for a flat object.
pub fn pairs(v: &Value) -> String {
    let mut s = String::new();
    if let Some(obj) = v.as_object() {
        for (k, x) in obj {
            if x.is_object() || x.is_array() {
                s.push_str(&format!("{k}: {x}\n"));
            } else {
                s.push_str(&format!("{k}: {}\n", scalar(x)));
            }
        }
    }
    s
}

pub fn list(title: &str, words: &[String]) -> String {
    let mut s = format!("{title}: {} words\n", words.len());
    for w in words {
        s.push_str(w);
        s.push('\n');
    }
    s
}

pub fn validate(b: &SystemBundle, v: &Value) -> String {
    let rows: Vec<Vec<String>> = (0..b.n_symbols())
        .map(|a| {
            let succ: Vec<&str> = b.sft().successors(a).iter().map(|&c| b.symbols().name(c)).collect();
            let mut row = vec![
                b.symbols().name(a).to_string(),
                b.labels().name(b.label(a)).to_string(),
                succ.join(" "),
            ];
            if let Some(m) = v.get("measure") {
                row.push(scalar(&m["initial"][b.symbols().name(a)]));
            }
            row
        })
        .collect();
    let mut header = vec!["symbol", "label", "successors"];
    if v.get("measure").is_some() {
        header.push("stationary");
    }
    let mut s = table(&header, &rows);
    s.push_str(&format!("edges: {}\n", v["edges"]));
    s.push_str(&format!("mixing: {} ({})\n", v["mixing"], v["mixing_witness"]));
    let trimmed = v["trimmed"].as_array().map_or(0, Vec::len);
    if trimmed > 0 {
        s.push_str(&format!("trimmed: {}\n", v["trimmed"]));
    }
    if let Some(m) = v.get("measure") {
        s.push_str(&format!("fully supported: {}\n", m["fully_supported"]));
    }
    s
}

pub fn tau(v: &Value) -> String {
    let parts: Vec<String> = v["partition"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|p| {
            let pairs: Vec<String> = p
                .as_array()
                .into_iter()
                .flatten()
                .map(|e| format!("{}..{}", scalar(&e[0]), scalar(&e[1])))
                .collect();
            format!("{{{}}}", pairs.join(", "))
        })
        .collect();
    format!(
        "w: {}\ntau: {}{}\npartition: {}\n",
        scalar(&v["word"]),
        v["value"],
        if v["exact"] == Value::Bool(true) { "" } else { " (greedy upper bound)" },
        parts.join(" ")
    )
}

pub fn depth(v: &Value) -> String {
    let d = &v["depth"];
    let row = vec![
        scalar(&v["word"]),
        scalar(&v["fiber_size"]),
        scalar(&d["value"]),
        if d.is_null() {
            "-".into()
        } else {
            format!("M = {{{}}} at n = {}", d["set"].as_array().map_or(String::new(), |s| s.iter().map(scalar).collect::<Vec<_>>().join(", ")), d["position"])
        },
        scalar(&v["tau"]["value"]),
    ];
    let mut s = table(&["w", "|fiber|", "d", "routing witness", "tau"], &[row]);
    s.push_str(&tau(&{
        let mut t = v["tau"].clone();
        t["word"] = v["word"].clone();
        t
    }));
    s
}

pub fn degree(v: &Value) -> String {
    let rows: Vec<Vec<String>> = v["history"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|h| vec![scalar(&h["length"]), scalar(&h["min_tau"])])
        .collect();
    let mut s = table(&["length", "min tau"], &rows);
    s.push_str(&format!(
        "degree estimate: {} (witness {}, depth {}), stabilized: {}\n",
        v["value"],
        scalar(&v["witness"]),
        v["witness_depth"],
        v["stabilized"]
    ));
    s
}

pub fn classes(v: &Value) -> String {
    let mut s = format!(
        "point: ({})^inf, side: {}, analysis period: {}\n",
        scalar(&v["word"]),
        scalar(&v["side"]),
        v["analysis_period"]
    );
    let rows: Vec<Vec<String>> = v["classes"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|c| vec![scalar(&c["index"]), scalar(&c["period"]), scalar(&c["representative"])])
        .collect();
    s.push_str(&table(&["class", "period", "representative"], &rows));
    let trans: Vec<Vec<String>> = v["transitions"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|t| vec![scalar(&t["from"]), scalar(&t["to"]), scalar(&t["nonstop"])])
        .collect();
    if trans.is_empty() {
        s.push_str("no transitions\n");
    } else {
        s.push_str(&table(&["from", "to", "nonstop"], &trans));
    }
    s
}

pub fn verdicts(vs: &[Value]) -> String {
    let rows: Vec<Vec<String>> = vs
        .iter()
        .map(|v| vec![scalar(&v["property"]), scalar(&v["status"]), v["witness"].to_string()])
        .collect();
    table(&["property", "status", "witness"], &rows)
}

pub fn diagnose(v: &Value) -> String {
    let mut s = format!("verdict: {}\n{}\n", scalar(&v["verdict"]), scalar(&v["note"]));
    let p = &v["period_reduction"];
    s.push_str(&format!(
        "period reduction: q = {}, residue limits {}, gap {}, fired {}\n",
        p["analysis_period"], p["limits"], p["gap"], p["fired"]
    ));
    match v.get("polynomial").filter(|x| !x.is_null()) {
        Some(e) => s.push_str(&format!(
            "transitional polynomial: lambda {}, alpha {}, max residual {}, fired {}\n",
            e["lambda"], e["alpha"], e["max_residual"], e["fired"]
        )),
        None => s.push_str("transitional polynomial: skipped\n"),
    }
    for e in v["vanishing"].as_array().into_iter().flatten() {
        let last = e["tail_quotients"].as_array().and_then(|q| q.last()).cloned().unwrap_or(Value::Null);
        s.push_str(&format!(
            "vanishing ({}, delta {}): last quotient {}, fired {}\n",
            scalar(&e["side"]),
            scalar(&e["delta"]),
            last,
            e["fired"]
        ));
    }
    s
}
