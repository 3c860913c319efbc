use std::fmt::Write;

use serde_json::Value;

fn scalar(v: &Value) -> String {
    let n = v["conductor"].as_u64().unwrap_or(1);
    if let Some(p) = v.get("power").and_then(Value::as_u64) {
        return match (n, p) {
            (_, 0) => "1".into(),
            (2, 1) => "-1".into(),
            (4, 1) => "i".into(),
            (4, 3) => "-i".into(),
            _ => format!("ζ{n}^{p}"),
        };
    }
    let coeffs: Vec<&str> = v["coeffs"]
        .as_array()
        .map(|a| a.iter().filter_map(Value::as_str).collect())
        .unwrap_or_default();
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != "0")
        .map(|(k, c)| if k == 0 { c.to_string() } else { format!("{c}·ζ{n}^{k}") })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn list(v: &Value) -> String {
    match v.as_array() {
        Some(a) => {
            let items: Vec<String> = a.iter().map(|x| x.to_string()).collect();
            format!("{{{}}}", items.join(","))
        }
        None => v.to_string(),
    }
}

fn scalars(v: &Value) -> String {
    let items: Vec<String> = v.as_array().map(|a| a.iter().map(scalar).collect()).unwrap_or_default();
    format!("[{}]", items.join(", "))
}

fn central_line(out: &mut String, c: &Value) {
    let _ = writeln!(
        out,
        "central character {} on Z = {}: {}",
        c["index"],
        list(&c["centre"]),
        scalars(&c["values"])
    );
}

pub fn render(report: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} on {} (order {})",
        report["command"].as_str().unwrap_or("?"),
        report["group"]["name"].as_str().unwrap_or("?"),
        report["group"]["order"]
    );
    match report["command"].as_str() {
        Some("poset") => poset(&mut out, report),
        Some("hyperhecke") => hyperhecke(&mut out, report),
        Some("monocentre") => monocentre(&mut out, report),
        Some("resolve") => resolve(&mut out, report),
        Some("convolve-check") => convolve(&mut out, report),
        Some("doublecoset-check") => {
            let _ = writeln!(out, "{} of {} cases pass over {} subgroups", report["passed"], report["cases"], report["subgroups"]);
        }
        _ => {}
    }
    if let Some(p) = report.get("pass") {
        let _ = writeln!(out, "{}", if p.as_bool() == Some(true) { "PASS" } else { "FAIL" });
    }
    out
}

fn poset(out: &mut String, report: &Value) {
    for block in report["posets"].as_array().into_iter().flatten() {
        central_line(out, &block["central_character"]);
        let _ = writeln!(out, "{} pairs, {} orbits", block["pair_count"], block["orbits"].as_array().map_or(0, Vec::len));
        let _ = writeln!(out, "{:>4}  {:>5}  {:<24} {:<28} {:>5}  stabilizer", "pair", "|H|", "H", "φ", "orbit");
        for p in block["pairs"].as_array().into_iter().flatten() {
            let _ = writeln!(
                out,
                "{:>4}  {:>5}  {:<24} {:<28} {:>5}  {}",
                p["index"].to_string(),
                p["order"].to_string(),
                list(&p["subgroup"]),
                scalars(&p["values"]),
                p["orbit"].to_string(),
                list(&p["stabilizer"])
            );
        }
        out.push('\n');
    }
}

fn hyperhecke(out: &mut String, report: &Value) {
    for block in report["algebras"].as_array().into_iter().flatten() {
        central_line(out, &block["central_character"]);
        let _ = writeln!(
            out,
            "dimension {}, closed under products: {}, orthogonal idempotents: {}",
            block["dimension"], block["closed"], block["orthogonal_idempotents"]
        );
        for (i, t) in block["basis"].as_array().into_iter().flatten().enumerate() {
            let _ = writeln!(out, "  t{i:<4} [{}, {}, {}]", t["source"], t["g"], t["target"]);
        }
        let _ = writeln!(out, "products (left ∘ right = scalar · product):");
        for e in block["table"].as_array().into_iter().flatten() {
            let _ = writeln!(out, "  t{} ∘ t{} = {} · t{}", e["left"], e["right"], scalar(&e["scalar"]), e["product"]);
        }
        out.push('\n');
    }
}

fn monocentre(out: &mut String, report: &Value) {
    for block in report["monocentres"].as_array().into_iter().flatten() {
        central_line(out, &block["central_character"]);
        let _ = writeln!(
            out,
            "order {}, abelian invariants {}, generated by elements {}",
            block["order"],
            block["abelian_invariants"],
            list(&block["generating_elements"])
        );
        for f in block["families"].as_array().into_iter().flatten() {
            let _ = writeln!(out, "  family {}", f);
        }
        out.push('\n');
    }
    if let Some(n) = report.get("full_order") {
        let _ = writeln!(out, "full monocentre order {n}");
    }
}

fn resolve(out: &mut String, report: &Value) {
    central_line(out, &report["central_character"]);
    let r = &report["report"];
    let _ = writeln!(
        out,
        "dim V {}, mode {}, h={} a={} s={}, term dims {}",
        report["rep_dim"], r["mode"].as_str().unwrap_or("?"), r["h"], r["a"], r["s"], r["term_dims"]
    );
    let _ = writeln!(out, "d∘d = 0: {}, morphism condition: {}", r["d_squared_zero"], r["morphisms"]);
    let _ = writeln!(out, "{:>4}  {:>5}  {:>5}  {:<24} {:<24} exact", "pair", "fixed", "lines", "dims", "ranks");
    for p in r["pairs"].as_array().into_iter().flatten() {
        let _ = writeln!(
            out,
            "{:>4}  {:>5}  {:>5}  {:<24} {:<24} {}",
            p["pair"].to_string(),
            p["fixed_dim"].to_string(),
            p["lines"].to_string(),
            p["dims"].to_string(),
            p["ranks"].to_string(),
            p["all_exact"]
        );
    }
}

fn convolve(out: &mut String, report: &Value) {
    for block in report["checks"].as_array().into_iter().flatten() {
        central_line(out, &block["central_character"]);
        let _ = writeln!(
            out,
            "{} of {} cases pass ({} also with the literal involution)",
            block["passed"], block["cases"], block["literal_involution_passed"]
        );
        for f in block["failures"].as_array().into_iter().flatten() {
            let _ = writeln!(out, "  fails: {f}");
        }
    }
}
