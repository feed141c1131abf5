//! Human, machine (JSON) and plot (TSV) renderings of results.

use std::fmt::{self, Write as _};

use infoclust::featsel::PpResult;
use infoclust::{
    ClusterSet, DualityReport, GroundSet, Partition, PspResult, RelaxResult, Scalar, SizeConstrained, Subset, Violation,
};
use serde_json::{json, Value};

use crate::{Common, Format};

pub enum Report {
    Text(String),
    Json(Value),
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Report::Text(t) => f.write_str(t),
            Report::Json(v) => writeln!(f, "{}", serde_json::to_string_pretty(v).map_err(|_| fmt::Error)?),
        }
    }
}

fn num<V: Scalar>(v: &V, common: &Common) -> String {
    if common.decimal {
        format!("{:?}", v.to_f64())
    } else {
        v.to_number().to_string()
    }
}

fn nums<V: Scalar>(vs: &[V], common: &Common) -> Vec<String> {
    vs.iter().map(|v| num(v, common)).collect()
}

fn names(ground: &GroundSet, b: Subset) -> Value {
    json!(ground.subset_names(b))
}

fn partition_names(ground: &GroundSet, p: &Partition) -> Value {
    Value::Array(p.blocks().iter().map(|&b| names(ground, b)).collect())
}

fn sets(ground: &GroundSet, bs: &[Subset]) -> String {
    if bs.is_empty() {
        return "(none)".into();
    }
    bs.iter().map(|&b| ground.format_subset(b)).collect::<Vec<_>>().join(" ")
}

fn pick(common: &Common, machine: impl FnOnce() -> Value, human: impl FnOnce() -> String) -> Report {
    match common.format {
        Format::Machine => Report::Json(machine()),
        Format::Human => Report::Text(human()),
    }
}

pub fn violations(vs: &[Violation]) -> Report {
    if vs.is_empty() {
        return Report::Text("ok\n".into());
    }
    let mut out = String::new();
    for v in vs {
        let _ = writeln!(out, "{:?}: {}", v.severity, v.kind);
    }
    Report::Text(out)
}

pub fn value<V: Scalar>(command: &str, v: &V, common: &Common) -> Report {
    pick(common, || json!({ "command": command, "value": num(v, common) }), || format!("{}\n", num(v, common)))
}

pub fn clusters<V: Scalar>(ground: &GroundSet, c: &ClusterSet<V>, common: &Common) -> Report {
    pick(
        common,
        || {
            json!({
                "command": if c.extended { "extended-clusters" } else { "clusters" },
                "gamma": num(&c.gamma, common),
                "clusters": c.clusters.iter().map(|&b| names(ground, b)).collect::<Vec<_>>(),
            })
        },
        || {
            if c.clusters.is_empty() {
                return "(none)\n".into();
            }
            c.clusters.iter().map(|&b| format!("{}\n", ground.format_subset(b))).collect()
        },
    )
}

pub fn psp<V: Scalar>(ground: &GroundSet, r: &PspResult<V>, common: &Common, plot: bool) -> Report {
    if plot {
        let mut out = String::new();
        for g in plot_points(&r.critical_values) {
            let _ = writeln!(out, "{}\t{}\t{}", num(&g, common), num(&r.value_at(&g), common), r.partition_at(&g).format_with(ground));
        }
        return Report::Text(out);
    }
    pick(
        common,
        || {
            json!({
                "command": "psp",
                "critical_values": nums(&r.critical_values, common),
                "chain": r.partitions.iter().map(|p| partition_names(ground, p)).collect::<Vec<_>>(),
                "intercepts": nums(&r.intercepts, common),
            })
        },
        || {
            let cv = nums(&r.critical_values, common);
            let chain: Vec<String> = r.partitions.iter().map(|p| p.format_with(ground)).collect();
            format!(
                "critical values: {}\nchain: {}\n",
                if cv.is_empty() { "(none)".into() } else { cv.join(", ") },
                chain.join(" > ")
            )
        },
    )
}

/// Vertices of a piecewise-linear plot: every breakpoint plus one unit beyond each end.
fn plot_points<V: Scalar>(breakpoints: &[V]) -> Vec<V> {
    let one = V::from_i64(1);
    match (breakpoints.first(), breakpoints.last()) {
        (Some(first), Some(last)) => std::iter::once(first.clone() - one.clone())
            .chain(breakpoints.iter().cloned())
            .chain(std::iter::once(last.clone() + one))
            .collect(),
        _ => vec![-one.clone(), V::zero(), one],
    }
}

pub fn relax<V: Scalar>(ground: &GroundSet, r: &RelaxResult<V>, common: &Common) -> Report {
    let family = r.optimizers.clone().unwrap_or_default();
    pick(
        common,
        || {
            json!({
                "command": "feature-select",
                "gamma": num(&r.gamma, common),
                "value": num(&r.value, common),
                "minimal": names(ground, r.minimal),
                "maximal": names(ground, r.maximal),
                "optimizers": r.optimizers.as_ref().map(|f| f.iter().map(|&b| names(ground, b)).collect::<Vec<_>>()),
            })
        },
        || {
            let mut out = format!("f* = {}\n", num(&r.value, common));
            let _ = writeln!(out, "minimal: {}\nmaximal: {}", ground.format_subset(r.minimal), ground.format_subset(r.maximal));
            if r.optimizers.is_some() {
                let _ = writeln!(out, "optimizers ({}): {}", family.len(), sets(ground, &family));
            }
            out
        },
    )
}

pub fn sized<V: Scalar>(ground: &GroundSet, r: &SizeConstrained<V>, common: &Common) -> Report {
    pick(
        common,
        || {
            json!({
                "command": "feature-select",
                "k": r.k,
                "value": num(&r.value, common),
                "argmax": r.argmax.iter().map(|&b| names(ground, b)).collect::<Vec<_>>(),
            })
        },
        || {
            let mut out = format!("max I = {}\n", num(&r.value, common));
            for &b in &r.argmax {
                let _ = writeln!(out, "{}", ground.format_subset(b));
            }
            out
        },
    )
}

pub fn pp<V: Scalar>(ground: &GroundSet, r: &PpResult<V>, common: &Common, plot: bool) -> Report {
    if plot {
        let mut out = String::new();
        for g in plot_points(&r.breakpoints) {
            let idx = r.breakpoints.iter().filter(|b| b.tol_le(&g)).count();
            let label = ground.format_subset(r.regions[idx].maximal);
            let _ = writeln!(out, "{}\t{}\t{}", num(&g, common), num(&r.value_at(&g), common), label);
        }
        return Report::Text(out);
    }
    let family = |f: &Option<Vec<Subset>>| f.as_ref().map(|f| f.iter().map(|&b| names(ground, b)).collect::<Vec<_>>());
    pick(
        common,
        || {
            json!({
                "command": "pp",
                "breakpoints": nums(&r.breakpoints, common),
                "tangent_values": nums(&r.tangent_values, common),
                "regions": r.regions.iter().map(|x| json!({
                    "lower": x.lower.as_ref().map(|v| num(v, common)),
                    "upper": x.upper.as_ref().map(|v| num(v, common)),
                    "minimal": names(ground, x.minimal),
                    "maximal": names(ground, x.maximal),
                    "optimizers": family(&x.optimizers),
                })).collect::<Vec<_>>(),
                "at_breakpoints": r.at_breakpoints.iter().map(|x| json!({
                    "gamma": num(&x.gamma, common),
                    "optimizers": family(&x.optimizers),
                })).collect::<Vec<_>>(),
            })
        },
        || {
            let bp = nums(&r.breakpoints, common);
            let mut out = format!("breakpoints: {}\n", if bp.is_empty() { "(none)".into() } else { bp.join(", ") });
            let _ = writeln!(out, "tangent values: {}", nums(&r.tangent_values, common).join(", "));
            for x in &r.regions {
                let lo = x.lower.as_ref().map_or("-inf".into(), |v| num(v, common));
                let hi = x.upper.as_ref().map_or("+inf".into(), |v| num(v, common));
                let _ = writeln!(out, "({lo}, {hi}): maximal {} minimal {}", ground.format_subset(x.maximal), ground.format_subset(x.minimal));
            }
            for x in &r.at_breakpoints {
                let f = x.optimizers.clone().unwrap_or_default();
                let _ = writeln!(out, "at {}: {}", num(&x.gamma, common), sets(ground, &f));
            }
            out
        },
    )
}

pub fn duality<V: Scalar>(ground: &GroundSet, reports: &[DualityReport<V>], common: &Common) -> Report {
    let passed = reports.iter().all(|r| r.passed);
    let entries = |v: &[(Subset, bool)]| {
        v.iter().map(|&(b, ok)| json!({ "set": names(ground, b), "holds": ok })).collect::<Vec<_>>()
    };
    pick(
        common,
        || {
            json!({
                "command": "duality",
                "passed": passed,
                "reports": reports.iter().map(|r| json!({
                    "gamma": num(&r.gamma, common),
                    "independent": r.independent,
                    "passed": r.passed,
                    "forward": entries(&r.forward),
                    "backward": entries(&r.backward),
                })).collect::<Vec<_>>(),
            })
        },
        || {
            let mut out = String::new();
            if let Some(r) = reports.first() {
                let _ = writeln!(out, "features independent: {}", r.independent);
            }
            for r in reports {
                let verdict = if r.passed { "pass" } else { "FAIL" };
                let _ = write!(out, "gamma {}: {verdict}", num(&r.gamma, common));
                if !r.passed {
                    let _ = write!(
                        out,
                        "; forward witnesses {}; backward witnesses {}",
                        sets(ground, &r.forward_witnesses()),
                        sets(ground, &r.backward_witnesses())
                    );
                }
                out.push('\n');
            }
            out
        },
    )
}
