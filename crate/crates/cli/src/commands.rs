use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde_json::{json, Value};
use shiftpow::arith::shifted_witness_u64;
use shiftpow::decomp::root_scale;
use shiftpow::gap::PAIR_GUARD_MARGIN;
use shiftpow::{
    build_graph, check_gap_instance, claim31_audit, cor22_scan, cor24_scan, cor25_audit, cor25_sweep,
    find_decomposition, gap_scan, integer_kth_root, kst_audit, kst_edge_bound, perturbation_distance, rm_example,
    shifted_power_witness, truncated_shifted_powers, AuditStatus, FiniteSet, GapStatus, GridConstraints, GridWitness,
    PairCountReport, ShiftParams,
};

use crate::output::Emitter;
use crate::{Command, RowArgs, ShiftArgs, Summary};

pub fn execute(command: &Command, out: &mut Emitter) -> Result<Summary> {
    match command {
        Command::Root { value, k } => root(value, *k, out),
        Command::Witness { a, b, shift } => witness(a, b, shift, out),
        Command::Neighbors {
            a,
            a_min,
            a_max,
            shift,
            x,
        } => {
            let (lo, hi) = match (a, a_max) {
                (Some(a), _) => (*a, *a),
                (None, Some(hi)) => (a_min.unwrap_or(1), *hi),
                (None, None) => bail!("either --a or --a-max is required"),
            };
            neighbors(lo, hi, shift, *x, out)
        }
        Command::Grid {
            rows,
            shift,
            x,
            s,
            t,
            min_col,
            rows_below_cols,
        } => {
            let constraints = GridConstraints {
                min_col: *min_col,
                rows_below_cols: *rows_below_cols,
            };
            grid(rows, shift, *x, *s, *t, constraints, out)
        }
        Command::ScanCor22 { shift, x } => scan_cor22(shift, *x, out),
        Command::ScanCor24 { shift, x } => scan_cor24(shift, *x, out),
        Command::Pairs {
            a1,
            a2,
            a_max,
            shift,
            x,
        } => pairs(*a1, *a2, *a_max, shift, *x, out),
        Command::GapScan { shift, x } => gap(shift, *x, out),
        Command::KstBound { m, nv, s, t, edges } => kst_bound(*m, *nv, *s, *t, *edges, out),
        Command::KstAudit { rows, shift, x, s, t } => kst(rows, shift, *x, *s, *t, out),
        Command::Claim31Audit {
            a,
            a_file,
            b_file,
            k,
            n,
            x,
        } => claim31(a, a_file.as_deref(), b_file.as_deref(), *k, *n, *x, out),
        Command::Decompose { file } => decompose(file, out),
        Command::TruncateM { k, n, x } => truncate(*k, *n, *x, out),
        Command::RmExample { m, k, n, x } => rm(*m, *k, *n, *x, out),
        Command::Perturb { file, m, k, n, x } => perturb(file.as_deref(), *m, *k, *n, *x, out),
    }
}

fn read_set(path: &Path) -> Result<FiniteSet> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .context("cannot read standard input")?;
    } else {
        text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    }
    text.parse()
        .with_context(|| format!("invalid set file {}", path.display()))
}

fn rows_of(rows: &RowArgs) -> Result<Vec<u64>> {
    match (&rows.file, rows.a_max) {
        (Some(path), _) => Ok(read_set(path)?.into_vec()),
        (None, Some(a_max)) => Ok((1..=a_max).collect()),
        (None, None) => bail!("either --a-max or --file is required"),
    }
}

fn shift_inputs(shift: &ShiftArgs) -> serde_json::Map<String, Value> {
    let mut map = serde_json::Map::new();
    map.insert("k".into(), json!(shift.k));
    map.insert("shift".into(), json!(shift.shift));
    map
}

fn with(mut base: serde_json::Map<String, Value>, extra: Value) -> Value {
    if let Value::Object(extra) = extra {
        base.extend(extra);
    }
    Value::Object(base)
}

fn dec<T: ToString>(v: T) -> Value {
    Value::String(v.to_string())
}

/// Root of `a·b + m`, re-derived independently of whatever produced the edge.
fn edge_root(a: u64, b: u64, params: ShiftParams) -> Result<u128> {
    match shifted_witness_u64(a, b, params) {
        Some(y) => Ok(y),
        None => bail!("edge ({a}, {b}) failed re-validation"),
    }
}

fn grid_record(grid: &GridWitness, params: ShiftParams) -> Result<Value> {
    ensure!(
        grid.validate(params),
        "grid {:?} x {:?} failed re-validation",
        grid.rows,
        grid.cols
    );
    let roots: Vec<Vec<Value>> = grid.witnesses.iter().map(|ys| ys.iter().map(dec).collect()).collect();
    Ok(json!({ "rows": grid.rows, "cols": grid.cols, "roots": roots }))
}

fn root(value: &BigUint, k: u32, out: &mut Emitter) -> Result<Summary> {
    let r = integer_kth_root(value, k)?;
    let exact = &num_traits::Pow::pow(&r, k) == value;
    out.emit(
        "root",
        json!({ "value": dec(value), "k": k, "root": dec(&r), "exact": exact }),
    )?;
    Ok(Summary {
        command: "root",
        inputs: json!({ "value": dec(value), "k": k }),
        counts: json!({ "exact": u64::from(exact) }),
        violations: 0,
    })
}

fn witness(a: &BigUint, b: &BigUint, shift: &ShiftArgs, out: &mut Emitter) -> Result<Summary> {
    let params = shift.params()?;
    let value = BigInt::from(a.clone()) * BigInt::from(b.clone()) + params.shift();
    let y = shifted_power_witness(a, b, params);
    if let Some(y) = &y {
        ensure!(
            BigInt::from(num_traits::Pow::pow(y, params.k())) == value,
            "witness failed re-validation"
        );
    }
    out.emit(
        "witness",
        json!({
            "a": dec(a), "b": dec(b), "k": params.k(), "shift": params.m(),
            "value": dec(&value), "power": y.is_some(), "root": y.as_ref().map(dec),
        }),
    )?;
    Ok(Summary {
        command: "witness",
        inputs: with(shift_inputs(shift), json!({ "a": dec(a), "b": dec(b) })),
        counts: json!({ "powers": u64::from(y.is_some()) }),
        violations: 0,
    })
}

fn neighbors(lo: u64, hi: u64, shift: &ShiftArgs, x: u64, out: &mut Emitter) -> Result<Summary> {
    let params = shift.params()?;
    ensure!(lo >= 1 && lo <= hi, "need 1 <= a_min <= a_max, got {lo}..={hi}");
    eprintln!("neighbors: rows {lo}..={hi}, X = {x}");
    let rows: Vec<Vec<(u64, u128)>> = (lo..=hi)
        .into_par_iter()
        .map(|a| {
            shiftpow::right_neighbors(a, params, x)
                .into_iter()
                .map(|b| edge_root(a, b, params).map(|y| (b, y)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut edges = 0u64;
    for (a, row) in (lo..=hi).zip(&rows) {
        for &(b, y) in row {
            out.emit("edge", json!({ "a": a, "b": b, "root": dec(y) }))?;
            edges += 1;
        }
    }
    Ok(Summary {
        command: "neighbors",
        inputs: with(shift_inputs(shift), json!({ "a_min": lo, "a_max": hi, "X": x })),
        counts: json!({ "rows": hi - lo + 1, "edges": edges }),
        violations: 0,
    })
}

fn grid(
    rows: &RowArgs,
    shift: &ShiftArgs,
    x: u64,
    s: usize,
    t: usize,
    constraints: GridConstraints,
    out: &mut Emitter,
) -> Result<Summary> {
    let params = shift.params()?;
    let left = rows_of(rows)?;
    let graph = build_graph(&left, params, x)?;
    eprintln!("grid: {} rows, {} edges", left.len(), graph.edge_count());
    let grids = graph.find_grid(s, t, constraints)?;
    for g in &grids {
        out.emit("grid", grid_record(g, params)?)?;
    }
    Ok(Summary {
        command: "grid",
        inputs: with(
            shift_inputs(shift),
            json!({
                "X": x, "s": s, "t": t, "rows": left.len(),
                "min_col": constraints.min_col, "rows_below_cols": constraints.rows_below_cols,
            }),
        ),
        counts: json!({ "edges": graph.edge_count(), "grids": grids.len() }),
        violations: 0,
    })
}

fn scan_cor22(shift: &ShiftArgs, x: u64, out: &mut Emitter) -> Result<Summary> {
    let params = shift.params()?;
    eprintln!("scan-cor22: k = {}, shift = {}, X = {x}", params.k(), params.m());
    let report = cor22_scan(params, x)?;
    out.emit(
        "cor22",
        json!({
            "k": params.k(), "shift": params.m(), "X": x,
            "threshold": dec(&report.threshold), "vacuous": report.vacuous,
            "edges_examined": report.edges_examined, "grids": report.grids.len(),
        }),
    )?;
    for g in &report.grids {
        out.emit("violation", grid_record(g, params)?)?;
    }
    Ok(Summary {
        command: "scan-cor22",
        inputs: with(shift_inputs(shift), json!({ "X": x })),
        counts: json!({ "edges_examined": report.edges_examined, "grids": report.grids.len() }),
        violations: report.grids.len() as u64,
    })
}

fn scan_cor24(shift: &ShiftArgs, x: u64, out: &mut Emitter) -> Result<Summary> {
    let params = shift.params()?;
    eprintln!("scan-cor24: k = {}, shift = {}, X = {x}", params.k(), params.m());
    let report = cor24_scan(params, x)?;
    out.emit(
        "cor24",
        json!({
            "k": params.k(), "shift": params.m(), "X": x,
            "a_range": [report.a_range.0, report.a_range.1],
            "b_range": [report.b_range.0, report.b_range.1],
            "theorem_applicable": report.theorem_applicable,
            "quadruples": report.quadruples.len(),
        }),
    )?;
    let kind = if report.theorem_applicable {
        "violation"
    } else {
        "quadruple"
    };
    for &[a1, a2, b1, b2] in &report.quadruples {
        let roots = [(a1, b1), (a1, b2), (a2, b1), (a2, b2)]
            .into_iter()
            .map(|(a, b)| edge_root(a, b, params).map(dec))
            .collect::<Result<Vec<_>>>()?;
        out.emit(kind, json!({ "a1": a1, "a2": a2, "b1": b1, "b2": b2, "roots": roots }))?;
    }
    let violations = if report.theorem_applicable {
        report.quadruples.len() as u64
    } else {
        0
    };
    Ok(Summary {
        command: "scan-cor24",
        inputs: with(shift_inputs(shift), json!({ "X": x })),
        counts: json!({
            "quadruples": report.quadruples.len(),
            "theorem_applicable": report.theorem_applicable,
        }),
        violations,
    })
}

fn pair_record(report: &PairCountReport, params: ShiftParams) -> Result<Value> {
    for &b in &report.pairs {
        edge_root(report.a1, b, params)?;
        edge_root(report.a2, b, params)?;
    }
    Ok(json!({
        "a1": report.a1, "a2": report.a2, "count": report.pairs.len(), "pairs": report.pairs,
        "threshold": report.threshold, "exceeds_threshold": report.exceeds_threshold, "flagged": report.flagged,
    }))
}

fn pairs(
    a1: Option<u64>,
    a2: Option<u64>,
    a_max: Option<u64>,
    shift: &ShiftArgs,
    x: u64,
    out: &mut Emitter,
) -> Result<Summary> {
    let params = shift.params()?;
    let (reports, inputs) = match (a1, a2, a_max) {
        (Some(a1), Some(a2), _) => (
            vec![cor25_audit(a1, a2, params, x)?],
            json!({ "a1": a1, "a2": a2, "X": x }),
        ),
        (_, _, Some(a_max)) => {
            eprintln!("pairs: all pairs up to {a_max}, X = {x}");
            (cor25_sweep(a_max, params, x)?, json!({ "a_max": a_max, "X": x }))
        }
        _ => bail!("either --a1 and --a2, or --a-max, is required"),
    };
    let mut flagged = 0u64;
    let mut exceeding = 0u64;
    for r in &reports {
        out.emit("pair", pair_record(r, params)?)?;
        flagged += u64::from(r.flagged);
        exceeding += u64::from(r.exceeds_threshold);
    }
    let max_count = reports.iter().map(|r| r.pairs.len()).max().unwrap_or(0);
    let threshold = reports.first().map(|r| r.threshold);
    Ok(Summary {
        command: "pairs",
        inputs: with(shift_inputs(shift), inputs),
        counts: json!({
            "pairs_audited": reports.len(), "max_count": max_count, "threshold": threshold,
            "margin": PAIR_GUARD_MARGIN, "exceeding_threshold": exceeding, "flagged": flagged,
        }),
        violations: flagged,
    })
}

fn gap(shift: &ShiftArgs, x: u64, out: &mut Emitter) -> Result<Summary> {
    let params = shift.params()?;
    eprintln!("gap-scan: k = {}, shift = {}, bound = {x}", params.k(), params.m());
    let report = gap_scan(params, x)?;
    let tightest = report
        .tightest
        .map(|(q, ratio)| json!({ "a": q[0], "b": q[1], "c": q[2], "d": q[3], "ratio": ratio }));
    out.emit(
        "gap_scan",
        json!({
            "k": params.k(), "shift": params.m(), "X": x,
            "power_quadruples": report.power_quadruples, "applicable": report.applicable,
            "tightest": tightest, "violations": report.violations.len(),
        }),
    )?;
    for ([a, b, c, d], verdict) in &report.violations {
        let big = |v: u64| BigUint::from(v);
        let again = check_gap_instance(&big(*a), &big(*b), &big(*c), &big(*d), params)?;
        ensure!(
            again.status == GapStatus::Violation,
            "gap violation failed re-validation"
        );
        out.emit(
            "violation",
            json!({
                "a": a, "b": b, "c": c, "d": d, "bd": dec(&verdict.actual),
                "bound_num": dec(&verdict.bound_num), "bound_den": dec(&verdict.bound_den),
            }),
        )?;
    }
    Ok(Summary {
        command: "gap-scan",
        inputs: with(shift_inputs(shift), json!({ "X": x })),
        counts: json!({ "power_quadruples": report.power_quadruples, "applicable": report.applicable }),
        violations: report.violations.len() as u64,
    })
}

fn kst_bound(m: u64, nv: u64, s: u64, t: u64, edges: Option<u64>, out: &mut Emitter) -> Result<Summary> {
    let bound = kst_edge_bound(m, nv, s, t)?;
    let admits = edges.map(|e| bound.admits(e));
    out.emit(
        "kst_bound",
        json!({
            "m": m, "nv": nv, "s": s, "t": t, "bound": bound.float_value,
            "degenerate": bound.degenerate, "edges": edges, "admits": admits,
        }),
    )?;
    Ok(Summary {
        command: "kst-bound",
        inputs: json!({ "m": m, "nv": nv, "s": s, "t": t, "edges": edges }),
        counts: json!({ "admitted": admits.map(u64::from) }),
        violations: 0,
    })
}

fn kst(rows: &RowArgs, shift: &ShiftArgs, x: u64, s: usize, t: usize, out: &mut Emitter) -> Result<Summary> {
    let params = shift.params()?;
    let left = rows_of(rows)?;
    let graph = build_graph(&left, params, x)?;
    let audit = kst_audit(graph.graph(), s, t)?;
    let status = match audit.status {
        AuditStatus::NotApplicable => "not_applicable",
        AuditStatus::Holds => "holds",
        AuditStatus::Violation => "violation",
    };
    out.emit(
        "kst_audit",
        json!({
            "k": params.k(), "shift": params.m(), "X": x, "s": s, "t": t,
            "left": graph.left().len(), "right": graph.right().len(), "edges": audit.edges,
            "bound": audit.bound.float_value, "degenerate": audit.bound.degenerate, "status": status,
        }),
    )?;
    let violations = u64::from(audit.status == AuditStatus::Violation);
    Ok(Summary {
        command: "kst-audit",
        inputs: with(
            shift_inputs(shift),
            json!({ "X": x, "s": s, "t": t, "rows": left.len() }),
        ),
        counts: json!({ "edges": audit.edges, "status": status }),
        violations,
    })
}

#[allow(clippy::too_many_arguments)]
fn claim31(
    a: &[u64],
    a_file: Option<&Path>,
    b_file: Option<&Path>,
    k: u32,
    n: i64,
    x: u64,
    out: &mut Emitter,
) -> Result<Summary> {
    let a_set = match a_file {
        Some(path) => read_set(path)?,
        None => FiniteSet::from_unsorted(a.to_vec())?,
    };
    let b_set = match b_file {
        Some(path) => read_set(path)?,
        None => truncated_shifted_powers(k, n, x)?,
    };
    let audit = claim31_audit(&a_set, &b_set, n, k, x)?;
    let terms: serde_json::Map<String, Value> = audit.rhs.named().map(|(name, v)| (name.into(), json!(v))).collect();
    out.emit(
        "claim31",
        json!({
            "k": k, "n": n, "X": x, "a_size": a_set.len(), "b_size": b_set.len(),
            "qx": audit.qx, "terms": terms, "rhs": audit.rhs.total, "x0": dec(&audit.x0),
            "applicable": audit.applicable, "holds": audit.holds, "density_ratio": audit.density_ratio,
        }),
    )?;
    Ok(Summary {
        command: "claim31-audit",
        inputs: json!({ "k": k, "n": n, "X": x, "a_size": a_set.len(), "b_size": b_set.len() }),
        counts: json!({ "qx": audit.qx, "holds": audit.holds, "applicable": audit.applicable }),
        violations: u64::from(audit.is_violation()),
    })
}

fn decompose(file: &Path, out: &mut Emitter) -> Result<Summary> {
    let set = read_set(file)?;
    let found = find_decomposition(&set)?;
    if let Some(d) = &found {
        ensure!(d.replays(&set), "decomposition failed to replay");
    }
    out.emit(
        "decomposition",
        json!({
            "size": set.len(), "reducible": found.is_some(),
            "a": found.as_ref().map(|d| d.a.as_slice()), "b": found.as_ref().map(|d| d.b.as_slice()),
        }),
    )?;
    Ok(Summary {
        command: "decompose",
        inputs: json!({ "file": file.display().to_string(), "size": set.len() }),
        counts: json!({ "reducible": u64::from(found.is_some()) }),
        violations: 0,
    })
}

fn shifted_base(value: u64, k: u32, n: i64) -> Result<u128> {
    let shifted = i128::from(value) - i128::from(n);
    ensure!(shifted > 0, "{value} is not of the form x^k + {n}");
    shiftpow::arith::power_witness_u128(shifted as u128, k)
        .with_context(|| format!("{value} is not of the form x^k + {n}"))
}

fn truncate(k: u32, n: i64, x: u64, out: &mut Emitter) -> Result<Summary> {
    let set = truncated_shifted_powers(k, n, x)?;
    for v in set.iter() {
        out.emit("element", json!({ "value": v, "x": dec(shifted_base(v, k, n)?) }))?;
    }
    Ok(Summary {
        command: "truncate-M",
        inputs: json!({ "k": k, "n": n, "X": x }),
        counts: json!({ "elements": set.len() }),
        violations: 0,
    })
}

fn rm(m: u64, k: u32, n: i64, x: u64, out: &mut Emitter) -> Result<Summary> {
    let set = rm_example(m, k, n, x)?;
    for v in set.iter() {
        let (factor, base) = match shifted_base(v, k, n) {
            Ok(base) => (1, base),
            Err(_) => {
                ensure!(v % m == 0, "{v} is neither in M nor in m·M");
                (m, shifted_base(v / m, k, n)?)
            }
        };
        out.emit("element", json!({ "value": v, "factor": factor, "x": dec(base) }))?;
    }
    Ok(Summary {
        command: "rm-example",
        inputs: json!({ "m": m, "k": k, "n": n, "X": x }),
        counts: json!({ "elements": set.len() }),
        violations: 0,
    })
}

fn perturb(file: Option<&Path>, m: Option<u64>, k: u32, n: i64, x: u64, out: &mut Emitter) -> Result<Summary> {
    let set = match (file, m) {
        (Some(path), _) => read_set(path)?,
        (None, Some(m)) => rm_example(m, k, n, x)?,
        (None, None) => bail!("either --file or --m is required"),
    };
    let p = perturbation_distance(&set, k, n, x)?;
    let scale = root_scale(x, k);
    let ratio = |v: u64| if scale > 0 { v as f64 / scale as f64 } else { 0.0 };
    let expected = m.map(|m| (m as f64).powf(-1.0 / f64::from(k)));
    out.emit(
        "perturbation",
        json!({
            "k": k, "n": n, "X": x, "added": p.added, "removed": p.removed, "scale": scale,
            "added_ratio": ratio(p.added), "removed_ratio": ratio(p.removed), "expected_ratio": expected,
        }),
    )?;
    Ok(Summary {
        command: "perturb",
        inputs: json!({ "k": k, "n": n, "X": x, "m": m, "size": set.len() }),
        counts: json!({ "added": p.added, "removed": p.removed }),
        violations: 0,
    })
}
