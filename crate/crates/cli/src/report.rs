//! JSON and text reports.

use std::collections::BTreeMap;

use affine_index::affine::{
    affine_index_polynomial_knot, affine_indices, compatibility, component_split, link_invariants, linking_data,
    n_writhes_knot, LinkInvariants, WritheTable,
};
use affine_index::canonical::canonical_form;
use affine_index::cut::{cut_invariants, rho, solve_numbering, RhoPair};
use affine_index::twisted::{bar_parities, q_polynomial, tilde_invariants, CoverType};
use affine_index::{serialize, CrossingId, LinkCode};
use anyhow::Result;
use serde_json::{json, Map, Value};

pub fn writhes(w: &WritheTable) -> Value {
    Value::Object(w.entries().map(|(n, v)| (n.to_string(), json!(v))).collect())
}

pub fn invariants(inv: &LinkInvariants) -> Value {
    json!({
        "JO": writhes(&inv.jo),
        "JU": writhes(&inv.ju),
        "PO": inv.po.to_string(),
        "PU": inv.pu.to_string(),
        "POU": inv.pou.to_string(),
    })
}

fn rho_table(r: &BTreeMap<CrossingId, RhoPair>) -> Value {
    Value::Object(r.iter().map(|(c, p)| (c.to_string(), json!({"O": p.o, "U": p.u}))).collect())
}

/// Rho table, numbering and cut invariants of a code carrying a cut system.
pub fn cut_report(system: &LinkCode) -> Result<Value> {
    let numbering = match solve_numbering(system, 0) {
        Ok(n) => json!({"values": n.values}),
        Err(d) => json!({"defect_gcd": d.defect_gcd}),
    };
    let mut out = json!({"system": serialize(system), "numbering": numbering});
    if let Ok(r) = rho(system) {
        out["rho"] = rho_table(&r);
        out["invariants"] = invariants(&cut_invariants(system)?);
    }
    Ok(out)
}

fn crossings(code: &LinkCode) -> Value {
    let quads = affine_indices(code);
    let parities = bar_parities(code);
    let mut out = Map::new();
    for c in code.crossings() {
        let mut entry = json!({"sign": code.sign(c).value()});
        if let Some(q) = quads.get(&c) {
            entry["L"] = json!(q.l);
            entry["R"] = json!(q.r);
            entry["O"] = json!(q.o);
            entry["U"] = json!(q.u);
        }
        if let Some(p) = parities.get(&c) {
            entry["parity"] = json!({"rho_bar_O": p.rho_bar_o, "rho_bar_U": p.rho_bar_u, "p_O": p.p_o, "p_U": p.p_u});
        }
        out.insert(c.to_string(), entry);
    }
    Value::Object(out)
}

fn cover(code: &LinkCode) -> Result<Value> {
    let tl = tilde_invariants(code)?;
    let mut out = json!({
        "code": serialize(&tl.cover),
        "components": tl.cover.num_components(),
        "type": match tl.cover_type {
            Some(CoverType::Odd) => json!("odd"),
            Some(CoverType::Even) => json!("even"),
            None => Value::Null,
        },
        "invariants": invariants(&tl.link),
    });
    if let Some(k) = &tl.knot {
        out["J"] = writhes(&k.j);
        out["P"] = json!(k.p.to_string());
    }
    Ok(out)
}

/// The full invariant report. Cut points in `code` are reported under `cut`
/// and ignored elsewhere; `extra_cut` adds a generated cut system.
pub fn invariant_report(code: &LinkCode, extra_cut: Option<&LinkCode>) -> Result<Value> {
    let base = code.without_cuts();
    let mut r = Map::new();
    r.insert("code".into(), json!(serialize(code)));
    r.insert("canonical".into(), canonical_form(code).map_or(Value::Null, Value::String));
    r.insert("crossings".into(), crossings(&base));
    r.insert("Q".into(), json!(q_polynomial(&base)?.to_string()));
    let ld = linking_data(&base);
    r.insert("lk".into(), json!(ld.lk));
    r.insert("vlk".into(), json!(ld.vlk));
    r.insert("lambda".into(), json!(ld.lambda));

    let null = || Value::Null;
    let (mut j, mut p) = (null(), null());
    if base.has_bars() {
        for key in ["JO", "JU", "PO", "PU", "POU", "per_component", "compatible"] {
            r.insert(key.into(), null());
        }
        r.insert("cover".into(), cover(&base)?);
    } else {
        let inv = link_invariants(&base)?;
        if let Value::Object(m) = invariants(&inv) {
            r.extend(m);
        }
        let parts: Vec<Value> = component_split(&base)?
            .iter()
            .map(|ci| {
                json!({
                    "lambda": ci.lambda,
                    "JO": writhes(&ci.jo),
                    "PO": ci.po.to_string(),
                    "PU": ci.pu.to_string(),
                    "POU": ci.pou.to_string(),
                })
            })
            .collect();
        r.insert("per_component".into(), json!(parts));
        let compat = compatibility(&base)?;
        r.insert("compatible".into(), json!(compat.compatible));
        if base.is_knot() {
            j = writhes(&n_writhes_knot(&base)?);
            p = json!(affine_index_polynomial_knot(&base)?.to_string());
        } else if let Some(cp) = compat.p {
            p = json!(cp.to_string());
        }
        r.insert("cover".into(), null());
    }
    r.insert("J".into(), j);
    r.insert("P".into(), p);
    let cut = match (code.has_cuts(), extra_cut) {
        (true, _) => cut_report(code)?,
        (false, Some(system)) => cut_report(system)?,
        (false, None) => null(),
    };
    r.insert("cut".into(), cut);
    Ok(Value::Object(r))
}

/// Plain-text rendering: one `key: value` line per top-level field.
pub fn render_text(report: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(m) = report {
        for (k, v) in m {
            if v.is_null() {
                continue;
            }
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {shown}\n"));
        }
    }
    out
}

/// Named invariant values used by `eq` and `fuzz`. With `twisted` only the
/// invariants of twisted links are included.
pub fn fingerprint(code: &LinkCode, twisted: bool) -> Result<BTreeMap<String, String>> {
    let code = code.without_cuts();
    let mut f = BTreeMap::new();
    f.insert("components".into(), code.num_components().to_string());
    f.insert("Q".into(), q_polynomial(&code)?.to_string());
    let tl = tilde_invariants(&code)?;
    f.insert("tilde".into(), invariants(&tl.link).to_string());
    if let Some(k) = &tl.knot {
        f.insert("tilde J".into(), writhes(&k.j).to_string());
        f.insert("tilde P".into(), k.p.to_string());
    }
    if twisted {
        return Ok(f);
    }
    let inv = link_invariants(&code)?;
    f.insert("JO".into(), writhes(&inv.jo).to_string());
    f.insert("JU".into(), writhes(&inv.ju).to_string());
    f.insert("PO".into(), inv.po.to_string());
    f.insert("PU".into(), inv.pu.to_string());
    f.insert("POU".into(), inv.pou.to_string());
    let mut lambda = linking_data(&code).lambda;
    lambda.sort_unstable();
    f.insert("lambda".into(), format!("{lambda:?}"));
    Ok(f)
}
