//! Three operations for the demo page. Each returns a JSON string; the
//! `#[wasm_bindgen]` wrappers turn errors into JS exceptions.

use std::collections::BTreeMap;

use k3lat::lattice::{count_admissible, glue_conditions, standard_lattice};
use k3lat::shortvec::short_vectors;
use k3lat::wmodel::{discriminant, fiber_analysis, point_order, torsion_family, PointOrder};
use num_bigint::BigInt;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest norm bound the page will enumerate to.
pub const MAX_BOUND: u64 = 6;

#[derive(Debug, Serialize)]
pub struct FamilyView {
    pub p: u32,
    pub seed: u64,
    pub a4: String,
    pub a6: String,
    pub delta: String,
    pub fibres: BTreeMap<String, usize>,
    pub euler_sum: usize,
    pub torsion_order: Option<u32>,
}

pub fn family(p: u32, seed: u64) -> Result<FamilyView, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (curve, point) = torsion_family(p, &mut rng).map_err(|e| e.to_string())?;
    let report = fiber_analysis(&curve).map_err(|e| e.to_string())?;
    let order = match point_order(&curve, &point, 12).map_err(|e| e.to_string())? {
        PointOrder::Finite(n) => Some(n),
        PointOrder::Infinite(_) => None,
    };
    Ok(FamilyView {
        p,
        seed,
        a4: curve.a4.to_string(),
        a6: curve.a6.to_string(),
        delta: discriminant(&curve).delta.to_string(),
        euler_sum: report.euler_sum(),
        fibres: report.types,
        torsion_order: order,
    })
}

#[derive(Debug, Serialize)]
pub struct CountsView {
    pub name: String,
    pub rank: usize,
    pub det: String,
    pub bound: u64,
    pub counts: BTreeMap<String, u64>,
}

pub fn counts(name: &str, bound: u64) -> Result<CountsView, String> {
    if bound == 0 || bound > MAX_BOUND {
        return Err(format!("bound must lie in 1..={MAX_BOUND}"));
    }
    let l = standard_lattice(name).map_err(|e| e.to_string())?;
    let r = short_vectors(&l, bound, false).map_err(|e| e.to_string())?;
    Ok(CountsView {
        name: name.to_string(),
        rank: l.rank(),
        det: l.det().to_string(),
        bound,
        counts: r.counts.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct GlueView {
    pub p: u32,
    pub l_sq: Vec<i64>,
    pub v_sq: Vec<i64>,
    /// `table[i][j]` for `l_sq[i]` and `v_sq[j]`.
    pub table: Vec<Vec<bool>>,
    pub classes: u64,
    /// Admissible classes of the dual quotient for each `l_sq`.
    pub admissible: Vec<u64>,
}

pub fn glue_table(p: u32, rows: usize) -> Result<GlueView, String> {
    if ![3, 5, 7].contains(&p) {
        return Err(format!("p = {p} is not 3, 5 or 7"));
    }
    let rows = rows.clamp(1, 12);
    let pi = p as i64;
    let l_sq: Vec<i64> = (1..=rows as i64).map(|k| 2 * k).collect();
    let v_sq: Vec<i64> = (1..=pi).map(|k| -2 * pi * k).collect();
    let mut table = Vec::new();
    for l in &l_sq {
        let row = v_sq
            .iter()
            .map(|v| glue_conditions(&BigInt::from(*l), &BigInt::from(*v), pi))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        table.push(row);
    }
    let omega = standard_lattice(&format!("Omega{p}")).map_err(|e| e.to_string())?;
    let mut classes = 0;
    let mut admissible = Vec::new();
    for l in &l_sq {
        let (n, ok) = count_admissible(&BigInt::from(*l), &omega, pi).map_err(|e| e.to_string())?;
        classes = n;
        admissible.push(ok);
    }
    Ok(GlueView {
        p,
        l_sq,
        v_sq,
        table,
        classes,
        admissible,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let value = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = familyReport)]
pub fn family_report(p: u32, seed: u32) -> Result<String, JsError> {
    to_js(family(p, seed as u64))
}

#[wasm_bindgen(js_name = shortVectorCounts)]
pub fn short_vector_counts(name: &str, bound: u32) -> Result<String, JsError> {
    to_js(counts(name, bound as u64))
}

#[wasm_bindgen(js_name = glueTable)]
pub fn glue_table_js(p: u32, rows: u32) -> Result<String, JsError> {
    to_js(glue_table(p, rows as usize))
}
