//! Browser bindings for a few queerlab computations.

use queerlab::amodule::{self, AAlgebra};
use queerlab::partitions::StrictPartition;
use queerlab::queer;
use queerlab::symfunc;
use wasm_bindgen::prelude::*;

const MAX_SIZE: usize = 8;
const MAX_RANK: usize = 3;
const MAX_DEGREE: usize = 5;

fn partition(s: &str) -> Result<StrictPartition, String> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let p: StrictPartition = s.parse().map_err(|e| format!("{s:?}: {e}"))?;
    if p.size() > MAX_SIZE {
        return Err(format!("|λ| = {} is larger than {MAX_SIZE}", p.size()));
    }
    Ok(p)
}

/// Q_λ written in the q_r, e.g. "2,1" gives "q₂q₁ − 2q₃".
pub fn q_expansion_text(lambda: &str) -> Result<String, String> {
    Ok(symfunc::q_expansion(&partition(lambda)?).to_string())
}

/// dim T_λ for q(n).
pub fn dim_text(lambda: &str, n: usize) -> Result<usize, String> {
    if n > 6 {
        return Err(format!("n = {n} is larger than 6"));
    }
    queer::dim_t(&partition(lambda)?, n).map_err(|e| e.to_string())
}

/// One row of the membership table for A(n, m): JSON list of {mu, observed, predicted, pass}.
pub fn membership_row_json(n: usize, m: usize, d_max: usize, lambda: &str) -> Result<String, String> {
    if n > MAX_RANK || m > MAX_RANK || d_max > MAX_DEGREE {
        return Err(format!("ranks up to {MAX_RANK} and degree up to {MAX_DEGREE}"));
    }
    let lambda = partition(lambda)?;
    if lambda.len() > n.min(m) || lambda.size() > d_max || lambda.size() == 0 {
        return Err(format!("{lambda:?} is not a nonempty partition with at most {} parts and size at most {d_max}", n.min(m)));
    }
    let alg = AAlgebra::shared(n, m).map_err(|e| e.to_string())?;
    let row = amodule::main_theorem_row(&alg, &lambda, d_max);
    Ok(serde_json::to_string(&row).expect("rows serialize"))
}

#[wasm_bindgen]
pub fn q_expansion(lambda: &str) -> Result<String, JsValue> {
    q_expansion_text(lambda).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn dim(lambda: &str, n: usize) -> Result<usize, JsValue> {
    dim_text(lambda, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn membership_row(n: usize, m: usize, d_max: usize, lambda: &str) -> Result<String, JsValue> {
    membership_row_json(n, m, d_max, lambda).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansions() {
        assert_eq!(q_expansion_text("2,1").unwrap(), "q₂q₁ − 2q₃");
        assert_eq!(q_expansion_text("(3)").unwrap(), "q₃");
        assert!(q_expansion_text("1,1").is_err());
    }

    #[test]
    fn dims() {
        assert_eq!(dim_text("2", 1).unwrap(), 2);
        assert!(dim_text("1", 7).is_err());
    }

    #[test]
    fn membership() {
        let rows: serde_json::Value = serde_json::from_str(&membership_row_json(2, 2, 3, "2").unwrap()).unwrap();
        let rows = rows.as_array().unwrap();
        assert!(rows.iter().all(|r| r["pass"] == true));
        assert!(rows.iter().any(|r| r["mu"] == "3" && r["observed"] == true));
        assert!(membership_row_json(2, 2, 3, "3,2,1").is_err());
    }
}
