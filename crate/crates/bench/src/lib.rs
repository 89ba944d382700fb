//! Fixtures shared by the criterion benches.

use determina::io::parse_matrix_json;
use determina::PolyMatrix;

/// The 2x3 matrix `[[x^5, 0, y^3], [0, y^4, x^3]]`.
pub fn worked_matrix() -> PolyMatrix {
    parse_matrix_json(r#"{"vars": ["x", "y"], "matrix": [["x^5", "0", "y^3"], ["0", "y^4", "x^3"]]}"#)
        .expect("fixture parses")
        .matrix
}

/// A dense 4x4 matrix in two variables with entries of degree <= 2.
pub fn dense_square() -> PolyMatrix {
    let entries = [
        ["x + y^2", "x*y", "1 + x", "y"],
        ["y", "x^2 - y", "x*y", "2*x"],
        ["x - y", "y^2", "x", "1 + y"],
        ["x*y", "1", "y - x^2", "x"],
    ];
    let rows: Vec<String> = entries.iter().map(|r| format!("[{}]", r.iter().map(|e| format!("\"{e}\"")).collect::<Vec<_>>().join(", "))).collect();
    parse_matrix_json(&format!(r#"{{"vars": ["x", "y"], "matrix": [{}]}}"#, rows.join(", "))).expect("fixture parses").matrix
}
