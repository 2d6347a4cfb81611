use std::path::Path;

use serde::Deserialize;

/// Three comma-separated finite reals.
pub fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let v = parse_row(s)?;
    v.try_into()
        .map_err(|v: Vec<f64>| format!("expected 3 comma-separated numbers, found {}", v.len()))
}

fn parse_row(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let x: f64 = t.parse().map_err(|_| format!("not a number: {t:?}"))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("not a finite number: {t:?}"))
            }
        })
        .collect()
}

/// Rows separated by `;`, entries by `,`, e.g. `"1,0;0,1"`.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<f64>>, String> {
    let rows: Vec<Vec<f64>> = s.split(';').map(parse_row).collect::<Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err("matrix rows have different lengths".into());
    }
    Ok(rows)
}

type Matrix = Vec<Vec<f64>>;

/// Matrix payload of `density --file`. Metrics default to the identity.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixPayload {
    #[serde(rename = "J")]
    pub j: Vec<Vec<f64>>,
    #[serde(rename = "G", default)]
    pub g: Option<Vec<Vec<f64>>>,
    #[serde(rename = "H", default)]
    pub h: Option<Vec<Vec<f64>>>,
}

impl MatrixPayload {
    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text)
            .map_err(|e| format!("malformed payload {}: {e}", path.display()))
    }

    /// `(J, G, H)` with missing metrics filled in by identities.
    pub fn resolve(self) -> Result<(Matrix, Matrix, Matrix), String> {
        let n = self.j.len();
        let m = self.j.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err("Jacobian is empty".into());
        }
        let g = self.g.unwrap_or_else(|| identity(m));
        let h = self.h.unwrap_or_else(|| identity(n));
        Ok((self.j, g, h))
    }
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}
