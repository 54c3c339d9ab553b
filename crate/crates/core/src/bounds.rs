//! Closed-form crossing-number bounds for complete graphs on orientable
//! surfaces, and the known ranges of `cr_g(K_n)` for `8 <= n <= 11`,
//! `0 <= g <= 5`.
//!
//! Fractional bounds use exact rationals and are rounded once at the end.

use std::sync::OnceLock;

use num_integer::binomial;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = Ratio<i64>;

pub const TABLE_N: std::ops::RangeInclusive<u64> = 8..=11;
pub const TABLE_G: std::ops::RangeInclusive<u64> = 0..=5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("{0}")]
    Domain(String),
}

/// `C(n,2) - 3n + 6 - 6g`, clamped at 0.
pub fn kainen_lower_bound(n: u64, g: u64) -> u64 {
    let v = binomial(n as i64, 2) - 3 * n as i64 + 6 - 6 * g as i64;
    v.max(0) as u64
}

/// Guy's `Z(n)`, the crossing count of his drawing of `K_n` in the plane.
pub fn guy_z(n: u64) -> u64 {
    (n / 2)
        * ((n.saturating_sub(1)) / 2)
        * ((n.saturating_sub(2)) / 2)
        * ((n.saturating_sub(3)) / 2)
        / 4
}

/// Minimum genus of `K_n` (Ringel and Youngs).
pub fn genus_complete(n: u64) -> u64 {
    if n < 3 {
        return 0;
    }
    ((n - 3) * (n.saturating_sub(4))).div_ceil(12)
}

/// Largest chromatic number of a graph on the genus-`g` surface.
pub fn heawood_number(g: u64) -> u64 {
    (7 + (1 + 48 * g).isqrt()) / 2
}

/// Edges missing from a triangulation when `K_n` sits on its genus surface.
pub fn triangulation_deficiency(n: u64) -> i64 {
    let e = binomial(n as i64, 2);
    let f = 2 - 2 * genus_complete(n) as i64 - n as i64 + e;
    2 * e - 3 * f
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToroidalBounds {
    pub lower: u64,
    /// The general upper formula `59/216 C(n-1,4)`, not rounded.
    pub upper_formula: Rational,
}

pub fn toroidal_bounds(n: u64) -> Result<ToroidalBounds, BoundsError> {
    if n < 10 {
        return Err(BoundsError::Domain(format!(
            "toroidal bounds hold for n >= 10, got {n}"
        )));
    }
    let lower = Rational::new(23, 210) * binomial(n as i64, 4);
    let upper = Rational::new(59, 216) * binomial(n as i64 - 1, 4);
    Ok(ToroidalBounds {
        lower: lower.ceil().to_integer() as u64,
        upper_formula: upper,
    })
}

#[derive(Clone, Debug, Deserialize)]
struct TableEntry {
    n: u64,
    g: u64,
    lower: Option<u64>,
    upper: Option<u64>,
    lower_source: Option<String>,
    upper_source: Option<String>,
}

#[derive(Debug, Deserialize)]
struct TableData {
    version: u32,
    entries: Vec<TableEntry>,
}

fn literature() -> &'static [TableEntry] {
    static DATA: OnceLock<Vec<TableEntry>> = OnceLock::new();
    DATA.get_or_init(|| {
        let data: TableData = serde_json::from_str(include_str!("../data/crossing_table.json"))
            .expect("embedded crossing table parses");
        assert_eq!(data.version, 1, "unknown crossing table version");
        data.entries
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingRange {
    pub n: u64,
    pub g: u64,
    pub lower: u64,
    pub upper: u64,
    pub lower_source: String,
    pub upper_source: String,
    /// `K_n` embeds in `S_g`, so the crossing number is 0.
    pub embeddable: bool,
    /// `g` exceeds the genus of `K_n`; the table leaves these cells blank.
    pub beyond_genus: bool,
    /// Outside the tabulated range: formulas only.
    pub partial: bool,
}

impl CrossingRange {
    /// Cell text as in the summary grid: `-`, a value, or `[lo, hi]`.
    pub fn cell(&self) -> String {
        if self.beyond_genus {
            "-".into()
        } else if self.upper == self.lower {
            self.upper.to_string()
        } else {
            format!("[{}, {}]", self.lower, self.upper)
        }
    }
}

pub fn known_range(n: u64, g: u64) -> Result<CrossingRange, BoundsError> {
    if n < 3 {
        return Err(BoundsError::Domain(format!(
            "n must be at least 3, got {n}"
        )));
    }
    let gamma = genus_complete(n);
    let partial = !(TABLE_N.contains(&n) && TABLE_G.contains(&g));
    if g >= gamma {
        return Ok(CrossingRange {
            n,
            g,
            lower: 0,
            upper: 0,
            lower_source: "K_n embeds: genus formula of Ringel and Youngs".into(),
            upper_source: "K_n embeds: genus formula of Ringel and Youngs".into(),
            embeddable: true,
            beyond_genus: g > gamma,
            partial,
        });
    }

    // Formula candidates first, so ties credit the formula.
    let mut lower = (kainen_lower_bound(n, g), "Kainen lower bound".to_string());
    if g == 1 && n >= 10 {
        let t = toroidal_bounds(n)?.lower;
        if t > lower.0 {
            lower = (t, "Guy, Jenkyns and Schaer: 23/210 C(n,4)".into());
        }
    }
    let mut upper = (guy_z(n), "Guy: Z(n) drawing in the plane".to_string());
    if !partial {
        if let Some(e) = literature().iter().find(|e| e.n == n && e.g == g) {
            if let Some(l) = e.lower.filter(|&l| l > lower.0) {
                lower = (l, e.lower_source.clone().unwrap_or_default());
            }
            if let Some(u) = e.upper.filter(|&u| u <= upper.0) {
                upper = (u, e.upper_source.clone().unwrap_or_default());
            }
        }
    }
    Ok(CrossingRange {
        n,
        g,
        lower: lower.0,
        upper: upper.0,
        lower_source: lower.1,
        upper_source: upper.1,
        embeddable: false,
        beyond_genus: false,
        partial,
    })
}

/// Rows `g = 0..=5`, columns `n = 8..=11`.
pub fn crossing_grid() -> Vec<Vec<CrossingRange>> {
    TABLE_G
        .map(|g| {
            TABLE_N
                .map(|n| known_range(n, g).expect("table cells are in range"))
                .collect()
        })
        .collect()
}

pub fn render_table() -> String {
    let grid = crossing_grid();
    let mut rows = vec![std::iter::once("g/n".to_string())
        .chain(TABLE_N.map(|n| n.to_string()))
        .collect::<Vec<_>>()];
    for (g, line) in TABLE_G.zip(&grid) {
        rows.push(
            std::iter::once(g.to_string())
                .chain(line.iter().map(CrossingRange::cell))
                .collect(),
        );
    }
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        out.push_str(cells.join(" | ").trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(guy_z(4), 0);
        assert_eq!(guy_z(5), 1);
        assert_eq!(genus_complete(4), 0);
        assert_eq!(genus_complete(13), 8);
        assert_eq!(heawood_number(0), 4);
        assert_eq!(heawood_number(3), 9);
        assert_eq!(kainen_lower_bound(9, 3), 0);
    }

    #[test]
    fn toroidal_domain() {
        assert!(toroidal_bounds(9).is_err());
        let t = toroidal_bounds(11).unwrap();
        assert_eq!(t.upper_formula, Rational::new(2065, 36));
    }

    #[test]
    fn outside_table_is_partial() {
        let r = known_range(12, 0).unwrap();
        assert!(r.partial);
        assert_eq!(r.upper, 150);
        assert!(known_range(2, 0).is_err());
    }
}
