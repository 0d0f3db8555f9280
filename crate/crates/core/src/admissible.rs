//! Admissible exponent ranges for the sign-changing construction.
//!
//! For CR dimension n the admissible set is the union over k = 1..n of
//! [k, kQ/(Q−1)) with Q = 2n+2. Membership is decided in exact rational
//! arithmetic; a float entry point applies a guard band so values within
//! 1e-12 of an endpoint are not silently classified by rounding luck.

use num_rational::Ratio;
use num_traits::{One, Zero};
use std::fmt::Write as _;

use crate::{homogeneous_dim, Error, Result};

pub type Rational = Ratio<i64>;

/// Width of the float guard band around interval endpoints.
pub const GAMMA_GUARD: f64 = 1e-12;

/// Outcome of an exact admissibility query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub n: usize,
    pub gamma: Rational,
    pub admissible: bool,
    /// Index k of the interval [k, kQ/(Q−1)) containing gamma, when admissible.
    pub branch: Option<usize>,
    /// l = ⌊γ⌋, the integer part entering the embedding exponent.
    pub floor: i64,
    /// The critical embedding exponent q_l* = 2(Q−1)/(Q−1−2l), when defined.
    pub embedding_exponent: Option<Rational>,
    /// The Lebesgue exponent p = 2Q/(Q−2γ) of the problem.
    pub critical_exponent: Option<Rational>,
}

/// The admissible union for dimension n as a list of half-open intervals
/// [lo, hi), k = 1..n.
pub fn admissible_intervals(n: usize) -> Vec<(Rational, Rational)> {
    let q = Rational::from_integer(homogeneous_dim(n) as i64);
    let qm1 = q - Rational::one();
    (1..=n as i64)
        .map(|k| {
            let lo = Rational::from_integer(k);
            (lo, lo * q / qm1)
        })
        .collect()
}

/// Exact admissibility decision for rational gamma.
pub fn admissibility(n: usize, gamma: Rational) -> Result<AdmissibilityReport> {
    if n == 0 {
        return Err(Error::Domain("need CR dimension n >= 1".into()));
    }
    if gamma <= Rational::zero() {
        return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
    }
    let q = Rational::from_integer(homogeneous_dim(n) as i64);
    if gamma >= q / Rational::from_integer(2) {
        return Err(Error::Domain(format!(
            "gamma must lie in (0, Q/2) = (0, {}), got {gamma}",
            n + 1
        )));
    }
    let branch = admissible_intervals(n)
        .into_iter()
        .enumerate()
        .find(|(_, (lo, hi))| &gamma >= lo && &gamma < hi)
        .map(|(idx, _)| idx + 1);
    let floor = gamma.floor().to_integer();
    let qm1 = q - Rational::one();
    let denom = qm1 - Rational::from_integer(2 * floor);
    let embedding_exponent = if denom > Rational::zero() {
        Some((Rational::one() + Rational::one()) * qm1 / denom)
    } else {
        None
    };
    let pden = q - (Rational::one() + Rational::one()) * gamma;
    let critical_exponent = if pden > Rational::zero() {
        Some((Rational::one() + Rational::one()) * q / pden)
    } else {
        None
    };
    Ok(AdmissibilityReport {
        n,
        gamma,
        admissible: branch.is_some(),
        branch,
        floor,
        embedding_exponent,
        critical_exponent,
    })
}

/// Float entry point. Values within [`GAMMA_GUARD`] of an interval endpoint
/// are rejected as ambiguous rather than classified by rounding.
pub fn admissibility_f64(n: usize, gamma: f64) -> Result<AdmissibilityReport> {
    if !gamma.is_finite() {
        return Err(Error::NonFinite("gamma".into()));
    }
    for (lo, hi) in admissible_intervals(n) {
        for endpoint in [lo, hi] {
            let e = *endpoint.numer() as f64 / *endpoint.denom() as f64;
            if (gamma - e).abs() < GAMMA_GUARD && (gamma - e).abs() != 0.0 {
                return Err(Error::Domain(format!(
                    "gamma={gamma} lies within {GAMMA_GUARD} of endpoint {endpoint}; \
                     pass the exact rational instead"
                )));
            }
        }
    }
    let r = Ratio::approximate_float(gamma)
        .ok_or_else(|| Error::Domain(format!("gamma={gamma} not representable")))?;
    admissibility(n, r)
}

/// The strict inequality chain p < q_l* behind each admissible branch: on
/// branch k with l = ⌊γ⌋ = k the problem exponent stays below the critical
/// embedding exponent. Returns the exact margin q_l* − p (positive iff the
/// chain holds).
pub fn embedding_margin(n: usize, gamma: Rational) -> Result<Rational> {
    let report = admissibility(n, gamma)?;
    let p = report
        .critical_exponent
        .ok_or_else(|| Error::Domain("gamma >= Q/2: no critical exponent".into()))?;
    let qstar = report
        .embedding_exponent
        .ok_or_else(|| Error::Domain("floor too large: no embedding exponent".into()))?;
    Ok(qstar - p)
}

/// One row of the summary table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub n: usize,
    pub q: usize,
    pub groups: Vec<String>,
    pub gamma_ranges: String,
    pub solution_count: usize,
}

fn format_interval(k: i64, q: i64) -> String {
    // [k, kQ/(Q−1)) with the fraction reduced.
    let hi = Rational::new(k * q, q - 1);
    if hi.is_integer() {
        format!("[{}, {})", k, hi.numer())
    } else {
        format!("[{}, {}/{})", k, hi.numer(), hi.denom())
    }
}

fn group_chain(parts: &[usize]) -> String {
    let mut s = String::new();
    for (idx, p) in parts.iter().enumerate() {
        if idx > 0 {
            s.push('×');
        }
        let _ = write!(s, "U({p})");
    }
    s
}

/// The summary table for n = 1..max_n: one row per dimension with the
/// symmetry groups G_i, the admissible union, and the count ⌊(n+1)/2⌋ of
/// mutually non-conjugate constructions.
pub fn summary_rows(max_n: usize) -> Vec<TableRow> {
    (1..=max_n)
        .map(|n| {
            let q = homogeneous_dim(n) as i64;
            let count = (n + 1) / 2;
            let groups = (1..=count)
                .map(|i| {
                    if n + 1 == 2 * i {
                        group_chain(&[i, i])
                    } else {
                        group_chain(&[i, n + 1 - 2 * i, i])
                    }
                })
                .collect();
            // Mirror the usual presentation: explicit unions while they fit,
            // the closed generic form from n = 4 on (Q/(Q−1) is already in
            // lowest terms, so the k-fraction needs no reduction).
            let gamma_ranges = if n <= 3 {
                (1..=n as i64)
                    .map(|k| format_interval(k, q))
                    .collect::<Vec<_>>()
                    .join(" ∪ ")
            } else {
                format!("∪_{{k=1..{n}}} [k, {q}k/{})", q - 1)
            };
            TableRow {
                n,
                q: q as usize,
                groups,
                gamma_ranges,
                solution_count: count,
            }
        })
        .collect()
}

/// Renders the summary table as aligned plain text.
pub fn render_table(max_n: usize) -> String {
    let rows = summary_rows(max_n);
    let mut lines: Vec<[String; 5]> = vec![[
        "n".into(),
        "Q".into(),
        "symmetry groups".into(),
        "admissible gamma".into(),
        "solutions".into(),
    ]];
    for r in &rows {
        lines.push([
            r.n.to_string(),
            r.q.to_string(),
            r.groups.join(", "),
            r.gamma_ranges.clone(),
            r.solution_count.to_string(),
        ]);
    }
    let mut widths = [0usize; 5];
    for line in &lines {
        for (w, cell) in widths.iter_mut().zip(line) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for (idx, line) in lines.iter().enumerate() {
        for (col, cell) in line.iter().enumerate() {
            if col > 0 {
                out.push_str("  ");
            }
            let _ = write!(out, "{cell:<width$}", width = widths[col]);
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
        if idx == 0 {
            for (col, w) in widths.iter().enumerate() {
                if col > 0 {
                    out.push_str("  ");
                }
                out.push_str(&"-".repeat(*w));
            }
            out.push('\n');
        }
    }
    out
}

/// Renders the summary table as CSV with one row per (n, group) pair kept
/// joined by semicolons so rows stay one-per-dimension.
pub fn render_table_csv(max_n: usize) -> String {
    let mut out = String::from("n,Q,symmetry_groups,admissible_gamma,solutions\n");
    for r in summary_rows(max_n) {
        let _ = writeln!(
            out,
            "{},{},\"{}\",\"{}\",{}",
            r.n,
            r.q,
            r.groups.join("; "),
            r.gamma_ranges,
            r.solution_count
        );
    }
    out
}
