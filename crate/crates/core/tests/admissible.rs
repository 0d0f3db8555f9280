//! Admissible-exponent windows: rational interval arithmetic, the float
//! guard band, and the rendered summary table.

use num_rational::Ratio;
use cryamabe::admissible::{
    admissibility, admissibility_f64, admissible_intervals, embedding_margin, render_table,
    render_table_csv, summary_rows, GAMMA_GUARD,
};
use proptest::prelude::*;

type R = Ratio<i64>;

fn r(num: i64, den: i64) -> R {
    Ratio::new(num, den)
}

#[test]
fn interval_endpoints() {
    // n-th window family: [k, kQ/(Q−1)) for k = 1..n with Q = 2n+2.
    let ivs = admissible_intervals(3);
    assert_eq!(ivs.len(), 3);
    assert_eq!(ivs[0], (r(1, 1), r(8, 7)));
    assert_eq!(ivs[1], (r(2, 1), r(16, 7)));
    assert_eq!(ivs[2], (r(3, 1), r(24, 7)));

    let ivs = admissible_intervals(1);
    assert_eq!(ivs, vec![(r(1, 1), r(4, 3))]);
}

#[test]
fn classic_membership_and_rejections() {
    // n = 1: [1, 4/3).
    assert!(admissibility(1, r(1, 1)).unwrap().admissible);
    assert!(admissibility(1, r(13, 10)).unwrap().admissible);
    assert!(!admissibility(1, r(4, 3)).unwrap().admissible); // half-open
    assert!(!admissibility(1, r(1, 2)).unwrap().admissible);
    assert!(!admissibility(1, r(3, 2)).unwrap().admissible);

    // n = 2: [1, 6/5) ∪ [2, 12/5).
    assert!(admissibility(2, r(11, 10)).unwrap().admissible);
    assert!(!admissibility(2, r(6, 5)).unwrap().admissible);
    assert!(admissibility(2, r(2, 1)).unwrap().admissible);
    assert!(admissibility(2, r(23, 10)).unwrap().admissible);
    assert!(!admissibility(2, r(12, 5)).unwrap().admissible);

    // Domain errors: γ ≤ 0 and γ ≥ Q/2.
    assert!(admissibility(1, r(0, 1)).is_err());
    assert!(admissibility(1, r(-1, 2)).is_err());
    assert!(admissibility(1, r(2, 1)).is_err());
    assert!(admissibility(2, r(3, 1)).is_err());
}

proptest! {
    /// Exact rational membership and the f64 evaluator agree away from the
    /// guard band.
    #[test]
    fn rational_float_equivalence(n in 1usize..9, num in 1i64..700, den in 100i64..200) {
        let gamma = r(num, den);
        let q = r(2 * n as i64 + 2, 1);
        prop_assume!(gamma > r(0, 1) && gamma < q / 2);
        // Stay a safe distance from every interval endpoint so the float
        // route cannot land in the guard band.
        let g = *gamma.numer() as f64 / *gamma.denom() as f64;
        let far = admissible_intervals(n).iter().all(|(lo, hi)| {
            let lo = *lo.numer() as f64 / *lo.denom() as f64;
            let hi = *hi.numer() as f64 / *hi.denom() as f64;
            (g - lo).abs() > 1e-9 && (g - hi).abs() > 1e-9
        });
        prop_assume!(far);
        let exact = admissibility(n, gamma).unwrap();
        let float = admissibility_f64(n, g).unwrap();
        prop_assert_eq!(exact.admissible, float.admissible);
        prop_assert_eq!(exact.branch, float.branch);
    }

    /// Inside each window the subcritical embedding margin is positive.
    #[test]
    fn margin_positive_on_branches(n in 1usize..9, k in 1usize..9, frac in 0i64..1000) {
        prop_assume!(k <= n);
        let (lo, hi) = admissible_intervals(n)[k - 1];
        // gamma = lo + frac/1001 · (hi − lo), always inside the half-open window.
        let gamma = lo + (hi - lo) * r(frac, 1001);
        let report = admissibility(n, gamma).unwrap();
        prop_assert!(report.admissible);
        prop_assert_eq!(report.branch, Some(k));
        let margin = embedding_margin(n, gamma).unwrap();
        prop_assert!(margin > r(0, 1), "margin {margin} at n={n} k={k}");
    }
}

#[test]
fn guard_band_is_rejected_not_misclassified() {
    // Within 1e-12 of an endpoint (but not exactly on it) the float route
    // refuses to classify.
    let hi = 4.0 / 3.0;
    assert!(admissibility_f64(1, hi + 0.3 * GAMMA_GUARD).is_err());
    assert!(admissibility_f64(1, hi - 0.3 * GAMMA_GUARD).is_err());
    // Exact endpoint values classify exactly.
    assert!(admissibility_f64(1, 1.0).unwrap().admissible);
    // Far away is fine.
    assert!(admissibility_f64(1, 1.2).unwrap().admissible);
    assert!(!admissibility_f64(1, 1.4).unwrap().admissible);
}

#[test]
fn solution_counts_sequence() {
    // ⌊(n+1)/2⌋ distinct symmetry classes: 1,1,2,2,3,3,4,4.
    let rows = summary_rows(8);
    let counts: Vec<usize> = rows.iter().map(|r| r.solution_count).collect();
    assert_eq!(counts, vec![1, 1, 2, 2, 3, 3, 4, 4]);
}

#[test]
fn group_chains_match_partitions() {
    let rows = summary_rows(8);
    assert_eq!(rows[0].groups, vec!["U(1)×U(1)"]);
    assert_eq!(rows[2].groups, vec!["U(1)×U(2)×U(1)", "U(2)×U(2)"]);
    assert_eq!(
        rows[6].groups,
        vec![
            "U(1)×U(6)×U(1)",
            "U(2)×U(4)×U(2)",
            "U(3)×U(2)×U(3)",
            "U(4)×U(4)"
        ]
    );
    assert_eq!(rows[7].groups[3], "U(4)×U(1)×U(4)");
}

#[test]
fn gamma_range_formatting() {
    let rows = summary_rows(8);
    assert_eq!(rows[0].gamma_ranges, "[1, 4/3)");
    assert_eq!(rows[1].gamma_ranges, "[1, 6/5) ∪ [2, 12/5)");
    assert_eq!(rows[2].gamma_ranges, "[1, 8/7) ∪ [2, 16/7) ∪ [3, 24/7)");
    // n ≥ 4 collapses to the closed form.
    assert_eq!(rows[3].gamma_ranges, "∪_{k=1..4} [k, 10k/9)");
    assert_eq!(rows[7].gamma_ranges, "∪_{k=1..8} [k, 18k/17)");
}

#[test]
fn rendered_table_is_stable() {
    let text = render_table(8);
    // One header, one rule, eight data rows.
    assert_eq!(text.trim_end().lines().count(), 10);
    for n in 1..=8 {
        assert!(text.lines().any(|l| l.trim_start().starts_with(&n.to_string())));
    }
    // Q column carries 2n+2.
    assert!(text.contains("18"));

    let csv = render_table_csv(8);
    let mut lines = csv.trim_end().lines();
    let header = lines.next().unwrap();
    assert!(header.split(',').count() >= 5);
    assert_eq!(lines.count(), 8);
}

#[test]
fn embedding_margin_sign_tracks_admissibility() {
    // Past a window's right endpoint the margin turns non-positive, and
    // below γ = 1 (floor 0) it is negative as well.
    assert!(embedding_margin(1, r(3, 2)).unwrap() <= r(0, 1));
    assert!(embedding_margin(2, r(13, 10)).unwrap() <= r(0, 1));
    assert!(embedding_margin(1, r(1, 2)).unwrap() < r(0, 1));
}
