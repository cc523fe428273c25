mod common;

use common::unit;
use qrm::perturb::{effective_splitting, level_pair, predicted_crossings};
use qrm::scan::linear_grid;
use qrm::spectra::{gap_curve, refine_crossing, SweptParam};

/// Every predicted root of the (m, n) coupling has an exact crossing of
/// the matching level pair within 2% of it.
#[test]
fn predicted_crossings_bracket_exact_ones() {
    for (m, n) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
        let p = unit(n as f64, 0.05, 0.0);
        let (k, _) = level_pair(m, n).unwrap();
        for root in predicted_crossings(&p, m, n).unwrap() {
            let r = refine_crossing(&p, SweptParam::G, (0.98 * root, 1.02 * root), k).unwrap();
            assert!(r.certified, "({m},{n}) near {root}: gap {}", r.gap_at_star);
            assert!((r.param_star - root).abs() <= 0.02 * root);
        }
    }
}

/// Away from g = 0, the exact gap approaches the two-level splitting as
/// Δ shrinks.
#[test]
fn error_shrinks_with_delta() {
    let grid = linear_grid((0.2, 2.0), 0.05).unwrap();
    let worst = |delta: f64| {
        let p = unit(1.0, delta, 0.0);
        let exact = gap_curve(&p, SweptParam::G, &grid, 4).unwrap();
        grid.iter()
            .zip(&exact)
            .map(|(&g, e)| {
                let eff = effective_splitting(&p.with_g(g), 2, 1).unwrap();
                (e - eff.splitting).abs() / delta
            })
            .fold(0.0, f64::max)
    };
    let errors: Vec<f64> = [0.2, 0.1, 0.05].into_iter().map(worst).collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
}
