use std::f64::consts::PI;

use num_complex::Complex64;

use flowpoly_core::combinatorics::YoungDiagram;
use flowpoly_core::spectra::{
    asymptotic_angles, classify_point, leading_eigs, scan_qc, trace_curve, ClassifyOptions, EigOptions, FeatureKind, SectorId, Selection, SpectralModel,
    Window,
};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sym(l: usize) -> SectorId {
    if l == 0 {
        SectorId::block(0, YoungDiagram::empty())
    } else {
        SectorId::block(l, YoungDiagram::row(l))
    }
}

#[test]
fn dominance_pattern_on_the_real_axis() {
    let opts = EigOptions::default();
    for k in [4, 5] {
        let m = SpectralModel::build(k, Selection::All).unwrap();
        for (q, l) in [(-1.0, 1), (1.5, 1), (3.0, 2), (4.3, 3)] {
            let d = leading_eigs(&m, c(q), &opts).unwrap().dominant().unwrap();
            assert_eq!(d.id, sym(l), "k={k} Q={q}");
        }
        let above = leading_eigs(&m, c(5.5), &opts).unwrap().dominant().unwrap();
        assert_eq!(above.id, if k % 2 == 0 { sym(1) } else { sym(0) }, "k={k} above Q_c");
    }
}

#[test]
fn q5_is_regular_for_k5() {
    let m = SpectralModel::build(5, Selection::All).unwrap();
    let f = classify_point(&m, c(5.0), &EigOptions::default(), &ClassifyOptions::default()).unwrap();
    assert!(f.is_none(), "{f:?}");
    let f = classify_point(&m, c(3.0), &EigOptions::default(), &ClassifyOptions::default()).unwrap().unwrap();
    assert_eq!(f.kind, FeatureKind::IsolatedA);
    assert_eq!(f.witnesses, vec![sym(2)]);
}

#[test]
fn qc_for_small_k() {
    let opts = EigOptions::default();
    for (k, want) in [(3, 3.7818423129), (4, 4.5697435537)] {
        let m = SpectralModel::build(k, Selection::All).unwrap();
        let r = scan_qc(&m, 1.5, 6.0, 0.1, &opts).unwrap();
        assert!((r.qc - want).abs() < 1e-8, "k={k}: {}", r.qc);
        assert!((r.mu.0.norm() - r.mu.1.norm()).abs() < 1e-8 * r.mu.0.norm());
    }
}

#[test]
fn k2_curve_crosses_at_golden_ratio_plus_two() {
    let m = SpectralModel::build(2, Selection::All).unwrap();
    let opts = EigOptions::default();
    let w = Window { re0: -1.0, re1: 5.0, im0: -3.0, im1: 3.0 };
    let curve = trace_curve(&m, w, 30, &opts).unwrap();
    let crossings = curve.real_crossings(1e-9);
    let top = crossings.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!((top - (5f64.sqrt() + 5.0) / 2.0).abs() < 1e-9, "{crossings:?}");
    for p in curve.points() {
        let s = leading_eigs(&m, p.q, &opts).unwrap();
        let a = s.record(&p.pair.0).unwrap().mu1.norm();
        let b = s.record(&p.pair.1).unwrap().mu1.norm();
        if curve.polylines.iter().any(|l| l.first().map(|x| x.q) == Some(p.q) || l.last().map(|x| x.q) == Some(p.q)) || (a - b).abs() <= 1e-8 * a.max(b) {
            continue;
        }
        // Only cell-centre joints may sit off the curve.
        assert!((a - b).abs() <= 1e-2 * a.max(b), "{}: {a} vs {b}", p.q);
    }
}

#[test]
fn outward_branch_angles() {
    let opts = EigOptions::default();
    for k in 1..=3 {
        let m = SpectralModel::build(k, Selection::All).unwrap();
        let angles = asymptotic_angles(&m, 400.0, 96, &opts).unwrap();
        assert_eq!(angles.len(), 2 * k, "k={k}: {angles:?}");
        let mut want: Vec<f64> = (1..=2 * k).map(|j| (j as f64 - 0.5) * PI / k as f64).map(|t| if t > PI { t - 2.0 * PI } else { t }).collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, w) in angles.iter().zip(&want) {
            assert!((a - w).abs() < 0.02, "k={k}: {angles:?} vs {want:?}");
        }
        // Dominant sector alternates between (0) and (1,(1)) around the circle.
        let first = (1.0 / k as f64) * PI;
        let d = leading_eigs(&m, Complex64::from_polar(400.0, first), &opts).unwrap().dominant().unwrap().id;
        assert_eq!(d, if k % 2 == 0 { sym(0) } else { sym(1) }, "k={k}");
    }
}
