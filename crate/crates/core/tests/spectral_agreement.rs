use qgraph::random::{random_document, random_graph, seeded_rng};
use qgraph::spectral::{dirac_spectrum, metric_spectrum_equilateral, metric_spectrum_scan, SpectralPoint, DEFAULT_GRID};
use qgraph::{Coupling, VertexSpace};
use rand::Rng;

fn finite(points: &[SpectralPoint]) -> Vec<(f64, usize)> {
    points
        .iter()
        .filter(|p| !p.is_exceptional())
        .map(|p| (p.value, p.multiplicity))
        .collect()
}

#[test]
fn transfer_and_scan_agree_on_unit_graphs() {
    let mut rng = seeded_rng(11);
    let mut compared = 0;
    for _ in 0..30 {
        let doc = random_document(&mut rng, 6, true);
        let vs = VertexSpace::build(&doc.graph, &doc.spaces).unwrap();
        let l = Coupling::scalar(rng.gen_range(-1.0..1.0), vs.dim());
        let (lo, hi) = (-4.0, 45.0);
        let transfer = finite(&metric_spectrum_equilateral(&doc.graph, &vs, &l, lo, hi).unwrap());
        let scan = finite(&metric_spectrum_scan(&doc.graph, &vs, &l, lo, hi, DEFAULT_GRID).unwrap());
        assert_eq!(transfer.len(), scan.len(), "{transfer:?} vs {scan:?}");
        for (a, b) in transfer.iter().zip(&scan) {
            assert!((a.0 - b.0).abs() <= 1e-8 * (1.0 + a.0.abs()), "{a:?} vs {b:?}");
            assert_eq!(a.1, b.1, "multiplicity at {}", a.0);
        }
        compared += transfer.len();
    }
    assert!(compared > 50);
}

#[test]
fn massless_dirac_spectrum_is_symmetric() {
    let mut rng = seeded_rng(12);
    for _ in 0..5 {
        let g = random_graph(&mut rng, 5, true);
        let vs = VertexSpace::standard(&g);
        let pts = dirac_spectrum(&g, &vs, 0.0, 0.0, -7.0, 7.0).unwrap();
        let pos = finite(&pts).into_iter().filter(|p| p.0 > 0.0).collect::<Vec<_>>();
        let mut neg = finite(&pts)
            .into_iter()
            .filter(|p| p.0 < 0.0)
            .map(|(v, k)| (-v, k))
            .collect::<Vec<_>>();
        neg.reverse();
        assert_eq!(pos.len(), neg.len());
        for (a, b) in pos.iter().zip(&neg) {
            assert!((a.0 - b.0).abs() <= 1e-9 && a.1 == b.1);
        }
    }
}

#[test]
fn massive_dirac_squares_land_in_the_laplace_spectrum() {
    let mut rng = seeded_rng(13);
    let m = 1.3;
    for _ in 0..5 {
        let g = random_graph(&mut rng, 5, true);
        let vs = VertexSpace::standard(&g);
        let laplace = finite(&metric_spectrum_equilateral(&g, &vs, &Coupling::zero(vs.dim()), -1.0, 60.0).unwrap());
        for (mu, k) in finite(&dirac_spectrum(&g, &vs, 0.0, m, -7.0, 7.0).unwrap()) {
            let lambda = mu * mu - m * m;
            let hit = laplace
                .iter()
                .find(|p| (p.0 - lambda).abs() <= 1e-8 * (1.0 + lambda.abs()));
            assert!(hit.is_some_and(|p| p.1 == k), "μ = {mu} gives λ = {lambda}, not in {laplace:?}");
        }
    }
}

#[test]
fn scan_handles_dense_couplings_on_unit_graphs() {
    // scan with a dense L and with the same L written as a scalar agree
    let mut rng = seeded_rng(14);
    let doc = random_document(&mut rng, 5, true);
    let vs = VertexSpace::build(&doc.graph, &doc.spaces).unwrap();
    let scalar = Coupling::scalar(0.4, vs.dim());
    let dense = Coupling::dense(scalar.matrix().matrix().clone()).unwrap();
    let a = finite(&metric_spectrum_scan(&doc.graph, &vs, &scalar, -2.0, 30.0, DEFAULT_GRID).unwrap());
    let b = finite(&metric_spectrum_scan(&doc.graph, &vs, &dense, -2.0, 30.0, DEFAULT_GRID).unwrap());
    assert_eq!(a, b);
}
