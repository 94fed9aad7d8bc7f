use proptest::prelude::*;
use qgraph::discrete::{delta0, spectrum};
use qgraph::graph::{parse_graph, serialize_graph};
use qgraph::random::{random_document, seeded_rng};
use qgraph::VertexSpace;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialized_documents_parse_back(seed in any::<u64>(), unit in any::<bool>()) {
        let doc = random_document(&mut seeded_rng(seed), 7, unit);
        let text = serialize_graph(&doc);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(serialize_graph(&back), text);
    }

    #[test]
    fn flipping_an_edge_keeps_the_discrete_spectrum(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let doc = random_document(&mut seeded_rng(seed), 7, false);
        let g = &doc.graph;
        // custom spaces are listed in slot order, which only a loop flip changes
        let candidates: Vec<usize> = (0..g.edge_count()).filter(|&e| !g.edge(e).is_loop()).collect();
        prop_assume!(!candidates.is_empty());
        let e = candidates[pick.index(candidates.len())];
        let flipped = g.with_flipped_edge(e);
        let a = spectrum(&delta0(g, &VertexSpace::build(g, &doc.spaces).unwrap())).unwrap();
        let b = spectrum(&delta0(&flipped, &VertexSpace::build(&flipped, &doc.spaces).unwrap())).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-10, "{} vs {}", x, y);
        }
    }
}

#[test]
fn flipping_a_loop_with_standard_conditions_is_harmless() {
    let text = "vertices 2\nedge 0 0 0 1.0\nedge 1 0 1 0.5\n";
    let doc = parse_graph(text).unwrap();
    let g = &doc.graph;
    let flipped = g.with_flipped_edge(0);
    let a = spectrum(&delta0(g, &VertexSpace::standard(g))).unwrap();
    let b = spectrum(&delta0(&flipped, &VertexSpace::standard(&flipped))).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 1e-12);
    }
}
