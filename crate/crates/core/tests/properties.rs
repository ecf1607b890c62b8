//! Property tests over random grid diagrams and the corpus.

use proptest::prelude::*;
use qathin::goeritz;
use qathin::gridfloer::{hfk_delta_ranks, tilde_complex, GridDiagram};
use qathin::harness::Corpus;
use qathin::khovanov::{self, khovanov_reduced_f2, khovanov_reduced_z, KhComplex};
use qathin::quasialt::{qa_search, verify_certificate, verify_certificate_for};
use qathin::states::{enumerate_states, state_thinness_predictor};
use qathin::PlanarDiagram;

const CUBE: usize = 14;

fn grid(max: usize) -> impl Strategy<Value = GridDiagram> {
    (3..=max)
        .prop_flat_map(|n| {
            let ids: Vec<usize> = (0..n).collect();
            (Just(ids.clone()).prop_shuffle(), Just(ids).prop_shuffle())
        })
        .prop_filter("markers share a cell", |(o, x)| {
            o.iter().zip(x).all(|(a, b)| a != b)
        })
        .prop_map(|(o, x)| GridDiagram::new(o, x).unwrap())
}

/// A connected diagram with at most `max_crossings` crossings: either a
/// simplified random grid or a corpus diagram.
fn diagram(max_crossings: usize) -> impl Strategy<Value = PlanarDiagram> {
    let corpus: Vec<PlanarDiagram> = Corpus::load_default()
        .unwrap()
        .diagrams
        .into_iter()
        .filter(|e| e.diagram.crossing_count() <= max_crossings)
        .map(|e| e.diagram)
        .collect();
    prop_oneof![
        grid(7).prop_map(|g| g.to_planar_diagram().unwrap().simplify()),
        prop::sample::select(corpus),
    ]
    .prop_filter("small connected projection", move |d| {
        d.is_connected() && d.crossing_count() <= max_crossings
    })
}

/// A corpus knot with at most `max_crossings` crossings, possibly kinked.
fn knot(max_crossings: usize) -> impl Strategy<Value = PlanarDiagram> {
    let knots: Vec<PlanarDiagram> = Corpus::load_default()
        .unwrap()
        .knots()
        .filter(|e| (1..=max_crossings).contains(&e.diagram.crossing_count()))
        .map(|e| e.diagram.clone())
        .collect();
    (prop::sample::select(knots), kinks()).prop_map(|(d, ks)| kinked(&d, &ks))
}

/// The diagram with `kinks` Reidemeister I loops added.
fn kinked(d: &PlanarDiagram, kinks: &[(usize, bool, bool)]) -> PlanarDiagram {
    let mut out = d.clone();
    for &(arc, over, twist) in kinks {
        if out.n_arcs() > 0 {
            out = out.add_kink(arc % out.n_arcs(), over, twist).unwrap();
        }
    }
    out
}

fn kinks() -> impl Strategy<Value = Vec<(usize, bool, bool)>> {
    prop::collection::vec((0usize..64, any::<bool>(), any::<bool>()), 0..3)
}

/// Relabels arcs by `perm` and reorders crossings by `order`.
fn relabeled(d: &PlanarDiagram, perm: &[usize], order: &[usize]) -> PlanarDiagram {
    let tuples: Vec<[u64; 4]> = order
        .iter()
        .map(|&c| d.crossings()[c].map(|a| perm[a] as u64 * 3 + 7))
        .collect();
    PlanarDiagram::from_pd(&tuples).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn signature_and_determinant_are_invariant(g in grid(7), ks in kinks()) {
        let d = g.to_planar_diagram().unwrap();
        prop_assume!(d.is_connected());
        let sigma = goeritz::signature(&d).unwrap();
        let det = goeritz::determinant(&d).unwrap();
        let s = d.simplify();
        prop_assert!(s.crossing_count() <= d.crossing_count());
        prop_assert_eq!(goeritz::determinant(&s).unwrap(), det);
        if s.is_connected() {
            prop_assert_eq!(goeritz::signature(&s).unwrap(), sigma);
        }
        let k = kinked(&d, &ks);
        prop_assert_eq!(goeritz::signature(&k).unwrap(), sigma);
        prop_assert_eq!(goeritz::determinant(&k).unwrap(), det);
        prop_assert_eq!(goeritz::signature(&d.mirror()).unwrap(), -sigma);
        prop_assert_eq!(goeritz::determinant(&d.mirror()).unwrap(), det);
    }

    #[test]
    fn grid_and_planar_views_agree(g in grid(6)) {
        let d = g.to_planar_diagram().unwrap();
        prop_assume!(d.components() == 1);
        let r = hfk_delta_ranks(&g, 6).unwrap();
        // |Δ(-1)| = det for knots
        let (re, im) = r.alexander.eval_i();
        prop_assert_eq!((re * re + im * im) as u64, goeritz::determinant(&d).unwrap().pow(2));
        let a = &r.alexander;
        for (e, c) in a.terms() {
            prop_assert_eq!(a.coeff(-e), c);
        }
    }

    #[test]
    fn grid_complex_is_a_complex(g in grid(6)) {
        let cx = tilde_complex(&g, 6).unwrap();
        prop_assert!(cx.d_squared_is_zero());
        prop_assert!(cx.gradings_consistent());
        let factor = 1usize << (g.size() - g.components());
        let mut by_delta = std::collections::BTreeMap::new();
        for (&(m2, a2), &r) in &cx.homology() {
            *by_delta.entry(a2 - m2).or_insert(0usize) += r;
        }
        prop_assert!(by_delta.values().all(|r| r % factor == 0));
    }

    #[test]
    fn hfk_is_translation_invariant(g in grid(6), dc in 0usize..6, dr in 0usize..6) {
        let a = hfk_delta_ranks(&g, 6).unwrap();
        let b = hfk_delta_ranks(&g.translate(dc % g.size(), dr % g.size()), 6).unwrap();
        prop_assert_eq!(a.delta, b.delta);
        prop_assert_eq!(a.alexander, b.alexander);
    }

    #[test]
    fn khovanov_complex_squares_to_zero(d in diagram(9)) {
        let cx = KhComplex::build(&d, CUBE).unwrap();
        prop_assert!(cx.d_squared_is_zero());
        prop_assert!(cx.gradings_consistent());
    }

    #[test]
    fn khovanov_is_invariant_under_moves(d in knot(8), ks in kinks()) {
        let base = khovanov_reduced_f2(&d, CUBE).unwrap();
        let k = kinked(&d, &ks);
        prop_assert_eq!(&khovanov_reduced_f2(&k, CUBE).unwrap().entries, &base.entries);
        prop_assert_eq!(&khovanov_reduced_f2(&k.simplify(), CUBE).unwrap().entries, &base.entries);
        prop_assert_eq!(khovanov::jones_via_euler(&base), khovanov::jones_polynomial(&d));
    }

    #[test]
    fn mirror_reflects_khovanov_gradings(d in knot(8)) {
        let a = khovanov_reduced_f2(&d, CUBE).unwrap();
        let b = khovanov_reduced_f2(&d.mirror(), CUBE).unwrap();
        let flipped: std::collections::BTreeMap<_, _> =
            a.entries.iter().map(|(&(i, j), &r)| ((-i, -j), r)).collect();
        prop_assert_eq!(flipped, b.entries);
    }

    #[test]
    fn thin_implies_rank_equals_det(d in diagram(9)) {
        let sigma = goeritz::signature(&d).unwrap();
        let kh = khovanov_reduced_f2(&d, CUBE).unwrap();
        if kh.is_sigma_thin(sigma) {
            prop_assert_eq!(kh.total() as u64, goeritz::determinant(&d).unwrap());
        }
    }

    #[test]
    fn field_and_integer_ranks_are_consistent(d in diagram(7)) {
        let f = khovanov_reduced_f2(&d, CUBE).unwrap();
        let z = khovanov_reduced_z(&d, CUBE).unwrap();
        prop_assert!(f.total() >= z.total());
        if !z.has_torsion() {
            prop_assert_eq!(f.entries, z.entries);
        }
    }

    #[test]
    fn fingerprint_ignores_labels(d in diagram(10), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..d.n_arcs()).collect();
        perm.shuffle(&mut rng);
        let mut order: Vec<usize> = (0..d.crossing_count()).collect();
        order.shuffle(&mut rng);
        let r = relabeled(&d, &perm, &order);
        prop_assert_eq!(r.fingerprint(), d.fingerprint());
        prop_assert_eq!(d.fingerprint().to_diagram().unwrap().fingerprint(), d.fingerprint());
    }

    #[test]
    fn certificates_are_sound(d in diagram(9)) {
        if let Some(c) = qa_search(&d, 5_000).certificate() {
            prop_assert!(verify_certificate(c));
            prop_assert!(verify_certificate_for(c, &d));
            prop_assert!(c.root.depth() <= d.crossing_count());
            let sigma = goeritz::signature(&d).unwrap();
            prop_assert!(khovanov_reduced_f2(&d, CUBE).unwrap().is_sigma_thin(sigma));
        }
    }

    #[test]
    fn signature_lemma_holds_when_hypothesis_does(d in diagram(9), k in 0usize..64) {
        prop_assume!(d.crossing_count() > 0);
        let r = goeritz::check_signature_lemma(&d, k % d.crossing_count()).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn skein_triangles_hold(d in diagram(8), k in 0usize..64) {
        prop_assume!(d.crossing_count() > 0);
        let r = khovanov::check_skein_grading(&d, k % d.crossing_count(), CUBE).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn states_bound_the_determinant(d in knot(9)) {
        let det = goeritz::determinant(&d).unwrap() as usize;
        let counts: Vec<usize> = (0..d.n_arcs())
            .map(|e| enumerate_states(&d, Some(e)).unwrap().len())
            .collect();
        prop_assert!(counts.windows(2).all(|w| w[0] == w[1]));
        prop_assert!(counts[0] >= det && (counts[0] - det).is_multiple_of(2));
    }
}

#[test]
fn states_of_alternating_knots() {
    let corpus = Corpus::load_default().unwrap();
    for e in corpus
        .knots()
        .filter(|e| e.alternating && e.diagram.crossing_count() > 0)
    {
        let d = &e.diagram;
        let det = goeritz::determinant(d).unwrap() as usize;
        let sigma = goeritz::signature(d).unwrap();
        for edge in 0..d.n_arcs() {
            let s = state_thinness_predictor(d, Some(edge)).unwrap();
            assert_eq!(s.states, det, "{} edge {edge}", e.name);
            assert_eq!(s.delta2, Some(-sigma), "{} edge {edge}", e.name);
        }
    }
}

#[test]
fn khovanov_agrees_across_diagrams_of_small_knots() {
    let corpus = Corpus::load_default().unwrap();
    for name in ["3_1", "4_1", "5_2"] {
        let pd = &corpus.get(name).unwrap().diagram;
        let from_grid = corpus.grid(name).unwrap().grid.to_planar_diagram().unwrap();
        let a = khovanov_reduced_f2(pd, CUBE).unwrap();
        let b = khovanov_reduced_f2(&from_grid, CUBE).unwrap();
        let c =
            khovanov_reduced_f2(&kinked(pd, &[(0, true, false), (2, false, true)]), CUBE).unwrap();
        assert_eq!(a.entries, b.entries, "{name}");
        assert_eq!(a.entries, c.entries, "{name}");
    }
}
