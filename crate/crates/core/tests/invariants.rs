use std::sync::Arc;

use mwshed::fixtures;
use mwshed::manifold::{strictly_connected_oracle, validate, ORACLE_FACE_LIMIT};
use mwshed::morse::{classify, random_morse_stack_with, trace_all};
use mwshed::stack::minima_extend;
use mwshed::watershed::{verify_drop_of_water, Label};
use mwshed::{
    is_morse, morse_watershed, verify_cut, watershed_collapse, Altitude, CollapseMode, Complex, Simplex, Stack,
};
use proptest::prelude::*;

fn arb_simplex(max_vertex: u32, max_len: usize) -> impl Strategy<Value = Simplex> {
    prop::collection::btree_set(0..max_vertex, 1..=max_len).prop_map(|s| Simplex::new(s).unwrap())
}

fn arb_complex() -> impl Strategy<Value = Complex> {
    prop::collection::vec(arb_simplex(7, 4), 1..7).prop_map(Complex::closure)
}

fn arb_triangle_complex() -> impl Strategy<Value = Complex> {
    prop::collection::vec(prop::collection::btree_set(0u32..6, 3), 1..7)
        .prop_map(|ts| Complex::closure(ts.into_iter().map(|t| Simplex::new(t).unwrap())))
}

fn torus_host() -> impl Strategy<Value = Arc<Complex>> {
    prop_oneof![
        Just(Arc::new(fixtures::torus(3, 3))),
        Just(Arc::new(fixtures::torus(3, 4))),
        Just(Arc::new(fixtures::octahedron())),
        Just(Arc::new(fixtures::cycle(8))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_idempotent(c in arb_complex()) {
        let again = Complex::closure(c.faces().iter().cloned());
        prop_assert_eq!(&again, &c);
        let expected = |p: usize| if p == 0 { 0 } else { p + 1 };
        prop_assert!(c.ids().all(|f| c.boundary(f).len() == expected(c.face_dim(f))));
    }

    #[test]
    fn closure_is_monotone(a in prop::collection::vec(arb_simplex(7, 3), 1..5), b in prop::collection::vec(arb_simplex(7, 3), 0..5)) {
        let small = Complex::closure(a.iter().cloned());
        let big = Complex::closure(a.iter().chain(&b).cloned());
        prop_assert!(small.faces().iter().all(|s| big.contains(s)));
    }

    #[test]
    fn euler_characteristic_survives_collapse(c in arb_complex(), seed in any::<u64>()) {
        let k = c.ultimate_collapse(None, seed);
        prop_assert_eq!(k.euler_characteristic(), c.euler_characteristic());
        prop_assert!(k.free_pairs().is_empty());
    }

    #[test]
    fn normality_routes_agree(c in arb_triangle_complex()) {
        let r = validate(&c);
        prop_assert_eq!(r.normal_by_definition(), r.normal_by_link_condition());
        if c.len() <= ORACLE_FACE_LIMIT {
            prop_assert_eq!(strictly_connected_oracle(&c).unwrap(), r.strictly_connected);
        }
    }

    #[test]
    fn random_morse_stacks(host in torus_host(), seed in any::<u64>(), rate in 0.0f64..0.5) {
        let f = random_morse_stack_with(Arc::clone(&host), seed, rate);
        prop_assert!(is_morse(&f));
        let minima = f.minima();
        let report = classify(&f).unwrap();
        let d = host.dim() as usize;
        // Morse minima are exactly the critical d-faces whose faces are all higher
        prop_assert!(minima.minima.iter().all(|m| m.faces.len() == 1 && report.is_critical(m.faces[0])));
        let traces = trace_all(&f).unwrap();
        for x in host.faces_of_dim(d) {
            let m = traces[x.index()].unwrap();
            prop_assert!(minima.minimum_of(m).is_some());
        }
    }

    #[test]
    fn flood_labels_match_traces(host in torus_host(), seed in any::<u64>(), rate in 0.0f64..0.5) {
        let f = random_morse_stack_with(Arc::clone(&host), seed, rate);
        let r = morse_watershed(&f).unwrap();
        let traces = trace_all(&f).unwrap();
        let minima = f.minima();
        for x in host.faces_of_dim(host.dim() as usize) {
            let m = minima.minimum_of(traces[x.index()].unwrap()).unwrap();
            prop_assert_eq!(r.label(x), Label::Basin(m as u32 + 1));
        }
    }

    #[test]
    fn collapse_watersheds_are_watersheds(host in torus_host(), values in prop::collection::vec(0i64..4, 64), seed in any::<u64>()) {
        // non-Morse stacks: facet values from the strategy, lower faces take the max
        let mut alt: Vec<Altitude> = vec![0; host.len()];
        let mut k = 0;
        for x in host.ids().rev() {
            alt[x.index()] = match host.cofaces(x).iter().map(|y| alt[y.index()]).max() {
                Some(m) => m,
                None => { k += 1; values[(k - 1) % values.len()] }
            };
        }
        let f = Stack::new(Arc::clone(&host), alt).unwrap();
        let r = watershed_collapse(&f, seed).unwrap();
        let w = r.cut_complex();
        prop_assert!(verify_cut(&f, &w).unwrap());
        prop_assert!(verify_drop_of_water(&f, &w).unwrap());
        let ultimate = f.ultimate_d_collapse(seed, CollapseMode::Batch).unwrap();
        let unit = f.ultimate_d_collapse(seed, CollapseMode::Unit).unwrap();
        prop_assert_eq!(unit.altitudes(), ultimate.altitudes());
        prop_assert!(minima_extend(&f.minima(), &ultimate.minima()));
    }
}
