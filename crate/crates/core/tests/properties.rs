use std::collections::BTreeSet;

use proptest::prelude::*;

use relhom::canon::{canonical_form, canonical_key};
use relhom::cores::{finite_core, is_core};
use relhom::format;
use relhom::homsearch::{count_maps, hom_equivalent, search_map};
use relhom::limits::{pairing, unpair};
use relhom::{check_map, Mode, PartialMap, Signature, Structure};

/// A digraph on `n` vertices from an adjacency bitmask.
fn digraph(n: usize, bits: u64) -> Structure {
    let mut rel = BTreeSet::new();
    for x in 0..n {
        for y in 0..n {
            if bits >> (x * n + y) & 1 == 1 {
                rel.insert(vec![x, y]);
            }
        }
    }
    let names = (0..n).map(|i| format!("v{i}")).collect();
    Structure::from_indices("D", Signature::binary(), names, vec![rel]).unwrap()
}

fn arb_digraph(max: usize) -> impl Strategy<Value = Structure> {
    (1..=max).prop_flat_map(|n| any::<u64>().prop_map(move |b| digraph(n, b)))
}

fn arb_permuted(max: usize) -> impl Strategy<Value = (Structure, Vec<usize>)> {
    arb_digraph(max).prop_flat_map(|d| {
        let n = d.len();
        (Just(d), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_ignores_labelling((d, perm) in arb_permuted(5)) {
        let p = d.permuted(&perm);
        prop_assert_eq!(canonical_key(&d), canonical_key(&p));
        prop_assert_eq!(canonical_form(&d), canonical_form(&p));
        let c = canonical_form(&d);
        prop_assert_eq!(canonical_form(&c), c.clone());
    }

    #[test]
    fn format_round_trips(d in arb_digraph(5)) {
        let text = format::to_file_string(&d);
        let parsed = format::parse(&text).unwrap();
        prop_assert_eq!(&parsed.structures[0], &d);
    }

    #[test]
    fn found_maps_are_valid_and_counts_agree(a in arb_digraph(3), b in arb_digraph(3)) {
        for mode in [Mode::Hom, Mode::Mono, Mode::Embedding, Mode::Iso] {
            let res = search_map(&a, &b, mode, &PartialMap::empty(a.len(), b.len())).unwrap();
            if let Some(m) = res.found() {
                prop_assert!(check_map(&a, &b, m, mode).unwrap());
            }
            prop_assert_eq!(res.is_found(), count_maps(&a, &b, mode).unwrap() > 0);
        }
    }

    #[test]
    fn core_is_a_hom_equivalent_core(d in arb_digraph(4)) {
        let r = finite_core(&d).unwrap();
        prop_assert!(is_core(&r.image).unwrap().is_yes());
        prop_assert!(hom_equivalent(&d, &r.image).unwrap());
        prop_assert!(check_map(&d, &d, &r.map, Mode::Hom).unwrap());
    }

    #[test]
    fn pairing_is_a_bijection_above_the_diagonal(i in (0u64..1_000_000).prop_map(|x| 2 * x), j in 0u64..1_000_000) {
        let k = pairing(i, j).unwrap();
        prop_assert!(k >= i && k % 2 == 0);
        prop_assert_eq!(unpair(k).unwrap(), (i, j));
    }
}
