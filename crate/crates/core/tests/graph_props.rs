mod common;

use num_integer::Integer;
use proptest::prelude::*;

use fourlines_core::format::{parse, serialize};
use fourlines_core::lattice::{canonical_class, class_of, log_pullback, pairing};
use fourlines_core::rational::int;
use fourlines_core::singularity::{check_log_terminal, solve_discrepancies};
use fourlines_core::{Color, Origin};

use common::{graph_edges, random_graph};

fn weights() -> impl Strategy<Value = [i64; 4]> {
    prop::array::uniform4(-2i64..6)
}

fn picks(max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..1000, 0..=max)
}

fn boundary() -> impl Strategy<Value = Option<usize>> {
    prop::option::of(0usize..4)
}

fn all_perms() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let Some(d) = 6usize.checked_sub(a + b + c) else {
                    continue;
                };
                let p = [a, b, c, d];
                if (0..4).all(|k| p.contains(&k)) {
                    out.push(p);
                }
            }
        }
    }
    out
}

proptest! {
    #[test]
    fn insertion_counts(w in weights(), b in boundary(), p in picks(20)) {
        let g = random_graph(w, b, &p);
        let n = p.len() as i64;
        prop_assert_eq!(g.vertices().len() as i64, 4 + n);
        prop_assert_eq!(g.vertices().iter().map(|v| v.mark).sum::<i64>(), -4 + 3 * n);
        prop_assert_eq!(graph_edges(&g).len() as i64, 6 + n);
        for v in g.ids() {
            let want = match g.vertex(v).origin {
                Origin::Corner(_) => 3,
                Origin::Inserted(_) => 2,
            };
            prop_assert_eq!(g.neighbors(v).len(), want);
        }
    }

    #[test]
    fn weights_come_from_coprime_pairs(w in weights(), p in picks(20)) {
        let g = random_graph(w, None, &p);
        for v in g.ids() {
            if let Origin::Inserted(_) = g.vertex(v).origin {
                let c = g.vertex(v).coords;
                let nz: Vec<usize> = (0..4).filter(|&k| c[k] != 0).collect();
                prop_assert_eq!(nz.len(), 2);
                let (a, b) = (nz[0], nz[1]);
                prop_assert_eq!(c[a].gcd(&c[b]), 1);
                let want = int(c[a] as i64) * int(w[a]) + int(c[b] as i64) * int(w[b]);
                prop_assert_eq!(&g.vertex(v).weight, &want);
            }
        }
    }

    #[test]
    fn serialize_round_trips(w in weights(), b in boundary(), p in picks(15)) {
        let g = random_graph(w, b, &p);
        let h = parse(&serialize(&g)).unwrap();
        prop_assert_eq!(h, g);
    }

    #[test]
    fn canonical_form_ignores_weight_preserving_relabelings(
        w in prop::array::uniform4(0i64..3), b in boundary(), p in picks(12),
    ) {
        let g = random_graph(w, b, &p);
        let form = g.canonical_form();
        for perm in all_perms() {
            let keeps = (0..4).all(|k| w[k] == w[perm[k]]) && b.is_none_or(|x| perm[x] == x);
            if keeps {
                prop_assert_eq!(g.relabel_corners(perm).unwrap().canonical_form(), form.clone());
            }
        }
    }

    #[test]
    fn pairings_follow_the_graph(p in picks(14)) {
        let g = random_graph([1, 1, 1, 1], None, &p);
        let k = canonical_class(&g);
        prop_assert_eq!(pairing(&k, &k).unwrap(), int(9 - p.len() as i64));
        for u in g.ids() {
            let cu = class_of(&g, u).unwrap();
            prop_assert_eq!(cu.pairing(&cu).unwrap(), int(-g.vertex(u).mark));
            prop_assert_eq!(k.pairing(&cu).unwrap(), int(g.vertex(u).mark - 2));
            for v in g.ids().filter(|&v| v > u) {
                let want = i64::from(g.adjacent(u, v));
                prop_assert_eq!(cu.pairing(&class_of(&g, v).unwrap()).unwrap(), int(want));
            }
        }
    }

    #[test]
    fn log_pullback_is_trivial_on_contracted_curves(w in weights(), b in boundary(), p in picks(14)) {
        let g = random_graph(w, b, &p);
        prop_assume!(check_log_terminal(&g).is_ok());
        let disc = solve_discrepancies(&g).unwrap();
        let lp = log_pullback(&g, &disc).unwrap();
        for v in g.ids() {
            if g.color(v) == Color::Black {
                prop_assert_eq!(lp.pairing(&class_of(&g, v).unwrap()).unwrap(), int(0));
            }
        }
    }
}
