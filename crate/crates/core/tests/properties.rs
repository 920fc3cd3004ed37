use proptest::prelude::*;

use qratio::enumerate::{canonical_form, enumerate_chunk, enumerate_connected, EnumerationChunk};
use qratio::graph::{is_connected, Graph};
use qratio::graph6::{decode_graph6, encode_graph6, Graph6Codec};
use qratio::kite::{log_u, sigma, u_closed_form, u_recurrence, u_sandwich};
use qratio::spectral::analyze;
use qratio::verify::{check_universal, decompose_maximizer, LemmaId, Status, HARD_TOL};
use qratio::DEFAULT_TOL;

fn graph_strategy(n_lo: usize, n_hi: usize, density: f64) -> impl Strategy<Value = Graph> {
    (n_lo..=n_hi).prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(proptest::bool::weighted(density), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut t = 0;
            for v in 1..n {
                for u in 0..v {
                    if bits[t] {
                        edges.push((u, v));
                    }
                    t += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn connected(n_lo: usize, n_hi: usize, density: f64) -> impl Strategy<Value = Graph> {
    graph_strategy(n_lo, n_hi, density).prop_filter("connected", is_connected)
}

fn q_strategy() -> impl Strategy<Value = f64> {
    (-8.0f64..3.0).prop_map(|e| 4.0 + 10f64.powf(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graph6_round_trip(g in graph_strategy(1, 62, 0.4)) {
        let s = encode_graph6(&g).unwrap();
        prop_assert_eq!(decode_graph6(&s).unwrap(), g);
    }

    #[test]
    fn graph6_long_form_round_trip(g in graph_strategy(63, 90, 0.1)) {
        let codec = Graph6Codec::long_form();
        let s = codec.encode(&g).unwrap();
        prop_assert_eq!(codec.decode(&s).unwrap(), g);
    }

    #[test]
    fn canonical_form_ignores_labels(g in graph_strategy(1, 8, 0.5), seed in any::<u64>()) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&g.permuted(&perm)).unwrap());
    }

    #[test]
    fn sigma_identity(q in 4.0f64..1000.0) {
        prop_assume!(q > 4.0);
        let s = sigma(q).unwrap();
        prop_assert!(s.sigma > 1.0);
        prop_assert!((s.sigma + 1.0 / s.sigma - (q - 2.0)).abs() <= 1e-12 * q);
    }

    #[test]
    fn closed_form_matches_recurrence(q in q_strategy(), i in 0usize..=40) {
        let rec = u_recurrence(q, i).unwrap().values[i];
        let closed = u_closed_form(q, i).unwrap();
        prop_assert!((closed - rec).abs() <= 1e-10 * rec, "q = {}, i = {}: {} vs {}", q, i, closed, rec);
        let via_log = log_u(q, i).unwrap().exp();
        prop_assert!((via_log - closed).abs() <= 1e-10 * closed);
    }

    #[test]
    fn sandwich_brackets_u(q in q_strategy(), j in 2usize..=30) {
        let u = u_recurrence(q, j - 1).unwrap().values[j - 1];
        let (lo, hi) = u_sandwich(q, j).unwrap();
        prop_assert!(lo <= u * (1.0 + 1e-12) && u <= hi * (1.0 + 1e-12), "{} {} {}", lo, u, hi);
    }

    #[test]
    fn u_grows_in_i_and_q(q in q_strategy(), dq in 0.001f64..5.0) {
        let a = u_recurrence(q, 30).unwrap().values;
        let b = u_recurrence(q + dq, 30).unwrap().values;
        for i in 1..=30 {
            prop_assert!(a[i] > a[i - 1]);
            prop_assert!(b[i] > a[i]);
        }
    }

    #[test]
    fn ratio_and_q1_are_label_invariant(g in connected(2, 12, 0.5)) {
        let n = g.n();
        let perm: Vec<usize> = (0..n).rev().collect();
        let (p1, r1) = analyze(&g, DEFAULT_TOL).unwrap();
        let (p2, r2) = analyze(&g.permuted(&perm), DEFAULT_TOL).unwrap();
        prop_assert!(r1.gamma >= 1.0);
        prop_assert!((p1.q1 - p2.q1).abs() <= 1e-10 * p1.q1);
        prop_assert!((r1.gamma - r2.gamma).abs() <= 1e-8 * r1.gamma);
    }

    #[test]
    fn adding_an_edge_raises_q1(g in connected(3, 12, 0.4), pick in any::<usize>()) {
        let missing: Vec<(usize, usize)> = (0..g.n())
            .flat_map(|u| (u + 1..g.n()).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        prop_assume!(!missing.is_empty());
        let (u, v) = missing[pick % missing.len()];
        let before = analyze(&g, DEFAULT_TOL).unwrap().0.q1;
        let after = analyze(&g.with_edge(u, v).unwrap(), DEFAULT_TOL).unwrap().0.q1;
        prop_assert!(after > before);
    }

    #[test]
    fn holding_findings_respect_tolerance(g in connected(2, 12, 0.5)) {
        for f in check_universal(&g, DEFAULT_TOL).unwrap() {
            prop_assert!(f.status != Status::Violated, "{:?}", f);
            if f.status == Status::Holds {
                prop_assert!(f.margin >= -HARD_TOL * f.scale);
            }
        }
    }

    #[test]
    fn chunks_cover_the_index_space(n in 2usize..=5, m in 1u64..=9) {
        let total = enumerate_connected(n, None).unwrap().count();
        let parts: usize = EnumerationChunk::partition(n, m)
            .unwrap()
            .iter()
            .map(|c| enumerate_chunk(c).unwrap().count())
            .sum();
        prop_assert_eq!(parts, total);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// The sorted-prefix reduction used for the hub subset sums agrees with
    /// checking every subset of `N(v_k)`.
    #[test]
    fn hub_subset_sums_match_all_subsets(g in connected(5, 13, 0.5)) {
        let dec = match decompose_maximizer(&g) {
            Ok(d) => d,
            Err(_) => return Ok(()),
        };
        let vk = dec.v(dec.k);
        let xs: Vec<f64> = g.neighbors(vk).iter().map(|&v| dec.x(v as usize)).collect();
        prop_assume!(xs.len() <= 12);
        let mut literal = f64::INFINITY;
        for mask in 1u32..(1 << xs.len()) {
            let size = mask.count_ones() as f64;
            let sum: f64 = (0..xs.len()).filter(|b| mask >> b & 1 == 1).map(|b| xs[b]).sum();
            literal = literal.min((sum - (size - 2.0)).min(size - sum));
        }
        let reduced = qratio::verify::check_maximizer(&dec)
            .into_iter()
            .find(|f| f.lemma_id == LemmaId::HubSubsetSums)
            .unwrap()
            .margin;
        prop_assert!((literal - reduced).abs() <= 1e-12 * xs.len() as f64, "{} vs {}", literal, reduced);
    }
}
