use heffter::binmat::{gale_ryser_check, gale_ryser_construct, BinMatrix};
use heffter::decomp::{
    circuits_from_line, decomposition_from_matrix, development_edges, Side, Sign, Walk,
};
use heffter::gha_fill::fill_gha;
use heffter::gmatrix::{GMatrix, Line, Ordering, SumVerdict};
use heffter::group::{Elem, Group, SymbolSet};
use heffter::nasm::{build_uniform_nasm, SignMatrix};
use proptest::prelude::*;

fn any_group() -> impl Strategy<Value = Group> {
    prop_oneof![
        (1usize..=30).prop_map(|v| Group::cyclic(v).unwrap()),
        (1usize..=10).prop_map(|n| Group::dihedral(n).unwrap()),
        ((1usize..=4), (1usize..=3)).prop_map(|(a, n)| {
            Group::product(vec![Group::cyclic(a).unwrap(), Group::dihedral(n).unwrap()]).unwrap()
        }),
    ]
}

fn positive_part(g: &Group) -> (Vec<Elem>, Vec<Elem>) {
    let plus: Vec<Elem> = g.elements().filter(|&a| a != 0 && g.abs(a) == a).collect();
    plus.into_iter().partition(|&a| !g.is_involution(a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn group_axioms(g in any_group(), seed in any::<u64>()) {
        let n = g.order();
        let pick = |k: u64| (seed.wrapping_mul(6364136223846793005).wrapping_add(k) % n as u64) as Elem;
        let (a, b, c) = (pick(1), pick(2), pick(3));
        prop_assert_eq!(g.add(g.add(a, b), c), g.add(a, g.add(b, c)));
        prop_assert_eq!(g.add(a, 0), a);
        prop_assert_eq!(g.add(0, a), a);
        prop_assert_eq!(g.add(a, g.neg(a)), 0);
        prop_assert_eq!(g.abs(a), g.abs(g.neg(a)));
        prop_assert!(g.abs(a) == a || g.abs(a) == g.neg(a));
        prop_assert_eq!(g.multiple(g.element_order(a) as i64, a), 0);
    }

    #[test]
    fn gale_ryser_construct_matches_check(
        h in prop::collection::vec(0usize..=6, 1..=6),
        k in prop::collection::vec(0usize..=6, 1..=6),
    ) {
        match gale_ryser_construct(&h, &k) {
            Ok(b) => {
                prop_assert!(gale_ryser_check(&h, &k).is_ok());
                prop_assert_eq!(b.row_weights(), h);
                prop_assert_eq!(b.col_weights(), k);
            }
            Err(_) => prop_assert!(gale_ryser_check(&h, &k).is_err()),
        }
    }

    #[test]
    fn uniform_nasm_verifies(m in 1usize..=30, n in 1usize..=30, t in 1usize..=30) {
        let g = num_integer::gcd(m, n);
        let t = 1 + (t - 1) % g;
        let (h, k) = (n / g * t, m / g * t);
        let a = build_uniform_nasm(m, n, h, k).unwrap();
        let c = a.verify();
        prop_assert!(c.is_nasm);
        prop_assert!(c.weights.rows.iter().all(|&x| x == h));
        prop_assert!(c.weights.cols.iter().all(|&x| x == k));
    }

    #[test]
    fn fill_always_nonzero_sum(
        g in prop_oneof![
            (3usize..=30).prop_map(|v| Group::cyclic(v).unwrap()),
            (3usize..=10).prop_map(|n| Group::dihedral(n).unwrap()),
        ],
        raw_m in 0usize..6,
        raw_n in 0usize..6,
        bits in prop::collection::vec(any::<bool>(), 36),
        want_double in any::<bool>(),
        raw_target in any::<usize>(),
        seed in any::<usize>(),
    ) {
        let (mut noninv, mut inv) = positive_part(&g);
        let len = noninv.len();
        noninv.rotate_left(seed % len);
        if !inv.is_empty() {
            let len = inv.len();
            inv.rotate_left((seed >> 8) % len);
        }
        // |R ∪ C| <= m + n - 1 must not exceed the noninvolutions
        let (mut m, mut n) = (1 + raw_m, 1 + raw_n);
        while m + n - 1 > noninv.len() {
            if m >= n { m -= 1 } else { n -= 1 }
        }
        let cover = m.max(n);
        let (lambda, lo, hi) = {
            let lo2 = cover.max(2 * (m + n - 1));
            let hi2 = (m * n).min(2 * noninv.len() + inv.len());
            if want_double && lo2 <= hi2 {
                (2, lo2, hi2)
            } else {
                (1, cover, (m * n).min(noninv.len()))
            }
        };
        let mut target = lo + raw_target % (hi - lo + 1);
        if lambda == 2 && inv.is_empty() && target % 2 == 1 {
            target -= 1;
        }
        let mut a = BinMatrix::zeros(m, n);
        for i in 0..m.max(n) {
            a.set((i % m, i % n), true);
        }
        let mut cells = (0..m * n).filter(|&c| bits[c]).chain(0..m * n);
        while a.weight() < target {
            let c = cells.next().unwrap();
            a.set((c / n, c % n), true);
        }
        let w = a.weight();
        let s: Vec<Elem> = if lambda == 1 {
            noninv[..w].to_vec()
        } else {
            let pairs = noninv.len().min(w / 2);
            let singles = w - 2 * pairs;
            prop_assert!(singles <= inv.len());
            noninv[..pairs].iter().chain(&inv[..singles]).copied().collect()
        };
        let symbols = SymbolSet::new(g.clone(), s, lambda).unwrap();
        prop_assert!(lambda == 1 || symbols.noninvolutions().len() + 1 >= m + n);
        let c = fill_gha(&a, &symbols).unwrap();
        let r = c.verify();
        prop_assert!(r.is_gha(), "{:?}", r.checks);
        prop_assert_eq!(c.matrix.skeleton(), a.cells());
        let sums = r.sums.unwrap();
        prop_assert!(sums.rows.iter().chain(&sums.cols).all(|&x| x != 0));
        prop_assert_eq!(sums.verdict, SumVerdict::NonzeroSum);
    }

    #[test]
    fn circuits_cover_development(
        g in any_group(),
        seq_seed in prop::collection::vec(any::<u32>(), 1..=5),
        sign in prop_oneof![Just(Sign::Plus), Just(Sign::Minus)],
    ) {
        prop_assume!(g.order() > 1);
        let seq: Vec<Elem> = seq_seed.iter().map(|&x| 1 + (x as usize) % (g.order() - 1)).collect();
        let a = GMatrix::from_rows(g.clone(), vec![seq]).unwrap();
        let omega = a.natural_ordering();
        let dev = decomposition_from_matrix(&a, &omega, sign, Side::Rows, true).unwrap();
        let want = development_edges(&dev, false);
        let mut got = std::collections::HashMap::new();
        for c in circuits_from_line(&a, &omega, Line::Row(0), sign).unwrap() {
            prop_assert_eq!(c.vertices.first(), c.vertices.last());
            for e in c.edges() {
                *got.entry(e).or_insert(0usize) += 1;
            }
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn translation_commutes_with_forgetting(
        g in any_group(),
        seq_seed in prop::collection::vec(any::<u32>(), 1..=5),
        t in any::<u32>(),
    ) {
        prop_assume!(g.order() > 1);
        let seq: Vec<Elem> = seq_seed.iter().map(|&x| 1 + (x as usize) % (g.order() - 1)).collect();
        let t = (t as usize) % g.order();
        let w = Walk::from_sequence(&g, &seq, Sign::Plus).unwrap();
        prop_assert_eq!(w.translate(t).undirected(), w.undirected().translate(t));
    }

    #[test]
    fn serialization_round_trips(
        g in any_group(),
        m in 1usize..=4,
        n in 1usize..=4,
        vals in prop::collection::vec(any::<u32>(), 16),
        signs in prop::collection::vec(-1i8..=1, 16),
    ) {
        let entries: Vec<Elem> = (0..m * n).map(|i| vals[i] as usize % g.order()).collect();
        let a = GMatrix::new(g.clone(), m, n, entries).unwrap();
        prop_assert_eq!(GMatrix::from_text(&a.to_text()).unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<GMatrix>(&json).unwrap(), a.clone());
        let omega = a.natural_ordering();
        let json = serde_json::to_string(&omega).unwrap();
        prop_assert_eq!(serde_json::from_str::<Ordering>(&json).unwrap(), omega);

        let s = SignMatrix::new(m, n, signs[..m * n].to_vec()).unwrap();
        prop_assert_eq!(SignMatrix::from_text(&s.to_text()).unwrap(), s.clone());
        let json = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<SignMatrix>(&json).unwrap(), s.clone());

        let b = BinMatrix::from_rows(&s.to_rows().iter().map(|r| r.iter().map(|&x| u8::from(x != 0)).collect()).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(BinMatrix::from_text(&b.to_text()).unwrap(), b.clone());
        prop_assert_eq!(serde_json::from_str::<BinMatrix>(&serde_json::to_string(&b).unwrap()).unwrap(), b);
    }
}
