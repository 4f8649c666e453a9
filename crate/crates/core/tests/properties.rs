mod common;

use k3_enriques::exact_linalg::{signature, snf, IntMatrix};
use k3_enriques::expr::{parse_form_expr, parse_lattice_expr, FormExpr, LatticeExpr};
use k3_enriques::fqf::{is_isometric, Fqf, Rat};
use k3_enriques::lattice::{short_vectors, Lattice};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn to_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_i64().unwrap()).collect())
        .collect()
}

fn matrix(rows: usize, cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(lo..=hi, cols), rows)
}

/// Even symmetric Gram matrices of rank 1..=5.
fn even_gram() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5).prop_flat_map(|n| {
        (
            prop::collection::vec(-3i64..=3, n),
            prop::collection::vec(-3i64..=3, n * n),
        )
            .prop_map(move |(d, off)| {
                let mut g = vec![vec![0; n]; n];
                for i in 0..n {
                    g[i][i] = 2 * d[i];
                    for j in 0..i {
                        g[i][j] = off[i * n + j];
                        g[j][i] = off[i * n + j];
                    }
                }
                g
            })
    })
}

fn nondegenerate_lattice() -> impl Strategy<Value = Lattice> {
    even_gram()
        .prop_filter("nondegenerate, small discriminant", |g| {
            let d = common::det_cofactor(g).abs();
            d != 0 && d <= 4096
        })
        .prop_map(|g| Lattice::from_rows(&g).unwrap())
}

/// Unimodular integer matrices as products of elementary operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 0..8).prop_map(move |ops| {
        let mut m = vec![vec![0i64; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for (a, b, k, neg) in ops {
            if a != b {
                for row in m.iter_mut() {
                    row[a] += k * row[b];
                }
            }
            if neg {
                for row in m.iter_mut() {
                    row[a] = -row[a];
                }
            }
        }
        IntMatrix::from_rows(&m)
    })
}

fn congruent(l: &Lattice, p: &IntMatrix) -> Lattice {
    Lattice::new(p.transpose().mul(l.gram()).mul(p)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_reconstructs(m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c, -6, 6))) {
        let a = IntMatrix::from_rows(&m);
        let s = snf(&a);
        let d = s.u.mul(&a).mul(&s.v);
        prop_assert_eq!(&d, &s.d);
        prop_assert!(s.u.det().abs().is_one());
        prop_assert!(s.v.det().abs().is_one());
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(a.cols()));
        let divs = s.divisors();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j {
                    prop_assert!(d.get(i, j).is_zero());
                }
            }
        }
        for w in divs.windows(2) {
            if !w[1].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
        prop_assert!(divs.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn signature_matches_descartes(g in even_gram()) {
        let s = signature(&IntMatrix::from_rows(&g));
        prop_assert_eq!((s.plus, s.minus, s.zero), common::signature_oracle(&g));
    }

    #[test]
    fn signature_is_additive(a in even_gram(), b in even_gram()) {
        let (la, lb) = (Lattice::from_rows(&a).unwrap(), Lattice::from_rows(&b).unwrap());
        prop_assert_eq!(Lattice::direct_sum(&[&la, &lb]).signature(), la.signature() + lb.signature());
    }

    #[test]
    fn det_matches_cofactor(g in even_gram()) {
        prop_assert_eq!(IntMatrix::from_rows(&g).det(), BigInt::from(common::det_cofactor(&g)));
    }

    #[test]
    fn congruence_preserves_invariants((l, p) in nondegenerate_lattice().prop_flat_map(|l| {
        let n = l.rank();
        (Just(l), unimodular(n))
    })) {
        let m = congruent(&l, &p);
        prop_assert_eq!(m.signature(), l.signature());
        prop_assert_eq!(m.det(), l.det());
        let (qa, qb) = (l.discriminant_form().unwrap(), m.discriminant_form().unwrap());
        prop_assert!(is_isometric(&qa, &qb).unwrap().is_some());
        prop_assert_eq!(qa.norm_histogram().unwrap(), qb.norm_histogram().unwrap());
        prop_assert!(l.milgram_holds().unwrap());
        if l.is_negative_definite() {
            for t in [-2, -4] {
                prop_assert_eq!(short_vectors(&l, t).unwrap().len(), short_vectors(&m, t).unwrap().len());
            }
        }
    }

    #[test]
    fn discriminant_form_is_consistent(l in nondegenerate_lattice()) {
        let q = l.discriminant_form().unwrap();
        prop_assert_eq!(BigInt::from(q.size()), l.det().abs());
        prop_assert!(q.is_nondegenerate());
        let elems = q.elements().unwrap();
        for x in elems.iter().take(24) {
            for y in elems.iter().take(24) {
                let lhs = q.norm(&q.add(x, y)).value() - q.norm(x).value() - q.norm(y).value();
                let rhs = q.pairing(x, y).value() * Rat::from_integer(2);
                let diff = lhs - rhs;
                prop_assert!((diff / Rat::from_integer(2)).is_integer());
            }
        }
    }

    #[test]
    fn gauss_signature_is_additive(a in small_form_expr(), b in small_form_expr()) {
        let (qa, qb) = (a.eval().unwrap(), b.eval().unwrap());
        let sum = Fqf::direct_sum(&[&qa, &qb]);
        let (sa, sb) = (qa.gauss_sum_signature().unwrap(), qb.gauss_sum_signature().unwrap());
        prop_assert_eq!(sum.gauss_sum_signature().unwrap(), (sa + sb) % 8);
        prop_assert_eq!(qa.negate().gauss_sum_signature().unwrap(), (8 - sa) % 8);
    }

    #[test]
    fn short_vectors_match_box_scan(a in matrix(3, 3, -2, 2), t in 1i64..=6) {
        // G = -2 A^T A is even and negative semidefinite
        let a = IntMatrix::from_rows(&a);
        prop_assume!(!a.det().is_zero());
        let g = a.transpose().mul(&a).scale(&BigInt::from(-2));
        let l = Lattice::new(g).unwrap();
        let t = -2 * t;
        prop_assert_eq!(2 * short_vectors(&l, t).unwrap().len() as u64, common::box_count(&to_i64(l.gram()), t));
    }

    #[test]
    fn lattice_expressions_round_trip(e in lattice_expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse_lattice_expr(&text).unwrap(), e);
    }

    #[test]
    fn form_expressions_round_trip(e in form_expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse_form_expr(&text).unwrap(), e);
    }
}

fn lattice_base() -> impl Strategy<Value = LatticeExpr> {
    let name = prop::sample::select(vec!["U", "E8", "D4"]).prop_map(|n| LatticeExpr::Atom(n.to_string()));
    prop_oneof![
        name.clone(),
        (name, -6i64..=6, 1i64..=4)
            .prop_filter("nonzero", |(_, p, _)| *p != 0)
            .prop_map(|(n, p, q)| LatticeExpr::Scaled(Box::new(n), Rat::new(p, q))),
        (-20i64..=20)
            .prop_filter("nonzero", |m| *m != 0)
            .prop_map(|m| LatticeExpr::Span(2 * m)),
    ]
}

fn lattice_term() -> impl Strategy<Value = LatticeExpr> {
    (lattice_base(), prop::option::of(1u32..=5)).prop_map(|(b, k)| match k {
        Some(k) => LatticeExpr::Power(Box::new(b), k),
        None => b,
    })
}

fn lattice_expr() -> impl Strategy<Value = LatticeExpr> {
    prop::collection::vec(lattice_term(), 1..=4).prop_map(|mut ts| {
        if ts.len() == 1 {
            ts.pop().unwrap()
        } else {
            LatticeExpr::Sum(ts)
        }
    })
}

fn form_term() -> impl Strategy<Value = FormExpr> {
    let base = prop_oneof![
        Just(FormExpr::U2),
        Just(FormExpr::V2),
        (-6i64..=6)
            .prop_filter("nonzero", |m| *m != 0)
            .prop_map(|m| FormExpr::Cyclic(2 * m)),
    ];
    (base, prop::option::of(1u32..=2)).prop_map(|(b, k)| match k {
        Some(k) => FormExpr::Power(Box::new(b), k),
        None => b,
    })
}

fn form_expr() -> impl Strategy<Value = FormExpr> {
    prop::collection::vec(form_term(), 1..=3).prop_map(|mut ts| {
        if ts.len() == 1 {
            ts.pop().unwrap()
        } else {
            FormExpr::Sum(ts)
        }
    })
}

/// At most two summands, each of order at most 12, so sums stay enumerable.
fn small_form_expr() -> impl Strategy<Value = FormExpr> {
    let base = prop_oneof![
        Just(FormExpr::U2),
        Just(FormExpr::V2),
        (-6i64..=6)
            .prop_filter("nonzero", |m| *m != 0)
            .prop_map(|m| FormExpr::Cyclic(2 * m)),
    ];
    prop::collection::vec(base, 1..=2).prop_map(|mut ts| {
        if ts.len() == 1 {
            ts.pop().unwrap()
        } else {
            FormExpr::Sum(ts)
        }
    })
}
