use kpure::coeff::mod_n;
use kpure::fgab::{exact_at, kernel, smith_normal_form, FgGroup, GroupHom, IntMatrix, ShortExactSeq};
use kpure::harness::families::matrix_sum;
use kpure::homind::{Eval, MapDescription};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

fn to_matrix(rows: &[Vec<i64>], cols: usize) -> IntMatrix<BigInt> {
    IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| b(x)).collect()).collect(), cols).unwrap()
}

fn matrix() -> impl Strategy<Value = (Vec<Vec<i64>>, usize)> {
    (1usize..=6, 1usize..=6)
        .prop_flat_map(|(r, c)| (prop::collection::vec(prop::collection::vec(-50i64..=50, c), r), Just(c)))
}

fn orders() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![Just(0i64), 2i64..=12], 0..=3)
}

fn group(orders: &[i64]) -> FgGroup<BigInt> {
    FgGroup::from_invariants(&orders.iter().map(|&d| b(d)).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization((rows, cols) in matrix()) {
        let a = to_matrix(&rows, cols);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        let diag = &s.invariant_factors;
        for w in diag[..s.rank].windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert!(diag[s.rank..].iter().all(|d| *d == b(0)));
    }

    #[test]
    fn kernel_columns_are_annihilated((rows, cols) in matrix()) {
        let a = to_matrix(&rows, cols);
        let k = kernel(&a);
        prop_assert!(a.mul(&k).unwrap().is_zero());
        prop_assert_eq!(k.cols(), cols - smith_normal_form(&a).rank);
    }

    #[test]
    fn cokernel_of_a_presentation_is_the_group(ks in orders()) {
        let g = group(&ks);
        let rank = ks.iter().filter(|&&d| d == 0).count();
        prop_assert_eq!(g.rank(), rank);
        let order: i64 = ks.iter().filter(|&&d| d != 0).product();
        prop_assert_eq!(g.torsion().iter().map(|d| i64::try_from(d).unwrap()).product::<i64>(), order);
    }

    #[test]
    fn direct_sum_sequences_are_pure(k in orders(), q in orders()) {
        let (gk, gq) = (group(&k), group(&q));
        let mid = gk.direct_sum(&gq);
        let (a, c) = (k.len(), q.len());
        let inj = GroupHom::new(gk, mid.clone(), IntMatrix::identity(a).vstack(&IntMatrix::zeros(c, a)).unwrap()).unwrap();
        let surj = GroupHom::new(mid, gq, IntMatrix::zeros(c, a).hstack(&IntMatrix::identity(c)).unwrap()).unwrap();
        let row = ShortExactSeq::new(inj, surj).unwrap();
        prop_assert!(row.is_exact().unwrap());
        prop_assert!(row.is_pure().unwrap());
    }

    #[test]
    fn bockstein_sequence_is_exact(k0 in orders(), k1 in orders(), n in 1i64..=12) {
        let d = mod_n(&group(&k0), &group(&k1), &b(n)).unwrap();
        for i in 0..2 {
            let (xn, rho, beta, xn1) = (d.times_n(i), d.rho(i).unwrap(), d.beta(i).unwrap(), d.times_n(i + 1));
            prop_assert!(exact_at(&xn, &rho).unwrap());
            prop_assert!(exact_at(&rho, &beta).unwrap());
            prop_assert!(exact_at(&beta, &xn1).unwrap());
        }
    }

    #[test]
    fn point_maps_compose_functorially(
        sizes in prop::collection::vec(1i64..=3, 1..=3),
        m1 in prop::collection::vec(prop::collection::vec(0i64..=2, 3), 1..=3),
        m2 in prop::collection::vec(prop::collection::vec(0i64..=2, 3), 1..=3),
    ) {
        let fix = |m: &[Vec<i64>], p: usize| -> Vec<Vec<i64>> {
            m.iter().map(|r| {
                let mut r: Vec<i64> = r[..p].to_vec();
                if r.iter().all(|&x| x == 0) { r[0] = 1; }
                r
            }).collect()
        };
        let build = |src: kpure::Complex, m: &[Vec<i64>]| {
            let target: Vec<BigInt> = m.iter().map(|r| r.iter().zip(src.k()).map(|(&x, k)| k * x).sum()).collect();
            let points = m.iter().map(|r| r.iter().enumerate().map(|(j, &x)| (b(x), Eval::AtPoint(j))).collect()).collect();
            MapDescription::new(src, matrix_sum(target), points, vec![], true).unwrap()
        };
        let a = matrix_sum(sizes.iter().map(|&s| b(s)).collect());
        let m1 = fix(&m1, a.p());
        let d1 = build(a, &m1);
        let m2 = fix(&m2, d1.target().p());
        let d2 = build(d1.target().clone(), &m2);
        let composite = d1.then(&d2).unwrap().induced_k0().unwrap();
        let composed = d1.induced_k0().unwrap().then(&d2.induced_k0().unwrap()).unwrap();
        prop_assert!(composite.equals(&composed).unwrap());
    }
}
