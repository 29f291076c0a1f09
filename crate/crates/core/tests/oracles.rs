//! Values checked against closed formulas computed here, independently of the library.

use dirac_core::cat_o::{compact_signs, finite_dim_simple, verma_window};
use dirac_core::liealg::{build_chevalley_basis, Gen};
use dirac_core::linalg::{q, qf, Q};
use dirac_core::roots::{build_root_system, validate_pair, Weight, WeylGroup};
use num_traits::One;
use std::sync::Arc;

fn factorial(k: i64) -> Q {
    (1..=k).fold(Q::one(), |a, j| a * q(j))
}

// e f^k v = k (lambda - k + 1) f^(k-1) v for sl(2) in the integral basis.
// The module stores e_{-alpha} = f / 4, so every f carries a factor 1/4.
#[test]
fn sl2_raising_after_lowering() {
    let rs = build_root_system("A1").unwrap();
    let g = Arc::new(build_chevalley_basis(&rs));
    for lam in [qf(-1, 1), qf(-7, 3), qf(2, 1), qf(5, 2)] {
        let l = Weight(vec![lam.clone() / q(2)]);
        let v = verma_window(&g, &l, 6).unwrap();
        let (e, f) = (g.idx(Gen::E(0)), g.idx(Gen::F(0)));
        for k in 1..=6i64 {
            let w = l.sub_ints(&[k - 1]);
            let ef = v.module.action(e, &w.sub_ints(&[1])).unwrap().mul(&v.module.action(f, &w).unwrap());
            let expect = q(k) * (lam.clone() - q(k) + q(1)) / q(4);
            assert_eq!(ef.get(0, 0), &expect, "lambda {} k {}", lam, k);
        }
    }
}

// Shapovalov form of sl(2) on the PBW monomials f^k v: k! prod_{j<k} (lambda - j).
#[test]
fn sl2_shapovalov() {
    let rs = build_root_system("A1").unwrap();
    let g = Arc::new(build_chevalley_basis(&rs));
    for lam in [qf(-1, 1), qf(3, 1), qf(-1, 2)] {
        let l = Weight(vec![lam.clone() / q(2)]);
        let mut v = verma_window(&g, &l, 5).unwrap();
        let form = v.shapovalov(&compact_signs(&g));
        for k in 0..=5i64 {
            let gram = form.gram(&l.sub_ints(&[k])).unwrap();
            let prod = (0..k).fold(Q::one(), |a, j| a * (lam.clone() - q(j)));
            assert_eq!(gram.get(0, 0), &(factorial(k) * prod), "lambda {} k {}", lam, k);
        }
    }
}

fn weyl_dim_a2(a: i64, b: i64) -> i64 {
    (a + 1) * (b + 1) * (a + b + 2) / 2
}

fn weyl_dim_b2(a: i64, b: i64) -> i64 {
    // a on the long simple root, b on the short one
    (a + 1) * (b + 1) * (2 * a + b + 3) * (a + b + 2) / 6
}

fn weyl_dim_g2(a: i64, b: i64) -> i64 {
    // a on the short simple root, b on the long one
    (a + 1) * (b + 1) * (a + b + 2) * (a + 2 * b + 3) * (a + 3 * b + 4) * (2 * a + 3 * b + 5) / 120
}

fn rank2_first_long(rs: &dirac_core::roots::RootSystem) -> bool {
    rs.rank == 2 && rs.norm2(&Weight::from_ints(&[1, 0])) > rs.norm2(&Weight::from_ints(&[0, 1]))
}

#[test]
fn finite_dimensions() {
    let cases: Vec<(&str, Vec<Vec<i64>>)> = vec![
        ("A1", (0..5).map(|k| vec![k]).collect()),
        ("A2", vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 1], vec![0, 3]]),
        ("B2", vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![0, 2]]),
        ("G2", vec![vec![1, 0], vec![0, 1]]),
        ("A1xA1", vec![vec![1, 2]]),
    ];
    for (ty, lams) in cases {
        let rs = build_root_system(ty).unwrap();
        let g = Arc::new(build_chevalley_basis(&rs));
        for lam in lams {
            let l = rs.from_fundamental(&lam.iter().map(|&x| q(x)).collect::<Vec<_>>()).unwrap();
            let m = finite_dim_simple(&g, &l).unwrap();
            assert_eq!(q(m.total_dim() as i64), rs.weyl_dimension(&l), "{} {:?}", ty, lam);
            let (a, b) = (lam[0], *lam.get(1).unwrap_or(&0));
            let first_long = rank2_first_long(&rs);
            let expect = match ty {
                "A1" => a + 1,
                "A2" => weyl_dim_a2(a, b),
                "B2" => {
                    if first_long {
                        weyl_dim_b2(a, b)
                    } else {
                        weyl_dim_b2(b, a)
                    }
                }
                "G2" => {
                    if first_long {
                        weyl_dim_g2(b, a)
                    } else {
                        weyl_dim_g2(a, b)
                    }
                }
                _ => (a + 1) * (b + 1),
            };
            assert_eq!(m.total_dim() as i64, expect, "{} {:?}", ty, lam);
        }
    }
}

#[test]
fn adjoint_zero_weight_multiplicity() {
    for (ty, rank) in [("A2", 2), ("B2", 2), ("G2", 2), ("A3", 3)] {
        let rs = build_root_system(ty).unwrap();
        let g = Arc::new(build_chevalley_basis(&rs));
        let theta = rs.positive.iter().map(|r| Weight::from_ints(r)).max_by_key(|w| w.height()).unwrap();
        let m = finite_dim_simple(&g, &theta).unwrap();
        assert_eq!(m.total_dim(), g.dim, "{}", ty);
        assert_eq!(m.dim(&Weight::zero(rank)).unwrap(), rank);
    }
}

// Long roots have square length 1 / h_dual for the form dual to the Killing form.
#[test]
fn killing_normalisation() {
    let rs = build_root_system("A1").unwrap();
    let a = Weight::from_ints(&[1]);
    assert_eq!(rs.norm2(&a), qf(1, 2));
    let g = build_chevalley_basis(&rs);
    assert_eq!(g.killing(0, 0), q(8));
    // sl(3): long roots have <alpha, alpha> = 1/3 for the Killing form (dual Coxeter number 3)
    let rs3 = build_root_system("A2").unwrap();
    assert_eq!(rs3.norm2(&Weight::from_ints(&[1, 0])), qf(1, 3));
    // G2: long roots 1/4 (dual Coxeter number 4)
    let g2 = build_root_system("G2").unwrap();
    let longest = g2.positive.iter().map(|r| g2.norm2(&Weight::from_ints(r))).max().unwrap();
    assert_eq!(longest, qf(1, 4));
}

#[test]
fn w_one_sizes() {
    let cases: Vec<(&str, Vec<Vec<i64>>, usize)> = vec![
        ("A1", vec![], 2),
        ("A2", vec![], 6),
        ("A2", vec![vec![1, 0]], 3),
        ("A3", vec![vec![1, 0, 0], vec![0, 0, 1]], 6),
        ("B2", vec![vec![1, 0]], 4),
        ("G2", vec![vec![0, 1]], 6),
        ("A1xA1", vec![vec![1, 0]], 2),
    ];
    for (ty, h, expect) in cases {
        let rs = build_root_system(ty).unwrap();
        let pair = validate_pair(&rs, &h).unwrap();
        let w = WeylGroup::new(&rs);
        let wh = pair.weyl_h();
        assert_eq!(w.order() / wh.order(), expect);
        assert_eq!(pair.w_one(&w).len(), expect, "{} {:?}", ty, h);
    }
}
