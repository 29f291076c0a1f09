use dirac_core::cat_o::{
    finite_dim_simple, pair_signs, ses_from_singular, simple_quotient_window_signed, split_ses, tensor_with_finite,
    verma_window, ModuleWindow,
};
use dirac_core::dirac::circle::{exact_circle, SesBlocks};
use dirac_core::dirac::{analyze_module, assemble_block, block_weights, kostant_prediction, nonvanishing_check};
use dirac_core::error::Error;
use dirac_core::hodge::{
    block_inner, ce_complex, cohomology_comparison, detect_hermitian, hodge_decomposition_check, identification_check,
    unitarity_check,
};
use dirac_core::liealg::{build_chevalley_basis, LieAlgebra};
use dirac_core::linalg::{q, qf, Q};
use dirac_core::roots::{build_root_system, validate_pair, Pair};
use dirac_core::spinor::{build_spin_module, SpinModule};
use std::sync::Arc;

fn setup(ty: &str, h: &[Vec<i64>]) -> (Arc<LieAlgebra>, Pair, SpinModule) {
    let rs = build_root_system(ty).unwrap();
    let g = Arc::new(build_chevalley_basis(&rs));
    let pair = validate_pair(&rs, h).unwrap();
    let s = build_spin_module(&g, &pair).unwrap();
    (g, pair, s)
}

fn fw(g: &LieAlgebra, v: &[Q]) -> dirac_core::roots::Weight {
    g.rs.from_fundamental(v).unwrap()
}

#[test]
fn square_identity_on_verma_windows() {
    for (ty, h, lam, depth) in [
        ("A1", vec![], vec![qf(-1, 2)], 5),
        ("A2", vec![], vec![qf(-1, 2), qf(-1, 3)], 5),
        ("A2", vec![vec![1, 0]], vec![q(-1), q(-1)], 5),
        ("B2", vec![], vec![q(0), q(-1)], 4),
    ] {
        let (g, pair, s) = setup(ty, &h);
        let v = verma_window(&g, &fw(&g, &lam), depth).unwrap();
        let res = analyze_module(&v.module, &s, &pair, true).unwrap();
        let checked = res.iter().filter(|(_, a)| a.square_ok == Some(true)).count();
        assert!(checked > 0);
        assert!(res.iter().all(|(_, a)| a.square_ok != Some(false)), "{} {:?}", ty, h);
        assert!(res.iter().all(|(_, a)| a.unexplained == 0), "{} {:?}", ty, h);
    }
}

#[test]
fn top_vector_is_a_nonzero_class() {
    for (ty, h, lam) in [
        ("A2", vec![vec![1, 0]], vec![q(-1), q(-1)]),
        ("A2", vec![], vec![qf(1, 2), q(2)]),
        ("B2", vec![], vec![q(1), q(0)]),
    ] {
        let (g, pair, s) = setup(ty, &h);
        let v = verma_window(&g, &fw(&g, &lam), 3).unwrap();
        let r = nonvanishing_check(&v.module, &s, &pair).unwrap();
        assert!(!r.is_empty() && r.iter().all(|&(k, i)| k && i), "{} {:?}", ty, lam);
    }
}

#[test]
fn kostant_kernel_for_finite_modules() {
    for (ty, h, lam) in [("A1", vec![], vec![2i64]), ("A2", vec![vec![1, 0]], vec![1, 1]), ("A2", vec![], vec![1, 0])] {
        let (g, pair, s) = setup(ty, &h);
        let l = fw(&g, &lam.iter().map(|&x| q(x)).collect::<Vec<_>>());
        let m = finite_dim_simple(&g, &l).unwrap();
        let (_, chars) = kostant_prediction(&pair, &l);
        for (_, a) in analyze_module(&m, &s, &pair, false).unwrap() {
            assert_eq!(a.ker as i64, chars.get(&a.mu).copied().unwrap_or(0), "{} {:?} at {}", ty, lam, a.mu);
            assert_eq!(a.ker, a.hd);
        }
    }
}

// sl(2): M(-rho) (x) F(1) has a nontrivial Jordan block of D.
#[test]
fn jordan_block_in_a_tensor_product() {
    let (g, pair, s) = setup("A1", &[]);
    let v = verma_window(&g, &fw(&g, &[q(-1)]), 8).unwrap();
    let f = finite_dim_simple(&g, &fw(&g, &[q(1)])).unwrap();
    let m = tensor_with_finite(&v.module, &f).unwrap();
    let res = analyze_module(&m, &s, &pair, false).unwrap();
    let max = res.iter().flat_map(|(_, a)| a.jordan_sizes.iter().copied()).max().unwrap();
    assert!(max >= 2);
    for (_, a) in &res {
        assert_eq!(a.htop_direct, a.htop_jordan, "{}", a.mu);
    }
}

fn circle_over(ses: &dirac_core::cat_o::Ses, s: &SpinModule) -> (usize, usize) {
    let (mut exact, mut nonzero) = (0, 0);
    for mu in block_weights(&ses.m2, s) {
        let sb = match SesBlocks::from_ses(ses, s, &mu) {
            Ok(sb) => sb,
            Err(Error::OutsideWindow(_)) => continue,
            Err(e) => panic!("{}", e),
        };
        sb.validate().unwrap();
        let r = exact_circle(&sb).unwrap();
        assert!(r.compositions_zero && r.exact, "not exact at {}: {:?} {:?}", mu, r.dims, r.ranks);
        exact += 1;
        if r.dims.iter().any(|&d| d > 0) {
            nonzero += 1;
        }
    }
    (exact, nonzero)
}

#[test]
fn exact_circle_for_sl2_sequences() {
    let (g, _, s) = setup("A1", &[]);
    for k in 0..=2i64 {
        let ses = ses_from_singular(&g, &fw(&g, &[q(k)]), 6, &[k + 1]).unwrap();
        let (n, nonzero) = circle_over(&ses, &s);
        assert!(n > 0 && nonzero > 0, "lambda {}", k);
    }
    let a = verma_window(&g, &fw(&g, &[q(0)]), 6).unwrap();
    let b = verma_window(&g, &fw(&g, &[q(-2)]), 6).unwrap();
    let ses = split_ses(&a.module, &b.module).unwrap();
    assert!(circle_over(&ses, &s).0 > 0);
}

// Outside sl(2) a Jordan basis of the middle term need not restrict and project compatibly;
// the construction has to say so rather than return a wrong circle.
#[test]
fn incompatible_jordan_types_are_reported() {
    let (g, _, s) = setup("A2", &[vec![1, 0]]);
    let ses = ses_from_singular(&g, &fw(&g, &[q(0), q(0)]), 5, &[0, 1]).unwrap();
    let mut failures = 0;
    for mu in block_weights(&ses.m2, &s) {
        let Ok(sb) = SesBlocks::from_ses(&ses, &s, &mu) else { continue };
        match exact_circle(&sb) {
            Ok(r) => assert!(r.exact, "{}", mu),
            Err(Error::LiftFailure(_)) => failures += 1,
            Err(e) => panic!("{}", e),
        }
    }
    assert!(failures > 0);
}

fn hodge_window(
    ty: &str,
    h: &[Vec<i64>],
    lam: &[i64],
    simple: bool,
    depth: i64,
) -> (Pair, SpinModule, ModuleWindow, Vec<bool>, dirac_core::cat_o::ContravariantForm) {
    let (g, pair, s) = setup(ty, h);
    let l = fw(&g, &lam.iter().map(|&x| q(x)).collect::<Vec<_>>());
    let signs = pair_signs(&g, &pair.h_pos);
    let mut v = verma_window(&g, &l, depth).unwrap();
    let (m, form) = if simple {
        let (qd, f) = simple_quotient_window_signed(&mut v, &signs).unwrap();
        (qd.module, f)
    } else {
        let f = v.shapovalov(&signs);
        (v.module.clone(), f)
    };
    let unit = unitarity_check(&form).into_iter().map(|x| x.1).collect();
    (pair, s, m, unit, form)
}

#[test]
fn hodge_decomposition_for_unitary_modules() {
    for (ty, h, lam, simple, depth) in
        [("A1", vec![], vec![-1i64], false, 6), ("A2", vec![vec![1, 0]], vec![1, -3], true, 5)]
    {
        let (pair, s, m, unit, form) = hodge_window(ty, &h, &lam, simple, depth);
        assert!(unit.iter().all(|&u| u), "{} {:?} should be unitary", ty, lam);
        let hp = detect_hermitian(&pair).unwrap();
        let mut hd = 0;
        for mu in block_weights(&m, &s) {
            identification_check(&hp, &s, &m, &mu).unwrap();
            let db = assemble_block(&m, &s, &mu).unwrap();
            let inner = block_inner(&form, &s, &db.block).unwrap();
            let hb = hodge_decomposition_check(&db, &inner);
            assert!(hb.ok(), "{} {:?} at {}", ty, lam, mu);
            let c = cohomology_comparison(&hp, &m, &s, &mu).unwrap();
            assert!(c.ok(), "{} {:?} at {}", ty, lam, mu);
            hd += c.hd;
        }
        assert!(hd > 0);
    }
}

#[test]
fn chevalley_eilenberg_differentials_square_to_zero() {
    let (pair, s, m, _, _) = hodge_window("A2", &[vec![1, 0]], &[-1, -1], false, 5);
    let hp = detect_hermitian(&pair).unwrap();
    for mu in block_weights(&m, &s).into_iter().take(15) {
        let ce = ce_complex(&hp, &m, &mu.sub(&pair.rho_q())).unwrap();
        assert!(ce.d.mul(&ce.d).is_zero());
        assert!(ce.del.mul(&ce.del).is_zero());
    }
}

#[test]
fn indefinite_forms_are_detected() {
    for (ty, h, lam) in [("A1", vec![], vec![1i64]), ("A2", vec![vec![1, 0]], vec![-1, -1])] {
        let (_, _, _, unit, form) = hodge_window(ty, &h, &lam, false, 5);
        assert!(unit.iter().any(|&u| !u), "{} {:?}", ty, lam);
        assert!(form.is_positive_definite().is_some());
    }
}
