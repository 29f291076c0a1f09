use dirac_core::error::Error;
use dirac_core::hodge::detect_hermitian;
use dirac_core::liealg::{build_chevalley_basis, string_p, Gen};
use dirac_core::linalg::{q, Q};
use dirac_core::roots::{build_root_system, validate_pair, Weight};
use dirac_core::spinor::{build_spin_module, SpinModule};
use num_traits::Signed;
use std::sync::Arc;

const TYPES: [&str; 6] = ["A1", "A2", "A3", "A1xA1", "B2", "G2"];

#[test]
fn jacobi_and_killing_trace() {
    for ty in TYPES {
        let g = build_chevalley_basis(&build_root_system(ty).unwrap());
        assert_eq!(g.jacobi_violation(), None, "{}", ty);
        assert_eq!(g.killing_trace_mismatch(), None, "{}", ty);
    }
}

// [e_a, e_b] = +-(p + 1) e_{a+b} where p is the largest with b - p a a root.
#[test]
fn chevalley_structure_constants() {
    for ty in TYPES {
        let rs = build_root_system(ty).unwrap();
        let g = build_chevalley_basis(&rs);
        for i in 0..g.n_pos {
            for j in 0..g.n_pos {
                let (a, b) = (&rs.positive[i], &rs.positive[j]);
                let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let br = g.bracket_chevalley(g.idx(Gen::E(i)), g.idx(Gen::E(j)));
                match rs.pos_index(&sum) {
                    Some(k) => {
                        assert_eq!(br.len(), 1);
                        assert_eq!(br[0].0, g.idx(Gen::E(k)));
                        assert_eq!(br[0].1.abs(), q(string_p(&rs, a, b) + 1), "{} {:?} {:?}", ty, a, b);
                    }
                    None => assert!(br.is_empty()),
                }
            }
        }
    }
}

fn pairs() -> Vec<(&'static str, Vec<Vec<i64>>)> {
    vec![
        ("A1", vec![]),
        ("A2", vec![]),
        ("A2", vec![vec![1, 0]]),
        ("A3", vec![vec![0, 1, 0]]),
        ("A1xA1", vec![vec![1, 0]]),
        ("B2", vec![vec![1, 0]]),
        ("B2", vec![]),
        ("G2", vec![vec![0, 1]]),
    ]
}

#[test]
fn clifford_relations_hold() {
    for (ty, h) in pairs() {
        let rs = build_root_system(ty).unwrap();
        let g = Arc::new(build_chevalley_basis(&rs));
        let pair = validate_pair(&rs, &h).unwrap();
        let s = build_spin_module(&g, &pair).unwrap();
        assert_eq!(s.dim(), 1 << pair.q_pos.len());
        assert_eq!(s.clifford_violation(), None, "{} {:?}", ty, h);
    }
}

#[test]
fn cubic_term_is_basis_independent() {
    for (ty, h) in pairs() {
        let rs = build_root_system(ty).unwrap();
        let g = Arc::new(build_chevalley_basis(&rs));
        let pair = validate_pair(&rs, &h).unwrap();
        let s = build_spin_module(&g, &pair).unwrap();
        let basis = s.default_q_basis();
        let n = basis.len();
        // unipotent change of basis with a few rational entries
        let mixed: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                let mut v = basis[i].clone();
                for j in i + 1..n {
                    let c = q(((3 * i + j) % 5) as i64 - 2) / q(2);
                    for (x, y) in v.iter_mut().zip(&basis[j]) {
                        *x += &c * y;
                    }
                }
                v
            })
            .collect();
        assert_eq!(s.cubic_with_basis(&mixed).unwrap(), s.cubic, "{} {:?}", ty, h);
        let mut order = pair.q_pos.clone();
        order.reverse();
        let s2 = SpinModule::with_order(&g, &pair, &order).unwrap();
        assert_eq!(s2.clifford_violation(), None);
        assert_eq!(s2.cubic.is_zero(), s.cubic.is_zero());
    }
}

#[test]
fn cubic_term_vanishes_exactly_for_symmetric_pairs() {
    let (short, long) = b2_simple(&build_root_system("B2").unwrap());
    for (ty, h, symmetric) in [
        ("A1", vec![], true),
        ("A2", vec![], false),
        ("A2", vec![vec![1, 0]], true),
        ("B2", vec![], false),
        ("B2", vec![short], true),
        ("B2", vec![long], false),
        ("G2", vec![], false),
    ] {
        let rs = build_root_system(ty).unwrap();
        let g = Arc::new(build_chevalley_basis(&rs));
        let pair = validate_pair(&rs, &h).unwrap();
        let s = build_spin_module(&g, &pair).unwrap();
        assert_eq!(s.cubic.is_zero(), symmetric, "{} {:?}", ty, h);
        let vac = s.vacuum();
        assert!((0..s.dim()).all(|r| s.cubic.get(r, vac) == &q(0)), "cubic term moves the vacuum for {} {:?}", ty, h);
    }
}

#[test]
fn hermitian_detection() {
    let a2 = build_root_system("A2").unwrap();
    assert!(detect_hermitian(&validate_pair(&a2, &[vec![1, 0]]).unwrap()).is_ok());
    match detect_hermitian(&validate_pair(&a2, &[]).unwrap()) {
        Err(Error::NotHermitian(w)) => assert!(w.contains("is a root"), "{}", w),
        other => panic!("expected a witness, got {:?}", other.map(|h| h.p_plus)),
    }
    let a1 = build_root_system("A1").unwrap();
    assert_eq!(detect_hermitian(&validate_pair(&a1, &[]).unwrap()).unwrap().p_plus, vec![0]);
    // so(5): a short root in h gives so(3) + so(2); a long one leaves q non-abelian
    let b2 = build_root_system("B2").unwrap();
    let (short, long) = b2_simple(&b2);
    assert!(detect_hermitian(&validate_pair(&b2, &[short]).unwrap()).is_ok());
    assert!(matches!(detect_hermitian(&validate_pair(&b2, &[long]).unwrap()), Err(Error::NotHermitian(_))));
}

fn b2_simple(rs: &dirac_core::roots::RootSystem) -> (Vec<i64>, Vec<i64>) {
    if rs.norm2(&Weight::from_ints(&[1, 0])) < rs.norm2(&Weight::from_ints(&[0, 1])) {
        (vec![1, 0], vec![0, 1])
    } else {
        (vec![0, 1], vec![1, 0])
    }
}

#[test]
fn invalid_pairs_are_rejected() {
    let a2 = build_root_system("A2").unwrap();
    assert!(validate_pair(&a2, &[vec![1, 1]]).is_ok());
    assert!(matches!(validate_pair(&a2, &[vec![2, 0]]), Err(Error::NotARoot(_))));
    // the two short positive roots of so(5) sum to a long root
    let b2 = build_root_system("B2").unwrap();
    let min = b2.positive.iter().map(|r| b2.norm2(&Weight::from_ints(r))).min().unwrap();
    let shorts: Vec<Vec<i64>> =
        b2.positive.iter().filter(|r| b2.norm2(&Weight::from_ints(r)) == min).cloned().collect();
    assert_eq!(shorts.len(), 2);
    assert!(matches!(validate_pair(&b2, &shorts), Err(Error::NotClosed(_))));
    assert!(matches!(build_root_system("E8"), Err(Error::UnsupportedType(_))));
}
