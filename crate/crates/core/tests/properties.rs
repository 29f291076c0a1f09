use dirac_core::cat_o::{compact_signs, pair_signs, verma_window};
use dirac_core::dirac::{analyze_weight, block_weights};
use dirac_core::liealg::{build_chevalley_basis, LieAlgebra};
use dirac_core::linalg::{qf, Q};
use dirac_core::roots::{build_root_system, validate_pair, WeylGroup};
use dirac_core::spinor::build_spin_module;
use proptest::prelude::*;
use std::sync::{Arc, OnceLock};

const TYPES: [&str; 6] = ["A1", "A2", "A3", "A1xA1", "B2", "G2"];

fn algebras() -> &'static Vec<Arc<LieAlgebra>> {
    static CELL: OnceLock<Vec<Arc<LieAlgebra>>> = OnceLock::new();
    CELL.get_or_init(|| TYPES.iter().map(|t| Arc::new(build_chevalley_basis(&build_root_system(t).unwrap()))).collect())
}

fn rational() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| qf(n, d))
}

fn element(dim: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-3i64..=3, 1i64..=2).prop_map(|(n, d)| qf(n, d)), dim)
}

fn apply_tau(g: &LieAlgebra, x: &[Q], signs: &[i64]) -> Vec<Q> {
    let mut out = vec![Q::from_integer(0.into()); g.dim];
    for (a, c) in x.iter().enumerate() {
        let (b, s) = g.tau(a, signs);
        out[b] += c * s;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn tau_reverses_brackets(t in 0usize..TYPES.len(), x in element(15), y in element(15)) {
        let g = &algebras()[t];
        let (x, y) = (&x[..g.dim], &y[..g.dim]);
        let mut characters = vec![compact_signs(g)];
        if TYPES[t] == "A2" {
            let pair = validate_pair(&g.rs, &[vec![1, 0]]).unwrap();
            characters.push(pair_signs(g, &pair.h_pos));
        }
        for signs in characters {
            let lhs = apply_tau(g, &g.bracket_vec(x, y), &signs);
            let rhs = g.bracket_vec(&apply_tau(g, y, &signs), &apply_tau(g, x, &signs));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn killing_form_is_invariant(t in 0usize..TYPES.len(), x in element(15), y in element(15), z in element(15)) {
        let g = &algebras()[t];
        let (x, y, z) = (&x[..g.dim], &y[..g.dim], &z[..g.dim]);
        prop_assert_eq!(g.killing_vec(&g.bracket_vec(x, y), z), g.killing_vec(x, &g.bracket_vec(y, z)));
    }

    #[test]
    fn weyl_group_preserves_the_form(
        t in 0usize..TYPES.len(),
        wi in any::<prop::sample::Index>(),
        a in prop::collection::vec(rational(), 3),
        b in prop::collection::vec(rational(), 3),
    ) {
        let rs = &algebras()[t].rs;
        let w = WeylGroup::new(rs);
        let el = &w.elements[wi.index(w.order())];
        let a = rs.from_fundamental(&a[..rs.rank]).unwrap();
        let b = rs.from_fundamental(&b[..rs.rank]).unwrap();
        prop_assert_eq!(rs.form(&el.apply(&a), &el.apply(&b)), rs.form(&a, &b));
        // the dot action fixes -rho
        prop_assert_eq!(rs.dot(el, &rs.rho.neg()), rs.rho.neg());
    }

    #[test]
    fn coordinate_changes_round_trip(t in 0usize..TYPES.len(), v in prop::collection::vec(rational(), 3)) {
        let rs = &algebras()[t].rs;
        let v = &v[..rs.rank];
        let w = rs.from_fundamental(v).unwrap();
        prop_assert_eq!(rs.to_fundamental(&w), v.to_vec());
        prop_assert_eq!(rs.from_simple(&w.0).unwrap(), w.clone());
        if let Some(eps) = rs.to_epsilon(&w) {
            prop_assert_eq!(rs.from_epsilon(&eps).unwrap(), w);
        }
    }
}

fn a2_setup(h: &[Vec<i64>]) -> (Arc<LieAlgebra>, dirac_core::roots::Pair, dirac_core::spinor::SpinModule) {
    let g = algebras()[1].clone();
    let pair = validate_pair(&g.rs, h).unwrap();
    let s = build_spin_module(&g, &pair).unwrap();
    (g, pair, s)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    // dim S+ - dim S- on a block equals the index of Dirac cohomology there
    #[test]
    fn index_identity(a in rational(), b in rational(), cartan in any::<bool>()) {
        let h = if cartan { vec![] } else { vec![vec![1, 0]] };
        let (g, pair, s) = a2_setup(&h);
        let l = g.rs.from_fundamental(&[a, b]).unwrap();
        let v = verma_window(&g, &l, 3).unwrap();
        for mu in block_weights(&v.module, &s).into_iter().take(6) {
            let (_, an) = analyze_weight(&v.module, &s, &pair, &mu, false).unwrap();
            prop_assert_eq!(an.parity_dims.0 as i64 - an.parity_dims.1 as i64, an.hd_plus as i64 - an.hd_minus as i64);
            prop_assert_eq!(an.htop_direct.clone(), an.htop_jordan.clone());
        }
    }

    // <x u, v> = <u, tau(x) v> for the Shapovalov form of a Verma window
    #[test]
    fn shapovalov_is_contravariant(a in rational(), b in rational(), use_pair in any::<bool>()) {
        let g = algebras()[1].clone();
        let pair = validate_pair(&g.rs, &[vec![1, 0]]).unwrap();
        let signs = if use_pair { pair_signs(&g, &pair.h_pos) } else { compact_signs(&g) };
        let l = g.rs.from_fundamental(&[a, b]).unwrap();
        let mut v = verma_window(&g, &l, 3).unwrap();
        let form = v.shapovalov(&signs);
        let m = &v.module;
        for (w, _) in m.weights() {
            for r in 0..g.n_pos {
                let e = g.idx(dirac_core::liealg::Gen::E(r));
                let up = w.add(&g.rs.pos_weight(r));
                if m.dim(&up).map_or(true, |d| d == 0) {
                    continue;
                }
                let (f, c) = g.tau(e, &signs);
                let lhs = m.action(e, w).unwrap().transpose().mul(form.gram(&up).unwrap());
                let rhs = form.gram(w).unwrap().mul(&m.action(f, &up).unwrap()).scale(&c);
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
