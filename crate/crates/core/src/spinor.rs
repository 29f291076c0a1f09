//! Spin module `S = wedge(n_q^-)` with Clifford and `h` actions and the cubic element.

use crate::error::{Error, Result};
use crate::liealg::{Gen, LieAlgebra};
use crate::linalg::{q, qf, Mat, Q};
use crate::roots::{Pair, Weight};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct SpinModule {
    pub g: Arc<LieAlgebra>,
    pub pair: Pair,
    /// Positive roots of `q` (indices into the positive roots) in monomial order.
    pub order: Vec<usize>,
    /// Basis monomials as bitmasks over `order`.
    pub masks: Vec<u32>,
    index: HashMap<u32, usize>,
    pub weights: Vec<Weight>,
    pub parity: Vec<u8>,
    /// `gamma(e_{-beta_k})`: wedge on the left.
    pub wedge: Vec<Vec<Option<(usize, i64)>>>,
    /// `gamma(e_{beta_k})`: contraction.
    pub contract: Vec<Vec<Option<(usize, i64)>>>,
    /// Spin action of the `h` basis elements (Cartan and root vectors of `h`).
    pub h_action: BTreeMap<usize, Mat>,
    /// `gamma(c)` for the cubic element.
    pub cubic: Mat,
}

pub fn build_spin_module(g: &Arc<LieAlgebra>, pair: &Pair) -> Result<SpinModule> {
    SpinModule::with_order(g, pair, &pair.q_pos)
}

impl SpinModule {
    pub fn with_order(g: &Arc<LieAlgebra>, pair: &Pair, order: &[usize]) -> Result<SpinModule> {
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != pair.q_pos {
            return Err(Error::Invalid("spin order must permute the positive roots of q".into()));
        }
        let n = order.len();
        let mut masks: Vec<u32> = (0..(1u32 << n)).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        let index: HashMap<u32, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let rho_q = pair.rho_q();
        let weights = masks
            .iter()
            .map(|&m| {
                let mut w = rho_q.clone();
                for (k, &r) in order.iter().enumerate() {
                    if m & (1 << k) != 0 {
                        w = w.sub_ints(&g.rs.positive[r]);
                    }
                }
                w
            })
            .collect();
        let parity = masks.iter().map(|m| (m.count_ones() % 2) as u8).collect();
        let mut wedge = vec![vec![None; masks.len()]; n];
        let mut contract = vec![vec![None; masks.len()]; n];
        for k in 0..n {
            for (b, &m) in masks.iter().enumerate() {
                let below = (m & ((1u32 << k) - 1)).count_ones();
                let sign = if below % 2 == 0 { 1 } else { -1 };
                if m & (1 << k) == 0 {
                    wedge[k][b] = Some((index[&(m | (1 << k))], sign));
                } else {
                    contract[k][b] = Some((index[&(m & !(1 << k))], sign));
                }
            }
        }
        let mut s = SpinModule {
            g: g.clone(),
            pair: pair.clone(),
            order: order.to_vec(),
            masks,
            index,
            weights,
            parity,
            wedge,
            contract,
            h_action: BTreeMap::new(),
            cubic: Mat::zeros(0, 0),
        };
        let mut h_gens: Vec<usize> = (0..g.rank).collect();
        for &i in &pair.h_pos {
            h_gens.push(g.idx(Gen::E(i)));
            h_gens.push(g.idx(Gen::F(i)));
        }
        for a in h_gens {
            let m = s.sigma(&g.unit(a))?;
            s.h_action.insert(a, m);
        }
        s.cubic = s.cubic_with_basis(&s.default_q_basis())?;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.masks.len()
    }

    pub fn n_q(&self) -> usize {
        self.order.len()
    }

    pub fn index_of_mask(&self, m: u32) -> usize {
        self.index[&m]
    }

    /// Index of the monomial `1`.
    pub fn vacuum(&self) -> usize {
        self.index[&0]
    }

    fn op_matrix(&self, table: &[Option<(usize, i64)>]) -> Mat {
        let d = self.dim();
        let mut m = Mat::zeros(d, d);
        for (b, t) in table.iter().enumerate() {
            if let Some((r, s)) = t {
                m.set(*r, b, q(*s));
            }
        }
        m
    }

    pub fn gamma_e(&self, k: usize) -> Mat {
        self.op_matrix(&self.contract[k])
    }

    pub fn gamma_f(&self, k: usize) -> Mat {
        self.op_matrix(&self.wedge[k])
    }

    /// `gamma(v)` for `v` in `q`, written in the rescaled basis of `g`.
    pub fn gamma(&self, v: &[Q]) -> Result<Mat> {
        let d = self.dim();
        let mut m = Mat::zeros(d, d);
        let mut used = vec![false; v.len()];
        for (k, &r) in self.order.iter().enumerate() {
            let ea = self.g.idx(Gen::E(r));
            let fa = self.g.idx(Gen::F(r));
            used[ea] = true;
            used[fa] = true;
            if !v[ea].is_zero() {
                m = m.add(&self.gamma_e(k).scale(&v[ea]));
            }
            if !v[fa].is_zero() {
                m = m.add(&self.gamma_f(k).scale(&v[fa]));
            }
        }
        if v.iter().zip(&used).any(|(c, u)| !u && !c.is_zero()) {
            return Err(Error::Invalid("vector is not in q".into()));
        }
        Ok(m)
    }

    /// `e_beta, e_{-beta}` for every positive root of `q`, in monomial order.
    pub fn default_q_basis(&self) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for &r in &self.order {
            out.push(self.g.unit(self.g.idx(Gen::E(r))));
            out.push(self.g.unit(self.g.idx(Gen::F(r))));
        }
        out
    }

    /// Killing-dual basis of a basis of `q`.
    pub fn dual_basis(&self, basis: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
        let n = basis.len();
        let mut gm = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                gm.set(i, j, self.g.killing_vec(&basis[i], &basis[j]));
            }
        }
        let inv = gm.inverse().ok_or_else(|| Error::Invalid("degenerate basis of q".into()))?;
        Ok((0..n)
            .map(|i| {
                let mut v = vec![Q::zero(); self.g.dim];
                for j in 0..n {
                    let c = inv.get(j, i);
                    if c.is_zero() {
                        continue;
                    }
                    for (x, b) in v.iter_mut().zip(&basis[j]) {
                        *x += c * b;
                    }
                }
                v
            })
            .collect())
    }

    /// `phi(ad x|_q) = 1/4 sum_i [gamma([x, Z_i]), gamma(Z^i)]`.
    pub fn sigma(&self, x: &[Q]) -> Result<Mat> {
        let basis = self.default_q_basis();
        let dual = self.dual_basis(&basis)?;
        let d = self.dim();
        let mut acc = Mat::zeros(d, d);
        for (z, zd) in basis.iter().zip(&dual) {
            let br = self.g.bracket_vec(x, z);
            if br.iter().all(|c| c.is_zero()) {
                continue;
            }
            let a = self.gamma(&br)?;
            let b = self.gamma(zd)?;
            acc = acc.add(&a.mul(&b).sub(&b.mul(&a)));
        }
        Ok(acc.scale(&qf(1, 4)))
    }

    /// `gamma(c) = 1/6 sum <Z_i, [Z_j, Z_k]> gamma(Z^i) gamma(Z^j) gamma(Z^k)`.
    pub fn cubic_with_basis(&self, basis: &[Vec<Q>]) -> Result<Mat> {
        let dual = self.dual_basis(basis)?;
        let gz: Vec<Mat> = dual.iter().map(|v| self.gamma(v)).collect::<Result<_>>()?;
        let n = basis.len();
        let d = self.dim();
        let mut acc = Mat::zeros(d, d);
        for j in 0..n {
            for k in 0..n {
                let br = self.g.bracket_vec(&basis[j], &basis[k]);
                if br.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let gjk = gz[j].mul(&gz[k]);
                for i in 0..n {
                    let c = self.g.killing_vec(&basis[i], &br);
                    if c.is_zero() {
                        continue;
                    }
                    acc = acc.add(&gz[i].mul(&gjk).scale(&c));
                }
            }
        }
        Ok(acc.scale(&qf(1, 6)))
    }

    /// First violated Clifford relation among the default basis, if any.
    pub fn clifford_violation(&self) -> Option<String> {
        let basis = self.default_q_basis();
        let gs: Vec<Mat> = basis.iter().map(|v| self.gamma(v).unwrap()).collect();
        let d = self.dim();
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let lhs = gs[i].mul(&gs[j]).add(&gs[j].mul(&gs[i]));
                let rhs = Mat::scalar(d, &self.g.killing_vec(&basis[i], &basis[j]));
                if lhs != rhs {
                    return Some(format!("basis pair ({}, {})", i, j));
                }
            }
        }
        None
    }

    /// Weighted monomial inner product making `gamma(e_beta)` adjoint to `gamma(e_{-beta})`
    /// up to the factor `1/kappa_beta`: `<u_I, u_I> = prod_{i in I} 1/kappa_i`.
    pub fn inner_weights(&self) -> Vec<Q> {
        self.masks
            .iter()
            .map(|&m| {
                let mut w = Q::one();
                for (k, &r) in self.order.iter().enumerate() {
                    if m & (1 << k) != 0 {
                        w /= &self.g.kappa[r];
                    }
                }
                w
            })
            .collect()
    }

    /// `phi(ad h_i)` on the monomial `u_I` should be `(rho - rho_h - sum beta)(h_i)`.
    pub fn weight_of_monomial(&self, b: usize) -> &Weight {
        &self.weights[b]
    }
}
