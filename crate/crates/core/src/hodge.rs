//! Hermitian symmetric pairs: Chevalley-Eilenberg complexes of `p+` and `p-`, the
//! identification with `C+` and `C-`, and the Hodge decomposition of `M (x) S`.

use crate::cat_o::{ContravariantForm, ModuleWindow};
use crate::dirac::{assemble_block, Block, DiracBlock};
use crate::error::{Error, Result};
use crate::liealg::{Gen, LieAlgebra};
use crate::linalg::{q, Mat, Subspace};
use crate::roots::{Pair, Weight};
use crate::spinor::SpinModule;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct HermitianPair {
    pub pair: Pair,
    /// Positive roots spanning `p+`, in increasing index order.
    pub p_plus: Vec<usize>,
    pub q_abelian: bool,
    pub parabolic: bool,
}

/// Certifies that `q` is abelian and `h + p+` is a parabolic subalgebra.
pub fn detect_hermitian(pair: &Pair) -> Result<HermitianPair> {
    let rs = &pair.rs;
    let add = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<i64>>();
    for (i, &a) in pair.q_pos.iter().enumerate() {
        for &b in &pair.q_pos[i..] {
            if rs.is_root(&add(&rs.positive[a], &rs.positive[b])) {
                return Err(Error::NotHermitian(format!("{} + {} is a root", rs.pos_weight(a), rs.pos_weight(b))));
            }
        }
    }
    for &a in &pair.h_pos {
        for &b in &pair.q_pos {
            for sign in [1i64, -1] {
                let alpha: Vec<i64> = rs.positive[a].iter().map(|x| sign * x).collect();
                let s = add(&alpha, &rs.positive[b]);
                if let Some((r, pos)) = rs.root_lookup(&s) {
                    if !pos || !pair.q_pos.contains(&r) {
                        return Err(Error::NotHermitian(format!(
                            "[h, p+] leaves p+ at {} + {}",
                            Weight::from_ints(&alpha),
                            rs.pos_weight(b)
                        )));
                    }
                }
            }
        }
    }
    Ok(HermitianPair { pair: pair.clone(), p_plus: pair.q_pos.clone(), q_abelian: true, parabolic: true })
}

/// Weight-`nu` slice of `M (x) wedge p-`, carrying both `d` and `del`.
#[derive(Clone, Debug)]
pub struct CeSlice {
    pub nu: Weight,
    /// Subsets of `p_plus` as bitmasks, ordered by size then value.
    pub masks: Vec<u32>,
    /// `(module weight, offset, dim)` per mask.
    pub parts: Vec<(Weight, usize, usize)>,
    pub dim: usize,
    pub degree: Vec<usize>,
    /// `d(v (x) Y_I) = sum_beta e_beta v (x) Y_beta ^ Y_I`.
    pub d: Mat,
    /// `del(v (x) Y_1 ^ ... ^ Y_k) = sum_i (-1)^(i+1) Y_i v (x) Y_1 ^ .. ^ Y_k` with `Y_i` omitted.
    pub del: Mat,
}

pub fn ce_complex(hp: &HermitianPair, m: &ModuleWindow, nu: &Weight) -> Result<CeSlice> {
    let g = &m.g;
    let n = hp.p_plus.len();
    let mut masks: Vec<u32> = (0..(1u32 << n)).collect();
    masks.sort_by_key(|x| (x.count_ones(), *x));
    let pos: HashMap<u32, usize> = masks.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut parts = Vec::with_capacity(masks.len());
    let mut degree = Vec::new();
    let mut off = 0;
    for &mask in &masks {
        let mut w = nu.clone();
        for (k, &r) in hp.p_plus.iter().enumerate() {
            if mask & (1 << k) != 0 {
                w = w.add_ints(&g.rs.positive[r]);
            }
        }
        let dm = m.dim(&w)?;
        parts.push((w, off, dm));
        degree.extend(std::iter::repeat(mask.count_ones() as usize).take(dm));
        off += dm;
    }
    let mut d = Mat::zeros(off, off);
    let mut del = Mat::zeros(off, off);
    for (i, &mask) in masks.iter().enumerate() {
        let (w, o, dm) = &parts[i];
        if *dm == 0 {
            continue;
        }
        for (k, &r) in hp.p_plus.iter().enumerate() {
            let before = (mask & ((1u32 << k) - 1)).count_ones();
            let sign = q(if before % 2 == 0 { 1 } else { -1 });
            if mask & (1 << k) == 0 {
                let (_, to, td) = &parts[pos[&(mask | (1 << k))]];
                if *td > 0 {
                    d.add_block(*to, *o, &m.action(g.idx(Gen::E(r)), w)?, &sign);
                }
            } else {
                let (_, to, td) = &parts[pos[&(mask & !(1 << k))]];
                if *td > 0 {
                    del.add_block(*to, *o, &m.action(g.idx(Gen::F(r)), w)?, &sign);
                }
            }
        }
    }
    Ok(CeSlice { nu: nu.clone(), masks, parts, dim: off, degree, d, del })
}

impl CeSlice {
    fn degree_space(&self, k: usize) -> Subspace {
        let idx: Vec<usize> = (0..self.dim).filter(|&i| self.degree[i] == k).collect();
        Subspace::coordinate(self.dim, &idx)
    }

    fn graded_dims(&self, op: &Mat, up: bool) -> Vec<usize> {
        let top = self.masks.last().map(|m| m.count_ones() as usize).unwrap_or(0);
        let ker = Subspace::kernel_of(op);
        (0..=top)
            .map(|k| {
                let z = ker.intersect(&self.degree_space(k)).dim();
                let src = if up { k.checked_sub(1) } else { Some(k + 1) };
                let b = match src {
                    Some(j) if j <= top => self.degree_space(j).image_under(op).dim(),
                    _ => 0,
                };
                z - b
            })
            .collect()
    }

    /// `dim H^k(p+, M)_nu` for each degree `k`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        self.graded_dims(&self.d, true)
    }

    /// `dim H_k(p-, M)_nu` for each degree `k`.
    pub fn homology_dims(&self) -> Vec<usize> {
        self.graded_dims(&self.del, false)
    }
}

/// Basis map from the CE slice at `mu - rho_q` to the Dirac block at `mu`.
/// The sign of each monomial is that of the permutation between `p_plus` order and spin order.
pub fn identification(hp: &HermitianPair, s: &SpinModule, ce: &CeSlice, block: &Block) -> Result<Mat> {
    let mut p = Mat::zeros(block.dim, ce.dim);
    for (i, &mask) in ce.masks.iter().enumerate() {
        let (_, o, dm) = &ce.parts[i];
        let mut seq = Vec::new();
        for (k, r) in hp.p_plus.iter().enumerate() {
            if mask & (1 << k) != 0 {
                seq.push(s.order.iter().position(|x| x == r).ok_or_else(|| Error::Invalid("root outside q".into()))?);
            }
        }
        let mut inversions = 0;
        for a in 0..seq.len() {
            for b in a + 1..seq.len() {
                if seq[a] > seq[b] {
                    inversions += 1;
                }
            }
        }
        let smask = seq.iter().fold(0u32, |acc, &k| acc | (1 << k));
        let (_, to, td) = &block.parts[s.index_of_mask(smask)];
        if td != dm {
            return Err(Error::DimensionMismatch { expected: *dm, got: *td });
        }
        let sign = q(if inversions % 2 == 0 { 1 } else { -1 });
        for j in 0..*dm {
            p.set(to + j, o + j, sign.clone());
        }
    }
    Ok(p)
}

/// Checks `C+ = d`, `C- = del` and `D = d + del` on the block at `mu`.
pub fn identification_check(hp: &HermitianPair, s: &SpinModule, m: &ModuleWindow, mu: &Weight) -> Result<()> {
    if !s.cubic.is_zero() {
        return Err(Error::NotHermitian("cubic term does not vanish".into()));
    }
    let db = assemble_block(m, s, mu)?;
    let ce = ce_complex(hp, m, &mu.sub(&hp.pair.rho_q()))?;
    let p = identification(hp, s, &ce, &db.block)?;
    let at = |what: &str| Error::Invalid(format!("{} fails at {}", what, mu));
    if db.c_plus.mul(&p) != p.mul(&ce.d) {
        return Err(at("C+ = d"));
    }
    if db.c_minus.mul(&p) != p.mul(&ce.del) {
        return Err(at("C- = del"));
    }
    if db.d.mul(&p) != p.mul(&ce.d.add(&ce.del)) {
        return Err(at("D = d + del"));
    }
    Ok(())
}

/// Positive definiteness of each Gram matrix of the form.
pub fn unitarity_check(form: &ContravariantForm) -> Vec<(Weight, bool)> {
    form.grams.iter().map(|(w, g)| (w.clone(), g.is_positive_definite())).collect()
}

/// Tensor product of the module form and the weighted spin form on a block.
pub fn block_inner(form: &ContravariantForm, s: &SpinModule, block: &Block) -> Result<Mat> {
    let sw = s.inner_weights();
    let mut out = Mat::zeros(block.dim, block.dim);
    for (b, (w, off, d)) in block.parts.iter().enumerate() {
        if *d == 0 {
            continue;
        }
        out.add_block(*off, *off, form.gram(w)?, &sw[b]);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeBlock {
    pub mu: Weight,
    pub dim: usize,
    /// `(C+)^adj = -C-` with respect to the inner product.
    pub adjoint: bool,
    pub positive: bool,
    /// `ker D` and `im D` are complementary.
    pub ker_im_split: bool,
    /// `ker C+ = im C+ (+) ker D` and `ker C- = im C- (+) ker D`.
    pub c_splits: bool,
    pub ker_d: usize,
    pub hd: usize,
}

impl HodgeBlock {
    pub fn ok(&self) -> bool {
        self.adjoint && self.positive && self.ker_im_split && self.c_splits && self.ker_d == self.hd
    }
}

fn direct_sum_equals(a: &Subspace, b: &Subspace, total: &Subspace) -> bool {
    a.intersect(b).dim() == 0 && a.sum(b) == *total
}

pub fn hodge_decomposition_check(db: &DiracBlock, inner: &Mat) -> HodgeBlock {
    let cp = &db.c_plus;
    let cm = &db.c_minus;
    let adjoint = cp.transpose().mul(inner).add(&inner.mul(cm)).is_zero()
        && cm.transpose().mul(inner).add(&inner.mul(cp)).is_zero();
    let ker = Subspace::kernel_of(&db.d);
    let im = Subspace::image_of(&db.d);
    let n = db.block.dim;
    let ker_im_split = ker.intersect(&im).dim() == 0 && ker.dim() + im.dim() == n;
    let c_splits = direct_sum_equals(&Subspace::image_of(cp), &ker, &Subspace::kernel_of(cp))
        && direct_sum_equals(&Subspace::image_of(cm), &ker, &Subspace::kernel_of(cm));
    let hd = ker.dim() - ker.intersect(&im).dim();
    HodgeBlock {
        mu: db.block.mu.clone(),
        dim: n,
        adjoint,
        positive: n == 0 || inner.is_positive_definite(),
        ker_im_split,
        c_splits,
        ker_d: ker.dim(),
        hd,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub mu: Weight,
    pub hd: usize,
    pub cohomology: Vec<usize>,
    pub homology: Vec<usize>,
}

impl Comparison {
    pub fn ok(&self) -> bool {
        self.cohomology.iter().sum::<usize>() == self.hd && self.homology.iter().sum::<usize>() == self.hd
    }
}

/// `dim H_D` at `mu` against CE cohomology and homology at `mu - (rho - rho_h)`.
pub fn cohomology_comparison(hp: &HermitianPair, m: &ModuleWindow, s: &SpinModule, mu: &Weight) -> Result<Comparison> {
    let db = assemble_block(m, s, mu)?;
    let ker = Subspace::kernel_of(&db.d);
    let hd = ker.dim() - ker.intersect(&Subspace::image_of(&db.d)).dim();
    let ce = ce_complex(hp, m, &mu.sub(&hp.pair.rho_q()))?;
    Ok(Comparison { mu: mu.clone(), hd, cohomology: ce.cohomology_dims(), homology: ce.homology_dims() })
}

/// `d` and `del` commute with the diagonal action of the root vectors of `h`.
pub fn equivariance_check(hp: &HermitianPair, m: &ModuleWindow, s: &SpinModule, mu: &Weight) -> Result<bool> {
    let g: &LieAlgebra = &m.g;
    let src = assemble_block(m, s, mu)?;
    for &r in &hp.pair.h_pos {
        let beta = g.rs.pos_weight(r);
        for (a, tmu) in [(g.idx(Gen::E(r)), mu.add(&beta)), (g.idx(Gen::F(r)), mu.sub(&beta))] {
            let tgt = match assemble_block(m, s, &tmu) {
                Ok(t) => t,
                Err(Error::OutsideWindow(_)) => continue,
                Err(e) => return Err(e),
            };
            let x = crate::dirac::diag_action(m, s, a, &src.block, &tgt.block)?;
            if x.mul(&src.c_plus) != tgt.c_plus.mul(&x) || x.mul(&src.c_minus) != tgt.c_minus.mul(&x) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
