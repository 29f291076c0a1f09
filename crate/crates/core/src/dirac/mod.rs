//! The cubic Dirac operator on weight blocks of `M (x) S` and its cohomology.

use crate::cat_o::ModuleWindow;
use crate::error::{Error, Result};
use crate::liealg::Gen;
use crate::linalg::{poly_div_linear, q, qf, Mat, Subspace, Q};
use crate::roots::{Pair, PartitionCounter, Weight, WeylGroup};
use crate::spinor::SpinModule;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

pub mod circle;

/// Layout of the weight-`mu` block of `M (x) S`: one part per spin monomial.
#[derive(Clone, Debug)]
pub struct Block {
    pub mu: Weight,
    /// `(module weight, offset, dim)` indexed by spin monomial.
    pub parts: Vec<(Weight, usize, usize)>,
    pub dim: usize,
    pub parity: Vec<u8>,
}

impl Block {
    pub fn new(m: &ModuleWindow, s: &SpinModule, mu: &Weight) -> Result<Block> {
        let mut parts = Vec::with_capacity(s.dim());
        let mut parity = Vec::new();
        let mut off = 0;
        for b in 0..s.dim() {
            let w = mu.sub(&s.weights[b]);
            let d = m.dim(&w)?;
            parts.push((w, off, d));
            parity.extend(std::iter::repeat(s.parity[b]).take(d));
            off += d;
        }
        Ok(Block { mu: mu.clone(), parts, dim: off, parity })
    }

    pub fn parity_space(&self, p: u8) -> Subspace {
        let idx: Vec<usize> = (0..self.dim).filter(|&i| self.parity[i] == p).collect();
        Subspace::coordinate(self.dim, &idx)
    }

    pub fn parity_dims(&self) -> (usize, usize) {
        let plus = self.parity.iter().filter(|&&p| p == 0).count();
        (plus, self.dim - plus)
    }
}

/// Weights of `M (x) S` whose blocks lie inside the window.
pub fn block_weights(m: &ModuleWindow, s: &SpinModule) -> Vec<Weight> {
    let mut out: BTreeSet<Weight> = BTreeSet::new();
    for w in m.dims.keys() {
        for sw in &s.weights {
            out.insert(w.add(sw));
        }
    }
    let mut v: Vec<Weight> = out
        .into_iter()
        .filter(|mu| s.weights.iter().all(|sw| m.knows(&mu.sub(sw))))
        .filter(|mu| s.weights.iter().any(|sw| m.dims.contains_key(&mu.sub(sw))))
        .collect();
    v.sort_by(|a, b| b.height().cmp(&a.height()).then_with(|| b.cmp(a)));
    v
}

#[derive(Clone, Debug)]
pub struct DiracBlock {
    pub block: Block,
    /// `sum pi(e_beta) (x) gamma(e_{-beta})`.
    pub c_plus: Mat,
    /// `sum pi(e_{-beta}) (x) gamma(e_beta)`.
    pub c_minus: Mat,
    /// `1 (x) gamma(c)`.
    pub cubic: Mat,
    pub d: Mat,
}

pub fn assemble_block(m: &ModuleWindow, s: &SpinModule, mu: &Weight) -> Result<DiracBlock> {
    let block = Block::new(m, s, mu)?;
    let n = block.dim;
    let mut c_plus = Mat::zeros(n, n);
    let mut c_minus = Mat::zeros(n, n);
    let mut cubic = Mat::zeros(n, n);
    for (b, (w, off, d)) in block.parts.iter().enumerate() {
        if *d == 0 {
            continue;
        }
        for (k, &r) in s.order.iter().enumerate() {
            if let Some((bt, sign)) = s.wedge[k][b] {
                let (_, toff, td) = &block.parts[bt];
                if *td > 0 {
                    let a = m.action(m.g.idx(Gen::E(r)), w)?;
                    c_plus.add_block(*toff, *off, &a, &q(sign));
                }
            }
            if let Some((bt, sign)) = s.contract[k][b] {
                let (_, toff, td) = &block.parts[bt];
                if *td > 0 {
                    let a = m.action(m.g.idx(Gen::F(r)), w)?;
                    c_minus.add_block(*toff, *off, &a, &q(sign));
                }
            }
        }
        for bt in 0..s.dim() {
            let c = s.cubic.get(bt, b);
            if c.is_zero() {
                continue;
            }
            let (_, toff, td) = &block.parts[bt];
            debug_assert_eq!(td, d);
            for i in 0..*d {
                cubic.add_at(toff + i, off + i, c);
            }
        }
    }
    let d = c_plus.add(&c_minus).sub(&cubic);
    Ok(DiracBlock { block, c_plus, c_minus, cubic, d })
}

/// Matrix of `x_Delta = pi(x) (x) 1 + 1 (x) sigma(x)` from block `src` to block `tgt`.
pub fn diag_action(m: &ModuleWindow, s: &SpinModule, a: usize, src: &Block, tgt: &Block) -> Result<Mat> {
    let mut out = Mat::zeros(tgt.dim, src.dim);
    let sig = s.h_action.get(&a).ok_or_else(|| Error::Invalid("not an element of h".into()))?;
    for (b, (w, off, d)) in src.parts.iter().enumerate() {
        if *d == 0 {
            continue;
        }
        let (_, toff, td) = &tgt.parts[b];
        if *td > 0 {
            out.add_block(*toff, *off, &m.action(a, w)?, &Q::one());
        }
        for bt in 0..s.dim() {
            let c = sig.get(bt, b);
            if c.is_zero() {
                continue;
            }
            let (_, toff, td) = &tgt.parts[bt];
            debug_assert_eq!(td, d);
            for i in 0..*d {
                out.add_at(toff + i, off + i, c);
            }
        }
    }
    Ok(out)
}

/// Casimir of `g` on `M_w`.
pub fn casimir_g(m: &ModuleWindow, w: &Weight) -> Result<Mat> {
    let g = &m.g;
    let d = m.dim(w)?;
    let mut out = Mat::scalar(d, &g.rs.norm2(w));
    for r in 0..g.n_pos {
        let e = g.idx(Gen::E(r));
        let f = g.idx(Gen::F(r));
        let beta = g.rs.pos_weight(r);
        let down = w.sub(&beta);
        let up = w.add(&beta);
        out = out.add(&m.action(e, &down)?.mul(&m.action(f, w)?));
        out = out.add(&m.action(f, &up)?.mul(&m.action(e, w)?));
    }
    Ok(out)
}

/// Casimir of `h` acting diagonally on the block at `mu`.
pub fn casimir_h_diag(m: &ModuleWindow, s: &SpinModule, pair: &Pair, block: &Block) -> Result<Mat> {
    let g = &m.g;
    let mut out = Mat::scalar(block.dim, &g.rs.norm2(&block.mu));
    for &r in &pair.h_pos {
        let e = g.idx(Gen::E(r));
        let f = g.idx(Gen::F(r));
        let beta = g.rs.pos_weight(r);
        let below = Block::new(m, s, &block.mu.sub(&beta))?;
        let above = Block::new(m, s, &block.mu.add(&beta))?;
        out = out.add(&diag_action(m, s, e, &below, block)?.mul(&diag_action(m, s, f, block, &below)?));
        out = out.add(&diag_action(m, s, f, &above, block)?.mul(&diag_action(m, s, e, block, &above)?));
    }
    Ok(out)
}

/// `2 D^2 - (Omega_g (x) 1 - (Omega_h)_Delta + |rho|^2 - |rho_h|^2)` on the block.
pub fn square_defect(m: &ModuleWindow, s: &SpinModule, pair: &Pair, db: &DiracBlock) -> Result<Mat> {
    let block = &db.block;
    let mut og = Mat::zeros(block.dim, block.dim);
    for (w, off, d) in &block.parts {
        if *d > 0 {
            og.add_block(*off, *off, &casimir_g(m, w)?, &Q::one());
        }
    }
    let oh = casimir_h_diag(m, s, pair, block)?;
    let rs = &m.g.rs;
    let c = rs.norm2(&rs.rho) - rs.norm2(&pair.rho_h);
    let rhs = og.sub(&oh).add(&Mat::scalar(block.dim, &c));
    Ok(db.d.mul(&db.d).scale(&q(2)).sub(&rhs))
}

pub fn check_square(m: &ModuleWindow, s: &SpinModule, pair: &Pair, db: &DiracBlock) -> Result<()> {
    if square_defect(m, s, pair, db)?.is_zero() {
        Ok(())
    } else {
        Err(Error::SquareMismatch(db.block.mu.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct Chain {
    pub top: Vec<Q>,
    pub size: usize,
    pub parity: u8,
}

#[derive(Clone, Debug)]
pub struct JordanData {
    pub chains: Vec<Chain>,
}

impl JordanData {
    /// Chain vectors `D^j top` for `j < size`.
    pub fn vectors(&self, d: &Mat) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for c in &self.chains {
            let mut v = c.top.clone();
            for _ in 0..c.size {
                out.push(v.clone());
                v = d.mul_vec(&v);
            }
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.chains.iter().map(|c| c.size).collect()
    }

    /// Number of `W_j` summands of parity `p` (summand `j` counted from the bottom of each chain).
    pub fn level_count(&self, j: usize, p: u8) -> usize {
        self.chains.iter().filter(|c| c.size >= j && (c.parity as usize + c.size - j) % 2 == p as usize).count()
    }

    /// `dim N_{2k+1}^{+-} - dim N_{2k+2}^{-+}` for each `k`.
    pub fn htop(&self) -> Vec<(usize, usize)> {
        let max = self.chains.iter().map(|c| c.size).max().unwrap_or(0);
        (0..(max + 1) / 2)
            .map(|k| {
                let a = self.level_count(2 * k + 1, 0) - self.level_count(2 * k + 2, 1);
                let b = self.level_count(2 * k + 1, 1) - self.level_count(2 * k + 2, 0);
                (a, b)
            })
            .collect()
    }
}

/// `ker D^s` for `s = 0, 1, ...` until it stabilises.
pub fn kernel_chain(d: &Mat) -> Vec<Subspace> {
    let n = d.rows;
    let mut out = vec![Subspace::zero(n)];
    loop {
        let next = out.last().unwrap().preimage(d);
        if next.dim() == out.last().unwrap().dim() {
            return out;
        }
        out.push(next);
    }
}

/// Homogeneous Jordan chains of `D` on its generalised kernel, chosen top-down with
/// lowest-index pivots. `forced` lists tops that must appear, with their sizes.
pub fn jordan_chains(d: &Mat, parity: &[u8], forced: &[(Vec<Q>, usize, u8)]) -> Result<JordanData> {
    let n = d.rows;
    let kc = kernel_chain(d);
    let r = kc.len() - 1;
    let par: [Subspace; 2] = [0u8, 1].map(|p| {
        let idx: Vec<usize> = (0..n).filter(|&i| parity[i] == p).collect();
        Subspace::coordinate(n, &idx)
    });
    let mut chains: Vec<Chain> = Vec::new();
    for s in (1..=r).rev() {
        let mut acc = kc[s - 1].clone();
        for c in &chains {
            let mut v = c.top.clone();
            for _ in 0..(c.size - s) {
                v = d.mul_vec(&v);
            }
            acc = acc.sum(&Subspace::span(n, vec![v]));
        }
        for (top, size, p) in forced {
            if *size != s {
                continue;
            }
            if !kc[s].contains(top) || acc.contains(top) {
                return Err(Error::LiftFailure(format!("forced top of size {} is not a Jordan top", s)));
            }
            acc = acc.sum(&Subspace::span(n, vec![top.clone()]));
            chains.push(Chain { top: top.clone(), size: s, parity: *p });
        }
        for p in [0u8, 1] {
            let ks = kc[s].intersect(&par[p as usize]);
            for v in ks.basis() {
                if !acc.contains(v) {
                    acc = acc.sum(&Subspace::span(n, vec![v.clone()]));
                    chains.push(Chain { top: v.clone(), size: s, parity: p });
                }
            }
        }
    }
    if forced.iter().any(|(_, s, _)| *s > r || *s == 0) {
        return Err(Error::LiftFailure("forced chain length exceeds nilpotency index".into()));
    }
    Ok(JordanData { chains })
}

/// Cohomology data of one weight block.
#[derive(Clone, Debug)]
pub struct BlockAnalysis {
    pub mu: Weight,
    pub dim: usize,
    pub parity_dims: (usize, usize),
    pub ker: usize,
    pub im: usize,
    pub hd: usize,
    pub hd_plus: usize,
    pub hd_minus: usize,
    pub gen0: usize,
    /// Direct quotient computation, `(plus, minus)` per `k`.
    pub htop_direct: Vec<(usize, usize)>,
    /// From Jordan data.
    pub htop_jordan: Vec<(usize, usize)>,
    pub jordan_sizes: Vec<usize>,
    /// Generalised eigenvalues of `D^2` with algebraic multiplicities.
    pub eigenvalues: Vec<(Q, usize)>,
    /// Degree of the part of the characteristic polynomial not explained by the predicted set.
    pub unexplained: usize,
    pub square_ok: Option<bool>,
}

/// `H_top^k = ker D^{2k+1} / (ker D^{2k+1} cap im D + ker D^{2k})`, by parity.
pub fn htop_direct(kc: &[Subspace], im: &Subspace, par: &[Subspace; 2]) -> Vec<(usize, usize)> {
    let r = kc.len() - 1;
    let at = |s: usize| kc[s.min(r)].clone();
    let mut out = Vec::new();
    let mut k = 0;
    while 2 * k < r {
        let top = at(2 * k + 1);
        let bottom = top.intersect(im).sum(&at(2 * k));
        let dims: Vec<usize> = par.iter().map(|p| top.intersect(p).dim() - bottom.intersect(p).dim()).collect();
        out.push((dims[0], dims[1]));
        k += 1;
    }
    out
}

pub fn analyze_block(db: &DiracBlock, predicted: &[Q]) -> Result<BlockAnalysis> {
    let d = &db.d;
    let n = d.rows;
    let block = &db.block;
    let par = [block.parity_space(0), block.parity_space(1)];
    let kc = kernel_chain(d);
    let ker = kc.get(1).cloned().unwrap_or_else(|| Subspace::zero(n));
    let im = Subspace::image_of(d);
    let ki = ker.intersect(&im);
    let hd = ker.dim() - ki.dim();
    let hd_plus = ker.intersect(&par[0]).dim() - ki.intersect(&par[0]).dim();
    let hd_minus = ker.intersect(&par[1]).dim() - ki.intersect(&par[1]).dim();
    let gen0 = kc.last().unwrap().dim();
    let direct = htop_direct(&kc, &im, &par);
    let jd = jordan_chains(d, &block.parity, &[])?;
    let mut jordan = jd.htop();
    let mut direct_p = direct.clone();
    let len = jordan.len().max(direct_p.len());
    jordan.resize(len, (0, 0));
    direct_p.resize(len, (0, 0));

    let (eigenvalues, unexplained) = eigen_split(&d.mul(d), predicted);
    Ok(BlockAnalysis {
        mu: block.mu.clone(),
        dim: n,
        parity_dims: block.parity_dims(),
        ker: ker.dim(),
        im: im.dim(),
        hd,
        hd_plus,
        hd_minus,
        gen0,
        htop_direct: direct_p,
        htop_jordan: jordan,
        jordan_sizes: jd.sizes(),
        eigenvalues,
        unexplained,
        square_ok: None,
    })
}

/// Splits the characteristic polynomial of `a` along the predicted eigenvalues.
pub fn eigen_split(a: &Mat, predicted: &[Q]) -> (Vec<(Q, usize)>, usize) {
    let mut p = a.char_poly();
    let mut out = Vec::new();
    let mut seen: BTreeSet<Q> = BTreeSet::new();
    for c in predicted {
        if !seen.insert(c.clone()) {
            continue;
        }
        let mut mult = 0;
        loop {
            if p.len() <= 1 {
                break;
            }
            let (quot, rem) = poly_div_linear(&p, c);
            if !rem.is_zero() {
                break;
            }
            p = quot;
            mult += 1;
        }
        if mult > 0 {
            out.push((c.clone(), mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    (out, p.len().saturating_sub(1))
}

/// `c_nu = 1/2 (|lambda + rho|^2 - |nu + rho_h|^2)`.
pub fn c_nu(pair: &Pair, lambda: &Weight, nu: &Weight) -> Q {
    let rs = &pair.rs;
    qf(1, 2) * (rs.norm2(&lambda.add(&rs.rho)) - rs.norm2(&nu.add(&pair.rho_h)))
}

/// Candidate values `c_nu` for the block at `mu`: `nu = mu + sum n_beta beta` over
/// `Delta_h^+`, bounded by the tops of `M (x) S`.
pub fn predicted_eigenvalues(m: &ModuleWindow, pair: &Pair, mu: &Weight) -> Vec<Q> {
    let rs = &pair.rs;
    let tops: Vec<Weight> = match &m.top {
        Some(t) => vec![t.add(&pair.rho_q())],
        None => m.dims.keys().map(|w| w.add(&pair.rho_q())).collect(),
    };
    let mut nus: BTreeSet<Weight> = BTreeSet::new();
    nus.insert(mu.clone());
    if !pair.h_pos.is_empty() {
        let mut frontier = vec![mu.clone()];
        while let Some(x) = frontier.pop() {
            for &r in &pair.h_pos {
                let y = x.add(&rs.pos_weight(r));
                let below_some_top = tops.iter().any(|t| y.depth_below(t).is_some() || *t == y);
                if below_some_top && nus.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
    }
    let mut out = Vec::new();
    for l in &m.inf_chars {
        for nu in &nus {
            out.push(c_nu(pair, l, nu));
        }
    }
    out
}

/// Full analysis of every block of the window.
pub fn analyze_module(
    m: &ModuleWindow,
    s: &SpinModule,
    pair: &Pair,
    check_sq: bool,
) -> Result<Vec<(DiracBlock, BlockAnalysis)>> {
    let mut out = Vec::new();
    for mu in block_weights(m, s) {
        out.push(analyze_weight(m, s, pair, &mu, check_sq)?);
    }
    Ok(out)
}

pub fn analyze_weight(
    m: &ModuleWindow,
    s: &SpinModule,
    pair: &Pair,
    mu: &Weight,
    check_sq: bool,
) -> Result<(DiracBlock, BlockAnalysis)> {
    let db = assemble_block(m, s, mu)?;
    let pred = predicted_eigenvalues(m, pair, mu);
    let mut a = analyze_block(&db, &pred)?;
    if check_sq {
        a.square_ok = match square_defect(m, s, pair, &db) {
            Ok(x) => Some(x.is_zero()),
            Err(Error::OutsideWindow(_)) => None,
            Err(e) => return Err(e),
        };
    }
    Ok((db, a))
}

/// Character of the finite-dimensional `h`-module with highest weight `eta` at `mu`.
pub fn h_finite_character(pair: &Pair, wh: &WeylGroup, pc: &mut PartitionCounter, eta: &Weight, mu: &Weight) -> i64 {
    let er = eta.add(&pair.rho_h);
    let mut total: i64 = 0;
    for u in &wh.elements {
        let top = u.apply(&er).sub(&pair.rho_h);
        let c = pc.count_weight(&top.sub(mu)) as i64;
        total += u.det_sign() * c;
    }
    total
}

/// Kostant's prediction for `ker D` on the finite-dimensional module with highest weight `lambda`:
/// weight multiplicities of `sum_{w in W^1} F_{w(lambda+rho)-rho_h}`.
pub fn kostant_prediction(pair: &Pair, lambda: &Weight) -> (Vec<Weight>, BTreeMap<Weight, i64>) {
    let rs = &pair.rs;
    let w = WeylGroup::new(rs);
    let wh = pair.weyl_h();
    let w1 = pair.w_one(&w);
    let mut pc = PartitionCounter::new(pair.h_roots());
    let lr = lambda.add(&rs.rho);
    let tops: Vec<Weight> = w1.iter().map(|e| e.apply(&lr).sub(&pair.rho_h)).collect();
    let mut chars: BTreeMap<Weight, i64> = BTreeMap::new();
    for eta in &tops {
        // weights of F^h_eta lie in eta - cone, within the W_h orbit hull
        let mut cands: BTreeSet<Weight> = BTreeSet::new();
        let mut frontier = vec![eta.clone()];
        cands.insert(eta.clone());
        while let Some(x) = frontier.pop() {
            for &r in &pair.h_pos {
                let y = x.sub(&rs.pos_weight(r));
                if h_finite_character(pair, &wh, &mut pc, eta, &y) != 0 && cands.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        for mu in cands {
            let c = h_finite_character(pair, &wh, &mut pc, eta, &mu);
            if c != 0 {
                *chars.entry(mu).or_insert(0) += c;
            }
        }
    }
    (tops, chars)
}

/// `v (x) 1` for each basis vector of the top weight space: `(in ker D, not in im D)`.
pub fn nonvanishing_check(m: &ModuleWindow, s: &SpinModule, pair: &Pair) -> Result<Vec<(bool, bool)>> {
    let top = m.top.clone().ok_or_else(|| Error::Invalid("module has no unique maximal weight".into()))?;
    let mu = top.add(&pair.rho_q());
    let db = assemble_block(m, s, &mu)?;
    let vac = s.vacuum();
    let (_, off, d) = &db.block.parts[vac];
    let im = Subspace::image_of(&db.d);
    let mut out = Vec::new();
    for i in 0..*d {
        let mut v = vec![Q::zero(); db.block.dim];
        v[off + i] = Q::one();
        let dv = db.d.mul_vec(&v);
        out.push((dv.iter().all(|x| x.is_zero()), !im.contains(&v)));
    }
    Ok(out)
}

/// Peels `h`-Verma characters off a character given on a down-closed set of weights.
/// Returns the highest weights with nonzero coefficients.
pub fn h_verma_decomposition(pair: &Pair, chars: &BTreeMap<Weight, i64>) -> BTreeMap<Weight, i64> {
    let mut pc = PartitionCounter::new(pair.h_roots());
    let mut ws: Vec<&Weight> = chars.keys().collect();
    ws.sort_by(|a, b| b.height().cmp(&a.height()).then_with(|| b.cmp(a)));
    let mut coeffs: BTreeMap<Weight, i64> = BTreeMap::new();
    for w in ws {
        let mut explained = 0i64;
        for (eta, c) in &coeffs {
            explained += c * pc.count_weight(&eta.sub(w)) as i64;
        }
        let rest = chars[w] - explained;
        if rest != 0 {
            coeffs.insert(w.clone(), rest);
        }
    }
    coeffs
}

/// Both Vogan predicates for a highest weight `eta` of an `h`-constituent.
pub fn vogan_predicates(pair: &Pair, w: &WeylGroup, lambdas: &[Weight], eta: &Weight) -> (bool, bool) {
    let rs = &pair.rs;
    let shifted = eta.add(&pair.rho_h);
    let rho_shifted = lambdas.iter().any(|l| w.orbit(&l.add(&rs.rho)).contains(&shifted));
    let literal = lambdas.iter().any(|l| w.orbit(l).contains(eta));
    (rho_shifted, literal)
}
