//! Chevalley basis, structure constants and the Killing form.
//!
//! The algebra is realised inside `gl(V)` where `V` is the sum of the simple
//! modules whose highest weights are the highest roots of the simple factors.
//! Those modules are built from the Cartan matrix alone, as quotients of the
//! module spanned by words in the `f_i` by the radical of the contravariant form.

use crate::linalg::{q, Mat, Q};
use crate::roots::RootSystem;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

/// Basis element kinds in the rescaled basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    /// Simple coroot `h_i`.
    H(usize),
    /// `e_beta` for the positive root with this index.
    E(usize),
    /// `e_{-beta}` rescaled so that `kappa(e_beta, e_{-beta}) = 1`.
    F(usize),
}

pub type Sparse = Vec<(usize, Q)>;

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    pub rs: RootSystem,
    pub rank: usize,
    pub n_pos: usize,
    pub dim: usize,
    /// Brackets in the integral Chevalley basis `(h_i, e_beta, f_beta)`.
    chevalley: Vec<Vec<Sparse>>,
    /// Brackets in the rescaled basis `(h_i, e_beta, e_{-beta})`.
    table: Vec<Vec<Sparse>>,
    /// `kappa(e_beta, f_beta)` in the integral basis.
    pub kappa: Vec<Q>,
    /// Killing form on the Cartan in the coroot basis.
    pub killing_t: Mat,
    pub killing_t_inv: Mat,
}

pub fn build_chevalley_basis(rs: &RootSystem) -> LieAlgebra {
    LieAlgebra::new(rs)
}

impl LieAlgebra {
    pub fn new(rs: &RootSystem) -> LieAlgebra {
        let rank = rs.rank;
        let n_pos = rs.n_pos();
        let dim = rank + 2 * n_pos;
        let rep = faithful_rep(rs);
        let (hs, es, fs) = chevalley_matrices(rs, &rep);
        let mut mats: Vec<Mat> = Vec::with_capacity(dim);
        mats.extend(hs);
        mats.extend(es);
        mats.extend(fs);

        let weight = |a: usize| -> Vec<i64> {
            if a < rank {
                vec![0; rank]
            } else if a < rank + n_pos {
                rs.positive[a - rank].clone()
            } else {
                rs.positive[a - rank - n_pos].iter().map(|x| -x).collect()
            }
        };
        let index_of_weight = |w: &[i64]| -> Option<usize> {
            rs.root_lookup(w).map(|(i, pos)| if pos { rank + i } else { rank + n_pos + i })
        };

        let mut chevalley = vec![vec![Vec::new(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let br = commutator(&mats[a], &mats[b]);
                if br.is_zero() {
                    continue;
                }
                let w: Vec<i64> = weight(a).iter().zip(weight(b)).map(|(x, y)| x + y).collect();
                let coeffs = if w.iter().all(|&x| x == 0) {
                    decompose(&br, &mats[..rank], 0)
                } else {
                    let c = index_of_weight(&w).expect("bracket lands in a root space");
                    decompose(&br, std::slice::from_ref(&mats[c]), c)
                };
                chevalley[a][b] = coeffs;
            }
        }

        let ad = |x: usize, table: &Vec<Vec<Sparse>>| -> Mat {
            let mut m = Mat::zeros(dim, dim);
            for y in 0..dim {
                for (z, c) in &table[x][y] {
                    m.add_at(*z, y, c);
                }
            }
            m
        };
        let ad_int: Vec<Mat> = (0..dim).map(|x| ad(x, &chevalley)).collect();
        let kappa: Vec<Q> = (0..n_pos).map(|i| ad_int[rank + i].mul(&ad_int[rank + n_pos + i]).trace()).collect();
        let mut killing_t = Mat::zeros(rank, rank);
        for i in 0..rank {
            for j in 0..rank {
                killing_t.set(i, j, ad_int[i].mul(&ad_int[j]).trace());
            }
        }
        let killing_t_inv = killing_t.inverse().expect("nondegenerate Killing form");

        // Rescale f_beta = kappa_beta * e_{-beta}.
        let scale = |a: usize| -> Q {
            if a >= rank + n_pos {
                kappa[a - rank - n_pos].recip()
            } else {
                Q::one()
            }
        };
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let sab = scale(a) * scale(b);
                table[a][b] = chevalley[a][b].iter().map(|(z, c)| (*z, c * &sab / scale(*z))).collect();
            }
        }
        LieAlgebra { rs: rs.clone(), rank, n_pos, dim, chevalley, table, kappa, killing_t, killing_t_inv }
    }

    pub fn idx(&self, g: Gen) -> usize {
        match g {
            Gen::H(i) => i,
            Gen::E(i) => self.rank + i,
            Gen::F(i) => self.rank + self.n_pos + i,
        }
    }

    pub fn gen(&self, a: usize) -> Gen {
        if a < self.rank {
            Gen::H(a)
        } else if a < self.rank + self.n_pos {
            Gen::E(a - self.rank)
        } else {
            Gen::F(a - self.rank - self.n_pos)
        }
    }

    /// Weight of a basis element in simple-root coordinates.
    pub fn weight(&self, a: usize) -> Vec<i64> {
        match self.gen(a) {
            Gen::H(_) => vec![0; self.rank],
            Gen::E(i) => self.rs.positive[i].clone(),
            Gen::F(i) => self.rs.positive[i].iter().map(|x| -x).collect(),
        }
    }

    pub fn bracket(&self, a: usize, b: usize) -> &Sparse {
        &self.table[a][b]
    }

    pub fn bracket_chevalley(&self, a: usize, b: usize) -> &Sparse {
        &self.chevalley[a][b]
    }

    /// Bracket of two general elements given in the rescaled basis.
    pub fn bracket_vec(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                for (z, c) in &self.table[a][b] {
                    out[*z] += xa * yb * c;
                }
            }
        }
        out
    }

    pub fn ad(&self, a: usize) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim);
        for y in 0..self.dim {
            for (z, c) in &self.table[a][y] {
                m.add_at(*z, y, c);
            }
        }
        m
    }

    /// Killing form on basis elements of the rescaled basis.
    pub fn killing(&self, a: usize, b: usize) -> Q {
        match (self.gen(a), self.gen(b)) {
            (Gen::H(i), Gen::H(j)) => self.killing_t.get(i, j).clone(),
            (Gen::E(i), Gen::F(j)) | (Gen::F(j), Gen::E(i)) if i == j => Q::one(),
            _ => Q::zero(),
        }
    }

    pub fn killing_vec(&self, x: &[Q], y: &[Q]) -> Q {
        let mut s = Q::zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let k = self.killing(a, b);
                if !k.is_zero() {
                    s += xa * yb * k;
                }
            }
        }
        s
    }

    /// Killing-dual basis vector of a basis element.
    pub fn dual(&self, a: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim];
        match self.gen(a) {
            Gen::H(i) => {
                for j in 0..self.rank {
                    v[j] = self.killing_t_inv.get(j, i).clone();
                }
            }
            Gen::E(i) => v[self.idx(Gen::F(i))] = Q::one(),
            Gen::F(i) => v[self.idx(Gen::E(i))] = Q::one(),
        }
        v
    }

    pub fn unit(&self, a: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim];
        v[a] = Q::one();
        v
    }

    /// First basis triple violating the Jacobi identity, if any.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let units: Vec<Vec<Q>> = (0..self.dim).map(|a| self.unit(a)).collect();
        for a in 0..self.dim {
            for b in a + 1..self.dim {
                let ab = self.bracket_vec(&units[a], &units[b]);
                for c in b + 1..self.dim {
                    let x = self.bracket_vec(&ab, &units[c]);
                    let y = self.bracket_vec(&self.bracket_vec(&units[b], &units[c]), &units[a]);
                    let z = self.bracket_vec(&self.bracket_vec(&units[c], &units[a]), &units[b]);
                    if x.iter().zip(&y).zip(&z).any(|((p, q), r)| !(p + q + r).is_zero()) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// First basis pair where `trace(ad a ad b)` differs from the stored Killing form.
    pub fn killing_trace_mismatch(&self) -> Option<(usize, usize)> {
        let ads: Vec<Mat> = (0..self.dim).map(|a| self.ad(a)).collect();
        for a in 0..self.dim {
            for b in a..self.dim {
                if ads[a].mul(&ads[b]).trace() != self.killing(a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Transpose anti-automorphism twisted by a sign character `s` on roots:
    /// `tau(e_beta) = s_beta f_beta`, `tau(f_beta) = s_beta e_beta`, `tau(h) = h`,
    /// written in the rescaled basis.
    pub fn tau(&self, a: usize, signs: &[i64]) -> (usize, Q) {
        match self.gen(a) {
            Gen::H(_) => (a, Q::one()),
            Gen::E(i) => (self.idx(Gen::F(i)), q(signs[i]) * &self.kappa[i]),
            Gen::F(i) => (self.idx(Gen::E(i)), q(signs[i]) / &self.kappa[i]),
        }
    }

    /// Casimir as a list of `(x, x^*)` basis pairs with coefficients: `sum c * x x^*`.
    pub fn casimir_terms(&self, roots: &[usize]) -> Vec<(usize, usize, Q)> {
        let mut out = Vec::new();
        for i in 0..self.rank {
            for j in 0..self.rank {
                let c = self.killing_t_inv.get(j, i).clone();
                if !c.is_zero() {
                    out.push((i, j, c));
                }
            }
        }
        for &r in roots {
            out.push((self.idx(Gen::E(r)), self.idx(Gen::F(r)), Q::one()));
            out.push((self.idx(Gen::F(r)), self.idx(Gen::E(r)), Q::one()));
        }
        out
    }
}

fn commutator(a: &Mat, b: &Mat) -> Mat {
    a.mul(b).sub(&b.mul(a))
}

/// Writes `x` as a combination of `basis` (indices offset by `base`).
fn decompose(x: &Mat, basis: &[Mat], base: usize) -> Sparse {
    let n = x.rows * x.cols;
    let mut cols = Vec::with_capacity(basis.len());
    for b in basis {
        let mut v = Vec::with_capacity(n);
        for r in 0..b.rows {
            v.extend(b.row(r).iter().cloned());
        }
        cols.push(v);
    }
    let a = Mat::from_rows(cols, n).transpose();
    let mut target = Vec::with_capacity(n);
    for r in 0..x.rows {
        target.extend(x.row(r).iter().cloned());
    }
    let sol = a.solve(&target).expect("bracket lies in the span of the basis");
    sol.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (base + i, c)).collect()
}

struct Rep {
    e: Vec<Mat>,
    f: Vec<Mat>,
    h: Vec<Mat>,
}

/// Chevalley generators acting on `L(theta_1) + ... + L(theta_k)`.
fn faithful_rep(rs: &RootSystem) -> Rep {
    let rank = rs.rank;
    let mut blocks = Vec::new();
    for comp in rs.cartan_type.components() {
        let theta = rs
            .positive
            .iter()
            .filter(|r| r.iter().enumerate().all(|(i, &c)| c == 0 || comp.contains(&i)))
            .max_by_key(|r| r.iter().sum::<i64>())
            .unwrap()
            .clone();
        let labels: Vec<i64> = (0..rank).map(|i| (0..rank).map(|j| rs.cartan[i][j] * theta[j]).sum()).collect();
        blocks.push(simple_module(&rs.cartan, &labels));
    }
    let total: usize = blocks.iter().map(|b| b.h[0].rows).sum();
    let mut rep = Rep {
        e: vec![Mat::zeros(total, total); rank],
        f: vec![Mat::zeros(total, total); rank],
        h: vec![Mat::zeros(total, total); rank],
    };
    let mut off = 0;
    for b in &blocks {
        for i in 0..rank {
            rep.e[i].add_block(off, off, &b.e[i], &Q::one());
            rep.f[i].add_block(off, off, &b.f[i], &Q::one());
            rep.h[i].add_block(off, off, &b.h[i], &Q::one());
        }
        off += b.h[0].rows;
    }
    rep
}

type Word = Vec<u8>;

struct WordModule<'a> {
    cartan: &'a [Vec<i64>],
    labels: &'a [i64],
    memo: HashMap<(usize, Word), BTreeMap<Word, Q>>,
}

impl WordModule<'_> {
    fn eval_h(&self, i: usize, w: &[u8]) -> i64 {
        let mut v = self.labels[i];
        for &j in w {
            v -= self.cartan[i][j as usize];
        }
        v
    }

    /// `e_i` applied to `f_{w0} f_{w1} ... v`.
    fn apply_e(&mut self, i: usize, w: &[u8]) -> BTreeMap<Word, Q> {
        if w.is_empty() {
            return BTreeMap::new();
        }
        if let Some(r) = self.memo.get(&(i, w.to_vec())) {
            return r.clone();
        }
        let head = w[0];
        let rest = &w[1..];
        let mut out: BTreeMap<Word, Q> = BTreeMap::new();
        for (word, c) in self.apply_e(i, rest) {
            let mut nw = vec![head];
            nw.extend(word);
            *out.entry(nw).or_insert_with(Q::zero) += c;
        }
        if head as usize == i {
            let hv = self.eval_h(i, rest);
            if hv != 0 {
                *out.entry(rest.to_vec()).or_insert_with(Q::zero) += q(hv);
            }
        }
        out.retain(|_, c| !c.is_zero());
        self.memo.insert((i, w.to_vec()), out.clone());
        out
    }

    /// Contravariant pairing of two words of equal weight.
    fn pair(&mut self, a: &[u8], b: &[u8]) -> Q {
        let mut cur: BTreeMap<Word, Q> = BTreeMap::new();
        cur.insert(b.to_vec(), Q::one());
        for &i in a {
            let mut next: BTreeMap<Word, Q> = BTreeMap::new();
            for (w, c) in &cur {
                for (w2, c2) in self.apply_e(i as usize, w) {
                    *next.entry(w2).or_insert_with(Q::zero) += c * c2;
                }
            }
            next.retain(|_, c| !c.is_zero());
            cur = next;
        }
        cur.get(&Vec::new()).cloned().unwrap_or_else(Q::zero)
    }
}

fn simple_module(cartan: &[Vec<i64>], labels: &[i64]) -> Rep {
    let rank = cartan.len();
    let mut wm = WordModule { cartan, labels, memo: HashMap::new() };
    // Layers keyed by depth vector; each holds basis words and the inverse Gram.
    let mut layers: BTreeMap<Vec<i64>, (Vec<Word>, Mat)> = BTreeMap::new();
    layers.insert(vec![0; rank], (vec![vec![]], Mat::identity(1)));
    let mut frontier = vec![vec![0i64; rank]];
    while !frontier.is_empty() {
        let mut next_keys: Vec<Vec<i64>> = Vec::new();
        for d in &frontier {
            for i in 0..rank {
                let mut nd = d.clone();
                nd[i] += 1;
                if !next_keys.contains(&nd) && !layers.contains_key(&nd) {
                    next_keys.push(nd);
                }
            }
        }
        let mut new_frontier = Vec::new();
        for nd in next_keys {
            let mut cands: Vec<Word> = Vec::new();
            for i in 0..rank {
                if nd[i] == 0 {
                    continue;
                }
                let mut up = nd.clone();
                up[i] -= 1;
                if let Some((words, _)) = layers.get(&up) {
                    for w in words {
                        let mut nw = vec![i as u8];
                        nw.extend(w.iter().cloned());
                        cands.push(nw);
                    }
                }
            }
            if cands.is_empty() {
                continue;
            }
            let n = cands.len();
            let mut g = Mat::zeros(n, n);
            for a in 0..n {
                for b in a..n {
                    let v = wm.pair(&cands[a], &cands[b]);
                    g.set(a, b, v.clone());
                    g.set(b, a, v);
                }
            }
            let (_, piv) = g.rref();
            if piv.is_empty() {
                continue;
            }
            let words: Vec<Word> = piv.iter().map(|&p| cands[p].clone()).collect();
            let k = words.len();
            let mut gb = Mat::zeros(k, k);
            for a in 0..k {
                for b in 0..k {
                    gb.set(a, b, g.get(piv[a], piv[b]).clone());
                }
            }
            layers.insert(nd.clone(), (words, gb.inverse().unwrap()));
            new_frontier.push(nd);
        }
        frontier = new_frontier;
    }
    let mut offsets = BTreeMap::new();
    let mut total = 0;
    for (k, (w, _)) in &layers {
        offsets.insert(k.clone(), total);
        total += w.len();
    }
    let mut rep = Rep {
        e: vec![Mat::zeros(total, total); rank],
        f: vec![Mat::zeros(total, total); rank],
        h: vec![Mat::zeros(total, total); rank],
    };
    let keys: Vec<Vec<i64>> = layers.keys().cloned().collect();
    for d in &keys {
        let (words, _) = layers[d].clone();
        let off = offsets[d];
        for (col, w) in words.iter().enumerate() {
            for i in 0..rank {
                rep.h[i].set(off + col, off + col, q(wm.eval_h(i, w)));
                // f_i
                let mut down = d.clone();
                down[i] += 1;
                if let Some((tw, tginv)) = layers.get(&down).cloned() {
                    let mut fw = vec![i as u8];
                    fw.extend(w.iter().cloned());
                    let rhs: Vec<Q> = tw.iter().map(|b| wm.pair(b, &fw)).collect();
                    let c = tginv.mul_vec(&rhs);
                    for (r, v) in c.into_iter().enumerate() {
                        rep.f[i].set(offsets[&down] + r, off + col, v);
                    }
                }
                // e_i
                if d[i] > 0 {
                    let mut up = d.clone();
                    up[i] -= 1;
                    if let Some((tw, tginv)) = layers.get(&up).cloned() {
                        let ew = wm.apply_e(i, w);
                        let rhs: Vec<Q> = tw
                            .iter()
                            .map(|b| ew.iter().fold(Q::zero(), |acc, (x, c)| acc + c * wm.pair(b, x)))
                            .collect();
                        let c = tginv.mul_vec(&rhs);
                        for (r, v) in c.into_iter().enumerate() {
                            rep.e[i].set(offsets[&up] + r, off + col, v);
                        }
                    }
                }
            }
        }
    }
    rep
}

/// `(h_i, e_beta, f_beta)` with `e_beta = [e_i, e_gamma]/(p+1)` and `f_beta = -[f_i, f_gamma]/(p+1)`.
fn chevalley_matrices(rs: &RootSystem, rep: &Rep) -> (Vec<Mat>, Vec<Mat>, Vec<Mat>) {
    let rank = rs.rank;
    let n_pos = rs.n_pos();
    let mut es: Vec<Option<Mat>> = vec![None; n_pos];
    let mut fs: Vec<Option<Mat>> = vec![None; n_pos];
    for b in 0..n_pos {
        let beta = &rs.positive[b];
        if beta.iter().sum::<i64>() == 1 {
            let i = beta.iter().position(|&x| x == 1).unwrap();
            es[b] = Some(rep.e[i].clone());
            fs[b] = Some(rep.f[i].clone());
            continue;
        }
        let (i, g) = (0..rank)
            .find_map(|i| {
                let mut gamma = beta.clone();
                gamma[i] -= 1;
                rs.pos_index(&gamma).map(|g| (i, g))
            })
            .expect("non-simple root has a predecessor");
        let mut p = 0;
        let mut probe = rs.positive[g].clone();
        loop {
            probe[i] -= 1;
            if rs.is_root(&probe) {
                p += 1;
            } else {
                break;
            }
        }
        let c = q(p + 1).recip();
        let eg = es[g].as_ref().unwrap();
        let fg = fs[g].as_ref().unwrap();
        es[b] = Some(commutator(&rep.e[i], eg).scale(&c));
        fs[b] = Some(commutator(&rep.f[i], fg).scale(&(-c)));
    }
    (rep.h.clone(), es.into_iter().map(Option::unwrap).collect(), fs.into_iter().map(Option::unwrap).collect())
}

/// Largest `p` with `beta - p alpha` a root (both given as positive-root indices).
pub fn string_p(rs: &RootSystem, alpha: &[i64], beta: &[i64]) -> i64 {
    let mut p = 0;
    let mut probe = beta.to_vec();
    loop {
        for (x, a) in probe.iter_mut().zip(alpha) {
            *x -= a;
        }
        if rs.is_root(&probe) {
            p += 1;
        } else {
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::build_root_system;

    #[test]
    fn sl2_killing() {
        let g = build_chevalley_basis(&build_root_system("A1").unwrap());
        assert_eq!(g.dim, 3);
        assert_eq!(g.kappa[0], q(4));
        assert_eq!(g.killing_t.get(0, 0), &q(8));
        // [e, f] = h in the integral basis
        assert_eq!(g.bracket_chevalley(1, 2), &vec![(0, q(1))]);
    }

    #[test]
    fn sl3_dims() {
        let g = build_chevalley_basis(&build_root_system("A2").unwrap());
        assert_eq!(g.dim, 8);
        assert!(g.kappa.iter().all(|k| *k == q(6)));
    }

    #[test]
    fn g2_builds() {
        let g = build_chevalley_basis(&build_root_system("G2").unwrap());
        assert_eq!(g.dim, 14);
    }
}
