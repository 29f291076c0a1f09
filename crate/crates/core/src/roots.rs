//! Root systems, the Killing form on the dual Cartan, Weyl groups and pairs `(g, h)`.

use crate::error::{Error, Result};
use crate::linalg::{fmt_q, q, Mat, Q};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// A weight in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub Vec<Q>);

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Weight {
    pub fn zero(rank: usize) -> Weight {
        Weight(vec![Q::zero(); rank])
    }

    pub fn from_ints(v: &[i64]) -> Weight {
        Weight(v.iter().map(|&x| q(x)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Q) -> Weight {
        Weight(self.0.iter().map(|a| a * c).collect())
    }

    pub fn add_ints(&self, v: &[i64]) -> Weight {
        Weight(self.0.iter().zip(v).map(|(a, &b)| a + q(b)).collect())
    }

    pub fn sub_ints(&self, v: &[i64]) -> Weight {
        Weight(self.0.iter().zip(v).map(|(a, &b)| a - q(b)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn height(&self) -> Q {
        self.0.iter().fold(Q::zero(), |a, b| a + b)
    }

    /// Integer coordinates when every coordinate is integral.
    pub fn as_ints(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect()
    }

    /// `self - other` as a non-negative integer combination of simple roots, if it is one.
    pub fn depth_below(&self, other: &Weight) -> Option<Vec<i64>> {
        let d = other.sub(self).as_ints()?;
        d.iter().all(|&x| x >= 0).then_some(d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CartanType {
    A1,
    A2,
    A3,
    A1xA1,
    B2,
    G2,
}

impl CartanType {
    pub fn parse(s: &str) -> Result<CartanType> {
        Ok(match s.trim() {
            "A1" => CartanType::A1,
            "A2" => CartanType::A2,
            "A3" => CartanType::A3,
            "A1xA1" | "A1+A1" | "D2" => CartanType::A1xA1,
            "B2" | "C2" => CartanType::B2,
            "G2" => CartanType::G2,
            other => return Err(Error::UnsupportedType(other.to_string())),
        })
    }

    pub fn label(&self) -> &'static str {
        match self {
            CartanType::A1 => "A1",
            CartanType::A2 => "A2",
            CartanType::A3 => "A3",
            CartanType::A1xA1 => "A1xA1",
            CartanType::B2 => "B2",
            CartanType::G2 => "G2",
        }
    }

    /// `cartan[i][j] = alpha_j(h_i)`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        match self {
            CartanType::A1 => vec![vec![2]],
            CartanType::A2 => vec![vec![2, -1], vec![-1, 2]],
            CartanType::A3 => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            CartanType::A1xA1 => vec![vec![2, 0], vec![0, 2]],
            CartanType::B2 => vec![vec![2, -1], vec![-2, 2]],
            CartanType::G2 => vec![vec![2, -3], vec![-1, 2]],
        }
    }

    /// Connected components as lists of simple-root indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        match self {
            CartanType::A1xA1 => vec![vec![0], vec![1]],
            _ => vec![(0..self.cartan_matrix().len()).collect()],
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots ordered by height, then lexicographically.
    pub positive: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    /// `gram[i][j] = <alpha_i, alpha_j>` for the Killing form.
    pub gram: Mat,
    pub rho: Weight,
}

pub fn build_root_system(label: &str) -> Result<RootSystem> {
    RootSystem::new(CartanType::parse(label)?)
}

impl RootSystem {
    pub fn new(ct: CartanType) -> Result<RootSystem> {
        let cartan = ct.cartan_matrix();
        let rank = cartan.len();
        let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut layer: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                let mut v = vec![0; rank];
                v[i] = 1;
                v
            })
            .collect();
        found.extend(layer.iter().cloned());
        while !layer.is_empty() {
            let mut next = BTreeSet::new();
            for beta in &layer {
                for i in 0..rank {
                    let mut p = 0;
                    let mut probe = beta.clone();
                    loop {
                        probe[i] -= 1;
                        if found.contains(&probe) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..rank).map(|j| cartan[i][j] * beta[j]).sum();
                    if p - pairing > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !found.contains(&up) {
                            next.insert(up);
                        }
                    }
                }
            }
            found.extend(next.iter().cloned());
            layer = next.into_iter().collect();
        }
        let mut positive: Vec<Vec<i64>> = found.into_iter().collect();
        positive.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let index = positive.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();

        // Killing form on t from the root sum, then dualised.
        let mut k = Mat::zeros(rank, rank);
        for beta in &positive {
            let ev: Vec<i64> = (0..rank).map(|i| (0..rank).map(|j| cartan[i][j] * beta[j]).sum()).collect();
            for a in 0..rank {
                for b in 0..rank {
                    k.add_at(a, b, &q(2 * ev[a] * ev[b]));
                }
            }
        }
        let r = Mat::from_rows((0..rank).map(|l| (0..rank).map(|j| q(cartan[l][j])).collect()).collect(), rank);
        let kinv = k.inverse().ok_or_else(|| Error::Invalid("degenerate Killing form".into()))?;
        let gram = r.transpose().mul(&kinv).mul(&r);

        let mut rho = Weight::zero(rank);
        for beta in &positive {
            rho = rho.add(&Weight::from_ints(beta));
        }
        rho = rho.scale(&crate::linalg::qf(1, 2));
        Ok(RootSystem { cartan_type: ct, rank, cartan, positive, index, gram, rho })
    }

    pub fn label(&self) -> &'static str {
        self.cartan_type.label()
    }

    pub fn n_pos(&self) -> usize {
        self.positive.len()
    }

    /// Index into `positive` for a positive root.
    pub fn pos_index(&self, r: &[i64]) -> Option<usize> {
        self.index.get(r).copied()
    }

    /// Signed root lookup: `Some((i, true))` for `positive[i]`, `Some((i, false))` for its negative.
    pub fn root_lookup(&self, r: &[i64]) -> Option<(usize, bool)> {
        if let Some(i) = self.pos_index(r) {
            return Some((i, true));
        }
        let neg: Vec<i64> = r.iter().map(|x| -x).collect();
        self.pos_index(&neg).map(|i| (i, false))
    }

    pub fn is_root(&self, r: &[i64]) -> bool {
        self.root_lookup(r).is_some()
    }

    pub fn pos_weight(&self, i: usize) -> Weight {
        Weight::from_ints(&self.positive[i])
    }

    pub fn simple_index(&self, i: usize) -> usize {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        self.pos_index(&v).unwrap()
    }

    pub fn form(&self, a: &Weight, b: &Weight) -> Q {
        let mut s = Q::zero();
        for i in 0..self.rank {
            if a.0[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if b.0[j].is_zero() {
                    continue;
                }
                s += &a.0[i] * self.gram.get(i, j) * &b.0[j];
            }
        }
        s
    }

    pub fn norm2(&self, a: &Weight) -> Q {
        self.form(a, a)
    }

    /// `lambda(h_i)`, the i-th Dynkin label.
    pub fn dynkin_label(&self, w: &Weight, i: usize) -> Q {
        (0..self.rank).fold(Q::zero(), |acc, j| acc + q(self.cartan[i][j]) * &w.0[j])
    }

    pub fn to_fundamental(&self, w: &Weight) -> Vec<Q> {
        (0..self.rank).map(|i| self.dynkin_label(w, i)).collect()
    }

    pub fn from_fundamental(&self, labels: &[Q]) -> Result<Weight> {
        if labels.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: labels.len() });
        }
        let c = Mat::from_rows(
            (0..self.rank).map(|i| (0..self.rank).map(|j| q(self.cartan[i][j])).collect()).collect(),
            self.rank,
        );
        let x = c.solve(labels).expect("Cartan matrix is invertible");
        Ok(Weight(x))
    }

    pub fn from_simple(&self, coords: &[Q]) -> Result<Weight> {
        if coords.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: coords.len() });
        }
        Ok(Weight(coords.to_vec()))
    }

    /// Epsilon coordinates for type A (`alpha_i = e_i - e_{i+1}`); sum of coordinates zero.
    pub fn to_epsilon(&self, w: &Weight) -> Option<Vec<Q>> {
        if !matches!(self.cartan_type, CartanType::A1 | CartanType::A2 | CartanType::A3) {
            return None;
        }
        let n = self.rank;
        let mut out = vec![Q::zero(); n + 1];
        for i in 0..n {
            out[i] += &w.0[i];
            out[i + 1] -= &w.0[i];
        }
        Some(out)
    }

    pub fn from_epsilon(&self, eps: &[Q]) -> Result<Weight> {
        if !matches!(self.cartan_type, CartanType::A1 | CartanType::A2 | CartanType::A3) {
            return Err(Error::Invalid(format!("epsilon coordinates need type A, got {}", self.label())));
        }
        let n = self.rank;
        if eps.len() != n + 1 {
            return Err(Error::DimensionMismatch { expected: n + 1, got: eps.len() });
        }
        let mean = eps.iter().fold(Q::zero(), |a, b| a + b) / q(n as i64 + 1);
        let mut c = Vec::with_capacity(n);
        let mut acc = Q::zero();
        for e in eps.iter().take(n) {
            acc += e - &mean;
            c.push(acc.clone());
        }
        Ok(Weight(c))
    }

    /// `2<lambda, alpha>/<alpha, alpha>`.
    pub fn coroot_pairing(&self, w: &Weight, alpha: &Weight) -> Q {
        q(2) * self.form(w, alpha) / self.norm2(alpha)
    }

    /// No positive root has `2<lambda+rho, alpha>/<alpha,alpha>` in `Z_{>0}`.
    pub fn is_antidominant(&self, lambda: &Weight) -> bool {
        is_antidominant_for(self, lambda, &self.rho, &(0..self.n_pos()).collect::<Vec<_>>())
    }

    pub fn dot(&self, w: &WeylElement, lambda: &Weight) -> Weight {
        w.apply(&lambda.add(&self.rho)).sub(&self.rho)
    }

    pub fn simple_reflection(&self, i: usize) -> WeylElement {
        let r = self.rank;
        let mut m = vec![vec![0i64; r]; r];
        for (a, row) in m.iter_mut().enumerate() {
            row[a] = 1;
        }
        for j in 0..r {
            m[i][j] -= self.cartan[i][j];
        }
        WeylElement { mat: m, length: 1 }
    }

    /// Reflection in an arbitrary root given by positive-root index.
    pub fn reflection(&self, idx: usize) -> WeylElement {
        let beta = self.pos_weight(idx);
        let r = self.rank;
        let mut m = vec![vec![0i64; r]; r];
        for j in 0..r {
            let mut e = Weight::zero(r);
            e.0[j] = Q::one();
            let c = self.coroot_pairing(&e, &beta).to_integer().to_i64().unwrap();
            for i in 0..r {
                m[i][j] = i64::from(i == j) - c * self.positive[idx][i];
            }
        }
        WeylElement { mat: m, length: 0 }
    }

    /// Weyl dimension formula.
    pub fn weyl_dimension(&self, lambda: &Weight) -> Q {
        let lr = lambda.add(&self.rho);
        let mut num = Q::one();
        let mut den = Q::one();
        for i in 0..self.n_pos() {
            let a = self.pos_weight(i);
            num *= self.form(&lr, &a);
            den *= self.form(&self.rho, &a);
        }
        num / den
    }

    pub fn is_dominant_integral(&self, lambda: &Weight) -> bool {
        (0..self.rank).all(|i| {
            let d = self.dynkin_label(lambda, i);
            d.is_integer() && !d.is_negative()
        })
    }
}

pub fn is_antidominant_for(rs: &RootSystem, lambda: &Weight, rho: &Weight, roots: &[usize]) -> bool {
    let lr = lambda.add(rho);
    roots.iter().all(|&i| {
        let c = rs.coroot_pairing(&lr, &rs.pos_weight(i));
        !(c.is_integer() && c.is_positive())
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    /// Integer matrix acting on simple-root coordinates (column vectors).
    pub mat: Vec<Vec<i64>>,
    pub length: usize,
}

impl WeylElement {
    pub fn apply(&self, w: &Weight) -> Weight {
        let r = w.rank();
        Weight((0..r).map(|i| (0..r).fold(Q::zero(), |acc, j| acc + q(self.mat[i][j]) * &w.0[j])).collect())
    }

    pub fn apply_ints(&self, v: &[i64]) -> Vec<i64> {
        let r = v.len();
        (0..r).map(|i| (0..r).map(|j| self.mat[i][j] * v[j]).sum()).collect()
    }

    pub fn compose(&self, o: &WeylElement) -> Vec<Vec<i64>> {
        let r = self.mat.len();
        (0..r).map(|i| (0..r).map(|j| (0..r).map(|k| self.mat[i][k] * o.mat[k][j]).sum()).collect()).collect()
    }

    pub fn det_sign(&self) -> i64 {
        if self.length % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
}

impl WeylGroup {
    /// Full enumeration by breadth-first search over reduced words.
    pub fn new(rs: &RootSystem) -> WeylGroup {
        let gens: Vec<WeylElement> = (0..rs.rank).map(|i| rs.simple_reflection(i)).collect();
        Self::generate(rs.rank, &gens, |w| {
            (0..rs.n_pos()).filter(|&i| w.apply_ints(&rs.positive[i]).iter().any(|&x| x < 0)).count()
        })
    }

    fn generate(rank: usize, gens: &[WeylElement], length: impl Fn(&WeylElement) -> usize) -> WeylGroup {
        let mut id = vec![vec![0i64; rank]; rank];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = 1;
        }
        let mut seen: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
        seen.insert(id.clone());
        let mut elements = vec![WeylElement { mat: id, length: 0 }];
        let mut frontier = 0;
        while frontier < elements.len() {
            let w = elements[frontier].clone();
            frontier += 1;
            for g in gens {
                let m = w.compose(g);
                if seen.insert(m.clone()) {
                    elements.push(WeylElement { mat: m, length: 0 });
                }
            }
        }
        for e in &mut elements {
            e.length = length(e);
        }
        elements.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| a.mat.cmp(&b.mat)));
        WeylGroup { elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn orbit(&self, w: &Weight) -> BTreeSet<Weight> {
        self.elements.iter().map(|e| e.apply(w)).collect()
    }

    pub fn inverse_of(&self, w: &WeylElement) -> &WeylElement {
        let r = w.mat.len();
        self.elements
            .iter()
            .find(|e| {
                let p = w.compose(e);
                (0..r).all(|i| (0..r).all(|j| p[i][j] == i64::from(i == j)))
            })
            .expect("finite group")
    }

    pub fn longest(&self) -> &WeylElement {
        self.elements.last().unwrap()
    }
}

/// A pair `(g, h)`: `h` contains the Cartan and is given by a closed symmetric root subset.
#[derive(Clone, Debug)]
pub struct Pair {
    pub rs: RootSystem,
    /// Indices into `rs.positive` of the positive roots of `h`.
    pub h_pos: Vec<usize>,
    /// Indices into `rs.positive` of the positive roots of `q`.
    pub q_pos: Vec<usize>,
    pub rho_h: Weight,
}

pub fn validate_pair(rs: &RootSystem, h_roots: &[Vec<i64>]) -> Result<Pair> {
    let mut h_pos = BTreeSet::new();
    for r in h_roots {
        if r.len() != rs.rank {
            return Err(Error::DimensionMismatch { expected: rs.rank, got: r.len() });
        }
        match rs.root_lookup(r) {
            Some((i, _)) => {
                h_pos.insert(i);
            }
            None => return Err(Error::NotARoot(format!("{:?}", r))),
        }
    }
    let signed: Vec<Vec<i64>> = h_pos
        .iter()
        .flat_map(|&i| {
            let p = rs.positive[i].clone();
            let n: Vec<i64> = p.iter().map(|x| -x).collect();
            [p, n]
        })
        .collect();
    for a in &signed {
        for b in &signed {
            let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if let Some((i, _)) = rs.root_lookup(&s) {
                if !h_pos.contains(&i) {
                    return Err(Error::NotClosed(format!("{:?}", s)));
                }
            }
        }
    }
    let h_pos: Vec<usize> = h_pos.into_iter().collect();
    let q_pos: Vec<usize> = (0..rs.n_pos()).filter(|i| !h_pos.contains(i)).collect();
    let mut rho_h = Weight::zero(rs.rank);
    for &i in &h_pos {
        rho_h = rho_h.add(&rs.pos_weight(i));
    }
    rho_h = rho_h.scale(&crate::linalg::qf(1, 2));
    Ok(Pair { rs: rs.clone(), h_pos, q_pos, rho_h })
}

impl Pair {
    pub fn is_h_root(&self, i: usize) -> bool {
        self.h_pos.contains(&i)
    }

    pub fn rho_q(&self) -> Weight {
        self.rs.rho.sub(&self.rho_h)
    }

    /// Subgroup generated by the reflections of `h`.
    pub fn weyl_h(&self) -> WeylGroup {
        let gens: Vec<WeylElement> = self.h_pos.iter().map(|&i| self.rs.reflection(i)).collect();
        let rs = &self.rs;
        let h_pos = self.h_pos.clone();
        WeylGroup::generate(rs.rank, &gens, move |w| {
            h_pos.iter().filter(|&&i| w.apply_ints(&rs.positive[i]).iter().any(|&x| x < 0)).count()
        })
    }

    /// `W^1 = { w : Delta_h^+ is contained in w Delta^+ }`.
    pub fn w_one(&self, w: &WeylGroup) -> Vec<WeylElement> {
        w.elements
            .iter()
            .filter(|e| {
                let inv = w.inverse_of(e);
                self.h_pos.iter().all(|&i| inv.apply_ints(&self.rs.positive[i]).iter().all(|&x| x >= 0))
            })
            .cloned()
            .collect()
    }

    /// Antidominance with respect to `Delta_h^+` and `rho_h`.
    pub fn is_h_antidominant(&self, eta: &Weight) -> bool {
        is_antidominant_for(&self.rs, eta, &self.rho_h, &self.h_pos)
    }

    /// Dominant-integral test for `h`.
    pub fn is_h_dominant_integral(&self, eta: &Weight) -> bool {
        self.h_pos.iter().all(|&i| {
            let c = self.rs.coroot_pairing(eta, &self.rs.pos_weight(i));
            c.is_integer() && !c.is_negative()
        })
    }

    pub fn h_roots(&self) -> Vec<Vec<i64>> {
        self.h_pos.iter().map(|&i| self.rs.positive[i].clone()).collect()
    }

    pub fn q_roots(&self) -> Vec<Vec<i64>> {
        self.q_pos.iter().map(|&i| self.rs.positive[i].clone()).collect()
    }
}

/// Kostant partition function for a list of positive roots (integer coordinates).
pub struct PartitionCounter {
    roots: Vec<Vec<i64>>,
    memo: HashMap<(Vec<i64>, usize), u64>,
}

impl PartitionCounter {
    pub fn new(roots: Vec<Vec<i64>>) -> PartitionCounter {
        PartitionCounter { roots, memo: HashMap::new() }
    }

    pub fn count(&mut self, gamma: &[i64]) -> u64 {
        self.count_from(gamma.to_vec(), 0)
    }

    /// Counts for a rational weight difference; zero if it is not in the integer cone.
    pub fn count_weight(&mut self, gamma: &Weight) -> u64 {
        match gamma.as_ints() {
            Some(v) if v.iter().all(|&x| x >= 0) => self.count(&v),
            _ => 0,
        }
    }

    fn count_from(&mut self, gamma: Vec<i64>, k: usize) -> u64 {
        if gamma.iter().any(|&x| x < 0) {
            return 0;
        }
        if gamma.iter().all(|&x| x == 0) {
            return 1;
        }
        if k == self.roots.len() {
            return 0;
        }
        if let Some(&v) = self.memo.get(&(gamma.clone(), k)) {
            return v;
        }
        let mut total = 0;
        let mut g = gamma.clone();
        loop {
            total += self.count_from(g.clone(), k + 1);
            for (x, r) in g.iter_mut().zip(&self.roots[k]) {
                *x -= r;
            }
            if g.iter().any(|&x| x < 0) {
                break;
            }
        }
        self.memo.insert((gamma, k), total);
        total
    }
}

/// All exponent vectors `n` with `sum n_i roots[i] = gamma`, in lexicographic order.
pub fn partitions(roots: &[Vec<i64>], gamma: &[i64]) -> Vec<Vec<u32>> {
    fn rec(roots: &[Vec<i64>], k: usize, rest: &mut Vec<i64>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest.iter().all(|&x| x == 0) {
            let mut v = cur.clone();
            v.resize(roots.len(), 0);
            out.push(v);
            return;
        }
        if k == roots.len() {
            return;
        }
        let mut n = 0;
        loop {
            cur.push(n);
            rec(roots, k + 1, rest, cur, out);
            cur.pop();
            for (x, r) in rest.iter_mut().zip(&roots[k]) {
                *x -= r;
            }
            n += 1;
            if rest.iter().any(|&x| x < 0) {
                break;
            }
        }
        for (x, r) in rest.iter_mut().zip(&roots[k]) {
            *x += r * n as i64;
        }
    }
    let mut out = Vec::new();
    let mut rest = gamma.to_vec();
    if rest.iter().any(|&x| x < 0) {
        return out;
    }
    rec(roots, 0, &mut rest, &mut vec![], &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qf;

    #[test]
    fn root_counts_and_weyl_orders() {
        for (t, npos, order) in
            [("A1", 1, 2), ("A2", 3, 6), ("A3", 6, 24), ("A1xA1", 2, 4), ("B2", 4, 8), ("G2", 6, 12)]
        {
            let rs = build_root_system(t).unwrap();
            assert_eq!(rs.n_pos(), npos, "{t}");
            assert_eq!(WeylGroup::new(&rs).order(), order, "{t}");
        }
    }

    #[test]
    fn killing_normalisation() {
        let a1 = build_root_system("A1").unwrap();
        assert_eq!(a1.gram.get(0, 0), &qf(1, 2));
        // sl3: Killing form is 6 tr, so <alpha, alpha> = 1/3.
        let a2 = build_root_system("A2").unwrap();
        assert_eq!(a2.gram.get(0, 0), &qf(1, 3));
        assert_eq!(a2.gram.get(0, 1), &qf(-1, 6));
    }

    #[test]
    fn unsupported() {
        assert_eq!(build_root_system("E8").unwrap_err(), Error::UnsupportedType("E8".into()));
    }

    #[test]
    fn pair_closure() {
        let rs = build_root_system("A2").unwrap();
        assert!(validate_pair(&rs, &[vec![1, 0]]).is_ok());
        assert!(matches!(validate_pair(&rs, &[vec![1, 0], vec![1, 1]]), Err(Error::NotClosed(_))));
        assert!(matches!(validate_pair(&rs, &[vec![2, 0]]), Err(Error::NotARoot(_))));
    }

    #[test]
    fn w_one_sizes() {
        let rs = build_root_system("A2").unwrap();
        let w = WeylGroup::new(&rs);
        let p = validate_pair(&rs, &[vec![1, 0]]).unwrap();
        assert_eq!(p.w_one(&w).len(), 3);
        assert_eq!(p.weyl_h().order(), 2);
        let t = validate_pair(&rs, &[]).unwrap();
        assert_eq!(t.w_one(&w).len(), 6);
    }

    #[test]
    fn partition_counts() {
        let rs = build_root_system("A2").unwrap();
        let mut pc = PartitionCounter::new(rs.positive.clone());
        assert_eq!(pc.count(&[1, 1]), 2);
        assert_eq!(pc.count(&[2, 2]), 3);
        assert_eq!(partitions(&rs.positive, &[2, 2]).len(), 3);
    }
}
