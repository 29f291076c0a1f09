//! Dense exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-1/2"` or `"0.25"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((a, b)) = s.split_once('.') {
        if b.is_empty() || !b.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = a.starts_with('-');
        let whole: BigInt = if a.is_empty() || a == "-" { BigInt::zero() } else { a.parse().ok()? };
        let frac: BigInt = b.parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), b.len());
        let f = Q::new(frac, den);
        let w = Q::from_integer(whole.abs());
        let v = w + f;
        return Some(if neg { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(Q::from_integer)
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(fmt_q).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn scalar(n: usize, c: &Q) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>, cols: usize) -> Mat {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(), cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Q) {
        if !v.is_zero() {
            self.data[r * self.cols + c] += v;
        }
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    t.set(c, r, v.clone());
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut s = Q::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Q) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`, adding to what is there.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Mat, coeff: &Q) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                let v = block.get(r, c);
                if !v.is_zero() {
                    self.data[(r0 + r) * self.cols + c0 + c] += v * coeff;
                }
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut b = Mat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                b.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        b
    }

    /// Row-reduces in place and returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            if p != lead {
                for k in 0..self.cols {
                    self.data.swap(p * self.cols + k, lead * self.cols + k);
                }
            }
            let inv = self.get(lead, c).recip();
            for k in c..self.cols {
                let v = &self.data[lead * self.cols + k] * &inv;
                self.data[lead * self.cols + k] = v;
            }
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let f = self.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for k in c..self.cols {
                    let lv = &self.data[lead * self.cols + k];
                    if !lv.is_zero() {
                        let d = &f * lv;
                        self.data[r * self.cols + k] -= d;
                    }
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column in increasing column order.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            is_pivot[p] = Some(i);
        }
        let mut out = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f].is_some() {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                let e = r.get(i, f);
                if !e.is_zero() {
                    v[p] = -e.clone();
                }
            }
            out.push(v);
        }
        out
    }

    /// Solves `self * x = b`, returning one solution if any exists.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Q::one());
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(aug.block(0, n, n, n))
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).fold(Q::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn pow(&self, k: u32) -> Mat {
        let mut out = Mat::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Characteristic polynomial `det(xI - A)`, coefficients from low to high degree.
    pub fn char_poly(&self) -> Vec<Q> {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        for k in 0..n.saturating_sub(2) {
            let Some(i) = (k + 1..n).find(|&i| !h.get(i, k).is_zero()) else {
                continue;
            };
            if i != k + 1 {
                for c in 0..n {
                    h.data.swap(i * n + c, (k + 1) * n + c);
                }
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + k + 1);
                }
            }
            let piv = h.get(k + 1, k).clone();
            for j in k + 2..n {
                let t = h.get(j, k) / &piv;
                if t.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = h.get(k + 1, c) * &t;
                    if !v.is_zero() {
                        h.data[j * n + c] -= v;
                    }
                }
                for r in 0..n {
                    let v = h.get(r, j) * &t;
                    if !v.is_zero() {
                        h.data[r * n + k + 1] += v;
                    }
                }
            }
        }
        // p[m] is the char poly of the leading m x m block.
        let mut p: Vec<Vec<Q>> = vec![vec![Q::one()]];
        for m in 1..=n {
            let hm = h.get(m - 1, m - 1).clone();
            let prev = &p[m - 1];
            let mut cur = vec![Q::zero(); m + 1];
            for (d, c) in prev.iter().enumerate() {
                cur[d + 1] += c;
                cur[d] -= c * &hm;
            }
            let mut prod = Q::one();
            for i in 1..m {
                prod *= h.get(m - i, m - i - 1);
                if prod.is_zero() {
                    break;
                }
                let coeff = h.get(m - i - 1, m - 1) * &prod;
                if coeff.is_zero() {
                    continue;
                }
                for (d, c) in p[m - i - 1].iter().enumerate() {
                    cur[d] -= c * &coeff;
                }
            }
            p.push(cur);
        }
        p.pop().unwrap()
    }

    /// Inertia `(positive, negative, zero)` of a symmetric matrix.
    pub fn signature(&self) -> (usize, usize, usize) {
        assert!(self.is_square());
        let mut a = self.clone();
        let n = a.rows;
        let (mut pos, mut neg) = (0, 0);
        let mut alive: Vec<usize> = (0..n).collect();
        while !alive.is_empty() {
            let piv = alive.iter().copied().find(|&i| !a.get(i, i).is_zero());
            let k = match piv {
                Some(k) => k,
                None => {
                    let mut pair = None;
                    'outer: for &i in &alive {
                        for &j in &alive {
                            if i != j && !a.get(i, j).is_zero() {
                                pair = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    let Some((i, j)) = pair else { break };
                    for c in 0..n {
                        let v = a.get(j, c).clone();
                        a.data[i * n + c] += v;
                    }
                    for r in 0..n {
                        let v = a.get(r, j).clone();
                        a.data[r * n + i] += v;
                    }
                    i
                }
            };
            let d = a.get(k, k).clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            alive.retain(|&i| i != k);
            for &i in &alive {
                let f = a.get(i, k) / &d;
                if f.is_zero() {
                    continue;
                }
                for &j in &alive {
                    let v = a.get(k, j) * &f;
                    if !v.is_zero() {
                        a.data[i * n + j] -= v;
                    }
                }
            }
        }
        (pos, neg, n - pos - neg)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature() == (self.rows, 0, 0)
    }
}

pub fn poly_eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

/// Divides by `(x - c)`, returning `(quotient, remainder)`.
pub fn poly_div_linear(p: &[Q], c: &Q) -> (Vec<Q>, Q) {
    if p.is_empty() {
        return (vec![], Q::zero());
    }
    let n = p.len() - 1;
    let mut quot = vec![Q::zero(); n];
    let mut carry = Q::zero();
    for d in (0..=n).rev() {
        let v = &p[d] + &carry * c;
        if d == 0 {
            return (quot, v);
        }
        quot[d - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

/// Subspace of `Q^n` stored as a row-reduced basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub n: usize,
    basis: Vec<Vec<Q>>,
}

impl Subspace {
    pub fn zero(n: usize) -> Subspace {
        Subspace { n, basis: vec![] }
    }

    pub fn full(n: usize) -> Subspace {
        Subspace::coordinate(n, &(0..n).collect::<Vec<_>>())
    }

    pub fn coordinate(n: usize, idx: &[usize]) -> Subspace {
        let vecs = idx
            .iter()
            .map(|&i| {
                let mut v = vec![Q::zero(); n];
                v[i] = Q::one();
                v
            })
            .collect();
        Subspace::span(n, vecs)
    }

    pub fn span(n: usize, vecs: Vec<Vec<Q>>) -> Subspace {
        if vecs.is_empty() {
            return Subspace::zero(n);
        }
        let k = vecs.len();
        let mut m = Mat::from_rows(vecs, n);
        let pivots = m.rref_in_place();
        let basis = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
        let _ = k;
        Subspace { n, basis }
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        Subspace::span(self.n, vs).dim() == self.dim()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        self.sum(other).dim() == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.n, vs)
    }

    /// Vectors orthogonal (dot product) to every basis vector.
    pub fn annihilator(&self) -> Vec<Vec<Q>> {
        if self.basis.is_empty() {
            return Subspace::full(self.n).basis;
        }
        Mat::from_rows(self.basis.clone(), self.n).kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let mut ann = self.annihilator();
        ann.extend(other.annihilator());
        if ann.is_empty() {
            return Subspace::full(self.n);
        }
        Subspace::span(self.n, Mat::from_rows(ann, self.n).kernel())
    }

    pub fn kernel_of(d: &Mat) -> Subspace {
        Subspace::span(d.cols, d.kernel())
    }

    pub fn image_of(d: &Mat) -> Subspace {
        Subspace::span(d.rows, d.transpose().to_rows())
    }

    /// `{x : d x in self}`.
    pub fn preimage(&self, d: &Mat) -> Subspace {
        assert_eq!(d.rows, self.n);
        let ann = self.annihilator();
        if ann.is_empty() {
            return Subspace::full(d.cols);
        }
        let a = Mat::from_rows(ann, self.n);
        Subspace::kernel_of(&a.mul(d))
    }

    /// `d(self)`.
    pub fn image_under(&self, d: &Mat) -> Subspace {
        Subspace::span(d.rows, self.basis.iter().map(|b| d.mul_vec(b)).collect())
    }
}

/// A quotient `top / bottom` with a fixed complement basis for coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub complement: Vec<Vec<Q>>,
    bottom: Subspace,
    solver: Option<Mat>,
}

impl Quotient {
    pub fn new(top: &Subspace, bottom: &Subspace) -> Quotient {
        let n = top.n;
        let mut acc = bottom.clone();
        let mut complement = Vec::new();
        for v in top.basis() {
            if !acc.contains(v) {
                complement.push(v.clone());
                let mut b = acc.basis.clone();
                b.push(v.clone());
                acc = Subspace::span(n, b);
            }
        }
        let mut cols = complement.clone();
        cols.extend(bottom.basis().iter().cloned());
        let solver = if cols.is_empty() { None } else { Some(Mat::from_rows(cols, n).transpose()) };
        Quotient { complement, bottom: bottom.clone(), solver }
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Coordinates of the class of `v`; `None` when `v` is outside `top`.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        let k = self.dim();
        match &self.solver {
            None => v.iter().all(|x| x.is_zero()).then(Vec::new),
            Some(s) => s.solve(v).map(|x| x[..k].to_vec()),
        }
    }

    pub fn bottom(&self) -> &Subspace {
        &self.bottom
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("-1/2"), Some(qf(-1, 2)));
        assert_eq!(parse_q("0.25"), Some(qf(1, 4)));
        assert_eq!(parse_q("-0.5"), Some(qf(-1, 2)));
        assert_eq!(parse_q("7"), Some(q(7)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("x"), None);
    }

    #[test]
    fn char_poly_companion() {
        // companion of x^3 - 6x^2 + 11x - 6
        let a = Mat::from_i64(&[&[0, 0, 6], &[1, 0, -11], &[0, 1, 6]]);
        assert_eq!(a.char_poly(), vec![q(-6), q(11), q(-6), q(1)]);
        let (quot, rem) = poly_div_linear(&a.char_poly(), &q(2));
        assert!(rem.is_zero());
        assert_eq!(quot, vec![q(3), q(-4), q(1)]);
    }

    #[test]
    fn char_poly_needs_pivot_swap() {
        let a = Mat::from_i64(&[&[1, 2, 0, 1], &[0, 0, 0, 3], &[0, 5, 2, 0], &[4, 0, 1, 1]]);
        let p = a.char_poly();
        for x in -3..4 {
            let xi = Mat::scalar(4, &q(x)).sub(&a);
            // det via product of pivots of an LU-free route: compare with char poly at x
            let det = det_bruteforce(&xi);
            assert_eq!(poly_eval(&p, &q(x)), det);
        }
    }

    fn det_bruteforce(m: &Mat) -> Q {
        let n = m.rows;
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut s = Q::zero();
        for c in 0..n {
            let mut minor = Vec::new();
            for r in 1..n {
                minor.push((0..n).filter(|&k| k != c).map(|k| m.get(r, k).clone()).collect());
            }
            let d = det_bruteforce(&Mat::from_rows(minor, n - 1));
            let t = m.get(0, c) * d;
            if c % 2 == 0 {
                s += t;
            } else {
                s -= t;
            }
        }
        s
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        let a = Mat::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.signature(), (1, 1, 0));
        let b = Mat::from_i64(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, 0]]);
        assert_eq!(b.signature(), (2, 0, 1));
    }

    #[test]
    fn subspace_ops() {
        let u = Subspace::span(3, vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
        let v = Subspace::span(3, vec![vec![q(0), q(1), q(1)], vec![q(0), q(0), q(1)]]);
        assert_eq!(u.intersect(&v).dim(), 1);
        assert!(u.intersect(&v).contains(&[q(0), q(1), q(0)]));
        assert_eq!(u.sum(&v).dim(), 3);
        let d = Mat::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(Subspace::zero(3).preimage(&d).dim(), 1);
        assert_eq!(Subspace::kernel_of(&d.pow(2)).dim(), 2);
    }

    #[test]
    fn quotient_coordinates() {
        let top = Subspace::full(3);
        let bottom = Subspace::span(3, vec![vec![q(1), q(1), q(0)]]);
        let qt = Quotient::new(&top, &bottom);
        assert_eq!(qt.dim(), 2);
        let a = qt.coords(&[q(1), q(1), q(0)]).unwrap();
        assert!(a.iter().all(|x| x.is_zero()));
    }
}
