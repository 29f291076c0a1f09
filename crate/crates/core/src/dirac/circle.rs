//! The six-term exact circle of higher Dirac cohomology attached to a short exact sequence.

use super::{assemble_block, jordan_chains, kernel_chain, Block, JordanData};
use crate::cat_o::{ModuleMap, Ses};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Quotient, Subspace, Q};
use crate::roots::Weight;
use crate::spinor::SpinModule;
use num_traits::Zero;

/// Operators and maps of `0 -> X1 -> X2 -> X3 -> 0` on one weight block.
#[derive(Clone, Debug)]
pub struct SesBlocks {
    pub d: [Mat; 3],
    pub parity: [Vec<u8>; 3],
    pub i: Mat,
    pub p: Mat,
}

fn lift_map(map: &ModuleMap, src: &Block, tgt: &Block) -> Mat {
    let mut out = Mat::zeros(tgt.dim, src.dim);
    for (b, (w, off, d)) in src.parts.iter().enumerate() {
        let (_, toff, td) = &tgt.parts[b];
        if *d > 0 && *td > 0 {
            out.add_block(*toff, *off, &map.at(w, *td, *d), &Q::from_integer(1.into()));
        }
    }
    out
}

impl SesBlocks {
    pub fn from_ses(ses: &Ses, s: &SpinModule, mu: &Weight) -> Result<SesBlocks> {
        let b1 = assemble_block(&ses.m1, s, mu)?;
        let b2 = assemble_block(&ses.m2, s, mu)?;
        let b3 = assemble_block(&ses.m3, s, mu)?;
        let i = lift_map(&ses.i, &b1.block, &b2.block);
        let p = lift_map(&ses.p, &b2.block, &b3.block);
        Ok(SesBlocks { d: [b1.d, b2.d, b3.d], parity: [b1.block.parity, b2.block.parity, b3.block.parity], i, p })
    }

    /// Module-map and exactness conditions on the block.
    pub fn validate(&self) -> Result<()> {
        if self.i.mul(&self.d[0]) != self.d[1].mul(&self.i) {
            return Err(Error::NotEquivariant("i D1 != D2 i".into()));
        }
        if self.p.mul(&self.d[1]) != self.d[2].mul(&self.p) {
            return Err(Error::NotEquivariant("p D2 != D3 p".into()));
        }
        let (n1, n2, n3) = (self.d[0].rows, self.d[1].rows, self.d[2].rows);
        if self.i.rank() != n1 || self.p.rank() != n3 || !self.p.mul(&self.i).is_zero() || n1 + n3 != n2 {
            return Err(Error::NotEquivariant("sequence is not short exact on the block".into()));
        }
        Ok(())
    }
}

/// Per-`k` quotient data for one node `H_top(X_j)^p`.
struct Node {
    levels: Vec<Quotient>,
    offsets: Vec<usize>,
    dim: usize,
}

impl Node {
    fn new(d: &Mat, parity: &[u8], p: u8) -> Node {
        let n = d.rows;
        let kc = kernel_chain(d);
        let r = kc.len() - 1;
        let im = Subspace::image_of(d);
        let idx: Vec<usize> = (0..n).filter(|&i| parity[i] == p).collect();
        let e = Subspace::coordinate(n, &idx);
        let at = |s: usize| kc[s.min(r)].clone();
        let mut levels = Vec::new();
        let mut offsets = Vec::new();
        let mut dim = 0;
        let mut k = 0;
        while 2 * k < r {
            let top = at(2 * k + 1);
            let bottom = top.intersect(&im).sum(&at(2 * k));
            let qt = Quotient::new(&top.intersect(&e), &bottom.intersect(&e));
            offsets.push(dim);
            dim += qt.dim();
            levels.push(qt);
            k += 1;
        }
        Node { levels, offsets, dim }
    }

    /// Coordinates of the class of a top of an odd chain of length `2k+1`.
    fn coords(&self, v: &[Q], size: usize) -> Result<Vec<Q>> {
        let k = (size - 1) / 2;
        let mut out = vec![Q::zero(); self.dim];
        let lvl = self.levels.get(k).ok_or_else(|| Error::LiftFailure("chain longer than kernel chain".into()))?;
        let c = lvl.coords(v).ok_or_else(|| Error::LiftFailure("top outside ker D^{2k+1}".into()))?;
        for (j, x) in c.into_iter().enumerate() {
            out[self.offsets[k] + j] = x;
        }
        Ok(out)
    }
}

/// A triple of chains `(k, l, m)` with `l = k + m` and their tops.
#[derive(Clone, Debug)]
pub struct Triple {
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub top1: Option<Vec<Q>>,
    pub top2: Vec<Q>,
    pub top3: Option<Vec<Q>>,
    /// Parity of `top2`.
    pub parity: u8,
}

#[derive(Clone, Debug)]
pub struct CircleResult {
    /// Dimensions of `H(X1)^+, H(X2)^+, H(X3)^+, H(X1)^-, H(X2)^-, H(X3)^-`.
    pub dims: [usize; 6],
    /// Ranks of the maps leaving each node, in the same order.
    pub ranks: [usize; 6],
    /// Composition of consecutive maps vanishes at each node.
    pub compositions_zero: bool,
    pub exact: bool,
    pub triples: Vec<(usize, usize, usize)>,
}

fn pow_apply(d: &Mat, v: &[Q], k: usize) -> Vec<Q> {
    let mut x = v.to_vec();
    for _ in 0..k {
        x = d.mul_vec(&x);
    }
    x
}

fn columns(vs: &[Vec<Q>], n: usize) -> Mat {
    if vs.is_empty() {
        return Mat::zeros(n, 0);
    }
    Mat::from_rows(vs.to_vec(), n).transpose()
}

/// Lifts the Jordan tops of `X3` through `p`, builds compatible Jordan bases and returns triples.
pub fn lift_triples(sb: &SesBlocks) -> Result<(Vec<Triple>, JordanData, JordanData)> {
    let [d1, d2, d3] = &sb.d;
    let (n1, n2) = (d1.rows, d2.rows);
    let g1 = kernel_chain(d1).pop().unwrap();
    let g2 = kernel_chain(d2).pop().unwrap();
    let j3 = jordan_chains(d3, &sb.parity[2], &[])?;
    let par2 = |p: u8| {
        let idx: Vec<usize> = (0..n2).filter(|&i| sb.parity[1][i] == p).collect();
        Subspace::coordinate(n2, &idx)
    };
    let par1 = |p: u8| {
        let idx: Vec<usize> = (0..n1).filter(|&i| sb.parity[0][i] == p).collect();
        Subspace::coordinate(n1, &idx)
    };
    let mut triples = Vec::new();
    let mut forced = Vec::new();
    for c in &j3.chains {
        let m = c.size;
        let p = c.parity;
        let g2p = g2.intersect(&par2(p));
        let bg = columns(g2p.basis(), n2);
        let y = sb.p.mul(&bg).solve(&c.top).ok_or_else(|| Error::LiftFailure("top has no lift".into()))?;
        let x0 = bg.mul_vec(&y);
        let i1 = sb.i.mul(&columns(g1.intersect(&par1(p)).basis(), n1));
        let mut lifted = None;
        for r in 0..=n2 {
            let dx = pow_apply(d2, &x0, m + r);
            let di = d2.pow((m + r) as u32).mul(&i1);
            let neg: Vec<Q> = dx.iter().map(|v| -v.clone()).collect();
            if let Some(z) = di.solve(&neg) {
                let x: Vec<Q> = x0.iter().zip(i1.mul_vec(&z)).map(|(a, b)| a + b).collect();
                lifted = Some((x, r));
                break;
            }
        }
        let (x, k) = lifted.ok_or_else(|| Error::LiftFailure("lift is not nilpotent".into()))?;
        let l = m + k;
        if pow_apply(d2, &x, l - 1).iter().all(|v| v.is_zero()) {
            return Err(Error::LiftFailure("lifted chain is shorter than its image".into()));
        }
        let top1 = if k > 0 {
            let tail = pow_apply(d2, &x, m);
            let pre = sb.i.solve(&tail).ok_or_else(|| Error::LiftFailure("tail not in the image of i".into()))?;
            let p1 = ((p as usize + m) % 2) as u8;
            forced.push((pre.clone(), k, p1));
            Some(pre)
        } else {
            None
        };
        triples.push(Triple { k, l, m, top1, top2: x, top3: Some(c.top.clone()), parity: p });
    }
    let j1 = jordan_chains(d1, &sb.parity[0], &forced)?;
    for c in &j1.chains {
        if forced.iter().any(|(t, _, _)| *t == c.top) {
            continue;
        }
        triples.push(Triple {
            k: c.size,
            l: c.size,
            m: 0,
            top1: Some(c.top.clone()),
            top2: sb.i.mul_vec(&c.top),
            top3: None,
            parity: c.parity,
        });
    }
    // the chains of X2 must form a Jordan basis of its generalised kernel
    let mut vecs = Vec::new();
    let mut chains2 = Vec::new();
    for t in &triples {
        for j in 0..t.l {
            vecs.push(pow_apply(d2, &t.top2, j));
        }
        chains2.push(super::Chain { top: t.top2.clone(), size: t.l, parity: t.parity });
    }
    if vecs.len() != g2.dim() || Subspace::span(n2, vecs).dim() != g2.dim() {
        return Err(Error::LiftFailure("lifted chains do not form a Jordan basis".into()));
    }
    Ok((triples, j1, JordanData { chains: chains2 }))
}

/// Builds the six maps and checks exactness at every node.
pub fn exact_circle(sb: &SesBlocks) -> Result<CircleResult> {
    sb.validate()?;
    let (triples, _, _) = lift_triples(sb)?;
    let nodes: Vec<Node> = (0..6).map(|t| Node::new(&sb.d[t % 3], &sb.parity[t % 3], (t / 3) as u8)).collect();
    // tops of odd chains per node, with their images under the outgoing map
    let mut src: Vec<Vec<(Vec<Q>, usize)>> = vec![Vec::new(); 6];
    let mut img: Vec<Vec<Option<(Vec<Q>, usize)>>> = vec![Vec::new(); 6];
    for t in &triples {
        let p2 = t.parity as usize;
        let p1 = (p2 + t.m) % 2;
        if t.k % 2 == 1 {
            let node = 3 * p1;
            src[node].push((t.top1.clone().unwrap(), t.k));
            img[node].push((t.m % 2 == 0).then(|| (t.top2.clone(), t.l)));
        }
        if t.l % 2 == 1 {
            let node = 3 * p2 + 1;
            src[node].push((t.top2.clone(), t.l));
            img[node].push((t.k % 2 == 0 && t.m > 0).then(|| (t.top3.clone().unwrap(), t.m)));
        }
        if t.m % 2 == 1 {
            let node = 3 * p2 + 2;
            src[node].push((t.top3.clone().unwrap(), t.m));
            img[node].push((t.l % 2 == 0).then(|| (t.top1.clone().unwrap(), t.k)));
        }
    }
    let target = |node: usize| -> usize {
        match node % 3 {
            0 => node + 1,
            1 => node + 1,
            _ => (node + 1) % 6,
        }
    };
    let mut maps: Vec<Mat> = Vec::with_capacity(6);
    for node in 0..6 {
        let tn = target(node);
        let n_src = nodes[node].dim;
        let n_tgt = nodes[tn].dim;
        if src[node].len() != n_src {
            return Err(Error::LiftFailure(format!(
                "node {} has {} odd tops for dimension {}",
                node,
                src[node].len(),
                n_src
            )));
        }
        let mut tmat = Mat::zeros(n_src, n_src);
        let mut ymat = Mat::zeros(n_tgt, n_src);
        for (c, ((v, size), im)) in src[node].iter().zip(&img[node]).enumerate() {
            for (r, x) in nodes[node].coords(v, *size)?.into_iter().enumerate() {
                tmat.set(r, c, x);
            }
            if let Some((w, tsize)) = im {
                for (r, x) in nodes[tn].coords(w, *tsize)?.into_iter().enumerate() {
                    ymat.set(r, c, x);
                }
            }
        }
        let tinv = if n_src == 0 {
            Mat::zeros(0, 0)
        } else {
            tmat.inverse().ok_or_else(|| Error::LiftFailure("odd tops do not form a basis".into()))?
        };
        maps.push(ymat.mul(&tinv));
    }
    let mut dims = [0; 6];
    let mut ranks = [0; 6];
    for node in 0..6 {
        dims[node] = nodes[node].dim;
        ranks[node] = maps[node].rank();
    }
    let mut exact = true;
    let mut compositions_zero = true;
    for node in 0..6 {
        let prev = (0..6).find(|&x| target(x) == node).unwrap();
        let comp = maps[node].mul(&maps[prev]);
        if !comp.is_zero() {
            compositions_zero = false;
            exact = false;
        }
        if ranks[prev] + ranks[node] != dims[node] {
            exact = false;
        }
    }
    Ok(CircleResult {
        dims,
        ranks,
        compositions_zero,
        exact,
        triples: triples.iter().map(|t| (t.k, t.l, t.m)).collect(),
    })
}
