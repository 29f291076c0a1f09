//! Truncated weight modules in category O.
//!
//! A [`ModuleWindow`] stores weight-space dimensions and root-vector actions on
//! every weight it knows about. Which weights are known is described by a
//! [`Region`]; everything outside it raises `OutsideWindow`.

use crate::error::{Error, Result};
use crate::liealg::{Gen, LieAlgebra};
use crate::linalg::{q, Mat, Quotient, Subspace, Q};
use crate::roots::{partitions, Weight};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    All,
    /// Weights not below `top`, plus weights at most `depth` below it.
    Below {
        top: Weight,
        depth: i64,
    },
    /// Known iff every `w - s` is known in `inner`.
    Shifted {
        inner: Box<Region>,
        shifts: Vec<Weight>,
    },
    Both(Box<Region>, Box<Region>),
}

impl Region {
    pub fn knows(&self, w: &Weight) -> bool {
        match self {
            Region::All => true,
            Region::Below { top, depth } => match w.depth_below(top) {
                None => true,
                Some(d) => d.iter().sum::<i64>() <= *depth,
            },
            Region::Shifted { inner, shifts } => shifts.iter().all(|s| inner.knows(&w.sub(s))),
            Region::Both(a, b) => a.knows(w) && b.knows(w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    Verma,
    Simple,
    FiniteDim,
    Tensor,
    Sub,
    Quotient,
    Sum,
}

#[derive(Clone, Debug)]
pub struct ModuleWindow {
    pub g: Arc<LieAlgebra>,
    pub kind: ModuleKind,
    pub region: Region,
    pub dims: BTreeMap<Weight, usize>,
    /// `(basis index of a root vector, source weight) -> matrix` in the rescaled basis.
    actions: HashMap<(usize, Weight), Mat>,
    /// Highest weights whose infinitesimal characters occur.
    pub inf_chars: Vec<Weight>,
    /// Unique maximal weight, when there is one.
    pub top: Option<Weight>,
}

impl ModuleWindow {
    fn empty(g: Arc<LieAlgebra>, kind: ModuleKind, region: Region) -> ModuleWindow {
        ModuleWindow { g, kind, region, dims: BTreeMap::new(), actions: HashMap::new(), inf_chars: vec![], top: None }
    }

    pub fn rank(&self) -> usize {
        self.g.rank
    }

    pub fn knows(&self, w: &Weight) -> bool {
        self.region.knows(w)
    }

    pub fn dim(&self, w: &Weight) -> Result<usize> {
        if !self.knows(w) {
            return Err(Error::OutsideWindow(w.to_string()));
        }
        Ok(self.dims.get(w).copied().unwrap_or(0))
    }

    pub fn weights(&self) -> impl Iterator<Item = (&Weight, &usize)> {
        self.dims.iter()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// Matrix of basis element `a` from the `w` weight space to the `w + wt(a)` one.
    pub fn action(&self, a: usize, w: &Weight) -> Result<Mat> {
        let src = self.dim(w)?;
        if let Gen::H(i) = self.g.gen(a) {
            return Ok(Mat::scalar(src, &self.g.rs.dynkin_label(w, i)));
        }
        let tw = w.add_ints(&self.g.weight(a));
        let tgt = self.dim(&tw)?;
        if src == 0 || tgt == 0 {
            return Ok(Mat::zeros(tgt, src));
        }
        match self.actions.get(&(a, w.clone())) {
            Some(m) => Ok(m.clone()),
            None => Err(Error::OutsideWindow(tw.to_string())),
        }
    }

    /// Action of a general element of weight `wt` given in the rescaled basis.
    pub fn action_vec(&self, x: &[Q], w: &Weight) -> Result<Mat> {
        let mut out: Option<Mat> = None;
        for (a, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = self.action(a, w)?.scale(c);
            out = Some(match out {
                None => m,
                Some(o) => o.add(&m),
            });
        }
        match out {
            Some(m) => Ok(m),
            None => Err(Error::Invalid("zero element".into())),
        }
    }

    fn fill_actions(&mut self, mut f: impl FnMut(usize, &Weight, &Weight) -> Option<Mat>) {
        let weights: Vec<Weight> = self.dims.keys().cloned().collect();
        for w in &weights {
            for a in self.g.rank..self.g.dim {
                let tw = w.add_ints(&self.g.weight(a));
                if !self.knows(&tw) || !self.dims.contains_key(&tw) {
                    continue;
                }
                if let Some(m) = f(a, w, &tw) {
                    self.actions.insert((a, w.clone()), m);
                }
            }
        }
    }

    /// Basis vectors of `M_w` killed by every simple raising operator.
    pub fn singular_vectors(&self, w: &Weight) -> Result<Subspace> {
        let d = self.dim(w)?;
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for i in 0..self.rank() {
            let a = self.g.idx(Gen::E(self.g.rs.simple_index(i)));
            let m = self.action(a, w)?;
            rows.extend(m.to_rows());
        }
        if rows.is_empty() {
            return Ok(Subspace::full(d));
        }
        Ok(Subspace::kernel_of(&Mat::from_rows(rows, d)))
    }
}

/// Per-weight linear maps between two windows.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub maps: BTreeMap<Weight, Mat>,
}

impl ModuleMap {
    pub fn at(&self, w: &Weight, rows: usize, cols: usize) -> Mat {
        self.maps.get(w).cloned().unwrap_or_else(|| Mat::zeros(rows, cols))
    }
}

/// Straightening of `x * f^n v` into PBW monomials in the integral `f_beta`.
pub struct Pbw {
    g: Arc<LieAlgebra>,
    lambda: Weight,
    memo: HashMap<(Gen, Vec<u32>), BTreeMap<Vec<u32>, Q>>,
}

pub type Vector = BTreeMap<Vec<u32>, Q>;

impl Pbw {
    pub fn new(g: Arc<LieAlgebra>, lambda: Weight) -> Pbw {
        Pbw { g, lambda, memo: HashMap::new() }
    }

    fn weight_of(&self, m: &[u32]) -> Weight {
        let mut w = self.lambda.clone();
        for (i, &n) in m.iter().enumerate() {
            if n > 0 {
                let r: Vec<i64> = self.g.rs.positive[i].iter().map(|x| x * n as i64).collect();
                w = w.sub_ints(&r);
            }
        }
        w
    }

    fn gen_of_chev(&self, a: usize) -> Gen {
        self.g.gen(a)
    }

    pub fn act(&mut self, x: Gen, m: &[u32]) -> Vector {
        if let Some(v) = self.memo.get(&(x, m.to_vec())) {
            return v.clone();
        }
        let g = self.g.clone();
        let mut out: Vector = BTreeMap::new();
        let first = m.iter().position(|&n| n > 0);
        match x {
            Gen::H(i) => {
                let c = g.rs.dynkin_label(&self.weight_of(m), i);
                if !c.is_zero() {
                    out.insert(m.to_vec(), c);
                }
            }
            Gen::F(gm) if first.map_or(true, |j| gm <= j) => {
                let mut nm = m.to_vec();
                nm[gm] += 1;
                out.insert(nm, Q::one());
            }
            _ => {
                let Some(j) = first else {
                    self.memo.insert((x, m.to_vec()), out.clone());
                    return out;
                };
                let mut rest = m.to_vec();
                rest[j] -= 1;
                let inner = self.act(x, &rest);
                let fj = Gen::F(j);
                for (mono, c) in inner {
                    for (mono2, c2) in self.act(fj, &mono) {
                        *out.entry(mono2).or_insert_with(Q::zero) += &c * c2;
                    }
                }
                let xa = g.idx(x);
                let ja = g.idx(fj);
                for (z, c) in g.bracket_chevalley(xa, ja).clone() {
                    let zg = self.gen_of_chev(z);
                    for (mono2, c2) in self.act(zg, &rest) {
                        *out.entry(mono2).or_insert_with(Q::zero) += &c * c2;
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        self.memo.insert((x, m.to_vec()), out.clone());
        out
    }

    pub fn act_vec(&mut self, x: Gen, v: &Vector) -> Vector {
        let mut out: Vector = BTreeMap::new();
        for (m, c) in v {
            for (m2, c2) in self.act(x, m) {
                *out.entry(m2).or_insert_with(Q::zero) += c * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Contravariant pairing `<m, m'>` for the transpose twisted by `signs`.
    pub fn pairing(&mut self, m: &[u32], other: &[u32], signs: &[i64]) -> Q {
        let mut cur: Vector = BTreeMap::new();
        cur.insert(other.to_vec(), Q::one());
        let mut sign = 1i64;
        for (i, &n) in m.iter().enumerate() {
            for _ in 0..n {
                cur = self.act_vec(Gen::E(i), &cur);
                sign *= signs[i];
                if cur.is_empty() {
                    return Q::zero();
                }
            }
        }
        let empty = vec![0u32; m.len()];
        cur.get(&empty).map(|c| c * q(sign)).unwrap_or_else(Q::zero)
    }
}

/// Verma window with its PBW data.
pub struct Verma {
    pub lambda: Weight,
    pub depth: i64,
    pub module: ModuleWindow,
    pub monomials: BTreeMap<Weight, Vec<Vec<u32>>>,
    pbw: Pbw,
}

pub fn depth_vectors(rank: usize, depth: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        let mut next = Vec::new();
        for v in &out {
            let used: i64 = v.iter().sum();
            for k in 0..=(depth - used) {
                let mut nv = v.clone();
                nv.push(k);
                next.push(nv);
            }
        }
        out = next;
    }
    out.sort_by_key(|v| (v.iter().sum::<i64>(), std::cmp::Reverse(v.clone())));
    out
}

pub fn verma_window(g: &Arc<LieAlgebra>, lambda: &Weight, depth: i64) -> Result<Verma> {
    if lambda.rank() != g.rank {
        return Err(Error::DimensionMismatch { expected: g.rank, got: lambda.rank() });
    }
    let region = Region::Below { top: lambda.clone(), depth };
    let mut module = ModuleWindow::empty(g.clone(), ModuleKind::Verma, region);
    let mut monomials = BTreeMap::new();
    for d in depth_vectors(g.rank, depth) {
        let w = lambda.sub_ints(&d);
        let ms = partitions(&g.rs.positive, &d);
        if ms.is_empty() {
            continue;
        }
        module.dims.insert(w.clone(), ms.len());
        monomials.insert(w, ms);
    }
    module.inf_chars = vec![lambda.clone()];
    module.top = Some(lambda.clone());
    let mut pbw = Pbw::new(g.clone(), lambda.clone());
    let index: BTreeMap<Weight, HashMap<Vec<u32>, usize>> = monomials
        .iter()
        .map(|(w, ms)| (w.clone(), ms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()))
        .collect();
    let gg = g.clone();
    module.fill_actions(|a, w, tw| {
        let (x, scale) = match gg.gen(a) {
            Gen::E(i) => (Gen::E(i), Q::one()),
            Gen::F(i) => (Gen::F(i), gg.kappa[i].recip()),
            Gen::H(_) => unreachable!(),
        };
        let src = &monomials[w];
        let tidx = &index[tw];
        let mut m = Mat::zeros(tidx.len(), src.len());
        for (c, mono) in src.iter().enumerate() {
            for (m2, v) in pbw.act(x, mono) {
                let r = tidx[&m2];
                m.set(r, c, v * &scale);
            }
        }
        Some(m)
    });
    Ok(Verma { lambda: lambda.clone(), depth, module, monomials, pbw })
}

/// Sign characters on positive roots for contravariant forms.
pub fn compact_signs(g: &LieAlgebra) -> Vec<i64> {
    vec![1; g.n_pos]
}

/// `-1` on the roots outside `h` (valid when the pair is symmetric).
pub fn pair_signs(g: &LieAlgebra, h_pos: &[usize]) -> Vec<i64> {
    (0..g.n_pos).map(|i| if h_pos.contains(&i) { 1 } else { -1 }).collect()
}

/// Per-weight Gram matrices of a contravariant form.
#[derive(Clone, Debug)]
pub struct ContravariantForm {
    pub signs: Vec<i64>,
    pub grams: BTreeMap<Weight, Mat>,
}

impl ContravariantForm {
    pub fn gram(&self, w: &Weight) -> Result<&Mat> {
        self.grams.get(w).ok_or_else(|| Error::OutsideWindow(w.to_string()))
    }

    pub fn is_positive_definite(&self) -> Option<Weight> {
        self.grams.iter().find(|(_, g)| !g.is_positive_definite()).map(|(w, _)| w.clone())
    }
}

impl Verma {
    pub fn shapovalov(&mut self, signs: &[i64]) -> ContravariantForm {
        let mut grams = BTreeMap::new();
        for (w, ms) in &self.monomials {
            let n = ms.len();
            let mut gm = Mat::zeros(n, n);
            for a in 0..n {
                for b in a..n {
                    let v = self.pbw.pairing(&ms[a], &ms[b], signs);
                    gm.set(a, b, v.clone());
                    gm.set(b, a, v);
                }
            }
            grams.insert(w.clone(), gm);
        }
        ContravariantForm { signs: signs.to_vec(), grams }
    }

    pub fn label(&self, m: &[u32]) -> String {
        let mut parts = Vec::new();
        for (i, &n) in m.iter().enumerate() {
            if n > 0 {
                let r: Vec<String> = self.module.g.rs.positive[i].iter().map(|x| x.to_string()).collect();
                parts.push(if n == 1 { format!("f[{}]", r.join("")) } else { format!("f[{}]^{}", r.join(""), n) });
            }
        }
        if parts.is_empty() {
            "v".into()
        } else {
            parts.join(" ") + " v"
        }
    }
}

/// Quotient of a window by a family of per-weight subspaces that is stable under the action.
pub struct QuotientData {
    pub module: ModuleWindow,
    pub proj: ModuleMap,
    pub section: ModuleMap,
}

pub fn quotient_window(m: &ModuleWindow, sub: &BTreeMap<Weight, Subspace>, kind: ModuleKind) -> Result<QuotientData> {
    let mut out = ModuleWindow::empty(m.g.clone(), kind, m.region.clone());
    out.inf_chars = m.inf_chars.clone();
    out.top = m.top.clone();
    let mut proj = BTreeMap::new();
    let mut section = BTreeMap::new();
    let mut spaces = BTreeMap::new();
    for (w, &d) in &m.dims {
        let u = sub.get(w).cloned().unwrap_or_else(|| Subspace::zero(d));
        let qt = Quotient::new(&Subspace::full(d), &u);
        let k = qt.dim();
        let mut p = Mat::zeros(k, d);
        for c in 0..d {
            let mut e = vec![Q::zero(); d];
            e[c] = Q::one();
            for (r, v) in qt.coords(&e).unwrap().into_iter().enumerate() {
                p.set(r, c, v);
            }
        }
        let s = Mat::from_rows(qt.complement.clone(), d).transpose();
        if k > 0 {
            out.dims.insert(w.clone(), k);
        }
        proj.insert(w.clone(), p);
        section.insert(w.clone(), if k > 0 { s } else { Mat::zeros(d, 0) });
        spaces.insert(w.clone(), u);
    }
    // stability check and induced actions
    for (w, _) in &m.dims {
        for a in m.g.rank..m.g.dim {
            let tw = w.add_ints(&m.g.weight(a));
            if !m.knows(&tw) || !m.dims.contains_key(&tw) {
                continue;
            }
            let act = m.action(a, w)?;
            for b in spaces[w].basis() {
                if !spaces[&tw].contains(&act.mul_vec(b)) {
                    return Err(Error::NotEquivariant(format!("subspace at {} not stable", w)));
                }
            }
        }
    }
    let pm = ModuleMap { maps: proj };
    let sm = ModuleMap { maps: section };
    out.fill_actions(|a, w, tw| {
        let act = m.action(a, w).ok()?;
        Some(pm.maps[tw].mul(&act).mul(&sm.maps[w]))
    });
    Ok(QuotientData { module: out, proj: pm, section: sm })
}

pub struct SubData {
    pub module: ModuleWindow,
    pub incl: ModuleMap,
}

pub fn sub_window(m: &ModuleWindow, sub: &BTreeMap<Weight, Subspace>) -> Result<SubData> {
    let mut out = ModuleWindow::empty(m.g.clone(), ModuleKind::Sub, m.region.clone());
    out.inf_chars = m.inf_chars.clone();
    let mut incl = BTreeMap::new();
    for (w, &d) in &m.dims {
        let u = sub.get(w).cloned().unwrap_or_else(|| Subspace::zero(d));
        if u.dim() > 0 {
            out.dims.insert(w.clone(), u.dim());
            incl.insert(w.clone(), Mat::from_rows(u.basis().to_vec(), d).transpose());
        } else {
            incl.insert(w.clone(), Mat::zeros(d, 0));
        }
    }
    let mut err = None;
    out.fill_actions(|a, w, tw| {
        let act = m.action(a, w).ok()?;
        let src = &incl[w];
        let tgt = &incl[tw];
        let img = act.mul(src);
        let mut x = Mat::zeros(tgt.cols, src.cols);
        for c in 0..src.cols {
            match tgt.solve(&img.col(c)) {
                Some(sol) => {
                    for (r, v) in sol.into_iter().enumerate() {
                        x.set(r, c, v);
                    }
                }
                None => err = Some(Error::NotEquivariant(format!("submodule not stable at {}", w))),
            }
        }
        Some(x)
    });
    if let Some(e) = err {
        return Err(e);
    }
    out.top = out.dims.keys().max_by_key(|w| w.height()).cloned().filter(|_| out.dims.len() > 0);
    Ok(SubData { module: out, incl: ModuleMap { maps: incl } })
}

/// `U(n^-) v` for a vector `v` in the weight space `w`, computed layer by layer in the window.
pub fn generated_submodule(m: &ModuleWindow, w: &Weight, v: &[Q]) -> Result<BTreeMap<Weight, Subspace>> {
    let mut out: BTreeMap<Weight, Subspace> = BTreeMap::new();
    let d0 = m.dim(w)?;
    out.insert(w.clone(), Subspace::span(d0, vec![v.to_vec()]));
    let mut order: Vec<Weight> = m.dims.keys().filter(|x| x.depth_below(w).is_some()).cloned().collect();
    order.sort_by_key(|x| w.sub(x).height());
    for x in order.iter().skip(1) {
        let d = m.dims[x];
        let mut vecs = Vec::new();
        for i in 0..m.rank() {
            let mut e = vec![0; m.rank()];
            e[i] = 1;
            let up = x.add_ints(&e);
            if let Some(s) = out.get(&up) {
                let a = m.g.idx(Gen::F(m.g.rs.simple_index(i)));
                let act = m.action(a, &up)?;
                vecs.extend(s.basis().iter().map(|b| act.mul_vec(b)));
            }
        }
        let s = Subspace::span(d, vecs);
        if s.dim() > 0 {
            out.insert(x.clone(), s);
        }
    }
    Ok(out)
}

/// Simple quotient `L(lambda)` of a Verma window by the radical of the contravariant form.
pub fn simple_quotient_window(v: &mut Verma) -> Result<(QuotientData, ContravariantForm)> {
    let signs = compact_signs(&v.module.g);
    simple_quotient_window_signed(v, &signs)
}

/// Simple quotient with the form induced from the contravariant form of sign pattern `signs`.
/// The radical does not depend on the signs.
pub fn simple_quotient_window_signed(v: &mut Verma, signs: &[i64]) -> Result<(QuotientData, ContravariantForm)> {
    let form = v.shapovalov(signs);
    for w in v.module.dims.keys() {
        if !form.grams.contains_key(w) {
            return Err(Error::WindowTooShallow(format!("no Gram matrix at {}", w)));
        }
    }
    let rad: BTreeMap<Weight, Subspace> =
        form.grams.iter().map(|(w, gm)| (w.clone(), Subspace::kernel_of(gm))).collect();
    let qd = quotient_window(&v.module, &rad, ModuleKind::Simple)?;
    let qform = induced_form(&form, &qd.section);
    Ok((qd, qform))
}

pub fn induced_form(form: &ContravariantForm, section: &ModuleMap) -> ContravariantForm {
    let grams = section
        .maps
        .iter()
        .filter(|(_, s)| s.cols > 0)
        .map(|(w, s)| (w.clone(), s.transpose().mul(&form.grams[w]).mul(s)))
        .collect();
    ContravariantForm { signs: form.signs.clone(), grams }
}

/// Finite-dimensional simple module for dominant integral `lambda`.
pub fn finite_dim_simple(g: &Arc<LieAlgebra>, lambda: &Weight) -> Result<ModuleWindow> {
    let rs = &g.rs;
    if !rs.is_dominant_integral(lambda) {
        return Err(Error::Invalid(format!("{} is not dominant integral", lambda)));
    }
    let w = crate::roots::WeylGroup::new(rs);
    let low = w.longest().apply(lambda);
    let depth = lambda.sub(&low).height().to_integer().try_into().unwrap_or(i64::MAX) + 1;
    finite_dim_simple_at_depth(g, lambda, depth)
}

pub fn finite_dim_simple_at_depth(g: &Arc<LieAlgebra>, lambda: &Weight, depth: i64) -> Result<ModuleWindow> {
    let mut v = verma_window(g, lambda, depth)?;
    let (qd, _) = simple_quotient_window(&mut v)?;
    let mut m = qd.module;
    let boundary: Vec<&Weight> =
        m.dims.keys().filter(|x| x.depth_below(lambda).map_or(false, |d| d.iter().sum::<i64>() == depth)).collect();
    if !boundary.is_empty() {
        return Err(Error::WindowTooShallow(format!("nonzero weight space at depth {}", depth)));
    }
    let expected = g.rs.weyl_dimension(lambda);
    if q(m.total_dim() as i64) != expected {
        return Err(Error::Invalid(format!("dimension {} differs from Weyl formula", m.total_dim())));
    }
    m.region = Region::All;
    m.kind = ModuleKind::FiniteDim;
    Ok(m)
}

/// `M (x) F` with `F` finite-dimensional.
pub fn tensor_with_finite(m: &ModuleWindow, f: &ModuleWindow) -> Result<ModuleWindow> {
    if f.region != Region::All {
        return Err(Error::Invalid("second factor must be finite-dimensional".into()));
    }
    let shifts: Vec<Weight> = f.dims.keys().cloned().collect();
    let region = Region::Shifted { inner: Box::new(m.region.clone()), shifts: shifts.clone() };
    let mut out = ModuleWindow::empty(m.g.clone(), ModuleKind::Tensor, region);
    let mut cands: BTreeSet<Weight> = BTreeSet::new();
    for mw in m.dims.keys() {
        for fw in &shifts {
            cands.insert(mw.add(fw));
        }
    }
    // layout[w] = list of (f weight, offset, m dim, f dim)
    let mut layout: BTreeMap<Weight, Vec<(Weight, usize, usize, usize)>> = BTreeMap::new();
    for w in cands {
        if !out.knows(&w) {
            continue;
        }
        let mut off = 0;
        let mut parts = Vec::new();
        for fw in &shifts {
            let md = m.dims.get(&w.sub(fw)).copied().unwrap_or(0);
            let fd = f.dims[fw];
            if md > 0 {
                parts.push((fw.clone(), off, md, fd));
                off += md * fd;
            }
        }
        if off > 0 {
            out.dims.insert(w.clone(), off);
            layout.insert(w, parts);
        }
    }
    let mut err = None;
    out.fill_actions(|a, w, tw| {
        let src = &layout[w];
        let tgt = &layout[tw];
        let mut mat = Mat::zeros(out_dim(tgt), out_dim(src));
        for (fw, off, md, fd) in src {
            let mw = w.sub(fw);
            // x on the first factor
            if let Some((_, toff, tmd, _)) = tgt.iter().find(|t| &t.0 == fw) {
                match m.action(a, &mw) {
                    Ok(am) => {
                        for j in 0..*fd {
                            mat.add_block(toff + j * tmd, off + j * md, &am, &Q::one());
                        }
                    }
                    Err(e) => err = Some(e),
                }
            }
            // x on the second factor
            let tfw = fw.add_ints(&m.g.weight(a));
            if let Some((_, toff, tmd, _)) = tgt.iter().find(|t| t.0 == tfw) {
                debug_assert_eq!(tmd, md);
                let af = f.action(a, fw).expect("finite factor knows every weight");
                for j in 0..*fd {
                    for jt in 0..af.rows {
                        let c = af.get(jt, j);
                        if c.is_zero() {
                            continue;
                        }
                        for k in 0..*md {
                            mat.add_at(toff + jt * md + k, off + j * md + k, c);
                        }
                    }
                }
            }
        }
        Some(mat)
    });
    if let Some(e) = err {
        return Err(e);
    }
    let mut ic = Vec::new();
    for l in &m.inf_chars {
        for fw in &shifts {
            let c = l.add(fw);
            if !ic.contains(&c) {
                ic.push(c);
            }
        }
    }
    out.inf_chars = ic;
    let top_f = f.dims.keys().max_by_key(|w| w.height()).cloned();
    out.top = match (&m.top, top_f) {
        (Some(a), Some(b)) => Some(a.add(&b)),
        _ => None,
    };
    Ok(out)
}

fn out_dim(parts: &[(Weight, usize, usize, usize)]) -> usize {
    parts.last().map_or(0, |(_, off, md, fd)| off + md * fd)
}

pub struct SumData {
    pub module: ModuleWindow,
    pub incl_first: ModuleMap,
    pub proj_second: ModuleMap,
}

/// `M1 + M2` with the canonical inclusion of `M1` and projection onto `M2`.
pub fn direct_sum(a: &ModuleWindow, b: &ModuleWindow) -> Result<SumData> {
    let region = Region::Both(Box::new(a.region.clone()), Box::new(b.region.clone()));
    let mut out = ModuleWindow::empty(a.g.clone(), ModuleKind::Sum, region);
    let ws: BTreeSet<Weight> = a.dims.keys().chain(b.dims.keys()).cloned().collect();
    let mut incl = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for w in ws {
        if !out.knows(&w) {
            continue;
        }
        let da = a.dims.get(&w).copied().unwrap_or(0);
        let db = b.dims.get(&w).copied().unwrap_or(0);
        out.dims.insert(w.clone(), da + db);
        let mut i = Mat::zeros(da + db, da);
        for k in 0..da {
            i.set(k, k, Q::one());
        }
        let mut p = Mat::zeros(db, da + db);
        for k in 0..db {
            p.set(k, da + k, Q::one());
        }
        incl.insert(w.clone(), i);
        proj.insert(w, p);
    }
    out.fill_actions(|x, w, tw| {
        let da = a.dims.get(w).copied().unwrap_or(0);
        let db = b.dims.get(w).copied().unwrap_or(0);
        let ta = a.dims.get(tw).copied().unwrap_or(0);
        let tb = b.dims.get(tw).copied().unwrap_or(0);
        let mut m = Mat::zeros(ta + tb, da + db);
        if da > 0 && ta > 0 {
            m.add_block(0, 0, &a.action(x, w).ok()?, &Q::one());
        }
        if db > 0 && tb > 0 {
            m.add_block(ta, da, &b.action(x, w).ok()?, &Q::one());
        }
        Some(m)
    });
    let mut ic = a.inf_chars.clone();
    for c in &b.inf_chars {
        if !ic.contains(c) {
            ic.push(c.clone());
        }
    }
    out.inf_chars = ic;
    Ok(SumData { module: out, incl_first: ModuleMap { maps: incl }, proj_second: ModuleMap { maps: proj } })
}

/// A short exact sequence `0 -> M1 -> M2 -> M3 -> 0` of windows.
pub struct Ses {
    pub m1: ModuleWindow,
    pub m2: ModuleWindow,
    pub m3: ModuleWindow,
    pub i: ModuleMap,
    pub p: ModuleMap,
}

/// `0 -> U(n^-) v_sing -> M(lambda) -> M(lambda)/U(n^-) v_sing -> 0`, with the singular
/// vector taken in the weight space `lambda - gamma`.
pub fn ses_from_singular(g: &Arc<LieAlgebra>, lambda: &Weight, depth: i64, gamma: &[i64]) -> Result<Ses> {
    let v = verma_window(g, lambda, depth)?;
    let w = lambda.sub_ints(gamma);
    let sing = v.module.singular_vectors(&w)?;
    if sing.dim() != 1 {
        return Err(Error::NotSingular(format!("{}-dimensional singular space at {}", sing.dim(), w)));
    }
    let sub = generated_submodule(&v.module, &w, &sing.basis()[0])?;
    let sd = sub_window(&v.module, &sub)?;
    let qd = quotient_window(&v.module, &sub, ModuleKind::Quotient)?;
    let mut m1 = sd.module;
    m1.top = Some(w);
    Ok(Ses { m1, m2: v.module, m3: qd.module, i: sd.incl, p: qd.proj })
}

pub fn split_ses(a: &ModuleWindow, b: &ModuleWindow) -> Result<Ses> {
    let s = direct_sum(a, b)?;
    Ok(Ses { m1: a.clone(), m2: s.module, m3: b.clone(), i: s.incl_first, p: s.proj_second })
}

/// Highest singular weight strictly below `lambda` in a Verma window, if any.
pub fn first_singular_depth(v: &Verma) -> Option<Vec<i64>> {
    let lambda = &v.lambda;
    let mut ws: Vec<&Weight> = v.module.dims.keys().filter(|w| *w != lambda).collect();
    ws.sort_by_key(|w| (lambda.sub(w).height(), std::cmp::Reverse((*w).clone())));
    for w in ws {
        if let Ok(s) = v.module.singular_vectors(w) {
            if s.dim() > 0 {
                return w.depth_below(lambda);
            }
        }
    }
    None
}

/// Character of a `b_h`-Verma module over the given positive roots.
pub fn verma_character(roots: &[Vec<i64>], top: &Weight, w: &Weight) -> u64 {
    let mut pc = crate::roots::PartitionCounter::new(roots.to_vec());
    pc.count_weight(&top.sub(w))
}
