//! Lower and upper perfect bases of weight-graded spaces.
//!
//! A `PerfectSpace` stores, per operator `(i,l)` and source degree, the
//! matrix of `f_il` (lower mode, raising the degree) or `e_il` (upper mode,
//! lowering it). Degrees are root vectors `α`, the weight being `λ - α`.
//! Everything is generic over the scalar field; the usual input is
//! crystal-limit data over `Q`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cartan::{parse_datum, render_datum, BorcherdsCartanDatum, GenIndex, RootVector, Weight};
use crate::crystal::{Stat, TableCrystal};
use crate::field::Field;
use crate::lattice::CrystalGraph;
use crate::linalg::{Echelon, Matrix};
use crate::qrat::ScalarQ;
use crate::{Error, Rat, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Lower,
    Upper,
}

#[derive(Clone, Debug)]
pub struct PerfectSpace<F> {
    pub datum: Arc<BorcherdsCartanDatum>,
    pub lambda: Weight,
    pub gens: Vec<GenIndex>,
    pub dims: BTreeMap<RootVector, usize>,
    /// Keyed by operator and source degree; rows index the target degree.
    pub maps: BTreeMap<(GenIndex, RootVector), Matrix<F>>,
    pub mode: Mode,
}

pub type RatSpace = PerfectSpace<Rat>;
pub type QSpace = PerfectSpace<ScalarQ>;

fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

impl<F: Field> PerfectSpace<F> {
    /// Checks that every matrix connects two listed degrees with matching shapes.
    pub fn new(
        datum: Arc<BorcherdsCartanDatum>,
        lambda: Weight,
        gens: Vec<GenIndex>,
        dims: BTreeMap<RootVector, usize>,
        maps: BTreeMap<(GenIndex, RootVector), Matrix<F>>,
        mode: Mode,
    ) -> Result<Self> {
        let n = datum.n();
        if lambda.fund.len() != n || lambda.offset.len() != n {
            return Err(domain("weight has the wrong number of components"));
        }
        for g in &gens {
            if g.i >= n || g.l == 0 || (datum.is_real(g.i) && g.l != 1) {
                return Err(domain(format!("operator index ({}, {}) is not valid for the datum", g.i, g.l)));
            }
        }
        if dims.keys().any(|a| a.0.len() != n) {
            return Err(domain("degree has the wrong number of components"));
        }
        let s = PerfectSpace { datum, lambda, gens, dims, maps, mode };
        for ((g, src), m) in &s.maps {
            if !s.gens.contains(g) {
                return Err(domain(format!("matrix for undeclared operator {}", s.datum.fmt_gen(*g))));
            }
            let Some(&ds) = s.dims.get(src) else {
                return Err(domain(format!("matrix from undeclared degree {:?}", src.0)));
            };
            let dt = s.target(*g, src).and_then(|t| s.dims.get(&t).copied());
            let Some(dt) = dt else {
                return Err(domain(format!("matrix {} from {:?} has no target degree", s.datum.fmt_gen(*g), src.0)));
            };
            if m.rows() != dt || m.cols() != ds {
                return Err(domain(format!(
                    "matrix {} from {:?} is {}x{}, expected {}x{}",
                    s.datum.fmt_gen(*g),
                    src.0,
                    m.rows(),
                    m.cols(),
                    dt,
                    ds
                )));
            }
        }
        Ok(s)
    }

    pub fn dim(&self, alpha: &RootVector) -> usize {
        self.dims.get(alpha).copied().unwrap_or(0)
    }

    pub fn weight(&self, alpha: &RootVector) -> Weight {
        self.lambda.minus_root(alpha)
    }

    /// Degree reached by one application of the operator.
    pub fn target(&self, g: GenIndex, alpha: &RootVector) -> Option<RootVector> {
        match self.mode {
            Mode::Lower => Some(alpha.plus_gen(g)),
            Mode::Upper => alpha.minus_gen(g),
        }
    }

    fn source_of(&self, g: GenIndex, alpha: &RootVector) -> Option<RootVector> {
        match self.mode {
            Mode::Lower => alpha.minus_gen(g),
            Mode::Upper => Some(alpha.plus_gen(g)),
        }
    }

    /// `None` when the target degree carries no space.
    pub fn apply(&self, g: GenIndex, alpha: &RootVector, v: &[F]) -> Option<(RootVector, Vec<F>)> {
        let t = self.target(g, alpha)?;
        let dt = self.dim(&t);
        if dt == 0 {
            return None;
        }
        let w = match self.maps.get(&(g, alpha.clone())) {
            Some(m) => m.mul_vec(v),
            None => vec![F::zero(); dt],
        };
        Some((t, w))
    }

    fn check_vector(&self, alpha: &RootVector, v: &[F]) -> Result<()> {
        if v.len() != self.dim(alpha) || self.dim(alpha) == 0 {
            return Err(domain(format!("vector of length {} does not fit degree {:?}", v.len(), alpha.0)));
        }
        if v.iter().all(|x| x.is_zero()) {
            return Err(domain("the zero vector has no filtration degree"));
        }
        Ok(())
    }

    /// `op^n V ∩ V_α` for lower mode, for `n = 0, 1, ...` until it vanishes.
    pub fn image_filtration(&self, g: GenIndex, alpha: &RootVector) -> Vec<Echelon<F>> {
        let dim = self.dim(alpha);
        let mut out = Vec::new();
        let mut n = 0u32;
        loop {
            let mut src = Some(alpha.clone());
            for _ in 0..n {
                src = src.and_then(|a| self.source_of(g, &a));
            }
            let Some(src) = src.filter(|s| self.dim(s) > 0) else { break };
            let mut e = Echelon::new(dim);
            for k in 0..self.dim(&src) {
                let mut v = vec![F::zero(); self.dim(&src)];
                v[k] = F::one();
                let mut cur = Some((src.clone(), v));
                for _ in 0..n {
                    cur = cur.and_then(|(a, v)| self.apply(g, &a, &v));
                }
                if let Some((_, v)) = cur {
                    e.insert(&v);
                }
            }
            if e.dim() == 0 {
                break;
            }
            out.push(e);
            n += 1;
        }
        out
    }

    /// `ker op^k ∩ V_α` for `k = 0 ..= kmax`.
    pub fn kernel_filtration(&self, g: GenIndex, alpha: &RootVector, kmax: u32) -> Vec<Echelon<F>> {
        let dim = self.dim(alpha);
        let mut out = Vec::new();
        for k in 0..=kmax {
            let mut cols = Vec::new();
            for j in 0..dim {
                let mut v = vec![F::zero(); dim];
                v[j] = F::one();
                let mut cur = Some((alpha.clone(), v));
                for _ in 0..k {
                    cur = cur.and_then(|(a, v)| self.apply(g, &a, &v));
                }
                cols.push(cur);
            }
            let mut e = Echelon::new(dim);
            let rows = cols.iter().find_map(|c| c.as_ref().map(|(_, v)| v.len()));
            match rows {
                None => {
                    for j in 0..dim {
                        let mut v = vec![F::zero(); dim];
                        v[j] = F::one();
                        e.insert(&v);
                    }
                }
                Some(r) => {
                    let cols: Vec<Vec<F>> =
                        cols.into_iter().map(|c| c.map(|x| x.1).unwrap_or(vec![F::zero(); r])).collect();
                    for v in Matrix::from_cols(&cols, r).nullspace() {
                        e.insert(&v);
                    }
                }
            }
            out.push(e);
        }
        out
    }

    /// Largest `n` with `v ∈ f_il^n V` (lower mode).
    pub fn d_lower(&self, g: GenIndex, alpha: &RootVector, v: &[F]) -> Result<u32> {
        if self.mode != Mode::Lower {
            return Err(domain("d_lower needs a lower-mode space"));
        }
        self.check_vector(alpha, v)?;
        let filt = self.image_filtration(g, alpha);
        Ok(filt.iter().take_while(|e| e.contains(v)).count() as u32 - 1)
    }

    /// Largest `n` with `e_il^n v ≠ 0` (upper mode).
    pub fn d_upper(&self, g: GenIndex, alpha: &RootVector, v: &[F]) -> Result<u32> {
        if self.mode != Mode::Upper {
            return Err(domain("d_upper needs an upper-mode space"));
        }
        self.check_vector(alpha, v)?;
        let mut n = 0;
        let mut cur = (alpha.clone(), v.to_vec());
        while let Some((a, w)) = self.apply(g, &cur.0, &cur.1) {
            if w.iter().all(|x| x.is_zero()) {
                break;
            }
            n += 1;
            cur = (a, w);
        }
        Ok(n)
    }

    /// `Σ_{(i,l)} f_il V` at `α`, whose complement is `V_H`.
    pub fn lowered_span(&self, alpha: &RootVector) -> Echelon<F> {
        let mut e = Echelon::new(self.dim(alpha));
        for &g in &self.gens {
            if let Some(level) = self.image_filtration(g, alpha).get(1) {
                for k in 0..self.dim(alpha) {
                    let mut v = vec![F::zero(); self.dim(alpha)];
                    v[k] = F::one();
                    let r = level.reduce(&v);
                    if !r.iter().zip(&v).all(|(a, b)| a == b) {
                        // the difference v - r lies in the image
                        let d: Vec<F> = v.iter().zip(&r).map(|(a, b)| a.sub_ref(b)).collect();
                        e.insert(&d);
                    }
                }
            }
        }
        e
    }

    pub fn map_scalars<G: Field>(&self, f: impl Fn(&F) -> G) -> PerfectSpace<G> {
        PerfectSpace {
            datum: self.datum.clone(),
            lambda: self.lambda.clone(),
            gens: self.gens.clone(),
            dims: self.dims.clone(),
            maps: self.maps.iter().map(|(k, m)| (k.clone(), m.map(&f))).collect(),
            mode: self.mode,
        }
    }
}

fn eval_at_zero(x: &ScalarQ) -> Result<Rat> {
    x.eval0().map_err(|_| domain(format!("entry {} has a pole at q = 0", x)))
}

impl QSpace {
    /// The `q = 0` specialization; fails on entries with a pole at 0.
    pub fn at_q_zero(&self) -> Result<RatSpace> {
        let mut maps = BTreeMap::new();
        for (k, m) in &self.maps {
            let mut out = Matrix::zeros(m.rows(), m.cols());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    out[(i, j)] = eval_at_zero(&m[(i, j)])?;
                }
            }
            maps.insert(k.clone(), out);
        }
        Ok(PerfectSpace {
            datum: self.datum.clone(),
            lambda: self.lambda.clone(),
            gens: self.gens.clone(),
            dims: self.dims.clone(),
            maps,
            mode: self.mode,
        })
    }
}

/// Per degree, labelled coordinate vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateBasis<F> {
    pub vectors: BTreeMap<RootVector, Vec<(String, Vec<F>)>>,
}

impl<F: Field> CandidateBasis<F> {
    /// Flattened `(degree, position)` in the order used by reports.
    pub fn elements(&self) -> Vec<(RootVector, usize)> {
        self.vectors.iter().flat_map(|(a, vs)| (0..vs.len()).map(move |k| (a.clone(), k))).collect()
    }

    pub fn len(&self) -> usize {
        self.vectors.values().map(|v| v.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Each vector multiplied by a random nonzero rational `±p/q`, `p, q ≤ 9`.
    pub fn rescaled<R: Rng>(&self, rng: &mut R) -> CandidateBasis<F> {
        let vectors = self
            .vectors
            .iter()
            .map(|(a, vs)| {
                let vs = vs
                    .iter()
                    .map(|(l, v)| {
                        let p: i64 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
                        let q: i64 = rng.gen_range(1..=9);
                        let c = F::from_rational(&Rat::new(p.into(), q.into()));
                        (l.clone(), v.iter().map(|x| x.mul_ref(&c)).collect())
                    })
                    .collect();
                (a.clone(), vs)
            })
            .collect();
        CandidateBasis { vectors }
    }

    fn offsets(&self) -> BTreeMap<RootVector, usize> {
        let mut out = BTreeMap::new();
        let mut k = 0;
        for (a, vs) in &self.vectors {
            out.insert(a.clone(), k);
            k += vs.len();
        }
        out
    }
}

/// Output of the perfect-basis verifiers. Elements are indexed as in
/// `CandidateBasis::elements`.
#[derive(Clone, Debug)]
pub struct PerfectReport<F> {
    pub passed: bool,
    pub mode: Mode,
    pub labels: Vec<String>,
    pub degrees: Vec<RootVector>,
    /// `d_il` (lower) or `d^∨_il` (upper).
    pub d: BTreeMap<(usize, GenIndex), u32>,
    /// `f_il` (lower) or `E_il` (upper); `None` means 0.
    pub maps: BTreeMap<(usize, GenIndex), Option<usize>>,
    pub constants: BTreeMap<(usize, GenIndex), F>,
    pub violations: Vec<String>,
}

impl<F: Field> PerfectReport<F> {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The highest core: elements with every `d` equal to 0.
    pub fn core(&self) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.d.iter().all(|(&(x, _), &v)| x != b || v == 0)).collect()
    }

    /// The operator that lowers `d` (the inverse of `f` in lower mode).
    pub fn raise(&self, g: GenIndex, b: usize) -> Option<usize> {
        match self.mode {
            Mode::Lower => self.maps.iter().find(|(&(_, h), &t)| h == g && t == Some(b)).map(|(&(s, _), _)| s),
            Mode::Upper => self.maps.get(&(b, g)).copied().flatten(),
        }
    }

    /// The operator that raises `d`.
    pub fn lower(&self, g: GenIndex, b: usize) -> Option<usize> {
        match self.mode {
            Mode::Lower => self.maps.get(&(b, g)).copied().flatten(),
            Mode::Upper => self.maps.iter().find(|(&(_, h), &t)| h == g && t == Some(b)).map(|(&(s, _), _)| s),
        }
    }
}

/// First nonzero entry `p` of `b`; returns `c` with `w = c b` if it holds.
fn proportional<F: Field>(w: &[F], b: &[F]) -> Option<F> {
    let p = b.iter().position(|x| !x.is_zero())?;
    let c = w[p].div_ref(&b[p]);
    w.iter().zip(b).all(|(x, y)| *x == c.mul_ref(y)).then_some(c)
}

fn check_basis<F: Field>(space: &PerfectSpace<F>, basis: &CandidateBasis<F>) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (a, vs) in &basis.vectors {
        if vs.iter().any(|(_, v)| v.len() != space.dim(a)) {
            return Err(domain(format!("basis vector at degree {:?} has the wrong length", a.0)));
        }
    }
    for (a, &dim) in &space.dims {
        let vs = basis.vectors.get(a).map(|v| v.as_slice()).unwrap_or(&[]);
        let mut e = Echelon::new(dim);
        let independent = vs.iter().all(|(_, v)| e.insert(v));
        if vs.len() != dim || !independent {
            out.push(format!("vectors at degree {:?} do not form a basis", a.0));
        }
    }
    for a in basis.vectors.keys() {
        if !space.dims.contains_key(a) {
            return Err(domain(format!("basis lists undeclared degree {:?}", a.0)));
        }
    }
    Ok(out)
}

/// Checks the perfect-basis conditions in the space's mode. Injectivity is
/// read per `(i,l)` on the elements with nonzero image.
fn verify_impl<F: Field>(space: &PerfectSpace<F>, basis: &CandidateBasis<F>, mode: Mode) -> Result<PerfectReport<F>> {
    if space.mode != mode {
        return Err(domain("space mode does not match the requested verification"));
    }
    let mut violations = check_basis(space, basis)?;
    let elems = basis.elements();
    let offsets = basis.offsets();
    let mut rep = PerfectReport {
        passed: false,
        mode,
        labels: elems.iter().map(|(a, k)| basis.vectors[a][*k].0.clone()).collect(),
        degrees: elems.iter().map(|(a, _)| a.clone()).collect(),
        d: BTreeMap::new(),
        maps: BTreeMap::new(),
        constants: BTreeMap::new(),
        violations: Vec::new(),
    };
    if !violations.is_empty() {
        rep.violations = violations;
        return Ok(rep);
    }
    let d = &space.datum;
    for &g in &space.gens {
        // subspaces per degree, computed once
        let mut filt: BTreeMap<RootVector, Vec<Echelon<F>>> = BTreeMap::new();
        let mut kern: BTreeMap<RootVector, Vec<Echelon<F>>> = BTreeMap::new();
        let maxh = space.dims.keys().map(|a| a.height()).max().unwrap_or(0);
        for a in space.dims.keys() {
            match mode {
                Mode::Lower => {
                    filt.insert(a.clone(), space.image_filtration(g, a));
                }
                Mode::Upper => {
                    kern.insert(a.clone(), space.kernel_filtration(g, a, maxh / g.l + 1));
                }
            }
        }
        for (b, (a, k)) in elems.iter().enumerate() {
            let v = &basis.vectors[a][*k].1;
            let db = match mode {
                Mode::Lower => filt[a].iter().take_while(|e| e.contains(v)).count() as u32 - 1,
                Mode::Upper => space.d_upper(g, a, v)?,
            };
            rep.d.insert((b, g), db);
            let image = space.apply(g, a, v);
            let Some((t, w)) = image else {
                rep.maps.insert((b, g), None);
                continue;
            };
            // the subspace the defect must lie in
            let sub = match mode {
                Mode::Lower => filt[&t].get(db as usize + 2).cloned().unwrap_or_else(|| Echelon::new(w.len())),
                Mode::Upper => {
                    if db == 0 {
                        if w.iter().any(|x| !x.is_zero()) {
                            violations.push(format!("e{} of {} is nonzero but d = 0", d.fmt_gen(g), rep.labels[b]));
                        }
                        rep.maps.insert((b, g), None);
                        continue;
                    }
                    kern[&t][db as usize - 1].clone()
                }
            };
            let wr = sub.reduce(&w);
            if wr.iter().all(|x| x.is_zero()) {
                rep.maps.insert((b, g), None);
                continue;
            }
            let base = offsets[&t];
            let mut hits = Vec::new();
            for (j, (_, u)) in basis.vectors[&t].iter().enumerate() {
                if let Some(c) = proportional(&wr, &sub.reduce(u)) {
                    hits.push((base + j, c));
                }
            }
            if hits.len() == 1 {
                let (j, c) = hits.pop().unwrap();
                rep.maps.insert((b, g), Some(j));
                rep.constants.insert((b, g), c);
            } else {
                rep.maps.insert((b, g), None);
                violations.push(format!(
                    "{}{} of {} is not a multiple of a single basis vector modulo the next filtration step ({} candidates)",
                    if mode == Mode::Lower { "f" } else { "e" },
                    d.fmt_gen(g),
                    rep.labels[b],
                    hits.len()
                ));
            }
        }
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for b in 0..elems.len() {
            if let Some(Some(t)) = rep.maps.get(&(b, g)) {
                if let Some(&other) = seen.get(t) {
                    violations.push(format!(
                        "{} and {} have the same image under {}",
                        rep.labels[other],
                        rep.labels[b],
                        d.fmt_gen(g)
                    ));
                }
                seen.insert(*t, b);
            }
        }
    }
    rep.passed = violations.is_empty();
    rep.violations = violations;
    Ok(rep)
}

pub fn verify_lower_perfect<F: Field>(space: &PerfectSpace<F>, basis: &CandidateBasis<F>) -> Result<PerfectReport<F>> {
    verify_impl(space, basis, Mode::Lower)
}

pub fn verify_upper_perfect<F: Field>(space: &PerfectSpace<F>, basis: &CandidateBasis<F>) -> Result<PerfectReport<F>> {
    verify_impl(space, basis, Mode::Upper)
}

/// The lower or upper perfect crystal of a passing report.
pub fn induced_crystal<F: Field>(space: &PerfectSpace<F>, rep: &PerfectReport<F>) -> Result<TableCrystal> {
    if !rep.passed {
        return Err(domain("the basis is not perfect"));
    }
    let d = &space.datum;
    let n = rep.len();
    let wt: Vec<Weight> = rep.degrees.iter().map(|a| space.weight(a)).collect();
    let mut eps = vec![vec![Stat::Fin(0); d.n()]; n];
    let mut phi = vec![vec![Stat::Fin(0); d.n()]; n];
    for b in 0..n {
        for i in 0..d.n() {
            let e = if d.is_real(i) { rep.d.get(&(b, GenIndex::new(i, 1))).copied().unwrap_or(0) as i64 } else { 0 };
            eps[b][i] = Stat::Fin(e);
            phi[b][i] = Stat::Fin(e + d.pairing(i, &wt[b]));
        }
    }
    let mut f = BTreeMap::new();
    let mut e = BTreeMap::new();
    for (&(b, g), &t) in &rep.maps {
        if let Some(t) = t {
            let (src, dst) = match rep.mode {
                Mode::Lower => (b, t),
                Mode::Upper => (t, b),
            };
            f.insert((src, g), dst);
            e.insert((dst, g), src);
        }
    }
    Ok(TableCrystal {
        datum: (**d).clone(),
        gens: space.gens.clone(),
        labels: rep.labels.clone(),
        wt,
        depth: rep.degrees.iter().map(|a| a.height()).collect(),
        eps,
        phi,
        f,
        e,
        sources: rep.core(),
    })
}

/// A finite prefix followed by a repeated period (empty period: finite).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodSequence {
    pub prefix: Vec<GenIndex>,
    pub period: Vec<GenIndex>,
}

impl GoodSequence {
    /// Cycles through `gens`; every index recurs infinitely often.
    pub fn cyclic(gens: &[GenIndex]) -> Self {
        GoodSequence { prefix: Vec::new(), period: gens.to_vec() }
    }

    pub fn get(&self, k: usize) -> Option<GenIndex> {
        if k < self.prefix.len() {
            Some(self.prefix[k])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(k - self.prefix.len()) % self.period.len()])
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringData {
    pub steps: Vec<GenIndex>,
    /// `d_k` for each step taken; the sequence continues with zeros.
    pub d: Vec<u32>,
    pub core: usize,
}

/// Repeated `e^top` along `seq` until the highest core is reached.
pub fn string_data<F: Field>(rep: &PerfectReport<F>, seq: &GoodSequence, b: usize) -> Result<StringData> {
    if b >= rep.len() {
        return Err(domain(format!("no element {}", b)));
    }
    let core: BTreeSet<usize> = rep.core().into_iter().collect();
    // a full period containing every index strictly lowers the height of a
    // non-core element; shorter periods end with an error
    let limit = seq.prefix.len() + seq.period.len() * (rep.degrees[b].height() as usize + 1);
    let mut out = StringData { steps: Vec::new(), d: Vec::new(), core: b };
    let mut cur = b;
    for k in 0..limit.max(seq.prefix.len()) {
        if core.contains(&cur) {
            out.core = cur;
            return Ok(out);
        }
        let Some(g) = seq.get(k) else { break };
        let dk = rep.d.get(&(cur, g)).copied().unwrap_or(0);
        for _ in 0..dk {
            cur = rep.raise(g, cur).ok_or_else(|| domain(format!("e{:?} of {} is undefined", g, rep.labels[cur])))?;
        }
        out.steps.push(g);
        out.d.push(dk);
    }
    if core.contains(&cur) {
        out.core = cur;
        return Ok(out);
    }
    Err(domain(format!("sequence too short to reach the core from {}: partial d = {:?}", rep.labels[b], out.d)))
}

fn basis_vector<'a, F>(basis: &'a CandidateBasis<F>, rep: &PerfectReport<F>, b: usize) -> &'a [F] {
    let a = &rep.degrees[b];
    &basis.vectors[a].iter().find(|(l, _)| *l == rep.labels[b]).expect("label present").1
}

/// The crystal isomorphism between two perfect bases of one space with the
/// same core lines in `V/Σ f_il V`. Returns pairs `(b, ψ(b))`.
pub fn uniqueness_isomorphism<F: Field>(
    space: &PerfectSpace<F>,
    basis1: &CandidateBasis<F>,
    rep1: &PerfectReport<F>,
    basis2: &CandidateBasis<F>,
    rep2: &PerfectReport<F>,
) -> Result<Vec<(usize, usize)>> {
    if space.mode != Mode::Lower || rep1.mode != Mode::Lower || rep2.mode != Mode::Lower {
        return Err(domain("uniqueness is decided on lower perfect bases"));
    }
    if !rep1.passed || !rep2.passed {
        return Err(domain("both bases must be perfect"));
    }
    let mut lowered: BTreeMap<RootVector, Echelon<F>> = BTreeMap::new();
    let mut project =
        |a: &RootVector, v: &[F]| lowered.entry(a.clone()).or_insert_with(|| space.lowered_span(a)).reduce(v);
    let mut psi: BTreeMap<usize, usize> = BTreeMap::new();
    let core2 = rep2.core();
    for b in rep1.core() {
        let p1 = project(&rep1.degrees[b], basis_vector(basis1, rep1, b));
        let hits: Vec<usize> = core2
            .iter()
            .copied()
            .filter(|&c| rep2.degrees[c] == rep1.degrees[b])
            .filter(|&c| {
                proportional(&p1, &project(&rep2.degrees[c], basis_vector(basis2, rep2, c)))
                    .is_some_and(|x| !x.is_zero())
            })
            .collect();
        if hits.len() != 1 {
            return Err(domain(format!("core element {} has {} matching core lines", rep1.labels[b], hits.len())));
        }
        psi.insert(b, hits[0]);
    }
    if psi.len() != core2.len() {
        return Err(domain("the cores have different sizes"));
    }
    let seq = GoodSequence::cyclic(&space.gens);
    for b in 0..rep1.len() {
        let s = string_data(rep1, &seq, b)?;
        let mut x = psi[&s.core];
        for (g, &dk) in s.steps.iter().zip(&s.d).rev() {
            for _ in 0..dk {
                x = rep2
                    .lower(*g, x)
                    .ok_or_else(|| domain(format!("no image for {} along its string data", rep1.labels[b])))?;
            }
        }
        psi.insert(b, x);
    }
    let targets: BTreeSet<usize> = psi.values().copied().collect();
    if targets.len() != rep2.len() || psi.len() != rep1.len() {
        return Err(domain("the string-data map is not a bijection"));
    }
    for b in 0..rep1.len() {
        for &g in &space.gens {
            let l = rep1.lower(g, b).map(|t| psi[&t]);
            if l != rep2.lower(g, psi[&b]) || rep1.d.get(&(b, g)) != rep2.d.get(&(psi[&b], g)) {
                return Err(domain(format!(
                    "ψ does not commute with {} at {}",
                    space.datum.fmt_gen(g),
                    rep1.labels[b]
                )));
            }
        }
    }
    Ok(psi.into_iter().collect())
}

/// Adds to each basis vector a random element `δ_b` of the span of the other
/// vectors of its degree, subject to the linear conditions that keep the
/// filtration degrees, the maps and constants, and the core lines. Returns
/// the new basis and the dimension of the space of admissible `δ`.
pub fn perturb<F: Field, R: Rng>(
    space: &PerfectSpace<F>,
    basis: &CandidateBasis<F>,
    rep: &PerfectReport<F>,
    rng: &mut R,
) -> Result<(CandidateBasis<F>, usize)> {
    if !rep.passed || space.mode != Mode::Lower {
        return Err(domain("perturbation needs a passing lower report"));
    }
    let elems = basis.elements();
    // unknown x_(b, j): coefficient of the j-th vector of b's degree in δ_b
    let mut col: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (b, (a, k)) in elems.iter().enumerate() {
        for j in 0..basis.vectors[a].len() {
            if j != *k {
                let n = col.len();
                col.insert((b, j), n);
            }
        }
    }
    let ncols = col.len();
    if ncols == 0 {
        return Ok((basis.clone(), 0));
    }
    let offsets = basis.offsets();
    let mut rows: Vec<Vec<F>> = Vec::new();
    // adds the rows of `sub.reduce(Σ_j x_(b,j) M u_j - c Σ_j x_(t,j) u_j) = 0`
    let mut constrain = |sub: &Echelon<F>, terms: Vec<(usize, Vec<Vec<F>>, F)>| {
        let len = terms.iter().find_map(|t| t.1.first().map(|v| v.len()));
        let Some(len) = len else { return };
        let mut block = vec![vec![F::zero(); ncols]; len];
        for (b, images, c) in terms {
            for (j, img) in images.iter().enumerate() {
                let Some(&cidx) = col.get(&(b, j)) else { continue };
                let r = sub.reduce(img);
                for (row, x) in r.iter().enumerate() {
                    if !x.is_zero() {
                        block[row][cidx] = block[row][cidx].add_ref(&x.mul_ref(&c));
                    }
                }
            }
        }
        rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
    };
    let mut filts: BTreeMap<(GenIndex, RootVector), Vec<Echelon<F>>> = BTreeMap::new();
    let mut filt = |g: GenIndex, a: &RootVector| {
        filts.entry((g, a.clone())).or_insert_with(|| space.image_filtration(g, a)).clone()
    };
    let core: BTreeSet<usize> = rep.core().into_iter().collect();
    for (b, (a, _)) in elems.iter().enumerate() {
        let vs: Vec<Vec<F>> = basis.vectors[a].iter().map(|(_, v)| v.clone()).collect();
        if core.contains(&b) {
            constrain(&space.lowered_span(a), vec![(b, vs.clone(), F::one())]);
        }
        for &g in &space.gens {
            let db = rep.d[&(b, g)] as usize;
            let level = filt(g, a);
            constrain(&level[db], vec![(b, vs.clone(), F::one())]);
            let Some(t) = space.target(g, a).filter(|t| space.dim(t) > 0) else { continue };
            let images: Vec<Vec<F>> = vs.iter().map(|v| space.apply(g, a, v).expect("target exists").1).collect();
            let tl = filt(g, &t);
            let sub = tl.get(db + 2).cloned().unwrap_or_else(|| Echelon::new(space.dim(&t)));
            let mut terms = vec![(b, images, F::one())];
            if let Some(Some(tb)) = rep.maps.get(&(b, g)) {
                let c = rep.constants[&(b, g)].clone();
                let tvs: Vec<Vec<F>> = basis.vectors[&t].iter().map(|(_, v)| v.clone()).collect();
                debug_assert!(offsets[&t] <= *tb);
                terms.push((*tb, tvs, c.neg_ref()));
            }
            constrain(&sub, terms);
        }
    }
    let sol = if rows.is_empty() {
        (0..ncols)
            .map(|k| {
                let mut v = vec![F::zero(); ncols];
                v[k] = F::one();
                v
            })
            .collect()
    } else {
        Matrix::from_rows(rows, ncols).nullspace()
    };
    if sol.is_empty() {
        return Ok((basis.clone(), 0));
    }
    for _ in 0..16 {
        let mut x = vec![F::zero(); ncols];
        for s in &sol {
            let c = F::from_rational(&Rat::from_integer(rng.gen_range(-3i64..=3).into()));
            for (xi, si) in x.iter_mut().zip(s) {
                *xi = xi.add_ref(&si.mul_ref(&c));
            }
        }
        let mut out = basis.clone();
        for (b, (a, k)) in elems.iter().enumerate() {
            let mut v = basis.vectors[a][*k].1.clone();
            for (j, (_, u)) in basis.vectors[a].iter().enumerate() {
                if let Some(&cidx) = col.get(&(b, j)) {
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi = vi.add_ref(&x[cidx].mul_ref(ui));
                    }
                }
            }
            out.vectors.get_mut(a).unwrap()[*k].1 = v;
        }
        if out != *basis && verify_lower_perfect(space, &out)?.passed {
            return Ok((out, sol.len()));
        }
    }
    Err(domain("no admissible perturbation passed verification"))
}

/// Upper-mode space with `e_il` the transposes of `f_il`, the dual basis
/// (rows of the inverse coordinate matrix) and its upper report.
pub fn dualize<F: Field>(
    space: &PerfectSpace<F>,
    basis: &CandidateBasis<F>,
) -> Result<(PerfectSpace<F>, CandidateBasis<F>, PerfectReport<F>)> {
    if space.mode != Mode::Lower {
        return Err(domain("dualize expects a lower-mode space"));
    }
    let mut maps = BTreeMap::new();
    for ((g, src), m) in &space.maps {
        maps.insert((*g, src.plus_gen(*g)), m.transpose());
    }
    let upper = PerfectSpace::new(
        space.datum.clone(),
        space.lambda.clone(),
        space.gens.clone(),
        space.dims.clone(),
        maps,
        Mode::Upper,
    )?;
    let mut vectors = BTreeMap::new();
    for (a, vs) in &basis.vectors {
        let cols: Vec<Vec<F>> = vs.iter().map(|(_, v)| v.clone()).collect();
        let inv = Matrix::from_cols(&cols, space.dim(a))
            .inverse()
            .ok_or_else(|| domain(format!("vectors at degree {:?} are not a basis", a.0)))?;
        let dual = vs.iter().enumerate().map(|(k, (l, _))| (l.clone(), inv.row(k).to_vec())).collect();
        vectors.insert(a.clone(), dual);
    }
    let dual = CandidateBasis { vectors };
    let rep = verify_upper_perfect(&upper, &dual)?;
    Ok((upper, dual, rep))
}

/// `d = d^∨` and `(f b)^∨`-compatibility of a lower report and the upper
/// report of its dual basis.
pub fn duality_checks<F: Field>(lower: &PerfectReport<F>, upper: &PerfectReport<F>) -> Vec<String> {
    let mut out = Vec::new();
    if lower.labels != upper.labels {
        out.push("the reports index different elements".into());
        return out;
    }
    for (&(b, g), &dv) in &lower.d {
        if upper.d.get(&(b, g)) != Some(&dv) {
            out.push(format!("d and d^∨ differ at {} for ({}, {})", lower.labels[b], g.i, g.l));
        }
        if upper.raise(g, b) != lower.raise(g, b) {
            out.push(format!("E^∨ and e differ at {} for ({}, {})", lower.labels[b], g.i, g.l));
        }
    }
    out
}

/// Filtration properties of a passing lower basis, for `n ≤ nmax`:
/// `f^n V` is spanned by `{d ≥ n}`, the classes of `{d = n}` are a basis of
/// `f^n V / f^{n+1} V`, and `d(f b) = d(b) + 1`.
pub fn filtration_checks<F: Field>(
    space: &PerfectSpace<F>,
    basis: &CandidateBasis<F>,
    rep: &PerfectReport<F>,
    nmax: u32,
) -> Vec<String> {
    let mut out = Vec::new();
    for &g in &space.gens {
        for a in space.dims.keys() {
            let filt = space.image_filtration(g, a);
            let members: Vec<(usize, &Vec<F>)> = (0..rep.len())
                .filter(|&b| rep.degrees[b] == *a)
                .map(|b| (b, &basis.vectors[a].iter().find(|(l, _)| *l == rep.labels[b]).unwrap().1))
                .collect();
            for n in 0..=nmax {
                let level = filt.get(n as usize).map(|e| e.dim()).unwrap_or(0);
                let deep: Vec<&(usize, &Vec<F>)> = members.iter().filter(|(b, _)| rep.d[&(*b, g)] >= n).collect();
                let inside = deep.iter().all(|(_, v)| filt.get(n as usize).is_some_and(|e| e.contains(v)));
                if deep.len() != level || !inside {
                    out.push(format!(
                        "f{}^{} V at {:?} is not spanned by its basis elements",
                        space.datum.fmt_gen(g),
                        n,
                        a.0
                    ));
                }
                let next = filt.get(n as usize + 1).cloned().unwrap_or_else(|| Echelon::new(space.dim(a)));
                let mut quotient = next.clone();
                let exact: Vec<&(usize, &Vec<F>)> = members.iter().filter(|(b, _)| rep.d[&(*b, g)] == n).collect();
                let independent = exact.iter().all(|(_, v)| quotient.insert(v));
                if !independent || exact.len() + next.dim() != level {
                    out.push(format!("classes of d = {} do not form a basis at {:?}", n, a.0));
                }
            }
        }
        for b in 0..rep.len() {
            if let Some(Some(t)) = rep.maps.get(&(b, g)) {
                if rep.d[&(*t, g)] != rep.d[&(b, g)] + 1 {
                    out.push(format!("d{} does not increase along f at {}", space.datum.fmt_gen(g), rep.labels[b]));
                }
            }
        }
    }
    out
}

/// `ker e^k = span{b^∨ : d^∨ < k}` for `k ≤ kmax`, by rank.
pub fn kernel_checks<F: Field>(
    space: &PerfectSpace<F>,
    basis: &CandidateBasis<F>,
    rep: &PerfectReport<F>,
    kmax: u32,
) -> Vec<String> {
    let mut out = Vec::new();
    for &g in &space.gens {
        for a in space.dims.keys() {
            let kern = space.kernel_filtration(g, a, kmax);
            for k in 0..=kmax {
                let small: Vec<&[F]> = (0..rep.len())
                    .filter(|&b| rep.degrees[b] == *a && rep.d[&(b, g)] < k)
                    .map(|b| basis_vector(basis, rep, b))
                    .collect();
                let ok = small.len() == kern[k as usize].dim() && small.iter().all(|v| kern[k as usize].contains(v));
                if !ok {
                    out.push(format!(
                        "ker e{}^{} at {:?} is not spanned by d^∨ < {}",
                        space.datum.fmt_gen(g),
                        k,
                        a.0,
                        k
                    ));
                }
            }
        }
    }
    out
}

/// Compares `d(i, b)` (padded with zeros) lexicographically with `a`.
fn lex_ge(d: &[u32], a: &[u32]) -> bool {
    for k in 0..d.len().max(a.len()) {
        let x = d.get(k).copied().unwrap_or(0);
        let y = a.get(k).copied().unwrap_or(0);
        if x != y {
            return x > y;
        }
    }
    true
}

/// Image of `f_{i_1}^{a_1} ... f_{i_r}^{a_r}` at `α` (the rightmost acts first).
fn word_image<F: Field>(space: &PerfectSpace<F>, word: &[(GenIndex, u32)], alpha: &RootVector) -> Echelon<F> {
    let dim = space.dim(alpha);
    let mut e = Echelon::new(dim);
    let mut src = Some(alpha.clone());
    for &(g, n) in word {
        for _ in 0..n {
            src = src.and_then(|a| a.minus_gen(g));
        }
    }
    let Some(src) = src.filter(|s| space.dim(s) > 0) else { return e };
    for k in 0..space.dim(&src) {
        let mut v = vec![F::zero(); space.dim(&src)];
        v[k] = F::one();
        let mut cur = Some((src.clone(), v));
        for &(g, n) in word.iter().rev() {
            for _ in 0..n {
                cur = cur.and_then(|(a, v)| space.apply(g, &a, &v));
            }
        }
        if let Some((_, v)) = cur {
            e.insert(&v);
        }
    }
    e
}

/// `V^{≥ i, a} = span{b : d(i, b) ≥ a}` for every `a` of length at most
/// `len` with entries summing to at most `total`.
pub fn lexicographic_checks<F: Field>(
    space: &PerfectSpace<F>,
    basis: &CandidateBasis<F>,
    rep: &PerfectReport<F>,
    seq: &GoodSequence,
    len: usize,
    total: u32,
) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut data = Vec::new();
    for b in 0..rep.len() {
        let s = string_data(rep, seq, b)?;
        let mut d = s.d.clone();
        // along the good sequence indices beyond the steps contribute zeros
        d.truncate(len.max(d.len()));
        data.push(d);
    }
    let steps: Vec<GenIndex> = (0..len).map(|k| seq.get(k).expect("sequence long enough")).collect();
    let mut seqs: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for s in &seqs {
            let used: u32 = s.iter().sum();
            for x in 0..=(total - used) {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        seqs = next;
    }
    for a in &seqs {
        for alpha in space.dims.keys() {
            // V^{>i,a}: raise one entry and drop the tail, plus V^{i,a} itself
            let mut e = word_image(space, &steps.iter().copied().zip(a.iter().copied()).collect::<Vec<_>>(), alpha);
            let mut full = Echelon::new(space.dim(alpha));
            for k in 0..a.len() {
                let mut w: Vec<(GenIndex, u32)> = steps[..=k].iter().copied().zip(a[..=k].iter().copied()).collect();
                w[k].1 += 1;
                let img = word_image(space, &w, alpha);
                for j in 0..space.dim(alpha) {
                    let mut v = vec![F::zero(); space.dim(alpha)];
                    v[j] = F::one();
                    let r = img.reduce(&v);
                    let diff: Vec<F> = v.iter().zip(&r).map(|(x, y)| x.sub_ref(y)).collect();
                    full.insert(&diff);
                }
            }
            for j in 0..space.dim(alpha) {
                let mut v = vec![F::zero(); space.dim(alpha)];
                v[j] = F::one();
                let r = e.reduce(&v);
                let diff: Vec<F> = v.iter().zip(&r).map(|(x, y)| x.sub_ref(y)).collect();
                full.insert(&diff);
            }
            e = full;
            let members: Vec<usize> =
                (0..rep.len()).filter(|&b| rep.degrees[b] == *alpha && lex_ge(&data[b], a)).collect();
            let ok = members.len() == e.dim() && members.iter().all(|&b| e.contains(basis_vector(basis, rep, b)));
            if !ok {
                out.push(format!("V^(>=, {:?}) at {:?} is not spanned by its basis elements", a, alpha.0));
            }
        }
    }
    Ok(out)
}

/// `p_H` is injective on the core and its image is a basis of `V_H`.
pub fn core_checks<F: Field>(
    space: &PerfectSpace<F>,
    basis: &CandidateBasis<F>,
    rep: &PerfectReport<F>,
) -> Vec<String> {
    let mut out = Vec::new();
    let core = rep.core();
    for a in space.dims.keys() {
        let low = space.lowered_span(a);
        let mut e = Echelon::new(space.dim(a));
        let here: Vec<usize> = core.iter().copied().filter(|&b| rep.degrees[b] == *a).collect();
        let independent = here.iter().all(|&b| e.insert(&low.reduce(basis_vector(basis, rep, b))));
        if !independent || here.len() + low.dim() != space.dim(a) {
            out.push(format!("core images at {:?} are not a basis of the quotient", a.0));
        }
    }
    out
}

/// Crystal-limit data of a crystal graph: `f̃_il` as partial permutation
/// matrices in the crystal basis, with the crystal basis as candidate.
pub fn crystal_limit_data(graph: &CrystalGraph) -> Result<(RatSpace, CandidateBasis<Rat>)> {
    let datum = graph.datum.clone();
    let mut pos: Vec<usize> = vec![0; graph.len()];
    let mut dims: BTreeMap<RootVector, usize> = BTreeMap::new();
    for (k, node) in graph.nodes.iter().enumerate() {
        let c = dims.entry(node.root.clone()).or_insert(0);
        pos[k] = *c;
        *c += 1;
    }
    let mut maps: BTreeMap<(GenIndex, RootVector), Matrix<Rat>> = BTreeMap::new();
    for a in dims.keys() {
        for &g in &graph.gens {
            if let Some(&dt) = dims.get(&a.plus_gen(g)) {
                maps.insert((g, a.clone()), Matrix::zeros(dt, dims[a]));
            }
        }
    }
    for (s, t, g) in graph.edges() {
        let m = maps
            .get_mut(&(g, graph.nodes[s].root.clone()))
            .ok_or_else(|| Error::Internal("edge outside the data".into()))?;
        m[(pos[t], pos[s])] = Rat::from_integer(1.into());
    }
    let lambda = graph.nodes.first().map(|n| n.wt.clone()).unwrap_or_else(|| datum.zero_weight());
    let mut vectors: BTreeMap<RootVector, Vec<(String, Vec<Rat>)>> = BTreeMap::new();
    for (k, node) in graph.nodes.iter().enumerate() {
        let mut v = vec![Rat::from_integer(0.into()); dims[&node.root]];
        v[pos[k]] = Rat::from_integer(1.into());
        vectors.entry(node.root.clone()).or_default().push((format!("b{}", k), v));
    }
    let space = PerfectSpace::new(datum, lambda, graph.gens.clone(), dims, maps, Mode::Lower)?;
    Ok((space, CandidateBasis { vectors }))
}

/// Report element index of graph node `k` in `crystal_limit_data` order.
pub fn limit_index(rep: &PerfectReport<Rat>, k: usize) -> Option<usize> {
    let l = format!("b{}", k);
    rep.labels.iter().position(|x| *x == l)
}

#[derive(Serialize, Deserialize)]
struct MapDoc {
    gen: [u32; 2],
    source: Vec<u32>,
    rows: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct DegreeDoc {
    degree: Vec<u32>,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct SpaceDoc {
    datum: String,
    lambda: Weight,
    mode: Mode,
    gens: Vec<[u32; 2]>,
    degrees: Vec<DegreeDoc>,
    maps: Vec<MapDoc>,
}

#[derive(Serialize, Deserialize)]
struct VectorDoc {
    degree: Vec<u32>,
    label: String,
    coords: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct BasisDoc {
    vectors: Vec<VectorDoc>,
}

fn parse_rat(s: &str) -> Result<Rat> {
    s.trim().parse::<Rat>().map_err(|_| Error::Parse { line: 0, msg: format!("bad rational `{}`", s) })
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), msg: e.to_string() }
}

/// JSON document: datum text, `λ`, mode, operator list `[vertex id, l]`,
/// degrees with dimensions, and row-major rational matrices.
pub fn space_to_json(space: &RatSpace) -> String {
    let d = &space.datum;
    let doc = SpaceDoc {
        datum: render_datum(d),
        lambda: space.lambda.clone(),
        mode: space.mode,
        gens: space.gens.iter().map(|g| [d.id(g.i), g.l]).collect(),
        degrees: space.dims.iter().map(|(a, &n)| DegreeDoc { degree: a.0.clone(), dim: n }).collect(),
        maps: space
            .maps
            .iter()
            .map(|((g, a), m)| MapDoc {
                gen: [d.id(g.i), g.l],
                source: a.0.clone(),
                rows: (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn space_from_json(text: &str) -> Result<RatSpace> {
    let doc: SpaceDoc = serde_json::from_str(text).map_err(json_err)?;
    let datum = Arc::new(parse_datum(&doc.datum)?.datum);
    let gen = |[id, l]: [u32; 2]| -> Result<GenIndex> { Ok(GenIndex::new(datum.index_of(id)?, l)) };
    let gens = doc.gens.iter().map(|&g| gen(g)).collect::<Result<Vec<_>>>()?;
    let dims = doc.degrees.iter().map(|x| (RootVector(x.degree.clone()), x.dim)).collect();
    let mut maps = BTreeMap::new();
    for m in &doc.maps {
        let cols = m.rows.first().map(|r| r.len()).unwrap_or(0);
        if m.rows.iter().any(|r| r.len() != cols) {
            return Err(domain("ragged matrix"));
        }
        let rows = m
            .rows
            .iter()
            .map(|r| r.iter().map(|x| parse_rat(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mat = if rows.is_empty() { Matrix::zeros(0, 0) } else { Matrix::from_rows(rows, cols) };
        maps.insert((gen(m.gen)?, RootVector(m.source.clone())), mat);
    }
    let datum2 = datum.clone();
    PerfectSpace::new(datum2, doc.lambda, gens, dims, maps, doc.mode)
}

pub fn basis_to_json(basis: &CandidateBasis<Rat>) -> String {
    let doc = BasisDoc {
        vectors: basis
            .vectors
            .iter()
            .flat_map(|(a, vs)| {
                vs.iter().map(move |(l, v)| VectorDoc {
                    degree: a.0.clone(),
                    label: l.clone(),
                    coords: v.iter().map(|x| x.to_string()).collect(),
                })
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn basis_from_json(text: &str) -> Result<CandidateBasis<Rat>> {
    let doc: BasisDoc = serde_json::from_str(text).map_err(json_err)?;
    let mut vectors: BTreeMap<RootVector, Vec<(String, Vec<Rat>)>> = BTreeMap::new();
    let mut labels = BTreeSet::new();
    for v in doc.vectors {
        if !labels.insert(v.label.clone()) {
            return Err(domain(format!("duplicate label `{}`", v.label)));
        }
        let coords = v.coords.iter().map(|x| parse_rat(x)).collect::<Result<Vec<_>>>()?;
        vectors.entry(RootVector(v.degree)).or_default().push((v.label, coords));
    }
    Ok(CandidateBasis { vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binf::{build_binf, build_crystal_lambda};
    use crate::crystal::{find_isomorphism, validate_axioms};
    use crate::uqminus::DEFAULT_WORD_CAP;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn iso_data(h: u32) -> (CrystalGraph, RatSpace, CandidateBasis<Rat>) {
        let b = build_binf(BorcherdsCartanDatum::rank_one(0), h, DEFAULT_WORD_CAP).unwrap();
        let (s, basis) = crystal_limit_data(&b.graph).unwrap();
        (b.graph, s, basis)
    }

    #[test]
    fn d_values_on_isotropic_data() {
        let (graph, s, basis) = iso_data(4);
        let g11 = GenIndex::new(0, 1);
        let zero = RootVector(vec![0]);
        assert_eq!(s.d_lower(g11, &zero, &[r(1)]).unwrap(), 0);
        // f̃_11 f̃_11 1 is the residue of b²/2
        let one = graph.f[&(0, g11)].unwrap();
        let two = graph.f[&(one, g11)].unwrap();
        let rep = verify_lower_perfect(&s, &basis).unwrap();
        assert!(rep.passed, "{:?}", rep.violations);
        assert_eq!(rep.d[&(limit_index(&rep, two).unwrap(), g11)], 2);
        assert!(rep.constants.values().all(|c| *c == r(1)));
        assert!(s.d_lower(g11, &zero, &[r(0)]).is_err());
    }

    #[test]
    fn rescaling_and_mixing() {
        let (graph, s, basis) = iso_data(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let scaled = basis.rescaled(&mut rng);
        let rep = verify_lower_perfect(&s, &scaled).unwrap();
        assert!(rep.passed);
        let c1 = induced_crystal(&s, &rep).unwrap();
        let c0 = induced_crystal(&s, &verify_lower_perfect(&s, &basis).unwrap()).unwrap();
        assert_eq!(find_isomorphism(&c1, &0, &c0, &0, 3).unwrap().len(), graph.len());
        // degree 2 holds (2) and (1,1), which have different f̃ images
        let mut mixed = basis.clone();
        let two = RootVector(vec![2]);
        let vs = mixed.vectors.get_mut(&two).unwrap();
        let (a, b) = (vs[0].1.clone(), vs[1].1.clone());
        vs[0].1 = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        vs[1].1 = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        let rep = verify_lower_perfect(&s, &mixed).unwrap();
        assert!(!rep.passed);
        assert!(!rep.violations.is_empty());
    }

    #[test]
    fn induced_crystal_matches_graph() {
        let (graph, s, basis) = iso_data(4);
        let rep = verify_lower_perfect(&s, &basis).unwrap();
        let c = induced_crystal(&s, &rep).unwrap();
        assert!(validate_axioms(&c, 4).passed());
        let src = limit_index(&rep, 0).unwrap();
        assert_eq!(find_isomorphism(&c, &src, &graph, &0, 4).unwrap().len(), graph.len());
        assert!(filtration_checks(&s, &basis, &rep, 4).is_empty());
        assert!(core_checks(&s, &basis, &rep).is_empty());
    }

    #[test]
    fn string_data_examples() {
        let (graph, s, basis) = iso_data(4);
        let rep = verify_lower_perfect(&s, &basis).unwrap();
        let (g1, g2) = (GenIndex::new(0, 1), GenIndex::new(0, 2));
        // the partition (2,1) is f̃_11 f̃_12 1
        let node = graph.f[&(graph.f[&(0, g2)].unwrap(), g1)].unwrap();
        let b = limit_index(&rep, node).unwrap();
        let seq = GoodSequence { prefix: Vec::new(), period: vec![g1, g2] };
        let sd = string_data(&rep, &seq, b).unwrap();
        assert_eq!(sd.d, vec![1, 1]);
        assert_eq!(sd.core, limit_index(&rep, 0).unwrap());
        let top = string_data(&rep, &seq, sd.core).unwrap();
        assert!(top.d.is_empty());
        let short = GoodSequence { prefix: vec![g1], period: Vec::new() };
        assert!(string_data(&rep, &short, b).is_err());
        let sl2 =
            build_crystal_lambda(BorcherdsCartanDatum::rank_one(2), Weight::from_fund(vec![3]), 3, DEFAULT_WORD_CAP)
                .unwrap();
        let (s2, b2) = crystal_limit_data(&sl2.graph).unwrap();
        let rep2 = verify_lower_perfect(&s2, &b2).unwrap();
        let last = limit_index(&rep2, 3).unwrap();
        let sd = string_data(&rep2, &GoodSequence::cyclic(&s2.gens), last).unwrap();
        assert_eq!(sd.d, vec![3]);
    }

    #[test]
    fn uniqueness_and_perturbation() {
        let datum = BorcherdsCartanDatum::mixed();
        let b = build_binf(datum, 3, DEFAULT_WORD_CAP).unwrap();
        let (s, basis) = crystal_limit_data(&b.graph).unwrap();
        let rep = verify_lower_perfect(&s, &basis).unwrap();
        assert!(rep.passed);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let scaled = basis.rescaled(&mut rng);
        let rep_s = verify_lower_perfect(&s, &scaled).unwrap();
        let psi = uniqueness_isomorphism(&s, &basis, &rep, &scaled, &rep_s).unwrap();
        assert!(psi.iter().all(|(a, b)| a == b));
        let (moved, dim) = perturb(&s, &basis, &rep, &mut rng).unwrap();
        assert!(dim > 0);
        assert_ne!(moved, basis);
        let rep_m = verify_lower_perfect(&s, &moved).unwrap();
        let psi = uniqueness_isomorphism(&s, &basis, &rep, &moved, &rep_m).unwrap();
        assert_eq!(psi.len(), rep.len());
    }

    #[test]
    fn mismatched_cores() {
        let d = Arc::new(BorcherdsCartanDatum::rank_one(0));
        let zero = RootVector(vec![0]);
        let dims = BTreeMap::from([(zero.clone(), 2)]);
        let s = PerfectSpace::new(
            d,
            Weight::from_fund(vec![0]),
            vec![GenIndex::new(0, 1)],
            dims,
            BTreeMap::new(),
            Mode::Lower,
        )
        .unwrap();
        let basis = CandidateBasis {
            vectors: BTreeMap::from([(
                zero.clone(),
                vec![("x".into(), vec![r(1), r(0)]), ("y".into(), vec![r(0), r(1)])],
            )]),
        };
        let other = CandidateBasis {
            vectors: BTreeMap::from([(zero, vec![("x".into(), vec![r(1), r(0)]), ("y".into(), vec![r(1), r(1)])])]),
        };
        let r1 = verify_lower_perfect(&s, &basis).unwrap();
        let r2 = verify_lower_perfect(&s, &other).unwrap();
        assert!(r1.passed && r2.passed);
        assert!(uniqueness_isomorphism(&s, &basis, &r1, &other, &r2).is_err());
    }

    #[test]
    fn duality() {
        let (_, s, basis) = iso_data(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let scaled = basis.rescaled(&mut rng);
        let rep = verify_lower_perfect(&s, &scaled).unwrap();
        let (up, dual, urep) = dualize(&s, &scaled).unwrap();
        assert!(urep.passed, "{:?}", urep.violations);
        assert!(duality_checks(&rep, &urep).is_empty());
        assert!(kernel_checks(&up, &dual, &urep, 3).is_empty());
        let c_low = induced_crystal(&s, &rep).unwrap();
        let c_up = induced_crystal(&up, &urep).unwrap();
        assert!(find_isomorphism(&c_low, &0, &c_up, &0, 3).is_ok());
    }

    #[test]
    fn lexicographic_filtration() {
        let b = build_binf(BorcherdsCartanDatum::mixed(), 3, DEFAULT_WORD_CAP).unwrap();
        let (s, basis) = crystal_limit_data(&b.graph).unwrap();
        let rep = verify_lower_perfect(&s, &basis).unwrap();
        let seq = GoodSequence::cyclic(&s.gens);
        let bad = lexicographic_checks(&s, &basis, &rep, &seq, 3, 3).unwrap();
        assert!(bad.is_empty(), "{:?}", bad);
    }

    #[test]
    fn json_roundtrip_and_shapes() {
        let (_, s, basis) = iso_data(2);
        let s2 = space_from_json(&space_to_json(&s)).unwrap();
        assert_eq!(s2.dims, s.dims);
        assert_eq!(s2.maps, s.maps);
        assert_eq!(basis_from_json(&basis_to_json(&basis)).unwrap(), basis);
        let mut bad = s.maps.clone();
        let key = bad.keys().next().unwrap().clone();
        bad.insert(key, Matrix::zeros(5, 5));
        assert!(PerfectSpace::new(s.datum.clone(), s.lambda.clone(), s.gens.clone(), s.dims.clone(), bad, Mode::Lower)
            .is_err());
    }

    #[test]
    fn limit_of_q_data() {
        let (_, s, basis) = iso_data(2);
        let q = s.map_scalars(|x| ScalarQ::from_rational(x.clone()) + ScalarQ::q() * ScalarQ::from_int(3));
        let back = q.at_q_zero().unwrap();
        assert_eq!(back.maps, s.maps);
        assert!(verify_lower_perfect(&back, &basis).unwrap().passed);
    }
}
