//! Abstract crystals: axiom checking, tensor products, rank-one models and
//! isomorphism search on height-bounded portions.
//!
//! Every crystal here is explored from designated source elements by
//! applying `f̃_il`; `depth` is the height of `wt(source) - wt(b)` and an
//! operator `f̃_il` is only queried when `depth + l` stays within the bound.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use crate::cartan::{BorcherdsCartanDatum, Composition, GenIndex, VertexKind, Weight};
use crate::lattice::CrystalGraph;
use crate::{Error, Result};

/// `Z ∪ {-∞}`; `-∞` absorbs addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stat {
    NegInf,
    Fin(i64),
}

impl Stat {
    pub fn plus(self, k: i64) -> Stat {
        match self {
            Stat::NegInf => Stat::NegInf,
            Stat::Fin(x) => Stat::Fin(x + k),
        }
    }
}

impl fmt::Display for Stat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stat::NegInf => write!(f, "-inf"),
            Stat::Fin(x) => write!(f, "{}", x),
        }
    }
}

pub trait AbstractCrystal {
    type Elem: Clone + Eq + Hash + Ord + fmt::Debug;

    fn datum(&self) -> &BorcherdsCartanDatum;
    /// The operator indices `(i,l)` this crystal is explored with.
    fn gens(&self) -> Vec<GenIndex>;
    fn sources(&self) -> Vec<Self::Elem>;
    fn depth(&self, b: &Self::Elem) -> u32;
    fn wt(&self, b: &Self::Elem) -> Weight;
    fn eps(&self, i: usize, b: &Self::Elem) -> Stat;
    fn phi(&self, i: usize, b: &Self::Elem) -> Stat;
    fn e(&self, g: GenIndex, b: &Self::Elem) -> Option<Self::Elem>;
    fn f(&self, g: GenIndex, b: &Self::Elem) -> Option<Self::Elem>;

    fn label(&self, b: &Self::Elem) -> String {
        format!("{:?}", b)
    }
}

/// Elements reachable from `sources` within depth `bound`, in BFS order.
pub fn generate<C: AbstractCrystal>(c: &C, sources: &[C::Elem], bound: u32) -> Vec<C::Elem> {
    let gens = c.gens();
    let mut seen: HashMap<C::Elem, ()> = HashMap::new();
    let mut order = Vec::new();
    let mut queue: VecDeque<C::Elem> = VecDeque::new();
    for s in sources {
        if seen.insert(s.clone(), ()).is_none() {
            queue.push_back(s.clone());
        }
    }
    while let Some(b) = queue.pop_front() {
        let d = c.depth(&b);
        for &g in &gens {
            if d + g.l > bound {
                continue;
            }
            if let Some(x) = c.f(g, &b) {
                if seen.insert(x.clone(), ()).is_none() {
                    queue.push_back(x);
                }
            }
        }
        order.push(b);
    }
    order
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub witness: String,
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub checked: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks axioms (a)-(f) on the portion generated from all sources.
pub fn validate_axioms<C: AbstractCrystal>(c: &C, bound: u32) -> AxiomReport {
    let d = c.datum();
    let gens = c.gens();
    let elems = generate(c, &c.sources(), bound);
    let mut rep = AxiomReport { checked: elems.len(), violations: Vec::new() };
    let mut bad = |axiom: &'static str, witness: String| rep.violations.push(AxiomViolation { axiom, witness });
    for b in &elems {
        let wt = c.wt(b);
        let depth = c.depth(b);
        for i in 0..d.n() {
            let h = d.pairing(i, &wt);
            if c.phi(i, b) != c.eps(i, b).plus(h) {
                bad("(b)", format!("{} at vertex {}", c.label(b), d.id(i)));
            }
        }
        for &g in &gens {
            let i = g.i;
            let l = g.l as i64;
            let fb = if depth + g.l <= bound { Some(c.f(g, b)) } else { None };
            let eb = c.e(g, b);
            if c.phi(i, b) == Stat::NegInf && (eb.is_some() || matches!(fb, Some(Some(_)))) {
                bad("(f)", format!("{} {}", c.label(b), d.fmt_gen(g)));
            }
            if let Some(Some(x)) = &fb {
                if c.wt(x) != wt.shift_gen(g, false) {
                    bad("(a)", format!("wt of f{} {}", d.fmt_gen(g), c.label(b)));
                }
                if c.e(g, x).as_ref() != Some(b) {
                    bad("(c)", format!("e{} f{} {} != {}", d.fmt_gen(g), d.fmt_gen(g), c.label(b), c.label(b)));
                }
                let (de, dp) = if d.is_real(i) { (1, -1) } else { (0, -l * d.a[i][i]) };
                let ax = if d.is_real(i) { "(d)(1)" } else { "(e)(1')" };
                if c.eps(i, x) != c.eps(i, b).plus(de) || c.phi(i, x) != c.phi(i, b).plus(dp) {
                    bad(ax, format!("f{} {}", d.fmt_gen(g), c.label(b)));
                }
            }
            if let Some(x) = &eb {
                if c.wt(x) != wt.shift_gen(g, true) {
                    bad("(a)", format!("wt of e{} {}", d.fmt_gen(g), c.label(b)));
                }
                if c.f(g, x).as_ref() != Some(b) {
                    bad("(c)", format!("f{} e{} {} != {}", d.fmt_gen(g), d.fmt_gen(g), c.label(b), c.label(b)));
                }
                let (de, dp) = if d.is_real(i) { (-1, 1) } else { (0, l * d.a[i][i]) };
                let ax = if d.is_real(i) { "(d)(2)" } else { "(e)(2')" };
                if c.eps(i, x) != c.eps(i, b).plus(de) || c.phi(i, x) != c.phi(i, b).plus(dp) {
                    bad(ax, format!("e{} {}", d.fmt_gen(g), c.label(b)));
                }
            }
        }
    }
    rep
}

impl AbstractCrystal for CrystalGraph {
    type Elem = usize;
    fn datum(&self) -> &BorcherdsCartanDatum {
        &self.datum
    }
    fn gens(&self) -> Vec<GenIndex> {
        self.gens.clone()
    }
    fn sources(&self) -> Vec<usize> {
        vec![0]
    }
    fn depth(&self, b: &usize) -> u32 {
        self.nodes[*b].root.height()
    }
    fn wt(&self, b: &usize) -> Weight {
        self.nodes[*b].wt.clone()
    }
    fn eps(&self, i: usize, b: &usize) -> Stat {
        Stat::Fin(self.nodes[*b].eps[i])
    }
    fn phi(&self, i: usize, b: &usize) -> Stat {
        Stat::Fin(self.nodes[*b].phi[i])
    }
    fn e(&self, g: GenIndex, b: &usize) -> Option<usize> {
        self.e.get(&(*b, g)).copied().flatten()
    }
    fn f(&self, g: GenIndex, b: &usize) -> Option<usize> {
        self.f.get(&(*b, g)).copied().flatten()
    }
    fn label(&self, b: &usize) -> String {
        format!("#{}", b)
    }
}

/// A crystal given by explicit tables; every field may be edited.
#[derive(Clone, Debug)]
pub struct TableCrystal {
    pub datum: BorcherdsCartanDatum,
    pub gens: Vec<GenIndex>,
    pub labels: Vec<String>,
    pub wt: Vec<Weight>,
    pub depth: Vec<u32>,
    pub eps: Vec<Vec<Stat>>,
    pub phi: Vec<Vec<Stat>>,
    pub f: BTreeMap<(usize, GenIndex), usize>,
    pub e: BTreeMap<(usize, GenIndex), usize>,
    pub sources: Vec<usize>,
}

impl TableCrystal {
    /// Tabulates the portion of `c` generated within `bound`.
    pub fn from_crystal<C: AbstractCrystal>(c: &C, bound: u32) -> TableCrystal {
        let d = c.datum().clone();
        let elems = generate(c, &c.sources(), bound);
        let index: HashMap<C::Elem, usize> = elems.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect();
        let gens = c.gens();
        let mut t = TableCrystal {
            gens: gens.clone(),
            labels: elems.iter().map(|b| c.label(b)).collect(),
            wt: elems.iter().map(|b| c.wt(b)).collect(),
            depth: elems.iter().map(|b| c.depth(b)).collect(),
            eps: elems.iter().map(|b| (0..d.n()).map(|i| c.eps(i, b)).collect()).collect(),
            phi: elems.iter().map(|b| (0..d.n()).map(|i| c.phi(i, b)).collect()).collect(),
            f: BTreeMap::new(),
            e: BTreeMap::new(),
            sources: c.sources().iter().filter_map(|s| index.get(s).copied()).collect(),
            datum: d,
        };
        for (k, b) in elems.iter().enumerate() {
            for &g in &gens {
                if t.depth[k] + g.l <= bound {
                    if let Some(x) = c.f(g, b).and_then(|x| index.get(&x).copied()) {
                        t.f.insert((k, g), x);
                    }
                }
                if let Some(x) = c.e(g, b).and_then(|x| index.get(&x).copied()) {
                    t.e.insert((k, g), x);
                }
            }
        }
        t
    }
}

impl AbstractCrystal for TableCrystal {
    type Elem = usize;
    fn datum(&self) -> &BorcherdsCartanDatum {
        &self.datum
    }
    fn gens(&self) -> Vec<GenIndex> {
        self.gens.clone()
    }
    fn sources(&self) -> Vec<usize> {
        self.sources.clone()
    }
    fn depth(&self, b: &usize) -> u32 {
        self.depth[*b]
    }
    fn wt(&self, b: &usize) -> Weight {
        self.wt[*b].clone()
    }
    fn eps(&self, i: usize, b: &usize) -> Stat {
        self.eps[*b][i]
    }
    fn phi(&self, i: usize, b: &usize) -> Stat {
        self.phi[*b][i]
    }
    fn e(&self, g: GenIndex, b: &usize) -> Option<usize> {
        self.e.get(&(*b, g)).copied()
    }
    fn f(&self, g: GenIndex, b: &usize) -> Option<usize> {
        self.f.get(&(*b, g)).copied()
    }
    fn label(&self, b: &usize) -> String {
        self.labels[*b].clone()
    }
}

/// Which rule a tensor product uses at imaginary vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorRule {
    /// The general rule through `ε` and `φ`.
    Full,
    /// The rule for highest weight crystals with `ε_i ≡ 0`, through
    /// `m_1 = <h_i, wt(b_1)>` only.
    Simplified,
}

pub struct Tensor<'a, A: AbstractCrystal, B: AbstractCrystal> {
    pub left: &'a A,
    pub right: &'a B,
    pub rule: TensorRule,
}

pub fn tensor<'a, A: AbstractCrystal, B: AbstractCrystal>(left: &'a A, right: &'a B) -> Tensor<'a, A, B> {
    Tensor { left, right, rule: TensorRule::Full }
}

impl<A: AbstractCrystal, B: AbstractCrystal> Tensor<'_, A, B> {
    fn m1(&self, i: usize, b1: &A::Elem) -> i64 {
        self.left.datum().pairing(i, &self.left.wt(b1))
    }
}

impl<A: AbstractCrystal, B: AbstractCrystal> AbstractCrystal for Tensor<'_, A, B> {
    type Elem = (A::Elem, B::Elem);

    fn datum(&self) -> &BorcherdsCartanDatum {
        self.left.datum()
    }
    fn gens(&self) -> Vec<GenIndex> {
        let r = self.right.gens();
        self.left.gens().into_iter().filter(|g| r.contains(g)).collect()
    }
    fn sources(&self) -> Vec<Self::Elem> {
        let mut out = Vec::new();
        for a in self.left.sources() {
            for b in self.right.sources() {
                out.push((a.clone(), b));
            }
        }
        out
    }
    fn depth(&self, b: &Self::Elem) -> u32 {
        self.left.depth(&b.0) + self.right.depth(&b.1)
    }
    fn wt(&self, b: &Self::Elem) -> Weight {
        self.left.wt(&b.0).add(&self.right.wt(&b.1))
    }
    fn eps(&self, i: usize, b: &Self::Elem) -> Stat {
        if self.rule == TensorRule::Simplified && !self.datum().is_real(i) {
            return Stat::Fin(0);
        }
        let h1 = self.m1(i, &b.0);
        self.left.eps(i, &b.0).max(self.right.eps(i, &b.1).plus(-h1))
    }
    fn phi(&self, i: usize, b: &Self::Elem) -> Stat {
        if self.rule == TensorRule::Simplified && !self.datum().is_real(i) {
            let m2 = self.right.datum().pairing(i, &self.right.wt(&b.1));
            return Stat::Fin(self.m1(i, &b.0) + m2);
        }
        let h2 = self.right.datum().pairing(i, &self.right.wt(&b.1));
        self.left.phi(i, &b.0).plus(h2).max(self.right.phi(i, &b.1))
    }
    fn e(&self, g: GenIndex, b: &Self::Elem) -> Option<Self::Elem> {
        let d = self.datum();
        let i = g.i;
        let la = g.l as i64 * d.a[i][i];
        let (p1, e2) = match (self.rule, d.is_real(i)) {
            (TensorRule::Simplified, false) => (Stat::Fin(self.m1(i, &b.0)), Stat::Fin(0)),
            _ => (self.left.phi(i, &b.0), self.right.eps(i, &b.1)),
        };
        let left = || self.left.e(g, &b.0).map(|x| (x, b.1.clone()));
        let right = || self.right.e(g, &b.1).map(|y| (b.0.clone(), y));
        if d.is_real(i) {
            return if p1 >= e2 { left() } else { right() };
        }
        if p1 > e2.plus(-la) {
            left()
        } else if p1 > e2 {
            None
        } else {
            right()
        }
    }
    fn f(&self, g: GenIndex, b: &Self::Elem) -> Option<Self::Elem> {
        let d = self.datum();
        let i = g.i;
        let (p1, e2) = match (self.rule, d.is_real(i)) {
            (TensorRule::Simplified, false) => (Stat::Fin(self.m1(i, &b.0)), Stat::Fin(0)),
            _ => (self.left.phi(i, &b.0), self.right.eps(i, &b.1)),
        };
        if p1 > e2 {
            self.left.f(g, &b.0).map(|x| (x, b.1.clone()))
        } else {
            self.right.f(g, &b.1).map(|y| (b.0.clone(), y))
        }
    }
    fn label(&self, b: &Self::Elem) -> String {
        format!("{} ⊗ {}", self.left.label(&b.0), self.right.label(&b.1))
    }
}

/// The crystal of a rank-one imaginary vertex, indexed by compositions
/// (partitions when isotropic). With `m = Some(m)` the source has weight
/// `mΛ`; with `None` it has weight 0 (the `U^-` model).
#[derive(Clone, Debug)]
pub struct ModelCrystal {
    datum: BorcherdsCartanDatum,
    m: Option<i64>,
    max_level: u32,
}

impl ModelCrystal {
    pub fn new(datum: BorcherdsCartanDatum, m: Option<i64>, max_level: u32) -> Result<Self> {
        if datum.n() != 1 {
            return Err(Error::Domain("model crystals need a single vertex".into()));
        }
        if datum.is_real(0) {
            return Err(Error::Domain("real vertex: use the sl2 string crystal".into()));
        }
        Ok(ModelCrystal { datum, m, max_level })
    }
}

impl AbstractCrystal for ModelCrystal {
    type Elem = Composition;
    fn datum(&self) -> &BorcherdsCartanDatum {
        &self.datum
    }
    fn gens(&self) -> Vec<GenIndex> {
        self.datum.gen_indices(self.max_level)
    }
    fn sources(&self) -> Vec<Composition> {
        vec![Composition::empty()]
    }
    fn depth(&self, c: &Composition) -> u32 {
        c.size()
    }
    fn wt(&self, c: &Composition) -> Weight {
        let base = Weight::from_fund(vec![self.m.unwrap_or(0)]);
        base.minus_root(&self.datum.simple_root(0, c.size()))
    }
    fn eps(&self, _i: usize, _c: &Composition) -> Stat {
        Stat::Fin(0)
    }
    fn phi(&self, i: usize, c: &Composition) -> Stat {
        Stat::Fin(self.datum.pairing(i, &self.wt(c)))
    }
    fn e(&self, g: GenIndex, c: &Composition) -> Option<Composition> {
        match self.datum.kind(g.i) {
            VertexKind::Isotropic => c.remove_part(g.l),
            _ => (c.parts.first() == Some(&g.l)).then(|| Composition { parts: c.parts[1..].to_vec() }),
        }
    }
    fn f(&self, g: GenIndex, c: &Composition) -> Option<Composition> {
        match self.datum.kind(g.i) {
            VertexKind::Isotropic => Some(c.insert_part(g.l)),
            _ => Some(c.prepend(g.l)),
        }
    }
    fn label(&self, c: &Composition) -> String {
        c.to_string()
    }
}

/// The `sl_2` string: `f̃^k` of the source, `0 <= k <= m` (unbounded when
/// `m` is `None`, which models `B(∞)`).
#[derive(Clone, Debug)]
pub struct Sl2String {
    datum: BorcherdsCartanDatum,
    m: Option<i64>,
}

impl Sl2String {
    pub fn new(m: Option<i64>) -> Self {
        Sl2String { datum: BorcherdsCartanDatum::rank_one(2), m }
    }
}

impl AbstractCrystal for Sl2String {
    type Elem = u32;
    fn datum(&self) -> &BorcherdsCartanDatum {
        &self.datum
    }
    fn gens(&self) -> Vec<GenIndex> {
        vec![GenIndex::new(0, 1)]
    }
    fn sources(&self) -> Vec<u32> {
        vec![0]
    }
    fn depth(&self, k: &u32) -> u32 {
        *k
    }
    fn wt(&self, k: &u32) -> Weight {
        Weight::from_fund(vec![self.m.unwrap_or(0)]).minus_root(&self.datum.simple_root(0, *k))
    }
    fn eps(&self, _i: usize, k: &u32) -> Stat {
        Stat::Fin(*k as i64)
    }
    fn phi(&self, _i: usize, k: &u32) -> Stat {
        Stat::Fin(self.m.unwrap_or(0) - *k as i64)
    }
    fn e(&self, _g: GenIndex, k: &u32) -> Option<u32> {
        k.checked_sub(1)
    }
    fn f(&self, _g: GenIndex, k: &u32) -> Option<u32> {
        match self.m {
            Some(m) if *k as i64 >= m => None,
            _ => Some(k + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub message: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Matched pairs of a crystal isomorphism, in BFS order.
pub type Matching<A, B> = Vec<(<A as AbstractCrystal>::Elem, <B as AbstractCrystal>::Elem)>;

/// Matches the portions generated from `s1` and `s2` arrow by arrow,
/// comparing `wt`, `ε_i`, `φ_i` at every matched pair. Returns the
/// bijection in BFS order or the first mismatch.
pub fn find_isomorphism<A: AbstractCrystal, B: AbstractCrystal>(
    c1: &A,
    s1: &A::Elem,
    c2: &B,
    s2: &B::Elem,
    bound: u32,
) -> std::result::Result<Matching<A, B>, Mismatch> {
    let d = c1.datum();
    let gens = c1.gens();
    if gens != c2.gens() {
        return Err(Mismatch { message: "operator index sets differ".into() });
    }
    let mut fwd: HashMap<A::Elem, B::Elem> = HashMap::new();
    let mut back: HashMap<B::Elem, A::Elem> = HashMap::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    fwd.insert(s1.clone(), s2.clone());
    back.insert(s2.clone(), s1.clone());
    queue.push_back((s1.clone(), s2.clone()));
    while let Some((a, b)) = queue.pop_front() {
        if c1.wt(&a) != c2.wt(&b) {
            return Err(Mismatch { message: format!("weights differ at {} / {}", c1.label(&a), c2.label(&b)) });
        }
        for i in 0..d.n() {
            if c1.eps(i, &a) != c2.eps(i, &b) || c1.phi(i, &a) != c2.phi(i, &b) {
                return Err(Mismatch {
                    message: format!("string data at vertex {} differ at {} / {}", d.id(i), c1.label(&a), c2.label(&b)),
                });
            }
        }
        let depth = c1.depth(&a);
        for &g in &gens {
            if depth + g.l > bound {
                continue;
            }
            match (c1.f(g, &a), c2.f(g, &b)) {
                (None, None) => {}
                (Some(x), Some(y)) => match (fwd.get(&x), back.get(&y)) {
                    (None, None) => {
                        fwd.insert(x.clone(), y.clone());
                        back.insert(y.clone(), x.clone());
                        queue.push_back((x, y));
                    }
                    (Some(y2), Some(x2)) if *y2 == y && *x2 == x => {}
                    _ => {
                        return Err(Mismatch {
                            message: format!(
                                "f{} is not compatible at {} / {}",
                                d.fmt_gen(g),
                                c1.label(&a),
                                c2.label(&b)
                            ),
                        })
                    }
                },
                (x, y) => {
                    return Err(Mismatch {
                        message: format!(
                            "f{} of {} is {} but of {} is {}",
                            d.fmt_gen(g),
                            c1.label(&a),
                            if x.is_some() { "nonzero" } else { "0" },
                            c2.label(&b),
                            if y.is_some() { "nonzero" } else { "0" }
                        ),
                    })
                }
            }
        }
        out.push((a, b));
    }
    Ok(out)
}

/// Pairs on which two tensor rules disagree (arrows or statistics).
pub fn compare_rules<A: AbstractCrystal, B: AbstractCrystal>(
    left: &A,
    right: &B,
    pairs: &[(A::Elem, B::Elem)],
) -> Vec<String> {
    let full = Tensor { left, right, rule: TensorRule::Full };
    let simple = Tensor { left, right, rule: TensorRule::Simplified };
    let d = left.datum();
    let mut out = Vec::new();
    for p in pairs {
        for &g in &full.gens() {
            if d.is_real(g.i) {
                continue;
            }
            if full.f(g, p) != simple.f(g, p) || full.e(g, p) != simple.e(g, p) {
                out.push(format!("{} at {}", d.fmt_gen(g), full.label(p)));
            }
        }
        for i in (0..d.n()).filter(|&i| !d.is_real(i)) {
            if full.eps(i, p) != simple.eps(i, p) || full.phi(i, p) != simple.phi(i, p) {
                out.push(format!("string data at vertex {} at {}", d.id(i), full.label(p)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binf::{build_binf, build_crystal_lambda};
    use crate::cartan::partitions;
    use crate::uqminus::DEFAULT_WORD_CAP;

    #[test]
    fn model_crystals() {
        let iso = ModelCrystal::new(BorcherdsCartanDatum::rank_one(0), Some(1), 4).unwrap();
        assert!(validate_axioms(&iso, 4).passed());
        let at3: Vec<Composition> = generate(&iso, &iso.sources(), 3).into_iter().filter(|c| c.size() == 3).collect();
        let mut want = partitions(3);
        want.sort();
        let mut got = at3.clone();
        got.sort();
        assert_eq!(got, want);
        let im = ModelCrystal::new(BorcherdsCartanDatum::rank_one(-2), None, 4).unwrap();
        let c = Composition { parts: vec![1] };
        assert_eq!(im.f(GenIndex::new(0, 2), &c).unwrap().parts, vec![2, 1]);
        assert!(ModelCrystal::new(BorcherdsCartanDatum::rank_one(2), None, 2).is_err());
    }

    #[test]
    fn binf_matches_model() {
        let b = build_binf(BorcherdsCartanDatum::rank_one(0), 5, DEFAULT_WORD_CAP).unwrap();
        let m = ModelCrystal::new(BorcherdsCartanDatum::rank_one(0), None, 5).unwrap();
        assert!(validate_axioms(&b.graph, 5).passed());
        let iso = find_isomorphism(&b.graph, &0, &m, &Composition::empty(), 5).unwrap();
        assert_eq!(iso.len(), 1 + 1 + 2 + 3 + 5 + 7);
    }

    #[test]
    fn broken_phi_detected() {
        let b = build_binf(BorcherdsCartanDatum::rank_one(-2), 3, DEFAULT_WORD_CAP).unwrap();
        let mut t = TableCrystal::from_crystal(&b.graph, 3);
        assert!(validate_axioms(&t, 3).passed());
        let x = t.f[&(0, GenIndex::new(0, 1))];
        t.phi[x][0] = t.phi[0][0];
        let rep = validate_axioms(&t, 3);
        assert!(rep.violations.iter().any(|v| v.axiom == "(e)(1')"));
    }

    #[test]
    fn tensor_rules() {
        // real: f acts on the left when φ(b1) > ε(b2)
        let s = Sl2String::new(Some(2));
        let t = tensor(&s, &s);
        assert_eq!(t.f(GenIndex::new(0, 1), &(0, 0)), Some((1, 0)));
        assert_eq!(t.f(GenIndex::new(0, 1), &(2, 0)), Some((2, 1)));
        // imaginary a_ii = -2, l = 1, φ(b1) = 2, ε(b2) = 0: ẽ gives 0
        let m = ModelCrystal::new(BorcherdsCartanDatum::rank_one(-2), Some(2), 3).unwrap();
        let t = tensor(&m, &m);
        let b2 = Composition { parts: vec![1] };
        assert_eq!(t.e(GenIndex::new(0, 1), &(Composition::empty(), b2)), None);
        let rep = validate_axioms(&t, 3);
        assert!(rep.passed(), "{:?}", rep.violations);
    }

    #[test]
    fn sl2_tensor_component() {
        let a =
            build_crystal_lambda(BorcherdsCartanDatum::rank_one(2), Weight::from_fund(vec![1]), 3, DEFAULT_WORD_CAP)
                .unwrap();
        let ab =
            build_crystal_lambda(BorcherdsCartanDatum::rank_one(2), Weight::from_fund(vec![2]), 3, DEFAULT_WORD_CAP)
                .unwrap();
        let t = tensor(&a.graph, &a.graph);
        assert_eq!(find_isomorphism(&t, &(0, 0), &ab.graph, &0, 3).unwrap().len(), 3);
        assert!(find_isomorphism(&Sl2String::new(Some(1)), &0, &Sl2String::new(Some(2)), &0, 3).is_err());
    }
}
