//! Crystal lattices, their residue crystals and lower global bases for any
//! [`StringModule`] (`U_q^-(g)` or `V(λ)`).
//!
//! The lattice in degree `α` is the `A_0`-span of the Kashiwara images
//! `f̃_il` of the lattice in degree `α - lα_i`. After the crystal at `α` is
//! read off, the lattice basis is replaced by lifts of the crystal
//! elements, so lattice coordinates evaluated at `q = 0` are residues
//! directly in crystal-element coordinates.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use crate::cartan::{BorcherdsCartanDatum, GenIndex, RootVector, Weight};
use crate::freealg::FreeElement;
use crate::linalg::Matrix;
use crate::qrat::ScalarQ;
use crate::strings::{StringEngine, StringModule};
use crate::uqminus::divided_power;
use crate::vector::GradedVector;
use crate::{Error, Rat, Result};

/// Largest Laurent window `q^-D .. q^D` tried for global basis coefficients.
pub const MAX_WINDOW: i64 = 8;

#[derive(Clone, Debug)]
pub struct CrystalNode {
    pub root: RootVector,
    pub wt: Weight,
    pub eps: Vec<i64>,
    pub phi: Vec<i64>,
}

/// The generated portion of a crystal. Arrows are recorded for every
/// `(node, (i,l))` that was computed; `None` means the operator gives 0.
/// `f̃` is computed only when the target height stays within `max_height`.
#[derive(Clone, Debug)]
pub struct CrystalGraph {
    pub datum: Arc<BorcherdsCartanDatum>,
    pub max_height: u32,
    pub gens: Vec<GenIndex>,
    pub nodes: Vec<CrystalNode>,
    pub f: BTreeMap<(usize, GenIndex), Option<usize>>,
    pub e: BTreeMap<(usize, GenIndex), Option<usize>>,
}

impl CrystalGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `f̃` arrows in node order.
    pub fn edges(&self) -> Vec<(usize, usize, GenIndex)> {
        self.f.iter().filter_map(|(&(s, g), t)| t.map(|t| (s, t, g))).collect()
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_height as usize + 1];
        for n in &self.nodes {
            out[n.root.height() as usize] += 1;
        }
        out
    }

    pub fn nodes_at(&self, alpha: &RootVector) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&k| &self.nodes[k].root == alpha).collect()
    }
}

/// One degree of the lattice.
#[derive(Clone, Debug)]
pub struct WeightLattice {
    pub root: RootVector,
    /// `A_0`-basis in module coordinates; entry `k` lifts crystal node `nodes[k]`.
    pub basis: Vec<GradedVector>,
    pub nodes: Vec<usize>,
    inverse: Matrix<ScalarQ>,
}

impl WeightLattice {
    fn new(root: RootVector, basis: Vec<GradedVector>, nodes: Vec<usize>) -> Result<Self> {
        let n = basis.len();
        let cols: Vec<Vec<ScalarQ>> = basis.iter().map(|v| v.coords.clone()).collect();
        let inverse = Matrix::from_cols(&cols, n)
            .inverse()
            .ok_or_else(|| Error::Internal(format!("lattice basis in degree {:?} is dependent", root.0)))?;
        Ok(WeightLattice { root, basis, nodes, inverse })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `x` over the lattice basis.
    pub fn coords(&self, x: &GradedVector) -> Vec<ScalarQ> {
        self.inverse.mul_vec(&x.coords)
    }

    /// `None` when `x` is outside the lattice, otherwise its residue.
    pub fn residue(&self, x: &GradedVector) -> Option<Vec<Rat>> {
        self.coords(x).iter().map(|c| if c.is_regular() { c.eval0().ok() } else { None }).collect()
    }

    /// Smallest `val0` over the coordinates of `x` (`None` for `x = 0`).
    pub fn min_val(&self, x: &GradedVector) -> Option<i64> {
        self.coords(x).iter().filter_map(|c| c.val0()).min()
    }
}

/// `A_0`-basis of the span of `gens` by valuation-driven elimination.
pub fn valuation_echelon(gens: &[Vec<ScalarQ>]) -> Vec<Vec<ScalarQ>> {
    let mut rows: Vec<Vec<ScalarQ>> = gens.iter().filter(|r| r.iter().any(|c| !c.is_zero())).cloned().collect();
    let n = rows.first().map_or(0, |r| r.len());
    let mut used = vec![false; n];
    let mut out = Vec::new();
    loop {
        let mut best: Option<(i64, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            for c in (0..n).filter(|&c| !used[c]) {
                if let Some(v) = row[c].val0() {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, r, c));
                    }
                }
            }
        }
        let Some((v, r, c)) = best else { break };
        let mut pivot = rows.swap_remove(r);
        // make the pivot entry exactly q^v (dividing by a unit of A_0)
        let unit = &pivot[c] * &ScalarQ::q_pow(-v);
        let unit_inv = unit.inv().expect("nonzero pivot");
        for x in pivot.iter_mut() {
            *x = &*x * &unit_inv;
        }
        let p = pivot[c].clone();
        for row in rows.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let k = &row[c] / &p;
            for (x, y) in row.iter_mut().zip(&pivot) {
                if !y.is_zero() {
                    *x = &*x - &(&k * y);
                }
            }
        }
        rows.retain(|r| r.iter().any(|c| !c.is_zero()));
        used[c] = true;
        out.push(pivot);
    }
    out
}

fn unit_index(r: &[Rat]) -> Option<usize> {
    let nz: Vec<usize> = (0..r.len()).filter(|&k| !r[k].is_zero()).collect();
    (nz.len() == 1 && r[nz[0]].is_one()).then(|| nz[0])
}

pub struct CrystalBasis<M: StringModule> {
    engine: Arc<StringEngine<M>>,
    pub lattices: BTreeMap<RootVector, WeightLattice>,
    pub graph: CrystalGraph,
    /// Failures of the crystal-basis properties met while building
    /// (lattice instability, residues outside the crystal).
    pub anomalies: Vec<String>,
    global: RwLock<HashMap<RootVector, Arc<Vec<GradedVector>>>>,
}

impl<M: StringModule> CrystalBasis<M> {
    /// Breadth-first closure of the generating vector under all `f̃_il`
    /// up to height `max_height`.
    pub fn build(engine: Arc<StringEngine<M>>, max_height: u32) -> Result<Self> {
        let m = engine.module().clone();
        let d = Arc::new(m.datum().clone());
        let n = d.n();
        let gens = d.gen_indices(max_height);
        let zero = d.zero_root();
        let mut nodes =
            vec![CrystalNode { root: zero.clone(), wt: m.weight_at(&zero), eps: vec![0; n], phi: vec![0; n] }];
        let mut lattices = BTreeMap::new();
        lattices.insert(zero.clone(), WeightLattice::new(zero.clone(), vec![m.top()], vec![0])?);
        let mut f = BTreeMap::new();
        let mut anomalies = Vec::new();
        for h in 1..=max_height {
            for alpha in RootVector::of_height(n, h) {
                let dim = m.dim(&alpha)?;
                let mut images: Vec<(usize, GenIndex, GradedVector)> = Vec::new();
                for &g in &gens {
                    let Some(beta) = alpha.minus_gen(g) else { continue };
                    let Some(lat) = lattices.get(&beta) else { continue };
                    for (k, v) in lat.basis.iter().enumerate() {
                        let x =
                            if dim == 0 { GradedVector::zero(alpha.clone(), 0) } else { engine.kashiwara_f(g, v)? };
                        images.push((lat.nodes[k], g, x));
                    }
                }
                if images.is_empty() {
                    continue;
                }
                if dim == 0 {
                    for (src, g, _) in images {
                        f.insert((src, g), None);
                    }
                    continue;
                }
                let gen_rows: Vec<Vec<ScalarQ>> = images.iter().map(|(_, _, x)| x.coords.clone()).collect();
                let ech = valuation_echelon(&gen_rows);
                if ech.len() != dim {
                    return Err(Error::Internal(format!(
                        "Kashiwara images span {} of {} dimensions in degree {:?}",
                        ech.len(),
                        dim,
                        alpha.0
                    )));
                }
                let ech_vecs: Vec<GradedVector> =
                    ech.into_iter().map(|c| GradedVector { root: alpha.clone(), coords: c }).collect();
                let ech_lat = WeightLattice::new(alpha.clone(), ech_vecs.clone(), vec![0; dim])?;
                let mut residues: Vec<Vec<Rat>> = Vec::new();
                let mut arrows = Vec::new();
                for (src, g, x) in &images {
                    let res = ech_lat
                        .residue(x)
                        .ok_or_else(|| Error::Internal("generator outside its own lattice".into()))?;
                    if res.iter().all(|c| c.is_zero()) {
                        arrows.push((*src, *g, None));
                        continue;
                    }
                    let k = match residues.iter().position(|r| r == &res) {
                        Some(k) => k,
                        None => {
                            residues.push(res);
                            residues.len() - 1
                        }
                    };
                    arrows.push((*src, *g, Some(k)));
                }
                if residues.len() != dim {
                    anomalies.push(format!(
                        "degree {:?}: {} distinct residues for dimension {}",
                        alpha.0,
                        residues.len(),
                        dim
                    ));
                }
                let lifts: Vec<GradedVector> = residues
                    .iter()
                    .map(|r| {
                        let mut v = GradedVector::zero(alpha.clone(), dim);
                        for (c, b) in r.iter().zip(&ech_vecs) {
                            if !c.is_zero() {
                                v = v.add(&b.scale(&ScalarQ::from_rational(c.clone())));
                            }
                        }
                        v
                    })
                    .collect();
                let base = nodes.len();
                for _ in 0..residues.len() {
                    nodes.push(CrystalNode {
                        root: alpha.clone(),
                        wt: m.weight_at(&alpha),
                        eps: vec![0; n],
                        phi: vec![0; n],
                    });
                }
                for (src, g, k) in arrows {
                    f.insert((src, g), k.map(|k| base + k));
                }
                let ids: Vec<usize> = (base..base + residues.len()).collect();
                match WeightLattice::new(alpha.clone(), lifts, ids) {
                    Ok(l) => {
                        lattices.insert(alpha.clone(), l);
                    }
                    Err(_) => return Err(Error::Internal(format!("residues in degree {:?} are dependent", alpha.0))),
                }
            }
        }
        let mut graph = CrystalGraph { datum: d.clone(), max_height, gens: gens.clone(), nodes, f, e: BTreeMap::new() };
        // ẽ arrows and lattice stability under ẽ
        for (alpha, lat) in &lattices {
            for &g in &gens {
                let Some(beta) = alpha.minus_gen(g) else { continue };
                for (k, v) in lat.basis.iter().enumerate() {
                    let src = lat.nodes[k];
                    let Some(target) = lattices.get(&beta) else {
                        graph.e.insert((src, g), None);
                        continue;
                    };
                    let y = engine.kashiwara_e(g, v)?.expect("degree exists");
                    match target.residue(&y) {
                        None => {
                            anomalies.push(format!("ẽ{} of node {} leaves the lattice", d.fmt_gen(g), src));
                            graph.e.insert((src, g), None);
                        }
                        Some(r) if r.iter().all(|c| c.is_zero()) => {
                            graph.e.insert((src, g), None);
                        }
                        Some(r) => match unit_index(&r) {
                            Some(t) => {
                                graph.e.insert((src, g), Some(target.nodes[t]));
                            }
                            None => {
                                anomalies.push(format!("ẽ{} of node {} is not a crystal element", d.fmt_gen(g), src));
                                graph.e.insert((src, g), None);
                            }
                        },
                    }
                }
            }
        }
        // string lengths
        for b in 0..graph.nodes.len() {
            for i in 0..n {
                let h = d.pairing(i, &graph.nodes[b].wt);
                let eps = if d.is_real(i) {
                    let mut k = 0;
                    let mut cur = b;
                    while let Some(Some(nx)) = graph.e.get(&(cur, GenIndex::new(i, 1))) {
                        k += 1;
                        cur = *nx;
                    }
                    k
                } else {
                    0
                };
                graph.nodes[b].eps[i] = eps;
                graph.nodes[b].phi[i] = eps + h;
            }
        }
        Ok(CrystalBasis { engine, lattices, graph, anomalies, global: RwLock::new(HashMap::new()) })
    }

    pub fn engine(&self) -> &Arc<StringEngine<M>> {
        &self.engine
    }

    pub fn module(&self) -> &Arc<M> {
        self.engine.module()
    }

    pub fn lattice(&self, alpha: &RootVector) -> Option<&WeightLattice> {
        self.lattices.get(alpha)
    }

    /// Lattice basis vector lifting node `b`.
    pub fn lift(&self, b: usize) -> &GradedVector {
        let alpha = &self.graph.nodes[b].root;
        let lat = &self.lattices[alpha];
        let k = lat.nodes.iter().position(|&x| x == b).expect("node in its lattice");
        &lat.basis[k]
    }

    /// Node whose residue equals that of `x`, `Ok(None)` for residue 0, an
    /// error if `x` is outside the lattice or its residue is not in the crystal.
    pub fn residue_node(&self, x: &GradedVector) -> Result<Option<usize>> {
        let Some(lat) = self.lattices.get(&x.root) else {
            return if x.is_zero() { Ok(None) } else { Err(Error::Internal("degree outside the crystal".into())) };
        };
        let r = lat.residue(x).ok_or_else(|| Error::Domain("vector outside the lattice".into()))?;
        if r.iter().all(|c| c.is_zero()) {
            return Ok(None);
        }
        unit_index(&r)
            .map(|k| Some(lat.nodes[k]))
            .ok_or_else(|| Error::Domain("residue is not a crystal element".into()))
    }

    /// Lower global basis of degree `alpha`, aligned with `lattice(alpha).nodes`.
    pub fn global_basis(&self, alpha: &RootVector) -> Result<Arc<Vec<GradedVector>>> {
        if let Some(g) = self.global.read().unwrap().get(alpha) {
            return Ok(g.clone());
        }
        let lat = self.lattices.get(alpha).ok_or_else(|| Error::Domain("degree outside the crystal".into()))?;
        let g = Arc::new(solve_global(&**self.module(), lat)?);
        self.global.write().unwrap().insert(alpha.clone(), g.clone());
        Ok(g)
    }

    pub fn global(&self, b: usize) -> Result<GradedVector> {
        let alpha = &self.graph.nodes[b].root;
        let k = self.lattices[alpha].nodes.iter().position(|&x| x == b).unwrap();
        Ok(self.global_basis(alpha)?[k].clone())
    }
}

/// Monomials in `b_i^{(n)}` (real `i`) and `b_il` (imaginary `i`) of degree
/// `alpha`; adjacent divided powers at one vertex are merged.
pub fn qform_monomials(d: &BorcherdsCartanDatum, alpha: &RootVector) -> Vec<FreeElement> {
    fn rec(
        d: &BorcherdsCartanDatum,
        rest: &RootVector,
        last: Option<usize>,
        acc: &FreeElement,
        out: &mut Vec<FreeElement>,
    ) {
        if rest.is_zero() {
            out.push(acc.clone());
            return;
        }
        let n = d.n();
        for i in 0..n {
            for k in 1..=rest.0[i] {
                let block = if d.is_real(i) {
                    if last == Some(i) {
                        continue;
                    }
                    divided_power(d, i, k)
                } else {
                    FreeElement::gen(GenIndex::new(i, k), n)
                };
                let next = rest.minus_gen(GenIndex::new(i, k)).unwrap();
                rec(d, &next, Some(i), &acc.mul(&block), out);
            }
        }
    }
    let mut out = Vec::new();
    rec(d, alpha, None, &FreeElement::one(d.n()), &mut out);
    out
}

/// Elements of `V_Q ∩ L ∩ bar(L)` with residue each crystal element.
///
/// Writes `G = sum_m c_m M_m` over the `Q`-form monomials with Laurent
/// coefficients `c_m` in a window `q^-D..q^D` and imposes, coefficient by
/// coefficient, that the lattice coordinates of `G` and of `bar(G)` have
/// no negative powers of `q`. The window grows until the residue map on
/// the solution space is onto.
fn solve_global<M: StringModule>(m: &M, lat: &WeightLattice) -> Result<Vec<GradedVector>> {
    let dim = lat.dim();
    let alpha = &lat.root;
    let monos = qform_monomials(m.datum(), alpha);
    let mut vecs = Vec::new();
    let mut mus = Vec::new();
    for p in &monos {
        let v = m.apply_free(p)?;
        if v.is_zero() {
            continue;
        }
        mus.push(lat.coords(&v));
        vecs.push(v);
    }
    let vmin = mus.iter().flatten().filter_map(|c| c.val0()).min().unwrap_or(0).min(0);
    // series[m][r] = coefficients of q^vmin .. q^MAX_WINDOW
    let series: Vec<Vec<Vec<Rat>>> = mus
        .iter()
        .map(|mu| {
            mu.iter()
                .map(|c| {
                    (vmin..=MAX_WINDOW).map(|s| if c.is_zero() { Rat::zero() } else { c.coeff_at_zero(s) }).collect()
                })
                .collect()
        })
        .collect();
    let coeff = |mi: usize, r: usize, s: i64| -> Rat {
        if s < vmin || s > MAX_WINDOW {
            Rat::zero()
        } else {
            series[mi][r][(s - vmin) as usize].clone()
        }
    };
    let nm = vecs.len();
    for dwin in 0..=MAX_WINDOW {
        let w = (2 * dwin + 1) as usize;
        let cols = nm * w;
        let col = |mi: usize, j: i64| mi * w + (j + dwin) as usize;
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for r in 0..dim {
            for t in (vmin - dwin)..0 {
                let mut a = vec![Rat::zero(); cols];
                let mut b = vec![Rat::zero(); cols];
                for mi in 0..nm {
                    for j in -dwin..=dwin {
                        a[col(mi, j)] = coeff(mi, r, t - j);
                        b[col(mi, j)] = coeff(mi, r, t + j);
                    }
                }
                rows.push(a);
                rows.push(b);
            }
        }
        let null: Vec<Vec<Rat>> = if rows.is_empty() {
            (0..cols).map(|k| (0..cols).map(|x| if x == k { Rat::one() } else { Rat::zero() }).collect()).collect()
        } else {
            Matrix::from_rows(rows, cols).nullspace()
        };
        if null.is_empty() {
            continue;
        }
        // residue map on the solution space
        let mut rn = Matrix::<Rat>::zeros(dim, null.len());
        for (k, c) in null.iter().enumerate() {
            for r in 0..dim {
                let mut acc = Rat::zero();
                for mi in 0..nm {
                    for j in -dwin..=dwin {
                        let x = &c[col(mi, j)];
                        if !x.is_zero() {
                            acc += x * coeff(mi, r, -j);
                        }
                    }
                }
                rn[(r, k)] = acc;
            }
        }
        if rn.rank() < dim {
            continue;
        }
        let mut out = Vec::with_capacity(dim);
        for b in 0..dim {
            let target: Vec<Rat> = (0..dim).map(|r| if r == b { Rat::one() } else { Rat::zero() }).collect();
            let y = rn.solve(&target).expect("onto residue map");
            let mut c = vec![Rat::zero(); cols];
            for (k, yk) in y.iter().enumerate() {
                if yk.is_zero() {
                    continue;
                }
                for (x, nk) in c.iter_mut().zip(&null[k]) {
                    *x += yk * nk;
                }
            }
            let mut g = GradedVector::zero(alpha.clone(), vecs[0].dim());
            for (mi, v) in vecs.iter().enumerate() {
                let cs: Vec<Rat> = (-dwin..=dwin).map(|j| c[col(mi, j)].clone()).collect();
                if cs.iter().all(|x| x.is_zero()) {
                    continue;
                }
                g = g.add(&v.scale(&ScalarQ::laurent(-dwin, cs)));
            }
            out.push(g);
        }
        return Ok(out);
    }
    Err(Error::Internal(format!("no global basis found in degree {:?} within the Laurent window", alpha.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hwmod::HWModule;
    use crate::uqminus::{UqMinus, DEFAULT_WORD_CAP};

    fn binf(d: BorcherdsCartanDatum, h: u32) -> CrystalBasis<UqMinus> {
        let u = Arc::new(UqMinus::new(d, DEFAULT_WORD_CAP));
        CrystalBasis::build(Arc::new(StringEngine::new(u)), h).unwrap()
    }

    #[test]
    fn echelon_over_a0() {
        let q = ScalarQ::q();
        let one = ScalarQ::one();
        // span of (q, 1) and (1, 0) over A_0 is everything
        let e = valuation_echelon(&[vec![q.clone(), one.clone()], vec![one.clone(), ScalarQ::zero()]]);
        assert_eq!(e.len(), 2);
        let e = valuation_echelon(&[vec![q.clone(), q.clone()], vec![&q * &q, &q * &q]]);
        assert_eq!(e, vec![vec![q.clone(), q]]);
    }

    #[test]
    fn level_sizes_rank_one() {
        assert_eq!(binf(BorcherdsCartanDatum::rank_one(0), 5).graph.level_sizes(), vec![1, 1, 2, 3, 5, 7]);
        assert_eq!(binf(BorcherdsCartanDatum::rank_one(-2), 4).graph.level_sizes(), vec![1, 1, 2, 4, 8]);
        assert_eq!(binf(BorcherdsCartanDatum::rank_one(2), 4).graph.level_sizes(), vec![1; 5]);
    }

    #[test]
    fn global_basis_examples() {
        let iso = binf(BorcherdsCartanDatum::rank_one(0), 2);
        let b11 = GenIndex::new(0, 1);
        let b = iso.graph.f[&(iso.graph.f[&(0, b11)].unwrap(), b11)].unwrap();
        let g = iso.global(b).unwrap();
        let want = iso.module().reduce(&FreeElement::gen(b11, 1).mul(&FreeElement::gen(b11, 1))).unwrap();
        assert_eq!(g, want.scale(&ScalarQ::from_rational(Rat::new(1.into(), 2.into()))));
        let sl2 = binf(BorcherdsCartanDatum::rank_one(2), 3);
        let top = sl2.graph.nodes_at(&RootVector(vec![3]))[0];
        let want = sl2.module().reduce(&divided_power(sl2.module().datum(), 0, 3)).unwrap();
        assert_eq!(sl2.global(top).unwrap(), want);
        assert_eq!(sl2.global(0).unwrap(), sl2.module().one());
    }

    #[test]
    fn highest_weight_chain() {
        let v = Arc::new(
            HWModule::from_multiplicities(BorcherdsCartanDatum::rank_one(2), vec![2], DEFAULT_WORD_CAP).unwrap(),
        );
        let cb = CrystalBasis::build(Arc::new(StringEngine::new(v)), 4).unwrap();
        assert_eq!(cb.graph.level_sizes(), vec![1, 1, 1, 0, 0]);
        assert!(cb.anomalies.is_empty());
    }
}
