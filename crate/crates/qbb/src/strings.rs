//! i-string decompositions and Kashiwara operators, shared by `U_q^-(g)`
//! and `V(λ)`.
//!
//! A module only has to say how `b_il` acts, what plays the role of the
//! lowering operator (`e'_il` on `U^-`, `E_il` on `V(λ)`), and how its
//! weights pair with coroots.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_rational::BigRational;
use num_traits::One;

use crate::cartan::{
    enumerate_compositions, BorcherdsCartanDatum, Composition, GenIndex, RootVector, VertexKind, Weight,
};
use crate::freealg::{FreeElement, Word};
use crate::linalg::Matrix;
use crate::qrat::ScalarQ;
use crate::vector::GradedVector;
use crate::{Error, Result};

pub trait StringModule: Sync + Send {
    fn datum(&self) -> &BorcherdsCartanDatum;
    /// Weight of the degree-`alpha` component (`-alpha` or `λ - alpha`).
    fn weight_at(&self, alpha: &RootVector) -> Weight;
    fn dim(&self, alpha: &RootVector) -> Result<usize>;
    /// The generating vector (`1` or `v_λ`).
    fn top(&self) -> GradedVector;
    fn mul_b(&self, g: GenIndex, x: &GradedVector) -> Result<GradedVector>;
    /// `e'_il` on `U^-`, `E_il` on `V(λ)`.
    fn lower(&self, g: GenIndex, x: &GradedVector) -> Result<GradedVector>;
    /// Image of `P · top` for a free-algebra element `P`.
    fn apply_free(&self, p: &FreeElement) -> Result<GradedVector>;
    /// A representative `P` with `P · top = x`.
    fn representative(&self, x: &GradedVector) -> Result<FreeElement>;

    fn pairing_at(&self, i: usize, alpha: &RootVector) -> i64 {
        self.datum().pairing(i, &self.weight_at(alpha))
    }

    fn zero_at(&self, alpha: &RootVector) -> Result<GradedVector> {
        Ok(GradedVector::zero(alpha.clone(), self.dim(alpha)?))
    }
}

/// `u = sum_c b_{i,c} u_c` with every `u_c` killed by the lowering operators at `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct IStringDecomposition {
    pub i: usize,
    pub parts: BTreeMap<Composition, GradedVector>,
}

struct Column {
    comp: Composition,
    /// `u_c` for this column (a kernel basis vector)
    kernel: GradedVector,
}

/// The spanning set `{b_{i,c} k}` at one weight, with its inverse.
struct DecompositionData {
    columns: Vec<Column>,
    inverse: Matrix<ScalarQ>,
}

type KernelCache = RwLock<HashMap<(usize, RootVector), Arc<Vec<GradedVector>>>>;

/// Caches kernels and decomposition data for one module.
pub struct StringEngine<M: StringModule> {
    module: Arc<M>,
    kernels: KernelCache,
    decomp: RwLock<HashMap<(usize, RootVector), Arc<DecompositionData>>>,
}

fn rat(n: i64, d: i64) -> ScalarQ {
    ScalarQ::from_rational(BigRational::new(n.into(), d.into()))
}

impl<M: StringModule> StringEngine<M> {
    pub fn new(module: Arc<M>) -> Self {
        StringEngine { module, kernels: RwLock::new(HashMap::new()), decomp: RwLock::new(HashMap::new()) }
    }

    pub fn module(&self) -> &Arc<M> {
        &self.module
    }

    fn datum(&self) -> &BorcherdsCartanDatum {
        self.module.datum()
    }

    /// Lowering indices relevant at vertex `i` for degree `alpha`.
    fn lowering_indices(&self, i: usize, alpha: &RootVector) -> Vec<GenIndex> {
        if self.datum().is_real(i) {
            return if alpha.0[i] >= 1 { vec![GenIndex::new(i, 1)] } else { vec![] };
        }
        (1..=alpha.0[i]).map(|k| GenIndex::new(i, k)).collect()
    }

    /// Basis of `∩_k ker(lower_{ik})` in degree `alpha`.
    pub fn kernel_basis(&self, i: usize, alpha: &RootVector) -> Result<Arc<Vec<GradedVector>>> {
        let key = (i, alpha.clone());
        if let Some(k) = self.kernels.read().unwrap().get(&key) {
            return Ok(k.clone());
        }
        let m = &*self.module;
        let n = m.dim(alpha)?;
        let mut rows: Vec<Vec<ScalarQ>> = Vec::new();
        for g in self.lowering_indices(i, alpha) {
            let images: Vec<GradedVector> =
                (0..n).map(|k| m.lower(g, &GradedVector::basis(alpha.clone(), n, k))).collect::<Result<_>>()?;
            let tdim = images.first().map_or(0, |v| v.dim());
            for r in 0..tdim {
                rows.push(images.iter().map(|v| v.coords[r].clone()).collect());
            }
        }
        let basis: Vec<GradedVector> = if rows.is_empty() {
            (0..n).map(|k| GradedVector::basis(alpha.clone(), n, k)).collect()
        } else {
            Matrix::from_rows(rows, n)
                .nullspace()
                .into_iter()
                .map(|c| GradedVector { root: alpha.clone(), coords: c })
                .collect()
        };
        let basis = Arc::new(basis);
        self.kernels.write().unwrap().insert(key, basis.clone());
        Ok(basis)
    }

    /// `b_{i,c} x`: divided power for real `i`, ordered product otherwise.
    pub fn apply_composition(&self, i: usize, c: &Composition, x: &GradedVector) -> Result<GradedVector> {
        let d = self.datum();
        let m = &*self.module;
        if d.is_real(i) {
            let k = c.size();
            let mut y = x.clone();
            for _ in 0..k {
                y = m.mul_b(GenIndex::new(i, 1), &y)?;
            }
            return Ok(y.scale(&ScalarQ::qfactorial(k, d.s[i]).inv().unwrap()));
        }
        let mut y = x.clone();
        for &p in c.parts.iter().rev() {
            y = m.mul_b(GenIndex::new(i, p), &y)?;
        }
        Ok(y)
    }

    fn decomposition_data(&self, i: usize, alpha: &RootVector) -> Result<Arc<DecompositionData>> {
        let key = (i, alpha.clone());
        if let Some(dd) = self.decomp.read().unwrap().get(&key) {
            return Ok(dd.clone());
        }
        let d = self.datum();
        let n = self.module.dim(alpha)?;
        let mut columns = Vec::new();
        let mut vecs = Vec::new();
        for size in 0..=alpha.0[i] {
            let base = alpha.minus_gen(GenIndex::new(i, size)).unwrap();
            let ker = self.kernel_basis(i, &base)?;
            if ker.is_empty() {
                continue;
            }
            for c in enumerate_compositions(d, i, size) {
                for k in ker.iter() {
                    let v = self.apply_composition(i, &c, k)?;
                    // products that vanish identically carry no string component
                    if v.is_zero() {
                        continue;
                    }
                    vecs.push(v.coords);
                    columns.push(Column { comp: c.clone(), kernel: k.clone() });
                }
            }
        }
        if columns.len() != n {
            return Err(Error::Internal(format!(
                "string spanning set at vertex {} has {} vectors for dimension {}",
                d.id(i),
                columns.len(),
                n
            )));
        }
        let inverse = if n == 0 {
            Matrix::zeros(0, 0)
        } else {
            Matrix::from_cols(&vecs, n)
                .inverse()
                .ok_or_else(|| Error::Internal(format!("string spanning set at vertex {} is dependent", d.id(i))))?
        };
        let dd = Arc::new(DecompositionData { columns, inverse });
        self.decomp.write().unwrap().insert(key, dd.clone());
        Ok(dd)
    }

    pub fn decompose(&self, i: usize, x: &GradedVector) -> Result<IStringDecomposition> {
        let dd = self.decomposition_data(i, &x.root)?;
        let coeffs = if x.dim() == 0 { Vec::new() } else { dd.inverse.mul_vec(&x.coords) };
        let mut parts: BTreeMap<Composition, GradedVector> = BTreeMap::new();
        for (col, c) in dd.columns.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            let term = col.kernel.scale(&c);
            match parts.get_mut(&col.comp) {
                Some(v) => *v = v.add(&term),
                None => {
                    parts.insert(col.comp.clone(), term);
                }
            }
        }
        parts.retain(|_, v| !v.is_zero());
        Ok(IStringDecomposition { i, parts })
    }

    /// `sum_c b_{i,c} u_c`
    pub fn recompose(&self, s: &IStringDecomposition, alpha: &RootVector) -> Result<GradedVector> {
        let mut acc = self.module.zero_at(alpha)?;
        for (c, u) in &s.parts {
            acc = acc.add(&self.apply_composition(s.i, c, u)?);
        }
        Ok(acc)
    }

    pub fn kashiwara_f(&self, g: GenIndex, x: &GradedVector) -> Result<GradedVector> {
        let target = x.root.plus_gen(g);
        let mut acc = self.module.zero_at(&target)?;
        let s = self.decompose(g.i, x)?;
        for (c, u) in &s.parts {
            let (c2, f) = match self.datum().kind(g.i) {
                VertexKind::Real => (Composition { parts: vec![c.size() + 1] }, ScalarQ::one()),
                VertexKind::Imaginary => (c.prepend(g.l), ScalarQ::one()),
                VertexKind::Isotropic => (c.insert_part(g.l), rat(1, c.multiplicity(g.l) as i64 + 1)),
            };
            acc = acc.add(&self.apply_composition(g.i, &c2, u)?.scale(&f));
        }
        Ok(acc)
    }

    /// Returns `None` when the target degree does not exist (the result is 0).
    pub fn kashiwara_e(&self, g: GenIndex, x: &GradedVector) -> Result<Option<GradedVector>> {
        let Some(target) = x.root.minus_gen(g) else { return Ok(None) };
        let mut acc = self.module.zero_at(&target)?;
        let s = self.decompose(g.i, x)?;
        for (c, u) in &s.parts {
            let (c2, f) = match self.datum().kind(g.i) {
                VertexKind::Real => {
                    if c.size() == 0 {
                        continue;
                    }
                    let k = c.size() - 1;
                    (Composition { parts: if k == 0 { vec![] } else { vec![k] } }, ScalarQ::one())
                }
                VertexKind::Imaginary => {
                    if c.parts.first() != Some(&g.l) {
                        continue;
                    }
                    (Composition { parts: c.parts[1..].to_vec() }, ScalarQ::one())
                }
                VertexKind::Isotropic => {
                    let Some(c2) = c.remove_part(g.l) else { continue };
                    (c2, ScalarQ::from_int(c.multiplicity(g.l) as i64))
                }
            };
            acc = acc.add(&self.apply_composition(g.i, &c2, u)?.scale(&f));
        }
        Ok(Some(acc))
    }

    /// `Q_il`: scales the `b_{i,c} u_c` component by `c_l + 1` at an
    /// isotropic vertex; the identity elsewhere.
    pub fn q_op(&self, g: GenIndex, x: &GradedVector) -> Result<GradedVector> {
        if !self.datum().is_isotropic(g.i) {
            return Ok(x.clone());
        }
        let s = self.decompose(g.i, x)?;
        let mut acc = self.module.zero_at(&x.root)?;
        for (c, u) in &s.parts {
            let f = ScalarQ::from_int(c.multiplicity(g.l) as i64 + 1);
            acc = acc.add(&self.apply_composition(g.i, c, u)?.scale(&f));
        }
        Ok(acc)
    }
}

/// Generic helper: the vector `w · top` for a word.
pub fn word_vector<M: StringModule + ?Sized>(m: &M, w: &Word) -> Result<GradedVector> {
    let n = m.datum().n();
    m.apply_free(&FreeElement::word(w.clone(), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uqminus::{UqMinus, DEFAULT_WORD_CAP};

    fn engine(a: i64) -> StringEngine<UqMinus> {
        StringEngine::new(Arc::new(UqMinus::new(BorcherdsCartanDatum::rank_one(a), DEFAULT_WORD_CAP)))
    }

    fn g(l: u32) -> GenIndex {
        GenIndex::new(0, l)
    }

    #[test]
    fn isotropic_decompositions() {
        let e = engine(0);
        let u = e.module();
        let b11 = u.act_mul_b(g(1), &u.one()).unwrap();
        let b11sq = u.act_mul_b(g(1), &b11).unwrap();
        let s = e.decompose(0, &b11sq).unwrap();
        assert_eq!(s.parts.len(), 1);
        let (c, v) = s.parts.iter().next().unwrap();
        assert_eq!(c.parts, vec![1, 1]);
        assert_eq!(v, &u.one());
        let b12 = u.act_mul_b(g(2), &u.one()).unwrap();
        let x = u.act_mul_b(g(2), &b11).unwrap().add(&u.act_mul_b(g(1), &b12).unwrap());
        let s = e.decompose(0, &x).unwrap();
        assert_eq!(s.parts.len(), 1);
        let (c, v) = s.parts.iter().next().unwrap();
        assert_eq!(c.parts, vec![2, 1]);
        assert_eq!(v, &u.one().scale(&ScalarQ::from_int(2)));
        assert_eq!(e.recompose(&s, &x.root).unwrap(), x);
    }

    #[test]
    fn real_divided_powers() {
        let e = engine(2);
        let u = e.module();
        let b = u.act_mul_b(g(1), &u.one()).unwrap();
        let bb = u.act_mul_b(g(1), &b).unwrap();
        let s = e.decompose(0, &bb).unwrap();
        let (c, v) = s.parts.iter().next().unwrap();
        assert_eq!(c.parts, vec![2]);
        assert_eq!(v, &u.one().scale(&ScalarQ::qint(2, 1)));
    }

    #[test]
    fn kashiwara_operator_examples() {
        let e = engine(0);
        let u = e.module();
        let b11 = e.kashiwara_f(g(1), &u.one()).unwrap();
        assert_eq!(b11, u.act_mul_b(g(1), &u.one()).unwrap());
        let half_sq = e.kashiwara_f(g(1), &b11).unwrap();
        assert_eq!(half_sq, u.act_mul_b(g(1), &b11).unwrap().scale(&rat(1, 2)));
        assert_eq!(e.kashiwara_e(g(1), &half_sq).unwrap().unwrap(), b11);
        assert_eq!(e.q_op(g(1), &b11).unwrap(), b11.scale(&ScalarQ::from_int(2)));
        assert_eq!(e.q_op(g(1), &u.one()).unwrap(), u.one());

        let e = engine(-2);
        let u = e.module();
        let b11 = e.kashiwara_f(g(1), &u.one()).unwrap();
        let x = e.kashiwara_f(g(2), &b11).unwrap();
        let w = u.space(&x.root).unwrap();
        let expect = w.reduce_word(&Word(vec![g(2), g(1)])).unwrap();
        assert_eq!(x, expect);
    }
}
