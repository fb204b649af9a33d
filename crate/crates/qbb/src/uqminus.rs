//! `U_q^-(g)` as the free algebra modulo the radical of the Lusztig form,
//! one weight space at a time.
//!
//! On a block of words with a common content the Lusztig form is a
//! constant multiple (`prod τ`) of the Kashiwara form, so both have the
//! same radical; the Gram blocks are built from the Kashiwara form, whose
//! values are Laurent polynomials.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::One;

use crate::cartan::{BorcherdsCartanDatum, GenIndex, RootVector, Weight};
use crate::freealg::{e_dprime, e_prime, words_of_weight, FormKind, Forms, FreeElement, Word};
use crate::linalg::Matrix;
use crate::qrat::ScalarQ;
use crate::quotient::QuotientModel;
use crate::strings::StringModule;
use crate::vector::UElement;
use crate::Result;

pub const DEFAULT_WORD_CAP: usize = 5000;

pub type WeightSpaceModel = QuotientModel;

type Slot = Arc<OnceLock<Result<Arc<WeightSpaceModel>>>>;

pub struct UqMinus {
    datum: Arc<BorcherdsCartanDatum>,
    forms: Arc<Forms>,
    word_cap: usize,
    cache: RwLock<HashMap<RootVector, Slot>>,
}

impl UqMinus {
    pub fn new(datum: BorcherdsCartanDatum, word_cap: usize) -> Self {
        let datum = Arc::new(datum);
        let forms = Arc::new(Forms::new(datum.clone()));
        UqMinus { datum, forms, word_cap, cache: RwLock::new(HashMap::new()) }
    }

    pub fn datum(&self) -> &BorcherdsCartanDatum {
        &self.datum
    }

    pub fn datum_arc(&self) -> Arc<BorcherdsCartanDatum> {
        self.datum.clone()
    }

    pub fn forms(&self) -> &Arc<Forms> {
        &self.forms
    }

    pub fn word_cap(&self) -> usize {
        self.word_cap
    }

    /// Cached, built at most once per weight even under concurrent callers.
    pub fn space(&self, alpha: &RootVector) -> Result<Arc<WeightSpaceModel>> {
        let slot = {
            let r = self.cache.read().unwrap();
            r.get(alpha).cloned()
        };
        let slot = match slot {
            Some(s) => s,
            None => self.cache.write().unwrap().entry(alpha.clone()).or_default().clone(),
        };
        slot.get_or_init(|| self.build_weight_space(alpha).map(Arc::new)).clone()
    }

    pub fn build_weight_space(&self, alpha: &RootVector) -> Result<WeightSpaceModel> {
        let words = words_of_weight(&self.datum, alpha, self.word_cap)?;
        let forms = &self.forms;
        QuotientModel::build(alpha.clone(), words, |x, y| forms.words(FormKind::Kashiwara, x, y))
    }

    pub fn dim(&self, alpha: &RootVector) -> Result<usize> {
        Ok(self.space(alpha)?.dim())
    }

    /// Lusztig Gram matrix on all words of the weight.
    pub fn gram(&self, alpha: &RootVector) -> Result<Matrix<ScalarQ>> {
        let sp = self.space(alpha)?;
        let n = sp.words.len();
        let mut g = Matrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                g[(a, b)] = self.forms.words(FormKind::Lusztig, &sp.words[a], &sp.words[b]);
            }
        }
        Ok(g)
    }

    pub fn reduce(&self, x: &FreeElement) -> Result<UElement> {
        self.space(&x.root)?.reduce(x)
    }

    pub fn is_in_radical(&self, x: &FreeElement) -> Result<bool> {
        Ok(self.reduce(x)?.is_zero())
    }

    pub fn lift(&self, u: &UElement) -> Result<FreeElement> {
        Ok(self.space(&u.root)?.lift(u))
    }

    pub fn one(&self) -> UElement {
        UElement::basis(self.datum.zero_root(), 1, 0)
    }

    pub fn act_mul_b(&self, g: GenIndex, u: &UElement) -> Result<UElement> {
        let src = self.space(&u.root)?;
        let dst = self.space(&u.root.plus_gen(g))?;
        let mut out = dst.zero();
        for (k, c) in u.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = Word::letter(g).concat(src.pivot_word(k));
            out = out.add(&dst.reduce_word(&w)?.scale(c));
        }
        Ok(out)
    }

    pub fn act_e_prime(&self, g: GenIndex, u: &UElement) -> Result<UElement> {
        let Some(root) = u.root.minus_gen(g) else {
            return Ok(u.scale(&ScalarQ::from_int(0)));
        };
        let x = e_prime(&self.datum, g, &self.lift(u)?);
        self.space(&root)?.reduce(&x)
    }

    pub fn act_e_dprime(&self, g: GenIndex, u: &UElement) -> Result<UElement> {
        let Some(root) = u.root.minus_gen(g) else {
            return Ok(u.scale(&ScalarQ::from_int(0)));
        };
        let x = e_dprime(&self.datum, g, &self.lift(u)?);
        self.space(&root)?.reduce(&x)
    }

    pub fn lusztig_form(&self, x: &UElement, y: &UElement) -> Result<ScalarQ> {
        Ok(self.forms.lusztig(&self.lift(x)?, &self.lift(y)?))
    }

    pub fn kashiwara_form(&self, x: &UElement, y: &UElement) -> Result<ScalarQ> {
        Ok(self.forms.kashiwara(&self.lift(x)?, &self.lift(y)?))
    }
}

impl StringModule for UqMinus {
    fn datum(&self) -> &BorcherdsCartanDatum {
        &self.datum
    }
    fn weight_at(&self, alpha: &RootVector) -> Weight {
        self.datum.zero_weight().minus_root(alpha)
    }
    fn dim(&self, alpha: &RootVector) -> Result<usize> {
        UqMinus::dim(self, alpha)
    }
    fn top(&self) -> UElement {
        self.one()
    }
    fn mul_b(&self, g: GenIndex, x: &UElement) -> Result<UElement> {
        self.act_mul_b(g, x)
    }
    fn lower(&self, g: GenIndex, x: &UElement) -> Result<UElement> {
        self.act_e_prime(g, x)
    }
    fn apply_free(&self, p: &FreeElement) -> Result<UElement> {
        self.reduce(p)
    }
    fn representative(&self, x: &UElement) -> Result<FreeElement> {
        self.lift(x)
    }
}

/// `b_i^{(n)} = b_i^n / [n]_i!` for a real vertex; plain power otherwise.
pub fn divided_power(d: &BorcherdsCartanDatum, i: usize, n: u32) -> FreeElement {
    let g = GenIndex::new(i, 1);
    let w = Word(vec![g; n as usize]);
    let x = FreeElement::word(w, d.n());
    if d.is_real(i) {
        x.scale(&ScalarQ::qfactorial(n, d.s[i]).inv().unwrap())
    } else {
        x
    }
}

/// The generators of the radical: quantum Serre elements
/// `sum_{r+s=1-l a_ij} (-1)^r b_i^{(r)} b_jl b_i^{(s)}` for real `i`, and
/// commutators `b_il b_jk - b_jk b_il` when `a_ij = 0`, up to `max_height`.
pub fn radical_generators(d: &BorcherdsCartanDatum, max_height: u32) -> Vec<(String, FreeElement)> {
    let n = d.n();
    let mut out = Vec::new();
    for i in 0..n {
        if !d.is_real(i) {
            continue;
        }
        for j in 0..n {
            if j == i {
                continue;
            }
            let levels: Vec<u32> = if d.is_real(j) { vec![1] } else { (1..=max_height).collect() };
            for l in levels {
                let top = (1 - l as i64 * d.a[i][j]) as u32;
                if top + l > max_height {
                    continue;
                }
                let mid = FreeElement::gen(GenIndex::new(j, l), n);
                let mut x = FreeElement::zero(d.simple_root(i, top).add(&d.simple_root(j, l)));
                for r in 0..=top {
                    let t = divided_power(d, i, r).mul(&mid).mul(&divided_power(d, i, top - r));
                    let sign = if r % 2 == 0 { ScalarQ::one() } else { ScalarQ::from_int(-1) };
                    x = x.add(&t.scale(&sign));
                }
                out.push((format!("serre {} ({},{})", d.id(i), d.id(j), l), x));
            }
        }
    }
    let gens = d.gen_indices(max_height);
    for (a, &g) in gens.iter().enumerate() {
        for &h in &gens[a + 1..] {
            if d.a[g.i][h.i] != 0 || g.l + h.l > max_height {
                continue;
            }
            let x = FreeElement::gen(g, n).mul(&FreeElement::gen(h, n));
            let y = FreeElement::gen(h, n).mul(&FreeElement::gen(g, n));
            out.push((format!("commutator {} {}", d.fmt_gen(g), d.fmt_gen(h)), x.sub(&y)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_space_examples() {
        let u = UqMinus::new(BorcherdsCartanDatum::mixed(), DEFAULT_WORD_CAP);
        let sp = u.space(&RootVector(vec![2, 1])).unwrap();
        assert_eq!(sp.words.len(), 3);
        assert_eq!(sp.dim(), 2);
        let iso = UqMinus::new(BorcherdsCartanDatum::rank_one(0), DEFAULT_WORD_CAP);
        let sp = iso.space(&RootVector(vec![3])).unwrap();
        assert_eq!(sp.words.len(), 4);
        assert_eq!(sp.dim(), 3);
        let real = UqMinus::new(BorcherdsCartanDatum::rank_one(2), DEFAULT_WORD_CAP);
        assert_eq!(real.dim(&RootVector(vec![4])).unwrap(), 1);
    }

    #[test]
    fn radical_examples() {
        let u = UqMinus::new(BorcherdsCartanDatum::mixed(), DEFAULT_WORD_CAP);
        for (name, x) in radical_generators(u.datum(), 5) {
            assert!(u.is_in_radical(&x).unwrap(), "{}", name);
        }
        let b = FreeElement::gen(GenIndex::new(0, 1), 2);
        assert!(!u.is_in_radical(&b.mul(&b)).unwrap());
    }

    #[test]
    fn descended_operators() {
        let iso = UqMinus::new(BorcherdsCartanDatum::rank_one(0), DEFAULT_WORD_CAP);
        let g = GenIndex::new(0, 1);
        let b = iso.act_mul_b(g, &iso.one()).unwrap();
        assert_eq!(iso.lift(&b).unwrap(), FreeElement::gen(g, 1));
        let bb = iso.act_mul_b(g, &b).unwrap();
        assert_eq!(iso.act_e_prime(g, &bb).unwrap(), b.scale(&ScalarQ::from_int(2)));
    }
}
