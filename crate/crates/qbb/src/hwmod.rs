//! Irreducible highest weight modules `V(λ)`, built as `U^-` modulo the
//! kernel of the contravariant form, with the `E_il` action.
//!
//! The form on words is computed by peeling the first letter:
//! `(b_il W v, T v) = (W v, E_il T v)` where
//! `E_il (T v) = τ_il [e'_il T - q_i^{2l<h_i, λ-α> + 2l² a_ii} e''_il T] v`
//! and `-α` is the weight of `T`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::cartan::{BorcherdsCartanDatum, GenIndex, RootVector, Weight};
use crate::freealg::{e_dprime, e_prime, tau, words_of_weight, FreeElement, Word};
use crate::qrat::ScalarQ;
use crate::quotient::QuotientModel;
use crate::strings::StringModule;
use crate::uqminus::UqMinus;
use crate::vector::{UElement, VElement};
use crate::{Error, Result};

type Slot = Arc<OnceLock<Result<Arc<QuotientModel>>>>;

pub struct HWModule {
    datum: Arc<BorcherdsCartanDatum>,
    lambda: Weight,
    word_cap: usize,
    memo: RwLock<HashMap<(Word, Word), ScalarQ>>,
    cache: RwLock<HashMap<RootVector, Slot>>,
}

impl HWModule {
    pub fn new(datum: BorcherdsCartanDatum, lambda: Weight, word_cap: usize) -> Result<Self> {
        if !lambda.is_dominant(&datum) {
            return Err(Error::Domain("highest weight must be dominant".into()));
        }
        Ok(HWModule {
            datum: Arc::new(datum),
            lambda,
            word_cap,
            memo: RwLock::new(HashMap::new()),
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// `λ = sum m_i Λ_i`
    pub fn from_multiplicities(datum: BorcherdsCartanDatum, m: Vec<i64>, word_cap: usize) -> Result<Self> {
        HWModule::new(datum, Weight::from_fund(m), word_cap)
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn datum_ref(&self) -> &BorcherdsCartanDatum {
        &self.datum
    }

    /// `q_i^{2l<h_i, λ-α> + 2l² a_ii}` where `λ - α` is the weight of `T`.
    fn e_twist(&self, g: GenIndex, alpha: &RootVector) -> ScalarQ {
        let d = &*self.datum;
        let h = d.pairing(g.i, &self.lambda.minus_root(alpha));
        let l = g.l as i64;
        ScalarQ::q_pow(d.s[g.i] * (2 * l * h + 2 * l * l * d.a[g.i][g.i]))
    }

    /// `E_il` at the free-algebra level: returns `P` with `E_il(T v) = P v`.
    pub fn e_free(&self, g: GenIndex, t: &FreeElement) -> FreeElement {
        let d = &*self.datum;
        let Some(root) = t.root.minus_gen(g) else {
            return FreeElement::zero(t.root.clone());
        };
        if t.is_zero() {
            return FreeElement::zero(root);
        }
        let x = e_prime(d, g, t).sub(&e_dprime(d, g, t).scale(&self.e_twist(g, &t.root)));
        x.scale(&tau(d, g))
    }

    /// `(S v_λ, T v_λ)` for words of equal weight.
    pub fn form_words(&self, s: &Word, t: &Word) -> ScalarQ {
        if s.len() != t.len() && (s.is_empty() || t.is_empty()) {
            return if s == t { ScalarQ::one() } else { ScalarQ::zero() };
        }
        if s.is_empty() {
            return ScalarQ::one();
        }
        if s.content() != t.content() {
            return ScalarQ::zero();
        }
        let key = if s <= t { (s.clone(), t.clone()) } else { (t.clone(), s.clone()) };
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            return v.clone();
        }
        let n = self.datum.n();
        let g = s.0[0];
        let rest = Word(s.0[1..].to_vec());
        let et = self.e_free(g, &FreeElement::word(t.clone(), n));
        let mut acc = ScalarQ::zero();
        for (w, c) in &et.terms {
            let v = self.form_words(&rest, w);
            if !v.is_zero() {
                acc = &acc + &(c * &v);
            }
        }
        self.memo.write().unwrap().insert(key, acc.clone());
        acc
    }

    /// Contravariant form on free-algebra representatives.
    pub fn contravariant_form(&self, s: &FreeElement, t: &FreeElement) -> Result<ScalarQ> {
        if s.root != t.root {
            return Err(Error::Domain("contravariant form of different weights".into()));
        }
        let mut acc = ScalarQ::zero();
        for (w1, c1) in &s.terms {
            for (w2, c2) in &t.terms {
                let v = self.form_words(w1, w2);
                if !v.is_zero() {
                    acc = &acc + &(&(c1 * c2) * &v);
                }
            }
        }
        Ok(acc)
    }

    pub fn form(&self, x: &VElement, y: &VElement) -> Result<ScalarQ> {
        self.contravariant_form(&self.lift(x)?, &self.lift(y)?)
    }

    pub fn space(&self, alpha: &RootVector) -> Result<Arc<QuotientModel>> {
        let slot = {
            let r = self.cache.read().unwrap();
            r.get(alpha).cloned()
        };
        let slot = match slot {
            Some(s) => s,
            None => self.cache.write().unwrap().entry(alpha.clone()).or_default().clone(),
        };
        slot.get_or_init(|| {
            let words = words_of_weight(&self.datum, alpha, self.word_cap)?;
            QuotientModel::build(alpha.clone(), words, |x, y| self.form_words(x, y)).map(Arc::new)
        })
        .clone()
    }

    pub fn highest(&self) -> VElement {
        VElement::basis(self.datum.zero_root(), 1, 0)
    }

    pub fn reduce(&self, p: &FreeElement) -> Result<VElement> {
        self.space(&p.root)?.reduce(p)
    }

    pub fn lift(&self, x: &VElement) -> Result<FreeElement> {
        Ok(self.space(&x.root)?.lift(x))
    }

    pub fn act_mul_b(&self, g: GenIndex, x: &VElement) -> Result<VElement> {
        let src = self.space(&x.root)?;
        let dst = self.space(&x.root.plus_gen(g))?;
        let mut out = dst.zero();
        for (k, c) in x.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&dst.reduce_word(&Word::letter(g).concat(src.pivot_word(k)))?.scale(c));
        }
        Ok(out)
    }

    pub fn e_action(&self, g: GenIndex, x: &VElement) -> Result<VElement> {
        let Some(root) = x.root.minus_gen(g) else {
            return Ok(x.scale(&ScalarQ::zero()));
        };
        let p = self.e_free(g, &self.lift(x)?);
        self.space(&root)?.reduce(&p)
    }

    /// `π_λ`: `P ↦ P v_λ`, on `U^-` coordinates.
    pub fn pi_lambda(&self, u: &UqMinus, x: &UElement) -> Result<VElement> {
        self.reduce(&u.lift(x)?)
    }

    /// Realized degrees: those with nonzero weight space, up to `max_height`.
    pub fn realized(&self, max_height: u32) -> Result<Vec<RootVector>> {
        let mut out = Vec::new();
        for h in 0..=max_height {
            for a in RootVector::of_height(self.datum.n(), h) {
                if self.space(&a)?.dim() > 0 {
                    out.push(a);
                }
            }
        }
        Ok(out)
    }
}

impl StringModule for HWModule {
    fn datum(&self) -> &BorcherdsCartanDatum {
        &self.datum
    }
    fn weight_at(&self, alpha: &RootVector) -> Weight {
        self.lambda.minus_root(alpha)
    }
    fn dim(&self, alpha: &RootVector) -> Result<usize> {
        Ok(self.space(alpha)?.dim())
    }
    fn top(&self) -> VElement {
        self.highest()
    }
    fn mul_b(&self, g: GenIndex, x: &VElement) -> Result<VElement> {
        self.act_mul_b(g, x)
    }
    fn lower(&self, g: GenIndex, x: &VElement) -> Result<VElement> {
        self.e_action(g, x)
    }
    fn apply_free(&self, p: &FreeElement) -> Result<VElement> {
        self.reduce(p)
    }
    fn representative(&self, x: &VElement) -> Result<FreeElement> {
        self.lift(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uqminus::DEFAULT_WORD_CAP;

    fn g(i: usize, l: u32) -> GenIndex {
        GenIndex::new(i, l)
    }

    #[test]
    fn isotropic_norms() {
        for m in 0..4 {
            let v =
                HWModule::from_multiplicities(BorcherdsCartanDatum::rank_one(0), vec![m], DEFAULT_WORD_CAP).unwrap();
            let w = Word::letter(g(0, 1));
            let norm = v.form_words(&w, &w);
            if m == 0 {
                assert!(norm.is_zero());
                assert_eq!(v.space(&RootVector(vec![1])).unwrap().dim(), 0);
            } else {
                let want = &ScalarQ::one_minus_q_pow(2 * m) / &ScalarQ::one_minus_q_pow(2);
                assert_eq!(norm, want);
                let bv = v.act_mul_b(g(0, 1), &v.highest()).unwrap();
                assert_eq!(v.e_action(g(0, 1), &bv).unwrap(), v.highest().scale(&want));
            }
        }
    }

    #[test]
    fn sl2_fundamental() {
        let v = HWModule::from_multiplicities(BorcherdsCartanDatum::rank_one(2), vec![1], DEFAULT_WORD_CAP).unwrap();
        let w = Word::letter(g(0, 1));
        assert_eq!(v.form_words(&w, &w), ScalarQ::one());
        let bv = v.act_mul_b(g(0, 1), &v.highest()).unwrap();
        assert_eq!(v.e_action(g(0, 1), &bv).unwrap(), v.highest());
        assert!(v.e_action(g(0, 1), &v.highest()).unwrap().is_zero());
        assert_eq!(v.space(&RootVector(vec![2])).unwrap().dim(), 0);
    }

    /// Free-word action of the raising operators defined only by
    /// `a_g v = 0` and `a_g b_h - b_h a_g = δ τ_g (K_i^l - K_i^{-l})`.
    fn raise(v: &HWModule, g: GenIndex, w: &Word) -> Vec<(Word, ScalarQ)> {
        let d = v.datum_ref();
        if w.is_empty() {
            return vec![];
        }
        let h = w.0[0];
        let rest = Word(w.0[1..].to_vec());
        let mut out: Vec<(Word, ScalarQ)> =
            raise(v, g, &rest).into_iter().map(|(x, c)| (Word::letter(h).concat(&x), c)).collect();
        if h == g {
            let e = d.s[g.i] * g.l as i64 * d.pairing(g.i, &v.lambda().minus_root(&rest.weight(d.n())));
            let c = &tau(d, g) * &(&ScalarQ::q_pow(e) - &ScalarQ::q_pow(-e));
            out.push((rest, c));
        }
        out
    }

    fn oracle_form(v: &HWModule, s: &Word, t: &Word) -> ScalarQ {
        if s.is_empty() {
            return if t.is_empty() { ScalarQ::one() } else { ScalarQ::zero() };
        }
        let d = v.datum_ref();
        let g = s.0[0];
        let rest = Word(s.0[1..].to_vec());
        let e = d.s[g.i] * g.l as i64 * d.pairing(g.i, &v.lambda().minus_root(&rest.weight(d.n())));
        let mut acc = ScalarQ::zero();
        for (w, c) in raise(v, g, t) {
            acc = &acc + &(&c * &oracle_form(v, &rest, &w));
        }
        -(&ScalarQ::q_pow(e) * &acc)
    }

    #[test]
    fn form_matches_commutation_oracle() {
        let cases = [
            (BorcherdsCartanDatum::mixed(), vec![1, 1], 4),
            (BorcherdsCartanDatum::mixed(), vec![2, 0], 4),
            (BorcherdsCartanDatum::rank_one(0), vec![2], 4),
            (BorcherdsCartanDatum::rank_one(-2), vec![1], 4),
        ];
        for (d, m, hmax) in cases {
            let v = HWModule::from_multiplicities(d.clone(), m, DEFAULT_WORD_CAP).unwrap();
            for h in 1..=hmax {
                for a in RootVector::of_height(d.n(), h) {
                    let words = words_of_weight(&d, &a, DEFAULT_WORD_CAP).unwrap();
                    for s in &words {
                        for t in &words {
                            assert_eq!(v.form_words(s, t), oracle_form(&v, s, t), "{} {}", s.render(&d), t.render(&d));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn non_dominant_rejected() {
        assert!(HWModule::from_multiplicities(BorcherdsCartanDatum::rank_one(2), vec![-1], 10).is_err());
    }
}
