//! A weight space of the free algebra modulo the radical of a form,
//! presented by a pivot set of words.
//!
//! Forms on words vanish unless the two words use the same letters, so the
//! Gram matrix is block diagonal by content and each block is handled
//! separately. Pivots are chosen greedily in canonical word order.

use std::collections::{BTreeMap, HashMap};

use crate::cartan::RootVector;
use crate::freealg::{FreeElement, Word};
use crate::linalg::{Echelon, Matrix};
use crate::qrat::ScalarQ;
use crate::vector::GradedVector;
use crate::{Error, Result};

#[derive(Debug)]
pub struct QuotientModel {
    pub root: RootVector,
    /// All words of this weight in canonical order.
    pub words: Vec<Word>,
    pub index: HashMap<Word, usize>,
    /// Word indices forming the basis of the quotient, ascending.
    pub pivots: Vec<usize>,
    /// Coordinates of each word's image over the pivots (sparse).
    pub word_coords: Vec<Vec<(usize, ScalarQ)>>,
    /// Word indices grouped by content.
    pub blocks: Vec<Vec<usize>>,
}

impl QuotientModel {
    pub fn build(root: RootVector, words: Vec<Word>, form: impl Fn(&Word, &Word) -> ScalarQ) -> Result<Self> {
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
        let mut by_content: BTreeMap<Vec<_>, Vec<usize>> = BTreeMap::new();
        for (k, w) in words.iter().enumerate() {
            by_content.entry(w.content()).or_default().push(k);
        }
        let blocks: Vec<Vec<usize>> = by_content.into_values().collect();
        let mut block_pivots: Vec<Vec<usize>> = Vec::new();
        let mut block_solutions: Vec<Vec<Vec<ScalarQ>>> = Vec::new();
        for block in &blocks {
            let m = block.len();
            let mut g = Matrix::<ScalarQ>::zeros(m, m);
            for a in 0..m {
                for b in a..m {
                    let v = form(&words[block[a]], &words[block[b]]);
                    g[(a, b)] = v.clone();
                    g[(b, a)] = v;
                }
            }
            let mut ech = Echelon::new(m);
            let mut piv = Vec::new();
            for a in 0..m {
                if ech.insert(g.row(a)) {
                    piv.push(a);
                }
            }
            // coordinates of word b: G_PP^{-1} G_{P,b}
            let r = piv.len();
            let mut sols = vec![Vec::new(); m];
            if r > 0 {
                let gpp = Matrix::from_rows(
                    piv.iter().map(|&a| piv.iter().map(|&b| g[(a, b)].clone()).collect()).collect(),
                    r,
                );
                let inv = gpp.inverse().ok_or_else(|| Error::Internal("singular pivot Gram block".into()))?;
                for b in 0..m {
                    let col: Vec<ScalarQ> = piv.iter().map(|&a| g[(a, b)].clone()).collect();
                    sols[b] = inv.mul_vec(&col);
                }
            }
            block_pivots.push(piv);
            block_solutions.push(sols);
        }
        let mut pivots: Vec<usize> = Vec::new();
        for (block, piv) in blocks.iter().zip(&block_pivots) {
            pivots.extend(piv.iter().map(|&a| block[a]));
        }
        pivots.sort_unstable();
        let pos: HashMap<usize, usize> = pivots.iter().enumerate().map(|(k, &w)| (w, k)).collect();
        let mut word_coords = vec![Vec::new(); words.len()];
        for ((block, piv), sols) in blocks.iter().zip(&block_pivots).zip(&block_solutions) {
            for (b, sol) in sols.iter().enumerate() {
                let mut sparse: Vec<(usize, ScalarQ)> = sol
                    .iter()
                    .zip(piv)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, &a)| (pos[&block[a]], c.clone()))
                    .collect();
                sparse.sort_by_key(|(k, _)| *k);
                word_coords[block[b]] = sparse;
            }
        }
        Ok(QuotientModel { root, words, index, pivots, word_coords, blocks })
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_word(&self, k: usize) -> &Word {
        &self.words[self.pivots[k]]
    }

    pub fn zero(&self) -> GradedVector {
        GradedVector::zero(self.root.clone(), self.dim())
    }

    pub fn reduce_word(&self, w: &Word) -> Result<GradedVector> {
        let k = *self.index.get(w).ok_or_else(|| Error::Internal("word outside its weight space".into()))?;
        let mut v = self.zero();
        for (p, c) in &self.word_coords[k] {
            v.coords[*p] = c.clone();
        }
        Ok(v)
    }

    pub fn reduce(&self, x: &FreeElement) -> Result<GradedVector> {
        if x.root != self.root && !x.is_zero() {
            return Err(Error::Internal("reducing an element of another weight".into()));
        }
        let mut v = self.zero();
        for (w, c) in &x.terms {
            let k = *self.index.get(w).ok_or_else(|| Error::Internal("word outside its weight space".into()))?;
            for (p, a) in &self.word_coords[k] {
                v.coords[*p] = &v.coords[*p] + &(a * c);
            }
        }
        Ok(v)
    }

    pub fn lift(&self, v: &GradedVector) -> FreeElement {
        let mut x = FreeElement::zero(self.root.clone());
        for (k, c) in v.coords.iter().enumerate() {
            x.add_term(self.pivot_word(k).clone(), c.clone());
        }
        x
    }
}
