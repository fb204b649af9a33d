//! The free algebra on the primitive generators `b_il`, graded by `R_+`,
//! with the star and bar maps, the operators `e'_il`, `e''_il`, the
//! twisted coproduct, and the Lusztig and Kashiwara forms.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use crate::cartan::{BorcherdsCartanDatum, GenIndex, RootVector};
use crate::qrat::ScalarQ;
use crate::{Error, Result};

/// A monomial `b_{i1 l1} ... b_{ir lr}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word(pub Vec<GenIndex>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(g: GenIndex) -> Word {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self, n: usize) -> RootVector {
        let mut v = vec![0; n];
        for g in &self.0 {
            v[g.i] += g.l;
        }
        RootVector(v)
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(&o.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    pub fn without(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        v.remove(k);
        Word(v)
    }

    /// Letters sorted, as a key for the content grading.
    pub fn content(&self) -> Vec<GenIndex> {
        let mut v = self.0.clone();
        v.sort_unstable();
        v
    }

    pub fn render(&self, d: &BorcherdsCartanDatum) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0.iter().map(|&g| d.fmt_gen(g)).collect()
    }
}

/// Canonical order: by length, then lexicographic on `(vertex, level)`.
impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// All words of weight `alpha`, in canonical order. Errors if there are
/// more than `cap`.
pub fn words_of_weight(d: &BorcherdsCartanDatum, alpha: &RootVector, cap: usize) -> Result<Vec<Word>> {
    fn rec(
        gens: &[GenIndex],
        rest: &mut RootVector,
        prefix: &mut Vec<GenIndex>,
        out: &mut Vec<Word>,
        cap: usize,
    ) -> bool {
        if rest.is_zero() {
            out.push(Word(prefix.clone()));
            return out.len() <= cap;
        }
        for &g in gens {
            if rest.0[g.i] >= g.l {
                rest.0[g.i] -= g.l;
                prefix.push(g);
                let ok = rec(gens, rest, prefix, out, cap);
                prefix.pop();
                rest.0[g.i] += g.l;
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    let gens = d.gen_indices(alpha.height());
    let mut out = Vec::new();
    if !rec(&gens, &mut alpha.clone(), &mut Vec::new(), &mut out, cap) {
        return Err(Error::Cap(format!("more than {} words at weight {:?}", cap, alpha.0)));
    }
    out.sort();
    Ok(out)
}

/// A homogeneous element of the free algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeElement {
    pub root: RootVector,
    pub terms: BTreeMap<Word, ScalarQ>,
}

impl FreeElement {
    pub fn zero(root: RootVector) -> Self {
        FreeElement { root, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        FreeElement::word(Word::empty(), n)
    }

    pub fn word(w: Word, n: usize) -> Self {
        let root = w.weight(n);
        let mut terms = BTreeMap::new();
        terms.insert(w, ScalarQ::one());
        FreeElement { root, terms }
    }

    pub fn gen(g: GenIndex, n: usize) -> Self {
        FreeElement::word(Word::letter(g), n)
    }

    pub fn from_terms(root: RootVector, terms: impl IntoIterator<Item = (Word, ScalarQ)>) -> Self {
        let mut x = FreeElement::zero(root);
        for (w, c) in terms {
            x.add_term(w, c);
        }
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: ScalarQ) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(w.weight(self.root.0.len()), self.root, "inhomogeneous term");
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add(&self, o: &FreeElement) -> FreeElement {
        let mut x = self.clone();
        if x.is_zero() && x.root != o.root {
            x.root = o.root.clone();
        }
        for (w, c) in &o.terms {
            x.add_term(w.clone(), c.clone());
        }
        x
    }

    pub fn sub(&self, o: &FreeElement) -> FreeElement {
        self.add(&o.scale(&ScalarQ::from_int(-1)))
    }

    pub fn scale(&self, c: &ScalarQ) -> FreeElement {
        if c.is_zero() {
            return FreeElement::zero(self.root.clone());
        }
        FreeElement { root: self.root.clone(), terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn mul(&self, o: &FreeElement) -> FreeElement {
        let mut x = FreeElement::zero(self.root.add(&o.root));
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                x.add_term(w1.concat(w2), c1 * c2);
            }
        }
        x
    }

    /// Anti-involution fixing each `b_il`: reverse every word.
    pub fn star(&self) -> FreeElement {
        FreeElement {
            root: self.root.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.reversed(), c.clone())).collect(),
        }
    }

    /// Bar involution: generators are fixed, coefficients are barred.
    pub fn bar(&self) -> FreeElement {
        FreeElement { root: self.root.clone(), terms: self.terms.iter().map(|(w, c)| (w.clone(), c.bar())).collect() }
    }

    pub fn render(&self, d: &BorcherdsCartanDatum) -> String {
        render_terms(self.terms.iter().map(|(w, c)| (w.render(d), c)))
    }
}

pub(crate) fn render_terms<'a>(terms: impl Iterator<Item = (String, &'a ScalarQ)>) -> String {
    let parts: Vec<String> = terms
        .map(|(w, c)| {
            if c.is_one() {
                w
            } else if w == "1" || w.is_empty() {
                format!("({})", c)
            } else {
                format!("({})*{}", c, w)
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Parse a homogeneous element such as `2*(1,1)(2,1) - 1/3*b(2,2)`.
///
/// A term is an optional coefficient and a monomial. Coefficients are
/// rationals (`3`, `-1/2`) or a parenthesized scalar in `q` followed by `*`
/// (`(1 + q^2)*(1,1)`); letters are `(i,l)` or `b(i,l)` with vertex ids; the
/// empty word is `1`. The output of `FreeElement::render` parses back.
pub fn parse_element(d: &BorcherdsCartanDatum, s: &str) -> Result<FreeElement> {
    let perr = |msg: String| Error::Parse { line: 0, msg };
    let mut terms: Vec<(bool, &str)> = Vec::new();
    let (mut depth, mut start, mut neg) = (0i32, 0usize, false);
    for (k, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 => {
                let t = s[start..k].trim();
                if !t.is_empty() {
                    terms.push((neg, t));
                } else if !terms.is_empty() || start != 0 {
                    return Err(perr(format!("empty term in `{}`", s)));
                }
                neg = ch == '-';
                start = k + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(perr(format!("unbalanced parentheses in `{}`", s)));
        }
    }
    if depth != 0 {
        return Err(perr(format!("unbalanced parentheses in `{}`", s)));
    }
    let last = s[start..].trim();
    if last.is_empty() {
        return Err(perr(format!("empty term in `{}`", s)));
    }
    terms.push((neg, last));

    let mut out: Option<FreeElement> = None;
    for (neg, t) in terms {
        let (c, w) = parse_term(d, t)?;
        let c = if neg { -c } else { c };
        let root = w.weight(d.n());
        let x = out.get_or_insert_with(|| FreeElement::zero(root.clone()));
        if x.root != root {
            return Err(perr(format!("term `{}` has a different degree from the first term", t)));
        }
        x.add_term(w, c);
    }
    Ok(out.expect("at least one term"))
}

fn parse_term(d: &BorcherdsCartanDatum, t: &str) -> Result<(ScalarQ, Word)> {
    let mut depth = 0i32;
    let star = t.char_indices().find(|&(_, ch)| {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        ch == '*' && depth == 0
    });
    if let Some((k, _)) = star {
        return Ok((crate::qrat::parse_scalar(&t[..k])?, parse_word(d, t[k + 1..].trim())?));
    }
    let split = t.find(|ch: char| !(ch.is_ascii_digit() || ch == '/' || ch.is_whitespace())).unwrap_or(t.len());
    let (num, rest) = (t[..split].trim(), t[split..].trim());
    if num.is_empty() {
        if is_letter_sequence(rest) {
            return Ok((ScalarQ::one(), parse_word(d, rest)?));
        }
        return Ok((crate::qrat::parse_scalar(rest)?, Word::empty()));
    }
    let c = crate::qrat::parse_scalar(num)?;
    if rest.is_empty() {
        Ok((c, Word::empty()))
    } else {
        Ok((c, parse_word(d, rest)?))
    }
}

fn is_letter_sequence(s: &str) -> bool {
    let s = s.trim_start_matches('b');
    s.starts_with('(') && s.split(')').next().is_some_and(|x| x.contains(','))
}

fn parse_word(d: &BorcherdsCartanDatum, s: &str) -> Result<Word> {
    let perr = |msg: String| Error::Parse { line: 0, msg };
    if s == "1" {
        return Ok(Word::empty());
    }
    let mut letters = Vec::new();
    let mut rest = s.trim();
    if rest.is_empty() {
        return Err(perr("missing monomial".into()));
    }
    while !rest.is_empty() {
        rest = rest.strip_prefix('b').unwrap_or(rest).trim_start();
        let body = rest.strip_prefix('(').ok_or_else(|| perr(format!("expected `(i,l)` at `{}`", rest)))?;
        let close = body.find(')').ok_or_else(|| perr(format!("unclosed letter in `{}`", s)))?;
        let (i, l) =
            body[..close].split_once(',').ok_or_else(|| perr(format!("letter `({})` needs i,l", &body[..close])))?;
        let i: u32 = i.trim().parse().map_err(|_| perr(format!("`{}` is not a vertex id", i.trim())))?;
        let l: u32 = l.trim().parse().map_err(|_| perr(format!("`{}` is not a level", l.trim())))?;
        let vi = d.index_of(i).map_err(|_| perr(format!("unknown vertex {}", i)))?;
        if l == 0 || (d.is_real(vi) && l != 1) {
            return Err(perr(format!("no generator ({},{}) at this vertex", i, l)));
        }
        letters.push(GenIndex::new(vi, l));
        rest = body[close + 1..].trim_start();
    }
    Ok(Word(letters))
}

/// `q_i^{-l * sum_{m<p} k_m a_{i j_m}}` for every position `p` holding
/// `(i,l)`, paired with the word with that letter removed.
fn e_prime_word(d: &BorcherdsCartanDatum, g: GenIndex, w: &Word, sign: i64) -> Vec<(Word, ScalarQ)> {
    let mut out = Vec::new();
    let mut acc = 0i64;
    for (p, h) in w.0.iter().enumerate() {
        if *h == g {
            let e = sign * d.s[g.i] * g.l as i64 * acc;
            out.push((w.without(p), ScalarQ::q_pow(e)));
        }
        acc += h.l as i64 * d.a[g.i][h.i];
    }
    out
}

/// `e'_il`: `e'(b_jk S) = δ S + q_i^{-kl a_ij} b_jk e'(S)`.
pub fn e_prime(d: &BorcherdsCartanDatum, g: GenIndex, x: &FreeElement) -> FreeElement {
    apply_e(d, g, x, -1)
}

/// `e''_il`: `e''(b_jk S) = δ S + q_i^{kl a_ij} b_jk e''(S)`.
pub fn e_dprime(d: &BorcherdsCartanDatum, g: GenIndex, x: &FreeElement) -> FreeElement {
    apply_e(d, g, x, 1)
}

fn apply_e(d: &BorcherdsCartanDatum, g: GenIndex, x: &FreeElement, sign: i64) -> FreeElement {
    let Some(root) = x.root.minus_gen(g) else {
        return FreeElement::zero(x.root.clone());
    };
    let mut y = FreeElement::zero(root);
    for (w, c) in &x.terms {
        for (w2, f) in e_prime_word(d, g, w, sign) {
            y.add_term(w2, c * &f);
        }
    }
    y
}

/// An element of `F ⊗ F` with the twisted product
/// `(x1⊗x2)(y1⊗y2) = q^{-(|x2|,|y1|)} x1y1 ⊗ x2y2`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TwistedTensor {
    pub terms: BTreeMap<(Word, Word), ScalarQ>,
}

impl TwistedTensor {
    pub fn one() -> Self {
        let mut t = TwistedTensor::default();
        t.terms.insert((Word::empty(), Word::empty()), ScalarQ::one());
        t
    }

    pub fn add_term(&mut self, k: (Word, Word), c: ScalarQ) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k.clone()).or_insert_with(ScalarQ::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn mul(&self, o: &TwistedTensor, d: &BorcherdsCartanDatum) -> TwistedTensor {
        let n = d.n();
        let mut out = TwistedTensor::default();
        for ((x1, x2), c) in &self.terms {
            let w2 = x2.weight(n);
            for ((y1, y2), c2) in &o.terms {
                let tw = ScalarQ::q_pow(-d.root_form(&w2, &y1.weight(n)));
                out.add_term((x1.concat(y1), x2.concat(y2)), &(c * c2) * &tw);
            }
        }
        out
    }

    /// Degree-`(a, b)` component coefficient lookup.
    pub fn coeff(&self, x: &Word, y: &Word) -> ScalarQ {
        self.terms.get(&(x.clone(), y.clone())).cloned().unwrap_or_else(ScalarQ::zero)
    }
}

/// Algebra map with `δ(b_il) = b_il ⊗ 1 + 1 ⊗ b_il`.
pub fn coproduct(d: &BorcherdsCartanDatum, x: &FreeElement) -> TwistedTensor {
    let mut out = TwistedTensor::default();
    for (w, c) in &x.terms {
        let mut acc = TwistedTensor::one();
        for &g in &w.0 {
            let mut prim = TwistedTensor::default();
            prim.add_term((Word::letter(g), Word::empty()), ScalarQ::one());
            prim.add_term((Word::empty(), Word::letter(g)), ScalarQ::one());
            acc = acc.mul(&prim, d);
        }
        for (k, v) in acc.terms {
            out.add_term(k, &v * c);
        }
    }
    out
}

/// `τ_il = (1 - q_i^{2l})^{-1}`
pub fn tau(d: &BorcherdsCartanDatum, g: GenIndex) -> ScalarQ {
    ScalarQ::one_minus_q_pow(2 * d.s[g.i] * g.l as i64).inv().unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    Lusztig,
    Kashiwara,
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormKind::Lusztig => "L",
            FormKind::Kashiwara => "K",
        })
    }
}

/// Memoized word-level forms for one datum. The memo is a pure cache and
/// may be shared between threads.
pub struct Forms {
    datum: Arc<BorcherdsCartanDatum>,
    memo: RwLock<HashMap<(FormKind, Word, Word), ScalarQ>>,
}

impl Forms {
    pub fn new(datum: Arc<BorcherdsCartanDatum>) -> Self {
        Forms { datum, memo: RwLock::new(HashMap::new()) }
    }

    pub fn datum(&self) -> &BorcherdsCartanDatum {
        &self.datum
    }

    /// Word-level value. Both forms peel the first letter of `x` and match
    /// it against every occurrence in `y`; they differ only in the base
    /// value `(b_il, b_il)`, which is `τ_il` for L and `1` for K.
    pub fn words(&self, kind: FormKind, x: &Word, y: &Word) -> ScalarQ {
        if x.len() != y.len() {
            return ScalarQ::zero();
        }
        if x.is_empty() {
            return ScalarQ::one();
        }
        if x.content() != y.content() {
            return ScalarQ::zero();
        }
        let key = if x <= y { (kind, x.clone(), y.clone()) } else { (kind, y.clone(), x.clone()) };
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            return v.clone();
        }
        let d = &*self.datum;
        let g = x.0[0];
        let rest = Word(x.0[1..].to_vec());
        let mut acc = ScalarQ::zero();
        for (w, f) in e_prime_word(d, g, y, -1) {
            let v = self.words(kind, &rest, &w);
            if !v.is_zero() {
                acc = &acc + &(&f * &v);
            }
        }
        if kind == FormKind::Lusztig {
            acc = &acc * &tau(d, g);
        }
        self.memo.write().unwrap().insert(key, acc.clone());
        acc
    }

    pub fn pair(&self, kind: FormKind, x: &FreeElement, y: &FreeElement) -> ScalarQ {
        if x.root != y.root {
            return ScalarQ::zero();
        }
        let mut acc = ScalarQ::zero();
        for (w1, c1) in &x.terms {
            for (w2, c2) in &y.terms {
                let v = self.words(kind, w1, w2);
                if !v.is_zero() {
                    acc = &acc + &(&(c1 * c2) * &v);
                }
            }
        }
        acc
    }

    pub fn lusztig(&self, x: &FreeElement, y: &FreeElement) -> ScalarQ {
        self.pair(FormKind::Lusztig, x, y)
    }

    pub fn kashiwara(&self, x: &FreeElement, y: &FreeElement) -> ScalarQ {
        self.pair(FormKind::Kashiwara, x, y)
    }

    /// Factor-wise Lusztig pairing of two tensors.
    pub fn lusztig_tensor(&self, x: &TwistedTensor, y: &TwistedTensor) -> ScalarQ {
        let mut acc = ScalarQ::zero();
        for ((a1, a2), c1) in &x.terms {
            for ((b1, b2), c2) in &y.terms {
                let v1 = self.words(FormKind::Lusztig, a1, b1);
                if v1.is_zero() {
                    continue;
                }
                let v2 = self.words(FormKind::Lusztig, a2, b2);
                acc = &acc + &(&(&(c1 * c2) * &v1) * &v2);
            }
        }
        acc
    }
}

/// `prod_s (1 - q_{i_s}^{2 l_s})`, the factor relating L and K on a word.
pub fn lusztig_to_kashiwara_factor(d: &BorcherdsCartanDatum, w: &Word) -> ScalarQ {
    w.0.iter().fold(ScalarQ::one(), |acc, &g| &acc * &ScalarQ::one_minus_q_pow(2 * d.s[g.i] * g.l as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: usize, l: u32) -> GenIndex {
        GenIndex::new(i, l)
    }

    #[test]
    fn parse_elements() {
        let d = BorcherdsCartanDatum::mixed();
        let x = parse_element(&d, "2*(1,1)(2,1) - 1/3*b(2,1)b(1,1)").unwrap();
        assert_eq!(x.terms.len(), 2);
        assert_eq!(x.terms[&Word(vec![g(0, 1), g(1, 1)])], ScalarQ::from_int(2));
        assert_eq!(
            x.terms[&Word(vec![g(1, 1), g(0, 1)])],
            -ScalarQ::from_rational(crate::Rat::new(1.into(), 3.into()))
        );
        assert_eq!(parse_element(&d, "b(1,1)").unwrap(), FreeElement::gen(g(0, 1), 2));
        assert_eq!(parse_element(&d, "1").unwrap(), FreeElement::one(2));
        let y = parse_element(&d, "(1 + q^2)*(2,2) + 3(2,1)(2,1)").unwrap();
        assert_eq!(parse_element(&d, &y.render(&d)).unwrap(), y);
        assert_eq!(parse_element(&d, "(1,1) - (1,1)").unwrap(), FreeElement::zero(d.simple_root(0, 1)));
        for bad in ["(1,1) + (2,1)", "(1,2)", "(3,1)", "(1,1", "2*", "(1,1) +", "x"] {
            assert!(matches!(parse_element(&d, bad), Err(Error::Parse { .. })), "{}", bad);
        }
    }

    #[test]
    fn product_star_bar() {
        let x = FreeElement::gen(g(0, 1), 2).mul(&FreeElement::gen(g(1, 1), 2));
        assert_eq!(x.terms.keys().next().unwrap(), &Word(vec![g(0, 1), g(1, 1)]));
        assert_eq!(x.star().terms.keys().next().unwrap(), &Word(vec![g(1, 1), g(0, 1)]));
        let y = FreeElement::gen(g(0, 1), 1)
            .scale(&ScalarQ::from_int(2))
            .mul(&FreeElement::gen(g(0, 1), 1).scale(&ScalarQ::from_int(3)));
        assert_eq!(y.terms.values().next().unwrap(), &ScalarQ::from_int(6));
        let z = y.scale(&ScalarQ::q());
        assert_eq!(z.bar().terms.values().next().unwrap(), &(&ScalarQ::from_int(6) * &ScalarQ::q_pow(-1)));
    }

    #[test]
    fn e_prime_examples() {
        let iso = BorcherdsCartanDatum::rank_one(0);
        let b = FreeElement::gen(g(0, 1), 1);
        assert_eq!(e_prime(&iso, g(0, 1), &b), FreeElement::one(1));
        let b2 = b.mul(&b);
        assert_eq!(e_prime(&iso, g(0, 1), &b2), b.scale(&ScalarQ::from_int(2)));
        let real = BorcherdsCartanDatum::rank_one(2);
        assert_eq!(e_prime(&real, g(0, 1), &b2), b.scale(&ScalarQ::laurent_i64(-2, &[1, 0, 1])));
        assert!(e_prime(&iso, g(0, 1), &FreeElement::one(1)).is_zero());
    }

    #[test]
    fn coproduct_examples() {
        let iso = BorcherdsCartanDatum::rank_one(0);
        let b = FreeElement::gen(g(0, 1), 1);
        let w1 = Word::letter(g(0, 1));
        let w2 = Word(vec![g(0, 1), g(0, 1)]);
        let t = coproduct(&iso, &b.mul(&b));
        assert_eq!(t.coeff(&w1, &w1), ScalarQ::from_int(2));
        assert_eq!(t.coeff(&w2, &Word::empty()), ScalarQ::one());
        let neg = BorcherdsCartanDatum::rank_one(-2);
        let t = coproduct(&neg, &b.mul(&b));
        assert_eq!(t.coeff(&w1, &w1), ScalarQ::laurent_i64(0, &[1, 0, 1]));
        assert_eq!(t.coeff(&Word::empty(), &w2), ScalarQ::one());
    }

    #[test]
    fn form_examples() {
        let iso = Arc::new(BorcherdsCartanDatum::rank_one(0));
        let f = Forms::new(iso.clone());
        let b = FreeElement::gen(g(0, 1), 1);
        let t = ScalarQ::one_minus_q_pow(2).inv().unwrap();
        assert_eq!(f.lusztig(&b, &b), t);
        assert_eq!(f.kashiwara(&b, &b), ScalarQ::one());
        let b2 = b.mul(&b);
        assert_eq!(f.lusztig(&b2, &b2), &ScalarQ::from_int(2) * &(&t * &t));
        assert_eq!(f.kashiwara(&b2, &b2), ScalarQ::from_int(2));
        assert!(f.lusztig(&b, &FreeElement::gen(g(0, 2), 1)).is_zero());
        assert_eq!(f.kashiwara(&FreeElement::one(1), &FreeElement::one(1)), ScalarQ::one());
    }

    #[test]
    fn words_enumeration() {
        let iso = BorcherdsCartanDatum::rank_one(0);
        let w = words_of_weight(&iso, &RootVector(vec![3]), 100).unwrap();
        assert_eq!(w.len(), 4);
        assert!(words_of_weight(&iso, &RootVector(vec![6]), 10).is_err());
    }
}
