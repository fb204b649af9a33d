//! Exact arithmetic in Q(q).
//!
//! A `ScalarQ` is stored as `q^shift * N(q) / D(q)` with `N(0) != 0`,
//! `D(0) = 1` and `gcd(N, D) = 1`. That form is unique, so equality is
//! structural and `val0` is just `shift`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::Poly;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarQ {
    shift: i64,
    num: Poly,
    den: Poly,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ScalarQ {
    /// Normalize `q^shift * num / den` for arbitrary nonzero `den`.
    fn build(shift: i64, num: Poly, den: Poly) -> ScalarQ {
        if num.is_zero() {
            return ScalarQ::zero();
        }
        let nl = num.low_degree().unwrap();
        let dl = den.low_degree().expect("zero denominator");
        let mut num = num.shift_down(nl);
        let mut den = den.shift_down(dl);
        let shift = shift + nl as i64 - dl as i64;
        if !den.is_one() {
            let g = num.gcd(&den);
            if g.degree().unwrap_or(0) > 0 {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
        }
        let c0 = den.coeff(0);
        if !c0.is_one() {
            let inv = c0.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        ScalarQ { shift, num, den }
    }

    pub fn from_rational(c: BigRational) -> ScalarQ {
        if c.is_zero() {
            return ScalarQ::zero();
        }
        ScalarQ { shift: 0, num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_int(n: i64) -> ScalarQ {
        ScalarQ::from_rational(rat(n))
    }

    /// `q^k`
    pub fn q_pow(k: i64) -> ScalarQ {
        ScalarQ { shift: k, num: Poly::one(), den: Poly::one() }
    }

    pub fn q() -> ScalarQ {
        ScalarQ::q_pow(1)
    }

    /// Laurent polynomial `sum_k coeffs[k] q^(low + k)`.
    pub fn laurent(low: i64, coeffs: Vec<BigRational>) -> ScalarQ {
        ScalarQ::build(low, Poly::from_coeffs(coeffs), Poly::one())
    }

    pub fn laurent_i64(low: i64, coeffs: &[i64]) -> ScalarQ {
        ScalarQ::laurent(low, coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// `p(q) / r(q)` for ordinary polynomials.
    pub fn ratio(num: Poly, den: Poly) -> Result<ScalarQ> {
        if den.is_zero() {
            return Err(Error::Domain("division by zero in Q(q)".into()));
        }
        Ok(ScalarQ::build(0, num, den))
    }

    /// `1 - q^k` for `k > 0`.
    pub fn one_minus_q_pow(k: i64) -> ScalarQ {
        assert!(k > 0);
        ScalarQ::laurent(0, {
            let mut v = vec![BigRational::zero(); k as usize + 1];
            v[0] = rat(1);
            v[k as usize] = rat(-1);
            v
        })
    }

    /// The quantum integer `[n]_t = (t^n - t^-n)/(t - t^-1)` with `t = q^s`.
    pub fn qint(n: u32, s: i64) -> ScalarQ {
        if n == 0 {
            return ScalarQ::zero();
        }
        // t^{-(n-1)} + t^{-(n-3)} + ... + t^{n-1}
        let n = n as i64;
        let mut v = vec![BigRational::zero(); (2 * (n - 1) * s) as usize + 1];
        for k in 0..n {
            v[(2 * k * s) as usize] = rat(1);
        }
        ScalarQ::laurent(-(n - 1) * s, v)
    }

    pub fn qfactorial(n: u32, s: i64) -> ScalarQ {
        (1..=n).fold(ScalarQ::one(), |acc, k| &acc * &ScalarQ::qint(k, s))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// Order of vanishing at q = 0; `None` for zero (infinite order).
    pub fn val0(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.shift)
        }
    }

    /// Regular at q = 0 (lies in A_0). Zero counts as regular.
    pub fn is_regular(&self) -> bool {
        self.is_zero() || self.shift >= 0
    }

    /// Image under f -> f(0); errors on a pole at 0.
    pub fn eval0(&self) -> Result<BigRational> {
        if self.is_zero() || self.shift > 0 {
            return Ok(BigRational::zero());
        }
        if self.shift < 0 {
            return Err(Error::NotRegular(self.to_string()));
        }
        Ok(self.num.coeff(0))
    }

    /// True iff `self - other` lies in q A_0.
    pub fn congruent_mod_q(&self, other: &ScalarQ) -> bool {
        let d = self - other;
        d.is_zero() || d.shift >= 1
    }

    pub fn bar(&self) -> ScalarQ {
        if self.is_zero() {
            return ScalarQ::zero();
        }
        let dn = self.num.degree().unwrap() as i64;
        let dd = self.den.degree().unwrap() as i64;
        ScalarQ::build(-self.shift - dn + dd, self.num.reversed(), self.den.reversed())
    }

    /// Coefficients `c_v, c_{v+1}, ..., c_{upto}` of the Laurent expansion
    /// at q = 0, where `v = val0`. Returns `(v, coeffs)`; empty for zero or
    /// when `upto < v`.
    pub fn expand_at_zero(&self, upto: i64) -> (i64, Vec<BigRational>) {
        if self.is_zero() || upto < self.shift {
            return (self.shift, Vec::new());
        }
        let n = (upto - self.shift + 1) as usize;
        // N / D with D(0) = 1: s_k = N_k - sum_{j>=1} D_j s_{k-j}
        let mut s: Vec<BigRational> = Vec::with_capacity(n);
        for k in 0..n {
            let mut c = self.num.coeff(k);
            for j in 1..=k.min(self.den.degree().unwrap()) {
                let dj = &self.den.coeffs()[j];
                if !dj.is_zero() {
                    c -= dj * &s[k - j];
                }
            }
            s.push(c);
        }
        (self.shift, s)
    }

    /// Coefficient of `q^k` in the expansion at 0.
    pub fn coeff_at_zero(&self, k: i64) -> BigRational {
        let (v, cs) = self.expand_at_zero(k);
        if k < v || cs.is_empty() {
            return BigRational::zero();
        }
        cs[(k - v) as usize].clone()
    }

    pub fn inv(&self) -> Result<ScalarQ> {
        if self.is_zero() {
            return Err(Error::Domain("division by zero in Q(q)".into()));
        }
        Ok(ScalarQ::build(-self.shift, self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &ScalarQ) -> Result<ScalarQ> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, n: u32) -> ScalarQ {
        (0..n).fold(ScalarQ::one(), |acc, _| &acc * self)
    }

    /// Numerator as a Laurent polynomial `(low, coeffs)` = `q^shift * N`.
    fn render_poly(low: i64, p: &Poly) -> String {
        let mut out = String::new();
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = low + k as i64;
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coef = if a.is_integer() { a.to_integer().to_string() } else { format!("({})", a) };
            match e {
                0 => out.push_str(&coef),
                _ => {
                    if !a.is_one() {
                        out.push_str(&coef);
                    }
                    out.push('q');
                    if e != 1 {
                        out.push_str(&format!("^{}", e));
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl Zero for ScalarQ {
    fn zero() -> Self {
        ScalarQ { shift: 0, num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for ScalarQ {
    fn one() -> Self {
        ScalarQ::q_pow(0)
    }
}

impl<'a> Add<&'a ScalarQ> for &'a ScalarQ {
    type Output = ScalarQ;
    fn add(self, o: &ScalarQ) -> ScalarQ {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(o.shift);
        let a = self.num.shift_up((self.shift - s) as usize);
        let b = o.num.shift_up((o.shift - s) as usize);
        if self.den == o.den {
            return ScalarQ::build(s, a.add(&b), self.den.clone());
        }
        let num = a.mul(&o.den).add(&b.mul(&self.den));
        ScalarQ::build(s, num, self.den.mul(&o.den))
    }
}

impl<'a> Sub<&'a ScalarQ> for &'a ScalarQ {
    type Output = ScalarQ;
    fn sub(self, o: &ScalarQ) -> ScalarQ {
        self + &(-o)
    }
}

impl<'a> Mul<&'a ScalarQ> for &'a ScalarQ {
    type Output = ScalarQ;
    fn mul(self, o: &ScalarQ) -> ScalarQ {
        if self.is_zero() || o.is_zero() {
            return ScalarQ::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return ScalarQ { shift: self.shift + o.shift, num: self.num.mul(&o.num), den: Poly::one() };
        }
        ScalarQ::build(self.shift + o.shift, self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl<'a> Div<&'a ScalarQ> for &'a ScalarQ {
    type Output = ScalarQ;
    fn div(self, o: &ScalarQ) -> ScalarQ {
        self.checked_div(o).expect("division by zero in Q(q)")
    }
}

impl Neg for &ScalarQ {
    type Output = ScalarQ;
    fn neg(self) -> ScalarQ {
        ScalarQ { shift: self.shift, num: self.num.neg(), den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for ScalarQ {
            type Output = ScalarQ;
            fn $m(self, o: ScalarQ) -> ScalarQ {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for ScalarQ {
    type Output = ScalarQ;
    fn neg(self) -> ScalarQ {
        -&self
    }
}

impl From<i64> for ScalarQ {
    fn from(n: i64) -> Self {
        ScalarQ::from_int(n)
    }
}

impl From<BigRational> for ScalarQ {
    fn from(c: BigRational) -> Self {
        ScalarQ::from_rational(c)
    }
}

impl fmt::Display for ScalarQ {
    /// Numerator and denominator expanded in ascending degree:
    /// `q^-1 + q`, `1/(1 - q^2)`, `(1 - q^4)/(1 - q^2)` never appears
    /// since the fraction is reduced.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = ScalarQ::render_poly(self.shift, &self.num);
        if self.den.is_one() {
            return write!(f, "{}", n);
        }
        let d = ScalarQ::render_poly(0, &self.den);
        let single_term = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        if single_term && !n.contains(" + ") && !n.contains(" - ") {
            write!(f, "{}/({})", n, d)
        } else {
            write!(f, "({})/({})", n, d)
        }
    }
}

impl fmt::Debug for ScalarQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parse the rendering produced by `Display`, plus `*` between a
/// coefficient and `q`: `q^-2 + (1/2)q`, `1/(1 - q^2)`, `3*q^2`.
pub fn parse_scalar(s: &str) -> Result<ScalarQ> {
    let mut s = s.trim();
    while strip_parens(s) != s {
        s = strip_parens(s);
    }
    if let Some((n, d)) = split_top_level_slash(s) {
        let n = parse_laurent(strip_parens(n))?;
        let d = parse_laurent(strip_parens(d))?;
        return n.checked_div(&d);
    }
    parse_laurent(strip_parens(s))
}

fn strip_parens(s: &str) -> &str {
    let t = s.trim();
    if t.starts_with('(') && t.ends_with(')') {
        let inner = &t[1..t.len() - 1];
        let mut depth = 0i32;
        for ch in inner.chars() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return t;
                    }
                }
                _ => {}
            }
        }
        return inner.trim();
    }
    t
}

fn split_top_level_slash(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (k, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => {
                // a bare rational coefficient like "1/2" is not a fraction split
                let (a, b) = (&s[..k], &s[k + 1..]);
                if a.trim().chars().all(|c| c.is_ascii_digit() || c == '-')
                    && b.trim().chars().all(|c| c.is_ascii_digit())
                {
                    return None;
                }
                return Some((a, b));
            }
            _ => {}
        }
    }
    None
}

fn parse_laurent(s: &str) -> Result<ScalarQ> {
    let bad = || Error::Parse { line: 0, msg: format!("bad scalar `{}`", s) };
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut depth = 0;
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    for (k, &ch) in chars.iter().enumerate() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch)
            }
            ')' => {
                depth -= 1;
                cur.push(ch)
            }
            '+' | '-' if depth == 0 && !(k > 0 && chars[k - 1] == '^') => {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                }
                neg = ch == '-';
            }
            _ => cur.push(ch),
        }
    }
    if !cur.is_empty() {
        terms.push((neg, cur));
    }
    if terms.is_empty() {
        return Err(bad());
    }
    let mut acc = ScalarQ::zero();
    for (neg, t) in terms {
        let (coef, exp) = match t.find('q') {
            None => (t.as_str(), 0i64),
            Some(p) => {
                let rest = &t[p + 1..];
                let e = if rest.is_empty() {
                    1
                } else if let Some(e) = rest.strip_prefix('^') {
                    e.parse::<i64>().map_err(|_| bad())?
                } else {
                    return Err(bad());
                };
                (t[..p].trim_end_matches('*'), e)
            }
        };
        let coef = strip_parens(coef);
        let c: BigRational = if coef.is_empty() { BigRational::one() } else { coef.parse().map_err(|_| bad())? };
        let c = if neg { -c } else { c };
        acc = &acc + &(&ScalarQ::from_rational(c) * &ScalarQ::q_pow(exp));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau() -> ScalarQ {
        ScalarQ::one_minus_q_pow(2).inv().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let s = &ScalarQ::q() + &ScalarQ::q_pow(-1);
        assert_eq!(s, ScalarQ::laurent_i64(-1, &[1, 0, 1]));
        assert_eq!(&tau() * &ScalarQ::one_minus_q_pow(2), ScalarQ::one());
        let d = &ScalarQ::one_minus_q_pow(4) / &ScalarQ::one_minus_q_pow(2);
        assert_eq!(d, ScalarQ::laurent_i64(0, &[1, 0, 1]));
        assert!(d.is_laurent());
    }

    #[test]
    fn bar_examples() {
        let x = ScalarQ::laurent_i64(-1, &[1, 0, 0, 1]);
        assert_eq!(x.bar(), ScalarQ::laurent_i64(-2, &[1, 0, 0, 1]));
        let expect = &(-&ScalarQ::q_pow(2)) * &tau();
        assert_eq!(tau().bar(), expect);
        assert_eq!(tau().bar().bar(), tau());
    }

    #[test]
    fn valuation_examples() {
        let x = &ScalarQ::q() / &ScalarQ::one_minus_q_pow(1);
        assert_eq!(x.val0(), Some(1));
        for m in 1..6 {
            let y = &ScalarQ::one_minus_q_pow(2 * m) / &ScalarQ::one_minus_q_pow(2);
            assert_eq!(y.eval0().unwrap(), BigRational::one());
        }
        assert_eq!(tau().val0(), Some(0));
        assert_eq!(tau().eval0().unwrap(), BigRational::one());
        assert!(ScalarQ::q_pow(-1).eval0().is_err());
    }

    #[test]
    fn quantum_integers() {
        let two = ScalarQ::qint(2, 1);
        assert_eq!(two, ScalarQ::laurent_i64(-1, &[1, 0, 1]));
        assert_eq!(ScalarQ::qfactorial(3, 1), &ScalarQ::qint(3, 1) * &two);
    }

    #[test]
    fn expansion() {
        // 1/(1-q^2) = 1 + q^2 + q^4 + ...
        let (v, cs) = tau().expand_at_zero(4);
        assert_eq!(v, 0);
        let want: Vec<BigRational> = [1, 0, 1, 0, 1].iter().map(|&c| rat(c)).collect();
        assert_eq!(cs, want);
        assert_eq!(tau().bar().coeff_at_zero(2), rat(-1));
    }

    #[test]
    fn render_and_parse() {
        let x = parse_scalar("((1 + q)/(1 - (3/2)q))").unwrap();
        assert_eq!(x, parse_scalar("(1 + q)/(1 - (3/2)q)").unwrap());
        assert_eq!(tau().to_string(), "1/(1 - q^2)");
        assert_eq!(ScalarQ::laurent_i64(-1, &[1, 0, 1]).to_string(), "q^-1 + q");
        let half = ScalarQ::from_rational(BigRational::new(1.into(), 2.into()));
        assert_eq!((&half * &ScalarQ::q()).to_string(), "(1/2)q");
        for x in [tau(), tau().bar(), ScalarQ::laurent_i64(-3, &[2, -1, 0, 5]), half] {
            assert_eq!(parse_scalar(&x.to_string()).unwrap(), x);
        }
        assert_eq!(parse_scalar("1/2").unwrap(), ScalarQ::from_rational(BigRational::new(1.into(), 2.into())));
    }
}
