//! Borcherds-Cartan data, weights, roots, generator indices, and the
//! composition/partition combinatorics attached to each vertex.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Hard limit on |I|; desk-scale computations never need more.
pub const MAX_VERTICES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Real,
    /// `a_ii < 0`
    Imaginary,
    /// `a_ii = 0`
    Isotropic,
}

/// Vertices are addressed internally by position `0..n`; `ids` keeps the
/// labels used in files and printed output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BorcherdsCartanDatum {
    pub ids: Vec<u32>,
    pub a: Vec<Vec<i64>>,
    pub s: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {}: {}", l, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl BorcherdsCartanDatum {
    pub fn new(ids: Vec<u32>, a: Vec<Vec<i64>>, s: Vec<i64>) -> Result<Self> {
        let d = BorcherdsCartanDatum { ids, a, s };
        let rep = validate_datum(&d);
        if !rep.is_valid() {
            let msgs: Vec<String> = rep.violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidDatum(msgs.join("; ")));
        }
        Ok(d)
    }

    /// Vertices labelled 1..n.
    pub fn from_matrix(a: Vec<Vec<i64>>, s: Vec<i64>) -> Result<Self> {
        let ids = (1..=a.len() as u32).collect();
        BorcherdsCartanDatum::new(ids, a, s)
    }

    /// `a = [[2,-1],[-1,0]]`, `s = (1,1)`: one real and one isotropic vertex.
    pub fn mixed() -> Self {
        BorcherdsCartanDatum::from_matrix(vec![vec![2, -1], vec![-1, 0]], vec![1, 1]).unwrap()
    }

    /// A single vertex with the given diagonal entry.
    pub fn rank_one(a_ii: i64) -> Self {
        BorcherdsCartanDatum::from_matrix(vec![vec![a_ii]], vec![1]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn kind(&self, i: usize) -> VertexKind {
        match self.a[i][i] {
            2 => VertexKind::Real,
            0 => VertexKind::Isotropic,
            _ => VertexKind::Imaginary,
        }
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.kind(i) == VertexKind::Real
    }

    pub fn is_imaginary(&self, i: usize) -> bool {
        !self.is_real(i)
    }

    pub fn is_isotropic(&self, i: usize) -> bool {
        self.kind(i) == VertexKind::Isotropic
    }

    pub fn index_of(&self, id: u32) -> Result<usize> {
        self.ids.iter().position(|&x| x == id).ok_or(Error::UnknownVertex(id))
    }

    pub fn id(&self, i: usize) -> u32 {
        self.ids[i]
    }

    /// `(alpha_i, alpha_j) = s_i a_ij`
    pub fn sym_form(&self, i: usize, j: usize) -> i64 {
        self.s[i] * self.a[i][j]
    }

    /// `(alpha, beta)` for root vectors.
    pub fn root_form(&self, x: &RootVector, y: &RootVector) -> i64 {
        let mut acc = 0;
        for i in 0..self.n() {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..self.n() {
                acc += x.0[i] as i64 * y.0[j] as i64 * self.sym_form(i, j);
            }
        }
        acc
    }

    /// `<h_i, lambda>`
    pub fn pairing(&self, i: usize, w: &Weight) -> i64 {
        let mut v = w.fund[i];
        for j in 0..self.n() {
            v -= w.offset[j] * self.a[i][j];
        }
        v
    }

    /// `<h_i, -alpha>`
    pub fn pairing_root(&self, i: usize, alpha: &RootVector) -> i64 {
        -(0..self.n()).map(|j| alpha.0[j] as i64 * self.a[i][j]).sum::<i64>()
    }

    pub fn zero_root(&self) -> RootVector {
        RootVector(vec![0; self.n()])
    }

    pub fn simple_root(&self, i: usize, l: u32) -> RootVector {
        let mut v = vec![0; self.n()];
        v[i] = l;
        RootVector(v)
    }

    pub fn zero_weight(&self) -> Weight {
        Weight { fund: vec![0; self.n()], offset: vec![0; self.n()] }
    }

    /// Generator indices `(i,l)` with `l <= max_level` (real vertices: `l = 1`).
    pub fn gen_indices(&self, max_level: u32) -> Vec<GenIndex> {
        let mut out = Vec::new();
        for i in 0..self.n() {
            if self.is_real(i) {
                if max_level >= 1 {
                    out.push(GenIndex::new(i, 1));
                }
            } else {
                for l in 1..=max_level {
                    out.push(GenIndex::new(i, l));
                }
            }
        }
        out
    }

    /// Generator indices that can be removed from weight `alpha`.
    pub fn gen_indices_below(&self, alpha: &RootVector) -> Vec<GenIndex> {
        self.gen_indices(alpha.height()).into_iter().filter(|g| alpha.0[g.i] >= g.l).collect()
    }

    pub fn fmt_gen(&self, g: GenIndex) -> String {
        format!("({},{})", self.ids[g.i], g.l)
    }
}

pub fn validate_datum(d: &BorcherdsCartanDatum) -> ValidationReport {
    validate_with_lines(d, &HashMap::new(), &HashMap::new())
}

fn validate_with_lines(
    d: &BorcherdsCartanDatum,
    vertex_lines: &HashMap<usize, usize>,
    entry_lines: &HashMap<(usize, usize), usize>,
) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let n = d.ids.len();
    let mut push = |line: Option<usize>, message: String| rep.violations.push(Violation { line, message });
    if n == 0 {
        push(None, "datum has no vertices".into());
    }
    if n > MAX_VERTICES {
        push(None, format!("too many vertices: {} > {}", n, MAX_VERTICES));
    }
    if d.a.len() != n || d.a.iter().any(|r| r.len() != n) || d.s.len() != n {
        push(None, "matrix and symmetrizer dimensions disagree with the vertex list".into());
        return rep;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if d.ids[i] == d.ids[j] {
                push(vertex_lines.get(&j).copied(), format!("duplicate vertex id {}", d.ids[i]));
            }
        }
    }
    for i in 0..n {
        let aii = d.a[i][i];
        if aii > 2 || aii % 2 != 0 {
            push(
                vertex_lines.get(&i).copied(),
                format!("a_ii even and ≤ 2 violated: a_{}{} = {}", d.ids[i], d.ids[i], aii),
            );
        }
        if d.s[i] <= 0 {
            push(vertex_lines.get(&i).copied(), format!("s_i > 0 violated: s_{} = {}", d.ids[i], d.s[i]));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && d.a[i][j] > 0 {
                push(
                    entry_lines.get(&(i, j)).copied(),
                    format!("a_ij ≤ 0 violated: a_{}{} = {}", d.ids[i], d.ids[j], d.a[i][j]),
                );
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let x = d.s[i] * d.a[i][j];
            let y = d.s[j] * d.a[j][i];
            if x != y {
                let line = entry_lines.get(&(i, j)).or_else(|| entry_lines.get(&(j, i))).copied();
                push(
                    line,
                    format!(
                        "symmetrizability violated: s_{a}·a_{a}{b} = {x} ≠ s_{b}·a_{b}{a} = {y}",
                        a = d.ids[i],
                        b = d.ids[j],
                        x = x,
                        y = y
                    ),
                );
            }
        }
    }
    rep
}

/// Outcome of reading a datum file: parse errors are fatal, validation
/// problems are reported with the line that introduced them.
pub struct ParsedDatum {
    pub datum: BorcherdsCartanDatum,
    pub report: ValidationReport,
}

/// Parse the line-oriented datum format:
///
/// ```text
/// # comments and blank lines are ignored
/// vertex 1 a=2 s=1
/// vertex 2 a=0 s=1
/// edge 1 2 a=-1
/// edge 2 1 a=-1
/// ```
///
/// Missing edges mean `a_ij = 0`.
pub fn parse_datum(text: &str) -> Result<ParsedDatum> {
    let mut ids = Vec::new();
    let mut diag = Vec::new();
    let mut sym = Vec::new();
    let mut vertex_lines = HashMap::new();
    let mut edges: Vec<(usize, u32, u32, i64)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let perr = |msg: String| Error::Parse { line, msg };
        let kv = |t: &str, key: &str| -> Result<i64> {
            let v = t
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| perr(format!("expected `{}=<integer>`, found `{}`", key, t)))?;
            v.parse::<i64>().map_err(|_| perr(format!("`{}` is not an integer", v)))
        };
        let id = |t: &str| -> Result<u32> { t.parse::<u32>().map_err(|_| perr(format!("`{}` is not a vertex id", t))) };
        match toks[0] {
            "vertex" => {
                if toks.len() != 4 {
                    return Err(perr("vertex record needs `vertex <id> a=<a_ii> s=<s_i>`".into()));
                }
                vertex_lines.insert(ids.len(), line);
                ids.push(id(toks[1])?);
                diag.push(kv(toks[2], "a")?);
                sym.push(kv(toks[3], "s")?);
            }
            "edge" => {
                if toks.len() != 4 {
                    return Err(perr("edge record needs `edge <i> <j> a=<a_ij>`".into()));
                }
                edges.push((line, id(toks[1])?, id(toks[2])?, kv(toks[3], "a")?));
            }
            other => return Err(perr(format!("unknown record `{}`", other))),
        }
    }
    let n = ids.len();
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = diag[i];
    }
    let mut entry_lines = HashMap::new();
    for (line, i, j, v) in edges {
        let find = |x: u32| {
            ids.iter()
                .position(|&y| y == x)
                .ok_or(Error::Parse { line, msg: format!("edge refers to unknown vertex {}", x) })
        };
        let (pi, pj) = (find(i)?, find(j)?);
        if pi == pj {
            return Err(Error::Parse { line, msg: "edge from a vertex to itself; use the vertex record".into() });
        }
        if entry_lines.insert((pi, pj), line).is_some() {
            return Err(Error::Parse { line, msg: format!("duplicate edge {} {}", i, j) });
        }
        a[pi][pj] = v;
    }
    let datum = BorcherdsCartanDatum { ids, a, s: sym };
    let report = validate_with_lines(&datum, &vertex_lines, &entry_lines);
    Ok(ParsedDatum { datum, report })
}

/// Serialize in the format read by `parse_datum`.
pub fn render_datum(d: &BorcherdsCartanDatum) -> String {
    let mut out = String::new();
    for i in 0..d.n() {
        out.push_str(&format!("vertex {} a={} s={}\n", d.ids[i], d.a[i][i], d.s[i]));
    }
    for i in 0..d.n() {
        for j in 0..d.n() {
            if i != j && d.a[i][j] != 0 {
                out.push_str(&format!("edge {} {} a={}\n", d.ids[i], d.ids[j], d.a[i][j]));
            }
        }
    }
    out
}

/// `alpha = sum_i d_i alpha_i` with all `d_i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVector(pub Vec<u32>);

impl RootVector {
    pub fn height(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &RootVector) -> RootVector {
        RootVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, o: &RootVector) -> Option<RootVector> {
        let mut v = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&o.0) {
            v.push(a.checked_sub(*b)?);
        }
        Some(RootVector(v))
    }

    pub fn plus_gen(&self, g: GenIndex) -> RootVector {
        let mut v = self.0.clone();
        v[g.i] += g.l;
        RootVector(v)
    }

    pub fn minus_gen(&self, g: GenIndex) -> Option<RootVector> {
        let mut v = self.0.clone();
        v[g.i] = v[g.i].checked_sub(g.l)?;
        Some(RootVector(v))
    }

    /// All `beta <= self` componentwise, ordered by height then lexicographically.
    pub fn below(&self) -> Vec<RootVector> {
        let mut out = vec![Vec::new()];
        for &d in &self.0 {
            let mut next = Vec::new();
            for prefix in &out {
                for x in 0..=d {
                    let mut p: Vec<u32> = prefix.clone();
                    p.push(x);
                    next.push(p);
                }
            }
            out = next;
        }
        let mut v: Vec<RootVector> = out.into_iter().map(RootVector).collect();
        v.sort_by(|a, b| a.height().cmp(&b.height()).then(a.cmp(b)));
        v
    }

    /// All root vectors of height exactly `h` on `n` vertices.
    pub fn of_height(n: usize, h: u32) -> Vec<RootVector> {
        fn rec(n: usize, h: u32, prefix: &mut Vec<u32>, out: &mut Vec<RootVector>) {
            if prefix.len() == n - 1 {
                prefix.push(h);
                out.push(RootVector(prefix.clone()));
                prefix.pop();
                return;
            }
            for x in (0..=h).rev() {
                prefix.push(x);
                rec(n, h - x, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, h, &mut Vec::new(), &mut out);
        out
    }
}

/// `lambda = sum_i fund_i Lambda_i - sum_j offset_j alpha_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub fund: Vec<i64>,
    pub offset: Vec<i64>,
}

impl Weight {
    pub fn from_fund(fund: Vec<i64>) -> Weight {
        let n = fund.len();
        Weight { fund, offset: vec![0; n] }
    }

    pub fn minus_root(&self, alpha: &RootVector) -> Weight {
        let offset = self.offset.iter().zip(&alpha.0).map(|(a, &b)| a + b as i64).collect();
        Weight { fund: self.fund.clone(), offset }
    }

    pub fn shift_gen(&self, g: GenIndex, up: bool) -> Weight {
        let mut w = self.clone();
        if up {
            w.offset[g.i] -= g.l as i64;
        } else {
            w.offset[g.i] += g.l as i64;
        }
        w
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight {
            fund: self.fund.iter().zip(&o.fund).map(|(a, b)| a + b).collect(),
            offset: self.offset.iter().zip(&o.offset).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_dominant(&self, d: &BorcherdsCartanDatum) -> bool {
        self.offset.iter().all(|&x| x == 0) && (0..d.n()).all(|i| d.pairing(i, self) >= 0)
    }

    /// `Lambda` part rendered as `i:m` pairs, offset as `-(d_i a_i)`.
    pub fn render(&self, d: &BorcherdsCartanDatum) -> String {
        let mut parts = Vec::new();
        for i in 0..d.n() {
            if self.fund[i] != 0 {
                parts.push(format!("{}L{}", self.fund[i], d.ids[i]));
            }
        }
        for i in 0..d.n() {
            if self.offset[i] != 0 {
                parts.push(format!("{}a{}", -self.offset[i], d.ids[i]));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ")
        }
    }
}

/// Parse a dominant weight spec `"i:m,i:m"` (vertex ids).
pub fn parse_lambda(d: &BorcherdsCartanDatum, spec: &str) -> Result<Weight> {
    let mut fund = vec![0i64; d.n()];
    let spec = spec.trim();
    if !spec.is_empty() {
        for part in spec.split(',') {
            let perr = || Error::Parse { line: 0, msg: format!("bad weight entry `{}` (want i:m)", part) };
            let (i, m) = part.trim().split_once(':').ok_or_else(perr)?;
            let i: u32 = i.trim().parse().map_err(|_| perr())?;
            let m: i64 = m.trim().parse().map_err(|_| perr())?;
            fund[d.index_of(i)?] += m;
        }
    }
    let w = Weight::from_fund(fund);
    if !w.is_dominant(d) {
        return Err(Error::Domain("weight is not dominant".into()));
    }
    Ok(w)
}

/// `(i, l)`; real vertices only carry `l = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenIndex {
    pub i: usize,
    pub l: u32,
}

impl GenIndex {
    pub fn new(i: usize, l: u32) -> Self {
        GenIndex { i, l }
    }
}

/// An element of `C_{i,n}`: a composition (non-isotropic imaginary), a
/// partition stored weakly decreasing (isotropic), or `[n]` (real; empty
/// for `n = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Composition {
    pub parts: Vec<u32>,
}

impl Composition {
    pub fn empty() -> Self {
        Composition { parts: Vec::new() }
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts equal to `l`.
    pub fn multiplicity(&self, l: u32) -> u32 {
        self.parts.iter().filter(|&&p| p == l).count() as u32
    }

    /// `(l, c)` for compositions.
    pub fn prepend(&self, l: u32) -> Composition {
        let mut p = vec![l];
        p.extend(&self.parts);
        Composition { parts: p }
    }

    /// `c ∪ {l}` for partitions, kept weakly decreasing.
    pub fn insert_part(&self, l: u32) -> Composition {
        let mut p = self.parts.clone();
        p.push(l);
        p.sort_unstable_by(|a, b| b.cmp(a));
        Composition { parts: p }
    }

    /// `c \ {l}` for partitions; `None` if `l` is not a part.
    pub fn remove_part(&self, l: u32) -> Option<Composition> {
        let k = self.parts.iter().position(|&p| p == l)?;
        let mut p = self.parts.clone();
        p.remove(k);
        Some(Composition { parts: p })
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `C_{i,n}` in the fixed order: lexicographic for compositions,
/// reverse-lexicographic for partitions.
pub fn enumerate_compositions(d: &BorcherdsCartanDatum, i: usize, n: u32) -> Vec<Composition> {
    match d.kind(i) {
        VertexKind::Real => {
            if n == 0 {
                vec![Composition::empty()]
            } else {
                vec![Composition { parts: vec![n] }]
            }
        }
        VertexKind::Isotropic => partitions(n),
        VertexKind::Imaginary => compositions(n),
    }
}

pub fn partitions(n: u32) -> Vec<Composition> {
    fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if n == 0 {
            out.push(Composition { parts: prefix.clone() });
            return;
        }
        for p in (1..=n.min(max)).rev() {
            prefix.push(p);
            rec(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn compositions(n: u32) -> Vec<Composition> {
    fn rec(n: u32, prefix: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if n == 0 {
            out.push(Composition { parts: prefix.clone() });
            return;
        }
        for p in 1..=n {
            prefix.push(p);
            rec(n - p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_datum_checks() {
        let d = BorcherdsCartanDatum::mixed();
        assert!(validate_datum(&d).is_valid());
        assert_eq!(d.kind(0), VertexKind::Real);
        assert_eq!(d.kind(1), VertexKind::Isotropic);
        let w = Weight::from_fund(vec![1, 0]).minus_root(&RootVector(vec![1, 1]));
        assert_eq!(d.pairing(0, &w), 0);
        assert_eq!(d.sym_form(0, 1), -1);
        assert_eq!(d.sym_form(1, 0), -1);
        assert_eq!(d.sym_form(1, 1), 0);
    }

    #[test]
    fn rejections() {
        let bad = BorcherdsCartanDatum { ids: vec![1], a: vec![vec![1]], s: vec![1] };
        let rep = validate_datum(&bad);
        assert!(rep.violations[0].message.contains("a_ii even and ≤ 2"));
        let nonsym = BorcherdsCartanDatum { ids: vec![1, 2], a: vec![vec![2, -1], vec![-2, 2]], s: vec![1, 1] };
        assert!(validate_datum(&nonsym).violations[0].message.contains("symmetrizability"));
    }

    #[test]
    fn composition_orders() {
        let d = BorcherdsCartanDatum::from_matrix(vec![vec![0, 0, 0], vec![0, -2, 0], vec![0, 0, 2]], vec![1, 1, 1])
            .unwrap();
        let p = enumerate_compositions(&d, 0, 4);
        assert_eq!(p.len(), 5);
        assert_eq!(p[0].parts, vec![4]);
        assert_eq!(p[1].parts, vec![3, 1]);
        let c = enumerate_compositions(&d, 1, 3);
        let got: Vec<Vec<u32>> = c.into_iter().map(|c| c.parts).collect();
        assert_eq!(got, vec![vec![1, 1, 1], vec![1, 2], vec![2, 1], vec![3]]);
        assert_eq!(enumerate_compositions(&d, 2, 3)[0].parts, vec![3]);
    }

    #[test]
    fn datum_file_lines() {
        let text = "vertex 1 a=2 s=1\nvertex 2 a=0 s=1\n\nedge 1 2 a=1\nedge 2 1 a=1\n";
        let p = parse_datum(text).unwrap();
        assert!(!p.report.is_valid());
        let v = &p.report.violations[0];
        assert_eq!(v.line, Some(4));
        assert!(v.message.contains("a_ij ≤ 0"));
        assert!(matches!(parse_datum("vertex 1 a=x s=1"), Err(Error::Parse { line: 1, .. })));
        let d = BorcherdsCartanDatum::mixed();
        let back = parse_datum(&render_datum(&d)).unwrap();
        assert!(back.report.is_valid());
        assert_eq!(back.datum, d);
    }
}
