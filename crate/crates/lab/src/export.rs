//! Line-oriented text exports.
//!
//! ```text
//! cartan-ho-lab/1
//! n 3
//! p 5
//! t 1,1,1
//! kind structure-constants
//! label <index> <degree> <text>
//! triple <i> <j> <k> <c>          [b_i, b_j] = Σ c·b_k, i < j
//! map <index> <degree> <inner|outer>
//! image <map> <source> <target> <c>
//! ```
//!
//! Records appear in this order and are sorted within each kind, so that
//! `parse` followed by `render` is the identity on well-formed files.

use std::fmt::Write as _;
use std::str::FromStr;

use cartan_ho_core::derivations::DerivationBasis;
use cartan_ho_core::ho::HOAlgebra;
use cartan_ho_core::{AlgebraParams, DegreeLayout, Fp, GradedLieAlgebra, StructureConstants};
use clap::ValueEnum;

pub const HEADER: &str = "cartan-ho-lab/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    StructureConstants,
    Basis,
    DerBasis,
}

impl ExportKind {
    pub fn name(self) -> &'static str {
        match self {
            ExportKind::StructureConstants => "structure-constants",
            ExportKind::Basis => "basis",
            ExportKind::DerBasis => "der-basis",
        }
    }
}

impl FromStr for ExportKind {
    type Err = ExportError;

    fn from_str(s: &str) -> Result<Self, ExportError> {
        <Self as ValueEnum>::from_str(s, false).map_err(|_| ExportError::Syntax { line: 5, msg: format!("unknown kind {s:?}") })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("not a {HEADER} document")]
    Header,
    #[error(transparent)]
    Algebra(#[from] cartan_ho_core::AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub index: usize,
    pub degree: i32,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapRecord {
    pub index: usize,
    pub degree: i32,
    pub inner: bool,
    /// `(source, target, c)`, sorted.
    pub images: Vec<(usize, usize, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub n: usize,
    pub p: u32,
    pub t: Vec<u32>,
    pub kind: ExportKind,
    pub labels: Vec<Label>,
    pub triples: Vec<(usize, usize, usize, u32)>,
    pub maps: Vec<MapRecord>,
}

impl Document {
    fn empty(params: &AlgebraParams, kind: ExportKind) -> Self {
        Self {
            n: params.n(),
            p: params.p(),
            t: params.t().to_vec(),
            kind,
            labels: Vec::new(),
            triples: Vec::new(),
            maps: Vec::new(),
        }
    }

    fn labels_of(alg: &HOAlgebra, keep: impl Fn(i32) -> bool) -> Vec<Label> {
        let space = alg.space();
        (0..alg.dim())
            .filter(|&i| keep(space.degree_of(i)))
            .map(|i| Label { index: i, degree: space.degree_of(i), text: space.label(i) })
            .collect()
    }

    pub fn structure_constants(alg: &HOAlgebra) -> Self {
        let mut doc = Self::empty(alg.params(), ExportKind::StructureConstants);
        doc.labels = Self::labels_of(alg, |_| true);
        doc.triples = alg.structure().triples().map(|(i, j, k, c)| (i, j, k, c.value())).collect();
        doc
    }

    /// Basis labels, restricted to `degrees` when nonempty.
    pub fn basis(alg: &HOAlgebra, degrees: &[i32]) -> Self {
        let mut doc = Self::empty(alg.params(), ExportKind::Basis);
        doc.labels = Self::labels_of(alg, |d| degrees.is_empty() || degrees.contains(&d));
        doc
    }

    pub fn der_basis(alg: &HOAlgebra, bases: &[DerivationBasis]) -> Self {
        let mut doc = Self::empty(alg.params(), ExportKind::DerBasis);
        doc.labels = Self::labels_of(alg, |_| true);
        let mut sorted: Vec<&DerivationBasis> = bases.iter().collect();
        sorted.sort_by_key(|b| b.degree);
        for b in sorted {
            for (map, &inner) in b.maps.iter().zip(&b.inner) {
                let images = map
                    .images()
                    .iter()
                    .enumerate()
                    .flat_map(|(src, img)| img.iter().map(move |&(tgt, c)| (src, tgt, c.value())))
                    .collect();
                doc.maps.push(MapRecord { index: doc.maps.len(), degree: b.degree, inner, images });
            }
        }
        doc
    }

    /// Rebuilds the structure constants; needs the full label list.
    pub fn structure(&self) -> Result<StructureConstants, ExportError> {
        let params = AlgebraParams::new(self.n, self.p as u64, &self.t)?;
        let k = params.field();
        let degrees: Vec<i32> = self.labels.iter().map(|l| l.degree).collect();
        let layout = DegreeLayout::from_degrees(&degrees)?;
        let triples: Vec<(usize, usize, usize, Fp)> =
            self.triples.iter().map(|&(i, j, kk, c)| (i, j, kk, k.from_reduced(c))).collect();
        Ok(StructureConstants::from_triples(k, layout, &triples)?)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let t: Vec<String> = self.t.iter().map(u32::to_string).collect();
        let _ = writeln!(s, "{HEADER}\nn {}\np {}\nt {}\nkind {}", self.n, self.p, t.join(","), self.kind.name());
        for l in &self.labels {
            let _ = writeln!(s, "label {} {} {}", l.index, l.degree, l.text);
        }
        for (i, j, k, c) in &self.triples {
            let _ = writeln!(s, "triple {i} {j} {k} {c}");
        }
        for m in &self.maps {
            let _ = writeln!(s, "map {} {} {}", m.index, m.degree, if m.inner { "inner" } else { "outer" });
            for (a, b, c) in &m.images {
                let _ = writeln!(s, "image {} {a} {b} {c}", m.index);
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, ExportError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        if lines.next().map(|(_, l)| l) != Some(HEADER) {
            return Err(ExportError::Header);
        }
        let mut field = |key: &str| -> Result<String, ExportError> {
            let (no, line) = lines.next().ok_or(ExportError::Syntax { line: 0, msg: format!("missing {key}") })?;
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_owned)
                .ok_or(ExportError::Syntax { line: no, msg: format!("expected {key}") })
        };
        let n = num(&field("n")?, 2)?;
        let p = num(&field("p")?, 3)?;
        let t = field("t")?.split(',').map(|x| num(x, 4)).collect::<Result<Vec<u32>, _>>()?;
        let kind: ExportKind = field("kind")?.parse()?;
        let mut doc = Document { n, p, t, kind, labels: Vec::new(), triples: Vec::new(), maps: Vec::new() };
        for (no, line) in lines {
            let (tag, rest) = line.split_once(' ').ok_or(ExportError::Syntax { line: no, msg: "empty record".into() })?;
            match tag {
                "label" => {
                    let mut it = rest.splitn(3, ' ');
                    let index = num(it.next().unwrap_or(""), no)?;
                    let degree = num(it.next().unwrap_or(""), no)?;
                    let text = it.next().ok_or(ExportError::Syntax { line: no, msg: "missing label text".into() })?;
                    doc.labels.push(Label { index, degree, text: text.to_owned() });
                }
                "triple" => {
                    let v = nums::<usize>(rest, 4, no)?;
                    doc.triples.push((v[0], v[1], v[2], v[3] as u32));
                }
                "map" => {
                    let mut it = rest.split(' ');
                    let index = num(it.next().unwrap_or(""), no)?;
                    let degree = num(it.next().unwrap_or(""), no)?;
                    let inner = match it.next() {
                        Some("inner") => true,
                        Some("outer") => false,
                        _ => return Err(ExportError::Syntax { line: no, msg: "expected inner or outer".into() }),
                    };
                    if index != doc.maps.len() {
                        return Err(ExportError::Syntax { line: no, msg: "maps must be numbered consecutively".into() });
                    }
                    doc.maps.push(MapRecord { index, degree, inner, images: Vec::new() });
                }
                "image" => {
                    let v = nums::<usize>(rest, 4, no)?;
                    match doc.maps.last_mut() {
                        Some(m) if m.index == v[0] => m.images.push((v[1], v[2], v[3] as u32)),
                        _ => return Err(ExportError::Syntax { line: no, msg: "image without its map".into() }),
                    }
                }
                other => return Err(ExportError::Syntax { line: no, msg: format!("unknown record {other:?}") }),
            }
        }
        Ok(doc)
    }
}

fn num<T: FromStr>(s: &str, line: usize) -> Result<T, ExportError> {
    s.parse().map_err(|_| ExportError::Syntax { line, msg: format!("bad number {s:?}") })
}

fn nums<T: FromStr>(s: &str, count: usize, line: usize) -> Result<Vec<T>, ExportError> {
    let v = s.split(' ').map(|x| num(x, line)).collect::<Result<Vec<T>, _>>()?;
    if v.len() != count {
        return Err(ExportError::Syntax { line, msg: format!("expected {count} fields") });
    }
    Ok(v)
}
