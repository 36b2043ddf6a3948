use std::collections::BTreeMap;

use anyhow::Result;
use cartan_ho_core::derivations::{
    ad_partial_power, classify_degree, der_space, gamma_map, hom_degrees, inner_basis_maps, is_derivation,
    outer_quotient, span_rank, DegreeReport, DerOptions, DerivationBasis, Expected, GradedMap, WittModule,
};
use cartan_ho_core::ho::{self, HOAlgebra};
use cartan_ho_core::lie::{bracket_coords, normalize_coords, Adjoint};
use cartan_ho_core::{AlgebraParams, FieldTerm, GradedLieAlgebra, Parity, SuperPoly, VectorField};
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::{Report, Table};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Bracket,
    ThMorphism,
    Generators,
    Membership,
    DerNeg,
    DerZero,
    DerPos,
    FullDer,
    Outer,
    Center,
}

/// Closed forms in `n`, `p`, `Σt`.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForms {
    pub dim_o: u64,
    pub dim_witt: u64,
    /// Odd monomials: `2^(n-1) p^Σt`.
    pub odd_monomials: u64,
    pub t_sum: u64,
    pub n: u64,
}

impl ClosedForms {
    pub fn of(params: &AlgebraParams) -> Self {
        let n = params.n() as u64;
        let t_sum = params.t_sum() as u64;
        let big = (params.p() as u64).pow(t_sum as u32);
        Self { dim_o: (1 << n) * big, dim_witt: n * (1 << n) * big, odd_monomials: (1 << (n - 1)) * big, t_sum, n }
    }

    /// `2^(n-1) p^Σt + Σt - n`.
    pub fn der_total(&self) -> u64 {
        self.odd_monomials + self.t_sum - self.n
    }

    /// `Σt - n + 1`.
    pub fn outer(&self) -> u64 {
        self.t_sum - self.n + 1
    }
}

pub struct Lab {
    alg: HOAlgebra,
    seed: u64,
    degrees: Vec<i32>,
}

impl Lab {
    /// `degrees` restricts the derivation suites; empty means every degree.
    pub fn new(params: &AlgebraParams, seed: u64, degrees: Vec<i32>) -> Result<Self> {
        Ok(Self { alg: HOAlgebra::build(params)?, seed, degrees })
    }

    pub fn algebra(&self) -> &HOAlgebra {
        &self.alg
    }

    pub fn params(&self) -> &AlgebraParams {
        self.alg.params()
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Selected degrees passing `keep`, or `default` when none were given.
    fn selected(&self, keep: impl Fn(i32) -> bool, default: impl IntoIterator<Item = i32>) -> Vec<i32> {
        let mut v: Vec<i32> = if self.degrees.is_empty() {
            default.into_iter().collect()
        } else {
            self.degrees.iter().copied().filter(|&d| keep(d)).collect()
        };
        v.sort_unstable();
        v.dedup();
        v
    }

    fn all_degrees(&self) -> Vec<i32> {
        hom_degrees(self.alg.layout()).collect()
    }

    pub fn run(&self, suite: Suite) -> Result<Report> {
        match suite {
            Suite::Bracket => self.bracket(),
            Suite::ThMorphism => self.th_morphism(),
            Suite::Generators => self.generators(),
            Suite::Membership => self.membership(),
            Suite::DerNeg => {
                let d = self.selected(|d| d < 0, self.all_degrees().into_iter().filter(|&d| d < 0));
                self.derivations("negative-degree derivations", &d)
            }
            Suite::DerZero => self.derivations("degree-zero derivations", &[0]),
            Suite::DerPos => {
                let d = self.selected(|d| d > 0, self.all_degrees().into_iter().filter(|&d| d > 0));
                self.derivations("positive-degree derivations", &d)
            }
            Suite::FullDer => self.full_der(true),
            Suite::Outer => self.full_der(false),
            Suite::Center => self.center(),
        }
    }

    pub fn dims(&self) -> Report {
        let p = self.params();
        let cf = ClosedForms::of(p);
        let mut r = Report::new("dimensions", p);
        let mut o_by: BTreeMap<i32, usize> = BTreeMap::new();
        let mut w_by: BTreeMap<i32, usize> = BTreeMap::new();
        for m in p.enumerate_basis(None, None) {
            *o_by.entry(m.zdegree() as i32).or_default() += 1;
            for dir in 1..=2 * p.n() {
                let t = FieldTerm::new(m, dir);
                if t.parity() == Parity::Even {
                    *w_by.entry(t.zdegree()).or_default() += 1;
                }
            }
        }
        let dim_o: usize = o_by.values().sum();
        let dim_w: usize = w_by.values().sum();
        let lay = self.alg.layout();
        r.check("dim O = 2^n p^Σt", dim_o as u64, cf.dim_o);
        r.check("dim 𝓦 = n 2^n p^Σt", dim_w as u64, cf.dim_witt);
        r.check("dim 𝓗𝓞_{-1} = n", lay.dim_at(-1), p.n());
        r.check("dim 𝓗𝓞_0 = n^2", lay.dim_at(0), p.n() * p.n());
        let odd_rank = ho::th_rank(p, Parity::Odd);
        let even_rank = ho::th_rank(p, Parity::Even);
        r.check("dim 𝓗𝓞 = rank of T_H on odd monomials", self.alg.dim(), odd_rank);
        r.check(
            "dim 𝓗𝓞 + rank of T_H on even monomials = 2^n p^Σt - 1",
            (self.alg.dim() + even_rank) as u64,
            cf.dim_o - 1,
        );
        let dim = self.alg.dim() as u64;
        r.compare("dim 𝓗𝓞", dim, cf.odd_monomials - 1, "2^(n-1) p^Σt - 1");
        r.compare("dim 𝓗𝓞", dim, cf.odd_monomials, "2^(n-1) p^Σt");
        if dim != cf.odd_monomials - 1 {
            r.note(format!(
                "dim 𝓗𝓞 = {dim} is the odd-monomial count {}; the count {} = {} - 1 is the rank of T_H on even \
                 monomials, whose kernel is the constants",
                cf.odd_monomials, even_rank, cf.odd_monomials
            ));
        }
        let lo = lay.min_degree().min(-1);
        let hi = *o_by.keys().chain(w_by.keys()).max().unwrap_or(&0);
        let rows = (lo..=hi)
            .map(|d| {
                vec![
                    d.to_string(),
                    o_by.get(&d).copied().unwrap_or(0).to_string(),
                    w_by.get(&d).copied().unwrap_or(0).to_string(),
                    lay.dim_at(d).to_string(),
                ]
            })
            .collect();
        r.tables.push(Table { name: "dimension by degree".into(), columns: cols(&["degree", "O", "𝓦", "𝓗𝓞"]), rows });
        r
    }

    fn membership(&self) -> Result<Report> {
        let p = self.params();
        let mut r = self.dims();
        r.title = "membership".into();
        let members = self.alg.space().vectors().iter().filter(|v| ho::is_member(p, v)).count();
        r.check("basis vectors of 𝓗𝓞 satisfying the membership conditions", members, self.alg.dim());
        let kernel = ho::membership_kernel_dims(p);
        let lay = self.alg.layout();
        let bad: Vec<String> = kernel
            .iter()
            .filter(|&&(d, k)| k != lay.dim_at(d))
            .map(|&(d, k)| format!("degree {d}: {k} vs {}", lay.dim_at(d)))
            .collect();
        r.assert(
            "membership kernel dimension = dim 𝓗𝓞 in every 𝓦 degree",
            bad.is_empty(),
            if bad.is_empty() { format!("equal in {} degrees", kernel.len()) } else { bad.join("; ") },
            "equal in every degree",
        );
        let total: usize = kernel.iter().map(|&(_, k)| k).sum();
        r.check("total membership kernel dimension = dim 𝓗𝓞", total, self.alg.dim());
        r.tables.push(Table {
            name: "membership kernel by degree".into(),
            columns: cols(&["degree", "kernel", "𝓗𝓞"]),
            rows: kernel.iter().map(|&(d, k)| vec![d.to_string(), k.to_string(), lay.dim_at(d).to_string()]).collect(),
        });
        Ok(r)
    }

    fn th_morphism(&self) -> Result<Report> {
        let p = self.params();
        let k = p.field();
        let mut r = Report::new("T_H bracket morphism", p);
        r.seed = Some(self.seed);
        let odd = p.enumerate_basis(None, Some(Parity::Odd));
        let low: Vec<SuperPoly> =
            odd.iter().filter(|m| m.zdegree() <= 4).map(|&m| SuperPoly::from_monomial(m)).collect();
        let mut fails = 0usize;
        for a in &low {
            for b in &low {
                fails += !ho::verify_th_morphism(p, a, b)? as usize;
            }
        }
        r.check(
            format!("[T_H a, T_H b] = T_H(T_H(a)(b)) failures over all {} pairs of odd monomials of degree <= 4", low.len().pow(2)),
            fails,
            0,
        );
        let mut rng = self.rng();
        let random = |rng: &mut ChaCha8Rng| {
            let mut f = SuperPoly::zero();
            for _ in 0..rng.gen_range(1..=3) {
                f.add_term(k, odd[rng.gen_range(0..odd.len())], k.elem(rng.gen_range(1..p.p() as i64)));
            }
            f
        };
        let mut fails = 0usize;
        for _ in 0..1000 {
            let (a, b) = (random(&mut rng), random(&mut rng));
            fails += !ho::verify_th_morphism(p, &a, &b)? as usize;
        }
        r.check("[T_H a, T_H b] = T_H(T_H(a)(b)) failures over 1000 seeded random pairs of odd elements", fails, 0);
        Ok(r)
    }

    fn bracket(&self) -> Result<Report> {
        let alg = &self.alg;
        let k = alg.field();
        let mut r = Report::new("bracket", self.params());
        r.seed = Some(self.seed);
        let n = alg.dim();
        let mut rng = self.rng();
        let pairs: Vec<(usize, usize)> = if n <= 1000 {
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
        } else {
            (0..20_000).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
        };
        let want = pairs.len();
        let got = match alg.cross_check(pairs) {
            Ok(c) => c.to_string(),
            Err(e) => e.to_string(),
        };
        r.check("basis pairs where stored constants match the bracket of vector fields", got, want.to_string());
        let lay = alg.layout();
        let off = alg.structure().triples().filter(|&(i, j, kk, _)| lay.degree_of(kk) != lay.degree_of(i) + lay.degree_of(j)).count();
        r.check("structure constants violating deg [b_i, b_j] = deg b_i + deg b_j", off, 0);
        let mut bad_jacobi = 0;
        let mut bad_anti = 0;
        for _ in 0..10_000 {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            let (x, y, z) = ([(a, k.elem(1))], [(b, k.elem(1))], [(c, k.elem(1))]);
            let mut s = bracket_coords(alg, &x, &bracket_coords(alg, &y, &z));
            s.extend(bracket_coords(alg, &y, &bracket_coords(alg, &z, &x)));
            s.extend(bracket_coords(alg, &z, &bracket_coords(alg, &x, &y)));
            bad_jacobi += !normalize_coords(k, s).is_empty() as usize;
            let mut s = bracket_coords(alg, &x, &y);
            s.extend(bracket_coords(alg, &y, &x));
            bad_anti += !normalize_coords(k, s).is_empty() as usize;
        }
        r.check("Jacobi failures over 10000 seeded basis triples", bad_jacobi, 0);
        r.check("antisymmetry failures over 10000 seeded basis pairs", bad_anti, 0);
        r.note(format!("{} nonzero structure constants", alg.structure().nnz()));
        Ok(r)
    }

    fn generators(&self) -> Result<Report> {
        let p = self.params();
        let mut r = Report::new("generators", p);
        let g = ho::generators(p);
        let seed: Vec<VectorField> = g.all().cloned().collect();
        let closure = ho::closure(p, &seed, self.alg.space())?;
        r.check("dim of the subalgebra generated by M ∪ N = dim 𝓗𝓞", closure.dim(), self.alg.dim());
        let n = p.n();
        r.check("|N| = C(n, 3)", g.n.len(), n * (n - 1) * (n - 2) / 6);
        r.note(format!("|M| = {} (with the q = 0 entries listed once per i)", g.m.len()));
        Ok(r)
    }

    fn center(&self) -> Result<Report> {
        let p = self.params();
        let mut r = Report::new("center and centralizer", p);
        r.check("dim of the center of 𝓗𝓞", ho::center(&self.alg).len(), 0);
        let witt = p.even_part_basis();
        let c = ho::centralizer(p, self.alg.space().basis_at(-1), &witt)?;
        let g = p.g_basis();
        let n = p.n();
        r.check("dim of the centralizer of 𝓗𝓞_{-1} in 𝓦", c.dim(), n << n);
        r.check("dim 𝓖 = n 2^n", g.dim(), n << n);
        r.assert("centralizer of 𝓗𝓞_{-1} in 𝓦 ⊆ 𝓖", g.contains_space(&c), c.dim().to_string(), "contained");
        r.assert("𝓖 ⊆ centralizer of 𝓗𝓞_{-1} in 𝓦", c.contains_space(&g), g.dim().to_string(), "contained");
        Ok(r)
    }

    /// `Der_m(𝓗𝓞)` for every `m` in `degrees`, computed in parallel and
    /// returned in degree order.
    pub fn classify(&self, degrees: &[i32]) -> Result<Vec<DegreeReport>> {
        let mut out: Vec<DegreeReport> =
            degrees.par_iter().map(|&m| classify_degree(&self.alg, m)).collect::<Result<_, _>>()?;
        out.sort_by_key(|d| d.degree);
        Ok(out)
    }

    fn derivations(&self, title: &str, degrees: &[i32]) -> Result<Report> {
        let mut r = Report::new(title, self.params());
        let reports = self.classify(degrees)?;
        for d in &reports {
            self.degree_claims(&mut r, d)?;
        }
        for &m in degrees.iter().filter(|&&m| m >= 0) {
            self.vanishing_claims(&mut r, m)?;
        }
        r.tables.push(der_table(&reports));
        Ok(r)
    }

    fn degree_claims(&self, r: &mut Report, d: &DegreeReport) -> Result<()> {
        let m = d.degree;
        let what = match d.expected {
            Expected::Inner => format!("Der_{m}(𝓗𝓞) = ad 𝓗𝓞_{m}"),
            Expected::InnerAndGamma => "Der_0(𝓗𝓞) = ad(𝓗𝓞 + FΓ)_0".to_string(),
            Expected::PPower { r: e } => format!("Der_{m}(𝓗𝓞) = span of (ad ∂_i)^(p^{e})"),
            Expected::Zero => format!("Der_{m}(𝓗𝓞) = 0"),
        };
        r.assert(
            format!("{what} (mutual containment)"),
            d.matches,
            format!("dim {}", d.der_dim),
            format!("dim {}", d.expected_dim),
        );
        if let Expected::PPower { r: e } = d.expected {
            let inner = inner_basis_maps(&self.alg, m);
            let inner_rank = span_rank(self.alg.field(), &inner);
            for i in 1..=self.params().n() {
                let map = ad_partial_power(&self.alg, i, e)?;
                if e < self.params().t()[i - 1] {
                    let mut all = inner.clone();
                    all.push(map.clone());
                    let outside = span_rank(self.alg.field(), &all) > inner_rank;
                    let ok = !map.is_zero() && is_derivation(&self.alg, &Adjoint(&self.alg), &map) && outside;
                    r.assert(
                        format!("(ad ∂_{i})^(p^{e}) is a nonzero derivation outside ad 𝓗𝓞"),
                        ok,
                        format!("nonzero {}, outside ad 𝓗𝓞 {outside}", !map.is_zero()),
                        "nonzero true, outside ad 𝓗𝓞 true",
                    );
                } else {
                    r.assert(format!("(ad ∂_{i})^(p^{e}) = 0"), map.is_zero(), zero_word(&map), "zero");
                }
            }
        }
        Ok(())
    }

    /// Nonnegative-degree derivations are determined by their values on
    /// `𝓗𝓞_{-1} ⊕ 𝓗𝓞_0`: the constrained solve must be trivial.
    fn vanishing_claims(&self, r: &mut Report, m: i32) -> Result<()> {
        let alg = &self.alg;
        let opts = DerOptions { vanish_on: vec![-1, 0], ..Default::default() };
        let into_ho = der_space(alg, &Adjoint(alg), m, &opts)?;
        r.check(
            format!("dim of degree-{m} derivations 𝓗𝓞 → 𝓗𝓞 vanishing on 𝓗𝓞_{{-1}} ⊕ 𝓗𝓞_0"),
            into_ho.len(),
            0,
        );
        let w = WittModule::new(alg);
        let into_w = der_space(alg, &w, m, &opts)?;
        r.check(
            format!("dim of degree-{m} derivations 𝓗𝓞 → 𝓦 vanishing on 𝓗𝓞_{{-1}} ⊕ 𝓗𝓞_0"),
            into_w.len(),
            0,
        );
        if m == 0 && !into_ho.is_empty() {
            let g = gamma_map(alg)?;
            let mut all = into_ho.clone();
            all.push(g.clone());
            let spans = span_rank(alg.field(), &all) == into_ho.len();
            let top = self.params().n() + 3;
            let gamma_nonzero = !g.is_zero();
            r.note(format!(
                "x ↦ [x, Γ] is a derivation (checked: {}), vanishes on 𝓗𝓞_{{-1}} ⊕ 𝓗𝓞_0, is nonzero ({gamma_nonzero}) \
                 and lies in the solution space ({spans}); it multiplies T_H(x^u) by 1 - |u|, e.g. by -2 on \
                 T_H(x_{}x_{}x_{})",
                is_derivation(alg, &Adjoint(alg), &g),
                top - 2,
                top - 1,
                top,
            ));
        }
        Ok(())
    }

    fn full_der(&self, per_degree: bool) -> Result<Report> {
        let p = self.params();
        let cf = ClosedForms::of(p);
        let full = self.degrees.is_empty();
        let degrees = self.selected(|_| true, self.all_degrees());
        let mut r = Report::new(if per_degree { "full derivation algebra" } else { "outer derivations" }, p);
        let reports = self.classify(&degrees)?;
        if per_degree {
            for d in &reports {
                self.degree_claims(&mut r, d)?;
            }
        }
        let outer = outer_quotient(&self.alg, &reports)?;
        r.check("outer dimension = Σt - n + 1", outer.outer_dim as u64, cf.outer());
        r.assert(
            "commutators of the outer representatives vanish",
            outer.commutators_vanish,
            format!("{} representatives, vanish {}", outer.representatives, outer.commutators_vanish),
            "vanish true",
        );
        if full {
            let center = ho::center(&self.alg).len();
            r.check("dim ad 𝓗𝓞 = dim 𝓗𝓞 - dim center", outer.inner_total, self.alg.dim() - center);
            let total = outer.der_total as u64;
            r.compare("dim Der(𝓗𝓞)", total, cf.der_total(), "2^(n-1) p^Σt + Σt - n");
            r.compare("dim Der(𝓗𝓞)", total, self.alg.dim() as u64 + cf.outer(), "dim 𝓗𝓞 + Σt - n + 1");
        } else {
            r.note(format!("degrees restricted to {degrees:?}; totals cover only these degrees"));
        }
        r.note(format!("dim Der = {}, dim ad = {}", outer.der_total, outer.inner_total));
        r.tables.push(der_table(&reports));
        Ok(r)
    }

    /// Derivation bases over the selected degrees, with a summary table.
    pub fn derive(&self) -> Result<(Report, Vec<DerivationBasis>)> {
        let degrees = self.selected(|_| true, self.all_degrees());
        let reports = self.classify(&degrees)?;
        let mut r = Report::new("derivations", self.params());
        let total: usize = reports.iter().map(|d| d.der_dim).sum();
        let inner: usize = reports.iter().map(|d| d.inner_dim).sum();
        r.note(format!("dim Der = {total}, dim ad = {inner}, outer = {}", total - inner));
        r.tables.push(der_table(&reports));
        Ok((r, reports.into_iter().map(|d| d.basis).collect()))
    }
}

fn zero_word(m: &GradedMap) -> String {
    if m.is_zero() { "zero" } else { "nonzero" }.to_string()
}

fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn der_table(reports: &[DegreeReport]) -> Table {
    let kind = |e: Expected| match e {
        Expected::Inner => "inner".to_string(),
        Expected::InnerAndGamma => "inner+Γ".to_string(),
        Expected::PPower { r } => format!("p-power r={r}"),
        Expected::Zero => "zero".to_string(),
    };
    Table {
        name: "Der(𝓗𝓞) by degree".into(),
        columns: cols(&["degree", "predicted", "dim Der", "dim ad", "outer", "dim predicted", "match"]),
        rows: reports
            .iter()
            .map(|d| {
                vec![
                    d.degree.to_string(),
                    kind(d.expected),
                    d.der_dim.to_string(),
                    d.inner_dim.to_string(),
                    d.outer_dim().to_string(),
                    d.expected_dim.to_string(),
                    if d.matches { "yes" } else { "no" }.to_string(),
                ]
            })
            .collect(),
    }
}
