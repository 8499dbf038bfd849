//! Exact model of a finite family of real numbers: a declared basis of
//! symbols, elements as rational coordinate vectors, and an optional product
//! table expanding pairwise products over a second declared basis.
//!
//! There is no symbolic simplification anywhere: a basis is a data object,
//! and the correctness of its product table is the caller's responsibility.
//! When numeric anchors are declared the table is cross-checked against them
//! at load time, which is the only consistency guarantee on offer.

use crate::abgroup::{format_rational, pair_count, pair_index, parse_rational};
use crate::bigfloat::{BigFloat, NumericError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactRealError {
    #[error("basis file must start with `modob-basis v1`, found `{0}`")]
    BadHeader(String),
    #[error("cannot parse basis line `{0}`")]
    BadLine(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("duplicate product entry for ({0}, {1})")]
    DuplicateProduct(String, String),
    #[error("expected {expected} product coefficients, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("symbol `{0}` has no numeric anchor")]
    MissingAnchor(String),
    #[error("no product entry for ({0}, {1})")]
    ProductIncomplete(String, String),
    #[error("product entry ({left}, {right}) disagrees with the anchors by more than 10^-{tol_digits}")]
    AnchorInconsistent { left: String, right: String, tol_digits: u32 },
    #[error("operands live on different bases")]
    BasisMismatch,
    #[error("basis has no product table")]
    NoProducts,
    #[error("generator expression `{0}` is empty or has no symbol")]
    EmptyGenerator(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct BasisSymbol {
    name: String,
    /// Anchor kept verbatim as its decimal source string; evaluated to the
    /// precision a caller asks for, so nothing is lost to an early rounding.
    anchor: Option<String>,
}

impl BasisSymbol {
    /// Significant decimal digits of the anchor string (0 when absent).
    fn anchor_digits(&self) -> u32 {
        let Some(a) = &self.anchor else { return 0 };
        let mantissa = a.split(['e', 'E']).next().unwrap_or(a);
        mantissa
            .chars()
            .filter(|c| c.is_ascii_digit())
            .skip_while(|&c| c == '0')
            .count() as u32
    }
}

/// Product structure of a basis: every pair `(i ≤ j)` of base symbols may
/// expand to a rational vector over a second, separate basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTable {
    target: Arc<RealBasis>,
    entries: Vec<Option<Vec<BigRational>>>,
}

/// A declared basis of real numbers. The symbols are assumed ℚ-linearly
/// independent (that is what makes them a basis); anchors, when present, are
/// high-precision decimal strings used for numeric evaluation only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealBasis {
    symbols: Vec<BasisSymbol>,
    products: Option<ProductTable>,
}

impl RealBasis {
    pub fn dim(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol_name(&self, i: usize) -> &str {
        &self.symbols[i].name
    }

    pub fn symbol_names(&self) -> Vec<&str> {
        self.symbols.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn has_products(&self) -> bool {
        self.products.is_some()
    }

    pub fn product_target(&self) -> Option<&Arc<RealBasis>> {
        self.products.as_ref().map(|p| &p.target)
    }

    pub fn product_entry(&self, i: usize, j: usize) -> Option<&[BigRational]> {
        let p = self.products.as_ref()?;
        let idx = pair_index(self.dim(), i.min(j), i.max(j));
        p.entries[idx].as_deref()
    }

    /// True when every pair of symbols has a product entry.
    pub fn products_complete(&self) -> bool {
        match &self.products {
            None => false,
            Some(p) => p.entries.iter().all(Option::is_some),
        }
    }

    /// Anchor of symbol `i` at the requested precision.
    pub fn anchor(&self, i: usize, precision_bits: u32) -> Result<BigFloat, ExactRealError> {
        match &self.symbols[i].anchor {
            Some(text) => Ok(BigFloat::parse_decimal(text, precision_bits)?),
            None => Err(ExactRealError::MissingAnchor(self.symbols[i].name.clone())),
        }
    }

    pub fn anchor_text(&self, i: usize) -> Option<&str> {
        self.symbols[i].anchor.as_deref()
    }

    /// The zero element on this basis.
    pub fn zero_on(self: &Arc<Self>) -> ExactReal {
        ExactReal { basis: self.clone(), coords: vec![BigRational::zero(); self.dim()] }
    }

    /// Element with the given rational coordinates.
    pub fn element(self: &Arc<Self>, coords: Vec<BigRational>) -> ExactReal {
        assert_eq!(coords.len(), self.dim(), "coordinate length mismatch");
        ExactReal { basis: self.clone(), coords }
    }

    /// The `i`-th basis symbol as an element.
    pub fn unit(self: &Arc<Self>, i: usize) -> ExactReal {
        let mut coords = vec![BigRational::zero(); self.dim()];
        coords[i] = BigRational::one();
        ExactReal { basis: self.clone(), coords }
    }

    /// Cross-checks every product entry against the anchors, at a tolerance
    /// of `10^-(D/2)` where `D` is the smallest significant-digit count among
    /// the anchors involved. Pairs touching an anchorless symbol are skipped.
    pub fn check_product_anchors(&self) -> Result<(), ExactRealError> {
        let Some(p) = &self.products else { return Ok(()) };
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let idx = pair_index(self.dim(), i, j);
                let Some(coeffs) = &p.entries[idx] else { continue };
                let mut digits: Vec<u32> = vec![
                    self.symbols[i].anchor_digits(),
                    self.symbols[j].anchor_digits(),
                ];
                for (k, c) in coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        digits.push(p.target.symbols[k].anchor_digits());
                    }
                }
                if digits.contains(&0) {
                    continue; // some anchor missing: nothing to check against
                }
                let d_min = *digits.iter().min().unwrap();
                let work = (d_min as f64 * 3.322).ceil() as u32 + 64;
                let lhs = self.anchor(i, work)?.mul(&self.anchor(j, work)?);
                let mut rhs = BigFloat::zero(work);
                for (k, c) in coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        rhs = rhs.add(&p.target.anchor(k, work)?.mul_rational(c));
                    }
                }
                let tol_digits = d_min / 2;
                let tol = BigFloat::parse_decimal(&format!("1e-{tol_digits}"), work)?;
                if lhs.sub(&rhs).abs().cmp_value(&tol) != std::cmp::Ordering::Less {
                    return Err(ExactRealError::AnchorInconsistent {
                        left: self.symbols[i].name.clone(),
                        right: self.symbols[j].name.clone(),
                        tol_digits,
                    });
                }
            }
        }
        Ok(())
    }

    /// Parses the versioned basis file format. See [`RealBasis::to_text`]
    /// for the shape. Anchor consistency is checked before returning.
    pub fn parse(text: &str) -> Result<Arc<RealBasis>, ExactRealError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().unwrap_or("");
        if header != "modob-basis v1" {
            return Err(ExactRealError::BadHeader(header.to_owned()));
        }
        let mut b = RealBasisBuilder::new();
        for line in lines {
            let mut words = line.split_whitespace();
            let keyword = words.next().unwrap_or("");
            match keyword {
                "symbol" | "psymbol" => {
                    let name = words
                        .next()
                        .ok_or_else(|| ExactRealError::BadLine(line.to_owned()))?;
                    let anchor = match words.next() {
                        None => None,
                        Some("anchor") => Some(
                            words
                                .next()
                                .ok_or_else(|| ExactRealError::BadLine(line.to_owned()))?,
                        ),
                        Some(_) => return Err(ExactRealError::BadLine(line.to_owned())),
                    };
                    if let Some(a) = anchor {
                        // reject malformed anchors at load time
                        BigFloat::parse_decimal(a, 32)?;
                    }
                    if keyword == "symbol" {
                        b = b.symbol(name, anchor);
                    } else {
                        b = b.psymbol(name, anchor);
                    }
                }
                "product" => {
                    let (Some(x), Some(y), Some(eq)) = (words.next(), words.next(), words.next())
                    else {
                        return Err(ExactRealError::BadLine(line.to_owned()));
                    };
                    if eq != "=" {
                        return Err(ExactRealError::BadLine(line.to_owned()));
                    }
                    let coeffs = words
                        .map(|t| {
                            parse_rational(t)
                                .map_err(|_| ExactRealError::BadLine(line.to_owned()))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    b = b.product(x, y, coeffs);
                }
                _ => return Err(ExactRealError::BadLine(line.to_owned())),
            }
        }
        b.build()
    }

    /// Renders the basis in the same text format `parse` accepts:
    ///
    /// ```text
    /// modob-basis v1
    /// symbol L anchor 0.6931471805599453
    /// psymbol P anchor 0.4804530139182014
    /// product L L = 1
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::from("modob-basis v1\n");
        for s in &self.symbols {
            match &s.anchor {
                Some(a) => out.push_str(&format!("symbol {} anchor {}\n", s.name, a)),
                None => out.push_str(&format!("symbol {}\n", s.name)),
            }
        }
        if let Some(p) = &self.products {
            for s in &p.target.symbols {
                match &s.anchor {
                    Some(a) => out.push_str(&format!("psymbol {} anchor {}\n", s.name, a)),
                    None => out.push_str(&format!("psymbol {}\n", s.name)),
                }
            }
            for i in 0..self.dim() {
                for j in i..self.dim() {
                    let idx = pair_index(self.dim(), i, j);
                    if let Some(coeffs) = &p.entries[idx] {
                        let body: Vec<String> = coeffs.iter().map(format_rational).collect();
                        out.push_str(&format!(
                            "product {} {} = {}\n",
                            self.symbols[i].name,
                            self.symbols[j].name,
                            body.join(" ")
                        ));
                    }
                }
            }
        }
        out
    }
}

/// Incremental construction of a [`RealBasis`]; `build` validates names and
/// anchor consistency.
#[derive(Default)]
pub struct RealBasisBuilder {
    symbols: Vec<BasisSymbol>,
    psymbols: Vec<BasisSymbol>,
    products: Vec<(String, String, Vec<BigRational>)>,
}

impl RealBasisBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn symbol(mut self, name: &str, anchor: Option<&str>) -> Self {
        self.symbols.push(BasisSymbol {
            name: name.to_owned(),
            anchor: anchor.map(str::to_owned),
        });
        self
    }

    pub fn psymbol(mut self, name: &str, anchor: Option<&str>) -> Self {
        self.psymbols.push(BasisSymbol {
            name: name.to_owned(),
            anchor: anchor.map(str::to_owned),
        });
        self
    }

    pub fn product(mut self, a: &str, b: &str, coeffs: Vec<BigRational>) -> Self {
        self.products.push((a.to_owned(), b.to_owned(), coeffs));
        self
    }

    /// Integer-coefficient convenience for tests and fixtures.
    pub fn product_ints(self, a: &str, b: &str, coeffs: &[i64]) -> Self {
        self.product(
            a,
            b,
            coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect(),
        )
    }

    pub fn build(self) -> Result<Arc<RealBasis>, ExactRealError> {
        let mut seen = std::collections::HashSet::new();
        for s in self.symbols.iter().chain(&self.psymbols) {
            if !seen.insert(s.name.clone()) {
                return Err(ExactRealError::DuplicateSymbol(s.name.clone()));
            }
        }
        let n = self.symbols.len();
        let products = if self.psymbols.is_empty() && self.products.is_empty() {
            None
        } else {
            let target = Arc::new(RealBasis { symbols: self.psymbols, products: None });
            let mut entries: Vec<Option<Vec<BigRational>>> = vec![None; pair_count(n)];
            let symbols = &self.symbols;
            for (a, b, coeffs) in self.products {
                let find = |name: &str| {
                    symbols
                        .iter()
                        .position(|s| s.name == name)
                        .ok_or_else(|| ExactRealError::UnknownSymbol(name.to_owned()))
                };
                let (i, j) = (find(&a)?, find(&b)?);
                if coeffs.len() != target.dim() {
                    return Err(ExactRealError::DimensionMismatch {
                        expected: target.dim(),
                        found: coeffs.len(),
                    });
                }
                let idx = pair_index(n, i.min(j), i.max(j));
                match &entries[idx] {
                    Some(existing) if *existing != coeffs => {
                        return Err(ExactRealError::DuplicateProduct(a, b))
                    }
                    _ => entries[idx] = Some(coeffs),
                }
            }
            Some(ProductTable { target, entries })
        };
        let basis = RealBasis { symbols: self.symbols, products };
        basis.check_product_anchors()?;
        Ok(Arc::new(basis))
    }
}

/// An exact real: rational coordinates over a shared [`RealBasis`].
#[derive(Clone, PartialEq, Eq)]
pub struct ExactReal {
    basis: Arc<RealBasis>,
    coords: Vec<BigRational>,
}

impl ExactReal {
    pub fn basis(&self) -> &Arc<RealBasis> {
        &self.basis
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn same_basis(&self, other: &Self) -> Result<(), ExactRealError> {
        if Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis {
            Ok(())
        } else {
            Err(ExactRealError::BasisMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactRealError> {
        self.same_basis(other)?;
        Ok(ExactReal {
            basis: self.basis.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactRealError> {
        self.same_basis(other)?;
        Ok(ExactReal {
            basis: self.basis.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        ExactReal {
            basis: self.basis.clone(),
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        ExactReal {
            basis: self.basis.clone(),
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }

    /// Exact product via the basis's product table; the result lives on the
    /// table's target basis. Fails with `ProductIncomplete` naming the first
    /// pair of symbols whose entry is needed but missing.
    pub fn multiply(&self, other: &Self) -> Result<Self, ExactRealError> {
        self.same_basis(other)?;
        let products = self
            .basis
            .products
            .as_ref()
            .ok_or(ExactRealError::NoProducts)?;
        let target = products.target.clone();
        let mut coords = vec![BigRational::zero(); target.dim()];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let entry = self.basis.product_entry(i, j).ok_or_else(|| {
                    ExactRealError::ProductIncomplete(
                        self.basis.symbol_name(i.min(j)).to_owned(),
                        self.basis.symbol_name(i.max(j)).to_owned(),
                    )
                })?;
                let ab = a * b;
                for (k, c) in entry.iter().enumerate() {
                    if !c.is_zero() {
                        coords[k] += &ab * c;
                    }
                }
            }
        }
        Ok(ExactReal { basis: target, coords })
    }

    /// Numeric value from the anchors, with absolute error below
    /// `2^(-precision_bits + 4)`. Works at a guarded internal precision
    /// scaled to the coordinate magnitudes, so large rational coordinates do
    /// not erode the bound.
    pub fn eval_numeric(&self, precision_bits: u32) -> Result<BigFloat, ExactRealError> {
        let coord_bits = self
            .coords
            .iter()
            .map(|c| (c.numer().bits() as i64 - c.denom().bits() as i64).max(0) as u32)
            .max()
            .unwrap_or(0);
        let work = precision_bits + 32 + coord_bits + self.coords.len().max(1).ilog2() + 1;
        let mut sum = BigFloat::zero(work);
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            sum = sum.add(&self.basis.anchor(i, work)?.mul_rational(c));
        }
        Ok(sum.with_precision(precision_bits))
    }
}

impl fmt::Debug for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactReal({})", self)
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                if c.is_one() {
                    self.basis.symbol_name(i).to_owned()
                } else {
                    format!("{}·{}", format_rational(c), self.basis.symbol_name(i))
                }
            })
            .collect();
        if terms.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&terms.join(" + "))
    }
}

/// Parses a rational linear combination of basis symbols: `L`, `L/3`, `2L`,
/// `3/2L - R/5`, `2*L + R`. Every term must name a symbol.
pub fn parse_generator(basis: &Arc<RealBasis>, s: &str) -> Result<ExactReal, ExactRealError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(ExactRealError::EmptyGenerator(s.to_owned()));
    }
    let mut coords = vec![BigRational::zero(); basis.dim()];
    // split into signed terms
    let mut terms: Vec<(i32, String)> = Vec::new();
    let mut current = String::new();
    let mut sign = 1;
    for (pos, ch) in compact.char_indices() {
        match ch {
            '+' | '-' if pos > 0 => {
                terms.push((sign, std::mem::take(&mut current)));
                sign = if ch == '-' { -1 } else { 1 };
            }
            '-' => sign = -1,
            '+' => {}
            _ => current.push(ch),
        }
    }
    terms.push((sign, current));

    for (sign, term) in terms {
        if term.is_empty() {
            return Err(ExactRealError::EmptyGenerator(s.to_owned()));
        }
        // leading rational coefficient: digits and at most one '/'
        let name_start = term
            .char_indices()
            .find(|(_, c)| c.is_alphabetic() || *c == '_')
            .map(|(i, _)| i)
            .ok_or_else(|| ExactRealError::EmptyGenerator(s.to_owned()))?;
        let coeff_text = term[..name_start].trim_end_matches('*');
        let mut coeff = if coeff_text.is_empty() {
            BigRational::one()
        } else {
            parse_rational(coeff_text).map_err(|_| ExactRealError::BadLine(term.clone()))?
        };
        // symbol name, then an optional '/denominator'
        let rest = &term[name_start..];
        let (name, denom) = match rest.split_once('/') {
            Some((n, d)) => {
                let den: BigInt =
                    d.parse().map_err(|_| ExactRealError::BadLine(term.clone()))?;
                (n, Some(den))
            }
            None => (rest, None),
        };
        let idx = basis
            .symbol_index(name)
            .ok_or_else(|| ExactRealError::UnknownSymbol(name.to_owned()))?;
        if let Some(d) = denom {
            if d.is_zero() {
                return Err(ExactRealError::BadLine(term.clone()));
            }
            coeff /= BigRational::from_integer(d);
        }
        coords[idx] += coeff * BigRational::from_integer(BigInt::from(sign));
    }
    Ok(basis.element(coords))
}

/// Ready-made bases with 100-digit anchors, used throughout the test suites
/// and as CLI fixture material. The anchor strings are frozen reference
/// values computed independently of this crate's numeric routines.
pub mod fixtures {
    use super::*;

    pub const LN2: &str = "0.6931471805599453094172321214581765680755001343602552541206800094933936219696947156058633269964186875";
    pub const SQRT2_LN2: &str = "0.9802581434685471917139017236352333812914606990990547210422462470652910985142058941430135340632871525";
    pub const LN2_SQ: &str = "0.4804530139182014246671025263266649717305529515945455868668641336236653822598344721999482634439269909";
    pub const SQRT2_LN2_SQ: &str = "0.6794631683661498540866675203562598607104691317587075687440601870121275692291147957734994253111913913";
    pub const PHI_LN2: &str = "1.121535697352151881807695575518648646422851413811940613220661084000840706829447793088237610026253511";
    pub const PHI_LN2_SQ: &str = "0.7773893065169761968830193760402837146382769681836980504499372381526025903353600560411604625955579103";
    pub const SQRT3_LN2: &str = "1.200566133852943677145103452038732647773258610222158354126876424521405893823420633328309753736761664";
    pub const SQRT3_LN2_SQ: &str = "0.8321690307559218198080955714258288393319663106764488671154671223260187210685688677873303081618776766";
    pub const SQRT6_LN2_SQ: &str = "1.176864729481897894525463650741631555644105864575870356649434952073254755222954215825329206892981906";

    /// Basis for the pair (log λ, √2·log λ) at λ = 2: the products close
    /// over {λ-log squared, √2·(log λ)²}, and (t₂)² = 2·(t₁)².
    pub fn sqrt2_basis() -> Arc<RealBasis> {
        RealBasisBuilder::new()
            .symbol("L", Some(LN2))
            .symbol("R", Some(SQRT2_LN2))
            .psymbol("P", Some(LN2_SQ))
            .psymbol("Q", Some(SQRT2_LN2_SQ))
            .product_ints("L", "L", &[1, 0])
            .product_ints("L", "R", &[0, 1])
            .product_ints("R", "R", &[2, 0])
            .build()
            .unwrap()
    }

    /// One-symbol basis for subgroups of λ^ℚ.
    pub fn lambda_q_basis() -> Arc<RealBasis> {
        RealBasisBuilder::new()
            .symbol("L", Some(LN2))
            .psymbol("P", Some(LN2_SQ))
            .product_ints("L", "L", &[1])
            .build()
            .unwrap()
    }

    /// Basis for (log λ, φ·log λ), φ the golden ratio: products close over
    /// {(log λ)², φ·(log λ)²} because φ² = φ + 1.
    pub fn golden_basis() -> Arc<RealBasis> {
        RealBasisBuilder::new()
            .symbol("L", Some(LN2))
            .symbol("F", Some(PHI_LN2))
            .psymbol("P", Some(LN2_SQ))
            .psymbol("Q", Some(PHI_LN2_SQ))
            .product_ints("L", "L", &[1, 0])
            .product_ints("L", "F", &[0, 1])
            .product_ints("F", "F", &[1, 1])
            .build()
            .unwrap()
    }

    /// Rank-3 basis (log λ, √2 log λ, √3 log λ): the products span a
    /// 4-dimensional space and the relation lattice has rank 2.
    pub fn sqrt23_basis() -> Arc<RealBasis> {
        RealBasisBuilder::new()
            .symbol("L", Some(LN2))
            .symbol("R", Some(SQRT2_LN2))
            .symbol("S", Some(SQRT3_LN2))
            .psymbol("P", Some(LN2_SQ))
            .psymbol("Q", Some(SQRT2_LN2_SQ))
            .psymbol("T", Some(SQRT3_LN2_SQ))
            .psymbol("U", Some(SQRT6_LN2_SQ))
            .product_ints("L", "L", &[1, 0, 0, 0])
            .product_ints("L", "R", &[0, 1, 0, 0])
            .product_ints("L", "S", &[0, 0, 1, 0])
            .product_ints("R", "R", &[2, 0, 0, 0])
            .product_ints("R", "S", &[0, 0, 0, 1])
            .product_ints("S", "S", &[3, 0, 0, 0])
            .build()
            .unwrap()
    }
}
