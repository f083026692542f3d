//! JSON wire formats. Every residue travels as a decimal string so reports
//! are integer-width-agnostic across consumers; conversion into core types
//! validates ranges and shapes.

use serde::{Deserialize, Serialize};
use sharpflat_core::error::Error;
use sharpflat_core::euler::{CoordSeq, Functional, FunctionalKind};
use sharpflat_core::ring::IwasawaElem;
use sharpflat_core::scalar::{PAdicScalar, PadicCtx, QuadScalar};
use sharpflat_core::sprung::{ElemPair, NormSeq};
use sharpflat_core::theta::ThetaTable;
use std::collections::BTreeMap;

pub fn schema_err(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

pub fn parse_residue(s: &str, ctx: PadicCtx) -> Result<u64, Error> {
    let v: u64 = s
        .parse()
        .map_err(|_| schema_err(format!("residue {s:?} is not a decimal string")))?;
    if v >= ctx.modulus() {
        return Err(schema_err(format!(
            "residue {v} out of range for modulus {}",
            ctx.modulus()
        )));
    }
    Ok(v)
}

pub fn parse_residues(ss: &[String], ctx: PadicCtx) -> Result<Vec<u64>, Error> {
    ss.iter().map(|s| parse_residue(s, ctx)).collect()
}

pub fn render_elem(e: &IwasawaElem) -> Vec<String> {
    e.poly().coeffs().iter().map(|c| c.value().to_string()).collect()
}

pub fn render_quad_elem(e: &IwasawaElem<QuadScalar>) -> Vec<[String; 2]> {
    e.poly()
        .coeffs()
        .iter()
        .map(|c| [c.re().value().to_string(), c.im().value().to_string()])
        .collect()
}

/// {p, n, m, coeffs}: an element of the level-m truncation, X-power basis,
/// ascending coefficients.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct IwasawaElemDto {
    pub p: u64,
    pub n: u32,
    pub m: u32,
    pub coeffs: Vec<String>,
}

impl IwasawaElemDto {
    pub fn to_core(&self) -> Result<IwasawaElem, Error> {
        let ctx = PadicCtx::new(self.p, self.n)?;
        let coeffs = parse_residues(&self.coeffs, ctx)?;
        IwasawaElem::from_residues(ctx, self.m, &coeffs)
    }

    pub fn from_core(e: &IwasawaElem) -> Self {
        let ctx = e.ctx();
        IwasawaElemDto {
            p: ctx.p(),
            n: ctx.prec(),
            m: e.level(),
            coeffs: render_elem(e),
        }
    }
}

/// {p, n, ap, terms}: terms[m] is the coefficient array of the level-m term.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct NormSeqDto {
    pub p: u64,
    pub n: u32,
    pub ap: String,
    pub terms: Vec<Vec<String>>,
    /// strict sequences reject norm-relation violations at parse time
    #[serde(default)]
    pub lenient: bool,
}

impl NormSeqDto {
    pub fn to_core(&self) -> Result<NormSeq, Error> {
        let ctx = PadicCtx::new(self.p, self.n)?;
        let ap = ctx.from_u64(parse_residue(&self.ap, ctx)?);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, t) in self.terms.iter().enumerate() {
            let coeffs = parse_residues(t, ctx)?;
            terms.push(IwasawaElem::from_residues(ctx, m as u32, &coeffs)?);
        }
        if self.lenient {
            NormSeq::new_lenient(terms, ap)
        } else {
            NormSeq::new_strict(terms, ap)
        }
    }
}

/// One theta table: values over the split group Delta x G_m.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ThetaTableDto {
    pub p: u64,
    pub n: u32,
    pub m: u32,
    pub delta_order: u32,
    pub entries: Vec<ThetaEntryDto>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ThetaEntryDto {
    pub label: [u32; 2],
    pub value: String,
}

impl ThetaTableDto {
    pub fn to_core(&self) -> Result<ThetaTable, Error> {
        let ctx = PadicCtx::new(self.p, self.n)?;
        let entries = self
            .entries
            .iter()
            .map(|e| Ok(((e.label[0], e.label[1]), ctx.from_u64(parse_residue(&e.value, ctx)?))))
            .collect::<Result<Vec<_>, Error>>()?;
        ThetaTable::new(ctx, self.m, self.delta_order, entries)
    }
}

/// A tower of theta tables with the shared eigenvalue.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ThetaSeqDto {
    pub p: u64,
    pub n: u32,
    pub ap: String,
    pub tables: Vec<ThetaTableDto>,
}

/// Q-system functional data: rows[m] = [component_a, component_b] at level
/// m; the two witness pairs are the level-0 primitivity data.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct QSystemDto {
    pub p: u64,
    pub n: u32,
    pub ap: String,
    pub horizon: u32,
    pub rows: Vec<[Vec<String>; 2]>,
    pub witnesses: WitnessesDto,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct WitnessesDto {
    pub d0: [String; 2],
    pub d1_minus_ap_d0: [String; 2],
}

impl QSystemDto {
    pub fn to_core(&self) -> Result<sharpflat_core::coleman::QSystemModel, Error> {
        let ctx = PadicCtx::new(self.p, self.n)?;
        if self.rows.len() as u32 != self.horizon + 1 {
            return Err(schema_err(format!(
                "horizon {} inconsistent with {} rows",
                self.horizon,
                self.rows.len()
            )));
        }
        let ap = ctx.from_u64(parse_residue(&self.ap, ctx)?);
        let mut rows = Vec::with_capacity(self.rows.len());
        for (m, [a, b]) in self.rows.iter().enumerate() {
            rows.push([
                IwasawaElem::from_residues(ctx, m as u32, &parse_residues(a, ctx)?)?,
                IwasawaElem::from_residues(ctx, m as u32, &parse_residues(b, ctx)?)?,
            ]);
        }
        let wit = |pair: &[String; 2]| -> Result<[PAdicScalar; 2], Error> {
            Ok([
                ctx.from_u64(parse_residue(&pair[0], ctx)?),
                ctx.from_u64(parse_residue(&pair[1], ctx)?),
            ])
        };
        sharpflat_core::coleman::QSystemModel::new(
            ap,
            rows,
            wit(&self.witnesses.d0)?,
            wit(&self.witnesses.d1_minus_ap_d0)?,
        )
    }
}

/// {N0, entries}: eigenvalues keyed by decimal prime strings.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct EigenTableDto {
    #[serde(rename = "N0")]
    pub n0: u64,
    pub entries: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub provenance: String,
}

impl EigenTableDto {
    pub fn to_core(&self) -> Result<sharpflat_core::admissible::EigenTable, Error> {
        let mut entries = BTreeMap::new();
        for (k, &v) in &self.entries {
            let ell: u64 = k
                .parse()
                .map_err(|_| schema_err(format!("table key {k:?} is not a prime string")))?;
            entries.insert(ell, v);
        }
        sharpflat_core::admissible::EigenTable::with_provenance(
            self.n0,
            entries,
            self.provenance.clone(),
        )
    }

    pub fn from_core(t: &sharpflat_core::admissible::EigenTable) -> Self {
        EigenTableDto {
            n0: t.level(),
            entries: t.entries().iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            provenance: t.provenance().to_string(),
        }
    }
}

/// An r-tuple of coordinate towers: levels[m][i] is coordinate i at level m.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CoordSeqDto {
    pub p: u64,
    pub n: u32,
    pub ap: String,
    pub levels: Vec<Vec<Vec<String>>>,
    pub basis_compatible: bool,
}

impl CoordSeqDto {
    pub fn to_core(&self) -> Result<CoordSeq, Error> {
        let ctx = PadicCtx::new(self.p, self.n)?;
        let ap = ctx.from_u64(parse_residue(&self.ap, ctx)?);
        let mut levels = Vec::with_capacity(self.levels.len());
        for (m, row) in self.levels.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for coeffs in row {
                out.push(IwasawaElem::from_residues(
                    ctx,
                    m as u32,
                    &parse_residues(coeffs, ctx)?,
                )?);
            }
            levels.push(out);
        }
        CoordSeq::new(levels, ap, self.basis_compatible)
    }
}

/// A local functional row at the horizon level.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct FunctionalDto {
    pub kind: String,
    pub p: u64,
    pub n: u32,
    pub m: u32,
    pub row: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub normalization_note: String,
}

impl FunctionalDto {
    pub fn to_core(&self) -> Result<Functional, Error> {
        let ctx = PadicCtx::new(self.p, self.n)?;
        let kind = match self.kind.as_str() {
            "boundary" => FunctionalKind::Boundary,
            "finite" => FunctionalKind::Finite,
            other => return Err(schema_err(format!("unknown functional kind {other:?}"))),
        };
        let row = self
            .row
            .iter()
            .map(|c| IwasawaElem::from_residues(ctx, self.m, &parse_residues(c, ctx)?))
            .collect::<Result<Vec<_>, Error>>()?;
        Functional::with_note(kind, row, self.normalization_note.clone())
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct LPairDto {
    pub sharp: Vec<String>,
    pub flat: Vec<String>,
}

impl LPairDto {
    pub fn to_core(&self, ctx: PadicCtx, m: u32) -> Result<ElemPair, Error> {
        Ok(ElemPair::new(
            IwasawaElem::from_residues(ctx, m, &parse_residues(&self.sharp, ctx)?)?,
            IwasawaElem::from_residues(ctx, m, &parse_residues(&self.flat, ctx)?)?,
        ))
    }
}

/// First-law input: the coordinate tower, the boundary functional, the
/// L-pair, and either an explicit unit slot or solve-and-verify mode.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct Rec1InputDto {
    pub coords: CoordSeqDto,
    pub functional: FunctionalDto,
    pub lp: LPairDto,
    /// coefficient array of the unit slot; omitted = solve for it
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
}

/// Second-law input: two sides, the congruent-form L-pair, and the monomial
/// unit slots c * gamma^k.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct Rec2InputDto {
    pub side1: RecSideDto,
    pub side2: RecSideDto,
    pub lp_congruent: LPairDto,
    pub units: [GammaUnitDto; 2],
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct RecSideDto {
    pub coords: CoordSeqDto,
    pub functional: FunctionalDto,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct GammaUnitDto {
    pub c: String,
    pub k: u32,
}
