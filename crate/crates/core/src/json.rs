//! Wire formats. Every rational is a `"num/den"` string and every
//! arbitrary-precision count a decimal string, so no value ever passes
//! through floating point.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::forms::{FormsTable, ZiVerdict};
use crate::frobenius::VarietyContext;
use crate::hn::{Block, HnPolygon, SlopeProfile};
use crate::rational::{format_exact, parse_exact};
use crate::scalar::Scalar;
use crate::truncated::TruncatedDecomposition;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    pub rank: u64,
    pub slope: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileJson {
    pub blocks: Vec<BlockJson>,
}

impl ProfileJson {
    pub fn parse<S: Scalar>(&self) -> Result<SlopeProfile<S>> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| Ok(Block::new(b.rank, parse_exact(&b.slope)?)))
            .collect::<Result<Vec<_>>>()?;
        SlopeProfile::new(blocks)
    }
}

impl<S: Scalar> From<&SlopeProfile<S>> for ProfileJson {
    fn from(p: &SlopeProfile<S>) -> Self {
        ProfileJson {
            blocks: p
                .blocks()
                .iter()
                .map(|b| BlockJson {
                    rank: b.rank,
                    slope: format_exact(&b.slope),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonJson {
    pub vertices: Vec<(u64, String)>,
}

impl PolygonJson {
    pub fn parse<S: Scalar>(&self) -> Result<HnPolygon<S>> {
        let v = self
            .vertices
            .iter()
            .map(|(r, d)| Ok((*r, parse_exact(d)?)))
            .collect::<Result<Vec<_>>>()?;
        HnPolygon::from_vertices(v)
    }
}

impl<S: Scalar> From<&HnPolygon<S>> for PolygonJson {
    fn from(p: &HnPolygon<S>) -> Self {
        PolygonJson {
            vertices: p.vertices().iter().map(|(r, d)| (*r, format_exact(d))).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceJson {
    pub slope: String,
    pub rank: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub l: u64,
    pub p: u64,
    pub pieces: Vec<PieceJson>,
    pub total_rank: String,
}

impl<S: Scalar> From<&TruncatedDecomposition<S>> for DecompositionJson {
    fn from(d: &TruncatedDecomposition<S>) -> Self {
        DecompositionJson {
            l: d.l,
            p: d.p,
            pieces: d
                .pieces_descending()
                .map(|(s, r)| PieceJson {
                    slope: format_exact(s),
                    rank: r.to_string(),
                })
                .collect(),
            total_rank: d.total_rank().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextJson {
    pub n: u64,
    pub p: u64,
    pub mu_omega: String,
    #[serde(default)]
    pub lmax_omega: Option<String>,
    pub i_omega: String,
    #[serde(default)]
    pub omega_semistable: bool,
    #[serde(default)]
    pub omega_strongly_semistable: bool,
}

impl ContextJson {
    pub fn parse<S: Scalar>(&self) -> Result<VarietyContext<S>> {
        VarietyContext::new(
            self.n,
            self.p,
            parse_exact(&self.mu_omega)?,
            self.lmax_omega.as_deref().map(parse_exact).transpose()?,
            parse_exact(&self.i_omega)?,
            self.omega_semistable,
            self.omega_strongly_semistable,
        )
    }
}

impl<S: Scalar> From<&VarietyContext<S>> for ContextJson {
    fn from(c: &VarietyContext<S>) -> Self {
        ContextJson {
            n: c.n,
            p: c.p,
            mu_omega: format_exact(&c.mu_omega),
            lmax_omega: c.lmax_omega.as_ref().map(format_exact),
            i_omega: format_exact(&c.i_omega),
            omega_semistable: c.omega_semistable,
            omega_strongly_semistable: c.omega_strongly_semistable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormsRowJson {
    pub i: u64,
    pub rank_b: String,
    pub rank_z: String,
    pub degb_coeff: String,
    pub degz_coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormsTableJson {
    pub n: u64,
    pub p: u64,
    pub rows: Vec<FormsRowJson>,
}

impl<S: Scalar> From<&FormsTable<S>> for FormsTableJson {
    fn from(t: &FormsTable<S>) -> Self {
        FormsTableJson {
            n: t.n,
            p: t.p,
            rows: t
                .rows
                .iter()
                .map(|r| FormsRowJson {
                    i: r.i,
                    rank_b: r.rank_b.to_string(),
                    rank_z: r.rank_z.to_string(),
                    degb_coeff: format_exact(&r.degb_coeff),
                    degz_coeff: format_exact(&r.degz_coeff),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZiVerdictJson {
    pub n: u64,
    pub p: u64,
    pub i: u64,
    pub mu_b_coeff: String,
    pub mu_omega_i_coeff: String,
    pub exact_destabilizes: bool,
    pub paper_sufficient_lhs: String,
    pub paper_sufficient_holds: bool,
    pub exact_first_term_ratio: String,
    pub exact_first_term_holds: bool,
    pub alternating_term: String,
    pub in_claimed_range: bool,
    pub first_term_conflict: bool,
}

impl<S: Scalar> From<&ZiVerdict<S>> for ZiVerdictJson {
    fn from(v: &ZiVerdict<S>) -> Self {
        ZiVerdictJson {
            n: v.n,
            p: v.p,
            i: v.i,
            mu_b_coeff: format_exact(&v.mu_b_coeff),
            mu_omega_i_coeff: format_exact(&v.mu_omega_i_coeff),
            exact_destabilizes: v.exact_destabilizes,
            paper_sufficient_lhs: format_exact(&v.paper_sufficient_lhs),
            paper_sufficient_holds: v.paper_sufficient_holds,
            exact_first_term_ratio: format_exact(&v.exact_first_term_ratio),
            exact_first_term_holds: v.exact_first_term_holds,
            alternating_term: format_exact(&v.alternating_term),
            in_claimed_range: v.in_claimed_range,
            first_term_conflict: v.first_term_conflict,
        }
    }
}
