use std::fmt;

use serde::{Deserialize, Serialize};

/// The labeled statements a bound or verdict can be attributed to.
///
/// Every report carries exactly one of these tags; the string forms are part
/// of the JSON output and must stay stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Citation {
    #[serde(rename = "Ineq. Lminmax")]
    LangerGap,
    #[serde(rename = "Ineq. InsDIFrob")]
    SunPushforward,
    #[serde(rename = "Theorem Tl2")]
    TheoremTl2,
    #[serde(rename = "Theorem InstabTl")]
    TheoremInstabTl,
    #[serde(rename = "Prop. Tensor")]
    PropTensor,
    #[serde(rename = "Theorem Thm:DiIm-")]
    TheoremDiImMinus,
    #[serde(rename = "Theorem InstabDirIm")]
    TheoremInstabDirIm,
    #[serde(rename = "Prop. FroDirIm")]
    PropFroDirIm,
    #[serde(rename = "Prop. SemiStabT^l")]
    PropSemiStabTl,
    #[serde(rename = "Prop. BxZx0")]
    PropBxZx0,
    #[serde(rename = "Lemma BxZx")]
    LemmaBxZx,
    #[serde(rename = "Prop. InstZiX")]
    PropInstZiX,
    #[serde(rename = "Prop. BnX")]
    PropBnX,
    #[serde(rename = "Mehta-Ramanathan")]
    MehtaRamanathan,
}

impl Citation {
    pub const ALL: [Citation; 14] = [
        Citation::LangerGap,
        Citation::SunPushforward,
        Citation::TheoremTl2,
        Citation::TheoremInstabTl,
        Citation::PropTensor,
        Citation::TheoremDiImMinus,
        Citation::TheoremInstabDirIm,
        Citation::PropFroDirIm,
        Citation::PropSemiStabTl,
        Citation::PropBxZx0,
        Citation::LemmaBxZx,
        Citation::PropInstZiX,
        Citation::PropBnX,
        Citation::MehtaRamanathan,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Citation::LangerGap => "Ineq. Lminmax",
            Citation::SunPushforward => "Ineq. InsDIFrob",
            Citation::TheoremTl2 => "Theorem Tl2",
            Citation::TheoremInstabTl => "Theorem InstabTl",
            Citation::PropTensor => "Prop. Tensor",
            Citation::TheoremDiImMinus => "Theorem Thm:DiIm-",
            Citation::TheoremInstabDirIm => "Theorem InstabDirIm",
            Citation::PropFroDirIm => "Prop. FroDirIm",
            Citation::PropSemiStabTl => "Prop. SemiStabT^l",
            Citation::PropBxZx0 => "Prop. BxZx0",
            Citation::LemmaBxZx => "Lemma BxZx",
            Citation::PropInstZiX => "Prop. InstZiX",
            Citation::PropBnX => "Prop. BnX",
            Citation::MehtaRamanathan => "Mehta-Ramanathan",
        }
    }
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_tag_matches_display() {
        for c in Citation::ALL {
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(json, format!("\"{}\"", c.tag()));
            let back: Citation = serde_json::from_str(&json).unwrap();
            assert_eq!(back, c);
        }
    }
}
