use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tsv;

/// The 17 relation categories that carry a weight. Inverse relations such as
/// hypernym and hyponym share one category, and hence one weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeCategory {
    HypernymHyponym,
    Nominalization,
    CategoryDomain,
    PartMeronymHolonym,
    RegionDomain,
    Similar,
    UsageDomain,
    MemberMeronymHolonym,
    Antonym,
    VerbGroup,
    AlsoSee,
    Attribute,
    Entailment,
    Cause,
    SubstanceMeronymHolonym,
    Derived,
    ParticipleOf,
}

impl EdgeCategory {
    pub const ALL: [EdgeCategory; 17] = [
        EdgeCategory::HypernymHyponym,
        EdgeCategory::Nominalization,
        EdgeCategory::CategoryDomain,
        EdgeCategory::PartMeronymHolonym,
        EdgeCategory::RegionDomain,
        EdgeCategory::Similar,
        EdgeCategory::UsageDomain,
        EdgeCategory::MemberMeronymHolonym,
        EdgeCategory::Antonym,
        EdgeCategory::VerbGroup,
        EdgeCategory::AlsoSee,
        EdgeCategory::Attribute,
        EdgeCategory::Entailment,
        EdgeCategory::Cause,
        EdgeCategory::SubstanceMeronymHolonym,
        EdgeCategory::Derived,
        EdgeCategory::ParticipleOf,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            EdgeCategory::HypernymHyponym => "hypernym/hyponym",
            EdgeCategory::Nominalization => "nominalization",
            EdgeCategory::CategoryDomain => "category_domain",
            EdgeCategory::PartMeronymHolonym => "part_meronym/holonym",
            EdgeCategory::RegionDomain => "region_domain",
            EdgeCategory::Similar => "similar",
            EdgeCategory::UsageDomain => "usage_domain",
            EdgeCategory::MemberMeronymHolonym => "member_meronym/holonym",
            EdgeCategory::Antonym => "antonym",
            EdgeCategory::VerbGroup => "verb_group",
            EdgeCategory::AlsoSee => "also_see",
            EdgeCategory::Attribute => "attribute",
            EdgeCategory::Entailment => "entailment",
            EdgeCategory::Cause => "cause",
            EdgeCategory::SubstanceMeronymHolonym => "substance_meronym/holonym",
            EdgeCategory::Derived => "derived",
            EdgeCategory::ParticipleOf => "participle_of",
        }
    }

    /// Relative frequency of the relation in WordNet 2.0.
    pub fn default_weight(self) -> f64 {
        match self {
            EdgeCategory::HypernymHyponym => 0.61,
            EdgeCategory::Nominalization => 0.147,
            EdgeCategory::CategoryDomain => 0.094,
            EdgeCategory::PartMeronymHolonym => 0.0367,
            EdgeCategory::RegionDomain => 0.0238,
            EdgeCategory::Similar => 0.02,
            EdgeCategory::UsageDomain => 0.016,
            EdgeCategory::MemberMeronymHolonym => 0.014,
            EdgeCategory::Antonym => 0.0105,
            EdgeCategory::VerbGroup => 0.01,
            EdgeCategory::AlsoSee => 0.0091,
            EdgeCategory::Attribute => 0.00414,
            EdgeCategory::Entailment => 0.00195,
            EdgeCategory::Cause => 0.00158,
            EdgeCategory::SubstanceMeronymHolonym => 0.00089,
            EdgeCategory::Derived => 0.0003,
            EdgeCategory::ParticipleOf => 3.4e-6,
        }
    }
}

impl fmt::Display for EdgeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EdgeCategory {
    type Err = Error;

    /// Accepts a category name (`part_meronym/holonym`) or either of its
    /// directional edge names (`part_meronym`, `part_holonym`).
    fn from_str(s: &str) -> Result<Self> {
        if let Some(c) = EdgeCategory::ALL.iter().find(|c| c.name() == s) {
            return Ok(*c);
        }
        s.parse::<EdgeKind>().map(EdgeKind::category)
    }
}

/// A directed edge label as it appears in an edges file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeKind {
    Hypernym,
    Hyponym,
    Nominalization,
    CategoryDomain,
    PartMeronym,
    PartHolonym,
    RegionDomain,
    Similar,
    UsageDomain,
    MemberMeronym,
    MemberHolonym,
    Antonym,
    VerbGroup,
    AlsoSee,
    Attribute,
    Entailment,
    Cause,
    SubstanceMeronym,
    SubstanceHolonym,
    Derived,
    ParticipleOf,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 21] = [
        EdgeKind::Hypernym,
        EdgeKind::Hyponym,
        EdgeKind::Nominalization,
        EdgeKind::CategoryDomain,
        EdgeKind::PartMeronym,
        EdgeKind::PartHolonym,
        EdgeKind::RegionDomain,
        EdgeKind::Similar,
        EdgeKind::UsageDomain,
        EdgeKind::MemberMeronym,
        EdgeKind::MemberHolonym,
        EdgeKind::Antonym,
        EdgeKind::VerbGroup,
        EdgeKind::AlsoSee,
        EdgeKind::Attribute,
        EdgeKind::Entailment,
        EdgeKind::Cause,
        EdgeKind::SubstanceMeronym,
        EdgeKind::SubstanceHolonym,
        EdgeKind::Derived,
        EdgeKind::ParticipleOf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::Hypernym => "hypernym",
            EdgeKind::Hyponym => "hyponym",
            EdgeKind::Nominalization => "nominalization",
            EdgeKind::CategoryDomain => "category_domain",
            EdgeKind::PartMeronym => "part_meronym",
            EdgeKind::PartHolonym => "part_holonym",
            EdgeKind::RegionDomain => "region_domain",
            EdgeKind::Similar => "similar",
            EdgeKind::UsageDomain => "usage_domain",
            EdgeKind::MemberMeronym => "member_meronym",
            EdgeKind::MemberHolonym => "member_holonym",
            EdgeKind::Antonym => "antonym",
            EdgeKind::VerbGroup => "verb_group",
            EdgeKind::AlsoSee => "also_see",
            EdgeKind::Attribute => "attribute",
            EdgeKind::Entailment => "entailment",
            EdgeKind::Cause => "cause",
            EdgeKind::SubstanceMeronym => "substance_meronym",
            EdgeKind::SubstanceHolonym => "substance_holonym",
            EdgeKind::Derived => "derived",
            EdgeKind::ParticipleOf => "participle_of",
        }
    }

    pub fn category(self) -> EdgeCategory {
        use EdgeCategory as C;
        match self {
            EdgeKind::Hypernym | EdgeKind::Hyponym => C::HypernymHyponym,
            EdgeKind::Nominalization => C::Nominalization,
            EdgeKind::CategoryDomain => C::CategoryDomain,
            EdgeKind::PartMeronym | EdgeKind::PartHolonym => C::PartMeronymHolonym,
            EdgeKind::RegionDomain => C::RegionDomain,
            EdgeKind::Similar => C::Similar,
            EdgeKind::UsageDomain => C::UsageDomain,
            EdgeKind::MemberMeronym | EdgeKind::MemberHolonym => C::MemberMeronymHolonym,
            EdgeKind::Antonym => C::Antonym,
            EdgeKind::VerbGroup => C::VerbGroup,
            EdgeKind::AlsoSee => C::AlsoSee,
            EdgeKind::Attribute => C::Attribute,
            EdgeKind::Entailment => C::Entailment,
            EdgeKind::Cause => C::Cause,
            EdgeKind::SubstanceMeronym | EdgeKind::SubstanceHolonym => C::SubstanceMeronymHolonym,
            EdgeKind::Derived => C::Derived,
            EdgeKind::ParticipleOf => C::ParticipleOf,
        }
    }

    /// The label of the reverse edge. Relations without a named counterpart
    /// are their own inverse.
    pub fn inverse(self) -> EdgeKind {
        match self {
            EdgeKind::Hypernym => EdgeKind::Hyponym,
            EdgeKind::Hyponym => EdgeKind::Hypernym,
            EdgeKind::PartMeronym => EdgeKind::PartHolonym,
            EdgeKind::PartHolonym => EdgeKind::PartMeronym,
            EdgeKind::MemberMeronym => EdgeKind::MemberHolonym,
            EdgeKind::MemberHolonym => EdgeKind::MemberMeronym,
            EdgeKind::SubstanceMeronym => EdgeKind::SubstanceHolonym,
            EdgeKind::SubstanceHolonym => EdgeKind::SubstanceMeronym,
            other => other,
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EdgeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EdgeKind::ALL
            .iter()
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| Error::UnknownEdgeType(s.to_string()))
    }
}

/// Weight per relation category, each strictly inside (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightConfig {
    weights: [f64; 17],
}

impl Default for WeightConfig {
    fn default() -> Self {
        let mut weights = [0.0; 17];
        for c in EdgeCategory::ALL {
            weights[c.index()] = c.default_weight();
        }
        WeightConfig { weights }
    }
}

impl WeightConfig {
    pub fn category(&self, category: EdgeCategory) -> f64 {
        self.weights[category.index()]
    }

    pub fn get(&self, kind: EdgeKind) -> f64 {
        self.category(kind.category())
    }

    pub fn set(&mut self, category: EdgeCategory, weight: f64) -> Result<()> {
        if !(weight > 0.0 && weight < 1.0) {
            return Err(Error::WeightOutOfRange {
                name: category.name().to_string(),
                value: weight,
            });
        }
        self.weights[category.index()] = weight;
        Ok(())
    }

    /// Applies an overrides file (`edge_type_name<TAB>weight`) on top of the
    /// defaults.
    pub fn from_overrides(path: &Path) -> Result<Self> {
        let mut cfg = WeightConfig::default();
        for row in tsv::read_rows(path, false)? {
            row.expect_fields(path, 2)?;
            let category: EdgeCategory = row.fields[0].parse()?;
            let weight = row.parse_f64(path, 1)?;
            cfg.set(category, weight).map_err(|_| Error::WeightOutOfRange {
                name: row.fields[0].clone(),
                value: weight,
            })?;
        }
        Ok(cfg)
    }

    /// Category name to weight, in table order.
    pub fn entries(&self) -> impl Iterator<Item = (EdgeCategory, f64)> + '_ {
        EdgeCategory::ALL.iter().map(|c| (*c, self.category(*c)))
    }

    pub fn to_map(&self) -> BTreeMap<&'static str, f64> {
        self.entries().map(|(c, w)| (c.name(), w)).collect()
    }

    /// Largest configured weight.
    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    /// TSV dump, one `category<TAB>weight` line per category.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (c, w) in self.entries() {
            out.push_str(&format!("{}\t{}\n", c.name(), w));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_is_involution_and_shares_category() {
        for k in EdgeKind::ALL {
            assert_eq!(k.inverse().inverse(), k);
            assert_eq!(k.inverse().category(), k.category());
        }
    }

    #[test]
    fn every_category_has_a_kind() {
        for c in EdgeCategory::ALL {
            assert!(EdgeKind::ALL.iter().any(|k| k.category() == c), "{c}");
        }
    }

    #[test]
    fn default_weights_form_a_sub_distribution() {
        let cfg = WeightConfig::default();
        let total: f64 = cfg.entries().map(|(_, w)| w).sum();
        assert!(total > 0.0 && total < 1.0);
        assert!(cfg.entries().all(|(_, w)| w > 0.0 && w < 1.0));
        assert_eq!(cfg.get(EdgeKind::Hypernym), 0.61);
        assert_eq!(cfg.get(EdgeKind::PartHolonym), 0.0367);
        assert_eq!(cfg.get(EdgeKind::ParticipleOf), 3.4e-6);
    }

    #[test]
    fn parse_names() {
        assert_eq!("part_meronym".parse::<EdgeKind>().unwrap(), EdgeKind::PartMeronym);
        assert!("is_a".parse::<EdgeKind>().is_err());
        assert_eq!(
            "hyponym".parse::<EdgeCategory>().unwrap(),
            EdgeCategory::HypernymHyponym
        );
        assert_eq!(
            "member_meronym/holonym".parse::<EdgeCategory>().unwrap(),
            EdgeCategory::MemberMeronymHolonym
        );
    }

    #[test]
    fn rejects_out_of_range() {
        let mut cfg = WeightConfig::default();
        for bad in [0.0, 1.0, 1.2, -0.1, f64::NAN] {
            assert!(cfg.set(EdgeCategory::Cause, bad).is_err());
        }
    }
}
