use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};

use super::Document;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VenueClass {
    GeneralPurpose,
    DisciplineFocused,
    Other,
}

impl VenueClass {
    pub fn as_str(self) -> &'static str {
        match self {
            VenueClass::GeneralPurpose => "general_purpose",
            VenueClass::DisciplineFocused => "discipline_focused",
            VenueClass::Other => "other",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "general_purpose" => Some(VenueClass::GeneralPurpose),
            "discipline_focused" => Some(VenueClass::DisciplineFocused),
            "other" => Some(VenueClass::Other),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VenueRules {
    /// Venues with fewer foreground documents are `Other`.
    pub min_documents: u64,
    /// Share of documents in a single subfield that makes a venue
    /// discipline-focused.
    pub dominance: f64,
}

impl Default for VenueRules {
    fn default() -> Self {
        Self {
            min_documents: 800,
            dominance: 0.8,
        }
    }
}

/// Per-venue document and subfield counts over foreground documents.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VenueTally {
    venues: BTreeMap<String, (u64, BTreeMap<String, u64>)>,
    subfields: BTreeSet<String>,
}

impl VenueTally {
    pub fn add(&mut self, doc: &Document) {
        if doc.is_background() {
            return;
        }
        self.subfields.extend(doc.subfields.iter().cloned());
        let Some(venue) = &doc.venue else { return };
        let (n, per_subfield) = self.venues.entry(venue.clone()).or_default();
        *n += 1;
        let distinct: BTreeSet<&String> = doc.subfields.iter().collect();
        for s in distinct {
            *per_subfield.entry(s.clone()).or_default() += 1;
        }
    }

    pub fn documents(&self, venue: &str) -> u64 {
        self.venues.get(venue).map_or(0, |(n, _)| *n)
    }

    fn dominant_share(&self, venue: &str) -> f64 {
        match self.venues.get(venue) {
            Some((n, per)) if *n > 0 => per.values().copied().max().unwrap_or(0) as f64 / *n as f64,
            _ => 0.0,
        }
    }
}

impl<'d> FromIterator<&'d Document> for VenueTally {
    fn from_iter<I: IntoIterator<Item = &'d Document>>(iter: I) -> Self {
        let mut tally = VenueTally::default();
        for doc in iter {
            tally.add(doc);
        }
        tally
    }
}

/// Classifies every venue seen in `tally`.
///
/// The general-purpose list wins over the discipline rules. A venue is
/// discipline-focused when one subfield covers at least `rules.dominance` of
/// its documents or when its name contains a subfield name (both compared
/// case-insensitively).
pub fn classify_venues(
    tally: &VenueTally,
    general_purpose: &BTreeSet<String>,
    rules: &VenueRules,
) -> BTreeMap<String, VenueClass> {
    let general: BTreeSet<String> = general_purpose.iter().map(|v| v.to_lowercase()).collect();
    let subfields: BTreeSet<String> = tally
        .subfields
        .iter()
        .map(|s| s.to_lowercase())
        .filter(|s| !s.is_empty())
        .collect();

    tally
        .venues
        .iter()
        .map(|(venue, (n, _))| {
            let lowered = venue.to_lowercase();
            let class = if *n < rules.min_documents {
                VenueClass::Other
            } else if general.contains(&lowered) {
                VenueClass::GeneralPurpose
            } else if tally.dominant_share(venue) >= rules.dominance
                || subfields.iter().any(|s| lowered.contains(s.as_str()))
            {
                VenueClass::DisciplineFocused
            } else {
                VenueClass::Other
            };
            (venue.to_string(), class)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec::Vec;

    fn docs(venue: &str, subfields: &[&str]) -> Vec<Document> {
        subfields
            .iter()
            .enumerate()
            .map(|(i, s)| {
                Document::new(format!("{venue}-{i}"), "x")
                    .with_subfields([*s])
                    .with_venue(venue)
            })
            .collect()
    }

    fn rules(floor: u64) -> VenueRules {
        VenueRules {
            min_documents: floor,
            ..VenueRules::default()
        }
    }

    #[test]
    fn dominant_subfield() {
        let mut subs = ["agronomy"; 10];
        subs[9] = "ecology";
        let tally: VenueTally = docs("Field Crops", &subs).iter().collect();
        let classes = classify_venues(&tally, &BTreeSet::new(), &rules(5));
        assert_eq!(classes["Field Crops"], VenueClass::DisciplineFocused);
    }

    #[test]
    fn name_contains_subfield() {
        let mut all = docs(
            "Agronomy Journal",
            &["agronomy", "ecology", "botany", "ecology", "botany"],
        );
        all.extend(docs("Other Venue", &["agronomy"]));
        let tally: VenueTally = all.iter().collect();
        let classes = classify_venues(&tally, &BTreeSet::new(), &rules(5));
        assert_eq!(classes["Agronomy Journal"], VenueClass::DisciplineFocused);
    }

    #[test]
    fn general_list_wins() {
        let tally: VenueTally = docs("Nature", &["genetics"; 6]).iter().collect();
        let general = ["nature".to_string()].into_iter().collect();
        let classes = classify_venues(&tally, &general, &rules(5));
        assert_eq!(classes["Nature"], VenueClass::GeneralPurpose);
    }

    #[test]
    fn below_floor_is_other() {
        let tally: VenueTally = docs("Tiny", &["genetics"; 3]).iter().collect();
        let classes = classify_venues(&tally, &BTreeSet::new(), &rules(5));
        assert_eq!(classes["Tiny"], VenueClass::Other);
    }

    #[test]
    fn mixed_venue_is_other() {
        let tally: VenueTally = docs("Mixed", &["a", "b", "c", "a", "b"]).iter().collect();
        let classes = classify_venues(&tally, &BTreeSet::new(), &rules(5));
        assert_eq!(classes["Mixed"], VenueClass::Other);
    }
}
