//! The closed set of hate-target categories and the bundled target labels.
//!
//! Nine named categories plus `Other`, the fallback for anything without an
//! explicit label. The bundled category map ships as an embedded data file in
//! the same tab-separated format the loader accepts, so it doubles as a
//! starting point for user-maintained maps.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A hate-target category. `Other` is the fallback for unlabeled targets.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Category {
    Race,
    Behavior,
    Physical,
    SexualOrientation,
    Class,
    Gender,
    Ethnicity,
    Disability,
    Religion,
    Other,
}

impl Category {
    /// All ten categories, in canonical order.
    pub const ALL: [Category; 10] = [
        Category::Race,
        Category::Behavior,
        Category::Physical,
        Category::SexualOrientation,
        Category::Class,
        Category::Gender,
        Category::Ethnicity,
        Category::Disability,
        Category::Religion,
        Category::Other,
    ];

    /// Canonical name as used in data files and JSON.
    pub fn name(self) -> &'static str {
        match self {
            Category::Race => "Race",
            Category::Behavior => "Behavior",
            Category::Physical => "Physical",
            Category::SexualOrientation => "SexualOrientation",
            Category::Class => "Class",
            Category::Gender => "Gender",
            Category::Ethnicity => "Ethnicity",
            Category::Disability => "Disability",
            Category::Religion => "Religion",
            Category::Other => "Other",
        }
    }

    /// Human-readable name for report rendering.
    pub fn display_name(self) -> &'static str {
        match self {
            Category::SexualOrientation => "Sexual orientation",
            other => other.name(),
        }
    }

    /// Parse a category name. Case-insensitive; spaces, hyphens and
    /// underscores are ignored, so `sexual orientation`, `Sexual_Orientation`
    /// and `SexualOrientation` all parse to the same variant.
    pub fn parse(s: &str) -> Option<Category> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, ' ' | '-' | '_'))
            .flat_map(|c| c.to_lowercase())
            .collect();
        Category::ALL
            .iter()
            .copied()
            .find(|c| c.name().to_lowercase() == key)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The bundled default category map, in the loader's tab-separated format.
pub const DEFAULT_CATEGORY_MAP: &str = include_str!("../data/lexicons/categories.tsv");
