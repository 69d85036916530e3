//! Shared setup for the criterion benches in `benches/`.

use ifc_core::label::{PowersetLabel, TwoPointLabel};
use ifc_core::meta::GenConfig;

pub fn two_point_cfg() -> GenConfig<TwoPointLabel> {
    GenConfig::new(vec![TwoPointLabel::Public, TwoPointLabel::Secret], TwoPointLabel::Public)
}

pub fn powerset_cfg() -> GenConfig<PowersetLabel> {
    let universe: Vec<String> = ["A", "B", "C"].iter().map(|s| s.to_string()).collect();
    GenConfig::new(PowersetLabel::all_subsets(&universe), PowersetLabel::from_names(["A"]))
}
