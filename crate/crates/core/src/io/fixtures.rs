use super::{parse_model, IoError};
use crate::model::QDtmc;

pub const FIXTURE_NAMES: [&str; 5] = ["m1", "m2", "m3", "m4", "m5"];

pub fn fixture_source(name: &str) -> Option<&'static str> {
    Some(match name {
        "m1" => include_str!("../../fixtures/m1.qdtmc"),
        "m2" => include_str!("../../fixtures/m2.qdtmc"),
        "m3" => include_str!("../../fixtures/m3.qdtmc"),
        "m4" => include_str!("../../fixtures/m4.qdtmc"),
        "m5" => include_str!("../../fixtures/m5.qdtmc"),
        _ => return None,
    })
}

pub fn fixture_description(name: &str) -> Option<&'static str> {
    Some(match name {
        "m1" => "7 states, props p q; few unknowns",
        "m2" => "same chain as m1, more unknowns",
        "m3" => "16 states, props p q r; few unknowns",
        "m4" => "same chain as m3, more unknowns",
        "m5" => "code snippet with an unverified call; props p q r",
        _ => return None,
    })
}

pub fn fixture(name: &str) -> Result<QDtmc, IoError> {
    let text = fixture_source(name).ok_or_else(|| IoError::UnknownFixture(name.to_string()))?;
    parse_model(text)
}
