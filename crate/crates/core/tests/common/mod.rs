#![allow(dead_code)]

use serde::Deserialize;

pub const CORPUS: &str = include_str!("../golden/corpus.toml");

#[derive(Debug, Deserialize)]
pub struct Corpus {
    #[serde(rename = "case")]
    pub cases: Vec<Case>,
}

#[derive(Debug, Deserialize)]
pub struct Case {
    pub text: String,
    pub tokens: Vec<String>,
    pub tags: Vec<String>,
    pub retained: Vec<String>,
    pub roots: Vec<String>,
    pub glosses: Vec<String>,
}

pub fn corpus() -> Vec<Case> {
    toml::from_str::<Corpus>(CORPUS).expect("corpus parses").cases
}
