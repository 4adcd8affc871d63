//! Bracket series and the production rules that build them.

mod rules;
mod series;

pub use rules::{
    complexity_index, lemma_rescale, rescale_in_series, rule_p1_integrate, rule_p2_multinomial, series_product,
    FreshSupply, MultinomialTerm,
};
pub use series::{Bracket, BracketSeries};
