//! Exact rational generating functions and the ways to produce them.

pub mod cfg_count;
pub mod egf;
pub mod fit;
pub mod rational;
pub mod transfer;

pub use cfg_count::{cfg_count, multinomial_series};
pub use egf::{egf_agrees, egf_convert, EgfForm};
pub use fit::{fit_rational, FIT_MARGIN};
pub use rational::{expand, linear_form, series_equal, univariate, CoeffTable, Factor, RationalSeries};
pub use transfer::{dfa_series, NormedAlphabet};
