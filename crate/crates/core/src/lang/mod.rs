//! Automata, ordered expressions, grammars and their enumeration.

pub mod cfg;
pub mod dfa;
pub mod enumerate;
pub mod expr;

pub use cfg::{
    balanced_grammar, balanced_zero_grammar, naive_balanced_grammar, Cfg, Rule, Symbol,
    MAX_GRAMMAR_ZEROS,
};
pub use dfa::{
    concat_singleton, concat_star, ordered_union, repeatable_subsets, split_by_final, Dfa, State,
};
pub use enumerate::{enumerate_cfg, enumerate_dfa, enumerate_expr, enumerate_language, LanguageSource};
pub use expr::{
    compile_expr, compile_expr_with, dfa_to_expr, ideal_to_expr, regular_automaton, OrderedExpr,
};
