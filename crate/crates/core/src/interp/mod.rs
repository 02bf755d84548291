//! Computational types, the Dialectica translation and definition contexts.

mod context;
mod translate;
mod types;

pub use context::{
    app_beta, compose_contexts, fst_s, hole_var, partial_apply, plug, proj_fun, snd_s, DefContext,
    Side,
};
pub use translate::{
    characteristic_raw, characteristic_term, formula_to_bool, impb, t_or, t_or_apply, translate,
    translate_raw,
};
pub use types::{
    tau, tau_marked_raw, tau_minus_raw, tau_plus_raw, tau_star_raw, CompTypes, Interp,
};

#[cfg(test)]
mod tests;
