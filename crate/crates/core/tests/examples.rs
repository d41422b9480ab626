//! Every example must run to completion.

#[path = "../examples/sequence_model.rs"]
mod sequence_model;

#[test]
fn sequence_model_runs() {
    sequence_model::main().unwrap();
}

#[path = "../examples/trajectory_roundtrip.rs"]
mod trajectory_roundtrip;

#[test]
fn trajectory_roundtrip_runs() {
    trajectory_roundtrip::main().unwrap();
}

#[path = "../examples/plugin_vs_bayes.rs"]
mod plugin_vs_bayes;

#[test]
fn plugin_vs_bayes_runs() {
    plugin_vs_bayes::main().unwrap();
}

#[path = "../examples/knn_curse.rs"]
mod knn_curse;

#[test]
fn knn_curse_runs() {
    knn_curse::main().unwrap();
}

#[path = "../examples/margin_sandwich.rs"]
mod margin_sandwich;

#[test]
fn margin_sandwich_runs() {
    margin_sandwich::main().unwrap();
}

#[path = "../examples/rate_curve.rs"]
mod rate_curve;

#[test]
fn rate_curve_runs() {
    rate_curve::main().unwrap();
}

#[path = "../examples/lower_bound.rs"]
mod lower_bound;

#[test]
fn lower_bound_runs() {
    lower_bound::main().unwrap();
}
