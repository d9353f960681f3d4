//! Evaluation metrics and training losses.

mod evaluate;
mod functions;

pub use evaluate::{
    evaluate, Aligned, Level, Metric, MetricRegistry, MetricReport, DEFAULT_METRICS,
};
pub use functions::{
    batch_loss, kendall_tau, kendall_tau_b, kl_divergence, macro_f1, mse_loss, pearson_r, rmse,
    top1_accuracy, LossTerm,
};
