//! Reference evaluations for tests, written term by term from the model
//! definitions and sharing no code with the crate's composition routines.
#![allow(dead_code)]

/// `(lambda_correct, lambda_noise)` per topic.
pub type Rates = Vec<(f64, f64)>;

pub fn shared(rates: &Rates, window: f64, rho: &[Vec<f64>]) -> f64 {
    let pooled: f64 = rates.iter().map(|(c, n)| c + n).sum();
    let decay = (-pooled * window).exp();
    let mut own = 0.0;
    for &(_, noise) in rates {
        own += decay * noise / pooled;
    }
    let mut cross = 0.0;
    for (i, row) in rho.iter().enumerate() {
        for (j, &(_, noise)) in rates.iter().enumerate() {
            if j != i {
                cross += row[j] * decay * noise / pooled;
            }
        }
    }
    (1.0 - decay) * (1.0 - (own + cross))
}

pub fn separate(rates: &Rates, windows: &[f64], rho: &[Vec<f64>]) -> f64 {
    let mut product = 1.0;
    for i in 0..rates.len() {
        let total_i = rates[i].0 + rates[i].1;
        let decay_i = (-total_i * windows[i]).exp();
        let mut cross = 0.0;
        for j in 0..rates.len() {
            if j != i {
                let total_j = rates[j].0 + rates[j].1;
                cross += rho[i][j] * (-total_j * windows[j]).exp() * rates[j].1 / total_j;
            }
        }
        product *= (1.0 - decay_i) * (1.0 - (decay_i * rates[i].1 / total_i + cross));
    }
    product
}

/// Values produced by `tests/oracle/closed_forms.py` (50-digit mpmath),
/// rounded to 17 significant digits.
pub mod frozen {
    #![allow(clippy::excessive_precision, clippy::approx_constant)]

    pub const EXP_NEG_1: f64 = 0.36787944117144232;
    pub const EXP_NEG_4: f64 = 0.018315638888734180;
    pub const NOISE_AFTER_CORRECT_HALF_M2: f64 = 0.067667641618306346;
    pub const NOISE_IMPACT_SEPARATE_SYM: f64 = 0.087967934103798250;
    pub const RCI_SHARED_SYM: f64 = 0.96999724654172524;
    pub const RCI_SEPARATE_SYM: f64 = 0.62189303229045083;
    pub const SIMPLIFIED_SHARED_SYM: f64 = 0.97134575976128761;
    pub const SIMPLIFIED_SEPARATE_SYM: f64 = 0.62189303229045083;
    pub const RCI_RATIO_SYM: f64 = 0.64112865733139953;
    pub const SIMPLIFIED_RATIO_SYM: f64 = 0.64023858244183174;
    pub const LN_2: f64 = 0.69314718055994531;
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
