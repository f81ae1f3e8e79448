//! Gauss–Jacobi rules on [0, 1] for the weight (1−u)^a u^b (Golub–Welsch).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{domain, Result};
use crate::special::beta;

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRule {
    pub a_exp: f64,
    pub b_exp: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl JacobiRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Σ wᵢ f(uᵢ) ≈ ∫₀¹ (1−u)^a u^b f(u) du
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&u, &w)| w * f(u)).sum()
    }
}

/// Builds the `order`-point rule, exact for ∫₀¹ (1−u)^a u^b P(u) du with
/// deg P ≤ 2·order − 1.
pub fn gauss_jacobi_rule(a_exp: f64, b_exp: f64, order: usize) -> Result<JacobiRule> {
    if !(a_exp > -1.0 && b_exp > -1.0) || !a_exp.is_finite() || !b_exp.is_finite() {
        return Err(domain(format!("Jacobi exponents must exceed -1, got ({a_exp}, {b_exp})")));
    }
    if order == 0 {
        return Err(domain("a quadrature rule needs at least one node"));
    }
    let (a, b) = (a_exp, b_exp);
    let mass = beta(a + 1.0, b + 1.0)?;
    let ab = a + b;

    // Monic Jacobi recurrence on [−1, 1] with weight (1−t)^a (1+t)^b.
    let mut jm = DMatrix::<f64>::zeros(order, order);
    for k in 0..order {
        let diag = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            let s = 2.0 * k as f64 + ab;
            (b * b - a * a) / (s * (s + 2.0))
        };
        jm[(k, k)] = diag;
        if k + 1 < order {
            let n = (k + 1) as f64;
            let s = 2.0 * n + ab;
            let off2 = if n == 1.0 {
                // Closed form; avoids 0/0 when a + b = −1.
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * n * (n + a) * (n + b) * (n + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            let off = off2.sqrt();
            jm[(k, k + 1)] = off;
            jm[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(jm);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| {
            let t = eig.eigenvalues[i];
            let v0 = eig.eigenvectors[(0, i)];
            ((1.0 + t) / 2.0, mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(JacobiRule {
        a_exp,
        b_exp,
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

type RuleKey = (u64, u64, usize);

fn cache() -> &'static Mutex<HashMap<RuleKey, Arc<JacobiRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<JacobiRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Process-wide memoized [`gauss_jacobi_rule`].
pub fn cached_rule(a_exp: f64, b_exp: f64, order: usize) -> Result<Arc<JacobiRule>> {
    let key = (a_exp.to_bits(), b_exp.to_bits(), order);
    if let Some(rule) = cache().lock().expect("rule cache poisoned").get(&key) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(gauss_jacobi_rule(a_exp, b_exp, order)?);
    cache().lock().expect("rule cache poisoned").insert(key, rule.clone());
    Ok(rule)
}
