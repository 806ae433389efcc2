/// Two-sided sign test p-value for `pos` positive and `neg` negative paired
/// differences (ties dropped). Returns 1 when there are no discordant pairs.
pub fn sign_test_p(pos: u64, neg: u64) -> f64 {
    let m = pos + neg;
    if m == 0 {
        return 1.0;
    }
    let k = pos.min(neg);
    // ln P(X <= k) for X ~ Binomial(m, 1/2), accumulated in log space.
    let ln2 = std::f64::consts::LN_2;
    let mut ln_choose = 0.0;
    let mut terms = Vec::with_capacity(k as usize + 1);
    for i in 0..=k {
        if i > 0 {
            ln_choose += ((m - i + 1) as f64).ln() - (i as f64).ln();
        }
        terms.push(ln_choose - m as f64 * ln2);
    }
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_tail = max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln();
    (2.0 * ln_tail.exp()).min(1.0)
}
