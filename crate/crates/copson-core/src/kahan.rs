//! Compensated summation for long series.

/// Kahan-Babuska (neumaier) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sum of a slice with compensation.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = KahanSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Prefix sums S_n = sum_{i<=n} v_i, compensated per step.
pub fn prefix_sums(values: &[f64]) -> Vec<f64> {
    let mut acc = KahanSum::new();
    let mut out = Vec::with_capacity(values.len());
    for &v in values {
        acc.add(v);
        out.push(acc.value());
    }
    out
}

/// Suffix sums T_n = sum_{i>=n} v_i, computed in a single reverse pass.
pub fn suffix_sums(values: &[f64]) -> Vec<f64> {
    let mut acc = KahanSum::new();
    let mut out = vec![0.0; values.len()];
    for i in (0..values.len()).rev() {
        acc.add(values[i]);
        out[i] = acc.value();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensates_harmonic_tail() {
        // 1e8 tiny terms after a large head; naive summation loses them.
        let mut acc = KahanSum::new();
        acc.add(1e16);
        for _ in 0..1000 {
            acc.add(1.0);
        }
        assert_eq!(acc.value(), 1e16 + 1000.0);
    }

    #[test]
    fn prefix_and_suffix_agree_with_total() {
        let v: Vec<f64> = (1..=100).map(|n| 1.0 / n as f64).collect();
        let p = prefix_sums(&v);
        let s = suffix_sums(&v);
        assert!((p[99] - s[0]).abs() < 1e-14);
        // S_n - S_{n-1} recovers each term.
        for n in 1..100 {
            assert!((p[n] - p[n - 1] - v[n]).abs() <= 1e-15 * p[n].abs());
        }
    }
}
