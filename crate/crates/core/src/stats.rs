//! Streaming sample statistics and Kolmogorov–Smirnov distances.

/// Histogram with fixed edges plus underflow/overflow buckets, so counts
/// always sum to the number of observations.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
    underflow: u64,
    overflow: u64,
}

impl Histogram {
    pub fn new(edges: Vec<f64>) -> Self {
        assert!(edges.len() >= 2, "need at least one bin");
        assert!(edges.windows(2).all(|w| w[0] < w[1]), "edges must increase");
        let bins = edges.len() - 1;
        Self {
            edges,
            counts: vec![0; bins],
            underflow: 0,
            overflow: 0,
        }
    }

    pub fn push(&mut self, x: f64) {
        if x < self.edges[0] {
            self.underflow += 1;
            return;
        }
        if x >= *self.edges.last().unwrap() {
            self.overflow += 1;
            return;
        }
        // binary search for the bin
        let idx = match self
            .edges
            .binary_search_by(|e| e.partial_cmp(&x).unwrap())
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let idx = idx.min(self.counts.len() - 1);
        self.counts[idx] += 1;
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn underflow(&self) -> u64 {
        self.underflow
    }

    pub fn overflow(&self) -> u64 {
        self.overflow
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow
    }

    fn merge(&mut self, other: &Histogram) {
        assert_eq!(self.edges, other.edges, "histogram edges must match");
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
    }
}

/// Default retained-sample cap; beyond it KS falls back to the binned
/// approximation.
pub const RETAIN_CAP: usize = 100_000;

/// Streaming mean/variance/min/max with optional histogram and a capped
/// retained-sample buffer. Merging is commutative and associative up to
/// floating-point roundoff.
#[derive(Clone, Debug)]
pub struct SampleStats {
    count: u64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
    hist: Option<Histogram>,
    retained: Vec<f64>,
    retain_cap: usize,
}

impl SampleStats {
    pub fn new(retain_cap: usize) -> Self {
        Self {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            hist: None,
            retained: Vec::new(),
            retain_cap,
        }
    }

    pub fn with_histogram(edges: Vec<f64>, retain_cap: usize) -> Self {
        let mut s = Self::new(retain_cap);
        s.hist = Some(Histogram::new(edges));
        s
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
        if let Some(h) = &mut self.hist {
            h.push(x);
        }
        if self.retained.len() < self.retain_cap {
            self.retained.push(x);
        }
    }

    pub fn merge(mut self, other: SampleStats) -> SampleStats {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let n1 = self.count as f64;
        let n2 = other.count as f64;
        let n = n1 + n2;
        let delta = other.mean - self.mean;
        self.mean += delta * n2 / n;
        self.m2 += other.m2 + delta * delta * n1 * n2 / n;
        self.count += other.count;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
        match (&mut self.hist, &other.hist) {
            (Some(a), Some(b)) => a.merge(b),
            (None, Some(b)) => self.hist = Some(b.clone()),
            _ => {}
        }
        for &x in &other.retained {
            if self.retained.len() >= self.retain_cap {
                break;
            }
            self.retained.push(x);
        }
        self
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count as f64 - 1.0)
        }
    }

    /// Standard error of the sample mean.
    pub fn se_mean(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn retained(&self) -> &[f64] {
        &self.retained
    }

    /// Whether the retained buffer holds every observation.
    pub fn retained_complete(&self) -> bool {
        self.retained.len() as u64 == self.count
    }

    pub fn histogram(&self) -> Option<&Histogram> {
        self.hist.as_ref()
    }

    /// One-sample KS distance against `cdf`: exact from retained samples
    /// when complete, otherwise the binned (Kuiper-style) approximation from
    /// the histogram.
    pub fn ks_against<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        if self.retained_complete() {
            return ks_one_sample(&self.retained, cdf);
        }
        let h = self
            .hist
            .as_ref()
            .expect("ks_against on truncated retention requires a histogram");
        let n = h.total() as f64;
        let mut cum = h.underflow();
        let mut d: f64 = (h.underflow() as f64 / n - cdf(h.edges()[0])).abs();
        for (i, &c) in h.counts().iter().enumerate() {
            cum += c;
            let e = h.edges()[i + 1];
            d = d.max((cum as f64 / n - cdf(e)).abs());
        }
        d
    }
}

/// Two-sided one-sample Kolmogorov–Smirnov statistic.
pub fn ks_one_sample<F: Fn(f64) -> f64>(xs: &[f64], cdf: F) -> f64 {
    assert!(xs.len() >= 10, "KS needs at least 10 samples");
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n);
        d = d.max((i + 1) as f64 / n - f);
    }
    d
}

/// Two-sample Kolmogorov–Smirnov statistic (sup distance of the ECDFs).
pub fn ks_two_sample(xs: &[f64], ys: &[f64]) -> f64 {
    assert!(!xs.is_empty() && !ys.is_empty());
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut i = 0;
    let mut j = 0;
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let t = a[i].min(b[j]);
        while i < a.len() && a[i] <= t {
            i += 1;
        }
        while j < b.len() && b[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Pearson correlation coefficient of paired samples.
pub fn pearson_correlation(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomStream;

    #[test]
    fn welford_matches_two_pass() {
        let xs = [1.5, -2.0, 0.25, 4.0, 4.0, -1.0];
        let mut s = SampleStats::new(10);
        for &x in &xs {
            s.push(x);
        }
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((s.mean() - mean).abs() < 1e-14);
        assert!((s.variance() - var).abs() < 1e-14);
        assert_eq!(s.min(), -2.0);
        assert_eq!(s.max(), 4.0);
    }

    #[test]
    fn merge_equals_sequential() {
        let mut s = RandomStream::new(2, 2);
        let xs: Vec<f64> = (0..1000).map(|_| s.gaussian()).collect();
        let mut all = SampleStats::new(0);
        for &x in &xs {
            all.push(x);
        }
        let mut a = SampleStats::new(0);
        let mut b = SampleStats::new(0);
        for (i, &x) in xs.iter().enumerate() {
            if i % 3 == 0 {
                a.push(x);
            } else {
                b.push(x);
            }
        }
        let m = a.merge(b);
        assert_eq!(m.count(), all.count());
        assert!((m.mean() - all.mean()).abs() < 1e-12);
        assert!((m.variance() - all.variance()).abs() < 1e-12);
    }

    #[test]
    fn ks_uniform_samples() {
        let mut s = RandomStream::new(77, 0);
        let xs: Vec<f64> = (0..100_000).map(|_| s.uniform()).collect();
        let d = ks_one_sample(&xs, |x| x.clamp(0.0, 1.0));
        assert!(d < 0.006, "{d}");
    }

    #[test]
    fn ks_point_mass_is_deterministic() {
        // the continuous-CDF convention compares F(x_i) against both i/n and
        // (i+1)/n, so a point mass at its own atom yields exactly 1
        let xs = vec![2.0; 16];
        let d1 = ks_one_sample(&xs, |x| if x < 2.0 { 0.0 } else { 1.0 });
        let d2 = ks_one_sample(&xs, |x| if x < 2.0 { 0.0 } else { 1.0 });
        assert_eq!(d1, d2);
        assert_eq!(d1, 1.0);
        let d = ks_one_sample(&xs, |x| if x < 3.0 { 0.0 } else { 1.0 });
        assert_eq!(d, 1.0);
    }

    #[test]
    fn ks_chi2_is_exponential() {
        // chi-square with 2 dof is Exp(mean 2)
        let mut s = RandomStream::new(123, 9);
        let law = crate::rng::ChiLaw::new(2.0).unwrap();
        let xs: Vec<f64> = (0..100_000).map(|_| s.chi(law).powi(2)).collect();
        let d = ks_one_sample(&xs, |x| 1.0 - (-x / 2.0).exp());
        assert!(d < 0.006, "{d}");
    }

    #[test]
    fn two_sample_ks_cases() {
        let xs = vec![1.0, 2.0, 3.0, 4.0];
        assert_eq!(ks_two_sample(&xs, &xs), 0.0);
        let ys = vec![10.0, 11.0, 12.0];
        assert_eq!(ks_two_sample(&xs, &ys), 1.0);
        let mut s = RandomStream::new(5, 1);
        let a: Vec<f64> = (0..10_000).map(|_| s.gaussian()).collect();
        let b: Vec<f64> = (0..10_000).map(|_| s.gaussian()).collect();
        let d = ks_two_sample(&a, &b);
        assert!(d < 0.03, "{d}");
    }

    #[test]
    fn histogram_counts_sum_to_n() {
        let mut s = SampleStats::with_histogram(vec![-1.0, 0.0, 1.0], 4);
        for x in [-2.0, -0.5, 0.5, 0.75, 3.0, 1.0] {
            s.push(x);
        }
        let h = s.histogram().unwrap();
        assert_eq!(h.total(), 6);
        assert_eq!(h.counts(), &[1, 2]);
        assert_eq!(h.underflow(), 1);
        assert_eq!(h.overflow(), 2); // 3.0 and the right-closed edge 1.0
        assert!(!s.retained_complete());
    }

    #[test]
    fn binned_ks_approximates_exact() {
        let mut s = RandomStream::new(31, 4);
        let edges: Vec<f64> = (0..=400).map(|i| i as f64 / 400.0).collect();
        let mut stats = SampleStats::with_histogram(edges, 100);
        let mut xs = Vec::new();
        for _ in 0..50_000 {
            let u = s.uniform();
            stats.push(u);
            xs.push(u);
        }
        let approx = stats.ks_against(|x| x.clamp(0.0, 1.0));
        let exact = ks_one_sample(&xs, |x| x.clamp(0.0, 1.0));
        assert!((approx - exact).abs() < 1.0 / 400.0 + 0.002, "{approx} vs {exact}");
    }

    #[test]
    fn correlation_of_independent_streams() {
        let mut s = RandomStream::new(8, 8);
        let xs: Vec<f64> = (0..50_000).map(|_| s.gaussian()).collect();
        let ys: Vec<f64> = (0..50_000).map(|_| s.gaussian()).collect();
        let r = pearson_correlation(&xs, &ys);
        assert!(r.abs() < 0.015, "{r}");
        let r = pearson_correlation(&xs, &xs);
        assert!((r - 1.0).abs() < 1e-12);
    }
}
